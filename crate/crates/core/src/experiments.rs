//! End-to-end verification harnesses: weighted Heegner periods against
//! Rankin–Selberg central values (the explicit Waldspurger ratio test), the
//! exact finite Fourier identity behind the wide-moment calculation, the
//! diagonal moment, and equidistribution scans of Heegner points.

use crate::abelian::{self, Character};
use crate::hecke::{FieldData, HeckeCharacter, IdealHNF};
use crate::heegner::{self, ExplicitRepresentatives};
use crate::lfun::{self, ArchKind, RSLfunction};
use crate::modforms::{self, Eigenform};
use crate::numerics;
use crate::qforms::Discriminant;
use crate::{Complex64, Error, Result};
use std::sync::Arc;

/// Class-indexed values `v_c = f(z_{Q_c})·conj(Ω(𝔭_c))` and their finite
/// Fourier transform `P(χ) = Σ_c v_c·conj(χ(c))` over the class characters.
#[derive(Debug, Clone)]
pub struct PeriodVector {
    pub field: Arc<FieldData>,
    pub level: i64,
    pub weight: i64,
    /// values indexed by class index
    pub values: Vec<Complex64>,
    /// periods indexed like `abelian::characters(&field.group)`
    pub periods: Vec<Complex64>,
}

impl PeriodVector {
    /// Assemble from class-indexed values; verifies Plancherel
    /// `Σ_χ |P(χ)|² = h·Σ_c |v_c|²` to 1e−10 relative.
    pub fn from_values(field: Arc<FieldData>, level: i64, weight: i64, values: Vec<Complex64>) -> Result<Self> {
        let h = field.h();
        if values.len() != h {
            return Err(Error::Precondition("one value per ideal class required".into()));
        }
        let chars = abelian::characters(&field.group);
        let periods: Vec<Complex64> = chars
            .iter()
            .map(|chi| {
                let mut p = Complex64::new(0.0, 0.0);
                for (c, v) in values.iter().enumerate() {
                    let elem = field.group.tuple_of(field.class_to_elem[c]);
                    p += v * chi.eval(&field.group, &elem).conj();
                }
                p
            })
            .collect();
        let lhs: f64 = periods.iter().map(|p| p.norm_sqr()).sum();
        let rhs: f64 = h as f64 * values.iter().map(|v| v.norm_sqr()).sum::<f64>();
        if (lhs - rhs).abs() > 1e-10 * rhs.max(1e-300) {
            return Err(Error::Integrity(format!(
                "Plancherel violated: Σ|P(χ)|² = {lhs}, h·Σ|v|² = {rhs}"
            )));
        }
        Ok(PeriodVector { field, level, weight, values, periods })
    }

    /// `P(χ)` for the character with the given index.
    pub fn period(&self, chi_index: usize) -> Complex64 {
        self.periods[chi_index]
    }

    /// Conjugate slot: weight `−k`, values conjugated.
    pub fn conj(&self) -> PeriodVector {
        let values: Vec<Complex64> = self.values.iter().map(|v| v.conj()).collect();
        PeriodVector::from_values(self.field.clone(), self.level, -self.weight, values)
            .expect("conjugation preserves Plancherel")
    }

    /// Pointwise product slot: weights add.
    pub fn product(&self, other: &PeriodVector) -> Result<PeriodVector> {
        if self.field.disc != other.field.disc {
            return Err(Error::Precondition("period vectors from different fields".into()));
        }
        let values: Vec<Complex64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        PeriodVector::from_values(self.field.clone(), self.level, self.weight + other.weight, values)
    }
}

/// Weighted Heegner periods of an L²-normalized eigenform.
///
/// Uses the explicit representatives `Q_c = [a·p_c, b_c, c_c]`, evaluates the
/// full complex `y^{k/2}g(z_{Q_c})/‖y^{k/2}g‖` and multiplies by
/// `conj(Ω(𝔭_c))`; the k of the character must match the form's weight in
/// the flagship (k = k_π) regime.
pub fn compute_periods(
    field: &Arc<FieldData>,
    level: i64,
    f: &Eigenform,
    omega: &HeckeCharacter,
) -> Result<(PeriodVector, ExplicitRepresentatives)> {
    if omega.field.disc != field.disc {
        return Err(Error::Precondition("character belongs to a different field".into()));
    }
    if omega.infinity_exponent != f.weight() {
        return Err(Error::Precondition(format!(
            "flagship scope is k = k_π: form weight {} vs ∞-type {}",
            f.weight(),
            omega.infinity_exponent
        )));
    }
    let d = field.disc;
    let r = heegner::orientations(d, level)?[0];
    let base = heegner::base_heegner_form(d, level, r)?;
    let reps = heegner::explicit_representatives(&field.class_group, &base)?;
    let norm = modforms::petersson_norm(f)?.sqrt();

    let mut values = vec![Complex64::new(0.0, 0.0); field.h()];
    for e in &reps.entries {
        let z = heegner::heegner_point(&e.heegner_form).z;
        let fv = modforms::evaluate_invariant(f, z)? / norm;
        let ov = omega.eval(&e.prime_ideal)?;
        values[e.class_index] = fv * ov.conj();
    }
    let pv = PeriodVector::from_values(field.clone(), level, f.weight(), values)?;
    Ok((pv, reps))
}

/// One row of the Waldspurger ratio report.
#[derive(Debug, Clone)]
pub struct WaldspurgerRow {
    pub chi_index: usize,
    pub period_sq: f64,
    pub l_value: f64,
    pub l_error: f64,
    pub ratio: f64,
    /// set when one side vanishes within error while the other does not
    pub inconsistent: bool,
}

/// Waldspurger ratio report for one discriminant.
#[derive(Debug, Clone)]
pub struct WaldspurgerReport {
    pub disc: i64,
    pub weight: i64,
    pub rows: Vec<WaldspurgerRow>,
    /// max/min − 1 over the consistent rows
    pub dispersion: f64,
    /// common ratio (mean over rows)
    pub ratio_mean: f64,
    /// `ratio·8·L(sym²,1)/√|D|` — the measured archimedean constant
    pub measured_c_infinity: f64,
    /// the two predicted `c_∞` variants
    pub predicted_variant_a: f64,
    pub predicted_variant_b: f64,
    pub sym_square: f64,
}

/// The explicit Waldspurger formula test: for each class character χ the
/// ratio `|P(χ)|²/L(π⊗χΩ, 1/2)` is computed; the theorem asserts the ratio
/// is χ-independent and equal to `√|D|·c_∞/(8N'·L(sym²π,1))`.
pub fn waldspurger_check(
    field: &Arc<FieldData>,
    f: &Eigenform,
    omega: &HeckeCharacter,
    n_hint: usize,
) -> Result<WaldspurgerReport> {
    let (pv, _) = compute_periods(field, 1, f, omega)?;
    let chars = abelian::characters(&field.group);
    let mut rows = Vec::new();
    for (i, chi) in chars.iter().enumerate() {
        let twisted = omega.twist(chi)?;
        let mut l = RSLfunction::new(f, &twisted, n_hint)?;
        let cv = l.afe_central_value()?;
        let psq = pv.period(i).norm_sqr();
        let l_zero = cv.value.abs() <= 3.0 * cv.error_estimate;
        let p_zero = psq <= 1e-20;
        let inconsistent = l_zero != p_zero;
        let ratio = if l_zero { f64::NAN } else { psq / cv.value };
        rows.push(WaldspurgerRow {
            chi_index: i,
            period_sq: psq,
            l_value: cv.value,
            l_error: cv.error_estimate,
            ratio,
            inconsistent,
        });
    }
    let ratios: Vec<f64> = rows
        .iter()
        .filter(|r| !r.inconsistent && r.ratio.is_finite())
        .map(|r| r.ratio)
        .collect();
    if ratios.is_empty() {
        return Err(Error::Integrity("no consistent Waldspurger rows".into()));
    }
    let (mut lo, mut hi, mut mean) = (f64::MAX, f64::MIN, 0.0);
    for &r in &ratios {
        lo = lo.min(r);
        hi = hi.max(r);
        mean += r;
    }
    mean /= ratios.len() as f64;
    let dispersion = hi / lo - 1.0;

    let sym_square = lfun::sym_square_at_1(f)?;
    let sqrt_d = (field.disc.abs() as f64).sqrt();
    let measured = mean * 8.0 * sym_square / sqrt_d;
    let (va, vb) = lfun::c_infinity(ArchKind::Discrete, f.weight(), f.weight(), 0.0)?;
    Ok(WaldspurgerReport {
        disc: field.disc.value(),
        weight: f.weight(),
        rows,
        dispersion,
        ratio_mean: mean,
        measured_c_infinity: measured,
        predicted_variant_a: va,
        predicted_variant_b: vb,
        sym_square,
    })
}

/// The exact assembly identity: for period slots `v_1, …, v_n`,
///
/// ```text
/// (1/hⁿ)·Σ_{Wide(n, Ĝ)} Π_i P_i(χ_i)  =  (1/h)·Σ_c Π_i v_i(c)
/// ```
///
/// (finite Fourier identity; for slots built from characters with
/// `Π_i Ω_i` trivial the right side is the pure geometric class sum).
pub fn wide_moment_assembly(slots: &[PeriodVector]) -> Result<(Complex64, Complex64, bool)> {
    if slots.is_empty() {
        return Err(Error::Precondition("need at least one slot".into()));
    }
    let field = &slots[0].field;
    let h = field.h();
    for s in slots {
        if s.field.disc != field.disc {
            return Err(Error::Precondition("slots from different fields".into()));
        }
    }
    let weight_sum: i64 = slots.iter().map(|s| s.weight).sum();
    if weight_sum != 0 {
        return Err(Error::Precondition(format!(
            "weight offsets must sum to 0, got {weight_sum}"
        )));
    }
    let n = slots.len();
    // LHS over wide tuples of the character group (dual side)
    let mut lhs = Complex64::new(0.0, 0.0);
    for t in abelian::wide_tuples(n, &field.group)? {
        let mut prod = Complex64::new(1.0, 0.0);
        for (i, chi_elem) in t.0.iter().enumerate() {
            let chi_index = field.group.index_of(chi_elem);
            prod *= slots[i].periods[chi_index];
        }
        lhs += prod;
    }
    lhs /= (h as f64).powi(n as i32);
    // RHS: class sum of the pointwise product
    let mut rhs = Complex64::new(0.0, 0.0);
    for c in 0..h {
        let mut prod = Complex64::new(1.0, 0.0);
        for s in slots {
            prod *= s.values[c];
        }
        rhs += prod;
    }
    rhs /= h as f64;
    let scale = lhs.norm().max(rhs.norm()).max(1e-300);
    Ok((lhs, rhs, (lhs - rhs).norm() / scale < 1e-9))
}

/// Verify that a product of Hecke characters is trivial, by evaluating on
/// the class-group generators and on a principal ideal.
pub fn verify_trivial_product(omegas: &[HeckeCharacter]) -> Result<bool> {
    if omegas.is_empty() {
        return Ok(true);
    }
    let mut prod = omegas[0].clone();
    for o in &omegas[1..] {
        prod = prod.mul(o)?;
    }
    if prod.infinity_exponent != 0 {
        return Ok(false);
    }
    for g in &prod.field.gen_ideals {
        if (prod.eval(g)? - Complex64::new(1.0, 0.0)).norm() > 1e-9 {
            return Ok(false);
        }
    }
    let probe = IdealHNF::rational(prod.field.disc.value(), 5);
    Ok((prod.eval(&probe)? - Complex64::new(1.0, 0.0)).norm() < 1e-9)
}

/// Diagonal moment: the proof-derived inclusion–exclusion identity of the
/// class-indexed period sequences (maps on `Cl_K`), agreement to 1e−9.
pub fn diagonal_moment_check(slots: &[PeriodVector]) -> Result<(Complex64, Complex64, bool)> {
    if slots.is_empty() {
        return Err(Error::Precondition("need at least one slot".into()));
    }
    let field = &slots[0].field;
    // maps indexed by group element (not class index)
    let maps: Vec<Vec<Complex64>> = slots
        .iter()
        .map(|s| {
            (0..field.h())
                .map(|el| s.values[field.elem_to_class[el]])
                .collect()
        })
        .collect();
    abelian::lemma61_check(&field.group, &maps)
}

/// One row of the equidistribution scan.
#[derive(Debug, Clone)]
pub struct EquidistRow {
    pub disc: i64,
    pub h: usize,
    /// mean over classes of |f(z_Q)|² for the L²-normalized f
    pub mean_mass: f64,
    /// deviation from the equidistribution limit 3/π
    pub deviation: f64,
    /// |(1/h)·Σ f(z_Q)|
    pub weyl: f64,
}

/// Scan all fundamental discriminants in `[d_min, d_max]` (both negative,
/// `d_max ≤ −7`): Heegner points of the reduced forms (already in the
/// fundamental domain), mass deviation from 3/π and plain Weyl sums.
pub fn equidistribution_scan(f: &Eigenform, d_min: i64, d_max: i64) -> Result<Vec<EquidistRow>> {
    if d_min > d_max || d_max > -7 {
        return Err(Error::Precondition("need d_min ≤ d_max ≤ −7".into()));
    }
    let norm = modforms::petersson_norm(f)?.sqrt();
    let target = 3.0 / std::f64::consts::PI;
    let mut rows = Vec::new();
    for d in (d_min..=d_max).rev() {
        if !crate::qforms::is_fundamental(d)? {
            continue;
        }
        let disc = Discriminant::new(d)?;
        let forms = crate::qforms::enumerate_reduced(disc);
        let h = forms.len();
        let mut mass = numerics::NeumaierSum::new();
        let mut weyl = Complex64::new(0.0, 0.0);
        for q in &forms {
            let z = Complex64::new(
                -q.b() as f64 / (2.0 * q.a() as f64),
                ((-d) as f64).sqrt() / (2.0 * q.a() as f64),
            );
            let v = modforms::evaluate_invariant(f, z)? / norm;
            mass.add(v.norm_sqr());
            weyl += v;
        }
        let mean_mass = mass.value() / h as f64;
        rows.push(EquidistRow {
            disc: d,
            h,
            mean_mass,
            deviation: (mean_mass - target).abs(),
            weyl: (weyl / h as f64).norm(),
        });
    }
    Ok(rows)
}

/// Median deviations of a scan over two |D|-blocks `[lo, hi]`.
pub fn block_medians(rows: &[EquidistRow], lo: i64, hi: i64) -> Option<(f64, f64)> {
    let devs: Vec<f64> = rows
        .iter()
        .filter(|r| -r.disc >= lo && -r.disc <= hi)
        .map(|r| r.deviation)
        .collect();
    let weyls: Vec<f64> = rows
        .iter()
        .filter(|r| -r.disc >= lo && -r.disc <= hi)
        .map(|r| r.weyl)
        .collect();
    if devs.is_empty() {
        return None;
    }
    Some((numerics::median(&devs), numerics::median(&weyls)))
}

/// Convenience: base character + its class-character twist by index.
pub fn twisted_character(field: &Arc<FieldData>, k: i64, chi_index: usize) -> Result<HeckeCharacter> {
    let base = HeckeCharacter::base(field.clone(), k)?;
    let chars = abelian::characters(&field.group);
    let chi: &Character = chars
        .get(chi_index)
        .ok_or_else(|| Error::Domain(format!("character index {chi_index} out of range")))?;
    base.twist(chi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    fn delta() -> &'static Eigenform {
        static DELTA: OnceLock<Eigenform> = OnceLock::new();
        DELTA.get_or_init(|| modforms::level1_eigenform(12, 40_000).unwrap())
    }

    fn field(d: i64) -> Arc<FieldData> {
        FieldData::new(d).unwrap()
    }

    #[test]
    fn periods_h1_single_class() {
        let f7 = field(-7);
        let omega = HeckeCharacter::base(f7.clone(), 12).unwrap();
        let (pv, reps) = compute_periods(&f7, 1, delta(), &omega).unwrap();
        assert_eq!(pv.values.len(), 1);
        assert_eq!(reps.entries.len(), 1);
        // P(trivial) = f(z_base)·conj(Ω(O_K)) = f(z_base)
        let z = heegner::heegner_point(&reps.base).z;
        let fv = modforms::evaluate_invariant(delta(), z).unwrap()
            / modforms::petersson_norm(delta()).unwrap().sqrt();
        assert!((pv.period(0) - fv).norm() < 1e-12 * fv.norm());
    }

    #[test]
    fn periods_plancherel_and_twist_permutation() {
        let f23 = field(-23);
        let omega = HeckeCharacter::base(f23.clone(), 12).unwrap();
        let (pv, _) = compute_periods(&f23, 1, delta(), &omega).unwrap();
        // Plancherel is verified inside from_values; explicit re-check
        let lhs: f64 = pv.periods.iter().map(|p| p.norm_sqr()).sum();
        let rhs: f64 = 3.0 * pv.values.iter().map(|v| v.norm_sqr()).sum::<f64>();
        assert!((lhs - rhs).abs() < 1e-10 * rhs);

        // replacing Ω by χ′Ω permutes the periods: P_{χ′Ω}(χ) = P_Ω(χχ′)
        let chars = abelian::characters(&f23.group);
        let chi1 = &chars[1];
        let omega2 = omega.twist(chi1).unwrap();
        let (pv2, _) = compute_periods(&f23, 1, delta(), &omega2).unwrap();
        for (i, chi) in chars.iter().enumerate() {
            let shifted = chi.mul(&f23.group, chi1);
            let j = chars.iter().position(|c| *c == shifted).unwrap();
            assert!(
                (pv2.period(i) - pv.period(j)).norm() < 1e-10 * pv.period(j).norm().max(1e-12),
                "twist permutation fails at χ index {i}"
            );
        }
    }

    #[test]
    fn assembly_identity_n2_plancherel() {
        let f23 = field(-23);
        let omega = HeckeCharacter::base(f23.clone(), 12).unwrap();
        let (pv, _) = compute_periods(&f23, 1, delta(), &omega).unwrap();
        let slots = vec![pv.clone(), pv.conj()];
        assert!(verify_trivial_product(&[omega.clone(), omega.conj()]).unwrap());
        let (lhs, rhs, ok) = wide_moment_assembly(&slots).unwrap();
        assert!(ok, "lhs {lhs} rhs {rhs}");
        // n = 2 with conjugate slot: LHS = (1/h²)Σ|P(χ)|², RHS = (1/h)Σ|v|²
        let h = 3.0;
        let expect = pv.periods.iter().map(|p| p.norm_sqr()).sum::<f64>() / (h * h);
        assert!((lhs.re - expect).abs() < 1e-12 * expect);
        assert!(lhs.im.abs() < 1e-12 * expect);
    }

    #[test]
    fn assembly_identity_n1_and_n3() {
        let f23 = field(-23);
        let omega = HeckeCharacter::base(f23.clone(), 12).unwrap();
        let (pv, _) = compute_periods(&f23, 1, delta(), &omega).unwrap();

        // n = 1: the only valid slot has weight 0: use |f|²-style slot
        let abs_sq = pv.product(&pv.conj()).unwrap();
        let (lhs, rhs, ok) = wide_moment_assembly(&[abs_sq]).unwrap();
        assert!(ok, "n=1: {lhs} vs {rhs}");

        // n = 3: (f,Ω), (f,Ω), conj(f²,Ω²) — weights (12,12,−24)
        let sq = pv.product(&pv).unwrap();
        let slots = vec![pv.clone(), pv.clone(), sq.conj()];
        assert_eq!(slots.iter().map(|s| s.weight).sum::<i64>(), 0);
        let om_sq = omega.mul(&omega).unwrap();
        assert!(verify_trivial_product(&[omega.clone(), omega.clone(), om_sq.conj()]).unwrap());
        let (lhs, rhs, ok) = wide_moment_assembly(&slots).unwrap();
        assert!(ok, "n=3: {lhs} vs {rhs}");
    }

    #[test]
    fn assembly_rejects_unbalanced_weights() {
        let f23 = field(-23);
        let omega = HeckeCharacter::base(f23.clone(), 12).unwrap();
        let (pv, _) = compute_periods(&f23, 1, delta(), &omega).unwrap();
        assert!(matches!(
            wide_moment_assembly(&[pv.clone(), pv]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn nontrivial_product_detected() {
        let f23 = field(-23);
        let omega = HeckeCharacter::base(f23.clone(), 12).unwrap();
        assert!(!verify_trivial_product(&[omega.clone(), omega]).unwrap());
    }

    #[test]
    fn diagonal_moment_small_cases() {
        let f23 = field(-23);
        let omega = HeckeCharacter::base(f23.clone(), 12).unwrap();
        let (pv, _) = compute_periods(&f23, 1, delta(), &omega).unwrap();
        // zero slots → (0, 0, true)
        let zero = PeriodVector::from_values(
            f23.clone(),
            1,
            0,
            vec![Complex64::new(0.0, 0.0); 3],
        )
        .unwrap();
        let (l, r, ok) = diagonal_moment_check(&[zero]).unwrap();
        assert!(ok && l.norm() < 1e-15 && r.norm() < 1e-15);
        // n = 1 and n = 2 with real data
        let (l, r, ok) = diagonal_moment_check(&[pv.clone()]).unwrap();
        assert!(ok, "n=1 {l} vs {r}");
        let (l, r, ok) = diagonal_moment_check(&[pv.clone(), pv.conj()]).unwrap();
        assert!(ok, "n=2 {l} vs {r}");
    }

    #[test]
    fn assembly_identity_across_field_grid() {
        // the exact identity holds on every field of the documented grid
        for d in [-31i64, -71] {
            let fd = field(d);
            let omega = HeckeCharacter::base(fd.clone(), 12).unwrap();
            let (pv, _) = compute_periods(&fd, 1, delta(), &omega).unwrap();
            let (lhs, rhs, ok) = wide_moment_assembly(&[pv.clone(), pv.conj()]).unwrap();
            assert!(ok, "D = {d}: {lhs} vs {rhs}");
            let slots = vec![pv.clone(), pv.clone(), pv.product(&pv).unwrap().conj()];
            let (lhs, rhs, ok) = wide_moment_assembly(&slots).unwrap();
            assert!(ok, "D = {d}, n = 3: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn waldspurger_h1_sanity() {
        // D = −7: a single class, a single ratio, dispersion 0 by definition
        let f7 = field(-7);
        let omega = HeckeCharacter::base(f7.clone(), 12).unwrap();
        let rep = waldspurger_check(&f7, delta(), &omega, 2048).unwrap();
        assert_eq!(rep.rows.len(), 1);
        assert!(!rep.rows[0].inconsistent);
        assert_eq!(rep.dispersion, 0.0);
        assert!(rep.rows[0].l_value > 0.0);
    }

    #[test]
    fn equidist_scan_rows_sane() {
        let rows = equidistribution_scan(delta(), -500, -23).unwrap();
        assert!(!rows.is_empty());
        for r in &rows {
            assert!(r.mean_mass >= 0.0);
            assert!(crate::qforms::is_fundamental(r.disc).unwrap());
        }
        // h = 1 rows: Weyl sum equals the single point value’s magnitude
        let r7 = equidistribution_scan(delta(), -7, -7).unwrap();
        assert_eq!(r7.len(), 1);
        assert_eq!(r7[0].h, 1);
        assert!((r7[0].weyl * r7[0].weyl - r7[0].mean_mass).abs() < 1e-12);
    }
}
