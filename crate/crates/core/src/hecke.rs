//! Ideal arithmetic in the maximal order of an imaginary quadratic field,
//! conductor-1 Hecke characters, and theta series coefficients.
//!
//! The ring of integers is `Z[ω]` with `ω = (δ + √D)/2`, `δ = D mod 2`
//! (so `ω² = δω + (D − δ)/4`). An integral ideal is stored in normal form
//! `u·( (a/u)Z + (t/u + ω)Z )` via the triple `(a, t, u)` with `u | a`,
//! `u | t`, `0 ≤ t/u < a/u`, and norm `a·u`.
//!
//! A Hecke character of conductor 1 and ∞-type `α ↦ (α/|α|)^k` (k even) is
//! `(α/|α|)^{−k}` on principal ideals `(α)` and is pinned on a set of class
//! group generators by consistent roots of unity; the `h` characters of a
//! given ∞-type are the class-character twists of any one of them.

use crate::abelian::{Character, FinAbGroup};
use crate::qforms::{self, ClassGroup, Discriminant, QuadForm};
use crate::{Complex64, Error, Result};
use std::sync::Arc;

/// Kronecker symbol `(d/n)` for `n ≥ 0`.
pub fn kronecker(d: i64, n: i64) -> i64 {
    debug_assert!(n >= 0);
    if n == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    let mut a = d;
    let mut n = n;
    let mut result = 1i64;
    // factor out 2s using (a/2) = 0, ±1 by a mod 8
    while n % 2 == 0 {
        n /= 2;
        match a.rem_euclid(8) {
            1 | 7 => {}
            3 | 5 => result = -result,
            _ => return 0,
        }
    }
    a = a.rem_euclid(n);
    // Jacobi symbol by reciprocity
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            match n.rem_euclid(8) {
                3 | 5 => result = -result,
                _ => {}
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.rem_euclid(4) == 3 && n.rem_euclid(4) == 3 {
            result = -result;
        }
        a = a.rem_euclid(n);
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// The quadratic character `χ_K(n) = (D/n)` attached to `K = Q(√D)`.
pub fn kronecker_chi_k(d: Discriminant, n: i64) -> i64 {
    kronecker(d.value(), n)
}

/// Integral ideal of the maximal order in two-element normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IdealHNF {
    d: i64,
    a: i128,
    t: i128,
    u: i128,
}

impl IdealHNF {
    /// Normalize and validate `u·((a/u)Z + (t/u + ω)Z)`.
    pub fn from_parts(d: i64, a: i128, t: i128, u: i128) -> Result<Self> {
        if a <= 0 || u <= 0 {
            return Err(Error::Domain("ideal parameters must be positive".into()));
        }
        if a % u != 0 || t % u != 0 {
            return Err(Error::Domain("content must divide both HNF entries".into()));
        }
        let ap = a / u;
        let tp = (t / u).rem_euclid(ap);
        // ideal condition: a' | N(t' + ω) = t'² + δt' + (δ − D)/4
        let delta = d.rem_euclid(4).min(1) as i128;
        let c0 = (delta - d as i128) / 4;
        if (tp * tp + delta * tp + c0) % ap != 0 {
            return Err(Error::Domain(format!(
                "[{a}, {t}+{u}ω] is not an ideal of the order of discriminant {d}"
            )));
        }
        Ok(IdealHNF { d, a: ap * u, t: tp * u, u })
    }

    /// The full ring of integers `O_K = [1, ω]`.
    pub fn one(d: i64) -> Self {
        IdealHNF { d, a: 1, t: 0, u: 1 }
    }

    /// The principal ideal `(n)` for a positive rational integer `n`.
    pub fn rational(d: i64, n: i128) -> Self {
        assert!(n > 0);
        IdealHNF { d, a: n, t: 0, u: n }
    }

    pub fn disc(&self) -> i64 {
        self.d
    }

    /// Norm `a·u` (index in the ring of integers).
    pub fn norm(&self) -> i128 {
        self.a * self.u
    }

    /// Content (largest rational integer dividing the ideal).
    pub fn content(&self) -> i128 {
        self.u
    }

    /// Primitive part: the ideal divided by its content.
    pub fn primitive_part(&self) -> IdealHNF {
        IdealHNF { d: self.d, a: self.a / self.u, t: self.t / self.u, u: 1 }
    }

    fn delta(&self) -> i128 {
        self.d.rem_euclid(4).min(1) as i128
    }

    /// Exact ideal product in normal form.
    pub fn mul(&self, other: &IdealHNF) -> Result<IdealHNF> {
        if self.d != other.d {
            return Err(Error::Domain(format!(
                "ideal product across fields D={} and D={}",
                self.d, other.d
            )));
        }
        let delta = self.delta();
        let c0 = (delta - self.d as i128) / 4; // ω² = δω − c0
        // generators: (x0 + y0 ω)(x1 + y1 ω) with ω² = δω − c0
        let gens = [
            (self.a, 0i128),
            (self.t, self.u),
        ];
        let gens2 = [
            (other.a, 0i128),
            (other.t, other.u),
        ];
        let mut cols: Vec<(i128, i128)> = Vec::with_capacity(4);
        for &(x0, y0) in &gens {
            for &(x1, y1) in &gens2 {
                let x = x0
                    .checked_mul(x1)
                    .and_then(|v| v.checked_sub(y0.checked_mul(y1)?.checked_mul(c0)?))
                    .ok_or_else(|| Error::Domain("ideal product overflow".into()))?;
                let y = x0 * y1 + y0 * x1 + y0 * y1 * delta;
                cols.push((x, y));
            }
        }
        let (a, t, u) = hnf_2xn(&mut cols);
        IdealHNF::from_parts(self.d, a, t, u)
    }

    /// `self^n` by repeated multiplication.
    pub fn pow(&self, n: u32) -> Result<IdealHNF> {
        let mut acc = IdealHNF::one(self.d);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Complex conjugate ideal.
    pub fn conj(&self) -> IdealHNF {
        // conj(t + uω) = (t + uδ) − uω; negating the generator keeps the module
        let delta = self.delta();
        let tp = (-(self.t / self.u) - delta).rem_euclid(self.a / self.u);
        IdealHNF { d: self.d, a: self.a, t: tp * self.u, u: self.u }
    }

    /// The quadratic form `[a', b, c]` of the primitive part, with
    /// `b = −(2t' + δ)` normalized mod `2a'`.
    pub fn to_form(&self) -> Result<QuadForm> {
        let p = self.primitive_part();
        let delta = p.delta();
        let a = p.a;
        let mut b = -(2 * p.t + delta);
        // bring b into a small window before building the form
        b = b.rem_euclid(2 * a);
        if b > a {
            b -= 2 * a;
        }
        let num = b * b - p.d as i128;
        debug_assert_eq!(num % (4 * a), 0);
        let c = num / (4 * a);
        QuadForm::new(
            i64::try_from(a).map_err(|_| Error::Domain("ideal norm exceeds i64".into()))?,
            i64::try_from(b).map_err(|_| Error::Domain("ideal b exceeds i64".into()))?,
            i64::try_from(c).map_err(|_| Error::Domain("ideal c exceeds i64".into()))?,
        )
    }

    /// Embed the generator pair `(x + yω)` at `√D = i√|D|`.
    pub fn embed(d: i64, x: i128, y: i128) -> Complex64 {
        let delta = d.rem_euclid(4).min(1) as f64;
        let s = ((-d) as f64).sqrt();
        Complex64::new(x as f64 + y as f64 * delta / 2.0, y as f64 * s / 2.0)
    }

    /// If principal, return the generator `α = x + yω` (exact integers),
    /// determined up to sign. Norm equation `N(α) = N(𝔞)` is verified.
    pub fn principal_generator(&self) -> Result<Option<(i128, i128)>> {
        let p = self.primitive_part();
        let form = p.to_form()?;
        let d = Discriminant::new(self.d)?;
        let (reduced, tr) = qforms::reduce(&form);
        if reduced != d.principal_form() {
            return Ok(None);
        }
        // reduce(Q) = (R, U), R = Q∘U principal: the ideal of Q is
        // (s − rω)·O_K for U = (p, q; r, s); content multiplies back in.
        let gx = tr.s as i128 * self.u;
        let gy = -(tr.r as i128) * self.u;
        let delta = self.delta();
        // N(x + yω) = x² + δxy + c0·y² with c0 = (δ − D)/4 (δ² = δ)
        let c0 = (delta - self.d as i128) / 4;
        let norm = gx * gx + delta * gx * gy + c0 * gy * gy;
        if norm != self.norm() {
            return Err(Error::Integrity(format!(
                "recovered generator has norm {norm}, ideal norm {}",
                self.norm()
            )));
        }
        Ok(Some((gx, gy)))
    }

    /// A prime ideal above a split or ramified rational prime `p`.
    ///
    /// Returns the ideal `[p, t + ω]` with `N(t + ω) ≡ 0 mod p`; the root is
    /// the smallest nonnegative `t`, which fixes one of the two conjugate
    /// primes in the split case.
    pub fn prime_above(d: i64, p: i64) -> Result<IdealHNF> {
        if kronecker(d, p) == -1 {
            return Err(Error::Precondition(format!("{p} is inert in Q(√{d})")));
        }
        let delta = d.rem_euclid(4).min(1) as i128;
        let c0 = (delta - d as i128) / 4;
        for t in 0..p as i128 {
            if (t * t + delta * t + c0) % p as i128 == 0 {
                return IdealHNF::from_parts(d, p as i128, t, 1);
            }
        }
        Err(Error::Integrity(format!("no root of the minimal polynomial mod {p}")))
    }
}

/// Column HNF of a rank-2 module spanned by `(x_i + y_i ω)`:
/// returns `(a, t, u)` with module `= aZ + (t + uω)Z`, `u | a`, `u | t`.
fn hnf_2xn(cols: &mut Vec<(i128, i128)>) -> (i128, i128, i128) {
    // gcd of the ω-components with Bezout tracking over the column span
    // Repeatedly reduce: keep a column with minimal |y| ≠ 0, eliminate others.
    loop {
        cols.retain(|&(x, y)| x != 0 || y != 0);
        let (mut min_idx, mut min_y) = (usize::MAX, i128::MAX);
        for (i, &(_, y)) in cols.iter().enumerate() {
            if y != 0 && y.abs() < min_y {
                min_y = y.abs();
                min_idx = i;
            }
        }
        if min_idx == usize::MAX {
            break; // all y = 0
        }
        let pivot = cols[min_idx];
        let mut done = true;
        for i in 0..cols.len() {
            if i == min_idx || cols[i].1 == 0 {
                continue;
            }
            let q = cols[i].1.div_euclid(pivot.1);
            cols[i].0 -= q * pivot.0;
            cols[i].1 -= q * pivot.1;
            if cols[i].1 != 0 {
                done = false;
            }
        }
        if done {
            break;
        }
    }
    let mut u = 0i128;
    let mut t = 0i128;
    let mut a = 0i128;
    for &(x, y) in cols.iter() {
        if y != 0 {
            debug_assert!(u == 0, "multiple pivot columns remain");
            u = y.abs();
            t = if y > 0 { x } else { -x };
        } else {
            a = gcd_i128(a, x);
        }
    }
    debug_assert!(u != 0 && a != 0, "module not of full rank");
    let t = t.rem_euclid(a.abs());
    (a.abs(), t, u)
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Context shared by all characters of one field: class group, its abelian
/// decomposition, and generator data for evaluating Hecke characters.
#[derive(Debug)]
pub struct FieldData {
    pub disc: Discriminant,
    pub class_group: ClassGroup,
    pub group: FinAbGroup,
    /// class index → exponent tuple index in `group`
    pub class_to_elem: Vec<usize>,
    /// element index in `group` → class index
    pub elem_to_class: Vec<usize>,
    /// class-group generator classes matching `group.divisors()`
    pub gen_classes: Vec<usize>,
    /// ideals representing the generator classes
    pub gen_ideals: Vec<IdealHNF>,
    /// generator α_j of `gen_ideals[j]^{d_j}` (exact `x + yω`)
    pub gen_power_generators: Vec<(i128, i128)>,
}

impl FieldData {
    pub fn new(d: i64) -> Result<Arc<Self>> {
        let disc = Discriminant::new(d)?;
        let class_group = ClassGroup::new(disc)?;
        let (group, gen_classes, class_to_elem, elem_to_class) =
            crate::abelian::decompose(&class_group)?;
        let mut gen_ideals = Vec::new();
        let mut gen_power_generators = Vec::new();
        for (j, &g) in gen_classes.iter().enumerate() {
            let ideal = qforms::form_to_ideal(&class_group.reduced_forms()[g]);
            let dj = group.divisors()[j] as u32;
            let power = ideal.pow(dj)?;
            let gen = power.principal_generator()?.ok_or_else(|| {
                Error::Integrity("generator power is not principal".into())
            })?;
            gen_ideals.push(ideal);
            gen_power_generators.push(gen);
        }
        Ok(Arc::new(FieldData {
            disc,
            class_group,
            group,
            class_to_elem,
            elem_to_class,
            gen_classes,
            gen_ideals,
            gen_power_generators,
        }))
    }

    pub fn h(&self) -> usize {
        self.class_group.h()
    }

    /// Class index of an ideal via the form–class bijection.
    pub fn class_of_ideal(&self, a: &IdealHNF) -> Result<usize> {
        self.class_group.class_index(&a.to_form()?)
    }
}

/// Conductor-1 Hecke character with ∞-type `α ↦ (α/|α|)^k`, `k` even.
///
/// `Ω((α)) = (α/|α|)^{−k}`; on the class-group generators the values are the
/// stored roots of unity; everything else follows by multiplicativity.
#[derive(Debug, Clone)]
pub struct HeckeCharacter {
    pub field: Arc<FieldData>,
    /// ∞-type exponent (even; may be negative for conjugates).
    pub infinity_exponent: i64,
    /// value on each generator ideal
    pub gen_values: Vec<Complex64>,
    /// the class-character twist folded into `gen_values` (for reporting)
    pub twist: Character,
}

impl HeckeCharacter {
    /// The base character of ∞-type `k`: on each generator `A_j` of order
    /// `d_j` with `A_j^{d_j} = (α_j)` the value is the principal `d_j`-th
    /// root of `(α_j/|α_j|)^{−k}`.
    pub fn base(field: Arc<FieldData>, k: i64) -> Result<Self> {
        if k % 2 != 0 {
            return Err(Error::Domain(format!("∞-type exponent must be even, got {k}")));
        }
        let mut gen_values = Vec::new();
        for (j, &(x, y)) in field.gen_power_generators.iter().enumerate() {
            let alpha = IdealHNF::embed(field.disc.value(), x, y);
            let w = (alpha / alpha.norm()).powi(-k as i32);
            let dj = field.group.divisors()[j] as f64;
            let theta = w.arg().rem_euclid(std::f64::consts::TAU);
            gen_values.push(Complex64::from_polar(1.0, theta / dj));
        }
        let twist = Character::trivial(&field.group);
        Ok(HeckeCharacter { field, infinity_exponent: k, gen_values, twist })
    }

    /// Twist by a class group character (pointwise product).
    pub fn twist(&self, chi: &Character) -> Result<Self> {
        if chi.exponents().len() != self.field.group.divisors().len() {
            return Err(Error::Domain("twist character belongs to a different group".into()));
        }
        let mut gen_values = self.gen_values.clone();
        for (j, v) in gen_values.iter_mut().enumerate() {
            // generator j corresponds to the j-th standard generator of the group
            let mut g = vec![0u64; self.field.group.divisors().len()];
            g[j] = 1;
            *v *= chi.eval(&self.field.group, &g);
        }
        Ok(HeckeCharacter {
            field: self.field.clone(),
            infinity_exponent: self.infinity_exponent,
            gen_values,
            twist: self.twist.mul(&self.field.group, chi),
        })
    }

    /// Conjugate character (∞-type `−k`).
    pub fn conj(&self) -> Self {
        HeckeCharacter {
            field: self.field.clone(),
            infinity_exponent: -self.infinity_exponent,
            gen_values: self.gen_values.iter().map(|v| v.conj()).collect(),
            twist: self.twist.inverse(&self.field.group),
        }
    }

    /// Pointwise product of two characters of the same field.
    pub fn mul(&self, other: &HeckeCharacter) -> Result<Self> {
        if self.field.disc != other.field.disc {
            return Err(Error::Domain("character product across fields".into()));
        }
        Ok(HeckeCharacter {
            field: self.field.clone(),
            infinity_exponent: self.infinity_exponent + other.infinity_exponent,
            gen_values: self
                .gen_values
                .iter()
                .zip(&other.gen_values)
                .map(|(a, b)| a * b)
                .collect(),
            twist: self.twist.mul(&self.field.group, &other.twist),
        })
    }

    /// Evaluate on an integral ideal.
    ///
    /// Decomposes `[𝔞] = Π g_j^{e_j}`, forms the principal ideal
    /// `𝔠 = 𝔞·Π A_j^{(d_j−e_j) mod d_j}`, recovers its generator exactly and
    /// combines `(γ/|γ|)^{−k}` with the stored generator values.
    pub fn eval(&self, a: &IdealHNF) -> Result<Complex64> {
        let f = &self.field;
        if a.disc() != f.disc.value() {
            return Err(Error::Domain("ideal from a different field".into()));
        }
        let class = f.class_of_ideal(a)?;
        let exps = f.group.tuple_of(f.class_to_elem[class]);
        let mut c = *a;
        let mut unit_part = Complex64::new(1.0, 0.0);
        for (j, &e) in exps.iter().enumerate() {
            let dj = f.group.divisors()[j];
            let m = (dj - e) % dj;
            for _ in 0..m {
                c = c.mul(&f.gen_ideals[j])?;
            }
            unit_part *= self.gen_values[j].powu(m as u32);
        }
        let (gx, gy) = c
            .principal_generator()?
            .ok_or_else(|| Error::Integrity("co-factor ideal is not principal".into()))?;
        let gamma = IdealHNF::embed(f.disc.value(), gx, gy);
        let principal_part = (gamma / gamma.norm()).powi(-self.infinity_exponent as i32);
        Ok(principal_part / unit_part)
    }

    /// Whether this is the trivial Hecke character (k = 0, all values 1).
    pub fn is_trivial(&self) -> Result<bool> {
        if self.infinity_exponent != 0 {
            return Ok(false);
        }
        for v in &self.gen_values {
            if (v - Complex64::new(1.0, 0.0)).norm() > 1e-10 {
                return Ok(false);
            }
        }
        // spot check on a principal ideal
        let probe = IdealHNF::rational(self.field.disc.value(), 3);
        Ok((self.eval(&probe)? - Complex64::new(1.0, 0.0)).norm() < 1e-10)
    }
}

/// Theta series of a Hecke character: weight `k+1`, level `|D|`,
/// nebentypus `χ_K`, normalized coefficients `λ(n) = Σ_{N𝔞=n} Ω(𝔞)`.
#[derive(Debug, Clone)]
pub struct ThetaSeries {
    pub disc: Discriminant,
    pub infinity_exponent: i64,
    /// weight `k + 1`
    pub weight: i64,
    /// level `|D|`
    pub level: i64,
    /// `λ(n)` for `1 ≤ n ≤ n_max` (index 0 is `λ(1)`)
    pub lambda: Vec<Complex64>,
    pub cuspidal: bool,
}

impl ThetaSeries {
    pub fn lambda(&self, n: usize) -> Complex64 {
        self.lambda[n - 1]
    }

    pub fn n_max(&self) -> usize {
        self.lambda.len()
    }

    /// Raw coefficient `a(n) = λ(n)·n^{k/2}`.
    pub fn raw(&self, n: usize) -> Complex64 {
        self.lambda(n) * (n as f64).powf(self.infinity_exponent as f64 / 2.0)
    }

    /// CSV dump: `n, re λ(n), im λ(n)` with 15 significant digits.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,re_lambda,im_lambda\n");
        for (i, l) in self.lambda.iter().enumerate() {
            s.push_str(&format!("{},{:.14e},{:.14e}\n", i + 1, l.re, l.im));
        }
        s
    }
}

/// Number of integral ideals of norm `n` in each ideal class.
///
/// Ideals of norm `n` in class `C` biject with `±`-pairs of lattice points of
/// the ideal of the reduced form of `C^{−1}` representing `n·N𝔟`; the count
/// is read off from form representations, `w = 2` units (D < −6).
pub fn ideal_counts_by_class(field: &FieldData, n: usize) -> Vec<usize> {
    let h = field.h();
    let mut counts = vec![0usize; h];
    for c in 0..h {
        let c_inv = field.class_group.inverse_index(c);
        let q = &field.class_group.reduced_forms()[c_inv];
        counts[c] = count_representations(q, n as i128) / 2;
    }
    counts
}

/// Number of `(x, y) ∈ Z²` with `Q(x,y) = n` (both signs counted).
fn count_representations(q: &QuadForm, n: i128) -> usize {
    let mut count = 0usize;
    let d = q.disc();
    // Q(x,y) = n ⟹ y² ≤ 4·a·n/|D|
    let ymax = int_sqrt(4 * q.a() as i128 * n / (-d) as i128) + 1;
    for y in -ymax..=ymax {
        // a x² + (by) x + (c y² − n) = 0
        let a = q.a() as i128;
        let b = q.b() as i128 * y;
        let c = q.c() as i128 * y * y - n;
        let disc = b * b - 4 * a * c;
        if disc < 0 {
            continue;
        }
        let s = int_sqrt(disc);
        if s * s != disc {
            continue;
        }
        for sign in [1i128, -1] {
            let num = -b + sign * s;
            if num % (2 * a) == 0 {
                count += 1;
            }
            if s == 0 {
                break;
            }
        }
    }
    count
}

fn int_sqrt(n: i128) -> i128 {
    if n < 0 {
        return -1;
    }
    let mut x = (n as f64).sqrt() as i128;
    while x > 0 && x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Theta coefficients `λ(n) = Σ_{N𝔞 = n} Ω(𝔞)` for all `n ≤ n_max`.
///
/// For each class `C` the ideals of norm `n` are enumerated through the
/// lattice of a representative `𝔟 ∈ C^{−1}`: `α = x·B + y(t+ω) ∈ 𝔟` of norm
/// `B·Q(x,y)` gives the ideal `(α)𝔟^{−1}` of norm `Q(x,y)` and character
/// value `(α/|α|)^{−k}·Ω(𝔟)^{−1}`; the `±α` pair contributes once.
pub fn theta_coefficients(omega: &HeckeCharacter, n_max: usize) -> Result<ThetaSeries> {
    let field = &omega.field;
    let d = field.disc.value();
    let k = omega.infinity_exponent;
    let h = field.h();
    let mut lambda = vec![Complex64::new(0.0, 0.0); n_max];

    for c in 0..h {
        let c_inv = field.class_group.inverse_index(c);
        let q_inv = field.class_group.reduced_forms()[c_inv];
        let b_ideal = qforms::form_to_ideal(&q_inv);
        let prefactor = omega.eval(&b_ideal)?.conj(); // |Ω| = 1 so conj = inverse

        let bb = b_ideal.norm();
        let delta = d.rem_euclid(4).min(1) as i128;
        let tt = {
            // primitive 𝔟 = [B, t + ω]
            let p = b_ideal.primitive_part();
            debug_assert_eq!(p.norm(), bb);
            (p.a, p.t)
        };
        let (bnorm, t) = tt;
        let s = ((-d) as f64).sqrt();

        // lattice norm form: N(xB + y(t+ω)) = B·(Bx² + (2t+δ)xy + (N(t+ω)/B)y²)
        let bq = 2 * t + delta;
        let cq = (t * t + delta * t + (delta - d as i128) / 4) / bnorm;
        // bound: B x'² + ... = n ≤ n_max with y² ≤ 4 B n_max / |D|
        let ymax = int_sqrt(4 * bnorm * n_max as i128 / (-d) as i128) + 1;
        // half lattice: y > 0, or y = 0 with x > 0, covers each ±α pair once
        for y in 0..=ymax {
            // B x² + bq·x·y + cq·y² ≤ n_max: solve for x range
            let a2 = bnorm;
            let b2 = bq * y;
            let c2 = cq * y * y - n_max as i128;
            let disc2 = b2 * b2 - 4 * a2 * c2;
            if disc2 < 0 {
                continue;
            }
            let sq = int_sqrt(disc2);
            let xlo = div_ceil_i128(-b2 - sq, 2 * a2);
            let xhi = div_floor_i128(-b2 + sq, 2 * a2);
            for x in xlo..=xhi {
                if y == 0 && x <= 0 {
                    continue;
                }
                let n = a2 * x * x + b2 * x + cq * y * y;
                if n < 1 || n > n_max as i128 {
                    continue;
                }
                // α = xB + y(t + ω)
                let re = (x * bnorm + y * t) as f64 + y as f64 * delta as f64 / 2.0;
                let im = y as f64 * s / 2.0;
                let alpha = Complex64::new(re, im);
                let unit = (alpha / alpha.norm()).powi(-k as i32);
                lambda[(n - 1) as usize] += prefactor * unit;
            }
        }
    }

    // cuspidality: fails exactly for k = 0 and Ω a genus character
    // (k = 0 characters are class characters; genus ⟺ Ω² trivial)
    let cuspidal = if k == 0 {
        let sq = omega.mul(omega)?;
        !sq.is_trivial()?
    } else {
        true
    };

    Ok(ThetaSeries {
        disc: field.disc,
        infinity_exponent: k,
        weight: k + 1,
        level: -d,
        lambda,
        cuspidal,
    })
}

fn div_floor_i128(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    a.div_euclid(b)
}

fn div_ceil_i128(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    -((-a).div_euclid(b))
}
