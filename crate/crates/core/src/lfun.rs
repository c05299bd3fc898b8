//! Degree-4 Rankin–Selberg L-series `L(π ⊗ χΩ, s)`, smoothed approximate
//! functional equation central values, symmetric squares at 1, and the
//! archimedean constants of the explicit Waldspurger formula.
//!
//! Analytic normalization throughout: central point `s = 1/2`, conductor
//! `(N·|D|)²`, gamma pair `Γ_C(s + (k_θ+k_f)/2 − 1)·Γ_C(s + |k_θ−k_f|/2)`
//! with `Γ_C(s) = 2(2π)^{−s}Γ(s)`, root number `+1` under the Heegner
//! hypothesis. Coefficients come from
//! `L(s) = L(χ_K, 2s)·Σ λ_f(n)λ_θ(n) n^{−s}` and are real (conductor-1
//! theta coefficients pair conjugate ideals).

use crate::hecke::{self, HeckeCharacter, ThetaSeries};
use crate::modforms::Eigenform;
use crate::numerics::{self, NeumaierSum};
use crate::{Complex64, Error, Result};

/// One archimedean factor of a completed L-function.
#[derive(Debug, Clone, Copy)]
pub enum GammaFactor {
    /// `Γ_R(s + shift) = π^{−(s+shift)/2} Γ((s+shift)/2)`
    R(f64),
    /// `Γ_C(s + shift) = 2(2π)^{−(s+shift)} Γ(s+shift)`
    C(f64),
}

impl GammaFactor {
    fn ln_at(&self, s: Complex64) -> Complex64 {
        match *self {
            GammaFactor::R(a) => {
                let z = (s + a) / 2.0;
                -(s + a) / 2.0 * std::f64::consts::PI.ln() + numerics::ln_gamma_complex(z)
            }
            GammaFactor::C(a) => {
                let z = s + a;
                Complex64::new(2.0f64.ln(), 0.0)
                    - z * (2.0 * std::f64::consts::PI).ln()
                    + numerics::ln_gamma_complex(z)
            }
        }
    }
}

/// Smoothed AFE engine for a completed function `Λ(s) = Q^{s/2} γ(s) L(s)`
/// with `Λ(s) = ε·Λ(1−s)` (self-dual coefficients) and `G(u) = e^{θu²}`.
///
/// The Gaussian width matters: the weight decays like
/// `exp(−(ln y)²/(4θ))`, so a small `θ` keeps the term count near the
/// conductor scale instead of quasi-polynomial.
#[derive(Debug, Clone)]
pub struct AfeEngine {
    pub conductor: f64,
    pub factors: Vec<GammaFactor>,
    pub root_number: f64,
    /// Gaussian smoothing exponent θ in `G(u) = e^{θu²}`
    pub smoothing: f64,
}

impl AfeEngine {
    pub fn new(conductor: f64, factors: Vec<GammaFactor>, root_number: f64) -> Self {
        AfeEngine { conductor, factors, root_number, smoothing: 0.05 }
    }
}

/// Precomputed contour data for the incomplete-Mellin weight
/// `V_s(y) = (1/2πi)∫_{(c)} y^{−u} (γ(s+u)/γ(s)) e^{u²} du/u`.
pub struct VWeight {
    contour: f64,
    /// Σ|w| over the nodes — scale of the f64 rounding noise
    abs_mass: f64,
    /// measured quadrature floor: |eval| at y where the true V is ≪ 1e−100
    aliasing_floor: f64,
    nodes: Vec<(Complex64, Complex64)>, // (u, combined complex weight)
}

impl VWeight {
    /// Evaluate `V_s(y)`; real by contour symmetry.
    pub fn eval(&self, y: f64) -> f64 {
        let ln_y = y.ln();
        let mut sum = Complex64::new(0.0, 0.0);
        for &(u, w) in &self.nodes {
            sum += w * (-u * ln_y).exp();
        }
        sum.re
    }

    /// Absolute noise floor of `eval(y)`: rounding plus the measured
    /// quadrature aliasing; values below this are numerically zero.
    pub fn noise_floor(&self, y: f64) -> f64 {
        (1e-15 * self.abs_mass * y.powf(-self.contour)).max(self.aliasing_floor)
    }
}

impl AfeEngine {
    fn ln_gamma(&self, s: Complex64) -> Complex64 {
        self.factors.iter().map(|f| f.ln_at(s)).sum()
    }

    /// Build the contour data for `V_s` with Gauss–Legendre nodes on
    /// `u = c + it`, `|t| ≤ t_max`, refined until two node counts agree to
    /// 1e−9 on sample evaluations.
    ///
    /// The contour sits just right of the gamma poles: a tall contour
    /// amplifies `y^{−c}·e^{c²}` and the value then emerges from digits of
    /// cancellation, while `V` itself does not depend on `c` inside the
    /// pole-free band.
    pub fn v_weight(&self, s: f64) -> Result<VWeight> {
        // rightmost pole of γ(s+u)/u apart from u = 0 is at −min_j(s + a_j)
        let rightmost = self
            .factors
            .iter()
            .map(|f| match *f {
                GammaFactor::R(a) | GammaFactor::C(a) => -(s + a),
            })
            .fold(f64::MIN, f64::max);
        let contour = (rightmost + 0.35).max(0.35);
        let s = Complex64::new(s, 0.0);
        // guard: γ(s) itself must be finite and nonzero
        for f in &self.factors {
            let at_s = match *f {
                GammaFactor::R(a) => (s.re + a) / 2.0,
                GammaFactor::C(a) => s.re + a,
            };
            if at_s <= 0.0 && (at_s - at_s.round()).abs() < 1e-6 {
                return Err(Error::Accuracy(format!("gamma pole at shifted argument {at_s}")));
            }
        }
        let ln_gamma_s = self.ln_gamma(s);
        let theta = self.smoothing;
        // G(c+it) decays like e^{−θt²}: truncate once e^{θ(c²−t²)} < e^{−42}
        let t_max = ((42.0 / theta) + contour * contour).sqrt();
        let build = |n: usize| -> VWeight {
            let (xs, ws) = numerics::gauss_legendre(n);
            let nodes: Vec<(Complex64, Complex64)> = xs
                .iter()
                .zip(&ws)
                .map(|(&x, &w)| {
                    let u = Complex64::new(contour, t_max * x);
                    let g = (self.ln_gamma(s + u) - ln_gamma_s + theta * u * u).exp();
                    // du = i dt; (1/2πi)·i dt = dt/2π
                    let weight = g / u * (w * t_max / (2.0 * std::f64::consts::PI));
                    (u, weight)
                })
                .collect();
            let abs_mass = nodes.iter().map(|(_, w)| w.norm()).sum();
            let mut v = VWeight { contour, abs_mass, aliasing_floor: 0.0, nodes };
            // the true V at these y is far below f64: what remains is the
            // quadrature's own floor
            v.aliasing_floor = [1e5, 1e6, 1e7]
                .iter()
                .map(|&y| v.eval(y).abs())
                .fold(1e-18, f64::max);
            v
        };
        let mut n = 800;
        let mut v = build(n);
        loop {
            let v2 = build(n * 3 / 2);
            let samples = [0.01f64, 0.3, 1.0, 3.0, 20.0];
            let worst = samples
                .iter()
                .map(|&y| {
                    let a = v.eval(y);
                    let b = v2.eval(y);
                    (a - b).abs() / a.abs().max(1.0)
                })
                .fold(0.0f64, f64::max);
            if worst < 1e-9 {
                return Ok(v2);
            }
            n = n * 3 / 2;
            v = v2;
            if n > 8000 {
                return Err(Error::Accuracy("V-weight contour quadrature did not stabilize".into()));
            }
        }
    }

    /// `X(s) = Q^{(1−2s)/2} γ(1−s)/γ(s)` from the functional equation.
    pub fn dual_factor(&self, s: f64) -> f64 {
        let one_minus = Complex64::new(1.0 - s, 0.0);
        let s = Complex64::new(s, 0.0);
        let ratio = (self.ln_gamma(one_minus) - self.ln_gamma(s)).exp();
        debug_assert!(ratio.im.abs() <= 1e-9 * ratio.re.abs().max(1e-12));
        self.conductor.powf(0.5 - s.re) * ratio.re
    }
}

/// Central value with its accuracy report.
#[derive(Debug, Clone, Copy)]
pub struct CentralValue {
    pub value: f64,
    pub error_estimate: f64,
    pub terms_used: usize,
}

/// Partial-sum evaluation in the absolute-convergence region.
#[derive(Debug, Clone, Copy)]
pub struct DirichletEval {
    pub value: f64,
    /// rigorous `d₄`-majorant tail bound
    pub rigorous_bound: f64,
    /// spread of trailing checkpoints (empirical stabilization)
    pub empirical_spread: f64,
    pub terms_used: usize,
}

/// Dirichlet coefficients `b(n) = Σ_{d²|n} χ_K(d)·λ_f(n/d²)·λ_θ(n/d²)`.
pub fn rs_coefficients(f: &Eigenform, theta: &ThetaSeries, n_max: usize) -> Result<Vec<f64>> {
    if n_max > f.n_max() || n_max > theta.n_max() {
        return Err(Error::Accuracy(format!(
            "requested {n_max} coefficients, have λ_f up to {} and λ_θ up to {}",
            f.n_max(),
            theta.n_max()
        )));
    }
    let d = theta.disc.value();
    // conductor-1 theta coefficients are real; anything else is a bug
    let mut lt = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let l = theta.lambda(n);
        if l.im.abs() > 1e-8 * (1.0 + l.re.abs()) {
            return Err(Error::Integrity(format!("θ coefficient λ({n}) = {l} is not real")));
        }
        lt.push(l.re);
    }
    let mut b = vec![0.0f64; n_max];
    for dd in 1..=n_max {
        let dsq = dd * dd;
        if dsq > n_max {
            break;
        }
        let chi = hecke::kronecker(d, dd as i64) as f64;
        if chi == 0.0 {
            continue;
        }
        let mut m = 1usize;
        while m * dsq <= n_max {
            b[m * dsq - 1] += chi * f.lambda(m) * lt[m - 1];
            m += 1;
        }
    }
    Ok(b)
}

/// Rigorous tail bound `Σ_{n>X} d₄(n) n^{−σ}` via
/// `Σ_{n≤t} d₄(n) ≤ t(1+ln t)³` and partial summation (closed form).
pub fn d4_tail_majorant(x: f64, sigma: f64) -> f64 {
    assert!(sigma > 1.0 && x > 1.0);
    let a = sigma - 1.0;
    let v = 1.0 + x.ln();
    sigma * a.exp() * (-a * v).exp() * (v.powi(3) / a + 3.0 * v.powi(2) / (a * a) + 6.0 * v / (a * a * a) + 6.0 / (a * a * a * a))
}

/// Degree-4 Rankin–Selberg L-function of an eigenform and a Hecke character.
#[derive(Debug, Clone)]
pub struct RSLfunction {
    pub f: Eigenform,
    pub omega: HeckeCharacter,
    pub theta: ThetaSeries,
    b: Vec<f64>,
    pub engine: AfeEngine,
}

impl RSLfunction {
    /// Assemble from an eigenform and a conductor-1 Hecke character of
    /// ∞-type `k ≥ 0`; theta coefficients are computed to `n_hint` and
    /// recomputed on demand when evaluations need more.
    pub fn new(f: &Eigenform, omega: &HeckeCharacter, n_hint: usize) -> Result<Self> {
        if omega.infinity_exponent < 0 {
            return Err(Error::Precondition("∞-type exponent must be ≥ 0 here; conjugate first".into()));
        }
        if f.level() != 1 {
            return Err(Error::Unsupported("built-in RS data covers level-1 eigenforms".into()));
        }
        let n0 = n_hint.min(f.n_max()).max(16);
        let theta = hecke::theta_coefficients(omega, n0)?;
        let b = rs_coefficients(f, &theta, n0)?;
        let k_f = f.weight() as f64;
        let k_t = theta.weight as f64;
        let conductor = (f.level() as f64 * theta.level as f64).powi(2);
        let engine = AfeEngine::new(
            conductor,
            vec![
                GammaFactor::C((k_t + k_f) / 2.0 - 1.0),
                GammaFactor::C((k_t - k_f).abs() / 2.0),
            ],
            1.0,
        );
        Ok(RSLfunction { f: f.clone(), omega: omega.clone(), theta, b, engine })
    }

    /// Available coefficients (extend with `ensure_coefficients`).
    pub fn coefficients(&self) -> &[f64] {
        &self.b
    }

    pub fn b(&self, n: usize) -> f64 {
        self.b[n - 1]
    }

    /// Demand-driven recomputation of the theta expansion; never truncates
    /// silently, errors if the eigenform does not carry enough terms.
    pub fn ensure_coefficients(&mut self, n_max: usize) -> Result<()> {
        if n_max <= self.b.len() {
            return Ok(());
        }
        if n_max > self.f.n_max() {
            return Err(Error::Accuracy(format!(
                "need λ_f up to {n_max}, eigenform carries {}",
                self.f.n_max()
            )));
        }
        self.theta = hecke::theta_coefficients(&self.omega, n_max)?;
        self.b = rs_coefficients(&self.f, &self.theta, n_max)?;
        Ok(())
    }

    /// Partial-sum oracle in the absolute-convergence region `Re s ≥ 3/2`.
    ///
    /// Terms are added (extending coefficients on demand, up to `max_terms`)
    /// until the rigorous `d₄`-majorant tail is below `tol` or the budget is
    /// exhausted; both the rigorous bound and the empirical checkpoint
    /// spread are reported.
    pub fn dirichlet_eval(&mut self, s: f64, tol: f64, max_terms: usize) -> Result<DirichletEval> {
        if s < 1.5 {
            return Err(Error::Domain(format!(
                "dirichlet_eval is an absolute-convergence oracle (Re s ≥ 3/2), got {s}"
            )));
        }
        let mut x = self.b.len().min(max_terms).max(1000);
        loop {
            if d4_tail_majorant(x as f64, s) < tol || x >= max_terms {
                break;
            }
            x = (x * 2).min(max_terms);
        }
        self.ensure_coefficients(x)?;

        let mut sum = NeumaierSum::new();
        let mut checkpoints = Vec::new();
        let marks = [x / 2, x * 5 / 8, x * 3 / 4, x * 7 / 8, x];
        for n in 1..=x {
            sum.add(self.b(n) * (n as f64).powf(-s));
            if marks.contains(&n) {
                checkpoints.push(sum.value());
            }
        }
        let value = sum.value();
        let spread = checkpoints
            .iter()
            .map(|c| (c - value).abs())
            .fold(0.0f64, f64::max);
        Ok(DirichletEval {
            value,
            rigorous_bound: d4_tail_majorant(x as f64, s),
            empirical_spread: spread,
            terms_used: x,
        })
    }

    /// Central value by the symmetric smoothed AFE:
    /// `L(1/2) = (1 + ε) Σ b(n) n^{−1/2} V(n/√Q)` with root number `ε = +1`
    /// and self-dual real coefficients.
    pub fn afe_central_value(&mut self) -> Result<CentralValue> {
        let sqrt_q = self.engine.conductor.sqrt();
        let v = self.engine.v_weight(0.5)?;
        let double = 1.0 + self.engine.root_number;
        let mut sum = NeumaierSum::new();
        let mut abs_mass = 0.0f64;
        let mut noise_mass = 0.0f64;
        let mut v_max = 0.0f64;
        let mut n = 0usize;
        let mut tail_guard = 0usize;
        loop {
            n += 1;
            if n > self.b.len() {
                let target = (n * 2).max(2048);
                if target > self.f.n_max() {
                    return Err(Error::Accuracy(format!(
                        "AFE needs more than the {} available coefficients",
                        self.f.n_max()
                    )));
                }
                self.ensure_coefficients(target)?;
            }
            let y = n as f64 / sqrt_q;
            let vy = v.eval(y);
            v_max = v_max.max(vy.abs());
            let term = double * self.b(n) * (n as f64).powf(-0.5) * vy;
            sum.add(term);
            abs_mass += term.abs();
            noise_mass += (n as f64).sqrt() * v.noise_floor(y);
            // the weight has decayed into the noise floor: the remaining
            // true mass is below it
            if vy.abs() <= (1e-16 * v_max).max(2.0 * v.noise_floor(y)) {
                tail_guard += 1;
                if tail_guard > 32 {
                    break;
                }
            } else {
                tail_guard = 0;
            }
            if n > 5_000_000 {
                return Err(Error::Accuracy("AFE cutoff did not converge".into()));
            }
        }
        let value = sum.value();
        let error = 1e-9 * abs_mass.max(1.0) + 4.0 * noise_mass;
        Ok(CentralValue { value, error_estimate: error, terms_used: n })
    }

    /// Off-center AFE evaluation (used as the s = 2 validation gate):
    /// `L(s) = Σ b(n)n^{−s}V_s + X(s)·Σ b(n)n^{s−1}V_{1−s}`.
    pub fn afe_eval(&mut self, s: f64) -> Result<(f64, f64)> {
        let sqrt_q = self.engine.conductor.sqrt();
        let v1 = self.engine.v_weight(s)?;
        let v2 = self.engine.v_weight(1.0 - s)?;
        let xs = self.engine.dual_factor(s);
        let mut sum = NeumaierSum::new();
        let mut abs_mass = 0.0f64;
        let mut noise_mass = 0.0f64;
        let mut v1_max = 0.0f64;
        let mut v2_max = 0.0f64;
        let mut n = 0usize;
        let mut tail_guard = 0usize;
        loop {
            n += 1;
            if n > self.b.len() {
                let target = (n * 2).max(2048);
                if target > self.f.n_max() {
                    return Err(Error::Accuracy("AFE needs more coefficients".into()));
                }
                self.ensure_coefficients(target)?;
            }
            let y = n as f64 / sqrt_q;
            let v1y = v1.eval(y);
            let v2y = v2.eval(y);
            v1_max = v1_max.max(v1y.abs());
            v2_max = v2_max.max(v2y.abs());
            let t1 = self.b(n) * (n as f64).powf(-s) * v1y;
            let t2 = xs * self.b(n) * (n as f64).powf(s - 1.0) * v2y;
            sum.add(t1);
            sum.add(t2);
            abs_mass += t1.abs() + t2.abs();
            // |b(n)| ≤ d₄(n) ≤ n against the per-evaluation noise floors
            noise_mass += (n as f64).powf(1.0 - s) * v1.noise_floor(y)
                + (n as f64).powf(s) * xs.abs() * v2.noise_floor(y);
            let done1 = v1y.abs() <= (1e-16 * v1_max).max(2.0 * v1.noise_floor(y));
            let done2 = v2y.abs() <= (1e-16 * v2_max).max(2.0 * v2.noise_floor(y));
            if done1 && done2 {
                tail_guard += 1;
                if tail_guard > 32 {
                    break;
                }
            } else {
                tail_guard = 0;
            }
            if n > 5_000_000 {
                return Err(Error::Accuracy("AFE cutoff did not converge".into()));
            }
        }
        Ok((sum.value(), 1e-9 * abs_mass.max(1.0) + 4.0 * noise_mass))
    }
}

/// `L(sym² f, 1)` by the smoothed AFE of the degree-3 symmetric square
/// (conductor 1, `Γ_R(s+1)Γ_C(s+k−1)`, root number +1, entire for the
/// non-CM level-1 eigenforms handled here).
pub fn sym_square_at_1(f: &Eigenform) -> Result<f64> {
    sym_square_afe(f, 400)
}

fn sym_square_afe(f: &Eigenform, n_terms: usize) -> Result<f64> {
    let k = f.weight() as f64;
    let engine = AfeEngine::new(1.0, vec![GammaFactor::R(1.0), GammaFactor::C(k - 1.0)], 1.0);
    let c = sym_square_coefficients(f, n_terms)?;
    let v1 = engine.v_weight(1.0)?;
    let v0 = engine.v_weight(0.0)?;
    let xs = engine.dual_factor(1.0);
    let mut sum = NeumaierSum::new();
    for n in 1..=n_terms {
        let y = n as f64;
        sum.add(c[n - 1] * (n as f64).powf(-1.0) * v1.eval(y));
        sum.add(xs * c[n - 1] * v0.eval(y));
    }
    let value = sum.value();
    if value <= 0.0 {
        return Err(Error::Integrity(format!("L(sym², 1) = {value} must be positive")));
    }
    Ok(value)
}

/// Dirichlet coefficients of `L(sym² f, s)` (multiplicative, from the local
/// recursion `c(p^j) = λ(p²)c(p^{j−1}) − λ(p²)c(p^{j−2}) + c(p^{j−3})`,
/// with `λ(p²) = λ(p)² − 1`).
pub fn sym_square_coefficients(f: &Eigenform, n_max: usize) -> Result<Vec<f64>> {
    if n_max > f.n_max() {
        return Err(Error::Accuracy("sym² coefficients need λ(p) in range".into()));
    }
    // smallest prime factor sieve
    let mut spf = vec![0usize; n_max + 1];
    for i in 2..=n_max {
        if spf[i] == 0 {
            let mut m = i;
            while m <= n_max {
                if spf[m] == 0 {
                    spf[m] = i;
                }
                m += i;
            }
        }
    }
    let mut c = vec![0.0f64; n_max + 1];
    c[1] = 1.0;
    for n in 2..=n_max {
        let p = spf[n];
        let mut e = 0u32;
        let mut m = n;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if m != 1 {
            c[n] = c[m] * c[n / m];
            continue;
        }
        // n = p^e: local recursion with λ(p²) = λ(p)² − 1 (Hecke)
        let lp = f.lambda(p);
        let lp2 = lp * lp - 1.0;
        let mut cj = [1.0f64, lp2, 0.0, 0.0]; // c(p^0), c(p^1), …
        cj[2] = lp2 * cj[1] - lp2 * cj[0];
        cj[3] = lp2 * cj[2] - lp2 * cj[1] + cj[0];
        let val = match e {
            1 => cj[1],
            2 => cj[2],
            3 => cj[3],
            _ => {
                let mut prev3 = cj[1];
                let mut prev2 = cj[2];
                let mut prev1 = cj[3];
                let mut v = 0.0;
                for _ in 4..=e {
                    v = lp2 * prev1 - lp2 * prev2 + prev3;
                    prev3 = prev2;
                    prev2 = prev1;
                    prev1 = v;
                }
                v
            }
        };
        c[n] = val;
    }
    Ok(c[1..].to_vec())
}

/// Truncated Euler product for `L(sym², 1)` over primes `p ≤ bound`
/// (cross-check route; converges slowly).
pub fn sym_square_euler_product(f: &Eigenform, bound: usize) -> Result<f64> {
    let mut log_l = 0.0f64;
    for p in 2..=bound.min(f.n_max()) {
        if !is_prime(p) {
            continue;
        }
        let lp = f.lambda(p);
        // α² + β² with αβ = 1: λ(p)² − 2
        let a2b2 = lp * lp - 2.0;
        let x = 1.0 / p as f64;
        // (1 − α²x)(1 − x)(1 − β²x) = 1 − λ(p²)x + λ(p²)x² − x³ with
        // λ(p²) = α² + 1 + β²
        let e1 = a2b2 + 1.0;
        let local = 1.0 - e1 * x + e1 * x * x - x * x * x;
        log_l -= local.ln();
    }
    Ok(log_l.exp())
}

/// Partial-sum cross-check route `ζ(2)·Σ_{n≤X} λ(n²)/n`.
pub fn sym_square_zeta_route(f: &Eigenform, n_terms: usize) -> Result<f64> {
    let mut sum = NeumaierSum::new();
    let bound = n_terms.min((f.n_max() as f64).sqrt() as usize);
    // λ(n²) multiplicatively from λ(p^{2e}) (within the stored range use
    // stored values directly)
    for n in 1..=bound {
        sum.add(f.lambda(n * n) / n as f64);
    }
    Ok(sum.value() * std::f64::consts::PI * std::f64::consts::PI / 6.0)
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Which archimedean type the `c_∞` constant refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArchKind {
    /// weight-0 spectral parameter `t` (Maass)
    Principal,
    /// holomorphic lowest weight `k_π`
    Discrete,
}

/// The two printed variants of the archimedean constant:
///
/// - principal series (both entries equal):
///   `(2π)^k Π_{j=0}^{k/2−1} (1/4 + t² + j(j+1))^{−1}`;
/// - discrete series: variant A
///   `(2π)^{k−k_π} Γ(k_π+1) / (Γ((k+2)/2)·B((k+k_π)/2, (k−k_π+2)/2))`
///   and variant B
///   `(2π)^{k−k_π−1} Γ(k_π) / (Γ((k−2)/2)·B((k+k_π+1)/2, (k−k_π+1)/2))`.
///
/// The two discrete displays disagree; downstream reports print both.
pub fn c_infinity(kind: ArchKind, k: i64, k_pi: i64, t: f64) -> Result<(f64, f64)> {
    if k % 2 != 0 {
        return Err(Error::Domain(format!("weight k must be even, got {k}")));
    }
    match kind {
        ArchKind::Principal => {
            if k < 0 {
                return Err(Error::Domain("principal-series constant needs k ≥ 0".into()));
            }
            let mut v = (2.0 * std::f64::consts::PI).powi(k as i32);
            for j in 0..(k / 2) {
                v /= 0.25 + t * t + (j * (j + 1)) as f64;
            }
            Ok((v, v))
        }
        ArchKind::Discrete => {
            if k < k_pi {
                return Err(Error::Domain(format!("need k ≥ k_π, got k = {k} < {k_pi}")));
            }
            let two_pi = 2.0 * std::f64::consts::PI;
            let kf = k as f64;
            let kp = k_pi as f64;
            let va = two_pi.powf(kf - kp) * numerics::gamma_real(kp + 1.0)
                / (numerics::gamma_real((kf + 2.0) / 2.0)
                    * numerics::beta_real((kf + kp) / 2.0, (kf - kp + 2.0) / 2.0));
            let vb = two_pi.powf(kf - kp - 1.0) * numerics::gamma_real(kp)
                / (numerics::gamma_real((kf - 2.0) / 2.0)
                    * numerics::beta_real((kf + kp + 1.0) / 2.0, (kf - kp + 1.0) / 2.0));
            Ok((va, vb))
        }
    }
}
