//! Level-N oriented Heegner forms, Heegner points, optimal embeddings, and
//! explicit class-group representatives.
//!
//! A Heegner form of level `N` and orientation `r` is `[a,b,c]` of
//! discriminant `D` with `N | a` and `b ≡ r mod 2N`, where `r² ≡ D mod 4N`.
//! Its Heegner point is `z_Q = (−b + i√|D|)/(2a)`, and its optimal embedding
//! sends `√D` to `(b, 2c; −2a, −b)`.
//!
//! The explicit representatives follow the smallest-split-prime recipe: for
//! each nontrivial ideal class the smallest admissible prime `p` coprime to
//! `2Na` with `b_p ≡ b mod 2a`, `b_p² ≡ D mod p` yields
//! `Q = [ap, b_p, (b_p²−D)/(4ap)]` in the class `[base]·[𝔭]`.

use crate::hecke::{self, IdealHNF};
use crate::qforms::{self, ClassGroup, Discriminant, QuadForm};
use crate::{Complex64, Error, Result};

/// Level and compatible square root of `D` mod `4N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Orientation {
    pub level: i64,
    pub residue: i64,
}

fn is_squarefree_u(mut n: i64) -> bool {
    let mut d = 2i64;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return false;
            }
        }
        d += 1;
    }
    true
}

/// All square roots `r` of `D` mod `4N`, reduced mod `2N`.
///
/// Requires `N` squarefree with every prime divisor split in `Q(√D)` and
/// `gcd(D, 2N) = 1` for `N > 1`; a violating prime is named in the error.
pub fn orientations(d: Discriminant, level: i64) -> Result<Vec<i64>> {
    if level < 1 || !is_squarefree_u(level) {
        return Err(Error::Precondition(format!("level must be positive squarefree, got {level}")));
    }
    if level > 1 {
        if gcd(d.value(), 2 * level) != 1 {
            return Err(Error::Precondition(format!(
                "gcd(D, 2N) = 1 required for N > 1: D = {d}, N = {level}"
            )));
        }
        let mut p = 2i64;
        let mut m = level;
        while m > 1 {
            while m % p != 0 {
                p += 1;
            }
            m /= p;
            if hecke::kronecker(d.value(), p) != 1 {
                return Err(Error::Precondition(format!(
                    "prime {p} divides the level but does not split in Q(√{d})"
                )));
            }
        }
    }
    let modulus = 4 * level;
    let dd = d.value().rem_euclid(modulus);
    let mut roots = Vec::new();
    for r in 0..2 * level {
        if (r * r) % modulus == dd % modulus {
            roots.push(r);
        }
    }
    if roots.is_empty() {
        return Err(Error::Precondition(format!("no orientation: {d} is not a square mod {modulus}")));
    }
    Ok(roots)
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Heegner form: `N | a`, `b ≡ r mod 2N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeegnerForm {
    pub form: QuadForm,
    pub orientation: Orientation,
}

impl HeegnerForm {
    pub fn new(form: QuadForm, orientation: Orientation) -> Result<Self> {
        let n = orientation.level;
        if form.a() % n != 0 {
            return Err(Error::Precondition(format!("level {n} does not divide a = {}", form.a())));
        }
        if (form.b() - orientation.residue).rem_euclid(2 * n) != 0 {
            return Err(Error::Precondition(format!(
                "b = {} is not ≡ {} mod {}",
                form.b(),
                orientation.residue,
                2 * n
            )));
        }
        Ok(HeegnerForm { form, orientation })
    }

    pub fn disc(&self) -> i64 {
        self.form.disc()
    }
}

/// CM point on the upper half-plane attached to a Heegner form.
#[derive(Debug, Clone, Copy)]
pub struct HeegnerPoint {
    pub z: Complex64,
    pub source: HeegnerForm,
}

/// `z_Q = (−b + i√|D|)/(2a)`.
pub fn heegner_point(q: &HeegnerForm) -> HeegnerPoint {
    let (a, b) = (q.form.a() as f64, q.form.b() as f64);
    let s = (-q.disc() as f64).sqrt();
    HeegnerPoint { z: Complex64::new(-b / (2.0 * a), s / (2.0 * a)), source: *q }
}

/// Optimal embedding `Ψ(√D) = (b, 2c; −2a, −b)`: trace 0, determinant −D,
/// Möbius action fixing the Heegner point.
#[derive(Debug, Clone, Copy)]
pub struct OptimalEmbedding {
    pub matrix: [[i64; 2]; 2],
    pub source: HeegnerForm,
}

pub fn embedding_matrix(q: &HeegnerForm) -> OptimalEmbedding {
    let (a, b, c) = (q.form.a(), q.form.b(), q.form.c());
    OptimalEmbedding { matrix: [[b, 2 * c], [-2 * a, -b]], source: *q }
}

impl OptimalEmbedding {
    pub fn trace(&self) -> i64 {
        self.matrix[0][0] + self.matrix[1][1]
    }

    pub fn det(&self) -> i64 {
        self.matrix[0][0] * self.matrix[1][1] - self.matrix[0][1] * self.matrix[1][0]
    }

    /// Image of `u + v√D` under the embedding, as a real matrix pair
    /// `u·I + v·Ψ(√D)`.
    pub fn embed(&self, u: f64, v: f64) -> [[f64; 2]; 2] {
        let m = &self.matrix;
        [
            [u + v * m[0][0] as f64, v * m[0][1] as f64],
            [v * m[1][0] as f64, u + v * m[1][1] as f64],
        ]
    }
}

/// The real conjugator carrying the embedded circle `Ψ(S¹)` into SO(2):
/// `γ_∞ = (√|D|, −b; 0, 2a)`. Its Möbius action sends `i` to `z_Q`, and
/// `γ_∞^{−1}·Ψ(√D)·γ_∞ = √|D|·(0, 1; −1, 0)` exactly.
pub fn gamma_infinity(q: &HeegnerForm) -> [[f64; 2]; 2] {
    let s = (-q.disc() as f64).sqrt();
    [[s, -q.form.b() as f64], [0.0, 2.0 * q.form.a() as f64]]
}

/// `γ_∞^{−1}·M·γ_∞` for a real 2×2 matrix.
pub fn conjugate_by_gamma(gamma: &[[f64; 2]; 2], m: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let det = gamma[0][0] * gamma[1][1] - gamma[0][1] * gamma[1][0];
    let inv = [
        [gamma[1][1] / det, -gamma[0][1] / det],
        [-gamma[1][0] / det, gamma[0][0] / det],
    ];
    let mg = mat_mul(m, gamma);
    mat_mul(&inv, &mg)
}

fn mat_mul(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

/// A Heegner form of level `N` and orientation `r` in the principal class.
///
/// Searches primitive vectors `(x, y)` with `Q_pr(x, y) ≡ 0 mod N`, completes
/// them to a unimodular change of variables and translates; fails loudly past
/// the search bound.
pub fn base_heegner_form(d: Discriminant, level: i64, r: i64) -> Result<HeegnerForm> {
    let orientation = Orientation { level, residue: r.rem_euclid(2 * level) };
    let principal = d.principal_form();
    if level == 1 {
        // translate b into the parity class of r (b ≡ δ ≡ D ≡ r mod 2 already)
        return HeegnerForm::new(principal, orientation);
    }
    let bound = 4 * level + 32;
    for x in -bound..=bound {
        for y in -bound..=bound {
            if gcd(x, y) != 1 {
                continue;
            }
            let a_new = principal.eval(x, y);
            if a_new <= 0 || a_new % level as i128 != 0 {
                continue;
            }
            // complete (x, y) to U = (x, u; y, v) with xv − uy = 1
            let (g, v, u_neg) = ext_gcd64(x, y);
            debug_assert_eq!(g, 1);
            let (u, v) = (-u_neg, v);
            let t = qforms::Transform { p: x, q: u, r: y, s: v };
            debug_assert_eq!(t.det(), 1);
            let q2 = principal.apply(&t);
            debug_assert_eq!(q2.a() as i128, a_new);
            // b mod 2N is pinned by (x, y): translations shift b by
            // multiples of 2a ≡ 0 mod 2N, so just test this vector
            if (q2.b() - orientation.residue).rem_euclid(2 * level) == 0 {
                return HeegnerForm::new(q2, orientation);
            }
        }
    }
    Err(Error::SearchExhausted(format!(
        "no principal-class Heegner form of level {level}, orientation {r}, D = {d} within bound {bound}"
    )))
}

fn ext_gcd64(a: i64, b: i64) -> (i64, i64, i64) {
    // g = s·a + t·b
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// One row of the explicit class-group representatives.
#[derive(Debug, Clone)]
pub struct RepresentativeEntry {
    /// rational prime (1 in the placeholder first row)
    pub p: i64,
    /// the lift `b_p ≡ b mod 2a`, `b_p² ≡ D mod 4p`
    pub b_lift: i64,
    /// `[a·p, b_p, c_p]`
    pub heegner_form: HeegnerForm,
    /// the prime ideal `𝔭` above `p` selected by the lift (ring for p = 1)
    pub prime_ideal: IdealHNF,
    /// index of the class of `heegner_form` in the class group
    pub class_index: usize,
}

/// Explicit representatives: one Heegner form per ideal class, built from
/// the base form by the smallest admissible split primes.
#[derive(Debug, Clone)]
pub struct ExplicitRepresentatives {
    pub base: HeegnerForm,
    pub entries: Vec<RepresentativeEntry>,
}

/// Smallest nonnegative solution of `x ≡ r1 mod m1`, `x ≡ r2 mod m2`
/// for coprime moduli.
fn crt(r1: i128, m1: i128, r2: i128, m2: i128) -> i128 {
    let (g, u, _) = ext_gcd128(m1, m2);
    debug_assert_eq!(g, 1);
    let m = m1 * m2;
    let diff = (r2 - r1).rem_euclid(m2);
    ((r1 + m1 * ((diff * u).rem_euclid(m2))) % m + m) % m
}

fn ext_gcd128(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Build the representatives: iterate split primes coprime to `2Na` in
/// increasing order, skip primes whose class is already covered, stop once
/// every class is hit. The `b_p` lift solves `b_p² ≡ D mod p` (smallest
/// nonnegative CRT solution with `b_p ≡ b mod 2a`).
pub fn explicit_representatives(
    cg: &ClassGroup,
    base: &HeegnerForm,
) -> Result<ExplicitRepresentatives> {
    let d = cg.disc();
    if base.disc() != d.value() {
        return Err(Error::Precondition("base form has the wrong discriminant".into()));
    }
    let base_class = cg.class_index(&base.form)?;
    if base_class != cg.principal_index() {
        return Err(Error::Precondition("base Heegner form must lie in the principal class".into()));
    }
    let h = cg.h();
    let (a, b) = (base.form.a(), base.form.b());
    let n = base.orientation.level;

    let mut entries: Vec<Option<RepresentativeEntry>> = vec![None; h];
    entries[base_class] = Some(RepresentativeEntry {
        p: 1,
        b_lift: b,
        heegner_form: *base,
        prime_ideal: IdealHNF::one(d.value()),
        class_index: base_class,
    });
    let mut covered = 1usize;

    let mut p = 2i64;
    let prime_bound = 40_000i64;
    while covered < h {
        p = next_prime(p);
        if p > prime_bound {
            return Err(Error::SearchExhausted(format!(
                "class coverage incomplete below prime bound {prime_bound} for D = {d}"
            )));
        }
        if (2 * n * a) % p == 0 || hecke::kronecker(d.value(), p) != 1 {
            continue;
        }
        // b_p² ≡ D mod p by brute force, then CRT with b_p ≡ b mod 2a;
        // the two roots give the two conjugate primes — take the smaller
        // nonnegative CRT solution.
        let dd = d.value().rem_euclid(p) as i128;
        let mut roots = Vec::new();
        for t in 0..p as i128 {
            if (t * t) % p as i128 == dd {
                roots.push(t);
            }
        }
        let lifts: Vec<i128> = roots
            .iter()
            .map(|&t| crt(b as i128, 2 * a as i128, t, p as i128))
            .collect();
        let b_lift = *lifts.iter().min().ok_or_else(|| {
            Error::Integrity(format!("split prime {p} has no square root of D"))
        })?;
        let entry = representative_entry(cg, base, p, b_lift)?;
        let slot = entry.class_index;
        if entries[slot].is_none() {
            entries[slot] = Some(entry);
            covered += 1;
        }
    }

    let mut out: Vec<RepresentativeEntry> = entries.into_iter().map(Option::unwrap).collect();
    // base first, then by prime
    out.sort_by_key(|e| (e.p, e.b_lift));
    Ok(ExplicitRepresentatives { base: *base, entries: out })
}

fn representative_entry(
    cg: &ClassGroup,
    base: &HeegnerForm,
    p: i64,
    b_lift: i128,
) -> Result<RepresentativeEntry> {
    let d = cg.disc();
    let (a, _b) = (base.form.a() as i128, base.form.b() as i128);
    let ap = a * p as i128;
    let num = b_lift * b_lift - d.value() as i128;
    if num % (4 * ap) != 0 {
        return Err(Error::Integrity(format!(
            "lift {b_lift} fails integrality at p = {p} (4ap ∤ b_p² − D)"
        )));
    }
    let c = num / (4 * ap);
    let form = QuadForm::new(
        i64::try_from(ap).map_err(|_| Error::Domain("a·p exceeds i64".into()))?,
        i64::try_from(b_lift).map_err(|_| Error::Domain("b_p exceeds i64".into()))?,
        i64::try_from(c).map_err(|_| Error::Domain("c_p exceeds i64".into()))?,
    )?;
    let hf = HeegnerForm::new(form, base.orientation)?;
    // the prime ideal 𝔭 = [p, (−b_p + √D)/2] selected by the lift
    let delta = d.parity() as i128;
    let t = (-b_lift - delta) / 2;
    let prime_ideal = IdealHNF::from_parts(d.value(), p as i128, t.rem_euclid(p as i128), 1)?;
    let class_index = cg.class_index(&form)?;
    Ok(RepresentativeEntry { p, b_lift: b_lift as i64, heegner_form: hf, prime_ideal, class_index })
}

fn next_prime(after: i64) -> i64 {
    let mut n = after + 1;
    loop {
        let mut is_prime = n >= 2;
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                is_prime = false;
                break;
            }
            d += 1;
        }
        if is_prime {
            return n;
        }
        n += 1;
    }
}

/// The ideal identity behind the representatives: for every entry,
/// `[a·p, (−b_p+√D)/2] = [(−b_p+√D)/2, p]·[(−b+√D)/2, a]` as ideals, and the
/// class identity `[Q_p] = [base]·[𝔭]`. Returns false (with the failing
/// index in the diagnostics) instead of erroring.
pub fn lemma41_check(cg: &ClassGroup, rep: &ExplicitRepresentatives) -> Result<(bool, Vec<usize>)> {
    let mut failures = Vec::new();
    let base_ideal = qforms::form_to_ideal(&rep.base.form);
    for (i, e) in rep.entries.iter().enumerate() {
        if e.p == 1 {
            continue;
        }
        let lhs = qforms::form_to_ideal(&e.heegner_form.form);
        let rhs = e.prime_ideal.mul(&base_ideal)?;
        let exact = lhs == rhs;
        // class identity through the bijection
        let p_class = cg.class_index(&e.prime_ideal.to_form()?)?;
        let base_class = cg.class_index(&rep.base.form)?;
        let class_ok = cg.mul(base_class, p_class) == e.class_index;
        if !(exact && class_ok) {
            failures.push(i);
        }
    }
    Ok((failures.is_empty(), failures))
}
