//! Integral binary quadratic forms and class groups of imaginary quadratic
//! fields.
//!
//! A form `[a, b, c]` is `Q(x,y) = ax² + bxy + cy²` with discriminant
//! `D = b² − 4ac < 0`, positive definite (`a > 0`) and primitive
//! (`gcd(a,b,c) = 1`). Proper equivalence classes of forms of a fixed
//! fundamental discriminant form a finite abelian group under Gauss
//! composition — the class group — with the principal form as identity and
//! `[a,−b,c]` inverse to `[a,b,c]`.
//!
//! Coefficients are `i64` with `i128` intermediates; composition rejects
//! inputs whose intermediates would exceed that rather than wrapping.

use crate::{Error, Result};

/// Negative fundamental discriminant.
///
/// `D` is fundamental iff `D ≡ 1 mod 4` and squarefree, or `D = 4m` with
/// `m ≡ 2,3 mod 4` squarefree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Discriminant {
    d: i64,
}

impl Discriminant {
    pub fn new(d: i64) -> Result<Self> {
        if !is_fundamental(d)? {
            return Err(Error::Domain(format!("{d} is not a fundamental discriminant")));
        }
        Ok(Discriminant { d })
    }

    pub fn value(&self) -> i64 {
        self.d
    }

    pub fn abs(&self) -> i64 {
        -self.d
    }

    /// `0` for `D ≡ 0 mod 4`, `1` for `D ≡ 1 mod 4`. This is `b` of the
    /// principal form and the trace of the standard generator ω.
    pub fn parity(&self) -> i64 {
        self.d.rem_euclid(4).min(1)
    }

    /// The principal (identity) form: `[1,0,−D/4]` or `[1,1,(1−D)/4]`.
    pub fn principal_form(&self) -> QuadForm {
        let delta = self.parity();
        QuadForm {
            a: 1,
            b: delta,
            c: (delta - self.d) / 4,
        }
    }
}

impl std::fmt::Display for Discriminant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.d)
    }
}

fn is_squarefree(mut n: i64) -> bool {
    debug_assert!(n > 0);
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

/// Whether a negative integer is a fundamental discriminant.
pub fn is_fundamental(d: i64) -> Result<bool> {
    if d >= 0 {
        return Err(Error::Domain(format!("discriminant must be negative, got {d}")));
    }
    Ok(match d.rem_euclid(4) {
        1 => is_squarefree(-d),
        0 => {
            let m = d / 4;
            is_squarefree(-m) && matches!(m.rem_euclid(4), 2 | 3)
        }
        _ => false,
    })
}

/// Primitive positive definite integral binary quadratic form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadForm {
    a: i64,
    b: i64,
    c: i64,
}

/// Coordinate change in SL₂(Z). `apply` sends `Q` to `Q(px+qy, rx+sy)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transform {
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub s: i64,
}

impl Transform {
    pub const IDENTITY: Transform = Transform { p: 1, q: 0, r: 0, s: 1 };

    pub fn det(&self) -> i64 {
        self.p * self.s - self.q * self.r
    }

    fn mul(&self, o: &Transform) -> Transform {
        Transform {
            p: self.p * o.p + self.q * o.r,
            q: self.p * o.q + self.q * o.s,
            r: self.r * o.p + self.s * o.r,
            s: self.r * o.q + self.s * o.s,
        }
    }
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let q = QuadForm { a, b, c };
        if a <= 0 || q.disc() >= 0 {
            return Err(Error::Domain(format!(
                "[{a},{b},{c}] is not positive definite (a > 0, b² − 4ac < 0 required)"
            )));
        }
        if gcd(gcd(a, b), c) != 1 {
            return Err(Error::Domain(format!("[{a},{b},{c}] is imprimitive")));
        }
        Ok(q)
    }

    pub fn a(&self) -> i64 {
        self.a
    }
    pub fn b(&self) -> i64 {
        self.b
    }
    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn disc(&self) -> i64 {
        let d = self.b as i128 * self.b as i128 - 4 * self.a as i128 * self.c as i128;
        i64::try_from(d).expect("discriminant exceeds i64")
    }

    /// Evaluate `Q(x, y)` exactly.
    pub fn eval(&self, x: i64, y: i64) -> i128 {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let (x, y) = (x as i128, y as i128);
        a * x * x + b * x * y + c * y * y
    }

    /// The inverse class representative `[a, −b, c]`.
    pub fn inverse(&self) -> QuadForm {
        QuadForm { a: self.a, b: -self.b, c: self.c }
    }

    /// `|b| ≤ a ≤ c`, with `b ≥ 0` when `|b| = a` or `a = c`.
    pub fn is_reduced(&self) -> bool {
        let ok = self.b.abs() <= self.a && self.a <= self.c;
        if !ok {
            return false;
        }
        if (self.b.abs() == self.a || self.a == self.c) && self.b < 0 {
            return false;
        }
        true
    }

    /// `Q(px+qy, rx+sy)` for a unimodular transform.
    pub fn apply(&self, t: &Transform) -> QuadForm {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let (p, q, r, s) = (t.p as i128, t.q as i128, t.r as i128, t.s as i128);
        let na = a * p * p + b * p * r + c * r * r;
        let nb = 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s;
        let nc = a * q * q + b * q * s + c * s * s;
        QuadForm {
            a: i64::try_from(na).expect("transform overflow"),
            b: i64::try_from(nb).expect("transform overflow"),
            c: i64::try_from(nc).expect("transform overflow"),
        }
    }
}

impl std::fmt::Display for QuadForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{},{},{}]", self.a, self.b, self.c)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Extended gcd over i128: `g = u·a + v·b`, `g ≥ 0`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
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

/// Reduce a form to its canonical representative, tracking the SL₂(Z)
/// coordinate change: returns `(R, U)` with `R = Q.apply(U)` reduced.
pub fn reduce(q: &QuadForm) -> (QuadForm, Transform) {
    let mut f = *q;
    let mut u = Transform::IDENTITY;
    loop {
        // translate b into (−a, a]
        if f.b > f.a || f.b <= -f.a {
            // b + 2ma in (−a, a]: m = round towards the window
            let two_a = 2 * f.a as i128;
            let m128 = (-(f.b as i128) + f.a as i128).div_euclid(two_a);
            let m = i64::try_from(m128).expect("reduction translation overflow");
            let t = Transform { p: 1, q: m, r: 0, s: 1 };
            f = f.apply(&t);
            u = u.mul(&t);
        }
        if f.a > f.c {
            let t = Transform { p: 0, q: -1, r: 1, s: 0 };
            f = f.apply(&t);
            u = u.mul(&t);
            continue;
        }
        break;
    }
    // tie-breaking: b ≥ 0 whenever |b| = a or a = c
    if f.b < 0 && (-f.b == f.a || f.a == f.c) {
        if -f.b == f.a {
            // translation b → b + 2a = a preserves c
            let t = Transform { p: 1, q: 1, r: 0, s: 1 };
            f = f.apply(&t);
            u = u.mul(&t);
        } else {
            // a = c: swap flips the sign of b
            let t = Transform { p: 0, q: -1, r: 1, s: 0 };
            f = f.apply(&t);
            u = u.mul(&t);
        }
    }
    debug_assert!(f.is_reduced());
    debug_assert_eq!(u.det(), 1);
    debug_assert_eq!(q.apply(&u), f);
    (f, u)
}

/// All reduced primitive forms of discriminant `D`, scanning `|b| ≤ a ≤ √(|D|/3)`.
///
/// The list length is the class number `h(D)`.
pub fn enumerate_reduced(d: Discriminant) -> Vec<QuadForm> {
    let dd = d.value();
    let mut forms = Vec::new();
    let mut a = 1i64;
    while a * a * 3 <= -dd {
        let mut b = -a + 1;
        while b <= a {
            let num = b as i128 * b as i128 - dd as i128;
            if num % (4 * a as i128) == 0 {
                let c128 = num / (4 * a as i128);
                if let Ok(c) = i64::try_from(c128) {
                    if c >= a && gcd(gcd(a, b), c) == 1 {
                        let q = QuadForm { a, b, c };
                        if q.is_reduced() {
                            forms.push(q);
                        }
                    }
                }
            }
            b += 1;
        }
        a += 1;
    }
    forms.sort_by_key(|f| (f.a, f.b, f.c));
    forms
}

/// Gauss composition: the reduced representative of the class `[Q1][Q2]`.
///
/// Classical Dirichlet composition: with `s = (b1+b2)/2`, `n = (b1−b2)/2` and
/// `d = gcd(a1, a2, s) = u·a1 + v·a2 + w·s`,
///
/// ```text
/// A = a1·a2/d²,   B ≡ b2 + 2(a2/d)(v·n − w·c2)  (mod 2A),   C = (B² − D)/(4A)
/// ```
pub fn compose(q1: &QuadForm, q2: &QuadForm) -> Result<QuadForm> {
    if q1.disc() != q2.disc() {
        return Err(Error::Domain(format!(
            "cannot compose forms of discriminants {} and {}",
            q1.disc(),
            q2.disc()
        )));
    }
    let d = q1.disc() as i128;
    let (a1, b1) = (q1.a as i128, q1.b as i128);
    let (a2, b2, c2) = (q2.a as i128, q2.b as i128, q2.c as i128);

    let s = (b1 + b2) / 2;
    let n = (b1 - b2) / 2;
    // g = gcd(a1, a2, s) with cofactors: g = (x·u)·a1 + (x·v)·a2 + w·s
    let (g0, u0, v0) = ext_gcd(a1, a2);
    let (g, x, w) = ext_gcd(g0, s);
    let (v, _u) = (x * v0, x * u0);

    let a = a1 / g * (a2 / g);
    let two_a = 2 * a;
    let inner = v * n - w * c2;
    let b_raw = b2 + 2 * (a2 / g) * inner;
    let mut b = b_raw.rem_euclid(two_a);
    if b > a {
        b -= two_a;
    }
    let c = (b * b - d) / (4 * a);
    debug_assert_eq!((b * b - d) % (4 * a), 0);

    let (fa, fb, fc) = (
        i64::try_from(a).map_err(overflow)?,
        i64::try_from(b).map_err(overflow)?,
        i64::try_from(c).map_err(overflow)?,
    );
    let composed = QuadForm { a: fa, b: fb, c: fc };
    Ok(reduce(&composed).0)
}

fn overflow(_: std::num::TryFromIntError) -> Error {
    Error::Domain("composition intermediate exceeds 64-bit coefficients".into())
}

/// The class group of a fundamental discriminant `D < −6`, realized on the
/// reduced forms with an explicit composition table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassGroup {
    disc: Discriminant,
    reduced_forms: Vec<QuadForm>,
    h: usize,
    composition_table: Vec<Vec<usize>>,
    principal_index: usize,
}

impl ClassGroup {
    /// Build the group and verify the group axioms on the table.
    ///
    /// Associativity is checked on all triples for `h ≤ 20` and on 2000
    /// deterministic pseudo-random triples above that.
    pub fn new(disc: Discriminant) -> Result<Self> {
        if disc.value() >= -6 {
            return Err(Error::Domain(format!(
                "class groups are built for D < −6 (unit group ±1), got {disc}"
            )));
        }
        let reduced_forms = enumerate_reduced(disc);
        let h = reduced_forms.len();
        let index_of = |f: &QuadForm| -> Result<usize> {
            reduced_forms
                .iter()
                .position(|g| g == f)
                .ok_or_else(|| Error::Integrity(format!("reduced form {f} missing from enumeration")))
        };
        let principal_index = index_of(&disc.principal_form())?;

        let mut composition_table = vec![vec![0usize; h]; h];
        for i in 0..h {
            for j in 0..=i {
                let prod = compose(&reduced_forms[i], &reduced_forms[j])?;
                let idx = index_of(&prod)?;
                composition_table[i][j] = idx;
                composition_table[j][i] = idx;
            }
        }

        let cg = ClassGroup { disc, reduced_forms, h, composition_table, principal_index };
        cg.verify_axioms()?;
        Ok(cg)
    }

    fn verify_axioms(&self) -> Result<()> {
        let h = self.h;
        let e = self.principal_index;
        for i in 0..h {
            if self.composition_table[e][i] != i {
                return Err(Error::Integrity(format!("identity law fails at index {i}")));
            }
            let inv = reduce(&self.reduced_forms[i].inverse()).0;
            let j = self
                .reduced_forms
                .iter()
                .position(|g| *g == inv)
                .ok_or_else(|| Error::Integrity("inverse form not in enumeration".into()))?;
            if self.composition_table[i][j] != e {
                return Err(Error::Integrity(format!("inverse law fails at index {i}")));
            }
        }
        let check = |i: usize, j: usize, k: usize| -> Result<()> {
            let ij_k = self.composition_table[self.composition_table[i][j]][k];
            let i_jk = self.composition_table[i][self.composition_table[j][k]];
            if ij_k != i_jk {
                return Err(Error::Integrity(format!("associativity fails at ({i},{j},{k})")));
            }
            Ok(())
        };
        if h <= 20 {
            for i in 0..h {
                for j in 0..h {
                    for k in 0..h {
                        check(i, j, k)?;
                    }
                }
            }
        } else {
            // deterministic LCG sampling
            let mut state = 0x9e3779b97f4a7c15u64 ^ (self.disc.value() as u64);
            for _ in 0..2000 {
                let mut next = || {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    (state >> 33) as usize % h
                };
                let (i, j, k) = (next(), next(), next());
                check(i, j, k)?;
            }
        }
        Ok(())
    }

    pub fn disc(&self) -> Discriminant {
        self.disc
    }

    /// Class number `h(D)`.
    pub fn h(&self) -> usize {
        self.h
    }

    pub fn reduced_forms(&self) -> &[QuadForm] {
        &self.reduced_forms
    }

    pub fn principal_index(&self) -> usize {
        self.principal_index
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.composition_table[i][j]
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        let inv = reduce(&self.reduced_forms[i].inverse()).0;
        self.reduced_forms.iter().position(|g| *g == inv).expect("inverse in table")
    }

    /// Index of the class of an arbitrary form of the same discriminant.
    pub fn class_index(&self, q: &QuadForm) -> Result<usize> {
        if q.disc() != self.disc.value() {
            return Err(Error::Domain(format!(
                "form of discriminant {} in class group of {}",
                q.disc(),
                self.disc
            )));
        }
        let r = reduce(q).0;
        self.reduced_forms
            .iter()
            .position(|g| *g == r)
            .ok_or_else(|| Error::Integrity(format!("reduced form {r} not in enumeration")))
    }

    /// Order of the class at `index` in the group.
    pub fn order_of(&self, index: usize) -> usize {
        let e = self.principal_index;
        let mut x = index;
        let mut n = 1;
        while x != e {
            x = self.mul(x, index);
            n += 1;
        }
        n
    }

    /// Power of a class by table walking (exponent may be any sign).
    pub fn pow(&self, index: usize, exp: i64) -> usize {
        let mut base = if exp < 0 { self.inverse_index(index) } else { index };
        let mut e = exp.unsigned_abs();
        let mut acc = self.principal_index;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

/// Shorthand: the class group of discriminant `d`.
pub fn class_group(d: i64) -> Result<ClassGroup> {
    ClassGroup::new(Discriminant::new(d)?)
}

/// The ideal `aZ + ((−b+√D)/2)Z` attached to a form.
///
/// Its norm is `a`; the map `[a,b,c] ↦ [a, (−b+√D)/2]` realizes the bijection
/// between form classes and ideal classes.
pub fn form_to_ideal(q: &QuadForm) -> crate::hecke::IdealHNF {
    // (−b+√D)/2 = t + ω with ω = (δ+√D)/2, t = −(b+δ)/2
    let d = q.disc();
    let delta = d.rem_euclid(4).min(1);
    let t = -(q.b + delta) / 2;
    crate::hecke::IdealHNF::from_parts(d, q.a as i128, t as i128, 1)
        .expect("form ideal is valid by construction")
}
