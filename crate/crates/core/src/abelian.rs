//! Finite abelian groups, their unitary duals, wide tuples, and the
//! direct/dual wide-moment identities.
//!
//! The wide set of a group `G` is
//!
//! ```text
//! Wide(n, G) = {(g_1, …, g_n) ∈ Gⁿ : g_1···g_n = 1}
//! ```
//!
//! and the wide moment of maps `L_1, …, L_n : G → C` is
//! `Σ_{Wide(n,G)} Π L_i(g_i)`, which equals `(1/|G|) Σ_χ Π L̂_i(χ)` with
//! `L̂(χ) = Σ_g L(g)·conj(χ(g))` — the n-fold convolution at the identity
//! (Plancherel for n = 2).

use crate::qforms::ClassGroup;
use crate::{Complex64, Error, Result};
use std::f64::consts::TAU;

/// Finite abelian group as elementary divisors `d_1 | d_2 | … | d_m`,
/// elements addressed as exponent tuples mod `d_j` (flattened mixed radix).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinAbGroup {
    divisors: Vec<u64>,
}

impl FinAbGroup {
    pub fn new(divisors: Vec<u64>) -> Result<Self> {
        for w in divisors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::Domain(format!(
                    "elementary divisors must form a chain, got {divisors:?}"
                )));
            }
        }
        if divisors.iter().any(|&d| d < 2) {
            return Err(Error::Domain("elementary divisors must be at least 2".into()));
        }
        Ok(FinAbGroup { divisors })
    }

    /// The trivial group (empty divisor list).
    pub fn trivial() -> Self {
        FinAbGroup { divisors: vec![] }
    }

    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    pub fn order(&self) -> usize {
        self.divisors.iter().product::<u64>() as usize
    }

    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    /// Exponent tuple of the element with the given flat index.
    pub fn tuple_of(&self, mut index: usize) -> Vec<u64> {
        let mut t = Vec::with_capacity(self.rank());
        for &d in &self.divisors {
            t.push((index as u64) % d);
            index /= d as usize;
        }
        t
    }

    /// Flat index of an exponent tuple.
    pub fn index_of(&self, tuple: &[u64]) -> usize {
        let mut idx = 0usize;
        let mut stride = 1usize;
        for (j, &d) in self.divisors.iter().enumerate() {
            idx += (tuple[j] % d) as usize * stride;
            stride *= d as usize;
        }
        idx
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.divisors
            .iter()
            .enumerate()
            .map(|(j, &d)| (a[j] + b[j]) % d)
            .collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        self.divisors
            .iter()
            .enumerate()
            .map(|(j, &d)| (d - a[j] % d) % d)
            .collect()
    }

    pub fn identity(&self) -> Vec<u64> {
        vec![0; self.rank()]
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.order()).map(|i| self.tuple_of(i))
    }
}

/// Character of a finite abelian group, `χ(g) = e(Σ e_j g_j / d_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    exponents: Vec<u64>,
}

impl Character {
    pub fn new(g: &FinAbGroup, exponents: Vec<u64>) -> Self {
        let exps = exponents
            .iter()
            .zip(g.divisors())
            .map(|(&e, &d)| e % d)
            .collect();
        Character { exponents: exps }
    }

    pub fn trivial(g: &FinAbGroup) -> Self {
        Character { exponents: vec![0; g.rank()] }
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn eval(&self, g: &FinAbGroup, elem: &[u64]) -> Complex64 {
        let mut phase = 0.0f64;
        for (j, &d) in g.divisors().iter().enumerate() {
            phase += (self.exponents[j] * (elem[j] % d)) as f64 / d as f64;
        }
        Complex64::from_polar(1.0, TAU * phase.fract())
    }

    pub fn mul(&self, g: &FinAbGroup, other: &Character) -> Character {
        Character {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .zip(g.divisors())
                .map(|((&a, &b), &d)| (a + b) % d)
                .collect(),
        }
    }

    pub fn inverse(&self, g: &FinAbGroup) -> Character {
        Character {
            exponents: self
                .exponents
                .iter()
                .zip(g.divisors())
                .map(|(&a, &d)| (d - a % d) % d)
                .collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }
}

/// All `|G|` characters, indexed like the elements.
pub fn characters(g: &FinAbGroup) -> Vec<Character> {
    (0..g.order())
        .map(|i| Character { exponents: g.tuple_of(i) })
        .collect()
}

/// Decompose a class group into elementary divisors.
///
/// Brute force suitable for desk scale: greedily peel generators of maximal
/// order in the remaining quotient. Returns the group, the chosen generator
/// class indices (one per divisor, matching `divisors()` order), and the
/// forward/backward index maps (class index ↔ flat element index). The
/// isomorphism is verified on all pairs for `h ≤ 200`, on 1000 sampled pairs
/// above.
pub fn decompose(cg: &ClassGroup) -> Result<(FinAbGroup, Vec<usize>, Vec<usize>, Vec<usize>)> {
    let h = cg.h();
    let e = cg.principal_index();
    if h == 1 {
        return Ok((FinAbGroup::trivial(), vec![], vec![0], vec![0]));
    }

    // generators g_1, …, g_m with cumulative subgroup ladders; at each step
    // pick the element of maximal order in G / ⟨chosen⟩.
    let mut gens: Vec<usize> = Vec::new();
    let mut orders: Vec<usize> = Vec::new();
    // span[i] = exponent tuple over current gens, for each class in the span
    let mut span: std::collections::HashMap<usize, Vec<u64>> = std::collections::HashMap::new();
    span.insert(e, vec![]);

    while span.len() < h {
        // order of x in the quotient G/span = min n > 0 with x^n ∈ span
        let quotient_order = |x: usize, span: &std::collections::HashMap<usize, Vec<u64>>| {
            let mut y = x;
            let mut n = 1usize;
            while !span.contains_key(&y) {
                y = cg.mul(y, x);
                n += 1;
            }
            n
        };
        let mut best = usize::MAX;
        let mut best_ord = 0usize;
        for i in 0..h {
            if span.contains_key(&i) {
                continue;
            }
            let o = quotient_order(i, &span);
            if o > best_ord {
                best_ord = o;
                best = i;
            }
        }
        if best == usize::MAX {
            return Err(Error::Integrity("span incomplete but no element left".into()));
        }

        // lift within the coset so the generator's order in G equals its
        // quotient order (the span is pure, so a lift exists); candidates
        // scanned in sorted order to keep the construction deterministic
        let mut coset: Vec<usize> = span.keys().map(|&s| cg.mul(best, s)).collect();
        coset.sort_unstable();
        let lifted = coset
            .into_iter()
            .find(|&cand| cg.pow(cand, best_ord as i64) == e)
            .ok_or_else(|| Error::Integrity("no exact-order lift of peeled generator".into()))?;
        let best = lifted;

        // extend every span element by powers of the new generator
        let mut new_span = std::collections::HashMap::new();
        let mut p = e;
        for j in 0..best_ord {
            for (&cls, tup) in &span {
                let mut t = tup.clone();
                t.push(j as u64);
                new_span.insert(cg.mul(cls, p), t);
            }
            p = cg.mul(p, best);
        }
        if new_span.len() != span.len() * best_ord {
            return Err(Error::Integrity("generator span collision".into()));
        }
        span = new_span;
        gens.push(best);
        orders.push(best_ord);
    }

    // With maximal-order-first peeling the orders come out in divisible
    // order d_m, d_{m−1}, … ; reverse into the ascending chain.
    gens.reverse();
    orders.reverse();
    for w in orders.windows(2) {
        if w[1] % w[0] != 0 {
            return Err(Error::Integrity(format!(
                "peeled orders {orders:?} do not form a divisor chain"
            )));
        }
    }
    let group = FinAbGroup::new(orders.iter().map(|&o| o as u64).collect())?;

    // span tuples were built with the generator order before reversal: the
    // tuple coordinate pushed last belongs to the first chosen (largest)
    // generator. Rebuild coordinates in the reversed order.
    let mut class_to_elem = vec![usize::MAX; h];
    for (cls, tup) in &span {
        let mut rev = tup.clone();
        rev.reverse();
        class_to_elem[*cls] = group.index_of(&rev);
    }
    let mut elem_to_class = vec![usize::MAX; h];
    for (cls, &el) in class_to_elem.iter().enumerate() {
        elem_to_class[el] = cls;
    }

    // verify the isomorphism
    let verify_pair = |i: usize, j: usize| -> bool {
        let gi = group.tuple_of(class_to_elem[i]);
        let gj = group.tuple_of(class_to_elem[j]);
        group.index_of(&group.add(&gi, &gj)) == class_to_elem[cg.mul(i, j)]
    };
    if h <= 200 {
        for i in 0..h {
            for j in 0..h {
                if !verify_pair(i, j) {
                    return Err(Error::Integrity(format!("decompose not a homomorphism at ({i},{j})")));
                }
            }
        }
    } else {
        let mut state = 0x243f6a8885a308d3u64;
        for _ in 0..1000 {
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 33) as usize % h
            };
            let (i, j) = (next(), next());
            if !verify_pair(i, j) {
                return Err(Error::Integrity(format!("decompose not a homomorphism at ({i},{j})")));
            }
        }
    }

    Ok((group, gens, class_to_elem, elem_to_class))
}

/// Tuple of group elements with trivial product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WideTuple(pub Vec<Vec<u64>>);

/// Iterator over `Wide(n, G)`: lexicographic in the first `n−1` coordinates,
/// last coordinate solved. Exactly `|G|^{n−1}` tuples.
pub fn wide_tuples<'a>(n: usize, g: &'a FinAbGroup) -> Result<impl Iterator<Item = WideTuple> + 'a> {
    if n == 0 {
        return Err(Error::Domain("wide tuples need n ≥ 1".into()));
    }
    let total = g.order().checked_pow((n - 1) as u32).ok_or_else(|| {
        Error::Domain(format!("|G|^{} overflows the tuple index", n - 1))
    })?;
    Ok((0..total).map(move |mut idx| {
        let mut tuple = Vec::with_capacity(n);
        let mut prod = g.identity();
        for _ in 0..n - 1 {
            let el = g.tuple_of(idx % g.order());
            idx /= g.order();
            prod = g.add(&prod, &el);
            tuple.push(el);
        }
        tuple.push(g.neg(&prod));
        WideTuple(tuple)
    }))
}

/// Direct side: `Σ_{Wide(n,G)} Π L_i(g_i)`.
pub fn wide_moment_direct(g: &FinAbGroup, maps: &[Vec<Complex64>]) -> Result<Complex64> {
    let n = maps.len();
    for m in maps {
        if m.len() != g.order() {
            return Err(Error::Domain("map not totally defined on G".into()));
        }
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for t in wide_tuples(n, g)? {
        let mut prod = Complex64::new(1.0, 0.0);
        for (i, el) in t.0.iter().enumerate() {
            prod *= maps[i][g.index_of(el)];
        }
        sum += prod;
    }
    Ok(sum)
}

/// Fourier transform `L̂(χ) = Σ_g L(g)·conj(χ(g))`.
pub fn fourier_transform(g: &FinAbGroup, map: &[Complex64], chi: &Character) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for (i, v) in map.iter().enumerate() {
        sum += v * chi.eval(g, &g.tuple_of(i)).conj();
    }
    sum
}

/// Dual side: `(1/|G|) Σ_χ Π L̂_i(χ)`; equals the direct side exactly.
pub fn wide_moment_dual(g: &FinAbGroup, maps: &[Vec<Complex64>]) -> Result<Complex64> {
    for m in maps {
        if m.len() != g.order() {
            return Err(Error::Domain("map not totally defined on G".into()));
        }
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for chi in characters(g) {
        let mut prod = Complex64::new(1.0, 0.0);
        for m in maps {
            prod *= fourier_transform(g, m, &chi);
        }
        sum += prod;
    }
    Ok(sum / g.order() as f64)
}

/// Iterator over the non-trivial diagonal
/// `Wide*(2n, G) = {(g_1,h_1,…,g_n,h_n) : g_i ≠ h_i, Πg_i = Πh_i}`.
pub fn diagonal_wide_tuples<'a>(
    n: usize,
    g: &'a FinAbGroup,
) -> Result<impl Iterator<Item = WideTuple> + 'a> {
    if n == 0 {
        return Err(Error::Domain("diagonal wide tuples need n ≥ 1".into()));
    }
    let order = g.order();
    let total = order.checked_pow((2 * n - 1) as u32).ok_or_else(|| {
        Error::Domain(format!("|G|^{} overflows the tuple index", 2 * n - 1))
    })?;
    Ok((0..total).filter_map(move |mut idx| {
        // free coordinates: g_1..g_n, h_1..h_{n−1}; h_n solved
        let mut gs = Vec::with_capacity(n);
        let mut hs = Vec::with_capacity(n);
        for _ in 0..n {
            gs.push(g.tuple_of(idx % order));
            idx /= order;
        }
        for _ in 0..n - 1 {
            hs.push(g.tuple_of(idx % order));
            idx /= order;
        }
        let mut pg = g.identity();
        for x in &gs {
            pg = g.add(&pg, x);
        }
        let mut ph = g.identity();
        for x in &hs {
            ph = g.add(&ph, x);
        }
        hs.push(g.add(&pg, &g.neg(&ph)));
        for i in 0..n {
            if gs[i] == hs[i] {
                return None;
            }
        }
        let mut tuple = Vec::with_capacity(2 * n);
        for i in 0..n {
            tuple.push(gs[i].clone());
            tuple.push(hs[i].clone());
        }
        Some(WideTuple(tuple))
    }))
}

/// Both sides of the diagonal-moment identity (inclusion–exclusion form).
///
/// For maps `L_1, …, L_n : G → C`, with `L̂` the unnormalized Fourier
/// transform,
///
/// ```text
/// Σ_{M ⊆ {1..n}} (−1)^{|M|} |G|^{2n−|M|−1} (Σ_g Π_{i∉M} |L_i(g)|²) Π_{i∈M} (Σ_g |L_i(g)|²)
///   = Σ_{Wide*(2n, Ĝ)} Π_i L̂_i(χ_i) conj(L̂_i(ψ_i))
/// ```
///
/// where for `M = {1..n}` the middle factor is `Σ_g 1 = |G|`. The identity
/// is exact; `agree` reports agreement within 1e−9 relative.
pub fn lemma61_check(g: &FinAbGroup, maps: &[Vec<Complex64>]) -> Result<(Complex64, Complex64, bool)> {
    let n = maps.len();
    if n == 0 {
        return Err(Error::Domain("need at least one map".into()));
    }
    for m in maps {
        if m.len() != g.order() {
            return Err(Error::Domain("map not totally defined on G".into()));
        }
    }
    let order = g.order() as f64;

    // inclusion–exclusion side
    let norms: Vec<f64> = maps
        .iter()
        .map(|m| m.iter().map(|v| v.norm_sqr()).sum::<f64>())
        .collect();
    let mut lhs = 0.0f64;
    let mut mass = 0.0f64; // absolute term mass, for the roundoff floor
    for mask in 0..(1usize << n) {
        let msize = mask.count_ones() as i32;
        let mut cross = 0.0;
        for gi in 0..g.order() {
            let mut p = 1.0;
            for (i, m) in maps.iter().enumerate() {
                if mask & (1 << i) == 0 {
                    p *= m[gi].norm_sqr();
                }
            }
            cross += p;
        }
        let mut term = cross * order.powi(2 * n as i32 - msize - 1);
        for (i, nm) in norms.iter().enumerate() {
            if mask & (1 << i) != 0 {
                term *= nm;
            }
        }
        mass += term.abs();
        lhs += if msize % 2 == 0 { term } else { -term };
    }
    let lhs = Complex64::new(lhs, 0.0);

    // dual side over the character group
    let chars = characters(g);
    let dual_group = g.clone(); // Ĝ ≅ G, indexed by the same tuples
    let fts: Vec<Vec<Complex64>> = maps
        .iter()
        .map(|m| chars.iter().map(|chi| fourier_transform(g, m, chi)).collect())
        .collect();
    let mut rhs = Complex64::new(0.0, 0.0);
    for t in diagonal_wide_tuples(n, &dual_group)? {
        let mut prod = Complex64::new(1.0, 0.0);
        for i in 0..n {
            let chi_idx = dual_group.index_of(&t.0[2 * i]);
            let psi_idx = dual_group.index_of(&t.0[2 * i + 1]);
            prod *= fts[i][chi_idx] * fts[i][psi_idx].conj();
        }
        rhs += prod;
    }

    // when the two sides cancel to an exact zero the roundoff of the
    // inclusion–exclusion mass is the honest comparison floor
    let scale = lhs.norm().max(rhs.norm());
    let agree = (lhs - rhs).norm() <= (1e-9 * scale).max(1e-12 * mass).max(1e-30);
    Ok((lhs, rhs, agree))
}

/// Search `Wide(n, G)` for a tuple where all maps are nonzero (`> 1e−14`).
pub fn weak_nonvanishing_search(
    g: &FinAbGroup,
    maps: &[Vec<Complex64>],
) -> Result<Option<WideTuple>> {
    let n = maps.len();
    for t in wide_tuples(n, g)? {
        let ok = t
            .0
            .iter()
            .enumerate()
            .all(|(i, el)| maps[i][g.index_of(el)].norm() > 1e-14);
        if ok {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// The §2 counterexample: maps supported on an index-2 subgroup `H` (first
/// `n−1` maps) and on its complement (last map); each support has size
/// `|G|/2` and there is no weak simultaneous non-vanishing.
pub fn proposition2_counterexample(g: &FinAbGroup, n: usize) -> Result<Vec<Vec<Complex64>>> {
    if n < 2 {
        return Err(Error::Domain("need n ≥ 2".into()));
    }
    // an index-2 subgroup is the kernel of an order-2 character
    let chi2 = g
        .divisors()
        .iter()
        .position(|&d| d % 2 == 0)
        .map(|j| {
            let mut e = vec![0u64; g.rank()];
            e[j] = g.divisors()[j] / 2;
            Character { exponents: e }
        })
        .ok_or_else(|| Error::Domain("group has no index-2 subgroup (odd order)".into()))?;

    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let in_h: Vec<bool> = (0..g.order())
        .map(|i| (chi2.eval(g, &g.tuple_of(i)) - one).norm() < 1e-9)
        .collect();
    let on_h: Vec<Complex64> = in_h.iter().map(|&b| if b { one } else { zero }).collect();
    let off_h: Vec<Complex64> = in_h.iter().map(|&b| if b { zero } else { one }).collect();
    let mut maps = vec![on_h; n - 1];
    maps.push(off_h);
    Ok(maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn z(n: u64) -> FinAbGroup {
        FinAbGroup::new(vec![n]).unwrap()
    }

    fn random_map<R: Rng>(g: &FinAbGroup, rng: &mut R) -> Vec<Complex64> {
        (0..g.order())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    }

    #[test]
    fn character_count_and_orthogonality() {
        for g in [z(3), FinAbGroup::trivial(), FinAbGroup::new(vec![2, 4]).unwrap()] {
            let chars = characters(&g);
            assert_eq!(chars.len(), g.order());
            for a in &chars {
                for b in &chars {
                    let mut s = Complex64::new(0.0, 0.0);
                    for el in g.elements() {
                        s += a.eval(&g, &el) * b.eval(&g, &el).conj();
                    }
                    let expect = if a == b { g.order() as f64 } else { 0.0 };
                    assert!((s - Complex64::new(expect, 0.0)).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn z3_characters_are_cube_roots() {
        let g = z(3);
        for chi in characters(&g) {
            for el in g.elements() {
                let v = chi.eval(&g, &el);
                assert!((v.powu(3) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn wide_tuple_counts() {
        let g = z(3);
        assert_eq!(wide_tuples(2, &g).unwrap().count(), 3);
        assert_eq!(wide_tuples(1, &g).unwrap().count(), 1);
        let g4 = FinAbGroup::new(vec![2, 2]).unwrap();
        assert_eq!(wide_tuples(3, &g4).unwrap().count(), 16);
        assert!(wide_tuples(0, &g).is_err());
        // every tuple has trivial product; no duplicates
        let collected: Vec<_> = wide_tuples(3, &g).unwrap().collect();
        for t in &collected {
            let mut p = g.identity();
            for el in &t.0 {
                p = g.add(&p, el);
            }
            assert_eq!(p, g.identity());
        }
        let mut dedup = collected.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), collected.len());
    }

    #[test]
    fn wide_moment_direct_trivial_cases() {
        let g = z(3);
        // indicator of identity in both slots → 1
        let mut ind = vec![Complex64::new(0.0, 0.0); 3];
        ind[g.index_of(&g.identity())] = Complex64::new(1.0, 0.0);
        let v = wide_moment_direct(&g, &[ind.clone(), ind]).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);

        // all maps ≡ 1 → |G|^{n−1}
        let ones = vec![Complex64::new(1.0, 0.0); 3];
        let v = wide_moment_direct(&g, &[ones.clone(), ones.clone(), ones.clone()]).unwrap();
        assert!((v - Complex64::new(9.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn dual_equals_direct_on_random_instances() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let groups = [
            FinAbGroup::new(vec![5]).unwrap(),
            FinAbGroup::new(vec![2, 4]).unwrap(),
            FinAbGroup::new(vec![3, 3]).unwrap(),
            FinAbGroup::new(vec![2, 2, 2]).unwrap(),
            FinAbGroup::new(vec![60]).unwrap(),
        ];
        let mut done = 0;
        'outer: for g in groups.iter().cycle() {
            for n in 1..=4 {
                let maps: Vec<_> = (0..n).map(|_| random_map(g, &mut rng)).collect();
                let a = wide_moment_direct(g, &maps).unwrap();
                let b = wide_moment_dual(g, &maps).unwrap();
                let scale = a.norm().max(b.norm()).max(1e-12);
                assert!(
                    (a - b).norm() / scale < 1e-10,
                    "direct {a} vs dual {b} on {:?}, n={n}",
                    g.divisors()
                );
                done += 1;
                if done >= 100 {
                    break 'outer;
                }
            }
        }
    }

    #[test]
    fn dual_recovers_second_moment_for_equivariant_maps() {
        // L(g^{-1}) = conj(L(g)): the n = 2 wide moment is Σ |L(g)|²
        let g = FinAbGroup::new(vec![6]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut l = random_map(&g, &mut rng);
        for i in 0..g.order() {
            let gi = g.tuple_of(i);
            let inv = g.index_of(&g.neg(&gi));
            if inv > i {
                l[inv] = l[i].conj();
            } else if inv == i {
                l[i] = Complex64::new(l[i].re, 0.0);
            }
        }
        let second: f64 = l.iter().map(|v| v.norm_sqr()).sum();
        let wide = wide_moment_dual(&g, &[l.clone(), l]).unwrap();
        assert!((wide - Complex64::new(second, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn all_ones_survives_only_trivial_character() {
        let g = FinAbGroup::new(vec![2, 4]).unwrap();
        let ones = vec![Complex64::new(1.0, 0.0); g.order()];
        let v = wide_moment_dual(&g, &[ones.clone(), ones.clone(), ones]).unwrap();
        assert!((v - Complex64::new((g.order() * g.order()) as f64, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn diagonal_tuples_counts() {
        // n = 1: g_1 = h_1 forced, so the set is empty
        for g in [z(2), z(5), FinAbGroup::new(vec![2, 2]).unwrap()] {
            assert_eq!(diagonal_wide_tuples(1, &g).unwrap().count(), 0);
        }
        // n = 2, Z/2: h_i = g_i + 1 always satisfies the product condition;
        // exhaustive enumeration gives all 4 choices of (g_1, g_2)
        let g = z(2);
        let tuples: Vec<_> = diagonal_wide_tuples(2, &g).unwrap().collect();
        assert_eq!(tuples.len(), 4);
        for t in &tuples {
            assert_ne!(t.0[0], t.0[1]);
            assert_ne!(t.0[2], t.0[3]);
        }
        // bound |Wide*(2n, G)| ≤ |G|^{2n−1}
        let g = z(3);
        assert!(diagonal_wide_tuples(2, &g).unwrap().count() <= 27);
    }

    #[test]
    fn lemma61_zero_maps_and_n1() {
        let g = z(4);
        let zero = vec![Complex64::new(0.0, 0.0); 4];
        let (l, r, ok) = lemma61_check(&g, &[zero.clone(), zero]).unwrap();
        assert!(ok);
        assert!(l.norm() < 1e-15 && r.norm() < 1e-15);

        // n = 1: both sides vanish identically (Wide* is empty and the
        // inclusion–exclusion terms cancel)
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let m = random_map(&g, &mut rng);
        let (l, r, ok) = lemma61_check(&g, &[m]).unwrap();
        assert!(ok, "lhs {l} rhs {r}");
        assert!(l.norm() < 1e-9 && r.norm() < 1e-9);
    }

    #[test]
    fn lemma61_random_instances() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let groups = [
            z(2),
            z(3),
            z(4),
            FinAbGroup::new(vec![2, 2]).unwrap(),
            FinAbGroup::new(vec![16]).unwrap(),
            FinAbGroup::new(vec![2, 8]).unwrap(),
        ];
        let mut done = 0;
        'outer: for g in groups.iter().cycle() {
            for n in 1..=3 {
                if g.order() > 8 && n == 3 {
                    continue;
                }
                let maps: Vec<_> = (0..n).map(|_| random_map(g, &mut rng)).collect();
                let (l, r, ok) = lemma61_check(g, &maps).unwrap();
                assert!(ok, "n={n} on {:?}: {l} vs {r}", g.divisors());
                done += 1;
                if done >= 50 {
                    break 'outer;
                }
            }
        }
    }

    #[test]
    fn weak_nonvanishing_trivial_witness() {
        let g = z(5);
        let ones = vec![Complex64::new(1.0, 0.0); 5];
        let w = weak_nonvanishing_search(&g, &[ones.clone(), ones]).unwrap();
        let w = w.unwrap();
        assert_eq!(w.0[0], g.identity());
        assert_eq!(w.0[1], g.identity());
    }

    #[test]
    fn counterexample_has_no_witness() {
        // G = Z/2, n = 2
        let g = z(2);
        let maps = proposition2_counterexample(&g, 2).unwrap();
        assert!(weak_nonvanishing_search(&g, &maps).unwrap().is_none());

        // G = Z/4, n = 3
        let g = z(4);
        let maps = proposition2_counterexample(&g, 3).unwrap();
        for m in &maps {
            let support = m.iter().filter(|v| v.norm() > 0.5).count();
            assert_eq!(support, 2); // exactly half
        }
        assert!(weak_nonvanishing_search(&g, &maps).unwrap().is_none());

        // odd order → no index-2 subgroup
        assert!(proposition2_counterexample(&z(5), 2).is_err());
        // n = 1 rejected
        assert!(proposition2_counterexample(&z(2), 1).is_err());
    }

    #[test]
    fn dense_support_always_has_witness() {
        // maps nonvanishing on > 50% of G always admit a witness (n = 2)
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for size in 2..=16u64 {
            let g = z(size);
            let half = (size / 2 + 1) as usize;
            for _ in 0..5 {
                let mut maps = Vec::new();
                for _ in 0..2 {
                    let mut m = vec![Complex64::new(0.0, 0.0); g.order()];
                    let mut idx: Vec<usize> = (0..g.order()).collect();
                    for i in (1..idx.len()).rev() {
                        let j = rng.gen_range(0..=i);
                        idx.swap(i, j);
                    }
                    for &i in idx.iter().take(half) {
                        m[i] = Complex64::new(rng.gen_range(0.1..1.0), 0.0);
                    }
                    maps.push(m);
                }
                assert!(weak_nonvanishing_search(&g, &maps).unwrap().is_some());
            }
        }
    }

    #[test]
    fn decompose_class_groups() {
        let cg = crate::qforms::class_group(-23).unwrap();
        let (g, gens, fwd, bwd) = decompose(&cg).unwrap();
        assert_eq!(g.divisors(), &[3]);
        assert_eq!(gens.len(), 1);
        for (c, &e) in fwd.iter().enumerate() {
            assert_eq!(bwd[e], c);
        }

        let cg = crate::qforms::class_group(-7).unwrap();
        let (g, _, _, _) = decompose(&cg).unwrap();
        assert_eq!(g.rank(), 0);
        assert_eq!(g.order(), 1);

        let cg = crate::qforms::class_group(-479).unwrap();
        let (g, _, _, _) = decompose(&cg).unwrap();
        assert_eq!(g.order(), 25);

        // a 2-rank example: Cl(−84) ≅ Z/2 × Z/2... −84 = 4·(−21), −21 ≡ 3 mod 4
        let cg = crate::qforms::class_group(-84).unwrap();
        assert_eq!(cg.h(), 4);
        let (g, _, _, _) = decompose(&cg).unwrap();
        assert_eq!(g.divisors(), &[2, 2]);
    }
}
