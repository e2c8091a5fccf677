//! Equivalence of index subsets and of the frames they select.
//!
//! Three notions, coarsest last:
//! * multiplicative: `K = a*J` for a unit `a`;
//! * affine: `K = a*J + b` for a unit `a` and shift `b`;
//! * unitary: the frames differ by a unitary and a relabeling of vectors,
//!   decided exactly through the circulant Gram data.
//!
//! Unitary equivalence holds iff some relabeling `sigma` of `Z_n` matches the
//! Gram matrices entry for entry: `c_J(x - y) = c_K(sigma(x) - sigma(y))` for
//! all `x, y`. Translating `sigma` preserves that property, so the search may
//! pin `sigma(0) = 0`. A sorted multiset of angle values is used as a cheap
//! complete-on-failure filter before the backtracking search runs.

use thiserror::Error;

use crate::cyclotomic::IntPolynomial;
use crate::frames::{angle_vector, IndexSubset};
use crate::numtheory::{mod_inverse, units};

/// Default node budget for the unitary backtracking search.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// A subset transformation from one of the two group actions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transform {
    Mult { a: usize },
    Affine { a: usize, b: usize },
}

impl Transform {
    /// Applies the transformation elementwise and re-sorts.
    pub fn apply(&self, subset: &IndexSubset) -> IndexSubset {
        let n = subset.modulus();
        let image: Vec<usize> = match *self {
            Transform::Mult { a } => subset.elements().iter().map(|&x| (a * x) % n).collect(),
            Transform::Affine { a, b } => subset
                .elements()
                .iter()
                .map(|&x| (a * x + b) % n)
                .collect(),
        };
        IndexSubset::new(n, &image).expect("group actions preserve subset validity")
    }
}

/// A canonical orbit representative together with the transformation that
/// carries the original subset onto it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub representative: IndexSubset,
    pub witness: Transform,
}

pub(crate) fn mult_image_sorted(n: usize, elements: &[usize], a: usize) -> Vec<usize> {
    let mut image: Vec<usize> = elements.iter().map(|&x| (a * x) % n).collect();
    image.sort_unstable();
    image
}

pub(crate) fn affine_image_sorted(n: usize, elements: &[usize], a: usize, b: usize) -> Vec<usize> {
    let mut image: Vec<usize> = elements.iter().map(|&x| (a * x + b) % n).collect();
    image.sort_unstable();
    image
}

/// Lexicographically smallest image of the subset under multiplication by
/// units, with the first unit attaining it as witness.
pub fn mult_canonical(subset: &IndexSubset) -> CanonicalForm {
    let n = subset.modulus();
    let mut best = subset.elements().to_vec();
    let mut best_a = if n == 1 { 0 } else { 1 };
    for a in units(n) {
        let image = mult_image_sorted(n, subset.elements(), a);
        if image < best {
            best = image;
            best_a = a;
        }
    }
    CanonicalForm {
        representative: IndexSubset::new(n, &best).expect("canonical image is valid"),
        witness: Transform::Mult { a: best_a },
    }
}

/// Lexicographically smallest image under the full affine action, with the
/// first `(a, b)` pair attaining it as witness.
pub fn affine_canonical(subset: &IndexSubset) -> CanonicalForm {
    let n = subset.modulus();
    let mut best = subset.elements().to_vec();
    let mut best_witness = Transform::Affine {
        a: if n == 1 { 0 } else { 1 },
        b: 0,
    };
    for a in units(n) {
        for b in 0..n {
            let image = affine_image_sorted(n, subset.elements(), a, b);
            if image < best {
                best = image;
                best_witness = Transform::Affine { a, b };
            }
        }
    }
    CanonicalForm {
        representative: IndexSubset::new(n, &best).expect("canonical image is valid"),
        witness: best_witness,
    }
}

fn assert_same_modulus(j: &IndexSubset, k: &IndexSubset) {
    assert_eq!(
        j.modulus(),
        k.modulus(),
        "subsets live in different cyclic groups"
    );
}

/// True when `K = a*J` for some unit `a`.
pub fn mult_equivalent(j: &IndexSubset, k: &IndexSubset) -> bool {
    assert_same_modulus(j, k);
    if j.dimension() != k.dimension() {
        return false;
    }
    mult_canonical(j).representative == mult_canonical(k).representative
}

/// A unit carrying `J` onto `K`, when one exists.
pub fn mult_witness(j: &IndexSubset, k: &IndexSubset) -> Option<usize> {
    assert_same_modulus(j, k);
    if j.dimension() != k.dimension() {
        return None;
    }
    let n = j.modulus();
    units(n)
        .into_iter()
        .find(|&a| mult_image_sorted(n, j.elements(), a) == k.elements())
}

/// True when `K = a*J + b` for some unit `a` and shift `b`.
pub fn affine_equivalent(j: &IndexSubset, k: &IndexSubset) -> bool {
    assert_same_modulus(j, k);
    if j.dimension() != k.dimension() {
        return false;
    }
    affine_canonical(j).representative == affine_canonical(k).representative
}

/// An affine pair `(a, b)` carrying `J` onto `K`, when one exists.
pub fn affine_witness(j: &IndexSubset, k: &IndexSubset) -> Option<(usize, usize)> {
    assert_same_modulus(j, k);
    if j.dimension() != k.dimension() {
        return None;
    }
    let n = j.modulus();
    for a in units(n) {
        for b in 0..n {
            if affine_image_sorted(n, j.elements(), a, b) == k.elements() {
                return Some((a, b));
            }
        }
    }
    None
}

/// Order-independent fingerprint of a frame's angle multiset: the canonical
/// residues of all `c_J(k)`, sorted. Equal fingerprints are necessary for
/// unitary equivalence; unequal fingerprints settle inequivalence outright.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AngleFingerprint {
    order: usize,
    residues: Vec<IntPolynomial>,
}

impl AngleFingerprint {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn residues(&self) -> &[IntPolynomial] {
        &self.residues
    }
}

/// Computes the angle fingerprint of the frame selected by `subset`.
pub fn angle_invariant(subset: &IndexSubset) -> AngleFingerprint {
    let av = angle_vector(subset);
    let mut residues: Vec<IntPolynomial> = av
        .values()
        .iter()
        .map(|v| v.canonical_residue())
        .collect();
    residues.sort_unstable();
    AngleFingerprint {
        order: subset.modulus(),
        residues,
    }
}

/// The unitary search ran out of its node budget before reaching a verdict.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("unitary equivalence search exceeded the node budget of {budget}")]
pub struct BudgetExceeded {
    pub budget: u64,
}

/// A relabeling of `Z_n` under which the Gram matrices of two frames agree
/// entry for entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitaryWitness {
    permutation: Vec<usize>,
}

impl UnitaryWitness {
    /// `sigma` as a table: index `x` holds `sigma(x)`.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Cycle decomposition, nontrivial cycles only, each starting at its
    /// smallest element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.permutation.len();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.permutation[x];
            }
            if cycle.len() > 1 {
                cycles.push(cycle);
            }
        }
        cycles
    }

    /// Renders the cycles as, e.g., `(1 3)(2 6)`; the identity prints as `id`.
    pub fn cycle_notation(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "id".to_string();
        }
        cycles
            .iter()
            .map(|c| {
                let inner = c
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" ");
                format!("({inner})")
            })
            .collect()
    }

    /// Exact recheck of the defining property against both frames.
    pub fn verify(&self, j: &IndexSubset, k: &IndexSubset) -> bool {
        let n = j.modulus();
        if k.modulus() != n || self.permutation.len() != n {
            return false;
        }
        let cj = angle_vector(j);
        let ck = angle_vector(k);
        for x in 0..n {
            for y in 0..n {
                let lhs = cj.value((x + n - y) % n);
                let sx = self.permutation[x];
                let sy = self.permutation[y];
                let rhs = ck.value((sx + n - sy) % n);
                if !lhs.eq_value(rhs) {
                    return false;
                }
            }
        }
        true
    }
}

/// Decides unitary equivalence of the frames selected by `j` and `k`.
///
/// Returns `Ok(Some(witness))` with a Gram-matching relabeling, `Ok(None)`
/// when no relabeling exists, or an error if the backtracking search exceeds
/// `node_budget` nodes.
///
/// # Panics
/// Panics if the subsets have different moduli or sizes, or if either fails
/// to generate `Z_n`.
pub fn unitarily_equivalent(
    j: &IndexSubset,
    k: &IndexSubset,
    node_budget: u64,
) -> Result<Option<UnitaryWitness>, BudgetExceeded> {
    assert_same_modulus(j, k);
    assert_eq!(
        j.dimension(),
        k.dimension(),
        "unitary comparison requires equal subset sizes"
    );
    assert!(
        j.generates() && k.generates(),
        "unitary comparison requires generating subsets"
    );
    let n = j.modulus();

    if angle_invariant(j) != angle_invariant(k) {
        return Ok(None);
    }

    // Intern the distinct angle values of both frames as small ids so the
    // inner loop compares integers, not polynomials.
    let mut table: std::collections::HashMap<IntPolynomial, u32> = std::collections::HashMap::new();
    let mut intern = |p: IntPolynomial| -> u32 {
        let next = table.len() as u32;
        *table.entry(p).or_insert(next)
    };
    let cj = angle_vector(j);
    let ck = angle_vector(k);
    let id_j: Vec<u32> = cj
        .values()
        .iter()
        .map(|v| intern(v.canonical_residue()))
        .collect();
    let id_k: Vec<u32> = ck
        .values()
        .iter()
        .map(|v| intern(v.canonical_residue()))
        .collect();

    // Candidate images of x are the positions where c_K takes the value
    // c_J(x); this is the x-vs-0 constraint, applied up front.
    let class_count = table.len();
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); class_count];
    for (m, &id) in id_k.iter().enumerate() {
        classes[id as usize].push(m);
    }

    let mut search = PermutationSearch {
        n,
        id_j: &id_j,
        id_k: &id_k,
        classes: &classes,
        sigma: vec![0usize; n],
        used: vec![false; n],
        nodes: 0,
        node_budget,
    };
    search.used[0] = true;
    if search.assign(1)? {
        Ok(Some(UnitaryWitness {
            permutation: search.sigma,
        }))
    } else {
        Ok(None)
    }
}

/// State of the backtracking search for an angle-preserving permutation.
struct PermutationSearch<'a> {
    n: usize,
    id_j: &'a [u32],
    id_k: &'a [u32],
    /// Positions of `c_K` holding each interned angle value.
    classes: &'a [Vec<usize>],
    sigma: Vec<usize>,
    used: Vec<bool>,
    nodes: u64,
    node_budget: u64,
}

impl PermutationSearch<'_> {
    /// Depth-first assignment of `sigma(x), sigma(x+1), ...`; each candidate
    /// is checked against every previously assigned position. The reverse
    /// difference is the complex conjugate of the forward one, so one
    /// direction suffices.
    fn assign(&mut self, x: usize) -> Result<bool, BudgetExceeded> {
        let n = self.n;
        if x == n {
            return Ok(true);
        }
        for i in 0..self.classes[self.id_j[x] as usize].len() {
            let m = self.classes[self.id_j[x] as usize][i];
            self.nodes += 1;
            if self.nodes > self.node_budget {
                return Err(BudgetExceeded {
                    budget: self.node_budget,
                });
            }
            if self.used[m] {
                continue;
            }
            let consistent = (1..x).all(|y| {
                let want = self.id_j[(x + n - y) % n];
                let have = self.id_k[(m + n - self.sigma[y]) % n];
                want == have
            });
            if !consistent {
                continue;
            }
            self.sigma[x] = m;
            self.used[m] = true;
            if self.assign(x + 1)? {
                return Ok(true);
            }
            self.used[m] = false;
        }
        Ok(false)
    }
}

/// True when the frames are unitarily equivalent but their subsets are not
/// multiplicatively equivalent. Checks the cheap condition first.
pub fn is_exceptional_pair(
    j: &IndexSubset,
    k: &IndexSubset,
    node_budget: u64,
) -> Result<bool, BudgetExceeded> {
    if mult_equivalent(j, k) {
        return Ok(false);
    }
    Ok(unitarily_equivalent(j, k, node_budget)?.is_some())
}

/// A unit `a` such that `sigma(x) = a^(-1) * x` witnesses the unitary
/// equivalence of `J` and `a*J`; used to cross-check the search.
pub fn mult_induced_witness(n: usize, a: usize) -> Option<UnitaryWitness> {
    let inv = mod_inverse(n, a)?;
    Some(UnitaryWitness {
        permutation: (0..n).map(|x| (inv * x) % n).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn subset(n: usize, elems: &[usize]) -> IndexSubset {
        IndexSubset::new(n, elems).expect("valid subset")
    }

    #[test]
    fn mult_canonical_frozen_examples() {
        let c = mult_canonical(&subset(8, &[5, 7]));
        assert_eq!(c.representative.elements(), &[1, 3]);
        assert_eq!(c.witness, Transform::Mult { a: 5 });
        assert_eq!(c.witness.apply(&subset(8, &[5, 7])), c.representative);

        let c = mult_canonical(&subset(8, &[3, 6, 7]));
        assert_eq!(c.representative.elements(), &[1, 2, 5]);
        assert_eq!(c.witness, Transform::Mult { a: 3 });
    }

    #[test]
    fn mult_canonical_is_orbit_invariant() {
        for n in [8usize, 12, 15] {
            let s = subset(n, &[1, 2, 5]);
            let rep = mult_canonical(&s).representative;
            for a in units(n) {
                let moved = Transform::Mult { a }.apply(&s);
                assert_eq!(mult_canonical(&moved).representative, rep, "n={n} a={a}");
            }
        }
    }

    #[test]
    fn affine_canonical_matches_brute_force() {
        // Oracle: direct minimum over all phi(8)*8 = 32 images.
        let s = subset(8, &[1, 2, 5]);
        let brute = units(8)
            .into_iter()
            .cartesian_product(0..8)
            .map(|(a, b)| affine_image_sorted(8, s.elements(), a, b))
            .min()
            .unwrap();
        let c = affine_canonical(&s);
        assert_eq!(c.representative.elements(), &brute[..]);
        assert_eq!(c.representative.elements(), &[0, 1, 4]);
        assert_eq!(c.witness.apply(&s), c.representative);
    }

    #[test]
    fn affine_canonical_of_singletons_is_zero() {
        for n in 1..=12 {
            for j in 0..n {
                let c = affine_canonical(&subset(n, &[j]));
                assert_eq!(c.representative.elements(), &[0], "n={n} j={j}");
            }
        }
    }

    #[test]
    fn affine_canonical_is_orbit_invariant() {
        let s = subset(12, &[0, 1, 5, 6]);
        let rep = affine_canonical(&s).representative;
        for a in units(12) {
            for b in 0..12 {
                let moved = Transform::Affine { a, b }.apply(&s);
                assert_eq!(affine_canonical(&moved).representative, rep);
            }
        }
    }

    #[test]
    fn mult_equivalence_and_witness() {
        let j = subset(8, &[1, 2, 5]);
        let k = subset(8, &[3, 6, 7]);
        assert!(mult_equivalent(&j, &k));
        let a = mult_witness(&j, &k).unwrap();
        assert_eq!(a, 3);
        assert_eq!(Transform::Mult { a }.apply(&j), k);
        assert!(!mult_equivalent(&j, &subset(8, &[1, 5, 6])));
    }

    #[test]
    fn affine_witness_round_trip() {
        let j = subset(8, &[1, 2, 5]);
        let k = Transform::Affine { a: 3, b: 5 }.apply(&j);
        let (a, b) = affine_witness(&j, &k).unwrap();
        assert_eq!(Transform::Affine { a, b }.apply(&j), k);
        assert!(affine_equivalent(&j, &k));
    }

    #[test]
    fn fingerprints_frozen_examples() {
        // equal multisets for the order-8 exceptional pair
        assert_eq!(
            angle_invariant(&subset(8, &[1, 2, 5])),
            angle_invariant(&subset(8, &[1, 5, 6]))
        );
        // distinct multisets for {1,3} vs {1,5}: the first has zero angles,
        // the second does not
        assert_ne!(
            angle_invariant(&subset(8, &[1, 3])),
            angle_invariant(&subset(8, &[1, 5]))
        );
    }

    #[test]
    fn fingerprint_is_mult_invariant() {
        for n in [7usize, 8, 12] {
            let s = subset(n, &[1, 2, 5]);
            let fp = angle_invariant(&s);
            for a in units(n) {
                assert_eq!(angle_invariant(&Transform::Mult { a }.apply(&s)), fp);
            }
        }
    }

    #[test]
    fn unitary_search_finds_the_exceptional_pair() {
        let j = subset(8, &[1, 2, 5]);
        let k = subset(8, &[1, 5, 6]);
        let w = unitarily_equivalent(&j, &k, DEFAULT_NODE_BUDGET)
            .unwrap()
            .expect("pair is unitarily equivalent");
        assert_eq!(w.permutation()[0], 0);
        assert!(w.verify(&j, &k));
        assert!(is_exceptional_pair(&j, &k, DEFAULT_NODE_BUDGET).unwrap());
        // multiplicatively related partner is unitary but not exceptional
        let m = subset(8, &[3, 6, 7]);
        assert!(!is_exceptional_pair(&j, &m, DEFAULT_NODE_BUDGET).unwrap());
        assert!(unitarily_equivalent(&j, &m, DEFAULT_NODE_BUDGET)
            .unwrap()
            .is_some());
    }

    #[test]
    fn unitary_search_respects_fingerprint_filter() {
        let j = subset(8, &[1, 3]);
        let k = subset(8, &[1, 5]);
        assert!(unitarily_equivalent(&j, &k, DEFAULT_NODE_BUDGET)
            .unwrap()
            .is_none());
    }

    #[test]
    fn unitary_search_is_symmetric_on_the_frozen_pair() {
        let j = subset(8, &[1, 2, 5]);
        let k = subset(8, &[1, 5, 6]);
        let forward = unitarily_equivalent(&j, &k, DEFAULT_NODE_BUDGET).unwrap();
        let backward = unitarily_equivalent(&k, &j, DEFAULT_NODE_BUDGET).unwrap();
        assert!(forward.is_some() && backward.is_some());
        assert!(backward.unwrap().verify(&k, &j));
    }

    #[test]
    fn mult_induced_permutation_matches_gram() {
        for n in [5usize, 8, 12] {
            let s = subset(n, &[1, 2]);
            for a in units(n) {
                let moved = Transform::Mult { a }.apply(&s);
                let w = mult_induced_witness(n, a).unwrap();
                assert!(w.verify(&s, &moved), "n={n} a={a}");
            }
        }
    }

    #[test]
    fn budget_exhaustion_is_an_error_not_a_verdict() {
        let j = subset(8, &[1, 2, 5]);
        let k = subset(8, &[1, 5, 6]);
        let err = unitarily_equivalent(&j, &k, 1).unwrap_err();
        assert_eq!(err, BudgetExceeded { budget: 1 });
    }

    #[test]
    fn identity_witness_prints_as_id() {
        let j = subset(8, &[1, 2, 5]);
        let w = unitarily_equivalent(&j, &j, DEFAULT_NODE_BUDGET)
            .unwrap()
            .expect("self-equivalent");
        assert!(w.verify(&j, &j));
        let id = UnitaryWitness {
            permutation: (0..8).collect(),
        };
        assert_eq!(id.cycle_notation(), "id");
        let swap = UnitaryWitness {
            permutation: vec![0, 3, 6, 1, 4, 7, 2, 5],
        };
        assert_eq!(swap.cycle_notation(), "(1 3)(2 6)(5 7)");
    }

    #[test]
    fn trivial_modulus_is_self_equivalent() {
        let j = subset(1, &[0]);
        let w = unitarily_equivalent(&j, &j, DEFAULT_NODE_BUDGET)
            .unwrap()
            .expect("trivially equivalent");
        assert_eq!(w.permutation(), &[0]);
        assert!(mult_equivalent(&j, &j));
        assert!(affine_equivalent(&j, &j));
    }
}
