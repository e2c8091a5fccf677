//! Exact counts of frame classes. Everything returns big integers computed
//! by Burnside averaging over the unit group (multiplicative classes) or the
//! affine group (affine classes), with Moebius inclusion-exclusion supplying
//! the generation constraint. Prime moduli additionally admit closed forms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::numtheory::{
    affine_orbits, divisors, euler_phi, is_prime, is_unit, moebius, mult_orbits, units,
};

/// Binomial coefficient `C(n, k)` as a big integer (0 when `k > n`).
pub fn binomial(n: usize, k: usize) -> BigInt {
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// `k!` as a big integer.
pub fn factorial(k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= BigInt::from(i);
    }
    acc
}

/// Number of `d`-element subsets of `Z_n` that generate `Z_n`, by
/// inclusion-exclusion over the subgroups containing them:
/// `sum over m | n of mu(m) * C(n/m, d)`.
pub fn count_generating_subsets(n: usize, d: usize) -> BigInt {
    assert!(n >= 1 && d >= 1, "counting requires n >= 1 and d >= 1");
    let mut total = BigInt::zero();
    for m in divisors(n) {
        let mu = moebius(m);
        if mu != 0 {
            total += BigInt::from(mu) * binomial(n / m, d);
        }
    }
    total
}

/// Number of `d`-tuples over `Z_n` that generate `Z_n`:
/// `n^d * prod over primes p | n of (1 - p^-d)`, computed exactly as
/// `sum over m | n of mu(m) * (n/m)^d`.
pub fn hall_eulerian(n: usize, d: usize) -> BigInt {
    assert!(n >= 1 && d >= 1, "counting requires n >= 1 and d >= 1");
    let mut total = BigInt::zero();
    for m in divisors(n) {
        let mu = moebius(m);
        if mu != 0 {
            total += BigInt::from(mu) * BigInt::from(n / m).pow(d as u32);
        }
    }
    total
}

/// Coefficient of `x^d` in the product of `(1 + x^s)` over the given orbit
/// sizes: the number of `d`-element unions of whole orbits.
fn unions_of_orbits(sizes: &[usize], d: usize) -> BigInt {
    let mut coeffs = vec![BigInt::zero(); d + 1];
    coeffs[0] = BigInt::one();
    for &s in sizes {
        if s > d {
            continue;
        }
        for i in (s..=d).rev() {
            let lower = coeffs[i - s].clone();
            coeffs[i] += lower;
        }
    }
    coeffs[d].clone()
}

/// Number of generating `d`-subsets of `Z_n` fixed setwise by `x -> a*x`.
///
/// A subset is fixed exactly when it is a union of orbits of the map, and the
/// generation constraint is removed by Moebius inclusion-exclusion over the
/// subgroups `m*Z_n`, each isomorphic to `Z_(n/m)` with the action of
/// `a mod n/m`.
///
/// # Panics
/// Panics if `a` is not a unit modulo `n`.
pub fn mult_fixed_subset_count(n: usize, a: usize, d: usize) -> BigInt {
    assert!(is_unit(n, a), "{a} is not a unit modulo {n}");
    assert!(d >= 1, "counting requires d >= 1");
    let mut total = BigInt::zero();
    for m in divisors(n) {
        let mu = moebius(m);
        if mu == 0 {
            continue;
        }
        let sub = n / m;
        let sizes = mult_orbits(sub, a % sub).orbit_sizes();
        total += BigInt::from(mu) * unions_of_orbits(&sizes, d);
    }
    total
}

/// Number of classes of generating `d`-subsets of `Z_n` under the
/// multiplicative action of the units, by Burnside's lemma.
///
/// # Panics
/// Panics if the Burnside sum is not divisible by `phi(n)`, which would
/// indicate an internal error.
pub fn mult_class_count(n: usize, d: usize) -> BigInt {
    assert!(n >= 1 && (1..=n).contains(&d), "requires 1 <= d <= n");
    let mut total = BigInt::zero();
    for a in units(n) {
        total += mult_fixed_subset_count(n, a, d);
    }
    let phi = BigInt::from(euler_phi(n));
    let (q, r) = num_integer::Integer::div_rem(&total, &phi);
    assert!(r.is_zero(), "Burnside sum {total} not divisible by phi({n})");
    q
}

/// Number of `d`-subsets of `Z_n` fixed setwise by `x -> a*x + b` (no
/// generation constraint): the subset must be a union of whole orbits.
///
/// # Panics
/// Panics if `a` is not a unit modulo `n`.
pub fn affine_fixed_subset_count(n: usize, a: usize, b: usize, d: usize) -> BigInt {
    assert!(is_unit(n, a), "{a} is not a unit modulo {n}");
    assert!(d >= 1, "counting requires d >= 1");
    let sizes = affine_orbits(n, a, b).orbit_sizes();
    unions_of_orbits(&sizes, d)
}

/// Number of classes of `d`-subsets of `Z_n` under the affine group
/// `x -> a*x + b`, by Burnside's lemma over all `n * phi(n)` group elements.
///
/// # Panics
/// Panics if the Burnside sum is not divisible by the group order.
pub fn affine_class_count(n: usize, d: usize) -> BigInt {
    assert!(n >= 1 && (1..=n).contains(&d), "requires 1 <= d <= n");
    let mut total = BigInt::zero();
    for a in units(n) {
        for b in 0..n {
            total += affine_fixed_subset_count(n, a, b, d);
        }
    }
    let group_order = BigInt::from(n) * BigInt::from(euler_phi(n));
    let (q, r) = num_integer::Integer::div_rem(&total, &group_order);
    assert!(
        r.is_zero(),
        "Burnside sum {total} not divisible by the affine group order at n={n}"
    );
    q
}

fn assert_prime(p: usize) {
    assert!(is_prime(p), "{p} is not prime");
}

/// Divisor-sum core shared by the prime closed forms:
/// `(1/(p-1)) * sum over j | gcd(p-1, d) of C((p-1)/j, d/j) * phi(j)`.
fn prime_orbit_sum(p: usize, d: usize) -> BigInt {
    let g = crate::numtheory::gcd(p - 1, d);
    let mut total = BigInt::zero();
    for j in divisors(g) {
        total += binomial((p - 1) / j, d / j) * BigInt::from(euler_phi(j));
    }
    let (q, r) = num_integer::Integer::div_rem(&total, &BigInt::from(p - 1));
    assert!(r.is_zero(), "orbit sum not divisible by p-1 at p={p} d={d}");
    q
}

/// Number of classes of generating `d`-subsets of `Z_p` (p prime) that avoid
/// the residue 0, counted up to multiplication by units.
///
/// # Panics
/// Panics if `p` is not prime or `d == 0`.
pub fn prime_unlifted_count(p: usize, d: usize) -> BigInt {
    assert_prime(p);
    assert!(d >= 1, "counting requires d >= 1");
    prime_orbit_sum(p, d)
}

/// Number of classes of generating `d`-subsets of `Z_p` (p prime) that
/// contain the residue 0. Removing that 0 gives a `(d-1)`-subset avoiding 0,
/// so for `d >= 2` this equals the unlifted count one dimension down.
pub fn prime_lifted_count(p: usize, d: usize) -> BigInt {
    assert_prime(p);
    assert!(d >= 1, "counting requires d >= 1");
    if d == 1 {
        // {0} does not generate Z_p for p > 1
        return BigInt::zero();
    }
    prime_orbit_sum(p, d - 1)
}

/// Total number of multiplicative classes at a prime modulus: unlifted plus
/// lifted. For primes this also equals the number of unitary classes.
pub fn prime_total_count(p: usize, d: usize) -> BigInt {
    prime_unlifted_count(p, d) + prime_lifted_count(p, d)
}

/// Number of multiplicative classes of generating `d`-subsets of `Z_p` whose
/// frames are real, i.e. whose class contains a subset `J = -J`.
///
/// # Panics
/// Panics if `p` is not an odd prime or `d < 2`.
pub fn prime_real_count(p: usize, d: usize) -> BigInt {
    assert_prime(p);
    assert!(p % 2 == 1, "real-class count requires an odd prime");
    assert!(d >= 2, "real-class count requires d >= 2");
    // Odd d forces 0 into the subset; strip it and count one dimension down.
    let dd = if d.is_multiple_of(2) { d } else { d - 1 };
    let mut total = BigInt::zero();
    for j in divisors(crate::numtheory::gcd(p - 1, dd)) {
        if j % 2 == 0 {
            total += binomial((p - 1) / j, dd / j) * BigInt::from(euler_phi(j));
        }
    }
    for j in divisors(crate::numtheory::gcd(p - 1, dd / 2)) {
        if j % 2 == 1 {
            total += binomial((p - 1) / (2 * j), dd / (2 * j)) * BigInt::from(euler_phi(j));
        }
    }
    let (q, r) = num_integer::Integer::div_rem(&total, &BigInt::from(p - 1));
    assert!(r.is_zero(), "real-class sum not divisible by p-1 at p={p} d={d}");
    q
}

/// First-order estimate of the multiplicative class count:
/// `n^d * prod over p | n of (1 - p^-d) / (d! * phi(n))`, returned as an
/// exact rational in lowest terms.
pub fn asymptotic_estimate(n: usize, d: usize) -> BigRational {
    assert!(n >= 1 && d >= 1, "estimate requires n >= 1 and d >= 1");
    BigRational::new(
        hall_eulerian(n, d),
        factorial(d) * BigInt::from(euler_phi(n)),
    )
}

/// Exact relative error ratio `mult_class_count / asymptotic_estimate`.
pub fn estimate_ratio(n: usize, d: usize) -> BigRational {
    let estimate = asymptotic_estimate(n, d);
    assert!(!estimate.is_zero(), "estimate vanishes at n={n} d={d}");
    BigRational::from(mult_class_count(n, d)) / estimate
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(8, 2), big(28));
        assert_eq!(binomial(8, 0), big(1));
        assert_eq!(binomial(3, 5), big(0));
        assert_eq!(binomial(100, 10), "17310309456440".parse().unwrap());
    }

    #[test]
    fn generating_subset_counts() {
        assert_eq!(count_generating_subsets(8, 2), big(22));
        assert_eq!(count_generating_subsets(6, 1), big(2));
        assert_eq!(count_generating_subsets(1, 1), big(1));
    }

    #[test]
    fn generating_subset_count_matches_enumeration() {
        for n in 1..=14 {
            for d in 1..=n.min(4) {
                let brute = (0..n)
                    .combinations(d)
                    .filter(|c| crate::numtheory::subset_generates(n, c))
                    .count();
                assert_eq!(
                    count_generating_subsets(n, d),
                    BigInt::from(brute),
                    "n={n} d={d}"
                );
            }
        }
    }

    #[test]
    fn hall_eulerian_values() {
        assert_eq!(hall_eulerian(8, 2), big(48));
        assert_eq!(hall_eulerian(12, 2), big(96));
        assert_eq!(hall_eulerian(1, 3), big(1));
        // phi itself is the d = 1 case
        for n in 1..=60 {
            assert_eq!(hall_eulerian(n, 1), BigInt::from(euler_phi(n)));
        }
    }

    #[test]
    fn hall_eulerian_matches_generating_tuple_enumeration() {
        // Oracle: count pairs (x, y) with gcd(x, y, n) = 1 directly.
        for n in 1..=16 {
            let brute = (0..n)
                .cartesian_product(0..n)
                .filter(|&(x, y)| crate::numtheory::subset_generates(n, &[x, y]))
                .count();
            assert_eq!(hall_eulerian(n, 2), BigInt::from(brute), "n={n}");
        }
        let brute12 = (0..12)
            .cartesian_product(0..12)
            .filter(|&(x, y)| crate::numtheory::subset_generates(12, &[x, y]))
            .count();
        assert_eq!(brute12, 96);
    }

    #[test]
    fn fixed_subset_counts_at_eight() {
        for a in [3, 5, 7] {
            assert_eq!(mult_fixed_subset_count(8, a, 2), big(2), "a={a}");
        }
        assert_eq!(mult_fixed_subset_count(8, 1, 2), big(22));
    }

    #[test]
    fn fixed_subset_count_matches_brute_force() {
        use crate::numtheory::subset_generates;
        for n in 1..=14 {
            for a in units(n) {
                for d in 1..=n.min(3) {
                    let brute = (0..n)
                        .combinations(d)
                        .filter(|c| {
                            subset_generates(n, c)
                                && c.iter()
                                    .map(|&x| (a * x) % n)
                                    .sorted()
                                    .collect::<Vec<_>>()
                                    == *c
                        })
                        .count();
                    assert_eq!(
                        mult_fixed_subset_count(n, a, d),
                        BigInt::from(brute),
                        "n={n} a={a} d={d}"
                    );
                }
            }
        }
    }

    #[test]
    fn class_counts_at_eight() {
        assert_eq!(mult_class_count(8, 2), big(7));
        assert_eq!(mult_class_count(8, 3), big(17));
        // Affine values frozen from the naive orbit partition below.
        assert_eq!(affine_class_count(8, 2), big(3));
        assert_eq!(affine_class_count(8, 3), big(4));
    }

    #[test]
    fn one_dimensional_classes_are_unique() {
        for n in 1..=40 {
            assert_eq!(mult_class_count(n, 1), big(1), "n={n}");
        }
    }

    #[test]
    fn affine_fixed_counts() {
        // x -> x: every subset is fixed
        for n in 1..=12 {
            for d in 1..=n {
                assert_eq!(affine_fixed_subset_count(n, 1, 0, d), binomial(n, d));
            }
        }
        // x -> x + 1 is a single n-cycle: only the full subset is a union
        for n in 2..=12 {
            for d in 1..n {
                assert_eq!(affine_fixed_subset_count(n, 1, 1, d), big(0));
            }
            assert_eq!(affine_fixed_subset_count(n, 1, 1, n), big(1));
        }
        // frozen: x -> 3x on Z_8 fixes 4 of the 28 two-element subsets
        assert_eq!(affine_fixed_subset_count(8, 3, 0, 2), big(4));
    }

    #[test]
    fn affine_fixed_count_brute_force_at_eight() {
        let brute = (0..8)
            .combinations(2)
            .filter(|c| {
                c.iter()
                    .map(|&x| (3 * x) % 8)
                    .sorted()
                    .collect::<Vec<_>>()
                    == *c
            })
            .count();
        assert_eq!(brute, 4);
    }

    #[test]
    fn affine_class_count_matches_naive_orbits() {
        // Oracle: canonical representative = lexicographic minimum over all
        // affine images; count distinct representatives.
        use std::collections::HashSet;
        for n in 1..=10 {
            for d in 1..=n.min(3) {
                let mut reps = HashSet::new();
                for c in (0..n).combinations(d) {
                    let mut best: Option<Vec<usize>> = None;
                    for a in units(n) {
                        for b in 0..n {
                            let img: Vec<usize> =
                                c.iter().map(|&x| (a * x + b) % n).sorted().collect();
                            if best.as_ref().is_none_or(|cur| img < *cur) {
                                best = Some(img);
                            }
                        }
                    }
                    reps.insert(best.unwrap());
                }
                assert_eq!(
                    affine_class_count(n, d),
                    BigInt::from(reps.len()),
                    "n={n} d={d}"
                );
            }
        }
    }

    #[test]
    fn prime_closed_forms_match_burnside() {
        for p in [2, 3, 5, 7, 11, 13] {
            for d in 1..=p.min(6) {
                assert_eq!(
                    prime_total_count(p, d),
                    mult_class_count(p, d),
                    "p={p} d={d}"
                );
            }
        }
    }

    #[test]
    fn prime_pair_and_triple_formulas() {
        for p in [3usize, 5, 7, 11, 13, 17, 19] {
            assert_eq!(prime_total_count(p, 2), big(p.div_ceil(2) as i64), "p={p}");
            if p >= 3 {
                let expected = if p % 3 == 1 {
                    (p * p - 2 * p + 7) / 6
                } else {
                    (p * p - 2 * p + 3) / 6
                };
                assert_eq!(prime_total_count(p, 3), big(expected as i64), "p={p}");
            }
        }
    }

    #[test]
    fn prime_unlifted_and_lifted_split() {
        // d = 1: the only generating singleton class is a nonzero residue
        for p in [2, 3, 5, 7] {
            assert_eq!(prime_unlifted_count(p, 1), big(1));
            assert_eq!(prime_lifted_count(p, 1), big(0));
        }
        // lifting strips the zero: lifted(p, d) = unlifted(p, d-1)
        for p in [3, 5, 7, 11] {
            for d in 2..=5 {
                assert_eq!(prime_lifted_count(p, d), prime_unlifted_count(p, d - 1));
            }
        }
    }

    #[test]
    fn prime_real_small_cases() {
        for p in [3usize, 5, 7, 11, 13, 17, 19] {
            assert_eq!(prime_real_count(p, 2), big(1), "p={p} d=2");
            assert_eq!(prime_real_count(p, 3), big(1), "p={p} d=3");
        }
        // frozen from the symmetric-subset enumeration oracle below
        assert_eq!(prime_real_count(13, 4), big(3));
    }

    #[test]
    fn prime_real_matches_symmetric_orbit_enumeration() {
        // Oracle: count multiplicative classes containing a subset J = -J by
        // enumerating all generating d-subsets, keeping the symmetric ones,
        // and collapsing them by the unit action.
        use std::collections::HashSet;
        for p in [3usize, 5, 7, 11, 13] {
            for d in 2..=p.min(5) {
                let mut reps = HashSet::new();
                for c in (0..p).combinations(d) {
                    if !crate::numtheory::subset_generates(p, &c) {
                        continue;
                    }
                    let neg: Vec<usize> = c.iter().map(|&x| (p - x) % p).sorted().collect();
                    if neg != c {
                        continue;
                    }
                    let rep = units(p)
                        .into_iter()
                        .map(|a| {
                            c.iter().map(|&x| (a * x) % p).sorted().collect::<Vec<_>>()
                        })
                        .min()
                        .unwrap();
                    reps.insert(rep);
                }
                assert_eq!(
                    prime_real_count(p, d),
                    BigInt::from(reps.len()),
                    "p={p} d={d}"
                );
            }
        }
    }

    #[test]
    fn prime_real_stable_across_the_odd_step() {
        // real-class count is unchanged from even d to d+1 (d >= 4 even)
        for p in [5usize, 7, 11, 13, 17] {
            for d in [4usize, 6] {
                if d < p {
                    assert_eq!(prime_real_count(p, d), prime_real_count(p, d + 1));
                }
            }
        }
    }

    #[test]
    fn estimate_values() {
        let a82 = asymptotic_estimate(8, 2);
        assert_eq!(a82, BigRational::from(big(6)));
        for n in 1..=30 {
            assert_eq!(asymptotic_estimate(n, 1), BigRational::from(big(1)));
        }
        let a83 = asymptotic_estimate(8, 3);
        assert_eq!(a83, BigRational::new(big(56), big(3)));
    }

    #[test]
    fn estimate_denominator_is_positive_and_reduced() {
        for n in [6usize, 8, 9, 12, 30] {
            for d in 1..=4 {
                let a = asymptotic_estimate(n, d);
                assert!(a.denom() > &BigInt::zero());
                let g = num_integer::gcd(a.numer().clone(), a.denom().clone());
                assert_eq!(g, BigInt::one());
            }
        }
    }
}
