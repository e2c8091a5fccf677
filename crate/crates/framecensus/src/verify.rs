//! Self-check battery: recomputes desk-scale results along two independent
//! routes and reports disagreements. Used by the `verify` CLI subcommand and
//! by the test suite.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::census::enumerate_mult_classes;
use crate::counting::{
    affine_class_count, affine_fixed_subset_count, count_generating_subsets, mult_class_count,
    mult_fixed_subset_count, prime_total_count,
};
use crate::cyclotomic::RootSum;
use crate::frames::{angle_vector, verify_tight, IndexSubset};
use crate::numtheory::{is_prime, units};

/// Outcome of one named check group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub cases: usize,
    pub passed: bool,
    /// Empty while passing; names the first failing case otherwise.
    pub detail: String,
}

impl CheckOutcome {
    fn pass(name: &str, cases: usize) -> Self {
        CheckOutcome {
            name: name.to_string(),
            cases,
            passed: true,
            detail: String::new(),
        }
    }

    fn fail(name: &str, cases: usize, detail: String) -> Self {
        CheckOutcome {
            name: name.to_string(),
            cases,
            passed: false,
            detail,
        }
    }
}

/// Upper bounds on a fixed-subset count for a non-identity unit: at most
/// `n^(d-1)`, at most `n^(d-2)` when additionally `a^2 != 1`, and exactly 0
/// when `d = 2` with `a^2 != 1`.
///
/// Exposed as a standalone function so a harness can feed it a corrupted
/// count and watch it fail.
pub fn check_fix_bound(n: usize, a: usize, d: usize, count: &BigInt) -> Result<(), String> {
    let involution = (a * a) % n == 1 || n == 1;
    let case = format!("fix bound at n={n} a={a} d={d}: count {count}");
    if count > &BigInt::from(n).pow(d as u32 - 1) {
        return Err(format!("{case} exceeds n^(d-1)"));
    }
    if !involution {
        if d <= 2 {
            if !count.is_zero() {
                return Err(format!("{case} should vanish for a^2 != 1 and d <= 2"));
            }
        } else if count > &BigInt::from(n).pow(d as u32 - 2) {
            return Err(format!("{case} exceeds n^(d-2) for a^2 != 1"));
        }
    }
    Ok(())
}

fn check_burnside_vs_enumeration(max_n: usize, max_d: usize) -> CheckOutcome {
    let name = "mult_burnside_vs_enumeration";
    let mut cases = 0;
    for n in 1..=max_n {
        for d in 1..=max_d.min(n) {
            cases += 1;
            let enumerated = enumerate_mult_classes(n, d).len();
            let counted = mult_class_count(n, d);
            if BigInt::from(enumerated) != counted {
                return CheckOutcome::fail(
                    name,
                    cases,
                    format!("n={n} d={d}: enumeration {enumerated}, Burnside {counted}"),
                );
            }
        }
    }
    CheckOutcome::pass(name, cases)
}

fn naive_affine_class_count(n: usize, d: usize) -> usize {
    use itertools::Itertools;
    use std::collections::HashSet;
    let mut reps = HashSet::new();
    for c in (0..n).combinations(d) {
        let rep = units(n)
            .into_iter()
            .flat_map(|a| {
                (0..n).map(move |b| (a, b))
            })
            .map(|(a, b)| {
                let mut img: Vec<usize> = c.iter().map(|&x| (a * x + b) % n).collect();
                img.sort_unstable();
                img
            })
            .min()
            .expect("affine group is nonempty");
        reps.insert(rep);
    }
    reps.len()
}

fn check_affine_burnside_vs_enumeration(max_n: usize, max_d: usize) -> CheckOutcome {
    let name = "affine_burnside_vs_enumeration";
    let mut cases = 0;
    for n in 1..=max_n {
        for d in 1..=max_d.min(n) {
            cases += 1;
            let naive = naive_affine_class_count(n, d);
            let counted = affine_class_count(n, d);
            if BigInt::from(naive) != counted {
                return CheckOutcome::fail(
                    name,
                    cases,
                    format!("n={n} d={d}: enumeration {naive}, Burnside {counted}"),
                );
            }
        }
    }
    CheckOutcome::pass(name, cases)
}

fn check_fix_bounds(max_n: usize, max_d: usize) -> CheckOutcome {
    let name = "fix_count_bounds";
    let mut cases = 0;
    for n in 1..=max_n {
        for a in units(n) {
            if a == 1 || n == 1 {
                continue;
            }
            for d in 1..=max_d.min(n) {
                cases += 1;
                let count = mult_fixed_subset_count(n, a, d);
                if let Err(detail) = check_fix_bound(n, a, d, &count) {
                    return CheckOutcome::fail(name, cases, detail);
                }
            }
        }
    }
    CheckOutcome::pass(name, cases)
}

fn check_prime_closed_forms(max_n: usize, max_d: usize) -> CheckOutcome {
    let name = "prime_closed_forms";
    let mut cases = 0;
    for p in (2..=max_n).filter(|&p| is_prime(p)) {
        for d in 1..=max_d.min(p) {
            cases += 1;
            let closed = prime_total_count(p, d);
            let counted = mult_class_count(p, d);
            if closed != counted {
                return CheckOutcome::fail(
                    name,
                    cases,
                    format!("p={p} d={d}: closed form {closed}, Burnside {counted}"),
                );
            }
        }
    }
    CheckOutcome::pass(name, cases)
}

fn check_frame_identities(max_n: usize, max_d: usize) -> CheckOutcome {
    use itertools::Itertools;
    let name = "frame_identities";
    let mut cases = 0;
    for n in 1..=max_n {
        for d in 1..=max_d.min(n) {
            for c in (0..n).combinations(d) {
                cases += 1;
                let s = IndexSubset::new(n, &c).expect("enumerated subsets are valid");
                if let Err(detail) = check_one_frame(&s) {
                    return CheckOutcome::fail(name, cases, detail);
                }
            }
        }
    }
    CheckOutcome::pass(name, cases)
}

fn check_one_frame(s: &IndexSubset) -> Result<(), String> {
    let n = s.modulus();
    let d = s.dimension();
    let case = format!("n={n} subset={:?}", s.elements());
    if !verify_tight(s) {
        return Err(format!("{case}: tightness failed"));
    }
    let av = angle_vector(s);
    for k in 0..n {
        if !av.value((n - k) % n).eq_value(&av.value(k).conjugate()) {
            return Err(format!("{case}: conjugate symmetry failed at k={k}"));
        }
    }
    let mut power = RootSum::zero(n);
    let mut plain = RootSum::zero(n);
    for k in 0..n {
        power = &power + &(av.value(k) * &av.value(k).conjugate());
        plain = &plain + av.value(k);
    }
    if !power.eq_value(&RootSum::integer(n, (n * d) as i64)) {
        return Err(format!("{case}: angle power sum is not n*d"));
    }
    let expected = if s.is_lifted() { n as i64 } else { 0 };
    if !plain.eq_value(&RootSum::integer(n, expected)) {
        return Err(format!("{case}: angle sum does not match the lifted flag"));
    }
    Ok(())
}

fn check_generating_count_at_eight() -> CheckOutcome {
    let name = "known_values_at_eight";
    let mut failures = Vec::new();
    if mult_class_count(8, 2) != BigInt::from(7) {
        failures.push("mult class count at n=8 d=2 is not 7");
    }
    if count_generating_subsets(8, 2) != BigInt::from(22) {
        failures.push("generating subset count at n=8 d=2 is not 22");
    }
    for a in [3usize, 5, 7] {
        if mult_fixed_subset_count(8, a, 2) != BigInt::from(2) {
            failures.push("fixed subset count at n=8 d=2 is not 2 for some unit");
        }
    }
    if affine_fixed_subset_count(8, 3, 0, 2) != BigInt::from(4) {
        failures.push("affine fixed count at n=8 a=3 b=0 d=2 is not 4");
    }
    if failures.is_empty() {
        CheckOutcome::pass(name, 6)
    } else {
        CheckOutcome::fail(name, 6, failures.join("; "))
    }
}

/// Runs every check group on the box `n <= max_n`, `d <= max_d`.
pub fn run_battery(max_n: usize, max_d: usize) -> Vec<CheckOutcome> {
    let mut outcomes = vec![
        check_burnside_vs_enumeration(max_n, max_d),
        check_affine_burnside_vs_enumeration(max_n, max_d),
        check_fix_bounds(max_n, max_d),
        check_prime_closed_forms(max_n, max_d),
        check_frame_identities(max_n, max_d),
    ];
    if max_n >= 8 && max_d >= 2 {
        outcomes.push(check_generating_count_at_eight());
    }
    outcomes
}
