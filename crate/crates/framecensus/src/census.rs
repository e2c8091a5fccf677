//! Full censuses: enumerate every multiplicative class of generating
//! `d`-subsets of `Z_n`, cross-check the count against the Burnside formula,
//! merge classes that are unitarily equivalent, and serialize the result.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::counting::{asymptotic_estimate, mult_class_count};
use crate::equivalence::{
    angle_invariant, mult_image_sorted, unitarily_equivalent, AngleFingerprint,
    DEFAULT_NODE_BUDGET,
};
use crate::frames::IndexSubset;
use crate::numtheory::units;

/// Lexicographically ordered canonical representatives of the multiplicative
/// classes of generating `d`-subsets of `Z_n`. A subset is kept exactly when
/// no unit maps it to something lexicographically smaller.
///
/// The subset space is split by leading element into contiguous lexicographic
/// blocks that are scanned in parallel and reassembled in order, so the
/// output is independent of the worker count.
///
/// # Panics
/// Panics unless `1 <= d <= n`.
pub fn enumerate_mult_classes(n: usize, d: usize) -> Vec<IndexSubset> {
    assert!(n >= 1 && (1..=n).contains(&d), "requires 1 <= d <= n");
    let unit_list = units(n);
    let blocks: Vec<Vec<IndexSubset>> = (0..=(n - d))
        .into_par_iter()
        .map(|first| {
            let mut found = Vec::new();
            let mut elems = vec![0usize; d];
            elems[0] = first;
            scan_block(n, d, 1, &mut elems, &unit_list, &mut found);
            found
        })
        .collect();
    blocks.into_iter().flatten().collect()
}

fn scan_block(
    n: usize,
    d: usize,
    depth: usize,
    elems: &mut Vec<usize>,
    unit_list: &[usize],
    found: &mut Vec<IndexSubset>,
) {
    if depth == d {
        if crate::numtheory::subset_generates(n, elems) && is_mult_canonical(n, elems, unit_list)
        {
            found.push(IndexSubset::new(n, elems).expect("enumerated subsets are valid"));
        }
        return;
    }
    let lo = elems[depth - 1] + 1;
    let hi = n - (d - depth - 1);
    for next in lo..hi {
        elems[depth] = next;
        scan_block(n, d, depth + 1, elems, unit_list, found);
    }
}

fn is_mult_canonical(n: usize, elems: &[usize], unit_list: &[usize]) -> bool {
    for &a in unit_list {
        if a == 1 {
            continue;
        }
        if mult_image_sorted(n, elems, a).as_slice() < elems {
            return false;
        }
    }
    true
}

/// Disjoint-set forest over class indices.
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx != ry {
            // keep the smaller index as root for deterministic numbering
            let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
            self.parent[hi] = lo;
        }
    }
}

/// Result of merging multiplicative classes by unitary equivalence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeOutcome {
    /// Dense component id per representative, numbered by first appearance.
    pub component_of: Vec<usize>,
    /// Index pairs that the search proved unitarily equivalent.
    pub exceptional_pairs: Vec<(usize, usize)>,
    /// Index pairs on which the search ran out of budget.
    pub unresolved_pairs: Vec<(usize, usize)>,
}

impl MergeOutcome {
    pub fn component_count(&self) -> usize {
        self.component_of.iter().copied().max().map_or(0, |m| m + 1)
    }

    /// Component count if every unresolved pair were in fact equivalent;
    /// together with [`component_count`](Self::component_count) this brackets
    /// the true number of unitary classes.
    pub fn component_count_if_unresolved_merge(&self) -> usize {
        let m = self.component_of.len();
        let mut uf = UnionFind::new(m);
        for (i, &c) in self.component_of.iter().enumerate() {
            for (j, &cj) in self.component_of.iter().enumerate().take(i) {
                if c == cj {
                    uf.union(i, j);
                }
            }
        }
        for &(i, j) in &self.unresolved_pairs {
            uf.union(i, j);
        }
        let mut roots: Vec<usize> = (0..m).map(|i| uf.find(i)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }
}

/// Groups representatives by angle fingerprint and, within each group, runs
/// the unitary search on pairs not already connected, unioning on success.
///
/// The representatives are assumed pairwise multiplicatively inequivalent
/// and generating, as produced by [`enumerate_mult_classes`].
pub fn merge_unitary(reps: &[IndexSubset], node_budget: u64) -> MergeOutcome {
    let fingerprints: Vec<AngleFingerprint> =
        reps.par_iter().map(angle_invariant).collect();
    let mut buckets: HashMap<&AngleFingerprint, Vec<usize>> = HashMap::new();
    for (i, fp) in fingerprints.iter().enumerate() {
        buckets.entry(fp).or_default().push(i);
    }
    let mut groups: Vec<Vec<usize>> = buckets
        .into_values()
        .filter(|g| g.len() > 1)
        .collect();
    groups.sort_by_key(|g| g[0]);

    let mut uf = UnionFind::new(reps.len());
    let mut exceptional_pairs = Vec::new();
    let mut unresolved_pairs = Vec::new();
    for group in groups {
        for (pos, &i) in group.iter().enumerate() {
            for &j in &group[pos + 1..] {
                if uf.find(i) == uf.find(j) {
                    continue;
                }
                match unitarily_equivalent(&reps[i], &reps[j], node_budget) {
                    Ok(Some(_)) => {
                        uf.union(i, j);
                        exceptional_pairs.push((i, j));
                    }
                    Ok(None) => {}
                    Err(_) => unresolved_pairs.push((i, j)),
                }
            }
        }
    }

    // Number components densely in order of first appearance.
    let mut component_ids: HashMap<usize, usize> = HashMap::new();
    let mut component_of = Vec::with_capacity(reps.len());
    for i in 0..reps.len() {
        let root = uf.find(i);
        let next = component_ids.len();
        component_of.push(*component_ids.entry(root).or_insert(next));
    }
    MergeOutcome {
        component_of,
        exceptional_pairs,
        unresolved_pairs,
    }
}

/// One multiplicative class in a census report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    /// Canonical representative subset.
    pub rep: Vec<usize>,
    /// Number of subsets in the class.
    pub orbit_size: u64,
    /// Whether the class contains a subset equal to its own negation.
    pub real: bool,
    /// Whether the representative contains the residue 0.
    pub lifted: bool,
    /// Unitary component the class belongs to.
    pub component: usize,
}

/// Exact or bracketed unitary class count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassCount {
    Exact(u64),
    Range { min: u64, max: u64 },
}

mod rational_codec {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        num: String,
        den: String,
    }

    pub fn serialize<S: Serializer>(value: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        Repr {
            num: value.numer().to_string(),
            den: value.denom().to_string(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let repr = Repr::deserialize(d)?;
        let num: BigInt = repr
            .num
            .parse()
            .map_err(|_| D::Error::custom("field `a.num` is not a decimal integer"))?;
        let den: BigInt = repr
            .den
            .parse()
            .map_err(|_| D::Error::custom("field `a.den` is not a decimal integer"))?;
        if den == BigInt::from(0) {
            return Err(D::Error::custom("field `a.den` must be nonzero"));
        }
        Ok(BigRational::new(num, den))
    }
}

/// Complete census of the generating `d`-subsets of `Z_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub n: usize,
    pub d: usize,
    /// Number of multiplicative classes.
    #[serde(rename = "m")]
    pub mult_classes: u64,
    /// Number of unitary classes, exact or bracketed when searches timed out.
    #[serde(rename = "h")]
    pub unitary_classes: ClassCount,
    /// First-order estimate of the multiplicative class count.
    #[serde(rename = "a", with = "rational_codec")]
    pub estimate: BigRational,
    pub classes: Vec<ClassRecord>,
    /// Representative pairs proved unitarily equivalent without being
    /// multiplicatively equivalent.
    pub exceptional_pairs: Vec<(Vec<usize>, Vec<usize>)>,
    /// Representative pairs whose unitary search ran out of budget.
    pub unresolved_pairs: Vec<(Vec<usize>, Vec<usize>)>,
    pub version: String,
    /// Node budget each unitary search ran under.
    pub node_budget: u64,
    /// Wall-clock duration of the census in milliseconds.
    pub elapsed_ms: u64,
}

/// Knobs for [`run_census`].
#[derive(Clone, Debug)]
pub struct CensusOptions {
    pub node_budget: u64,
    /// Worker threads for enumeration and fingerprinting; `None` uses the
    /// current global pool. The result never depends on this.
    pub workers: Option<usize>,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            node_budget: DEFAULT_NODE_BUDGET,
            workers: None,
        }
    }
}

/// Census failures.
#[derive(Debug, Error)]
pub enum CensusError {
    #[error("enumeration found {found} classes but the Burnside count is {expected}")]
    CountMismatch { found: u64, expected: BigInt },
    #[error("failed to build the worker pool: {0}")]
    WorkerPool(String),
}

/// Runs the full census: enumerate, cross-check against the Burnside count,
/// merge unitarily, and assemble the report.
pub fn run_census(n: usize, d: usize, options: &CensusOptions) -> Result<CensusReport, CensusError> {
    match options.workers {
        None => run_census_inner(n, d, options.node_budget),
        Some(workers) => rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| CensusError::WorkerPool(e.to_string()))?
            .install(|| run_census_inner(n, d, options.node_budget)),
    }
}

fn run_census_inner(n: usize, d: usize, node_budget: u64) -> Result<CensusReport, CensusError> {
    let start = Instant::now();
    let reps = enumerate_mult_classes(n, d);
    let found = reps.len() as u64;
    let expected = mult_class_count(n, d);
    if BigInt::from(found) != expected {
        return Err(CensusError::CountMismatch { found, expected });
    }

    let outcome = merge_unitary(&reps, node_budget);
    let unit_list = units(n);
    let classes: Vec<ClassRecord> = reps
        .iter()
        .zip(&outcome.component_of)
        .map(|(rep, &component)| ClassRecord {
            rep: rep.elements().to_vec(),
            orbit_size: orbit_size(n, rep, &unit_list),
            real: class_contains_symmetric(n, rep, &unit_list),
            lifted: rep.is_lifted(),
            component,
        })
        .collect();

    let exceptional_pairs = outcome
        .exceptional_pairs
        .iter()
        .map(|&(i, j)| (reps[i].elements().to_vec(), reps[j].elements().to_vec()))
        .collect();
    let unresolved_pairs: Vec<_> = outcome
        .unresolved_pairs
        .iter()
        .map(|&(i, j)| (reps[i].elements().to_vec(), reps[j].elements().to_vec()))
        .collect();

    let unitary_classes = if outcome.unresolved_pairs.is_empty() {
        ClassCount::Exact(outcome.component_count() as u64)
    } else {
        ClassCount::Range {
            min: outcome.component_count_if_unresolved_merge() as u64,
            max: outcome.component_count() as u64,
        }
    };

    Ok(CensusReport {
        n,
        d,
        mult_classes: found,
        unitary_classes,
        estimate: asymptotic_estimate(n, d),
        classes,
        exceptional_pairs,
        unresolved_pairs,
        version: "1".to_string(),
        node_budget,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

fn orbit_size(n: usize, rep: &IndexSubset, unit_list: &[usize]) -> u64 {
    let mut images: Vec<Vec<usize>> = unit_list
        .iter()
        .map(|&a| mult_image_sorted(n, rep.elements(), a))
        .collect();
    images.sort_unstable();
    images.dedup();
    images.len() as u64
}

/// Whether any subset in the class equals its own negation.
fn class_contains_symmetric(n: usize, rep: &IndexSubset, unit_list: &[usize]) -> bool {
    unit_list.iter().any(|&a| {
        let image = mult_image_sorted(n, rep.elements(), a);
        image
            .iter()
            .all(|&x| image.binary_search(&((n - x) % n)).is_ok())
    })
}

/// Catalog serialization formats. JSON is complete and round-trips; CSV is a
/// one-way tabular view of the class list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatalogFormat {
    Json,
    Csv,
}

/// Catalog codec failures.
#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("catalog parse error: {0}")]
    Parse(String),
    #[error("unsupported catalog version {found:?}, expected \"1\"")]
    Version { found: String },
}

/// Serializes a report. JSON carries every field; CSV holds one line per
/// class with the columns `rep;orbit_size;real;lifted;component`.
pub fn export_catalog(report: &CensusReport, format: CatalogFormat) -> Vec<u8> {
    match format {
        CatalogFormat::Json => {
            let mut bytes =
                serde_json::to_vec_pretty(report).expect("census reports always serialize");
            bytes.push(b'\n');
            bytes
        }
        CatalogFormat::Csv => {
            let mut out = String::from("rep;orbit_size;real;lifted;component\n");
            for class in &report.classes {
                let rep = class
                    .rep
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(",");
                out.push_str(&format!(
                    "{rep};{};{};{};{}\n",
                    class.orbit_size, class.real, class.lifted, class.component
                ));
            }
            out.into_bytes()
        }
    }
}

/// Parses a JSON catalog produced by [`export_catalog`].
pub fn import_catalog(bytes: &[u8]) -> Result<CensusReport, CatalogError> {
    let report: CensusReport =
        serde_json::from_slice(bytes).map_err(|e| CatalogError::Parse(e.to_string()))?;
    if report.version != "1" {
        return Err(CatalogError::Version {
            found: report.version,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::mult_equivalent;

    fn subset(n: usize, elems: &[usize]) -> IndexSubset {
        IndexSubset::new(n, elems).expect("valid subset")
    }

    #[test]
    fn enumeration_at_eight_three() {
        let reps = enumerate_mult_classes(8, 3);
        assert_eq!(reps.len(), 17);
        assert!(reps.contains(&subset(8, &[1, 2, 5])));
        assert!(reps.contains(&subset(8, &[1, 5, 6])));
        // canonical: no listed rep maps below itself, and classes are disjoint
        for (i, r) in reps.iter().enumerate() {
            assert_eq!(
                crate::equivalence::mult_canonical(r).representative,
                *r,
                "rep {r:?}"
            );
            for s in &reps[i + 1..] {
                assert!(!mult_equivalent(r, s));
            }
        }
        // lexicographic output order
        let mut sorted = reps.clone();
        sorted.sort();
        assert_eq!(reps, sorted);
    }

    #[test]
    fn enumeration_counts_match_burnside() {
        for n in 1..=14 {
            for d in 1..=n.min(4) {
                let reps = enumerate_mult_classes(n, d);
                assert_eq!(
                    BigInt::from(reps.len()),
                    mult_class_count(n, d),
                    "n={n} d={d}"
                );
            }
        }
    }

    #[test]
    fn merge_finds_the_exceptional_pair_at_eight_three() {
        let reps = enumerate_mult_classes(8, 3);
        let outcome = merge_unitary(&reps, DEFAULT_NODE_BUDGET);
        assert_eq!(outcome.component_count(), 16);
        assert_eq!(outcome.exceptional_pairs.len(), 1);
        assert!(outcome.unresolved_pairs.is_empty());
        let (i, j) = outcome.exceptional_pairs[0];
        let mut pair = [reps[i].elements(), reps[j].elements()];
        pair.sort();
        assert_eq!(pair[0], &[1, 2, 5]);
        assert_eq!(pair[1], &[1, 5, 6]);
    }

    #[test]
    fn merge_partition_is_order_independent() {
        let reps = enumerate_mult_classes(8, 3);
        let forward = merge_unitary(&reps, DEFAULT_NODE_BUDGET);
        let mut reversed: Vec<IndexSubset> = reps.clone();
        reversed.reverse();
        let backward = merge_unitary(&reversed, DEFAULT_NODE_BUDGET);
        // compare partitions as sets of sets of representatives
        let partition = |order: &[IndexSubset], component_of: &[usize]| {
            let mut groups: HashMap<usize, Vec<Vec<usize>>> = HashMap::new();
            for (rep, &c) in order.iter().zip(component_of) {
                groups.entry(c).or_default().push(rep.elements().to_vec());
            }
            let mut sets: Vec<Vec<Vec<usize>>> = groups
                .into_values()
                .map(|mut g| {
                    g.sort();
                    g
                })
                .collect();
            sets.sort();
            sets
        };
        assert_eq!(
            partition(&reps, &forward.component_of),
            partition(&reversed, &backward.component_of)
        );
    }

    #[test]
    fn census_at_eight_three() {
        let report = run_census(8, 3, &CensusOptions::default()).unwrap();
        assert_eq!(report.mult_classes, 17);
        assert_eq!(report.unitary_classes, ClassCount::Exact(16));
        assert_eq!(report.exceptional_pairs.len(), 1);
        assert_eq!(
            report.exceptional_pairs[0],
            (vec![1, 2, 5], vec![1, 5, 6])
        );
        assert!(report.unresolved_pairs.is_empty());
        assert_eq!(report.classes.len(), 17);
        assert_eq!(report.version, "1");
        // class records carry consistent flags
        for class in &report.classes {
            let rep = subset(8, &class.rep);
            assert_eq!(class.lifted, rep.is_lifted());
            assert!(class.orbit_size >= 1 && 4 % class.orbit_size == 0);
        }
    }

    #[test]
    fn census_at_prime_moduli_has_no_merges() {
        for (n, want_m) in [(13usize, 25u64), (11, 17)] {
            let report = run_census(n, 3, &CensusOptions::default()).unwrap();
            assert_eq!(report.mult_classes, want_m, "n={n}");
            assert_eq!(report.unitary_classes, ClassCount::Exact(want_m), "n={n}");
            assert!(report.exceptional_pairs.is_empty());
            assert!(report.unresolved_pairs.is_empty());
        }
    }

    #[test]
    fn census_worker_count_does_not_change_output() {
        let base = run_census(8, 3, &CensusOptions::default()).unwrap();
        for workers in [1usize, 2, 4] {
            let mut other = run_census(
                8,
                3,
                &CensusOptions {
                    node_budget: DEFAULT_NODE_BUDGET,
                    workers: Some(workers),
                },
            )
            .unwrap();
            // wall-clock differs run to run; everything else must not
            other.elapsed_ms = base.elapsed_ms;
            assert_eq!(other, base, "workers={workers}");
        }
    }

    #[test]
    fn starved_budget_brackets_the_unitary_count() {
        let report = run_census(
            8,
            3,
            &CensusOptions {
                node_budget: 1,
                workers: None,
            },
        )
        .unwrap();
        assert_eq!(report.mult_classes, 17);
        assert_eq!(report.unresolved_pairs.len(), 1);
        assert_eq!(
            report.unitary_classes,
            ClassCount::Range { min: 16, max: 17 }
        );
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let report = run_census(8, 3, &CensusOptions::default()).unwrap();
        let bytes = export_catalog(&report, CatalogFormat::Json);
        let back = import_catalog(&bytes).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn csv_has_one_row_per_class() {
        let report = run_census(8, 2, &CensusOptions::default()).unwrap();
        assert_eq!(report.mult_classes, 7);
        let bytes = export_catalog(&report, CatalogFormat::Csv);
        let text = String::from_utf8(bytes).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "rep;orbit_size;real;lifted;component");
        assert_eq!(lines.len(), 8);
    }

    #[test]
    fn truncated_catalog_is_a_parse_error() {
        let report = run_census(8, 2, &CensusOptions::default()).unwrap();
        let bytes = export_catalog(&report, CatalogFormat::Json);
        let err = import_catalog(&bytes[..bytes.len() / 2]).unwrap_err();
        assert!(matches!(err, CatalogError::Parse(_)));
        let err = import_catalog(b"{}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("missing field"), "got: {msg}");
    }

    #[test]
    fn alien_version_is_rejected() {
        let report = run_census(8, 2, &CensusOptions::default()).unwrap();
        let mut value: serde_json::Value =
            serde_json::from_slice(&export_catalog(&report, CatalogFormat::Json)).unwrap();
        value["version"] = serde_json::Value::String("2".to_string());
        let err = import_catalog(value.to_string().as_bytes()).unwrap_err();
        assert!(matches!(err, CatalogError::Version { .. }));
    }
}
