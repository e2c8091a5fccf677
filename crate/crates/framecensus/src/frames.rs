//! Cyclic harmonic frames. A subset `J` of `Z_n` with `d` elements selects
//! `d` rows of the `n x n` Fourier matrix; the columns of that `d x n`
//! submatrix are the frame vectors `v_g = (w^(j*g))_{j in J}`. Everything
//! here is exact: entries are exponents, inner products are [`RootSum`]s.

use thiserror::Error;

use crate::cyclotomic::RootSum;
use crate::numtheory;

/// Errors from [`IndexSubset`] construction.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SubsetError {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("subset must contain at least one residue")]
    Empty,
    #[error("duplicate residue {residue} modulo {modulus}")]
    Duplicate { residue: usize, modulus: usize },
}

/// A nonempty set of distinct residues modulo `n`, stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSubset {
    modulus: usize,
    elements: Vec<usize>,
}

impl IndexSubset {
    /// Builds a subset from arbitrary residue representatives. Inputs are
    /// reduced modulo `modulus` and sorted; duplicates (after reduction) are
    /// rejected rather than collapsed.
    pub fn new(modulus: usize, residues: &[usize]) -> Result<Self, SubsetError> {
        if modulus == 0 {
            return Err(SubsetError::ZeroModulus);
        }
        if residues.is_empty() {
            return Err(SubsetError::Empty);
        }
        let mut elements: Vec<usize> = residues.iter().map(|&r| r % modulus).collect();
        elements.sort_unstable();
        for pair in elements.windows(2) {
            if pair[0] == pair[1] {
                return Err(SubsetError::Duplicate {
                    residue: pair[0],
                    modulus,
                });
            }
        }
        Ok(IndexSubset { modulus, elements })
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    /// The residues in increasing order.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    /// Number of selected characters; the dimension of the frame's space.
    pub fn dimension(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, residue: usize) -> bool {
        self.elements.binary_search(&(residue % self.modulus)).is_ok()
    }

    /// True when the subset generates `Z_n` as a group.
    pub fn generates(&self) -> bool {
        numtheory::subset_generates(self.modulus, &self.elements)
    }

    /// True when the subset equals its negation `-J`, which makes every
    /// inner product of the frame real.
    pub fn is_real(&self) -> bool {
        let n = self.modulus;
        self.elements.iter().all(|&j| self.contains((n - j) % n))
    }

    /// True when the subset contains 0, i.e. the frame contains the constant
    /// character and is a lifted copy of a lower-dimensional one.
    pub fn is_lifted(&self) -> bool {
        self.contains(0)
    }
}

/// The `d x n` table of Fourier exponents for a subset: row `j`, column `g`
/// holds `(J[j] * g) mod n`, the exponent of the matrix entry `w^(J[j]*g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameMatrix {
    subset: IndexSubset,
    entries: Vec<Vec<usize>>,
}

impl FrameMatrix {
    pub fn subset(&self) -> &IndexSubset {
        &self.subset
    }

    pub fn modulus(&self) -> usize {
        self.subset.modulus()
    }

    pub fn rows(&self) -> usize {
        self.subset.dimension()
    }

    pub fn cols(&self) -> usize {
        self.subset.modulus()
    }

    /// Exponent at row `j`, column `g`.
    pub fn exponent(&self, j: usize, g: usize) -> usize {
        self.entries[j][g]
    }

    /// The exponents of the frame vector `v_g`, one per selected character.
    pub fn column(&self, g: usize) -> Vec<usize> {
        self.entries.iter().map(|row| row[g]).collect()
    }
}

/// Builds the exponent table of the frame selected by `subset`.
pub fn build_frame(subset: &IndexSubset) -> FrameMatrix {
    let n = subset.modulus();
    let entries = subset
        .elements()
        .iter()
        .map(|&j| (0..n).map(|g| (j * g) % n).collect())
        .collect();
    FrameMatrix {
        subset: subset.clone(),
        entries,
    }
}

/// The angle vector `c_J(k) = sum over j in J of w^(k*j)` for `k` in `Z_n`.
///
/// The Gram matrix of the frame is circulant with symbol `c_J`:
/// `<v_a, v_b> = c_J(a - b)`.
#[derive(Clone, Debug)]
pub struct AngleVector {
    modulus: usize,
    values: Vec<RootSum>,
}

impl AngleVector {
    pub fn modulus(&self) -> usize {
        self.modulus
    }

    /// `c_J(k)`, with `k` reduced modulo `n`.
    pub fn value(&self, k: usize) -> &RootSum {
        &self.values[k % self.modulus]
    }

    pub fn values(&self) -> &[RootSum] {
        &self.values
    }

    /// The inner product `<v_a, v_b> = c_J(a - b)`.
    pub fn inner_product(&self, a: usize, b: usize) -> &RootSum {
        let n = self.modulus;
        self.value((a % n + n - b % n) % n)
    }
}

/// Computes the angle vector of the frame selected by `subset`.
pub fn angle_vector(subset: &IndexSubset) -> AngleVector {
    let n = subset.modulus();
    let values = (0..n)
        .map(|k| {
            RootSum::from_exponents(
                n,
                subset.elements().iter().map(|&j| ((k * j) % n) as i64),
            )
        })
        .collect();
    AngleVector {
        modulus: n,
        values,
    }
}

/// Exactly verifies that the frame's synthesis matrix `V` satisfies
/// `V V* = n I`: selected character rows are pairwise orthogonal with
/// squared norm `n`. Holds for every valid subset; this recomputes it from
/// scratch rather than assuming it.
pub fn verify_tight(subset: &IndexSubset) -> bool {
    let n = subset.modulus();
    let elems = subset.elements();
    for (r1, &j1) in elems.iter().enumerate() {
        for &j2 in &elems[r1..] {
            let diff = (j1 + n - j2) % n;
            let sum = RootSum::from_exponents(n, (0..n).map(|g| ((diff * g) % n) as i64));
            if j1 == j2 {
                if !sum.eq_value(&RootSum::integer(n, n as i64)) {
                    return false;
                }
            } else if !sum.is_zero() {
                return false;
            }
        }
    }
    true
}
