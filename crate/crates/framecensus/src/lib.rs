//! Exact enumeration and classification of cyclic harmonic frames.
//!
//! A subset J of Z_n with d elements selects d rows of the n-th Fourier
//! matrix; the n columns of the selected block form a tight frame for C^d.
//! Everything here works in exact arithmetic over the cyclotomic integers:
//! frame angles are sums of roots of unity represented by integer
//! coefficient vectors, compared modulo the n-th cyclotomic polynomial.
//!
//! The crate decides when two such frames coincide up to a scaled unitary —
//! via the coarse multiplicative and affine symmetries of the index set, or
//! via a full search over angle-preserving permutations — counts the
//! resulting classes by Burnside-style formulas, and runs whole censuses
//! that catalog every class for a given (n, d) together with the rare
//! pairs that are unitarily but not multiplicatively equivalent.

pub mod census;
pub mod cli;
pub mod counting;
pub mod cyclotomic;
pub mod equivalence;
pub mod frames;
pub mod numtheory;
pub mod verify;

pub use census::{run_census, CensusOptions, CensusReport, ClassCount, ClassRecord};
pub use cyclotomic::{cyclotomic_polynomial, IntPolynomial, RootSum};
pub use equivalence::{
    affine_equivalent, is_exceptional_pair, mult_equivalent, unitarily_equivalent,
    BudgetExceeded, UnitaryWitness, DEFAULT_NODE_BUDGET,
};
pub use frames::{angle_vector, build_frame, AngleVector, FrameMatrix, IndexSubset, SubsetError};
