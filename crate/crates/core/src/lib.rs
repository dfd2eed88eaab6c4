//! Exact-arithmetic toolkit for power residues over prime fields.
//!
//! Four layers, bottom up:
//!
//! * [`field`] — modular arithmetic over F_p, Euler-criterion residue
//!   classification, and brute-force least-non-residue / run-length oracles
//!   over arithmetic progressions.
//! * [`poly`] — dense univariate polynomials over F_p (arithmetic, gcd,
//!   formal derivatives, root multiplicities).
//! * [`stepanov`] — the auxiliary-polynomial construction: derive
//!   multiplicity/degree parameters, solve the homogeneous constraint system
//!   for nontrivial multipliers, and bound common roots of
//!   {(x + a_i)^t - theta_i}.
//! * [`svdet`] — the generalized Sylvester-Vandermonde matrix over the
//!   integers, its determinant identity with closed-form constant, and the
//!   binomial Hankel determinants behind that constant.
//!
//! [`scan`] drives everything over prime ranges and renders CSV/JSON reports.

pub mod binom;
pub mod field;
pub mod poly;
pub mod scan;
pub mod stepanov;
pub mod svdet;

pub use binom::binom_exact;
pub use field::{ApSpec, FieldError, LeastNonResidue, PrimeFieldCtx, ResidueClass, ResidueTable};
pub use poly::{DensePoly, RootMultiplicity};
pub use scan::{BoundRow, KMode, LemmaScanOptions, RunRow, ScanConfig, ScanError};
pub use stepanov::{
    AuxiliaryPolynomial, LemmaReport, StepanovError, StepanovParams, SystemSpec,
};
pub use svdet::{SvError, SvIdentityReport, SvMatrixSpec};
