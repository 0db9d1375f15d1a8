//! Boundary conditions for `l₀(y) = (−i)^m y^(m)` on `[0, 1]`: dissipativity,
//! self-adjointness, Birkhoff regularity, normalization, and the contraction
//! parametrization, with an exact rational oracle for the underlying identities.
//!
//! Conditions are the rows of `C = [A | B]` acting on the boundary vector
//! `(y(0), …, y^(m−1)(0), y(1), …, y^(m−1)(1))ᵀ`.

pub mod conditions;
pub mod contraction;
pub mod error;
pub mod exec;
pub mod forms;
pub mod generate;
pub mod numerics;
pub mod polyoracle;
pub mod regularity;

pub use conditions::{
    normalize, normalize_with, orders_multiset, structural_report, truncate_leading, BoundaryConditionSystem,
    NormalizeOptions, NormalizedSystem, StructuralReport,
};
pub use contraction::{from_contraction, to_contraction, ContractionParametrization};
pub use error::{BcError, Result};
pub use exec::Execution;
pub use forms::{build_m, dissipativity_verdict, dual_classification, selfadjoint_verdict, DissipativityVerdict};
pub use num_complex::Complex64;
pub use numerics::{ComplexMatrix, Definiteness, TolerancePolicy};
pub use regularity::{regularity_verdict, RegularityReport};
