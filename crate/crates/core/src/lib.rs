//! Generalized inverses of dense complex matrices and executable checks of
//! additive and block results for the core inverse.

pub mod block4;
pub mod error;
pub mod format;
pub mod gen;
pub mod inverse;
pub mod matrix;
pub mod pierce;
pub mod suite;
pub mod theorems;
pub mod verdict;

pub use error::{Error, Result};
pub use inverse::{
    core_inverse, core_inverse_via_projection, drazin_inverse, group_inverse, is_ep,
    is_projection, moore_penrose, spectral_idempotent, verify_axioms, InverseKind,
};
pub use matrix::{ComplexMatrix, RankFactorization, Tolerance, C64};
pub use block4::BlockMatrix2x2;
pub use gen::{Family, GenConfig, Instance};
pub use suite::{run_suite, SuiteConfig, SuiteId, SuiteReport};
pub use verdict::{Condition, Outcome, TheoremId, TheoremVerdict};
