//! Exact-arithmetic linear programming via a primal-simplex based Tardos
//! scheme.
//!
//! The solver repeatedly scales and rounds an auxiliary problem, solves it
//! with the two-phase simplex method (Dantzig's rule), and fixes the variables
//! that are provably positive at optimality. For totally unimodular
//! constraint matrices every auxiliary right-hand side stays polynomially
//! bounded. An exhaustive basis-enumeration [`oracle`] is included for
//! verification on small instances.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod error;
pub mod generate;
pub mod linalg;
pub mod model;
pub mod numeric;
pub mod oracle;
pub mod simplex;
pub mod subsets;
pub mod tardos;
pub mod tu;

pub use error::{LinalgError, ModelError, NumericError, OracleError, SimplexError, TardosError};
pub use linalg::{RMatrix, RVector};
pub use model::LPInstance;
pub use numeric::Rational;
pub use simplex::{Basis, SimplexOutcome, SimplexStats, SimplexStatus};
pub use tardos::{solve, SolveOptions, SolveOutcome, SolveStatus};
