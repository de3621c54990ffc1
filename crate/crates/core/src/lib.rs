//! Exact and multiprecision tools for Borcherds forms on the Siegel threefold:
//! q-series, Cohen numbers, Dirichlet L-values, Eisenstein coefficients and the
//! log-norm integral `kappa(Psi(f))`.

pub mod acceptance;
pub mod arith;
pub mod borcherds;
pub mod eisen;
pub mod error;
pub mod jacobi;
pub mod lfun;
pub mod qseries;
pub mod quad;
pub mod ratio;
pub mod symbolic;

pub use borcherds::{kappa_psi, Divisor, KappaReport, PrincipalPart};
pub use eisen::{KappaTerm, SignatureContext};
pub use error::{Error, Result};
pub use jacobi::VectorValuedForm;
pub use lfun::PrecisionConfig;
pub use qseries::QSeries;
pub use symbolic::{Evaluator, LinearForm, Symbol};
