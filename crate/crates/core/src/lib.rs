//! Exact search and bound verification for forbidden multivalued
//! configurations and triangular choice multigraphs.

pub mod choice;
pub mod combin;
pub mod error;
pub mod io;
pub mod matrix;
pub mod recurrence;
pub mod scalar;
pub mod tcm;
pub mod verify;

use num::bigint::BigInt;
use num::rational::BigRational;

pub use choice::{Choice, TriplePattern};
pub use error::{Error, Result, SearchStatus};
pub use matrix::{contains_config, forb_exact, ConfigPattern, ForbOptions, ForbResult, RMatrix};
pub use recurrence::{BoundReport, H2Table};
pub use scalar::{FieldScalar, Scalar};
pub use tcm::Tcm;

/// Exact table at integral `alpha`.
pub type H2TableExact = H2Table<BigInt>;
/// Exact table at rational `alpha`.
pub type H2TableRational = H2Table<BigRational>;
pub type H2TableF64 = H2Table<f64>;
