//! The split recurrence for `H2(m, alpha)`, the explicit 2-recursive
//! construction, the series `lambda(alpha)` and the closed-form bounds.

mod bounds;
mod build;
mod series;
mod table;

pub use bounds::{
    alpha_r, bounds, bounds_with_eps, general_upper_coefficient, h_upper_alpha2, sandwich_check,
    sandwich_check_with, BoundReport, ForbSource, SandwichOptions, SandwichReport, DEFAULT_EPS,
};
pub use build::{build_from_table, build_g, build_g_with, verify_two_recursive, BuiltTcm, SplitTree};
pub use series::{g_partial, lambda, LambdaValue};
pub use table::{h2_table, power_of_two_index, predicted_split, H2Row, H2Table, PredictedSplit, SIX_THRESHOLD};
