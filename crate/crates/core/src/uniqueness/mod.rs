//! Uniqueness criteria: when does a zero set force a holomorphic function
//! with a given growth envelope to vanish?
//!
//! Both criteria compare a *mass integral*, built from the envelope, with a
//! *zero integral*, built from the counting function of the zero set. The
//! function is forced to vanish when the first converges and the second
//! diverges. Each integral is classified from exact tail exponents when all
//! factors come from closed families, and from truncated integrals
//! otherwise; the report always says which.

mod classify;
mod criterion;
mod ibp;
mod zeros;

pub use classify::{
    Classification, ClassifyOptions, DivergenceMode, DivergenceVerdict, TracePoint,
};
pub use criterion::{
    combine_verdict, green_mass_integral, green_verdict, green_zero_integral, radial_mass_integral,
    radial_verdict, radial_zero_integral, CriterionMode, CriterionOptions, CriterionReport,
    Verdict,
};
pub use ibp::{
    ibp_check_green, ibp_check_radial, relative_residual, GreenIbpInput, IbpCheck, IbpReport,
    IbpTolerances, PathValue,
};
pub use zeros::{
    counting_function_points, green_counting, Counting, CountingSamples, Interpretation, Source,
    StepCounting, ZeroPoint, ZeroSet,
};
