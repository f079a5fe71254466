//! Radial subharmonic functions.

mod build;
mod convexity;
mod density;
mod derivative;
mod measure;
mod profile;
mod transforms;

pub use build::{
    build_profile_from_density, build_profile_from_density_unchecked, derivative_density,
    recover_density,
};
pub use convexity::{
    cell_grid, check_convex_of_h, check_convex_of_h_with, check_convex_points, ConvexityReport,
    Violation, DEFAULT_CONVEXITY_POINTS, DEFAULT_CONVEXITY_TOL,
};
pub use density::{project_monotone, DensityDescriptor, Direction, MonotoneDensity};
pub use derivative::{left_derivative, onesided_derivatives, right_derivative, StepSchedule};
pub use measure::{
    flux, pole_mass, radial_riesz_measure, radial_riesz_measure_tol, AnnulusMass, RadialMeasure,
    MASS_TOL,
};
pub use profile::{Interval, ProfileDescriptor, RadialProfile};
pub use transforms::{
    h_inverse, h_transform, invert_point, kelvin_value, norm, riesz_constant, sphere_area,
    Dimension, Point,
};

pub(crate) use transforms::{h_derivatives, h_extended, h_transform_unchecked};
