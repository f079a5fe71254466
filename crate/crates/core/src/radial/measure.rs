//! Riesz measures of radial subharmonic functions.

use serde::{Deserialize, Serialize};

use super::profile::RadialProfile;
use super::transforms::Dimension;
use crate::{Error, Result};

/// Default slack, relative to the flux scale, below which a negative
/// annulus mass is treated as rounding.
pub const MASS_TOL: f64 = 1e-9;

/// `r^(m-1) q'_->(r) / max(1, m-2)`: the Riesz mass of the closed ball
/// `B(r)` for a radial subharmonic function on a punctured neighbourhood,
/// up to the mass carried by the origin's complement of the profile's
/// interval.
pub fn flux(q: &RadialProfile, m: Dimension, r: f64) -> Result<f64> {
    let k = m.get() as i32 - 1;
    Ok(r.powi(k) * q.right_derivative(r)? / m.flux_factor())
}

/// Riesz mass `c_m Delta u` of the annulus `a < |x| <= b` for
/// `u(x) = q(|x|)`.
pub fn radial_riesz_measure(q: &RadialProfile, m: Dimension, a: f64, b: f64) -> Result<f64> {
    radial_riesz_measure_tol(q, m, a, b, MASS_TOL)
}

pub fn radial_riesz_measure_tol(
    q: &RadialProfile,
    m: Dimension,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64> {
    let d = q.domain();
    if !(a < b && a > d.lo && b < d.hi) {
        return Err(Error::domain(format!(
            "[{a}, {b}] is not inside ({}, {})",
            d.lo, d.hi
        )));
    }
    let fb = flux(q, m, b)?;
    let fa = flux(q, m, a)?;
    let mass = fb - fa;
    if mass < -tol * fa.abs().max(fb.abs()).max(1.0) {
        return Err(Error::NegativeMass { a, b, mass });
    }
    Ok(mass)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnulusMass {
    pub a: f64,
    pub b: f64,
    pub mass: f64,
}

/// Masses of consecutive annuli plus the limits at the inner and outer ends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialMeasure {
    pub annuli: Vec<AnnulusMass>,
    /// Mass of the closed ball up to the first radius: the pole mass when
    /// the first radius shrinks to 0.
    pub inner: f64,
}

impl RadialMeasure {
    /// Measures the annuli between consecutive `radii`.
    pub fn from_profile(q: &RadialProfile, m: Dimension, radii: &[f64]) -> Result<Self> {
        if radii.len() < 2 {
            return Err(Error::InsufficientData("need at least two radii".into()));
        }
        let annuli = radii
            .windows(2)
            .map(|w| {
                Ok(AnnulusMass {
                    a: w[0],
                    b: w[1],
                    mass: radial_riesz_measure(q, m, w[0], w[1])?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RadialMeasure {
            annuli,
            inner: flux(q, m, radii[0])?,
        })
    }

    pub fn total(&self) -> f64 {
        self.inner + self.annuli.iter().map(|a| a.mass).sum::<f64>()
    }
}

/// Pole mass of `q` at the origin: the flux through shrinking spheres,
/// required to agree over `r, r/10, r/100` within `tol`.
pub fn pole_mass(q: &RadialProfile, m: Dimension, tol: f64) -> Result<f64> {
    let d = q.domain();
    if d.lo != 0.0 {
        return Err(Error::domain(
            "pole mass needs a profile defined down to r = 0",
        ));
    }
    let r = d.hi.min(1.0) * 1e-3;
    let vals = [flux(q, m, r)?, flux(q, m, r * 0.1)?, flux(q, m, r * 0.01)?];
    let spread = (vals[0] - vals[2]).abs().max((vals[1] - vals[2]).abs());
    if spread > tol * vals[2].abs().max(1.0) {
        return Err(Error::NumericalInstability(format!(
            "flux through small spheres does not settle: {vals:?}"
        )));
    }
    Ok(vals[2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{harmonic_family, Family};
    use crate::radial::Interval;

    fn dim(m: u32) -> Dimension {
        Dimension::new(m).unwrap()
    }

    #[test]
    fn square_in_plane_has_mass_six() {
        let q = RadialProfile::from_family(
            Family::power(1.0, 2.0),
            Interval::radial(0.0, 5.0).unwrap(),
        )
        .unwrap();
        let mass = radial_riesz_measure(&q, dim(2), 1.0, 2.0).unwrap();
        assert!((mass - 6.0).abs() < 1e-12);
    }

    #[test]
    fn harmonic_profiles_carry_no_mass() {
        for m in [1, 2, 3, 5] {
            let q = RadialProfile::from_family(
                harmonic_family(m),
                Interval::radial(0.0, f64::INFINITY).unwrap(),
            )
            .unwrap();
            assert!(radial_riesz_measure(&q, dim(m), 0.3, 7.0).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn fundamental_solution_has_unit_pole() {
        for m in [1, 2, 3, 5] {
            let q =
                RadialProfile::from_family(harmonic_family(m), Interval::radial(0.0, 1.0).unwrap())
                    .unwrap();
            assert!((pole_mass(&q, dim(m), 1e-9).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn concave_profile_has_negative_mass() {
        let q = RadialProfile::from_family(
            Family::power(-1.0, 2.0),
            Interval::radial(0.0, 5.0).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            radial_riesz_measure(&q, dim(2), 1.0, 2.0),
            Err(Error::NegativeMass { .. })
        ));
    }
}
