//! Profiles built from monotone densities, and the reverse direction.

use super::density::{Direction, MonotoneDensity};
use super::derivative::StepSchedule;
use super::profile::{Interval, RadialProfile};
use super::transforms::Dimension;
use crate::family::Side;
use crate::{Error, Result};

/// `q(r) = q_r0 + int_r0^r p0(t) t^(1-m) dt` on `range`.
///
/// The integral is evaluated in closed form on every linear segment of a
/// sampled `p0`, so the profile carries no quadrature noise.
pub fn build_profile_from_density(
    p0: &MonotoneDensity,
    r0: f64,
    q_r0: f64,
    m: Dimension,
    range: Interval,
) -> Result<RadialProfile> {
    if p0.direction() != Direction::Increasing {
        return Err(Error::precondition(
            "profile construction needs an increasing density p0",
        ));
    }
    build_profile_from_density_unchecked(p0, r0, q_r0, m, range)
}

/// As [`build_profile_from_density`] but accepts any density, including
/// ones that were built without monotonicity validation.
pub fn build_profile_from_density_unchecked(
    p0: &MonotoneDensity,
    r0: f64,
    q_r0: f64,
    m: Dimension,
    range: Interval,
) -> Result<RadialProfile> {
    if range.lo < 0.0 {
        return Err(Error::domain("profile range must be radial"));
    }
    if !(r0 > 0.0 && r0.is_finite() && r0 >= range.lo && r0 <= range.hi) {
        return Err(Error::domain(format!(
            "r0 = {r0} is not a positive point of [{}, {}]",
            range.lo, range.hi
        )));
    }
    if !q_r0.is_finite() {
        return Err(Error::NonFinite {
            at: r0,
            value: q_r0,
        });
    }
    p0.validate_on(range.lo, range.hi)?;
    Ok(RadialProfile::from_density_integral(
        p0.clone(),
        m,
        r0,
        q_r0,
        1.0,
        range,
    ))
}

/// Samples `r^(m-1) q'_->(r)` at `radii` from difference quotients of the
/// profile's values.
pub fn derivative_density(q: &RadialProfile, m: Dimension, radii: &[f64]) -> Result<Vec<[f64; 2]>> {
    let sched = StepSchedule::default();
    radii
        .iter()
        .map(|&r| {
            let d = q.numeric_derivative(r, Side::Right, &sched)?;
            Ok([r, r.powi(m.get() as i32 - 1) * d])
        })
        .collect()
}

/// Attempts to write `q` as the integral of an increasing `p0`. Fails with
/// a precondition error when the sampled derivative density decreases by
/// more than `tol` relative to its scale between consecutive radii.
pub fn recover_density(
    q: &RadialProfile,
    m: Dimension,
    radii: &[f64],
    tol: f64,
) -> Result<MonotoneDensity> {
    let mut pts = derivative_density(q, m, radii)?;
    for i in 1..pts.len() {
        let (prev, cur) = (pts[i - 1][1], pts[i][1]);
        if cur < prev {
            if prev - cur > tol * prev.abs().max(cur.abs()).max(1.0) {
                return Err(Error::precondition(format!(
                    "derivative density decreases between r = {} and r = {} ({prev} then {cur})",
                    pts[i - 1][0],
                    pts[i][0]
                )));
            }
            pts[i][1] = prev;
        }
    }
    MonotoneDensity::from_samples(&pts, Direction::Increasing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::check_convex_of_h;

    fn dim(m: u32) -> Dimension {
        Dimension::new(m).unwrap()
    }

    #[test]
    fn zero_density_gives_constant() {
        let p0 = MonotoneDensity::constant(0.0, Direction::Increasing).unwrap();
        let q =
            build_profile_from_density(&p0, 1.0, 3.0, dim(2), Interval::radial(0.5, 4.0).unwrap())
                .unwrap();
        assert_eq!(q.value(2.5), 3.0);
    }

    #[test]
    fn unit_density_in_plane_is_log() {
        let p0 = MonotoneDensity::constant(1.0, Direction::Increasing).unwrap();
        let q =
            build_profile_from_density(&p0, 1.0, 0.0, dim(2), Interval::radial(0.0, 10.0).unwrap())
                .unwrap();
        for r in [0.2, 1.0, 3.7] {
            assert!((q.value(r) - f64::ln(r)).abs() < 1e-14);
        }
    }

    #[test]
    fn power_density_gives_linear_profile() {
        for m in [1u32, 2, 3, 6] {
            let p0 = MonotoneDensity::parametric(1.0, 1.0 - m as f64, 0.0, Direction::Increasing)
                .unwrap();
            let q = build_profile_from_density(
                &p0,
                1.0,
                0.0,
                dim(m),
                Interval::radial(0.0, 5.0).unwrap(),
            )
            .unwrap();
            for r in [0.5, 2.0, 4.0] {
                assert!((q.value(r) - (r - 1.0)).abs() < 1e-13, "m={m} r={r}");
            }
            assert!(check_convex_of_h(&q, dim(m), 1e-9).unwrap().passed);
        }
    }

    #[test]
    fn decreasing_density_is_rejected() {
        let d = MonotoneDensity::constant(1.0, Direction::Decreasing).unwrap();
        let r =
            build_profile_from_density(&d, 1.0, 0.0, dim(2), Interval::radial(0.5, 2.0).unwrap());
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    #[test]
    fn recovery_round_trip() {
        let p0 = MonotoneDensity::from_samples(
            &[[1.0, 0.5], [1.5, 1.0], [2.0, 3.0]],
            Direction::Increasing,
        )
        .unwrap();
        let q =
            build_profile_from_density(&p0, 1.2, 0.0, dim(3), Interval::radial(1.0, 2.0).unwrap())
                .unwrap();
        let radii: Vec<f64> = (1..20).map(|i| 1.0 + i as f64 / 20.0).collect();
        let back = recover_density(&q, dim(3), &radii, 1e-6).unwrap();
        for &r in &radii {
            assert!((back.value(r) - p0.value(r)).abs() < 1e-6);
        }
    }
}
