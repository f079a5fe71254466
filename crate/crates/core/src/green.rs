//! Closed-form Green functions of model domains.
//!
//! For a ball `B(R)` in `R^m` with pole at the centre,
//! `g(x) = h_m(R) - h_m(|x|)`, so that `-g` carries Riesz mass exactly 1 at
//! the pole. For a disk with an arbitrary pole `z0`,
//! `g(z) = log |(R^2 - conj(z0) z) / (R (z - z0))|`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::family::Family;
use crate::radial::{h_extended, h_inverse, norm, Dimension, Interval, RadialProfile};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelDomain {
    /// Ball `B(radius)` in `R^m`, pole at the origin. `radius` may be
    /// infinite for radial constructions but not for Green functions.
    Ball {
        #[serde(with = "crate::extended", alias = "R")]
        radius: f64,
        m: Dimension,
    },
    /// Disk `B(radius)` in the plane with pole `pole`.
    Disk {
        #[serde(alias = "R")]
        radius: f64,
        pole: [f64; 2],
    },
}

impl ModelDomain {
    pub fn ball(radius: f64, m: Dimension) -> Result<Self> {
        ModelDomain::Ball { radius, m }.validated()
    }

    pub fn disk(radius: f64, pole: [f64; 2]) -> Result<Self> {
        ModelDomain::Disk { radius, pole }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        match self {
            ModelDomain::Ball { radius, .. } => {
                if !(radius > 0.0) {
                    return Err(Error::domain(format!(
                        "ball radius must be > 0, got {radius}"
                    )));
                }
            }
            ModelDomain::Disk { radius, pole } => {
                if !(radius > 0.0 && radius.is_finite()) {
                    return Err(Error::domain(format!(
                        "disk radius must be finite and > 0, got {radius}"
                    )));
                }
                if !(pole[0].is_finite() && pole[1].is_finite()) || pole[0].hypot(pole[1]) >= radius
                {
                    return Err(Error::domain(format!(
                        "pole {pole:?} is not inside the disk"
                    )));
                }
            }
        }
        Ok(self)
    }

    pub fn dimension(&self) -> Dimension {
        match *self {
            ModelDomain::Ball { m, .. } => m,
            ModelDomain::Disk { .. } => Dimension::new(2).expect("2 is a dimension"),
        }
    }

    pub fn radius(&self) -> f64 {
        match *self {
            ModelDomain::Ball { radius, .. } | ModelDomain::Disk { radius, .. } => radius,
        }
    }

    pub fn pole(&self) -> Vec<f64> {
        match *self {
            ModelDomain::Ball { m, .. } => vec![0.0; m.get() as usize],
            ModelDomain::Disk { pole, .. } => pole.to_vec(),
        }
    }

    /// True when the pole is the centre, so the Green function is radial.
    pub fn has_center_pole(&self) -> bool {
        match *self {
            ModelDomain::Ball { .. } => true,
            ModelDomain::Disk { pole, .. } => pole == [0.0, 0.0],
        }
    }

    /// Always true for model domains.
    pub fn is_regular(&self) -> bool {
        true
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dimension().get() as usize && norm(x) < self.radius()
    }

    fn require_finite(&self) -> Result<()> {
        if self.radius().is_infinite() {
            Err(Error::domain(
                "the whole space has no Green function; use a finite radius",
            ))
        } else {
            Ok(())
        }
    }

    /// `sup g`: `+inf` except on the line, where `g(0) = R`.
    pub fn green_sup(&self) -> f64 {
        match *self {
            ModelDomain::Ball { radius, m } if m.get() == 1 => radius,
            _ => f64::INFINITY,
        }
    }

    /// Green function for a centre pole as a function of the radius.
    fn radial_green(radius: f64, m: Dimension, r: f64) -> f64 {
        if r == 0.0 {
            return match m.get() {
                1 => radius,
                _ => f64::INFINITY,
            };
        }
        (h_extended(m, radius) - h_extended(m, r)).max(0.0)
    }

    fn mobius(radius: f64, pole: [f64; 2], z: Complex64) -> Complex64 {
        let z0 = Complex64::new(pole[0], pole[1]);
        radius * (z - z0) / (radius * radius - z0.conj() * z)
    }

    /// `g_D(x, pole)`; `+inf` at the pole.
    pub fn green_value(&self, x: &[f64]) -> Result<f64> {
        self.require_finite()?;
        if x.len() != self.dimension().get() as usize {
            return Err(Error::domain(format!(
                "point has {} coordinates, domain lives in R^{}",
                x.len(),
                self.dimension().get()
            )));
        }
        let r = norm(x);
        if !(r < self.radius()) {
            if r == self.radius() {
                return Ok(0.0);
            }
            return Err(Error::domain(format!(
                "|x| = {r} is outside B({})",
                self.radius()
            )));
        }
        Ok(match *self {
            ModelDomain::Ball { radius, m } => ModelDomain::radial_green(radius, m, r),
            ModelDomain::Disk { radius, pole } => {
                let z = Complex64::new(x[0], x[1]);
                let w = ModelDomain::mobius(radius, pole, z).norm();
                if w == 0.0 {
                    f64::INFINITY
                } else {
                    (-w.ln()).max(0.0)
                }
            }
        })
    }

    /// Radius of the level set `D_t = B(r(t))` for a centre pole.
    pub fn level_radius(&self, t: f64) -> Result<f64> {
        self.require_finite()?;
        if !self.has_center_pole() {
            return Err(Error::Unsupported(
                "level sets of an off-centre pole are not balls; use LevelSet::contains".into(),
            ));
        }
        if !(t > 0.0 && t < self.green_sup()) {
            return Err(Error::domain(format!(
                "level t = {t} must lie in (0, {})",
                self.green_sup()
            )));
        }
        let m = self.dimension();
        let s = h_extended(m, self.radius()) - t;
        if m.get() == 1 {
            return Ok(s);
        }
        h_inverse(m, s)
    }

    /// The point of `{g = t}` in direction `theta` (first two coordinates).
    pub fn level_point(&self, t: f64, theta: f64) -> Result<Vec<f64>> {
        match *self {
            ModelDomain::Disk { radius, pole } if !self.has_center_pole() => {
                if !(t > 0.0) {
                    return Err(Error::domain(format!("level t = {t} must be > 0")));
                }
                let w = Complex64::from_polar((-t).exp(), theta);
                let z0 = Complex64::new(pole[0], pole[1]);
                let z = (radius * radius * w + radius * z0) / (radius + z0.conj() * w);
                Ok(vec![z.re, z.im])
            }
            _ => {
                let r = self.level_radius(t)?;
                Ok(crate::laplacian::polar_point(
                    r,
                    theta,
                    self.dimension().get() as usize,
                ))
            }
        }
    }

    /// `-g` as a radial profile on `(0, R)`, for a centre pole.
    pub fn neg_green_profile(&self) -> Result<RadialProfile> {
        self.require_finite()?;
        if !self.has_center_pole() {
            return Err(Error::Unsupported(
                "-g is radial only for a centre pole".into(),
            ));
        }
        let m = self.dimension();
        RadialProfile::from_family(
            Family::Harmonic {
                m: m.get(),
                scale: 1.0,
                offset: -h_extended(m, self.radius()),
            },
            Interval::radial(0.0, self.radius())?,
        )
    }

    pub fn level_set(&self, t: f64) -> Result<LevelSet> {
        self.require_finite()?;
        if !(t > 0.0 && t < self.green_sup()) {
            return Err(Error::domain(format!(
                "level t = {t} is not a proper level"
            )));
        }
        let radius = if self.has_center_pole() {
            Some(self.level_radius(t)?)
        } else {
            None
        };
        Ok(LevelSet {
            domain: *self,
            t,
            radius,
        })
    }
}

/// `D_t = {g > t}`: a concentric ball for a centre pole, represented
/// implicitly otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelSet {
    pub domain: ModelDomain,
    pub t: f64,
    pub radius: Option<f64>,
}

impl LevelSet {
    pub fn contains(&self, x: &[f64]) -> bool {
        self.domain.contains(x) && self.domain.green_value(x).is_ok_and(|g| g > self.t)
    }
}

/// Harmonic measure of the arc `(theta1, theta2)` of `dB(R)` seen from a
/// centre pole in the plane.
pub fn harmonic_measure_center(domain: &ModelDomain, theta1: f64, theta2: f64) -> Result<f64> {
    if domain.dimension().get() != 2 || !domain.has_center_pole() {
        return Err(Error::precondition(
            "harmonic measure is implemented for a planar disk with centre pole",
        ));
    }
    domain.require_finite()?;
    Ok((theta2 - theta1) / (2.0 * std::f64::consts::PI))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    fn dim(m: u32) -> Dimension {
        Dimension::new(m).unwrap()
    }

    #[test]
    fn disk_center_pole() {
        let d = ModelDomain::disk(1.0, [0.0, 0.0]).unwrap();
        assert!((d.green_value(&[0.3, 0.4]).unwrap() + 0.5f64.ln()).abs() < 1e-15);
        assert_eq!(d.green_value(&[1.0, 0.0]).unwrap(), 0.0);
        assert_eq!(d.green_value(&[0.0, 0.0]).unwrap(), f64::INFINITY);
        assert!(d.green_value(&[1.5, 0.0]).is_err());
    }

    #[test]
    fn ball_in_three_dimensions() {
        let d = ModelDomain::ball(1.0, dim(3)).unwrap();
        assert!((d.green_value(&[0.5, 0.0, 0.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((d.level_radius(1.0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn off_center_pole() {
        let d = ModelDomain::disk(1.0, [0.5, 0.0]).unwrap();
        let g = d.green_value(&[-0.5, 0.0]).unwrap();
        assert!((g - 1.25f64.ln()).abs() < 1e-15);
        let p = d.level_point(0.3, 1.0).unwrap();
        assert!((d.green_value(&p).unwrap() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn level_radii() {
        let d = ModelDomain::ball(1.0, dim(2)).unwrap();
        assert!((d.level_radius(1.0).unwrap() - 1.0 / E).abs() < 1e-15);
        assert!((d.level_radius(1e-12).unwrap() - 1.0).abs() < 1e-11);
        assert!(d.level_radius(0.0).is_err());
        let line = ModelDomain::ball(2.0, dim(1)).unwrap();
        assert!((line.level_radius(0.5).unwrap() - 1.5).abs() < 1e-15);
        assert!(line.level_radius(2.0).is_err());
    }

    #[test]
    fn harmonic_measure() {
        let d = ModelDomain::disk(1.0, [0.0, 0.0]).unwrap();
        assert_eq!(harmonic_measure_center(&d, 0.0, 2.0 * PI).unwrap(), 1.0);
        assert_eq!(harmonic_measure_center(&d, 0.0, PI).unwrap(), 0.5);
        assert_eq!(harmonic_measure_center(&d, 0.0, PI / 2.0).unwrap(), 0.25);
    }

    #[test]
    fn whole_space_has_no_green_function() {
        let d = ModelDomain::ball(f64::INFINITY, dim(2)).unwrap();
        assert!(d.green_value(&[1.0, 0.0]).is_err());
    }

    #[test]
    fn descriptor_round_trip() {
        let d: ModelDomain =
            serde_json::from_str(r#"{"kind":"ball","radius":"inf","m":2}"#).unwrap();
        assert_eq!(d.radius(), f64::INFINITY);
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(serde_json::from_str::<ModelDomain>(&s).unwrap(), d);
    }
}
