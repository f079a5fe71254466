//! Harmonic coordinates, sphere inversion, the Kelvin transform and the
//! Riesz normalisation constant.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Real dimension `m >= 1` of the ambient space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Dimension(u32);

impl Dimension {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 {
            Err(Error::domain("dimension must be at least 1"))
        } else {
            Ok(Dimension(m))
        }
    }

    /// Real dimension `2n` of `C^n`.
    pub fn complex(n: u32) -> Result<Self> {
        if n == 0 {
            Err(Error::domain("complex dimension must be at least 1"))
        } else {
            Ok(Dimension(2 * n))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }

    /// `n` when `m = 2n`.
    pub fn complex_dim(self) -> Option<u32> {
        (self.0 % 2 == 0).then_some(self.0 / 2)
    }

    /// `max{1, m - 2}`, the factor separating `c_m` from the sphere area.
    pub fn flux_factor(self) -> f64 {
        (self.as_f64() - 2.0).max(1.0)
    }
}

impl TryFrom<u32> for Dimension {
    type Error = Error;
    fn try_from(m: u32) -> Result<Self> {
        Dimension::new(m)
    }
}

impl From<Dimension> for u32 {
    fn from(d: Dimension) -> u32 {
        d.0
    }
}

pub(crate) fn h_transform_unchecked(m: u32, t: f64) -> f64 {
    match m {
        1 => t,
        2 => t.ln(),
        _ => -t.powf(2.0 - m as f64),
    }
}

/// `h_m(t)`: `t` for `m = 1`, `log t` for `m = 2`, `-t^(2-m)` for `m >= 3`.
pub fn h_transform(m: Dimension, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("h_m needs t > 0, got {t}")));
    }
    Ok(h_transform_unchecked(m.get(), t))
}

pub fn h_inverse(m: Dimension, s: f64) -> Result<f64> {
    match m.get() {
        1 => {
            if s > 0.0 {
                Ok(s)
            } else {
                Err(Error::domain(format!("h_1 has range (0, inf), got {s}")))
            }
        }
        2 => Ok(s.exp()),
        k => {
            if s < 0.0 {
                Ok((-s).powf(-1.0 / (k as f64 - 2.0)))
            } else {
                Err(Error::domain(format!("h_{k} has range (-inf, 0), got {s}")))
            }
        }
    }
}

/// `h_m` at a radius that may be `0` or `+inf`, returning the limit.
pub(crate) fn h_extended(m: Dimension, t: f64) -> f64 {
    if t == 0.0 {
        match m.get() {
            1 => 0.0,
            _ => f64::NEG_INFINITY,
        }
    } else if t == f64::INFINITY {
        match m.get() {
            1 | 2 => f64::INFINITY,
            _ => 0.0,
        }
    } else {
        h_transform_unchecked(m.get(), t)
    }
}

/// `h_m'(t)` and `h_m''(t)`.
pub(crate) fn h_derivatives(m: Dimension, t: f64) -> (f64, f64) {
    match m.get() {
        1 => (1.0, 0.0),
        2 => (1.0 / t, -1.0 / (t * t)),
        k => {
            let k = k as f64;
            (
                (k - 2.0) * t.powf(1.0 - k),
                -(k - 2.0) * (k - 1.0) * t.powf(-k),
            )
        }
    }
}

/// A point of the one-point compactification of `R^m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Point {
    Finite(Vec<f64>),
    /// The point at infinity of `R^dim`.
    Infinity {
        dim: usize,
    },
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Inversion in the unit sphere: `0 <-> inf`, otherwise `x / |x|^2`.
pub fn invert_point(x: &Point) -> Point {
    match x {
        Point::Infinity { dim } => Point::Finite(vec![0.0; *dim]),
        Point::Finite(v) if v.iter().all(|&c| c == 0.0) => Point::Infinity { dim: v.len() },
        Point::Finite(v) => {
            let r2: f64 = v.iter().map(|c| c * c).sum();
            Point::Finite(v.iter().map(|c| c / r2).collect())
        }
    }
}

impl Point {
    pub fn origin(m: Dimension) -> Point {
        Point::Finite(vec![0.0; m.get() as usize])
    }

    pub fn is_origin(&self) -> bool {
        matches!(self, Point::Finite(v) if v.iter().all(|&c| c == 0.0))
    }
}

/// Kelvin transform of one value: `u*(x*) = |x|^(m-2) u(x)`.
pub fn kelvin_value(m: Dimension, u_at_x: f64, x: &[f64]) -> Result<(Vec<f64>, f64)> {
    let r = norm(x);
    if r == 0.0 || !r.is_finite() {
        return Err(Error::domain(
            "Kelvin transform needs a finite non-zero point",
        ));
    }
    let star = x.iter().map(|c| c / (r * r)).collect();
    Ok((star, r.powi(m.get() as i32 - 2) * u_at_x))
}

/// `Gamma(m/2) / pi^(m/2)`, computed without forming either factor alone.
fn gamma_half_over_pi_power(m: u32) -> f64 {
    let k = m / 2;
    if m % 2 == 0 {
        // (k-1)! / pi^k
        (1..k).fold(1.0, |acc, j| acc * j as f64) / PI.powi(k as i32)
    } else {
        // Gamma(k + 1/2) / pi^(k + 1/2) = prod_{j<k} (j + 1/2) / pi^k
        (0..k).fold(1.0, |acc, j| acc * (j as f64 + 0.5)) / PI.powi(k as i32)
    }
}

/// `c_m = Gamma(m/2) / (2 pi^(m/2) max{1, m-2})`, so that `c_m * Laplacian`
/// of `h_m(|x|)` is the unit point mass at the origin.
pub fn riesz_constant(m: Dimension) -> f64 {
    gamma_half_over_pi_power(m.get()) / (2.0 * m.flux_factor())
}

/// Surface area of the unit sphere in `R^m` (`2` for `m = 1`).
pub fn sphere_area(m: Dimension) -> f64 {
    2.0 / gamma_half_over_pi_power(m.get())
}
