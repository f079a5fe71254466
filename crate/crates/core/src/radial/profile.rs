//! Functions of one real variable on an open interval.
//!
//! Radial functions `u(x) = q(|x|)` are stored through their spherical
//! projection `q`. The same type also carries counting functions, growth
//! envelopes `F` on `(-inf, 0)` and the convex `q` composed with Green
//! functions.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::density::MonotoneDensity;
use super::derivative::{left_derivative, right_derivative, StepSchedule};
use super::transforms::Dimension;
use crate::family::{CompiledFamily, Family, Side};
use crate::tail::{End, Tail};
use crate::{Error, Result};

/// Open interval `(lo, hi)`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "crate::extended")]
    pub lo: f64,
    #[serde(with = "crate::extended")]
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::domain(format!(
                "({lo}, {hi}) is not an open interval"
            )));
        }
        Ok(Interval { lo, hi })
    }

    /// `(lo, hi)` with `0 <= lo`, as required for radii.
    pub fn radial(lo: f64, hi: f64) -> Result<Self> {
        if lo < 0.0 {
            return Err(Error::domain(format!(
                "radial interval starts below 0: {lo}"
            )));
        }
        Interval::new(lo, hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    /// Bounded window used when an endpoint is `0` or infinite.
    pub fn eval_window(&self) -> (f64, f64) {
        let lo = if self.lo == f64::NEG_INFINITY {
            self.hi.min(-1.0) * 1e3
        } else if self.lo == 0.0 && self.hi > 0.0 {
            self.hi.min(1.0) * 1e-3
        } else {
            self.lo
        };
        let hi = if self.hi == f64::INFINITY {
            self.lo.max(1.0) * 1e3
        } else if self.hi == 0.0 && self.lo < 0.0 {
            self.lo.max(-1.0) * 1e-3
        } else {
            self.hi
        };
        (lo, hi)
    }
}

type Closure = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Repr {
    Family {
        desc: Family,
        f: CompiledFamily,
    },
    Closure {
        name: String,
        f: Closure,
    },
    /// `rho^(2-m) q(1/rho)`.
    Kelvin {
        m: Dimension,
        inner: Box<RadialProfile>,
    },
    /// `anchor_value + sign * int_anchor^r d(t) t^(1-m) dt`.
    Integral {
        density: MonotoneDensity,
        m: Dimension,
        anchor: f64,
        anchor_value: f64,
        sign: f64,
    },
}

/// A real function on an open interval, in closed form, sampled, or
/// derived from another profile.
#[derive(Clone)]
pub struct RadialProfile {
    domain: Interval,
    repr: Repr,
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile")
            .field("domain", &self.domain)
            .field("repr", &self.describe())
            .finish()
    }
}

/// Serializable summary of a profile's representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "repr", rename_all = "kebab-case")]
pub enum ProfileDescriptor {
    Family {
        family: Family,
    },
    Custom {
        name: String,
    },
    Kelvin {
        m: u32,
        inner: Box<ProfileDescriptor>,
    },
    DensityIntegral {
        density: MonotoneDensity,
        m: u32,
        #[serde(with = "crate::extended")]
        anchor: f64,
        anchor_value: f64,
        sign: f64,
    },
}

impl RadialProfile {
    pub fn from_family(desc: Family, domain: Interval) -> Result<Self> {
        let f = desc.compile()?;
        if let Family::Samples { points } = &desc {
            if points.iter().any(|p| p[0] < domain.lo || p[0] > domain.hi) {
                return Err(Error::domain(format!(
                    "sample radii must lie in [{}, {}]",
                    domain.lo, domain.hi
                )));
            }
        }
        Ok(RadialProfile {
            domain,
            repr: Repr::Family { desc, f },
        })
    }

    /// Sampled grid, linearly interpolated.
    pub fn from_samples(points: Vec<[f64; 2]>, domain: Interval) -> Result<Self> {
        RadialProfile::from_family(Family::Samples { points }, domain)
    }

    /// Arbitrary closure; derivatives are computed numerically.
    pub fn from_fn<F>(name: impl Into<String>, domain: Interval, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        RadialProfile {
            domain,
            repr: Repr::Closure {
                name: name.into(),
                f: Arc::new(f),
            },
        }
    }

    pub(crate) fn from_density_integral(
        density: MonotoneDensity,
        m: Dimension,
        anchor: f64,
        anchor_value: f64,
        sign: f64,
        domain: Interval,
    ) -> Self {
        RadialProfile {
            domain,
            repr: Repr::Integral {
                density,
                m,
                anchor,
                anchor_value,
                sign,
            },
        }
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// The same function on a sub-interval.
    pub fn restricted(&self, domain: Interval) -> Result<Self> {
        if domain.lo < self.domain.lo || domain.hi > self.domain.hi {
            return Err(Error::domain(format!(
                "({}, {}) is not inside ({}, {})",
                domain.lo, domain.hi, self.domain.lo, self.domain.hi
            )));
        }
        Ok(RadialProfile {
            domain,
            repr: self.repr.clone(),
        })
    }

    pub fn family(&self) -> Option<&Family> {
        match &self.repr {
            Repr::Family { desc, .. } => Some(desc),
            _ => None,
        }
    }

    /// True for closed parametric families (not samples, not closures).
    pub fn is_parametric(&self) -> bool {
        match &self.repr {
            Repr::Family { desc, .. } => desc.is_parametric(),
            Repr::Integral { density, .. } => density.is_parametric(),
            Repr::Kelvin { inner, .. } => inner.is_parametric(),
            Repr::Closure { .. } => false,
        }
    }

    pub fn is_sampled(&self) -> bool {
        matches!(&self.repr, Repr::Family { f, .. } if f.is_sampled())
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Family { f, .. } => f.is_zero(),
            Repr::Integral {
                density,
                anchor_value,
                ..
            } => density.is_zero() && *anchor_value == 0.0,
            Repr::Kelvin { inner, .. } => inner.is_zero(),
            Repr::Closure { .. } => false,
        }
    }

    pub fn derivative_is_zero(&self) -> bool {
        match &self.repr {
            Repr::Family { f, .. } => f.derivative_is_zero(),
            Repr::Integral { density, .. } => density.is_zero(),
            Repr::Kelvin { inner, m } => {
                inner.is_zero() || (m.get() == 2 && inner.derivative_is_zero())
            }
            Repr::Closure { .. } => false,
        }
    }

    /// Abscissae where the derivative may jump.
    pub fn breaks(&self) -> Vec<f64> {
        match &self.repr {
            Repr::Family { f, .. } => f.breaks().to_vec(),
            Repr::Integral { density, .. } => density.breaks().to_vec(),
            Repr::Kelvin { inner, .. } => {
                let mut b: Vec<f64> = inner.breaks().iter().map(|r| 1.0 / r).collect();
                b.reverse();
                b
            }
            Repr::Closure { .. } => Vec::new(),
        }
    }

    /// Value at `r`; the defining formula is used even at or outside the
    /// interval ends when it makes sense there.
    pub fn value(&self, r: f64) -> f64 {
        match &self.repr {
            Repr::Family { f, .. } => f.value(r),
            Repr::Closure { f, .. } => f(r),
            Repr::Kelvin { m, inner } => {
                let k = 2.0 - m.as_f64();
                let scale = if k == 0.0 { 1.0 } else { r.powf(k) };
                scale * inner.value(1.0 / r)
            }
            Repr::Integral {
                density,
                m,
                anchor,
                anchor_value,
                sign,
            } => match density.integrate_weighted(1.0 - m.as_f64(), *anchor, r) {
                Ok(v) => anchor_value + sign * v,
                Err(_) => f64::NAN,
            },
        }
    }

    /// One-sided derivative, exact where the representation allows it and
    /// Richardson-extrapolated otherwise.
    pub fn derivative(&self, r: f64, side: Side) -> Result<f64> {
        match &self.repr {
            Repr::Family { f, .. } => Ok(f.derivative(r, side)),
            Repr::Integral {
                density, m, sign, ..
            } => {
                let k = 1.0 - m.as_f64();
                Ok(sign * density.value(r) * if k == 0.0 { 1.0 } else { r.powf(k) })
            }
            Repr::Kelvin { m, inner } => {
                // d/drho [rho^k q(1/rho)] = k rho^(k-1) q(1/rho) - rho^(k-2) q'(1/rho),
                // with the side of q' flipped by the inversion.
                let k = 2.0 - m.as_f64();
                let flipped = match side {
                    Side::Left => Side::Right,
                    Side::Right => Side::Left,
                };
                let dq = inner.derivative(1.0 / r, flipped)?;
                Ok(k * r.powf(k - 1.0) * inner.value(1.0 / r) - r.powf(k - 2.0) * dq)
            }
            Repr::Closure { .. } => self.numeric_derivative(r, side, &StepSchedule::default()),
        }
    }

    pub fn right_derivative(&self, r: f64) -> Result<f64> {
        self.derivative(r, Side::Right)
    }

    /// `(q'_<-(r), q'_->(r))`.
    pub fn derivatives(&self, r: f64) -> Result<(f64, f64)> {
        Ok((
            self.derivative(r, Side::Left)?,
            self.derivative(r, Side::Right)?,
        ))
    }

    /// One-sided derivative from difference quotients only, ignoring any
    /// closed form.
    pub fn numeric_derivative(&self, r: f64, side: Side, schedule: &StepSchedule) -> Result<f64> {
        let f = |x: f64| self.value(x);
        match side {
            Side::Left => left_derivative(f, r, self.domain.lo, schedule),
            Side::Right => right_derivative(f, r, self.domain.hi, schedule),
        }
    }

    /// Second derivative where the representation is smooth.
    pub fn second_derivative(&self, r: f64) -> Option<f64> {
        match &self.repr {
            Repr::Family { f, .. } if !f.has_step_derivative() => Some(f.second_derivative(r)),
            _ => None,
        }
    }

    /// Kelvin transform `q*(rho) = rho^(2-m) q(1/rho)` on the inverted
    /// interval.
    pub fn kelvin(&self, m: Dimension) -> Result<Self> {
        let lo = if self.domain.hi == f64::INFINITY {
            0.0
        } else {
            1.0 / self.domain.hi
        };
        let hi = if self.domain.lo == 0.0 {
            f64::INFINITY
        } else {
            1.0 / self.domain.lo
        };
        if self.domain.lo < 0.0 {
            return Err(Error::domain("Kelvin transform needs a radial interval"));
        }
        Ok(RadialProfile {
            domain: Interval::new(lo, hi)?,
            repr: Repr::Kelvin {
                m,
                inner: Box::new(self.clone()),
            },
        })
    }

    /// Asymptotic class of the profile near `end`.
    pub fn tail(&self, end: End) -> Option<Tail> {
        match &self.repr {
            Repr::Family { f, .. } => f.tail(end),
            _ if self.is_zero() => Some(Tail::Zero),
            _ => None,
        }
    }

    /// Asymptotic class of the one-sided derivative near `end`.
    pub fn derivative_tail(&self, end: End) -> Option<Tail> {
        match &self.repr {
            Repr::Family { f, .. } => f.derivative_tail(end),
            Repr::Integral { density, m, .. } => {
                let w = match end {
                    End::PosInfinity => Tail::exact(m.as_f64() - 1.0, 0.0),
                    End::Origin => Tail::exact(1.0 - m.as_f64(), 0.0),
                    End::Finite(e) if e > 0.0 => Tail::ORDER_ONE,
                    _ => return None,
                };
                density.tail(end).map(|t| t.times(w))
            }
            _ if self.derivative_is_zero() => Some(Tail::Zero),
            _ => None,
        }
    }

    pub fn describe(&self) -> ProfileDescriptor {
        match &self.repr {
            Repr::Family { desc, .. } => ProfileDescriptor::Family {
                family: desc.clone(),
            },
            Repr::Closure { name, .. } => ProfileDescriptor::Custom { name: name.clone() },
            Repr::Kelvin { m, inner } => ProfileDescriptor::Kelvin {
                m: m.get(),
                inner: Box::new(inner.describe()),
            },
            Repr::Integral {
                density,
                m,
                anchor,
                anchor_value,
                sign,
            } => ProfileDescriptor::DensityIntegral {
                density: density.clone(),
                m: m.get(),
                anchor: *anchor,
                anchor_value: *anchor_value,
                sign: *sign,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_profile_derivatives() {
        let q = RadialProfile::from_family(
            Family::power(1.0, 2.0),
            Interval::radial(0.0, 3.0).unwrap(),
        )
        .unwrap();
        assert_eq!(q.value(2.0), 4.0);
        assert_eq!(q.derivatives(2.0).unwrap(), (4.0, 4.0));
    }

    #[test]
    fn closure_uses_numeric_derivatives() {
        let q =
            RadialProfile::from_fn("abs", Interval::new(0.0, 2.0).unwrap(), |r| (r - 1.0).abs());
        let (l, r) = q.derivatives(1.0).unwrap();
        assert!((l + 1.0).abs() < 1e-12 && (r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kelvin_of_log_in_plane() {
        let q = RadialProfile::from_family(
            Family::LogPower {
                coef: 1.0,
                exponent: 0.0,
                log_exponent: 1.0,
            },
            Interval::radial(0.5, 2.0).unwrap(),
        )
        .unwrap();
        let k = q.kelvin(Dimension::new(2).unwrap()).unwrap();
        assert_eq!(k.domain(), Interval { lo: 0.5, hi: 2.0 });
        assert!((k.value(1.5) + 1.5f64.ln()).abs() < 1e-15);
        let (l, r) = k.derivatives(1.5).unwrap();
        assert!((l + 1.0 / 1.5).abs() < 1e-14 && (r + 1.0 / 1.5).abs() < 1e-14);
    }

    #[test]
    fn kelvin_in_three_dimensions_matches_numeric() {
        let q = RadialProfile::from_family(
            Family::power(1.0, 2.0),
            Interval::radial(0.5, 2.0).unwrap(),
        )
        .unwrap();
        let k = q.kelvin(Dimension::new(3).unwrap()).unwrap();
        // rho^-1 * rho^-2
        assert!((k.value(0.8) - 0.8f64.powi(-3)).abs() < 1e-12);
        let exact = k.right_derivative(0.8).unwrap();
        let numeric = k
            .numeric_derivative(0.8, Side::Right, &StepSchedule::default())
            .unwrap();
        assert!((exact - numeric).abs() < 1e-6 * exact.abs());
    }

    #[test]
    fn eval_window_for_unbounded_ends() {
        assert_eq!(
            Interval::new(0.0, f64::INFINITY).unwrap().eval_window(),
            (1e-3, 1e3)
        );
        assert_eq!(
            Interval::new(f64::NEG_INFINITY, 0.0).unwrap().eval_window(),
            (-1e3, -1e-3)
        );
    }
}
