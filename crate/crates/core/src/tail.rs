//! Endpoint asymptotics of integrands.
//!
//! Every tail is written in a local variable `u -> 0+`: `u = x` at the
//! origin, `u = |x - e|` at a finite endpoint `e`, and `u = 1/x` at infinity.
//! An integrand behaving like `u^a |log u|^b` is integrable at the endpoint
//! iff `a > -1`, or `a == -1` and `b < -1`.

use serde::{Deserialize, Serialize};

/// Where an integral is being probed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum End {
    /// `x -> 0` (from whichever side the interval lies on).
    Origin,
    /// `x -> e` for a finite non-zero `e`.
    Finite(f64),
    /// `x -> +inf`.
    PosInfinity,
    /// `x -> -inf`.
    NegInfinity,
}

impl End {
    pub fn of(x: f64) -> End {
        if x == f64::INFINITY {
            End::PosInfinity
        } else if x == f64::NEG_INFINITY {
            End::NegInfinity
        } else if x == 0.0 {
            End::Origin
        } else {
            End::Finite(x)
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, End::PosInfinity | End::NegInfinity)
    }

    /// The same endpoint after `x -> -x`.
    pub fn reflect(self) -> End {
        match self {
            End::Origin => End::Origin,
            End::Finite(e) => End::Finite(-e),
            End::PosInfinity => End::NegInfinity,
            End::NegInfinity => End::PosInfinity,
        }
    }
}

/// Asymptotic class of a factor near an endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Tail {
    /// Identically zero in a neighbourhood of the endpoint.
    Zero,
    /// Two-sided comparable to `u^exponent |log u|^log_exponent`.
    Exact { exponent: f64, log_exponent: f64 },
    /// Bounded above by a multiple of `u^exponent |log u|^log_exponent`.
    Upper { exponent: f64, log_exponent: f64 },
}

impl Tail {
    pub const BOUNDED: Tail = Tail::Upper {
        exponent: 0.0,
        log_exponent: 0.0,
    };
    pub const ORDER_ONE: Tail = Tail::Exact {
        exponent: 0.0,
        log_exponent: 0.0,
    };

    pub fn exact(exponent: f64, log_exponent: f64) -> Tail {
        Tail::Exact {
            exponent,
            log_exponent,
        }
    }

    pub fn times(self, other: Tail) -> Tail {
        use Tail::*;
        match (self, other) {
            (Zero, _) | (_, Zero) => Zero,
            (
                Exact {
                    exponent: a,
                    log_exponent: b,
                },
                Exact {
                    exponent: c,
                    log_exponent: d,
                },
            ) => Exact {
                exponent: a + c,
                log_exponent: b + d,
            },
            (x, y) => {
                let (a, b) = x.exponents().unwrap();
                let (c, d) = y.exponents().unwrap();
                Upper {
                    exponent: a + c,
                    log_exponent: b + d,
                }
            }
        }
    }

    pub fn exponents(self) -> Option<(f64, f64)> {
        match self {
            Tail::Zero => None,
            Tail::Exact {
                exponent,
                log_exponent,
            }
            | Tail::Upper {
                exponent,
                log_exponent,
            } => Some((exponent, log_exponent)),
        }
    }

    /// True when the integrand is bounded near the endpoint.
    pub fn is_bounded(self) -> bool {
        match self.exponents() {
            None => true,
            Some((a, b)) => a > 0.0 || (a == 0.0 && b <= 0.0),
        }
    }
}

/// Outcome of probing one endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EndStatus {
    Converges,
    Diverges,
    Undecided,
}

fn integrable(a: f64, b: f64) -> Option<bool> {
    if a.is_nan() || b.is_nan() {
        return None;
    }
    Some(a > -1.0 || (a == -1.0 && b < -1.0))
}

/// Classifies `int f` near an endpoint given the tail of `f` in the local
/// variable; the Jacobian `u^-2` at infinity is added here.
pub fn classify_end(tail: Tail, end: End) -> EndStatus {
    let jac = if end.is_infinite() {
        Tail::exact(-2.0, 0.0)
    } else {
        Tail::ORDER_ONE
    };
    match tail.times(jac) {
        Tail::Zero => EndStatus::Converges,
        Tail::Exact {
            exponent,
            log_exponent,
        } => match integrable(exponent, log_exponent) {
            Some(true) => EndStatus::Converges,
            Some(false) => EndStatus::Diverges,
            None => EndStatus::Undecided,
        },
        Tail::Upper {
            exponent,
            log_exponent,
        } => match integrable(exponent, log_exponent) {
            Some(true) => EndStatus::Converges,
            _ => EndStatus::Undecided,
        },
    }
}

/// Tail metadata attached to sampled data, written in the natural local
/// variable `rho`: `rho = x` at infinity and `rho = |x - e|` at a finite or
/// zero endpoint. The data is asserted to behave like
/// `c * rho^exponent * |log rho|^log_exponent` with `c > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailMetadata {
    pub exponent: f64,
    #[serde(default)]
    pub log_exponent: f64,
}

impl TailMetadata {
    pub fn to_tail(self, end: End) -> Tail {
        if end.is_infinite() {
            Tail::exact(-self.exponent, self.log_exponent)
        } else {
            Tail::exact(self.exponent, self.log_exponent)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_rules_at_origin() {
        assert_eq!(
            classify_end(Tail::exact(-0.5, 0.0), End::Origin),
            EndStatus::Converges
        );
        assert_eq!(
            classify_end(Tail::exact(-1.0, 0.0), End::Origin),
            EndStatus::Diverges
        );
        assert_eq!(
            classify_end(Tail::exact(-1.0, -2.0), End::Origin),
            EndStatus::Converges
        );
        assert_eq!(
            classify_end(Tail::exact(-1.0, -1.0), End::Origin),
            EndStatus::Diverges
        );
    }

    #[test]
    fn power_rules_at_infinity() {
        // t^-2 at infinity is u^2 in u = 1/t.
        assert_eq!(
            classify_end(Tail::exact(2.0, 0.0), End::PosInfinity),
            EndStatus::Converges
        );
        // 1/t
        assert_eq!(
            classify_end(Tail::exact(1.0, 0.0), End::PosInfinity),
            EndStatus::Diverges
        );
        // 1/(t log^2 t)
        assert_eq!(
            classify_end(Tail::exact(1.0, -2.0), End::PosInfinity),
            EndStatus::Converges
        );
    }

    #[test]
    fn upper_bounds_only_prove_convergence() {
        assert_eq!(
            classify_end(Tail::BOUNDED, End::Finite(1.0)),
            EndStatus::Converges
        );
        let weak = Tail::Upper {
            exponent: -1.0,
            log_exponent: 0.0,
        };
        assert_eq!(classify_end(weak, End::Origin), EndStatus::Undecided);
    }

    #[test]
    fn zero_absorbs() {
        assert_eq!(Tail::Zero.times(Tail::exact(-5.0, 0.0)), Tail::Zero);
        assert_eq!(
            classify_end(Tail::Zero, End::PosInfinity),
            EndStatus::Converges
        );
    }

    #[test]
    fn metadata_orientation() {
        let m = TailMetadata {
            exponent: 2.0,
            log_exponent: 0.0,
        };
        assert_eq!(m.to_tail(End::PosInfinity), Tail::exact(-2.0, 0.0));
        assert_eq!(m.to_tail(End::Finite(1.0)), Tail::exact(2.0, 0.0));
    }
}
