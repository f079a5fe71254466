//! One-sided derivatives by Richardson-extrapolated difference quotients.

use crate::{Error, Result};

/// Geometric step sequence `h_k = h0 * 2^-k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSchedule {
    /// Initial step; `None` picks one from the position and the room to the
    /// domain edge.
    pub h0: Option<f64>,
    pub max_halvings: u32,
    pub rel_tol: f64,
}

impl Default for StepSchedule {
    fn default() -> Self {
        StepSchedule {
            h0: None,
            max_halvings: 40,
            rel_tol: 1e-8,
        }
    }
}

fn initial_step(r: f64, room: f64, schedule: &StepSchedule) -> f64 {
    let h = schedule.h0.unwrap_or_else(|| 0.05 * r.abs().max(1e-3));
    h.min(0.25 * room)
}

fn one_side<F>(f: &F, r: f64, fr: f64, dir: f64, room: f64, sch: &StepSchedule) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(room > 0.0) {
        return Err(Error::domain(format!(
            "no room for a one-sided difference at {r}"
        )));
    }
    let quotient = |h: f64| -> Result<f64> {
        let x = r + dir * h;
        let fx = f(x);
        if !fx.is_finite() {
            return Err(Error::NonFinite { at: x, value: fx });
        }
        Ok(dir * (fx - fr) / h)
    };
    let mut h = initial_step(r, room, sch);
    let mut prev_q = quotient(h)?;
    let mut prev_est: Option<f64> = None;
    for _ in 0..sch.max_halvings {
        h *= 0.5;
        let q = quotient(h)?;
        // First-order error in h cancels between successive quotients.
        let est = 2.0 * q - prev_q;
        if let Some(p) = prev_est {
            if (est - p).abs() <= sch.rel_tol * est.abs().max(1.0) {
                return Ok(est);
            }
        }
        prev_est = Some(est);
        prev_q = q;
    }
    Err(Error::NumericalInstability(format!(
        "one-sided difference at {r} did not settle after {} halvings",
        sch.max_halvings
    )))
}

/// Left and right derivatives of `f` at an interior point `r` of `(lo, hi)`.
///
/// Fails with [`Error::NumericalInstability`] when the extrapolated
/// sequence does not settle, and with [`Error::Precondition`] when the left
/// derivative exceeds the right one beyond the convergence tolerance (which
/// cannot happen for functions convex in any increasing coordinate).
pub fn onesided_derivatives<F>(
    f: F,
    r: f64,
    lo: f64,
    hi: f64,
    schedule: &StepSchedule,
) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    if !(r > lo && r < hi) {
        return Err(Error::domain(format!(
            "{r} is not interior to ({lo}, {hi})"
        )));
    }
    let fr = f(r);
    if !fr.is_finite() {
        return Err(Error::NonFinite { at: r, value: fr });
    }
    let left = one_side(&f, r, fr, -1.0, r - lo, schedule)?;
    let right = one_side(&f, r, fr, 1.0, hi - r, schedule)?;
    let slack = 10.0 * schedule.rel_tol * left.abs().max(right.abs()).max(1.0);
    if left > right + slack {
        return Err(Error::precondition(format!(
            "left derivative {left} exceeds right derivative {right} at {r}"
        )));
    }
    Ok((left, right))
}

/// Right derivative only, for integrands that need `q'_+`.
pub fn right_derivative<F>(f: F, r: f64, hi: f64, schedule: &StepSchedule) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let fr = f(r);
    if !fr.is_finite() {
        return Err(Error::NonFinite { at: r, value: fr });
    }
    one_side(&f, r, fr, 1.0, hi - r, schedule)
}

pub fn left_derivative<F>(f: F, r: f64, lo: f64, schedule: &StepSchedule) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let fr = f(r);
    if !fr.is_finite() {
        return Err(Error::NonFinite { at: r, value: fr });
    }
    one_side(&f, r, fr, -1.0, r - lo, schedule)
}

#[cfg(test)]
mod tests {
    use super::*;

    const INF: f64 = f64::INFINITY;

    #[test]
    fn identity_has_unit_derivatives() {
        let (l, r) = onesided_derivatives(|x| x, 0.7, 0.0, INF, &Default::default()).unwrap();
        assert!((l - 1.0).abs() < 1e-12 && (r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kink_of_absolute_value() {
        let (l, r) =
            onesided_derivatives(|x: f64| (x - 1.0).abs(), 1.0, 0.0, 2.0, &Default::default())
                .unwrap();
        assert!((l + 1.0).abs() < 1e-12);
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kink_of_max_with_log() {
        let f = |x: f64| x.ln().max(0.0);
        let (l, r) = onesided_derivatives(f, 1.0, 0.0, INF, &Default::default()).unwrap();
        assert!(l.abs() < 1e-12);
        assert!((r - 1.0).abs() < 1e-8);
    }

    #[test]
    fn smooth_function_to_tolerance() {
        let (l, r) = onesided_derivatives(f64::exp, 0.5, -1.0, 1.0, &Default::default()).unwrap();
        let e = 0.5f64.exp();
        assert!((l - e).abs() < 1e-7 && (r - e).abs() < 1e-7);
    }

    #[test]
    fn concave_kink_is_rejected() {
        let f = |x: f64| -(x - 1.0).abs();
        let err = onesided_derivatives(f, 1.0, 0.0, 2.0, &Default::default()).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn oscillation_does_not_settle() {
        // x sin(1/x) near 0 has no one-sided derivative.
        let f = |x: f64| if x == 0.0 { 0.0 } else { x * (1.0 / x).sin() };
        let err = right_derivative(f, 0.0, 1.0, &Default::default()).unwrap_err();
        assert!(matches!(err, Error::NumericalInstability(_)));
    }

    #[test]
    fn endpoint_is_not_interior() {
        assert!(onesided_derivatives(|x| x, 1.0, 1.0, 2.0, &Default::default()).is_err());
    }
}
