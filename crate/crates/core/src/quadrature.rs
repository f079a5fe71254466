//! Adaptive Simpson quadrature.
//!
//! Integrands handled here are piecewise smooth by construction; callers
//! split at known breakpoints and hand each smooth piece to
//! [`adaptive_simpson`].

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpsonOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for SimpsonOptions {
    fn default() -> Self {
        SimpsonOptions {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_depth: 60,
        }
    }
}

impl SimpsonOptions {
    pub fn with_tol(tol: f64) -> Self {
        SimpsonOptions {
            abs_tol: tol,
            rel_tol: tol,
            ..Default::default()
        }
    }
}

fn checked(x: f64, fx: f64) -> Result<f64> {
    if fx.is_finite() {
        Ok(fx)
    } else {
        Err(Error::NonFinite { at: x, value: fx })
    }
}

/// Integrates `f` over `[a, b]` (either orientation) with adaptive Simpson
/// and a Richardson correction on accepted panels.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, opts: &SimpsonOptions) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok(0.0);
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain(format!(
            "adaptive_simpson needs finite limits, got [{a}, {b}]"
        )));
    }
    let fa = checked(a, f(a))?;
    let fb = checked(b, f(b))?;
    let m = 0.5 * (a + b);
    let fm = checked(m, f(m))?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);

    // Coarse magnitude estimate so the relative tolerance has a scale to bite on.
    let mut scale = whole.abs();
    for k in 1..8 {
        let x = a + (b - a) * k as f64 / 8.0;
        scale = scale.max(checked(x, f(x))?.abs() * (b - a).abs() / 8.0);
    }
    let tol = opts.abs_tol.max(opts.rel_tol * scale);
    recurse(&f, a, fa, m, fm, b, fb, whole, tol, opts.max_depth)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F>(
    f: &F,
    a: f64,
    fa: f64,
    m: f64,
    fm: f64,
    b: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = checked(lm, f(lm))?;
    let frm = checked(rm, f(rm))?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol || lm == a || rm == b {
        return Ok(left + right + delta / 15.0);
    }
    Ok(
        recurse(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1)?
            + recurse(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1)?,
    )
}

/// Integrates over `[a, b]` split at every breakpoint strictly inside.
///
/// The closure receives `(x, piece_mid)` so that piecewise-constant factors
/// can be evaluated on the open piece rather than at a jump.
pub fn integrate_pieces<F>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    opts: &SimpsonOptions,
) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    if a == b {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut nodes = Vec::with_capacity(breaks.len() + 2);
    nodes.push(lo);
    let start = breaks.partition_point(|&x| x <= lo);
    let end = breaks.partition_point(|&x| x < hi);
    for &x in &breaks[start..end] {
        if x > *nodes.last().unwrap() {
            nodes.push(x);
        }
    }
    nodes.push(hi);

    let span = hi - lo;
    let mut total = 0.0;
    for w in nodes.windows(2) {
        let (p, q) = (w[0], w[1]);
        if q <= p {
            continue;
        }
        let mid = 0.5 * (p + q);
        // Share the absolute budget in proportion to piece length.
        let piece_opts = SimpsonOptions {
            abs_tol: opts.abs_tol * ((q - p) / span).max(1e-6),
            ..*opts
        };
        total += adaptive_simpson(|x| f(x, mid), p, q, &piece_opts)?;
    }
    Ok(sign * total)
}

/// Integrates over `[a, b]` where either limit may be infinite or a point
/// where `f` is not finite.
///
/// Improper ends are approached through geometrically shrinking (finite
/// end) or doubling (infinite end) panels; summation stops once three
/// consecutive panels fall below the tolerance.
pub fn integrate_improper<F>(f: F, a: f64, b: f64, opts: &SimpsonOptions) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return Ok(-integrate_improper(f, b, a, opts)?);
    }
    let bad = |x: f64| !x.is_finite() || !f(x).is_finite();
    let (bad_a, bad_b) = (bad(a), bad(b));
    if !bad_a && !bad_b {
        return adaptive_simpson(&f, a, b, opts);
    }
    let c = match (a.is_finite(), b.is_finite()) {
        (true, true) => 0.5 * (a + b),
        (true, false) => a + a.abs().max(1.0),
        (false, true) => b - b.abs().max(1.0),
        (false, false) => 0.0,
    };
    let left = if bad_a {
        -toward_end(&f, c, a, opts)?
    } else {
        adaptive_simpson(&f, a, c, opts)?
    };
    let right = if bad_b {
        toward_end(&f, c, b, opts)?
    } else {
        adaptive_simpson(&f, c, b, opts)?
    };
    Ok(left + right)
}

/// [`integrate_improper`] on each piece between breakpoints, with the
/// closure receiving `(x, piece_mid)` as in [`integrate_pieces`].
pub fn integrate_improper_pieces<F>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    opts: &SimpsonOptions,
) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    if a == b {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut nodes = vec![lo];
    let start = breaks.partition_point(|&x| x <= lo);
    let end = breaks.partition_point(|&x| x < hi);
    for &x in &breaks[start..end] {
        if x > *nodes.last().unwrap() {
            nodes.push(x);
        }
    }
    nodes.push(hi);
    let mut total = 0.0;
    for w in nodes.windows(2) {
        let (p, q) = (w[0], w[1]);
        let mid = if q.is_finite() {
            0.5 * (p + q)
        } else {
            p.abs().max(1.0) * 2.0 + p
        };
        total += integrate_improper(|x| f(x, mid), p, q, opts)?;
    }
    Ok(sign * total)
}

const MAX_PANELS: usize = 400;

/// Oriented integral from `c` to the improper end `end`.
fn toward_end<F>(f: &F, c: f64, end: f64, opts: &SimpsonOptions) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let panel = |j: i32| -> (f64, f64) {
        if end.is_finite() {
            let w = c - end;
            (end + w * 2f64.powi(-j), end + w * 2f64.powi(-j - 1))
        } else {
            let l = c.abs().max(1.0) * end.signum();
            (
                c + l * (2f64.powi(j) - 1.0),
                c + l * (2f64.powi(j + 1) - 1.0),
            )
        }
    };
    let mut total = 0.0;
    let mut quiet = 0;
    for j in 0..MAX_PANELS as i32 {
        let (p, q) = panel(j);
        if p == q || !q.is_finite() {
            return Ok(total);
        }
        let piece = adaptive_simpson(f, p, q, opts)?;
        total += piece;
        if piece.abs() <= opts.abs_tol.max(opts.rel_tol * total.abs()) {
            quiet += 1;
            if quiet == 3 {
                return Ok(total);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NumericalInstability(format!(
        "improper integral towards {end} did not settle within {MAX_PANELS} panels"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let v = adaptive_simpson(|x| x * x * x - 2.0 * x, 0.0, 2.0, &Default::default()).unwrap();
        assert!((v - 0.0).abs() < 1e-14);
    }

    #[test]
    fn smooth_integrand() {
        let v = adaptive_simpson(|x| 1.0 / x, 1.0, 2.0, &Default::default()).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-12);
        let w = adaptive_simpson(f64::exp, 0.0, 1.0, &Default::default()).unwrap();
        assert!((w - (1f64.exp() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let v = adaptive_simpson(f64::sin, 1.0, 0.0, &Default::default()).unwrap();
        assert!((v + (1.0 - 1f64.cos())).abs() < 1e-12);
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let err = adaptive_simpson(|x| 1.0 / x, 0.0, 1.0, &Default::default()).unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }));
    }

    #[test]
    fn step_function_through_pieces() {
        // floor(x) on [0, 3.5] = 0 + 1 + 2 + 3 * 0.5
        let breaks = [1.0, 2.0, 3.0];
        let v =
            integrate_pieces(|_, mid| mid.floor(), 0.0, 3.5, &breaks, &Default::default()).unwrap();
        assert!((v - 4.5).abs() < 1e-14);
    }

    #[test]
    fn kink_inside_single_piece_converges() {
        let v = adaptive_simpson(|x: f64| (x - 0.3).abs(), 0.0, 1.0, &Default::default()).unwrap();
        assert!((v - (0.045 + 0.245)).abs() < 1e-9);
    }

    #[test]
    fn improper_infinite_tail() {
        let v = integrate_improper(
            |x: f64| 1.0 / (x * x),
            1.0,
            f64::INFINITY,
            &Default::default(),
        )
        .unwrap();
        assert!((v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn improper_singular_origin() {
        let v = integrate_improper(|x: f64| x.powf(-0.5), 0.0, 1.0, &Default::default()).unwrap();
        assert!((v - 2.0).abs() < 1e-8, "{v}");
    }

    #[test]
    fn improper_divergence_is_reported() {
        let r = integrate_improper(|x: f64| 1.0 / x, 1.0, f64::INFINITY, &Default::default());
        assert!(r.is_err());
    }
}
