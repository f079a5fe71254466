//! Midpoint-convexity checks, in particular "convex of `h_m`".

use serde::{Deserialize, Serialize};

use super::profile::RadialProfile;
use super::transforms::{h_extended, h_inverse, Dimension};
use crate::{Error, Result};

pub const DEFAULT_CONVEXITY_TOL: f64 = 1e-9;
pub const DEFAULT_CONVEXITY_POINTS: usize = 513;

/// Three grid points `(s_i-k, s_i, s_i+k)` where the chord lies below the
/// function by more than the allowed slack.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub s: [f64; 3],
    pub f: [f64; 3],
    /// `f(s_mid) - chord(s_mid)`, positive.
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub passed: bool,
    pub points: usize,
    pub triples_tested: usize,
    pub tolerance: f64,
    /// Evaluation range in the convexity coordinate.
    pub range: [f64; 2],
    pub first_violation: Option<Violation>,
}

/// Tests `f_j <= chord(f_i, f_k)(s_j) + tol * scale` on triples
/// `(i - k, i, i + k)`, `k = 1, 2, 4, ...`, of a sorted grid. The scale is
/// `max(1, |f|)` over the triple.
pub fn check_convex_points(s: &[f64], f: &[f64], tol: f64) -> Result<ConvexityReport> {
    if s.len() != f.len() {
        return Err(Error::InsufficientData(
            "abscissae and values differ in length".into(),
        ));
    }
    let n = s.len();
    if n < 3 {
        return Err(Error::InsufficientData(format!(
            "convexity check needs at least 3 evaluation points, got {n}"
        )));
    }
    if let Some(i) = f.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            at: s[i],
            value: f[i],
        });
    }
    let mut tested = 0;
    let mut first = None;
    let mut k = 1;
    'outer: while 2 * k < n {
        for i in k..n - k {
            let (a, b) = (i - k, i + k);
            let w = (s[i] - s[a]) / (s[b] - s[a]);
            let chord = f[a] + w * (f[b] - f[a]);
            let scale = 1f64.max(f[a].abs()).max(f[i].abs()).max(f[b].abs());
            tested += 1;
            let excess = f[i] - chord;
            if excess > tol * scale {
                first = Some(Violation {
                    s: [s[a], s[i], s[b]],
                    f: [f[a], f[i], f[b]],
                    excess,
                });
                break 'outer;
            }
        }
        k *= 2;
    }
    Ok(ConvexityReport {
        passed: first.is_none(),
        points: n,
        triples_tested: tested,
        tolerance: tol,
        range: [s[0], s[n - 1]],
        first_violation: first,
    })
}

/// Cell-centred uniform grid of `n` points on `(a, b)`.
pub fn cell_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let h = (b - a) / n as f64;
    (0..n).map(|i| a + (i as f64 + 0.5) * h).collect()
}

/// Checks that `q o h_m^-1` is midpoint convex on the image of the
/// profile's interval under `h_m`. Unbounded ends are cut to the profile's
/// evaluation window.
pub fn check_convex_of_h(q: &RadialProfile, m: Dimension, tol: f64) -> Result<ConvexityReport> {
    check_convex_of_h_with(q, m, tol, DEFAULT_CONVEXITY_POINTS)
}

pub fn check_convex_of_h_with(
    q: &RadialProfile,
    m: Dimension,
    tol: f64,
    points: usize,
) -> Result<ConvexityReport> {
    let d = q.domain();
    if d.lo < 0.0 {
        return Err(Error::domain("convex-of-h check needs a radial interval"));
    }
    if !(tol >= 0.0) {
        return Err(Error::precondition(format!(
            "tolerance must be >= 0, got {tol}"
        )));
    }
    let (lo, hi) = d.eval_window();
    let (a, b) = (h_extended(m, lo), h_extended(m, hi));
    let s = cell_grid(a, b, points);
    let f = s
        .iter()
        .map(|&si| Ok(q.value(h_inverse(m, si)?)))
        .collect::<Result<Vec<f64>>>()?;
    check_convex_points(&s, &f, tol)
}
