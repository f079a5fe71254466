//! Finite-difference Laplacians on polar grids.

use serde::{Deserialize, Serialize};

/// Star stencil `sum_i (f(x + h e_i) + f(x - h e_i) - 2 f(x)) / h^2`; the
/// 5-point Laplacian in the plane.
pub fn star_laplacian<F>(f: &F, x: &[f64], h: f64) -> f64
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let f0 = f(x);
    let mut y = x.to_vec();
    let mut acc = 0.0;
    for i in 0..x.len() {
        y[i] = x[i] + h;
        let fp = f(&y);
        y[i] = x[i] - h;
        let fm = f(&y);
        y[i] = x[i];
        acc += fp + fm - 2.0 * f0;
    }
    acc / (h * h)
}

/// Point at radius `r` and angle `theta` in the first two coordinates of
/// `R^dim`.
pub fn polar_point(r: f64, theta: f64, dim: usize) -> Vec<f64> {
    let mut x = vec![0.0; dim.max(1)];
    if dim == 1 {
        x[0] = if theta.cos() >= 0.0 { r } else { -r };
    } else {
        x[0] = r * theta.cos();
        x[1] = r * theta.sin();
    }
    x
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub radii: usize,
    pub angles: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            radii: 256,
            angles: 64,
        }
    }
}

impl GridSpec {
    pub fn angle(&self, k: usize) -> f64 {
        2.0 * std::f64::consts::PI * k as f64 / self.angles.max(1) as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaplacianReport {
    pub passed: bool,
    pub points: usize,
    /// Smallest `h^2 * Delta_h f / max(1, |f|)` seen.
    pub min_scaled: f64,
    pub tolerance: f64,
    pub witness: Option<Vec<f64>>,
}

/// Checks `Delta_h f(x) >= -tol * max(1, |f(x)|) / h^2` at every point,
/// with the step chosen per point.
pub fn check_laplacian<F, H>(f: &F, points: &[Vec<f64>], step: H, tol: f64) -> LaplacianReport
where
    F: Fn(&[f64]) -> f64 + ?Sized,
    H: Fn(&[f64]) -> f64,
{
    let mut min_scaled = f64::INFINITY;
    let mut witness = None;
    for x in points {
        let h = step(x);
        let lap = star_laplacian(f, x, h);
        let scaled = lap * h * h / f(x).abs().max(1.0);
        if scaled < min_scaled || scaled.is_nan() {
            min_scaled = scaled;
            if !(scaled >= -tol) && witness.is_none() {
                witness = Some(x.clone());
            }
        }
    }
    LaplacianReport {
        passed: witness.is_none(),
        points: points.len(),
        min_scaled,
        tolerance: tol,
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_is_exact() {
        let f = |x: &[f64]| x[0] * x[0] + x[1] * x[1];
        assert!((star_laplacian(&f, &[0.3, -0.2], 1e-2) - 4.0).abs() < 1e-9);
    }

    #[test]
    fn log_is_discretely_harmonic() {
        let f = |x: &[f64]| (x[0] * x[0] + x[1] * x[1]).sqrt().ln();
        let h = 1e-3;
        assert!(star_laplacian(&f, &[1.2, 0.7], h).abs() < 1e-4);
    }

    #[test]
    fn concave_fails() {
        let f = |x: &[f64]| -(x[0] * x[0]);
        let rep = check_laplacian(&f, &[vec![0.5, 0.5]], |_| 1e-2, 1e-9);
        assert!(!rep.passed);
        assert_eq!(rep.witness, Some(vec![0.5, 0.5]));
    }
}
