//! Growth envelopes `|f| <= e^M`.

use crate::green::ModelDomain;
use crate::laplacian::{check_laplacian, LaplacianReport};
use crate::radial::{
    check_convex_of_h, check_convex_points, norm, ConvexityReport, Dimension, RadialProfile,
};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub enum GrowthEnvelope {
    /// `M(x) = q(|x|)` with `q` convex of `h_m`.
    Radial {
        q: RadialProfile,
        m: Dimension,
        convexity: ConvexityReport,
    },
    /// `M = F o (-g_D)` with `F` convex and increasing on `(-inf, 0)`.
    Green {
        f: RadialProfile,
        domain: ModelDomain,
        convexity: ConvexityReport,
        laplacian: LaplacianReport,
    },
}

impl GrowthEnvelope {
    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            GrowthEnvelope::Radial { q, .. } => q.value(norm(x)),
            GrowthEnvelope::Green { f, domain, .. } => match domain.green_value(x) {
                Ok(g) => f.value(-g),
                Err(_) => f64::NAN,
            },
        }
    }

    /// The profile `q` or `F`.
    pub fn profile(&self) -> &RadialProfile {
        match self {
            GrowthEnvelope::Radial { q, .. } => q,
            GrowthEnvelope::Green { f, .. } => f,
        }
    }
}

pub fn growth_envelope_radial(q: &RadialProfile, m: Dimension, tol: f64) -> Result<GrowthEnvelope> {
    let convexity = check_convex_of_h(q, m, tol)?;
    if !convexity.passed && !q.is_sampled() {
        return Err(Error::precondition(format!(
            "growth profile is not convex of h_{}",
            m.get()
        )));
    }
    Ok(GrowthEnvelope::Radial {
        q: q.clone(),
        m,
        convexity,
    })
}

/// Checks convexity and monotonicity of `F` on a grid `s = -10^x`,
/// `x in [-3, 3]`, clipped to the profile's interval.
pub fn validate_green_profile(f: &RadialProfile, tol: f64) -> Result<ConvexityReport> {
    let d = f.domain();
    if d.hi > 0.0 {
        return Err(Error::domain("F must be defined on a subset of (-inf, 0)"));
    }
    let n = 257;
    let s: Vec<f64> = (0..n)
        .map(|i| -(10f64.powf(3.0 - 6.0 * i as f64 / (n - 1) as f64)))
        .filter(|s| d.contains(*s))
        .collect();
    let vals: Vec<f64> = s.iter().map(|&x| f.value(x)).collect();
    let rep = check_convex_points(&s, &vals, tol)?;
    if let Some(i) = (1..vals.len())
        .find(|&i| vals[i] < vals[i - 1] - tol * vals[i].abs().max(vals[i - 1].abs()).max(1.0))
    {
        return Err(Error::precondition(format!(
            "F is not increasing between s = {} and s = {}",
            s[i - 1],
            s[i]
        )));
    }
    Ok(rep)
}

/// `M = F o (-g_D)`, checked for subharmonicity on sample level lines.
pub fn growth_envelope_green(
    f: &RadialProfile,
    domain: &ModelDomain,
    tol: f64,
) -> Result<GrowthEnvelope> {
    let domain = domain.validated()?;
    let convexity = validate_green_profile(f, tol)?;
    if !convexity.passed && !f.is_sampled() {
        return Err(Error::precondition("F is not convex"));
    }
    let pole = domain.pole();
    let outer = domain.radius();
    let mut points = Vec::new();
    for t in [0.05, 0.1, 0.2, 0.5, 1.0, 2.0] {
        if t >= domain.green_sup() {
            continue;
        }
        for k in 0..16 {
            points.push(domain.level_point(t, k as f64 * std::f64::consts::PI / 8.0)?);
        }
    }
    let m = |x: &[f64]| match domain.green_value(x) {
        Ok(g) => f.value(-g),
        Err(_) => f64::NAN,
    };
    let step = |x: &[f64]| {
        let to_pole: f64 = x
            .iter()
            .zip(&pole)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        (2e-3 * norm(x).max(1e-3))
            .min(0.25 * (outer - norm(x)))
            .min(0.25 * to_pole)
    };
    let laplacian = check_laplacian(&m, &points, step, tol);
    if !laplacian.passed && !f.is_sampled() {
        return Err(Error::precondition(format!(
            "F o (-g) fails the discrete Laplacian check at {:?}",
            laplacian.witness
        )));
    }
    Ok(GrowthEnvelope::Green {
        f: f.clone(),
        domain,
        convexity,
        laplacian,
    })
}
