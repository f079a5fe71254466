//! Integration-by-parts identities evaluated along two independent paths.

use serde::{Deserialize, Serialize};

use crate::green::ModelDomain;
use crate::quadrature::{integrate_improper, SimpsonOptions};
use crate::radial::{h_derivatives, Dimension, MonotoneDensity, RadialProfile};
use crate::uniqueness::zeros::{Interpretation, ZeroSet};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathValue {
    pub path: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IbpCheck {
    pub name: String,
    pub paths: Vec<PathValue>,
    /// Largest pairwise difference over the largest magnitude.
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IbpReport {
    pub checks: Vec<IbpCheck>,
    pub skipped: Vec<String>,
    pub passed: bool,
}

impl IbpReport {
    fn new(checks: Vec<IbpCheck>, skipped: Vec<String>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        IbpReport {
            checks,
            skipped,
            passed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IbpTolerances {
    /// For finite point sets, where both sides are exact sums.
    pub points: f64,
    /// For smooth parametric inputs evaluated by quadrature.
    pub smooth: f64,
}

impl Default for IbpTolerances {
    fn default() -> Self {
        IbpTolerances {
            points: 1e-12,
            smooth: 1e-8,
        }
    }
}

pub fn relative_residual(values: &[f64]) -> f64 {
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let mut worst = 0.0f64;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            worst = worst.max((a - b).abs());
        }
    }
    if worst.is_nan() {
        f64::INFINITY
    } else {
        worst / scale
    }
}

fn check(name: &str, paths: Vec<(&str, f64)>, tolerance: f64) -> IbpCheck {
    let values: Vec<f64> = paths.iter().map(|p| p.1).collect();
    let residual = relative_residual(&values);
    IbpCheck {
        name: name.into(),
        paths: paths
            .into_iter()
            .map(|(p, value)| PathValue {
                path: p.into(),
                value,
            })
            .collect(),
        residual,
        tolerance,
        passed: residual < tolerance,
    }
}

/// `sum_{|a| > r0} mult v(a)` against
/// `int_r0^R d s_Z r^(1-2n) dr - s_Z(r0) int_r0^R d t^(1-m) dt`.
pub fn ibp_check_radial(
    d: &MonotoneDensity,
    z: &ZeroSet,
    r0: f64,
    outer: f64,
    m: Dimension,
    tol: &IbpTolerances,
) -> Result<IbpReport> {
    if !z.has_point_data() {
        return Ok(IbpReport::new(
            Vec::new(),
            vec!["radial identity needs explicit zero points".into()],
        ));
    }
    if !(r0 > 0.0 && r0 < outer) {
        return Err(Error::domain(format!(
            "need 0 < r0 < R, got r0 = {r0}, R = {outer}"
        )));
    }
    let k = 1.0 - m.as_f64();
    let points = z.expand_points(outer)?.unwrap_or_default();
    let mut direct = 0.0;
    for p in &points {
        let r = p.modulus();
        if !(r < outer) {
            return Err(Error::domain(format!(
                "zero {:?} is not inside B({outer})",
                p.z
            )));
        }
        if r > r0 {
            direct += p.multiplicity as f64 * d.integrate_weighted(k, r, outer)?;
        }
    }
    let (s, tolerance) = match z.override_counting(Interpretation::Radial)? {
        Some(c) => (c, tol.smooth),
        None => (z.radial_counting(m, outer)?, tol.points),
    };
    let w = 1.0 - 2.0 * m.complex_dim().unwrap_or(1) as f64;
    let zero_integral = s.integrate(
        |r, _| d.value(r) * r.powf(w),
        |a, b| d.integrate_weighted(w, a, b),
        r0,
        outer,
        d.breaks(),
        &SimpsonOptions::with_tol(1e-13),
    )?;
    let boundary = s.value(r0) * d.integrate_weighted(k, r0, outer)?;
    Ok(IbpReport::new(
        vec![check(
            "radial",
            vec![
                ("direct-sum", direct),
                ("integrated", zero_integral - boundary),
            ],
            tolerance,
        )],
        Vec::new(),
    ))
}

/// Inputs for the Green identities; each check runs when its data is present.
pub struct GreenIbpInput<'a> {
    pub q: &'a RadialProfile,
    pub f: Option<&'a RadialProfile>,
    pub zeros: Option<&'a ZeroSet>,
    pub domain: &'a ModelDomain,
    pub t0: f64,
    /// Inner truncation of the mass identity.
    pub delta: f64,
}

pub fn ibp_check_green(input: &GreenIbpInput<'_>, tol: &IbpTolerances) -> Result<IbpReport> {
    let domain = input.domain.validated()?;
    if !(input.t0 > 0.0 && input.t0 < domain.green_sup()) {
        return Err(Error::domain(format!(
            "t0 = {} is not a proper level of g",
            input.t0
        )));
    }
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    match input.zeros {
        Some(z) if z.has_point_data() => checks.push(zeros_check(input, z, &domain, tol)?),
        Some(_) => skipped.push("zero identity needs explicit zero points".into()),
        None => skipped.push("zero identity: no zero set given".into()),
    }
    match input.f {
        Some(f) => match mass_check(input, f, &domain, tol)? {
            Ok(c) => checks.push(c),
            Err(why) => skipped.push(why),
        },
        None => skipped.push("mass identity: no F given".into()),
    }
    Ok(IbpReport::new(checks, skipped))
}

/// `sum_{g(a) < t0} mult q(g(a))` against
/// `int_0^t0 q'(t) s_{Z,D}(t) dt - q(t0) s_{Z,D}(t0)`.
fn zeros_check(
    input: &GreenIbpInput<'_>,
    z: &ZeroSet,
    domain: &ModelDomain,
    tol: &IbpTolerances,
) -> Result<IbpCheck> {
    let (q, t0) = (input.q, input.t0);
    let points = z.expand_points(domain.radius())?.unwrap_or_default();
    let mut direct = 0.0;
    for p in &points {
        let g = domain.green_value(&p.z)?;
        if g < t0 {
            direct += p.multiplicity as f64 * q.value(g);
        }
    }
    let (s, tolerance) = match z.override_counting(Interpretation::Green)? {
        Some(c) => (c, tol.smooth),
        None => (z.green_counting(domain)?, tol.points),
    };
    let q_breaks = q.breaks();
    let integral = s.integrate(
        |t, _| q.right_derivative(t).unwrap_or(f64::NAN),
        |a, b| Ok(q.value(b) - q.value(a)),
        0.0,
        t0,
        &q_breaks,
        &SimpsonOptions::with_tol(1e-13),
    )?;
    let stieltjes = integral - q.value(t0) * s.value(t0);
    Ok(check(
        "meqz",
        vec![("direct-sum", direct), ("stieltjes", stieltjes)],
        tolerance,
    ))
}

/// `int_{delta < g < t0} q(g) d nu_M` three ways: directly against the
/// radial Riesz density of `M = F(-g)` (centre pole), as the Stieltjes
/// integral `int q(t) F''(-t) dt`, and after integrating by parts.
fn mass_check(
    input: &GreenIbpInput<'_>,
    f: &RadialProfile,
    domain: &ModelDomain,
    tol: &IbpTolerances,
) -> Result<std::result::Result<IbpCheck, String>> {
    let (q, t0, delta) = (input.q, input.t0, input.delta);
    if !(delta > 0.0 && delta < t0) {
        return Err(Error::domain(format!(
            "truncation delta = {delta} must lie in (0, t0)"
        )));
    }
    if !q.is_parametric() || !f.is_parametric() {
        return Ok(Err("mass identity needs smooth parametric q and F".into()));
    }
    if f.second_derivative(-t0).is_none() || q.second_derivative(t0).is_none() {
        return Ok(Err(
            "mass identity needs twice differentiable q and F".into()
        ));
    }
    let opts = SimpsonOptions::with_tol(1e-13);
    let f1 = |s: f64| f.right_derivative(s).unwrap_or(f64::NAN);
    let f2 = |s: f64| f.second_derivative(s).unwrap_or(f64::NAN);

    let stieltjes = integrate_improper(|t| q.value(t) * f2(-t), delta, t0, &opts)?;
    let by_parts = -q.value(t0) * f1(-t0)
        + q.value(delta) * f1(-delta)
        + integrate_improper(
            |t| q.right_derivative(t).unwrap_or(f64::NAN) * f1(-t),
            delta,
            t0,
            &opts,
        )?;
    let mut paths = vec![("stieltjes", stieltjes), ("by-parts", by_parts)];

    if domain.has_center_pole() {
        let m = domain.dimension();
        let mf = m.as_f64();
        let flux = m.flux_factor();
        let density = |r: f64| {
            let mut x = vec![0.0; m.get() as usize];
            x[0] = r;
            let g = domain.green_value(&x).unwrap_or(f64::NAN);
            let (h1, h2) = h_derivatives(m, r);
            let dm = f1(-g) * h1;
            let ddm = f2(-g) * h1 * h1 + f1(-g) * h2;
            let riesz = ((mf - 1.0) * r.powf(mf - 2.0) * dm + r.powf(mf - 1.0) * ddm) / flux;
            q.value(g) * riesz
        };
        let lo = domain.level_radius(t0)?;
        let hi = domain.level_radius(delta)?;
        paths.insert(0, ("direct", integrate_improper(density, lo, hi, &opts)?));
    }
    Ok(Ok(check("meqM", paths, tol.smooth)))
}
