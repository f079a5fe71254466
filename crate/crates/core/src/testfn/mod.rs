//! Positive subharmonic test functions vanishing on the boundary.

mod envelope;
mod validate;

pub use envelope::{
    growth_envelope_green, growth_envelope_radial, validate_green_profile, GrowthEnvelope,
};
pub use validate::{
    validate_testfn, AxiomCheck, AxiomTag, Candidate, EpsilonDelta, ValidationOptions,
    ValidationReport,
};

use serde::{Deserialize, Serialize};

use crate::family::Side;
use crate::green::ModelDomain;
use crate::laplacian::{check_laplacian, polar_point, GridSpec, LaplacianReport};
use crate::radial::{
    cell_grid, check_convex_points, norm, project_monotone, Dimension, Direction, Interval,
    MonotoneDensity, ProfileDescriptor, RadialProfile, StepSchedule,
};
use crate::tail::{classify_end, End, EndStatus, Tail};
use crate::{Error, Result};

/// The compact set `K` a test function lives outside of.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Compact {
    /// Closed ball `|x| <= radius`.
    Ball { radius: f64 },
    /// Closure of the level set `{g >= t}`.
    Level { t: f64 },
}

#[derive(Debug, Clone)]
pub struct RadialTestFunction {
    pub density: MonotoneDensity,
    pub r0: f64,
    pub outer: f64,
    pub m: Dimension,
    profile: RadialProfile,
}

#[derive(Debug, Clone)]
pub struct GreenTestFunction {
    pub q: RadialProfile,
    pub domain: ModelDomain,
    pub t0: f64,
    pub warnings: Vec<String>,
}

/// A member of `sbh_0^+(D \ K)`.
#[derive(Debug, Clone)]
pub enum TestFunction {
    /// `v(x) = int_|x|^R d(t) t^(1-m) dt` outside `B(r0)`.
    Radial(RadialTestFunction),
    /// `v = q o g_D` outside the closed level set `{g >= t0}`.
    Green(GreenTestFunction),
}

/// Serialized form of a test function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TestFunctionRecord {
    Radial {
        density: MonotoneDensity,
        r0: f64,
        #[serde(rename = "R", with = "crate::extended")]
        outer: f64,
        m: u32,
        sup: f64,
    },
    Green {
        q: ProfileDescriptor,
        domain: ModelDomain,
        t0: f64,
        sup: f64,
    },
}

impl TestFunction {
    pub fn dimension(&self) -> Dimension {
        match self {
            TestFunction::Radial(v) => v.m,
            TestFunction::Green(v) => v.domain.dimension(),
        }
    }

    pub fn domain(&self) -> ModelDomain {
        match self {
            TestFunction::Radial(v) => ModelDomain::Ball {
                radius: v.outer,
                m: v.m,
            },
            TestFunction::Green(v) => v.domain,
        }
    }

    pub fn compact(&self) -> Compact {
        match self {
            TestFunction::Radial(v) => Compact::Ball { radius: v.r0 },
            TestFunction::Green(v) => Compact::Level { t: v.t0 },
        }
    }

    /// Radial profile `r -> v(r)` when `v` is radial.
    pub fn profile(&self) -> Option<&RadialProfile> {
        match self {
            TestFunction::Radial(v) => Some(&v.profile),
            TestFunction::Green(_) => None,
        }
    }

    /// Value from the defining formula.
    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            TestFunction::Radial(v) => v.profile.value(norm(x)),
            TestFunction::Green(v) => match v.domain.green_value(x) {
                Ok(g) => v.q.value(g),
                Err(_) => f64::NAN,
            },
        }
    }

    /// Value at radius `r` along the positive first axis.
    pub fn value_at_radius(&self, r: f64) -> f64 {
        let x = polar_point(r, 0.0, self.dimension().get() as usize);
        self.value(&x)
    }

    /// `sup v`, attained at the boundary of `K`.
    pub fn sup(&self) -> f64 {
        match self {
            TestFunction::Radial(v) => v.profile.value(v.r0),
            TestFunction::Green(v) => v.q.value(v.t0),
        }
    }

    pub fn in_compact(&self, x: &[f64]) -> bool {
        match self {
            TestFunction::Radial(v) => norm(x) <= v.r0,
            TestFunction::Green(v) => v.domain.green_value(x).is_ok_and(|g| g >= v.t0),
        }
    }

    pub fn record(&self) -> TestFunctionRecord {
        match self {
            TestFunction::Radial(v) => TestFunctionRecord::Radial {
                density: v.density.clone(),
                r0: v.r0,
                outer: v.outer,
                m: v.m.get(),
                sup: self.sup(),
            },
            TestFunction::Green(v) => TestFunctionRecord::Green {
                q: v.q.describe(),
                domain: v.domain,
                t0: v.t0,
                sup: self.sup(),
            },
        }
    }
}

/// `v(x) = int_|x|^R d(t) t^(1-m) dt` for a decreasing `d >= 0`.
pub fn build_radial_testfn(
    d: &MonotoneDensity,
    r0: f64,
    outer: f64,
    m: Dimension,
) -> Result<TestFunction> {
    if !(r0 > 0.0 && r0.is_finite() && outer > r0) {
        return Err(Error::domain(format!(
            "need 0 < r0 < R, got r0 = {r0}, R = {outer}"
        )));
    }
    if d.direction() != Direction::Decreasing {
        return Err(Error::precondition(
            "radial test functions need a decreasing density",
        ));
    }
    d.validate_on(r0, outer)?;
    let k = 1.0 - m.as_f64();
    if outer.is_infinite() {
        let weight = Tail::exact(m.as_f64() - 1.0, 0.0);
        let status = d
            .tail(End::PosInfinity)
            .map(|t| classify_end(t.times(weight), End::PosInfinity));
        match status {
            Some(EndStatus::Converges) => {}
            Some(EndStatus::Diverges) => {
                return Err(Error::Construction(
                    "int_r0^inf d(t) t^(1-m) dt diverges, so v would be infinite".into(),
                ))
            }
            _ => return Err(Error::Construction(
                "cannot certify that int_r0^inf d(t) t^(1-m) dt is finite: density tail unknown"
                    .into(),
            )),
        }
    }
    let sup = d.integrate_weighted(k, r0, outer)?;
    if !sup.is_finite() {
        return Err(Error::Construction(format!(
            "int_r0^R d(t) t^(1-m) dt = {sup} is not finite"
        )));
    }
    let profile = RadialProfile::from_density_integral(
        d.clone(),
        m,
        outer,
        0.0,
        -1.0,
        Interval::radial(r0, outer)?,
    );
    Ok(TestFunction::Radial(RadialTestFunction {
        density: d.clone(),
        r0,
        outer,
        m,
        profile,
    }))
}

/// `v = q o g_D` outside the closed level set `{g >= t0}`, for convex
/// `q >= 0` with `q(0) = 0`.
pub fn green_superposition(
    q: &RadialProfile,
    domain: &ModelDomain,
    t0: f64,
    tol: f64,
) -> Result<TestFunction> {
    let domain = domain.validated()?;
    if domain.radius().is_infinite() {
        return Err(Error::domain("Green test functions need a bounded domain"));
    }
    if !(t0 > 0.0 && t0 < domain.green_sup()) {
        return Err(Error::domain(format!(
            "t0 = {t0} is not a proper level of g"
        )));
    }
    let qd = q.domain();
    if qd.lo > 0.0 || qd.hi < t0 {
        return Err(Error::domain(format!(
            "q is defined on ({}, {}) but is needed on [0, {t0})",
            qd.lo, qd.hi
        )));
    }
    let q0 = q.value(0.0);
    if !(q0.abs() <= tol) {
        return Err(Error::precondition(format!(
            "q(0) = {q0}, but the boundary values of q o g vanish only when q(0) = 0"
        )));
    }
    let mut warnings = Vec::new();
    let ts = cell_grid(0.0, t0, 513);
    let vals: Vec<f64> = ts.iter().map(|&t| q.value(t)).collect();
    let convex = check_convex_points(&ts, &vals, tol)?;
    let negative = ts.iter().zip(&vals).find(|(_, v)| **v < -tol);
    let mut problems = Vec::new();
    if let Some(v) = &convex.first_violation {
        problems.push(format!("q is not convex near t = {}", v.s[1]));
    }
    if let Some((t, v)) = negative {
        problems.push(format!("q({t}) = {v} is negative"));
    }
    if !problems.is_empty() {
        if q.is_sampled() {
            warnings.extend(problems);
        } else {
            return Err(Error::precondition(problems.join("; ")));
        }
    }
    Ok(TestFunction::Green(GreenTestFunction {
        q: q.restricted(Interval::new(qd.lo, qd.hi)?)?,
        domain,
        t0,
        warnings,
    }))
}

/// Samples `d(t) = -t^(m-1) v'_->(t)` at `radii` by difference quotients of
/// `v`; the last radius may be the outer end, where the left derivative
/// is used.
pub fn differentiate_profile(
    v: &RadialProfile,
    m: Dimension,
    radii: &[f64],
) -> Result<Vec<[f64; 2]>> {
    let sched = StepSchedule::default();
    let hi = v.domain().hi;
    radii
        .iter()
        .map(|&t| {
            let side = if t >= hi { Side::Left } else { Side::Right };
            let dv = v.numeric_derivative(t, side, &sched)?;
            Ok([t, -t.powi(m.get() as i32 - 1) * dv])
        })
        .collect()
}

/// Decreasing density of a radial test function recovered by
/// differentiation, projected onto monotone data.
pub fn recover_decreasing_density(
    v: &RadialProfile,
    m: Dimension,
    radii: &[f64],
) -> Result<MonotoneDensity> {
    project_monotone(&differentiate_profile(v, m, radii)?, Direction::Decreasing)
}

/// Density of the radial test function `v = g_D` on `B(R) \ B(r0)`,
/// obtained by differentiating `g_D` at `samples` radii.
pub fn green_derived_density(
    domain: &ModelDomain,
    r0: f64,
    samples: usize,
) -> Result<MonotoneDensity> {
    if !domain.has_center_pole() {
        return Err(Error::Unsupported(
            "a radial density exists only for a centre pole".into(),
        ));
    }
    let outer = domain.radius();
    if !(r0 > 0.0 && r0 < outer) {
        return Err(Error::domain(format!("r0 = {r0} must lie in (0, {outer})")));
    }
    let neg = domain.neg_green_profile()?;
    let g = RadialProfile::from_fn("g_D", Interval::radial(0.0, outer)?, move |r| -neg.value(r));
    let n = samples.max(2);
    let radii: Vec<f64> = (0..n)
        .map(|i| r0 + (outer - r0) * i as f64 / (n - 1) as f64)
        .collect();
    recover_decreasing_density(&g, domain.dimension(), &radii)
}

/// `v` continued by zero off `D`.
#[derive(Debug, Clone)]
pub struct ExtendedTestFunction {
    pub inner: TestFunction,
}

pub fn extend_by_zero(v: &TestFunction) -> ExtendedTestFunction {
    ExtendedTestFunction { inner: v.clone() }
}

impl ExtendedTestFunction {
    /// `v` on `D \ K`, `0` off `D`, `None` inside `K`.
    pub fn value(&self, x: &[f64]) -> Option<f64> {
        let d = self.inner.domain();
        if norm(x) >= d.radius() {
            return Some(0.0);
        }
        if self.inner.in_compact(x) {
            return None;
        }
        Some(self.inner.value(x))
    }

    /// Discrete Laplacian on a collar around `dD`, including points exactly
    /// on the boundary.
    pub fn collar_laplacian(&self, grid: &GridSpec, tol: f64) -> Result<LaplacianReport> {
        let d = self.inner.domain();
        let outer = d.radius();
        let dim = d.dimension().get() as usize;
        let f = |x: &[f64]| self.value(x).unwrap_or(f64::NAN);
        if outer.is_infinite() {
            return Ok(check_laplacian(&f, &[], |_| 1.0, tol));
        }
        let inner_edge = match self.inner.compact() {
            Compact::Ball { radius } => radius,
            Compact::Level { t } => (0..grid.angles.max(1))
                .map(|k| d.level_point(t, grid.angle(k)).map(|p| norm(&p)))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max),
        };
        let width = (0.05 * outer).min(0.5 * (outer - inner_edge));
        let h = (2e-3 * outer).min(0.25 * width);
        let mut points = Vec::new();
        let steps = 10;
        for i in -steps..=steps {
            let r = outer + width * i as f64 / steps as f64;
            for k in 0..grid.angles.max(1) {
                points.push(polar_point(r, grid.angle(k), dim));
            }
        }
        Ok(check_laplacian(&f, &points, |_| h, tol))
    }
}
