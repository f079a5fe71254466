//! The radial and Green uniqueness criteria.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::family::Side;
use crate::green::ModelDomain;
use crate::quadrature::{integrate_improper_pieces, SimpsonOptions};
use crate::radial::{Dimension, MonotoneDensity, ProfileDescriptor, RadialProfile};
use crate::tail::{End, Tail};
use crate::testfn::GrowthEnvelope;
use crate::uniqueness::classify::{
    classify, product_tail, ClassifyOptions, DivergenceVerdict, Problem,
};
use crate::uniqueness::zeros::{Counting, Source, ZeroSet};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CriterionOptions {
    pub classify: ClassifyOptions,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for CriterionOptions {
    fn default() -> Self {
        CriterionOptions {
            classify: ClassifyOptions::default(),
            abs_tol: 1e-10,
            rel_tol: 1e-10,
        }
    }
}

impl CriterionOptions {
    fn simpson(&self) -> SimpsonOptions {
        SimpsonOptions {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            ..SimpsonOptions::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriterionMode {
    Radial,
    Green,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ForcedZero,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub mode: CriterionMode,
    pub mass_integral: DivergenceVerdict,
    pub zero_integral: DivergenceVerdict,
    pub verdict: Verdict,
    /// Set when an unknown classification could have changed the verdict.
    pub unknown: bool,
    pub notes: Vec<String>,
    pub inputs: Value,
}

/// Forced zero iff the mass integral converges and the zero integral
/// diverges; the flag marks an unknown that blocks that conclusion.
pub fn combine_verdict(mass: &DivergenceVerdict, zero: &DivergenceVerdict) -> (Verdict, bool) {
    let verdict = if mass.is_convergent() && zero.is_divergent() {
        Verdict::ForcedZero
    } else {
        Verdict::Inconclusive
    };
    let unknown =
        (mass.is_unknown() && !zero.is_convergent()) || (zero.is_unknown() && !mass.is_divergent());
    (verdict, unknown)
}

fn ext(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn profile_source(q: &RadialProfile) -> Source {
    if q.is_sampled() {
        return Source::Sampled;
    }
    if q.is_parametric() {
        return Source::Parametric;
    }
    match q.describe() {
        ProfileDescriptor::DensityIntegral { .. } | ProfileDescriptor::Kelvin { .. } => {
            Source::Sampled
        }
        _ => Source::Custom,
    }
}

fn density_source(d: &MonotoneDensity) -> Source {
    if d.is_parametric() {
        Source::Parametric
    } else {
        Source::Sampled
    }
}

fn merged(mut a: Vec<f64>, b: &[f64]) -> Vec<f64> {
    a.extend_from_slice(b);
    a.sort_by(f64::total_cmp);
    a.dedup();
    a
}

/// Side on which to read a piecewise factor so that it matches the open
/// piece containing `x`.
fn side_in_piece(x: f64, mid: f64) -> Side {
    if x >= mid {
        Side::Left
    } else {
        Side::Right
    }
}

fn check_radial_range(d: &MonotoneDensity, r0: f64, outer: f64) -> Result<()> {
    if !(r0 > 0.0 && r0 < outer && r0.is_finite()) {
        return Err(Error::domain(format!(
            "need 0 < r0 < R, got r0 = {r0}, R = {outer}"
        )));
    }
    if r0 < d.domain_start() {
        return Err(Error::domain(format!(
            "density is defined from t = {}, but r0 = {r0}",
            d.domain_start()
        )));
    }
    Ok(())
}

/// `int_r0^R d(r) q'_->(r) dr`.
pub fn radial_mass_integral(
    d: &MonotoneDensity,
    q: &RadialProfile,
    r0: f64,
    outer: f64,
    opts: &CriterionOptions,
) -> Result<DivergenceVerdict> {
    check_radial_range(d, r0, outer)?;
    let end = End::of(outer);
    let tail = product_tail(&[
        ("density", d.tail(end), density_source(d)),
        ("growth profile", q.derivative_tail(end), profile_source(q)),
    ]);
    let breaks = merged(q.breaks(), d.breaks());
    let sopts = opts.simpson();
    let partial = |c: f64| {
        integrate_improper_pieces(
            |r, mid| match q.derivative(r, side_in_piece(r, mid)) {
                Ok(dq) => d.value(r) * dq,
                Err(_) => f64::NAN,
            },
            r0,
            c,
            &breaks,
            &sopts,
        )
    };
    Ok(classify(
        &Problem {
            fixed: r0,
            open: outer,
            zero: d.is_zero() || q.derivative_is_zero(),
            tail,
            partial: &partial,
        },
        &opts.classify,
    ))
}

/// `int_r0^R d(r) s_Z(r) r^(1-2n) dr`.
pub fn radial_zero_integral(
    d: &MonotoneDensity,
    s: &Counting,
    r0: f64,
    outer: f64,
    n: u32,
    opts: &CriterionOptions,
) -> Result<DivergenceVerdict> {
    check_radial_range(d, r0, outer)?;
    let k = 1.0 - 2.0 * n as f64;
    let end = End::of(outer);
    let weight_tail = match end {
        End::PosInfinity => Tail::exact(-k, 0.0),
        _ => Tail::ORDER_ONE,
    };
    let (s_tail, s_source) = s.tail(end);
    let tail = product_tail(&[
        ("density", d.tail(end), density_source(d)),
        ("counting", s_tail, s_source),
        ("weight", Some(weight_tail), Source::Parametric),
    ]);
    let sopts = opts.simpson();
    let partial = |c: f64| {
        s.integrate(
            |r, _| d.value(r) * r.powf(k),
            |a, b| d.integrate_weighted(k, a, b),
            r0,
            c,
            d.breaks(),
            &sopts,
        )
    };
    Ok(classify(
        &Problem {
            fixed: r0,
            open: outer,
            zero: d.is_zero() || s.is_zero_on(r0, outer),
            tail,
            partial: &partial,
        },
        &opts.classify,
    ))
}

fn check_level(t0: f64) -> Result<()> {
    if !(t0 > 0.0 && t0.is_finite()) {
        return Err(Error::domain(format!(
            "t0 must be positive and finite, got {t0}"
        )));
    }
    Ok(())
}

/// `int_0^t0 q'_->(t) F'_->(-t) dt`.
pub fn green_mass_integral(
    q: &RadialProfile,
    f: &RadialProfile,
    t0: f64,
    opts: &CriterionOptions,
) -> Result<DivergenceVerdict> {
    check_level(t0)?;
    let tail = product_tail(&[
        ("q", q.derivative_tail(End::Origin), profile_source(q)),
        ("F", f.derivative_tail(End::Origin), profile_source(f)),
    ]);
    let f_breaks: Vec<f64> = f.breaks().iter().map(|s| -s).collect();
    let breaks = merged(q.breaks(), &f_breaks);
    let sopts = opts.simpson();
    let partial = |c: f64| {
        integrate_improper_pieces(
            |t, mid| {
                let side = side_in_piece(t, mid);
                let flipped = match side {
                    Side::Left => Side::Right,
                    Side::Right => Side::Left,
                };
                match (q.derivative(t, side), f.derivative(-t, flipped)) {
                    (Ok(a), Ok(b)) => a * b,
                    _ => f64::NAN,
                }
            },
            c,
            t0,
            &breaks,
            &sopts,
        )
    };
    Ok(classify(
        &Problem {
            fixed: t0,
            open: 0.0,
            zero: q.derivative_is_zero() || f.derivative_is_zero(),
            tail,
            partial: &partial,
        },
        &opts.classify,
    ))
}

/// `int_0^t0 q'_->(t) s_{Z,D}(t) dt`.
pub fn green_zero_integral(
    q: &RadialProfile,
    s: &Counting,
    t0: f64,
    opts: &CriterionOptions,
) -> Result<DivergenceVerdict> {
    check_level(t0)?;
    let (s_tail, s_source) = s.tail(End::Origin);
    let tail = product_tail(&[
        ("q", q.derivative_tail(End::Origin), profile_source(q)),
        ("counting", s_tail, s_source),
    ]);
    let sopts = opts.simpson();
    let q_breaks = q.breaks();
    let partial = |c: f64| {
        s.integrate(
            |t, mid| q.derivative(t, side_in_piece(t, mid)).unwrap_or(f64::NAN),
            |a, b| Ok(q.value(b) - q.value(a)),
            c,
            t0,
            &q_breaks,
            &sopts,
        )
    };
    Ok(classify(
        &Problem {
            fixed: t0,
            open: 0.0,
            zero: q.derivative_is_zero() || s.is_zero_on(0.0, t0),
            tail,
            partial: &partial,
        },
        &opts.classify,
    ))
}

const MULTIPLICITY_NOTE: &str =
    "zero multiplicities are counted in s_Z; a set of zeros without multiplicity only weakens the hypothesis";

fn finish(
    mode: CriterionMode,
    mass: DivergenceVerdict,
    zero: DivergenceVerdict,
    mut notes: Vec<String>,
    inputs: Value,
) -> CriterionReport {
    let (verdict, unknown) = combine_verdict(&mass, &zero);
    if mass.is_divergent() {
        notes.push("mass integral diverges: the criterion does not apply".into());
    }
    CriterionReport {
        mode,
        mass_integral: mass,
        zero_integral: zero,
        verdict,
        unknown,
        notes,
        inputs,
    }
}

fn zero_notes(z: &ZeroSet, counting: &Counting) -> Vec<String> {
    let mut notes = Vec::new();
    if z.has_point_data() {
        notes.push(MULTIPLICITY_NOTE.into());
    }
    if counting.is_symbolic() {
        notes.push(
            "generated sequence read as infinite: divergence is decided by its tail; a convergent value is the truncated sum"
                .into(),
        );
    }
    notes
}

/// The radial criterion on `B(R)` in `C^n`.
pub fn radial_verdict(
    envelope: &GrowthEnvelope,
    d: &MonotoneDensity,
    z: &ZeroSet,
    r0: f64,
    outer: f64,
    n: u32,
    opts: &CriterionOptions,
) -> Result<CriterionReport> {
    let m = Dimension::complex(n)?;
    let q = match envelope {
        GrowthEnvelope::Radial { q, m: em, .. } if *em == m => q,
        GrowthEnvelope::Radial { m: em, .. } => {
            return Err(Error::precondition(format!(
                "envelope is radial in R^{} but n = {n} needs R^{}",
                em.get(),
                m.get()
            )))
        }
        _ => {
            return Err(Error::precondition(
                "radial criterion needs a radial envelope",
            ))
        }
    };
    let s = z.radial_counting(m, outer)?;
    let mass = radial_mass_integral(d, q, r0, outer, opts)?;
    let zero = radial_zero_integral(d, &s, r0, outer, n, opts)?;
    let inputs = json!({
        "envelope": q.describe(),
        "density": d.descriptor(),
        "zero_set": z,
        "r0": r0,
        "R": ext(outer),
        "n": n,
    });
    Ok(finish(
        CriterionMode::Radial,
        mass,
        zero,
        zero_notes(z, &s),
        inputs,
    ))
}

/// The Green criterion on a model domain.
pub fn green_verdict(
    envelope: &GrowthEnvelope,
    q: &RadialProfile,
    z: &ZeroSet,
    domain: &ModelDomain,
    t0: f64,
    opts: &CriterionOptions,
) -> Result<CriterionReport> {
    let f = match envelope {
        GrowthEnvelope::Green { f, .. } => f,
        _ => {
            return Err(Error::precondition(
                "Green criterion needs an envelope F o (-g)",
            ))
        }
    };
    let domain = domain.validated()?;
    let q0 = q.value(0.0);
    if q0.abs() > 1e-12 {
        return Err(Error::precondition(format!("q(0) = {q0} must vanish")));
    }
    let s = z.green_counting(&domain)?;
    let mass = green_mass_integral(q, f, t0, opts)?;
    let zero = green_zero_integral(q, &s, t0, opts)?;
    let inputs = json!({
        "F": f.describe(),
        "q": q.describe(),
        "zero_set": z,
        "domain": domain,
        "t0": t0,
    });
    Ok(finish(
        CriterionMode::Green,
        mass,
        zero,
        zero_notes(z, &s),
        inputs,
    ))
}
