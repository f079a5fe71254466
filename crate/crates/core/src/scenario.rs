//! JSON scenario files: the inputs of one CLI run.
//!
//! ```json
//! {
//!   "domain": {"kind": "disk", "radius": 1.0, "pole": [0.0, 0.0]},
//!   "green": {"F": {"family": "constant", "value": 0.0},
//!             "q": {"family": "power", "coef": 1.0, "exponent": 1.0}},
//!   "zero_set": {"kind": "generator", "gamma": 1.0, "count": 100000}
//! }
//! ```

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::family::Family;
use crate::green::ModelDomain;
use crate::radial::{DensityDescriptor, Dimension, Interval, MonotoneDensity, RadialProfile};
use crate::testfn::{
    build_radial_testfn, green_derived_density, green_superposition, growth_envelope_green,
    growth_envelope_radial, Compact, GrowthEnvelope, TestFunction, ValidationOptions,
};
use crate::uniqueness::{ClassifyOptions, CriterionMode, CriterionOptions, IbpTolerances, ZeroSet};
use crate::{Error, Result};

fn default_delta() -> f64 {
    1e-6
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Criterion used when the command line does not choose one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<CriterionMode>,
    /// Optional cross-check of the dimension implied by `domain`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<DimensionSpec>,
    pub domain: ModelDomain,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radial: Option<RadialBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub green: Option<GreenBlock>,
    #[serde(default = "ZeroSet::empty")]
    pub zero_set: ZeroSet,
    #[serde(default)]
    pub tolerances: Tolerances,
}

/// Inputs of the radial criterion on `B(R)`, `R` the domain radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadialBlock {
    /// Growth profile, `M(x) = q(|x|)`.
    pub q: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<DensitySpec>,
    /// A radial profile `v(|x|)` to validate in place of the test function
    /// built from `density`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate: Option<Family>,
    /// Defaults to `R / 2`, or `1` when `R` is infinite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r0: Option<f64>,
}

/// Inputs of the Green criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GreenBlock {
    /// Growth profile on `(-inf, 0)`, `M = F o (-g_D)`.
    #[serde(rename = "F")]
    pub f: Family,
    /// Convex profile with `q(0) = 0`.
    pub q: Family,
    /// Defaults to `1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    /// Inner truncation of the mass identity check.
    #[serde(default = "default_delta")]
    pub delta: f64,
}

/// Real dimension `m`, or complex dimension `n` with `m = 2n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DimensionSpec {
    M(u32),
    N(u32),
}

impl DimensionSpec {
    pub fn real(self) -> Result<Dimension> {
        match self {
            DimensionSpec::M(m) => Dimension::new(m),
            DimensionSpec::N(n) => Dimension::complex(n),
        }
    }
}

/// A decreasing density, given directly or read off `v = g_D`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DensitySpec {
    GreenDerived {},
    #[serde(untagged)]
    Explicit(DensityDescriptor),
}

/// Numerical tolerances; every field can be overridden by `KEY=VALUE`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub validation: f64,
    pub convexity: f64,
    pub laplacian: f64,
    pub quad_abs: f64,
    pub quad_rel: f64,
    pub trace_points: usize,
    pub growth_ratio: f64,
    pub growth_steps: usize,
    pub ibp_points: f64,
    pub ibp_smooth: f64,
    pub density_samples: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            validation: 1e-9,
            convexity: 1e-9,
            laplacian: 1e-9,
            quad_abs: 1e-10,
            quad_rel: 1e-10,
            trace_points: 24,
            growth_ratio: 1.05,
            growth_steps: 5,
            ibp_points: 1e-12,
            ibp_smooth: 1e-8,
            density_samples: 257,
        }
    }
}

/// One `KEY=VALUE` tolerance override.
#[derive(Debug, Clone, PartialEq)]
pub struct Override {
    pub key: String,
    pub value: serde_json::Value,
}

impl FromStr for Override {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (key, val) = s
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override {s:?} is not KEY=VALUE")))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::Config(format!("override {s:?} has an empty key")));
        }
        let value: serde_json::Value = serde_json::from_str(val.trim())
            .map_err(|e| Error::Config(format!("override {key}: {e}")))?;
        if !value.is_number() {
            return Err(Error::Config(format!(
                "override {key}: value must be a number"
            )));
        }
        Ok(Override {
            key: key.to_string(),
            value,
        })
    }
}

impl Tolerances {
    pub fn apply(&self, overrides: &[Override]) -> Result<Tolerances> {
        let mut obj = serde_json::to_value(self).map_err(|e| Error::Config(e.to_string()))?;
        let map = obj
            .as_object_mut()
            .expect("tolerances serialize to an object");
        for o in overrides {
            match map.get_mut(&o.key) {
                Some(slot) => *slot = o.value.clone(),
                None => {
                    let known: Vec<&str> = map.keys().map(String::as_str).collect();
                    return Err(Error::Config(format!(
                        "unknown tolerance {:?}; known: {}",
                        o.key,
                        known.join(", ")
                    )));
                }
            }
        }
        let t: Tolerances =
            serde_json::from_value(obj).map_err(|e| Error::Config(format!("override: {e}")))?;
        t.check()?;
        Ok(t)
    }

    pub fn check(&self) -> Result<()> {
        let positive = [
            ("validation", self.validation),
            ("convexity", self.convexity),
            ("laplacian", self.laplacian),
            ("quad_abs", self.quad_abs),
            ("quad_rel", self.quad_rel),
            ("ibp_points", self.ibp_points),
            ("ibp_smooth", self.ibp_smooth),
        ];
        for (k, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!(
                    "tolerance {k} must be positive, got {v}"
                )));
            }
        }
        if !(self.growth_ratio > 1.0 && self.growth_ratio.is_finite()) {
            return Err(Error::Config("growth_ratio must exceed 1".into()));
        }
        if self.trace_points == 0 || self.trace_points > 60 {
            return Err(Error::Config("trace_points must be in 1..=60".into()));
        }
        if self.growth_steps == 0 || self.growth_steps >= self.trace_points {
            return Err(Error::Config(
                "growth_steps must be in 1..trace_points".into(),
            ));
        }
        if self.density_samples < 2 || self.density_samples > 1_000_000 {
            return Err(Error::Config(
                "density_samples must be in 2..=1000000".into(),
            ));
        }
        Ok(())
    }

    pub fn criterion(&self) -> CriterionOptions {
        CriterionOptions {
            classify: ClassifyOptions {
                trace_points: self.trace_points,
                growth_ratio: self.growth_ratio,
                growth_steps: self.growth_steps,
            },
            abs_tol: self.quad_abs,
            rel_tol: self.quad_rel,
        }
    }

    pub fn ibp(&self) -> IbpTolerances {
        IbpTolerances {
            points: self.ibp_points,
            smooth: self.ibp_smooth,
        }
    }

    pub fn validation_options(&self) -> ValidationOptions {
        ValidationOptions {
            tol: self.validation,
            convexity_tol: self.convexity,
            laplacian_tol: self.laplacian,
            ..ValidationOptions::default()
        }
    }
}

fn json_error(e: serde_path_to_error::Error<serde_json::Error>) -> Error {
    let path = e.path().to_string();
    let inner = e.into_inner();
    if path.is_empty() || path == "." {
        Error::Config(inner.to_string())
    } else {
        Error::Config(format!("{path}: {inner}"))
    }
}

/// Parses a scenario, reporting the JSON path and line of the first error.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let mut de = serde_json::Deserializer::from_str(text);
    let s: Scenario = serde_path_to_error::deserialize(&mut de).map_err(json_error)?;
    de.end().map_err(|e| Error::Config(e.to_string()))?;
    s.tolerances.check()?;
    if let Some(d) = s.dimension {
        let m = d.real()?;
        if m != s.domain.dimension() {
            return Err(Error::Config(format!(
                "dimension: m = {} does not match the domain, which lives in R^{}",
                m.get(),
                s.domain.dimension().get()
            )));
        }
    }
    Ok(s)
}

/// Parses and compiles a single family descriptor.
pub fn parse_family(text: &str) -> Result<Family> {
    let mut de = serde_json::Deserializer::from_str(text);
    let f: Family = serde_path_to_error::deserialize(&mut de).map_err(json_error)?;
    de.end().map_err(|e| Error::Config(e.to_string()))?;
    f.compile()?;
    Ok(f)
}

/// Parses a list of `KEY=VALUE` overrides and applies them to the defaults.
pub fn parse_overrides<S: AsRef<str>>(items: &[S]) -> Result<Tolerances> {
    let parsed: Vec<Override> = items
        .iter()
        .map(|s| s.as_ref().parse())
        .collect::<Result<_>>()?;
    Tolerances::default().apply(&parsed)
}

/// Resolved inputs of the radial criterion.
#[derive(Debug, Clone)]
pub struct RadialSetup {
    pub envelope: GrowthEnvelope,
    pub density: MonotoneDensity,
    pub r0: f64,
    pub outer: f64,
    pub m: Dimension,
}

impl RadialSetup {
    /// Complex dimension `n` with `m = 2n`.
    pub fn n(&self) -> Result<u32> {
        self.m.complex_dim().ok_or_else(|| {
            Error::Unsupported(format!(
                "the radial criterion needs an even real dimension, got m = {}",
                self.m.get()
            ))
        })
    }
}

/// Resolved inputs of the Green criterion.
#[derive(Debug, Clone)]
pub struct GreenSetup {
    pub envelope: GrowthEnvelope,
    pub q: RadialProfile,
    pub domain: ModelDomain,
    pub t0: f64,
    pub delta: f64,
}

impl Scenario {
    /// Mode chosen by the file, else the only criterion block present,
    /// radial first.
    pub fn default_mode(&self) -> Result<CriterionMode> {
        if let Some(m) = self.mode {
            return Ok(m);
        }
        match (&self.radial, &self.green) {
            (Some(_), _) => Ok(CriterionMode::Radial),
            (None, Some(_)) => Ok(CriterionMode::Green),
            (None, None) => Err(Error::Config(
                "scenario has neither a radial nor a green block".into(),
            )),
        }
    }

    fn radial_block(&self) -> Result<&RadialBlock> {
        self.radial
            .as_ref()
            .ok_or_else(|| Error::Config("radial mode needs a `radial` block".into()))
    }

    fn green_block(&self) -> Result<&GreenBlock> {
        self.green
            .as_ref()
            .ok_or_else(|| Error::Config("green mode needs a `green` block".into()))
    }

    pub fn r0(&self) -> Result<f64> {
        let outer = self.domain.radius();
        let r0 =
            self.radial_block()?
                .r0
                .unwrap_or(if outer.is_finite() { 0.5 * outer } else { 1.0 });
        Ok(r0)
    }

    pub fn t0(&self) -> Result<f64> {
        Ok(self.green_block()?.t0.unwrap_or(1.0))
    }

    pub fn radial_density(&self) -> Result<MonotoneDensity> {
        let block = self.radial_block()?;
        let r0 = self.r0()?;
        let density = block
            .density
            .as_ref()
            .ok_or_else(|| Error::Config("radial.density is required here".into()))?;
        match density {
            DensitySpec::GreenDerived {} => {
                green_derived_density(&self.domain, r0, self.tolerances.density_samples)
            }
            DensitySpec::Explicit(desc) => MonotoneDensity::try_from(desc.clone()),
        }
    }

    pub fn radial_setup(&self) -> Result<RadialSetup> {
        let block = self.radial_block()?;
        if !self.domain.has_center_pole() {
            return Err(Error::Unsupported(
                "the radial criterion needs a ball centred at the pole".into(),
            ));
        }
        let m = self.domain.dimension();
        let outer = self.domain.radius();
        let q = RadialProfile::from_family(block.q.clone(), Interval::radial(0.0, outer)?)?;
        let envelope = growth_envelope_radial(&q, m, self.tolerances.convexity)?;
        Ok(RadialSetup {
            envelope,
            density: self.radial_density()?,
            r0: self.r0()?,
            outer,
            m,
        })
    }

    pub fn green_setup(&self) -> Result<GreenSetup> {
        let block = self.green_block()?;
        let domain = self.domain.validated()?;
        let f =
            RadialProfile::from_family(block.f.clone(), Interval::new(f64::NEG_INFINITY, 0.0)?)?;
        let q = RadialProfile::from_family(block.q.clone(), Interval::new(0.0, f64::INFINITY)?)?;
        let envelope = growth_envelope_green(&f, &domain, self.tolerances.convexity)?;
        Ok(GreenSetup {
            envelope,
            q,
            domain,
            t0: self.t0()?,
            delta: block.delta,
        })
    }

    /// The radial candidate profile on `(r0, R)`, if one is given.
    pub fn candidate(&self) -> Result<Option<(RadialProfile, Compact)>> {
        let Some(block) = &self.radial else {
            return Ok(None);
        };
        let Some(f) = &block.candidate else {
            return Ok(None);
        };
        let r0 = self.r0()?;
        let p =
            RadialProfile::from_family(f.clone(), Interval::radial(0.0, self.domain.radius())?)?;
        Ok(Some((p, Compact::Ball { radius: r0 })))
    }

    /// The test function of the chosen criterion together with its compact.
    pub fn test_function(&self, mode: CriterionMode) -> Result<(TestFunction, Compact)> {
        match mode {
            CriterionMode::Radial => {
                let r0 = self.r0()?;
                let outer = self.domain.radius();
                let d = self.radial_density()?;
                let v = build_radial_testfn(&d, r0, outer, self.domain.dimension())?;
                Ok((v, Compact::Ball { radius: r0 }))
            }
            CriterionMode::Green => {
                let block = self.green_block()?;
                let t0 = self.t0()?;
                let q = RadialProfile::from_family(
                    block.q.clone(),
                    Interval::new(0.0, f64::INFINITY)?,
                )?;
                let v = green_superposition(&q, &self.domain, t0, self.tolerances.validation)?;
                Ok((v, Compact::Level { t: t0 }))
            }
        }
    }
}
