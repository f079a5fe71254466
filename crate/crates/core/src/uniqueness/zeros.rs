//! Zero sets and their counting functions.

use serde::{Deserialize, Serialize};

use crate::family::{CompiledFamily, Family};
use crate::green::ModelDomain;
use crate::quadrature::{integrate_improper_pieces, SimpsonOptions};
use crate::radial::Dimension;
use crate::tail::{End, Tail, TailMetadata};
use crate::{Error, Result};

fn one_u32() -> u32 {
    1
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZeroPoint {
    pub z: [f64; 2],
    #[serde(default = "one_u32")]
    pub multiplicity: u32,
}

impl ZeroPoint {
    pub fn modulus(&self) -> f64 {
        self.z[0].hypot(self.z[1])
    }
}

/// Which counting function sampled data describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Interpretation {
    /// `s_Z(r)`: measure of `Z` inside `B(r)`, increasing in `r`.
    Radial,
    /// `s_{Z,D}(t)`: measure of `Z` inside `D_t`, decreasing in `t`.
    Green,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountingSamples {
    pub samples: Vec<[f64; 2]>,
    pub interpretation: Interpretation,
    /// Behaviour at the end the samples do not reach.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<TailMetadata>,
}

/// A zero set, given by points (`n = 1`), by a sampled counting function,
/// or by the sequence `a_k = rho (1 - k^-gamma)`, `k = 1..count`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ZeroSet {
    Points {
        points: Vec<ZeroPoint>,
        /// Replaces the counting function computed from `points` on the
        /// integral side of the identity checks.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        counting_override: Option<CountingSamples>,
    },
    Counting {
        samples: Vec<[f64; 2]>,
        interpretation: Interpretation,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tail: Option<TailMetadata>,
    },
    Generator {
        gamma: f64,
        count: u32,
        #[serde(default = "one_u32")]
        multiplicity: u32,
        /// Defaults to the domain radius.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        radius: Option<f64>,
        /// Whether the sequence is read as infinite, with the counting tail
        /// `~ u^(-1/gamma)`, or as exactly `count` points.
        #[serde(default = "yes")]
        symbolic_tail: bool,
    },
}

impl ZeroSet {
    pub fn empty() -> ZeroSet {
        ZeroSet::Points {
            points: Vec::new(),
            counting_override: None,
        }
    }

    pub fn points(points: Vec<ZeroPoint>) -> ZeroSet {
        ZeroSet::Points {
            points,
            counting_override: None,
        }
    }

    /// Explicit points, if the zero set has them (generators expand).
    pub fn expand_points(&self, outer: f64) -> Result<Option<Vec<ZeroPoint>>> {
        match self {
            ZeroSet::Points { points, .. } => Ok(Some(points.clone())),
            ZeroSet::Counting { .. } => Ok(None),
            &ZeroSet::Generator {
                gamma,
                count,
                multiplicity,
                radius,
                ..
            } => {
                let rho = generator_radius(radius, outer)?;
                if !(gamma > 0.0 && gamma.is_finite()) {
                    return Err(Error::Config(format!(
                        "gamma must be positive, got {gamma}"
                    )));
                }
                if multiplicity == 0 {
                    return Err(Error::Config("multiplicity must be >= 1".into()));
                }
                Ok(Some(
                    (1..=count)
                        .map(|k| ZeroPoint {
                            z: [rho * (1.0 - (k as f64).powf(-gamma)), 0.0],
                            multiplicity,
                        })
                        .collect(),
                ))
            }
        }
    }

    pub fn is_generated_with_tail(&self) -> bool {
        matches!(
            self,
            ZeroSet::Generator {
                symbolic_tail: true,
                ..
            }
        )
    }

    pub fn has_point_data(&self) -> bool {
        !matches!(self, ZeroSet::Counting { .. })
    }

    fn check_planar(&self, m: Dimension) -> Result<()> {
        if self.has_point_data() && m.get() != 2 {
            return Err(Error::Unsupported(format!(
                "point zero sets are counted only for n = 1; supply s_Z as samples in R^{}",
                m.get()
            )));
        }
        Ok(())
    }

    /// `s_Z(r)` for the radial criterion on `B(outer)`.
    pub fn radial_counting(&self, m: Dimension, outer: f64) -> Result<Counting> {
        self.check_planar(m)?;
        match self {
            ZeroSet::Counting {
                samples,
                interpretation,
                tail,
            } => sampled_counting(samples, *interpretation, Interpretation::Radial, *tail),
            _ => {
                let points = self.expand_points(outer)?.unwrap_or_default();
                let mut jumps = Vec::with_capacity(points.len());
                for p in &points {
                    let r = p.modulus();
                    if !(r < outer) {
                        return Err(Error::domain(format!(
                            "zero {:?} is not inside B({outer})",
                            p.z
                        )));
                    }
                    jumps.push((r, p.multiplicity as f64));
                }
                let tail = match self {
                    &ZeroSet::Generator {
                        gamma,
                        symbolic_tail: true,
                        ..
                    } => Some(Tail::exact(-1.0 / gamma, 0.0)),
                    _ => None,
                };
                Ok(Counting::Step {
                    step: StepCounting::new(jumps, 0.0, true),
                    tail,
                })
            }
        }
    }

    /// `s_{Z,D}(t)` for the Green criterion.
    pub fn green_counting(&self, domain: &ModelDomain) -> Result<Counting> {
        self.check_planar(domain.dimension())?;
        match self {
            ZeroSet::Counting {
                samples,
                interpretation,
                tail,
            } => sampled_counting(samples, *interpretation, Interpretation::Green, *tail),
            _ => {
                let points = self.expand_points(domain.radius())?.unwrap_or_default();
                let mut jumps = Vec::with_capacity(points.len());
                let mut base = 0.0;
                for p in &points {
                    let g = domain.green_value(&p.z).map_err(|_| {
                        Error::domain(format!("zero {:?} is not inside the domain", p.z))
                    })?;
                    if g == 0.0 {
                        return Err(Error::domain(format!(
                            "zero {:?} lies on the boundary",
                            p.z
                        )));
                    }
                    base += p.multiplicity as f64;
                    if g.is_finite() {
                        jumps.push((g, p.multiplicity as f64));
                    }
                }
                let tail = match self {
                    &ZeroSet::Generator {
                        gamma,
                        symbolic_tail: true,
                        ..
                    } => Some(Tail::exact(-1.0 / gamma, 0.0)),
                    _ => None,
                };
                Ok(Counting::Step {
                    step: StepCounting::new(jumps, base, false),
                    tail,
                })
            }
        }
    }

    /// The counting function used on the integral side of identity checks.
    pub fn override_counting(&self, want: Interpretation) -> Result<Option<Counting>> {
        match self {
            ZeroSet::Points {
                counting_override: Some(c),
                ..
            } => Ok(Some(sampled_counting(
                &c.samples,
                c.interpretation,
                want,
                c.tail,
            )?)),
            _ => Ok(None),
        }
    }
}

fn generator_radius(radius: Option<f64>, outer: f64) -> Result<f64> {
    if outer.is_infinite() && radius.is_none() {
        return Err(Error::Config(
            "a generated zero sequence needs a finite radius".into(),
        ));
    }
    let rho = radius.unwrap_or(outer);
    if !(rho > 0.0 && rho.is_finite() && rho <= outer) {
        return Err(Error::Config(format!(
            "generator radius {rho} must be finite and in (0, {outer}]"
        )));
    }
    Ok(rho)
}

fn sampled_counting(
    samples: &[[f64; 2]],
    got: Interpretation,
    want: Interpretation,
    tail: Option<TailMetadata>,
) -> Result<Counting> {
    if got != want {
        return Err(Error::Config(format!(
            "counting samples are interpreted as {got:?} but the criterion needs {want:?}"
        )));
    }
    let f = Family::Samples {
        points: samples.to_vec(),
    }
    .compile()?;
    let ys: Vec<f64> = samples.iter().map(|p| p[1]).collect();
    let monotone = match want {
        Interpretation::Radial => ys.windows(2).all(|w| w[0] <= w[1]),
        Interpretation::Green => ys.windows(2).all(|w| w[0] >= w[1]),
    };
    if !monotone || ys.iter().any(|&y| y < 0.0) {
        return Err(Error::precondition(
            "counting samples must be nonnegative and monotone",
        ));
    }
    Ok(Counting::Sampled { f, tail })
}

/// Right-continuous step function with jumps of size `mult` at `pos`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepCounting {
    pos: Vec<f64>,
    cum: Vec<f64>,
    base: f64,
    increasing: bool,
}

impl StepCounting {
    pub fn new(mut jumps: Vec<(f64, f64)>, base: f64, increasing: bool) -> Self {
        jumps.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut pos = Vec::with_capacity(jumps.len());
        let mut cum = Vec::with_capacity(jumps.len());
        let mut acc = 0.0;
        for (p, m) in jumps {
            acc += m;
            if pos.last() == Some(&p) {
                *cum.last_mut().unwrap() = acc;
            } else {
                pos.push(p);
                cum.push(acc);
            }
        }
        StepCounting {
            pos,
            cum,
            base,
            increasing,
        }
    }

    fn jumped(&self, x: f64) -> f64 {
        let j = self.pos.partition_point(|&p| p <= x);
        if j == 0 {
            0.0
        } else {
            self.cum[j - 1]
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        if self.increasing {
            self.base + self.jumped(x)
        } else {
            self.base - self.jumped(x)
        }
    }

    pub fn jumps(&self) -> &[f64] {
        &self.pos
    }

    /// `sum_j s_j W(a_j, b_j)` over the constant pieces of `s` in `[lo, hi]`.
    pub fn integrate<W>(&self, weight_primitive: W, lo: f64, hi: f64) -> Result<f64>
    where
        W: Fn(f64, f64) -> Result<f64>,
    {
        if lo >= hi {
            return Ok(0.0);
        }
        let start = self.pos.partition_point(|&p| p <= lo);
        let end = self.pos.partition_point(|&p| p < hi);
        let mut total = 0.0;
        let mut a = lo;
        let mut s = self.value(lo);
        for j in start..end {
            let b = self.pos[j];
            if s != 0.0 {
                total += s * weight_primitive(a, b)?;
            }
            a = b;
            s = self.value(b);
        }
        if s != 0.0 {
            total += s * weight_primitive(a, hi)?;
        }
        Ok(total)
    }
}

/// Counting function in either representation.
#[derive(Debug, Clone, PartialEq)]
pub enum Counting {
    /// Exact step function from points; `tail` is set for generated
    /// sequences read as infinite.
    Step {
        step: StepCounting,
        tail: Option<Tail>,
    },
    /// Linear interpolation of samples.
    Sampled {
        f: CompiledFamily,
        tail: Option<TailMetadata>,
    },
}

/// Where a factor's tail comes from, deciding how a missing tail is treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Parametric,
    Sampled,
    Custom,
}

impl Counting {
    pub fn value(&self, x: f64) -> f64 {
        match self {
            Counting::Step { step, .. } => step.value(x),
            Counting::Sampled { f, .. } => f.value(x),
        }
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, Counting::Step { tail: Some(_), .. })
    }

    /// True when `s` vanishes on all of `(lo, hi)`.
    pub fn is_zero_on(&self, lo: f64, hi: f64) -> bool {
        match self {
            Counting::Step { step, tail } => {
                if tail.is_some() {
                    return false;
                }
                // Nonnegative and monotone: the supremum on (lo, hi) sits at
                // one end.
                let sup = if step.increasing {
                    let j = step.pos.partition_point(|&p| p < hi);
                    step.base + if j == 0 { 0.0 } else { step.cum[j - 1] }
                } else {
                    step.value(lo)
                };
                sup == 0.0
            }
            Counting::Sampled { f, .. } => f.is_zero(),
        }
    }

    /// Asymptotic class near `end` and where it came from.
    pub fn tail(&self, end: End) -> (Option<Tail>, Source) {
        match self {
            Counting::Step { step, tail } => {
                if let Some(t) = tail {
                    return (Some(*t), Source::Parametric);
                }
                let x = match end {
                    End::Origin => f64::MIN_POSITIVE,
                    End::Finite(e) => e,
                    End::PosInfinity => f64::MAX,
                    End::NegInfinity => f64::MIN,
                };
                // Finitely many points: s is eventually constant at the end.
                let near = match end {
                    End::Finite(e) if step.increasing => {
                        let j = step.pos.partition_point(|&p| p < e);
                        if j == 0 {
                            step.base
                        } else {
                            step.base + step.cum[j - 1]
                        }
                    }
                    _ => step.value(x),
                };
                let t = if near == 0.0 {
                    Tail::Zero
                } else {
                    Tail::ORDER_ONE
                };
                (Some(t), Source::Parametric)
            }
            Counting::Sampled { f, tail } => {
                let covered = f.tail(end);
                match (covered, tail) {
                    (Some(t), _) => (Some(t), Source::Sampled),
                    (None, Some(meta)) => (Some(meta.to_tail(end)), Source::Sampled),
                    (None, None) => (None, Source::Sampled),
                }
            }
        }
    }

    /// `int_lo^hi s(x) w(x) dx`, exactly for step data through the
    /// primitive `W`, by quadrature for samples.
    pub fn integrate<F, W>(
        &self,
        weight: F,
        weight_primitive: W,
        lo: f64,
        hi: f64,
        weight_breaks: &[f64],
        opts: &SimpsonOptions,
    ) -> Result<f64>
    where
        F: Fn(f64, f64) -> f64,
        W: Fn(f64, f64) -> Result<f64>,
    {
        match self {
            Counting::Step { step, .. } => step.integrate(weight_primitive, lo, hi),
            Counting::Sampled { f, .. } => {
                let mut breaks: Vec<f64> =
                    f.breaks().iter().chain(weight_breaks).copied().collect();
                breaks.sort_by(f64::total_cmp);
                integrate_improper_pieces(
                    |x, mid| f.value(x) * weight(x, mid),
                    lo,
                    hi,
                    &breaks,
                    opts,
                )
            }
        }
    }
}

/// `s_Z(r)` at each radius for a point zero set (`n = 1`).
pub fn counting_function_points(z: &ZeroSet, m: Dimension, radii: &[f64]) -> Result<Vec<f64>> {
    if !z.has_point_data() {
        return Err(Error::Unsupported("zero set has no points".into()));
    }
    let c = z.radial_counting(m, f64::INFINITY)?;
    Ok(radii.iter().map(|&r| c.value(r)).collect())
}

/// `s_{Z,D}(t)`: points with `g_D(a) > t`, with multiplicity.
pub fn green_counting(z: &ZeroSet, domain: &ModelDomain, t: f64) -> Result<f64> {
    Ok(z.green_counting(domain)?.value(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane() -> Dimension {
        Dimension::new(2).unwrap()
    }

    fn pt(x: f64, m: u32) -> ZeroPoint {
        ZeroPoint {
            z: [x, 0.0],
            multiplicity: m,
        }
    }

    #[test]
    fn radial_counting_examples() {
        let none = ZeroSet::empty();
        assert_eq!(
            counting_function_points(&none, plane(), &[0.3, 0.9]).unwrap(),
            vec![0.0, 0.0]
        );
        let z = ZeroSet::points(vec![pt(0.5, 2), pt(-0.8, 1)]);
        assert_eq!(
            counting_function_points(&z, plane(), &[0.6, 0.9]).unwrap(),
            vec![2.0, 3.0]
        );
    }

    #[test]
    fn harmonic_generator_counts_floor() {
        let z = ZeroSet::Generator {
            gamma: 1.0,
            count: 50,
            multiplicity: 1,
            radius: Some(1.0),
            symbolic_tail: true,
        };
        let c = z.radial_counting(plane(), 1.0).unwrap();
        for r in [0.0f64, 0.3, 0.55, 0.9, 0.97, 0.99] {
            let expect = ((1.0 / (1.0 - r)).floor()).min(50.0);
            assert_eq!(c.value(r), expect, "r = {r}");
        }
    }

    #[test]
    fn green_counting_examples() {
        let disk = ModelDomain::disk(1.0, [0.0, 0.0]).unwrap();
        let z = ZeroSet::points(vec![pt(0.5, 1)]);
        assert_eq!(green_counting(&z, &disk, 0.5).unwrap(), 1.0);
        assert_eq!(green_counting(&z, &disk, 0.7).unwrap(), 0.0);
        assert_eq!(green_counting(&z, &disk, 5.0).unwrap(), 0.0);
    }

    #[test]
    fn points_need_the_plane() {
        let z = ZeroSet::points(vec![pt(0.5, 1)]);
        assert!(matches!(
            z.radial_counting(Dimension::new(4).unwrap(), 1.0),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn step_integral_is_exact() {
        let s = StepCounting::new(vec![(1.5, 1.0), (1.2, 2.0)], 0.0, true);
        // int_1^2 s(r) dr = 2 * 0.3 + 3 * 0.5
        let v = s.integrate(|a, b| Ok(b - a), 1.0, 2.0).unwrap();
        assert!((v - 2.1).abs() < 1e-15);
    }

    #[test]
    fn serde_shapes() {
        let z: ZeroSet =
            serde_json::from_str(r#"{"kind":"generator","gamma":1.5,"count":100}"#).unwrap();
        assert!(z.is_generated_with_tail());
        let z: ZeroSet = serde_json::from_str(
            r#"{"kind":"points","points":[{"z":[0.5,0.0],"multiplicity":2}]}"#,
        )
        .unwrap();
        assert_eq!(z.expand_points(1.0).unwrap().unwrap()[0].multiplicity, 2);
    }
}
