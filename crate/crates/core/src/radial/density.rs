//! Monotone densities: the decreasing `d` behind radial test functions and
//! the increasing `p0` behind convex-of-`h` profiles.

use serde::{Deserialize, Serialize};

use crate::quadrature::{integrate_improper, SimpsonOptions};
use crate::tail::{End, Tail, TailMetadata};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Increasing,
    Decreasing,
}

impl Direction {
    fn ordered(self, a: f64, b: f64) -> bool {
        match self {
            Direction::Increasing => a <= b,
            Direction::Decreasing => a >= b,
        }
    }
}

fn decreasing() -> Direction {
    Direction::Decreasing
}

/// Serialized form of a [`MonotoneDensity`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DensityDescriptor {
    /// Piecewise-linear through `points`, constant outside them. `tail`
    /// describes the behaviour past the last sample when that matters.
    Samples {
        #[serde(default = "decreasing")]
        direction: Direction,
        points: Vec<[f64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tail: Option<TailMetadata>,
    },
    /// `c * t^-alpha * (log t)^-beta`.
    Parametric {
        #[serde(default = "decreasing")]
        direction: Direction,
        c: f64,
        alpha: f64,
        #[serde(default)]
        beta: f64,
    },
    /// Shorthand for a parametric density with `alpha = beta = 0`.
    Constant {
        #[serde(default = "decreasing")]
        direction: Direction,
        value: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Linear { xs: Vec<f64>, ys: Vec<f64> },
    Parametric { c: f64, alpha: f64, beta: f64 },
}

/// A monotone function of `t > 0`, validated at construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityDescriptor", into = "DensityDescriptor")]
pub struct MonotoneDensity {
    direction: Direction,
    repr: Repr,
    tail: Option<TailMetadata>,
}

impl TryFrom<DensityDescriptor> for MonotoneDensity {
    type Error = Error;

    fn try_from(d: DensityDescriptor) -> Result<Self> {
        match d {
            DensityDescriptor::Samples {
                direction,
                points,
                tail,
            } => {
                let mut out = MonotoneDensity::from_samples(&points, direction)?;
                out.tail = tail;
                Ok(out)
            }
            DensityDescriptor::Parametric {
                direction,
                c,
                alpha,
                beta,
            } => MonotoneDensity::parametric(c, alpha, beta, direction),
            DensityDescriptor::Constant { direction, value } => {
                MonotoneDensity::parametric(value, 0.0, 0.0, direction)
            }
        }
    }
}

impl From<MonotoneDensity> for DensityDescriptor {
    fn from(d: MonotoneDensity) -> Self {
        d.descriptor()
    }
}

fn split_points(points: &[[f64; 2]]) -> Result<(Vec<f64>, Vec<f64>)> {
    if points.is_empty() {
        return Err(Error::InsufficientData(
            "density needs at least one sample".into(),
        ));
    }
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for p in points {
        if !(p[0].is_finite() && p[1].is_finite()) {
            return Err(Error::Config(format!("non-finite density sample {p:?}")));
        }
        if !(p[0] > 0.0) {
            return Err(Error::domain(format!(
                "density abscissa must be positive, got {}",
                p[0]
            )));
        }
        if let Some(&last) = xs.last() {
            if p[0] <= last {
                return Err(Error::Config(
                    "density abscissae must be strictly increasing".into(),
                ));
            }
        }
        xs.push(p[0]);
        ys.push(p[1]);
    }
    Ok((xs, ys))
}

/// `int_a^b t^k dt` for `0 <= a <= b <= inf`, `+inf` when divergent.
fn power_integral(k: f64, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    if k == -1.0 {
        return (b / a).ln();
    }
    let e = k + 1.0;
    if b == f64::INFINITY && e >= 0.0 || a == 0.0 && e <= 0.0 {
        return f64::INFINITY;
    }
    let pb = if b == f64::INFINITY { 0.0 } else { b.powf(e) };
    let pa = if a == 0.0 { 0.0 } else { a.powf(e) };
    (pb - pa) / e
}

/// `int_a^b (alpha + beta t) t^k dt` with the convention `0 * inf = 0`.
fn linear_piece(alpha: f64, beta: f64, k: f64, a: f64, b: f64) -> f64 {
    let term = |c: f64, j: f64| {
        if c == 0.0 {
            0.0
        } else {
            c * power_integral(j, a, b)
        }
    };
    term(alpha, k) + term(beta, k + 1.0)
}

impl MonotoneDensity {
    /// Validated piecewise-linear density. Consecutive samples must be
    /// ordered in `direction` with tolerance 0; a decreasing density must
    /// also be nonnegative.
    pub fn from_samples(points: &[[f64; 2]], direction: Direction) -> Result<Self> {
        let (xs, ys) = split_points(points)?;
        for (i, w) in ys.windows(2).enumerate() {
            if !direction.ordered(w[0], w[1]) {
                return Err(Error::precondition(format!(
                    "density is not {} between t = {} and t = {} ({} then {})",
                    match direction {
                        Direction::Increasing => "increasing",
                        Direction::Decreasing => "decreasing",
                    },
                    xs[i],
                    xs[i + 1],
                    w[0],
                    w[1]
                )));
            }
        }
        if direction == Direction::Decreasing {
            if let Some((i, &y)) = ys.iter().enumerate().find(|(_, &y)| y < 0.0) {
                return Err(Error::precondition(format!(
                    "decreasing density is negative at t = {}: {y}",
                    xs[i]
                )));
            }
        }
        Ok(MonotoneDensity {
            direction,
            repr: Repr::Linear { xs, ys },
            tail: None,
        })
    }

    /// Piecewise-linear density without the monotonicity check, for
    /// deliberately invalid inputs in tests and reconstruction attempts.
    pub fn from_samples_unchecked(points: &[[f64; 2]], direction: Direction) -> Result<Self> {
        let (xs, ys) = split_points(points)?;
        Ok(MonotoneDensity {
            direction,
            repr: Repr::Linear { xs, ys },
            tail: None,
        })
    }

    /// `c * t^-alpha * (log t)^-beta`. A nonzero `beta` restricts the domain
    /// to `t > 1`.
    pub fn parametric(c: f64, alpha: f64, beta: f64, direction: Direction) -> Result<Self> {
        if !(c.is_finite() && alpha.is_finite() && beta.is_finite()) {
            return Err(Error::Config(
                "parametric density needs finite parameters".into(),
            ));
        }
        if c < 0.0 {
            return Err(Error::precondition(format!(
                "density coefficient must be >= 0, got {c}"
            )));
        }
        let ok = c == 0.0
            || match direction {
                Direction::Decreasing => alpha >= 0.0 && beta >= 0.0,
                Direction::Increasing => alpha <= 0.0 && beta <= 0.0,
            };
        if !ok {
            return Err(Error::precondition(format!(
                "c t^-{alpha} (log t)^-{beta} is not monotone in the declared direction"
            )));
        }
        Ok(MonotoneDensity {
            direction,
            repr: Repr::Parametric { c, alpha, beta },
            tail: None,
        })
    }

    pub fn constant(value: f64, direction: Direction) -> Result<Self> {
        MonotoneDensity::parametric(value, 0.0, 0.0, direction)
    }

    pub fn with_tail(mut self, tail: TailMetadata) -> Self {
        self.tail = Some(tail);
        self
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn is_parametric(&self) -> bool {
        matches!(self.repr, Repr::Parametric { .. })
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Linear { ys, .. } => ys.iter().all(|&y| y == 0.0),
            Repr::Parametric { c, .. } => *c == 0.0,
        }
    }

    /// Sample abscissae, where the density has kinks.
    pub fn breaks(&self) -> &[f64] {
        match &self.repr {
            Repr::Linear { xs, .. } => xs,
            Repr::Parametric { .. } => &[],
        }
    }

    /// Smallest `t` the density is defined at (exclusive).
    pub fn domain_start(&self) -> f64 {
        match self.repr {
            Repr::Parametric { beta, c, .. } if beta != 0.0 && c != 0.0 => 1.0,
            _ => 0.0,
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match &self.repr {
            Repr::Linear { xs, ys } => {
                let n = xs.len();
                if t <= xs[0] {
                    return ys[0];
                }
                if t >= xs[n - 1] {
                    return ys[n - 1];
                }
                let j = xs.partition_point(|&x| x <= t) - 1;
                let w = (t - xs[j]) / (xs[j + 1] - xs[j]);
                ys[j] + w * (ys[j + 1] - ys[j])
            }
            &Repr::Parametric { c, alpha, beta } => {
                if c == 0.0 {
                    return 0.0;
                }
                let mut v = c * t.powf(-alpha);
                if beta != 0.0 {
                    v *= t.ln().powf(-beta);
                }
                v
            }
        }
    }

    /// Multiplies the density by `lambda > 0`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::precondition(format!(
                "scale must be positive, got {lambda}"
            )));
        }
        let repr = match &self.repr {
            Repr::Linear { xs, ys } => Repr::Linear {
                xs: xs.clone(),
                ys: ys.iter().map(|y| y * lambda).collect(),
            },
            &Repr::Parametric { c, alpha, beta } => Repr::Parametric {
                c: c * lambda,
                alpha,
                beta,
            },
        };
        Ok(MonotoneDensity {
            repr,
            ..self.clone()
        })
    }

    /// Checks that the density is defined, finite and of the right sign on
    /// `(lo, hi)`.
    pub fn validate_on(&self, lo: f64, hi: f64) -> Result<()> {
        if lo < self.domain_start() {
            return Err(Error::domain(format!(
                "density is only defined for t > {}, interval starts at {lo}",
                self.domain_start()
            )));
        }
        if let Repr::Linear { xs, ys } = &self.repr {
            if self.direction == Direction::Increasing {
                return Ok(());
            }
            for (x, y) in xs.iter().zip(ys) {
                if *x > lo && *x < hi && *y < 0.0 {
                    return Err(Error::precondition(format!("density negative at t = {x}")));
                }
            }
        }
        Ok(())
    }

    /// Oriented `int_a^b d(t) t^k dt`; limits may be `0` or `+inf`, in
    /// which case a divergent integral returns an infinite value.
    pub fn integrate_weighted(&self, k: f64, a: f64, b: f64) -> Result<f64> {
        if a == b {
            return Ok(0.0);
        }
        if a > b {
            return Ok(-self.integrate_weighted(k, b, a)?);
        }
        if a < 0.0 {
            return Err(Error::domain(format!(
                "density integral from negative t = {a}"
            )));
        }
        match &self.repr {
            Repr::Linear { xs, ys } => Ok(self.linear_integral(xs, ys, k, a, b)),
            &Repr::Parametric { c, alpha, beta } => {
                if c == 0.0 {
                    Ok(0.0)
                } else if beta == 0.0 {
                    Ok(c * power_integral(k - alpha, a, b))
                } else {
                    if a < 1.0 {
                        return Err(Error::domain(format!(
                            "log-power density needs t > 1, integral starts at {a}"
                        )));
                    }
                    // x = log t turns the integrand into c e^{(k - alpha + 1) x} x^-beta.
                    let lam = k - alpha + 1.0;
                    let f = move |x: f64| c * (lam * x).exp() * x.powf(-beta);
                    match integrate_improper(f, a.ln(), b.ln(), &SimpsonOptions::with_tol(1e-12)) {
                        Ok(v) => Ok(v),
                        Err(Error::NumericalInstability(_)) if b == f64::INFINITY || a == 1.0 => {
                            Ok(f64::INFINITY)
                        }
                        Err(e) => Err(e),
                    }
                }
            }
        }
    }

    fn linear_integral(&self, xs: &[f64], ys: &[f64], k: f64, a: f64, b: f64) -> f64 {
        let n = xs.len();
        let mut total = 0.0;
        // Constant extension to the left of the first sample.
        if a < xs[0] {
            total += linear_piece(ys[0], 0.0, k, a, b.min(xs[0]));
        }
        let first = xs.partition_point(|&x| x <= a).saturating_sub(1);
        let last = xs.partition_point(|&x| x < b).min(n.saturating_sub(1));
        for j in first..last {
            let (p, q) = (xs[j].max(a), xs[j + 1].min(b));
            if p >= q {
                continue;
            }
            let slope = (ys[j + 1] - ys[j]) / (xs[j + 1] - xs[j]);
            total += linear_piece(ys[j] - slope * xs[j], slope, k, p, q);
        }
        if b > xs[n - 1] {
            total += linear_piece(ys[n - 1], 0.0, k, a.max(xs[n - 1]), b);
        }
        total
    }

    /// Asymptotic class near `end`, or `None` when sampled data does not
    /// reach the endpoint and no metadata was supplied.
    pub fn tail(&self, end: End) -> Option<Tail> {
        if self.is_zero() {
            return Some(Tail::Zero);
        }
        match &self.repr {
            Repr::Linear { xs, .. } => {
                let e = match end {
                    End::Origin => 0.0,
                    End::Finite(e) => e,
                    _ => return self.tail.map(|t| t.to_tail(end)),
                };
                if e >= xs[0] && e <= xs[xs.len() - 1] {
                    if self.value(e) != 0.0 {
                        Some(Tail::ORDER_ONE)
                    } else {
                        Some(Tail::BOUNDED)
                    }
                } else {
                    self.tail.map(|t| t.to_tail(end))
                }
            }
            &Repr::Parametric { alpha, beta, .. } => match end {
                End::PosInfinity => Some(Tail::exact(alpha, -beta)),
                End::Origin if beta == 0.0 => Some(Tail::exact(-alpha, 0.0)),
                End::Finite(e) if e == 1.0 && beta != 0.0 => Some(Tail::exact(-beta, 0.0)),
                End::Finite(e) if e > self.domain_start() => Some(Tail::ORDER_ONE),
                _ => None,
            },
        }
    }

    pub fn descriptor(&self) -> DensityDescriptor {
        match &self.repr {
            Repr::Linear { xs, ys } => DensityDescriptor::Samples {
                direction: self.direction,
                points: xs.iter().zip(ys).map(|(&x, &y)| [x, y]).collect(),
                tail: self.tail,
            },
            &Repr::Parametric { c, alpha, beta } => DensityDescriptor::Parametric {
                direction: self.direction,
                c,
                alpha,
                beta,
            },
        }
    }
}

/// Projects noisy samples onto the nearest sequence that is monotone in
/// `direction` by a running extremum, then builds a validated density.
pub fn project_monotone(points: &[[f64; 2]], direction: Direction) -> Result<MonotoneDensity> {
    let mut out: Vec<[f64; 2]> = Vec::with_capacity(points.len());
    for p in points {
        let y = match (out.last(), direction) {
            (Some(prev), Direction::Decreasing) => p[1].min(prev[1]),
            (Some(prev), Direction::Increasing) => p[1].max(prev[1]),
            (None, _) => p[1],
        };
        out.push([p[0], y]);
    }
    if direction == Direction::Decreasing {
        for p in &mut out {
            p[1] = p[1].max(0.0);
        }
    }
    MonotoneDensity::from_samples(&out, direction)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_zero_monotonicity() {
        let ok = MonotoneDensity::from_samples(
            &[[1.0, 2.0], [2.0, 2.0], [3.0, 1.0]],
            Direction::Decreasing,
        );
        assert!(ok.is_ok());
        let bad = MonotoneDensity::from_samples(
            &[[1.0, 2.0], [2.0, 2.0 + 1e-15], [3.0, 1.0]],
            Direction::Decreasing,
        );
        assert!(matches!(bad, Err(Error::Precondition(_))));
    }

    #[test]
    fn decreasing_must_be_nonnegative() {
        let bad = MonotoneDensity::from_samples(&[[1.0, 1.0], [2.0, -0.5]], Direction::Decreasing);
        assert!(bad.is_err());
    }

    #[test]
    fn linear_weighted_integrals_are_exact() {
        let d = MonotoneDensity::from_samples(&[[1.0, 1.0], [3.0, 3.0]], Direction::Increasing)
            .unwrap();
        // int_1^3 t * t^-1 dt = 2
        assert!((d.integrate_weighted(-1.0, 1.0, 3.0).unwrap() - 2.0).abs() < 1e-14);
        // constant extension: int_0.5^1 1 dt = 0.5
        assert!((d.integrate_weighted(0.0, 0.5, 1.0).unwrap() - 0.5).abs() < 1e-14);
        assert!((d.integrate_weighted(0.0, 3.0, 1.0).unwrap() + 4.0).abs() < 1e-14);
    }

    #[test]
    fn parametric_integrals() {
        let d = MonotoneDensity::parametric(1.0, 1.0, 0.0, Direction::Decreasing).unwrap();
        let v = d.integrate_weighted(-1.0, 2.0, f64::INFINITY).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
        assert_eq!(
            d.integrate_weighted(0.0, 1.0, f64::INFINITY).unwrap(),
            f64::INFINITY
        );
    }

    #[test]
    fn log_power_integral() {
        // int_e^inf t^-1 (log t)^-2 dt = 1
        let d = MonotoneDensity::parametric(1.0, 0.0, 2.0, Direction::Decreasing).unwrap();
        let v = d
            .integrate_weighted(-1.0, std::f64::consts::E, f64::INFINITY)
            .unwrap();
        assert!((v - 1.0).abs() < 1e-9, "{v}");
    }

    #[test]
    fn tails() {
        let d = MonotoneDensity::parametric(2.0, 1.5, 1.0, Direction::Decreasing).unwrap();
        assert_eq!(d.tail(End::PosInfinity), Some(Tail::exact(1.5, -1.0)));
        let s = MonotoneDensity::from_samples(&[[1.0, 1.0], [2.0, 0.5]], Direction::Decreasing)
            .unwrap();
        assert_eq!(s.tail(End::Finite(2.0)), Some(Tail::ORDER_ONE));
        assert_eq!(s.tail(End::PosInfinity), None);
        let s = s.with_tail(TailMetadata {
            exponent: -2.0,
            log_exponent: 0.0,
        });
        assert_eq!(s.tail(End::PosInfinity), Some(Tail::exact(2.0, 0.0)));
    }

    #[test]
    fn descriptor_round_trip() {
        let json = r#"{"kind":"samples","points":[[1.0,2.0],[2.0,1.0]]}"#;
        let d: MonotoneDensity = serde_json::from_str(json).unwrap();
        assert_eq!(d.direction(), Direction::Decreasing);
        let back: MonotoneDensity =
            serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        assert_eq!(back, d);
        let bad = r#"{"kind":"samples","points":[[1.0,1.0],[2.0,2.0]]}"#;
        assert!(serde_json::from_str::<MonotoneDensity>(bad).is_err());
    }

    #[test]
    fn projection_restores_monotonicity() {
        let d = project_monotone(
            &[[1.0, 1.0], [2.0, 1.0 + 1e-12], [3.0, 0.5]],
            Direction::Decreasing,
        )
        .unwrap();
        assert_eq!(d.value(2.0), 1.0);
    }
}
