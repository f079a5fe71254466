//! Closed-form function families and their serialized descriptors.
//!
//! Descriptors are tagged records such as
//! `{"family": "power", "coef": 1.0, "exponent": 2.0}`. A descriptor is
//! compiled once into a [`CompiledFamily`] that evaluates values, one-sided
//! derivatives, second derivatives and endpoint tails without allocating.

use serde::{Deserialize, Serialize};

use crate::radial::h_transform_unchecked;
use crate::tail::{End, Tail};
use crate::{Error, Result};

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Family {
    /// `value`
    Constant { value: f64 },
    /// `coef * x^exponent`
    Power { coef: f64, exponent: f64 },
    /// `coef * x^exponent * (log x)^log_exponent`
    LogPower {
        coef: f64,
        exponent: f64,
        log_exponent: f64,
    },
    /// `scale * h_m(x) + offset`
    Harmonic {
        m: u32,
        #[serde(default = "one")]
        scale: f64,
        #[serde(default)]
        offset: f64,
    },
    /// `coef * exp(rate * x)`
    Exp { coef: f64, rate: f64 },
    /// Piecewise-linear interpolation, constant beyond the first and last sample.
    Samples { points: Vec<[f64; 2]> },
}

impl Family {
    pub fn constant(value: f64) -> Family {
        Family::Constant { value }
    }

    pub fn power(coef: f64, exponent: f64) -> Family {
        Family::Power { coef, exponent }
    }

    pub fn log_power(coef: f64, exponent: f64, log_exponent: f64) -> Family {
        Family::LogPower {
            coef,
            exponent,
            log_exponent,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Constant { .. } => "constant",
            Family::Power { .. } => "power",
            Family::LogPower { .. } => "log-power",
            Family::Harmonic { .. } => "harmonic",
            Family::Exp { .. } => "exp",
            Family::Samples { .. } => "samples",
        }
    }

    pub fn is_parametric(&self) -> bool {
        !matches!(self, Family::Samples { .. })
    }

    pub fn compile(&self) -> Result<CompiledFamily> {
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!(
                    "{} parameter `{name}` must be finite",
                    self.name()
                )))
            }
        };
        let expr = match *self {
            Family::Constant { value } => {
                finite("value", value)?;
                Expr::sum(vec![Monomial::new(value, 0.0, 0.0)])
            }
            Family::Power { coef, exponent } => {
                finite("coef", coef)?;
                finite("exponent", exponent)?;
                Expr::sum(vec![Monomial::new(coef, exponent, 0.0)])
            }
            Family::LogPower {
                coef,
                exponent,
                log_exponent,
            } => {
                finite("coef", coef)?;
                finite("exponent", exponent)?;
                finite("log_exponent", log_exponent)?;
                Expr::sum(vec![Monomial::new(coef, exponent, log_exponent)])
            }
            Family::Harmonic { m, scale, offset } => {
                finite("scale", scale)?;
                finite("offset", offset)?;
                let h = match m {
                    0 => return Err(Error::Config("harmonic family needs m >= 1".into())),
                    1 => Monomial::new(scale, 1.0, 0.0),
                    2 => Monomial::new(scale, 0.0, 1.0),
                    _ => Monomial::new(-scale, 2.0 - m as f64, 0.0),
                };
                Expr::sum(vec![h, Monomial::new(offset, 0.0, 0.0)])
            }
            Family::Exp { coef, rate } => {
                finite("coef", coef)?;
                finite("rate", rate)?;
                Expr::Exp { coef, rate }
            }
            Family::Samples { ref points } => Expr::Samples(Samples::new(points)?),
        };
        Ok(CompiledFamily::from_expr(expr))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Monomial {
    coef: f64,
    power: f64,
    log_power: f64,
}

fn pow_any(x: f64, a: f64) -> f64 {
    if a == 0.0 {
        1.0
    } else if x < 0.0 && a.fract() == 0.0 && a.abs() < 1e9 {
        x.powi(a as i32)
    } else {
        x.powf(a)
    }
}

impl Monomial {
    fn new(coef: f64, power: f64, log_power: f64) -> Self {
        Monomial {
            coef,
            power,
            log_power,
        }
    }

    fn eval(&self, x: f64) -> f64 {
        if self.coef == 0.0 {
            return 0.0;
        }
        let p = pow_any(x, self.power);
        let l = if self.log_power == 0.0 {
            1.0
        } else {
            pow_any(x.ln(), self.log_power)
        };
        self.coef * p * l
    }

    fn derivative(&self) -> [Monomial; 2] {
        [
            Monomial::new(self.coef * self.power, self.power - 1.0, self.log_power),
            Monomial::new(
                self.coef * self.log_power,
                self.power - 1.0,
                self.log_power - 1.0,
            ),
        ]
    }
}

fn simplify(terms: impl IntoIterator<Item = Monomial>) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = Vec::new();
    for t in terms {
        if t.coef == 0.0 {
            continue;
        }
        match out
            .iter_mut()
            .find(|o| o.power == t.power && o.log_power == t.log_power)
        {
            Some(o) => o.coef += t.coef,
            None => out.push(t),
        }
    }
    out.retain(|t| t.coef != 0.0);
    out
}

fn sum_tail(terms: &[Monomial], end: End) -> Option<Tail> {
    if terms.is_empty() {
        return Some(Tail::Zero);
    }
    match end {
        End::Origin => {
            let t = terms.iter().min_by(|p, q| {
                p.power
                    .total_cmp(&q.power)
                    .then(q.log_power.total_cmp(&p.log_power))
            })?;
            Some(Tail::exact(t.power, t.log_power))
        }
        End::PosInfinity => {
            let t = terms.iter().max_by(|p, q| {
                p.power
                    .total_cmp(&q.power)
                    .then(p.log_power.total_cmp(&q.log_power))
            })?;
            Some(Tail::exact(-t.power, t.log_power))
        }
        End::NegInfinity => {
            if terms.iter().any(|t| t.log_power != 0.0) {
                return None;
            }
            let t = terms.iter().max_by(|p, q| p.power.total_cmp(&q.power))?;
            Some(Tail::exact(-t.power, 0.0))
        }
        End::Finite(e) => {
            if e == 1.0 {
                // log x ~ (x - 1): negative log powers blow up here.
                if let Some(t) = terms
                    .iter()
                    .filter(|t| t.log_power < 0.0)
                    .min_by(|p, q| p.log_power.total_cmp(&q.log_power))
                {
                    return Some(Tail::exact(t.log_power, 0.0));
                }
            }
            let v: f64 = terms.iter().map(|t| t.eval(e)).sum();
            if !v.is_finite() {
                None
            } else if v != 0.0 {
                Some(Tail::ORDER_ONE)
            } else {
                Some(Tail::BOUNDED)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Samples {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Samples {
    fn new(points: &[[f64; 2]]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InsufficientData(
                "sampled family needs at least two points".into(),
            ));
        }
        let mut xs = Vec::with_capacity(points.len());
        let mut ys = Vec::with_capacity(points.len());
        for p in points {
            if !(p[0].is_finite() && p[1].is_finite()) {
                return Err(Error::Config(format!("non-finite sample {:?}", p)));
            }
            if let Some(&last) = xs.last() {
                if p[0] <= last {
                    return Err(Error::Config(
                        "sample abscissae must be strictly increasing".into(),
                    ));
                }
            }
            xs.push(p[0]);
            ys.push(p[1]);
        }
        Ok(Samples { xs, ys })
    }

    fn segment(&self, x: f64) -> usize {
        // Index i of the segment [xs[i], xs[i+1]) containing x, clamped.
        let j = self.xs.partition_point(|&v| v <= x);
        j.saturating_sub(1).min(self.xs.len() - 2)
    }

    fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let i = self.segment(x);
        let w = (x - self.xs[i]) / (self.xs[i + 1] - self.xs[i]);
        self.ys[i] + w * (self.ys[i + 1] - self.ys[i])
    }

    fn slope(&self, i: usize) -> f64 {
        (self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i])
    }

    fn derivative(&self, x: f64, side: Side) -> f64 {
        let n = self.xs.len();
        match side {
            Side::Right => {
                if x < self.xs[0] || x >= self.xs[n - 1] {
                    0.0
                } else {
                    self.slope(self.segment(x))
                }
            }
            Side::Left => {
                if x <= self.xs[0] || x > self.xs[n - 1] {
                    0.0
                } else {
                    let j = self.xs.partition_point(|&v| v < x);
                    self.slope(j - 1)
                }
            }
        }
    }

    fn covers(&self, e: f64) -> bool {
        e >= self.xs[0] && e <= self.xs[self.xs.len() - 1]
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Expr {
    Sum(Vec<Monomial>),
    Exp { coef: f64, rate: f64 },
    Samples(Samples),
}

impl Expr {
    fn sum(terms: Vec<Monomial>) -> Expr {
        Expr::Sum(simplify(terms))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A family descriptor compiled for fast evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledFamily {
    expr: Expr,
    d1: Vec<Monomial>,
    d2: Vec<Monomial>,
}

impl CompiledFamily {
    fn from_expr(expr: Expr) -> Self {
        let (d1, d2) = match &expr {
            Expr::Sum(terms) => {
                let d1 = simplify(terms.iter().flat_map(|t| t.derivative()));
                let d2 = simplify(d1.iter().flat_map(|t| t.derivative()));
                (d1, d2)
            }
            _ => (Vec::new(), Vec::new()),
        };
        CompiledFamily { expr, d1, d2 }
    }

    pub fn value(&self, x: f64) -> f64 {
        match &self.expr {
            Expr::Sum(terms) => terms.iter().map(|t| t.eval(x)).sum(),
            Expr::Exp { coef, rate } => coef * (rate * x).exp(),
            Expr::Samples(s) => s.eval(x),
        }
    }

    pub fn derivative(&self, x: f64, side: Side) -> f64 {
        match &self.expr {
            Expr::Sum(_) => self.d1.iter().map(|t| t.eval(x)).sum(),
            Expr::Exp { coef, rate } => coef * rate * (rate * x).exp(),
            Expr::Samples(s) => s.derivative(x, side),
        }
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        match &self.expr {
            Expr::Sum(_) => self.d2.iter().map(|t| t.eval(x)).sum(),
            Expr::Exp { coef, rate } => coef * rate * rate * (rate * x).exp(),
            Expr::Samples(_) => 0.0,
        }
    }

    /// True when the derivative is piecewise constant with jumps at the
    /// sample abscissae.
    pub fn has_step_derivative(&self) -> bool {
        matches!(self.expr, Expr::Samples(_))
    }

    pub fn breaks(&self) -> &[f64] {
        match &self.expr {
            Expr::Samples(s) => &s.xs,
            _ => &[],
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.expr {
            Expr::Sum(t) => t.is_empty(),
            Expr::Exp { coef, .. } => *coef == 0.0,
            Expr::Samples(s) => s.ys.iter().all(|&y| y == 0.0),
        }
    }

    pub fn derivative_is_zero(&self) -> bool {
        match &self.expr {
            Expr::Sum(_) => self.d1.is_empty(),
            Expr::Exp { coef, rate } => *coef == 0.0 || *rate == 0.0,
            Expr::Samples(s) => s.ys.windows(2).all(|w| w[0] == w[1]),
        }
    }

    pub fn is_sampled(&self) -> bool {
        matches!(self.expr, Expr::Samples(_))
    }

    pub fn tail(&self, end: End) -> Option<Tail> {
        match &self.expr {
            Expr::Sum(terms) => sum_tail(terms, end),
            Expr::Exp { coef, rate } => exp_tail(*coef, *rate, end),
            Expr::Samples(s) => samples_tail(s, end, |x| s.eval(x)),
        }
    }

    pub fn derivative_tail(&self, end: End) -> Option<Tail> {
        match &self.expr {
            Expr::Sum(_) => sum_tail(&self.d1, end),
            Expr::Exp { coef, rate } => exp_tail(coef * rate, *rate, end),
            Expr::Samples(s) => match end {
                End::Origin | End::Finite(_) if s.covers(end_value(end)) => Some(Tail::BOUNDED),
                _ => None,
            },
        }
    }
}

fn end_value(end: End) -> f64 {
    match end {
        End::Origin => 0.0,
        End::Finite(e) => e,
        End::PosInfinity => f64::INFINITY,
        End::NegInfinity => f64::NEG_INFINITY,
    }
}

fn samples_tail(s: &Samples, end: End, f: impl Fn(f64) -> f64) -> Option<Tail> {
    match end {
        End::Origin | End::Finite(_) => {
            let e = end_value(end);
            if !s.covers(e) {
                return None;
            }
            if f(e) != 0.0 {
                Some(Tail::ORDER_ONE)
            } else {
                Some(Tail::BOUNDED)
            }
        }
        _ => None,
    }
}

fn exp_tail(coef: f64, rate: f64, end: End) -> Option<Tail> {
    if coef == 0.0 {
        return Some(Tail::Zero);
    }
    let growth = match end {
        End::Origin | End::Finite(_) => return Some(Tail::ORDER_ONE),
        End::PosInfinity => rate,
        End::NegInfinity => -rate,
    };
    Some(if growth < 0.0 {
        Tail::Upper {
            exponent: f64::INFINITY,
            log_exponent: 0.0,
        }
    } else if growth > 0.0 {
        Tail::exact(f64::NEG_INFINITY, 0.0)
    } else {
        Tail::ORDER_ONE
    })
}

/// `h_m` as a family, used for the harmonic null profiles.
pub fn harmonic_family(m: u32) -> Family {
    Family::Harmonic {
        m,
        scale: 1.0,
        offset: 0.0,
    }
}

/// Sanity hook: the compiled harmonic family agrees with `h_transform`.
#[doc(hidden)]
pub fn harmonic_matches_transform(m: u32, t: f64) -> bool {
    let f = harmonic_family(m).compile().unwrap();
    (f.value(t) - h_transform_unchecked(m, t)).abs() <= 1e-14 * (1.0 + f.value(t).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(f: Family) -> CompiledFamily {
        f.compile().unwrap()
    }

    #[test]
    fn descriptors_deserialize_from_tagged_records() {
        let f: Family =
            serde_json::from_str(r#"{"family":"power","coef":2.0,"exponent":0.5}"#).unwrap();
        assert_eq!(f, Family::power(2.0, 0.5));
        let g: Family = serde_json::from_str(
            r#"{"family":"log-power","coef":1,"exponent":0,"log_exponent":1}"#,
        )
        .unwrap();
        assert_eq!(g, Family::log_power(1.0, 0.0, 1.0));
        let h: Family = serde_json::from_str(r#"{"family":"harmonic","m":3}"#).unwrap();
        assert_eq!(h, harmonic_family(3));
        assert!(serde_json::from_str::<Family>(r#"{"family":"power","coef":1}"#).is_err());
    }

    #[test]
    fn power_values_and_derivatives() {
        let f = c(Family::power(3.0, 2.0));
        assert_eq!(f.value(2.0), 12.0);
        assert_eq!(f.derivative(2.0, Side::Right), 12.0);
        assert_eq!(f.second_derivative(2.0), 6.0);
    }

    #[test]
    fn negative_arguments_with_integer_exponents() {
        // F(s) = -1/s on s < 0
        let f = c(Family::power(-1.0, -1.0));
        assert_eq!(f.value(-2.0), 0.5);
        assert_eq!(f.derivative(-2.0, Side::Right), 0.25);
        assert!(f.second_derivative(-2.0) > 0.0);
    }

    #[test]
    fn log_power_derivative() {
        let f = c(Family::log_power(1.0, 1.0, 1.0)); // x log x
        let x: f64 = 3.0;
        assert!((f.derivative(x, Side::Right) - (x.ln() + 1.0)).abs() < 1e-15);
        assert!((f.second_derivative(x) - 1.0 / x).abs() < 1e-15);
    }

    #[test]
    fn harmonic_family_is_h() {
        for m in [1, 2, 3, 5] {
            for t in [0.3, 1.0, 2.5] {
                assert!(harmonic_matches_transform(m, t));
            }
        }
        let g = c(Family::Harmonic {
            m: 2,
            scale: 1.0,
            offset: 0.0,
        });
        assert_eq!(g.derivative(4.0, Side::Right), 0.25);
    }

    #[test]
    fn samples_interpolate_and_clamp() {
        let f = c(Family::Samples {
            points: vec![[0.0, 1.0], [1.0, 0.0], [2.0, 1.0]],
        });
        assert_eq!(f.value(0.5), 0.5);
        assert_eq!(f.value(-1.0), 1.0);
        assert_eq!(f.value(3.0), 1.0);
        assert_eq!(f.derivative(1.0, Side::Left), -1.0);
        assert_eq!(f.derivative(1.0, Side::Right), 1.0);
        assert_eq!(f.breaks(), &[0.0, 1.0, 2.0]);
    }

    #[test]
    fn samples_must_increase() {
        let err = Family::Samples {
            points: vec![[0.0, 1.0], [0.0, 2.0]],
        }
        .compile()
        .unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn tails() {
        let f = c(Family::power(1.0, 2.0));
        assert_eq!(f.tail(End::PosInfinity), Some(Tail::exact(-2.0, 0.0)));
        assert_eq!(f.derivative_tail(End::Origin), Some(Tail::exact(1.0, 0.0)));
        let z = c(Family::constant(0.0));
        assert_eq!(z.tail(End::Origin), Some(Tail::Zero));
        assert_eq!(z.derivative_tail(End::Origin), Some(Tail::Zero));
        let d = c(Family::log_power(1.0, -1.0, -2.0));
        assert_eq!(d.tail(End::PosInfinity), Some(Tail::exact(1.0, -2.0)));
        assert_eq!(d.tail(End::Finite(1.0)), Some(Tail::exact(-2.0, 0.0)));
        let e = c(Family::Exp {
            coef: 1.0,
            rate: 1.0,
        });
        assert_eq!(e.derivative_tail(End::Origin), Some(Tail::ORDER_ONE));
        let s = c(Family::Samples {
            points: vec![[1.0, 1.0], [2.0, 3.0]],
        });
        assert_eq!(s.tail(End::Finite(2.0)), Some(Tail::ORDER_ONE));
        assert_eq!(s.tail(End::PosInfinity), None);
    }
}
