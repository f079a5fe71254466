//! Convergence classification of one-sided improper integrals.

use serde::{Deserialize, Serialize};

use crate::tail::{classify_end, End, EndStatus, Tail};
use crate::uniqueness::zeros::Source;
use crate::Result;

/// How a divergence was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DivergenceMode {
    /// From exact tail exponents.
    SymbolicTail,
    /// From sustained growth of truncated integrals.
    HeuristicPartialSums,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Classification {
    Convergent { value: f64 },
    Divergent { mode: DivergenceMode },
    Unknown { reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    #[serde(with = "crate::extended")]
    pub cutoff: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceVerdict {
    pub classification: Classification,
    /// Truncated integrals with the cutoff moving toward the open end.
    pub trace: Vec<TracePoint>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl DivergenceVerdict {
    pub fn is_convergent(&self) -> bool {
        matches!(self.classification, Classification::Convergent { .. })
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self.classification, Classification::Divergent { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self.classification, Classification::Unknown { .. })
    }

    pub fn value(&self) -> Option<f64> {
        match self.classification {
            Classification::Convergent { value } => Some(value),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifyOptions {
    pub trace_points: usize,
    /// Minimal ratio between consecutive truncated integrals read as growth.
    pub growth_ratio: f64,
    /// Number of consecutive growing steps required.
    pub growth_steps: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            trace_points: 24,
            growth_ratio: 1.05,
            growth_steps: 5,
        }
    }
}

/// What is known about the integrand at the open end.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum TailInfo {
    Known(Tail),
    Missing(String),
    Opaque,
}

/// Tail of a product from the tails of its factors.
pub(crate) fn product_tail(factors: &[(&str, Option<Tail>, Source)]) -> TailInfo {
    if factors.iter().any(|f| f.1 == Some(Tail::Zero)) {
        return TailInfo::Known(Tail::Zero);
    }
    let mut acc = Tail::ORDER_ONE;
    for (name, tail, source) in factors {
        match (tail, source) {
            (Some(t), _) => acc = acc.times(*t),
            (None, Source::Sampled) => {
                return TailInfo::Missing(format!(
                    "{name} samples do not reach the open end and carry no tail metadata"
                ))
            }
            (None, _) => return TailInfo::Opaque,
        }
    }
    TailInfo::Known(acc)
}

/// An integral between a fixed end and an open end approached by cutoffs.
pub(crate) struct Problem<'a> {
    pub fixed: f64,
    pub open: f64,
    pub zero: bool,
    pub tail: TailInfo,
    /// Integral over the range between `fixed` and the cutoff.
    pub partial: &'a dyn Fn(f64) -> Result<f64>,
}

fn cutoff(fixed: f64, open: f64, k: usize) -> f64 {
    if open.is_infinite() {
        fixed.abs().max(1.0) * 2f64.powi(k as i32 + 1) * open.signum()
    } else {
        open + (fixed - open) * 2f64.powi(-(k as i32))
    }
}

pub(crate) fn classify(problem: &Problem<'_>, opts: &ClassifyOptions) -> DivergenceVerdict {
    if problem.zero {
        return DivergenceVerdict {
            classification: Classification::Convergent { value: 0.0 },
            trace: vec![TracePoint {
                cutoff: problem.open,
                value: 0.0,
            }],
            notes: vec!["integrand vanishes identically".into()],
        };
    }
    let mut notes = Vec::new();
    let mut trace = Vec::with_capacity(opts.trace_points);
    for k in 1..=opts.trace_points {
        let c = cutoff(problem.fixed, problem.open, k);
        if c == problem.open {
            break;
        }
        match (problem.partial)(c) {
            Ok(v) => trace.push(TracePoint {
                cutoff: c,
                value: v,
            }),
            Err(e) => {
                notes.push(format!("truncated integral at {c:e} failed: {e}"));
                break;
            }
        }
    }
    let end = End::of(problem.open);
    let classification = match &problem.tail {
        TailInfo::Known(t) => match classify_end(*t, end) {
            EndStatus::Converges => converged(problem, &trace, &mut notes),
            EndStatus::Diverges => Classification::Divergent {
                mode: DivergenceMode::SymbolicTail,
            },
            EndStatus::Undecided => {
                notes.push(format!("tail bound {t:?} does not decide convergence"));
                heuristic(&trace, opts)
            }
        },
        TailInfo::Missing(reason) => Classification::Unknown {
            reason: reason.clone(),
        },
        TailInfo::Opaque => {
            notes.push("no tail information; judged from truncated integrals".into());
            heuristic(&trace, opts)
        }
    };
    DivergenceVerdict {
        classification,
        trace,
        notes,
    }
}

fn converged(
    problem: &Problem<'_>,
    trace: &[TracePoint],
    notes: &mut Vec<String>,
) -> Classification {
    match (problem.partial)(problem.open) {
        Ok(v) if v.is_finite() => Classification::Convergent { value: v },
        other => {
            if let Err(e) = other {
                notes.push(format!(
                    "full integral failed ({e}); using the last truncation"
                ));
            }
            match trace.last() {
                Some(p) => Classification::Convergent { value: p.value },
                None => Classification::Unknown {
                    reason: "integral converges but could not be evaluated".into(),
                },
            }
        }
    }
}

fn heuristic(trace: &[TracePoint], opts: &ClassifyOptions) -> Classification {
    let n = opts.growth_steps;
    if trace.len() > n {
        let tail = &trace[trace.len() - n - 1..];
        let growing = tail
            .windows(2)
            .all(|w| w[1].value.abs() > opts.growth_ratio * w[0].value.abs());
        if growing {
            return Classification::Divergent {
                mode: DivergenceMode::HeuristicPartialSums,
            };
        }
    }
    Classification::Unknown {
        reason: "truncated integrals show no sustained growth; convergence cannot be certified without tail data".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(tail: TailInfo, f: &dyn Fn(f64) -> Result<f64>) -> DivergenceVerdict {
        classify(
            &Problem {
                fixed: 1.0,
                open: f64::INFINITY,
                zero: false,
                tail,
                partial: f,
            },
            &ClassifyOptions::default(),
        )
    }

    #[test]
    fn symbolic_divergence() {
        let v = run(TailInfo::Known(Tail::exact(1.0, 0.0)), &|c: f64| Ok(c.ln()));
        assert_eq!(
            v.classification,
            Classification::Divergent {
                mode: DivergenceMode::SymbolicTail
            }
        );
        assert_eq!(v.trace.len(), 24);
    }

    #[test]
    fn convergent_value() {
        let v = run(TailInfo::Known(Tail::exact(2.0, 0.0)), &|c: f64| {
            Ok(1.0 - 1.0 / c)
        });
        assert_eq!(v.value(), Some(1.0));
    }

    #[test]
    fn heuristic_growth() {
        let v = run(TailInfo::Opaque, &|c: f64| Ok(c.sqrt()));
        assert!(v.is_divergent());
        let v = run(TailInfo::Opaque, &|c: f64| Ok(c.ln()));
        assert!(v.is_unknown());
    }

    #[test]
    fn missing_tail_is_unknown() {
        let v = run(TailInfo::Missing("x".into()), &|c: f64| Ok(c));
        assert!(v.is_unknown());
    }

    #[test]
    fn zero_integrand() {
        let v = classify(
            &Problem {
                fixed: 0.5,
                open: 1.0,
                zero: true,
                tail: TailInfo::Opaque,
                partial: &|_| unreachable!(),
            },
            &ClassifyOptions::default(),
        );
        assert_eq!(v.value(), Some(0.0));
        assert_eq!(v.trace.len(), 1);
    }
}
