//! CSV plot data.

use clap::ValueEnum;
use serde::Serialize;

use subharm::laplacian::polar_point;
use subharm::scenario::Scenario;
use subharm::uniqueness::{CriterionMode, CriterionReport};
use subharm::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum What {
    /// `(r, v(r))` for the test function.
    Testfn,
    /// `(r, g_D)` along the ray from the pole in direction `e_1`.
    Green,
    /// `(cutoff, partial integral)` for the zero integral.
    Trace,
}

const ROWS: usize = 101;

/// Comma-separated, header row, LF line endings, 17 significant digits.
pub fn format_csv(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Points `pole + s e_1` from the pole (exclusive) to the boundary.
fn ray(scenario: &Scenario) -> Result<Vec<(f64, Vec<f64>)>> {
    let domain = scenario.domain.validated()?;
    let outer = domain.radius();
    if outer.is_infinite() {
        return Err(Error::Unsupported(
            "ray samples need a bounded domain".into(),
        ));
    }
    let pole = domain.pole();
    let p1: f64 = pole.iter().skip(1).map(|x| x * x).sum();
    let reach = (outer * outer - p1).sqrt() - pole[0];
    Ok((1..ROWS)
        .map(|k| {
            let s = reach * k as f64 / (ROWS - 1) as f64;
            let mut x = pole.clone();
            x[0] += s;
            (s, x)
        })
        .collect())
}

pub(crate) type Rows = (Vec<&'static str>, Vec<Vec<f64>>, Option<CriterionReport>);

pub(crate) fn rows(scenario: &Scenario, mode: CriterionMode, what: What) -> Result<Rows> {
    match what {
        What::Testfn => {
            let (v, _) = scenario.test_function(mode)?;
            let rows = match mode {
                CriterionMode::Radial => {
                    let r0 = scenario.r0()?;
                    let outer = scenario.domain.radius();
                    let dim = scenario.domain.dimension().get() as usize;
                    (0..ROWS)
                        .map(|k| {
                            let f = k as f64 / (ROWS - 1) as f64;
                            let r = if outer.is_finite() {
                                r0 + (outer - r0) * f
                            } else {
                                r0 * 2f64.powf(8.0 * f)
                            };
                            vec![r, v.value(&polar_point(r, 0.0, dim))]
                        })
                        .collect()
                }
                CriterionMode::Green => ray(scenario)?
                    .into_iter()
                    .map(|(s, x)| vec![s, v.value(&x)])
                    .collect(),
            };
            Ok((vec!["r", "v"], rows, None))
        }
        What::Green => {
            let domain = scenario.domain.validated()?;
            let rows = ray(scenario)?
                .into_iter()
                .map(|(s, x)| Ok(vec![s, domain.green_value(&x)?]))
                .collect::<Result<_>>()?;
            Ok((vec!["r", "v"], rows, None))
        }
        What::Trace => {
            let c = crate::criterion(scenario, mode)?;
            let rows = c
                .zero_integral
                .trace
                .iter()
                .map(|p| vec![p.cutoff, p.value])
                .collect();
            Ok((vec!["cutoff", "value"], rows, Some(c)))
        }
    }
}
