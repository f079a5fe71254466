//! Checks of the test-function axioms on sample grids.

use serde::{Deserialize, Serialize};

use super::{Compact, TestFunction};
use crate::green::ModelDomain;
use crate::laplacian::{check_laplacian, polar_point, GridSpec, LaplacianReport};
use crate::radial::{cell_grid, check_convex_of_h, norm, ConvexityReport, Interval, RadialProfile};
use crate::{Error, Result};

/// A function to be checked against the axioms.
#[derive(Clone, Copy)]
pub enum Candidate<'a> {
    TestFunction(&'a TestFunction),
    /// `v(x) = q(|x|)`.
    Radial(&'a RadialProfile),
    Function(&'a (dyn Fn(&[f64]) -> f64 + Sync)),
}

impl Candidate<'_> {
    fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Candidate::TestFunction(v) => v.value(x),
            Candidate::Radial(q) => q.value(norm(x)),
            Candidate::Function(f) => f(x),
        }
    }

    fn radial_profile(&self) -> Option<&RadialProfile> {
        match self {
            Candidate::TestFunction(v) => v.profile(),
            Candidate::Radial(q) => Some(q),
            Candidate::Function(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationOptions {
    pub grid: GridSpec,
    /// Slack for positivity and the maximum principle, relative to
    /// `max(1, sup v)`.
    pub tol: f64,
    pub convexity_tol: f64,
    pub laplacian_tol: f64,
    pub eps_schedule: Vec<f64>,
    /// Number of halvings of the boundary coordinate probed for (v0lo).
    pub boundary_samples: usize,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions {
            grid: GridSpec::default(),
            tol: 1e-9,
            convexity_tol: 1e-9,
            laplacian_tol: 1e-9,
            eps_schedule: vec![1e-1, 1e-2, 1e-3],
            boundary_samples: 60,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxiomTag {
    Positivity,
    /// Vanishing at the boundary.
    V0lo,
    /// Boundedness, checked in its maximum-principle form.
    V0ls,
    Subharmonic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub tag: AxiomTag,
    pub passed: bool,
    pub witness: Option<Vec<f64>>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonDelta {
    pub eps: f64,
    /// Boundary-coordinate width below which `v < eps` on every probe.
    pub delta: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub checks: Vec<AxiomCheck>,
    pub eps_schedule: Vec<EpsilonDelta>,
    pub sup: f64,
    pub grid: GridSpec,
    pub convexity: Option<ConvexityReport>,
    pub laplacian: Option<LaplacianReport>,
}

impl ValidationReport {
    pub fn failed(&self) -> Vec<AxiomTag> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.tag)
            .collect()
    }
}

/// Shells of `D \ K` parametrised by a boundary coordinate `beta`, which
/// tends to 0 at `dD`.
enum Geometry {
    /// `beta = R - r` (or `1/r` when `R = inf`), shells are spheres.
    Radial { r0: f64, outer: f64 },
    /// `beta = t`, shells are the level lines `{g = t}`.
    Level { domain: ModelDomain, t0: f64 },
}

impl Geometry {
    fn new(domain: &ModelDomain, k: &Compact) -> Result<Self> {
        let domain = domain.validated()?;
        match *k {
            Compact::Ball { radius } => {
                if !(radius > 0.0) {
                    return Err(Error::Unsupported(
                        "K must have interior points; a single point is not covered by the criteria"
                            .into(),
                    ));
                }
                if !(radius < domain.radius()) {
                    return Err(Error::domain(format!(
                        "K = closed B({radius}) is not compactly inside B({})",
                        domain.radius()
                    )));
                }
                if let ModelDomain::Disk { pole, .. } = domain {
                    if pole[0].hypot(pole[1]) > radius {
                        return Err(Error::domain("K must contain the pole"));
                    }
                }
                Ok(Geometry::Radial {
                    r0: radius,
                    outer: domain.radius(),
                })
            }
            Compact::Level { t } => {
                domain.level_set(t)?;
                Ok(Geometry::Level { domain, t0: t })
            }
        }
    }

    fn beta_max(&self) -> f64 {
        match *self {
            Geometry::Radial { r0, outer } if outer.is_infinite() => 0.5 / r0,
            Geometry::Radial { r0, outer } => 0.5 * (outer - r0),
            Geometry::Level { t0, .. } => 0.5 * t0,
        }
    }

    fn shell(&self, beta: f64, angles: &[f64], dim: usize) -> Result<Vec<Vec<f64>>> {
        match *self {
            Geometry::Radial { outer, .. } => {
                let r = if outer.is_infinite() {
                    1.0 / beta
                } else {
                    outer - beta
                };
                Ok(angles.iter().map(|&a| polar_point(r, a, dim)).collect())
            }
            Geometry::Level { domain, .. } => angles
                .iter()
                .map(|&a| domain.level_point(beta, a))
                .collect(),
        }
    }

    /// Shell parameters of the interior grid, ordered from `K` outwards.
    fn grid_betas(&self, n: usize) -> Vec<f64> {
        match *self {
            Geometry::Radial { r0, outer } => {
                let radii = if outer.is_infinite() {
                    cell_grid(r0.ln(), (r0.max(1.0) * 1e3).ln(), n)
                        .into_iter()
                        .map(f64::exp)
                        .collect::<Vec<_>>()
                } else {
                    cell_grid(r0, outer, n)
                };
                radii
                    .into_iter()
                    .map(|r| {
                        if outer.is_infinite() {
                            1.0 / r
                        } else {
                            outer - r
                        }
                    })
                    .collect()
            }
            Geometry::Level { t0, .. } => {
                let mut ts = cell_grid(0.0, t0, n);
                ts.reverse();
                ts
            }
        }
    }

    fn in_region(&self, x: &[f64]) -> bool {
        match *self {
            Geometry::Radial { r0, outer } => {
                let r = norm(x);
                r > r0 && r < outer
            }
            Geometry::Level { domain, t0 } => {
                domain.contains(x) && domain.green_value(x).is_ok_and(|g| g < t0 && g > 0.0)
            }
        }
    }
}

/// Checks positivity, (v0lo) on an epsilon schedule, (v0ls) in
/// maximum-principle form and subharmonicity for `v` on `D \ K`.
pub fn validate_testfn(
    v: Candidate<'_>,
    domain: &ModelDomain,
    k: &Compact,
    opts: &ValidationOptions,
) -> Result<ValidationReport> {
    let geom = Geometry::new(domain, k)?;
    let dim = domain.dimension().get() as usize;
    let radial_input = v.radial_profile().is_some()
        && matches!(geom, Geometry::Radial { .. })
        && domain.has_center_pole();
    let angles: Vec<f64> = if radial_input {
        vec![0.0]
    } else {
        (0..opts.grid.angles.max(1))
            .map(|k| opts.grid.angle(k))
            .collect()
    };

    // Interior grid, innermost shell first.
    let betas = geom.grid_betas(opts.grid.radii.max(2));
    let mut shells = Vec::with_capacity(betas.len());
    for &b in &betas {
        shells.push(geom.shell(b, &angles, dim)?);
    }
    let mut sup = f64::NEG_INFINITY;
    let mut inf = (f64::INFINITY, Vec::new());
    let mut sup_point = Vec::new();
    for x in shells.iter().flatten() {
        let y = v.eval(x);
        if !(y <= sup) {
            sup = y;
            sup_point = x.clone();
        }
        if !(y >= inf.0) {
            inf = (y, x.clone());
        }
    }
    let scale = sup.abs().max(1.0);
    let mut checks = Vec::new();

    let pos_ok = inf.0 >= -opts.tol * scale;
    checks.push(AxiomCheck {
        tag: AxiomTag::Positivity,
        passed: pos_ok,
        witness: (!pos_ok).then(|| inf.1.clone()),
        detail: format!("min over grid = {:e}", inf.0),
    });

    // (v0lo): probe shells approaching the boundary.
    let bmax = geom.beta_max();
    let shell_max = |beta: f64| -> Result<(f64, Vec<f64>)> {
        let mut best = (f64::NEG_INFINITY, Vec::new());
        for x in geom.shell(beta, &angles, dim)? {
            let y = v.eval(&x);
            if !(y <= best.0) {
                best = (y, x);
            }
        }
        Ok(best)
    };
    let probes = (0..=opts.boundary_samples)
        .map(|j| {
            let b = bmax * 0.5f64.powi(j as i32);
            shell_max(b).map(|s| (b, s))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut eps_schedule = Vec::new();
    let mut v0lo_witness = None;
    for &eps in &opts.eps_schedule {
        // Smallest index from which every probe stays below eps.
        let mut first_ok = probes.len();
        for (j, (_, (y, _))) in probes.iter().enumerate().rev() {
            if *y < eps {
                first_ok = j;
            } else {
                break;
            }
        }
        if first_ok == probes.len() {
            eps_schedule.push(EpsilonDelta {
                eps,
                delta: None,
                passed: false,
            });
            v0lo_witness.get_or_insert_with(|| probes.last().unwrap().1 .1.clone());
            continue;
        }
        let delta = if first_ok == 0 {
            bmax
        } else {
            // Bisect between the last failing and first passing probe.
            let (mut lo, mut hi) = (probes[first_ok].0, probes[first_ok - 1].0);
            for _ in 0..50 {
                let mid = 0.5 * (lo + hi);
                if shell_max(mid)?.0 < eps {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        };
        eps_schedule.push(EpsilonDelta {
            eps,
            delta: Some(delta),
            passed: true,
        });
    }
    let v0lo_ok = eps_schedule.iter().all(|e| e.passed);
    checks.push(AxiomCheck {
        tag: AxiomTag::V0lo,
        passed: v0lo_ok,
        witness: v0lo_witness,
        detail: if v0lo_ok {
            "v < eps near the boundary for every eps in the schedule".into()
        } else {
            format!(
                "v does not fall below {:e} near the boundary",
                eps_schedule
                    .iter()
                    .find(|e| !e.passed)
                    .map_or(f64::NAN, |e| e.eps)
            )
        },
    });

    // (v0ls) with the maximum principle: the sup sits next to K.
    let inner_max = shells[0]
        .iter()
        .map(|x| v.eval(x))
        .fold(f64::NEG_INFINITY, f64::max);
    let bounded = sup.is_finite();
    let max_ok = bounded && sup <= inner_max + opts.tol * scale;
    checks.push(AxiomCheck {
        tag: AxiomTag::V0ls,
        passed: max_ok,
        witness: (!max_ok).then(|| sup_point.clone()),
        detail: format!("sup over grid = {sup:e}, sup next to K = {inner_max:e}"),
    });

    let mut convexity = None;
    let mut laplacian = None;
    let sub_ok;
    let sub_witness;
    if let (true, Some(q), Geometry::Radial { r0, outer }) =
        (radial_input, v.radial_profile(), &geom)
    {
        let on_annulus = restrict_or_wrap(q, Interval::radial(*r0, *outer)?);
        let rep = check_convex_of_h(&on_annulus, domain.dimension(), opts.convexity_tol)?;
        sub_ok = rep.passed;
        sub_witness = rep.first_violation.as_ref().map(|w| {
            let r = crate::radial::h_inverse(domain.dimension(), w.s[1]).unwrap_or(f64::NAN);
            polar_point(r, 0.0, dim)
        });
        convexity = Some(rep);
    } else {
        let outer = domain.radius();
        let points: Vec<Vec<f64>> = shells
            .iter()
            .flatten()
            .filter(|x| {
                let h = stencil_step(x, outer);
                (0..dim).all(|i| {
                    [h, -h].iter().all(|&s| {
                        let mut y = (*x).clone();
                        y[i] += s;
                        geom.in_region(&y)
                    })
                })
            })
            .cloned()
            .collect();
        let f = |x: &[f64]| v.eval(x);
        let rep = check_laplacian(&f, &points, |x| stencil_step(x, outer), opts.laplacian_tol);
        sub_ok = rep.passed;
        sub_witness = rep.witness.clone();
        laplacian = Some(rep);
    }
    checks.push(AxiomCheck {
        tag: AxiomTag::Subharmonic,
        passed: sub_ok,
        witness: sub_witness,
        detail: if convexity.is_some() {
            "radial profile convex of h_m".into()
        } else {
            "discrete Laplacian nonnegative".into()
        },
    });

    Ok(ValidationReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
        eps_schedule,
        sup,
        grid: opts.grid,
        convexity,
        laplacian,
    })
}

fn restrict_or_wrap(q: &RadialProfile, annulus: Interval) -> RadialProfile {
    q.restricted(annulus).unwrap_or_else(|_| {
        let q = q.clone();
        RadialProfile::from_fn("v", annulus, move |r| q.value(r))
    })
}

fn stencil_step(x: &[f64], outer: f64) -> f64 {
    let r = norm(x);
    let mut h = 2e-3 * r.max(1e-3);
    if outer.is_finite() {
        h = h.min(0.25 * (outer - r));
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Family;
    use crate::radial::{Dimension, Direction, MonotoneDensity};
    use crate::testfn::{build_radial_testfn, green_superposition};

    fn dim(m: u32) -> Dimension {
        Dimension::new(m).unwrap()
    }

    #[test]
    fn log_test_function_passes() {
        let d = MonotoneDensity::constant(1.0, Direction::Decreasing).unwrap();
        let v = build_radial_testfn(&d, 1.0, 2.0, dim(2)).unwrap();
        let rep = validate_testfn(
            Candidate::TestFunction(&v),
            &v.domain(),
            &v.compact(),
            &Default::default(),
        )
        .unwrap();
        assert!(rep.passed, "{rep:?}");
        assert_eq!(rep.eps_schedule.len(), 3);
    }

    #[test]
    fn constant_fails_boundary_vanishing() {
        let one = |_: &[f64]| 1.0;
        let rep = validate_testfn(
            Candidate::Function(&one),
            &ModelDomain::ball(2.0, dim(2)).unwrap(),
            &Compact::Ball { radius: 1.0 },
            &ValidationOptions {
                grid: GridSpec {
                    radii: 32,
                    angles: 8,
                },
                ..Default::default()
            },
        )
        .unwrap();
        assert!(!rep.passed);
        assert_eq!(rep.failed(), vec![AxiomTag::V0lo]);
    }

    #[test]
    fn disk_green_function_passes() {
        let q = RadialProfile::from_family(
            Family::log_power(-1.0, 0.0, 1.0),
            Interval::radial(0.0, 1.0).unwrap(),
        )
        .unwrap();
        let rep = validate_testfn(
            Candidate::Radial(&q),
            &ModelDomain::disk(1.0, [0.0, 0.0]).unwrap(),
            &Compact::Ball { radius: 0.5 },
            &Default::default(),
        )
        .unwrap();
        assert!(rep.passed, "{rep:?}");
    }

    #[test]
    fn green_superposition_with_off_center_pole() {
        let disk = ModelDomain::disk(1.0, [0.3, -0.2]).unwrap();
        let q =
            RadialProfile::from_family(Family::power(1.0, 2.0), Interval::new(0.0, 2.0).unwrap())
                .unwrap();
        let v = green_superposition(&q, &disk, 1.0, 1e-12).unwrap();
        let rep = validate_testfn(
            Candidate::TestFunction(&v),
            &disk,
            &v.compact(),
            &ValidationOptions {
                grid: GridSpec {
                    radii: 64,
                    angles: 32,
                },
                ..Default::default()
            },
        )
        .unwrap();
        assert!(rep.passed, "{rep:?}");
        assert!(rep.laplacian.unwrap().points > 1000);
    }

    #[test]
    fn superharmonic_bump_fails() {
        // Positive, vanishing at |x| = 2, but concave in log r.
        let f = |x: &[f64]| {
            let s = norm(x).ln();
            let a = 2f64.ln();
            (a * a - s * s).max(0.0)
        };
        let rep = validate_testfn(
            Candidate::Function(&f),
            &ModelDomain::ball(2.0, dim(2)).unwrap(),
            &Compact::Ball { radius: 0.5 },
            &ValidationOptions {
                grid: GridSpec {
                    radii: 32,
                    angles: 8,
                },
                ..Default::default()
            },
        )
        .unwrap();
        assert!(rep.failed().contains(&AxiomTag::Subharmonic));
        assert!(rep.failed().contains(&AxiomTag::V0ls));
    }

    #[test]
    fn single_point_compact_is_rejected() {
        let one = |_: &[f64]| 1.0;
        assert!(matches!(
            validate_testfn(
                Candidate::Function(&one),
                &ModelDomain::ball(2.0, dim(2)).unwrap(),
                &Compact::Ball { radius: 0.0 },
                &Default::default(),
            ),
            Err(Error::Unsupported(_))
        ));
    }
}
