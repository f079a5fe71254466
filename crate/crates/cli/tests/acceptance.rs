//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use subharm::family::Family;
use subharm::green::ModelDomain;
use subharm::radial::{
    build_profile_from_density, build_profile_from_density_unchecked, check_convex_of_h,
    invert_point, pole_mass, radial_riesz_measure, riesz_constant, Dimension, Direction, Interval,
    MonotoneDensity, Point, RadialProfile,
};
use subharm::testfn::{
    build_radial_testfn, differentiate_profile, green_derived_density, growth_envelope_green,
    growth_envelope_radial, validate_testfn, Candidate, ValidationOptions,
};
use subharm::uniqueness::{
    green_verdict, ibp_check_green, ibp_check_radial, radial_verdict, CriterionOptions,
    GreenIbpInput, IbpTolerances, Verdict, ZeroPoint, ZeroSet,
};

type Outcome = Result<String, String>;

const GAMMAS: [(f64, bool); 4] = [(0.5, true), (1.0, true), (1.5, false), (2.0, false)];
const COUNT: u32 = 100_000;

fn dim(m: u32) -> Dimension {
    Dimension::new(m).unwrap()
}

fn profile(f: Family, lo: f64, hi: f64) -> RadialProfile {
    RadialProfile::from_family(f, Interval::new(lo, hi).unwrap()).unwrap()
}

fn generator(gamma: f64) -> ZeroSet {
    ZeroSet::Generator {
        gamma,
        count: COUNT,
        multiplicity: 1,
        radius: None,
        symbolic_tail: true,
    }
}

fn unit_disk() -> ModelDomain {
    ModelDomain::disk(1.0, [0.0, 0.0]).unwrap()
}

fn green_blaschke(gamma: f64) -> Result<Verdict, String> {
    let f0 = profile(Family::constant(0.0), f64::NEG_INFINITY, 0.0);
    let env = growth_envelope_green(&f0, &unit_disk(), 1e-9).map_err(|e| e.to_string())?;
    let q = profile(Family::power(1.0, 1.0), 0.0, f64::INFINITY);
    let r = green_verdict(
        &env,
        &q,
        &generator(gamma),
        &unit_disk(),
        1.0,
        &CriterionOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    if r.unknown {
        return Err(format!("gamma {gamma}: unknown classification"));
    }
    Ok(r.verdict)
}

fn criterion_1() -> Outcome {
    let mut worst = 0.0f64;
    for (gamma, forced) in GAMMAS {
        let t = Instant::now();
        let v = green_blaschke(gamma)?;
        let secs = t.elapsed().as_secs_f64();
        worst = worst.max(secs);
        if (v == Verdict::ForcedZero) != forced {
            return Err(format!("gamma {gamma}: got {v:?}"));
        }
        if secs >= 2.0 {
            return Err(format!("gamma {gamma}: {secs:.2} s"));
        }
    }
    Ok(format!("4 scenarios, slowest {worst:.3} s"))
}

fn criterion_2() -> Outcome {
    let disk = unit_disk();
    let r0 = 0.5;
    let d = green_derived_density(&disk, r0, 257).map_err(|e| e.to_string())?;
    let q0 = profile(Family::constant(0.0), 0.0, 1.0);
    let env = growth_envelope_radial(&q0, dim(2), 1e-9).map_err(|e| e.to_string())?;
    for (gamma, _) in GAMMAS {
        let radial = radial_verdict(
            &env,
            &d,
            &generator(gamma),
            r0,
            1.0,
            1,
            &CriterionOptions::default(),
        )
        .map_err(|e| e.to_string())?;
        let green = green_blaschke(gamma)?;
        if radial.verdict != green || radial.unknown {
            return Err(format!(
                "gamma {gamma}: radial {:?} (unknown {}) vs green {green:?}",
                radial.verdict, radial.unknown
            ));
        }
    }
    Ok("radial and Green verdicts agree on 4 scenarios".into())
}

fn random_annulus_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<ZeroPoint> {
    (0..n)
        .map(|_| {
            let r = (1.0 + 3.0 * rng.gen::<f64>()).sqrt();
            let th = rng.gen::<f64>() * std::f64::consts::TAU;
            ZeroPoint {
                z: [r * th.cos(), r * th.sin()],
                multiplicity: 1,
            }
        })
        .collect()
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let z = ZeroSet::points(random_annulus_points(&mut rng, 100));
    let d = MonotoneDensity::parametric(1.0, 1.0, 0.0, Direction::Decreasing).unwrap();
    let r = ibp_check_radial(&d, &z, 1.0, 2.0, dim(2), &IbpTolerances::default())
        .map_err(|e| e.to_string())?;
    let res = r.checks[0].residual;
    if res < 1e-10 {
        Ok(format!("residual {res:.2e}"))
    } else {
        Err(format!("residual {res:.2e}"))
    }
}

fn criterion_4() -> Outcome {
    let q = profile(Family::power(1.0, 1.0), 0.0, f64::INFINITY);
    let f = profile(
        Family::Exp {
            coef: 1.0,
            rate: 1.0,
        },
        f64::NEG_INFINITY,
        0.0,
    );
    let disk = unit_disk();
    let r = ibp_check_green(
        &GreenIbpInput {
            q: &q,
            f: Some(&f),
            zeros: None,
            domain: &disk,
            t0: 1.0,
            delta: 1e-6,
        },
        &IbpTolerances::default(),
    )
    .map_err(|e| e.to_string())?;
    let c = r
        .checks
        .iter()
        .find(|c| c.name == "meqM")
        .ok_or("mass identity skipped")?;
    if c.paths.len() == 3 && c.residual < 1e-8 {
        Ok(format!("3 paths, residual {:.2e}", c.residual))
    } else {
        Err(format!(
            "{} paths, residual {:.2e}",
            c.paths.len(),
            c.residual
        ))
    }
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for m in [1, 2, 3, 5] {
        let h = profile(
            Family::Harmonic {
                m,
                scale: 1.0,
                offset: 0.0,
            },
            0.0,
            f64::INFINITY,
        );
        for _ in 0..20 {
            let a = 0.05 + 3.0 * rng.gen::<f64>();
            let b = a + 0.01 + 3.0 * rng.gen::<f64>();
            let mass = radial_riesz_measure(&h, dim(m), a, b).map_err(|e| e.to_string())?;
            worst = worst.max(mass.abs());
            if mass.abs() > 1e-9 {
                return Err(format!("m = {m}, ({a}, {b}]: mass {mass:e}"));
            }
        }
    }
    for m in [2, 3, 5] {
        let neg_g = ModelDomain::ball(1.0, dim(m))
            .and_then(|d| d.neg_green_profile())
            .map_err(|e| e.to_string())?;
        let mass = pole_mass(&neg_g, dim(m), 1e-9).map_err(|e| e.to_string())?;
        if (mass - 1.0).abs() > 1e-9 {
            return Err(format!("m = {m}: pole mass {mass}"));
        }
    }
    Ok(format!("80 annuli, max |mass| {worst:.1e}; pole masses 1"))
}

fn increasing_samples(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Vec<[f64; 2]> {
    let n = rng.gen_range(6..14);
    let mut xs: Vec<f64> = (0..n - 2).map(|_| rng.gen_range(lo..hi)).collect();
    xs.push(lo);
    xs.push(hi);
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
    let mut y = rng.gen_range(0.1..2.0);
    xs.iter()
        .map(|&x| {
            let p = [x, y];
            y += rng.gen_range(0.05..1.0);
            p
        })
        .collect()
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut false_neg, mut false_pos) = (0, 0);
    for i in 0..100 {
        let m = dim(rng.gen_range(1..=4));
        let mut pts = increasing_samples(&mut rng, 1.0, 2.0);
        let range = Interval::radial(1.0, 2.0).unwrap();
        let inject = i >= 50;
        let q = if inject {
            let j = rng.gen_range(1..pts.len() - 1);
            let drop = pts[j][1] - pts[j - 1][1] + rng.gen_range(0.3..1.5);
            for p in &mut pts[j..] {
                p[1] -= drop;
            }
            let d = MonotoneDensity::from_samples_unchecked(&pts, Direction::Increasing).unwrap();
            build_profile_from_density_unchecked(&d, 1.0, 0.0, m, range)
        } else {
            let d = MonotoneDensity::from_samples(&pts, Direction::Increasing).unwrap();
            build_profile_from_density(&d, 1.0, 0.0, m, range)
        }
        .map_err(|e| e.to_string())?;
        let passed = check_convex_of_h(&q, m, 1e-9)
            .map_err(|e| e.to_string())?
            .passed;
        match (inject, passed) {
            (false, false) => false_neg += 1,
            (true, true) => false_pos += 1,
            _ => {}
        }
    }
    if false_neg + false_pos == 0 {
        Ok("50 valid accepted, 50 violations rejected".into())
    } else {
        Err(format!(
            "{false_neg} valid rejected, {false_pos} violations accepted"
        ))
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for i in 0..20 {
        let m = dim(if i % 2 == 0 { 2 } else { 4 });
        let mut pts = increasing_samples(&mut rng, 1.0, 2.0);
        let top = pts.last().unwrap()[1] + 0.5;
        for p in &mut pts {
            p[1] = top - p[1];
        }
        let d = MonotoneDensity::from_samples(&pts, Direction::Decreasing).unwrap();
        let v = build_radial_testfn(&d, 1.0, 2.0, m).map_err(|e| e.to_string())?;
        let rep = validate_testfn(
            Candidate::TestFunction(&v),
            &v.domain(),
            &v.compact(),
            &ValidationOptions::default(),
        )
        .map_err(|e| e.to_string())?;
        if !rep.passed || rep.eps_schedule.iter().any(|e| !e.passed) {
            return Err(format!("density {i}: failed {:?}", rep.failed()));
        }
        let mids: Vec<f64> = pts.windows(2).map(|w| 0.5 * (w[0][0] + w[1][0])).collect();
        let rec =
            differentiate_profile(v.profile().unwrap(), m, &mids).map_err(|e| e.to_string())?;
        for p in rec {
            worst = worst.max((p[1] - d.value(p[0])).abs());
        }
    }
    if worst < 1e-6 {
        Ok(format!(
            "20 densities validated, recovery error {worst:.1e}"
        ))
    } else {
        Err(format!("recovery error {worst:.1e}"))
    }
}

fn criterion_8() -> Outcome {
    use std::f64::consts::PI;
    let expect = [
        (1, 0.5),
        (2, 1.0 / (2.0 * PI)),
        (3, 1.0 / (4.0 * PI)),
        (4, 1.0 / (4.0 * PI * PI)),
    ];
    for (m, c) in expect {
        let got = riesz_constant(dim(m));
        if ((got - c) / c).abs() > 1e-14 {
            return Err(format!("m = {m}: {got} vs {c}"));
        }
    }
    Ok("m = 1..4".into())
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let m = dim(2);
    for i in 0..10 {
        let pts = increasing_samples(&mut rng, 0.5, 2.0);
        let d = MonotoneDensity::from_samples(&pts, Direction::Increasing).unwrap();
        let q = build_profile_from_density(
            &d,
            0.5,
            rng.gen_range(-1.0..1.0),
            m,
            Interval::radial(0.5, 2.0).unwrap(),
        )
        .map_err(|e| e.to_string())?;
        let k = q.kelvin(m).map_err(|e| e.to_string())?;
        let dom = k.domain();
        if (dom.lo - 0.5).abs() > 1e-15 || (dom.hi - 2.0).abs() > 1e-15 {
            return Err(format!(
                "profile {i}: Kelvin domain ({}, {})",
                dom.lo, dom.hi
            ));
        }
        if !check_convex_of_h(&k, m, 1e-9)
            .map_err(|e| e.to_string())?
            .passed
        {
            return Err(format!("profile {i}: Kelvin transform not convex of h_2"));
        }
    }
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=5);
        let scale = 10f64.powf(rng.gen_range(-3.0..3.0));
        let x: Vec<f64> = (0..n).map(|_| scale * rng.gen_range(-1.0..1.0)).collect();
        match invert_point(&invert_point(&Point::Finite(x.clone()))) {
            Point::Finite(y) => {
                let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
                let diff = x
                    .iter()
                    .zip(&y)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                worst = worst.max(diff / norm);
            }
            Point::Infinity { .. } => return Err(format!("{x:?} went to infinity")),
        }
    }
    if worst > 1e-12 {
        return Err(format!("double inversion error {worst:.1e}"));
    }
    Ok(format!(
        "10 Kelvin profiles convex; inversion error {worst:.1e}"
    ))
}

fn write_config(dir: &Path, name: &str, v: &Value) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn run_cli(args: &[&str]) -> Result<(i32, Value), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_subharm"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    let code = out.status.code().ok_or("killed by signal")?;
    let mut v: Value = serde_json::from_slice(&out.stdout)
        .map_err(|e| format!("{args:?}: bad JSON report: {e}"))?;
    v.as_object_mut().unwrap().remove("timing_ms");
    Ok((code, v))
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut runs: Vec<(Vec<String>, i32)> = Vec::new();
    for (gamma, forced) in GAMMAS {
        let cfg = serde_json::json!({
            "domain": {"kind": "disk", "radius": 1.0, "pole": [0.0, 0.0]},
            "radial": {"q": {"family": "constant", "value": 0.0}, "density": {"kind": "green-derived"}},
            "green": {"F": {"family": "constant", "value": 0.0},
                      "q": {"family": "power", "coef": 1.0, "exponent": 1.0}},
            "zero_set": {"kind": "generator", "gamma": gamma, "count": COUNT}
        });
        let p = write_config(dir.path(), &format!("blaschke_{gamma}.json"), &cfg);
        let code = if forced { 0 } else { 3 };
        for mode in ["green", "radial"] {
            runs.push((
                vec![
                    "--config".into(),
                    p.display().to_string(),
                    "verdict".into(),
                    "--mode".into(),
                    mode.into(),
                ],
                code,
            ));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let points: Vec<Value> = random_annulus_points(&mut rng, 100)
        .iter()
        .map(|p| serde_json::json!({"z": p.z, "multiplicity": p.multiplicity}))
        .collect();
    let radial_ibp = serde_json::json!({
        "domain": {"kind": "ball", "radius": 2.0, "m": 2},
        "radial": {"q": {"family": "constant", "value": 0.0},
                   "density": {"kind": "parametric", "direction": "decreasing", "c": 1.0, "alpha": 1.0},
                   "r0": 1.0},
        "zero_set": {"kind": "points", "points": points}
    });
    let p = write_config(dir.path(), "radial_ibp.json", &radial_ibp);
    runs.push((
        vec!["--config".into(), p.display().to_string(), "ibp".into()],
        0,
    ));
    let green_ibp = serde_json::json!({
        "domain": {"kind": "disk", "radius": 1.0, "pole": [0.0, 0.0]},
        "green": {"F": {"family": "exp", "coef": 1.0, "rate": 1.0},
                  "q": {"family": "power", "coef": 1.0, "exponent": 1.0},
                  "t0": 1.0, "delta": 1e-6}
    });
    let p = write_config(dir.path(), "green_ibp.json", &green_ibp);
    runs.push((
        vec!["--config".into(), p.display().to_string(), "ibp".into()],
        0,
    ));

    for (args, expect) in &runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (c1, r1) = run_cli(&args)?;
        let (c2, r2) = run_cli(&args)?;
        if c1 != *expect || c2 != *expect {
            return Err(format!("{args:?}: exit {c1}/{c2}, expected {expect}"));
        }
        if r1 != r2 {
            return Err(format!("{args:?}: reports differ between runs"));
        }
        if r1.get("verdict").is_none() {
            return Err(format!("{args:?}: report has no verdict field"));
        }
    }
    Ok(format!(
        "{} runs reproduced with expected exit codes",
        runs.len()
    ))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("Blaschke oracle", criterion_1),
        ("radial/Green cross-consistency", criterion_2),
        (
            "radial integration by parts, 100 random points",
            criterion_3,
        ),
        ("mass integration by parts, dual paths", criterion_4),
        ("harmonicity null tests", criterion_5),
        ("convexity of h_m equivalence suite", criterion_6),
        ("radial test function round trip", criterion_7),
        ("Riesz constants", criterion_8),
        ("Kelvin involution", criterion_9),
        ("CLI determinism and exit codes", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
