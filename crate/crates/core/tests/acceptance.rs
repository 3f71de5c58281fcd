//! Acceptance suite: one PASS/FAIL/SKIP line per criterion.
//!
//! Criteria 1-8 need nothing outside the repository and fail the run when
//! they fail. Criteria 9-11 compare against the published estimates and run
//! only when `ARMEY_REPLICATION_DATA` names a reconstructed dataset
//! (optionally with `ARMEY_REPLICATION_SCHEMA`); their failures are reported
//! without failing the run, since they depend on the data vintage.

mod common;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use armey::armey::{build_ortho_basis, fit_armey_model, optimal_share, vertex_on_raw_scale, SpendingVariable};
use armey::config::RunConfig;
use armey::dataset::vars;
use armey::diagnostics::{breusch_godfrey, cusum_test, jarque_bera, white_test};
use armey::numerics::{lookup_critical, solve_least_squares, AdfVariant, Level, TestFamily, CUSUM_PARAMETERS};
use armey::ols::fit;
use armey::pipeline::{self, estimation_series, published, replication_checks, Check};
use armey::simulate::{sample_model, seeded_rng, simulate_raw, SimulationConfig, Truth};
use armey::unitroot::{adf_test, argmin_first, select_lag_bic, AdfConfig, Series};
use common::*;
use rand::Rng;

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

use Outcome::*;

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Pass(detail)
    } else {
        Fail(detail)
    }
}

fn optimum_formula() -> Outcome {
    let a = optimal_share(9.155, -0.848).unwrap();
    let b = optimal_share(2.820, -0.195).unwrap();
    let round2 = |v: f64| (v * 100.0).round() / 100.0;
    let ok = (a - 5.398).abs() <= 0.001
        && (b - 7.231).abs() <= 0.001
        && round2(a) == published::OPTIMA[0]
        && round2(b) == published::OPTIMA[1];
    verdict(ok, format!("optima {a:.4} and {b:.4}"))
}

fn ols_oracle() -> Outcome {
    let mut rng = seeded_rng(2);
    let mut worst: f64 = 0.0;
    let mut worst_orth: f64 = 0.0;
    for i in 0..1000 {
        let k = 1 + i % 12;
        let n = rng.random_range(k + 3..=60);
        let (x, y) = random_system(&mut rng, n, k);
        let qr = solve_least_squares(&x, &y).unwrap();
        let ne = normal_equations(&x, &y);
        let scale = ne.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        let diff = qr.beta.iter().zip(&ne).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale;
        worst = worst.max(diff);

        let cols: Vec<Vec<f64>> = (1..k).map(|j| x.column(j)).collect();
        let refs: Vec<&[f64]> = cols.iter().map(|c| c.as_slice()).collect();
        let f = fit(&design(&refs, &y)).unwrap();
        let ynorm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        let xte = f.design.x.tr_mul_vec(&f.residuals);
        worst_orth = worst_orth.max(xte.iter().fold(0.0_f64, |m, v| m.max(v.abs())) / ynorm);
    }
    verdict(
        worst <= 1e-8 && worst_orth <= 1e-8,
        format!("max relative gap {worst:.1e}, max |X'e|/|y| {worst_orth:.1e} over 1000 systems"),
    )
}

fn synthetic_recovery() -> Outcome {
    let truth = Truth::default();
    let target = truth.gfcf_optimum();
    let seeds = 500;
    let mut covered = [0usize; 5];
    let mut near = 0;
    for s in 0..seeds {
        let mut rng = seeded_rng(1_000 + s);
        let frame = sample_model(&mut rng, 200, &truth).unwrap();
        let m = fit_armey_model(&frame, SpendingVariable::Gfcf).unwrap();
        for j in 0..5 {
            covered[j] += usize::from((m.fit.beta[j] - truth.beta[j]).abs() <= 3.0 * m.fit.se[j]);
        }
        near += usize::from(m.optimum_share.is_some_and(|o| (o - target).abs() <= 0.3));
    }
    let cover: Vec<f64> = covered.iter().map(|c| *c as f64 / seeds as f64).collect();
    let near = near as f64 / seeds as f64;
    let ok = cover.iter().all(|c| *c >= 0.98) && near >= 0.95;
    verdict(ok, format!("3-SE coverage {cover:?}, optimum within 0.3 in {near:.3}"))
}

fn ortho_basis() -> Outcome {
    let mut rng = seeded_rng(4);
    let (mut gram, mut span, mut vertex): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut vertices = 0;
    for _ in 0..100 {
        let n = 45;
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(2.0..11.0)).collect();
        let b = build_ortho_basis("x", &x).unwrap();
        let ones = vec![1.0; n];
        let cols = [&ones, &b.p1, &b.p2];
        for i in 0..3 {
            for j in 0..3 {
                let g: f64 = cols[i].iter().zip(cols[j]).map(|(p, q)| p * q).sum();
                gram = gram.max((g - if i == j { n as f64 } else { 0.0 }).abs());
            }
        }

        let e = normals(&mut rng, n);
        let y: Vec<f64> = x.iter().zip(&e).map(|(v, e)| -3.0 + 2.0 * v - 0.2 * v * v + e).collect();
        let sq: Vec<f64> = x.iter().map(|v| v * v).collect();
        let raw = fit(&design(&[&x, &sq], &y)).unwrap();
        let orth = fit(&design(&[&b.p1, &b.p2], &y)).unwrap();
        let gap = raw.fitted.iter().zip(&orth.fitted).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        span = span.max(gap).max((raw.r2 - orth.r2).abs());

        let (a1, a2) = (orth.beta[1], orth.beta[2]);
        if let Ok(v) = vertex_on_raw_scale(&b, a1, a2) {
            if v.exact > b.min && v.exact < b.max {
                let g = grid_argmax(|s| { let (p1, p2) = b.eval(s); a1 * p1 + a2 * p2 }, b.min, b.max);
                vertex = vertex.max((g - v.exact).abs());
                vertices += 1;
            }
        }
    }
    let ok = gram <= 1e-8 && span <= 1e-9 && vertex <= 1e-6 && vertices > 50;
    verdict(
        ok,
        format!("Gram gap {gram:.1e}, span gap {span:.1e}, vertex gap {vertex:.1e} ({vertices} interior vertices)"),
    )
}

fn diagnostic_monte_carlo() -> Outcome {
    let jb = rate(2000, |s| {
        let mut rng = seeded_rng(100_000 + s as u64);
        jarque_bera(&normals(&mut rng, 1000)).unwrap().verdicts.rejects(Level::Five)
    });
    let bg = rate(500, |s| {
        let mut rng = seeded_rng(200_000 + s as u64);
        let x = normals(&mut rng, 200);
        let mut u = 0.0;
        let y: Vec<f64> = normals(&mut rng, 200)
            .iter()
            .zip(&x)
            .map(|(e, x)| {
                u = 0.8 * u + e;
                1.0 + x + u
            })
            .collect();
        breusch_godfrey(&fit(&design(&[&x], &y)).unwrap(), 1).unwrap().verdicts.rejects(Level::One)
    });
    let white = rate(500, |s| {
        let mut rng = seeded_rng(300_000 + s as u64);
        let x: Vec<f64> = (0..200).map(|_| rng.random_range(1.0..5.0)).collect();
        let e = normals(&mut rng, 200);
        let y: Vec<f64> = x.iter().zip(&e).map(|(x, e)| 1.0 + 0.5 * x + x * e).collect();
        white_test(&fit(&design(&[&x], &y)).unwrap(), true).unwrap().verdicts.rejects(Level::Five)
    });
    let cusum = rate(500, |s| {
        let mut rng = seeded_rng(400_000 + s as u64);
        cusum_test(&break_fixture(&mut rng, 100, 50, 5.0, 1.0)).unwrap().verdicts.rejects(Level::Five)
    });
    let ok = (0.02..=0.09).contains(&jb) && bg >= 0.99 && white >= 0.90 && cusum >= 0.90;
    verdict(ok, format!("JB size {jb:.3}, BG power {bg:.3}, White power {white:.3}, CUSUM power {cusum:.3}"))
}

fn cusum_parameters() -> Outcome {
    let table = lookup_critical(TestFamily::Cusum, None).unwrap();
    let exact = CUSUM_PARAMETERS == [1.143, 0.947, 0.850] && table.values == CUSUM_PARAMETERS;
    let mut designs = Vec::new();
    let x: Vec<f64> = (0..40).map(|i| (i as f64).cos()).collect();
    let y: Vec<f64> = x.iter().map(|v| 1.0 - 2.0 * v).collect();
    designs.push(design(&[&x], &y));
    for s in 0..50 {
        let mut rng = seeded_rng(500 + s);
        designs.push(break_fixture(&mut rng, 100, 50, if s % 2 == 0 { 5.0 } else { 0.0 }, 1.0));
    }
    let frame = fixture_frame();
    for v in SpendingVariable::ALL {
        designs.push(fit_armey_model(&frame, v).unwrap().fit.design);
    }
    let mut mismatches = 0;
    for d in &designs {
        let c = cusum_test(d).unwrap();
        for l in Level::ALL {
            mismatches += usize::from(c.exits_band(l) != (c.statistic >= c.parameters[l.index()]));
            mismatches += usize::from(c.verdicts.rejects(l) != c.exits_band(l));
        }
    }
    verdict(
        exact && mismatches == 0,
        format!("parameters {:?}, {mismatches} verdict mismatches on {} fixtures", table.values, designs.len()),
    )
}

fn adf_invariance() -> Outcome {
    let mut series = vec![estimation_series(&fixture_frame(), vars::GGDP).unwrap()];
    for s in 0..50 {
        let mut rng = seeded_rng(600 + s);
        let mut x = 0.0;
        series.push(Series::from_values("x", normals(&mut rng, 120).into_iter().map(|e| { x = 0.7 * x + e; x }).collect()));
    }
    let mut gap: f64 = 0.0;
    let mut repeat_ok = true;
    for s in &series {
        for variant in [AdfVariant::NoConstant, AdfVariant::Drift, AdfVariant::Trend] {
            let cfg = AdfConfig { variant, ..Default::default() };
            let a = adf_test(s, &cfg).unwrap();
            for c in [1000.0, 1e-3] {
                let b = adf_test(&s.scaled(c), &cfg).unwrap();
                gap = gap.max((a.statistic - b.statistic).abs());
                repeat_ok &= a.chosen_lag == b.chosen_lag;
            }
            repeat_ok &= adf_test(s, &cfg).unwrap() == a;
            let lag = select_lag_bic(s, variant, 6).unwrap();
            repeat_ok &= lag <= 6 && select_lag_bic(s, variant, 6).unwrap() == lag;
            repeat_ok &= select_lag_bic(s, variant, 0).unwrap() == 0;
        }
    }
    let ties = argmin_first(&[3.0, 1.0, 1.0, 2.0]) == Some(1) && argmin_first(&[1.0, 1.0]) == Some(0);
    verdict(
        gap <= 1e-9 && repeat_ok && ties,
        format!("max statistic change under rescaling {gap:.1e}; lag choice repeatable: {repeat_ok}; ties to smaller lag: {ties}"),
    )
}

fn golden_outputs() -> Outcome {
    let regenerated = simulate_raw(&SimulationConfig::default()).unwrap().frame.to_csv_string();
    let bundled = std::fs::read_to_string(fixture_csv()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig {
        data: Some(fixture_csv()),
        output_dir: dir.path().to_path_buf(),
        ..Default::default()
    };
    let (_, first) = pipeline::cmd_replicate(&cfg).unwrap();
    let before: Vec<Vec<u8>> = first.files.iter().map(|f| std::fs::read(f).unwrap()).collect();
    let (_, second) = pipeline::cmd_replicate(&cfg).unwrap();
    let same = second.files.iter().zip(&before).all(|(f, b)| std::fs::read(f).unwrap() == *b);
    verdict(
        same && first.files == second.files && regenerated == bundled,
        format!("{} output files identical across runs; fixture regenerates: {}", first.files.len(), regenerated == bundled),
    )
}

fn replication_group(prefixes: &[&str], note: &str) -> Outcome {
    let Some(data) = std::env::var_os("ARMEY_REPLICATION_DATA") else {
        return Skip(format!("set ARMEY_REPLICATION_DATA to a reconstructed dataset{note}"));
    };
    let cfg = RunConfig {
        data: Some(PathBuf::from(data)),
        schema: std::env::var_os("ARMEY_REPLICATION_SCHEMA").map(PathBuf::from),
        ..Default::default()
    };
    let r = match pipeline::run_replication(&cfg) {
        Ok(r) => r,
        Err(e) => return Fail(e.to_string()),
    };
    let checks: Vec<Check> = replication_checks(&r)
        .into_iter()
        .filter(|c| prefixes.iter().any(|p| c.name.starts_with(p)))
        .collect();
    for c in &checks {
        println!("      {}", c.line());
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    verdict(failed == 0, format!("{failed} of {} checks outside tolerance", checks.len()))
}

fn paper_vertices() -> String {
    let a = -1.427 / (2.0 * -1.657);
    let b = 2.486 / (2.0 * -2.264);
    format!("; published coefficients give vertices {a:.4} and {b:.4}")
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, Box<dyn Fn() -> Outcome>, bool);
    let criteria: Vec<Criterion> = vec![
        (1, "optimum formula", Box::new(optimum_formula), true),
        (2, "least squares against normal equations", Box::new(ols_oracle), true),
        (3, "synthetic recovery", Box::new(synthetic_recovery), true),
        (4, "orthogonal basis", Box::new(ortho_basis), true),
        (5, "diagnostic size and power", Box::new(diagnostic_monte_carlo), true),
        (6, "CUSUM parameters and verdicts", Box::new(cusum_parameters), true),
        (7, "ADF scale invariance and lag choice", Box::new(adf_invariance), true),
        (8, "byte-identical outputs", Box::new(golden_outputs), true),
        (9, "growth models against published estimates", Box::new(|| replication_group(&["model.", "optimum."], "")), false),
        (10, "robustness model against published estimates", Box::new(|| replication_group(&["robustness."], &paper_vertices())), false),
        (11, "diagnostics against published statistics", Box::new(|| replication_group(&["diagnostics.", "cusum.", "za."], "")), false),
    ];
    let mut core_failed = false;
    for (id, name, run, core) in &criteria {
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        let (tag, detail) = match outcome {
            Pass(d) => ("PASS", d),
            Fail(d) => {
                core_failed |= *core;
                ("FAIL", d)
            }
            Skip(d) => ("SKIP", d),
        };
        println!("{tag} {id:>2} {name} ({secs:.2}s): {detail}");
    }
    if core_failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
