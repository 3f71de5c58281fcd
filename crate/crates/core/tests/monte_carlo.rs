//! Size and power of the tests over seeded replications.

mod common;

use armey::diagnostics::{jarque_bera, white_test};
use armey::numerics::{AdfVariant, BreakType, Level};
use armey::ols::{fit, recursive_residuals};
use armey::simulate::seeded_rng;
use armey::unitroot::{adf_test, select_lag_bic, zivot_andrews, AdfConfig, Series, ZaConfig};
use common::*;
use rand::Rng;

fn random_walk(seed: u64, n: usize) -> Series {
    let mut rng = seeded_rng(seed);
    let mut x = 0.0;
    let v = normals(&mut rng, n).into_iter().map(|e| { x += e; x }).collect();
    Series::from_values("rw", v)
}

fn ar1(seed: u64, n: usize, phi: f64) -> Series {
    let mut rng = seeded_rng(seed);
    let mut x = 0.0;
    let v = normals(&mut rng, n).into_iter().map(|e| { x = phi * x + e; x }).collect();
    Series::from_values("ar1", v)
}

#[test]
fn adf_size_on_random_walks() {
    let cfg = AdfConfig { max_lag: Some(4), ..Default::default() };
    let r = rate(1000, |s| adf_test(&random_walk(10_000 + s as u64, 500), &cfg).unwrap().verdicts.rejects(Level::Five));
    assert!((0.025..=0.08).contains(&r), "rejection rate {r}");
}

#[test]
fn adf_power_on_stationary_ar1() {
    let r = rate(300, |s| adf_test(&ar1(20_000 + s as u64, 500, 0.3), &AdfConfig::default()).unwrap().verdicts.rejects(Level::One));
    assert!(r >= 0.99, "rejection rate {r}");
}

#[test]
fn bic_picks_no_lags_for_white_noise() {
    let r = rate(1000, |s| {
        let mut rng = seeded_rng(30_000 + s as u64);
        let mut x = 0.0;
        let v: Vec<f64> = normals(&mut rng, 200).into_iter().map(|e| { x += e; x }).collect();
        select_lag_bic(&Series::from_values("x", v), AdfVariant::Drift, 8).unwrap() == 0
    });
    assert!(r >= 0.90, "lag 0 chosen in {r}");
}

#[test]
fn bic_finds_second_order_dynamics() {
    let r = rate(300, |s| {
        let mut rng = seeded_rng(40_000 + s as u64);
        let (mut d1, mut d2, mut x) = (0.0, 0.0, 0.0);
        let v: Vec<f64> = normals(&mut rng, 200)
            .into_iter()
            .map(|e| {
                let d = 0.5 * d1 + 0.35 * d2 + e;
                d2 = d1;
                d1 = d;
                x += d;
                x
            })
            .collect();
        select_lag_bic(&Series::from_values("x", v), AdfVariant::Drift, 8).unwrap() >= 2
    });
    assert!(r > 0.5, "lag >= 2 chosen in {r}");
}

#[test]
fn white_size_under_homoscedasticity() {
    let r = rate(1000, |s| {
        let mut rng = seeded_rng(50_000 + s as u64);
        let x1: Vec<f64> = (0..200).map(|_| rng.random_range(1.0..5.0)).collect();
        let x2 = normals(&mut rng, 200);
        let e = normals(&mut rng, 200);
        let y: Vec<f64> = (0..200).map(|i| 1.0 + 0.5 * x1[i] - x2[i] + e[i]).collect();
        let f = fit(&design(&[&x1, &x2], &y)).unwrap();
        white_test(&f, true).unwrap().verdicts.rejects(Level::Five)
    });
    assert!((0.025..=0.08).contains(&r), "rejection rate {r}");
}

#[test]
fn recursive_residuals_look_normal_under_the_null() {
    let r = rate(1000, |s| {
        let mut rng = seeded_rng(60_000 + s as u64);
        let x = normals(&mut rng, 100);
        let e = normals(&mut rng, 100);
        let y: Vec<f64> = (0..100).map(|i| 2.0 - x[i] + e[i]).collect();
        let w = recursive_residuals(&design(&[&x], &y)).unwrap();
        !jarque_bera(&w).unwrap().verdicts.rejects(Level::One)
    });
    assert!(r >= 0.97, "pass rate {r}");
}

#[test]
fn zivot_andrews_locates_a_level_shift() {
    let cfg = ZaConfig { break_type: BreakType::Intercept, max_lag: Some(4), ..Default::default() };
    let mut located = 0;
    let mut rejected = 0;
    let seeds = 50;
    for s in 0..seeds {
        let mut rng = seeded_rng(70_000 + s);
        let mut u = 0.0;
        let v: Vec<f64> = normals(&mut rng, 100)
            .into_iter()
            .enumerate()
            .map(|(t, e)| {
                u = 0.3 * u + e;
                0.05 * t as f64 + if t > 30 { 8.0 } else { 0.0 } + u
            })
            .collect();
        let r = zivot_andrews(&Series::from_values("x", v), &cfg).unwrap();
        located += usize::from(r.break_index.abs_diff(30) <= 2);
        rejected += usize::from(r.verdicts.rejects(Level::Five));
    }
    assert!(located as f64 >= 0.9 * seeds as f64, "located {located}/{seeds}");
    assert!(rejected as f64 >= 0.9 * seeds as f64, "rejected {rejected}/{seeds}");
}
