//! ADF with BIC lag selection, and Zivot-Andrews break tests.
//!
//! cargo run --example unit_root

use armey::numerics::{AdfVariant, BreakType};
use armey::simulate::seeded_rng;
use armey::unitroot::{adf_test, zivot_andrews, AdfConfig, Series, ZaConfig};
use rand_distr::{Distribution, StandardNormal};

fn main() -> armey::Result<()> {
    let mut rng = seeded_rng(1);
    let shocks: Vec<f64> = (0..200).map(|_| StandardNormal.sample(&mut rng)).collect();

    let mut level = 0.0;
    let walk: Vec<f64> = shocks.iter().map(|e| { level += e; level }).collect();
    let mut x = 0.0;
    let stationary: Vec<f64> = shocks.iter().map(|e| { x = 0.3 * x + e; x }).collect();

    for (name, values) in [("random walk", walk), ("AR(1) 0.3", stationary.clone())] {
        let r = adf_test(&Series::from_values(name, values), &AdfConfig { variant: AdfVariant::Drift, ..Default::default() })?;
        println!(
            "{name:<12} ADF {:>7.3}  lag {}  5% cv {:.3}  reject: {}",
            r.statistic,
            r.chosen_lag,
            r.critical_values.values[1],
            r.verdicts.stars()
        );
    }

    let shifted: Vec<f64> = stationary.iter().enumerate().map(|(t, v)| v + if t > 120 { 6.0 } else { 0.0 }).collect();
    let s = Series::from_values("shifted", shifted);
    for bt in [BreakType::Intercept, BreakType::Both] {
        let z = zivot_andrews(&s, &ZaConfig { break_type: bt, ..Default::default() })?;
        println!("ZA {bt:<9} {:.3} at index {} (last pre-break), {} candidates", z.statistic, z.break_index, z.trace.len());
    }
    Ok(())
}
