//! CUSUM of recursive residuals with and without a mid-sample break.
//!
//! cargo run --example cusum

use armey::dataset::{DesignMatrix, INTERCEPT_NAME};
use armey::diagnostics::cusum_test;
use armey::numerics::{Level, Matrix};
use armey::simulate::seeded_rng;
use rand_distr::{Distribution, StandardNormal};

fn design(shift: f64) -> armey::Result<DesignMatrix> {
    let mut rng = seeded_rng(5);
    let n = 100;
    let x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    let y: Vec<f64> = x
        .iter()
        .enumerate()
        .map(|(t, xi)| {
            let e: f64 = StandardNormal.sample(&mut rng);
            1.0 + 0.5 * xi + e + if t >= n / 2 { shift } else { 0.0 }
        })
        .collect();
    let ones = vec![1.0; n];
    DesignMatrix::from_parts(
        "y",
        y,
        vec![INTERCEPT_NAME.into(), "x".into()],
        Matrix::from_columns(&[&ones, &x]),
        (1901..1901 + n as i32).collect(),
        true,
    )
}

fn main() -> armey::Result<()> {
    for shift in [0.0, 5.0] {
        let c = cusum_test(&design(shift)?)?;
        print!("shift {shift}: statistic {:.3}", c.statistic);
        for l in Level::ALL {
            print!("  {l}: {}", if c.exits_band(l) { "exits band" } else { "inside" });
        }
        println!();
    }
    Ok(())
}
