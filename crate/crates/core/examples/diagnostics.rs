//! Breusch-Godfrey, White and Jarque-Bera on a fit with AR(1) errors.
//!
//! cargo run --example diagnostics

use armey::dataset::{DesignMatrix, INTERCEPT_NAME};
use armey::diagnostics::{breusch_godfrey, jarque_bera, white_test};
use armey::numerics::Matrix;
use armey::ols::fit;
use armey::simulate::seeded_rng;
use rand_distr::{Distribution, StandardNormal};

fn main() -> armey::Result<()> {
    let mut rng = seeded_rng(3);
    let n = 200;
    let x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    let mut u = 0.0;
    let y: Vec<f64> = x
        .iter()
        .map(|xi| {
            let e: f64 = StandardNormal.sample(&mut rng);
            u = 0.8 * u + e;
            1.0 + 2.0 * xi + u
        })
        .collect();
    let ones = vec![1.0; n];
    let design = DesignMatrix::from_parts(
        "y",
        y,
        vec![INTERCEPT_NAME.into(), "x".into()],
        Matrix::from_columns(&[&ones, &x]),
        (1..=n as i32).collect(),
        true,
    )?;
    let f = fit(&design)?;

    let mut tests = Vec::new();
    for p in 1..=3 {
        tests.push(breusch_godfrey(&f, p)?);
    }
    tests.push(white_test(&f, true)?);
    tests.push(jarque_bera(&f.residuals)?);
    for t in tests {
        println!("{:<22} {:>9.3}  {}  p = {:.4}", t.name, t.statistic, t.reference, t.p_value.unwrap_or(f64::NAN));
    }
    Ok(())
}
