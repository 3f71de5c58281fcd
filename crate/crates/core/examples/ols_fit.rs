//! OLS with the full inference package and recursive residuals.
//!
//! cargo run --example ols_fit

use armey::dataset::{build_design, DesignSpec};
use armey::ols::{fit, recursive_residuals};
use armey::simulate::{sample_model, seeded_rng, Truth};

fn main() -> armey::Result<()> {
    let truth = Truth::default();
    let frame = sample_model(&mut seeded_rng(7), 200, &truth)?;
    let mut frame = frame;
    let sq = frame.squared("GFCF")?;
    frame.insert("GFCF2", sq);

    let design = build_design(&frame, &DesignSpec::new("GGDP", &["LAB", "EXPO", "GFCF", "GFCF2"]))?;
    let f = fit(&design)?;
    println!("{:<8} {:>10} {:>10} {:>8}  truth", "", "coef", "se", "t");
    for (j, name) in design.regressor_names.iter().enumerate() {
        println!("{name:<8} {:>10.4} {:>10.4} {:>8.2}{:<3} {:.3}", f.beta[j], f.se[j], f.tstats[j], f.stars(j), truth.beta[j]);
    }
    println!("R2 {:.4}  adj. R2 {:.4}  root MSE {:.4}  df {}", f.r2, f.adjusted_r2, f.rmse, f.df_resid);

    let w = recursive_residuals(&design)?;
    println!("{} recursive residuals, first {:.3?}", w.len(), &w[..3]);
    Ok(())
}
