//! Growth-maximizing spending shares from the quadratic models.
//!
//! cargo run --example armey_optimum

use armey::armey::{classify_shape, fit_armey_model, optimal_share, SpendingVariable};
use armey::simulate::{sample_model, seeded_rng, Truth};

fn main() -> armey::Result<()> {
    println!("optimal_share(9.155, -0.848) = {:.3}", optimal_share(9.155, -0.848)?);
    println!("optimal_share(2.820, -0.195) = {:.3}", optimal_share(2.820, -0.195)?);
    match optimal_share(1.0, 0.5) {
        Ok(v) => println!("unexpected optimum {v}"),
        Err(e) => println!("(1, 0.5): {e}"),
    }
    println!("shape of (-1, -0.2): {}", classify_shape(-1.0, -0.2));

    let truth = Truth::default();
    let frame = sample_model(&mut seeded_rng(11), 200, &truth)?;
    let m = fit_armey_model(&frame, SpendingVariable::Gfcf)?;
    println!(
        "simulated GFCF model: beta3 {:.3}, beta4 {:.3}, {} with optimum {:.3} (truth {:.3})",
        m.beta3,
        m.beta4,
        m.shape,
        m.optimum_share.unwrap_or(f64::NAN),
        truth.gfcf_optimum()
    );
    Ok(())
}
