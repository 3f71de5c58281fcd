//! Generate a raw dataset with known coefficients and check what a fit recovers.
//!
//! cargo run --example simulate -- [seed]

use armey::armey::{fit_armey_model, SpendingVariable};
use armey::dataset::prepare_variables;
use armey::simulate::{simulate_raw, SimulationConfig, DEFAULT_SEED};

fn main() -> armey::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED);
    let data = simulate_raw(&SimulationConfig { seed, ..Default::default() })?;
    print!("{}", data.truth_document().render());
    let frame = prepare_variables(&data.frame)?.frame;
    let t = &data.config.truth;
    for (v, truth) in [(SpendingVariable::Gfcf, t.gfcf_optimum()), (SpendingVariable::Gfce, t.gfce_optimum())] {
        let m = fit_armey_model(&frame, v)?;
        println!("{v}: estimated optimum {:.3}, true {truth:.3}", m.optimum_share.unwrap_or(f64::NAN));
    }
    Ok(())
}
