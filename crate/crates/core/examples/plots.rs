//! Scatter-with-curve and CUSUM band plots as SVG files.
//!
//! cargo run --example plots -- [output_dir]

use std::path::PathBuf;

use armey::armey::{fit_armey_model, SpendingVariable};
use armey::dataset::{load_csv, prepare_variables, ColumnSchema};
use armey::diagnostics::cusum_test;
use armey::numerics::Level;
use armey::pipeline::{cusum_plot, scatter_plot, write_atomic};

fn main() -> armey::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out/plots".into()));
    std::fs::create_dir_all(&out).map_err(|e| armey::Error::Io { path: out.clone(), source: e })?;
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/synthetic.csv");
    let frame = prepare_variables(&load_csv(&path, &ColumnSchema::all())?.frame)?.frame;
    for v in SpendingVariable::ALL {
        let m = fit_armey_model(&frame, v)?;
        let scatter = out.join(format!("scatter_{}.svg", v.key()));
        write_atomic(&scatter, scatter_plot(&m).text.as_bytes())?;
        let c = cusum_test(&m.fit.design)?;
        let band = out.join(format!("cusum_{}.svg", v.key()));
        write_atomic(&band, cusum_plot(&m, &c, Level::Five).text.as_bytes())?;
        println!("{}\n{}", scatter.display(), band.display());
    }
    Ok(())
}
