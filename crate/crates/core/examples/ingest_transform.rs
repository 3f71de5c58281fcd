//! Load the bundled raw CSV, derive the model variables and build a design.
//!
//! cargo run --example ingest_transform

use std::path::PathBuf;

use armey::dataset::{apply_dummy, build_design, load_csv, prepare_variables, ColumnSchema, DesignSpec, DummySpec};

fn main() -> armey::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/synthetic.csv");
    let loaded = load_csv(&path, &ColumnSchema::all())?;
    println!("raw columns: {:?}", loaded.frame.column_names().collect::<Vec<_>>());

    let prepared = prepare_variables(&loaded.frame)?;
    let frame = prepared.frame;
    let (years, growth) = frame.observed("GGDP")?;
    println!("GDP growth {}..{}: first values {:.3?}", years[0], years[years.len() - 1], &growth[..3]);

    let du3 = apply_dummy(&frame, &DummySpec::new("du3", [1994, 1995]))?;
    println!("du3 is active in {} years", du3.iter().flatten().filter(|v| **v == 1.0).count());

    let design = build_design(&frame, &DesignSpec::new("GGDP", &["LAB", "EXPO", "GFCF", "GFCF2"]))?;
    println!("design: n = {}, k = {}, columns {:?}", design.n(), design.k(), design.regressor_names);
    Ok(())
}
