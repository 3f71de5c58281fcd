//! Orthogonal-polynomial robustness model with shock dummies, and the two
//! ways of mapping its vertices back to spending shares.
//!
//! cargo run --example orthogonal_robustness

use std::path::PathBuf;

use armey::armey::{build_ortho_basis, fit_robustness_model, vertex_on_raw_scale};
use armey::dataset::{load_csv, prepare_variables, ColumnSchema, DummySpec};

fn main() -> armey::Result<()> {
    let b = build_ortho_basis("x", &[-1.0, 0.0, 0.0, 1.0])?;
    let v = vertex_on_raw_scale(&b, 1.0, -1.0)?;
    println!("x = (-1, 0, 0, 1): exact {:.6} approximate {:.6}", v.exact, v.approximate);
    let b = build_ortho_basis("x", &[-2.0, -1.0, 0.0, 1.0, 2.0])?;
    let v = vertex_on_raw_scale(&b, 1.0, -1.0)?;
    println!("x = (-2..2):      exact {:.6} approximate {:.6}", v.exact, v.approximate);

    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/synthetic.csv");
    let frame = prepare_variables(&load_csv(&path, &ColumnSchema::all())?.frame)?.frame;
    let r = fit_robustness_model(&frame, &DummySpec::cambodia_shocks())?;
    for (name, beta) in r.fit.design.regressor_names.iter().zip(&r.fit.beta) {
        println!("{name:<7} {beta:>9.4}");
    }
    println!("R2 {:.4}  root MSE {:.4}", r.fit.r2, r.fit.rmse);
    for o in &r.optima {
        match &o.vertex {
            Some(v) => println!(
                "{}: vertex {:.4} in P1 units, exact share {:.3}, approximate {:.3}",
                o.variable, v.ortho, v.exact, v.approximate
            ),
            None => println!("{}: {}", o.variable, o.shape),
        }
    }
    Ok(())
}
