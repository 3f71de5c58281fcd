//! The whole pipeline on the bundled fixture, written to a directory.
//!
//! cargo run --example replicate -- [output_dir]

use std::path::PathBuf;

use armey::config::RunConfig;
use armey::pipeline::{cmd_replicate, render_text, replication_checks};

fn main() {
    let out = std::env::args().nth(1).unwrap_or_else(|| "out/example".into());
    let cfg = RunConfig {
        data: Some(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/synthetic.csv")),
        output_dir: PathBuf::from(out),
        ..Default::default()
    };
    let (r, written) = match cmd_replicate(&cfg) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    };
    print!("{}", render_text(&r));
    for f in &written.files {
        println!("wrote {}", f.display());
    }
    let checks = replication_checks(&r);
    let passed = checks.iter().filter(|c| c.passed()).count();
    println!("{passed} of {} published values reproduced (synthetic data is not expected to match)", checks.len());
}
