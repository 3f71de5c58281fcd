use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use armey::armey::{fit_armey_model, fit_robustness_model, SpendingVariable};
use armey::config::RunConfig;
use armey::diagnostics::cusum_test;
use armey::error::Error;
use armey::pipeline::{self, StageExt, StageResult};
use armey::simulate::{simulate_raw, SimulationConfig};

#[derive(Parser)]
#[command(name = "armey", version, about = "Optimal government spending share: growth regressions, diagnostics and reports")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand; each maps to a config-file key.
#[derive(Args)]
struct Common {
    /// Config file of `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// CSV data file (`data`).
    #[arg(long, global = true)]
    data: Option<String>,
    /// Column-mapping file (`schema`).
    #[arg(long, global = true)]
    schema: Option<String>,
    /// Output directory (`output_dir`); overrides ARMEY_OUTPUT_DIR.
    #[arg(long, global = true)]
    output_dir: Option<String>,
    /// ADF deterministic terms: none, drift, trend (`adf.variant`).
    #[arg(long, global = true)]
    adf_variant: Option<String>,
    /// Maximum augmentation lag or `auto` (`adf.max_lag`).
    #[arg(long, global = true)]
    adf_max_lag: Option<String>,
    /// Lag criterion: bic, t-stat, fixed:N (`adf.criterion`).
    #[arg(long, global = true)]
    lag_criterion: Option<String>,
    /// Breusch-Godfrey orders, comma separated (`bg.lags`).
    #[arg(long, global = true)]
    bg_lags: Option<String>,
    /// Include cross products in White's test (`white.cross_terms`).
    #[arg(long, global = true)]
    white_cross_terms: Option<String>,
    /// Zivot-Andrews trimming fraction (`za.trim`).
    #[arg(long, global = true)]
    za_trim: Option<String>,
    /// Zivot-Andrews break: intercept, trend, both, all (`za.break`).
    #[arg(long, global = true)]
    za_break: Option<String>,
    /// Shock dummies as name:year,year;name:year or `none` (`dummies`).
    #[arg(long, global = true)]
    dummies: Option<String>,
    /// Significance levels in percent, comma separated (`levels`).
    #[arg(long, global = true)]
    levels: Option<String>,
    /// Band level of CUSUM plots in percent (`cusum.level`).
    #[arg(long, global = true)]
    cusum_level: Option<String>,
    /// Random seed (`seed`).
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Arbitrary `key=value` override, repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Common {
    fn overrides(&self) -> Result<Vec<(String, String)>, Error> {
        let mut out = Vec::new();
        let flags = [
            ("data", &self.data),
            ("schema", &self.schema),
            ("output_dir", &self.output_dir),
            ("adf.variant", &self.adf_variant),
            ("adf.max_lag", &self.adf_max_lag),
            ("adf.criterion", &self.lag_criterion),
            ("bg.lags", &self.bg_lags),
            ("white.cross_terms", &self.white_cross_terms),
            ("za.trim", &self.za_trim),
            ("za.break", &self.za_break),
            ("dummies", &self.dummies),
            ("levels", &self.levels),
            ("cusum.level", &self.cusum_level),
            ("seed", &self.seed),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                out.push((k.to_string(), v.clone()));
            }
        }
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got `{kv}`")))?;
            out.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(out)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Load and transform the data, and summarize what was read.
    IngestCheck,
    /// ADF tests on all model variables and Zivot-Andrews on GDP growth.
    Unitroot,
    /// Fit the quadratic growth models.
    Fit {
        /// gfcf or gfce; both when omitted.
        #[arg(long)]
        model: Option<String>,
    },
    /// Breusch-Godfrey, White and Jarque-Bera tests on model residuals.
    Diagnose,
    /// CUSUM stability tests.
    Cusum,
    /// Growth-maximizing spending shares.
    Armey,
    /// Orthogonal-polynomial model with shock dummies.
    Robustness,
    /// Full pipeline with reports and plots.
    Replicate {
        /// Compare against the published values; exit 5 on any mismatch.
        #[arg(long)]
        assert: bool,
    },
    /// Scatter of GDP growth against a spending share with the fitted curve.
    PlotScatter {
        #[arg(long, default_value = "gfcf")]
        model: String,
        /// Output file; defaults to <output_dir>/scatter_<model>.svg.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CUSUM path inside its significance band.
    PlotCusum {
        #[arg(long, default_value = "gfcf")]
        model: String,
        /// Output file; defaults to <output_dir>/cusum_<model>.svg.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a synthetic raw dataset and its true parameters.
    Simulate {
        /// File stem inside the output directory.
        #[arg(long, default_value = "synthetic")]
        name: String,
    },
}

fn models(arg: Option<&str>) -> Result<Vec<SpendingVariable>, Error> {
    match arg {
        Some(m) => Ok(vec![m.parse()?]),
        None => Ok(SpendingVariable::ALL.to_vec()),
    }
}

fn ensure_dir(path: &std::path::Path) -> Result<(), Error> {
    match path.parent().filter(|p| !p.as_os_str().is_empty()) {
        Some(dir) => std::fs::create_dir_all(dir).map_err(|e| Error::Io {
            path: dir.to_path_buf(),
            source: e,
        }),
        None => Ok(()),
    }
}

fn run(cli: Cli) -> StageResult<i32> {
    let overrides = cli.common.overrides().stage("config")?;
    let cfg = RunConfig::from_env(cli.common.config.as_deref(), &overrides).stage("config")?;
    match cli.command {
        Command::Simulate { name } => {
            let sim = SimulationConfig {
                seed: cfg.seed,
                ..Default::default()
            };
            let data = simulate_raw(&sim).stage("simulate")?;
            data.write(&cfg.output_dir, &name).stage("output")?;
            println!("{}", cfg.output_dir.join(format!("{name}.csv")).display());
            println!("{}", cfg.output_dir.join(format!("{name}.truth.kv")).display());
            return Ok(0);
        }
        Command::Replicate { assert } => {
            let (r, written) = pipeline::cmd_replicate(&cfg)?;
            for w in r.provenance.warnings.iter().chain(&written.warnings) {
                log::warn!("{w}");
            }
            print!("{}", pipeline::render_text(&r));
            for f in &written.files {
                println!("wrote {}", f.display());
            }
            if assert {
                let checks = pipeline::replication_checks(&r);
                for c in &checks {
                    println!("{}", c.line());
                }
                if checks.iter().any(|c| !c.passed()) {
                    return Ok(5);
                }
            }
            return Ok(0);
        }
        _ => {}
    }

    let ing = pipeline::ingest(&cfg)?;
    for w in &ing.provenance.warnings {
        log::warn!("{w}");
    }
    let frame = &ing.frame;
    match cli.command {
        Command::IngestCheck => {
            let p = &ing.provenance;
            println!("data       {}", p.data_path);
            println!("sha256     {}", p.sha256);
            println!("years      {}-{} ({} rows)", p.raw_years.0, p.raw_years.1, frame.len());
            for name in frame.column_names() {
                let missing = frame.column(name).stage("ingest")?.iter().filter(|v| v.is_none()).count();
                println!("column     {name:<12} missing {missing}");
            }
            for w in &p.warnings {
                println!("warning    {w}");
            }
        }
        Command::Unitroot => {
            let adf = pipeline::unit_root_tests(frame, &cfg).stage("unitroot")?;
            print!("{}", pipeline::unit_root_block(&adf));
            println!();
            let za = pipeline::break_tests(frame, &cfg).stage("zivot-andrews")?;
            print!("{}", pipeline::breaks_block(&za));
        }
        Command::Fit { model } => {
            let vs = models(model.as_deref()).stage("config")?;
            let fits = vs.iter().map(|&v| fit_armey_model(frame, v)).collect::<Result<Vec<_>, _>>().stage("fit")?;
            print!("{}", pipeline::models_block(&fits));
        }
        Command::Diagnose => {
            let fits = pipeline::fit_models(frame).stage("fit")?;
            let d = fits
                .iter()
                .map(|m| pipeline::diagnose(m, &cfg))
                .collect::<Result<Vec<_>, _>>()
                .stage("diagnostics")?;
            print!("{}", pipeline::diagnostics_block(&d));
        }
        Command::Cusum => {
            let fits = pipeline::fit_models(frame).stage("fit")?;
            let c = fits
                .iter()
                .map(|m| cusum_test(&m.fit.design))
                .collect::<Result<Vec<_>, _>>()
                .stage("cusum")?;
            print!("{}", pipeline::cusum_block(&fits, &c));
        }
        Command::Armey => {
            let fits = pipeline::fit_models(frame).stage("fit")?;
            print!("{}", pipeline::optima_block(&fits, None));
        }
        Command::Robustness => {
            let r = fit_robustness_model(frame, &cfg.dummies).stage("robustness")?;
            print!("{}", pipeline::robustness_block(&r));
            println!();
            let fits = pipeline::fit_models(frame).stage("fit")?;
            print!("{}", pipeline::optima_block(&fits, Some(&r)));
        }
        Command::PlotScatter { model, out } => {
            let v: SpendingVariable = model.parse().stage("config")?;
            let out = out.unwrap_or_else(|| cfg.output_dir.join(format!("scatter_{}.svg", v.key())));
            let svg = match fit_armey_model(frame, v) {
                Ok(m) => pipeline::scatter_plot(&m),
                Err(e @ (Error::Estimability { .. } | Error::Degenerate(_) | Error::Collinear { .. })) => {
                    log::warn!("{e}");
                    pipeline::scatter_points_only(frame, v).stage("plot")?
                }
                Err(e) => return Err(e).stage("fit"),
            };
            for w in &svg.warnings {
                log::warn!("{w}");
            }
            ensure_dir(&out).stage("output")?;
            pipeline::write_atomic(&out, svg.text.as_bytes()).stage("output")?;
            println!("{}", out.display());
        }
        Command::PlotCusum { model, out } => {
            let v: SpendingVariable = model.parse().stage("config")?;
            let out = out.unwrap_or_else(|| cfg.output_dir.join(format!("cusum_{}.svg", v.key())));
            let m = fit_armey_model(frame, v).stage("fit")?;
            let c = cusum_test(&m.fit.design).stage("cusum")?;
            let svg = pipeline::cusum_plot(&m, &c, cfg.cusum_level);
            ensure_dir(&out).stage("output")?;
            pipeline::write_atomic(&out, svg.text.as_bytes()).stage("output")?;
            println!("{}", out.display());
        }
        Command::Simulate { .. } | Command::Replicate { .. } => unreachable!("handled above"),
    }
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
