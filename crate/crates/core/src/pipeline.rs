//! End-to-end runs: ingest, transform, unit roots, the two quadratic models,
//! their diagnostics and stability tests, the break test on growth, the
//! robustness model and the optima, with text and key-value reports.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::armey::{
    fit_armey_model, fit_robustness_model, ArmeyResult, RobustnessResult, SpendingVariable,
    ORTHONORMAL_CONVENTION,
};
use crate::config::RunConfig;
use crate::dataset::{complete_years, load_csv, prepare_variables, vars, ColumnSchema, TimeSeriesFrame};
use crate::diagnostics::{breusch_godfrey, cusum_test, jarque_bera, white_test, CusumResult, TestResult};
use crate::error::{Error, Result};
use crate::numerics::Level;
use crate::plot::{cusum_svg, scatter_svg, CusumPlot, ScatterPlot, Svg};
use crate::report::{fmt_f64, fmt_opt, KvDocument, KvSection, TextTable};
use crate::unitroot::{adf_test, zivot_andrews, AdfConfig, Series, UnitRootResult, ZaConfig, ZaResult};

/// Variables tested for unit roots, in report order.
pub const UNIT_ROOT_VARIABLES: [&str; 7] = [
    vars::GGDP,
    vars::LAB,
    vars::EXPO,
    vars::GFCF,
    vars::GFCF_SQ,
    vars::GFCE,
    vars::GFCE_SQ,
];

#[derive(Debug, thiserror::Error)]
#[error("stage `{stage}` failed: {source}")]
pub struct StageError {
    pub stage: &'static str,
    #[source]
    pub source: Error,
}

impl StageError {
    pub fn exit_code(&self) -> i32 {
        self.source.exit_code()
    }
}

pub trait StageExt<T> {
    fn stage(self, stage: &'static str) -> std::result::Result<T, StageError>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &'static str) -> std::result::Result<T, StageError> {
        self.map_err(|source| StageError { stage, source })
    }
}

pub type StageResult<T> = std::result::Result<T, StageError>;

/// Writes `bytes` to a sibling temporary file, then renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let io = |e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    };
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    std::fs::write(&tmp, bytes).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        io(e)
    })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone)]
pub struct Provenance {
    pub data_path: String,
    pub sha256: String,
    pub raw_years: (i32, i32),
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Ingested {
    /// Raw columns plus the derived model variables.
    pub frame: TimeSeriesFrame,
    pub provenance: Provenance,
}

pub fn ingest(config: &RunConfig) -> StageResult<Ingested> {
    let path = config
        .data
        .as_ref()
        .filter(|p| !p.as_os_str().is_empty())
        .ok_or_else(|| Error::Config("no data file given (set `data` or pass --data)".into()))
        .stage("ingest")?;
    let bytes = std::fs::read(path)
        .map_err(|e| Error::Io {
            path: path.clone(),
            source: e,
        })
        .stage("ingest")?;
    let schema = match &config.schema {
        Some(s) => ColumnSchema::from_file(s).stage("ingest")?,
        None => ColumnSchema::all(),
    };
    let loaded = load_csv(path, &schema).stage("ingest")?;
    let prepared = prepare_variables(&loaded.frame).stage("transform")?;
    let years = loaded.frame.years();
    let raw_years = (years[0], *years.last().expect("non-empty frame"));
    let mut warnings = loaded.warnings;
    warnings.extend(prepared.warnings);
    Ok(Ingested {
        frame: prepared.frame,
        provenance: Provenance {
            data_path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
            raw_years,
            warnings,
        },
    })
}

/// Series of `name` over the rows where every model variable is observed.
pub fn estimation_series(frame: &TimeSeriesFrame, name: &str) -> Result<Series> {
    let rows = complete_years(frame, &UNIT_ROOT_VARIABLES)?;
    let col = frame.column(name)?;
    let years = rows.iter().map(|&r| frame.years()[r]).collect();
    let values = rows.iter().map(|&r| col[r].expect("complete row")).collect();
    Ok(Series::new(name, years, values))
}

pub fn unit_root_tests(frame: &TimeSeriesFrame, config: &RunConfig) -> Result<Vec<UnitRootResult>> {
    let adf = AdfConfig {
        variant: config.adf_variant,
        max_lag: config.adf_max_lag,
        criterion: config.lag_criterion,
    };
    UNIT_ROOT_VARIABLES
        .iter()
        .map(|v| adf_test(&estimation_series(frame, v)?, &adf))
        .collect()
}

pub fn break_tests(frame: &TimeSeriesFrame, config: &RunConfig) -> Result<Vec<ZaResult>> {
    let s = estimation_series(frame, vars::GGDP)?;
    config
        .za_break_types()
        .into_iter()
        .map(|b| {
            zivot_andrews(
                &s,
                &ZaConfig {
                    break_type: b,
                    trim: config.za_trim,
                    max_lag: config.adf_max_lag,
                    criterion: config.lag_criterion,
                },
            )
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct ModelDiagnostics {
    pub variable: SpendingVariable,
    pub breusch_godfrey: Vec<(usize, TestResult)>,
    pub white: TestResult,
    pub jarque_bera: TestResult,
}

pub fn diagnose(model: &ArmeyResult, config: &RunConfig) -> Result<ModelDiagnostics> {
    let bg = config
        .bg_lags
        .iter()
        .map(|&p| Ok((p, breusch_godfrey(&model.fit, p)?)))
        .collect::<Result<_>>()?;
    Ok(ModelDiagnostics {
        variable: model.spending_variable,
        breusch_godfrey: bg,
        white: white_test(&model.fit, config.white_cross_terms)?,
        jarque_bera: jarque_bera(&model.fit.residuals)?,
    })
}

pub fn fit_models(frame: &TimeSeriesFrame) -> Result<Vec<ArmeyResult>> {
    SpendingVariable::ALL.iter().map(|&v| fit_armey_model(frame, v)).collect()
}

#[derive(Debug, Clone)]
pub struct Replication {
    pub config: RunConfig,
    pub provenance: Provenance,
    pub unit_roots: Vec<UnitRootResult>,
    pub models: Vec<ArmeyResult>,
    pub diagnostics: Vec<ModelDiagnostics>,
    pub cusum: Vec<CusumResult>,
    pub breaks: Vec<ZaResult>,
    pub robustness: RobustnessResult,
}

impl Replication {
    pub fn effective_n(&self) -> usize {
        self.models[0].fit.n()
    }

    pub fn model(&self, v: SpendingVariable) -> &ArmeyResult {
        self.models.iter().find(|m| m.spending_variable == v).expect("both models fitted")
    }

    pub fn cusum_for(&self, v: SpendingVariable) -> &CusumResult {
        let i = self.models.iter().position(|m| m.spending_variable == v).expect("fitted");
        &self.cusum[i]
    }
}

/// Runs every stage on an already prepared frame.
pub fn analyze(frame: &TimeSeriesFrame, config: &RunConfig, provenance: Provenance) -> StageResult<Replication> {
    let unit_roots = unit_root_tests(frame, config).stage("unitroot")?;
    let models = fit_models(frame).stage("fit")?;
    let diagnostics = models
        .iter()
        .map(|m| diagnose(m, config))
        .collect::<Result<_>>()
        .stage("diagnostics")?;
    let cusum = models
        .iter()
        .map(|m| cusum_test(&m.fit.design))
        .collect::<Result<_>>()
        .stage("cusum")?;
    let breaks = break_tests(frame, config).stage("zivot-andrews")?;
    let robustness = fit_robustness_model(frame, &config.dummies).stage("robustness")?;
    Ok(Replication {
        config: config.clone(),
        provenance,
        unit_roots,
        models,
        diagnostics,
        cusum,
        breaks,
        robustness,
    })
}

pub fn run_replication(config: &RunConfig) -> StageResult<Replication> {
    let ing = ingest(config)?;
    analyze(&ing.frame, config, ing.provenance)
}

fn fx(v: f64, d: usize) -> String {
    if v.is_finite() {
        format!("{v:.d$}")
    } else {
        "nan".into()
    }
}

fn heading(out: &mut String, title: &str) {
    let _ = writeln!(out, "{title}");
    let _ = writeln!(out, "{}", "=".repeat(title.chars().count()));
}

pub fn unit_root_block(results: &[UnitRootResult]) -> String {
    let mut out = String::new();
    let (variant, crit) = results
        .first()
        .map(|r| (r.variant.as_str(), r.criterion.label()))
        .unwrap_or(("drift", "bic".into()));
    heading(&mut out, &format!("Augmented Dickey-Fuller tests (deterministic terms: {variant}; lag by {crit})"));
    let mut t = TextTable::new(["Variable", "Lag", "Obs", "t-stat", "1%", "5%", "10%", ""]);
    for r in results {
        t.row([
            r.series.clone(),
            r.chosen_lag.to_string(),
            r.nobs.to_string(),
            fx(r.statistic, 3),
            fx(r.critical_values.values[0], 3),
            fx(r.critical_values.values[1], 3),
            fx(r.critical_values.values[2], 3),
            r.verdicts.stars().to_string(),
        ]);
    }
    out.push_str(&t.render());
    out.push_str(
        "***, **, * reject a unit root at the 1%, 5%, 10% level \
         (MacKinnon response-surface critical values for the regression sample size).\n",
    );
    out
}

pub fn models_block(models: &[ArmeyResult]) -> String {
    let mut out = String::new();
    heading(&mut out, "Quadratic growth models (dependent variable: GGDP)");
    let mut header = vec!["Variable".to_string()];
    header.extend(models.iter().map(|m| m.spending_variable.model_label().to_string()));
    let mut t = TextTable::new(header);
    let row_names = ["const", vars::LAB, vars::EXPO, "GOV", "GOV^2"];
    for (j, name) in row_names.iter().enumerate() {
        let mut coef = vec![name.to_string()];
        let mut se = vec![String::new()];
        for m in models {
            coef.push(format!("{}{}", fx(m.fit.beta[j], 3), m.fit.stars(j)));
            se.push(format!("({})", fx(m.fit.se[j], 3)));
        }
        t.row(coef);
        t.row(se);
    }
    let stat = |label: &str, f: &dyn Fn(&ArmeyResult) -> String| {
        let mut r = vec![label.to_string()];
        r.extend(models.iter().map(f));
        r
    };
    t.row(stat("Observations", &|m| m.fit.n().to_string()));
    t.row(stat("R-squared", &|m| fx(m.fit.r2, 4)));
    t.row(stat("Adj R-squared", &|m| fx(m.fit.adjusted_r2, 4)));
    t.row(stat("Root MSE", &|m| fx(m.fit.rmse, 4)));
    t.row(stat("Shape", &|m| m.shape.to_string()));
    t.row(stat("Optimal share (%)", &|m| m.optimum_share.map(|v| fx(v, 3)).unwrap_or_else(|| "none".into())));
    out.push_str(&t.render());
    out.push_str("GOV is GFCF in Model I and GFCE in Model II. Standard errors in parentheses; ***, **, * for p < 0.01, 0.05, 0.10.\n");
    out
}

pub fn diagnostics_block(diags: &[ModelDiagnostics]) -> String {
    let mut out = String::new();
    heading(&mut out, "Residual diagnostics (statistic [p-value])");
    let mut header = vec!["Test".to_string()];
    header.extend(diags.iter().map(|d| d.variable.model_label().to_string()));
    let mut t = TextTable::new(header);
    let cell = |r: &TestResult| format!("{} [{}]", fx(r.statistic, 3), r.p_value.map(|p| fx(p, 4)).unwrap_or_else(|| "-".into()));
    if let Some(first) = diags.first() {
        for (i, (p, _)) in first.breusch_godfrey.iter().enumerate() {
            let mut r = vec![format!("Breusch-Godfrey LM (p={p})")];
            r.extend(diags.iter().map(|d| cell(&d.breusch_godfrey[i].1)));
            t.row(r);
        }
    }
    let mut r = vec!["White".to_string()];
    r.extend(diags.iter().map(|d| cell(&d.white)));
    t.row(r);
    let mut r = vec!["Jarque-Bera".to_string()];
    r.extend(diags.iter().map(|d| cell(&d.jarque_bera)));
    t.row(r);
    out.push_str(&t.render());
    out.push_str("Chi-square reference distributions; White degrees of freedom after dropping redundant auxiliary columns.\n");
    out
}

pub fn cusum_block(models: &[ArmeyResult], cusum: &[CusumResult]) -> String {
    let mut out = String::new();
    heading(&mut out, "CUSUM stability test (max |W_t| / (sqrt(n-k) + 2(t-k)/sqrt(n-k)))");
    let mut t = TextTable::new(["Model", "Statistic", "1%", "5%", "10%", "Stable at 5%"]);
    for (m, c) in models.iter().zip(cusum) {
        t.row([
            m.spending_variable.model_label().to_string(),
            fx(c.statistic, 3),
            fx(c.parameters[0], 3),
            fx(c.parameters[1], 3),
            fx(c.parameters[2], 3),
            if c.verdicts.rejects(Level::Five) { "no" } else { "yes" }.to_string(),
        ]);
    }
    out.push_str(&t.render());
    out
}

pub fn breaks_block(results: &[ZaResult]) -> String {
    let mut out = String::new();
    heading(&mut out, "Zivot-Andrews test on GGDP");
    let mut t = TextTable::new(["Break in", "t-stat", "Break year", "Lag", "1%", "5%", "10%", ""]);
    for r in results {
        t.row([
            r.break_type.to_string(),
            fx(r.statistic, 3),
            r.break_year.to_string(),
            r.chosen_lag.to_string(),
            fx(r.critical_values.values[0], 2),
            fx(r.critical_values.values[1], 2),
            fx(r.critical_values.values[2], 2),
            r.verdicts.stars().to_string(),
        ]);
    }
    out.push_str(&t.render());
    out.push_str("Break year is the last pre-break year. Asymptotic critical values.\n");
    out
}

pub fn robustness_block(r: &RobustnessResult) -> String {
    let mut out = String::new();
    heading(&mut out, "Robustness model: orthogonal polynomials and shock dummies");
    let mut t = TextTable::new(["Variable", "Coef", "Std err", "t", "p"]);
    for (j, name) in r.fit.design.regressor_names.iter().enumerate() {
        t.row([
            name.clone(),
            format!("{}{}", fx(r.fit.beta[j], 3), r.fit.stars(j)),
            fx(r.fit.se[j], 3),
            fx(r.fit.tstats[j], 3),
            fx(r.fit.pvalues[j], 4),
        ]);
    }
    t.row(["Observations".to_string(), r.fit.n().to_string()]);
    t.row(["R-squared".to_string(), fx(r.fit.r2, 4)]);
    t.row(["Root MSE".to_string(), fx(r.fit.rmse, 4)]);
    out.push_str(&t.render());
    let _ = writeln!(out, "Orthogonal columns scaled so that the Gram matrix with the constant is n*I ({ORTHONORMAL_CONVENTION}).");
    for d in &r.dummies {
        let ys: Vec<String> = d.active_years.iter().map(i32::to_string).collect();
        let _ = writeln!(out, "{} = 1 in {}", d.name, ys.join(", "));
    }
    out
}

pub fn optima_block(models: &[ArmeyResult], robustness: Option<&RobustnessResult>) -> String {
    let mut out = String::new();
    heading(&mut out, "Growth-maximizing spending shares (% of GDP)");
    let mut t = TextTable::new(["Variable", "Quadratic", "Ortho vertex", "Exact", "Approximate", "Difference"]);
    for v in SpendingVariable::ALL {
        let quad = models
            .iter()
            .find(|m| m.spending_variable == v)
            .map(|m| m.optimum_share.map(|o| fx(o, 3)).unwrap_or_else(|| m.shape.to_string()))
            .unwrap_or_else(|| "-".into());
        let o = robustness.and_then(|r| r.optimum(v));
        let vx = o.and_then(|o| o.vertex);
        let show = |f: &dyn Fn(&crate::armey::BackMappedVertex) -> f64, d: usize| {
            vx.map(|x| fx(f(&x), d))
                .unwrap_or_else(|| o.map(|o| o.shape.to_string()).unwrap_or_else(|| "-".into()))
        };
        t.row([
            v.column().to_string(),
            quad,
            show(&|x| x.ortho, 4),
            show(&|x| x.exact, 3),
            show(&|x| x.approximate, 3),
            show(&|x| x.difference(), 3),
        ]);
    }
    out.push_str(&t.render());
    out.push_str(
        "Quadratic: -b3/(2 b4) from the single-share models. Exact: maximizer of the fitted \
         orthogonal quadratic on the raw scale. Approximate: the degree-1 map inverted at the \
         vertex in orthogonal coordinates.\n",
    );
    out
}

fn provenance_block(r: &Replication) -> String {
    let mut out = String::new();
    heading(&mut out, "Provenance");
    let p = &r.provenance;
    let d = &r.models[0].fit.design;
    let _ = writeln!(out, "data           {}", p.data_path);
    let _ = writeln!(out, "sha256         {}", p.sha256);
    let _ = writeln!(out, "raw years      {}-{}", p.raw_years.0, p.raw_years.1);
    let _ = writeln!(
        out,
        "effective n    {} ({}-{})",
        r.effective_n(),
        d.years[0],
        d.years.last().expect("n > 0")
    );
    let _ = writeln!(out, "warnings       {}", p.warnings.len());
    for w in &p.warnings {
        let _ = writeln!(out, "  {w}");
    }
    out
}

fn config_block(c: &RunConfig) -> String {
    let mut out = String::new();
    heading(&mut out, "Configuration");
    for (k, v) in &c.echo().entries {
        let _ = writeln!(out, "{k:<18} {v}");
    }
    out
}

pub fn render_text(r: &Replication) -> String {
    let blocks = [
        provenance_block(r),
        unit_root_block(&r.unit_roots),
        models_block(&r.models),
        diagnostics_block(&r.diagnostics),
        cusum_block(&r.models, &r.cusum),
        breaks_block(&r.breaks),
        robustness_block(&r.robustness),
        optima_block(&r.models, Some(&r.robustness)),
        config_block(&r.config),
    ];
    blocks.join("\n")
}

pub fn render_kv(r: &Replication) -> KvDocument {
    let mut doc = KvDocument::new();
    let mut p = KvSection::new("provenance");
    p.push("data", &r.provenance.data_path);
    p.push("sha256", &r.provenance.sha256);
    p.push("raw_first_year", r.provenance.raw_years.0);
    p.push("raw_last_year", r.provenance.raw_years.1);
    p.push("effective_n", r.effective_n());
    p.push("warnings", r.provenance.warnings.len());
    doc.add(p);
    doc.add(r.config.echo());
    for u in &r.unit_roots {
        let mut s = KvSection::new(format!("adf.{}", u.series));
        s.push("variant", u.variant.as_str());
        s.push("criterion", u.criterion.label());
        s.push("max_lag", u.max_lag);
        s.push("lag", u.chosen_lag);
        s.push("nobs", u.nobs);
        s.push("statistic", fmt_f64(u.statistic));
        for (l, v) in Level::ALL.iter().zip(u.critical_values.values) {
            s.push(format!("cv{}", l.percent()), fmt_f64(v));
        }
        s.push("stars", u.verdicts.stars());
        doc.add(s);
    }
    for m in &r.models {
        let mut s = KvSection::new(format!("model.{}", m.spending_variable.key()));
        m.write_kv(&mut s);
        doc.add(s);
    }
    for d in &r.diagnostics {
        let key = d.variable.key();
        for (p, t) in &d.breusch_godfrey {
            let mut s = KvSection::new(format!("diagnostics.{key}.bg{p}"));
            t.write_kv(&mut s);
            doc.add(s);
        }
        let mut s = KvSection::new(format!("diagnostics.{key}.white"));
        d.white.write_kv(&mut s);
        doc.add(s);
        let mut s = KvSection::new(format!("diagnostics.{key}.jb"));
        d.jarque_bera.write_kv(&mut s);
        doc.add(s);
    }
    for (m, c) in r.models.iter().zip(&r.cusum) {
        let mut s = KvSection::new(format!("cusum.{}", m.spending_variable.key()));
        c.write_kv(&mut s);
        doc.add(s);
    }
    for z in &r.breaks {
        let mut s = KvSection::new(format!("za.{}", z.break_type));
        s.push("series", &z.series);
        s.push("trim", fmt_f64(z.trim));
        s.push("max_lag", z.max_lag);
        s.push("lag", z.chosen_lag);
        s.push("break_year", z.break_year);
        s.push("statistic", fmt_f64(z.statistic));
        for (l, v) in Level::ALL.iter().zip(z.critical_values.values) {
            s.push(format!("cv{}", l.percent()), fmt_f64(v));
        }
        s.push("stars", z.verdicts.stars());
        doc.add(s);
    }
    let mut s = KvSection::new("robustness");
    r.robustness.write_kv(&mut s);
    doc.add(s);
    for b in &r.robustness.bases {
        let mut s = KvSection::new(format!("basis.{}", b.source));
        b.write_kv(&mut s);
        doc.add(s);
    }
    let mut s = KvSection::new("optima");
    s.push("convention", ORTHONORMAL_CONVENTION);
    for m in &r.models {
        let k = m.spending_variable.key();
        s.push(format!("{k}.quadratic"), fmt_opt(m.optimum_share));
        s.push(format!("{k}.shape"), m.shape);
        if let Some(o) = r.robustness.optimum(m.spending_variable) {
            s.push(format!("{k}.robust_exact"), fmt_opt(o.vertex.map(|v| v.exact)));
            s.push(format!("{k}.robust_approximate"), fmt_opt(o.vertex.map(|v| v.approximate)));
        }
    }
    doc.add(s);
    doc
}

pub fn scatter_plot(model: &ArmeyResult) -> Svg {
    let v = model.spending_variable;
    let xlabel = format!("{} (% of GDP)", v.column());
    let title = format!("{}: GDP growth against {}", v.model_label(), v.column());
    scatter_svg(&ScatterPlot {
        title: &title,
        xlabel: &xlabel,
        ylabel: "GDP growth rate (%)",
        points: &model.scatter,
        curve: Some(&model.curve),
    })
}

pub fn cusum_plot(model: &ArmeyResult, cusum: &CusumResult, level: Level) -> Svg {
    let bound: Vec<f64> = (0..cusum.path.len()).map(|i| cusum.bound(level, i)).collect();
    let title = format!("CUSUM: {}", model.spending_variable.model_label());
    let label = level.to_string();
    cusum_svg(&CusumPlot {
        title: &title,
        years: &cusum.years,
        path: &cusum.path,
        bound: &bound,
        level_label: &label,
    })
}

/// Scatter without a fitted curve, for samples too small to fit.
pub fn scatter_points_only(frame: &TimeSeriesFrame, v: SpendingVariable) -> Result<Svg> {
    let rows = complete_years(frame, &[vars::GGDP, v.column()])?;
    let (x, y) = (frame.column(v.column())?, frame.column(vars::GGDP)?);
    let points: Vec<(f64, f64)> = rows
        .iter()
        .map(|&r| (x[r].expect("complete"), y[r].expect("complete")))
        .collect();
    let xlabel = format!("{} (% of GDP)", v.column());
    let title = format!("{}: GDP growth against {}", v.model_label(), v.column());
    Ok(scatter_svg(&ScatterPlot {
        title: &title,
        xlabel: &xlabel,
        ylabel: "GDP growth rate (%)",
        points: &points,
        curve: None,
    }))
}

#[derive(Debug, Clone)]
pub struct WrittenReport {
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

pub fn write_outputs(r: &Replication, dir: &Path) -> StageResult<WrittenReport> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Error::Io {
            path: dir.to_path_buf(),
            source: e,
        })
        .stage("output")?;
    let mut outputs: Vec<(String, String)> = vec![
        ("report.txt".into(), render_text(r)),
        ("report.kv".into(), render_kv(r).render()),
    ];
    let mut warnings = Vec::new();
    for (m, c) in r.models.iter().zip(&r.cusum) {
        let k = m.spending_variable.key();
        let s = scatter_plot(m);
        warnings.extend(s.warnings);
        outputs.push((format!("scatter_{k}.svg"), s.text));
        outputs.push((format!("cusum_{k}.svg"), cusum_plot(m, c, r.config.cusum_level).text));
    }
    let mut files = Vec::new();
    for (name, text) in outputs {
        let path = dir.join(name);
        write_atomic(&path, text.as_bytes()).stage("output")?;
        files.push(path);
    }
    Ok(WrittenReport { files, warnings })
}

/// Runs the whole pipeline and writes the reports and plots to the
/// configured output directory.
pub fn cmd_replicate(config: &RunConfig) -> StageResult<(Replication, WrittenReport)> {
    let r = run_replication(config)?;
    let w = write_outputs(&r, &config.output_dir)?;
    Ok((r, w))
}

/// Published reference values and their tolerances.
pub mod published {
    pub const MODEL_I: [(&str, f64); 4] = [("beta3", 9.155), ("beta4", -0.848), ("r2", 0.6044), ("rmse", 5.0141)];
    pub const MODEL_II: [(&str, f64); 3] = [("beta3", 2.820), ("beta4", -0.195), ("r2", 0.4985)];
    pub const ROBUSTNESS: [(&str, f64); 2] = [("r2", 0.8330), ("rmse", 3.5337)];
    /// Vertices in orthogonal coordinates, GFCF then GFCE.
    pub const ORTHO_VERTEX: [f64; 2] = [0.43, -0.55];
    /// Approximate back-mapped optima, GFCF then GFCE.
    pub const ROBUST_OPTIMUM: [f64; 2] = [5.20, 6.45];
    pub const BREUSCH_GODFREY: [f64; 2] = [4.805, 8.198];
    pub const WHITE: [f64; 2] = [8.84, 15.46];
    pub const JARQUE_BERA: [f64; 2] = [6.93, 8.45];
    pub const CUSUM: [f64; 2] = [0.343, 0.737];
    /// Intercept, trend, both.
    pub const ZIVOT_ANDREWS: [f64; 3] = [-6.008, -6.175, -6.546];
    pub const OPTIMA: [f64; 2] = [5.40, 7.23];

    pub fn coefficient_tolerance(expected: f64) -> f64 {
        (0.10 * expected.abs()).max(0.05)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub actual: Option<f64>,
    pub tolerance: f64,
}

impl Check {
    fn new(name: impl Into<String>, expected: f64, actual: Option<f64>, tolerance: f64) -> Check {
        Check {
            name: name.into(),
            expected,
            actual,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.actual.is_some_and(|a| (a - self.expected).abs() <= self.tolerance)
    }

    pub fn line(&self) -> String {
        format!(
            "{} {}: expected {} +/- {}, got {}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.expected,
            fx(self.tolerance, 4),
            self.actual.map(|a| fx(a, 4)).unwrap_or_else(|| "none".into())
        )
    }
}

/// Compares a run against the published values.
pub fn replication_checks(r: &Replication) -> Vec<Check> {
    use published::*;
    let mut out = Vec::new();
    for (v, refs) in [
        (SpendingVariable::Gfcf, &MODEL_I[..]),
        (SpendingVariable::Gfce, &MODEL_II[..]),
    ] {
        let m = r.model(v);
        for (key, expected) in refs {
            let actual = match *key {
                "beta3" => m.beta3,
                "beta4" => m.beta4,
                "r2" => m.fit.r2,
                _ => m.fit.rmse,
            };
            out.push(Check::new(
                format!("model.{}.{key}", v.key()),
                *expected,
                Some(actual),
                coefficient_tolerance(*expected),
            ));
        }
    }
    for (i, v) in SpendingVariable::ALL.iter().enumerate() {
        out.push(Check::new(
            format!("optimum.{}", v.key()),
            OPTIMA[i],
            r.model(*v).optimum_share,
            0.05,
        ));
    }
    let fit = &r.robustness.fit;
    for (key, expected) in ROBUSTNESS {
        let actual = if key == "r2" { fit.r2 } else { fit.rmse };
        out.push(Check::new(format!("robustness.{key}"), expected, Some(actual), coefficient_tolerance(expected)));
    }
    for (i, v) in SpendingVariable::ALL.iter().enumerate() {
        let vx = r.robustness.optimum(*v).and_then(|o| o.vertex);
        out.push(Check::new(format!("robustness.{}.ortho_vertex", v.key()), ORTHO_VERTEX[i], vx.map(|x| x.ortho), 0.02));
        out.push(Check::new(
            format!("robustness.{}.approximate_optimum", v.key()),
            ROBUST_OPTIMUM[i],
            vx.map(|x| x.approximate),
            0.1,
        ));
    }
    for (i, d) in r.diagnostics.iter().enumerate() {
        let k = d.variable.key();
        // The lag order behind the published value is unknown: report the closest order.
        let bg = d
            .breusch_godfrey
            .iter()
            .map(|(_, t)| t.statistic)
            .min_by(|a, b| (a - BREUSCH_GODFREY[i]).abs().total_cmp(&(b - BREUSCH_GODFREY[i]).abs()));
        out.push(Check::new(format!("diagnostics.{k}.bg"), BREUSCH_GODFREY[i], bg, 0.25 * BREUSCH_GODFREY[i]));
        out.push(Check::new(format!("diagnostics.{k}.white"), WHITE[i], Some(d.white.statistic), 0.25 * WHITE[i]));
        out.push(Check::new(
            format!("diagnostics.{k}.jb"),
            JARQUE_BERA[i],
            Some(d.jarque_bera.statistic),
            0.25 * JARQUE_BERA[i],
        ));
    }
    for (i, v) in SpendingVariable::ALL.iter().enumerate() {
        out.push(Check::new(format!("cusum.{}", v.key()), CUSUM[i], Some(r.cusum_for(*v).statistic), 0.05));
    }
    for (i, b) in crate::numerics::BreakType::ALL.iter().enumerate() {
        let actual = r.breaks.iter().find(|z| z.break_type == *b).map(|z| z.statistic);
        out.push(Check::new(format!("za.{b}"), ZIVOT_ANDREWS[i], actual, 0.10 * ZIVOT_ANDREWS[i].abs()));
    }
    out
}
