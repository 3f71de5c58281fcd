//! Augmented Dickey–Fuller and Zivot–Andrews unit-root tests.
//!
//! Both tests regress `Δx_t` on deterministic terms, `x_{t−1}` and `p` lagged
//! differences `Δx_{t−1}, …, Δx_{t−p}`; the statistic is the t-ratio on the
//! coefficient of `x_{t−1}`. The trend regressor is the observation index `t`.
//!
//! Zivot–Andrews break dummies for a break after position `TB` (the last
//! pre-break observation):
//!
//! * intercept: `DU_t = 1` for `t > TB`, else 0
//! * trend:     `DT_t = t − TB` for `t > TB`, else 0
//! * both:      `DU_t` and `DT_t`
//!
//! Lag order is picked on a common sample (rows available at `max_lag`), then
//! the chosen regression is refit on every row available for that order.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::{
    lookup_critical, solve_least_squares, AdfVariant, BreakType, CriticalValueTable, Matrix,
    TestFamily, Verdicts,
};

/// Lag-order choice for the augmentation terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LagCriterion {
    /// Schwarz criterion `n·ln(eᵀe/n) + k·ln(n)`, ties to the smaller lag.
    Bic,
    /// General-to-specific: drop the last lag while `|t| < 1.645`.
    SequentialT,
    Fixed(usize),
}

impl LagCriterion {
    pub fn label(self) -> String {
        match self {
            LagCriterion::Bic => "bic".into(),
            LagCriterion::SequentialT => "t-stat".into(),
            LagCriterion::Fixed(p) => format!("fixed:{p}"),
        }
    }
}

impl fmt::Display for LagCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for LagCriterion {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "bic" | "sic" | "schwarz" => Ok(LagCriterion::Bic),
            "t" | "t-stat" | "tstat" | "sequential-t" => Ok(LagCriterion::SequentialT),
            _ => s
                .strip_prefix("fixed:")
                .and_then(|p| p.parse().ok())
                .map(LagCriterion::Fixed)
                .ok_or_else(|| Error::Config(format!("unknown lag criterion `{s}`"))),
        }
    }
}

/// Schwert's rule `⌊12·(n/100)^{1/4}⌋`.
pub fn schwert_max_lag(n: usize) -> usize {
    (12.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize
}

/// A named annual series without missing values.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub years: Vec<i32>,
    pub values: Vec<f64>,
}

impl Series {
    pub fn new(name: impl Into<String>, years: Vec<i32>, values: Vec<f64>) -> Self {
        assert_eq!(years.len(), values.len(), "one year per value");
        Series {
            name: name.into(),
            years,
            values,
        }
    }

    /// Series indexed from year 1.
    pub fn from_values(name: impl Into<String>, values: Vec<f64>) -> Self {
        let years = (1..=values.len() as i32).collect();
        Series::new(name, years, values)
    }

    /// First differences, dated at the later year.
    pub fn differenced(&self) -> Series {
        Series::new(
            format!("D.{}", self.name),
            self.years[1..].to_vec(),
            self.values.windows(2).map(|w| w[1] - w[0]).collect(),
        )
    }

    pub fn scaled(&self, c: f64) -> Series {
        Series::new(
            self.name.clone(),
            self.years.clone(),
            self.values.iter().map(|v| v * c).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdfConfig {
    pub variant: AdfVariant,
    /// `None` selects Schwert's rule on the series length.
    pub max_lag: Option<usize>,
    pub criterion: LagCriterion,
}

impl Default for AdfConfig {
    fn default() -> Self {
        AdfConfig {
            variant: AdfVariant::Drift,
            max_lag: None,
            criterion: LagCriterion::Bic,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitRootResult {
    pub series: String,
    pub variant: AdfVariant,
    pub criterion: LagCriterion,
    pub max_lag: usize,
    pub chosen_lag: usize,
    pub nobs: usize,
    pub statistic: f64,
    pub critical_values: CriticalValueTable,
    pub verdicts: Verdicts,
}

// Which regressors to build for one row block.
#[derive(Debug, Clone, Copy)]
struct Spec {
    variant: AdfVariant,
    breaks: Option<(BreakType, usize)>,
}

impl Spec {
    fn gamma_index(&self) -> usize {
        let det = self.variant.deterministic_terms();
        let brk = match self.breaks {
            None => 0,
            Some((BreakType::Both, _)) => 2,
            Some(_) => 1,
        };
        det + brk
    }
}

/// Regression of `Δx_t` for `t = first..n−1` with `lags` augmentation terms.
fn regression(x: &[f64], spec: Spec, lags: usize, first: usize) -> (Matrix, Vec<f64>) {
    let n = x.len();
    debug_assert!(first > lags);
    let rows = n - first;
    let k = spec.gamma_index() + 1 + lags;
    let mut m = Matrix::zeros(rows, k);
    let mut y = Vec::with_capacity(rows);
    for (r, t) in (first..n).enumerate() {
        y.push(x[t] - x[t - 1]);
        let mut j = 0;
        let mut put = |v: f64, j: &mut usize| {
            m[(r, *j)] = v;
            *j += 1;
        };
        if spec.variant != AdfVariant::NoConstant {
            put(1.0, &mut j);
        }
        if spec.variant == AdfVariant::Trend {
            put(t as f64, &mut j);
        }
        if let Some((bt, tb)) = spec.breaks {
            let after = t > tb;
            if matches!(bt, BreakType::Intercept | BreakType::Both) {
                put(if after { 1.0 } else { 0.0 }, &mut j);
            }
            if matches!(bt, BreakType::Trend | BreakType::Both) {
                put(if after { (t - tb) as f64 } else { 0.0 }, &mut j);
            }
        }
        put(x[t - 1], &mut j);
        for i in 1..=lags {
            put(x[t - i] - x[t - i - 1], &mut j);
        }
    }
    (m, y)
}

struct RegressionFit {
    rss: f64,
    nobs: usize,
    k: usize,
    beta: Vec<f64>,
    se: Vec<f64>,
}

fn run(x: &[f64], spec: Spec, lags: usize, first: usize) -> Result<RegressionFit> {
    let (m, y) = regression(x, spec, lags, first);
    let (nobs, k) = (m.rows(), m.cols());
    if nobs <= k {
        return Err(Error::Estimability { n: nobs, k });
    }
    let ls = solve_least_squares(&m, &y).map_err(|e| {
        Error::Collinear {
            column: regressor_label(spec, e.column),
        }
    })?;
    let fitted = m.mul_vec(&ls.beta);
    let rss: f64 = y.iter().zip(&fitted).map(|(a, b)| (a - b) * (a - b)).sum();
    let s2 = rss / (nobs - k) as f64;
    let se = (0..k)
        .map(|i| (s2 * ls.xtx_inverse[(i, i)]).max(0.0).sqrt())
        .collect();
    Ok(RegressionFit {
        rss,
        nobs,
        k,
        beta: ls.beta,
        se,
    })
}

fn regressor_label(spec: Spec, column: usize) -> String {
    let mut names = Vec::new();
    if spec.variant != AdfVariant::NoConstant {
        names.push("const".to_string());
    }
    if spec.variant == AdfVariant::Trend {
        names.push("trend".to_string());
    }
    if let Some((bt, _)) = spec.breaks {
        if matches!(bt, BreakType::Intercept | BreakType::Both) {
            names.push("DU".to_string());
        }
        if matches!(bt, BreakType::Trend | BreakType::Both) {
            names.push("DT".to_string());
        }
    }
    names.push("L.level".to_string());
    if column < names.len() {
        names[column].clone()
    } else {
        format!("L{}.diff", column + 1 - names.len())
    }
}

impl RegressionFit {
    fn tstat(&self, j: usize) -> f64 {
        self.beta[j] / self.se[j]
    }

    fn bic(&self) -> f64 {
        let n = self.nobs as f64;
        n * (self.rss / n).ln() + self.k as f64 * n.ln()
    }
}

/// Index of the smallest value; ties go to the earliest index.
pub fn argmin_first(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, v) in values.iter().enumerate() {
        match best {
            Some(b) if !(*v < values[b]) => {}
            _ if v.is_nan() => {}
            _ => best = Some(i),
        }
    }
    best
}

fn validate(series: &Series, max_lag: usize) -> Result<()> {
    if series.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("`{}` has non-finite values", series.name)));
    }
    let diffs = series.len().saturating_sub(1);
    if diffs < max_lag + 10 {
        return Err(Error::Length(format!(
            "`{}` has {diffs} differences; need at least max_lag + 10 = {}",
            series.name,
            max_lag + 10
        )));
    }
    let first = series.values[0];
    if series.values.iter().all(|v| *v == first) {
        return Err(Error::Degenerate(format!("`{}` is constant", series.name)));
    }
    Ok(())
}

fn choose_lag(x: &[f64], spec: Spec, max_lag: usize, criterion: LagCriterion) -> Result<usize> {
    let first = max_lag + 1;
    match criterion {
        LagCriterion::Fixed(p) => {
            if p > max_lag {
                return Err(Error::Config(format!("fixed lag {p} exceeds max_lag {max_lag}")));
            }
            Ok(p)
        }
        LagCriterion::Bic => {
            let bics = (0..=max_lag)
                .map(|p| run(x, spec, p, first).map(|f| f.bic()))
                .collect::<Result<Vec<_>>>()?;
            Ok(argmin_first(&bics).unwrap_or(0))
        }
        LagCriterion::SequentialT => {
            let mut p = max_lag;
            while p > 0 {
                let f = run(x, spec, p, first)?;
                if f.tstat(f.k - 1).abs() >= 1.645 {
                    break;
                }
                p -= 1;
            }
            Ok(p)
        }
    }
}

/// BIC-selected augmentation order on the common sample for `max_lag`.
pub fn select_lag_bic(series: &Series, variant: AdfVariant, max_lag: usize) -> Result<usize> {
    validate(series, max_lag)?;
    choose_lag(
        &series.values,
        Spec {
            variant,
            breaks: None,
        },
        max_lag,
        LagCriterion::Bic,
    )
}

pub fn adf_test(series: &Series, config: &AdfConfig) -> Result<UnitRootResult> {
    let max_lag = config
        .max_lag
        .unwrap_or_else(|| schwert_max_lag(series.len()));
    validate(series, max_lag)?;
    let spec = Spec {
        variant: config.variant,
        breaks: None,
    };
    let x = &series.values;
    let lag = choose_lag(x, spec, max_lag, config.criterion)?;
    let f = run(x, spec, lag, lag + 1)?;
    let statistic = f.tstat(spec.gamma_index());
    let critical_values = lookup_critical(TestFamily::Adf(config.variant), Some(f.nobs))?;
    Ok(UnitRootResult {
        series: series.name.clone(),
        variant: config.variant,
        criterion: config.criterion,
        max_lag,
        chosen_lag: lag,
        nobs: f.nobs,
        statistic,
        verdicts: critical_values.verdicts(statistic),
        critical_values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZaConfig {
    pub break_type: BreakType,
    pub trim: f64,
    /// `None` selects Schwert's rule on the series length.
    pub max_lag: Option<usize>,
    pub criterion: LagCriterion,
}

impl Default for ZaConfig {
    fn default() -> Self {
        ZaConfig {
            break_type: BreakType::Both,
            trim: 0.15,
            max_lag: None,
            criterion: LagCriterion::Bic,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZaCandidate {
    /// Last pre-break year.
    pub year: i32,
    pub lag: usize,
    pub statistic: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZaResult {
    pub series: String,
    pub break_type: BreakType,
    pub trim: f64,
    pub criterion: LagCriterion,
    pub max_lag: usize,
    /// Last pre-break year of the minimizing candidate.
    pub break_year: i32,
    /// Position of `break_year` in the series.
    pub break_index: usize,
    pub chosen_lag: usize,
    pub statistic: f64,
    pub trace: Vec<ZaCandidate>,
    pub critical_values: CriticalValueTable,
    pub verdicts: Verdicts,
}

/// Candidate break positions `TB` (last pre-break index) for a series of
/// length `n`: `[max(⌊trim·n⌋, max_lag + 2), n − 1 − max(⌊trim·n⌋, 2)]`, so at
/// least two rows of the lag-selection sample fall on each side of the break.
pub fn za_window(n: usize, trim: f64, max_lag: usize) -> Option<(usize, usize)> {
    let cut = (trim * n as f64).floor() as usize;
    let lo = cut.max(max_lag + 2);
    let hi = (n - 1).checked_sub(cut.max(2))?;
    (lo <= hi).then_some((lo, hi))
}

pub fn zivot_andrews(series: &Series, config: &ZaConfig) -> Result<ZaResult> {
    if series.len() < 20 {
        return Err(Error::Length(format!(
            "`{}` has {} observations; Zivot–Andrews needs at least 20",
            series.name,
            series.len()
        )));
    }
    if !(config.trim > 0.0 && config.trim < 0.5) {
        return Err(Error::Config(format!(
            "trim fraction must lie in (0, 0.5), got {}",
            config.trim
        )));
    }
    let max_lag = config
        .max_lag
        .unwrap_or_else(|| schwert_max_lag(series.len()));
    validate(series, max_lag)?;
    let n = series.len();
    let (lo, hi) = za_window(n, config.trim, max_lag).ok_or_else(|| {
        Error::Config(format!(
            "no candidate break dates remain for n = {n}, trim = {}, max_lag = {max_lag}",
            config.trim
        ))
    })?;

    let x = &series.values;
    let mut trace = Vec::with_capacity(hi - lo + 1);
    for tb in lo..=hi {
        let spec = Spec {
            variant: AdfVariant::Trend,
            breaks: Some((config.break_type, tb)),
        };
        let lag = choose_lag(x, spec, max_lag, config.criterion)?;
        let f = run(x, spec, lag, lag + 1)?;
        trace.push(ZaCandidate {
            year: series.years[tb],
            lag,
            statistic: f.tstat(spec.gamma_index()),
        });
    }
    let stats: Vec<f64> = trace.iter().map(|c| c.statistic).collect();
    let best = argmin_first(&stats)
        .ok_or_else(|| Error::Degenerate("no finite Zivot–Andrews statistic".into()))?;
    let critical_values = lookup_critical(TestFamily::ZivotAndrews(config.break_type), None)?;
    let statistic = trace[best].statistic;
    Ok(ZaResult {
        series: series.name.clone(),
        break_type: config.break_type,
        trim: config.trim,
        criterion: config.criterion,
        max_lag,
        break_year: trace[best].year,
        break_index: lo + best,
        chosen_lag: trace[best].lag,
        statistic,
        verdicts: critical_values.verdicts(statistic),
        critical_values,
        trace,
    })
}
