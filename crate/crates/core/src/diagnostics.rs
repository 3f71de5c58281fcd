//! Residual diagnostics and the recursive-residual CUSUM stability test.

use std::fmt;

use crate::dataset::{DesignMatrix, INTERCEPT_NAME};
use crate::error::{Error, Result};
use crate::numerics::{
    chi_square_sf, dot, lookup_critical, CriticalValueTable, Level, Matrix, TestFamily, Verdicts,
    CUSUM_PARAMETERS,
};
use crate::ols::{self, OlsFit};
use crate::report::{fmt_f64, fmt_opt, KvSection};

#[derive(Debug, Clone, PartialEq)]
pub enum Reference {
    ChiSquare { df: u32 },
    Table(CriticalValueTable),
}

impl fmt::Display for Reference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reference::ChiSquare { df } => write!(f, "chi2({df})"),
            Reference::Table(t) => write!(f, "table:{}", t.family),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestResult {
    pub name: String,
    pub statistic: f64,
    pub reference: Reference,
    pub p_value: Option<f64>,
    pub verdicts: Verdicts,
    /// Run parameters, echoed in reports.
    pub nuisance: Vec<(String, String)>,
}

impl TestResult {
    fn chi_square(name: &str, statistic: f64, df: u32, nuisance: Vec<(String, String)>) -> Result<Self> {
        let p = chi_square_sf(statistic.max(0.0), df)?.clamp(0.0, 1.0);
        Ok(TestResult {
            name: name.to_string(),
            statistic,
            reference: Reference::ChiSquare { df },
            p_value: Some(p),
            verdicts: Verdicts(Level::ALL.map(|l| p < l.fraction())),
            nuisance,
        })
    }

    pub fn write_kv(&self, s: &mut KvSection) {
        s.push("test", &self.name);
        s.push("statistic", fmt_f64(self.statistic));
        s.push("reference", &self.reference);
        s.push("p_value", fmt_opt(self.p_value));
        for l in Level::ALL {
            s.push(format!("reject.{}", l.percent()), self.verdicts.rejects(l));
        }
        for (k, v) in &self.nuisance {
            s.push(format!("param.{k}"), v);
        }
    }
}

// Residuals this small relative to the response are treated as an exact fit.
fn negligible_residuals(fit: &OlsFit) -> bool {
    let yy = dot(&fit.design.response, &fit.design.response);
    fit.rss <= 1e-24 * yy.max(f64::MIN_POSITIVE)
}

/// Breusch–Godfrey LM test of order `p`: `n·R²` from regressing `e_t` on the
/// original regressors and `e_{t−1}..e_{t−p}`, pre-sample residuals set to zero.
pub fn breusch_godfrey(fit: &OlsFit, p: usize) -> Result<TestResult> {
    if p == 0 {
        return Err(Error::Config("Breusch–Godfrey lag order must be positive".into()));
    }
    let (n, k) = (fit.n(), fit.k());
    if n < p + k + 1 {
        return Err(Error::Estimability { n, k: p + k });
    }
    let nuisance = vec![("lag_order".to_string(), p.to_string())];
    if negligible_residuals(fit) {
        return TestResult::chi_square("Breusch-Godfrey LM", 0.0, p as u32, nuisance);
    }
    let e = &fit.residuals;
    let mut x = Matrix::zeros(n, k + p);
    let mut names = fit.design.regressor_names.clone();
    for i in 0..n {
        for j in 0..k {
            x[(i, j)] = fit.design.x[(i, j)];
        }
        for l in 1..=p {
            x[(i, k + l - 1)] = if i >= l { e[i - l] } else { 0.0 };
        }
    }
    names.extend((1..=p).map(|l| format!("L{l}.resid")));
    let aux = DesignMatrix::from_parts(
        "resid",
        e.clone(),
        names,
        x,
        fit.design.years.clone(),
        fit.design.intercept,
    )?;
    let aux = ols::fit(&aux)?;
    TestResult::chi_square("Breusch-Godfrey LM", n as f64 * aux.r2, p as u32, nuisance)
}

/// Auxiliary columns kept after dropping numerically redundant candidates in
/// order (first occurrence wins). Returns `(names, columns)`.
fn independent_columns(candidates: Vec<(String, Vec<f64>)>, n: usize) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut basis: Vec<Vec<f64>> = vec![vec![1.0 / (n as f64).sqrt(); n]];
    let mut names = Vec::new();
    let mut cols = Vec::new();
    for (name, c) in candidates {
        let norm = dot(&c, &c).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            continue;
        }
        let mut r = c.clone();
        for _ in 0..2 {
            for q in &basis {
                let proj = dot(q, &r);
                r.iter_mut().zip(q).for_each(|(ri, qi)| *ri -= proj * qi);
            }
        }
        let rn = dot(&r, &r).sqrt();
        if rn <= 1e-9 * norm {
            continue;
        }
        basis.push(r.iter().map(|v| v / rn).collect());
        names.push(name);
        cols.push(c);
    }
    (names, cols)
}

/// White's general heteroscedasticity test: `n·R²` from regressing `e_t²` on
/// the regressors, their squares and (optionally) pairwise cross-products.
pub fn white_test(fit: &OlsFit, include_cross_terms: bool) -> Result<TestResult> {
    let n = fit.n();
    let d = &fit.design;
    let base: Vec<(String, Vec<f64>)> = d
        .regressor_names
        .iter()
        .enumerate()
        .filter(|(_, name)| name.as_str() != INTERCEPT_NAME)
        .map(|(j, name)| (name.clone(), d.x.column(j)))
        .collect();
    let mut candidates = base.clone();
    for (name, c) in &base {
        candidates.push((format!("{name}^2"), c.iter().map(|v| v * v).collect()));
    }
    if include_cross_terms {
        for a in 0..base.len() {
            for b in (a + 1)..base.len() {
                let prod = base[a].1.iter().zip(&base[b].1).map(|(x, y)| x * y).collect();
                candidates.push((format!("{}*{}", base[a].0, base[b].0), prod));
            }
        }
    }
    let (names, cols) = independent_columns(candidates, n);
    let q = names.len();
    let nuisance = vec![
        ("cross_terms".to_string(), include_cross_terms.to_string()),
        ("aux_regressors".to_string(), q.to_string()),
    ];
    if q == 0 {
        return Err(Error::Collinear {
            column: "white auxiliary design has no usable regressors".into(),
        });
    }
    if negligible_residuals(fit) {
        return TestResult::chi_square("White", 0.0, q as u32, nuisance);
    }
    let ones = vec![1.0; n];
    let mut all: Vec<&[f64]> = vec![&ones];
    all.extend(cols.iter().map(Vec::as_slice));
    let mut aux_names = vec![INTERCEPT_NAME.to_string()];
    aux_names.extend(names);
    let e2: Vec<f64> = fit.residuals.iter().map(|e| e * e).collect();
    let aux = DesignMatrix::from_parts(
        "resid^2",
        e2,
        aux_names,
        Matrix::from_columns(&all),
        d.years.clone(),
        true,
    )?;
    let aux = ols::fit(&aux)?;
    TestResult::chi_square("White", n as f64 * aux.r2, q as u32, nuisance)
}

/// Moment-based skewness and kurtosis (divisor `n`).
pub fn skewness_kurtosis(x: &[f64]) -> Result<(f64, f64)> {
    let n = x.len();
    if n < 4 {
        return Err(Error::Length(format!("Jarque–Bera needs at least 4 observations, got {n}")));
    }
    let nf = n as f64;
    let mean = x.iter().sum::<f64>() / nf;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for v in x {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= nf;
    m3 /= nf;
    m4 /= nf;
    if m2 <= 0.0 || m2 <= 1e-28 * mean * mean {
        return Err(Error::Degenerate("Jarque–Bera input has zero variance".into()));
    }
    Ok((m3 / m2.powf(1.5), m4 / (m2 * m2)))
}

/// `JB = n·(S²/6 + (K−3)²/24)` against `χ²(2)`.
pub fn jarque_bera(residuals: &[f64]) -> Result<TestResult> {
    let (s, k) = skewness_kurtosis(residuals)?;
    let n = residuals.len() as f64;
    let jb = n * (s * s / 6.0 + (k - 3.0) * (k - 3.0) / 24.0);
    TestResult::chi_square(
        "Jarque-Bera",
        jb,
        2,
        vec![
            ("skewness".to_string(), fmt_f64(s)),
            ("kurtosis".to_string(), fmt_f64(k)),
        ],
    )
}

/// CUSUM of recursive residuals against the linear Brown–Durbin–Evans band.
#[derive(Debug, Clone, PartialEq)]
pub struct CusumResult {
    /// Years `t = k+1..n` of the path.
    pub years: Vec<i32>,
    pub recursive_residuals: Vec<f64>,
    /// `W_t = Σ_{j=k+1..t} w_j / σ̂`.
    pub path: Vec<f64>,
    /// `√(n−k) + 2(t−k)/√(n−k)`; the band at level `a` is `±a` times this.
    pub unit_bound: Vec<f64>,
    /// `σ̂ = √(Σ w_t² / (n−k))`.
    pub sigma: f64,
    /// Boundary parameters at 1%, 5%, 10%.
    pub parameters: [f64; 3],
    /// `max_t |W_t| / unit_bound_t`, comparable to the boundary parameters.
    pub statistic: f64,
    pub critical_values: CriticalValueTable,
    pub verdicts: Verdicts,
}

impl CusumResult {
    pub fn bound(&self, level: Level, i: usize) -> f64 {
        self.parameters[level.index()] * self.unit_bound[i]
    }

    /// Whether the path leaves the band at `level` anywhere.
    pub fn exits_band(&self, level: Level) -> bool {
        self.path
            .iter()
            .enumerate()
            .any(|(i, w)| w.abs() >= self.bound(level, i))
    }

    pub fn write_kv(&self, s: &mut KvSection) {
        s.push("statistic", fmt_f64(self.statistic));
        s.push("sigma", fmt_f64(self.sigma));
        s.push("path_length", self.path.len());
        s.push("first_year", self.years.first().copied().unwrap_or_default());
        for l in Level::ALL {
            s.push(format!("critical.{}", l.percent()), fmt_f64(self.parameters[l.index()]));
        }
        for l in Level::ALL {
            s.push(format!("reject.{}", l.percent()), self.verdicts.rejects(l));
        }
    }
}

pub fn cusum_test(design: &DesignMatrix) -> Result<CusumResult> {
    let w = ols::recursive_residuals(design)?;
    let m = w.len();
    let years = design.years[design.k()..].to_vec();
    let yy = dot(&design.response, &design.response);
    let ww = dot(&w, &w);
    let sigma = if ww <= 1e-24 * yy.max(f64::MIN_POSITIVE) { 0.0 } else { (ww / m as f64).sqrt() };
    let root = (m as f64).sqrt();
    let unit_bound: Vec<f64> = (1..=m).map(|r| root + 2.0 * r as f64 / root).collect();
    let mut path = Vec::with_capacity(m);
    let mut acc = 0.0;
    for wi in &w {
        acc += wi;
        path.push(if sigma > 0.0 { acc / sigma } else { 0.0 });
    }
    let statistic = path
        .iter()
        .zip(&unit_bound)
        .map(|(p, b)| p.abs() / b)
        .fold(0.0, f64::max);
    let critical_values = lookup_critical(TestFamily::Cusum, None)?;
    Ok(CusumResult {
        years,
        recursive_residuals: w,
        path,
        unit_bound,
        sigma,
        parameters: CUSUM_PARAMETERS,
        statistic,
        verdicts: critical_values.verdicts(statistic),
        critical_values,
    })
}
