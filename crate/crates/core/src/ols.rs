//! Ordinary least squares with the usual inference package, and recursive
//! residuals for stability testing.

use crate::dataset::DesignMatrix;
use crate::error::{Error, Result};
use crate::numerics::{dot, solve_least_squares, student_t_two_sided, Matrix};
use crate::report::{fmt_f64, KvSection};

#[derive(Debug, Clone)]
pub struct OlsFit {
    pub design: DesignMatrix,
    pub beta: Vec<f64>,
    pub se: Vec<f64>,
    pub tstats: Vec<f64>,
    pub pvalues: Vec<f64>,
    pub fitted: Vec<f64>,
    pub residuals: Vec<f64>,
    /// `eᵀe`.
    pub rss: f64,
    /// Total sum of squares: centered with an intercept, around zero without.
    pub tss: f64,
    /// `eᵀe / (n − k)`.
    pub sigma2: f64,
    pub r2: f64,
    pub adjusted_r2: f64,
    /// `√(eᵀe / (n − k))`.
    pub rmse: f64,
    pub df_resid: usize,
    pub xtx_inverse: Matrix,
    /// `sigma2 · (XᵀX)⁻¹`.
    pub covariance: Matrix,
}

pub(crate) fn collinear(design: &DesignMatrix, column: usize) -> Error {
    Error::Collinear {
        column: design.regressor_names[column].clone(),
    }
}

pub fn fit(design: &DesignMatrix) -> Result<OlsFit> {
    let (n, k) = (design.n(), design.k());
    if n <= k {
        return Err(Error::Estimability { n, k });
    }
    let y = &design.response;
    let ls = solve_least_squares(&design.x, y).map_err(|e| collinear(design, e.column))?;
    let fitted = design.x.mul_vec(&ls.beta);
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(y, f)| y - f).collect();
    let rss = dot(&residuals, &residuals);
    let tss = if design.intercept {
        let mean = y.iter().sum::<f64>() / n as f64;
        y.iter().map(|v| (v - mean) * (v - mean)).sum()
    } else {
        dot(y, y)
    };
    let df_resid = n - k;
    let sigma2 = rss / df_resid as f64;
    let r2 = if tss > 0.0 { 1.0 - rss / tss } else { 0.0 };
    let centered = usize::from(design.intercept);
    let adjusted_r2 = 1.0 - (1.0 - r2) * (n - centered) as f64 / df_resid as f64;

    let mut covariance = ls.xtx_inverse.clone();
    for i in 0..k {
        for j in 0..k {
            covariance[(i, j)] *= sigma2;
        }
    }
    let se: Vec<f64> = (0..k).map(|i| covariance[(i, i)].max(0.0).sqrt()).collect();
    let tstats: Vec<f64> = ls
        .beta
        .iter()
        .zip(&se)
        .map(|(b, s)| if *s > 0.0 { b / s } else { f64::NAN })
        .collect();
    let pvalues = tstats
        .iter()
        .map(|t| student_t_two_sided(*t, df_resid as f64))
        .collect();

    Ok(OlsFit {
        design: design.clone(),
        beta: ls.beta,
        se,
        tstats,
        pvalues,
        fitted,
        residuals,
        rss,
        tss,
        sigma2,
        r2,
        adjusted_r2,
        rmse: sigma2.sqrt(),
        df_resid,
        xtx_inverse: ls.xtx_inverse,
        covariance,
    })
}

impl OlsFit {
    pub fn n(&self) -> usize {
        self.design.n()
    }

    pub fn k(&self) -> usize {
        self.design.k()
    }

    pub fn coefficient(&self, name: &str) -> Option<f64> {
        self.design.column_index(name).map(|j| self.beta[j])
    }

    pub fn std_error(&self, name: &str) -> Option<f64> {
        self.design.column_index(name).map(|j| self.se[j])
    }

    pub fn predict(&self, row: &[f64]) -> f64 {
        dot(row, &self.beta)
    }

    /// `*`, `**`, `***` for two-sided significance at 10%, 5%, 1%.
    pub fn stars(&self, j: usize) -> &'static str {
        significance_stars(self.pvalues[j])
    }

    /// Writes the fit into a key-value section.
    pub fn write_kv(&self, s: &mut KvSection) {
        s.push("response", &self.design.response_name);
        s.push("n", self.n());
        s.push("k", self.k());
        s.push("df_resid", self.df_resid);
        s.push("first_year", self.design.years[0]);
        s.push("last_year", *self.design.years.last().expect("n > 0"));
        for (j, name) in self.design.regressor_names.iter().enumerate() {
            s.push(format!("coef.{name}"), fmt_f64(self.beta[j]));
            s.push(format!("se.{name}"), fmt_f64(self.se[j]));
            s.push(format!("t.{name}"), fmt_f64(self.tstats[j]));
            s.push(format!("p.{name}"), fmt_f64(self.pvalues[j]));
        }
        s.push("r2", fmt_f64(self.r2));
        s.push("adjusted_r2", fmt_f64(self.adjusted_r2));
        s.push("rmse", fmt_f64(self.rmse));
        s.push("sigma2", fmt_f64(self.sigma2));
    }
}

pub fn significance_stars(p: f64) -> &'static str {
    if p < 0.01 {
        "***"
    } else if p < 0.05 {
        "**"
    } else if p < 0.10 {
        "*"
    } else {
        ""
    }
}

/// Standardized one-step-ahead prediction errors
/// `w_t = (y_t − x_tᵀβ̂_{t−1}) / √(1 + x_tᵀ(X_{t−1}ᵀX_{t−1})⁻¹x_t)` for
/// `t = k+1..n`, each `β̂_{t−1}` refit on the first `t−1` rows.
pub fn recursive_residuals(design: &DesignMatrix) -> Result<Vec<f64>> {
    let (n, k) = (design.n(), design.k());
    if n <= k {
        return Err(Error::Estimability { n, k });
    }
    let y = &design.response;
    let mut out = Vec::with_capacity(n - k);
    for t in k..n {
        let head = design.x.head_rows(t);
        let ls = solve_least_squares(&head, &y[..t]).map_err(|e| {
            Error::Rank(format!(
                "first {t} rows of the design are singular: column `{}` is dependent \
                 (reorder observations so the leading {k} rows have full rank)",
                design.regressor_names[e.column]
            ))
        })?;
        let xt = design.x.row(t);
        let h = ls.xtx_inverse.mul_vec(xt);
        let scale = (1.0 + dot(xt, &h)).sqrt();
        out.push((y[t] - dot(xt, &ls.beta)) / scale);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn design(cols: &[&[f64]], y: &[f64], intercept: bool) -> DesignMatrix {
        let n = y.len();
        let mut all: Vec<&[f64]> = Vec::new();
        let ones = vec![1.0; n];
        let mut names = Vec::new();
        if intercept {
            all.push(&ones);
            names.push("const".to_string());
        }
        for (i, c) in cols.iter().enumerate() {
            all.push(c);
            names.push(format!("x{}", i + 1));
        }
        DesignMatrix::from_parts(
            "y",
            y.to_vec(),
            names,
            Matrix::from_columns(&all),
            (0..n as i32).collect(),
            intercept,
        )
        .unwrap()
    }

    #[test]
    fn exact_fit() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let y: Vec<f64> = x.iter().map(|v| 3.0 - 0.5 * v).collect();
        let f = fit(&design(&[&x], &y, true)).unwrap();
        assert!((f.r2 - 1.0).abs() < 1e-12);
        assert!(f.rmse < 1e-12);
        assert!(f.residuals.iter().all(|e| e.abs() < 1e-12));
    }

    #[test]
    fn mean_only_model() {
        let y = [2.0, 4.0, 9.0, 1.0, 5.0];
        let f = fit(&design(&[], &y, true)).unwrap();
        let mean = 4.2;
        let sd = (y.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / 4.0).sqrt();
        assert!((f.beta[0] - mean).abs() < 1e-12);
        assert!(f.r2.abs() < 1e-12);
        assert!((f.rmse - sd).abs() < 1e-12);
    }

    #[test]
    fn inference_on_small_example() {
        // y = [1, 3, 2, 5, 4], x = [1..5]: slope 0.8, intercept 0.6,
        // RSS = 3.6, σ² = 1.2, se(slope) = √(1.2/10).
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let y = [1.0, 3.0, 2.0, 5.0, 4.0];
        let f = fit(&design(&[&x], &y, true)).unwrap();
        assert!((f.beta[0] - 0.6).abs() < 1e-12);
        assert!((f.beta[1] - 0.8).abs() < 1e-12);
        assert!((f.rss - 3.6).abs() < 1e-12);
        assert!((f.se[1] - (0.12f64).sqrt()).abs() < 1e-12);
        assert!((f.r2 - 0.64).abs() < 1e-12);
        assert!((f.adjusted_r2 - (1.0 - 0.36 * 4.0 / 3.0)).abs() < 1e-12);
        assert!(f.adjusted_r2 <= f.r2);
    }

    #[test]
    fn no_intercept_r2_is_uncentered() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y = [1.1, 1.9, 3.2, 3.9];
        let f = fit(&design(&[&x], &y, false)).unwrap();
        let yy: f64 = y.iter().map(|v| v * v).sum();
        assert!((f.tss - yy).abs() < 1e-12);
        assert!((f.r2 - (1.0 - f.rss / yy)).abs() < 1e-12);
    }

    #[test]
    fn collinear_column_is_named() {
        let a = [1.0, 2.0, 3.0, 4.0, 6.0];
        let b: Vec<f64> = a.iter().map(|v| 2.0 * v - 1.0).collect();
        let err = fit(&design(&[&a, &b], &[1.0, 0.0, 2.0, 1.0, 3.0], true)).unwrap_err();
        match err {
            Error::Collinear { column } => assert_eq!(column, "x2"),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn recursive_residuals_zero_for_exact_data() {
        let x = [0.5, 1.5, -1.0, 2.0, 3.0, 0.0, 1.0];
        let y: Vec<f64> = x.iter().map(|v| 1.0 + 2.0 * v).collect();
        let w = recursive_residuals(&design(&[&x], &y, true)).unwrap();
        assert_eq!(w.len(), 5);
        assert!(w.iter().all(|v| v.abs() < 1e-10));
    }

    #[test]
    fn single_recursive_residual() {
        // k = 2, n = 3: fit exact line through first two points, predict the third.
        let x = [0.0, 1.0, 2.0];
        let y = [1.0, 2.0, 5.0];
        let w = recursive_residuals(&design(&[&x], &y, true)).unwrap();
        // prediction 3, error 2; x₃ᵀ(XᵀX)⁻¹x₃ = 5 for rows (1,0),(1,1) at (1,2).
        assert_eq!(w.len(), 1);
        assert!((w[0] - 2.0 / 6f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn singular_leading_block_fails() {
        let dummy = [0.0, 0.0, 0.0, 1.0, 0.0, 0.0];
        let x = [1.0, 2.0, 3.0, 4.0, 5.0, 7.0];
        let y = [1.0, 2.0, 2.0, 9.0, 3.0, 4.0];
        let err = recursive_residuals(&design(&[&x, &dummy], &y, true)).unwrap_err();
        assert!(matches!(err, Error::Rank(_)), "{err}");
    }
}
