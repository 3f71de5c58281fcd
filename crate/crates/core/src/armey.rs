//! Quadratic growth regressions in a government spending share, their
//! growth-maximizing share, and the orthogonal-polynomial robustness model.
//!
//! Model: `GGDP = β₀ + β₁·LAB + β₂·EXPO + β₃·GOV + β₄·GOV² + ε`. When `β₄ < 0`
//! the fitted quadratic has its maximum at `GOV* = −β₃ / (2β₄)`.
//!
//! The robustness model replaces `(GOV, GOV²)` for both spending variables by
//! degree-1 and degree-2 orthogonal polynomials over the estimation sample and
//! adds shock-year dummies. Orthogonal columns are scaled so that their Gram
//! matrix together with the constant is `n·I`. That scaling changes coefficient
//! magnitudes but never fitted values or raw-scale optima.

use std::fmt;
use std::str::FromStr;

use crate::dataset::{
    apply_dummy, build_design, complete_years, vars, DesignSpec, DummySpec, TimeSeriesFrame,
    INTERCEPT_NAME,
};
use crate::error::{Error, Result};
use crate::ols::{self, OlsFit};
use crate::report::{fmt_f64, fmt_opt, KvSection};

/// Below this `|β₄|` the fitted curve is treated as linear.
pub const DEGENERATE_CURVATURE: f64 = 1e-12;

/// Number of points sampled along each fitted curve.
pub const CURVE_POINTS: usize = 200;

pub const ORTHONORMAL_CONVENTION: &str = "gram=n*I";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpendingVariable {
    /// Government fixed capital formation, percent of GDP.
    Gfcf,
    /// Government final consumption expenditure, percent of GDP.
    Gfce,
}

impl SpendingVariable {
    pub const ALL: [SpendingVariable; 2] = [SpendingVariable::Gfcf, SpendingVariable::Gfce];

    pub fn column(self) -> &'static str {
        match self {
            SpendingVariable::Gfcf => vars::GFCF,
            SpendingVariable::Gfce => vars::GFCE,
        }
    }

    pub fn squared_column(self) -> &'static str {
        match self {
            SpendingVariable::Gfcf => vars::GFCF_SQ,
            SpendingVariable::Gfce => vars::GFCE_SQ,
        }
    }

    /// Names of the degree-1 and degree-2 orthogonal columns.
    pub fn ortho_columns(self) -> [&'static str; 2] {
        match self {
            SpendingVariable::Gfcf => ["PGFCF1", "PGFCF2"],
            SpendingVariable::Gfce => ["PGFCE1", "PGFCE2"],
        }
    }

    pub fn model_label(self) -> &'static str {
        match self {
            SpendingVariable::Gfcf => "Model I (GFCF)",
            SpendingVariable::Gfce => "Model II (GFCE)",
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            SpendingVariable::Gfcf => "gfcf",
            SpendingVariable::Gfce => "gfce",
        }
    }
}

impl fmt::Display for SpendingVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.column())
    }
}

impl FromStr for SpendingVariable {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gfcf" | "1" | "model1" | "i" => Ok(SpendingVariable::Gfcf),
            "gfce" | "2" | "model2" | "ii" => Ok(SpendingVariable::Gfce),
            other => Err(Error::Config(format!("unknown spending variable `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShapeVerdict {
    /// `β₃ > 0`, `β₄ < 0`: growth rises then falls with the share.
    InvertedU,
    /// `β₄ > 0`.
    UShaped,
    /// `|β₄|` below [`DEGENERATE_CURVATURE`], or concave with a non-positive vertex.
    MonotoneDegenerate,
}

impl ShapeVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            ShapeVerdict::InvertedU => "inverted_u",
            ShapeVerdict::UShaped => "u_shaped",
            ShapeVerdict::MonotoneDegenerate => "monotone_degenerate",
        }
    }
}

impl fmt::Display for ShapeVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn classify_shape(beta3: f64, beta4: f64) -> ShapeVerdict {
    if !(beta4.abs() >= DEGENERATE_CURVATURE) {
        ShapeVerdict::MonotoneDegenerate
    } else if beta4 > 0.0 {
        ShapeVerdict::UShaped
    } else if beta3 > 0.0 {
        ShapeVerdict::InvertedU
    } else {
        ShapeVerdict::MonotoneDegenerate
    }
}

/// Growth-maximizing share `−β₃ / (2β₄)`; requires `β₄ < 0`.
pub fn optimal_share(beta3: f64, beta4: f64) -> Result<f64> {
    if beta4 < 0.0 && beta4.abs() >= DEGENERATE_CURVATURE {
        Ok(-beta3 / (2.0 * beta4))
    } else {
        Err(Error::NoInteriorMaximum {
            shape: classify_shape(beta3, beta4),
        })
    }
}

#[derive(Debug, Clone)]
pub struct ArmeyResult {
    pub spending_variable: SpendingVariable,
    pub fit: OlsFit,
    pub beta3: f64,
    pub beta4: f64,
    /// Present iff `β₄ < 0`.
    pub optimum_share: Option<f64>,
    pub shape: ShapeVerdict,
    /// `(share, predicted GGDP)` with LAB and EXPO held at their sample means.
    pub curve: Vec<(f64, f64)>,
    /// `(share, GGDP)` for every estimation year.
    pub scatter: Vec<(f64, f64)>,
}

impl ArmeyResult {
    /// Predicted GGDP at `share`, other regressors at their sample means.
    pub fn predict_at_means(&self, share: f64) -> f64 {
        let d = &self.fit.design;
        let mut row = Vec::with_capacity(d.k());
        for (j, name) in d.regressor_names.iter().enumerate() {
            let v = if name == INTERCEPT_NAME {
                1.0
            } else if name == self.spending_variable.column() {
                share
            } else if name == self.spending_variable.squared_column() {
                share * share
            } else {
                let c = d.x.column(j);
                c.iter().sum::<f64>() / c.len() as f64
            };
            row.push(v);
        }
        self.fit.predict(&row)
    }

    pub fn write_kv(&self, s: &mut KvSection) {
        self.fit.write_kv(s);
        s.push("beta3", fmt_f64(self.beta3));
        s.push("beta4", fmt_f64(self.beta4));
        s.push("shape", self.shape);
        s.push("optimum_share", fmt_opt(self.optimum_share));
    }
}

pub fn armey_design_spec(variable: SpendingVariable) -> DesignSpec {
    DesignSpec::new(
        vars::GGDP,
        &[
            vars::LAB,
            vars::EXPO,
            variable.column(),
            variable.squared_column(),
        ],
    )
}

fn with_square(frame: &TimeSeriesFrame, variable: SpendingVariable) -> Result<TimeSeriesFrame> {
    let mut f = frame.clone();
    if !f.has_column(variable.squared_column()) {
        let sq = f.squared(variable.column())?;
        f.insert(variable.squared_column(), sq);
    }
    Ok(f)
}

fn sample_range(x: &[f64]) -> (f64, f64) {
    x.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)))
}

/// Fits the quadratic model for one spending variable. The frame must hold
/// `GGDP`, `LAB`, `EXPO` and the spending share; its square is added if absent.
pub fn fit_armey_model(frame: &TimeSeriesFrame, variable: SpendingVariable) -> Result<ArmeyResult> {
    let frame = with_square(frame, variable)?;
    let design = build_design(&frame, &armey_design_spec(variable))?;
    let gov = design.column(variable.column()).expect("spending column in design");
    let (lo, hi) = sample_range(&gov);
    if !(hi > lo) {
        return Err(Error::Degenerate(format!(
            "`{variable}` has zero variance over the estimation sample"
        )));
    }
    let fit = ols::fit(&design)?;
    let beta3 = fit.coefficient(variable.column()).expect("in design");
    let beta4 = fit.coefficient(variable.squared_column()).expect("in design");
    let shape = classify_shape(beta3, beta4);
    let optimum_share = optimal_share(beta3, beta4).ok();
    let scatter = gov.iter().copied().zip(design.response.iter().copied()).collect();
    let mut result = ArmeyResult {
        spending_variable: variable,
        fit,
        beta3,
        beta4,
        optimum_share,
        shape,
        curve: Vec::new(),
        scatter,
    };
    let step = (hi - lo) / (CURVE_POINTS - 1) as f64;
    result.curve = (0..CURVE_POINTS)
        .map(|i| {
            let s = if i == CURVE_POINTS - 1 { hi } else { lo + step * i as f64 };
            (s, result.predict_at_means(s))
        })
        .collect();
    Ok(result)
}

/// Monic three-term recurrence over a sample, rescaled so each column has
/// squared norm `n`:
///
/// ```text
/// π₀ = 1
/// π₁(x) = x − a₀
/// π₂(x) = (x − a₁)·π₁(x) − b₁·π₀
/// a_j = ⟨x·π_j, π_j⟩ / ⟨π_j, π_j⟩,  b₁ = ⟨π₁, π₁⟩ / ⟨π₀, π₀⟩
/// P_j = π_j · √(n / ⟨π_j, π_j⟩)
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoBasis {
    pub source: String,
    pub n: usize,
    /// `a₀` (the sample mean) and `a₁`.
    pub a: [f64; 2],
    pub b1: f64,
    /// `⟨π₀,π₀⟩ = n`, `⟨π₁,π₁⟩`, `⟨π₂,π₂⟩`.
    pub norms: [f64; 3],
    /// `c₁`, `c₂` with `P_j = c_j·π_j`.
    pub scale: [f64; 2],
    pub p1: Vec<f64>,
    pub p2: Vec<f64>,
    pub min: f64,
    pub max: f64,
}

impl OrthoBasis {
    pub fn eval(&self, x: f64) -> (f64, f64) {
        let [a0, a1] = self.a;
        let pi1 = x - a0;
        let pi2 = (x - a1) * pi1 - self.b1;
        (self.scale[0] * pi1, self.scale[1] * pi2)
    }

    /// `P1(x) = slope·x + intercept`.
    pub fn p1_affine(&self) -> (f64, f64) {
        (self.scale[0], -self.scale[0] * self.a[0])
    }

    /// `P2(x) = q₂x² + q₁x + q₀`.
    pub fn p2_quadratic(&self) -> (f64, f64, f64) {
        let [a0, a1] = self.a;
        let c = self.scale[1];
        (c, -c * (a0 + a1), c * (a0 * a1 - self.b1))
    }

    /// Raw value whose `P1` equals `p`.
    pub fn p1_inverse(&self, p: f64) -> f64 {
        self.a[0] + p / self.scale[0]
    }

    pub fn write_kv(&self, s: &mut KvSection) {
        s.push("source", &self.source);
        s.push("convention", ORTHONORMAL_CONVENTION);
        s.push("n", self.n);
        s.push("a0", fmt_f64(self.a[0]));
        s.push("a1", fmt_f64(self.a[1]));
        s.push("b1", fmt_f64(self.b1));
        s.push("c1", fmt_f64(self.scale[0]));
        s.push("c2", fmt_f64(self.scale[1]));
    }
}

pub fn build_ortho_basis(source: &str, x: &[f64]) -> Result<OrthoBasis> {
    let n = x.len();
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("`{source}` has non-finite values")));
    }
    let mut distinct: Vec<f64> = x.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::Rank(format!(
            "`{source}` has {} distinct values; a quadratic basis needs 3",
            distinct.len()
        )));
    }
    let nf = n as f64;
    let a0 = x.iter().sum::<f64>() / nf;
    let pi1: Vec<f64> = x.iter().map(|v| v - a0).collect();
    let norm1: f64 = pi1.iter().map(|p| p * p).sum();
    let a1 = x.iter().zip(&pi1).map(|(v, p)| v * p * p).sum::<f64>() / norm1;
    let b1 = norm1 / nf;
    let pi2: Vec<f64> = x.iter().zip(&pi1).map(|(v, p)| (v - a1) * p - b1).collect();
    let norm2: f64 = pi2.iter().map(|p| p * p).sum();
    if !(norm2 > 0.0) {
        return Err(Error::Rank(format!("`{source}`: degree-2 term vanishes on the sample")));
    }
    let c1 = (nf / norm1).sqrt();
    let c2 = (nf / norm2).sqrt();
    let (min, max) = sample_range(x);
    Ok(OrthoBasis {
        source: source.to_string(),
        n,
        a: [a0, a1],
        b1,
        norms: [nf, norm1, norm2],
        scale: [c1, c2],
        p1: pi1.iter().map(|p| c1 * p).collect(),
        p2: pi2.iter().map(|p| c2 * p).collect(),
        min,
        max,
    })
}

/// Maximizer of `α₁P1(x) + α₂P2(x)` expressed three ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackMappedVertex {
    /// `−α₁ / (2α₂)`: the vertex when `P2` is read as the square of `P1`.
    pub ortho: f64,
    /// Raw-scale maximizer of the fitted quadratic.
    pub exact: f64,
    /// `P1⁻¹(ortho)`.
    pub approximate: f64,
}

impl BackMappedVertex {
    pub fn difference(&self) -> f64 {
        self.exact - self.approximate
    }
}

/// Exact raw-scale vertex: with `P1 = c₁(x − a₀)` and
/// `P2 = c₂((x − a₁)(x − a₀) − b₁)`, the derivative
/// `α₁c₁ + α₂c₂(2x − a₀ − a₁)` vanishes at `x* = (a₀ + a₁)/2 − α₁c₁ / (2α₂c₂)`.
pub fn vertex_on_raw_scale(basis: &OrthoBasis, alpha1: f64, alpha2: f64) -> Result<BackMappedVertex> {
    let [c1, c2] = basis.scale;
    // d²/dx² = 2α₂c₂ with c₂ > 0
    if !(alpha2 * c2 < 0.0) || alpha2.abs() < DEGENERATE_CURVATURE {
        return Err(Error::NoInteriorMaximum {
            shape: classify_shape(alpha1, alpha2),
        });
    }
    let [a0, a1] = basis.a;
    let exact = 0.5 * (a0 + a1) - alpha1 * c1 / (2.0 * alpha2 * c2);
    let ortho = -alpha1 / (2.0 * alpha2);
    Ok(BackMappedVertex {
        ortho,
        exact,
        approximate: basis.p1_inverse(ortho),
    })
}

/// How the spending terms enter the robustness design.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolynomialTerms {
    Orthogonal,
    Raw,
}

#[derive(Debug, Clone)]
pub struct OrthoOptimum {
    pub variable: SpendingVariable,
    pub alpha_linear: f64,
    pub alpha_quadratic: f64,
    pub vertex: Option<BackMappedVertex>,
    pub shape: ShapeVerdict,
}

#[derive(Debug, Clone)]
pub struct RobustnessResult {
    pub fit: OlsFit,
    pub terms: PolynomialTerms,
    /// Bases for GFCF and GFCE (orthogonal terms only).
    pub bases: Vec<OrthoBasis>,
    pub optima: Vec<OrthoOptimum>,
    pub dummies: Vec<DummySpec>,
}

impl RobustnessResult {
    pub fn optimum(&self, v: SpendingVariable) -> Option<&OrthoOptimum> {
        self.optima.iter().find(|o| o.variable == v)
    }

    pub fn basis(&self, v: SpendingVariable) -> Option<&OrthoBasis> {
        self.bases.iter().find(|b| b.source == v.column())
    }

    pub fn write_kv(&self, s: &mut KvSection) {
        s.push("convention", ORTHONORMAL_CONVENTION);
        self.fit.write_kv(s);
        for d in &self.dummies {
            let years: Vec<String> = d.active_years.iter().map(i32::to_string).collect();
            s.push(format!("dummy.{}", d.name), years.join(","));
        }
        for o in &self.optima {
            let k = o.variable.key();
            s.push(format!("{k}.shape"), o.shape);
            s.push(format!("{k}.ortho_vertex"), fmt_opt(o.vertex.map(|v| v.ortho)));
            s.push(format!("{k}.optimum_exact"), fmt_opt(o.vertex.map(|v| v.exact)));
            s.push(format!("{k}.optimum_approximate"), fmt_opt(o.vertex.map(|v| v.approximate)));
            s.push(format!("{k}.optimum_difference"), fmt_opt(o.vertex.map(|v| v.difference())));
        }
    }
}

/// Fits `GGDP` on LAB, EXPO, degree-1/2 orthogonal polynomials of GFCF and
/// GFCE, and the shock dummies.
pub fn fit_robustness_model(frame: &TimeSeriesFrame, dummies: &[DummySpec]) -> Result<RobustnessResult> {
    fit_robustness_with(frame, dummies, PolynomialTerms::Orthogonal)
}

pub fn fit_robustness_with(
    frame: &TimeSeriesFrame,
    dummies: &[DummySpec],
    terms: PolynomialTerms,
) -> Result<RobustnessResult> {
    let base = [vars::GGDP, vars::LAB, vars::EXPO, vars::GFCF, vars::GFCE];
    let rows = complete_years(frame, &base)?;
    let mut f = frame.clone();
    let mut regressors: Vec<String> = vec![vars::LAB.into(), vars::EXPO.into()];
    let mut bases = Vec::new();
    for v in SpendingVariable::ALL {
        match terms {
            PolynomialTerms::Orthogonal => {
                let col = frame.column(v.column())?;
                let x: Vec<f64> = rows.iter().map(|&r| col[r].expect("complete row")).collect();
                let basis = build_ortho_basis(v.column(), &x)?;
                let [n1, n2] = v.ortho_columns();
                let mut c1 = vec![None; frame.len()];
                let mut c2 = vec![None; frame.len()];
                for (i, &r) in rows.iter().enumerate() {
                    c1[r] = Some(basis.p1[i]);
                    c2[r] = Some(basis.p2[i]);
                }
                f.insert(n1, c1);
                f.insert(n2, c2);
                regressors.push(n1.into());
                regressors.push(n2.into());
                bases.push(basis);
            }
            PolynomialTerms::Raw => {
                f = with_square(&f, v)?;
                regressors.push(v.column().into());
                regressors.push(v.squared_column().into());
            }
        }
    }
    for d in dummies {
        let col = apply_dummy(&f, d)?;
        f.insert(d.name.clone(), col);
        regressors.push(d.name.clone());
    }
    let names: Vec<&str> = regressors.iter().map(String::as_str).collect();
    let design = build_design(&f, &DesignSpec::new(vars::GGDP, &names))?;
    let fit = ols::fit(&design)?;

    let mut optima = Vec::new();
    for v in SpendingVariable::ALL {
        let (lin, quad) = match terms {
            PolynomialTerms::Orthogonal => {
                let [n1, n2] = v.ortho_columns();
                (n1, n2)
            }
            PolynomialTerms::Raw => (v.column(), v.squared_column()),
        };
        let alpha_linear = fit.coefficient(lin).expect("in design");
        let alpha_quadratic = fit.coefficient(quad).expect("in design");
        let vertex = match terms {
            PolynomialTerms::Orthogonal => {
                let basis = bases.iter().find(|b| b.source == v.column()).expect("built above");
                vertex_on_raw_scale(basis, alpha_linear, alpha_quadratic).ok()
            }
            PolynomialTerms::Raw => optimal_share(alpha_linear, alpha_quadratic)
                .ok()
                .map(|x| BackMappedVertex {
                    ortho: x,
                    exact: x,
                    approximate: x,
                }),
        };
        let shape = match (terms, vertex) {
            (PolynomialTerms::Orthogonal, Some(vx)) if vx.exact > 0.0 => ShapeVerdict::InvertedU,
            (PolynomialTerms::Orthogonal, _) => {
                if alpha_quadratic > 0.0 {
                    ShapeVerdict::UShaped
                } else {
                    ShapeVerdict::MonotoneDegenerate
                }
            }
            (PolynomialTerms::Raw, _) => classify_shape(alpha_linear, alpha_quadratic),
        };
        optima.push(OrthoOptimum {
            variable: v,
            alpha_linear,
            alpha_quadratic,
            vertex,
            shape,
        });
    }
    Ok(RobustnessResult {
        fit,
        terms,
        bases,
        optima,
        dummies: dummies.to_vec(),
    })
}
