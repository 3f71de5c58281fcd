//! Oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use armey::dataset::{prepare_variables, DesignMatrix, TimeSeriesFrame, INTERCEPT_NAME};
use armey::numerics::Matrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn fixture_csv() -> PathBuf {
    workspace_root().join("data/synthetic.csv")
}

pub fn fixture_frame() -> TimeSeriesFrame {
    let text = std::fs::read_to_string(fixture_csv()).expect("bundled fixture");
    let loaded = armey::dataset::read_csv(text.as_bytes(), &armey::dataset::ColumnSchema::all()).unwrap();
    prepare_variables(&loaded.frame).unwrap().frame
}

/// Gaussian elimination with partial pivoting on a square system.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

/// `(XᵀX)⁻¹Xᵀy` by forming and eliminating the normal equations.
pub fn normal_equations(x: &Matrix, y: &[f64]) -> Vec<f64> {
    let (n, k) = (x.rows(), x.cols());
    let mut xtx = vec![vec![0.0; k]; k];
    let mut xty = vec![0.0; k];
    for i in 0..n {
        let r = x.row(i);
        for a in 0..k {
            xty[a] += r[a] * y[i];
            for b in 0..k {
                xtx[a][b] += r[a] * r[b];
            }
        }
    }
    gauss_solve(xtx, xty)
}

/// Intercept plus standard-normal columns, and a response from random
/// coefficients with unit noise.
pub fn random_system<R: Rng>(rng: &mut R, n: usize, k: usize) -> (Matrix, Vec<f64>) {
    let mut data = Vec::with_capacity(n * k);
    for _ in 0..n {
        data.push(1.0);
        for _ in 1..k {
            data.push(StandardNormal.sample(rng));
        }
    }
    let x = Matrix::from_row_major(n, k, data);
    let beta: Vec<f64> = (0..k).map(|_| rng.random_range(-5.0..5.0)).collect();
    let y = (0..n)
        .map(|i| {
            let e: f64 = StandardNormal.sample(rng);
            x.row(i).iter().zip(&beta).map(|(a, b)| a * b).sum::<f64>() + e
        })
        .collect();
    (x, y)
}

/// Design with an intercept followed by `cols`.
pub fn design(cols: &[&[f64]], y: &[f64]) -> DesignMatrix {
    let n = y.len();
    let ones = vec![1.0; n];
    let mut all: Vec<&[f64]> = vec![&ones];
    all.extend_from_slice(cols);
    let mut names = vec![INTERCEPT_NAME.to_string()];
    names.extend((1..=cols.len()).map(|i| format!("x{i}")));
    DesignMatrix::from_parts(
        "y",
        y.to_vec(),
        names,
        Matrix::from_columns(&all),
        (1..=n as i32).collect(),
        true,
    )
    .unwrap()
}

/// `Φ(z) = ½ + φ(z)·Σ z^{2k+1} / (1·3·5···(2k+1))`.
pub fn normal_cdf_series(z: f64) -> f64 {
    let phi = (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut term = z;
    let mut sum = z;
    let mut k = 1.0;
    while term.abs() > 1e-18 * sum.abs().max(1e-300) {
        term *= z * z / (2.0 * k + 1.0);
        sum += term;
        k += 1.0;
    }
    0.5 + phi * sum
}

/// Composite Simpson's rule with `m` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    let mut s = f(a) + f(b);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

pub fn student_t_density(t: f64, df: f64) -> f64 {
    use armey::numerics::ln_gamma;
    let ln_c = ln_gamma((df + 1.0) / 2.0) - ln_gamma(df / 2.0) - 0.5 * (df * std::f64::consts::PI).ln();
    (ln_c - (df + 1.0) / 2.0 * (1.0 + t * t / df).ln()).exp()
}

/// Maximizer of `f` on `[lo, hi]` by repeatedly refining a uniform grid
/// around the best point.
pub fn grid_argmax(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    const POINTS: usize = 1001;
    let (a0, b0) = (lo, hi);
    loop {
        let step = (hi - lo) / (POINTS - 1) as f64;
        let best = (0..POINTS)
            .map(|i| lo + i as f64 * step)
            .max_by(|a, b| f(*a).total_cmp(&f(*b)))
            .unwrap();
        if step < 1e-10 {
            return best;
        }
        lo = (best - 2.0 * step).max(a0);
        hi = (best + 2.0 * step).min(b0);
    }
}

/// `y = 1 + 0.5·x + e` with `e ~ N(0, σ²)`, plus `shift` added from
/// position `at` on.
pub fn break_fixture<R: Rng>(rng: &mut R, n: usize, at: usize, shift: f64, sigma: f64) -> DesignMatrix {
    let x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
    let y: Vec<f64> = x
        .iter()
        .enumerate()
        .map(|(i, xi)| {
            let e: f64 = StandardNormal.sample(rng);
            1.0 + 0.5 * xi + sigma * e + if i >= at { shift } else { 0.0 }
        })
        .collect();
    design(&[&x], &y)
}

/// Fraction of `trials` for which `f` is true.
pub fn rate(trials: usize, mut f: impl FnMut(usize) -> bool) -> f64 {
    (0..trials).filter(|&i| f(i)).count() as f64 / trials as f64
}

pub fn normals<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}
