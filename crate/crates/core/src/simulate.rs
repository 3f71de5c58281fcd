//! Synthetic data with known truth.
//!
//! The raw-dataset generator writes levels and shares shaped like the real
//! inputs, so the whole ingest → transform → estimate path can be exercised
//! without external data. Growth of GDP follows
//!
//! ```text
//! GGDP = β₀ + β₁·LAB + β₂·EXPO + β₃·GFCF + β₄·GFCF² + γ₁·GFCE + γ₂·GFCE² + ε
//! ```
//!
//! with `ε ~ N(0, σ²)`. Each single-share model omits the other share's terms,
//! which are drawn independently and so only shift the intercept and add noise.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::dataset::{raw, vars, TimeSeriesFrame};
use crate::error::{Error, Result};
use crate::report::{fmt_f64, KvDocument, KvSection};

pub const DEFAULT_SEED: u64 = 20_190_101;

/// Tolerance on recovered optima documented alongside the bundled fixture.
pub const FIXTURE_OPTIMUM_TOLERANCE: f64 = 0.75;

#[derive(Debug, Clone, PartialEq)]
pub struct Truth {
    /// Intercept, LAB, EXPO, GFCF, GFCF².
    pub beta: [f64; 5],
    /// GFCE, GFCE².
    pub gamma: [f64; 2],
    pub sigma: f64,
    pub gfcf_range: (f64, f64),
    pub gfce_range: (f64, f64),
    /// Mean and standard deviation of population growth, percent.
    pub lab: (f64, f64),
    /// Mean and standard deviation of export growth, percent.
    pub expo: (f64, f64),
}

impl Default for Truth {
    fn default() -> Self {
        Truth {
            beta: [-20.0, 1.2, 0.1, 9.0, -0.85],
            gamma: [2.8, -0.195],
            sigma: 1.0,
            gfcf_range: (2.0, 9.0),
            gfce_range: (4.0, 11.0),
            lab: (2.5, 0.6),
            expo: (10.0, 8.0),
        }
    }
}

impl Truth {
    pub fn gfcf_optimum(&self) -> f64 {
        -self.beta[3] / (2.0 * self.beta[4])
    }

    pub fn gfce_optimum(&self) -> f64 {
        -self.gamma[0] / (2.0 * self.gamma[1])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub seed: u64,
    pub first_year: i32,
    pub last_year: i32,
    pub truth: Truth,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            seed: DEFAULT_SEED,
            first_year: 1971,
            last_year: 2015,
            truth: Truth::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticDataset {
    pub config: SimulationConfig,
    /// Raw columns: `gdp`, `gfcf`, `gfce_share`, `exports`, `pop_growth`.
    pub frame: TimeSeriesFrame,
}

fn normal(mean: f64, sd: f64) -> Result<Normal<f64>> {
    Normal::new(mean, sd).map_err(|e| Error::Config(format!("normal({mean}, {sd}): {e}")))
}

/// Raw annual dataset. GDP starts at 1000 and compounds at the simulated
/// growth rate; the first year has no growth and only fixes the levels.
pub fn simulate_raw(config: &SimulationConfig) -> Result<SyntheticDataset> {
    if config.last_year <= config.first_year {
        return Err(Error::Config("simulation needs at least two years".into()));
    }
    let t = &config.truth;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let eps = normal(0.0, t.sigma)?;
    let lab_d = normal(t.lab.0, t.lab.1)?;
    let expo_d = normal(t.expo.0, t.expo.1)?;

    let years: Vec<i32> = (config.first_year..=config.last_year).collect();
    let n = years.len();
    let (mut gdp, mut gfcf, mut gfce, mut exports, mut pop) =
        (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    let mut level = 1000.0;
    let mut export_level = 150.0;
    for i in 0..n {
        let share_f = rng.random_range(t.gfcf_range.0..t.gfcf_range.1);
        let share_e = rng.random_range(t.gfce_range.0..t.gfce_range.1);
        let lab = lab_d.sample(&mut rng);
        let expo = expo_d.sample(&mut rng);
        let e = eps.sample(&mut rng);
        if i > 0 {
            let [b0, b1, b2, b3, b4] = t.beta;
            let [g1, g2] = t.gamma;
            let growth = b0
                + b1 * lab
                + b2 * expo
                + b3 * share_f
                + b4 * share_f * share_f
                + g1 * share_e
                + g2 * share_e * share_e
                + e;
            level *= 1.0 + growth / 100.0;
            export_level *= 1.0 + expo / 100.0;
        }
        gdp.push(level);
        gfcf.push(share_f * level / 100.0);
        gfce.push(share_e);
        exports.push(export_level);
        pop.push(lab);
    }
    let mut frame = TimeSeriesFrame::new(years)?;
    frame.insert_complete(raw::GDP, &gdp);
    frame.insert_complete(raw::GFCF, &gfcf);
    frame.insert_complete(raw::GFCE_SHARE, &gfce);
    frame.insert_complete(raw::EXPORTS, &exports);
    frame.insert_complete(raw::POP_GROWTH, &pop);
    Ok(SyntheticDataset {
        config: config.clone(),
        frame,
    })
}

impl SyntheticDataset {
    pub fn truth_document(&self) -> KvDocument {
        let c = &self.config;
        let t = &c.truth;
        let mut s = KvSection::new("truth");
        s.push("seed", c.seed);
        s.push("first_year", c.first_year);
        s.push("last_year", c.last_year);
        for (name, v) in ["const", vars::LAB, vars::EXPO, vars::GFCF, vars::GFCF_SQ].iter().zip(t.beta) {
            s.push(format!("beta.{name}"), fmt_f64(v));
        }
        s.push(format!("gamma.{}", vars::GFCE), fmt_f64(t.gamma[0]));
        s.push(format!("gamma.{}", vars::GFCE_SQ), fmt_f64(t.gamma[1]));
        s.push("sigma", fmt_f64(t.sigma));
        s.push("gfcf_optimum", fmt_f64(t.gfcf_optimum()));
        s.push("gfce_optimum", fmt_f64(t.gfce_optimum()));
        s.push("optimum_tolerance", fmt_f64(FIXTURE_OPTIMUM_TOLERANCE));
        let mut doc = KvDocument::new();
        doc.add(s);
        doc
    }

    /// Writes `<stem>.csv` and `<stem>.truth.kv` into `dir`.
    pub fn write(&self, dir: &Path, stem: &str) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io {
            path: dir.to_path_buf(),
            source: e,
        })?;
        crate::pipeline::write_atomic(&dir.join(format!("{stem}.csv")), self.frame.to_csv_string().as_bytes())?;
        crate::pipeline::write_atomic(
            &dir.join(format!("{stem}.truth.kv")),
            self.truth_document().render().as_bytes(),
        )
    }
}

/// Model-variable sample drawn straight from the single-share model:
/// columns `GGDP`, `LAB`, `EXPO`, `GFCF`, all complete.
pub fn sample_model<R: Rng>(rng: &mut R, n: usize, truth: &Truth) -> Result<TimeSeriesFrame> {
    let eps = normal(0.0, truth.sigma)?;
    let lab_d = normal(truth.lab.0, truth.lab.1)?;
    let expo_d = normal(truth.expo.0, truth.expo.1)?;
    let mut cols: [Vec<f64>; 4] = Default::default();
    let [b0, b1, b2, b3, b4] = truth.beta;
    for _ in 0..n {
        let lab = lab_d.sample(rng);
        let expo = expo_d.sample(rng);
        let g = rng.random_range(truth.gfcf_range.0..truth.gfcf_range.1);
        let y = b0 + b1 * lab + b2 * expo + b3 * g + b4 * g * g + eps.sample(rng);
        for (c, v) in cols.iter_mut().zip([y, lab, expo, g]) {
            c.push(v);
        }
    }
    let mut frame = TimeSeriesFrame::new((1..=n as i32).collect())?;
    for (name, c) in [vars::GGDP, vars::LAB, vars::EXPO, vars::GFCF].iter().zip(&cols) {
        frame.insert_complete(*name, c);
    }
    Ok(frame)
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::armey::{fit_armey_model, SpendingVariable};
    use crate::dataset::prepare_variables;

    #[test]
    fn same_seed_same_data() {
        let a = simulate_raw(&SimulationConfig::default()).unwrap();
        let b = simulate_raw(&SimulationConfig::default()).unwrap();
        assert_eq!(a.frame, b.frame);
        let c = simulate_raw(&SimulationConfig {
            seed: 7,
            ..Default::default()
        })
        .unwrap();
        assert_ne!(a.frame, c.frame);
    }

    #[test]
    fn raw_dataset_recovers_shares_and_growth() {
        let d = simulate_raw(&SimulationConfig::default()).unwrap();
        assert_eq!(d.frame.len(), 45);
        let p = prepare_variables(&d.frame).unwrap();
        assert!(p.warnings.is_empty());
        let (_, g) = p.frame.observed(vars::GFCF).unwrap();
        assert_eq!(g.len(), 45);
        assert!(g.iter().all(|v| (2.0..9.0).contains(v)));
        let (years, _) = p.frame.observed(vars::GGDP).unwrap();
        assert_eq!(years.len(), 44);
    }

    #[test]
    fn fixture_optima_near_truth() {
        let d = simulate_raw(&SimulationConfig::default()).unwrap();
        let p = prepare_variables(&d.frame).unwrap();
        let t = Truth::default();
        for (v, target) in [
            (SpendingVariable::Gfcf, t.gfcf_optimum()),
            (SpendingVariable::Gfce, t.gfce_optimum()),
        ] {
            let r = fit_armey_model(&p.frame, v).unwrap();
            let opt = r.optimum_share.unwrap();
            assert!((opt - target).abs() < FIXTURE_OPTIMUM_TOLERANCE, "{v}: {opt} vs {target}");
        }
    }

    #[test]
    fn model_sample_shape() {
        let mut rng = seeded_rng(1);
        let f = sample_model(&mut rng, 50, &Truth::default()).unwrap();
        assert_eq!(f.len(), 50);
        assert_eq!(f.column_names().count(), 4);
    }
}
