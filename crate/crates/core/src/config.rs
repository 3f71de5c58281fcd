//! Run configuration: a plain `key = value` file, command-line overrides and
//! an environment override for the output directory.
//!
//! Precedence, lowest first: defaults, config file, `ARMEY_OUTPUT_DIR`
//! (output directory only), command-line settings.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::dataset::DummySpec;
use crate::error::{Error, Result};
use crate::numerics::{AdfVariant, BreakType, Level};
use crate::report::{KvDocument, KvSection};
use crate::simulate::DEFAULT_SEED;
use crate::unitroot::LagCriterion;

pub const OUTPUT_DIR_ENV: &str = "ARMEY_OUTPUT_DIR";

/// Every recognised key, in echo order.
pub const KEYS: &[&str] = &[
    "data",
    "schema",
    "adf.variant",
    "adf.max_lag",
    "adf.criterion",
    "bg.lags",
    "white.cross_terms",
    "za.trim",
    "za.break",
    "dummies",
    "levels",
    "cusum.level",
    "output_dir",
    "seed",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub data: Option<PathBuf>,
    /// Column-mapping file; without one, every CSV column is taken as named.
    pub schema: Option<PathBuf>,
    pub adf_variant: AdfVariant,
    pub adf_max_lag: Option<usize>,
    pub lag_criterion: LagCriterion,
    /// Breusch–Godfrey orders to report.
    pub bg_lags: Vec<usize>,
    pub white_cross_terms: bool,
    pub za_trim: f64,
    /// `None` runs all three break types.
    pub za_break: Option<BreakType>,
    pub dummies: Vec<DummySpec>,
    pub levels: Vec<Level>,
    /// Level of the band drawn in CUSUM plots.
    pub cusum_level: Level,
    pub output_dir: PathBuf,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            data: None,
            schema: None,
            adf_variant: AdfVariant::Drift,
            adf_max_lag: None,
            lag_criterion: LagCriterion::Bic,
            bg_lags: vec![1, 2, 3],
            white_cross_terms: true,
            za_trim: 0.15,
            za_break: None,
            dummies: DummySpec::cambodia_shocks(),
            levels: Level::ALL.to_vec(),
            cusum_level: Level::Five,
            output_dir: PathBuf::from("out"),
            seed: DEFAULT_SEED,
        }
    }
}

fn parse_list<T>(value: &str, f: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(f)
        .collect()
}

fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.parse()
        .map_err(|_| Error::Config(format!("`{key}`: expected a non-negative integer, got `{v}`")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::Config(format!("`{key}`: expected true or false, got `{v}`"))),
    }
}

fn parse_level(v: &str) -> Result<Level> {
    let p: u32 = v
        .trim_end_matches('%')
        .parse()
        .map_err(|_| Error::Config(format!("bad significance level `{v}`")))?;
    Level::from_percent(p)
}

/// `du1:1973;du3:1994,1995`, or `none`.
fn parse_dummies(v: &str) -> Result<Vec<DummySpec>> {
    if v.eq_ignore_ascii_case("none") {
        return Ok(Vec::new());
    }
    v.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let (name, years) = item
                .split_once(':')
                .ok_or_else(|| Error::Config(format!("dummy `{item}`: expected name:year,year")))?;
            let years = parse_list(years, |y| {
                y.parse::<i32>()
                    .map_err(|_| Error::Config(format!("dummy `{name}`: bad year `{y}`")))
            })?;
            if years.is_empty() {
                return Err(Error::Config(format!("dummy `{name}` has no years")));
            }
            Ok(DummySpec::new(name.trim(), years))
        })
        .collect()
}

fn format_dummies(d: &[DummySpec]) -> String {
    if d.is_empty() {
        return "none".into();
    }
    d.iter()
        .map(|s| {
            let ys: Vec<String> = s.active_years.iter().map(i32::to_string).collect();
            format!("{}:{}", s.name, ys.join(","))
        })
        .collect::<Vec<_>>()
        .join(";")
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key {
            "data" => self.data = (!v.is_empty() && v != "none").then(|| PathBuf::from(v)),
            "schema" => self.schema = (!v.is_empty() && v != "none").then(|| PathBuf::from(v)),
            "adf.variant" => self.adf_variant = v.parse()?,
            "adf.max_lag" => {
                self.adf_max_lag = if v == "auto" { None } else { Some(parse_usize(key, v)?) }
            }
            "adf.criterion" => self.lag_criterion = v.parse()?,
            "bg.lags" => {
                let lags = parse_list(v, |s| parse_usize(key, s))?;
                if lags.is_empty() || lags.contains(&0) {
                    return Err(Error::Config("`bg.lags` needs positive orders".into()));
                }
                self.bg_lags = lags;
            }
            "white.cross_terms" => self.white_cross_terms = parse_bool(key, v)?,
            "za.trim" => {
                self.za_trim = v
                    .parse()
                    .map_err(|_| Error::Config(format!("`za.trim`: bad number `{v}`")))?
            }
            "za.break" => self.za_break = if v == "all" { None } else { Some(v.parse()?) },
            "dummies" => self.dummies = parse_dummies(v)?,
            "levels" => self.levels = parse_list(v, parse_level)?,
            "cusum.level" => self.cusum_level = parse_level(v)?,
            "output_dir" => self.output_dir = PathBuf::from(v),
            "seed" => {
                self.seed = v
                    .parse()
                    .map_err(|_| Error::Config(format!("`seed`: bad integer `{v}`")))?
            }
            other => return Err(Error::Config(format!("unknown configuration key `{other}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.za_trim > 0.0 && self.za_trim < 0.5) {
            return Err(Error::Config(format!("`za.trim` must lie in (0, 0.5), got {}", self.za_trim)));
        }
        if self.levels.is_empty() {
            return Err(Error::Config("`levels` is empty".into()));
        }
        Ok(())
    }

    pub fn from_kv_text(text: &str) -> Result<Self> {
        let mut c = RunConfig::default();
        c.apply_document(&KvDocument::parse(text).map_err(|e| Error::Config(e.to_string()))?)?;
        Ok(c)
    }

    fn apply_document(&mut self, doc: &KvDocument) -> Result<()> {
        for s in &doc.sections {
            for (k, v) in &s.entries {
                let key = if s.name.is_empty() || s.name == "config" { k.clone() } else { format!("{}.{k}", s.name) };
                self.set(&key, v)?;
            }
        }
        Ok(())
    }

    /// Defaults ← `file` ← `env_output_dir` ← `overrides`.
    pub fn resolve(
        file: Option<&Path>,
        env_output_dir: Option<String>,
        overrides: &[(String, String)],
    ) -> Result<Self> {
        let mut c = RunConfig::default();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::Config(format!("cannot read config file {}: {e}", path.display()))
            })?;
            let doc = KvDocument::parse(&text).map_err(|e| Error::Config(e.to_string()))?;
            c.apply_document(&doc)?;
            // Relative data paths are taken relative to the config file.
            let base = path.parent().unwrap_or(Path::new(""));
            for p in [&mut c.data, &mut c.schema].into_iter().flatten() {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        }
        if let Some(dir) = env_output_dir.filter(|d| !d.is_empty()) {
            c.output_dir = PathBuf::from(dir);
        }
        for (k, v) in overrides {
            c.set(k, v)?;
        }
        c.validate()?;
        Ok(c)
    }

    pub fn from_env(file: Option<&Path>, overrides: &[(String, String)]) -> Result<Self> {
        RunConfig::resolve(file, std::env::var(OUTPUT_DIR_ENV).ok(), overrides)
    }

    pub fn get(&self, key: &str) -> String {
        let opt_path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "none".into());
        let join = |v: Vec<String>| v.join(",");
        match key {
            "data" => opt_path(&self.data),
            "schema" => opt_path(&self.schema),
            "adf.variant" => self.adf_variant.as_str().into(),
            "adf.max_lag" => self.adf_max_lag.map(|l| l.to_string()).unwrap_or_else(|| "auto".into()),
            "adf.criterion" => self.lag_criterion.label(),
            "bg.lags" => join(self.bg_lags.iter().map(usize::to_string).collect()),
            "white.cross_terms" => self.white_cross_terms.to_string(),
            "za.trim" => format!("{:?}", self.za_trim),
            "za.break" => self.za_break.map(|b| b.to_string()).unwrap_or_else(|| "all".into()),
            "dummies" => format_dummies(&self.dummies),
            "levels" => join(self.levels.iter().map(|l| l.percent().to_string()).collect()),
            "cusum.level" => self.cusum_level.percent().to_string(),
            "output_dir" => self.output_dir.display().to_string(),
            "seed" => self.seed.to_string(),
            _ => String::new(),
        }
    }

    /// Effective configuration, every key in [`KEYS`] order.
    pub fn echo(&self) -> KvSection {
        let mut s = KvSection::new("config");
        for k in KEYS {
            s.push(*k, self.get(k));
        }
        s
    }

    pub fn as_map(&self) -> BTreeMap<&'static str, String> {
        KEYS.iter().map(|k| (*k, self.get(k))).collect()
    }

    pub fn za_break_types(&self) -> Vec<BreakType> {
        match self.za_break {
            Some(b) => vec![b],
            None => BreakType::ALL.to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echo_round_trips_through_set() {
        let mut c = RunConfig::default();
        c.set("adf.max_lag", "4").unwrap();
        c.set("dummies", "a:1980;b:1990,1991").unwrap();
        c.set("levels", "5").unwrap();
        let mut d = RunConfig::default();
        for (k, v) in &c.echo().entries {
            d.set(k, v).unwrap();
        }
        assert_eq!(c, d);
    }

    #[test]
    fn precedence_flag_over_env_over_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.kv");
        std::fs::write(&path, "output_dir = from_file\nseed = 3\n[za]\ntrim = 0.2\n").unwrap();
        let c = RunConfig::resolve(Some(&path), None, &[]).unwrap();
        assert_eq!(c.output_dir, PathBuf::from("from_file"));
        assert_eq!(c.za_trim, 0.2);
        let c = RunConfig::resolve(Some(&path), Some("from_env".into()), &[]).unwrap();
        assert_eq!(c.output_dir, PathBuf::from("from_env"));
        let flags = vec![("output_dir".to_string(), "from_flag".to_string())];
        let c = RunConfig::resolve(Some(&path), Some("from_env".into()), &flags).unwrap();
        assert_eq!(c.output_dir, PathBuf::from("from_flag"));
        assert_eq!(c.seed, 3);
    }

    #[test]
    fn rejects_bad_values() {
        let mut c = RunConfig::default();
        assert!(matches!(c.set("levels", "2"), Err(Error::Config(_))));
        assert!(matches!(c.set("nope", "1"), Err(Error::Config(_))));
        assert!(matches!(c.set("bg.lags", "0"), Err(Error::Config(_))));
        c.set("za.trim", "0.5").unwrap();
        assert!(matches!(c.validate(), Err(Error::Config(_))));
    }
}
