//! Embedded critical-value tables.
//!
//! * ADF: MacKinnon (2010), "Critical Values for Cointegration Tests", Queen's
//!   Economics Department Working Paper 1227, Table 2, one-variable rows. The
//!   finite-sample value is `b∞ + b1/T + b2/T² + b3/T³` with `T` the number of
//!   observations in the test regression.
//! * Zivot–Andrews: asymptotic values from Zivot & Andrews (1992), Tables 2–4
//!   (models A, B, C).
//! * CUSUM: Brown, Durbin & Evans (1975) boundary parameters, stored as the
//!   replicated tables print them. The classical 5% value is 0.948; 0.947 is
//!   kept here on purpose so reports match the published output.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    One,
    Five,
    Ten,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::One, Level::Five, Level::Ten];

    pub fn fraction(self) -> f64 {
        match self {
            Level::One => 0.01,
            Level::Five => 0.05,
            Level::Ten => 0.10,
        }
    }

    pub fn percent(self) -> u32 {
        match self {
            Level::One => 1,
            Level::Five => 5,
            Level::Ten => 10,
        }
    }

    pub fn from_percent(p: u32) -> Result<Level> {
        match p {
            1 => Ok(Level::One),
            5 => Ok(Level::Five),
            10 => Ok(Level::Ten),
            other => Err(Error::Config(format!(
                "significance level must be one of 1, 5, 10 (percent), got {other}"
            ))),
        }
    }

    pub fn index(self) -> usize {
        match self {
            Level::One => 0,
            Level::Five => 1,
            Level::Ten => 2,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}%", self.percent())
    }
}

/// Deterministic terms in a Dickey–Fuller regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AdfVariant {
    NoConstant,
    Drift,
    Trend,
}

impl AdfVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            AdfVariant::NoConstant => "none",
            AdfVariant::Drift => "drift",
            AdfVariant::Trend => "trend",
        }
    }

    pub fn deterministic_terms(self) -> usize {
        match self {
            AdfVariant::NoConstant => 0,
            AdfVariant::Drift => 1,
            AdfVariant::Trend => 2,
        }
    }
}

impl fmt::Display for AdfVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AdfVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "none" | "nc" | "no-constant" | "noconstant" => Ok(AdfVariant::NoConstant),
            "drift" | "c" | "constant" => Ok(AdfVariant::Drift),
            "trend" | "ct" => Ok(AdfVariant::Trend),
            other => Err(Error::Config(format!("unknown ADF variant `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BreakType {
    Intercept,
    Trend,
    Both,
}

impl BreakType {
    pub const ALL: [BreakType; 3] = [BreakType::Intercept, BreakType::Trend, BreakType::Both];

    pub fn as_str(self) -> &'static str {
        match self {
            BreakType::Intercept => "intercept",
            BreakType::Trend => "trend",
            BreakType::Both => "both",
        }
    }
}

impl fmt::Display for BreakType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BreakType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "intercept" | "a" => Ok(BreakType::Intercept),
            "trend" | "b" => Ok(BreakType::Trend),
            "both" | "c" => Ok(BreakType::Both),
            other => Err(Error::Config(format!("unknown break type `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestFamily {
    Adf(AdfVariant),
    ZivotAndrews(BreakType),
    Cusum,
}

impl fmt::Display for TestFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestFamily::Adf(v) => write!(f, "adf-{v}"),
            TestFamily::ZivotAndrews(b) => write!(f, "za-{b}"),
            TestFamily::Cusum => f.write_str("cusum"),
        }
    }
}

impl FromStr for TestFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "cusum" {
            return Ok(TestFamily::Cusum);
        }
        let unsupported = || Error::Domain(format!("unsupported critical-value family `{s}`"));
        if let Some(rest) = s.strip_prefix("adf-") {
            return rest.parse().map(TestFamily::Adf).map_err(|_| unsupported());
        }
        if let Some(rest) = s.strip_prefix("za-") {
            return rest.parse().map(TestFamily::ZivotAndrews).map_err(|_| unsupported());
        }
        Err(unsupported())
    }
}

/// Which side of the distribution rejects the null.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalValueTable {
    pub family: TestFamily,
    pub tail: Tail,
    /// Values at 1%, 5%, 10%.
    pub values: [f64; 3],
    /// Sample size used for finite-sample interpolation, if any.
    pub nobs: Option<usize>,
}

impl CriticalValueTable {
    pub fn value(&self, level: Level) -> f64 {
        self.values[level.index()]
    }

    /// Left-tailed: reject iff `statistic < cv`. Right-tailed: `statistic ≥ cv`.
    pub fn rejects(&self, statistic: f64, level: Level) -> bool {
        let cv = self.value(level);
        match self.tail {
            Tail::Left => statistic < cv,
            Tail::Right => statistic >= cv,
        }
    }

    pub fn verdicts(&self, statistic: f64) -> Verdicts {
        Verdicts(Level::ALL.map(|l| self.rejects(statistic, l)))
    }

    pub fn is_monotone(&self) -> bool {
        let [a, b, c] = self.values;
        match self.tail {
            Tail::Left => a < b && b < c,
            Tail::Right => a > b && b > c,
        }
    }
}

/// Rejection flags at 1%, 5%, 10%.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Verdicts(pub [bool; 3]);

impl Verdicts {
    pub fn rejects(&self, level: Level) -> bool {
        self.0[level.index()]
    }

    /// `***` at 1%, `**` at 5%, `*` at 10%.
    pub fn stars(&self) -> &'static str {
        if self.0[0] {
            "***"
        } else if self.0[1] {
            "**"
        } else if self.0[2] {
            "*"
        } else {
            ""
        }
    }

    pub fn is_monotone(&self) -> bool {
        (!self.0[0] || self.0[1]) && (!self.0[1] || self.0[2])
    }
}

// MacKinnon (2010), Table 2, N = 1: rows are 1%, 5%, 10%; columns b∞, b1, b2, b3.
const ADF_NO_CONSTANT: [[f64; 4]; 3] = [
    [-2.56574, -2.2358, -3.627, 0.0],
    [-1.94100, -0.2686, -3.365, 31.223],
    [-1.61682, 0.2656, -2.714, 25.364],
];
const ADF_DRIFT: [[f64; 4]; 3] = [
    [-3.43035, -6.5393, -16.786, -79.433],
    [-2.86154, -2.8903, -4.234, -40.040],
    [-2.56677, -1.5384, -2.809, 0.0],
];
const ADF_TREND: [[f64; 4]; 3] = [
    [-3.95877, -9.0531, -28.428, -134.155],
    [-3.41049, -4.3904, -9.036, -45.374],
    [-3.12705, -2.5856, -3.925, -22.380],
];

// Zivot & Andrews (1992): model A (intercept), B (trend), C (both).
const ZA_INTERCEPT: [f64; 3] = [-5.34, -4.80, -4.58];
const ZA_TREND: [f64; 3] = [-4.93, -4.42, -4.11];
const ZA_BOTH: [f64; 3] = [-5.57, -5.08, -4.82];

pub const CUSUM_PARAMETERS: [f64; 3] = [1.143, 0.947, 0.850];

/// Critical values for `family`. `nobs` is required for ADF and ignored
/// otherwise.
pub fn lookup_critical(family: TestFamily, nobs: Option<usize>) -> Result<CriticalValueTable> {
    match family {
        TestFamily::Adf(variant) => {
            let t = match nobs {
                Some(t) if t > 0 => t,
                _ => {
                    return Err(Error::Domain(
                        "ADF critical values need a positive sample size".into(),
                    ))
                }
            };
            let coef = match variant {
                AdfVariant::NoConstant => &ADF_NO_CONSTANT,
                AdfVariant::Drift => &ADF_DRIFT,
                AdfVariant::Trend => &ADF_TREND,
            };
            let inv = 1.0 / t as f64;
            let values = coef.map(|[b0, b1, b2, b3]| b0 + inv * (b1 + inv * (b2 + inv * b3)));
            Ok(CriticalValueTable {
                family,
                tail: Tail::Left,
                values,
                nobs: Some(t),
            })
        }
        TestFamily::ZivotAndrews(b) => Ok(CriticalValueTable {
            family,
            tail: Tail::Left,
            values: match b {
                BreakType::Intercept => ZA_INTERCEPT,
                BreakType::Trend => ZA_TREND,
                BreakType::Both => ZA_BOTH,
            },
            nobs: None,
        }),
        TestFamily::Cusum => Ok(CriticalValueTable {
            family,
            tail: Tail::Right,
            values: CUSUM_PARAMETERS,
            nobs: None,
        }),
    }
}
