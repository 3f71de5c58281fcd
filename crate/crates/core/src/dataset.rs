//! Annual data frames, variable transformations and design matrices.
//!
//! Cells are `Option<f64>`: `None` marks a missing observation. Growth rates
//! and shares are stored in percent (5.40, not 0.054).

use std::collections::BTreeSet;
use std::io::{Read, Write};
use std::path::Path;

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::numerics::Matrix;

pub type Column = Vec<Option<f64>>;

/// Year-indexed named columns of annual observations.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesFrame {
    years: Vec<i32>,
    columns: IndexMap<String, Column>,
}

impl TimeSeriesFrame {
    /// Empty frame over `years`, which must be strictly increasing and consecutive.
    pub fn new(years: Vec<i32>) -> Result<Self> {
        check_years(&years)?;
        Ok(TimeSeriesFrame {
            years,
            columns: IndexMap::new(),
        })
    }

    pub fn years(&self) -> &[i32] {
        &self.years
    }

    pub fn len(&self) -> usize {
        self.years.len()
    }

    pub fn is_empty(&self) -> bool {
        self.years.is_empty()
    }

    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.columns.keys().map(String::as_str)
    }

    pub fn column(&self, name: &str) -> Result<&Column> {
        self.columns
            .get(name)
            .ok_or_else(|| Error::Schema(format!("no column named `{name}`")))
    }

    pub fn has_column(&self, name: &str) -> bool {
        self.columns.contains_key(name)
    }

    /// Adds or replaces a column. Panics if the length differs from the year count.
    pub fn insert(&mut self, name: impl Into<String>, values: Column) {
        assert_eq!(values.len(), self.years.len(), "column length must match years");
        self.columns.insert(name.into(), values);
    }

    pub fn insert_complete(&mut self, name: impl Into<String>, values: &[f64]) {
        self.insert(name, values.iter().copied().map(Some).collect());
    }

    pub fn position(&self, year: i32) -> Option<usize> {
        let first = *self.years.first()?;
        let idx = usize::try_from(year - first).ok()?;
        (idx < self.years.len()).then_some(idx)
    }

    /// Non-missing values of `name` with their years.
    pub fn observed(&self, name: &str) -> Result<(Vec<i32>, Vec<f64>)> {
        let col = self.column(name)?;
        Ok(self
            .years
            .iter()
            .zip(col)
            .filter_map(|(y, v)| v.map(|v| (*y, v)))
            .unzip())
    }

    /// Element-wise square of an existing column.
    pub fn squared(&self, name: &str) -> Result<Column> {
        Ok(self.column(name)?.iter().map(|v| v.map(|x| x * x)).collect())
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["year".to_string()];
        header.extend(self.columns.keys().cloned());
        w.write_record(&header).map_err(csv_err)?;
        for (i, year) in self.years.iter().enumerate() {
            let mut rec = vec![year.to_string()];
            for col in self.columns.values() {
                rec.push(col[i].map(|v| format!("{v:?}")).unwrap_or_default());
            }
            w.write_record(&rec).map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::Format(e.to_string()))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv output is UTF-8")
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}

fn check_years(years: &[i32]) -> Result<()> {
    for w in years.windows(2) {
        if w[1] == w[0] {
            return Err(Error::Format(format!("year {} listed twice", w[0])));
        }
        if w[1] < w[0] {
            return Err(Error::Format("years must be sorted ascending".into()));
        }
        if w[1] != w[0] + 1 {
            return Err(Error::Gap {
                after: w[0],
                next: w[1],
            });
        }
    }
    Ok(())
}

/// Maps source-file column names onto canonical variable names.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ColumnSchema {
    /// `(canonical, source)` pairs in output order.
    pub mappings: Vec<(String, String)>,
}

impl ColumnSchema {
    /// Empty schema: keep every column under its own name.
    pub fn all() -> Self {
        ColumnSchema::default()
    }

    /// Columns that must appear under their canonical names.
    pub fn required(names: &[&str]) -> Self {
        ColumnSchema {
            mappings: names.iter().map(|n| (n.to_string(), n.to_string())).collect(),
        }
    }

    /// Parses `canonical = source` lines (section headers and `#` comments ignored).
    pub fn parse(text: &str) -> Result<Self> {
        let mut mappings = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with('[') {
                continue;
            }
            let (canonical, source) = line.split_once('=').ok_or_else(|| {
                Error::Schema(format!("schema line {}: expected `canonical = source`", lineno + 1))
            })?;
            mappings.push((canonical.trim().to_string(), source.trim().to_string()));
        }
        Ok(ColumnSchema { mappings })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        ColumnSchema::parse(&text)
    }
}

#[derive(Debug, Clone)]
pub struct LoadedFrame {
    pub frame: TimeSeriesFrame,
    /// Cells that were present but could not be parsed as numbers.
    pub warnings: Vec<String>,
}

pub fn load_csv(path: &Path, schema: &ColumnSchema) -> Result<LoadedFrame> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_csv(file, schema)
}

/// Reads `year,<var1>,<var2>,...`; empty or unparseable cells become missing.
pub fn read_csv<R: Read>(reader: R, schema: &ColumnSchema) -> Result<LoadedFrame> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(|h| h.trim_start_matches('\u{feff}').to_string())
        .collect();
    let year_idx = header
        .iter()
        .position(|h| h.eq_ignore_ascii_case("year"))
        .ok_or_else(|| Error::Schema("header has no `year` column".into()))?;

    let selected: Vec<(String, usize)> = if schema.mappings.is_empty() {
        header
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != year_idx)
            .map(|(i, h)| (h.clone(), i))
            .collect()
    } else {
        schema
            .mappings
            .iter()
            .map(|(canonical, source)| {
                header
                    .iter()
                    .position(|h| h == source)
                    .map(|i| (canonical.clone(), i))
                    .ok_or_else(|| Error::Schema(format!("missing required column `{source}`")))
            })
            .collect::<Result<_>>()?
    };
    let mut seen = BTreeSet::new();
    for (name, _) in &selected {
        if !seen.insert(name.as_str()) {
            return Err(Error::Schema(format!("duplicate variable name `{name}`")));
        }
    }

    let mut rows: Vec<(i32, Vec<Option<f64>>)> = Vec::new();
    let mut warnings = Vec::new();
    for (r, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let raw_year = rec.get(year_idx).unwrap_or("");
        let year: i32 = raw_year.parse().map_err(|_| {
            Error::Format(format!("row {}: cannot parse year `{raw_year}`", r + 2))
        })?;
        let mut vals = Vec::with_capacity(selected.len());
        for (name, idx) in &selected {
            let cell = rec.get(*idx).unwrap_or("");
            if cell.is_empty() {
                vals.push(None);
                continue;
            }
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => vals.push(Some(v)),
                _ => {
                    warnings.push(format!("{year} {name}: unparseable cell `{cell}` set missing"));
                    vals.push(None);
                }
            }
        }
        rows.push((year, vals));
    }
    rows.sort_by_key(|(y, _)| *y);
    let years: Vec<i32> = rows.iter().map(|(y, _)| *y).collect();
    let mut frame = TimeSeriesFrame::new(years)?;
    for (j, (name, _)) in selected.iter().enumerate() {
        frame.insert(name.clone(), rows.iter().map(|(_, v)| v[j]).collect());
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(LoadedFrame { frame, warnings })
}

/// A derived column plus the cells that had to be set missing.
#[derive(Debug, Clone, PartialEq)]
pub struct Derived {
    pub values: Column,
    pub warnings: Vec<String>,
}

/// Percent change `100·(x_t − x_{t−1}) / x_{t−1}`; the first year is missing.
pub fn growth_rate(frame: &TimeSeriesFrame, column: &str) -> Result<Derived> {
    let col = frame.column(column)?;
    let consecutive = col.windows(2).any(|w| w[0].is_some() && w[1].is_some());
    if !consecutive {
        return Err(Error::Length(format!(
            "`{column}` needs two consecutive non-missing values for a growth rate"
        )));
    }
    let mut values = vec![None; col.len()];
    let mut warnings = Vec::new();
    for t in 1..col.len() {
        if let (Some(prev), Some(cur)) = (col[t - 1], col[t]) {
            if prev == 0.0 {
                warnings.push(format!(
                    "{}: `{column}` is zero in the previous year; growth set missing",
                    frame.years[t]
                ));
                continue;
            }
            values[t] = Some(100.0 * (cur - prev) / prev);
        }
    }
    warnings.iter().for_each(|w| log::warn!("{w}"));
    Ok(Derived { values, warnings })
}

/// `100·num_t / gdp_t`.
pub fn share_of_gdp(frame: &TimeSeriesFrame, numerator: &str, gdp_column: &str) -> Result<Derived> {
    let num = frame.column(numerator)?;
    let gdp = frame.column(gdp_column)?;
    let mut warnings = Vec::new();
    let values = num
        .iter()
        .zip(gdp)
        .zip(&frame.years)
        .map(|((n, g), year)| match (n, g) {
            (Some(n), Some(g)) if *g > 0.0 => Some(100.0 * n / g),
            (Some(_), Some(_)) => {
                warnings.push(format!("{year}: non-positive `{gdp_column}`; share set missing"));
                None
            }
            _ => None,
        })
        .collect();
    warnings.iter().for_each(|w| log::warn!("{w}"));
    Ok(Derived { values, warnings })
}

/// An indicator variable equal to one in `active_years`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DummySpec {
    pub name: String,
    pub active_years: BTreeSet<i32>,
}

impl DummySpec {
    pub fn new(name: impl Into<String>, years: impl IntoIterator<Item = i32>) -> Self {
        DummySpec {
            name: name.into(),
            active_years: years.into_iter().collect(),
        }
    }

    /// The four shock dummies: 1973, 1989, 1994–1995 and 1997.
    pub fn cambodia_shocks() -> Vec<DummySpec> {
        vec![
            DummySpec::new("du1", [1973]),
            DummySpec::new("du2", [1989]),
            DummySpec::new("du3", [1994, 1995]),
            DummySpec::new("du4", [1997]),
        ]
    }
}

pub fn apply_dummy(frame: &TimeSeriesFrame, spec: &DummySpec) -> Result<Column> {
    if spec.active_years.is_empty() {
        return Err(Error::Domain(format!("dummy `{}` has no active years", spec.name)));
    }
    if let Some(y) = spec.active_years.iter().find(|y| frame.position(**y).is_none()) {
        return Err(Error::Domain(format!(
            "dummy `{}` is active in {y}, outside the frame's years",
            spec.name
        )));
    }
    Ok(frame
        .years
        .iter()
        .map(|y| Some(if spec.active_years.contains(y) { 1.0 } else { 0.0 }))
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignSpec {
    pub response: String,
    pub regressors: Vec<String>,
    pub intercept: bool,
}

impl DesignSpec {
    pub fn new(response: &str, regressors: &[&str]) -> Self {
        DesignSpec {
            response: response.to_string(),
            regressors: regressors.iter().map(|s| s.to_string()).collect(),
            intercept: true,
        }
    }

    pub fn without_intercept(mut self) -> Self {
        self.intercept = false;
        self
    }
}

pub const INTERCEPT_NAME: &str = "const";

/// Response vector and regressor matrix after listwise deletion.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    pub response_name: String,
    pub response: Vec<f64>,
    /// Column names of `x`, with `const` first when an intercept is present.
    pub regressor_names: Vec<String>,
    pub x: Matrix,
    pub years: Vec<i32>,
    pub intercept: bool,
}

impl DesignMatrix {
    /// Assembles a design from already-complete data.
    pub fn from_parts(
        response_name: &str,
        response: Vec<f64>,
        regressor_names: Vec<String>,
        x: Matrix,
        years: Vec<i32>,
        intercept: bool,
    ) -> Result<Self> {
        let (n, k) = (x.rows(), x.cols());
        assert_eq!(response.len(), n, "response length must match rows");
        assert_eq!(regressor_names.len(), k, "one name per column");
        assert_eq!(years.len(), n, "one year per row");
        if n <= k {
            return Err(Error::Estimability { n, k });
        }
        if !x.is_finite() || response.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("design contains non-finite values".into()));
        }
        Ok(DesignMatrix {
            response_name: response_name.to_string(),
            response,
            regressor_names,
            x,
            years,
            intercept,
        })
    }

    pub fn n(&self) -> usize {
        self.x.rows()
    }

    pub fn k(&self) -> usize {
        self.x.cols()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.regressor_names.iter().position(|n| n == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        self.column_index(name).map(|j| self.x.column(j))
    }
}

/// Years where every named column is observed.
pub fn complete_years(frame: &TimeSeriesFrame, names: &[&str]) -> Result<Vec<usize>> {
    let cols = names
        .iter()
        .map(|n| frame.column(n))
        .collect::<Result<Vec<_>>>()?;
    Ok((0..frame.len())
        .filter(|&i| cols.iter().all(|c| c[i].is_some()))
        .collect())
}

pub fn build_design(frame: &TimeSeriesFrame, spec: &DesignSpec) -> Result<DesignMatrix> {
    let mut names: Vec<&str> = vec![spec.response.as_str()];
    names.extend(spec.regressors.iter().map(String::as_str));
    let rows = complete_years(frame, &names)?;

    let mut regressor_names = Vec::new();
    if spec.intercept {
        regressor_names.push(INTERCEPT_NAME.to_string());
    }
    regressor_names.extend(spec.regressors.iter().cloned());
    let (n, k) = (rows.len(), regressor_names.len());
    if n <= k {
        return Err(Error::Estimability { n, k });
    }

    let resp = frame.column(&spec.response)?;
    let cols = spec
        .regressors
        .iter()
        .map(|r| frame.column(r))
        .collect::<Result<Vec<_>>>()?;
    let mut x = Matrix::zeros(n, k);
    let offset = usize::from(spec.intercept);
    for (i, &row) in rows.iter().enumerate() {
        if spec.intercept {
            x[(i, 0)] = 1.0;
        }
        for (j, col) in cols.iter().enumerate() {
            x[(i, j + offset)] = col[row].expect("complete row");
        }
    }
    DesignMatrix::from_parts(
        &spec.response,
        rows.iter().map(|&r| resp[r].expect("complete row")).collect(),
        regressor_names,
        x,
        rows.iter().map(|&r| frame.years[r]).collect(),
        spec.intercept,
    )
}

/// Canonical names of the raw input columns.
pub mod raw {
    pub const GDP: &str = "gdp";
    pub const GFCF: &str = "gfcf";
    pub const GFCE_SHARE: &str = "gfce_share";
    pub const GFCE: &str = "gfce";
    pub const EXPORTS: &str = "exports";
    pub const POP_GROWTH: &str = "pop_growth";
    pub const POPULATION: &str = "population";
}

/// Canonical names of the model variables.
pub mod vars {
    pub const GGDP: &str = "GGDP";
    pub const LAB: &str = "LAB";
    pub const EXPO: &str = "EXPO";
    pub const GFCF: &str = "GFCF";
    pub const GFCE: &str = "GFCE";
    pub const GFCF_SQ: &str = "GFCF2";
    pub const GFCE_SQ: &str = "GFCE2";
}

/// Frame with derived model variables added, and any warnings raised.
#[derive(Debug, Clone)]
pub struct PreparedFrame {
    pub frame: TimeSeriesFrame,
    pub warnings: Vec<String>,
}

/// Adds `GGDP`, `LAB`, `EXPO`, `GFCF`, `GFCE` and their squares to a raw frame.
///
/// Labour growth is population growth: `pop_growth` is used as is, or derived
/// from `population` levels. `GFCE` comes from `gfce_share` when present,
/// otherwise from `gfce` levels over `gdp`.
pub fn prepare_variables(raw_frame: &TimeSeriesFrame) -> Result<PreparedFrame> {
    let mut frame = raw_frame.clone();
    let mut warnings = Vec::new();
    let take = |d: Derived, warnings: &mut Vec<String>| {
        warnings.extend(d.warnings);
        d.values
    };

    let ggdp = growth_rate(&frame, raw::GDP)?;
    let ggdp = take(ggdp, &mut warnings);
    let expo = growth_rate(&frame, raw::EXPORTS)?;
    let expo = take(expo, &mut warnings);
    let lab = if frame.has_column(raw::POP_GROWTH) {
        frame.column(raw::POP_GROWTH)?.clone()
    } else if frame.has_column(raw::POPULATION) {
        let d = growth_rate(&frame, raw::POPULATION)?;
        take(d, &mut warnings)
    } else {
        return Err(Error::Schema(format!(
            "need `{}` or `{}` for labour growth",
            raw::POP_GROWTH,
            raw::POPULATION
        )));
    };
    let gfcf = share_of_gdp(&frame, raw::GFCF, raw::GDP)?;
    let gfcf = take(gfcf, &mut warnings);
    let gfce = if frame.has_column(raw::GFCE_SHARE) {
        frame.column(raw::GFCE_SHARE)?.clone()
    } else if frame.has_column(raw::GFCE) {
        let d = share_of_gdp(&frame, raw::GFCE, raw::GDP)?;
        take(d, &mut warnings)
    } else {
        return Err(Error::Schema(format!(
            "need `{}` or `{}` for government consumption",
            raw::GFCE_SHARE,
            raw::GFCE
        )));
    };

    frame.insert(vars::GGDP, ggdp);
    frame.insert(vars::LAB, lab);
    frame.insert(vars::EXPO, expo);
    frame.insert(vars::GFCF, gfcf);
    frame.insert(vars::GFCE, gfce);
    let sq = frame.squared(vars::GFCF)?;
    frame.insert(vars::GFCF_SQ, sq);
    let sq = frame.squared(vars::GFCE)?;
    frame.insert(vars::GFCE_SQ, sq);
    Ok(PreparedFrame { frame, warnings })
}
