//! Line-oriented key-value documents.
//!
//! ```text
//! [section]
//! key = value
//!
//! [next.section]
//! other = 1.5
//! ```
//!
//! Keys never contain ` = `; values run to the end of the line. Floats are
//! written in Rust's shortest round-trip form, so parsing and re-rendering a
//! rendered document reproduces it byte for byte.

use std::fmt::{self, Display, Write as _};

use crate::error::{Error, Result};

pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_else(|| "none".to_string())
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KvSection {
    pub name: String,
    pub entries: Vec<(String, String)>,
}

impl KvSection {
    pub fn new(name: impl Into<String>) -> Self {
        KvSection {
            name: name.into(),
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Display) {
        let key = key.into();
        let value = value.to_string();
        debug_assert!(!key.contains(" = ") && !key.contains('\n'), "bad key {key:?}");
        debug_assert!(!value.contains('\n'), "multi-line value for {key}");
        self.entries.push((key, value));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KvDocument {
    pub sections: Vec<KvSection>,
}

impl KvDocument {
    pub fn new() -> Self {
        KvDocument::default()
    }

    pub fn add(&mut self, section: KvSection) {
        self.sections.push(section);
    }

    pub fn section(&self, name: &str) -> Option<&KvSection> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.section(section)?.get(key)
    }

    pub fn get_f64(&self, section: &str, key: &str) -> Option<f64> {
        self.get(section, key)?.parse().ok()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut doc = KvDocument::new();
        let mut current: Option<KvSection> = None;
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            if let Some(name) = line.trim().strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                if let Some(s) = current.take() {
                    doc.sections.push(s);
                }
                current = Some(KvSection::new(name.trim()));
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Format(format!("line {}: expected `key = value`", i + 1))
            })?;
            current
                .get_or_insert_with(|| KvSection::new(""))
                .entries
                .push((k.trim().to_string(), v.trim().to_string()));
        }
        if let Some(s) = current {
            doc.sections.push(s);
        }
        Ok(doc)
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl Display for KvDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, s) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            if !s.name.is_empty() || i > 0 {
                writeln!(out, "[{}]", s.name)?;
            }
            for (k, v) in &s.entries {
                writeln!(out, "{k} = {v}")?;
            }
        }
        f.write_str(&out)
    }
}

/// Fixed-width plain-text table.
#[derive(Debug, Clone, Default)]
pub struct TextTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl TextTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        TextTable {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row<S: Into<String>>(&mut self, cells: impl IntoIterator<Item = S>) {
        self.rows.push(cells.into_iter().map(Into::into).collect());
    }

    pub fn render(&self) -> String {
        let ncol = self
            .rows
            .iter()
            .map(Vec::len)
            .chain(std::iter::once(self.header.len()))
            .max()
            .unwrap_or(0);
        let mut widths = vec![0; ncol];
        for r in std::iter::once(&self.header).chain(&self.rows) {
            for (j, c) in r.iter().enumerate() {
                widths[j] = widths[j].max(c.chars().count());
            }
        }
        let total: usize = widths.iter().sum::<usize>() + 2 * ncol.saturating_sub(1);
        let line = |r: &Vec<String>| {
            let cells: Vec<String> = (0..ncol)
                .map(|j| {
                    let c = r.get(j).map(String::as_str).unwrap_or("");
                    if j == 0 {
                        format!("{c:<w$}", w = widths[j])
                    } else {
                        format!("{c:>w$}", w = widths[j])
                    }
                })
                .collect();
            cells.join("  ").trim_end().to_string()
        };
        let mut out = String::new();
        out.push_str(&line(&self.header));
        out.push('\n');
        out.push_str(&"-".repeat(total));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_byte_identical() {
        let mut doc = KvDocument::new();
        let mut a = KvSection::new("model.gfcf");
        a.push("coef.GFCF", fmt_f64(9.155));
        a.push("tiny", fmt_f64(1.25e-20));
        a.push("label", "inverted_u");
        doc.add(a);
        let mut b = KvSection::new("provenance");
        b.push("n", 44);
        doc.add(b);
        let text = doc.render();
        let parsed = KvDocument::parse(&text).unwrap();
        assert_eq!(parsed, doc);
        assert_eq!(parsed.render(), text);
        assert_eq!(parsed.get_f64("model.gfcf", "tiny"), Some(1.25e-20));
    }

    #[test]
    fn parse_tolerates_comments_and_blank_lines() {
        let doc = KvDocument::parse("# c\nkey = v\n\n[s]\na=1\n").unwrap();
        assert_eq!(doc.get("", "key"), Some("v"));
        assert_eq!(doc.get("s", "a"), Some("1"));
        assert!(KvDocument::parse("[s]\nnot a pair\n").is_err());
    }

    #[test]
    fn text_table_alignment() {
        let mut t = TextTable::new(["a", "bb"]);
        t.row(["xyz", "1"]);
        assert_eq!(t.render(), "a    bb\n-------\nxyz   1\n");
    }
}
