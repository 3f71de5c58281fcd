use std::path::PathBuf;

use crate::armey::ShapeVerdict;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("gap in annual data: year {after} is followed by {next}")]
    Gap { after: i32, next: i32 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("design is not estimable: {n} observations for {k} parameters")]
    Estimability { n: usize, k: usize },

    #[error("collinear design: column `{column}` is a linear combination of earlier columns")]
    Collinear { column: String },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("series too short: {0}")]
    Length(String),

    #[error("rank error: {0}")]
    Rank(String),

    #[error("no interior maximum: fitted quadratic is {shape}")]
    NoInteriorMaximum { shape: ShapeVerdict },
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Io { .. }
            | Error::Schema(_)
            | Error::Format(_)
            | Error::Gap { .. }
            | Error::Domain(_)
            | Error::Length(_) => 3,
            Error::Estimability { .. }
            | Error::Collinear { .. }
            | Error::Degenerate(_)
            | Error::Rank(_)
            | Error::NoInteriorMaximum { .. } => 4,
        }
    }
}
