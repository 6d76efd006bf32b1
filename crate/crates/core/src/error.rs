use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A function with a pole was evaluated at the pole.
    #[error("pole at t = {t}")]
    Pole { t: f64 },

    /// A sampled function value was NaN or infinite.
    #[error("non-finite value {value} at t = {t}")]
    NonFinite { t: f64, value: f64 },

    /// A zero whose slope is too small to be treated as simple.
    #[error("degenerate zero near t = {t} (slope {slope:e}, scale {scale:e}){}", arc_suffix(*.arc))]
    DegenerateZero {
        t: f64,
        slope: f64,
        scale: f64,
        arc: Option<usize>,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("bad cache file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn arc_suffix(arc: Option<usize>) -> String {
    match arc {
        Some(k) => format!(" on arc {k}"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Attach an arc index to a degenerate-zero error; other variants pass through.
    pub fn on_arc(self, k: usize) -> Self {
        match self {
            Error::DegenerateZero {
                t, slope, scale, ..
            } => Error::DegenerateZero {
                t,
                slope,
                scale,
                arc: Some(k),
            },
            other => other,
        }
    }

    /// True for failures of the numerics rather than of the caller's input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Pole { .. } | Error::NonFinite { .. } | Error::DegenerateZero { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
