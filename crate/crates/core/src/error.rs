use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the domain of a formula.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension error: n = {n} (need n >= {min})")]
    Dimension { n: usize, min: usize },

    /// The radius is below the switch radius, where formulas dividing by `w`
    /// are replaced by their series limits.
    #[error("origin limit required at r = {r:e} (switch radius {switch_radius:e})")]
    OriginLimit { r: f64, switch_radius: f64 },

    #[error("radius {r} outside [{lo}, {hi}]")]
    Range { r: f64, lo: f64, hi: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("integration stalled at r = {last_good_r} (step {step:e})")]
    IntegrationStall { last_good_r: f64, step: f64 },

    #[error("monotonicity violation at r = {r}: {what}")]
    Monotonicity { r: f64, what: String },

    #[error("fit error: {0}")]
    Fit(String),

    #[error("inversion error: {0}")]
    Inversion(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// Wraps an error raised while evaluating at a specific radius.
    #[error("at r = {r}: {source}")]
    AtRadius {
        r: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(self, r: f64) -> Self {
        match self {
            e @ Error::AtRadius { .. } => e,
            e => Error::AtRadius {
                r,
                source: Box::new(e),
            },
        }
    }

    /// Strips any [`Error::AtRadius`] wrapping.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtRadius { source, .. } => source.root(),
            e => e,
        }
    }
}
