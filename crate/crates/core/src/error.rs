use thiserror::Error;

/// Errors raised by the numerical engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("leading coefficient is zero; not a cubic")]
    Degree,

    #[error("conic fit needs at least 6 points, got {0}")]
    Arity(usize),

    #[error("origin lies {distance:e} from the path")]
    Proximity { distance: f64 },

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("closure violated: residual {0:e}")]
    Closure(f64),

    #[error("no stationary caustic for X{k}: best diameter {diameter:e} at t = {t}")]
    NoStationary { k: u32, t: f64, diameter: f64 },

    #[error("center X{0} is not in the table")]
    MissingCenter(u32),

    #[error("barycentric weights of X{0} sum to zero")]
    Evaluation(u32),

    #[error("no combination row for X{0}")]
    MissingRow(u32),

    #[error("row X{k} has a pole at rho = {rho}")]
    Pole { k: u32, rho: f64 },

    #[error("u,v,w formulas are singular for p = {p}, q = {q}")]
    Singular { p: f64, q: f64 },

    #[error("no closed form for {0}")]
    MissingFormula(String),

    #[error("degenerate locus has no winding number")]
    UndefinedWinding,

    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A parse failure with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
