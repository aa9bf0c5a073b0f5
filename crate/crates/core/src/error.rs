use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid chain specification: {0}")]
    Spec(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("{what} = {value} lies outside [{min}, {max}]")]
    Range {
        what: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("dimension mismatch: {left} vs {right}")]
    Dimension { left: usize, right: usize },

    #[error("eigenvalues admit no common period (ratio {ratio} is not p/q with q <= 64)")]
    NoCommonPeriod { ratio: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid evolution configuration: {0}")]
    Config(String),

    #[error("gap closed: min |h(k)| = {min_modulus:e} for v = {v}, w = {w}")]
    GapClosed { v: f64, w: f64, min_modulus: f64 },

    #[error("response matrix singular at detuning {detuning} (chain eigenvalue {eigenvalue})")]
    Pole { detuning: f64, eigenvalue: f64 },

    #[error("peak detection failed: {found} peak(s) found, at least 2 required")]
    Detection { found: usize },

    #[error("junction phase is multivalued at phi_ext = {phi_ext}: roots {roots:?}")]
    Multivalued { phi_ext: f64, roots: Vec<f64> },

    #[error("coupling diverges: L_T + 2 L_g cos(delta) = {denominator:e}")]
    Divergence { denominator: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
