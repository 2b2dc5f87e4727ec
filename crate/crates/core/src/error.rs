use thiserror::Error;

/// Errors raised across the crate.
///
/// The variants are grouped by how a caller is expected to react: domain
/// errors mean the inputs are outside a formula's validity window,
/// infeasibility means a different oracle or mode should be used, and
/// tolerance failures mean a numerical certificate did not hold.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("exact mode is capped at {cap} steps, requested {requested}")]
    CapExceeded { requested: usize, cap: usize },

    #[error("parameter out of range: {0}")]
    Domain(String),

    #[error("series square root needs a positive constant term with an exact root, got {0}")]
    NonPositiveConstant(String),

    #[error("series coefficient is not representable: {0}")]
    NotRepresentable(String),

    #[error("z = {0} lies on the branch cut [1, inf) and upper-continuity extension was not requested")]
    OnCut(f64),

    #[error("contour construction failed: {0}")]
    Contour(String),

    #[error("quadrature did not converge: {0}")]
    Convergence(String),

    #[error("tolerance exceeded: {0}")]
    Tolerance(String),

    #[error("no asymptotic formula for xi = {xi} (supported up to {limit})")]
    NoRegime { xi: f64, limit: f64 },

    #[error("oracle request is infeasible: {0}")]
    Infeasible(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::NoRegime { .. }
            | Error::OnCut(_)
            | Error::NonPositiveConstant(_)
            | Error::Config(_) => 2,
            Error::CapExceeded { .. } | Error::Infeasible(_) | Error::NotRepresentable(_) => 3,
            Error::Contour(_) | Error::Convergence(_) | Error::Tolerance(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
