use thiserror::Error;

/// Errors surfaced by structure construction, weight evaluation, and
/// operator quadrature. Verification checks never error; they report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported dimension n={0}: only n=1 has a dyadic backend")]
    UnsupportedDimension(u32),

    #[error("caliber e^(-2*theta0) = {0} is not the reciprocal of an integer >= 2")]
    UnsupportedCaliber(f64),

    #[error("point with |z| = {modulus} is outside generation {max_generation} truncation")]
    OutOfTruncation { modulus: f64, max_generation: u32 },

    #[error("no dyadic tent up to generation {max_generation} contains the Carleson tent over |z| = {apex_modulus}")]
    TentNotFound {
        apex_modulus: f64,
        max_generation: u32,
    },

    #[error("divergent tent average: exponent*b = {eb} >= 1 for power weight")]
    DivergentAverage { eb: f64 },

    #[error("unbounded symbol: {0}")]
    UnboundedSymbol(String),

    #[error("quadrature grid generation {0} exceeds the node-count guard (max 14)")]
    GridGenerationTooDeep(u32),

    #[error("quadrature grid would have {nodes} nodes, over the {budget} budget")]
    GridBudget { nodes: usize, budget: usize },

    #[error("tent at generation {generation} contains only {nodes} grid nodes (< {required})")]
    QuadratureCoverage {
        generation: u32,
        nodes: usize,
        required: usize,
    },

    #[error("no feasible extrapolation parameter: r(1e-9) = {r_at_eps} exceeds target {target}")]
    ExtrapolationInfeasible { r_at_eps: f64, target: f64 },

    #[error("stopping-time parameter C*rho = {0} must be < 1")]
    StoppingParameter(f64),

    #[error("weight spec parse error: {0}")]
    WeightSpec(String),

    #[error("symbol spec parse error: {0}")]
    SymbolSpec(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
