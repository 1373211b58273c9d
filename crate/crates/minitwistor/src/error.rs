use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid branch configuration: {0}")]
    InvalidConfig(String),
    #[error("evaluation at a ramification point (w = 0) where the basis is singular")]
    RamificationPoint,
    #[error("adaptive quadrature failed to converge (estimated error {0:.3e})")]
    QuadratureFailure(f64),
    #[error("Newton continuation did not converge: {0}")]
    NoConvergence(String),
    #[error("solution left the requested Seifert component")]
    WrongComponent,
    #[error("fitting system has a degenerate (>= 2-dimensional) nullspace")]
    DegenerateNullspace,
    #[error("hyperplane is not a member of any minitwistor-line family: {0}")]
    NotInFamily(String),
    #[error("anchor is degenerate: {0}")]
    DegenerateAnchor(String),
    #[error("metric is degenerate at this point: {0}")]
    DegeneratePoint(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
