use thiserror::Error;

/// Invalid lattice configuration or basis state.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("n_sites = {n_sites} outside supported range 1..={max}")]
    SitesOutOfRange { n_sites: usize, max: usize },
    #[error("bit pattern {bits:#b} does not fit in {n_sites} sites")]
    StateOutOfRange { bits: u32, n_sites: usize },
    #[error("invalid site label '{0}', expected 'g' or 'e'")]
    BadLabel(char),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },
    #[error("matrix is {found:?}, expected {expected}x{expected}")]
    DimensionMismatch { expected: usize, found: (usize, usize) },
}

/// Argument outside the domain of a closed-form relation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("kappa = {0} but resonances are labelled from kappa = 2")]
    KappaBelowTwo(u32),
    #[error("`{name}` must be positive, got {value}")]
    NotPositive { name: &'static str, value: f64 },
    #[error("`{name}` must be negative, got {value}")]
    NotNegative { name: &'static str, value: f64 },
    #[error("neighbouring-peak ratio {0} outside (0.70, 1.0); peaks are likely misidentified")]
    RatioOutOfRange(f64),
    #[error("principal quantum number {n} must exceed quantum defect {defect}")]
    DefectTooLarge { n: u32, defect: f64 },
}

/// Failures while propagating or diagonalising.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericalError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("hamiltonian is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),
    #[error("state is not normalised (norm {0})")]
    NotNormalized(f64),
    #[error("norm drift {0:e} exceeds tolerance")]
    NormDrift(f64),
    #[error("state has dimension {found}, hamiltonian has {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("eigensolver produced non-finite values")]
    Eigensolver,
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("at Delta/V = {ratio}: {source}")]
    AtDetuning {
        ratio: f64,
        #[source]
        source: Box<NumericalError>,
    },
    #[error("at Delta/V = {ratio}, T = {time} / Omega: {source}")]
    AtSweepPoint {
        ratio: f64,
        time: f64,
        #[source]
        source: Box<NumericalError>,
    },
}

/// Peak detection and coefficient inversion failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExtractionError {
    #[error("signal has {0} samples, at least 5 are required")]
    TooFewSamples(usize),
    #[error("grid has {grid} points but signal has {signal}")]
    LengthMismatch { grid: usize, signal: usize },
    #[error("detuning grid is not strictly monotone")]
    NonMonotoneGrid,
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

/// Failure of one stage of the sweep-to-coefficient pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error("sweep stage: {0}")]
    Sweep(#[source] NumericalError),
    #[error("peak detection stage: {0}")]
    Peaks(#[source] ExtractionError),
    #[error("kappa identification stage: {0}")]
    Kappa(&'static str),
    #[error("coefficient inversion stage: {0}")]
    Inversion(#[source] DomainError),
}
