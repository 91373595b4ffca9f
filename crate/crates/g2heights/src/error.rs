use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular curve: discriminant vanishes")]
    Singular,
    #[error("root finder did not converge at {0} bits")]
    NonConvergence(u32),
    #[error("all duplication forms vanish; input is not on the Kummer surface")]
    DegenerateImage,
    #[error("points share an x-coordinate")]
    EqualX,
    #[error("operand is the point at infinity")]
    InfinityOperand,
    #[error("naive x-height of the point at infinity is undefined")]
    InfinityPoint,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("canonical height indistinguishable from zero")]
    TorsionOperand,
    #[error("branch points too close for the integration tolerance")]
    PathDegeneracy,
    #[error("Siegel reduction stalled after {0} sweeps")]
    ReductionStall(usize),
    #[error("Abel-Jacobi image of root {0} is not near a unique half period")]
    AmbiguousMatch(usize),
    #[error("even theta constant underflows")]
    EvenThetaVanishes,
    #[error("Kummer point lies on the divisor of the chosen linear form")]
    OnDivisor,
    #[error("cell assignment requested without analytic data")]
    MissingAnalytic,
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("search interval is empty: ({0}, {1})")]
    EmptyInterval(f64, f64),
    #[error("Gram norm below tolerance at index {0}")]
    DegenerateGram(usize),
    #[error("invariant violated: {0}")]
    Invariant(String),
}
