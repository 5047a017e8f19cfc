use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("no dissipation: every collapse rate is zero")]
    NoDissipation,
    #[error(
        "degenerate null space: singular values {smallest:e} and {second:e} are not separated"
    )]
    DegenerateNullSpace { smallest: f64, second: f64 },
    #[error("singular linear system")]
    SingularSystem,
    #[error("step too large: |L|_inf * dt = {0:.3} exceeds 0.1")]
    StepTooLarge(f64),
    #[error("vacuum state: mean photon number {0:e} is too small to normalise g2")]
    VacuumState(f64),
    #[error("expectation value has a non-negligible imaginary part ({0:e})")]
    ComplexResidue(f64),
    #[error("unequal detunings: delta_a = {delta_a}, delta = {delta}")]
    UnequalDetunings { delta_a: f64, delta: f64 },
    #[error("singular denominator in the steady amplitudes (|D| = {0:e})")]
    SingularDenominator(f64),
    #[error("singular z in the analytic g2")]
    SingularZ,
    #[error("amplitude integration not converged (relative change {0:e} over the final 10%)")]
    NotConverged(f64),
    #[error("no interior extremum")]
    NoInteriorExtremum,
}
