use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(f64),
    #[error("point {0} is not in the open upper half-plane")]
    NotInterior(f64),
    #[error("geodesic does not cross the horoball")]
    NoCrossing,
    #[error("geodesic enters the horoball and never exits")]
    NeverExits,
    #[error("basepoint lies inside the horoball")]
    BasepointInside,
    #[error("circles do not intersect")]
    NoIntersection,
    #[error("cutting sequence must start with R, alternate turns and have positive counts")]
    BadCutting,
    #[error("invalid presentation: {0}")]
    Presentation(String),
    #[error("ball of radius {radius} would exceed the budget of {budget} elements (growth about {growth:.3} per step)")]
    Budget { radius: u32, budget: usize, growth: f64 },
    #[error("no orbit point found within search radius {0}")]
    SearchExhausted(u32),
    #[error("ball radius {have} is smaller than the requested {need}")]
    BallTooSmall { have: u32, need: u32 },
    #[error("invalid step distribution: {0}")]
    Distribution(String),
    #[error("walk has not converged at length {0}")]
    NotConverged(usize),
    #[error("hypothesis violated: {0}")]
    Hypothesis(&'static str),
    #[error("integer overflow in exact matrix arithmetic")]
    Overflow,
    #[error("invalid argument: {0}")]
    Invalid(&'static str),
}
