use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph is reducible: the infinite-order edges do not connect all generators")]
    Reducible,
    #[error("gram matrix is singular at t = {0}, an exceptional value")]
    Singular(String),
    #[error("t too close to exceptional set (eigenvalue {value:e} of the gram matrix)")]
    NearExceptional { value: f64 },
    #[error("signature mismatch: {0:?} vs {1:?}")]
    SignatureMismatch((usize, usize), (usize, usize)),
    #[error(
        "sphere enumeration exceeded the memory budget of {budget} elements at length {length}"
    )]
    SphereTooLarge { length: usize, budget: usize },
    #[error("point not reduced within budget of {0} steps")]
    ReductionBudget(usize),
    #[error("point is not in the pseudo-hyperbolic space")]
    NotTimelike,
    #[error("pair is not spacelike")]
    NotSpacelike,
    #[error("points not properly ordered or not collinear")]
    NotCollinear,
    #[error("orbit too small: {0} spacelike pairs")]
    OrbitTooSmall(usize),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("coloring violation on adjacent pair ({0}, {1})")]
    ColoringViolation(usize, usize),
    #[error("lightlike normal vector at index {0}")]
    LightlikeNormal(usize),
    #[error("walls {0} and {1} are not disjoint")]
    WallsIntersect(usize, usize),
    #[error("{0}")]
    Construction(String),
    #[error("no convergence within {0} iterations")]
    NoConvergence(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
