use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown group token `{0}`")]
    UnknownGroup(String),
    #[error("dihedral group order must be even, got {0}")]
    OddDihedral(usize),
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("group order {order} exceeds bound {bound}")]
    GroupOrderBound { order: usize, bound: usize },
    #[error("element enumeration exceeds bound {bound}")]
    ElementBound { bound: usize },
    #[error("vertex count {n} exceeds bound {bound}")]
    VertexBound { n: usize, bound: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("not an isomorphism: {0}")]
    NotIsomorphism(String),
    #[error("not semiregular: {0}")]
    NotSemiregular(String),
    #[error("orbit count mismatch: expected {expected}, found {found}")]
    OrbitCount { expected: usize, found: usize },
    #[error("membership violation: {0}")]
    Membership(String),
    #[error("mode violation at ({i},{j}): {reason}")]
    ModeViolation { i: usize, j: usize, reason: String },
    #[error("invalid connection sets: {0}")]
    InvalidConnectionSets(String),
    #[error("input must be a PCayley (di)graph")]
    NotPCayley,
    #[error("incompatible inputs: {0}")]
    Incompatible(String),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("budget of {seconds}s exceeded")]
    BudgetExceeded { seconds: u64 },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by a resource bound rather than bad input.
    pub fn is_bound(&self) -> bool {
        matches!(
            self,
            Error::GroupOrderBound { .. }
                | Error::ElementBound { .. }
                | Error::VertexBound { .. }
                | Error::BudgetExceeded { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
