use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid cyclic quotient 1/{n}(1,{a}): {reason}")]
    InvalidQuotient { n: u64, a: u64, reason: &'static str },

    #[error("continued fraction entry {0} is less than 2")]
    ChainEntry(u64),

    #[error("continued fraction of {n}/{a} rejected: {reason}")]
    ChainInput { n: u64, a: u64, reason: &'static str },

    #[error("{0} exceeds the supported integer range")]
    Overflow(&'static str),

    #[error("Pell coefficient A must be positive")]
    NonPositivePellA,

    #[error("graph construction: {0}")]
    Graph(String),

    #[error("exceptional set is not contractible (intersection form not negative definite)")]
    NotContractible,

    #[error("singular linear system: the configuration does not determine the coefficients")]
    SingularSystem,

    #[error("non-cyclic singularity, unsupported: exceptional curve `{0}` has degree {1} >= 3")]
    BranchVertex(String, usize),

    #[error("marked curve `{curve}` meets one exceptional component in {count} >= 3 vertices")]
    TooManyMeetings { curve: String, count: usize },

    #[error("germ has no marked curve")]
    NoMarkedCurve,

    #[error("exceptional curve `{id}` has self-intersection {weight} >= -1; resolution is not minimal along it")]
    NotMinimal { id: String, weight: i64 },

    #[error("not a simple blow-down: (-1)-curve `{0}` has degree {1}")]
    BlowDown(String, usize),

    #[error("wrong class for this germ: {0}")]
    WrongClass(String),

    #[error("points {p1} and {p2} are not an inverse pair 1/n(1,a), 1/n(1,n-a)")]
    NotInversePair { p1: String, p2: String },

    #[error("junction point {0} is not in a recognized degenerate-cusp family")]
    UnrecognizedJunction(String),

    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: u64 },

    #[error("{what} is not an integer: {value}")]
    NotIntegral { what: &'static str, value: String },

    #[error("degenerate germ: {0}")]
    Degenerate(String),

    #[error("document: {0}")]
    Document(String),
}

impl Error {
    /// Process exit code the command-line front end maps this error to:
    /// 2 for malformed input or a germ outside the analyzable shape,
    /// 1 when the analysis went through but the germ fails its class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::WrongClass(_)
            | Error::NotInversePair { .. }
            | Error::UnrecognizedJunction(_)
            | Error::Degenerate(_) => 1,
            _ => 2,
        }
    }
}
