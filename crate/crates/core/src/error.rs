use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {position}: expected {}, found {found}", expected.join(" or "))]
    Syntax { position: usize, expected: Vec<String>, found: String },
    #[error("unknown variable '{name}' at byte {position}")]
    UnknownVariable { position: usize, name: String },
    #[error("exponent overflow at byte {position}")]
    ExponentOverflow { position: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("polynomial has degree zero in the eliminated variable")]
    DegreeZeroInEliminated,
    #[error("operation requires a nonconstant polynomial")]
    ConstantInput,
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("projective point with all coordinates zero")]
    AllZeroCoordinates,
    #[error("coefficient family is empty or all zero")]
    DegenerateFamily,
    #[error("polynomials share a nonconstant factor ({0}); the intersection is infinite")]
    InfiniteIntersection(String),
    #[error("curve is a translate of a subtorus: slope ({p},{q}) has tangency polynomial sharing the factor {witness}")]
    TranslateOfSubtorus { p: i64, q: i64, witness: String },
    #[error("point is a singular point of the curve")]
    SingularPointOfCurve,
    #[error("point is not a singular point of the curve")]
    NotSingularPoint,
    #[error("minimal polynomial is reducible")]
    ReducibleMinimalPolynomial,
    #[error("box does not isolate a single root")]
    NonIsolatingBox,
    #[error("point is not certified against the required equations")]
    UncertifiedPoint,
    #[error("precision budget exhausted while {0}")]
    PrecisionExhausted(String),
    #[error("both polynomials vanish at the point")]
    BothVanish,
    #[error("invalid slope ({0},{1}): entries must be coprime and not both zero")]
    InvalidSlope(i64, i64),
    #[error("invalid bound inputs: {0}")]
    InvalidBoundInputs(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invalid input: {0}")]
    Input(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Process exit status for command-line use.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::TranslateOfSubtorus { .. } => 3,
            Error::PrecisionExhausted(_) => 5,
            Error::UncertifiedPoint | Error::NonIsolatingBox | Error::ReducibleMinimalPolynomial => 4,
            _ => 2,
        }
    }
}
