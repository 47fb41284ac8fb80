use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid invariant factors {0:?}: divisibility chain broken")]
    BadFactors(Vec<i64>),
    #[error("group has a free factor; finite group required")]
    InfiniteGroup,
    #[error("malformed group homomorphism: {0}")]
    BadHom(String),
    #[error("composite g∘f is nonzero")]
    CompositeNonzero,
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("no cone available for morphism {0}")]
    MissingCone(String),
    #[error("no biproduct for objects {0} and {1}")]
    MissingBiproduct(usize, usize),
    #[error("square does not commute")]
    SquareNotCommuting,
    #[error("morphism is not a weak equivalence: {0}")]
    NotWeakEquivalence(String),
    #[error("no fill-in morphism exists: presentation is not triangulated")]
    NoFillIn,
    #[error("no factorisation exists: {0}")]
    NoFactorization(String),
    #[error("object is not in the enumerated diagram: {0}")]
    NotInDiagram(String),
    #[error("functor is not local: {0}")]
    NotLocal(String),
    #[error("functor table is incomplete: {0}")]
    IncompleteFunctor(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("presentation failed validation: {0:?}")]
    Validation(Vec<String>),
    #[error("invalid model parameters: {0}")]
    BadModel(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
