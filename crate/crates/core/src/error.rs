use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("lattice has no elements")]
    EmptyLattice,
    #[error("duplicate element identifier `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("cover relation contains a cycle through `{0}`")]
    Cycle(String),
    #[error("cover ({0}, {1}) is implied by a longer path")]
    NotTransitivelyReduced(String, String),
    #[error("`{0}` and `{1}` have no unique {2}")]
    NotALattice(String, String, &'static str),
    #[error("`{0}` is not below `{1}`")]
    NotComparable(String, String),
    #[error("`{0}` and `{1}` are comparable")]
    NotIncomparable(String, String),
    #[error("empty element set")]
    EmptySet,
    #[error("set is not a sublattice")]
    NotSublattice,
    #[error("lattice is not slim")]
    NotSlim,
    #[error("lattice is not semimodular")]
    NotSemimodular,
    #[error("grid needs two nonsingleton chains, got {0}x{1}")]
    SingletonChain(usize, usize),
    #[error("not a 4-cell: {0}")]
    NotACell(String),
    #[error("4-cell with top `{0}` is not distributive")]
    NotDistributiveCell(String),
    #[error("multifork multiplicity must be positive")]
    BadMultiplicity,
    #[error("`{0}` is not a corner")]
    NotACorner(String),
    #[error("invalid layout: {0}")]
    LayoutInvalid(String),
    #[error("malformed recipe: {0}")]
    MalformedRecipe(String),
    #[error("recipe step {index}: {source}")]
    Step {
        index: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("postcondition violated: {0}")]
    Postcondition(String),
    #[error("size {size} exceeds bound {bound}")]
    SizeBound { size: usize, bound: usize },
    #[error("map is not a retraction: {0}")]
    NotARetraction(String),
    #[error("patterns do not share lattice and black set, or stars are not nested")]
    PatternMismatch,
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
    #[error("schema error: {0}")]
    Schema(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Schema(e.to_string())
    }
}
