use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("substitution collapsed: the resulting denominator is the zero polynomial")]
    SubstitutionCollapse,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("indeterminate point: {0}")]
    IndeterminatePoint(String),
    #[error("no valid sample found after {0} consecutive draws hit a vanishing denominator")]
    SampleExhaustion(usize),
    #[error("symbol `{0}` has no value")]
    UnboundSymbol(String),
    #[error("coefficient {0} has no image in the prime field")]
    NotEmbeddable(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("not a symmetry of the map: {0}")]
    NotASymmetry(String),
    #[error("not a Möbius map in X: {0}")]
    NotMobius(String),
    #[error("Möbius reduction failed: X-degrees ({num_degree}, {den_degree}) after cancellation")]
    MobiusReductionFailure { num_degree: u32, den_degree: u32 },
    #[error("invalid boundary map: {0}")]
    InvalidBoundaryMap(String),
    #[error("the Yang-Baxter map is not reversible")]
    NotReversible,
    #[error("invalid site index {index} for a lattice of {sites} sites")]
    InvalidSite { index: usize, sites: usize },
    #[error("factor {factor} of the transfer map hit an indeterminate point: {reason}")]
    TransferSingular { factor: usize, reason: String },
    #[error("parse error at byte {offset}: expected {}, found {found}", expected.join(" or "))]
    Parse {
        offset: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(String),
    #[error("map spec error: {0}")]
    Spec(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
