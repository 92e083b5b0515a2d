use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: tautological clause")]
    Tautology { line: usize },
    #[error("clause contains both polarities of variable {0}")]
    Complementary(u32),
    #[error("variable ids must be positive")]
    ZeroVariable,
    #[error("{what}: {n} variables exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, n: usize, cap: usize },
    #[error("clause-set is satisfiable")]
    Satisfiable,
    #[error("clauses clash in {0} variables, resolution needs exactly one")]
    NotResolvable(usize),
    #[error("invalid proof: {0}")]
    InvalidProof(String),
    #[error("literal {0} does not occur in the clause")]
    LiteralNotInClause(i64),
    #[error("variable {0} is not fresh")]
    NotFresh(u32),
    #[error("definition arity {0} exceeds the cap of {1}")]
    ArityExceeded(usize, usize),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
