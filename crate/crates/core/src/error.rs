use thiserror::Error;

use crate::trees::RegularTree;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("invalid renaming: {0}")]
    InvalidRenaming(String),
    #[error("invalid game: {0}")]
    InvalidGame(String),
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("invalid Borel code: {0}")]
    InvalidCode(String),
    #[error("unknown position {0}")]
    UnknownPosition(usize),
    #[error("strategy enumeration needs {count} pairs, bound is {bound}")]
    BoundExceeded { count: u128, bound: u128 },
    #[error("shortest disagreement has length {found}, beyond depth cap {cap}")]
    DepthCapExceeded { cap: usize, found: usize },
    #[error("unsupported intersection: {0}")]
    UnsupportedProduct(String),
    #[error("automaton is not Büchi: {0}")]
    NotBuchi(String),
    #[error("languages are not disjoint")]
    NotDisjoint(Box<RegularTree>),
    #[error("language is empty")]
    EmptyLanguage,
    #[error("unknown builtin automaton `{0}`")]
    UnknownBuiltin(String),
    #[error("bound 2^({0}*{1})+1 does not fit in 64 bits")]
    Overflow(usize, usize),
    #[error("level {level} exceeds the materialisation limit {max}")]
    LevelTooLarge { level: u64, max: usize },
    #[error("label `{0}` outside the permitted range")]
    LabelOutOfRange(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
