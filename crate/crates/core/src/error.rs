use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("arity must be between 1 and {max}, got {0}", max = crate::word::MAX_ARITY)]
    InvalidArity(usize),
    #[error("letter `{letter}` is not a direction of arity {nu}")]
    BadLetter { letter: char, nu: usize },
    #[error("cannot compose words of arity {left} and {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("left word has {stars} stars but right word has length {len}")]
    NotComposable { stars: usize, len: usize },
    #[error("position {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("word has no direction letter")]
    NoLetter,
    #[error("word has no star")]
    AllLetters,
    #[error("a face needs a direction letter, not a star")]
    StarDirection,
}

/// Errors while reading one of the JSON file formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}, field `{field}`: {message}")]
    Arity { line: usize, field: String, message: String },
    #[error("line {line}: missing face `{word}` at dimension {dim}")]
    MissingFace { line: usize, dim: usize, word: String },
    #[error("line {line}, field `{field}`: {message}")]
    Range { line: usize, field: String, message: String },
    #[error("line {line}, field `{field}`: {message}")]
    Invalid { line: usize, field: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresheafError {
    #[error("dimension {n} exceeds truncation {trunc}")]
    DimensionOutOfRange { n: usize, trunc: usize },
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("missing face `{word}` at dimension {dim}")]
    MissingFace { dim: usize, word: String },
    #[error("face `{word}` at dimension {dim}: {message}")]
    Range { dim: usize, word: String, message: String },
    #[error("presheaf violates {count} functor-law instance(s); first: {first}")]
    LawViolation { count: usize, first: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexedError {
    #[error("dimension {n} out of range (at most {max})")]
    DimensionOutOfRange { n: usize, max: usize },
    #[error("no fibre registered for frame {key} at dimension {n}")]
    UnknownFrame { n: usize, key: String },
    #[error("{op}: side condition violated (ε={eps}, q={q}, n={n}, p={p})")]
    SideConditionViolated { op: &'static str, eps: usize, q: usize, n: usize, p: usize },
    #[error("coherence mismatch in restr_layer (ω={omega}): {detail}")]
    CoherenceMismatch { omega: usize, detail: String },
    #[error("malformed value: {0}")]
    Malformed(String),
    #[error("indexed set failed validation: {0}")]
    ValidationFailure(String),
    #[error(transparent)]
    Presheaf(#[from] PresheafError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unsupported construct: {0}")]
    UnsupportedConstruct(String),
    #[error("not a telescope: {0}")]
    NotATelescope(String),
}

/// Union of every error the crate raises, for callers that mix modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Presheaf(#[from] PresheafError),
    #[error(transparent)]
    Indexed(#[from] IndexedError),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
