use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("rank {0} is outside 1..=26")]
    InvalidRank(usize),
    #[error("letter {letter:?} is outside rank {rank}")]
    LetterOutOfRange { letter: char, rank: usize },
    #[error("invalid character {0:?} in word")]
    InvalidCharacter(char),
    #[error("generator index {index} is outside rank {rank}")]
    IndexOutOfRange { index: i64, rank: usize },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("inseparable: {word} ({reason})")]
    Inseparable { word: String, reason: String },
    #[error("core too large: image group exceeds {cap} elements")]
    CoreTooLarge { cap: usize },
    #[error("literal strategy needs index at most {max}, got {index}")]
    LiteralTooLarge { index: usize, max: usize },
    #[error("separator invalid: {word} ({reason})")]
    SeparatorInvalid { word: String, reason: String },
    #[error("duplicate point {0}")]
    DuplicatePoint(String),
    #[error(
        "orbit equivalence of {left} and {right} undecidable within word-length bound {bound}; \
         specify each orbit as its own action"
    )]
    OrbitUndecidable { left: String, right: String, bound: usize },
    #[error("invalid coset table: {0}")]
    InvalidTable(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("cannot combine: {0}")]
    Mismatch(String),
    #[error("rebuild required: image {image} of {element} is not covered by the base certificate")]
    RebuildRequired { element: String, image: String },
    #[error("search space guard exceeded: {0}")]
    SearchSpace(String),
    #[error("malformed {path}: {message}")]
    Malformed { path: String, message: String },
    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("[{stage}] {source}")]
    Stage { stage: &'static str, source: Box<Error> },
}

impl Error {
    pub(crate) fn malformed(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Malformed { path: path.into(), message: message.into() }
    }

    /// Stage tag of the outermost pipeline stage, if any.
    pub fn stage(&self) -> Option<&'static str> {
        match self {
            Error::Stage { stage, .. } => Some(stage),
            _ => None,
        }
    }

    /// Innermost error below any stage tags.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }
}

pub(crate) trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|source| match source {
            tagged @ Error::Stage { .. } => tagged,
            source => Error::Stage { stage, source: Box::new(source) },
        })
    }
}
