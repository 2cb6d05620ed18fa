//! Error types shared across the crate.

use thiserror::Error;

/// Position of a token in an input file, for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourcePos {
    /// 1-based line number.
    pub line: usize,
    /// 1-based column number.
    pub col: usize,
}

impl std::fmt::Display for SourcePos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Errors raised while parsing or validating MLN and evidence files.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("{pos}: syntax error: {msg}")]
    Syntax { pos: SourcePos, msg: String },
    #[error("{pos}: unknown predicate `{name}`")]
    UnknownPredicate { pos: SourcePos, name: String },
    #[error("{pos}: undeclared domain `{name}`")]
    UnknownDomain { pos: SourcePos, name: String },
    #[error("{pos}: duplicate declaration of `{name}`")]
    DuplicateDeclaration { pos: SourcePos, name: String },
    #[error("{pos}: predicate `{name}` takes {expected} arguments, got {got}")]
    ArityMismatch {
        pos: SourcePos,
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("{pos}: constant `{name}` is not in domain `{domain}`")]
    UnknownConstant {
        pos: SourcePos,
        name: String,
        domain: String,
    },
    #[error("{pos}: variable `{name}` is used with conflicting domains `{first}` and `{second}`")]
    VariableDomainMismatch {
        pos: SourcePos,
        name: String,
        first: String,
        second: String,
    },
    #[error("{pos}: clause weight must be a finite real, got `{token}`")]
    NonFiniteWeight { pos: SourcePos, token: String },
    #[error("{pos}: contradictory evidence for atom `{atom}`")]
    ContradictoryEvidence { pos: SourcePos, atom: String },
    #[error("ground atom space is too large ({atoms} atoms, limit {limit})")]
    HerbrandTooLarge { atoms: u64, limit: u64 },
}

/// Errors raised by grounding, translation, and the inference loop.
#[derive(Debug, Error)]
pub enum SolveError {
    #[error("hard clause `{clause}` is unsatisfiable under the given evidence")]
    UnsatisfiableHard { clause: String },
    #[error("hard constraints are unsatisfiable")]
    Infeasible,
    #[error("solver node budget of {budget} exhausted")]
    NodeLimit { budget: u64 },
    #[error("brute-force oracle limited to {limit} free atoms, model has {atoms}")]
    TooManyAtoms { atoms: usize, limit: usize },
    #[error("ILP model is malformed: {0}")]
    MalformedModel(String),
}

/// Errors raised while reading LP-format text.
#[derive(Debug, Error)]
pub enum LpParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: variable `{name}` does not follow the x<id>/z<id> naming scheme")]
    BadVariableName { line: usize, name: String },
    #[error("variable `{name}` is not declared binary or general")]
    UndeclaredVariable { name: String },
    #[error("missing `{0}` section")]
    MissingSection(&'static str),
}

/// Top-level error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Lp(#[from] LpParseError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
