//! Error types, one enum per subsystem.

use thiserror::Error;

use crate::signature::GroupSignature;

/// Signature construction / parsing failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("signature has no parts")]
    Empty,
    #[error("signature part with zero size or count")]
    ZeroPart,
    #[error("malformed signature term `{0}` (expected g^u)")]
    BadTerm(String),
}

/// Design construction failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignError {
    #[error("point {point} out of range 0..{n}")]
    PointOutOfRange { point: u32, n: u32 },
    #[error("cells do not partition the point set (point {point} covered {count} times)")]
    NotAPartition { point: u32, count: usize },
    #[error("empty cell in partition")]
    EmptyCell,
    #[error("block {index} has {size} points; blocks need at least 2")]
    BlockTooSmall { index: usize, size: usize },
    #[error("block {index} repeats point {point}")]
    RepeatedPoint { index: usize, point: u32 },
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

/// Canonical design file parse failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Design {
        line: usize,
        #[source]
        source: DesignError,
    },
    #[error("declared signature {declared} does not match groups ({derived})")]
    SignatureMismatch {
        declared: GroupSignature,
        derived: GroupSignature,
    },
    #[error("declared point count {declared} does not match content ({derived})")]
    PointCountMismatch { declared: u32, derived: u32 },
}

/// Base block system and catalog grammar failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbitError {
    #[error("line {line}, column {column}: {msg}")]
    Parse {
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("{0}")]
    Constraint(String),
    #[error("base block {block} uses point {point} outside every region (n = {n})")]
    PointOutOfRegion { block: usize, point: u32, n: u32 },
    #[error(
        "duplicate emitted block {block:?} (base {first_base} shift {first_shift} \
         and base {second_base} shift {second_shift}); orbit limit is wrong"
    )]
    DuplicateBlock {
        block: Vec<u32>,
        first_base: usize,
        first_shift: u32,
        second_base: usize,
        second_shift: u32,
    },
    #[error("derived signature {derived} does not match declared {declared}")]
    SignatureMismatch {
        declared: GroupSignature,
        derived: GroupSignature,
    },
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

/// Catalog lookup failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("catalog asset corrupted: content hash mismatch")]
    HashMismatch,
    #[error(transparent)]
    Orbit(#[from] OrbitError),
}

/// Finite field construction failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("field order {0} exceeds the supported maximum {max}", max = crate::gf::MAX_ORDER)]
    TooLarge(u32),
}

/// Construction operator failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("k = {k} exceeds q + 1 = {max} for a transversal design of order {q}")]
    KTooLarge { k: usize, q: u32, max: u32 },
    #[error("blocks {0:?} are not a parallel class")]
    NotParallelClass(Vec<usize>),
    #[error("search exceeded the node budget of {0}")]
    SearchCap(u64),
    #[error("ingredient has signature {got}, expected {want}")]
    IngredientMismatch {
        want: GroupSignature,
        got: GroupSignature,
    },
    #[error("input design is not a verified {kind} ({detail})")]
    NotVerified { kind: &'static str, detail: String },
    #[error("no modified design supplied for block size {0}")]
    MissingMgdd(usize),
    #[error("no fill design supplied for group {0}")]
    MissingFill(usize),
    #[error("hole/group incidence of the supplied design is not a 1-per-cell grid")]
    AlignmentError,
    #[error("fill for group {group} must contain the adjoined points as one group")]
    ExtrasNotAGroup { group: usize },
    #[error("fill for group {group} has {got} points, expected {want}")]
    FillSizeMismatch {
        group: usize,
        got: u32,
        want: u32,
    },
    #[error("group {0} has fewer than 2 points, cannot become a block")]
    GroupTooSmall(usize),
    #[error("point {point} out of range 0..{n}")]
    PointOutOfRange { point: u32, n: u32 },
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

/// Script parsing and execution failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("statement {stmt}: unknown identifier `{id}`")]
    UnknownId { stmt: usize, id: String },
    #[error("statement {stmt}: identifier `{id}` assigned twice")]
    Reassigned { stmt: usize, id: String },
    #[error("no registered {kind} of type {signature}")]
    UnresolvedIngredient { kind: String, signature: String },
    #[error("statement {stmt}: verification of `{id}` as {kind} {signature} failed: {detail}")]
    VerifyFailed {
        stmt: usize,
        id: String,
        kind: String,
        signature: String,
        detail: String,
    },
    #[error("statement {stmt}: {source}")]
    Construct {
        stmt: usize,
        #[source]
        source: ConstructError,
    },
    #[error("statement {stmt}: {msg}")]
    BadArgument { stmt: usize, msg: String },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("i/o error: {0}")]
    Io(String),
}

/// Search setup failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error(
        "required block count {blocks} is not expressible as base blocks of orbit length {j_max}"
    )]
    InfeasibleOrbit { blocks: u64, j_max: u32 },
    #[error("a pair orbit of length {orbit} does not divide the orbit limit {j_max}")]
    IndivisibleOrbit { orbit: u32, j_max: u32 },
    #[error("signature needs at least {k} groups for transversal blocks, found {groups}")]
    TooFewGroups { k: usize, groups: u64 },
    #[error("found state failed re-verification; search bookkeeping is inconsistent")]
    VerificationMismatch,
    #[error("block {0} holds two points of one group")]
    NotTransversal(usize),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
}
