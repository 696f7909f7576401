use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variant word has length {found}, expected {expected}")]
    VariantLength { expected: usize, found: usize },

    #[error("invalid direction {0:?} in variant word (expected 'R' or 'L')")]
    InvalidDirection(char),

    #[error("depth {0} is too large")]
    DepthTooLarge(u32),

    #[error("depth-0 family has no sublevel")]
    NoSublevel,

    #[error("permutation {perm} is not a bijection on [1..{n}]: {reason}")]
    NotAPermutation {
        perm: usize,
        n: usize,
        reason: &'static str,
    },

    #[error("permutations have different lengths")]
    RaggedPermutations,

    #[error("coloring has length {found}, family has {expected} elements")]
    LengthMismatch { expected: usize, found: usize },

    #[error("coloring entry at element {element} is {value}, expected -1 or +1")]
    InvalidColor { element: usize, value: i64 },

    #[error("the triple is not a constructed family of depth {k}")]
    NotAFamily { k: u32 },

    #[error("ground set has {n} elements, exhaustive search is capped at {cap}")]
    TooLargeForExhaustive { n: usize, cap: usize },

    #[error("threshold must be at least 1")]
    ZeroThreshold,

    #[error("element order is not a permutation of the ground set")]
    BadElementOrder,

    #[error("ground set size {0} is even; the total of a coloring can be zero")]
    EvenGroundSet(usize),
}
