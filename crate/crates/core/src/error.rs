use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("permanent of a {n}x{n} matrix exceeds the supported size {cap}")]
    PermanentTooLarge { n: usize, cap: usize },

    #[error("mode {mode} out of range for {modes} modes")]
    ModeOutOfRange { mode: usize, modes: usize },

    #[error("photon number mismatch: input has {input}, output has {output}")]
    PhotonNumberMismatch { input: usize, output: usize },

    #[error("expected {expected} bits, got {found}")]
    BitCountMismatch { expected: usize, found: usize },

    #[error("invalid bit string {0:?}")]
    InvalidBits(String),

    #[error("invalid qubit layout: {0}")]
    InvalidLayout(String),

    #[error("projection onto the qubit subspace is empty")]
    EmptyProjection,

    #[error("unknown gate {0:?}")]
    UnknownGate(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("circuit parse error: {0}")]
    Parse(String),

    #[error("illegal cascade: post-selected gates applied twice to qubits {a} and {b}")]
    IllegalCascade { a: usize, b: usize },

    #[error("placement overflow: block on modes ({top}, {bottom}) does not fit the {scheme} mesh with {modes} modes")]
    PlacementOverflow { scheme: String, modes: usize, top: usize, bottom: usize },

    #[error("program step {0} is not an MZI block and cannot be placed on a mesh")]
    NonBlockStep(usize),

    #[error("no MZI setting reproduces the requested 2x2 matrix")]
    Unrealizable,

    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
}

pub type Result<T> = std::result::Result<T, Error>;
