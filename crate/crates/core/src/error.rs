use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("table is not a Latin square: {0}")]
    LatinSquare(String),
    #[error("multiplication is not associative: ({a}*{b})*{c} = {left} but {a}*({b}*{c}) = {right}")]
    Associativity { a: usize, b: usize, c: usize, left: usize, right: usize },
    #[error("element is not a projection: ||P*P - P|| = {idempotent:.3e}, ||P^* - P|| = {selfadjoint:.3e}")]
    NotProjection { idempotent: f64, selfadjoint: f64 },
    #[error("operator is not normal: ||NN^* - N^*N|| = {0:.3e}")]
    NotNormal(f64),
    #[error("not a quantum adjacency matrix: ||A.A - A|| = {schur:.3e}, ||A - conj(A)|| = {real:.3e}")]
    NotQuantumGraph { schur: f64, real: f64 },
    #[error("graph shape: {0}")]
    GraphShape(String),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("representation is not faithful; kernel = {0:?}")]
    NotFaithful(Vec<usize>),
    #[error("did not converge: {0}")]
    NotConverged(String),
    #[error("cap exceeded: {0}")]
    Cap(String),
    #[error("Hopf data invalid: {0}")]
    Hopf(String),
    #[error("{source_name}:{line}:{column}: {message}")]
    Parse { source_name: String, line: usize, column: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Failures that describe a refused or unmet hypothesis rather than malformed input.
    pub fn is_refusal(&self) -> bool {
        matches!(self, Error::Hypothesis(_) | Error::NotConverged(_) | Error::NotFaithful(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
