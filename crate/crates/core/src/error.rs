use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("matrix is not symmetric: max |w(i,j) - w(j,i)| = {max_deviation:e} at ({row}, {col})")]
    Asymmetric {
        max_deviation: f64,
        row: usize,
        col: usize,
    },

    #[error("walk counting needs integer edge weights; entry ({row}, {col}) is {value}")]
    NonIntegerWeight { row: usize, col: usize, value: String },

    #[error("vertex {vertex} is out of range for a graph on {n} vertices ({convention} labels)")]
    VertexOutOfRange {
        vertex: i64,
        n: usize,
        convention: &'static str,
    },

    #[error("invalid vertex pair: {0}")]
    InvalidPair(String),

    #[error("exact decision needs every eigenvalue in closed cosine form")]
    InexactSpectrum,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cannot parse graph spec `{0}`")]
    GraphSpec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
