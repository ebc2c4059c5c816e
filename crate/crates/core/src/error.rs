use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid vertex index {index} (expected 1..={n})")]
    InvalidVertex { index: usize, n: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("zero direction vector")]
    ZeroDirection,
    #[error("vertical line configuration must be strictly increasing")]
    NonIncreasingConfig,
    #[error("points {0} and {1} tie under projection")]
    ProjectionTie(usize, usize),
    #[error("lines {0} and {1} meet the vertical line at the same ordinate")]
    OrdinateTie(usize, usize),
    #[error("degenerate position: {0}")]
    DegeneratePosition(Degeneracy),
    #[error("projective map is degenerate: probe at x = {0}")]
    DegenerateMap(String),
    #[error("invalid wiring diagram: {0}")]
    InvalidWiring(String),
    #[error("digraph contains a cycle: {0:?}")]
    Cyclic(Vec<usize>),
    #[error("invalid digraph: {0}")]
    InvalidDigraph(String),
    #[error("ordering violates edge ({0}, {1})")]
    OrderViolatesEdge(usize, usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Offending configurations found while sweeping a point set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Degeneracy {
    /// Collinear index triples (1-based, sorted).
    pub collinear: Vec<[usize; 3]>,
    /// Pairs of index pairs whose supporting lines are parallel.
    pub parallel: Vec<[(usize, usize); 2]>,
    /// Coincident points.
    pub coincident: Vec<(usize, usize)>,
}

impl Degeneracy {
    pub fn is_empty(&self) -> bool {
        self.collinear.is_empty() && self.parallel.is_empty() && self.coincident.is_empty()
    }
}

impl std::fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if !self.coincident.is_empty() {
            parts.push(format!("coincident points {:?}", self.coincident));
        }
        if !self.collinear.is_empty() {
            parts.push(format!("collinear triples {:?}", self.collinear));
        }
        if !self.parallel.is_empty() {
            parts.push(format!("parallel supporting lines {:?}", self.parallel));
        }
        write!(f, "{}", parts.join("; "))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
