use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("d ∘ d != 0 at degree {degree}")]
    InvalidComplex { degree: i64 },
    #[error("invariant factor {factor} in the differential entering degree {degree} blocks an integral splitting")]
    TorsionObstruction { degree: i64, factor: BigInt },
    #[error("perturbation series still nonzero after {terms} terms")]
    NonNilpotent { terms: usize },
    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("{0} is not a supported prime")]
    NotPrime(u64),
    #[error("unknown coefficient ring {0:?} (expected Z, Q or Fp:<p>)")]
    UnknownRing(String),

    #[error("vertices do not span R^{dim}")]
    NotFullDimensional { dim: usize },
    #[error("vertex {0} is listed twice")]
    DuplicateVertex(usize),
    #[error("point {0} is not a vertex of the convex hull")]
    NotAVertex(usize),
    #[error("point {index} has {found} coordinates, expected {dim}")]
    WrongDimension { index: usize, dim: usize, found: usize },
    #[error("interpolated Ehrhart polynomial disagrees with the lattice-point count at {k}")]
    InterpolationInconsistent { k: i64 },
    #[error("the two characterizations of n_P disagree ({roots} roots, interior index {interior})")]
    CharacterizationMismatch { roots: usize, interior: usize },
    #[error("degenerate orientation basis for face {face}")]
    DegenerateBasis { face: usize },

    #[error("monomial {u:?} at level {level}, entry ({row}, {col}) is not a lattice point of the required dilate")]
    InvalidMonomial {
        level: i64,
        row: usize,
        col: usize,
        u: Vec<i64>,
    },
    #[error("differentials into and out of level {level} do not compose to zero")]
    NonSquareZero { level: i64 },
    #[error("map does not commute with the differentials at level {level}")]
    NotChainMap { level: i64 },
    #[error("malformed twist complex: {0}")]
    MalformedComplex(String),

    #[error("homology at multidegree {m:?} of twist {k} reaches the edge of the scan box")]
    SupportEscapesBox { k: i64, m: Vec<i64> },
    #[error("computed cohomology of O({k}) disagrees with the closed form")]
    ClosedFormMismatch { k: i64 },
    #[error("acyclicity window disagrees with n_P = {np}")]
    WindowMismatch { np: usize },
    #[error("splitting matrix is not unitriangular up to sign (det {det})")]
    NotUnimodular { det: BigInt },
    #[error("constant-diagram homology is not the shifted homology of the input")]
    SuspensionMismatch,

    #[error("internal error: {0}")]
    Internal(String),
}
