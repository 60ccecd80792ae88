//! Homological stability calculus.
//!
//! Abstract connectivities and the vanishing-line transfer rules, filtered E^1-pages of
//! cellular algebras with propagation of differentials, homology of free differential
//! graded-commutative algebras, and slope estimates for quotients by `sigma`.

mod cdga;
mod connectivity;
mod e1;
mod slopes;

pub use cdga::{
    convolve_trigraded, free_cdga_homology, free_gca_trigraded, CDGAPresentation, CdgaGenerator, CdgaHomology,
    Exponents, Polynomial,
};
pub use connectivity::{
    check_lax_monoidal, connectivity_convolve, min_cell_counts, transfer_down, transfer_up, AbstractConnectivity,
    ConnValue, Direction, HypothesisCheck, HypothesisFailure, MinCellCounts, Tail, TransferReport,
};
pub use e1::{
    filtered_e1_page, leibniz, propagate_differential, Cell, CellList, E1Generator, E1Page, Image,
    PropagatedDifferential,
};
pub use slopes::{
    char_p_slope, quillen_table, quotient_slope, two_thirds_check, CharPSlope, QuillenReport, QuotientSlopeReport,
    TwoThirdsReport,
};

use thiserror::Error;

use crate::bigraded::GradingError;
use crate::dyer_lashof::DlError;
use crate::exactlin::LinError;
use crate::gerstenhaber::Level;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StabilityError {
    #[error("transfer needs l <= k, got l = {l}, k = {k}")]
    LevelOrder { l: u32, k: Level },
    #[error("cell constraint violated: {0}")]
    CellConstraint(String),
    #[error("bad differential: {0}")]
    Differential(String),
    #[error("d^2 is nonzero on generator `{0}`")]
    NotSquareZero(String),
    #[error("{0} is not an admissible prime here")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("ell = {ell} divides q = {q}")]
    Divides { ell: u64, q: u64 },
    #[error("missing: {0}")]
    Missing(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Dl(#[from] DlError),
    #[error(transparent)]
    Lin(#[from] LinError),
}
