//! Bar complexes and Tor of bigraded augmented algebras, quadratic (co)algebras over
//! monoidal groupoids, and the cobar check of Koszulness.

mod algebra;
mod bar;
mod quadratic;

pub use algebra::{GradedAlgebraPresentation, JsonAlgebra, JsonBasisElement, JsonProduct, JsonScalar};
pub use bar::{
    bar_complex, e1_homology_from_bar, euler_check, euler_report, tor_csv, tor_dims, BarChainData, EulerReport,
};
pub use quadratic::{
    cobar_homology, koszul_check, koszul_report, quadratic_algebra_dims, quadratic_coalgebra_dims,
    unit_algebra_e1_homology, KoszulRow, QuadraticDatum,
};

use thiserror::Error;

use crate::dyer_lashof::DlError;
use crate::exactlin::LinError;
use crate::gerstenhaber::Level;
use crate::groupoid_splitting::SplittingError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BarError {
    #[error("`{0}` has rank 0 but is not the unit; the algebra is not augmented")]
    NotAugmented(String),
    #[error("({0} * {1}) * {2} != {0} * ({1} * {2})")]
    NotAssociative(String, String, String),
    #[error("invalid algebra or datum: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("the Euler check needs a finite k >= 2, got {0:?}")]
    Level(Level),
    #[error(transparent)]
    Lin(#[from] LinError),
    #[error(transparent)]
    Dl(#[from] DlError),
    #[error(transparent)]
    Splitting(#[from] SplittingError),
}
