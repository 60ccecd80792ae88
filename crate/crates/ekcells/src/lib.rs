//! Exact homology-level computations for cellular E_k-algebras.
//!
//! The crate is layered bottom-up:
//!
//! - [`exactlin`]: prime fields, rationals, sparse matrices, chain complex homology.
//! - [`bigraded`]: bidegrees, windows, Hilbert tables and free graded-commutative series.
//! - [`gerstenhaber`]: basic Lie words for the shifted Browder bracket, plus a brute-force oracle.
//! - [`dyer_lashof`]: admissible Dyer-Lashof words, Adem/Cartan rewriting, free `W_{k-1}` bases.
//! - [`bar_koszul`]: bar complexes, Tor, quadratic (co)algebras and the Koszul check.
//! - [`groupoid_splitting`]: monoidal groupoids, E_1-splitting complexes, Steinberg dimensions.
//! - [`stability`]: connectivities, E^1-pages, differential propagation and slope calculus.

pub mod bar_koszul;
pub mod bigraded;
pub mod dyer_lashof;
pub mod exactlin;
pub mod gerstenhaber;
pub mod groupoid_splitting;
pub mod stability;
