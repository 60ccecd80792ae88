//! Slope estimates: quotients by `sigma`, the two-thirds line, and the finite general
//! linear group tables.

use std::collections::BTreeMap;

use num_rational::Ratio;

use super::cdga::{convolve_trigraded, free_cdga_homology, free_gca_trigraded, CDGAPresentation, CdgaGenerator};
use super::e1::{generator_filtration, Cell, CellList};
use super::StabilityError;
use crate::bigraded::{
    free_gca_hilbert_of, min_slope_with_witness, Bidegree, GeneratorList, HilbertTable, Slope, Trigrade, Window,
};
use crate::dyer_lashof::{admissible_generators, quotient_hilbert, BasisOptions, DlIndex, WParams};
use crate::exactlin::{is_prime, FieldSpec};
use crate::gerstenhaber::{Level, LieTree};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSlopeReport {
    pub slope: Slope,
    pub witness: Option<Bidegree>,
    /// Remaining generators violating `d >= n - 1` or `d >= 1`.
    pub violations: Vec<String>,
    /// Slope at least `1/2`, i.e. vanishing for `2d < n` on the window.
    pub vanishing_holds: bool,
}

/// Minimal slope of the free `W_{k-1}`-algebra with the bare generators in `killed` removed.
pub fn quotient_slope(
    gens: &GeneratorList,
    p: &WParams,
    w: Window,
    killed: &[String],
) -> Result<QuotientSlopeReport, StabilityError> {
    for k in killed {
        if gens.index_of(k).is_none() {
            return Err(StabilityError::Missing(k.clone()));
        }
    }
    let violations = gens
        .iter()
        .filter(|g| !killed.contains(&g.name))
        .filter(|g| g.bidegree.d < 1 || g.bidegree.d + 1 < g.bidegree.n)
        .map(|g| format!("{} : {}", g.name, g.bidegree))
        .collect();
    let table = quotient_hilbert(gens, killed, p, w)?;
    let (slope, witness) = min_slope_with_witness(&table);
    Ok(QuotientSlopeReport { slope, witness, violations, vanishing_holds: slope >= Slope::ratio(1, 2) })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoThirdsReport {
    pub holds: bool,
    /// Minimal slope of positive-rank classes on the window, with a witness.
    pub slope: Slope,
    pub witness: Option<Bidegree>,
    /// The same for the homology of `(Lambda(a, rho), rho -> a)` alone.
    pub left_slope: Slope,
    pub left_witness: Option<Bidegree>,
    /// Trigraded homology of the associated graded of the computational filtration.
    pub table: BTreeMap<Trigrade, u64>,
}

fn check_extra_cells(extra: &CellList) -> Result<(), StabilityError> {
    for c in &extra.cells {
        let bad = if ["sigma", "x", "rho"].contains(&c.label.as_str()) {
            Some("label is reserved")
        } else if c.n == 0 || c.d == 0 {
            Some("needs positive rank and degree")
        } else if c.d + 1 < c.n {
            Some("needs d >= n - 1")
        } else if (c.n, c.d) == (2, 1) {
            Some("(2,1)-cells are excluded")
        } else if c.filtration() != 0 {
            Some("extra cells sit in filtration 0")
        } else {
            None
        };
        if let Some(why) = bad {
            return Err(StabilityError::CellConstraint(format!("{}: {why}", c.label)));
        }
    }
    Ok(())
}

/// Checks vanishing below slope `2/3` for the E^1-page modulo `sigma` of the algebra with cells
/// `sigma:(1,0)`, `x:(1,1)`, `rho:(2,2)` in filtration 1 and `extra`, with `d^1 rho = a - sigma x`.
///
/// Here `a` is `Q^1 sigma` for `ell = 2` and a multiple of `[sigma, sigma]` for odd `ell`. The
/// computational filtration puts `a` and `rho` in filtration 0, so its associated graded is
/// `(Lambda(a, rho), rho -> a)` tensored with the free algebra on the remaining generators.
pub fn two_thirds_check(ell: u64, k: Level, extra: &CellList, w: Window) -> Result<TwoThirdsReport, StabilityError> {
    if !is_prime(ell) {
        return Err(StabilityError::NotPrime(ell));
    }
    check_extra_cells(extra)?;
    let field = FieldSpec::prime(ell);
    let p = WParams::new(k, field);
    let mut cells = vec![Cell::new("sigma", 1, 0, 0), Cell::new("x", 1, 1, 0), Cell::new("rho", 2, 2, 1)];
    cells.extend(extra.cells.iter().cloned());
    let cells = CellList::new(cells);
    let gens = cells.generator_list()?;
    let all = admissible_generators(&gens, &p, w)?;

    let is_a = |g: &crate::dyer_lashof::AdmissibleGenerator| {
        if ell == 2 {
            g.index == DlIndex::twos(&[1]) && g.word.tree == LieTree::Leaf(0)
        } else {
            g.index.is_empty() && g.word.tree == LieTree::node(LieTree::Leaf(0), LieTree::Leaf(0)).canonical()
        }
    };
    let bare =
        |g: &crate::dyer_lashof::AdmissibleGenerator, i: usize| g.index.is_empty() && g.word.tree == LieTree::Leaf(i);
    let a = all.iter().find(|g| is_a(g)).ok_or_else(|| StabilityError::Missing("Q^1 sigma".into()))?;
    let rho = all.iter().find(|g| bare(g, 2)).ok_or_else(|| StabilityError::Missing("rho".into()))?;
    let tri = |g: &crate::dyer_lashof::AdmissibleGenerator| {
        Trigrade::new(g.bidegree.n, g.bidegree.d, generator_filtration(g, &cells, ell))
    };

    let mut left = CDGAPresentation::new(
        field,
        vec![
            CdgaGenerator { label: "a".into(), trigrade: tri(a) },
            CdgaGenerator { label: "rho".into(), trigrade: tri(rho) },
        ],
        1,
    )?;
    left.set_differential("rho", &[(1, &[("a", 1)])])?;
    let left = free_cdga_homology(&left, w)?.homology;
    let (left_slope, left_witness) = min_slope_with_witness(&collapse(&left, w));
    let rest = all.iter().filter(|g| !is_a(g) && !bare(g, 0) && !bare(g, 2)).map(tri);
    let right = free_gca_trigraded(rest, field, w);
    let table = convolve_trigraded(&left, &right, w);

    let (slope, witness) = min_slope_with_witness(&collapse(&table, w));
    Ok(TwoThirdsReport { holds: slope >= Slope::ratio(2, 3), slope, witness, left_slope, left_witness, table })
}

fn collapse(table: &BTreeMap<Trigrade, u64>, w: Window) -> HilbertTable {
    let mut out = HilbertTable::empty(w);
    for (t, v) in table {
        out.add(t.bidegree(), *v);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuillenReport {
    /// Multiplicative order of `q` modulo `ell`.
    pub r: u32,
    pub table: HilbertTable,
    pub quotient: HilbertTable,
    /// `2 - 1/r`.
    pub bound: Slope,
    pub slope: Slope,
    pub witness: Option<Bidegree>,
    /// No class of the quotient lies below the bound.
    pub holds: bool,
    /// The bound is attained on the window.
    pub sharp: bool,
}

fn prime_power_base(q: u64) -> Option<u64> {
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut m = q;
    while m % p == 0 {
        m /= p;
    }
    (m == 1).then_some(p)
}

/// `F_ell[sigma, xi_i] (x) Lambda[eta_i]` with `xi_i : (r, 2ir)`, `eta_i : (r, 2ir - 1)`, and its quotient by `sigma`.
pub fn quillen_table(ell: u64, q: u64, w: Window) -> Result<QuillenReport, StabilityError> {
    if ell == 2 || !is_prime(ell) {
        return Err(StabilityError::NotPrime(ell));
    }
    let base = prime_power_base(q).ok_or(StabilityError::NotPrimePower(q))?;
    if base == ell {
        return Err(StabilityError::Divides { ell, q });
    }
    let r = (1..=ell).find(|&r| pow_mod(q, r, ell) == 1).expect("q is a unit mod ell") as u32;
    let mut gens = Vec::new();
    let mut i = 1;
    while r <= w.nmax && 2 * i * r - 1 <= w.dmax {
        gens.push(Bidegree::new(r, 2 * i * r - 1));
        if 2 * i * r <= w.dmax {
            gens.push(Bidegree::new(r, 2 * i * r));
        }
        i += 1;
    }
    let field = FieldSpec::prime(ell);
    let quotient = free_gca_hilbert_of(gens.iter().copied(), field, w);
    let table = free_gca_hilbert_of(gens.iter().copied().chain([Bidegree::new(1, 0)]), field, w);
    let bound = Slope::Finite(Ratio::new(2 * r as i64 - 1, r as i64));
    let (slope, witness) = min_slope_with_witness(&quotient);
    Ok(QuillenReport { r, table, quotient, bound, slope, witness, holds: slope >= bound, sharp: slope == bound })
}

fn pow_mod(b: u64, e: u64, m: u64) -> u64 {
    (0..e).fold(1u64, |acc, _| acc * (b % m) % m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPSlope {
    pub slope: Slope,
    /// Bidegree of the free class of least positive degree on `sigma`.
    pub witness: Bidegree,
}

/// `(2p - 3)/(2p - 2)`, with the witness `beta Q^1 sigma` (or `Q^1 sigma` at `p = 2`) read off the free basis.
pub fn char_p_slope(p: u64) -> Result<CharPSlope, StabilityError> {
    if !is_prime(p) {
        return Err(StabilityError::NotPrime(p));
    }
    let gens = GeneratorList::parse("sigma:1,0")?;
    let params = WParams::new(Level::Infinite, FieldSpec::prime(p));
    let w = Window::new(p as u32, 2 * p as u32 - 3);
    let basis = crate::dyer_lashof::enumerate_free_wk_basis(&gens, &params, w, BasisOptions::default())?;
    let witness = basis
        .generators
        .iter()
        .map(|g| g.bidegree)
        .filter(|b| b.d > 0)
        .min_by_key(|b| (b.d, b.n))
        .ok_or_else(|| StabilityError::Missing("a positive-degree class".into()))?;
    Ok(CharPSlope { slope: Slope::ratio(2 * p as i64 - 3, 2 * p as i64 - 2), witness })
}
