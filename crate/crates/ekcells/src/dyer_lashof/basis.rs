//! Bases of free `W_{k-1}`-algebras on a window.

use rayon::prelude::*;
use serde::Serialize;

use super::rewrite::{Factor, WMonomial};
use super::{is_basis_index, DlError, DlIndex, Letter, WParams};
use crate::bigraded::{
    convolve, free_gca_hilbert_of, is_exterior, Bidegree, Generator, GeneratorList, GradingError, HilbertTable, Window,
};
use crate::gerstenhaber::{enumerate_basic_lie_words_unchecked, BasicLieWord, Level};

/// A polynomial generator `Q^I(y)` of the free algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdmissibleGenerator {
    pub bidegree: Bidegree,
    pub word: BasicLieWord,
    pub index: DlIndex,
}

impl AdmissibleGenerator {
    pub fn factor(&self, ell: u64) -> Factor {
        Factor::new(self.index.clone(), self.word.clone(), ell)
    }

    /// Listing line `Q^{...}[word] : (n,d)`.
    pub fn render(&self, gens: &GeneratorList, ell: u64) -> String {
        format!("{}[{}] : {}", self.index.render(ell), self.word.render(gens), self.bidegree)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BasisOptions {
    /// Omit the unit at `(0,0)`.
    pub reduced: bool,
    /// Accept rank-0 generators of positive degree.
    pub allow_rank0: bool,
    /// Also list the monomials.
    pub monomials: bool,
}

#[derive(Clone, Debug)]
pub struct FreeBasis {
    pub table: HilbertTable,
    pub generators: Vec<AdmissibleGenerator>,
    pub monomials: Vec<WMonomial>,
}

fn check_gens(gens: &GeneratorList, allow_rank0: bool) -> Result<(), DlError> {
    for g in gens.iter() {
        if g.bidegree == Bidegree::ZERO {
            return Err(GradingError::RankZeroDegreeZero(g.name.clone()).into());
        }
        if g.bidegree.n == 0 && !allow_rank0 {
            return Err(GradingError::RankZero(g.name.clone()).into());
        }
    }
    Ok(())
}

/// Indices `I` with `Q^I(y)` a basis element inside the window.
fn basis_indices(y: Bidegree, p: &WParams, w: Window) -> Result<Vec<(DlIndex, Bidegree)>, DlError> {
    let ell = p.ell();
    let mut out = vec![(DlIndex::empty(), y)];
    if ell == 0 {
        return Ok(out);
    }
    // Letters are prepended; `rev` holds them innermost first.
    fn rec(
        rev: &mut Vec<Letter>,
        cur: Bidegree,
        y: Bidegree,
        p: &WParams,
        w: Window,
        out: &mut Vec<(DlIndex, Bidegree)>,
    ) -> Result<(), DlError> {
        let ell = p.ell();
        let n = cur.n as u64 * ell;
        if n > w.nmax as u64 {
            return Ok(());
        }
        let betas: &[bool] = if ell == 2 { &[false] } else { &[false, true] };
        for &beta in betas {
            for s in 0.. {
                let l = Letter { beta, s };
                let d = cur.d as i64 + l.shift(ell);
                if d > w.dmax as i64 {
                    break;
                }
                if d < 0 {
                    continue;
                }
                if rev.last().is_some_and(|&inner| !super::pair_admissible(l, inner, ell)) {
                    continue;
                }
                if rev.is_empty() {
                    if let Level::Finite(k) = p.k {
                        let top = y.d as i64 + k as i64 - 1;
                        if (if ell == 2 { s } else { 2 * s }) > top {
                            continue;
                        }
                    }
                }
                rev.push(l);
                let next = Bidegree::new(n as u32, d as u32);
                let idx = DlIndex(rev.iter().rev().cloned().collect());
                if is_basis_index(&idx, y.d, p)? {
                    out.push((idx, next));
                }
                rec(rev, next, y, p, w, out)?;
                rev.pop();
            }
        }
        Ok(())
    }
    rec(&mut Vec::new(), y, y, p, w, &mut out)?;
    Ok(out)
}

/// All polynomial generators `Q^I(y)` in the window, sorted.
pub fn admissible_generators(
    gens: &GeneratorList,
    p: &WParams,
    w: Window,
) -> Result<Vec<AdmissibleGenerator>, DlError> {
    if p.k == Level::Finite(1) {
        return Err(DlError::BadK(p.k));
    }
    let words = enumerate_basic_lie_words_unchecked(gens, p.lie(), w)?;
    let per_word: Result<Vec<Vec<AdmissibleGenerator>>, DlError> = words
        .par_iter()
        .map(|y| {
            Ok(basis_indices(y.bidegree, p, w)?
                .into_iter()
                .map(|(index, bidegree)| AdmissibleGenerator { bidegree, word: y.clone(), index })
                .collect())
        })
        .collect();
    let mut out: Vec<AdmissibleGenerator> = per_word?.into_iter().flatten().collect();
    out.sort();
    Ok(out)
}

/// Unital tensor algebra table on the given bidegrees.
pub fn tensor_algebra_hilbert(degrees: &[Bidegree], w: Window) -> Result<HilbertTable, DlError> {
    if degrees.iter().any(|b| *b == Bidegree::ZERO) {
        return Err(GradingError::RankZeroDegreeZero("tensor generator".into()).into());
    }
    let mut t = HilbertTable::unit(w);
    for b in w.bidegrees() {
        if b == Bidegree::ZERO {
            continue;
        }
        let v: u64 = degrees
            .iter()
            .filter(|g| g.n <= b.n && g.d <= b.d)
            .map(|g| t.get(Bidegree::new(b.n - g.n, b.d - g.d)))
            .sum();
        t.add(b, v);
    }
    Ok(t)
}

/// Free graded-commutative monomials on sorted generators inside the window.
fn monomials_on(gens: &[AdmissibleGenerator], p: &WParams, w: Window) -> Vec<WMonomial> {
    let ell = p.ell();
    let factors: Vec<Factor> = gens.iter().map(|g| g.factor(ell)).collect();
    let mut out = Vec::new();
    fn rec(
        i: usize,
        gens: &[AdmissibleGenerator],
        factors: &[Factor],
        p: &WParams,
        w: Window,
        cur: Bidegree,
        chosen: &mut Vec<(Factor, u32)>,
        out: &mut Vec<WMonomial>,
    ) {
        if i == gens.len() {
            let (_, m) = WMonomial::from_factors(chosen.clone(), p.field).expect("exterior factors used once");
            out.push(m);
            return;
        }
        rec(i + 1, gens, factors, p, w, cur, chosen, out);
        let b = gens[i].bidegree;
        let cap = if is_exterior(p.field, b.d) { 1 } else { u32::MAX };
        let mut next = cur;
        for m in 1..=cap {
            next = next + b;
            if !w.contains(next) {
                break;
            }
            chosen.push((factors[i].clone(), m));
            rec(i + 1, gens, factors, p, w, next, chosen, out);
            chosen.pop();
        }
    }
    rec(0, gens, &factors, p, w, Bidegree::ZERO, &mut Vec::new(), &mut out);
    out.sort();
    out
}

fn finalize(table: HilbertTable, reduced: bool) -> HilbertTable {
    if !reduced {
        return table;
    }
    let w = table.window();
    HilbertTable::from_entries(w, table.iter().filter(|(b, _)| *b != Bidegree::ZERO))
}

/// Basis of the free `W_{k-1}`-algebra `H(E_k^+(X))` on the window.
///
/// For `k = 1` this is the tensor algebra; only the table and the bare generators are returned.
pub fn enumerate_free_wk_basis(
    gens: &GeneratorList,
    p: &WParams,
    w: Window,
    opts: BasisOptions,
) -> Result<FreeBasis, DlError> {
    check_gens(gens, opts.allow_rank0)?;
    if p.k == Level::Finite(1) {
        if opts.monomials {
            return Err(DlError::Unsupported("k = 1 has tensor words, not commutative monomials".into()));
        }
        let degrees: Vec<Bidegree> = gens.iter().map(|g| g.bidegree).collect();
        let table = finalize(tensor_algebra_hilbert(&degrees, w)?, opts.reduced);
        let mut generators: Vec<AdmissibleGenerator> = (0..gens.len())
            .filter(|&i| w.contains(gens.get(i).bidegree))
            .map(|i| AdmissibleGenerator {
                bidegree: gens.get(i).bidegree,
                word: BasicLieWord::generator(i, gens),
                index: DlIndex::empty(),
            })
            .collect();
        generators.sort();
        return Ok(FreeBasis { table, generators, monomials: Vec::new() });
    }
    let generators = admissible_generators(gens, p, w)?;
    let table = free_gca_hilbert_of(generators.iter().map(|g| g.bidegree), p.field, w);
    let mut monomials = if opts.monomials { monomials_on(&generators, p, w) } else { Vec::new() };
    if opts.reduced {
        monomials.retain(|m| !m.is_unit());
    }
    Ok(FreeBasis { table: finalize(table, opts.reduced), generators, monomials })
}

/// Table of the free algebra on all basis generators except the bare generators in `killed`.
pub fn quotient_hilbert(
    gens: &GeneratorList,
    killed: &[String],
    p: &WParams,
    w: Window,
) -> Result<HilbertTable, DlError> {
    check_gens(gens, false)?;
    let is_killed = |word: &BasicLieWord, index: &DlIndex| {
        index.is_empty()
            && matches!(word.tree, crate::gerstenhaber::LieTree::Leaf(i) if killed.contains(&gens.get(i).name))
    };
    if p.k == Level::Finite(1) {
        let degrees: Vec<Bidegree> = gens.iter().filter(|g| !killed.contains(&g.name)).map(|g| g.bidegree).collect();
        return tensor_algebra_hilbert(&degrees, w);
    }
    let generators = admissible_generators(gens, p, w)?;
    Ok(free_gca_hilbert_of(generators.iter().filter(|g| !is_killed(&g.word, &g.index)).map(|g| g.bidegree), p.field, w))
}

fn synthetic(degrees: impl IntoIterator<Item = Bidegree>) -> GeneratorList {
    let gens: Vec<Generator> =
        degrees.into_iter().enumerate().map(|(i, b)| Generator::new(format!("c{i}"), b.n, b.d)).collect();
    GeneratorList::new(gens).expect("distinct synthetic names")
}

/// Checks `W(A + B)^+ = W(A)^+ * W(T^+(s^{k-1} A) (x) B)^+` per bidegree on the window.
pub fn alg_as_mod_check(a: &GeneratorList, b: &GeneratorList, p: &WParams, w: Window) -> Result<bool, DlError> {
    if p.k == Level::Finite(1) {
        return Err(DlError::BadK(p.k));
    }
    check_gens(a, false)?;
    check_gens(b, false)?;
    let opts = BasisOptions::default();
    let lhs = enumerate_free_wk_basis(&a.union(b)?, p, w, opts)?.table;
    let wa = enumerate_free_wk_basis(a, p, w, opts)?.table;
    // Module generators: T^+(s^{k-1} A) tensored with B.
    let tensor = match p.k {
        Level::Infinite => HilbertTable::unit(w),
        Level::Finite(k) => {
            let shifted: Vec<Bidegree> = a.iter().map(|g| Bidegree::new(g.bidegree.n, g.bidegree.d + k - 1)).collect();
            tensor_algebra_hilbert(&shifted, w)?
        }
    };
    let b_table = HilbertTable::from_entries(w, b.iter().filter(|g| w.contains(g.bidegree)).map(|g| (g.bidegree, 1)));
    let module = convolve(&tensor, &b_table)?;
    let c = synthetic(module.iter().flat_map(|(bd, m)| std::iter::repeat(bd).take(m as usize)));
    let wc = enumerate_free_wk_basis(&c, p, w, opts)?.table;
    Ok(lhs == convolve(&wa, &wc)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::FieldSpec;

    fn params(k: Level, ell: u64) -> WParams {
        WParams::new(k, FieldSpec::new(ell).unwrap())
    }

    #[test]
    fn rational_k3_single_generator() {
        let g = GeneratorList::parse("sigma:1,0").unwrap();
        let w = Window::new(6, 4);
        let t = enumerate_free_wk_basis(&g, &params(Level::Finite(3), 0), w, BasisOptions::default()).unwrap().table;
        for b in w.bidegrees() {
            assert_eq!(t.get(b), u64::from(b.d == 0), "{b}");
        }
    }

    #[test]
    fn empty_generators_give_unit() {
        let w = Window::new(3, 3);
        let t =
            enumerate_free_wk_basis(&GeneratorList::empty(), &params(Level::Finite(2), 2), w, BasisOptions::default())
                .unwrap()
                .table;
        assert_eq!(t, HilbertTable::unit(w));
    }

    #[test]
    fn listing_format() {
        let g = GeneratorList::parse("sigma:1,0").unwrap();
        let b = enumerate_free_wk_basis(&g, &params(Level::Finite(2), 2), Window::new(4, 3), BasisOptions::default())
            .unwrap();
        let lines: Vec<String> = b.generators.iter().map(|x| x.render(&g, 2)).collect();
        assert_eq!(lines, ["Q^{}[sigma] : (1,0)", "Q^{(1)}[sigma] : (2,1)", "Q^{(2)(1)}[sigma] : (4,3)"]);
    }

    #[test]
    fn tensor_algebra_counts_words() {
        let t = tensor_algebra_hilbert(&[Bidegree::new(1, 0), Bidegree::new(1, 0)], Window::new(3, 0)).unwrap();
        assert_eq!((t.get(Bidegree::new(2, 0)), t.get(Bidegree::new(3, 0))), (4, 8));
    }

    #[test]
    fn quotient_kills_bare_generator_only() {
        let g = GeneratorList::parse("sigma:1,0").unwrap();
        let w = Window::new(6, 4);
        let t = quotient_hilbert(&g, &["sigma".into()], &params(Level::Finite(3), 0), w).unwrap();
        assert_eq!(t, HilbertTable::unit(w));
        let t = quotient_hilbert(&g, &["sigma".into()], &params(Level::Finite(2), 2), w).unwrap();
        assert_eq!(t.get(Bidegree::new(2, 1)), 1);
        assert_eq!(t.get(Bidegree::new(1, 0)), 0);
    }
}
