//! The reduced bar construction, Tor, E_1-homology and the Euler characteristic check.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::Serialize;

use super::{BarError, GradedAlgebraPresentation};
use crate::bigraded::{Bidegree, GeneratorList, HilbertTable, Window};
use crate::dyer_lashof::{enumerate_free_wk_basis, BasisOptions, WParams};
use crate::exactlin::{homology_dims, FiniteChainComplex, Matrix};
use crate::gerstenhaber::Level;

/// Bar chains `(s A)^{(x) p}` graded by rank and internal degree, one complex per `(n, q)`
/// with chain degree `p`. Total degree is `q + p`.
#[derive(Clone, Debug)]
pub struct BarChainData {
    pub window: Window,
    /// Basis words per `(n, q)` and bar degree `p`.
    pub words: BTreeMap<Bidegree, BTreeMap<u32, Vec<Vec<usize>>>>,
    pub complexes: BTreeMap<Bidegree, FiniteChainComplex>,
}

impl BarChainData {
    /// Number of bar chains in bar degree `p`, rank `n`, total degree `d`.
    pub fn chain_dim(&self, p: u32, n: u32, d: u32) -> usize {
        if d < p {
            return 0;
        }
        self.words.get(&Bidegree::new(n, d - p)).and_then(|w| w.get(&p)).map_or(0, Vec::len)
    }
}

fn words_of(a: &GradedAlgebraPresentation, target: Bidegree) -> BTreeMap<u32, Vec<Vec<usize>>> {
    let mut out: BTreeMap<u32, Vec<Vec<usize>>> = BTreeMap::new();
    let degs = a.degrees();
    fn rec(degs: &[Bidegree], left: Bidegree, cur: &mut Vec<usize>, out: &mut BTreeMap<u32, Vec<Vec<usize>>>) {
        if left.n == 0 {
            if left.d == 0 {
                out.entry(cur.len() as u32).or_default().push(cur.clone());
            }
            return;
        }
        for (i, b) in degs.iter().enumerate() {
            if b.n <= left.n && b.d <= left.d {
                cur.push(i);
                rec(degs, Bidegree::new(left.n - b.n, left.d - b.d), cur, out);
                cur.pop();
            }
        }
    }
    if target == Bidegree::ZERO {
        out.insert(0, vec![Vec::new()]);
    } else {
        rec(degs, target, &mut Vec::new(), &mut out);
    }
    out
}

/// Builds the bar complex at every `(n, q)` of the algebra's window.
///
/// `d[a_1|...|a_p] = sum_i (-1)^{e_i} [a_1|...|a_i a_{i+1}|...|a_p]` with
/// `e_i = sum_{j <= i} (|a_j| + 1)`, the suspension carrying degree one.
pub fn bar_complex(a: &GradedAlgebraPresentation) -> Result<BarChainData, BarError> {
    let w = a.window();
    let f = a.field();
    let degs = a.degrees();
    let mut words = BTreeMap::new();
    let mut complexes = BTreeMap::new();
    for b in w.bidegrees() {
        let ws = words_of(a, b);
        if ws.is_empty() {
            continue;
        }
        let pmax = *ws.keys().max().expect("nonempty");
        let lo = *ws.keys().min().expect("nonempty");
        let index: BTreeMap<u32, std::collections::HashMap<&Vec<usize>, usize>> =
            ws.iter().map(|(p, list)| (*p, list.iter().enumerate().map(|(i, x)| (x, i)).collect())).collect();
        let dims: Vec<usize> = (lo..=pmax).map(|p| ws.get(&p).map_or(0, Vec::len)).collect();
        let mut diffs = BTreeMap::new();
        for p in (lo + 1)..=pmax {
            let Some(src) = ws.get(&p) else { continue };
            let rows = ws.get(&(p - 1)).map_or(0, Vec::len);
            let mut t = Vec::new();
            for (col, word) in src.iter().enumerate() {
                let mut e = 0i64;
                for i in 0..word.len() - 1 {
                    e += degs[word[i]].d as i64 + 1;
                    for (c, x) in a.product(word[i], word[i + 1]) {
                        let mut merged = Vec::with_capacity(word.len() - 1);
                        merged.extend_from_slice(&word[..i]);
                        merged.push(*c);
                        merged.extend_from_slice(&word[i + 2..]);
                        let row = index[&(p - 1)][&merged];
                        t.push((row, col, f.mul(x, &f.sign(e))));
                    }
                }
            }
            diffs.insert(p as i64, Matrix::from_triplets(f, rows, src.len(), t)?);
        }
        let c = FiniteChainComplex::new(f, lo as i64, dims, diffs)?;
        complexes.insert(b, c);
        words.insert(b, ws);
    }
    Ok(BarChainData { window: w, words, complexes })
}

/// All computed Tor dimensions keyed by `(p, (n, total degree))`, including totals beyond the window.
fn tor_all(a: &GradedAlgebraPresentation) -> Result<BTreeMap<(u32, Bidegree), usize>, BarError> {
    let bar = bar_complex(a)?;
    let mut out = BTreeMap::new();
    for (b, c) in &bar.complexes {
        for (p, dim) in homology_dims(c) {
            if dim > 0 {
                out.insert((p as u32, Bidegree::new(b.n, b.d + p as u32)), dim);
            }
        }
    }
    Ok(out)
}

/// Tor of the algebra with total degree at most the window's `dmax`; zero entries omitted.
pub fn tor_dims(a: &GradedAlgebraPresentation) -> Result<BTreeMap<(u32, Bidegree), usize>, BarError> {
    let dmax = a.window().dmax;
    Ok(tor_all(a)?.into_iter().filter(|((_, b), _)| b.d <= dmax).collect())
}

pub fn tor_csv(t: &BTreeMap<(u32, Bidegree), usize>) -> String {
    let mut out = String::from("p,n,d,dim\n");
    for ((p, b), v) in t {
        out.push_str(&format!("{p},{},{},{v}\n", b.n, b.d));
    }
    out
}

/// E_1-homology: bar homology in total degree `d` at rank `g` placed at `(g, d - 1)`.
pub fn e1_homology_from_bar(a: &GradedAlgebraPresentation) -> Result<HilbertTable, BarError> {
    let w = a.window();
    let mut t = HilbertTable::empty(w);
    for ((p, b), v) in tor_all(a)? {
        if p == 0 || b.d == 0 {
            continue;
        }
        let at = Bidegree::new(b.n, b.d - 1);
        if w.contains(at) {
            t.add(at, v as u64);
        }
    }
    Ok(t)
}

/// Outcome of [`euler_report`].
#[derive(Clone, Debug, Serialize)]
pub struct EulerReport {
    /// Degree bound per rank used to make both sides complete.
    pub degree_bound: Vec<u32>,
    /// Per rank: signed count of bar chains of the source.
    pub bar_euler: Vec<i64>,
    /// Per rank: signed dimension of the target algebra.
    pub target_euler: Vec<i64>,
    /// Bidegrees where the target exceeds the total Tor dimension.
    pub inequality_failures: Vec<Bidegree>,
    /// Bidegrees where the identity read at fixed total degree fails; diagnostic only.
    pub fixed_degree_mismatches: Vec<Bidegree>,
}

impl EulerReport {
    pub fn holds(&self) -> bool {
        self.bar_euler == self.target_euler && self.inequality_failures.is_empty()
    }
}

/// Compares the bar complex of `W_{k-1}(gens)^+` with `W_{k-2}(s gens)^+`, rank by rank.
///
/// Per rank `n`, `sum_{p,q} (-1)^{p+q} dim B_p(n, q)` must equal `sum_D (-1)^D dim W_{k-2}(s gens)(n, D)`;
/// every term is finite since degrees in rank `n` are bounded by `c n` with
/// `c = max (d_g + k - 1) / n_g`. In addition the target must be dominated by Tor in each
/// bidegree of `w`, as an abutment of the bar spectral sequence.
pub fn euler_report(gens: &GeneratorList, p: &WParams, w: Window) -> Result<EulerReport, BarError> {
    let k = match p.k {
        Level::Finite(k) if k >= 2 => k,
        other => return Err(BarError::Level(other)),
    };
    gens.require_positive_rank().map_err(|e| BarError::Invalid(e.to_string()))?;
    let c = gens
        .iter()
        .map(|g| Ratio::new(g.bidegree.d as i64 + k as i64 - 1, g.bidegree.n as i64))
        .max()
        .unwrap_or_else(|| Ratio::from_integer(0));
    let degree_bound: Vec<u32> = (0..=w.nmax).map(|n| (c * n as i64).floor().to_integer() as u32).collect();
    let dfull = degree_bound.last().copied().unwrap_or(0).max(w.dmax) + 1;
    let big = Window::new(w.nmax, dfull);

    let source = GradedAlgebraPresentation::free_wk(gens, p, big)?;
    let bar = bar_complex(&source)?;
    let shifted = GeneratorList::new(
        gens.iter().map(|g| crate::bigraded::Generator::new(g.name.clone(), g.bidegree.n, g.bidegree.d + 1)).collect(),
    )
    .map_err(|e| BarError::Invalid(e.to_string()))?;
    let tp = WParams::new(Level::Finite(k - 1), p.field);
    let target =
        enumerate_free_wk_basis(&shifted, &tp, big, BasisOptions { reduced: true, ..Default::default() })?.table;

    let sign = |e: u32| if e % 2 == 0 { 1i64 } else { -1 };
    let mut bar_euler = Vec::new();
    let mut target_euler = Vec::new();
    for n in 1..=w.nmax {
        let mut chi = 0i64;
        for (b, ws) in bar.words.range(Bidegree::new(n, 0)..=Bidegree::new(n, dfull)) {
            for (pp, list) in ws {
                chi += sign(pp + b.d) * list.len() as i64;
            }
        }
        bar_euler.push(chi);
        target_euler.push((0..=dfull).map(|d| sign(d) * target.get(Bidegree::new(n, d)) as i64).sum());
    }

    let tor = tor_all(&source)?;
    let mut inequality_failures = Vec::new();
    let mut fixed_degree_mismatches = Vec::new();
    for n in 1..=w.nmax {
        for d in 0..=w.dmax {
            let b = Bidegree::new(n, d);
            let total: usize = tor.iter().filter(|((_, tb), _)| *tb == b).map(|(_, v)| *v).sum();
            let t = target.get(b) as usize;
            if t > total {
                inequality_failures.push(b);
            }
            let chains: i64 = (0..=d).map(|pp| sign(pp) * bar.chain_dim(pp, n, d) as i64).sum();
            if chains != sign(d) * t as i64 {
                fixed_degree_mismatches.push(b);
            }
        }
    }
    Ok(EulerReport {
        degree_bound: degree_bound[1..].to_vec(),
        bar_euler,
        target_euler,
        inequality_failures,
        fixed_degree_mismatches,
    })
}

pub fn euler_check(gens: &GeneratorList, p: &WParams, w: Window) -> Result<bool, BarError> {
    Ok(euler_report(gens, p, w)?.holds())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::FieldSpec;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    #[test]
    fn zero_ideal_has_only_the_unit() {
        let a = GradedAlgebraPresentation::trivial(q(), Window::new(3, 3), &GeneratorList::empty()).unwrap();
        let t = tor_dims(&a).unwrap();
        assert_eq!(t.into_iter().collect::<Vec<_>>(), vec![((0, Bidegree::ZERO), 1)]);
    }

    #[test]
    fn polynomial_and_exterior_tor() {
        let w = Window::new(4, 8);
        let poly = GradedAlgebraPresentation::free_graded_commutative(q(), w, &GeneratorList::parse("s:1,0").unwrap())
            .unwrap();
        let bar = bar_complex(&poly).unwrap();
        // p-chains in rank 4 are compositions of 4 into p parts.
        assert_eq!((1..=4).map(|p| bar.chain_dim(p, 4, p)).collect::<Vec<_>>(), vec![1, 3, 3, 1]);
        let t = tor_dims(&poly).unwrap();
        assert_eq!(t.into_iter().collect::<Vec<_>>(), vec![((0, Bidegree::ZERO), 1), ((1, Bidegree::new(1, 1)), 1)]);

        let ext = GradedAlgebraPresentation::free_graded_commutative(q(), w, &GeneratorList::parse("e:1,1").unwrap())
            .unwrap();
        let t = tor_dims(&ext).unwrap();
        let expect: Vec<_> = (0..=4).map(|p| ((p, Bidegree::new(p, 2 * p)), 1)).collect();
        assert_eq!(t.into_iter().collect::<Vec<_>>(), expect);
    }

    #[test]
    fn unit_algebra_e1_homology() {
        let a = GradedAlgebraPresentation::unit_algebra(q(), Window::new(6, 6));
        let h = e1_homology_from_bar(&a).unwrap();
        assert_eq!(h.iter().collect::<Vec<_>>(), vec![(Bidegree::new(1, 0), 1)]);
    }

    #[test]
    fn trivial_algebra_gives_tensor_coalgebra() {
        let w = Window::new(4, 8);
        let a = GradedAlgebraPresentation::trivial(q(), w, &GeneratorList::parse("x:1,1").unwrap()).unwrap();
        let h = e1_homology_from_bar(&a).unwrap();
        // [x|...|x] with n letters has total degree 2n, landing at (n, 2n - 1).
        let expect: Vec<_> = (1..=4).map(|n| (Bidegree::new(n, 2 * n - 1), 1)).collect();
        assert_eq!(h.iter().collect::<Vec<_>>(), expect);
    }

    #[test]
    fn euler_small_cases() {
        let s = GeneratorList::parse("sigma:1,0").unwrap();
        let w = Window::new(3, 4);
        assert!(euler_check(&s, &WParams::new(Level::Finite(3), q()), w).unwrap());
        assert!(euler_check(&s, &WParams::new(Level::Finite(2), FieldSpec::prime(2)), w).unwrap());
        assert!(euler_check(&GeneratorList::empty(), &WParams::new(Level::Finite(2), q()), w).unwrap());
        assert!(euler_check(&s, &WParams::new(Level::Infinite, q()), w).is_err());
    }
}
