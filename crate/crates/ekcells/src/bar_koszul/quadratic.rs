//! Quadratic data over a monoidal groupoid, quadratic (co)algebras and the cobar check.
//!
//! `V^{(x) n}(n)` is the induced module from `G_1^n`; its basis is
//! `(coset of G_1^n, multi-index into V)`, flattened as `coset * dim(V)^n + index`.
//! The subspace `V^{i-1} (x) R (x) V^{n-1-i}` is written `R_i`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::BarError;
use crate::bigraded::{Bidegree, HilbertTable, Window};
use crate::exactlin::{intersect_subspaces, rank_of_rows, Echelon, FieldSpec, Matrix, Scalar, SparseVec};
use crate::groupoid_splitting::{young_cosets, young_subgroup, Elem, MonoidalGroupoidSpec, YoungCosets};

/// `(V, R)`: `V` in rank 1 with an action of `G_1`, `R` a `G_2`-stable subspace of `(V (x) V)(2)`.
#[derive(Clone, Debug)]
pub struct QuadraticDatum {
    pub field: FieldSpec,
    pub base: MonoidalGroupoidSpec,
    pub v_dim: usize,
    /// Action matrices of the elements of `G_1`, in the sorted element order.
    pub v_action: Vec<Matrix>,
    /// Spanning vectors of `R` in the coordinates of `(V (x) V)(2)`.
    pub r: Vec<SparseVec>,
}

impl QuadraticDatum {
    /// Validates the action and the `G_2`-stability of `R`.
    pub fn new(
        field: FieldSpec,
        base: MonoidalGroupoidSpec,
        v_dim: usize,
        v_action: Vec<Matrix>,
        r: Vec<SparseVec>,
    ) -> Result<Self, BarError> {
        let g1 = base.elements(1)?.to_vec();
        if v_action.len() != g1.len() || v_action.iter().any(|m| m.rows() != v_dim || m.cols() != v_dim) {
            return Err(BarError::Invalid("one v_dim x v_dim matrix per element of G_1 expected".into()));
        }
        for (i, x) in g1.iter().enumerate() {
            for (j, y) in g1.iter().enumerate() {
                let xy = base.mul(1, x, y);
                let k = g1.iter().position(|z| *z == xy).expect("closed");
                if v_action[i].mul(&v_action[j])? != v_action[k] {
                    return Err(BarError::Invalid("V is not a representation of G_1".into()));
                }
            }
        }
        let q = QuadraticDatum { field, base, v_dim, v_action, r };
        let t2 = TensorPower::new(&q, 2)?;
        if q.r.iter().any(|v| v.iter().any(|(i, _)| *i >= t2.dim())) {
            return Err(BarError::Invalid("R has coordinates outside (V (x) V)(2)".into()));
        }
        let mut span = Echelon::new(field);
        for v in &q.r {
            span.insert(v);
        }
        for g in q.base.elements(2)? {
            for v in &q.r {
                if !span.contains(&t2.act(g, v)) {
                    return Err(BarError::Invalid("R is not stable under G_2".into()));
                }
            }
        }
        Ok(q)
    }

    /// Trivial groups, `V(1)` of dimension `v_dim`.
    pub fn over_naturals(field: FieldSpec, v_dim: usize, r: Vec<SparseVec>, cap: u32) -> Result<Self, BarError> {
        let base = MonoidalGroupoidSpec::trivial(cap);
        Self::new(field, base, v_dim, vec![Matrix::identity(field, v_dim)], r)
    }

    /// `V(1) = k` trivial and `R(2)` the kernel of the augmentation `k[G_2 / G_1 x G_1] -> k`.
    pub fn fundamental_example(field: FieldSpec, base: MonoidalGroupoidSpec) -> Result<Self, BarError> {
        let n1 = base.elements(1)?.len();
        let cosets = young_cosets(&base, &[1, 1])?.len();
        let r = (1..cosets).map(|c| vec![(0, field.from_i64(-1)), (c, field.one())]).collect();
        Self::new(field, base, 1, vec![Matrix::identity(field, 1); n1], r)
    }
}

/// Coordinates and group action on `V^{(x) n}(n)`.
struct TensorPower<'a> {
    q: &'a QuadraticDatum,
    n: u32,
    cosets: YoungCosets,
    /// Factors `(y_1, ..., y_n)` of each element of `G_1^n`, as indices into the elements of `G_1`.
    split: HashMap<Elem, Vec<usize>>,
    inverse_reps: Vec<Elem>,
}

impl<'a> TensorPower<'a> {
    fn new(q: &'a QuadraticDatum, n: u32) -> Result<Self, BarError> {
        let g = &q.base;
        let ones = vec![1u32; n as usize];
        let cosets = young_cosets(g, &ones)?;
        let g1 = g.elements(1)?;
        let mut split = HashMap::new();
        let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..n {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    (0..g1.len()).map(move |i| {
                        let mut u = t.clone();
                        u.push(i);
                        u
                    })
                })
                .collect();
        }
        for t in tuples {
            let elems: Vec<Elem> = t.iter().map(|&i| g1[i].clone()).collect();
            split.insert(g.block_sum_many(&ones, &elems), t);
        }
        let inverse_reps = cosets.reps.iter().map(|r| g.inv(n, r)).collect();
        Ok(TensorPower { q, n, cosets, split, inverse_reps })
    }

    fn block(&self) -> usize {
        self.q.v_dim.pow(self.n)
    }

    fn dim(&self) -> usize {
        self.cosets.len() * self.block()
    }

    /// `z . (1 (x) e_I)` for `z` in `G_n`, written in the coset basis.
    fn push(&self, z: &Elem, multi: &[usize], coeff: &Scalar, out: &mut BTreeMap<usize, Scalar>) {
        let g = &self.q.base;
        let f = self.q.field;
        let group = g.elements(self.n).expect("enumerated");
        let zi = group.binary_search(z).expect("element of G_n");
        let c = self.cosets.coset_of_index(zi);
        let y = g.mul(self.n, &self.inverse_reps[c], z);
        let parts = &self.split[&y];
        // Expand the tensor product of the columns V(y_j) e_{I_j}.
        let mut acc: Vec<(usize, Scalar)> = vec![(0, coeff.clone())];
        for (j, &i) in multi.iter().enumerate() {
            let m = &self.q.v_action[parts[j]];
            let col: Vec<(usize, Scalar)> =
                (0..self.q.v_dim).map(|r| (r, m.get(r, i))).filter(|(_, x)| !x.is_zero()).collect();
            acc = acc
                .into_iter()
                .flat_map(|(idx, x)| col.iter().map(move |(r, y)| (idx * self.q.v_dim + r, f.mul(&x, y))))
                .collect();
        }
        let base = c * self.block();
        for (idx, x) in acc {
            let slot = out.entry(base + idx).or_insert_with(|| f.zero());
            *slot = f.add(slot, &x);
        }
    }

    fn decode(&self, i: usize) -> (usize, Vec<usize>) {
        let (c, mut idx) = (i / self.block(), i % self.block());
        let mut multi = vec![0; self.n as usize];
        for j in (0..self.n as usize).rev() {
            multi[j] = idx % self.q.v_dim;
            idx /= self.q.v_dim;
        }
        (c, multi)
    }

    fn finish(out: BTreeMap<usize, Scalar>) -> SparseVec {
        out.into_iter().filter(|(_, x)| !x.is_zero()).collect()
    }

    /// The action of `g` on a vector.
    fn act(&self, g: &Elem, v: &SparseVec) -> SparseVec {
        let mut out = BTreeMap::new();
        for (i, x) in v {
            let (c, multi) = self.decode(*i);
            let z = self.q.base.mul(self.n, g, &self.cosets.reps[c]);
            self.push(&z, &multi, x, &mut out);
        }
        Self::finish(out)
    }

    /// Spanning vectors of `R_i` (relation on factors `i, i+1`, 1-based).
    fn relation_span(&self, i: usize, t2: &TensorPower<'_>) -> Result<Vec<SparseVec>, BarError> {
        let g = &self.q.base;
        let n = self.n as usize;
        let mut comp = vec![1u32; n - 1];
        comp[i - 1] = 2;
        let outer = young_cosets(g, &comp)?;
        let mut elems: Vec<Elem> = comp.iter().map(|&c| g.identity(c)).collect();
        let d = self.q.v_dim;
        let others = d.pow(self.n - 2);
        let mut out = Vec::new();
        for x in &outer.reps {
            for r in &self.q.r {
                for o in 0..others {
                    let mut rest = vec![0usize; n - 2];
                    let mut t = o;
                    for j in (0..n - 2).rev() {
                        rest[j] = t % d;
                        t /= d;
                    }
                    let mut acc = BTreeMap::new();
                    for (idx, coeff) in r {
                        let (h, ab) = t2.decode(*idx);
                        elems[i - 1] = t2.cosets.reps[h].clone();
                        let z = g.mul(self.n, x, &g.block_sum_many(&comp, &elems));
                        let mut multi = rest[..i - 1].to_vec();
                        multi.extend_from_slice(&ab);
                        multi.extend_from_slice(&rest[i - 1..]);
                        self.push(&z, &multi, coeff, &mut acc);
                    }
                    let v = Self::finish(acc);
                    if !v.is_empty() {
                        out.push(v);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// `V^{(x) n}(n)` with its subspaces `R_1, ..., R_{n-1}`.
struct RelationSpaces {
    dim: usize,
    rel: Vec<Vec<SparseVec>>,
}

fn relation_spaces(q: &QuadraticDatum, n: u32) -> Result<RelationSpaces, BarError> {
    let tp = TensorPower::new(q, n)?;
    let t2 = TensorPower::new(q, 2)?;
    let rel = (1..n as usize).map(|i| tp.relation_span(i, &t2)).collect::<Result<_, _>>()?;
    Ok(RelationSpaces { dim: tp.dim(), rel })
}

fn check_window(q: &QuadraticDatum, w: Window) -> Result<(), BarError> {
    if w.nmax > q.base.cap {
        return Err(BarError::Invalid(format!("window rank {} exceeds the groupoid cap {}", w.nmax, q.base.cap)));
    }
    young_subgroup(&q.base, &vec![1; w.nmax as usize])?;
    Ok(())
}

/// `dim A(V,R)(n) = dim V^{(x) n}(n) - dim sum_i R_i`, placed at `(n, 0)`.
pub fn quadratic_algebra_dims(q: &QuadraticDatum, w: Window) -> Result<HilbertTable, BarError> {
    check_window(q, w)?;
    let mut t = HilbertTable::empty(w);
    for n in 1..=w.nmax {
        let s = relation_spaces(q, n)?;
        let r = rank_of_rows(q.field, s.rel.iter().flatten());
        t.add(Bidegree::new(n, 0), (s.dim - r) as u64);
    }
    Ok(t)
}

/// `dim C(V,R)(n) = dim of the intersection of the R_i`; `C(1) = V`.
pub fn quadratic_coalgebra_dims(q: &QuadraticDatum, w: Window) -> Result<BTreeMap<u32, usize>, BarError> {
    check_window(q, w)?;
    let mut out = BTreeMap::new();
    for n in 1..=w.nmax {
        let s = relation_spaces(q, n)?;
        let dim = if n == 1 { s.dim } else { intersect_subspaces(q.field, s.dim, &s.rel).len() };
        out.insert(n, dim);
    }
    Ok(out)
}

/// Cobar homology per rank, by degree.
#[derive(Clone, Debug, Serialize)]
pub struct KoszulRow {
    pub n: u32,
    pub algebra_dim: usize,
    pub cobar_homology: BTreeMap<i64, usize>,
    pub agrees: bool,
}

/// Cobar complex of `C(V,R)` in rank `n`, as subspaces of `V^{(x) n}(n)`.
///
/// The summand for a composition with cut set `S` is `W_S`, the intersection of the `R_i` over
/// positions `i` not in `S`. It sits in degree `n - 1 - |S|`; the differential adds a cut `j`
/// with sign `(-1)^{#(s in S, s < j)}`, each map being the inclusion `W_S -> W_{S + j}`.
pub fn cobar_homology(q: &QuadraticDatum, n: u32) -> Result<BTreeMap<i64, usize>, BarError> {
    let f = q.field;
    let s = relation_spaces(q, n)?;
    let cuts = n as usize - 1;
    let full: Vec<SparseVec> = (0..s.dim).map(|i| vec![(i, f.one())]).collect();
    let mut spaces: Vec<Vec<SparseVec>> = Vec::with_capacity(1 << cuts);
    for mask in 0..(1usize << cuts) {
        let constraints: Vec<Vec<SparseVec>> =
            (0..cuts).filter(|j| mask & (1 << j) == 0).map(|j| s.rel[j].clone()).collect();
        spaces.push(if constraints.is_empty() { full.clone() } else { intersect_subspaces(f, s.dim, &constraints) });
    }
    let degree = |mask: usize| (cuts - mask.count_ones() as usize) as i64;
    let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
    let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
    for deg in 0..=cuts as i64 {
        let mut images: Vec<SparseVec> = Vec::new();
        let mut dim = 0;
        for mask in (0..(1usize << cuts)).filter(|&m| degree(m) == deg) {
            dim += spaces[mask].len();
            for b in &spaces[mask] {
                let mut v: SparseVec = Vec::new();
                for j in (0..cuts).filter(|j| mask & (1 << j) == 0) {
                    let below = (mask & ((1 << j) - 1)).count_ones() as i64;
                    let sign = f.sign(below);
                    let slot = (mask | (1 << j)) * s.dim;
                    v.extend(b.iter().map(|(i, x)| (slot + i, f.mul(x, &sign))));
                }
                v.sort_by_key(|(i, _)| *i);
                images.push(v);
            }
        }
        dims.insert(deg, dim);
        ranks.insert(deg, rank_of_rows(f, &images));
    }
    Ok(dims.iter().map(|(&d, &dim)| (d, dim - ranks[&d] - ranks.get(&(d + 1)).copied().unwrap_or(0))).collect())
}

pub fn koszul_report(q: &QuadraticDatum, w: Window) -> Result<Vec<KoszulRow>, BarError> {
    let a = quadratic_algebra_dims(q, w)?;
    (1..=w.nmax)
        .map(|n| {
            let h = cobar_homology(q, n)?;
            let algebra_dim = a.get(Bidegree::new(n, 0)) as usize;
            let agrees = h.iter().all(|(&d, &v)| if d == 0 { v == algebra_dim } else { v == 0 });
            Ok(KoszulRow { n, algebra_dim, cobar_homology: h, agrees })
        })
        .collect()
}

/// Whether the cobar complex of `C(V,R)` resolves `A(V,R)` in every rank of the window.
pub fn koszul_check(q: &QuadraticDatum, w: Window) -> Result<bool, BarError> {
    Ok(koszul_report(q, w)?.iter().all(|r| r.agrees))
}

/// E_1-homology of the algebra `k_{>0}` over a groupoid, from its bar complex.
///
/// In rank `n` the bar chains of degree `p` are `k[G_n / G_{n_1} x ... x G_{n_p}]` over compositions
/// into `p` parts, with total degree `p`; the differential merges neighbours with sign `(-1)^i`.
pub fn unit_algebra_e1_homology(
    g: &MonoidalGroupoidSpec,
    field: FieldSpec,
    w: Window,
) -> Result<HilbertTable, BarError> {
    let mut t = HilbertTable::empty(w);
    for n in 1..=w.nmax {
        let group = g.elements(n)?;
        let levels: Vec<Vec<YoungCosets>> = (1..=n as usize)
            .map(|p| crate::groupoid_splitting::compositions(n, p).iter().map(|c| young_cosets(g, c)).collect())
            .collect::<Result<_, _>>()?;
        let offsets = |lvl: &Vec<YoungCosets>| {
            let mut o = Vec::new();
            let mut acc = 0;
            for b in lvl {
                o.push(acc);
                acc += b.len();
            }
            (o, acc)
        };
        let mut dims = Vec::new();
        let mut diffs = BTreeMap::new();
        for p in 1..=n as usize {
            let (_, total) = offsets(&levels[p - 1]);
            dims.push(total);
            if p == 1 {
                continue;
            }
            let (upper_off, rows) = offsets(&levels[p - 2]);
            let mut trip = Vec::new();
            let mut col = 0;
            for b in &levels[p - 1] {
                for rep in &b.reps {
                    let gi = group.binary_search(rep).expect("element of G_n");
                    for i in 0..p - 1 {
                        let mut merged = b.composition[..i].to_vec();
                        merged.push(b.composition[i] + b.composition[i + 1]);
                        merged.extend_from_slice(&b.composition[i + 2..]);
                        let t_idx = levels[p - 2].iter().position(|u| u.composition == merged).expect("present");
                        let row = upper_off[t_idx] + levels[p - 2][t_idx].coset_of_index(gi);
                        trip.push((row, col, field.sign(i as i64 + 1)));
                    }
                    col += 1;
                }
            }
            diffs.insert(p as i64, Matrix::from_triplets(field, rows, total, trip)?);
        }
        let c = crate::exactlin::FiniteChainComplex::new(field, 1, dims, diffs)?;
        for (p, v) in crate::exactlin::homology_dims(&c) {
            let at = Bidegree::new(n, p as u32 - 1);
            if v > 0 && w.contains(at) {
                t.add(at, v as u64);
            }
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    #[test]
    fn naturals_extremes() {
        let w = Window::new(5, 0);
        let free = QuadraticDatum::over_naturals(q(), 1, vec![], 5).unwrap();
        let all = QuadraticDatum::over_naturals(q(), 1, vec![vec![(0, q().one())]], 5).unwrap();
        let a = quadratic_algebra_dims(&free, w).unwrap();
        assert!((1..=5).all(|n| a.get(Bidegree::new(n, 0)) == 1));
        let a = quadratic_algebra_dims(&all, w).unwrap();
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![(Bidegree::new(1, 0), 1)]);
        let c = quadratic_coalgebra_dims(&free, w).unwrap();
        assert_eq!(c.values().copied().collect::<Vec<_>>(), vec![1, 0, 0, 0, 0]);
        let c = quadratic_coalgebra_dims(&all, w).unwrap();
        assert_eq!(c.values().copied().collect::<Vec<_>>(), vec![1; 5]);
        assert!(koszul_check(&free, w).unwrap());
        assert!(koszul_check(&all, w).unwrap());
    }

    #[test]
    fn fundamental_example_gl2() {
        let base = MonoidalGroupoidSpec::general_linear(2, 2);
        let d = QuadraticDatum::fundamental_example(FieldSpec::prime(2), base).unwrap();
        let c = quadratic_coalgebra_dims(&d, Window::new(2, 0)).unwrap();
        assert_eq!(c[&2], 5);
    }

    #[test]
    fn unstable_relations_rejected() {
        let base = MonoidalGroupoidSpec::symmetric(2);
        let r = vec![vec![(0, q().one())]];
        assert!(QuadraticDatum::new(q(), base, 1, vec![Matrix::identity(q(), 1)], r).is_err());
    }

    #[test]
    fn cube_signs_square_to_zero() {
        // Adding cuts j < j' in either order gives opposite signs.
        let sign = |mask: usize, j: usize| (mask & ((1 << j) - 1)).count_ones() % 2;
        for mask in 0..16usize {
            for j in 0..4 {
                for k in j + 1..4 {
                    if mask & (1 << j) == 0 && mask & (1 << k) == 0 {
                        let a = sign(mask, j) + sign(mask | (1 << j), k);
                        let b = sign(mask, k) + sign(mask | (1 << k), j);
                        assert_eq!((a + b) % 2, 1);
                    }
                }
            }
        }
    }
}
