//! Sparse matrices and deterministic row-echelon elimination.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{FieldSpec, LinError, Scalar};

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

/// Immutable sparse matrix over a fixed field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl Matrix {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        Self::from_triplets(field, n, n, (0..n).map(|i| (i, i, field.one()))).unwrap()
    }

    /// Builds a matrix, summing repeated coordinates and dropping zeros.
    pub fn from_triplets(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<Self, LinError> {
        let mut entries: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(LinError::OutOfBounds { row: r, col: c, rows, cols });
            }
            let slot = entries.entry((r, c)).or_insert_with(|| field.zero());
            *slot = field.add(slot, &v);
        }
        entries.retain(|_, v| !v.is_zero());
        Ok(Matrix { field, rows, cols, entries })
    }

    pub fn from_dense(field: FieldSpec, dense: &[Vec<i64>]) -> Self {
        let rows = dense.len();
        let cols = dense.first().map_or(0, |r| r.len());
        let trip = dense
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, &v)| (i, j, field.from_i64(v))));
        Self::from_triplets(field, rows, cols, trip).expect("dense input is in bounds")
    }

    /// Matrix whose columns are the given sparse vectors.
    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[SparseVec]) -> Self {
        let trip = columns.iter().enumerate().flat_map(|(j, col)| col.iter().map(move |(i, v)| (*i, j, v.clone())));
        Self::from_triplets(field, rows, columns.len(), trip).expect("columns in bounds")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.entries.iter().map(|((r, c), v)| (*r, *c, v))
    }

    pub fn row_vectors(&self) -> Vec<SparseVec> {
        let mut out = vec![Vec::new(); self.rows];
        for ((r, c), v) in &self.entries {
            out[*r].push((*c, v.clone()));
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|((r, c), v)| ((*c, *r), v.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinError> {
        if self.cols != other.rows {
            return Err(LinError::Shape(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let f = self.field;
        let rhs = other.row_vectors();
        let mut trip = Vec::new();
        for ((r, c), v) in &self.entries {
            for (j, w) in &rhs[*c] {
                trip.push((*r, *j, f.mul(v, w)));
            }
        }
        Matrix::from_triplets(f, self.rows, other.cols, trip)
    }

    /// Applies the matrix to a sparse column vector.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let f = self.field;
        let lookup: BTreeMap<usize, &Scalar> = v.iter().map(|(i, s)| (*i, s)).collect();
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for ((r, c), a) in &self.entries {
            if let Some(x) = lookup.get(c) {
                let slot = acc.entry(*r).or_insert_with(|| f.zero());
                *slot = f.add(slot, &f.mul(a, x));
            }
        }
        acc.into_iter().filter(|(_, s)| !s.is_zero()).collect()
    }

    /// Coordinate text: header `rows cols characteristic`, then `row col value` lines.
    pub fn to_coordinate_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols, self.field.characteristic());
        for ((r, c), v) in &self.entries {
            writeln!(s, "{r} {c} {v}").unwrap();
        }
        s
    }

    pub fn from_coordinate_text(text: &str) -> Result<Matrix, LinError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| LinError::Parse("missing header".into()))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 3 {
            return Err(LinError::Parse(format!("bad header `{header}`")));
        }
        let num =
            |s: &str| -> Result<u64, LinError> { s.parse().map_err(|_| LinError::Parse(format!("bad integer `{s}`"))) };
        let rows = num(h[0])? as usize;
        let cols = num(h[1])? as usize;
        let field = FieldSpec::new(num(h[2])?)?;
        let mut trip = Vec::new();
        for line in lines {
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() != 3 {
                return Err(LinError::Parse(format!("bad entry `{line}`")));
            }
            trip.push((num(t[0])? as usize, num(t[1])? as usize, field.parse(t[2])?));
        }
        Matrix::from_triplets(field, rows, cols, trip)
    }
}

/// Incremental row echelon form keyed by pivot column; pivot entries are 1.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: FieldSpec,
    pivots: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new(field: FieldSpec) -> Self {
        Echelon { field, pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Reduces `v` against every stored pivot.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let f = self.field;
        let mut work: BTreeMap<usize, Scalar> = v.iter().cloned().collect();
        let mut out = Vec::new();
        while let Some((c, a)) = work.pop_first() {
            if a.is_zero() {
                continue;
            }
            match self.pivots.get(&c) {
                Some(row) => {
                    for (j, b) in row.iter().skip(1) {
                        let slot = work.entry(*j).or_insert_with(|| f.zero());
                        *slot = f.sub(slot, &f.mul(&a, b));
                    }
                }
                None => out.push((c, a)),
            }
        }
        out
    }

    /// Inserts `v`; returns whether it was independent of the stored rows.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        match r.first() {
            None => false,
            Some((c, lead)) => {
                let f = self.field;
                let inv = f.inv(lead);
                let c = *c;
                let row: SparseVec = r.iter().map(|(j, x)| (*j, f.mul(x, &inv))).collect();
                self.pivots.insert(c, row);
                true
            }
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Fully reduced rows, ordered by pivot column.
    pub fn reduced_rows(&self) -> Vec<SparseVec> {
        let mut done: BTreeMap<usize, SparseVec> = BTreeMap::new();
        let f = self.field;
        for (&c, row) in self.pivots.iter().rev() {
            let mut work: BTreeMap<usize, Scalar> = row.iter().cloned().collect();
            let mut out = vec![(c, f.one())];
            work.remove(&c);
            while let Some((j, a)) = work.pop_first() {
                if a.is_zero() {
                    continue;
                }
                match done.get(&j) {
                    Some(prow) => {
                        for (t, b) in prow.iter().skip(1) {
                            let slot = work.entry(*t).or_insert_with(|| f.zero());
                            *slot = f.sub(slot, &f.mul(&a, b));
                        }
                    }
                    None => out.push((j, a)),
                }
            }
            done.insert(c, out);
        }
        done.into_values().collect()
    }
}

/// Rank of a list of sparse row vectors.
pub fn rank_of_rows<'a>(field: FieldSpec, rows: impl IntoIterator<Item = &'a SparseVec>) -> usize {
    let mut e = Echelon::new(field);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

pub fn rank(m: &Matrix) -> usize {
    // Eliminate along the shorter side; rank is transpose-invariant.
    if m.rows() <= m.cols() {
        rank_of_rows(m.field(), &m.row_vectors())
    } else {
        rank_of_rows(m.field(), &m.transpose().row_vectors())
    }
}

/// Basis of the null space `{v : m v = 0}` as sparse column vectors.
pub fn kernel_basis(m: &Matrix) -> Vec<SparseVec> {
    let f = m.field();
    let mut e = Echelon::new(f);
    for r in m.row_vectors() {
        e.insert(&r);
    }
    let rref = e.reduced_rows();
    let pivot_cols: Vec<usize> = rref.iter().map(|r| r[0].0).collect();
    let is_pivot: std::collections::BTreeSet<usize> = pivot_cols.iter().copied().collect();
    // For each free column, collect the entries of each pivot row in that column.
    let mut by_free: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
    for row in &rref {
        let p = row[0].0;
        for (j, x) in row.iter().skip(1) {
            by_free.entry(*j).or_default().push((p, x.clone()));
        }
    }
    let mut out = Vec::new();
    for free in (0..m.cols()).filter(|c| !is_pivot.contains(c)) {
        let mut v: SparseVec =
            by_free.get(&free).map(|es| es.iter().map(|(p, x)| (*p, f.neg(x))).collect()).unwrap_or_default();
        v.push((free, f.one()));
        v.sort_by_key(|(i, _)| *i);
        out.push(v);
    }
    out
}

/// Basis of the intersection of subspaces of `F^dim`, each given by spanning vectors.
pub fn intersect_subspaces(field: FieldSpec, dim: usize, spaces: &[Vec<SparseVec>]) -> Vec<SparseVec> {
    // Stack the annihilators of every space and take the common kernel.
    let mut equations: Vec<SparseVec> = Vec::new();
    for span in spaces {
        let m = Matrix::from_triplets(
            field,
            span.len(),
            dim,
            span.iter().enumerate().flat_map(|(i, v)| v.iter().map(move |(j, x)| (i, *j, x.clone()))),
        )
        .expect("vectors in ambient dimension");
        equations.extend(kernel_basis(&m));
    }
    let eq = Matrix::from_triplets(
        field,
        equations.len(),
        dim,
        equations.iter().enumerate().flat_map(|(i, v)| v.iter().map(move |(j, x)| (i, *j, x.clone()))),
    )
    .expect("equations in ambient dimension");
    kernel_basis(&eq)
}
