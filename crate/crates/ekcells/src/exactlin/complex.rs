//! Finite chain complexes and their homology.

use std::collections::BTreeMap;

use super::{rank, FieldSpec, LinError, Matrix};

/// Chain complex concentrated in degrees `lo..=hi`, differential lowering degree by one.
///
/// `diffs[p]` is the matrix of `d_p : C_p -> C_{p-1}`, of shape `dims(p-1) x dims(p)`;
/// missing entries are zero maps.
#[derive(Clone, Debug)]
pub struct FiniteChainComplex {
    field: FieldSpec,
    lo: i64,
    dims: Vec<usize>,
    diffs: BTreeMap<i64, Matrix>,
}

impl FiniteChainComplex {
    pub fn new(field: FieldSpec, lo: i64, dims: Vec<usize>, diffs: BTreeMap<i64, Matrix>) -> Result<Self, LinError> {
        let c = FiniteChainComplex { field, lo, dims, diffs };
        c.validate(true)?;
        Ok(c)
    }

    /// Skips the `d o d = 0` check; shapes are still validated.
    pub fn new_unchecked(
        field: FieldSpec,
        lo: i64,
        dims: Vec<usize>,
        diffs: BTreeMap<i64, Matrix>,
    ) -> Result<Self, LinError> {
        let c = FiniteChainComplex { field, lo, dims, diffs };
        c.validate(false)?;
        Ok(c)
    }

    fn validate(&self, check_square: bool) -> Result<(), LinError> {
        for (&p, m) in &self.diffs {
            if m.field() != self.field {
                return Err(LinError::Shape(format!("d_{p} has the wrong field")));
            }
            if m.cols() != self.dim(p) || m.rows() != self.dim(p - 1) {
                return Err(LinError::Shape(format!(
                    "d_{p} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    self.dim(p - 1),
                    self.dim(p)
                )));
            }
        }
        if check_square {
            for (&p, m) in &self.diffs {
                if let Some(prev) = self.diffs.get(&(p - 1)) {
                    if !prev.mul(m)?.is_zero() {
                        return Err(LinError::NotAComplex(p));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn dim(&self, p: i64) -> usize {
        if p < self.lo {
            return 0;
        }
        self.dims.get((p - self.lo) as usize).copied().unwrap_or(0)
    }

    pub fn differential(&self, p: i64) -> Option<&Matrix> {
        self.diffs.get(&p)
    }

    pub fn euler_characteristic(&self) -> i64 {
        (self.lo..=self.hi())
            .map(|p| if p.rem_euclid(2) == 0 { self.dim(p) as i64 } else { -(self.dim(p) as i64) })
            .sum()
    }
}

/// `H_p = dim ker d_p - rank d_{p+1}` for every degree of the complex.
pub fn homology_dims(c: &FiniteChainComplex) -> BTreeMap<i64, usize> {
    let ranks: BTreeMap<i64, usize> = c.diffs.iter().map(|(p, m)| (*p, rank(m))).collect();
    (c.lo..=c.hi())
        .map(|p| {
            let r_out = ranks.get(&p).copied().unwrap_or(0);
            let r_in = ranks.get(&(p + 1)).copied().unwrap_or(0);
            (p, c.dim(p) - r_out - r_in)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k1(f: FieldSpec, v: i64) -> Matrix {
        Matrix::from_dense(f, &[vec![v]])
    }

    #[test]
    fn two_term_complexes() {
        let q = FieldSpec::rationals();
        let acyclic = FiniteChainComplex::new(q, 0, vec![1, 1], [(1, k1(q, 1))].into()).unwrap();
        assert!(homology_dims(&acyclic).values().all(|&h| h == 0));
        let split = FiniteChainComplex::new(q, 0, vec![1, 1], [(1, k1(q, 0))].into()).unwrap();
        assert_eq!(homology_dims(&split), [(0, 1), (1, 1)].into());
    }

    #[test]
    fn triangle_boundary_is_a_circle() {
        let q = FieldSpec::rationals();
        // Edges 01, 02, 12 with boundary (target - source).
        let d1 = Matrix::from_dense(q, &[vec![-1, -1, 0], vec![1, 0, -1], vec![0, 1, 1]]);
        let c = FiniteChainComplex::new(q, 0, vec![3, 3], [(1, d1)].into()).unwrap();
        assert_eq!(homology_dims(&c), [(0, 1), (1, 1)].into());
        assert_eq!(c.euler_characteristic(), 0);
    }

    #[test]
    fn detects_nonzero_square() {
        let q = FieldSpec::rationals();
        let r = FiniteChainComplex::new(q, 0, vec![1, 1, 1], [(1, k1(q, 1)), (2, k1(q, 1))].into());
        assert!(matches!(r, Err(LinError::NotAComplex(2))));
    }
}
