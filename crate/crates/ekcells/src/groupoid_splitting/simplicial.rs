//! Finite semi-simplicial sets and their homology.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::SplittingError;
use crate::exactlin::{homology_dims, FieldSpec, FiniteChainComplex, Matrix};

/// A finite semi-simplicial set. When `pointed`, simplex 0 of every level is the basepoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiSimplicialSet {
    /// Number of simplices per level `0..=pmax`.
    pub counts: Vec<usize>,
    /// `faces[p][i][x]` is `d_i` of simplex `x` at level `p`; `faces[0]` is empty.
    pub faces: Vec<Vec<Vec<usize>>>,
    pub pointed: bool,
}

impl SemiSimplicialSet {
    pub fn pmax(&self) -> usize {
        self.counts.len().saturating_sub(1)
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Checks shapes, basepoint preservation and `d_i d_j = d_{j-1} d_i` for `i < j`.
    pub fn check_identities(&self) -> Result<(), SplittingError> {
        if self.faces.len() != self.counts.len().max(1) {
            return Err(SplittingError::Identity("one face family per level expected".into()));
        }
        for p in 1..self.counts.len() {
            let fs = &self.faces[p];
            if fs.len() != p + 1 {
                return Err(SplittingError::Identity(format!("level {p} needs {} faces", p + 1)));
            }
            for (i, f) in fs.iter().enumerate() {
                if f.len() != self.counts[p] || f.iter().any(|&y| y >= self.counts[p - 1]) {
                    return Err(SplittingError::Identity(format!("d_{i} at level {p} is malformed")));
                }
                if self.pointed && f.first() != Some(&0) {
                    return Err(SplittingError::Identity(format!("d_{i} at level {p} moves the basepoint")));
                }
            }
            if p >= 2 {
                for x in 0..self.counts[p] {
                    for j in 1..=p {
                        for i in 0..j {
                            let l = self.faces[p - 1][i][fs[j][x]];
                            let r = self.faces[p - 1][j - 1][fs[i][x]];
                            if l != r {
                                return Err(SplittingError::Identity(format!(
                                    "d_{i} d_{j} != d_{} d_{i} on simplex {x} at level {p}",
                                    j - 1
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Chain complex with `d = sum (-1)^i d_i`; pointed sets drop the basepoint, `augment` adds `C_{-1} = k`.
    fn chain_complex(&self, field: FieldSpec, augment: bool) -> FiniteChainComplex {
        let skip = usize::from(self.pointed);
        let dim = |p: usize| self.counts[p].saturating_sub(skip);
        let mut dims: Vec<usize> = Vec::new();
        let mut diffs: BTreeMap<i64, Matrix> = BTreeMap::new();
        if augment {
            dims.push(1);
        }
        for p in 0..self.counts.len() {
            dims.push(dim(p));
            if p == 0 {
                if augment {
                    let t: Vec<_> = (0..dim(0)).map(|c| (0, c, field.one())).collect();
                    diffs.insert(0, Matrix::from_triplets(field, 1, dim(0), t).expect("in bounds"));
                }
                continue;
            }
            let mut t = Vec::new();
            for (i, f) in self.faces[p].iter().enumerate() {
                for x in skip..self.counts[p] {
                    let y = f[x];
                    if y < skip {
                        continue;
                    }
                    t.push((y - skip, x - skip, field.sign(i as i64)));
                }
            }
            diffs.insert(p as i64, Matrix::from_triplets(field, dim(p - 1), dim(p), t).expect("in bounds"));
        }
        let lo = if augment { -1 } else { 0 };
        FiniteChainComplex::new(field, lo, dims, diffs).expect("semi-simplicial differential squares to zero")
    }
}

/// Homology of the associated chain complex: reduced (basepoint collapsed) when pointed, ordinary otherwise.
pub fn reduced_homology(s: &SemiSimplicialSet, field: FieldSpec) -> BTreeMap<i64, usize> {
    homology_dims(&s.chain_complex(field, false))
}

/// Augmented homology of an unpointed set; the empty set has a class in degree `-1`.
pub fn augmented_homology(s: &SemiSimplicialSet, field: FieldSpec) -> BTreeMap<i64, usize> {
    homology_dims(&s.chain_complex(field, !s.pointed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle_boundary() -> SemiSimplicialSet {
        // Edges 01, 02, 12 with d_0 dropping the first vertex.
        SemiSimplicialSet {
            counts: vec![3, 3],
            faces: vec![vec![], vec![vec![1, 2, 2], vec![0, 0, 1]]],
            pointed: false,
        }
    }

    #[test]
    fn small_examples() {
        let q = FieldSpec::rationals();
        let empty = SemiSimplicialSet { counts: vec![0], faces: vec![vec![]], pointed: false };
        assert!(reduced_homology(&empty, q).values().all(|&v| v == 0));
        assert_eq!(augmented_homology(&empty, q).get(&-1), Some(&1));
        let point = SemiSimplicialSet { counts: vec![1], faces: vec![vec![]], pointed: false };
        assert_eq!(reduced_homology(&point, q).get(&0), Some(&1));
        let t = triangle_boundary();
        t.check_identities().unwrap();
        let h = reduced_homology(&t, q);
        assert_eq!((h.get(&0), h.get(&1)), (Some(&1), Some(&1)));
    }

    #[test]
    fn identity_violation_detected() {
        // An edge with distinct endpoints cannot bound a degenerate triangle: d_0 d_2 != d_1 d_0.
        let bad = SemiSimplicialSet {
            counts: vec![2, 1, 1],
            faces: vec![vec![], vec![vec![0], vec![1]], vec![vec![0], vec![0], vec![0]]],
            pointed: false,
        };
        assert!(bad.check_identities().is_err());
        let worse =
            SemiSimplicialSet { counts: vec![1, 1], faces: vec![vec![], vec![vec![3], vec![0]]], pointed: false };
        assert!(worse.check_identities().is_err());
    }
}
