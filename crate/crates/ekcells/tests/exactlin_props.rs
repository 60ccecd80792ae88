use std::collections::BTreeMap;

use ekcells::exactlin::{homology_dims, kernel_basis, rank, FieldSpec, FiniteChainComplex, Matrix};
use proptest::prelude::*;

fn field_strategy() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![Just(0u64), Just(2), Just(3), Just(5)].prop_map(|l| FieldSpec::new(l).unwrap())
}

fn dense(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, cols), rows)
}

fn matrix_strategy() -> impl Strategy<Value = Matrix> {
    (field_strategy(), 0usize..6, 0usize..6).prop_flat_map(|(f, r, c)| {
        dense(r, c).prop_map(move |d| if d.is_empty() { Matrix::zero(f, 0, c) } else { Matrix::from_dense(f, &d) })
    })
}

/// Invertible matrix as a product of elementary operations.
fn invertible(f: FieldSpec, n: usize, ops: &[(usize, usize, i64)]) -> Matrix {
    let mut m = Matrix::identity(f, n);
    for &(i, j, a) in ops {
        if n == 0 {
            break;
        }
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        let e = Matrix::from_triplets(f, n, n, (0..n).map(|t| (t, t, f.one())).chain([(i, j, f.from_i64(a))])).unwrap();
        m = e.mul(&m).unwrap();
    }
    m
}

fn inverse_of(f: FieldSpec, n: usize, ops: &[(usize, usize, i64)]) -> Matrix {
    let mut m = Matrix::identity(f, n);
    for &(i, j, a) in ops {
        if n == 0 {
            break;
        }
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        let e =
            Matrix::from_triplets(f, n, n, (0..n).map(|t| (t, t, f.one())).chain([(i, j, f.from_i64(-a))])).unwrap();
        m = m.mul(&e).unwrap();
    }
    m
}

proptest! {
    #[test]
    fn rank_nullity(m in matrix_strategy()) {
        let k = kernel_basis(&m);
        prop_assert_eq!(rank(&m) + k.len(), m.cols());
        for v in &k {
            prop_assert!(m.apply(v).is_empty());
        }
    }

    #[test]
    fn rank_is_transpose_invariant(m in matrix_strategy()) {
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
    }

    #[test]
    fn homology_invariant_under_base_change(
        f in field_strategy(),
        a in dense(3, 4),
        ops in prop::collection::vec((0usize..4, 0usize..4, -2i64..=2), 0..6),
    ) {
        // C_2 (dim 2) -> C_1 (dim 4) -> C_0 (dim 3) with d1 = a and d2 spanning part of ker a.
        let d1 = Matrix::from_dense(f, &a);
        let ker = kernel_basis(&d1);
        let cols: Vec<_> = ker.iter().take(2).cloned().collect();
        let d2 = Matrix::from_columns(f, 4, &cols);
        let n2 = cols.len();
        let c = FiniteChainComplex::new(f, 0, vec![3, 4, n2], [(1, d1.clone()), (2, d2.clone())].into()).unwrap();
        let h = homology_dims(&c);

        // Change basis in C_1 by g: d1' = d1 g^{-1}, d2' = g d2.
        let g = invertible(f, 4, &ops);
        let gi = inverse_of(f, 4, &ops);
        prop_assert!(g.mul(&gi).unwrap() == Matrix::identity(f, 4));
        let d1p = d1.mul(&gi).unwrap();
        let d2p = g.mul(&d2).unwrap();
        let cp = FiniteChainComplex::new(f, 0, vec![3, 4, n2], [(1, d1p), (2, d2p)].into()).unwrap();
        prop_assert_eq!(homology_dims(&cp), h.clone());

        let chi: i64 = h.iter().map(|(p, d)| if p % 2 == 0 { *d as i64 } else { -(*d as i64) }).sum();
        prop_assert_eq!(chi, c.euler_characteristic());
    }
}

#[test]
fn empty_complex_has_no_homology() {
    let c = FiniteChainComplex::new(FieldSpec::prime(2), 0, vec![0], BTreeMap::new()).unwrap();
    assert_eq!(homology_dims(&c), [(0, 0)].into());
}
