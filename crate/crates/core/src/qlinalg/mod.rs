//! Exact sparse linear algebra over ℚ.
//!
//! Everything downstream (Lie bases, homology, inertness tests, cochains)
//! reduces to ranks, kernels and membership tests computed here. Column
//! indices are assigned by callers from the global word order, so pivots and
//! therefore representatives are deterministic.

mod echelon;
mod rational;
mod sparse;

pub use echelon::{kernel_basis, membership, quotient_dims, rref, Echelon, Insertion, SubspaceBasis};
pub use rational::{ParseRationalError, Rational};
pub use sparse::{SparseMatrix, SparseVector};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected ambient dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("subspace vector {index} is not contained in the ambient subspace")]
    NotContained { index: usize },
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    /// Bareiss fraction-free elimination on integer matrices; independent of
    /// the rational echelon code.
    fn bareiss_rank(m: &[Vec<i64>]) -> usize {
        let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let rows = a.len();
        if rows == 0 {
            return 0;
        }
        let cols = a[0].len();
        let mut rank = 0;
        let mut prev = BigInt::from(1);
        for c in 0..cols {
            let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            for r in rank + 1..rows {
                for k in c + 1..cols {
                    let v = (&a[rank][c] * &a[r][k] - &a[r][c] * &a[rank][k]) / &prev;
                    a[r][k] = v;
                }
                a[r][c] = BigInt::zero();
            }
            prev = a[rank][c].clone();
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    #[test]
    fn rref_identity_and_zero() {
        let (b, r) = rref(&SparseMatrix::identity(3));
        assert_eq!(r, 3);
        assert_eq!(b, SubspaceBasis::full(3));
        let (b, r) = rref(&SparseMatrix::zeros(2, 5));
        assert_eq!(r, 0);
        assert!(b.is_empty());
    }

    #[test]
    fn rref_rank_one() {
        let (b, r) = rref(&SparseMatrix::from_ints(&[&[1, 2], &[2, 4]]));
        assert_eq!(r, 1);
        assert_eq!(b.vectors(), &[SparseVector::from_ints(&[1, 2])]);
    }

    #[test]
    fn rref_is_fully_reduced() {
        let m = SparseMatrix::from_ints(&[&[0, 2, 4, 1], &[1, 1, 1, 1], &[1, 3, 5, 2]]);
        let (b, r) = rref(&m);
        assert_eq!(r, 2);
        let pivots = b.pivots();
        assert_eq!(pivots, vec![0, 1]);
        for (k, v) in b.vectors().iter().enumerate() {
            for (l, &p) in pivots.iter().enumerate() {
                assert_eq!(v.get(p), if k == l { q(1) } else { q(0) });
            }
        }
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&SparseMatrix::identity(4)).is_empty());
        assert_eq!(kernel_basis(&SparseMatrix::zeros(2, 3)).dim(), 3);
        let k = kernel_basis(&SparseMatrix::from_ints(&[&[1, 1, 0], &[0, 1, 1]]));
        assert_eq!(k.dim(), 1);
        assert_eq!(k.vectors()[0], SparseVector::from_ints(&[1, -1, 1]));
    }

    #[test]
    fn membership_examples() {
        let b = SubspaceBasis::span(2, [&SparseVector::from_ints(&[1, 2])]);
        assert_eq!(membership(&SparseVector::new(), &b).unwrap(), Some(vec![q(0)]));
        assert_eq!(membership(&b.vectors()[0], &b).unwrap(), Some(vec![q(1)]));
        assert_eq!(
            membership(&SparseVector::from_ints(&[1, 2]), &b).unwrap(),
            Some(vec![q(1)])
        );
        assert_eq!(membership(&SparseVector::from_ints(&[1, 3]), &b).unwrap(), None);
        assert!(matches!(
            membership(&SparseVector::from_ints(&[0, 0, 1]), &b),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn quotient_dim_examples() {
        let amb = SubspaceBasis::full(3);
        assert_eq!(quotient_dims(&amb, &amb).unwrap(), 0);
        assert_eq!(quotient_dims(&amb, &SubspaceBasis::empty(3)).unwrap(), 3);
        let sub = SubspaceBasis::span(3, [&SparseVector::from_ints(&[1, 1, 1])]);
        assert_eq!(quotient_dims(&amb, &sub).unwrap(), 2);
        let line = SubspaceBasis::span(3, [&SparseVector::from_ints(&[1, 0, 0])]);
        assert_eq!(quotient_dims(&line, &sub), Err(LinalgError::NotContained { index: 0 }));
    }

    #[test]
    fn complement_is_canonical() {
        let z = SubspaceBasis::span(
            3,
            [
                &SparseVector::from_ints(&[1, 1, 0]),
                &SparseVector::from_ints(&[0, 1, 1]),
            ],
        );
        let b = SubspaceBasis::span(3, [&SparseVector::from_ints(&[1, 2, 1])]);
        let c = z.complement_of(&b);
        assert_eq!(c.dim(), 1);
        assert!(c.vectors()[0].get(b.pivots()[0]).is_zero());
        assert_eq!(z, c.sum(&b));
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..6, 1usize..7).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..=3, c), r))
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_matrix()) {
            let refs: Vec<&[i64]> = m.iter().map(|r| r.as_slice()).collect();
            let sm = SparseMatrix::from_ints(&refs);
            let (_, rank) = rref(&sm);
            let ker = kernel_basis(&sm);
            prop_assert_eq!(rank + ker.dim(), sm.cols());
            for v in ker.vectors() {
                prop_assert!(sm.mul_vec(v).is_zero());
            }
        }

        #[test]
        fn rank_matches_bareiss(m in small_matrix()) {
            let refs: Vec<&[i64]> = m.iter().map(|r| r.as_slice()).collect();
            let (_, rank) = rref(&SparseMatrix::from_ints(&refs));
            prop_assert_eq!(rank, bareiss_rank(&m));
        }

        #[test]
        fn rref_idempotent(m in small_matrix()) {
            let refs: Vec<&[i64]> = m.iter().map(|r| r.as_slice()).collect();
            let (b, _) = rref(&SparseMatrix::from_ints(&refs));
            let (b2, _) = rref(&b.to_matrix());
            prop_assert_eq!(b, b2);
        }
    }
}
