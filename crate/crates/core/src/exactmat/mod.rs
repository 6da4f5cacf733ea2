//! Exact integer and rational matrix algebra.
//!
//! Everything here is exact: determinants by fraction-free elimination,
//! Hermite and Smith normal forms over `Z`, and rational solves. Machine-word
//! fast paths are checked and fall back to `BigInt` on overflow.

mod hnf;
mod matrix;
mod rational;
pub mod small;
mod snf;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub use hnf::{hnf, is_unimodular, is_unimodular_i128, lattice_index, HermiteForm};
pub use matrix::ExactMatrix;
pub use rational::{rank_of_vectors, RationalMatrix};
pub use snf::{smith_form, snf, SmithForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("value is not integral")]
    NotIntegral,
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn det(a: &ExactMatrix) -> Result<BigInt, ExactError> {
    if !a.is_square() {
        return Err(ExactError::NotSquare(a.rows(), a.cols()));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m = a.clone();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m.get(k, k).is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                return Ok(BigInt::zero());
            };
            m.swap_rows(k, p);
            negate = !negate;
        }
        let pivot = m.get(k, k).clone();
        for i in k + 1..n {
            let lead = m.get(i, k).clone();
            for j in k + 1..n {
                let v = (m.get(i, j) * &pivot - &lead * m.get(k, j)) / &prev;
                m.set(i, j, v);
            }
            m.set(i, k, BigInt::zero());
        }
        prev = pivot;
    }
    let d = m.get(n - 1, n - 1).clone();
    Ok(if negate { -d } else { d })
}

/// Solves `b * x = v` over `Q` and returns `x` if it is integral, `None`
/// otherwise. `b` must be square and nonsingular.
pub fn solve_integral(b: &ExactMatrix, v: &[BigInt]) -> Result<Option<Vec<BigInt>>, ExactError> {
    if !b.is_square() {
        return Err(ExactError::NotSquare(b.rows(), b.cols()));
    }
    let rhs: Vec<BigRational> = v.iter().cloned().map(BigRational::from_integer).collect();
    let x = RationalMatrix::from(b).solve(&rhs)?;
    Ok(integral(&x))
}

/// `Some` integer vector when every coordinate is an integer.
pub fn integral(x: &[BigRational]) -> Option<Vec<BigInt>> {
    x.iter()
        .map(|q| if q.is_integer() { Some(q.to_integer()) } else { None })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: usize, cols: usize, e: &[i64]) -> ExactMatrix {
        ExactMatrix::from_i64(rows, cols, e).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn cofactor_det(m: &ExactMatrix) -> BigInt {
        let n = m.rows();
        if n == 0 {
            return BigInt::one();
        }
        if n == 1 {
            return m.get(0, 0).clone();
        }
        let mut total = BigInt::zero();
        for c in 0..n {
            let minor: Vec<BigInt> = (1..n)
                .flat_map(|r| (0..n).filter(move |&k| k != c).map(move |k| (r, k)))
                .map(|(r, k)| m.get(r, k).clone())
                .collect();
            let minor = ExactMatrix::from_entries(n - 1, n - 1, minor).unwrap();
            let term = m.get(0, c) * cofactor_det(&minor);
            if c % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    #[test]
    fn hnf_examples() {
        let id = ExactMatrix::identity(3);
        let f = hnf(&id);
        assert_eq!(f.h, id);
        assert_eq!(f.u, id);

        let two = mat(2, 2, &[2, 0, 0, 2]);
        assert_eq!(hnf(&two).h, two);

        // gcd steps by hand: pivots 1, 1 and the third column cleared
        let a = mat(2, 3, &[1, 0, 2, 0, 1, 3]);
        let f = hnf(&a);
        assert_eq!(f.h, mat(2, 3, &[1, 0, 0, 0, 1, 0]));
        assert_eq!(f.pivot_rows, vec![0, 1]);
    }

    #[test]
    fn hnf_reduces_left_of_pivot() {
        let a = mat(2, 2, &[3, 1, 7, 5]);
        let f = hnf(&a);
        // det 8; lower triangular, entry left of the second pivot in [0, 8)
        assert_eq!(f.h.get(0, 1), &BigInt::zero());
        assert_eq!(f.h.get(0, 0), &BigInt::one());
        assert_eq!(f.h.get(1, 1), &BigInt::from(8));
        assert!(f.h.get(1, 0) >= &BigInt::zero() && f.h.get(1, 0) < &BigInt::from(8));
        assert_eq!(a.mul(&f.u).unwrap(), f.h);
    }

    #[test]
    fn zero_columns_move_right() {
        let a = mat(2, 3, &[0, 2, 0, 0, 1, 3]);
        let f = hnf(&a);
        assert_eq!(f.rank(), 2);
        assert!(f.h.column(2).iter().all(Zero::is_zero));
    }

    #[test]
    fn snf_examples() {
        assert_eq!(snf(&mat(2, 2, &[2, 0, 0, 3])), ints(&[1, 6]));
        assert_eq!(snf(&ExactMatrix::identity(4)), ints(&[1, 1, 1, 1]));
        assert_eq!(snf(&mat(2, 2, &[2, 0, 0, 2])), ints(&[2, 2]));
    }

    #[test]
    fn det_examples() {
        assert_eq!(det(&ExactMatrix::identity(5)).unwrap(), BigInt::one());
        assert_eq!(det(&mat(2, 2, &[2, 0, 0, 3])).unwrap(), BigInt::from(6));
        assert_eq!(det(&mat(2, 3, &[1, 2, 3, 4, 5, 6])), Err(ExactError::NotSquare(2, 3)));
        // a zero leading pivot forces a row swap
        assert_eq!(det(&mat(3, 3, &[0, 1, 0, 1, 0, 0, 0, 0, 1])).unwrap(), BigInt::from(-1));
    }

    #[test]
    fn unimodular_examples() {
        assert!(is_unimodular(&ExactMatrix::identity(4)));
        assert!(!is_unimodular(&mat(2, 2, &[2, 0, 0, 2])));
        assert!(is_unimodular(&mat(2, 3, &[1, 0, 2, 0, 1, 3])));
        assert!(!is_unimodular(&mat(2, 1, &[1, 0])));
    }

    #[test]
    fn unimodular_big_entries_fall_back() {
        let big: BigInt = BigInt::from(10).pow(30);
        let a = ExactMatrix::from_entries(1, 2, vec![big.clone(), big + 1]).unwrap();
        assert!(is_unimodular(&a));
    }

    #[test]
    fn solve_examples() {
        assert_eq!(
            solve_integral(&ExactMatrix::identity(2), &ints(&[3, 5])).unwrap(),
            Some(ints(&[3, 5]))
        );
        let two = mat(2, 2, &[2, 0, 0, 2]);
        assert_eq!(solve_integral(&two, &ints(&[2, 4])).unwrap(), Some(ints(&[1, 2])));
        assert_eq!(solve_integral(&two, &ints(&[1, 0])).unwrap(), None);
        assert_eq!(
            solve_integral(&mat(2, 2, &[1, 2, 2, 4]), &ints(&[1, 1])),
            Err(ExactError::Singular)
        );
    }

    #[test]
    fn nullspace_is_orthogonal() {
        let q = |v: i64| BigRational::from_integer(BigInt::from(v));
        let a = RationalMatrix::from_entries(2, 4, [1, 2, 0, -1, 0, 0, 1, 3].iter().map(|&v| q(v)).collect()).unwrap();
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for x in &ns {
            assert!(a.mul_vec(x).unwrap().iter().all(Zero::is_zero));
        }
        assert_eq!(rank_of_vectors(&ns).unwrap(), 2);
    }

    #[test]
    fn json_is_decimal_strings() {
        let a = mat(2, 2, &[1, -2, 3, 4]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"[["1","-2"],["3","4"]]"#);
        let back: ExactMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
    }

    fn matrix_strategy(max_rows: usize, max_cols: usize, bound: i64) -> impl Strategy<Value = ExactMatrix> {
        (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(-bound..=bound, r * c).prop_map(move |e| mat(r, c, &e))
        })
    }

    proptest! {
        #[test]
        fn hnf_is_unimodular_transform(a in matrix_strategy(4, 5, 50)) {
            let f = hnf(&a);
            prop_assert_eq!(a.mul(&f.u).unwrap(), f.h.clone());
            let d = det(&f.u).unwrap();
            prop_assert!(d == BigInt::one() || d == -BigInt::one());
            prop_assert_eq!(hnf(&f.h).h, f.h);
        }

        #[test]
        fn bareiss_matches_cofactor(a in proptest::collection::vec(-10i64..=10, 25)) {
            let m = mat(5, 5, &a);
            prop_assert_eq!(det(&m).unwrap(), cofactor_det(&m));
        }

        #[test]
        fn snf_product_is_abs_det(a in proptest::collection::vec(-20i64..=20, 9)) {
            let m = mat(3, 3, &a);
            let d = det(&m).unwrap();
            let divisors = snf(&m);
            for w in divisors.windows(2) {
                prop_assert!(num_integer::Integer::is_multiple_of(&w[1], &w[0]));
            }
            if !d.is_zero() {
                let prod = divisors.iter().fold(BigInt::one(), |acc, x| acc * x);
                prop_assert_eq!(prod, num_traits::Signed::abs(&d));
            }
        }

        #[test]
        fn fast_path_agrees_with_hnf(a in matrix_strategy(3, 5, 30)) {
            prop_assert_eq!(is_unimodular(&a), a.cols() >= a.rows() && hnf(&a).pivot_block_is_identity());
        }

        #[test]
        fn i128_entry_point_agrees(a in matrix_strategy(3, 5, 1_000_000_000_000)) {
            let small: Vec<i128> = a.entries().iter().map(|v| i128::try_from(v.clone()).unwrap()).collect();
            prop_assert_eq!(is_unimodular_i128(a.rows(), a.cols(), &small), is_unimodular(&a));
        }
    }
}
