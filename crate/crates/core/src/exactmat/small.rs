//! Machine-word elimination kernels with checked arithmetic.
//!
//! Every routine returns `None` as soon as an intermediate value would leave
//! the range of `T`; callers then retry with arbitrary precision. A `Some`
//! answer is always exact.

use num_traits::{PrimInt, Signed};

#[inline]
fn checked_submul<T: PrimInt + Signed>(x: T, q: T, y: T) -> Option<T> {
    let r = x.checked_sub(&q.checked_mul(&y)?)?;
    if r == T::min_value() {
        None
    } else {
        Some(r)
    }
}

/// Decides whether the columns of the row-major `rows x cols` matrix `m`
/// generate `Z^rows`. The buffer is destroyed.
///
/// Row by row, Euclidean column steps collapse the row onto its diagonal
/// column. A pivot of absolute value one lets that column absorb the row, so
/// the problem shrinks to the remaining rows and columns; any other pivot
/// means the lattice has index greater than one.
pub fn columns_generate_unit_lattice<T: PrimInt + Signed>(rows: usize, cols: usize, m: &mut [T]) -> Option<bool> {
    debug_assert_eq!(m.len(), rows * cols);
    if cols < rows {
        return Some(false);
    }
    if m.iter().any(|&v| v == T::min_value()) {
        return None;
    }
    let swap_cols = |m: &mut [T], a: usize, b: usize, from: usize| {
        for i in from..rows {
            m.swap(i * cols + a, i * cols + b);
        }
    };
    for r in 0..rows {
        for c in r + 1..cols {
            loop {
                let b = m[r * cols + c];
                if b.is_zero() {
                    break;
                }
                let a = m[r * cols + r];
                if a.is_zero() {
                    swap_cols(m, r, c, r);
                    break;
                }
                let q = b / a;
                for i in r..rows {
                    let v = checked_submul(m[i * cols + c], q, m[i * cols + r])?;
                    m[i * cols + c] = v;
                }
                if m[r * cols + c].is_zero() {
                    break;
                }
                swap_cols(m, r, c, r);
            }
        }
        if m[r * cols + r].abs() != T::one() {
            return Some(false);
        }
    }
    Some(true)
}

/// `gcd` of a slice of machine integers (non-negative result).
pub fn gcd_slice<T: PrimInt + Signed>(values: &[T]) -> Option<T> {
    let mut g = T::zero();
    for &v in values {
        if v == T::min_value() {
            return None;
        }
        let mut a = g;
        let mut b = v.abs();
        while !b.is_zero() {
            let t = a % b;
            a = b;
            b = t;
        }
        g = a;
    }
    Some(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_index_two() {
        let mut id = vec![1i64, 0, 0, 1];
        assert_eq!(columns_generate_unit_lattice(2, 2, &mut id), Some(true));
        let mut twice = vec![2i64, 0, 0, 2];
        assert_eq!(columns_generate_unit_lattice(2, 2, &mut twice), Some(false));
        let mut wide = vec![1i64, 0, 2, 0, 1, 3];
        assert_eq!(columns_generate_unit_lattice(2, 3, &mut wide), Some(true));
    }

    #[test]
    fn coprime_row() {
        let mut m = vec![6i64, 10, 15];
        assert_eq!(columns_generate_unit_lattice(1, 3, &mut m), Some(true));
        let mut m = vec![6i64, 10, 14];
        assert_eq!(columns_generate_unit_lattice(1, 3, &mut m), Some(false));
    }

    #[test]
    fn too_few_columns() {
        let mut m = vec![1i64, 0];
        assert_eq!(columns_generate_unit_lattice(2, 1, &mut m), Some(false));
    }

    #[test]
    fn overflow_is_reported() {
        let big = i64::MAX / 2;
        let mut m = vec![3, big, big - 1, 7, 11, 5];
        // either answers exactly or declines; never panics
        let _ = columns_generate_unit_lattice(2, 3, &mut m);
        let mut m = vec![i64::MIN, 1];
        assert_eq!(columns_generate_unit_lattice(1, 2, &mut m), None);
    }

    #[test]
    fn gcd_of_slice() {
        assert_eq!(gcd_slice(&[12i64, -18, 30]), Some(6));
        assert_eq!(gcd_slice::<i64>(&[]), Some(0));
    }
}
