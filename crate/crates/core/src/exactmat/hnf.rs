use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ExactMatrix;

/// Column-style Hermite normal form `H = A * U`.
///
/// Convention: `H` is in lower column-echelon form. Column `j < rank` has its
/// first nonzero entry (the pivot) at row `pivot_rows[j]`, pivots are
/// positive, `pivot_rows` is strictly increasing, and every entry to the left
/// of a pivot in its row lies in `[0, pivot)`. Columns `rank..m` are zero,
/// which is where zero columns of `A` end up. `U` is `m x m` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteForm {
    pub h: ExactMatrix,
    pub u: ExactMatrix,
    pub pivot_rows: Vec<usize>,
}

impl HermiteForm {
    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }

    /// Pivot values in column order.
    pub fn pivots(&self) -> Vec<BigInt> {
        self.pivot_rows
            .iter()
            .enumerate()
            .map(|(j, &r)| self.h.get(r, j).clone())
            .collect()
    }

    /// True when the pivot block is the identity, i.e. the columns of `A`
    /// generate all of `Z^n`.
    pub fn pivot_block_is_identity(&self) -> bool {
        let n = self.h.rows();
        self.rank() == n && self.pivot_rows.iter().enumerate().all(|(j, &r)| r == j && self.h.get(r, j).is_one())
    }
}

/// Computes the Hermite normal form of `a` by unimodular column operations.
pub fn hnf(a: &ExactMatrix) -> HermiteForm {
    let (n, m) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = ExactMatrix::identity(m);
    let mut pivot_rows = Vec::new();
    let mut k = 0;

    for r in 0..n {
        if k == m {
            break;
        }
        for j in k + 1..m {
            if h.get(r, j).is_zero() {
                continue;
            }
            let a_kk = h.get(r, k).clone();
            let b = h.get(r, j).clone();
            if a_kk.is_zero() {
                h.swap_cols(k, j);
                u.swap_cols(k, j);
                continue;
            }
            if b.is_multiple_of(&a_kk) {
                let q = &b / &a_kk;
                h.sub_col_multiple(j, k, &q);
                u.sub_col_multiple(j, k, &q);
                continue;
            }
            // [x -b/g; y a/g] has determinant (x a + y b) / g = 1.
            let eg = a_kk.extended_gcd(&b);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let bu = -(&b / &g);
            let av = &a_kk / &g;
            h.combine_cols(k, j, &x, &y, &bu, &av);
            u.combine_cols(k, j, &x, &y, &bu, &av);
        }
        if h.get(r, k).is_zero() {
            continue;
        }
        if h.get(r, k).is_negative() {
            h.negate_col(k);
            u.negate_col(k);
        }
        let pivot = h.get(r, k).clone();
        for c in 0..k {
            let q = h.get(r, c).div_floor(&pivot);
            if !q.is_zero() {
                h.sub_col_multiple(c, k, &q);
                u.sub_col_multiple(c, k, &q);
            }
        }
        pivot_rows.push(r);
        k += 1;
    }

    HermiteForm { h, u, pivot_rows }
}

/// Decides whether the columns of an `n x m` integer matrix generate `Z^n`.
///
/// Runs a checked machine-word elimination first and falls back to the
/// arbitrary-precision Hermite form if any intermediate overflows.
pub fn is_unimodular(a: &ExactMatrix) -> bool {
    let (n, m) = (a.rows(), a.cols());
    if m < n {
        return false;
    }
    if n == 0 {
        return true;
    }
    if let Some(entries) = to_machine::<i64>(a) {
        let mut buf = entries;
        if let Some(result) = super::small::columns_generate_unit_lattice(n, m, &mut buf) {
            return result;
        }
    }
    if let Some(entries) = to_machine::<i128>(a) {
        let mut buf = entries;
        if let Some(result) = super::small::columns_generate_unit_lattice(n, m, &mut buf) {
            return result;
        }
    }
    hnf(a).pivot_block_is_identity()
}

/// [`is_unimodular`] for a row-major `n x m` matrix of `i128` entries,
/// trying `i64` arithmetic first.
pub fn is_unimodular_i128(n: usize, m: usize, entries: &[i128]) -> bool {
    assert_eq!(entries.len(), n * m, "shape mismatch");
    if m < n {
        return false;
    }
    if n == 0 {
        return true;
    }
    let narrow: Option<Vec<i64>> = entries.iter().map(|&v| i64::try_from(v).ok()).collect();
    if let Some(mut buf) = narrow {
        if let Some(result) = super::small::columns_generate_unit_lattice(n, m, &mut buf) {
            return result;
        }
    }
    let mut buf = entries.to_vec();
    if let Some(result) = super::small::columns_generate_unit_lattice(n, m, &mut buf) {
        return result;
    }
    let big = entries.iter().map(|&v| BigInt::from(v)).collect();
    hnf(&ExactMatrix::from_entries(n, m, big).expect("shape checked")).pivot_block_is_identity()
}

fn to_machine<T: TryFrom<BigInt>>(a: &ExactMatrix) -> Option<Vec<T>> {
    a.entries().iter().map(|e| T::try_from(e.clone()).ok()).collect()
}

/// Returns `|det|` of the lattice generated by the columns when it has full
/// rank, from the product of the Hermite pivots.
pub fn lattice_index(a: &ExactMatrix) -> Option<BigInt> {
    let form = hnf(a);
    if form.rank() < a.rows() {
        return None;
    }
    Some(form.pivots().iter().fold(BigInt::one(), |acc, p| acc * p))
}
