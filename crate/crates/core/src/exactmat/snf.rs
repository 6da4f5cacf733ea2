use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::ExactMatrix;

/// Smith normal form with transforms: `p * a * q` is diagonal with entries
/// `diagonal[0] | diagonal[1] | ...` followed by zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub p: ExactMatrix,
    pub q: ExactMatrix,
}

/// Elementary divisors of `a`: the positive diagonal of its Smith form.
/// The zero matrix yields an empty list.
pub fn snf(a: &ExactMatrix) -> Vec<BigInt> {
    smith_form(a).diagonal
}

pub fn smith_form(a: &ExactMatrix) -> SmithForm {
    let (rows, cols) = (a.rows(), a.cols());
    let mut m = a.clone();
    let mut p = ExactMatrix::identity(rows);
    let mut q = ExactMatrix::identity(cols);
    let mut diagonal = Vec::new();

    for t in 0..rows.min(cols) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let v = m.get(i, j);
                if v.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| v.abs() < m.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else {
            break;
        };
        m.swap_rows(t, bi);
        p.swap_rows(t, bi);
        m.swap_cols(t, bj);
        q.swap_cols(t, bj);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                while !m.get(i, t).is_zero() {
                    let f = m.get(i, t) / m.get(t, t);
                    m.sub_row_multiple(i, t, &f);
                    p.sub_row_multiple(i, t, &f);
                    if !m.get(i, t).is_zero() {
                        m.swap_rows(t, i);
                        p.swap_rows(t, i);
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                while !m.get(t, j).is_zero() {
                    let f = m.get(t, j) / m.get(t, t);
                    m.sub_col_multiple(j, t, &f);
                    q.sub_col_multiple(j, t, &f);
                    if !m.get(t, j).is_zero() {
                        m.swap_cols(t, j);
                        q.swap_cols(t, j);
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // Divisibility: fold a offending row into row t and go again.
            let pivot = m.get(t, t).clone();
            let offending = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !m.get(i, j).is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    let minus_one = BigInt::from(-1);
                    m.sub_row_multiple(t, i, &minus_one);
                    p.sub_row_multiple(t, i, &minus_one);
                }
                None => break,
            }
        }
        if m.get(t, t).is_negative() {
            m.negate_row(t);
            p.negate_row(t);
        }
        diagonal.push(m.get(t, t).clone());
    }

    SmithForm { diagonal, p, q }
}
