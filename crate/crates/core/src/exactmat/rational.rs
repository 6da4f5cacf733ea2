use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{ExactError, ExactMatrix};

/// Dense matrix over Q. Entries are kept in canonical form by `BigRational`
/// (reduced, positive denominator).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<BigRational>) -> Result<Self, ExactError> {
        if entries.len() != rows * cols {
            return Err(ExactError::Shape(format!(
                "{} entries for a {}x{} matrix",
                entries.len(),
                rows,
                cols
            )));
        }
        Ok(RationalMatrix { rows, cols, entries })
    }

    pub fn from_columns(rows: usize, columns: &[Vec<BigRational>]) -> Result<Self, ExactError> {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(ExactError::Shape(format!("column {} has length {}", j, col.len())));
            }
            for (i, v) in col.iter().enumerate() {
                m.entries[i * cols + j] = v.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigRational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigRational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigRational>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entries[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Result<Vec<BigRational>, ExactError> {
        if v.len() != self.cols {
            return Err(ExactError::Shape(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn mul_int_vec(&self, v: &[BigInt]) -> Result<Vec<BigRational>, ExactError> {
        let v: Vec<BigRational> = v.iter().cloned().map(BigRational::from_integer).collect();
        self.mul_vec(&v)
    }

    /// Least common multiple of all entry denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.entries
            .iter()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()))
    }

    /// `self * d` as an integer matrix; `d` must clear every denominator.
    pub fn to_integer_scaled(&self, d: &BigInt) -> Result<ExactMatrix, ExactError> {
        let entries = self
            .entries
            .iter()
            .map(|e| {
                let s = e * BigRational::from_integer(d.clone());
                if s.is_integer() {
                    Ok(s.to_integer())
                } else {
                    Err(ExactError::NotIntegral)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        ExactMatrix::from_entries(self.rows, self.cols, entries)
    }

    /// Reduced row echelon form; returns the pivot columns.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for k in 0..self.cols {
                    self.entries.swap(p * self.cols + k, r * self.cols + k);
                }
            }
            let inv = self.get(r, c).recip();
            for k in c..self.cols {
                let v = self.get(r, k) * &inv;
                self.set(r, k, v);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                for k in c..self.cols {
                    let v = self.get(i, k) - &f * self.get(r, k);
                    self.set(i, k, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// Basis of `{x : self * x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<BigRational>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![BigRational::zero(); self.cols];
                x[f] = BigRational::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    x[pc] = -m.get(r, f).clone();
                }
                x
            })
            .collect()
    }

    pub fn det(&self) -> Result<BigRational, ExactError> {
        if self.rows != self.cols {
            return Err(ExactError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(BigRational::zero());
            };
            if p != c {
                for k in 0..n {
                    m.entries.swap(p * n + k, c * n + k);
                }
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det *= &pivot;
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) / &pivot;
                for k in c..n {
                    let v = m.get(i, k) - &f * m.get(c, k);
                    m.set(i, k, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<RationalMatrix, ExactError> {
        if self.rows != self.cols {
            return Err(ExactError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut aug = RationalMatrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, BigRational::one());
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(ExactError::Singular);
        }
        let mut inv = RationalMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c).clone());
            }
        }
        Ok(inv)
    }

    /// Solves `self * x = rhs` for square nonsingular `self`.
    pub fn solve(&self, rhs: &[BigRational]) -> Result<Vec<BigRational>, ExactError> {
        if self.rows != self.cols {
            return Err(ExactError::NotSquare(self.rows, self.cols));
        }
        if rhs.len() != self.rows {
            return Err(ExactError::Shape(format!(
                "right-hand side of length {} for {} rows",
                rhs.len(),
                self.rows
            )));
        }
        let n = self.rows;
        let mut aug = RationalMatrix::zeros(n, n + 1);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n, rhs[r].clone());
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(ExactError::Singular);
        }
        Ok((0..n).map(|r| aug.get(r, n).clone()).collect())
    }
}

impl From<&ExactMatrix> for RationalMatrix {
    fn from(m: &ExactMatrix) -> Self {
        RationalMatrix {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().iter().cloned().map(BigRational::from_integer).collect(),
        }
    }
}

/// Exact rank of a family of rational vectors (all of the same length).
pub fn rank_of_vectors(vectors: &[Vec<BigRational>]) -> Result<usize, ExactError> {
    let Some(first) = vectors.first() else {
        return Ok(0);
    };
    Ok(RationalMatrix::from_columns(first.len(), vectors)?.rank())
}
