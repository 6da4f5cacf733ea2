//! Full-rank lattices with exact rational bases.
//!
//! A lattice is stored by a nonsingular basis matrix whose columns are the
//! basis vectors. Enumeration works in coordinates: every lattice vector is
//! `B x` for an integer vector `x`, and the window `[0, B)^n` pulls back to a
//! parallelepiped in coordinate space.

mod json;

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactmat::{is_unimodular, rank_of_vectors, ExactError, ExactMatrix, RationalMatrix};
use crate::numeric::{ceil, floor, half_power_bounds, int, sqrt_lower, to_f64};

pub use json::LatticeJson;

/// Largest predicted point count accepted by window enumeration.
pub const WINDOW_GUARD: f64 = 1e7;
/// Largest coordinate box visited by any enumeration.
pub const BOX_GUARD: f64 = 1e8;

const SQRT_BITS: u32 = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("basis is singular")]
    Singular,
    #[error("vector {0} is not in the lattice")]
    NotInLattice(usize),
    #[error("desk-scale guard exceeded: predicted {predicted:.3e} > {limit:.0e}")]
    Guard { predicted: f64, limit: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("spanning set has rank {got}, expected {expected}")]
    Rank { expected: usize, got: usize },
    #[error("entries too large for machine-word enumeration")]
    Overflow,
    #[error("{0}")]
    Invalid(String),
}

/// The half-open cube `[0, B)^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    b: BigRational,
    n: usize,
}

impl Window {
    pub fn new(b: BigRational, n: usize) -> Result<Self, LatticeError> {
        if !b.is_positive() {
            return Err(LatticeError::Invalid("window size must be positive".into()));
        }
        Ok(Window { b, n })
    }

    pub fn side(&self) -> &BigRational {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        v.len() == self.n && v.iter().all(|x| !x.is_negative() && x < &self.b)
    }
}

/// A lattice point as integer coordinates together with its vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePoint {
    pub coords: Vec<i64>,
    pub vector: Vec<BigRational>,
}

#[derive(Debug)]
pub struct LatticeBasis {
    n: usize,
    basis: RationalMatrix,
    inverse: RationalMatrix,
    det: BigRational,
    denom: BigInt,
    scaled: ExactMatrix,
    scaled_small: Option<Vec<i128>>,
    min_norm_sq: OnceLock<Result<BigRational, LatticeError>>,
}

impl Clone for LatticeBasis {
    fn clone(&self) -> Self {
        let cell = OnceLock::new();
        if let Some(v) = self.min_norm_sq.get() {
            let _ = cell.set(v.clone());
        }
        LatticeBasis {
            n: self.n,
            basis: self.basis.clone(),
            inverse: self.inverse.clone(),
            det: self.det.clone(),
            denom: self.denom.clone(),
            scaled: self.scaled.clone(),
            scaled_small: self.scaled_small.clone(),
            min_norm_sq: cell,
        }
    }
}

impl PartialEq for LatticeBasis {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
    }
}

impl LatticeBasis {
    /// Builds a lattice from a square nonsingular matrix whose columns are the
    /// basis vectors.
    pub fn new(basis: RationalMatrix) -> Result<Self, LatticeError> {
        if basis.rows() != basis.cols() {
            return Err(ExactError::NotSquare(basis.rows(), basis.cols()).into());
        }
        let n = basis.rows();
        if n == 0 {
            return Err(LatticeError::Invalid("dimension must be at least 1".into()));
        }
        let det = basis.det()?.abs();
        if det.is_zero() {
            return Err(LatticeError::Singular);
        }
        let inverse = basis.inverse()?;
        let denom = basis.common_denominator();
        let scaled = basis.to_integer_scaled(&denom)?;
        let limit = BigInt::one() << 62;
        let scaled_small = scaled
            .entries()
            .iter()
            .map(|v| if v.abs() < limit { v.to_i128() } else { None })
            .collect::<Option<Vec<_>>>();
        Ok(LatticeBasis {
            n,
            basis,
            inverse,
            det,
            denom,
            scaled,
            scaled_small,
            min_norm_sq: OnceLock::new(),
        })
    }

    pub fn from_columns(columns: &[Vec<BigRational>]) -> Result<Self, LatticeError> {
        let n = columns.len();
        Self::new(RationalMatrix::from_columns(n, columns)?)
    }

    pub fn from_integer_columns(columns: &[Vec<i64>]) -> Result<Self, LatticeError> {
        let cols: Vec<Vec<BigRational>> = columns.iter().map(|c| c.iter().map(|&v| int(v)).collect()).collect();
        Self::from_columns(&cols)
    }

    /// `Z^n`.
    pub fn integer(n: usize) -> Self {
        Self::new(RationalMatrix::identity(n)).expect("identity is a basis")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &RationalMatrix {
        &self.basis
    }

    pub fn inverse(&self) -> &RationalMatrix {
        &self.inverse
    }

    pub fn det(&self) -> &BigRational {
        &self.det
    }

    /// Smallest `D > 0` with `D * basis` integral.
    pub fn denominator(&self) -> &BigInt {
        &self.denom
    }

    /// `D * basis` as an integer matrix.
    pub fn scaled_basis(&self) -> &ExactMatrix {
        &self.scaled
    }

    pub fn scale(&self, c: &BigRational) -> Result<Self, LatticeError> {
        Self::new(self.basis.scale(c))
    }

    /// `B x` for integer coordinates `x`.
    pub fn point(&self, coords: &[i64]) -> Vec<BigRational> {
        let x: Vec<BigInt> = coords.iter().map(|&c| BigInt::from(c)).collect();
        self.basis.mul_int_vec(&x).expect("dimension matches")
    }

    /// Integer coordinates of `v`, or `None` when `v` is not a lattice vector.
    pub fn coordinates(&self, v: &[BigRational]) -> Result<Option<Vec<BigInt>>, LatticeError> {
        let x = self.inverse.mul_vec(v)?;
        Ok(crate::exactmat::integral(&x))
    }

    fn small(&self) -> Result<&[i128], LatticeError> {
        self.scaled_small.as_deref().ok_or(LatticeError::Overflow)
    }

    /// `D * basis` as row-major `i128` entries when every entry is below `2^62`.
    pub fn scaled_small(&self) -> Option<&[i128]> {
        self.scaled_small.as_deref()
    }

    /// Exact squared length of a shortest nonzero vector.
    ///
    /// Any vector no longer than the shortest basis vector has coordinates
    /// `|x_i| <= r * |row_i(B^-1)|`; that box is searched exhaustively.
    pub fn min_norm_sq(&self) -> Result<&BigRational, LatticeError> {
        self.min_norm_sq
            .get_or_init(|| self.compute_min_norm_sq())
            .as_ref()
            .map_err(Clone::clone)
    }

    fn compute_min_norm_sq(&self) -> Result<BigRational, LatticeError> {
        let n = self.n;
        let col_sq = |c: usize| -> BigRational { self.basis.column(c).iter().map(|v| v * v).sum() };
        let r_sq = (0..n).map(col_sq).min().expect("n >= 1");
        let mut bounds = Vec::with_capacity(n);
        for i in 0..n {
            let row_sq: BigRational = self.inverse.row(i).iter().map(|v| v * v).sum();
            let k = floor(&(&r_sq * row_sq)).sqrt();
            bounds.push(k.to_i64().ok_or(LatticeError::Overflow)?);
        }
        let size: f64 = bounds.iter().map(|&k| 2.0 * k as f64 + 1.0).product();
        if size > BOX_GUARD {
            return Err(LatticeError::Guard { predicted: size, limit: BOX_GUARD });
        }
        let m = self.small()?;
        let lo: Vec<i64> = bounds.iter().map(|&k| -k).collect();
        let mut best: Option<i128> = None;
        let mut overflow = false;
        for_each_in_box(n, m, &lo, &bounds, |x, v| {
            if x.iter().all(|&c| c == 0) {
                return;
            }
            match norm_sq(v) {
                Some(s) => {
                    if best.is_none_or(|b| s < b) {
                        best = Some(s);
                    }
                }
                None => overflow = true,
            }
        })?;
        if overflow {
            return Err(LatticeError::Overflow);
        }
        let best = best.expect("basis vectors lie in the box");
        let d = BigRational::from_integer(self.denom.clone());
        Ok(BigRational::from_integer(BigInt::from(best)) / (&d * &d))
    }

    /// Closed-form upper bound `1/2 n^(n/2+1) det / lambda_1^(n-1)`, rounded up.
    pub fn covering_radius_upper(&self) -> Result<BigRational, LatticeError> {
        let n = self.n as u32;
        let nq = int(n as i64);
        let (_, n_pow_hi) = half_power_bounds(&nq, n, SQRT_BITS);
        let (lambda_pow_lo, _) = half_power_bounds(self.min_norm_sq()?, n - 1, SQRT_BITS);
        if lambda_pow_lo.is_zero() {
            return Err(LatticeError::Overflow);
        }
        Ok(n_pow_hi * nq * &self.det / (int(2) * lambda_pow_lo))
    }

    /// Lower estimate of the covering radius: the largest distance to the
    /// lattice over the grid `B (k / res)`, `k in {0..res-1}^n`.
    ///
    /// Only points of the grid are examined, so the result never exceeds the
    /// true covering radius and approaches it as `res` grows.
    pub fn covering_radius_estimate(&self, res: u32) -> Result<BigRational, LatticeError> {
        let n = self.n;
        if n > 3 {
            return Err(LatticeError::Unsupported(format!("grid estimate needs n <= 3, got {n}")));
        }
        if res == 0 {
            return Err(LatticeError::Invalid("grid resolution must be positive".into()));
        }
        let m = self.small()?;
        // Nearest-point candidates: |x_i - t_i| <= nu * |row_i(B^-1)|, with
        // nu <= 1/2 sum |b_i| by rounding coordinates.
        let nu: f64 = 0.5
            * (0..n)
                .map(|c| self.basis.column(c).iter().map(|v| to_f64(v).powi(2)).sum::<f64>().sqrt())
                .sum::<f64>();
        let reach: Vec<i64> = (0..n)
            .map(|i| {
                let row: f64 = self.inverse.row(i).iter().map(|v| to_f64(v).powi(2)).sum::<f64>().sqrt();
                (nu * row * (1.0 + 1e-9)).ceil() as i64 + 1
            })
            .collect();
        let points: f64 = (res as f64).powi(n as i32) * reach.iter().map(|&k| 2.0 * k as f64 + 2.0).product::<f64>();
        if points > BOX_GUARD * 10.0 {
            return Err(LatticeError::Guard { predicted: points, limit: BOX_GUARD * 10.0 });
        }
        let res_i = res as i128;
        let grid_hi = vec![res as i64 - 1; n];
        let grid_lo = vec![0i64; n];
        let mut worst: i128 = 0;
        let mut diff = vec![0i128; n];
        let mut overflow = false;
        let cand_lo: Vec<i64> = reach.iter().map(|&r| -r).collect();
        let cand_hi: Vec<i64> = reach.iter().map(|&r| r + 1).collect();
        for_each_in_box(n, m, &grid_lo, &grid_hi, |k, _| {
            let mut nearest: Option<i128> = None;
            let _ = for_each_coords(&cand_lo, &cand_hi, |x| {
                // res * D * (B(k/res) - B x) = M (k - res x)
                for (i, d) in diff.iter_mut().enumerate() {
                    let mut acc: i128 = 0;
                    for j in 0..n {
                        let t = k[j] as i128 - res_i * x[j] as i128;
                        acc += m[i * n + j] * t;
                    }
                    *d = acc;
                }
                match norm_sq(&diff) {
                    Some(s) => {
                        if nearest.is_none_or(|b| s < b) {
                            nearest = Some(s);
                        }
                    }
                    None => overflow = true,
                }
            });
            if let Some(s) = nearest {
                worst = worst.max(s);
            }
        })?;
        if overflow {
            return Err(LatticeError::Overflow);
        }
        let scale = BigInt::from(res) * &self.denom;
        let root = sqrt_lower(&BigRational::from_integer(BigInt::from(worst)), SQRT_BITS);
        Ok(root / BigRational::from_integer(scale))
    }

    /// Inclusive coordinate box covering the preimage of `[0, B)^n`.
    pub fn window_box(&self, w: &Window) -> Result<(Vec<i64>, Vec<i64>), LatticeError> {
        let mut lo = Vec::with_capacity(self.n);
        let mut hi = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let row = self.inverse.row(i);
            let neg: BigRational = row.iter().filter(|v| v.is_negative()).sum();
            let pos: BigRational = row.iter().filter(|v| v.is_positive()).sum();
            lo.push(ceil(&(neg * w.side())).to_i64().ok_or(LatticeError::Overflow)?);
            hi.push(floor(&(pos * w.side())).to_i64().ok_or(LatticeError::Overflow)?);
        }
        Ok((lo, hi))
    }

    fn check_window(&self, w: &Window) -> Result<(), LatticeError> {
        if w.dim() != self.n {
            return Err(LatticeError::Invalid(format!("window dimension {} for lattice dimension {}", w.dim(), self.n)));
        }
        if self.n > 4 {
            return Err(LatticeError::Unsupported(format!("window enumeration needs n <= 4, got {}", self.n)));
        }
        let nu = to_f64(&self.covering_radius_upper()?);
        let predicted = (to_f64(w.side()) + 2.0 * nu).powi(self.n as i32) / to_f64(&self.det);
        if predicted > WINDOW_GUARD {
            return Err(LatticeError::Guard { predicted, limit: WINDOW_GUARD });
        }
        Ok(())
    }

    /// Calls `f(x, M x)` for every lattice point `B x` in the window, in
    /// lexicographic order of `x`. `M = D * basis` is the scaled basis, so the
    /// vector itself is `M x / D`.
    pub fn for_each_in_window<F: FnMut(&[i64], &[i128])>(&self, w: &Window, mut f: F) -> Result<(), LatticeError> {
        self.check_window(w)?;
        let m = self.small()?;
        let (lo, hi) = self.window_box(w)?;
        let size: f64 = lo.iter().zip(&hi).map(|(a, b)| (b - a + 1).max(0) as f64).product();
        if size > BOX_GUARD {
            return Err(LatticeError::Guard { predicted: size, limit: BOX_GUARD });
        }
        // v in [0, p/q) with v = u / D  <=>  0 <= u and q u < p D
        let p = w.side().numer().to_i128().ok_or(LatticeError::Overflow)?;
        let q = w.side().denom().to_i128().ok_or(LatticeError::Overflow)?;
        let d = self.denom.to_i128().ok_or(LatticeError::Overflow)?;
        let pd = p.checked_mul(d).ok_or(LatticeError::Overflow)?;
        let mut overflow = false;
        for_each_in_box(self.n, m, &lo, &hi, |x, u| {
            let mut inside = true;
            for &ui in u {
                match ui.checked_mul(q) {
                    Some(qu) if ui >= 0 && qu < pd => {}
                    Some(_) => {
                        inside = false;
                        break;
                    }
                    None => {
                        overflow = true;
                        inside = false;
                        break;
                    }
                }
            }
            if inside {
                f(x, u);
            }
        })?;
        if overflow {
            return Err(LatticeError::Overflow);
        }
        Ok(())
    }

    /// All lattice points in `[0, B)^n`, in lexicographic coordinate order.
    pub fn enumerate_window(&self, w: &Window) -> Result<Vec<LatticePoint>, LatticeError> {
        let d = BigRational::from_integer(self.denom.clone());
        let mut out = Vec::new();
        self.for_each_in_window(w, |x, u| {
            out.push(LatticePoint {
                coords: x.to_vec(),
                vector: u.iter().map(|&v| BigRational::from_integer(BigInt::from(v)) / &d).collect(),
            });
        })?;
        Ok(out)
    }

    pub fn count_window(&self, w: &Window) -> Result<u64, LatticeError> {
        let mut count = 0u64;
        self.for_each_in_window(w, |_, _| count += 1)?;
        Ok(count)
    }

    /// Number of lattice points of the window lying in the span of `spanning`
    /// (which must be linearly independent, `1 <= k < n`).
    pub fn count_in_hyperplane(&self, w: &Window, spanning: &[Vec<BigRational>]) -> Result<u64, LatticeError> {
        let k = spanning.len();
        if k == 0 || k >= self.n {
            return Err(LatticeError::Invalid(format!("hyperplane dimension {k} must lie in 1..{}", self.n)));
        }
        let got = rank_of_vectors(spanning)?;
        if got != k {
            return Err(LatticeError::Rank { expected: k, got });
        }
        // p in span(S) <=> N p = 0 for a basis N of the orthogonal complement.
        let st = RationalMatrix::from_columns(self.n, spanning)?.transpose();
        let normals = st.nullspace();
        // integer rows of N * M
        let mut checks: Vec<Vec<i128>> = Vec::with_capacity(normals.len());
        for nv in &normals {
            let row = RationalMatrix::from_columns(self.n, std::slice::from_ref(nv))?.transpose();
            let scaled = row.to_integer_scaled(&row.common_denominator())?;
            let prod = scaled.mul(&self.scaled)?;
            let small = prod
                .entries()
                .iter()
                .map(|v| v.to_i128())
                .collect::<Option<Vec<_>>>()
                .ok_or(LatticeError::Overflow)?;
            checks.push(small);
        }
        let mut count = 0u64;
        self.for_each_in_window(w, |x, _| {
            let on_plane = checks.iter().all(|c| {
                let s: i128 = c.iter().zip(x).map(|(a, &b)| a * b as i128).sum();
                s == 0
            });
            if on_plane {
                count += 1;
            }
        })?;
        Ok(count)
    }

    /// Whether `vectors` (all lattice vectors) generate the whole lattice.
    pub fn generates_lattice(&self, vectors: &[Vec<BigRational>]) -> Result<bool, LatticeError> {
        let mut cols = Vec::with_capacity(vectors.len());
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != self.n {
                return Err(LatticeError::Invalid(format!("vector {i} has length {}", v.len())));
            }
            cols.push(self.coordinates(v)?.ok_or(LatticeError::NotInLattice(i))?);
        }
        if cols.is_empty() {
            return Ok(false);
        }
        let m = ExactMatrix::from_columns(self.n, &cols)?;
        Ok(is_unimodular(&m))
    }
}

/// Exact rank of the span of `vectors` over `Q`.
pub fn rank_of_span(vectors: &[Vec<BigRational>]) -> Result<usize, LatticeError> {
    Ok(rank_of_vectors(vectors)?)
}

fn norm_sq(v: &[i128]) -> Option<i128> {
    v.iter().try_fold(0i128, |acc, &x| acc.checked_add(x.checked_mul(x)?))
}

/// Visits every integer vector in the box `lo..=hi` in lexicographic order.
fn for_each_coords<F: FnMut(&[i64])>(lo: &[i64], hi: &[i64], mut f: F) -> bool {
    let n = lo.len();
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return false;
    }
    let mut x = lo.to_vec();
    loop {
        f(&x);
        let mut i = n;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if x[i] < hi[i] {
                x[i] += 1;
                break;
            }
            x[i] = lo[i];
        }
    }
}

/// Like [`for_each_coords`] but also passes `M x` (row-major `n x n`),
/// updated incrementally along the last coordinate.
fn for_each_in_box<F: FnMut(&[i64], &[i128])>(n: usize, m: &[i128], lo: &[i64], hi: &[i64], mut f: F) -> Result<(), LatticeError> {
    // Every |(Mx)_i| is at most n * max|M| * max|x|; insist that fits comfortably.
    let max_m = m.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0);
    let max_x = lo.iter().chain(hi).map(|v| v.unsigned_abs() as u128).max().unwrap_or(0) + 1;
    if max_m.checked_mul(max_x).and_then(|v| v.checked_mul(n as u128 + 1)).is_none_or(|v| v >= 1u128 << 62) {
        return Err(LatticeError::Overflow);
    }
    if n == 0 || lo.iter().zip(hi).any(|(a, b)| a > b) {
        return Ok(());
    }
    let last = n - 1;
    let mut outer_hi = hi.to_vec();
    outer_hi[last] = lo[last];
    let mut v = vec![0i128; n];
    let mut x = vec![0i64; n];
    for_each_coords(lo, &outer_hi, |prefix| {
        x.copy_from_slice(prefix);
        for (i, vi) in v.iter_mut().enumerate() {
            *vi = (0..n).map(|j| m[i * n + j] * x[j] as i128).sum();
        }
        loop {
            f(&x, &v);
            if x[last] == hi[last] {
                break;
            }
            x[last] += 1;
            for (i, vi) in v.iter_mut().enumerate() {
                *vi += m[i * n + last];
            }
        }
    });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    fn lat(cols: &[Vec<i64>]) -> LatticeBasis {
        LatticeBasis::from_integer_columns(cols).unwrap()
    }

    fn win(b: i64, n: usize) -> Window {
        Window::new(int(b), n).unwrap()
    }

    fn v(xs: &[i64]) -> Vec<BigRational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn invariants_of_small_lattices() {
        let z2 = LatticeBasis::integer(2);
        assert_eq!(z2.det(), &int(1));
        assert_eq!(z2.min_norm_sq().unwrap(), &int(1));
        let skew = lat(&[vec![1, 0], vec![1, 1]]);
        assert_eq!(skew.det(), &int(1));
        assert_eq!(skew.min_norm_sq().unwrap(), &int(1));
        // a skewed basis of Z^2
        let bad = lat(&[vec![3, 1], vec![5, 2]]);
        assert_eq!(bad.min_norm_sq().unwrap(), &int(1));
        let hex = LatticeBasis::from_columns(&[v(&[2, 0]), vec![int(1), int(3)]]).unwrap();
        assert_eq!(hex.min_norm_sq().unwrap(), &int(4));
        assert!(LatticeBasis::from_integer_columns(&[vec![1, 2], vec![2, 4]]).is_err());
    }

    #[test]
    fn covering_upper_examples() {
        assert_eq!(LatticeBasis::integer(1).covering_radius_upper().unwrap(), rat(1, 2));
        assert_eq!(LatticeBasis::integer(2).covering_radius_upper().unwrap(), int(2));
        let z2 = LatticeBasis::integer(2);
        let three = z2.scale(&int(3)).unwrap();
        assert_eq!(three.covering_radius_upper().unwrap(), int(6));
        let z3 = LatticeBasis::integer(3).covering_radius_upper().unwrap();
        // 1/2 * 3^(5/2) ~ 7.794
        assert!(z3 > rat(7794, 1000) && z3 < rat(7795, 1000));
    }

    #[test]
    fn covering_estimate_examples() {
        let z2 = LatticeBasis::integer(2).covering_radius_estimate(100).unwrap();
        assert!(z2 >= rat(70, 100) && z2 <= rat(7072, 10000), "{z2}");
        let z1 = LatticeBasis::integer(1).covering_radius_estimate(10).unwrap();
        assert!((to_f64(&z1) - 0.5).abs() <= 0.1);
        let two = lat(&[vec![2, 0], vec![0, 2]]).covering_radius_estimate(20).unwrap();
        let one = LatticeBasis::integer(2).covering_radius_estimate(20).unwrap();
        assert!((to_f64(&two) - 2.0 * to_f64(&one)).abs() < 1e-12);
        assert!(LatticeBasis::integer(4).covering_radius_estimate(4).is_err());
    }

    #[test]
    fn estimate_never_exceeds_upper() {
        for cols in [vec![vec![1, 0], vec![1, 1]], vec![vec![3, 1], vec![1, 2]], vec![vec![5, 0], vec![2, 1]]] {
            let l = lat(&cols);
            assert!(l.covering_radius_estimate(30).unwrap() <= l.covering_radius_upper().unwrap());
        }
    }

    #[test]
    fn window_examples() {
        assert_eq!(LatticeBasis::integer(2).count_window(&win(3, 2)).unwrap(), 9);
        let even = lat(&[vec![2, 0], vec![0, 2]]);
        let pts = even.enumerate_window(&win(3, 2)).unwrap();
        let vecs: Vec<Vec<BigRational>> = pts.into_iter().map(|p| p.vector).collect();
        assert_eq!(vecs, vec![v(&[0, 0]), v(&[0, 2]), v(&[2, 0]), v(&[2, 2])]);
    }

    #[test]
    fn window_matches_coefficient_scan() {
        let l = lat(&[vec![1, 0], vec![1, 1]]);
        let w = win(2, 2);
        let mut expect = Vec::new();
        for a in -4..=4 {
            for b in -4..=4 {
                let p = l.point(&[a, b]);
                if w.contains(&p) {
                    expect.push(vec![a, b]);
                }
            }
        }
        let got: Vec<Vec<i64>> = l.enumerate_window(&w).unwrap().into_iter().map(|p| p.coords).collect();
        assert_eq!(got, expect);
        assert_eq!(got.len(), 4);
    }

    #[test]
    fn rational_window_is_half_open() {
        let half = LatticeBasis::from_columns(&[vec![rat(1, 2), int(0)], vec![int(0), rat(1, 2)]]).unwrap();
        // points k/2 with 0 <= k/2 < 3/2: k in {0, 1, 2}
        let w = Window::new(rat(3, 2), 2).unwrap();
        assert_eq!(half.count_window(&w).unwrap(), 9);
        assert!(Window::new(int(0), 2).is_err());
    }

    #[test]
    fn window_guard_is_an_error() {
        let z3 = LatticeBasis::integer(3);
        assert!(matches!(z3.count_window(&win(1000, 3)), Err(LatticeError::Guard { .. })));
    }

    #[test]
    fn hyperplane_examples() {
        let z2 = LatticeBasis::integer(2);
        assert_eq!(z2.count_in_hyperplane(&win(3, 2), &[v(&[1, 0])]).unwrap(), 3);
        assert_eq!(z2.count_in_hyperplane(&win(3, 2), &[v(&[1, 1])]).unwrap(), 3);
        assert!(matches!(
            LatticeBasis::integer(3).count_in_hyperplane(&win(3, 3), &[v(&[1, 0, 0]), v(&[2, 0, 0])]),
            Err(LatticeError::Rank { expected: 2, got: 1 })
        ));
        assert!(z2.count_in_hyperplane(&win(3, 2), &[v(&[1, 0]), v(&[0, 1])]).is_err());
        let z3 = LatticeBasis::integer(3);
        assert_eq!(z3.count_in_hyperplane(&win(4, 3), &[v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap(), 16);
    }

    #[test]
    fn generation_examples() {
        let z2 = LatticeBasis::integer(2);
        assert!(z2.generates_lattice(&[v(&[1, 0]), v(&[0, 1])]).unwrap());
        assert!(!z2.generates_lattice(&[v(&[2, 0]), v(&[0, 2]), v(&[2, 2])]).unwrap());
        let even = lat(&[vec![2, 0], vec![0, 2]]);
        assert!(even.generates_lattice(&[v(&[2, 0]), v(&[0, 2])]).unwrap());
        assert_eq!(even.generates_lattice(&[v(&[1, 0])]), Err(LatticeError::NotInLattice(0)));
        let skew = lat(&[vec![2, 1], vec![1, 3]]);
        let mut own = skew.basis().columns();
        assert!(skew.generates_lattice(&own).unwrap());
        own.reverse();
        assert!(skew.generates_lattice(&own).unwrap());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_of_span(&[v(&[1, 0]), v(&[0, 1])]).unwrap(), 2);
        assert_eq!(rank_of_span(&[v(&[1, 2]), v(&[2, 4])]).unwrap(), 1);
        assert_eq!(rank_of_span(&[]).unwrap(), 0);
    }

    #[test]
    fn lambda_matches_small_window() {
        for cols in [vec![vec![3, 1], vec![1, 2]], vec![vec![4, 1], vec![1, 3]], vec![vec![2, 1], vec![0, 5]]] {
            let l = lat(&cols);
            let lam = l.min_norm_sq().unwrap().clone();
            // coefficient scan oracle
            let mut best: Option<BigRational> = None;
            for a in -6..=6 {
                for b in -6..=6 {
                    if (a, b) == (0, 0) {
                        continue;
                    }
                    let p = l.point(&[a, b]);
                    let s: BigRational = p.iter().map(|x| x * x).sum();
                    if best.as_ref().is_none_or(|c| &s < c) {
                        best = Some(s);
                    }
                }
            }
            assert_eq!(best.unwrap(), lam);
        }
    }
}
