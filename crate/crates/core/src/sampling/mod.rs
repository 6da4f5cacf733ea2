//! Random parallelepipeds and uniform integer points inside them.
//!
//! Two exact samplers are provided for the integer points of a half-open
//! parallelepiped `t + V [0,1)^n`. [`RejectionSampler`] draws from the integer
//! bounding box and keeps points that pass an exact membership test.
//! [`CosetSampler`] uses that these points are one representative per coset
//! of `Z^n / V Z^n`: it draws a uniform coset from the Hermite diagonal and
//! reduces it into the parallelepiped, so it never rejects. Both have the
//! same output distribution.

mod rng;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmat::{det, hnf, ExactError, ExactMatrix, RationalMatrix};
use crate::lattice::{LatticeBasis, LatticeError, Window};

pub use rng::{RngStream, StreamId, RNG_ALGORITHM};

/// Default cap on consecutive rejections.
pub const DEFAULT_MAX_REJECTS: u64 = 1_000_000;
/// Consecutive singular draws tolerated by [`random_parallelepiped`].
pub const MAX_DEGENERATE_DRAWS: u32 = 64;

/// Largest magnitude accepted for generator and translate entries.
const ENTRY_LIMIT: i128 = 1 << 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplingError {
    #[error("parallelepiped is degenerate (det = 0)")]
    Degenerate,
    #[error("{0} consecutive degenerate parallelepipeds drawn")]
    TooManyDegenerate(u32),
    #[error("gave up after {rejects} consecutive rejections (observed acceptance {acceptance:.3e})")]
    TooManyRejections { rejects: u64, acceptance: f64 },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Half-open parallelepiped `translate + V [0,1)^n` with integer generators
/// (the columns of `V`).
#[derive(Clone, Debug)]
pub struct Parallelepiped {
    n: usize,
    generators: ExactMatrix,
    small: Vec<i128>,
    translate: Vec<i128>,
    det: BigInt,
    adj: ExactMatrix,
    /// `adj` as `i128` when `adj * (z - t)` cannot overflow over the box.
    adj_small: Option<Vec<i128>>,
    lo: Vec<i128>,
    hi: Vec<i128>,
}

impl Parallelepiped {
    /// `generators` is row-major `n x n`; its columns span the parallelepiped.
    pub fn new(n: usize, generators: &[i128], translate: Vec<i128>) -> Result<Self, SamplingError> {
        if n == 0 || generators.len() != n * n || translate.len() != n {
            return Err(SamplingError::Invalid("generator matrix must be n x n with an n-vector translate".into()));
        }
        if generators.iter().chain(&translate).any(|v| v.abs() >= ENTRY_LIMIT) {
            return Err(SamplingError::Invalid("entries must stay below 2^100".into()));
        }
        let v = ExactMatrix::from_entries(n, n, generators.iter().map(|&x| BigInt::from(x)).collect())?;
        let d = det(&v)?;
        if d.is_zero() {
            return Err(SamplingError::Degenerate);
        }
        // adj(V) = det(V) * V^-1
        let inv = RationalMatrix::from(&v).inverse()?;
        let adj = inv.to_integer_scaled(&d)?;

        let mut lo = Vec::with_capacity(n);
        let mut hi = Vec::with_capacity(n);
        for i in 0..n {
            let row = &generators[i * n..(i + 1) * n];
            let neg: i128 = row.iter().filter(|&&x| x < 0).sum();
            let pos: i128 = row.iter().filter(|&&x| x > 0).sum();
            // a_j < 1 makes the extreme sums unreachable when they involve a
            // nonzero entry
            let lo_i = translate[i] + neg + i128::from(neg != 0);
            let hi_i = translate[i] + pos - i128::from(pos != 0);
            lo.push(lo_i);
            hi.push(hi_i);
        }
        // |z - t| over the box
        let extent = (0..n)
            .map(|i| (lo[i] - translate[i]).unsigned_abs().max((hi[i] - translate[i]).unsigned_abs()))
            .max()
            .unwrap_or(0);
        let log2 = |x: u128| 128 - x.leading_zeros() as u64;
        let adj_small = if adj.max_abs().bits() + log2(extent) + log2(n as u128) + 1 < 126 {
            adj.entries().iter().map(|x| x.to_i128()).collect()
        } else {
            None
        };
        Ok(Parallelepiped {
            n,
            generators: v,
            small: generators.to_vec(),
            translate,
            det: d,
            adj,
            adj_small,
            lo,
            hi,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &ExactMatrix {
        &self.generators
    }

    /// Row-major generator entries.
    pub fn generators_i128(&self) -> &[i128] {
        &self.small
    }

    pub fn translate(&self) -> &[i128] {
        &self.translate
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    /// Number of integer points, `|det V|`.
    pub fn point_count(&self) -> BigInt {
        self.det.abs()
    }

    /// Inclusive integer bounding box of the points.
    pub fn bounding_box(&self) -> (&[i128], &[i128]) {
        (&self.lo, &self.hi)
    }

    /// Exact half-open membership: `V^-1 (z - t)` in `[0,1)^n`, tested as
    /// `0 <= sign(det) adj(V) (z - t) < |det|`.
    pub fn contains(&self, z: &[i128]) -> bool {
        if z.len() != self.n {
            return false;
        }
        if (0..self.n).any(|i| z[i] < self.lo[i] || z[i] > self.hi[i]) {
            return false;
        }
        let n = self.n;
        match (&self.adj_small, self.det.to_i128()) {
            (Some(adj), Some(d)) => {
                let (sign, abs) = (d.signum(), d.abs());
                (0..n).all(|i| {
                    let acc: i128 = (0..n).map(|j| adj[i * n + j] * (z[j] - self.translate[j])).sum();
                    let s = acc * sign;
                    0 <= s && s < abs
                })
            }
            _ => self.contains_big(z),
        }
    }

    fn contains_big(&self, z: &[i128]) -> bool {
        let n = self.n;
        let abs = self.det.abs();
        let negative = self.det.is_negative();
        let diff: Vec<BigInt> = z.iter().zip(&self.translate).map(|(a, b)| BigInt::from(*a) - b).collect();
        (0..n).all(|i| {
            let mut acc: BigInt = (0..n).map(|j| self.adj.get(i, j) * &diff[j]).sum();
            if negative {
                acc = -acc;
            }
            !acc.is_negative() && acc < abs
        })
    }

    /// Every integer point, by scanning the bounding box (small cases only).
    pub fn integer_points(&self, limit: u64) -> Result<Vec<Vec<i128>>, SamplingError> {
        let size: f64 = self.lo.iter().zip(&self.hi).map(|(a, b)| (b - a + 1).max(0) as f64).product();
        if size > limit as f64 {
            return Err(SamplingError::Invalid(format!("bounding box has {size:.3e} points")));
        }
        let mut out = Vec::new();
        let mut z = self.lo.clone();
        if self.lo.iter().zip(&self.hi).any(|(a, b)| a > b) {
            return Ok(out);
        }
        loop {
            if self.contains(&z) {
                out.push(z.clone());
            }
            let mut i = self.n;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                if z[i] < self.hi[i] {
                    z[i] += 1;
                    break;
                }
                z[i] = self.lo[i];
            }
        }
    }
}

/// `n` generators with coordinates uniform on `[-C, C]`, redrawn while the
/// determinant vanishes. Returns the parallelepiped and the number of redraws.
pub fn random_parallelepiped(n: usize, c: i128, rng: &mut RngStream) -> Result<(Parallelepiped, u32), SamplingError> {
    if c < 1 {
        return Err(SamplingError::Invalid(format!("C must be at least 1, got {c}")));
    }
    if n == 0 {
        return Err(SamplingError::Invalid("dimension must be at least 1".into()));
    }
    let mut resamples = 0;
    loop {
        // column by column
        let mut m = vec![0i128; n * n];
        for j in 0..n {
            for i in 0..n {
                m[i * n + j] = rng.int_in(-c, c);
            }
        }
        match Parallelepiped::new(n, &m, vec![0; n]) {
            Ok(p) => return Ok((p, resamples)),
            Err(SamplingError::Degenerate) => {
                resamples += 1;
                if resamples >= MAX_DEGENERATE_DRAWS {
                    return Err(SamplingError::TooManyDegenerate(resamples));
                }
            }
            Err(e) => return Err(e),
        }
    }
}

/// Which exact sampler to use for integer points of a parallelepiped.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplerKind {
    #[default]
    Rejection,
    Coset,
}

impl std::str::FromStr for SamplerKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rejection" => Ok(SamplerKind::Rejection),
            "coset" => Ok(SamplerKind::Coset),
            other => Err(format!("unknown sampler {other:?} (expected rejection or coset)")),
        }
    }
}

/// Bounding-box rejection sampler.
#[derive(Clone, Debug)]
pub struct RejectionSampler<'a> {
    p: &'a Parallelepiped,
    max_rejects: u64,
    drawn: u64,
    accepted: u64,
}

impl<'a> RejectionSampler<'a> {
    pub fn new(p: &'a Parallelepiped, max_rejects: u64) -> Self {
        RejectionSampler {
            p,
            max_rejects,
            drawn: 0,
            accepted: 0,
        }
    }

    pub fn sample(&mut self, rng: &mut RngStream) -> Result<Vec<i128>, SamplingError> {
        let mut z = vec![0i128; self.p.n];
        let mut rejects = 0u64;
        loop {
            for (i, zi) in z.iter_mut().enumerate() {
                *zi = rng.int_in(self.p.lo[i], self.p.hi[i]);
            }
            self.drawn += 1;
            if self.p.contains(&z) {
                self.accepted += 1;
                return Ok(z);
            }
            rejects += 1;
            if rejects >= self.max_rejects {
                return Err(SamplingError::TooManyRejections {
                    rejects,
                    acceptance: self.acceptance_rate(),
                });
            }
        }
    }

    /// Accepted draws over all draws so far.
    pub fn acceptance_rate(&self) -> f64 {
        if self.drawn == 0 {
            return 0.0;
        }
        self.accepted as f64 / self.drawn as f64
    }

    pub fn draws(&self) -> u64 {
        self.drawn
    }
}

/// Rejection-free sampler: uniform coset of `Z^n / V Z^n`, reduced into the
/// parallelepiped.
#[derive(Clone, Debug)]
pub struct CosetSampler<'a> {
    p: &'a Parallelepiped,
    diagonal: Vec<BigInt>,
}

impl<'a> CosetSampler<'a> {
    pub fn new(p: &'a Parallelepiped) -> Self {
        // lower-triangular Hermite form of the same lattice: the box
        // prod [0, h_ii) holds one representative of every coset
        let h = hnf(&p.generators).h;
        let diagonal = (0..p.n).map(|i| h.get(i, i).clone()).collect();
        CosetSampler { p, diagonal }
    }

    pub fn sample(&mut self, rng: &mut RngStream) -> Result<Vec<i128>, SamplingError> {
        let n = self.p.n;
        let x: Vec<BigInt> = self.diagonal.iter().map(|h| rng.below(h)).collect();
        // w = x - V floor(V^-1 x), then V^-1 w lies in [0,1)^n
        let q: Vec<BigInt> = (0..n)
            .map(|i| {
                let s: BigInt = (0..n).map(|j| self.p.adj.get(i, j) * &x[j]).sum();
                s.div_floor(&self.p.det)
            })
            .collect();
        let mut z = Vec::with_capacity(n);
        for i in 0..n {
            let vq: BigInt = (0..n).map(|j| self.p.generators.get(i, j) * &q[j]).sum();
            let w = &x[i] - vq + self.p.translate[i];
            z.push(w.to_i128().ok_or_else(|| SamplingError::Invalid("point outside i128 range".into()))?);
        }
        debug_assert!(self.p.contains(&z));
        Ok(z)
    }
}

/// Either sampler behind one interface.
#[derive(Clone, Debug)]
pub enum IntegerPointSampler<'a> {
    Rejection(RejectionSampler<'a>),
    Coset(CosetSampler<'a>),
}

impl<'a> IntegerPointSampler<'a> {
    pub fn new(kind: SamplerKind, p: &'a Parallelepiped, max_rejects: u64) -> Self {
        match kind {
            SamplerKind::Rejection => IntegerPointSampler::Rejection(RejectionSampler::new(p, max_rejects)),
            SamplerKind::Coset => IntegerPointSampler::Coset(CosetSampler::new(p)),
        }
    }

    pub fn sample(&mut self, rng: &mut RngStream) -> Result<Vec<i128>, SamplingError> {
        match self {
            IntegerPointSampler::Rejection(s) => s.sample(rng),
            IntegerPointSampler::Coset(s) => s.sample(rng),
        }
    }
}

/// One uniform integer point of `P` by bounding-box rejection.
pub fn sample_integer_point(p: &Parallelepiped, rng: &mut RngStream, max_rejects: u64) -> Result<Vec<i128>, SamplingError> {
    RejectionSampler::new(p, max_rejects).sample(rng)
}

/// Uniform lattice points of `L` in `[0, B)^n`, drawn as integer coordinate
/// vectors from the preimage box and kept when the image lies in the window.
#[derive(Clone, Debug)]
pub struct WindowSampler<'a> {
    lattice: &'a LatticeBasis,
    m: &'a [i128],
    lo: Vec<i64>,
    hi: Vec<i64>,
    p: i128,
    q: i128,
    d: i128,
    max_rejects: u64,
    drawn: u64,
    accepted: u64,
}

impl<'a> WindowSampler<'a> {
    pub fn new(lattice: &'a LatticeBasis, w: &Window, max_rejects: u64) -> Result<Self, SamplingError> {
        if w.dim() != lattice.dim() {
            return Err(SamplingError::Invalid("window and lattice dimensions differ".into()));
        }
        let m = lattice.scaled_small().ok_or(LatticeError::Overflow)?;
        let (lo, hi) = lattice.window_box(w)?;
        let p = w.side().numer().to_i128().ok_or(LatticeError::Overflow)?;
        let q = w.side().denom().to_i128().ok_or(LatticeError::Overflow)?;
        let d = lattice.denominator().to_i128().ok_or(LatticeError::Overflow)?;
        let max_m = m.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0);
        let max_x = lo.iter().chain(&hi).map(|v| v.unsigned_abs() as u128).max().unwrap_or(0) + 1;
        let fits = max_m
            .checked_mul(max_x)
            .and_then(|v| v.checked_mul(lattice.dim() as u128 + 1))
            .and_then(|v| v.checked_mul(q.unsigned_abs()))
            .is_some_and(|v| v < 1u128 << 120)
            && p.checked_mul(d).is_some();
        if !fits {
            return Err(LatticeError::Overflow.into());
        }
        Ok(WindowSampler {
            lattice,
            m,
            lo,
            hi,
            p,
            q,
            d,
            max_rejects,
            drawn: 0,
            accepted: 0,
        })
    }

    /// Integer coordinates of a uniform lattice point in the window.
    pub fn sample_coords(&mut self, rng: &mut RngStream) -> Result<Vec<i64>, SamplingError> {
        let n = self.lattice.dim();
        let mut x = vec![0i64; n];
        let mut rejects = 0u64;
        let pd = self.p * self.d;
        loop {
            for (i, xi) in x.iter_mut().enumerate() {
                *xi = rng.int_in_i64(self.lo[i], self.hi[i]);
            }
            self.drawn += 1;
            let inside = (0..n).all(|i| {
                let u: i128 = (0..n).map(|j| self.m[i * n + j] * x[j] as i128).sum();
                u >= 0 && u * self.q < pd
            });
            if inside {
                self.accepted += 1;
                return Ok(x);
            }
            rejects += 1;
            if rejects >= self.max_rejects {
                return Err(SamplingError::TooManyRejections {
                    rejects,
                    acceptance: self.accepted as f64 / self.drawn as f64,
                });
            }
        }
    }

    pub fn sample(&mut self, rng: &mut RngStream) -> Result<Vec<BigRational>, SamplingError> {
        let x = self.sample_coords(rng)?;
        Ok(self.lattice.point(&x))
    }
}

/// One uniform lattice point of `L` in `[0, B)^n`.
pub fn sample_lattice_point_in_window(
    lattice: &LatticeBasis,
    w: &Window,
    rng: &mut RngStream,
    max_rejects: u64,
) -> Result<Vec<BigRational>, SamplingError> {
    WindowSampler::new(lattice, w, max_rejects)?.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::int;
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    use std::collections::HashMap;

    fn chi_square_passes(counts: &HashMap<Vec<i128>, u64>, support: usize, draws: u64) -> bool {
        let expected = draws as f64 / support as f64;
        let stat: f64 = counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum::<f64>()
            + (support - counts.len()) as f64 * expected;
        let crit = ChiSquared::new((support - 1) as f64).unwrap().inverse_cdf(1.0 - 1e-3);
        stat < crit
    }

    fn para(n: usize, g: &[i128]) -> Parallelepiped {
        Parallelepiped::new(n, g, vec![0; n]).unwrap()
    }

    #[test]
    fn random_parallelepiped_examples() {
        let mut rng = RngStream::new(11, 0);
        for _ in 0..50 {
            let (p, _) = random_parallelepiped(1, 1, &mut rng).unwrap();
            let g = p.generators_i128()[0];
            assert!(g == 1 || g == -1);
        }
        let (p, _) = random_parallelepiped(2, 10_000, &mut rng).unwrap();
        assert!(!p.det().is_zero());
        let a = random_parallelepiped(3, 100, &mut RngStream::new(5, 9)).unwrap().0;
        let b = random_parallelepiped(3, 100, &mut RngStream::new(5, 9)).unwrap().0;
        assert_eq!(a.generators(), b.generators());
        assert!(random_parallelepiped(2, 0, &mut rng).is_err());
    }

    #[test]
    fn half_open_membership() {
        let p = para(2, &[5, 0, 0, 5]);
        assert!(p.contains(&[0, 0]));
        assert!(p.contains(&[4, 4]));
        assert!(!p.contains(&[5, 0]));
        assert!(!p.contains(&[-1, 0]));
        assert_eq!(p.bounding_box(), (&[0i128, 0][..], &[4i128, 4][..]));
        assert!(Parallelepiped::new(2, &[1, 2, 2, 4], vec![0, 0]).is_err());
    }

    #[test]
    fn box_case_accepts_everything() {
        let p = para(3, &[4, 0, 0, 0, 4, 0, 0, 0, 4]);
        let mut s = RejectionSampler::new(&p, 10);
        let mut rng = RngStream::new(3, 0);
        for _ in 0..1000 {
            s.sample(&mut rng).unwrap();
        }
        assert_eq!(s.acceptance_rate(), 1.0);
    }

    #[test]
    fn support_matches_enumeration() {
        for g in [[1i128, 0, 1, 1], [3, 1, 1, 4], [-2, 3, 5, 1], [7, -3, 2, 2]] {
            let p = para(2, &g);
            let truth = p.integer_points(10_000).unwrap();
            assert_eq!(BigInt::from(truth.len()), p.point_count());
            for kind in [SamplerKind::Rejection, SamplerKind::Coset] {
                let mut s = IntegerPointSampler::new(kind, &p, DEFAULT_MAX_REJECTS);
                let mut rng = RngStream::new(17, 1);
                let mut seen = std::collections::HashSet::new();
                for _ in 0..(truth.len() * 60) {
                    seen.insert(s.sample(&mut rng).unwrap());
                }
                let mut seen: Vec<Vec<i128>> = seen.into_iter().collect();
                seen.sort();
                let mut want = truth.clone();
                want.sort();
                assert_eq!(seen, want, "{kind:?} on {g:?}");
            }
        }
    }

    #[test]
    fn translated_parallelepiped() {
        let p = Parallelepiped::new(2, &[3, 1, 1, 4], vec![10, -7]).unwrap();
        let mut rng = RngStream::new(8, 8);
        let mut c = CosetSampler::new(&p);
        for _ in 0..200 {
            assert!(p.contains(&c.sample(&mut rng).unwrap()));
        }
        assert_eq!(p.integer_points(10_000).unwrap().len(), 11);
    }

    #[test]
    fn chi_square_uniformity() {
        let draws = 100_000u64;
        for (kind, g) in [(SamplerKind::Rejection, [5i128, 0, 0, 5]), (SamplerKind::Rejection, [3, 1, 1, 4]), (SamplerKind::Coset, [3, 1, 1, 4])] {
            let p = para(2, &g);
            let support = p.integer_points(10_000).unwrap().len();
            let mut passes = 0;
            for seed in 0..10 {
                let mut s = IntegerPointSampler::new(kind, &p, DEFAULT_MAX_REJECTS);
                let mut rng = RngStream::new(seed, 0);
                let mut counts: HashMap<Vec<i128>, u64> = HashMap::new();
                for _ in 0..draws {
                    *counts.entry(s.sample(&mut rng).unwrap()).or_default() += 1;
                }
                if chi_square_passes(&counts, support, draws) {
                    passes += 1;
                }
            }
            // at significance 1e-3, one failure in ten seeds is tolerated
            assert!(passes >= 9, "{kind:?} on {g:?}: {passes}/10");
        }
    }

    #[test]
    fn large_entries_use_exact_fallback() {
        let c = 1_000_000_000_000_000_000i128;
        let mut rng = RngStream::new(4, 4);
        let (p, _) = random_parallelepiped(6, c, &mut rng).unwrap();
        let mut s = CosetSampler::new(&p);
        for _ in 0..20 {
            let z = s.sample(&mut rng).unwrap();
            assert!(p.contains(&z));
        }
    }

    #[test]
    fn window_sampling() {
        let z2 = LatticeBasis::integer(2);
        let w = Window::new(int(3), 2).unwrap();
        let mut s = WindowSampler::new(&z2, &w, DEFAULT_MAX_REJECTS).unwrap();
        let mut rng = RngStream::new(6, 0);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..500 {
            let v = s.sample(&mut rng).unwrap();
            assert!(w.contains(&v));
            seen.insert(v);
        }
        assert_eq!(seen.len(), 9);

        let even = LatticeBasis::from_integer_columns(&[vec![2, 0], vec![0, 2]]).unwrap();
        let support: std::collections::HashSet<_> = even.enumerate_window(&w).unwrap().into_iter().map(|p| p.vector).collect();
        let mut seen = std::collections::HashSet::new();
        for _ in 0..300 {
            seen.insert(sample_lattice_point_in_window(&even, &w, &mut rng, 1000).unwrap());
        }
        assert_eq!(seen, support);
    }

    #[test]
    fn rejection_cap_reports_acceptance() {
        // a thin sliver: 1 point in a 1000 x 1000 box
        let p = para(2, &[1000, 999, 1, 1]);
        let mut s = RejectionSampler::new(&p, 5);
        let mut rng = RngStream::new(0, 0);
        let mut saw_error = false;
        for _ in 0..20 {
            if let Err(SamplingError::TooManyRejections { rejects, .. }) = s.sample(&mut rng) {
                assert_eq!(rejects, 5);
                saw_error = true;
            }
        }
        assert!(saw_error);
    }
}
