use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{BoundsError, Enclosure};
use crate::numeric::{int, pow};

const MAX_BERNOULLI_INDEX: usize = 160;

/// `B_0, B_1, ..., B_MAX` (with `B_1 = -1/2`), computed once.
fn bernoulli() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut b: Vec<BigRational> = Vec::with_capacity(MAX_BERNOULLI_INDEX + 1);
        b.push(BigRational::one());
        for m in 1..=MAX_BERNOULLI_INDEX {
            if m > 1 && m % 2 == 1 {
                b.push(BigRational::zero());
                continue;
            }
            // sum_{k<m} C(m+1, k) B_k = -(m+1) B_m
            let mut binom = BigInt::one();
            let mut acc = BigRational::zero();
            for (k, bk) in b.iter().enumerate() {
                if !bk.is_zero() {
                    acc += bk * BigRational::from_integer(binom.clone());
                }
                binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
            }
            b.push(-acc / int(m as i64 + 1));
        }
        b
    })
}

/// Shared precision and cache for zeta values.
///
/// Safe to share across threads: reads take a shared lock and a miss computes
/// outside the lock before inserting.
#[derive(Debug)]
pub struct ZetaContext {
    digits: u32,
    bits: u32,
    cache: RwLock<HashMap<u32, Enclosure>>,
    hat: OnceLock<Enclosure>,
}

impl Default for ZetaContext {
    fn default() -> Self {
        Self::new(30)
    }
}

impl ZetaContext {
    pub fn new(digits: u32) -> Self {
        let digits = digits.max(1);
        let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 32;
        ZetaContext {
            digits,
            bits,
            cache: RwLock::new(HashMap::new()),
            hat: OnceLock::new(),
        }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// `10^-digits`.
    pub fn tolerance(&self) -> BigRational {
        BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), self.digits as usize))
    }

    /// Enclosure of `zeta(s)` of width below `10^-digits`.
    pub fn zeta(&self, s: u32) -> Result<Enclosure, BoundsError> {
        if s < 2 {
            return Err(BoundsError::ZetaDomain(s));
        }
        if let Some(z) = self.cache.read().expect("zeta cache poisoned").get(&s) {
            return Ok(z.clone());
        }
        let z = self.compute_zeta(s);
        self.cache.write().expect("zeta cache poisoned").entry(s).or_insert_with(|| z.clone());
        Ok(z)
    }

    /// Enclosure of `1 / zeta(s)`.
    pub fn zeta_recip(&self, s: u32) -> Result<Enclosure, BoundsError> {
        Ok(self.zeta(s)?.recip().expect("zeta(s) > 1"))
    }

    fn compute_zeta(&self, s: u32) -> Enclosure {
        // Each term error bound must stay below a quarter of the tolerance.
        let target = self.tolerance() / int(4);
        let mut n_cut = self.digits.max(10) + 10;
        loop {
            if let Some((approx, err)) = euler_maclaurin(s, n_cut, &target) {
                return Enclosure::new(&approx - &err, &approx + &err, self.bits);
            }
            n_cut *= 2;
        }
    }

    /// Enclosure of the product of `1 / zeta(i)` over all `i >= 2`.
    ///
    /// Factors past `M` lie in `[1 - 2^(1-i), 1]`, so the tail product lies in
    /// `[1 - 2^(1-M), 1]`.
    pub fn zeta_hat(&self) -> Enclosure {
        self.hat
            .get_or_init(|| {
                let m = (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 4;
                let mut acc = Enclosure::one(self.bits);
                for i in 2..=m {
                    acc = acc.mul(&self.zeta_recip(i).expect("i >= 2"));
                }
                let tail_lo = BigRational::one() - BigRational::new(BigInt::one(), BigInt::one() << (m - 1));
                let tail = Enclosure::new(tail_lo, BigRational::one(), self.bits);
                acc.mul(&tail)
            })
            .clone()
    }
}

/// Euler-Maclaurin summation of `zeta(s)` cut at `n`, returning the
/// approximation and a rigorous error radius, or `None` when the correction
/// terms stop shrinking before reaching `target`.
///
/// With `f(x) = x^-s`, the remainder after the `B_2M` term is bounded by
/// `|B_2M| / (2M)! * |f^(2M-1)(n)|`, i.e. the magnitude of that last term.
fn euler_maclaurin(s: u32, n: u32, target: &BigRational) -> Option<(BigRational, BigRational)> {
    let b = bernoulli();
    let nq = int(n as i64);
    let mut sum = BigRational::zero();
    for k in 1..n {
        sum += BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(k), s as usize));
    }
    let n_pow_s = pow(&nq, s);
    sum += nq.clone() / (int(s as i64 - 1) * &n_pow_s);
    sum += BigRational::one() / (int(2) * &n_pow_s);

    // rising factorial (s)_{2j-1}, factorial (2j)!, power n^(s+2j-1)
    let mut rising = int(s as i64);
    let mut fact = int(2);
    let mut n_pow = &n_pow_s * &nq;
    let mut last = None;
    for j in 1..=MAX_BERNOULLI_INDEX / 2 {
        let term = &b[2 * j] / &fact * &rising / &n_pow;
        let mag = term.abs();
        if let Some(prev) = &last {
            if &mag > prev {
                return None;
            }
        }
        sum += term;
        if &mag < target {
            return Some((sum, mag));
        }
        last = Some(mag);
        let (a, c) = (s as i64 + 2 * j as i64 - 1, s as i64 + 2 * j as i64);
        rising = rising * int(a) * int(c);
        fact = fact * int(2 * j as i64 + 1) * int(2 * j as i64 + 2);
        n_pow = n_pow * &nq * &nq;
    }
    None
}
