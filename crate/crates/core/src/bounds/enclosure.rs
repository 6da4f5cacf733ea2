use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::numeric::{self, floor, ceil};

/// Closed interval `[lo, hi]` with rational endpoints, rounded outward to
/// about `bits` significant bits after every operation so numerators and
/// denominators stay small.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enclosure {
    pub lo: BigRational,
    pub hi: BigRational,
    bits: u32,
}

/// `q * 2^shift` with `shift` chosen so the result has about `bits` bits
/// before the binary point, plus that shift.
fn scaled(q: &BigRational, bits: u32) -> (BigRational, i64) {
    let mag = q.numer().bits() as i64 - q.denom().bits() as i64;
    let shift = bits as i64 - mag;
    let factor = BigInt::one() << shift.unsigned_abs();
    let s = if shift >= 0 {
        q * BigRational::from_integer(factor)
    } else {
        q / BigRational::from_integer(factor)
    };
    (s, shift)
}

fn unscale(m: BigInt, shift: i64) -> BigRational {
    let factor = BigInt::one() << shift.unsigned_abs();
    if shift >= 0 {
        BigRational::new(m, factor)
    } else {
        BigRational::from_integer(m * factor)
    }
}

fn is_short(q: &BigRational, bits: u32) -> bool {
    q.numer().bits() <= bits as u64 && q.denom().bits() <= bits as u64
}

fn round_down(q: &BigRational, bits: u32) -> BigRational {
    if is_short(q, bits) {
        return q.clone();
    }
    let (s, shift) = scaled(q, bits);
    unscale(floor(&s), shift)
}

fn round_up(q: &BigRational, bits: u32) -> BigRational {
    if is_short(q, bits) {
        return q.clone();
    }
    let (s, shift) = scaled(q, bits);
    unscale(ceil(&s), shift)
}

impl Enclosure {
    pub fn exact(q: BigRational, bits: u32) -> Self {
        Enclosure {
            lo: round_down(&q, bits),
            hi: round_up(&q, bits),
            bits,
        }
    }

    pub fn from_int(n: i64, bits: u32) -> Self {
        Self::exact(numeric::int(n), bits)
    }

    pub fn new(lo: BigRational, hi: BigRational, bits: u32) -> Self {
        assert!(lo <= hi, "empty enclosure");
        Enclosure {
            lo: round_down(&lo, bits),
            hi: round_up(&hi, bits),
            bits,
        }
    }

    pub fn zero(bits: u32) -> Self {
        Self::exact(BigRational::zero(), bits)
    }

    pub fn one(bits: u32) -> Self {
        Self::exact(BigRational::one(), bits)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        BigRational::from_float(x).is_some_and(|q| self.contains(&q))
    }

    pub fn is_subset_of(&self, other: &Enclosure) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn midpoint(&self) -> f64 {
        numeric::to_f64(&((&self.lo + &self.hi) / numeric::int(2)))
    }

    pub fn lo_f64(&self) -> f64 {
        numeric::to_f64(&self.lo)
    }

    pub fn hi_f64(&self) -> f64 {
        numeric::to_f64(&self.hi)
    }

    fn bits_with(&self, other: &Enclosure) -> u32 {
        self.bits.max(other.bits)
    }

    pub fn add(&self, other: &Enclosure) -> Enclosure {
        Enclosure::new(&self.lo + &other.lo, &self.hi + &other.hi, self.bits_with(other))
    }

    pub fn sub(&self, other: &Enclosure) -> Enclosure {
        Enclosure::new(&self.lo - &other.hi, &self.hi - &other.lo, self.bits_with(other))
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
            bits: self.bits,
        }
    }

    pub fn mul(&self, other: &Enclosure) -> Enclosure {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().cloned().unwrap();
        let hi = products.iter().max().cloned().unwrap();
        Enclosure::new(lo, hi, self.bits_with(other))
    }

    pub fn mul_rational(&self, q: &BigRational) -> Enclosure {
        self.mul(&Enclosure::exact(q.clone(), self.bits))
    }

    /// `None` when the interval straddles zero.
    pub fn recip(&self) -> Option<Enclosure> {
        if self.lo.is_positive() || self.hi.is_negative() {
            Some(Enclosure::new(self.hi.recip(), self.lo.recip(), self.bits))
        } else {
            None
        }
    }

    pub fn div(&self, other: &Enclosure) -> Option<Enclosure> {
        other.recip().map(|r| self.mul(&r))
    }

    pub fn powi(&self, e: u32) -> Enclosure {
        let mut acc = Enclosure::one(self.bits);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Square root of a non-negative enclosure (`None` if `lo < 0`).
    pub fn sqrt(&self) -> Option<Enclosure> {
        if self.lo.is_negative() {
            return None;
        }
        let lo = numeric::sqrt_lower(&self.lo, self.bits + 2);
        let hi = numeric::sqrt_upper(&self.hi, self.bits + 2);
        Some(Enclosure::new(lo, hi, self.bits))
    }

    /// Pointwise `max(self, 0)`.
    pub fn clamp_nonneg(&self) -> Enclosure {
        let z = BigRational::zero();
        Enclosure {
            lo: self.lo.clone().max(z.clone()),
            hi: self.hi.clone().max(z),
            bits: self.bits,
        }
    }

    /// True when the interval certainly lies strictly above `q`.
    pub fn certainly_gt(&self, q: &BigRational) -> bool {
        &self.lo > q
    }

    pub fn certainly_lt(&self, q: &BigRational) -> bool {
        &self.hi < q
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.12}, {:.12}]", self.lo_f64(), self.hi_f64())
    }
}
