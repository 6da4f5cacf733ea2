//! Small exact-arithmetic helpers shared across modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Two-sided 97.5% standard normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn floor(q: &BigRational) -> BigInt {
    q.numer().div_floor(q.denom())
}

pub fn ceil(q: &BigRational) -> BigInt {
    -(-q.numer()).div_floor(q.denom())
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn pow(q: &BigRational, e: u32) -> BigRational {
    num_traits::pow(q.clone(), e as usize)
}

/// Lower and upper rational bounds on `sqrt(q)` with absolute error at most
/// `2^-bits / denom(q)`. Exact squares give `lo == hi`.
pub fn sqrt_bounds(q: &BigRational, bits: u32) -> (BigRational, BigRational) {
    assert!(!q.is_negative(), "square root of a negative rational");
    if q.is_zero() {
        return (BigRational::zero(), BigRational::zero());
    }
    let (p, d) = (q.numer(), q.denom());
    let scale = BigInt::one() << bits;
    let radicand = p * d * &scale * &scale;
    let root = radicand.sqrt();
    let den = d * &scale;
    let lo = BigRational::new(root.clone(), den.clone());
    if &root * &root == radicand {
        return (lo.clone(), lo);
    }
    (lo, BigRational::new(root + 1, den))
}

pub fn sqrt_lower(q: &BigRational, bits: u32) -> BigRational {
    sqrt_bounds(q, bits).0
}

pub fn sqrt_upper(q: &BigRational, bits: u32) -> BigRational {
    sqrt_bounds(q, bits).1
}

/// Bounds on `base^(k/2)` for a non-negative rational base.
pub fn half_power_bounds(base: &BigRational, k: u32, bits: u32) -> (BigRational, BigRational) {
    let whole = pow(base, k / 2);
    if k % 2 == 0 {
        return (whole.clone(), whole);
    }
    let (lo, hi) = sqrt_bounds(base, bits);
    (&whole * lo, whole * hi)
}

/// Parses an exact rational from `"p/q"`, an integer, or a plain decimal such
/// as `"-1.25"`.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
        let q: BigInt = q.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
        if q.is_zero() {
            return Err(format!("{s:?}: zero denominator"));
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let digits = frac.len() as u32;
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(format!("{s:?}: bad decimal"));
        }
        let w: BigInt = if whole.is_empty() || whole == "-" || whole == "+" {
            BigInt::zero()
        } else {
            whole.parse().map_err(|e| format!("{s:?}: {e}"))?
        };
        let f: BigInt = if frac.is_empty() { BigInt::zero() } else { frac.parse().map_err(|e| format!("{s:?}: {e}"))? };
        let scale = num_traits::pow(BigInt::from(10), digits as usize);
        let mag = w.abs() * &scale + f;
        let num = if negative { -mag } else { mag };
        return Ok(BigRational::new(num, scale));
    }
    let n: BigInt = s.parse().map_err(|e| format!("{s:?}: {e}"))?;
    Ok(BigRational::from_integer(n))
}

/// Integer literal that also accepts `1e18` and `10^18`.
pub fn parse_scaled_integer(s: &str) -> Result<i128, String> {
    let s = s.trim();
    let power = |mantissa: &str, exp: &str| -> Result<i128, String> {
        let m: i128 = mantissa.parse().map_err(|e| format!("{s:?}: {e}"))?;
        let e: u32 = exp.parse().map_err(|e| format!("{s:?}: {e}"))?;
        10i128
            .checked_pow(e)
            .and_then(|p| p.checked_mul(m))
            .ok_or_else(|| format!("{s:?}: out of range"))
    };
    if let Some((m, e)) = s.split_once(['e', 'E']) {
        return power(m, e);
    }
    if let Some(e) = s.strip_prefix("10^") {
        return power("1", e);
    }
    s.parse().map_err(|e| format!("{s:?}: {e}"))
}

/// Half-width of the 95% Wilson score interval for `successes / trials`.
pub fn wilson_radius(successes: u64, trials: u64) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    Z95 / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt()
}
