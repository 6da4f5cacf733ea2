//! Certified closed-form bounds.
//!
//! Every irrational quantity is an [`Enclosure`] with rational endpoints.
//! Zeta values come from Euler-Maclaurin summation with a rigorous remainder.

mod enclosure;
mod totient;
mod zeta;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::{half_power_bounds, int, pow};

pub use enclosure::Enclosure;
pub use totient::{
    coprime_prob_exact, coprime_prob_from_sum, coprime_probabilities, lehmer_delta_bound, lehmer_residual,
    totient_prefix_sums, totient_summatory, totients, TOTIENT_LIMIT,
};
pub use zeta::ZetaContext;

/// Working precision (bits) for bounds that do not go through a context.
pub const DEFAULT_BITS: u32 = 160;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("zeta({0}) is not defined here; need s >= 2")]
    ZetaDomain(u32),
    #[error("m = {m} is smaller than n = {n}")]
    MBelowN { n: u32, m: u32 },
    #[error("window ratio j must exceed 2")]
    RatioTooSmall,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("totient sieve limit exceeded: {0}")]
    TotientLimit(u64),
    #[error("{0}")]
    Domain(String),
}

/// `prod_{j=m-n+1}^{m} 1/zeta(j)`; exactly zero when `m == n`.
pub fn ideal_probability(n: u32, m: u32, ctx: &ZetaContext) -> Result<Enclosure, BoundsError> {
    if n == 0 {
        return Err(BoundsError::Domain("n must be at least 1".into()));
    }
    if m < n {
        return Err(BoundsError::MBelowN { n, m });
    }
    if m == n {
        return Ok(Enclosure::zero(ctx.bits()));
    }
    let mut acc = Enclosure::one(ctx.bits());
    for j in m - n + 1..=m {
        acc = acc.mul(&ctx.zeta_recip(j)?);
    }
    Ok(acc)
}

/// Enclosure of `n^(k/2)`.
pub fn half_power(n: u32, k: u32, bits: u32) -> Enclosure {
    let (lo, hi) = half_power_bounds(&int(n as i64), k, bits + 4);
    Enclosure::new(lo, hi, bits)
}

/// Probability bound `P_k = n^(k/2) (j+2)^k 2^(n-k) / (j-2)^n` that the
/// `k`-th sample falls near the span of the previous ones.
pub fn pk_bound(n: u32, j: &Enclosure, k: u32) -> Result<Enclosure, BoundsError> {
    if k >= n {
        return Err(BoundsError::Domain(format!("k = {k} must be below n = {n}")));
    }
    let two = int(2);
    if j.lo <= two {
        return Err(BoundsError::RatioTooSmall);
    }
    let bits = j.bits();
    let two_e = Enclosure::exact(two, bits);
    let num = half_power(n, k, bits)
        .mul(&j.add(&two_e).powi(k))
        .mul_rational(&pow(&int(2), n - k));
    let den = j.sub(&two_e).powi(n);
    Ok(num.div(&den).expect("j > 2"))
}

/// `8 n^(n/2)`, the window ratio at which the full-rank product is evaluated.
pub fn critical_ratio(n: u32, bits: u32) -> Enclosure {
    half_power(n, n, bits).mul_rational(&int(8))
}

/// `prod_{k<n} (1 - P_k)` at `j = 8 n^(n/2)`.
pub fn fullrank_lower_bound(n: u32) -> Result<Enclosure, BoundsError> {
    fullrank_lower_bound_bits(n, DEFAULT_BITS)
}

pub fn fullrank_lower_bound_bits(n: u32, bits: u32) -> Result<Enclosure, BoundsError> {
    if n == 0 {
        return Err(BoundsError::Domain("n must be at least 1".into()));
    }
    let j = critical_ratio(n, bits);
    let two = Enclosure::exact(int(2), bits);
    let one = Enclosure::one(bits);
    // P_k = base * r^k with base = 2^n / (j-2)^n and r = sqrt(n) (j+2) / 2
    let base = Enclosure::exact(pow(&int(2), n), bits).div(&j.sub(&two).powi(n)).expect("j > 2");
    let ratio = half_power(n, 1, bits).mul(&j.add(&two)).mul_rational(&BigRational::new(BigInt::one(), BigInt::from(2)));
    let mut pk = base;
    let mut acc = one.clone();
    for _ in 0..n {
        acc = acc.mul(&one.sub(&pk));
        pk = pk.mul(&ratio);
    }
    Ok(acc)
}

/// `(prod_{i=2}^{n+1} 1/zeta(i) - 1/4) * fullrank_lower_bound(n)`.
pub fn alpha(n: u32, ctx: &ZetaContext) -> Result<Enclosure, BoundsError> {
    if n < 2 {
        return Err(BoundsError::Domain(format!("alpha needs n >= 2, got {n}")));
    }
    alpha_unchecked(n, ctx)
}

/// The same product without the `n >= 2` guard, for inspecting `n = 1`.
pub fn alpha_unchecked(n: u32, ctx: &ZetaContext) -> Result<Enclosure, BoundsError> {
    let ideal = ideal_probability(n, n + 1, ctx)?;
    let quarter = Enclosure::exact(BigRational::new(BigInt::one(), BigInt::from(4)), ctx.bits());
    Ok(ideal.sub(&quarter).mul(&fullrank_lower_bound_bits(n, ctx.bits())?))
}

/// `1 - (B1 - 2 nu1)^n / (B1 + 2 nu)^n`, exact. Increasing in both radii.
pub fn tv_bound(n: u32, b1: &BigRational, nu1_upper: &BigRational, nu_upper: &BigRational) -> Result<BigRational, BoundsError> {
    let two = int(2);
    if b1 <= &(&two * nu1_upper) {
        return Err(BoundsError::Hypothesis("B1 must exceed 2 nu(sublattice)".into()));
    }
    if nu1_upper.is_negative() || nu_upper.is_negative() {
        return Err(BoundsError::Domain("covering radii are non-negative".into()));
    }
    let ratio = (b1 - &two * nu1_upper) / (b1 + &two * nu_upper);
    Ok(BigRational::one() - pow(&ratio, n))
}

/// Smallest admissible window sizes: `B_min = 8 n^(n/2) nu` (rounded up) and
/// `B1_min = 8 n^2 (n+1) B_min`.
pub fn window_thresholds(n: u32, nu_upper: &BigRational) -> Result<(BigRational, BigRational), BoundsError> {
    if n < 2 {
        return Err(BoundsError::Domain(format!("window thresholds need n >= 2, got {n}")));
    }
    if !nu_upper.is_positive() {
        return Err(BoundsError::Domain("covering radius bound must be positive".into()));
    }
    let b_min = critical_ratio(n, DEFAULT_BITS).hi * nu_upper;
    let n_q = int(n as i64);
    let b1_min = int(8) * &n_q * &n_q * (n_q + int(1)) * &b_min;
    Ok((b_min, b1_min))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: u32,
    pub j: Enclosure,
    pub pk_values: Vec<Enclosure>,
    pub fullrank_lower: Enclosure,
    /// Absent for `n = 1`.
    pub alpha_n: Option<Enclosure>,
    pub ideal: Enclosure,
    pub precision: u32,
}

pub fn bound_report(n: u32, ctx: &ZetaContext) -> Result<BoundReport, BoundsError> {
    if n == 0 {
        return Err(BoundsError::Domain("n must be at least 1".into()));
    }
    let j = critical_ratio(n, ctx.bits());
    let pk_values = (0..n).map(|k| pk_bound(n, &j, k)).collect::<Result<Vec<_>, _>>()?;
    Ok(BoundReport {
        n,
        j,
        pk_values,
        fullrank_lower: fullrank_lower_bound_bits(n, ctx.bits())?,
        alpha_n: if n >= 2 { Some(alpha(n, ctx)?) } else { None },
        ideal: ideal_probability(n, n + 1, ctx)?,
        precision: ctx.digits(),
    })
}

/// Truncates (not rounds) a non-negative rational to `places` decimals.
pub fn truncate_decimal(q: &BigRational, places: u32) -> BigRational {
    let scale = num_traits::pow(BigInt::from(10), places as usize);
    let scaled = q * BigRational::from_integer(scale.clone());
    BigRational::new(crate::numeric::floor(&scaled), scale)
}

/// Rounds half-up to `places` decimals when the enclosure is narrow enough to
/// decide; `None` if it straddles a rounding boundary.
pub fn round_decimal(e: &Enclosure, places: u32) -> Option<BigRational> {
    let scale = num_traits::pow(BigInt::from(10), places as usize);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let r = |q: &BigRational| crate::numeric::floor(&(q * BigRational::from_integer(scale.clone()) + &half));
    let (a, b) = (r(&e.lo), r(&e.hi));
    (a == b).then(|| BigRational::new(a, scale.clone()))
}

/// Same as [`truncate_decimal`] on both endpoints; `None` if they disagree.
pub fn truncate_enclosure(e: &Enclosure, places: u32) -> Option<BigRational> {
    let (a, b) = (truncate_decimal(&e.lo, places), truncate_decimal(&e.hi, places));
    (a == b && !e.lo.is_negative()).then_some(a)
}

impl Enclosure {
    /// True if the enclosure is certainly non-negative.
    pub fn is_nonneg(&self) -> bool {
        !self.lo.is_negative()
    }

    pub fn is_zero_exact(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    fn dec(s: &str) -> BigRational {
        crate::numeric::parse_rational(s).unwrap()
    }

    #[test]
    fn ideal_probability_table_values() {
        let ctx = ZetaContext::new(30);
        let expect = [
            (1, "60.7927"),
            (4, "45.0631"),
            (15, "43.5764"),
        ];
        for (n, pct) in expect {
            let p = ideal_probability(n, n + 1, &ctx).unwrap().mul_rational(&int(100));
            assert_eq!(round_decimal(&p, 4), Some(dec(pct)), "n = {n}");
        }
        assert!(ideal_probability(3, 3, &ctx).unwrap().is_zero_exact());
        assert_eq!(ideal_probability(3, 2, &ctx), Err(BoundsError::MBelowN { n: 3, m: 2 }));
    }

    #[test]
    fn ideal_is_decreasing_and_approaches_zeta_hat() {
        let ctx = ZetaContext::new(30);
        let hat = ctx.zeta_hat();
        let mut prev = ideal_probability(1, 2, &ctx).unwrap();
        for n in 2..=40 {
            let cur = ideal_probability(n, n + 1, &ctx).unwrap();
            assert!(cur.hi < prev.lo, "n = {n}");
            assert!(cur.lo > hat.lo);
            prev = cur;
        }
        assert!(prev.hi - &hat.lo < rat(1, 1_000_000_000));
    }

    #[test]
    fn pk_examples() {
        let j = Enclosure::from_int(8, DEFAULT_BITS);
        assert!(pk_bound(1, &j, 0).unwrap().contains(&rat(1, 3)));
        let p = pk_bound(3, &j, 0).unwrap();
        assert!(p.contains(&rat(8, 216)));
        assert_eq!(pk_bound(2, &Enclosure::from_int(2, 64), 0), Err(BoundsError::RatioTooSmall));
        assert!(pk_bound(2, &j, 2).is_err());
    }

    #[test]
    fn fullrank_matches_termwise_product() {
        for n in [1, 2, 5, 9] {
            let j = critical_ratio(n, DEFAULT_BITS);
            let one = Enclosure::one(DEFAULT_BITS);
            let direct = (0..n).fold(one.clone(), |acc, k| acc.mul(&one.sub(&pk_bound(n, &j, k).unwrap())));
            let fast = fullrank_lower_bound(n).unwrap();
            assert!((direct.midpoint() - fast.midpoint()).abs() < 1e-30);
            assert!(fast.width() < rat(1, 1_000_000_000_000));
        }
    }

    #[test]
    fn pk_sum_below_half() {
        for n in 1..=30 {
            let j = critical_ratio(n, DEFAULT_BITS);
            let mut total = Enclosure::zero(DEFAULT_BITS);
            for k in 0..n {
                total = total.add(&pk_bound(n, &j, k).unwrap());
            }
            assert!(total.certainly_lt(&rat(1, 2)), "n = {n}: {total}");
        }
    }

    #[test]
    fn fullrank_table_truncated_to_three_decimals() {
        let table = ["0.666", "0.725", "0.812", "0.859", "0.883", "0.896", "0.905"];
        let mut prev = BigRational::zero();
        for (i, want) in table.iter().enumerate() {
            let f = fullrank_lower_bound(i as u32 + 1).unwrap();
            assert_eq!(truncate_enclosure(&f, 3), Some(dec(want)), "n = {}", i + 1);
            assert!(f.lo > prev);
            prev = f.hi.clone();
        }
        assert!(fullrank_lower_bound(1).unwrap().contains(&rat(2, 3)));
    }

    #[test]
    fn alpha_values() {
        let ctx = ZetaContext::new(30);
        assert!(alpha(1, &ctx).is_err());
        for n in 2..=50 {
            assert!(alpha(n, &ctx).unwrap().certainly_gt(&rat(92, 1000)), "n = {n}");
        }
        // listed lower bounds line up with n = 1..5
        let listed = ["0.238", "0.185", "0.176", "0.172", "0.170"];
        for (i, v) in listed.iter().enumerate() {
            let a = alpha_unchecked(i as u32 + 1, &ctx).unwrap();
            assert!(a.certainly_gt(&dec(v)), "n = {}", i + 1);
            assert_eq!(truncate_enclosure(&a, 3), Some(dec(v)), "n = {}", i + 1);
        }
        let limit = ctx.zeta_hat().sub(&Enclosure::exact(rat(1, 4), ctx.bits()));
        // the full-rank factor tends to 1 like 1 - O(n^-1/2), so alpha_n
        // approaches zeta_hat - 1/4 from below, slowly
        let gap = |n| limit.sub(&alpha(n, &ctx).unwrap());
        let (g10, g50) = (gap(10), gap(50));
        assert!(g50.lo.is_positive() && g50.hi < rat(1, 100));
        assert!(g50.hi < g10.lo);
    }

    #[test]
    fn tv_examples() {
        let z = BigRational::zero();
        assert_eq!(tv_bound(3, &int(10), &z, &z).unwrap(), z);
        assert_eq!(tv_bound(2, &int(100), &int(1), &int(1)).unwrap(), BigRational::one() - rat(98 * 98, 102 * 102));
        assert!(tv_bound(2, &int(2), &int(1), &int(0)).is_err());
        let far = tv_bound(4, &int(1_000_000), &int(1), &int(1)).unwrap();
        assert!(far < rat(1, 10_000));
        assert!(tv_bound(2, &int(100), &int(2), &int(1)).unwrap() > tv_bound(2, &int(100), &int(1), &int(1)).unwrap());
    }

    #[test]
    fn tv_chain_meets_quarter_over_n_plus_one() {
        // nu1 <= n B / 2 and B1 = 8 n^2 (n + 1) B, with nu <= B / 2
        for n in 2..=30u32 {
            let b = int(1000);
            let nq = int(n as i64);
            let nu1 = &nq * &b / int(2);
            let nu = &b / int(2);
            let b1 = int(8) * &nq * &nq * (&nq + int(1)) * &b;
            let tv = tv_bound(n, &b1, &nu1, &nu).unwrap();
            assert!(tv <= BigRational::one() / (int(4) * (nq + int(1))), "n = {n}");
        }
    }

    #[test]
    fn threshold_examples() {
        let (b, b1) = window_thresholds(2, &int(1)).unwrap();
        assert_eq!(b, int(16));
        assert_eq!(b1, int(1536));
        assert!(window_thresholds(1, &int(1)).is_err());
        let (b2, _) = window_thresholds(2, &int(3)).unwrap();
        assert_eq!(b2, int(48));
        let (odd, _) = window_thresholds(3, &int(1)).unwrap();
        assert!(odd > rat(41569, 1000) && odd < rat(41570, 1000));
    }

    #[test]
    fn report_shape() {
        let ctx = ZetaContext::new(20);
        let r = bound_report(4, &ctx).unwrap();
        assert_eq!(r.pk_values.len(), 4);
        assert!(r.pk_values.iter().all(Enclosure::is_nonneg));
        assert!(r.alpha_n.is_some());
        assert!(bound_report(1, &ctx).unwrap().alpha_n.is_none());
    }
}
