use num_bigint::BigInt;
use num_rational::BigRational;

use super::BoundsError;

/// Largest argument accepted by the sieve.
pub const TOTIENT_LIMIT: u64 = 10_000_000;

/// `phi(0..=limit)` by the smallest-prime-factor linear sieve (`phi(0) = 0`).
pub fn totients(limit: usize) -> Vec<u32> {
    let mut phi = vec![0u32; limit + 1];
    let mut primes: Vec<u32> = Vec::new();
    if limit >= 1 {
        phi[1] = 1;
    }
    for i in 2..=limit {
        if phi[i] == 0 {
            phi[i] = i as u32 - 1;
            primes.push(i as u32);
        }
        for &p in &primes {
            let ip = i * p as usize;
            if ip > limit {
                break;
            }
            if i % p as usize == 0 {
                phi[ip] = phi[i] * p;
                break;
            }
            phi[ip] = phi[i] * (p - 1);
        }
    }
    phi
}

/// `Phi(0..=limit)` where `Phi(N) = phi(1) + ... + phi(N)`.
pub fn totient_prefix_sums(limit: u64) -> Result<Vec<u64>, BoundsError> {
    if limit > TOTIENT_LIMIT {
        return Err(BoundsError::TotientLimit(limit));
    }
    let phi = totients(limit as usize);
    let mut acc = 0u64;
    Ok(phi
        .iter()
        .map(|&v| {
            acc += v as u64;
            acc
        })
        .collect())
}

pub fn totient_summatory(n: u64) -> Result<u64, BoundsError> {
    if n == 0 {
        return Err(BoundsError::Domain("totient sum needs N >= 1".into()));
    }
    Ok(totient_prefix_sums(n)?[n as usize])
}

/// Fraction of pairs in `[0, N]^2` with `gcd = 1`, from `Phi(N)`:
/// `(2 Phi(N) + 1) / (N + 1)^2`.
pub fn coprime_prob_from_sum(n: u64, phi_sum: u64) -> BigRational {
    BigRational::new(BigInt::from(2 * phi_sum + 1), BigInt::from(n + 1).pow(2))
}

pub fn coprime_prob_exact(n: u64) -> Result<BigRational, BoundsError> {
    Ok(coprime_prob_from_sum(n, totient_summatory(n)?))
}

/// `p_1, ..., p_limit` in one sieve pass.
pub fn coprime_probabilities(limit: u64) -> Result<Vec<BigRational>, BoundsError> {
    let sums = totient_prefix_sums(limit)?;
    Ok((1..=limit).map(|n| coprime_prob_from_sum(n, sums[n as usize])).collect())
}

/// `(3/2) N + N log N`.
pub fn lehmer_delta_bound(n: u64) -> f64 {
    let x = n as f64;
    1.5 * x + x * x.ln()
}

/// `|Phi(N) - N^2 / (2 zeta(2))| = |Phi(N) - 3 N^2 / pi^2|`.
pub fn lehmer_residual(n: u64) -> Result<f64, BoundsError> {
    let x = n as f64;
    let main = 3.0 * x * x / (std::f64::consts::PI * std::f64::consts::PI);
    Ok((totient_summatory(n)? as f64 - main).abs())
}
