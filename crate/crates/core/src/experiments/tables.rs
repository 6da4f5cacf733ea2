use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::bounds::{
    alpha, coprime_probabilities, fullrank_lower_bound_bits, ideal_probability, totient_prefix_sums, window_thresholds,
    BoundsError, Enclosure, ZetaContext,
};
use crate::numeric::{ceil, floor, rat};

/// The claimed minimum of the coprimality probabilities.
pub const COPRIME_CLAIM: (i64, i64) = (13, 22);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoprimeRow {
    pub n: u64,
    /// `2 Phi(N) + 1`
    pub pairs: u64,
    pub p: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoprimeTable {
    pub rows: Vec<CoprimeRow>,
    pub minimum: BigRational,
    pub argmin: Vec<u64>,
    /// Whether every `p_N >= 13/22` with equality exactly at `N = 10`;
    /// decided only once the table reaches `N = 1000`.
    pub claim_holds: Option<bool>,
}

impl CoprimeTable {
    pub fn row(&self, n: u64) -> Option<&CoprimeRow> {
        self.rows.get(n.checked_sub(1)? as usize)
    }
}

pub fn run_coprime_table(n_max: u64) -> Result<CoprimeTable, ExperimentError> {
    if n_max == 0 {
        return Err(ExperimentError::Config("N_max must be at least 1".into()));
    }
    let sums = totient_prefix_sums(n_max)?;
    let probs = coprime_probabilities(n_max)?;
    let rows: Vec<CoprimeRow> = probs
        .into_iter()
        .enumerate()
        .map(|(i, p)| CoprimeRow {
            n: i as u64 + 1,
            pairs: 2 * sums[i + 1] + 1,
            p,
        })
        .collect();
    let minimum = rows.iter().map(|r| &r.p).min().expect("n_max >= 1").clone();
    let argmin = rows.iter().filter(|r| r.p == minimum).map(|r| r.n).collect();
    let claim = rat(COPRIME_CLAIM.0, COPRIME_CLAIM.1);
    let claim_holds = (n_max >= 1000).then(|| minimum == claim && argmin == vec![10]);
    Ok(CoprimeTable {
        rows,
        minimum,
        argmin,
        claim_holds,
    })
}

pub fn coprime_table_csv<W: Write>(w: W, table: &CoprimeTable) -> Result<(), ExperimentError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["n", "coprime_pairs", "total_pairs", "p", "p_decimal", "is_min"])?;
    for r in &table.rows {
        out.write_record([
            r.n.to_string(),
            r.pairs.to_string(),
            ((r.n + 1) * (r.n + 1)).to_string(),
            r.p.to_string(),
            decimal(&r.p, 10, false),
            (r.p == table.minimum).to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub n: u32,
    pub fullrank_lower: Enclosure,
    pub alpha: Option<Enclosure>,
    pub ideal: Enclosure,
    /// `(B_min, B1_min)` for covering radius 1; absent for `n = 1`.
    pub thresholds: Option<(BigRational, BigRational)>,
}

pub fn run_bounds_table(n_max: u32, ctx: &ZetaContext) -> Result<Vec<BoundsRow>, ExperimentError> {
    if n_max == 0 {
        return Err(ExperimentError::Config("n_max must be at least 1".into()));
    }
    let unit = BigRational::one();
    (1..=n_max)
        .map(|n| {
            let thresholds = match window_thresholds(n, &unit) {
                Ok(t) => Some(t),
                Err(BoundsError::Domain(_)) => None,
                Err(e) => return Err(e.into()),
            };
            Ok(BoundsRow {
                n,
                fullrank_lower: fullrank_lower_bound_bits(n, ctx.bits())?,
                alpha: if n >= 2 { Some(alpha(n, ctx)?) } else { None },
                ideal: ideal_probability(n, n + 1, ctx)?,
                thresholds,
            })
        })
        .collect()
}

/// Columns `n, fullrank_lower, alpha_lo, alpha_hi, ideal_prob, b_min, b1_min`;
/// lower ends are rounded down and upper ends up.
pub fn bounds_table_csv<W: Write>(w: W, rows: &[BoundsRow]) -> Result<(), ExperimentError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["n", "fullrank_lower", "alpha_lo", "alpha_hi", "ideal_prob", "b_min", "b1_min"])?;
    for r in rows {
        let (alo, ahi) = match &r.alpha {
            Some(a) => (decimal(&a.lo, 12, false), decimal(&a.hi, 12, true)),
            None => (String::new(), String::new()),
        };
        let (b, b1) = match &r.thresholds {
            Some((b, b1)) => (decimal(b, 6, true), decimal(b1, 6, true)),
            None => (String::new(), String::new()),
        };
        out.write_record([
            r.n.to_string(),
            decimal(&r.fullrank_lower.lo, 12, false),
            alo,
            ahi,
            decimal(&r.ideal.lo, 12, false),
            b,
            b1,
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// `q` with `places` decimals, rounded down or up.
fn decimal(q: &BigRational, places: usize, up: bool) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = q * BigRational::from_integer(scale.clone());
    let k = if up { ceil(&scaled) } else { floor(&scaled) };
    let neg = k.is_negative();
    let digits = k.abs().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (int_part, frac) = digits.split_at(digits.len() - places);
    format!("{}{int_part}.{frac}", if neg { "-" } else { "" })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals() {
        assert_eq!(decimal(&rat(2, 3), 3, false), "0.666");
        assert_eq!(decimal(&rat(2, 3), 3, true), "0.667");
        assert_eq!(decimal(&rat(-1, 8), 2, false), "-0.13");
        assert_eq!(decimal(&rat(16, 1), 2, true), "16.00");
    }

    #[test]
    fn coprime_rows() {
        let t = run_coprime_table(12).unwrap();
        assert_eq!(t.rows.len(), 12);
        assert_eq!(t.row(1).unwrap().p, rat(3, 4));
        assert_eq!(t.row(10).unwrap().pairs, 65);
        assert_eq!(t.claim_holds, None);
        assert!(run_coprime_table(0).is_err());
        let mut buf = Vec::new();
        coprime_table_csv(&mut buf, &t).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().nth(1).unwrap().starts_with("1,3,4,3/4,0.75"));
    }

    #[test]
    fn bounds_rows() {
        let ctx = ZetaContext::new(20);
        let rows = run_bounds_table(5, &ctx).unwrap();
        assert!(rows[0].fullrank_lower.contains(&rat(2, 3)));
        assert!(rows[0].alpha.is_none() && rows[0].thresholds.is_none());
        assert_eq!(rows[1].thresholds.as_ref().unwrap().0, rat(16, 1));
        let mut buf = Vec::new();
        bounds_table_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n,fullrank_lower,alpha_lo,alpha_hi,ideal_prob,b_min,b1_min");
        assert!(lines[1].starts_with("1,0.666666666666,,,0.607927101854,,"));
        assert!(lines[5].starts_with("5,0.883"));
        assert!(lines[2].ends_with("16.000000,1536.000000"));
    }
}
