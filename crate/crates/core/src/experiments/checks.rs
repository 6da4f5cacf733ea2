use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::bounds::{critical_ratio, tv_bound, BoundsError, DEFAULT_BITS};
use crate::groupgen::{quotient_group, GroupError};
use crate::lattice::{rank_of_span, LatticeBasis, Window};
use crate::numeric::{half_power_bounds, int, pow, rat, to_f64, wilson_radius};
use crate::sampling::{RngStream, WindowSampler, DEFAULT_MAX_REJECTS};

/// Stream used by the command-line full-rank check.
pub const FULLRANK_STREAM: u64 = 1 << 63;

/// Largest quotient group handled by the exact TV computation.
const TV_ORDER_LIMIT: u64 = 10_000_000;

fn grid_resolution(n: usize) -> u32 {
    match n {
        1 => 1000,
        2 => 120,
        _ => 24,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperplaneCheck {
    /// Indices of the basis vectors spanning the hyperplane.
    pub span: Vec<usize>,
    pub count: u64,
    pub bound: BigRational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub n: usize,
    pub b: BigRational,
    pub det: BigRational,
    pub count: u64,
    pub nu_est: BigRational,
    pub nu_upper: BigRational,
    /// `(B - 2 nu_est)^n / det`, when `B > 2 nu_est`.
    pub lower: Option<BigRational>,
    /// `(B + 2 nu_upper)^n / det`
    pub upper: BigRational,
    pub lower_holds: bool,
    pub upper_holds: bool,
    pub hyperplanes: Vec<HyperplaneCheck>,
}

impl LemmaCheck {
    pub fn holds(&self) -> bool {
        self.lower_holds && self.upper_holds && self.hyperplanes.iter().all(|h| h.holds)
    }

    /// Smallest relative gap between the count and any of its bounds.
    pub fn slack(&self) -> f64 {
        let c = self.count as f64;
        let mut s = to_f64(&self.upper) - c;
        if let Some(lo) = &self.lower {
            s = s.min(c - to_f64(lo));
        }
        for h in &self.hyperplanes {
            s = s.min(to_f64(&h.bound) - h.count as f64);
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub checks: Vec<LemmaCheck>,
}

impl LemmaReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(LemmaCheck::holds)
    }
}

fn check_instance(l: &LatticeBasis, w: &Window) -> Result<LemmaCheck, ExperimentError> {
    let n = l.dim();
    let b = w.side().clone();
    let det = l.det().clone();
    let nu_est = l.covering_radius_estimate(grid_resolution(n))?;
    let nu_upper = l.covering_radius_upper()?;
    let count = l.count_window(w)?;
    let two = int(2);
    let count_q = BigRational::from_integer(BigInt::from(count));

    let lower = (b > &two * &nu_est).then(|| pow(&(&b - &two * &nu_est), n as u32) / &det);
    let upper = pow(&(&b + &two * &nu_upper), n as u32) / &det;

    let mut hyperplanes = Vec::new();
    for mask in 1u32..(1 << n) - 1 {
        let span: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let k = span.len() as u32;
        let vectors: Vec<Vec<BigRational>> = span.iter().map(|&i| l.basis().column(i)).collect();
        let c = l.count_in_hyperplane(w, &vectors)?;
        // lower end of n^(k/2), so `count <= bound` is certain
        let (root, _) = half_power_bounds(&int(n as i64), k, DEFAULT_BITS);
        let bound = root * pow(&(&b + &two * &nu_upper), k) * pow(&(&two * &nu_upper), n as u32 - k) / &det;
        hyperplanes.push(HyperplaneCheck {
            span,
            count: c,
            holds: BigRational::from_integer(BigInt::from(c)) <= bound,
            bound,
        });
    }
    Ok(LemmaCheck {
        n,
        lower_holds: lower.as_ref().is_none_or(|lo| lo <= &count_q),
        upper_holds: count_q <= upper,
        b,
        det,
        count,
        nu_est,
        nu_upper,
        lower,
        upper,
        hyperplanes,
    })
}

/// Counts lattice points in each window and compares them with the point
/// count bounds (window count, and count on every hyperplane spanned by basis
/// vectors). The grid under-estimate of the covering radius is used on the
/// lower side and the closed-form upper bound elsewhere.
pub fn run_lemma_verification(instances: &[(LatticeBasis, Window)]) -> Result<LemmaReport, ExperimentError> {
    let checks = instances
        .iter()
        .map(|(l, w)| {
            if l.dim() > 3 {
                return Err(ExperimentError::Config(format!("lemma checks need n <= 3, got {}", l.dim())));
            }
            check_instance(l, w)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LemmaReport { checks })
}

fn lattice(cols: &[&[(i64, i64)]]) -> LatticeBasis {
    let cols: Vec<Vec<BigRational>> = cols.iter().map(|c| c.iter().map(|&(p, q)| rat(p, q)).collect()).collect();
    LatticeBasis::from_columns(&cols).expect("nonsingular test lattice")
}

fn int_lattice(cols: &[&[i64]]) -> LatticeBasis {
    let cols: Vec<Vec<i64>> = cols.iter().map(|c| c.to_vec()).collect();
    LatticeBasis::from_integer_columns(&cols).expect("nonsingular test lattice")
}

/// Fixed desk-scale suite: 22 lattices in dimensions 1 to 3, each with
/// three window sizes.
pub fn desk_lemma_instances() -> Vec<(LatticeBasis, Window)> {
    let lattices = vec![
        int_lattice(&[&[1]]),
        int_lattice(&[&[2]]),
        lattice(&[&[(3, 2)]]),
        lattice(&[&[(5, 3)]]),
        int_lattice(&[&[1, 0], &[0, 1]]),
        int_lattice(&[&[2, 0], &[0, 3]]),
        int_lattice(&[&[1, 0], &[1, 1]]),
        int_lattice(&[&[2, 1], &[1, 3]]),
        lattice(&[&[(1, 1), (0, 1)], &[(1, 2), (7, 8)]]),
        int_lattice(&[&[3, 0], &[1, 2]]),
        int_lattice(&[&[1, 3], &[2, 1]]),
        lattice(&[&[(1, 2), (0, 1)], &[(0, 1), (1, 3)]]),
        int_lattice(&[&[4, 1], &[1, 1]]),
        int_lattice(&[&[1, -1], &[1, 1]]),
        int_lattice(&[&[5, 2], &[2, 1]]),
        int_lattice(&[&[2, 0], &[1, 2]]),
        int_lattice(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
        int_lattice(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]),
        int_lattice(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]),
        int_lattice(&[&[2, 0, 1], &[1, 2, 0], &[0, 1, 3]]),
        int_lattice(&[&[1, 1, 1], &[0, 2, 1], &[0, 0, 3]]),
        lattice(&[&[(1, 2), (0, 1), (0, 1)], &[(0, 1), (1, 1), (0, 1)], &[(1, 2), (1, 2), (1, 1)]]),
    ];
    let mut out = Vec::new();
    for l in lattices {
        let sides: &[(i64, i64)] = match l.dim() {
            1 => &[(7, 2), (10, 1), (25, 1)],
            2 => &[(5, 2), (10, 1), (17, 1)],
            _ => &[(3, 1), (13, 2), (9, 1)],
        };
        for &(p, q) in sides {
            let w = Window::new(rat(p, q), l.dim()).expect("positive side");
            out.push((l.clone(), w));
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct TvInstance {
    pub lattice: LatticeBasis,
    pub sub: Vec<Vec<BigRational>>,
    pub b1: BigRational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TvReport {
    pub n: usize,
    pub quotient: Vec<u64>,
    pub points: u64,
    pub nu1_upper: BigRational,
    pub nu_upper: BigRational,
    pub tv: BigRational,
    pub bound: BigRational,
    pub holds: bool,
}

/// Exact distance between the coset distribution of a uniform lattice point
/// of `[0, B1)^n` and the uniform distribution on `L / L_1`.
pub fn run_tv_check(l: &LatticeBasis, sub: &[Vec<BigRational>], b1: &BigRational) -> Result<TvReport, ExperimentError> {
    let n = l.dim();
    if n > 3 {
        return Err(ExperimentError::Config(format!("exact TV needs n <= 3, got {n}")));
    }
    let nu_upper = l.covering_radius_upper()?;
    let nu1_upper = LatticeBasis::from_columns(sub)?.covering_radius_upper()?;
    let bound = tv_bound(n as u32, b1, &nu1_upper, &nu_upper)?;
    let (group, proj) = quotient_group(l, sub)?;
    let order = group.order_u64().filter(|&o| o <= TV_ORDER_LIMIT).ok_or(GroupError::TooLarge)?;
    let factors = group.factors().to_vec();
    let mut counts = vec![0u64; order as usize];
    let w = Window::new(b1.clone(), n)?;
    l.for_each_in_window(&w, |x, _| {
        let big: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        let e = proj.project_coords(&big);
        let idx = e.coords.iter().zip(&factors).fold(0u64, |acc, (&c, &d)| acc * d + c);
        counts[idx as usize] += 1;
    })?;
    let points: u64 = counts.iter().sum();
    // TV = 1/2 sum |c / total - 1 / |G|| = sum |c |G| - total| / (2 total |G|)
    let total = BigInt::from(points);
    let g = BigInt::from(order);
    let num: BigInt = counts.iter().map(|&c| (BigInt::from(c) * &g - &total).magnitude().clone()).map(BigInt::from).sum();
    let tv = BigRational::new(num, BigInt::from(2) * &total * &g);
    Ok(TvReport {
        n,
        quotient: factors,
        points,
        holds: tv <= bound,
        nu1_upper,
        nu_upper,
        tv,
        bound,
    })
}

/// Fixed desk-scale suite of lattice, sublattice and window triples.
pub fn desk_tv_instances() -> Vec<TvInstance> {
    let q = |v: &[(i64, i64)]| v.iter().map(|&(p, d)| rat(p, d)).collect::<Vec<_>>();
    let z = |v: &[i64]| v.iter().map(|&x| int(x)).collect::<Vec<_>>();
    let mk = |l: LatticeBasis, sub: Vec<Vec<BigRational>>, b1: BigRational| TvInstance { lattice: l, sub, b1 };
    vec![
        mk(int_lattice(&[&[1]]), vec![z(&[2])], int(101)),
        mk(int_lattice(&[&[1]]), vec![z(&[3])], int(50)),
        mk(int_lattice(&[&[1]]), vec![z(&[5])], rat(75, 2)),
        mk(lattice(&[&[(1, 2)]]), vec![q(&[(3, 2)])], int(20)),
        mk(int_lattice(&[&[1, 0], &[0, 1]]), vec![z(&[1, 0]), z(&[0, 1])], int(10)),
        mk(int_lattice(&[&[1, 0], &[0, 1]]), vec![z(&[2, 0]), z(&[0, 3])], int(60)),
        mk(int_lattice(&[&[1, 0], &[0, 1]]), vec![z(&[2, 1]), z(&[0, 3])], int(45)),
        mk(int_lattice(&[&[1, 0], &[0, 1]]), vec![z(&[1, 1]), z(&[1, -1])], int(30)),
        mk(int_lattice(&[&[2, 1], &[1, 3]]), vec![z(&[4, 2]), z(&[2, 6])], int(80)),
        mk(lattice(&[&[(1, 1), (0, 1)], &[(1, 2), (1, 2)]]), vec![z(&[2, 0]), z(&[0, 2])], int(40)),
        mk(
            int_lattice(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
            vec![z(&[1, 1, 0]), z(&[0, 1, 1]), z(&[1, 0, 1])],
            int(20),
        ),
        mk(
            int_lattice(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
            vec![z(&[2, 0, 0]), z(&[0, 1, 0]), z(&[0, 0, 3])],
            int(100),
        ),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FullrankReport {
    pub n: usize,
    pub b: BigRational,
    pub nu_upper: BigRational,
    /// `8 n^(n/2) nu_upper`
    pub b_min: BigRational,
    pub in_hypothesis: bool,
    pub trials: u64,
    pub full_rank: u64,
    pub frequency: f64,
    pub wilson_radius: f64,
    /// `frequency >= 1/2 - 3 radius`; only asserted inside the hypothesis.
    pub holds: Option<bool>,
}

/// Fraction of `n`-tuples of uniform lattice points of `[0, B)^n` that are
/// linearly independent. Below the window threshold the run needs
/// `allow_below_threshold` and is reported as outside the hypothesis.
pub fn run_fullrank_check(
    l: &LatticeBasis,
    b: &BigRational,
    trials: u64,
    rng: &mut RngStream,
    allow_below_threshold: bool,
) -> Result<FullrankReport, ExperimentError> {
    let n = l.dim();
    let nu_upper = l.covering_radius_upper()?;
    let b_min = critical_ratio(n as u32, DEFAULT_BITS).hi * &nu_upper;
    let in_hypothesis = b >= &b_min;
    if !in_hypothesis && !allow_below_threshold {
        return Err(BoundsError::Hypothesis(format!(
            "B = {b} is below the threshold {:.4}",
            to_f64(&b_min)
        ))
        .into());
    }
    let w = Window::new(b.clone(), n)?;
    let mut sampler = WindowSampler::new(l, &w, DEFAULT_MAX_REJECTS)?;
    let mut full_rank = 0u64;
    for _ in 0..trials {
        let vectors = (0..n).map(|_| sampler.sample(rng)).collect::<Result<Vec<_>, _>>()?;
        if rank_of_span(&vectors)? == n {
            full_rank += 1;
        }
    }
    let frequency = if trials == 0 { 0.0 } else { full_rank as f64 / trials as f64 };
    let radius = wilson_radius(full_rank, trials);
    Ok(FullrankReport {
        n,
        b: b.clone(),
        nu_upper,
        b_min,
        in_hypothesis,
        trials,
        full_rank,
        frequency,
        wilson_radius: radius,
        holds: (in_hypothesis && trials > 0).then(|| frequency >= 0.5 - 3.0 * radius),
    })
}

/// Smallest integer window side at or above the full-rank threshold.
pub fn fullrank_threshold(l: &LatticeBasis) -> Result<BigRational, ExperimentError> {
    let nu_upper = l.covering_radius_upper()?;
    let b_min = critical_ratio(l.dim() as u32, DEFAULT_BITS).hi * nu_upper;
    Ok(BigRational::from_integer(crate::numeric::ceil(&b_min)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn lemma_examples() {
        let z2 = LatticeBasis::integer(2);
        let r = run_lemma_verification(&[(z2, Window::new(int(10), 2).unwrap())]).unwrap();
        let c = &r.checks[0];
        assert_eq!(c.count, 100);
        assert_eq!(c.nu_upper, int(2));
        let est = to_f64(&c.nu_est);
        assert!(est > 0.70 && est <= 0.7072);
        assert!(c.holds());
        // x-axis: 10 <= sqrt(2) (10 + 4) 4
        assert_eq!(c.hyperplanes[0].count, 10);
        assert!(c.hyperplanes[0].bound > int(79) && c.hyperplanes[0].bound < int(80));

        let rect = int_lattice(&[&[2, 0], &[0, 3]]);
        let r = run_lemma_verification(&[(rect, Window::new(int(12), 2).unwrap())]).unwrap();
        assert_eq!(r.checks[0].count, 24);
        assert!(r.all_hold());
    }

    #[test]
    fn desk_suite_shape() {
        let inst = desk_lemma_instances();
        assert_eq!(inst.len(), 66);
        assert!(inst.iter().all(|(l, _)| l.dim() <= 3));
        assert!(desk_tv_instances().len() >= 10);
    }

    #[test]
    fn tv_one_dimensional_example() {
        let r = run_tv_check(&LatticeBasis::integer(1), &[vec![int(2)]], &int(101)).unwrap();
        assert_eq!(r.quotient, vec![2]);
        assert_eq!(r.points, 101);
        assert_eq!(r.tv, rat(1, 202));
        assert_eq!(r.bound, rat(3, 102));
        assert!(r.holds);
    }

    #[test]
    fn tv_trivial_quotient_and_hypothesis() {
        let z2 = LatticeBasis::integer(2);
        let basis = vec![vec![int(1), int(0)], vec![int(0), int(1)]];
        let r = run_tv_check(&z2, &basis, &int(10)).unwrap();
        assert!(r.tv.is_zero() && r.holds);
        assert!(matches!(
            run_tv_check(&z2, &basis, &int(4)),
            Err(ExperimentError::Bounds(BoundsError::Hypothesis(_)))
        ));
        let r = run_tv_check(&z2, &[vec![int(2), int(0)], vec![int(0), int(3)]], &int(60)).unwrap();
        assert_eq!(r.points, 3600);
        assert!(r.tv.is_zero());
        assert!(r.holds);
    }

    #[test]
    fn fullrank_examples() {
        let mut rng = RngStream::new(5, 0);
        let z1 = LatticeBasis::integer(1);
        let r = run_fullrank_check(&z1, &int(8), 4000, &mut rng, false).unwrap();
        assert!(r.in_hypothesis);
        assert!((r.frequency - 0.875).abs() < 3.0 * r.wilson_radius);
        assert_eq!(r.holds, Some(true));

        let z2 = LatticeBasis::integer(2);
        assert_eq!(fullrank_threshold(&z2).unwrap(), int(32));
        assert!(run_fullrank_check(&z2, &int(16), 10, &mut rng, false).is_err());
        let r = run_fullrank_check(&z2, &int(16), 500, &mut rng, true).unwrap();
        assert!(!r.in_hypothesis && r.holds.is_none() && r.frequency >= 0.5);
        let empty = run_fullrank_check(&z2, &int(32), 0, &mut rng, false).unwrap();
        assert_eq!((empty.trials, empty.holds), (0, None));
    }
}
