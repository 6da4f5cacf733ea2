//! Finite abelian groups in invariant-factor form and the probability that
//! random elements generate them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{ideal_probability, BoundsError, ZetaContext};
use crate::exactmat::small::columns_generate_unit_lattice;
use crate::exactmat::{det, is_unimodular, smith_form, ExactError, ExactMatrix};
use crate::lattice::{LatticeBasis, LatticeError};
use crate::numeric::to_f64;

/// Largest `|G|^t` accepted by the exhaustive oracle.
pub const BRUTE_FORCE_GUARD: u128 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("invalid invariant factors: {0}")]
    InvalidFactors(String),
    #[error("element does not belong to the group: {0}")]
    InvalidElement(String),
    #[error("sublattice is not of full rank")]
    NotFullRank,
    #[error("exhaustive search over {0} tuples exceeds the guard")]
    Guard(u128),
    #[error("group order does not fit in 64 bits")]
    TooLarge,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

/// `Z/d_1 x ... x Z/d_k` with `d_1 | d_2 | ... | d_k` and every `d_i >= 2`.
/// The empty list is the trivial group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
}

/// Residues `coords[i]` in `[0, d_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    pub coords: Vec<u64>,
}

impl GroupElement {
    pub fn new(coords: Vec<u64>) -> Self {
        GroupElement { coords }
    }
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        FiniteAbelianGroup { factors: Vec::new() }
    }

    pub fn from_invariant_factors(factors: Vec<u64>) -> Result<Self, GroupError> {
        if let Some(&d) = factors.iter().find(|&&d| d < 2) {
            return Err(GroupError::InvalidFactors(format!("factor {d} is below 2")));
        }
        for w in factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(GroupError::InvalidFactors(format!("{} does not divide {}", w[0], w[1])));
            }
        }
        Ok(FiniteAbelianGroup { factors })
    }

    /// Normalises any product of cyclic groups `Z/m_1 x ... x Z/m_r`
    /// (entries `0` are not allowed, `1`s are dropped).
    pub fn from_cyclic_orders(orders: &[u64]) -> Result<Self, GroupError> {
        if orders.contains(&0) {
            return Err(GroupError::InvalidFactors("cyclic order 0".into()));
        }
        // prime -> exponents, then stack the largest powers into the last factor
        let mut by_prime: Vec<(u64, Vec<u32>)> = Vec::new();
        for &m in orders {
            for (p, e) in factorize(m) {
                match by_prime.iter_mut().find(|(q, _)| *q == p) {
                    Some((_, es)) => es.push(e),
                    None => by_prime.push((p, vec![e])),
                }
            }
        }
        let k = by_prime.iter().map(|(_, es)| es.len()).max().unwrap_or(0);
        let mut factors = vec![1u64; k];
        for (p, mut es) in by_prime {
            es.sort_unstable();
            let offset = k - es.len();
            for (i, e) in es.into_iter().enumerate() {
                factors[offset + i] *= p.pow(e);
            }
        }
        Self::from_invariant_factors(factors)
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    /// Minimal number of generators.
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> BigInt {
        self.factors.iter().fold(BigInt::one(), |acc, &d| acc * d)
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.factors.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d))
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        e.coords.len() == self.factors.len() && e.coords.iter().zip(&self.factors).all(|(c, d)| c < d)
    }

    /// The `i`-th standard generator.
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut coords = vec![0; self.rank()];
        coords[i] = 1;
        GroupElement { coords }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement {
            coords: a.coords.iter().zip(&b.coords).zip(&self.factors).map(|((x, y), d)| (x + y) % d).collect(),
        }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement {
            coords: a.coords.iter().zip(&self.factors).map(|(x, d)| (d - x) % d).collect(),
        }
    }

    /// Element with mixed-radix index `idx` in `0..|G|`.
    pub fn element(&self, mut idx: u64) -> GroupElement {
        let mut coords = vec![0; self.rank()];
        for (c, d) in coords.iter_mut().zip(&self.factors).rev() {
            *c = idx % d;
            idx /= d;
        }
        GroupElement { coords }
    }

    /// Distinct primes dividing `|G|` with the number of invariant factors
    /// each one divides.
    pub fn prime_ranks(&self) -> Vec<(u64, usize)> {
        let Some(&top) = self.factors.last() else {
            return Vec::new();
        };
        factorize(top)
            .into_iter()
            .map(|(p, _)| (p, self.factors.iter().filter(|&&d| d % p == 0).count()))
            .collect()
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Prime factorisation by trial division.
pub fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// All abelian groups of order `m`, in invariant-factor form.
pub fn abelian_groups_of_order(m: u64) -> Vec<FiniteAbelianGroup> {
    let mut groups = vec![Vec::<u64>::new()];
    for (p, e) in factorize(m) {
        let mut next = Vec::new();
        for part in partitions(e) {
            for g in &groups {
                let mut orders = g.clone();
                orders.extend(part.iter().map(|&a| p.pow(a)));
                next.push(orders);
            }
        }
        groups = next;
    }
    let mut out: Vec<FiniteAbelianGroup> = groups
        .iter()
        .map(|o| FiniteAbelianGroup::from_cyclic_orders(o).expect("positive orders"))
        .collect();
    out.sort();
    out
}

/// Partitions of `e` into positive parts, parts non-increasing.
fn partitions(e: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for a in (1..=rest.min(max)).rev() {
            cur.push(a);
            go(rest - a, a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(e, e, &mut Vec::new(), &mut out);
    out
}

/// Maps lattice vectors onto coset coordinates of `L / L_1`.
#[derive(Clone, Debug)]
pub struct CosetProjection {
    lattice: LatticeBasis,
    rows: Vec<Vec<BigInt>>,
    moduli: Vec<BigInt>,
}

impl CosetProjection {
    /// Coset of the lattice vector with integer coordinates `x`.
    pub fn project_coords(&self, x: &[BigInt]) -> GroupElement {
        let coords = self
            .rows
            .iter()
            .zip(&self.moduli)
            .map(|(row, d)| {
                let s: BigInt = row.iter().zip(x).map(|(a, b)| a * b).sum();
                s.mod_floor(d).to_u64().expect("residue below a u64 modulus")
            })
            .collect();
        GroupElement { coords }
    }

    pub fn project(&self, v: &[BigRational]) -> Result<GroupElement, GroupError> {
        let x = self.lattice.coordinates(v)?.ok_or(LatticeError::NotInLattice(0))?;
        Ok(self.project_coords(&x))
    }
}

/// `L / L_1` for the full-rank sublattice `L_1` spanned by `sub`.
///
/// With `P S Q = diag(d_i)` for the coordinate matrix `S` of `sub`, the map
/// `x -> (P x)_i mod d_i` identifies `Z^n / S Z^n` with `prod Z/d_i`.
pub fn quotient_group(
    lattice: &LatticeBasis,
    sub: &[Vec<BigRational>],
) -> Result<(FiniteAbelianGroup, CosetProjection), GroupError> {
    let n = lattice.dim();
    if sub.len() != n {
        return Err(GroupError::NotFullRank);
    }
    let mut cols = Vec::with_capacity(n);
    for (i, v) in sub.iter().enumerate() {
        cols.push(lattice.coordinates(v)?.ok_or(LatticeError::NotInLattice(i))?);
    }
    let s = ExactMatrix::from_columns(n, &cols)?;
    if det(&s)?.is_zero() {
        return Err(GroupError::NotFullRank);
    }
    let sf = smith_form(&s);
    let mut factors = Vec::new();
    let mut rows = Vec::new();
    let mut moduli = Vec::new();
    for (i, d) in sf.diagonal.iter().enumerate() {
        if d.is_one() {
            continue;
        }
        factors.push(d.to_u64().ok_or(GroupError::TooLarge)?);
        rows.push(sf.p.row(i).to_vec());
        moduli.push(d.clone());
    }
    let group = FiniteAbelianGroup::from_invariant_factors(factors)?;
    Ok((
        group,
        CosetProjection {
            lattice: lattice.clone(),
            rows,
            moduli,
        },
    ))
}

/// `prod_{i=t-d+1}^{t} (1 - p^-i)`: probability that `t` uniform elements
/// generate `(Z/p^a_1) x ... ` with `d` invariant factors.
pub fn lambda_t_pgroup(p: u64, d: u32, t: u32) -> BigRational {
    if t < d {
        return BigRational::zero();
    }
    let pb = BigInt::from(p);
    let mut acc = BigRational::one();
    for i in t - d + 1..=t {
        let pi = num_traits::pow(pb.clone(), i as usize);
        acc *= BigRational::new(&pi - 1, pi);
    }
    acc
}

/// Exact probability that `t` uniform elements generate `G`.
pub fn generation_prob_exact(g: &FiniteAbelianGroup, t: u32) -> BigRational {
    g.prime_ranks()
        .into_iter()
        .map(|(p, d)| lambda_t_pgroup(p, d as u32, t))
        .fold(BigRational::one(), |acc, x| acc * x)
}

/// Whether `elems` generate `G`: their coordinate columns together with
/// `d_i e_i` must generate `Z^k`.
pub fn generates(g: &FiniteAbelianGroup, elems: &[GroupElement]) -> Result<bool, GroupError> {
    if let Some(e) = elems.iter().find(|e| !g.contains(e)) {
        return Err(GroupError::InvalidElement(format!("{:?} in {g}", e.coords)));
    }
    let refs: Vec<&[u64]> = elems.iter().map(|e| e.coords.as_slice()).collect();
    Ok(generates_coords(g.factors(), &refs))
}

fn generates_coords(factors: &[u64], elems: &[&[u64]]) -> bool {
    let k = factors.len();
    if k == 0 {
        return true;
    }
    let cols = elems.len() + k;
    let mut buf = [0i64; 64];
    if k * cols <= buf.len() && factors.iter().all(|&d| d <= i64::MAX as u64 / 4) {
        let m = &mut buf[..k * cols];
        for r in 0..k {
            // diagonal columns first keep the pivots small
            m[r * cols + r] = factors[r] as i64;
            for (c, e) in elems.iter().enumerate() {
                m[r * cols + k + c] = e[r] as i64;
            }
        }
        if let Some(ans) = columns_generate_unit_lattice(k, cols, m) {
            return ans;
        }
    }
    let mut entries = vec![BigInt::zero(); k * cols];
    for r in 0..k {
        entries[r * cols + r] = BigInt::from(factors[r]);
        for (c, e) in elems.iter().enumerate() {
            entries[r * cols + k + c] = BigInt::from(e[r]);
        }
    }
    is_unimodular(&ExactMatrix::from_entries(k, cols, entries).expect("shape"))
}

/// Number of generating `t`-tuples, by exhaustive search over `G^t`.
pub fn generating_tuples_bruteforce(g: &FiniteAbelianGroup, t: u32) -> Result<u64, GroupError> {
    let order = g.order_u64().ok_or(GroupError::TooLarge)?;
    let total = (order as u128).checked_pow(t).ok_or(GroupError::Guard(u128::MAX))?;
    if total > BRUTE_FORCE_GUARD {
        return Err(GroupError::Guard(total));
    }
    if t == 0 {
        return Ok(u64::from(g.is_trivial()));
    }
    let elements: Vec<GroupElement> = (0..order).map(|i| g.element(i)).collect();
    let inner = (order as u128).pow(t - 1) as u64;
    let count = (0..order)
        .into_par_iter()
        .map(|first| {
            let mut idx = vec![0u64; t as usize];
            idx[0] = first;
            let mut refs: Vec<&[u64]> = vec![&elements[first as usize].coords; t as usize];
            let mut hits = 0u64;
            for _ in 0..inner {
                for (r, &i) in refs.iter_mut().zip(&idx).skip(1) {
                    *r = &elements[i as usize].coords;
                }
                if generates_coords(g.factors(), &refs) {
                    hits += 1;
                }
                for j in (1..t as usize).rev() {
                    idx[j] += 1;
                    if idx[j] < order {
                        break;
                    }
                    idx[j] = 0;
                }
            }
            hits
        })
        .sum();
    Ok(count)
}

/// Exact fraction of generating `t`-tuples by exhaustive search.
pub fn generation_prob_bruteforce(g: &FiniteAbelianGroup, t: u32) -> Result<BigRational, GroupError> {
    let hits = generating_tuples_bruteforce(g, t)?;
    let total = g.order().pow(t);
    Ok(BigRational::new(BigInt::from(hits), total))
}

/// One row of [`generation_bound_check`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupBoundCheck {
    pub group: FiniteAbelianGroup,
    pub n: u32,
    pub probability: BigRational,
    pub ideal_lower: BigRational,
    pub holds: bool,
}

/// One member of the family `(Z/(p_1 ... p_j))^n` sampled with `t = n`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SquareCaseRow {
    pub j: usize,
    pub n: u32,
    pub probability: BigRational,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GenerationBoundReport {
    pub checks: Vec<GroupBoundCheck>,
    pub zeta_hat_lower: BigRational,
    pub square_case: Vec<SquareCaseRow>,
    pub square_case_decreasing: bool,
}

impl GenerationBoundReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds) && self.square_case_decreasing
    }
}

const SMALL_PRIMES: [u64; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];

/// Checks `lambda_{n+1}(G) >= prod_{i=2}^{n+1} 1/zeta(i) >= zeta_hat` on a
/// library of groups needing at most `n` generators, and tabulates the
/// square case `t = n` on `(Z/(p_1 ... p_j))^n`.
pub fn generation_bound_check(n_max: u32, ctx: &ZetaContext) -> Result<GenerationBoundReport, GroupError> {
    let hat_lo = ctx.zeta_hat().lo;
    let mut checks = Vec::new();
    for n in 1..=n_max {
        let ideal_lo = ideal_probability(n, n + 1, ctx)?.lo;
        let mut library = vec![FiniteAbelianGroup::trivial()];
        for &p in &SMALL_PRIMES[..4] {
            for k in 1..=n as usize {
                library.push(FiniteAbelianGroup::from_invariant_factors(vec![p; k])?);
            }
        }
        for m in 2..=64u64 {
            library.extend(abelian_groups_of_order(m).into_iter().filter(|g| g.rank() <= n as usize));
        }
        library.push(FiniteAbelianGroup::from_invariant_factors(vec![30030; n as usize])?);
        library.sort();
        library.dedup();
        for group in library {
            let probability = generation_prob_exact(&group, n + 1);
            let holds = probability >= ideal_lo && ideal_lo >= hat_lo;
            checks.push(GroupBoundCheck {
                group,
                n,
                probability,
                ideal_lower: ideal_lo.clone(),
                holds,
            });
        }
    }
    let mut square_case = Vec::new();
    for n in 1..=n_max.max(1) {
        let mut modulus = 1u64;
        for (j, &p) in SMALL_PRIMES.iter().enumerate() {
            modulus *= p;
            let group = FiniteAbelianGroup::from_invariant_factors(vec![modulus; n as usize])?;
            square_case.push(SquareCaseRow {
                j: j + 1,
                n,
                probability: generation_prob_exact(&group, n),
            });
        }
    }
    let square_case_decreasing = square_case
        .windows(2)
        .filter(|w| w[0].n == w[1].n)
        .all(|w| w[1].probability < w[0].probability);
    Ok(GenerationBoundReport {
        checks,
        zeta_hat_lower: hat_lo,
        square_case,
        square_case_decreasing,
    })
}

impl GroupBoundCheck {
    pub fn probability_f64(&self) -> f64 {
        to_f64(&self.probability)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};

    fn grp(f: &[u64]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::from_invariant_factors(f.to_vec()).unwrap()
    }

    fn el(c: &[u64]) -> GroupElement {
        GroupElement::new(c.to_vec())
    }

    #[test]
    fn invariant_factor_validation() {
        assert!(FiniteAbelianGroup::from_invariant_factors(vec![2, 3]).is_err());
        assert!(FiniteAbelianGroup::from_invariant_factors(vec![1, 2]).is_err());
        assert_eq!(FiniteAbelianGroup::from_cyclic_orders(&[2, 3]).unwrap(), grp(&[6]));
        assert_eq!(FiniteAbelianGroup::from_cyclic_orders(&[4, 6, 1]).unwrap(), grp(&[2, 12]));
        assert_eq!(FiniteAbelianGroup::from_cyclic_orders(&[1]).unwrap(), FiniteAbelianGroup::trivial());
    }

    #[test]
    fn groups_of_small_orders() {
        assert_eq!(abelian_groups_of_order(8), vec![grp(&[2, 2, 2]), grp(&[2, 4]), grp(&[8])]);
        assert_eq!(abelian_groups_of_order(12).len(), 2);
        assert_eq!(abelian_groups_of_order(1), vec![FiniteAbelianGroup::trivial()]);
        let total: usize = (1..=200).map(|m| abelian_groups_of_order(m).len()).sum();
        assert_eq!(total, 389);
    }

    #[test]
    fn quotient_examples() {
        let z2 = LatticeBasis::integer(2);
        let v = |a: i64, b: i64| vec![int(a), int(b)];
        let (g, _) = quotient_group(&z2, &[v(2, 0), v(0, 3)]).unwrap();
        assert_eq!(g, grp(&[6]));
        let (g, _) = quotient_group(&z2, &[v(1, 0), v(0, 1)]).unwrap();
        assert!(g.is_trivial());
        let (g, proj) = quotient_group(&z2, &[v(2, 0), v(0, 2)]).unwrap();
        assert_eq!(g, grp(&[2, 2]));
        // the four cosets of 2Z^2 map to distinct elements
        let mut seen: Vec<GroupElement> = [(0, 0), (1, 0), (0, 1), (1, 1)]
            .iter()
            .map(|&(a, b)| proj.project(&v(a, b)).unwrap())
            .collect();
        seen.sort_by(|a, b| a.coords.cmp(&b.coords));
        seen.dedup();
        assert_eq!(seen.len(), 4);
        assert_eq!(proj.project(&v(2, -4)).unwrap(), el(&[0, 0]));
        assert!(matches!(quotient_group(&z2, &[v(1, 1), v(2, 2)]), Err(GroupError::NotFullRank)));
    }

    #[test]
    fn quotient_order_is_index() {
        let l = LatticeBasis::from_integer_columns(&[vec![2, 1], vec![1, 3]]).unwrap();
        let sub = vec![l.point(&[3, 1]), l.point(&[-1, 4])];
        let (g, proj) = quotient_group(&l, &sub).unwrap();
        assert_eq!(g.order(), BigInt::from(13));
        assert_eq!(proj.project(&sub[0]).unwrap(), el(&[0]));
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_t_pgroup(2, 1, 2), rat(3, 4));
        assert_eq!(lambda_t_pgroup(3, 2, 2), rat(16, 27));
        assert_eq!(lambda_t_pgroup(5, 3, 2), BigRational::zero());
        assert_eq!(lambda_t_pgroup(5, 0, 2), BigRational::one());
    }

    #[test]
    fn exact_probability_examples() {
        assert_eq!(generation_prob_exact(&FiniteAbelianGroup::trivial(), 0), BigRational::one());
        assert_eq!(generation_prob_exact(&grp(&[6]), 2), rat(2, 3));
        assert_eq!(generation_prob_exact(&grp(&[2, 2]), 3), rat(21, 32));
        assert_eq!(generation_prob_exact(&grp(&[2, 2]), 1), BigRational::zero());
    }

    #[test]
    fn generates_examples() {
        let g = grp(&[2, 4]);
        assert!(generates(&g, &[g.generator(0), g.generator(1)]).unwrap());
        assert!(!generates(&grp(&[4]), &[el(&[2])]).unwrap());
        assert!(generates(&g, &[el(&[1, 1]), el(&[0, 1])]).unwrap());
        assert!(generates(&g, &[el(&[1, 0]), el(&[1, 1])]).unwrap());
        assert!(!generates(&g, &[el(&[1, 2]), el(&[0, 2])]).unwrap());
        assert!(generates(&g, &[el(&[5, 0])]).is_err());
    }

    #[test]
    fn generates_is_symmetric() {
        let g = grp(&[2, 6]);
        let tuples = [[el(&[1, 3]), el(&[0, 2])], [el(&[1, 1]), el(&[1, 4])]];
        for t in tuples {
            let fwd = generates(&g, &t).unwrap();
            let rev = generates(&g, &[t[1].clone(), t[0].clone()]).unwrap();
            let negated = generates(&g, &[g.neg(&t[0]), t[1].clone()]).unwrap();
            assert_eq!(fwd, rev);
            assert_eq!(fwd, negated);
        }
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(generation_prob_bruteforce(&grp(&[2]), 2).unwrap(), rat(3, 4));
        assert_eq!(generation_prob_bruteforce(&FiniteAbelianGroup::trivial(), 2).unwrap(), BigRational::one());
        assert_eq!(generation_prob_bruteforce(&grp(&[3, 3]), 2).unwrap(), rat(48, 81));
        assert!(matches!(generation_prob_bruteforce(&grp(&[1000]), 3), Err(GroupError::Guard(_))));
    }

    #[test]
    fn exact_matches_bruteforce_small() {
        for m in 1..=40 {
            for g in abelian_groups_of_order(m) {
                for t in 0..=3 {
                    assert_eq!(generation_prob_exact(&g, t), generation_prob_bruteforce(&g, t).unwrap(), "{g}, t = {t}");
                }
            }
        }
    }

    #[test]
    fn monotone_in_t() {
        for g in [grp(&[2, 2, 2]), grp(&[6, 12]), grp(&[30])] {
            for t in 0..6 {
                assert!(generation_prob_exact(&g, t) <= generation_prob_exact(&g, t + 1));
            }
        }
    }

    #[test]
    fn generation_bound_small() {
        let ctx = ZetaContext::new(20);
        let r = generation_bound_check(4, &ctx).unwrap();
        assert!(r.all_hold());
        let z2n = r.checks.iter().find(|c| c.group == grp(&[2, 2, 2]) && c.n == 3).unwrap();
        assert_eq!(z2n.probability, rat(3, 4) * rat(7, 8) * rat(15, 16));
        assert!(r.square_case.iter().filter(|row| row.n == 2).count() >= 5);
    }
}
