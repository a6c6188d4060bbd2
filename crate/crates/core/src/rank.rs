//! Rank of group-ring matrices over the fraction field of the Laurent ring.
//!
//! Small matrices go through fraction-free (Bareiss) elimination in the
//! Laurent ring itself. Larger ones are evaluated at random points of the
//! torus and eliminated over the coefficient field; every evaluation is a
//! lower bound, and the result is accepted once two trials reach the same
//! maximum.

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::groupring::{CoefficientRing, GrMatrix, GroupRingElement};
use crate::lattice::{rational_rank, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RankMethod {
    #[serde(rename = "fraction-field exact")]
    FractionFieldExact,
    #[serde(rename = "evaluation")]
    Evaluation,
    #[serde(rename = "truncated-oracle")]
    TruncatedOracle,
}

impl RankMethod {
    pub fn tag(self) -> &'static str {
        match self {
            RankMethod::FractionFieldExact => "fraction-field exact",
            RankMethod::Evaluation => "evaluation",
            RankMethod::TruncatedOracle => "truncated-oracle",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOptions {
    /// Matrices with both dimensions at most this size use exact elimination.
    pub exact_threshold: usize,
    pub seed: u64,
    pub max_trials: usize,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions { exact_threshold: 64, seed: 0, max_trials: 16 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankResult {
    pub rank: usize,
    pub method: RankMethod,
    /// True when the rank is certified by exact elimination.
    pub exact: bool,
    pub trials: usize,
}

pub fn matrix_rank_fraction_field(m: &GrMatrix, opts: &RankOptions) -> RankResult {
    if m.is_zero() {
        return RankResult { rank: 0, method: RankMethod::FractionFieldExact, exact: true, trials: 0 };
    }
    if m.nrows().max(m.ncols()) <= opts.exact_threshold {
        RankResult { rank: bareiss_rank(m), method: RankMethod::FractionFieldExact, exact: true, trials: 0 }
    } else {
        let (rank, trials) = evaluation_rank(m, opts);
        RankResult { rank, method: RankMethod::Evaluation, exact: false, trials }
    }
}

/// Fraction-free elimination in the Laurent ring.
pub fn bareiss_rank(m: &GrMatrix) -> usize {
    let ring = m.ring().rank_field();
    let mut a = m.with_ring(ring).expect("promotion to a field is total");
    let (nrows, ncols) = (a.nrows(), a.ncols());
    let mut prev = GroupRingElement::one(ring, a.rank());
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        // sparsest available pivot keeps intermediate minors small
        let Some(p) = (r..nrows).filter(|&i| !a.get(i, c).is_zero()).min_by_key(|&i| a.get(i, c).len()) else {
            continue;
        };
        if p != r {
            for j in 0..ncols {
                let tmp = a.get(p, j).clone();
                a.set(p, j, a.get(r, j).clone());
                a.set(r, j, tmp);
            }
        }
        let pivot = a.get(r, c).clone();
        for i in r + 1..nrows {
            let lead = a.get(i, c).clone();
            for j in c + 1..ncols {
                let num = &(&pivot * a.get(i, j)) - &(&lead * a.get(r, j));
                let value = num.exact_div(&prev).expect("Bareiss step divides exactly in an integral domain");
                a.set(i, j, value);
            }
            a.set(i, c, GroupRingElement::zero(ring, a.rank()));
        }
        prev = pivot;
        r += 1;
    }
    r
}

/// Element of `GF(2⁶⁴) = 𝔽₂[x]/(x⁶⁴ + x⁴ + x³ + x + 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gf64(pub u64);

impl Gf64 {
    const REDUCTION: u64 = 0b1_1011;

    pub fn add(self, other: Gf64) -> Gf64 {
        Gf64(self.0 ^ other.0)
    }

    pub fn mul(self, other: Gf64) -> Gf64 {
        let (a, b) = (self.0 as u128, other.0 as u128);
        let mut prod: u128 = 0;
        for i in 0..64 {
            if (b >> i) & 1 == 1 {
                prod ^= a << i;
            }
        }
        for i in (64..128).rev() {
            if (prod >> i) & 1 == 1 {
                prod ^= ((Self::REDUCTION as u128) << (i - 64)) ^ (1u128 << i);
            }
        }
        Gf64(prod as u64)
    }

    pub fn pow(self, mut e: u128) -> Gf64 {
        let mut base = self;
        let mut acc = Gf64(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(self) -> Option<Gf64> {
        if self.0 == 0 {
            return None;
        }
        Some(self.pow(u64::MAX as u128 - 1))
    }
}

fn gf64_rank(mut m: Vec<Vec<Gf64>>) -> usize {
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c].0 != 0) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        let pivot_row = m[r].clone();
        for row in m.iter_mut().skip(r + 1) {
            if row[c].0 == 0 {
                continue;
            }
            let f = row[c].mul(inv);
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = x.add(f.mul(*p));
            }
        }
        r += 1;
    }
    r
}

fn eval_gf64(x: &GroupRingElement, point: &[Gf64], inverses: &[Gf64]) -> Gf64 {
    let mut acc = Gf64(0);
    for e in x.terms().keys() {
        let mut v = Gf64(1);
        for (i, &k) in e.iter().enumerate() {
            if k > 0 {
                v = v.mul(point[i].pow(k as u128));
            } else if k < 0 {
                v = v.mul(inverses[i].pow((-k) as u128));
            }
        }
        acc = acc.add(v);
    }
    acc
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let num: i64 = rng.gen_range(-997..=997);
        let den: i64 = rng.gen_range(1..=991);
        if num != 0 {
            return Rational::new(BigInt::from(num), BigInt::from(den));
        }
    }
}

/// Rank of a single specialization at a random point.
pub fn evaluation_trial(m: &GrMatrix, rng: &mut ChaCha8Rng) -> usize {
    let rank = m.rank();
    match m.ring() {
        CoefficientRing::Mod2 => {
            let point: Vec<Gf64> = (0..rank)
                .map(|_| loop {
                    let v = Gf64(rng.gen());
                    if v.0 != 0 {
                        break v;
                    }
                })
                .collect();
            let inverses: Vec<Gf64> = point.iter().map(|p| p.inv().expect("nonzero")).collect();
            let rows = m.rows().map(|row| row.iter().map(|x| eval_gf64(x, &point, &inverses)).collect()).collect();
            gf64_rank(rows)
        }
        _ => {
            let point: Vec<Rational> = (0..rank).map(|_| random_rational(rng)).collect();
            let inverses: Vec<Rational> = point.iter().map(|p| Rational::one() / p).collect();
            let rows: Vec<Vec<Rational>> =
                m.rows().map(|row| row.iter().map(|x| x.eval_rational(&point, &inverses)).collect()).collect();
            rational_rank(&rows)
        }
    }
}

/// Randomized rank; returns `(rank, trials used)`.
pub fn evaluation_rank(m: &GrMatrix, opts: &RankOptions) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best = 0usize;
    let mut hits = 0usize;
    let mut trials = 0usize;
    while trials < opts.max_trials.max(2) {
        trials += 1;
        let r = evaluation_trial(m, &mut rng);
        match r.cmp(&best) {
            std::cmp::Ordering::Greater => {
                best = r;
                hits = 1;
            }
            std::cmp::Ordering::Equal => hits += 1,
            std::cmp::Ordering::Less => {}
        }
        if hits >= 2 && trials >= 2 {
            break;
        }
        if best == m.nrows().min(m.ncols()) {
            // full rank cannot be exceeded
            break;
        }
    }
    if best == 0 && m.is_zero() {
        return (0, trials);
    }
    (best, trials)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(ring: CoefficientRing, rank: usize, rows: &[&[&str]]) -> GrMatrix {
        let ncols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
        GrMatrix::parse_rows(ring, rank, ncols, &rows).unwrap()
    }

    #[test]
    fn examples() {
        let opts = RankOptions::default();
        let zero = GrMatrix::zeros(CoefficientRing::Rat, 2, 3, 2);
        assert_eq!(matrix_rank_fraction_field(&zero, &opts).rank, 0);
        let col = matrix(CoefficientRing::Rat, 2, &[&["t1 - 1"], &["t2 - 1"]]);
        assert_eq!(matrix_rank_fraction_field(&col, &opts).rank, 1);
        let id = GrMatrix::identity(CoefficientRing::Rat, 2, 2);
        let res = matrix_rank_fraction_field(&id, &opts);
        assert_eq!(res.rank, 2);
        assert!(res.exact);
    }

    #[test]
    fn bareiss_detects_dependence() {
        // second row is (t+1) times the first
        let m = matrix(
            CoefficientRing::Int,
            1,
            &[&["t - 1", "t^2 - 1", "1"], &["t^2 - 1", "t^3 + t^2 - t - 1", "t + 1"], &["1", "0", "t"]],
        );
        assert_eq!(bareiss_rank(&m), 2);
        let mut opts = RankOptions::default();
        opts.exact_threshold = 0;
        let res = matrix_rank_fraction_field(&m, &opts);
        assert_eq!(res.rank, 2);
        assert_eq!(res.method, RankMethod::Evaluation);
        assert!(!res.exact);
    }

    #[test]
    fn mod2_rank_and_evaluation_agree() {
        // (1+t)² = 1+t² in characteristic two makes this singular
        let m = matrix(CoefficientRing::Mod2, 1, &[&["1 + t", "1 + t^2"], &["1", "1 + t"]]);
        assert_eq!(bareiss_rank(&m), 1);
        let q = matrix(CoefficientRing::Rat, 1, &[&["1 + t", "1 + t^2"], &["1", "1 + t"]]);
        assert_eq!(bareiss_rank(&q), 2);
        let opts = RankOptions { exact_threshold: 0, seed: 7, max_trials: 8 };
        assert_eq!(matrix_rank_fraction_field(&m, &opts).rank, 1);
        assert_eq!(matrix_rank_fraction_field(&q, &opts).rank, 2);
    }

    #[test]
    fn gf64_field_axioms() {
        let a = Gf64(0x1234_5678_9abc_def1);
        let b = Gf64(0x0fed_cba9_8765_4321);
        assert_eq!(a.mul(b), b.mul(a));
        assert_eq!(a.mul(a.inv().unwrap()), Gf64(1));
        assert_eq!(a.mul(Gf64(1)), a);
        assert!(Gf64(0).inv().is_none());
    }
}
