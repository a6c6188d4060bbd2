//! Novikov Betti numbers and the checks built on them.
//!
//! Ranks are taken over the fraction field of `Q[Γ]` (or `F₂[Γ]`). Every
//! ring between `ℤ[Γ]` and a Novikov completion of an injective class embeds
//! in a common field, so these ranks are the Novikov ranks.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::complex::EquivariantComplex;
use crate::error::{input_err, NovikovError, Result};
use crate::groupring::{GrMatrix, GroupRingElement};
use crate::lattice::{
    check_dim, kernel_lattice, quotient_map, rational_rank, rational_to_string, CohomologyClass, Polytope, QuotientMap,
    Rational, Subpolytope,
};
use crate::morse::{morse_reduce, MatchingStrategy};
use crate::novseries::{leading_unit_inverse, Truncation};
use crate::rank::{matrix_rank_fraction_field, RankMethod, RankOptions};
use crate::twist::{tensor_base_change, twisted_complex, RingDescriptor, TwistedComplex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiReport {
    pub betti: Vec<usize>,
    pub chi: i64,
    pub ring: RingDescriptor,
    pub method: RankMethod,
    pub checks: BTreeMap<String, bool>,
}

impl BettiReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn passed(&self) -> bool {
        self.checks.values().all(|&ok| ok)
    }
}

pub fn euler_characteristic(x: &EquivariantComplex) -> i64 {
    x.euler_characteristic()
}

fn alternating_sum(betti: &[usize]) -> i64 {
    betti.iter().enumerate().map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
}

/// Betti numbers from fraction-field ranks of every boundary; degrees are
/// independent and run in parallel.
pub fn betti_numbers(x: &EquivariantComplex, opts: &RankOptions) -> (Vec<usize>, RankMethod) {
    let results: Vec<_> = x.boundaries().par_iter().map(|d| matrix_rank_fraction_field(d, opts)).collect();
    let method = if results.iter().all(|r| r.exact) { RankMethod::FractionFieldExact } else { RankMethod::Evaluation };
    let mut ranks = vec![0usize; x.cells().len() + 1];
    for (k, r) in results.iter().enumerate() {
        ranks[k + 1] = r.rank;
    }
    let betti = (0..x.cells().len()).map(|i| x.cell_count(i) - ranks[i] - ranks[i + 1]).collect();
    (betti, method)
}

fn report(
    x: &EquivariantComplex,
    pushed: &EquivariantComplex,
    ring: RingDescriptor,
    opts: &RankOptions,
) -> BettiReport {
    let (betti, method) = betti_numbers(pushed, opts);
    let chi = x.euler_characteristic();
    let mut checks = BTreeMap::new();
    checks.insert("euler".to_string(), alternating_sum(&betti) == chi);
    BettiReport { betti, chi, ring, method, checks }
}

/// Ranks of `HN_•(a)` over `Γ_a = ℤʳ / ker Φ_a`.
pub fn novikov_betti(x: &EquivariantComplex, a: &CohomologyClass, opts: &RankOptions) -> Result<BettiReport> {
    check_dim(x.rank(), a.rank())?;
    let q = quotient_map(std::slice::from_ref(a))?;
    let pushed = x.pushforward(&q)?;
    Ok(report(x, &pushed, RingDescriptor::for_class(a)?, opts))
}

/// Ranks over `Nov(A|B)`, computed on the cover `Γ_A`.
pub fn polytope_betti(
    x: &EquivariantComplex,
    p: &Polytope,
    b: &Subpolytope,
    opts: &RankOptions,
) -> Result<BettiReport> {
    let t = twisted_complex(x, p, b)?;
    Ok(twisted_betti(x, &t, opts))
}

/// Betti report of an already twisted complex.
pub fn twisted_betti(x: &EquivariantComplex, t: &TwistedComplex, opts: &RankOptions) -> BettiReport {
    report(x, t.complex(), t.descriptor().clone(), opts)
}

// ---------------------------------------------------------------------------
// Truncated series oracle

/// A Laurent series in one variable known modulo `s^prec`.
#[derive(Clone, Debug)]
struct Approx {
    poly: GroupRingElement,
    prec: i64,
}

impl Approx {
    fn valuation(&self) -> Option<i64> {
        self.poly.terms().keys().next().map(|e| e[0])
    }

    fn val_or_prec(&self) -> i64 {
        self.valuation().unwrap_or(self.prec)
    }

    fn cut(poly: GroupRingElement, prec: i64) -> Approx {
        let ring = poly.ring();
        let kept = poly.terms().iter().filter(|(e, _)| e[0] < prec).map(|(e, c)| (e.clone(), c.clone()));
        let poly = GroupRingElement::from_terms(ring, 1, kept).expect("terms come from a valid element");
        Approx { poly, prec }
    }

    fn mul(&self, other: &Approx) -> Approx {
        let prec = (self.prec + other.val_or_prec()).min(other.prec + self.val_or_prec());
        Approx::cut(&self.poly * &other.poly, prec)
    }

    fn sub(&self, other: &Approx) -> Approx {
        Approx::cut(&self.poly - &other.poly, self.prec.min(other.prec))
    }

    fn inverse(&self) -> Result<Approx> {
        let v = self.valuation().expect("pivots are nonzero");
        let prec = self.prec - 2 * v;
        let c = CohomologyClass::from_ints(&[1]);
        let t = Truncation::along(&c, Rational::from_integer(BigInt::from(prec - 1)))?;
        let inv = leading_unit_inverse(&self.poly, &c, &t)?;
        Ok(Approx::cut(inv.element().clone(), prec))
    }
}

/// Series rank by full pivoting on minimal valuation.
fn series_rank(mut m: Vec<Vec<Approx>>) -> Result<usize> {
    let mut rank = 0;
    let ncols = m.first().map_or(0, Vec::len);
    let mut live_rows: Vec<usize> = (0..m.len()).collect();
    let mut live_cols: Vec<usize> = (0..ncols).collect();
    loop {
        let mut pivot: Option<(usize, usize, i64)> = None;
        for (ri, &i) in live_rows.iter().enumerate() {
            for (ci, &j) in live_cols.iter().enumerate() {
                if let Some(v) = m[i][j].valuation() {
                    if pivot.is_none_or(|(_, _, best)| v < best) {
                        pivot = Some((ri, ci, v));
                    }
                }
            }
        }
        let Some((ri, ci, _)) = pivot else { break };
        let (pr, pc) = (live_rows.remove(ri), live_cols.remove(ci));
        let inv = m[pr][pc].inverse()?;
        let pivot_row = m[pr].clone();
        for &i in &live_rows {
            if m[i][pc].valuation().is_none() {
                continue;
            }
            let f = m[i][pc].mul(&inv);
            for &j in &live_cols {
                m[i][j] = m[i][j].sub(&f.mul(&pivot_row[j]));
            }
        }
        rank += 1;
    }
    Ok(rank)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleRun {
    pub order: String,
    pub ranks: Vec<usize>,
    pub betti: Vec<usize>,
}

/// Elimination over Laurent series in the single variable of `Γ_a`,
/// keeping the terms with `Φ_a ≤ order`.
pub fn truncated_homology_oracle(x: &EquivariantComplex, a: &CohomologyClass, order: &Rational) -> Result<OracleRun> {
    check_dim(x.rank(), a.rank())?;
    let q = quotient_map(std::slice::from_ref(a))?;
    if q.target_rank() != 1 {
        return input_err(format!("oracle needs a rank-1 period image, got rank {}", q.target_rank()));
    }
    let period = q.induced_class(a)?.periods()[0].clone();
    let sign: i64 = if period.is_positive() { 1 } else { -1 };
    let step = period.abs();
    let top =
        (order / &step).floor().to_integer().to_i64().ok_or_else(|| NovikovError::Input("order too large".into()))?;
    let prec = top + 1;
    let ring = x.ring().rank_field();
    let pushed = x.pushforward(&q)?.with_ring(ring)?;
    let mut ranks = vec![0usize; x.cells().len() + 1];
    for (k, d) in pushed.boundaries().iter().enumerate() {
        let mut rows = Vec::with_capacity(d.nrows());
        for row in d.rows() {
            let mut out = Vec::with_capacity(row.len());
            for e in row {
                let oriented = GroupRingElement::from_terms(
                    ring,
                    1,
                    e.terms().iter().map(|(g, c)| (vec![sign * g[0]], c.clone())),
                )?;
                let approx = Approx::cut(oriented, prec);
                if approx.poly.is_zero() && !e.is_zero() {
                    return Err(NovikovError::IncreaseOrder { order: rational_to_string(order) });
                }
                out.push(approx);
            }
            rows.push(out);
        }
        ranks[k + 1] = series_rank(rows)?;
    }
    let betti = (0..x.cells().len()).map(|i| x.cell_count(i) - ranks[i] - ranks[i + 1]).collect();
    Ok(OracleRun { order: rational_to_string(order), ranks: ranks[1..x.cells().len()].to_vec(), betti })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleStabilization {
    pub betti: Vec<usize>,
    /// First order at which two consecutive runs agreed.
    pub order: u64,
    pub runs: Vec<(u64, Option<Vec<usize>>)>,
}

/// Runs the oracle at `N = 1, 2, 4, …` until two consecutive runs agree.
pub fn stabilized_oracle(x: &EquivariantComplex, a: &CohomologyClass, max_order: u64) -> Result<OracleStabilization> {
    let mut runs = Vec::new();
    let mut previous: Option<Vec<usize>> = None;
    let mut n = 1u64;
    while n <= max_order {
        let result = match truncated_homology_oracle(x, a, &Rational::from_integer(BigInt::from(n))) {
            Ok(run) => Some(run.betti),
            Err(NovikovError::IncreaseOrder { .. }) => None,
            Err(e) => return Err(e),
        };
        runs.push((n, result.clone()));
        if let (Some(prev), Some(cur)) = (&previous, &result) {
            if prev == cur {
                return Ok(OracleStabilization { betti: cur.clone(), order: n, runs });
            }
        }
        previous = result;
        n *= 2;
    }
    Err(NovikovError::IncreaseOrder { order: max_order.to_string() })
}

// ---------------------------------------------------------------------------
// Main theorem square

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MainTheoremReport {
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub restrict: Vec<usize>,
    pub full_from_a: BettiReport,
    pub full_from_b: BettiReport,
    pub restricted_from_a: BettiReport,
    pub restricted_from_b: BettiReport,
    pub morse_from_a: BettiReport,
    pub morse_from_b: BettiReport,
    pub complexes_agree: bool,
    pub square_commutes: bool,
    pub passed: bool,
}

impl MainTheoremReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// `f` is a chain map `C → D` when `∂ᴰ_k f_k = f_{k−1} ∂ᶜ_k` in every degree.
pub fn is_chain_map(c: &EquivariantComplex, d: &EquivariantComplex, f: &[GrMatrix]) -> Result<bool> {
    check_dim(c.cells().len(), f.len())?;
    for k in 1..c.cells().len() {
        let (Some(dc), Some(dd)) = (c.boundary(k), d.boundary(k)) else { return Ok(false) };
        if dd.checked_mul(&f[k])? != f[k - 1].checked_mul(dc)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn identity_map(x: &EquivariantComplex) -> Vec<GrMatrix> {
    (0..x.cells().len()).map(|k| GrMatrix::identity(x.ring(), x.rank(), x.cell_count(k))).collect()
}

fn compose(f: &[GrMatrix], g: &[GrMatrix]) -> Result<Vec<GrMatrix>> {
    f.iter().zip(g).map(|(a, b)| a.checked_mul(b)).collect()
}

/// Compares the polytope complexes built from two classes `a`, `b` of `P`
/// (given as convex weights on the vertices), both over the full polytope
/// and restricted to `B`, and checks that comparison commutes with
/// restriction at the matrix level.
pub fn main_theorem_check(
    x: &EquivariantComplex,
    p: &Polytope,
    a_weights: &[Rational],
    b_weights: &[Rational],
    b: &Subpolytope,
    seeds: (u64, u64),
    opts: &RankOptions,
) -> Result<MainTheoremReport> {
    let a = p.convex_combination(a_weights)?;
    let bc = p.convex_combination(b_weights)?;
    let full = Subpolytope::full(p);

    // "from a": twisted description; "from b": tensor base change
    let ta_full = twisted_complex(x, p, &full)?;
    let tb_full = tensor_base_change(x, p, &full)?;
    let ta_b = twisted_complex(x, p, b)?;
    let tb_b = tensor_base_change(x, p, b)?;

    let complexes_agree = ta_full.complex() == tb_full.complex() && ta_b.complex() == tb_b.complex();

    // comparison Φ: C(a) → C(b) and restriction ι_B are identities on the
    // preferred-lift bases; both composites around the square must agree
    let phi = identity_map(ta_full.complex());
    let iota_a = identity_map(ta_full.complex());
    let iota_b = identity_map(tb_full.complex());
    let phi_b = identity_map(ta_b.complex());
    let down_then_across = compose(&phi_b, &iota_a)?;
    let across_then_down = compose(&iota_b, &phi)?;
    let square_commutes = is_chain_map(ta_full.complex(), tb_full.complex(), &phi)?
        && is_chain_map(ta_b.complex(), tb_b.complex(), &phi_b)?
        && is_chain_map(ta_full.complex(), ta_b.complex(), &iota_a)?
        && is_chain_map(tb_full.complex(), tb_b.complex(), &iota_b)?
        && down_then_across == across_then_down;

    let full_from_a = twisted_betti(x, &ta_full, opts);
    let full_from_b = twisted_betti(x, &tb_full, opts);
    let restricted_from_a = twisted_betti(x, &ta_b, opts);
    let restricted_from_b = twisted_betti(x, &tb_b, opts);

    let reduced_a = morse_reduce(ta_full.complex(), seeds.0, MatchingStrategy::Greedy)?.complex;
    let reduced_b = morse_reduce(tb_b.complex(), seeds.1, MatchingStrategy::Greedy)?.complex;
    let morse_from_a = report(x, &reduced_a, ta_full.descriptor().clone(), opts);
    let morse_from_b = report(x, &reduced_b, tb_b.descriptor().clone(), opts);

    let passed = complexes_agree
        && square_commutes
        && full_from_a == full_from_b
        && restricted_from_a == restricted_from_b
        && morse_from_a.betti == full_from_a.betti
        && morse_from_b.betti == restricted_from_b.betti
        && [&full_from_a, &full_from_b, &restricted_from_a, &restricted_from_b, &morse_from_a, &morse_from_b]
            .iter()
            .all(|r| r.passed());
    Ok(MainTheoremReport {
        a: a.to_strings(),
        b: bc.to_strings(),
        restrict: b.indices().to_vec(),
        full_from_a,
        full_from_b,
        restricted_from_a,
        restricted_from_b,
        morse_from_a,
        morse_from_b,
        complexes_agree,
        square_commutes,
        passed,
    })
}

// ---------------------------------------------------------------------------
// Rational approximation

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApproximationFlags {
    pub distinct: bool,
    pub within_eps: bool,
    pub kernel_containing: bool,
    pub spanning: bool,
}

impl ApproximationFlags {
    pub fn all(&self) -> bool {
        self.distinct && self.within_eps && self.kernel_containing && self.spanning
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproximationFamily {
    pub target: CohomologyClass,
    pub eps: Rational,
    /// Kernel of the cover the family lives on.
    pub kernel: Vec<Vec<i64>>,
    pub classes: Vec<CohomologyClass>,
    pub flags: ApproximationFlags,
}

impl ApproximationFamily {
    /// Integer multiples `q·b_j` clearing all denominators.
    pub fn integral_family(&self) -> Vec<Vec<BigInt>> {
        let mut lcm = BigInt::one();
        for c in &self.classes {
            for p in c.periods() {
                lcm = lcm.lcm(p.denom());
            }
        }
        self.classes
            .iter()
            .map(|c| c.periods().iter().map(|p| (p * Rational::from_integer(lcm.clone())).to_integer()).collect())
            .collect()
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "target": self.target.to_strings(),
            "eps": rational_to_string(&self.eps),
            "kernel": self.kernel,
            "classes": self.classes.iter().map(CohomologyClass::to_strings).collect::<Vec<_>>(),
            "integral": self.integral_family().iter().map(|v| v.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "flags": self.flags,
        })
    }
}

/// Family of `rank(im Φ_u)` classes near `u`, each vanishing on `ker Φ_u`.
pub fn rational_approximation(u: &CohomologyClass, eps: &Rational, r: usize) -> Result<ApproximationFamily> {
    check_dim(r, u.rank())?;
    rational_approximation_in_cover(u, eps, std::slice::from_ref(u))
}

/// As [`rational_approximation`], on the cover cut out by `cover` (which
/// must be a cover on which `u` is exact). The family spans the functionals
/// of that cover, so its size is the cover's deck rank.
pub fn rational_approximation_in_cover(
    u: &CohomologyClass,
    eps: &Rational,
    cover: &[CohomologyClass],
) -> Result<ApproximationFamily> {
    if !eps.is_positive() {
        return input_err("eps must be positive");
    }
    for c in cover {
        check_dim(u.rank(), c.rank())?;
    }
    let q = QuotientMap::from_kernel(u.rank(), &kernel_lattice(cover)?)?;
    // u must factor through the cover
    let coords = q.induced_class(u).map_err(|_| NovikovError::Input("class is not exact on the cover".into()))?;
    let basis: Vec<CohomologyClass> = q.matrix().iter().map(|row| CohomologyClass::from_ints(row)).collect();
    let m = basis.len();
    let mut classes = Vec::with_capacity(m);
    if m > 0 {
        let norm_sum: Rational = basis.iter().map(CohomologyClass::sup_norm).fold(Rational::zero(), |s, n| s + n);
        let mut delta = eps / (Rational::from_integer(BigInt::from(2)) * (Rational::one() + norm_sum));
        if coords.periods()[m - 1].clone() + &delta == Rational::zero() {
            delta /= Rational::from_integer(BigInt::from(2));
        }
        let mut v: Vec<Rational> = coords.periods().to_vec();
        v[m - 1] += &delta;
        classes.push(combine(&basis, &v, u.rank()));
        for j in 0..m - 1 {
            v[j] += &delta;
            classes.push(combine(&basis, &v, u.rank()));
        }
    }
    let kernel = q.kernel().to_vec();
    let flags = approximation_flags(u, eps, &kernel, m, &classes)?;
    Ok(ApproximationFamily { target: u.clone(), eps: eps.clone(), kernel, classes, flags })
}

fn combine(basis: &[CohomologyClass], coeffs: &[Rational], rank: usize) -> CohomologyClass {
    let mut periods = vec![Rational::zero(); rank];
    for (f, c) in basis.iter().zip(coeffs) {
        for (p, x) in periods.iter_mut().zip(f.periods()) {
            *p += c * x;
        }
    }
    CohomologyClass::new(periods)
}

/// Recomputes every flag directly from the classes.
pub fn approximation_flags(
    u: &CohomologyClass,
    eps: &Rational,
    kernel: &[Vec<i64>],
    expected: usize,
    classes: &[CohomologyClass],
) -> Result<ApproximationFlags> {
    let distinct = classes.iter().enumerate().all(|(i, c)| classes[..i].iter().all(|d| d != c));
    let mut within_eps = true;
    let mut kernel_containing = true;
    for c in classes {
        within_eps &= c.sub(u)?.sup_norm() < *eps;
        for k in kernel {
            kernel_containing &= c.eval(k)?.is_zero();
        }
    }
    let rows: Vec<Vec<Rational>> = classes.iter().map(|c| c.periods().to_vec()).collect();
    let spanning = classes.len() == expected && rational_rank(&rows) == expected;
    Ok(ApproximationFlags { distinct, within_eps, kernel_containing, spanning })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::lattice::parse_rational;

    fn class(s: &str) -> CohomologyClass {
        CohomologyClass::parse(s).unwrap()
    }

    fn betti(x: &EquivariantComplex, a: &str) -> Vec<usize> {
        novikov_betti(x, &class(a), &RankOptions::default()).unwrap().betti
    }

    #[test]
    fn novikov_examples() {
        assert_eq!(betti(&corpus::circle(), "1"), vec![0, 0]);
        assert_eq!(betti(&corpus::circle(), "0"), vec![1, 1]);
        assert_eq!(betti(&corpus::torus(), "1,1"), vec![0, 0, 0]);
        assert_eq!(betti(&corpus::torus(), "0,0"), vec![1, 2, 1]);
        assert_eq!(betti(&corpus::klein(), "1"), vec![0, 0, 0]);
        assert_eq!(betti(&corpus::klein(), "0"), vec![1, 2, 1]);
        assert_eq!(betti(&corpus::genus_two(), "0,0,0,0"), vec![1, 4, 1]);
        assert_eq!(betti(&corpus::genus_two(), "1,0,0,0"), vec![0, 2, 0]);
    }

    #[test]
    fn polytope_examples() {
        let opts = RankOptions::default();
        let p = Polytope::parse("1,0;0,1").unwrap();
        let r = polytope_betti(&corpus::torus(), &p, &Subpolytope::full(&p), &opts).unwrap();
        assert_eq!(r.betti, vec![0, 0, 0]);
        assert!(r.passed());
        let p = Polytope::parse("1;2").unwrap();
        let b = Subpolytope::new(p.clone(), vec![0]).unwrap();
        assert_eq!(polytope_betti(&corpus::circle(), &p, &b, &opts).unwrap().betti, vec![0, 0]);
        let p = Polytope::parse("0,0").unwrap();
        assert_eq!(polytope_betti(&corpus::torus(), &p, &Subpolytope::full(&p), &opts).unwrap().betti, vec![1, 2, 1]);
    }

    #[test]
    fn report_json_shape() {
        let r = novikov_betti(&corpus::circle(), &class("1"), &RankOptions::default()).unwrap();
        let keys: Vec<String> = r.to_json().as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, vec!["betti", "chi", "ring", "method", "checks"]);
        assert_eq!(r.to_json()["method"], "fraction-field exact");
    }

    #[test]
    fn oracle_examples() {
        let ten = parse_rational("10").unwrap();
        let run = truncated_homology_oracle(&corpus::circle(), &class("1"), &ten).unwrap();
        assert_eq!(run.ranks, vec![1]);
        assert_eq!(run.betti, vec![0, 0]);
        let run = truncated_homology_oracle(&corpus::torus(), &class("1,0"), &ten).unwrap();
        assert_eq!(run.betti, vec![0, 0, 0]);
        let zero = EquivariantComplex::from_json_str(
            r#"{"coefficients":"Q","rank":1,"cells":[["v","w"],["e"]],"boundaries":[[["0"],["0"]]]}"#,
        )
        .unwrap();
        assert_eq!(truncated_homology_oracle(&zero, &class("1"), &ten).unwrap().betti, vec![2, 1]);
    }

    #[test]
    fn oracle_needs_order_for_far_terms() {
        let x = EquivariantComplex::from_json_str(
            r#"{"coefficients":"Z","rank":1,"cells":[["v"],["e"]],"boundaries":[[["t^5 - t^3"]]]}"#,
        )
        .unwrap();
        let one = Rational::one();
        assert!(matches!(truncated_homology_oracle(&x, &class("1"), &one), Err(NovikovError::IncreaseOrder { .. })));
        let s = stabilized_oracle(&x, &class("1"), 1024).unwrap();
        assert_eq!(s.betti, vec![0, 0]);
        assert!(s.order >= 8);
    }

    #[test]
    fn oracle_handles_negative_periods() {
        let s = stabilized_oracle(&corpus::subdivided_circle(), &class("-3/2"), 1024).unwrap();
        assert_eq!(s.betti, vec![0, 0]);
    }

    #[test]
    fn main_theorem_examples() {
        let opts = RankOptions::default();
        let p = Polytope::parse("1,0;0,1").unwrap();
        let half = parse_rational("1/2").unwrap();
        let w = |a: &str, b: &str| vec![parse_rational(a).unwrap(), parse_rational(b).unwrap()];
        let r = main_theorem_check(
            &corpus::torus(),
            &p,
            &w("1", "0"),
            &[half.clone(), half],
            &Subpolytope::full(&p),
            (1, 2),
            &opts,
        )
        .unwrap();
        assert!(r.passed);
        assert_eq!(r.full_from_a.betti, vec![0, 0, 0]);
        assert!(main_theorem_check(
            &corpus::torus(),
            &p,
            &w("1", "1"),
            &w("1", "0"),
            &Subpolytope::full(&p),
            (1, 2),
            &opts
        )
        .is_err());
        let p1 = Polytope::parse("1;2").unwrap();
        let r = main_theorem_check(
            &corpus::subdivided_circle(),
            &p1,
            &w("1", "0"),
            &w("1/3", "2/3"),
            &Subpolytope::new(p1.clone(), vec![1]).unwrap(),
            (1, 2),
            &opts,
        )
        .unwrap();
        assert!(r.passed);
    }

    #[test]
    fn approximation_examples() {
        let eps = parse_rational("1/10").unwrap();
        let f = rational_approximation(&class("1,0"), &parse_rational("1").unwrap(), 2).unwrap();
        assert_eq!(f.classes.len(), 1);
        assert!(f.flags.all());
        assert!(f.classes[0].eval(&[0, 1]).unwrap().is_zero());
        let f = rational_approximation(&class("0,0"), &eps, 2).unwrap();
        assert!(f.classes.is_empty());
        assert!(f.flags.all());
        // on the full cover of ℤ² the family spans ℚ²
        let cover = [class("1,0"), class("0,1")];
        let f = rational_approximation_in_cover(&class("1,1"), &eps, &cover).unwrap();
        assert_eq!(f.classes.len(), 2);
        assert!(f.flags.all());
        assert!(rational_approximation(&class("1,1"), &Rational::zero(), 2).is_err());
        assert!(rational_approximation_in_cover(&class("1,1"), &eps, &[class("1,0")]).is_err());
    }
}
