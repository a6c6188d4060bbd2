//! End-to-end checks over the bundled corpus, one per acceptance criterion.

use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{scale_check, EquivariantComplex};
use crate::corpus;
use crate::error::Result;
use crate::groupring::{CoefficientRing, GroupRingElement};
use crate::homology::{
    main_theorem_check, novikov_betti, polytope_betti, rational_approximation, rational_approximation_in_cover,
    stabilized_oracle, truncated_homology_oracle,
};
use crate::lattice::{
    kernel_lattice, polytope_min_period, quotient_map, CohomologyClass, Polytope, Rational, Subpolytope,
};
use crate::morse::{morse_reduce, MatchingStrategy};
use crate::novseries::positivity_check;
use crate::rank::RankOptions;
use crate::twist::{tensor_base_change, twisted_complex, zero_vertex_check, zero_vertex_extend};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn class(v: &[(i64, i64)]) -> CohomologyClass {
    CohomologyClass::new(v.iter().map(|&(n, d)| q(n, d)).collect())
}

fn ints(v: &[i64]) -> CohomologyClass {
    CohomologyClass::from_ints(v)
}

/// Sample classes used for complexes of deck rank `rank`.
pub fn sample_classes(rank: usize) -> Vec<CohomologyClass> {
    match rank {
        0 => vec![CohomologyClass::zero(0)],
        1 => vec![ints(&[0]), ints(&[1]), ints(&[-2]), class(&[(3, 2)])],
        2 => vec![ints(&[0, 0]), ints(&[1, 0]), ints(&[0, 1]), ints(&[1, 1]), ints(&[2, 3]), class(&[(-1, 1), (2, 3)])],
        4 => vec![
            ints(&[0, 0, 0, 0]),
            ints(&[1, 0, 0, 0]),
            ints(&[1, 1, 0, 0]),
            ints(&[1, -1, 2, 0]),
            ints(&[0, 0, 0, 1]),
        ],
        r => vec![CohomologyClass::zero(r)],
    }
}

/// Sample polytopes used for complexes of deck rank `rank`.
pub fn sample_polytopes(rank: usize) -> Vec<Polytope> {
    let parse = |s: &str| Polytope::parse(s).expect("sample polytope parses");
    match rank {
        0 => vec![Polytope::new(vec![CohomologyClass::zero(0)]).expect("zero vertex")],
        1 => vec![parse("1"), parse("1;2"), parse("1;-1")],
        2 => vec![parse("1,0;0,1"), parse("1,1"), parse("1,0;0,1;1,1"), parse("2,4"), parse("1,0;0,0")],
        4 => vec![parse("1,0,0,0;0,1,0,0"), parse("1,1,0,0;0,0,1,1;1,0,0,0")],
        r => vec![Polytope::new(vec![CohomologyClass::zero(r)]).expect("zero vertex")],
    }
}

fn subpolytopes(p: &Polytope) -> Vec<Subpolytope> {
    (1u32..(1 << p.len()))
        .map(|mask| {
            let idx = (0..p.len()).filter(|i| mask & (1 << i) != 0).collect();
            Subpolytope::new(p.clone(), idx).expect("valid subset")
        })
        .collect()
}

fn corpus_complexes() -> Vec<(&'static str, EquivariantComplex)> {
    corpus::documents()
        .iter()
        .map(|(name, text)| (*name, EquivariantComplex::from_json_str(text).expect("bundled complex")))
        .collect()
}

fn outcome(id: u32, title: &'static str, result: Result<(bool, String)>) -> CriterionOutcome {
    match result {
        Ok((passed, detail)) => CriterionOutcome { id, title, passed, detail },
        Err(e) => CriterionOutcome { id, title, passed: false, detail: format!("error: {e}") },
    }
}

fn validation_suite() -> Result<(bool, String)> {
    let mut checked = 0;
    for (name, x) in corpus_complexes() {
        x.validate()?;
        for seed in 0..20 {
            let r = morse_reduce(&x, seed, MatchingStrategy::Greedy)?;
            r.complex.validate()?;
            if r.complex.euler_characteristic() != x.euler_characteristic() {
                return Ok((false, format!("{name}: seed {seed} changed the Euler characteristic")));
            }
            checked += 1;
        }
    }
    Ok((true, format!("{checked} reduced complexes and the corpus satisfy d^2 = 0")))
}

fn ordinary_recovery(opts: &RankOptions) -> Result<(bool, String)> {
    let cases = [(corpus::point(), vec![1]), (corpus::circle(), vec![1, 1]), (corpus::torus(), vec![1, 2, 1])];
    for (x, expected) in cases {
        let b = novikov_betti(&x, &CohomologyClass::zero(x.rank()), opts)?.betti;
        if b != expected {
            return Ok((false, format!("expected {expected:?}, got {b:?}")));
        }
    }
    Ok((true, "point (1), circle (1,1), torus (1,2,1)".into()))
}

fn novikov_vanishing(opts: &RankOptions) -> Result<(bool, String)> {
    let sixteen = q(16, 1);
    let mut cases = vec![(corpus::circle(), ints(&[1])), (corpus::circle(), ints(&[-3]))];
    for a in [ints(&[1, 0]), ints(&[0, 1]), ints(&[1, 1]), ints(&[2, 3])] {
        cases.push((corpus::torus(), a));
    }
    cases.push((corpus::klein(), ints(&[1])));
    for (x, a) in &cases {
        let b = novikov_betti(x, a, opts)?.betti;
        let oracle = truncated_homology_oracle(x, a, &sixteen)?.betti;
        if b.iter().any(|&v| v != 0) || oracle != b {
            return Ok((false, format!("class {a}: betti {b:?}, oracle {oracle:?}")));
        }
    }
    Ok((true, format!("{} cases vanish, oracle at N=16 agrees", cases.len())))
}

fn euler_invariance(opts: &RankOptions) -> Result<(bool, String)> {
    let mut n = 0;
    for (name, x) in corpus_complexes() {
        for a in sample_classes(x.rank()) {
            let r = novikov_betti(&x, &a, opts)?;
            let alt: i64 =
                r.betti.iter().enumerate().map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
            if alt != x.euler_characteristic() {
                return Ok((false, format!("{name}, class {a}: alternating sum {alt}")));
            }
            n += 1;
        }
    }
    Ok((true, format!("{n} (complex, class) pairs")))
}

fn random_rational(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    q(rng.gen_range(-bound * 4..=bound * 4), rng.gen_range(1..=4))
}

fn vertex_reduction() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut positive = 0;
    let trials = 200;
    for trial in 0..trials {
        let rank = rng.gen_range(1..=3usize);
        let support_size = rng.gen_range(1..=5);
        let support: Vec<Vec<i64>> =
            (0..support_size).map(|_| (0..rank).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let mut u = GroupRingElement::zero(CoefficientRing::Int, rank);
        for e in &support {
            u.add_term(e.clone(), q(1, 1));
        }
        if u.is_zero() {
            continue;
        }
        let nverts = rng.gen_range(1..=4);
        let mut vertices = Vec::new();
        let prefer_positive = trial % 2 == 0;
        while vertices.len() < nverts {
            let v = CohomologyClass::new((0..rank).map(|_| random_rational(&mut rng, 3)).collect());
            if prefer_positive
                && !u.terms().keys().all(|e| v.eval(e).map(|x| x > q(0, 1)).unwrap_or(false))
                && rng.gen_range(0..50) != 0
            {
                continue;
            }
            vertices.push(v);
        }
        let p = Polytope::new(vertices)?;
        let weights: Vec<Rational> = {
            let raw: Vec<i64> = (0..p.len()).map(|_| rng.gen_range(1..=9)).collect();
            let total: i64 = raw.iter().sum();
            raw.iter().map(|&w| q(w, total)).collect()
        };
        let c = p.convex_combination(&weights)?;
        let at_vertices = positivity_check(&u, &p)?;
        for e in u.terms().keys() {
            let value = c.eval(e)?;
            if polytope_min_period(&p, e)? > value {
                return Ok((false, format!("trial {trial}: min period exceeds the combination")));
            }
            if at_vertices && value <= q(0, 1) {
                return Ok((false, format!("trial {trial}: positivity lost at the combination")));
            }
        }
        positive += usize::from(at_vertices);
    }
    Ok((positive >= 30, format!("{trials} triples, {positive} positive at every vertex")))
}

fn ray_invariance(opts: &RankOptions) -> Result<(bool, String)> {
    let mut n = 0;
    for (name, x) in corpus_complexes() {
        for p in sample_polytopes(x.rank()) {
            for r in [q(1, 2), q(3, 1)] {
                let check = scale_check(&x, &p, &r, opts)?;
                if !check.passed() {
                    return Ok((false, format!("{name}: scaling by {r} changed the output")));
                }
                n += 1;
            }
        }
    }
    Ok((true, format!("{n} (complex, polytope, factor) cases byte-identical")))
}

fn twisted_equals_tensor() -> Result<(bool, String)> {
    let mut n = 0;
    for (name, x) in corpus_complexes() {
        for p in sample_polytopes(x.rank()) {
            for b in subpolytopes(&p) {
                if twisted_complex(&x, &p, &b)? != tensor_base_change(&x, &p, &b)? {
                    return Ok((false, format!("{name}: twisted and base-changed complexes differ")));
                }
                n += 1;
            }
        }
    }
    Ok((true, format!("{n} (complex, polytope, subpolytope) cases equal")))
}

fn zero_vertex_trick(opts: &RankOptions) -> Result<(bool, String)> {
    let mut n = 0;
    for (name, x) in corpus_complexes() {
        for p in sample_polytopes(x.rank()) {
            let check = zero_vertex_check(&p)?;
            let extended = zero_vertex_extend(&p);
            if !check.passed() || kernel_lattice(p.vertices())? != kernel_lattice(extended.vertices())? {
                return Ok((false, format!("{name}: zero vertex changed the cover")));
            }
            for b in subpolytopes(&p) {
                let before = polytope_betti(&x, &p, &b, opts)?;
                let after = polytope_betti(&x, &extended, &b.transfer(&extended)?, opts)?;
                if before != after {
                    return Ok((false, format!("{name}: report changed after extension")));
                }
                n += 1;
            }
        }
    }
    Ok((true, format!("{n} reports unchanged")))
}

fn morse_invariance(opts: &RankOptions) -> Result<(bool, String)> {
    let mut n = 0;
    for (name, x) in corpus_complexes() {
        let classes: Vec<CohomologyClass> = sample_classes(x.rank()).into_iter().take(3).collect();
        for seed in 0..20 {
            let reduced = morse_reduce(&x, seed, MatchingStrategy::Greedy)?.complex;
            for a in &classes {
                let before = novikov_betti(&x, a, opts)?;
                let after = novikov_betti(&reduced, a, opts)?;
                if before.betti != after.betti {
                    return Ok((
                        false,
                        format!("{name}, seed {seed}, class {a}: {:?} vs {:?}", before.betti, after.betti),
                    ));
                }
                n += 1;
            }
        }
    }
    Ok((true, format!("{n} (complex, seed, class) cases agree")))
}

fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=6)).collect();
    let total: i64 = raw.iter().sum();
    if total == 0 {
        return (0..n).map(|i| q(i64::from(i == 0), 1)).collect();
    }
    raw.iter().map(|&w| q(w, total)).collect()
}

fn main_theorem(opts: &RankOptions) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let cases = [
        (corpus::torus(), Polytope::parse("1,0;0,1;1,1")?),
        (corpus::genus_two(), Polytope::parse("1,0,0,0;0,1,0,0;1,1,1,-1")?),
    ];
    let mut n = 0;
    for (x, p) in &cases {
        for _ in 0..10 {
            let a = random_weights(&mut rng, p.len());
            let b = random_weights(&mut rng, p.len());
            let subsets = subpolytopes(p);
            let sub = &subsets[rng.gen_range(0..subsets.len())];
            let seeds = (rng.gen(), rng.gen());
            let report = main_theorem_check(x, p, &a, &b, sub, seeds, opts)?;
            if !report.passed {
                return Ok((false, format!("sample {n} failed")));
            }
            n += 1;
        }
    }
    Ok((true, format!("{n} samples on the torus and the genus-two surface")))
}

fn approximation() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut n = 0;
    for _ in 0..20 {
        let rank = rng.gen_range(1..=4usize);
        let u = CohomologyClass::new((0..rank).map(|_| random_rational(&mut rng, 5)).collect());
        let expected = quotient_map(std::slice::from_ref(&u))?.target_rank();
        let cover: Vec<CohomologyClass> = (0..rank)
            .map(|i| CohomologyClass::from_ints(&(0..rank).map(|j| i64::from(i == j)).collect::<Vec<_>>()))
            .collect();
        for eps in [q(1, 10), q(1, 100)] {
            let f = rational_approximation(&u, &eps, rank)?;
            let g = rational_approximation_in_cover(&u, &eps, &cover)?;
            if !f.flags.all() || f.classes.len() != expected || !g.flags.all() || g.classes.len() != rank {
                return Ok((false, format!("target {u}, eps {eps}: {:?} / {:?}", f.flags, g.flags)));
            }
            n += 1;
        }
    }
    Ok((true, format!("{n} (target, eps) pairs, minimal and full covers")))
}

fn oracle_consistency(opts: &RankOptions) -> Result<(bool, String)> {
    let mut n = 0;
    let mut worst = 0;
    for (name, x) in corpus_complexes() {
        for a in sample_classes(x.rank()) {
            if quotient_map(std::slice::from_ref(&a))?.target_rank() != 1 {
                continue;
            }
            let s = stabilized_oracle(&x, &a, 1024)?;
            let b = novikov_betti(&x, &a, opts)?.betti;
            if s.betti != b || s.order > 32 {
                return Ok((false, format!("{name}, class {a}: oracle {:?} at N={}, exact {b:?}", s.betti, s.order)));
            }
            worst = worst.max(s.order);
            n += 1;
        }
    }
    Ok((true, format!("{n} rank-1 cases, stabilization order at most {worst}")))
}

pub fn run_all() -> Vec<CriterionOutcome> {
    let opts = RankOptions::default();
    vec![
        outcome(1, "boundary squares to zero", validation_suite()),
        outcome(2, "zero class gives ordinary Betti numbers", ordinary_recovery(&opts)),
        outcome(3, "Novikov Betti numbers vanish", novikov_vanishing(&opts)),
        outcome(4, "Euler characteristic is invariant", euler_invariance(&opts)),
        outcome(5, "positivity reduces to vertices", vertex_reduction()),
        outcome(6, "positive scaling of the polytope", ray_invariance(&opts)),
        outcome(7, "twisted complex equals base change", twisted_equals_tensor()),
        outcome(8, "zero vertex keeps cover and reports", zero_vertex_trick(&opts)),
        outcome(9, "Morse reduction keeps Betti numbers", morse_invariance(&opts)),
        outcome(10, "comparison square commutes", main_theorem(&opts)),
        outcome(11, "rational approximation families", approximation()),
        outcome(12, "series oracle stabilizes", oracle_consistency(&opts)),
    ]
}

/// Runs every criterion and returns the outcomes with total wall time in ms.
pub fn run_timed() -> (Vec<CriterionOutcome>, u128) {
    let start = Instant::now();
    let outcomes = run_all();
    (outcomes, start.elapsed().as_millis())
}
