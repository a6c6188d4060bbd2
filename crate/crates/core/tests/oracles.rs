//! Cross-checks against independent computations written only for the tests.

use novikov::complex::{fox_boundary, DeckMap, EquivariantComplex, GroupPresentation};
use novikov::corpus;
use novikov::groupring::{CoefficientRing, GrMatrix, GroupRingElement};
use novikov::homology::novikov_betti;
use novikov::lattice::{kernel_lattice, quotient_map, solve_unique, CohomologyClass, Rational};
use novikov::morse::{acyclic_matching, vpath_boundary, MatchingStrategy};
use novikov::rank::RankOptions;
use num_bigint::BigInt;
use num_traits::{One, Zero};

fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Plain Gaussian elimination over ℚ.
fn rank_q(mut m: Vec<Vec<Rational>>) -> usize {
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..m.len() {
            let f = &m[i][c] / &m[r][c];
            for j in c..ncols {
                let v = &m[r][j] * &f;
                m[i][j] -= v;
            }
        }
        r += 1;
    }
    r
}

fn eval_at(x: &GroupRingElement, point: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (e, c) in x.terms() {
        let mut v = c.clone();
        for (k, p) in e.iter().zip(point) {
            let base = if *k < 0 { Rational::one() / p } else { p.clone() };
            for _ in 0..k.unsigned_abs() {
                v *= &base;
            }
        }
        acc += v;
    }
    acc
}

/// Generic rank: maximum rank over a few specializations at distinct primes.
fn generic_rank(m: &GrMatrix) -> usize {
    let primes = [2i64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    (0..3)
        .map(|shift| {
            let point: Vec<Rational> = (0..m.rank()).map(|i| q(primes[(i + 4 * shift) % primes.len()])).collect();
            rank_q(m.rows().map(|row| row.iter().map(|x| eval_at(x, &point)).collect()).collect())
        })
        .max()
        .unwrap_or(0)
}

fn oracle_betti(x: &EquivariantComplex, a: &CohomologyClass) -> Vec<usize> {
    let pushed = x.pushforward(&quotient_map(std::slice::from_ref(a)).unwrap()).unwrap();
    let mut ranks = vec![0; x.cells().len() + 1];
    for k in 1..x.cells().len() {
        ranks[k] = generic_rank(pushed.boundary(k).unwrap());
    }
    (0..x.cells().len()).map(|i| x.cell_count(i) - ranks[i] - ranks[i + 1]).collect()
}

#[test]
fn betti_numbers_match_specialization_oracle() {
    let opts = RankOptions::default();
    let cases: Vec<(EquivariantComplex, Vec<Vec<i64>>)> = vec![
        (corpus::circle(), vec![vec![0], vec![1], vec![-2]]),
        (corpus::subdivided_circle(), vec![vec![0], vec![3]]),
        (corpus::torus(), vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![2, 3]]),
        (corpus::torus_delta(), vec![vec![0, 0], vec![0, 1], vec![1, -1]]),
        (corpus::genus_two(), vec![vec![0, 0, 0, 0], vec![1, 0, 0, 0], vec![1, 2, -1, 3]]),
        (corpus::cone(), vec![vec![]]),
    ];
    for (x, classes) in cases {
        for a in classes {
            let a = CohomologyClass::from_ints(&a);
            assert_eq!(novikov_betti(&x, &a, &opts).unwrap().betti, oracle_betti(&x, &a), "class {a}");
        }
    }
}

#[test]
fn genus_two_fox_derivatives() {
    let x = corpus::genus_two();
    let d2 = x.boundary(2).unwrap().to_strings();
    let by_hand = ["-t2 + 1", "t1 - 1", "-t4 + 1", "t3 - 1"];
    for (row, expected) in d2.iter().zip(by_hand) {
        assert_eq!(row, &vec![expected.to_string()]);
    }
    let d1 = x.boundary(1).unwrap().to_strings();
    assert_eq!(d1, vec![vec!["t1 - 1", "t2 - 1", "t3 - 1", "t4 - 1"]]);
}

#[test]
fn fox_boundary_of_a_non_abelian_relator() {
    // x^2 y^-1 with x ↦ 1, y ↦ 2 in ℤ
    let p = GroupPresentation::parse(vec!["x".into(), "y".into()], &["x^2 y^-1".to_string()]).unwrap();
    let deck = DeckMap::new(1, vec![vec![1], vec![2]]).unwrap();
    let x = fox_boundary(&p, &deck, CoefficientRing::Int).unwrap();
    // ∂/∂x = 1 + x, ∂/∂y = -x^2 y^-1
    assert_eq!(x.boundary(2).unwrap().to_strings(), vec![vec!["t + 1".to_string()], vec!["-1".to_string()]]);
}

/// Eliminates matched pairs one at a time by Schur complements.
fn sequential_elimination(x: &EquivariantComplex, pairs: &[(usize, usize, usize)]) -> Vec<GrMatrix> {
    let mut alive: Vec<Vec<bool>> = x.cells().iter().map(|c| vec![true; c.len()]).collect();
    let mut d: Vec<GrMatrix> = x.boundaries().to_vec();
    for &(k, sigma, tau) in pairs {
        let m = &d[k];
        let u_inv = m.get(sigma, tau).monomial_inverse().unwrap();
        let mut next = m.clone();
        for s2 in 0..m.nrows() {
            for t2 in 0..m.ncols() {
                if s2 == sigma || t2 == tau || !alive[k][s2] || !alive[k + 1][t2] {
                    continue;
                }
                let corr = &(m.get(s2, tau) * &u_inv) * m.get(sigma, t2);
                next.set(s2, t2, m.get(s2, t2) - &corr);
            }
        }
        d[k] = next;
        alive[k][sigma] = false;
        alive[k + 1][tau] = false;
    }
    let keep: Vec<Vec<usize>> =
        alive.iter().map(|a| a.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()).collect();
    d.iter().enumerate().map(|(k, m)| m.select(&keep[k], &keep[k + 1])).collect()
}

#[test]
fn vpath_boundary_matches_sequential_elimination() {
    let complexes = [corpus::subdivided_circle(), corpus::torus_delta(), corpus::cone(), corpus::circle()];
    for x in &complexes {
        for seed in 0..30 {
            let m = acyclic_matching(x, seed, MatchingStrategy::Greedy);
            let reduced = vpath_boundary(x, &m).unwrap();
            let pairs: Vec<(usize, usize, usize)> = m.pairs.iter().map(|p| (p.degree, p.lower, p.upper)).collect();
            let mut order = pairs.clone();
            order.reverse();
            assert_eq!(reduced.boundaries(), sequential_elimination(x, &pairs).as_slice());
            assert_eq!(reduced.boundaries(), sequential_elimination(x, &order).as_slice());
        }
    }
}

#[test]
fn kernel_is_saturated_by_enumeration() {
    let cases: Vec<Vec<Vec<i64>>> = vec![
        vec![vec![2, 4]],
        vec![vec![1, 1, 0], vec![0, 2, 2]],
        vec![vec![3, -6, 9]],
        vec![vec![1, 2, 3], vec![2, 4, 6]],
    ];
    for rows in cases {
        let classes: Vec<CohomologyClass> = rows.iter().map(|r| CohomologyClass::from_ints(r)).collect();
        let kernel = kernel_lattice(&classes).unwrap();
        let r = rows[0].len();
        for k in &kernel {
            for c in &classes {
                assert!(c.eval(k).unwrap().is_zero());
            }
        }
        // every small kernel vector is an integer combination of the basis
        let system: Vec<Vec<Rational>> = (0..r).map(|j| kernel.iter().map(|k| q(k[j])).collect()).collect();
        let mut v = vec![-3i64; r];
        loop {
            if classes.iter().all(|c| c.eval(&v).unwrap().is_zero()) {
                let rhs: Vec<Rational> = v.iter().map(|&x| q(x)).collect();
                let coords = solve_unique(&system, &rhs).unwrap_or_else(|| panic!("{v:?} not in span"));
                assert!(coords.iter().all(|c| c.is_integer()), "{v:?} needs fractional coordinates");
            }
            let mut i = 0;
            while i < r && v[i] == 3 {
                v[i] = -3;
                i += 1;
            }
            if i == r {
                break;
            }
            v[i] += 1;
        }
    }
}
