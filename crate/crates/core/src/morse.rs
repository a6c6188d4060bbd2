//! Equivariant discrete Morse reduction.
//!
//! A matching pairs a `k`-cell `σ` with a `(k+1)`-cell `τ` whose incidence is
//! a single unit monomial `±t^A`, i.e. exactly one lift of `σ` is a regular
//! face of `τ̃`. Cancelling all pairs of an acyclic matching leaves a chain
//! homotopy equivalent complex on the critical cells, with boundary given
//! by summing over gradient paths.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::complex::EquivariantComplex;
use crate::error::{input_err, NovikovError, Result};
use crate::groupring::{GrMatrix, GroupRingElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchingStrategy {
    /// Randomized greedy matching that keeps every band acyclic.
    Greedy,
    /// No pairs: the reduction is the identity.
    None,
}

impl MatchingStrategy {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(MatchingStrategy::Greedy),
            "none" => Ok(MatchingStrategy::None),
            _ => input_err(format!("unknown matching strategy {s:?} (expected greedy or none)")),
        }
    }
}

/// `lower` is a cell of degree `degree`, `upper` a cell of degree `degree + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MatchedPair {
    pub degree: usize,
    pub lower: usize,
    pub upper: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Matching {
    pub pairs: Vec<MatchedPair>,
}

impl Matching {
    pub fn new(mut pairs: Vec<MatchedPair>) -> Self {
        pairs.sort();
        Matching { pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Critical cell indices per degree.
    pub fn critical_cells(&self, x: &EquivariantComplex) -> Vec<Vec<usize>> {
        let mut matched: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); x.cells().len()];
        for p in &self.pairs {
            matched[p.degree].insert(p.lower);
            matched[p.degree + 1].insert(p.upper);
        }
        x.cells()
            .iter()
            .enumerate()
            .map(|(k, cells)| (0..cells.len()).filter(|i| !matched[k].contains(i)).collect())
            .collect()
    }

    pub fn to_json(&self, x: &EquivariantComplex) -> Value {
        let pairs: Vec<Value> = self
            .pairs
            .iter()
            .map(|p| {
                serde_json::json!({
                    "degree": p.degree,
                    "lower": x.cells()[p.degree][p.lower],
                    "upper": x.cells()[p.degree + 1][p.upper],
                })
            })
            .collect();
        Value::Array(pairs)
    }

    fn band(&self, k: usize) -> BTreeMap<usize, usize> {
        self.pairs.iter().filter(|p| p.degree == k).map(|p| (p.lower, p.upper)).collect()
    }
}

/// Gradient-path graph of band `k` has a cycle.
fn band_has_cycle(d: &GrMatrix, band: &BTreeMap<usize, usize>) -> bool {
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; d.nrows()];
    for &start in band.keys() {
        if state[start] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        state[start] = 1;
        while let Some(&mut (sigma, ref mut next)) = stack.last_mut() {
            let upper = band.get(&sigma);
            let mut advanced = false;
            if let Some(&tau) = upper {
                while *next < d.nrows() {
                    let s2 = *next;
                    *next += 1;
                    if s2 == sigma || d.get(s2, tau).is_zero() {
                        continue;
                    }
                    match state[s2] {
                        1 => return true,
                        0 => {
                            state[s2] = 1;
                            stack.push((s2, 0));
                            advanced = true;
                            break;
                        }
                        _ => {}
                    }
                }
            }
            if !advanced {
                state[sigma] = 2;
                stack.pop();
            }
        }
    }
    false
}

/// Checks unit incidences, disjointness and acyclicity of every band.
pub fn validate_matching(x: &EquivariantComplex, m: &Matching) -> Result<()> {
    let mut used: BTreeSet<(usize, usize)> = BTreeSet::new();
    for p in &m.pairs {
        let d = x
            .boundary(p.degree + 1)
            .ok_or_else(|| NovikovError::InvalidMatching(format!("no cells above degree {}", p.degree)))?;
        if p.lower >= d.nrows() || p.upper >= d.ncols() {
            return Err(NovikovError::InvalidMatching(format!("pair {p:?} is out of range")));
        }
        if !d.get(p.lower, p.upper).is_unit_monomial() {
            return Err(NovikovError::InvalidMatching(format!(
                "incidence {} of pair {p:?} is not a unit monomial",
                d.get(p.lower, p.upper)
            )));
        }
        if !used.insert((p.degree, p.lower)) || !used.insert((p.degree + 1, p.upper)) {
            return Err(NovikovError::InvalidMatching(format!("pair {p:?} reuses a cell")));
        }
    }
    for (k, d) in x.boundaries().iter().enumerate() {
        if band_has_cycle(d, &m.band(k)) {
            return Err(NovikovError::InvalidMatching(format!(
                "gradient paths cycle between degrees {k} and {}",
                k + 1
            )));
        }
    }
    Ok(())
}

/// Seeded greedy matching on unit incidences.
pub fn acyclic_matching(x: &EquivariantComplex, seed: u64, strategy: MatchingStrategy) -> Matching {
    if strategy == MatchingStrategy::None {
        return Matching::default();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates: Vec<MatchedPair> = Vec::new();
    for (k, d) in x.boundaries().iter().enumerate() {
        for lower in 0..d.nrows() {
            for upper in 0..d.ncols() {
                if d.get(lower, upper).is_unit_monomial() {
                    candidates.push(MatchedPair { degree: k, lower, upper });
                }
            }
        }
    }
    candidates.shuffle(&mut rng);
    let mut used: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut bands: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); x.boundaries().len()];
    let mut pairs = Vec::new();
    for p in candidates {
        if used.contains(&(p.degree, p.lower)) || used.contains(&(p.degree + 1, p.upper)) {
            continue;
        }
        let band = &mut bands[p.degree];
        band.insert(p.lower, p.upper);
        if band_has_cycle(&x.boundaries()[p.degree], band) {
            band.remove(&p.lower);
            continue;
        }
        used.insert((p.degree, p.lower));
        used.insert((p.degree + 1, p.upper));
        pairs.push(p);
    }
    Matching::new(pairs)
}

/// Boundary of the Morse complex on the critical cells.
pub fn vpath_boundary(x: &EquivariantComplex, m: &Matching) -> Result<EquivariantComplex> {
    validate_matching(x, m)?;
    let critical = m.critical_cells(x);
    let ring = x.ring();
    let rank = x.rank();
    let mut boundaries = Vec::with_capacity(x.boundaries().len());
    for (k, d) in x.boundaries().iter().enumerate() {
        let upward = m.band(k);
        let downward: BTreeSet<usize> =
            if k == 0 { BTreeSet::new() } else { m.band(k - 1).values().copied().collect() };
        let mut projector = Projector {
            d,
            critical: &critical[k],
            upward: &upward,
            downward: &downward,
            memo: BTreeMap::new(),
            active: BTreeSet::new(),
            ring,
            rank,
        };
        let cols = &critical[k + 1];
        let mut out = GrMatrix::zeros(ring, rank, critical[k].len(), cols.len());
        for (j, &tau) in cols.iter().enumerate() {
            for sigma in 0..d.nrows() {
                let coeff = d.get(sigma, tau);
                if coeff.is_zero() {
                    continue;
                }
                let image = projector.project(sigma)?;
                for (i, c) in image.iter().enumerate() {
                    if !c.is_zero() {
                        let sum = out.get(i, j) + &(coeff * c);
                        out.set(i, j, sum);
                    }
                }
            }
        }
        boundaries.push(out);
    }
    let cells =
        critical.iter().zip(x.cells()).map(|(idx, names)| idx.iter().map(|&i| names[i].clone()).collect()).collect();
    EquivariantComplex::new(ring, rank, cells, boundaries)
}

/// Gradient-flow projection of `k`-cells onto critical `k`-cells.
struct Projector<'a> {
    d: &'a GrMatrix,
    critical: &'a [usize],
    upward: &'a BTreeMap<usize, usize>,
    downward: &'a BTreeSet<usize>,
    memo: BTreeMap<usize, Vec<GroupRingElement>>,
    active: BTreeSet<usize>,
    ring: crate::groupring::CoefficientRing,
    rank: usize,
}

impl Projector<'_> {
    fn zero_vec(&self) -> Vec<GroupRingElement> {
        vec![GroupRingElement::zero(self.ring, self.rank); self.critical.len()]
    }

    fn project(&mut self, sigma: usize) -> Result<Vec<GroupRingElement>> {
        if let Some(v) = self.memo.get(&sigma) {
            return Ok(v.clone());
        }
        let mut out = self.zero_vec();
        if let Some(pos) = self.critical.iter().position(|&c| c == sigma) {
            out[pos] = GroupRingElement::one(self.ring, self.rank);
        } else if self.downward.contains(&sigma) {
            // upper cell of a pair one band below: no gradient path leaves it
        } else {
            let tau = self.upward[&sigma];
            if !self.active.insert(sigma) {
                return Err(NovikovError::InvalidMatching("cyclic gradient path".into()));
            }
            let u = self.d.get(sigma, tau);
            let neg_inv = -&u.monomial_inverse().expect("matched incidences are unit monomials");
            for s2 in 0..self.d.nrows() {
                if s2 == sigma {
                    continue;
                }
                let c = self.d.get(s2, tau);
                if c.is_zero() {
                    continue;
                }
                let factor = &neg_inv * c;
                let image = self.project(s2)?;
                for (o, v) in out.iter_mut().zip(&image) {
                    if !v.is_zero() {
                        *o = &*o + &(&factor * v);
                    }
                }
            }
            self.active.remove(&sigma);
        }
        self.memo.insert(sigma, out.clone());
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseReduction {
    pub matching: Matching,
    pub complex: EquivariantComplex,
}

pub fn morse_reduce(x: &EquivariantComplex, seed: u64, strategy: MatchingStrategy) -> Result<MorseReduction> {
    let matching = acyclic_matching(x, seed, strategy);
    let complex = vpath_boundary(x, &matching)?;
    Ok(MorseReduction { matching, complex })
}
