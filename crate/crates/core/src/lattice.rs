//! Deck-group lattices `ℤʳ`, rational period functionals, polytopes of
//! classes and the integer kernel/quotient computations behind the cover
//! `ℤʳ → ℤʳ / ∩ ker Φ`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{input_err, NovikovError, Result};

pub type Rational = BigRational;

/// Parses `"p/q"`, `"p"` or a terminating decimal such as `"-0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(NovikovError::Parse("empty rational".into()));
    }
    let bad = || NovikovError::Parse(format!("invalid rational {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(NovikovError::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        let int_part: BigInt = match int.trim() {
            "" | "-" | "+" => BigInt::zero(),
            t => t.parse().map_err(|_| bad())?,
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let magnitude = int_part.abs() * &scale + frac_part;
        let num = if negative { -magnitude } else { magnitude };
        return Ok(Rational::new(num, scale));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Parses a comma separated list of rationals, e.g. `"1/2, 0, 3"`.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_rational).collect()
}

/// Accepts a JSON string, number or `[num, den]` pair.
pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        Value::Array(pair) if pair.len() == 2 => {
            let num = rational_from_json(&pair[0])?;
            let den = rational_from_json(&pair[1])?;
            if den.is_zero() {
                return Err(NovikovError::Parse("zero denominator".into()));
            }
            Ok(num / den)
        }
        other => Err(NovikovError::Parse(format!("not a rational: {other}"))),
    }
}

pub fn rational_to_string(q: &Rational) -> String {
    q.to_string()
}

/// The free abelian deck group `ℤʳ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeckGroup {
    pub rank: usize,
}

impl DeckGroup {
    pub fn new(rank: usize) -> Self {
        DeckGroup { rank }
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.rank]
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Result<Vec<i64>> {
        check_dim(self.rank, a.len())?;
        check_dim(self.rank, b.len())?;
        Ok(a.iter().zip(b).map(|(x, y)| x + y).collect())
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(NovikovError::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// A rational cohomology class, given by its period vector: `Φ_a(A) = periods · A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CohomologyClass {
    periods: Vec<Rational>,
}

impl CohomologyClass {
    pub fn new(periods: Vec<Rational>) -> Self {
        CohomologyClass { periods }
    }

    pub fn from_ints(periods: &[i64]) -> Self {
        CohomologyClass::new(periods.iter().map(|&p| Rational::from_integer(p.into())).collect())
    }

    pub fn zero(rank: usize) -> Self {
        CohomologyClass::new(vec![Rational::zero(); rank])
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(CohomologyClass::new(parse_rational_list(s)?))
    }

    pub fn rank(&self) -> usize {
        self.periods.len()
    }

    pub fn periods(&self) -> &[Rational] {
        &self.periods
    }

    pub fn is_zero(&self) -> bool {
        self.periods.iter().all(Zero::is_zero)
    }

    pub fn eval(&self, element: &[i64]) -> Result<Rational> {
        check_dim(self.rank(), element.len())?;
        Ok(self
            .periods
            .iter()
            .zip(element)
            .filter(|(_, &x)| x != 0)
            .fold(Rational::zero(), |acc, (p, &x)| acc + p * Rational::from_integer(x.into())))
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        CohomologyClass::new(self.periods.iter().map(|p| p * factor).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_dim(self.rank(), other.rank())?;
        Ok(CohomologyClass::new(self.periods.iter().zip(&other.periods).map(|(a, b)| a - b).collect()))
    }

    /// Sup norm of the period vector.
    pub fn sup_norm(&self) -> Rational {
        self.periods.iter().map(|p| p.abs()).max().unwrap_or_else(Rational::zero)
    }

    /// Smallest positive multiple of the period vector with integer entries.
    pub fn integral_multiple(&self) -> Vec<BigInt> {
        let lcm = self.periods.iter().fold(BigInt::one(), |acc, p| acc.lcm(p.denom()));
        self.periods.iter().map(|p| (p * Rational::from_integer(lcm.clone())).to_integer()).collect()
    }

    /// Primitive integer vector on the same open ray (zero stays zero).
    pub fn primitive_ray(&self) -> Vec<BigInt> {
        let ints = self.integral_multiple();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|x| x / &g).collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.periods.iter().map(rational_to_string).collect()
    }
}

impl fmt::Display for CohomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

pub fn period_eval(a: &CohomologyClass, element: &[i64]) -> Result<Rational> {
    a.eval(element)
}

/// Convex hull of finitely many classes, stored by its (deduplicated) vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polytope {
    rank: usize,
    vertices: Vec<CohomologyClass>,
}

impl Polytope {
    pub fn new(vertices: Vec<CohomologyClass>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return input_err("polytope needs at least one vertex");
        };
        let rank = first.rank();
        let mut unique: Vec<CohomologyClass> = Vec::with_capacity(vertices.len());
        for v in vertices {
            check_dim(rank, v.rank())?;
            if !unique.contains(&v) {
                unique.push(v);
            }
        }
        Ok(Polytope { rank, vertices: unique })
    }

    /// Parses `"1,0;0,1"` (vertices separated by `;`).
    pub fn parse(s: &str) -> Result<Self> {
        let vertices = s.split(';').map(CohomologyClass::parse).collect::<Result<Vec<_>>>()?;
        Polytope::new(vertices)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertices(&self) -> &[CohomologyClass] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn min_period(&self, element: &[i64]) -> Result<Rational> {
        let mut best: Option<Rational> = None;
        for v in &self.vertices {
            let value = v.eval(element)?;
            if best.as_ref().is_none_or(|b| value < *b) {
                best = Some(value);
            }
        }
        Ok(best.expect("polytope is non-empty"))
    }

    pub fn scaled(&self, factor: &Rational) -> Result<Self> {
        if !factor.is_positive() {
            return input_err("scaling factor must be positive");
        }
        Polytope::new(self.vertices.iter().map(|v| v.scaled(factor)).collect())
    }

    pub fn contains_zero_vertex(&self) -> bool {
        self.vertices.iter().any(CohomologyClass::is_zero)
    }

    /// The class `Σ w_l a_l`; weights must be non-negative and sum to one.
    pub fn convex_combination(&self, weights: &[Rational]) -> Result<CohomologyClass> {
        check_dim(self.vertices.len(), weights.len())?;
        if weights.iter().any(Signed::is_negative) {
            return input_err("convex weights must be non-negative");
        }
        let total: Rational = weights.iter().cloned().sum();
        if !total.is_one() {
            return input_err(format!("convex weights sum to {total}, expected 1"));
        }
        let mut periods = vec![Rational::zero(); self.rank];
        for (w, v) in weights.iter().zip(&self.vertices) {
            for (p, q) in periods.iter_mut().zip(v.periods()) {
                *p += w * q;
            }
        }
        Ok(CohomologyClass::new(periods))
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "rank": self.rank,
            "vertices": self.vertices.iter().map(|v| v.to_strings()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let rank = v
            .get("rank")
            .and_then(Value::as_u64)
            .ok_or_else(|| NovikovError::Parse("polytope: missing \"rank\"".into()))? as usize;
        let vertices = v
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| NovikovError::Parse("polytope: missing \"vertices\"".into()))?;
        let mut classes = Vec::with_capacity(vertices.len());
        for vertex in vertices {
            let entries =
                vertex.as_array().ok_or_else(|| NovikovError::Parse("polytope: vertex must be an array".into()))?;
            let periods = entries.iter().map(rational_from_json).collect::<Result<Vec<_>>>()?;
            check_dim(rank, periods.len())?;
            classes.push(CohomologyClass::new(periods));
        }
        Polytope::new(classes)
    }
}

pub fn polytope_min_period(p: &Polytope, element: &[i64]) -> Result<Rational> {
    p.min_period(element)
}

/// A non-empty set of vertices of a parent polytope.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subpolytope {
    parent: Polytope,
    indices: Vec<usize>,
}

impl Subpolytope {
    pub fn new(parent: Polytope, mut indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return input_err("subpolytope needs at least one vertex");
        }
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return input_err("subpolytope vertex indices must be distinct");
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= parent.len()) {
            return input_err(format!("vertex index {bad} out of range"));
        }
        Ok(Subpolytope { parent, indices })
    }

    pub fn full(parent: &Polytope) -> Self {
        Subpolytope { indices: (0..parent.len()).collect(), parent: parent.clone() }
    }

    pub fn parent(&self) -> &Polytope {
        &self.parent
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn vertices(&self) -> Vec<&CohomologyClass> {
        self.indices.iter().map(|&i| &self.parent.vertices[i]).collect()
    }

    /// Re-anchors the same vertex selection in another polytope, matching by class.
    pub fn transfer(&self, target: &Polytope) -> Result<Subpolytope> {
        let indices = self
            .vertices()
            .into_iter()
            .map(|v| {
                target
                    .vertices()
                    .iter()
                    .position(|w| w == v)
                    .ok_or_else(|| NovikovError::Input(format!("vertex {v} missing in target polytope")))
            })
            .collect::<Result<Vec<_>>>()?;
        Subpolytope::new(target.clone(), indices)
    }
}

/// Anything with a finite set of active vertex functionals.
pub trait VertexSet {
    fn active_vertices(&self) -> Vec<&CohomologyClass>;
}

impl VertexSet for Polytope {
    fn active_vertices(&self) -> Vec<&CohomologyClass> {
        self.vertices.iter().collect()
    }
}

impl VertexSet for Subpolytope {
    fn active_vertices(&self) -> Vec<&CohomologyClass> {
        self.vertices()
    }
}

impl VertexSet for [CohomologyClass] {
    fn active_vertices(&self) -> Vec<&CohomologyClass> {
        self.iter().collect()
    }
}

// ---------------------------------------------------------------------------
// Integer lattice routines.

/// Row-style Hermite normal form: echelon, positive pivots, entries above a
/// pivot reduced into `[0, pivot)`. Zero rows are dropped.
pub fn hermite_normal_form(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        loop {
            // smallest nonzero |entry| in column c at or below r goes to row r
            let best = (r..m.len()).filter(|&i| !m[i][c].is_zero()).min_by(|&i, &j| m[i][c].abs().cmp(&m[j][c].abs()));
            let Some(best) = best else { break };
            m.swap(r, best);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[r][c]);
                let pivot_row = m[r].clone();
                for (x, p) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * p;
                }
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < m.len() && !m[r][c].is_zero() {
            if m[r][c].is_negative() {
                for x in m[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            pivot_cols.push((r, c));
            r += 1;
        }
    }
    m.truncate(r);
    for &(pr, pc) in &pivot_cols {
        let pivot_row = m[pr].clone();
        for i in 0..pr {
            let q = m[i][pc].div_floor(&pivot_row[pc]);
            if q.is_zero() {
                continue;
            }
            for (x, p) in m[i].iter_mut().zip(&pivot_row) {
                *x -= &q * p;
            }
        }
    }
    m
}

/// Basis (in Hermite normal form) of `{x ∈ ℤⁿ : M x = 0}` for the rows of `M`.
/// The result is saturated: it is the kernel of the rational map intersected
/// with the integer lattice.
pub fn saturated_kernel(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let k = rows.len();
    // augmented [Mᵀ | I]
    let mut aug: Vec<Vec<BigInt>> = (0..ncols)
        .map(|j| {
            let mut row: Vec<BigInt> = rows.iter().map(|r| r[j].clone()).collect();
            row.extend((0..ncols).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let mut r = 0;
    for c in 0..k {
        loop {
            let best =
                (r..aug.len()).filter(|&i| !aug[i][c].is_zero()).min_by(|&i, &j| aug[i][c].abs().cmp(&aug[j][c].abs()));
            let Some(best) = best else { break };
            aug.swap(r, best);
            let mut done = true;
            for i in r + 1..aug.len() {
                if aug[i][c].is_zero() {
                    continue;
                }
                let q = aug[i][c].div_floor(&aug[r][c]);
                let pivot_row = aug[r].clone();
                for (x, p) in aug[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * p;
                }
                if !aug[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < aug.len() && !aug[r][c].is_zero() {
            r += 1;
        }
    }
    let kernel: Vec<Vec<BigInt>> = aug[r..].iter().map(|row| row[k..].to_vec()).collect();
    hermite_normal_form(&kernel, ncols)
}

fn to_i64_rows(rows: Vec<Vec<BigInt>>) -> Result<Vec<Vec<i64>>> {
    rows.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| x.to_i64().ok_or_else(|| NovikovError::Input("lattice entry overflows i64".into())))
                .collect()
        })
        .collect()
}

fn class_rows(classes: &[CohomologyClass]) -> Result<(usize, Vec<Vec<BigInt>>)> {
    let Some(first) = classes.first() else {
        return input_err("need at least one class");
    };
    let rank = first.rank();
    for c in classes {
        check_dim(rank, c.rank())?;
    }
    Ok((rank, classes.iter().map(CohomologyClass::integral_multiple).collect()))
}

/// Integer basis of `∩_l ker Φ_{a_l} ⊆ ℤʳ`.
pub fn kernel_lattice(classes: &[CohomologyClass]) -> Result<Vec<Vec<i64>>> {
    let (rank, rows) = class_rows(classes)?;
    to_i64_rows(saturated_kernel(&rows, rank))
}

/// Surjection `ℤʳ → ℤʳ′` whose kernel is a given saturated sublattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuotientMap {
    source_rank: usize,
    /// `r′ × r` integer matrix, rows in Hermite normal form.
    matrix: Vec<Vec<i64>>,
    kernel: Vec<Vec<i64>>,
}

impl QuotientMap {
    pub fn identity(rank: usize) -> Self {
        let matrix = (0..rank).map(|i| (0..rank).map(|j| i64::from(i == j)).collect()).collect();
        QuotientMap { source_rank: rank, matrix, kernel: Vec::new() }
    }

    /// Builds the quotient by the saturation of the lattice spanned by `kernel_basis`.
    pub fn from_kernel(source_rank: usize, kernel_basis: &[Vec<i64>]) -> Result<Self> {
        for k in kernel_basis {
            check_dim(source_rank, k.len())?;
        }
        let big: Vec<Vec<BigInt>> = kernel_basis.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let annihilator = saturated_kernel(&big, source_rank);
        let kernel = saturated_kernel(&annihilator, source_rank);
        Ok(QuotientMap { source_rank, matrix: to_i64_rows(annihilator)?, kernel: to_i64_rows(kernel)? })
    }

    pub fn source_rank(&self) -> usize {
        self.source_rank
    }

    pub fn target_rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn kernel(&self) -> &[Vec<i64>] {
        &self.kernel
    }

    pub fn apply(&self, element: &[i64]) -> Vec<i64> {
        debug_assert_eq!(element.len(), self.source_rank);
        self.matrix.iter().map(|row| row.iter().zip(element).map(|(a, b)| a * b).sum()).collect()
    }

    /// The class `λ` on `ℤʳ′` with `λ ∘ q = a`; fails if `a` does not vanish on the kernel.
    pub fn induced_class(&self, a: &CohomologyClass) -> Result<CohomologyClass> {
        check_dim(self.source_rank, a.rank())?;
        let mut lambda: Vec<Rational> = Vec::with_capacity(self.matrix.len());
        for (i, row) in self.matrix.iter().enumerate() {
            let pivot = row.iter().position(|&x| x != 0).expect("HNF rows are nonzero");
            let mut rhs = a.periods()[pivot].clone();
            for (j, l) in lambda.iter().enumerate() {
                rhs -= l * Rational::from_integer(self.matrix[j][pivot].into());
            }
            debug_assert!(self.matrix[i + 1..].iter().all(|r| r[pivot] == 0));
            lambda.push(rhs / Rational::from_integer(row[pivot].into()));
        }
        let induced = CohomologyClass::new(lambda);
        for (j, p) in a.periods().iter().enumerate() {
            let value: Rational = induced
                .periods()
                .iter()
                .zip(&self.matrix)
                .map(|(l, row)| l * Rational::from_integer(row[j].into()))
                .sum();
            if value != *p {
                return input_err(format!("class {a} does not factor through the quotient"));
            }
        }
        Ok(induced)
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "source_rank": self.source_rank,
            "matrix": self.matrix,
            "kernel": self.kernel,
        })
    }
}

/// The quotient `ℤʳ → ℤʳ / ∩_l ker Φ_{a_l}`.
pub fn quotient_map(classes: &[CohomologyClass]) -> Result<QuotientMap> {
    let (rank, rows) = class_rows(classes)?;
    let kernel = saturated_kernel(&rows, rank);
    let annihilator = saturated_kernel(&kernel, rank);
    Ok(QuotientMap { source_rank: rank, matrix: to_i64_rows(annihilator)?, kernel: to_i64_rows(kernel)? })
}

// ---------------------------------------------------------------------------
// Small dense rational linear algebra.

/// Rank of a rational matrix given by rows.
pub fn rational_rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pivot_row = m[r].clone();
        for row in m.iter_mut().skip(r + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot_row[c];
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        r += 1;
    }
    r
}

/// Solves `A x = b` when the solution exists and is unique.
pub fn solve_unique(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if pivots.len() != n || m[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    Some(m[..n].iter().map(|row| row[n].clone()).collect())
}
