//! Exact arithmetic in the group ring `R[ℤʳ]` of Laurent polynomials over
//! `R ∈ {ℤ, ℚ, ℤ₂}`, plus dense matrices of such elements.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{input_err, NovikovError, Result};
use crate::lattice::{check_dim, parse_rational, CohomologyClass, QuotientMap, Rational};

/// Coefficient ring of a complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CoefficientRing {
    #[serde(rename = "Z")]
    Int,
    #[serde(rename = "Q")]
    Rat,
    #[serde(rename = "Z2")]
    Mod2,
}

impl CoefficientRing {
    pub fn parse(tag: &str) -> Result<Self> {
        match tag.trim() {
            "Z" | "INT" | "int" => Ok(CoefficientRing::Int),
            "Q" | "RAT" | "rat" => Ok(CoefficientRing::Rat),
            "Z2" | "MOD2" | "mod2" | "F2" => Ok(CoefficientRing::Mod2),
            other => Err(NovikovError::Parse(format!("unknown coefficient ring {other:?}"))),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            CoefficientRing::Int => "Z",
            CoefficientRing::Rat => "Q",
            CoefficientRing::Mod2 => "Z2",
        }
    }

    pub fn is_field(self) -> bool {
        !matches!(self, CoefficientRing::Int)
    }

    /// The field used for rank computations (`ℤ` is promoted to `ℚ`).
    pub fn rank_field(self) -> Self {
        match self {
            CoefficientRing::Int => CoefficientRing::Rat,
            other => other,
        }
    }

    /// Brings a rational into canonical form for this ring.
    pub fn normalize(self, c: Rational) -> Result<Rational> {
        match self {
            CoefficientRing::Rat => Ok(c),
            CoefficientRing::Int => {
                if c.is_integer() {
                    Ok(c)
                } else {
                    Err(NovikovError::Input(format!("coefficient {c} is not an integer")))
                }
            }
            CoefficientRing::Mod2 => {
                // p/q with q odd is a well defined element of 𝔽₂
                if c.denom().is_even() {
                    return Err(NovikovError::Input(format!("coefficient {c} is not defined mod 2")));
                }
                Ok(Rational::from_integer(c.numer().mod_floor(&BigInt::from(2))))
            }
        }
    }

    fn norm(self, c: Rational) -> Rational {
        self.normalize(c).expect("coefficient valid for ring")
    }

    /// Multiplicative inverse of a coefficient, when it exists in the ring.
    pub fn invert(self, c: &Rational) -> Option<Rational> {
        if c.is_zero() {
            return None;
        }
        match self {
            CoefficientRing::Rat => Some(c.recip()),
            CoefficientRing::Mod2 => Some(Rational::one()),
            CoefficientRing::Int => (c.abs().is_one()).then(|| c.clone()),
        }
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A finitely supported `ℤʳ`-graded element `Σ c_A t^A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupRingElement {
    ring: CoefficientRing,
    rank: usize,
    terms: BTreeMap<Vec<i64>, Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrOp {
    Add,
    Mul,
    Neg,
}

/// Checked group-ring arithmetic; `Neg` ignores `y`.
pub fn gr_arith(x: &GroupRingElement, y: &GroupRingElement, op: GrOp) -> Result<GroupRingElement> {
    if op == GrOp::Neg {
        return Ok(-x);
    }
    x.check_compatible(y)?;
    Ok(match op {
        GrOp::Add => x + y,
        GrOp::Mul => x * y,
        GrOp::Neg => unreachable!(),
    })
}

impl GroupRingElement {
    pub fn zero(ring: CoefficientRing, rank: usize) -> Self {
        GroupRingElement { ring, rank, terms: BTreeMap::new() }
    }

    pub fn one(ring: CoefficientRing, rank: usize) -> Self {
        Self::monomial(ring, vec![0; rank], Rational::one())
    }

    pub fn monomial(ring: CoefficientRing, exponent: Vec<i64>, coeff: Rational) -> Self {
        let rank = exponent.len();
        let mut x = Self::zero(ring, rank);
        x.add_term(exponent, coeff);
        x
    }

    /// The variable `t_i` (zero-based index).
    pub fn variable(ring: CoefficientRing, rank: usize, i: usize) -> Self {
        let mut e = vec![0; rank];
        e[i] = 1;
        Self::monomial(ring, e, Rational::one())
    }

    /// `t^A − 1`.
    pub fn monomial_minus_one(ring: CoefficientRing, exponent: Vec<i64>) -> Self {
        let rank = exponent.len();
        let mut x = Self::monomial(ring, exponent, Rational::one());
        x.add_term(vec![0; rank], -Rational::one());
        x
    }

    pub fn from_terms<I>(ring: CoefficientRing, rank: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, Rational)>,
    {
        let mut x = Self::zero(ring, rank);
        for (e, c) in terms {
            check_dim(rank, e.len())?;
            let c = ring.normalize(c)?;
            x.add_term(e, c);
        }
        Ok(x)
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, Rational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().all(|(e, c)| e.iter().all(|&x| x == 0) && c.is_one())
    }

    pub fn coefficient(&self, exponent: &[i64]) -> Rational {
        self.terms.get(exponent).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `c·t^e` in place; `c` must already be valid for the ring.
    pub fn add_term(&mut self, exponent: Vec<i64>, coeff: Rational) {
        debug_assert_eq!(exponent.len(), self.rank);
        if coeff.is_zero() {
            return;
        }
        let ring = self.ring;
        match self.terms.entry(exponent) {
            std::collections::btree_map::Entry::Vacant(v) => {
                let c = ring.norm(coeff);
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let c = ring.norm(o.get() + coeff);
                if c.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = c;
                }
            }
        }
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return input_err(format!("coefficient ring mismatch: {} vs {}", self.ring, other.ring));
        }
        check_dim(self.rank, other.rank)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let c = self.ring.norm(c.clone());
        let mut out = Self::zero(self.ring, self.rank);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x * &c);
        }
        out
    }

    /// Multiplication by the monomial `t^shift`.
    pub fn shift(&self, shift: &[i64]) -> Self {
        let terms =
            self.terms.iter().map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone())).collect();
        GroupRingElement { ring: self.ring, rank: self.rank, terms }
    }

    /// `±t^A` (the matching filter for discrete Morse pairs).
    pub fn is_unit_monomial(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().all(|c| c.abs().is_one())
    }

    /// Inverse of a monomial `c·t^A` with `c` invertible in the coefficient ring.
    pub fn monomial_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        let inv = self.ring.invert(c)?;
        Some(Self::monomial(self.ring, e.iter().map(|x| -x).collect(), inv))
    }

    /// Ring homomorphism `t^A ↦ t^{q(A)}`.
    pub fn specialize(&self, q: &QuotientMap) -> Self {
        assert_eq!(q.source_rank(), self.rank, "quotient map source rank");
        let mut out = Self::zero(self.ring, q.target_rank());
        for (e, c) in &self.terms {
            out.add_term(q.apply(e), c.clone());
        }
        out
    }

    pub fn with_ring(&self, ring: CoefficientRing) -> Result<Self> {
        Self::from_terms(ring, self.rank, self.terms.clone())
    }

    /// Lexicographically largest term.
    pub fn leading_term(&self) -> Option<(&Vec<i64>, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Lexicographically smallest term.
    pub fn trailing_term(&self) -> Option<(&Vec<i64>, &Rational)> {
        self.terms.iter().next()
    }

    /// Per-coordinate exponent ranges of the support.
    pub fn exponent_box(&self) -> Option<Vec<(i64, i64)>> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let mut b: Vec<(i64, i64)> = first.iter().map(|&x| (x, x)).collect();
        for e in it {
            for (r, &x) in b.iter_mut().zip(e) {
                r.0 = r.0.min(x);
                r.1 = r.1.max(x);
            }
        }
        Some(b)
    }

    /// Exact quotient `self / d` in the Laurent ring, if it exists.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(self.ring, self.rank));
        }
        // Newton polytopes add under multiplication, so each coordinate of the
        // quotient's support is confined to range(self) − range(d).
        let pb = self.exponent_box()?;
        let db = d.exponent_box()?;
        let bounds: Vec<(i64, i64)> = pb.iter().zip(&db).map(|(p, q)| (p.0 - q.0, p.1 - q.1)).collect();
        if bounds.iter().any(|(lo, hi)| lo > hi) {
            return None;
        }
        let (d_exp, d_coeff) = d.leading_term()?;
        let d_inv = match self.ring {
            CoefficientRing::Int => None,
            r => r.invert(d_coeff),
        };
        let mut rem = self.clone();
        let mut quot = Self::zero(self.ring, self.rank);
        while let Some((r_exp, r_coeff)) = rem.leading_term() {
            let e: Vec<i64> = r_exp.iter().zip(d_exp).map(|(a, b)| a - b).collect();
            if e.iter().zip(&bounds).any(|(x, (lo, hi))| x < lo || x > hi) {
                return None;
            }
            let c = match &d_inv {
                Some(inv) => r_coeff * inv,
                None => {
                    let c = r_coeff / d_coeff;
                    if !c.is_integer() {
                        return None;
                    }
                    c
                }
            };
            let term = Self::monomial(self.ring, e, c);
            rem = &rem - &(&term * d);
            quot = &quot + &term;
        }
        Some(quot)
    }

    /// Minimum of `Φ_a` over the support.
    pub fn min_period(&self, a: &CohomologyClass) -> Result<Option<Rational>> {
        let mut best: Option<Rational> = None;
        for e in self.terms.keys() {
            let v = a.eval(e)?;
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
        }
        Ok(best)
    }

    /// Evaluation at a point of `(ℚ^×)ʳ`.
    pub fn eval_rational(&self, point: &[Rational], inverses: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    v *= num_traits::pow(point[i].clone(), x as usize);
                } else if x < 0 {
                    v *= num_traits::pow(inverses[i].clone(), (-x) as usize);
                }
            }
            acc += v;
        }
        acc
    }

    pub fn parse(s: &str, ring: CoefficientRing, rank: usize) -> Result<Self> {
        parse_element(s, ring, rank)
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| {
                    let name = if self.rank == 1 { "t".to_string() } else { format!("t{}", i + 1) };
                    if x == 1 {
                        name
                    } else {
                        format!("{name}^{x}")
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{abs}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

fn parse_element(s: &str, ring: CoefficientRing, rank: usize) -> Result<GroupRingElement> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let err = |msg: &str| NovikovError::Parse(format!("{msg} in group ring element {s:?}"));
    if compact.is_empty() {
        return Err(err("empty expression"));
    }
    // split into signed terms; a sign directly after '^' or '(' belongs to an exponent
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut current = String::new();
    let mut negative = false;
    let mut prev: Option<char> = None;
    for ch in compact.chars() {
        if (ch == '+' || ch == '-') && !matches!(prev, Some('^') | Some('(')) {
            if !current.is_empty() {
                terms.push((negative, std::mem::take(&mut current)));
            } else if prev.is_some() {
                return Err(err("dangling sign"));
            }
            negative = ch == '-';
        } else {
            current.push(ch);
        }
        prev = Some(ch);
    }
    if current.is_empty() {
        return Err(err("trailing sign"));
    }
    terms.push((negative, current));

    let mut out = GroupRingElement::zero(ring, rank);
    for (negative, body) in terms {
        let mut coeff = Rational::one();
        let mut exponent = vec![0i64; rank];
        for factor in body.split('*') {
            if factor.is_empty() {
                return Err(err("empty factor"));
            }
            if factor.starts_with('t') {
                let (var, power) = match factor.split_once('^') {
                    Some((v, p)) => {
                        let p = p.trim_start_matches('(').trim_end_matches(')');
                        (v, p.parse::<i64>().map_err(|_| err("bad exponent"))?)
                    }
                    None => (factor, 1),
                };
                let index = if var == "t" {
                    if rank != 1 {
                        return Err(err("bare 't' needs rank 1"));
                    }
                    0
                } else {
                    let i: usize = var[1..].parse().map_err(|_| err("bad variable"))?;
                    if i == 0 || i > rank {
                        return Err(err("variable index out of range"));
                    }
                    i - 1
                };
                exponent[index] += power;
            } else {
                coeff *= parse_rational(factor).map_err(|_| err("bad coefficient"))?;
            }
        }
        if negative {
            coeff = -coeff;
        }
        let coeff = ring.normalize(coeff)?;
        out.add_term(exponent, coeff);
    }
    Ok(out)
}

impl Add for &GroupRingElement {
    type Output = GroupRingElement;

    fn add(self, rhs: &GroupRingElement) -> GroupRingElement {
        self.check_compatible(rhs).expect("compatible operands");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &GroupRingElement {
    type Output = GroupRingElement;

    fn sub(self, rhs: &GroupRingElement) -> GroupRingElement {
        self.check_compatible(rhs).expect("compatible operands");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &GroupRingElement {
    type Output = GroupRingElement;

    fn neg(self) -> GroupRingElement {
        let mut out = GroupRingElement::zero(self.ring, self.rank);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &GroupRingElement {
    type Output = GroupRingElement;

    fn mul(self, rhs: &GroupRingElement) -> GroupRingElement {
        self.check_compatible(rhs).expect("compatible operands");
        let mut out = GroupRingElement::zero(self.ring, self.rank);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

/// Dense matrix of group-ring elements (row-major).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GrMatrix {
    ring: CoefficientRing,
    rank: usize,
    nrows: usize,
    ncols: usize,
    entries: Vec<GroupRingElement>,
}

impl GrMatrix {
    pub fn zeros(ring: CoefficientRing, rank: usize, nrows: usize, ncols: usize) -> Self {
        GrMatrix { ring, rank, nrows, ncols, entries: vec![GroupRingElement::zero(ring, rank); nrows * ncols] }
    }

    pub fn identity(ring: CoefficientRing, rank: usize, n: usize) -> Self {
        let mut m = Self::zeros(ring, rank, n, n);
        for i in 0..n {
            m.set(i, i, GroupRingElement::one(ring, rank));
        }
        m
    }

    pub fn from_rows(
        ring: CoefficientRing,
        rank: usize,
        ncols: usize,
        rows: Vec<Vec<GroupRingElement>>,
    ) -> Result<Self> {
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            check_dim(ncols, row.len())?;
            for e in row {
                if e.ring() != ring {
                    return input_err(format!("entry over {} in matrix over {ring}", e.ring()));
                }
                check_dim(rank, e.rank())?;
                entries.push(e);
            }
        }
        Ok(GrMatrix { ring, rank, nrows, ncols, entries })
    }

    /// Parses rows of textual entries.
    pub fn parse_rows(ring: CoefficientRing, rank: usize, ncols: usize, rows: &[Vec<String>]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|row| row.iter().map(|s| GroupRingElement::parse(s, ring, rank)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(ring, rank, ncols, parsed)
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &GroupRingElement {
        &self.entries[i * self.ncols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: GroupRingElement) {
        debug_assert_eq!(value.ring(), self.ring);
        self.entries[i * self.ncols + j] = value;
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut GroupRingElement {
        &mut self.entries[i * self.ncols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(GroupRingElement::is_zero)
    }

    pub fn first_nonzero(&self) -> Option<(usize, usize, &GroupRingElement)> {
        self.entries.iter().enumerate().find(|(_, e)| !e.is_zero()).map(|(k, e)| (k / self.ncols, k % self.ncols, e))
    }

    pub fn rows(&self) -> impl Iterator<Item = &[GroupRingElement]> {
        // chunks(0) panics, so zero-column matrices yield empty rows explicitly
        let ncols = self.ncols.max(1);
        let empty = self.ncols == 0;
        (0..self.nrows).map(move |i| if empty { &[][..] } else { &self.entries[i * ncols..(i + 1) * ncols] })
    }

    pub fn checked_mul(&self, rhs: &GrMatrix) -> Result<GrMatrix> {
        check_dim(self.ncols, rhs.nrows)?;
        if self.ring != rhs.ring {
            return input_err("matrix coefficient ring mismatch");
        }
        check_dim(self.rank, rhs.rank)?;
        let mut out = GrMatrix::zeros(self.ring, self.rank, self.nrows, rhs.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.ncols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a * b;
                    let cell = out.get_mut(i, j);
                    *cell = &*cell + &prod;
                }
            }
        }
        Ok(out)
    }

    pub fn map<F>(&self, rank: usize, ring: CoefficientRing, f: F) -> Result<GrMatrix>
    where
        F: Fn(&GroupRingElement) -> Result<GroupRingElement>,
    {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(GrMatrix { ring, rank, nrows: self.nrows, ncols: self.ncols, entries })
    }

    pub fn specialize(&self, q: &QuotientMap) -> GrMatrix {
        self.map(q.target_rank(), self.ring, |e| Ok(e.specialize(q))).expect("specialization is infallible")
    }

    pub fn with_ring(&self, ring: CoefficientRing) -> Result<GrMatrix> {
        self.map(self.rank, ring, |e| e.with_ring(ring))
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> GrMatrix {
        let mut out = GrMatrix::zeros(self.ring, self.rank, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn transpose(&self) -> GrMatrix {
        let mut out = GrMatrix::zeros(self.ring, self.rank, self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.rows().map(|row| row.iter().map(ToString::to_string).collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::quotient_map;

    fn el(s: &str, ring: CoefficientRing, rank: usize) -> GroupRingElement {
        GroupRingElement::parse(s, ring, rank).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let x = el("3*t1^2*t2^-1 + 1 - t2", CoefficientRing::Int, 2);
        let one = GroupRingElement::one(CoefficientRing::Int, 2);
        assert_eq!(gr_arith(&one, &x, GrOp::Mul).unwrap(), x);
    }

    #[test]
    fn difference_of_squares() {
        let a = el("t1 - 1", CoefficientRing::Rat, 2);
        let b = el("t1 + 1", CoefficientRing::Rat, 2);
        assert_eq!(&a * &b, el("t1^2 - 1", CoefficientRing::Rat, 2));
    }

    #[test]
    fn frobenius_in_characteristic_two() {
        let x = el("1 + t", CoefficientRing::Mod2, 1);
        assert_eq!((&x * &x).to_string(), "t^2 + 1");
        assert_eq!(el("3*t - 5", CoefficientRing::Mod2, 1).to_string(), "t + 1");
    }

    #[test]
    fn arith_rejects_mismatch() {
        let a = el("t1", CoefficientRing::Rat, 2);
        let b = el("t1", CoefficientRing::Int, 2);
        let c = el("t", CoefficientRing::Rat, 1);
        assert!(gr_arith(&a, &b, GrOp::Add).is_err());
        assert!(gr_arith(&a, &c, GrOp::Mul).is_err());
        assert_eq!(gr_arith(&a, &c, GrOp::Neg).unwrap(), el("-t1", CoefficientRing::Rat, 2));
    }

    #[test]
    fn textual_form_is_canonical() {
        let x = el("1 + 3*t1^2*t2^-1", CoefficientRing::Int, 2);
        assert_eq!(x.to_string(), "3*t1^2*t2^-1 + 1");
        assert_eq!(el("-t1 + 1/2*t2", CoefficientRing::Rat, 2).to_string(), "-t1 + 1/2*t2");
        assert_eq!(el("t - t", CoefficientRing::Int, 1).to_string(), "0");
        assert_eq!(el("t^(-2) * 2", CoefficientRing::Int, 1).to_string(), "2*t^-2");
        assert_eq!(el("t1*t1", CoefficientRing::Int, 2).to_string(), "t1^2");
        for bad in ["", "t3", "t", "1/2*t1", "t1 +", "x1", "t1^a"] {
            assert!(GroupRingElement::parse(bad, CoefficientRing::Int, 2).is_err(), "{bad}");
        }
        assert!(GroupRingElement::parse("1/2", CoefficientRing::Mod2, 1).is_err());
        assert_eq!(el("1/3", CoefficientRing::Mod2, 1).to_string(), "1");
    }

    #[test]
    fn specialize_examples() {
        let q = quotient_map(&[CohomologyClass::from_ints(&[1, 0])]).unwrap();
        let x = el("t1 - 1", CoefficientRing::Int, 2);
        assert_eq!(x.specialize(&q).to_string(), "t - 1");

        let zero_map = quotient_map(&[CohomologyClass::zero(2)]).unwrap();
        let y = el("t1*t2^-1", CoefficientRing::Int, 2);
        assert!(y.specialize(&zero_map).is_one());

        let sum = quotient_map(&[CohomologyClass::from_ints(&[1, 1])]).unwrap();
        assert_eq!(sum.matrix(), &[vec![1, 1]]);
        let z = el("t1 - t2", CoefficientRing::Int, 2);
        assert!(z.specialize(&sum).is_zero());
    }

    #[test]
    fn exact_division() {
        let r = CoefficientRing::Rat;
        let p = el("t1^2*t2^-1 - t2^-1", r, 2);
        let d = el("t1 - 1", r, 2);
        assert_eq!(p.exact_div(&d).unwrap(), el("t1*t2^-1 + t2^-1", r, 2));
        assert!(el("t1 + 1", r, 2).exact_div(&el("t1 - 1", r, 2)).is_none());
        assert!(el("t1", r, 2).exact_div(&GroupRingElement::zero(r, 2)).is_none());
        let int = CoefficientRing::Int;
        assert!(el("t + 1", int, 1).exact_div(&el("2", int, 1)).is_none());
        assert_eq!(el("2*t + 2", int, 1).exact_div(&el("2", int, 1)).unwrap(), el("t + 1", int, 1));
    }

    #[test]
    fn unit_monomials() {
        assert!(el("-t1^3", CoefficientRing::Int, 2).is_unit_monomial());
        assert!(!el("2*t1", CoefficientRing::Rat, 2).is_unit_monomial());
        assert!(!el("t1 - 1", CoefficientRing::Int, 2).is_unit_monomial());
        let inv = el("-t1^3", CoefficientRing::Int, 2).monomial_inverse().unwrap();
        assert_eq!(inv.to_string(), "-t1^-3");
        assert!(el("2*t", CoefficientRing::Int, 1).monomial_inverse().is_none());
    }

    #[test]
    fn matrix_product() {
        let r = CoefficientRing::Int;
        let a = GrMatrix::parse_rows(r, 2, 2, &[vec!["t1 - 1".into(), "t2 - 1".into()]]).unwrap();
        let b = GrMatrix::parse_rows(r, 2, 1, &[vec!["1 - t2".into()], vec!["t1 - 1".into()]]).unwrap();
        assert!(a.checked_mul(&b).unwrap().is_zero());
        assert!(b.checked_mul(&b).is_err());
        let empty = GrMatrix::zeros(r, 2, 2, 0);
        assert_eq!(empty.rows().count(), 2);
    }
}
