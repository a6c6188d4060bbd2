//! Finite free chain complexes over the group ring of the deck lattice, and
//! presentation 2-complexes built by Fox calculus.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_traits::Signed;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{input_err, NovikovError, Result};
use crate::groupring::{CoefficientRing, GrMatrix, GroupRingElement};
use crate::lattice::{check_dim, quotient_map, CohomologyClass, Polytope, QuotientMap, Rational, Subpolytope};
use crate::rank::RankOptions;

/// Cells per degree plus boundary matrices `∂_k : C_k → C_{k−1}`
/// (rows are `(k−1)`-cells, columns are `k`-cells).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EquivariantComplex {
    ring: CoefficientRing,
    rank: usize,
    cells: Vec<Vec<String>>,
    /// `boundaries[k]` is `∂_{k+1}`.
    boundaries: Vec<GrMatrix>,
}

impl EquivariantComplex {
    /// Builds and validates a complex (dimensions, entry rings, `∂² = 0`).
    pub fn new(ring: CoefficientRing, rank: usize, cells: Vec<Vec<String>>, boundaries: Vec<GrMatrix>) -> Result<Self> {
        let complex = Self::from_parts(ring, rank, cells, boundaries)?;
        complex.validate()?;
        Ok(complex)
    }

    fn from_parts(
        ring: CoefficientRing,
        rank: usize,
        cells: Vec<Vec<String>>,
        boundaries: Vec<GrMatrix>,
    ) -> Result<Self> {
        if cells.is_empty() {
            return input_err("complex needs at least degree 0");
        }
        if boundaries.len() + 1 != cells.len() {
            return input_err(format!(
                "{} cell degrees need {} boundary matrices, got {}",
                cells.len(),
                cells.len() - 1,
                boundaries.len()
            ));
        }
        for (k, d) in boundaries.iter().enumerate() {
            if d.ring() != ring {
                return input_err(format!("boundary {} is over {}, complex over {ring}", k + 1, d.ring()));
            }
            check_dim(rank, d.rank())?;
            if d.nrows() != cells[k].len() || d.ncols() != cells[k + 1].len() {
                return input_err(format!(
                    "boundary {} is {}x{}, expected {}x{}",
                    k + 1,
                    d.nrows(),
                    d.ncols(),
                    cells[k].len(),
                    cells[k + 1].len()
                ));
            }
        }
        Ok(EquivariantComplex { ring, rank, cells, boundaries })
    }

    /// Checks `∂_k ∘ ∂_{k+1} = 0` exactly over the group ring.
    pub fn validate(&self) -> Result<()> {
        for k in 1..self.boundaries.len() {
            let prod = self.boundaries[k - 1].checked_mul(&self.boundaries[k])?;
            if let Some((row, col, entry)) = prod.first_nonzero() {
                return Err(NovikovError::Validation { degree: k, row, col, entry: entry.to_string() });
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Top degree.
    pub fn dim(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn cells(&self) -> &[Vec<String>] {
        &self.cells
    }

    pub fn cell_count(&self, degree: usize) -> usize {
        self.cells.get(degree).map_or(0, Vec::len)
    }

    /// `∂_k` for `1 ≤ k ≤ dim`.
    pub fn boundary(&self, k: usize) -> Option<&GrMatrix> {
        k.checked_sub(1).and_then(|i| self.boundaries.get(i))
    }

    pub fn boundaries(&self) -> &[GrMatrix] {
        &self.boundaries
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells.iter().enumerate().map(|(i, c)| if i % 2 == 0 { c.len() as i64 } else { -(c.len() as i64) }).sum()
    }

    /// Image under the ring map induced by `q`; `∂² = 0` is preserved.
    pub fn pushforward(&self, q: &QuotientMap) -> Result<Self> {
        check_dim(self.rank, q.source_rank())?;
        Ok(EquivariantComplex {
            ring: self.ring,
            rank: q.target_rank(),
            cells: self.cells.clone(),
            boundaries: self.boundaries.iter().map(|d| d.specialize(q)).collect(),
        })
    }

    /// All deck variables sent to 1.
    pub fn augmentation(&self) -> Self {
        let q = quotient_map(&[CohomologyClass::zero(self.rank)]).expect("zero class is valid");
        self.pushforward(&q).expect("ranks agree")
    }

    pub fn with_ring(&self, ring: CoefficientRing) -> Result<Self> {
        Self::new(
            ring,
            self.rank,
            self.cells.clone(),
            self.boundaries.iter().map(|d| d.with_ring(ring)).collect::<Result<Vec<_>>>()?,
        )
    }

    /// Explicit-mode JSON document; key order and entry text are canonical.
    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "coefficients": self.ring.tag(),
            "rank": self.rank,
            "cells": self.cells,
            "boundaries": self.boundaries.iter().map(GrMatrix::to_strings).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(doc: &Value) -> Result<Self> {
        ingest(doc)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        ingest(&serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitDoc {
    coefficients: String,
    rank: usize,
    cells: Vec<Vec<String>>,
    #[serde(default)]
    boundaries: Vec<Vec<Vec<String>>>,
    #[serde(default)]
    #[allow(dead_code)]
    name: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationDoc {
    #[serde(default)]
    coefficients: Option<String>,
    generators: Vec<String>,
    #[serde(default)]
    relators: Vec<String>,
    deck_map: Vec<Vec<i64>>,
    #[serde(default)]
    rank: Option<usize>,
    #[serde(default)]
    #[allow(dead_code)]
    name: Option<String>,
}

/// Reads an explicit-matrix or presentation document and validates it.
pub fn ingest(doc: &Value) -> Result<EquivariantComplex> {
    let schema = |e: serde_json::Error| NovikovError::Parse(format!("schema violation: {e}"));
    if doc.get("generators").is_some() {
        let d: PresentationDoc = serde_json::from_value(doc.clone()).map_err(schema)?;
        let ring = CoefficientRing::parse(d.coefficients.as_deref().unwrap_or("Z"))?;
        let p = GroupPresentation::parse(d.generators, &d.relators)?;
        let rank = match (d.rank, d.deck_map.first()) {
            (Some(r), _) => r,
            (None, Some(first)) => first.len(),
            (None, None) => 0,
        };
        let deck = DeckMap::new(rank, d.deck_map)?;
        fox_boundary(&p, &deck, ring)
    } else {
        let d: ExplicitDoc = serde_json::from_value(doc.clone()).map_err(schema)?;
        let ring = CoefficientRing::parse(&d.coefficients)?;
        if d.cells.is_empty() {
            return input_err("\"cells\" must list at least degree 0");
        }
        let mut boundaries = Vec::with_capacity(d.boundaries.len());
        for (k, rows) in d.boundaries.iter().enumerate() {
            let ncols = d.cells.get(k + 1).map_or(0, Vec::len);
            boundaries.push(GrMatrix::parse_rows(ring, d.rank, ncols, rows)?);
        }
        EquivariantComplex::new(ring, d.rank, d.cells, boundaries)
    }
}

/// Images of the generators in the deck lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeckMap {
    rank: usize,
    images: Vec<Vec<i64>>,
}

impl DeckMap {
    pub fn new(rank: usize, images: Vec<Vec<i64>>) -> Result<Self> {
        for img in &images {
            check_dim(rank, img.len())?;
        }
        Ok(DeckMap { rank, images })
    }

    /// Free abelianization: generator `i` goes to `e_i`.
    pub fn abelianization(generators: usize) -> Self {
        let images = (0..generators).map(|i| (0..generators).map(|j| i64::from(i == j)).collect()).collect();
        DeckMap { rank: generators, images }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn image(&self, generator: usize) -> &[i64] {
        &self.images[generator]
    }
}

/// Letter of a word: generator index and exponent `±1`.
pub type Letter = (usize, i8);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    generators: Vec<String>,
    relators: Vec<Vec<Letter>>,
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Vec<Letter>>) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if g.is_empty() || g.contains(|c: char| c.is_whitespace() || "*^()".contains(c)) {
                return input_err(format!("invalid generator name {g:?}"));
            }
            if generators[..i].contains(g) {
                return input_err(format!("duplicate generator {g:?}"));
            }
        }
        for r in &relators {
            if let Some(&(g, _)) = r.iter().find(|(g, _)| *g >= generators.len()) {
                return input_err(format!("letter refers to unknown generator {g}"));
            }
        }
        let relators = relators.into_iter().map(free_reduce).collect();
        Ok(GroupPresentation { generators, relators })
    }

    /// Relators are written like `"x y x^-1 y^-1"`, `"x*y*x^-1*y^-1"` or
    /// `"xyx^-1y^-1"` (longest generator name wins).
    pub fn parse(generators: Vec<String>, relators: &[String]) -> Result<Self> {
        let words = relators.iter().map(|r| parse_word(r, &generators)).collect::<Result<Vec<_>>>()?;
        Self::new(generators, words)
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Vec<Letter>] {
        &self.relators
    }

    pub fn word_to_string(&self, word: &[Letter]) -> String {
        if word.is_empty() {
            return "1".into();
        }
        word.iter()
            .map(|&(g, e)| if e > 0 { self.generators[g].clone() } else { format!("{}^-1", self.generators[g]) })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn free_reduce(word: Vec<Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(word.len());
    for letter in word {
        match out.last() {
            Some(&(g, e)) if g == letter.0 && e == -letter.1 => {
                out.pop();
            }
            _ => out.push(letter),
        }
    }
    out
}

fn parse_word(text: &str, generators: &[String]) -> Result<Vec<Letter>> {
    let err = |msg: &str| NovikovError::Parse(format!("{msg} in relator {text:?}"));
    let chars: Vec<char> = text.chars().collect();
    let mut word = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() || chars[i] == '*' {
            i += 1;
            continue;
        }
        let rest: String = chars[i..].iter().collect();
        let (g, name) = generators
            .iter()
            .enumerate()
            .filter(|(_, name)| rest.starts_with(name.as_str()))
            .max_by_key(|(_, name)| name.len())
            .ok_or_else(|| err("unknown generator"))?;
        i += name.chars().count();
        let mut power: i64 = 1;
        if i < chars.len() && chars[i] == '^' {
            i += 1;
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || "-+()".contains(chars[i])) {
                i += 1;
            }
            let digits: String = chars[start..i].iter().filter(|c| !"()".contains(**c)).collect();
            power = digits.parse().map_err(|_| err("bad exponent"))?;
        }
        let letter: Letter = (g, if power > 0 { 1 } else { -1 });
        for _ in 0..power.unsigned_abs() {
            word.push(letter);
        }
    }
    Ok(word)
}

/// Presentation 2-complex on the cover given by `deck`: one 0-cell, a 1-cell
/// per generator with `∂₁ g = t^{q(g)} − 1`, and a 2-cell per relator whose
/// boundary column holds the specialized Fox derivatives.
pub fn fox_boundary(p: &GroupPresentation, deck: &DeckMap, ring: CoefficientRing) -> Result<EquivariantComplex> {
    check_dim(p.generators.len(), deck.images.len())?;
    let rank = deck.rank;
    let n = p.generators.len();
    let m = p.relators.len();

    let mut d1 = GrMatrix::zeros(ring, rank, 1, n);
    for g in 0..n {
        d1.set(0, g, GroupRingElement::monomial_minus_one(ring, deck.image(g).to_vec()));
    }

    let mut d2 = GrMatrix::zeros(ring, rank, n, m);
    for (j, word) in p.relators.iter().enumerate() {
        let mut prefix = vec![0i64; rank];
        let mut columns: BTreeMap<usize, GroupRingElement> = BTreeMap::new();
        for &(g, e) in word {
            let img = deck.image(g);
            let entry = columns.entry(g).or_insert_with(|| GroupRingElement::zero(ring, rank));
            if e > 0 {
                // ∂(u g)/∂g = ∂u/∂g + u
                entry.add_term(prefix.clone(), Rational::from_integer(1.into()));
                prefix.iter_mut().zip(img).for_each(|(p, x)| *p += x);
            } else {
                // ∂(u g⁻¹)/∂g = ∂u/∂g − u g⁻¹
                prefix.iter_mut().zip(img).for_each(|(p, x)| *p -= x);
                entry.add_term(prefix.clone(), Rational::from_integer((-1).into()));
            }
        }
        if prefix.iter().any(|&x| x != 0) {
            return Err(NovikovError::CoverMismatch { relator: p.word_to_string(word) });
        }
        for (g, value) in columns {
            d2.set(g, j, value);
        }
    }

    let cells = vec![vec!["v".to_string()], p.generators.clone(), (1..=m).map(|j| format!("r{j}")).collect()];
    let mut boundaries = vec![d1, d2];
    let mut cells = cells;
    if m == 0 {
        cells.pop();
        boundaries.pop();
    }
    EquivariantComplex::new(ring, rank, cells, boundaries)
}

impl fmt::Display for EquivariantComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "complex over {}[Z^{}]", self.ring, self.rank)?;
        for (k, cells) in self.cells.iter().enumerate() {
            writeln!(f, "  C_{k}: {}", cells.join(" "))?;
        }
        for (k, d) in self.boundaries.iter().enumerate() {
            writeln!(f, "  d_{}:", k + 1)?;
            for row in d.to_strings() {
                writeln!(f, "    [{}]", row.join(", "))?;
            }
        }
        Ok(())
    }
}

/// Outcome of comparing the data attached to `P` and to `r·P`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScaleCheck {
    pub complexes_identical: bool,
    pub reports_identical: bool,
}

impl ScaleCheck {
    pub fn passed(&self) -> bool {
        self.complexes_identical && self.reports_identical
    }
}

/// Materializes the twisted complex and Betti report for `P` and for `r·P`
/// independently and compares their serializations byte for byte.
pub fn scale_check(x: &EquivariantComplex, p: &Polytope, r: &Rational, opts: &RankOptions) -> Result<ScaleCheck> {
    if !r.is_positive() {
        return input_err("scale factor must be positive");
    }
    let scaled = p.scaled(r)?;
    let full = Subpolytope::full(p);
    let full_scaled = Subpolytope::full(&scaled);
    let a = crate::twist::twisted_complex(x, p, &full)?;
    let b = crate::twist::twisted_complex(x, &scaled, &full_scaled)?;
    let complexes_identical = a.complex_json() == b.complex_json();
    let ra = crate::homology::polytope_betti(x, p, &full, opts)?;
    let rb = crate::homology::polytope_betti(x, &scaled, &full_scaled, opts)?;
    let reports_identical = ra.to_json() == rb.to_json();
    Ok(ScaleCheck { complexes_identical, reports_identical })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> EquivariantComplex {
        EquivariantComplex::from_json_str(
            r#"{"coefficients":"Z","rank":1,"cells":[["v"],["e"]],"boundaries":[[["t - 1"]]]}"#,
        )
        .unwrap()
    }

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn circle_is_valid() {
        let c = circle();
        assert_eq!(c.dim(), 1);
        assert_eq!(c.euler_characteristic(), 0);
        assert_eq!(c.boundary(1).unwrap().get(0, 0).to_string(), "t - 1");
    }

    #[test]
    fn rejects_nonzero_square() {
        let doc = r#"{"coefficients":"Z","rank":1,"cells":[["v"],["e"],["f"]],
                     "boundaries":[[["t - 1"]],[["1"]]]}"#;
        match EquivariantComplex::from_json_str(doc) {
            Err(NovikovError::Validation { degree: 1, row: 0, col: 0, entry }) => assert_eq!(entry, "t - 1"),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_schema_violations() {
        for doc in [
            r#"{"coefficients":"Z","rank":1,"cells":[["v"],["e"]],"boundaries":[[["t - 1","1"]]]}"#,
            r#"{"coefficients":"R","rank":1,"cells":[["v"]]}"#,
            r#"{"coefficients":"Z","rank":1,"cells":[]}"#,
            r#"{"coefficients":"Z","rank":1,"cells":[["v"],["e"]]}"#,
            r#"{"coefficients":"Z","rank":1,"cells":[["v"]],"extra":1}"#,
            r#"{"coefficients":"Z","rank":1,"cells":[["v"],["e"]],"boundaries":[[["t2"]]]}"#,
        ] {
            let err = EquivariantComplex::from_json_str(doc).unwrap_err();
            assert!(!matches!(err, NovikovError::Validation { .. }), "{doc}: {err}");
        }
    }

    #[test]
    fn torus_presentation() {
        let p = GroupPresentation::parse(names(&["x", "y"]), &names(&["x y x^-1 y^-1"])).unwrap();
        let c = fox_boundary(&p, &DeckMap::abelianization(2), CoefficientRing::Int).unwrap();
        assert_eq!(c.boundary(1).unwrap().to_strings(), vec![names(&["t1 - 1", "t2 - 1"])]);
        assert_eq!(c.boundary(2).unwrap().to_strings(), vec![names(&["-t2 + 1"]), names(&["t1 - 1"])]);
    }

    #[test]
    fn klein_bottle_presentation() {
        let p = GroupPresentation::parse(names(&["x", "y"]), &names(&["xyxy^-1"])).unwrap();
        let deck = DeckMap::new(1, vec![vec![0], vec![1]]).unwrap();
        let c = fox_boundary(&p, &deck, CoefficientRing::Mod2).unwrap();
        assert_eq!(c.boundary(1).unwrap().to_strings(), vec![names(&["0", "t + 1"])]);
        assert_eq!(c.boundary(2).unwrap().to_strings(), vec![names(&["t + 1"]), names(&["0"])]);
    }

    #[test]
    fn free_group_is_circle() {
        let p = GroupPresentation::parse(names(&["x"]), &[]).unwrap();
        let c = fox_boundary(&p, &DeckMap::abelianization(1), CoefficientRing::Int).unwrap();
        assert_eq!(c.dim(), 1);
        assert_eq!(c.boundaries(), circle().boundaries());
    }

    #[test]
    fn cover_mismatch() {
        let p = GroupPresentation::parse(names(&["x", "y"]), &names(&["xyxy^-1"])).unwrap();
        let err = fox_boundary(&p, &DeckMap::abelianization(2), CoefficientRing::Int).unwrap_err();
        assert!(matches!(err, NovikovError::CoverMismatch { .. }));
    }

    #[test]
    fn words_are_reduced_and_parsed() {
        let gens = names(&["a1", "a", "b"]);
        let p = GroupPresentation::parse(gens, &names(&["a1 a^2 a^-1 b b^(-1)", "a1*b^-2"])).unwrap();
        assert_eq!(p.relators()[0], vec![(0, 1), (1, 1)]);
        assert_eq!(p.relators()[1], vec![(0, 1), (2, -1), (2, -1)]);
        assert!(GroupPresentation::parse(names(&["x"]), &names(&["z"])).is_err());
        assert!(GroupPresentation::parse(names(&["x", "x"]), &[]).is_err());
    }

    #[test]
    fn presentation_document() {
        let doc = r#"{"generators":["x","y"],"relators":["x y x^-1 y^-1"],"deck_map":[[1,0],[0,1]]}"#;
        let c = EquivariantComplex::from_json_str(doc).unwrap();
        assert_eq!(c.ring(), CoefficientRing::Int);
        assert_eq!(c.rank(), 2);
        assert_eq!(c.cells()[2], names(&["r1"]));
    }

    #[test]
    fn augmentation_gives_integer_complex() {
        let c = circle().augmentation();
        assert_eq!(c.rank(), 0);
        assert!(c.boundary(1).unwrap().is_zero());
    }

    #[test]
    fn json_roundtrip() {
        let c = circle();
        assert_eq!(EquivariantComplex::from_json(&c.to_json()).unwrap(), c);
    }
}
