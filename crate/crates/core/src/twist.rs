//! Twisted description of the polytope complex.
//!
//! Each base cell carries its identity-labelled preferred lift, so a boundary
//! entry `Σ c_A t^A` records incidences `τ̃ → A·σ̃`. Reading the monomial
//! `t^A` as the Novikov twist `(Φ_{a_0}(A), …, Φ_{a_k}(A))` turns the
//! equivariant complex into a complex over `Nov(A|B)`.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::complex::EquivariantComplex;
use crate::error::{input_err, NovikovError, Result};
use crate::groupring::{GrMatrix, GroupRingElement};
use crate::lattice::{
    check_dim, kernel_lattice, quotient_map, solve_unique, CohomologyClass, Polytope, QuotientMap, Rational,
    Subpolytope,
};

/// Identifies a (restricted) Novikov ring: the deck quotient `Γ_A` and the
/// rays of the vertices at which the finiteness condition is imposed.
/// Positive rescaling of a vertex does not change the ring, so rays are
/// stored as primitive integer vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RingDescriptor {
    pub kind: &'static str,
    pub source_rank: usize,
    pub quotient_rank: usize,
    pub kernel: Vec<Vec<i64>>,
    pub quotient: Vec<Vec<i64>>,
    pub restricted_rays: Vec<Vec<String>>,
    pub scope: &'static str,
}

const RANK_SCOPE: &str =
    "ranks over Frac(Q[Gamma]); valid over every domain between Z[Gamma] and its Novikov completions";

fn rays<'a>(classes: impl IntoIterator<Item = &'a CohomologyClass>) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> =
        classes.into_iter().map(|c| c.primitive_ray().iter().map(ToString::to_string).collect()).collect();
    out.sort();
    out.dedup();
    out
}

impl RingDescriptor {
    fn from_quotient(kind: &'static str, q: &QuotientMap, restricted: Vec<Vec<String>>) -> Self {
        RingDescriptor {
            kind,
            source_rank: q.source_rank(),
            quotient_rank: q.target_rank(),
            kernel: q.kernel().to_vec(),
            quotient: q.matrix().to_vec(),
            restricted_rays: restricted,
            scope: RANK_SCOPE,
        }
    }

    /// `Nov(a)` over `Γ_a = ℤʳ / ker Φ_a`.
    pub fn for_class(a: &CohomologyClass) -> Result<Self> {
        let q = quotient_map(std::slice::from_ref(a))?;
        Ok(Self::from_quotient("class", &q, rays([a])))
    }

    /// `Nov(A|B)` over `Γ_A`.
    pub fn restricted(p: &Polytope, b: &Subpolytope) -> Result<Self> {
        if b.parent() != p {
            return input_err("subpolytope does not belong to the polytope");
        }
        let q = quotient_map(p.vertices())?;
        Ok(Self::from_quotient("polytope", &q, rays(b.vertices())))
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("descriptor serializes")
    }
}

/// The polytope complex in its twisted form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedComplex {
    complex: EquivariantComplex,
    descriptor: RingDescriptor,
    /// Vertex functionals induced on `Γ_A`.
    functionals: Vec<CohomologyClass>,
}

impl TwistedComplex {
    pub fn complex(&self) -> &EquivariantComplex {
        &self.complex
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.descriptor
    }

    pub fn functionals(&self) -> &[CohomologyClass] {
        &self.functionals
    }

    /// The Novikov twist `(Φ_{a_l}(g))_l` of a deck element `g ∈ Γ_A`.
    pub fn twist(&self, g: &[i64]) -> Result<Vec<Rational>> {
        self.functionals.iter().map(|f| f.eval(g)).collect()
    }

    /// Cells and matrices only (the ring interpretation is left out).
    pub fn complex_json(&self) -> Value {
        self.complex.to_json()
    }

    /// The same complex read over the restricted ring `Nov(A|B)`: matrices
    /// are untouched, only the descriptor changes.
    pub fn restrict_to(&self, p: &Polytope, b: &Subpolytope) -> Result<TwistedComplex> {
        let descriptor = RingDescriptor::restricted(p, b)?;
        if descriptor.kernel != self.descriptor.kernel {
            return input_err("restriction must keep the deck quotient");
        }
        Ok(TwistedComplex { complex: self.complex.clone(), descriptor, functionals: self.functionals.clone() })
    }
}

fn check_inputs(x: &EquivariantComplex, p: &Polytope, b: &Subpolytope) -> Result<()> {
    check_dim(p.rank(), x.rank())?;
    if b.parent() != p {
        return input_err("subpolytope does not belong to the polytope");
    }
    Ok(())
}

fn induced_functionals(q: &QuotientMap, p: &Polytope) -> Result<Vec<CohomologyClass>> {
    p.vertices().iter().map(|v| q.induced_class(v)).collect()
}

/// Pushes `X` to the cover `Γ_A` and tags it with `Nov(A|B)`.
pub fn twisted_complex(x: &EquivariantComplex, p: &Polytope, b: &Subpolytope) -> Result<TwistedComplex> {
    check_inputs(x, p, b)?;
    let q = quotient_map(p.vertices())?;
    Ok(TwistedComplex {
        complex: x.pushforward(&q)?,
        descriptor: RingDescriptor::restricted(p, b)?,
        functionals: induced_functionals(&q, p)?,
    })
}

/// `C_•(M̃_A) ⊗_{ℤ[Γ_A]} Nov(A|B)` assembled on preferred-lift generators.
///
/// Every lifted incidence `τ̃ → g·σ̃` with coefficient `c` contributes
/// `c · λ(g)` to the `(σ, τ)` entry, where `λ(g)` is read off from the
/// Novikov twist of `g` alone. Agreement with [`twisted_complex`] is the
/// statement that `x̃ ⊗ λ ↦ λ·x` is a chain isomorphism.
pub fn tensor_base_change(x: &EquivariantComplex, p: &Polytope, b: &Subpolytope) -> Result<TwistedComplex> {
    check_inputs(x, p, b)?;
    let q = quotient_map(p.vertices())?;
    let functionals = induced_functionals(&q, p)?;
    let target_rank = q.target_rank();
    let system: Vec<Vec<Rational>> = functionals.iter().map(|f| f.periods().to_vec()).collect();

    let mut decoded: BTreeMap<Vec<Rational>, Vec<i64>> = BTreeMap::new();
    let mut decode = |twist: Vec<Rational>| -> Result<Vec<i64>> {
        if let Some(g) = decoded.get(&twist) {
            return Ok(g.clone());
        }
        let solution = solve_unique(&system, &twist)
            .ok_or_else(|| NovikovError::Input(format!("twist {twist:?} does not determine a deck element")))?;
        let g = solution
            .iter()
            .map(|s| {
                if s.is_integer() {
                    i64::try_from(s.to_integer()).map_err(|_| NovikovError::Input("deck element overflow".into()))
                } else {
                    Err(NovikovError::Input(format!("twist {twist:?} is not realized by a deck element")))
                }
            })
            .collect::<Result<Vec<i64>>>()?;
        decoded.insert(twist, g.clone());
        Ok(g)
    };

    let mut boundaries = Vec::with_capacity(x.boundaries().len());
    for d in x.boundaries() {
        let mut out = GrMatrix::zeros(x.ring(), target_rank, d.nrows(), d.ncols());
        for row in 0..d.nrows() {
            for col in 0..d.ncols() {
                let mut entry = GroupRingElement::zero(x.ring(), target_rank);
                for (lift, coeff) in d.get(row, col).terms() {
                    let twist = p.vertices().iter().map(|v| v.eval(lift)).collect::<Result<Vec<_>>>()?;
                    entry.add_term(decode(twist)?, coeff.clone());
                }
                out.set(row, col, entry);
            }
        }
        boundaries.push(out);
    }
    let complex = EquivariantComplex::new(x.ring(), target_rank, x.cells().to_vec(), boundaries)?;
    Ok(TwistedComplex { complex, descriptor: RingDescriptor::restricted(p, b)?, functionals })
}

/// `P` with the zero class appended (unchanged if already a vertex).
pub fn zero_vertex_extend(p: &Polytope) -> Polytope {
    if p.contains_zero_vertex() {
        return p.clone();
    }
    let mut vertices = p.vertices().to_vec();
    vertices.push(CohomologyClass::zero(p.rank()));
    Polytope::new(vertices).expect("extension keeps rank")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroVertexCheck {
    pub kernel_unchanged: bool,
    pub subpolytopes_checked: usize,
    pub descriptors_unchanged: bool,
}

impl ZeroVertexCheck {
    pub fn passed(&self) -> bool {
        self.kernel_unchanged && self.descriptors_unchanged
    }
}

/// Compares `ker` and `Nov(A|B)` against `ker` and `Nov(A⁰|B)` for every
/// non-empty vertex subset `B` of `P`.
pub fn zero_vertex_check(p: &Polytope) -> Result<ZeroVertexCheck> {
    let extended = zero_vertex_extend(p);
    let kernel_unchanged = kernel_lattice(p.vertices())? == kernel_lattice(extended.vertices())?;
    if p.len() > 16 {
        return input_err("zero-vertex check enumerates subsets; at most 16 vertices");
    }
    let mut descriptors_unchanged = true;
    let mut count = 0;
    for mask in 1u32..(1 << p.len()) {
        let indices: Vec<usize> = (0..p.len()).filter(|i| mask & (1 << i) != 0).collect();
        let b = Subpolytope::new(p.clone(), indices)?;
        let b0 = b.transfer(&extended)?;
        let lhs = RingDescriptor::restricted(p, &b)?;
        let rhs = RingDescriptor::restricted(&extended, &b0)?;
        descriptors_unchanged &= lhs == rhs;
        count += 1;
    }
    Ok(ZeroVertexCheck { kernel_unchanged, subpolytopes_checked: count, descriptors_unchanged })
}

/// Changes the preferred lift of every cell by a deck element; the boundary
/// becomes `t^{-s(σ)} ∂[σ][τ] t^{s(τ)}`, a conjugation by monomial diagonals.
pub fn change_lifts(x: &EquivariantComplex, shifts: &[Vec<Vec<i64>>]) -> Result<EquivariantComplex> {
    check_dim(x.cells().len(), shifts.len())?;
    for (cells, s) in x.cells().iter().zip(shifts) {
        check_dim(cells.len(), s.len())?;
        for v in s {
            check_dim(x.rank(), v.len())?;
        }
    }
    let mut boundaries = Vec::with_capacity(x.boundaries().len());
    for (k, d) in x.boundaries().iter().enumerate() {
        let mut out = d.clone();
        for row in 0..d.nrows() {
            for col in 0..d.ncols() {
                let shift: Vec<i64> = shifts[k + 1][col].iter().zip(&shifts[k][row]).map(|(a, b)| a - b).collect();
                out.set(row, col, d.get(row, col).shift(&shift));
            }
        }
        boundaries.push(out);
    }
    EquivariantComplex::new(x.ring(), x.rank(), x.cells().to_vec(), boundaries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn poly(s: &str) -> Polytope {
        Polytope::parse(s).unwrap()
    }

    #[test]
    fn circle_is_reinterpreted() {
        let x = corpus::circle();
        let p = poly("1");
        let t = twisted_complex(&x, &p, &Subpolytope::full(&p)).unwrap();
        assert_eq!(t.complex().boundary(1).unwrap().to_strings(), vec![vec!["t - 1".to_string()]]);
        assert_eq!(t.descriptor().restricted_rays, vec![vec!["1".to_string()]]);
        assert_eq!(t, tensor_base_change(&x, &p, &Subpolytope::full(&p)).unwrap());
    }

    #[test]
    fn torus_keeps_matrices_with_larger_ring() {
        let x = corpus::torus();
        let p = poly("1,0;0,1");
        let b = Subpolytope::new(p.clone(), vec![0]).unwrap();
        let t = twisted_complex(&x, &p, &b).unwrap();
        assert_eq!(t.complex().boundaries(), x.boundaries());
        assert_eq!(t.descriptor().restricted_rays.len(), 1);
        assert_eq!(t, tensor_base_change(&x, &p, &b).unwrap());
    }

    #[test]
    fn torus_diagonal_class_collapses_deck() {
        let x = corpus::torus();
        let p = poly("1,1");
        let t = twisted_complex(&x, &p, &Subpolytope::full(&p)).unwrap();
        assert_eq!(t.complex().boundary(1).unwrap().to_strings(), vec![vec!["t - 1".to_string(), "t - 1".to_string()]]);
        assert_eq!(t, tensor_base_change(&x, &p, &Subpolytope::full(&p)).unwrap());
    }

    #[test]
    fn twists_determine_lifts() {
        let x = corpus::genus_two();
        let p = poly("1,0,0,0;0,1,0,0;1,1,1,0;0,0,1,1");
        let t = twisted_complex(&x, &p, &Subpolytope::full(&p)).unwrap();
        let mut seen: BTreeMap<Vec<Rational>, Vec<i64>> = BTreeMap::new();
        for d in t.complex().boundaries() {
            for row in d.rows() {
                for e in row {
                    for g in e.terms().keys() {
                        let tw = t.twist(g).unwrap();
                        if let Some(prev) = seen.insert(tw, g.clone()) {
                            assert_eq!(&prev, g);
                        }
                    }
                }
            }
        }
        assert!(!seen.is_empty());
    }

    #[test]
    fn zero_vertex_examples() {
        let p = poly("1,0");
        let e = zero_vertex_extend(&p);
        assert_eq!(e, poly("1,0;0,0"));
        assert_eq!(kernel_lattice(e.vertices()).unwrap(), vec![vec![0, 1]]);
        assert_eq!(zero_vertex_extend(&e), e);
        let p = poly("2,4");
        assert_eq!(kernel_lattice(zero_vertex_extend(&p).vertices()).unwrap(), vec![vec![2, -1]]);
        let check = zero_vertex_check(&poly("1,0;0,1;1,1")).unwrap();
        assert!(check.passed());
        assert_eq!(check.subpolytopes_checked, 7);
    }

    #[test]
    fn rejects_foreign_subpolytope() {
        let x = corpus::torus();
        let p = poly("1,0;0,1");
        let other = Subpolytope::full(&poly("1,0"));
        assert!(twisted_complex(&x, &p, &other).is_err());
        assert!(twisted_complex(&x, &poly("1"), &Subpolytope::full(&poly("1"))).is_err());
    }

    #[test]
    fn lift_change_is_valid() {
        let x = corpus::subdivided_circle();
        let shifts = vec![vec![vec![2], vec![-1]], vec![vec![0], vec![5]]];
        let y = change_lifts(&x, &shifts).unwrap();
        assert_ne!(y, x);
        y.validate().unwrap();
    }
}
