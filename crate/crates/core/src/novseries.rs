//! Novikov series realized to finite precision.
//!
//! A [`Truncation`] fixes a direction `c` in the interior of the active
//! polytope and an order `N`; a [`TruncatedNovikovSeries`] keeps exactly the
//! monomials `t^A` with `Φ_c(A) ≤ N`. Positivity of a support against every
//! vertex functional is what makes `1 − u` invertible in the polytope
//! Novikov ring, and by convexity it is enough to test the vertices.

use num_traits::{Signed, Zero};

use crate::error::{input_err, NovikovError, Result};
use crate::groupring::{GrOp, GroupRingElement};
use crate::lattice::{check_dim, CohomologyClass, Rational, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Truncation {
    direction: CohomologyClass,
    order: Rational,
}

impl Truncation {
    /// Direction `Σ w_l a_l` with all weights strictly positive.
    pub fn interior<V: VertexSet + ?Sized>(vertices: &V, weights: &[Rational], order: Rational) -> Result<Self> {
        let active = vertices.active_vertices();
        check_dim(active.len(), weights.len())?;
        if weights.iter().any(|w| !w.is_positive()) {
            return input_err("truncation weights must be strictly positive");
        }
        let rank = active[0].rank();
        let mut periods = vec![Rational::zero(); rank];
        for (w, v) in weights.iter().zip(&active) {
            check_dim(rank, v.rank())?;
            for (p, q) in periods.iter_mut().zip(v.periods()) {
                *p += w * q;
            }
        }
        Ok(Truncation { direction: CohomologyClass::new(periods), order })
    }

    /// Window along a single nonzero class (the one-vertex polytope).
    pub fn along(class: &CohomologyClass, order: Rational) -> Result<Self> {
        if class.is_zero() {
            return input_err("truncation direction must be nonzero");
        }
        Ok(Truncation { direction: class.clone(), order })
    }

    pub fn direction(&self) -> &CohomologyClass {
        &self.direction
    }

    pub fn order(&self) -> &Rational {
        &self.order
    }

    pub fn with_order(&self, order: Rational) -> Self {
        Truncation { direction: self.direction.clone(), order }
    }

    pub fn admits(&self, exponent: &[i64]) -> bool {
        self.direction.eval(exponent).map(|v| v <= self.order).unwrap_or(false)
    }

    /// Drops every monomial outside the window.
    pub fn truncate(&self, x: &GroupRingElement) -> GroupRingElement {
        self.truncate_at(x, &self.order)
    }

    fn truncate_at(&self, x: &GroupRingElement, level: &Rational) -> GroupRingElement {
        let mut out = GroupRingElement::zero(x.ring(), x.rank());
        for (e, c) in x.terms() {
            if self.direction.eval(e).map(|v| v <= *level).unwrap_or(false) {
                out.add_term(e.clone(), c.clone());
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedNovikovSeries {
    truncation: Truncation,
    element: GroupRingElement,
}

impl TruncatedNovikovSeries {
    pub fn new(element: &GroupRingElement, truncation: &Truncation) -> Result<Self> {
        check_dim(truncation.direction.rank(), element.rank())?;
        Ok(TruncatedNovikovSeries { element: truncation.truncate(element), truncation: truncation.clone() })
    }

    pub fn element(&self) -> &GroupRingElement {
        &self.element
    }

    pub fn truncation(&self) -> &Truncation {
        &self.truncation
    }

    pub fn is_zero(&self) -> bool {
        self.element.is_zero()
    }

    /// The same series seen at a lower order.
    pub fn restrict(&self, order: Rational) -> Result<Self> {
        if order > self.truncation.order {
            return input_err("cannot restrict to a higher order");
        }
        let t = self.truncation.with_order(order);
        Self::new(&self.element, &t)
    }
}

/// True iff every vertex functional is strictly positive on `supp(u)`.
pub fn positivity_check<V: VertexSet + ?Sized>(u: &GroupRingElement, vertices: &V) -> Result<bool> {
    if u.is_zero() {
        return input_err("positivity check needs a nonzero element");
    }
    for v in vertices.active_vertices() {
        let min = u.min_period(v)?.expect("nonzero element has support");
        if !min.is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn require_field(x: &GroupRingElement) -> Result<()> {
    if !x.ring().is_field() {
        return input_err("series inversion needs field coefficients (Q or Z2)");
    }
    Ok(())
}

/// `Σ_{j ≥ 0} u^j` truncated at `level`; needs `Φ_c > 0` on `supp(u)`.
fn geometric_sum(u: &GroupRingElement, t: &Truncation, level: &Rational) -> GroupRingElement {
    let one = GroupRingElement::one(u.ring(), u.rank());
    let mut acc = t.truncate_at(&one, level);
    let mut power = one;
    loop {
        power = t.truncate_at(&(&power * u), level);
        if power.is_zero() {
            return acc;
        }
        acc = &acc + &power;
    }
}

/// Inverse of `x = 1 − u` in the polytope Novikov ring, to the window of `t`.
pub fn geom_inverse<V: VertexSet + ?Sized>(
    x: &GroupRingElement,
    t: &Truncation,
    vertices: &V,
) -> Result<TruncatedNovikovSeries> {
    require_field(x)?;
    check_dim(t.direction.rank(), x.rank())?;
    let u = &GroupRingElement::one(x.ring(), x.rank()) - x;
    if u.is_zero() {
        return TruncatedNovikovSeries::new(x, t);
    }
    if !positivity_check(&u, vertices)? {
        return Err(NovikovError::NotInvertibleUnderPolytope(format!(
            "1 - ({x}) has a term that is not positive at every vertex"
        )));
    }
    // the window direction is a positive combination of the vertices, so it
    // is positive on supp(u) as well
    match u.min_period(&t.direction)? {
        Some(m) if m.is_positive() => {}
        _ => {
            return Err(NovikovError::NotInvertibleUnderPolytope(
                "truncation direction is not positive on the support".into(),
            ))
        }
    }
    TruncatedNovikovSeries::new(&geometric_sum(&u, t, &t.order), t)
}

pub fn series_arith(
    x: &TruncatedNovikovSeries,
    y: &TruncatedNovikovSeries,
    op: GrOp,
) -> Result<TruncatedNovikovSeries> {
    if x.truncation != y.truncation {
        return input_err("series truncations differ");
    }
    let raw = crate::groupring::gr_arith(&x.element, &y.element, op)?;
    TruncatedNovikovSeries::new(&raw, &x.truncation)
}

/// Inverse of `x` whose `Φ_c`-minimal part is a single invertible term.
///
/// Writing `x = ℓ·(1 − u)` with `ℓ` the leading monomial, the result is
/// `ℓ⁻¹ Σ u^j`, cut to the window. When `Φ(ℓ) < 0` the identity `x·x⁻¹ = 1`
/// holds only below `N + Φ(ℓ)`; see [`inverse_defect_level`].
pub fn leading_unit_inverse(
    x: &GroupRingElement,
    c: &CohomologyClass,
    t: &Truncation,
) -> Result<TruncatedNovikovSeries> {
    require_field(x)?;
    check_dim(c.rank(), x.rank())?;
    if x.is_zero() {
        return Err(NovikovError::AmbiguousLeadingTerm("zero has no leading term".into()));
    }
    let mut minimal: Vec<(&Vec<i64>, &Rational)> = Vec::new();
    let mut best: Option<Rational> = None;
    for (e, coeff) in x.terms() {
        let v = c.eval(e)?;
        match best.as_ref().map(|b| v.cmp(b)) {
            None | Some(std::cmp::Ordering::Less) => {
                best = Some(v);
                minimal.clear();
                minimal.push((e, coeff));
            }
            Some(std::cmp::Ordering::Equal) => minimal.push((e, coeff)),
            Some(std::cmp::Ordering::Greater) => {}
        }
    }
    if minimal.len() != 1 {
        return Err(NovikovError::AmbiguousLeadingTerm(format!(
            "{} terms of {x} share the minimal period",
            minimal.len()
        )));
    }
    let (lead_exp, lead_coeff) = minimal[0];
    let lead = GroupRingElement::monomial(x.ring(), lead_exp.clone(), lead_coeff.clone());
    let lead_inv = lead.monomial_inverse().expect("field coefficient is invertible");
    let u = &GroupRingElement::one(x.ring(), x.rank()) - &(&lead_inv * x);
    let shift = t.direction.eval(lead_exp)?;
    let level = t.order() + &shift;
    if !u.is_zero() {
        match u.min_period(&t.direction)? {
            Some(m) if m.is_positive() => {}
            _ => {
                return Err(NovikovError::NotInvertibleUnderPolytope(
                    "window direction does not order the support of x".into(),
                ))
            }
        }
    }
    let sum = geometric_sum(&u, t, &level);
    TruncatedNovikovSeries::new(&(&lead_inv * &sum), t)
}

/// Level below which `x · leading_unit_inverse(x)` agrees with 1.
pub fn inverse_defect_level(x: &GroupRingElement, t: &Truncation) -> Result<Rational> {
    let v = x.min_period(&t.direction)?.unwrap_or_else(Rational::zero);
    Ok(if v.is_negative() { t.order() + v } else { t.order().clone() })
}

/// Checks `x · y ≡ 1` below [`inverse_defect_level`].
pub fn is_inverse_mod_window(x: &GroupRingElement, y: &TruncatedNovikovSeries) -> Result<bool> {
    let level = inverse_defect_level(x, &y.truncation)?;
    let prod = y.truncation.truncate_at(&(x * &y.element), &level);
    Ok(prod.is_one() || (prod.is_zero() && level < Rational::zero()))
}

impl TruncatedNovikovSeries {
    pub fn one(t: &Truncation, ring: crate::groupring::CoefficientRing) -> Result<Self> {
        let rank = t.direction.rank();
        Self::new(&GroupRingElement::one(ring, rank), t)
    }

    pub fn is_one(&self) -> bool {
        self.element.is_one() || (self.element.is_zero() && self.truncation.order < Rational::zero())
    }
}
