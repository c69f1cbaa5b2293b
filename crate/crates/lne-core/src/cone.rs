//! Tangent cones of hypersurface germs.
//!
//! For a hypersurface V(f) through the origin the tangent cone is the zero
//! set of the initial form, the lowest-degree homogeneous part of f. What
//! the decision procedures need from it is structural: whether the form is
//! squarefree (a repeated factor means the cone carries a component of
//! multiplicity at least two, which already forces non-NE), and for binary
//! forms the full list of linear factors with multiplicities.
//!
//! Repeated-factor detection is exact, by the gcd chain over Q(i). Root
//! values of binary factors are certified balls (or exact Gaussian
//! rationals when reconstruction succeeds); their multiplicities always
//! come from the exact squarefree decomposition, never from clustering.

use crate::ball::NumValue;
use crate::error::{Error, Result};
use crate::poly::gcd::squarefree_part;
use crate::poly::uni::UniPoly;
use crate::poly::Polynomial;
use crate::roots::all_roots;
use crate::scalar::ExactScalar;
use num_rational::BigRational;

/// A linear factor of a binary initial form, recorded by the direction
/// spanning its zero line: direction (a, b) stands for the factor a*y - b*x.
#[derive(Debug, Clone)]
pub struct BinaryFactor {
    pub direction: (NumValue, NumValue),
    pub multiplicity: u32,
}

#[derive(Debug, Clone)]
pub struct TangentCone {
    /// Lowest-degree homogeneous part of the defining polynomial.
    pub initial_form: Polynomial,
    /// Monic squarefree part of the initial form.
    pub reduced_form: Polynomial,
    /// A nonconstant common factor of the initial form and all its first
    /// partials, when one exists; its presence is the non-reducedness
    /// witness.
    pub repeated_factor: Option<Polynomial>,
    /// Linear factors with multiplicities; populated for two-variable
    /// germs only.
    pub binary_factorization: Option<Vec<BinaryFactor>>,
}

impl TangentCone {
    pub fn degree(&self) -> u32 {
        self.initial_form
            .total_degree()
            .expect("initial form is nonzero")
    }

    pub fn is_reduced(&self) -> bool {
        self.repeated_factor.is_none()
    }
}

/// Order of vanishing at the origin, after checking that `f` really is a
/// germ through it.
pub(crate) fn germ_order(f: &Polynomial) -> Result<u32> {
    if f.is_zero() {
        return Err(Error::domain("tangent cone of the zero polynomial"));
    }
    if !f.constant_term().is_zero() {
        return Err(Error::domain("not a germ through the origin"));
    }
    Ok(f.order_at_origin().expect("nonzero polynomial has an order"))
}

/// The quotient initial_form / squarefree_part, monic: nonconstant exactly
/// when the form has a repeated factor, in which case it is one (it divides
/// the form and all first partials).
fn repeated_part(initial_form: &Polynomial, reduced: &Polynomial) -> Option<Polynomial> {
    let rep = initial_form
        .div_exact(reduced)
        .expect("squarefree part divides the form")
        .monic();
    if rep.is_constant() {
        None
    } else {
        Some(rep)
    }
}

pub fn tangent_cone(f: &Polynomial, precision: u32) -> Result<TangentCone> {
    let d = germ_order(f)?;
    let initial_form = f.homogeneous_part(d);
    let reduced_form = squarefree_part(&initial_form)?;
    let repeated_factor = repeated_part(&initial_form, &reduced_form);
    let binary_factorization = if f.num_vars() == 2 {
        Some(binary_factors(&initial_form, precision)?)
    } else {
        None
    };
    Ok(TangentCone {
        initial_form,
        reduced_form,
        repeated_factor,
        binary_factorization,
    })
}

/// Witness for the multiplicity test: a nonconstant factor of the initial
/// form of multiplicity at least two, or None when the cone is reduced.
pub fn has_multiple_component(f: &Polynomial) -> Result<Option<Polynomial>> {
    let d = germ_order(f)?;
    let initial_form = f.homogeneous_part(d);
    let reduced = squarefree_part(&initial_form)?;
    Ok(repeated_part(&initial_form, &reduced))
}

/// Whether the line spanned by `v` lies inside the cone. By homogeneity a
/// single exact evaluation decides.
pub fn cone_contains_line(cone: &TangentCone, v: &[ExactScalar]) -> Result<bool> {
    if v.iter().all(|c| c.is_zero()) {
        return Err(Error::domain("line direction is the zero vector"));
    }
    Ok(cone.initial_form.evaluate(v)?.is_zero())
}

/// Dehomogenization of a binary form of degree `d` at the first variable:
/// g(t) = form(1, t), so the coefficient of t^b is the one of x^(d-b) y^b.
fn dehomogenize(form: &Polynomial, d: u32) -> UniPoly {
    UniPoly::new((0..=d).map(|b| form.coeff(&[d - b, b])).collect())
}

/// Linear factors of a nonzero binary form. The form splits over C as
/// lc * x^(d-e) * prod (y - t_i x)^(m_i) with t_i the roots of the
/// dehomogenization g(t) = form(1, t) and e its degree; the roots give
/// directions (1, t_i) and the leftover power of x gives (0, 1). Finite
/// directions come sorted by midpoint, the at-infinity factor last.
fn binary_factors(form: &Polynomial, precision: u32) -> Result<Vec<BinaryFactor>> {
    let d = form.total_degree().expect("nonzero form");
    let g = dehomogenize(form, d);
    let e = g.degree().expect("nonzero form dehomogenizes to nonzero") as u32;
    let mut factors: Vec<BinaryFactor> = all_roots(&g, precision)?
        .into_iter()
        .map(|(root, multiplicity)| BinaryFactor {
            direction: (NumValue::Exact(ExactScalar::one()), root),
            multiplicity,
        })
        .collect();
    factors.sort_by_cached_key(|fac| midpoint_key(&fac.direction.1, precision));
    if e < d {
        factors.push(BinaryFactor {
            direction: (NumValue::zero(), NumValue::Exact(ExactScalar::one())),
            multiplicity: d - e,
        });
    }
    Ok(factors)
}

fn midpoint_key(v: &NumValue, precision: u32) -> (BigRational, BigRational) {
    let b = v.as_ball(precision);
    (b.re().to_rational(), b.im().to_rational())
}
