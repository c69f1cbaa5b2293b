//! Newton-Puiseux expansion of plane curve germs.
//!
//! A squarefree germ f(x, y) = 0 through the origin splits into finitely
//! many branches, each parametrized by fractional power series
//! y = sum a_nu x^(nu/p).  This module computes those branches as conjugacy
//! classes with certified coefficients: exponents and ramification indices
//! are exact, coefficients are exact Gaussian rationals where the
//! computation stays rational and complex disks otherwise.
//!
//! Branches tangent to the y-axis fall outside the y-over-x chart; they are
//! recovered by a second pass on f(y, x) and tagged with [`Chart::XOverY`].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::ball::{CBall, NumValue};
use crate::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};
use crate::poly::gcd::{is_squarefree, squarefree_part};
use crate::poly::uni::UniPoly;
use crate::poly::Polynomial;
use crate::roots::{all_roots, roots_of_unity};
use crate::scalar::ExactScalar;
use crate::tol;

/// Which affine chart a branch was expanded in.  `YOverX` parametrizes
/// x = tau^p, y = series(tau); `XOverY` swaps the roles and captures the
/// branches tangent to the y-axis.
#[derive(Clone, Copy, PartialEq, Eq, Debug, PartialOrd, Ord)]
pub enum Chart {
    YOverX,
    XOverY,
}

/// One compact face of the Newton polygon.  `from` is the endpoint on the
/// small-y side, `to` the endpoint on the small-x side, so the slope
/// -rise/run is negative.  Branches attached to the edge behave like
/// y ~ c x^gamma with gamma = run/rise.
#[derive(Clone, Debug)]
pub struct PolygonEdge {
    pub from: (u32, u32),
    pub to: (u32, u32),
    pub slope: BigRational,
    pub gamma: BigRational,
    /// Primitive y-drop of the edge; ramification of its branches.
    pub p: u32,
    /// Primitive x-advance of the edge.
    pub m: u32,
    /// Edge polynomial phi(c), deflated so that phi(0) != 0.  Its roots are
    /// the leading coefficients c of the edge's branches.
    pub edge_polynomial: UniPoly,
}

impl PolygonEdge {
    /// The reduced edge polynomial psi with phi(c) = psi(c^p).  Working with
    /// psi picks one representative per conjugacy class of leading
    /// coefficients.
    pub fn reduced_polynomial(&self) -> UniPoly {
        let p = self.p as usize;
        let coeffs = self.edge_polynomial.coeffs();
        let mut out = Vec::with_capacity(coeffs.len() / p + 1);
        for (k, c) in coeffs.iter().enumerate() {
            if k % p == 0 {
                out.push(c.clone());
            } else {
                debug_assert!(c.is_zero(), "edge lattice gap carries a coefficient");
            }
        }
        UniPoly::new(out)
    }
}

/// Lower convex hull of the exponent support of a germ, together with the
/// multiplicity of any axis factors that were split off first.
#[derive(Clone, Debug)]
pub struct NewtonPolygon {
    /// Compact faces ordered by ascending slope (steepest first).
    pub edges: Vec<PolygonEdge>,
    /// Multiplicity of the factor x in the input.
    pub x_power: u32,
    /// Multiplicity of the factor y in the input.
    pub y_power: u32,
}

/// Newton polygon of a two-variable germ vanishing at the origin.  Axis
/// factors x^k and y^k are reported through `x_power`/`y_power` rather than
/// folded into the hull.
pub fn newton_polygon(f: &Polynomial) -> Result<NewtonPolygon> {
    check_germ(f)?;
    let (x_power, f1) = f.strip_var_factor(0);
    let (y_power, f2) = f1.strip_var_factor(1);
    Ok(NewtonPolygon {
        edges: hull_edges(&f2),
        x_power,
        y_power,
    })
}

fn check_germ(f: &Polynomial) -> Result<()> {
    if f.num_vars() != 2 {
        return Err(Error::structural(format!(
            "Puiseux expansion needs a polynomial in exactly 2 variables, got {}",
            f.num_vars()
        )));
    }
    if f.is_zero() {
        return Err(Error::domain("the zero polynomial has no branch structure"));
    }
    if !f.constant_term().is_zero() {
        return Err(Error::domain("not a germ through the origin"));
    }
    Ok(())
}

/// Compact negative-slope faces of the lower hull of the support of `f`.
/// `f` is assumed free of x- and y-factors; a constant input yields no
/// edges.
fn hull_edges(f: &Polynomial) -> Vec<PolygonEdge> {
    // One candidate point per x-exponent: the smallest y-exponent.
    let mut min_b: BTreeMap<u32, u32> = BTreeMap::new();
    for (mono, _) in f.terms() {
        let (a, b) = (mono.0[0], mono.0[1]);
        min_b
            .entry(a)
            .and_modify(|cur| *cur = (*cur).min(b))
            .or_insert(b);
    }
    let pts: Vec<(i64, i64)> = min_b.iter().map(|(&a, &b)| (a as i64, b as i64)).collect();

    // Monotone-chain lower hull, left to right.
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &q in &pts {
        while hull.len() >= 2 {
            let o = hull[hull.len() - 2];
            let a = hull[hull.len() - 1];
            let cross = (a.0 - o.0) * (q.1 - o.1) - (a.1 - o.1) * (q.0 - o.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(q);
    }

    let mut edges = Vec::new();
    for win in hull.windows(2) {
        let (a1, b1) = win[0];
        let (a2, b2) = win[1];
        if b2 >= b1 {
            // Slopes increase along the hull; once one is nonnegative the
            // rest of the walk is irrelevant for branches.
            break;
        }
        let da = a2 - a1;
        let db = b1 - b2;
        let g = da.gcd(&db);
        let (m, p) = ((da / g) as u32, (db / g) as u32);
        // phi(c) collects the coefficients on the edge lattice, read from
        // the small-y endpoint upward; the lattice step in c is p.
        let mut phi = vec![ExactScalar::zero(); (g * p as i64) as usize + 1];
        for j in 0..=g {
            let pt = [
                (a2 - j * m as i64) as u32,
                (b2 + j * p as i64) as u32,
            ];
            phi[(j * p as i64) as usize] = f.coeff(&pt);
        }
        edges.push(PolygonEdge {
            from: (a2 as u32, b2 as u32),
            to: (a1 as u32, b1 as u32),
            slope: BigRational::new(BigInt::from(-db), BigInt::from(da)),
            gamma: BigRational::new(BigInt::from(da), BigInt::from(db)),
            p,
            m,
            edge_polynomial: UniPoly::new(phi),
        });
    }
    edges
}

/// One conjugacy class of branches of a germ.  The class stands for
/// `conjugacy_size` distinct fractional power series, obtained from the
/// stored one by tau -> zeta tau over the ramification-index-th roots of
/// unity zeta.
#[derive(Clone, Debug)]
pub struct PuiseuxBranch {
    pub chart: Chart,
    /// Minimal common denominator p of the exponents: x = tau^p.
    pub ramification_index: u32,
    /// Terms (exponent, coefficient) with exponents strictly increasing,
    /// each >= 1, denominators dividing the ramification index.
    pub series: Vec<(BigRational, NumValue)>,
    /// The series is exact modulo terms of exponent strictly above this.
    pub truncation_exponent: BigRational,
    pub conjugacy_size: u32,
}

impl PuiseuxBranch {
    /// Tangent direction of the branch at the origin in the ambient (x, y)
    /// coordinates: (1, c) where c is the exponent-1 coefficient (0 when
    /// absent), or (0, 1) for branches from the swapped chart.
    pub fn tangent(&self) -> (NumValue, NumValue) {
        let one = NumValue::Exact(ExactScalar::one());
        let exp_one = BigRational::one();
        let c = self
            .series
            .iter()
            .find(|(e, _)| *e == exp_one)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(NumValue::zero);
        match self.chart {
            Chart::YOverX => (one, c),
            Chart::XOverY => (c, one),
        }
    }

    /// Whether the branch is a nonsingular component: its parametrization is
    /// analytic, i.e. the minimal ramification index is 1.  Requires the
    /// series to be computed at least up to exponent 2; shorter truncations
    /// cannot certify minimality of the exponent denominators.
    pub fn is_smooth(&self) -> Result<bool> {
        if self.truncation_exponent < BigRational::from_integer(BigInt::from(2)) {
            return Err(Error::Precision {
                message: "truncation exponent below 2 cannot certify smoothness; \
                          re-expand with a larger truncation"
                    .into(),
                required_precision: 0,
            });
        }
        Ok(self.ramification_index == 1)
    }

    /// The j-th conjugate series of the class: tau -> zeta^j tau with zeta a
    /// primitive p-th root of unity.  Coefficients stay exact when the root
    /// of unity is a Gaussian rational (p = 1, 2, 4).
    pub fn conjugate(&self, j: u32, prec: u32) -> Result<PuiseuxBranch> {
        let p = self.ramification_index;
        if p == 1 || j % p == 0 {
            return Ok(self.clone());
        }
        let zeta = roots_of_unity(p, prec)?;
        let mut series = Vec::with_capacity(self.series.len());
        for (exp, coeff) in &self.series {
            let nu = (exp * BigRational::from_integer(BigInt::from(p)))
                .to_integer()
                .to_u64()
                .ok_or_else(|| Error::internal("branch exponent out of range"))?;
            let k = ((j as u64 * nu) % p as u64) as usize;
            let term = if k == 0 {
                coeff.clone()
            } else {
                coeff.mul(&ball_to_value(&zeta[k]), prec)
            };
            series.push((exp.clone(), term));
        }
        Ok(PuiseuxBranch {
            chart: self.chart,
            ramification_index: p,
            series,
            truncation_exponent: self.truncation_exponent.clone(),
            conjugacy_size: self.conjugacy_size,
        })
    }

    /// The parametrized point (x(tau), y(tau)) as certified disks, for real
    /// dyadic tau.  The chart coordinate is tau^p exactly.
    pub fn ambient_point(&self, tau: &Dyadic, prec: u32) -> (CBall, CBall) {
        let unit = CBall::new(
            dyadic_pow(tau, self.ramification_index),
            Dyadic::zero(),
            Dyadic::zero(),
        );
        let series = self.eval_series(tau, prec);
        match self.chart {
            Chart::YOverX => (unit, series),
            Chart::XOverY => (series, unit),
        }
    }

    /// The series part sum a_nu tau^nu evaluated at real dyadic tau.
    pub fn eval_series(&self, tau: &Dyadic, prec: u32) -> CBall {
        let p = BigRational::from_integer(BigInt::from(self.ramification_index));
        let mut acc = CBall::zero();
        let mut pow = Dyadic::one();
        let mut pow_exp: u64 = 0;
        for (exp, coeff) in &self.series {
            let nu = (exp * &p).to_integer().to_u64().unwrap_or(0);
            while pow_exp < nu {
                pow = pow.mul(tau);
                pow_exp += 1;
            }
            let tp = CBall::new(pow.clone(), Dyadic::zero(), Dyadic::zero());
            acc = acc.add(&coeff.as_ball(prec).mul(&tp, prec), prec);
        }
        acc
    }
}

fn ball_to_value(b: &CBall) -> NumValue {
    if b.rad().is_zero() {
        NumValue::Exact(ExactScalar::new(b.re().to_rational(), b.im().to_rational()))
    } else {
        NumValue::Ball(b.clone())
    }
}

fn dyadic_pow(d: &Dyadic, k: u32) -> Dyadic {
    let mut out = Dyadic::one();
    for _ in 0..k {
        out = out.mul(d);
    }
    out
}

/// Complete Puiseux expansion of a squarefree germ into branch conjugacy
/// classes.  Every class is exact modulo exponents above `truncation` (or
/// reported with the smaller exponent it actually achieved), passes the
/// residual gate at [`tol::RESIDUAL_TOLERANCE`], and the class ramification
/// indices add up to the multiplicity of the germ.
pub fn puiseux_expand(
    f: &Polynomial,
    truncation: &BigRational,
    precision: u32,
) -> Result<Vec<PuiseuxBranch>> {
    check_germ(f)?;
    tol::validate_precision(precision)?;
    if truncation < &BigRational::one() {
        return Err(Error::domain("truncation exponent must be at least 1"));
    }
    if !is_squarefree(f)? {
        let sqf = squarefree_part(f)?;
        let repeated = f
            .div_exact(&sqf)
            .map(|q| q.monic().to_string())
            .unwrap_or_else(|| "(unknown)".into());
        return Err(Error::precondition(format!(
            "input is not squarefree; repeated factor {repeated}; \
             expand the squarefree part instead"
        )));
    }
    tol::retry_with_precision(precision, |prec| expand_once(f, truncation, prec))
}

fn expand_once(
    f: &Polynomial,
    truncation: &BigRational,
    prec: u32,
) -> Result<Vec<PuiseuxBranch>> {
    let (kx, f1) = f.strip_var_factor(0);
    let (ky, f2) = f1.strip_var_factor(1);
    debug_assert!(kx <= 1 && ky <= 1, "squarefree input with a repeated axis");

    let mut branches = Vec::new();
    if ky == 1 {
        branches.push(axis_branch(Chart::YOverX, truncation));
    }
    if kx == 1 {
        branches.push(axis_branch(Chart::XOverY, truncation));
    }
    for rec in expand_rec(&f2, EdgeFilter::GammaAtLeastOne, truncation.clone(), prec, 0)? {
        branches.push(finalize(rec, Chart::YOverX, truncation, prec)?);
    }
    let swapped = f2.swap_vars(0, 1);
    for rec in expand_rec(&swapped, EdgeFilter::GammaAboveOne, truncation.clone(), prec, 0)? {
        branches.push(finalize(rec, Chart::XOverY, truncation, prec)?);
    }

    // Degree accounting: branch multiplicities add up to the multiplicity
    // of the germ.  A miscount here means a lost or duplicated branch.
    let total: u32 = branches.iter().map(|b| b.ramification_index).sum();
    let ord = f.order_at_origin()?;
    if total != ord {
        return Err(Error::internal(format!(
            "branch multiplicities add to {total}, germ multiplicity is {ord}"
        )));
    }

    for b in &branches {
        let res = residual_check(f, b, tol::RESIDUAL_SAMPLES, prec)?;
        if !(res <= tol::RESIDUAL_TOLERANCE) {
            return Err(Error::Precision {
                message: format!(
                    "branch residual {res:.3e} exceeds tolerance {:.1e}",
                    tol::RESIDUAL_TOLERANCE
                ),
                required_precision: prec.saturating_mul(2),
            });
        }
    }

    branches.sort_by_cached_key(branch_sort_key);
    Ok(branches)
}

fn axis_branch(chart: Chart, truncation: &BigRational) -> PuiseuxBranch {
    PuiseuxBranch {
        chart,
        ramification_index: 1,
        series: Vec::new(),
        truncation_exponent: truncation.clone(),
        conjugacy_size: 1,
    }
}

type SortKey = (Chart, Vec<(BigRational, BigRational, BigRational)>);

fn branch_sort_key(b: &PuiseuxBranch) -> SortKey {
    let terms = b
        .series
        .iter()
        .map(|(e, v)| {
            let (re, im) = midpoint_rationals(v);
            (e.clone(), re, im)
        })
        .collect();
    (b.chart, terms)
}

fn midpoint_rationals(v: &NumValue) -> (BigRational, BigRational) {
    match v {
        NumValue::Exact(s) => (s.re().clone(), s.im().clone()),
        NumValue::Ball(b) => (b.re().to_rational(), b.im().to_rational()),
    }
}

/// Which polygon edges a recursion level may use.  The top-level main chart
/// takes gamma >= 1, the swapped chart gamma > 1 strictly (so branches with
/// a genuine tangent slope are not emitted twice), and recursion levels take
/// every edge.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum EdgeFilter {
    GammaAtLeastOne,
    GammaAboveOne,
    GammaPositive,
}

impl EdgeFilter {
    fn admits(self, gamma: &BigRational) -> bool {
        match self {
            EdgeFilter::GammaAtLeastOne => gamma >= &BigRational::one(),
            EdgeFilter::GammaAboveOne => gamma > &BigRational::one(),
            EdgeFilter::GammaPositive => true,
        }
    }
}

/// A branch before normalization: x = x_unit * tau^p exactly, y given by a
/// truncated series in tau.
struct RecBranch {
    p: u32,
    x_unit: NumValue,
    y: Series,
}

const MAX_DEPTH: u32 = 64;

fn expand_rec(
    f: &Polynomial,
    filter: EdgeFilter,
    budget: BigRational,
    prec: u32,
    depth: u32,
) -> Result<Vec<RecBranch>> {
    if depth > MAX_DEPTH {
        return Err(Error::internal("Puiseux recursion exceeded its depth bound"));
    }
    let mut out = Vec::new();
    for edge in hull_edges(f) {
        if !filter.admits(&edge.gamma) {
            continue;
        }
        let psi = edge.reduced_polynomial();
        let roots = all_roots(&psi, prec).map_err(|e| match e {
            Error::Unsupported(msg) => Error::unsupported(format!(
                "multiple edge root is not a Gaussian rational: {msg}"
            )),
            other => other,
        })?;
        for (u0, mult) in roots {
            if !u0.is_nonzero() {
                return Err(Error::Precision {
                    message: "edge polynomial root not separated from zero".into(),
                    required_precision: prec.saturating_mul(2),
                });
            }
            let (p, m) = (edge.p, edge.m);
            let (ap, bp) = bezout_exponents(p, m);
            let lambda = u0.pow(ap, prec);
            let mu = u0.pow(bp, prec);
            if mult == 1 {
                out.push(simple_leaf(f, &edge, &lambda, &mu, &budget, prec)?);
            } else {
                descend_multiple(f, &edge, &lambda, &mu, &budget, prec, depth, &mut out)?;
            }
        }
    }
    Ok(out)
}

/// Exponents (a', b') >= 0 with p b' - m a' = 1, used to express the
/// substitution scalars as integer powers lambda = u0^a', mu = u0^b'.
fn bezout_exponents(p: u32, m: u32) -> (u32, u32) {
    if m == 1 {
        return (p - 1, 1);
    }
    let bp = mod_inverse(p as i64 % m as i64, m as i64);
    let ap = (p as i64 * bp - 1) / m as i64;
    (ap as u32, bp as u32)
}

fn mod_inverse(a: i64, modulus: i64) -> i64 {
    // Extended Euclid; gcd(a, modulus) = 1 because (p, m) is primitive.
    let (mut r0, mut r1) = (modulus, a.rem_euclid(modulus));
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(modulus)
}

/// Weighted order of f under x -> t^p, y -> t^m: the hull value the edge
/// realizes.
fn weighted_order(f: &Polynomial, p: u32, m: u32) -> i64 {
    f.terms()
        .map(|(mono, _)| p as i64 * mono.0[0] as i64 + m as i64 * mono.0[1] as i64)
        .min()
        .unwrap_or(0)
}

/// Branch from a simple edge root: the tail series follows from the
/// implicit function theorem, one coefficient per power of tau.
fn simple_leaf(
    f: &Polynomial,
    edge: &PolygonEdge,
    lambda: &NumValue,
    mu: &NumValue,
    budget: &BigRational,
    prec: u32,
) -> Result<RecBranch> {
    let (p, m) = (edge.p, edge.m);
    let ell = weighted_order(f, p, m);

    // When the substitution scalars are exact, an identically vanishing
    // pullback certifies that the branch is exactly the monomial mu t^(m/p).
    if let (NumValue::Exact(ls), NumValue::Exact(ms)) = (lambda, mu) {
        let img_x = monomial_image(f, p, 0, ls);
        let img_y = monomial_image(f, m, 0, ms);
        if f.substitute(&[img_x, img_y])?.is_zero() {
            return Ok(RecBranch {
                p,
                x_unit: lambda.clone(),
                y: Series::exact_monomial(m as i64, mu.clone()),
            });
        }
    }

    // d/dw at w = 0 of the edge part of f(lambda t^p, mu t^m (1+w)) / t^ell.
    let mut pivot = NumValue::zero();
    let mut lam_pows = PowerCache::new(lambda.clone());
    let mut mu_pows = PowerCache::new(mu.clone());
    for (mono, c) in f.terms() {
        let (a, b) = (mono.0[0], mono.0[1]);
        if p as i64 * a as i64 + m as i64 * b as i64 != ell {
            continue;
        }
        let scale = ExactScalar::from_int(b as i64) * c;
        let term = lam_pows
            .get(a, prec)
            .mul(&mu_pows.get(b, prec), prec)
            .mul(&NumValue::Exact(scale), prec);
        pivot = pivot.add(&term, prec);
    }
    if !pivot.is_nonzero() {
        return Err(Error::Precision {
            message: "implicit-function pivot not separated from zero".into(),
            required_precision: prec.saturating_mul(2),
        });
    }

    let n_max = tail_length(p, budget, m);
    let mut w: BTreeMap<i64, NumValue> = BTreeMap::new();
    let deg_y = f.degree_in(1).unwrap_or(0) as usize;
    for n in 1..=n_max {
        // Coefficient of tau^(ell + n) in f(lambda tau^p, mu tau^m (1 + w)),
        // with w known through tau^(n-1); the missing tau^n term of w enters
        // linearly through the pivot.
        let mut one_plus_w: BTreeMap<i64, NumValue> = BTreeMap::new();
        one_plus_w.insert(0, NumValue::Exact(ExactScalar::one()));
        for (&k, v) in &w {
            one_plus_w.insert(k, v.clone());
        }
        let mut pow_b: Vec<BTreeMap<i64, NumValue>> = Vec::with_capacity(deg_y + 1);
        let mut unit = BTreeMap::new();
        unit.insert(0, NumValue::Exact(ExactScalar::one()));
        pow_b.push(unit);
        for b in 1..=deg_y {
            let next = map_mul_trunc(&pow_b[b - 1], &one_plus_w, n, prec);
            pow_b.push(next);
        }
        let mut r = NumValue::zero();
        for (mono, c) in f.terms() {
            let (a, b) = (mono.0[0] as i64, mono.0[1] as i64);
            let base = p as i64 * a + m as i64 * b;
            let j = ell + n - base;
            if j < 0 {
                continue;
            }
            let Some(cj) = pow_b[b as usize].get(&j) else {
                continue;
            };
            let term = lam_pows
                .get(a as u32, prec)
                .mul(&mu_pows.get(b as u32, prec), prec)
                .mul(&NumValue::Exact(c.clone()), prec)
                .mul(cj, prec);
            r = r.add(&term, prec);
        }
        let z = r.neg().div(&pivot, prec)?;
        if !z.is_exact_zero() {
            w.insert(n, z);
        }
    }

    let tail = Series {
        coeffs: w,
        trunc: n_max,
    };
    let y = one_plus(&tail).scale(mu, prec).shift(m as i64);
    Ok(RecBranch {
        p,
        x_unit: lambda.clone(),
        y,
    })
}

/// How many tail coefficients fit inside the budget: the series in tau is
/// wanted through floor(p * budget), and the leading monomial sits at m.
fn tail_length(p: u32, budget: &BigRational, m: u32) -> i64 {
    let want = BigRational::from_integer(BigInt::from(p)) * budget;
    let floor = want.floor().to_integer().to_i64().unwrap_or(0);
    (floor - m as i64).max(0)
}

/// Multiple edge root: substitute x = lambda t^p, y = mu t^m (1 + w)
/// exactly and recurse on the resulting germ in (t, w).
#[allow(clippy::too_many_arguments)]
fn descend_multiple(
    f: &Polynomial,
    edge: &PolygonEdge,
    lambda: &NumValue,
    mu: &NumValue,
    budget: &BigRational,
    prec: u32,
    depth: u32,
    out: &mut Vec<RecBranch>,
) -> Result<()> {
    let (p, m) = (edge.p, edge.m);
    let (NumValue::Exact(ls), NumValue::Exact(ms)) = (lambda, mu) else {
        return Err(Error::internal(
            "multiple edge root was not delivered as an exact scalar",
        ));
    };
    let ell = weighted_order(f, p, m);

    let img_x = monomial_image(f, p, 0, ls);
    // y -> mu t^m + mu t^m w.
    let img_y = Polynomial::from_terms(
        f.vars(),
        vec![(vec![m, 0], ms.clone()), (vec![m, 1], ms.clone())],
    )
    .expect("image polynomial is well-formed");
    let pulled = f.substitute(&[img_x, img_y])?;
    let (l_actual, f2) = pulled.strip_var_factor(0);
    if l_actual as i64 != ell {
        return Err(Error::internal(
            "pullback order disagrees with the hull value",
        ));
    }

    let sub_budget =
        BigRational::from_integer(BigInt::from(p)) * budget - BigRational::from_integer(m.into());

    let (k, f3) = f2.strip_var_factor(1);
    match k {
        0 => {}
        1 => {
            // w = 0 solves the pullback exactly: the branch terminates as
            // the exact monomial y = mu t^m.
            out.push(RecBranch {
                p,
                x_unit: lambda.clone(),
                y: Series::exact_monomial(m as i64, mu.clone()),
            });
        }
        _ => {
            return Err(Error::internal(
                "squarefree germ produced a repeated exact branch",
            ));
        }
    }

    if !f3.is_constant() && f3.constant_term().is_zero() {
        let subs = expand_rec(&f3, EdgeFilter::GammaPositive, sub_budget, prec, depth + 1)?;
        for s in subs {
            out.push(compose(p, m, lambda, mu, s, prec));
        }
    }
    Ok(())
}

/// x -> c x^k y^l style image polynomial over the variables of `f`.
fn monomial_image(f: &Polynomial, xe: u32, ye: u32, c: &ExactScalar) -> Polynomial {
    Polynomial::from_terms(f.vars(), vec![(vec![xe, ye], c.clone())])
        .expect("image polynomial is well-formed")
}

/// Splice a sub-branch (t, w) back through x = lambda t^p,
/// y = mu t^m (1 + w): with t = xs tau^ps and w = ys(tau),
/// x = lambda xs^p tau^(p ps) and y = mu xs^m tau^(m ps) (1 + ys(tau)).
fn compose(p: u32, m: u32, lambda: &NumValue, mu: &NumValue, sub: RecBranch, prec: u32) -> RecBranch {
    let total_p = p * sub.p;
    let x_unit = lambda.mul(&sub.x_unit.pow(p, prec), prec);
    let scale = mu.mul(&sub.x_unit.pow(m, prec), prec);
    let y = one_plus(&sub.y)
        .scale(&scale, prec)
        .shift(m as i64 * sub.p as i64);
    RecBranch {
        p: total_p,
        x_unit,
        y,
    }
}

/// Normalize a raw leaf into a reported branch: certify minimality of the
/// ramification index, absorb the x-unit by the substitution
/// tau -> x_unit^(-1/p) tau, and convert exponents to x-units.
fn finalize(
    rec: RecBranch,
    chart: Chart,
    truncation: &BigRational,
    prec: u32,
) -> Result<PuiseuxBranch> {
    let mut p = rec.p as i64;
    let mut coeffs = rec.y.coeffs;
    let mut trunc = rec.y.trunc;

    // Minimal common denominator: every exponent with a certified nonzero
    // coefficient enters the gcd; coefficients that merely might vanish
    // block the certificate and ask for more precision.
    let mut d = p;
    for (&k, v) in &coeffs {
        if v.is_nonzero() {
            d = d.gcd(&k);
        }
    }
    if d > 1 {
        if coeffs.keys().any(|&k| k % d != 0) {
            return Err(Error::Precision {
                message: "cannot certify minimal ramification: a coefficient straddles zero"
                    .into(),
                required_precision: prec.saturating_mul(2),
            });
        }
        coeffs = coeffs.into_iter().map(|(k, v)| (k / d, v)).collect();
        p /= d;
        if trunc != i64::MAX {
            trunc = trunc.div_euclid(d);
        }
    }
    let p = p as u32;

    // tau -> rho^(-1) tau with rho = x_unit^(1/p) turns x into exactly tau^p.
    let one = NumValue::Exact(ExactScalar::one());
    let rho_inv = match &rec.x_unit {
        NumValue::Exact(s) if s.is_one() => None,
        other => {
            let rho = other.nth_root(p, prec)?;
            Some(one.div(&rho, prec)?)
        }
    };

    let mut series = Vec::with_capacity(coeffs.len());
    for (k, v) in coeffs {
        let coeff = match &rho_inv {
            None => v,
            Some(ri) => v.mul(&ri.pow(k as u32, prec), prec),
        };
        if coeff.is_exact_zero() {
            continue;
        }
        let exp = BigRational::new(BigInt::from(k), BigInt::from(p));
        if exp < BigRational::one() {
            return Err(Error::internal("branch series exponent below 1"));
        }
        series.push((exp, coeff));
    }

    let truncation_exponent = if trunc == i64::MAX {
        // The series terminates: it is exact at every exponent.  Report the
        // requested horizon (or the last exponent if that reaches further).
        let last = series.last().map(|(e, _)| e.clone());
        match last {
            Some(e) if e > *truncation => e,
            _ => truncation.clone(),
        }
    } else {
        BigRational::new(BigInt::from(trunc), BigInt::from(p))
    };

    Ok(PuiseuxBranch {
        chart,
        ramification_index: p,
        series,
        truncation_exponent,
        conjugacy_size: p,
    })
}

/// Scaled backward error of a branch against the defining germ, maximized
/// over `samples` dyadic parameter values tau = 2^-64, 2^-65, ...: the
/// certified upper bound of |f(x(tau), y(tau))| divided by a lower bound of
/// sum |c_ab| |x|^a |y|^b.  An exact branch scores exactly 0.
pub fn residual_check(
    f: &Polynomial,
    b: &PuiseuxBranch,
    samples: u32,
    prec: u32,
) -> Result<f64> {
    if f.num_vars() != 2 {
        return Err(Error::structural(
            "residual check needs a polynomial in exactly 2 variables",
        ));
    }
    let mut worst = 0.0f64;
    for k in 0..samples.max(1) {
        let tau = Dyadic::power_of_two(-((tol::RESIDUAL_GRID_START + k) as i64));
        let (x, y) = b.ambient_point(&tau, prec);
        let x_low = x.mag_lower(prec);
        let y_low = y.mag_lower(prec);
        let mut num = CBall::zero();
        let mut den = Dyadic::zero();
        let mut x_pows = BallPowerCache::new(x.clone());
        let mut y_pows = BallPowerCache::new(y.clone());
        for (mono, c) in f.terms() {
            let (a, bb) = (mono.0[0], mono.0[1]);
            let cb = CBall::from_exact(c, prec);
            let term = cb
                .mul(&x_pows.get(a, prec), prec)
                .mul(&y_pows.get(bb, prec), prec);
            num = num.add(&term, prec);
            let mag = cb
                .mag_lower(prec)
                .mul(&dyadic_pow(&x_low, a))
                .mul(&dyadic_pow(&y_low, bb));
            den = den.add(&mag);
        }
        let num_up = num.mag_upper(prec);
        if num_up.is_zero() {
            continue;
        }
        if !den.is_positive() {
            return Err(Error::Precision {
                message: "residual denominator not separated from zero".into(),
                required_precision: prec.saturating_mul(2),
            });
        }
        let ratio = num_up.div(&den, 64, Round::Up).to_f64();
        worst = worst.max(ratio);
    }
    Ok(worst)
}

/// The least exponent at which two branch series differ, compared as series
/// in the x-exponent scale.  For same-tangent pairs this is the exponent q
/// of the separation bound ||gamma_1(t) - gamma_2(t)|| <= C t^q.  Branches
/// from different charts have different tangents and separate at the linear
/// term already, so q = 1.
pub fn separation_exponent(
    b1: &PuiseuxBranch,
    b2: &PuiseuxBranch,
    prec: u32,
) -> Result<BigRational> {
    if b1.chart != b2.chart {
        return Ok(BigRational::one());
    }
    let horizon = b1
        .truncation_exponent
        .clone()
        .min(b2.truncation_exponent.clone());
    let mut exponents: Vec<BigRational> = b1
        .series
        .iter()
        .chain(b2.series.iter())
        .map(|(e, _)| e.clone())
        .filter(|e| e <= &horizon)
        .collect();
    exponents.sort();
    exponents.dedup();

    let lookup = |b: &PuiseuxBranch, e: &BigRational| -> NumValue {
        b.series
            .iter()
            .find(|(be, _)| be == e)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(NumValue::zero)
    };

    for e in &exponents {
        let c1 = lookup(b1, e);
        let c2 = lookup(b2, e);
        // Identical representations denote the same computed coefficient
        // (shared between conjugates); they certify agreement here.
        if c1 == c2 {
            continue;
        }
        if let (NumValue::Exact(s1), NumValue::Exact(s2)) = (&c1, &c2) {
            if s1 == s2 {
                continue;
            }
            return Ok(e.clone());
        }
        if c1.certified_distinct(&c2, prec) {
            return Ok(e.clone());
        }
        return Err(Error::Precision {
            message: format!(
                "coefficients at exponent {e} overlap without being identical; \
                 raise the precision to separate them"
            ),
            required_precision: prec.saturating_mul(2),
        });
    }
    Err(Error::Precision {
        message: "series agree through their common truncation; \
                  re-expand with a larger truncation exponent"
            .into(),
        required_precision: prec.saturating_mul(2),
    })
}

/// Memoized integer powers of a NumValue.
struct PowerCache {
    base: NumValue,
    pows: Vec<NumValue>,
}

impl PowerCache {
    fn new(base: NumValue) -> Self {
        PowerCache {
            base,
            pows: vec![NumValue::Exact(ExactScalar::one())],
        }
    }

    fn get(&mut self, k: u32, prec: u32) -> NumValue {
        while self.pows.len() <= k as usize {
            let next = self.pows.last().unwrap().mul(&self.base, prec);
            self.pows.push(next);
        }
        self.pows[k as usize].clone()
    }
}

struct BallPowerCache {
    base: CBall,
    pows: Vec<CBall>,
}

impl BallPowerCache {
    fn new(base: CBall) -> Self {
        BallPowerCache {
            base,
            pows: vec![CBall::one()],
        }
    }

    fn get(&mut self, k: u32, prec: u32) -> CBall {
        while self.pows.len() <= k as usize {
            let next = self.pows.last().unwrap().mul(&self.base, prec);
            self.pows.push(next);
        }
        self.pows[k as usize].clone()
    }
}

/// Truncated product of coefficient maps: exponents above `limit` are
/// dropped.
fn map_mul_trunc(
    a: &BTreeMap<i64, NumValue>,
    b: &BTreeMap<i64, NumValue>,
    limit: i64,
    prec: u32,
) -> BTreeMap<i64, NumValue> {
    let mut out: BTreeMap<i64, NumValue> = BTreeMap::new();
    for (&i, av) in a {
        if i > limit {
            break;
        }
        for (&j, bv) in b {
            if i + j > limit {
                break;
            }
            let term = av.mul(bv, prec);
            if term.is_exact_zero() {
                continue;
            }
            match out.remove(&(i + j)) {
                None => {
                    out.insert(i + j, term);
                }
                Some(cur) => {
                    let sum = cur.add(&term, prec);
                    if !sum.is_exact_zero() {
                        out.insert(i + j, sum);
                    }
                }
            }
        }
    }
    out
}

/// A truncated power series in tau with certified coefficients: exact
/// modulo exponents above `trunc` (i64::MAX means fully exact).
#[derive(Clone, Debug)]
struct Series {
    coeffs: BTreeMap<i64, NumValue>,
    trunc: i64,
}

impl Series {
    fn exact_monomial(k: i64, v: NumValue) -> Series {
        let mut coeffs = BTreeMap::new();
        if !v.is_exact_zero() {
            coeffs.insert(k, v);
        }
        Series {
            coeffs,
            trunc: i64::MAX,
        }
    }

    fn scale(&self, v: &NumValue, prec: u32) -> Series {
        let coeffs = self
            .coeffs
            .iter()
            .filter_map(|(&k, c)| {
                let t = c.mul(v, prec);
                (!t.is_exact_zero()).then_some((k, t))
            })
            .collect();
        Series {
            coeffs,
            trunc: self.trunc,
        }
    }

    fn shift(&self, k: i64) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|(&e, v)| (e + k, v.clone())).collect(),
            trunc: self.trunc.saturating_add(k),
        }
    }
}

/// 1 + w as a series; the constant term is exact.
fn one_plus(w: &Series) -> Series {
    let mut coeffs = w.coeffs.clone();
    coeffs.insert(0, NumValue::Exact(ExactScalar::one()));
    Series {
        coeffs,
        trunc: w.trunc,
    }
}
