//! Sparse multivariate polynomials over Q(i).
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors under graded
//! lexicographic order, so iteration order, leading terms, and rendering are
//! all canonical: two equal polynomials have identical term maps.
//!
//! Key operations
//! - ring arithmetic, exact division, substitution and linear changes of
//!   coordinates;
//! - order at the origin, homogeneous parts, partial derivatives;
//! - gcd / squarefree part (primitive PRS, `gcd` submodule);
//! - resultants via the subresultant PRS (`resultant` submodule).
//!
//! Binary operations require both operands to carry the same variable list;
//! the checked entry points report a structural error, the operator impls
//! panic and are reserved for internal call sites that construct both sides
//! from one family.

pub mod gcd;
pub mod resultant;
pub mod uni;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::ExactScalar;

/// Exponent vector; ordered graded-lex (total degree first, then
/// lexicographic with earlier variables weighing more).
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn checked_add(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, ExactScalar>,
}

impl Polynomial {
    pub fn zero(vars: &[String]) -> Self {
        Polynomial {
            vars: vars.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[String], c: ExactScalar) -> Self {
        let mut p = Polynomial::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial(vec![0; vars.len()]), c);
        }
        p
    }

    pub fn one(vars: &[String]) -> Self {
        Polynomial::constant(vars, ExactScalar::one())
    }

    pub fn variable(vars: &[String], idx: usize) -> Result<Self> {
        if idx >= vars.len() {
            return Err(Error::structural(format!(
                "variable index {idx} out of range for {} variables",
                vars.len()
            )));
        }
        let mut exps = vec![0u32; vars.len()];
        exps[idx] = 1;
        let mut p = Polynomial::zero(vars);
        p.terms.insert(Monomial(exps), ExactScalar::one());
        Ok(p)
    }

    pub fn from_terms(vars: &[String], terms: Vec<(Vec<u32>, ExactScalar)>) -> Result<Self> {
        let mut p = Polynomial::zero(vars);
        for (exps, c) in terms {
            if exps.len() != vars.len() {
                return Err(Error::structural(
                    "exponent vector length does not match the variable list",
                ));
            }
            p.add_term(Monomial(exps), c);
        }
        Ok(p)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_constant())
    }

    pub fn constant_term(&self) -> ExactScalar {
        self.terms
            .get(&Monomial(vec![0; self.vars.len()]))
            .cloned()
            .unwrap_or_else(ExactScalar::zero)
    }

    pub fn coeff(&self, exps: &[u32]) -> ExactScalar {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(ExactScalar::zero)
    }

    /// Leading term under graded-lex, `None` for the zero polynomial.
    pub fn leading(&self) -> Option<(&Monomial, &ExactScalar)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Order of vanishing at the origin (degree of the lowest term).
    pub fn order_at_origin(&self) -> Result<u32> {
        self.terms
            .keys()
            .map(|m| m.degree())
            .min()
            .ok_or_else(|| Error::domain("order at origin of the zero polynomial"))
    }

    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        let mut p = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            if m.degree() == d {
                p.terms.insert(m.clone(), c.clone());
            }
        }
        p
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|m| m.degree());
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    pub fn partial_derivative(&self, var: usize) -> Result<Polynomial> {
        if var >= self.vars.len() {
            return Err(Error::structural(format!(
                "no variable with index {var} to differentiate by"
            )));
        }
        let mut p = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] = e - 1;
            p.add_term(Monomial(exps), c * &ExactScalar::from_int(e as i64));
        }
        Ok(p)
    }

    pub fn evaluate(&self, point: &[ExactScalar]) -> Result<ExactScalar> {
        if point.len() != self.vars.len() {
            return Err(Error::structural("evaluation point has wrong dimension"));
        }
        let mut acc = ExactScalar::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = &term * &point[i].pow(e as i64)?;
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Compose with polynomial images: variable `i` is replaced by
    /// `images[i]`. All images must share one variable list, which becomes
    /// the list of the result.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.vars.len() {
            return Err(Error::structural(
                "substitution needs one image per variable",
            ));
        }
        let target_vars = match images.first() {
            Some(p) => p.vars.clone(),
            None => return Ok(Polynomial::zero(&[])),
        };
        if images.iter().any(|p| p.vars != target_vars) {
            return Err(Error::structural(
                "substitution images must share one variable list",
            ));
        }
        // Memoize image powers; exponents in germ inputs are small.
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|p| vec![Polynomial::one(&target_vars), p.clone()])
            .collect();
        let mut acc = Polynomial::zero(&target_vars);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(&target_vars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &powers[i][1];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e as usize];
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// `f(Mx)` for an invertible square matrix `M` over Q(i).
    pub fn linear_substitute(&self, m: &Matrix) -> Result<Polynomial> {
        let n = self.vars.len();
        if m.size() != n {
            return Err(Error::structural(
                "matrix size does not match the number of variables",
            ));
        }
        if m.det().is_zero() {
            return Err(Error::domain("singular change of coordinates"));
        }
        let images: Vec<Polynomial> = (0..n)
            .map(|i| {
                let mut img = Polynomial::zero(&self.vars);
                for (j, coeff) in m.row(i).iter().enumerate() {
                    if !coeff.is_zero() {
                        let mut exps = vec![0u32; n];
                        exps[j] = 1;
                        img.add_term(Monomial(exps), coeff.clone());
                    }
                }
                img
            })
            .collect();
        self.substitute(&images)
    }

    pub fn scale(&self, c: &ExactScalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        let mut p = Polynomial::zero(&self.vars);
        for (m, a) in &self.terms {
            p.terms.insert(m.clone(), a * c);
        }
        p
    }

    pub fn mul_monomial(&self, exps: &[u32], c: &ExactScalar) -> Polynomial {
        let shift = Monomial(exps.to_vec());
        let mut p = Polynomial::zero(&self.vars);
        if c.is_zero() {
            return p;
        }
        for (m, a) in &self.terms {
            p.terms.insert(m.checked_add(&shift), a * c);
        }
        p
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.vars);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact multivariate division; `None` when the divisor does not divide.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        assert_eq!(self.vars, divisor.vars, "div_exact over one variable list");
        if divisor.is_zero() {
            return None;
        }
        let (dm, dc) = divisor.leading().expect("nonzero divisor");
        let dm = dm.clone();
        let dc_inv = dc.inv().ok()?;
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(&self.vars);
        while let Some((rm, rc)) = rem.leading() {
            let exps: Option<Vec<u32>> = rm
                .0
                .iter()
                .zip(&dm.0)
                .map(|(a, b)| a.checked_sub(*b))
                .collect();
            let exps = exps?;
            let c = rc * &dc_inv;
            let q_term = Polynomial::from_terms(&self.vars, vec![(exps, c)]).expect("term");
            rem = &rem - &(&q_term * divisor);
            quot = &quot + &q_term;
        }
        Some(quot)
    }

    /// Degree in a single variable; `None` for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    /// Coefficient of `var^k` as a polynomial (same variable list, with the
    /// exponent of `var` zeroed out).
    pub fn coeff_of_power(&self, var: usize, k: u32) -> Polynomial {
        let mut p = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            if m.0[var] == k {
                let mut exps = m.0.clone();
                exps[var] = 0;
                p.add_term(Monomial(exps), c.clone());
            }
        }
        p
    }

    pub fn var_occurs(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    /// Factor out the largest power of a variable: `f = var^k * g`.
    pub fn strip_var_factor(&self, var: usize) -> (u32, Polynomial) {
        let k = match self.terms.keys().map(|m| m.0[var]).min() {
            Some(k) if k > 0 => k,
            _ => return (0, self.clone()),
        };
        let mut p = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            exps[var] -= k;
            p.terms.insert(Monomial(exps), c.clone());
        }
        (k, p)
    }

    /// Swap the roles of two variables (exponent transposition; the variable
    /// names stay in place). Used for the second Puiseux chart.
    pub fn swap_vars(&self, i: usize, j: usize) -> Polynomial {
        let mut p = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            exps.swap(i, j);
            p.terms.insert(Monomial(exps), c.clone());
        }
        p
    }

    /// Divide by the graded-lex leading coefficient, making it 1. This is the
    /// normalization used for gcd and squarefree outputs.
    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ensure_same_vars(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ensure_same_vars(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ensure_same_vars(other)?;
        Ok(self * other)
    }

    pub fn ensure_same_vars(&self, other: &Polynomial) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::structural(format!(
                "variable lists differ: [{}] vs [{}]",
                self.vars.join(", "),
                other.vars.join(", ")
            )));
        }
        Ok(())
    }

    fn add_term(&mut self, m: Monomial, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn render_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    self.vars[i].clone()
                } else {
                    format!("{}^{}", self.vars[i], e)
                }
            })
            .collect();
        parts.join("*")
    }
}

impl fmt::Display for Polynomial {
    /// Canonical text: terms in descending graded-lex order, coefficients as
    /// `a+b*i` with rational parts `p/q`. The output re-parses to the same
    /// polynomial (no implicit multiplication is ever emitted).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            // Fold the sign of the real part (or imaginary part for purely
            // imaginary coefficients) into the separator.
            use num_traits::Zero;
            let negative = if !c.re().is_zero() {
                c.re() < &num_rational::BigRational::zero()
            } else {
                c.im() < &num_rational::BigRational::zero()
            };
            let mag = if negative { -c } else { c.clone() };
            if first {
                if negative {
                    f.write_str("-")?;
                }
                first = false;
            } else if negative {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let mono = self.render_monomial(m);
            if mono.is_empty() {
                if mag.is_real() || mag.re().is_zero() {
                    write!(f, "{}", mag.render())?;
                } else {
                    write!(f, "({})", mag.render())?;
                }
            } else if mag.is_one() {
                f.write_str(&mono)?;
            } else if mag.is_real() {
                write!(f, "{}*{}", mag.render(), mono)?;
            } else if mag == ExactScalar::i() {
                write!(f, "i*{}", mono)?;
            } else {
                write!(f, "({})*{}", mag.render(), mono)?;
            }
        }
        Ok(())
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.vars, rhs.vars, "polynomial addition over one variable list");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.vars, rhs.vars, "polynomial subtraction over one variable list");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.vars, rhs.vars, "polynomial multiplication over one variable list");
        let mut out = Polynomial::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.checked_add(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), -c);
        }
        out
    }
}

macro_rules! forward_poly_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
        impl $trait<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                self.$method(&rhs)
            }
        }
    };
}

forward_poly_binop!(Add, add);
forward_poly_binop!(Sub, sub);
forward_poly_binop!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    fn p(text: &str) -> Polynomial {
        parse_polynomial(text, None).unwrap()
    }

    fn pv(text: &str, vars: &[&str]) -> Polynomial {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        parse_polynomial(text, Some(&vars)).unwrap()
    }

    #[test]
    fn gaussian_conjugate_product() {
        // (x+iy)(x-iy) = x^2 + y^2.
        let a = p("x+i*y");
        let b = p("x-i*y");
        assert_eq!(&a * &b, p("x^2+y^2"));
    }

    #[test]
    fn order_and_homogeneous_part() {
        let f = p("x^2+y^2-z^3");
        assert_eq!(f.order_at_origin().unwrap(), 2);
        assert_eq!(f.homogeneous_part(2), pv("x^2+y^2", &["x", "y", "z"]));
        assert_eq!(f.homogeneous_part(3), pv("-z^3", &["x", "y", "z"]));
        assert!(Polynomial::zero(&[]).order_at_origin().is_err());
    }

    #[test]
    fn derivative_basics() {
        let f = p("x^3+x^2*y+y^3*z+z^5");
        assert_eq!(
            f.partial_derivative(0).unwrap(),
            pv("3*x^2+2*x*y", &["x", "y", "z"])
        );
        assert_eq!(
            f.partial_derivative(2).unwrap(),
            pv("y^3+5*z^4", &["x", "y", "z"])
        );
    }

    #[test]
    fn division_exact_and_inexact() {
        let f = p("x^2-y^2");
        let g = pv("x+y", &["x", "y"]);
        let q = f.div_exact(&g).unwrap();
        assert_eq!(q, pv("x-y", &["x", "y"]));
        assert!(f.div_exact(&pv("x+2*y", &["x", "y"])).is_none());
    }

    #[test]
    fn linear_substitute_hand_expansion() {
        // x -> x+iy, y -> x-iy applied to x^2+y^2.
        // Hand expansion: (x+iy)^2 + (x-iy)^2 = 2x^2 - 2y^2.
        let f = p("x^2+y^2");
        let m = Matrix::new(vec![
            vec![ExactScalar::one(), ExactScalar::i()],
            vec![ExactScalar::one(), -ExactScalar::i()],
        ])
        .unwrap();
        assert_eq!(f.linear_substitute(&m).unwrap(), p("2*x^2-2*y^2"));
    }

    #[test]
    fn linear_substitute_rejects_singular() {
        let f = p("x^2+y^2");
        let m = Matrix::new(vec![
            vec![ExactScalar::one(), ExactScalar::one()],
            vec![ExactScalar::one(), ExactScalar::one()],
        ])
        .unwrap();
        assert!(matches!(
            f.linear_substitute(&m),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn mixed_vars_rejected() {
        let f = p("x^2");
        let g = p("y^2");
        assert!(f.checked_add(&g).is_err());
    }

    #[test]
    fn graded_lex_leading_term() {
        let f = p("x^3 + x^2*y + y^3*z + z^5");
        let (m, _) = f.leading().unwrap();
        // z^5 has the highest total degree.
        assert_eq!(m.0, vec![0, 0, 5]);
        let g = p("x^2*y + x^3");
        let (m, _) = g.leading().unwrap();
        // Same degree: x^3 beats x^2*y lexicographically.
        assert_eq!(m.0, vec![3, 0]);
    }

    #[test]
    fn strip_and_swap() {
        let f = p("x^2*y + x^3*y^2");
        let (k, g) = f.strip_var_factor(0);
        assert_eq!(k, 2);
        assert_eq!(g, pv("y + x*y^2", &["x", "y"]));
        let h = pv("y^2 - x^3", &["x", "y"]).swap_vars(0, 1);
        assert_eq!(h, pv("x^2 - y^3", &["x", "y"]));
    }

    #[test]
    fn rendering_round_trip() {
        for text in [
            "x^2 - y^2",
            "y^2 + x^4",
            "x^3 + x^2*y + y^3*z + z^5",
            "1/2*x - 3*y + i*x*y",
            "(2-3*i)*x^2 + (1/2+1/3*i)*y - 7",
        ] {
            let f = p(text);
            let rendered = f.to_string();
            let reparsed = parse_polynomial(&rendered, Some(f.vars())).unwrap();
            assert_eq!(f, reparsed, "round trip failed for {text} -> {rendered}");
        }
    }
}
