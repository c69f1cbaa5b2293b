//! Dense univariate polynomials over Q(i).
//!
//! Small helper layer for the places where one variable has been singled
//! out: edge polynomials of Newton polygons, discriminants in one slice
//! parameter, root isolation. Coefficients are stored in ascending order
//! with trailing zeros trimmed, so `coeffs.len() == degree + 1` for nonzero
//! polynomials.

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::ExactScalar;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniPoly {
    coeffs: Vec<ExactScalar>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<ExactScalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn constant(c: ExactScalar) -> Self {
        UniPoly::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> ExactScalar {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(ExactScalar::zero)
    }

    pub fn leading(&self) -> Option<&ExactScalar> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => UniPoly::zero(),
            Some(lc) => {
                let inv = lc.inv().expect("nonzero leading coefficient");
                UniPoly::new(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn eval(&self, x: &ExactScalar) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, c)| c * &ExactScalar::from_int(k as i64 + 1))
                .collect(),
        )
    }

    pub fn add(&self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }

    pub fn sub(&self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }

    pub fn mul(&self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![ExactScalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (a, ca) in self.coeffs.iter().enumerate() {
            for (b, cb) in rhs.coeffs.iter().enumerate() {
                out[a + b] = &out[a + b] + &(ca * cb);
            }
        }
        UniPoly::new(out)
    }

    pub fn scale(&self, c: &ExactScalar) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean division: `self = q * rhs + r` with `deg r < deg rhs`.
    pub fn div_rem(&self, rhs: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let d = rhs
            .degree()
            .ok_or_else(|| Error::domain("univariate division by zero"))?;
        let lc_inv = rhs.leading().unwrap().inv()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![ExactScalar::zero(); self.coeffs.len().saturating_sub(d)];
        while rem.len() > d {
            let k = rem.len() - 1;
            let c = &rem[k] * &lc_inv;
            if !c.is_zero() {
                quot[k - d] = c.clone();
                for (j, b) in rhs.coeffs.iter().enumerate() {
                    rem[k - d + j] = &rem[k - d + j] - &(&c * b);
                }
            }
            rem.pop();
        }
        Ok((UniPoly::new(quot), UniPoly::new(rem)))
    }

    pub fn div_exact(&self, rhs: &UniPoly) -> Result<UniPoly> {
        let (q, r) = self.div_rem(rhs)?;
        if !r.is_zero() {
            return Err(Error::internal("inexact univariate division"));
        }
        Ok(q)
    }

    /// Monic gcd by the Euclidean algorithm (field coefficients).
    pub fn gcd(&self, rhs: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Synthetic division by `x - root`; `None` when the remainder is nonzero.
    pub fn deflate(&self, root: &ExactScalar) -> Option<UniPoly> {
        let d = self.degree()?;
        if d == 0 {
            return None;
        }
        let mut out = vec![ExactScalar::zero(); d];
        let mut carry = ExactScalar::zero();
        for k in (0..=d).rev() {
            let v = &self.coeffs[k] + &(&carry * root);
            if k == 0 {
                if !v.is_zero() {
                    return None;
                }
            } else {
                out[k - 1] = v.clone();
                carry = v;
            }
        }
        Some(UniPoly::new(out))
    }

    /// Extract a univariate view of a multivariate polynomial; every other
    /// variable must be absent.
    pub fn from_polynomial(p: &Polynomial, var: usize) -> Result<UniPoly> {
        for v in 0..p.num_vars() {
            if v != var && p.var_occurs(v) {
                return Err(Error::structural(format!(
                    "polynomial is not univariate in `{}`: `{}` occurs",
                    p.vars()[var],
                    p.vars()[v]
                )));
            }
        }
        let deg = p.degree_in(var).unwrap_or(0) as usize;
        let mut coeffs = vec![ExactScalar::zero(); deg + 1];
        for (m, c) in p.terms() {
            coeffs[m.0[var] as usize] = c.clone();
        }
        Ok(UniPoly::new(coeffs))
    }

    pub fn to_polynomial(&self, vars: &[String], var: usize) -> Result<Polynomial> {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let mut exps = vec![0u32; vars.len()];
                exps[var] = k as u32;
                (exps, c.clone())
            })
            .collect();
        Polynomial::from_terms(vars, terms)
    }
}

/// Yun squarefree decomposition: `f = c * prod a_k^k` with the returned
/// `a_k` monic, squarefree, pairwise coprime, and listed with their
/// multiplicities `k` (factors that are 1 are dropped).
pub fn yun_decomposition(f: &UniPoly) -> Result<Vec<(UniPoly, u32)>> {
    if f.is_zero() {
        return Err(Error::domain("squarefree decomposition of zero"));
    }
    if f.degree() == Some(0) {
        return Ok(vec![]);
    }
    let f = f.monic();
    let df = f.derivative();
    let g = f.gcd(&df);
    if g.degree() == Some(0) {
        return Ok(vec![(f, 1)]);
    }
    let mut out = Vec::new();
    let mut w = f.div_exact(&g)?;
    let y = df.div_exact(&g)?;
    let mut z = y.sub(&w.derivative());
    let mut k = 1u32;
    while w.degree() != Some(0) {
        let a = w.gcd(&z);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), k));
        }
        w = w.div_exact(&a)?;
        let y_next = z.div_exact(&a)?;
        z = y_next.sub(&w.derivative());
        k += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    fn up(coeffs: &[i64]) -> UniPoly {
        UniPoly::new(coeffs.iter().map(|&n| c(n)).collect())
    }

    #[test]
    fn division_round_trip() {
        let f = up(&[2, 0, -3, 1]); // x^3 - 3x^2 + 2
        let g = up(&[-1, 1]); // x - 1
        let (q, r) = f.div_rem(&g).unwrap();
        assert_eq!(f, q.mul(&g).add(&r));
        assert!(r.is_zero()); // 1 is a root
        assert_eq!(q, up(&[-2, -2, 1]));
    }

    #[test]
    fn gcd_of_common_factor() {
        // (x-1)(x-2) and (x-1)(x+3) share x-1.
        let f = up(&[2, -3, 1]);
        let g = up(&[-3, 2, 1]);
        assert_eq!(f.gcd(&g), up(&[-1, 1]));
    }

    #[test]
    fn deflate_checks_remainder() {
        let f = up(&[-6, 11, -6, 1]); // (x-1)(x-2)(x-3)
        let g = f.deflate(&c(2)).unwrap();
        assert_eq!(g, up(&[3, -4, 1]));
        assert!(f.deflate(&c(5)).is_none());
    }

    #[test]
    fn yun_recovers_multiplicities() {
        // f = (x-1)^2 (x+2)^3
        let a = up(&[-1, 1]);
        let b = up(&[2, 1]);
        let f = a.mul(&a).mul(&b).mul(&b).mul(&b);
        let decomp = yun_decomposition(&f).unwrap();
        assert_eq!(decomp, vec![(a, 2), (b, 3)]);
    }

    #[test]
    fn yun_on_squarefree_input() {
        let f = up(&[-2, 1]).mul(&up(&[5, 1]));
        let decomp = yun_decomposition(&f).unwrap();
        assert_eq!(decomp.len(), 1);
        assert_eq!(decomp[0].1, 1);
        assert_eq!(decomp[0].0, f.monic());
    }

    #[test]
    fn multivariate_round_trip() {
        let vars: Vec<String> = ["x", "y"].iter().map(|s| s.to_string()).collect();
        let p = crate::parse::parse_polynomial("y^3 - 2*y + 1", Some(&vars)).unwrap();
        let u = UniPoly::from_polynomial(&p, 1).unwrap();
        assert_eq!(u, up(&[1, -2, 0, 1]));
        assert_eq!(u.to_polynomial(&vars, 1).unwrap(), p);
        let q = crate::parse::parse_polynomial("x*y", Some(&vars)).unwrap();
        assert!(UniPoly::from_polynomial(&q, 1).is_err());
    }
}
