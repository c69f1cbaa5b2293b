//! Multivariate gcd over Q(i) by the primitive pseudo-remainder sequence.
//!
//! The recursion views polynomials as univariate in their highest occurring
//! variable with coefficients in the remaining ones: gcd of the contents
//! times PRS gcd of the primitive parts. Desk-scale germ inputs keep the
//! sequences short, and taking primitive parts at every step tames
//! coefficient growth well enough here.
//!
//! All results are normalized monic under graded-lex, so gcds are canonical
//! representatives up to the unit group of Q(i).

use crate::error::Result;
use crate::poly::uni::UniPoly;
use crate::poly::Polynomial;
use crate::scalar::ExactScalar;

/// Highest-index variable occurring in either polynomial.
fn main_variable(f: &Polynomial, g: &Polynomial) -> Option<usize> {
    (0..f.num_vars())
        .rev()
        .find(|&v| f.var_occurs(v) || g.var_occurs(v))
}

/// Content of `f` with respect to `var`: the gcd of its coefficient
/// polynomials. Carries the full variable list (with `var` absent).
fn content(f: &Polynomial, var: usize) -> Result<Polynomial> {
    let deg = f.degree_in(var).expect("content of nonzero polynomial");
    let mut acc = Polynomial::zero(f.vars());
    for k in 0..=deg {
        let c = f.coeff_of_power(var, k);
        if c.is_zero() {
            continue;
        }
        acc = gcd(&acc, &c)?;
        if acc.is_constant() && !acc.is_zero() {
            return Ok(Polynomial::one(f.vars()));
        }
    }
    Ok(acc)
}

fn primitive_part(f: &Polynomial, var: usize) -> Result<Polynomial> {
    let cont = content(f, var)?;
    Ok(f.div_exact(&cont)
        .expect("content divides its polynomial")
        .monic())
}

/// Pseudo-remainder of `a` by `b` in `var`: eliminates leading terms after
/// scaling by the leading coefficient of `b`, never dividing. Exact up to a
/// factor of `lc(b)^k`, which the primitive PRS strips anyway.
fn pseudo_rem(a: &Polynomial, b: &Polynomial, var: usize) -> Polynomial {
    let db = b.degree_in(var).expect("nonzero divisor");
    let lc_b = b.coeff_of_power(var, db);
    let mut r = a.clone();
    while let Some(dr) = r.degree_in(var) {
        if r.is_zero() || dr < db {
            break;
        }
        let lc_r = r.coeff_of_power(var, dr);
        let mut shift = vec![0u32; r.num_vars()];
        shift[var] = dr - db;
        // r <- lc_b * r - lc_r * x^(dr-db) * b
        r = &(&r * &lc_b) - &(&b.mul_monomial(&shift, &crate::scalar::ExactScalar::one()) * &lc_r);
    }
    r
}

/// Monic gcd of two polynomials over one variable list.
pub fn gcd(f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    f.ensure_same_vars(g)?;
    if f.is_zero() {
        return Ok(g.monic());
    }
    if g.is_zero() {
        return Ok(f.monic());
    }
    if f.is_constant() || g.is_constant() {
        return Ok(Polynomial::one(f.vars()));
    }
    let var = main_variable(f, g).expect("non-constant inputs have a variable");

    let cont_f = content(f, var)?;
    let cont_g = content(g, var)?;
    let cont_gcd = gcd(&cont_f, &cont_g)?;

    let mut a = primitive_part(f, var)?;
    let mut b = primitive_part(g, var)?;
    if a.degree_in(var).unwrap_or(0) < b.degree_in(var).unwrap_or(0) {
        std::mem::swap(&mut a, &mut b);
    }
    let prs_gcd = loop {
        match b.degree_in(var) {
            None => break a, // b = 0
            Some(0) => {
                // Nonzero remainder of degree 0 in var: the primitive parts
                // are coprime in var, and being primitive they share no
                // content either.
                if b.is_zero() {
                    break a;
                }
                break Polynomial::one(f.vars());
            }
            Some(_) => {
                let r = pseudo_rem(&a, &b, var);
                a = b;
                b = if r.is_zero() {
                    Polynomial::zero(f.vars())
                } else {
                    primitive_part(&r, var)?
                };
            }
        }
    };
    Ok((&cont_gcd * &prs_gcd).monic())
}

/// Gcd of `f` with all of its partial derivatives: the factor to strip for
/// the squarefree part.
fn derivative_gcd(f: &Polynomial) -> Result<Polynomial> {
    let mut acc = f.clone();
    for v in 0..f.num_vars() {
        if !f.var_occurs(v) {
            continue;
        }
        acc = gcd(&acc, &f.partial_derivative(v)?)?;
        if acc.is_constant() {
            break;
        }
    }
    Ok(acc)
}

/// Monic product of the distinct irreducible factors of `f`.
pub fn squarefree_part(f: &Polynomial) -> Result<Polynomial> {
    if f.is_zero() || f.is_constant() {
        return Ok(f.monic());
    }
    // Already squarefree is the common case and certifies much faster than
    // the gcd that would prove an empty repeated part.
    if certified_squarefree(f)? == Some(true) {
        return Ok(f.monic());
    }
    let rep = derivative_gcd(f)?;
    Ok(f.div_exact(&rep)
        .expect("derivative gcd divides the polynomial")
        .monic())
}

/// Specialization points for the squarefreeness certificate. Small and
/// pairwise distinct; 1 and -1 are left out because symmetric inputs vanish
/// there too often.
const SAMPLE_POINTS: [i64; 6] = [2, -3, 5, -7, 11, -13];

fn univariate_squarefree(f: &Polynomial, var: usize) -> Result<bool> {
    let u = UniPoly::from_polynomial(f, var)?;
    Ok(u.gcd(&u.derivative()).degree() == Some(0))
}

/// One-sided certificate that `f` is squarefree, avoiding the multivariate
/// PRS. For each occurring variable the others are pinned at small points
/// that keep the leading coefficient alive; a repeated factor necessarily
/// involves some variable and its square survives that variable's
/// specialization, so constant univariate gcds across all variables prove
/// squarefreeness. A nonconstant gcd proves nothing (the point may be
/// unlucky), so after a few failed points the answer is `None` and the
/// caller falls back to the exact gcd.
fn certified_squarefree(f: &Polynomial) -> Result<Option<bool>> {
    let occurring: Vec<usize> = (0..f.num_vars()).filter(|&v| f.var_occurs(v)).collect();
    if let [var] = occurring[..] {
        return Ok(Some(univariate_squarefree(f, var)?));
    }
    'vars: for &var in &occurring {
        let dv = f.degree_in(var).expect("variable occurs");
        for trial in 0..4usize {
            let images: Vec<Polynomial> = (0..f.num_vars())
                .map(|u| {
                    if u == var {
                        Polynomial::variable(f.vars(), u)
                    } else {
                        let pt = SAMPLE_POINTS[(u + trial) % SAMPLE_POINTS.len()];
                        Ok(Polynomial::constant(f.vars(), ExactScalar::from_int(pt)))
                    }
                })
                .collect::<Result<_>>()?;
            let spec = f.substitute(&images)?;
            if spec.degree_in(var) != Some(dv) {
                // Leading coefficient vanished; divisors of f could have
                // dropped out of sight with it. Try another point.
                continue;
            }
            if univariate_squarefree(&spec, var)? {
                continue 'vars;
            }
        }
        return Ok(None);
    }
    Ok(Some(true))
}

pub fn is_squarefree(f: &Polynomial) -> Result<bool> {
    if f.is_zero() {
        return Ok(false);
    }
    if f.is_constant() {
        return Ok(true);
    }
    if let Some(answer) = certified_squarefree(f)? {
        return Ok(answer);
    }
    Ok(derivative_gcd(f)?.is_constant())
}
