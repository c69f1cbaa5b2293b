//! Resultants by the subresultant pseudo-remainder sequence.
//!
//! `resultant(f, g, var)` eliminates `var` and equals the determinant of the
//! Sylvester matrix built with the rows of `f` first. The subresultant PRS
//! keeps every division exact over the coefficient ring Q(i)[other vars],
//! which is what makes multivariate use (discriminants of slice families)
//! affordable without fractions.
//!
//! Unit tests check the PRS output against a cofactor-expansion determinant
//! of the literal Sylvester matrix, so the sign conventions are pinned by an
//! independent computation rather than by the algorithm under test.

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::ExactScalar;

/// True pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a` reduced modulo `b`
/// in `var`. The full power of `lc(b)` is kept even when degrees drop early,
/// because the subresultant divisions depend on it.
fn pseudo_rem(a: &Polynomial, b: &Polynomial, var: usize) -> Polynomial {
    let da = a.degree_in(var).expect("nonzero dividend");
    let db = b.degree_in(var).expect("nonzero divisor");
    debug_assert!(da >= db);
    let lc_b = b.coeff_of_power(var, db);
    let mut r = a.clone();
    let mut remaining = da - db + 1;
    while let Some(dr) = r.degree_in(var) {
        if r.is_zero() || dr < db {
            break;
        }
        let lc_r = r.coeff_of_power(var, dr);
        let mut shift = vec![0u32; r.num_vars()];
        shift[var] = dr - db;
        r = &(&r * &lc_b) - &(&b.mul_monomial(&shift, &ExactScalar::one()) * &lc_r);
        remaining -= 1;
    }
    if remaining > 0 {
        r = &r * &lc_b.pow(remaining);
    }
    r
}

fn content_in(f: &Polynomial, var: usize) -> Result<Polynomial> {
    let deg = f.degree_in(var).expect("content of nonzero polynomial");
    let mut acc = Polynomial::zero(f.vars());
    for k in 0..=deg {
        let c = f.coeff_of_power(var, k);
        if c.is_zero() {
            continue;
        }
        acc = super::gcd::gcd(&acc, &c)?;
        if acc.is_constant() && !acc.is_zero() {
            return Ok(Polynomial::one(f.vars()));
        }
    }
    Ok(acc)
}

/// `h^(1-delta) * g^delta`, all divisions exact.
fn update_h(h: &Polynomial, g: &Polynomial, delta: u32) -> Polynomial {
    match delta {
        0 => h.clone(),
        1 => g.clone(),
        _ => g
            .pow(delta)
            .div_exact(&h.pow(delta - 1))
            .expect("subresultant division is exact"),
    }
}

/// Resultant of `f` and `g` with respect to `var`, as a polynomial in the
/// remaining variables (same variable list, `var` absent). Zero when either
/// input is zero or the two share a factor involving `var`.
pub fn resultant(f: &Polynomial, g: &Polynomial, var: usize) -> Result<Polynomial> {
    f.ensure_same_vars(g)?;
    if var >= f.num_vars() {
        return Err(Error::structural(format!(
            "no variable with index {var} to eliminate"
        )));
    }
    if f.is_zero() || g.is_zero() {
        return Ok(Polynomial::zero(f.vars()));
    }
    let df = f.degree_in(var).unwrap();
    let dg = g.degree_in(var).unwrap();
    // Degree-zero cases: an empty block of Sylvester rows.
    if df == 0 && dg == 0 {
        return Ok(Polynomial::one(f.vars()));
    }
    if df == 0 {
        return Ok(f.pow(dg));
    }
    if dg == 0 {
        return Ok(g.pow(df));
    }

    let mut a = f.clone();
    let mut b = g.clone();
    let mut sign_neg = false;
    if df < dg {
        std::mem::swap(&mut a, &mut b);
        if df % 2 == 1 && dg % 2 == 1 {
            sign_neg = true;
        }
    }

    let cont_a = content_in(&a, var)?;
    let cont_b = content_in(&b, var)?;
    a = a.div_exact(&cont_a).expect("content divides");
    b = b.div_exact(&cont_b).expect("content divides");
    // Res(c*A, d*B) = c^(deg B) d^(deg A) Res(A, B).
    let mut t = &cont_a.pow(b.degree_in(var).unwrap()) * &cont_b.pow(a.degree_in(var).unwrap());
    if sign_neg {
        t = -t;
    }

    let one = Polynomial::one(f.vars());
    let mut gg = one.clone();
    let mut h = one.clone();
    loop {
        let da = a.degree_in(var).unwrap();
        let db = b.degree_in(var).unwrap();
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            t = -t;
        }
        let r = pseudo_rem(&a, &b, var);
        a = b;
        b = if r.is_zero() {
            Polynomial::zero(f.vars())
        } else {
            r.div_exact(&(&gg * &h.pow(delta)))
                .expect("subresultant division is exact")
        };
        let da_new = a.degree_in(var).unwrap();
        gg = a.coeff_of_power(var, da_new);
        h = update_h(&h, &gg, delta);
        match b.degree_in(var) {
            None => return Ok(Polynomial::zero(f.vars())), // b = 0: common factor
            Some(0) => {
                let d = a.degree_in(var).unwrap();
                let lc_b = b.clone(); // degree 0 in var
                let h_final = match d {
                    0 => unreachable!("a keeps positive degree in the loop"),
                    1 => lc_b,
                    _ => lc_b
                        .pow(d)
                        .div_exact(&h.pow(d - 1))
                        .expect("subresultant division is exact"),
                };
                return Ok(&t * &h_final);
            }
            Some(_) => {}
        }
    }
}

/// Squarefree part of `Res(f, df/dvar)`: vanishing locus of the discriminant
/// without multiplicities. This is the form the slicing pipeline consumes.
pub fn discriminant_locus(f: &Polynomial, var: usize) -> Result<Polynomial> {
    let df = f.partial_derivative(var)?;
    let res = resultant(f, &df, var)?;
    super::gcd::squarefree_part(&res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    fn p(text: &str, vars: &[&str]) -> Polynomial {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        parse_polynomial(text, Some(&vars)).unwrap()
    }

    /// Cofactor-expansion determinant for small polynomial matrices. Used as
    /// the independent oracle for the PRS resultant.
    fn det(m: &[Vec<Polynomial>], vars: &[String]) -> Polynomial {
        let n = m.len();
        if n == 0 {
            return Polynomial::one(vars);
        }
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = Polynomial::zero(vars);
        for (j, pivot) in m[0].iter().enumerate() {
            if pivot.is_zero() {
                continue;
            }
            let minor: Vec<Vec<Polynomial>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(k, _)| *k != j)
                        .map(|(_, e)| e.clone())
                        .collect()
                })
                .collect();
            let cof = &det(&minor, vars) * pivot;
            acc = if j % 2 == 0 { &acc + &cof } else { &acc - &cof };
        }
        acc
    }

    /// Sylvester-matrix resultant with the rows of `f` first.
    fn sylvester_resultant(f: &Polynomial, g: &Polynomial, var: usize) -> Polynomial {
        let m = f.degree_in(var).unwrap() as usize;
        let n = g.degree_in(var).unwrap() as usize;
        let size = m + n;
        let zero = Polynomial::zero(f.vars());
        let mut rows = vec![vec![zero.clone(); size]; size];
        for shift in 0..n {
            for k in 0..=m {
                rows[shift][shift + k] = f.coeff_of_power(var, (m - k) as u32);
            }
        }
        for shift in 0..m {
            for k in 0..=n {
                rows[n + shift][shift + k] = g.coeff_of_power(var, (n - k) as u32);
            }
        }
        det(&rows, f.vars())
    }

    fn check_against_oracle(f_text: &str, g_text: &str, vars: &[&str], var: usize) {
        let f = p(f_text, vars);
        let g = p(g_text, vars);
        let prs = resultant(&f, &g, var).unwrap();
        let syl = sylvester_resultant(&f, &g, var);
        assert_eq!(prs, syl, "resultant mismatch for ({f_text}, {g_text})");
    }

    #[test]
    fn linear_pair_hand_value() {
        let r = resultant(&p("y - x", &["x", "y"]), &p("y + x", &["x", "y"]), 1).unwrap();
        assert_eq!(r, p("2*x", &["x", "y"]));
    }

    #[test]
    fn cusp_against_derivative_scaled() {
        let r = resultant(&p("y^2 - x^3", &["x", "y"]), &p("2*y", &["x", "y"]), 1).unwrap();
        assert_eq!(r, p("-4*x^3", &["x", "y"]));
    }

    #[test]
    fn matches_sylvester_oracle() {
        check_against_oracle("y^2 - x^3", "2*y", &["x", "y"], 1);
        check_against_oracle("y - x", "y + x", &["x", "y"], 1);
        check_against_oracle("y^3 + x*y + x^2", "y^2 - x", &["x", "y"], 1);
        check_against_oracle("y^2 + x^4", "2*y + x", &["x", "y"], 1);
        check_against_oracle("x^2*y^2 + x + 1", "y^3 - x^2", &["x", "y"], 1);
        check_against_oracle(
            "u^2 + s + t^3",
            "u^3 - s*u + t",
            &["s", "t", "u"],
            2,
        );
        check_against_oracle("(1+i)*y^2 - x", "y - i*x", &["x", "y"], 1);
    }

    #[test]
    fn swap_flips_by_degree_parity() {
        let f = p("y^3 + x*y + 1", &["x", "y"]);
        let g = p("y^2 - x", &["x", "y"]);
        let fg = resultant(&f, &g, 1).unwrap();
        let gf = resultant(&g, &f, 1).unwrap();
        // deg f * deg g = 6 even: same value.
        assert_eq!(fg, gf);
        let h = p("y - x^2", &["x", "y"]);
        let fh = resultant(&f, &h, 1).unwrap();
        let hf = resultant(&h, &f, 1).unwrap();
        // 3 * 1 odd: opposite sign.
        assert_eq!(fh, -&hf);
        assert_eq!(fh, sylvester_resultant(&f, &h, 1));
        assert_eq!(hf, sylvester_resultant(&h, &f, 1));
    }

    #[test]
    fn vanishes_exactly_on_common_factor() {
        let common = p("y - x", &["x", "y"]);
        let f = &common * &p("y + x^2", &["x", "y"]);
        let g = &common * &p("y - 1", &["x", "y"]);
        assert!(resultant(&f, &g, 1).unwrap().is_zero());
        // Coprime pair: nonzero.
        let f2 = p("y + x^2", &["x", "y"]);
        let g2 = p("y - 1", &["x", "y"]);
        assert!(!resultant(&f2, &g2, 1).unwrap().is_zero());
    }

    #[test]
    fn multiplicative_in_first_argument() {
        let a = p("y^2 + x", &["x", "y"]);
        let c = p("y + x^2", &["x", "y"]);
        let b = p("y - 2*x", &["x", "y"]);
        let lhs = resultant(&(&a * &c), &b, 1).unwrap();
        let rhs = &resultant(&a, &b, 1).unwrap() * &resultant(&c, &b, 1).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn constant_arguments() {
        let f = p("y^2 - x^3", &["x", "y"]);
        let c = p("5", &["x", "y"]);
        assert_eq!(resultant(&f, &c, 1).unwrap(), p("25", &["x", "y"]));
        assert_eq!(resultant(&c, &f, 1).unwrap(), p("25", &["x", "y"]));
        let z = Polynomial::zero(f.vars());
        assert!(resultant(&f, &z, 1).unwrap().is_zero());
    }

    #[test]
    fn slice_discriminant_hand_value() {
        // The slice family of x^2 + y^2 - z^3 along v = (1,0,0):
        // g = u^2 + s1^2 - s2^3, dg/du = 2u, Res_u = 4*(s1^2 - s2^3).
        let vars = &["u", "s1", "s2"];
        let g = p("u^2 + s1^2 - s2^3", vars);
        let dg = g.partial_derivative(0).unwrap();
        let res = resultant(&g, &dg, 0).unwrap();
        assert_eq!(res, p("4*s1^2 - 4*s2^3", vars));
        // Squarefree normalization keeps the same locus, monic in graded-lex
        // (leading term s2^3).
        let delta = discriminant_locus(&g, 0).unwrap();
        assert_eq!(delta, p("s2^3 - s1^2", vars));
    }

    #[test]
    fn discriminant_of_double_root_family_vanishes() {
        // (y - x)^2 has identically vanishing discriminant in y.
        let f = p("y^2 - 2*x*y + x^2", &["x", "y"]);
        let res = resultant(&f, &f.partial_derivative(1).unwrap(), 1).unwrap();
        assert!(res.is_zero());
    }
}
