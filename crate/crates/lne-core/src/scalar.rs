//! Exact scalars: the field Q(i) of Gaussian rationals, plus the Gaussian
//! integers Z\[i\] used for content computations in the primitive PRS.
//!
//! `ExactScalar` keeps real and imaginary parts as arbitrary-precision
//! rationals. `num_rational::BigRational` already maintains lowest terms with
//! a positive denominator, so the representation is canonical and `==` is
//! mathematical equality.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An element of Q(i), stored as `re + im*i` with exact rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExactScalar {
    re: BigRational,
    im: BigRational,
}

impl ExactScalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ExactScalar { re, im }
    }

    pub fn zero() -> Self {
        ExactScalar::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        ExactScalar::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        ExactScalar::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        ExactScalar::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        ExactScalar::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn from_real(re: BigRational) -> Self {
        ExactScalar::new(re, BigRational::zero())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        ExactScalar::new(self.re.clone(), -self.im.clone())
    }

    /// `re^2 + im^2`, an exact nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::domain("division by zero scalar"));
        }
        let n = self.norm_sqr();
        Ok(ExactScalar::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let mut acc = ExactScalar::one();
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Approximate value as a complex pair of doubles (used only to seed
    /// numeric iterations; all decisions stay exact or certified).
    pub fn to_f64_pair(&self) -> (f64, f64) {
        (rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    /// Total order used for deterministic tie-breaking: lexicographic on
    /// (re, im). Not a ring order, just a stable sort key.
    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }

    /// Canonical `a+b*i` text; see the crate-level grammar notes. The output
    /// re-parses to the same scalar.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        if self.im.is_zero() {
            return render_rat(&self.re);
        }
        let abs_im = self.im.abs();
        let abs_im_part = if abs_im.is_one() {
            "i".to_string()
        } else {
            format!("{}*i", render_rat(&abs_im))
        };
        let sign = if self.im.is_negative() { "-" } else { "+" };
        if self.re.is_zero() {
            return if self.im.is_negative() {
                format!("-{abs_im_part}")
            } else {
                abs_im_part
            };
        }
        format!("{}{sign}{abs_im_part}", render_rat(&self.re))
    }
}

pub fn render_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Rational to nearest double, safe for the huge numerators that exact
/// eliminations produce (falls back through a scaled quotient).
pub fn rat_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Scale down by a common power of two until both parts fit.
    let shift = (r.numer().bits().max(r.denom().bits()) as i64 - 900).max(0) as u64;
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}
forward_binop!(Add, add);

impl Sub<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}
forward_binop!(Sub, sub);

impl Mul<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}
forward_binop!(Mul, mul);

impl Div<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        let inv = rhs.inv().expect("scalar division by zero");
        self * &inv
    }
}
forward_binop!(Div, div);

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

/// A Gaussian integer. Only what the primitive PRS needs: ring ops, rounded
/// division, Euclidean gcd, and a canonical associate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaussInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussInt {
    pub fn new(re: BigInt, im: BigInt) -> Self {
        GaussInt { re, im }
    }

    pub fn zero() -> Self {
        GaussInt::new(BigInt::zero(), BigInt::zero())
    }

    pub fn one() -> Self {
        GaussInt::new(BigInt::one(), BigInt::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        GaussInt::new(self.re.clone(), -self.im.clone())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        GaussInt::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        GaussInt::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }

    fn mul_i(&self) -> Self {
        GaussInt::new(-self.im.clone(), self.re.clone())
    }

    /// Nearest-integer division: the remainder `a - q*b` has norm at most
    /// half of `N(b)`, which is what makes the Euclidean gcd terminate.
    pub fn div_round(&self, b: &Self) -> Self {
        let n = b.norm();
        let t = self.mul(&b.conj());
        GaussInt::new(round_div(&t.re, &n), round_div(&t.im, &n))
    }

    pub fn divides_exactly(&self, a: &Self) -> Option<GaussInt> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let t = a.mul(&self.conj());
        let (qr, rr) = t.re.div_rem(&n);
        let (qi, ri) = t.im.div_rem(&n);
        if rr.is_zero() && ri.is_zero() {
            Some(GaussInt::new(qr, qi))
        } else {
            None
        }
    }

    /// Euclidean gcd, returned as the canonical associate (re > 0, im >= 0;
    /// zero for gcd(0,0)).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let q = a.div_round(&b);
            let r = a.sub(&q.mul(&b));
            a = b;
            b = r;
        }
        a.canonical_associate()
    }

    /// Multiply by the unit that lands in the quadrant re > 0, im >= 0.
    /// Every nonzero Gaussian integer has exactly one associate there.
    pub fn canonical_associate(&self) -> Self {
        if self.is_zero() {
            return GaussInt::zero();
        }
        let mut g = self.clone();
        for _ in 0..4 {
            if g.re.is_positive() && !g.im.is_negative() {
                return g;
            }
            g = g.mul_i();
        }
        unreachable!("unit rotation must reach the canonical quadrant");
    }

    pub fn to_scalar(&self) -> ExactScalar {
        ExactScalar::new(
            BigRational::from_integer(self.re.clone()),
            BigRational::from_integer(self.im.clone()),
        )
    }
}

/// Round `a / b` to the nearest integer (ties toward +infinity); `b` nonzero.
pub fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (a, b) = if b.is_negative() {
        (-a.clone(), -b.clone())
    } else {
        (a.clone(), b.clone())
    };
    let two = BigInt::from(2);
    (&a * &two + &b).div_floor(&(&b * &two))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn sc(re: i64, im: i64) -> ExactScalar {
        ExactScalar::new(q(re, 1), q(im, 1))
    }

    #[test]
    fn field_ops() {
        let a = sc(1, 2);
        let b = sc(3, -1);
        assert_eq!(&a * &b, sc(5, 5));
        assert_eq!(&a + &b, sc(4, 1));
        let quot = &(&a * &b) / &b;
        assert_eq!(quot, a);
        assert_eq!(a.conj(), sc(1, -2));
        assert_eq!(sc(0, 1).pow(2).unwrap(), sc(-1, 0));
    }

    #[test]
    fn inverse_of_i() {
        let inv = ExactScalar::i().inv().unwrap();
        assert_eq!(inv, sc(0, -1));
    }

    #[test]
    fn rendering_round_shapes() {
        assert_eq!(sc(0, 0).render(), "0");
        assert_eq!(sc(-3, 0).render(), "-3");
        assert_eq!(ExactScalar::new(q(1, 2), q(0, 1)).render(), "1/2");
        assert_eq!(sc(0, 1).render(), "i");
        assert_eq!(sc(0, -1).render(), "-i");
        assert_eq!(sc(0, 2).render(), "2*i");
        assert_eq!(sc(1, 1).render(), "1+i");
        assert_eq!(sc(1, -2).render(), "1-2*i");
        assert_eq!(ExactScalar::new(q(1, 2), q(-3, 4)).render(), "1/2-3/4*i");
    }

    #[test]
    fn gauss_gcd_basics() {
        let g = GaussInt::new(BigInt::from(2), BigInt::zero());
        let h = GaussInt::new(BigInt::from(1), BigInt::from(1));
        // 2 = -i * (1+i)^2, so gcd(2, 1+i) is an associate of 1+i.
        let d = g.gcd(&h);
        assert_eq!(d, GaussInt::new(BigInt::from(1), BigInt::from(1)));
        // Coprime pair.
        let d2 = GaussInt::new(BigInt::from(3), BigInt::zero())
            .gcd(&GaussInt::new(BigInt::from(5), BigInt::zero()));
        assert_eq!(d2, GaussInt::one());
    }

    #[test]
    fn canonical_associate_quadrant() {
        for (re, im) in [(0, 5), (-4, 0), (0, -7), (-2, -3)] {
            let g = GaussInt::new(BigInt::from(re), BigInt::from(im)).canonical_associate();
            assert!(g.re.is_positive() && !g.im.is_negative(), "{:?}", g);
        }
    }

    #[test]
    fn round_div_ties_and_signs() {
        let r = |a: i64, b: i64| round_div(&BigInt::from(a), &BigInt::from(b));
        assert_eq!(r(7, 2), BigInt::from(4));
        assert_eq!(r(-7, 2), BigInt::from(-3));
        assert_eq!(r(7, -2), BigInt::from(-3));
        assert_eq!(r(6, 3), BigInt::from(2));
    }
}
