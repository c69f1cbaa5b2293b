//! Complex ball arithmetic: disks `|z - mid| <= rad` with dyadic midpoints.
//!
//! Every operation returns a ball that contains the exact image of every
//! point of the input balls; midpoint rounding is folded into the radius.
//! Containment of exact Gaussian rationals is decidable without rounding
//! because dyadics are rationals, so the certification predicates
//! (`contains_zero`, `is_nonzero`, `is_disjoint`) are exact comparisons of
//! squared magnitudes.
//!
//! Operations that can fail at a given working precision (division by a ball
//! that touches zero, root extraction too close to zero) report
//! [`Error::Precision`] with a suggested retry precision.

use num_complex::Complex64;
use num_rational::BigRational;

use crate::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};
use crate::scalar::ExactScalar;

#[derive(Clone, PartialEq, Debug)]
pub struct CBall {
    re: Dyadic,
    im: Dyadic,
    rad: Dyadic,
}

fn ulp_bound(d: &Dyadic, prec: u32) -> Dyadic {
    if d.is_zero() {
        return Dyadic::zero();
    }
    let top = d.bits() as i64 + d.exponent();
    Dyadic::power_of_two(top - prec as i64 + 1)
}

impl CBall {
    pub fn new(re: Dyadic, im: Dyadic, rad: Dyadic) -> Self {
        debug_assert!(!rad.is_negative());
        CBall { re, im, rad }
    }

    pub fn zero() -> Self {
        CBall::new(Dyadic::zero(), Dyadic::zero(), Dyadic::zero())
    }

    pub fn one() -> Self {
        CBall::new(Dyadic::one(), Dyadic::zero(), Dyadic::zero())
    }

    pub fn re(&self) -> &Dyadic {
        &self.re
    }

    pub fn im(&self) -> &Dyadic {
        &self.im
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn from_exact(s: &ExactScalar, prec: u32) -> Self {
        let re = Dyadic::from_rational(s.re(), prec, Round::Nearest);
        let im = Dyadic::from_rational(s.im(), prec, Round::Nearest);
        // Dyadic rationals convert without error; only genuine rounding
        // widens the ball.
        let mut err = Dyadic::zero();
        if re.to_rational() != *s.re() {
            err = err.add(&ulp_bound(&re, prec));
        }
        if im.to_rational() != *s.im() {
            err = err.add(&ulp_bound(&im, prec));
        }
        CBall::new(re, im, err)
    }

    pub fn from_f64s(re: f64, im: f64) -> Option<Self> {
        Some(CBall::new(
            Dyadic::from_f64(re)?,
            Dyadic::from_f64(im)?,
            Dyadic::zero(),
        ))
    }

    pub fn mid_complex64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn rad_f64(&self) -> f64 {
        self.rad.to_f64()
    }

    pub fn with_radius(&self, rad: Dyadic) -> Self {
        CBall::new(self.re.clone(), self.im.clone(), rad)
    }

    pub fn add_error(&self, extra: &Dyadic) -> Self {
        self.with_radius(self.rad.add(extra))
    }

    /// Squared magnitude of the midpoint, exact.
    fn mid_mag_sqr(&self) -> Dyadic {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    /// Upper bound for `|mid|`.
    pub fn mid_mag_upper(&self, prec: u32) -> Dyadic {
        self.mid_mag_sqr().sqrt(prec, Round::Up)
    }

    /// Lower bound for `|mid|`.
    pub fn mid_mag_lower(&self, prec: u32) -> Dyadic {
        self.mid_mag_sqr().sqrt(prec, Round::Down)
    }

    /// Upper bound for `|z|` over the ball.
    pub fn mag_upper(&self, prec: u32) -> Dyadic {
        self.mid_mag_upper(prec).add(&self.rad)
    }

    /// Lower bound for `|z|` over the ball (clamped at zero).
    pub fn mag_lower(&self, prec: u32) -> Dyadic {
        let lo = self.mid_mag_lower(prec).sub(&self.rad);
        if lo.is_negative() {
            Dyadic::zero()
        } else {
            lo
        }
    }

    /// Exact test: does the disk contain 0?
    pub fn contains_zero(&self) -> bool {
        let r2 = self.rad.mul(&self.rad);
        self.mid_mag_sqr().cmp_value(&r2) != std::cmp::Ordering::Greater
    }

    /// Exact test: is every point of the disk nonzero?
    pub fn is_nonzero(&self) -> bool {
        !self.contains_zero()
    }

    /// Exact test: does the disk contain the given Gaussian rational?
    pub fn contains_exact(&self, s: &ExactScalar) -> bool {
        let dre = self.re.to_rational() - s.re();
        let dim = self.im.to_rational() - s.im();
        let r = self.rad.to_rational();
        &dre * &dre + &dim * &dim <= &r * &r
    }

    /// Exact test: are the two disks disjoint? A `true` certifies the balls
    /// hold different values.
    pub fn is_disjoint(&self, other: &CBall) -> bool {
        let dre = self.re.sub(&other.re);
        let dim = self.im.sub(&other.im);
        let dist_sqr = dre.mul(&dre).add(&dim.mul(&dim));
        let rsum = self.rad.add(&other.rad);
        dist_sqr.cmp_value(&rsum.mul(&rsum)) == std::cmp::Ordering::Greater
    }

    pub fn neg(&self) -> CBall {
        CBall::new(self.re.neg(), self.im.neg(), self.rad.clone())
    }

    pub fn conj(&self) -> CBall {
        CBall::new(self.re.clone(), self.im.neg(), self.rad.clone())
    }

    pub fn add(&self, rhs: &CBall, prec: u32) -> CBall {
        let re = self.re.add(&rhs.re);
        let im = self.im.add(&rhs.im);
        let re_r = re.round(prec, Round::Nearest);
        let im_r = im.round(prec, Round::Nearest);
        let rad = self
            .rad
            .add(&rhs.rad)
            .add(&re.round_err_bound(prec))
            .add(&im.round_err_bound(prec))
            .round(prec, Round::Up);
        CBall::new(re_r, im_r, rad)
    }

    pub fn sub(&self, rhs: &CBall, prec: u32) -> CBall {
        self.add(&rhs.neg(), prec)
    }

    pub fn mul(&self, rhs: &CBall, prec: u32) -> CBall {
        // Exact complex product of midpoints, rounded afterwards.
        let re = self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im));
        let im = self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re));
        let re_r = re.round(prec, Round::Nearest);
        let im_r = im.round(prec, Round::Nearest);
        let a = self.mid_mag_upper(prec);
        let b = rhs.mid_mag_upper(prec);
        let rad = a
            .mul(&rhs.rad)
            .add(&b.mul(&self.rad))
            .add(&self.rad.mul(&rhs.rad))
            .add(&re.round_err_bound(prec))
            .add(&im.round_err_bound(prec))
            .round(prec, Round::Up);
        CBall::new(re_r, im_r, rad)
    }

    pub fn scale_exact(&self, s: &ExactScalar, prec: u32) -> CBall {
        self.mul(&CBall::from_exact(s, prec), prec)
    }

    pub fn div(&self, rhs: &CBall, prec: u32) -> Result<CBall> {
        let b_low = rhs.mid_mag_lower(prec);
        let margin = b_low.sub(&rhs.rad);
        if !margin.is_positive() {
            return Err(Error::Precision {
                message: "division by a ball touching zero".into(),
                required_precision: prec.saturating_mul(2),
            });
        }
        // Midpoint quotient: m1 * conj(m2) / |m2|^2.
        let den = rhs.mid_mag_sqr();
        let num_re = self.re.mul(&rhs.re).add(&self.im.mul(&rhs.im));
        let num_im = self.im.mul(&rhs.re).sub(&self.re.mul(&rhs.im));
        let re = num_re.div(&den, prec, Round::Nearest);
        let im = num_im.div(&den, prec, Round::Nearest);
        // |z1/z2 - m1/m2| <= (r1*|m2| + |m1|*r2) / ((|m2| - r2) * |m2|).
        let a_up = self.mid_mag_upper(prec);
        let b_up = rhs.mid_mag_upper(prec);
        let num_bound = self.rad.mul(&b_up).add(&a_up.mul(&rhs.rad));
        let den_bound = margin.mul(&b_low);
        let drift = num_bound.div(&den_bound, prec, Round::Up);
        let rad = drift
            .add(&ulp_bound(&re, prec))
            .add(&ulp_bound(&im, prec))
            .round(prec, Round::Up);
        Ok(CBall::new(re, im, rad))
    }

    pub fn inv(&self, prec: u32) -> Result<CBall> {
        CBall::one().div(self, prec)
    }

    pub fn pow(&self, k: u32, prec: u32) -> CBall {
        let mut acc = CBall::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, prec);
            }
        }
        acc
    }

    /// Principal `n`-th root. The ball must be bounded away from zero
    /// (radius at most an eighth of the midpoint magnitude), otherwise a
    /// precision retry is requested.
    pub fn nth_root(&self, n: u32, prec: u32) -> Result<CBall> {
        if n == 0 {
            return Err(Error::domain("zeroth root"));
        }
        if n == 1 {
            return Ok(self.clone());
        }
        let mag_low = self.mid_mag_lower(prec);
        if !mag_low.sub(&self.rad.mul_pow2(3)).is_positive() {
            return Err(Error::Precision {
                message: "root extraction from a ball too close to zero".into(),
                required_precision: prec.saturating_mul(2),
            });
        }
        let work = prec + 32;
        // Principal-branch seed in double precision.
        let seed = self.mid_complex64().powf(1.0 / n as f64);
        let mut w = CBall::from_f64s(seed.re, seed.im)
            .ok_or_else(|| Error::internal("non-finite root seed"))?;
        let m = self.with_radius(Dyadic::zero());
        let n_ball = CBall::from_exact(&ExactScalar::from_int(n as i64), work);
        // Newton on z^n - m, midpoint-only; accuracy doubles per step.
        let mut steps = 2u32;
        let mut reach = 40u64;
        while reach < work as u64 + 16 {
            reach *= 2;
            steps += 1;
        }
        for _ in 0..steps {
            let wp = w.pow(n - 1, work);
            let g = wp.mul(&w, work).sub(&m, work);
            let dg = n_ball.mul(&wp, work);
            let delta = g.div(&dg, work)?;
            w = w.sub(&delta, work).with_radius(Dyadic::zero());
        }
        // A posteriori certification: some root of z^n = mid lies within
        // n * |w^n - mid| / |n w^(n-1)| of w.
        let wp = w.pow(n - 1, work);
        let residual = wp.mul(&w, work).sub(&m, work).mag_upper(work);
        let deriv_low = n_ball.mul(&wp, work).mag_lower(work);
        if !deriv_low.is_positive() {
            return Err(Error::Precision {
                message: "root certification lost the derivative bound".into(),
                required_precision: prec.saturating_mul(2),
            });
        }
        let r_newton = residual
            .mul(&Dyadic::from_int(n as i64))
            .div(&deriv_low, work, Round::Up);
        // Input radius propagation: the root map has |d/dz| = |w| / (n |z|),
        // bounded on the ball by 2|w| / (n |mid|) thanks to the margin check.
        let w_up = w.mid_mag_upper(work);
        let lip = w_up
            .mul_pow2(1)
            .div(&Dyadic::from_int(n as i64).mul(&mag_low), work, Round::Up);
        let rad = r_newton
            .mul_pow2(1)
            .add(&self.rad.mul(&lip))
            .round(prec, Round::Up);
        Ok(CBall::new(
            w.re.round(prec, Round::Nearest),
            w.im.round(prec, Round::Nearest),
            rad.add(&ulp_bound(&w.re, prec))
                .add(&ulp_bound(&w.im, prec)),
        ))
    }

    /// Decimal rendering of the midpoint and radius, for reports.
    pub fn to_decimal_parts(&self, sig_digits: u32) -> (String, String, String) {
        (
            dyadic_decimal(&self.re, sig_digits),
            dyadic_decimal(&self.im, sig_digits),
            dyadic_decimal(&self.rad, sig_digits),
        )
    }
}

/// Decimal scientific notation with `sig` significant digits.
pub fn dyadic_decimal(d: &Dyadic, sig: u32) -> String {
    use num_bigint::BigInt;
    use num_traits::Signed;
    if d.is_zero() {
        return "0".into();
    }
    let r = d.to_rational();
    let negative = r.is_negative();
    let r = r.abs();
    // Decimal exponent: largest e10 with 10^e10 <= r.
    let mut e10: i64 = ((d.bits() as i64 + d.exponent()) as f64 * std::f64::consts::LOG10_2)
        .floor() as i64;
    let ten = BigRational::from_integer(BigInt::from(10));
    let pow10 = |k: i64| -> BigRational {
        let p = ten.pow(k.unsigned_abs() as i32);
        if k >= 0 {
            p
        } else {
            p.recip()
        }
    };
    while pow10(e10) > r {
        e10 -= 1;
    }
    while pow10(e10 + 1) <= r {
        e10 += 1;
    }
    // Digits: round(r * 10^(sig-1-e10)).
    let scaled = &r * pow10(sig as i64 - 1 - e10);
    let digits = crate::scalar::round_div(scaled.numer(), scaled.denom());
    let mut s = digits.to_string();
    // Rounding may carry into one extra digit (e.g. 999.6 -> 1000).
    if s.len() > sig as usize {
        s.truncate(sig as usize);
        e10 += 1;
    }
    let mantissa = if s.len() > 1 {
        format!("{}.{}", &s[..1], &s[1..])
    } else {
        s
    };
    let sign = if negative { "-" } else { "" };
    if e10 == 0 {
        format!("{sign}{mantissa}")
    } else {
        format!("{sign}{mantissa}e{e10}")
    }
}

/// A coefficient that is either exactly known or enclosed in a ball.
#[derive(Clone, PartialEq, Debug)]
pub enum NumValue {
    Exact(ExactScalar),
    Ball(CBall),
}

impl NumValue {
    pub fn zero() -> Self {
        NumValue::Exact(ExactScalar::zero())
    }

    pub fn as_ball(&self, prec: u32) -> CBall {
        match self {
            NumValue::Exact(s) => CBall::from_exact(s, prec),
            NumValue::Ball(b) => b.clone(),
        }
    }

    pub fn as_exact(&self) -> Option<&ExactScalar> {
        match self {
            NumValue::Exact(s) => Some(s),
            NumValue::Ball(_) => None,
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self, NumValue::Exact(s) if s.is_zero())
    }

    /// Certified nonzero: exactly nonzero, or a ball excluding zero.
    pub fn is_nonzero(&self) -> bool {
        match self {
            NumValue::Exact(s) => !s.is_zero(),
            NumValue::Ball(b) => b.is_nonzero(),
        }
    }

    pub fn mul(&self, rhs: &NumValue, prec: u32) -> NumValue {
        match (self, rhs) {
            (NumValue::Exact(a), NumValue::Exact(b)) => NumValue::Exact(a * b),
            _ => NumValue::Ball(self.as_ball(prec).mul(&rhs.as_ball(prec), prec)),
        }
    }

    pub fn add(&self, rhs: &NumValue, prec: u32) -> NumValue {
        match (self, rhs) {
            (NumValue::Exact(a), NumValue::Exact(b)) => NumValue::Exact(a + b),
            _ => NumValue::Ball(self.as_ball(prec).add(&rhs.as_ball(prec), prec)),
        }
    }

    pub fn neg(&self) -> NumValue {
        match self {
            NumValue::Exact(s) => NumValue::Exact(-s),
            NumValue::Ball(b) => NumValue::Ball(b.neg()),
        }
    }

    pub fn sub(&self, rhs: &NumValue, prec: u32) -> NumValue {
        self.add(&rhs.neg(), prec)
    }

    pub fn div(&self, rhs: &NumValue, prec: u32) -> Result<NumValue> {
        match (self, rhs) {
            (NumValue::Exact(a), NumValue::Exact(b)) => Ok(NumValue::Exact(a * &b.inv()?)),
            _ => Ok(NumValue::Ball(
                self.as_ball(prec).div(&rhs.as_ball(prec), prec)?,
            )),
        }
    }

    pub fn pow(&self, k: u32, prec: u32) -> NumValue {
        match self {
            NumValue::Exact(s) => {
                NumValue::Exact(s.pow(k as i64).expect("nonnegative power is total"))
            }
            NumValue::Ball(b) => NumValue::Ball(b.pow(k, prec)),
        }
    }

    /// Principal `n`-th root; exact only in the trivial cases (n = 1, or the
    /// value is 0 or 1), otherwise a certified ball.
    pub fn nth_root(&self, n: u32, prec: u32) -> Result<NumValue> {
        if n == 1 {
            return Ok(self.clone());
        }
        if let NumValue::Exact(s) = self {
            if s.is_zero() || s.is_one() {
                return Ok(self.clone());
            }
        }
        Ok(NumValue::Ball(self.as_ball(prec).nth_root(n, prec)?))
    }

    pub fn to_complex64(&self) -> Complex64 {
        match self {
            NumValue::Exact(s) => {
                let (re, im) = s.to_f64_pair();
                Complex64::new(re, im)
            }
            NumValue::Ball(b) => b.mid_complex64(),
        }
    }

    /// Certified distinctness of two values; `false` means "could not tell",
    /// not "equal".
    pub fn certified_distinct(&self, rhs: &NumValue, prec: u32) -> bool {
        match (self, rhs) {
            (NumValue::Exact(a), NumValue::Exact(b)) => a != b,
            _ => self.as_ball(prec).is_disjoint(&rhs.as_ball(prec)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 64;

    fn exact(re: i64, im: i64) -> ExactScalar {
        ExactScalar::new(
            BigRational::from_integer(re.into()),
            BigRational::from_integer(im.into()),
        )
    }

    fn ball(re: f64, im: f64, rad: f64) -> CBall {
        CBall::new(
            Dyadic::from_f64(re).unwrap(),
            Dyadic::from_f64(im).unwrap(),
            Dyadic::from_f64(rad).unwrap(),
        )
    }

    #[test]
    fn arithmetic_contains_exact_images() {
        let cases = [
            (exact(3, -2), exact(1, 5)),
            (exact(0, 1), exact(0, 1)),
            (exact(-7, 0), exact(2, 3)),
        ];
        for (a, b) in cases {
            let ba = CBall::from_exact(&a, P);
            let bb = CBall::from_exact(&b, P);
            assert!(ba.add(&bb, P).contains_exact(&(&a + &b)));
            assert!(ba.sub(&bb, P).contains_exact(&(&a - &b)));
            assert!(ba.mul(&bb, P).contains_exact(&(&a * &b)));
            let q = ba.div(&bb, P).unwrap();
            assert!(q.contains_exact(&(&a / &b)));
        }
    }

    #[test]
    fn division_containment_with_fat_inputs() {
        // Wide balls still produce enclosures: test corners of the input.
        let a = ball(1.0, 1.0, 0.125);
        let b = ball(2.0, -1.0, 0.0625);
        let q = a.div(&b, P).unwrap();
        for (da, db) in [(0.125, 0.0), (-0.125, 0.0625), (0.0, -0.0625)] {
            let za = Complex64::new(1.0 + da, 1.0);
            let zb = Complex64::new(2.0 + db, -1.0);
            let z = za / zb;
            let dist = (q.mid_complex64() - z).norm();
            assert!(dist <= q.rad_f64() * (1.0 + 1e-12), "{dist} vs {}", q.rad_f64());
        }
    }

    #[test]
    fn division_by_zero_ball_requests_precision() {
        let a = ball(1.0, 0.0, 0.0);
        let b = ball(0.001, 0.0, 0.01);
        match a.div(&b, P) {
            Err(Error::Precision { .. }) => {}
            other => panic!("expected precision error, got {other:?}"),
        }
    }

    #[test]
    fn zero_tests_are_exact() {
        assert!(ball(0.0, 0.0, 0.0).contains_zero());
        assert!(ball(3.0, 4.0, 5.0).contains_zero()); // |3+4i| = 5 exactly
        assert!(!ball(3.0, 4.0, 4.9990234375).contains_zero());
        assert!(ball(3.0, 4.0, 4.9990234375).is_nonzero());
    }

    #[test]
    fn disjointness_is_certified() {
        let a = ball(0.0, 0.0, 1.0);
        let b = ball(2.5, 0.0, 1.0);
        assert!(a.is_disjoint(&b));
        let c = ball(1.5, 0.0, 1.0);
        assert!(!a.is_disjoint(&c));
    }

    #[test]
    fn nth_root_of_cube() {
        let eight = CBall::from_exact(&exact(8, 0), P);
        let r = eight.nth_root(3, P).unwrap();
        assert!(r.contains_exact(&exact(2, 0)));
        assert!(r.rad_f64() < 1e-15);
    }

    #[test]
    fn nth_root_principal_branch() {
        // Square root of -4 is 2i on the principal branch.
        let m4 = CBall::from_exact(&exact(-4, 0), P);
        let r = m4.nth_root(2, P).unwrap();
        assert!(r.contains_exact(&exact(0, 2)));
        // Fourth root of 16: principal is 2, not -2 or ±2i.
        let s16 = CBall::from_exact(&exact(16, 0), P);
        let r = s16.nth_root(4, P).unwrap();
        assert!(r.contains_exact(&exact(2, 0)));
    }

    #[test]
    fn nth_root_propagates_input_radius() {
        // sqrt over the disk |z - 4| <= 1/16: true roots spread about 1/64.
        let four = ball(4.0, 0.0, 0.0625);
        let r = four.nth_root(2, P).unwrap();
        for z in [4.0625f64, 3.9375] {
            let root = z.sqrt();
            let dist = (r.mid_complex64() - Complex64::new(root, 0.0)).norm();
            assert!(dist <= r.rad_f64());
        }
    }

    #[test]
    fn nth_root_near_zero_requests_precision() {
        let b = ball(1e-3, 0.0, 5e-4);
        assert!(matches!(
            b.nth_root(2, P),
            Err(Error::Precision { .. })
        ));
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let a = CBall::from_exact(&exact(1, 1), P);
        let p3 = a.pow(3, P);
        // (1+i)^3 = -2 + 2i.
        assert!(p3.contains_exact(&exact(-2, 2)));
        assert!(a.pow(0, P).contains_exact(&exact(1, 0)));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(dyadic_decimal(&Dyadic::from_int(0), 10), "0");
        assert_eq!(dyadic_decimal(&Dyadic::from_int(1), 4), "1.000");
        assert_eq!(dyadic_decimal(&Dyadic::from_int(-12), 3), "-1.20e1");
        let half = Dyadic::new(1.into(), -1);
        assert_eq!(dyadic_decimal(&half, 3), "5.00e-1");
        let kb = Dyadic::from_int(1024);
        assert_eq!(dyadic_decimal(&kb, 4), "1.024e3");
    }

    #[test]
    fn numvalue_promotion() {
        let e = NumValue::Exact(exact(2, 0));
        let b = NumValue::Ball(ball(3.0, 0.0, 1e-20));
        assert!(matches!(e.mul(&e, P), NumValue::Exact(_)));
        assert!(matches!(e.mul(&b, P), NumValue::Ball(_)));
        assert!(e.certified_distinct(&b, P));
        let close = NumValue::Ball(ball(2.0, 0.0, 1e-20));
        assert!(!e.certified_distinct(&close, P));
    }
}
