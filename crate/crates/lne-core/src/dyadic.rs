//! Arbitrary-precision dyadic floats: `man * 2^exp` with `BigInt` mantissa.
//!
//! Addition and multiplication are exact; results are rounded on demand to a
//! working precision with an explicit mode, so interval code can direct every
//! rounding outward. Division and square root return a value within one unit
//! in the last place in the requested direction.
//!
//! Exponent gaps are handled by literal shifting, which is fine at the
//! precisions this crate uses (at most a few thousand bits).

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Round {
    Nearest,
    /// Toward +infinity.
    Up,
    /// Toward -infinity.
    Down,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        Dyadic { man, exp }.normalize()
    }

    pub fn zero() -> Self {
        Dyadic {
            man: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            man: BigInt::from(1),
            exp: 0,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic::new(BigInt::from(n), 0)
    }

    /// 2^k.
    pub fn power_of_two(k: i64) -> Self {
        Dyadic {
            man: BigInt::from(1),
            exp: k,
        }
    }

    fn normalize(mut self) -> Self {
        if self.man.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = self.man.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.man >>= tz;
            self.exp += tz as i64;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.man.is_positive()
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            man: -&self.man,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            man: self.man.abs(),
            exp: self.exp,
        }
    }

    /// Mantissa bit length (0 for zero).
    pub fn bits(&self) -> u64 {
        self.man.bits()
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    /// Exact sum.
    pub fn add(&self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.man << (self.exp - e) as u64;
        let b = &rhs.man << (rhs.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, rhs: &Dyadic) -> Dyadic {
        self.add(&rhs.neg())
    }

    /// Exact product.
    pub fn mul(&self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.man * &rhs.man, self.exp + rhs.exp)
    }

    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            man: self.man.clone(),
            exp: self.exp + k,
        }
    }

    /// Round to `prec` mantissa bits. Nearest ties go to even.
    pub fn round(&self, prec: u32, mode: Round) -> Dyadic {
        let bits = self.man.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        let (sign, mag) = (self.man.sign(), self.man.magnitude());
        let hi: BigUint = mag >> shift;
        let low: BigUint = mag - (&hi << shift);
        let grow_magnitude = match mode {
            Round::Up => sign == Sign::Plus && !low.is_zero(),
            Round::Down => sign == Sign::Minus && !low.is_zero(),
            Round::Nearest => {
                let half: BigUint = BigUint::from(1u8) << (shift - 1);
                match low.cmp(&half) {
                    std::cmp::Ordering::Greater => true,
                    std::cmp::Ordering::Less => false,
                    std::cmp::Ordering::Equal => hi.is_odd(),
                }
            }
        };
        let hi = if grow_magnitude {
            hi + BigUint::from(1u8)
        } else {
            hi
        };
        Dyadic::new(BigInt::from_biguint(sign, hi), self.exp + shift as i64)
    }

    /// Upper bound on the absolute rounding error of `round(prec, _)`: one
    /// unit in the last place of the rounded value.
    pub fn round_err_bound(&self, prec: u32) -> Dyadic {
        let bits = self.man.bits();
        if bits <= prec as u64 {
            return Dyadic::zero();
        }
        Dyadic::power_of_two(self.exp + (bits - prec as u64) as i64)
    }

    /// Quotient correct to within one ulp in the given direction, with at
    /// least `prec` significant bits.
    pub fn div(&self, rhs: &Dyadic, prec: u32, mode: Round) -> Dyadic {
        assert!(!rhs.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let na = self.man.bits();
        let nb = rhs.man.bits();
        let k = (nb + prec as u64 + 2).saturating_sub(na);
        let scaled = &self.man << k;
        let (q, r) = scaled.div_rem(&rhs.man);
        let exp = self.exp - rhs.exp - k as i64;
        let exact = r.is_zero();
        let quotient_negative = q.is_negative() || (q.is_zero() && self.man.sign() != rhs.man.sign());
        let q = match mode {
            _ if exact => q,
            Round::Up if !quotient_negative => q + 1,
            Round::Down if quotient_negative => q - 1,
            Round::Nearest => {
                // div_rem truncates toward zero; |q| grows if |2r| >= |b|.
                let big = (&r.abs() << 1) >= rhs.man.abs();
                if big {
                    if quotient_negative {
                        q - 1
                    } else {
                        q + 1
                    }
                } else {
                    q
                }
            }
            _ => q,
        };
        Dyadic::new(q, exp).round(prec, mode)
    }

    /// Square root with directed rounding; `self` must be nonnegative.
    pub fn sqrt(&self, prec: u32, mode: Round) -> Dyadic {
        assert!(!self.is_negative(), "square root of a negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let bits = self.man.bits();
        let want = 2 * (prec as u64 + 2);
        let mut k = want.saturating_sub(bits) as i64;
        if (self.exp - k) % 2 != 0 {
            k += 1;
        }
        let scaled: BigInt = &self.man << k as u64;
        let s = scaled.sqrt();
        let exact = &s * &s == scaled;
        let s = match mode {
            Round::Up if !exact => s + 1,
            _ => s,
        };
        Dyadic::new(s, (self.exp - k) / 2).round(prec, mode)
    }

    pub fn cmp_value(&self, rhs: &Dyadic) -> std::cmp::Ordering {
        self.sub(rhs).man.sign().cmp(&Sign::NoSign)
    }

    pub fn min_value(&self, rhs: &Dyadic) -> Dyadic {
        if self.cmp_value(rhs) == std::cmp::Ordering::Greater {
            rhs.clone()
        } else {
            self.clone()
        }
    }

    pub fn max_value(&self, rhs: &Dyadic) -> Dyadic {
        if self.cmp_value(rhs) == std::cmp::Ordering::Less {
            rhs.clone()
        } else {
            self.clone()
        }
    }

    pub fn from_f64(x: f64) -> Option<Dyadic> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (man, exp) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Some(Dyadic::new(BigInt::from(sign * man as i64), exp))
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits();
        let (top, dropped) = if bits > 53 {
            let shift = bits - 53;
            ((&self.man >> shift).to_string(), shift as i64)
        } else {
            (self.man.to_string(), 0)
        };
        let top: f64 = top.parse().unwrap_or(f64::NAN);
        let e = self.exp + dropped;
        if e > i32::MAX as i64 {
            return if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
        }
        if e < i32::MIN as i64 {
            return 0.0;
        }
        top * 2f64.powi(e as i32)
    }

    /// Directed conversion from an exact rational.
    pub fn from_rational(r: &BigRational, prec: u32, mode: Round) -> Dyadic {
        let num = Dyadic::new(r.numer().clone(), 0);
        let den = Dyadic::new(r.denom().clone(), 0);
        num.div(&den, prec, mode)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.man << self.exp as u64)
        } else {
            BigRational::new(self.man.clone(), BigInt::from(1) << (-self.exp) as u64)
        }
    }
}
