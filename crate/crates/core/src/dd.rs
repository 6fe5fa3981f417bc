//! Double-double floating point: an unevaluated sum `hi + lo` of two f64
//! values with `|lo| ≤ ulp(hi)/2`, giving about 106 bits of significand.
//!
//! Only the operations the covariance pipeline needs are provided:
//! field arithmetic, `sqrt` and `exp`. All of them are built on the
//! error-free transformations `two_sum` and `two_prod` (the latter via FMA).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, Default)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

const LN2: DoubleDouble = DoubleDouble {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const fn new(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    fn renormalize(hi: f64, lo: f64) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Self { hi, lo }
    }

    #[inline]
    fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        Self::renormalize(p, e + self.lo * b)
    }

    #[inline]
    fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let r = self - DoubleDouble::from(b).mul_f64(q1);
        let q2 = r.hi / b;
        let r = r - DoubleDouble::from(b).mul_f64(q2);
        let q3 = r.hi / b;
        Self::renormalize(q1, q2) + DoubleDouble::from(q3)
    }

    /// Exact scaling by `2^k`.
    fn ldexp(self, k: i32) -> Self {
        let half = k / 2;
        let a = 2f64.powi(half);
        let b = 2f64.powi(k - half);
        Self {
            hi: self.hi * a * b,
            lo: self.lo * a * b,
        }
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }
}

impl PartialEq for DoubleDouble {
    fn eq(&self, other: &Self) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            ord => Some(ord),
        }
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == 0.0 {
            write!(f, "{}", self.hi)
        } else {
            write!(f, "{} {:+e}", self.hi, self.lo)
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        Self::renormalize(s, e + f)
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    #[inline]
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        Self::renormalize(p, e + (self.hi * b.lo + self.lo * b.hi))
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        Self::renormalize(q1, q2) + DoubleDouble::from(q3)
    }
}

macro_rules! assign_op {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr for DoubleDouble {
            #[inline]
            fn $method(&mut self, rhs: Self) {
                *self = *self $op rhs;
            }
        }
    };
}

assign_op!(AddAssign, add_assign, +);
assign_op!(SubAssign, sub_assign, -);
assign_op!(MulAssign, mul_assign, *);
assign_op!(DivAssign, div_assign, /);

impl Zero for DoubleDouble {
    fn zero() -> Self {
        Self { hi: 0.0, lo: 0.0 }
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        Self { hi: 1.0, lo: 0.0 }
    }
}

impl Real for DoubleDouble {
    const EPSILON: f64 = 4.93e-32; // 2^-104

    fn from_f64(x: f64) -> Self {
        x.into()
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 {
                Self::zero()
            } else {
                Self::from(f64::NAN)
            };
        }
        let x = self.hi.sqrt();
        let (p, e) = two_prod(x, x);
        let r = ((self.hi - p) - e + self.lo) / (2.0 * x);
        Self::renormalize(x, r)
    }

    fn exp(self) -> Self {
        if self.hi > 709.78 {
            return Self::from(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Self::zero();
        }
        if self.hi == 0.0 && self.lo == 0.0 {
            return Self::one();
        }
        // exp(x) = 2^k exp(r), |r| ≤ ln2/2; then exp(r) = (exp(r/1024))^1024.
        let k = (self.hi / LN2.hi).round();
        let r = self - LN2.mul_f64(k);
        let s = r.ldexp(-10);

        // expm1(s) by Taylor series; |s| < 3.4e-4 so 12 terms is ample.
        let mut term = s;
        let mut sum = s;
        for n in 2..=12 {
            term = (term * s).div_f64(n as f64);
            sum += term;
            if term.hi.abs() < 1e-36 * sum.hi.abs().max(f64::MIN_POSITIVE) {
                break;
            }
        }
        // (1 + e)^2 - 1 = 2e + e^2 keeps the small part exact while squaring.
        for _ in 0..10 {
            sum = sum.mul_f64(2.0) + sum * sum;
        }
        (sum + Self::one()).ldexp(k as i32)
    }

    fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd(x: f64) -> DoubleDouble {
        DoubleDouble::from(x)
    }

    fn rel(a: DoubleDouble, b: DoubleDouble) -> f64 {
        ((a - b) / b).abs().to_f64()
    }

    #[test]
    fn euler_constant() {
        // e = 2.718281828459045235360287471352662497757...
        let e = DoubleDouble::new(std::f64::consts::E, 1.445_646_891_729_250_2e-16);
        assert!(rel(dd(1.0).exp(), e) < 1e-31);
    }

    #[test]
    fn exp_of_ln2_is_two() {
        assert!(rel(LN2.exp(), dd(2.0)) < 1e-31);
    }

    #[test]
    fn exp_is_multiplicative() {
        for &x in &[0.3, 1.7, 5.25, 12.0, 17.5, -9.0, 100.0] {
            let p = dd(x).exp() * dd(-x).exp();
            assert!((p - dd(1.0)).abs().to_f64() < 1e-30, "x = {x}");
            let q = dd(x / 2.0).exp() * dd(x / 2.0).exp();
            assert!(rel(q, dd(x).exp()) < 1e-30, "x = {x}");
        }
    }

    #[test]
    fn exp_agrees_with_f64() {
        for i in -40..=40 {
            let x = i as f64 * 0.37;
            assert!((dd(x).exp().to_f64() - x.exp()).abs() <= 2.0 * f64::EPSILON * x.exp());
        }
    }

    #[test]
    fn sqrt_squares_back() {
        for &x in &[2.0, 3.0, 0.5, 1e-12, 7.389, 1e20] {
            let s = dd(x).sqrt();
            assert!(rel(s * s, dd(x)) < 1e-31, "x = {x}");
        }
        assert_eq!(dd(0.0).sqrt(), DoubleDouble::zero());
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = dd(1.0) / dd(3.0);
        assert!(rel(a * dd(3.0), dd(1.0)) < 1e-31);
        let third = DoubleDouble::new(1.0 / 3.0, 1.850_371_707_708_594e-17);
        assert!(rel(a, third) < 1e-31);
    }

    #[test]
    fn carries_digits_f64_loses() {
        let big = dd(1e16);
        let x = (big + dd(1.0)) - big;
        assert_eq!(x.to_f64(), 1.0);
        assert!(dd(1.0) + dd(1e-20) > dd(1.0));
    }
}
