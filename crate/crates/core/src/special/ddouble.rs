//! Double-word ("double-double") arithmetic built from error-free
//! transformations.
//!
//! The inclusion-exclusion sums in the selection closed forms alternate in
//! sign over terms of order one while the result can be many decades
//! smaller. Carrying each term and the running sum in two words keeps the
//! result accurate to the working precision.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use crate::Scalar;

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd<T> {
    pub hi: T,
    pub lo: T,
}

#[inline]
fn two_sum<T: Scalar>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum<T: Scalar>(a: T, b: T) -> (T, T) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod<T: Scalar>(a: T, b: T) -> (T, T) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl<T: Scalar> Dd<T> {
    #[inline]
    pub fn new(x: T) -> Self {
        Self {
            hi: x,
            lo: T::zero(),
        }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(T::zero())
    }

    #[inline]
    pub fn one() -> Self {
        Self::new(T::one())
    }

    /// Exact product of two working-precision numbers.
    #[inline]
    pub fn from_prod(a: T, b: T) -> Self {
        let (hi, lo) = two_prod(a, b);
        Self { hi, lo }
    }

    #[inline]
    pub fn value(self) -> T {
        self.hi + self.lo
    }

    #[inline]
    fn renorm(hi: T, lo: T) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Self { hi, lo }
    }

    /// Multiplies by a power of two (exact barring under/overflow).
    #[inline]
    fn scale(self, factor: T) -> Self {
        Self {
            hi: self.hi * factor,
            lo: self.lo * factor,
        }
    }

    /// Division by a working-precision number.
    pub fn div_scalar(self, b: T) -> Self {
        let q1 = self.hi / b;
        let (p, e) = two_prod(q1, b);
        let (s, mut e2) = two_sum(self.hi, -p);
        e2 = e2 - e + self.lo;
        let q2 = (s + e2) / b;
        Self::renorm(q1, q2)
    }

    pub fn recip(self) -> Self {
        Self::one() / self
    }

    /// `e^x` to roughly twice the working precision.
    pub fn exp(self) -> Self {
        let ln2 = Self {
            hi: T::LN_2(),
            lo: T::ln_2_lo(),
        };
        // e^x underflows / overflows the working format beyond these
        let min_arg = T::min_positive_value().ln();
        let max_arg = T::max_value().ln();
        if self.hi < min_arg {
            return Self::zero();
        }
        if self.hi > max_arg {
            return Self::new(T::infinity());
        }
        if self.hi == T::zero() && self.lo == T::zero() {
            return Self::one();
        }
        let k = (self.hi / T::LN_2()).round();
        let r = self - ln2 * Self::new(k);
        // further reduce by 2^-9 so a short Taylor series suffices
        let inv512 = T::c(1.0 / 512.0);
        let r = r.scale(inv512);
        // expm1(r) by Horner: r (1 + r/2 (1 + r/3 (...)))
        let mut s = Self::one();
        for j in (2..=10).rev() {
            s = Self::one() + (s * r).div_scalar(T::from_count(j));
        }
        let mut m = s * r;
        // (1 + m)^2 - 1 = 2m + m^2, applied nine times
        for _ in 0..9 {
            m = m.scale(T::c(2.0)) + m * m;
        }
        let v = Self::one() + m;
        let ki = k.to_i32().unwrap_or(0);
        let half = ki / 2;
        let two = T::c(2.0);
        v.scale(two.powi(half)).scale(two.powi(ki - half))
    }
}

impl<T: Scalar> From<T> for Dd<T> {
    fn from(x: T) -> Self {
        Self::new(x)
    }
}

impl<T: Scalar> Neg for Dd<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl<T: Scalar> Add for Dd<T> {
    type Output = Self;
    #[inline]
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        Self::renorm(s, e + f)
    }
}

impl<T: Scalar> AddAssign for Dd<T> {
    #[inline]
    fn add_assign(&mut self, b: Self) {
        *self = *self + b;
    }
}

impl<T: Scalar> Sub for Dd<T> {
    type Output = Self;
    #[inline]
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl<T: Scalar> Mul for Dd<T> {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        Self::renorm(p, e)
    }
}

impl<T: Scalar> Div for Dd<T> {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b * Self::new(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Self::new(q2);
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Self { hi: q1, lo: q2 } + Self::new(q3)
    }
}
