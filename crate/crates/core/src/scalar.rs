//! Numeric abstraction shared by the floating-point and interval evaluators,
//! so each closed-form expression is written exactly once.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num::rational::Rational64;

use crate::interval::Interval;

pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn ratio(num: i64, den: i64) -> Self;
    fn sqrt(self) -> Self;
    fn abs(self) -> Self;

    fn int(n: i64) -> Self {
        Self::ratio(n, 1)
    }

    fn rational(q: Rational64) -> Self {
        Self::ratio(*q.numer(), *q.denom())
    }

    fn sqr(self) -> Self {
        self * self
    }

    /// `self^(3/2)` for nonnegative `self`.
    fn pow_three_halves(self) -> Self {
        self * self.sqrt()
    }
}

impl Scalar for f64 {
    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
}

impl Scalar for Interval {
    fn ratio(num: i64, den: i64) -> Self {
        Interval::ratio(num, den)
    }
    fn sqrt(self) -> Self {
        Interval::sqrt(self)
    }
    fn abs(self) -> Self {
        Interval::abs(self)
    }
    fn sqr(self) -> Self {
        Interval::sqr(self)
    }
}
