//! Closed floating-point intervals with outward rounding.
//!
//! Every arithmetic result is computed in round-to-nearest and then widened
//! by one ulp in each direction, which encloses the exact result for the
//! correctly rounded IEEE operations (`+ - * / sqrt`). Library transcendental
//! functions (`cos`, `sin`) are widened by [`LIBM_ULPS`] ulps.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Ulp widening applied to libm results, which are not correctly rounded.
pub const LIBM_ULPS: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn down(x: f64) -> f64 {
    if x.is_nan() {
        f64::NEG_INFINITY
    } else {
        x.next_down()
    }
}

fn up(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x.next_up()
    }
}

fn down_n(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = down(x);
    }
    x
}

fn up_n(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = up(x);
    }
    x
}

impl Interval {
    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// Degenerate interval; exact because `x` is already a float.
    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Enclosure of the rational `num / den`.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let n = num as f64;
        let d = den as f64;
        // i64 -> f64 is exact for |x| < 2^53, which covers every coefficient we build.
        debug_assert!(num.unsigned_abs() < (1 << 53) && den.unsigned_abs() < (1 << 53));
        let q = n / d;
        // fma gives the exact residual of the rounded quotient
        if q.mul_add(d, -n) == 0.0 {
            Interval::point(q)
        } else {
            Interval::new(down(q), up(q))
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn hull(self, other: Interval) -> Interval {
        Interval::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn sqr(self) -> Interval {
        let a = self.abs();
        Interval::new(down(a.lo * a.lo).max(0.0), up(a.hi * a.hi))
    }

    pub fn abs(self) -> Interval {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            Interval::new(-self.hi, -self.lo)
        } else {
            Interval::new(0.0, (-self.lo).max(self.hi))
        }
    }

    /// Square root on the part of the interval inside `[0, inf)`.
    pub fn sqrt(self) -> Interval {
        let lo = if self.lo <= 0.0 { 0.0 } else { down(self.lo.sqrt()).max(0.0) };
        let hi = if self.hi <= 0.0 { 0.0 } else { up(self.hi.sqrt()) };
        Interval::new(lo, hi)
    }

    pub fn powi(self, n: u32) -> Interval {
        let mut acc = Interval::point(1.0);
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }

    pub fn min(self, other: Interval) -> Interval {
        Interval::new(self.lo.min(other.lo), self.hi.min(other.hi))
    }

    /// Cosine of an interval contained in `[0, pi/2]` (where cos is decreasing).
    pub fn cos_quarter(self) -> Interval {
        debug_assert!(self.lo >= 0.0 && self.hi <= std::f64::consts::FRAC_PI_2 + 1e-12);
        let lo = down_n(self.hi.cos(), LIBM_ULPS).max(0.0);
        let hi = up_n(self.lo.cos(), LIBM_ULPS).min(1.0);
        Interval::new(lo, hi)
    }

    /// Sine of an interval contained in `[0, pi/2]` (where sin is increasing).
    pub fn sin_quarter(self) -> Interval {
        debug_assert!(self.lo >= 0.0 && self.hi <= std::f64::consts::FRAC_PI_2 + 1e-12);
        let lo = down_n(self.lo.sin(), LIBM_ULPS).max(0.0);
        let hi = up_n(self.hi.sin(), LIBM_ULPS).min(1.0);
        Interval::new(lo, hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval::new(down(self.lo + rhs.lo), up(self.hi + rhs.hi))
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval::new(down(self.lo - rhs.hi), up(self.hi - rhs.lo))
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let p = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        // 0 * inf is the only NaN source; it only arises for unbounded operands.
        if p.iter().any(|x| x.is_nan()) {
            return Interval::ENTIRE;
        }
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(down(lo), up(hi))
    }
}

impl Div for Interval {
    type Output = Interval;
    fn div(self, rhs: Interval) -> Interval {
        if rhs.contains_zero() {
            return Interval::ENTIRE;
        }
        let q = [
            self.lo / rhs.lo,
            self.lo / rhs.hi,
            self.hi / rhs.lo,
            self.hi / rhs.hi,
        ];
        if q.iter().any(|x| x.is_nan()) {
            return Interval::ENTIRE;
        }
        let lo = q.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(down(lo), up(hi))
    }
}
