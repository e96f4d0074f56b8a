use std::fmt;

use num::{BigRational, Signed, Zero};

/// `a t^2 + b t + c` on the closed interval `[lo, hi]`, exact.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticOnInterval {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub lo: BigRational,
    pub hi: BigRational,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

impl QuadraticOnInterval {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "empty interval");
        QuadraticOnInterval { a, b, c, lo, hi }
    }

    /// Integer coefficients on `[0, 1]`.
    pub fn unit(a: i64, b: i64, c: i64) -> Self {
        Self::new(q(a), q(b), q(c), q(0), q(1))
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        (&self.a * t + &self.b) * t + &self.c
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        use num::ToPrimitive;
        let (a, b, c) = (self.a.to_f64().unwrap(), self.b.to_f64().unwrap(), self.c.to_f64().unwrap());
        (a * t + b) * t + c
    }
}

impl fmt::Display for QuadraticOnInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}t^2 + {}t + {} on [{}, {}]", self.a, self.b, self.c, self.lo, self.hi)
    }
}

/// Exact minimum over the closed interval: the vertex when it is interior
/// and the parabola opens upward, otherwise the smaller endpoint (the lower
/// endpoint on ties).
pub fn quad_min(quad: &QuadraticOnInterval) -> (BigRational, BigRational) {
    let lo_val = quad.eval(&quad.lo);
    let hi_val = quad.eval(&quad.hi);
    let mut best = if hi_val < lo_val { (quad.hi.clone(), hi_val) } else { (quad.lo.clone(), lo_val) };
    if quad.a.is_positive() {
        let vertex = -&quad.b / (q(2) * &quad.a);
        if vertex > quad.lo && vertex < quad.hi {
            let val = quad.eval(&vertex);
            if val < best.1 {
                best = (vertex, val);
            }
        }
    }
    debug_assert!(!quad.a.is_zero() || best.0 == quad.lo || best.0 == quad.hi);
    best
}
