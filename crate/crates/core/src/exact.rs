//! Exact numbers of the form `q * sqrt(r)` with `q` rational and `r` a
//! squarefree positive integer.
//!
//! Every constant in the inequality chains is a product or quotient of such
//! numbers, so this closed class suffices and comparisons stay exact.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::interval::Interval;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Surd {
    coef: BigRational,
    rad: BigInt,
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// Splits a positive integer into `s^2 * r` with `r` squarefree.
fn square_split(n: &BigInt) -> (BigInt, BigInt) {
    assert!(n.is_positive(), "radicand must be positive");
    let mut rest = n.clone();
    let mut square = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let pp = &p * &p;
        while (&rest % &pp).is_zero() {
            rest /= &pp;
            square *= &p;
        }
        p += 1;
    }
    (square, rest)
}

impl Surd {
    pub fn from_rational(q: BigRational) -> Self {
        Surd { coef: q, rad: BigInt::one() }
    }

    pub fn int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(big(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(big(n), big(d)))
    }

    /// `sqrt(q)` for a nonnegative rational `q`.
    pub fn sqrt_of(q: &BigRational) -> Self {
        assert!(!q.is_negative(), "square root of a negative rational");
        if q.is_zero() {
            return Self::int(0);
        }
        // sqrt(n/d) = sqrt(n d) / d
        let nd = q.numer() * q.denom();
        let (s, r) = square_split(&nd);
        Surd { coef: BigRational::new(s, q.denom().clone()), rad: r }
    }

    pub fn sqrt_int(n: i64) -> Self {
        Self::sqrt_of(&BigRational::from_integer(big(n)))
    }

    /// `q^(3/2)` for a nonnegative rational `q`.
    pub fn pow_three_halves(q: &BigRational) -> Self {
        Self::from_rational(q.clone()) * Self::sqrt_of(q)
    }

    pub fn coef(&self) -> &BigRational {
        &self.coef
    }

    pub fn radicand(&self) -> &BigInt {
        &self.rad
    }

    pub fn is_rational(&self) -> bool {
        self.rad.is_one() || self.coef.is_zero()
    }

    pub fn signum(&self) -> i32 {
        if self.coef.is_zero() {
            0
        } else if self.coef.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn recip(&self) -> Self {
        assert!(!self.coef.is_zero(), "reciprocal of zero");
        // 1/(q sqrt r) = sqrt(r) / (q r)
        Surd { coef: (self.coef.clone() * BigRational::from_integer(self.rad.clone())).recip(), rad: self.rad.clone() }
    }

    pub fn powi(&self, n: u32) -> Self {
        (0..n).fold(Surd::int(1), |acc, _| acc * self.clone())
    }

    /// `coef^2 * rad`, the exact square of the value.
    fn square_value(&self) -> BigRational {
        &self.coef * &self.coef * BigRational::from_integer(self.rad.clone())
    }

    pub fn to_f64(&self) -> f64 {
        self.coef.to_f64().unwrap() * self.rad.to_f64().unwrap().sqrt()
    }

    /// Rigorous enclosure of the value.
    pub fn to_interval(&self) -> Interval {
        let q = rational_interval(&self.coef);
        let r = rational_interval(&BigRational::from_integer(self.rad.clone()));
        q * r.sqrt()
    }
}

/// Enclosure of a rational by two floats.
pub fn rational_interval(q: &BigRational) -> Interval {
    let x = q.to_f64().unwrap();
    let lo = x.next_down();
    let hi = x.next_up();
    // Exactly representable values keep a degenerate enclosure.
    match BigRational::from_float(x) {
        Some(ref e) if e == q => Interval::point(x),
        _ => Interval::new(lo, hi),
    }
}

impl std::ops::Mul for Surd {
    type Output = Surd;
    fn mul(self, rhs: Surd) -> Surd {
        let g = self.rad.gcd(&rhs.rad);
        // sqrt(a) sqrt(b) = g sqrt((a/g)(b/g)) for squarefree a, b
        let rad = (&self.rad / &g) * (&rhs.rad / &g);
        Surd { coef: self.coef * rhs.coef * BigRational::from_integer(g), rad }
    }
}

impl std::ops::Div for Surd {
    type Output = Surd;
    fn div(self, rhs: Surd) -> Surd {
        self * rhs.recip()
    }
}

impl std::ops::Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd { coef: -self.coef, rad: self.rad }
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.signum(), other.signum());
        if a != b {
            return a.cmp(&b);
        }
        let ord = self.square_value().cmp(&other.square_value());
        if a >= 0 {
            ord
        } else {
            ord.reverse()
        }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = (self.coef.numer(), self.coef.denom());
        if d.is_one() {
            write!(f, "{n}")?;
        } else {
            write!(f, "{n}/{d}")?;
        }
        if !self.rad.is_one() && !self.coef.is_zero() {
            write!(f, "*sqrt({})", self.rad)?;
        }
        Ok(())
    }
}

impl FromStr for Surd {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("not a surd: {s:?}"));
        let (q, rad) = match s.split_once("*sqrt(") {
            Some((q, rest)) => {
                let r = rest.strip_suffix(')').ok_or_else(bad)?;
                (q, r.parse::<BigInt>().map_err(|_| bad())?)
            }
            None => (s, BigInt::one()),
        };
        let coef = match q.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.parse().map_err(|_| bad())?;
                let d: BigInt = d.parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                BigRational::new(n, d)
            }
            None => BigRational::from_integer(q.parse().map_err(|_| bad())?),
        };
        if !rad.is_positive() {
            return Err(bad());
        }
        Ok(Surd::from_rational(coef) * Surd::sqrt_of(&BigRational::from_integer(rad)))
    }
}
