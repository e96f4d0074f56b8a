//! Lawson cone geometry in reduced coordinates.
//!
//! A point `z = (x, y)` of `R^k x R^h` is represented by `(r_x, r_y) = (|x|, |y|)`.
//! With `u = (h-1) r_x^2` and `v = (k-1) r_y^2` the cone is `{u = v}` and the
//! region it bounds is `K = {u < v}`.

use std::f64::consts::PI;
use std::fmt;

use num::{BigRational, Signed, Zero};

use crate::error::{Error, Result};
use crate::interval::Interval;

/// Relative tolerance used to label floating points as lying on the cone.
pub const DEFAULT_REGION_TOL: f64 = 1e-14;

/// The six unordered pairs `{k, h}` covered by the certified sub-calibrations.
pub const CERTIFIED_PAIRS: [(usize, usize); 6] = [(3, 5), (2, 7), (2, 8), (2, 9), (2, 10), (2, 11)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConeParams {
    k: usize,
    h: usize,
}

impl ConeParams {
    pub fn new(k: usize, h: usize) -> Result<Self> {
        if k < 2 || h < 2 || !(4..=16).contains(&(k + h)) {
            return Err(Error::InvalidCone { k, h });
        }
        Ok(ConeParams { k, h })
    }

    /// Like [`ConeParams::new`] but rejects pairs outside the certified set.
    pub fn certified(k: usize, h: usize) -> Result<Self> {
        let cone = Self::new(k, h)?;
        if !cone.is_certified() {
            return Err(Error::UncertifiedPair { k, h });
        }
        Ok(cone)
    }

    /// Both orderings of every certified pair, `(3,5), (5,3), (2,7), (7,2), ...`.
    pub fn all_certified() -> Vec<ConeParams> {
        CERTIFIED_PAIRS
            .iter()
            .flat_map(|&(a, b)| [ConeParams { k: a, h: b }, ConeParams { k: b, h: a }])
            .collect()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn m(&self) -> usize {
        self.k + self.h
    }

    pub fn is_certified(&self) -> bool {
        let key = (self.k.min(self.h), self.k.max(self.h));
        CERTIFIED_PAIRS.contains(&key)
    }

    /// The same cone with the roles of `x` and `y` exchanged.
    pub fn swapped(&self) -> ConeParams {
        ConeParams { k: self.h, h: self.k }
    }

    /// `l` with `p(z) = l * dist(z, M)`.
    pub fn l_constant(&self) -> f64 {
        (1.0 / (self.h as f64 - 1.0) + 1.0 / (self.k as f64 - 1.0)).sqrt()
    }

    /// `(m-3)^2/4 - (m-2)`: lower bound for the radial stability spectrum on the unit ball.
    pub fn hardy_floor(&self) -> f64 {
        let m = self.m() as f64;
        (m - 3.0).powi(2) / 4.0 - (m - 2.0)
    }

    /// Area of the link `M ∩ S^{m-1}`, a product of spheres of radii
    /// `sqrt((k-1)/(m-2))` and `sqrt((h-1)/(m-2))`.
    pub fn link_area(&self) -> f64 {
        let (k, h, m) = (self.k as f64, self.h as f64, self.m() as f64);
        let a = ((k - 1.0) / (m - 2.0)).sqrt();
        let b = ((h - 1.0) / (m - 2.0)).sqrt();
        sphere_area(self.k) * a.powi(self.k as i32 - 1) * sphere_area(self.h) * b.powi(self.h as i32 - 1)
    }

    /// Unit tangent of the cone line in the `(r_x, r_y)` quarter plane.
    pub fn tangent(&self) -> [f64; 2] {
        let s = ((self.m() - 2) as f64).sqrt();
        [((self.k - 1) as f64).sqrt() / s, ((self.h - 1) as f64).sqrt() / s]
    }

    /// Outward unit normal of `K` along the cone line (pointing into `{u > v}`).
    pub fn normal(&self) -> [f64; 2] {
        let s = ((self.m() - 2) as f64).sqrt();
        [((self.h - 1) as f64).sqrt() / s, -((self.k - 1) as f64).sqrt() / s]
    }

    /// Angle of the cone line in the quarter plane, `tan(theta) = sqrt((h-1)/(k-1))`.
    pub fn cone_angle(&self) -> f64 {
        (((self.h - 1) as f64) / ((self.k - 1) as f64)).sqrt().atan()
    }
}

impl fmt::Display for ConeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.k, self.h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    InK,
    OnCone,
    InKComplement,
}

impl Region {
    pub fn classify(u: f64, v: f64, rel_tol: f64) -> Region {
        let scale = u.abs().max(v.abs());
        if (u - v).abs() <= rel_tol * scale {
            Region::OnCone
        } else if u < v {
            Region::InK
        } else {
            Region::InKComplement
        }
    }

    /// Exact labeling from rational squared radii.
    pub fn classify_exact(cone: &ConeParams, rx_sq: &BigRational, ry_sq: &BigRational) -> Region {
        let u = rx_sq * BigRational::from_integer((cone.h as i64 - 1).into());
        let v = ry_sq * BigRational::from_integer((cone.k as i64 - 1).into());
        let diff = u - v;
        if diff.is_zero() {
            Region::OnCone
        } else if diff.is_negative() {
            Region::InK
        } else {
            Region::InKComplement
        }
    }

    pub fn flipped(self) -> Region {
        match self {
            Region::InK => Region::InKComplement,
            Region::OnCone => Region::OnCone,
            Region::InKComplement => Region::InK,
        }
    }
}

/// A point in reduced coordinates together with its cone-dependent invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedPoint {
    pub r_x: f64,
    pub r_y: f64,
    pub u: f64,
    pub v: f64,
    pub region: Region,
}

impl ReducedPoint {
    pub fn new(cone: &ConeParams, r_x: f64, r_y: f64) -> Self {
        Self::with_tolerance(cone, r_x, r_y, DEFAULT_REGION_TOL)
    }

    pub fn with_tolerance(cone: &ConeParams, r_x: f64, r_y: f64, rel_tol: f64) -> Self {
        assert!(r_x >= 0.0 && r_y >= 0.0, "reduced radii must be nonnegative");
        let u = (cone.h - 1) as f64 * r_x * r_x;
        let v = (cone.k - 1) as f64 * r_y * r_y;
        ReducedPoint { r_x, r_y, u, v, region: Region::classify(u, v, rel_tol) }
    }

    pub fn norm_sq(&self) -> f64 {
        self.r_x * self.r_x + self.r_y * self.r_y
    }

    pub fn norm(&self) -> f64 {
        self.r_x.hypot(self.r_y)
    }

    pub fn is_apex(&self) -> bool {
        self.r_x == 0.0 && self.r_y == 0.0
    }

    pub fn scaled(&self, cone: &ConeParams, lambda: f64) -> Self {
        ReducedPoint::new(cone, lambda * self.r_x, lambda * self.r_y)
    }
}

/// A point of `R^k x R^h`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbientPoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl AmbientPoint {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        AmbientPoint { x, y }
    }

    pub fn check_dims(&self, cone: &ConeParams) -> Result<()> {
        if self.x.len() != cone.k {
            return Err(Error::DimensionMismatch { expected: cone.k, got: self.x.len() });
        }
        if self.y.len() != cone.h {
            return Err(Error::DimensionMismatch { expected: cone.h, got: self.y.len() });
        }
        Ok(())
    }

    /// Coordinates as one vector of length `m`, `x` first.
    pub fn flat(&self) -> Vec<f64> {
        self.x.iter().chain(self.y.iter()).copied().collect()
    }

    pub fn from_flat(cone: &ConeParams, z: &[f64]) -> Self {
        AmbientPoint { x: z[..cone.k].to_vec(), y: z[cone.k..].to_vec() }
    }
}

fn euclid(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

pub fn reduce(p: &AmbientPoint, cone: &ConeParams) -> Result<ReducedPoint> {
    p.check_dims(cone)?;
    Ok(ReducedPoint::new(cone, euclid(&p.x), euclid(&p.y)))
}

/// Euclidean distance to the cone, `|sqrt(u) - sqrt(v)| / sqrt(m-2)`.
pub fn dist_to_cone(p: &ReducedPoint, cone: &ConeParams) -> f64 {
    (p.u.sqrt() - p.v.sqrt()).abs() / ((cone.m() - 2) as f64).sqrt()
}

pub fn p_function(p: &ReducedPoint, cone: &ConeParams) -> f64 {
    (p.r_x / ((cone.k - 1) as f64).sqrt() - p.r_y / ((cone.h - 1) as f64).sqrt()).abs()
}

pub fn l_constant(cone: &ConeParams) -> f64 {
    cone.l_constant()
}

/// Volume of the unit ball in `R^n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    assert!(n >= 1);
    let j = n / 2;
    if n % 2 == 0 {
        PI.powi(j as i32) / factorial(j)
    } else {
        // 2^(j+1) pi^j / (2j+1)!!
        2f64.powi(j as i32 + 1) * PI.powi(j as i32) / double_factorial(n)
    }
}

/// Enclosure of the unit ball volume, using `pi ∈ [PI, next_up(PI)]`.
pub fn unit_ball_volume_interval(n: usize) -> Interval {
    assert!(n >= 1);
    let pi = Interval::new(PI, PI.next_up());
    let j = n / 2;
    let pj = pi.powi(j as u32);
    if n % 2 == 0 {
        pj / Interval::point(factorial(j))
    } else {
        Interval::point(2f64.powi(j as i32 + 1)) * pj / Interval::point(double_factorial(n))
    }
}

/// Area of the unit sphere `S^{n-1} ⊂ R^n`, `n * ω_n`.
pub fn sphere_area(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn double_factorial(n: usize) -> f64 {
    (1..=n).rev().step_by(2).map(|i| i as f64).product()
}

/// `|II|^2 = (m-2)/|z|^2` at a point of the cone.
pub fn second_fundamental_norm_sq(p: &ReducedPoint, cone: &ConeParams) -> Result<f64> {
    if p.is_apex() {
        return Err(Error::SingularApex);
    }
    if p.region != Region::OnCone {
        let gap = (p.u - p.v).abs() / p.u.max(p.v);
        // Accept points that are on the cone up to rounding of the caller's construction.
        if gap > 1e-10 {
            return Err(Error::NotOnCone { gap });
        }
    }
    Ok((cone.m() - 2) as f64 / p.norm_sq())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(k: usize, h: usize) -> ConeParams {
        ConeParams::new(k, h).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let cone = c(5, 3);
        let p = reduce(&AmbientPoint::new(vec![1.0, 0.0, 0.0, 0.0, 0.0], vec![2.0, 0.0, 0.0]), &cone).unwrap();
        assert_eq!((p.u, p.v, p.region), (2.0, 16.0, Region::InK));

        let s2 = 2f64.sqrt();
        let p = reduce(&AmbientPoint::new(vec![2.0, 0.0, 0.0, 0.0, 0.0], vec![s2, 0.0, 0.0]), &cone).unwrap();
        assert!((p.u - 8.0).abs() < 1e-14 && (p.v - 8.0).abs() < 1e-14);
        assert_eq!(p.region, Region::OnCone);
    }

    #[test]
    fn reduce_rejects_wrong_dimension() {
        let err = reduce(&AmbientPoint::new(vec![1.0; 4], vec![1.0; 3]), &c(5, 3)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 5, got: 4 });
    }

    #[test]
    fn exact_classification() {
        let cone = c(5, 3);
        let r = |n: i64| BigRational::from_integer(n.into());
        // |x|^2 = 4, |y|^2 = 2: u = 8, v = 8.
        assert_eq!(Region::classify_exact(&cone, &r(4), &r(2)), Region::OnCone);
        assert_eq!(Region::classify_exact(&cone, &r(1), &r(4)), Region::InK);
        assert_eq!(Region::classify_exact(&cone, &r(9), &r(1)), Region::InKComplement);
    }

    #[test]
    fn distance_and_p_examples() {
        let cone = c(5, 3);
        let p = ReducedPoint::new(&cone, 0.0, 1.0);
        assert_eq!((p.u, p.v), (0.0, 4.0));
        assert!((dist_to_cone(&p, &cone) - 2.0 / 6f64.sqrt()).abs() < 1e-15);
        assert!((p_function(&p, &cone) - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        let on = ReducedPoint::new(&cone, 2.0, 2f64.sqrt());
        assert!(dist_to_cone(&on, &cone) < 1e-15);
        assert!(p_function(&on, &cone) < 1e-15);
    }

    #[test]
    fn l_constant_examples() {
        assert!((c(5, 3).l_constant() - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((c(2, 7).l_constant() - (7.0f64 / 6.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn unit_ball_volumes() {
        assert!((unit_ball_volume(2) - PI).abs() < 1e-15);
        assert!((unit_ball_volume(4) - PI * PI / 2.0).abs() < 1e-14);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-14);
        for n in 2..=11 {
            assert!(unit_ball_volume(n) < 6.0, "omega_{n}");
        }
        for n in 1..=16 {
            assert!(unit_ball_volume_interval(n).contains(unit_ball_volume(n)));
        }
    }

    #[test]
    fn certified_set() {
        assert_eq!(ConeParams::all_certified().len(), 12);
        assert!(c(5, 3).is_certified());
        assert!(c(11, 2).is_certified());
        assert!(!c(4, 4).is_certified());
        assert_eq!(ConeParams::certified(4, 4).unwrap_err(), Error::UncertifiedPair { k: 4, h: 4 });
        assert!(ConeParams::new(1, 5).is_err());
        assert!(ConeParams::new(9, 9).is_err());
    }

    #[test]
    fn second_fundamental_form() {
        let cone = c(3, 5);
        // cone point with |z| = 1
        let t = cone.tangent();
        let p = ReducedPoint::new(&cone, t[0], t[1]);
        assert!((second_fundamental_norm_sq(&p, &cone).unwrap() - 6.0).abs() < 1e-12);
        let p2 = ReducedPoint::new(&cone, 2.0 * t[0], 2.0 * t[1]);
        assert!((second_fundamental_norm_sq(&p2, &cone).unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(
            second_fundamental_norm_sq(&ReducedPoint::new(&cone, 0.0, 0.0), &cone),
            Err(Error::SingularApex)
        );
        assert!(second_fundamental_norm_sq(&ReducedPoint::new(&cone, 1.0, 0.0), &cone).is_err());
    }

    #[test]
    fn normal_and_tangent_are_orthonormal() {
        for cone in ConeParams::all_certified() {
            let t = cone.tangent();
            let n = cone.normal();
            assert!((t[0] * t[0] + t[1] * t[1] - 1.0).abs() < 1e-15);
            assert!((n[0] * n[0] + n[1] * n[1] - 1.0).abs() < 1e-15);
            assert!((t[0] * n[0] + t[1] * n[1]).abs() < 1e-15);
            let p = ReducedPoint::new(&cone, t[0], t[1]);
            assert_eq!(p.region, Region::OnCone);
            assert!((cone.cone_angle() - t[1].atan2(t[0])).abs() < 1e-15);
        }
    }
}
