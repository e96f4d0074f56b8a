//! Calibration functions `f`, the unit field `g = ∇f/|∇f|` and `div g`.
//!
//! Two branches are used:
//!
//! * `UPower`: `f = (u - v) u^d / 4`, on `{u > v}` (outside `K`);
//! * `VPower`: `f = (u - v) v^d / 4`, on `{u < v}` (inside `K`).
//!
//! With `w` the branch's power variable, `|∇f|^2 = w^(2d-1) Ĝ(u, v)` and
//! `div g = (h-1)(k-1)(u-v) P(u, v) / (8 sqrt(w) Ĝ^(3/2))`, where `Ĝ` and `P`
//! are quadratic forms whose coefficients depend on `(h, k, d)`. Writing the
//! quotient with the powers of `w` already combined keeps it finite on the axes.

pub mod displays;
mod oracle;

pub use oracle::{derivative_growth_probe, div_g_fd, GrowthReport, GrowthSample};

use num::rational::Rational64;
use num::ToPrimitive;

use crate::cone::{ConeParams, ReducedPoint, Region};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BranchKind {
    UPower,
    VPower,
}

impl BranchKind {
    pub fn name(&self) -> &'static str {
        match self {
            BranchKind::UPower => "upower",
            BranchKind::VPower => "vpower",
        }
    }
}

/// Exact coefficients of `Ĝ`, `P` and the prefactor for one `(h, k, d)`.
///
/// `Ĝ = ga (a1 u + a2 v)^2 + gb u v` and `P = pa u^2 + pb u v + pc v^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchCoeffs {
    pub kind: BranchKind,
    pub ga: Rational64,
    pub a1: Rational64,
    pub a2: Rational64,
    pub gb: Rational64,
    pub pa: Rational64,
    pub pb: Rational64,
    pub pc: Rational64,
    /// `(h-1)(k-1)/8`
    pub prefactor: Rational64,
}

impl BranchCoeffs {
    pub fn new(kind: BranchKind, cone: &ConeParams, d: Rational64) -> Self {
        let one = Rational64::from_integer(1);
        let two = Rational64::from_integer(2);
        let h = Rational64::from_integer(cone.h() as i64);
        let k = Rational64::from_integer(cone.k() as i64);
        let prefactor = (h - one) * (k - one) / Rational64::from_integer(8);
        let quarter = Rational64::new(1, 4);
        match kind {
            BranchKind::UPower => BranchCoeffs {
                kind,
                ga: (h - one) * quarter,
                a1: d + one,
                a2: -d,
                gb: (k - one) * quarter,
                pa: (one + d) * (one + d) * (d * (h - one) - one),
                pb: d * (-two + d * (one + two * d - two * (one + d) * h) + k),
                pc: d * d * d * (h - one),
                prefactor,
            },
            BranchKind::VPower => BranchCoeffs {
                kind,
                ga: (k - one) * quarter,
                a1: d,
                a2: -(d + one),
                gb: (h - one) * quarter,
                pa: d * d * d * (k - one),
                pb: d * (-two + d + two * d * d + h - two * d * (one + d) * k),
                pc: (d + one) * (d + one) * (-one + d * (k - one)),
                prefactor,
            },
        }
    }

    pub fn ghat<S: Scalar>(&self, u: S, v: S) -> S {
        let lin = S::rational(self.a1) * u + S::rational(self.a2) * v;
        S::rational(self.ga) * lin.sqr() + S::rational(self.gb) * u * v
    }

    pub fn poly<S: Scalar>(&self, u: S, v: S) -> S {
        S::rational(self.pa) * u * u + S::rational(self.pb) * u * v + S::rational(self.pc) * v * v
    }

    fn power_var<S: Scalar>(&self, u: S, v: S) -> S {
        match self.kind {
            BranchKind::UPower => u,
            BranchKind::VPower => v,
        }
    }

    /// `div g` from the pre-combined quotient.
    pub fn div_g<S: Scalar>(&self, u: S, v: S) -> S {
        let w = self.power_var(u, v);
        let num = S::rational(self.prefactor) * (u - v) * self.poly(u, v);
        num / (w.sqrt() * self.ghat(u, v).pow_three_halves())
    }

    /// `|div g| |z|^2 / dist(z, M)` with the `(sqrt u - sqrt v)` factor cancelled.
    ///
    /// `m_minus_2` is `m - 2` and `z_sq` is `|z|^2`.
    pub fn div_ratio<S: Scalar>(&self, u: S, v: S, z_sq: S, m_minus_2: i64) -> S {
        let w = self.power_var(u, v);
        let num = S::int(m_minus_2).sqrt()
            * S::rational(self.prefactor)
            * (u.sqrt() + v.sqrt())
            * self.poly(u, v).abs()
            * z_sq;
        num / (w.sqrt() * self.ghat(u, v).pow_three_halves())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationBranch {
    pub kind: BranchKind,
    pub d: Rational64,
    pub cone: ConeParams,
    coeffs: BranchCoeffs,
}

/// Radial components `(∂f/∂r_x, ∂f/∂r_y)`; the ambient gradient is
/// `∂f/∂r_x · x/|x| + ∂f/∂r_y · y/|y|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGradient {
    pub dr_x: f64,
    pub dr_y: f64,
}

impl RadialGradient {
    pub fn norm_sq(&self) -> f64 {
        self.dr_x * self.dr_x + self.dr_y * self.dr_y
    }
}

impl CalibrationBranch {
    pub fn new(kind: BranchKind, cone: ConeParams, d: Rational64) -> Self {
        assert!(d > Rational64::from_integer(0), "branch exponent must be positive");
        CalibrationBranch { kind, d, cone, coeffs: BranchCoeffs::new(kind, &cone, d) }
    }

    pub fn coeffs(&self) -> &BranchCoeffs {
        &self.coeffs
    }

    pub fn d_f64(&self) -> f64 {
        self.d.to_f64().unwrap()
    }

    fn power_var(&self, p: &ReducedPoint) -> f64 {
        match self.kind {
            BranchKind::UPower => p.u,
            BranchKind::VPower => p.v,
        }
    }

    fn check_axis(&self, p: &ReducedPoint) -> Result<()> {
        if p.is_apex() {
            return Err(Error::SingularApex);
        }
        if self.power_var(p) == 0.0 && self.d < Rational64::from_integer(1) {
            return Err(Error::DegenerateAxis { branch: self.kind.name(), d: self.d_f64() });
        }
        Ok(())
    }

    pub fn f_value(&self, p: &ReducedPoint) -> Result<f64> {
        if p.is_apex() {
            return Err(Error::SingularApex);
        }
        Ok((p.u - p.v) * self.power_var(p).powf(self.d_f64()) / 4.0)
    }

    pub fn grad_f(&self, p: &ReducedPoint) -> Result<RadialGradient> {
        self.check_axis(p)?;
        let d = self.d_f64();
        let (h1, k1) = ((self.cone.h() - 1) as f64, (self.cone.k() - 1) as f64);
        let (u, v) = (p.u, p.v);
        Ok(match self.kind {
            BranchKind::UPower => RadialGradient {
                dr_x: 0.5 * h1 * p.r_x * u.powf(d - 1.0) * ((d + 1.0) * u - d * v),
                dr_y: -0.5 * k1 * p.r_y * u.powf(d),
            },
            BranchKind::VPower => RadialGradient {
                dr_x: 0.5 * h1 * p.r_x * v.powf(d),
                dr_y: 0.5 * k1 * p.r_y * v.powf(d - 1.0) * (d * u - (d + 1.0) * v),
            },
        })
    }

    pub fn grad_norm_sq(&self, p: &ReducedPoint) -> Result<f64> {
        self.check_axis(p)?;
        let w = self.power_var(p);
        Ok(w.powf(2.0 * self.d_f64() - 1.0) * self.coeffs.ghat(p.u, p.v))
    }

    pub fn div_g_closed(&self, p: &ReducedPoint) -> Result<f64> {
        if p.is_apex() {
            return Err(Error::SingularApex);
        }
        let w = self.power_var(p);
        if w == 0.0 || self.coeffs.ghat(p.u, p.v) <= 0.0 {
            return Err(Error::ZeroGradient);
        }
        Ok(self.coeffs.div_g(p.u, p.v))
    }

    /// `|∇f|^3 div g = (h-1)(k-1)/8 · w^(3d-2) (u-v) P(u, v)`.
    pub fn div_g_numerator(&self, p: &ReducedPoint) -> f64 {
        let w = self.power_var(p);
        let c = &self.coeffs;
        c.prefactor.to_f64().unwrap() * w.powf(3.0 * self.d_f64() - 2.0) * (p.u - p.v) * c.poly(p.u, p.v)
    }

    /// Unit field in reduced coordinates.
    pub fn unit_field(&self, p: &ReducedPoint) -> Result<[f64; 2]> {
        let g = self.grad_f(p)?;
        let n = g.norm_sq().sqrt();
        if n == 0.0 {
            return Err(Error::ZeroGradient);
        }
        Ok([g.dr_x / n, g.dr_y / n])
    }
}

/// Exponents of the certified sub-calibrations, `(d on {u > v}, d on {u < v})`.
///
/// The `(h, k) = (2, k)` choice is `d = 3/2` where `u > v` and `d = 1` where
/// `u < v`; exchanging `x` and `y` swaps the branches, hence the exponents.
pub fn certified_exponents(cone: &ConeParams) -> Result<(Rational64, Rational64)> {
    let (k, h) = (cone.k(), cone.h());
    let r = Rational64::new;
    match (k, h) {
        (3, 5) | (5, 3) => Ok((r(3, 4), r(3, 4))),
        (7..=11, 2) => Ok((r(3, 2), r(1, 1))),
        (2, 7..=11) => Ok((r(1, 1), r(3, 2))),
        _ => Err(Error::UncertifiedPair { k, h }),
    }
}

/// A sample of the sub-calibration field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    /// Components along `x/|x|` and `y/|y|`.
    pub g: [f64; 2],
    pub div_g: f64,
    pub grad_norm_sq: f64,
    pub branch: BranchKind,
}

/// The piecewise field: `UPower` on `{u >= v}`, `VPower` on `{u < v}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub cone: ConeParams,
    pub upper: CalibrationBranch,
    pub lower: CalibrationBranch,
    pub certified: bool,
}

impl Calibration {
    pub fn for_cone(cone: ConeParams) -> Result<Self> {
        let (du, dv) = certified_exponents(&cone)?;
        let mut c = Self::with_exponents(cone, du, dv);
        c.certified = true;
        Ok(c)
    }

    /// Exploratory calibration with arbitrary exponents; never marked certified.
    pub fn with_exponents(cone: ConeParams, d_upper: Rational64, d_lower: Rational64) -> Self {
        Calibration {
            cone,
            upper: CalibrationBranch::new(BranchKind::UPower, cone, d_upper),
            lower: CalibrationBranch::new(BranchKind::VPower, cone, d_lower),
            certified: false,
        }
    }

    pub fn branch(&self, kind: BranchKind) -> &CalibrationBranch {
        match kind {
            BranchKind::UPower => &self.upper,
            BranchKind::VPower => &self.lower,
        }
    }

    pub fn branch_for(&self, p: &ReducedPoint) -> &CalibrationBranch {
        match p.region {
            Region::InK => &self.lower,
            Region::OnCone | Region::InKComplement => &self.upper,
        }
    }

    pub fn g_field(&self, p: &ReducedPoint) -> Result<FieldSample> {
        if p.is_apex() {
            return Err(Error::SingularApex);
        }
        let b = self.branch_for(p);
        Ok(FieldSample {
            g: b.unit_field(p)?,
            div_g: b.div_g_closed(p)?,
            grad_norm_sq: b.grad_norm_sq(p)?,
            branch: b.kind,
        })
    }

    /// The field at an ambient point, as a vector of length `m`.
    pub fn g_ambient(&self, z: &[f64]) -> Result<Vec<f64>> {
        ambient_field(self.cone, z, |p| self.branch_for(p).unit_field(p))
    }
}

/// Lifts a reduced unit field to `R^m`; the radial direction of a vanishing
/// block is irrelevant because the corresponding component vanishes there.
pub(crate) fn ambient_field<F>(cone: ConeParams, z: &[f64], field: F) -> Result<Vec<f64>>
where
    F: Fn(&ReducedPoint) -> Result<[f64; 2]>,
{
    let k = cone.k();
    let rx = z[..k].iter().map(|a| a * a).sum::<f64>().sqrt();
    let ry = z[k..].iter().map(|a| a * a).sum::<f64>().sqrt();
    let p = ReducedPoint::new(&cone, rx, ry);
    let g = field(&p)?;
    let sx = if rx > 0.0 { g[0] / rx } else { 0.0 };
    let sy = if ry > 0.0 { g[1] / ry } else { 0.0 };
    Ok(z[..k].iter().map(|a| a * sx).chain(z[k..].iter().map(|a| a * sy)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::ConeParams;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn f_value_examples() {
        let cone = ConeParams::new(5, 3).unwrap();
        let up = CalibrationBranch::new(BranchKind::UPower, cone, r(3, 4));
        let vp = CalibrationBranch::new(BranchKind::VPower, cone, r(3, 4));
        // u = 2 r_x^2 = 16, v = 4 r_y^2 = 1
        let p = ReducedPoint::new(&cone, 8f64.sqrt(), 0.5);
        assert!((p.u - 16.0).abs() < 1e-13 && (p.v - 1.0).abs() < 1e-15);
        assert!((up.f_value(&p).unwrap() - 30.0).abs() < 1e-12);
        let on = ReducedPoint::new(&cone, 2.0, 2f64.sqrt());
        assert!(up.f_value(&on).unwrap().abs() < 1e-13);
        assert!(vp.f_value(&on).unwrap().abs() < 1e-13);
    }

    #[test]
    fn on_cone_gradient_density() {
        for cone in ConeParams::all_certified() {
            let cal = Calibration::for_cone(cone).unwrap();
            let t = cone.tangent();
            let p = ReducedPoint::new(&cone, 1.7 * t[0], 1.7 * t[1]);
            let w = p.u;
            let d = cal.upper.d_f64();
            let g = cal.upper.grad_f(&p).unwrap();
            let hx = 0.5 * (cone.h() - 1) as f64 * w.powf(d) * p.r_x;
            let ky = -0.5 * (cone.k() - 1) as f64 * w.powf(d) * p.r_y;
            assert!((g.dr_x - hx).abs() < 1e-12 * hx.abs());
            assert!((g.dr_y - ky).abs() < 1e-12 * ky.abs());
        }
    }

    #[test]
    fn branch_continuity_on_cone() {
        let cone = ConeParams::new(5, 3).unwrap();
        let cal = Calibration::for_cone(cone).unwrap();
        // u = v = 1
        let p = ReducedPoint::new(&cone, (0.5f64).sqrt(), 0.5);
        let a = cal.upper.grad_norm_sq(&p).unwrap();
        let b = cal.lower.grad_norm_sq(&p).unwrap();
        assert!((a - b).abs() < 1e-12 * a);
        let ga = cal.upper.unit_field(&p).unwrap();
        let gb = cal.lower.unit_field(&p).unwrap();
        assert!((ga[0] - gb[0]).abs() < 1e-12 && (ga[1] - gb[1]).abs() < 1e-12);
        assert!(cal.upper.div_g_closed(&p).unwrap().abs() < 1e-12);
    }

    #[test]
    fn degenerate_axis_and_apex() {
        let cone = ConeParams::new(5, 3).unwrap();
        let up = CalibrationBranch::new(BranchKind::UPower, cone, r(3, 4));
        let on_y_axis = ReducedPoint::new(&cone, 0.0, 1.0);
        assert!(matches!(up.grad_f(&on_y_axis), Err(Error::DegenerateAxis { .. })));
        assert_eq!(up.div_g_closed(&on_y_axis), Err(Error::ZeroGradient));
        let apex = ReducedPoint::new(&cone, 0.0, 0.0);
        assert_eq!(up.f_value(&apex), Err(Error::SingularApex));
        let cal = Calibration::for_cone(cone).unwrap();
        assert_eq!(cal.g_field(&apex), Err(Error::SingularApex));
        // the VPower branch is regular on the y-axis
        let s = cal.g_field(&on_y_axis).unwrap();
        assert_eq!(s.branch, BranchKind::VPower);
        assert!(s.g[0].abs() < 1e-15 && (s.g[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn exponents_follow_orientation() {
        let c = |k, h| certified_exponents(&ConeParams::new(k, h).unwrap()).unwrap();
        assert_eq!(c(7, 2), (r(3, 2), r(1, 1)));
        assert_eq!(c(2, 7), (r(1, 1), r(3, 2)));
        assert_eq!(c(3, 5), (r(3, 4), r(3, 4)));
        assert!(Calibration::for_cone(ConeParams::new(4, 4).unwrap()).is_err());
        let explore = Calibration::with_exponents(ConeParams::new(4, 4).unwrap(), r(1, 1), r(1, 1));
        assert!(!explore.certified);
    }

    #[test]
    fn general_polynomial_specializes_to_displayed_coefficients() {
        // (h, k) = (3, 5), d = 3/4: P = (49u^2 - 72uv + 27v^2)/32 on the u-branch.
        let cone = ConeParams::new(5, 3).unwrap();
        let c = BranchCoeffs::new(BranchKind::UPower, &cone, r(3, 4));
        assert_eq!((c.pa, c.pb, c.pc), (r(49, 32), r(-72, 32), r(27, 32)));
        let c = BranchCoeffs::new(BranchKind::VPower, &cone, r(3, 4));
        assert_eq!((c.pa, c.pb, c.pc), (r(27, 16), r(-123, 16), r(98, 16)));
        // (h, k) = (2, 9), d = 1 on the v-branch: (k-1)u^2 + (3-4k)uv + 4(k-2)v^2.
        let cone = ConeParams::new(9, 2).unwrap();
        let c = BranchCoeffs::new(BranchKind::VPower, &cone, r(1, 1));
        assert_eq!((c.pa, c.pb, c.pc), (r(8, 1), r(-33, 1), r(28, 1)));
    }
}
