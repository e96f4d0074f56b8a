use std::f64::consts::FRAC_PI_2;

use super::{ambient_field, Calibration, CalibrationBranch};
use crate::cone::{dist_to_cone, reduce, AmbientPoint, ConeParams, ReducedPoint};
use crate::error::{Error, Result};

/// Central-difference divergence of one branch's unit field in `R^m`.
///
/// The field is built from the branch gradient only; `div_g_closed` is never
/// consulted. Requires the point to sit at least `10 * step` away from the
/// cone, the apex and both coordinate blocks' axes.
pub fn div_g_fd(p: &AmbientPoint, branch: &CalibrationBranch, step: f64) -> Result<f64> {
    let cone = branch.cone;
    let rp = reduce(p, &cone)?;
    let guard = 10.0 * step;
    let distance = dist_to_cone(&rp, &cone).min(rp.norm()).min(rp.r_x).min(rp.r_y);
    if !(step > 0.0) || distance <= guard {
        return Err(Error::OracleUnreliable { step, distance });
    }
    let mut z = p.flat();
    let mut div = 0.0;
    for i in 0..z.len() {
        let z0 = z[i];
        z[i] = z0 + step;
        let gp = ambient_field(cone, &z, |q| branch.unit_field(q))?[i];
        z[i] = z0 - step;
        let gm = ambient_field(cone, &z, |q| branch.unit_field(q))?[i];
        z[i] = z0;
        div += (gp - gm) / (2.0 * step);
    }
    Ok(div)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthSample {
    pub radius: f64,
    /// `max |Dg| · |z|` over the sampled directions.
    pub scaled_max: f64,
    /// Polar angle `atan2(r_y, r_x)` where the maximum occurs.
    pub worst_angle: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    pub cone: ConeParams,
    pub samples: Vec<GrowthSample>,
    /// Largest over smallest `scaled_max` across radii.
    pub spread: f64,
    /// True when the spread exceeds 2, i.e. `|Dg| |z|` is not bounded at the probed scale.
    pub grows: bool,
}

/// Frobenius norm of the ambient Jacobian of `g` at a reduced point.
///
/// For `g = a(r_x, r_y) x/|x| + b(r_x, r_y) y/|y|` the Jacobian splits into the
/// 2x2 radial block and the tangential parts `a/r_x` (multiplicity `k-1`) and
/// `b/r_y` (multiplicity `h-1`).
fn jacobian_norm(cal: &Calibration, rx: f64, ry: f64, step: f64) -> Result<f64> {
    let cone = cal.cone;
    let g = |a: f64, b: f64| -> Result<[f64; 2]> {
        let p = ReducedPoint::new(&cone, a, b);
        cal.branch_for(&p).unit_field(&p)
    };
    let gxp = g(rx + step, ry)?;
    let gxm = g(rx - step, ry)?;
    let gyp = g(rx, ry + step)?;
    let gym = g(rx, ry - step)?;
    let g0 = g(rx, ry)?;
    let mut s = 0.0;
    for c in 0..2 {
        let dx = (gxp[c] - gxm[c]) / (2.0 * step);
        let dy = (gyp[c] - gym[c]) / (2.0 * step);
        s += dx * dx + dy * dy;
    }
    s += (cone.k() - 1) as f64 * (g0[0] / rx).powi(2);
    s += (cone.h() - 1) as f64 * (g0[1] / ry).powi(2);
    Ok(s.sqrt())
}

/// Samples `max |Dg| · |z|` on spheres of the given radii.
///
/// Directions are a uniform grid of 256 polar angles in `(0, pi/2)`, skipping
/// those within `1e-3` rad of the cone where `Dg` jumps.
pub fn derivative_growth_probe(cal: &Calibration, radii: &[f64]) -> Result<GrowthReport> {
    const DIRECTIONS: usize = 256;
    let cone_angle = cal.cone.cone_angle();
    let mut samples = Vec::with_capacity(radii.len());
    for &radius in radii {
        if !(radius > 0.0) {
            return Err(Error::InvalidArgument(format!("radius {radius} must be positive")));
        }
        let mut best = GrowthSample { radius, scaled_max: 0.0, worst_angle: 0.0 };
        for i in 0..DIRECTIONS {
            let theta = FRAC_PI_2 * (i as f64 + 0.5) / DIRECTIONS as f64;
            if (theta - cone_angle).abs() < 1e-3 {
                continue;
            }
            let (rx, ry) = (radius * theta.cos(), radius * theta.sin());
            let step = 1e-6 * radius;
            let val = jacobian_norm(cal, rx, ry, step)? * radius;
            if val > best.scaled_max {
                best.scaled_max = val;
                best.worst_angle = theta;
            }
        }
        samples.push(best);
    }
    let max = samples.iter().map(|s| s.scaled_max).fold(0.0, f64::max);
    let min = samples.iter().map(|s| s.scaled_max).fold(f64::INFINITY, f64::min);
    let spread = if samples.is_empty() { 1.0 } else { max / min };
    Ok(GrowthReport { cone: cal.cone, samples, spread, grows: spread > 2.0 })
}
