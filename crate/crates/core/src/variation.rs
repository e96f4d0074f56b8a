//! Axisymmetric competitors `F` for the region `K` and the quantities compared
//! in the stability inequalities.
//!
//! A set invariant under `O(k) x O(h)` is described by its trace in the
//! quarter plane `(r_x, r_y)`. Lebesgue measure and hypersurface measure reduce
//! to planar integrals against the weight
//! `w = k ω_k r_x^(k-1) · h ω_h r_y^(h-1)`.
//!
//! Competitors are normal graphs over the cone line: with unit tangent `τ` and
//! unit normal `ν` (pointing out of `K`), `∂F = {r τ + t φ(r) ν}` and `F` lies on
//! the `-ν` side. In the orthonormal chart `(r, s) -> r τ + s ν` the distance
//! to the cone is `|s|`, so `K Δ F` is `{0 < ±s < ±t φ(r)}`.

use crate::certification::claimed_constant;
use crate::cone::{unit_ball_volume, ConeParams, ReducedPoint};
use crate::constants::stability_constant_f64;
use crate::error::{Error, Result};
use crate::profile::RadialProfile;
use crate::quadrature::GaussRule;
use crate::subcalibration::Calibration;

/// Gauss order used across the normal direction `s`, where intervals are short.
const INNER_ORDER: usize = 8;
/// Gauss order for polynomial edge integrals (exact up to degree 15 ≥ m - 1).
const EDGE_ORDER: usize = 8;

/// Composite rule along the cone line: `panels` panels of an `order`-point rule
/// between consecutive profile breakpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadSpec {
    pub order: usize,
    pub panels: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec { order: 4, panels: 1 << 12 }
    }
}

/// `k ω_k r_x^(k-1) · h ω_h r_y^(h-1)`.
pub fn weight(cone: &ConeParams, r_x: f64, r_y: f64) -> f64 {
    let (k, h) = (cone.k(), cone.h());
    let ck = k as f64 * unit_ball_volume(k);
    let ch = h as f64 * unit_ball_volume(h);
    ck * r_x.powi(k as i32 - 1) * ch * r_y.powi(h as i32 - 1)
}

/// Largest `r` with `r τ` inside the window `H_R = {r_x <= R, r_y <= R}`.
pub fn window_cone_radius(cone: &ConeParams, r: f64) -> f64 {
    let t = cone.tangent();
    r / t[0].max(t[1])
}

fn chart(cone: &ConeParams, r: f64, s: f64) -> [f64; 2] {
    let (t, n) = (cone.tangent(), cone.normal());
    [r * t[0] + s * n[0], r * t[1] + s * n[1]]
}

#[derive(Debug, Clone, PartialEq)]
pub enum CurveKind {
    /// Vertices in the quarter plane, traversed in order.
    Polyline(Vec<[f64; 2]>),
    /// `r τ + t φ(r) ν` for `r >= 0`.
    NormalGraph { phi: RadialProfile, t: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCurve {
    pub cone: ConeParams,
    pub kind: CurveKind,
}

impl ProfileCurve {
    pub fn polyline(cone: ConeParams, points: Vec<[f64; 2]>) -> Result<Self> {
        if points.iter().any(|p| !(p[0].is_finite() && p[1].is_finite())) {
            return Err(Error::UnboundedRegion);
        }
        if points.iter().any(|p| p[0] < 0.0 || p[1] < 0.0) {
            return Err(Error::OutsideQuarterPlane);
        }
        Ok(ProfileCurve { cone, kind: CurveKind::Polyline(points) })
    }

    /// The cone's own profile from the apex to `r_max τ`.
    pub fn cone_line(cone: ConeParams, r_max: f64) -> Self {
        let t = cone.tangent();
        ProfileCurve { cone, kind: CurveKind::Polyline(vec![[0.0, 0.0], [r_max * t[0], r_max * t[1]]]) }
    }

    pub fn graph_parts(&self) -> Option<(&RadialProfile, f64)> {
        match &self.kind {
            CurveKind::NormalGraph { phi, t } => Some((phi, *t)),
            CurveKind::Polyline(_) => None,
        }
    }

    /// Image under `z -> λ z`.
    pub fn dilate(&self, lambda: f64) -> Result<Self> {
        Ok(match &self.kind {
            CurveKind::Polyline(p) => {
                ProfileCurve::polyline(self.cone, p.iter().map(|q| [lambda * q[0], lambda * q[1]]).collect())?
            }
            CurveKind::NormalGraph { phi, t } => ProfileCurve {
                cone: self.cone,
                kind: CurveKind::NormalGraph { phi: phi.dilate(lambda)?, t: lambda * t },
            },
        })
    }
}

/// Boundary profile of the competitor whose boundary is the normal graph of `t φ`.
///
/// Fails if the graph leaves the quarter plane (where it would stop being
/// embedded in `R^m`) or the window `H_R`.
pub fn normal_graph(phi: &RadialProfile, t: f64, cone: ConeParams, r: f64) -> Result<ProfileCurve> {
    let (a, b) = phi.support();
    if b >= window_cone_radius(&cone, r) {
        return Err(Error::NotInWindow { radius: b });
    }
    let (kf, hf) = ((cone.k() - 1) as f64, (cone.h() - 1) as f64);
    let samples = 2048;
    for i in 0..=samples {
        let rr = a + (b - a) * i as f64 / samples as f64;
        let s = t * phi.value(rr);
        if s > rr * (hf / kf).sqrt() || -s > rr * (kf / hf).sqrt() {
            return Err(Error::Embeddedness { r: rr, t });
        }
        let p = chart(&cone, rr, s);
        if p[0] > r || p[1] > r {
            return Err(Error::NotInWindow { radius: rr });
        }
    }
    Ok(ProfileCurve { cone, kind: CurveKind::NormalGraph { phi: phi.clone(), t } })
}

/// Clips a segment to the box `[0, r]^2` (Liang–Barsky).
fn clip_segment(p: [f64; 2], q: [f64; 2], r: f64) -> Option<([f64; 2], [f64; 2])> {
    let d = [q[0] - p[0], q[1] - p[1]];
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for (pk, qk) in [(-d[0], p[0]), (d[0], r - p[0]), (-d[1], p[1]), (d[1], r - p[1])] {
        if pk == 0.0 {
            if qk < 0.0 {
                return None;
            }
        } else {
            let u = qk / pk;
            if pk < 0.0 {
                t0 = t0.max(u);
            } else {
                t1 = t1.min(u);
            }
        }
    }
    if t0 > t1 {
        return None;
    }
    Some(([p[0] + t0 * d[0], p[1] + t0 * d[1]], [p[0] + t1 * d[0], p[1] + t1 * d[1]]))
}

/// `P(F; H_R)`: the weighted length of the profile inside the window.
pub fn axisym_perimeter(curve: &ProfileCurve, r: f64, quad: QuadSpec) -> Result<f64> {
    let cone = curve.cone;
    match &curve.kind {
        CurveKind::Polyline(pts) => {
            let rule = GaussRule::new(EDGE_ORDER);
            let mut total = 0.0;
            for seg in pts.windows(2) {
                if let Some((p, q)) = clip_segment(seg[0], seg[1], r) {
                    let len = (q[0] - p[0]).hypot(q[1] - p[1]);
                    total += len
                        * rule.integrate(0.0, 1.0, |s| {
                            weight(&cone, p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1]))
                        });
                }
            }
            Ok(total)
        }
        CurveKind::NormalGraph { phi, t } => {
            let r_win = window_cone_radius(&cone, r);
            let line = cone.link_area() * r_win.powi(cone.m() as i32 - 1) / (cone.m() - 1) as f64;
            Ok(line + delta_perimeter(phi, *t, &cone, quad))
        }
    }
}

/// `P(F; H_R) - P(K; H_R) = ∫ (w(γ) |γ'| - w(r τ)) dr` over the support of `φ`.
pub fn delta_perimeter(phi: &RadialProfile, t: f64, cone: &ConeParams, quad: QuadSpec) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let rule = GaussRule::new(quad.order);
    let cw = cone.link_area();
    let m = cone.m() as i32;
    rule.composite(&phi.breakpoints(), quad.panels, |r| {
        let s = t * phi.value(r);
        let ds = t * phi.deriv(r);
        let p = chart(cone, r, s);
        weight(cone, p[0], p[1]) * (1.0 + ds * ds).sqrt() - cw * r.powi(m - 2)
    })
}

/// Planar regions whose `O(k) x O(h)` orbits are measured by [`axisym_volume`].
#[derive(Debug, Clone, PartialEq)]
pub enum AxisymRegion {
    /// Simple polygon in the quarter plane.
    Polygon(Vec<[f64; 2]>),
    /// The window `H_R`.
    Window { r: f64 },
    /// `H_R ∩ {p < ε}`.
    Slab { r: f64, eps: f64 },
    /// `K Δ F` for the normal graph of `t φ`.
    BetweenGraph { phi: RadialProfile, t: f64 },
}

fn polygon_volume(cone: &ConeParams, pts: &[[f64; 2]]) -> Result<f64> {
    if pts.iter().any(|p| !(p[0].is_finite() && p[1].is_finite())) {
        return Err(Error::UnboundedRegion);
    }
    if pts.iter().any(|p| p[0] < 0.0 || p[1] < 0.0) {
        return Err(Error::OutsideQuarterPlane);
    }
    if pts.len() < 3 {
        return Ok(0.0);
    }
    // Green: ∬ C x^(k-1) y^(h-1) = ∮ C x^k / k · y^(h-1) dy; the edge integrands
    // are polynomials of degree m - 1, integrated exactly.
    let (k, h) = (cone.k() as i32, cone.h() as i32);
    let c = cone.k() as f64 * unit_ball_volume(cone.k()) * cone.h() as f64 * unit_ball_volume(cone.h());
    let rule = GaussRule::new(EDGE_ORDER);
    let mut total = 0.0;
    for i in 0..pts.len() {
        let (p, q) = (pts[i], pts[(i + 1) % pts.len()]);
        let dy = q[1] - p[1];
        if dy == 0.0 {
            continue;
        }
        total += dy
            * rule.integrate(0.0, 1.0, |s| {
                let x = p[0] + s * (q[0] - p[0]);
                let y = p[1] + s * dy;
                x.powi(k) / k as f64 * y.powi(h - 1)
            });
    }
    Ok((c * total).abs())
}

/// Sutherland–Hodgman clip of a polygon to `{a x + b y <= c}`.
fn clip_half_plane(poly: &[[f64; 2]], a: f64, b: f64, c: f64) -> Vec<[f64; 2]> {
    let inside = |p: &[f64; 2]| a * p[0] + b * p[1] <= c;
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
        let (ip, iq) = (inside(&p), inside(&q));
        if ip {
            out.push(p);
        }
        if ip != iq {
            let fp = a * p[0] + b * p[1] - c;
            let fq = a * q[0] + b * q[1] - c;
            let s = fp / (fp - fq);
            out.push([p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])]);
        }
    }
    out
}

/// The polygon `[0, R]^2 ∩ {p < ε}`.
pub fn slab_polygon(cone: &ConeParams, r: f64, eps: f64) -> Vec<[f64; 2]> {
    let (a, b) = (1.0 / ((cone.k() - 1) as f64).sqrt(), 1.0 / ((cone.h() - 1) as f64).sqrt());
    let square = vec![[0.0, 0.0], [r, 0.0], [r, r], [0.0, r]];
    let p = clip_half_plane(&square, a, -b, eps);
    clip_half_plane(&p, -a, b, eps)
}

/// `|region|` in `R^m`.
pub fn axisym_volume(region: &AxisymRegion, cone: &ConeParams, quad: QuadSpec) -> Result<f64> {
    match region {
        AxisymRegion::Polygon(p) => polygon_volume(cone, p),
        AxisymRegion::Window { r } => {
            if !r.is_finite() {
                return Err(Error::UnboundedRegion);
            }
            polygon_volume(cone, &[[0.0, 0.0], [*r, 0.0], [*r, *r], [0.0, *r]])
        }
        AxisymRegion::Slab { r, eps } => {
            if !r.is_finite() {
                return Err(Error::UnboundedRegion);
            }
            if *eps <= 0.0 {
                return Ok(0.0);
            }
            polygon_volume(cone, &slab_polygon(cone, *r, *eps))
        }
        AxisymRegion::BetweenGraph { phi, t } => Ok(between_graph(phi, *t, cone, quad, |_, _, _| 1.0)),
    }
}

/// `∫_{K Δ F} ρ` for the normal graph of `t φ`, where `ρ(r_x, r_y, s)` sees the
/// chart coordinate `s` as well.
pub fn between_graph<D>(phi: &RadialProfile, t: f64, cone: &ConeParams, quad: QuadSpec, density: D) -> f64
where
    D: Fn(f64, f64, f64) -> f64,
{
    if t == 0.0 {
        return 0.0;
    }
    let rule = GaussRule::new(quad.order);
    let inner = GaussRule::new(INNER_ORDER);
    rule.composite(&phi.breakpoints(), quad.panels, |r| {
        let top = t * phi.value(r);
        let (lo, hi) = if top < 0.0 { (top, 0.0) } else { (0.0, top) };
        if hi == lo {
            return 0.0;
        }
        inner.integrate(lo, hi, |s| {
            let p = chart(cone, r, s);
            density(p[0], p[1], s) * weight(cone, p[0], p[1])
        })
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerimeterIdentity {
    pub lhs: f64,
    /// `∫_{K Δ F} |div g|`
    pub rhs_volume: f64,
    /// `∫_{∂F} (1 - g · ν_F)`
    pub rhs_boundary: f64,
    pub rhs: f64,
    /// `|lhs - rhs| / max(lhs, 1e-12)`
    pub rel_gap: f64,
}

fn require_graph(curve: &ProfileCurve) -> Result<(&RadialProfile, f64)> {
    curve
        .graph_parts()
        .ok_or_else(|| Error::InvalidArgument("competitor must be a normal graph over the cone".into()))
}

/// Both sides of `P(F) - P(K) = ∫_{KΔF} |div g| + ∫_{∂F} (1 - g·ν_F)` computed
/// by separate quadratures.
pub fn perimeter_identity_check(curve: &ProfileCurve, r: f64, quad: QuadSpec) -> Result<PerimeterIdentity> {
    let cone = curve.cone;
    let (phi, t) = require_graph(curve)?;
    if phi.support().1 >= window_cone_radius(&cone, r) {
        return Err(Error::NotInWindow { radius: phi.support().1 });
    }
    let cal = Calibration::for_cone(cone)?;
    let lhs = delta_perimeter(phi, t, &cone, quad);
    let div = |rx: f64, ry: f64, _s: f64| -> f64 {
        let p = ReducedPoint::new(&cone, rx, ry);
        cal.branch_for(&p).div_g_closed(&p).map(f64::abs).unwrap_or(0.0)
    };
    let rhs_volume = between_graph(phi, t, &cone, quad, div);
    let rhs_boundary = if t == 0.0 {
        0.0
    } else {
        let rule = GaussRule::new(quad.order);
        let (tau, nu) = (cone.tangent(), cone.normal());
        rule.composite(&phi.breakpoints(), quad.panels, |rr| {
            let s = t * phi.value(rr);
            let ds = t * phi.deriv(rr);
            let p = chart(&cone, rr, s);
            let speed = (1.0 + ds * ds).sqrt();
            let n = [(nu[0] - ds * tau[0]) / speed, (nu[1] - ds * tau[1]) / speed];
            let rp = ReducedPoint::new(&cone, p[0], p[1]);
            let g = cal.branch_for(&rp).unit_field(&rp).unwrap_or(nu);
            (1.0 - g[0] * n[0] - g[1] * n[1]) * weight(&cone, p[0], p[1]) * speed
        })
    };
    let rhs = rhs_volume + rhs_boundary;
    let rel_gap = (lhs - rhs).abs() / lhs.max(1e-12);
    Ok(PerimeterIdentity { lhs, rhs_volume, rhs_boundary, rhs, rel_gap })
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariationReport {
    pub cone: ConeParams,
    pub r: f64,
    pub t: f64,
    pub delta_p: f64,
    pub vol_delta: f64,
    /// `∫_{K Δ F} dist(z, M) dz`
    pub dist_volume: f64,
    pub identity: PerimeterIdentity,
    /// `c_{k,h} ∫_{K Δ F} dist / |z|^2`, the integrated pointwise bound.
    pub divergence_integral: f64,
    pub alpha: f64,
    pub delta: f64,
    /// `α^2 / δ`, zero when `α = 0`.
    pub ratio: f64,
    pub stability_holds: bool,
}

impl VariationReport {
    /// `P(F) - P(K) >= ∫ |div g| >= c ∫ dist/|z|^2`, with a relative slack for rounding.
    pub fn divergence_bound_holds(&self) -> bool {
        self.delta_p >= self.divergence_integral * (1.0 - 1e-9) - 1e-300
    }
}

/// `α = |K Δ F| / R^m`, `δ = (P(F; H_R) - P(K; H_R)) / R^(m-1)` and the check
/// `α^2 <= C δ` with `C = 7^2 12^2 10^20`.
pub fn stability_check(curve: &ProfileCurve, r: f64, quad: QuadSpec) -> Result<VariationReport> {
    let cone = curve.cone;
    let (phi, t) = require_graph(curve)?;
    let m = cone.m() as i32;
    let identity = perimeter_identity_check(curve, r, quad)?;
    let delta_p = identity.lhs;
    let vol_delta = between_graph(phi, t, &cone, quad, |_, _, _| 1.0);
    let dist_volume = between_graph(phi, t, &cone, quad, |_, _, s| s.abs());
    let c = claimed_constant(&cone)?.to_f64();
    let divergence_integral = c * between_graph(phi, t, &cone, quad, |x, y, s| s.abs() / (x * x + y * y));
    let alpha = vol_delta / r.powi(m);
    let delta = delta_p / r.powi(m - 1);
    let ratio = if alpha == 0.0 { 0.0 } else { alpha * alpha / delta };
    let stability_holds = alpha * alpha <= stability_constant_f64() * delta.max(0.0);
    Ok(VariationReport {
        cone,
        r,
        t,
        delta_p,
        vol_delta,
        dist_volume,
        identity,
        divergence_integral,
        alpha,
        delta,
        ratio,
        stability_holds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    Sine,
    SineSquared,
    PolyBump,
}

impl ProfileKind {
    pub const ALL: [ProfileKind; 3] = [ProfileKind::Sine, ProfileKind::SineSquared, ProfileKind::PolyBump];

    pub fn name(&self) -> &'static str {
        match self {
            ProfileKind::Sine => "sine",
            ProfileKind::SineSquared => "sine2",
            ProfileKind::PolyBump => "polybump",
        }
    }

    pub fn build(&self, a: f64, b: f64) -> Result<RadialProfile> {
        match self {
            ProfileKind::Sine => RadialProfile::sine(a, b),
            ProfileKind::SineSquared => RadialProfile::sine_squared(a, b),
            ProfileKind::PolyBump => RadialProfile::poly_bump(a, b),
        }
    }
}

/// A family of normal-graph competitors.
#[derive(Debug, Clone, PartialEq)]
pub struct CompetitorFamily {
    pub profile: ProfileKind,
    /// Support as fractions of the cone radius that fits the window.
    pub support: (f64, f64),
    pub amplitudes: Vec<f64>,
    pub r: f64,
}

pub const DEFAULT_AMPLITUDES: [f64; 4] = [0.0, 0.01, 0.02, 0.05];
pub const DEFAULT_SUPPORT: (f64, f64) = (0.3, 0.8);

impl CompetitorFamily {
    pub fn new(profile: ProfileKind, r: f64, amplitudes: Vec<f64>) -> Self {
        CompetitorFamily { profile, support: DEFAULT_SUPPORT, amplitudes, r }
    }

    pub fn phi(&self, cone: &ConeParams) -> Result<RadialProfile> {
        let rw = window_cone_radius(cone, self.r);
        self.profile.build(self.support.0 * rw, self.support.1 * rw)
    }

    pub fn curves(&self, cone: ConeParams) -> Result<Vec<ProfileCurve>> {
        let phi = self.phi(&cone)?;
        self.amplitudes.iter().map(|&t| normal_graph(&phi, t, cone, self.r)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::quadratic_form;

    fn sine_graph(cone: ConeParams, t: f64) -> ProfileCurve {
        let rw = window_cone_radius(&cone, 1.0);
        let phi = RadialProfile::sine(0.3 * rw, 0.8 * rw).unwrap();
        normal_graph(&phi, t, cone, 1.0).unwrap()
    }

    #[test]
    fn window_volume_is_product_of_balls() {
        for cone in ConeParams::all_certified() {
            let v = axisym_volume(&AxisymRegion::Window { r: 1.3 }, &cone, QuadSpec::default()).unwrap();
            let exact = unit_ball_volume(cone.k()) * unit_ball_volume(cone.h()) * 1.3f64.powi(cone.m() as i32);
            assert!((v - exact).abs() < 1e-12 * exact, "{cone}");
        }
    }

    #[test]
    fn volume_and_perimeter_scale() {
        let cone = ConeParams::new(3, 5).unwrap();
        let poly = vec![[0.1, 0.2], [0.6, 0.3], [0.4, 0.9]];
        let lam = 1.9;
        let scaled: Vec<[f64; 2]> = poly.iter().map(|p| [lam * p[0], lam * p[1]]).collect();
        let q = QuadSpec::default();
        let v = axisym_volume(&AxisymRegion::Polygon(poly.clone()), &cone, q).unwrap();
        let vs = axisym_volume(&AxisymRegion::Polygon(scaled), &cone, q).unwrap();
        assert!((vs - lam.powi(8) * v).abs() < 1e-12 * vs);
        let c = ProfileCurve::polyline(cone, poly).unwrap();
        let p = axisym_perimeter(&c, 10.0, q).unwrap();
        let ps = axisym_perimeter(&c.dilate(lam).unwrap(), 10.0, q).unwrap();
        assert!((ps - lam.powi(7) * p).abs() < 1e-12 * ps);
    }

    #[test]
    fn degenerate_and_invalid_curves() {
        let cone = ConeParams::new(2, 7).unwrap();
        let c = ProfileCurve::polyline(cone, vec![[0.3, 0.3], [0.3, 0.3]]).unwrap();
        assert_eq!(axisym_perimeter(&c, 1.0, QuadSpec::default()).unwrap(), 0.0);
        assert_eq!(ProfileCurve::polyline(cone, vec![[-0.1, 0.3]]), Err(Error::OutsideQuarterPlane));
        let unbounded = AxisymRegion::Polygon(vec![[0.0, 0.0], [f64::INFINITY, 0.0], [1.0, 1.0]]);
        assert_eq!(axisym_volume(&unbounded, &cone, QuadSpec::default()), Err(Error::UnboundedRegion));
    }

    #[test]
    fn cone_line_matches_graph_at_zero_amplitude() {
        for cone in ConeParams::all_certified() {
            let rw = window_cone_radius(&cone, 1.0);
            let line = axisym_perimeter(&ProfileCurve::cone_line(cone, 2.0 * rw), 1.0, QuadSpec::default()).unwrap();
            let graph = axisym_perimeter(&sine_graph(cone, 0.0), 1.0, QuadSpec::default()).unwrap();
            assert!((line - graph).abs() < 1e-12 * line, "{cone}");
        }
    }

    #[test]
    fn graph_volume_leading_order() {
        // |K Δ F| = t ∫ |φ| w(r τ) dr (1 + O(t)) and ∫ dist = (t^2/2) ∫ φ^2 w(r τ) dr (1 + O(t^2))
        let cone = ConeParams::new(5, 3).unwrap();
        let rw = window_cone_radius(&cone, 1.0);
        let phi = RadialProfile::sine(0.3 * rw, 0.8 * rw).unwrap();
        let (_, n) = quadratic_form(&phi, &cone, &GaussRule::new(6), 256).unwrap();
        let cw = cone.link_area();
        for t in [1e-3, 1e-4] {
            let d = between_graph(&phi, t, &cone, QuadSpec::default(), |_, _, s| s.abs());
            let lead = 0.5 * t * t * cw * n;
            assert!((d - lead).abs() < 10.0 * t * t * lead, "t = {t}");
        }
    }

    #[test]
    fn reflection_in_t() {
        let cone = ConeParams::new(2, 9).unwrap();
        let (a, b) = (sine_graph(cone, 0.02), sine_graph(cone, -0.02));
        let (pa, ta) = a.graph_parts().unwrap();
        let (pb, tb) = b.graph_parts().unwrap();
        for i in 1..20 {
            let r = 0.3 + 0.03 * i as f64;
            assert_eq!(ta * pa.value(r), -(tb * pb.value(r)));
        }
    }

    #[test]
    fn embeddedness_and_window_checks() {
        let cone = ConeParams::new(7, 2).unwrap();
        let rw = window_cone_radius(&cone, 1.0);
        let phi = RadialProfile::sine(0.3 * rw, 0.8 * rw).unwrap();
        assert!(matches!(normal_graph(&phi, 5.0, cone, 1.0), Err(Error::Embeddedness { .. })));
        let wide = RadialProfile::sine(0.3 * rw, 1.1 * rw).unwrap();
        assert!(matches!(normal_graph(&wide, 0.01, cone, 1.0), Err(Error::NotInWindow { .. })));
    }

    #[test]
    fn perimeter_identity_and_minimality() {
        for cone in ConeParams::all_certified() {
            for t in [0.01, 0.02, 0.05, -0.03] {
                let rep = perimeter_identity_check(&sine_graph(cone, t), 1.0, QuadSpec::default()).unwrap();
                assert!(rep.lhs > 0.0, "{cone} t={t}");
                assert!(rep.rhs_volume >= 0.0 && rep.rhs_boundary >= 0.0);
                assert!(rep.rel_gap < 1e-9, "{cone} t={t}: {rep:?}");
            }
        }
    }

    #[test]
    fn identity_gap_shrinks_with_mesh() {
        let cone = ConeParams::new(3, 5).unwrap();
        let curve = sine_graph(cone, 0.05);
        let gaps: Vec<f64> = [2usize, 4, 8, 16]
            .iter()
            .map(|&n| perimeter_identity_check(&curve, 1.0, QuadSpec { order: 2, panels: n }).unwrap().rel_gap)
            .collect();
        assert!(gaps.windows(2).all(|g| g[1] <= 0.5 * g[0]), "{gaps:?}");
    }

    #[test]
    fn zero_amplitude_is_all_zero() {
        let cone = ConeParams::new(2, 8).unwrap();
        let rep = stability_check(&sine_graph(cone, 0.0), 1.0, QuadSpec::default()).unwrap();
        assert_eq!((rep.delta_p, rep.vol_delta, rep.alpha, rep.delta, rep.ratio), (0.0, 0.0, 0.0, 0.0, 0.0));
        assert!(rep.stability_holds);
    }

    #[test]
    fn alpha_delta_are_dilation_invariant() {
        let cone = ConeParams::new(8, 2).unwrap();
        let c = sine_graph(cone, 0.03);
        let a = stability_check(&c, 1.0, QuadSpec::default()).unwrap();
        let b = stability_check(&c.dilate(2.5).unwrap(), 2.5, QuadSpec::default()).unwrap();
        assert!((a.alpha - b.alpha).abs() < 1e-11 * a.alpha);
        assert!((a.delta - b.delta).abs() < 1e-9 * a.delta);
    }

    #[test]
    fn slab_polygon_fills_window_for_large_eps() {
        let cone = ConeParams::new(3, 5).unwrap();
        let q = QuadSpec::default();
        let full = axisym_volume(&AxisymRegion::Window { r: 1.0 }, &cone, q).unwrap();
        let slab = axisym_volume(&AxisymRegion::Slab { r: 1.0, eps: 10.0 }, &cone, q).unwrap();
        assert!((slab - full).abs() < 1e-12 * full);
        assert_eq!(axisym_volume(&AxisymRegion::Slab { r: 1.0, eps: 0.0 }, &cone, q).unwrap(), 0.0);
    }
}
