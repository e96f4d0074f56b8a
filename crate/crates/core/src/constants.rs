//! Explicit constants of the quantitative stability inequality `α^2 <= C δ`:
//! the slab volume `|H_R ∩ {p < ε}|` and its closed-form bound, the ε
//! optimization and the final constant `C = 7^2 12^2 10^20`.

use num::{BigInt, ToPrimitive};

use crate::certification::claimed_constant;
use crate::cone::{unit_ball_volume, unit_ball_volume_interval, ConeParams};
use crate::error::{Error, Result};
use crate::exact::Surd;
use crate::interval::Interval;
use crate::quadrature::GaussRule;
use crate::variation::VariationReport;

/// Uniform coefficient of the slab and perimeter terms.
pub const UNIFORM_COEFFICIENT: f64 = 7e10;

/// `C = (7 · 12 · 10^10)^2 = 7^2 · 12^2 · 10^20`, exactly.
pub fn stability_constant() -> BigInt {
    let base = BigInt::from(7 * 12) * BigInt::from(10).pow(10);
    &base * &base
}

pub fn stability_constant_f64() -> f64 {
    stability_constant().to_f64().unwrap()
}

/// `|H_R ∩ {p < ε}|`.
///
/// For fixed `r_y` the admissible `r_x` form an interval, whose `k`-ball
/// shell volume is `ω_k (hi^k - lo^k)`; the remaining `r_y` integral is a
/// piecewise polynomial integrated exactly between its breakpoints.
pub fn slab_volume(cone: &ConeParams, r: f64, eps: f64) -> f64 {
    if eps <= 0.0 || r <= 0.0 {
        return 0.0;
    }
    let (k, h) = (cone.k(), cone.h());
    let a = ((k - 1) as f64).sqrt();
    let b = ((h - 1) as f64).sqrt();
    let (wk, wh) = (unit_ball_volume(k), unit_ball_volume(h));
    let mut breaks = vec![0.0, r, b * eps, b * (r / a - eps), b * (r / a + eps)];
    breaks.retain(|y| (0.0..=r).contains(y));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let rule = GaussRule::new(8);
    let mut total = 0.0;
    for seg in breaks.windows(2) {
        total += rule.integrate(seg[0], seg[1], |y| {
            let lo = (a * (y / b - eps)).clamp(0.0, r);
            let hi = (a * (y / b + eps)).clamp(0.0, r);
            h as f64 * wh * y.powi(h as i32 - 1) * wk * (hi.powi(k as i32) - lo.powi(k as i32))
        });
    }
    total
}

/// The two pieces of the closed-form slab bound: `y` inside and outside `B_{ε sqrt(h-1)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabBoundParts {
    /// `2^k ε^(h+k) ω_h (h-1)^(h/2) · ω_k (k-1)^(k/2)`
    pub inner: f64,
    /// `2^k h ω_h ε R^(m-1) / ((h-1)^((k-1)/2) (m-1)) · ω_k (k-1)^(k/2)`
    pub outer: f64,
}

pub fn slab_bound_parts(cone: &ConeParams, r: f64, eps: f64) -> SlabBoundParts {
    let (k, h, m) = (cone.k() as i32, cone.h() as i32, cone.m() as i32);
    let (kf, hf, mf) = (k as f64, h as f64, m as f64);
    let (wk, wh) = (unit_ball_volume(cone.k()), unit_ball_volume(cone.h()));
    let x_ball = wk * (kf - 1.0).powf(kf / 2.0);
    let two_k = 2f64.powi(k);
    let inner = two_k * eps.powi(h + k) * wh * (hf - 1.0).powf(hf / 2.0) * x_ball;
    let outer = two_k * hf * wh * eps * r.powi(m - 1) / ((hf - 1.0).powf((kf - 1.0) / 2.0) * (mf - 1.0)) * x_ball;
    SlabBoundParts { inner, outer }
}

/// `2^k ω_k ω_h (k-1)^(k/2) (h-1)^(h/2) ε (ε^(m-1) + h R^(m-1) / ((h-1)^((m-1)/2) (m-1)))`.
pub fn slab_bound_closed(cone: &ConeParams, r: f64, eps: f64) -> f64 {
    let (k, h, m) = (cone.k() as f64, cone.h() as f64, cone.m() as f64);
    let lead = 2f64.powf(k)
        * unit_ball_volume(cone.k())
        * unit_ball_volume(cone.h())
        * (k - 1.0).powf(k / 2.0)
        * (h - 1.0).powf(h / 2.0);
    lead * eps * (eps.powf(m - 1.0) + h * r.powf(m - 1.0) / ((h - 1.0).powf((m - 1.0) / 2.0) * (m - 1.0)))
}

/// Exact inner integral `∫_{B_{ε sqrt(h-1)}} (|y|/sqrt(h-1) + ε)^k dy`, by quadrature of
/// its radial polynomial.
pub fn slab_inner_integral(cone: &ConeParams, eps: f64) -> f64 {
    let (k, h) = (cone.k() as i32, cone.h());
    let b = ((h - 1) as f64).sqrt();
    let rule = GaussRule::new(8);
    rule.integrate(0.0, eps * b, |rho| {
        h as f64 * unit_ball_volume(h) * rho.powi(h as i32 - 1) * (rho / b + eps).powi(k)
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabRow {
    pub cone: ConeParams,
    pub r: f64,
    pub eps: f64,
    pub exact_volume: f64,
    pub closed_bound: f64,
    pub parts: SlabBoundParts,
}

/// Relative rounding allowance; for `k = 2` the outer bound is an identity.
pub const SLAB_REL_TOL: f64 = 1e-12;

impl SlabRow {
    pub fn holds(&self) -> bool {
        self.exact_volume <= self.closed_bound * (1.0 + SLAB_REL_TOL)
    }
}

pub fn slab_row(cone: &ConeParams, r: f64, eps: f64) -> SlabRow {
    SlabRow {
        cone: *cone,
        r,
        eps,
        exact_volume: slab_volume(cone, r, eps),
        closed_bound: slab_bound_closed(cone, r, eps),
        parts: slab_bound_parts(cone, r, eps),
    }
}

/// `ε ∈ {10^-3, 10^-2.5, ..., 10^-0.5}`.
pub fn default_epsilons() -> Vec<f64> {
    (0..6).map(|i| 10f64.powf(-3.0 + 0.5 * i as f64)).collect()
}

/// `max over t ∈ grid ⊂ (0, 1)` of `(1+t)^k - (1-t)^k - 2^k t`; nonpositive when the
/// elementary bound holds.
pub fn binomial_gap(k: i32, samples: usize) -> f64 {
    (1..samples)
        .map(|i| {
            let t = i as f64 / samples as f64;
            (1.0 + t).powi(k) - (1.0 - t).powi(k) - 2f64.powi(k) * t
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaRegime {
    /// `δ >= 36`: `α <= ω_k ω_h <= 6 sqrt(δ)`.
    Saturated,
    /// `δ < 36`: `ε = R sqrt(δ/36)`.
    Optimized,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaChain {
    pub delta: f64,
    pub regime: AlphaRegime,
    pub eps_opt: Option<f64>,
    pub alpha_bound: f64,
    /// `7·10^10 (R δ / ε + 36 ε / R)` at `ε_opt`.
    pub intermediate: Option<f64>,
    /// `R δ / ε + 36 ε / R` at `ε_opt` and `12 sqrt(δ)`.
    pub am_gm: Option<(f64, f64)>,
    /// `ε_opt < 35^(1/13) R`
    pub gate_ok: bool,
}

pub fn alpha_bound_chain(r: f64, delta: f64) -> Result<AlphaChain> {
    if !(delta >= 0.0) || !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("need δ >= 0 and R > 0, got δ = {delta}, R = {r}")));
    }
    if delta >= 36.0 {
        return Ok(AlphaChain {
            delta,
            regime: AlphaRegime::Saturated,
            eps_opt: None,
            alpha_bound: 6.0 * delta.sqrt(),
            intermediate: None,
            am_gm: None,
            gate_ok: true,
        });
    }
    let eps = r * (delta / 36.0).sqrt();
    let gate_ok = (eps / r).powi(13) < 35.0;
    let sum = if eps > 0.0 { r * delta / eps + 36.0 * eps / r } else { 0.0 };
    Ok(AlphaChain {
        delta,
        regime: AlphaRegime::Optimized,
        eps_opt: Some(eps),
        alpha_bound: 7.0 * 12.0 * 1e10 * delta.sqrt(),
        intermediate: Some(UNIFORM_COEFFICIENT * sum),
        am_gm: Some((sum, 12.0 * delta.sqrt())),
        gate_ok,
    })
}

/// Per-cone coefficients of `|K Δ F| <= A R^2/ε ΔP + B_ε ε^m + B_R ε R^(m-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeCoefficients {
    pub cone: ConeParams,
    /// `l / c_{k,h}`
    pub perimeter: Interval,
    /// `2^k ω_k ω_h (k-1)^(k/2) (h-1)^(h/2)`
    pub slab_eps: Interval,
    /// `slab_eps · h / ((h-1)^((m-1)/2) (m-1))`
    pub slab_r: Interval,
    /// Each coefficient is below the uniform `7·10^10`.
    pub uniform_ok: bool,
    /// `l / c <= 2 · 11^5 sqrt(11)`, checked exactly.
    pub perimeter_within_display: bool,
    /// `slab_eps <= 2^11 6^2 10^(11/2) 2^(3/2)`.
    pub slab_eps_within_display: bool,
    /// `slab_r <= (3/6) · 2^11 6^2 10^(11/2) 2^(3/2)`.
    pub slab_r_within_display: bool,
}

fn ipow_half(base: i64, num: u32) -> Interval {
    // base^(num/2)
    let b = Interval::point(base as f64);
    let whole = b.powi(num / 2);
    if num % 2 == 1 {
        whole * b.sqrt()
    } else {
        whole
    }
}

pub fn cone_coefficients(cone: &ConeParams) -> Result<ConeCoefficients> {
    let (k, h, m) = (cone.k() as i64, cone.h() as i64, cone.m() as i64);
    let c = claimed_constant(cone)?;
    // l^2 = (k + h - 2)/((h-1)(k-1))
    let l = Surd::sqrt_of(&num::BigRational::new((m - 2).into(), ((h - 1) * (k - 1)).into()));
    let l_over_c = l / c;
    let display_perimeter = Surd::int(2 * 161_051) * Surd::sqrt_int(11);
    let perimeter = l_over_c.to_interval();

    let two_k = Interval::point(2f64.powi(k as i32));
    let slab_eps = two_k
        * unit_ball_volume_interval(cone.k())
        * unit_ball_volume_interval(cone.h())
        * ipow_half(k - 1, k as u32)
        * ipow_half(h - 1, h as u32);
    let slab_r = slab_eps * Interval::point(h as f64) / (ipow_half(h - 1, (m - 1) as u32) * Interval::point((m - 1) as f64));

    let display_slab = Interval::point(2f64.powi(11) * 36.0) * ipow_half(10, 11) * ipow_half(2, 3);
    let display_slab_r = display_slab * Interval::ratio(3, 6);
    let u = UNIFORM_COEFFICIENT;
    Ok(ConeCoefficients {
        cone: *cone,
        perimeter,
        slab_eps,
        slab_r,
        uniform_ok: perimeter.hi < u && slab_eps.hi < u && slab_r.hi < u,
        perimeter_within_display: l_over_c <= display_perimeter,
        slab_eps_within_display: slab_eps.hi <= display_slab.lo,
        slab_r_within_display: slab_r.hi <= display_slab_r.lo,
    })
}

/// `ω_j` with its enclosure and whether `ω_j < 6` is certified.
pub fn omega_table(max_dim: usize) -> Vec<(usize, f64, Interval, bool)> {
    (1..=max_dim)
        .map(|j| {
            let w = unit_ball_volume_interval(j);
            (j, unit_ball_volume(j), w, w.hi < 6.0)
        })
        .collect()
}

/// The covering chain `|K Δ F| <= l R^2 / (c ε) ΔP + |H_R ∩ {p < ε}|` on a competitor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoveringCheck {
    pub eps: f64,
    pub lhs: f64,
    pub perimeter_term: f64,
    pub slab_term: f64,
    pub holds: bool,
}

pub fn covering_check(report: &VariationReport, eps: f64) -> Result<CoveringCheck> {
    let cone = report.cone;
    let c = claimed_constant(&cone)?.to_f64();
    let perimeter_term = cone.l_constant() * report.r * report.r / (c * eps) * report.delta_p;
    let slab_term = slab_volume(&cone, report.r, eps);
    let lhs = report.vol_delta;
    Ok(CoveringCheck { eps, lhs, perimeter_term, slab_term, holds: lhs <= perimeter_term + slab_term })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variation::{axisym_volume, AxisymRegion, QuadSpec};

    #[test]
    fn constant_value() {
        let c = stability_constant();
        assert_eq!(c, BigInt::from(49 * 144) * BigInt::from(10).pow(20));
        assert_eq!(c.to_string(), format!("7056{}", "0".repeat(20)));
        assert!((stability_constant_f64() - 7.056e23).abs() < 1e9);
    }

    #[test]
    fn slab_volume_two_routes_agree() {
        for cone in ConeParams::all_certified() {
            for eps in default_epsilons() {
                let a = slab_volume(&cone, 1.0, eps);
                let b = axisym_volume(&AxisymRegion::Slab { r: 1.0, eps }, &cone, QuadSpec::default()).unwrap();
                assert!((a - b).abs() <= 1e-11 * b.max(1e-300), "{cone} eps={eps}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn slab_limits() {
        for cone in ConeParams::all_certified() {
            assert_eq!(slab_volume(&cone, 1.0, 0.0), 0.0);
            let full = unit_ball_volume(cone.k()) * unit_ball_volume(cone.h()) * 1.5f64.powi(cone.m() as i32);
            assert!((slab_volume(&cone, 1.5, 50.0) - full).abs() < 1e-12 * full);
        }
    }

    #[test]
    fn slab_bound_dominates_on_grid() {
        for cone in ConeParams::all_certified() {
            for eps in default_epsilons() {
                let row = slab_row(&cone, 1.0, eps);
                assert!(row.holds(), "{cone} eps={eps}: {row:?}");
                assert!(row.parts.inner >= 0.0 && row.parts.outer >= 0.0);
                assert!(((row.parts.inner + row.parts.outer) - row.closed_bound).abs() <= 1e-12 * row.closed_bound);
            }
        }
    }

    #[test]
    fn inner_part_dominates_inner_integral() {
        let cone = ConeParams::new(2, 7).unwrap();
        let eps = 0.1;
        let exact = unit_ball_volume(2) * slab_inner_integral(&cone, eps);
        let parts = slab_bound_parts(&cone, 1.0, eps);
        assert!(exact <= parts.inner, "{exact} > {}", parts.inner);
        // the same bound with (h-1)^(k/2) in place of (h-1)^(h/2) is too small here
        let k_half = parts.inner / 6f64.powf(3.5) * 6f64.powf(1.0);
        assert!(exact > k_half);
    }

    #[test]
    fn bound_is_monotone() {
        let cone = ConeParams::new(5, 3).unwrap();
        let e = default_epsilons();
        for w in e.windows(2) {
            assert!(slab_bound_closed(&cone, 1.0, w[1]) > slab_bound_closed(&cone, 1.0, w[0]));
        }
        assert!(slab_bound_closed(&cone, 2.0, 0.1) > slab_bound_closed(&cone, 1.0, 0.1));
    }

    #[test]
    fn elementary_binomial_bound() {
        for k in 2..=11 {
            assert!(binomial_gap(k, 10_000) <= 1e-12, "k = {k}");
        }
    }

    #[test]
    fn alpha_chain_cases() {
        let sat = alpha_bound_chain(1.0, 36.0).unwrap();
        assert_eq!(sat.regime, AlphaRegime::Saturated);
        assert_eq!(sat.alpha_bound, 36.0);
        let just = alpha_bound_chain(1.0, 36.0f64.next_down()).unwrap();
        assert!((just.eps_opt.unwrap() - 1.0).abs() < 1e-15);
        assert!(just.gate_ok);
        let zero = alpha_bound_chain(1.0, 0.0).unwrap();
        assert_eq!(zero.alpha_bound, 0.0);
        let c = stability_constant_f64();
        for i in 1..=1000 {
            let d = 0.1 * i as f64;
            let ch = alpha_bound_chain(2.0, d).unwrap();
            assert!(ch.alpha_bound * ch.alpha_bound <= c * d * (1.0 + 1e-15));
            if let Some((lhs, rhs)) = ch.am_gm {
                assert!((lhs - rhs).abs() <= 1e-14 * rhs, "δ = {d}");
            }
        }
        assert!(alpha_bound_chain(1.0, -1.0).is_err());
    }

    #[test]
    fn omega_products_and_table() {
        for (j, _, _, below) in omega_table(16) {
            if (2..=11).contains(&j) {
                assert!(below, "ω_{j}");
            }
        }
        for cone in ConeParams::all_certified() {
            let p = unit_ball_volume_interval(cone.k()) * unit_ball_volume_interval(cone.h());
            assert!(p.hi <= 36.0);
        }
    }

    #[test]
    fn per_cone_coefficients() {
        for cone in ConeParams::all_certified() {
            let c = cone_coefficients(&cone).unwrap();
            assert!(c.uniform_ok, "{c:?}");
            assert!(c.perimeter_within_display, "{cone}");
            assert!(c.slab_eps_within_display, "{cone}");
        }
    }
}
