//! Radial stability spectrum of the cone.
//!
//! For radial `φ` the stability form on `M ∩ B_R` is, up to the link area,
//! `Q = ∫ (φ'^2 - (m-2) φ^2 / r^2) r^(m-2) dr` against `N = ∫ φ^2 r^(m-2) dr`.
//! With `s = ln r` and `φ = e^(-(m-3)s/2) χ` this becomes
//! `Q = ∫ χ'^2 + a χ^2 ds`, `N = ∫ χ^2 e^(2s) ds`, `a = (m-3)^2/4 - (m-2)`,
//! a regular problem on a uniform grid in `s`. The smallest Dirichlet
//! eigenvalue on `[r_min, R]` is found by inverse power iteration on the
//! resulting tridiagonal pencil.

use crate::certification::claimed_constant;
use crate::cone::ConeParams;
use crate::error::{Error, Result};
use crate::exact::Surd;
use crate::keyvalue::KvDoc;
use crate::profile::RadialProfile;
use crate::quadrature::GaussRule;
use crate::variation::{between_graph, delta_perimeter, normal_graph, QuadSpec};

/// Inner cutoff as a fraction of `R`.
pub const DEFAULT_R_MIN_RATIO: f64 = 1e-6;
const MAX_ITERATIONS: usize = 20_000;

/// `(Q, N)` for a radial profile with the link area set to 1; `mu` shifts the
/// potential to `(m - 2 - mu)/r^2` (an angular mode with link eigenvalue `mu`).
pub fn quadratic_form_mode(
    phi: &RadialProfile,
    cone: &ConeParams,
    mu: f64,
    rule: &GaussRule,
    panels: usize,
) -> Result<(f64, f64)> {
    let (a, b) = phi.support();
    if a <= 0.0 {
        return Err(Error::ProfileSupport { a, b, reason: "support touches the apex" });
    }
    let m = cone.m() as i32;
    let pot = (m - 2) as f64 - mu;
    let breaks = phi.breakpoints();
    let q = rule.composite(&breaks, panels, |r| {
        let (f, df) = (phi.value(r), phi.deriv(r));
        (df * df - pot * f * f / (r * r)) * r.powi(m - 2)
    });
    let n = rule.composite(&breaks, panels, |r| phi.value(r).powi(2) * r.powi(m - 2));
    Ok((q, n))
}

pub fn quadratic_form(phi: &RadialProfile, cone: &ConeParams, rule: &GaussRule, panels: usize) -> Result<(f64, f64)> {
    quadratic_form_mode(phi, cone, 0.0, rule, panels)
}

/// Eigenvalues of the Laplacian on the link `S^{k-1}(ρ_x) x S^{h-1}(ρ_y)`,
/// `ρ_x^2 = (k-1)/(m-2)`, `ρ_y^2 = (h-1)/(m-2)`, ascending with multiplicity
/// collapsed, up to `count` values.
pub fn link_eigenvalues(cone: &ConeParams, count: usize) -> Vec<f64> {
    let (k, h, m) = (cone.k() as f64, cone.h() as f64, cone.m() as f64);
    let sx = |i: f64| i * (i + k - 2.0) * (m - 2.0) / (k - 1.0);
    let sy = |j: f64| j * (j + h - 2.0) * (m - 2.0) / (h - 1.0);
    let mut all = Vec::new();
    let top = count + 1;
    for i in 0..top {
        for j in 0..top {
            all.push(sx(i as f64) + sy(j as f64));
        }
    }
    all.sort_by(f64::total_cmp);
    all.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));
    all.truncate(count);
    all
}

/// First nonzero link eigenvalue.
pub fn first_link_eigenvalue(cone: &ConeParams) -> f64 {
    link_eigenvalues(cone, 2)[1]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteEigen {
    pub lambda: f64,
    pub iterations: usize,
}

/// Smallest eigenvalue of the discretized radial problem on `[ratio R, R]` with
/// `n` intervals in `ln r` and potential shift `mu`.
pub fn discrete_lambda(cone: &ConeParams, r: f64, n: usize, r_min_ratio: f64, mu: f64) -> Result<DiscreteEigen> {
    if n < 64 {
        return Err(Error::InvalidArgument(format!("grid size {n} must be at least 64")));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument(format!("radius {r} must be positive")));
    }
    if !(r_min_ratio > 0.0 && r_min_ratio < 1.0) {
        return Err(Error::InvalidArgument(format!("inner cutoff ratio {r_min_ratio}")));
    }
    let a = cone.hardy_floor() + mu;
    let len = -r_min_ratio.ln();
    let ds = len / n as f64;
    let inv = 1.0 / (ds * ds);
    let diag = 2.0 * inv + a;
    let off = -inv;
    let size = n - 1;
    // B = R^2 diag(e^(2σ)), σ = s - ln R
    let weight: Vec<f64> =
        (1..n).map(|i| r * r * (2.0 * (-len + ds * i as f64)).exp()).collect();

    let mut x: Vec<f64> = (1..n).map(|i| (-len + ds * i as f64).exp()).collect();
    let mut rhs = vec![0.0; size];
    let mut cp = vec![0.0; size];
    let mut prev = f64::INFINITY;
    let mut prev_change = f64::INFINITY;
    for it in 1..=MAX_ITERATIONS {
        for i in 0..size {
            rhs[i] = weight[i] * x[i];
        }
        thomas(diag, off, &rhs, &mut cp, &mut x);
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v /= norm);
        let lambda = rayleigh(diag, off, &weight, &x);
        let change = (lambda - prev).abs();
        // Converged, or stalled at the rounding floor of the Rayleigh quotient.
        if change <= 1e-14 * lambda || (change < 1e-11 * lambda && change >= prev_change) {
            return Ok(DiscreteEigen { lambda, iterations: it });
        }
        prev = lambda;
        prev_change = change;
    }
    Err(Error::Eigensolver { iterations: MAX_ITERATIONS })
}

/// Solves the constant-coefficient symmetric tridiagonal system in place into `out`.
fn thomas(diag: f64, off: f64, rhs: &[f64], cp: &mut [f64], out: &mut [f64]) {
    let n = rhs.len();
    cp[0] = off / diag;
    out[0] = rhs[0] / diag;
    for i in 1..n {
        let den = diag - off * cp[i - 1];
        cp[i] = off / den;
        out[i] = (rhs[i] - off * out[i - 1]) / den;
    }
    for i in (0..n - 1).rev() {
        out[i] -= cp[i] * out[i + 1];
    }
}

fn rayleigh(diag: f64, off: f64, weight: &[f64], x: &[f64]) -> f64 {
    let n = x.len();
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        let mut ax = diag * x[i];
        if i > 0 {
            ax += off * x[i - 1];
        }
        if i + 1 < n {
            ax += off * x[i + 1];
        }
        num += x[i] * ax;
        den += weight[i] * x[i] * x[i];
    }
    num / den
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub cone: ConeParams,
    pub r: f64,
    pub grid: usize,
    pub r_min_ratio: f64,
    pub lambda_estimate: f64,
    pub lambda_r2: f64,
    /// Richardson combination of grids `n/2` and `n`.
    pub lambda_extrapolated: f64,
    pub extrapolation_order: u32,
    pub iterations: usize,
    pub hardy_floor: f64,
    pub claimed_c: Option<Surd>,
    /// `λ R^2 / c_{k,h}` for certified cones.
    pub margin_factor: Option<f64>,
    pub link_mu1: f64,
    /// Smallest eigenvalue in the first non-radial angular sector, times `R^2`.
    pub angular_lambda_r2: f64,
}

pub fn lambda_estimate(cone: ConeParams, r: f64, n: usize) -> Result<SpectrumReport> {
    lambda_estimate_with(cone, r, n, DEFAULT_R_MIN_RATIO)
}

pub fn lambda_estimate_with(cone: ConeParams, r: f64, n: usize, r_min_ratio: f64) -> Result<SpectrumReport> {
    if n % 2 != 0 || n < 128 {
        return Err(Error::InvalidArgument(format!("grid size {n} must be even and at least 128")));
    }
    let fine = discrete_lambda(&cone, r, n, r_min_ratio, 0.0)?;
    let coarse = discrete_lambda(&cone, r, n / 2, r_min_ratio, 0.0)?;
    let mu1 = first_link_eigenvalue(&cone);
    let angular = discrete_lambda(&cone, r, n, r_min_ratio, mu1)?;
    let lambda_extrapolated = (4.0 * fine.lambda - coarse.lambda) / 3.0;
    let lambda_r2 = fine.lambda * r * r;
    let claimed_c = claimed_constant(&cone).ok();
    let margin_factor = claimed_c.as_ref().map(|c| lambda_r2 / c.to_f64());
    Ok(SpectrumReport {
        cone,
        r,
        grid: n,
        r_min_ratio,
        lambda_estimate: fine.lambda,
        lambda_r2,
        lambda_extrapolated,
        extrapolation_order: 2,
        iterations: fine.iterations,
        hardy_floor: cone.hardy_floor(),
        claimed_c,
        margin_factor,
        link_mu1: mu1,
        angular_lambda_r2: angular.lambda * r * r,
    })
}

impl SpectrumReport {
    pub fn to_kv(&self) -> KvDoc {
        let mut d = KvDoc::new();
        d.set("cone.k", self.cone.k())
            .set("cone.h", self.cone.h())
            .set_f64("R", self.r)
            .set("grid", self.grid)
            .set_f64("r_min_ratio", self.r_min_ratio)
            .set_f64("lambda_estimate", self.lambda_estimate)
            .set_f64("lambda_r2", self.lambda_r2)
            .set_f64("lambda_extrapolated", self.lambda_extrapolated)
            .set("extrapolation_order", self.extrapolation_order)
            .set("iterations", self.iterations)
            .set_f64("hardy_floor", self.hardy_floor)
            .set_opt("claimed_c", self.claimed_c.as_ref())
            .set_opt("margin_factor", self.margin_factor.map(crate::keyvalue::fmt_f64))
            .set_f64("link_mu1", self.link_mu1)
            .set_f64("angular_lambda_r2", self.angular_lambda_r2);
        d
    }

    pub fn to_text(&self) -> String {
        self.to_kv().render()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let d = KvDoc::parse(text)?;
        Ok(SpectrumReport {
            cone: ConeParams::new(d.get_parsed("cone.k")?, d.get_parsed("cone.h")?)?,
            r: d.get_parsed("R")?,
            grid: d.get_parsed("grid")?,
            r_min_ratio: d.get_parsed("r_min_ratio")?,
            lambda_estimate: d.get_parsed("lambda_estimate")?,
            lambda_r2: d.get_parsed("lambda_r2")?,
            lambda_extrapolated: d.get_parsed("lambda_extrapolated")?,
            extrapolation_order: d.get_parsed("extrapolation_order")?,
            iterations: d.get_parsed("iterations")?,
            hardy_floor: d.get_parsed("hardy_floor")?,
            claimed_c: d.get_opt("claimed_c")?,
            margin_factor: d.get_opt("margin_factor")?,
            link_mu1: d.get_parsed("link_mu1")?,
            angular_lambda_r2: d.get_parsed("angular_lambda_r2")?,
        })
    }
}

/// Below the crossover near `t = 0.02` where the quartic remainder term stops dominating.
pub const DEFAULT_TAYLOR_TS: [f64; 5] = [0.002, 0.001, 0.0005, 0.00025, 0.000125];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorRow {
    pub t: f64,
    pub delta_p: f64,
    /// `2 ΔP / t^2`
    pub quotient: f64,
    /// `|ΔP - t^2 Q / 2|`
    pub perimeter_remainder: f64,
    /// `∫_{K Δ F} dist`
    pub dist_volume: f64,
    /// `|∫ dist - t^2 N / 2|`
    pub volume_remainder: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaylorReport {
    pub cone: ConeParams,
    /// Link area times the radial forms.
    pub q: f64,
    pub n: f64,
    pub rows: Vec<TaylorRow>,
    /// Limit of `2 ΔP / t^2`, extrapolated through the (up to) three smallest `t`.
    pub limit: f64,
    pub limit_rel_err: f64,
    pub perimeter_slope: f64,
    pub volume_slope: f64,
}

/// Value at `0` of the interpolating polynomial through `points`.
fn neville_at_zero(points: &[(f64, f64)]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let mut p: Vec<f64> = points.iter().map(|p| p.1).collect();
    for level in 1..p.len() {
        for i in 0..p.len() - level {
            let (xi, xj) = (xs[i], xs[i + level]);
            p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
        }
    }
    p[0]
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Compares the perimeter and `dist`-volume of normal graphs `t φ` with
/// `t^2 Q / 2` and `t^2 N / 2`. `t_values` should decrease by halving.
pub fn taylor_second_variation_check(
    cone: ConeParams,
    phi: &RadialProfile,
    t_values: &[f64],
    r: f64,
    quad: QuadSpec,
) -> Result<TaylorReport> {
    if t_values.len() < 2 || t_values.iter().any(|t| *t <= 0.0) {
        return Err(Error::InvalidArgument("need at least two positive amplitudes".into()));
    }
    let rule = GaussRule::new(quad.order);
    let (q0, n0) = quadratic_form(phi, &cone, &rule, quad.panels)?;
    let area = cone.link_area();
    let (q, n) = (area * q0, area * n0);
    let mut rows = Vec::with_capacity(t_values.len());
    for &t in t_values {
        normal_graph(phi, t, cone, r)?;
        let delta_p = delta_perimeter(phi, t, &cone, quad);
        let dist_volume = between_graph(phi, t, &cone, quad, |_, _, s| s.abs());
        rows.push(TaylorRow {
            t,
            delta_p,
            quotient: 2.0 * delta_p / (t * t),
            perimeter_remainder: (delta_p - 0.5 * t * t * q).abs(),
            dist_volume,
            volume_remainder: (dist_volume - 0.5 * t * t * n).abs(),
        });
    }
    let mut by_t = rows.clone();
    by_t.sort_by(|a, b| a.t.total_cmp(&b.t));
    let limit = neville_at_zero(&by_t.iter().take(3).map(|w| (w.t, w.quotient)).collect::<Vec<_>>());
    let perimeter_slope = loglog_slope(&rows.iter().map(|w| (w.t, w.perimeter_remainder)).collect::<Vec<_>>());
    let volume_slope = loglog_slope(&rows.iter().map(|w| (w.t, w.volume_remainder)).collect::<Vec<_>>());
    Ok(TaylorReport {
        cone,
        q,
        n,
        rows,
        limit,
        limit_rel_err: (limit - q).abs() / q.abs().max(1e-300),
        perimeter_slope,
        volume_slope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::gamma::gamma;
    use std::f64::consts::PI;

    /// `J_ν(x)` by its power series.
    fn bessel_j(nu: f64, x: f64) -> f64 {
        let mut sum = 0.0;
        let half = 0.5 * x;
        for j in 0..80 {
            let jf = j as f64;
            let term = (-1f64).powi(j) * half.powf(2.0 * jf + nu) / (gamma(jf + 1.0) * gamma(jf + nu + 1.0));
            sum += term;
            if term.abs() < 1e-18 * sum.abs() && j > 5 {
                break;
            }
        }
        sum
    }

    /// First positive zero of `J_ν` by scanning and bisection.
    fn first_bessel_zero(nu: f64) -> f64 {
        let mut a = nu.max(0.1);
        while bessel_j(nu, a) * bessel_j(nu, a + 0.05) > 0.0 {
            a += 0.05;
        }
        let mut b = a + 0.05;
        for _ in 0..200 {
            let c = 0.5 * (a + b);
            if bessel_j(nu, a) * bessel_j(nu, c) <= 0.0 {
                b = c;
            } else {
                a = c;
            }
        }
        0.5 * (a + b)
    }

    fn cones() -> Vec<ConeParams> {
        ConeParams::all_certified()
    }

    #[test]
    fn m8_matches_shifted_sine_eigenvalue() {
        // a = 1/4 at m = 8: eigenfunctions are sin(sqrt(λ)(r - r_min)) / r^3.
        let cone = ConeParams::new(3, 5).unwrap();
        let rep = lambda_estimate(cone, 1.0, 4096).unwrap();
        let exact = (PI / (1.0 - DEFAULT_R_MIN_RATIO)).powi(2);
        assert!((rep.lambda_extrapolated - exact).abs() < 1e-6 * exact, "{}", rep.lambda_extrapolated);
        assert!((rep.lambda_estimate - exact).abs() < 1e-3 * exact);
    }

    #[test]
    fn bessel_oracle_for_every_cone() {
        for cone in cones() {
            let nu = cone.hardy_floor().sqrt();
            let j = first_bessel_zero(nu);
            let rep = lambda_estimate(cone, 1.0, 4096).unwrap();
            let rel = (rep.lambda_extrapolated - j * j).abs() / (j * j);
            // m = 8 carries the r_min shift of about 2e-6
            assert!(rel < 5e-6, "{cone}: {} vs {}", rep.lambda_extrapolated, j * j);
        }
    }

    #[test]
    fn scale_invariance_on_matched_grids() {
        for cone in cones() {
            let base = lambda_estimate(cone, 1.0, 1024).unwrap().lambda_r2;
            for r in [0.5, 2.0] {
                let v = lambda_estimate(cone, r, 1024).unwrap().lambda_r2;
                assert!((v - base).abs() <= 1e-8 * base, "{cone} R={r}");
            }
        }
    }

    #[test]
    fn convergence_is_monotone_beyond_256() {
        let cone = ConeParams::new(9, 2).unwrap();
        let l: Vec<f64> = [256, 512, 1024, 2048, 4096]
            .iter()
            .map(|&n| discrete_lambda(&cone, 1.0, n, DEFAULT_R_MIN_RATIO, 0.0).unwrap().lambda)
            .collect();
        let diffs: Vec<f64> = l.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        assert!(diffs.windows(2).all(|d| d[1] < d[0]), "{diffs:?}");
        let r1 = (4.0 * l[3] - l[2]) / 3.0;
        let r2 = (4.0 * l[4] - l[3]) / 3.0;
        assert!((r1 - r2).abs() < 1e-6 * r2);
    }

    #[test]
    fn insensitive_to_inner_cutoff() {
        for cone in [ConeParams::new(5, 3).unwrap(), ConeParams::new(2, 11).unwrap()] {
            let a = lambda_estimate_with(cone, 1.0, 4096, 1e-5).unwrap().lambda_extrapolated;
            let b = lambda_estimate_with(cone, 1.0, 8192, 1e-7).unwrap().lambda_extrapolated;
            assert!((a - b).abs() < 1e-4 * b, "{cone}: {a} vs {b}");
        }
    }

    #[test]
    fn link_spectrum_and_angular_sector() {
        for cone in cones() {
            let mu = link_eigenvalues(&cone, 4);
            assert_eq!(mu[0], 0.0);
            assert!((mu[1] - (cone.m() - 2) as f64).abs() < 1e-12);
            let rep = lambda_estimate(cone, 1.0, 1024).unwrap();
            assert!(rep.angular_lambda_r2 > rep.lambda_r2);
        }
    }

    #[test]
    fn quadratic_form_examples() {
        let cone = ConeParams::new(3, 5).unwrap();
        let rule = GaussRule::new(6);
        let phi = RadialProfile::sine(0.5, 1.0).unwrap();
        let (q, n) = quadratic_form(&phi, &cone, &rule, 64).unwrap();
        let (q10, n10) = quadratic_form(&phi, &cone, &rule, 640).unwrap();
        assert!((q - q10).abs() < 1e-12 * q10.abs() && (n - n10).abs() < 1e-12 * n10);
        assert!(q / n >= cone.hardy_floor() / 1.0);
        assert!(q > 0.0);
        // dilation: Q -> λ^(m-3) Q, N -> λ^(m-1) N
        let lam = 1.7;
        let (ql, nl) = quadratic_form(&phi.dilate(lam).unwrap(), &cone, &rule, 64).unwrap();
        assert!((ql - lam.powi(5) * q).abs() < 1e-11 * ql.abs());
        assert!((nl - lam.powi(7) * n).abs() < 1e-11 * nl);
        // mode-1 sector has a larger quotient
        let mu = first_link_eigenvalue(&cone);
        let (qm, _) = quadratic_form_mode(&phi, &cone, mu, &rule, 64).unwrap();
        assert!(qm > q);
    }

    #[test]
    fn quadratic_form_of_zero_profile() {
        let cone = ConeParams::new(2, 7).unwrap();
        let zero = RadialProfile::sine_series(0.2, 0.8, vec![0.0]).unwrap();
        assert_eq!(quadratic_form(&zero, &cone, &GaussRule::new(4), 8).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn report_roundtrip() {
        let rep = lambda_estimate(ConeParams::new(7, 2).unwrap(), 1.0, 256).unwrap();
        let text = rep.to_text();
        assert_eq!(SpectrumReport::from_text(&text).unwrap(), rep);
    }

    #[test]
    fn neville_recovers_quadratic() {
        let f = |t: f64| 2.0 - 3.0 * t + 5.0 * t * t;
        let pts: Vec<(f64, f64)> = [0.1, 0.2, 0.4].iter().map(|&t| (t, f(t))).collect();
        assert!((neville_at_zero(&pts) - 2.0).abs() < 1e-13);
    }

    #[test]
    fn loglog_slope_of_power() {
        let pts: Vec<(f64, f64)> = [0.1, 0.05, 0.025].iter().map(|&x| (x, 3.0 * x * x * x)).collect();
        assert!((loglog_slope(&pts) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn taylor_quotient_approaches_form() {
        use crate::variation::window_cone_radius;
        for cone in [ConeParams::new(3, 5).unwrap(), ConeParams::new(2, 9).unwrap()] {
            let rw = window_cone_radius(&cone, 1.0);
            let phi = RadialProfile::sine(0.3 * rw, 0.8 * rw).unwrap();
            let rep = taylor_second_variation_check(cone, &phi, &DEFAULT_TAYLOR_TS, 1.0, QuadSpec::default()).unwrap();
            assert!(rep.q > 0.0);
            assert!(rep.limit_rel_err < 1e-3, "{cone}: {rep:?}");
            let last = rep.rows.last().unwrap();
            assert!((last.quotient - rep.q).abs() < 1e-3 * rep.q);
            assert!((2.0 * last.dist_volume / (last.t * last.t) - rep.n).abs() < 1e-3 * rep.n);
        }
    }

    #[test]
    fn taylor_rejects_bad_amplitudes() {
        let cone = ConeParams::new(3, 5).unwrap();
        let phi = RadialProfile::sine(0.3, 0.8).unwrap();
        assert!(taylor_second_variation_check(cone, &phi, &[0.01], 1.0, QuadSpec::default()).is_err());
        assert!(taylor_second_variation_check(cone, &phi, &[0.01, 0.0], 1.0, QuadSpec::default()).is_err());
        assert!(taylor_second_variation_check(cone, &phi, &[10.0, 5.0], 1.0, QuadSpec::default()).is_err());
    }
}
