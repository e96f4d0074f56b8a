//! Sweeps that combine the checks of one command, and their text and CSV renderings.

use crate::certification::claimed_constant;
use crate::cone::ConeParams;
use crate::constants::{
    alpha_bound_chain, binomial_gap, cone_coefficients, covering_check, omega_table, slab_row, stability_constant,
    AlphaRegime, ConeCoefficients, CoveringCheck, SlabRow,
};
use crate::error::{Error, Result};
use crate::keyvalue::{fmt_f64, KvDoc};
use crate::montecarlo::{slab_volume_mc, McEstimate};
use crate::spectrum::{lambda_estimate, taylor_second_variation_check, SpectrumReport, TaylorReport, DEFAULT_TAYLOR_TS};
use crate::variation::{stability_check, CompetitorFamily, ProfileKind, QuadSpec, VariationReport};

pub const IDENTITY_TOL: f64 = 1e-3;
pub const TAYLOR_LIMIT_TOL: f64 = 1e-3;
pub const TAYLOR_SLOPE_RANGE: (f64, f64) = (2.7, 3.3);
pub const SCALING_FACTORS: [f64; 3] = [0.5, 1.0, 2.0];
pub const SCALING_TOL: f64 = 1e-8;
pub const MARGIN_FACTOR_MIN: f64 = 1e2;
pub const HARDY_FRACTION: f64 = 0.9;

fn csv_string(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Output(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Output(e.to_string()))
}

fn slope_ok(s: f64) -> bool {
    (TAYLOR_SLOPE_RANGE.0..=TAYLOR_SLOPE_RANGE.1).contains(&s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariationRow {
    pub profile: ProfileKind,
    pub report: VariationReport,
    pub covering: Vec<CoveringCheck>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariationSweep {
    pub cone: ConeParams,
    pub r: f64,
    pub rows: Vec<VariationRow>,
    pub taylor: Vec<(ProfileKind, TaylorReport)>,
}

/// All profile families at the given amplitudes, with the covering chain at each `ε`
/// and the Taylor expansion of each profile.
pub fn variation_sweep(cone: ConeParams, r: f64, amplitudes: &[f64], epsilons: &[f64], quad: QuadSpec) -> Result<VariationSweep> {
    let mut rows = Vec::new();
    let mut taylor = Vec::new();
    for profile in ProfileKind::ALL {
        let family = CompetitorFamily::new(profile, r, amplitudes.to_vec());
        for curve in family.curves(cone)? {
            let report = stability_check(&curve, r, quad)?;
            let covering = epsilons.iter().map(|&e| covering_check(&report, e)).collect::<Result<Vec<_>>>()?;
            rows.push(VariationRow { profile, report, covering });
        }
        let phi = family.phi(&cone)?;
        taylor.push((profile, taylor_second_variation_check(cone, &phi, &DEFAULT_TAYLOR_TS, r, quad)?));
    }
    Ok(VariationSweep { cone, r, rows, taylor })
}

impl VariationSweep {
    /// Failed identities and inequalities. The `dist`-volume remainder order is
    /// reported in the table but is not one of them.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for row in &self.rows {
            let rep = &row.report;
            let tag = format!("{} {} t={}", self.cone, row.profile.name(), rep.t);
            if rep.t != 0.0 && rep.identity.rel_gap > IDENTITY_TOL {
                out.push(format!("{tag}: perimeter identity gap {:e}", rep.identity.rel_gap));
            }
            if rep.delta_p < 0.0 {
                out.push(format!("{tag}: negative perimeter change {:e}", rep.delta_p));
            }
            if !rep.divergence_bound_holds() {
                out.push(format!("{tag}: integrated divergence bound fails"));
            }
            if !rep.stability_holds {
                out.push(format!("{tag}: alpha^2 > C delta"));
            }
            for c in row.covering.iter().filter(|c| !c.holds) {
                out.push(format!("{tag}: covering chain fails at eps={}", c.eps));
            }
        }
        for (p, t) in &self.taylor {
            if t.limit_rel_err > TAYLOR_LIMIT_TOL {
                out.push(format!("{} {}: second-variation limit off by {:e}", self.cone, p.name(), t.limit_rel_err));
            }
            if !slope_ok(t.perimeter_slope) {
                out.push(format!("{} {}: perimeter remainder slope {}", self.cone, p.name(), t.perimeter_slope));
            }
        }
        out
    }

    pub fn to_csv(&self) -> Result<String> {
        let header = [
            "profile",
            "t",
            "delta_p",
            "vol_delta",
            "dist_volume",
            "identity_lhs",
            "identity_rhs",
            "identity_rel_gap",
            "divergence_integral",
            "alpha",
            "delta",
            "ratio",
            "stability_holds",
            "covering_holds",
            "covering_worst_fraction",
            "taylor_q",
            "taylor_limit",
            "taylor_limit_rel_err",
            "taylor_perimeter_slope",
            "taylor_volume_slope",
        ];
        let mut rows = Vec::new();
        for row in &self.rows {
            let rep = &row.report;
            let t = &self.taylor.iter().find(|(p, _)| *p == row.profile).expect("taylor per profile").1;
            let worst = row
                .covering
                .iter()
                .map(|c| {
                    let rhs = c.perimeter_term + c.slab_term;
                    if rhs > 0.0 {
                        c.lhs / rhs
                    } else {
                        0.0
                    }
                })
                .fold(0.0, f64::max);
            rows.push(vec![
                row.profile.name().to_string(),
                fmt_f64(rep.t),
                fmt_f64(rep.delta_p),
                fmt_f64(rep.vol_delta),
                fmt_f64(rep.dist_volume),
                fmt_f64(rep.identity.lhs),
                fmt_f64(rep.identity.rhs),
                fmt_f64(rep.identity.rel_gap),
                fmt_f64(rep.divergence_integral),
                fmt_f64(rep.alpha),
                fmt_f64(rep.delta),
                fmt_f64(rep.ratio),
                rep.stability_holds.to_string(),
                row.covering.iter().all(|c| c.holds).to_string(),
                fmt_f64(worst),
                fmt_f64(t.q),
                fmt_f64(t.limit),
                fmt_f64(t.limit_rel_err),
                fmt_f64(t.perimeter_slope),
                fmt_f64(t.volume_slope),
            ]);
        }
        csv_string(&header, &rows)
    }
}

/// `λ(R)` on grid `n` and `λ(sR) (sR)^2` for the scaling factors `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRun {
    pub report: SpectrumReport,
    pub scaling: Vec<(f64, f64)>,
}

pub fn spectrum_run(cone: ConeParams, r: f64, n: usize) -> Result<SpectrumRun> {
    let mut scaling = Vec::new();
    let mut report = None;
    for s in SCALING_FACTORS {
        let rep = lambda_estimate(cone, s * r, n)?;
        scaling.push((s * r, rep.lambda_r2));
        if s == 1.0 {
            report = Some(rep);
        }
    }
    Ok(SpectrumRun { report: report.expect("1 is a scaling factor"), scaling })
}

impl SpectrumRun {
    pub fn scaling_rel_dev(&self) -> f64 {
        let base = self.report.lambda_r2;
        self.scaling.iter().map(|(_, l)| (l - base).abs() / base.abs()).fold(0.0, f64::max)
    }

    pub fn bound_ok(&self) -> bool {
        match &self.report.claimed_c {
            Some(c) => self.report.lambda_r2 >= c.to_f64(),
            None => true,
        }
    }

    pub fn margin_ok(&self) -> bool {
        self.report.margin_factor.map_or(true, |f| f >= MARGIN_FACTOR_MIN)
    }

    pub fn hardy_ok(&self) -> bool {
        self.report.lambda_r2 >= HARDY_FRACTION * self.report.hardy_floor
    }

    pub fn to_text(&self) -> String {
        let mut d = self.report.to_kv();
        for (r, l) in &self.scaling {
            d.set_f64(format!("scaling.R={r}.lambda_r2"), *l);
        }
        d.set_f64("scaling.max_rel_dev", self.scaling_rel_dev())
            .set("check.bound", self.bound_ok())
            .set("check.margin_factor", self.margin_ok())
            .set("check.hardy", self.hardy_ok())
            .set("check.scaling", self.scaling_rel_dev() <= SCALING_TOL);
        d.render()
    }
}

/// Slab tables, per-cone coefficients and the derivation of `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantsReport {
    pub r: f64,
    pub slab: Vec<SlabRow>,
    pub coefficients: Vec<ConeCoefficients>,
    /// `(cone, ε, estimate)` cross-checks of the slab volume.
    pub monte_carlo: Vec<(ConeParams, f64, McEstimate)>,
}

pub const MC_EPS: f64 = 0.1;

pub fn constants_report(cones: &[ConeParams], r: f64, epsilons: &[f64], mc_samples: usize, seed: u64) -> Result<ConstantsReport> {
    let mut slab = Vec::new();
    let mut coefficients = Vec::new();
    let mut monte_carlo = Vec::new();
    for cone in cones {
        claimed_constant(cone)?;
        for &e in epsilons {
            slab.push(slab_row(cone, r, e));
        }
        coefficients.push(cone_coefficients(cone)?);
        if mc_samples > 0 {
            monte_carlo.push((*cone, MC_EPS, slab_volume_mc(cone, r, MC_EPS * r, mc_samples, seed)?));
        }
    }
    Ok(ConstantsReport { r, slab, coefficients, monte_carlo })
}

impl ConstantsReport {
    pub fn passes(&self) -> bool {
        self.slab.iter().all(SlabRow::holds)
    }

    /// The slab table written as `constants.csv`.
    pub fn slab_csv(&self) -> Result<String> {
        let header = ["k", "h", "R", "eps", "exact_volume", "closed_bound", "inner_part", "outer_part", "holds"];
        let rows: Vec<Vec<String>> = self
            .slab
            .iter()
            .map(|s| {
                vec![
                    s.cone.k().to_string(),
                    s.cone.h().to_string(),
                    fmt_f64(s.r),
                    fmt_f64(s.eps),
                    fmt_f64(s.exact_volume),
                    fmt_f64(s.closed_bound),
                    fmt_f64(s.parts.inner),
                    fmt_f64(s.parts.outer),
                    s.holds().to_string(),
                ]
            })
            .collect();
        csv_string(&header, &rows)
    }

    /// Sorted `key = value` trace of the constant derivation.
    pub fn trace_text(&self) -> String {
        let mut d = KvDoc::new();
        let c = stability_constant();
        d.set("C.exact", &c)
            .set("C.factored", "7^2 * 12^2 * 10^20")
            .set_f64("C.approx", crate::constants::stability_constant_f64())
            .set("C.derivation", "alpha <= 7*12*10^10 sqrt(delta) <=> alpha^2 <= C delta");
        for (j, w, enc, below) in omega_table(16) {
            d.set_f64(format!("omega.{j:02}"), w).set(format!("omega.{j:02}.below_6"), below);
            d.set(format!("omega.{j:02}.enclosure"), enc);
        }
        for k in 2..=11 {
            d.set_f64(format!("binomial_gap.k={k:02}"), binomial_gap(k, 10_000));
        }
        for co in &self.coefficients {
            let p = format!("coeff.{}-{}", co.cone.k(), co.cone.h());
            d.set(format!("{p}.perimeter"), co.perimeter)
                .set(format!("{p}.slab_eps"), co.slab_eps)
                .set(format!("{p}.slab_r"), co.slab_r)
                .set(format!("{p}.below_7e10"), co.uniform_ok)
                .set(format!("{p}.perimeter_within_display"), co.perimeter_within_display)
                .set(format!("{p}.slab_eps_within_display"), co.slab_eps_within_display)
                .set(format!("{p}.slab_r_within_display"), co.slab_r_within_display);
        }
        for delta in [0.0, 1e-6, 1e-2, 1.0, 36.0, 100.0] {
            let ch = alpha_bound_chain(self.r, delta).expect("nonnegative delta");
            let p = format!("alpha_chain.delta={delta:e}");
            let regime = match ch.regime {
                AlphaRegime::Saturated => "saturated",
                AlphaRegime::Optimized => "optimized",
            };
            d.set(format!("{p}.regime"), regime)
                .set_opt(format!("{p}.eps_opt"), ch.eps_opt.map(fmt_f64))
                .set_f64(format!("{p}.alpha_bound"), ch.alpha_bound)
                .set(format!("{p}.gate_ok"), ch.gate_ok);
            if let Some((lhs, rhs)) = ch.am_gm {
                d.set_f64(format!("{p}.am_gm_lhs"), lhs).set_f64(format!("{p}.am_gm_rhs"), rhs);
            }
        }
        for (cone, eps, mc) in &self.monte_carlo {
            let p = format!("mc.{}-{}", cone.k(), cone.h());
            let exact = crate::constants::slab_volume(cone, self.r, eps * self.r);
            d.set_f64(format!("{p}.eps"), eps * self.r)
                .set_f64(format!("{p}.estimate"), mc.value)
                .set_f64(format!("{p}.std_err"), mc.std_err)
                .set(format!("{p}.samples"), mc.samples)
                .set_f64(format!("{p}.quadrature"), exact)
                .set(format!("{p}.within_3sigma"), mc.within(exact, 3.0));
        }
        d.set("slab.all_hold", self.passes());
        d.render()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_amplitude_rows_are_zero() {
        let cone = ConeParams::new(3, 5).unwrap();
        let sweep = variation_sweep(cone, 1.0, &[0.0, 0.01], &[0.1], QuadSpec { order: 4, panels: 256 }).unwrap();
        assert_eq!(sweep.rows.len(), 6);
        for row in sweep.rows.iter().filter(|r| r.report.t == 0.0) {
            assert_eq!(row.report.delta_p, 0.0);
            assert_eq!(row.report.vol_delta, 0.0);
        }
        assert!(sweep.violations().is_empty(), "{:?}", sweep.violations());
        let csv = sweep.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 7);
        assert!(csv.starts_with("profile,t,delta_p"));
    }

    #[test]
    fn constants_trace_contains_c() {
        let cones = [ConeParams::new(2, 7).unwrap()];
        let rep = constants_report(&cones, 1.0, &[0.01, 0.1], 1000, 1).unwrap();
        assert!(rep.passes());
        let text = rep.trace_text();
        assert!(text.contains("C.exact = 705600000000000000000000\n"));
        assert!(KvDoc::parse(&text).is_ok());
        assert_eq!(rep.slab_csv().unwrap().lines().count(), 3);
        assert!(constants_report(&[ConeParams::new(3, 6).unwrap()], 1.0, &[0.1], 0, 1).is_err());
    }
}
