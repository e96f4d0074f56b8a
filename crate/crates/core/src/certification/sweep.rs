//! Interval sweep of `F(z) = |div g| |z|^2 / dist(z, M)` over the unit quarter arc.
//!
//! `F` is homogeneous of degree 0 and depends only on the polar angle of
//! `(r_x, r_y)`, so the arc `theta ∈ [0, pi/2]` covers all of `R^m` minus the
//! apex. The `(sqrt u - sqrt v)` factor of `dist` is cancelled against the
//! `(u - v)` in `div g` before evaluation, so `F` is evaluated without a 0/0
//! at the cone.

use std::f64::consts::FRAC_PI_2;

use num::rational::Rational64;

use super::chain::{chains_for_cone, ChainTrace};
use super::claimed_constant;
use crate::cone::ConeParams;
use crate::error::{Error, Result};
use crate::exact::Surd;
use crate::interval::Interval;
use crate::keyvalue::KvDoc;
use crate::subcalibration::{BranchKind, Calibration};

/// Maximum bisection depth below a base subinterval.
pub const MAX_DEPTH: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertStatus {
    Pass,
    Fail,
}

impl CertStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CertStatus::Pass => "PASS",
            CertStatus::Fail => "FAIL",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchDetail {
    /// Region label in the cone's own coordinates: `UPower` is `{u > v}`.
    pub branch: BranchKind,
    pub exponent: Rational64,
    /// Interval lower bound of `F` over the boxes assigned to this branch.
    pub verified_lower_bound: f64,
    /// Smallest floating-point `F` at box midpoints in this branch.
    pub observed_min: f64,
    pub chain_family: String,
    /// Branch label of the chain in its own orientation.
    pub chain_branch: BranchKind,
    /// Terminal coefficient of `|sqrt u - sqrt v| / |z|^2` as the chain states it.
    pub chain_stated: Surd,
    /// Last coefficient reached through steps that hold.
    pub chain_established: Option<Surd>,
    pub chain_holds: bool,
    pub chain_failed_step: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub cone: ConeParams,
    pub claimed_c: Surd,
    pub verified_lower_bound: f64,
    pub subdivisions: usize,
    /// Boxes evaluated after adaptive bisection.
    pub boxes: usize,
    pub deepest_bisection: u32,
    /// `verified_lower_bound - claimed_c`, rounded down.
    pub margin: f64,
    pub observed_min: f64,
    pub observed_theta: f64,
    /// `min(branch coefficient) * sqrt(m - 2)` from the chains that hold.
    pub chain_dist_constant: Option<Surd>,
    pub chain_supports_claim: bool,
    pub branches: Vec<BranchDetail>,
    pub status: CertStatus,
}

struct Sweep {
    lower: [f64; 2],
    observed: [(f64, f64); 2],
    boxes: usize,
    deepest: u32,
}

fn idx(b: BranchKind) -> usize {
    match b {
        BranchKind::UPower => 0,
        BranchKind::VPower => 1,
    }
}

/// Interval enclosure of `F` on `theta ∈ FRAC_PI_2 * [s_lo, s_hi]`, per branch
/// that may apply on the box.
fn eval_box(cal: &Calibration, s_lo: f64, s_hi: f64) -> [Option<Interval>; 2] {
    let cone = cal.cone;
    let theta = Interval::point(FRAC_PI_2) * Interval::new(s_lo, s_hi);
    // The true arc ends at pi/2 > FRAC_PI_2; the widened upper end covers it
    // and the quarter-range enclosures clamp cos to >= 0 and sin to <= 1.
    let theta = Interval::new(theta.lo.max(0.0), theta.hi);
    let c = theta.cos_quarter();
    let s = theta.sin_quarter();
    let u = Interval::point((cone.h() - 1) as f64) * c.sqr();
    let v = Interval::point((cone.k() - 1) as f64) * s.sqr();
    let one = Interval::point(1.0);
    let mm2 = (cone.m() - 2) as i64;
    let mut out = [None, None];
    if !(u.hi < v.lo) {
        out[0] = Some(cal.upper.coeffs().div_ratio(u, v, one, mm2));
    }
    if !(v.hi < u.lo) {
        out[1] = Some(cal.lower.coeffs().div_ratio(u, v, one, mm2));
    }
    out
}

fn f_point(cal: &Calibration, theta: f64) -> (BranchKind, f64) {
    let cone = cal.cone;
    let (c, s) = (theta.cos().max(0.0), theta.sin());
    let u = (cone.h() - 1) as f64 * c * c;
    let v = (cone.k() - 1) as f64 * s * s;
    let mm2 = (cone.m() - 2) as i64;
    let b = if u >= v { &cal.upper } else { &cal.lower };
    (b.kind, b.coeffs().div_ratio(u, v, 1.0, mm2))
}

fn acceptable(x: &Interval) -> bool {
    x.is_finite() && x.lo > 0.0 && x.width() <= 0.5 * x.lo
}

fn sweep_box(cal: &Calibration, s_lo: f64, s_hi: f64, depth: u32, acc: &mut Sweep) -> Result<()> {
    let enc = eval_box(cal, s_lo, s_hi);
    let ok = enc.iter().flatten().all(acceptable);
    if !ok && depth < MAX_DEPTH {
        let mid = 0.5 * (s_lo + s_hi);
        sweep_box(cal, s_lo, mid, depth + 1, acc)?;
        return sweep_box(cal, mid, s_hi, depth + 1, acc);
    }
    acc.boxes += 1;
    acc.deepest = acc.deepest.max(depth);
    for (i, e) in enc.iter().enumerate() {
        if let Some(e) = e {
            if !(e.is_finite() && e.lo > 0.0) {
                return Err(Error::IntervalTooWide { lo: e.lo, hi: e.hi });
            }
            acc.lower[i] = acc.lower[i].min(e.lo);
        }
    }
    Ok(())
}

/// Interval-certified lower bound of `F` for a certified cone.
///
/// The arc is split into `subdivisions` equal angle boxes, each bisected
/// further (up to [`MAX_DEPTH`] levels) until its enclosure is positive and
/// relatively tight. Box endpoints are dyadic fractions of `pi/2`, so doubling
/// `subdivisions` refines every box and never lowers the bound.
pub fn certify_pointwise(cone: ConeParams, subdivisions: usize) -> Result<Certificate> {
    if subdivisions < 16 {
        return Err(Error::InvalidArgument(format!("subdivisions = {subdivisions} must be at least 16")));
    }
    if !subdivisions.is_power_of_two() {
        return Err(Error::InvalidArgument(format!("subdivisions = {subdivisions} must be a power of two")));
    }
    let claimed_c = claimed_constant(&cone)?;
    let cal = Calibration::for_cone(cone)?;
    let mut acc = Sweep {
        lower: [f64::INFINITY; 2],
        observed: [(f64::INFINITY, 0.0); 2],
        boxes: 0,
        deepest: 0,
    };
    let n = subdivisions as f64;
    for i in 0..subdivisions {
        let (s_lo, s_hi) = (i as f64 / n, (i + 1) as f64 / n);
        sweep_box(&cal, s_lo, s_hi, 0, &mut acc)?;
        let theta = FRAC_PI_2 * 0.5 * (s_lo + s_hi);
        let (b, f) = f_point(&cal, theta);
        let slot = &mut acc.observed[idx(b)];
        if f < slot.0 {
            *slot = (f, theta);
        }
    }
    let verified_lower_bound = acc.lower[0].min(acc.lower[1]);
    let margin = (verified_lower_bound - claimed_c.to_interval().hi).next_down();
    let (observed_min, observed_theta) =
        if acc.observed[0].0 <= acc.observed[1].0 { acc.observed[0] } else { acc.observed[1] };

    let chains = chains_for_cone(&cone)?;
    let mut branches = Vec::with_capacity(2);
    let mut chain_dist_constant: Option<Surd> = None;
    let mut all_established = true;
    let root = Surd::sqrt_int((cone.m() - 2) as i64);
    for (own, trace) in chains.iter() {
        let detail = branch_detail(&cal, *own, trace, &acc);
        match &detail.chain_established {
            Some(c) => {
                let d = c.clone() * root.clone();
                chain_dist_constant = Some(match chain_dist_constant {
                    Some(prev) if prev <= d => prev,
                    _ => d,
                });
            }
            None => all_established = false,
        }
        branches.push(detail);
    }
    if !all_established {
        chain_dist_constant = None;
    }
    let chain_supports_claim = chain_dist_constant.as_ref().is_some_and(|d| *d >= claimed_c);
    let status = if margin > 0.0 && chain_supports_claim { CertStatus::Pass } else { CertStatus::Fail };
    Ok(Certificate {
        cone,
        claimed_c,
        verified_lower_bound,
        subdivisions,
        boxes: acc.boxes,
        deepest_bisection: acc.deepest,
        margin,
        observed_min,
        observed_theta,
        chain_dist_constant,
        chain_supports_claim,
        branches,
        status,
    })
}

fn branch_detail(cal: &Calibration, own: BranchKind, trace: &ChainTrace, acc: &Sweep) -> BranchDetail {
    BranchDetail {
        branch: own,
        exponent: cal.branch(own).d,
        verified_lower_bound: acc.lower[idx(own)],
        observed_min: acc.observed[idx(own)].0,
        chain_family: trace.family.to_string(),
        chain_branch: trace.branch,
        chain_stated: trace.stated(),
        chain_established: trace.established(),
        chain_holds: trace.all_hold(),
        chain_failed_step: trace.first_failure().map(|s| s.label.to_string()),
    }
}

fn parse_branch(s: &str) -> Result<BranchKind> {
    match s {
        "upower" => Ok(BranchKind::UPower),
        "vpower" => Ok(BranchKind::VPower),
        _ => Err(Error::Parse(format!("unknown branch {s:?}"))),
    }
}

impl Certificate {
    pub fn to_kv(&self) -> KvDoc {
        let mut d = KvDoc::new();
        d.set("cone.k", self.cone.k())
            .set("cone.h", self.cone.h())
            .set("claimed_c", &self.claimed_c)
            .set_f64("claimed_c.approx", self.claimed_c.to_f64())
            .set_f64("verified_lower_bound", self.verified_lower_bound)
            .set("subdivisions", self.subdivisions)
            .set("boxes", self.boxes)
            .set("deepest_bisection", self.deepest_bisection)
            .set_f64("margin", self.margin)
            .set_f64("observed_min", self.observed_min)
            .set_f64("observed_theta", self.observed_theta)
            .set_opt("chain_dist_constant", self.chain_dist_constant.as_ref())
            .set("chain_supports_claim", self.chain_supports_claim)
            .set("status", self.status.as_str());
        for b in &self.branches {
            let p = format!("branch.{}.", b.branch.name());
            d.set(format!("{p}exponent"), b.exponent)
                .set_f64(format!("{p}verified_lower_bound"), b.verified_lower_bound)
                .set_f64(format!("{p}observed_min"), b.observed_min)
                .set(format!("{p}chain_family"), &b.chain_family)
                .set(format!("{p}chain_branch"), b.chain_branch.name())
                .set(format!("{p}chain_stated"), &b.chain_stated)
                .set_opt(format!("{p}chain_established"), b.chain_established.as_ref())
                .set(format!("{p}chain_holds"), b.chain_holds)
                .set_opt(format!("{p}chain_failed_step"), b.chain_failed_step.as_ref());
        }
        d
    }

    pub fn to_text(&self) -> String {
        self.to_kv().render()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let d = KvDoc::parse(text)?;
        let cone = ConeParams::new(d.get_parsed("cone.k")?, d.get_parsed("cone.h")?)?;
        let status = match d.get("status")? {
            "PASS" => CertStatus::Pass,
            "FAIL" => CertStatus::Fail,
            s => return Err(Error::Parse(format!("unknown status {s:?}"))),
        };
        let mut branches = Vec::new();
        for kind in [BranchKind::UPower, BranchKind::VPower] {
            let p = format!("branch.{}.", kind.name());
            if d.get(&format!("{p}exponent")).is_err() {
                continue;
            }
            branches.push(BranchDetail {
                branch: kind,
                exponent: d.get_parsed(&format!("{p}exponent"))?,
                verified_lower_bound: d.get_parsed(&format!("{p}verified_lower_bound"))?,
                observed_min: d.get_parsed(&format!("{p}observed_min"))?,
                chain_family: d.get(&format!("{p}chain_family"))?.to_string(),
                chain_branch: parse_branch(d.get(&format!("{p}chain_branch"))?)?,
                chain_stated: d.get_parsed(&format!("{p}chain_stated"))?,
                chain_established: d.get_opt(&format!("{p}chain_established"))?,
                chain_holds: d.get_parsed(&format!("{p}chain_holds"))?,
                chain_failed_step: d.get_opt(&format!("{p}chain_failed_step"))?,
            });
        }
        Ok(Certificate {
            cone,
            claimed_c: d.get_parsed("claimed_c")?,
            verified_lower_bound: d.get_parsed("verified_lower_bound")?,
            subdivisions: d.get_parsed("subdivisions")?,
            boxes: d.get_parsed("boxes")?,
            deepest_bisection: d.get_parsed("deepest_bisection")?,
            margin: d.get_parsed("margin")?,
            observed_min: d.get_parsed("observed_min")?,
            observed_theta: d.get_parsed("observed_theta")?,
            chain_dist_constant: d.get_opt("chain_dist_constant")?,
            chain_supports_claim: d.get_parsed("chain_supports_claim")?,
            branches,
            status,
        })
    }
}

/// `F` at a point of `R^k x R^h` given by its reduced radii, in floating point.
pub fn certification_quotient(cal: &Calibration, r_x: f64, r_y: f64) -> Result<f64> {
    let cone = cal.cone;
    if r_x == 0.0 && r_y == 0.0 {
        return Err(Error::SingularApex);
    }
    let u = (cone.h() - 1) as f64 * r_x * r_x;
    let v = (cone.k() - 1) as f64 * r_y * r_y;
    let b = if u >= v { &cal.upper } else { &cal.lower };
    Ok(b.coeffs().div_ratio(u, v, r_x * r_x + r_y * r_y, (cone.m() - 2) as i64))
}
