//! Exact reproduction of the branch-wise inequality chains.
//!
//! Each chain bounds `|div g|` from below by `c · |sqrt u - sqrt v| / |z|^2` on
//! one branch region. Chains are written in the orientation where `h = 2`
//! (the `(2, k)` family) or `(h, k) = (3, 5)`; [`reference_orientation`] maps any
//! certified cone onto it. Every relaxation is discharged exactly: polynomial
//! dominance by coefficients, one-variable quadratics by [`quad_min`], and
//! constant comparisons in [`Surd`] arithmetic.

use std::fmt;

use num::{BigRational, Signed};

use super::quad::{quad_min, QuadraticOnInterval};
use crate::cone::ConeParams;
use crate::error::{Error, Result};
use crate::exact::Surd;
use crate::subcalibration::BranchKind;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn qr(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[derive(Debug, Clone, PartialEq)]
pub enum StepProof {
    /// `greater - lesser` has nonnegative coefficients over nonnegative monomials.
    Dominance { monomials: &'static str, greater: Vec<BigRational>, lesser: Vec<BigRational> },
    /// `quad(t) >= bound` on the quadratic's interval.
    QuadraticBound { quad: QuadraticOnInterval, bound: BigRational },
    /// `lhs >= rhs`.
    ConstantBound { lhs: Surd, rhs: Surd },
    /// `lhs == rhs`.
    ConstantIdentity { lhs: Surd, rhs: Surd },
    /// Collects the constants of the preceding steps into the next coefficient.
    Product { factors: Vec<(&'static str, Surd)> },
    /// A sign or norm fact that needs no computation (e.g. `sqrt v >= 0`).
    Elementary,
}

impl StepProof {
    fn check(&self) -> (bool, String, String) {
        match self {
            StepProof::Dominance { greater, lesser, .. } => {
                let ok = greater.iter().zip(lesser).all(|(g, l)| !(g - l).is_negative());
                (ok, fmt_vec(greater), fmt_vec(lesser))
            }
            StepProof::QuadraticBound { quad, bound } => {
                let (_, min) = quad_min(quad);
                (min >= *bound, min.to_string(), bound.to_string())
            }
            StepProof::ConstantBound { lhs, rhs } => (lhs >= rhs, lhs.to_string(), rhs.to_string()),
            StepProof::ConstantIdentity { lhs, rhs } => (lhs == rhs, lhs.to_string(), rhs.to_string()),
            StepProof::Product { factors } => {
                let p = product(factors);
                (true, p.to_string(), p.to_string())
            }
            StepProof::Elementary => (true, String::new(), String::new()),
        }
    }
}

fn fmt_vec(v: &[BigRational]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn product(factors: &[(&'static str, Surd)]) -> Surd {
    factors.iter().fold(Surd::int(1), |acc, (_, f)| acc * f.clone())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainStep {
    pub label: &'static str,
    pub statement: String,
    pub proof: StepProof,
    pub holds: bool,
    pub lhs: String,
    pub rhs: String,
    /// Coefficient of `|sqrt u - sqrt v| / |z|^2` after this step, when the step produces one.
    pub yields: Option<Surd>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainFamily {
    /// `(h, k) = (2, k)`
    TwoK(usize),
    /// `(h, k) = (3, 5)`
    ThreeFive,
}

impl fmt::Display for ChainFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainFamily::TwoK(k) => write!(f, "(h,k)=(2,{k})"),
            ChainFamily::ThreeFive => write!(f, "(h,k)=(3,5)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainTrace {
    pub family: ChainFamily,
    pub branch: BranchKind,
    pub steps: Vec<ChainStep>,
}

impl ChainTrace {
    pub fn all_hold(&self) -> bool {
        self.steps.iter().all(|s| s.holds)
    }

    pub fn first_failure(&self) -> Option<&ChainStep> {
        self.steps.iter().find(|s| !s.holds)
    }

    /// The coefficient the chain ends with as written.
    pub fn stated(&self) -> Surd {
        self.steps.iter().rev().find_map(|s| s.yields.clone()).expect("chain yields a coefficient")
    }

    /// The last coefficient reached before any failing step.
    pub fn established(&self) -> Option<Surd> {
        let mut last = None;
        for s in &self.steps {
            if !s.holds {
                break;
            }
            if let Some(c) = &s.yields {
                last = Some(c.clone());
            }
        }
        last
    }

    fn into_result(self) -> Result<Surd> {
        if let Some(s) = self.first_failure() {
            return Err(Error::ChainStepViolation { step: s.label.to_string(), lhs: s.lhs.clone(), rhs: s.rhs.clone() });
        }
        Ok(self.stated())
    }
}

struct Builder {
    steps: Vec<ChainStep>,
}

impl Builder {
    fn new() -> Self {
        Builder { steps: Vec::new() }
    }

    fn push(&mut self, label: &'static str, statement: impl Into<String>, proof: StepProof) -> &mut Self {
        let (holds, lhs, rhs) = proof.check();
        let yields = match &proof {
            StepProof::Product { factors } => Some(product(factors)),
            StepProof::ConstantBound { rhs, .. } if self.last_yield().is_some() => Some(rhs.clone()),
            StepProof::ConstantIdentity { rhs, .. } if self.last_yield().is_some() => Some(rhs.clone()),
            _ => None,
        };
        self.steps.push(ChainStep { label, statement: statement.into(), proof, holds, lhs, rhs, yields });
        self
    }

    fn last_yield(&self) -> Option<&Surd> {
        self.steps.iter().rev().find_map(|s| s.yields.as_ref())
    }

    /// Continues from the current coefficient: `current >= rhs`.
    fn bound(&mut self, label: &'static str, statement: impl Into<String>, rhs: Surd) -> &mut Self {
        let lhs = self.last_yield().expect("coefficient present").clone();
        self.push(label, statement, StepProof::ConstantBound { lhs, rhs })
    }

    /// Continues from the current coefficient: `current == rhs`.
    fn identity(&mut self, label: &'static str, statement: impl Into<String>, rhs: Surd) -> &mut Self {
        let lhs = self.last_yield().expect("coefficient present").clone();
        self.push(label, statement, StepProof::ConstantIdentity { lhs, rhs })
    }
}

fn s(n: i64) -> Surd {
    Surd::int(n)
}

fn sr(n: i64, d: i64) -> Surd {
    Surd::ratio(n, d)
}

/// `a^(3/2)` for a rational `a`.
fn p32(a: BigRational) -> Surd {
    Surd::pow_three_halves(&a)
}

/// Full trace of the `(h, k) = (2, k)` chain for `k = 7..=11`.
pub fn trace_chain_2k(k: usize, branch: BranchKind) -> Result<ChainTrace> {
    if !(7..=11).contains(&k) {
        return Err(Error::InvalidArgument(format!("k = {k} outside 7..=11")));
    }
    let ki = k as i64;
    let (h, m) = (2i64, ki + 2);
    let mut b = Builder::new();
    match branch {
        BranchKind::UPower => {
            b.push(
                "prefactor",
                "div g = (k-1)(u-v)(25u^2+12(k-11)uv+27v^2) / (sqrt(u) (25u^2+2(2k-17)uv+9v^2)^(3/2))",
                StepProof::ConstantIdentity { lhs: sr(ki - 1, 64) / p32(qr(1, 16)), rhs: s(ki - 1) },
            )
            .push(
                "numerator k >= 7",
                "25u^2+12(k-11)uv+27v^2 >= 25u^2-48uv+27v^2 = u^2 p2(v/u)",
                StepProof::Dominance {
                    monomials: "u^2, uv, v^2",
                    greater: vec![q(25), q(12 * (ki - 11)), q(27)],
                    lesser: vec![q(25), q(-48), q(27)],
                },
            )
            .push(
                "denominator k <= 11",
                "25u^2+2(2k-17)uv+9v^2 <= 25u^2+10uv+9v^2",
                StepProof::Dominance {
                    monomials: "u^2, uv, v^2",
                    greater: vec![q(25), q(10), q(9)],
                    lesser: vec![q(25), q(2 * (2 * ki - 17)), q(9)],
                },
            )
            .push("sum over root", "(sqrt u + sqrt v)/sqrt u >= 1", StepProof::Elementary)
            .push(
                "min p2",
                "p2(t) = 27t^2-48t+25 >= 11/3 on [0,1]",
                StepProof::QuadraticBound { quad: QuadraticOnInterval::unit(27, -48, 25), bound: qr(11, 3) },
            )
            .push(
                "denominator on u > v",
                "25u^2+10uv+9v^2 <= 44u^2, i.e. 19-10t-9t^2 >= 0 on [0,1]",
                StepProof::QuadraticBound { quad: QuadraticOnInterval::unit(-9, -10, 19), bound: q(0) },
            )
            .push(
                "region u > v",
                "|x|^2/|z|^2 >= (k-1)/(m-2) >= 1/2, so u^2 >= (|z|/sqrt 2)^4",
                StepProof::ConstantBound { lhs: sr(ki - 1, m - 2), rhs: sr(1, 2) },
            )
            .push(
                "u <= |z|^2",
                "u = (h-1)|x|^2 <= |z|^2",
                StepProof::ConstantBound { lhs: s(1), rhs: s(h - 1) },
            )
            .push(
                "collect",
                "(k-1) * (11/3) * (1/2)^2 / 44^(3/2)",
                StepProof::Product {
                    factors: vec![
                        ("prefactor", s(ki - 1)),
                        ("min p2", sr(11, 3)),
                        ("(|x|/|z|)^4", sr(1, 4)),
                        ("44^(-3/2)", p32(q(44)).recip()),
                    ],
                },
            )
            .identity("displayed form", "= (k-1)/(2^5 3 sqrt 11)", s(ki - 1) / (s(96) * Surd::sqrt_int(11)))
            .bound("terminal", ">= sqrt(11)/(2^5 3)", Surd::sqrt_int(11) / s(96));
        }
        BranchKind::VPower => {
            let k1 = ki - 1;
            b.push(
                "prefactor",
                "|div g| = (k-1)|u-v| v^2 q2(u/v) / (sqrt(v) ((k-1)(u-2v)^2+uv)^(3/2))",
                StepProof::ConstantIdentity { lhs: sr(k1, 8) / p32(qr(1, 4)), rhs: s(k1) },
            )
            .push(
                "denominator on u < v",
                "(k-1)(u-2v)^2+uv <= (4(k-1)+1)v^2, i.e. -(k-1)s^2+(4k-5)s+1 >= 0 on [0,1]",
                StepProof::QuadraticBound { quad: QuadraticOnInterval::unit(-k1, 4 * k1 - 1, 1), bound: q(0) },
            )
            .push("sum over root", "(sqrt u + sqrt v)/sqrt v >= 1", StepProof::Elementary)
            .push(
                "min q2",
                "q2(t) = (k-1)t^2+(3-4k)t+4(k-2) >= k-6 on [0,1]",
                StepProof::QuadraticBound {
                    quad: QuadraticOnInterval::unit(k1, 3 - 4 * ki, 4 * (ki - 2)),
                    bound: q(ki - 6),
                },
            )
            .push(
                "region u < v",
                "|y|^2/|z|^2 >= (h-1)/(m-2) >= 1/k",
                StepProof::ConstantBound { lhs: sr(h - 1, m - 2), rhs: sr(1, ki) },
            )
            .push("|y| <= |z|", "|y|^6 <= |z|^6", StepProof::Elementary)
            .push(
                "collect",
                "(k-1) (k-6) (k-1)^2 k^-2 / ((k-1)^3 (4k-3)^(3/2))",
                StepProof::Product {
                    factors: vec![
                        ("prefactor", s(k1)),
                        ("min q2", s(ki - 6)),
                        ("v^2/|y|^4", s(k1 * k1)),
                        ("(|y|/|z|)^4", sr(1, ki * ki)),
                        ("|y|^6/v^3", sr(1, k1 * k1 * k1)),
                        ("(4(k-1)+1)^(-3/2)", p32(q(4 * k1 + 1)).recip()),
                    ],
                },
            )
            .identity(
                "displayed form",
                "= (k-6)(k-1)^3 / (k^2 (4(k-1)^3+(k-1)^2)^(3/2))",
                s((ki - 6) * k1 * k1 * k1) / (s(ki * ki) * p32(q(4 * k1 * k1 * k1 + k1 * k1))),
            )
            .bound(
                "uniform in k",
                ">= 6^3 / (11^2 (4*10^3+10^2)^(3/2))",
                s(216) / (s(121) * p32(q(4100))),
            )
            .bound("terminal", ">= 1/11^5", sr(1, 161_051));
        }
    }
    Ok(ChainTrace { family: ChainFamily::TwoK(k), branch, steps: b.steps })
}

/// Full trace of the `(h, k) = (3, 5)` chain.
pub fn trace_chain_35(branch: BranchKind) -> ChainTrace {
    let (k, h, m) = (5i64, 3i64, 8i64);
    let mut b = Builder::new();
    match branch {
        BranchKind::UPower => {
            b.push(
                "prefactor",
                "div g = 4 sqrt(2) (u-v)(49u^2-72uv+27v^2) / (sqrt(u) (49u^2-10uv+9v^2)^(3/2))",
                StepProof::ConstantIdentity { lhs: sr(1, 32) / p32(qr(1, 32)), rhs: s(4) * Surd::sqrt_int(2) },
            )
            .push(
                "min p3",
                "p3(t) = 27t^2-72t+49 >= 4 on [0,1]",
                StepProof::QuadraticBound { quad: QuadraticOnInterval::unit(27, -72, 49), bound: q(4) },
            )
            .push("sum over root", "(sqrt u + sqrt v)/sqrt u >= 1", StepProof::Elementary)
            .push(
                "drop cross term",
                "49u^2-10uv+9v^2 <= 49u^2+9v^2 = 49*4|x|^4+9*16|y|^4",
                StepProof::Dominance {
                    monomials: "u^2, uv, v^2",
                    greater: vec![q(49), q(0), q(9)],
                    lesser: vec![q(49), q(-10), q(9)],
                },
            )
            .push(
                "uniform coefficient",
                "49*4|x|^4+9*16|y|^4 <= 49*4(|x|^4+|y|^4)",
                StepProof::Dominance {
                    monomials: "|x|^4, |y|^4",
                    greater: vec![q(196), q(196)],
                    lesser: vec![q(49 * (h - 1) * (h - 1)), q(9 * (k - 1) * (k - 1))],
                },
            )
            .push("quartic norm", "|x|^4+|y|^4 <= |z|^4", StepProof::Elementary)
            .push(
                "region u > v",
                "|x|^2/|z|^2 >= (k-1)/(m-2) >= 1/2",
                StepProof::ConstantBound { lhs: sr(k - 1, m - 2), rhs: sr(1, 2) },
            )
            .push(
                "collect",
                "4 sqrt(2) * 4 * (h-1)^2 (1/2)^2 / 196^(3/2)",
                StepProof::Product {
                    factors: vec![
                        ("prefactor", s(4) * Surd::sqrt_int(2)),
                        ("min p3", s(4)),
                        ("u^2/|x|^4", s((h - 1) * (h - 1))),
                        ("(|x|/|z|)^4", sr(1, 4)),
                        ("196^(-3/2)", p32(q(196)).recip()),
                    ],
                },
            )
            .identity("terminal", "= 2 sqrt(2)/7^3", s(2) * Surd::sqrt_int(2) / s(343));
        }
        BranchKind::VPower => {
            b.push(
                "prefactor",
                "div g = 4 (u-v)(27u^2-123uv+98v^2) / (sqrt(v) (9u^2-34uv+49v^2)^(3/2))",
                StepProof::ConstantIdentity { lhs: sr(1, 16) / p32(qr(1, 16)), rhs: s(4) },
            )
            .push(
                "min q3",
                "q3(t) = 27t^2-123t+98 >= 2 on [0,1]",
                StepProof::QuadraticBound { quad: QuadraticOnInterval::unit(27, -123, 98), bound: q(2) },
            )
            .push("sum over root", "(sqrt u + sqrt v)/sqrt v >= 1", StepProof::Elementary)
            .push(
                "drop cross term",
                "9u^2-34uv+49v^2 <= 9u^2+49v^2 = 9*4|x|^4+49*16|y|^4",
                StepProof::Dominance {
                    monomials: "u^2, uv, v^2",
                    greater: vec![q(9), q(0), q(49)],
                    lesser: vec![q(9), q(-34), q(49)],
                },
            )
            .push(
                "uniform coefficient",
                "9*4|x|^4+49*16|y|^4 <= 49*16(|x|^4+|y|^4)",
                StepProof::Dominance {
                    monomials: "|x|^4, |y|^4",
                    greater: vec![q(784), q(784)],
                    lesser: vec![q(9 * (h - 1) * (h - 1)), q(49 * (k - 1) * (k - 1))],
                },
            )
            .push("quartic norm", "|x|^4+|y|^4 <= |z|^4", StepProof::Elementary)
            .push(
                "region u < v",
                "|y|^2/|z|^2 >= (h-1)/(m-2) >= 1/3",
                StepProof::ConstantBound { lhs: sr(h - 1, m - 2), rhs: sr(1, 3) },
            )
            .push(
                "collect",
                "4 * 2 * (k-1)^2 (1/3)^2 / 784^(3/2)",
                StepProof::Product {
                    factors: vec![
                        ("prefactor", s(4)),
                        ("min q3", s(2)),
                        ("v^2/|y|^4", s((k - 1) * (k - 1))),
                        ("(|y|/|z|)^4", sr(1, 9)),
                        ("784^(-3/2)", p32(q(784)).recip()),
                    ],
                },
            )
            .identity("terminal", "= 2/(3^2 7^3)", sr(2, 3087));
        }
    }
    ChainTrace { family: ChainFamily::ThreeFive, branch, steps: b.steps }
}

/// Terminal coefficient of the `(2, k)` chain; fails if any step as written fails.
pub fn branch_chain_2k(k: usize, branch: BranchKind) -> Result<Surd> {
    trace_chain_2k(k, branch)?.into_result()
}

/// Terminal coefficient of the `(3, 5)` chain; fails if any step as written fails.
pub fn branch_chain_35(branch: BranchKind) -> Result<Surd> {
    trace_chain_35(branch).into_result()
}

/// The chain family of a certified cone and whether the cone's `(k, h)` is the
/// swap of the family's orientation (which exchanges the two branches).
pub fn reference_orientation(cone: &ConeParams) -> Result<(ChainFamily, bool)> {
    match (cone.k(), cone.h()) {
        (5, 3) => Ok((ChainFamily::ThreeFive, false)),
        (3, 5) => Ok((ChainFamily::ThreeFive, true)),
        (k @ 7..=11, 2) => Ok((ChainFamily::TwoK(k), false)),
        (2, h @ 7..=11) => Ok((ChainFamily::TwoK(h), true)),
        (k, h) => Err(Error::UncertifiedPair { k, h }),
    }
}

pub fn trace_chain(family: ChainFamily, branch: BranchKind) -> ChainTrace {
    match family {
        ChainFamily::TwoK(k) => trace_chain_2k(k, branch).expect("k in range"),
        ChainFamily::ThreeFive => trace_chain_35(branch),
    }
}

/// Chains for a cone, keyed by the cone's own branch labels (`UPower` = `{u > v}`).
pub fn chains_for_cone(cone: &ConeParams) -> Result<[(BranchKind, ChainTrace); 2]> {
    let (family, swapped) = reference_orientation(cone)?;
    let map = |own: BranchKind| {
        let reference = match (own, swapped) {
            (b, false) => b,
            (BranchKind::UPower, true) => BranchKind::VPower,
            (BranchKind::VPower, true) => BranchKind::UPower,
        };
        (own, trace_chain(family, reference))
    };
    Ok([map(BranchKind::UPower), map(BranchKind::VPower)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_five_chains_reproduce_constants() {
        assert_eq!(branch_chain_35(BranchKind::UPower).unwrap(), s(2) * Surd::sqrt_int(2) / s(343));
        assert_eq!(branch_chain_35(BranchKind::VPower).unwrap(), sr(2, 3087));
        for b in [BranchKind::UPower, BranchKind::VPower] {
            assert!(trace_chain_35(b).all_hold());
        }
    }

    #[test]
    fn two_k_lower_chain_reproduces_constant() {
        for k in 7..=11 {
            assert_eq!(branch_chain_2k(k, BranchKind::VPower).unwrap(), sr(1, 161_051), "k = {k}");
        }
    }

    #[test]
    fn two_k_intermediate_uniform_step() {
        let rhs = s(216) / (s(121) * p32(q(4100)));
        for k in 7..=11i64 {
            let k1 = k - 1;
            let lhs = s((k - 6) * k1 * k1 * k1) / (s(k * k) * p32(q(4 * k1 * k1 * k1 + k1 * k1)));
            assert!(lhs >= rhs, "k = {k}");
        }
        assert!(rhs >= sr(1, 161_051));
    }

    #[test]
    fn two_k_upper_chain_terminal_step_fails_as_written() {
        // (k-1)/(2^5 3 sqrt 11) >= sqrt(11)/(2^5 3) needs k >= 12.
        for k in 7..=11 {
            let trace = trace_chain_2k(k, BranchKind::UPower).unwrap();
            let fail = trace.first_failure().expect("terminal step fails");
            assert_eq!(fail.label, "terminal");
            assert_eq!(trace.established().unwrap(), s(k as i64 - 1) / (s(96) * Surd::sqrt_int(11)));
            assert_eq!(trace.stated(), Surd::sqrt_int(11) / s(96));
            assert!(matches!(branch_chain_2k(k, BranchKind::UPower), Err(Error::ChainStepViolation { .. })));
        }
    }

    #[test]
    fn chain_lines_decrease_on_sampled_points() {
        // div g |z|^2 / |sqrt u - sqrt v| dominates the chain coefficient pointwise.
        use crate::cone::ReducedPoint;
        use crate::subcalibration::Calibration;
        for cone in ConeParams::all_certified() {
            let cal = Calibration::for_cone(cone).unwrap();
            let chains = chains_for_cone(&cone).unwrap();
            for i in 1..400 {
                let th = std::f64::consts::FRAC_PI_2 * i as f64 / 400.0;
                let p = ReducedPoint::new(&cone, th.cos(), th.sin());
                if (p.u - p.v).abs() < 1e-9 {
                    continue;
                }
                let own = cal.branch_for(&p).kind;
                let trace = &chains.iter().find(|(b, _)| *b == own).unwrap().1;
                let c = trace.established().unwrap().to_f64();
                let val = cal.g_field(&p).unwrap().div_g.abs() / (p.u.sqrt() - p.v.sqrt()).abs();
                assert!(val >= c * (1.0 - 1e-12), "{cone} theta {th}: {val} < {c}");
            }
        }
    }

    #[test]
    fn orientation_mapping() {
        let c = |k, h| ConeParams::new(k, h).unwrap();
        assert_eq!(reference_orientation(&c(7, 2)).unwrap(), (ChainFamily::TwoK(7), false));
        assert_eq!(reference_orientation(&c(2, 9)).unwrap(), (ChainFamily::TwoK(9), true));
        assert_eq!(reference_orientation(&c(3, 5)).unwrap(), (ChainFamily::ThreeFive, true));
        let chains = chains_for_cone(&c(2, 9)).unwrap();
        assert_eq!(chains[0].1.branch, BranchKind::VPower);
        assert!(reference_orientation(&c(4, 4)).is_err());
    }
}
