//! Exact inequality chains and interval certification of the pointwise bound
//! `|div g| >= c dist(z, M) / |z|^2`.

pub mod chain;
pub mod quad;
pub mod sweep;

pub use chain::{
    branch_chain_2k, branch_chain_35, chains_for_cone, reference_orientation, trace_chain, trace_chain_2k,
    trace_chain_35, ChainFamily, ChainStep, ChainTrace, StepProof,
};
pub use quad::{quad_min, QuadraticOnInterval};
pub use sweep::{certification_quotient, certify_pointwise, BranchDetail, CertStatus, Certificate};

use crate::cone::ConeParams;
use crate::error::{Error, Result};
use crate::exact::Surd;

/// The certified constant `c_{k,h}`: `sqrt(3)/21^3` for `{3, 5}` and
/// `sqrt(11)/11^6` for `{2, k}`, `k = 7..=11`.
pub fn claimed_constant(cone: &ConeParams) -> Result<Surd> {
    let pair = (cone.k().min(cone.h()), cone.k().max(cone.h()));
    match pair {
        (3, 5) => Ok(Surd::sqrt_int(3) / Surd::int(21).powi(3)),
        (2, 7..=11) => Ok(Surd::sqrt_int(11) / Surd::int(11).powi(6)),
        _ => Err(Error::UncertifiedPair { k: cone.k(), h: cone.h() }),
    }
}
