//! Sub-calibrations of the exceptional Lawson cones: closed forms, exact and
//! interval certification, the radial stability spectrum, finite-amplitude
//! variations and the explicit constants of the quantitative stability bound.

pub mod certification;
pub mod constants;
pub mod cone;
pub mod error;
pub mod exact;
pub mod interval;
pub mod keyvalue;
pub mod montecarlo;
pub mod profile;
pub mod quadrature;
pub mod report;
pub mod scalar;
pub mod spectrum;
pub mod subcalibration;
pub mod variation;

pub use cone::{AmbientPoint, ConeParams, ReducedPoint, Region};
pub use error::{Error, Result};
