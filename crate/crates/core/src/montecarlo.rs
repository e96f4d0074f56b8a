//! Seeded Monte Carlo estimates in the ambient space `R^k x R^h`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::cone::{dist_to_cone, reduce, unit_ball_volume, AmbientPoint, ConeParams};
use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 0x5eed_1a75;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub std_err: f64,
    pub samples: usize,
}

impl McEstimate {
    pub fn within(&self, exact: f64, sigmas: f64) -> bool {
        (self.value - exact).abs() <= sigmas * self.std_err
    }
}

/// Uniform point of the ball `B_r^dim`.
fn ball_point<R: Rng>(rng: &mut R, dim: usize, r: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
    let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let rad = r * rng.gen::<f64>().powf(1.0 / dim as f64) / norm;
    v.iter_mut().for_each(|a| *a *= rad);
    v
}

/// `|H_R| · P(indicator)` over uniform samples of `H_R = B_R^k x B_R^h`.
fn window_fraction<F>(cone: &ConeParams, r: f64, samples: usize, seed: u64, mut hit: F) -> Result<McEstimate>
where
    F: FnMut(&AmbientPoint) -> Result<bool>,
{
    if samples == 0 || !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("samples = {samples}, R = {r}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut count = 0usize;
    for _ in 0..samples {
        let z = AmbientPoint::new(ball_point(&mut rng, cone.k(), r), ball_point(&mut rng, cone.h(), r));
        if hit(&z)? {
            count += 1;
        }
    }
    let vol = unit_ball_volume(cone.k()) * unit_ball_volume(cone.h()) * r.powi(cone.m() as i32);
    let f = count as f64 / samples as f64;
    Ok(McEstimate { value: vol * f, std_err: vol * (f * (1.0 - f) / samples as f64).sqrt(), samples })
}

/// `|H_R ∩ {p < ε}|` with `p = l · dist(z, M)`.
pub fn slab_volume_mc(cone: &ConeParams, r: f64, eps: f64, samples: usize, seed: u64) -> Result<McEstimate> {
    let l = cone.l_constant();
    window_fraction(cone, r, samples, seed, |z| Ok(l * dist_to_cone(&reduce(z, cone)?, cone) < eps))
}

/// `H^(m-1)(M ∩ H_R)` as `|{dist < η} ∩ H_R| / (2η)`; the bias is `O(η)` from
/// the window edge.
pub fn cone_area_mc(cone: &ConeParams, r: f64, eta: f64, samples: usize, seed: u64) -> Result<McEstimate> {
    let tube = window_fraction(cone, r, samples, seed, |z| Ok(dist_to_cone(&reduce(z, cone)?, cone) < eta))?;
    Ok(McEstimate { value: tube.value / (2.0 * eta), std_err: tube.std_err / (2.0 * eta), samples })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_runs_repeat() {
        let cone = ConeParams::new(2, 7).unwrap();
        let a = slab_volume_mc(&cone, 1.0, 0.1, 2000, 7).unwrap();
        let b = slab_volume_mc(&cone, 1.0, 0.1, 2000, 7).unwrap();
        let c = slab_volume_mc(&cone, 1.0, 0.1, 2000, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn ball_points_stay_inside() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for dim in 1..=11 {
            for _ in 0..200 {
                let p = ball_point(&mut rng, dim, 2.0);
                assert!(p.iter().map(|a| a * a).sum::<f64>() <= 4.0 + 1e-12);
            }
        }
    }

    #[test]
    fn huge_eps_fills_window() {
        let cone = ConeParams::new(3, 5).unwrap();
        let e = slab_volume_mc(&cone, 1.0, 100.0, 500, 3).unwrap();
        let vol = unit_ball_volume(3) * unit_ball_volume(5);
        assert!((e.value - vol).abs() < 1e-12 * vol);
        assert_eq!(e.std_err, 0.0);
        assert!(slab_volume_mc(&cone, 1.0, 0.1, 0, 3).is_err());
    }
}
