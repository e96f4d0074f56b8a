//! Radial profiles `φ(r)` compactly supported in `(0, ∞)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileShape {
    /// `Σ c_j sin(j π ξ)`, `ξ = (r - a)/(b - a)`, `j = 1, 2, ...`
    SineSeries(Vec<f64>),
    /// `sin^2(π ξ)`
    SineSquared,
    /// `16 ξ^2 (1 - ξ)^2`
    PolyBump,
    /// Piecewise-linear interpolation of samples.
    Sampled { grid: Vec<f64>, values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    a: f64,
    b: f64,
    shape: ProfileShape,
}

fn check_support(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::ProfileSupport { a, b, reason: "non-finite endpoint" });
    }
    if a <= 0.0 {
        return Err(Error::ProfileSupport { a, b, reason: "support touches the apex" });
    }
    if b <= a {
        return Err(Error::ProfileSupport { a, b, reason: "empty support" });
    }
    Ok(())
}

impl RadialProfile {
    pub fn new(a: f64, b: f64, shape: ProfileShape) -> Result<Self> {
        if let ProfileShape::Sampled { grid, values } = &shape {
            return Self::sampled(grid.clone(), values.clone());
        }
        check_support(a, b)?;
        if let ProfileShape::SineSeries(c) = &shape {
            if c.is_empty() || c.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidArgument("sine series needs finite coefficients".into()));
            }
        }
        Ok(RadialProfile { a, b, shape })
    }

    pub fn sine(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, ProfileShape::SineSeries(vec![1.0]))
    }

    pub fn sine_series(a: f64, b: f64, coeffs: Vec<f64>) -> Result<Self> {
        Self::new(a, b, ProfileShape::SineSeries(coeffs))
    }

    pub fn sine_squared(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, ProfileShape::SineSquared)
    }

    pub fn poly_bump(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, ProfileShape::PolyBump)
    }

    pub fn sampled(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() < 3 || grid.len() != values.len() {
            return Err(Error::InvalidArgument("sampled profile needs >= 3 matching samples".into()));
        }
        let (a, b) = (grid[0], *grid.last().unwrap());
        check_support(a, b)?;
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::ProfileSupport { a, b, reason: "grid not strictly increasing" });
        }
        if values[0] != 0.0 || *values.last().unwrap() != 0.0 {
            return Err(Error::ProfileSupport { a, b, reason: "values must vanish at both ends" });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite sample".into()));
        }
        Ok(RadialProfile { a, b, shape: ProfileShape::Sampled { grid, values } })
    }

    pub fn support(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn shape(&self) -> &ProfileShape {
        &self.shape
    }

    /// Points where `φ'` may jump; quadrature panels should not straddle them.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.shape {
            ProfileShape::Sampled { grid, .. } => grid.clone(),
            _ => vec![self.a, self.b],
        }
    }

    fn xi(&self, r: f64) -> f64 {
        (r - self.a) / (self.b - self.a)
    }

    pub fn value(&self, r: f64) -> f64 {
        if r <= self.a || r >= self.b {
            return 0.0;
        }
        let x = self.xi(r);
        match &self.shape {
            ProfileShape::SineSeries(c) => {
                c.iter().enumerate().map(|(j, cj)| cj * ((j + 1) as f64 * PI * x).sin()).sum()
            }
            ProfileShape::SineSquared => (PI * x).sin().powi(2),
            ProfileShape::PolyBump => 16.0 * x * x * (1.0 - x) * (1.0 - x),
            ProfileShape::Sampled { grid, values } => {
                let i = segment(grid, r);
                let t = (r - grid[i]) / (grid[i + 1] - grid[i]);
                values[i] + t * (values[i + 1] - values[i])
            }
        }
    }

    /// `dφ/dr`; one-sided from the right at breakpoints.
    pub fn deriv(&self, r: f64) -> f64 {
        if r < self.a || r >= self.b {
            return 0.0;
        }
        let x = self.xi(r);
        let len = self.b - self.a;
        match &self.shape {
            ProfileShape::SineSeries(c) => {
                c.iter()
                    .enumerate()
                    .map(|(j, cj)| {
                        let w = (j + 1) as f64 * PI;
                        cj * w * (w * x).cos()
                    })
                    .sum::<f64>()
                    / len
            }
            ProfileShape::SineSquared => PI * (2.0 * PI * x).sin() / len,
            ProfileShape::PolyBump => 32.0 * x * (1.0 - x) * (1.0 - 2.0 * x) / len,
            ProfileShape::Sampled { grid, values } => {
                let i = segment(grid, r);
                (values[i + 1] - values[i]) / (grid[i + 1] - grid[i])
            }
        }
    }

    /// `r -> φ(r / λ)`, supported on `λ [a, b]`.
    pub fn dilate(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!("dilation factor {lambda}")));
        }
        let shape = match &self.shape {
            ProfileShape::Sampled { grid, values } => ProfileShape::Sampled {
                grid: grid.iter().map(|g| g * lambda).collect(),
                values: values.clone(),
            },
            s => s.clone(),
        };
        Self::new(self.a * lambda, self.b * lambda, shape)
    }

    /// Samples onto a uniform grid of `n` intervals over the support.
    pub fn to_sampled(&self, n: usize) -> Result<Self> {
        let grid: Vec<f64> = (0..=n).map(|i| self.a + (self.b - self.a) * i as f64 / n as f64).collect();
        let mut values: Vec<f64> = grid.iter().map(|&r| self.value(r)).collect();
        values[0] = 0.0;
        values[n] = 0.0;
        Self::sampled(grid, values)
    }

    pub fn max_abs(&self, samples: usize) -> f64 {
        (0..=samples)
            .map(|i| self.value(self.a + (self.b - self.a) * i as f64 / samples as f64).abs())
            .fold(0.0, f64::max)
    }
}

fn segment(grid: &[f64], r: f64) -> usize {
    let i = grid.partition_point(|&g| g <= r);
    i.saturating_sub(1).min(grid.len() - 2)
}
