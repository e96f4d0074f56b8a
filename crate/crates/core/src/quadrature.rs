//! Composite Gauss–Legendre quadrature on panels.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    /// `order`-point rule on `[-1, 1]`; exact for polynomials of degree `2 order - 1`.
    pub fn new(order: usize) -> Self {
        let n = NonZeroUsize::new(order.max(1)).unwrap();
        if n.get() == 1 {
            return GaussRule { nodes: vec![0.0], weights: vec![2.0] };
        }
        let g = GaussLegendre::new(n);
        GaussRule { nodes: g.nodes().copied().collect(), weights: g.weights().copied().collect() }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `(node, weight)` pairs mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
        self.nodes.iter().zip(&self.weights).map(move |(x, w)| (c + h * x, h * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }

    /// `panels` equal panels between each pair of consecutive breakpoints.
    pub fn composite<F: FnMut(f64) -> f64>(&self, breaks: &[f64], panels: usize, mut f: F) -> f64 {
        let mut total = 0.0;
        for seg in breaks.windows(2) {
            let (a, b) = (seg[0], seg[1]);
            let h = (b - a) / panels as f64;
            for i in 0..panels {
                let lo = a + h * i as f64;
                let hi = if i + 1 == panels { b } else { lo + h };
                total += self.integrate(lo, hi, &mut f);
            }
        }
        total
    }
}
