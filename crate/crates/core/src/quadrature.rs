//! Gauss–Legendre rules and the graded layer map used for through-thickness
//! integration.
//!
//! Power-law grading `(y - h_i)^p` with fractional `p` has an endpoint
//! singularity in its derivatives. Every layer integral is therefore taken
//! through the substitution `y = a + (b - a) s(u)` where `s` is the degree-7
//! smoothstep polynomial, whose derivative vanishes to third order at both
//! ends. The transformed integrand is smooth enough for Gauss–Legendre to
//! converge to machine precision at 64 points.

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, then Newton on P_n.
            let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, z);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = 0.5 * (1.0 - z);
            weights[i] = 0.5 * w;
            nodes[n - 1 - i] = 0.5 * (1.0 + z);
            weights[n - 1 - i] = 0.5 * w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Plain rule on `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let len = b - a;
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&u, &w)| w * f(a + len * u))
            .sum::<f64>()
            * len
    }

    /// Nodes and weights of the graded rule on `[a, b]`.
    pub fn graded_points(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let len = b - a;
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&u, &w)| (a + len * smoothstep(u), w * len * smoothstep_slope(u)))
    }

    /// Graded rule on `[a, b]`; exact endpoints behave like any other smooth point.
    pub fn integrate_graded<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.graded_points(a, b).map(|(y, w)| w * f(y)).sum()
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn smoothstep(u: f64) -> f64 {
    u.powi(4) * (35.0 - 84.0 * u + 70.0 * u * u - 20.0 * u.powi(3))
}

fn smoothstep_slope(u: f64) -> f64 {
    140.0 * (u * (1.0 - u)).powi(3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_one() {
        for n in [1, 2, 5, 8, 64, 128] {
            let g = GaussLegendre::new(n);
            let s: f64 = g.weights.iter().sum();
            assert!((s - 1.0).abs() < 1e-14, "order {n}: {s}");
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let g = GaussLegendre::new(4);
        let v = g.integrate(-1.0, 2.0, |x| x.powi(7) - 3.0 * x.powi(2));
        let exact = (2f64.powi(8) - 1.0) / 8.0 - (8.0 + 1.0);
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn graded_rule_handles_sqrt_endpoint() {
        let g = GaussLegendre::new(64);
        let v = g.integrate_graded(0.0, 1.0, f64::sqrt);
        assert!((v - 2.0 / 3.0).abs() < 1e-14);
        let v = g.integrate_graded(-2.0, 0.0, |y| (-y).powf(0.5) * y);
        let exact = -(2f64.powf(2.5)) / 2.5;
        assert!((v - exact).abs() < 1e-13 * exact.abs());
    }

    #[test]
    fn smoothstep_maps_unit_interval() {
        assert_eq!(smoothstep(0.0), 0.0);
        assert!((smoothstep(1.0) - 1.0).abs() < 1e-15);
        assert!((smoothstep(0.5) - 0.5).abs() < 1e-15);
    }
}
