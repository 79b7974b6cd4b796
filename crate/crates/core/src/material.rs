//! Power-law graded material through the beam thickness.
//!
//! Three layouts are supported: a single graded layer (type A), a sandwich
//! with graded faces and a ceramic core (type B), and a sandwich with a
//! graded core between a metal bottom face and a ceramic top face (type C).
//! `y` is measured from the mid-plane, `breakpoints` run from the bottom
//! surface to the top surface.

use serde::{Deserialize, Serialize};

use crate::error::{FgError, Result};

/// Aluminium, N/mm².
pub const E_ALUMINIUM: f64 = 70_000.0;
/// Alumina, N/mm².
pub const E_ALUMINA: f64 = 380_000.0;
pub const BENCHMARK_POISSON: f64 = 0.3;
/// Section height of every benchmark beam, mm.
pub const BENCHMARK_HEIGHT: f64 = 200.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GradingKind {
    #[serde(alias = "A", alias = "a", alias = "type_a")]
    TypeA,
    #[serde(alias = "B", alias = "b", alias = "type_b")]
    TypeB,
    #[serde(alias = "C", alias = "c", alias = "type_c")]
    TypeC,
}

impl GradingKind {
    pub fn breakpoint_count(self) -> usize {
        match self {
            GradingKind::TypeA => 2,
            GradingKind::TypeB | GradingKind::TypeC => 4,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            GradingKind::TypeA => "A",
            GradingKind::TypeB => "B",
            GradingKind::TypeC => "C",
        }
    }
}

impl std::fmt::Display for GradingKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FgMaterial {
    pub kind: GradingKind,
    /// Metal modulus, N/mm².
    pub e_m: f64,
    /// Ceramic modulus, N/mm².
    pub e_c: f64,
    pub nu: f64,
    /// Power-law index.
    pub p: f64,
    /// Layer boundaries from bottom to top surface, mm.
    pub breakpoints: Vec<f64>,
}

impl FgMaterial {
    pub fn new(
        kind: GradingKind,
        e_m: f64,
        e_c: f64,
        nu: f64,
        p: f64,
        breakpoints: Vec<f64>,
    ) -> Result<Self> {
        let mat = Self { kind, e_m, e_c, nu, p, breakpoints };
        mat.validate()?;
        Ok(mat)
    }

    /// Aluminium/alumina beam of height 200 mm with the benchmark layer layout
    /// (`-100, 100` for type A and `-100, -40, 40, 100` for types B and C).
    pub fn benchmark(kind: GradingKind, p: f64) -> Self {
        let breakpoints = match kind {
            GradingKind::TypeA => vec![-100.0, 100.0],
            GradingKind::TypeB | GradingKind::TypeC => vec![-100.0, -40.0, 40.0, 100.0],
        };
        Self::new(kind, E_ALUMINIUM, E_ALUMINA, BENCHMARK_POISSON, p, breakpoints)
            .expect("benchmark material is valid")
    }

    /// Single homogeneous layer with modulus `e`.
    pub fn homogeneous(e: f64, nu: f64, height: f64) -> Result<Self> {
        Self::new(GradingKind::TypeA, e, e, nu, 0.0, vec![-height / 2.0, height / 2.0])
    }

    pub fn validate(&self) -> Result<()> {
        let bp = &self.breakpoints;
        if bp.len() != self.kind.breakpoint_count() {
            return Err(FgError::InvalidModel(format!(
                "type {} needs {} breakpoints, got {}",
                self.kind,
                self.kind.breakpoint_count(),
                bp.len()
            )));
        }
        if bp.iter().any(|v| !v.is_finite()) || bp.windows(2).any(|w| w[1] <= w[0]) {
            return Err(FgError::InvalidModel(format!(
                "breakpoints must be finite and strictly increasing: {bp:?}"
            )));
        }
        let h = bp[bp.len() - 1] - bp[0];
        if (bp[0] + h / 2.0).abs() > 1e-9 * h {
            return Err(FgError::InvalidModel(format!(
                "section must be centred on the mid-plane: bottom {} top {}",
                bp[0],
                bp[bp.len() - 1]
            )));
        }
        if !(self.e_m > 0.0 && self.e_c > 0.0) {
            return Err(FgError::InvalidModel("moduli must be positive".into()));
        }
        if !(0.0..0.5).contains(&self.nu) {
            return Err(FgError::InvalidModel(format!("Poisson ratio {} outside [0, 0.5)", self.nu)));
        }
        if !(self.p >= 0.0 && self.p.is_finite()) {
            return Err(FgError::InvalidModel(format!("power-law index {} must be >= 0", self.p)));
        }
        Ok(())
    }

    pub fn bottom(&self) -> f64 {
        self.breakpoints[0]
    }

    pub fn top(&self) -> f64 {
        self.breakpoints[self.breakpoints.len() - 1]
    }

    pub fn height(&self) -> f64 {
        self.top() - self.bottom()
    }

    pub fn layer_count(&self) -> usize {
        self.breakpoints.len() - 1
    }

    /// `(bottom, top)` of each layer.
    pub fn layers(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.breakpoints.windows(2).map(|w| (w[0], w[1]))
    }

    /// Index of the layer containing `y`; ties at interior breakpoints go to
    /// the upper layer.
    pub fn layer_of(&self, y: f64) -> Result<usize> {
        let tol = 1e-9 * self.height();
        if y < self.bottom() - tol || y > self.top() + tol {
            return Err(FgError::OutOfThickness { y, bottom: self.bottom(), top: self.top() });
        }
        let n = self.layer_count();
        Ok(self.breakpoints[1..n].iter().take_while(|&&b| y >= b).count())
    }

    pub fn volume_fraction(&self, y: f64) -> Result<f64> {
        let layer = self.layer_of(y)?;
        Ok(self.volume_fraction_in_layer(layer, y))
    }

    pub fn youngs_modulus(&self, y: f64) -> Result<f64> {
        let layer = self.layer_of(y)?;
        Ok(self.modulus_in_layer(layer, y))
    }

    pub fn shear_modulus(&self, y: f64) -> Result<f64> {
        Ok(shear_modulus(self.youngs_modulus(y)?, self.nu))
    }

    /// Volume fraction evaluated with the law of `layer`, also used for its
    /// one-sided limits at the layer ends.
    pub fn volume_fraction_in_layer(&self, layer: usize, y: f64) -> f64 {
        let bp = &self.breakpoints;
        let v = match (self.kind, layer) {
            (GradingKind::TypeA, _) => self.power((y - bp[0]) / (bp[1] - bp[0])),
            (GradingKind::TypeB, 0) => self.power((y - bp[0]) / (bp[1] - bp[0])),
            (GradingKind::TypeB, 1) => 1.0,
            (GradingKind::TypeB, _) => self.power((y - bp[3]) / (bp[2] - bp[3])),
            (GradingKind::TypeC, 0) => 0.0,
            (GradingKind::TypeC, 1) => self.power((y - bp[1]) / (bp[2] - bp[1])),
            (GradingKind::TypeC, _) => 1.0,
        };
        v.clamp(0.0, 1.0)
    }

    pub fn modulus_in_layer(&self, layer: usize, y: f64) -> f64 {
        self.e_m + (self.e_c - self.e_m) * self.volume_fraction_in_layer(layer, y)
    }

    // 0^0 = 1: a zero index makes the whole graded branch ceramic.
    fn power(&self, s: f64) -> f64 {
        if self.p == 0.0 {
            1.0
        } else {
            s.max(0.0).powf(self.p)
        }
    }
}

pub fn shear_modulus(e: f64, nu: f64) -> f64 {
    e / (2.0 * (1.0 + nu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn type_a_zero_index_is_ceramic_everywhere() {
        let m = FgMaterial::benchmark(GradingKind::TypeA, 0.0);
        for y in [-100.0, -37.0, 0.0, 100.0] {
            assert_eq!(m.volume_fraction(y).unwrap(), 1.0);
            assert_eq!(m.youngs_modulus(y).unwrap(), 380_000.0);
        }
    }

    #[test]
    fn type_b_core_is_ceramic() {
        let m = FgMaterial::benchmark(GradingKind::TypeB, 5.0);
        assert_eq!(m.volume_fraction(0.0).unwrap(), 1.0);
    }

    #[test]
    fn type_c_core_midpoint() {
        let m = FgMaterial::benchmark(GradingKind::TypeC, 2.0);
        assert!((m.volume_fraction(0.0).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn type_c_core_junction_is_metal() {
        let m = FgMaterial::benchmark(GradingKind::TypeC, 1.0);
        assert_eq!(m.youngs_modulus(-40.0).unwrap(), 70_000.0);
    }

    #[test]
    fn type_a_linear_midpoint() {
        let m = FgMaterial::benchmark(GradingKind::TypeA, 1.0);
        assert!((m.youngs_modulus(0.0).unwrap() - 225_000.0).abs() < 1e-9);
    }

    #[test]
    fn shear_modulus_values() {
        assert!((shear_modulus(380_000.0, 0.3) - 146_153.846_153_846_15).abs() < 1e-8);
        assert!((shear_modulus(70_000.0, 0.3) - 26_923.076_923_076_92).abs() < 1e-9);
        assert_eq!(shear_modulus(1000.0, 0.0), 500.0);
    }

    #[test]
    fn type_c_zero_index_faces() {
        let m = FgMaterial::benchmark(GradingKind::TypeC, 0.0);
        assert_eq!(m.youngs_modulus(-70.0).unwrap(), E_ALUMINIUM);
        assert_eq!(m.youngs_modulus(0.0).unwrap(), E_ALUMINA);
        assert_eq!(m.youngs_modulus(70.0).unwrap(), E_ALUMINA);
    }

    #[test]
    fn out_of_thickness_is_rejected() {
        let m = FgMaterial::benchmark(GradingKind::TypeB, 1.0);
        assert!(matches!(m.volume_fraction(100.5), Err(FgError::OutOfThickness { .. })));
        assert!(m.volume_fraction(100.0 + 1e-10).is_ok());
    }

    #[test]
    fn breakpoint_count_mismatch_is_rejected() {
        let r = FgMaterial::new(GradingKind::TypeB, 7e4, 3.8e5, 0.3, 1.0, vec![-100.0, 100.0]);
        assert!(matches!(r, Err(FgError::InvalidModel(_))));
        let r = FgMaterial::new(GradingKind::TypeA, 7e4, 3.8e5, 0.3, 1.0, vec![-100.0, 0.0, 100.0]);
        assert!(matches!(r, Err(FgError::InvalidModel(_))));
    }

    #[test]
    fn interior_tie_uses_upper_layer() {
        let m = FgMaterial::benchmark(GradingKind::TypeC, 1.0);
        assert_eq!(m.layer_of(-40.0).unwrap(), 1);
        assert_eq!(m.layer_of(40.0).unwrap(), 2);
    }

    fn kind_strategy() -> impl Strategy<Value = GradingKind> {
        prop_oneof![Just(GradingKind::TypeA), Just(GradingKind::TypeB), Just(GradingKind::TypeC)]
    }

    proptest! {
        #[test]
        fn fraction_in_unit_interval(kind in kind_strategy(), p in 0.0f64..12.0, s in 0.0f64..=1.0) {
            let m = FgMaterial::benchmark(kind, p);
            let y = -100.0 + 200.0 * s;
            let v = m.volume_fraction(y).unwrap();
            prop_assert!((0.0..=1.0).contains(&v));
            let e = m.youngs_modulus(y).unwrap();
            prop_assert!((E_ALUMINIUM..=E_ALUMINA).contains(&e));
        }

        #[test]
        fn type_a_monotone(p in 0.01f64..12.0, s1 in 0.0f64..=1.0, s2 in 0.0f64..=1.0) {
            let m = FgMaterial::benchmark(GradingKind::TypeA, p);
            let (lo, hi) = if s1 <= s2 { (s1, s2) } else { (s2, s1) };
            let a = m.volume_fraction(-100.0 + 200.0 * lo).unwrap();
            let b = m.volume_fraction(-100.0 + 200.0 * hi).unwrap();
            prop_assert!(a <= b);
        }

        #[test]
        fn continuous_at_interior_breakpoints(kind in kind_strategy(), p in 0.01f64..12.0) {
            let m = FgMaterial::benchmark(kind, p);
            for (i, &y) in m.breakpoints[1..m.breakpoints.len() - 1].iter().enumerate() {
                let below = m.volume_fraction_in_layer(i, y);
                let above = m.volume_fraction_in_layer(i + 1, y);
                prop_assert!((below - above).abs() < 1e-12);
            }
        }
    }
}
