//! Cross-section constants of the higher-order beam.
//!
//! Normal strain is `t(y)·ε` with `t(y) = [1, y - f(y), f(y)]` and the Reddy
//! cubic `f(y) = y(1 - 4y²/3h²)`. All area integrals are taken layer by layer
//! with the graded Gauss rule from [`crate::quadrature`] and multiplied by the
//! width `b`; the cumulative shear-shape integrals `S1..S3` are per unit width.

use nalgebra::{Matrix2, Matrix3, RowVector3, Vector2, Vector3};
use serde::Serialize;

use crate::error::{FgError, Result};
use crate::material::{shear_modulus, FgMaterial, GradingKind};
use crate::quadrature::GaussLegendre;

/// Width of every benchmark section, mm.
///
/// Not printed with the benchmark data. The Euler–Bernoulli columns fix it:
/// with E = 380000 N/mm² and h = 200 mm, a cantilever tip deflection of
/// 13.158 mm (PL³/3EI), a simply supported mid-span value of 82.237 mm
/// (5qL⁴/384EI) and a clamped value of 16.447 mm (qL⁴/384EI) all require
/// b = 50 mm together with P = 5e5 N and q = 5000 N/mm. The homogeneous
/// peak shear stress 75.000 N/mm² = 1.5P/(bh) confirms it.
pub const BENCHMARK_WIDTH: f64 = 50.0;

pub const DEFAULT_POINTS_PER_LAYER: usize = 64;

/// Reddy cubic `f(y)` and its slope `f,y(y)`.
pub fn shape_function(y: f64, h: f64) -> Result<(f64, f64)> {
    let tol = 1e-9 * h;
    if y.abs() > h / 2.0 + tol {
        return Err(FgError::OutOfThickness { y, bottom: -h / 2.0, top: h / 2.0 });
    }
    Ok(reddy(y, h))
}

#[inline]
pub(crate) fn reddy(y: f64, h: f64) -> (f64, f64) {
    let r = y * y / (h * h);
    (y * (1.0 - 4.0 * r / 3.0), 1.0 - 4.0 * r)
}

#[inline]
pub(crate) fn strain_row(y: f64, h: f64) -> RowVector3<f64> {
    let (f, _) = reddy(y, h);
    RowVector3::new(1.0, y - f, f)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSpec {
    pub points_per_layer: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { points_per_layer: DEFAULT_POINTS_PER_LAYER }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectionGeometry {
    pub width: f64,
    pub material: FgMaterial,
}

impl SectionGeometry {
    pub fn new(width: f64, material: FgMaterial) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(FgError::InvalidModel(format!("width {width} must be positive")));
        }
        material.validate()?;
        Ok(Self { width, material })
    }

    pub fn benchmark(kind: GradingKind, p: f64) -> Self {
        Self { width: BENCHMARK_WIDTH, material: FgMaterial::benchmark(kind, p) }
    }

    pub fn height(&self) -> f64 {
        self.material.height()
    }

    pub fn area(&self) -> f64 {
        self.width * self.height()
    }
}

/// Stiffnesses of the plane-section (Euler/first-order) kinematics
/// `u_x = u - y·(rotation)`, integrated over the same section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlaneSectionStiffness {
    /// b∫E dy
    pub axial: f64,
    /// b∫E y dy
    pub coupling: f64,
    /// b∫E y² dy
    pub bending: f64,
    /// b∫G dy
    pub shear: f64,
}

/// Coefficients of the internal-force ODE for one choice of shear stiffness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ForceFieldConstants {
    pub shear_stiffness: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub g: f64,
    pub lambda: f64,
}

impl ForceFieldConstants {
    pub fn new(flex: &Matrix3<f64>, shear_stiffness: f64) -> Result<Self> {
        let a1 = shear_stiffness * (flex[(0, 2)] - flex[(0, 1)]);
        let a2 = shear_stiffness * (flex[(1, 2)] - flex[(1, 1)]);
        let a3 = shear_stiffness * (flex[(2, 2)] - flex[(1, 2)]);
        let g = a2 - a3;
        if !(g < 0.0) {
            return Err(FgError::UnsupportedEigenBranch { g });
        }
        Ok(Self { shear_stiffness, a1, a2, a3, g, lambda: (-g).sqrt() })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectionConstants {
    /// Stiffness for `{N, M_w, M_θ}` against `{ε0, κ_w, κ_θ}`.
    pub dn: Matrix3<f64>,
    /// `dn⁻¹`.
    pub flex: Matrix3<f64>,
    /// Shear stiffness from the constitutive shear strain (traditional).
    pub ds_hat: f64,
    pub fs: Vector2<f64>,
    pub fss: Matrix2<f64>,
    /// Shear stiffness consistent with the equilibrium shear stress.
    pub ds: f64,
    /// Force-field constants built with `ds`.
    pub field: ForceFieldConstants,
    pub plane: PlaneSectionStiffness,
}

impl SectionConstants {
    pub fn g(&self) -> f64 {
        self.field.g
    }

    pub fn lambda(&self) -> f64 {
        self.field.lambda
    }
}

/// A fully evaluated cross-section: constants plus the shear-shape evaluator.
#[derive(Debug, Clone)]
pub struct Section {
    geometry: SectionGeometry,
    rule: GaussLegendre,
    constants: SectionConstants,
    /// `-∫ E t dy` (per unit width) from the bottom surface to each breakpoint.
    cumulative: Vec<Vector3<f64>>,
}

impl Section {
    pub fn new(geometry: SectionGeometry, quad: QuadratureSpec) -> Result<Self> {
        compute_section(geometry, quad)
    }

    pub fn benchmark(kind: GradingKind, p: f64) -> Result<Self> {
        Self::new(SectionGeometry::benchmark(kind, p), QuadratureSpec::default())
    }

    pub fn geometry(&self) -> &SectionGeometry {
        &self.geometry
    }

    pub fn material(&self) -> &FgMaterial {
        &self.geometry.material
    }

    pub fn constants(&self) -> &SectionConstants {
        &self.constants
    }

    pub fn width(&self) -> f64 {
        self.geometry.width
    }

    pub fn height(&self) -> f64 {
        self.geometry.height()
    }

    pub fn quadrature(&self) -> QuadratureSpec {
        QuadratureSpec { points_per_layer: self.rule.order() }
    }

    /// Force-field constants for an arbitrary shear stiffness (e.g. `ds_hat`).
    pub fn field_constants(&self, shear_stiffness: f64) -> Result<ForceFieldConstants> {
        ForceFieldConstants::new(&self.constants.flex, shear_stiffness)
    }

    /// Graded quadrature points `(y, weight)` over the whole thickness together
    /// with the layer each point belongs to.
    pub fn thickness_points(&self) -> Vec<(usize, f64, f64)> {
        let mat = &self.geometry.material;
        mat.layers()
            .enumerate()
            .flat_map(|(i, (a, b))| self.rule.graded_points(a, b).map(move |(y, w)| (i, y, w)))
            .collect()
    }

    /// `[S1, S2, S3]` at `y`, per unit width.
    pub fn cumulative_integrals(&self, y: f64) -> Result<Vector3<f64>> {
        let layer = self.geometry.material.layer_of(y)?;
        let y = y.clamp(self.geometry.material.bottom(), self.geometry.material.top());
        Ok(self.cumulative_in_layer(layer, y))
    }

    fn cumulative_in_layer(&self, layer: usize, y: f64) -> Vector3<f64> {
        let start = self.geometry.material.breakpoints[layer];
        let mut s = self.cumulative[layer];
        if y > start {
            s -= partial_moment(&self.rule, &self.geometry.material, layer, start, y);
        }
        s
    }

    /// `(S_w, S_θ)`: shear-stress shapes multiplying `M_w,x` and `M_θ,x`.
    pub fn shear_shape(&self, y: f64) -> Result<(f64, f64)> {
        let s = self.cumulative_integrals(y)?;
        Ok(self.combine(&s))
    }

    /// Shear shape evaluated with the law of a given layer, so interface
    /// limits can be taken from either side.
    pub fn shear_shape_in_layer(&self, layer: usize, y: f64) -> (f64, f64) {
        self.combine(&self.cumulative_in_layer(layer, y))
    }

    fn combine(&self, s: &Vector3<f64>) -> (f64, f64) {
        let row = s.transpose() * self.constants.flex;
        (row[1], row[2])
    }

    pub fn youngs_modulus(&self, y: f64) -> Result<f64> {
        self.geometry.material.youngs_modulus(y)
    }

    pub fn shear_modulus(&self, y: f64) -> Result<f64> {
        self.geometry.material.shear_modulus(y)
    }

    /// Normal stress `E(y) t(y) F_n σ` for resultants `σ = {N, M_w, M_θ}`.
    pub fn normal_stress(&self, y: f64, resultants: &Vector3<f64>) -> Result<f64> {
        let e = self.youngs_modulus(y)?;
        let strain = self.constants.flex * resultants;
        Ok(e * (strain_row(y, self.height()) * strain)[0])
    }

    /// Equilibrium shear stress `S_w M_w,x + S_θ M_θ,x`.
    pub fn shear_stress(&self, y: f64, tau: &Vector2<f64>) -> Result<f64> {
        let (sw, st) = self.shear_shape(y)?;
        Ok(sw * tau[0] + st * tau[1])
    }
}

fn partial_moment(rule: &GaussLegendre, mat: &FgMaterial, layer: usize, a: f64, b: f64) -> Vector3<f64> {
    let h = mat.height();
    rule.graded_points(a, b)
        .map(|(y, w)| strain_row(y, h).transpose() * (w * mat.modulus_in_layer(layer, y)))
        .fold(Vector3::zeros(), |acc, v| acc + v)
}

/// All section constants by through-thickness quadrature.
pub fn compute_constants(geom: &SectionGeometry, quad: QuadratureSpec) -> Result<SectionConstants> {
    Ok(compute_section(geom.clone(), quad)?.constants)
}

fn compute_section(geometry: SectionGeometry, quad: QuadratureSpec) -> Result<Section> {
    if quad.points_per_layer < 8 {
        return Err(FgError::InvalidModel(format!(
            "quadrature order {} per layer is below the minimum of 8",
            quad.points_per_layer
        )));
    }
    let rule = GaussLegendre::new(quad.points_per_layer);
    let mat = &geometry.material;
    let b = geometry.width;
    let h = mat.height();

    let mut dn = Matrix3::zeros();
    let mut ds_hat = 0.0;
    let mut plane = PlaneSectionStiffness { axial: 0.0, coupling: 0.0, bending: 0.0, shear: 0.0 };
    let mut cumulative = vec![Vector3::zeros()];
    for (layer, (a, top)) in mat.layers().enumerate() {
        let mut moment = Vector3::zeros();
        for (y, w) in rule.graded_points(a, top) {
            let e = mat.modulus_in_layer(layer, y);
            let g = shear_modulus(e, mat.nu);
            let t = strain_row(y, h);
            let (_, fy) = reddy(y, h);
            dn += t.transpose() * t * (w * e);
            moment += t.transpose() * (w * e);
            ds_hat += w * g * fy * fy;
            plane.axial += w * e;
            plane.coupling += w * e * y;
            plane.bending += w * e * y * y;
            plane.shear += w * g;
        }
        let last = cumulative[cumulative.len() - 1];
        cumulative.push(last - moment);
    }
    dn *= b;
    ds_hat *= b;
    plane.axial *= b;
    plane.coupling *= b;
    plane.bending *= b;
    plane.shear *= b;
    // Exact symmetry for the Cholesky check.
    dn = (dn + dn.transpose()) * 0.5;

    let chol = dn.cholesky().ok_or(FgError::NonPositiveDefinite("normal-stress stiffness D_n"))?;
    let flex = chol.inverse();
    let flex = (flex + flex.transpose()) * 0.5;

    let mut section = Section {
        geometry,
        rule,
        constants: SectionConstants {
            dn,
            flex,
            ds_hat,
            fs: Vector2::zeros(),
            fss: Matrix2::zeros(),
            ds: 0.0,
            field: ForceFieldConstants { shear_stiffness: 0.0, a1: 0.0, a2: 0.0, a3: 0.0, g: 0.0, lambda: 0.0 },
            plane,
        },
        cumulative,
    };

    // Nested integrals need S(y) at every quadrature point.
    let mut fs = Vector2::zeros();
    let mut fss = Matrix2::zeros();
    let mat = &section.geometry.material;
    for (layer, (a, top)) in mat.layers().enumerate() {
        for (y, w) in section.rule.graded_points(a, top) {
            let (sw, st) = section.shear_shape_in_layer(layer, y);
            let s = Vector2::new(sw, st);
            let (_, fy) = reddy(y, h);
            let g = shear_modulus(mat.modulus_in_layer(layer, y), mat.nu);
            fs += s * (w * fy);
            fss += s * s.transpose() * (w / g);
        }
    }
    fs *= b;
    fss *= b;
    fss = (fss + fss.transpose()) * 0.5;
    let fss_chol = fss.cholesky().ok_or(FgError::NonPositiveDefinite("shear flexibility f_ss"))?;
    let ds = fs.dot(&fss_chol.solve(&fs));
    if !(ds > 0.0) || !(ds_hat > 0.0) {
        return Err(FgError::NonPositiveDefinite("shear stiffness"));
    }
    let field = ForceFieldConstants::new(&flex, ds)?;

    let c = &mut section.constants;
    c.fs = fs;
    c.fss = fss;
    c.ds = ds;
    c.field = field;
    Ok(section)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::{E_ALUMINA, BENCHMARK_POISSON};

    fn homogeneous() -> Section {
        let m = FgMaterial::homogeneous(E_ALUMINA, BENCHMARK_POISSON, 200.0).unwrap();
        Section::new(SectionGeometry::new(50.0, m).unwrap(), QuadratureSpec::default()).unwrap()
    }

    #[test]
    fn reddy_shape_values() {
        assert_eq!(shape_function(0.0, 200.0).unwrap(), (0.0, 1.0));
        let (f, fy) = shape_function(100.0, 200.0).unwrap();
        assert!((f - 200.0 / 3.0).abs() < 1e-12 && fy.abs() < 1e-15);
        let (f, fy) = shape_function(-100.0, 200.0).unwrap();
        assert!((f + 200.0 / 3.0).abs() < 1e-12 && fy.abs() < 1e-15);
        assert!(matches!(shape_function(101.0, 200.0), Err(FgError::OutOfThickness { .. })));
    }

    #[test]
    fn homogeneous_traditional_shear_stiffness() {
        let s = homogeneous();
        let g = shear_modulus(E_ALUMINA, BENCHMARK_POISSON);
        let expected = 8.0 / 15.0 * g * 50.0 * 200.0;
        assert!((s.constants().ds_hat - expected).abs() < 1e-10 * expected);
        // Equilibrium and constitutive shear shapes coincide for a homogeneous section.
        assert!((s.constants().ds - expected).abs() < 1e-9 * expected);
    }

    #[test]
    fn homogeneous_plane_stiffness() {
        let s = homogeneous();
        let p = s.constants().plane;
        let ei = E_ALUMINA * 50.0 * 200f64.powi(3) / 12.0;
        assert!((p.bending - ei).abs() < 1e-10 * ei);
        assert!(p.coupling.abs() < 1e-12 * p.axial * 200.0);
    }

    #[test]
    fn flexibility_inverts_stiffness() {
        for kind in [GradingKind::TypeA, GradingKind::TypeB, GradingKind::TypeC] {
            for p in [0.0, 0.5, 1.0, 5.0, 10.0] {
                let s = Section::benchmark(kind, p).unwrap();
                let c = s.constants();
                let prod = c.dn * c.flex;
                let err = (prod - Matrix3::identity()).abs().max();
                assert!(err < 1e-10, "{kind} p={p}: {err:e}");
            }
        }
    }

    #[test]
    fn shear_shape_vanishes_at_surfaces() {
        let s = Section::benchmark(GradingKind::TypeC, 5.0).unwrap();
        assert_eq!(s.shear_shape(-100.0).unwrap(), (0.0, 0.0));
        let (mid_w, mid_t) = s.shear_shape(0.0).unwrap();
        let (w, t) = s.shear_shape(100.0).unwrap();
        assert!(w.abs() < 1e-9 * mid_w.abs() && t.abs() < 1e-9 * mid_t.abs());
    }

    #[test]
    fn positive_eigen_branch_rejected() {
        let flex = Matrix3::new(1.0, 0.0, 0.0, 0.0, 1.0, 2.0, 0.0, 2.0, 1.0);
        // f23 - f22 - f33 + f23 = 2 > 0
        assert!(matches!(
            ForceFieldConstants::new(&flex, 1.0),
            Err(FgError::UnsupportedEigenBranch { .. })
        ));
    }

    #[test]
    fn low_quadrature_order_rejected() {
        let r = Section::new(SectionGeometry::benchmark(GradingKind::TypeA, 1.0), QuadratureSpec { points_per_layer: 4 });
        assert!(matches!(r, Err(FgError::InvalidModel(_))));
    }
}
