//! Plane-stress reference model built from bilinear quadrilaterals.
//!
//! The beam occupies `[0, L] × [-h/2, h/2]` on a structured `m_x × m_y`
//! grid. Every element has the same shape, so one unit-modulus stiffness is
//! scaled by the modulus at each row's centroid. `y` and the transverse
//! displacement `v` point the same way as the beam deflection `w`; the
//! uniform load acts on the `y = -h/2` face.

use nalgebra::{SMatrix, SVector};

use crate::assembly::{BoundaryCase, LoadCase};
use crate::error::{FgError, Result};
use crate::linalg::BandedSymmetric;
use crate::material::FgMaterial;
use crate::recovery::{ShearRecovery, StressProfile};

type Ke = SMatrix<f64, 8, 8>;
type Be = SMatrix<f64, 3, 8>;

const GAUSS: f64 = 0.577_350_269_189_625_8;
const GAUSS_POINTS: [(f64, f64); 4] = [(-GAUSS, -GAUSS), (GAUSS, -GAUSS), (GAUSS, GAUSS), (-GAUSS, GAUSS)];
/// Local corner order: counter-clockwise from `(-1, -1)`.
const CORNERS: [(f64, f64); 4] = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)];

#[derive(Debug, Clone)]
pub struct PlaneMesh {
    pub length: f64,
    pub height: f64,
    pub width: f64,
    pub mx: usize,
    pub my: usize,
    pub nu: f64,
    bottom: f64,
    /// Modulus of each element row, sampled at the row centroid.
    row_modulus: Vec<f64>,
}

impl PlaneMesh {
    pub fn new(length: f64, width: f64, material: &FgMaterial, mx: usize, my: usize) -> Result<Self> {
        if mx == 0 || my == 0 {
            return Err(FgError::InvalidModel("plane mesh needs at least one element each way".into()));
        }
        if !(length > 0.0 && width > 0.0) {
            return Err(FgError::InvalidModel("plane mesh needs positive length and width".into()));
        }
        let bottom = material.bottom();
        let height = material.height();
        let dy = height / my as f64;
        let row_modulus = (0..my)
            .map(|j| material.youngs_modulus(bottom + (j as f64 + 0.5) * dy))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { length, height, width, mx, my, nu: material.nu, bottom, row_modulus })
    }

    pub fn dx(&self) -> f64 {
        self.length / self.mx as f64
    }

    pub fn dy(&self) -> f64 {
        self.height / self.my as f64
    }

    pub fn node_x(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }

    pub fn node_y(&self, j: usize) -> f64 {
        self.bottom + j as f64 * self.dy()
    }

    /// Nodes are numbered through the thickness first.
    pub fn node(&self, i: usize, j: usize) -> usize {
        i * (self.my + 1) + j
    }

    pub fn node_count(&self) -> usize {
        (self.mx + 1) * (self.my + 1)
    }

    pub fn row_modulus(&self, j: usize) -> f64 {
        self.row_modulus[j]
    }

    fn element_nodes(&self, i: usize, j: usize) -> [usize; 4] {
        [self.node(i, j), self.node(i + 1, j), self.node(i + 1, j + 1), self.node(i, j + 1)]
    }

    fn element_dofs(&self, i: usize, j: usize) -> [usize; 8] {
        let n = self.element_nodes(i, j);
        [2 * n[0], 2 * n[0] + 1, 2 * n[1], 2 * n[1] + 1, 2 * n[2], 2 * n[2] + 1, 2 * n[3], 2 * n[3] + 1]
    }

    fn strain_matrix(&self, xi: f64, eta: f64) -> Be {
        let (ax, ay) = (2.0 / self.dx(), 2.0 / self.dy());
        let mut b = Be::zeros();
        for (k, (cx, cy)) in CORNERS.iter().enumerate() {
            let dn_dx = 0.25 * cx * (1.0 + cy * eta) * ax;
            let dn_dy = 0.25 * cy * (1.0 + cx * xi) * ay;
            b[(0, 2 * k)] = dn_dx;
            b[(1, 2 * k + 1)] = dn_dy;
            b[(2, 2 * k)] = dn_dy;
            b[(2, 2 * k + 1)] = dn_dx;
        }
        b
    }

    fn elasticity(&self, e: f64) -> SMatrix<f64, 3, 3> {
        let c = e / (1.0 - self.nu * self.nu);
        SMatrix::<f64, 3, 3>::new(c, c * self.nu, 0.0, c * self.nu, c, 0.0, 0.0, 0.0, c * (1.0 - self.nu) / 2.0)
    }

    /// Stiffness of one element with unit modulus and the mesh thickness.
    fn unit_stiffness(&self) -> Ke {
        let d = self.elasticity(1.0);
        let jac = self.dx() * self.dy() / 4.0;
        let mut k = Ke::zeros();
        for (xi, eta) in GAUSS_POINTS {
            let b = self.strain_matrix(xi, eta);
            k += b.transpose() * d * b * (jac * self.width);
        }
        k
    }
}

#[derive(Debug, Clone)]
pub struct PlaneModel {
    pub mesh: PlaneMesh,
    pub boundary: BoundaryCase,
    pub loads: LoadCase,
}

#[derive(Debug, Clone)]
pub struct PlaneSolution {
    model: PlaneModel,
    displacements: Vec<f64>,
    external_work: f64,
    strain_energy: f64,
}

impl PlaneModel {
    pub fn new(mesh: PlaneMesh, boundary: BoundaryCase, loads: LoadCase) -> Result<Self> {
        for p in &loads.point {
            let s = p.x / mesh.dx();
            if !(0.0..=mesh.length * (1.0 + 1e-12)).contains(&p.x) || (s - s.round()).abs() > 1e-9 {
                return Err(FgError::InvalidCase(format!(
                    "point load at x = {} mm does not lie on a node column of the plane mesh",
                    p.x
                )));
            }
        }
        Ok(Self { mesh, boundary, loads })
    }

    fn constrained_dofs(&self) -> Vec<usize> {
        let m = &self.mesh;
        let column = |i: usize| (0..=m.my).flat_map(move |j| [2 * m.node(i, j), 2 * m.node(i, j) + 1]);
        match self.boundary {
            BoundaryCase::CF => column(0).collect(),
            BoundaryCase::CC => column(0).chain(column(m.mx)).collect(),
            BoundaryCase::SS => {
                // Supports on the face opposite the load.
                let left = m.node(0, m.my);
                let right = m.node(m.mx, m.my);
                vec![2 * left, 2 * left + 1, 2 * right + 1]
            }
        }
    }

    fn load_vector(&self) -> Vec<f64> {
        let m = &self.mesh;
        let mut f = vec![0.0; 2 * m.node_count()];
        if self.loads.q0 != 0.0 {
            // Consistent load on the y = -h/2 edge: half of each edge to each end node.
            let share = self.loads.q0 * m.dx() / 2.0;
            for i in 0..m.mx {
                f[2 * m.node(i, 0) + 1] += share;
                f[2 * m.node(i + 1, 0) + 1] += share;
            }
        }
        let count = (m.my + 1) as f64;
        let sum_y2: f64 = (0..=m.my).map(|j| m.node_y(j).powi(2)).sum();
        for p in &self.loads.point {
            let i = (p.x / m.dx()).round() as usize;
            for j in 0..=m.my {
                let n = m.node(i, j);
                f[2 * n] += p.px / count - p.moment * m.node_y(j) / sum_y2;
                f[2 * n + 1] += p.py / count;
            }
        }
        f
    }

    fn stiffness(&self) -> BandedSymmetric {
        let m = &self.mesh;
        let unit = m.unit_stiffness();
        let mut k = BandedSymmetric::new(2 * m.node_count(), 2 * (m.my + 2) + 1);
        for i in 0..m.mx {
            for j in 0..m.my {
                let e = m.row_modulus(j);
                let dofs = m.element_dofs(i, j);
                for (a, &ra) in dofs.iter().enumerate() {
                    for (b, &cb) in dofs.iter().enumerate() {
                        if cb <= ra {
                            k.add(ra, cb, e * unit[(a, b)]);
                        }
                    }
                }
            }
        }
        k
    }

    pub fn solve(&self) -> Result<PlaneSolution> {
        let f = self.load_vector();
        let mut k = self.stiffness();
        let original = k.clone();
        let mut rhs = f.clone();
        for dof in self.constrained_dofs() {
            k.constrain(dof);
            rhs[dof] = 0.0;
        }
        let d = k.solve(&rhs)?;
        let kd = original.mul_vec(&d);
        let strain_energy = 0.5 * d.iter().zip(&kd).map(|(a, b)| a * b).sum::<f64>();
        let external_work = 0.5 * d.iter().zip(&f).map(|(a, b)| a * b).sum::<f64>();
        Ok(PlaneSolution { model: self.clone(), displacements: d, external_work, strain_energy })
    }
}

impl PlaneSolution {
    pub fn model(&self) -> &PlaneModel {
        &self.model
    }

    pub fn mesh(&self) -> &PlaneMesh {
        &self.model.mesh
    }

    pub fn external_work(&self) -> f64 {
        self.external_work
    }

    pub fn strain_energy(&self) -> f64 {
        self.strain_energy
    }

    pub fn nodal_displacement(&self, i: usize, j: usize) -> (f64, f64) {
        let n = self.mesh().node(i, j);
        (self.displacements[2 * n], self.displacements[2 * n + 1])
    }

    fn cell(&self, x: f64, y: f64) -> Result<(usize, usize, f64, f64)> {
        let m = self.mesh();
        if !(-1e-9..=m.length + 1e-9).contains(&x) {
            return Err(FgError::OutOfSpan { x, length: m.length });
        }
        let top = m.bottom + m.height;
        if !(m.bottom - 1e-9..=top + 1e-9).contains(&y) {
            return Err(FgError::OutOfThickness { y, bottom: m.bottom, top });
        }
        let sx = (x / m.dx()).clamp(0.0, m.mx as f64);
        let sy = ((y - m.bottom) / m.dy()).clamp(0.0, m.my as f64);
        let i = (sx.floor() as usize).min(m.mx - 1);
        let j = (sy.floor() as usize).min(m.my - 1);
        Ok((i, j, 2.0 * (sx - i as f64) - 1.0, 2.0 * (sy - j as f64) - 1.0))
    }

    fn element_vector(&self, i: usize, j: usize) -> SVector<f64, 8> {
        let dofs = self.mesh().element_dofs(i, j);
        SVector::<f64, 8>::from_fn(|a, _| self.displacements[dofs[a]])
    }

    /// Bilinear interpolation of `(u, v)`.
    pub fn displacement(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        let (i, j, xi, eta) = self.cell(x, y)?;
        let de = self.element_vector(i, j);
        let (mut u, mut v) = (0.0, 0.0);
        for (k, (cx, cy)) in CORNERS.iter().enumerate() {
            let n = 0.25 * (1.0 + cx * xi) * (1.0 + cy * eta);
            u += n * de[2 * k];
            v += n * de[2 * k + 1];
        }
        Ok((u, v))
    }

    /// Transverse displacement of the mid-height line at the monitor point.
    pub fn reported_deflection(&self) -> Result<f64> {
        let m = self.mesh();
        let x = self.model.boundary.monitor_point(m.length);
        Ok(self.displacement(x, m.bottom + m.height / 2.0)?.1)
    }

    /// `[σx, σy, τxy]` at the four Gauss points of an element.
    fn gauss_stresses(&self, i: usize, j: usize) -> [SVector<f64, 3>; 4] {
        let m = self.mesh();
        let d = m.elasticity(m.row_modulus(j));
        let de = self.element_vector(i, j);
        GAUSS_POINTS.map(|(xi, eta)| d * (m.strain_matrix(xi, eta) * de))
    }

    /// Gauss-point stresses extrapolated bilinearly to local `(ξ, η)`.
    fn extrapolated(&self, i: usize, j: usize, xi: f64, eta: f64) -> SVector<f64, 3> {
        let s = self.gauss_stresses(i, j);
        let (a, b) = (xi / GAUSS, eta / GAUSS);
        let mut out = SVector::<f64, 3>::zeros();
        for (k, (cx, cy)) in CORNERS.iter().enumerate() {
            out += s[k] * (0.25 * (1.0 + cx * a) * (1.0 + cy * b));
        }
        out
    }

    /// Stresses along the vertical line through `x`.
    ///
    /// Each element column is sampled on its centre line, where the bilinear
    /// shear strain carries no parasitic part; the two columns whose centres
    /// bracket `x` are blended linearly. `σx` is taken element by element, so
    /// interior node rows appear twice. The element shear stress is close to
    /// its thickness average, so `τ` at the node rows comes from quadratics
    /// through neighbouring element-centre values.
    pub fn stress_profile(&self, x: f64) -> Result<StressProfile> {
        let m = self.mesh();
        let mut stations = vec![0.0, m.length];
        stations.extend(self.model.loads.point.iter().map(|p| p.x));
        if stations.iter().any(|s| (x - s).abs() < m.dx()) {
            return Err(FgError::TooCloseToBoundary { x });
        }
        self.cell(x, m.bottom)?;
        let s = x / m.dx() - 0.5;
        let left = (s.floor().max(0.0) as usize).min(m.mx.saturating_sub(2));
        let t = if m.mx > 1 { (s - left as f64).clamp(0.0, 1.0) } else { 0.0 };
        let blend = |eta: f64, j: usize| {
            let mut v = self.extrapolated(left, j, 0.0, eta) * (1.0 - t);
            if t > 0.0 {
                v += self.extrapolated(left + 1, j, 0.0, eta) * t;
            }
            v
        };
        let centre: Vec<f64> = (0..m.my).map(|j| blend(0.0, j)[2]).collect();
        let centre_y = |j: usize| m.node_y(j) + 0.5 * m.dy();
        let fit = |first: usize, y: f64| {
            let k = m.my.min(3);
            let first = first.min(m.my - k);
            let mut v = 0.0;
            for a in first..first + k {
                let mut l = 1.0;
                for b in first..first + k {
                    if a != b {
                        l *= (y - centre_y(b)) / (centre_y(a) - centre_y(b));
                    }
                }
                v += l * centre[a];
            }
            v
        };
        let node_tau: Vec<f64> = (0..=m.my)
            .map(|j| {
                let y = m.node_y(j);
                if j == 0 || j == m.my {
                    fit(j.saturating_sub(2), y)
                } else {
                    0.5 * (fit(j.saturating_sub(2), y) + fit(j - 1, y))
                }
            })
            .collect();
        let (mut ys, mut sigma, mut tau) = (Vec::new(), Vec::new(), Vec::new());
        for j in 0..m.my {
            for (row, eta) in [(j, -1.0), (j + 1, 1.0)] {
                ys.push(m.node_y(row));
                sigma.push(blend(eta, j)[0]);
                tau.push(node_tau[row]);
            }
        }
        Ok(StressProfile {
            x,
            element_kind: "Q4".into(),
            recovery: ShearRecovery::Plane,
            width: m.width,
            ys,
            sigma_x: sigma,
            tau_xy: tau,
        })
    }
}
