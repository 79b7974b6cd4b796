//! Force-based higher-order shear beam element.
//!
//! The internal forces of one element are the closed-form solution of the
//! equilibrium equations for a uniform transverse load `q0`:
//!
//! ```text
//! N   = c0
//! Q   = c1 - q0 x
//! M   = c2 + c1 x - q0 x²/2
//! M_w = -(a1 c0 + a3 c1 x + a3 c2)/g + c3' e₊(x) + c4 e₋(x)
//!       + (a3/g) q0 x²/2 - (a2/g²) q0
//! M_θ = M - M_w,   Q_θ = Q - M_w,x = M_θ,x
//! ```
//!
//! with `e₊(x) = exp(λ(x - L))` and `e₋(x) = exp(-λx)`. The rising exponential
//! is anchored at the element end so both stay in `(0, 1]` even when `λL` is in
//! the hundreds; `c3'` is the force parameter attached to it.
//!
//! Generalized displacements follow by integrating `ε = F_n σ` and
//! `w_x - θ = Q_θ / D_s` from the start node. Each field is stored as a small
//! coefficient table over the function set `{1, x, x², e₊, e₋}`, so single and
//! double integrals are taken in closed form.

use nalgebra::{Matrix3, RowSVector, SMatrix, SVector, Vector2, Vector3, Vector4};

use crate::conventions::{DOFS_PER_NODE, FORCE_PARAMETERS};
use crate::error::{FgError, Result};
use crate::linalg::solve_dense;
use crate::section::{ForceFieldConstants, Section};

pub type Beta = SVector<f64, FORCE_PARAMETERS>;
pub type NodeState = Vector4<f64>;
pub type Row5 = RowSVector<f64, FORCE_PARAMETERS>;

/// Number of unknowns of one element: two nodes and the force parameters.
pub const ELEMENT_UNKNOWNS: usize = 2 * DOFS_PER_NODE + FORCE_PARAMETERS;

/// Which shear stiffness closes the force field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShearModel {
    /// Stiffness consistent with the equilibrium shear stress (PFTS).
    Modified,
    /// Constitutive (traditional) stiffness (PFTS-T).
    Traditional,
}

impl ShearModel {
    pub fn stiffness(self, section: &Section) -> f64 {
        match self {
            ShearModel::Modified => section.constants().ds,
            ShearModel::Traditional => section.constants().ds_hat,
        }
    }
}

/// External forces on one element end, `(P_x, P_y, M)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NodalForces {
    pub px: f64,
    pub py: f64,
    pub moment: f64,
}

impl NodalForces {
    pub fn new(px: f64, py: f64, moment: f64) -> Self {
        Self { px, py, moment }
    }

    /// Right-hand side of the end equilibrium rows `{N, Q, M_w, M_θ}`; the
    /// applied moment enters the bending row with the resultant sign.
    pub fn end_vector(&self) -> Vector4<f64> {
        Vector4::new(self.px, self.py, 0.0, -self.moment)
    }

    /// Generalized forces conjugate to `(u, w, w_x, θ)`.
    pub fn work_vector(&self) -> Vector4<f64> {
        Vector4::new(self.px, self.py, 0.0, self.moment)
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self { px: self.px * k, py: self.py * k, moment: self.moment * k }
    }
}

const ONE: usize = 0;
const X: usize = 1;
const X2: usize = 2;
const EP: usize = 3;
const EM: usize = 4;
/// Column of the load intensity in a coefficient table.
const LOAD: usize = 5;

/// Field `Σ_k φ_k(x) · coef[k] · (β, q0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct FieldExpr {
    coef: [[f64; 6]; 5],
}

impl FieldExpr {
    fn zero() -> Self {
        Self { coef: [[0.0; 6]; 5] }
    }

    fn set(mut self, function: usize, column: usize, v: f64) -> Self {
        self.coef[function][column] = v;
        self
    }

    fn sub(&self, other: &Self) -> Self {
        let mut out = *self;
        for k in 0..5 {
            for j in 0..6 {
                out.coef[k][j] -= other.coef[k][j];
            }
        }
        out
    }

    /// `(row multiplying β, coefficient of q0)` for function values `phi`.
    fn row(&self, phi: &[f64; 5]) -> (Row5, f64) {
        let mut row = Row5::zeros();
        let mut load = 0.0;
        for (k, &p) in phi.iter().enumerate() {
            for j in 0..FORCE_PARAMETERS {
                row[j] += p * self.coef[k][j];
            }
            load += p * self.coef[k][LOAD];
        }
        (row, load)
    }
}

/// Closed-form basis of one element with length `L`.
#[derive(Debug, Clone)]
pub struct ForceFieldBasis {
    length: f64,
    constants: ForceFieldConstants,
    flex: Matrix3<f64>,
    axial: FieldExpr,
    mw: FieldExpr,
    mt: FieldExpr,
    moment: FieldExpr,
    shear: FieldExpr,
    mw_x: FieldExpr,
    qt: FieldExpr,
}

impl ForceFieldBasis {
    pub fn new(section: &Section, model: ShearModel, length: f64) -> Result<Self> {
        Self::with_shear_stiffness(section, model.stiffness(section), length)
    }

    /// Basis closed with an arbitrary shear stiffness.
    pub fn with_shear_stiffness(section: &Section, shear_stiffness: f64, length: f64) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(FgError::InvalidModel(format!("element length {length} must be positive")));
        }
        let constants = section.field_constants(shear_stiffness)?;
        Ok(Self::from_constants(constants, section.constants().flex, length))
    }

    pub fn from_constants(constants: ForceFieldConstants, flex: Matrix3<f64>, length: f64) -> Self {
        let ForceFieldConstants { a1, a2, a3, g, lambda, .. } = constants;
        let k1 = a1 / g;
        let k3 = a3 / g;
        let axial = FieldExpr::zero().set(ONE, 0, 1.0);
        let moment = FieldExpr::zero().set(ONE, 2, 1.0).set(X, 1, 1.0).set(X2, LOAD, -0.5);
        let shear = FieldExpr::zero().set(ONE, 1, 1.0).set(X, LOAD, -1.0);
        let mw = FieldExpr::zero()
            .set(ONE, 0, -k1)
            .set(ONE, 2, -k3)
            .set(ONE, LOAD, -a2 / (g * g))
            .set(X, 1, -k3)
            .set(X2, LOAD, 0.5 * k3)
            .set(EP, 3, 1.0)
            .set(EM, 4, 1.0);
        let mw_x = FieldExpr::zero()
            .set(ONE, 1, -k3)
            .set(X, LOAD, k3)
            .set(EP, 3, lambda)
            .set(EM, 4, -lambda);
        let mt = moment.sub(&mw);
        let qt = shear.sub(&mw_x);
        Self { length, constants, flex, axial, mw, mt, moment, shear, mw_x, qt }
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn constants(&self) -> &ForceFieldConstants {
        &self.constants
    }

    pub fn shear_stiffness(&self) -> f64 {
        self.constants.shear_stiffness
    }

    fn check(&self, x: f64) -> Result<()> {
        let tol = 1e-12 * self.length;
        if x < -tol || x > self.length + tol || !x.is_finite() {
            return Err(FgError::OutOfSpan { x, length: self.length });
        }
        Ok(())
    }

    /// Function values (`order` 0), first (`1`) or second (`2`) antiderivative
    /// from 0 of `{1, x, x², e₊, e₋}`.
    fn phi(&self, x: f64, order: u8) -> [f64; 5] {
        let lam = self.constants.lambda;
        let l = self.length;
        let ep = (lam * (x - l)).exp();
        let em = (-lam * x).exp();
        let e0 = (-lam * l).exp();
        let t = lam * x;
        match order {
            0 => [1.0, x, x * x, ep, em],
            1 => [x, x * x / 2.0, x.powi(3) / 3.0, (ep - e0) / lam, -(-t).exp_m1() / lam],
            _ => {
                let ep2 = if t < 0.1 {
                    // e0 (e^t - 1 - t) / λ²
                    e0 * series_tail(t, false) / (lam * lam)
                } else {
                    (ep - e0) / (lam * lam) - x * e0 / lam
                };
                let em2 = if t < 0.1 {
                    series_tail(t, true) / (lam * lam)
                } else {
                    (t + (-t).exp_m1()) / (lam * lam)
                };
                [x * x / 2.0, x.powi(3) / 6.0, x.powi(4) / 12.0, ep2, em2]
            }
        }
    }

    fn sigma_rows(&self, phi: &[f64; 5]) -> (SMatrix<f64, 3, 5>, Vector3<f64>) {
        let mut m = SMatrix::<f64, 3, 5>::zeros();
        let mut f = Vector3::zeros();
        for (i, e) in [&self.axial, &self.mw, &self.mt].into_iter().enumerate() {
            let (row, load) = e.row(phi);
            m.set_row(i, &row);
            f[i] = load;
        }
        (m, f)
    }

    /// `N_σ(x)` and the load part `F_σ(x)` per unit `q0`.
    pub fn n_sigma(&self, x: f64) -> (SMatrix<f64, 3, 5>, Vector3<f64>) {
        self.sigma_rows(&self.phi(x, 0))
    }

    /// `N_r(x)` and `F_r(x)` per unit `q0` for `Q_θ`.
    pub fn n_r(&self, x: f64) -> (Row5, f64) {
        self.qt.row(&self.phi(x, 0))
    }

    /// End-force matrix `P(x)` for `{N, Q, M_w, M_θ}` and its load part per
    /// unit `q0`.
    pub fn p_matrix(&self, x: f64) -> (SMatrix<f64, 4, 5>, Vector4<f64>) {
        let phi = self.phi(x, 0);
        let mut m = SMatrix::<f64, 4, 5>::zeros();
        let mut f = Vector4::zeros();
        for (i, e) in [&self.axial, &self.shear, &self.mw, &self.mt].into_iter().enumerate() {
            let (row, load) = e.row(&phi);
            m.set_row(i, &row);
            f[i] = load;
        }
        (m, f)
    }

    /// Rows of `{M_w,x, M_θ,x}` and their load part per unit `q0`.
    pub fn tau_matrix(&self, x: f64) -> (SMatrix<f64, 2, 5>, Vector2<f64>) {
        let phi = self.phi(x, 0);
        let mut m = SMatrix::<f64, 2, 5>::zeros();
        let mut f = Vector2::zeros();
        for (i, e) in [&self.mw_x, &self.qt].into_iter().enumerate() {
            let (row, load) = e.row(&phi);
            m.set_row(i, &row);
            f[i] = load;
        }
        (m, f)
    }

    /// All internal-force resultants at `x`.
    pub fn resultant_fields(&self, beta: &Beta, q0: f64, x: f64) -> Result<Resultants> {
        self.check(x)?;
        let phi = self.phi(x, 0);
        let ev = |e: &FieldExpr| {
            let (row, load) = e.row(&phi);
            (row * beta)[0] + load * q0
        };
        Ok(Resultants {
            axial: ev(&self.axial),
            mw: ev(&self.mw),
            mt: ev(&self.mt),
            qt: ev(&self.qt),
            moment: ev(&self.moment),
            shear: ev(&self.shear),
            mw_x: ev(&self.mw_x),
        })
    }

    /// `{M_w,x, M_θ,x}`, the section quantities driving the shear stress.
    pub fn tau_parameters(&self, beta: &Beta, q0: f64, x: f64) -> Result<Vector2<f64>> {
        self.check(x)?;
        let (m, f) = self.tau_matrix(x);
        Ok(m * beta + f * q0)
    }

    /// Displacement shape rows at `x`, in the order `u, w, w_x, θ, w_s`.
    pub fn displacement_shapes(&self, x: f64) -> Result<DisplacementShapes> {
        self.check(x)?;
        let (i1, u1) = self.sigma_rows(&self.phi(x, 1));
        let (i2, u2) = self.sigma_rows(&self.phi(x, 2));
        let s1 = self.flex * i1;
        let s2 = self.flex * i2;
        let l1 = self.flex * u1;
        let l2 = self.flex * u2;
        let (qt1, qt1_load) = self.qt.row(&self.phi(x, 1));
        let inv_ds = 1.0 / self.constants.shear_stiffness;

        let mut rows = SMatrix::<f64, 5, 5>::zeros();
        let mut load = SVector::<f64, 5>::zeros();
        // u' = ε0
        rows.set_row(0, &s1.row(0));
        load[0] = l1[0];
        // w'' = -κ_w
        rows.set_row(1, &(-s2.row(1)));
        load[1] = -l2[1];
        rows.set_row(2, &(-s1.row(1)));
        load[2] = -l1[1];
        // θ' = -κ_θ
        rows.set_row(3, &(-s1.row(2)));
        load[3] = -l1[2];
        // w_s' = θ + Q_θ / D_s
        rows.set_row(4, &(-s2.row(2) + qt1 * inv_ds));
        load[4] = -l2[2] + qt1_load * inv_ds;
        Ok(DisplacementShapes { x, rows, load })
    }

    /// Generalized displacements inside the element from the start-node state.
    pub fn displacements(&self, start: &NodeState, beta: &Beta, q0: f64, x: f64) -> Result<Displacements> {
        let d = self.displacement_shapes(x)?;
        let v = d.rows * beta + d.load * q0;
        Ok(Displacements {
            u: start[0] + v[0],
            w: start[1] + x * start[2] + v[1],
            w_x: start[2] + v[2],
            theta: start[3] + v[3],
            w_s: start[1] + x * start[3] + v[4],
        })
    }

    /// The element system: four start-node and four end-node equilibrium rows
    /// followed by five compatibility rows, unknowns `[φ_a, φ_b, β]`.
    pub fn element_system(&self, q0: f64, start: NodalForces, end: NodalForces) -> ElementSystem {
        let l = self.length;
        let mut a = SMatrix::<f64, ELEMENT_UNKNOWNS, ELEMENT_UNKNOWNS>::zeros();
        let mut rhs = SVector::<f64, ELEMENT_UNKNOWNS>::zeros();
        let (p0, f0) = self.p_matrix(0.0);
        let (pl, fl) = self.p_matrix(l);
        a.fixed_view_mut::<4, 5>(0, 8).copy_from(&(-p0));
        a.fixed_view_mut::<4, 5>(4, 8).copy_from(&pl);
        rhs.fixed_rows_mut::<4>(0).copy_from(&(start.end_vector() + f0 * q0));
        rhs.fixed_rows_mut::<4>(4).copy_from(&(end.end_vector() - fl * q0));

        let d = self.displacement_shapes(l).expect("end of element is in range");
        a.fixed_view_mut::<5, 4>(8, 0).copy_from(&start_node_map(l));
        a.fixed_view_mut::<5, 4>(8, 4).copy_from(&end_node_map());
        a.fixed_view_mut::<5, 5>(8, 8).copy_from(&d.rows);
        rhs.fixed_rows_mut::<5>(8).copy_from(&(-d.load * q0));
        ElementSystem { a, rhs }
    }
}

fn series_tail(t: f64, alternating: bool) -> f64 {
    // Σ_{k≥2} (±t)^k / k!
    let s = if alternating { -t } else { t };
    let mut term = s * s / 2.0;
    let mut sum: f64 = 0.0;
    let mut k = 2.0;
    while term.abs() > 1e-18 * sum.abs().max(f64::MIN_POSITIVE) && k < 30.0 {
        sum += term;
        k += 1.0;
        term *= s / k;
    }
    sum
}

/// `N_a`: compatibility coefficients of the start-node state.
pub fn start_node_map(length: f64) -> SMatrix<f64, 5, 4> {
    SMatrix::<f64, 5, 4>::from_row_slice(&[
        1.0, 0.0, 0.0, 0.0, //
        0.0, 1.0, length, 0.0, //
        0.0, 0.0, 1.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        0.0, 1.0, 0.0, length,
    ])
}

/// `N_b`: compatibility coefficients of the end-node state.
pub fn end_node_map() -> SMatrix<f64, 5, 4> {
    SMatrix::<f64, 5, 4>::from_row_slice(&[
        -1.0, 0.0, 0.0, 0.0, //
        0.0, -1.0, 0.0, 0.0, //
        0.0, 0.0, -1.0, 0.0, //
        0.0, 0.0, 0.0, -1.0, //
        0.0, -1.0, 0.0, 0.0,
    ])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resultants {
    /// N
    pub axial: f64,
    pub mw: f64,
    pub mt: f64,
    pub qt: f64,
    /// M = M_w + M_θ
    pub moment: f64,
    /// Q
    pub shear: f64,
    pub mw_x: f64,
}

impl Resultants {
    pub fn sigma(&self) -> Vector3<f64> {
        Vector3::new(self.axial, self.mw, self.mt)
    }

    /// `{N, Q, M_w, M_θ}`, conjugate to `(u, w, w_x, θ)`.
    pub fn end_vector(&self) -> Vector4<f64> {
        Vector4::new(self.axial, self.shear, self.mw, self.mt)
    }
}

/// Rows `N_u, N_w, N_ww, N_θ, N_sw` at one `x` and the matching load terms
/// `U_*` per unit `q0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementShapes {
    pub x: f64,
    pub rows: SMatrix<f64, 5, 5>,
    pub load: SVector<f64, 5>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Displacements {
    pub u: f64,
    pub w: f64,
    pub w_x: f64,
    pub theta: f64,
    /// Transverse displacement recovered through the shear strain.
    pub w_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElementSystem {
    pub a: SMatrix<f64, ELEMENT_UNKNOWNS, ELEMENT_UNKNOWNS>,
    pub rhs: SVector<f64, ELEMENT_UNKNOWNS>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElementSolution {
    pub start: NodeState,
    pub end: NodeState,
    pub beta: Beta,
}

impl ElementSystem {
    /// Solves the system after replacing the equilibrium rows of the listed
    /// start/end dofs (0..8) by `dof = 0`.
    pub fn solve_with_fixed(&self, fixed: &[usize]) -> Result<ElementSolution> {
        let n = ELEMENT_UNKNOWNS;
        let mut a = nalgebra::DMatrix::from_fn(n, n, |i, j| self.a[(i, j)]);
        let mut b = nalgebra::DVector::from_fn(n, |i, _| self.rhs[i]);
        for &d in fixed {
            assert!(d < 2 * DOFS_PER_NODE, "only nodal dofs can be fixed");
            a.row_mut(d).fill(0.0);
            a[(d, d)] = 1.0;
            b[d] = 0.0;
        }
        let x = solve_dense(&a, &b, 1e-8)?;
        Ok(ElementSolution {
            start: NodeState::new(x[0], x[1], x[2], x[3]),
            end: NodeState::new(x[4], x[5], x[6], x[7]),
            beta: Beta::from_fn(|i, _| x[8 + i]),
        })
    }
}
