//! Displacement-based comparison elements.
//!
//! * DEB: Euler–Bernoulli, nodal `(u, w, w_x)`, linear `u`, Hermite `w`.
//! * DFS: first-order shear, nodal `(u, w, θ)`, all linear, shear correction
//!   5/6, full (two-point) integration.
//! * DTS: third-order shear with the Reddy warping, nodal `(u, w, w_x, θ)`,
//!   linear `u` and `θ`, Hermite `w`, four-point integration, shear stiffness
//!   `D̂_s` by default.
//!
//! Each kind is described by a generalized-strain operator `B(x)` and a
//! section matrix `D`; the element stiffness is `∫ Bᵀ D B dx`.

use nalgebra::{DMatrix, DVector};

use crate::quadrature::GaussLegendre;
use crate::section::Section;

pub const SHEAR_CORRECTION: f64 = 5.0 / 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassicKind {
    Deb,
    Dfs,
    Dts,
}

impl ClassicKind {
    pub fn dofs_per_node(self) -> usize {
        match self {
            ClassicKind::Deb | ClassicKind::Dfs => 3,
            ClassicKind::Dts => 4,
        }
    }

    fn gauss_order(self) -> usize {
        match self {
            ClassicKind::Deb => 3,
            ClassicKind::Dfs => 2,
            ClassicKind::Dts => 4,
        }
    }

    /// Local index of the transverse displacement within a node.
    pub fn w_dof(self) -> usize {
        1
    }

    /// Local index of the slope `w_x`, if the kind carries it.
    pub fn slope_dof(self) -> Option<usize> {
        match self {
            ClassicKind::Deb | ClassicKind::Dts => Some(2),
            ClassicKind::Dfs => None,
        }
    }

    /// Local index of the section rotation `θ`, if the kind carries it.
    pub fn rotation_dof(self) -> Option<usize> {
        match self {
            ClassicKind::Deb => None,
            ClassicKind::Dfs => Some(2),
            ClassicKind::Dts => Some(3),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StiffnessElement {
    pub kind: ClassicKind,
    pub length: f64,
    /// Section matrix relating generalized strains to resultants.
    pub section_matrix: DMatrix<f64>,
    pub k: DMatrix<f64>,
    /// Consistent load vector for the uniform load.
    pub f_ext: DVector<f64>,
}

/// Interpolated kinematic quantities at one point of an element.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LocalFields {
    pub u: f64,
    pub w: f64,
    /// `w,x`
    pub w_x: f64,
    /// Section rotation; equals `w_x` for DEB.
    pub theta: f64,
    pub eps0: f64,
    /// `-w,xx` (DEB, DTS) or `-θ,x` (DFS).
    pub kappa_w: f64,
    /// `-θ,x` (DTS only).
    pub kappa_theta: f64,
    /// `w,x - θ` (zero for DEB).
    pub gamma0: f64,
}

struct Shapes {
    lin: [f64; 2],
    lin_x: [f64; 2],
    herm: [f64; 4],
    herm_x: [f64; 4],
    herm_xx: [f64; 4],
}

fn shapes(le: f64, x: f64) -> Shapes {
    let s = x / le;
    Shapes {
        lin: [1.0 - s, s],
        lin_x: [-1.0 / le, 1.0 / le],
        herm: [
            1.0 - 3.0 * s * s + 2.0 * s.powi(3),
            le * (s - 2.0 * s * s + s.powi(3)),
            3.0 * s * s - 2.0 * s.powi(3),
            le * (-s * s + s.powi(3)),
        ],
        herm_x: [
            (-6.0 * s + 6.0 * s * s) / le,
            1.0 - 4.0 * s + 3.0 * s * s,
            (6.0 * s - 6.0 * s * s) / le,
            -2.0 * s + 3.0 * s * s,
        ],
        herm_xx: [
            (-6.0 + 12.0 * s) / (le * le),
            (-4.0 + 6.0 * s) / le,
            (6.0 - 12.0 * s) / (le * le),
            (-2.0 + 6.0 * s) / le,
        ],
    }
}

/// Generalized-strain operator at local `x`.
fn strain_operator(kind: ClassicKind, le: f64, x: f64) -> DMatrix<f64> {
    let sh = shapes(le, x);
    match kind {
        ClassicKind::Deb => {
            // e = [u', -w'']
            let mut b = DMatrix::zeros(2, 6);
            for n in 0..2 {
                b[(0, 3 * n)] = sh.lin_x[n];
                b[(1, 3 * n + 1)] = -sh.herm_xx[2 * n];
                b[(1, 3 * n + 2)] = -sh.herm_xx[2 * n + 1];
            }
            b
        }
        ClassicKind::Dfs => {
            // e = [u', -θ', w' - θ]
            let mut b = DMatrix::zeros(3, 6);
            for n in 0..2 {
                b[(0, 3 * n)] = sh.lin_x[n];
                b[(1, 3 * n + 2)] = -sh.lin_x[n];
                b[(2, 3 * n + 1)] = sh.lin_x[n];
                b[(2, 3 * n + 2)] = -sh.lin[n];
            }
            b
        }
        ClassicKind::Dts => {
            // e = [u', -w'', -θ', w' - θ]
            let mut b = DMatrix::zeros(4, 8);
            for n in 0..2 {
                b[(0, 4 * n)] = sh.lin_x[n];
                b[(1, 4 * n + 1)] = -sh.herm_xx[2 * n];
                b[(1, 4 * n + 2)] = -sh.herm_xx[2 * n + 1];
                b[(2, 4 * n + 3)] = -sh.lin_x[n];
                b[(3, 4 * n + 1)] = sh.herm_x[2 * n];
                b[(3, 4 * n + 2)] = sh.herm_x[2 * n + 1];
                b[(3, 4 * n + 3)] = -sh.lin[n];
            }
            b
        }
    }
}

fn section_matrix(kind: ClassicKind, section: &Section, shear_stiffness: f64) -> DMatrix<f64> {
    let c = section.constants();
    let p = c.plane;
    match kind {
        ClassicKind::Deb => DMatrix::from_row_slice(2, 2, &[p.axial, p.coupling, p.coupling, p.bending]),
        ClassicKind::Dfs => DMatrix::from_row_slice(
            3,
            3,
            &[p.axial, p.coupling, 0.0, p.coupling, p.bending, 0.0, 0.0, 0.0, shear_stiffness],
        ),
        ClassicKind::Dts => {
            let mut d = DMatrix::zeros(4, 4);
            d.view_mut((0, 0), (3, 3)).copy_from(&c.dn);
            d[(3, 3)] = shear_stiffness;
            d
        }
    }
}

fn consistent_load(kind: ClassicKind, le: f64, q0: f64) -> DVector<f64> {
    match kind {
        ClassicKind::Deb => {
            DVector::from_vec(vec![0.0, q0 * le / 2.0, q0 * le * le / 12.0, 0.0, q0 * le / 2.0, -q0 * le * le / 12.0])
        }
        ClassicKind::Dfs => DVector::from_vec(vec![0.0, q0 * le / 2.0, 0.0, 0.0, q0 * le / 2.0, 0.0]),
        ClassicKind::Dts => DVector::from_vec(vec![
            0.0,
            q0 * le / 2.0,
            q0 * le * le / 12.0,
            0.0,
            0.0,
            q0 * le / 2.0,
            -q0 * le * le / 12.0,
            0.0,
        ]),
    }
}

fn build(kind: ClassicKind, section: &Section, le: f64, q0: f64, shear_stiffness: f64) -> StiffnessElement {
    let d = section_matrix(kind, section, shear_stiffness);
    let n = 2 * kind.dofs_per_node();
    let rule = GaussLegendre::new(kind.gauss_order());
    let mut k = DMatrix::zeros(n, n);
    for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
        let b = strain_operator(kind, le, u * le);
        k += b.transpose() * &d * b * (w * le);
    }
    let k = (&k + k.transpose()) * 0.5;
    StiffnessElement { kind, length: le, section_matrix: d, k, f_ext: consistent_load(kind, le, q0) }
}

pub fn build_deb(section: &Section, le: f64, q0: f64) -> StiffnessElement {
    build(ClassicKind::Deb, section, le, q0, 0.0)
}

pub fn build_dfs(section: &Section, le: f64, q0: f64) -> StiffnessElement {
    let ks = SHEAR_CORRECTION * section.constants().plane.shear;
    build(ClassicKind::Dfs, section, le, q0, ks)
}

pub fn build_dts(section: &Section, le: f64, q0: f64) -> StiffnessElement {
    build_dts_with_shear(section, le, q0, section.constants().ds_hat)
}

/// DTS element with an arbitrary shear stiffness (e.g. the modified `D_s`).
pub fn build_dts_with_shear(section: &Section, le: f64, q0: f64, shear_stiffness: f64) -> StiffnessElement {
    build(ClassicKind::Dts, section, le, q0, shear_stiffness)
}

impl StiffnessElement {
    /// Kinematics at local `x` from the element dof vector.
    pub fn local_fields(&self, dofs: &[f64], x: f64) -> LocalFields {
        interpolate(self.kind, self.length, dofs, x)
    }

    /// Resultants `D·e` at local `x`: `[N, M]` (+ shear for DFS) or
    /// `[N, M_w, M_θ, Q̂_θ]` for DTS.
    pub fn resultants(&self, dofs: &[f64], x: f64) -> DVector<f64> {
        let b = strain_operator(self.kind, self.length, x);
        &self.section_matrix * (b * DVector::from_column_slice(dofs))
    }
}

pub fn interpolate(kind: ClassicKind, le: f64, d: &[f64], x: f64) -> LocalFields {
    let sh = shapes(le, x);
    match kind {
        ClassicKind::Deb => {
            let w = sh.herm[0] * d[1] + sh.herm[1] * d[2] + sh.herm[2] * d[4] + sh.herm[3] * d[5];
            let w_x = sh.herm_x[0] * d[1] + sh.herm_x[1] * d[2] + sh.herm_x[2] * d[4] + sh.herm_x[3] * d[5];
            let w_xx = sh.herm_xx[0] * d[1] + sh.herm_xx[1] * d[2] + sh.herm_xx[2] * d[4] + sh.herm_xx[3] * d[5];
            LocalFields {
                u: sh.lin[0] * d[0] + sh.lin[1] * d[3],
                w,
                w_x,
                theta: w_x,
                eps0: sh.lin_x[0] * d[0] + sh.lin_x[1] * d[3],
                kappa_w: -w_xx,
                kappa_theta: 0.0,
                gamma0: 0.0,
            }
        }
        ClassicKind::Dfs => {
            let w_x = sh.lin_x[0] * d[1] + sh.lin_x[1] * d[4];
            let theta = sh.lin[0] * d[2] + sh.lin[1] * d[5];
            LocalFields {
                u: sh.lin[0] * d[0] + sh.lin[1] * d[3],
                w: sh.lin[0] * d[1] + sh.lin[1] * d[4],
                w_x,
                theta,
                eps0: sh.lin_x[0] * d[0] + sh.lin_x[1] * d[3],
                kappa_w: -(sh.lin_x[0] * d[2] + sh.lin_x[1] * d[5]),
                kappa_theta: 0.0,
                gamma0: w_x - theta,
            }
        }
        ClassicKind::Dts => {
            let w = sh.herm[0] * d[1] + sh.herm[1] * d[2] + sh.herm[2] * d[5] + sh.herm[3] * d[6];
            let w_x = sh.herm_x[0] * d[1] + sh.herm_x[1] * d[2] + sh.herm_x[2] * d[5] + sh.herm_x[3] * d[6];
            let w_xx = sh.herm_xx[0] * d[1] + sh.herm_xx[1] * d[2] + sh.herm_xx[2] * d[5] + sh.herm_xx[3] * d[6];
            let theta = sh.lin[0] * d[3] + sh.lin[1] * d[7];
            LocalFields {
                u: sh.lin[0] * d[0] + sh.lin[1] * d[4],
                w,
                w_x,
                theta,
                eps0: sh.lin_x[0] * d[0] + sh.lin_x[1] * d[4],
                kappa_w: -w_xx,
                kappa_theta: -(sh.lin_x[0] * d[3] + sh.lin_x[1] * d[7]),
                gamma0: w_x - theta,
            }
        }
    }
}
