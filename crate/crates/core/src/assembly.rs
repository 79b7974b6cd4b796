//! Global assembly, boundary conditions and solution fields.
//!
//! Force-based meshes interleave unknowns as `[φ_0, β_0, φ_1, β_1, …, φ_n]`
//! (nine per element plus the last node) and rows as node equilibrium blocks
//! followed by the compatibility block of the element to their right. The
//! matrix is then banded with eight sub- and super-diagonals.
//!
//! Displacement-based meshes number the element dofs node by node and give a
//! symmetric band of width `2·dofs_per_node - 1`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::{DVector, Vector4};
use serde::{Deserialize, Serialize};

use crate::classic::{self, ClassicKind, LocalFields, StiffnessElement};
use crate::conventions::{DOFS_PER_NODE, DOF_THETA, DOF_U, DOF_W, DOF_WX, FORCE_PARAMETERS};
use crate::error::{FgError, Result};
use crate::linalg::{solve_dense, BandedGeneral, BandedSymmetric};
use crate::pfts::{end_node_map, start_node_map, Beta, Displacements, ForceFieldBasis, NodalForces, NodeState, Resultants};
use crate::section::Section;

/// Systems with more unknowns than this are solved in band storage.
pub const DENSE_LIMIT: usize = 2000;

const STRIDE: usize = DOFS_PER_NODE + FORCE_PARAMETERS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementKind {
    #[serde(alias = "DEB")]
    Deb,
    #[serde(alias = "DFS")]
    Dfs,
    #[serde(alias = "DTS")]
    Dts,
    #[serde(alias = "PFTS-T", alias = "pfts-t")]
    PftsT,
    #[serde(alias = "PFTS")]
    Pfts,
}

impl ElementKind {
    pub const ALL: [ElementKind; 5] = [ElementKind::Deb, ElementKind::Dfs, ElementKind::Dts, ElementKind::PftsT, ElementKind::Pfts];

    pub fn is_force_based(self) -> bool {
        matches!(self, ElementKind::Pfts | ElementKind::PftsT)
    }

    pub fn classic(self) -> Option<ClassicKind> {
        match self {
            ElementKind::Deb => Some(ClassicKind::Deb),
            ElementKind::Dfs => Some(ClassicKind::Dfs),
            ElementKind::Dts => Some(ClassicKind::Dts),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ElementKind::Deb => "DEB",
            ElementKind::Dfs => "DFS",
            ElementKind::Dts => "DTS",
            ElementKind::PftsT => "PFTS-T",
            ElementKind::Pfts => "PFTS",
        }
    }

    /// Default shear stiffness used by the kind, if it has one.
    pub fn shear_stiffness(self, section: &Section) -> Option<f64> {
        let c = section.constants();
        match self {
            ElementKind::Deb => None,
            ElementKind::Dfs => Some(classic::SHEAR_CORRECTION * c.plane.shear),
            ElementKind::Dts | ElementKind::PftsT => Some(c.ds_hat),
            ElementKind::Pfts => Some(c.ds),
        }
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ElementKind {
    type Err = FgError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "deb" => Ok(ElementKind::Deb),
            "dfs" => Ok(ElementKind::Dfs),
            "dts" => Ok(ElementKind::Dts),
            "pfts_t" => Ok(ElementKind::PftsT),
            "pfts" => Ok(ElementKind::Pfts),
            other => Err(FgError::Config(format!("unknown element kind `{other}` (expected deb, dfs, dts, pfts or pfts_t)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BoundaryCase {
    /// Clamped at `x = 0`, free at `x = L`.
    #[serde(rename = "CF", alias = "C-F", alias = "cf")]
    CF,
    /// Pin at `x = 0`, roller at `x = L`.
    #[serde(rename = "SS", alias = "S-S", alias = "ss")]
    SS,
    /// Clamped at both ends.
    #[serde(rename = "CC", alias = "C-C", alias = "cc")]
    CC,
}

impl BoundaryCase {
    pub fn label(self) -> &'static str {
        match self {
            BoundaryCase::CF => "C-F",
            BoundaryCase::SS => "S-S",
            BoundaryCase::CC => "C-C",
        }
    }

    /// Constrained `(node, dof)` pairs for a mesh with `n` elements.
    pub fn constraints(self, n: usize) -> Vec<(usize, usize)> {
        let all = |node| (0..DOFS_PER_NODE).map(move |d| (node, d));
        match self {
            BoundaryCase::CF => all(0).collect(),
            BoundaryCase::CC => all(0).chain(all(n)).collect(),
            BoundaryCase::SS => vec![(0, DOF_U), (0, DOF_W), (n, DOF_W)],
        }
    }

    /// Position of the reported deflection: tip or mid-span.
    pub fn monitor_point(self, length: f64) -> f64 {
        match self {
            BoundaryCase::CF => length,
            _ => 0.5 * length,
        }
    }
}

impl fmt::Display for BoundaryCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BoundaryCase {
    type Err = FgError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().replace('-', "").as_str() {
            "CF" => Ok(BoundaryCase::CF),
            "SS" => Ok(BoundaryCase::SS),
            "CC" => Ok(BoundaryCase::CC),
            other => Err(FgError::InvalidCase(format!("unknown boundary case `{other}` (expected CF, SS or CC)"))),
        }
    }
}

/// Concentrated forces applied at a node position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointLoad {
    pub x: f64,
    #[serde(default)]
    pub px: f64,
    #[serde(default)]
    pub py: f64,
    #[serde(default)]
    pub moment: f64,
}

impl PointLoad {
    pub fn forces(&self) -> NodalForces {
        NodalForces::new(self.px, self.py, self.moment)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadCase {
    /// Uniform transverse load, N/mm.
    #[serde(default)]
    pub q0: f64,
    #[serde(default)]
    pub point: Vec<PointLoad>,
}

impl LoadCase {
    pub fn uniform(q0: f64) -> Self {
        Self { q0, point: Vec::new() }
    }

    /// Transverse force `p` at `x`.
    pub fn point(x: f64, p: f64) -> Self {
        Self { q0: 0.0, point: vec![PointLoad { x, px: 0.0, py: p, moment: 0.0 }] }
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            q0: self.q0 * k,
            point: self
                .point
                .iter()
                .map(|p| PointLoad { x: p.x, px: p.px * k, py: p.py * k, moment: p.moment * k })
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.q0 == 0.0 && self.point.iter().all(|p| p.px == 0.0 && p.py == 0.0 && p.moment == 0.0)
    }
}

#[derive(Debug, Clone)]
pub struct BeamModel {
    pub length: f64,
    pub n_elements: usize,
    pub section: Arc<Section>,
    pub kind: ElementKind,
    pub loads: LoadCase,
    pub boundary: BoundaryCase,
    /// Replaces the kind's shear stiffness (DTS, PFTS and PFTS-T only).
    pub shear_override: Option<f64>,
}

impl BeamModel {
    pub fn new(
        length: f64,
        n_elements: usize,
        section: Arc<Section>,
        kind: ElementKind,
        loads: LoadCase,
        boundary: BoundaryCase,
    ) -> Result<Self> {
        let model = Self { length, n_elements, section, kind, loads, boundary, shear_override: None };
        model.validate()?;
        Ok(model)
    }

    pub fn with_shear_override(mut self, shear_stiffness: f64) -> Result<Self> {
        if matches!(self.kind, ElementKind::Deb | ElementKind::Dfs) {
            return Err(FgError::InvalidModel(format!("{} has no higher-order shear stiffness to override", self.kind)));
        }
        if !(shear_stiffness > 0.0 && shear_stiffness.is_finite()) {
            return Err(FgError::InvalidModel(format!("shear stiffness must be positive, got {shear_stiffness}")));
        }
        self.shear_override = Some(shear_stiffness);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0 && self.length.is_finite()) {
            return Err(FgError::InvalidModel(format!("beam length must be positive, got {}", self.length)));
        }
        if self.n_elements == 0 {
            return Err(FgError::InvalidModel("at least one element is required".into()));
        }
        if !self.loads.q0.is_finite() {
            return Err(FgError::InvalidModel("uniform load must be finite".into()));
        }
        for p in &self.loads.point {
            self.node_at(p.x)?;
        }
        Ok(())
    }

    pub fn element_length(&self) -> f64 {
        self.length / self.n_elements as f64
    }

    pub fn node_x(&self, node: usize) -> f64 {
        if node == self.n_elements {
            self.length
        } else {
            node as f64 * self.element_length()
        }
    }

    /// Node index at position `x`; point loads must sit on nodes.
    pub fn node_at(&self, x: f64) -> Result<usize> {
        let r = x / self.element_length();
        let node = r.round();
        if !(node >= 0.0 && node <= self.n_elements as f64) || (r - node).abs() > 1e-9 * self.n_elements as f64 {
            return Err(FgError::InvalidCase(format!(
                "point load at x = {x} mm does not coincide with a node of the {}-element mesh",
                self.n_elements
            )));
        }
        Ok(node as usize)
    }

    /// Applied nodal forces per node.
    pub fn nodal_forces(&self) -> Result<Vec<NodalForces>> {
        let mut f = vec![NodalForces::default(); self.n_elements + 1];
        for p in &self.loads.point {
            let i = self.node_at(p.x)?;
            f[i].px += p.px;
            f[i].py += p.py;
            f[i].moment += p.moment;
        }
        Ok(f)
    }

    pub fn shear_stiffness(&self) -> Option<f64> {
        self.shear_override.or_else(|| self.kind.shear_stiffness(&self.section))
    }

    pub fn with_loads(&self, loads: LoadCase) -> Self {
        Self { loads, ..self.clone() }
    }

    pub fn with_mesh(&self, n_elements: usize) -> Self {
        Self { n_elements, ..self.clone() }
    }

    /// Number of unknowns of the global system.
    pub fn unknowns(&self) -> usize {
        let n = self.n_elements;
        match self.kind.classic() {
            None => DOFS_PER_NODE * (n + 1) + FORCE_PARAMETERS * n,
            Some(k) => k.dofs_per_node() * (n + 1),
        }
    }
}

/// Support reaction: the generalized force the support applies, conjugate to
/// the constrained dof (moments positive on a positive rotation).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Reaction {
    pub node: usize,
    pub x: f64,
    /// Index in `(u, w, w_x, θ)`.
    pub dof: usize,
    pub value: f64,
}

#[derive(Debug, Clone)]
enum Fields {
    Force { basis: ForceFieldBasis, beta: Vec<Beta> },
    Classic { element: StiffnessElement, dofs: Vec<f64> },
}

/// Solved beam with continuous field evaluators.
#[derive(Debug, Clone)]
pub struct Solution {
    model: BeamModel,
    nodes: Vec<NodeState>,
    reactions: Vec<Reaction>,
    fields: Fields,
}

/// Assembled force-based system before boundary conditions.
#[derive(Debug, Clone)]
pub struct ForceBasedSystem {
    pub matrix: BandedGeneral,
    pub rhs: Vec<f64>,
    pub basis: ForceFieldBasis,
}

fn node_col(i: usize) -> usize {
    STRIDE * i
}

fn beta_col(e: usize) -> usize {
    STRIDE * e + DOFS_PER_NODE
}

/// Builds the global force-based system.
pub fn assemble_force_based(model: &BeamModel) -> Result<ForceBasedSystem> {
    if !model.kind.is_force_based() {
        return Err(FgError::InvalidModel(format!("{} is not a force-based element", model.kind)));
    }
    model.validate()?;
    let n = model.n_elements;
    let le = model.element_length();
    let ds = model.shear_stiffness().expect("force-based kinds carry a shear stiffness");
    let basis = ForceFieldBasis::with_shear_stiffness(&model.section, ds, le)?;
    let q0 = model.loads.q0;
    let size = model.unknowns();
    let mut a = BandedGeneral::new(size, 2 * DOFS_PER_NODE, 2 * DOFS_PER_NODE);
    let mut rhs = vec![0.0; size];

    let (p0, f0) = basis.p_matrix(0.0);
    let (pl, fl) = basis.p_matrix(le);
    let shapes = basis.displacement_shapes(le)?;
    let na = start_node_map(le);
    let nb = end_node_map();
    let applied = model.nodal_forces()?;

    for (i, load) in applied.iter().enumerate() {
        let row = node_col(i);
        let mut b: Vector4<f64> = load.end_vector();
        if i > 0 {
            let col = beta_col(i - 1);
            for r in 0..DOFS_PER_NODE {
                for c in 0..FORCE_PARAMETERS {
                    a.add(row + r, col + c, pl[(r, c)]);
                }
            }
            b -= fl * q0;
        }
        if i < n {
            let col = beta_col(i);
            for r in 0..DOFS_PER_NODE {
                for c in 0..FORCE_PARAMETERS {
                    a.add(row + r, col + c, -p0[(r, c)]);
                }
            }
            b += f0 * q0;
        }
        rhs[row..row + DOFS_PER_NODE].copy_from_slice(b.as_slice());
    }
    for e in 0..n {
        let row = beta_col(e);
        for r in 0..FORCE_PARAMETERS {
            for c in 0..DOFS_PER_NODE {
                a.add(row + r, node_col(e) + c, na[(r, c)]);
                a.add(row + r, node_col(e + 1) + c, nb[(r, c)]);
            }
            for c in 0..FORCE_PARAMETERS {
                a.add(row + r, beta_col(e) + c, shapes.rows[(r, c)]);
            }
            rhs[row + r] = -shapes.load[r] * q0;
        }
    }
    Ok(ForceBasedSystem { matrix: a, rhs, basis })
}

/// Replaces constrained equilibrium rows by `dof = 0`.
pub fn apply_boundary(system: &mut ForceBasedSystem, case: BoundaryCase, n_elements: usize) -> Vec<(usize, usize)> {
    let constrained = case.constraints(n_elements);
    for &(node, dof) in &constrained {
        let row = node_col(node) + dof;
        system.matrix.clear_row(row);
        system.matrix.set(row, row, 1.0);
        system.rhs[row] = 0.0;
    }
    constrained
}

pub fn solve(model: &BeamModel) -> Result<Solution> {
    model.validate()?;
    match model.kind.classic() {
        None => solve_force_based(model),
        Some(kind) => solve_classic(model, kind),
    }
}

fn solve_force_based(model: &BeamModel) -> Result<Solution> {
    let n = model.n_elements;
    let original = assemble_force_based(model)?;
    let mut system = original.clone();
    let constrained = apply_boundary(&mut system, model.boundary, n);
    let x = if system.rhs.len() <= DENSE_LIMIT {
        let dense = system.matrix.to_dense();
        solve_dense(&dense, &DVector::from_column_slice(&system.rhs), 1e-10)?.as_slice().to_vec()
    } else {
        system.matrix.solve(&system.rhs, 1e-10)?
    };
    let nodes = (0..=n).map(|i| NodeState::from_column_slice(&x[node_col(i)..node_col(i) + DOFS_PER_NODE])).collect();
    let beta = (0..n).map(|e| Beta::from_column_slice(&x[beta_col(e)..beta_col(e) + FORCE_PARAMETERS])).collect();
    let ax = original.matrix.mul_vec(&x);
    let reactions = constrained
        .iter()
        .map(|&(node, dof)| {
            let row = node_col(node) + dof;
            let value = ax[row] - original.rhs[row];
            let value = if dof >= DOF_WX { -value } else { value };
            Reaction { node, x: model.node_x(node), dof, value }
        })
        .collect();
    Ok(Solution { model: model.clone(), nodes, reactions, fields: Fields::Force { basis: system.basis, beta } })
}

/// Local index of a `(u, w, w_x, θ)` dof in a displacement-based node; DEB
/// uses its slope for both rotations.
fn classic_local_dof(kind: ClassicKind, dof: usize) -> Option<usize> {
    match dof {
        DOF_U => Some(0),
        DOF_W => Some(kind.w_dof()),
        DOF_WX => kind.slope_dof(),
        DOF_THETA => kind.rotation_dof().or(kind.slope_dof()),
        _ => None,
    }
}

fn build_classic(model: &BeamModel, kind: ClassicKind) -> StiffnessElement {
    let le = model.element_length();
    let q0 = model.loads.q0;
    match (kind, model.shear_override) {
        (ClassicKind::Deb, _) => classic::build_deb(&model.section, le, q0),
        (ClassicKind::Dfs, _) => classic::build_dfs(&model.section, le, q0),
        (ClassicKind::Dts, None) => classic::build_dts(&model.section, le, q0),
        (ClassicKind::Dts, Some(ds)) => classic::build_dts_with_shear(&model.section, le, q0, ds),
    }
}

fn solve_classic(model: &BeamModel, kind: ClassicKind) -> Result<Solution> {
    let n = model.n_elements;
    let dpn = kind.dofs_per_node();
    let size = dpn * (n + 1);
    let element = build_classic(model, kind);
    let mut k = BandedSymmetric::new(size, 2 * dpn - 1);
    let mut f = vec![0.0; size];
    for e in 0..n {
        let dofs: Vec<usize> = (dpn * e..dpn * (e + 2)).collect();
        k.add_block(&dofs, &element.k);
        for (a, &g) in dofs.iter().enumerate() {
            f[g] += element.f_ext[a];
        }
    }
    for (i, load) in model.nodal_forces()?.iter().enumerate() {
        let v = load.work_vector();
        for dof in [DOF_U, DOF_W, DOF_THETA] {
            if let Some(l) = classic_local_dof(kind, dof) {
                f[dpn * i + l] += v[dof];
            }
        }
    }
    let original = k.clone();
    let mut constrained: Vec<(usize, usize, usize)> = Vec::new();
    for (node, dof) in model.boundary.constraints(n) {
        if let Some(l) = classic_local_dof(kind, dof) {
            let g = dpn * node + l;
            if !constrained.iter().any(|c| c.2 == g) {
                constrained.push((node, dof, g));
            }
        }
    }
    let mut rhs = f.clone();
    for &(_, _, g) in &constrained {
        k.constrain(g);
        rhs[g] = 0.0;
    }
    let d = k.solve(&rhs)?;
    let kd = original.mul_vec(&d);
    let reactions = constrained
        .iter()
        .map(|&(node, dof, g)| Reaction { node, x: model.node_x(node), dof, value: kd[g] - f[g] })
        .collect();
    let nodes = (0..=n)
        .map(|i| {
            let x = model.node_x(i);
            let lf = classic_fields(&element, &d, model, x);
            NodeState::new(lf.u, lf.w, lf.w_x, lf.theta)
        })
        .collect();
    Ok(Solution { model: model.clone(), nodes, reactions, fields: Fields::Classic { element, dofs: d } })
}

/// Element index and local coordinate for `x`; interior nodes belong to the
/// element on their right.
fn locate(model: &BeamModel, x: f64) -> Result<(usize, f64)> {
    let l = model.length;
    let tol = 1e-12 * l;
    if !(x >= -tol && x <= l + tol) {
        return Err(FgError::OutOfSpan { x, length: l });
    }
    let le = model.element_length();
    let e = ((x / le).floor().max(0.0) as usize).min(model.n_elements - 1);
    let local = (x - e as f64 * le).clamp(0.0, le);
    Ok((e, local))
}

fn classic_fields(element: &StiffnessElement, d: &[f64], model: &BeamModel, x: f64) -> LocalFields {
    let (e, local) = locate(model, x).expect("node positions are inside the span");
    let dpn = element.kind.dofs_per_node();
    element.local_fields(&d[dpn * e..dpn * (e + 2)], local)
}

impl Solution {
    pub fn model(&self) -> &BeamModel {
        &self.model
    }

    pub fn kind(&self) -> ElementKind {
        self.model.kind
    }

    /// Nodal `(u, w, w_x, θ)`. For DEB `θ = w_x`; for DFS `w_x` is the slope of
    /// the element on the right of the node (left for the last node).
    pub fn nodes(&self) -> &[NodeState] {
        &self.nodes
    }

    pub fn betas(&self) -> Option<&[Beta]> {
        match &self.fields {
            Fields::Force { beta, .. } => Some(beta),
            Fields::Classic { .. } => None,
        }
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn basis(&self) -> Option<&ForceFieldBasis> {
        match &self.fields {
            Fields::Force { basis, .. } => Some(basis),
            Fields::Classic { .. } => None,
        }
    }

    pub fn displacement(&self, x: f64) -> Result<Displacements> {
        let (e, local) = locate(&self.model, x)?;
        match &self.fields {
            Fields::Force { basis, beta } => basis.displacements(&self.nodes[e], &beta[e], self.model.loads.q0, local),
            Fields::Classic { element, dofs } => {
                let dpn = element.kind.dofs_per_node();
                let f = element.local_fields(&dofs[dpn * e..dpn * (e + 2)], local);
                Ok(Displacements { u: f.u, w: f.w, w_x: f.w_x, theta: f.theta, w_s: f.w })
            }
        }
    }

    /// Transverse displacement at the tip (C-F) or mid-span (S-S, C-C).
    pub fn reported_deflection(&self) -> Result<f64> {
        Ok(self.displacement(self.model.boundary.monitor_point(self.model.length))?.w)
    }

    /// Internal-force resultants of a force-based solution.
    pub fn resultants(&self, x: f64) -> Result<Resultants> {
        let (e, local) = locate(&self.model, x)?;
        match &self.fields {
            Fields::Force { basis, beta } => basis.resultant_fields(&beta[e], self.model.loads.q0, local),
            Fields::Classic { .. } => Err(FgError::InvalidModel(format!(
                "{} has no equilibrium force field; use constitutive quantities instead",
                self.model.kind
            ))),
        }
    }

    /// Resultants at either side of an interior node, `(left, right)`.
    pub fn resultants_at_node(&self, node: usize) -> Result<(Option<Resultants>, Option<Resultants>)> {
        let Fields::Force { basis, beta } = &self.fields else {
            return Err(FgError::InvalidModel(format!("{} has no equilibrium force field", self.model.kind)));
        };
        let q0 = self.model.loads.q0;
        let le = self.model.element_length();
        let left = if node > 0 { Some(basis.resultant_fields(&beta[node - 1], q0, le)?) } else { None };
        let right =
            if node < self.model.n_elements { Some(basis.resultant_fields(&beta[node], q0, 0.0)?) } else { None };
        Ok((left, right))
    }

    /// `{M_w,x, M_θ,x}` of a force-based solution.
    pub fn tau_parameters(&self, x: f64) -> Result<nalgebra::Vector2<f64>> {
        let (e, local) = locate(&self.model, x)?;
        match &self.fields {
            Fields::Force { basis, beta } => basis.tau_parameters(&beta[e], self.model.loads.q0, local),
            Fields::Classic { .. } => {
                Err(FgError::InvalidModel(format!("{} has no equilibrium force field", self.model.kind)))
            }
        }
    }

    /// Generalized strains and interpolated kinematics of a displacement-based
    /// solution.
    pub fn local_fields(&self, x: f64) -> Result<LocalFields> {
        let (e, local) = locate(&self.model, x)?;
        match &self.fields {
            Fields::Classic { element, dofs } => {
                let dpn = element.kind.dofs_per_node();
                Ok(element.local_fields(&dofs[dpn * e..dpn * (e + 2)], local))
            }
            Fields::Force { .. } => Err(FgError::InvalidModel("force-based solutions expose resultants".into())),
        }
    }

    /// Section generalized strains `(ε0, κ_w, κ_θ)` at `x` for any kind, so that
    /// `ε_x = t(y)·ε`. DEB and DFS have one curvature `κ`; repeating it in both
    /// slots gives `ε0 + yκ`.
    pub fn generalized_strains(&self, x: f64) -> Result<nalgebra::Vector3<f64>> {
        match &self.fields {
            Fields::Force { .. } => Ok(self.section().constants().flex * self.resultants(x)?.sigma()),
            Fields::Classic { .. } => {
                let f = self.local_fields(x)?;
                let kappa_theta = if self.model.kind == ElementKind::Dts { f.kappa_theta } else { f.kappa_w };
                Ok(nalgebra::Vector3::new(f.eps0, f.kappa_w, kappa_theta))
            }
        }
    }

    pub fn section(&self) -> &Section {
        &self.model.section
    }

    /// Largest relative jump of `{N, Q, M_w, M_θ}` across interior nodes that
    /// carry no applied load.
    pub fn force_continuity_residual(&self) -> Result<f64> {
        let applied = self.model.nodal_forces()?;
        let mut worst = 0.0f64;
        for (node, load) in applied.iter().enumerate().take(self.model.n_elements).skip(1) {
            if *load != NodalForces::default() {
                continue;
            }
            if let (Some(l), Some(r)) = self.resultants_at_node(node)? {
                let (a, b) = (l.end_vector(), r.end_vector());
                let scale = a.amax().max(b.amax()).max(f64::MIN_POSITIVE);
                worst = worst.max((a - b).amax() / scale);
            }
        }
        Ok(worst)
    }

    /// Virtual work of reactions and loads on the three rigid-body modes
    /// (axial, transverse, rotation about `x = 0`), each relative to the
    /// largest contributing term.
    pub fn equilibrium_residual(&self) -> Result<[f64; 3]> {
        let modes = |x: f64| -> [Vector4<f64>; 3] {
            [Vector4::new(1.0, 0.0, 0.0, 0.0), Vector4::new(0.0, 1.0, 0.0, 0.0), Vector4::new(0.0, x, 1.0, 1.0)]
        };
        let l = self.model.length;
        let q0 = self.model.loads.q0;
        let mut sums = [0.0, q0 * l, q0 * l * l / 2.0];
        let mut scales = sums.map(f64::abs);
        let add = |sums: &mut [f64; 3], scales: &mut [f64; 3], x: f64, v: Vector4<f64>| {
            for (k, r) in modes(x).iter().enumerate() {
                let t = r.dot(&v);
                sums[k] += t;
                scales[k] += t.abs();
            }
        };
        for (i, f) in self.model.nodal_forces()?.iter().enumerate() {
            add(&mut sums, &mut scales, self.model.node_x(i), f.work_vector());
        }
        for r in &self.reactions {
            let mut v = Vector4::zeros();
            v[r.dof] = r.value;
            add(&mut sums, &mut scales, r.x, v);
        }
        // Floors keep directions without load from dividing round-off by itself.
        let force_scale = scales[0].max(scales[1]).max(scales[2] / l);
        let floors = [force_scale, force_scale, force_scale * l];
        Ok(std::array::from_fn(|k| {
            let scale = scales[k].max(floors[k]);
            if scale > 0.0 {
                sums[k].abs() / scale
            } else {
                0.0
            }
        }))
    }
}
