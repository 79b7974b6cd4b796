//! Sign and unit conventions shared by every element, solver and report.
//!
//! * Units: N and mm throughout (stresses in N/mm²).
//! * `x` runs from the left node of the beam (or element) to the right.
//! * `y` is the thickness coordinate measured from the mid-plane; the first
//!   material breakpoint is the bottom surface.
//! * Transverse displacement `w`, transverse nodal loads `P_y` and the
//!   distributed load `q` share one positive direction. Reported deflections
//!   are positive for positive loads.
//! * Nodal generalized displacements are ordered `(u, w, w_x, θ)`. The
//!   force-based end equilibrium rows carry the resultants `(N, Q, M_w, M_θ)`
//!   with `M = ∫ y σ_x dA`; since `ε_x = u' - y w''`, bending moments are
//!   conjugate to `-w_x` and `-θ`.
//! * Applied nodal moments and reported support reactions are generalized
//!   forces: they do positive work on a positive rotation (`w_x` or `θ`), the
//!   same sign as the displacement-based elements' right-hand side.

/// Degrees of freedom per node of the higher-order beam.
pub const DOFS_PER_NODE: usize = 4;
/// Force parameters per force-based element.
pub const FORCE_PARAMETERS: usize = 5;

pub const DOF_U: usize = 0;
pub const DOF_W: usize = 1;
pub const DOF_WX: usize = 2;
pub const DOF_THETA: usize = 3;
