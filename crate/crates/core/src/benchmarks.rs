//! Benchmark beams and their published reference values.
//!
//! Three gradings (A, B, C) and five power-law indices are analysed as a
//! cantilever with a tip load and as supported beams under a uniform load.
//! Reference values are pinned constants; the integral-analysis (IAD)
//! columns come only from here and are never recomputed.

use std::sync::Arc;

use crate::assembly::{BeamModel, BoundaryCase, ElementKind, LoadCase};
use crate::error::Result;
use crate::material::{FgMaterial, GradingKind};
use crate::q4::{PlaneMesh, PlaneModel};
use crate::section::Section;

/// Cantilever tip load, N. Back-calculated from the homogeneous reference
/// deflections together with [`crate::section::BENCHMARK_WIDTH`].
pub const TIP_LOAD: f64 = 5e5;
/// Uniform load on the supported beams, N/mm.
pub const UNIFORM_LOAD: f64 = 5000.0;
pub const CANTILEVER_LENGTH: f64 = 1000.0;
pub const SUPPORTED_LENGTH: f64 = 2000.0;

pub const GRADINGS: [GradingKind; 3] = [GradingKind::TypeA, GradingKind::TypeB, GradingKind::TypeC];
pub const POWER_INDICES: [f64; 5] = [0.0, 0.5, 1.0, 5.0, 10.0];

/// Beam length and load for a support case.
pub fn benchmark_loading(boundary: BoundaryCase) -> (f64, LoadCase) {
    match boundary {
        BoundaryCase::CF => (CANTILEVER_LENGTH, LoadCase::point(CANTILEVER_LENGTH, TIP_LOAD)),
        BoundaryCase::SS | BoundaryCase::CC => (SUPPORTED_LENGTH, LoadCase::uniform(UNIFORM_LOAD)),
    }
}

pub fn benchmark_model(
    section: Arc<Section>,
    boundary: BoundaryCase,
    kind: ElementKind,
    n_elements: usize,
) -> Result<BeamModel> {
    let (length, loads) = benchmark_loading(boundary);
    BeamModel::new(length, n_elements, section, kind, loads, boundary)
}

/// Plane-stress counterpart of [`benchmark_model`] on the reference mesh.
pub fn benchmark_plane_model(kind: GradingKind, p: f64, boundary: BoundaryCase) -> Result<PlaneModel> {
    let (length, loads) = benchmark_loading(boundary);
    let (mx, my) = plane_mesh(boundary);
    let mesh = PlaneMesh::new(length, crate::section::BENCHMARK_WIDTH, &FgMaterial::benchmark(kind, p), mx, my)?;
    PlaneModel::new(mesh, boundary, loads)
}

/// Section where the peak shear stress is compared.
pub fn shear_section(boundary: BoundaryCase) -> f64 {
    match boundary {
        BoundaryCase::CF => 500.0,
        _ => 1500.0,
    }
}

/// Mesh used for the comparison columns of the deflection tables.
pub fn comparison_mesh(kind: ElementKind, boundary: BoundaryCase) -> usize {
    match (kind, boundary) {
        (ElementKind::Pfts | ElementKind::PftsT, _) => 1,
        (ElementKind::Dfs, BoundaryCase::CF) => 1024,
        (_, BoundaryCase::CF) => 128,
        _ => 512,
    }
}

/// Plane-stress mesh `(m_x, m_y)` for the shear-stress reference.
pub fn plane_mesh(boundary: BoundaryCase) -> (usize, usize) {
    match boundary {
        BoundaryCase::CF => (101, 100),
        _ => (201, 50),
    }
}

pub fn grading_index(kind: GradingKind) -> usize {
    match kind {
        GradingKind::TypeA => 0,
        GradingKind::TypeB => 1,
        GradingKind::TypeC => 2,
    }
}

/// `g` by grading (rows A, B, C) and power index.
pub const G_VALUES: [[f64; 5]; 3] = [
    [-0.0081, -0.0087, -0.0081, -0.0056, -0.0055],
    [-0.0081, -0.0120, -0.0149, -0.0172, -0.0168],
    [-0.0096, -0.0086, -0.0076, -0.0054, -0.0050],
];

/// Order of the columns in [`Deflections`].
pub const DEFLECTION_COLUMNS: [ElementKind; 5] =
    [ElementKind::Deb, ElementKind::Dfs, ElementKind::Dts, ElementKind::PftsT, ElementKind::Pfts];

/// `[DEB, DFS, DTS, PFTS-T, PFTS, IAD]` per grading and power index.
pub type Deflections = [[[f64; 6]; 5]; 3];

pub const CANTILEVER_TIP: Deflections = [
    [
        [13.158, 13.569, 13.563, 13.564, 13.564, 13.567],
        [20.297, 20.861, 20.845, 20.847, 20.847, 20.851],
        [26.398, 27.092, 27.081, 27.084, 27.086, 27.091],
        [40.004, 41.286, 41.519, 41.525, 41.532, 41.565],
        [43.919, 45.508, 45.791, 45.798, 45.809, 45.824],
    ],
    [
        [13.158, 13.569, 13.563, 13.564, 13.564, 13.567],
        [19.888, 20.378, 20.340, 20.342, 20.342, 20.345],
        [25.528, 26.072, 26.012, 26.015, 26.016, 26.019],
        [44.527, 45.220, 45.084, 45.088, 45.102, 45.131],
        [49.891, 50.631, 50.466, 50.471, 50.495, 50.563],
    ],
    [
        [26.230, 26.774, 26.705, 26.708, 26.738, 26.758],
        [30.349, 30.984, 30.929, 30.933, 30.969, 30.977],
        [32.630, 33.324, 33.292, 33.297, 33.363, 33.365],
        [36.127, 36.977, 37.089, 37.095, 37.232, 37.347],
        [36.405, 37.300, 37.476, 37.482, 37.631, 37.806],
    ],
];

pub const SIMPLY_SUPPORTED_MIDSPAN: Deflections = [
    [
        [82.237, 84.290, 84.289, 84.289, 84.289, 84.289],
        [126.86, 129.68, 129.63, 129.63, 129.64, 129.64],
        [164.99, 168.46, 168.45, 168.45, 168.47, 168.47],
        [250.02, 256.43, 257.73, 257.73, 257.77, 257.90],
        [274.49, 282.44, 284.01, 284.01, 284.07, 284.08],
    ],
    [
        [82.237, 84.290, 84.289, 84.289, 84.289, 84.289],
        [124.30, 126.75, 126.59, 126.59, 126.59, 126.59],
        [159.55, 162.27, 162.00, 162.00, 162.01, 162.01],
        [278.29, 281.76, 281.12, 281.12, 281.19, 281.31],
        [311.82, 315.52, 314.74, 314.74, 314.86, 315.18],
    ],
    [
        [163.94, 166.66, 166.35, 166.35, 166.50, 166.58],
        [189.68, 192.85, 192.63, 192.63, 192.81, 192.83],
        [203.94, 207.41, 207.31, 207.31, 207.64, 207.64],
        [225.80, 230.05, 230.69, 230.70, 231.39, 232.00],
        [227.53, 232.01, 232.98, 232.99, 233.75, 234.67],
    ],
];

pub const CLAMPED_MIDSPAN: Deflections = [
    [
        [16.447, 18.500, 18.454, 18.454, 18.454, 18.483],
        [25.372, 28.191, 28.089, 28.089, 28.090, 28.128],
        [32.998, 36.464, 36.387, 36.387, 36.399, 36.447],
        [50.005, 56.416, 57.504, 57.505, 57.542, 57.739],
        [54.899, 62.844, 64.162, 64.163, 64.218, 64.352],
    ],
    [
        [16.447, 18.500, 18.454, 18.454, 18.454, 18.483],
        [24.860, 27.312, 27.109, 27.109, 27.110, 27.140],
        [31.911, 34.628, 34.321, 34.321, 34.327, 34.357],
        [55.659, 59.125, 58.444, 58.444, 58.513, 58.679],
        [62.364, 66.063, 65.241, 65.241, 65.359, 65.721],
    ],
    [
        [32.788, 35.506, 35.150, 35.151, 35.301, 35.419],
        [37.936, 41.111, 40.825, 40.825, 41.002, 41.062],
        [40.788, 44.255, 44.081, 44.081, 44.407, 44.430],
        [45.160, 49.407, 49.929, 49.929, 50.606, 51.134],
        [45.506, 49.982, 50.816, 50.816, 51.550, 52.362],
    ],
];

pub fn deflections(boundary: BoundaryCase) -> &'static Deflections {
    match boundary {
        BoundaryCase::CF => &CANTILEVER_TIP,
        BoundaryCase::SS => &SIMPLY_SUPPORTED_MIDSPAN,
        BoundaryCase::CC => &CLAMPED_MIDSPAN,
    }
}

/// `[DTS, PFTS, Q4]` peak shear stress per grading and power index.
pub type PeakShear = [[[f64; 3]; 5]; 3];

/// Cantilever, `x = 500` mm.
pub const CANTILEVER_SHEAR: PeakShear = [
    [
        [75.025, 75.000, 74.935],
        [79.125, 78.571, 78.493],
        [82.483, 79.937, 79.889],
        [83.637, 73.118, 73.088],
        [66.515, 70.854, 70.820],
    ],
    [
        [75.025, 75.000, 74.935],
        [81.045, 83.042, 82.848],
        [85.237, 88.534, 88.376],
        [97.140, 99.991, 99.782],
        [100.97, 100.88, 100.65],
    ],
    [
        [87.238, 89.371, 89.317],
        [93.727, 86.698, 86.635],
        [104.89, 84.444, 84.380],
        [153.52, 77.476, 77.473],
        [170.99, 75.921, 75.887],
    ],
];

/// Clamped beam, `x = 1500` mm.
pub const CLAMPED_SHEAR: PeakShear = [
    [
        [373.99, 375.00, 374.68],
        [394.34, 392.85, 392.47],
        [411.17, 399.68, 399.45],
        [417.44, 365.59, 365.45],
        [332.02, 354.27, 354.11],
    ],
    [
        [373.99, 375.00, 374.68],
        [403.34, 415.20, 414.24],
        [423.65, 442.66, 441.88],
        [481.46, 499.94, 498.91],
        [500.25, 504.41, 503.27],
    ],
    [
        [434.80, 446.85, 446.58],
        [466.94, 433.49, 433.17],
        [522.75, 422.22, 421.90],
        [765.87, 387.38, 387.37],
        [853.19, 379.60, 379.44],
    ],
];

pub fn peak_shear(boundary: BoundaryCase) -> Option<&'static PeakShear> {
    match boundary {
        BoundaryCase::CF => Some(&CANTILEVER_SHEAR),
        BoundaryCase::CC => Some(&CLAMPED_SHEAR),
        BoundaryCase::SS => None,
    }
}

/// One mesh-convergence study: deflection per element count for
/// `[DEB, DFS, DTS, PFTS-T, PFTS]`; `None` where no value is published.
#[derive(Debug, Clone, Copy)]
pub struct Ladder {
    pub grading: GradingKind,
    pub p: f64,
    pub boundary: BoundaryCase,
    pub rows: &'static [(usize, [Option<f64>; 5])],
    pub converged: [f64; 5],
}

const N: Option<f64> = None;

pub const CANTILEVER_B5_LADDER: Ladder = Ladder {
    grading: GradingKind::TypeB,
    p: 5.0,
    boundary: BoundaryCase::CF,
    rows: &[
        (1, [Some(44.527), Some(2.6514), Some(34.044), Some(45.088), Some(45.102)]),
        (2, [Some(44.527), Some(9.0191), Some(42.391), Some(45.088), Some(45.102)]),
        (4, [N, Some(22.571), Some(44.468), N, N]),
        (8, [N, Some(36.151), Some(44.966), N, N]),
        (16, [N, Some(42.552), Some(45.067), N, N]),
        (32, [N, Some(44.522), Some(45.084), N, N]),
        (64, [N, Some(45.044), Some(45.087), N, N]),
        (128, [N, Some(45.176), Some(45.088), N, N]),
        (256, [N, Some(45.209), Some(45.088), N, N]),
        (512, [N, Some(45.217), N, N, N]),
        (1024, [N, Some(45.220), N, N, N]),
        (2048, [N, Some(45.220), N, N, N]),
    ],
    converged: [44.527, 45.220, 45.088, 45.088, 45.102],
};

pub const CANTILEVER_C5_LADDER: Ladder = Ladder {
    grading: GradingKind::TypeC,
    p: 5.0,
    boundary: BoundaryCase::CF,
    rows: &[
        (1, [Some(32.759), Some(3.1784), Some(28.417), Some(37.095), Some(37.232)]),
        (2, [Some(35.286), Some(10.107), Some(35.144), Some(37.095), Some(37.232)]),
        (4, [Some(35.917), Some(22.214), Some(36.717), N, N]),
        (8, [Some(36.075), Some(31.709), Some(37.021), N, N]),
        (16, [Some(36.115), Some(35.503), Some(37.075), N, N]),
        (32, [Some(36.125), Some(36.597), Some(37.089), N, N]),
        (64, [Some(36.127), Some(36.881), Some(37.093), N, N]),
        (128, [Some(36.128), Some(36.953), Some(37.094), N, N]),
        (256, [Some(36.128), Some(36.971), Some(37.094), N, N]),
        (512, [N, Some(36.976), N, N, N]),
        (1024, [N, Some(36.977), N, N, N]),
        (2048, [N, Some(36.977), N, N, N]),
    ],
    converged: [36.128, 36.977, 37.094, 37.095, 37.232],
};

pub const SIMPLY_SUPPORTED_C5_LADDER: Ladder = Ladder {
    grading: GradingKind::TypeC,
    p: 5.0,
    boundary: BoundaryCase::SS,
    rows: &[
        (1, [N, N, N, Some(230.70), Some(231.39)]),
        (2, [Some(163.79), Some(138.66), Some(142.09), Some(230.70), Some(231.39)]),
        (4, [Some(210.30), Some(223.30), Some(209.59), N, N]),
        (8, [Some(221.92), Some(229.01), Some(225.94), N, N]),
        (16, [Some(224.83), Some(229.85), Some(229.62), N, N]),
        (32, [Some(225.56), Some(230.00), Some(230.43), N, N]),
        (64, [Some(225.74), Some(230.03), Some(230.63), N, N]),
        (128, [Some(225.78), Some(230.04), Some(230.68), N, N]),
        (256, [Some(225.80), Some(230.05), Some(230.69), N, N]),
        (512, [Some(225.80), Some(230.05), Some(230.69), N, N]),
    ],
    converged: [225.80, 230.05, 230.69, 230.70, 231.39],
};

pub const CLAMPED_C5_LADDER: Ladder = Ladder {
    grading: GradingKind::TypeC,
    p: 5.0,
    boundary: BoundaryCase::CC,
    rows: &[
        (1, [N, N, N, Some(49.929), Some(50.606)]),
        (2, [Some(28.313), Some(18.689), Some(142.09), Some(49.929), Some(50.606)]),
        (4, [Some(40.948), Some(45.488), Some(40.237), N, N]),
        (8, [Some(44.107), Some(49.076), Some(48.085), N, N]),
        (16, [Some(44.897), Some(49.384), Some(49.549), N, N]),
        (32, [Some(45.094), Some(49.405), Some(49.815), N, N]),
        (64, [Some(45.143), Some(49.407), Some(49.894), N, N]),
        (128, [Some(45.156), Some(49.406), Some(49.920), N, N]),
        (256, [Some(45.159), Some(49.406), Some(49.927), N, N]),
        (512, [Some(45.160), N, Some(49.929), N, N]),
        (1024, [Some(45.160), N, Some(49.929), N, N]),
    ],
    converged: [45.160, 49.406, 49.929, 49.929, 50.606],
};

pub const LADDERS: [Ladder; 4] = [CANTILEVER_B5_LADDER, CANTILEVER_C5_LADDER, SIMPLY_SUPPORTED_C5_LADDER, CLAMPED_C5_LADDER];
