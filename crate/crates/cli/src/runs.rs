//! Analyses behind the subcommands.

use std::path::Path;
use std::sync::Arc;

use fgbeam::assembly::{solve, BeamModel, ElementKind, Reaction};
use fgbeam::pfts::NodeState;
use fgbeam::q4::PlaneSolution;
use fgbeam::recovery::{stress_profile_with, thickness_samples, write_profiles_csv, ShearRecovery, StressProfile};
use fgbeam::section::{ForceFieldConstants, PlaneSectionStiffness};
use fgbeam::{FgError, Result, Section};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::AnalysisConfig;

/// Environment variable capping the worker count.
pub const THREADS_VAR: &str = "FGBEAM_THREADS";

/// Runs `f` on a pool sized by [`THREADS_VAR`] (all cores when unset).
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T> {
    let threads = match std::env::var(THREADS_VAR) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| FgError::Config(format!("{THREADS_VAR} must be a whole number, got {v:?}")))?,
        Err(_) => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| FgError::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

#[derive(Debug, Clone, Serialize)]
pub struct SectionSummary {
    pub g: f64,
    pub lambda: f64,
    pub ds: f64,
    pub ds_hat: f64,
    /// Shear stiffness the analysed element actually used.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element_shear_stiffness: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PlaneSummary {
    pub mesh_mx: usize,
    pub mesh_my: usize,
    pub tip_w_mm: f64,
    pub midspan_w_mm: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub element: String,
    pub boundary: String,
    pub elements: usize,
    pub length_mm: f64,
    pub tip_w_mm: f64,
    pub midspan_w_mm: f64,
    pub nodes: Vec<NodeSummary>,
    pub reactions: Vec<Reaction>,
    /// Relative virtual-work residuals for axial, transverse and rotational
    /// rigid modes.
    pub equilibrium_residual: [f64; 3],
    pub section: SectionSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plane: Option<PlaneSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NodeSummary {
    pub x_mm: f64,
    pub u: f64,
    pub w: f64,
    pub w_x: f64,
    pub theta: f64,
}

pub struct AnalysisOutput {
    pub summary: Summary,
    pub profiles: Vec<StressProfile>,
}

fn node_summary(x: f64, s: &NodeState) -> NodeSummary {
    NodeSummary { x_mm: x, u: s[0], w: s[1], w_x: s[2], theta: s[3] }
}

pub fn section_summary(section: &Section, model: Option<&BeamModel>) -> SectionSummary {
    let c = section.constants();
    SectionSummary {
        g: c.g(),
        lambda: c.lambda(),
        ds: c.ds,
        ds_hat: c.ds_hat,
        element_shear_stiffness: model.and_then(|m| m.shear_stiffness()),
    }
}

fn plane_solution(config: &AnalysisConfig) -> Result<Option<PlaneSolution>> {
    config.plane_model()?.map(|m| m.solve()).transpose()
}

/// Stress profiles of the beam solution, followed by the plane-stress ones
/// when a plane mesh is configured.
fn profiles_at(config: &AnalysisConfig, beam: &fgbeam::assembly::Solution, plane: Option<&PlaneSolution>, xs: &[f64]) -> Result<Vec<StressProfile>> {
    let recovery = match config.output.recovery {
        Some(r) => r,
        None => ShearRecovery::default_for(config.analysis.element)?,
    };
    let samples = thickness_samples(beam.section().material(), config.output.samples);
    let mut out = xs
        .par_iter()
        .map(|&x| stress_profile_with(beam, x, &samples, recovery))
        .collect::<Result<Vec<_>>>()?;
    if let Some(plane) = plane {
        for &x in xs {
            out.push(plane.stress_profile(x)?);
        }
    }
    Ok(out)
}

pub fn run_analyze(config: &AnalysisConfig) -> Result<AnalysisOutput> {
    run_with_profiles(config, &config.output.profiles)
}

pub fn run_with_profiles(config: &AnalysisConfig, xs: &[f64]) -> Result<AnalysisOutput> {
    config.validate()?;
    if config.analysis.element == ElementKind::Deb && !xs.is_empty() {
        return Err(FgError::Config("DEB has no transverse shear; stress profiles need DFS, DTS, PFTS-T or PFTS".into()));
    }
    let section = Arc::new(config.section()?);
    let model = config.model(section.clone())?;
    let solution = solve(&model)?;
    let plane = plane_solution(config)?;
    let l = model.length;
    let summary = Summary {
        element: model.kind.label().into(),
        boundary: model.boundary.label().into(),
        elements: model.n_elements,
        length_mm: l,
        tip_w_mm: solution.displacement(l)?.w,
        midspan_w_mm: solution.displacement(l / 2.0)?.w,
        nodes: solution.nodes().iter().enumerate().map(|(i, s)| node_summary(model.node_x(i), s)).collect(),
        reactions: solution.reactions().to_vec(),
        equilibrium_residual: solution.equilibrium_residual()?,
        section: section_summary(&section, Some(&model)),
        plane: match &plane {
            Some(p) => {
                let h = p.mesh().height;
                let mid = p.mesh().node_y(0) + h / 2.0;
                Some(PlaneSummary {
                    mesh_mx: p.mesh().mx,
                    mesh_my: p.mesh().my,
                    tip_w_mm: p.displacement(l, mid)?.1,
                    midspan_w_mm: p.displacement(l / 2.0, mid)?.1,
                })
            }
            None => None,
        },
    };
    let profiles = profiles_at(config, &solution, plane.as_ref(), xs)?;
    Ok(AnalysisOutput { summary, profiles })
}

/// Writes `summary.json`, `profiles.csv` (when profiles were requested) and
/// the effective configuration into `dir`.
pub fn write_analysis(config: &AnalysisConfig, output: &AnalysisOutput, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let json = serde_json::to_string_pretty(&output.summary).expect("summary serializes");
    std::fs::write(dir.join("summary.json"), json + "\n")?;
    if !output.profiles.is_empty() {
        write_profiles_csv(&output.profiles, std::fs::File::create(dir.join("profiles.csv"))?)?;
    }
    std::fs::write(dir.join("effective_config.toml"), config.to_toml())?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct SectionReport {
    pub grading: String,
    pub p: f64,
    pub width_mm: f64,
    pub height_mm: f64,
    pub g: f64,
    pub lambda: f64,
    pub ds: f64,
    pub ds_hat: f64,
    /// Rows of the stiffness relating `{N, M_w, M_θ}` to `{ε0, κ_w, κ_θ}`.
    pub dn: [[f64; 3]; 3],
    pub field: ForceFieldConstants,
    pub plane_section: PlaneSectionStiffness,
}

pub fn section_report(config: &AnalysisConfig) -> Result<SectionReport> {
    config.validate()?;
    let section = config.section()?;
    let c = section.constants();
    Ok(SectionReport {
        grading: config.material.kind.label().into(),
        p: config.material.p,
        width_mm: section.width(),
        height_mm: section.height(),
        g: c.g(),
        lambda: c.lambda(),
        ds: c.ds,
        ds_hat: c.ds_hat,
        dn: std::array::from_fn(|i| std::array::from_fn(|j| c.dn[(i, j)])),
        field: c.field,
        plane_section: c.plane,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub element: String,
    pub elements: usize,
    pub w_mm: f64,
    /// Relative change against the finest mesh of the same element, percent.
    pub change_pct: f64,
    /// First mesh within 0.01 % of the finest.
    pub converged: bool,
}

/// Monitor-point deflection over a mesh ladder for each element kind.
pub fn run_convergence(config: &AnalysisConfig, meshes: &[usize], kinds: &[ElementKind]) -> Result<Vec<ConvergenceRow>> {
    config.validate()?;
    if meshes.is_empty() || meshes.contains(&0) {
        return Err(FgError::Config("--meshes needs positive element counts".into()));
    }
    let mut meshes = meshes.to_vec();
    meshes.sort_unstable();
    meshes.dedup();
    let section = Arc::new(config.section()?);
    let base = config.model(section)?;
    let jobs: Vec<(ElementKind, usize)> = kinds.iter().flat_map(|&k| meshes.iter().map(move |&n| (k, n))).collect();
    let values = jobs
        .par_iter()
        .map(|&(kind, n)| {
            let mut m = base.with_mesh(n);
            m.kind = kind;
            if kind != base.kind {
                m.shear_override = None;
            }
            solve(&m)?.reported_deflection()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(jobs.len());
    for (chunk, kind) in values.chunks(meshes.len()).zip(kinds) {
        let finest = *chunk.last().expect("non-empty ladder");
        let scale = finest.abs().max(f64::MIN_POSITIVE);
        let mut flagged = false;
        for (&w, &n) in chunk.iter().zip(&meshes) {
            let change = (w - finest).abs() / scale;
            let converged = !flagged && change <= 1e-4;
            flagged |= converged;
            rows.push(ConvergenceRow { element: kind.label().into(), elements: n, w_mm: w, change_pct: 100.0 * change, converged });
        }
    }
    Ok(rows)
}

pub fn write_convergence_csv<W: std::io::Write>(rows: &[ConvergenceRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in rows {
        w.serialize(r).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn csv_error(e: csv::Error) -> FgError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => FgError::Io(io),
        other => FgError::Config(format!("{other:?}")),
    }
}
