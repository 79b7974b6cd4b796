//! Analysis configuration files.
//!
//! ```toml
//! [geometry]
//! length = 1000.0
//! width = 50.0
//!
//! [material]
//! kind = "B"
//! p = 5.0
//!
//! [analysis]
//! element = "pfts"
//! elements = 1
//! boundary = "CF"
//!
//! [loads]
//! [[loads.point]]
//! x = 1000.0
//! py = 5e5
//!
//! [output]
//! profiles = [50.0, 500.0, 900.0]
//! ```
//!
//! Omitted material constants fall back to the aluminium/alumina benchmark
//! beam. Unknown keys are rejected.

use std::path::Path;
use std::sync::Arc;

use fgbeam::assembly::{BeamModel, BoundaryCase, ElementKind, LoadCase};
use fgbeam::material::{BENCHMARK_POISSON, E_ALUMINA, E_ALUMINIUM};
use fgbeam::q4::{PlaneMesh, PlaneModel};
use fgbeam::recovery::{ShearRecovery, DEFAULT_SAMPLES};
use fgbeam::section::BENCHMARK_WIDTH;
use fgbeam::{FgError, FgMaterial, GradingKind, QuadratureSpec, Result, Section, SectionGeometry};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    pub geometry: GeometryConfig,
    pub material: MaterialConfig,
    pub analysis: ElementConfig,
    #[serde(default)]
    pub loads: LoadCase,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plane: Option<PlaneConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    /// Beam length, mm.
    pub length: f64,
    /// Section width, mm.
    #[serde(default = "default_width")]
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    pub kind: GradingKind,
    pub p: f64,
    #[serde(default = "default_e_m")]
    pub e_m: f64,
    #[serde(default = "default_e_c")]
    pub e_c: f64,
    #[serde(default = "default_nu")]
    pub nu: f64,
    /// Layer boundaries from bottom to top, mm. Defaults to the 200 mm
    /// benchmark layout.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub breakpoints: Option<Vec<f64>>,
    #[serde(default = "default_points")]
    pub points_per_layer: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementConfig {
    pub element: ElementKind,
    pub elements: usize,
    pub boundary: BoundaryCase,
    /// Replaces the element's shear stiffness (DTS, PFTS-T and PFTS).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shear_stiffness: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Sections where stress profiles are written, mm.
    #[serde(default)]
    pub profiles: Vec<f64>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Shear recovery for the profiles; the element's default when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recovery: Option<ShearRecovery>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { profiles: Vec::new(), samples: DEFAULT_SAMPLES, recovery: None }
    }
}

/// Plane-stress reference mesh; profiles are also written for it when set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneConfig {
    pub mesh_mx: usize,
    pub mesh_my: usize,
}

fn default_width() -> f64 {
    BENCHMARK_WIDTH
}
fn default_e_m() -> f64 {
    E_ALUMINIUM
}
fn default_e_c() -> f64 {
    E_ALUMINA
}
fn default_nu() -> f64 {
    BENCHMARK_POISSON
}
fn default_points() -> usize {
    QuadratureSpec::default().points_per_layer
}
fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

impl MaterialConfig {
    pub fn benchmark(kind: GradingKind, p: f64) -> Self {
        Self {
            kind,
            p,
            e_m: E_ALUMINIUM,
            e_c: E_ALUMINA,
            nu: BENCHMARK_POISSON,
            breakpoints: None,
            points_per_layer: default_points(),
        }
    }

    pub fn material(&self) -> Result<FgMaterial> {
        let breakpoints = match &self.breakpoints {
            Some(b) => b.clone(),
            None => FgMaterial::benchmark(self.kind, 0.0).breakpoints,
        };
        FgMaterial::new(self.kind, self.e_m, self.e_c, self.nu, self.p, breakpoints)
    }
}

impl AnalysisConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| FgError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| FgError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            FgError::Config(msg) => FgError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(FgError::Config(msg));
        if !(self.geometry.length > 0.0 && self.geometry.length.is_finite()) {
            return bad(format!("geometry.length must be positive, got {}", self.geometry.length));
        }
        if !(self.geometry.width > 0.0 && self.geometry.width.is_finite()) {
            return bad(format!("geometry.width must be positive, got {}", self.geometry.width));
        }
        if self.analysis.elements == 0 {
            return bad("analysis.elements must be at least 1".into());
        }
        if self.material.points_per_layer < 2 {
            return bad("material.points_per_layer must be at least 2".into());
        }
        if self.output.samples < 2 {
            return bad("output.samples must be at least 2".into());
        }
        if let Some(x) = self.output.profiles.iter().find(|x| !(0.0..=self.geometry.length).contains(*x)) {
            return bad(format!("output.profiles entry {x} lies outside [0, {}]", self.geometry.length));
        }
        if self.analysis.element == ElementKind::Deb && !self.output.profiles.is_empty() {
            return bad("DEB has no transverse shear; remove output.profiles or pick another element".into());
        }
        if self.analysis.shear_stiffness.is_some() && matches!(self.analysis.element, ElementKind::Deb | ElementKind::Dfs) {
            return bad("analysis.shear_stiffness applies to DTS, PFTS-T and PFTS only".into());
        }
        if let Some(plane) = &self.plane {
            if plane.mesh_mx == 0 || plane.mesh_my == 0 {
                return bad("plane.mesh_mx and plane.mesh_my must be at least 1".into());
            }
        }
        self.material.material().map_err(|e| FgError::Config(format!("material: {e}")))?;
        Ok(())
    }

    pub fn section(&self) -> Result<Section> {
        let geometry = SectionGeometry::new(self.geometry.width, self.material.material()?)?;
        Section::new(geometry, QuadratureSpec { points_per_layer: self.material.points_per_layer })
    }

    pub fn model(&self, section: Arc<Section>) -> Result<BeamModel> {
        let model = BeamModel::new(
            self.geometry.length,
            self.analysis.elements,
            section,
            self.analysis.element,
            self.loads.clone(),
            self.analysis.boundary,
        )?;
        match self.analysis.shear_stiffness {
            Some(ds) => model.with_shear_override(ds),
            None => Ok(model),
        }
    }

    pub fn plane_model(&self) -> Result<Option<PlaneModel>> {
        let Some(plane) = &self.plane else { return Ok(None) };
        let mesh = PlaneMesh::new(
            self.geometry.length,
            self.geometry.width,
            &self.material.material()?,
            plane.mesh_mx,
            plane.mesh_my,
        )?;
        PlaneModel::new(mesh, self.analysis.boundary, self.loads.clone()).map(Some)
    }
}
