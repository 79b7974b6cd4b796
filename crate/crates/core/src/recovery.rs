//! Pointwise stresses and section resultants from a solved beam.
//!
//! Shear stress comes in two flavours. The equilibrium stress integrates the
//! axial equilibrium of a fibre, `τ = S_w M_w,x + S_θ M_θ,x`, and is smooth
//! across material interfaces. The constitutive stress `G(y) f,y(y) γ0` (or
//! `G γ0` for DFS) follows the shear modulus: it kinks where the modulus
//! gradient changes and jumps where the modulus itself does. The axial force
//! gradient is not included in `τ`.

use std::io::Write;

use nalgebra::{Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::assembly::{ElementKind, Solution};
use crate::error::{FgError, Result};
use crate::material::{shear_modulus, FgMaterial};
use crate::section::{reddy, strain_row, Section};

/// Default number of thickness samples in a profile.
pub const DEFAULT_SAMPLES: usize = 201;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShearRecovery {
    Equilibrium,
    Constitutive,
    /// Plane-stress reference solution.
    Plane,
}

impl ShearRecovery {
    pub fn label(self) -> &'static str {
        match self {
            ShearRecovery::Equilibrium => "equilibrium",
            ShearRecovery::Constitutive => "constitutive",
            ShearRecovery::Plane => "plane",
        }
    }

    /// The recovery reported by default for an element kind.
    pub fn default_for(kind: ElementKind) -> Result<Self> {
        match kind {
            ElementKind::Pfts | ElementKind::PftsT => Ok(ShearRecovery::Equilibrium),
            ElementKind::Dfs | ElementKind::Dts => Ok(ShearRecovery::Constitutive),
            ElementKind::Deb => Err(FgError::InvalidModel("DEB has no transverse shear strain".into())),
        }
    }
}

/// A thickness coordinate tagged with the layer whose law is used, so that
/// interfaces can be sampled from both sides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThicknessSample {
    pub y: f64,
    pub layer: usize,
}

/// Chebyshev–Lobatto points in every layer; interfaces appear once per side.
pub fn thickness_samples(material: &FgMaterial, count: usize) -> Vec<ThicknessSample> {
    let layers = material.layer_count();
    let per_layer = count.div_ceil(layers).max(2);
    let mut out = Vec::with_capacity(per_layer * layers);
    for (layer, (a, b)) in material.layers().enumerate() {
        for k in 0..per_layer {
            let t = 0.5 * (1.0 - (std::f64::consts::PI * k as f64 / (per_layer - 1) as f64).cos());
            let y = if k == per_layer - 1 { b } else { a + (b - a) * t };
            out.push(ThicknessSample { y, layer });
        }
    }
    out
}

/// Section quantities at one `x`, reused for every thickness point.
#[derive(Debug, Clone)]
struct PointEvaluator<'a> {
    section: &'a Section,
    strains: Vector3<f64>,
    shear: ShearSource,
}

#[derive(Debug, Clone, Copy)]
enum ShearSource {
    Equilibrium(Vector2<f64>),
    /// `γ0`, and whether the Reddy slope `f,y` shapes it.
    Constitutive(f64, bool),
}

impl<'a> PointEvaluator<'a> {
    fn new(solution: &'a Solution, x: f64, recovery: ShearRecovery) -> Result<Self> {
        let section = solution.section();
        let strains = solution.generalized_strains(x)?;
        let shear = match recovery {
            ShearRecovery::Equilibrium => ShearSource::Equilibrium(solution.tau_parameters(x)?),
            ShearRecovery::Constitutive => match solution.kind() {
                ElementKind::Deb => {
                    return Err(FgError::InvalidModel("DEB has no transverse shear strain".into()));
                }
                ElementKind::Dfs => ShearSource::Constitutive(solution.local_fields(x)?.gamma0, false),
                ElementKind::Dts => ShearSource::Constitutive(solution.local_fields(x)?.gamma0, true),
                ElementKind::Pfts | ElementKind::PftsT => {
                    let ds = solution.model().shear_stiffness().expect("force-based kinds carry a shear stiffness");
                    ShearSource::Constitutive(solution.resultants(x)?.qt / ds, true)
                }
            },
            ShearRecovery::Plane => {
                return Err(FgError::InvalidModel("plane recovery belongs to the plane-stress solver".into()));
            }
        };
        Ok(Self { section, strains, shear })
    }

    fn modulus(&self, s: ThicknessSample) -> f64 {
        self.section.material().modulus_in_layer(s.layer, s.y)
    }

    fn sigma(&self, s: ThicknessSample) -> f64 {
        self.modulus(s) * (strain_row(s.y, self.section.height()) * self.strains)[0]
    }

    fn tau(&self, s: ThicknessSample) -> f64 {
        match self.shear {
            ShearSource::Equilibrium(t) => {
                let (sw, st) = self.section.shear_shape_in_layer(s.layer, s.y);
                sw * t[0] + st * t[1]
            }
            ShearSource::Constitutive(gamma, reddy_shape) => {
                let g = shear_modulus(self.modulus(s), self.section.material().nu);
                let slope = if reddy_shape { reddy(s.y, self.section.height()).1 } else { 1.0 };
                g * slope * gamma
            }
        }
    }
}

fn sample_at(section: &Section, y: f64) -> Result<ThicknessSample> {
    let layer = section.material().layer_of(y)?;
    let m = section.material();
    Ok(ThicknessSample { y: y.clamp(m.bottom(), m.top()), layer })
}

/// `σ_x(x, y)`.
pub fn normal_stress(solution: &Solution, x: f64, y: f64) -> Result<f64> {
    let sample = sample_at(solution.section(), y)?;
    let strains = solution.generalized_strains(x)?;
    let s = solution.section();
    Ok(s.material().modulus_in_layer(sample.layer, sample.y) * (strain_row(sample.y, s.height()) * strains)[0])
}

/// `τ_xy(x, y)` with the kind's default recovery.
pub fn shear_stress(solution: &Solution, x: f64, y: f64) -> Result<f64> {
    shear_stress_with(solution, x, y, ShearRecovery::default_for(solution.kind())?)
}

pub fn shear_stress_with(solution: &Solution, x: f64, y: f64, recovery: ShearRecovery) -> Result<f64> {
    let sample = sample_at(solution.section(), y)?;
    Ok(PointEvaluator::new(solution, x, recovery)?.tau(sample))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectionResultants {
    pub n: f64,
    pub m: f64,
    /// Total shear `c1 - q0 x`.
    pub q: f64,
    pub mw: f64,
    pub mt: f64,
    pub qt: f64,
    /// `M_w,x + Q_θ`, the second expression of the total shear.
    pub q_from_parts: f64,
}

/// Resultants of a force-based solution.
pub fn section_resultants(solution: &Solution, x: f64) -> Result<SectionResultants> {
    let r = solution.resultants(x)?;
    Ok(SectionResultants { n: r.axial, m: r.moment, q: r.shear, mw: r.mw, mt: r.mt, qt: r.qt, q_from_parts: r.mw_x + r.qt })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StressProfile {
    pub x: f64,
    pub element_kind: String,
    pub recovery: ShearRecovery,
    pub width: f64,
    pub ys: Vec<f64>,
    pub sigma_x: Vec<f64>,
    pub tau_xy: Vec<f64>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    x_mm: f64,
    y_mm: f64,
    sigma_x: f64,
    tau_xy: f64,
    element_kind: &'a str,
}

impl StressProfile {
    pub fn max_abs_tau(&self) -> f64 {
        self.tau_xy.iter().fold(0.0, |m, t| m.max(t.abs()))
    }

    fn trapezoid(&self, f: impl Fn(usize) -> f64) -> f64 {
        (1..self.ys.len()).map(|i| 0.5 * (f(i) + f(i - 1)) * (self.ys[i] - self.ys[i - 1])).sum::<f64>() * self.width
    }

    /// `b ∫ τ dy` by the trapezoid rule.
    pub fn shear_resultant(&self) -> f64 {
        self.trapezoid(|i| self.tau_xy[i])
    }

    /// `b ∫ σ dy`.
    pub fn axial_resultant(&self) -> f64 {
        self.trapezoid(|i| self.sigma_x[i])
    }

    /// `b ∫ y σ dy`.
    pub fn moment_resultant(&self) -> f64 {
        self.trapezoid(|i| self.ys[i] * self.sigma_x[i])
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        write_profiles_csv(std::slice::from_ref(self), writer)
    }
}

/// Writes profiles as CSV with columns `x_mm, y_mm, sigma_x, tau_xy, element_kind`.
pub fn write_profiles_csv<W: Write>(profiles: &[StressProfile], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| FgError::Io(std::io::Error::other(e));
    for p in profiles {
        for i in 0..p.ys.len() {
            w.serialize(CsvRow {
                x_mm: p.x,
                y_mm: p.ys[i],
                sigma_x: p.sigma_x[i],
                tau_xy: p.tau_xy[i],
                element_kind: &p.element_kind,
            })
            .map_err(io)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `(b∫σ dy, b∫yσ dy, b∫τ dy)` by the section's graded quadrature.
pub fn stress_resultants(solution: &Solution, x: f64, recovery: ShearRecovery) -> Result<(f64, f64, f64)> {
    let eval = PointEvaluator::new(solution, x, recovery)?;
    let b = solution.section().width();
    let mut out = (0.0, 0.0, 0.0);
    for (layer, y, w) in solution.section().thickness_points() {
        let s = ThicknessSample { y, layer };
        let sigma = eval.sigma(s);
        out.0 += b * w * sigma;
        out.1 += b * w * y * sigma;
        out.2 += b * w * eval.tau(s);
    }
    Ok(out)
}

/// Profile at `x` with the default sampling and the kind's default recovery.
pub fn stress_profile(solution: &Solution, x: f64) -> Result<StressProfile> {
    let samples = thickness_samples(solution.section().material(), DEFAULT_SAMPLES);
    stress_profile_with(solution, x, &samples, ShearRecovery::default_for(solution.kind())?)
}

pub fn stress_profile_with(
    solution: &Solution,
    x: f64,
    samples: &[ThicknessSample],
    recovery: ShearRecovery,
) -> Result<StressProfile> {
    let eval = PointEvaluator::new(solution, x, recovery)?;
    Ok(StressProfile {
        x,
        element_kind: solution.kind().label().to_string(),
        recovery,
        width: solution.section().width(),
        ys: samples.iter().map(|s| s.y).collect(),
        sigma_x: samples.iter().map(|&s| eval.sigma(s)).collect(),
        tau_xy: samples.iter().map(|&s| eval.tau(s)).collect(),
    })
}

/// Largest `|τ_xy|` over the thickness at `x`: the best profile sample is
/// refined by golden-section search inside its layer.
pub fn max_shear_stress(solution: &Solution, x: f64, recovery: ShearRecovery) -> Result<f64> {
    let samples = thickness_samples(solution.section().material(), DEFAULT_SAMPLES);
    let eval = PointEvaluator::new(solution, x, recovery)?;
    let values: Vec<f64> = samples.iter().map(|&s| eval.tau(s).abs()).collect();
    let (best, &peak) = values.iter().enumerate().fold((0, &0.0), |acc, (i, v)| if *v > *acc.1 { (i, v) } else { acc });
    let layer = samples[best].layer;
    let lo = if best > 0 && samples[best - 1].layer == layer { samples[best - 1].y } else { samples[best].y };
    let hi = if best + 1 < samples.len() && samples[best + 1].layer == layer { samples[best + 1].y } else { samples[best].y };
    if hi <= lo {
        return Ok(peak);
    }
    let f = |y: f64| eval.tau(ThicknessSample { y, layer }).abs();
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    Ok(peak.max(fc).max(fd))
}
