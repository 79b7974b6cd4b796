//! Static analysis of functionally graded and sandwich beams with a
//! force-based higher-order shear element, displacement-based comparison
//! elements and a plane-stress reference solver.

pub mod conventions;
pub mod error;
pub mod material;
pub mod quadrature;
pub mod recovery;
pub mod assembly;
pub mod benchmarks;
pub mod classic;
pub mod linalg;
pub mod pfts;
pub mod q4;
pub mod section;

pub use error::{FgError, Result};
pub use material::{FgMaterial, GradingKind};
pub use section::{QuadratureSpec, Section, SectionConstants, SectionGeometry};
