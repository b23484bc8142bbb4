pub mod codebook;
pub mod config;
pub mod error;
pub mod experiments;
mod fft;
pub mod raster;
pub mod resonator;
pub mod rotation;
pub mod run;
pub mod spatial;
pub mod tensor;

pub use codebook::{Codebook, Key};
pub use config::GridConfig;
pub use error::{Result, VsaError};
pub use raster::Grid2D;
pub use spatial::{ModuleGeometry, Point2D};
pub use tensor::{bundle, GcTensor, PhaseTensor};
