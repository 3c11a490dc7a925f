//! Zero-temperature thermodynamics of locally constant potentials on
//! subshifts of finite type.

pub mod builtins;
pub mod entropy_curve;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod io;
pub mod max_face;
pub mod numeric;
pub mod orbits;
pub mod perron;
pub mod potential;
pub mod sft;
pub mod thermo;
pub mod zero_temperature;

pub use error::{Error, Result};
pub use numeric::{Rational, Scalar};
pub use potential::Potential;
pub use sft::{recode_to_one_step, RecodedSft, Sft};
