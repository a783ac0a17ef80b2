//! Block-partitioned non-uniform linear arrays (NULAs) for massive MIMO.
//!
//! A uniform linear array with element spacing `d` (in wavelengths) has
//! grating lobes whenever `d(1 + |sin θ₁|) ≥ 1`. A user sitting on a grating
//! lobe leaks into the main user with `|α| = 1` no matter how many elements
//! the array has, so favorable propagation fails. This crate builds arrays of
//! `N_b` identical `ULA(N, d)` blocks whose block-array nulls land exactly on
//! every grating lobe of the subarray, and provides the tools to check that
//! numerically:
//!
//! * [`geometry`]: angles, ULA/NULA geometries and steering vectors.
//! * [`leakage`]: interference leakage factors, closed form and brute force.
//! * [`grating`]: grating-lobe existence and enumeration.
//! * [`design`]: coprime `(N_b, p)` design rule, certification and search.
//! * [`scenario`]: multi-user matched-filter SINR, multipath and element
//!   patterns.
//! * [`io`] and [`cli`]: file formats and the `nula` command line.

pub mod cli;
pub mod design;
mod error;
pub mod exec;
pub mod geometry;
pub mod grating;
pub mod io;
pub mod leakage;
pub mod math;
pub mod scenario;

pub use error::{Error, Result};
pub use geometry::{Angle, NulaGeometry, SteeringVector, UlaGeometry};
pub use leakage::{AsymptoticClass, LeakageFactor};
