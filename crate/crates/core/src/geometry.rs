//! Array geometries and far-field steering vectors.
//!
//! All spacings are measured in wavelengths and all angles from broadside.
//! A NULA is `N_b` copies of `ULA(N, d)` laid out with an inter-block gap
//! `ΔD`, so consecutive blocks start `D = (N - 1)d + ΔD` apart.

use crate::error::{Error, Result};
use crate::math::cis_turns;
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

const ANGLE_SLACK: f64 = 1e-12;

/// Angle of arrival in radians, restricted to the front half-plane.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Angle(f64);

impl Angle {
    pub fn from_radians(radians: f64) -> Result<Self> {
        if !radians.is_finite() || radians.abs() > FRAC_PI_2 + ANGLE_SLACK {
            return Err(Error::AngleOutOfRange(radians));
        }
        Ok(Angle(radians.clamp(-FRAC_PI_2, FRAC_PI_2)))
    }

    pub fn from_degrees(degrees: f64) -> Result<Self> {
        Self::from_radians(degrees.to_radians())
    }

    /// Builds the angle whose sine is `s`; `s` must lie in `[-1, 1]` up to
    /// rounding.
    pub fn from_sin(s: f64) -> Result<Self> {
        if !s.is_finite() || s.abs() > 1.0 + ANGLE_SLACK {
            return Err(Error::AngleOutOfRange(s));
        }
        Ok(Angle(s.clamp(-1.0, 1.0).asin()))
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn degrees(self) -> f64 {
        self.0.to_degrees()
    }

    pub fn sin(self) -> f64 {
        self.0.sin()
    }

    pub fn cos(self) -> f64 {
        self.0.cos()
    }
}

/// `ULA(N, d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UlaGeometry {
    n_elements: usize,
    spacing: f64,
}

impl UlaGeometry {
    pub fn new(n_elements: usize, spacing: f64) -> Result<Self> {
        if n_elements == 0 {
            return Err(Error::InvalidGeometry(
                "ULA needs at least one element".into(),
            ));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "element spacing must be positive, got {spacing}"
            )));
        }
        Ok(UlaGeometry {
            n_elements,
            spacing,
        })
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn aperture(&self) -> f64 {
        (self.n_elements - 1) as f64 * self.spacing
    }

    pub fn element_positions(&self) -> Vec<f64> {
        (0..self.n_elements)
            .map(|n| n as f64 * self.spacing)
            .collect()
    }
}

/// Block-partitioned NULA: `n_blocks` subarrays separated by `block_gap`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NulaGeometry {
    n_blocks: usize,
    subarray: UlaGeometry,
    block_gap: f64,
}

impl NulaGeometry {
    pub fn new(n_blocks: usize, subarray: UlaGeometry, block_gap: f64) -> Result<Self> {
        if n_blocks == 0 {
            return Err(Error::InvalidGeometry(
                "NULA needs at least one block".into(),
            ));
        }
        if !(block_gap.is_finite() && block_gap > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "block gap must be positive, got {block_gap}"
            )));
        }
        Ok(NulaGeometry {
            n_blocks,
            subarray,
            block_gap,
        })
    }

    pub fn n_blocks(&self) -> usize {
        self.n_blocks
    }

    pub fn subarray(&self) -> UlaGeometry {
        self.subarray
    }

    pub fn block_gap(&self) -> f64 {
        self.block_gap
    }

    /// Block pitch `D = (N - 1)d + ΔD`.
    pub fn pitch(&self) -> f64 {
        self.subarray.aperture() + self.block_gap
    }

    /// The block array `ULA(N_b, D)` with each block collapsed to one element.
    pub fn block_array(&self) -> UlaGeometry {
        UlaGeometry {
            n_elements: self.n_blocks,
            spacing: self.pitch(),
        }
    }

    pub fn total_elements(&self) -> usize {
        self.n_blocks * self.subarray.n_elements
    }

    pub fn aperture(&self) -> f64 {
        (self.n_blocks - 1) as f64 * self.pitch() + self.subarray.aperture()
    }

    /// Element coordinates in the same order as [`steering_nula`]: index
    /// `n_elem * N_b + n_block` sits at `n_block·D + n_elem·d`.
    pub fn element_positions(&self) -> Vec<f64> {
        let pitch = self.pitch();
        let d = self.subarray.spacing;
        let mut out = Vec::with_capacity(self.total_elements());
        for n_elem in 0..self.subarray.n_elements {
            for n_block in 0..self.n_blocks {
                out.push(n_block as f64 * pitch + n_elem as f64 * d);
            }
        }
        out
    }
}

/// Either array family, for operations that accept both.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArrayGeometry {
    Ula(UlaGeometry),
    Nula(NulaGeometry),
}

impl ArrayGeometry {
    pub fn steering(&self, theta: Angle) -> SteeringVector {
        match self {
            ArrayGeometry::Ula(g) => steering_ula(g, theta),
            ArrayGeometry::Nula(g) => steering_nula(g, theta),
        }
    }

    pub fn total_elements(&self) -> usize {
        match self {
            ArrayGeometry::Ula(g) => g.n_elements(),
            ArrayGeometry::Nula(g) => g.total_elements(),
        }
    }

    pub fn aperture(&self) -> f64 {
        match self {
            ArrayGeometry::Ula(g) => g.aperture(),
            ArrayGeometry::Nula(g) => g.aperture(),
        }
    }

    /// Subarray element spacing `d`.
    pub fn element_spacing(&self) -> f64 {
        match self {
            ArrayGeometry::Ula(g) => g.spacing(),
            ArrayGeometry::Nula(g) => g.subarray().spacing(),
        }
    }
}

impl From<UlaGeometry> for ArrayGeometry {
    fn from(g: UlaGeometry) -> Self {
        ArrayGeometry::Ula(g)
    }
}

impl From<NulaGeometry> for ArrayGeometry {
    fn from(g: NulaGeometry) -> Self {
        ArrayGeometry::Nula(g)
    }
}

/// Unit-modulus phase vector of a plane wave across the array.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringVector {
    entries: Vec<Complex64>,
}

impl SteeringVector {
    /// Phase vector `exp(j·2π·x·sin θ)` over explicit element coordinates.
    pub fn from_positions(positions: &[f64], theta: Angle) -> Self {
        let s = theta.sin();
        SteeringVector {
            entries: positions.iter().map(|&x| cis_turns(x * s)).collect(),
        }
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.entries
    }

    /// `self ⊗ other`: entry `i * other.len() + j` is `self[i]·other[j]`.
    pub fn kron(&self, other: &SteeringVector) -> SteeringVector {
        let mut entries = Vec::with_capacity(self.len() * other.len());
        for a in &self.entries {
            entries.extend(other.entries.iter().map(|b| a * b));
        }
        SteeringVector { entries }
    }
}

fn uniform_phases(n: usize, spacing: f64, theta: Angle) -> SteeringVector {
    let s = theta.sin();
    SteeringVector {
        entries: (0..n).map(|k| cis_turns(k as f64 * spacing * s)).collect(),
    }
}

/// Steering vector of `ULA(N, d)`: entry `n` is `exp(j·2π·n·d·sin θ)`.
pub fn steering_ula(geom: &UlaGeometry, theta: Angle) -> SteeringVector {
    uniform_phases(geom.n_elements, geom.spacing, theta)
}

/// Steering vector of the block array `ULA(N_b, D)`.
pub fn steering_block(geom: &NulaGeometry, theta: Angle) -> SteeringVector {
    uniform_phases(geom.n_blocks, geom.pitch(), theta)
}

/// Full NULA steering vector, `h_s ⊗ h_b` (subarray first).
pub fn steering_nula(geom: &NulaGeometry, theta: Angle) -> SteeringVector {
    steering_ula(&geom.subarray, theta).kron(&steering_block(geom, theta))
}
