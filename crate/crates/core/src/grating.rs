//! Grating-lobe existence and enumeration for a uniform spacing `d`.
//!
//! Lobes sit where `sin φ_k = sin θ₁ + k/d`, for nonzero `k` between
//! `-⌊d(1 + sin θ₁)⌋` and `⌊d(1 - sin θ₁)⌋`. Floors are taken after snapping
//! to the nearest integer within `1e-12`, so a lobe exactly at endfire
//! counts.

use crate::geometry::Angle;
use crate::math::nudged_floor;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GratingLobe {
    pub k: i64,
    pub direction: Angle,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GratingLobeSet {
    lobes: Vec<GratingLobe>,
}

impl GratingLobeSet {
    pub fn lobes(&self) -> &[GratingLobe] {
        &self.lobes
    }

    pub fn indices(&self) -> Vec<i64> {
        self.lobes.iter().map(|l| l.k).collect()
    }

    pub fn directions(&self) -> Vec<Angle> {
        self.lobes.iter().map(|l| l.direction).collect()
    }

    pub fn len(&self) -> usize {
        self.lobes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lobes.is_empty()
    }

    /// Lobe whose direction is within `tol` radians of `theta`, if any.
    pub fn find(&self, theta: Angle, tol: f64) -> Option<GratingLobe> {
        self.lobes
            .iter()
            .copied()
            .find(|l| (l.direction.radians() - theta.radians()).abs() < tol)
    }
}

/// `(k_min, k_max)`; the range may contain only `k = 0`.
pub fn gl_index_range(d: f64, theta1: Angle) -> (i64, i64) {
    let s = theta1.sin();
    (-nudged_floor(d * (1.0 + s)), nudged_floor(d * (1.0 - s)))
}

/// True iff `d(1 + |sin θ₁|) ≥ 1`.
pub fn gl_exists(d: f64, theta1: Angle) -> bool {
    nudged_floor(d * (1.0 + theta1.sin().abs())) >= 1
}

pub fn gl_enumerate(d: f64, theta1: Angle) -> GratingLobeSet {
    let (k_min, k_max) = gl_index_range(d, theta1);
    let s = theta1.sin();
    let lobes = (k_min..=k_max)
        .filter(|&k| k != 0)
        .map(|k| {
            // the nudge can push |sin| a hair past one at endfire
            let sin_phi = (s + k as f64 / d).clamp(-1.0, 1.0);
            GratingLobe {
                k,
                direction: Angle::from_sin(sin_phi).expect("clamped sine"),
            }
        })
        .collect();
    GratingLobeSet { lobes }
}
