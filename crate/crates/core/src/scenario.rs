//! Multi-user matched-filter SINR.
//!
//! Each user reaches the array over one or more plane-wave paths; the
//! channel is their superposition. Leakage between users is the normalized
//! inner product of their channels, optionally scaled by the element
//! pattern, and the main user's SINR follows
//! `γ₁ / (Σ |αᵢ|² γᵢ + 1)` with unit noise power.

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{Angle, ArrayGeometry, NulaGeometry, UlaGeometry};
use crate::leakage::LeakageFactor;
use crate::math::{inner, norm};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ElementPattern {
    #[default]
    Omni,
    /// `F(θ) = cos θ`.
    ShortDipole,
}

impl ElementPattern {
    pub fn gain(self, theta: Angle) -> f64 {
        match self {
            ElementPattern::Omni => 1.0,
            // cos(±π/2) is ~6e-17 in floating point; endfire is an exact null
            ElementPattern::ShortDipole if theta.radians().abs() == std::f64::consts::FRAC_PI_2 => {
                0.0
            }
            ElementPattern::ShortDipole => theta.cos(),
        }
    }
}

/// `α' = α·F(θ₁)·F(θᵢ)`.
pub fn apply_element_pattern(
    alpha: LeakageFactor,
    theta1: Angle,
    thetai: Angle,
    pattern: ElementPattern,
) -> LeakageFactor {
    let scale = pattern.gain(theta1) * pattern.gain(thetai);
    LeakageFactor::unchecked(alpha.value() * scale)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Path {
    pub aoa: Angle,
    pub gain: Complex64,
}

impl Path {
    pub fn los(aoa: Angle) -> Self {
        Path {
            aoa,
            gain: Complex64::new(1.0, 0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct User {
    pub paths: Vec<Path>,
    /// Linear SNR `γᵢ`.
    pub snr: f64,
}

impl User {
    pub fn los(aoa: Angle, snr: f64) -> Self {
        User {
            paths: vec![Path::los(aoa)],
            snr,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UserScenario {
    users: Vec<User>,
    main_user: usize,
    element_pattern: ElementPattern,
}

impl UserScenario {
    pub fn new(
        users: Vec<User>,
        main_user: usize,
        element_pattern: ElementPattern,
    ) -> Result<Self> {
        if users.is_empty() {
            return Err(Error::Scenario("at least one user is required".into()));
        }
        if main_user >= users.len() {
            return Err(Error::Scenario(format!(
                "main_user {main_user} out of range for {} users",
                users.len()
            )));
        }
        for (i, u) in users.iter().enumerate() {
            if !(u.snr.is_finite() && u.snr > 0.0) {
                return Err(Error::Scenario(format!("users[{i}].snr must be positive")));
            }
            if u.paths.is_empty() {
                return Err(Error::Scenario(format!("users[{i}].paths is empty")));
            }
            if u.paths
                .iter()
                .any(|p| !(p.gain.re.is_finite() && p.gain.im.is_finite()))
            {
                return Err(Error::Scenario(format!(
                    "users[{i}] has a non-finite path gain"
                )));
            }
        }
        Ok(UserScenario {
            users,
            main_user,
            element_pattern,
        })
    }

    pub fn users(&self) -> &[User] {
        &self.users
    }

    pub fn main_user(&self) -> usize {
        self.main_user
    }

    pub fn element_pattern(&self) -> ElementPattern {
        self.element_pattern
    }
}

/// Superposed channel `Σ g·F(θ)·a(θ)` over the user's paths.
pub fn build_channel(
    geom: &ArrayGeometry,
    user: &User,
    pattern: ElementPattern,
) -> Result<Vec<Complex64>> {
    if user
        .paths
        .iter()
        .all(|p| p.gain == Complex64::new(0.0, 0.0))
    {
        return Err(Error::DegenerateChannel(0));
    }
    let mut h = vec![Complex64::new(0.0, 0.0); geom.total_elements()];
    for path in &user.paths {
        let w = path.gain * pattern.gain(path.aoa);
        if w == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (acc, a) in h.iter_mut().zip(geom.steering(path.aoa).entries()) {
            *acc += w * a;
        }
    }
    Ok(h)
}

/// Power-weighted RMS element gain over a user's paths; `|cos θ|` for a
/// single path under the dipole pattern.
fn pattern_scale(user: &User, pattern: ElementPattern) -> f64 {
    let total: f64 = user.paths.iter().map(|p| p.gain.norm_sqr()).sum();
    let weighted: f64 = user
        .paths
        .iter()
        .map(|p| p.gain.norm_sqr() * pattern.gain(p.aoa).powi(2))
        .sum();
    (weighted / total).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SinrReport {
    /// Linear SINR of the main user.
    pub sinr: f64,
    /// `(user index, |αᵢ|²)` for every interferer.
    pub per_user_leakage: Vec<(usize, f64)>,
    /// `α² = Σ |αᵢ|²`.
    pub total_leakage: f64,
    /// `γ₁ - SINR`.
    pub fp_gap: f64,
}

impl SinrReport {
    pub fn sinr_db(&self) -> f64 {
        10.0 * self.sinr.log10()
    }
}

/// SINR when every user has SNR `γ₁`: `(α² + 1/γ₁)⁻¹`.
pub fn sinr_equal_snr(total_leakage: f64, snr: f64) -> f64 {
    1.0 / (total_leakage + 1.0 / snr)
}

/// Main-user SINR from per-interferer leakage and SNRs.
pub fn sinr_from_leakage(main_snr: f64, interferers: &[(f64, f64)]) -> f64 {
    let interference: f64 = interferers.iter().map(|(a2, snr)| a2 * snr).sum();
    main_snr / (interference + 1.0)
}

pub fn compute_sinr(geom: &ArrayGeometry, scenario: &UserScenario) -> Result<SinrReport> {
    let pattern = scenario.element_pattern;
    let omni: Vec<Vec<Complex64>> = scenario
        .users
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let h = build_channel(geom, u, ElementPattern::Omni)
                .map_err(|_| Error::DegenerateChannel(i))?;
            if norm(&h) == 0.0 {
                return Err(Error::DegenerateChannel(i));
            }
            Ok(h)
        })
        .collect::<Result<_>>()?;
    let channels: Vec<Vec<Complex64>> = match pattern {
        ElementPattern::Omni => omni,
        _ => scenario
            .users
            .iter()
            .map(|u| build_channel(geom, u, pattern))
            .collect::<Result<_>>()?,
    };

    let m = scenario.main_user;
    let h1 = &channels[m];
    let n1 = norm(h1);
    let s1 = pattern_scale(&scenario.users[m], pattern);
    let mut per_user_leakage = Vec::with_capacity(channels.len().saturating_sub(1));
    for (i, hi) in channels.iter().enumerate() {
        if i == m {
            continue;
        }
        let ni = norm(hi);
        let a2 = if n1 == 0.0 || ni == 0.0 {
            0.0
        } else {
            let alpha = inner(h1, hi) / (n1 * ni);
            let si = pattern_scale(&scenario.users[i], pattern);
            (alpha * (s1 * si)).norm_sqr().min(1.0)
        };
        per_user_leakage.push((i, a2));
    }
    let total_leakage = per_user_leakage.iter().map(|(_, a2)| a2).sum();
    let gamma1 = scenario.users[m].snr;
    let interferers: Vec<(f64, f64)> = per_user_leakage
        .iter()
        .map(|&(i, a2)| (a2, scenario.users[i].snr))
        .collect();
    let sinr = sinr_from_leakage(gamma1, &interferers);
    Ok(SinrReport {
        sinr,
        per_user_leakage,
        total_leakage,
        fp_gap: gamma1 - sinr,
    })
}

/// Geometry parametrized by subarray length `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeometryFamily {
    Ula {
        d: f64,
    },
    Nula {
        n_blocks: usize,
        d: f64,
        block_gap: f64,
    },
}

impl GeometryFamily {
    pub fn at(&self, n: usize) -> Result<ArrayGeometry> {
        Ok(match *self {
            GeometryFamily::Ula { d } => UlaGeometry::new(n, d)?.into(),
            GeometryFamily::Nula {
                n_blocks,
                d,
                block_gap,
            } => NulaGeometry::new(n_blocks, UlaGeometry::new(n, d)?, block_gap)?.into(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub total_leakage: f64,
    pub sinr: f64,
}

/// `(N, α², SINR)` for each `N`, in input order.
pub fn fp_convergence_sweep(
    family: &GeometryFamily,
    scenario: &UserScenario,
    n_values: &[usize],
) -> Result<Vec<SweepRow>> {
    fp_convergence_sweep_with(family, scenario, n_values, Exec::default())
}

pub fn fp_convergence_sweep_with(
    family: &GeometryFamily,
    scenario: &UserScenario,
    n_values: &[usize],
    exec: Exec,
) -> Result<Vec<SweepRow>> {
    exec.map(n_values, |&n| {
        let report = compute_sinr(&family.at(n)?, scenario)?;
        Ok(SweepRow {
            n,
            total_leakage: report.total_leakage,
            sinr: report.sinr,
        })
    })
    .into_iter()
    .collect()
}
