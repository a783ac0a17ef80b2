//! Coprime block design that nulls every grating lobe.
//!
//! With `N_b > ⌊d(1 + sin θ_max)⌋` blocks and inter-block gap
//! `ΔD = p·d/N_b`, `gcd(p, N_b) = 1`, the block array has a null on every
//! grating lobe of the subarray for any steering `|θ₁| ≤ θ_max`: the
//! numerator `sin(π p k)` vanishes while `p k / N_b` is never an integer
//! because `|k| < N_b`.

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{Angle, NulaGeometry, UlaGeometry};
use crate::grating::gl_enumerate;
use crate::leakage::{block_leakage_at_gl, leakage_nula_factored};
use crate::math::nudged_floor;
use std::f64::consts::FRAC_PI_2;

/// Largest `|α_b(φ_k)|` still counted as a null.
pub const NULL_TOL: f64 = 1e-12;

/// Greatest common divisor by Euclid's algorithm.
pub fn gcd(a: u64, b: u64) -> Result<u64> {
    if a == 0 && b == 0 {
        return Err(Error::GcdUndefined);
    }
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    Ok(a)
}

fn coprime(a: u64, b: u64) -> bool {
    gcd(a, b).map(|g| g == 1).unwrap_or(false)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignRequest {
    d: f64,
    theta_max: Angle,
    element_budget: Option<u64>,
}

impl DesignRequest {
    pub fn new(d: f64, theta_max: Angle, element_budget: Option<u64>) -> Result<Self> {
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::InvalidRequest(format!(
                "element spacing must be positive, got {d}"
            )));
        }
        if theta_max.radians() <= 0.0 {
            return Err(Error::InvalidRequest(
                "maximum steering angle must lie in (0, 90] degrees".into(),
            ));
        }
        if element_budget == Some(0) {
            return Err(Error::InvalidRequest(
                "element budget must be positive".into(),
            ));
        }
        Ok(DesignRequest {
            d,
            theta_max,
            element_budget,
        })
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn theta_max(&self) -> Angle {
        self.theta_max
    }

    pub fn element_budget(&self) -> Option<u64> {
        self.element_budget
    }

    /// Smallest block count with `N_b > ⌊d(1 + sin θ_max)⌋`.
    pub fn min_blocks(&self) -> u64 {
        nudged_floor(self.d * (1.0 + self.theta_max.sin())).max(0) as u64 + 1
    }
}

/// A `(N_b, p)` block design for element spacing `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NulaDesign {
    n_blocks: u64,
    p: u64,
    d: f64,
    block_gap: f64,
    certified: bool,
}

impl NulaDesign {
    /// Uncertified design with `ΔD = p·d/N_b`.
    pub fn new(n_blocks: u64, p: u64, d: f64) -> Result<Self> {
        if n_blocks == 0 || p == 0 {
            return Err(Error::InvalidRequest(
                "block count and p must be positive".into(),
            ));
        }
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::InvalidRequest(format!(
                "element spacing must be positive, got {d}"
            )));
        }
        Ok(NulaDesign {
            n_blocks,
            p,
            d,
            block_gap: p as f64 * d / n_blocks as f64,
            certified: false,
        })
    }

    pub fn n_blocks(&self) -> u64 {
        self.n_blocks
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn block_gap(&self) -> f64 {
        self.block_gap
    }

    pub fn certified(&self) -> bool {
        self.certified
    }

    pub fn is_coprime(&self) -> bool {
        coprime(self.p, self.n_blocks)
    }

    /// The physical array with `n_sub` elements per block.
    pub fn geometry(&self, n_sub: usize) -> Result<NulaGeometry> {
        NulaGeometry::new(
            self.n_blocks as usize,
            UlaGeometry::new(n_sub, self.d)?,
            self.block_gap,
        )
    }

    /// True when `p·k/N_b` is an integer, i.e. the block null misses lobe `k`.
    pub fn lobe_ratio_is_integer(&self, k: i64) -> bool {
        (self.p as u128 * k.unsigned_abs() as u128).is_multiple_of(self.n_blocks as u128)
    }

    fn with_certificate(mut self, certified: bool) -> Self {
        self.certified = certified;
        self
    }
}

/// Caller-pinned parts of a design.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DesignOverrides {
    pub n_blocks: Option<u64>,
    pub p: Option<u64>,
}

/// One `(θ₁, k)` check of a certification run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LobeCheck {
    pub theta1: Angle,
    pub k: i64,
    pub ratio_is_integer: bool,
    pub block_leakage: f64,
}

impl LobeCheck {
    pub fn passed(&self) -> bool {
        !self.ratio_is_integer && self.block_leakage < NULL_TOL
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CancellationReport {
    pub checks: Vec<LobeCheck>,
    pub steering_grid: Vec<Angle>,
    pub pass: bool,
}

impl CancellationReport {
    pub fn failures(&self) -> impl Iterator<Item = &LobeCheck> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

/// Steering angles to check: 1° steps across `[-θ_max, θ_max]`, the end
/// points, and every angle where `d(1 ± sin θ₁)` crosses an integer (the
/// lobe index set is constant between those).
pub fn steering_grid(d: f64, theta_max: Angle) -> Vec<Angle> {
    let tm = theta_max.radians();
    let step = 1f64.to_radians();
    let steps = (2.0 * tm / step).floor() as usize;
    let mut grid: Vec<f64> = (0..=steps).map(|i| -tm + i as f64 * step).collect();
    grid.push(tm);

    let smax = theta_max.sin();
    let m_max = (2.0 * d).ceil() as i64 + 1;
    for m in 1..=m_max {
        let t = m as f64 / d;
        for s in [t - 1.0, 1.0 - t] {
            if s.abs() <= smax + 1e-15 {
                grid.push(s.clamp(-1.0, 1.0).asin().clamp(-tm, tm));
            }
        }
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    grid.into_iter()
        .map(|r| Angle::from_radians(r.clamp(-FRAC_PI_2, FRAC_PI_2)).expect("in range"))
        .collect()
}

pub fn verify_cancellation(design: &NulaDesign, d: f64, theta_max: Angle) -> CancellationReport {
    verify_cancellation_with(design, d, theta_max, Exec::default())
}

pub fn verify_cancellation_with(
    design: &NulaDesign,
    d: f64,
    theta_max: Angle,
    exec: Exec,
) -> CancellationReport {
    let grid = steering_grid(d, theta_max);
    // ΔD/d is all that matters; one element per block is enough
    let geom = NulaGeometry::new(
        design.n_blocks as usize,
        UlaGeometry::new(1, d).expect("positive spacing"),
        design.p as f64 * d / design.n_blocks as f64,
    )
    .expect("positive gap");
    let per_angle = exec.map(&grid, |&theta1| {
        gl_enumerate(d, theta1)
            .lobes()
            .iter()
            .map(|lobe| LobeCheck {
                theta1,
                k: lobe.k,
                ratio_is_integer: design.lobe_ratio_is_integer(lobe.k),
                block_leakage: block_leakage_at_gl(&geom, lobe.k)
                    .expect("nonzero lobe index")
                    .norm(),
            })
            .collect::<Vec<_>>()
    });
    let checks: Vec<LobeCheck> = per_angle.into_iter().flatten().collect();
    let pass = checks.iter().all(LobeCheck::passed);
    CancellationReport {
        checks,
        steering_grid: grid,
        pass,
    }
}

fn certify(design: NulaDesign, req: &DesignRequest) -> NulaDesign {
    let pass = verify_cancellation(&design, req.d, req.theta_max).pass;
    design.with_certificate(pass)
}

fn smallest_coprime_p(n_blocks: u64) -> u64 {
    (1..)
        .find(|&p| coprime(p, n_blocks))
        .expect("p = 1 is coprime")
}

/// Picks `(N_b, p)`: smallest valid `N_b`, then smallest coprime `p`, unless
/// pinned. The result is certified only if every lobe check passes; pinned
/// values that break the rule yield an uncertified design, not an error.
pub fn design_nula(req: &DesignRequest, overrides: DesignOverrides) -> Result<NulaDesign> {
    let min_nb = req.min_blocks();
    if let Some(budget) = req.element_budget {
        let needed = overrides.n_blocks.unwrap_or(min_nb);
        if budget < min_nb.max(needed) {
            return Err(Error::Infeasible(format!(
                "element budget {budget} is below the minimum of {} elements",
                min_nb.max(needed)
            )));
        }
    }
    let (n_blocks, p) = match (overrides.n_blocks, overrides.p) {
        (Some(nb), Some(p)) => (nb, p),
        (Some(nb), None) => (nb, smallest_coprime_p(nb)),
        (None, Some(p)) => {
            let nb = (min_nb..)
                .find(|&nb| coprime(p, nb))
                .expect("some block count is coprime with p");
            (nb, p)
        }
        (None, None) => (min_nb, 1),
    };
    if let Some(budget) = req.element_budget {
        if n_blocks > budget {
            return Err(Error::Infeasible(format!(
                "{n_blocks} blocks exceed the element budget {budget}"
            )));
        }
    }
    Ok(certify(NulaDesign::new(n_blocks, p, req.d)?, req))
}

/// All certified designs with `N_b ≤ max_nb` and `p ≤ N_b·⌈max_gap/d⌉`.
pub fn enumerate_designs(
    req: &DesignRequest,
    max_nb: u64,
    max_gap: f64,
) -> Result<Vec<NulaDesign>> {
    let min_nb = req.min_blocks();
    if max_nb < min_nb {
        return Err(Error::InvalidRequest(format!(
            "max block count {max_nb} is below the minimum valid {min_nb}"
        )));
    }
    if !(max_gap.is_finite() && max_gap > 0.0) {
        return Err(Error::InvalidRequest(format!(
            "gap cap must be positive, got {max_gap}"
        )));
    }
    let p_factor = (-nudged_floor(-max_gap / req.d)).max(1) as u64;
    let pairs: Vec<(u64, u64)> = (min_nb..=max_nb)
        .flat_map(|nb| (1..=nb * p_factor).map(move |p| (nb, p)))
        .filter(|&(nb, p)| coprime(p, nb))
        .collect();
    let designs = Exec::default().map(&pairs, |&(nb, p)| {
        NulaDesign::new(nb, p, req.d).map(|d| certify(d, req))
    });
    let mut out = Vec::with_capacity(designs.len());
    for d in designs {
        let d = d?;
        if d.certified {
            out.push(d);
        }
    }
    Ok(out)
}

/// Finite-N selection outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteNChoice {
    pub design: NulaDesign,
    pub objective: f64,
    /// `(candidate, worst residual)` for every certified candidate.
    pub scores: Vec<(NulaDesign, f64)>,
}

/// Sweep resolution for the finite-N objective, in degrees.
pub const FINITE_N_RESOLUTION_DEG: f64 = 0.01;

/// Main-beam exclusion half-width in degrees: two approximate beamwidths
/// of `102° / (N_total · d_avg)`.
pub fn main_beam_exclusion_deg(geom: &NulaGeometry) -> f64 {
    let total = geom.total_elements();
    let d_avg = if total > 1 {
        geom.aperture() / (total - 1) as f64
    } else {
        geom.subarray().spacing()
    };
    2.0 * 102.0 / (total as f64 * d_avg)
}

/// Worst `|α|` over probe angles outside the main-beam window.
pub fn finite_n_objective(geom: &NulaGeometry, theta1: Angle, exec: Exec) -> f64 {
    let window = main_beam_exclusion_deg(geom);
    let steps = (180.0 / FINITE_N_RESOLUTION_DEG).round() as usize;
    let t1 = theta1.degrees();
    let worst = exec.max_range(steps + 1, |i| {
        let t = (-90.0 + i as f64 * FINITE_N_RESOLUTION_DEG).min(90.0);
        if (t - t1).abs() <= window {
            return f64::NEG_INFINITY;
        }
        let ti = Angle::from_degrees(t).expect("sweep in range");
        leakage_nula_factored(geom, theta1, ti).overall.norm()
    });
    worst.max(0.0)
}

/// Picks the certified candidate with the smallest worst residual leakage
/// at subarray size `n_sub`. Ties keep the earlier candidate.
pub fn optimize_finite_n(
    req: &DesignRequest,
    n_sub: usize,
    candidates: &[NulaDesign],
    theta1: Angle,
) -> Result<FiniteNChoice> {
    optimize_finite_n_with(req, n_sub, candidates, theta1, Exec::default())
}

pub fn optimize_finite_n_with(
    req: &DesignRequest,
    n_sub: usize,
    candidates: &[NulaDesign],
    theta1: Angle,
    exec: Exec,
) -> Result<FiniteNChoice> {
    if candidates.is_empty() {
        return Err(Error::InvalidRequest("no candidate designs given".into()));
    }
    if n_sub == 0 {
        return Err(Error::InvalidRequest(
            "subarray size must be positive".into(),
        ));
    }
    let certified: Vec<NulaDesign> = candidates
        .iter()
        .map(|c| certify(*c, req))
        .filter(NulaDesign::certified)
        .collect();
    if certified.is_empty() {
        return Err(Error::NoCertifiedCandidate);
    }
    let mut scores = Vec::with_capacity(certified.len());
    for c in &certified {
        let geom = c.geometry(n_sub)?;
        scores.push((*c, finite_n_objective(&geom, theta1, exec)));
    }
    let (design, objective) = scores
        .iter()
        .copied()
        .fold(None::<(NulaDesign, f64)>, |best, (c, v)| match best {
            Some((_, bv)) if bv <= v => best,
            _ => Some((c, v)),
        })
        .expect("nonempty");
    Ok(FiniteNChoice {
        design,
        objective,
        scores,
    })
}
