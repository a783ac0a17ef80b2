//! Inter-user interference leakage `α = h₁⁺hᵢ / N`.
//!
//! Three routes are provided and must agree: the brute-force inner product
//! ([`leakage_direct`]), the Dirichlet-kernel closed form for a ULA
//! ([`leakage_ula_closed`]) and the subarray × block factorization for a
//! NULA ([`leakage_nula_factored`]).

use crate::error::{Error, Result};
use crate::geometry::{Angle, ArrayGeometry, NulaGeometry, SteeringVector, UlaGeometry};
use crate::grating::gl_enumerate;
use crate::math::{cis_turns, inner, sinpi};
use num_complex::Complex64;

/// `|sin(Δψ/2)|` below this takes the grating-lobe / main-beam branch.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Angular match tolerance (radians) between an AoA and a lobe direction.
pub const ALIGN_TOL: f64 = 1e-9;

/// Normalized inner product of two channel vectors; `|value| ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeakageFactor(Complex64);

impl LeakageFactor {
    pub const ONE: LeakageFactor = LeakageFactor(Complex64::new(1.0, 0.0));
    pub const ZERO: LeakageFactor = LeakageFactor(Complex64::new(0.0, 0.0));

    /// Wraps `value`, rejecting magnitudes above `1 + 1e-12`.
    pub fn new(value: Complex64) -> Result<Self> {
        if value.norm().is_nan() || value.norm() > 1.0 + 1e-12 {
            return Err(Error::InvalidGeometry(format!(
                "leakage magnitude {} exceeds one",
                value.norm()
            )));
        }
        Ok(LeakageFactor(value))
    }

    pub(crate) fn unchecked(value: Complex64) -> Self {
        debug_assert!(value.norm() <= 1.0 + 1e-9, "|alpha| = {}", value.norm());
        LeakageFactor(value)
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn norm(self) -> f64 {
        self.0.norm()
    }

    pub fn norm_sqr(self) -> f64 {
        self.0.norm_sqr()
    }
}

impl std::ops::Mul for LeakageFactor {
    type Output = LeakageFactor;

    fn mul(self, rhs: LeakageFactor) -> LeakageFactor {
        LeakageFactor(self.0 * rhs.0)
    }
}

/// Limit of `|α|` as the subarray grows with the block count held fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AsymptoticClass {
    Zero,
    One,
    BlockValue(LeakageFactor),
}

impl AsymptoticClass {
    pub fn limit_magnitude(&self) -> f64 {
        match self {
            AsymptoticClass::Zero => 0.0,
            AsymptoticClass::One => 1.0,
            AsymptoticClass::BlockValue(a) => a.norm(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NulaLeakage {
    pub overall: LeakageFactor,
    pub sub: LeakageFactor,
    pub block: LeakageFactor,
}

/// `(h₁⁺hᵢ) / len`.
pub fn leakage_direct(h1: &SteeringVector, hi: &SteeringVector) -> Result<LeakageFactor> {
    if h1.len() != hi.len() {
        return Err(Error::DimensionMismatch {
            left: h1.len(),
            right: hi.len(),
        });
    }
    if h1.is_empty() {
        return Err(Error::DimensionMismatch { left: 0, right: 0 });
    }
    Ok(LeakageFactor::unchecked(
        inner(h1.entries(), hi.entries()) / h1.len() as f64,
    ))
}

/// Normalized Dirichlet kernel `(1/N) Σ exp(j·2π·n·x)` for `n = 0..N-1`,
/// where `x = Δψ/2π`.
fn dirichlet(n: usize, x: f64) -> Complex64 {
    let nf = n as f64;
    let den = sinpi(x);
    if den.abs() < SINGULAR_TOL {
        // every term is (nearly) one; keep the residual phase slope
        let residual = x - x.round();
        return cis_turns((nf - 1.0) * residual / 2.0);
    }
    cis_turns((nf - 1.0) * x / 2.0) * (sinpi(nf * x) / (nf * den))
}

/// `Δψ / 2π = d (sin θᵢ - sin θ₁)`.
fn phase_turns(spacing: f64, theta1: Angle, thetai: Angle) -> f64 {
    spacing * (thetai.sin() - theta1.sin())
}

/// Closed-form ULA leakage
/// `sin(NΔψ/2) / (N sin(Δψ/2)) · exp(j(N-1)Δψ/2)`.
pub fn leakage_ula_closed(geom: &UlaGeometry, theta1: Angle, thetai: Angle) -> LeakageFactor {
    LeakageFactor::unchecked(dirichlet(
        geom.n_elements(),
        phase_turns(geom.spacing(), theta1, thetai),
    ))
}

/// `|sin(Δψ/2)|` for a ULA; zero on the main beam and on grating lobes.
pub fn half_phase_sine(spacing: f64, theta1: Angle, thetai: Angle) -> f64 {
    sinpi(phase_turns(spacing, theta1, thetai)).abs()
}

/// Envelope `1 / (N |sin(Δψ/2)|)` of the ULA leakage magnitude.
pub fn decay_bound(geom: &UlaGeometry, theta1: Angle, thetai: Angle) -> f64 {
    1.0 / (geom.n_elements() as f64 * half_phase_sine(geom.spacing(), theta1, thetai))
}

/// Leakage of a NULA as the product of its subarray and block-array factors.
pub fn leakage_nula_factored(geom: &NulaGeometry, theta1: Angle, thetai: Angle) -> NulaLeakage {
    let sub = leakage_ula_closed(&geom.subarray(), theta1, thetai);
    let block = leakage_ula_closed(&geom.block_array(), theta1, thetai);
    NulaLeakage {
        overall: sub * block,
        sub,
        block,
    }
}

/// Closed-form leakage for either geometry.
pub fn leakage_closed(geom: &ArrayGeometry, theta1: Angle, thetai: Angle) -> LeakageFactor {
    match geom {
        ArrayGeometry::Ula(g) => leakage_ula_closed(g, theta1, thetai),
        ArrayGeometry::Nula(g) => leakage_nula_factored(g, theta1, thetai).overall,
    }
}

/// Block-array leakage at the subarray's `k`-th grating lobe,
/// `(1/N_b) sin(πN_b k ΔD/d) / sin(πk ΔD/d) · exp(jπ(N_b - 1) k ΔD/d)`.
///
/// Only `ΔD/d` enters, so the value does not depend on the subarray size.
pub fn block_leakage_at_gl(geom: &NulaGeometry, k: i64) -> Result<LeakageFactor> {
    if k == 0 {
        return Err(Error::MainBeamIndex);
    }
    let ratio = geom.block_gap() / geom.subarray().spacing();
    Ok(LeakageFactor::unchecked(dirichlet(
        geom.n_blocks(),
        k as f64 * ratio,
    )))
}

/// Asymptotic `|α|` as the (sub)array length grows, for distinct AoAs.
pub fn classify_asymptotic(
    geom: &ArrayGeometry,
    theta1: Angle,
    thetai: Angle,
) -> Result<AsymptoticClass> {
    if (thetai.radians() - theta1.radians()).abs() < ALIGN_TOL {
        return Err(Error::NonDistinctAoa(thetai.radians()));
    }
    let lobes = gl_enumerate(geom.element_spacing(), theta1);
    let Some(lobe) = lobes.find(thetai, ALIGN_TOL) else {
        return Ok(AsymptoticClass::Zero);
    };
    Ok(match geom {
        ArrayGeometry::Ula(_) => AsymptoticClass::One,
        ArrayGeometry::Nula(g) => AsymptoticClass::BlockValue(block_leakage_at_gl(g, lobe.k)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{steering_block, steering_nula, steering_ula};
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn deg(x: f64) -> Angle {
        Angle::from_degrees(x).unwrap()
    }

    fn ula(n: usize, d: f64) -> UlaGeometry {
        UlaGeometry::new(n, d).unwrap()
    }

    fn lobe_interferer() -> Angle {
        Angle::from_sin(deg(45.0).sin() - 1.0 / 0.6).unwrap()
    }

    fn nula_25_21(n: usize) -> NulaGeometry {
        NulaGeometry::new(25, ula(n, 0.6), 21.0 * 0.6 / 25.0).unwrap()
    }

    #[test]
    fn direct_self_is_one() {
        let h = steering_ula(&ula(7, 0.8), deg(12.0));
        let a = leakage_direct(&h, &h).unwrap();
        assert!((a.value() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn direct_three_and_four_elements() {
        let g = ula(3, 0.5);
        let a = leakage_direct(&steering_ula(&g, deg(0.0)), &steering_ula(&g, deg(30.0))).unwrap();
        assert!((a.value() - Complex64::new(0.0, 1.0 / 3.0)).norm() < 1e-15);

        let g = ula(4, 0.5);
        let a = leakage_direct(&steering_ula(&g, deg(0.0)), &steering_ula(&g, deg(30.0))).unwrap();
        assert!(a.norm() < 1e-15);
    }

    #[test]
    fn direct_rejects_mismatch() {
        let a = steering_ula(&ula(3, 0.5), deg(0.0));
        let b = steering_ula(&ula(4, 0.5), deg(0.0));
        assert!(matches!(
            leakage_direct(&a, &b),
            Err(Error::DimensionMismatch { left: 3, right: 4 })
        ));
    }

    #[test]
    fn closed_form_examples() {
        let a = leakage_ula_closed(&ula(9, 0.7), deg(20.0), deg(20.0));
        assert!((a.norm() - 1.0).abs() < 1e-15);

        for n in [1, 2, 3, 10, 1001] {
            let a = leakage_ula_closed(&ula(n, 1.0), deg(0.0), deg(90.0));
            assert!((a.norm() - 1.0).abs() < 1e-12, "N={n}");
        }

        let a = leakage_ula_closed(&ula(3, 0.5), deg(0.0), deg(30.0));
        assert!((a.norm() - 1.0 / 3.0).abs() < 1e-15);
        assert!((a.value() - Complex64::new(0.0, 1.0 / 3.0)).norm() < 1e-15);
    }

    #[test]
    fn singular_branch_matches_direct_sum() {
        // odd k(N-1): the limit is +1, not the bare phase exp(j(N-1)Δψ/2) = -1
        let g = ula(4, 1.0);
        let closed = leakage_ula_closed(&g, deg(0.0), deg(90.0));
        let direct =
            leakage_direct(&steering_ula(&g, deg(0.0)), &steering_ula(&g, deg(90.0))).unwrap();
        assert!((closed.value() - direct.value()).norm() < 1e-12);
        assert!((closed.value() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn factored_examples() {
        let g = nula_25_21(4);
        let r = leakage_nula_factored(&g, deg(30.0), deg(30.0));
        for a in [r.overall, r.sub, r.block] {
            assert!((a.value() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }

        let single = NulaGeometry::new(1, ula(6, 0.9), 0.4).unwrap();
        let r = leakage_nula_factored(&single, deg(10.0), deg(-50.0));
        assert_eq!(r.block, LeakageFactor::ONE);
        assert_eq!(r.overall, r.sub);

        let r = leakage_nula_factored(&g, deg(45.0), lobe_interferer());
        assert!((r.sub.norm() - 1.0).abs() < 1e-12);
        assert!(r.block.norm() < 1e-12);
        assert!(r.overall.norm() < 1e-12);
        let direct = leakage_direct(
            &steering_nula(&g, deg(45.0)),
            &steering_nula(&g, lobe_interferer()),
        )
        .unwrap();
        assert!(direct.norm() < 1e-12);
    }

    #[test]
    fn block_leakage_examples() {
        assert!(block_leakage_at_gl(&nula_25_21(4), -1).unwrap().norm() < 1e-15);

        let g = NulaGeometry::new(2, ula(3, 0.8), 0.8).unwrap();
        assert!((block_leakage_at_gl(&g, 1).unwrap().norm() - 1.0).abs() < 1e-15);

        let g = NulaGeometry::new(1, ula(3, 0.8), 0.37).unwrap();
        for k in [-3, -1, 1, 2] {
            assert!((block_leakage_at_gl(&g, k).unwrap().norm() - 1.0).abs() < 1e-15);
        }
        assert!(matches!(
            block_leakage_at_gl(&g, 0),
            Err(Error::MainBeamIndex)
        ));
    }

    #[test]
    fn block_leakage_matches_block_vector_sum() {
        // at the exact lobe direction the block factor equals the closed form
        for (nb, p, d, theta1) in [
            (25usize, 21u32, 0.6, 45.0),
            (7, 3, 1.7, -20.0),
            (4, 2, 1.2, 10.0),
        ] {
            for n in [2usize, 4, 8] {
                let g = NulaGeometry::new(nb, ula(n, d), p as f64 * d / nb as f64).unwrap();
                for lobe in gl_enumerate(d, deg(theta1)).lobes() {
                    let closed = block_leakage_at_gl(&g, lobe.k).unwrap();
                    let direct = leakage_direct(
                        &steering_block(&g, deg(theta1)),
                        &steering_block(&g, lobe.direction),
                    )
                    .unwrap();
                    assert!(
                        (closed.value() - direct.value()).norm() < 1e-9,
                        "nb={nb} p={p} k={}",
                        lobe.k
                    );
                }
            }
        }
    }

    #[test]
    fn block_leakage_independent_of_subarray_size() {
        for k in [-3i64, -2, -1, 1, 2, 3] {
            let vals: Vec<Complex64> = [2usize, 4, 8]
                .iter()
                .map(|&n| block_leakage_at_gl(&nula_25_21(n), k).unwrap().value())
                .collect();
            assert_eq!(vals[0], vals[1]);
            assert_eq!(vals[1], vals[2]);
        }
    }

    #[test]
    fn classification_examples() {
        let u: ArrayGeometry = ula(100, 0.6).into();
        assert_eq!(
            classify_asymptotic(&u, deg(45.0), lobe_interferer()).unwrap(),
            AsymptoticClass::One
        );
        let u: ArrayGeometry = ula(100, 0.4).into();
        assert_eq!(
            classify_asymptotic(&u, deg(0.0), deg(20.0)).unwrap(),
            AsymptoticClass::Zero
        );
        let v: ArrayGeometry = nula_25_21(4).into();
        match classify_asymptotic(&v, deg(45.0), lobe_interferer()).unwrap() {
            AsymptoticClass::BlockValue(a) => assert!(a.norm() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            classify_asymptotic(&v, deg(45.0), deg(-10.0)).unwrap(),
            AsymptoticClass::Zero
        );
        assert!(matches!(
            classify_asymptotic(&u, deg(10.0), deg(10.0)),
            Err(Error::NonDistinctAoa(_))
        ));
    }

    #[test]
    fn zero_class_converges() {
        let (t1, ti) = (deg(0.0), deg(20.0));
        let mut prev = f64::INFINITY;
        for n in [100usize, 1000, 10000] {
            let g = ula(n, 0.4);
            let a = leakage_ula_closed(&g, t1, ti).norm();
            let bound = decay_bound(&g, t1, ti);
            assert!(a <= bound + 1e-15);
            assert!(bound < prev);
            prev = bound;
        }
        assert!(half_phase_sine(0.4, t1, ti) >= 1e-2);
        assert!(leakage_ula_closed(&ula(10000, 0.4), t1, ti).norm() < 1e-2);
    }

    proptest! {
        #[test]
        fn closed_form_matches_direct(
            n in 1usize..=64,
            d in 1e-3f64..=5.0,
            t1 in -FRAC_PI_2..=FRAC_PI_2,
            ti in -FRAC_PI_2..=FRAC_PI_2,
        ) {
            let g = ula(n, d);
            let (t1, ti) = (Angle::from_radians(t1).unwrap(), Angle::from_radians(ti).unwrap());
            let closed = leakage_ula_closed(&g, t1, ti);
            let direct = leakage_direct(&steering_ula(&g, t1), &steering_ula(&g, ti)).unwrap();
            prop_assert!((closed.value() - direct.value()).norm() < 1e-10);
            prop_assert!(closed.norm() <= 1.0 + 1e-12);
            if half_phase_sine(d, t1, ti) >= SINGULAR_TOL {
                prop_assert!(closed.norm() <= decay_bound(&g, t1, ti) * (1.0 + 1e-12));
            }
        }

        #[test]
        fn factorization_and_bound(
            n in 1usize..=16,
            nb in 1usize..=16,
            d in 0.05f64..=3.0,
            gap in 0.01f64..=3.0,
            t1 in -FRAC_PI_2..=FRAC_PI_2,
            ti in -FRAC_PI_2..=FRAC_PI_2,
        ) {
            let g = NulaGeometry::new(nb, ula(n, d), gap).unwrap();
            let (t1, ti) = (Angle::from_radians(t1).unwrap(), Angle::from_radians(ti).unwrap());
            let r = leakage_nula_factored(&g, t1, ti);
            let direct = leakage_direct(&steering_nula(&g, t1), &steering_nula(&g, ti)).unwrap();
            prop_assert!((r.overall.value() - direct.value()).norm() < 1e-10);
            prop_assert!(r.overall.norm() <= r.sub.norm().min(r.block.norm()) + 1e-12);
        }
    }
}
