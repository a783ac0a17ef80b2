//! Small numeric helpers with explicit argument reduction.

use num_complex::Complex64;
use std::f64::consts::PI;

/// `sin(πx)`, reduced to `[-1/2, 1/2]` first so integer `x` gives an exact
/// zero and large arguments keep their accuracy.
pub fn sinpi(x: f64) -> f64 {
    let n = x.round();
    let s = (PI * (x - n)).sin();
    if n % 2.0 == 0.0 {
        s
    } else {
        -s
    }
}

/// `exp(j·2π·t)` with `t` reduced modulo one turn.
pub fn cis_turns(t: f64) -> Complex64 {
    let r = t - t.round();
    Complex64::from_polar(1.0, 2.0 * PI * r)
}

/// `floor(x)` after snapping `x` to the nearest integer when it lies within
/// `1e-12` of it.
pub fn nudged_floor(x: f64) -> i64 {
    let r = x.round();
    if (x - r).abs() < 1e-12 {
        r as i64
    } else {
        x.floor() as i64
    }
}

/// Hermitian inner product `a⁺b`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinpi_exact_on_integers() {
        for n in -50..=50 {
            assert_eq!(sinpi(n as f64), 0.0);
        }
        assert!((sinpi(0.5) - 1.0).abs() < 1e-15);
        assert!((sinpi(-1.5) - 1.0).abs() < 1e-15);
        assert!((sinpi(2.25) - (PI / 4.0).sin()).abs() < 1e-15);
    }

    #[test]
    fn cis_turns_matches_polar() {
        for &t in &[0.0, 0.1, -0.37, 3.75, 1e3 + 0.125] {
            let z = cis_turns(t);
            let w = Complex64::from_polar(1.0, 2.0 * PI * t);
            assert!((z - w).norm() < 1e-10, "t={t}");
        }
    }

    #[test]
    fn nudged_floor_snaps() {
        assert_eq!(nudged_floor(0.9999999999999998), 1);
        assert_eq!(nudged_floor(1.0), 1);
        assert_eq!(nudged_floor(1.5), 1);
        assert_eq!(nudged_floor(-0.5), -1);
        assert_eq!(nudged_floor(-1.0000000000000002), -1);
    }
}
