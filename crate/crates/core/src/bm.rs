//! Intrinsic volumes of the Brownian motion body, `V_k = omega_k / k!`, and the
//! ratio sequence `m_k = (k + 1) V_{k+1} / V_k = omega_{k+1} / omega_k`.
//!
//! `V_k` leaves the f64 range near `k = 140` and `omega_k` near `k = 430`, so
//! the sequence is carried in [`ExtFloat`], an f64 mantissa with a separate
//! binary exponent.

use std::f64::consts::{LN_2, PI};
use std::ops::{Div, Mul};

use serde::Serialize;

use crate::error::{Error, Result};

/// Limit of `m_k sqrt(k)`.
pub const MK_SCALED_LIMIT: f64 = 2.506_628_274_631_000_2;

/// Largest `k` for which [`bm_intrinsic_volume`] divides by `k!` directly.
pub const DIRECT_FACTORIAL_MAX_K: usize = 100;

/// `ln omega_k = (k/2) ln pi - ln Gamma(k/2 + 1)`.
pub fn ln_omega(k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let half = k as f64 / 2.0;
    half * PI.ln() - libm::lgamma(half + 1.0)
}

/// Volume of the unit ball in `R^k`; underflows to zero past `k ~ 430`.
pub fn omega(k: usize) -> f64 {
    match k {
        0 => 1.0,
        1 => 2.0,
        2 => PI,
        _ => ln_omega(k).exp(),
    }
}

/// `ln V_k(K_B) = ln omega_k - ln k!`.
pub fn ln_bm_intrinsic_volume(k: usize) -> f64 {
    ln_omega(k) - libm::lgamma(k as f64 + 1.0)
}

/// `V_k(K_B) = omega_k / k!`; log-space past [`DIRECT_FACTORIAL_MAX_K`].
pub fn bm_intrinsic_volume(k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::OutOfRange("k must be at least 1".into()));
    }
    if k <= DIRECT_FACTORIAL_MAX_K {
        let factorial: f64 = (1..=k).map(|j| j as f64).product();
        Ok(omega(k) / factorial)
    } else {
        Ok(ln_bm_intrinsic_volume(k).exp())
    }
}

/// `mantissa * 2^exponent` with the mantissa in `[0.5, 1)` (or zero).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtFloat {
    mantissa: f64,
    exponent: i64,
}

impl ExtFloat {
    pub fn new(x: f64) -> Self {
        Self::scaled(x, 0)
    }

    fn scaled(x: f64, exponent: i64) -> Self {
        if x == 0.0 {
            return Self {
                mantissa: 0.0,
                exponent: 0,
            };
        }
        let (m, e) = libm::frexp(x);
        Self {
            mantissa: m,
            exponent: exponent + e as i64,
        }
    }

    /// Nearest f64; zero or infinity outside its range.
    pub fn to_f64(self) -> f64 {
        if self.mantissa == 0.0 {
            return 0.0;
        }
        let e = self.exponent.clamp(-2000, 2000) as i32;
        libm::ldexp(self.mantissa, e)
    }

    pub fn ln(self) -> f64 {
        self.mantissa.ln() + self.exponent as f64 * LN_2
    }
}

impl Mul for ExtFloat {
    type Output = ExtFloat;
    fn mul(self, rhs: ExtFloat) -> ExtFloat {
        ExtFloat::scaled(self.mantissa * rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Div for ExtFloat {
    type Output = ExtFloat;
    fn div(self, rhs: ExtFloat) -> ExtFloat {
        ExtFloat::scaled(self.mantissa / rhs.mantissa, self.exponent - rhs.exponent)
    }
}

/// `omega_0, .., omega_{k_max}` by `omega_k = omega_{k-2} 2 pi / k`.
pub fn omega_sequence(k_max: usize) -> Vec<ExtFloat> {
    let mut out = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let w = match k {
            0 => ExtFloat::new(1.0),
            1 => ExtFloat::new(2.0),
            _ => out[k - 2] * ExtFloat::new(2.0 * PI / k as f64),
        };
        out.push(w);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BMVolumeRow {
    pub k: usize,
    /// Zero once it underflows; see `ln_omega_k`.
    pub omega_k: f64,
    /// Zero once it underflows; see `ln_v_k`.
    pub v_k: f64,
    pub ln_omega_k: f64,
    pub ln_v_k: f64,
    pub m_k: f64,
    pub m_k_scaled: f64,
}

/// Rows `k = 1..=k_max`, with `m_k` taken from its defining ratio
/// `(k + 1) V_{k+1} / V_k`.
pub fn mk_sequence(k_max: usize) -> Result<Vec<BMVolumeRow>> {
    if k_max == 0 {
        return Err(Error::OutOfRange("k_max must be at least 1".into()));
    }
    let omegas = omega_sequence(k_max + 1);
    let mut factorial = ExtFloat::new(1.0);
    let mut volumes = Vec::with_capacity(k_max + 2);
    for (k, &w) in omegas.iter().enumerate() {
        if k > 0 {
            factorial = factorial * ExtFloat::new(k as f64);
        }
        volumes.push(w / factorial);
    }
    let rows = (1..=k_max)
        .map(|k| {
            let m_k = (k + 1) as f64 * (volumes[k + 1] / volumes[k]).to_f64();
            BMVolumeRow {
                k,
                omega_k: omegas[k].to_f64(),
                v_k: volumes[k].to_f64(),
                ln_omega_k: omegas[k].ln(),
                ln_v_k: volumes[k].ln(),
                m_k,
                m_k_scaled: m_k * (k as f64).sqrt(),
            }
        })
        .collect();
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn omega_values() {
        assert_eq!(omega(0), 1.0);
        assert_eq!(omega(1), 2.0);
        assert_eq!(omega(2), PI);
        assert_relative_eq!(omega(3), 4.0 * PI / 3.0, max_relative = 1e-15);
        assert_relative_eq!(omega(4), PI * PI / 2.0, max_relative = 1e-15);
        assert_eq!(omega(2000), 0.0);
        assert!(ln_omega(2000).is_finite());
    }

    #[test]
    fn limit_constant() {
        assert_relative_eq!(MK_SCALED_LIMIT, (2.0 * PI).sqrt(), max_relative = 1e-16);
    }

    #[test]
    fn bm_volumes() {
        assert_relative_eq!(bm_intrinsic_volume(1).unwrap(), 2.0);
        assert_relative_eq!(bm_intrinsic_volume(2).unwrap(), PI / 2.0);
        assert_relative_eq!(bm_intrinsic_volume(3).unwrap(), 2.0 * PI / 9.0, max_relative = 1e-15);
        assert!(bm_intrinsic_volume(0).is_err());
        // direct and log-space routes meet at the switch-over
        let k = DIRECT_FACTORIAL_MAX_K;
        assert_relative_eq!(
            bm_intrinsic_volume(k).unwrap(),
            ln_bm_intrinsic_volume(k).exp(),
            max_relative = 1e-12
        );
        assert!(bm_intrinsic_volume(k + 1).unwrap() > 0.0);
    }

    #[test]
    fn ext_float_arithmetic() {
        let a = ExtFloat::new(3.0);
        let b = ExtFloat::new(0.375);
        assert_eq!((a * b).to_f64(), 1.125);
        assert_eq!((a / b).to_f64(), 8.0);
        assert_eq!(ExtFloat::new(0.0).to_f64(), 0.0);
        let mut tiny = ExtFloat::new(1.0);
        for _ in 0..100 {
            tiny = tiny * ExtFloat::new(1e-10);
        }
        assert_eq!(tiny.to_f64(), 0.0);
        assert_relative_eq!(tiny.ln(), -1000.0 * 10f64.ln(), max_relative = 1e-14);
    }

    #[test]
    fn recurrence_matches_log_gamma() {
        let seq = omega_sequence(1000);
        for (k, w) in seq.iter().enumerate() {
            assert_relative_eq!(w.ln(), ln_omega(k), epsilon = 1e-11);
            if k <= 300 {
                assert_relative_eq!(w.to_f64(), omega(k), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn mk_rows() {
        let rows = mk_sequence(3).unwrap();
        assert_eq!(rows.len(), 3);
        assert_relative_eq!(rows[0].m_k, PI / 2.0, max_relative = 1e-15);
        assert_relative_eq!(rows[1].m_k, 4.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(rows[0].v_k, 2.0);
        assert_relative_eq!(rows[1].v_k, PI / 2.0, max_relative = 1e-15);
        assert!(mk_sequence(0).is_err());
        for r in &rows {
            let factorial: f64 = (1..=r.k).map(|j| j as f64).product();
            assert_relative_eq!(r.v_k, r.omega_k / factorial, max_relative = 1e-15);
        }
    }

    #[test]
    fn mk_ratio_identity() {
        let rows = mk_sequence(1000).unwrap();
        let omegas = omega_sequence(1001);
        for r in &rows {
            let by_omega = (omegas[r.k + 1] / omegas[r.k]).to_f64();
            assert!(((r.m_k - by_omega) / by_omega).abs() <= 1e-14, "k = {}", r.k);
        }
    }

    #[test]
    fn mk_decreasing_with_sqrt_k_decay() {
        let rows = mk_sequence(100_000).unwrap();
        assert!(rows.windows(2).all(|w| w[1].m_k < w[0].m_k));
        assert!(rows.windows(2).all(|w| w[1].m_k_scaled > w[0].m_k_scaled));
        let r = &rows[9_999];
        assert_eq!(r.k, 10_000);
        assert!(((r.m_k * 100.0 - MK_SCALED_LIMIT) / MK_SCALED_LIMIT).abs() <= 0.01);
        assert!(rows.iter().all(|r| r.m_k_scaled < MK_SCALED_LIMIT));
    }
}
