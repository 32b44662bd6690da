//! Sangwine-Yager check for the orthoscheme family.
//!
//! `f(x) = sum_{i=0}^{n} omega_i V_{n-i}(K) (-x)^i`; with `a_1 <= .. <= a_n` the
//! real parts of its roots, the conjectured bracket is `0 < a_1 <= r <= R <= a_n`
//! for inradius `r` and circumradius `R`.

use serde::Serialize;

use crate::bm::omega;
use crate::error::Result;
use crate::exact::{intrinsic_volumes_all, Method};
use crate::orthoscheme::Orthoscheme;
use crate::poly::{poly_roots, relative_residual};

pub const DEFAULT_IMAG_THRESHOLD: f64 = 1e-8;
pub const DEFAULT_SLACK: f64 = 1e-9;

/// Coefficients of `f` in ascending powers of `x`.
pub fn sy_polynomial(n: usize) -> Result<Vec<f64>> {
    let volumes = intrinsic_volumes_all(n, Method::Dp)?.values;
    Ok((0..=n)
        .map(|i| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            sign * omega(i) * volumes[n - i]
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Root {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SYReport {
    pub n: usize,
    pub coefficients: Vec<f64>,
    /// Sorted by real part.
    pub roots: Vec<Root>,
    /// `max |Im| / max(1, max |Re|)`.
    pub max_imag_rel: f64,
    /// Largest `|f(z)| / sum |c_i| |z|^i` over the roots.
    pub max_residual: f64,
    pub r: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub imag_threshold: f64,
    pub slack: f64,
    pub pass_bracket: bool,
    pub pass_real: bool,
}

impl SYReport {
    pub fn passed(&self) -> bool {
        self.pass_bracket && self.pass_real
    }

    pub fn smallest_real_part(&self) -> f64 {
        self.roots[0].re
    }

    pub fn largest_real_part(&self) -> f64 {
        self.roots[self.roots.len() - 1].re
    }
}

pub fn sy_check(n: usize, imag_threshold: f64, slack: f64) -> Result<SYReport> {
    let body = Orthoscheme::new(n)?;
    let coefficients = sy_polynomial(n)?;
    let roots = poly_roots(&coefficients)?;
    let r = body.inradius()?;
    let big_r = body.circumradius()?;

    let max_re = roots.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
    let max_im = roots.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let max_imag_rel = max_im / max_re.max(1.0);
    let max_residual = roots
        .iter()
        .map(|&z| relative_residual(&coefficients, z))
        .fold(0.0, f64::max);

    let a_first = roots[0].re;
    let a_last = roots[roots.len() - 1].re;
    let pass_bracket = a_first > -slack && a_first <= r + slack && big_r <= a_last + slack;
    let pass_real = max_imag_rel <= imag_threshold;

    Ok(SYReport {
        n,
        coefficients,
        roots: roots.iter().map(|z| Root { re: z.re, im: z.im }).collect(),
        max_imag_rel,
        max_residual,
        r,
        big_r,
        imag_threshold,
        slack,
        pass_bracket,
        pass_real,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn polynomials() {
        assert_eq!(sy_polynomial(1).unwrap(), vec![1.0, -2.0]);
        let c = sy_polynomial(2).unwrap();
        assert_relative_eq!(c[0], 0.5);
        assert_relative_eq!(c[1], -2.0 * (1.0 + FRAC_1_SQRT_2), max_relative = 1e-15);
        assert_relative_eq!(c[2], PI);
        let c3 = sy_polynomial(3).unwrap();
        assert_relative_eq!(c3[0], 1.0 / 6.0, max_relative = 1e-15);
        for n in 1..=21 {
            let c = sy_polynomial(n).unwrap();
            assert_eq!(c.len(), n + 1);
            assert_relative_eq!(c[n].abs(), omega(n), max_relative = 1e-15);
            // alternating signs: all roots of f(-x) are negative reals
            assert!(c.iter().enumerate().all(|(i, x)| (i % 2 == 0) == (*x > 0.0)));
        }
        assert!(sy_polynomial(0).is_err());
    }

    #[test]
    fn segment() {
        let rep = sy_check(1, DEFAULT_IMAG_THRESHOLD, DEFAULT_SLACK).unwrap();
        assert_relative_eq!(rep.roots[0].re, 0.5, epsilon = 1e-15);
        assert_relative_eq!(rep.r, 0.5, epsilon = 1e-12);
        assert_relative_eq!(rep.big_r, 0.5, epsilon = 1e-15);
        assert!(rep.pass_bracket && rep.pass_real);
    }

    #[test]
    fn triangle() {
        let rep = sy_check(2, DEFAULT_IMAG_THRESHOLD, DEFAULT_SLACK).unwrap();
        assert_relative_eq!(rep.smallest_real_part(), 0.174_449_099_616, epsilon = 1e-11);
        assert_relative_eq!(rep.r, 0.292_893_218_813_452_5, epsilon = 1e-12);
        assert_relative_eq!(rep.big_r, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_relative_eq!(rep.largest_real_part(), 0.912_328_830_83, epsilon = 1e-11);
        assert!(rep.passed());
    }

    #[test]
    fn all_dimensions_through_21() {
        for n in 1..=21 {
            let rep = sy_check(n, DEFAULT_IMAG_THRESHOLD, DEFAULT_SLACK).unwrap();
            assert_eq!(rep.roots.len(), n);
            assert!(rep.passed(), "n = {n}: {rep:?}");
            assert!(rep.max_residual <= crate::poly::RESIDUAL_BOUND);
            let sum: f64 = rep.roots.iter().map(|z| z.re).sum();
            let vieta = -rep.coefficients[n - 1] / rep.coefficients[n];
            assert!(((sum - vieta) / vieta).abs() <= 1e-8, "n = {n}");
        }
    }

    #[test]
    fn n21_roots_against_high_precision_reference() {
        // smallest and largest roots from a 60-digit evaluation
        let rep = sy_check(21, DEFAULT_IMAG_THRESHOLD, DEFAULT_SLACK).unwrap();
        assert_relative_eq!(rep.smallest_real_part(), 0.003_249_973_981, max_relative = 1e-8);
        assert_relative_eq!(rep.largest_real_part(), 7.605_461_908, max_relative = 1e-9);
    }
}
