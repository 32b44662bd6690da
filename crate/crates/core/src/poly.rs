//! All complex roots of a real polynomial.
//!
//! Coefficients are in ascending order: `c[0] + c[1] x + ... + c[d] x^d`.
//! The polynomial is rescaled so that its roots have unit geometric mean,
//! solved by Aberth-Ehrlich iteration started on the Newton-polygon circles,
//! then polished by Newton steps on the original coefficients. Roots that still
//! miss the residual bound are polished again with double-double evaluation.

use nalgebra::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Required `|f(z)| / sum |c_i| |z|^i` for every returned root.
pub const RESIDUAL_BOUND: f64 = 1e-10;

const MAX_ITERATIONS: usize = 1000;

fn horner(coeffs: &[f64], z: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// `sum |c_i| |z|^i`, the scale against which residuals are judged.
fn magnitude(coeffs: &[f64], z: C64) -> f64 {
    let r = z.norm();
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.abs())
}

#[derive(Clone, Copy, Debug)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn add(self, other: Dd) -> Dd {
        let s = self.hi + other.hi;
        let bb = s - self.hi;
        let err = (self.hi - (s - bb)) + (other.hi - bb);
        quick_two_sum(s, err + self.lo + other.lo)
    }

    fn mul_f64(self, b: f64) -> Dd {
        let p = self.hi * b;
        let err = self.hi.mul_add(b, -p);
        quick_two_sum(p, err + self.lo * b)
    }

    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

/// `f(z)` with a double-double accumulator.
fn horner_dd(coeffs: &[f64], z: C64) -> C64 {
    let (mut re, mut im) = (Dd::from(0.0), Dd::from(0.0));
    for &c in coeffs.iter().rev() {
        let new_re = re.mul_f64(z.re).add(im.mul_f64(z.im).neg()).add(Dd::from(c));
        let new_im = re.mul_f64(z.im).add(im.mul_f64(z.re));
        re = new_re;
        im = new_im;
    }
    C64::new(re.value(), im.value())
}

/// `|f(z)| / sum |c_i| |z|^i`, evaluated in double-double.
pub fn relative_residual(coeffs: &[f64], z: C64) -> f64 {
    let scale = magnitude(coeffs, z);
    if scale == 0.0 {
        return 0.0;
    }
    horner_dd(coeffs, z).norm() / scale
}

/// Starting radii from the upper convex hull of `(i, ln |c_i|)`.
fn newton_polygon_radii(coeffs: &[f64]) -> Vec<f64> {
    let pts: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(i, c)| (i, c.abs().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut radii = Vec::new();
    for w in hull.windows(2) {
        let (i, j) = (w[0].0, w[1].0);
        let r = ((w[0].1 - w[1].1) / (j - i) as f64).exp();
        radii.extend(std::iter::repeat_n(r, j - i));
    }
    radii
}

fn aberth(coeffs: &[f64]) -> Vec<C64> {
    let d = coeffs.len() - 1;
    let mut radii = newton_polygon_radii(coeffs);
    // coefficients lost to underflow leave the hull short
    if radii.len() != d || radii.iter().any(|r| !r.is_normal()) {
        radii = vec![1.0; d];
    }
    let mut z: Vec<C64> = radii
        .iter()
        .enumerate()
        .map(|(j, &r)| C64::from_polar(r, 2.0 * std::f64::consts::PI * j as f64 / d as f64 + 0.4))
        .collect();
    let mut done = vec![false; d];
    for _ in 0..MAX_ITERATIONS {
        for j in 0..d {
            if done[j] {
                continue;
            }
            let (p, dp) = horner(coeffs, z[j]);
            if p.norm() <= f64::EPSILON * magnitude(coeffs, z[j]) {
                done[j] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: C64 = (0..d)
                .filter(|&k| k != j)
                .map(|k| C64::new(1.0, 0.0) / (z[j] - z[k]))
                .sum();
            let step = ratio / (C64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                done[j] = true;
                continue;
            }
            z[j] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[j].norm() {
                done[j] = true;
            }
        }
        if done.iter().all(|&x| x) {
            break;
        }
    }
    z
}

/// Newton steps that are kept only while they shrink `|f|`.
fn polish(coeffs: &[f64], mut z: C64, extended: bool) -> C64 {
    let eval = |z: C64| if extended { horner_dd(coeffs, z) } else { horner(coeffs, z).0 };
    let mut fz = eval(z).norm();
    for _ in 0..8 {
        let (_, dp) = horner(coeffs, z);
        let candidate = z - eval(z) / dp;
        if !(candidate.re.is_finite() && candidate.im.is_finite()) {
            break;
        }
        let fc = eval(candidate).norm();
        if fc < fz {
            z = candidate;
            fz = fc;
        } else {
            break;
        }
    }
    z
}

/// All complex roots (with multiplicity), sorted by real part then imaginary part.
pub fn poly_roots(coeffs: &[f64]) -> Result<Vec<C64>> {
    if coeffs.len() < 2 {
        return Err(Error::InvalidPolynomial("degree must be at least 1".into()));
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidPolynomial("non-finite coefficient".into()));
    }
    if coeffs.iter().all(|&c| c == 0.0) {
        return Err(Error::InvalidPolynomial("zero polynomial".into()));
    }
    if coeffs[coeffs.len() - 1] == 0.0 {
        return Err(Error::InvalidPolynomial("leading coefficient is zero".into()));
    }

    let zeros = coeffs.iter().take_while(|&&c| c == 0.0).count();
    let reduced = &coeffs[zeros..];
    let mut roots = vec![C64::new(0.0, 0.0); zeros];
    let d = reduced.len() - 1;
    if d > 0 {
        let sigma = (reduced[0] / reduced[d]).abs().powf(1.0 / d as f64);
        let mut scaled: Vec<f64> = reduced
            .iter()
            .enumerate()
            .map(|(i, &c)| c * sigma.powi(i as i32))
            .collect();
        let big = scaled.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        scaled.iter_mut().for_each(|c| *c /= big);

        for (index, y) in aberth(&scaled).into_iter().enumerate() {
            let mut z = polish(reduced, y * sigma, false);
            if relative_residual(reduced, z) > RESIDUAL_BOUND {
                z = polish(reduced, z, true);
            }
            let residual = relative_residual(reduced, z);
            if residual > RESIDUAL_BOUND || !residual.is_finite() {
                return Err(Error::RootPrecision { index, residual });
            }
            roots.push(z);
        }
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}
