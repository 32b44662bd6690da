//! Normal cones of the orthoscheme and their Gaussian measures.
//!
//! The normal cone of the face `F_J` is spanned by the outward facet normals
//! `u_i`, `i` not in `J`:
//!
//! * `u_0 = e_1`,
//! * `u_i = (e_{i+1} - e_i) / sqrt(2)` for `1 <= i <= n - 1`,
//! * `u_n = -e_n`.
//!
//! Gaussian measures are always taken inside the linear span of the cone, so a
//! `k`-face has a nonzero measure even though its normal cone is a null set of
//! `R^n` once `k >= 1`.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::orthoscheme::{dot, FaceIndex, Orthoscheme};
use crate::rng::{map_chunks, CHUNK_SAMPLES};
use crate::sum::{compensated_sum, NeumaierSum};

/// Coordinate tolerance for membership in a simplicial cone.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// Largest dimension [`mc_gauss_measures`] accepts; it tracks all `2^{n+1} - 1` faces.
pub const MAX_MC_DIM: usize = 16;

const RANK_TOL: f64 = 1e-10;

/// Finitely generated cone; rays are stored with unit length.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeSpec {
    rays: Vec<Vec<f64>>,
    ambient_dim: usize,
    span_dim: usize,
    label: String,
}

impl ConeSpec {
    pub fn new(ambient_dim: usize, rays: Vec<Vec<f64>>, label: impl Into<String>) -> Result<Self> {
        let mut unit = Vec::with_capacity(rays.len());
        for (i, ray) in rays.into_iter().enumerate() {
            if ray.len() != ambient_dim {
                return Err(Error::DegenerateCone(format!(
                    "ray {i} has length {}, expected {ambient_dim}",
                    ray.len()
                )));
            }
            let norm = dot(&ray, &ray).sqrt();
            if !norm.is_finite() || norm == 0.0 {
                return Err(Error::DegenerateCone(format!("ray {i} is zero or non-finite")));
            }
            unit.push(ray.into_iter().map(|x| x / norm).collect::<Vec<_>>());
        }
        let span_dim = if unit.is_empty() {
            0
        } else {
            let m = ray_matrix(ambient_dim, &unit);
            m.svd(false, false)
                .singular_values
                .iter()
                .filter(|&&s| s > RANK_TOL)
                .count()
        };
        Ok(Self {
            rays: unit,
            ambient_dim,
            span_dim,
            label: label.into(),
        })
    }

    pub fn rays(&self) -> &[Vec<f64>] {
        &self.rays
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Rank of the ray set.
    pub fn span_dim(&self) -> usize {
        self.span_dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_simplicial(&self) -> bool {
        self.span_dim == self.rays.len()
    }
}

fn ray_matrix(ambient_dim: usize, rays: &[Vec<f64>]) -> DMatrix<f64> {
    DMatrix::from_fn(ambient_dim, rays.len(), |r, c| rays[c][r])
}

/// Outward facet normal `u_i` of the `n`-dimensional orthoscheme.
pub fn facet_normal(n: usize, i: usize) -> Vec<f64> {
    assert!(i <= n, "normal index {i} out of range for n = {n}");
    let mut u = vec![0.0; n];
    if i == 0 {
        u[0] = 1.0;
    } else if i == n {
        u[n - 1] = -1.0;
    } else {
        u[i - 1] = -FRAC_1_SQRT_2;
        u[i] = FRAC_1_SQRT_2;
    }
    u
}

/// Rays `{u_i : i not in J}` of the normal cone `N(F_J, K)`.
pub fn normal_cone_rays(n: usize, face: &FaceIndex) -> Result<ConeSpec> {
    Orthoscheme::new(n)?;
    face.check_dimension(n)?;
    let rays = (0..=n)
        .filter(|&i| !face.contains(i))
        .map(|i| facet_normal(n, i))
        .collect();
    ConeSpec::new(n, rays, format!("N(F_{{{face}}}) n={n}"))
}

/// Indices `i` whose prefix sum `s_i = v_1 + .. + v_i` is within `tie_eps` of
/// the maximum (`s_0 = 0`). These name the face on which `<v, .>` is maximal.
pub fn argmax_face_of(v: &[f64], tie_eps: f64) -> FaceIndex {
    let mut prefix = Vec::with_capacity(v.len() + 1);
    prefix.push(0.0);
    let mut s = 0.0;
    for &x in v {
        s += x;
        prefix.push(s);
    }
    let max = prefix.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let indices = (0..prefix.len())
        .filter(|&i| prefix[i] >= max - tie_eps)
        .collect();
    FaceIndex::new(indices).expect("prefix indices are increasing and nonempty")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaEstimate {
    pub face: FaceIndex,
    pub gamma_hat: f64,
    pub stderr: f64,
    pub count: u64,
    pub samples: u64,
    pub seed: u64,
}

/// `V_k` assembled from Monte Carlo normal-cone measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AssembledVolume {
    pub k: usize,
    pub value: f64,
    /// Standard error of the per-sample contribution `sum_J A_J 1[g in N_J]`.
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussMeasures {
    pub n: usize,
    pub samples: u64,
    pub seed: u64,
    pub chunk_samples: u64,
    /// Ordered by face dimension, then lexicographically.
    pub estimates: Vec<GammaEstimate>,
    /// One entry per `k = 0..=n`.
    pub assembled: Vec<AssembledVolume>,
}

impl GaussMeasures {
    pub fn get(&self, face: &FaceIndex) -> Option<&GammaEstimate> {
        self.estimates.iter().find(|e| &e.face == face)
    }

    pub fn gamma_map(&self) -> BTreeMap<FaceIndex, f64> {
        self.estimates
            .iter()
            .map(|e| (e.face.clone(), e.gamma_hat))
            .collect()
    }

    pub fn faces_of_dim(&self, k: usize) -> impl Iterator<Item = &GammaEstimate> {
        self.estimates.iter().filter(move |e| e.face.dim() == k)
    }
}

struct FaceTest {
    first: usize,
    last: usize,
    k: usize,
    volume: f64,
    /// Offsets into the block table for gaps of length >= 2.
    blocks: Vec<usize>,
}

struct ChunkTally {
    counts: Vec<u64>,
    sum_sq: Vec<f64>,
}

/// Estimates the Gaussian measure of the normal cone of every face.
///
/// A standard Gaussian `g` in `R^n` is projected onto the orthogonal complement
/// of the face direction `span{P_j - P_{i_0}}`; the projection is a standard
/// Gaussian in the span of `N(F_J, K)`. It lies in the relative interior of the
/// normal cone iff, with `P` the prefix sums of `g`,
///
/// * `P_i < P_{i_0}` for `i < i_0`,
/// * `P_i < P_{i_k}` for `i > i_k`,
/// * inside every gap `(a, b)` of `J`, `P` stays strictly below its chord.
///
/// All faces are scored against the same draws. Vertex events partition the
/// sample space, so the vertex counts add up to `samples`; the full face is
/// hit by every draw.
pub fn mc_gauss_measures(n: usize, samples: u64, seed: u64) -> Result<GaussMeasures> {
    let body = Orthoscheme::new(n)?;
    if n > MAX_MC_DIM {
        return Err(Error::InvalidDimension(format!(
            "face-measure sampling supports n <= {MAX_MC_DIM}, got {n}"
        )));
    }
    if samples == 0 {
        return Err(Error::OutOfRange("samples must be positive".into()));
    }

    let stride = n + 1;
    let mut faces = Vec::new();
    let mut tests = Vec::new();
    for dim in 0..=n {
        for face in body.faces(dim)? {
            let blocks = face
                .indices()
                .windows(2)
                .filter(|w| w[1] - w[0] >= 2)
                .map(|w| w[0] * stride + w[1])
                .collect();
            tests.push(FaceTest {
                first: face.first(),
                last: face.last(),
                k: dim,
                volume: body.face_volume(&face)?,
                blocks,
            });
            faces.push(face);
        }
    }

    let tallies = map_chunks(samples, seed, |rng, count| {
        let mut tally = ChunkTally {
            counts: vec![0; tests.len()],
            sum_sq: vec![0.0; n + 1],
        };
        let mut prefix = vec![0.0; stride];
        let mut left_ok = vec![false; stride];
        let mut right_ok = vec![false; stride];
        let mut block_ok = vec![true; stride * stride];
        let mut per_dim = vec![0.0; n + 1];
        for _ in 0..count {
            for i in 1..stride {
                let g: f64 = rng.sample(StandardNormal);
                prefix[i] = prefix[i - 1] + g;
            }
            let mut running = f64::NEG_INFINITY;
            for i in 0..stride {
                left_ok[i] = prefix[i] > running;
                running = running.max(prefix[i]);
            }
            running = f64::NEG_INFINITY;
            for i in (0..stride).rev() {
                right_ok[i] = prefix[i] > running;
                running = running.max(prefix[i]);
            }
            for a in 0..stride {
                for b in a + 2..stride {
                    let rise = prefix[b] - prefix[a];
                    let len = (b - a) as f64;
                    block_ok[a * stride + b] = (a + 1..b)
                        .all(|t| (prefix[t] - prefix[a]) * len < (t - a) as f64 * rise);
                }
            }

            per_dim.iter_mut().for_each(|x| *x = 0.0);
            for (slot, t) in tests.iter().enumerate() {
                if left_ok[t.first] && right_ok[t.last] && t.blocks.iter().all(|&b| block_ok[b]) {
                    tally.counts[slot] += 1;
                    per_dim[t.k] += t.volume;
                }
            }
            for d in 0..=n {
                tally.sum_sq[d] += per_dim[d] * per_dim[d];
            }
        }
        tally
    });

    let mut counts = vec![0u64; tests.len()];
    let mut sum_sq = vec![NeumaierSum::new(); n + 1];
    for tally in &tallies {
        for (c, t) in counts.iter_mut().zip(&tally.counts) {
            *c += t;
        }
        for d in 0..=n {
            sum_sq[d].add(tally.sum_sq[d]);
        }
    }

    let total = samples as f64;
    let estimates: Vec<GammaEstimate> = faces
        .into_iter()
        .zip(&counts)
        .map(|(face, &count)| {
            let p = count as f64 / total;
            GammaEstimate {
                face,
                gamma_hat: p,
                stderr: (p * (1.0 - p) / total).sqrt(),
                count,
                samples,
                seed,
            }
        })
        .collect();

    let assembled = (0..=n)
        .map(|d| {
            let value = compensated_sum(
                estimates
                    .iter()
                    .zip(&tests)
                    .filter(|(_, t)| t.k == d)
                    .map(|(e, t)| t.volume * e.gamma_hat),
            );
            let second = sum_sq[d].value() / total;
            let var = (second - value * value).max(0.0);
            AssembledVolume {
                k: d,
                value,
                stderr: (var / total).sqrt(),
            }
        })
        .collect();

    Ok(GaussMeasures {
        n,
        samples,
        seed,
        chunk_samples: CHUNK_SAMPLES,
        estimates,
        assembled,
    })
}

/// Monte Carlo estimate of a cone's Gaussian measure within its own span.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeMeasure {
    pub gamma_hat: f64,
    pub stderr: f64,
    pub count: u64,
    pub samples: u64,
}

/// Gaussian measure of a simplicial cone, measured inside its linear span.
///
/// With the ray matrix factored as `A = Q R`, a standard Gaussian of the span
/// is `Q z`, `z ~ N(0, I_m)`, and its ray coordinates are `R^{-1} z`. The
/// cone `{0}` has measure 1 in `R^0` and 0 in `R^p`, `p > 0`.
pub fn cone_gauss_mc(cone: &ConeSpec, samples: u64, seed: u64) -> Result<ConeMeasure> {
    if samples == 0 {
        return Err(Error::OutOfRange("samples must be positive".into()));
    }
    let m = cone.rays.len();
    if m == 0 {
        let gamma_hat = if cone.ambient_dim == 0 { 1.0 } else { 0.0 };
        return Ok(ConeMeasure {
            gamma_hat,
            stderr: 0.0,
            count: if gamma_hat == 1.0 { samples } else { 0 },
            samples,
        });
    }
    if !cone.is_simplicial() {
        return Err(Error::NotSimplicial {
            rank: cone.span_dim,
            rays: m,
        });
    }
    let r = ray_matrix(cone.ambient_dim, &cone.rays).qr().r();
    let coords = r
        .try_inverse()
        .ok_or_else(|| Error::Internal("triangular factor is singular".into()))?;

    let counts = map_chunks(samples, seed, |rng, count| {
        let mut z = vec![0.0; m];
        let mut hits = 0u64;
        for _ in 0..count {
            z.iter_mut().for_each(|x| *x = rng.sample(StandardNormal));
            let inside = (0..m).all(|row| {
                let c: f64 = (row..m).map(|col| coords[(row, col)] * z[col]).sum();
                c >= -MEMBERSHIP_TOL
            });
            hits += inside as u64;
        }
        hits
    });
    let count: u64 = counts.iter().sum();
    let p = count as f64 / samples as f64;
    Ok(ConeMeasure {
        gamma_hat: p,
        stderr: (p * (1.0 - p) / samples as f64).sqrt(),
        count,
        samples,
    })
}

/// `sum_J A_J gamma_J` over the `k`-faces.
pub fn mcmullen_assemble(n: usize, k: usize, gammas: &BTreeMap<FaceIndex, f64>) -> Result<f64> {
    let body = Orthoscheme::new(n)?;
    let mut acc = NeumaierSum::new();
    for face in body.faces(k)? {
        let gamma = gammas
            .get(&face)
            .ok_or_else(|| Error::MissingFace(face.to_string()))?;
        acc.add(body.face_volume(&face)? * gamma);
    }
    Ok(acc.value())
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn unit3(v: [f64; 3], name: &str) -> Result<[f64; 3]> {
    let norm = dot(&v, &v).sqrt();
    if !norm.is_finite() || norm == 0.0 {
        return Err(Error::DegenerateCone(format!("ray {name} is zero or non-finite")));
    }
    Ok(v.map(|x| x / norm))
}

/// Solid angle `Gamma` of the cone spanned by three rays in `R^3`:
/// `tan(Gamma / 2) = |a . (b x c)| / (1 + b.c + c.a + a.b)`.
///
/// Rays are normalized first. `atan2` keeps the reflex case (denominator
/// `<= 0`, `Gamma >= pi`) on the right branch. `Gamma / (4 pi)` is the
/// Gaussian measure.
pub fn euler_solid_angle(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> Result<f64> {
    let (a, b, c) = (unit3(a, "a")?, unit3(b, "b")?, unit3(c, "c")?);
    let numer = dot(&a, &cross(b, c)).abs();
    let denom = 1.0 + dot(&b, &c) + dot(&c, &a) + dot(&a, &b);
    if numer < 1e-14 && denom.abs() < 1e-14 {
        return Err(Error::DegenerateCone(
            "solid angle undefined: triple product and denominator both vanish".into(),
        ));
    }
    Ok(2.0 * numer.atan2(denom))
}

/// Cone `E` left after deleting the middle blocks of a face's ray matrix.
///
/// Keeps `u_i` for `i < i0` and `i > i0 + d`, restricted to the live
/// coordinates `{1..i0} ∪ {i0+d+1..n}`: a full-dimensional simplicial cone in
/// `R^{n-d}`. For fixed `d` the cones `i0 = 0..=n-d` tile `R^{n-d}`, and a face
/// `J` with `i_0 = i0`, `i_k - i_0 = d` has `gamma_J = Gauss(E) / prod gaps`.
pub fn e_cone_rays(n: usize, d: usize, i0: usize) -> Result<ConeSpec> {
    Orthoscheme::new(n)?;
    if d == 0 || d > n {
        return Err(Error::OutOfRange(format!("need 1 <= d <= n, got d = {d}, n = {n}")));
    }
    if i0 > n - d {
        return Err(Error::OutOfRange(format!("need i0 <= n - d = {}, got {i0}", n - d)));
    }
    // 0-based coordinates i0..i0+d are dropped
    let live: Vec<usize> = (0..i0).chain(i0 + d..n).collect();
    let rays = (0..i0)
        .chain(i0 + d + 1..=n)
        .map(|i| {
            let u = facet_normal(n, i);
            live.iter().map(|&c| u[c]).collect()
        })
        .collect();
    ConeSpec::new(n - d, rays, format!("E n={n} d={d} i0={i0}"))
}

/// Rotated block cone `B^l` in `R^d`.
///
/// With `v_i = (e_{i+1} - e_i) / sqrt(2)` for `i < d` and
/// `v_d = (e_1 - e_d) / sqrt(2)`, `B^0 = {v_1, .., v_{d-1}}` and for `l >= 1`
/// `B^l = {v_{l+1}, .., v_d, v_1, .., v_{l-1}}`. All lie in the hyperplane
/// `sum x_i = 0`; the `d` cones are coordinate permutations of each other and
/// tile that hyperplane.
pub fn block_cone_rays(d: usize, l: usize) -> Result<ConeSpec> {
    if d < 2 {
        return Err(Error::OutOfRange(format!("block size must be at least 2, got {d}")));
    }
    if l >= d {
        return Err(Error::OutOfRange(format!("need 0 <= l <= d - 1 = {}, got {l}", d - 1)));
    }
    let v = |i: usize| {
        let mut r = vec![0.0; d];
        if i < d {
            r[i - 1] = -FRAC_1_SQRT_2;
            r[i] = FRAC_1_SQRT_2;
        } else {
            r[0] = FRAC_1_SQRT_2;
            r[d - 1] = -FRAC_1_SQRT_2;
        }
        r
    };
    let order: Vec<usize> = if l == 0 {
        (1..d).collect()
    } else {
        (l + 1..=d).chain(1..l).collect()
    };
    ConeSpec::new(d, order.into_iter().map(v).collect(), format!("B d={d} l={l}"))
}
