//! The order simplex `K = {x : 1 >= x_1 >= ... >= x_n >= 0}`.
//!
//! Its vertices are the prefix indicators `P_i = (1, .., 1, 0, .., 0)` with `i`
//! leading ones, so `<v, P_i>` is the `i`-th prefix sum of `v`. A face is named
//! by the strictly increasing set of vertex indices it contains.

use std::fmt;
use std::str::FromStr;

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::sum::compensated_sum;

/// Index set `J = {i_0 < i_1 < ... < i_k}` naming the `k`-face spanned by the
/// vertices `P_{i_j}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceIndex {
    indices: Vec<usize>,
}

impl FaceIndex {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidFace("empty index set".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidFace(format!(
                "indices must be strictly increasing, got {indices:?}"
            )));
        }
        Ok(Self { indices })
    }

    /// Builds the face and checks that it belongs to the `n`-dimensional simplex.
    pub fn for_dimension(n: usize, indices: Vec<usize>) -> Result<Self> {
        let face = Self::new(indices)?;
        face.check_dimension(n)?;
        Ok(face)
    }

    pub fn check_dimension(&self, n: usize) -> Result<()> {
        match self.indices.last() {
            Some(&last) if last <= n => Ok(()),
            _ => Err(Error::InvalidFace(format!(
                "{self} is not a face of the {n}-dimensional orthoscheme"
            ))),
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Face dimension `k`.
    pub fn dim(&self) -> usize {
        self.indices.len() - 1
    }

    pub fn first(&self) -> usize {
        self.indices[0]
    }

    pub fn last(&self) -> usize {
        self.indices[self.indices.len() - 1]
    }

    /// `i_k - i_0`, the sum of the gaps.
    pub fn extent(&self) -> usize {
        self.last() - self.first()
    }

    /// Gap composition `(i_1 - i_0, ..., i_k - i_{k-1})`.
    pub fn gaps(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.windows(2).map(|w| w[1] - w[0])
    }

    pub fn gap_product(&self) -> f64 {
        self.gaps().map(|g| g as f64).product()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// Bit mask with bit `i` set for each vertex index; requires `i_k < 64`.
    pub fn mask(&self) -> u64 {
        self.indices.iter().fold(0u64, |m, &i| m | (1u64 << i))
    }
}

impl fmt::Display for FaceIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (pos, i) in self.indices.iter().enumerate() {
            if pos > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl FromStr for FaceIndex {
    type Err = Error;

    /// Parses the comma-joined form, e.g. `"0,2,4"`.
    fn from_str(s: &str) -> Result<Self> {
        let indices = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::InvalidFace(format!("{t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(indices)
    }
}

impl Serialize for FaceIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FaceIndex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `{x : <normal, x> <= offset}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Halfspace {
    /// `offset - <normal, x>`; nonnegative iff `x` lies in the halfspace.
    pub fn slack(&self, x: &[f64]) -> f64 {
        self.offset - dot(&self.normal, x)
    }
}

/// Lexicographic iterator over the `(k+1)`-subsets of `{0, .., n}`.
#[derive(Debug, Clone)]
pub struct Faces {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for Faces {
    type Item = FaceIndex;

    fn next(&mut self) -> Option<FaceIndex> {
        let current = self.current.as_mut()?;
        let out = FaceIndex {
            indices: current.clone(),
        };
        let len = current.len();
        // rightmost position that can still move up
        let pos = (0..len).rev().find(|&p| current[p] < self.n + 1 - (len - p));
        match pos {
            Some(p) => {
                current[p] += 1;
                for q in p + 1..len {
                    current[q] = current[q - 1] + 1;
                }
            }
            None => self.current = None,
        }
        Some(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Orthoscheme {
    n: usize,
}

impl Orthoscheme {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension("n must be at least 1".into()));
        }
        Ok(Self { n })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `P_i`: first `i` coordinates equal to one.
    pub fn vertex(&self, i: usize) -> Vec<f64> {
        assert!(i <= self.n, "vertex index {i} out of range for n = {}", self.n);
        (0..self.n).map(|c| if c < i { 1.0 } else { 0.0 }).collect()
    }

    pub fn vertices(&self) -> Vec<Vec<f64>> {
        (0..=self.n).map(|i| self.vertex(i)).collect()
    }

    /// `k`-volume of the face: `sqrt(prod gaps) / k!`, and 1 for a vertex.
    pub fn face_volume(&self, face: &FaceIndex) -> Result<f64> {
        face.check_dimension(self.n)?;
        let k = face.dim();
        let factorial: f64 = (1..=k).map(|j| j as f64).product();
        Ok(face.gap_product().sqrt() / factorial)
    }

    /// All `k`-faces in lexicographic order of their index sets.
    pub fn faces(&self, k: usize) -> Result<Faces> {
        if k > self.n {
            return Err(Error::OutOfRange(format!(
                "face dimension {k} exceeds n = {}",
                self.n
            )));
        }
        Ok(Faces {
            n: self.n,
            current: Some((0..=k).collect()),
        })
    }

    /// H-description: `x_1 <= 1`, `x_{i+1} - x_i <= 0`, `-x_n <= 0`.
    ///
    /// Facet `j` (0-based) is the one opposite vertex `P_j`.
    pub fn facet_halfspaces(&self) -> Vec<Halfspace> {
        let n = self.n;
        let mut out = Vec::with_capacity(n + 1);
        let mut first = vec![0.0; n];
        first[0] = 1.0;
        out.push(Halfspace {
            normal: first,
            offset: 1.0,
        });
        for i in 0..n - 1 {
            let mut normal = vec![0.0; n];
            normal[i] = -1.0;
            normal[i + 1] = 1.0;
            out.push(Halfspace {
                normal,
                offset: 0.0,
            });
        }
        let mut last = vec![0.0; n];
        last[n - 1] = -1.0;
        out.push(Halfspace {
            normal: last,
            offset: 0.0,
        });
        out
    }

    /// Radius of the ball through all vertices, from the equidistance system
    /// `<c, P_i> = |P_i|^2 / 2`, `i = 1..n`.
    pub fn circumradius(&self) -> Result<f64> {
        let n = self.n;
        let a = DMatrix::from_fn(n, n, |i, c| if c <= i { 1.0 } else { 0.0 });
        let b = DVector::from_fn(n, |i, _| (i + 1) as f64 / 2.0);
        let center = a
            .lu()
            .solve(&b)
            .ok_or_else(|| Error::Internal("singular circumcenter system".into()))?;
        Ok(center.norm())
    }

    /// Chebyshev radius: `max rho` subject to `<a_j, x> + rho |a_j| <= b_j`.
    pub fn inradius(&self) -> Result<f64> {
        let mut lp = Problem::new(OptimizationDirection::Maximize);
        let xs: Vec<_> = (0..self.n)
            .map(|_| lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY)))
            .collect();
        let rho = lp.add_var(1.0, (0.0, f64::INFINITY));
        for h in self.facet_halfspaces() {
            let norm = dot(&h.normal, &h.normal).sqrt();
            let mut terms: Vec<_> = xs
                .iter()
                .zip(&h.normal)
                .filter(|(_, &a)| a != 0.0)
                .map(|(&v, &a)| (v, a))
                .collect();
            terms.push((rho, norm));
            lp.add_constraint(terms, ComparisonOp::Le, h.offset);
        }
        let solution = lp
            .solve()
            .map_err(|e| Error::Internal(format!("inradius LP failed: {e}")))?;
        Ok(solution.objective())
    }

    /// Inradius from the simplex identity `r = n Vol_n / (sum of facet volumes)`.
    pub fn inradius_from_volumes(&self) -> Result<f64> {
        let n = self.n;
        let full = FaceIndex {
            indices: (0..=n).collect(),
        };
        let volume = self.face_volume(&full)?;
        let facets = self
            .faces(n - 1)?
            .map(|f| self.face_volume(&f))
            .collect::<Result<Vec<_>>>()?;
        Ok(n as f64 * volume / compensated_sum(facets))
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
