//! One report type per subcommand, each with a JSON shape (see `schemas/`) and
//! a fixed CSV header.

use serde::Serialize;

use orthoscheme::bm::{mk_sequence, omega, BMVolumeRow, MK_SCALED_LIMIT};
use orthoscheme::cones::{euler_solid_angle, mc_gauss_measures};
use orthoscheme::exact::{intrinsic_volume, intrinsic_volumes_all, limit_row};
use orthoscheme::sy::{sy_check, SYReport};
use orthoscheme::{FaceIndex, IntrinsicVolumes, Method, Provenance, Result};

use crate::format::{to_csv, to_json, Cell, Format};

pub trait Report {
    fn json(&self) -> Vec<u8>;
    fn csv(&self) -> Vec<u8>;

    /// False when the report records a failed check.
    fn passed(&self) -> bool {
        true
    }

    fn render(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Json => self.json(),
            Format::Csv => self.csv(),
        }
    }
}

pub const IV_HEADER: &[&str] = &["n", "k", "method", "value"];

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum IvReport {
    All(IntrinsicVolumes),
    Single {
        n: usize,
        k: usize,
        method: Provenance,
        value: f64,
    },
}

fn provenance_label(p: Provenance) -> &'static str {
    match p {
        Provenance::ExactEnum => "exact-enum",
        Provenance::ExactDp => "exact-dp",
        Provenance::McEstimate => "mc-estimate",
    }
}

pub fn iv(n: usize, k: Option<usize>, method: Method) -> Result<IvReport> {
    let provenance = match method {
        Method::Enumerate => Provenance::ExactEnum,
        _ => Provenance::ExactDp,
    };
    match k {
        None => intrinsic_volumes_all(n, method).map(IvReport::All),
        Some(k) => Ok(IvReport::Single {
            n,
            k,
            method: provenance,
            value: intrinsic_volume(n, k, method)?,
        }),
    }
}

impl Report for IvReport {
    fn json(&self) -> Vec<u8> {
        to_json(self)
    }

    fn csv(&self) -> Vec<u8> {
        let rows: Vec<Vec<Cell>> = match self {
            IvReport::All(iv) => iv
                .values
                .iter()
                .enumerate()
                .map(|(k, &v)| {
                    vec![iv.n.into(), k.into(), provenance_label(iv.method).into(), v.into()]
                })
                .collect(),
            IvReport::Single { n, k, method, value } => vec![vec![
                (*n).into(),
                (*k).into(),
                provenance_label(*method).into(),
                (*value).into(),
            ]],
        };
        to_csv(IV_HEADER, rows)
    }
}

pub const GAUSS_HEADER: &[&str] = &[
    "kind", "k", "face", "value", "stderr", "count", "exact", "delta",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceRow {
    pub face: FaceIndex,
    pub k: usize,
    pub gamma_hat: f64,
    pub stderr: f64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TotalRow {
    pub k: usize,
    pub assembled: f64,
    pub stderr: f64,
    pub exact: f64,
    /// `assembled - exact`.
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussReport {
    pub n: usize,
    pub samples: u64,
    pub seed: u64,
    pub chunk_samples: u64,
    pub faces: Vec<FaceRow>,
    pub totals: Vec<TotalRow>,
}

pub fn gauss(n: usize, samples: u64, seed: u64) -> Result<GaussReport> {
    let mc = mc_gauss_measures(n, samples, seed)?;
    let exact = intrinsic_volumes_all(n, Method::Dp)?.values;
    let faces = mc
        .estimates
        .iter()
        .map(|e| FaceRow {
            face: e.face.clone(),
            k: e.face.dim(),
            gamma_hat: e.gamma_hat,
            stderr: e.stderr,
            count: e.count,
        })
        .collect();
    let totals = mc
        .assembled
        .iter()
        .map(|a| TotalRow {
            k: a.k,
            assembled: a.value,
            stderr: a.stderr,
            exact: exact[a.k],
            delta: a.value - exact[a.k],
        })
        .collect();
    Ok(GaussReport {
        n,
        samples,
        seed,
        chunk_samples: mc.chunk_samples,
        faces,
        totals,
    })
}

impl Report for GaussReport {
    fn json(&self) -> Vec<u8> {
        to_json(self)
    }

    fn csv(&self) -> Vec<u8> {
        let faces = self.faces.iter().map(|f| {
            vec![
                "face".into(),
                f.k.into(),
                f.face.to_string().into(),
                f.gamma_hat.into(),
                f.stderr.into(),
                f.count.into(),
                Cell::Empty,
                Cell::Empty,
            ]
        });
        let totals = self.totals.iter().map(|t| {
            vec![
                "total".into(),
                t.k.into(),
                Cell::Empty,
                t.assembled.into(),
                t.stderr.into(),
                Cell::Empty,
                t.exact.into(),
                t.delta.into(),
            ]
        });
        to_csv(GAUSS_HEADER, faces.chain(totals))
    }
}

pub const EULER_HEADER: &[&str] = &["solid_angle", "gaussian_measure"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EulerReport {
    pub rays: [[f64; 3]; 3],
    pub solid_angle: f64,
    /// `solid_angle / (4 pi)`.
    pub gaussian_measure: f64,
}

pub fn euler(rays: [[f64; 3]; 3]) -> Result<EulerReport> {
    let solid_angle = euler_solid_angle(rays[0], rays[1], rays[2])?;
    Ok(EulerReport {
        rays,
        solid_angle,
        gaussian_measure: solid_angle / (4.0 * std::f64::consts::PI),
    })
}

impl Report for EulerReport {
    fn json(&self) -> Vec<u8> {
        to_json(self)
    }

    fn csv(&self) -> Vec<u8> {
        to_csv(
            EULER_HEADER,
            [vec![self.solid_angle.into(), self.gaussian_measure.into()]],
        )
    }
}

pub const SY_HEADER: &[&str] = &[
    "n",
    "index",
    "re",
    "im",
    "r",
    "R",
    "max_imag_rel",
    "max_residual",
    "pass_bracket",
    "pass_real",
];

pub struct SyOutput(pub SYReport);

pub fn sy(n: usize, imag_threshold: f64, slack: f64) -> Result<SyOutput> {
    sy_check(n, imag_threshold, slack).map(SyOutput)
}

impl Report for SyOutput {
    fn json(&self) -> Vec<u8> {
        to_json(&self.0)
    }

    fn csv(&self) -> Vec<u8> {
        let r = &self.0;
        let rows = r.roots.iter().enumerate().map(|(i, z)| {
            vec![
                r.n.into(),
                (i + 1).into(),
                z.re.into(),
                z.im.into(),
                r.r.into(),
                r.big_r.into(),
                r.max_imag_rel.into(),
                r.max_residual.into(),
                r.pass_bracket.into(),
                r.pass_real.into(),
            ]
        });
        to_csv(SY_HEADER, rows)
    }

    fn passed(&self) -> bool {
        self.0.passed()
    }
}

pub const LIMIT_HEADER: &[&str] = &["n", "k", "scaled_sum", "omega_k", "rel_error"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitRow {
    pub n: usize,
    /// `n^{-k/2} S_k(n)`.
    pub scaled_sum: f64,
    pub omega_k: f64,
    /// `scaled_sum / omega_k - 1`.
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitReport {
    pub k: usize,
    pub rows: Vec<LimitRow>,
}

pub fn limit(k: usize, ns: &[usize]) -> Result<LimitReport> {
    let omega_k = omega(k);
    let rows = ns
        .iter()
        .map(|&n| {
            let scaled_sum = limit_row(n, k)?;
            Ok(LimitRow {
                n,
                scaled_sum,
                omega_k,
                rel_error: scaled_sum / omega_k - 1.0,
            })
        })
        .collect::<Result<_>>()?;
    Ok(LimitReport { k, rows })
}

impl Report for LimitReport {
    fn json(&self) -> Vec<u8> {
        to_json(self)
    }

    fn csv(&self) -> Vec<u8> {
        let rows = self.rows.iter().map(|r| {
            vec![
                r.n.into(),
                self.k.into(),
                r.scaled_sum.into(),
                r.omega_k.into(),
                r.rel_error.into(),
            ]
        });
        to_csv(LIMIT_HEADER, rows)
    }
}

pub const MK_HEADER: &[&str] = &[
    "k",
    "omega_k",
    "v_k",
    "ln_omega_k",
    "ln_v_k",
    "m_k",
    "m_k_scaled",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MkReport {
    pub k_max: usize,
    /// Limit of `m_k_scaled`.
    pub limit: f64,
    pub rows: Vec<BMVolumeRow>,
}

pub fn mk(k_max: usize) -> Result<MkReport> {
    Ok(MkReport {
        k_max,
        limit: MK_SCALED_LIMIT,
        rows: mk_sequence(k_max)?,
    })
}

impl Report for MkReport {
    fn json(&self) -> Vec<u8> {
        to_json(self)
    }

    fn csv(&self) -> Vec<u8> {
        let rows = self.rows.iter().map(|r| {
            vec![
                r.k.into(),
                r.omega_k.into(),
                r.v_k.into(),
                r.ln_omega_k.into(),
                r.ln_v_k.into(),
                r.m_k.into(),
                r.m_k_scaled.into(),
            ]
        });
        to_csv(MK_HEADER, rows)
    }
}
