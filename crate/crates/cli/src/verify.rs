//! The reproduction suite behind `orthoscheme verify`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::time::Instant;

use serde::Serialize;

use orthoscheme::bm::{mk_sequence, omega, MK_SCALED_LIMIT};
use orthoscheme::cones::{
    block_cone_rays, cone_gauss_mc, e_cone_rays, euler_solid_angle, mc_gauss_measures,
    ConeMeasure, ConeSpec,
};
use orthoscheme::exact::{composition_sum_dp, composition_sum_enumerate, intrinsic_volume, limit_row};
use orthoscheme::poly::RESIDUAL_BOUND;
use orthoscheme::sy::{sy_check, DEFAULT_IMAG_THRESHOLD, DEFAULT_SLACK};
use orthoscheme::{FaceIndex, Method, Orthoscheme, Result};

use crate::format::{to_csv, to_json, Cell};
use crate::reports::Report;

pub const SEED: u64 = 42;
pub const SAMPLES: u64 = 1_000_000;
pub const SIGMAS: f64 = 4.0;
/// Absolute floor added to `4 sigma` where a quantity is exact up to rounding
/// and its standard error is zero.
pub const ROUNDING_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub criteria: Vec<CriterionResult>,
}

pub const VERIFY_HEADER: &[&str] = &["id", "name", "passed", "detail", "seconds"];

impl Report for VerifyReport {
    fn json(&self) -> Vec<u8> {
        to_json(self)
    }

    fn csv(&self) -> Vec<u8> {
        let rows = self.criteria.iter().map(|c| {
            vec![
                Cell::Int(c.id as u64),
                c.name.as_str().into(),
                c.passed.into(),
                c.detail.as_str().into(),
                c.seconds.into(),
            ]
        });
        to_csv(VERIFY_HEADER, rows)
    }

    fn passed(&self) -> bool {
        self.passed
    }
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "{} {:>2}  {}  ({:.2}s)  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

/// Verdict and a one-line summary of the worst case.
pub type Outcome = (bool, String);

pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub check: fn() -> Result<Outcome>,
}

pub const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, name: "V_1 of the 3-orthoscheme in closed form", check: v1_n3 },
    Criterion { id: 2, name: "V_1 of the 4-orthoscheme in closed form", check: v1_n4 },
    Criterion { id: 3, name: "DP matches enumeration for n <= 12", check: dp_vs_enum },
    Criterion { id: 4, name: "edge measures, n = 3", check: edges_n3 },
    Criterion { id: 5, name: "edge measures, n = 4", check: edges_n4 },
    Criterion { id: 6, name: "solid angle of the {0,1} edge cone, n = 4", check: euler_edge },
    Criterion { id: 7, name: "Monte Carlo assembly for n <= 6", check: assembly },
    Criterion { id: 8, name: "E-cone factorization and partitions", check: factorization },
    Criterion { id: 9, name: "root bracket and realness for n <= 21", check: sy_through_21 },
    Criterion { id: 10, name: "scaled composition sums approach omega_k", check: limit_rows },
    Criterion { id: 11, name: "m_k decay", check: mk_tail },
    Criterion { id: 12, name: "gauss output independent of thread count", check: determinism },
];

pub fn run_criterion(c: &Criterion) -> CriterionResult {
    let start = Instant::now();
    let (passed, detail) = match (c.check)() {
        Ok(outcome) => outcome,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionResult {
        id: c.id,
        name: c.name.to_owned(),
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Runs every criterion in order, reporting each as it finishes.
pub fn verify_all(mut on_result: impl FnMut(&CriterionResult)) -> VerifyReport {
    let criteria: Vec<CriterionResult> = CRITERIA
        .iter()
        .map(|c| {
            let r = run_criterion(c);
            on_result(&r);
            r
        })
        .collect();
    VerifyReport {
        passed: criteria.iter().all(|c| c.passed),
        criteria,
    }
}

fn v1_closed_form(n: usize) -> Result<Outcome> {
    let target: f64 = (1..=n).map(|l| 1.0 / (l as f64).sqrt()).sum();
    let mut worst: f64 = 0.0;
    for method in [Method::Dp, Method::Enumerate] {
        worst = worst.max((intrinsic_volume(n, 1, method)? - target).abs());
    }
    Ok((worst <= 1e-12, format!("max |V_1 - target| = {worst:.3e}")))
}

fn v1_n3() -> Result<Outcome> {
    v1_closed_form(3)
}

fn v1_n4() -> Result<Outcome> {
    v1_closed_form(4)
}

fn dp_vs_enum() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for n in 1..=12 {
        for k in 1..=n {
            let e = composition_sum_enumerate(n, k)?;
            let d = composition_sum_dp(n, k)?;
            worst = worst.max(((d - e) / e).abs());
        }
    }
    Ok((worst <= 1e-12, format!("max relative gap {worst:.3e}")))
}

/// Largest `|gamma_hat - target| / stderr` over the listed faces.
fn edge_check(n: usize, table: &[(&[usize], f64)]) -> Result<Outcome> {
    let mc = mc_gauss_measures(n, SAMPLES, SEED)?;
    let mut worst = (0.0, String::new());
    let mut passed = true;
    for &(indices, target) in table {
        let face = FaceIndex::for_dimension(n, indices.to_vec())?;
        let est = mc.get(&face).expect("every face is estimated");
        let gap = (est.gamma_hat - target).abs();
        passed &= gap <= SIGMAS * est.stderr;
        let z = gap / est.stderr;
        if z >= worst.0 {
            worst = (z, face.to_string());
        }
    }
    Ok((passed, format!("worst face {{{}}} at {:.2} sigma", worst.1, worst.0)))
}

fn edges_n3() -> Result<Outcome> {
    edge_check(
        3,
        &[
            (&[0, 1], 3.0 / 8.0),
            (&[1, 2], 1.0 / 4.0),
            (&[2, 3], 3.0 / 8.0),
            (&[0, 2], 1.0 / 4.0),
            (&[1, 3], 1.0 / 4.0),
            (&[0, 3], 1.0 / 3.0),
        ],
    )
}

fn edges_n4() -> Result<Outcome> {
    edge_check(
        4,
        &[
            (&[0, 1], 5.0 / 16.0),
            (&[1, 2], 3.0 / 16.0),
            (&[2, 3], 3.0 / 16.0),
            (&[3, 4], 5.0 / 16.0),
            (&[0, 2], 3.0 / 16.0),
            (&[1, 3], 1.0 / 8.0),
            (&[2, 4], 3.0 / 16.0),
            (&[0, 3], 1.0 / 6.0),
            (&[1, 4], 1.0 / 6.0),
            (&[0, 4], 1.0 / 4.0),
        ],
    )
}

fn euler_edge() -> Result<Outcome> {
    let a = [0.0, 0.0, -1.0];
    let b = [0.0, -FRAC_1_SQRT_2, FRAC_1_SQRT_2];
    let c = [-FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0];
    let gamma = euler_solid_angle(a, b, c)?;
    let err = (gamma - 5.0 * PI / 4.0).abs();
    let frac_err = (gamma / (4.0 * PI) - 5.0 / 16.0).abs();
    Ok((
        err <= 1e-12 && frac_err <= 1e-12,
        format!("|Gamma - 5pi/4| = {err:.3e}, |Gamma/4pi - 5/16| = {frac_err:.3e}"),
    ))
}

fn assembly() -> Result<Outcome> {
    let mut passed = true;
    let mut worst = (0.0, 0, 0);
    for n in 1..=6 {
        let mc = mc_gauss_measures(n, SAMPLES, SEED)?;
        for a in &mc.assembled {
            let exact = intrinsic_volume(n, a.k, Method::Dp)?;
            let gap = (a.value - exact).abs();
            passed &= gap <= SIGMAS * a.stderr + ROUNDING_FLOOR;
            if a.stderr > 0.0 && gap / a.stderr >= worst.0 {
                worst = (gap / a.stderr, n, a.k);
            }
        }
    }
    Ok((
        passed,
        format!("worst (n, k) = ({}, {}) at {:.2} sigma", worst.1, worst.2, worst.0),
    ))
}

fn within(gap: f64, sigma: f64) -> bool {
    gap <= SIGMAS * sigma + ROUNDING_FLOOR
}

fn factorization() -> Result<Outcome> {
    // every cone gets its own seed
    let mut next_seed = SEED + 1;
    let mut measure = |cone: ConeSpec| {
        next_seed += 1;
        cone_gauss_mc(&cone, SAMPLES, next_seed)
    };

    let mut e_cones: BTreeMap<(usize, usize, usize), ConeMeasure> = BTreeMap::new();
    let mut failures = Vec::new();
    for n in 1..=6 {
        for d in 1..=n {
            let mut total = 0.0;
            let mut var = 0.0;
            for i0 in 0..=n - d {
                let m = measure(e_cone_rays(n, d, i0)?)?;
                total += m.gamma_hat;
                var += m.stderr * m.stderr;
                e_cones.insert((n, d, i0), m);
            }
            if !within((total - 1.0).abs(), var.sqrt()) {
                failures.push(format!("partition n={n} d={d} sums to {total:.6}"));
            }
        }
    }

    let mut faces_checked = 0;
    for n in 1..=6 {
        let mc = mc_gauss_measures(n, SAMPLES, SEED)?;
        let body = Orthoscheme::new(n)?;
        for k in 1..=n {
            for face in body.faces(k)? {
                let est = mc.get(&face).expect("every face is estimated");
                let e = &e_cones[&(n, face.extent(), face.first())];
                let scale = face.gap_product();
                let sigma = (scale * est.stderr).hypot(e.stderr);
                if !within((scale * est.gamma_hat - e.gamma_hat).abs(), sigma) {
                    failures.push(format!("factorization n={n} face {{{face}}}"));
                }
                faces_checked += 1;
            }
        }
    }

    for d in 2..=6 {
        let blocks = (0..d)
            .map(|l| measure(block_cone_rays(d, l)?))
            .collect::<Result<Vec<_>>>()?;
        let total: f64 = blocks.iter().map(|m| m.gamma_hat).sum();
        let var: f64 = blocks.iter().map(|m| m.stderr * m.stderr).sum();
        if !within((total - 1.0).abs(), var.sqrt()) {
            failures.push(format!("block partition d={d} sums to {total:.6}"));
        }
        for (i, a) in blocks.iter().enumerate() {
            for b in &blocks[i + 1..] {
                if !within((a.gamma_hat - b.gamma_hat).abs(), a.stderr.hypot(b.stderr)) {
                    failures.push(format!("block measures differ at d={d}"));
                }
            }
        }
    }

    let detail = if failures.is_empty() {
        format!("{faces_checked} faces, {} E-cones, 20 block cones", e_cones.len())
    } else {
        failures.join("; ")
    };
    Ok((failures.is_empty(), detail))
}

fn sy_through_21() -> Result<Outcome> {
    let mut failed = Vec::new();
    let mut worst_residual: f64 = 0.0;
    let mut worst_imag: f64 = 0.0;
    for n in 1..=21 {
        let rep = sy_check(n, DEFAULT_IMAG_THRESHOLD, DEFAULT_SLACK)?;
        worst_residual = worst_residual.max(rep.max_residual);
        worst_imag = worst_imag.max(rep.max_imag_rel);
        if !rep.passed() || rep.max_residual > RESIDUAL_BOUND {
            failed.push(n.to_string());
        }
    }
    let detail = format!(
        "max residual {worst_residual:.2e}, max relative imaginary part {worst_imag:.2e}"
    );
    if failed.is_empty() {
        Ok((true, detail))
    } else {
        Ok((false, format!("failed n = {}; {detail}", failed.join(","))))
    }
}

fn limit_rows() -> Result<Outcome> {
    let mut passed = true;
    let mut parts = Vec::new();
    for k in 1..=4 {
        let ratios = [100, 1_000, 10_000]
            .iter()
            .map(|&n| Ok(limit_row(n, k)? / omega(k)))
            .collect::<Result<Vec<f64>>>()?;
        passed &= (ratios[2] - 1.0).abs() <= 0.05;
        passed &= ratios.windows(2).all(|w| w[0] < w[1]);
        parts.push(format!("k={k}: {:.4}", ratios[2]));
    }
    Ok((passed, format!("ratios at n = 10^4: {}", parts.join(", "))))
}

fn mk_tail() -> Result<Outcome> {
    let rows = mk_sequence(100_000)?;
    let decreasing = rows.windows(2).all(|w| w[1].m_k < w[0].m_k);
    let at = &rows[10_000 - 1];
    let rel = (at.m_k_scaled - MK_SCALED_LIMIT).abs() / MK_SCALED_LIMIT;
    Ok((
        decreasing && rel <= 0.01,
        format!("decreasing: {decreasing}; m_k sqrt(k) off by {rel:.4e} at k = 10^4"),
    ))
}

fn determinism() -> Result<Outcome> {
    let outputs: Vec<(i32, Vec<u8>)> = ["1", "8"]
        .iter()
        .map(|threads| {
            let mut out = Vec::new();
            let mut err = Vec::new();
            let code = crate::run(
                [
                    "orthoscheme", "gauss", "--n", "4", "--samples", "1000000", "--seed", "42",
                    "--threads", threads,
                ],
                &mut out,
                &mut err,
            );
            (code, out)
        })
        .collect();
    let identical = outputs[0] == outputs[1];
    let ok = identical && outputs.iter().all(|(code, out)| *code == 0 && !out.is_empty());
    Ok((
        ok,
        format!("{} bytes, identical: {identical}", outputs[0].1.len()),
    ))
}
