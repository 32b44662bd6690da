//! Exact intrinsic volumes of the orthoscheme.
//!
//! `V_k = S_k(n) / k!` where `S_k(n)` sums `prod l_i^{-1/2}` over all integer
//! compositions `(l_1, .., l_k)`, `l_i >= 1`, with total at most `n`. Two
//! evaluation routes are provided: explicit enumeration (the oracle) and a
//! convolution dynamic program.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::{compensated_sum, NeumaierSum};

/// Default cap on the number of compositions [`composition_sum_enumerate`] visits.
pub const DEFAULT_TERM_BUDGET: u128 = 100_000_000;

/// Largest `n` for which [`Method::Auto`] still enumerates.
pub const AUTO_ENUMERATION_MAX_N: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "enum")]
    Enumerate,
    #[serde(rename = "dp")]
    Dp,
    /// Enumeration up to [`AUTO_ENUMERATION_MAX_N`], the DP beyond.
    #[serde(rename = "auto")]
    Auto,
}

impl Method {
    fn resolve(self, n: usize) -> Method {
        match self {
            Method::Auto if n > AUTO_ENUMERATION_MAX_N => Method::Dp,
            Method::Auto => Method::Enumerate,
            m => m,
        }
    }
}

/// Provenance of an [`IntrinsicVolumes`] vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    #[serde(rename = "exact-enum")]
    ExactEnum,
    #[serde(rename = "exact-dp")]
    ExactDp,
    #[serde(rename = "mc-estimate")]
    McEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntrinsicVolumes {
    pub n: usize,
    /// `V_0, .., V_n`.
    pub values: Vec<f64>,
    pub method: Provenance,
    pub stderr: Option<Vec<f64>>,
}

/// Result of an enumeration run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Enumerated {
    pub sum: f64,
    /// Number of compositions visited; always `C(n, k)`.
    pub terms: u128,
}

fn check_range(n: usize, k: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidDimension("n must be at least 1".into()));
    }
    if k == 0 || k > n {
        return Err(Error::OutOfRange(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    Ok(())
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// `S_k(n)` by visiting every composition, refusing runs above `budget` terms.
pub fn composition_sum_enumerate_with_budget(n: usize, k: usize, budget: u128) -> Result<Enumerated> {
    check_range(n, k)?;
    let terms = binomial(n, k);
    if terms > budget {
        return Err(Error::BudgetExceeded { terms, budget });
    }

    let mut parts = vec![1usize; k];
    let mut total = k;
    let mut acc = NeumaierSum::new();
    let mut visited: u128 = 0;
    loop {
        let product: f64 = parts.iter().map(|&l| l as f64).product();
        acc.add(1.0 / product.sqrt());
        visited += 1;

        // odometer step in lexicographic order
        let mut p = k - 1;
        loop {
            if total < n {
                parts[p] += 1;
                total += 1;
                break;
            }
            total -= parts[p] - 1;
            parts[p] = 1;
            if p == 0 {
                debug_assert_eq!(visited, terms);
                return Ok(Enumerated {
                    sum: acc.value(),
                    terms: visited,
                });
            }
            p -= 1;
        }
    }
}

pub fn composition_sum_enumerate(n: usize, k: usize) -> Result<f64> {
    composition_sum_enumerate_with_budget(n, k, DEFAULT_TERM_BUDGET).map(|e| e.sum)
}

/// Rows of `T_j(m) = sum_{l_1 + .. + l_j = m} prod l_i^{-1/2}`.
///
/// Holds a single row; [`advance`](Self::advance) moves from `j` to `j + 1`
/// through `T_j(m) = sum_{l=1}^{m-j+1} T_{j-1}(m - l) l^{-1/2}`.
#[derive(Debug, Clone)]
pub struct CompositionSumTable {
    n: usize,
    j: usize,
    weights: Vec<f64>,
    row: Vec<f64>,
}

impl CompositionSumTable {
    /// Table at `j = 1`: `T_1(m) = m^{-1/2}`.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension("n must be at least 1".into()));
        }
        let weights: Vec<f64> = (0..=n)
            .map(|l| if l == 0 { 0.0 } else { 1.0 / (l as f64).sqrt() })
            .collect();
        Ok(Self {
            n,
            j: 1,
            row: weights.clone(),
            weights,
        })
    }

    pub fn j(&self) -> usize {
        self.j
    }

    /// `T_j(m)`; zero for `m < j`.
    pub fn value(&self, m: usize) -> f64 {
        self.row[m]
    }

    pub fn advance(&mut self) -> Result<()> {
        if self.j >= self.n {
            return Err(Error::OutOfRange(format!("table already at j = n = {}", self.n)));
        }
        let j = self.j + 1;
        let mut next = vec![0.0; self.n + 1];
        for (m, slot) in next.iter_mut().enumerate().skip(j) {
            let mut acc = NeumaierSum::new();
            for l in 1..=m + 1 - j {
                acc.add(self.row[m - l] * self.weights[l]);
            }
            *slot = acc.value();
        }
        self.row = next;
        self.j = j;
        Ok(())
    }

    /// `S_j(n) = sum_{m=j}^{n} T_j(m)`.
    pub fn total(&self) -> f64 {
        compensated_sum(self.row[self.j..].iter().copied())
    }
}

/// `S_k(n)` through the convolution table, `O(k n^2)`.
pub fn composition_sum_dp(n: usize, k: usize) -> Result<f64> {
    check_range(n, k)?;
    let mut table = CompositionSumTable::new(n)?;
    while table.j() < k {
        table.advance()?;
    }
    Ok(table.total())
}

pub fn composition_sum(n: usize, k: usize, method: Method) -> Result<f64> {
    match method.resolve(n) {
        Method::Enumerate => composition_sum_enumerate(n, k),
        _ => composition_sum_dp(n, k),
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

/// `V_k` of the `n`-dimensional orthoscheme; `V_0 = 1`.
pub fn intrinsic_volume(n: usize, k: usize, method: Method) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidDimension("n must be at least 1".into()));
    }
    if k == 0 {
        return Ok(1.0);
    }
    Ok(composition_sum(n, k, method)? / factorial(k))
}

/// `(V_0, .., V_n)`. The DP route reuses one table across `k`.
///
/// Meant for moderate `n`: `S_k(n)` overflows once `C(n, k)` does, near `n = 1000`.
pub fn intrinsic_volumes_all(n: usize, method: Method) -> Result<IntrinsicVolumes> {
    if n == 0 {
        return Err(Error::InvalidDimension("n must be at least 1".into()));
    }
    let method = method.resolve(n);
    let mut values = Vec::with_capacity(n + 1);
    values.push(1.0);
    let provenance = match method {
        Method::Enumerate => {
            for k in 1..=n {
                values.push(composition_sum_enumerate(n, k)? / factorial(k));
            }
            Provenance::ExactEnum
        }
        _ => {
            let mut table = CompositionSumTable::new(n)?;
            values.push(table.total());
            for k in 2..=n {
                table.advance()?;
                values.push(table.total() / factorial(k));
            }
            Provenance::ExactDp
        }
    };
    Ok(IntrinsicVolumes {
        n,
        values,
        method: provenance,
        stderr: None,
    })
}

/// `n^{-k/2} S_k(n)`, which tends to `omega_k` as `n` grows.
pub fn limit_row(n: usize, k: usize) -> Result<f64> {
    let s = composition_sum_dp(n, k)?;
    Ok(s * (n as f64).powf(-(k as f64) / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const R2: f64 = std::f64::consts::SQRT_2;

    fn r3() -> f64 {
        3f64.sqrt()
    }

    /// Independent recursive oracle: sum over the first part, recurse on the rest.
    fn recursive_sum(budget: usize, k: usize) -> f64 {
        if k == 0 {
            return 1.0;
        }
        (1..=budget.saturating_sub(k - 1))
            .map(|l| recursive_sum(budget - l, k - 1) / (l as f64).sqrt())
            .sum()
    }

    #[test]
    fn enumeration_small_values() {
        assert_relative_eq!(composition_sum_enumerate(3, 1).unwrap(), 1.0 + 1.0 / R2 + 1.0 / r3(), epsilon = 1e-15);
        assert_relative_eq!(composition_sum_enumerate(3, 2).unwrap(), 1.0 + R2, epsilon = 1e-15);
        assert_eq!(composition_sum_enumerate(3, 3).unwrap(), 1.0);
    }

    #[test]
    fn enumeration_visits_binomial_many_terms() {
        for n in 1..=14 {
            for k in 1..=n {
                let e = composition_sum_enumerate_with_budget(n, k, DEFAULT_TERM_BUDGET).unwrap();
                assert_eq!(e.terms, binomial(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn enumeration_respects_budget() {
        let err = composition_sum_enumerate_with_budget(40, 20, 1_000).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { terms, budget: 1_000 } if terms == binomial(40, 20)));
        assert!(composition_sum_enumerate(60, 30).is_err());
    }

    #[test]
    fn range_errors() {
        assert!(composition_sum_enumerate(3, 4).is_err());
        assert!(composition_sum_dp(3, 0).is_err());
        assert!(composition_sum_dp(0, 0).is_err());
        assert!(intrinsic_volume(0, 0, Method::Dp).is_err());
        assert!(limit_row(2, 3).is_err());
    }

    #[test]
    fn dp_small_values() {
        assert_relative_eq!(composition_sum_dp(3, 2).unwrap(), 1.0 + R2, epsilon = 1e-15);
        assert_eq!(composition_sum_dp(1, 1).unwrap(), 1.0);
        let x = composition_sum_dp(12, 6).unwrap();
        let oracle = composition_sum_enumerate(12, 6).unwrap();
        assert!(((x - oracle) / x).abs() <= 1e-12);
    }

    #[test]
    fn table_first_row_and_recurrence() {
        let mut t = CompositionSumTable::new(9).unwrap();
        for m in 1..=9 {
            assert_eq!(t.value(m), 1.0 / (m as f64).sqrt());
        }
        let prev: Vec<f64> = (0..=9).map(|m| t.value(m)).collect();
        t.advance().unwrap();
        for m in 2..=9 {
            let direct: f64 = (1..=m - 1).map(|l| prev[m - l] / (l as f64).sqrt()).sum();
            assert_relative_eq!(t.value(m), direct, max_relative = 1e-15);
        }
        assert_eq!(t.value(1), 0.0);
    }

    #[test]
    fn dp_matches_independent_recursion() {
        for n in 1..=12 {
            for k in 1..=n {
                assert_relative_eq!(
                    composition_sum_dp(n, k).unwrap(),
                    recursive_sum(n, k),
                    max_relative = 1e-13
                );
            }
        }
    }

    #[test]
    fn dp_matches_enumeration_on_feasible_grid() {
        for n in 1..=24 {
            for k in 1..=n {
                if binomial(n, k) > 1_000_000 {
                    continue;
                }
                let dp = composition_sum_dp(n, k).unwrap();
                let en = composition_sum_enumerate(n, k).unwrap();
                assert!(((dp - en) / en).abs() <= 1e-12, "n={n} k={k}: {dp} vs {en}");
            }
        }
    }

    #[test]
    fn intrinsic_volume_values() {
        for m in [Method::Enumerate, Method::Dp] {
            assert_relative_eq!(intrinsic_volume(3, 1, m).unwrap(), 1.0 + 1.0 / R2 + 1.0 / r3(), epsilon = 1e-15);
            assert_relative_eq!(
                intrinsic_volume(4, 1, m).unwrap(),
                1.0 + 1.0 / R2 + 1.0 / r3() + 0.5,
                epsilon = 1e-15
            );
            assert_relative_eq!(intrinsic_volume(5, 5, m).unwrap(), 1.0 / 120.0, max_relative = 1e-15);
            assert_eq!(intrinsic_volume(5, 0, m).unwrap(), 1.0);
        }
    }

    #[test]
    fn all_volumes() {
        let v1 = intrinsic_volumes_all(1, Method::Dp).unwrap();
        assert_eq!(v1.values, vec![1.0, 1.0]);
        assert_eq!(v1.method, Provenance::ExactDp);

        let v3 = intrinsic_volumes_all(3, Method::Enumerate).unwrap();
        assert_eq!(v3.method, Provenance::ExactEnum);
        let expect = [1.0, 1.0 + 1.0 / R2 + 1.0 / r3(), (1.0 + R2) / 2.0, 1.0 / 6.0];
        for (a, b) in v3.values.iter().zip(expect) {
            assert_relative_eq!(*a, b, max_relative = 1e-15);
        }
        let v4 = intrinsic_volumes_all(4, Method::Dp).unwrap();
        assert_relative_eq!(v4.values[1], 2.784_457_050_376_173, max_relative = 1e-14);

        for n in 1..=20 {
            let dp = intrinsic_volumes_all(n, Method::Dp).unwrap();
            assert_eq!(dp.values[0], 1.0);
            assert_relative_eq!(dp.values[n], 1.0 / factorial(n), max_relative = 1e-14);
            assert!(dp.values.iter().all(|&v| v > 0.0));
            for k in 1..=n {
                let s = composition_sum_dp(n, k).unwrap();
                assert_relative_eq!(dp.values[k] * factorial(k), s, max_relative = 1e-15);
            }
        }
    }

    #[test]
    fn auto_method_picks_by_size() {
        assert_eq!(intrinsic_volumes_all(5, Method::Auto).unwrap().method, Provenance::ExactEnum);
        assert_eq!(intrinsic_volumes_all(30, Method::Auto).unwrap().method, Provenance::ExactDp);
    }

    #[test]
    fn limit_row_values() {
        assert_relative_eq!(limit_row(4, 1).unwrap(), 1.392_228_525_188_086_6, max_relative = 1e-14);
        assert_eq!(limit_row(2, 2).unwrap(), 0.5);
        let eps = 2.0 - limit_row(10_000, 1).unwrap();
        assert!(eps > 0.0 && eps < 0.02, "eps = {eps}");
    }

    #[test]
    fn limit_row_increases_toward_omega() {
        let omega = [2.0, std::f64::consts::PI, 4.0 * std::f64::consts::PI / 3.0];
        for (k, w) in (1..=3).zip(omega) {
            let mut prev = 0.0;
            for n in [k, 10, 50, 200, 800] {
                let r = limit_row(n, k).unwrap();
                assert!(r > prev && r < w, "k={k} n={n} r={r}");
                prev = r;
            }
        }
    }

    proptest! {
        #[test]
        fn sums_strictly_increase_in_n(n in 1usize..60, k in 1usize..8) {
            prop_assume!(k <= n);
            let a = composition_sum_dp(n, k).unwrap();
            let b = composition_sum_dp(n + 1, k).unwrap();
            prop_assert!(b > a);
        }
    }
}
