//! Brute-force solution counters realizing the mean-value integrals as exact
//! combinatorial counts at desk scale.
//!
//! Each moment of an exponential sum equals, by Parseval, the number of
//! solutions of an equal-sums equation; the counters here count those
//! solutions directly and split them along their natural case decompositions
//! (diagonal `t1 = t2`, repeated `y1 = y2`, vanishing second difference).
//! The split and the total are computed by separate loops so "parts sum to
//! total" is a real identity check, enforced on every run.
//!
//! Counts are exact 128-bit integers. The enumeration budget (10^9 basic
//! operations) caps every counter far below any risk of overflow: a counter
//! that fits the budget produces counts below ~10^18 per side pair.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{checked_pow, integer_kth_root, is_prime64, sieve_primes, Window};
use crate::{Error, Result};

/// Basic-operation budget for any single counter invocation.
pub const OP_BUDGET: u64 = 1_000_000_000;

/// Which counter a [`SolutionCount`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LemmaKind {
    Hua,
    L23,
    L24,
    L25,
    L26,
}

impl LemmaKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hua" => Ok(LemmaKind::Hua),
            "l23" => Ok(LemmaKind::L23),
            "l24" => Ok(LemmaKind::L24),
            "l25" => Ok(LemmaKind::L25),
            "l26" => Ok(LemmaKind::L26),
            _ => Err(Error::Domain(format!("unknown lemma counter {s:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LemmaKind::Hua => "hua",
            LemmaKind::L23 => "l23",
            LemmaKind::L24 => "l24",
            LemmaKind::L25 => "l25",
            LemmaKind::L26 => "l26",
        }
    }
}

/// An exact solution count with its case decomposition.
#[derive(Debug, Clone, Serialize)]
pub struct SolutionCount {
    pub lemma: LemmaKind,
    pub k: u32,
    pub x: u32,
    #[serde(rename = "N")]
    pub n: u64,
    pub total: u128,
    /// Named sub-counts partitioning the total.
    pub parts: Vec<(String, u128)>,
}

impl SolutionCount {
    /// Enforced on construction: an inexact partition is an internal error,
    /// never a warning.
    fn checked(self) -> Result<Self> {
        let sum: u128 = self.parts.iter().map(|(_, c)| *c).sum();
        if sum != self.total {
            return Err(Error::Identity(format!(
                "{} parts sum to {sum}, total is {}",
                self.lemma.name(),
                self.total
            )));
        }
        Ok(self)
    }

    pub fn part(&self, name: &str) -> Option<u128> {
        self.parts.iter().find(|(n, _)| n == name).map(|(_, c)| *c)
    }
}

/// The k-th powers of the integers (or primes) in the base range
/// `lo < y <= hi`.
pub fn power_values(k: u32, lo: u64, hi: u64, prime_only: bool) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    if prime_only {
        if hi >= 2 {
            let table = sieve_primes(hi.max(2))?;
            for &p in table.primes() {
                if p > hi {
                    break;
                }
                if p > lo {
                    out.push(power_of(p, k)?);
                }
            }
        }
    } else {
        for y in lo + 1..=hi {
            out.push(power_of(y, k)?);
        }
    }
    Ok(out)
}

fn power_of(y: u64, k: u32) -> Result<u64> {
    checked_pow(y, k).ok_or_else(|| Error::Capacity(format!("{y}^{k} overflows u64")))
}

/// Base values of the window at cap `n`: dyadic `n/4 < y^k <= n` or full
/// `y^k <= n` from 1 (integers) / 2 (primes).
fn window_values(k: u32, n: u64, window: Window, prime_only: bool) -> Result<Vec<u64>> {
    let root = integer_kth_root(n, k);
    let all = power_values(k, 0, root, prime_only)?;
    Ok(all.into_iter().filter(|&q| window.contains(q, n)).collect())
}

fn enforce_budget(cost: u128, what: &str) -> Result<()> {
    if cost > OP_BUDGET as u128 {
        return Err(Error::Capacity(format!(
            "{what} needs ~{cost} operations, budget is {OP_BUDGET}"
        )));
    }
    Ok(())
}

/// Multiset of m-fold sums of the given values, with multiplicities.
fn fold_sums(values: &[u64], m: u32) -> Result<HashMap<u64, u64>> {
    let cost = (values.len() as u128).pow(m.max(1)) * m.max(1) as u128;
    enforce_budget(cost, "m-fold sum table")?;
    let mut acc: HashMap<u64, u64> = HashMap::new();
    acc.insert(0, 1);
    for _ in 0..m {
        let mut next: HashMap<u64, u64> = HashMap::with_capacity(acc.len() * values.len());
        for (&s, &c) in &acc {
            for &v in values {
                *next.entry(s + v).or_insert(0) += c;
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// Distribution of differences of two independent m-fold sums:
/// `D[d] = Σ_a A[a] · A[a - d]`. Symmetric in d by construction.
fn diff_distribution(sums: &HashMap<u64, u64>) -> Result<HashMap<i128, u128>> {
    enforce_budget((sums.len() as u128).pow(2), "difference distribution")?;
    let mut d: HashMap<i128, u128> = HashMap::with_capacity(sums.len() * 2);
    for (&a, &ca) in sums {
        for (&b, &cb) in sums {
            *d.entry(a as i128 - b as i128).or_insert(0) += ca as u128 * cb as u128;
        }
    }
    Ok(d)
}

/// Number of ordered solutions of
/// `y_1^k + … + y_m^k = y_{m+1}^k + … + y_{2m}^k`
/// with every `y` in the window at cap `n`: the 2m-th moment of the window's
/// exponential sum, by Parseval.
pub fn count_equal_power_sums(
    k: u32,
    m: u32,
    n: u64,
    window: Window,
    prime_only: bool,
) -> Result<u128> {
    let values = window_values(k, n, window, prime_only)?;
    equal_power_sums_of(&values, m)
}

/// The same count over an explicit base range `lo < y <= hi` (the doubled
/// windows of the lemma counters).
pub fn count_equal_power_sums_in(
    k: u32,
    m: u32,
    lo: u64,
    hi: u64,
    prime_only: bool,
) -> Result<u128> {
    let values = power_values(k, lo, hi, prime_only)?;
    equal_power_sums_of(&values, m)
}

fn equal_power_sums_of(values: &[u64], m: u32) -> Result<u128> {
    if m == 0 {
        return Ok(1);
    }
    let sums = fold_sums(values, m)?;
    Ok(sums.values().map(|&c| c as u128 * c as u128).sum())
}

/// Hua-style moment as a [`SolutionCount`] artifact (no case split).
pub fn count_hua(k: u32, m: u32, n: u64, window: Window, prime_only: bool) -> Result<SolutionCount> {
    let total = count_equal_power_sums(k, m, n, window, prime_only)?;
    SolutionCount {
        lemma: LemmaKind::Hua,
        k,
        x: m,
        n,
        total,
        parts: vec![("all".into(), total)],
    }
    .checked()
}

/// Smallest t with `t^2 > n` and largest t with `t^2 <= 4n`: the window
/// `sqrt(N) < t <= 2 sqrt(N)` in exact integer terms.
fn sqrt_window(n: u64) -> (u64, u64) {
    let lo = integer_kth_root(n, 2) + 1;
    let hi = integer_kth_root(4 * n, 2);
    (lo, hi)
}

/// Count solutions of
/// `t1^2 - t2^2 = y_1^k + … + y_x^k - y_{x+1}^k - … - y_{2x}^k`
/// with `sqrt(N) < t <= 2 sqrt(N)` and `N^(1/k) < y <= 2 N^(1/k)`, y over the
/// integers. Parts: `t1 != t2` and the diagonal `t1 = t2`.
pub fn count_l23(k: u32, x: u32, n: u64) -> Result<SolutionCount> {
    if k < 2 || x < 1 {
        return Err(Error::Domain("l23 counter needs k >= 2, x >= 1".into()));
    }
    let (t_lo, t_hi) = sqrt_window(n);
    let y_lo = integer_kth_root(n, k);
    let y_hi = integer_kth_root(checked_mul_pow2(n, k)?, k);
    let y_powers = power_values(k, y_lo, y_hi, false)?;
    let d = diff_distribution(&fold_sums(&y_powers, x)?)?;

    let t_count = t_hi - t_lo + 1;
    enforce_budget(t_count as u128 * t_count as u128, "t-pair enumeration")?;

    // Total over all (t1, t2) pairs, split loops for the parts; the partition
    // identity is then a genuine cross-check.
    let total: u128 = (t_lo..=t_hi)
        .into_par_iter()
        .map(|t1| {
            let s1 = (t1 * t1) as i128;
            let mut acc = 0u128;
            for t2 in t_lo..=t_hi {
                let key = s1 - (t2 * t2) as i128;
                if let Some(&c) = d.get(&key) {
                    acc += c;
                }
            }
            acc
        })
        .sum();
    let diag = t_count as u128 * d.get(&0).copied().unwrap_or(0);
    let off: u128 = (t_lo..=t_hi)
        .into_par_iter()
        .map(|t1| {
            let s1 = (t1 * t1) as i128;
            let mut acc = 0u128;
            for t2 in t_lo..=t_hi {
                if t1 == t2 {
                    continue;
                }
                let key = s1 - (t2 * t2) as i128;
                if let Some(&c) = d.get(&key) {
                    acc += c;
                }
            }
            acc
        })
        .sum();

    SolutionCount {
        lemma: LemmaKind::L23,
        k,
        x,
        n,
        total,
        parts: vec![("t1_ne_t2".into(), off), ("t1_eq_t2".into(), diag)],
    }
    .checked()
}

fn checked_mul_pow2(n: u64, k: u32) -> Result<u64> {
    n.checked_shl(k)
        .filter(|_| k < 64)
        .ok_or_else(|| Error::Capacity(format!("2^{k} * {n} overflows u64")))
}

/// Shared implementation of the two counters with a mixed-power pair on the
/// left: `t1^2 - t2^2 = y1^w - y2^w + z_1^k + … - z_{2x}^k` over integers,
/// windows `P_j < v <= 2 P_j` with `P_j = floor(N^(1/j))`.
fn count_mixed(lemma: LemmaKind, y_pow: u32, k: u32, x: u32, n: u64) -> Result<SolutionCount> {
    if k < 2 || x < 1 {
        return Err(Error::Domain("counter needs k >= 2, x >= 1".into()));
    }
    let p2 = doubled_window_base(n, 2)?;
    let py = doubled_window_base(n, y_pow)?;
    let pk = doubled_window_base(n, k)?;
    let z_powers = power_values(k, pk, 2 * pk, false)?;
    let d = diff_distribution(&fold_sums(&z_powers, x)?)?;

    let t_vals: Vec<u64> = (p2 + 1..=2 * p2).collect();
    let y_vals: Vec<u64> = (py + 1..=2 * py).collect();
    let pairs = (t_vals.len() as u128 * y_vals.len() as u128).pow(2);
    enforce_budget(pairs, "t/y enumeration")?;

    // One pass per reported quantity; parts and total use separate loops.
    let sum_over = |filter: &(dyn Fn(u64, u64, u64, u64) -> bool + Sync)| -> u128 {
        t_vals
            .par_iter()
            .map(|&t1| {
                let mut acc = 0u128;
                for &t2 in &t_vals {
                    let dt = (t1 * t1) as i128 - (t2 * t2) as i128;
                    for &y1 in &y_vals {
                        let py1 = pow_i128(y1, y_pow);
                        for &y2 in &y_vals {
                            if !filter(t1, t2, y1, y2) {
                                continue;
                            }
                            let key = dt - (py1 - pow_i128(y2, y_pow));
                            if let Some(&c) = d.get(&key) {
                                acc += c;
                            }
                        }
                    }
                }
                acc
            })
            .sum()
    };

    let total = sum_over(&|_, _, _, _| true);
    let part1 = sum_over(&|t1, t2, _, _| t1 != t2);
    let part2 = sum_over(&|t1, t2, y1, y2| t1 == t2 && y1 != y2);
    let part3 = t_vals.len() as u128
        * y_vals.len() as u128
        * d.get(&0).copied().unwrap_or(0);

    SolutionCount {
        lemma,
        k,
        x,
        n,
        total,
        parts: vec![
            ("t1_ne_t2".into(), part1),
            ("t1_eq_t2_y1_ne_y2".into(), part2),
            ("t1_eq_t2_y1_eq_y2".into(), part3),
        ],
    }
    .checked()
}

fn pow_i128(v: u64, e: u32) -> i128 {
    (v as i128).pow(e)
}

/// `P = floor(N^(1/j))`, the window base for the doubled ranges `(P, 2P]`.
///
/// The dyadic normalization `N/4 < P^j <= N` holds once N is large relative
/// to 4^j; at desk scale for big j no integer satisfies it, so only
/// `P^j <= N` is enforced and the floor root is the canonical choice.
fn doubled_window_base(n: u64, j: u32) -> Result<u64> {
    let p = integer_kth_root(n, j);
    if p == 0 {
        return Err(Error::Domain(format!("N = {n} too small for a {j}-th power window")));
    }
    Ok(p)
}

/// `t1^2 - t2^2 = y1^4 - y2^4 + Σ ± z^k`: parts split on `t1 = t2` and then
/// `y1 = y2`.
pub fn count_l24(k: u32, x: u32, n: u64) -> Result<SolutionCount> {
    count_mixed(LemmaKind::L24, 4, k, x, n)
}

/// `t1^2 - t2^2 = y1^3 - y2^3 + Σ ± z^k`: the cube variant of the same
/// decomposition.
pub fn count_l25(k: u32, x: u32, n: u64) -> Result<SolutionCount> {
    count_mixed(LemmaKind::L25, 3, k, x, n)
}

/// The second-order forward difference of `t -> t^3` with steps `h1, h2`:
/// `3 h1 h2 (2t + h1 + h2)`, exact, equal to the four-term expansion.
pub fn delta_forward(t: i64, h1: i64, h2: i64) -> Result<i64> {
    let overflow = || Error::Capacity("forward difference overflows the working width".into());
    let spread = (2 * t as i128)
        .checked_add(h1 as i128)
        .and_then(|v| v.checked_add(h2 as i128))
        .ok_or_else(overflow)?;
    let v = (3 * h1 as i128)
        .checked_mul(h2 as i128)
        .and_then(|v| v.checked_mul(spread))
        .ok_or_else(overflow)?;
    i64::try_from(v).map_err(|_| overflow())
}

/// Count solutions of `3 h1 h2 (2t + h1 + h2) = p_1^k + … - q_x^k` with
/// `P3 <= t <= 2 P3`, `|h_i| < P3`, and p, q prime in `(P_k, 2 P_k]`.
/// Parts: vanishing and non-vanishing difference.
pub fn count_l26(k: u32, x: u32, n: u64) -> Result<SolutionCount> {
    if k < 2 || x < 1 {
        return Err(Error::Domain("l26 counter needs k >= 2, x >= 1".into()));
    }
    let p3 = doubled_window_base(n, 3)?;
    let pk = doubled_window_base(n, k)?;
    let z_powers = power_values(k, pk, 2 * pk, true)?;
    let d = diff_distribution(&fold_sums(&z_powers, x)?)?;

    let h_range: Vec<i64> = (-(p3 as i64 - 1)..=(p3 as i64 - 1)).collect();
    let t_count = p3 + 1; // P3 <= t <= 2 P3, both ends inclusive
    enforce_budget(t_count as u128 * (h_range.len() as u128).pow(2), "t/h enumeration")?;

    let sum_over = |want_zero: Option<bool>| -> u128 {
        (p3 as i64..=2 * p3 as i64)
            .into_par_iter()
            .map(|t| {
                let mut acc = 0u128;
                for &h1 in &h_range {
                    for &h2 in &h_range {
                        let delta =
                            3i128 * h1 as i128 * h2 as i128 * (2 * t as i128 + h1 as i128 + h2 as i128);
                        match want_zero {
                            Some(true) if delta != 0 => continue,
                            Some(false) if delta == 0 => continue,
                            _ => {}
                        }
                        if let Some(&c) = d.get(&delta) {
                            acc += c;
                        }
                    }
                }
                acc
            })
            .sum()
    };

    let total = sum_over(None);
    let zero = sum_over(Some(true));
    let nonzero = sum_over(Some(false));

    SolutionCount {
        lemma: LemmaKind::L26,
        k,
        x,
        n,
        total,
        parts: vec![("delta_zero".into(), zero), ("delta_nonzero".into(), nonzero)],
    }
    .checked()
}

/// Which counter a growth-slope fit runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SlopeCounter {
    Hua { window: Window, prime_only: bool },
    L23,
    L24,
    L25,
    L26,
}

/// Least-squares slope of `ln(count)` against `ln(N)` over the given sizes.
/// Returns the slope and the series; sizes with zero count are skipped, and
/// fewer than two usable sizes is an error.
pub fn growth_slope(
    counter: SlopeCounter,
    k: u32,
    xm: u32,
    n_list: &[u64],
) -> Result<(f64, Vec<(u64, u128)>)> {
    let mut series = Vec::new();
    for &n in n_list {
        let count = match counter {
            SlopeCounter::Hua { window, prime_only } => {
                count_equal_power_sums(k, xm, n, window, prime_only)?
            }
            SlopeCounter::L23 => count_l23(k, xm, n)?.total,
            SlopeCounter::L24 => count_l24(k, xm, n)?.total,
            SlopeCounter::L25 => count_l25(k, xm, n)?.total,
            SlopeCounter::L26 => count_l26(k, xm, n)?.total,
        };
        series.push((n, count));
    }
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|&&(_, c)| c > 0)
        .map(|&(n, c)| ((n as f64).ln(), (c as f64).ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::Domain(format!(
            "growth slope needs at least two nonzero counts, got {}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    Ok((slope, series))
}

/// Verifies every entry of a witnessed solution is prime; used by tests and
/// the CLI when cross-checking prime-restricted counters.
pub fn all_prime(values: &[u64]) -> bool {
    values.iter().all(|&v| is_prime64(v))
}
