//! Exact integer and prime primitives shared by every other module.
//!
//! - [`sieve_primes`] — sieve of Eratosthenes with an optional persistent
//!   cache (`WG_CACHE_DIR`); cached files reload bit-identically.
//! - [`is_prime64`] — deterministic Miller–Rabin over a fixed witness set
//!   that is known sufficient for the full 64-bit range.
//! - [`integer_kth_root`] — floor k-th root without floating point at the
//!   boundary.
//! - [`PowerClass`] / [`powers_in_window`] — the prime k-th powers lying in a
//!   dyadic `(N/4, N]` or full `[2^k, N]` window, with natural-log weights.
//!
//! All powers are computed in 128-bit exact arithmetic; overflow is a hard
//! capacity error, never a wrap.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest sieve limit accepted by [`sieve_primes`].
pub const SIEVE_LIMIT_MAX: u64 = 1 << 40;

/// Environment variable selecting the sieve cache directory. Unset disables
/// caching.
pub const CACHE_DIR_ENV: &str = "WG_CACHE_DIR";

const CACHE_MAGIC: &[u8; 4] = b"WGP1";

/// Sieved primes up to a limit, with index-aligned natural logarithms.
///
/// Immutable after construction; safe to share across workers.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    logs: Vec<f64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// `logs()[i] == primes()[i].ln()`.
    pub fn logs(&self) -> &[f64] {
        &self.logs
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    fn from_primes(limit: u64, primes: Vec<u64>) -> Self {
        let logs = primes.iter().map(|&p| (p as f64).ln()).collect();
        PrimeTable { limit, primes, logs }
    }
}

/// Sieve all primes `<= limit`, consulting the cache directory named by
/// `WG_CACHE_DIR` when it is set.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    let dir = std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from);
    sieve_primes_cached(limit, dir.as_deref())
}

/// Sieve all primes `<= limit` with an explicit cache directory (`None`
/// disables caching).
///
/// The cache is advisory: a missing, truncated, or mismatched file triggers a
/// recompute and rewrite. Files are keyed by limit and reload bit-identically.
pub fn sieve_primes_cached(limit: u64, cache_dir: Option<&Path>) -> Result<PrimeTable> {
    if !(2..=SIEVE_LIMIT_MAX).contains(&limit) {
        return Err(Error::Capacity(format!(
            "sieve limit {limit} outside supported range 2..=2^40"
        )));
    }
    if let Some(dir) = cache_dir {
        let path = cache_path(dir, limit);
        if let Some(primes) = try_load_cache(&path, limit) {
            return Ok(PrimeTable::from_primes(limit, primes));
        }
        let primes = eratosthenes(limit);
        // Best effort: a failed write must not fail the sieve.
        let _ = write_cache(dir, &path, limit, &primes);
        return Ok(PrimeTable::from_primes(limit, primes));
    }
    Ok(PrimeTable::from_primes(limit, eratosthenes(limit)))
}

fn cache_path(dir: &Path, limit: u64) -> PathBuf {
    dir.join(format!("primes_{limit}.wgp1"))
}

/// Plain sieve over the odd numbers, one bit each.
fn eratosthenes(limit: u64) -> Vec<u64> {
    debug_assert!(limit >= 2);
    let mut primes = vec![2u64];
    if limit < 3 {
        return primes;
    }
    // Bit i represents the odd number 2i + 3.
    let n_odds = ((limit - 3) / 2 + 1) as usize;
    let mut composite = vec![0u64; n_odds.div_ceil(64)];
    let is_set = |bits: &[u64], i: usize| bits[i / 64] >> (i % 64) & 1 == 1;
    let mut p = 3u64;
    while p * p <= limit {
        let i = ((p - 3) / 2) as usize;
        if !is_set(&composite, i) {
            let mut m = p * p;
            while m <= limit {
                let j = ((m - 3) / 2) as usize;
                composite[j / 64] |= 1 << (j % 64);
                m += 2 * p;
            }
        }
        p += 2;
    }
    for i in 0..n_odds {
        if !is_set(&composite, i) {
            primes.push(2 * i as u64 + 3);
        }
    }
    primes
}

// Cache file layout: magic "WGP1", little-endian u64 limit, little-endian u64
// count, then the primes as deltas from the previous value (starting at 0)
// encoded as unsigned LEB128 varints.

fn write_cache(dir: &Path, path: &Path, limit: u64, primes: &[u64]) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut buf = Vec::with_capacity(16 + primes.len());
    buf.extend_from_slice(CACHE_MAGIC);
    buf.extend_from_slice(&limit.to_le_bytes());
    buf.extend_from_slice(&(primes.len() as u64).to_le_bytes());
    let mut prev = 0u64;
    for &p in primes {
        leb128_write(&mut buf, p - prev);
        prev = p;
    }
    // Write-then-rename so concurrent readers never observe a torn file.
    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&buf)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

fn try_load_cache(path: &Path, limit: u64) -> Option<Vec<u64>> {
    let data = fs::read(path).ok()?;
    if data.len() < 20 || &data[0..4] != CACHE_MAGIC {
        return None;
    }
    let file_limit = u64::from_le_bytes(data[4..12].try_into().ok()?);
    if file_limit != limit {
        return None;
    }
    let count = u64::from_le_bytes(data[12..20].try_into().ok()?) as usize;
    let mut primes = Vec::with_capacity(count);
    let mut pos = 20usize;
    let mut prev = 0u64;
    for _ in 0..count {
        let (delta, used) = leb128_read(&data[pos..])?;
        pos += used;
        prev = prev.checked_add(delta)?;
        primes.push(prev);
    }
    if pos != data.len() || primes.last().is_some_and(|&p| p > limit) {
        return None;
    }
    Some(primes)
}

fn leb128_write(buf: &mut Vec<u8>, mut v: u64) {
    loop {
        let byte = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            buf.push(byte);
            return;
        }
        buf.push(byte | 0x80);
    }
}

fn leb128_read(data: &[u8]) -> Option<(u64, usize)> {
    let mut v = 0u64;
    for (i, &byte) in data.iter().enumerate().take(10) {
        v |= ((byte & 0x7f) as u64) << (7 * i);
        if byte & 0x80 == 0 {
            return Some((v, i + 1));
        }
    }
    None
}

/// Deterministic primality for the full 64-bit range.
///
/// Trial division by a few small primes, then Miller–Rabin over the seven
/// witnesses 2, 325, 9375, 28178, 450775, 9780504, 1795265022, a set verified
/// to have no strong pseudoprime below 2^64.
pub fn is_prime64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for a in [2u64, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// `base^exp` in exact integer arithmetic, `None` on overflow of u64.
pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base as u128)?;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Floor of the k-th root: the unique `r` with `r^k <= n < (r+1)^k`.
///
/// Pure integer binary search; no floating point anywhere near the boundary.
pub fn integer_kth_root(n: u64, k: u32) -> u64 {
    assert!(k >= 1, "k-th root requires k >= 1");
    if k == 1 || n <= 1 {
        return n;
    }
    if k >= 64 {
        return 1;
    }
    // r < 2^(64/k) + 1, so the search window is small.
    let mut lo = 1u64; // r >= 1 since n >= 1
    let mut hi = (1u64 << (64 / k as u64 + 1)).min(n);
    // Invariant: lo^k <= n < hi^k (hi^k may overflow, which also means > n).
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match checked_pow(mid, k) {
            Some(p) if p <= n => lo = mid,
            _ => hi = mid,
        }
    }
    lo
}

/// Windows in which a power `p^k` may lie, relative to a cap `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    /// `N/4 < p^k <= N`; lower bound strict, upper inclusive.
    Dyadic,
    /// `2^k <= p^k <= N`, i.e. every prime power up to the cap.
    Full,
}

impl Window {
    /// Exact membership of the power `q` (no integer division: the dyadic
    /// lower bound is tested as `4q > cap`).
    pub fn contains(self, q: u64, cap: u64) -> bool {
        match self {
            Window::Dyadic => 4 * (q as u128) > cap as u128 && q <= cap,
            Window::Full => q <= cap,
        }
    }
}

/// The prime k-th powers in a window: entries `(p, p^k, ln p)` ascending in p.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerClass {
    pub k: u32,
    pub cap: u64,
    pub window: Window,
    entries: Vec<(u64, u64, f64)>,
}

impl PowerClass {
    pub fn entries(&self) -> &[(u64, u64, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The powers alone, ascending.
    pub fn powers(&self) -> Vec<u64> {
        self.entries.iter().map(|&(_, q, _)| q).collect()
    }

    /// `(power, weight)` pairs for exponential-sum evaluation.
    pub fn terms(&self) -> Vec<(u64, f64)> {
        self.entries.iter().map(|&(_, q, w)| (q, w)).collect()
    }

    /// Sum of `(ln p)^2` over the class (the one-term Parseval value).
    pub fn sum_log_sq(&self) -> f64 {
        self.entries.iter().map(|&(_, _, w)| w * w).sum()
    }
}

/// Build the [`PowerClass`] for exponent `k` and cap `cap`, sieving primes as
/// needed.
///
/// Caps too small to admit any power yield an empty class rather than an
/// error; only `k < 2` and overflow of `p^k` are rejected.
pub fn powers_in_window(k: u32, cap: u64, window: Window) -> Result<PowerClass> {
    if k < 2 {
        return Err(Error::Domain(format!("power class requires k >= 2, got {k}")));
    }
    let root = integer_kth_root(cap, k);
    if root < 2 {
        return Ok(PowerClass { k, cap, window, entries: Vec::new() });
    }
    let table = sieve_primes(root.max(2))?;
    powers_from_table(&table, k, cap, window)
}

/// As [`powers_in_window`], reusing an already-sieved table.
///
/// The table must cover `floor(cap^(1/k))`.
pub fn powers_from_table(
    table: &PrimeTable,
    k: u32,
    cap: u64,
    window: Window,
) -> Result<PowerClass> {
    if k < 2 {
        return Err(Error::Domain(format!("power class requires k >= 2, got {k}")));
    }
    let root = integer_kth_root(cap, k);
    if table.limit() < root {
        return Err(Error::Domain(format!(
            "prime table limit {} below required root {root}",
            table.limit()
        )));
    }
    let mut entries = Vec::new();
    for (&p, &w) in table.primes().iter().zip(table.logs()) {
        if p > root {
            break;
        }
        let q = checked_pow(p, k).ok_or_else(|| {
            Error::Capacity(format!("{p}^{k} overflows the 64-bit working width"))
        })?;
        if window.contains(q, cap) {
            entries.push((p, q, w));
        }
    }
    Ok(PowerClass { k, cap, window, entries })
}

/// The k-th powers of plain integers `y >= 1` in a window, unit weights.
///
/// Used by the mean-value counters and the unweighted exponential sums, whose
/// variables range over integers rather than primes.
pub fn integer_powers_in_window(k: u32, cap: u64, window: Window) -> Result<Vec<(u64, f64)>> {
    if k < 1 {
        return Err(Error::Domain("integer powers require k >= 1".into()));
    }
    let root = integer_kth_root(cap, k);
    let mut out = Vec::new();
    for y in 1..=root {
        let q = checked_pow(y, k)
            .ok_or_else(|| Error::Capacity(format!("{y}^{k} overflows u64")))?;
        if window.contains(q, cap) {
            out.push((q, 1.0));
        }
    }
    Ok(out)
}
