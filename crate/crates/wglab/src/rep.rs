//! Counting and enumerating representations `n = Σ p_i^{k_i}` for the four
//! forms.
//!
//! Three routes to the same numbers, kept deliberately independent so they
//! can cross-check each other:
//!
//! - [`count_representations`] / [`count_representations_weighted`] — direct
//!   depth-first counting at a single target.
//! - [`convolve_all`] / [`convolve_all_weighted`] — exact discrete
//!   convolution of the power-class indicator arrays, all targets at once.
//! - [`enumerate_exceptions`] — a shifted-OR sumset bitmap over the whole
//!   range, reporting the targets of the right parity with no representation.
//!
//! All routes are deterministic and independent of worker count: parallel
//! loops partition the output index range, and each cell is reduced in a
//! fixed order.

use std::collections::BTreeMap;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, integer_kth_root, powers_from_table, PowerClass, Window};
use crate::forms::{FormSpec, Witness};
use crate::{Error, Result};

/// Upper bound for single-target counting (`p^k` stays well inside u64).
pub const MAX_COUNT_TARGET: u64 = 1 << 50;
/// Upper bound for bitmap enumeration (one bit per integer).
pub const MAX_ENUM_TARGET: u64 = 1_000_000_000;
/// Largest convolution array we are willing to allocate.
pub const MAX_CONVOLVE_LEN: u64 = 1 << 27;

/// Build the power class for every slot of the form at scale `cap`,
/// sieving once.
pub fn form_classes(form: &FormSpec, cap: u64) -> Result<Vec<PowerClass>> {
    let exps = form.exponents();
    let root = exps.iter().map(|&e| integer_kth_root(cap, e)).max().unwrap_or(0);
    let table = arith::sieve_primes(root.max(2))?;
    exps.iter().map(|&e| powers_from_table(&table, e, cap, form.window)).collect()
}

/// Exact number of ordered prime tuples solving the form at `n`, with every
/// power in the form's window at scale `scale`.
///
/// For the full window the scale is usually `n` itself (a power above `n`
/// cannot occur in a sum equal to `n`); the dyadic window needs the ambient
/// `N` since it constrains powers from below as well.
pub fn count_representations(n: u64, form: &FormSpec, scale: u64) -> Result<u64> {
    if n == 0 || n > MAX_COUNT_TARGET {
        return Err(Error::Capacity(format!("target {n} outside 1..=2^50")));
    }
    let classes = form_classes(form, scale)?;
    Ok(count_rec(&classes, n))
}

fn count_rec(classes: &[PowerClass], rem: u64) -> u64 {
    match classes {
        [] => u64::from(rem == 0),
        [last] => u64::from(last.entries().binary_search_by_key(&rem, |&(_, q, _)| q).is_ok()),
        [head, tail @ ..] => {
            let mut total = 0;
            for &(_, q, _) in head.entries() {
                if q > rem {
                    break;
                }
                total += count_rec(tail, rem - q);
            }
            total
        }
    }
}

/// Weighted representation count: `Σ Π ln p_i` over the same tuples.
pub fn count_representations_weighted(n: u64, form: &FormSpec, scale: u64) -> Result<f64> {
    if n == 0 || n > MAX_COUNT_TARGET {
        return Err(Error::Capacity(format!("target {n} outside 1..=2^50")));
    }
    let classes = form_classes(form, scale)?;
    Ok(weighted_rec(&classes, n, 1.0))
}

fn weighted_rec(classes: &[PowerClass], rem: u64, w: f64) -> f64 {
    match classes {
        [] => {
            if rem == 0 {
                w
            } else {
                0.0
            }
        }
        [last] => match last.entries().binary_search_by_key(&rem, |&(_, q, _)| q) {
            Ok(i) => w * last.entries()[i].2,
            Err(_) => 0.0,
        },
        [head, tail @ ..] => {
            let mut total = 0.0;
            for &(_, q, lw) in head.entries() {
                if q > rem {
                    break;
                }
                total += weighted_rec(tail, rem - q, w * lw);
            }
            total
        }
    }
}

/// The lexicographically least representation of `n`, if one exists in the
/// window at scale `scale`.
pub fn find_witness(n: u64, form: &FormSpec, scale: u64) -> Result<Option<Witness>> {
    if n == 0 || n > MAX_COUNT_TARGET {
        return Err(Error::Capacity(format!("target {n} outside 1..=2^50")));
    }
    let classes = form_classes(form, scale)?;
    let mut primes = Vec::with_capacity(classes.len());
    if witness_rec(&classes, n, &mut primes) {
        Ok(Some(Witness { primes, check: n }))
    } else {
        Ok(None)
    }
}

fn witness_rec(classes: &[PowerClass], rem: u64, primes: &mut Vec<u64>) -> bool {
    match classes {
        [] => rem == 0,
        [last] => match last.entries().binary_search_by_key(&rem, |&(_, q, _)| q) {
            Ok(i) => {
                primes.push(last.entries()[i].0);
                true
            }
            Err(_) => false,
        },
        [head, tail @ ..] => {
            for &(p, q, _) in head.entries() {
                if q > rem {
                    return false;
                }
                primes.push(p);
                if witness_rec(tail, rem - q, primes) {
                    return true;
                }
                primes.pop();
            }
            false
        }
    }
}

fn convolve_len(classes: &[PowerClass]) -> Result<usize> {
    if classes.iter().any(|c| c.is_empty()) {
        return Ok(1);
    }
    let len: u64 =
        classes.iter().map(|c| c.entries().last().unwrap().1).sum::<u64>() + 1;
    if len > MAX_CONVOLVE_LEN {
        return Err(Error::Capacity(format!(
            "convolution array of {len} entries exceeds the {MAX_CONVOLVE_LEN} budget"
        )));
    }
    Ok(len as usize)
}

const PAR_CHUNK: usize = 1 << 14;

/// Exact representation counts for every target at once: entry `m` is the
/// number of ordered prime tuples with power sum `m`. The array extends to
/// the largest possible sum, so its total is the product of the class sizes.
pub fn convolve_all(form: &FormSpec, scale: u64) -> Result<Vec<u64>> {
    let classes = form_classes(form, scale)?;
    let final_len = convolve_len(&classes)?;
    let mut acc = vec![0u64; 1];
    acc[0] = 1;
    let mut len = 1usize;
    for class in &classes {
        if class.is_empty() {
            return Ok(vec![0; final_len]);
        }
        len += class.entries().last().unwrap().1 as usize;
        let prev = acc;
        let mut next = vec![0u64; len];
        next.par_chunks_mut(PAR_CHUNK).enumerate().for_each(|(ci, chunk)| {
            let base = ci * PAR_CHUNK;
            for (off, cell) in chunk.iter_mut().enumerate() {
                let idx = base + off;
                let mut sum = 0u64;
                for &(_, q, _) in class.entries() {
                    let q = q as usize;
                    if q > idx {
                        break;
                    }
                    if let Some(&v) = prev.get(idx - q) {
                        sum += v;
                    }
                }
                *cell = sum;
            }
        });
        acc = next;
    }
    Ok(acc)
}

/// Weighted convolution: entry `m` is `Σ Π ln p_i` over tuples with power
/// sum `m`. Each cell is accumulated in a fixed order, so the output is
/// byte-identical for any worker count.
pub fn convolve_all_weighted(form: &FormSpec, scale: u64) -> Result<Vec<f64>> {
    let classes = form_classes(form, scale)?;
    let final_len = convolve_len(&classes)?;
    let mut acc = vec![0.0f64; 1];
    acc[0] = 1.0;
    let mut len = 1usize;
    for class in &classes {
        if class.is_empty() {
            return Ok(vec![0.0; final_len]);
        }
        len += class.entries().last().unwrap().1 as usize;
        let prev = acc;
        let mut next = vec![0.0f64; len];
        next.par_chunks_mut(PAR_CHUNK).enumerate().for_each(|(ci, chunk)| {
            let base = ci * PAR_CHUNK;
            for (off, cell) in chunk.iter_mut().enumerate() {
                let idx = base + off;
                let mut sum = 0.0f64;
                for &(_, q, w) in class.entries() {
                    let q = q as usize;
                    if q > idx {
                        break;
                    }
                    if let Some(&v) = prev.get(idx - q) {
                        sum += v * w;
                    }
                }
                *cell = sum;
            }
        });
        acc = next;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Exceptional-set enumeration over a sumset bitmap.
// ---------------------------------------------------------------------------

/// Plain bitset over `0..=max`, word-parallel shifted OR.
struct SumBitmap {
    words: Vec<u64>,
    max: u64,
}

impl SumBitmap {
    fn new(max: u64) -> Self {
        SumBitmap { words: vec![0u64; (max as usize + 64) / 64], max }
    }

    #[inline]
    fn set(&mut self, i: u64) {
        self.words[(i / 64) as usize] |= 1 << (i % 64);
    }

    #[inline]
    fn get(&self, i: u64) -> bool {
        self.words[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    /// `out = ⋃_s (self << s)` clipped to `0..=max`, for the given shifts.
    fn shifted_or(&self, shifts: &[u64]) -> SumBitmap {
        let mut out = SumBitmap::new(self.max);
        let src = &self.words;
        out.words.par_chunks_mut(PAR_CHUNK).enumerate().for_each(|(ci, chunk)| {
            let base = ci * PAR_CHUNK;
            for &s in shifts {
                let sw = (s / 64) as usize;
                let sb = (s % 64) as u32;
                for (off, word) in chunk.iter_mut().enumerate() {
                    let w = base + off;
                    if w < sw {
                        continue;
                    }
                    let lo = src.get(w - sw).copied().unwrap_or(0);
                    let mut v = lo << sb;
                    if sb > 0 && w > sw {
                        v |= src.get(w - sw - 1).copied().unwrap_or(0) >> (64 - sb);
                    }
                    *word |= v;
                }
            }
        });
        // Bits above max can only be junk from the final partial word.
        let top = out.words.len() * 64;
        if top as u64 > out.max {
            let extra = top as u64 - out.max - 1;
            if extra > 0 {
                let last = out.words.len() - 1;
                out.words[last] &= u64::MAX >> extra;
            }
        }
        out
    }
}

/// One dyadic block of targets and its exceptional count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicBlock {
    pub lo: u64,
    pub hi: u64,
    pub exceptional: u64,
}

/// The exceptional set of a form up to `N`, with per-block counts and a
/// sample of verified witnesses for representable targets.
#[derive(Debug, Clone, Serialize)]
pub struct ExceptionReport {
    pub form: FormSpec,
    #[serde(rename = "N")]
    pub n: u64,
    pub window: Window,
    pub exceptional_count: u64,
    /// Count excluding targets below the least representable one, so the
    /// trivially-too-small range does not pollute asymptotic comparisons.
    pub exceptional_trimmed_count: u64,
    /// Smallest representable target of the counted class, if any.
    pub min_representable: Option<u64>,
    /// The extra local condition applied, if any.
    pub residue_filter: Option<ResidueFilter>,
    pub blocks: Vec<DyadicBlock>,
    pub sample_witnesses: BTreeMap<u64, Witness>,
    /// The full sorted list; serialized separately as raw binary, not JSON.
    #[serde(skip)]
    pub exceptional: Vec<u64>,
}

impl ExceptionReport {
    /// Raw artifact for large runs: the sorted exceptional targets as
    /// little-endian 64-bit integers.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        for &n in &self.exceptional {
            w.write_all(&n.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

/// An extra local condition on counted targets: keep only `n` with
/// `n mod modulus` among the listed residues. Off by default; parity is the
/// only condition the counted classes carry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueFilter {
    pub modulus: u64,
    pub residues: Vec<u64>,
}

impl ResidueFilter {
    pub fn new(modulus: u64, residues: Vec<u64>) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::Domain("residue filter needs modulus >= 2".into()));
        }
        if residues.iter().any(|&r| r >= modulus) {
            return Err(Error::Domain("residue out of range for the modulus".into()));
        }
        Ok(ResidueFilter { modulus, residues })
    }

    pub fn admits(&self, n: u64) -> bool {
        self.residues.contains(&(n % self.modulus))
    }
}

/// Report knobs. Witness sampling is the only randomized part of a report
/// and is fully determined by the seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExceptionParams {
    pub witness_samples: usize,
    pub seed: u64,
    /// Narrows the counted class beyond parity when present.
    pub residue_filter: Option<ResidueFilter>,
}

impl Default for ExceptionParams {
    fn default() -> Self {
        ExceptionParams { witness_samples: 8, seed: 0, residue_filter: None }
    }
}

/// Enumerate every target of the form's parity in `1..=N` with no
/// representation, via the sumset bitmap of the power classes.
///
/// Requires the full window. Output is identical for any worker count.
pub fn enumerate_exceptions(
    form: &FormSpec,
    n: u64,
    params: ExceptionParams,
) -> Result<ExceptionReport> {
    if form.window != Window::Full {
        return Err(Error::Domain(
            "exceptional sets are defined with the full window".into(),
        ));
    }
    if n == 0 || n > MAX_ENUM_TARGET {
        return Err(Error::Capacity(format!(
            "enumeration bound {n} outside 1..={MAX_ENUM_TARGET}"
        )));
    }
    let classes = form_classes(form, n)?;
    let representable = representable_bitmap(&classes, n);
    let parity = form.parity();
    let admits = |t: u64| params.residue_filter.as_ref().is_none_or(|f| f.admits(t));

    let mut exceptional = Vec::new();
    let mut min_representable = None;
    let mut t = if parity.matches(1) { 1 } else { 2 };
    while t <= n {
        if admits(t) {
            if representable.get(t) {
                if min_representable.is_none() {
                    min_representable = Some(t);
                }
            } else {
                exceptional.push(t);
            }
        }
        t += 2;
    }

    let trimmed = match min_representable {
        Some(m) => exceptional.iter().filter(|&&e| e >= m).count() as u64,
        None => 0,
    };

    let blocks = dyadic_blocks(&exceptional, n);
    let sample_witnesses = sample_witnesses(form, n, &representable, min_representable, &params)?;

    Ok(ExceptionReport {
        form: *form,
        n,
        window: form.window,
        exceptional_count: exceptional.len() as u64,
        exceptional_trimmed_count: trimmed,
        min_representable,
        residue_filter: params.residue_filter,
        blocks,
        sample_witnesses,
        exceptional,
    })
}

fn representable_bitmap(classes: &[PowerClass], n: u64) -> SumBitmap {
    if classes.iter().any(|c| c.is_empty()) {
        return SumBitmap::new(n);
    }
    let mut acc = SumBitmap::new(n);
    for &(_, q, _) in classes[0].entries() {
        if q <= n {
            acc.set(q);
        }
    }
    for class in &classes[1..] {
        let shifts: Vec<u64> = class.powers().into_iter().filter(|&q| q <= n).collect();
        if shifts.is_empty() {
            return SumBitmap::new(n);
        }
        acc = acc.shifted_or(&shifts);
    }
    acc
}

/// Blocks `(N/2, N], (N/4, N/2], ...` down to `[1, _]`, high to low.
fn dyadic_blocks(exceptional: &[u64], n: u64) -> Vec<DyadicBlock> {
    let mut blocks = Vec::new();
    let mut hi = n;
    while hi > 1 {
        let lo = hi / 2 + 1;
        blocks.push(DyadicBlock { lo, hi, exceptional: 0 });
        hi /= 2;
    }
    blocks.push(DyadicBlock { lo: 1, hi: hi.max(1), exceptional: 0 });
    for &e in exceptional {
        // Blocks are few; linear scan is fine and keeps the ranges exact.
        for b in blocks.iter_mut() {
            if e >= b.lo && e <= b.hi {
                b.exceptional += 1;
                break;
            }
        }
    }
    blocks
}

fn sample_witnesses(
    form: &FormSpec,
    n: u64,
    representable: &SumBitmap,
    min_representable: Option<u64>,
    params: &ExceptionParams,
) -> Result<BTreeMap<u64, Witness>> {
    let mut out = BTreeMap::new();
    let Some(min) = min_representable else {
        return Ok(out);
    };
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut attempts = 0usize;
    while out.len() < params.witness_samples && attempts < params.witness_samples * 64 {
        attempts += 1;
        let raw = rng.gen_range(min..=n);
        let t = match form.parity() {
            crate::forms::Parity::Even => raw & !1,
            crate::forms::Parity::Odd => raw | 1,
        };
        if t < min || t > n || !representable.get(t) || out.contains_key(&t) {
            continue;
        }
        if !params.residue_filter.as_ref().is_none_or(|f| f.admits(t)) {
            continue;
        }
        let w = find_witness(t, form, n)?
            .ok_or_else(|| Error::Identity(format!("bitmap marks {t} representable but witness search failed")))?;
        if !w.verify(form, t) {
            return Err(Error::Identity(format!("witness for {t} failed verification")));
        }
        out.insert(t, w);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::FormKind;

    fn form(kind: FormKind, k: u32, window: Window) -> FormSpec {
        FormSpec::new(kind, k, window).unwrap()
    }

    #[test]
    fn count_140_has_all_twos_witness() {
        let f = form(FormKind::F236k, 6, Window::Full);
        assert!(count_representations(140, &f, 140).unwrap() >= 1);
        let w = find_witness(140, &f, 140).unwrap().unwrap();
        assert_eq!(w.primes, vec![2, 2, 2, 2]);
        assert!(w.verify(&f, 140));
    }

    #[test]
    fn count_below_minimum_is_zero() {
        let f = form(FormKind::F236k, 6, Window::Full);
        assert_eq!(count_representations(10, &f, 10).unwrap(), 0);
        assert_eq!(find_witness(4, &f, 4).unwrap(), None);
    }

    #[test]
    fn four_cubes_105_witness() {
        let f = form(FormKind::F3333k, 4, Window::Full);
        assert!(count_representations(105, &f, 105).unwrap() >= 1);
        let w = find_witness(105, &f, 105).unwrap().unwrap();
        // 8 + 27 + 27 + 27 + 16; the least tuple puts small primes first.
        assert_eq!(w.primes, vec![2, 3, 3, 3, 2]);
        assert!(w.verify(&f, 105));
    }

    #[test]
    fn witness_141_verifies_if_present() {
        let f = form(FormKind::F236k, 6, Window::Full);
        if let Some(w) = find_witness(141, &f, 141).unwrap() {
            assert!(w.verify(&f, 141));
        }
    }

    #[test]
    fn weighted_count_matches_manual_products() {
        let f = form(FormKind::F236k, 6, Window::Full);
        // Naive weighted sum over every tuple, recomputed here by hand.
        let classes = form_classes(&f, 200).unwrap();
        let mut expect = 0.0f64;
        for &(_, q1, w1) in classes[0].entries() {
            for &(_, q2, w2) in classes[1].entries() {
                for &(_, q3, w3) in classes[2].entries() {
                    for &(_, q4, w4) in classes[3].entries() {
                        if q1 + q2 + q3 + q4 == 140 {
                            expect += w1 * w2 * w3 * w4;
                        }
                    }
                }
            }
        }
        let got = count_representations_weighted(140, &f, 200).unwrap();
        assert!((got - expect).abs() <= 1e-9 * expect.abs());
        assert!(expect > 0.0);
    }

    #[test]
    fn convolve_total_is_class_size_product() {
        let f = form(FormKind::F236k, 6, Window::Full);
        let classes = form_classes(&f, 1000).unwrap();
        let product: u64 = classes.iter().map(|c| c.len() as u64).product();
        let conv = convolve_all(&f, 1000).unwrap();
        assert_eq!(conv.iter().sum::<u64>(), product);
        // Zero below the minimal possible sum.
        for (i, &c) in conv.iter().enumerate().take(f.min_possible_sum() as usize) {
            assert_eq!(c, 0, "index {i}");
        }
    }

    #[test]
    fn convolve_matches_direct_counts() {
        let f = form(FormKind::F236k, 6, Window::Dyadic);
        let conv = convolve_all(&f, 2048).unwrap();
        for n in (1..conv.len() as u64).step_by(97) {
            assert_eq!(conv[n as usize], count_representations(n, &f, 2048).unwrap(), "n={n}");
        }
    }

    #[test]
    fn dyadic_counts_below_full() {
        let fd = form(FormKind::F244k, 4, Window::Dyadic);
        let ff = form(FormKind::F244k, 4, Window::Full);
        let cd = convolve_all(&fd, 4096).unwrap();
        let cf = convolve_all(&ff, 4096).unwrap();
        for i in 0..cd.len().min(cf.len()) {
            assert!(cd[i] <= cf[i], "n={i}");
        }
    }

    #[test]
    fn exceptions_everything_below_minimum() {
        let f = form(FormKind::F236k, 6, Window::Full);
        let r = enumerate_exceptions(&f, 139, ExceptionParams::default()).unwrap();
        // All even targets in 1..=139 are exceptional (minimal sum is 140).
        assert_eq!(r.exceptional_count, 69);
        assert_eq!(r.exceptional_trimmed_count, 0);
        assert_eq!(r.min_representable, None);
        assert!(r.sample_witnesses.is_empty());
        assert_eq!(r.exceptional.first(), Some(&2));
        assert_eq!(r.exceptional.last(), Some(&138));
    }

    #[test]
    fn exceptions_match_naive_oracle_small() {
        let f = form(FormKind::F3333k, 4, Window::Full);
        let n = 3000u64;
        let r = enumerate_exceptions(&f, n, ExceptionParams::default()).unwrap();
        // Independent oracle: mark sums by plain nested loops.
        let classes = form_classes(&f, n).unwrap();
        let mut hit = vec![false; n as usize + 1];
        for &(_, a, _) in classes[0].entries() {
            for &(_, b, _) in classes[1].entries() {
                for &(_, c, _) in classes[2].entries() {
                    for &(_, d, _) in classes[3].entries() {
                        for &(_, e, _) in classes[4].entries() {
                            let s = a + b + c + d + e;
                            if s <= n {
                                hit[s as usize] = true;
                            }
                        }
                    }
                }
            }
        }
        let oracle: Vec<u64> =
            (1..=n).filter(|&t| t % 2 == 1 && !hit[t as usize]).collect();
        assert_eq!(r.exceptional, oracle);
        // Parity purity and block totals.
        assert!(r.exceptional.iter().all(|&t| t % 2 == 1));
        let block_sum: u64 = r.blocks.iter().map(|b| b.exceptional).sum();
        assert_eq!(block_sum, r.exceptional_count);
    }

    #[test]
    fn exception_witnesses_verify() {
        let f = form(FormKind::F236k, 6, Window::Full);
        let r = enumerate_exceptions(
            &f,
            20_000,
            ExceptionParams { witness_samples: 6, seed: 42, ..ExceptionParams::default() },
        )
        .unwrap();
        assert_eq!(r.min_representable, Some(140));
        assert!(!r.sample_witnesses.is_empty());
        for (&t, w) in &r.sample_witnesses {
            assert!(w.verify(&f, t), "witness for {t}");
        }
        // Trimmed count discards exactly the sub-140 range.
        let below = r.exceptional.iter().filter(|&&e| e < 140).count() as u64;
        assert_eq!(r.exceptional_count - below, r.exceptional_trimmed_count);
    }

    #[test]
    fn exceptions_require_full_window() {
        let f = form(FormKind::F236k, 6, Window::Dyadic);
        assert!(matches!(
            enumerate_exceptions(&f, 1000, ExceptionParams::default()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn residue_filter_narrows_the_counted_class() {
        let f = form(FormKind::F3333k, 4, Window::Full);
        let n = 2000u64;
        let unfiltered = enumerate_exceptions(&f, n, ExceptionParams::default()).unwrap();
        let params = ExceptionParams {
            residue_filter: Some(ResidueFilter::new(3, vec![0]).unwrap()),
            ..ExceptionParams::default()
        };
        let filtered = enumerate_exceptions(&f, n, params).unwrap();
        let expect: Vec<u64> =
            unfiltered.exceptional.iter().copied().filter(|&t| t % 3 == 0).collect();
        assert_eq!(filtered.exceptional, expect);
        assert!(filtered.sample_witnesses.keys().all(|&t| t % 3 == 0 && t % 2 == 1));
        assert!(ResidueFilter::new(1, vec![0]).is_err());
        assert!(ResidueFilter::new(3, vec![3]).is_err());
    }

    #[test]
    fn reports_are_deterministic_across_worker_counts() {
        let f = form(FormKind::F235k, 5, Window::Full);
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| {
                enumerate_exceptions(&f, 30_000, ExceptionParams { witness_samples: 4, seed: 7, ..ExceptionParams::default() })
                    .unwrap()
                    .to_json()
            })
        };
        assert_eq!(run(1), run(8));
    }

    #[test]
    fn binary_artifact_is_le64() {
        let f = form(FormKind::F236k, 6, Window::Full);
        let r = enumerate_exceptions(&f, 200, ExceptionParams::default()).unwrap();
        let mut buf = Vec::new();
        r.write_binary(&mut buf).unwrap();
        assert_eq!(buf.len(), 8 * r.exceptional.len());
        assert_eq!(u64::from_le_bytes(buf[0..8].try_into().unwrap()), r.exceptional[0]);
    }
}
