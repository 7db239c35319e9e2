//! Prime exponential sums, arc dissections of the circle, and sampled
//! integrals with an exactness guarantee for full-interval moments.
//!
//! The sum under study is `S_k(α) = Σ (ln p) e(α p^k)` over the dyadic
//! window `N/4 < p^k <= N`. Two phase paths exist: for rational `α = a/b`
//! the phase is reduced mod 1 in exact integer arithmetic (`a·p^k` would
//! overflow a double long before it overflows u128), and for irrational
//! samples a double suffices at diagnostic scales.
//!
//! Uniform sampling of `|S|^{2m}` with more than `2mN` points integrates a
//! trigonometric polynomial below its bandwidth, so [`moment_integral`] is
//! exact up to floating error, not an approximation. The same mechanism
//! realizes the representation integral discretely in
//! [`sampled_rep_weights`].

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{integer_kth_root, powers_in_window, Window};
use crate::forms::FormSpec;
use crate::rep::form_classes;
use crate::{Error, Result};

const TAU: f64 = std::f64::consts::TAU;

/// A point on the circle, either exactly rational or a double.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Alpha {
    /// `num/den`, reduced mod 1 exactly during phase evaluation.
    Rational { num: i64, den: u64 },
    Real(f64),
}

impl Alpha {
    pub fn to_f64(self) -> f64 {
        match self {
            Alpha::Rational { num, den } => num as f64 / den as f64,
            Alpha::Real(a) => a,
        }
    }

    /// Parse `a/b` or a decimal literal.
    pub fn parse(s: &str) -> Result<Alpha> {
        if let Some((a, b)) = s.split_once('/') {
            let num = a.trim().parse::<i64>();
            let den = b.trim().parse::<u64>();
            match (num, den) {
                (Ok(num), Ok(den)) if den > 0 => Ok(Alpha::Rational { num, den }),
                _ => Err(Error::Domain(format!("cannot parse alpha from {s:?}"))),
            }
        } else {
            s.trim()
                .parse::<f64>()
                .map(Alpha::Real)
                .map_err(|_| Error::Domain(format!("cannot parse alpha from {s:?}")))
        }
    }
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
struct Compensated {
    sum: f64,
    c: f64,
}

impl Compensated {
    #[inline]
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.c += (self.sum - t) + v;
        } else {
            self.c += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    fn value(self) -> f64 {
        self.sum + self.c
    }
}

/// Evaluate `Σ w · e(α q)` over `(q, w)` terms with compensated summation.
pub fn eval_terms(alpha: Alpha, terms: &[(u64, f64)]) -> Complex64 {
    let mut re = Compensated::default();
    let mut im = Compensated::default();
    match alpha {
        Alpha::Rational { num, den } => {
            let den_i = den as i128;
            let a = (num as i128).rem_euclid(den_i);
            for &(q, w) in terms {
                let r = (a * (q as i128 % den_i)).rem_euclid(den_i) as f64;
                let phase = TAU * r / den as f64;
                re.add(w * phase.cos());
                im.add(w * phase.sin());
            }
        }
        Alpha::Real(a) => {
            for &(q, w) in terms {
                let phase = TAU * (a * q as f64).fract();
                re.add(w * phase.cos());
                im.add(w * phase.sin());
            }
        }
    }
    Complex64::new(re.value(), im.value())
}

/// `S_k(α)` over the prime powers of the window at cap `n`.
pub fn eval_sk(alpha: Alpha, k: u32, n: u64, window: Window) -> Result<Complex64> {
    let class = powers_in_window(k, n, window)?;
    Ok(eval_terms(alpha, &class.terms()))
}

/// `Σ ln p` over the window: the value of `S_k` at the origin, and an upper
/// bound for `|S_k|` everywhere.
pub fn sk_at_origin(k: u32, n: u64, window: Window) -> Result<f64> {
    let class = powers_in_window(k, n, window)?;
    let mut acc = Compensated::default();
    for &(_, w) in class.terms().iter() {
        acc.add(w);
    }
    Ok(acc.value())
}

// ---------------------------------------------------------------------------
// Arc dissection.
// ---------------------------------------------------------------------------

/// Exponent of N defining the major-arc parameter Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QScale {
    /// `Q = N^(2/(5k))` — the three four-variable forms.
    TwoOverFiveK,
    /// `Q = N^(1/(2k))` — the four-cubes form.
    OneOverTwoK,
}

/// One arc `{α : |qα - a| <= bound/N}` around `a/q`.
///
/// Endpoints are plain doubles; only the (1,1) arc extends past 1 and is
/// interpreted on the circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub a: u64,
    pub q: u64,
    pub lo: f64,
    pub hi: f64,
}

/// Classification of a point of the circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArcClass {
    Major,
    Intermediate,
    Minor,
}

impl ArcClass {
    pub fn name(self) -> &'static str {
        match self {
            ArcClass::Major => "major",
            ArcClass::Intermediate => "intermediate",
            ArcClass::Minor => "minor",
        }
    }
}

/// The two-level dissection at (N, k): major arcs at parameter Q, a wider
/// family at `Y = N^(1/8)`, and the leftover minor region.
///
/// `q_max` and `y_max` are determined by exact integer comparisons
/// (`q^(5k) <= N^2`, `q^8 <= N`); interval membership uses doubles with a
/// 1e-12 slack band classified inward (a borderline α counts as Major).
#[derive(Debug, Clone, Serialize)]
pub struct ArcDissection {
    pub n: u64,
    pub k: u32,
    pub scale: QScale,
    /// Q as a double, for widths and reports.
    pub q_value: f64,
    /// Y as a double.
    pub y_value: f64,
    /// Largest admissible denominator for major arcs, exact.
    pub q_max: u64,
    /// Largest admissible denominator for the wider family, exact.
    pub y_max: u64,
    pub major: Vec<Arc>,
    pub intermediate: Vec<Arc>,
}

const MEMBERSHIP_SLACK: f64 = 1e-12;

impl ArcDissection {
    pub fn new(n: u64, k: u32, scale: QScale) -> Result<Self> {
        if n < 16 {
            return Err(Error::Domain(format!("dissection needs N >= 16, got {n}")));
        }
        if k < 2 {
            return Err(Error::Domain(format!("dissection needs k >= 2, got {k}")));
        }
        let q_max = match scale {
            // q <= N^(2/(5k))  <=>  q^(5k) <= N^2
            QScale::TwoOverFiveK => max_q_with_pow_bounded(5 * k, &square(n)),
            // q <= N^(1/(2k))  <=>  q^(2k) <= N
            QScale::OneOverTwoK => max_q_with_pow_bounded(2 * k, &n.into()),
        };
        let y_max = integer_kth_root(n, 8);
        let nf = n as f64;
        let q_value = match scale {
            QScale::TwoOverFiveK => nf.powf(2.0 / (5.0 * k as f64)),
            QScale::OneOverTwoK => nf.powf(1.0 / (2.0 * k as f64)),
        };
        let y_value = nf.powf(0.125);
        let major = farey_arcs(q_max, q_value, n);
        let intermediate = farey_arcs(y_max, y_value, n);
        Ok(ArcDissection { n, k, scale, q_value, y_value, q_max, y_max, major, intermediate })
    }

    /// Major if α sits in some major arc (wraparound identifies 0 with 1),
    /// else Intermediate if in the wider family, else Minor.
    pub fn classify(&self, alpha: f64) -> ArcClass {
        let a = alpha.rem_euclid(1.0);
        if in_union(a, self.q_max, self.q_value / self.n as f64) {
            ArcClass::Major
        } else if in_union(a, self.y_max, self.y_value / self.n as f64) {
            ArcClass::Intermediate
        } else {
            ArcClass::Minor
        }
    }

    /// Measures of the three classes; they sum to 1 by construction, so the
    /// interesting content is the split itself.
    pub fn measures(&self) -> (f64, f64, f64) {
        let m_major = union_measure(&self.major);
        let mut all = self.major.clone();
        all.extend_from_slice(&self.intermediate);
        let m_both = union_measure(&all);
        (m_major, m_both - m_major, 1.0 - m_both)
    }
}

fn square(n: u64) -> num_bigint::BigUint {
    let b: num_bigint::BigUint = n.into();
    &b * &b
}

/// Largest q >= 1 with `q^exp <= bound`, exact.
fn max_q_with_pow_bounded(exp: u32, bound: &num_bigint::BigUint) -> u64 {
    let mut q = 1u64;
    loop {
        let next: num_bigint::BigUint = (q + 1).into();
        if next.pow(exp) <= *bound {
            q += 1;
        } else {
            return q;
        }
    }
}

/// All arcs `a/q ± bound/(qN)` for `q <= q_max`, `1 <= a <= q`, gcd 1.
fn farey_arcs(q_max: u64, bound: f64, n: u64) -> Vec<Arc> {
    let nf = n as f64;
    let mut arcs = Vec::new();
    for q in 1..=q_max {
        for a in 1..=q {
            if num_integer::gcd(a, q) != 1 {
                continue;
            }
            let center = a as f64 / q as f64;
            let hw = bound / (q as f64 * nf);
            arcs.push(Arc { a, q, lo: center - hw, hi: center + hw });
        }
    }
    arcs
}

/// Union membership: is α within `bound` of some fraction a/q (scaled by q)?
///
/// Checking the nearest integer per q suffices: a non-reduced nearest
/// fraction implies membership at its reduced denominator, which is also
/// scanned. The slack band counts as inside.
fn in_union(alpha: f64, q_max: u64, bound: f64) -> bool {
    for q in 1..=q_max {
        let r = alpha * q as f64;
        // |qα - a| <= bound with a the nearest integer (0 ≡ q on the circle).
        if (r - r.round()).abs() <= bound + MEMBERSHIP_SLACK {
            return true;
        }
    }
    false
}

/// Normalize arcs to `[0,1)` (splitting the wrap arc), sort, and merge.
fn normalized_intervals(arcs: &[Arc]) -> Vec<(f64, f64)> {
    let mut iv: Vec<(f64, f64)> = Vec::with_capacity(arcs.len() + 1);
    for arc in arcs {
        let (lo, hi) = (arc.lo, arc.hi);
        if hi > 1.0 {
            iv.push((lo.max(0.0), 1.0));
            iv.push((0.0, hi - 1.0));
        } else if lo < 0.0 {
            iv.push((0.0, hi));
            iv.push((lo + 1.0, 1.0));
        } else {
            iv.push((lo, hi));
        }
    }
    iv.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (lo, hi) in iv {
        match merged.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => merged.push((lo, hi)),
        }
    }
    merged
}

fn union_measure(arcs: &[Arc]) -> f64 {
    normalized_intervals(arcs).iter().map(|(lo, hi)| hi - lo).sum()
}

/// The ring `𝔐(2K) \ 𝔐(K)`: arcs at parameter 2K with the parameter-K arcs
/// removed, as a sorted disjoint list still tagged by their (a, q).
///
/// Domain: `Q <= K` and `2K <= N^(1/8)`, both checked exactly.
pub fn dyadic_arc_family(n: u64, k: u32, scale: QScale, cap_k: u64) -> Result<Vec<Arc>> {
    if cap_k == 0 {
        return Err(Error::Domain("K must be positive".into()));
    }
    let big_n: num_bigint::BigUint = n.into();
    let k_big: num_bigint::BigUint = cap_k.into();
    let q_ok = match scale {
        QScale::TwoOverFiveK => k_big.pow(5 * k) >= square(n),
        QScale::OneOverTwoK => k_big.pow(2 * k) >= big_n.clone(),
    };
    if !q_ok {
        return Err(Error::Domain(format!("K = {cap_k} lies below Q for N = {n}, k = {k}")));
    }
    let two_k: num_bigint::BigUint = (2 * cap_k).into();
    if two_k.pow(8) > big_n {
        return Err(Error::Domain(format!("2K = {} exceeds N^(1/8) for N = {n}", 2 * cap_k)));
    }

    let outer = farey_arcs(2 * cap_k, 2.0 * cap_k as f64, n);
    let inner = farey_arcs(cap_k, cap_k as f64, n);
    let holes = normalized_intervals(&inner);

    let mut out = Vec::new();
    for arc in &outer {
        // Subtract every inner interval from this arc, on the circle.
        let pieces = {
            let single = [*arc];
            normalized_intervals(&single)
        };
        for (mut lo, hi) in pieces {
            for &(hlo, hhi) in &holes {
                if hhi <= lo {
                    continue;
                }
                if hlo >= hi {
                    break;
                }
                if hlo > lo {
                    out.push(Arc { a: arc.a, q: arc.q, lo, hi: hlo });
                }
                lo = lo.max(hhi);
                if lo >= hi {
                    break;
                }
            }
            if lo < hi {
                out.push(Arc { a: arc.a, q: arc.q, lo, hi });
            }
        }
    }
    out.sort_by(|x, y| x.lo.partial_cmp(&y.lo).unwrap());
    Ok(out)
}

// ---------------------------------------------------------------------------
// Exact sampled moments and the discrete representation integral.
// ---------------------------------------------------------------------------

/// Precomputed roots of unity `e(r/m)` for exact-index phase evaluation.
pub struct RootTable {
    m: u64,
    roots: Vec<Complex64>,
}

impl RootTable {
    pub fn new(m: u64) -> Self {
        let roots = (0..m)
            .map(|r| {
                let t = TAU * r as f64 / m as f64;
                Complex64::new(t.cos(), t.sin())
            })
            .collect();
        RootTable { m, roots }
    }

    /// `Σ w · e(j·q / m)` with the index product reduced exactly mod m.
    fn eval(&self, j: u64, residues: &[(u64, f64)]) -> Complex64 {
        let mut re = Compensated::default();
        let mut im = Compensated::default();
        for &(q, w) in residues {
            let r = &self.roots[((j % self.m) * q % self.m) as usize];
            re.add(w * r.re);
            im.add(w * r.im);
        }
        Complex64::new(re.value(), im.value())
    }
}

fn reduce_terms(terms: &[(u64, f64)], m: u64) -> Vec<(u64, f64)> {
    terms.iter().map(|&(q, w)| (q % m, w)).collect()
}

/// `∫₀¹ |Σ w e(α q)|^{2m} dα`, computed exactly by uniform sampling.
///
/// `|S|^{2m}` is a trigonometric polynomial with frequencies in
/// `[-m·max_q, m·max_q]`; sampling above that bandwidth makes the mean equal
/// the integral. Undersampling is an error, never a silent approximation.
pub fn moment_integral_terms(terms: &[(u64, f64)], m: u32, samples: u64) -> Result<f64> {
    if m == 0 {
        return Ok(1.0);
    }
    let max_q = terms.iter().map(|&(q, _)| q).max().unwrap_or(0);
    let bandwidth = 2 * m as u64 * max_q;
    if samples <= bandwidth {
        return Err(Error::Domain(format!(
            "{samples} samples undersample bandwidth {bandwidth}; need strictly more"
        )));
    }
    let table = RootTable::new(samples);
    let residues = reduce_terms(terms, samples);
    // Fixed chunking; chunk partials are reduced in index order so the result
    // is identical for any worker count.
    let chunk = 4096u64;
    let n_chunks = samples.div_ceil(chunk);
    let partials: Vec<f64> = (0..n_chunks)
        .into_par_iter()
        .map(|ci| {
            let mut acc = Compensated::default();
            let lo = ci * chunk;
            let hi = ((ci + 1) * chunk).min(samples);
            for j in lo..hi {
                let s = table.eval(j, &residues);
                acc.add(s.norm_sqr().powi(m as i32));
            }
            acc.value()
        })
        .collect();
    let mut total = Compensated::default();
    for p in partials {
        total.add(p);
    }
    Ok(total.value() / samples as f64)
}

/// Moment of the prime sum `S_k` (or of the unweighted integer sum when
/// `prime_only` is false) over the window at cap `n`.
///
/// Requires `samples > 2·m·n`, which is conservative (the true bandwidth is
/// `2·m·max_q <= 2·m·n`) and never silently approximates.
pub fn moment_integral(
    k: u32,
    m: u32,
    n: u64,
    samples: u64,
    window: Window,
    prime_only: bool,
) -> Result<f64> {
    if m > 0 && samples <= 2 * m as u64 * n {
        return Err(Error::Domain(format!(
            "{samples} samples do not exceed the 2mN = {} sampling bound",
            2 * m as u64 * n
        )));
    }
    let terms = if prime_only {
        powers_in_window(k, n, window)?.terms()
    } else {
        crate::arith::integer_powers_in_window(k, n, window)?
    };
    moment_integral_terms(&terms, m, samples)
}

/// The weighted representation counts of a form recovered from sampled
/// products of its exponential sums: entry `t` is
/// `(1/M) Σ_j Π_i S_i(j/M) · e(-t j/M)`, exact for `M` above the total
/// bandwidth.
///
/// This realizes the full-interval representation integral discretely; it
/// must agree with the weighted convolution to floating accuracy.
pub fn sampled_rep_weights(form: &FormSpec, n: u64, samples: u64) -> Result<Vec<f64>> {
    let classes = form_classes(form, n)?;
    if classes.iter().any(|c| c.is_empty()) {
        return Ok(vec![0.0]);
    }
    let max_sum: u64 = classes.iter().map(|c| c.entries().last().unwrap().1).sum();
    if samples <= max_sum {
        return Err(Error::Domain(format!(
            "{samples} samples undersample total bandwidth {max_sum}"
        )));
    }
    let table = RootTable::new(samples);
    let slot_residues: Vec<Vec<(u64, f64)>> =
        classes.iter().map(|c| reduce_terms(&c.terms(), samples)).collect();

    // Stage 1: the product of the slot sums at every sample point.
    let products: Vec<Complex64> = (0..samples)
        .into_par_iter()
        .map(|j| {
            let mut p = Complex64::new(1.0, 0.0);
            for residues in &slot_residues {
                p *= table.eval(j, residues);
            }
            p
        })
        .collect();

    // Stage 2: one inverse transform per target, each summed in index order.
    let out: Vec<f64> = (0..=max_sum)
        .into_par_iter()
        .map(|t| {
            let mut re = Compensated::default();
            for (j, p) in products.iter().enumerate() {
                // e(-t j / M) = conj(root[t j mod M]); t < M and j < M keep
                // the index product inside u64.
                let r = &table.roots[((t % samples) * (j as u64) % samples) as usize];
                re.add(p.re * r.re + p.im * r.im);
            }
            re.value() / samples as f64
        })
        .collect();
    Ok(out)
}

// ---------------------------------------------------------------------------
// Diagnostic sup scans and sample tables.
// ---------------------------------------------------------------------------

/// Result of a randomized sup scan over one region of the dissection.
#[derive(Debug, Clone, Serialize)]
pub struct SupScan {
    pub k: u32,
    pub n: u64,
    pub region: ArcClass,
    pub samples_requested: u64,
    pub samples_in_region: u64,
    pub max_abs: f64,
    /// `S_k(0) = Σ ln p`, the trivial upper bound.
    pub origin_value: f64,
    /// The known minor-arc exponent `N^(1/k - θ)` for k = 2, 3, 4; no
    /// pass/fail is attached since implied constants are unknown.
    pub reference: Option<f64>,
    pub ratio_to_trivial: f64,
}

/// Scan `|S_k|` over random points of one region. Diagnostic only.
///
/// Minor points come from uniform circle samples (the region carries almost
/// all the measure); intermediate points are drawn inside the wider family's
/// own intervals, since that region is far too thin to hit by rejection.
pub fn sup_scan(
    dissection: &ArcDissection,
    region: ArcClass,
    samples: u64,
    seed: u64,
) -> Result<SupScan> {
    if region == ArcClass::Major {
        return Err(Error::Domain(
            "sup scans target the minor or intermediate region".into(),
        ));
    }
    if samples < 1000 {
        return Err(Error::Domain("sup scan needs at least 1000 samples".into()));
    }
    let k = dissection.k;
    let n = dissection.n;
    let class = powers_in_window(k, n, Window::Dyadic)?;
    let terms = class.terms();
    let origin: f64 = terms.iter().map(|&(_, w)| w).sum();
    let intervals = normalized_intervals(&dissection.intermediate);
    let cumulative: Vec<f64> = intervals
        .iter()
        .scan(0.0, |acc, (lo, hi)| {
            *acc += hi - lo;
            Some(*acc)
        })
        .collect();
    let total = cumulative.last().copied().unwrap_or(0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_abs = 0.0f64;
    let mut hits = 0u64;
    for _ in 0..samples {
        let alpha = match region {
            ArcClass::Minor => rng.gen::<f64>(),
            ArcClass::Intermediate => {
                if total == 0.0 {
                    break;
                }
                let u = rng.gen::<f64>() * total;
                let idx = cumulative.partition_point(|&c| c <= u);
                let (lo, hi) = intervals[idx.min(intervals.len() - 1)];
                lo + (hi - lo) * rng.gen::<f64>()
            }
            ArcClass::Major => unreachable!(),
        };
        if dissection.classify(alpha) != region {
            continue;
        }
        hits += 1;
        let v = eval_terms(Alpha::Real(alpha), &terms).norm();
        if v > max_abs {
            max_abs = v;
        }
    }
    let theta = match k {
        2 => Some(1.0 / 16.0),
        3 => Some(1.0 / 36.0),
        4 => Some(1.0 / 96.0),
        _ => None,
    };
    let nf = n as f64;
    Ok(SupScan {
        k,
        n,
        region,
        samples_requested: samples,
        samples_in_region: hits,
        max_abs,
        origin_value: origin,
        reference: theta.map(|t| nf.powf(1.0 / k as f64 - t)),
        ratio_to_trivial: max_abs / nf.powf(1.0 / k as f64),
    })
}

/// One row of an exponential-sum sample table.
#[derive(Debug, Clone, Serialize)]
pub struct ExpSumSample {
    pub alpha: f64,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    pub class: ArcClass,
}

/// Evaluate `S_k` on the uniform grid `j/m` with exact rational phases,
/// classifying each point.
pub fn sample_grid(
    k: u32,
    n: u64,
    window: Window,
    dissection: &ArcDissection,
    m: u64,
) -> Result<Vec<ExpSumSample>> {
    if m == 0 {
        return Err(Error::Domain("sample grid needs at least one point".into()));
    }
    let class = powers_in_window(k, n, window)?;
    let terms = class.terms();
    let rows: Vec<ExpSumSample> = (0..m)
        .into_par_iter()
        .map(|j| {
            let v = eval_terms(Alpha::Rational { num: j as i64, den: m }, &terms);
            ExpSumSample {
                alpha: j as f64 / m as f64,
                re: v.re,
                im: v.im,
                abs: v.norm(),
                class: dissection.classify(j as f64 / m as f64),
            }
        })
        .collect();
    Ok(rows)
}
