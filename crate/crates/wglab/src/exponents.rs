//! Exact evaluation of the exceptional-set exponents.
//!
//! For each form the exponent θ(k) is either a fixed constant at small k or
//! `1/(c·x)` with a form constant c and an integer Hölder block size x given
//! by a three-branch floor/ceiling table. [`x_of`] implements the general
//! table, parameterized by δ, that the per-form tables instantiate at
//! δ ∈ {1/6, 1/4, 1/6, 2/3}; the theta functions implement the per-form
//! tables directly, branching on their own k ranges, so agreement between
//! the two routes is a checkable identity rather than a tautology.
//!
//! Everything is exact: floors and ceilings are taken on arbitrary-precision
//! rationals, never on doubles, because several branch expressions land
//! exactly on integers (`7k/6 - 20` whenever 6 | k, for instance).

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::forms::FormKind;
use crate::rational::Rational;
use crate::{Error, Result};

/// Where an exponent comes from: the new tables computed here, or one of the
/// earlier bounds they are compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    New,
    Bruedern,
    HoffmanYu,
    Liu,
}

impl Source {
    pub fn name(self) -> &'static str {
        match self {
            Source::New => "new",
            Source::Bruedern => "bruedern",
            Source::HoffmanYu => "hoffman_yu",
            Source::Liu => "liu",
        }
    }
}

/// An exact exponent θ with its provenance and, when the formula is
/// `1/(c·x)`, the block size x.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentBound {
    pub form: FormKind,
    pub k: u32,
    pub theta: Rational,
    pub x: Option<u64>,
    pub source: Source,
}

impl ExponentBound {
    fn new(form: FormKind, k: u32, theta: Rational, x: Option<u64>, source: Source) -> Self {
        debug_assert!(theta.is_positive());
        if let Some(x) = x {
            let c = form_constant(form);
            let prod = theta.mul_int((c * x) as i64);
            debug_assert!(prod == 1, "theta * (c*x) must be exactly 1");
        }
        ExponentBound { form, k, theta, x, source }
    }
}

/// The constant c in `theta = 1/(c·x)` for each form.
pub fn form_constant(form: FormKind) -> u64 {
    match form {
        FormKind::F236k => 54,
        FormKind::F244k => 48,
        FormKind::F235k => 36,
        FormKind::F3333k => 9,
    }
}

fn floor_u64(r: &Rational) -> u64 {
    r.floor_int().to_u64().expect("floor fits u64 in supported k range")
}

fn ceil_u64(r: &Rational) -> u64 {
    let c = r.ceil_int();
    c.to_u64().expect("ceiling fits u64 in supported k range")
}

// The three branch formulas shared by the general table and the per-form
// tables. `kd` is the exact product k·δ and `m = [kd]`.

/// `ceil((kd + 1 - m) * 2^(m-1))` — the Hölder interpolation between
/// consecutive powers of two (m = 0 gives the exact fraction 2^-1).
fn x_pow2_branch(kd: &Rational) -> u64 {
    let m = floor_u64(kd);
    let frac = kd - &Rational::from_int(m as i64 - 1);
    ceil_u64(&(frac * Rational::pow2(m as i64 - 1)))
}

/// `ceil(7*kd - 20)` — the bridge branch used when m = 4.
fn x_bridge_branch(kd: &Rational) -> u64 {
    ceil_u64(&(kd.mul_int(7) - Rational::from_int(20)))
}

/// `ceil((kd - m/2) * (m + 1))` — the triangular-number branch for m >= 5.
fn x_triangular_branch(kd: &Rational) -> u64 {
    let m = floor_u64(kd);
    let shifted = kd - &Rational::new(m as i64, 2).unwrap();
    ceil_u64(&(shifted.mul_int(m as i64 + 1)))
}

/// The general block-size table: x such that the 2x-th moment of the prime
/// exponential sum saves N^δ, branching on `m = [kδ]` (m ≤ 3 / m = 4 /
/// m ≥ 5).
pub fn x_of(k: u32, delta: &Rational) -> Result<u64> {
    if k < 2 {
        return Err(Error::Domain(format!("x_of requires k >= 2, got {k}")));
    }
    if !delta.is_positive() || *delta > 1 {
        return Err(Error::Domain(format!("delta {delta} outside (0, 1]")));
    }
    let kd = delta.mul_int(k as i64);
    let m = floor_u64(&kd);
    let x = match m {
        0..=3 => x_pow2_branch(&kd),
        4 => x_bridge_branch(&kd),
        _ => x_triangular_branch(&kd),
    };
    debug_assert!(x >= 1);
    Ok(x)
}

/// θ₁(k) for the square + cube + sixth + k-th power form (k ≥ 6):
/// 1/54, 1/81, then 1/(54x) with x branching on 8..=23 / 24..=29 / 30.. .
pub fn theta1(k: u32) -> Result<ExponentBound> {
    let form = FormKind::F236k;
    match k {
        0..=5 => Err(below_range("theta1", k, 6)),
        6 => Ok(ExponentBound::new(form, k, Rational::new(1, 54).unwrap(), None, Source::New)),
        7 => Ok(ExponentBound::new(form, k, Rational::new(1, 81).unwrap(), None, Source::New)),
        _ => {
            let kd = Rational::new(k as i64, 6).unwrap();
            let x = match k {
                8..=23 => x_pow2_branch(&kd),
                24..=29 => x_bridge_branch(&kd),
                _ => x_triangular_branch(&kd),
            };
            Ok(ExponentBound::new(form, k, over(54, x), Some(x), Source::New))
        }
    }
}

/// θ₂(k) for the square + two fourths + k-th power form (k ≥ 4):
/// 1/32, 1/48, 1/64 on 6..=8, then 1/(48x) with x branching on 9..=19 / 20.. .
pub fn theta2(k: u32) -> Result<ExponentBound> {
    let form = FormKind::F244k;
    match k {
        0..=3 => Err(below_range("theta2", k, 4)),
        4 => Ok(ExponentBound::new(form, k, Rational::new(1, 32).unwrap(), None, Source::New)),
        5 => Ok(ExponentBound::new(form, k, Rational::new(1, 48).unwrap(), None, Source::New)),
        6..=8 => {
            Ok(ExponentBound::new(form, k, Rational::new(1, 64).unwrap(), None, Source::New))
        }
        _ => {
            let kd = Rational::new(k as i64, 4).unwrap();
            let x = match k {
                9..=19 => x_pow2_branch(&kd),
                _ => x_triangular_branch(&kd),
            };
            Ok(ExponentBound::new(form, k, over(48, x), Some(x), Source::New))
        }
    }
}

/// θ₃(k) for the square + cube + fifth + k-th power form (k ≥ 5):
/// 1/24, 2/81, then 1/(36x) with x branching on 7..=23 / 24..=29 / 30.. .
pub fn theta3(k: u32) -> Result<ExponentBound> {
    let form = FormKind::F235k;
    match k {
        0..=4 => Err(below_range("theta3", k, 5)),
        5 => Ok(ExponentBound::new(form, k, Rational::new(1, 24).unwrap(), None, Source::New)),
        6 => Ok(ExponentBound::new(form, k, Rational::new(2, 81).unwrap(), None, Source::New)),
        _ => {
            let kd = Rational::new(k as i64, 6).unwrap();
            let x = match k {
                7..=23 => x_pow2_branch(&kd),
                24..=29 => x_bridge_branch(&kd),
                _ => x_triangular_branch(&kd),
            };
            Ok(ExponentBound::new(form, k, over(36, x), Some(x), Source::New))
        }
    }
}

/// θ₄(k) for the four cubes + k-th power form (k ≥ 4):
/// 1/24, 1/54, then 1/(9x) with x = ceil(14k/3 - 20) on k ∈ {6,7} and the
/// triangular branch for k ≥ 8.
pub fn theta4(k: u32) -> Result<ExponentBound> {
    let form = FormKind::F3333k;
    match k {
        0..=3 => Err(below_range("theta4", k, 4)),
        4 => Ok(ExponentBound::new(form, k, Rational::new(1, 24).unwrap(), None, Source::New)),
        5 => Ok(ExponentBound::new(form, k, Rational::new(1, 54).unwrap(), None, Source::New)),
        _ => {
            let kd = Rational::new(2 * k as i64, 3).unwrap();
            let x = match k {
                6 | 7 => x_bridge_branch(&kd),
                _ => x_triangular_branch(&kd),
            };
            Ok(ExponentBound::new(form, k, over(9, x), Some(x), Source::New))
        }
    }
}

/// θ(k) for a form by its kind.
pub fn theta_for(form: FormKind, k: u32) -> Result<ExponentBound> {
    match form {
        FormKind::F236k => theta1(k),
        FormKind::F244k => theta2(k),
        FormKind::F235k => theta3(k),
        FormKind::F3333k => theta4(k),
    }
}

fn below_range(name: &str, k: u32, min: u32) -> Error {
    Error::Domain(format!("{name} requires k >= {min}, got {k}"))
}

fn over(c: u64, x: u64) -> Rational {
    Rational::from_big(BigInt::from(1), BigInt::from(c) * BigInt::from(x)).unwrap()
}

/// Upper limit for the exact Liu exponent; beyond it the denominator
/// 3k·2^(k-2) is astronomically small and comparisons go through logarithms.
pub const LIU_EXACT_MAX_K: u32 = 60;

/// Exponents from the prior works quoted for comparison.
///
/// - `Bruedern` — 1/(8k²), quoted at k ≥ 4.
/// - `HoffmanYu` — 47/(420·2^s) with s = [(k+1)/2], k ≥ 5.
/// - `Liu` — 1/(3k·2^(k-2)), 5 ≤ k ≤ 60 exactly.
pub fn prior_bound(source: Source, k: u32) -> Result<ExponentBound> {
    match source {
        Source::New => Err(Error::Domain(
            "prior_bound covers prior works; use the theta functions for the new bounds".into(),
        )),
        Source::Bruedern => {
            if k < 4 {
                return Err(below_range("bruedern bound", k, 4));
            }
            let den = BigInt::from(8u32) * BigInt::from(k) * BigInt::from(k);
            let theta = Rational::from_big(BigInt::from(1), den)?;
            Ok(ExponentBound { form: FormKind::F236k, k, theta, x: None, source })
        }
        Source::HoffmanYu => {
            if k < 5 {
                return Err(below_range("hoffman-yu bound", k, 5));
            }
            let s = k.div_ceil(2); // [(k+1)/2]
            let den = BigInt::from(420u32) * (BigInt::from(1) << s as usize);
            let theta = Rational::from_big(BigInt::from(47), den)?;
            Ok(ExponentBound { form: FormKind::F235k, k, theta, x: None, source })
        }
        Source::Liu => {
            if k < 5 {
                return Err(below_range("liu bound", k, 5));
            }
            if k > LIU_EXACT_MAX_K {
                return Err(Error::Domain(format!(
                    "liu bound kept exact only up to k = {LIU_EXACT_MAX_K}, got {k}"
                )));
            }
            let den = BigInt::from(3u32) * BigInt::from(k) * (BigInt::from(1) << (k - 2) as usize);
            let theta = Rational::from_big(BigInt::from(1), den)?;
            Ok(ExponentBound { form: FormKind::F235k, k, theta, x: None, source })
        }
    }
}

/// Prior works quoted against each form.
pub fn priors_for(form: FormKind) -> &'static [Source] {
    match form {
        FormKind::F236k | FormKind::F244k => &[Source::Bruedern],
        FormKind::F235k => &[Source::HoffmanYu, Source::Liu],
        FormKind::F3333k => &[],
    }
}

/// One comparison against a single prior: its exact value when available,
/// a base-10 logarithm either way, and the exact ratio θ_new/θ_prior.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PriorEntry {
    pub source: Source,
    pub theta: Option<Rational>,
    pub log10_theta: f64,
    pub ratio: Option<Rational>,
}

/// One row of a comparison table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompareRow {
    pub form: FormKind,
    pub k: u32,
    pub theta: Option<Rational>,
    pub x: Option<u64>,
    pub priors: Vec<PriorEntry>,
    pub error: Option<String>,
}

/// Build the comparison table for a form over `k_lo..=k_hi`.
///
/// Range errors are surfaced per row; the table always covers the requested
/// range.
pub fn compare_table(form: FormKind, k_lo: u32, k_hi: u32) -> Vec<CompareRow> {
    let mut rows = Vec::new();
    for k in k_lo..=k_hi {
        let mut row = CompareRow { form, k, theta: None, x: None, priors: Vec::new(), error: None };
        match theta_for(form, k) {
            Ok(bound) => {
                row.theta = Some(bound.theta);
                row.x = bound.x;
            }
            Err(e) => row.error = Some(e.to_string()),
        }
        for &source in priors_for(form) {
            match prior_bound(source, k) {
                Ok(prior) => {
                    let ratio = row.theta.as_ref().map(|t| t / &prior.theta);
                    row.priors.push(PriorEntry {
                        source,
                        log10_theta: log10_rational(&prior.theta),
                        theta: Some(prior.theta),
                        ratio,
                    });
                }
                Err(_) if source == Source::Liu && k > LIU_EXACT_MAX_K => {
                    // Exact value withheld by design; compare in log scale.
                    row.priors.push(PriorEntry {
                        source,
                        theta: None,
                        log10_theta: liu_log10(k),
                        ratio: None,
                    });
                }
                Err(_) => {} // prior not applicable at this k
            }
        }
        rows.push(row);
    }
    rows
}

fn log10_rational(r: &Rational) -> f64 {
    // Exact enough for a diagnostic column: log10(num) - log10(den) via
    // bit-length scaling keeps precision for huge denominators.
    fn log10_big(n: &BigInt) -> f64 {
        let bits = n.bits();
        if bits <= 52 {
            return n.to_f64().unwrap().abs().log10();
        }
        let shift = bits - 52;
        let head = (n >> shift).to_f64().unwrap().abs();
        head.log10() + shift as f64 * std::f64::consts::LOG10_2
    }
    log10_big(r.numer()) - log10_big(r.denom())
}

fn liu_log10(k: u32) -> f64 {
    -((3.0 * k as f64).log10() + (k as f64 - 2.0) * std::f64::consts::LOG10_2)
}

/// Render comparison rows as CSV, one line per (row, prior) plus a line for
/// the new bound itself. Rationals are split into numerator and denominator
/// columns; empty cells mean "not applicable".
pub fn compare_rows_csv(rows: &[CompareRow]) -> String {
    let mut out = String::from(
        "form,k,theta_num,theta_den,x,source,prior_num,prior_den,prior_log10,ratio_num,ratio_den,error\n",
    );
    for row in rows {
        let (tn, td) = match &row.theta {
            Some(t) => (t.numer().to_string(), t.denom().to_string()),
            None => (String::new(), String::new()),
        };
        let x = row.x.map(|x| x.to_string()).unwrap_or_default();
        let err = row.error.clone().unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},new,,,,,,{}\n",
            row.form.name(),
            row.k,
            tn,
            td,
            x,
            err
        ));
        for p in &row.priors {
            let (pn, pd) = match &p.theta {
                Some(t) => (t.numer().to_string(), t.denom().to_string()),
                None => (String::new(), String::new()),
            };
            let (rn, rd) = match &p.ratio {
                Some(r) => (r.numer().to_string(), r.denom().to_string()),
                None => (String::new(), String::new()),
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},\n",
                row.form.name(),
                row.k,
                tn,
                td,
                x,
                p.source.name(),
                pn,
                pd,
                p.log10_theta,
                rn,
                rd
            ));
        }
    }
    out
}
