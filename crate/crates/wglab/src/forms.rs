//! The four representation forms under study and their target parity.

use serde::{Deserialize, Serialize};

use crate::arith::Window;
use crate::{Error, Result};

/// The fixed exponent patterns: a free exponent `k` completes each form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormKind {
    /// n = p1^2 + p2^3 + p3^6 + p4^k, even targets.
    F236k,
    /// n = p1^2 + p2^4 + p3^4 + p4^k, even targets.
    F244k,
    /// n = p1^2 + p2^3 + p3^5 + p4^k, even targets.
    F235k,
    /// n = p1^3 + p2^3 + p3^3 + p4^3 + p5^k, odd targets.
    F3333k,
}

impl FormKind {
    pub const ALL: [FormKind; 4] =
        [FormKind::F236k, FormKind::F244k, FormKind::F235k, FormKind::F3333k];

    /// The fixed exponent slots, without the free slot.
    pub fn fixed_exponents(self) -> &'static [u32] {
        match self {
            FormKind::F236k => &[2, 3, 6],
            FormKind::F244k => &[2, 4, 4],
            FormKind::F235k => &[2, 3, 5],
            FormKind::F3333k => &[3, 3, 3, 3],
        }
    }

    /// Smallest k keeping the exponent tuple nondecreasing.
    pub fn min_k(self) -> u32 {
        *self.fixed_exponents().last().unwrap()
    }

    pub fn parity(self) -> Parity {
        match self {
            FormKind::F3333k => Parity::Odd,
            _ => Parity::Even,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FormKind::F236k => "f236k",
            FormKind::F244k => "f244k",
            FormKind::F235k => "f235k",
            FormKind::F3333k => "f3333k",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "f236k" | "236k" | "2,3,6,k" => Ok(FormKind::F236k),
            "f244k" | "244k" | "2,4,4,k" => Ok(FormKind::F244k),
            "f235k" | "235k" | "2,3,5,k" => Ok(FormKind::F235k),
            "f3333k" | "3333k" | "3,3,3,3,k" => Ok(FormKind::F3333k),
            _ => Err(Error::Domain(format!(
                "unknown form {s:?} (expected one of f236k, f244k, f235k, f3333k)"
            ))),
        }
    }
}

/// Parity class of the counted targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn matches(self, n: u64) -> bool {
        match self {
            Parity::Even => n.is_multiple_of(2),
            Parity::Odd => n % 2 == 1,
        }
    }
}

/// A fully instantiated form: kind, free exponent, and power window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormSpec {
    pub kind: FormKind,
    pub k: u32,
    pub window: Window,
}

impl FormSpec {
    pub fn new(kind: FormKind, k: u32, window: Window) -> Result<Self> {
        if k < kind.min_k() {
            return Err(Error::Domain(format!(
                "form {} requires k >= {}, got {k}",
                kind.name(),
                kind.min_k()
            )));
        }
        Ok(FormSpec { kind, k, window })
    }

    /// All exponent slots in order, the free slot last.
    pub fn exponents(&self) -> Vec<u32> {
        let mut e = self.kind.fixed_exponents().to_vec();
        e.push(self.k);
        e
    }

    pub fn arity(&self) -> usize {
        self.kind.fixed_exponents().len() + 1
    }

    pub fn parity(&self) -> Parity {
        self.kind.parity()
    }

    /// The smallest value the form can take: every prime equal to 2.
    /// Note this sum need not have the target parity (it does not for the
    /// four-cubes form), so it is a lower bound for representable targets,
    /// not necessarily attained.
    pub fn min_possible_sum(&self) -> u64 {
        self.exponents().iter().map(|&e| 1u64 << e).sum()
    }
}

/// A single representation of a target: the prime tuple and the recomputed
/// sum, kept together so a report is self-checking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub primes: Vec<u64>,
    pub check: u64,
}

impl Witness {
    /// True when all entries are certified prime and the powers add back to
    /// `n` in exact arithmetic.
    pub fn verify(&self, form: &FormSpec, n: u64) -> bool {
        if self.check != n || self.primes.len() != self.arity_of(form) {
            return false;
        }
        let mut sum: u128 = 0;
        for (&p, &e) in self.primes.iter().zip(form.exponents().iter()) {
            if !crate::arith::is_prime64(p) {
                return false;
            }
            match crate::arith::checked_pow(p, e) {
                Some(q) => sum += q as u128,
                None => return false,
            }
        }
        sum == n as u128
    }

    fn arity_of(&self, form: &FormSpec) -> usize {
        form.arity()
    }
}
