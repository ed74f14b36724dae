//! Which multiples `u * m` the exponents `q*i + j + offset` hit for
//! `0 <= i, j < k`, in closed form and by enumeration.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::parallel::Exec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    /// `2s | q+1`, no offset.
    ZeroOffsetEven,
    /// `2s+1 | q+1`, no offset.
    ZeroOffsetOdd,
    /// `2s | q+1`, offset `q+1 - (q+1)/(2s)`.
    ShiftedEven,
    /// `2s | q-1`, offset `(q+1)/2`.
    HalfShift,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::ZeroOffsetEven,
        Variant::ZeroOffsetOdd,
        Variant::ShiftedEven,
        Variant::HalfShift,
    ];

    pub fn h(self, s: u64) -> u64 {
        match self {
            Variant::ZeroOffsetOdd => 2 * s + 1,
            _ => 2 * s,
        }
    }

    pub fn t_range(self, s: u64) -> (i64, i64) {
        match self {
            Variant::ZeroOffsetEven | Variant::ShiftedEven => (0, s as i64 - 2),
            Variant::ZeroOffsetOdd => (0, s as i64 - 1),
            Variant::HalfShift => (1, s as i64),
        }
    }

    fn divides(self, q: u64, s: u64) -> bool {
        let h = self.h(s);
        match self {
            Variant::HalfShift => (q - 1).is_multiple_of(h),
            _ => (q + 1).is_multiple_of(h),
        }
    }

    /// Largest admissible `k`, or `None` when the bound is below 1.
    pub fn k_bound(self, q: u64, s: u64, t: i64) -> i64 {
        let (q, s) = (q as i64, s as i64);
        match self {
            Variant::ZeroOffsetEven => (s + t + 1) * (q + 1) / (2 * s) - 1,
            // printed with 2s in the denominator although the modulus uses 2s+1;
            // the enumeration settles which reading holds
            Variant::ZeroOffsetOdd => (s + t + 1) * (q + 1) / (2 * s + 1) - 1,
            Variant::ShiftedEven => (s + t + 2) * (q + 1) / (2 * s) - 2,
            Variant::HalfShift => (s + t) * (q - 1) / (2 * s),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Variant::ZeroOffsetEven => "zero-offset-even",
            Variant::ZeroOffsetOdd => "zero-offset-odd",
            Variant::ShiftedEven => "shifted-even",
            Variant::HalfShift => "half-shift",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExponentError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("{variant} needs {h} to divide q{sign}1 (q = {q})")]
    Divisibility {
        variant: Variant,
        q: u64,
        h: u64,
        sign: char,
    },
    #[error("t = {t} outside [{lo}, {hi}]")]
    TRange { t: i64, lo: i64, hi: i64 },
    #[error("k = {k} outside [1, {bound}]")]
    KRange { k: u64, bound: i64 },
    #[error("s must be positive")]
    ZeroS,
    #[error("quotient {u} of {x} by m = {m} is not below h = {h}")]
    QuotientOutOfRange { x: u64, m: u64, u: u64, h: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentScenario {
    pub q: u64,
    pub variant: Variant,
    pub s: u64,
    pub t: i64,
    pub k: u64,
}

impl ExponentScenario {
    pub fn new(q: u64, variant: Variant, s: u64, t: i64, k: u64) -> Result<Self, ExponentError> {
        let sc = ExponentScenario {
            q,
            variant,
            s,
            t,
            k,
        };
        sc.validate()?;
        Ok(sc)
    }

    pub fn validate(&self) -> Result<(), ExponentError> {
        if arith::prime_power(self.q).is_none() {
            return Err(ExponentError::NotPrimePower(self.q));
        }
        if self.s == 0 {
            return Err(ExponentError::ZeroS);
        }
        if !self.variant.divides(self.q, self.s) {
            return Err(ExponentError::Divisibility {
                variant: self.variant,
                q: self.q,
                h: self.h(),
                sign: if self.variant == Variant::HalfShift {
                    '-'
                } else {
                    '+'
                },
            });
        }
        let (lo, hi) = self.variant.t_range(self.s);
        if self.t < lo || self.t > hi {
            return Err(ExponentError::TRange { t: self.t, lo, hi });
        }
        let bound = self.k_bound();
        if self.k < 1 || self.k as i64 > bound {
            return Err(ExponentError::KRange { k: self.k, bound });
        }
        Ok(())
    }

    pub fn h(&self) -> u64 {
        self.variant.h(self.s)
    }

    pub fn m(&self) -> u64 {
        (self.q * self.q - 1) / self.h()
    }

    pub fn offset(&self) -> u64 {
        match self.variant {
            Variant::ZeroOffsetEven | Variant::ZeroOffsetOdd => 0,
            Variant::ShiftedEven => self.q + 1 - (self.q + 1) / (2 * self.s),
            Variant::HalfShift => self.q.div_ceil(2),
        }
    }

    pub fn k_bound(&self) -> i64 {
        self.variant.k_bound(self.q, self.s, self.t)
    }

    pub fn with_k(&self, k: u64) -> ExponentScenario {
        ExponentScenario { k, ..*self }
    }
}

/// `{a, ..., b}`, empty when `a > b`.
fn span(a: i64, b: i64) -> impl Iterator<Item = u64> {
    (a.max(0)..=b).map(|x| x as u64)
}

/// The closed-form set of `u` for the scenario.
pub fn predicted_u_set(sc: &ExponentScenario) -> Result<BTreeSet<u64>, ExponentError> {
    sc.validate()?;
    let (s, t) = (sc.s as i64, sc.t);
    let set = match sc.variant {
        Variant::ZeroOffsetEven => std::iter::once(0).chain(span(s - t, s + t)).collect(),
        Variant::ZeroOffsetOdd => std::iter::once(0).chain(span(s - t + 1, s + t)).collect(),
        Variant::ShiftedEven => span(s - t, s + t + 1).collect(),
        Variant::HalfShift => span(1, t - 1).chain(span(s + 1, s + t - 1)).collect(),
    };
    Ok(set)
}

/// Every `u` with `q*i + j + offset = u*m` for some `0 <= i, j < k`.
pub fn brute_force_u_set(sc: &ExponentScenario) -> Result<BTreeSet<u64>, ExponentError> {
    sc.validate()?;
    let (m, h, off) = (sc.m(), sc.h(), sc.offset());
    let mut out = BTreeSet::new();
    for i in 0..sc.k {
        for j in 0..sc.k {
            let x = sc.q * i + j + off;
            if x.is_multiple_of(m) {
                let u = x / m;
                if u >= h {
                    return Err(ExponentError::QuotientOutOfRange { x, m, u, h });
                }
                out.insert(u);
            }
        }
    }
    Ok(out)
}

/// All valid scenarios with `q <= max_q`, ordered by `(q, variant, s, t, k)`.
pub fn enumerate_scenarios(max_q: u64) -> Vec<ExponentScenario> {
    let mut out = Vec::new();
    for q in 2..=max_q {
        if arith::prime_power(q).is_none() {
            continue;
        }
        for variant in Variant::ALL {
            for s in 1..=q {
                if !variant.divides(q, s) {
                    continue;
                }
                let (lo, hi) = variant.t_range(s);
                for t in lo..=hi {
                    let bound = variant.k_bound(q, s, t);
                    for k in 1..=bound.max(0) as u64 {
                        out.push(ExponentScenario {
                            q,
                            variant,
                            s,
                            t,
                            k,
                        });
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub scenario: ExponentScenario,
    pub predicted: BTreeSet<u64>,
    pub brute: BTreeSet<u64>,
}

impl ScenarioResult {
    pub fn equal(&self) -> bool {
        self.predicted == self.brute
    }

    pub fn contained(&self) -> bool {
        self.brute.is_subset(&self.predicted)
    }

    pub fn at_bound(&self) -> bool {
        self.scenario.k as i64 == self.scenario.k_bound()
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SweepReport {
    pub total: usize,
    pub equal: usize,
    pub contained: usize,
    pub at_bound: usize,
    pub equal_at_bound: usize,
    pub mismatches: Vec<ScenarioResult>,
}

/// Compares both sets on every scenario with `q <= max_q`.
pub fn sweep(max_q: u64, exec: Exec) -> Result<SweepReport, ExponentError> {
    let scenarios = enumerate_scenarios(max_q);
    let results = exec.map(&scenarios, |sc| {
        Ok(ScenarioResult {
            scenario: *sc,
            predicted: predicted_u_set(sc)?,
            brute: brute_force_u_set(sc)?,
        })
    });
    let mut report = SweepReport::default();
    for r in results {
        let r: ScenarioResult = r?;
        report.total += 1;
        report.contained += r.contained() as usize;
        if r.at_bound() {
            report.at_bound += 1;
            report.equal_at_bound += r.equal() as usize;
        }
        if r.equal() {
            report.equal += 1;
        } else {
            report.mismatches.push(r);
        }
    }
    Ok(report)
}
