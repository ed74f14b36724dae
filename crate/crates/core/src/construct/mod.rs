//! The five coset constructions of Hermitian self-orthogonal GRS codes.
//!
//! [`validate`] checks the hypotheses of a family and fills in the derived
//! scalars; [`construct`] assembles locators and multipliers, solves for the
//! multiplier norms, and returns the code together with the system it solved.

mod theorems;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::exponent::{ExponentScenario, Variant};
use crate::field::{field_for_q, Felt, FieldError, GaloisField};
use crate::grs::{GrsError, GrsSpec};
use crate::matrix::FMatrix;
use crate::solver::{SearchOutcome, SolveError};
use crate::verify::CertBundle;

pub use theorems::{
    construct_theorem1, construct_theorem2, construct_theorem3, construct_theorem4,
    construct_theorem5,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Theorem {
    T1,
    T2,
    T3,
    T4,
    T5,
}

impl Theorem {
    pub const ALL: [Theorem; 5] = [Theorem::T1, Theorem::T2, Theorem::T3, Theorem::T4, Theorem::T5];

    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_number(n: u8) -> Option<Theorem> {
        Theorem::ALL.get((n as usize).checked_sub(1)?).copied()
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", self.number())
    }
}

/// A request for one code. Index lists are optional; defaults are installed
/// by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub theorem: Theorem,
    pub q: u64,
    pub h: u64,
    pub r: u64,
    pub k: u64,
    /// Coset representatives `i_1..` (the even-type cosets for T4).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub indices: Option<Vec<u64>>,
    /// Odd-type coset representatives `j_1..` for T4.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub odd_indices: Option<Vec<u64>>,
}

impl ConstructionParams {
    pub fn new(theorem: Theorem, q: u64, h: u64, r: u64, k: u64) -> ConstructionParams {
        ConstructionParams {
            theorem,
            q,
            h,
            r,
            k,
            indices: None,
            odd_indices: None,
        }
    }

    pub fn with_indices(mut self, indices: Vec<u64>) -> Self {
        self.indices = Some(indices);
        self
    }

    pub fn with_odd_indices(mut self, indices: Vec<u64>) -> Self {
        self.odd_indices = Some(indices);
        self
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamError {
    #[error("q = {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("divisibility: {0}")]
    DivisibilityViolated(String),
    #[error("parity: {0}")]
    ParityViolated(String),
    #[error("range: {0}")]
    RangeViolated(String),
    #[error("index list: {0}")]
    IndexListInvalid(String),
    #[error("p divides m = {0}, so the norm equation for the zero locator has no solution")]
    CharacteristicDividesM(u64),
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl ParamError {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            ParamError::NotPrimePower(_) => "not-prime-power",
            ParamError::DivisibilityViolated(_) => "divisibility",
            ParamError::ParityViolated(_) => "parity",
            ParamError::RangeViolated(_) => "range",
            ParamError::IndexListInvalid(_) => "index-list",
            ParamError::CharacteristicDividesM(_) => "p-divides-m",
            ParamError::Field(_) => "field",
        }
    }
}

/// Parameters that passed [`validate`], with everything the builders need.
#[derive(Debug, Clone)]
pub struct ValidatedParams {
    pub params: ConstructionParams,
    pub field: &'static GaloisField,
    pub n: u64,
    /// `(q^2 - 1) / h`, the size of each coset.
    pub m: u64,
    pub s: u64,
    /// The family's `t`, where one is defined.
    pub t: Option<i64>,
    /// `w^h`, generating the cosets.
    pub theta: Felt,
    pub alpha: Option<Felt>,
    pub xi: Option<Felt>,
    /// First row exponent of the T1/T2 systems.
    pub base_exponent: Option<i64>,
    /// Number of even-type and odd-type cosets for T4.
    pub split: Option<(u64, u64)>,
    pub k_max: u64,
}

impl ValidatedParams {
    pub fn theorem(&self) -> Theorem {
        self.params.theorem
    }

    pub fn indices(&self) -> &[u64] {
        self.params.indices.as_deref().unwrap_or(&[])
    }

    pub fn odd_indices(&self) -> &[u64] {
        self.params.odd_indices.as_deref().unwrap_or(&[])
    }

    /// The exponent scenario describing which gram entries survive the
    /// coset sums, for the families where one applies.
    pub fn exponent_scenario(&self) -> Option<ExponentScenario> {
        let p = &self.params;
        let (variant, s, t) = match p.theorem {
            Theorem::T1 if p.h.is_multiple_of(2) => (Variant::ZeroOffsetEven, self.s, self.t?),
            Theorem::T1 => (Variant::ZeroOffsetOdd, self.s, self.t?),
            Theorem::T2 => (Variant::ShiftedEven, self.s, self.t?),
            Theorem::T3 => (Variant::HalfShift, self.s, p.r as i64),
            Theorem::T4 => (Variant::HalfShift, self.s, (p.r / 2) as i64),
            Theorem::T5 => return None,
        };
        Some(ExponentScenario {
            q: p.q,
            variant,
            s,
            t,
            k: p.k,
        })
    }
}

/// Largest admissible `k` for a family, or a negative value when none is.
pub fn k_bound(theorem: Theorem, q: u64, h: u64, r: u64) -> i64 {
    let (q, h, r) = (q as i64, h as i64, r as i64);
    if h == 0 || (theorem == Theorem::T3 && h < 2) {
        return -1;
    }
    match theorem {
        Theorem::T1 => (r + h - 1) / 2 * ((q + 1) / h) - 1,
        Theorem::T2 => (r + h + 1) / 2 * ((q + 1) / h) - 2,
        Theorem::T3 => {
            let s = h / 2;
            (s + r) * (q - 1) / (2 * s)
        }
        Theorem::T4 => (h + r) / 2 * ((q - 1) / h),
        Theorem::T5 => r * ((q - 1) / h),
    }
}

/// Code length of a family.
pub fn code_length(theorem: Theorem, q: u64, h: u64, r: u64) -> u64 {
    let base = r * (q * q - 1) / h;
    if theorem == Theorem::T1 {
        base + 1
    } else {
        base
    }
}

fn range_err(msg: String) -> ParamError {
    ParamError::RangeViolated(msg)
}

fn check_indices(
    given: &Option<Vec<u64>>,
    len: u64,
    modulus: u64,
    what: &str,
) -> Result<Vec<u64>, ParamError> {
    let list = given.clone().unwrap_or_else(|| (0..len).collect());
    if list.len() as u64 != len {
        return Err(ParamError::IndexListInvalid(format!(
            "{what} needs {len} entries, got {}",
            list.len()
        )));
    }
    let mut seen = BTreeSet::new();
    for &i in &list {
        if !seen.insert(i % modulus) {
            return Err(ParamError::IndexListInvalid(format!(
                "{what} entries must be distinct modulo {modulus}; {i} repeats"
            )));
        }
    }
    Ok(list)
}

/// Checks the hypotheses of the requested family and derives its scalars.
pub fn validate(params: &ConstructionParams) -> Result<ValidatedParams, ParamError> {
    let ConstructionParams {
        theorem, q, h, r, k, ..
    } = *params;
    let Some((p, _)) = arith::prime_power(q) else {
        return Err(ParamError::NotPrimePower(q));
    };
    if h == 0 {
        return Err(ParamError::DivisibilityViolated("h must be positive".into()));
    }
    let plus = theorem == Theorem::T1 || theorem == Theorem::T2;
    if plus && (q + 1) % h != 0 {
        return Err(ParamError::DivisibilityViolated(format!("h = {h} must divide q+1 = {}", q + 1)));
    }
    if !plus && (q - 1) % h != 0 {
        return Err(ParamError::DivisibilityViolated(format!("h = {h} must divide q-1 = {}", q - 1)));
    }
    if matches!(theorem, Theorem::T3 | Theorem::T4) && q % 2 == 0 {
        return Err(ParamError::ParityViolated(format!("q = {q} must be odd")));
    }
    if matches!(theorem, Theorem::T2 | Theorem::T3 | Theorem::T4) && h % 2 != 0 {
        return Err(ParamError::ParityViolated(format!("h = {h} must be even")));
    }

    let mut out = params.clone();
    let mut s = h / 2;
    let mut t = None;
    let mut split = None;
    match theorem {
        Theorem::T1 => {
            if h < 3 {
                return Err(range_err(format!("h = {h} must be at least 3")));
            }
            if r <= 1 || r >= q.min(h) {
                return Err(range_err(format!("r = {r} must satisfy 1 < r < min(q, h) = {}", q.min(h))));
            }
            if (r + h) % 2 == 0 {
                return Err(ParamError::ParityViolated("r+h must be odd".into()));
            }
            if h % 2 == 0 {
                t = Some((r as i64 - 3) / 2);
            } else {
                s = (h - 1) / 2;
                t = Some((r as i64 - 2) / 2);
            }
            if params.indices.is_some() || params.odd_indices.is_some() {
                return Err(ParamError::IndexListInvalid("T1 takes no index lists".into()));
            }
        }
        Theorem::T2 => {
            if r < 3 || r % 2 == 0 {
                return Err(ParamError::ParityViolated(format!("r = {r} must be 2t+3 with t >= 0")));
            }
            let tt = (r - 3) / 2;
            if s < 2 || tt > s - 2 {
                return Err(range_err(format!("t = {tt} must satisfy 0 <= t <= s-2 = {}", s as i64 - 2)));
            }
            t = Some(tt as i64);
            out.indices = Some(check_indices(&params.indices, r, h, "indices")?);
            if params.odd_indices.is_some() {
                return Err(ParamError::IndexListInvalid("T2 takes one index list".into()));
            }
        }
        Theorem::T3 => {
            if r < 1 || r > s {
                return Err(range_err(format!("r = {r} must satisfy 1 <= r <= s = {s}")));
            }
            out.indices = Some(check_indices(&params.indices, r, s, "indices")?);
            if params.odd_indices.is_some() {
                return Err(ParamError::IndexListInvalid("T3 takes one index list".into()));
            }
        }
        Theorem::T4 => {
            if r <= s || r >= 2 * s {
                return Err(range_err(format!("r = {r} must satisfy s < r < 2s with s = {s}")));
            }
            let (r1, r2) = (r.div_ceil(2), r / 2);
            split = Some((r1, r2));
            t = Some(r2 as i64);
            out.indices = Some(check_indices(&params.indices, r1, s, "even indices")?);
            out.odd_indices = Some(check_indices(&params.odd_indices, r2, s, "odd indices")?);
        }
        Theorem::T5 => {
            if r < 1 || r > h {
                return Err(range_err(format!("r = {r} must satisfy 1 <= r <= h = {h}")));
            }
            out.indices = Some(check_indices(&params.indices, r, h, "indices")?);
            if params.odd_indices.is_some() {
                return Err(ParamError::IndexListInvalid("T5 takes one index list".into()));
            }
        }
    }

    let bound = k_bound(theorem, q, h, r);
    if k < 1 || k as i64 > bound {
        return Err(range_err(format!("k = {k} must satisfy 1 <= k <= {bound}")));
    }

    let m = (q * q - 1) / h;
    if theorem == Theorem::T1 && m % p == 0 {
        return Err(ParamError::CharacteristicDividesM(m));
    }
    let field = field_for_q(q)?;
    let w = |e: i64| field.from_log(e);
    let (qi, hi, mi) = (q as i64, h as i64, m as i64);
    let (alpha, xi, base_exponent) = match theorem {
        Theorem::T1 => {
            let a = if h % 2 == 0 {
                s as i64 - t.unwrap()
            } else {
                s as i64 - t.unwrap() + 1
            };
            (Some(w(mi)), None, Some(a))
        }
        Theorem::T2 => (
            Some(w(mi)),
            Some(w((qi + 1) / hi - qi - 1)),
            Some(s as i64 - t.unwrap()),
        ),
        Theorem::T3 => (Some(w(2 * mi)), Some(w(-qi - 1)), None),
        Theorem::T4 => (Some(w(mi)), Some(w(-(qi + 1) / 2)), None),
        Theorem::T5 => (None, None, None),
    };
    Ok(ValidatedParams {
        params: out,
        field,
        n: code_length(theorem, q, h, r),
        m,
        s,
        t,
        theta: w(hi),
        alpha,
        xi,
        base_exponent,
        split,
        k_max: bound as u64,
    })
}

/// How the multiplier norms were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Route {
    /// Totally nonzero kernel vector, then descent to GF(q).
    CountingDescent,
    /// One-dimensional kernel normalised into GF(q).
    Rank1Descent,
    /// Closed-form norms from the Lagrange weights.
    LagrangeClosedForm,
    /// GF(q)-rational kernel of the full gram system, searched for a
    /// totally nonzero vector.
    NormProfileSearch,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Route::CountingDescent => "counting+descent",
            Route::Rank1Descent => "rank1+descent",
            Route::LagrangeClosedForm => "lagrange-closed-form",
            Route::NormProfileSearch => "norm-profile-search",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("solver: {0}")]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Grs(#[from] GrsError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("subfield assertion failed: {0}")]
    SubfieldAssertionFailed(String),
    #[error("no Hermitian self-orthogonal multipliers exist for these locators: {0}")]
    NoSelfOrthogonalMultipliers(SearchOutcome),
    #[error("norm search gave up after {0} draws")]
    SearchBudgetSpent(u64),
}

impl ConstructError {
    pub fn is_param_error(&self) -> bool {
        matches!(self, ConstructError::Params(_))
    }
}

/// A constructed code with the data that produced it.
#[derive(Debug, Clone)]
pub struct Construction {
    pub params: ValidatedParams,
    pub code: GrsSpec,
    pub route: Route,
    /// The linear system whose GF(q)* solution fixes the norms.
    pub system: Option<FMatrix>,
    pub solution: Vec<Felt>,
    /// The multiplier norms `v_i^(q+1)`.
    pub norms: Vec<Felt>,
    /// Locators where the closed-form norm step breaks down (T5).
    pub degenerate_locators: Vec<usize>,
}

impl Construction {
    /// Which multiples `u * m` survive the coset sums, measured on the code.
    ///
    /// For each `0 <= i, j < k` the sum over the first coset of
    /// `N_nu (c theta^nu)^(q i + j)` is evaluated directly; a nonzero sum
    /// must come from `m | q i + j + offset`, and contributes `u`.
    pub fn coset_u_set(&self) -> Option<Result<BTreeSet<u64>, String>> {
        let sc = self.params.exponent_scenario()?;
        let (m, off, q) = (sc.m(), sc.offset(), sc.q);
        let skip = usize::from(self.params.theorem() == Theorem::T1);
        let locs = &self.code.locators()[skip..skip + m as usize];
        let norms = &self.norms[skip..skip + m as usize];
        let zero = self.params.field.zero();
        let mut out = BTreeSet::new();
        for i in 0..self.params.params.k {
            for j in 0..self.params.params.k {
                let e = q * i + j;
                let sum = locs
                    .iter()
                    .zip(norms)
                    .fold(zero, |acc, (&a, &nv)| acc + nv * a.pow(e));
                if sum.is_zero() {
                    continue;
                }
                let x = e + off;
                if x % m != 0 {
                    return Some(Err(format!("coset sum nonzero at (i, j) = ({i}, {j}) but m does not divide {x}")));
                }
                out.insert(x / m);
            }
        }
        Some(Ok(out))
    }
}

pub fn construct(params: &ConstructionParams) -> Result<Construction, ConstructError> {
    let v = validate(params)?;
    match v.theorem() {
        Theorem::T1 => construct_theorem1(&v),
        Theorem::T2 => construct_theorem2(&v),
        Theorem::T3 => construct_theorem3(&v),
        Theorem::T4 => construct_theorem4(&v),
        Theorem::T5 => construct_theorem5(&v),
    }
}

/// `[[n, n - 2k, k + 1]]_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuantumParams {
    pub q: u64,
    pub n: u64,
    pub logical_dim: u64,
    pub distance: u64,
}

impl QuantumParams {
    /// `2d = n - k + 2`.
    pub fn meets_singleton(&self) -> bool {
        2 * self.distance + self.logical_dim == self.n + 2
    }
}

impl fmt::Display for QuantumParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{},{}]]_{}", self.n, self.logical_dim, self.distance, self.q)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuantumError {
    #[error("code is not Hermitian self-orthogonal")]
    NotSelfOrthogonal,
    #[error("code is not MDS")]
    NotMds,
    #[error("distance {0} is below 2")]
    DistanceTooSmall(u64),
    #[error("2k = {0} exceeds n = {1}")]
    DimensionTooLarge(u64, u64),
}

/// Quantum parameters of a certified code.
pub fn to_quantum(code: &GrsSpec, cert: &CertBundle) -> Result<QuantumParams, QuantumError> {
    if !cert.herm_ok {
        return Err(QuantumError::NotSelfOrthogonal);
    }
    if !cert.mds_ok {
        return Err(QuantumError::NotMds);
    }
    let (n, k) = (code.n() as u64, code.k() as u64);
    if 2 * k > n {
        return Err(QuantumError::DimensionTooLarge(2 * k, n));
    }
    let qp = QuantumParams {
        q: code.field().q(),
        n,
        logical_dim: n - 2 * k,
        distance: k + 1,
    };
    assert!(qp.meets_singleton());
    Ok(qp)
}

/// `[[n, n-2k, k+1]] -> [[n-1, n-2k+1, k]]`.
pub fn propagate(qp: &QuantumParams) -> Result<QuantumParams, QuantumError> {
    if qp.distance < 2 {
        return Err(QuantumError::DistanceTooSmall(qp.distance));
    }
    let out = QuantumParams {
        q: qp.q,
        n: qp.n - 1,
        logical_dim: qp.logical_dim + 1,
        distance: qp.distance - 1,
    };
    debug_assert_eq!(out.meets_singleton(), qp.meets_singleton());
    Ok(out)
}

/// All `(h, r)` pairs a family admits at `q`, with the largest `k`.
pub fn admissible_shapes(theorem: Theorem, q: u64) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for h in 1..=q + 1 {
        for r in 1..=h {
            let p = ConstructionParams::new(theorem, q, h, r, 1);
            if validate(&p).is_ok() {
                out.push((h, r, k_bound(theorem, q, h, r) as u64));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests;
