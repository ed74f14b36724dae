//! Certification of GRS codes: self-orthogonality by two routes, MDS-ness,
//! and the quantum parameters that follow.

use std::collections::BTreeSet;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{binomial, saturating_pow};
use crate::construct::{to_quantum, ConstructionParams, QuantumParams};
use crate::field::Felt;
use crate::grs::GrsSpec;
use crate::matrix::FMatrix;
use crate::parallel::Exec;

pub const DEFAULT_MINOR_BUDGET: u128 = 10_000_000;
pub const DEFAULT_WORD_BUDGET: u128 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("needs {needed} steps, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
}

fn within(needed: u128, budget: u128) -> Result<(), VerifyError> {
    if needed > budget {
        Err(VerifyError::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}

/// Result of the k-subset minor enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinorVerdict {
    /// Every `k x k` minor is nonzero; `minors` were covered.
    AllNonsingular { minors: u128 },
    /// These columns are linearly dependent, so every k-subset containing
    /// them is singular.
    Dependent(Vec<usize>),
}

/// Echelon basis of the chosen columns: `(pivot, vector)` with the vector
/// normalised to 1 at its pivot and 0 at every earlier pivot.
fn reduce(basis: &[(usize, Vec<Felt>)], mut v: Vec<Felt>) -> Option<(usize, Vec<Felt>)> {
    for (p, b) in basis {
        let c = v[*p];
        if !c.is_zero() {
            for (x, &y) in v.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
    }
    let p = v.iter().position(|x| !x.is_zero())?;
    let inv = v[p].inv();
    for x in v.iter_mut() {
        *x *= inv;
    }
    Some((p, v))
}

fn minors_dfs(
    columns: &[Vec<Felt>],
    k: usize,
    next: usize,
    chosen: &mut Vec<usize>,
    basis: &mut Vec<(usize, Vec<Felt>)>,
) -> Option<Vec<usize>> {
    if chosen.len() == k {
        return None;
    }
    let n = columns.len();
    let remaining = k - chosen.len();
    for c in next..=n - remaining {
        chosen.push(c);
        match reduce(basis, columns[c].clone()) {
            None => return Some(chosen.clone()),
            Some(entry) => {
                basis.push(entry);
                let found = minors_dfs(columns, k, c + 1, chosen, basis);
                basis.pop();
                if found.is_some() {
                    return found;
                }
            }
        }
        chosen.pop();
    }
    None
}

/// Checks every `k x k` minor of a `k x n` matrix by depth-first column
/// selection with incremental elimination. Work is split on the first
/// column.
pub fn check_minors(g: &FMatrix, budget: u128, exec: Exec) -> Result<MinorVerdict, VerifyError> {
    let (k, n) = (g.rows(), g.cols());
    let total = binomial(n as u64, k as u64);
    within(total, budget)?;
    if k == 0 || k > n {
        return Ok(MinorVerdict::AllNonsingular { minors: total });
    }
    let columns: Vec<Vec<Felt>> = (0..n).map(|j| g.column(j)).collect();
    let witness = exec.find_first(0..n - k + 1, |first| {
        let mut chosen = vec![first];
        let Some(entry) = reduce(&[], columns[first].clone()) else {
            return Some(chosen);
        };
        let mut basis = vec![entry];
        minors_dfs(&columns, k, first + 1, &mut chosen, &mut basis)
    });
    Ok(match witness {
        Some(cols) => MinorVerdict::Dependent(cols),
        None => MinorVerdict::AllNonsingular { minors: total },
    })
}

/// MDS by k-subset minors of the generator matrix.
pub fn check_mds(code: &GrsSpec, budget: u128, exec: Exec) -> Result<bool, VerifyError> {
    Ok(matches!(
        check_minors(&code.generator_matrix(), budget, exec)?,
        MinorVerdict::AllNonsingular { .. }
    ))
}

/// MDS by the Vandermonde factorisation: the generator is recomputed as
/// `v_i a_i^j` by repeated multiplication and compared entrywise, and the
/// locators and multipliers are checked directly. Each `k x k` minor is
/// then `prod v_i` times a Vandermonde determinant of distinct locators.
pub fn check_mds_structural(code: &GrsSpec) -> bool {
    let g = code.generator_matrix();
    let (locs, mults) = (code.locators(), code.multipliers());
    let distinct = locs.iter().map(Felt::canonical_key).collect::<BTreeSet<_>>().len() == locs.len();
    if !distinct || mults.iter().any(Felt::is_zero) {
        return false;
    }
    (0..code.n()).all(|i| {
        let mut entry = mults[i];
        (0..code.k()).all(|j| {
            let ok = g.get(j, i) == entry;
            entry *= locs[i];
            ok
        })
    })
}

/// Minimum nonzero weight by enumerating messages. Only messages whose
/// leading nonzero coefficient is 1 are visited; scaling covers the rest.
pub fn check_min_distance_exhaustive(
    code: &GrsSpec,
    budget: u128,
    exec: Exec,
) -> Result<u64, VerifyError> {
    let f = code.field();
    let (k, n) = (code.k(), code.n());
    let order = f.order();
    within(saturating_pow(order, k as u64), budget)?;
    let g = code.generator_matrix();
    let digit = |d: u64| if d == 0 { f.zero() } else { f.from_log(d as i64 - 1) };
    // leading coefficient 1 at position `lead`, arbitrary below it
    let best = exec.map_range(0..k, |lead| {
        let tail = order.pow(lead as u32);
        let mut best = n as u64;
        for idx in 0..tail {
            let mut word: Vec<Felt> = g.row(lead).to_vec();
            let mut rest = idx;
            for j in 0..lead {
                let c = digit(rest % order);
                rest /= order;
                if !c.is_zero() {
                    for (x, &y) in word.iter_mut().zip(g.row(j)) {
                        *x += c * y;
                    }
                }
            }
            let wt = word.iter().filter(|x| !x.is_zero()).count() as u64;
            best = best.min(wt);
        }
        best
    });
    Ok(best.into_iter().min().unwrap_or(0))
}

/// Exhaustive search for a Hermitian self-orthogonal choice of multipliers.
///
/// Only the norms `N_i = v_i^(q+1)` in GF(q)* matter and the condition is
/// invariant under scaling, so `N_0 = 1` is fixed, the middle coordinates
/// range over GF(q)*, and the last is forced by the `a^0` equation
/// `sum N_i = 0`. Returns multipliers with those norms, or `None` when the
/// space is exhausted.
pub fn brute_force_multiplier_search(
    locators: &[Felt],
    k: usize,
    budget: u128,
    exec: Exec,
) -> Result<Option<Vec<Felt>>, VerifyError> {
    let n = locators.len();
    if n == 0 {
        return Ok(None);
    }
    let f = locators[0].field();
    let q = f.q();
    if n == 1 {
        return Ok(None);
    }
    within(saturating_pow(q - 1, n.saturating_sub(2) as u64), budget)?;
    let exps: Vec<u64> = (0..k as u64)
        .flat_map(|i| (0..k as u64).map(move |j| q * i + j))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let powers: Vec<Vec<Felt>> = locators
        .iter()
        .map(|a| exps.iter().map(|&e| a.pow(e)).collect())
        .collect();
    let units: Vec<Felt> = f.base_field_elements().filter(|x| !x.is_zero()).collect();

    let search = |second: usize| -> Option<Vec<Felt>> {
        let mut norms = vec![f.one(); n];
        let mut sums: Vec<Felt> = powers[0].clone();
        if n > 2 {
            norms[1] = units[second];
            for (s, &p) in sums.iter_mut().zip(&powers[1]) {
                *s += units[second] * p;
            }
        } else if second > 0 {
            return None;
        }
        norm_dfs(&powers, &units, 2.min(n - 1), &mut norms, &mut sums)
    };
    let found = exec.find_first(0..units.len(), search);
    Ok(found.map(|norms| {
        norms
            .iter()
            .map(|nv| nv.solve_norm().expect("norm lies in GF(q)*"))
            .collect()
    }))
}

fn norm_dfs(
    powers: &[Vec<Felt>],
    units: &[Felt],
    depth: usize,
    norms: &mut Vec<Felt>,
    sums: &mut Vec<Felt>,
) -> Option<Vec<Felt>> {
    let n = powers.len();
    if depth == n - 1 {
        // exponent 0 is always first, and its power row is all ones
        let last = -sums[0];
        if last.is_zero() {
            return None;
        }
        let ok = sums
            .iter()
            .zip(&powers[depth])
            .all(|(&s, &p)| (s + last * p).is_zero());
        if ok {
            norms[depth] = last;
            return Some(norms.clone());
        }
        return None;
    }
    for &u in units {
        norms[depth] = u;
        for (s, &p) in sums.iter_mut().zip(&powers[depth]) {
            *s += u * p;
        }
        let found = norm_dfs(powers, units, depth + 1, norms, sums);
        for (s, &p) in sums.iter_mut().zip(&powers[depth]) {
            *s -= u * p;
        }
        if found.is_some() {
            return found;
        }
    }
    None
}

/// How MDS-ness was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "route")]
pub enum MdsRoute {
    Minors { count: u128 },
    Codewords { count: u128 },
    /// Neither enumeration fits its budget; the Vandermonde factorisation
    /// was checked instead.
    Structural,
    /// Neither enumeration fits and the structural route was disabled.
    BudgetExceeded,
}

#[derive(Debug, Clone, Copy)]
pub struct CertifyOptions {
    pub minor_budget: u128,
    pub word_budget: u128,
    pub allow_structural: bool,
    pub exec: Exec,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            minor_budget: DEFAULT_MINOR_BUDGET,
            word_budget: DEFAULT_WORD_BUDGET,
            allow_structural: true,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Timing {
    pub gram_secs: f64,
    pub dual_secs: f64,
    pub mds_secs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertBundle {
    /// Gram route.
    pub herm_ok: bool,
    /// Polynomial interpolation route.
    pub herm_ok_dual: bool,
    pub mds_ok: bool,
    pub mds_route: MdsRoute,
    /// Exact minimum distance, when the codeword route ran.
    pub min_distance: Option<u64>,
    pub quantum: Option<QuantumParams>,
    /// Nonzero gram positions `(i, j)`.
    pub gram_nonzero: Vec<(usize, usize)>,
    pub timing: Timing,
    pub params_echo: Option<ConstructionParams>,
}

impl CertBundle {
    pub fn passed(&self) -> bool {
        self.herm_ok && self.mds_ok
    }
}

/// Runs both self-orthogonality checks and an MDS check.
///
/// # Panics
///
/// When the two self-orthogonality routes disagree; that is an internal
/// error and the message carries the code and its gram.
pub fn certify(code: &GrsSpec, opts: &CertifyOptions) -> CertBundle {
    let mut timing = Timing::default();

    let clock = Instant::now();
    let gram = code.hermitian_gram_with(opts.exec);
    let gram_nonzero = gram.nonzero_entries();
    let herm_ok = gram_nonzero.is_empty();
    timing.gram_secs = clock.elapsed().as_secs_f64();

    let clock = Instant::now();
    let herm_ok_dual = code.dual_contains_check();
    timing.dual_secs = clock.elapsed().as_secs_f64();
    assert_eq!(
        herm_ok, herm_ok_dual,
        "self-orthogonality routes disagree\ncode: {code:?}\ngram: {gram:?}"
    );

    let clock = Instant::now();
    let (n, k) = (code.n() as u64, code.k() as u32);
    let minors = binomial(n, k as u64);
    let words = saturating_pow(code.field().order(), k as u64);
    let minors_fit = minors <= opts.minor_budget;
    let words_fit = words <= opts.word_budget;
    let mut min_distance = None;
    let (mds_ok, mds_route) = if minors_fit && (!words_fit || minors <= words) {
        let ok = check_mds(code, opts.minor_budget, opts.exec).expect("within budget");
        (ok, MdsRoute::Minors { count: minors })
    } else if words_fit {
        let d = check_min_distance_exhaustive(code, opts.word_budget, opts.exec)
            .expect("within budget");
        min_distance = Some(d);
        (d == n - k as u64 + 1, MdsRoute::Codewords { count: words - 1 })
    } else if opts.allow_structural {
        (check_mds_structural(code), MdsRoute::Structural)
    } else {
        (false, MdsRoute::BudgetExceeded)
    };
    timing.mds_secs = clock.elapsed().as_secs_f64();

    let mut bundle = CertBundle {
        herm_ok,
        herm_ok_dual,
        mds_ok,
        mds_route,
        min_distance,
        quantum: None,
        gram_nonzero,
        timing,
        params_echo: code.provenance().cloned(),
    };
    if bundle.passed() {
        let qp = to_quantum(code, &bundle).expect("passing bundle");
        assert!(2 * code.k() <= code.n());
        bundle.quantum = Some(qp);
    }
    bundle
}
