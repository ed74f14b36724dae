//! Kernel vectors whose coordinates all lie in GF(q)*.
//!
//! Three routes cover the shapes the constructions produce: a counting-based
//! search over the kernel, a descent from GF(q^2) to GF(q) for systems whose
//! row space is Frobenius-stable, and a normalisation of a one-dimensional
//! kernel. [`base_field_kernel`] and [`search_totally_nonzero`] handle the
//! general case by working with the GF(q)-rational kernel directly.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arith;
use crate::field::{Felt, GaloisField};
use crate::matrix::FMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("rank hypothesis failed: rank(A) = {full} but deleting column {column} gives {deleted}")]
    HypothesisFailed {
        full: usize,
        column: usize,
        deleted: usize,
    },
    #[error("field of order {order} is too small for {n} unknowns")]
    FieldTooSmall { order: u64, n: usize },
    #[error("no totally nonzero kernel vector found")]
    NotFound,
    #[error("vector is not in the kernel")]
    NotASolution,
    #[error("coordinate {0} is zero")]
    HasZeroCoordinate(usize),
    #[error("row space is not stable under the Frobenius map")]
    FrobeniusHypothesisFailed,
    #[error("no shift j in 1..=q+1 gives a totally nonzero trace vector")]
    NoValidShift,
    #[error("expected an (r-1) x r matrix, got {rows} x {cols}")]
    WrongShape { rows: usize, cols: usize },
    #[error("deleting column {0} leaves a singular square matrix")]
    ColumnDependence(usize),
}

/// Which route a system is solved with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SolveMode {
    /// Rank condition on column deletions, then descent.
    RankEqual,
    /// One-dimensional kernel normalised into GF(q).
    NullspaceDim1,
    /// Descent of a supplied solution.
    DescentOnly,
}

#[derive(Debug, Clone)]
pub struct SolveInstance {
    pub matrix: FMatrix,
    pub mode: SolveMode,
}

impl SolveInstance {
    pub fn new(matrix: FMatrix, mode: SolveMode) -> SolveInstance {
        SolveInstance { matrix, mode }
    }

    pub fn unknowns(&self) -> usize {
        self.matrix.cols()
    }

    /// `start` is required for [`SolveMode::DescentOnly`] and ignored otherwise.
    pub fn solve(&self, start: Option<&[Felt]>) -> Result<Vec<Felt>, SolveError> {
        match self.mode {
            SolveMode::RankEqual => {
                let c = solve_all_nonzero(&self.matrix)?;
                descend(&self.matrix, &c)
            }
            SolveMode::NullspaceDim1 => solve_rank1_descent(&self.matrix),
            SolveMode::DescentOnly => descend(&self.matrix, start.ok_or(SolveError::NotASolution)?),
        }
    }
}

fn is_kernel_vector(a: &FMatrix, v: &[Felt]) -> bool {
    a.mul_vec(v)
        .map(|r| r.iter().all(Felt::is_zero))
        .unwrap_or(false)
}

fn frobenius_stable(a: &FMatrix) -> bool {
    a.row_equivalent(&a.entrywise_frobenius()).unwrap_or(false)
}

fn combine(field: &'static GaloisField, basis: &[Vec<Felt>], coeffs: &[Felt], n: usize) -> Vec<Felt> {
    let mut v = vec![field.zero(); n];
    for (b, &c) in basis.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (x, &y) in v.iter_mut().zip(b) {
            *x += c * y;
        }
    }
    v
}

/// A kernel vector of `a` with every coordinate nonzero in GF(q^2).
///
/// Requires `rank(A) = rank(A_i)` for every column deletion `A_i`. Kernel
/// coefficient tuples are tried in lexicographic order of discrete logs,
/// zero last.
pub fn solve_all_nonzero(a: &FMatrix) -> Result<Vec<Felt>, SolveError> {
    let field = a.field();
    let n = a.cols();
    if field.order() <= n as u64 {
        return Err(SolveError::FieldTooSmall {
            order: field.order(),
            n,
        });
    }
    let full = a.rank();
    for column in 0..n {
        let deleted = a.delete_column(column).expect("in range").rank();
        if deleted != full {
            return Err(SolveError::HypothesisFailed {
                full,
                column,
                deleted,
            });
        }
    }
    let basis = a.nullspace();
    if basis.is_empty() {
        return Err(SolveError::NotFound);
    }
    let elems: Vec<Felt> = field.elements().collect();
    let d = basis.len();
    let mut idx = vec![0usize; d];
    loop {
        let coeffs: Vec<Felt> = idx.iter().map(|&i| elems[i]).collect();
        let v = combine(field, &basis, &coeffs, n);
        if v.iter().all(|x| !x.is_zero()) {
            return Ok(v);
        }
        // odometer, last coordinate fastest
        let mut pos = d;
        loop {
            if pos == 0 {
                return Err(SolveError::NotFound);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < elems.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Moves a totally nonzero kernel vector of a Frobenius-stable system into
/// GF(q)*.
///
/// Returns `c` itself when it already lies over GF(q); otherwise the first
/// `j` in `1..=q+1` for which `w^j c + w^(jq) c^q` has no zero coordinate.
pub fn descend(a: &FMatrix, c: &[Felt]) -> Result<Vec<Felt>, SolveError> {
    if c.len() != a.cols() || !is_kernel_vector(a, c) {
        return Err(SolveError::NotASolution);
    }
    if let Some(i) = c.iter().position(Felt::is_zero) {
        return Err(SolveError::HasZeroCoordinate(i));
    }
    if !frobenius_stable(a) {
        return Err(SolveError::FrobeniusHypothesisFailed);
    }
    if c.iter().all(Felt::in_base_field) {
        return Ok(c.to_vec());
    }
    let field = a.field();
    let q = field.q();
    for j in 1..=q + 1 {
        let shift = field.from_log((j * (q - 1)) as i64);
        let nonzero = c.iter().all(|&x| !(x + shift * x.frobenius()).is_zero());
        if !nonzero {
            continue;
        }
        let wj = field.from_log(j as i64);
        let wjq = wj.frobenius();
        let b: Vec<Felt> = c.iter().map(|&x| wj * x + wjq * x.frobenius()).collect();
        debug_assert!(b.iter().all(|x| x.in_base_field() && !x.is_zero()));
        if !b.iter().all(|x| x.in_base_field()) || !is_kernel_vector(a, &b) {
            return Err(SolveError::FrobeniusHypothesisFailed);
        }
        return Ok(b);
    }
    Err(SolveError::NoValidShift)
}

/// The GF(q)* solution of an `(r-1) x r` system whose column deletions are
/// all invertible and whose row space is Frobenius-stable.
pub fn solve_rank1_descent(a: &FMatrix) -> Result<Vec<Felt>, SolveError> {
    let r = a.cols();
    if r == 0 || a.rows() + 1 != r {
        return Err(SolveError::WrongShape {
            rows: a.rows(),
            cols: r,
        });
    }
    for i in 0..r {
        let sub = a.delete_column(i).expect("in range");
        if sub.determinant().expect("square").is_zero() {
            return Err(SolveError::ColumnDependence(i));
        }
    }
    if !frobenius_stable(a) {
        return Err(SolveError::FrobeniusHypothesisFailed);
    }
    let kernel = a.nullspace();
    assert_eq!(kernel.len(), 1, "column independence forces a 1-dimensional kernel");
    let c = &kernel[0];
    if let Some(i) = c.iter().position(Felt::is_zero) {
        return Err(SolveError::HasZeroCoordinate(i));
    }
    let field = a.field();
    let lambda = c[0].frobenius() / c[0];
    if c.iter().any(|&x| x.frobenius() != lambda * x) {
        return Err(SolveError::FrobeniusHypothesisFailed);
    }
    // (mu c)^q = mu c  iff  mu^(q-1) = lambda^(-1)
    let n = field.group_order();
    let target = (n - lambda.dlog().expect("nonzero")) % n;
    let j = arith::solve_linear_congruence(field.q() - 1, target, n)
        .ok_or(SolveError::FrobeniusHypothesisFailed)?;
    let mu = field.from_log(j as i64);
    let u: Vec<Felt> = c.iter().map(|&x| mu * x).collect();
    if !u.iter().all(Felt::in_base_field) {
        return Err(SolveError::FrobeniusHypothesisFailed);
    }
    Ok(u)
}

/// Splits `z` as `x + y w` with `x, y` in GF(q).
pub fn base_coordinates(z: Felt) -> (Felt, Felt) {
    let field = z.field();
    let w = field.generator();
    let y = (z - z.frobenius()) / (w - w.frobenius());
    (z - y * w, y)
}

/// Basis of `{u in GF(q)^n : A u = 0}`, every entry in GF(q).
pub fn base_field_kernel(a: &FMatrix) -> Vec<Vec<Felt>> {
    let field = a.field();
    let mut rows = Vec::with_capacity(2 * a.rows());
    for i in 0..a.rows() {
        let (re, im): (Vec<Felt>, Vec<Felt>) = a.row(i).iter().map(|&z| base_coordinates(z)).unzip();
        rows.push(re);
        rows.push(im);
    }
    FMatrix::from_rows(field, a.cols(), rows).nullspace()
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Exhaustive enumeration when `q^dim` is at most this.
    pub exhaustive_limit: u64,
    /// Number of random draws otherwise.
    pub random_budget: u64,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            exhaustive_limit: 1 << 20,
            random_budget: 1_000_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Vec<Felt>),
    /// Every GF(q)-combination was tried; none is totally nonzero.
    Exhausted { tried: u64 },
    /// Random sampling gave up.
    BudgetSpent { tried: u64 },
}

impl fmt::Display for SearchOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchOutcome::Found(v) => write!(f, "found a vector of length {}", v.len()),
            SearchOutcome::Exhausted { tried } => {
                write!(f, "all {tried} GF(q)-combinations of the kernel basis have a zero coordinate")
            }
            SearchOutcome::BudgetSpent { tried } => write!(f, "{tried} random draws, none totally nonzero"),
        }
    }
}

/// Looks for a GF(q)-combination of `basis` with no zero coordinate.
pub fn search_totally_nonzero(
    field: &'static GaloisField,
    basis: &[Vec<Felt>],
    n: usize,
    opts: SearchOptions,
) -> SearchOutcome {
    let scalars: Vec<Felt> = field.base_field_elements().collect();
    let q = scalars.len();
    let d = basis.len();
    if d == 0 {
        return if n == 0 {
            SearchOutcome::Found(Vec::new())
        } else {
            SearchOutcome::Exhausted { tried: 1 }
        };
    }
    let space = arith::saturating_pow(q as u64, d as u64);
    if space <= opts.exhaustive_limit as u128 {
        let mut idx = vec![0usize; d];
        let mut tried = 0u64;
        loop {
            tried += 1;
            let coeffs: Vec<Felt> = idx.iter().map(|&i| scalars[i]).collect();
            let v = combine(field, basis, &coeffs, n);
            if v.iter().all(|x| !x.is_zero()) {
                return SearchOutcome::Found(v);
            }
            let mut pos = d;
            loop {
                if pos == 0 {
                    return SearchOutcome::Exhausted { tried };
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < q {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for tried in 1..=opts.random_budget {
        let coeffs: Vec<Felt> = (0..d).map(|_| scalars[rng.gen_range(0..q)]).collect();
        let v = combine(field, basis, &coeffs, n);
        if v.iter().all(|x| !x.is_zero()) {
            return SearchOutcome::Found(v);
        }
        if tried == opts.random_budget {
            break;
        }
    }
    SearchOutcome::BudgetSpent {
        tried: opts.random_budget,
    }
}
