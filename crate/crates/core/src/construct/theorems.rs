use std::collections::BTreeSet;

use super::{ConstructError, Construction, Route, ValidatedParams};
use crate::field::{Felt, GaloisField};
use crate::grs::{lagrange_weights, GrsSpec};
use crate::matrix::FMatrix;
use crate::solver::{
    base_field_kernel, descend, search_totally_nonzero, solve_all_nonzero, solve_rank1_descent,
    SearchOptions, SearchOutcome,
};

/// Locators `w^e theta^nu` for each coset exponent `e`, `nu = 0..m`.
fn coset_locators(v: &ValidatedParams, exponents: &[i64]) -> Vec<Felt> {
    let f = v.field;
    exponents
        .iter()
        .flat_map(|&e| (0..v.m).map(move |nu| f.from_log(e) * v.theta.pow(nu)))
        .collect()
}

/// Multipliers `v_l * step^nu` down each coset, with `v_l^(q+1) = u_l`.
fn coset_multipliers(
    v: &ValidatedParams,
    solution: &[Felt],
    step: Felt,
) -> Result<Vec<Felt>, ConstructError> {
    let mut out = Vec::with_capacity(solution.len() * v.m as usize);
    for &u in solution {
        let base = u.solve_norm()?;
        out.extend((0..v.m).map(|nu| base * step.pow(nu)));
    }
    Ok(out)
}

fn finish(
    v: &ValidatedParams,
    locators: Vec<Felt>,
    multipliers: Vec<Felt>,
    route: Route,
    system: Option<FMatrix>,
    solution: Vec<Felt>,
) -> Result<Construction, ConstructError> {
    let code = GrsSpec::new(v.field, locators, multipliers, v.params.k as usize)?
        .with_provenance(v.params.clone());
    let norms = code.norms();
    Ok(Construction {
        params: v.clone(),
        code,
        route,
        system,
        solution,
        norms,
        degenerate_locators: Vec::new(),
    })
}

/// Zero plus `r` cosets `w^l <theta>`, `l = 1..r`.
pub fn construct_theorem1(v: &ValidatedParams) -> Result<Construction, ConstructError> {
    let f = v.field;
    let r = v.params.r as usize;
    let alpha = v.alpha.expect("derived");
    let a = v.base_exponent.expect("derived") as u64;
    // unknowns (u_0, u_1, .., u_r); row 0 is the constant term
    let system = FMatrix::from_fn(f, r - 1, r + 1, |row, col| match (row, col) {
        (0, _) => f.one(),
        (_, 0) => f.zero(),
        _ => alpha.pow(col as u64 * (a + row as u64 - 1)),
    });
    let start = solve_all_nonzero(&system)?;
    let u = descend(&system, &start)?;

    let m_scalar = f.from_int((v.m % f.characteristic()) as i64);
    let mut multipliers = vec![(u[0] * m_scalar).solve_norm()?];
    multipliers.extend(coset_multipliers(v, &u[1..], f.one())?);
    let mut locators = vec![f.zero()];
    let exps: Vec<i64> = (1..=r as i64).collect();
    locators.extend(coset_locators(v, &exps));
    finish(v, locators, multipliers, Route::CountingDescent, Some(system), u)
}

/// `r = 2t + 3` cosets `w^(i_l) <theta>` with multipliers stepping by `w^(h-1)`.
pub fn construct_theorem2(v: &ValidatedParams) -> Result<Construction, ConstructError> {
    let f = v.field;
    let idx = v.indices();
    let r = idx.len();
    let (alpha, xi) = (v.alpha.expect("derived"), v.xi.expect("derived"));
    let a = v.base_exponent.expect("derived") as u64;
    let system = FMatrix::from_fn(f, r - 1, r, |rho, l| {
        alpha.pow(idx[l] * (a + rho as u64)) * xi.pow(idx[l])
    });
    let u = solve_rank1_descent(&system)?;
    let exps: Vec<i64> = idx.iter().map(|&i| i as i64).collect();
    let step = f.from_log(v.params.h as i64 - 1);
    let multipliers = coset_multipliers(v, &u, step)?;
    finish(v, coset_locators(v, &exps), multipliers, Route::Rank1Descent, Some(system), u)
}

/// Even-exponent cosets `w^(2 i_l) <theta>`, multipliers stepping by `w^s`.
pub fn construct_theorem3(v: &ValidatedParams) -> Result<Construction, ConstructError> {
    let f = v.field;
    let idx = v.indices();
    let r = idx.len();
    let (alpha, xi) = (v.alpha.expect("derived"), v.xi.expect("derived"));
    let system = FMatrix::from_fn(f, r - 1, r, |rho, l| {
        alpha.pow(idx[l] * (rho as u64 + 1)) * xi.pow(idx[l])
    });
    let u = solve_rank1_descent(&system)?;
    let exps: Vec<i64> = idx.iter().map(|&i| 2 * i as i64).collect();
    let multipliers = coset_multipliers(v, &u, f.from_log(v.s as i64))?;
    finish(v, coset_locators(v, &exps), multipliers, Route::Rank1Descent, Some(system), u)
}

/// `ceil(r/2)` even-exponent and `floor(r/2)` odd-exponent cosets. The even
/// and odd unknowns decouple into two blocks.
pub fn construct_theorem4(v: &ValidatedParams) -> Result<Construction, ConstructError> {
    let f = v.field;
    let (even, odd) = (v.indices(), v.odd_indices());
    let (r1, r2) = (even.len(), odd.len());
    let (alpha, xi) = (v.alpha.expect("derived"), v.xi.expect("derived"));
    let t = v.t.expect("derived") as u64;
    let block_rows = t.saturating_sub(1) as usize;
    let exps: Vec<u64> = even
        .iter()
        .map(|&i| 2 * i)
        .chain(odd.iter().map(|&j| 2 * j + 1))
        .collect();
    let system = FMatrix::from_fn(f, 2 * block_rows, r1 + r2, |row, col| {
        let upper = row < block_rows;
        let u = (row % block_rows.max(1)) as u64 + 1;
        if upper != (col < r1) {
            return f.zero();
        }
        alpha.pow(exps[col] * u) * xi.pow(exps[col])
    });
    let start = solve_all_nonzero(&system)?;
    let u = descend(&system, &start)?;
    let exps: Vec<i64> = exps.iter().map(|&e| e as i64).collect();
    let multipliers = coset_multipliers(v, &u, f.from_log(v.s as i64))?;
    finish(v, coset_locators(v, &exps), multipliers, Route::CountingDescent, Some(system), u)
}

/// Lagrange weights of the coset locators from the product formula
/// `m a^(m-1) prod_{s != lambda} (w^(m i_lambda) - w^(m i_s))`.
pub fn closed_form_weights(v: &ValidatedParams, locators: &[Felt]) -> Vec<Felt> {
    let f = v.field;
    let idx = v.indices();
    let m = v.m;
    let m_scalar = f.from_int((m % f.characteristic()) as i64);
    let reps: Vec<Felt> = idx.iter().map(|&i| f.from_log((m * i) as i64)).collect();
    locators
        .iter()
        .enumerate()
        .map(|(pos, &a)| {
            let lambda = pos / m as usize;
            let cross = reps
                .iter()
                .enumerate()
                .filter(|&(s, _)| s != lambda)
                .fold(f.one(), |acc, (_, &x)| acc * (reps[lambda] - x));
            m_scalar * a.pow(m - 1) * cross
        })
        .collect()
}

fn search_seed(v: &ValidatedParams) -> u64 {
    let p = &v.params;
    ((p.q * 1000 + p.h) * 1000 + p.r) * 1000 + p.k
}

/// Rows `(a_l^(q i + j))_l` for the distinct exponents with `i, j < k`.
pub fn gram_system(field: &'static GaloisField, locators: &[Felt], k: u64) -> FMatrix {
    let q = field.q();
    let exps: BTreeSet<u64> = (0..k).flat_map(|i| (0..k).map(move |j| q * i + j)).collect();
    let rows = exps
        .iter()
        .map(|&e| locators.iter().map(|a| a.pow(e)).collect())
        .collect();
    FMatrix::from_rows(field, locators.len(), rows)
}

/// `r` cosets `w^(i_l) <theta>` with `h | q - 1`.
///
/// Norms come from the closed form `(a_i u_i)^(-1) (a_i^q + a_i)`. When some
/// locator has `a^q + a = 0` that formula gives a zero multiplier; the norms
/// are then taken from a totally nonzero GF(q)-rational kernel vector of the
/// gram system instead.
pub fn construct_theorem5(v: &ValidatedParams) -> Result<Construction, ConstructError> {
    let f = v.field;
    let exps: Vec<i64> = v.indices().iter().map(|&i| i as i64).collect();
    let locators = coset_locators(v, &exps);
    let direct = lagrange_weights(&locators)?.u;
    let closed = closed_form_weights(v, &locators);
    if let Some(i) = (0..locators.len()).find(|&i| direct[i] != closed[i]) {
        return Err(ConstructError::SubfieldAssertionFailed(format!(
            "closed-form Lagrange weight differs from the product at position {i}"
        )));
    }
    let scaled: Vec<Felt> = locators.iter().zip(&direct).map(|(&a, &u)| a * u).collect();
    if let Some(i) = scaled.iter().position(|x| x.is_zero() || !x.in_base_field()) {
        return Err(ConstructError::SubfieldAssertionFailed(format!(
            "a_i u_i is not in GF(q)* at position {i}"
        )));
    }
    let traces: Vec<Felt> = locators.iter().map(|&a| a.frobenius() + a).collect();
    let degenerate: Vec<usize> = (0..traces.len()).filter(|&i| traces[i].is_zero()).collect();

    if degenerate.is_empty() {
        let mut multipliers = Vec::with_capacity(locators.len());
        for (s, t) in scaled.iter().zip(&traces) {
            multipliers.push(s.inv().solve_norm()? * t.solve_norm()?);
        }
        let solution: Vec<Felt> = multipliers.iter().map(Felt::norm).collect();
        return finish(v, locators, multipliers, Route::LagrangeClosedForm, None, solution);
    }

    let system = gram_system(f, &locators, v.params.k);
    let basis = base_field_kernel(&system);
    let opts = SearchOptions {
        seed: search_seed(v),
        ..SearchOptions::default()
    };
    let norms = match search_totally_nonzero(f, &basis, locators.len(), opts) {
        SearchOutcome::Found(norms) => norms,
        SearchOutcome::BudgetSpent { tried } => return Err(ConstructError::SearchBudgetSpent(tried)),
        outcome @ SearchOutcome::Exhausted { .. } => {
            return Err(ConstructError::NoSelfOrthogonalMultipliers(outcome))
        }
    };
    let multipliers = norms
        .iter()
        .map(Felt::solve_norm)
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = finish(
        v,
        locators,
        multipliers,
        Route::NormProfileSearch,
        Some(system),
        norms,
    )?;
    out.degenerate_locators = degenerate;
    Ok(out)
}
