use super::*;
use crate::exponent::predicted_u_set;
use crate::parallel::Exec;
use crate::verify::{brute_force_multiplier_search, certify, CertifyOptions};

fn params(t: Theorem, q: u64, h: u64, r: u64, k: u64) -> ConstructionParams {
    ConstructionParams::new(t, q, h, r, k)
}

fn quantum(p: &ConstructionParams) -> QuantumParams {
    let c = construct(p).unwrap_or_else(|e| panic!("{p:?}: {e}"));
    let b = certify(&c.code, &CertifyOptions::default());
    assert!(b.passed(), "{p:?}: {b:?}");
    b.quantum.unwrap()
}

fn qp(q: u64, n: u64, logical_dim: u64, distance: u64) -> QuantumParams {
    QuantumParams {
        q,
        n,
        logical_dim,
        distance,
    }
}

#[test]
fn validate_derives_scalars() {
    let v = validate(&params(Theorem::T1, 7, 8, 5, 5)).unwrap();
    assert_eq!((v.n, v.m, v.s, v.t), (31, 6, 4, Some(1)));
    assert_eq!(v.k_max, 5);
    assert_eq!(v.base_exponent, Some(3));

    let v = validate(&params(Theorem::T4, 7, 6, 4, 5)).unwrap();
    assert_eq!(v.split, Some((2, 2)));
    assert_eq!(v.n, 32);
}

#[test]
fn validate_rejections() {
    let kind = |p: ConstructionParams| validate(&p).unwrap_err().kind();
    assert_eq!(kind(params(Theorem::T1, 7, 8, 4, 5)), "parity");
    assert_eq!(
        validate(&params(Theorem::T1, 7, 8, 4, 5)).unwrap_err().to_string(),
        "parity: r+h must be odd"
    );
    assert_eq!(kind(params(Theorem::T4, 7, 6, 4, 6)), "range");
    assert_eq!(kind(params(Theorem::T1, 8, 9, 8, 1)), "range");
    assert_eq!(kind(params(Theorem::T2, 5, 6, 5, 6)), "range");
    assert_eq!(kind(params(Theorem::T1, 6, 7, 4, 1)), "not-prime-power");
    assert_eq!(kind(params(Theorem::T5, 7, 4, 1, 1)), "divisibility");
    assert_eq!(kind(params(Theorem::T3, 8, 7, 1, 1)), "parity");
    assert_eq!(
        kind(params(Theorem::T2, 5, 6, 5, 1).with_indices(vec![0, 1, 2, 3, 6])),
        "index-list"
    );
    assert_eq!(kind(params(Theorem::T1, 7, 8, 5, 1).with_indices(vec![1])), "index-list");
}

#[test]
fn worked_instances() {
    assert_eq!(quantum(&params(Theorem::T1, 7, 8, 5, 5)), qp(7, 31, 21, 6));
    assert_eq!(quantum(&params(Theorem::T2, 5, 6, 5, 4)), qp(5, 20, 12, 5));
    assert_eq!(quantum(&params(Theorem::T5, 4, 3, 2, 2)), qp(4, 10, 6, 3));
    assert_eq!(quantum(&params(Theorem::T3, 5, 4, 2, 4)), qp(5, 12, 4, 5));
    assert_eq!(quantum(&params(Theorem::T4, 7, 6, 4, 5)), qp(7, 32, 22, 6));
}

#[test]
fn propagation() {
    assert_eq!(propagate(&qp(7, 31, 21, 6)), Ok(qp(7, 30, 22, 5)));
    assert_eq!(propagate(&qp(5, 12, 4, 5)), Ok(qp(5, 11, 5, 4)));
    assert_eq!(propagate(&qp(5, 4, 4, 1)), Err(QuantumError::DistanceTooSmall(1)));
}

#[test]
fn routes() {
    let route = |p| construct(&p).unwrap().route;
    assert_eq!(route(params(Theorem::T1, 7, 8, 5, 5)), Route::CountingDescent);
    assert_eq!(route(params(Theorem::T2, 5, 6, 5, 4)), Route::Rank1Descent);
    assert_eq!(route(params(Theorem::T3, 5, 4, 2, 4)), Route::Rank1Descent);
    assert_eq!(route(params(Theorem::T4, 7, 6, 4, 5)), Route::CountingDescent);
    // w^i with i not a multiple of (q+1)/2 has a^q + a != 0
    assert_eq!(route(params(Theorem::T5, 5, 4, 1, 1)), Route::LagrangeClosedForm);
}

#[test]
fn degenerate_trace_locators_use_the_search() {
    let c = construct(&params(Theorem::T5, 4, 3, 2, 2)).unwrap();
    assert_eq!(c.route, Route::NormProfileSearch);
    assert!(!c.degenerate_locators.is_empty());
    for &i in &c.degenerate_locators {
        let a = c.code.locators()[i];
        assert!((a.frobenius() + a).is_zero());
    }
}

#[test]
fn exhausted_norm_search_is_confirmed_by_brute_force() {
    // all of GF(16)* as locators: no self-orthogonal [15, 3] GRS code
    let p = params(Theorem::T5, 4, 3, 3, 3);
    let err = construct(&p).unwrap_err();
    assert!(matches!(err, ConstructError::NoSelfOrthogonalMultipliers(_)), "{err}");
    let f = field_for_q(4).unwrap();
    let locs: Vec<Felt> = (0..15).map(|i| f.from_log(i)).collect();
    assert_eq!(brute_force_multiplier_search(&locs, 3, 1 << 24, Exec::Parallel), Ok(None));
    assert!(brute_force_multiplier_search(&locs, 2, 1 << 24, Exec::Parallel)
        .unwrap()
        .is_some());
}

#[test]
fn construction_is_deterministic() {
    for p in [
        params(Theorem::T1, 7, 8, 5, 5),
        params(Theorem::T4, 7, 6, 4, 5),
        params(Theorem::T5, 4, 3, 2, 2),
    ] {
        let (a, b) = (construct(&p).unwrap(), construct(&p).unwrap());
        assert_eq!(a.code, b.code);
    }
}

#[test]
fn explicit_index_lists() {
    let p = params(Theorem::T2, 5, 6, 5, 4).with_indices(vec![1, 2, 3, 4, 5]);
    assert_eq!(quantum(&p), qp(5, 20, 12, 5));
    let p = params(Theorem::T4, 7, 6, 4, 5)
        .with_indices(vec![1, 2])
        .with_odd_indices(vec![0, 2]);
    assert_eq!(quantum(&p), qp(7, 32, 22, 6));
}

#[test]
fn small_fields_self_orthogonal_at_k_max() {
    for theorem in Theorem::ALL {
        for q in [3, 4, 5, 7] {
            for (h, r, k_max) in admissible_shapes(theorem, q) {
                let p = params(theorem, q, h, r, k_max);
                let c = match construct(&p) {
                    Ok(c) => c,
                    Err(ConstructError::NoSelfOrthogonalMultipliers(_)) => {
                        assert_eq!((theorem, q), (Theorem::T5, 4), "{p:?}");
                        continue;
                    }
                    Err(e) => panic!("{p:?}: {e}"),
                };
                assert!(c.code.is_hermitian_self_orthogonal(), "{p:?}");
                if let Some(measured) = c.coset_u_set() {
                    let sc = c.params.exponent_scenario().unwrap();
                    assert_eq!(measured.unwrap(), predicted_u_set(&sc).unwrap(), "{p:?}");
                }
            }
        }
    }
}

#[test]
fn t5_closed_form_weights_match() {
    let v = validate(&params(Theorem::T5, 7, 3, 2, 2)).unwrap();
    let f = v.field;
    let locs: Vec<Felt> = [0i64, 1]
        .iter()
        .flat_map(|&e| (0..v.m).map(move |nu| f.from_log(e) * v.theta.pow(nu)))
        .collect();
    let direct = crate::grs::lagrange_weights(&locs).unwrap().u;
    assert_eq!(theorems::closed_form_weights(&v, &locs), direct);
}

#[test]
fn table_shapes() {
    let t1 = admissible_shapes(Theorem::T1, 7);
    assert!(t1.contains(&(8, 5, 5)));
    let t3 = admissible_shapes(Theorem::T3, 5);
    assert!(t3.contains(&(4, 2, 4)));
    assert!(admissible_shapes(Theorem::T3, 4).is_empty());
}
