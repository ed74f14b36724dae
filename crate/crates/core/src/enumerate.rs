//! Construct and certify every admissible parameter tuple in a box.

use std::fmt;

use serde::Serialize;

use crate::arith::prime_power;
use crate::construct::{construct, k_bound, validate, ConstructionParams, Route, Theorem};
use crate::verify::{certify, CertBundle, CertifyOptions};

/// Every `(theorem, q, h, r, k)` with `q` in `qs`, `n <= max_n` and default
/// index lists that passes validation, in lexicographic order.
pub fn grid(qs: &[u64], max_n: u64) -> Vec<ConstructionParams> {
    let mut out = Vec::new();
    for theorem in Theorem::ALL {
        for &q in qs {
            for h in 1..=q + 1 {
                for r in 1..=h {
                    let bound = k_bound(theorem, q, h, r);
                    for k in 1..=bound.max(0) as u64 {
                        let p = ConstructionParams::new(theorem, q, h, r, k);
                        if let Ok(v) = validate(&p) {
                            if v.n <= max_n {
                                out.push(p);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Prime powers in `[2, max_q]`.
pub fn prime_powers_up_to(max_q: u64) -> Vec<u64> {
    (2..=max_q).filter(|&q| prime_power(q).is_some()).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub theorem: Theorem,
    pub q: u64,
    pub h: u64,
    pub r: u64,
    pub k: u64,
    pub n: u64,
    /// `n - 2k`.
    pub kq: u64,
    pub d: u64,
    pub herm_ok: bool,
    pub mds_ok: bool,
    #[serde(skip)]
    pub route: Option<Route>,
    #[serde(skip)]
    pub cert: Option<CertBundle>,
    #[serde(skip)]
    pub error: Option<String>,
}

impl Row {
    pub fn certified(&self) -> bool {
        self.herm_ok && self.mds_ok
    }

    pub const HEADER: [&'static str; 10] =
        ["theorem", "q", "h", "r", "k", "n", "kq", "d", "herm_ok", "mds_ok"];

    pub fn fields(&self) -> [String; 10] {
        [
            self.theorem.number().to_string(),
            self.q.to_string(),
            self.h.to_string(),
            self.r.to_string(),
            self.k.to_string(),
            self.n.to_string(),
            self.kq.to_string(),
            self.d.to_string(),
            self.herm_ok.to_string(),
            self.mds_ok.to_string(),
        ]
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Counts {
    pub constructed: usize,
    pub certified: usize,
    pub failed: usize,
}

impl fmt::Display for Counts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "constructed={} certified={} failed={}",
            self.constructed, self.certified, self.failed
        )
    }
}

/// Constructs and certifies one tuple. A construction error becomes a
/// failed row carrying the claimed parameters.
pub fn run_one(p: &ConstructionParams, opts: &CertifyOptions) -> Row {
    let n = validate(p).map(|v| v.n).unwrap_or(0);
    let mut row = Row {
        theorem: p.theorem,
        q: p.q,
        h: p.h,
        r: p.r,
        k: p.k,
        n,
        kq: n.saturating_sub(2 * p.k),
        d: p.k + 1,
        herm_ok: false,
        mds_ok: false,
        route: None,
        cert: None,
        error: None,
    };
    match construct(p) {
        Ok(c) => {
            let b = certify(&c.code, opts);
            row.herm_ok = b.herm_ok;
            row.mds_ok = b.mds_ok;
            row.route = Some(c.route);
            if let Some(qp) = b.quantum {
                row.kq = qp.logical_dim;
                row.d = qp.distance;
            }
            row.cert = Some(b);
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

pub fn enumerate(tuples: &[ConstructionParams], opts: &CertifyOptions) -> (Vec<Row>, Counts) {
    let rows = opts.exec.map(tuples, |p| run_one(p, opts));
    let mut counts = Counts::default();
    for r in &rows {
        counts.constructed += usize::from(r.route.is_some());
        counts.certified += usize::from(r.certified());
        counts.failed += usize::from(!r.certified());
    }
    (rows, counts)
}
