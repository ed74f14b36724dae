//! Generalized Reed-Solomon codes and their Hermitian self-orthogonality.
//!
//! Two independent tests decide self-orthogonality: the Hermitian gram of
//! the generator rows, and a polynomial criterion that interpolates
//! `N_i f(a_i)^q u_i` through the Lagrange basis and checks the degree.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::construct::ConstructionParams;
use crate::field::{Felt, GaloisField};
use crate::matrix::FMatrix;
use crate::parallel::Exec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrsError {
    #[error("locators {0} and {1} coincide")]
    DuplicateLocators(usize, usize),
    #[error("multiplier {0} is zero")]
    ZeroMultiplier(usize),
    #[error("{locators} locators but {multipliers} multipliers")]
    LengthMismatch { locators: usize, multipliers: usize },
    #[error("dimension {k} outside [1, {n}]")]
    DimensionOutOfRange { k: usize, n: usize },
    #[error("length {n} exceeds the field order {order}")]
    TooLong { n: usize, order: u64 },
    #[error("message has {got} symbols, expected {k}")]
    MessageLength { got: usize, k: usize },
}

/// Polynomial over GF(q^2), constant term first, without trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: &'static GaloisField,
    coeffs: Vec<Felt>,
}

impl Poly {
    pub fn new(field: &'static GaloisField, mut coeffs: Vec<Felt>) -> Poly {
        while coeffs.last().is_some_and(Felt::is_zero) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: &'static GaloisField) -> Poly {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn monomial(field: &'static GaloisField, c: Felt, degree: usize) -> Poly {
        let mut coeffs = vec![field.zero(); degree + 1];
        coeffs[degree] = c;
        Poly::new(field, coeffs)
    }

    /// `prod (x - r)`.
    pub fn from_roots(field: &'static GaloisField, roots: &[Felt]) -> Poly {
        let mut coeffs = vec![field.one()];
        for &r in roots {
            let mut next = vec![field.zero(); coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            coeffs = next;
        }
        Poly::new(field, coeffs)
    }

    pub fn coeffs(&self) -> &[Felt] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Felt {
        self.coeffs.get(i).copied().unwrap_or_else(|| self.field.zero())
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: Felt) -> Felt {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, &c| acc * x + c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(self.field, (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn scale(&self, c: Felt) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|&x| x * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(self.field, out)
    }

    /// Quotient and remainder of division by `x - a`.
    pub fn div_linear(&self, a: Felt) -> (Poly, Felt) {
        let Some(d) = self.degree() else {
            return (Poly::zero(self.field), self.field.zero());
        };
        let mut quotient = vec![self.field.zero(); d];
        let mut carry = self.field.zero();
        for i in (0..=d).rev() {
            let c = self.coeffs[i] + carry * a;
            if i == 0 {
                return (Poly::new(self.field, quotient), c);
            }
            quotient[i - 1] = c;
            carry = c;
        }
        unreachable!()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

/// `u_i = prod_{j != i} (a_i - a_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LagrangeWeights {
    pub u: Vec<Felt>,
}

pub fn lagrange_weights(locators: &[Felt]) -> Result<LagrangeWeights, GrsError> {
    check_distinct(locators)?;
    let u = locators
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            locators
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(a.field().one(), |acc, (_, &b)| acc * (a - b))
        })
        .collect();
    Ok(LagrangeWeights { u })
}

fn check_distinct(locators: &[Felt]) -> Result<(), GrsError> {
    let mut seen = std::collections::HashMap::with_capacity(locators.len());
    for (i, a) in locators.iter().enumerate() {
        if let Some(&j) = seen.get(&a.canonical_key()) {
            return Err(GrsError::DuplicateLocators(j, i));
        }
        seen.insert(a.canonical_key(), i);
    }
    Ok(())
}

/// `GRS_k(a, v)`: evaluations `(v_1 f(a_1), ..., v_n f(a_n))` for `deg f < k`.
#[derive(Clone, PartialEq, Eq)]
pub struct GrsSpec {
    field: &'static GaloisField,
    locators: Vec<Felt>,
    multipliers: Vec<Felt>,
    k: usize,
    provenance: Option<ConstructionParams>,
}

impl GrsSpec {
    pub fn new(
        field: &'static GaloisField,
        locators: Vec<Felt>,
        multipliers: Vec<Felt>,
        k: usize,
    ) -> Result<GrsSpec, GrsError> {
        let n = locators.len();
        if multipliers.len() != n {
            return Err(GrsError::LengthMismatch {
                locators: n,
                multipliers: multipliers.len(),
            });
        }
        if n as u64 > field.order() {
            return Err(GrsError::TooLong {
                n,
                order: field.order(),
            });
        }
        if k < 1 || k > n {
            return Err(GrsError::DimensionOutOfRange { k, n });
        }
        check_distinct(&locators)?;
        if let Some(i) = multipliers.iter().position(Felt::is_zero) {
            return Err(GrsError::ZeroMultiplier(i));
        }
        Ok(GrsSpec {
            field,
            locators,
            multipliers,
            k,
            provenance: None,
        })
    }

    pub fn with_provenance(mut self, params: ConstructionParams) -> GrsSpec {
        self.provenance = Some(params);
        self
    }

    /// Uniformly random distinct locators and nonzero multipliers.
    pub fn random<R: Rng>(
        field: &'static GaloisField,
        n: usize,
        k: usize,
        rng: &mut R,
    ) -> Result<GrsSpec, GrsError> {
        let mut pool: Vec<Felt> = field.elements().collect();
        let order = pool.len();
        if n > order {
            return Err(GrsError::TooLong {
                n,
                order: order as u64,
            });
        }
        for i in 0..n {
            let j = rng.gen_range(i..order);
            pool.swap(i, j);
        }
        pool.truncate(n);
        let multipliers = (0..n)
            .map(|_| field.from_log(rng.gen_range(0..field.group_order()) as i64))
            .collect();
        GrsSpec::new(field, pool, multipliers, k)
    }

    pub fn field(&self) -> &'static GaloisField {
        self.field
    }

    pub fn locators(&self) -> &[Felt] {
        &self.locators
    }

    pub fn multipliers(&self) -> &[Felt] {
        &self.multipliers
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.locators.len()
    }

    pub fn provenance(&self) -> Option<&ConstructionParams> {
        self.provenance.as_ref()
    }

    /// The same code with one multiplier replaced.
    pub fn with_multiplier(&self, i: usize, v: Felt) -> Result<GrsSpec, GrsError> {
        let mut multipliers = self.multipliers.clone();
        multipliers[i] = v;
        let mut out = GrsSpec::new(self.field, self.locators.clone(), multipliers, self.k)?;
        out.provenance = self.provenance.clone();
        Ok(out)
    }

    pub fn with_dimension(&self, k: usize) -> Result<GrsSpec, GrsError> {
        let mut out = GrsSpec::new(self.field, self.locators.clone(), self.multipliers.clone(), k)?;
        out.provenance = self.provenance.clone();
        Ok(out)
    }

    /// `v^(q+1)`, the only part of the multipliers the gram depends on.
    pub fn norms(&self) -> Vec<Felt> {
        self.multipliers.iter().map(Felt::norm).collect()
    }

    /// `k x n`, row `j` is `(v_i a_i^j)_i` with `0^0 = 1`.
    pub fn generator_matrix(&self) -> FMatrix {
        FMatrix::from_fn(self.field, self.k, self.n(), |j, i| {
            self.multipliers[i] * self.locators[i].pow(j as u64)
        })
    }

    pub fn encode(&self, message: &[Felt]) -> Result<Vec<Felt>, GrsError> {
        if message.len() != self.k {
            return Err(GrsError::MessageLength {
                got: message.len(),
                k: self.k,
            });
        }
        let f = Poly::new(self.field, message.to_vec());
        Ok(self
            .locators
            .iter()
            .zip(&self.multipliers)
            .map(|(&a, &v)| v * f.eval(a))
            .collect())
    }

    pub fn hermitian_gram(&self) -> FMatrix {
        self.hermitian_gram_with(Exec::Sequential)
    }

    /// `G[i][j] = sum_l g_j[l] * g_i[l]^q` over the generator rows.
    pub fn hermitian_gram_with(&self, exec: Exec) -> FMatrix {
        let g = self.generator_matrix();
        let conj = g.entrywise_frobenius();
        let n = self.n();
        let rows = exec.map_range(0..self.k, |i| {
            (0..self.k)
                .map(|j| {
                    (0..n).fold(self.field.zero(), |acc, l| acc + g.get(j, l) * conj.get(i, l))
                })
                .collect::<Vec<_>>()
        });
        FMatrix::from_rows(self.field, self.k, rows)
    }

    pub fn is_hermitian_self_orthogonal(&self) -> bool {
        self.hermitian_gram().is_zero()
    }

    /// Polynomial criterion: for each `f = x^j`, `j < k`, the values
    /// `N_i f(a_i)^q u_i` must come from a polynomial of degree at most
    /// `n - k - 1`.
    pub fn dual_contains_check(&self) -> bool {
        let n = self.n();
        let weights = lagrange_weights(&self.locators).expect("locators are distinct");
        let master = Poly::from_roots(self.field, &self.locators);
        // Lagrange basis numerators M(x) / (x - a_i)
        let basis: Vec<Poly> = self
            .locators
            .iter()
            .map(|&a| {
                let (quot, rem) = master.div_linear(a);
                debug_assert!(rem.is_zero());
                quot
            })
            .collect();
        let norms = self.norms();
        let q = self.field.q();
        (0..self.k).all(|j| {
            let mut interp = Poly::zero(self.field);
            for i in 0..n {
                let f_conj = self.locators[i].pow(j as u64).pow(q);
                let y = norms[i] * f_conj * weights.u[i];
                interp = interp.add(&basis[i].scale(y / weights.u[i]));
            }
            (n - self.k..n).all(|d| interp.coeff(d).is_zero())
        })
    }
}

impl fmt::Debug for GrsSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GrsSpec")
            .field("q", &self.field.q())
            .field("n", &self.n())
            .field("k", &self.k)
            .field("locators", &self.locators)
            .field("multipliers", &self.multipliers)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{field_for_q, make_field};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // gram entries straight from sum_l N_l a_l^(q i + j), 0^0 = 1
    fn norm_sum_gram(c: &GrsSpec) -> FMatrix {
        let f = c.field();
        let q = f.q();
        let norms = c.norms();
        FMatrix::from_fn(f, c.k(), c.k(), |i, j| {
            c.locators()
                .iter()
                .zip(&norms)
                .fold(f.zero(), |acc, (&a, &nv)| acc + nv * a.pow(q * i as u64 + j as u64))
        })
    }

    #[test]
    fn generator_examples() {
        let f = field_for_q(5).unwrap();
        let locs: Vec<Felt> = (0..4).map(|i| f.from_log(i)).collect();
        let c = GrsSpec::new(f, locs, vec![f.one(); 4], 1).unwrap();
        let g = c.generator_matrix();
        assert_eq!(g.rows(), 1);
        assert!(g.row(0).iter().all(Felt::is_one));

        let w = f.generator();
        let v = vec![w, w.pow(3)];
        let c = GrsSpec::new(f, vec![f.zero(), f.one()], v.clone(), 2).unwrap();
        let g = c.generator_matrix();
        assert_eq!(g.column(0), vec![v[0], f.zero()]);
    }

    #[test]
    fn invariants_rejected() {
        let f = field_for_q(3).unwrap();
        let one = f.one();
        assert_eq!(
            GrsSpec::new(f, vec![one, one], vec![one, one], 1).unwrap_err(),
            GrsError::DuplicateLocators(0, 1)
        );
        assert_eq!(
            GrsSpec::new(f, vec![one, f.zero()], vec![one, f.zero()], 1).unwrap_err(),
            GrsError::ZeroMultiplier(1)
        );
        assert_eq!(
            GrsSpec::new(f, vec![one], vec![one], 2).unwrap_err(),
            GrsError::DimensionOutOfRange { k: 2, n: 1 }
        );
    }

    #[test]
    fn gram_small_example() {
        // four locators of GF(9), all multipliers 1: G[0][0] = 4 = 1 in F_3
        let f = make_field(3, 1).unwrap();
        let locs: Vec<Felt> = [0, 1, 2, 5].iter().map(|&i| f.from_log(i)).collect();
        let c = GrsSpec::new(f, locs, vec![f.one(); 4], 1).unwrap();
        assert!(c.hermitian_gram().get(0, 0).is_one());
        assert!(!c.is_hermitian_self_orthogonal());
        assert!(!c.dual_contains_check());
    }

    #[test]
    fn lagrange_examples() {
        let f = field_for_q(7).unwrap();
        let u = lagrange_weights(&[f.zero(), f.one()]).unwrap().u;
        assert_eq!(u, vec![-f.one(), f.one()]);
        let g = make_field(3, 1).unwrap();
        let w = g.generator();
        let u = lagrange_weights(&[g.zero(), g.one(), w]).unwrap().u;
        assert_eq!(u[0], (g.zero() - g.one()) * (g.zero() - w));
        assert_eq!(u[1], (g.one() - g.zero()) * (g.one() - w));
        assert_eq!(u[2], (w - g.zero()) * (w - g.one()));
        assert_eq!(
            lagrange_weights(&[w, w]).unwrap_err(),
            GrsError::DuplicateLocators(0, 1)
        );
    }

    #[test]
    fn full_dimension_degenerates() {
        let f = field_for_q(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = GrsSpec::random(f, 4, 4, &mut rng).unwrap();
        // degree bound -1: the interpolant must vanish, which it cannot
        assert!(!c.dual_contains_check());
        assert!(!c.is_hermitian_self_orthogonal());
    }

    #[test]
    fn synthetic_division() {
        let f = field_for_q(5).unwrap();
        let roots: Vec<Felt> = (0..5).map(|i| f.from_log(3 * i)).collect();
        let m = Poly::from_roots(f, &roots);
        for &r in &roots {
            assert!(m.eval(r).is_zero());
            let (quot, rem) = m.div_linear(r);
            assert!(rem.is_zero());
            assert_eq!(quot.mul(&Poly::from_roots(f, &[r])), m);
        }
        let (_, rem) = m.div_linear(f.from_log(1));
        assert_eq!(rem, m.eval(f.from_log(1)));
    }

    proptest! {
        #[test]
        fn gram_routes_agree(seed in 0u64..10_000, n in 2usize..12, k in 1usize..6) {
            let f = field_for_q(5).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = k.min(n);
            let c = GrsSpec::random(f, n, k, &mut rng).unwrap();
            let g = c.hermitian_gram();
            prop_assert_eq!(&g, &norm_sum_gram(&c));
            prop_assert_eq!(&g.transpose().entrywise_frobenius(), &g);
            prop_assert_eq!(c.is_hermitian_self_orthogonal(), c.dual_contains_check());
            prop_assert_eq!(c.generator_matrix().rank(), k);
            prop_assert_eq!(c.hermitian_gram_with(Exec::Parallel), g);
        }

        #[test]
        fn encoding_is_linear(seed in 0u64..10_000) {
            let f = field_for_q(4).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = GrsSpec::random(f, 9, 4, &mut rng).unwrap();
            let pick = |rng: &mut ChaCha8Rng| -> Vec<Felt> {
                (0..4).map(|_| f.elements().nth(rng.gen_range(0..16)).unwrap()).collect()
            };
            let a = pick(&mut rng);
            let b = pick(&mut rng);
            let sum: Vec<Felt> = a.iter().zip(&b).map(|(&x, &y)| x + y).collect();
            let ea = c.encode(&a).unwrap();
            let eb = c.encode(&b).unwrap();
            let es = c.encode(&sum).unwrap();
            for i in 0..9 {
                prop_assert_eq!(es[i], ea[i] + eb[i]);
            }
            // encoding is the message times the generator matrix
            let g = c.generator_matrix();
            for i in 0..9 {
                let col = g.column(i);
                let dot = col.iter().zip(&a).fold(f.zero(), |acc, (&x, &y)| acc + x * y);
                prop_assert_eq!(dot, ea[i]);
            }
        }
    }
}
