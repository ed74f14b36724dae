//! Arithmetic in GF(q^2) with a canonical primitive element.
//!
//! Every nonzero element is stored as its discrete logarithm to the base `w`,
//! the residue class of the modulus variable. Addition goes through a Zech
//! logarithm table, so all operations are table lookups.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Mutex, OnceLock};

use thiserror::Error;

use crate::arith;

/// Largest field order built unless a caller asks for more.
pub const DEFAULT_FIELD_LIMIT: u64 = 1 << 20;

const ZERO_LOG: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("field of order {0} exceeds the limit of {1}")]
    FieldTooLarge(u128, u64),
    #[error("element is not in the base field GF(q)")]
    NotInBaseField,
    #[error("argument must be nonzero")]
    ZeroArgument,
}

/// The field GF(q^2) = GF(p^(2e)) together with its log tables.
///
/// Values are interned: [`make_field`] returns the same `&'static` reference
/// for the same `(p, e)`, so field identity is pointer identity.
pub struct GaloisField {
    p: u32,
    e: u32,
    q: u64,
    /// Monic modulus of degree 2e, constant term first.
    modulus: Vec<u32>,
    /// `exp[i]` is `w^i` packed as `sum c_j p^j`.
    exp: Vec<u32>,
    /// Inverse of `exp`; `log[0]` is unused.
    log: Vec<u32>,
    /// `zech[d] = log(1 + w^d)`, or `ZERO_LOG` when `1 + w^d = 0`.
    zech: Vec<u32>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaloisField")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &GaloisField) -> bool {
        self.p == other.p && self.e == other.e
    }
}

impl Eq for GaloisField {}

type Registry = Mutex<HashMap<(u32, u32), &'static GaloisField>>;

fn registry() -> &'static Registry {
    static REGISTRY: OnceLock<Registry> = OnceLock::new();
    REGISTRY.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds (or fetches) GF(p^(2e)) under the default size limit.
pub fn make_field(p: u64, e: u32) -> Result<&'static GaloisField, FieldError> {
    make_field_with_limit(p, e, DEFAULT_FIELD_LIMIT)
}

pub fn make_field_with_limit(
    p: u64,
    e: u32,
    limit: u64,
) -> Result<&'static GaloisField, FieldError> {
    if !arith::is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if e == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let order = arith::saturating_pow(p, 2 * e as u64);
    if order > limit as u128 || order > u32::MAX as u128 {
        return Err(FieldError::FieldTooLarge(order, limit));
    }
    let key = (p as u32, e);
    let mut reg = registry().lock().unwrap_or_else(|e| e.into_inner());
    if let Some(f) = reg.get(&key) {
        return Ok(f);
    }
    let field: &'static GaloisField = Box::leak(Box::new(GaloisField::build(p as u32, e)));
    reg.insert(key, field);
    Ok(field)
}

/// GF(q^2) for a prime power `q`.
pub fn field_for_q(q: u64) -> Result<&'static GaloisField, FieldError> {
    let (p, e) = arith::prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
    make_field(p, e)
}

impl GaloisField {
    fn build(p: u32, e: u32) -> GaloisField {
        let degree = 2 * e as usize;
        let order = (p as u64).pow(2 * e) as u32;
        let n = order - 1;
        // Candidates in ascending order of sum c_i p^i over the non-leading
        // coefficients; c_0 = 0 is never primitive.
        let (modulus, exp) = (1..order)
            .filter(|idx| idx % p != 0)
            .find_map(|idx| {
                let low = unpack(idx, p, degree);
                power_table(&low, p, n).map(|exp| (low, exp))
            })
            .expect("a primitive polynomial exists for every degree");

        let mut log = vec![ZERO_LOG; order as usize];
        for (i, &v) in exp.iter().enumerate() {
            log[v as usize] = i as u32;
        }
        let zech = exp
            .iter()
            .map(|&v| {
                let mut digits = unpack(v, p, degree);
                digits[0] = (digits[0] + 1) % p;
                let sum = pack(&digits, p);
                if sum == 0 {
                    ZERO_LOG
                } else {
                    log[sum as usize]
                }
            })
            .collect();

        let mut modulus = modulus;
        modulus.push(1);
        GaloisField {
            p,
            e,
            q: (p as u64).pow(e),
            modulus,
            exp,
            log,
            zech,
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p as u64
    }

    /// Degree of GF(q) over its prime field.
    pub fn base_degree(&self) -> u32 {
        self.e
    }

    /// Order of the base field GF(q).
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Order of the field, q^2.
    pub fn order(&self) -> u64 {
        self.q * self.q
    }

    /// Order of the multiplicative group, q^2 - 1.
    pub fn group_order(&self) -> u64 {
        self.q * self.q - 1
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&'static self) -> Felt {
        Felt {
            field: self,
            log: ZERO_LOG,
        }
    }

    pub fn one(&'static self) -> Felt {
        Felt { field: self, log: 0 }
    }

    /// The primitive element `w`.
    pub fn generator(&'static self) -> Felt {
        self.from_log(1)
    }

    /// `w^i`, for any integer `i`.
    pub fn from_log(&'static self, i: i64) -> Felt {
        let n = self.group_order() as i64;
        Felt {
            field: self,
            log: i.rem_euclid(n) as u32,
        }
    }

    /// The image of the integer `n` in the prime field.
    pub fn from_int(&'static self, n: i64) -> Felt {
        let c = n.rem_euclid(self.p as i64) as u32;
        self.unpack(c)
    }

    /// Element whose polynomial-basis coordinates (constant term first) are `coeffs`.
    pub fn from_coeffs(&'static self, coeffs: &[u32]) -> Felt {
        assert!(coeffs.len() <= 2 * self.e as usize, "too many coefficients");
        let digits: Vec<u32> = coeffs.iter().map(|c| c % self.p).collect();
        self.unpack(pack(&digits, self.p))
    }

    fn unpack(&'static self, v: u32) -> Felt {
        Felt {
            field: self,
            log: if v == 0 { ZERO_LOG } else { self.log[v as usize] },
        }
    }

    /// All elements: nonzero ones by ascending log, then zero.
    pub fn elements(&'static self) -> impl Iterator<Item = Felt> + Clone {
        (0..self.group_order() as u32)
            .map(move |log| Felt { field: self, log })
            .chain(std::iter::once(self.zero()))
    }

    /// Elements of GF(q) in the same order as [`GaloisField::elements`].
    pub fn base_field_elements(&'static self) -> impl Iterator<Item = Felt> + Clone {
        let step = self.q as u32 + 1;
        (0..self.q as u32 - 1)
            .map(move |i| Felt {
                field: self,
                log: i * step,
            })
            .chain(std::iter::once(self.zero()))
    }

    pub(crate) fn same(&self, other: &GaloisField) -> bool {
        std::ptr::eq(self, other)
    }
}

fn unpack(mut v: u32, p: u32, degree: usize) -> Vec<u32> {
    let mut out = vec![0; degree];
    for d in out.iter_mut() {
        *d = v % p;
        v /= p;
    }
    out
}

fn pack(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Powers of `x` modulo the monic polynomial with low coefficients `low`,
/// if `x` has order exactly `n`.
fn power_table(low: &[u32], p: u32, n: u32) -> Option<Vec<u32>> {
    let degree = low.len();
    let mut cur = vec![0u32; degree];
    cur[0] = 1;
    let mut exp = Vec::with_capacity(n as usize);
    for i in 0..n {
        let packed = pack(&cur, p);
        if i > 0 && packed == 1 {
            return None;
        }
        exp.push(packed);
        // multiply by x and reduce with x^degree = -sum low_j x^j
        let top = cur[degree - 1];
        for j in (1..degree).rev() {
            cur[j] = cur[j - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for (c, &l) in cur.iter_mut().zip(low) {
                *c = (*c + (p - top * l % p)) % p;
            }
        }
    }
    (pack(&cur, p) == 1).then_some(exp)
}

/// An element of an interned [`GaloisField`].
#[derive(Clone, Copy)]
pub struct Felt {
    field: &'static GaloisField,
    log: u32,
}

impl Felt {
    pub fn field(&self) -> &'static GaloisField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.log == ZERO_LOG
    }

    pub fn is_one(&self) -> bool {
        self.log == 0
    }

    /// Discrete log to the base `w`, in `[0, q^2 - 1)`.
    pub fn dlog(&self) -> Result<u64, FieldError> {
        if self.is_zero() {
            Err(FieldError::ZeroArgument)
        } else {
            Ok(self.log as u64)
        }
    }

    /// Like [`Felt::dlog`] but `None` for zero.
    pub fn log(&self) -> Option<u64> {
        (!self.is_zero()).then_some(self.log as u64)
    }

    /// Polynomial-basis coordinates, constant term first.
    pub fn coeffs(&self) -> Vec<u32> {
        let f = self.field;
        let packed = if self.is_zero() {
            0
        } else {
            f.exp[self.log as usize]
        };
        unpack(packed, f.p, 2 * f.e as usize)
    }

    /// `self^k` with `0^0 = 1`.
    pub fn pow(&self, k: u64) -> Felt {
        if k == 0 {
            return self.field.one();
        }
        if self.is_zero() {
            return *self;
        }
        let n = self.field.group_order();
        let log = (self.log as u128 * (k % n) as u128 % n as u128) as u32;
        Felt {
            field: self.field,
            log,
        }
    }

    /// `self^k` for a signed exponent; panics on a negative power of zero.
    pub fn powi(&self, k: i64) -> Felt {
        if k >= 0 {
            self.pow(k as u64)
        } else {
            self.inv().pow(k.unsigned_abs())
        }
    }

    pub fn checked_inv(&self) -> Option<Felt> {
        if self.is_zero() {
            return None;
        }
        let n = self.field.group_order() as u32;
        Some(Felt {
            field: self.field,
            log: (n - self.log) % n,
        })
    }

    /// Panics on zero.
    pub fn inv(&self) -> Felt {
        self.checked_inv().expect("inverse of zero")
    }

    /// `x -> x^q`.
    pub fn frobenius(&self) -> Felt {
        self.pow(self.field.q)
    }

    /// `x -> x^(q+1)`, landing in GF(q).
    pub fn norm(&self) -> Felt {
        self.pow(self.field.q + 1)
    }

    pub fn in_base_field(&self) -> bool {
        self.is_zero() || (self.log as u64).is_multiple_of(self.field.q + 1)
    }

    /// The `v` with smallest log satisfying `v^(q+1) = self`.
    pub fn solve_norm(&self) -> Result<Felt, FieldError> {
        if self.is_zero() {
            return Err(FieldError::ZeroArgument);
        }
        if !self.in_base_field() {
            return Err(FieldError::NotInBaseField);
        }
        let f = self.field;
        let i = arith::solve_linear_congruence(f.q + 1, self.log as u64, f.group_order())
            .ok_or(FieldError::NotInBaseField)?;
        Ok(f.from_log(i as i64))
    }

    /// Sort key: log order with zero last.
    pub fn canonical_key(&self) -> u32 {
        self.log
    }
}

impl PartialEq for Felt {
    fn eq(&self, other: &Felt) -> bool {
        self.log == other.log && self.field.same(other.field)
    }
}

impl Eq for Felt {}

impl std::hash::Hash for Felt {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.log.hash(state);
    }
}

impl fmt::Debug for Felt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else if self.log == 0 {
            write!(f, "1")
        } else {
            write!(f, "w^{}", self.log)
        }
    }
}

impl fmt::Display for Felt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for Felt {
    type Output = Felt;

    fn add(self, rhs: Felt) -> Felt {
        debug_assert!(self.field.same(rhs.field), "mixed fields");
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let f = self.field;
        let n = f.group_order() as u32;
        let (lo, hi) = if self.log <= rhs.log {
            (self.log, rhs.log)
        } else {
            (rhs.log, self.log)
        };
        let z = f.zech[(hi - lo) as usize];
        if z == ZERO_LOG {
            return f.zero();
        }
        let log = ((lo as u64 + z as u64) % n as u64) as u32;
        Felt { field: f, log }
    }
}

impl Neg for Felt {
    type Output = Felt;

    fn neg(self) -> Felt {
        let f = self.field;
        if self.is_zero() || f.p == 2 {
            return self;
        }
        let n = f.group_order() as u32;
        Felt {
            field: f,
            log: (self.log + n / 2) % n,
        }
    }
}

impl Sub for Felt {
    type Output = Felt;

    fn sub(self, rhs: Felt) -> Felt {
        self + (-rhs)
    }
}

impl Mul for Felt {
    type Output = Felt;

    fn mul(self, rhs: Felt) -> Felt {
        debug_assert!(self.field.same(rhs.field), "mixed fields");
        if self.is_zero() || rhs.is_zero() {
            return self.field.zero();
        }
        let n = self.field.group_order() as u32;
        let s = self.log + rhs.log;
        Felt {
            field: self.field,
            log: if s >= n { s - n } else { s },
        }
    }
}

impl Div for Felt {
    type Output = Felt;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Felt) -> Felt {
        self * rhs.inv()
    }
}

impl AddAssign for Felt {
    fn add_assign(&mut self, rhs: Felt) {
        *self = *self + rhs;
    }
}

impl SubAssign for Felt {
    fn sub_assign(&mut self, rhs: Felt) {
        *self = *self - rhs;
    }
}

impl MulAssign for Felt {
    fn mul_assign(&mut self, rhs: Felt) {
        *self = *self * rhs;
    }
}

impl std::iter::Sum for Felt {
    fn sum<I: Iterator<Item = Felt>>(mut iter: I) -> Felt {
        let first = iter.next().expect("sum of an empty iterator has no field");
        iter.fold(first, |a, b| a + b)
    }
}
