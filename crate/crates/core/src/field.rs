//! Arithmetic in GF(p^m).
//!
//! Elements are handled as packed integer codes: the element
//! `c_0 + c_1 x + ... + c_{m-1} x^{m-1}` has code `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`.
//! The code order is the canonical element order used everywhere else (for
//! example by Reed-Solomon evaluation points and lexicographic point order).

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Packed element code in `[0, q)`.
pub type Elem = u32;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;

/// Multiplication tables are materialized up to this order.
const TABLE_ORDER: u32 = 256;

/// Characteristic, degree and defining polynomial of a finite field.
///
/// `modulus` lists the `m + 1` coefficients of a monic irreducible polynomial
/// over GF(p), constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn order(&self) -> u32 {
        self.p.pow(self.m)
    }
}

/// An element as its coefficient tuple, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement {
    pub coeffs: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^m` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut rest = q;
    let mut m = 0;
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p as u32, m))
}

/// Returns the field spec for GF(p^m) whose modulus is the smallest monic
/// irreducible polynomial of degree `m`, comparing coefficient tuples from the
/// highest non-leading coefficient down to the constant term. For `m = 1` the
/// modulus is `x`.
pub fn make_field(p: u32, m: u32) -> Result<FieldSpec> {
    if !is_prime(p as u64) {
        return Err(Error::NonPrimeCharacteristic(p as u64));
    }
    if m == 0 {
        return Err(Error::DomainError("extension degree must be at least 1".into()));
    }
    if (p as u64).checked_pow(m).map_or(true, |q| q > MAX_ORDER) {
        return Err(Error::OrderTooLarge { p, m });
    }
    let q = p.pow(m);
    // Non-leading coefficients packed with the constant term as least
    // significant digit; scanning codes upward gives the required order.
    for code in 0..q {
        let mut poly = unpack(code, p, m as usize);
        poly.push(1);
        if is_irreducible(&poly, p) {
            return Ok(FieldSpec { p, m, modulus: poly });
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

fn unpack(mut code: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(code % p);
        code /= p;
    }
    out
}

// ---------------------------------------------------------------------------
// polynomials over GF(p), lowest degree first, no trailing zeros unless zero

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    pow_mod(a as u64, (p - 2) as u64, p as u64) as u32
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

fn poly_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

/// Quotient and remainder of `a / b`, `b` nonzero.
fn poly_divrem(a: &[u32], b: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let b = trim(b.to_vec());
    let mut rem = trim(a.to_vec());
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead_inv = inv_mod_p(*b.last().unwrap(), p);
    let mut quot = vec![0u32; rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let factor = (*rem.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
        quot[shift] = factor;
        for (i, &c) in b.iter().enumerate() {
            let sub = (c as u64 * factor as u64 % p as u64) as u32;
            rem[shift + i] = (rem[shift + i] + p - sub) % p;
        }
        rem = trim(rem);
        if rem.is_empty() {
            break;
        }
    }
    (trim(quot), rem)
}

/// Irreducibility of a monic polynomial by trial division with every monic
/// polynomial of degree at most half its degree.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for div_deg in 1..=deg / 2 {
        let count = p.pow(div_deg as u32);
        for code in 0..count {
            let mut div = unpack(code, p, div_deg);
            div.push(1);
            if poly_divrem(poly, &div, p).1.is_empty() {
                return false;
            }
        }
    }
    true
}

/// Inverse of `a` modulo `modulus` by the extended Euclidean algorithm.
fn poly_inverse(a: &[u32], modulus: &[u32], p: u32) -> Option<Vec<u32>> {
    let (mut r0, mut r1) = (modulus.to_vec(), trim(a.to_vec()));
    let (mut t0, mut t1): (Vec<u32>, Vec<u32>) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (quot, rem) = poly_divrem(&r0, &r1, p);
        let t2 = poly_sub(&t0, &poly_mul(&quot, &t1, p), p);
        r0 = std::mem::replace(&mut r1, rem);
        t0 = std::mem::replace(&mut t1, t2);
    }
    // r0 is the gcd; it must be a nonzero constant
    if r0.len() != 1 {
        return None;
    }
    let scale = inv_mod_p(r0[0], p);
    Some(t0.iter().map(|&c| (c as u64 * scale as u64 % p as u64) as u32).collect())
}

// ---------------------------------------------------------------------------

struct Tables {
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

struct Inner {
    spec: FieldSpec,
    q: u32,
    tables: Option<Tables>,
}

/// Arithmetic context for one finite field. Cloning is cheap.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p(), self.m())
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.inner.spec == other.inner.spec
    }
}

impl Eq for Field {}

impl Field {
    /// GF(p^m) with the canonical modulus chosen by [`make_field`].
    pub fn new(p: u32, m: u32) -> Result<Field> {
        Field::from_spec(make_field(p, m)?)
    }

    /// The canonical field of order `q`.
    pub fn of_order(q: u64) -> Result<Field> {
        let (p, m) = prime_power(q).ok_or(Error::NonPrimeCharacteristic(q))?;
        Field::new(p, m)
    }

    /// Builds the arithmetic context from an explicit spec, validating it.
    pub fn from_spec(spec: FieldSpec) -> Result<Field> {
        let FieldSpec { p, m, ref modulus } = spec;
        if !is_prime(p as u64) {
            return Err(Error::NonPrimeCharacteristic(p as u64));
        }
        if m == 0 || (p as u64).checked_pow(m).map_or(true, |q| q > MAX_ORDER) {
            return Err(Error::OrderTooLarge { p, m });
        }
        if modulus.len() != m as usize + 1
            || modulus.last() != Some(&1)
            || modulus.iter().any(|&c| c >= p)
            || !is_irreducible(modulus, p)
        {
            return Err(Error::DomainError(format!(
                "modulus {modulus:?} is not monic irreducible of degree {m} over GF({p})"
            )));
        }
        let q = p.pow(m);
        let mut field = Field {
            inner: Arc::new(Inner { spec, q, tables: None }),
        };
        if q <= TABLE_ORDER {
            let tables = field.build_tables();
            field = Field {
                inner: Arc::new(Inner {
                    spec: field.inner.spec.clone(),
                    q,
                    tables: Some(tables),
                }),
            };
        }
        Ok(field)
    }

    fn build_tables(&self) -> Tables {
        let q = self.q() as usize;
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = self.add_slow(a as Elem, b as Elem);
                mul[a * q + b] = self.mul_slow(a as Elem, b as Elem);
            }
        }
        let neg = (0..q as Elem).map(|a| self.neg_slow(a)).collect();
        let mut inv = vec![0; q];
        for (a, slot) in inv.iter_mut().enumerate().skip(1) {
            *slot = self.inv_slow(a as Elem).expect("nonzero element is invertible");
        }
        Tables { add, mul, neg, inv }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.inner.spec
    }

    pub fn p(&self) -> u32 {
        self.inner.spec.p
    }

    pub fn m(&self) -> u32 {
        self.inner.spec.m
    }

    pub fn q(&self) -> u32 {
        self.inner.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.m() == 1
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q()
    }

    /// Code of the residue class of `x`, the root of the modulus.
    pub fn generator(&self) -> Elem {
        if self.m() == 1 {
            // the modulus is x itself, whose root is 0; the prime field is
            // generated by 1 as an additive group
            1
        } else {
            self.p()
        }
    }

    /// The element of the prime subfield congruent to `n`.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.p() as i64) as Elem
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() != self.m() as usize || coeffs.iter().any(|&c| c >= self.p()) {
            return Err(Error::InvalidElement(format!("{coeffs:?}")));
        }
        Ok(coeffs.iter().rev().fold(0, |acc, &c| acc * self.p() + c))
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        unpack(a, self.p(), self.m() as usize)
    }

    pub fn element(&self, a: Elem) -> FieldElement {
        FieldElement { coeffs: self.coeffs(a) }
    }

    pub fn from_element(&self, e: &FieldElement) -> Result<Elem> {
        self.from_coeffs(&e.coeffs)
    }

    pub fn check(&self, a: Elem) -> Result<Elem> {
        if a < self.q() {
            Ok(a)
        } else {
            Err(Error::InvalidElement(format!("{a} not below {}", self.q())))
        }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.inner.tables {
            Some(t) => t.add[(a * self.inner.q + b) as usize],
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        match &self.inner.tables {
            Some(t) => t.neg[a as usize],
            None => self.neg_slow(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.inner.tables {
            Some(t) => t.mul[(a * self.inner.q + b) as usize],
            None => self.mul_slow(a, b),
        }
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        match &self.inner.tables {
            Some(t) => Ok(t.inv[a as usize]),
            None => self.inv_slow(a),
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Square-and-multiply.
    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Dot product of two equal-length vectors.
    #[inline]
    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        a.iter()
            .zip(b)
            .fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    fn add_slow(&self, a: Elem, b: Elem) -> Elem {
        let p = self.p();
        if self.m() == 1 {
            return (a + b) % p;
        }
        if p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut scale) = (0, 1);
        for _ in 0..self.m() {
            out += ((a % p + b % p) % p) * scale;
            a /= p;
            b /= p;
            scale *= p;
        }
        out
    }

    fn neg_slow(&self, a: Elem) -> Elem {
        let p = self.p();
        if p == 2 {
            return a;
        }
        let mut a = a;
        let (mut out, mut scale) = (0, 1);
        for _ in 0..self.m() {
            out += ((p - a % p) % p) * scale;
            a /= p;
            scale *= p;
        }
        out
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        let p = self.p();
        if self.m() == 1 {
            return ((a as u64 * b as u64) % p as u64) as Elem;
        }
        let prod = poly_mul(&trim(self.coeffs(a)), &trim(self.coeffs(b)), p);
        let (_, rem) = poly_divrem(&prod, &self.inner.spec.modulus, p);
        rem.iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    fn inv_slow(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let p = self.p();
        if self.m() == 1 {
            return Ok(inv_mod_p(a, p));
        }
        let inv = poly_inverse(&self.coeffs(a), &self.inner.spec.modulus, p)
            .ok_or(Error::DivisionByZero)?;
        Ok(inv.iter().rev().fold(0, |acc, &c| acc * p + c))
    }
}

// ---------------------------------------------------------------------------
// number theory for the Cayley graph construction

pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1 % modulus;
    let mut b = base % modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * b as u128 % modulus as u128) as u64;
        }
        b = (b as u128 * b as u128 % modulus as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Legendre symbol `(a / r)` for an odd prime `r`, via Euler's criterion.
pub fn legendre(a: i64, r: u64) -> Result<i8> {
    if r % 2 == 0 {
        return Err(Error::EvenModulus(r));
    }
    if !is_prime(r) {
        return Err(Error::NonPrimeCharacteristic(r));
    }
    let a = a.rem_euclid(r as i64) as u64;
    if a == 0 {
        return Ok(0);
    }
    Ok(if pow_mod(a, (r - 1) / 2, r) == 1 { 1 } else { -1 })
}

/// The smaller square root of `a` modulo the odd prime `r`.
pub fn sqrt_mod(a: i64, r: u64) -> Result<u64> {
    if legendre(a, r)? == -1 {
        return Err(Error::NonResidue { a, r });
    }
    let target = a.rem_euclid(r as i64) as u64;
    (0..r)
        .find(|&x| x * x % r == target)
        .ok_or(Error::NonResidue { a, r })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_moduli() {
        assert_eq!(make_field(2, 1).unwrap().modulus, vec![0, 1]);
        assert_eq!(make_field(3, 2).unwrap().modulus, vec![1, 0, 1]);
        assert_eq!(make_field(2, 3).unwrap().modulus, vec![1, 1, 0, 1]);
        assert_eq!(make_field(2, 2).unwrap().modulus, vec![1, 1, 1]);
        assert_eq!(make_field(2, 4).unwrap().modulus, vec![1, 1, 0, 0, 1]);
    }

    /// Exhaustive scan that picks the first irreducible among all monic
    /// polynomials by factoring them completely through root finding and
    /// products, independent of trial division.
    #[test]
    fn modulus_is_first_irreducible_by_product_sieve() {
        for (p, m) in [(2u32, 2u32), (2, 3), (3, 2), (5, 2), (2, 4), (3, 3)] {
            // every reducible monic of degree m is a product of two monics of
            // positive degree; sieve them out
            let mut reducible = std::collections::HashSet::new();
            for d1 in 1..m {
                let d2 = m - d1;
                for c1 in 0..p.pow(d1) {
                    for c2 in 0..p.pow(d2) {
                        let mut f = unpack(c1, p, d1 as usize);
                        f.push(1);
                        let mut g = unpack(c2, p, d2 as usize);
                        g.push(1);
                        reducible.insert(poly_mul(&f, &g, p));
                    }
                }
            }
            let first = (0..p.pow(m))
                .map(|c| {
                    let mut f = unpack(c, p, m as usize);
                    f.push(1);
                    f
                })
                .find(|f| !reducible.contains(f))
                .unwrap();
            assert_eq!(make_field(p, m).unwrap().modulus, first, "GF({p}^{m})");
        }
    }

    #[test]
    fn field_errors() {
        assert_eq!(make_field(4, 1), Err(Error::NonPrimeCharacteristic(4)));
        assert!(matches!(make_field(2, 21), Err(Error::OrderTooLarge { .. })));
        assert!(make_field(2, 20).is_ok());
        let f = Field::new(7, 1).unwrap();
        assert_eq!(f.inv(0), Err(Error::DivisionByZero));
    }

    #[test]
    fn small_arithmetic() {
        let f2 = Field::new(2, 1).unwrap();
        assert_eq!(f2.add(1, 1), 0);
        let f7 = Field::new(7, 1).unwrap();
        assert_eq!(f7.inv(3), Ok(5));
        let f9 = Field::new(3, 2).unwrap();
        let x = f9.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f9.mul(x, x), 2);
        assert_eq!(f9.pow(x, 4), 1);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16] {
            let f = Field::of_order(q).unwrap();
            let q = q as u32;
            for a in 0..q {
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                assert_eq!(f.add(a, f.neg(a)), 0);
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn table_and_direct_paths_agree() {
        let f = Field::new(2, 8).unwrap();
        for a in (0..256).step_by(7) {
            for b in 0..256 {
                assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                assert_eq!(f.add(a, b), f.add_slow(a, b));
            }
        }
        let big = Field::new(3, 6).unwrap();
        for a in 1..50 {
            assert_eq!(big.mul(a, big.inv(a).unwrap()), 1);
            assert_eq!(big.pow(a, big.q() as u64 - 1), 1);
        }
    }

    #[test]
    fn spec_validation() {
        let bad = FieldSpec { p: 2, m: 2, modulus: vec![1, 0, 1] };
        assert!(Field::from_spec(bad).is_err());
        let json = serde_json::to_string(&make_field(3, 2).unwrap()).unwrap();
        assert_eq!(json, r#"{"p":3,"m":2,"modulus":[1,0,1]}"#);
    }

    #[test]
    fn legendre_and_sqrt() {
        assert_eq!(legendre(4, 13), Ok(1));
        assert_eq!(legendre(0, 13), Ok(0));
        assert_eq!(legendre(5, 13), Ok(-1));
        assert_eq!(legendre(3, 8), Err(Error::EvenModulus(8)));
        assert_eq!(sqrt_mod(-1, 13), Ok(5));
        assert_eq!(sqrt_mod(4, 13), Ok(2));
        assert!(matches!(sqrt_mod(5, 13), Err(Error::NonResidue { .. })));
    }

    #[test]
    fn legendre_matches_square_enumeration() {
        for r in (3..=101u64).filter(|&r| is_prime(r)) {
            let squares: std::collections::HashSet<u64> = (1..r).map(|x| x * x % r).collect();
            for a in 0..r as i64 {
                let l = legendre(a, r).unwrap();
                match l {
                    0 => assert_eq!(a, 0),
                    1 => {
                        assert!(squares.contains(&(a as u64)));
                        let s = sqrt_mod(a, r).unwrap();
                        assert_eq!(s * s % r, a as u64);
                    }
                    _ => {
                        assert!(!squares.contains(&(a as u64)));
                        assert!(sqrt_mod(a, r).is_err());
                    }
                }
            }
        }
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1024), Some((2, 10)));
    }
}
