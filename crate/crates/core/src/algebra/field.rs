//! Prime-power finite fields `F_q`, `q = p^r`, in a polynomial basis.
//!
//! Elements are packed as the base-`p` integer `Σ c_i p^i` of their residue
//! polynomial's coefficients. Because every field is built from the canonical
//! modulus, the order `q` alone identifies the field, and each [`FqElem`]
//! carries it as a tag so mixed-field arithmetic is rejected.

use std::fmt;

use num_bigint::BigUint;

use super::numtheory::{is_prime, pow_mod};
use super::{zp_poly, AlgebraError};

/// Field orders up to this bound get dense add/mul/inv tables.
const TABLE_LIMIT: u64 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem {
    q: u32,
    value: u32,
}

impl FqElem {
    /// Packed base-`p` value, in `[0, q)`.
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn field_order(self) -> u32 {
        self.q
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[derive(Debug, Clone)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

/// `F_{p^r}` together with its canonical modulus.
#[derive(Debug, Clone)]
pub struct Field {
    p: u64,
    r: u32,
    q: u32,
    /// Monic, degree `r`, constant term first (length `r + 1`).
    modulus: Vec<u64>,
    tables: Option<Tables>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.r == other.r && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl Field {
    /// Builds `F_{p^r}`. The modulus is the monic irreducible of degree `r`
    /// whose lower coefficients `(c_0, …, c_{r-1})`, read as `Σ c_i p^i`, are
    /// smallest. For `r = 1` that is the polynomial `t`.
    pub fn new(p: u64, r: u32) -> Result<Self, AlgebraError> {
        if !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        if r < 1 {
            return Err(AlgebraError::BadDegree(r));
        }
        let q = p
            .checked_pow(r)
            .filter(|&q| q <= u32::MAX as u64)
            .ok_or(AlgebraError::FieldTooLarge { p, r })?;
        let modulus = if r == 1 {
            vec![0, 1]
        } else {
            (0..q)
                .map(|code| {
                    let mut f = unpack(code, p, r as usize);
                    f.push(1);
                    f
                })
                .find(|f| zp_poly::is_irreducible(f, p))
                .expect("an irreducible polynomial exists in every degree")
        };
        let mut field = Field {
            p,
            r,
            q: q as u32,
            modulus,
            tables: None,
        };
        if q <= TABLE_LIMIT {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.r
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Coefficient vector of the modulus, constant term first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FqElem {
        self.wrap(0)
    }

    pub fn one(&self) -> FqElem {
        self.wrap(1)
    }

    /// Element with packed value `v`.
    pub fn elem(&self, v: u32) -> Result<FqElem, AlgebraError> {
        if v >= self.q {
            return Err(AlgebraError::OutOfRange { value: v, q: self.q });
        }
        Ok(self.wrap(v))
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FqElem, AlgebraError> {
        if coeffs.len() != self.r as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(AlgebraError::BadCoefficients);
        }
        Ok(self.wrap(pack(coeffs, self.p)))
    }

    /// Image of an integer under `ℤ → F_q`.
    pub fn from_int(&self, n: i64) -> FqElem {
        self.wrap(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn coeffs(&self, x: FqElem) -> Vec<u64> {
        unpack(x.value as u64, self.p, self.r as usize)
    }

    /// Every element, in increasing packed order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.q).map(|v| self.wrap(v))
    }

    pub fn contains(&self, x: FqElem) -> bool {
        x.q == self.q
    }

    pub fn add(&self, x: FqElem, y: FqElem) -> Result<FqElem, AlgebraError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.wrap(self.add_raw(x.value, y.value)))
    }

    pub fn sub(&self, x: FqElem, y: FqElem) -> Result<FqElem, AlgebraError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.wrap(self.sub_raw(x.value, y.value)))
    }

    pub fn neg(&self, x: FqElem) -> Result<FqElem, AlgebraError> {
        self.check(x)?;
        Ok(self.wrap(self.neg_raw(x.value)))
    }

    pub fn mul(&self, x: FqElem, y: FqElem) -> Result<FqElem, AlgebraError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.wrap(self.mul_raw(x.value, y.value)))
    }

    pub fn inv(&self, x: FqElem) -> Result<FqElem, AlgebraError> {
        self.check(x)?;
        if x.value == 0 {
            return Err(AlgebraError::ZeroInverse);
        }
        Ok(self.wrap(self.inv_raw(x.value)))
    }

    /// `x^e` by square-and-multiply over the bits of `e`; `0^0 = 1`.
    pub fn pow(&self, x: FqElem, e: &BigUint) -> Result<FqElem, AlgebraError> {
        self.check(x)?;
        let mut acc = 1u32;
        for i in (0..e.bits()).rev() {
            acc = self.mul_raw(acc, acc);
            if e.bit(i) {
                acc = self.mul_raw(acc, x.value);
            }
        }
        Ok(self.wrap(acc))
    }

    /// Whether `x` is a square in `F_q`.
    pub fn is_square(&self, x: FqElem) -> bool {
        if x.value == 0 || self.p == 2 {
            return true;
        }
        let e = BigUint::from((self.q as u64 - 1) / 2);
        self.pow(x, &e).map(|y| y.value == 1).unwrap_or(false)
    }

    fn check(&self, x: FqElem) -> Result<(), AlgebraError> {
        if x.q != self.q {
            return Err(AlgebraError::FieldMismatch {
                expected: self.q,
                found: x.q,
            });
        }
        Ok(())
    }

    pub(crate) fn wrap(&self, value: u32) -> FqElem {
        FqElem { q: self.q, value }
    }

    pub(crate) fn add_raw(&self, a: u32, b: u32) -> u32 {
        if let Some(t) = &self.tables {
            return t.add[(a * self.q + b) as usize];
        }
        if self.p == 2 {
            return a ^ b;
        }
        if self.r == 1 {
            return ((a as u64 + b as u64) % self.p) as u32;
        }
        let (mut a, mut b) = (a as u64, b as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.r {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out as u32
    }

    pub(crate) fn neg_raw(&self, a: u32) -> u32 {
        if let Some(t) = &self.tables {
            return t.neg[a as usize];
        }
        if self.p == 2 {
            return a;
        }
        let coeffs: Vec<u64> = unpack(a as u64, self.p, self.r as usize)
            .into_iter()
            .map(|c| (self.p - c) % self.p)
            .collect();
        pack(&coeffs, self.p)
    }

    pub(crate) fn sub_raw(&self, a: u32, b: u32) -> u32 {
        self.add_raw(a, self.neg_raw(b))
    }

    pub(crate) fn mul_raw(&self, a: u32, b: u32) -> u32 {
        if let Some(t) = &self.tables {
            return t.mul[(a * self.q + b) as usize];
        }
        self.mul_poly(a, b)
    }

    pub(crate) fn inv_raw(&self, a: u32) -> u32 {
        if let Some(t) = &self.tables {
            return t.inv[a as usize];
        }
        if self.r == 1 {
            return pow_mod(a as u64, self.p - 2, self.p) as u32;
        }
        let mut acc = 1u32;
        let mut base = a;
        let mut e = self.q as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }

    fn mul_poly(&self, a: u32, b: u32) -> u32 {
        if self.r == 1 {
            return ((a as u64 * b as u64) % self.p) as u32;
        }
        let r = self.r as usize;
        let x = unpack(a as u64, self.p, r);
        let y = unpack(b as u64, self.p, r);
        let prod = zp_poly::mul(&x, &y, self.p);
        let mut red = zp_poly::rem(&prod, &self.modulus, self.p);
        red.resize(r, 0);
        pack(&red, self.p)
    }

    fn build_tables(&self) -> Tables {
        let q = self.q;
        let mut add = Vec::with_capacity((q * q) as usize);
        let mut mul = Vec::with_capacity((q * q) as usize);
        for a in 0..q {
            for b in 0..q {
                add.push(self.add_uncached(a, b));
                mul.push(self.mul_poly(a, b));
            }
        }
        let mut neg = vec![0u32; q as usize];
        let mut inv = vec![0u32; q as usize];
        for a in 0..q {
            for b in 0..q {
                if add[(a * q + b) as usize] == 0 {
                    neg[a as usize] = b;
                }
                if mul[(a * q + b) as usize] == 1 {
                    inv[a as usize] = b;
                }
            }
        }
        Tables { add, mul, neg, inv }
    }

    fn add_uncached(&self, a: u32, b: u32) -> u32 {
        let x = unpack(a as u64, self.p, self.r as usize);
        let y = unpack(b as u64, self.p, self.r as usize);
        let s: Vec<u64> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        pack(&s, self.p)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{} (mod ", self.q)?;
        let mut first = true;
        for (i, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, c) => write!(f, "{c}t")?,
                (i, 1) => write!(f, "t^{i}")?,
                (i, c) => write!(f, "{c}t^{i}")?,
            }
        }
        write!(f, ")")
    }
}

fn unpack(mut v: u64, p: u64, r: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(r);
    for _ in 0..r {
        out.push(v % p);
        v /= p;
    }
    out
}

fn pack(coeffs: &[u64], p: u64) -> u32 {
    coeffs.iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_moduli() {
        assert_eq!(Field::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(Field::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(Field::new(7, 1).unwrap().modulus(), &[0, 1]);
        // x^2 + 1 is irreducible over F_3 and has the smallest encoding.
        assert_eq!(Field::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn constructor_errors() {
        assert_eq!(Field::new(4, 1), Err(AlgebraError::NotPrime(4)));
        assert_eq!(Field::new(2, 0), Err(AlgebraError::BadDegree(0)));
        assert!(matches!(
            Field::new(2, 40),
            Err(AlgebraError::FieldTooLarge { .. })
        ));
    }

    #[test]
    fn f4_generator_squares() {
        let f = Field::new(2, 2).unwrap();
        let t = f.from_coeffs(&[0, 1]).unwrap();
        let t_plus_1 = f.from_coeffs(&[1, 1]).unwrap();
        assert_eq!(f.mul(t, t).unwrap(), t_plus_1);
    }

    #[test]
    fn inverse_edge_cases() {
        for (p, r) in [(2, 1), (2, 4), (5, 1), (3, 3)] {
            let f = Field::new(p, r).unwrap();
            assert_eq!(f.inv(f.one()).unwrap(), f.one());
            assert_eq!(f.inv(f.zero()), Err(AlgebraError::ZeroInverse));
        }
    }

    #[test]
    fn mixed_fields_rejected() {
        let f4 = Field::new(2, 2).unwrap();
        let f8 = Field::new(2, 3).unwrap();
        let err = f4.add(f4.one(), f8.one()).unwrap_err();
        assert_eq!(err, AlgebraError::FieldMismatch { expected: 4, found: 8 });
    }

    #[test]
    fn tables_agree_with_polynomial_path() {
        // Above TABLE_LIMIT nothing is cached; compare a cached and an uncached
        // field of the same characteristic through shared identities instead.
        let big = Field::new(2, 9).unwrap();
        assert!(big.tables.is_none());
        let x = big.elem(300).unwrap();
        let y = big.inv(x).unwrap();
        assert_eq!(big.mul(x, y).unwrap(), big.one());
        let f = Field::new(3, 4).unwrap();
        for a in 0..f.order() {
            for b in [0u32, 1, 7, 40, 80] {
                assert_eq!(f.mul_raw(a, b), f.mul_poly(a, b));
                assert_eq!(f.add_raw(a, b), f.add_uncached(a, b));
            }
        }
    }

    #[test]
    fn fermat_over_every_small_field() {
        for (p, r) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 2)] {
            let f = Field::new(p, r).unwrap();
            let e = BigUint::from(f.order() - 1);
            for x in f.elements().skip(1) {
                assert_eq!(f.pow(x, &e).unwrap(), f.one(), "{f}");
            }
        }
    }

    #[test]
    fn deterministic_construction() {
        for (p, r) in [(2, 5), (3, 3), (5, 2)] {
            assert_eq!(Field::new(p, r).unwrap(), Field::new(p, r).unwrap());
        }
    }
}
