//! 2×2 matrices over `F_q`.

use std::fmt;

use num_bigint::BigUint;

use super::field::{FqElem, Field};
use super::AlgebraError;

/// Row-major `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    pub a: FqElem,
    pub b: FqElem,
    pub c: FqElem,
    pub d: FqElem,
}

impl Mat2 {
    pub fn new(a: FqElem, b: FqElem, c: FqElem, d: FqElem) -> Result<Self, AlgebraError> {
        let q = a.field_order();
        for e in [b, c, d] {
            if e.field_order() != q {
                return Err(AlgebraError::FieldMismatch {
                    expected: q,
                    found: e.field_order(),
                });
            }
        }
        Ok(Mat2 { a, b, c, d })
    }

    pub fn field_order(&self) -> u32 {
        self.a.field_order()
    }

    pub(crate) fn raw(&self) -> [u32; 4] {
        [self.a.value(), self.b.value(), self.c.value(), self.d.value()]
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// Matrix arithmetic lives on the field so the operands can be checked once.
impl Field {
    pub fn mat(&self, entries: [u32; 4]) -> Result<Mat2, AlgebraError> {
        let [a, b, c, d] = entries;
        Mat2::new(self.elem(a)?, self.elem(b)?, self.elem(c)?, self.elem(d)?)
    }

    pub fn mat_identity(&self) -> Mat2 {
        self.mat_from_raw([1, 0, 0, 1])
    }

    pub fn mat_zero(&self) -> Mat2 {
        self.mat_from_raw([0, 0, 0, 0])
    }

    pub fn mat_scalar(&self, x: FqElem) -> Result<Mat2, AlgebraError> {
        let z = self.zero();
        Mat2::new(x, z, z, x)
    }

    pub fn mat_mul(&self, m: &Mat2, n: &Mat2) -> Result<Mat2, AlgebraError> {
        self.check_mat(m)?;
        self.check_mat(n)?;
        Ok(self.mat_from_raw(self.mat_mul_raw(m.raw(), n.raw())))
    }

    pub fn mat_add(&self, m: &Mat2, n: &Mat2) -> Result<Mat2, AlgebraError> {
        self.check_mat(m)?;
        self.check_mat(n)?;
        Ok(self.mat_from_raw(self.mat_add_raw(m.raw(), n.raw())))
    }

    pub fn mat_neg(&self, m: &Mat2) -> Result<Mat2, AlgebraError> {
        self.check_mat(m)?;
        Ok(self.mat_from_raw(m.raw().map(|x| self.neg_raw(x))))
    }

    pub fn mat_det(&self, m: &Mat2) -> Result<FqElem, AlgebraError> {
        self.check_mat(m)?;
        Ok(self.wrap(self.det_raw(m.raw())))
    }

    pub fn mat_trace(&self, m: &Mat2) -> Result<FqElem, AlgebraError> {
        self.check_mat(m)?;
        Ok(self.wrap(self.add_raw(m.a.value(), m.d.value())))
    }

    pub fn mat_inv(&self, m: &Mat2) -> Result<Mat2, AlgebraError> {
        self.check_mat(m)?;
        self.mat_inv_raw(m.raw())
            .map(|r| self.mat_from_raw(r))
            .ok_or(AlgebraError::Singular)
    }

    /// `m^e` by square-and-multiply; `m^0` is the identity.
    pub fn mat_pow(&self, m: &Mat2, e: &BigUint) -> Result<Mat2, AlgebraError> {
        self.check_mat(m)?;
        let base = m.raw();
        let mut acc = [1, 0, 0, 1];
        for i in (0..e.bits()).rev() {
            acc = self.mat_mul_raw(acc, acc);
            if e.bit(i) {
                acc = self.mat_mul_raw(acc, base);
            }
        }
        Ok(self.mat_from_raw(acc))
    }

    pub(crate) fn mat_from_raw(&self, r: [u32; 4]) -> Mat2 {
        Mat2 {
            a: self.wrap(r[0]),
            b: self.wrap(r[1]),
            c: self.wrap(r[2]),
            d: self.wrap(r[3]),
        }
    }

    pub(crate) fn mat_mul_raw(&self, m: [u32; 4], n: [u32; 4]) -> [u32; 4] {
        let dot = |x1: u32, y1: u32, x2: u32, y2: u32| {
            self.add_raw(self.mul_raw(x1, y1), self.mul_raw(x2, y2))
        };
        [
            dot(m[0], n[0], m[1], n[2]),
            dot(m[0], n[1], m[1], n[3]),
            dot(m[2], n[0], m[3], n[2]),
            dot(m[2], n[1], m[3], n[3]),
        ]
    }

    pub(crate) fn mat_add_raw(&self, m: [u32; 4], n: [u32; 4]) -> [u32; 4] {
        [
            self.add_raw(m[0], n[0]),
            self.add_raw(m[1], n[1]),
            self.add_raw(m[2], n[2]),
            self.add_raw(m[3], n[3]),
        ]
    }

    pub(crate) fn det_raw(&self, m: [u32; 4]) -> u32 {
        self.sub_raw(self.mul_raw(m[0], m[3]), self.mul_raw(m[1], m[2]))
    }

    pub(crate) fn mat_inv_raw(&self, m: [u32; 4]) -> Option<[u32; 4]> {
        let det = self.det_raw(m);
        if det == 0 {
            return None;
        }
        let k = self.inv_raw(det);
        Some([
            self.mul_raw(k, m[3]),
            self.mul_raw(k, self.neg_raw(m[1])),
            self.mul_raw(k, self.neg_raw(m[2])),
            self.mul_raw(k, m[0]),
        ])
    }

    fn check_mat(&self, m: &Mat2) -> Result<(), AlgebraError> {
        if m.field_order() != self.order() {
            return Err(AlgebraError::FieldMismatch {
                expected: self.order(),
                found: m.field_order(),
            });
        }
        Ok(())
    }
}
