use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{GroupError, GroupSpec};
use crate::algebra::{Field, Mat2};

/// A group element in structural form. Elements of product groups are
/// tuples with one entry per factor; single-factor groups use the bare value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    /// Residue mod n, written additively underneath the multiplicative API.
    Residue(u64),
    Matrix(Mat2),
    Tuple(Vec<GroupElement>),
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Residue(r) => write!(f, "{r}"),
            GroupElement::Matrix(m) => write!(f, "{m}"),
            GroupElement::Tuple(parts) => {
                write!(f, "(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) enum FactorArith {
    Cyclic(u64),
    Matrix { field: Arc<Field>, special: bool },
}

impl FactorArith {
    fn identity(&self) -> GroupElement {
        match self {
            FactorArith::Cyclic(_) => GroupElement::Residue(0),
            FactorArith::Matrix { field, .. } => GroupElement::Matrix(field.mat_identity()),
        }
    }

    fn contains(&self, x: &GroupElement) -> bool {
        match (self, x) {
            (FactorArith::Cyclic(n), GroupElement::Residue(r)) => r < n,
            (FactorArith::Matrix { field, special }, GroupElement::Matrix(m)) => {
                match field.mat_det(m) {
                    Ok(det) if *special => det == field.one(),
                    Ok(det) => !det.is_zero(),
                    Err(_) => false,
                }
            }
            _ => false,
        }
    }

    fn mul(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        match (self, x, y) {
            (FactorArith::Cyclic(n), GroupElement::Residue(a), GroupElement::Residue(b)) => {
                GroupElement::Residue(((*a as u128 + *b as u128) % *n as u128) as u64)
            }
            (FactorArith::Matrix { field, .. }, GroupElement::Matrix(a), GroupElement::Matrix(b)) => {
                GroupElement::Matrix(field.mat_mul(a, b).expect("checked membership"))
            }
            _ => unreachable!("membership checked by caller"),
        }
    }

    fn inv(&self, x: &GroupElement) -> GroupElement {
        match (self, x) {
            (FactorArith::Cyclic(n), GroupElement::Residue(a)) => {
                GroupElement::Residue((n - a) % n)
            }
            (FactorArith::Matrix { field, .. }, GroupElement::Matrix(a)) => {
                GroupElement::Matrix(field.mat_inv(a).expect("invertible by membership"))
            }
            _ => unreachable!("membership checked by caller"),
        }
    }

    fn pow(&self, x: &GroupElement, e: &BigUint) -> GroupElement {
        match (self, x) {
            (FactorArith::Cyclic(n), GroupElement::Residue(a)) => {
                let r = (BigUint::from(*a) * e) % *n;
                GroupElement::Residue(r.to_u64().expect("reduced mod n"))
            }
            (FactorArith::Matrix { field, .. }, GroupElement::Matrix(a)) => {
                GroupElement::Matrix(field.mat_pow(a, e).expect("same field"))
            }
            _ => unreachable!("membership checked by caller"),
        }
    }
}

/// Structural arithmetic on a [`GroupSpec`], without enumerating the group.
#[derive(Debug, Clone)]
pub struct Group {
    spec: GroupSpec,
    order: BigUint,
    factors: Vec<FactorArith>,
}

impl Group {
    pub fn new(spec: &GroupSpec) -> Result<Self, GroupError> {
        let mut fields: HashMap<u64, Arc<Field>> = HashMap::new();
        let mut factors = Vec::new();
        for f in spec.factors() {
            factors.push(match f {
                GroupSpec::Cyclic(n) => FactorArith::Cyclic(*n),
                GroupSpec::GL2(pp) | GroupSpec::SL2(pp) => {
                    let field = match fields.get(&pp.q()) {
                        Some(field) => field.clone(),
                        None => {
                            let field = Arc::new(Field::new(pp.p, pp.r)?);
                            fields.insert(pp.q(), field.clone());
                            field
                        }
                    };
                    FactorArith::Matrix {
                        field,
                        special: matches!(f, GroupSpec::SL2(_)),
                    }
                }
                GroupSpec::Product(_) => unreachable!("products are flat"),
            });
        }
        Ok(Group {
            spec: spec.clone(),
            order: spec.order(),
            factors,
        })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub(crate) fn factor_ariths(&self) -> &[FactorArith] {
        &self.factors
    }

    /// Field of the `i`-th factor, when it is a matrix group.
    pub fn factor_field(&self, i: usize) -> Option<&Arc<Field>> {
        match self.factors.get(i)? {
            FactorArith::Matrix { field, .. } => Some(field),
            FactorArith::Cyclic(_) => None,
        }
    }

    fn is_product(&self) -> bool {
        self.factors.len() > 1
    }

    pub fn identity(&self) -> GroupElement {
        if self.is_product() {
            GroupElement::Tuple(self.factors.iter().map(FactorArith::identity).collect())
        } else {
            self.factors[0].identity()
        }
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        match x {
            GroupElement::Tuple(parts) if self.is_product() => {
                parts.len() == self.factors.len()
                    && self.factors.iter().zip(parts).all(|(f, p)| f.contains(p))
            }
            _ if !self.is_product() => self.factors[0].contains(x),
            _ => false,
        }
    }

    fn check(&self, x: &GroupElement) -> Result<(), GroupError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(GroupError::NotMember(self.spec.to_string()))
        }
    }

    pub fn mul(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul_unchecked(x, y))
    }

    pub fn inv(&self, x: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(x)?;
        Ok(self.inv_unchecked(x))
    }

    /// `x^e` for any integer `e`. The exponent is reduced modulo the group
    /// order first, so negative and huge exponents cost the same.
    pub fn pow(&self, x: &GroupElement, e: &BigInt) -> Result<GroupElement, GroupError> {
        self.check(x)?;
        let order = BigInt::from(self.order.clone());
        let reduced = e.mod_floor(&order).to_biguint().expect("non-negative");
        Ok(self.pow_unchecked(x, &reduced))
    }

    /// `h x h⁻¹`.
    pub fn conjugate(&self, x: &GroupElement, h: &GroupElement) -> Result<GroupElement, GroupError> {
        let hx = self.mul(h, x)?;
        Ok(self.mul_unchecked(&hx, &self.inv_unchecked(h)))
    }

    fn mul_unchecked(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        match (x, y) {
            (GroupElement::Tuple(a), GroupElement::Tuple(b)) if self.is_product() => {
                GroupElement::Tuple(
                    self.factors
                        .iter()
                        .zip(a.iter().zip(b))
                        .map(|(f, (u, v))| f.mul(u, v))
                        .collect(),
                )
            }
            _ => self.factors[0].mul(x, y),
        }
    }

    fn inv_unchecked(&self, x: &GroupElement) -> GroupElement {
        match x {
            GroupElement::Tuple(a) if self.is_product() => GroupElement::Tuple(
                self.factors.iter().zip(a).map(|(f, u)| f.inv(u)).collect(),
            ),
            _ => self.factors[0].inv(x),
        }
    }

    fn pow_unchecked(&self, x: &GroupElement, e: &BigUint) -> GroupElement {
        match x {
            GroupElement::Tuple(a) if self.is_product() => GroupElement::Tuple(
                self.factors.iter().zip(a).map(|(f, u)| f.pow(u, e)).collect(),
            ),
            _ => self.factors[0].pow(x, e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(field: &Field, e: [u32; 4]) -> GroupElement {
        GroupElement::Matrix(field.mat(e).unwrap())
    }

    #[test]
    fn cyclic_arithmetic() {
        let g = Group::new(&GroupSpec::Cyclic(5)).unwrap();
        let x = g.mul(&GroupElement::Residue(2), &GroupElement::Residue(4)).unwrap();
        assert_eq!(x, GroupElement::Residue(1));
        assert_eq!(g.inv(&GroupElement::Residue(2)).unwrap(), GroupElement::Residue(3));
        assert_eq!(
            g.pow(&GroupElement::Residue(2), &BigInt::from(-1)).unwrap(),
            GroupElement::Residue(3)
        );
        assert!(g.mul(&GroupElement::Residue(7), &GroupElement::Residue(1)).is_err());
    }

    #[test]
    fn unipotent_is_self_inverse_in_char_2() {
        let g = Group::new(&GroupSpec::gl2(2).unwrap()).unwrap();
        let f = Field::new(2, 1).unwrap();
        let u = m(&f, [1, 1, 0, 1]);
        assert_eq!(g.inv(&u).unwrap(), u);
    }

    #[test]
    fn product_identity_and_mismatch() {
        let spec: GroupSpec = "C2 x GL2(2)".parse().unwrap();
        let g = Group::new(&spec).unwrap();
        let f = Field::new(2, 1).unwrap();
        assert_eq!(
            g.identity(),
            GroupElement::Tuple(vec![GroupElement::Residue(0), m(&f, [1, 0, 0, 1])])
        );
        assert!(matches!(
            g.mul(&GroupElement::Residue(0), &g.identity()),
            Err(GroupError::NotMember(_))
        ));
        let sl = Group::new(&GroupSpec::sl2(3).unwrap()).unwrap();
        let f3 = Field::new(3, 1).unwrap();
        assert!(!sl.contains(&m(&f3, [2, 0, 0, 1])));
        assert!(sl.contains(&m(&f3, [2, 0, 0, 2])));
    }
}
