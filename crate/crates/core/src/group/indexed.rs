//! Enumerated groups with dense integer element ids.
//!
//! Ids follow the enumeration order: residues ascending, matrices with the
//! identity first and the rest in lexicographic entry order, and products in
//! mixed radix with the first factor most significant. Id 0 is always the
//! identity.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::arith::FactorArith;
use super::{Group, GroupElement, GroupError, GroupSpec};
use crate::algebra::Field;
use crate::limits::Limits;

pub type ElemId = u32;

/// Dense lookup from packed matrix entries to ids up to this many slots.
const DENSE_LOOKUP_LIMIT: u64 = 1 << 24;

#[derive(Debug, Clone)]
pub(crate) enum MatLookup {
    Dense(Vec<ElemId>),
    Sparse(HashMap<[u32; 4], ElemId>),
}

#[derive(Debug, Clone)]
pub(crate) enum IndexedFactor {
    Cyclic(u32),
    Matrix {
        field: Arc<Field>,
        elems: Vec<[u32; 4]>,
        lookup: MatLookup,
        table: Option<Vec<ElemId>>,
        inverses: Vec<ElemId>,
    },
}

impl IndexedFactor {
    fn build(arith: &FactorArith, table_cap: u64) -> Self {
        match arith {
            FactorArith::Cyclic(n) => IndexedFactor::Cyclic(*n as u32),
            FactorArith::Matrix { field, special } => {
                let q = field.order();
                let one = field.one().value();
                let mut elems = vec![[1, 0, 0, 1]];
                for a in 0..q {
                    for b in 0..q {
                        for c in 0..q {
                            for d in 0..q {
                                let m = [a, b, c, d];
                                if m == [1, 0, 0, 1] {
                                    continue;
                                }
                                let det = field.det_raw(m);
                                let keep = if *special { det == one } else { det != 0 };
                                if keep {
                                    elems.push(m);
                                }
                            }
                        }
                    }
                }
                let q64 = q as u64;
                let slots = q64.pow(4);
                let lookup = if slots <= DENSE_LOOKUP_LIMIT {
                    let mut dense = vec![ElemId::MAX; slots as usize];
                    for (i, m) in elems.iter().enumerate() {
                        dense[pack(m, q64)] = i as ElemId;
                    }
                    MatLookup::Dense(dense)
                } else {
                    MatLookup::Sparse(
                        elems.iter().enumerate().map(|(i, m)| (*m, i as ElemId)).collect(),
                    )
                };
                let mut factor = IndexedFactor::Matrix {
                    field: field.clone(),
                    elems,
                    lookup,
                    table: None,
                    inverses: Vec::new(),
                };
                let n = factor.order();
                let inverses: Vec<ElemId> = (0..n as ElemId)
                    .map(|x| factor.locate(factor.inv_structural(x)))
                    .collect();
                let table = (n as u64 <= table_cap).then(|| {
                    let mut t = Vec::with_capacity(n * n);
                    for x in 0..n as ElemId {
                        for y in 0..n as ElemId {
                            t.push(factor.mul_structural(x, y));
                        }
                    }
                    t
                });
                if let IndexedFactor::Matrix {
                    table: slot_t,
                    inverses: slot_i,
                    ..
                } = &mut factor
                {
                    *slot_t = table;
                    *slot_i = inverses;
                }
                factor
            }
        }
    }

    fn order(&self) -> usize {
        match self {
            IndexedFactor::Cyclic(n) => *n as usize,
            IndexedFactor::Matrix { elems, .. } => elems.len(),
        }
    }

    fn locate(&self, m: [u32; 4]) -> ElemId {
        match self {
            IndexedFactor::Matrix { field, lookup, .. } => match lookup {
                MatLookup::Dense(d) => d[pack(&m, field.order() as u64)],
                MatLookup::Sparse(s) => s.get(&m).copied().unwrap_or(ElemId::MAX),
            },
            IndexedFactor::Cyclic(_) => unreachable!(),
        }
    }

    fn mul_structural(&self, x: ElemId, y: ElemId) -> ElemId {
        match self {
            IndexedFactor::Matrix { field, elems, .. } => {
                self.locate(field.mat_mul_raw(elems[x as usize], elems[y as usize]))
            }
            IndexedFactor::Cyclic(_) => unreachable!(),
        }
    }

    fn inv_structural(&self, x: ElemId) -> [u32; 4] {
        match self {
            IndexedFactor::Matrix { field, elems, .. } => field
                .mat_inv_raw(elems[x as usize])
                .expect("group elements are invertible"),
            IndexedFactor::Cyclic(_) => unreachable!(),
        }
    }

    #[inline]
    fn mul(&self, x: ElemId, y: ElemId) -> ElemId {
        match self {
            IndexedFactor::Cyclic(n) => {
                let s = x as u64 + y as u64;
                if s >= *n as u64 {
                    (s - *n as u64) as ElemId
                } else {
                    s as ElemId
                }
            }
            IndexedFactor::Matrix { table: Some(t), elems, .. } => {
                t[x as usize * elems.len() + y as usize]
            }
            IndexedFactor::Matrix { .. } => self.mul_structural(x, y),
        }
    }

    #[inline]
    fn inv(&self, x: ElemId) -> ElemId {
        match self {
            IndexedFactor::Cyclic(n) => {
                if x == 0 {
                    0
                } else {
                    n - x
                }
            }
            IndexedFactor::Matrix { inverses, .. } => inverses[x as usize],
        }
    }

    fn element(&self, x: ElemId) -> GroupElement {
        match self {
            IndexedFactor::Cyclic(_) => GroupElement::Residue(x as u64),
            IndexedFactor::Matrix { field, elems, .. } => {
                GroupElement::Matrix(field.mat_from_raw(elems[x as usize]))
            }
        }
    }

    fn id_of(&self, x: &GroupElement) -> Option<ElemId> {
        match (self, x) {
            (IndexedFactor::Cyclic(n), GroupElement::Residue(r)) if *r < *n as u64 => {
                Some(*r as ElemId)
            }
            (IndexedFactor::Matrix { field, .. }, GroupElement::Matrix(m))
                if m.field_order() == field.order() =>
            {
                let id = self.locate([m.a.value(), m.b.value(), m.c.value(), m.d.value()]);
                (id != ElemId::MAX).then_some(id)
            }
            _ => None,
        }
    }
}

fn pack(m: &[u32; 4], q: u64) -> usize {
    (((m[0] as u64 * q + m[1] as u64) * q + m[2] as u64) * q + m[3] as u64) as usize
}

/// A fully enumerated group with id-level arithmetic.
#[derive(Debug, Clone)]
pub struct IndexedGroup {
    group: Group,
    order: usize,
    pub(crate) factors: Vec<IndexedFactor>,
    /// `places[i]` = product of the orders of factors after `i`.
    places: Vec<u64>,
    radices: Vec<u64>,
    table: Option<Vec<ElemId>>,
}

impl IndexedGroup {
    pub fn new(spec: &GroupSpec, limits: &Limits) -> Result<Self, GroupError> {
        let order = spec.order();
        let cap = limits.enumeration_cap.min(ElemId::MAX as u64);
        if order > BigUint::from(cap) {
            return Err(GroupError::CapExceeded {
                what: "group",
                size: order,
                cap,
            });
        }
        let order = order.to_usize().expect("bounded by cap");
        let group = Group::new(spec)?;
        let factors: Vec<IndexedFactor> = group
            .factor_ariths()
            .iter()
            .map(|f| IndexedFactor::build(f, limits.table_cap))
            .collect();
        let radices: Vec<u64> = factors.iter().map(|f| f.order() as u64).collect();
        let mut places = vec![1u64; radices.len()];
        for i in (0..radices.len().saturating_sub(1)).rev() {
            places[i] = places[i + 1] * radices[i + 1];
        }
        let mut g = IndexedGroup {
            group,
            order,
            factors,
            places,
            radices,
            table: None,
        };
        if g.factors.len() > 1 && order as u64 <= limits.table_cap {
            let mut t = Vec::with_capacity(order * order);
            for x in 0..order as ElemId {
                for y in 0..order as ElemId {
                    t.push(g.mul_componentwise(x, y));
                }
            }
            g.table = Some(t);
        }
        Ok(g)
    }

    pub fn spec(&self) -> &GroupSpec {
        self.group.spec()
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> ElemId {
        0
    }

    /// Whether multiplication is a single table lookup.
    pub fn has_table(&self) -> bool {
        match (&self.table, self.factors.as_slice()) {
            (Some(_), _) => true,
            (None, [IndexedFactor::Matrix { table, .. }]) => table.is_some(),
            (None, [IndexedFactor::Cyclic(_)]) => true,
            _ => false,
        }
    }

    pub fn ids(&self) -> std::ops::Range<ElemId> {
        0..self.order as ElemId
    }

    pub(crate) fn factor_count(&self) -> usize {
        self.factors.len()
    }

    pub(crate) fn factor_order(&self, i: usize) -> u64 {
        self.radices[i]
    }

    pub(crate) fn component(&self, x: ElemId, i: usize) -> ElemId {
        ((x as u64 / self.places[i]) % self.radices[i]) as ElemId
    }

    pub(crate) fn compose(&self, parts: impl IntoIterator<Item = ElemId>) -> ElemId {
        parts
            .into_iter()
            .zip(&self.places)
            .map(|(c, p)| c as u64 * p)
            .sum::<u64>() as ElemId
    }

    pub(crate) fn factor_mul(&self, i: usize, x: ElemId, y: ElemId) -> ElemId {
        self.factors[i].mul(x, y)
    }

    pub(crate) fn factor_inv(&self, i: usize, x: ElemId) -> ElemId {
        self.factors[i].inv(x)
    }

    fn mul_componentwise(&self, x: ElemId, y: ElemId) -> ElemId {
        let mut out = 0u64;
        for (i, f) in self.factors.iter().enumerate() {
            let a = self.component(x, i);
            let b = self.component(y, i);
            out += f.mul(a, b) as u64 * self.places[i];
        }
        out as ElemId
    }

    #[inline]
    pub fn mul(&self, x: ElemId, y: ElemId) -> ElemId {
        if let Some(t) = &self.table {
            return t[x as usize * self.order + y as usize];
        }
        if self.factors.len() == 1 {
            return self.factors[0].mul(x, y);
        }
        self.mul_componentwise(x, y)
    }

    pub fn inv(&self, x: ElemId) -> ElemId {
        if self.factors.len() == 1 {
            return self.factors[0].inv(x);
        }
        let mut out = 0u64;
        for (i, f) in self.factors.iter().enumerate() {
            out += f.inv(self.component(x, i)) as u64 * self.places[i];
        }
        out as ElemId
    }

    pub fn pow(&self, x: ElemId, mut e: u64) -> ElemId {
        let mut acc = self.identity();
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `x ↦ x^e` over every id, with `e` reduced modulo the group order.
    pub fn power_map(&self, e: &BigInt) -> Vec<ElemId> {
        let reduced = e
            .mod_floor(&BigInt::from(self.order))
            .to_u64()
            .expect("reduced below the order");
        match reduced {
            0 => vec![self.identity(); self.order],
            1 => self.ids().collect(),
            _ => self.ids().map(|x| self.pow(x, reduced)).collect(),
        }
    }

    /// `h x h⁻¹`.
    pub fn conjugate(&self, x: ElemId, h: ElemId) -> ElemId {
        self.mul(self.mul(h, x), self.inv(h))
    }

    pub fn element(&self, x: ElemId) -> GroupElement {
        if self.factors.len() == 1 {
            return self.factors[0].element(x);
        }
        GroupElement::Tuple(
            self.factors
                .iter()
                .enumerate()
                .map(|(i, f)| f.element(self.component(x, i)))
                .collect(),
        )
    }

    pub fn id_of(&self, x: &GroupElement) -> Result<ElemId, GroupError> {
        let missing = || GroupError::NotMember(self.spec().to_string());
        if self.factors.len() == 1 {
            return self.factors[0].id_of(x).ok_or_else(missing);
        }
        match x {
            GroupElement::Tuple(parts) if parts.len() == self.factors.len() => {
                let mut out = 0u64;
                for (i, (f, p)) in self.factors.iter().zip(parts).enumerate() {
                    out += f.id_of(p).ok_or_else(missing)? as u64 * self.places[i];
                }
                Ok(out as ElemId)
            }
            _ => Err(missing()),
        }
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.ids().map(|x| self.element(x))
    }
}

/// Deterministic enumeration of a group, checked against `limits`.
pub fn enumerate(spec: &GroupSpec, limits: &Limits) -> Result<Vec<GroupElement>, GroupError> {
    Ok(IndexedGroup::new(spec, limits)?.elements().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn build(s: &str) -> IndexedGroup {
        IndexedGroup::new(&s.parse().unwrap(), &Limits::default()).unwrap()
    }

    #[test]
    fn cyclic_enumeration() {
        let g = build("C3");
        let elems: Vec<_> = g.elements().collect();
        assert_eq!(
            elems,
            vec![
                GroupElement::Residue(0),
                GroupElement::Residue(1),
                GroupElement::Residue(2)
            ]
        );
    }

    #[test]
    fn gl2_2_and_sl2_2_coincide() {
        let gl = build("GL2(2)");
        let sl = build("SL2(2)");
        assert_eq!(gl.order(), 6);
        let f = Field::new(2, 1).unwrap();
        assert_eq!(gl.element(0), GroupElement::Matrix(f.mat_identity()));
        let a: Vec<_> = gl.elements().collect();
        let b: Vec<_> = sl.elements().collect();
        assert_eq!(a, b);
    }

    #[test]
    fn enumeration_is_faithful() {
        for s in ["C1", "C12", "GL2(3)", "SL2(4)", "C2 x GL2(2)", "GL2(2) x C3 x SL2(3)", "GL2(5)"] {
            let g = build(s);
            let spec: GroupSpec = s.parse().unwrap();
            assert_eq!(BigUint::from(g.order()), spec.order(), "{s}");
            let elems: Vec<_> = g.elements().collect();
            let distinct: HashSet<_> = elems.iter().cloned().collect();
            assert_eq!(distinct.len(), g.order(), "{s}");
            assert_eq!(elems[0], g.group().identity());
            for (i, e) in elems.iter().enumerate() {
                assert_eq!(g.id_of(e).unwrap() as usize, i);
            }
        }
    }

    #[test]
    fn id_arithmetic_matches_structural() {
        for s in ["GL2(3)", "C4 x SL2(3)", "GL2(4)"] {
            let g = build(s);
            let arith = g.group();
            for x in g.ids().step_by(7) {
                for y in g.ids().step_by(5) {
                    let structural = arith.mul(&g.element(x), &g.element(y)).unwrap();
                    assert_eq!(g.element(g.mul(x, y)), structural);
                }
                assert_eq!(g.mul(x, g.inv(x)), g.identity());
            }
        }
    }

    #[test]
    fn cap_enforced() {
        let limits = Limits {
            enumeration_cap: 100,
            ..Limits::default()
        };
        let err = IndexedGroup::new(&"GL2(4)".parse().unwrap(), &limits).unwrap_err();
        assert!(matches!(err, GroupError::CapExceeded { cap: 100, .. }));
        assert!(enumerate(&"GL2(3)".parse().unwrap(), &limits).is_ok());
    }

    #[test]
    fn large_group_without_table() {
        let g = build("GL2(16)");
        assert!(!g.has_table());
        let x = 12345;
        assert_eq!(g.pow(x, g.order() as u64), g.identity());
        let inv_map = g.power_map(&BigInt::from(-1));
        assert_eq!(g.mul(x, inv_map[x as usize]), g.identity());
    }
}
