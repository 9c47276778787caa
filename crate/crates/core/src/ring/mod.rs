//! Finite rings `ℤ/nℤ`, `M₂(F_q)` and their direct products, enumerated
//! with dense ids; noncommutative polynomial maps on them.

mod poly;

pub use poly::{
    gl2ring_square_closed_forms, parse_poly, poly_evaluate, poly_image_ids, poly_image_ratio,
    NCPoly, RingImageReport, SquareClosedForms, Term,
};

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::algebra::{AlgebraError, Field, Mat2};
use crate::group::PrimePower;
use crate::parse::{Cursor, ParseError};
use crate::Limits;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("syntax error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("ring Z{0} needs n >= 1")]
    BadModulus(u64),
    #[error("ring of size {size} exceeds the cap of {cap}")]
    CapExceeded { size: BigUint, cap: u64 },
    #[error("the image needs {tuples} evaluations, above the work cap of {cap}")]
    WorkCapExceeded { tuples: BigUint, cap: u64 },
    #[error("polynomial uses x{needed} but only {got} values were given")]
    Arity { needed: u32, got: usize },
    #[error("element does not belong to {0}")]
    NotMember(String),
    #[error("squaring closed forms need r >= 1, got {0}")]
    BadFieldExponent(u32),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl From<ParseError> for RingError {
    fn from(e: ParseError) -> Self {
        RingError::Parse {
            pos: e.pos,
            msg: e.msg,
        }
    }
}

impl RingError {
    pub fn is_cap(&self) -> bool {
        matches!(self, RingError::CapExceeded { .. } | RingError::WorkCapExceeded { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingSpec {
    ZmodN(u64),
    /// The full matrix ring `M₂(F_q)`, all `q⁴` matrices.
    Mat2Ring(PrimePower),
    Product(Vec<RingSpec>),
}

impl RingSpec {
    pub fn zmod(n: u64) -> Result<Self, RingError> {
        if n < 1 {
            return Err(RingError::BadModulus(n));
        }
        Ok(RingSpec::ZmodN(n))
    }

    pub fn mat2(q: u64) -> Result<Self, RingError> {
        PrimePower::new(q)
            .map(RingSpec::Mat2Ring)
            .ok_or(RingError::NotPrimePower(q))
    }

    /// Flattens nested products; a single factor stands for itself.
    pub fn product(parts: impl IntoIterator<Item = RingSpec>) -> Self {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                RingSpec::Product(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            1 => flat.pop().expect("one element"),
            _ => RingSpec::Product(flat),
        }
    }

    pub fn factors(&self) -> &[RingSpec] {
        match self {
            RingSpec::Product(parts) => parts,
            single => std::slice::from_ref(single),
        }
    }

    pub fn size(&self) -> BigUint {
        match self {
            RingSpec::ZmodN(n) => BigUint::from(*n),
            RingSpec::Mat2Ring(pp) => BigUint::from(pp.q()).pow(4),
            RingSpec::Product(parts) => parts.iter().fold(BigUint::one(), |acc, r| acc * r.size()),
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors = self.factors();
        let mut i = 0;
        while i < factors.len() {
            let mut j = i + 1;
            while j < factors.len() && factors[j] == factors[i] {
                j += 1;
            }
            if i > 0 {
                write!(f, " x ")?;
            }
            match &factors[i] {
                RingSpec::ZmodN(n) => write!(f, "Z{n}")?,
                RingSpec::Mat2Ring(pp) => write!(f, "M2({pp})")?,
                RingSpec::Product(_) => unreachable!("products are flat"),
            }
            if j - i > 1 {
                write!(f, "^{}", j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

impl Serialize for RingSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for RingSpec {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ring_spec(s)
    }
}

/// `spec := factor { "x" factor }`, `factor := atom [ "^" int ]`,
/// `atom := "Z" int | "M2(" int ")"`.
pub fn parse_ring_spec(text: &str) -> Result<RingSpec, RingError> {
    let mut cur = Cursor::new(text);
    let mut parts = Vec::new();
    loop {
        let pos = cur.pos();
        let atom = if cur.eat_str("M2(") {
            let q = cur.unsigned()?;
            if !cur.eat(')') {
                return Err(cur.error("expected ')'").into());
            }
            RingSpec::mat2(q)?
        } else if cur.eat('Z') {
            RingSpec::zmod(cur.unsigned()?)?
        } else if cur.at_end() {
            return Err(cur.error_at(pos, "unexpected end of input").into());
        } else {
            return Err(cur.error_at(pos, "expected 'Z<n>' or 'M2(<q>)'").into());
        };
        let count = if cur.eat('^') {
            let at = cur.pos();
            let k = cur.unsigned()?;
            if k < 1 {
                return Err(cur.error_at(at, "repeat count must be at least 1").into());
            }
            k
        } else {
            1
        };
        for _ in 0..count {
            parts.push(atom.clone());
        }
        if cur.at_end() {
            return Ok(RingSpec::product(parts));
        }
        if !cur.eat('x') {
            return Err(cur.error("expected 'x' between factors").into());
        }
    }
}

/// A ring element in structural form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingElement {
    Residue(u64),
    Matrix(Mat2),
    Tuple(Vec<RingElement>),
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingElement::Residue(r) => write!(f, "{r}"),
            RingElement::Matrix(m) => write!(f, "{m}"),
            RingElement::Tuple(parts) => {
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

pub type RingId = u32;

#[derive(Debug, Clone)]
enum RingFactor {
    Zmod(u64),
    /// Ids are the base-`q` digits of the entries `a, b, c, d`.
    Mat { field: Arc<Field>, q: u64 },
}

impl RingFactor {
    fn size(&self) -> u64 {
        match self {
            RingFactor::Zmod(n) => *n,
            RingFactor::Mat { q, .. } => q.pow(4),
        }
    }

    fn decode(&self, x: u64) -> [u32; 4] {
        let RingFactor::Mat { q, .. } = self else {
            unreachable!("matrix factor")
        };
        [
            (x / (q * q * q)) as u32,
            (x / (q * q) % q) as u32,
            (x / q % q) as u32,
            (x % q) as u32,
        ]
    }

    fn encode(&self, m: [u32; 4]) -> u64 {
        let RingFactor::Mat { q, .. } = self else {
            unreachable!("matrix factor")
        };
        m.iter().fold(0, |acc, &e| acc * q + e as u64)
    }

    fn add(&self, x: u64, y: u64) -> u64 {
        match self {
            RingFactor::Zmod(n) => (x + y) % n,
            RingFactor::Mat { field, .. } => {
                self.encode(field.mat_add_raw(self.decode(x), self.decode(y)))
            }
        }
    }

    fn mul(&self, x: u64, y: u64) -> u64 {
        match self {
            RingFactor::Zmod(n) => ((x as u128 * y as u128) % *n as u128) as u64,
            RingFactor::Mat { field, .. } => {
                self.encode(field.mat_mul_raw(self.decode(x), self.decode(y)))
            }
        }
    }

    fn neg(&self, x: u64) -> u64 {
        match self {
            RingFactor::Zmod(n) => (n - x) % n,
            RingFactor::Mat { field, .. } => {
                self.encode(self.decode(x).map(|e| field.neg_raw(e)))
            }
        }
    }

    /// `c · 1`.
    fn scalar(&self, c: &BigInt) -> u64 {
        match self {
            RingFactor::Zmod(n) => c.mod_floor(&BigInt::from(*n)).to_u64().expect("reduced"),
            RingFactor::Mat { field, .. } => {
                let p = BigInt::from(field.characteristic());
                let s = c.mod_floor(&p).to_u32().expect("reduced");
                self.encode([s, 0, 0, s])
            }
        }
    }

    fn element(&self, x: u64) -> RingElement {
        match self {
            RingFactor::Zmod(_) => RingElement::Residue(x),
            RingFactor::Mat { field, .. } => RingElement::Matrix(field.mat_from_raw(self.decode(x))),
        }
    }

    fn id_of(&self, x: &RingElement) -> Option<u64> {
        match (self, x) {
            (RingFactor::Zmod(n), RingElement::Residue(r)) if r < n => Some(*r),
            (RingFactor::Mat { q, .. }, RingElement::Matrix(m)) if m.field_order() as u64 == *q => {
                Some(self.encode(m.raw()))
            }
            _ => None,
        }
    }
}

/// A fully enumerated finite ring; id 0 is zero.
#[derive(Debug, Clone)]
pub struct IndexedRing {
    spec: RingSpec,
    factors: Vec<RingFactor>,
    places: Vec<u64>,
    order: usize,
}

impl IndexedRing {
    pub fn new(spec: &RingSpec, limits: &Limits) -> Result<Self, RingError> {
        let size = spec.size();
        let cap = limits.enumeration_cap.min(RingId::MAX as u64);
        if size > BigUint::from(cap) {
            return Err(RingError::CapExceeded { size, cap });
        }
        let mut fields: Vec<Arc<Field>> = Vec::new();
        let mut factors = Vec::new();
        for f in spec.factors() {
            factors.push(match f {
                RingSpec::ZmodN(n) => RingFactor::Zmod(*n),
                RingSpec::Mat2Ring(pp) => {
                    let q = pp.q();
                    let field = match fields.iter().find(|fl| fl.order() as u64 == q) {
                        Some(fl) => fl.clone(),
                        None => {
                            let fl = Arc::new(Field::new(pp.p, pp.r)?);
                            fields.push(fl.clone());
                            fl
                        }
                    };
                    RingFactor::Mat { field, q }
                }
                RingSpec::Product(_) => unreachable!("products are flat"),
            });
        }
        let mut places = vec![1u64; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            places[i] = places[i + 1] * factors[i + 1].size();
        }
        Ok(IndexedRing {
            spec: spec.clone(),
            factors,
            places,
            order: size.to_usize().expect("bounded by cap"),
        })
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn zero(&self) -> RingId {
        0
    }

    pub fn ids(&self) -> std::ops::Range<RingId> {
        0..self.order as RingId
    }

    fn component(&self, x: RingId, i: usize) -> u64 {
        x as u64 / self.places[i] % self.factors[i].size()
    }

    fn combine(&self, f: impl Fn(&RingFactor, u64) -> u64) -> RingId {
        self.factors
            .iter()
            .zip(&self.places)
            .map(|(fac, &p)| f(fac, 0) * p)
            .sum::<u64>() as RingId
    }

    fn zip_with(&self, x: RingId, y: RingId, op: impl Fn(&RingFactor, u64, u64) -> u64) -> RingId {
        let mut out = 0u64;
        for (i, f) in self.factors.iter().enumerate() {
            out += op(f, self.component(x, i), self.component(y, i)) * self.places[i];
        }
        out as RingId
    }

    pub fn add(&self, x: RingId, y: RingId) -> RingId {
        self.zip_with(x, y, RingFactor::add)
    }

    pub fn mul(&self, x: RingId, y: RingId) -> RingId {
        self.zip_with(x, y, RingFactor::mul)
    }

    pub fn neg(&self, x: RingId) -> RingId {
        self.zip_with(x, 0, |f, a, _| f.neg(a))
    }

    pub fn one(&self) -> RingId {
        self.from_int(&BigInt::one())
    }

    /// The integer `c` mapped into the ring as `c · 1`.
    pub fn from_int(&self, c: &BigInt) -> RingId {
        self.combine(|f, _| f.scalar(c))
    }

    pub fn pow(&self, x: RingId, mut e: u32) -> RingId {
        let mut acc = self.one();
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

    pub fn element(&self, x: RingId) -> RingElement {
        if self.factors.len() == 1 {
            return self.factors[0].element(x as u64);
        }
        RingElement::Tuple(
            self.factors
                .iter()
                .enumerate()
                .map(|(i, f)| f.element(self.component(x, i)))
                .collect(),
        )
    }

    pub fn id_of(&self, x: &RingElement) -> Result<RingId, RingError> {
        let missing = || RingError::NotMember(self.spec.to_string());
        if self.factors.len() == 1 {
            return self.factors[0].id_of(x).map(|v| v as RingId).ok_or_else(missing);
        }
        match x {
            RingElement::Tuple(parts) if parts.len() == self.factors.len() => {
                let mut out = 0u64;
                for ((f, p), place) in self.factors.iter().zip(parts).zip(&self.places) {
                    out += f.id_of(p).ok_or_else(missing)? * place;
                }
                Ok(out as RingId)
            }
            _ => Err(missing()),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = RingElement> + '_ {
        self.ids().map(|x| self.element(x))
    }
}
