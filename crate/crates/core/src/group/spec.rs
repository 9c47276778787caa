use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Serialize, Serializer};

use super::GroupError;
use crate::algebra::numtheory::prime_power;
use crate::parse::Cursor;

/// `q = p^r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimePower {
    pub p: u64,
    pub r: u32,
}

impl PrimePower {
    pub fn new(q: u64) -> Option<Self> {
        prime_power(q).map(|(p, r)| PrimePower { p, r })
    }

    pub fn q(self) -> u64 {
        self.p.pow(self.r)
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q())
    }
}

/// Algebraic description of a finite group. Products are kept flat.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Cyclic(u64),
    GL2(PrimePower),
    SL2(PrimePower),
    Product(Vec<GroupSpec>),
}

impl GroupSpec {
    pub fn cyclic(n: u64) -> Result<Self, GroupError> {
        if n < 1 {
            return Err(GroupError::BadCyclic(n));
        }
        Ok(GroupSpec::Cyclic(n))
    }

    pub fn gl2(q: u64) -> Result<Self, GroupError> {
        PrimePower::new(q)
            .map(GroupSpec::GL2)
            .ok_or(GroupError::NotPrimePower(q))
    }

    pub fn sl2(q: u64) -> Result<Self, GroupError> {
        PrimePower::new(q)
            .map(GroupSpec::SL2)
            .ok_or(GroupError::NotPrimePower(q))
    }

    /// Flattening direct product. A single factor is returned as is and an
    /// empty list gives the trivial group.
    pub fn product(parts: impl IntoIterator<Item = GroupSpec>) -> Self {
        let mut flat = Vec::new();
        for part in parts {
            match part {
                GroupSpec::Product(inner) => flat.extend(inner),
                atom => flat.push(atom),
            }
        }
        match flat.len() {
            0 => GroupSpec::Cyclic(1),
            1 => flat.pop().unwrap(),
            _ => GroupSpec::Product(flat),
        }
    }

    /// The non-product factors, in order.
    pub fn factors(&self) -> &[GroupSpec] {
        match self {
            GroupSpec::Product(parts) => parts,
            atom => std::slice::from_ref(atom),
        }
    }

    pub fn order(&self) -> BigUint {
        match self {
            GroupSpec::Cyclic(n) => BigUint::from(*n),
            GroupSpec::GL2(pp) => {
                let q = BigUint::from(pp.q());
                let q2 = &q * &q;
                (&q2 - 1u32) * (&q2 - &q)
            }
            GroupSpec::SL2(pp) => {
                let q = BigUint::from(pp.q());
                &q * (&q * &q - 1u32)
            }
            GroupSpec::Product(parts) => parts
                .iter()
                .fold(BigUint::one(), |acc, g| acc * g.order()),
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.factors().iter().all(|f| match f {
            GroupSpec::Cyclic(_) => true,
            GroupSpec::GL2(_) | GroupSpec::SL2(_) => false,
            GroupSpec::Product(_) => unreachable!("products are flat"),
        })
    }
}

impl fmt::Display for GroupSpec {
    /// Canonical syntax: runs of equal factors collapse to `^k`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors = self.factors();
        let mut i = 0;
        let mut first = true;
        while i < factors.len() {
            let mut j = i + 1;
            while j < factors.len() && factors[j] == factors[i] {
                j += 1;
            }
            if !first {
                write!(f, " x ")?;
            }
            first = false;
            match &factors[i] {
                GroupSpec::Cyclic(n) => write!(f, "C{n}")?,
                GroupSpec::GL2(pp) => write!(f, "GL2({pp})")?,
                GroupSpec::SL2(pp) => write!(f, "SL2({pp})")?,
                GroupSpec::Product(_) => unreachable!("products are flat"),
            }
            if j - i > 1 {
                write!(f, "^{}", j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_group_spec(s)
    }
}

/// `spec := factor { "x" factor }`, `factor := atom [ "^" int ]`,
/// `atom := "C" int | "GL2(" int ")" | "SL2(" int ")"`.
pub fn parse_group_spec(text: &str) -> Result<GroupSpec, GroupError> {
    let mut cur = Cursor::new(text);
    let mut parts = Vec::new();
    loop {
        let atom = parse_atom(&mut cur)?;
        let count = if cur.eat('^') {
            let pos = cur.pos();
            let k = cur.unsigned().map_err(GroupError::from)?;
            if k < 1 {
                return Err(GroupError::Parse {
                    pos,
                    msg: "repeat count must be at least 1".into(),
                });
            }
            k
        } else {
            1
        };
        for _ in 0..count {
            parts.push(atom.clone());
        }
        if cur.at_end() {
            break;
        }
        if !cur.eat('x') {
            return Err(cur.error("expected 'x' between factors").into());
        }
    }
    Ok(GroupSpec::product(parts))
}

fn parse_atom(cur: &mut Cursor) -> Result<GroupSpec, GroupError> {
    let pos = cur.pos();
    if cur.eat_str("GL2(") || cur.eat_str("SL2(") {
        let special = cur.slice_from(pos).starts_with('S');
        let q = cur.unsigned().map_err(GroupError::from)?;
        if !cur.eat(')') {
            return Err(cur.error("expected ')'").into());
        }
        return if special { GroupSpec::sl2(q) } else { GroupSpec::gl2(q) };
    }
    if cur.eat('C') {
        let n = cur.unsigned().map_err(GroupError::from)?;
        return GroupSpec::cyclic(n);
    }
    Err(cur.error("expected 'C<n>', 'GL2(<q>)' or 'SL2(<q>)'").into())
}
