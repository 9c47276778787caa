//! Finite groups: specs, element arithmetic, indexed enumeration and
//! conjugacy classes.

mod arith;
mod classes;
mod indexed;
mod spec;

pub use arith::{Group, GroupElement};
pub use classes::{
    classify_matrix, conjugacy_classes_bruteforce, gl2_class_reps, ClassFamily, ClassPartition,
    ClassScope, ConjClass,
};
pub use indexed::{enumerate, ElemId, IndexedGroup};
pub use spec::{parse_group_spec, GroupSpec, PrimePower};

use num_bigint::BigUint;
use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::parse::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("syntax error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("cyclic group order must be at least 1, got {0}")]
    BadCyclic(u64),
    #[error("{what} of size {size} exceeds the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        size: BigUint,
        cap: u64,
    },
    #[error("element does not belong to {0}")]
    NotMember(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl From<ParseError> for GroupError {
    fn from(e: ParseError) -> Self {
        GroupError::Parse {
            pos: e.pos,
            msg: e.msg,
        }
    }
}
