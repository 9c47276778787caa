use super::{Word, WordError};
use crate::group::{Group, GroupElement};

/// Evaluates `w` with `x_j ↦ assignment[j - 1]`, multiplying left to right.
/// Exponents are reduced modulo the group order.
pub fn evaluate(
    w: &Word,
    assignment: &[GroupElement],
    group: &Group,
) -> Result<GroupElement, WordError> {
    let mut acc = group.identity();
    for s in w.syllables() {
        let x = assignment
            .get(s.generator as usize - 1)
            .ok_or(WordError::MissingAssignment(s.generator))?;
        let p = group.pow(x, &s.exponent)?;
        acc = group.mul(&acc, &p)?;
    }
    Ok(acc)
}
