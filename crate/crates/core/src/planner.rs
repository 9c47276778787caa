//! Greedy dyadic approximation of a target ratio, realized by a group of the
//! form `C2^m × GL₂(2^{s_1}) × … × GL₂(2^{s_k})` whose `x^M` image ratio is
//! `2^{-m} ∏ (1 − 2^{-s_i})` for every `M = 2^a`, `a ≥ 1`.

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::numtheory::log2_exact;
use crate::algebra::BigRatio;
use crate::group::{GroupSpec, PrimePower};

/// Hard bound on greedy steps; hitting it is an error.
pub const MAX_ITERATIONS: usize = 10_000;

/// Largest `s` for which `GL₂(2^s)` is representable.
pub const MAX_FIELD_EXPONENT: u64 = 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("target must lie strictly between 0 and 1, got {0}")]
    TargetOutOfRange(BigRatio),
    #[error("epsilon must be positive, got {0}")]
    BadEpsilon(BigRatio),
    #[error("no plan within {MAX_ITERATIONS} iterations")]
    IterationCap,
    #[error("M must be 2^a with a >= 1, got {0}")]
    NotPowerOfTwo(BigUint),
    #[error("GL2(2^{0}) is too large to represent")]
    FieldTooLarge(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatioPlan {
    pub m: u64,
    pub field_sizes: Vec<u64>,
    pub achieved: BigRatio,
    pub target: BigRatio,
    pub error: BigRatio,
    pub exact: bool,
}

/// Intermediate values of one run, for checking convergence.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PlanTrace {
    /// Residual `d / (v_1 ⋯ v_{i-1})` before each interval search.
    pub residuals: Vec<BigRatio>,
    /// `2^{-m} v_1 ⋯ v_i` after each appended factor.
    pub partials: Vec<BigRatio>,
}

/// `2^{-m} ∏ (1 − 2^{-s_i})`, recomputed from the plan's shape.
pub fn plan_ratio(plan: &RatioPlan) -> BigRatio {
    plan.field_sizes
        .iter()
        .fold(BigRatio::inverse_power_of_two(plan.m), |acc, &s| {
            acc * BigRatio::one_minus_inverse_power_of_two(s)
        })
}

/// Largest `n ≥ 1` with `1 − 2^{-n} ≤ r`, for `r ∈ [1/2, 1)`.
fn interval_index(r: &BigRatio) -> u64 {
    let gap = BigRatio::one() - r.clone();
    let mut n = 1;
    while BigRatio::inverse_power_of_two(n + 1) >= gap {
        n += 1;
    }
    n
}

pub fn approximate(c: &BigRatio, epsilon: &BigRatio) -> Result<RatioPlan, PlanError> {
    approximate_traced(c, epsilon).map(|(plan, _)| plan)
}

pub fn approximate_traced(
    c: &BigRatio,
    epsilon: &BigRatio,
) -> Result<(RatioPlan, PlanTrace), PlanError> {
    if !c.is_positive() || *c >= BigRatio::one() {
        return Err(PlanError::TargetOutOfRange(c.clone()));
    }
    if !epsilon.is_positive() {
        return Err(PlanError::BadEpsilon(epsilon.clone()));
    }
    let half = BigRatio::new(1, 2).expect("constant");
    let mut m = 0u64;
    let mut d = c.clone();
    while d < half {
        d = d.shl(1);
        m += 1;
    }
    let mut trace = PlanTrace::default();
    let finish = |m: u64, sizes: Vec<u64>, exact: bool| {
        let plan_shape = RatioPlan {
            m,
            field_sizes: sizes,
            achieved: BigRatio::zero(),
            target: c.clone(),
            error: BigRatio::zero(),
            exact,
        };
        let achieved = plan_ratio(&plan_shape);
        RatioPlan {
            error: (&achieved - c).abs(),
            achieved,
            ..plan_shape
        }
    };
    if d == half {
        return Ok((finish(m + 1, Vec::new(), true), trace));
    }

    let mut product = BigRatio::one();
    let mut sizes = Vec::new();
    for _ in 0..MAX_ITERATIONS {
        if (&product - &d).shr(m) <= *epsilon {
            return Ok((finish(m, sizes, false), trace));
        }
        let residual = &d / &product;
        trace.residuals.push(residual.clone());
        let n = interval_index(&residual);
        let u = BigRatio::one_minus_inverse_power_of_two(n);
        if residual == u {
            sizes.push(n);
            product = product * u;
            trace.partials.push(product.shr(m));
            return Ok((finish(m, sizes, true), trace));
        }
        sizes.push(n + 1);
        product = product * BigRatio::one_minus_inverse_power_of_two(n + 1);
        trace.partials.push(product.shr(m));
    }
    Err(PlanError::IterationCap)
}

/// `C2^m × GL₂(2^{s_1}) × …`; the trivial plan gives `C1`.
pub fn realize(plan: &RatioPlan, big_m: &BigUint) -> Result<GroupSpec, PlanError> {
    match log2_exact(big_m) {
        Some(a) if a >= 1 => {}
        _ => return Err(PlanError::NotPowerOfTwo(big_m.clone())),
    }
    let mut parts = vec![GroupSpec::Cyclic(2); plan.m as usize];
    for &s in &plan.field_sizes {
        if s > MAX_FIELD_EXPONENT {
            return Err(PlanError::FieldTooLarge(s));
        }
        parts.push(GroupSpec::GL2(PrimePower { p: 2, r: s as u32 }));
    }
    Ok(GroupSpec::product(parts))
}

/// Checks the plan's internal invariants.
pub fn is_consistent(plan: &RatioPlan) -> bool {
    let achieved = plan_ratio(plan);
    achieved == plan.achieved
        && plan.error == (&achieved - &plan.target).abs()
        && (!plan.exact || plan.error.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::power_ratio_closed_form;

    fn rat(s: &str) -> BigRatio {
        s.parse().unwrap()
    }

    #[test]
    fn dyadic_half() {
        let p = approximate(&rat("1/2"), &rat("1/10")).unwrap();
        assert_eq!((p.m, p.field_sizes.as_slice(), p.exact), (1, &[][..], true));
        assert_eq!(p.achieved, rat("1/2"));
    }

    #[test]
    fn three_eighths_is_exact() {
        let p = approximate(&rat("3/8"), &rat("1e-6")).unwrap();
        assert_eq!(p.m, 1);
        assert_eq!(p.field_sizes, vec![2]);
        assert!(p.exact);
        assert_eq!(p.achieved, rat("3/8"));
        assert_eq!(realize(&p, &BigUint::from(2u32)).unwrap().to_string(), "C2 x GL2(4)");
    }

    #[test]
    fn three_tenths() {
        let eps = rat("1/1000");
        let (p, trace) = approximate_traced(&rat("3/10"), &eps).unwrap();
        assert_eq!(p.m, 1);
        assert_eq!(p.field_sizes, vec![2, 3, 4, 6, 7]);
        assert!(!p.exact);
        assert!(p.error < eps);
        assert!(p.achieved > rat("3/10"));
        let n: Vec<u64> = trace.residuals.iter().map(interval_index).collect();
        assert_eq!(n, vec![1, 2, 3, 5, 6]);
        assert!(is_consistent(&p));
    }

    #[test]
    fn plan_ratio_examples() {
        let mk = |m, sizes: Vec<u64>| RatioPlan {
            m,
            field_sizes: sizes,
            achieved: BigRatio::zero(),
            target: BigRatio::zero(),
            error: BigRatio::zero(),
            exact: false,
        };
        assert_eq!(plan_ratio(&mk(1, vec![])), rat("1/2"));
        assert_eq!(plan_ratio(&mk(1, vec![2])), rat("3/8"));
        assert_eq!(plan_ratio(&mk(0, vec![1])), rat("1/2"));
        let spec = realize(&mk(2, vec![3]), &BigUint::from(8u32)).unwrap();
        assert_eq!(spec.to_string(), "C2^2 x GL2(8)");
        assert_eq!(
            power_ratio_closed_form(&spec, &BigUint::from(8u32)).unwrap(),
            rat("7/32")
        );
        assert_eq!(realize(&mk(0, vec![]), &BigUint::from(2u32)).unwrap().to_string(), "C1");
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(approximate(&rat("3/2"), &rat("1/10")), Err(PlanError::TargetOutOfRange(_))));
        assert!(matches!(approximate(&rat("1"), &rat("1/10")), Err(PlanError::TargetOutOfRange(_))));
        assert!(matches!(approximate(&rat("0"), &rat("1/10")), Err(PlanError::TargetOutOfRange(_))));
        assert!(matches!(approximate(&rat("1/3"), &rat("0")), Err(PlanError::BadEpsilon(_))));
        let p = approximate(&rat("3/8"), &rat("1/10")).unwrap();
        for m in [0u32, 1, 3, 6, 12] {
            assert!(matches!(realize(&p, &BigUint::from(m)), Err(PlanError::NotPowerOfTwo(_))));
        }
    }

    #[test]
    fn dyadic_targets_are_exact() {
        for j in 1..=20 {
            let p = approximate(&BigRatio::inverse_power_of_two(j), &rat("1e-4")).unwrap();
            assert!(p.exact && p.field_sizes.is_empty() && p.m == j, "j = {j}");
        }
    }

    #[test]
    fn coarse_epsilon_may_stop_before_any_factor() {
        let p = approximate(&rat("3/10"), &rat("1/4")).unwrap();
        assert_eq!((p.m, p.field_sizes.len()), (1, 0));
        assert_eq!(p.error, rat("1/5"));
    }
}
