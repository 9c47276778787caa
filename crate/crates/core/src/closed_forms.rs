//! Closed-form image ratios and the arithmetic behind admissible field sizes.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::numtheory::{factorize, lcm_all, multiplicative_order, pow_mod, prime_power};
use crate::algebra::BigRatio;
use crate::group::GroupSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosedFormError {
    #[error("cyclic order must be at least 1, got {0}")]
    BadOrder(u64),
    #[error("modulus k must be at least 1, got {0}")]
    BadModulus(u64),
    #[error("number of factors t must be at least 1, got {0}")]
    BadFactorCount(u32),
    #[error("exponent vector must have a nonzero entry")]
    ZeroExponents,
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("precondition p | M fails: p = {p} does not divide M = {m}")]
    CharacteristicNotDividing { p: u64, m: BigUint },
    #[error("precondition gcd(q^2 - 1, M) = 1 fails: gcd({q2m1}, {m}) = {gcd}")]
    NotCoprime { q2m1: BigUint, m: BigUint, gcd: BigUint },
    #[error("M must be at least 2, got {0}")]
    ModulusTooSmall(u64),
    #[error("6 divides M = {0}, the excluded case")]
    ExcludedSix(u64),
    #[error("p1^2 = 1 mod {p_i} for M = {m}")]
    SquareIsOne { m: u64, p_i: u64 },
    #[error("Engel index must be at least 1, got {0}")]
    BadEngelIndex(i64),
    #[error("no closed form for x^M on {0}")]
    NoClosedForm(String),
}

/// `μ(ω, ℤ/nℤ) = 1/n` for any ω in the commutator subgroup.
pub fn commutator_cyclic_ratio(n: u64) -> Result<BigRatio, ClosedFormError> {
    if n < 1 {
        return Err(ClosedFormError::BadOrder(n));
    }
    Ok(BigRatio::new(1, n).expect("n >= 1"))
}

/// `μ(ω, (ℤ/kℤ)^t) = 1/d^t` with `d = gcd(a_1, …, a_n, k)`, where `a` is the
/// abelianization of ω. The image of `(x_i) ↦ Σ a_i x_i` on `ℤ/kℤ` is the
/// subgroup `dℤ/kℤ`, of index `d`.
pub fn abelian_power_ratio(exponents: &[BigInt], k: u64, t: u32) -> Result<BigRatio, ClosedFormError> {
    if k < 1 {
        return Err(ClosedFormError::BadModulus(k));
    }
    if t < 1 {
        return Err(ClosedFormError::BadFactorCount(t));
    }
    if exponents.iter().all(Zero::is_zero) {
        return Err(ClosedFormError::ZeroExponents);
    }
    let d = exponents
        .iter()
        .fold(BigInt::from(k), |acc, a| acc.gcd(a))
        .abs();
    let d = d.to_u64().expect("divides k");
    Ok(BigRatio::new(1, d).expect("d >= 1").pow(t))
}

fn gl2_preconditions(q: u64, m: &BigUint) -> Result<(), ClosedFormError> {
    let (p, _) = prime_power(q).ok_or(ClosedFormError::NotPrimePower(q))?;
    if !(m % p).is_zero() {
        return Err(ClosedFormError::CharacteristicNotDividing { p, m: m.clone() });
    }
    let q2m1 = BigUint::from(q) * q - 1u32;
    let gcd = q2m1.gcd(m);
    if !gcd.is_one() {
        return Err(ClosedFormError::NotCoprime {
            q2m1,
            m: m.clone(),
            gcd,
        });
    }
    Ok(())
}

/// `|θ_M(GL₂(q))| = (q²−1)(q²−q) − (q−1)(q²−1)` when `p | M` and
/// `gcd(q²−1, M) = 1`: everything except the Jordan classes is hit.
pub fn gl2_power_image_size(q: u64, m: &BigUint) -> Result<BigUint, ClosedFormError> {
    gl2_preconditions(q, m)?;
    let q = BigUint::from(q);
    let q2m1 = &q * &q - 1u32;
    Ok(&q2m1 * (&q * &q - &q) - (&q - 1u32) * &q2m1)
}

/// `μ(x^M, GL₂(q)) = 1 − 1/q` under the same preconditions.
pub fn gl2_power_ratio(q: u64, m: &BigUint) -> Result<BigRatio, ClosedFormError> {
    gl2_preconditions(q, m)?;
    Ok(BigRatio::one() - BigRatio::new(1, q).expect("q >= 2"))
}

/// Closed-form `μ(x^M, G)` for a product of cyclic groups and GL₂ factors
/// meeting the power-map preconditions.
pub fn power_ratio_closed_form(spec: &GroupSpec, m: &BigUint) -> Result<BigRatio, ClosedFormError> {
    let exponent = [BigInt::from(m.clone())];
    let mut acc = BigRatio::one();
    for f in spec.factors() {
        let r = match f {
            GroupSpec::Cyclic(n) => abelian_power_ratio(&exponent, *n, 1)?,
            GroupSpec::GL2(pp) => gl2_power_ratio(pp.q(), m)?,
            other => return Err(ClosedFormError::NoClosedForm(other.to_string())),
        };
        acc = acc * r;
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    #[serde(rename = "M")]
    pub m: u64,
    pub prime_factorization: Vec<(u64, u32)>,
    pub p1: u64,
    /// Order of `p1²` modulo each larger prime factor.
    pub b_list: Vec<u64>,
    pub b: u64,
    pub admissible_r: Vec<u64>,
}

/// `gcd(p1^{2r} − 1, M)`.
fn gcd_for_exponent(p1: u64, r: u64, m: u64) -> u64 {
    let x = pow_mod(p1, 2 * r, m);
    ((x + m - 1) % m).gcd(&m)
}

/// Field-size exponents `r` for which `GL₂(p1^r)` satisfies
/// `gcd(q² − 1, M) = 1`, where `p1` is the least prime factor of `M`.
///
/// Each `r` is checked by a direct gcd. Non-divisibility `b ∤ r` is not the
/// right test when several odd primes are present: it is necessary that
/// every `b_i ∤ r`.
pub fn admissible_exponents(m: u64, count: usize) -> Result<AdmissibilityReport, ClosedFormError> {
    if m < 2 {
        return Err(ClosedFormError::ModulusTooSmall(m));
    }
    if m.is_multiple_of(6) {
        return Err(ClosedFormError::ExcludedSix(m));
    }
    let factors = factorize(m);
    let p1 = factors[0].0;
    let mut b_list = Vec::with_capacity(factors.len() - 1);
    for &(p_i, _) in &factors[1..] {
        let sq = pow_mod(p1, 2, p_i);
        if sq == 1 {
            return Err(ClosedFormError::SquareIsOne { m, p_i });
        }
        b_list.push(multiplicative_order(sq, p_i).expect("p_i does not divide p1"));
    }
    let b = lcm_all(&b_list);
    let admissible_r: Vec<u64> = (1u64..)
        .filter(|&r| gcd_for_exponent(p1, r, m) == 1)
        .take(count)
        .collect();
    Ok(AdmissibilityReport {
        m,
        prime_factorization: factors,
        p1,
        b_list,
        b,
        admissible_r,
    })
}

/// A formula that is only known to hold beyond an unspecified threshold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conjectural {
    pub ratio: BigRatio,
    pub conjectural: bool,
    pub note: &'static str,
}

/// `(|SL₂(q)| − 1) / |SL₂(q)|`: the ratio if `e_i` hits every non-identity
/// element, which is known only for `q ≥ q₀(i)` with `q₀` not effective.
pub fn engel_sl2_conjectural_ratio(i: i64, q: u64) -> Result<Conjectural, ClosedFormError> {
    if i < 1 {
        return Err(ClosedFormError::BadEngelIndex(i));
    }
    prime_power(q).ok_or(ClosedFormError::NotPrimePower(q))?;
    let order = BigInt::from(q) * (BigInt::from(q) * q - 1);
    Ok(Conjectural {
        ratio: BigRatio::new(&order - 1, order).expect("order >= 6"),
        conjectural: true,
        note: "valid only for q >= q0(i); q0 is not known",
    })
}
