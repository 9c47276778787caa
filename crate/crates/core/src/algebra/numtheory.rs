//! Small-integer number theory used across the crate.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = 17u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization in increasing order of primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut t = 0;
            while n.is_multiple_of(d) {
                n /= d;
                t += 1;
            }
            out.push((d, t));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Splits `q = p^r` into `(p, r)`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    match factorize(q).as_slice() {
        [(p, r)] => Some((*p, *r)),
        _ => None,
    }
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Least `k > 0` with `a^k ≡ 1 (mod m)`; `None` if `gcd(a, m) ≠ 1`.
pub fn multiplicative_order(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if a.gcd(&m) != 1 {
        return None;
    }
    let a = a % m;
    let mut x = a;
    let mut k = 1u64;
    while x != 1 {
        x = ((x as u128 * a as u128) % m as u128) as u64;
        k += 1;
    }
    Some(k)
}

pub fn lcm_all(values: &[u64]) -> u64 {
    values.iter().fold(1u64, |acc, v| acc.lcm(v))
}

/// `Some(a)` when `n = 2^a`.
pub fn log2_exact(n: &BigUint) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let tz = n.trailing_zeros()?;
    if (n >> tz as usize).is_one() {
        Some(tz)
    } else {
        None
    }
}

/// `n mod m` for a big `n` and word-sized modulus.
pub fn big_mod(n: &BigUint, m: u64) -> u64 {
    (n % m).to_u64().expect("residue fits in u64")
}
