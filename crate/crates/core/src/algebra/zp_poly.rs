//! Dense polynomials over ℤ/p, constant term first. Only what the field
//! constructor needs: multiplication, remainder, gcd and Ben-Or's test.

use super::numtheory::pow_mod;

pub(crate) fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

/// Remainder of `a` modulo a nonzero `m`.
pub(crate) fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = pow_mod(m[dm], p - 2, p);
    let mut r = trim(a.to_vec());
    while r.len() > dm {
        let dr = r.len() - 1;
        let factor = r[dr] * lead_inv % p;
        let shift = dr - dm;
        for (i, &c) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - factor * c % p) % p;
        }
        r = trim(r);
    }
    r
}

pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn pow_mod_poly(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = rem(&mul(&acc, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        exp >>= 1;
    }
    acc
}

/// Ben-Or irreducibility test for a monic `f` of degree ≥ 1.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = trim(f.to_vec());
    let deg = f.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    let t = vec![0u64, 1];
    let mut h = t.clone();
    for _ in 0..deg / 2 {
        h = pow_mod_poly(&h, p, &f, p);
        // h - t
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = gcd(&f, &trim(diff), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force: f is irreducible iff no monic factor of degree 1..=deg/2 divides it.
    fn irreducible_by_trial_division(f: &[u64], p: u64) -> bool {
        let deg = f.len() - 1;
        for d in 1..=deg / 2 {
            let count = p.pow(d as u32);
            for code in 0..count {
                let mut g = Vec::with_capacity(d + 1);
                let mut c = code;
                for _ in 0..d {
                    g.push(c % p);
                    c /= p;
                }
                g.push(1);
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn ben_or_matches_trial_division() {
        for p in [2u64, 3, 5] {
            for deg in 1..=4u32 {
                for code in 0..p.pow(deg) {
                    let mut f = Vec::new();
                    let mut c = code;
                    for _ in 0..deg {
                        f.push(c % p);
                        c /= p;
                    }
                    f.push(1);
                    assert_eq!(
                        is_irreducible(&f, p),
                        irreducible_by_trial_division(&f, p),
                        "p={p} f={f:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn gcd_basics() {
        // (t+1)(t+2) and (t+1)^2 over F_5 share t+1.
        let a = mul(&[1, 1], &[2, 1], 5);
        let b = mul(&[1, 1], &[1, 1], 5);
        assert_eq!(gcd(&a, &b, 5), vec![1, 1]);
    }
}
