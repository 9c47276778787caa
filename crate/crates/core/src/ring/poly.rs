//! Noncommutative integer polynomials without constant term.
//!
//! ```text
//! poly   := [sign] term { sign term }
//! term   := [int ["*"]] factor { ["*"] factor }
//! factor := var [ "^" int ]
//! var    := "x" digits | "x" | "y"
//! ```

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::{IndexedRing, RingElement, RingError, RingId, RingSpec};
use crate::algebra::BigRatio;
use crate::exhaust::exhaust;
use crate::image::Strategy;
use crate::parse::Cursor;
use crate::Limits;

/// `coeff · x_{v1}^{e1} x_{v2}^{e2} ⋯`, adjacent variables distinct.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: BigInt,
    pub monomial: Vec<(u32, u32)>,
}

/// Like monomials are merged and zero terms dropped; order of first
/// appearance is kept. The empty sum is the zero polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct NCPoly {
    terms: Vec<Term>,
}

fn normalize_monomial(factors: impl IntoIterator<Item = (u32, u32)>) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = Vec::new();
    for (v, e) in factors {
        if e == 0 {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.0 == v => last.1 += e,
            _ => out.push((v, e)),
        }
    }
    out
}

impl NCPoly {
    /// Builds a polynomial; `None` if some monomial is empty (a constant).
    pub fn from_terms(terms: impl IntoIterator<Item = (BigInt, Vec<(u32, u32)>)>) -> Option<Self> {
        let mut out: Vec<Term> = Vec::new();
        for (coeff, mono) in terms {
            let monomial = normalize_monomial(mono);
            if monomial.is_empty() {
                return None;
            }
            match out.iter_mut().find(|t| t.monomial == monomial) {
                Some(t) => t.coeff += coeff,
                None => out.push(Term { coeff, monomial }),
            }
        }
        out.retain(|t| !t.coeff.is_zero());
        Some(NCPoly { terms: out })
    }

    /// `x1^t`.
    pub fn power(t: u32) -> Self {
        NCPoly::from_terms([(BigInt::one(), vec![(1, t)])]).expect("t >= 1")
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Distinct variable indices, ascending.
    pub fn variables(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self
            .terms
            .iter()
            .flat_map(|t| t.monomial.iter().map(|&(x, _)| x))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let mag = t.coeff.abs();
            match (i, t.coeff.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            for (j, &(v, e)) in t.monomial.iter().enumerate() {
                if j > 0 {
                    write!(f, "*")?;
                }
                write!(f, "x{v}")?;
                if e != 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl FromStr for NCPoly {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_poly(s)
    }
}

impl Serialize for NCPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub fn parse_poly(text: &str) -> Result<NCPoly, RingError> {
    let mut cur = Cursor::new(text);
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        let negative = if cur.eat('-') {
            true
        } else if cur.eat('+') || first {
            false
        } else if cur.at_end() {
            break;
        } else {
            return Err(cur.error("expected '+' or '-'").into());
        };
        first = false;
        let start = cur.pos();
        let mut coeff = BigInt::one();
        if matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
            coeff = cur.signed_big()?;
            cur.eat('*');
        }
        let mut mono = Vec::new();
        while let Some('x' | 'y') = cur.peek() {
            mono.push(factor(&mut cur)?);
            cur.eat('*');
        }
        if mono.is_empty() {
            return Err(cur.error_at(start, "constant terms are not allowed").into());
        }
        terms.push((if negative { -coeff } else { coeff }, mono));
        if cur.at_end() {
            break;
        }
    }
    Ok(NCPoly::from_terms(terms).expect("every monomial is non-empty"))
}

fn factor(cur: &mut Cursor) -> Result<(u32, u32), RingError> {
    let start = cur.pos();
    let var = if cur.eat('y') {
        2
    } else {
        cur.eat('x');
        let digits = cur.raw_digits();
        if digits.is_empty() {
            1
        } else {
            digits
                .parse()
                .ok()
                .filter(|&v: &u32| v >= 1)
                .ok_or_else(|| cur.error_at(start, "variable index must be a positive integer"))?
        }
    };
    let power = if cur.eat('^') {
        let at = cur.pos();
        let e = cur.unsigned()?;
        u32::try_from(e)
            .ok()
            .filter(|&e| e >= 1)
            .ok_or_else(|| cur.error_at(at, "power must be a positive integer"))?
    } else {
        1
    };
    Ok((var, power))
}

/// Polynomial with variables renumbered densely and coefficients mapped
/// into a particular ring.
struct Compiled {
    vars: usize,
    terms: Vec<(RingId, Vec<(usize, u32)>)>,
}

fn compile(p: &NCPoly, r: &IndexedRing) -> Compiled {
    let vars = p.variables();
    let terms = p
        .terms()
        .iter()
        .map(|t| {
            let mono = t
                .monomial
                .iter()
                .map(|&(v, e)| (vars.binary_search(&v).expect("listed"), e))
                .collect();
            (r.from_int(&t.coeff), mono)
        })
        .collect();
    Compiled {
        vars: vars.len(),
        terms,
    }
}

impl Compiled {
    fn eval(&self, r: &IndexedRing, t: &[RingId]) -> RingId {
        let mut sum = r.zero();
        for (coeff, mono) in &self.terms {
            let mut prod = r.pow(t[mono[0].0], mono[0].1);
            for &(v, e) in &mono[1..] {
                prod = r.mul(prod, r.pow(t[v], e));
            }
            sum = r.add(sum, r.mul(*coeff, prod));
        }
        sum
    }
}

/// Evaluates with `x_j ↦ assignment[j - 1]`.
pub fn poly_evaluate(
    p: &NCPoly,
    assignment: &[RingElement],
    ring: &IndexedRing,
) -> Result<RingElement, RingError> {
    if let Some(&needed) = p.variables().last() {
        if needed as usize > assignment.len() {
            return Err(RingError::Arity {
                needed,
                got: assignment.len(),
            });
        }
    }
    let c = compile(p, ring);
    let ids = p
        .variables()
        .iter()
        .map(|&v| ring.id_of(&assignment[v as usize - 1]))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ring.element(c.eval(ring, &ids)))
}

/// The image of `p` on `ring`, as ascending ids.
pub fn poly_image_ids(p: &NCPoly, ring: &IndexedRing, limits: &Limits) -> Result<Vec<RingId>, RingError> {
    let c = compile(p, ring);
    let n = ring.order();
    let tuples = BigUint::from(n).pow(c.vars as u32);
    if tuples > BigUint::from(limits.work_cap) {
        return Err(RingError::WorkCapExceeded {
            tuples,
            cap: limits.work_cap,
        });
    }
    let firsts: Vec<RingId> = if c.vars == 0 { Vec::new() } else { ring.ids().collect() };
    let members = exhaust(n, c.vars, &firsts, limits.workers, |t| c.eval(ring, t));
    Ok(members.iter().collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RingImageReport {
    pub ring: RingSpec,
    pub poly: NCPoly,
    #[serde(serialize_with = "crate::serde_util::decimal")]
    pub order: BigUint,
    #[serde(serialize_with = "crate::serde_util::decimal")]
    pub image_size: BigUint,
    pub ratio: BigRatio,
    pub strategy: Strategy,
}

/// `|p(R)| / |R|` by exhaustion.
pub fn poly_image_ratio(p: &NCPoly, spec: &RingSpec, limits: &Limits) -> Result<RingImageReport, RingError> {
    let ring = IndexedRing::new(spec, limits)?;
    let size = BigUint::from(poly_image_ids(p, &ring, limits)?.len());
    let order = BigUint::from(ring.order());
    Ok(RingImageReport {
        ring: spec.clone(),
        poly: p.clone(),
        ratio: BigRatio::from_counts(&size, &order).expect("nonzero order"),
        order,
        image_size: size,
        strategy: Strategy::Naive,
    })
}

/// Two candidate values of `μ(x², M₂(2^r))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareClosedForms {
    pub r: u32,
    /// `1 − 1/2^r`.
    pub published_value: BigRatio,
    /// `1 − (q² − 1)·q / q⁴`: every nonzero-nilpotent-part Jordan class
    /// `[[λ,1],[0,λ]]`, `λ ∈ F_q`, has `q² − 1` elements and none is a square.
    pub classcount_value: BigRatio,
}

pub fn gl2ring_square_closed_forms(r: u32) -> Result<SquareClosedForms, RingError> {
    if r < 1 {
        return Err(RingError::BadFieldExponent(r));
    }
    let q = BigInt::one() << r as usize;
    let q4 = q.pow(4);
    let excluded = (&q * &q - 1) * &q;
    Ok(SquareClosedForms {
        r,
        published_value: BigRatio::one_minus_inverse_power_of_two(r as u64),
        classcount_value: BigRatio::new(&q4 - excluded, q4).expect("q > 0"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    fn rat(s: &str) -> BigRatio {
        s.parse().unwrap()
    }

    fn mu(p: &str, r: &str) -> BigRatio {
        poly_image_ratio(&p.parse().unwrap(), &r.parse().unwrap(), &Limits::sequential())
            .unwrap()
            .ratio
    }

    #[test]
    fn parse_examples() {
        let p = parse_poly("x1^2").unwrap();
        assert_eq!(p.terms(), &[Term { coeff: 1.into(), monomial: vec![(1, 2)] }]);
        let c = parse_poly("x1*x2 - x2*x1").unwrap();
        assert_eq!(c.terms().len(), 2);
        assert_eq!(c.to_string(), "x1*x2 - x2*x1");
        assert!(matches!(parse_poly("x1 + 3"), Err(RingError::Parse { pos: 5, .. })));
        assert_eq!(parse_poly("2x y + 3*x*y - x^2").unwrap().to_string(), "5*x1*x2 - x1^2");
        assert_eq!(parse_poly("x*x").unwrap(), parse_poly("x^2").unwrap());
        assert!(parse_poly("x - x").unwrap().is_zero());
        assert!(parse_poly("").is_err());
        assert!(parse_poly("x^0").is_err());
        assert!(parse_poly("x y z").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["x1^2", "-x1 + 2*x2^3*x1", "x1*x2 - x2*x1", "-7*x3"] {
            let p = parse_poly(s).unwrap();
            assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
        }
    }

    #[test]
    fn squares_mod_four() {
        let ring = IndexedRing::new(&"Z4".parse().unwrap(), &Limits::default()).unwrap();
        let img = poly_image_ids(&NCPoly::power(2), &ring, &Limits::sequential()).unwrap();
        assert_eq!(img, vec![0, 1]);
        assert_eq!(mu("x^2", "Z4"), rat("1/2"));
        assert_eq!(mu("x^2", "Z4^2"), rat("1/4"));
        assert_eq!(mu("x^2", "Z4^3"), rat("1/8"));
    }

    #[test]
    fn squares_in_matrix_ring() {
        // 10 of the 16 matrices over F_2 are squares.
        assert_eq!(mu("x^2", "M2(2)"), rat("5/8"));
        let forms = gl2ring_square_closed_forms(1).unwrap();
        assert_eq!(forms.published_value, rat("1/2"));
        assert_eq!(forms.classcount_value, rat("5/8"));
        let forms = gl2ring_square_closed_forms(2).unwrap();
        assert_eq!(forms.published_value, rat("3/4"));
        assert_eq!(forms.classcount_value, rat("49/64"));
        assert_eq!(mu("x^2", "M2(4)"), forms.classcount_value);
        assert!(gl2ring_square_closed_forms(0).is_err());
    }

    #[test]
    fn square_image_is_conjugation_closed() {
        let limits = Limits::sequential();
        for q in [2u64, 3, 4] {
            let spec = RingSpec::mat2(q).unwrap();
            let ring = IndexedRing::new(&spec, &limits).unwrap();
            let img = poly_image_ids(&NCPoly::power(2), &ring, &limits).unwrap();
            assert!(img.contains(&ring.zero()));
            assert!(img.contains(&ring.one()));
            let member: std::collections::HashSet<RingId> = img.iter().copied().collect();
            // conjugate by every unit h, with h⁻¹ found by search
            let units: Vec<RingId> = ring
                .ids()
                .filter(|&h| ring.ids().any(|k| ring.mul(h, k) == ring.one()))
                .collect();
            for &h in &units {
                let hinv = ring.ids().find(|&k| ring.mul(h, k) == ring.one()).unwrap();
                for &x in &img {
                    assert!(member.contains(&ring.mul(ring.mul(h, x), hinv)));
                }
            }
        }
    }

    #[test]
    fn evaluate_with_elements() {
        let ring = IndexedRing::new(&"M2(2)".parse().unwrap(), &Limits::default()).unwrap();
        let f = Field::new(2, 1).unwrap();
        let a = RingElement::Matrix(f.mat([0, 1, 0, 0]).unwrap());
        let b = RingElement::Matrix(f.mat([0, 0, 1, 0]).unwrap());
        let comm = parse_poly("x1*x2 - x2*x1").unwrap();
        // e12 e21 − e21 e12 = diag(1, −1) = identity over F_2
        assert_eq!(
            poly_evaluate(&comm, &[a.clone(), b], &ring).unwrap(),
            RingElement::Matrix(f.mat_identity())
        );
        assert_eq!(
            poly_evaluate(&comm, &[a], &ring),
            Err(RingError::Arity { needed: 2, got: 1 })
        );
    }

    #[test]
    fn work_cap() {
        let limits = Limits {
            work_cap: 100,
            ..Limits::sequential()
        };
        let err = poly_image_ratio(&"x*y".parse().unwrap(), &"M2(2)".parse().unwrap(), &limits).unwrap_err();
        assert_eq!(
            err,
            RingError::WorkCapExceeded {
                tuples: BigUint::from(256u32),
                cap: 100
            }
        );
    }

    #[test]
    fn zero_polynomial_has_image_zero() {
        assert_eq!(mu("x - x", "Z5"), rat("1/5"));
    }
}
