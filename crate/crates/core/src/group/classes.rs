//! Conjugacy classes.
//!
//! Three routes, kept independent of each other:
//! - [`gl2_class_reps`] writes down the GL₂(q) class table from rational
//!   canonical forms, with no enumeration at all;
//! - [`conjugacy_classes_bruteforce`] conjugates by every group element;
//! - [`IndexedGroup::class_partition`] closes orbits under a small generating
//!   set, factor by factor, and is what the image engine uses.

use num_integer::Integer;
use serde::Serialize;

use super::indexed::IndexedFactor;
use super::{ElemId, GroupElement, GroupError, GroupSpec, IndexedGroup};
use crate::algebra::{Field, FqElem, Mat2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassFamily {
    Central,
    Split,
    Jordan,
    Irreducible,
}

impl std::fmt::Display for ClassFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ClassFamily::Central => "central",
            ClassFamily::Split => "split",
            ClassFamily::Jordan => "jordan",
            ClassFamily::Irreducible => "irreducible",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjClass {
    pub rep: GroupElement,
    pub size: u64,
    /// Only set for classes of a single GL₂/SL₂ factor.
    pub family: Option<ClassFamily>,
}

/// Which eigenvalues the class table ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassScope {
    /// GL₂(q): eigenvalues in `F_q^×`.
    Group,
    /// GL₂(q)-orbits on the full matrix ring: eigenvalues in `F_q`.
    Ring,
}

/// Largest `q` for which the class table is written out.
const CLASS_TABLE_MAX_Q: u64 = 1024;

/// Conjugacy-class representatives of GL₂(q) (or, with [`ClassScope::Ring`],
/// of the conjugation action on all 2×2 matrices), in four families:
/// scalars, diagonal matrices with two distinct eigenvalues, Jordan blocks
/// `[[λ,1],[0,λ]]`, and companion matrices of irreducible quadratics.
pub fn gl2_class_reps(q: u64, scope: ClassScope) -> Result<Vec<ConjClass>, GroupError> {
    let spec = GroupSpec::gl2(q)?;
    let GroupSpec::GL2(pp) = spec else { unreachable!() };
    if q > CLASS_TABLE_MAX_Q {
        return Err(GroupError::CapExceeded {
            what: "class table for GL2",
            size: q.into(),
            cap: CLASS_TABLE_MAX_Q,
        });
    }
    let field = Field::new(pp.p, pp.r)?;
    let eigenvalues: Vec<FqElem> = match scope {
        ClassScope::Group => field.elements().skip(1).collect(),
        ClassScope::Ring => field.elements().collect(),
    };
    let zero = field.zero();
    let one = field.one();
    let mat = |a, b, c, d| GroupElement::Matrix(Mat2::new(a, b, c, d).expect("one field"));
    let mut out = Vec::new();

    for &l in &eigenvalues {
        out.push(ConjClass {
            rep: mat(l, zero, zero, l),
            size: 1,
            family: Some(ClassFamily::Central),
        });
    }
    for (i, &l) in eigenvalues.iter().enumerate() {
        for &m in &eigenvalues[i + 1..] {
            out.push(ConjClass {
                rep: mat(l, zero, zero, m),
                size: q * (q + 1),
                family: Some(ClassFamily::Split),
            });
        }
    }
    for &l in &eigenvalues {
        out.push(ConjClass {
            rep: mat(l, one, zero, l),
            size: q * q - 1,
            family: Some(ClassFamily::Jordan),
        });
    }
    // t² - αt + β is reducible iff (α, β) = (r + s, rs) for some r, s.
    let qs = q as usize;
    let mut reducible = vec![false; qs * qs];
    for r in field.elements() {
        for s in field.elements() {
            let alpha = field.add(r, s)?;
            let beta = field.mul(r, s)?;
            reducible[alpha.value() as usize * qs + beta.value() as usize] = true;
        }
    }
    for alpha in field.elements() {
        for beta in field.elements() {
            if reducible[alpha.value() as usize * qs + beta.value() as usize] {
                continue;
            }
            // Companion matrix with trace α and determinant β.
            out.push(ConjClass {
                rep: mat(zero, field.neg(beta)?, one, alpha),
                size: q * q - q,
                family: Some(ClassFamily::Irreducible),
            });
        }
    }
    Ok(out)
}

/// Family of a 2×2 matrix from its rational canonical form.
pub fn classify_matrix(field: &Field, m: &Mat2) -> Result<ClassFamily, GroupError> {
    let zero = field.zero();
    if m.b == zero && m.c == zero && m.a == m.d {
        return Ok(ClassFamily::Central);
    }
    let tr = field.mat_trace(m)?;
    let det = field.mat_det(m)?;
    let mut roots = 0;
    for t in field.elements() {
        // t² - tr·t + det
        let v = field.add(field.sub(field.mul(t, t)?, field.mul(tr, t)?)?, det)?;
        if v.is_zero() {
            roots += 1;
        }
    }
    Ok(match roots {
        0 => ClassFamily::Irreducible,
        1 => ClassFamily::Jordan,
        _ => ClassFamily::Split,
    })
}

fn family_of(g: &IndexedGroup, x: ElemId) -> Option<ClassFamily> {
    if g.factor_count() != 1 {
        return None;
    }
    let field = g.group().factor_field(0)?;
    match g.element(x) {
        GroupElement::Matrix(m) => classify_matrix(field, &m).ok(),
        _ => None,
    }
}

/// Classes by conjugating each unclassified element by every group element.
/// Quadratic in the group order; used as an oracle.
pub fn conjugacy_classes_bruteforce(
    g: &IndexedGroup,
    oracle_cap: u64,
) -> Result<Vec<ConjClass>, GroupError> {
    if g.order() as u64 > oracle_cap {
        return Err(GroupError::CapExceeded {
            what: "brute-force class computation",
            size: g.order().into(),
            cap: oracle_cap,
        });
    }
    let n = g.order();
    let inverses: Vec<ElemId> = g.ids().map(|h| g.inv(h)).collect();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for x in g.ids() {
        if seen[x as usize] {
            continue;
        }
        let mut size = 0u64;
        for h in g.ids() {
            let y = g.mul(g.mul(h, x), inverses[h as usize]);
            if !seen[y as usize] {
                seen[y as usize] = true;
                size += 1;
            }
        }
        out.push(ConjClass {
            rep: g.element(x),
            size,
            family: family_of(g, x),
        });
    }
    Ok(out)
}

/// Partition of an indexed group into conjugacy classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPartition {
    /// Class index of every element.
    pub class_of: Vec<u32>,
    /// Smallest id in each class, ascending.
    pub reps: Vec<ElemId>,
    pub sizes: Vec<u64>,
}

impl ClassPartition {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

/// Per-factor partition: class index per factor id plus representatives.
struct FactorPartition {
    class_of: Vec<u32>,
    reps: Vec<ElemId>,
}

const STRIDES: [u64; 4] = [1_000_003, 999_983, 104_729, 7_919];

/// A small generating set, found greedily from a fixed pseudo-random scan.
fn generating_set(n: u64, mul: impl Fn(ElemId, ElemId) -> ElemId) -> Vec<ElemId> {
    let stride = *STRIDES
        .iter()
        .find(|s| s.gcd(&n) == 1)
        .expect("n has at most one large prime factor from the list");
    let mut gens: Vec<ElemId> = Vec::new();
    let mut member = vec![false; n as usize];
    member[0] = true;
    let mut size = 1u64;
    let mut k = 0u64;
    while size < n {
        let cand = ((k * stride + 1) % n) as ElemId;
        k += 1;
        if member[cand as usize] {
            continue;
        }
        gens.push(cand);
        member.iter_mut().for_each(|m| *m = false);
        member[0] = true;
        let mut queue = vec![0 as ElemId];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &s in &gens {
                let y = mul(x, s);
                if !member[y as usize] {
                    member[y as usize] = true;
                    queue.push(y);
                }
            }
        }
        size = queue.len() as u64;
    }
    gens
}

fn factor_partition(g: &IndexedGroup, i: usize) -> FactorPartition {
    let n = g.factor_order(i);
    if let IndexedFactor::Cyclic(_) = g.factors[i] {
        return FactorPartition {
            class_of: (0..n as u32).collect(),
            reps: (0..n as ElemId).collect(),
        };
    }
    let mul = |x, y| g.factor_mul(i, x, y);
    let gens = generating_set(n, mul);
    let gen_invs: Vec<ElemId> = gens.iter().map(|&s| g.factor_inv(i, s)).collect();
    let mut class_of = vec![u32::MAX; n as usize];
    let mut reps = Vec::new();
    let mut queue = Vec::new();
    for x in 0..n as ElemId {
        if class_of[x as usize] != u32::MAX {
            continue;
        }
        let c = reps.len() as u32;
        reps.push(x);
        class_of[x as usize] = c;
        queue.clear();
        queue.push(x);
        let mut head = 0;
        while head < queue.len() {
            let y = queue[head];
            head += 1;
            for (&s, &si) in gens.iter().zip(&gen_invs) {
                let z = mul(mul(s, y), si);
                if class_of[z as usize] == u32::MAX {
                    class_of[z as usize] = c;
                    queue.push(z);
                }
            }
        }
    }
    FactorPartition { class_of, reps }
}

impl IndexedGroup {
    /// Conjugacy partition, computed per factor and combined: the classes of
    /// a direct product are products of classes.
    pub fn class_partition(&self) -> ClassPartition {
        let parts: Vec<FactorPartition> =
            (0..self.factor_count()).map(|i| factor_partition(self, i)).collect();
        let counts: Vec<u64> = parts.iter().map(|p| p.reps.len() as u64).collect();
        let total: u64 = counts.iter().product();
        let mut class_of = Vec::with_capacity(self.order());
        let mut sizes = vec![0u64; total as usize];
        for x in self.ids() {
            let mut c = 0u64;
            for (i, p) in parts.iter().enumerate() {
                c = c * counts[i] + p.class_of[self.component(x, i) as usize] as u64;
            }
            class_of.push(c as u32);
            sizes[c as usize] += 1;
        }
        let mut reps = Vec::with_capacity(total as usize);
        let mut digits = vec![0usize; parts.len()];
        for _ in 0..total {
            reps.push(self.compose(digits.iter().zip(&parts).map(|(&d, p)| p.reps[d])));
            for i in (0..digits.len()).rev() {
                digits[i] += 1;
                if (digits[i] as u64) < counts[i] {
                    break;
                }
                digits[i] = 0;
            }
        }
        ClassPartition {
            class_of,
            reps,
            sizes,
        }
    }

    /// [`ConjClass`] list from the fast partition.
    pub fn conjugacy_classes(&self) -> Vec<ConjClass> {
        let p = self.class_partition();
        p.reps
            .iter()
            .zip(&p.sizes)
            .map(|(&r, &size)| ConjClass {
                rep: self.element(r),
                size,
                family: family_of(self, r),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::Limits;

    fn build(s: &str) -> IndexedGroup {
        IndexedGroup::new(&s.parse().unwrap(), &Limits::default()).unwrap()
    }

    #[test]
    fn gl2_table_counts() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let reps = gl2_class_reps(q, ClassScope::Group).unwrap();
            assert_eq!(reps.len() as u64, q * q - 1, "q={q}");
            let total: u64 = reps.iter().map(|c| c.size).sum();
            assert_eq!(total, (q * q - 1) * (q * q - q), "q={q}");
            let ring = gl2_class_reps(q, ClassScope::Ring).unwrap();
            let total: u64 = ring.iter().map(|c| c.size).sum();
            assert_eq!(total, q.pow(4), "ring q={q}");
        }
        let sizes: Vec<u64> = gl2_class_reps(2, ClassScope::Group)
            .unwrap()
            .iter()
            .map(|c| c.size)
            .collect();
        let mut sorted = sizes.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 2, 3]);
        assert_eq!(gl2_class_reps(6, ClassScope::Group), Err(GroupError::NotPrimePower(6)));
    }

    #[test]
    fn bruteforce_small_groups() {
        assert_eq!(conjugacy_classes_bruteforce(&build("C4"), 1000).unwrap().len(), 4);
        assert_eq!(conjugacy_classes_bruteforce(&build("GL2(2)"), 1000).unwrap().len(), 3);
        assert_eq!(conjugacy_classes_bruteforce(&build("SL2(3)"), 1000).unwrap().len(), 7);
        assert!(conjugacy_classes_bruteforce(&build("GL2(3)"), 10).is_err());
    }

    #[test]
    fn table_matches_bruteforce() {
        for q in [2u64, 3, 4, 5] {
            let g = build(&format!("GL2({q})"));
            let brute = conjugacy_classes_bruteforce(&g, 1_000_000).unwrap();
            let fast = g.class_partition();
            let table = gl2_class_reps(q, ClassScope::Group).unwrap();
            assert_eq!(brute.len(), table.len());
            let mut seen = std::collections::HashSet::new();
            for c in &table {
                let id = g.id_of(&c.rep).unwrap();
                let class = fast.class_of[id as usize];
                assert!(seen.insert(class), "reps conjugate for q={q}");
                assert_eq!(fast.sizes[class as usize], c.size);
                let GroupElement::Matrix(m) = &c.rep else { panic!() };
                let field = g.group().factor_field(0).unwrap();
                assert_eq!(Some(classify_matrix(field, m).unwrap()), c.family);
            }
            let mut a: Vec<u64> = brute.iter().map(|c| c.size).collect();
            let mut b: Vec<u64> = table.iter().map(|c| c.size).collect();
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn fast_partition_equals_bruteforce() {
        for s in ["GL2(2)", "SL2(3)", "C3 x SL2(3)", "GL2(3)", "SL2(5)", "C2 x GL2(2)"] {
            let g = build(s);
            let fast = g.class_partition();
            let brute = conjugacy_classes_bruteforce(&g, 1_000_000).unwrap();
            assert_eq!(fast.len(), brute.len(), "{s}");
            for c in &brute {
                let rep = g.id_of(&c.rep).unwrap();
                let class = fast.class_of[rep as usize];
                assert_eq!(fast.reps[class as usize], rep, "{s}");
                assert_eq!(fast.sizes[class as usize], c.size, "{s}");
            }
        }
    }
}
