//! Exact images and image ratios of word maps on finite groups.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::BigRatio;
use crate::exhaust::{exhaust, Bitset};
use crate::group::{ElemId, GroupElement, GroupError, GroupSpec, IndexedGroup};
use crate::word::Word;
use crate::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Every tuple in `G^k`.
    Naive,
    /// First variable over class representatives, then closed under conjugation.
    #[default]
    Pruned,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Naive => "naive",
            Strategy::Pruned => "pruned",
        })
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "naive" => Ok(Strategy::Naive),
            "pruned" => Ok(Strategy::Pruned),
            _ => Err(format!("unknown strategy '{s}' (expected naive or pruned)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ImageError {
    #[error("the image needs {tuples} evaluations, above the work cap of {cap}")]
    WorkCapExceeded { tuples: BigUint, cap: u64 },
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl ImageError {
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            ImageError::WorkCapExceeded { .. } | ImageError::Group(GroupError::CapExceeded { .. })
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImageReport {
    pub spec: GroupSpec,
    pub word: Word,
    #[serde(serialize_with = "crate::serde_util::decimal")]
    pub order: BigUint,
    #[serde(serialize_with = "crate::serde_util::decimal")]
    pub image_size: BigUint,
    pub ratio: BigRatio,
    pub strategy: Strategy,
}

/// How one syllable turns its variable's value into a factor.
enum Step {
    Plain(usize),
    Table(usize, usize),
}

/// The word with variables renumbered densely and powers tabulated.
struct Compiled {
    vars: usize,
    steps: Vec<Step>,
    tables: Vec<Vec<ElemId>>,
}

fn compile(w: &Word, g: &IndexedGroup) -> Compiled {
    let gens = w.generators();
    let order = BigInt::from(g.order());
    let mut exps: Vec<BigInt> = Vec::new();
    let mut steps = Vec::new();
    for s in w.syllables() {
        let var = gens.binary_search(&s.generator).expect("generator listed");
        let e = num_integer::Integer::mod_floor(&s.exponent, &order);
        if e.is_zero() {
            continue;
        }
        if e.is_one() {
            steps.push(Step::Plain(var));
            continue;
        }
        let slot = exps.iter().position(|x| *x == e).unwrap_or_else(|| {
            exps.push(e.clone());
            exps.len() - 1
        });
        steps.push(Step::Table(var, slot));
    }
    let tables = exps.iter().map(|e| g.power_map(e)).collect();
    Compiled {
        vars: gens.len(),
        steps,
        tables,
    }
}

impl Compiled {
    #[inline]
    fn eval(&self, g: &IndexedGroup, t: &[ElemId]) -> ElemId {
        let mut acc = g.identity();
        for (i, step) in self.steps.iter().enumerate() {
            let x = match *step {
                Step::Plain(v) => t[v],
                Step::Table(v, slot) => self.tables[slot][t[v] as usize],
            };
            acc = if i == 0 { x } else { g.mul(acc, x) };
        }
        acc
    }
}

fn check_work(tuples: BigUint, limits: &Limits) -> Result<(), ImageError> {
    if tuples > BigUint::from(limits.work_cap) {
        return Err(ImageError::WorkCapExceeded {
            tuples,
            cap: limits.work_cap,
        });
    }
    Ok(())
}

/// Image of `w` on an already indexed group, as ascending ids.
pub fn image_ids(
    w: &Word,
    g: &IndexedGroup,
    strategy: Strategy,
    limits: &Limits,
) -> Result<Vec<ElemId>, ImageError> {
    let c = compile(w, g);
    let n = g.order();
    if c.vars == 0 {
        return Ok(vec![g.identity()]);
    }
    let rest = BigUint::from(n).pow(c.vars as u32 - 1);
    let members: Bitset = match strategy {
        Strategy::Naive => {
            check_work(&rest * n, limits)?;
            let firsts: Vec<ElemId> = g.ids().collect();
            exhaust(n, c.vars, &firsts, limits.workers, |t| c.eval(g, t))
        }
        Strategy::Pruned => {
            check_work(rest.clone(), limits)?;
            let classes = g.class_partition();
            check_work(&rest * classes.len(), limits)?;
            let raw = exhaust(n, c.vars, &classes.reps, limits.workers, |t| c.eval(g, t));
            let mut hit = vec![false; classes.len()];
            for x in raw.iter() {
                hit[classes.class_of[x as usize] as usize] = true;
            }
            let mut closed = Bitset::new(n);
            for x in g.ids() {
                if hit[classes.class_of[x as usize] as usize] {
                    closed.insert(x);
                }
            }
            closed
        }
    };
    Ok(members.iter().collect())
}

/// `{ w(t) : t ∈ G^k }` in enumeration order.
pub fn image(
    w: &Word,
    spec: &GroupSpec,
    strategy: Strategy,
    limits: &Limits,
) -> Result<Vec<GroupElement>, ImageError> {
    let g = IndexedGroup::new(spec, limits)?;
    Ok(image_ids(w, &g, strategy, limits)?
        .into_iter()
        .map(|x| g.element(x))
        .collect())
}

pub fn ratio_indexed(
    w: &Word,
    g: &IndexedGroup,
    strategy: Strategy,
    limits: &Limits,
) -> Result<ImageReport, ImageError> {
    let size = BigUint::from(image_ids(w, g, strategy, limits)?.len());
    let order = BigUint::from(g.order());
    Ok(ImageReport {
        spec: g.spec().clone(),
        word: w.clone(),
        ratio: BigRatio::from_counts(&size, &order).expect("nonzero order"),
        order,
        image_size: size,
        strategy,
    })
}

/// `μ(w, G) = |w(G)| / |G|`, exact.
pub fn ratio(
    w: &Word,
    spec: &GroupSpec,
    strategy: Strategy,
    limits: &Limits,
) -> Result<ImageReport, ImageError> {
    let g = IndexedGroup::new(spec, limits)?;
    ratio_indexed(w, &g, strategy, limits)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRow {
    pub word: Word,
    pub spec: GroupSpec,
    pub result: Result<ImageReport, ImageError>,
}

/// Ratios for every (word, spec) pair, words outermost. Failures are kept in
/// their row.
pub fn scan(
    words: &[Word],
    specs: &[GroupSpec],
    strategy: Strategy,
    limits: &Limits,
) -> Vec<ScanRow> {
    let mut grid: Vec<Vec<Option<Result<ImageReport, ImageError>>>> =
        vec![vec![None; specs.len()]; words.len()];
    for (j, spec) in specs.iter().enumerate() {
        let built = IndexedGroup::new(spec, limits);
        for (i, w) in words.iter().enumerate() {
            grid[i][j] = Some(match &built {
                Ok(g) => ratio_indexed(w, g, strategy, limits),
                Err(e) => Err(e.clone().into()),
            });
        }
    }
    let mut rows = Vec::with_capacity(words.len() * specs.len());
    for (i, w) in words.iter().enumerate() {
        for (j, spec) in specs.iter().enumerate() {
            rows.push(ScanRow {
                word: w.clone(),
                spec: spec.clone(),
                result: grid[i][j].take().expect("filled above"),
            });
        }
    }
    rows
}

/// Tuple count the chosen strategy would evaluate, without running it.
pub fn required_work(w: &Word, g: &IndexedGroup, strategy: Strategy) -> BigUint {
    let k = w.generators().len() as u32;
    if k == 0 {
        return BigUint::one();
    }
    let n = BigUint::from(g.order());
    let first = match strategy {
        Strategy::Naive => n.clone(),
        Strategy::Pruned => BigUint::from(g.class_partition().len()),
    };
    first * n.pow(k - 1)
}

impl ImageReport {
    pub fn ratio_float(&self) -> f64 {
        self.ratio.to_f64()
    }

    pub fn image_size_u64(&self) -> Option<u64> {
        self.image_size.to_u64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{engel, parse_word, power_word};

    fn spec(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    fn r(w: &Word, s: &str) -> ImageReport {
        ratio(w, &spec(s), Strategy::Pruned, &Limits::sequential()).unwrap()
    }

    #[test]
    fn commutator_on_cyclic() {
        let img = image(&engel(1).unwrap(), &spec("C5"), Strategy::Naive, &Limits::sequential())
            .unwrap();
        assert_eq!(img, vec![GroupElement::Residue(0)]);
        assert_eq!(r(&engel(1).unwrap(), "C7").ratio, BigRatio::new(1, 7).unwrap());
    }

    #[test]
    fn squares_in_gl2_2() {
        let w = power_word(2).unwrap();
        let rep = r(&w, "GL2(2)");
        assert_eq!(rep.image_size, BigUint::from(3u32));
        assert_eq!(rep.ratio, BigRatio::new(1, 2).unwrap());
        let g = IndexedGroup::new(&spec("GL2(2)"), &Limits::default()).unwrap();
        for x in image_ids(&w, &g, Strategy::Naive, &Limits::sequential()).unwrap() {
            // identity or order three
            assert_eq!(g.pow(x, 3), g.identity());
        }
    }

    #[test]
    fn cubing_is_bijective_on_c7() {
        assert_eq!(r(&power_word(3).unwrap(), "C7").ratio, BigRatio::one());
    }

    #[test]
    fn empty_word() {
        for s in ["C1", "C6", "GL2(3)", "C2 x SL2(3)"] {
            let img = image(&Word::identity(), &spec(s), Strategy::Pruned, &Limits::default())
                .unwrap();
            assert_eq!(img.len(), 1);
        }
    }

    #[test]
    fn strategies_agree_and_workers_agree() {
        let words = ["x^2", "[x,y]", "x^3 y^2", "[[x,y],y]", "x^6", "x y x y^-1"];
        for s in ["GL2(2)", "SL2(3)", "C4 x C6", "C2 x GL2(3)", "GL2(3)"] {
            let g = IndexedGroup::new(&spec(s), &Limits::default()).unwrap();
            for w in words {
                let w = parse_word(w).unwrap();
                let a = image_ids(&w, &g, Strategy::Naive, &Limits::sequential()).unwrap();
                let b = image_ids(&w, &g, Strategy::Pruned, &Limits::sequential()).unwrap();
                let c = image_ids(&w, &g, Strategy::Pruned, &Limits::default()).unwrap();
                assert_eq!(a, b, "{w} on {s}");
                assert_eq!(b, c, "{w} on {s}");
            }
        }
    }

    #[test]
    fn work_cap() {
        let limits = Limits {
            work_cap: 1000,
            ..Limits::sequential()
        };
        let err = ratio(&engel(1).unwrap(), &spec("GL2(3)"), Strategy::Naive, &limits).unwrap_err();
        assert_eq!(
            err,
            ImageError::WorkCapExceeded {
                tuples: BigUint::from(48u32 * 48),
                cap: 1000
            }
        );
        assert!(err.is_cap());
        // pruned needs only 8 · 48 tuples
        assert!(ratio(&engel(1).unwrap(), &spec("GL2(3)"), Strategy::Pruned, &limits).is_ok());
        let g = IndexedGroup::new(&spec("GL2(3)"), &limits).unwrap();
        assert_eq!(required_work(&engel(1).unwrap(), &g, Strategy::Pruned), BigUint::from(384u32));
    }

    #[test]
    fn scan_rows() {
        let specs: Vec<GroupSpec> = (2..=6).map(GroupSpec::Cyclic).collect();
        let rows = scan(&[engel(1).unwrap()], &specs, Strategy::Pruned, &Limits::sequential());
        let got: Vec<String> = rows
            .iter()
            .map(|r| r.result.as_ref().unwrap().ratio.to_string())
            .collect();
        assert_eq!(got, ["1/2", "1/3", "1/4", "1/5", "1/6"]);
        assert!(scan(&[], &[], Strategy::Pruned, &Limits::default()).is_empty());
        let rows = scan(
            &[power_word(2).unwrap()],
            &[spec("GL2(2)"), spec("GL2(4)")],
            Strategy::Pruned,
            &Limits::default(),
        );
        assert_eq!(rows[1].result.as_ref().unwrap().ratio, BigRatio::new(3, 4).unwrap());
        let tiny = Limits {
            enumeration_cap: 10,
            ..Limits::sequential()
        };
        let rows = scan(&[power_word(2).unwrap()], &[spec("C3"), spec("GL2(3)")], Strategy::Naive, &tiny);
        assert!(rows[0].result.is_ok());
        assert!(rows[1].result.as_ref().unwrap_err().is_cap());
    }
}
