//! Free-group words, kept freely reduced at all times.

mod eval;
mod parse;

pub use eval::evaluate;
pub use parse::parse_word;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::group::GroupError;
use crate::parse::ParseError;

/// Largest number of syllables a power of a compound word may expand to.
const MAX_EXPANDED_SYLLABLES: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("syntax error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("Engel index must be at least 1, got {0}")]
    BadEngelIndex(i64),
    #[error("power exponent must be at least 1, got {0}")]
    BadPowerExponent(BigInt),
    #[error("generator x{0} has no assigned value")]
    MissingAssignment(u32),
    #[error("power of a compound word would have more than {MAX_EXPANDED_SYLLABLES} syllables")]
    TooLong,
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl From<ParseError> for WordError {
    fn from(e: ParseError) -> Self {
        WordError::Parse {
            pos: e.pos,
            msg: e.msg,
        }
    }
}

/// `x_generator^exponent`; generators are numbered from 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub generator: u32,
    pub exponent: BigInt,
}

impl Syllable {
    pub fn new(generator: u32, exponent: impl Into<BigInt>) -> Self {
        Syllable {
            generator,
            exponent: exponent.into(),
        }
    }
}

/// A freely reduced word: adjacent syllables have distinct generators and
/// every exponent is nonzero. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word {
    syllables: Vec<Syllable>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(i: u32) -> Self {
        Word::from_syllables([Syllable::new(i, 1)])
    }

    /// Reduces the given syllable sequence.
    pub fn from_syllables(syllables: impl IntoIterator<Item = Syllable>) -> Self {
        let mut w = Word::identity();
        for s in syllables {
            w.push(s);
        }
        w
    }

    /// Appends one syllable, merging or cancelling against the last one.
    fn push(&mut self, s: Syllable) {
        if s.exponent.is_zero() {
            return;
        }
        if let Some(last) = self.syllables.last_mut() {
            if last.generator == s.generator {
                last.exponent += s.exponent;
                if last.exponent.is_zero() {
                    self.syllables.pop();
                }
                return;
            }
        }
        self.syllables.push(s);
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Distinct generator indices used, ascending.
    pub fn generators(&self) -> Vec<u32> {
        let mut g: Vec<u32> = self.syllables.iter().map(|s| s.generator).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for s in &other.syllables {
            w.push(s.clone());
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable::new(s.generator, -&s.exponent))
                .collect(),
        }
    }

    /// `[u, v] = u v u⁻¹ v⁻¹`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.concat(v).concat(&u.inverse()).concat(&v.inverse())
    }

    /// `self^k`. A single syllable just scales its exponent; anything longer
    /// is expanded, up to a fixed syllable budget.
    pub fn pow(&self, k: &BigInt) -> Result<Word, WordError> {
        if k.is_zero() || self.is_identity() {
            return Ok(Word::identity());
        }
        if let [s] = self.syllables.as_slice() {
            return Ok(Word::from_syllables([Syllable::new(s.generator, &s.exponent * k)]));
        }
        let reps = k
            .abs()
            .to_u64()
            .filter(|r| r.saturating_mul(self.len() as u64) <= MAX_EXPANDED_SYLLABLES)
            .ok_or(WordError::TooLong)?;
        let base = if k.is_negative() { self.inverse() } else { self.clone() };
        let mut acc = Word::identity();
        let mut sq = base;
        let mut r = reps;
        while r > 0 {
            if r & 1 == 1 {
                acc = acc.concat(&sq);
            }
            r >>= 1;
            if r > 0 {
                sq = sq.concat(&sq);
            }
        }
        Ok(acc)
    }

    /// Total exponent of each generator; entry `j - 1` belongs to `x_j`.
    /// The word lies in the commutator subgroup iff every entry is zero.
    pub fn abelianize(&self) -> Vec<BigInt> {
        let n = self.syllables.iter().map(|s| s.generator).max().unwrap_or(0) as usize;
        let mut out = vec![BigInt::zero(); n];
        for s in &self.syllables {
            out[s.generator as usize - 1] += &s.exponent;
        }
        out
    }

    pub fn in_commutator_subgroup(&self) -> bool {
        self.abelianize().iter().all(Zero::is_zero)
    }
}

/// Engel words: `e_1 = [x, y]`, `e_i = [e_{i-1}, y]`.
pub fn engel(i: i64) -> Result<Word, WordError> {
    if i < 1 {
        return Err(WordError::BadEngelIndex(i));
    }
    let y = Word::generator(2);
    let mut e = Word::commutator(&Word::generator(1), &y);
    for _ in 1..i {
        e = Word::commutator(&e, &y);
    }
    Ok(e)
}

/// The power word `x1^M`.
pub fn power_word(m: impl Into<BigInt>) -> Result<Word, WordError> {
    let m = m.into();
    if m < BigInt::one() {
        return Err(WordError::BadPowerExponent(m));
    }
    Ok(Word::from_syllables([Syllable::new(1, m)]))
}

impl fmt::Display for Word {
    /// Canonical syntax accepted by [`parse_word`]; the identity prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if s.exponent.is_one() {
                write!(f, "x{}", s.generator)?;
            } else {
                write!(f, "x{}^{}", s.generator, s.exponent)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_word(s)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
