//! Word grammar:
//!
//! ```text
//! word := term { ("*" | ws) term }
//! term := atom [ "^" int ]
//! atom := gen | "[" word "," word "]" | "(" word ")" | "1"
//! gen  := "x" digits | "x" | "y"
//! ```
//!
//! `x` and `y` alias `x1` and `x2`; `1` is the identity word.

use super::{Syllable, Word, WordError};
use crate::parse::Cursor;

pub fn parse_word(text: &str) -> Result<Word, WordError> {
    let mut cur = Cursor::new(text);
    let w = word(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.error("unexpected character").into());
    }
    Ok(w)
}

fn starts_atom(c: Option<char>) -> bool {
    matches!(c, Some('x' | 'y' | '[' | '(' | '1'))
}

fn word(cur: &mut Cursor) -> Result<Word, WordError> {
    let mut w = term(cur)?;
    loop {
        if cur.eat('*') || starts_atom(cur.peek()) {
            w = w.concat(&term(cur)?);
        } else {
            return Ok(w);
        }
    }
}

fn term(cur: &mut Cursor) -> Result<Word, WordError> {
    let start = cur.pos();
    let (base, empty_atom) = atom(cur)?;
    if cur.eat('^') {
        if empty_atom {
            return Err(cur.error_at(start, "exponent on empty atom").into());
        }
        let k = cur.signed_big()?;
        return base.pow(&k);
    }
    Ok(base)
}

/// Returns the atom and whether it was the literal identity `1`.
fn atom(cur: &mut Cursor) -> Result<(Word, bool), WordError> {
    let start = cur.pos();
    match cur.peek() {
        Some('x') => {
            cur.eat('x');
            let digits = cur.raw_digits();
            if digits.is_empty() {
                return Ok((Word::generator(1), false));
            }
            let g: u32 = digits
                .parse()
                .ok()
                .filter(|&g| g >= 1)
                .ok_or_else(|| cur.error_at(start, "generator index must be a positive integer"))?;
            Ok((Word::from_syllables([Syllable::new(g, 1)]), false))
        }
        Some('y') => {
            cur.eat('y');
            Ok((Word::generator(2), false))
        }
        Some('1') => {
            cur.eat('1');
            if matches!(cur.peek_raw(), Some(c) if c.is_ascii_digit()) {
                return Err(cur.error_at(start, "unexpected integer").into());
            }
            Ok((Word::identity(), true))
        }
        Some('[') => {
            cur.eat('[');
            let u = word(cur)?;
            if !cur.eat(',') {
                return Err(cur.error("expected ','").into());
            }
            let v = word(cur)?;
            if !cur.eat(']') {
                return Err(cur.error("expected ']'").into());
            }
            Ok((Word::commutator(&u, &v), false))
        }
        Some('(') => {
            cur.eat('(');
            if cur.peek() == Some(')') {
                return Err(cur.error_at(start, "empty parentheses").into());
            }
            let w = word(cur)?;
            if !cur.eat(')') {
                return Err(cur.error("expected ')'").into());
            }
            Ok((w, false))
        }
        Some(_) => Err(cur.error("expected a generator, '[' or '('").into()),
        None => Err(cur.error("unexpected end of input").into()),
    }
}
