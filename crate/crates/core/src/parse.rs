//! Whitespace-insensitive character cursor shared by the text grammars.

use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

pub(crate) struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    /// Byte offset of the next significant character.
    pub fn pos(&mut self) -> usize {
        self.skip_ws();
        self.pos
    }

    pub fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    /// Next character without skipping whitespace.
    pub fn peek_raw(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    pub fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    pub fn slice_from(&self, start: usize) -> &'a str {
        &self.text[start..self.pos]
    }

    /// Digits immediately at the cursor, no whitespace skipped.
    pub fn raw_digits(&mut self) -> &'a str {
        let start = self.pos;
        while matches!(self.peek_raw(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.text[start..self.pos]
    }

    pub fn unsigned(&mut self) -> Result<u64, ParseError> {
        let start = self.pos();
        let digits = self.raw_digits();
        if digits.is_empty() {
            return Err(self.error_at(start, "expected an integer"));
        }
        digits
            .parse()
            .map_err(|_| self.error_at(start, "integer out of range"))
    }

    /// Optionally signed decimal integer of any size.
    pub fn signed_big(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos();
        let negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        self.skip_ws();
        let digits = self.raw_digits();
        if digits.is_empty() {
            return Err(self.error_at(start, "expected an integer"));
        }
        let n: BigInt = digits.parse().expect("ascii digits");
        Ok(if negative { -n } else { n })
    }

    pub fn error(&mut self, msg: &str) -> ParseError {
        let pos = self.pos();
        self.error_at(pos, msg)
    }

    pub fn error_at(&self, pos: usize, msg: &str) -> ParseError {
        ParseError {
            pos,
            msg: msg.to_string(),
        }
    }
}
