//! Expression grammar for group words.
//!
//! ```text
//! expr     := term (('*')? term)*
//! term     := atom ('^' exponent)*
//! exponent := '-'? digits | '(' expr ')'      -- a^(b) is b⁻¹ a b
//! atom     := 'x' digits | 'e' | '(' expr ')'
//! ```

use super::{capacity, GroupWord, MAX_GENERATOR_INDEX};
use crate::error::{Error, Result};

/// Bound on `|k|` in `a^k` and on the total letter count of a parsed word.
pub const MAX_EXPONENT: u64 = 1 << 16;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&self, expected: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            expected: expected.to_string(),
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("'{}'", c as char)))
        }
    }

    fn digits(&mut self, what: &str) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            self.pos = start;
            return Err(self.error(what));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse::<u64>()
            .map_err(|_| Error::Parse {
                offset: start,
                expected: format!("{} (too large)", what),
            })
    }

    fn starts_term(&mut self) -> bool {
        matches!(self.peek(), Some(b'x') | Some(b'e') | Some(b'('))
    }

    fn expr(&mut self) -> Result<GroupWord> {
        let mut w = self.term()?;
        loop {
            if self.peek() == Some(b'*') {
                self.pos += 1;
                if !self.starts_term() {
                    return Err(self.error("generator, 'e' or '('"));
                }
            } else if !self.starts_term() {
                return Ok(w);
            }
            let t = self.term()?;
            w = w.concat(&t);
            check_size(&w)?;
        }
    }

    fn term(&mut self) -> Result<GroupWord> {
        let mut w = self.atom()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            match self.peek() {
                Some(b'(') => {
                    self.pos += 1;
                    let b = self.expr()?;
                    self.expect(b')')?;
                    w = w.conjugate(&b);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let k = self.exponent()?;
                    w = w.pow(-(k as i64));
                }
                Some(c) if c.is_ascii_digit() => {
                    let k = self.exponent()?;
                    w = w.pow(k as i64);
                }
                _ => return Err(self.error("integer exponent or '('")),
            }
            check_size(&w)?;
        }
        Ok(w)
    }

    fn exponent(&mut self) -> Result<u64> {
        let k = self.digits("integer exponent")?;
        if k > MAX_EXPONENT {
            return Err(capacity("exponent", MAX_EXPONENT as usize));
        }
        Ok(k)
    }

    fn atom(&mut self) -> Result<GroupWord> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let i = self.digits("generator index")?;
                if i > MAX_GENERATOR_INDEX as u64 {
                    return Err(capacity("generator index", MAX_GENERATOR_INDEX as usize));
                }
                Ok(GroupWord::generator(i as u32))
            }
            Some(b'e') => {
                self.pos += 1;
                Ok(GroupWord::identity())
            }
            Some(b'(') => {
                self.pos += 1;
                let w = self.expr()?;
                self.expect(b')')?;
                Ok(w)
            }
            _ => Err(self.error("generator, 'e' or '('")),
        }
    }
}

fn check_size(w: &GroupWord) -> Result<()> {
    if w.total_length() > MAX_EXPONENT {
        return Err(capacity("word length", MAX_EXPONENT as usize));
    }
    Ok(())
}

pub fn parse_expression(text: &str) -> Result<GroupWord> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let w = p.expr()?;
    if p.peek().is_some() {
        return Err(p.error("end of input"));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{element_of, generator, normal_form, y};

    #[test]
    fn parses_y() {
        let w = parse_expression("x0^2*x1").unwrap();
        assert_eq!(w, GroupWord::from_letters([(0, 2), (1, 1)]));
        assert_eq!(element_of(&w), y());
    }

    #[test]
    fn conjugation_sugar() {
        let w = parse_expression("x1^(x0)").unwrap();
        assert_eq!(w, GroupWord::from_letters([(0, -1), (1, 1), (0, 1)]));
        assert_eq!(element_of(&w), generator(2));
        assert_eq!(normal_form(&element_of(&w)).to_string(), "x2");
    }

    #[test]
    fn dangling_caret_is_an_error_at_offset_3() {
        match parse_expression("x0^") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn other_forms() {
        assert_eq!(parse_expression("(x0^2*x1)^3").unwrap().total_length(), 9);
        assert_eq!(
            parse_expression("x0 x1").unwrap(),
            parse_expression("x0*x1").unwrap()
        );
        assert_eq!(
            parse_expression("x0x1").unwrap(),
            parse_expression("x0*x1").unwrap()
        );
        assert_eq!(
            parse_expression("x1^-1").unwrap(),
            GroupWord::from_letters([(1, -1)])
        );
        assert_eq!(parse_expression("e").unwrap(), GroupWord::identity());
        assert_eq!(
            parse_expression("x0^2 x1 x4").unwrap().to_string(),
            "x0^2 x1 x4"
        );
        assert_eq!(parse_expression("x0^-2").unwrap().to_string(), "x0^-2");
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_expression(""),
            Err(Error::Parse { offset: 0, .. })
        ));
        assert!(matches!(
            parse_expression("x"),
            Err(Error::Parse { offset: 1, .. })
        ));
        assert!(matches!(
            parse_expression("(x0"),
            Err(Error::Parse { offset: 3, .. })
        ));
        assert!(matches!(
            parse_expression("x0)"),
            Err(Error::Parse { offset: 2, .. })
        ));
        assert!(matches!(
            parse_expression("x0 *"),
            Err(Error::Parse { offset: 4, .. })
        ));
        assert!(matches!(
            parse_expression("y"),
            Err(Error::Parse { offset: 0, .. })
        ));
        assert!(matches!(
            parse_expression("x5000"),
            Err(Error::CapacityExceeded { .. })
        ));
        assert!(matches!(
            parse_expression("x0^999999"),
            Err(Error::CapacityExceeded { .. })
        ));
    }
}
