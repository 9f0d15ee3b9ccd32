use alloc::string::{String, ToString};

use thiserror::Error;

use super::{Construction, Registry};

/// Positions are byte offsets into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown block `{id}` at {pos}")]
    UnknownBlock { pos: usize, id: String },
    #[error("trivial block as free product operand at {pos}")]
    TrivialOperand { pos: usize },
    #[error("block at {pos} has prime {found}, expected {expected}")]
    PrimeMismatch { pos: usize, found: u64, expected: u64 },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. }
            | ParseError::UnknownBlock { pos, .. }
            | ParseError::TrivialOperand { pos }
            | ParseError::PrimeMismatch { pos, .. } => *pos,
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    registry: &'a Registry,
    prime: Option<u64>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, ch: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == ch => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.syntax(alloc::format!("expected `{}`, found `{}`", ch as char, c as char))),
            None => Err(self.syntax(alloc::format!("expected `{}`, found end of input", ch as char))),
        }
    }

    fn syntax(&self, msg: String) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg }
    }

    fn construction(&mut self) -> Result<Construction, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let lpos = self.peek_pos();
                let a = self.construction()?;
                self.expect(b'*')?;
                let rpos = self.peek_pos();
                let b = self.construction()?;
                self.expect(b')')?;
                for (c, pos) in [(&a, lpos), (&b, rpos)] {
                    if c.is_trivial_leaf() {
                        return Err(ParseError::TrivialOperand { pos });
                    }
                }
                Ok(Construction::FreeProduct(alloc::boxed::Box::new(a), alloc::boxed::Box::new(b)))
            }
            Some(b'<') => {
                self.pos += 1;
                let c = self.construction()?;
                self.expect(b'>')?;
                Ok(Construction::extension(c))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.leaf(),
            Some(c) => Err(self.syntax(alloc::format!("unexpected `{}`", c as char))),
            None => Err(self.syntax("unexpected end of input".to_string())),
        }
    }

    fn peek_pos(&mut self) -> usize {
        self.skip_ws();
        self.pos
    }

    fn leaf(&mut self) -> Result<Construction, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        let id = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
        let block = self
            .registry
            .get(id)
            .ok_or_else(|| ParseError::UnknownBlock { pos: start, id: id.to_string() })?;
        match self.prime {
            Some(p) if p != block.prime => {
                return Err(ParseError::PrimeMismatch { pos: start, found: block.prime, expected: p })
            }
            _ => self.prime = Some(block.prime),
        }
        Ok(Construction::Leaf(block.clone()))
    }
}

/// Parse `c := ID | "(" c "*" c ")" | "<" c ">"`, ignoring whitespace.
pub fn parse(text: &str, registry: &Registry) -> Result<Construction, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, registry, prime: None };
    let c = p.construction()?;
    if let Some(ch) = p.peek() {
        return Err(p.syntax(alloc::format!("trailing input starting with `{}`", ch as char)));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::BlockSpec;
    use alloc::format;

    fn reg() -> Registry {
        Registry::new()
            .with(BlockSpec::free_pro_cyclic("A", 3, 1).unwrap())
            .with(BlockSpec::demushkin2("B_2", 3))
            .with(BlockSpec::trivial("T", 3))
            .with(BlockSpec::free_pro_cyclic("Q", 5, 1).unwrap())
    }

    #[test]
    fn grammar_shapes() {
        let r = reg();
        let c = parse("<(A * B_2)>", &r).unwrap();
        match &c {
            Construction::Extension(inner) => assert!(matches!(**inner, Construction::FreeProduct(..))),
            _ => panic!("expected extension"),
        }
        let c = parse(" < ( < A > *<B_2> ) > ", &r).unwrap();
        assert_eq!(format!("{}", c), "<(<A> * <B_2>)>");
        assert_eq!(parse(&format!("{}", c), &r).unwrap(), c);
    }

    #[test]
    fn errors_carry_positions() {
        let r = reg();
        assert_eq!(parse("(T * A)", &r).unwrap_err(), ParseError::TrivialOperand { pos: 1 });
        assert_eq!(parse("(A *  T)", &r).unwrap_err(), ParseError::TrivialOperand { pos: 6 });
        assert_eq!(parse("<Zed>", &r).unwrap_err(), ParseError::UnknownBlock { pos: 1, id: "Zed".into() });
        assert_eq!(parse("(A * A", &r).unwrap_err().position(), 6);
        assert_eq!(parse("A A", &r).unwrap_err().position(), 2);
        assert_eq!(parse("", &r).unwrap_err().position(), 0);
        assert_eq!(parse("(A + A)", &r).unwrap_err().position(), 3);
        assert!(matches!(parse("(A * Q)", &r).unwrap_err(), ParseError::PrimeMismatch { pos: 5, .. }));
    }

    #[test]
    fn trivial_allowed_under_extension() {
        let r = reg();
        assert!(parse("<T>", &r).is_ok());
        assert!(parse("(<T> * A)", &r).is_ok());
    }
}
