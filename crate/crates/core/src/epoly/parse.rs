//! Recursive-descent parser for the expression grammar
//!
//! ```text
//! expr   := ('+'|'-')? term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ('^' nat)?
//! atom   := int | 'x' nat? | 'y' nat? | 'b' nat | 'E' '(' expr ')' | '(' expr ')'
//! ```
//!
//! Division is only allowed by nonzero rational constants, so `3/4` and
//! `x/2` parse while `1/x` is rejected.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{EPoly, Vars};
use crate::base::Rational;
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a Vars,
}

pub fn parse_epoly(text: &str, vars: &Vars) -> Result<EPoly> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(p.err("empty expression"));
    }
    let e = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.err(&format!("unexpected `{}`", p.peek_char())));
    }
    Ok(e)
}

/// Parses a comma-separated list of expressions. An empty or blank string
/// is the empty list.
pub fn parse_list(text: &str, vars: &Vars) -> Result<Vec<EPoly>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut offset = 0;
    for piece in text.split(',') {
        let e = parse_epoly(piece, vars).map_err(|e| match e {
            Error::Syntax { pos, msg } => Error::Syntax {
                pos: pos + offset,
                msg,
            },
            Error::UnknownSymbol { name, pos } => Error::UnknownSymbol {
                name,
                pos: pos + offset,
            },
            other => other,
        })?;
        out.push(e);
        offset += piece.len() + 1;
    }
    Ok(out)
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek_char(&self) -> char {
        std::str::from_utf8(&self.src[self.pos..])
            .ok()
            .and_then(|s| s.chars().next())
            .unwrap_or('?')
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            std::str::from_utf8(&self.src[start..self.pos]).ok()
        }
    }

    fn expr(&mut self) -> Result<EPoly> {
        let n = self.vars.len();
        let negate = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            if self.eat(b'+') {
                let t = self.term()?;
                acc = &acc + &t;
            } else if self.eat(b'-') {
                let t = self.term()?;
                acc = &acc - &t;
            } else {
                break;
            }
        }
        debug_assert_eq!(acc.nvars(), n);
        Ok(acc)
    }

    fn term(&mut self) -> Result<EPoly> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                let f = self.factor()?;
                acc = &acc * &f;
            } else if self.eat(b'/') {
                let at = self.pos;
                let f = self.factor()?;
                let d = f.as_rational().ok_or(Error::Syntax {
                    pos: at,
                    msg: "division by a non-constant".into(),
                })?;
                if d.is_zero() {
                    return Err(Error::Syntax {
                        pos: at,
                        msg: "division by zero".into(),
                    });
                }
                acc = acc.scale(&(Rational::one() / d));
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<EPoly> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let d = self.digits().ok_or_else(|| self.err("expected exponent"))?;
            let k: u32 = d.parse().map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<EPoly> {
        let n = self.vars.len();
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits().unwrap_or("0");
                let v: BigInt = d.parse().map_err(|_| self.err("bad integer"))?;
                Ok(EPoly::constant(n, Rational::from_integer(v)))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(b'E') => {
                self.pos += 1;
                if !self.eat(b'(') {
                    return Err(self.err("expected `(` after `E`"));
                }
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e.exp_apply())
            }
            Some(b'b') => {
                self.pos += 1;
                let d = self.digits().ok_or_else(|| Error::Syntax {
                    pos: start,
                    msg: "base symbol needs an index, as in `b0`".into(),
                })?;
                let j: usize = d.parse().map_err(|_| self.err("bad symbol index"))?;
                Ok(EPoly::bsym(n, j))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                self.pos += 1;
                self.digits();
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("?");
                match self.vars.index(name) {
                    Some(i) => Ok(EPoly::var(n, i)),
                    None => Err(Error::UnknownSymbol {
                        name: name.to_string(),
                        pos: start,
                    }),
                }
            }
            Some(_) => Err(self.err(&format!("unexpected `{}`", self.peek_char()))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::rat;

    #[test]
    fn distributes_products() {
        let v = Vars::standard(2);
        let a = parse_epoly("x*(E(y) - 1)", &v).unwrap();
        let b = parse_epoly("x*E(y) - x", &v).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rationals_and_division() {
        let v = Vars::standard(1);
        assert_eq!(
            parse_epoly("3/4", &v).unwrap().as_rational(),
            Some(rat(3, 4))
        );
        assert_eq!(
            parse_epoly("x/2", &v).unwrap(),
            parse_epoly("1/2*x", &v).unwrap()
        );
        assert!(matches!(
            parse_epoly("1/x", &v),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(parse_epoly("1/0", &v), Err(Error::Syntax { .. })));
    }

    #[test]
    fn reports_positions() {
        let v = Vars::standard(1);
        assert_eq!(
            parse_epoly("x + z", &v),
            Err(Error::UnknownSymbol {
                name: "z".into(),
                pos: 4
            })
        );
        match parse_epoly("x + (x", &v) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("{other:?}"),
        }
        assert!(parse_epoly("", &v).is_err());
        assert!(parse_epoly("x +", &v).is_err());
        assert!(parse_epoly("E x", &v).is_err());
        assert!(parse_epoly("x y", &v).is_err());
    }

    #[test]
    fn list_splits_on_commas() {
        let v = Vars::standard(2);
        let l = parse_list("x*y, E(x)+1, E(y)+1", &v).unwrap();
        assert_eq!(l.len(), 3);
        assert!(parse_list("  ", &v).unwrap().is_empty());
        match parse_list("x, q", &v) {
            Err(Error::UnknownSymbol { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn powers_and_unary_minus() {
        let v = Vars::standard(2);
        let a = parse_epoly("-(x + y)^2", &v).unwrap();
        let b = parse_epoly("-x^2 - 2*x*y - y^2", &v).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            parse_epoly("E(x)^3", &v).unwrap(),
            parse_epoly("E(3*x)", &v).unwrap()
        );
    }
}
