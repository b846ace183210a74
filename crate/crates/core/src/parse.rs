//! Parser for phase-space polynomial expressions.
//!
//! Grammar: `+`, `-` (binary and repeatable unary), `*`, `^` with nonnegative
//! integer exponents, parentheses, the variables `q` and `p`, and rational
//! literals `a/b`.  Adjacent factors multiply (`2 q p^2`), so `/` never acts
//! as an operator; it is only valid between the digits of a literal.  Input
//! must be ASCII and error positions are byte offsets.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::phasepoly::{crat_real, PhasePoly, Rat};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Q,
    P,
    Lit(Rat),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    bytes: &'a [u8],
    pos: usize,
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

impl<'a> Lexer<'a> {
    fn new(input: &'a str) -> Self {
        Lexer { bytes: input.as_bytes(), pos: 0 }
    }

    fn digits(&mut self) -> (usize, BigInt) {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        (start, text.parse().unwrap())
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize)>> {
        let mut out = Vec::new();
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            let at = self.pos;
            match b {
                b' ' | b'\t' | b'\r' | b'\n' => {
                    self.pos += 1;
                }
                b'q' => {
                    out.push((Tok::Q, at));
                    self.pos += 1;
                }
                b'p' => {
                    out.push((Tok::P, at));
                    self.pos += 1;
                }
                b'+' => {
                    out.push((Tok::Plus, at));
                    self.pos += 1;
                }
                b'-' => {
                    out.push((Tok::Minus, at));
                    self.pos += 1;
                }
                b'*' => {
                    out.push((Tok::Star, at));
                    self.pos += 1;
                }
                b'^' => {
                    out.push((Tok::Caret, at));
                    self.pos += 1;
                }
                b'(' => {
                    out.push((Tok::LParen, at));
                    self.pos += 1;
                }
                b')' => {
                    out.push((Tok::RParen, at));
                    self.pos += 1;
                }
                b'0'..=b'9' => {
                    let (_, numer) = self.digits();
                    if self.pos < self.bytes.len() && self.bytes[self.pos] == b'/' {
                        let slash = self.pos;
                        self.pos += 1;
                        if self.pos >= self.bytes.len() || !self.bytes[self.pos].is_ascii_digit() {
                            return Err(err(slash, "expected denominator digits after '/'"));
                        }
                        let (dstart, denom) = self.digits();
                        if denom.is_zero() {
                            return Err(err(dstart, "zero denominator in rational literal"));
                        }
                        out.push((Tok::Lit(Rat::new(numer, denom)), at));
                    } else {
                        out.push((Tok::Lit(Rat::from_integer(numer)), at));
                    }
                }
                b'/' => {
                    return Err(err(
                        at,
                        "'/' is not an operator; it is only valid inside a rational literal",
                    ));
                }
                _ if b.is_ascii() => {
                    return Err(err(at, format!("unexpected character '{}'", b as char)));
                }
                _ => {
                    return Err(err(at, "non-ASCII byte in input"));
                }
            }
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    cur: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.cur).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.cur).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.cur).map(|(t, _)| t.clone());
        if t.is_some() {
            self.cur += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<PhasePoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    /// A product: explicit `*` (which may introduce a fresh unary sign) or
    /// plain juxtaposition of factors.
    fn term(&mut self) -> Result<PhasePoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = acc.mul(&self.unary()?)?;
                }
                Some(Tok::Q) | Some(Tok::P) | Some(Tok::Lit(_)) | Some(Tok::LParen) => {
                    acc = acc.mul(&self.postfix()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<PhasePoly> {
        let mut negate = false;
        while matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            negate = !negate;
        }
        let base = self.postfix()?;
        Ok(if negate { -&base } else { base })
    }

    fn postfix(&mut self) -> Result<PhasePoly> {
        let mut acc = self.primary()?;
        while matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let at = self.pos();
            match self.bump() {
                Some(Tok::Lit(r)) if r.is_integer() => {
                    let exp: u32 = r
                        .numer()
                        .try_into()
                        .map_err(|_| err(at, "exponent too large"))?;
                    acc = acc.pow(exp)?;
                }
                _ => return Err(err(at, "expected nonnegative integer exponent after '^'")),
            }
        }
        Ok(acc)
    }

    fn primary(&mut self) -> Result<PhasePoly> {
        let at = self.pos();
        match self.bump() {
            Some(Tok::Q) => Ok(PhasePoly::var_q()),
            Some(Tok::P) => Ok(PhasePoly::var_p()),
            Some(Tok::Lit(r)) => Ok(PhasePoly::constant(crat_real(r))),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let close = self.pos();
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(err(close, "expected ')'")),
                }
            }
            Some(tok) => Err(err(at, format!("unexpected token {tok:?}"))),
            None => Err(err(at, "unexpected end of input")),
        }
    }
}

pub fn parse_expr(input: &str) -> Result<PhasePoly> {
    let toks = Lexer::new(input).tokens()?;
    if toks.is_empty() {
        return Err(err(0, "empty expression"));
    }
    let end = input.len();
    let mut parser = Parser { toks, cur: 0, end };
    let poly = parser.expr()?;
    if parser.cur != parser.toks.len() {
        return Err(err(parser.pos(), "unexpected trailing input"));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phasepoly::rat;

    fn q() -> PhasePoly {
        PhasePoly::var_q()
    }

    fn p() -> PhasePoly {
        PhasePoly::var_p()
    }

    #[test]
    fn basic_forms() {
        assert_eq!(parse_expr("q p").unwrap(), q().mul(&p()).unwrap());
        assert_eq!(parse_expr("q*p").unwrap(), q().mul(&p()).unwrap());
        assert_eq!(parse_expr("2q").unwrap(), q().scale_rat(&rat(2, 1)));
        assert_eq!(parse_expr("3/4 p").unwrap(), p().scale_rat(&rat(3, 4)));
        assert_eq!(parse_expr("(1/2) q").unwrap(), q().scale_rat(&rat(1, 2)));
        assert_eq!(parse_expr("--q").unwrap(), q());
        assert_eq!(parse_expr("-q^2").unwrap(), -&q().pow(2).unwrap());
        assert_eq!(parse_expr("q^2^3").unwrap(), q().pow(6).unwrap());
        assert_eq!(parse_expr("q - - p").unwrap(), &q() + &p());
        assert_eq!(parse_expr("2 2").unwrap(), PhasePoly::int(4));
        assert_eq!(
            parse_expr("(q + p)^2").unwrap(),
            (&q() + &p()).pow(2).unwrap()
        );
    }

    #[test]
    fn division_is_not_an_operator() {
        let e = parse_expr("q/2").unwrap_err();
        match e {
            Error::Parse { pos, .. } => assert_eq!(pos, 1),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_expr("1 / 2").is_err());
        assert!(parse_expr("q^1/2").is_err());
    }

    #[test]
    fn literal_validation() {
        assert!(matches!(parse_expr("1/0").unwrap_err(), Error::Parse { .. }));
        assert!(matches!(parse_expr("1/").unwrap_err(), Error::Parse { .. }));
        assert_eq!(parse_expr("10/4").unwrap(), PhasePoly::constant_rat(rat(5, 2)));
    }

    #[test]
    fn degree_cap_propagates() {
        let e = parse_expr("q^65").unwrap_err();
        assert_eq!(e.exit_code(), 3);
        assert_eq!(parse_expr("q^64").unwrap(), q().pow(64).unwrap());
        // constants are not subject to the (q, p) degree cap
        assert!(parse_expr("2^100").is_ok());
    }

    #[test]
    fn error_positions_are_byte_offsets() {
        match parse_expr("q + r").unwrap_err() {
            Error::Parse { pos, .. } => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        match parse_expr("q +").unwrap_err() {
            Error::Parse { pos, .. } => assert_eq!(pos, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_expr("").is_err());
        assert!(parse_expr("(q").is_err());
        assert!(parse_expr("q)").is_err());
        assert!(parse_expr("q\u{3b1}").is_err());
    }

    #[test]
    fn render_reparse_round_trip() {
        for src in [
            "q^2 - 2 q p + 1/2",
            "p - q^2",
            "(1/3) q^4 p + 7 p^3 - q",
            "1/2",
            "-q",
            "0",
        ] {
            let poly = parse_expr(src).unwrap();
            let rendered = poly.render();
            let back = parse_expr(&rendered);
            match back {
                Ok(b) => assert_eq!(b, poly, "round trip failed for {src} -> {rendered}"),
                Err(_) => assert_eq!(rendered, "0"),
            }
        }
    }
}
