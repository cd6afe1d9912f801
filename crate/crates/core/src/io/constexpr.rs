//! Parser for the constant expressions used in category files.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/' | '×' | '·' | '÷') unary)*
//! unary   := ('-' | '+') unary | primary
//! primary := number | '(' expr ')' | 'sqrt' '(' expr ')' | 'exp' '(' phase ')'
//! phase   := ('2' '*'? ('pi' | 'π') '*'? 'i' | '2πi') (('*' | '·')? expr)?
//! ```
//!
//! Integer and fraction literals are exact; decimal literals are floats.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Complex, Zero};

use crate::error::Error;
use crate::exact::{Polar, Value};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Float(f64),
    Ident(String),
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, Error> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let col = i + 1;
        if c.is_ascii_digit() || (c == '.' && i + 1 < chars.len() && chars[i + 1].is_ascii_digit()) {
            let start = i;
            let mut float = false;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                float = true;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    float = true;
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let tok = if float {
                Tok::Float(text.parse().map_err(|_| Error::Parse { col, msg: format!("bad number '{}'", text) })?)
            } else {
                Tok::Int(text.parse().map_err(|_| Error::Parse { col, msg: format!("bad integer '{}'", text) })?)
            };
            out.push((tok, col));
            continue;
        }
        if c == 'π' {
            out.push((Tok::Ident("pi".into()), col));
            i += 1;
            continue;
        }
        if c.is_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_alphanumeric() && chars[i] != 'π' {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        if "+-*/()×·÷".contains(c) {
            let c = match c {
                '×' | '·' => '*',
                '÷' => '/',
                other => other,
            };
            out.push((Tok::Sym(c), col));
            i += 1;
            continue;
        }
        return Err(Error::Parse { col, msg: format!("unexpected character '{}'", c) });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, Error> {
        Err(Error::Parse { col: self.col(), msg: msg.into() })
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), Error> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c))
        }
    }

    fn eat_ident(&mut self, name: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == name) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Value, Error> {
        let mut v = self.term()?;
        loop {
            if self.eat_sym('+') {
                v = v.add(&self.term()?);
            } else if self.eat_sym('-') {
                v = v.sub(&self.term()?);
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<Value, Error> {
        let mut v = self.unary()?;
        loop {
            if self.eat_sym('*') {
                v = v.mul(&self.unary()?);
            } else if self.eat_sym('/') {
                let col = self.col();
                let d = self.unary()?;
                v = v.div(&d).ok_or(Error::Parse { col, msg: "division by zero".into() })?;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<Value, Error> {
        if self.eat_sym('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat_sym('+') {
            return self.unary();
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Value, Error> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Value::Exact(Polar::from_rational(BigRational::from_integer(n))))
            }
            Some(Tok::Float(x)) => {
                self.pos += 1;
                Ok(Value::Float(Complex::new(x, 0.0)))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect_sym(')')?;
                Ok(v)
            }
            Some(Tok::Ident(name)) if name == "sqrt" => {
                self.pos += 1;
                self.expect_sym('(')?;
                let v = self.expr()?;
                self.expect_sym(')')?;
                Ok(match &v {
                    Value::Exact(p) => match p.as_rational() {
                        Some(r) => Value::Exact(Polar::sqrt_of(r)),
                        None => Value::Float(v.c().sqrt()),
                    },
                    Value::Float(z) => Value::Float(z.sqrt()),
                })
            }
            Some(Tok::Ident(name)) if name == "exp" => {
                self.pos += 1;
                self.expect_sym('(')?;
                let v = self.phase()?;
                self.expect_sym(')')?;
                Ok(v)
            }
            Some(t) => self.err(format!("unexpected token {:?}", t)),
            None => self.err("unexpected end of expression"),
        }
    }

    /// Inside `exp(...)`: the literal prefix `2*pi*i` then a real multiplier.
    fn phase(&mut self) -> Result<Value, Error> {
        match self.peek() {
            Some(Tok::Int(n)) if *n == BigInt::from(2) => self.pos += 1,
            _ => return self.err("exp argument must start with 2*pi*i"),
        }
        self.eat_sym('*');
        if !self.eat_ident("pi") {
            return self.err("expected 'pi' in exp argument");
        }
        self.eat_sym('*');
        if !self.eat_ident("i") {
            return self.err("expected 'i' in exp argument");
        }
        self.phase_tail()
    }

    fn phase_tail(&mut self) -> Result<Value, Error> {
        if self.peek() == Some(&Tok::Sym(')')) {
            return Ok(Value::one());
        }
        self.eat_sym('*');
        let col = self.col();
        let t = self.expr()?;
        match &t {
            Value::Exact(p) => match p.as_rational() {
                Some(r) => Ok(Value::Exact(Polar::root_of_unity(r))),
                None => Err(Error::Parse { col, msg: "phase multiplier must be real".into() }),
            },
            Value::Float(z) => {
                if z.im != 0.0 {
                    return Err(Error::Parse { col, msg: "phase multiplier must be real".into() });
                }
                let th = 2.0 * std::f64::consts::PI * z.re;
                Ok(Value::Float(Complex::new(th.cos(), th.sin())))
            }
        }
    }
}

/// Parse and evaluate a constant expression.
pub fn parse_const(src: &str) -> Result<Value, Error> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end_col: src.chars().count() + 1 };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(v)
}

/// Parse an exact rational such as `"1/16"` or `"-3"`.
pub fn parse_rational(src: &str) -> Result<BigRational, Error> {
    match parse_const(src)? {
        Value::Exact(p) => p.as_rational().ok_or(Error::Parse { col: 1, msg: format!("'{}' is not rational", src) }),
        Value::Float(_) => Err(Error::Parse { col: 1, msg: format!("'{}' is not an exact rational", src) }),
    }
}

/// Parse a real number: exact rational when possible, float otherwise.
pub fn parse_real(src: &str) -> Result<crate::fusion::Real, Error> {
    use num::ToPrimitive;
    match parse_const(src)? {
        Value::Exact(p) => match p.as_rational() {
            Some(r) => {
                let n = r.numer().to_i64();
                let d = r.denom().to_i64();
                match (n, d) {
                    (Some(n), Some(d)) => Ok(crate::fusion::Real::Exact(num::rational::Rational64::new(n, d))),
                    _ => Ok(crate::fusion::Real::Approx(r.to_f64().unwrap_or(f64::NAN))),
                }
            }
            None => {
                let z = p.to_c64();
                if z.im.abs() > 0.0 {
                    return Err(Error::Parse { col: 1, msg: format!("'{}' is not real", src) });
                }
                Ok(crate::fusion::Real::Approx(z.re))
            }
        },
        Value::Float(z) => {
            if !z.im.is_zero() {
                return Err(Error::Parse { col: 1, msg: format!("'{}' is not real", src) });
            }
            Ok(crate::fusion::Real::Approx(z.re))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(v: &Value, re: f64, im: f64) -> bool {
        (v.c() - Complex::new(re, im)).norm() < 1e-14
    }

    #[test]
    fn imaginary_square_root() {
        let v = parse_const("sqrt(-2)/2").unwrap();
        assert!(v.is_exact());
        assert!(close(&v, 0.0, std::f64::consts::FRAC_1_SQRT_2));
    }

    #[test]
    fn phases_and_precedence() {
        let v = parse_const("exp(2*pi*i*(-1/16))").unwrap();
        let th = -std::f64::consts::PI / 8.0;
        assert!(close(&v, th.cos(), th.sin()));
        let w = parse_const("exp(2πi·3/16)").unwrap();
        let th = 3.0 * std::f64::consts::PI / 8.0;
        assert!(close(&w, th.cos(), th.sin()));
        assert!(close(&parse_const("1 + 2*3 - -4/2").unwrap(), 9.0, 0.0));
        assert!(close(&parse_const("(1+sqrt(5))/2").unwrap(), 1.618033988749895, 0.0));
    }

    #[test]
    fn errors_carry_columns() {
        match parse_const("1 + (2 * ") {
            Err(Error::Parse { col, .. }) => assert_eq!(col, 10),
            other => panic!("{:?}", other),
        }
        assert!(parse_const("exp(pi)").is_err());
        assert!(parse_const("1/0").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["1/2", "sqrt(1/2)", "-sqrt(3)*exp(2*pi*i*(1/5))", "exp(2*pi*i*(15/16))", "0.25", "0.5 + -0.125*exp(2*pi*i*(1/4))"] {
            let v = parse_const(s).unwrap();
            let back = parse_const(&v.to_string()).unwrap();
            assert_eq!(v, back, "{}", s);
        }
    }
}
