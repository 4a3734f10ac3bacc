//! Arithmetic expressions over the side lengths `a`, `b`, `c`.
//!
//! Grammar:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | 'a' | 'b' | 'c' | 'sqrt' '(' expr ')' | '(' expr ')'
//! ```

use crate::error::ParseError;

const MAX_DEPTH: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    A,
    B,
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Sqrt(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn eval(&self, a: f64, b: f64, c: f64) -> f64 {
        match self {
            Expr::Num(x) => *x,
            Expr::Var(Var::A) => a,
            Expr::Var(Var::B) => b,
            Expr::Var(Var::C) => c,
            Expr::Neg(x) => -x.eval(a, b, c),
            Expr::Sqrt(x) => x.eval(a, b, c).sqrt(),
            Expr::Bin(op, l, r) => {
                let x = l.eval(a, b, c);
                match op {
                    BinOp::Add => x + r.eval(a, b, c),
                    BinOp::Sub => x - r.eval(a, b, c),
                    BinOp::Mul => x * r.eval(a, b, c),
                    BinOp::Div => x / r.eval(a, b, c),
                    BinOp::Pow => match r.as_integer() {
                        Some(k) => x.powi(k),
                        None => x.powf(r.eval(a, b, c)),
                    },
                }
            }
        }
    }

    pub fn has_vars(&self) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var(_) => true,
            Expr::Neg(x) | Expr::Sqrt(x) => x.has_vars(),
            Expr::Bin(_, l, r) => l.has_vars() || r.has_vars(),
        }
    }

    /// Integer literal value, if this node is one (possibly negated).
    pub fn as_integer(&self) -> Option<i32> {
        match self {
            Expr::Num(x) if x.fract() == 0.0 && x.abs() <= i32::MAX as f64 => Some(*x as i32),
            Expr::Neg(x) => x.as_integer().map(|k| -k),
            _ => None,
        }
    }

    /// True when every side length occurs only under an even integer power,
    /// i.e. the expression is structurally a rational function of `a²`, `b²`, `c²`.
    pub fn is_squared_rational(&self) -> bool {
        match self {
            Expr::Num(_) => true,
            Expr::Var(_) => false,
            Expr::Neg(x) => x.is_squared_rational(),
            Expr::Sqrt(x) => !x.has_vars(),
            Expr::Bin(BinOp::Pow, base, exp) => match exp.as_integer() {
                Some(k) => match **base {
                    Expr::Var(_) => k % 2 == 0,
                    _ => base.is_squared_rational(),
                },
                None => !base.has_vars() && !exp.has_vars(),
            },
            Expr::Bin(_, l, r) => l.is_squared_rational() && r.is_squared_rational(),
        }
    }

    /// The same expression with `(a, b, c)` replaced by `(b, c, a)`.
    pub fn rotated(&self) -> Expr {
        match self {
            Expr::Num(x) => Expr::Num(*x),
            Expr::Var(Var::A) => Expr::Var(Var::B),
            Expr::Var(Var::B) => Expr::Var(Var::C),
            Expr::Var(Var::C) => Expr::Var(Var::A),
            Expr::Neg(x) => Expr::Neg(Box::new(x.rotated())),
            Expr::Sqrt(x) => Expr::Sqrt(Box::new(x.rotated())),
            Expr::Bin(op, l, r) => Expr::Bin(*op, Box::new(l.rotated()), Box::new(r.rotated())),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    depth: usize,
}

pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    parse_expr_at(src, 1)
}

/// Parse with error positions reported on `line`.
pub fn parse_expr_at(src: &str, line: usize) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        line,
        depth: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(e)
}

impl Parser<'_> {
    fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.pos + 1, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error("expression nested too deeply"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let mut lhs = self.term()?;
        while let Some(ch @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            let op = if ch == b'+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(ch @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            let op = if ch == b'*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let out = if self.peek() == Some(b'-') {
            self.pos += 1;
            Expr::Neg(Box::new(self.unary()?))
        } else {
            self.power()?
        };
        self.depth -= 1;
        Ok(out)
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            None => Err(self.error("unexpected end of expression")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(ch) if ch.is_ascii_digit() || ch == b'.' => self.number(),
            Some(ch) if ch.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                match &self.src[start..self.pos] {
                    b"a" => Ok(Expr::Var(Var::A)),
                    b"b" => Ok(Expr::Var(Var::B)),
                    b"c" => Ok(Expr::Var(Var::C)),
                    b"sqrt" => {
                        self.expect(b'(')?;
                        let e = self.expr()?;
                        self.expect(b')')?;
                        Ok(Expr::Sqrt(Box::new(e)))
                    }
                    other => {
                        self.pos = start;
                        Err(self.error(format!("unknown identifier '{}'", String::from_utf8_lossy(other))))
                    }
                }
            }
            Some(ch) => Err(self.error(format!("unexpected '{}'", ch as char))),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let s = self.src;
        let digits = |p: &mut usize| {
            while *p < s.len() && s[*p].is_ascii_digit() {
                *p += 1;
            }
        };
        digits(&mut self.pos);
        if self.pos < s.len() && s[self.pos] == b'.' {
            self.pos += 1;
            digits(&mut self.pos);
        }
        if self.pos < s.len() && (s[self.pos] == b'e' || s[self.pos] == b'E') {
            let mark = self.pos;
            self.pos += 1;
            if self.pos < s.len() && (s[self.pos] == b'+' || s[self.pos] == b'-') {
                self.pos += 1;
            }
            let exp_start = self.pos;
            digits(&mut self.pos);
            if self.pos == exp_start {
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&s[start..self.pos]).unwrap_or("");
        text.parse::<f64>().map(Expr::Num).map_err(|_| {
            self.pos = start;
            self.error(format!("malformed number '{text}'"))
        })
    }

    fn expect(&mut self, ch: u8) -> Result<(), ParseError> {
        if self.peek() == Some(ch) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", ch as char)))
        }
    }
}
