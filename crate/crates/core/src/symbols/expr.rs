//! Arithmetic expressions in one variable `s`.
//!
//! Grammar (usual precedence, `^` right-associative and binding tighter
//! than unary minus, so `-s^2 = -(s^2)`):
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | 's' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
//! func  := sqrt | exp | atan | abs
//! ```

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Func {
    Sqrt,
    Exp,
    Atan,
    Abs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    Var,
    Neg(Box<Node>),
    Bin(Op, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

/// A parsed expression. Keeps its source text for display.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    root: Node,
    source: String,
}

impl Expr {
    /// Parses `text`. Error columns are 1-based within `text`.
    pub fn parse(text: &str) -> Result<Expr> {
        let mut p = Parser { src: text.as_bytes(), pos: 0 };
        let root = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(Expr { root, source: text.trim().to_string() })
    }

    pub fn eval(&self, s: f64) -> f64 {
        eval(&self.root, s)
    }

    /// True when the expression does not mention `s`.
    pub fn constant_value(&self) -> Option<f64> {
        fn has_var(n: &Node) -> bool {
            match n {
                Node::Num(_) => false,
                Node::Var => true,
                Node::Neg(a) | Node::Call(_, a) => has_var(a),
                Node::Bin(_, a, b) => has_var(a) || has_var(b),
            }
        }
        (!has_var(&self.root)).then(|| eval(&self.root, 0.0))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

fn eval(n: &Node, s: f64) -> f64 {
    match n {
        Node::Num(v) => *v,
        Node::Var => s,
        Node::Neg(a) => -eval(a, s),
        Node::Bin(op, a, b) => {
            let (x, y) = (eval(a, s), eval(b, s));
            match op {
                Op::Add => x + y,
                Op::Sub => x - y,
                Op::Mul => x * y,
                Op::Div => x / y,
                Op::Pow => {
                    if y.fract() == 0.0 && y.abs() <= 64.0 {
                        x.powi(y as i32)
                    } else {
                        x.powf(y)
                    }
                }
            }
        }
        Node::Call(func, a) => {
            let x = eval(a, s);
            match func {
                Func::Sqrt => x.sqrt(),
                Func::Exp => x.exp(),
                Func::Atan => x.atan(),
                Func::Abs => x.abs(),
            }
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse { line: 1, column: self.pos + 1, message: message.into() }
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(b'+') => Op::Add,
                Some(b'-') => Op::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(b'*') => Op::Mul,
                Some(b'/') => Op::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if self.eat(b'-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exponent = self.unary()?;
            return Ok(Node::Bin(Op::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        match self.peek() {
            None => Err(self.error("unexpected end of expression")),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let func = match word {
                    "s" => return Ok(Node::Var),
                    "pi" => return Ok(Node::Num(std::f64::consts::PI)),
                    "e" => return Ok(Node::Num(std::f64::consts::E)),
                    "sqrt" => Func::Sqrt,
                    "exp" => Func::Exp,
                    "atan" => Func::Atan,
                    "abs" => Func::Abs,
                    _ => {
                        self.pos = start;
                        return Err(self.error(format!("unknown identifier '{word}'")));
                    }
                };
                if !self.eat(b'(') {
                    return Err(self.error(format!("expected '(' after {word}")));
                }
                let arg = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(Node::Call(func, Box::new(arg)))
            }
            Some(c) => Err(self.error(format!("unexpected character '{}'", c as char))),
        }
    }

    fn number(&mut self) -> Result<Node> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
        };
        digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            digits(self);
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E'))
            && matches!(self.src.get(self.pos + 1), Some(c) if c.is_ascii_digit() || *c == b'-' || *c == b'+')
        {
            self.pos += 2;
            digits(self);
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<f64>().map(Node::Num).map_err(|_| {
            self.pos = start;
            self.error(format!("malformed number '{text}'"))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(text: &str, s: f64) -> f64 {
        Expr::parse(text).unwrap().eval(s)
    }

    #[test]
    fn precedence() {
        assert_eq!(ev("1 + 2 * 3", 0.0), 7.0);
        assert_eq!(ev("-s^2", 3.0), -9.0);
        assert_eq!(ev("2^3^2", 0.0), 512.0);
        assert_eq!(ev("(1 + s) / 2", 3.0), 2.0);
        assert_eq!(ev("8 / 4 / 2", 0.0), 1.0);
        assert_eq!(ev("2 - -1", 0.0), 3.0);
    }

    #[test]
    fn functions_and_constants() {
        assert!((ev("s / sqrt(s^2 + 1)", 1.0) - std::f64::consts::FRAC_1_SQRT_2).abs() < 2e-16);
        assert_eq!(ev("atan(s) / pi + 0.5", 0.0), 0.5);
        assert_eq!(ev("abs(s)", -2.5), 2.5);
        assert_eq!(ev("exp(0)", 0.0), 1.0);
        assert_eq!(ev("e", 0.0), std::f64::consts::E);
        assert_eq!(ev("1.5e-3 * s", 2.0), 3e-3);
    }

    #[test]
    fn constant_detection() {
        assert_eq!(Expr::parse("2 * pi").unwrap().constant_value(), Some(2.0 * std::f64::consts::PI));
        assert_eq!(Expr::parse("s + 1").unwrap().constant_value(), None);
    }

    #[test]
    fn error_columns() {
        let col = |text: &str| match Expr::parse(text) {
            Err(Error::Parse { column, .. }) => column,
            other => panic!("expected parse error, got {other:?}"),
        };
        assert_eq!(col("1 + x"), 5);
        assert_eq!(col("(1 + s"), 7);
        assert_eq!(col("1 +"), 4);
        assert_eq!(col("sqrt s"), 6);
        assert_eq!(col("1 $ 2"), 3);
    }
}
