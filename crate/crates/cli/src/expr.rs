//! Closed-form rate expressions for problem files.
//!
//! Grammar:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Variables are `x`, `y` and `t`; constants `pi` and `e`. Functions:
//! `exp`, `ln`, `sqrt`, `abs`, `pow(a, b)`, `min(a, b)`, `max(a, b)` and the
//! indicator `ind(v, a, b)`, which is 1 on `a <= v <= b` and 0 elsewhere.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
#[error("{message} at offset {offset} in `{source_text}`")]
pub struct ParseError {
    pub message: String,
    pub offset: usize,
    pub source_text: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
    T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Func {
    Exp,
    Ln,
    Sqrt,
    Abs,
    Pow,
    Min,
    Max,
    Ind,
}

impl Func {
    fn lookup(name: &str) -> Option<(Func, usize)> {
        Some(match name {
            "exp" => (Func::Exp, 1),
            "ln" | "log" => (Func::Ln, 1),
            "sqrt" => (Func::Sqrt, 1),
            "abs" => (Func::Abs, 1),
            "pow" => (Func::Pow, 2),
            "min" => (Func::Min, 2),
            "max" => (Func::Max, 2),
            "ind" => (Func::Ind, 3),
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Const(f64),
    Var(Var),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Call(Func, Vec<Node>),
}

impl Node {
    fn eval(&self, x: f64, y: f64, t: f64) -> f64 {
        match self {
            Node::Const(c) => *c,
            Node::Var(Var::X) => x,
            Node::Var(Var::Y) => y,
            Node::Var(Var::T) => t,
            Node::Neg(a) => -a.eval(x, y, t),
            Node::Add(a, b) => a.eval(x, y, t) + b.eval(x, y, t),
            Node::Sub(a, b) => a.eval(x, y, t) - b.eval(x, y, t),
            Node::Mul(a, b) => a.eval(x, y, t) * b.eval(x, y, t),
            Node::Div(a, b) => a.eval(x, y, t) / b.eval(x, y, t),
            Node::Pow(a, b) => a.eval(x, y, t).powf(b.eval(x, y, t)),
            Node::Call(f, args) => {
                let v = |i: usize| args[i].eval(x, y, t);
                match f {
                    Func::Exp => v(0).exp(),
                    Func::Ln => v(0).ln(),
                    Func::Sqrt => v(0).sqrt(),
                    Func::Abs => v(0).abs(),
                    Func::Pow => v(0).powf(v(1)),
                    Func::Min => v(0).min(v(1)),
                    Func::Max => v(0).max(v(1)),
                    Func::Ind => {
                        let s = v(0);
                        if v(1) <= s && s <= v(2) {
                            1.0
                        } else {
                            0.0
                        }
                    }
                }
            }
        }
    }

    fn uses(&self, var: Var) -> bool {
        match self {
            Node::Const(_) => false,
            Node::Var(v) => *v == var,
            Node::Neg(a) => a.uses(var),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) | Node::Pow(a, b) => {
                a.uses(var) || b.uses(var)
            }
            Node::Call(_, args) => args.iter().any(|a| a.uses(var)),
        }
    }

    /// Collapse variable-free subtrees.
    fn fold(self) -> Node {
        let constant = |n: &Node| matches!(n, Node::Const(_));
        let node = match self {
            Node::Neg(a) => Node::Neg(Box::new(a.fold())),
            Node::Add(a, b) => Node::Add(Box::new(a.fold()), Box::new(b.fold())),
            Node::Sub(a, b) => Node::Sub(Box::new(a.fold()), Box::new(b.fold())),
            Node::Mul(a, b) => Node::Mul(Box::new(a.fold()), Box::new(b.fold())),
            Node::Div(a, b) => Node::Div(Box::new(a.fold()), Box::new(b.fold())),
            Node::Pow(a, b) => Node::Pow(Box::new(a.fold()), Box::new(b.fold())),
            Node::Call(f, args) => Node::Call(f, args.into_iter().map(Node::fold).collect()),
            leaf => return leaf,
        };
        let all_const = match &node {
            Node::Neg(a) => constant(a),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) | Node::Pow(a, b) => {
                constant(a) && constant(b)
            }
            Node::Call(_, args) => args.iter().all(constant),
            _ => false,
        };
        if all_const {
            Node::Const(node.eval(0.0, 0.0, 0.0))
        } else {
            node
        }
    }
}

/// A parsed expression in `x`, `y` and `t`.
#[derive(Clone, PartialEq)]
pub struct Expr {
    root: Node,
    text: String,
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({:?})", self.text)
    }
}

impl Expr {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut p = Parser {
            src: text,
            bytes: text.as_bytes(),
            pos: 0,
        };
        let root = p.expr()?;
        p.skip_ws();
        if p.pos < p.bytes.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(Self {
            root: root.fold(),
            text: text.to_string(),
        })
    }

    pub fn eval(&self, x: f64, y: f64, t: f64) -> f64 {
        self.root.eval(x, y, t)
    }

    pub fn uses(&self, var: Var) -> bool {
        self.root.uses(var)
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self.root {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn text(&self) -> &str {
        &self.text
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ParseError {
        ParseError {
            message: message.to_string(),
            offset: self.pos,
            source_text: self.src.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        if self.eat(b'-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            return Ok(Node::Pow(Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.name(),
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Node, ParseError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            while p.pos < p.bytes.len() && p.bytes[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
        };
        digits(self);
        if self.bytes.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            digits(self);
        }
        if matches!(self.bytes.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.bytes.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
                digits(self);
            } else {
                self.pos = save;
            }
        }
        self.src[start..self.pos]
            .parse()
            .map(Node::Const)
            .map_err(|_| ParseError {
                message: "malformed number".into(),
                offset: start,
                source_text: self.src.to_string(),
            })
    }

    fn name(&mut self) -> Result<Node, ParseError> {
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = &self.src[start..self.pos];
        if self.peek() == Some(b'(') {
            let (func, arity) = Func::lookup(name).ok_or_else(|| ParseError {
                message: format!("unknown function `{name}`"),
                offset: start,
                source_text: self.src.to_string(),
            })?;
            self.pos += 1;
            let mut args = vec![self.expr()?];
            while self.eat(b',') {
                args.push(self.expr()?);
            }
            if !self.eat(b')') {
                return Err(self.error("expected `)` or `,`"));
            }
            if args.len() != arity {
                return Err(ParseError {
                    message: format!("`{name}` takes {arity} argument(s), got {}", args.len()),
                    offset: start,
                    source_text: self.src.to_string(),
                });
            }
            return Ok(Node::Call(func, args));
        }
        match name {
            "x" => Ok(Node::Var(Var::X)),
            "y" => Ok(Node::Var(Var::Y)),
            "t" => Ok(Node::Var(Var::T)),
            "pi" => Ok(Node::Const(std::f64::consts::PI)),
            "e" => Ok(Node::Const(std::f64::consts::E)),
            _ => Err(ParseError {
                message: format!("unknown name `{name}`"),
                offset: start,
                source_text: self.src.to_string(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, x: f64) -> f64 {
        Expr::parse(s).unwrap().eval(x, 0.0, 0.0)
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(ev("1 + 2 * 3", 0.0), 7.0);
        assert_eq!(ev("(1 + 2) * 3", 0.0), 9.0);
        assert_eq!(ev("2 ^ 3 ^ 2", 0.0), 512.0);
        assert_eq!(ev("-2 ^ 2", 0.0), -4.0);
        assert_eq!(ev("8 / 4 / 2", 0.0), 1.0);
        assert_eq!(ev("10 - 4 - 3", 0.0), 3.0);
        assert_eq!(ev("2 * -x", 3.0), -6.0);
    }

    #[test]
    fn numbers_and_constants() {
        assert_eq!(ev("1e-3", 0.0), 1e-3);
        assert_eq!(ev("2.5E2", 0.0), 250.0);
        assert_eq!(ev(".5", 0.0), 0.5);
        assert_eq!(ev("pi", 0.0), std::f64::consts::PI);
        // `e` alone is the constant, `2e` is not an exponent.
        assert!(Expr::parse("2e").is_err());
        assert_eq!(ev("2*e", 0.0), 2.0 * std::f64::consts::E);
    }

    #[test]
    fn functions() {
        assert!((ev("exp(-x)", 1.0) - (-1.0f64).exp()).abs() < 1e-16);
        assert_eq!(ev("pow(x, 2)", 3.0), 9.0);
        assert_eq!(ev("min(x, 1) + max(x, 1)", 3.0), 4.0);
        assert_eq!(ev("ind(x, 5, 15)", 5.0), 1.0);
        assert_eq!(ev("ind(x, 5, 15)", 15.0), 1.0);
        assert_eq!(ev("ind(x, 5, 15)", 15.5), 0.0);
        assert_eq!(ev("sqrt(abs(x))", -4.0), 2.0);
    }

    #[test]
    fn variables() {
        let e = Expr::parse("(2/(2+t))^2 * exp(-(2/(2+t))*x) + y").unwrap();
        let c: f64 = 2.0 / 2.5;
        assert!((e.eval(1.0, 0.5, 0.5) - (c * c * (-c).exp() + 0.5)).abs() < 1e-15);
        assert!(e.uses(Var::T) && e.uses(Var::X) && e.uses(Var::Y));
        assert!(!Expr::parse("2/y").unwrap().uses(Var::X));
    }

    #[test]
    fn constant_folding() {
        assert_eq!(Expr::parse("2 * (3 + 1)").unwrap().as_constant(), Some(8.0));
        assert_eq!(Expr::parse("x + 1").unwrap().as_constant(), None);
    }

    #[test]
    fn errors() {
        for bad in ["", "1 +", "(1", "foo", "sin(x)", "pow(x)", "1 2", "x $ 2", "ind(x, 1)"] {
            assert!(Expr::parse(bad).is_err(), "{bad}");
        }
        let err = Expr::parse("x + bar").unwrap_err();
        assert_eq!(err.offset, 4);
    }

    #[test]
    fn shareable_across_threads() {
        fn check<T: Send + Sync>() {}
        check::<Expr>();
    }
}
