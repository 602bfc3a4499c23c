//! Element expressions.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := atom ['^' uint]
//! atom    := int | 'X[' uint ',' uint ']' | 'F[' uint ',' uint ']'
//!          | mapcall | '(' expr ')' | '-' atom
//! mapcall := ('res' | 'ind' | 'jnd') '(' uint ',' expr ')'
//! ```
//!
//! Integer subexpressions take the level of whatever they are combined with.
//! A whole expression that is an integer lives at level 0, as does an integer
//! argument of `ind` or `jnd`.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::ring::{Element, GroupParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    Res,
    Ind,
    Jnd,
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapKind::Res => "res",
            MapKind::Ind => "ind",
            MapKind::Jnd => "jnd",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Int(BigInt),
    X(usize, usize),
    F(usize, usize),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Pow(Box<Node>, u32),
    Map(MapKind, usize, Box<Node>),
}

/// A parsed node with its character span in the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub kind: ExprKind,
    pub start: usize,
    pub end: usize,
}

/// A parsed expression together with its source text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprAst {
    src: Vec<char>,
    root: Node,
}

struct Parser<'a> {
    chars: &'a [char],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.err(format!("expected '{c}', found '{found}'")),
                None => self.err(format!("expected '{c}', found end of input")),
            }
        }
    }

    fn digits(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn uint(&mut self) -> Result<usize> {
        let at = self.pos;
        match self.digits() {
            Some(d) => d.parse().or_else(|_| {
                self.pos = at;
                self.err("integer too large")
            }),
            None => self.err("expected an unsigned integer"),
        }
    }

    fn word(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn node(&self, kind: ExprKind, start: usize) -> Node {
        Node {
            kind,
            start,
            end: self.pos,
        }
    }

    fn expr(&mut self) -> Result<Node> {
        self.skip_ws();
        let start = self.pos;
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                let rhs = self.term()?;
                lhs = self.node(ExprKind::Add(Box::new(lhs), Box::new(rhs)), start);
            } else if self.eat('-') {
                let rhs = self.term()?;
                lhs = self.node(ExprKind::Sub(Box::new(lhs), Box::new(rhs)), start);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        self.skip_ws();
        let start = self.pos;
        let mut lhs = self.factor()?;
        while self.eat('*') {
            let rhs = self.factor()?;
            lhs = self.node(ExprKind::Mul(Box::new(lhs), Box::new(rhs)), start);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Node> {
        self.skip_ws();
        let start = self.pos;
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let at = self.pos;
            let e = self.uint()?;
            let e = u32::try_from(e).or_else(|_| {
                self.pos = at;
                self.err("exponent too large")
            })?;
            return Ok(self.node(ExprKind::Pow(Box::new(base), e), start));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        let start = match self.peek() {
            Some(_) => self.pos,
            None => return self.err("unexpected end of input"),
        };
        if self.eat('-') {
            let inner = self.atom()?;
            return Ok(self.node(ExprKind::Neg(Box::new(inner)), start));
        }
        if self.eat('(') {
            let inner = self.expr()?;
            self.expect(')')?;
            return Ok(Node {
                start,
                end: self.pos,
                ..inner
            });
        }
        if let Some(d) = self.digits() {
            let n: BigInt = d.parse().expect("ascii digits");
            return Ok(self.node(ExprKind::Int(n), start));
        }
        let w = self.word();
        match w.as_str() {
            "X" | "F" => {
                self.expect('[')?;
                let k = self.uint()?;
                self.expect(',')?;
                let i = self.uint()?;
                self.expect(']')?;
                let kind = if w == "X" { ExprKind::X(k, i) } else { ExprKind::F(k, i) };
                Ok(self.node(kind, start))
            }
            "res" | "ind" | "jnd" => {
                let map = match w.as_str() {
                    "res" => MapKind::Res,
                    "ind" => MapKind::Ind,
                    _ => MapKind::Jnd,
                };
                self.expect('(')?;
                let target = self.uint()?;
                self.expect(',')?;
                let arg = self.expr()?;
                self.expect(')')?;
                Ok(self.node(ExprKind::Map(map, target, Box::new(arg)), start))
            }
            "" => {
                let c = self.peek().expect("checked above");
                self.err(format!("unexpected '{c}'"))
            }
            _ => {
                self.pos = start;
                self.err(format!("unknown name '{w}'"))
            }
        }
    }
}

pub fn parse_expr(src: &str) -> Result<ExprAst> {
    let chars: Vec<char> = src.chars().collect();
    let mut p = Parser {
        chars: &chars,
        pos: 0,
    };
    let root = p.expr()?;
    if let Some(c) = p.peek() {
        return p.err(format!("unexpected '{c}' after expression"));
    }
    Ok(ExprAst { src: chars, root })
}

/// An integer not yet pinned to a level, or an element.
enum Value {
    Int(BigInt),
    Elem(Element),
}

impl ExprAst {
    pub fn root(&self) -> &Node {
        &self.root
    }

    fn text(&self, n: &Node) -> String {
        self.src[n.start..n.end].iter().collect::<String>().trim().to_string()
    }

    fn at(&self, n: &Node, e: Error) -> Error {
        match e {
            Error::Level(msg) => Error::Level(format!("in `{}`: {msg}", self.text(n))),
            Error::BadParams(msg) => Error::Level(format!("in `{}`: {msg}", self.text(n))),
            Error::Range(msg) => Error::Range(format!("in `{}`: {msg}", self.text(n))),
            Error::RankExceeded { level, r } => Error::Level(format!(
                "in `{}`: level {level} exceeds the rank {r}",
                self.text(n)
            )),
            other => other,
        }
    }

    /// Evaluates to an element; a bare integer result lives at level 0.
    pub fn eval(&self, params: GroupParams) -> Result<Element> {
        match self.value(&self.root, params)? {
            Value::Elem(e) => Ok(e),
            Value::Int(n) => Element::constant(params, 0, n),
        }
    }

    fn binary(
        &self,
        n: &Node,
        params: GroupParams,
        a: &Node,
        b: &Node,
        int_op: fn(BigInt, BigInt) -> BigInt,
        elem_op: fn(&Element, &Element) -> Result<Element>,
    ) -> Result<Value> {
        let (x, y) = (self.value(a, params)?, self.value(b, params)?);
        let lift = |v: Value, level: usize| -> Result<Element> {
            match v {
                Value::Elem(e) => Ok(e),
                Value::Int(k) => Element::constant(params, level, k),
            }
        };
        match (x, y) {
            (Value::Int(x), Value::Int(y)) => Ok(Value::Int(int_op(x, y))),
            (Value::Elem(x), y) => {
                let y = lift(y, x.level())?;
                elem_op(&x, &y).map(Value::Elem).map_err(|e| self.at(n, e))
            }
            (x, Value::Elem(y)) => {
                let x = lift(x, y.level())?;
                elem_op(&x, &y).map(Value::Elem).map_err(|e| self.at(n, e))
            }
        }
    }

    fn value(&self, n: &Node, params: GroupParams) -> Result<Value> {
        match &n.kind {
            ExprKind::Int(k) => Ok(Value::Int(k.clone())),
            ExprKind::X(k, i) => Element::x(params, *k, *i)
                .map(Value::Elem)
                .map_err(|e| self.at(n, e)),
            ExprKind::F(k, i) => Element::f(params, *k, *i)
                .map(Value::Elem)
                .map_err(|e| self.at(n, e)),
            ExprKind::Neg(a) => Ok(match self.value(a, params)? {
                Value::Int(k) => Value::Int(-k),
                Value::Elem(e) => Value::Elem(e.neg()),
            }),
            ExprKind::Add(a, b) => self.binary(n, params, a, b, |x, y| x + y, Element::add),
            ExprKind::Sub(a, b) => self.binary(n, params, a, b, |x, y| x - y, Element::sub),
            ExprKind::Mul(a, b) => self.binary(n, params, a, b, |x, y| x * y, Element::mul),
            ExprKind::Pow(a, e) => Ok(match self.value(a, params)? {
                Value::Int(k) => Value::Int(num_traits::pow(k, *e as usize)),
                Value::Elem(x) => Value::Elem(x.pow(*e)),
            }),
            ExprKind::Map(map, target, a) => {
                params.check_level(*target).map_err(|e| self.at(n, e))?;
                let arg = match self.value(a, params)? {
                    Value::Elem(e) => e,
                    Value::Int(k) => match map {
                        MapKind::Res => return Element::constant(params, *target, k).map(Value::Elem),
                        MapKind::Ind | MapKind::Jnd => Element::constant(params, 0, k)?,
                    },
                };
                let out = match map {
                    MapKind::Res => arg.res(*target),
                    MapKind::Ind => arg.ind(*target),
                    MapKind::Jnd => arg.jnd(*target),
                };
                out.map(Value::Elem).map_err(|e| self.at(n, e))
            }
        }
    }
}

/// Parses and evaluates in one step.
pub fn evaluate(src: &str, params: GroupParams) -> Result<Element> {
    parse_expr(src)?.eval(params)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(p: u64, r: usize) -> GroupParams {
        GroupParams::new(p, r).unwrap()
    }

    fn ev(src: &str, p: u64) -> String {
        evaluate(src, g(p, 3)).unwrap().to_string()
    }

    #[test]
    fn examples() {
        let want = Element::from_i64s(g(2, 3), 1, &[3, 3]).unwrap();
        assert_eq!(evaluate("jnd(1, 3)", g(2, 3)).unwrap(), want);
        assert!(evaluate("X[1,0]*X[1,0] - 2*X[1,0]", g(2, 3)).unwrap().is_zero());
        assert_eq!(ev("res(0, ind(1, 7))", 2), "14");
        assert_eq!(ev("jnd(2, X[0,0])", 2), "1");
    }

    #[test]
    fn polymorphic_integers() {
        assert_eq!(evaluate("5", g(2, 3)).unwrap().level(), 0);
        let e = evaluate("X[2,1] + 3", g(2, 3)).unwrap();
        assert_eq!(e, Element::from_i64s(g(2, 3), 2, &[0, 1, 3]).unwrap());
        assert_eq!(ev("3 + X[2,1]", 2), e.to_string());
        assert_eq!(ev("(2 + 3)^2 * X[1,0]", 2), "25*X[1,0]");
        assert_eq!(evaluate("res(1, 4)", g(2, 3)).unwrap().level(), 1);
        assert_eq!(ev("ind(1, 1)", 3), "X[1,0]");
        assert_eq!(ev("-X[1,0] + -2", 2), "-X[1,0] - 2");
        assert_eq!(ev("F[2,0]", 3), "X[2,0] - 9");
        assert_eq!(ev("(X[1,0] - 2)^2", 2), "-2*X[1,0] + 4");
        assert_eq!(ev(" 2 -  3 - 4 ", 2), "-5");
    }

    #[test]
    fn level_errors() {
        let err = evaluate("X[1,0] + X[2,0]", g(2, 3)).unwrap_err();
        match err {
            Error::Level(msg) => assert!(msg.contains("X[1,0] + X[2,0]"), "{msg}"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(evaluate("res(2, X[1,0])", g(2, 3)), Err(Error::Level(_))));
        assert!(matches!(evaluate("ind(0, X[1,0])", g(2, 3)), Err(Error::Level(_))));
        assert!(matches!(evaluate("X[4,0]", g(2, 3)), Err(Error::Level(_))));
        assert!(matches!(evaluate("X[1,2]", g(2, 3)), Err(Error::Range(_))));
        assert!(matches!(evaluate("jnd(5, 2)", g(2, 3)), Err(Error::Level(_))));
    }

    #[test]
    fn syntax_errors() {
        let pos = |src: &str| match parse_expr(src) {
            Err(Error::Syntax { pos, .. }) => pos,
            other => panic!("{src}: {other:?}"),
        };
        assert_eq!(pos("1 +"), 3);
        assert_eq!(pos("X[1 0]"), 4);
        assert_eq!(pos("foo(1)"), 0);
        assert_eq!(pos("(1 + 2"), 6);
        assert_eq!(pos("2 ^ x"), 4);
        assert_eq!(pos("1 2"), 2);
        assert_eq!(pos(""), 0);
        assert_eq!(pos("jnd(1; 2)"), 5);
    }

    #[test]
    fn spans() {
        let ast = parse_expr("2 * (X[1,0] + 1)").unwrap();
        assert_eq!((ast.root().start, ast.root().end), (0, 16));
        if let ExprKind::Mul(a, b) = &ast.root().kind {
            assert_eq!(a.kind, ExprKind::Int(BigInt::from(2)));
            assert_eq!((b.start, b.end), (4, 16));
        } else {
            panic!("expected a product");
        }
    }
}
