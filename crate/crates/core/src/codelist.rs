//! Straight-line codelists and the expression parser that produces them.
//!
//! A codelist evaluates a scalar function of `n` variables as a sequence of
//! lines `y₁ … yₙ₊ₜ`. Lines `1…n` load the variables; every later line applies
//! one elementary operation to strictly earlier lines, and the function value
//! is the result line (the last one, unless the whole function is a single
//! variable).
//!
//! # Expression grammar
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?
//! primary := number | 'x' digits | func '(' expr ')' | '(' expr ')'
//! func    := 'sqrt' | 'exp' | 'ln'
//! ```
//!
//! Exponents must fold to a natural number `m >= 2`. Literal-only subtrees are
//! folded into `addConst`/`mulByConst` payloads, `a - b` becomes `a + (-1)·b`,
//! `a / b` becomes `a · (1/b)` and division by a literal becomes a scaling.
//! Lines are emitted level by level (by height above the variables), ties in
//! left-to-right order, so `exp(x1 - 2*x2^2 + 3*x3^3)` yields the familiar
//! ten-line list `square, cube, mulByConst, mulByConst, add, add, exp`.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{EvalError, ParseError};

/// Elementary operation of a codelist line, with its constant payload.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OpKind {
    /// Load variable `x_{k+1}` (zero-based index `k`).
    Var(usize),
    AddConst(f64),
    MulByConst(f64),
    Add,
    Mul,
    OneOver,
    Square,
    Cube,
    /// `y^m` with `m >= 4`; `m = 2, 3` are always [`OpKind::Square`]/[`OpKind::Cube`].
    PowNat(u32),
    Sqrt,
    Exp,
    Ln,
}

/// Operation kind without payload; the key of the cost model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpClass {
    Var,
    AddConst,
    MulByConst,
    Add,
    Mul,
    OneOver,
    Square,
    Cube,
    PowNat,
    Sqrt,
    Exp,
    Ln,
}

impl OpClass {
    pub const ALL: [OpClass; 12] = [
        OpClass::Var,
        OpClass::AddConst,
        OpClass::MulByConst,
        OpClass::Add,
        OpClass::Mul,
        OpClass::OneOver,
        OpClass::Square,
        OpClass::Cube,
        OpClass::PowNat,
        OpClass::Sqrt,
        OpClass::Exp,
        OpClass::Ln,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OpClass::Var => "var",
            OpClass::AddConst => "addConst",
            OpClass::MulByConst => "mulByConst",
            OpClass::Add => "add",
            OpClass::Mul => "mul",
            OpClass::OneOver => "oneOver",
            OpClass::Square => "square",
            OpClass::Cube => "cube",
            OpClass::PowNat => "powNat",
            OpClass::Sqrt => "sqrt",
            OpClass::Exp => "exp",
            OpClass::Ln => "ln",
        }
    }

    pub fn from_name(name: &str) -> Option<OpClass> {
        OpClass::ALL.into_iter().find(|c| c.name() == name)
    }
}

impl OpKind {
    pub fn class(&self) -> OpClass {
        match self {
            OpKind::Var(_) => OpClass::Var,
            OpKind::AddConst(_) => OpClass::AddConst,
            OpKind::MulByConst(_) => OpClass::MulByConst,
            OpKind::Add => OpClass::Add,
            OpKind::Mul => OpClass::Mul,
            OpKind::OneOver => OpClass::OneOver,
            OpKind::Square => OpClass::Square,
            OpKind::Cube => OpClass::Cube,
            OpKind::PowNat(_) => OpClass::PowNat,
            OpKind::Sqrt => OpClass::Sqrt,
            OpKind::Exp => OpClass::Exp,
            OpKind::Ln => OpClass::Ln,
        }
    }

    pub fn name(&self) -> &'static str {
        self.class().name()
    }

    /// Number of line arguments.
    pub fn arity(&self) -> usize {
        match self {
            OpKind::Var(_) => 0,
            OpKind::Add | OpKind::Mul => 2,
            _ => 1,
        }
    }
}

/// One codelist line: an operation and the (zero-based) lines it reads.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Line {
    pub op: OpKind,
    pub arg_i: Option<usize>,
    pub arg_j: Option<usize>,
}

impl Line {
    pub fn var(k: usize) -> Self {
        Line {
            op: OpKind::Var(k),
            arg_i: None,
            arg_j: None,
        }
    }

    pub fn unary(op: OpKind, i: usize) -> Self {
        Line {
            op,
            arg_i: Some(i),
            arg_j: None,
        }
    }

    pub fn binary(op: OpKind, i: usize, j: usize) -> Self {
        Line {
            op,
            arg_i: Some(i),
            arg_j: Some(j),
        }
    }

    /// The single argument of a unary line.
    ///
    /// # Panics
    /// On a line without arguments; validated codelists never reach that.
    #[inline]
    pub(crate) fn a(&self) -> usize {
        self.arg_i.expect("line has no argument")
    }

    #[inline]
    pub(crate) fn b(&self) -> usize {
        self.arg_j.expect("line has no second argument")
    }
}

/// A validated, topologically ordered codelist.
#[derive(Clone, Debug, PartialEq)]
pub struct Codelist {
    n_vars: usize,
    lines: Vec<Line>,
    result: usize,
}

impl Codelist {
    /// Validates `lines` and takes the last line as the result.
    pub fn new(n_vars: usize, lines: Vec<Line>) -> Result<Self, ParseError> {
        let result = lines.len().saturating_sub(1);
        Self::with_result(n_vars, lines, result)
    }

    /// Validates `lines` with an explicit result line. The result must be the
    /// last line, or a variable line when the codelist has no operations.
    pub fn with_result(n_vars: usize, lines: Vec<Line>, result: usize) -> Result<Self, ParseError> {
        let bad = |msg: String| Err(ParseError::InvalidCodelist(msg));
        if n_vars == 0 {
            return bad("a codelist needs at least one variable".into());
        }
        if lines.len() < n_vars {
            return bad(format!(
                "{} lines cannot hold {n_vars} variables",
                lines.len()
            ));
        }
        let mut lines = lines;
        for (k, line) in lines.iter_mut().enumerate() {
            match line.op {
                OpKind::Var(v) => {
                    if k >= n_vars || v != k {
                        return bad(format!("line y{} must not be var(x{})", k + 1, v + 1));
                    }
                    if line.arg_i.is_some() || line.arg_j.is_some() {
                        return bad(format!("var line y{} takes no arguments", k + 1));
                    }
                    continue;
                }
                _ if k < n_vars => {
                    return bad(format!("line y{} must be var(x{})", k + 1, k + 1));
                }
                OpKind::AddConst(c) | OpKind::MulByConst(c) if !c.is_finite() => {
                    return bad(format!("line y{} has a non-finite constant", k + 1));
                }
                OpKind::PowNat(m) if m < 2 => {
                    return bad(format!("line y{} has exponent {m} < 2", k + 1));
                }
                OpKind::PowNat(2) => line.op = OpKind::Square,
                OpKind::PowNat(3) => line.op = OpKind::Cube,
                _ => {}
            }
            let args = [line.arg_i, line.arg_j];
            let given = args.iter().flatten().count();
            if given != line.op.arity() || (line.arg_i.is_none() && line.arg_j.is_some()) {
                return bad(format!(
                    "line y{} ({}) needs {} argument(s)",
                    k + 1,
                    line.op.name(),
                    line.op.arity()
                ));
            }
            if let Some(&a) = args.iter().flatten().find(|&&a| a >= k) {
                return bad(format!(
                    "line y{} reads y{}, which is not earlier",
                    k + 1,
                    a + 1
                ));
            }
        }
        let last = lines.len() - 1;
        let ok = result == last || (last + 1 == n_vars && result < n_vars);
        if !ok {
            return bad(format!("result y{} is not the last line", result + 1));
        }
        Ok(Codelist {
            n_vars,
            lines,
            result,
        })
    }

    /// Parses an expression over `x1 … x{n_vars}`; see the module docs.
    pub fn parse(expression: &str, n_vars: usize) -> Result<Self, ParseError> {
        parse(expression, n_vars)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Zero-based index of the result line.
    pub fn result(&self) -> usize {
        self.result
    }

    /// Evaluates the function at a point, line by line in `f64`.
    pub fn eval_point(&self, x: &[f64]) -> Result<f64, EvalError> {
        if x.len() != self.n_vars {
            return Err(EvalError::DimensionMismatch {
                expected: self.n_vars,
                got: x.len(),
            });
        }
        let mut y = Vec::with_capacity(self.lines.len());
        for (k, line) in self.lines.iter().enumerate() {
            let violation = || EvalError::PointDomain {
                line: k,
                op: line.op.name(),
            };
            let v = match line.op {
                OpKind::Var(i) => x[i],
                OpKind::AddConst(c) => y[line.a()] + c,
                OpKind::MulByConst(c) => c * y[line.a()],
                OpKind::Add => y[line.a()] + y[line.b()],
                OpKind::Mul => y[line.a()] * y[line.b()],
                OpKind::OneOver => {
                    let d: f64 = y[line.a()];
                    if d == 0.0 {
                        return Err(violation());
                    }
                    1.0 / d
                }
                OpKind::Square => {
                    let a: f64 = y[line.a()];
                    a * a
                }
                OpKind::Cube => {
                    let a: f64 = y[line.a()];
                    a * a * a
                }
                OpKind::PowNat(m) => f64::powi(y[line.a()], m as i32),
                OpKind::Sqrt => {
                    let a: f64 = y[line.a()];
                    if a < 0.0 {
                        return Err(violation());
                    }
                    a.sqrt()
                }
                OpKind::Exp => f64::exp(y[line.a()]),
                OpKind::Ln => {
                    let a: f64 = y[line.a()];
                    if a <= 0.0 {
                        return Err(violation());
                    }
                    a.ln()
                }
            };
            y.push(v);
        }
        Ok(y[self.result])
    }

    /// One row per line, `y<k> = <op>` with one-based indices.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (k, line) in self.lines.iter().enumerate() {
            let a = || line.a() + 1;
            let b = || line.b() + 1;
            let _ = match line.op {
                OpKind::Var(v) => writeln!(out, "y{} = x{}", k + 1, v + 1),
                OpKind::AddConst(c) => writeln!(out, "y{} = y{} + ({c})", k + 1, a()),
                OpKind::MulByConst(c) => writeln!(out, "y{} = ({c}) * y{}", k + 1, a()),
                OpKind::Add => writeln!(out, "y{} = y{} + y{}", k + 1, a(), b()),
                OpKind::Mul => writeln!(out, "y{} = y{} * y{}", k + 1, a(), b()),
                OpKind::OneOver => writeln!(out, "y{} = 1 / y{}", k + 1, a()),
                OpKind::PowNat(m) => writeln!(out, "y{} = pow(y{}, {m})", k + 1, a()),
                op => writeln!(out, "y{} = {}(y{})", k + 1, op.name(), a()),
            };
        }
        out
    }

    /// Merges structurally identical lines (hash-consing). The parser never
    /// does this on its own, so operation counts follow the source text.
    pub fn dedup(&self) -> Codelist {
        let mut remap = Vec::with_capacity(self.lines.len());
        let mut seen: HashMap<(OpClass, u64, Option<usize>, Option<usize>), usize> = HashMap::new();
        let mut lines: Vec<Line> = Vec::new();
        for line in &self.lines {
            let mut l = *line;
            l.arg_i = l.arg_i.map(|a| remap[a]);
            l.arg_j = l.arg_j.map(|b| remap[b]);
            if matches!(l.op, OpKind::Add | OpKind::Mul) && l.arg_i > l.arg_j {
                std::mem::swap(&mut l.arg_i, &mut l.arg_j);
            }
            let payload = match l.op {
                OpKind::Var(v) => v as u64,
                OpKind::AddConst(c) | OpKind::MulByConst(c) => c.to_bits(),
                OpKind::PowNat(m) => m as u64,
                _ => 0,
            };
            let key = (l.op.class(), payload, l.arg_i, l.arg_j);
            let idx = *seen.entry(key).or_insert_with(|| {
                lines.push(l);
                lines.len() - 1
            });
            remap.push(idx);
        }
        let result = remap[self.result];
        Codelist {
            n_vars: self.n_vars,
            lines,
            result,
        }
    }
}

// ---------------------------------------------------------------------------
// Tokenizer

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| ParseError::Syntax {
                    pos: start,
                    msg: format!("malformed number `{text}`"),
                })?;
                toks.push((Tok::Num(value), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{ch}`"),
                });
            }
        };
        toks.push((tok, start));
        i += 1;
    }
    toks.push((Tok::End, src.len()));
    Ok(toks)
}

// ---------------------------------------------------------------------------
// Folded expression tree

#[derive(Clone, Debug)]
enum Node {
    Const(f64),
    Var(usize),
    Shift(f64, Box<Node>),
    Scale(f64, Box<Node>),
    Add(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Recip(Box<Node>),
    Pow(u32, Box<Node>),
    Sqrt(Box<Node>),
    Exp(Box<Node>),
    Ln(Box<Node>),
}

#[derive(Clone, Copy)]
enum Func {
    Sqrt,
    Exp,
    Ln,
}

fn constant(v: f64, pos: usize) -> Result<Node, ParseError> {
    if v.is_finite() {
        Ok(Node::Const(v))
    } else {
        Err(ParseError::NonFiniteConstant { pos, value: v })
    }
}

fn shift(c: f64, e: Node, pos: usize) -> Result<Node, ParseError> {
    match e {
        Node::Const(x) => constant(c + x, pos),
        Node::Shift(d, inner) => shift(c + d, *inner, pos),
        e if c == 0.0 => Ok(e),
        e => Ok(Node::Shift(c, Box::new(e))),
    }
}

fn scale(c: f64, e: Node, pos: usize) -> Result<Node, ParseError> {
    match e {
        Node::Const(x) => constant(c * x, pos),
        Node::Scale(d, inner) => scale(c * d, *inner, pos),
        _ if c == 0.0 => Ok(Node::Const(0.0)),
        e if c == 1.0 => Ok(e),
        e => Ok(Node::Scale(c, Box::new(e))),
    }
}

fn add(a: Node, b: Node, pos: usize) -> Result<Node, ParseError> {
    match (a, b) {
        (Node::Const(x), Node::Const(y)) => constant(x + y, pos),
        (Node::Const(c), e) | (e, Node::Const(c)) => shift(c, e, pos),
        (a, b) => Ok(Node::Add(Box::new(a), Box::new(b))),
    }
}

fn mul(a: Node, b: Node, pos: usize) -> Result<Node, ParseError> {
    match (a, b) {
        (Node::Const(x), Node::Const(y)) => constant(x * y, pos),
        (Node::Const(c), e) | (e, Node::Const(c)) => scale(c, e, pos),
        (a, b) => Ok(Node::Mul(Box::new(a), Box::new(b))),
    }
}

fn recip(e: Node, pos: usize) -> Result<Node, ParseError> {
    match e {
        Node::Const(x) => constant(1.0 / x, pos),
        e => Ok(Node::Recip(Box::new(e))),
    }
}

fn div(a: Node, b: Node, pos: usize) -> Result<Node, ParseError> {
    match b {
        Node::Const(c) => {
            let inv = 1.0 / c;
            if !inv.is_finite() {
                return Err(ParseError::NonFiniteConstant { pos, value: inv });
            }
            scale(inv, a, pos)
        }
        b => mul(a, recip(b, pos)?, pos),
    }
}

fn pow(base: Node, m: u32, pos: usize) -> Result<Node, ParseError> {
    match base {
        Node::Const(x) => constant(x.powi(m as i32), pos),
        base => Ok(Node::Pow(m, Box::new(base))),
    }
}

fn apply(f: Func, e: Node, pos: usize) -> Result<Node, ParseError> {
    match (f, e) {
        (Func::Sqrt, Node::Const(x)) if x < 0.0 => Err(ParseError::Syntax {
            pos,
            msg: format!("sqrt of negative constant {x}"),
        }),
        (Func::Ln, Node::Const(x)) if x <= 0.0 => Err(ParseError::Syntax {
            pos,
            msg: format!("ln of non-positive constant {x}"),
        }),
        (Func::Sqrt, Node::Const(x)) => constant(x.sqrt(), pos),
        (Func::Exp, Node::Const(x)) => constant(x.exp(), pos),
        (Func::Ln, Node::Const(x)) => constant(x.ln(), pos),
        (Func::Sqrt, e) => Ok(Node::Sqrt(Box::new(e))),
        (Func::Exp, e) => Ok(Node::Exp(Box::new(e))),
        (Func::Ln, e) => Ok(Node::Ln(Box::new(e))),
    }
}

// ---------------------------------------------------------------------------
// Recursive-descent parser

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    n_vars: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(ParseError::Syntax {
                pos: self.pos(),
                msg: format!("expected {what}"),
            })
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = add(lhs, rhs, pos)?;
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = add(lhs, scale(-1.0, rhs, pos)?, pos)?;
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = mul(lhs, rhs, pos)?;
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = div(lhs, rhs, pos)?;
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        let pos = self.pos();
        match self.peek() {
            Tok::Minus => {
                self.bump();
                let e = self.unary()?;
                scale(-1.0, e, pos)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        let value = match self.unary()? {
            Node::Const(v) => v,
            _ => {
                return Err(ParseError::Syntax {
                    pos,
                    msg: "exponent must be a numeric literal".into(),
                })
            }
        };
        let min = if matches!(base, Node::Const(_)) {
            0.0
        } else {
            2.0
        };
        if value.fract() != 0.0 || value < min || value > i32::MAX as f64 {
            return Err(ParseError::BadExponent { pos, value });
        }
        pow(base, value as u32, pos)
    }

    fn primary(&mut self) -> Result<Node, ParseError> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Num(v) => constant(v, pos),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if let Some(digits) = name.strip_prefix('x') {
                    if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                        let index: usize = digits.parse().unwrap_or(usize::MAX);
                        if index == 0 || index > self.n_vars {
                            return Err(ParseError::VariableOutOfRange {
                                pos,
                                index,
                                n_vars: self.n_vars,
                            });
                        }
                        return Ok(Node::Var(index - 1));
                    }
                }
                let f = match name.as_str() {
                    "sqrt" => Func::Sqrt,
                    "exp" => Func::Exp,
                    "ln" => Func::Ln,
                    _ => return Err(ParseError::UnknownFunction { pos, name }),
                };
                self.expect(Tok::LParen, "`(` after function name")?;
                let arg = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                apply(f, arg, pos)
            }
            Tok::End => Err(ParseError::Syntax {
                pos,
                msg: "unexpected end of expression".into(),
            }),
            other => Err(ParseError::Syntax {
                pos,
                msg: format!("unexpected token {other:?}"),
            }),
        }
    }
}

// ---------------------------------------------------------------------------
// Emission

struct Flat {
    op: OpKind,
    children: Vec<usize>,
    height: usize,
}

fn flatten(node: &Node, arena: &mut Vec<Flat>) -> usize {
    let (op, kids): (OpKind, Vec<&Node>) = match node {
        Node::Var(v) => (OpKind::Var(*v), vec![]),
        Node::Const(_) => unreachable!("constants are folded before emission"),
        Node::Shift(c, e) => (OpKind::AddConst(*c), vec![e]),
        Node::Scale(c, e) => (OpKind::MulByConst(*c), vec![e]),
        Node::Add(a, b) => (OpKind::Add, vec![a, b]),
        Node::Mul(a, b) => (OpKind::Mul, vec![a, b]),
        Node::Recip(e) => (OpKind::OneOver, vec![e]),
        Node::Pow(2, e) => (OpKind::Square, vec![e]),
        Node::Pow(3, e) => (OpKind::Cube, vec![e]),
        Node::Pow(m, e) => (OpKind::PowNat(*m), vec![e]),
        Node::Sqrt(e) => (OpKind::Sqrt, vec![e]),
        Node::Exp(e) => (OpKind::Exp, vec![e]),
        Node::Ln(e) => (OpKind::Ln, vec![e]),
    };
    let children: Vec<usize> = kids.into_iter().map(|k| flatten(k, arena)).collect();
    let height = children
        .iter()
        .map(|&c| arena[c].height + 1)
        .max()
        .unwrap_or(0);
    arena.push(Flat {
        op,
        children,
        height,
    });
    arena.len() - 1
}

/// Parses `expression` over `n_vars` variables into a codelist.
pub fn parse(expression: &str, n_vars: usize) -> Result<Codelist, ParseError> {
    if n_vars == 0 {
        return Err(ParseError::InvalidCodelist(
            "a codelist needs at least one variable".into(),
        ));
    }
    let mut p = Parser {
        toks: tokenize(expression)?,
        at: 0,
        n_vars,
    };
    let root = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(ParseError::Syntax {
            pos: p.pos(),
            msg: "unexpected trailing input".into(),
        });
    }
    if let Node::Const(_) = root {
        return Err(ParseError::ConstantExpression);
    }

    let mut arena = Vec::new();
    let root_id = flatten(&root, &mut arena);

    let mut order: Vec<usize> = (0..arena.len())
        .filter(|&i| !matches!(arena[i].op, OpKind::Var(_)))
        .collect();
    order.sort_by_key(|&i| arena[i].height);

    let mut line_of = vec![usize::MAX; arena.len()];
    for (i, f) in arena.iter().enumerate() {
        if let OpKind::Var(v) = f.op {
            line_of[i] = v;
        }
    }
    let mut lines: Vec<Line> = (0..n_vars).map(Line::var).collect();
    for &i in &order {
        let f = &arena[i];
        let mut args: Vec<usize> = f.children.iter().map(|&c| line_of[c]).collect();
        if matches!(f.op, OpKind::Add | OpKind::Mul) {
            args.sort_unstable();
        }
        line_of[i] = lines.len();
        lines.push(match args.as_slice() {
            [a] => Line::unary(f.op, *a),
            [a, b] => Line::binary(f.op, *a, *b),
            _ => unreachable!("non-variable nodes have one or two children"),
        });
    }
    let result = line_of[root_id];
    Codelist::with_result(n_vars, lines, result)
}
