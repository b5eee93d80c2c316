//! Complex-analytic expressions in one free variable.
//!
//! This is the input format for every piece of user-supplied representation
//! data (`f`, `g`, `R`, `F`, `G`, `q`, `r`) and for `expr:` height surfaces.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' exponent)*
//! exponent:= ['-' | '+'] INT | '(' ['-' | '+'] INT ')'
//! primary := NUMBER | 'i' | VAR | FUNC '(' expr ')' | '(' expr ')'
//! ```
//!
//! Exponents are integers so that [`AnalyticExpr::differentiate`] stays inside
//! the grammar; a general power is written `exp(a*log(w))`. All functions use
//! principal branches.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("cannot evaluate `{subexpr}` at {input}: {reason}")]
    EvalDomain {
        subexpr: String,
        input: String,
        reason: String,
    },
    #[error("`{0}` cannot be used as a variable name")]
    InvalidVarName(String),
    #[error("expression `{0}` is not a constant")]
    NotConstant(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Tan,
    Atan,
    Sinh,
    Cosh,
    Tanh,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 10] = [
        Func::Exp,
        Func::Log,
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Atan,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Atan => "atan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    fn apply(self, z: C64) -> C64 {
        match self {
            Func::Exp => z.exp(),
            Func::Log => z.ln(),
            Func::Sin => z.sin(),
            Func::Cos => z.cos(),
            Func::Tan => z.tan(),
            Func::Atan => z.atan(),
            Func::Sinh => z.sinh(),
            Func::Cosh => z.cosh(),
            Func::Tanh => z.tanh(),
            Func::Sqrt => z.sqrt(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

/// Expression tree node. `Var(k)` refers to the k-th declared variable; a
/// single-variable [`AnalyticExpr`] only ever contains `Var(0)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Const(C64),
    Var(usize),
    Neg(Box<Node>),
    Call(Func, Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    Pow(Box<Node>, i32),
}

/// `0 - z`, shared by evaluation and constant folding so both produce the
/// same signed zeros.
fn negate(z: C64) -> C64 {
    ZERO - z
}

impl Node {
    pub fn constant(re: f64) -> Node {
        Node::Const(C64::new(re, 0.0))
    }

    fn as_const(&self) -> Option<C64> {
        match self {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn max_var(&self) -> Option<usize> {
        match self {
            Node::Const(_) => None,
            Node::Var(k) => Some(*k),
            Node::Neg(a) | Node::Call(_, a) | Node::Pow(a, _) => a.max_var(),
            Node::Binary(_, a, b) => match (a.max_var(), b.max_var()) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, y) => x.or(y),
            },
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Node::Const(_) | Node::Var(_) => 1,
            Node::Neg(a) | Node::Call(_, a) | Node::Pow(a, _) => 1 + a.depth(),
            Node::Binary(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    // Folding constructors. Only exact algebraic identities and constant
    // arithmetic are applied.

    fn neg(a: Node) -> Node {
        match a {
            Node::Const(c) => Node::Const(negate(c)),
            a => Node::Neg(Box::new(a)),
        }
    }

    fn add(a: Node, b: Node) -> Node {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Node::Const(x + y),
            (Some(x), _) if x == ZERO => b,
            (_, Some(y)) if y == ZERO => a,
            _ => Node::Binary(BinOp::Add, Box::new(a), Box::new(b)),
        }
    }

    fn sub(a: Node, b: Node) -> Node {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Node::Const(x - y),
            (_, Some(y)) if y == ZERO => a,
            (Some(x), _) if x == ZERO => Node::neg(b),
            _ => Node::Binary(BinOp::Sub, Box::new(a), Box::new(b)),
        }
    }

    fn mul(a: Node, b: Node) -> Node {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Node::Const(x * y),
            (Some(x), _) | (_, Some(x)) if x == ZERO => Node::Const(ZERO),
            (Some(x), _) if x == ONE => b,
            (_, Some(y)) if y == ONE => a,
            _ => Node::Binary(BinOp::Mul, Box::new(a), Box::new(b)),
        }
    }

    fn div(a: Node, b: Node) -> Node {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) if y != ZERO => Node::Const(x / y),
            (_, Some(y)) if y == ONE => a,
            (Some(x), _) if x == ZERO => Node::Const(ZERO),
            _ => Node::Binary(BinOp::Div, Box::new(a), Box::new(b)),
        }
    }

    fn pow(a: Node, n: i32) -> Node {
        match (n, a.as_const()) {
            (0, _) => Node::Const(ONE),
            (1, _) => a,
            (_, Some(c)) if c != ZERO => Node::Const(c.powi(n)),
            _ => Node::Pow(Box::new(a), n),
        }
    }

    fn call(f: Func, a: Node) -> Node {
        if let Some(c) = a.as_const() {
            let v = f.apply(c);
            if v.is_finite() {
                return Node::Const(v);
            }
        }
        Node::Call(f, Box::new(a))
    }

    /// Partial derivative with respect to `Var(slot)`.
    pub fn derivative(&self, slot: usize) -> Node {
        match self {
            Node::Const(_) => Node::Const(ZERO),
            Node::Var(k) => Node::Const(if *k == slot { ONE } else { ZERO }),
            Node::Neg(a) => Node::neg(a.derivative(slot)),
            Node::Binary(op, a, b) => {
                let da = a.derivative(slot);
                let db = b.derivative(slot);
                match op {
                    BinOp::Add => Node::add(da, db),
                    BinOp::Sub => Node::sub(da, db),
                    BinOp::Mul => {
                        Node::add(Node::mul(da, (**b).clone()), Node::mul((**a).clone(), db))
                    }
                    BinOp::Div => Node::div(
                        Node::sub(Node::mul(da, (**b).clone()), Node::mul((**a).clone(), db)),
                        Node::pow((**b).clone(), 2),
                    ),
                }
            }
            Node::Pow(a, n) => Node::mul(
                Node::mul(Node::constant(*n as f64), Node::pow((**a).clone(), n - 1)),
                a.derivative(slot),
            ),
            Node::Call(f, a) => {
                let inner = a.derivative(slot);
                let a = (**a).clone();
                let outer = match f {
                    Func::Exp => Node::call(Func::Exp, a),
                    Func::Log => Node::div(Node::Const(ONE), a),
                    Func::Sin => Node::call(Func::Cos, a),
                    Func::Cos => Node::neg(Node::call(Func::Sin, a)),
                    Func::Tan => Node::pow(Node::call(Func::Cos, a), -2),
                    Func::Atan => Node::div(
                        Node::Const(ONE),
                        Node::add(Node::Const(ONE), Node::pow(a, 2)),
                    ),
                    Func::Sinh => Node::call(Func::Cosh, a),
                    Func::Cosh => Node::call(Func::Sinh, a),
                    Func::Tanh => {
                        Node::sub(Node::Const(ONE), Node::pow(Node::call(Func::Tanh, a), 2))
                    }
                    Func::Sqrt => Node::div(
                        Node::Const(ONE),
                        Node::mul(Node::constant(2.0), Node::call(Func::Sqrt, a)),
                    ),
                };
                Node::mul(outer, inner)
            }
        }
    }

    /// Replaces `Var(slot)` by a constant and renumbers higher slots down by one.
    pub fn substitute(&self, slot: usize, value: C64) -> Node {
        match self {
            Node::Const(c) => Node::Const(*c),
            Node::Var(k) if *k == slot => Node::Const(value),
            Node::Var(k) if *k > slot => Node::Var(k - 1),
            Node::Var(k) => Node::Var(*k),
            Node::Neg(a) => Node::Neg(Box::new(a.substitute(slot, value))),
            Node::Call(f, a) => Node::Call(*f, Box::new(a.substitute(slot, value))),
            Node::Pow(a, n) => Node::Pow(Box::new(a.substitute(slot, value)), *n),
            Node::Binary(op, a, b) => Node::Binary(
                *op,
                Box::new(a.substitute(slot, value)),
                Box::new(b.substitute(slot, value)),
            ),
        }
    }

    pub fn eval(&self, vars: &[C64], names: &[String]) -> Result<C64, ExprError> {
        let fail = |node: &Node, reason: &str| ExprError::EvalDomain {
            subexpr: Printer { node, names }.to_string(),
            input: format_inputs(vars, names),
            reason: reason.to_string(),
        };
        let value = match self {
            Node::Const(c) => *c,
            Node::Var(k) => *vars
                .get(*k)
                .ok_or_else(|| fail(self, "variable slot out of range"))?,
            Node::Neg(a) => negate(a.eval(vars, names)?),
            Node::Binary(op, a, b) => {
                let x = a.eval(vars, names)?;
                let y = b.eval(vars, names)?;
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y == ZERO {
                            return Err(fail(self, "division by zero"));
                        }
                        x / y
                    }
                }
            }
            Node::Pow(a, n) => {
                let x = a.eval(vars, names)?;
                if *n < 0 && x == ZERO {
                    return Err(fail(self, "negative power of zero"));
                }
                x.powi(*n)
            }
            Node::Call(f, a) => {
                let x = a.eval(vars, names)?;
                match f {
                    Func::Log if x == ZERO => return Err(fail(self, "logarithm of zero")),
                    Func::Atan if x == C64::i() || x == -C64::i() => {
                        return Err(fail(self, "arctangent pole"))
                    }
                    _ => f.apply(x),
                }
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(fail(self, "non-finite value"))
        }
    }
}

fn format_inputs(vars: &[C64], names: &[String]) -> String {
    names
        .iter()
        .zip(vars)
        .map(|(n, v)| format!("{n} = {v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn format_real(out: &mut fmt::Formatter<'_>, x: f64) -> fmt::Result {
    if x.is_sign_negative() {
        write!(out, "(-{:?})", -x)
    } else {
        write!(out, "{x:?}")
    }
}

/// Writes a tree so that parsing the text back evaluates bit-identically.
struct Printer<'a> {
    node: &'a Node,
    names: &'a [String],
}

impl Printer<'_> {
    fn child<'b>(&'b self, node: &'b Node) -> Printer<'b> {
        Printer {
            node,
            names: self.names,
        }
    }
}

impl fmt::Display for Printer<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node {
            Node::Const(c) if *c == C64::i() => write!(f, "i"),
            Node::Const(c) if c.im == 0.0 => format_real(f, c.re),
            Node::Const(c) => {
                write!(f, "(")?;
                format_real(f, c.re)?;
                write!(f, " + ")?;
                format_real(f, c.im)?;
                write!(f, "*i)")
            }
            Node::Var(k) => match self.names.get(*k) {
                Some(n) => write!(f, "{n}"),
                None => write!(f, "_{k}"),
            },
            Node::Neg(a) => write!(f, "(-{})", self.child(a)),
            Node::Call(func, a) => write!(f, "{}({})", func.name(), self.child(a)),
            Node::Binary(op, a, b) => {
                write!(f, "({} {} {})", self.child(a), op.symbol(), self.child(b))
            }
            Node::Pow(a, n) => {
                match **a {
                    Node::Var(_) => write!(f, "{}", self.child(a))?,
                    _ => write!(f, "({})", self.child(a))?,
                }
                if *n < 0 {
                    write!(f, "^({n})")
                } else {
                    write!(f, "^{n}")
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Lexer and parser
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64, bool),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    offset: usize,
}

fn syntax(offset: usize, message: impl Into<String>) -> ExprError {
    ExprError::Syntax {
        offset,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<Token>, ExprError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos];
        if c.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let start = pos;
        if c.is_ascii_digit() || (c == b'.' && bytes.get(pos + 1).is_some_and(u8::is_ascii_digit)) {
            let mut integral = true;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'.' {
                integral = false;
                pos += 1;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
            }
            if pos < bytes.len() && (bytes[pos] == b'e' || bytes[pos] == b'E') {
                let mut look = pos + 1;
                if look < bytes.len() && (bytes[look] == b'+' || bytes[look] == b'-') {
                    look += 1;
                }
                if look < bytes.len() && bytes[look].is_ascii_digit() {
                    integral = false;
                    pos = look;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                }
            }
            let text = &src[start..pos];
            let value: f64 = text
                .parse()
                .map_err(|_| syntax(start, format!("malformed number `{text}`")))?;
            out.push(Token {
                tok: Tok::Num(value, integral),
                offset: start,
            });
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
                pos += 1;
            }
            out.push(Token {
                tok: Tok::Ident(src[start..pos].to_string()),
                offset: start,
            });
        } else {
            let tok = match c {
                b'+' | b'-' | b'*' | b'/' | b'^' => Tok::Op(c as char),
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                _ => {
                    let ch = src[start..].chars().next().unwrap_or('?');
                    return Err(syntax(start, format!("unexpected character `{ch}`")));
                }
            };
            pos += 1;
            out.push(Token { tok, offset: start });
        }
    }
    out.push(Token {
        tok: Tok::End,
        offset: src.len(),
    });
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect_rparen(&mut self) -> Result<(), ExprError> {
        let t = self.bump();
        if t.tok == Tok::RParen {
            Ok(())
        } else {
            Err(syntax(t.offset, "expected `)`"))
        }
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.term()?;
        while let Tok::Op(op @ ('+' | '-')) = self.peek().tok {
            self.bump();
            let rhs = self.term()?;
            let op = if op == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Node::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.unary()?;
        while let Tok::Op(op @ ('*' | '/')) = self.peek().tok {
            self.bump();
            let rhs = self.unary()?;
            let op = if op == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Node::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        match self.peek().tok {
            Tok::Op('-') => {
                self.bump();
                let operand = self.unary()?;
                Ok(match operand {
                    Node::Const(c) => Node::Const(negate(c)),
                    other => Node::Neg(Box::new(other)),
                })
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node, ExprError> {
        let mut base = self.primary()?;
        while self.peek().tok == Tok::Op('^') {
            self.bump();
            let n = self.exponent()?;
            base = Node::Pow(Box::new(base), n);
        }
        Ok(base)
    }

    fn signed_int(&mut self) -> Result<i32, ExprError> {
        let mut sign = 1i64;
        while let Tok::Op(c @ ('+' | '-')) = self.peek().tok {
            if c == '-' {
                sign = -sign;
            }
            self.bump();
        }
        let t = self.bump();
        match t.tok {
            Tok::Num(v, true) if v <= i32::MAX as f64 => Ok((sign * v as i64) as i32),
            Tok::End => Err(syntax(t.offset, "expected integer exponent")),
            _ => Err(syntax(t.offset, "exponent must be an integer literal")),
        }
    }

    fn exponent(&mut self) -> Result<i32, ExprError> {
        if self.peek().tok == Tok::LParen {
            self.bump();
            let n = self.signed_int()?;
            self.expect_rparen()?;
            Ok(n)
        } else {
            self.signed_int()
        }
    }

    fn primary(&mut self) -> Result<Node, ExprError> {
        let t = self.bump();
        match t.tok {
            Tok::Num(v, _) => Ok(Node::Const(C64::new(v, 0.0))),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                if let Some(k) = self.vars.iter().position(|v| *v == name) {
                    return Ok(Node::Var(k));
                }
                if name == "i" {
                    return Ok(Node::Const(C64::i()));
                }
                if let Some(func) = Func::from_name(&name) {
                    let open = self.bump();
                    if open.tok != Tok::LParen {
                        return Err(syntax(open.offset, format!("expected `(` after `{name}`")));
                    }
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    return Ok(Node::Call(func, Box::new(arg)));
                }
                Err(ExprError::UnknownIdentifier {
                    name,
                    offset: t.offset,
                })
            }
            Tok::End => Err(syntax(t.offset, "unexpected end of input")),
            Tok::Op(c) => Err(syntax(t.offset, format!("unexpected `{c}`"))),
            Tok::RParen => Err(syntax(t.offset, "unexpected `)`")),
        }
    }
}

fn check_var_name(name: &str) -> Result<(), ExprError> {
    let mut chars = name.chars();
    let ok_start = chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
    let ok_rest = chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    if !ok_start || !ok_rest || name == "i" || Func::from_name(name).is_some() {
        return Err(ExprError::InvalidVarName(name.to_string()));
    }
    Ok(())
}

fn parse_with(src: &str, vars: &[String]) -> Result<Node, ExprError> {
    for v in vars {
        check_var_name(v)?;
    }
    let mut p = Parser {
        tokens: lex(src)?,
        pos: 0,
        vars,
    };
    let node = p.expr()?;
    let tail = p.peek();
    if tail.tok != Tok::End {
        return Err(syntax(tail.offset, "unexpected trailing input"));
    }
    Ok(node)
}

// ---------------------------------------------------------------------------
// Public single-variable expression
// ---------------------------------------------------------------------------

/// A parsed complex-analytic function of one variable.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticExpr {
    root: Node,
    names: Vec<String>,
}

impl AnalyticExpr {
    pub fn parse(src: &str, varname: &str) -> Result<Self, ExprError> {
        let names = vec![varname.to_string()];
        let root = parse_with(src, &names)?;
        Ok(AnalyticExpr { root, names })
    }

    /// Wraps an existing tree. Fails if the tree references a slot other than 0.
    pub fn from_node(root: Node, varname: &str) -> Result<Self, ExprError> {
        check_var_name(varname)?;
        if root.max_var().is_some_and(|k| k > 0) {
            return Err(ExprError::InvalidVarName(format!(
                "_{}",
                root.max_var().unwrap_or(0)
            )));
        }
        Ok(AnalyticExpr {
            root,
            names: vec![varname.to_string()],
        })
    }

    /// The identity map `w ↦ w`.
    pub fn identity(varname: &str) -> Self {
        AnalyticExpr {
            root: Node::Var(0),
            names: vec![varname.to_string()],
        }
    }

    pub fn constant(value: C64, varname: &str) -> Self {
        AnalyticExpr {
            root: Node::Const(value),
            names: vec![varname.to_string()],
        }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn varname(&self) -> &str {
        &self.names[0]
    }

    pub fn eval(&self, w: C64) -> Result<C64, ExprError> {
        self.root.eval(&[w], &self.names)
    }

    /// Evaluates at a real point and returns the real part.
    pub fn eval_real(&self, t: f64) -> Result<f64, ExprError> {
        Ok(self.eval(C64::new(t, 0.0))?.re)
    }

    pub fn differentiate(&self) -> Self {
        AnalyticExpr {
            root: self.root.derivative(0),
            names: self.names.clone(),
        }
    }

    /// `λ · self`, folded when `self` is constant.
    pub fn scaled(&self, lambda: C64) -> Self {
        AnalyticExpr {
            root: Node::mul(Node::Const(lambda), self.root.clone()),
            names: self.names.clone(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.root.max_var().is_none()
    }
}

impl fmt::Display for AnalyticExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Printer {
            node: &self.root,
            names: &self.names,
        }
        .fmt(f)
    }
}

/// Parses a constant such as `0.4+0.3*i`, `-2`, or `exp(i*0.5)`.
pub fn parse_complex(src: &str) -> Result<C64, ExprError> {
    let e = AnalyticExpr::parse(src, "_")?;
    if !e.is_constant() {
        return Err(ExprError::NotConstant(src.to_string()));
    }
    e.eval(ZERO)
}

/// Parses a real constant in which `pi` may appear, e.g. `-pi/2` or `0.25*pi`.
pub fn parse_real(src: &str) -> Result<f64, ExprError> {
    let e = AnalyticExpr::parse(src, "pi")?;
    let v = e.eval(C64::new(std::f64::consts::PI, 0.0))?;
    if v.im != 0.0 {
        return Err(ExprError::NotConstant(src.to_string()));
    }
    Ok(v.re)
}

// ---------------------------------------------------------------------------
// Two-variable height functions
// ---------------------------------------------------------------------------

/// `z = Z(x, y)` written in the same grammar. Evaluation at fixed `y`
/// substitutes the literal value and leaves a single-variable expression in
/// `x` (and vice versa); partial derivatives differentiate one slot while the
/// other is held as a symbol.
#[derive(Clone, Debug, PartialEq)]
pub struct BivariateExpr {
    root: Node,
    names: Vec<String>,
}

impl BivariateExpr {
    pub fn parse(src: &str, xname: &str, yname: &str) -> Result<Self, ExprError> {
        if xname == yname {
            return Err(ExprError::InvalidVarName(yname.to_string()));
        }
        let names = vec![xname.to_string(), yname.to_string()];
        let root = parse_with(src, &names)?;
        Ok(BivariateExpr { root, names })
    }

    pub fn eval(&self, x: C64, y: C64) -> Result<C64, ExprError> {
        self.root.eval(&[x, y], &self.names)
    }

    /// Partial derivative: `slot` 0 is x, 1 is y.
    pub fn partial(&self, slot: usize) -> Self {
        BivariateExpr {
            root: self.root.derivative(slot),
            names: self.names.clone(),
        }
    }

    /// Substitutes `y = value`, leaving a single-variable expression in x.
    pub fn at_y(&self, value: C64) -> AnalyticExpr {
        AnalyticExpr {
            root: self.root.substitute(1, value),
            names: vec![self.names[0].clone()],
        }
    }

    /// Substitutes `x = value`, leaving a single-variable expression in y.
    pub fn at_x(&self, value: C64) -> AnalyticExpr {
        AnalyticExpr {
            root: self.root.substitute(0, value),
            names: vec![self.names[1].clone()],
        }
    }
}

impl fmt::Display for BivariateExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Printer {
            node: &self.root,
            names: &self.names,
        }
        .fmt(f)
    }
}
