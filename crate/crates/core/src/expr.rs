//! Single-variable expressions in `t`: parsing, evaluation, symbolic
//! differentiation and printing.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := '-' unary | '+' unary | power
//! power   := atom ('^' unary)?          right-associative, exponent must be a rational constant
//! atom    := number | 't' | 'pi' | 'e' | func '(' sum ')' | '(' sum ')'
//! func    := sin | cos | tan | exp | ln | sqrt
//! ```
//!
//! Exponentiation binds tighter than unary minus, so `-t^2` is `-(t^2)`.

use std::fmt;

use thiserror::Error;

/// Maximum accepted source length in bytes.
pub const MAX_INPUT_LEN: usize = 64 * 1024;
const MAX_DEPTH: usize = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("SyntaxError at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("UnknownIdentifier '{name}' at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("expression is {len} bytes; the limit is {MAX_INPUT_LEN}")]
    TooLong { len: usize },
    #[error("EvalDomain: {op} at t={t}")]
    EvalDomain { op: &'static str, t: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }
}

/// Exact rational exponent, kept in lowest terms with a positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i64,
    den: i64,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Option<Self> {
        if den == 0 {
            return None;
        }
        let g = gcd(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        Some(Self { num: s * num / g, den: s * den / g })
    }

    pub fn integer(n: i64) -> Self {
        Self { num: n, den: 1 }
    }

    pub fn num(self) -> i64 {
        self.num
    }
    pub fn den(self) -> i64 {
        self.den
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    fn checked_add(self, o: Self) -> Option<Self> {
        let n = self.num.checked_mul(o.den)?.checked_add(o.num.checked_mul(self.den)?)?;
        Self::new(n, self.den.checked_mul(o.den)?)
    }
    fn checked_mul(self, o: Self) -> Option<Self> {
        Self::new(self.num.checked_mul(o.num)?, self.den.checked_mul(o.den)?)
    }
    fn checked_div(self, o: Self) -> Option<Self> {
        Self::new(self.num.checked_mul(o.den)?, self.den.checked_mul(o.num)?)
    }
    fn neg(self) -> Self {
        Self { num: -self.num, den: self.den }
    }

    /// Exact conversion of a float with a short decimal expansion.
    fn from_f64(x: f64) -> Option<Self> {
        let mut scale = 1i64;
        for _ in 0..=12 {
            let v = x * scale as f64;
            if v.abs() < 9.0e15 && v == v.round() {
                return Self::new(v as i64, scale);
            }
            scale *= 10;
        }
        None
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Expression tree. Immutable once built; all operations are pure.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Rational),
    Neg(Box<Expr>),
    Call(Func, Box<Expr>),
}

pub fn parse(text: &str) -> Result<Expr, ExprError> {
    if text.len() > MAX_INPUT_LEN {
        return Err(ExprError::TooLong { len: text.len() });
    }
    let mut p = Parser { src: text, tokens: lex(text)?, pos: 0, depth: 0 };
    if p.tokens.len() == 1 {
        return Err(p.error("empty expression"));
    }
    let e = p.sum()?;
    match p.peek() {
        Tok::End => Ok(e),
        _ => Err(p.error("unexpected trailing input")),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == b'.' {
            let start = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            if i < b.len() && b[i] == b'.' {
                i += 1;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                let mut j = i + 1;
                if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                    j += 1;
                }
                if j < b.len() && b[j].is_ascii_digit() {
                    i = j;
                    while i < b.len() && b[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let lit = &s[start..i];
            let v: f64 = lit.parse().map_err(|_| ExprError::Syntax {
                offset: start,
                message: format!("malformed number '{lit}'"),
            })?;
            if !v.is_finite() {
                return Err(ExprError::Syntax { offset: start, message: "number out of range".into() });
            }
            out.push((Tok::Num(v), start));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(s[start..i].to_string()), start));
        } else {
            let tok = match c {
                b'+' | b'-' | b'*' | b'/' | b'^' => Tok::Op(c as char),
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                _ => {
                    let ch = s[i..].chars().next().unwrap_or('?');
                    return Err(ExprError::Syntax {
                        offset: i,
                        message: format!("unexpected character '{ch}'"),
                    });
                }
            };
            out.push((tok, i));
            i += 1;
        }
    }
    out.push((Tok::End, s.len()));
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    depth: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }
    fn offset(&self) -> usize {
        self.tokens[self.pos].1
    }
    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].0.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }
    fn error(&self, msg: &str) -> ExprError {
        let found = match self.peek() {
            Tok::End => "end of input".to_string(),
            _ => {
                let o = self.offset();
                format!("'{}'", self.src[o..].chars().next().unwrap_or(' '))
            }
        };
        ExprError::Syntax { offset: self.offset(), message: format!("{msg} (found {found})") }
    }

    fn enter(&mut self) -> Result<(), ExprError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error("expression nested too deeply"));
        }
        Ok(())
    }

    fn sum(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Tok::Op('-') => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Op('/') => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        self.enter()?;
        let e = match self.peek() {
            Tok::Op('-') => {
                self.bump();
                Expr::Neg(Box::new(self.unary()?))
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()?
            }
            _ => self.power()?,
        };
        self.depth -= 1;
        Ok(e)
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if let Tok::Op('^') = self.peek() {
            self.bump();
            let at = self.offset();
            let exponent = self.unary()?;
            let r = const_rational(&exponent).ok_or_else(|| ExprError::Syntax {
                offset: at,
                message: "exponent must be a rational constant".into(),
            })?;
            return Ok(Expr::Pow(Box::new(base), r));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Const(v))
            }
            Tok::LParen => {
                self.bump();
                self.enter()?;
                let e = self.sum()?;
                self.depth -= 1;
                self.expect_rparen()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                if let Some(f) = Func::from_name(&name) {
                    if *self.peek() != Tok::LParen {
                        return Err(self.error(&format!("'{name}' must be followed by '('")));
                    }
                    self.bump();
                    self.enter()?;
                    let arg = self.sum()?;
                    self.depth -= 1;
                    self.expect_rparen()?;
                    return Ok(Expr::Call(f, Box::new(arg)));
                }
                match name.as_str() {
                    "t" => Ok(Expr::Var),
                    "pi" => Ok(Expr::Const(std::f64::consts::PI)),
                    "e" => Ok(Expr::Const(std::f64::consts::E)),
                    _ => Err(ExprError::UnknownIdentifier { name, offset: at }),
                }
            }
            _ => Err(self.error("expected a number, 't', a function call or '('")),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ExprError> {
        if *self.peek() == Tok::RParen {
            self.bump();
            Ok(())
        } else {
            Err(self.error("expected ')'"))
        }
    }
}

/// Exact value of a constant exponent expression, if it is rational.
fn const_rational(e: &Expr) -> Option<Rational> {
    match e {
        Expr::Const(c) => Rational::from_f64(*c),
        Expr::Neg(a) => Some(const_rational(a)?.neg()),
        Expr::Add(a, b) => const_rational(a)?.checked_add(const_rational(b)?),
        Expr::Sub(a, b) => const_rational(a)?.checked_add(const_rational(b)?.neg()),
        Expr::Mul(a, b) => const_rational(a)?.checked_mul(const_rational(b)?),
        Expr::Div(a, b) => const_rational(a)?.checked_div(const_rational(b)?),
        Expr::Pow(a, r) if r.den == 1 && (0..=62).contains(&r.num) => {
            let base = const_rational(a)?;
            let mut acc = Rational::integer(1);
            for _ in 0..r.num {
                acc = acc.checked_mul(base)?;
            }
            Some(acc)
        }
        _ => None,
    }
}

fn domain(op: &'static str, t: f64) -> ExprError {
    ExprError::EvalDomain { op, t }
}

fn pow_rational(x: f64, r: Rational, t: f64) -> Result<f64, ExprError> {
    if x == 0.0 && r.num < 0 {
        return Err(domain("zero raised to a negative power", t));
    }
    if r.den == 1 {
        return Ok(match i32::try_from(r.num) {
            Ok(n) => x.powi(n),
            Err(_) => x.powf(r.num as f64),
        });
    }
    if x < 0.0 {
        if r.den % 2 == 0 {
            return Err(domain("even root of a negative number", t));
        }
        let m = (-x).powf(r.to_f64().abs());
        let m = if r.num < 0 { 1.0 / m } else { m };
        return Ok(if r.num % 2 == 0 { m } else { -m });
    }
    if r == Rational::new(1, 2).unwrap() {
        return Ok(x.sqrt());
    }
    Ok(x.powf(r.to_f64()))
}

impl Expr {
    /// Evaluate at `t`. Domain violations (division by zero, logarithm or
    /// even root of a non-positive/negative number, overflow) are errors,
    /// never NaN or infinity.
    pub fn eval(&self, t: f64) -> Result<f64, ExprError> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var => t,
            Expr::Add(a, b) => a.eval(t)? + b.eval(t)?,
            Expr::Sub(a, b) => a.eval(t)? - b.eval(t)?,
            Expr::Mul(a, b) => a.eval(t)? * b.eval(t)?,
            Expr::Div(a, b) => {
                let d = b.eval(t)?;
                if d == 0.0 {
                    return Err(domain("division by zero", t));
                }
                a.eval(t)? / d
            }
            Expr::Pow(a, r) => pow_rational(a.eval(t)?, *r, t)?,
            Expr::Neg(a) => -a.eval(t)?,
            Expr::Call(f, a) => {
                let x = a.eval(t)?;
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Tan => x.tan(),
                    Func::Exp => x.exp(),
                    Func::Ln => {
                        if x <= 0.0 {
                            return Err(domain("logarithm of a non-positive number", t));
                        }
                        x.ln()
                    }
                    Func::Sqrt => {
                        if x < 0.0 {
                            return Err(domain("square root of a negative number", t));
                        }
                        x.sqrt()
                    }
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(domain("non-finite result", t))
        }
    }

    /// Exact derivative with respect to `t`. Only constant folding and
    /// removal of additive/multiplicative identities are applied.
    pub fn derivative(&self) -> Expr {
        use Expr::*;
        match self {
            Const(_) => Const(0.0),
            Var => Const(1.0),
            Add(a, b) => add(a.derivative(), b.derivative()),
            Sub(a, b) => sub(a.derivative(), b.derivative()),
            Mul(a, b) => add(
                mul(a.derivative(), (**b).clone()),
                mul((**a).clone(), b.derivative()),
            ),
            Div(a, b) => div(
                sub(
                    mul(a.derivative(), (**b).clone()),
                    mul((**a).clone(), b.derivative()),
                ),
                pow((**b).clone(), Rational::integer(2)),
            ),
            Pow(a, r) => {
                let r1 = r.checked_add(Rational::integer(-1)).expect("exponent overflow");
                let outer = if r1.num == 0 {
                    Const(r.to_f64())
                } else {
                    mul(Const(r.to_f64()), pow((**a).clone(), r1))
                };
                mul(outer, a.derivative())
            }
            Neg(a) => neg(a.derivative()),
            Call(f, a) => {
                let inner = a.derivative();
                let arg = (**a).clone();
                match f {
                    Func::Sin => mul(call(Func::Cos, arg), inner),
                    Func::Cos => neg(mul(call(Func::Sin, arg), inner)),
                    Func::Tan => div(inner, pow(call(Func::Cos, arg), Rational::integer(2))),
                    Func::Exp => mul(call(Func::Exp, arg), inner),
                    Func::Ln => div(inner, arg),
                    Func::Sqrt => div(inner, mul(Const(2.0), call(Func::Sqrt, arg))),
                }
            }
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var => 1,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                1 + a.size() + b.size()
            }
            Expr::Pow(a, _) | Expr::Neg(a) | Expr::Call(_, a) => 1 + a.size(),
        }
    }

    fn as_const(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Const(c) if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }
}

// Folding constructors. A constant subtree is folded only when its value is
// finite, so evaluation-time domain errors are never hidden.

fn fold(e: Expr) -> Expr {
    if !is_closed(&e) {
        return e;
    }
    match e.eval(0.0) {
        Ok(v) => Expr::Const(v),
        Err(_) => e,
    }
}

fn is_closed(e: &Expr) -> bool {
    match e {
        Expr::Const(_) => true,
        Expr::Var => false,
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            a.as_const().is_some() && b.as_const().is_some()
        }
        Expr::Pow(a, _) | Expr::Neg(a) | Expr::Call(_, a) => a.as_const().is_some(),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), _) if x == 0.0 => b,
        (_, Some(y)) if y == 0.0 => a,
        _ => fold(Expr::Add(Box::new(a), Box::new(b))),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (_, Some(y)) if y == 0.0 => a,
        (Some(x), _) if x == 0.0 => neg(b),
        _ => fold(Expr::Sub(Box::new(a), Box::new(b))),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    // A zero factor only ever comes from differentiating a constant, in which
    // case the whole product term is identically zero.
    match (a.as_const(), b.as_const()) {
        (Some(x), _) if x == 0.0 => Expr::Const(0.0),
        (_, Some(y)) if y == 0.0 => Expr::Const(0.0),
        (Some(x), _) if x == 1.0 => b,
        (_, Some(y)) if y == 1.0 => a,
        _ => fold(Expr::Mul(Box::new(a), Box::new(b))),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), _) if x == 0.0 => Expr::Const(0.0),
        (_, Some(y)) if y == 1.0 => a,
        _ => fold(Expr::Div(Box::new(a), Box::new(b))),
    }
}

fn pow(a: Expr, r: Rational) -> Expr {
    if r == Rational::integer(1) {
        return a;
    }
    fold(Expr::Pow(Box::new(a), r))
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

fn call(f: Func, a: Expr) -> Expr {
    fold(Expr::Call(f, Box::new(a)))
}

/// Prints with the minimum parentheses needed for [`parse`] to rebuild the
/// same tree. Constants use the shortest round-tripping representation.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Const(c) => {
                if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) {
                    write!(f, "-{:?}", -c)
                } else {
                    write!(f, "{c:?}")
                }
            }
            Expr::Var => write!(f, "t"),
            Expr::Add(a, b) => {
                child(f, a, 1)?;
                write!(f, " + ")?;
                child(f, b, 2)
            }
            Expr::Sub(a, b) => {
                child(f, a, 1)?;
                write!(f, " - ")?;
                child(f, b, 2)
            }
            Expr::Mul(a, b) => {
                child(f, a, 2)?;
                write!(f, "*")?;
                child(f, b, 3)
            }
            Expr::Div(a, b) => {
                child(f, a, 2)?;
                write!(f, "/")?;
                child(f, b, 3)
            }
            Expr::Pow(a, r) => {
                child(f, a, 5)?;
                if r.den == 1 && r.num >= 0 {
                    write!(f, "^{}", r.num)
                } else {
                    write!(f, "^({r})")
                }
            }
            Expr::Neg(a) => {
                write!(f, "-")?;
                child(f, a, 3)
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, t: f64) -> f64 {
        parse(s).unwrap().eval(t).unwrap()
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(ev("-2^2", 0.0), -4.0);
        assert_eq!(ev("2^3^2", 0.0), 512.0);
        assert_eq!(ev("8/4/2", 0.0), 1.0);
        assert_eq!(ev("1 - 2 - 3", 0.0), -4.0);
        assert_eq!(ev("2*t^2 + 1", 3.0), 19.0);
        assert_eq!(ev("t^-1", 4.0), 0.25);
        assert_eq!(ev("t^(1/3)", -8.0), -2.0);
        assert_eq!(ev("2 * -t", 3.0), -6.0);
        assert_eq!(ev("1.5e1", 0.0), 15.0);
    }

    #[test]
    fn examples() {
        assert!(matches!(parse("a"), Err(ExprError::UnknownIdentifier { offset: 0, .. })));
        let e = parse("2*cos(t)").unwrap();
        assert_eq!(
            e,
            Expr::Mul(Box::new(Expr::Const(2.0)), Box::new(Expr::Call(Func::Cos, Box::new(Expr::Var))))
        );
        assert_eq!(e.eval(0.0).unwrap(), 2.0);
        assert!(matches!(parse("1/t").unwrap().eval(0.0), Err(ExprError::EvalDomain { .. })));
        assert_eq!(ev("sqrt(t)", 4.0), 2.0);
        assert!((ev("exp(ln(t))", 2.5) - 2.5).abs() < 1e-14);
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        match parse("2 + * t") {
            Err(ExprError::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        match parse("sin t") {
            Err(ExprError::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("t^t"), Err(ExprError::Syntax { offset: 2, .. })));
        assert!(matches!(parse("(t"), Err(ExprError::Syntax { offset: 2, .. })));
        assert!(matches!(parse(""), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse("t $"), Err(ExprError::Syntax { offset: 2, .. })));
        let deep = "(".repeat(5000) + "t" + &")".repeat(5000);
        assert!(matches!(parse(&deep), Err(ExprError::Syntax { .. })));
        let long = "t+".repeat(MAX_INPUT_LEN) + "t";
        assert!(matches!(parse(&long), Err(ExprError::TooLong { .. })));
    }

    #[test]
    fn domain_errors() {
        for (s, t) in [("ln(t)", 0.0), ("sqrt(t)", -1.0), ("t^(1/2)", -1.0), ("t^-2", 0.0), ("exp(t)", 1000.0)] {
            assert!(matches!(parse(s).unwrap().eval(t), Err(ExprError::EvalDomain { .. })), "{s}");
        }
    }

    #[test]
    fn derivatives() {
        let d = parse("sin(t)").unwrap().derivative();
        assert_eq!(d, parse("cos(t)").unwrap());
        let d = parse("t^3").unwrap().derivative();
        assert_eq!(d, parse("3*t^2").unwrap());
        assert_eq!(parse("5").unwrap().derivative(), Expr::Const(0.0));
        assert_eq!(parse("2*t").unwrap().derivative(), Expr::Const(2.0));
    }

    #[test]
    fn printing_round_trips() {
        for s in [
            "-t^2", "(-t)^2", "t^(1/2)", "t^(-3/4)", "1 - (2 - t)", "t/(2*t)", "(t^2)^3",
            "-(-t)", "sin(t)*-cos(t)", "2.5e-7*t", "exp(-t^2/2)", "(1 + t)*(1 - t)",
        ] {
            let e = parse(s).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e, "{s} -> {e}");
        }
    }
}
