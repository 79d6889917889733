//! Lexer, parser and evaluator for form expressions.

use num_bigint::BigInt;
use num_traits::Pow;

use super::{ParseError, SourceSpan};
use crate::scalars::{ConstantSystem, Rational, Scalar, ScalarExponent};
use crate::trigform::{FrequencyVector, TermKey, TrigForm, TrigPoly};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Wedge,
    Caret,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    span: SourceSpan,
}

fn lex(text: &str, line: usize, col0: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let span = |len: usize| SourceSpan {
            line,
            column: col0 + i + 1,
            length: len,
        };
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let mut digits: String = chars[start..i].iter().collect();
            let mut scale = 0u32;
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                i += 1;
                let fs = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                digits.extend(&chars[fs..i]);
                scale = (i - fs) as u32;
            }
            let n: BigInt = digits.parse().expect("digits");
            let d: BigInt = BigInt::from(10).pow(scale);
            out.push(Token {
                tok: Tok::Num(Rational::new(n, d)),
                span: SourceSpan {
                    line,
                    column: col0 + start + 1,
                    length: i - start,
                },
            });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                span: SourceSpan {
                    line,
                    column: col0 + start + 1,
                    length: i - start,
                },
            });
            continue;
        }
        let (tok, len) = match c {
            '+' => (Tok::Plus, 1),
            '-' => (Tok::Minus, 1),
            '*' => (Tok::Star, 1),
            '/' if chars.get(i + 1) == Some(&'\\') => (Tok::Wedge, 2),
            '/' => (Tok::Slash, 1),
            '^' => (Tok::Caret, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            _ => {
                return Err(ParseError::Syntax {
                    span: span(1),
                    message: format!("unexpected character `{c}`"),
                })
            }
        };
        out.push(Token { tok, span: span(len) });
        i += len;
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Node {
    Num(Rational),
    Ident(String),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, u32),
    Call(String, Box<Ast>),
    Differential(String),
}

#[derive(Clone, Debug)]
struct Ast {
    node: Node,
    span: SourceSpan,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: SourceSpan,
}

fn cover(a: &SourceSpan, b: &SourceSpan) -> SourceSpan {
    if a.line != b.line {
        return a.clone();
    }
    SourceSpan {
        line: a.line,
        column: a.column,
        length: (b.column + b.length).saturating_sub(a.column),
    }
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn next_span(&self) -> SourceSpan {
        self.toks.get(self.pos).map_or(self.end.clone(), |t| t.span.clone())
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        self.pos += 1;
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            span: self.next_span(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let make: fn(Box<Ast>, Box<Ast>) -> Node = match self.peek() {
                Some(Tok::Plus) => Node::Add,
                Some(Tok::Minus) => Node::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            let span = cover(&lhs.span, &rhs.span);
            lhs = Ast {
                node: make(Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let make: fn(Box<Ast>, Box<Ast>) -> Node = match self.peek() {
                Some(Tok::Star) | Some(Tok::Wedge) => Node::Mul,
                Some(Tok::Slash) => Node::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            let span = cover(&lhs.span, &rhs.span);
            lhs = Ast {
                node: make(Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
    }

    fn unary(&mut self) -> Result<Ast, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            let t = self.bump();
            let inner = self.unary()?;
            let span = cover(&t.span, &inner.span);
            return Ok(Ast {
                node: Node::Neg(Box::new(inner)),
                span,
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let span = self.next_span();
        match self.peek() {
            Some(Tok::Num(q)) if q.is_integer() => {
                let n: u32 = q.to_integer().try_into().map_err(|_| ParseError::Syntax {
                    span: span.clone(),
                    message: "exponent too large".into(),
                })?;
                self.bump();
                Ok(Ast {
                    span: cover(&base.span, &span),
                    node: Node::Pow(Box::new(base), n),
                })
            }
            _ => self.err("expected a natural-number exponent"),
        }
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        let span = self.next_span();
        match self.peek().cloned() {
            Some(Tok::Num(q)) => {
                self.bump();
                Ok(Ast { node: Node::Num(q), span })
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                let close = self.bump();
                Ok(Ast {
                    node: inner.node,
                    span: cover(&span, &close.span),
                })
            }
            Some(Tok::Ident(name)) => {
                self.bump();
                if matches!(name.as_str(), "sin" | "cos" | "exp") && self.peek() == Some(&Tok::LParen) {
                    self.bump();
                    let arg = self.expr()?;
                    if self.peek() != Some(&Tok::RParen) {
                        return self.err("expected `)`");
                    }
                    let close = self.bump();
                    return Ok(Ast {
                        node: Node::Call(name, Box::new(arg)),
                        span: cover(&span, &close.span),
                    });
                }
                if name == "d" {
                    if let Some(Tok::Ident(v)) = self.peek().cloned() {
                        let t = self.bump();
                        return Ok(Ast {
                            node: Node::Differential(v),
                            span: cover(&span, &t.span),
                        });
                    }
                }
                Ok(Ast {
                    node: Node::Ident(name),
                    span,
                })
            }
            Some(_) => self.err("unexpected token"),
            None => self.err("unexpected end of expression"),
        }
    }
}

/// Evaluation context: the variables of a chart (or relation block) and
/// the declared constants.
pub(crate) struct Scope<'a> {
    pub vars: &'a [String],
    pub constants: &'a ConstantSystem,
}

impl Scope<'_> {
    fn dim(&self) -> usize {
        self.vars.len()
    }

    fn constant_form(&self, s: Scalar) -> TrigForm {
        TrigForm::function(TrigPoly::constant(self.dim(), s))
    }

    fn eval(&self, ast: &Ast) -> Result<TrigForm, ParseError> {
        let dim = self.dim();
        match &ast.node {
            Node::Num(q) => Ok(self.constant_form(Scalar::from_rational(q.clone()))),
            Node::Ident(name) => self.ident(name, &ast.span),
            Node::Differential(v) => match self.vars.iter().position(|x| x == v) {
                Some(idx) => Ok(TrigForm::dx(dim, idx)),
                None => Err(ParseError::UndeclaredConstant {
                    span: ast.span.clone(),
                    name: format!("d {v}"),
                }),
            },
            Node::Neg(x) => Ok(self.eval(x)?.neg()),
            Node::Add(a, b) | Node::Sub(a, b) => {
                let x = self.eval(a)?;
                let mut y = self.eval(b)?;
                if matches!(ast.node, Node::Sub(..)) {
                    y = y.neg();
                }
                x.try_add(&y).map_err(|_| ParseError::DegreeConflict {
                    span: ast.span.clone(),
                    left: x.degree(),
                    right: y.degree(),
                })
            }
            Node::Mul(a, b) => {
                let x = self.eval(a)?;
                let y = self.eval(b)?;
                Ok(x.wedge(&y).expect("same scope"))
            }
            Node::Div(a, b) => {
                let x = self.eval(a)?;
                let y = self.eval(b)?;
                let c = constant_value(&y).ok_or_else(|| ParseError::InvalidDivisor {
                    span: b.span.clone(),
                    message: "divisor must be a constant".into(),
                })?;
                let inv = c.inv().map_err(|_| ParseError::InvalidDivisor {
                    span: b.span.clone(),
                    message: "division by zero".into(),
                })?;
                Ok(x.scale(&inv))
            }
            Node::Pow(a, n) => {
                let x = self.eval(a)?;
                let mut out = self.constant_form(Scalar::one());
                for _ in 0..*n {
                    out = out.wedge(&x).expect("same scope");
                }
                Ok(out)
            }
            Node::Call(f, arg) => {
                let x = self.eval(arg)?;
                self.call(f, &x, &arg.span)
            }
        }
    }

    fn ident(&self, name: &str, span: &SourceSpan) -> Result<TrigForm, ParseError> {
        let dim = self.dim();
        if let Some(v) = self.vars.iter().position(|x| x == name) {
            return Ok(TrigForm::function(TrigPoly::variable(dim, v)));
        }
        if self.constants.contains(name) {
            return Ok(self.constant_form(Scalar::constant(name)));
        }
        match name {
            "pi" => return Ok(self.constant_form(Scalar::pi())),
            "i" => return Ok(self.constant_form(Scalar::i())),
            _ => {}
        }
        if let Some(v) = name.strip_prefix('d') {
            if let Some(idx) = self.vars.iter().position(|x| x == v) {
                return Ok(TrigForm::dx(dim, idx));
            }
        }
        Err(ParseError::UndeclaredConstant {
            span: span.clone(),
            name: name.to_string(),
        })
    }

    /// `exp(2 pi i L)`, `sin(2 pi L)`, `cos(2 pi L)` with `L` affine in the
    /// variables and coefficients in the span of the constants.
    fn call(&self, f: &str, arg: &TrigForm, span: &SourceSpan) -> Result<TrigForm, ParseError> {
        let bad = |message: &str| ParseError::NonLinearArgument {
            span: span.clone(),
            message: message.to_string(),
        };
        if arg.degree() != 0 && !arg.is_zero() {
            return Err(bad("argument is not a function"));
        }
        let dim = self.dim();
        let two_pi = Scalar::from_int(2) * Scalar::pi();
        let unit = if f == "exp" { &two_pi * &Scalar::i() } else { two_pi };
        let unit_inv = unit.inv().expect("nonzero");
        let mut freq = vec![ScalarExponent::zero(); dim];
        let mut phase = ScalarExponent::zero();
        for (_, key, c) in arg.terms() {
            if !key.freq.is_zero() || key.degree() > 1 {
                return Err(bad("not affine in the chart variables"));
            }
            let e = (c * &unit_inv)
                .to_exponent()
                .ok_or_else(|| bad("coefficient is not 2*pi times a constant-span value"))?;
            match key.exps.iter().position(|&k| k == 1) {
                Some(v) => {
                    if !e.is_at_most_linear() {
                        return Err(bad("frequency must be linear in the constants"));
                    }
                    freq[v] = e;
                }
                None => phase = e,
            }
        }
        let freq = FrequencyVector(freq);
        let wave = |sign: bool| {
            let (nu, ph) = if sign { (freq.clone(), phase.clone()) } else { (freq.neg(), phase.neg()) };
            TrigPoly::exponential(nu).scale(&Scalar::phase(&ph))
        };
        let out = match f {
            "exp" => wave(true),
            "cos" => wave(true).add(&wave(false)).scale(&Scalar::ratio(1, 2)),
            "sin" => {
                let half_over_i = (Scalar::from_int(2) * Scalar::i()).inv().expect("nonzero");
                wave(true).sub(&wave(false)).scale(&half_over_i)
            }
            _ => unreachable!("parser only emits known functions"),
        };
        Ok(TrigForm::function(out))
    }
}

/// The value of a constant 0-form.
fn constant_value(f: &TrigForm) -> Option<Scalar> {
    if f.degree() != 0 {
        return None;
    }
    let mut out = Scalar::zero();
    for (_, key, c) in f.terms() {
        if *key != TermKey::constant(f.dim()) {
            return None;
        }
        out = c.clone();
    }
    Some(out)
}

pub(crate) fn parse_expression(
    text: &str,
    scope: &Scope<'_>,
    line: usize,
    col0: usize,
) -> Result<TrigForm, ParseError> {
    let toks = lex(text, line, col0)?;
    let end = SourceSpan {
        line,
        column: col0 + text.chars().count() + 1,
        length: 0,
    };
    let mut p = Parser { toks, pos: 0, end };
    if p.toks.is_empty() {
        return p.err("empty expression");
    }
    let ast = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    scope.eval(&ast)
}

