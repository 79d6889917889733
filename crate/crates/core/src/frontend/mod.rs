//! Text input and output: presentation files, form expressions and their
//! canonical printed forms.
//!
//! Expression grammar, whitespace-insensitive:
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/\" | "/") unary)*
//! unary  := "-" unary | power
//! power  := atom ("^" nat)?
//! atom   := number | "pi" | "i" | constant | variable | "d" variable
//!         | ("sin" | "cos" | "exp") "(" expr ")" | "(" expr ")"
//! ```
//!
//! `*` and `/\` both denote the wedge product (ordinary multiplication on
//! functions); `/` divides by a nonzero constant. Arguments of `sin` and
//! `cos` must be `2*pi` times an affine form, arguments of `exp` `2*pi*i`
//! times one.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::presentation::{Chart, Diagnostic};
use crate::scalars::{ConstantSystem, ScalarExponent};
use crate::trigform::TrigForm;

mod dpr;
mod expr;
mod print;

pub use dpr::parse_presentation;
pub use print::{print_form, print_presentation, print_scalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("{span}: syntax error: {message}")]
    Syntax { span: SourceSpan, message: String },
    #[error("{span}: unknown chart `{name}`")]
    UnknownChart { span: SourceSpan, name: String },
    #[error("{span}: relation `{relation}` has a non-affine leg: {message}")]
    NonAffineMap {
        span: SourceSpan,
        relation: String,
        message: String,
    },
    #[error("{span}: `{name}` is not a variable, differential or declared constant")]
    UndeclaredConstant { span: SourceSpan, name: String },
    #[error("{span}: unsupported function argument: {message}")]
    NonLinearArgument { span: SourceSpan, message: String },
    #[error("{span}: sum mixes forms of degree {left} and {right}")]
    DegreeConflict {
        span: SourceSpan,
        left: usize,
        right: usize,
    },
    #[error("{span}: {message}")]
    InvalidDivisor { span: SourceSpan, message: String },
    #[error("invalid presentation: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
}

/// Parses a form on `chart`. Spans refer to line 1 of `text`.
pub fn parse_form(text: &str, chart: &Chart, constants: &ConstantSystem) -> Result<TrigForm, ParseError> {
    let scope = expr::Scope {
        vars: &chart.vars,
        constants,
    };
    expr::parse_expression(text, &scope, 1, 0)
}

/// Parses a frequency such as `1/2`, `a` or `1 - 2*a`: a rational
/// combination of 1 and the declared constants.
pub fn parse_exponent(text: &str, constants: &ConstantSystem) -> Result<ScalarExponent, ParseError> {
    let point = Chart {
        name: String::new(),
        dim: 0,
        vars: Vec::new(),
        bounds: None,
    };
    let value = parse_form(text, &point, constants)?;
    let invalid = || ParseError::Syntax {
        span: SourceSpan {
            line: 1,
            column: 1,
            length: text.len(),
        },
        message: format!("`{text}` is not a rational combination of 1 and the constants"),
    };
    if value.degree() != 0 {
        return Err(invalid());
    }
    let mut out = ScalarExponent::zero();
    for (_, _, c) in value.terms() {
        out = out.add(&c.to_exponent().filter(ScalarExponent::is_at_most_linear).ok_or_else(invalid)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Scalar;
    use crate::trigform::{FrequencyVector, TrigPoly};

    fn chart(vars: &[&str]) -> Chart {
        Chart {
            name: "U".into(),
            dim: vars.len(),
            vars: vars.iter().map(|v| v.to_string()).collect(),
            bounds: None,
        }
    }

    fn consts() -> ConstantSystem {
        ConstantSystem::new(["a"]).unwrap()
    }

    fn parse(s: &str) -> Result<TrigForm, ParseError> {
        parse_form(s, &chart(&["t"]), &consts())
    }

    fn wave(nu: ScalarExponent) -> TrigPoly {
        TrigPoly::exponential(FrequencyVector(vec![nu]))
    }

    #[test]
    fn euler_identity() {
        let cos = parse("cos(2*pi*t)").unwrap();
        let expect = wave(ScalarExponent::from_int(1))
            .add(&wave(ScalarExponent::from_int(-1)))
            .scale(&Scalar::ratio(1, 2));
        assert_eq!(cos, TrigForm::function(expect));
    }

    #[test]
    fn irrational_frequency() {
        let w = parse("exp(i*2*pi*a*t) * dt").unwrap();
        assert_eq!(w.degree(), 1);
        let terms: Vec<_> = w.terms().collect();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].1.freq, FrequencyVector(vec![ScalarExponent::constant("a")]));
    }

    #[test]
    fn error_cases() {
        assert!(matches!(parse("sin(t*t)"), Err(ParseError::NonLinearArgument { .. })));
        assert!(matches!(parse("sin(t)"), Err(ParseError::NonLinearArgument { .. })));
        assert!(matches!(parse("t + dt"), Err(ParseError::DegreeConflict { .. })));
        assert!(matches!(parse("b*t"), Err(ParseError::UndeclaredConstant { .. })));
        assert!(matches!(parse("t / t"), Err(ParseError::InvalidDivisor { .. })));
        assert!(matches!(parse("(t"), Err(ParseError::Syntax { .. })));
        match parse("t + $") {
            Err(ParseError::Syntax { span, .. }) => assert_eq!((span.line, span.column), (1, 5)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn printing_round_trips() {
        let c = chart(&["t"]);
        for s in [
            "0",
            "dt",
            "cos(2*pi*t)",
            "sin(2*pi*t)*dt",
            "t^2*exp(2*pi*i*(a*t + 1/3)) - 5/7*t",
            "exp(2*pi*i*a*t)*exp(2*pi*i*a)*(pi + a)/(1 + exp(2*pi*i*a))",
            "(2 + i)*cos(2*pi*(1/2 + a)*t)*dt",
            "exp(2*pi*i*(1/5))*t + 1/pi",
        ] {
            let w = parse_form(s, &c, &consts()).unwrap();
            let printed = print_form(&w, &c.vars);
            let back = parse_form(&printed, &c, &consts()).unwrap_or_else(|e| panic!("{printed}: {e}"));
            assert_eq!(back, w, "{s} printed as {printed}");
            assert_eq!(print_form(&back, &c.vars), printed);
        }
        assert_eq!(print_form(&parse("dt").unwrap(), &c.vars), "dt");
        assert_eq!(print_form(&TrigForm::zero(1, 1), &c.vars), "0");
    }

    #[test]
    fn two_dimensional_wedges() {
        let c = chart(&["x", "y"]);
        let w = parse_form("dx /\\ dy + dy * dx", &c, &consts()).unwrap();
        assert!(w.is_zero());
        let w = parse_form("x*dy /\\ dx", &c, &consts()).unwrap();
        let printed = print_form(&w, &c.vars);
        assert_eq!(printed, "-x*dx /\\ dy");
        assert_eq!(parse_form(&printed, &c, &consts()).unwrap(), w);
    }

    #[test]
    fn bundled_presentations_round_trip_bytewise() {
        for src in [
            include_str!("../../data/circle.dpr"),
            include_str!("../../data/torus.dpr"),
            include_str!("../../data/line.dpr"),
            include_str!("../../data/line_two_charts.dpr"),
            include_str!("../../data/torus2.dpr"),
        ] {
            let p = parse_presentation(src).unwrap();
            assert_eq!(print_presentation(&p), src);
            assert_eq!(parse_presentation(&print_presentation(&p)).unwrap(), p);
        }
    }

    #[test]
    fn presentation_errors() {
        let bad_leg = "constants:\nspace X\nchart U dim 1 vars t\nrelation R dim 1 vars t\n  leg U : t\n  leg U : t^2\n";
        assert!(matches!(parse_presentation(bad_leg), Err(ParseError::NonAffineMap { .. })));
        let unknown = "constants:\nspace X\nchart U dim 1 vars t\nrelation R dim 1 vars t\n  leg U : t\n  leg W : t\n";
        match parse_presentation(unknown) {
            Err(ParseError::UnknownChart { name, span }) => {
                assert_eq!(name, "W");
                assert_eq!(span.line, 6);
            }
            other => panic!("unexpected {other:?}"),
        }
        let undeclared = "constants:\nspace X\nchart U dim 1 vars t\nrelation R dim 1 vars t\n  leg U : t\n  leg U : t + b\n";
        assert!(matches!(parse_presentation(undeclared), Err(ParseError::UndeclaredConstant { .. })));
        let dup = "constants:\nspace X\nchart U dim 1 vars t\nchart U dim 1 vars s\n";
        assert!(matches!(parse_presentation(dup), Err(ParseError::Invalid(_))));
        let wrong_dim = "constants:\nspace X\nchart U dim 2 vars x y\nrelation R dim 1 vars t\n  leg U : t\n  leg U : t, t\n";
        assert!(matches!(parse_presentation(wrong_dim), Err(ParseError::Invalid(_))));
    }

    #[test]
    fn comments_and_bounds() {
        let src = "# circle chart\nconstants:\nspace X   # name\nchart U dim 1 vars t bounds 0..1\n";
        let p = parse_presentation(src).unwrap();
        assert_eq!(print_presentation(&p), "constants:\nspace X\nchart U dim 1 vars t bounds 0..1\n");
    }

    #[test]
    fn exponents() {
        let e = parse_exponent("1/2 - 2*a", &consts()).unwrap();
        assert_eq!(e, ScalarExponent::rational(crate::scalars::rat(1, 2)).add(&ScalarExponent::constant("a").scale(&crate::scalars::rat(-2, 1))));
        assert!(parse_exponent("pi", &consts()).is_err());
        assert!(parse_exponent("b", &consts()).is_err());
    }
}
