//! The line-oriented `.dpr` presentation format.

use std::str::FromStr;

use num_traits::Zero;

use super::expr::{parse_expression, Scope};
use super::{ParseError, SourceSpan};
use crate::presentation::{Chart, Leg, Presentation, RelationBlock};
use crate::scalars::{ConstantSystem, Rational, ScalarExponent};
use crate::trigform::AffineMap;

struct Line<'a> {
    number: usize,
    indent: usize,
    text: &'a str,
}

impl Line<'_> {
    fn span_of(&self, word: &str) -> SourceSpan {
        let offset = self.text.find(word).unwrap_or(0);
        SourceSpan {
            line: self.number,
            column: self.indent + offset + 1,
            length: word.chars().count().max(1),
        }
    }

    fn syntax(&self, word: &str, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            span: self.span_of(word),
            message: message.into(),
        }
    }
}

struct PendingRelation<'a> {
    header: Line<'a>,
    name: String,
    dim: usize,
    vars: Vec<String>,
    legs: Vec<Line<'a>>,
}

fn parse_dim<'a>(line: &Line<'a>, words: &[&'a str], at: usize) -> Result<usize, ParseError> {
    if words.get(at) != Some(&"dim") {
        return Err(line.syntax(words.get(at).copied().unwrap_or(line.text), "expected `dim N`"));
    }
    let w = words
        .get(at + 1)
        .ok_or_else(|| line.syntax(line.text, "expected a dimension after `dim`"))?;
    w.parse().map_err(|_| line.syntax(w, "dimension must be a natural number"))
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_') && chars.all(|c| c.is_alphanumeric() || c == '_')
}

fn parse_header<'a>(line: &Line<'a>, words: &[&'a str]) -> Result<(String, usize, Vec<String>, usize), ParseError> {
    let name = words
        .get(1)
        .ok_or_else(|| line.syntax(words[0], "expected a name"))?;
    if !is_identifier(name) {
        return Err(line.syntax(name, "names must be identifiers"));
    }
    let dim = parse_dim(line, words, 2)?;
    if words.get(4) != Some(&"vars") {
        return Err(line.syntax(words.get(4).copied().unwrap_or(line.text), "expected `vars`"));
    }
    let mut vars = Vec::new();
    let mut i = 5;
    while i < words.len() && words[i] != "bounds" {
        for v in words[i].split(',').filter(|v| !v.is_empty()) {
            if !is_identifier(v) {
                return Err(line.syntax(v, "variable names must be identifiers"));
            }
            vars.push(v.to_string());
        }
        i += 1;
    }
    Ok((name.to_string(), dim, vars, i))
}

fn parse_bounds<'a>(line: &Line<'a>, words: &[&'a str]) -> Result<Vec<(Rational, Rational)>, ParseError> {
    words
        .iter()
        .map(|w| {
            let (lo, hi) = w
                .split_once("..")
                .ok_or_else(|| line.syntax(w, "bounds are written `lo..hi`"))?;
            let lo = Rational::from_str(lo).map_err(|_| line.syntax(w, "bad lower bound"))?;
            let hi = Rational::from_str(hi).map_err(|_| line.syntax(w, "bad upper bound"))?;
            Ok((lo, hi))
        })
        .collect()
}

/// Splits `e1, e2, ...` at top-level commas, keeping byte offsets.
fn split_components(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push((start, &s[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &s[start..]));
    out
}

fn parse_leg(
    line: &Line<'_>,
    rel: &PendingRelation<'_>,
    charts: &[Chart],
    constants: &ConstantSystem,
) -> Result<Leg, ParseError> {
    let rest = line.text.strip_prefix("leg").expect("leg line");
    let (chart_part, expr_part) = rest
        .split_once(':')
        .ok_or_else(|| line.syntax(line.text, "expected `leg CHART : expressions`"))?;
    let chart = chart_part.trim();
    if !charts.iter().any(|c| c.name == chart) {
        return Err(ParseError::UnknownChart {
            span: line.span_of(chart),
            name: chart.to_string(),
        });
    }
    let expr_col = line.indent + line.text.len() - expr_part.len();
    let scope = Scope {
        vars: &rel.vars,
        constants,
    };
    let mut linear = Vec::new();
    let mut translation = Vec::new();
    for (off, comp) in split_components(expr_part) {
        let col0 = expr_col + off;
        let value = parse_expression(comp, &scope, line.number, col0)?;
        let span = SourceSpan {
            line: line.number,
            column: col0 + 1,
            length: comp.chars().count(),
        };
        let non_affine = |message: &str| ParseError::NonAffineMap {
            span: span.clone(),
            relation: rel.name.clone(),
            message: message.to_string(),
        };
        if value.degree() != 0 && !value.is_zero() {
            return Err(non_affine("leg components must be functions"));
        }
        let mut row = vec![Rational::zero(); rel.dim];
        let mut b = ScalarExponent::zero();
        for (_, key, c) in value.terms() {
            if !key.freq.is_zero() || key.degree() > 1 {
                return Err(non_affine("component is not affine in the block variables"));
            }
            match key.exps.iter().position(|&e| e == 1) {
                Some(v) => {
                    row[v] = c
                        .as_rational()
                        .ok_or_else(|| non_affine("linear coefficients must be rational"))?;
                }
                None => {
                    b = c
                        .to_exponent()
                        .filter(ScalarExponent::is_at_most_linear)
                        .ok_or_else(|| non_affine("translation must lie in the span of 1 and the constants"))?;
                }
            }
        }
        linear.push(row);
        translation.push(b);
    }
    let map = AffineMap::new(rel.dim, linear, translation).map_err(|e| ParseError::NonAffineMap {
        span: line.span_of(expr_part.trim()),
        relation: rel.name.clone(),
        message: e.to_string(),
    })?;
    Ok(Leg {
        chart: chart.to_string(),
        map,
    })
}

/// Parses and validates a presentation file.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim_end();
        let trimmed = content.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        lines.push(Line {
            number: i + 1,
            indent: content.len() - trimmed.len(),
            text: trimmed,
        });
    }

    let mut constants: Option<ConstantSystem> = None;
    let mut space: Option<String> = None;
    let mut charts: Vec<Chart> = Vec::new();
    let mut pending: Vec<PendingRelation> = Vec::new();

    for line in lines {
        let words: Vec<&str> = line.text.split_whitespace().collect();
        match words[0] {
            w if w.starts_with("constants:") => {
                if constants.is_some() {
                    return Err(line.syntax(w, "duplicate `constants:` line"));
                }
                let rest = &line.text["constants:".len()..];
                let names: Vec<&str> = rest.split([' ', ',', '\t']).filter(|s| !s.is_empty()).collect();
                for n in &names {
                    if !is_identifier(n) {
                        return Err(line.syntax(n, "constant names must be identifiers"));
                    }
                }
                constants = Some(ConstantSystem::new(names).map_err(|m| line.syntax(line.text, m))?);
            }
            "space" => {
                let name = words.get(1).ok_or_else(|| line.syntax("space", "expected a space name"))?;
                if space.is_some() {
                    return Err(line.syntax("space", "duplicate `space` line"));
                }
                space = Some(name.to_string());
            }
            "chart" => {
                let (name, dim, vars, next) = parse_header(&line, &words)?;
                let bounds = if next < words.len() {
                    Some(parse_bounds(&line, &words[next + 1..])?)
                } else {
                    None
                };
                charts.push(Chart { name, dim, vars, bounds });
            }
            "relation" => {
                let (name, dim, vars, next) = parse_header(&line, &words)?;
                if next < words.len() {
                    return Err(line.syntax(words[next], "relations take no bounds"));
                }
                pending.push(PendingRelation {
                    header: line,
                    name,
                    dim,
                    vars,
                    legs: Vec::new(),
                });
            }
            "leg" => match pending.last_mut() {
                Some(rel) => rel.legs.push(line),
                None => return Err(line.syntax("leg", "`leg` outside a relation")),
            },
            other => return Err(line.syntax(other, format!("unknown directive `{other}`"))),
        }
    }

    let constants = constants.unwrap_or_default();
    let mut relations = Vec::new();
    for rel in &pending {
        if rel.legs.len() != 2 {
            return Err(rel
                .header
                .syntax(&rel.name, format!("relation `{}` needs exactly two legs", rel.name)));
        }
        let left = parse_leg(&rel.legs[0], rel, &charts, &constants)?;
        let right = parse_leg(&rel.legs[1], rel, &charts, &constants)?;
        relations.push(RelationBlock {
            name: rel.name.clone(),
            dim: rel.dim,
            vars: rel.vars.clone(),
            left,
            right,
        });
    }
    let p = Presentation {
        space: space.ok_or(ParseError::Syntax {
            span: SourceSpan { line: 1, column: 1, length: 0 },
            message: "missing `space` line".into(),
        })?,
        constants,
        charts,
        relations,
    };
    let diags = p.validate();
    if !diags.is_empty() {
        return Err(ParseError::Invalid(diags));
    }
    Ok(p)
}
