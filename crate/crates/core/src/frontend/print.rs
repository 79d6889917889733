//! Canonical surface syntax for scalars, forms and presentations. Every
//! printed string parses back to an equal value.

use num_traits::{One, Signed, Zero};

use crate::presentation::Presentation;
use crate::scalars::{Cyclotomic, Monomial, Poly, Rational, Scalar, ScalarExponent};
use crate::trigform::{AffineMap, FrequencyVector, TermKey, TrigForm};

/// `c1*name1 + c2*name2 - ...`; an empty name is the constant term and a
/// leading `1*` is elided.
fn signed_sum(parts: &[(Rational, String)]) -> String {
    let mut out = String::new();
    for (idx, (c, name)) in parts.iter().enumerate() {
        let mag = c.abs();
        out.push_str(match (idx, c.is_negative()) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        });
        if name.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(name);
        } else {
            out.push_str(&format!("{mag}*{name}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn root_of_unity(j: usize, order: u32) -> String {
    if order == 4 && j == 1 {
        return "i".into();
    }
    let q = Rational::new((j as i64).into(), (order as i64).into());
    format!("exp(2*pi*i*({q}))")
}

fn cyclotomic_parts(c: &Cyclotomic) -> Vec<(Rational, String)> {
    c.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, q)| !q.is_zero())
        .map(|(j, q)| (q.clone(), if j == 0 { String::new() } else { root_of_unity(j, c.order()) }))
        .collect()
}

fn power(base: &str, k: i64) -> String {
    if k == 1 {
        base.to_string()
    } else {
        format!("{base}^{k}")
    }
}

/// Multiplicative factors of a monomial as `num` and `den` strings.
fn monomial_factors(m: &Monomial) -> (Vec<String>, Vec<String>) {
    let mut num = Vec::new();
    let mut den = Vec::new();
    let mut push = |base: &str, k: i64| match k.cmp(&0) {
        std::cmp::Ordering::Greater => num.push(power(base, k)),
        std::cmp::Ordering::Less => den.push(power(base, -k)),
        std::cmp::Ordering::Equal => {}
    };
    push("pi", m.pi_power());
    for (name, k) in m.powers() {
        push(name, *k);
    }
    if !m.phase().is_zero() {
        num.push(format!("exp(2*pi*i*({}))", m.phase()));
    }
    (num, den)
}

fn join_factors(num: &[String], den: &[String]) -> String {
    let mut s = num.join("*");
    for d in den {
        if s.is_empty() {
            s.push('1');
        }
        s.push('/');
        s.push_str(d);
    }
    s
}

fn poly_parts(p: &Poly) -> Vec<(Rational, String)> {
    let mut parts = Vec::new();
    for (m, c) in p.terms() {
        let (num, den) = monomial_factors(m);
        let name = join_factors(&num, &den);
        match c.as_rational() {
            Some(q) => parts.push((q.clone(), name)),
            None => {
                let inner = format!("({})", signed_sum(&cyclotomic_parts(c)));
                let full = if name.is_empty() { inner } else { format!("{inner}*{name}") };
                parts.push((Rational::one(), full));
            }
        }
    }
    parts
}

pub fn print_scalar(s: &Scalar) -> String {
    let num = signed_sum(&poly_parts(s.numerator()));
    if s.denominator().is_one() {
        num
    } else {
        format!("({num})/({})", signed_sum(&poly_parts(s.denominator())))
    }
}

/// A scalar as `q * factors` when it is a single term with rational
/// coefficient; otherwise a parenthesized factor with coefficient 1.
fn scalar_coefficient(s: &Scalar) -> (Rational, String) {
    let parts = if s.denominator().is_one() { poly_parts(s.numerator()) } else { vec![] };
    match parts.as_slice() {
        [(q, name)] => (q.clone(), name.clone()),
        _ => (Rational::one(), format!("({})", print_scalar(s))),
    }
}

fn frequency_string(freq: &FrequencyVector, vars: &[String]) -> Option<String> {
    let parts: Vec<(Rational, String)> = freq
        .0
        .iter()
        .zip(vars)
        .filter(|(nu, _)| !nu.is_zero())
        .map(|(nu, v)| {
            if nu.is_rational() {
                (nu.rational_part().clone(), v.clone())
            } else {
                (Rational::one(), format!("({nu})*{v}"))
            }
        })
        .collect();
    (!parts.is_empty()).then(|| format!("exp(2*pi*i*({}))", signed_sum(&parts)))
}

fn term_name(idx: &[usize], key: &TermKey, vars: &[String]) -> String {
    let mut factors: Vec<String> = key
        .exps
        .iter()
        .zip(vars)
        .filter(|(e, _)| **e > 0)
        .map(|(e, v)| power(v, *e as i64))
        .collect();
    factors.extend(frequency_string(&key.freq, vars));
    let mut s = factors.join("*");
    let dx: Vec<String> = idx.iter().map(|&i| format!("d{}", vars[i])).collect();
    if !dx.is_empty() {
        if !s.is_empty() {
            s.push('*');
        }
        s.push_str(&dx.join(" /\\ "));
    }
    s
}

/// Canonical text of a form, naming chart variables by `vars`.
pub fn print_form(w: &TrigForm, vars: &[String]) -> String {
    let parts: Vec<(Rational, String)> = w
        .terms()
        .map(|(idx, key, c)| {
            let name = term_name(idx, key, vars);
            let (q, coef) = scalar_coefficient(c);
            let full = match (coef.is_empty(), name.is_empty()) {
                (true, _) => name,
                (false, true) => coef,
                (false, false) => format!("{coef}*{name}"),
            };
            (q, full)
        })
        .collect();
    signed_sum(&parts)
}

fn affine_component(map: &AffineMap, row: usize, vars: &[String]) -> String {
    let mut parts: Vec<(Rational, String)> = map.linear()[row]
        .iter()
        .zip(vars)
        .filter(|(a, _)| !a.is_zero())
        .map(|(a, v)| (a.clone(), v.clone()))
        .collect();
    let b: &ScalarExponent = &map.translation()[row];
    if !b.rational_part().is_zero() {
        parts.push((b.rational_part().clone(), String::new()));
    }
    for (name, q) in b.linear_part() {
        parts.push((q.clone(), name.clone()));
    }
    signed_sum(&parts)
}

/// Serializes a presentation in `.dpr` syntax.
pub fn print_presentation(p: &Presentation) -> String {
    let mut out = String::new();
    out.push_str("constants:");
    for c in p.constants.names() {
        out.push(' ');
        out.push_str(c);
    }
    out.push('\n');
    out.push_str(&format!("space {}\n", p.space));
    for c in &p.charts {
        out.push_str(&format!("chart {} dim {} vars {}", c.name, c.dim, c.vars.join(" ")));
        if let Some(bounds) = &c.bounds {
            out.push_str(" bounds");
            for (lo, hi) in bounds {
                out.push_str(&format!(" {lo}..{hi}"));
            }
        }
        out.push('\n');
    }
    for r in &p.relations {
        out.push_str(&format!("relation {} dim {} vars {}\n", r.name, r.dim, r.vars.join(" ")));
        let width = r.left.chart.len().max(r.right.chart.len());
        for leg in [&r.left, &r.right] {
            let comps: Vec<String> = (0..leg.map.target_dim())
                .map(|row| affine_component(&leg.map, row, &r.vars))
                .collect();
            out.push_str(&format!("  leg {:<width$} : {}\n", leg.chart, comps.join(", ")));
        }
    }
    out
}
