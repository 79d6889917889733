use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::Rational;

/// Declared irrational constants.
///
/// Every equality decision downstream is made relative to the declaration
/// that `{1} ∪ names ∪ {pairwise products}` is linearly independent over
/// the rationals. Nothing here checks that claim: a quadratic irrational
/// such as `sqrt(2)` (whose square is rational) must not be declared.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantSystem {
    names: Vec<String>,
    independent: bool,
}

impl ConstantSystem {
    pub fn new<I, S>(names: I) -> Result<Self, String>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = Vec::new();
        for n in names {
            let n = n.into();
            if n.is_empty() || !n.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(format!("invalid constant name `{n}`"));
            }
            if n == "pi" || n == "i" {
                return Err(format!("`{n}` is reserved and cannot be declared as a constant"));
            }
            if out.contains(&n) {
                return Err(format!("constant `{n}` declared twice"));
            }
            out.push(n);
        }
        Ok(ConstantSystem {
            names: out,
            independent: true,
        })
    }

    pub fn empty() -> Self {
        ConstantSystem {
            names: Vec::new(),
            independent: true,
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names.iter().any(|n| n == name)
    }

    pub fn independence_declared(&self) -> bool {
        self.independent
    }
}

/// An element of `Q ⊕ Q·c_j ⊕ Q·c_j c_k` over the declared constants.
///
/// Used for phase exponents `<phi> = exp(2 pi i phi)`, for frequencies and
/// for the translation parts of affine maps. Zero coefficients are never
/// stored, so derived equality is value equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ScalarExponent {
    rational: Rational,
    linear: BTreeMap<String, Rational>,
    quadratic: BTreeMap<(String, String), Rational>,
}

fn pair(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

fn add_into<K: Ord + Clone>(map: &mut BTreeMap<K, Rational>, key: &K, value: &Rational) {
    if value.is_zero() {
        return;
    }
    let entry = map.entry(key.clone()).or_insert_with(Rational::zero);
    *entry += value;
    if entry.is_zero() {
        map.remove(key);
    }
}

impl ScalarExponent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational(q: Rational) -> Self {
        ScalarExponent {
            rational: q,
            ..Default::default()
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(Rational::from_integer(n.into()))
    }

    pub fn constant(name: &str) -> Self {
        let mut linear = BTreeMap::new();
        linear.insert(name.to_string(), Rational::one());
        ScalarExponent {
            linear,
            ..Default::default()
        }
    }

    pub fn constant_product(a: &str, b: &str) -> Self {
        let mut quadratic = BTreeMap::new();
        quadratic.insert(pair(a, b), Rational::one());
        ScalarExponent {
            quadratic,
            ..Default::default()
        }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rational
    }

    pub fn linear_part(&self) -> &BTreeMap<String, Rational> {
        &self.linear
    }

    pub fn quadratic_part(&self) -> &BTreeMap<(String, String), Rational> {
        &self.quadratic
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.linear.is_empty() && self.quadratic.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.linear.is_empty() && self.quadratic.is_empty()
    }

    pub fn is_at_most_linear(&self) -> bool {
        self.quadratic.is_empty()
    }

    /// The same exponent with its rational part dropped.
    pub fn without_rational(&self) -> Self {
        ScalarExponent {
            rational: Rational::zero(),
            linear: self.linear.clone(),
            quadratic: self.quadratic.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.rational += &other.rational;
        for (k, v) in &other.linear {
            add_into(&mut out.linear, k, v);
        }
        for (k, v) in &other.quadratic {
            add_into(&mut out.quadratic, k, v);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        ScalarExponent {
            rational: &self.rational * q,
            linear: self.linear.iter().map(|(k, v)| (k.clone(), v * q)).collect(),
            quadratic: self.quadratic.iter().map(|(k, v)| (k.clone(), v * q)).collect(),
        }
    }

    /// Product of two exponents; `None` when the result would exceed degree two.
    pub fn mul(&self, other: &Self) -> Option<Self> {
        if (!self.quadratic.is_empty() && !other.is_rational())
            || (!other.quadratic.is_empty() && !self.is_rational())
        {
            return None;
        }
        let mut out = other.scale(&self.rational);
        for (k, v) in &self.linear {
            add_into(&mut out.linear, k, &(v * &other.rational));
        }
        for (k, v) in &self.quadratic {
            add_into(&mut out.quadratic, k, &(v * &other.rational));
        }
        for (a, va) in &self.linear {
            for (b, vb) in &other.linear {
                add_into(&mut out.quadratic, &pair(a, b), &(va * vb));
            }
        }
        Some(out)
    }

    /// Constant names this exponent mentions.
    pub fn constants(&self) -> impl Iterator<Item = &str> {
        self.linear
            .keys()
            .map(String::as_str)
            .chain(self.quadratic.keys().flat_map(|(a, b)| [a.as_str(), b.as_str()]))
    }
}

impl fmt::Display for ScalarExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(Rational, String)> = Vec::new();
        if !self.rational.is_zero() {
            parts.push((self.rational.clone(), String::new()));
        }
        for (k, v) in &self.linear {
            parts.push((v.clone(), k.clone()));
        }
        for ((a, b), v) in &self.quadratic {
            let name = if a == b { format!("{a}^2") } else { format!("{a}*{b}") };
            parts.push((v.clone(), name));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        super::write_linear_combination(f, &parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn group_law_and_canonical_zero() {
        let a = ScalarExponent::constant("a");
        assert!(a.add(&a.neg()).is_zero());
        assert_eq!(a.add(&a.neg()), ScalarExponent::zero());
    }

    #[test]
    fn products_are_quadratic() {
        let x = ScalarExponent::from_int(2).add(&ScalarExponent::constant("a"));
        let y = ScalarExponent::constant("a").scale(&q(1, 2));
        let p = x.mul(&y).unwrap();
        assert_eq!(p.linear_part().get("a"), Some(&q(1, 1)));
        assert_eq!(p.quadratic_part().get(&("a".into(), "a".into())), Some(&q(1, 2)));
        assert!(p.mul(&y).is_none());
        assert_eq!(p.to_string(), "a + 1/2*a^2");
    }

    #[test]
    fn constant_names_are_validated() {
        assert!(ConstantSystem::new(["a", "b"]).is_ok());
        assert!(ConstantSystem::new(["pi"]).is_err());
        assert!(ConstantSystem::new(["a", "a"]).is_err());
        assert!(ConstantSystem::new([""]).is_err());
    }
}
