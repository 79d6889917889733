use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::cyclo::Cyclotomic;
use super::exponent::ScalarExponent;
use super::ring::{Monomial, Poly};
use super::{Rational, ScalarError};

/// Element of the coefficient field: a fraction of Laurent polynomials over
/// a cyclotomic base in the symbols `pi`, the declared constants and phase
/// symbols.
///
/// Normal form: the denominator is nonzero; single-term denominators are
/// absorbed into the numerator (monomials are units); otherwise the
/// denominator has leading term `1` and exact common factors are divided out
/// when long division finds them.
#[derive(Clone, Debug)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        Scalar {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn from_cyclotomic(c: Cyclotomic) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::from_cyclotomic(Cyclotomic::from_rational(q))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_cyclotomic(Cyclotomic::from_int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::from_rational(Rational::new(n.into(), d.into()))
    }

    pub fn i() -> Self {
        Self::from_cyclotomic(Cyclotomic::i())
    }

    pub fn pi() -> Self {
        Self::from_poly(Poly::term(Cyclotomic::one(), Monomial::pi()))
    }

    /// A declared constant as a real scalar.
    pub fn constant(name: &str) -> Self {
        Self::from_poly(Poly::term(Cyclotomic::one(), Monomial::constant(name)))
    }

    /// `<phi> = exp(2 pi i phi)`. Rational phases reduce to roots of unity.
    pub fn phase(phi: &ScalarExponent) -> Self {
        let root = Cyclotomic::root_of_unity(phi.rational_part());
        Self::from_poly(Poly::term(root, Monomial::phase_symbol(phi.without_rational())))
    }

    /// The real scalar `q + sum q_j c_j + sum q_jk c_j c_k` named by an exponent.
    pub fn from_exponent(e: &ScalarExponent) -> Self {
        let mut out = Self::from_rational(e.rational_part().clone());
        for (name, q) in e.linear_part() {
            out = out + Self::constant(name) * Self::from_rational(q.clone());
        }
        for ((a, b), q) in e.quadratic_part() {
            out = out + Self::constant(a) * Self::constant(b) * Self::from_rational(q.clone());
        }
        out
    }

    /// Inverse of [`Scalar::from_exponent`]: succeeds when the value is a
    /// rational polynomial of degree at most two in the constants.
    pub fn to_exponent(&self) -> Option<ScalarExponent> {
        if !self.den.is_one() {
            return None;
        }
        let mut out = ScalarExponent::zero();
        for (m, c) in self.num.terms() {
            let q = c.as_rational()?;
            if m.pi_power() != 0 || !m.phase().is_zero() {
                return None;
            }
            let mut names = Vec::new();
            for (name, p) in m.powers() {
                if *p < 0 {
                    return None;
                }
                for _ in 0..*p {
                    names.push(name.as_str());
                }
            }
            let term = match names.as_slice() {
                [] => ScalarExponent::rational(q.clone()),
                [a] => ScalarExponent::constant(a).scale(q),
                [a, b] => ScalarExponent::constant_product(a, b).scale(q),
                _ => return None,
            };
            out = out.add(&term);
        }
        Some(out)
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// Complexity used for pivot choice: fewer terms first.
    pub fn weight(&self) -> usize {
        self.num.weight() + if self.den.is_one() { 0 } else { self.den.weight() }
    }

    /// The value as a rational number, if it is one.
    pub fn as_rational(&self) -> Option<Rational> {
        if !self.den.is_one() {
            return None;
        }
        if self.num.is_zero() {
            return Some(Rational::zero());
        }
        let (m, c) = self.num.single_term()?;
        if m.is_one() {
            c.as_rational().cloned()
        } else {
            None
        }
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "scalar with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        if let Some((m, c)) = den.single_term() {
            let c_inv = c.inv().expect("nonzero coefficient");
            return Scalar {
                num: num.mul_term(&m.inv(), &c_inv),
                den: Poly::one(),
            };
        }
        let (lm, lc) = den.leading().expect("nonzero denominator");
        let (lm_inv, lc_inv) = (lm.inv(), lc.inv().expect("nonzero coefficient"));
        let num = num.mul_term(&lm_inv, &lc_inv);
        let den = den.mul_term(&lm_inv, &lc_inv);
        if let Some(q) = num.div_exact(&den) {
            return Scalar {
                num: q,
                den: Poly::one(),
            };
        }
        if num.len() == 1 {
            return Scalar { num, den };
        }
        if let Some(q) = den.div_exact(&num) {
            // num/den = 1/q
            return Self::normalized(Poly::one(), q);
        }
        Scalar { num, den }
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, ScalarError> {
        Ok(self * &other.inv()?)
    }

    pub fn conj(&self) -> Self {
        Self::normalized(self.num.conj(), self.den.conj())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Scalar::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Re-normalizes; the identity on values already in normal form.
    pub fn normalize(&self) -> Self {
        Self::normalized(self.num.clone(), self.den.clone())
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        let rhs_num = if negate { other.num.neg() } else { other.num.clone() };
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return Scalar {
                num: rhs_num,
                den: other.den.clone(),
            };
        }
        if self.den == other.den {
            return Self::normalized(self.num.add(&rhs_num), self.den.clone());
        }
        let num = self.num.mul(&other.den).add(&rhs_num.mul(&self.den));
        Self::normalized(num, self.den.mul(&other.den))
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return Scalar {
                num: self.num.mul(&other.num),
                den: Poly::one(),
            };
        }
        Self::normalized(self.num.mul(&other.num), self.den.mul(&other.den))
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for Scalar {}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.add_impl(rhs, false)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.add_impl(rhs, true)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.mul_impl(rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::frontend::print_scalar(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> ScalarExponent {
        ScalarExponent::constant("a")
    }

    #[test]
    fn half_phase_plus_one_vanishes() {
        let x = Scalar::phase(&ScalarExponent::rational(Rational::new(1.into(), 2.into())));
        assert!((x + Scalar::one()).is_zero());
    }

    #[test]
    fn cube_roots_of_unity_sum() {
        let third = |k: i64| Scalar::phase(&ScalarExponent::rational(Rational::new(k.into(), 3.into())));
        assert!((third(1) + third(2) + Scalar::one()).is_zero());
    }

    #[test]
    fn irrational_phase_group_law() {
        let p = Scalar::phase(&a());
        let q = Scalar::phase(&a().neg());
        assert_eq!(&p * &q, Scalar::one());
        assert!(!(p - Scalar::one()).is_zero());
    }

    #[test]
    fn quarter_phase_is_i() {
        let x = Scalar::phase(&ScalarExponent::rational(Rational::new(1.into(), 4.into())));
        assert_eq!(x, Scalar::i());
    }

    #[test]
    fn fractions_cancel() {
        let p = Scalar::phase(&a());
        let num = &p * &p - Scalar::one();
        let den = &p - &Scalar::one();
        let q = num.try_div(&den).unwrap();
        assert_eq!(q, &p + &Scalar::one());
        assert!(q.denominator().is_one());
        let back = den.try_div(&num).unwrap();
        assert_eq!(&back * &(&p + &Scalar::one()), Scalar::one());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(Scalar::one().try_div(&Scalar::zero()), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn exponent_round_trip() {
        let e = ScalarExponent::from_int(3).add(&a().scale(&Rational::new(1.into(), 2.into())));
        let e = e.add(&ScalarExponent::constant_product("a", "a"));
        assert_eq!(Scalar::from_exponent(&e).to_exponent(), Some(e));
        assert_eq!(Scalar::pi().to_exponent(), None);
    }
}
