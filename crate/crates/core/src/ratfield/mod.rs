//! Exact scalars: rationals, polynomials in `t`, and the field Q(t) with its
//! valuation at zero and the local ring A0 = { f/g : g(0) != 0 }.

mod poly;
mod ratfunc;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

pub use poly::Poly;
pub use ratfunc::{RatFunc, Valuation};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rat = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `"num/den"`, or just `"num"` for integers.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Serde adapter writing a [`Rat`] as a `"num/den"` string.
pub struct RatStr<'a>(pub &'a Rat);

impl Serialize for RatStr<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom()))
    }
}

/// Serde adapter writing a [`Poly`] as its coefficient array, lowest degree first.
pub struct PolyCoeffs<'a>(pub &'a Poly);

impl Serialize for PolyCoeffs<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.coeffs().iter().map(RatStr))
    }
}

impl Serialize for RatFunc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RatFunc", 2)?;
        st.serialize_field("num", &PolyCoeffs(self.num()))?;
        st.serialize_field("den", &PolyCoeffs(self.den()))?;
        st.end()
    }
}

/// Minimal ring interface shared by every coefficient domain in the crate:
/// Q(t) for the generic algebra, Q for specializations at rational `q`,
/// `f64` for numeric operators and leading-order bookkeeping for `q -> 0`.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` for zero (or when not representable).
    fn inv(&self) -> Option<Self>;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn from_i64(c: i64) -> Self {
        let mut acc = Self::zero();
        let unit = if c < 0 { Self::one().neg() } else { Self::one() };
        for _ in 0..c.unsigned_abs() {
            acc = acc.add(&unit);
        }
        acc
    }
}

impl Coeff for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self.add_ref(other)
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul_ref(other)
    }
    fn neg(&self) -> Self {
        self.neg_ref()
    }
    fn inv(&self) -> Option<Self> {
        RatFunc::inv(self).ok()
    }
    fn from_i64(c: i64) -> Self {
        RatFunc::from_int(c)
    }
}

impl Coeff for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn from_i64(c: i64) -> Self {
        Rat::from_integer(c.into())
    }
}

impl Coeff for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        (*self != 0.0).then(|| 1.0 / self)
    }
    fn from_i64(c: i64) -> Self {
        c as f64
    }
}

/// Balanced quantum integer `[k] = (t^k - t^-k) / (t - t^-1)`.
pub fn q_int(k: i64) -> RatFunc {
    // [k] = sign(k) * sum_{j=0}^{|k|-1} t^{|k|-1-2j}
    let m = k.unsigned_abs() as i64;
    let terms: Vec<(i64, i64)> = (0..m).map(|j| (m - 1 - 2 * j, k.signum())).collect();
    RatFunc::laurent(&terms)
}

/// `[k]! = [1][2]...[k]`
pub fn q_factorial(k: u32) -> RatFunc {
    (1..=k as i64).fold(RatFunc::one(), |acc, j| acc.mul_ref(&q_int(j)))
}

/// Gaussian binomial `[n choose k]` with balanced q-integers; zero when
/// `k < 0` or `k > n`.
pub fn q_binomial(n: i64, k: i64) -> RatFunc {
    if k < 0 || n < 0 || k > n {
        return RatFunc::zero();
    }
    let mut acc = RatFunc::one();
    for j in 0..k {
        acc = acc.mul_ref(&q_int(n - j));
        acc = acc.div_ref(&q_int(j + 1)).expect("nonzero q-integer");
    }
    acc
}

/// Sign helper for `(-t)^k`.
pub fn minus_t_pow(k: i64) -> RatFunc {
    let p = RatFunc::t_pow(k);
    if k.rem_euclid(2) == 1 {
        p.neg_ref()
    } else {
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> RatFunc {
        RatFunc::t()
    }

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    fn rf(num: &[i64], den: &[i64]) -> RatFunc {
        RatFunc::new(p(num), p(den)).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        // t/(1+t) + 1/(1+t) = 1
        assert_eq!(rf(&[0, 1], &[1, 1]) + rf(&[1], &[1, 1]), RatFunc::one());
        // (1/t) * t^2 = t
        assert_eq!(RatFunc::t_pow(-1) * RatFunc::t_pow(2), t());
        // ((1-t)/(1+t)) / (1-t) = 1/(1+t)
        let q = rf(&[1, -1], &[1, 1]).div_ref(&rf(&[1, -1], &[1])).unwrap();
        assert_eq!(q, rf(&[1], &[1, 1]));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(RatFunc::one().div_ref(&RatFunc::zero()), Err(Error::DivisionByZero)));
        assert!(RatFunc::new(p(&[1]), Poly::zero()).is_err());
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(rf(&[0, 0, 1], &[1, 1]).valuation(), Valuation::Finite(2));
        assert_eq!(RatFunc::t_pow(-1).valuation(), Valuation::Finite(-1));
        assert_eq!(RatFunc::zero().valuation(), Valuation::Infinite);
    }

    #[test]
    fn a0_membership_examples() {
        assert!(rf(&[1], &[1, -1]).is_in_a0());
        assert!(!RatFunc::t_pow(-1).is_in_a0());
        assert!(RatFunc::t_pow(3).is_in_a0());
    }

    #[test]
    fn limit_examples() {
        assert_eq!(rf(&[1, 1], &[1, -1]).limit_t0().unwrap(), rat(1, 1));
        assert_eq!(rf(&[0, 1], &[1, 1]).limit_t0().unwrap(), rat(0, 1));
        assert!(matches!(RatFunc::t_pow(-1).limit_t0(), Err(Error::NotInA0 { valuation: -1 })));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(RatFunc::t_pow(2).eval_at(&rat(1, 2)).unwrap(), rat(1, 4));
        assert_eq!(rf(&[1], &[1, -1]).eval_at(&rat(1, 2)).unwrap(), rat(2, 1));
        assert!(matches!(rf(&[1], &[1, -1]).eval_at(&rat(1, 1)), Err(Error::PoleAt(_))));
    }

    #[test]
    fn canonical_zero_and_laurent_detection() {
        let z = rf(&[1, 1], &[1, 2]) - rf(&[1, 1], &[1, 2]);
        assert_eq!(z.num(), &Poly::zero());
        assert_eq!(z.den(), &Poly::one());
        assert!(RatFunc::t_pow(-3).is_laurent());
        assert!(!rf(&[1], &[1, 1]).is_laurent());
    }

    #[test]
    fn quantum_integers() {
        assert_eq!(q_int(1), RatFunc::one());
        assert_eq!(q_int(2), RatFunc::laurent(&[(1, 1), (-1, 1)]));
        let lhs = q_int(3) * (t() - RatFunc::t_pow(-1));
        assert_eq!(lhs, RatFunc::t_pow(3) - RatFunc::t_pow(-3));
        assert_eq!(q_binomial(2, 1), q_int(2));
        assert_eq!(q_binomial(4, 2), q_int(4) * q_int(3) * q_int(2).inv().unwrap());
        assert!(q_binomial(2, 3).is_zero());
    }

    #[test]
    fn serialization_formats() {
        let f = rf(&[1, 2], &[3, 1]);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"num":["1/1","2/1"],"den":["3/1","1/1"]}"#);
        assert_eq!(rat_to_string(&rat(-3, 6)), "-1/2");
        assert_eq!(parse_rat("-1/2").unwrap(), rat(-1, 2));
        assert_eq!(parse_rat(" 7 ").unwrap(), rat(7, 1));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }
}
