use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{Poly, Rat};
use crate::error::{Error, Result};

/// Element of Q(t) in lowest terms with a monic denominator.
///
/// Zero is stored as `0/1`. Laurent polynomials (elements of Q[t, 1/t])
/// have a denominator of the form `t^k` and take cheaper arithmetic paths.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

/// Valuation at `t = 0`; `Infinite` only for the zero function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFunc { num: Poly::one(), den: Poly::one() }
    }

    /// The indeterminate `t`.
    pub fn t() -> Self {
        RatFunc::t_pow(1)
    }

    /// `t^k` for any integer `k`.
    pub fn t_pow(k: i64) -> Self {
        if k >= 0 {
            RatFunc { num: Poly::monomial(Rat::one(), k as usize), den: Poly::one() }
        } else {
            RatFunc { num: Poly::one(), den: Poly::monomial(Rat::one(), (-k) as usize) }
        }
    }

    pub fn from_rat(c: Rat) -> Self {
        RatFunc { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_int(c: i64) -> Self {
        RatFunc::from_rat(Rat::from_integer(c.into()))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    /// Laurent polynomial `sum c * t^e` from `(e, c)` pairs.
    pub fn laurent(terms: &[(i64, i64)]) -> Self {
        terms.iter().fold(RatFunc::zero(), |acc, &(e, c)| {
            acc.add_ref(&RatFunc::t_pow(e).scale(&Rat::from_integer(c.into())))
        })
    }

    /// Build `num/den` and reduce to canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        let (num, den) = if den.is_monic_monomial() {
            let k = num.ord0().unwrap().min(den.degree().unwrap());
            (num.shift_down(k), den.shift_down(k))
        } else {
            let g = num.gcd(&den);
            (num.div_exact(&g), den.div_exact(&g))
        };
        let lead = den.leading().unwrap().clone();
        if lead.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lead.recip();
            RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Denominator is a power of `t`.
    pub fn is_laurent(&self) -> bool {
        self.den.is_monic_monomial()
    }

    pub fn as_rat(&self) -> Option<Rat> {
        if self.den.is_one() && self.num.degree().unwrap_or(0) == 0 {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn valuation(&self) -> Valuation {
        match self.num.ord0() {
            None => Valuation::Infinite,
            Some(a) => Valuation::Finite(a as i64 - self.den.ord0().unwrap() as i64),
        }
    }

    pub fn is_in_a0(&self) -> bool {
        self.valuation() >= Valuation::Finite(0)
    }

    /// Member of `1 + t A0`.
    pub fn is_one_mod_t(&self) -> bool {
        self.is_in_a0() && self.limit_t0().is_ok_and(|v| v.is_one())
    }

    /// Unit of A0: valuation exactly zero.
    pub fn is_a0_unit(&self) -> bool {
        self.valuation() == Valuation::Finite(0)
    }

    /// Value at `t = 0` of an element of A0.
    pub fn limit_t0(&self) -> Result<Rat> {
        match self.valuation() {
            Valuation::Infinite => Ok(Rat::zero()),
            Valuation::Finite(v) if v > 0 => Ok(Rat::zero()),
            Valuation::Finite(0) => Ok(self.num.coeff(0) / self.den.coeff(0)),
            Valuation::Finite(v) => Err(Error::NotInA0 { valuation: v }),
        }
    }

    /// Leading Laurent term at zero: `(c, v)` with `self = c t^v (1 + O(t))`.
    pub fn leading_term(&self) -> Option<(Rat, i64)> {
        let v = self.valuation().finite()?;
        let a = self.num.ord0().unwrap();
        let b = self.den.ord0().unwrap();
        Some((self.num.coeff(a) / self.den.coeff(b), v))
    }

    pub fn eval_at(&self, q: &Rat) -> Result<Rat> {
        let d = self.den.eval(q);
        if d.is_zero() {
            return Err(Error::PoleAt(super::rat_to_string(q)));
        }
        Ok(self.num.eval(q) / d)
    }

    pub fn eval_f64(&self, q: f64) -> f64 {
        self.num.eval_f64(q) / self.den.eval_f64(q)
    }

    pub fn scale(&self, c: &Rat) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn neg_ref(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add_ref(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return RatFunc::reduce(self.num.add(&other.num), self.den.clone());
        }
        if self.is_laurent() && other.is_laurent() {
            let da = self.den.degree().unwrap();
            let db = other.den.degree().unwrap();
            let d = da.max(db);
            let num = self.num.shift_up(d - da).add(&other.num.shift_up(d - db));
            return RatFunc::reduce(num, Poly::monomial(Rat::one(), d));
        }
        let g = self.den.gcd(&other.den);
        let a_cof = other.den.div_exact(&g);
        let b_cof = self.den.div_exact(&g);
        let num = self.num.mul(&a_cof).add(&other.num.mul(&b_cof));
        RatFunc::reduce(num, self.den.mul(&a_cof))
    }

    pub fn sub_ref(&self, other: &RatFunc) -> RatFunc {
        self.add_ref(&other.neg_ref())
    }

    pub fn mul_ref(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFunc { num: self.num.mul(&other.num), den: Poly::one() };
        }
        if self.is_laurent() && other.is_laurent() {
            return RatFunc::reduce(self.num.mul(&other.num), self.den.mul(&other.den));
        }
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let num = self.num.div_exact(&g1).mul(&other.num.div_exact(&g2));
        let den = self.den.div_exact(&g2).mul(&other.den.div_exact(&g1));
        RatFunc::reduce(num, den)
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn div_ref(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul_ref(&other.inv()?))
    }

    pub fn pow(&self, k: i64) -> RatFunc {
        let base = if k < 0 { self.inv().expect("negative power of zero") } else { self.clone() };
        let mut acc = RatFunc::one();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul_ref(&base);
        }
        acc
    }
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl From<i64> for RatFunc {
    fn from(c: i64) -> Self {
        RatFunc::from_int(c)
    }
}

impl From<Rat> for RatFunc {
    fn from(c: Rat) -> Self {
        RatFunc::from_rat(c)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: &RatFunc) -> RatFunc {
                self.$inner(rhs)
            }
        }
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: RatFunc) -> RatFunc {
                self.$inner(&rhs)
            }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: &RatFunc) -> RatFunc {
                self.$inner(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Div<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    /// Panics on division by zero; use [`RatFunc::div_ref`] for a checked version.
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.div_ref(rhs).expect("division by zero in Q(t)")
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        self.neg_ref()
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        self.neg_ref()
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::one()
    }
}

impl fmt::Display for RatFunc {
    /// Laurent elements print as a sum of `c*t^e` terms; everything else as
    /// `(num)/(den)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.is_laurent() {
            let shift = self.den.degree().unwrap() as i64;
            let mut first = true;
            for (k, c) in self.num.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let e = k as i64 - shift;
                let neg = num_traits::Signed::is_negative(c);
                let abs = num_traits::Signed::abs(c);
                if first {
                    if neg {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, " {} ", if neg { "-" } else { "+" })?;
                }
                first = false;
                match e {
                    0 => write!(f, "{}", abs)?,
                    _ => {
                        if !abs.is_one() {
                            write!(f, "{}*", abs)?;
                        }
                        if e == 1 {
                            write!(f, "t")?;
                        } else {
                            write!(f, "t^{}", e)?;
                        }
                    }
                }
            }
            return Ok(());
        }
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
