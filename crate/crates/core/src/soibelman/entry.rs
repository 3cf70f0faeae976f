use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ratfield::{rat, rat_to_f64, rat_to_string, Rat, RatFunc};

/// Scalar entries of truncated operators.
pub trait Entry: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// `None` when the sum is not representable, which only happens for
    /// leading-order entries whose leading terms cancel.
    fn add(&self, other: &Self) -> Option<Self>;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Numeric value; for leading-order entries the `q -> 0` limit.
    fn to_f64(&self) -> f64;
}

impl Entry for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

/// `coefficient * q^exponent * (1 + O(q))`, or an exact zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingOrder {
    pub coefficient: Rat,
    pub exponent: i64,
    pub exact_zero: bool,
}

impl LeadingOrder {
    pub fn new(coefficient: Rat, exponent: i64) -> Self {
        if coefficient.is_zero() {
            return <Self as Entry>::zero();
        }
        LeadingOrder { coefficient, exponent, exact_zero: false }
    }

    pub fn monomial(exponent: i64) -> Self {
        LeadingOrder::new(Rat::one(), exponent)
    }

    pub fn from_ratfunc(f: &RatFunc) -> Self {
        match f.leading_term() {
            Some((c, e)) => LeadingOrder::new(c, e),
            None => <Self as Entry>::zero(),
        }
    }

    /// Value at `q = 0`; a negative exponent has no limit.
    pub fn limit(&self) -> Result<Rat> {
        if self.exact_zero || self.exponent > 0 {
            Ok(Rat::zero())
        } else if self.exponent == 0 {
            Ok(self.coefficient.clone())
        } else {
            Err(Error::NegativeExponent(self.exponent))
        }
    }
}

impl fmt::Display for LeadingOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact_zero {
            return f.write_str("0");
        }
        write!(f, "{}*q^{}", rat_to_string(&self.coefficient), self.exponent)
    }
}

impl Entry for LeadingOrder {
    fn zero() -> Self {
        LeadingOrder { coefficient: Rat::zero(), exponent: 0, exact_zero: true }
    }
    fn one() -> Self {
        LeadingOrder::monomial(0)
    }
    fn is_zero(&self) -> bool {
        self.exact_zero
    }
    fn add(&self, other: &Self) -> Option<Self> {
        if self.exact_zero {
            return Some(other.clone());
        }
        if other.exact_zero {
            return Some(self.clone());
        }
        match self.exponent.cmp(&other.exponent) {
            std::cmp::Ordering::Less => Some(self.clone()),
            std::cmp::Ordering::Greater => Some(other.clone()),
            std::cmp::Ordering::Equal => {
                let c = &self.coefficient + &other.coefficient;
                (!c.is_zero()).then(|| LeadingOrder::new(c, self.exponent))
            }
        }
    }
    fn mul(&self, other: &Self) -> Self {
        if self.exact_zero || other.exact_zero {
            return <Self as Entry>::zero();
        }
        LeadingOrder::new(&self.coefficient * &other.coefficient, self.exponent + other.exponent)
    }
    fn neg(&self) -> Self {
        if self.exact_zero {
            return self.clone();
        }
        LeadingOrder::new(-&self.coefficient, self.exponent)
    }
    fn to_f64(&self) -> f64 {
        match self.limit() {
            Ok(r) => rat_to_f64(&r),
            Err(_) => f64::INFINITY,
        }
    }
}

/// Exact element of `Q(sqrt r_1, sqrt r_2, ...)`: a rational combination of
/// products of square roots of distinct positive rationals.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Surd {
    /// Sorted, duplicate-free radicand lists mapped to nonzero coefficients.
    terms: BTreeMap<Vec<Rat>, Rat>,
}

fn rat_sqrt(r: &Rat) -> Option<Rat> {
    let root = |x: &BigInt| {
        let s = x.sqrt();
        (&s * &s == *x).then_some(s)
    };
    if r.is_negative() {
        return None;
    }
    Some(Rat::new(root(r.numer())?, root(r.denom())?))
}

impl Surd {
    pub fn from_rat(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Surd { terms }
    }

    /// `sqrt(r)` for `r >= 0`, folded to a rational when `r` is a square.
    pub fn sqrt(r: Rat) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::Invalid(format!("square root of {}", rat_to_string(&r))));
        }
        if let Some(s) = rat_sqrt(&r) {
            return Ok(Surd::from_rat(s));
        }
        let mut terms = BTreeMap::new();
        terms.insert(vec![r], Rat::one());
        Ok(Surd { terms })
    }

    /// The rational value, if no square roots remain.
    pub fn as_rat(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    fn insert(&mut self, key: Vec<Rat>, c: Rat) {
        let slot = self.terms.entry(key).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }
}

impl Entry for Surd {
    fn zero() -> Self {
        Surd::default()
    }
    fn one() -> Self {
        Surd::from_rat(Rat::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Option<Self> {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert(k.clone(), c.clone());
        }
        Some(out)
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = Surd::default();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let mut c = ca * cb;
                let mut key = Vec::with_capacity(ka.len() + kb.len());
                let (mut i, mut j) = (0, 0);
                while i < ka.len() || j < kb.len() {
                    match (ka.get(i), kb.get(j)) {
                        (Some(a), Some(b)) if a == b => {
                            c *= a;
                            i += 1;
                            j += 1;
                        }
                        (Some(a), Some(b)) if a < b => {
                            key.push(a.clone());
                            i += 1;
                        }
                        (Some(a), None) => {
                            key.push(a.clone());
                            i += 1;
                        }
                        (_, Some(b)) => {
                            key.push(b.clone());
                            j += 1;
                        }
                        (None, None) => unreachable!(),
                    }
                }
                out.insert(key, c);
            }
        }
        out
    }
    fn neg(&self) -> Self {
        Surd { terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect() }
    }
    fn to_f64(&self) -> f64 {
        self.terms.iter().map(|(k, c)| rat_to_f64(c) * k.iter().map(|r| rat_to_f64(r).sqrt()).product::<f64>()).sum()
    }
}

/// Source of the scalars an operator needs at a given `q`.
pub trait Field {
    type E: Entry;
    fn from_rat(&self, c: &Rat) -> Self::E;
    fn q_pow(&self, e: i64) -> Self::E;
    /// `sqrt(1 - q^{2k})`, `k >= 0`.
    fn sqrt_one_minus_q2(&self, k: i64) -> Self::E;
    /// Substitutes `q` into a coefficient; errors on a pole.
    fn specialize(&self, f: &RatFunc) -> Result<Self::E>;
    fn describe(&self) -> String;
}

/// Double precision at a fixed `q`.
#[derive(Clone, Copy, Debug)]
pub struct FloatAt(pub f64);

/// Exact arithmetic with square roots at a rational `q`.
#[derive(Clone, Debug)]
pub struct ExactAt(pub Rat);

/// Leading order as `q -> 0`.
#[derive(Clone, Copy, Debug)]
pub struct Leading;

impl Field for FloatAt {
    type E = f64;
    fn from_rat(&self, c: &Rat) -> f64 {
        rat_to_f64(c)
    }
    fn q_pow(&self, e: i64) -> f64 {
        self.0.powi(e as i32)
    }
    fn sqrt_one_minus_q2(&self, k: i64) -> f64 {
        (1.0 - self.0.powi(2 * k as i32)).sqrt()
    }
    fn specialize(&self, f: &RatFunc) -> Result<f64> {
        if f.den().eval_f64(self.0) == 0.0 {
            return Err(Error::PoleAt(self.0.to_string()));
        }
        Ok(f.eval_f64(self.0))
    }
    fn describe(&self) -> String {
        format!("float q={}", self.0)
    }
}

impl Field for ExactAt {
    type E = Surd;
    fn from_rat(&self, c: &Rat) -> Surd {
        Surd::from_rat(c.clone())
    }
    fn q_pow(&self, e: i64) -> Surd {
        Surd::from_rat(num_traits::pow::Pow::pow(&self.0, e as i32))
    }
    fn sqrt_one_minus_q2(&self, k: i64) -> Surd {
        let r = Rat::one() - num_traits::pow::Pow::pow(&self.0, 2 * k as i32);
        Surd::sqrt(r).expect("0 < q < 1")
    }
    fn specialize(&self, f: &RatFunc) -> Result<Surd> {
        Ok(Surd::from_rat(f.eval_at(&self.0)?))
    }
    fn describe(&self) -> String {
        format!("exact q={}", rat_to_string(&self.0))
    }
}

impl Field for Leading {
    type E = LeadingOrder;
    fn from_rat(&self, c: &Rat) -> LeadingOrder {
        LeadingOrder::new(c.clone(), 0)
    }
    fn q_pow(&self, e: i64) -> LeadingOrder {
        LeadingOrder::monomial(e)
    }
    fn sqrt_one_minus_q2(&self, k: i64) -> LeadingOrder {
        if k == 0 {
            <LeadingOrder as Entry>::zero()
        } else {
            LeadingOrder::monomial(0)
        }
    }
    fn specialize(&self, f: &RatFunc) -> Result<LeadingOrder> {
        Ok(LeadingOrder::from_ratfunc(f))
    }
    fn describe(&self) -> String {
        "leading order".into()
    }
}

/// Closest rational with denominator at most `max_den`, if within `tol`.
pub fn recognize_rational(x: f64, max_den: i64, tol: f64) -> Option<Rat> {
    (1..=max_den).find_map(|d| {
        let n = (x * d as f64).round();
        ((x - n / d as f64).abs() <= tol).then(|| rat(n as i64, d))
    })
}
