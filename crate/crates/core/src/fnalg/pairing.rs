use std::collections::HashMap;

use num_traits::{One, ToPrimitive, Zero};

use crate::ratfield::RatFunc;
use crate::repth::Gen;

use super::algebra::FnAlgElem;

/// Integer Laurent polynomial as sorted `(exponent, coefficient)` pairs.
/// Pairing values of monomials against U_t words always have this shape.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
struct Laurent(Vec<(i64, i64)>);

impl Laurent {
    fn monomial(e: i64, c: i64) -> Self {
        if c == 0 {
            Laurent(Vec::new())
        } else {
            Laurent(vec![(e, c)])
        }
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn add_assign(&mut self, other: &Laurent) {
        if other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (0, 0);
        while a < self.0.len() || b < other.0.len() {
            let next = match (self.0.get(a), other.0.get(b)) {
                (Some(&x), Some(&y)) if x.0 == y.0 => {
                    a += 1;
                    b += 1;
                    (x.0, x.1 + y.1)
                }
                (Some(&x), Some(&y)) if x.0 < y.0 => {
                    a += 1;
                    x
                }
                (Some(&x), None) => {
                    a += 1;
                    x
                }
                (_, Some(&y)) => {
                    b += 1;
                    y
                }
                (None, None) => unreachable!(),
            };
            if next.1 != 0 {
                out.push(next);
            }
        }
        self.0 = out;
    }

    fn shift(&self, e: i64) -> Laurent {
        Laurent(self.0.iter().map(|&(k, c)| (k + e, c)).collect())
    }

    fn mul(&self, other: &Laurent) -> Laurent {
        let mut acc = Laurent::default();
        for &(e, c) in &self.0 {
            let part = Laurent(other.0.iter().map(|&(k, d)| (k + e, c * d)).collect());
            acc.add_assign(&part);
        }
        acc
    }

    fn from_ratfunc(x: &RatFunc) -> Option<Laurent> {
        if !x.is_laurent() {
            return None;
        }
        let shift = x.den().degree().unwrap_or(0) as i64;
        let mut out = Vec::new();
        for (k, c) in x.num().coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !c.denom().is_one() {
                return None;
            }
            out.push((k as i64 - shift, c.numer().to_i64()?));
        }
        Some(Laurent(out))
    }

    fn to_ratfunc(&self) -> RatFunc {
        RatFunc::laurent(&self.0)
    }
}

/// Sparse vector in `V^{(x) d}` keyed by 0-based multi-indices.
type Sparse = HashMap<Vec<u8>, Laurent>;

/// Exponent of `t` for `K_i` on the basis vector with 0-based index `b`.
fn k_exponent(i: usize, b: u8) -> i64 {
    let b = b as usize;
    (b + 1 == i) as i64 - (b == i) as i64
}

/// One generator acting on `V^{(x) d}` through the iterated coproduct
/// `E -> sum_p 1..1 E K^-1..K^-1`, `F -> sum_p K..K F 1..1`, `K -> K..K`.
fn act(g: Gen, v: &Sparse) -> Sparse {
    let mut out: Sparse = HashMap::new();
    let mut push = |key: Vec<u8>, val: Laurent| {
        out.entry(key).or_default().add_assign(&val);
    };
    for (idx, val) in v {
        match g {
            Gen::K(i) | Gen::Kinv(i) => {
                let sign = if matches!(g, Gen::K(_)) { 1 } else { -1 };
                let e: i64 = idx.iter().map(|&b| k_exponent(i, b)).sum();
                push(idx.clone(), val.shift(sign * e));
            }
            Gen::E(i) => {
                for p in 0..idx.len() {
                    if idx[p] as usize == i {
                        let e: i64 = idx[p + 1..].iter().map(|&b| -k_exponent(i, b)).sum();
                        let mut key = idx.clone();
                        key[p] -= 1;
                        push(key, val.shift(e));
                    }
                }
            }
            Gen::F(i) => {
                for p in 0..idx.len() {
                    if idx[p] as usize + 1 == i {
                        let e: i64 = idx[..p].iter().map(|&b| k_exponent(i, b)).sum();
                        let mut key = idx.clone();
                        key[p] += 1;
                        push(key, val.shift(e));
                    }
                }
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Evaluates elements of the function algebra on words in the generators
/// of U_t by acting on tensor powers of the vector representation:
/// `<u_{a1 b1} ... u_{ad bd}, x> = (e_a, x e_b)` in `V^{(x) d}`.
///
/// Columns `x e_b` are cached per word, so one oracle can evaluate many
/// elements against the same words cheaply.
#[derive(Default)]
pub struct PairingOracle {
    cache: HashMap<(Vec<Gen>, Vec<u8>), Sparse>,
}

impl PairingOracle {
    pub fn new() -> Self {
        Self::default()
    }

    fn column(&mut self, word: &[Gen], b: &[u8]) -> &Sparse {
        let key = (word.to_vec(), b.to_vec());
        self.cache.entry(key).or_insert_with(|| {
            let mut v: Sparse = HashMap::new();
            v.insert(b.to_vec(), Laurent::monomial(0, 1));
            for &g in word.iter().rev() {
                v = act(g, &v);
                if v.is_empty() {
                    break;
                }
            }
            v
        })
    }

    fn monomial_value(&mut self, word: &[Gen], m: &[(u8, u8)]) -> Laurent {
        let a: Vec<u8> = m.iter().map(|&(i, _)| i - 1).collect();
        let b: Vec<u8> = m.iter().map(|&(_, j)| j - 1).collect();
        self.column(word, &b).get(&a).cloned().unwrap_or_default()
    }

    /// `<u_{i1 j1} ... u_{ik jk}, word>` for a raw, unreduced product.
    pub fn evaluate_word(&mut self, factors: &[(usize, usize)], word: &[Gen]) -> RatFunc {
        let m: Vec<(u8, u8)> = factors.iter().map(|&(i, j)| (i as u8, j as u8)).collect();
        self.monomial_value(word, &m).to_ratfunc()
    }

    /// `<x, g_1 g_2 ... g_k>`.
    pub fn evaluate(&mut self, x: &FnAlgElem, word: &[Gen]) -> RatFunc {
        let mut exact = Laurent::default();
        let mut general = RatFunc::zero();
        for (m, c) in x.terms() {
            let v = self.monomial_value(word, m);
            if v.is_zero() {
                continue;
            }
            match Laurent::from_ratfunc(c) {
                Some(l) => exact.add_assign(&l.mul(&v)),
                None => general = general.add_ref(&c.mul_ref(&v.to_ratfunc())),
            }
        }
        general.add_ref(&exact.to_ratfunc())
    }
}

/// One-shot form of [`PairingOracle::evaluate`].
pub fn evaluate_pairing(x: &FnAlgElem, word: &[Gen]) -> RatFunc {
    PairingOracle::new().evaluate(x, word)
}

/// The words `F_i^a K_j^b E_k^c` with `a, b, c <= max_exp`, deduplicated.
pub fn pbw_words(n: usize, max_exp: usize) -> Vec<Vec<Gen>> {
    let mut out: Vec<Vec<Gen>> = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for a in 0..=max_exp {
                    for b in 0..=max_exp {
                        for c in 0..=max_exp {
                            let mut w = vec![Gen::F(i); a];
                            w.extend(std::iter::repeat_n(Gen::K(j), b));
                            w.extend(std::iter::repeat_n(Gen::E(k), c));
                            if !out.contains(&w) {
                                out.push(w);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}
