use crate::error::{Error, Result};
use crate::ratfield::RatFunc;

use super::algebra::{permutations, Algebra, FnAlgElem};

/// One summand `coeff * g_{i1 j1} ... g_{ik jk}` over the scaled generators
/// `g_ij = t^{min(i-j, 0)} u_ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledTerm {
    pub coeff: RatFunc,
    pub gens: Vec<(u8, u8)>,
    /// For cofactor expansions: `s - r + sum_{j_sigma(k) > i_k} (j_sigma(k) - i_k)`.
    pub audited_exponent: Option<i64>,
}

/// An expression of an element over the scaled generators.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledCertificate {
    pub terms: Vec<ScaledTerm>,
    pub min_valuation: Option<i64>,
}

impl ScaledCertificate {
    pub fn passed(&self) -> bool {
        self.terms.iter().all(|t| t.coeff.is_in_a0() && t.audited_exponent.is_none_or(|e| e >= 0))
    }
}

/// `t^{max(j - i, 0)}`, the factor with `u_ij = t^{max(j-i,0)} g_ij`.
fn unscale(gens: &[(u8, u8)]) -> i64 {
    gens.iter().map(|&(i, j)| (j as i64 - i as i64).max(0)).sum()
}

fn finish(terms: Vec<ScaledTerm>) -> Result<ScaledCertificate> {
    let min_valuation = terms.iter().filter_map(|t| t.coeff.valuation().finite()).min();
    let cert = ScaledCertificate { terms, min_valuation };
    if let Some(bad) = cert.terms.iter().find(|t| !t.coeff.is_in_a0() || t.audited_exponent.is_some_and(|e| e < 0)) {
        return Err(Error::Certificate(format!("term {:?} has coefficient {}", bad.gens, bad.coeff)));
    }
    Ok(cert)
}

/// Rewrites a normal-form element over the scaled generators and checks
/// that every coefficient lies in A0.
pub fn scaled_generation_certificate(x: &FnAlgElem) -> Result<ScaledCertificate> {
    let terms = x
        .terms()
        .map(|(m, c)| ScaledTerm {
            coeff: c.mul_ref(&RatFunc::t_pow(unscale(m))),
            gens: m.clone(),
            audited_exponent: None,
        })
        .collect();
    finish(terms)
}

/// Certificate for `(u_rs)^*` from its cofactor expansion
/// `(-t)^{s-r} sum_sigma (-t)^{l(sigma)} prod_k u_{i_k, j_sigma(k)}`, with the
/// exponent of every term audited, and the expansion checked against the
/// algebra's star.
pub fn star_scaled_certificate(alg: &Algebra, r: usize, s: usize) -> Result<ScaledCertificate> {
    let d = alg.size();
    let rows: Vec<usize> = (1..=d).filter(|&x| x != r).collect();
    let cols: Vec<usize> = (1..=d).filter(|&x| x != s).collect();
    let mut terms = Vec::new();
    let mut rebuilt = FnAlgElem::zero();
    for (sigma, len) in permutations(rows.len()) {
        let gens: Vec<(u8, u8)> = rows.iter().zip(&sigma).map(|(&i, &k)| (i as u8, cols[k] as u8)).collect();
        let shift = unscale(&gens);
        let audited = s as i64 - r as i64 + shift;
        let sign = if (s as i64 - r as i64 + len) % 2 == 0 { 1 } else { -1 };
        let coeff = RatFunc::t_pow(audited + len).mul_ref(&RatFunc::from_int(sign));
        let word: Vec<(usize, usize)> = gens.iter().map(|&(i, j)| (i as usize, j as usize)).collect();
        let back = RatFunc::t_pow(-shift).mul_ref(&coeff);
        rebuilt.add_scaled(&alg.normal_form(&word)?, &back);
        terms.push(ScaledTerm { coeff, gens, audited_exponent: Some(audited) });
    }
    if rebuilt != alg.star_gen(r, s)? {
        return Err(Error::Certificate(format!("cofactor expansion of (u{r}{s})* does not match")));
    }
    finish(terms)
}
