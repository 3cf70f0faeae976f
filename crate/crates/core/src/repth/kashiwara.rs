use crate::linalg::{is_zero_vec, vec_add, vec_scale, vec_sub, Mat, Vector};
use crate::ratfield::{q_binomial, RatFunc};

use super::rep::Rep;

/// Matrices of the lower Kashiwara operators `E~_i`, `F~_i`.
///
/// Both operators are Q(t)-linear, so they are computed once on the basis
/// (which consists of weight vectors) and then applied by matrix product.
#[derive(Clone, Debug)]
pub struct KashiwaraOps {
    pub e_tilde: Vec<Mat>,
    pub f_tilde: Vec<Mat>,
}

impl KashiwaraOps {
    pub fn e(&self, i: usize, v: &[RatFunc]) -> Vector {
        self.e_tilde[i - 1].mul_vec(v)
    }

    pub fn f(&self, i: usize, v: &[RatFunc]) -> Vector {
        self.f_tilde[i - 1].mul_vec(v)
    }
}

/// Decompose a weight vector into its `i`-string components:
/// `u = sum_k F_i^(k) u_k` with `E_i u_k = 0`. Returns the pairs `(k, u_k)`.
///
/// Peels off the top of the string: if `K` is the largest exponent with
/// `E_i^K u != 0` then `u_K = E_i^(K) u / [m choose K]`, where `m` is the
/// `i`-th coordinate of the weight of `u_K`.
pub fn string_decomposition(rep: &Rep, i: usize, u: &[RatFunc]) -> Vec<(u32, Vector)> {
    let Some(wt) = rep.weight_of(u) else {
        // a non-homogeneous vector decomposes weight space by weight space
        let mut parts: Vec<(u32, Vector)> = Vec::new();
        for a in 0..rep.dim() {
            if u[a].is_zero() {
                continue;
            }
            let mut basis_part = vec![RatFunc::zero(); rep.dim()];
            basis_part[a] = u[a].clone();
            parts.extend(string_decomposition(rep, i, &basis_part));
        }
        return merge(parts);
    };
    let lam_i = wt.at(i);
    let mut rest = u.to_vec();
    let mut out = Vec::new();
    while !is_zero_vec(&rest) {
        let mut top = 0u32;
        let mut cur = rest.clone();
        loop {
            let next = rep.e[i - 1].mul_vec(&cur);
            if is_zero_vec(&next) {
                break;
            }
            cur = next;
            top += 1;
        }
        let scale = q_binomial(lam_i + 2 * top as i64, top as i64);
        let uk = vec_scale(&rep.e_divided(i, top).mul_vec(&rest), &scale.inv().expect("nonzero binomial"));
        rest = vec_sub(&rest, &rep.f_divided(i, top).mul_vec(&uk));
        out.push((top, uk));
    }
    out
}

fn merge(parts: Vec<(u32, Vector)>) -> Vec<(u32, Vector)> {
    let mut out: Vec<(u32, Vector)> = Vec::new();
    for (k, v) in parts {
        match out.iter_mut().find(|(j, _)| *j == k) {
            Some((_, acc)) => *acc = vec_add(acc, &v),
            None => out.push((k, v)),
        }
    }
    out.retain(|(_, v)| !is_zero_vec(v));
    out.sort_by_key(|(k, _)| *k);
    out
}

pub fn kashiwara_ops(rep: &Rep) -> KashiwaraOps {
    let d = rep.dim();
    let mut e_tilde = Vec::new();
    let mut f_tilde = Vec::new();
    for i in 1..=rep.rank {
        let mut et = Mat::zeros(d, d);
        let mut ft = Mat::zeros(d, d);
        for a in 0..d {
            let parts = string_decomposition(rep, i, &rep.basis_vector(a));
            let mut fv = vec![RatFunc::zero(); d];
            let mut ev = vec![RatFunc::zero(); d];
            for (k, uk) in &parts {
                fv = vec_add(&fv, &rep.f_divided(i, k + 1).mul_vec(uk));
                if *k > 0 {
                    ev = vec_add(&ev, &rep.f_divided(i, k - 1).mul_vec(uk));
                }
            }
            for b in 0..d {
                et.set(b, a, ev[b].clone());
                ft.set(b, a, fv[b].clone());
            }
        }
        e_tilde.push(et);
        f_tilde.push(ft);
    }
    KashiwaraOps { e_tilde, f_tilde }
}
