use std::collections::BTreeSet;

use crate::cartan::Weight;
use crate::error::{Error, Result};
use crate::linalg::{is_zero_vec, solve_over_a0, Mat, Vector};
use crate::ratfield::RatFunc;
use crate::repth::{generate_submodule, highest_weight_submodule, polarization, tensor_power, Form, Submodule};

use super::algebra::{Algebra, FnAlgElem, QMonomial};

/// An irreducible module V(Lambda) realized inside `V(w_1)^{(x) m}`.
///
/// The basis is the Kashiwara orbit of the highest weight vector (highest
/// first, lowest last), written in ambient coordinates. The ambient product
/// form restricted to the module, divided by the norm of the highest weight
/// vector, is the polarization; matrix coefficients are taken with respect
/// to it. `m = 0` is the trivial module, whose only coefficient is 1.
#[derive(Clone, Debug)]
pub struct Realization {
    pub n: usize,
    pub degree: usize,
    pub highest_weight: Weight,
    /// Basis vectors in ambient coordinates.
    pub basis: Vec<Vector>,
    pub weights: Vec<Weight>,
    /// Ambient norm of the highest weight vector.
    pub norm: RatFunc,
    /// The module in its own basis (`None` for the trivial module).
    pub sub: Option<Submodule>,
}

/// `sum_k k * lambda_k`: the tensor degree at which V(lambda) first appears.
pub fn tensor_degree(lambda: &Weight) -> usize {
    lambda.coords.iter().enumerate().map(|(k, &c)| (k + 1) * c.max(0) as usize).sum()
}

fn kron_vec(a: &[RatFunc], b: &[RatFunc]) -> Vector {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x.mul_ref(y));
        }
    }
    out
}

impl Realization {
    /// V(lambda) inside the tensor power of degree [`tensor_degree`]. The
    /// highest weight vector is the unique singular vector when there is one,
    /// otherwise the product of the fundamental highest weight vectors.
    pub fn new(n: usize, lambda: &Weight) -> Result<Realization> {
        if lambda.rank() != n || !lambda.is_dominant() {
            return Err(Error::Invalid(format!("{lambda} is not a dominant weight of rank {n}")));
        }
        let m = tensor_degree(lambda);
        if m == 0 {
            return Ok(Realization {
                n,
                degree: 0,
                highest_weight: lambda.clone(),
                basis: vec![vec![RatFunc::one()]],
                weights: vec![lambda.clone()],
                norm: RatFunc::one(),
                sub: None,
            });
        }
        let ambient = tensor_power(n, m);
        let sub = match highest_weight_submodule(&ambient, lambda) {
            Ok(s) => s,
            Err(Error::Invalid(_)) => {
                let mut v = vec![RatFunc::one()];
                for (k, &c) in lambda.coords.iter().enumerate() {
                    let fund = Realization::new(n, &Weight::fundamental(n, k + 1))?;
                    for _ in 0..c {
                        v = kron_vec(&v, &fund.basis[0]);
                    }
                }
                generate_submodule(&ambient, &v[..])?
            }
            Err(e) => return Err(e),
        };
        Self::from_submodule(n, m, sub)
    }

    /// Wrap a highest weight submodule of `V(w_1)^{(x) m}`.
    pub fn from_submodule(n: usize, m: usize, sub: Submodule) -> Result<Realization> {
        let hw = &sub.embedding[0];
        let norm = hw.iter().fold(RatFunc::zero(), |acc, x| acc.add_ref(&x.mul_ref(x)));
        if norm.is_zero() {
            return Err(Error::DegenerateRestriction("highest weight vector".into()));
        }
        Ok(Realization {
            n,
            degree: m,
            highest_weight: sub.highest_weight.clone(),
            basis: sub.embedding.clone(),
            weights: sub.rep.weights.clone(),
            norm,
            sub: Some(sub),
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The polarization in the module's own basis.
    pub fn polarization(&self) -> Result<Form> {
        match &self.sub {
            Some(s) => polarization(&s.rep, 0),
            None => Ok(Form { gram: Mat::identity(1) }),
        }
    }

    fn multi_index(&self, mut idx: usize) -> Vec<u8> {
        let d = self.n + 1;
        let mut out = vec![0u8; self.degree];
        for k in (0..self.degree).rev() {
            out[k] = (idx % d) as u8 + 1;
            idx /= d;
        }
        out
    }

    /// `(1 / norm) sum_{A,B} x[A] y[B] u_{a_1 b_1} ... u_{a_m b_m}` for ambient
    /// vectors `x`, `y`: the coefficient `a -> (x, a y)` of the polarization.
    pub fn coefficient_of(&self, alg: &Algebra, x: &[RatFunc], y: &[RatFunc]) -> Result<FnAlgElem> {
        let size = self.basis[0].len();
        if x.len() != size || y.len() != size {
            return Err(Error::Dimension(format!("expected ambient vectors of length {size}")));
        }
        if alg.rank() != self.n {
            return Err(Error::Dimension(format!("algebra rank {} vs module rank {}", alg.rank(), self.n)));
        }
        let scale = self.norm.inv()?;
        let mut out = FnAlgElem::zero();
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            let ia = self.multi_index(a);
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let ib = self.multi_index(b);
                let word: Vec<(usize, usize)> = ia.iter().zip(&ib).map(|(&i, &j)| (i as usize, j as usize)).collect();
                let c = xa.mul_ref(yb).mul_ref(&scale);
                out.add_scaled(&alg.normal_form(&word)?, &c);
            }
        }
        Ok(out)
    }

    /// `C_{i,j}` for basis vectors `v_i`, `v_j` (1-based).
    pub fn coefficient(&self, alg: &Algebra, i: usize, j: usize) -> Result<FnAlgElem> {
        let d = self.dim();
        if i == 0 || j == 0 || i > d || j > d {
            return Err(Error::IndexOutOfRange(format!("C_{{{i},{j}}} in a module of dimension {d}")));
        }
        self.coefficient_of(alg, &self.basis[i - 1], &self.basis[j - 1])
    }

    /// Ambient coordinates of a vector given in the module basis.
    pub fn ambient(&self, coords: &[RatFunc]) -> Vector {
        let size = self.basis[0].len();
        let mut out = vec![RatFunc::zero(); size];
        for (c, v) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(v) {
                *o = o.add_ref(&c.mul_ref(x));
            }
        }
        out
    }
}

/// `C^Lambda_{i,j}` for a highest weight submodule of a tensor power.
pub fn matrix_coeff(alg: &Algebra, sub: &Submodule, i: usize, j: usize) -> Result<FnAlgElem> {
    let size = sub.embedding.first().map_or(0, Vec::len);
    let d = alg.size();
    let mut m = 0;
    let mut p = 1;
    while p < size {
        p *= d;
        m += 1;
    }
    if p != size {
        return Err(Error::Dimension(format!("ambient dimension {size} is not a power of {d}")));
    }
    Realization::from_submodule(alg.rank(), m, sub.clone())?.coefficient(alg, i, j)
}

/// Coefficients `a` in A0 with `target = sum_k a_k spanning_k`, found by an
/// exact solve on the monomial coordinates.
pub fn express_over_a0(target: &FnAlgElem, spanning: &[FnAlgElem]) -> Result<Vec<RatFunc>> {
    let mut monos: BTreeSet<QMonomial> = target.terms().map(|(m, _)| m.clone()).collect();
    for s in spanning {
        monos.extend(s.terms().map(|(m, _)| m.clone()));
    }
    let monos: Vec<QMonomial> = monos.into_iter().collect();
    if spanning.is_empty() {
        return if target.is_zero() { Ok(Vec::new()) } else { Err(Error::NoSolution) };
    }
    let rows: Vec<Vector> = monos.iter().map(|m| spanning.iter().map(|s| s.coeff(m)).collect()).collect();
    let rhs: Vector = monos.iter().map(|m| target.coeff(m)).collect();
    if rows.is_empty() {
        return Ok(vec![RatFunc::zero(); spanning.len()]);
    }
    let a = Mat::from_rows(rows);
    let x = solve_over_a0(&a, &rhs)?;
    let check = a.mul_vec(&x);
    if check != rhs {
        return Err(Error::NoSolution);
    }
    debug_assert!(!is_zero_vec(&x) || target.is_zero());
    Ok(x)
}

/// `sum_k a_k x_k`.
pub fn combine(coeffs: &[RatFunc], elems: &[FnAlgElem]) -> FnAlgElem {
    let mut out = FnAlgElem::zero();
    for (c, x) in coeffs.iter().zip(elems) {
        out.add_scaled(x, c);
    }
    out
}
