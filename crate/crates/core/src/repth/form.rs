use crate::cartan::{minus_w0, Weight};
use crate::error::{Error, Result};
use crate::linalg::{dot, is_zero_vec, Mat, Vector};
use crate::ratfield::RatFunc;

use super::kashiwara::kashiwara_ops;
use super::lattice::{crystal_lattice, Lattice};
use super::rep::{rho_pairing, two_rho_pairing, Gen, Rep};

/// Symmetric bilinear form given by its Gram matrix in the module basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Form {
    pub gram: Mat,
}

impl Form {
    pub fn pair(&self, u: &[RatFunc], v: &[RatFunc]) -> RatFunc {
        dot(u, &self.gram.mul_vec(v))
    }

    pub fn norm(&self, v: &[RatFunc]) -> RatFunc {
        self.pair(v, v)
    }

    /// Gram matrix of the restriction to the span of `vs`.
    pub fn restricted_gram(&self, vs: &[Vector]) -> Mat {
        let gv: Vec<Vector> = vs.iter().map(|v| self.gram.mul_vec(v)).collect();
        let rows = vs.iter().map(|u| gv.iter().map(|g| dot(u, g)).collect()).collect();
        Mat::from_rows(rows)
    }
}

/// Product form on a tensor product.
pub fn tensor_form(a: &Form, b: &Form) -> Form {
    Form { gram: a.gram.kron(&b.gram) }
}

/// Identity Gram matrix: the polarization of the vector representation and
/// of its tensor powers.
pub fn identity_form(dim: usize) -> Form {
    Form { gram: Mat::identity(dim) }
}

/// Matrix of `x*` for the compact real form: `K* = K`, `E_i* = t F_i K_i^-1`,
/// `F_i* = t^-1 K_i E_i`.
pub fn adjoint_matrix(rep: &Rep, g: Gen) -> Mat {
    match g {
        Gen::K(_) | Gen::Kinv(_) => rep.action(g).clone(),
        Gen::E(i) => rep.f[i - 1].mul(&rep.kinv[i - 1]).scale(&RatFunc::t()),
        Gen::F(i) => rep.k[i - 1].mul(&rep.e[i - 1]).scale(&RatFunc::t_pow(-1)),
    }
}

/// Checks `(x u, v) = (u, x* v)` for every generator as the matrix identity
/// `X^T G = G X*`; returns the first failing generator.
pub fn contravariance_defect(rep: &Rep, form: &Form) -> Option<Gen> {
    let g = &form.gram;
    if g.transpose() != *g {
        return Some(Gen::K(0));
    }
    for i in 1..=rep.rank {
        for x in [Gen::E(i), Gen::F(i), Gen::K(i)] {
            let lhs = rep.action(x).transpose().mul(g);
            let rhs = g.mul(&adjoint_matrix(rep, x));
            if lhs != rhs {
                return Some(x);
            }
        }
    }
    None
}

/// The unique symmetric contravariant form with `(v_hw, v_hw) = 1`.
///
/// Distinct weight spaces are orthogonal (the `K_i` are self-adjoint), so the
/// unknowns are the Gram entries `(b_a, b_c)` with `a <= c` of equal weight;
/// contravariance for each `E_i`, `F_i` gives linear equations in them.
pub fn polarization(rep: &Rep, hw: usize) -> Result<Form> {
    let d = rep.dim();
    let mut unknown = vec![vec![None; d]; d];
    let mut pairs = Vec::new();
    for a in 0..d {
        for c in a..d {
            if rep.weights[a] == rep.weights[c] {
                unknown[a][c] = Some(pairs.len());
                unknown[c][a] = Some(pairs.len());
                pairs.push((a, c));
            }
        }
    }
    let nu = pairs.len();
    let mut rows: Vec<Vector> = Vec::new();
    let mut rhs: Vector = Vec::new();
    for i in 1..=rep.rank {
        for x in [Gen::E(i), Gen::F(i)] {
            let xm = rep.action(x);
            let xs = adjoint_matrix(rep, x);
            // (X^T G - G X*)[a][b] = sum_c X[c][a] G[c][b] - sum_c G[a][c] X*[c][b]
            for a in 0..d {
                for b in 0..d {
                    let mut row = vec![RatFunc::zero(); nu];
                    let mut any = false;
                    for c in 0..d {
                        let xa = xm.get(c, a);
                        if !xa.is_zero() {
                            if let Some(u) = unknown[c][b] {
                                row[u] = row[u].add_ref(xa);
                                any = true;
                            }
                        }
                        let xb = xs.get(c, b);
                        if !xb.is_zero() {
                            if let Some(u) = unknown[a][c] {
                                row[u] = row[u].sub_ref(xb);
                                any = true;
                            }
                        }
                    }
                    if any && !is_zero_vec(&row) {
                        rows.push(row);
                        rhs.push(RatFunc::zero());
                    }
                }
            }
        }
    }
    let mut norm_row = vec![RatFunc::zero(); nu];
    norm_row[unknown[hw][hw].expect("diagonal entry is an unknown")] = RatFunc::one();
    rows.push(norm_row);
    rhs.push(RatFunc::one());
    let system = Mat::from_rows(rows);
    if system.rank() < nu {
        return Err(Error::NotIrreducible(format!(
            "contravariant forms normalized at the highest weight vector form a family of dimension {}",
            nu - system.rank()
        )));
    }
    let sol = system.solve(&rhs).map_err(|_| Error::NotIrreducible("no contravariant form".into()))?;
    let mut gram = Mat::zeros(d, d);
    for (u, &(a, c)) in pairs.iter().enumerate() {
        gram.set(a, c, sol[u].clone());
        gram.set(c, a, sol[u].clone());
    }
    Ok(Form { gram })
}

/// Dual module with its normalized form.
///
/// The dual basis is `(b_a)^o`, the functionals dual to the module basis; a
/// vector `v` of the original module determines the functional
/// `v* = (v, .)`, whose coordinates are `G v`.
#[derive(Clone, Debug)]
pub struct DualModule {
    pub rep: Rep,
    pub form: Form,
    /// Norm of the lowest weight vector of the original module.
    pub c_lambda: RatFunc,
    pub highest_weight: Weight,
    /// Map `v -> v*` in coordinates (the original Gram matrix).
    pub star: Mat,
}

impl DualModule {
    pub fn star_of(&self, v: &[RatFunc]) -> Vector {
        self.star.mul_vec(v)
    }
}

fn highest_weight_of(rep: &Rep) -> Result<(usize, Weight)> {
    let hw = rep.hw.ok_or_else(|| Error::Invalid("module has no designated highest weight vector".into()))?;
    Ok((hw, rep.weights[hw].clone()))
}

fn lowest_index(rep: &Rep, lambda: &Weight) -> Result<usize> {
    let low = -&minus_w0(lambda);
    let idx = rep.weight_space(&low);
    match idx.as_slice() {
        [a] => Ok(*a),
        _ => Err(Error::NotIrreducible(format!("lowest weight {low} has multiplicity {}", idx.len()))),
    }
}

/// Module structure `(a f)(v) = f(S(a) v)` on the dual basis, with the
/// antipode `S(E) = -E K`, `S(F) = -K^-1 F`, `S(K) = K^-1`, and the form
/// `(u, v) = c^-1 t^{(Lambda, 2 rho)} (K^{-2 rho} u', v')` transported
/// through `v -> v*`. In the dual basis its Gram matrix is
/// `c^-1 t^{(Lambda, 2 rho)} G^-1 D` with `D = diag(t^{-(wt b_a, 2 rho)})`.
pub fn dual_rep(rep: &Rep, form: &Form) -> Result<DualModule> {
    let (_, lambda) = highest_weight_of(rep)?;
    let low = lowest_index(rep, &lambda)?;
    let c_lambda = form.gram.get(low, low).clone();
    let mut e = Vec::new();
    let mut f = Vec::new();
    for i in 0..rep.rank {
        e.push(rep.e[i].mul(&rep.k[i]).scale(&RatFunc::from_int(-1)).transpose());
        f.push(rep.kinv[i].mul(&rep.f[i]).scale(&RatFunc::from_int(-1)).transpose());
    }
    let weights: Vec<Weight> = rep.weights.iter().map(|w| -w).collect();
    let labels = rep.labels.iter().map(|l| format!("({l})°")).collect();
    let dual = Rep::from_ef(rep.rank, labels, weights, e, f, Some(low));
    let ginv = form.gram.inverse()?;
    let dvals: Vec<RatFunc> = rep.weights.iter().map(|w| RatFunc::t_pow(-two_rho_pairing(w))).collect();
    let scale = c_lambda.inv()?.mul_ref(&RatFunc::t_pow(two_rho_pairing(&lambda)));
    let gram = ginv.mul(&Mat::diagonal(&dvals)).scale(&scale);
    Ok(DualModule {
        rep: dual,
        form: Form { gram },
        c_lambda,
        highest_weight: minus_w0(&lambda),
        star: form.gram.clone(),
    })
}

/// Compares `((b_a)*)*` with `c^-1 t^{(Lambda - wt b_a, 2 rho)} b_a` for every
/// basis vector; the double dual is identified with the module by evaluation.
pub fn double_dual_defect(rep: &Rep, dual: &DualModule) -> Option<usize> {
    let lambda = rep.weights[rep.hw?].clone();
    let cinv = dual.c_lambda.inv().ok()?;
    for a in 0..rep.dim() {
        let once = dual.star_of(&rep.basis_vector(a));
        let twice = dual.form.gram.mul_vec(&once);
        let expect = cinv.mul_ref(&RatFunc::t_pow(two_rho_pairing(&(&lambda - &rep.weights[a]))));
        let mut target = vec![RatFunc::zero(); rep.dim()];
        target[a] = expect;
        if twice != target {
            return Some(a);
        }
    }
    None
}

/// Result of the dual-lattice construction.
#[derive(Clone, Debug)]
pub struct DualLatticeReport {
    /// `w_k = t^{(wt v_{N+1-k} - Lambda, rho)} (v_{N+1-k})*`, `k = 1..N`.
    pub w: Vec<Vector>,
    /// Exponents `(Lambda - wt v_k, rho)`, `k = 1..N`.
    pub exponents: Vec<i64>,
    pub norms: Vec<RatFunc>,
    /// Crystal lattice of the dual generated by its highest weight vector.
    pub lattice: Lattice,
    /// A0-span of the unrescaled duals `(v_k)*`.
    pub raw: Lattice,
    /// Index `k` (1-based) of a `w_k` outside the span of the raw duals.
    pub strictness_witness: Option<usize>,
    /// Whether every weight space of the lattice is the A0-span of the `w_k`
    /// of that weight.
    pub weight_refinement_ok: bool,
    /// Whether `{w_k}` is an A0-basis of the lattice.
    pub spans_lattice: bool,
    /// Valuation of the determinant of the change of basis between `{w_k}`
    /// and the lattice basis.
    pub change_of_basis_valuation: Option<i64>,
}

impl DualLatticeReport {
    pub fn norms_one_mod_t(&self) -> bool {
        self.norms.iter().all(|x| x.is_one_mod_t())
    }

    pub fn passed(&self) -> bool {
        self.norms_one_mod_t()
            && self.spans_lattice
            && self.weight_refinement_ok
            && self.strictness_witness.is_some()
            && self.change_of_basis_valuation == Some(0)
            && self.exponents.iter().all(|&e| e >= 0)
    }
}

/// Builds the rescaled dual basis `w_k` and compares it with the crystal
/// lattice of the dual module. The module basis must be ordered with the
/// highest weight vector first and the lowest weight vector last.
pub fn dual_lattice_basis(rep: &Rep, dual: &DualModule) -> Result<DualLatticeReport> {
    let (_, lambda) = highest_weight_of(rep)?;
    let n = rep.dim();
    let mut w = Vec::with_capacity(n);
    let mut w_weights = Vec::with_capacity(n);
    for k in 1..=n {
        let idx = n - k;
        let e = rho_pairing(&(&rep.weights[idx] - &lambda))?;
        let v = dual.star_of(&rep.basis_vector(idx));
        w.push(v.iter().map(|x| x.mul_ref(&RatFunc::t_pow(e))).collect::<Vector>());
        w_weights.push(-&rep.weights[idx]);
    }
    let exponents = (0..n)
        .map(|k| rho_pairing(&(&lambda - &rep.weights[k])))
        .collect::<Result<Vec<_>>>()?;
    let norms: Vec<RatFunc> = w.iter().map(|v| dual.form.norm(v)).collect();
    let ops = kashiwara_ops(&dual.rep);
    let lattice = crystal_lattice(&dual.rep, &ops, &w[..1])?;
    let wl = Lattice { dim: n, basis: w.clone() };
    let spans_lattice = wl.same_as(&lattice);
    let raw_vecs: Vec<Vector> = (0..n).map(|k| dual.star_of(&rep.basis_vector(k))).collect();
    let raw = Lattice::from_generators(n, &raw_vecs);
    let strictness_witness = if lattice.contains_all(&raw.basis) {
        (0..n).find(|&k| !raw.contains(&w[k])).map(|k| k + 1)
    } else {
        None
    };
    let mut weight_refinement_ok = true;
    let mut seen: Vec<Weight> = Vec::new();
    for mu in &w_weights {
        if seen.contains(mu) {
            continue;
        }
        seen.push(mu.clone());
        let idx = dual.rep.weight_space(mu);
        let project = |v: &Vector| -> Vector {
            (0..n).map(|a| if idx.contains(&a) { v[a].clone() } else { RatFunc::zero() }).collect()
        };
        let w_mu: Vec<Vector> =
            w.iter().zip(&w_weights).filter(|(_, wt)| *wt == mu).map(|(v, _)| v.clone()).collect();
        let span = Lattice { dim: n, basis: w_mu };
        let proj: Vec<Vector> = lattice.basis.iter().map(project).filter(|v| !is_zero_vec(v)).collect();
        let lat_mu = Lattice::from_generators(n, &proj);
        if !span.same_as(&lat_mu) {
            weight_refinement_ok = false;
        }
    }
    let change = Mat::from_cols(&lattice.basis, n).inverse()?.mul(&Mat::from_cols(&w, n));
    let change_of_basis_valuation = change.det().valuation().finite();
    Ok(DualLatticeReport {
        w,
        exponents,
        norms,
        lattice,
        raw,
        strictness_witness,
        weight_refinement_ok,
        spans_lattice,
        change_of_basis_valuation,
    })
}
