use crate::cartan::{minus_w0, Weight};
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::ratfield::RatFunc;
use crate::repth::{dual_lattice_basis, dual_rep, intertwiner, rho_pairing};

use super::algebra::{Algebra, FnAlgElem};
use super::coeffs::{express_over_a0, Realization};
use super::triangular::{triangular_search, FactorOrder, TriangularFactors};

/// Per-entry outcome of the star-scaling comparison.
#[derive(Clone, Debug)]
pub struct StarEntry {
    pub r: usize,
    pub s: usize,
    /// `(wt v_r - wt v_s, rho)`.
    pub exponent: i64,
    /// `e` with `(C_{r,s})^* = e c t^{exponent} C'_{N-r+1, N-s+1}`; must be in `1 + t A0`.
    pub unit: Option<RatFunc>,
}

impl StarEntry {
    pub fn passed(&self) -> bool {
        self.unit.as_ref().is_some_and(RatFunc::is_one_mod_t)
    }
}

#[derive(Clone, Debug)]
pub struct RStarReport {
    pub lambda: Weight,
    pub c_lambda: RatFunc,
    pub entries: Vec<StarEntry>,
    /// Coefficients expressing `(C_{r,1})^*` over the rescaled last column of
    /// the dual module, one vector per `r`.
    pub plus_to_minus: Vec<Result<Vector>>,
    /// Coefficients expressing `(C_{r,N})^*` over the first column of the dual.
    pub minus_to_plus: Vec<Result<Vector>>,
}

fn spans_ok(v: &[Result<Vector>]) -> bool {
    v.iter().all(|r| r.as_ref().is_ok_and(|c| c.iter().all(RatFunc::is_in_a0)))
}

impl RStarReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(StarEntry::passed) && spans_ok(&self.plus_to_minus) && spans_ok(&self.minus_to_plus)
    }

    pub fn first_failure(&self) -> Option<String> {
        if let Some(e) = self.entries.iter().find(|e| !e.passed()) {
            return Some(format!("entry ({}, {}): unit {:?}", e.r, e.s, e.unit.as_ref().map(|u| u.to_string())));
        }
        for (name, v) in [("R+ -> R~-", &self.plus_to_minus), ("R- -> R+", &self.minus_to_plus)] {
            if let Some(r) = v.iter().position(|x| !x.as_ref().is_ok_and(|c| c.iter().all(RatFunc::is_in_a0))) {
                return Some(format!("{name} fails for index {}", r + 1));
            }
        }
        None
    }
}

/// `e` with `lhs = e * rhs`, when one exists.
fn ratio(lhs: &FnAlgElem, rhs: &FnAlgElem) -> Option<RatFunc> {
    let (m, c) = rhs.terms().next()?;
    let e = lhs.coeff(m).div_ref(c).ok()?;
    (rhs.scale(&e) == *lhs).then_some(e)
}

/// Matrix coefficients of the dual module, realized through the module map
/// sending `w_1` to the highest weight vector of V(-w0 Lambda).
pub struct DualCoefficients {
    pub realization: Realization,
    /// `T w_k` in ambient coordinates.
    pub images: Vec<Vector>,
    /// `(w_1, w_1)` in the dual form, so that `(x, a y)_dual = kappa (Tx, a Ty)`.
    pub kappa: RatFunc,
    pub c_lambda: RatFunc,
}

impl DualCoefficients {
    pub fn new(module: &Realization) -> Result<Self> {
        let sub = module.sub.as_ref().ok_or_else(|| Error::Invalid("trivial module".into()))?;
        let form = module.polarization()?;
        let dual = dual_rep(&sub.rep, &form)?;
        let report = dual_lattice_basis(&sub.rep, &dual)?;
        let target = Realization::new(module.n, &minus_w0(&module.highest_weight))?;
        let tsub = target.sub.as_ref().ok_or_else(|| Error::Invalid("trivial dual".into()))?;
        let top = tsub.rep.basis_vector(0);
        let t = intertwiner(&dual.rep, &tsub.rep, &report.w[0], &top)?;
        let images = report.w.iter().map(|w| target.ambient(&t.mul_vec(w))).collect();
        let kappa = dual.form.norm(&report.w[0]);
        Ok(DualCoefficients { realization: target, images, kappa, c_lambda: dual.c_lambda })
    }

    /// `C^{-w0 Lambda}_{w_a, w_b}` (1-based).
    pub fn coefficient(&self, alg: &Algebra, a: usize, b: usize) -> Result<FnAlgElem> {
        let c = self.realization.coefficient_of(alg, &self.images[a - 1], &self.images[b - 1])?;
        Ok(c.scale(&self.kappa))
    }
}

/// Compares `(C^Lambda_{r,s})^*` from the algebra's star with
/// `c_Lambda t^{(mu - nu, rho)} C^{-w0 Lambda}_{w_{N-r+1}, w_{N-s+1}}`, and checks
/// that the star maps first-column coefficients into the A0-span of the
/// rescaled last column `t^{(w0 Lambda' - wt, rho)} C^{Lambda'}_{i,N}` of the
/// dual module, and last-column coefficients into its first column.
///
/// Requires all weight spaces of V(Lambda) to be one-dimensional.
pub fn rstar_scaling_check(alg: &Algebra, module: &Realization) -> Result<RStarReport> {
    let dim = module.dim();
    for (a, w) in module.weights.iter().enumerate() {
        if module.weights.iter().skip(a + 1).any(|x| x == w) {
            return Err(Error::Invalid(format!("weight {w} has multiplicity above one")));
        }
    }
    let dual = DualCoefficients::new(module)?;
    let coeffs: Vec<Vec<FnAlgElem>> = (1..=dim)
        .map(|r| (1..=dim).map(|s| module.coefficient(alg, r, s)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let mut entries = Vec::new();
    for r in 1..=dim {
        for s in 1..=dim {
            let exponent = rho_pairing(&(&module.weights[r - 1] - &module.weights[s - 1]))?;
            let lhs = alg.star(&coeffs[r - 1][s - 1]);
            let rhs = dual
                .coefficient(alg, dim - r + 1, dim - s + 1)?
                .scale(&dual.c_lambda.mul_ref(&RatFunc::t_pow(exponent)));
            entries.push(StarEntry { r, s, exponent, unit: ratio(&lhs, &rhs) });
        }
    }
    let other = &dual.realization;
    let odim = other.dim();
    let lowest = &other.weights[odim - 1];
    let mut rescaled_last = Vec::new();
    let mut first = Vec::new();
    for i in 1..=odim {
        let e = rho_pairing(&(lowest - &other.weights[i - 1]))?;
        rescaled_last.push(other.coefficient(alg, i, odim)?.scale(&RatFunc::t_pow(e)));
        first.push(other.coefficient(alg, i, 1)?);
    }
    let plus_to_minus = (0..dim).map(|r| express_over_a0(&alg.star(&coeffs[r][0]), &rescaled_last)).collect();
    let minus_to_plus = (0..dim).map(|r| express_over_a0(&alg.star(&coeffs[r][dim - 1]), &first)).collect();
    Ok(RStarReport {
        lambda: module.highest_weight.clone(),
        c_lambda: dual.c_lambda,
        entries,
        plus_to_minus,
        minus_to_plus,
    })
}

/// Generator-level check that every `C^Lambda_{i,j}` lies in the A0-algebra
/// generated by first-column coefficients and their star images: each entry
/// is decomposed triangularly, and each last-column factor used is written
/// over star images of first-column coefficients with A0 coefficients.
#[derive(Clone, Debug)]
pub struct CorollaryReport {
    pub lambda: Weight,
    /// `(i, j, ok, detail)` per entry.
    pub entries: Vec<(usize, usize, bool, String)>,
}

impl CorollaryReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.2)
    }
}

pub fn corollary_check(
    alg: &Algebra,
    module: &Realization,
    max_degree: usize,
    order: FactorOrder,
) -> Result<CorollaryReport> {
    let dim = module.dim();
    let mut entries = Vec::new();
    for i in 1..=dim {
        for j in 1..=dim {
            let outcome = (|| -> Result<String> {
                let w = triangular_search(alg, module, i, j, max_degree, order)?;
                if !w.all_in_a0() {
                    return Err(Error::Certificate("triangular coefficient outside A0".into()));
                }
                let f = TriangularFactors::new(alg, &w.lambda, &w.gamma)?;
                let m = &f.minus;
                let stars: Vec<FnAlgElem> = if m.degree == 0 {
                    vec![FnAlgElem::one()]
                } else {
                    let source = Realization::new(alg.rank(), &minus_w0(&m.highest_weight))?;
                    (1..=source.dim()).map(|k| Ok(alg.star(&source.coefficient(alg, k, 1)?))).collect::<Result<_>>()?
                };
                for &(_, l, _) in &w.table {
                    let c = express_over_a0(&f.minus_coeffs[l - 1], &stars)?;
                    if !c.iter().all(RatFunc::is_in_a0) {
                        return Err(Error::Certificate(format!("last-column factor {l} needs non-A0 coefficients")));
                    }
                }
                Ok(format!("{} Lambda={} Gamma={} terms={}", w.order, w.lambda, w.gamma, w.table.len()))
            })();
            match outcome {
                Ok(d) => entries.push((i, j, true, d)),
                Err(e) => entries.push((i, j, false, e.to_string())),
            }
        }
    }
    Ok(CorollaryReport { lambda: module.highest_weight.clone(), entries })
}
