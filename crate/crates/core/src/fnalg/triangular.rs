use crate::cartan::{minus_w0, Weight};
use crate::error::{Error, Result};
use crate::ratfield::RatFunc;

use super::algebra::{Algebra, FnAlgElem};
use super::coeffs::{combine, express_over_a0, tensor_degree, Realization};

/// Order of the two factors in each product of the decomposition.
///
/// Neither fixed order works for every entry. `PlusMinus` needs a coefficient
/// of valuation -1 on the middle column of V(2w) for sl_2, where
/// `hw (x) lowest` sits in the trivial crystal component for every candidate
/// pair. `MinusPlus` fails the same way on the middle column of the vector
/// representation of sl_3. `Either` tries `PlusMinus` first and falls back to
/// `MinusPlus`; the witness records the order that was used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FactorOrder {
    /// `C^Lambda_{k,1} * C^{-w0 Gamma}_{l,N}`.
    PlusMinus,
    /// `C^{-w0 Gamma}_{l,N} * C^Lambda_{k,1}`.
    MinusPlus,
    /// Whichever of the two succeeds, `PlusMinus` first.
    Either,
}

impl std::fmt::Display for FactorOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FactorOrder::PlusMinus => "R+*R-",
            FactorOrder::MinusPlus => "R-*R+",
            FactorOrder::Either => "either",
        })
    }
}

/// Witness for `C^Omega_{i,j} = sum_{k,l} b_{k,l} C^Lambda_{k,1} C^{-w0 Gamma}_{l,N}`
/// (factors swapped for [`FactorOrder::MinusPlus`]), where `N` indexes the
/// lowest weight vector of V(-w0 Gamma).
#[derive(Clone, Debug)]
pub struct TriangularWitness {
    pub order: FactorOrder,
    pub i: usize,
    pub j: usize,
    pub lambda: Weight,
    pub gamma: Weight,
    /// `(k, l, b_{k,l})` for the nonzero coefficients, 1-based indices.
    pub table: Vec<(usize, usize, RatFunc)>,
    /// Smallest valuation among the coefficients.
    pub min_valuation: Option<i64>,
}

impl TriangularWitness {
    pub fn all_in_a0(&self) -> bool {
        self.table.iter().all(|(_, _, b)| b.is_in_a0())
    }
}

/// The first-column and last-column coefficient factors used by a
/// decomposition with the given `(Lambda, Gamma)`.
pub struct TriangularFactors {
    pub plus: Realization,
    pub minus: Realization,
    pub plus_coeffs: Vec<FnAlgElem>,
    pub minus_coeffs: Vec<FnAlgElem>,
}

impl TriangularFactors {
    pub fn new(alg: &Algebra, lambda: &Weight, gamma: &Weight) -> Result<Self> {
        let plus = Realization::new(alg.rank(), lambda)?;
        let minus = Realization::new(alg.rank(), &minus_w0(gamma))?;
        let plus_coeffs = (1..=plus.dim()).map(|k| plus.coefficient(alg, k, 1)).collect::<Result<_>>()?;
        let low = minus.dim();
        let minus_coeffs = (1..=low).map(|l| minus.coefficient(alg, l, low)).collect::<Result<_>>()?;
        Ok(TriangularFactors { plus, minus, plus_coeffs, minus_coeffs })
    }
}

/// Solves for the coefficient table of `C^Omega_{i,j}` over products of
/// first-column coefficients of V(Lambda) and last-column coefficients of
/// V(-w0 Gamma), multiplied in the given order. Only products whose left
/// weight matches `v_i` enter.
///
/// Errors: [`Error::NoSolution`] if the target is not in the Q(t)-span,
/// [`Error::NotInA0Solution`] if it is but no solution lies over A0.
pub fn triangular_decompose(
    alg: &Algebra,
    target: &Realization,
    i: usize,
    j: usize,
    lambda: &Weight,
    gamma: &Weight,
    order: FactorOrder,
) -> Result<TriangularWitness> {
    if order == FactorOrder::Either {
        return match triangular_decompose(alg, target, i, j, lambda, gamma, FactorOrder::PlusMinus) {
            Ok(w) => Ok(w),
            Err(Error::NoSolution | Error::NotInA0Solution { .. }) => {
                triangular_decompose(alg, target, i, j, lambda, gamma, FactorOrder::MinusPlus)
            }
            Err(e) => Err(e),
        };
    }
    let right = &target.weights[j - 1];
    if &(lambda - gamma) != right {
        return Err(Error::Invalid(format!("Lambda - Gamma = {} differs from wt v_j = {right}", lambda - gamma)));
    }
    let goal = target.coefficient(alg, i, j)?;
    let f = TriangularFactors::new(alg, lambda, gamma)?;
    let left = &target.weights[i - 1];
    let mut index = Vec::new();
    let mut products = Vec::new();
    for (k, ck) in f.plus_coeffs.iter().enumerate() {
        for (l, cl) in f.minus_coeffs.iter().enumerate() {
            if &(&f.plus.weights[k] + &f.minus.weights[l]) != left {
                continue;
            }
            index.push((k + 1, l + 1));
            products.push(match order {
                FactorOrder::PlusMinus => alg.mul(ck, cl),
                _ => alg.mul(cl, ck),
            });
        }
    }
    let b = express_over_a0(&goal, &products)?;
    if combine(&b, &products) != goal {
        return Err(Error::Certificate("substitution does not reproduce the target".into()));
    }
    let table: Vec<(usize, usize, RatFunc)> =
        index.into_iter().zip(b).filter(|(_, c)| !c.is_zero()).map(|((k, l), c)| (k, l, c)).collect();
    let min_valuation = table.iter().filter_map(|(_, _, c)| c.valuation().finite()).min();
    Ok(TriangularWitness { order, i, j, lambda: lambda.clone(), gamma: gamma.clone(), table, min_valuation })
}

fn dominant_weights_up_to(n: usize, max_degree: usize) -> Vec<Weight> {
    let mut out = vec![Weight::zero(n)];
    for k in 0..n {
        let mut next = Vec::new();
        for w in &out {
            let mut c = 0;
            loop {
                let mut v = w.clone();
                v.coords[k] = c;
                if tensor_degree(&v) > max_degree {
                    break;
                }
                next.push(v);
                c += 1;
            }
        }
        out = next;
    }
    out
}

/// Candidate `(Lambda, Gamma)` with `Lambda - Gamma = mu`, both dominant,
/// ordered by total tensor degree.
pub fn triangular_candidates(n: usize, mu: &Weight, max_degree: usize) -> Vec<(Weight, Weight)> {
    let mut out: Vec<(usize, Weight, Weight)> = Vec::new();
    for lambda in dominant_weights_up_to(n, max_degree) {
        let gamma = &lambda - mu;
        if !gamma.is_dominant() {
            continue;
        }
        let deg = tensor_degree(&lambda) + tensor_degree(&minus_w0(&gamma));
        if deg <= max_degree {
            out.push((deg, lambda, gamma));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.coords.cmp(&b.1.coords)));
    out.into_iter().map(|(_, l, g)| (l, g)).collect()
}

/// Tries the candidates of [`triangular_candidates`] in order and returns
/// the first decomposition over A0. If none exists, the first failure is
/// returned, so a solution over Q(t) with a non-A0 coefficient is reported
/// as [`Error::NotInA0Solution`] rather than as [`Error::NoSolution`].
pub fn triangular_search(
    alg: &Algebra,
    target: &Realization,
    i: usize,
    j: usize,
    max_degree: usize,
    order: FactorOrder,
) -> Result<TriangularWitness> {
    let mu = &target.weights[j - 1];
    let mut first_error = None;
    for (lambda, gamma) in triangular_candidates(alg.rank(), mu, max_degree) {
        match triangular_decompose(alg, target, i, j, &lambda, &gamma, order) {
            Ok(w) => return Ok(w),
            Err(e @ Error::NotInA0Solution { .. }) => {
                if !matches!(first_error, Some(Error::NotInA0Solution { .. })) {
                    first_error = Some(e);
                }
            }
            Err(Error::NoSolution) => {
                first_error.get_or_insert(Error::NoSolution);
            }
            Err(e) => return Err(e),
        }
    }
    Err(first_error.unwrap_or(Error::NoSolution))
}
