use serde::Serialize;

use crate::error::Result;
use crate::fnalg::{Algebra, Elem, FnAlgElem};
use crate::ratfield::{rat_to_string, Rat, RatFunc};

use super::entry::{ExactAt, FloatAt};
use super::ops::{compare_on_interior, Deviation};
use super::pipeline::{compare_limits, compare_numeric_limit, my_q, pi0_gp, pi0_my, psi_q, Layout, NumericLimit};

/// `u_ij`, or the scaled generator `t^{min(i-j, 0)} u_ij`.
pub fn generator(alg: &Algebra, i: usize, j: usize, scaled: bool) -> Result<FnAlgElem> {
    let g = alg.gen(i, j)?;
    let e = (i as i64 - j as i64).min(0);
    Ok(if scaled { g.scale(&RatFunc::t_pow(e)) } else { g })
}

/// Outcome of the specialization/projection square on a set of elements.
#[derive(Clone, Debug, Serialize)]
pub struct CommutingSquareReport {
    pub n: usize,
    pub q: String,
    pub checked: usize,
    /// `(block, element, detail)` for each failure.
    pub failures: Vec<(String, String, String)>,
}

impl CommutingSquareReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }
}

/// Checks `theta_q(phi_F(x)) = phi_F(theta_q(x))` for every contiguous block
/// `F` of size between 2 and `n + 1`, on the generators, their star images
/// and all products of two generators. The full block compares reduction
/// over Q(t) followed by specialization with reduction at `q` directly.
///
/// Only contiguous blocks are used: for a gapped index set the minor on `F`
/// has a different sign pattern from the rank-`|F|-1` determinant, so the
/// projection does not respect `D = 1`.
pub fn commuting_square(n: usize, q: &Rat) -> Result<CommutingSquareReport> {
    let alg = Algebra::new(n);
    let alg_q = Algebra::<Rat>::at(n, q.clone())?;
    let size = n + 1;
    let mut elems: Vec<(String, FnAlgElem)> = Vec::new();
    for i in 1..=size {
        for j in 1..=size {
            let g = alg.gen(i, j)?;
            elems.push((format!("u{i}{j}"), g.clone()));
            elems.push((format!("star(u{i}{j})"), alg.star(&g)));
        }
    }
    for a in 1..=size {
        for b in 1..=size {
            for c in 1..=size {
                for d in 1..=size {
                    let x = alg.mul(&alg.gen(a, b)?, &alg.gen(c, d)?);
                    elems.push((format!("u{a}{b}*u{c}{d}"), x));
                }
            }
        }
    }
    let mut report = CommutingSquareReport { n, q: rat_to_string(q), checked: 0, failures: Vec::new() };
    for m in 1..=n {
        let target = Algebra::new(m);
        let target_q = Algebra::<Rat>::at(m, q.clone())?;
        for first in 1..=size - m {
            let last = first + m;
            for (name, x) in &elems {
                let lhs = alg.project(x, first, last, &target)?.specialize_laurent(q)?;
                let rhs = alg_q.project(&x.specialize_laurent(q)?, first, last, &target_q)?;
                report.checked += 1;
                if lhs != rhs {
                    report.failures.push((format!("{first}..={last}"), name.clone(), format!("{lhs} vs {rhs}")));
                }
            }
        }
    }
    Ok(report)
}

/// `psi(star(u_ij))` against the adjoint of `psi(u_ij)` at a fixed `q`.
pub fn star_compatibility(layout: &Layout, q: f64) -> Result<Deviation> {
    let alg = Algebra::new(layout.n);
    let field = FloatAt(q);
    let mut dev = Deviation::default();
    for i in 1..=layout.n + 1 {
        for j in 1..=layout.n + 1 {
            let g = alg.gen(i, j)?;
            let s = alg.star(&g);
            let lhs = psi_q(&field, layout, &s)?;
            let rhs = psi_q(&field, layout, &g)?.adjoint();
            dev.merge(&compare_on_interior(&lhs, &rhs, s.degree().max(1))?);
        }
    }
    Ok(dev)
}

/// Per-generator comparison of the two pipelines.
#[derive(Clone, Debug, Serialize)]
pub struct PipelineRow {
    pub i: usize,
    pub j: usize,
    /// Float deviation at the fixed `q`.
    pub float_error: f64,
    /// Exact (square-root arithmetic) agreement at the fixed `q`, if run.
    pub exact_equal: Option<bool>,
}

/// Compares the per-leg and the global-specialization pipelines at a fixed
/// rational `q` on every generator. Exact square-root arithmetic is optional
/// because it is much slower than floating point.
pub fn fixed_q_comparison(layout: &Layout, q: &Rat, exact: bool) -> Result<Vec<PipelineRow>> {
    let alg = Algebra::new(layout.n);
    let qf = crate::ratfield::rat_to_f64(q);
    let mut rows = Vec::new();
    for i in 1..=layout.n + 1 {
        for j in 1..=layout.n + 1 {
            let g = alg.gen(i, j)?;
            let a = my_q(&FloatAt(qf), layout, &g)?;
            let b = psi_q(&FloatAt(qf), layout, &g)?;
            let float_error = compare_on_interior(&a, &b, 1)?.max_error;
            let exact_equal = if exact {
                let field = ExactAt(q.clone());
                let a = my_q(&field, layout, &g)?;
                let b = psi_q(&field, layout, &g)?;
                Some(compare_on_interior(&a, &b, 1)?.exact())
            } else {
                None
            };
            rows.push(PipelineRow { i, j, float_error, exact_equal });
        }
    }
    Ok(rows)
}

/// Per-generator comparison of the two limits.
#[derive(Clone, Debug, Serialize)]
pub struct LimitRow {
    pub i: usize,
    pub j: usize,
    pub scaled: bool,
    /// `pi0_my = pi0_gp` exactly on the interior; `None` when the per-leg
    /// limit could not be computed.
    pub equal: Option<bool>,
    /// First differing entry, or the error of the per-leg limit.
    pub mismatch: Option<String>,
    /// Deviation of the numeric extrapolation from the exact limit.
    pub numeric_error: Option<f64>,
    pub fallbacks: usize,
    /// Whether the limit operator is nonzero on the interior.
    pub nonzero: bool,
}

/// Exact comparison of `pi0_my` and `pi0_gp` on every generator, optionally
/// with a numeric cross-check from the `q` sequence `qs`.
pub fn crystal_limit_comparison(layout: &Layout, scaled: bool, qs: Option<&[f64]>) -> Result<Vec<LimitRow>> {
    let alg = Algebra::new(layout.n);
    let mut rows = Vec::new();
    for i in 1..=layout.n + 1 {
        for j in 1..=layout.n + 1 {
            let x = generator(&alg, i, j, scaled)?;
            let gp = pi0_gp(layout, &x)?;
            let (equal, mismatch, mut fallbacks) = match pi0_my(layout, &x).and_then(|my| Ok((compare_limits(&my, &gp, 1)?, my))) {
                Ok((dev, my)) => (Some(dev.exact()), dev.first_mismatch, my.fallback_count()),
                Err(e) => (None, Some(e.to_string()), 0),
            };
            let numeric_error = match qs {
                Some(qs) => Some(compare_numeric_limit(&gp, &NumericLimit::new(layout, &x, qs)?, 1)?),
                None => None,
            };
            fallbacks += gp.fallback_count();
            let nonzero = limit_is_nonzero(&gp)?;
            rows.push(LimitRow { i, j, scaled, equal, mismatch, numeric_error, fallbacks, nonzero });
        }
    }
    Ok(rows)
}

fn limit_is_nonzero(op: &super::pipeline::LimitOp) -> Result<bool> {
    op.is_nonzero_on(&super::ops::InteriorBlock::new(op.spaces(), 1))
}

/// Coefficient-wise specialization of an element at `q`.
pub fn theta_q(x: &FnAlgElem, q: &Rat) -> Result<Elem<Rat>> {
    x.specialize_laurent(q)
}
