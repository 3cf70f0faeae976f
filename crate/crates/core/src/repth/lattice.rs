use crate::error::{Error, Result};
use crate::linalg::{a0_basis, in_a0_span, is_zero_vec, Mat, Vector};
use crate::ratfield::RatFunc;

use super::kashiwara::KashiwaraOps;
use super::rep::Rep;

/// Free A0-submodule of Q(t)^d of full rank, stored by an A0-basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    pub dim: usize,
    pub basis: Vec<Vector>,
}

impl Lattice {
    pub fn from_generators(dim: usize, gens: &[Vector]) -> Lattice {
        Lattice { dim, basis: a0_basis(gens) }
    }

    /// `A0^d` with the standard basis.
    pub fn standard(dim: usize) -> Lattice {
        let basis = (0..dim)
            .map(|a| {
                let mut v = vec![RatFunc::zero(); dim];
                v[a] = RatFunc::one();
                v
            })
            .collect();
        Lattice { dim, basis }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[RatFunc]) -> bool {
        is_zero_vec(v) || in_a0_span(&self.basis, v)
    }

    pub fn contains_all(&self, vs: &[Vector]) -> bool {
        vs.iter().all(|v| self.contains(v))
    }

    /// Equality as A0-modules.
    pub fn same_as(&self, other: &Lattice) -> bool {
        self.rank() == other.rank() && self.contains_all(&other.basis) && other.contains_all(&self.basis)
    }

    /// First basis vector `b` and index `i` with `E~_i b` or `F~_i b` outside
    /// the lattice.
    pub fn closure_defect(&self, ops: &KashiwaraOps) -> Option<String> {
        for (a, b) in self.basis.iter().enumerate() {
            for i in 0..ops.e_tilde.len() {
                if !self.contains(&ops.e_tilde[i].mul_vec(b)) {
                    return Some(format!("E~{} of basis vector {a}", i + 1));
                }
                if !self.contains(&ops.f_tilde[i].mul_vec(b)) {
                    return Some(format!("F~{} of basis vector {a}", i + 1));
                }
            }
        }
        None
    }

    /// Matrix whose columns are the basis vectors.
    pub fn matrix(&self) -> Mat {
        Mat::from_cols(&self.basis, self.dim)
    }
}

/// A0-span of all `F~_{j_1} ... F~_{j_s} v` for the given generators `v`.
pub fn crystal_lattice(rep: &Rep, ops: &KashiwaraOps, gens: &[Vector]) -> Result<Lattice> {
    let d = rep.dim();
    let mut current = Lattice::from_generators(d, gens);
    loop {
        let mut all = current.basis.clone();
        let mut grew = false;
        for b in &current.basis {
            for ft in &ops.f_tilde {
                let y = ft.mul_vec(b);
                if !current.contains(&y) {
                    grew = true;
                }
                all.push(y);
            }
        }
        if !grew {
            break;
        }
        current = Lattice::from_generators(d, &all);
    }
    if current.rank() < d {
        return Err(Error::DoesNotSpan);
    }
    Ok(current)
}
