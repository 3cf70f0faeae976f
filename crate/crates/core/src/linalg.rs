//! Dense linear algebra over Q(t), plus the A0-specific reductions used for
//! lattice computations (A0 is a discrete valuation ring with uniformizer t).

use std::fmt;

use crate::error::{Error, Result};
use crate::ratfield::{RatFunc, Valuation};

pub type Vector = Vec<RatFunc>;

/// Row-major dense matrix over Q(t).
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<RatFunc>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![RatFunc::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, RatFunc::one());
        }
        m
    }

    pub fn diagonal(d: &[RatFunc]) -> Self {
        let mut m = Mat::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vector>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vector], dim: usize) -> Self {
        let mut m = Mat::zeros(dim, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), dim, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RatFunc) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[RatFunc] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Mat {
        let mut m = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                if !x.is_zero() {
                    m.set(j, i, x.clone());
                }
            }
        }
        m
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).add_ref(&a.mul_ref(b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[RatFunc]) -> Vector {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(RatFunc::zero(), |acc, (a, b)| {
                    if a.is_zero() || b.is_zero() {
                        acc
                    } else {
                        acc.add_ref(&a.mul_ref(b))
                    }
                })
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        self.zip_with(other, |a, b| a.add_ref(b))
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.zip_with(other, |a, b| a.sub_ref(b))
    }

    fn zip_with(&self, other: &Mat, f: impl Fn(&RatFunc, &RatFunc) -> RatFunc) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: &RatFunc) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.mul_ref(c)).collect() }
    }

    /// Kronecker product `self (x) other`.
    pub fn kron(&self, other: &Mat) -> Mat {
        let mut out = Mat::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * other.rows + k, j * other.cols + l, a.mul_ref(b));
                        }
                    }
                }
            }
        }
        out
    }

    /// Map every entry, e.g. a substitution of `t`.
    pub fn map(&self, f: impl Fn(&RatFunc) -> RatFunc) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// First entry where two matrices differ.
    pub fn first_difference(&self, other: &Mat) -> Option<(usize, usize)> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Some((self.rows.min(other.rows), self.cols.min(other.cols)));
        }
        let k = self.data.iter().zip(&other.data).position(|(a, b)| a != b)?;
        Some((k / self.cols, k % self.cols))
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = pick_pivot(&m, r, c) else { continue };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j).mul_ref(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = m.get(i, c).clone();
                    for j in c..m.cols {
                        let rj = m.get(r, j);
                        if !rj.is_zero() {
                            let v = m.get(i, j).sub_ref(&f.mul_ref(rj));
                            m.set(i, j, v);
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : self x = 0}`.
    pub fn nullspace(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![RatFunc::zero(); self.cols];
                x[f] = RatFunc::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    x[pc] = r.get(row, f).neg_ref();
                }
                x
            })
            .collect()
    }

    /// One solution of `self x = b` (free variables set to zero).
    pub fn solve(&self, b: &[RatFunc]) -> Result<Vector> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Err(Error::NoSolution);
        }
        let mut x = vec![RatFunc::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Mat> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, RatFunc::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::DivisionByZero);
        }
        let mut inv = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    pub fn det(&self) -> RatFunc {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = RatFunc::one();
        for c in 0..n {
            let Some(p) = pick_pivot(&m, c, c) else { return RatFunc::zero() };
            if p != c {
                m.swap_rows(p, c);
                det = det.neg_ref();
            }
            let piv = m.get(c, c).clone();
            det = det.mul_ref(&piv);
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).mul_ref(&inv);
                for j in c..n {
                    let cj = m.get(c, j);
                    if !cj.is_zero() {
                        let v = m.get(i, j).sub_ref(&f.mul_ref(cj));
                        m.set(i, j, v);
                    }
                }
            }
        }
        det
    }
}

/// Nonzero entry in column `c` at or below row `r`, preferring the one with
/// the smallest representation to limit coefficient growth.
fn pick_pivot(m: &Mat, r: usize, c: usize) -> Option<usize> {
    (r..m.rows)
        .filter(|&i| !m.get(i, c).is_zero())
        .min_by_key(|&i| {
            let x = m.get(i, c);
            x.num().coeffs().len() + x.den().coeffs().len()
        })
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

pub fn dot(a: &[RatFunc], b: &[RatFunc]) -> RatFunc {
    a.iter().zip(b).fold(RatFunc::zero(), |acc, (x, y)| {
        if x.is_zero() || y.is_zero() {
            acc
        } else {
            acc.add_ref(&x.mul_ref(y))
        }
    })
}

pub fn vec_add(a: &[RatFunc], b: &[RatFunc]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x.add_ref(y)).collect()
}

pub fn vec_sub(a: &[RatFunc], b: &[RatFunc]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x.sub_ref(y)).collect()
}

pub fn vec_scale(a: &[RatFunc], c: &RatFunc) -> Vector {
    a.iter().map(|x| x.mul_ref(c)).collect()
}

pub fn is_zero_vec(a: &[RatFunc]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Smallest valuation among the entries; `Infinite` for the zero vector.
pub fn vec_valuation(a: &[RatFunc]) -> Valuation {
    a.iter().map(|x| x.valuation()).min().unwrap_or(Valuation::Infinite)
}

/// A0-basis of the A0-module spanned by `gens` inside Q(t)^dim.
///
/// Column reduction: repeatedly pick, among the remaining generators and the
/// rows not yet used, the entry of minimal valuation (ties: lowest row, then
/// lowest generator index); it divides every other entry of its row in A0,
/// so that row can be cleared from the other generators by A0-operations.
pub fn a0_basis(gens: &[Vector]) -> Vec<Vector> {
    let mut work: Vec<Vector> = gens.iter().filter(|g| !is_zero_vec(g)).cloned().collect();
    let Some(dim) = work.first().map(|g| g.len()) else { return Vec::new() };
    let mut used_rows = vec![false; dim];
    let mut basis = Vec::new();
    while !work.is_empty() {
        let mut best: Option<(i64, usize, usize)> = None;
        for (g, v) in work.iter().enumerate() {
            for (r, x) in v.iter().enumerate() {
                if used_rows[r] {
                    continue;
                }
                if let Valuation::Finite(val) = x.valuation() {
                    let key = (val, r, g);
                    if best.is_none_or(|b| key < b) {
                        best = Some(key);
                    }
                }
            }
        }
        let Some((_, r, g)) = best else { break };
        let pivot = work.swap_remove(g);
        let inv = pivot[r].inv().expect("nonzero pivot");
        for v in work.iter_mut() {
            if !v[r].is_zero() {
                let f = v[r].mul_ref(&inv);
                *v = vec_sub(v, &vec_scale(&pivot, &f));
            }
        }
        work.retain(|v| !is_zero_vec(v));
        used_rows[r] = true;
        basis.push(pivot);
    }
    basis
}

/// Coordinates of `v` in the Q(t)-linearly independent family `basis`.
pub fn coordinates(basis: &[Vector], v: &[RatFunc]) -> Result<Vector> {
    if basis.is_empty() {
        return if is_zero_vec(v) { Ok(Vec::new()) } else { Err(Error::NoSolution) };
    }
    Mat::from_cols(basis, v.len()).solve(v)
}

/// Whether `v` lies in the A0-span of the independent family `basis`.
pub fn in_a0_span(basis: &[Vector], v: &[RatFunc]) -> bool {
    coordinates(basis, v).is_ok_and(|c| c.iter().all(|x| x.is_in_a0()))
}

/// Solve `a x = b` with `x` in A0^k.
///
/// Brings `a` to diagonal form `U a V = D` by row and column operations that
/// are invertible over A0, always pivoting on an entry of minimal valuation.
/// Because `U` and `V` are A0-unimodular, an A0 solution exists iff the
/// determined part of `D y = U b` lies in A0. The two failure modes are
/// reported separately: [`Error::NoSolution`] when the system is inconsistent
/// over Q(t), [`Error::NotInA0Solution`] when it is consistent but every
/// solution has a coefficient of negative valuation.
pub fn solve_over_a0(a: &Mat, b: &[RatFunc]) -> Result<Vector> {
    let (m, k) = (a.rows(), a.cols());
    assert_eq!(b.len(), m, "right-hand side length mismatch");
    let mut d = a.clone();
    let mut rhs: Vector = b.to_vec();
    let mut v = Mat::identity(k);
    let mut s = 0;
    while s < m.min(k) {
        let mut best: Option<(i64, usize, usize)> = None;
        for i in s..m {
            for j in s..k {
                if let Valuation::Finite(val) = d.get(i, j).valuation() {
                    let key = (val, i, j);
                    if best.is_none_or(|b| key < b) {
                        best = Some(key);
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        d.swap_rows(s, pi);
        rhs.swap(s, pi);
        swap_cols(&mut d, s, pj);
        swap_cols(&mut v, s, pj);
        let inv = d.get(s, s).inv().expect("nonzero pivot");
        for i in s + 1..m {
            if d.get(i, s).is_zero() {
                continue;
            }
            let f = d.get(i, s).mul_ref(&inv);
            for j in s..k {
                let x = d.get(s, j);
                if !x.is_zero() {
                    let val = d.get(i, j).sub_ref(&f.mul_ref(x));
                    d.set(i, j, val);
                }
            }
            rhs[i] = rhs[i].sub_ref(&f.mul_ref(&rhs[s]));
        }
        for j in s + 1..k {
            if d.get(s, j).is_zero() {
                continue;
            }
            let f = d.get(s, j).mul_ref(&inv);
            for i in 0..m {
                let x = d.get(i, s);
                if !x.is_zero() {
                    let val = d.get(i, j).sub_ref(&f.mul_ref(x));
                    d.set(i, j, val);
                }
            }
            for i in 0..k {
                let x = v.get(i, s);
                if !x.is_zero() {
                    let val = v.get(i, j).sub_ref(&f.mul_ref(x));
                    v.set(i, j, val);
                }
            }
        }
        s += 1;
    }
    if rhs[s..].iter().any(|x| !x.is_zero()) {
        return Err(Error::NoSolution);
    }
    let mut y = vec![RatFunc::zero(); k];
    for i in 0..s {
        y[i] = rhs[i].div_ref(d.get(i, i))?;
        if let Valuation::Finite(val) = y[i].valuation() {
            if val < 0 {
                return Err(Error::NotInA0Solution {
                    valuation: val,
                    detail: format!("invariant factor {} of {}", i + 1, s),
                });
            }
        }
    }
    Ok(v.mul_vec(&y))
}

fn swap_cols(m: &mut Mat, a: usize, b: usize) {
    if a != b {
        for i in 0..m.rows() {
            let x = m.get(i, a).clone();
            let y = m.get(i, b).clone();
            m.set(i, a, y);
            m.set(i, b, x);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(k: i64) -> RatFunc {
        RatFunc::t_pow(k)
    }

    fn c(k: i64) -> RatFunc {
        RatFunc::from_int(k)
    }

    #[test]
    fn inverse_and_det() {
        let m = Mat::from_rows(vec![vec![c(1), t(1)], vec![t(-1), c(2)]]);
        assert_eq!(m.det(), c(1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(2));
    }

    #[test]
    fn nullspace_is_annihilated() {
        let m = Mat::from_rows(vec![vec![c(1), t(1), c(0)], vec![t(1), t(2), c(0)]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for x in ns {
            assert!(is_zero_vec(&m.mul_vec(&x)));
        }
    }

    #[test]
    fn a0_basis_of_redundant_generators() {
        // span_A0 { (1, 0), (t^-1, 1), (0, t) } = span_A0 { (t^-1, 1), (1, 0) }
        let gens = vec![vec![c(1), c(0)], vec![t(-1), c(1)], vec![c(0), t(1)]];
        let b = a0_basis(&gens);
        assert_eq!(b.len(), 2);
        for g in &gens {
            assert!(in_a0_span(&b, g));
        }
        assert!(!in_a0_span(&b, &[t(-2), c(0)]));
    }

    #[test]
    fn solve_over_a0_distinguishes_failures() {
        let a = Mat::from_rows(vec![vec![t(1)], vec![c(0)]]);
        assert!(matches!(solve_over_a0(&a, &[c(1), c(0)]), Err(Error::NotInA0Solution { .. })));
        assert!(matches!(solve_over_a0(&a, &[c(1), c(1)]), Err(Error::NoSolution)));
        let x = solve_over_a0(&a, &[t(2), c(0)]).unwrap();
        assert_eq!(x, vec![t(1)]);
    }

    #[test]
    fn solve_over_a0_uses_freedom() {
        // x + t^-1 y = 1 has the A0 solution (1, 0) even though y is free.
        let a = Mat::from_rows(vec![vec![c(1), t(-1)]]);
        let x = solve_over_a0(&a, &[c(1)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![c(1)]);
        assert!(x.iter().all(|v| v.is_in_a0()));
    }
}
