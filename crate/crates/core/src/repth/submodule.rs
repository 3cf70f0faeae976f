use crate::cartan::Weight;
use crate::error::{Error, Result};
use crate::linalg::{is_zero_vec, vec_scale, vec_sub, Mat, Vector};
use crate::ratfield::RatFunc;

use super::form::Form;
use super::kashiwara::kashiwara_ops;
use super::lattice::Lattice;
use super::rep::{rho_pairing, Gen, Rep};

/// Submodule together with its inclusion into the ambient module.
#[derive(Clone, Debug)]
pub struct Submodule {
    /// The submodule in its own basis; basis vector `a` is `embedding[a]`.
    pub rep: Rep,
    pub embedding: Vec<Vector>,
    pub highest_weight: Weight,
}

impl Submodule {
    pub fn dim(&self) -> usize {
        self.embedding.len()
    }

    /// Ambient coordinates of a vector given in the submodule basis.
    pub fn include(&self, x: &[RatFunc]) -> Vector {
        let d = self.embedding.first().map_or(0, |v| v.len());
        let mut out = vec![RatFunc::zero(); d];
        for (c, v) in x.iter().zip(&self.embedding) {
            if !c.is_zero() {
                for (o, y) in out.iter_mut().zip(v) {
                    *o = o.add_ref(&c.mul_ref(y));
                }
            }
        }
        out
    }
}

/// Basis of the vectors of weight `lambda` killed by every `E_i`, each
/// normalized so that its first nonzero coordinate is 1.
pub fn singular_vectors(rep: &Rep, lambda: &Weight) -> Vec<Vector> {
    let idx = rep.weight_space(lambda);
    if idx.is_empty() {
        return Vec::new();
    }
    let mut rows = Vec::new();
    for e in &rep.e {
        for r in 0..rep.dim() {
            let row: Vector = idx.iter().map(|&a| e.get(r, a).clone()).collect();
            if !is_zero_vec(&row) {
                rows.push(row);
            }
        }
    }
    let kernel = if rows.is_empty() {
        let id = Mat::identity(idx.len());
        (0..idx.len()).map(|j| id.col(j)).collect()
    } else {
        Mat::from_rows(rows).nullspace()
    };
    kernel
        .into_iter()
        .map(|x| {
            let mut v = vec![RatFunc::zero(); rep.dim()];
            for (c, &a) in x.iter().zip(&idx) {
                v[a] = c.clone();
            }
            normalize_first(v)
        })
        .collect()
}

fn normalize_first(v: Vector) -> Vector {
    match v.iter().find(|x| !x.is_zero()) {
        Some(first) => {
            let inv = first.inv().expect("nonzero");
            vec_scale(&v, &inv)
        }
        None => v,
    }
}

/// The submodule generated by the unique (up to scalar) singular vector of
/// weight `lambda`.
pub fn highest_weight_submodule(rep: &Rep, lambda: &Weight) -> Result<Submodule> {
    let sing = singular_vectors(rep, lambda);
    match sing.len() {
        0 => Err(Error::NoSingularVector(lambda.to_string())),
        1 => generate_submodule(rep, &sing[0]),
        m => Err(Error::Invalid(format!(
            "singular space of weight {lambda} has dimension {m}; choose a vector with singular_vectors"
        ))),
    }
}

/// Submodule generated by a singular weight vector `v`.
///
/// Its Q(t)-dimension is found from the span of all `F`-words applied to `v`;
/// the basis is then taken from the orbit of `v` under the Kashiwara
/// operators `F~_i` (breadth first, keeping vectors independent of those
/// already chosen), sorted by depth below the highest weight so the lowest
/// weight vector comes last.
pub fn generate_submodule(rep: &Rep, v: &[RatFunc]) -> Result<Submodule> {
    let lambda = rep.weight_of(v).ok_or_else(|| Error::Invalid("generator is not a weight vector".into()))?;
    if rep.e.iter().any(|e| !is_zero_vec(&e.mul_vec(v))) {
        return Err(Error::NoSingularVector(lambda.to_string()));
    }
    let span = krylov_span(rep, v);
    let ops = kashiwara_ops(rep);
    let mut basis: Vec<Vector> = vec![v.to_vec()];
    let mut echelon = Echelon::new();
    echelon.insert(v);
    let mut head = 0;
    while head < basis.len() && basis.len() < span.len() {
        let x = basis[head].clone();
        head += 1;
        for i in 1..=rep.rank {
            let y = ops.f(i, &x);
            if !is_zero_vec(&y) && echelon.insert(&y) {
                basis.push(y);
            }
        }
    }
    if basis.len() < span.len() {
        return Err(Error::Invalid("Kashiwara orbit does not span the submodule".into()));
    }
    let depth = |b: &Vector| -> i64 {
        let w = rep.weight_of(b).expect("homogeneous");
        rho_pairing(&(&lambda - &w)).expect("root lattice")
    };
    basis.sort_by_key(|b| depth(b));
    submodule_from_basis(rep, basis, lambda)
}

/// Restrict the action to an invariant subspace with the given basis.
pub fn submodule_from_basis(rep: &Rep, basis: Vec<Vector>, lambda: Weight) -> Result<Submodule> {
    let d = basis.len();
    let b = Mat::from_cols(&basis, rep.dim());
    let coords = |x: &Vector| -> Result<Vector> { b.solve(x) };
    let mut e = Vec::new();
    let mut f = Vec::new();
    for i in 0..rep.rank {
        let mut em = Mat::zeros(d, d);
        let mut fm = Mat::zeros(d, d);
        for (j, bj) in basis.iter().enumerate() {
            let ce = coords(&rep.e[i].mul_vec(bj))?;
            let cf = coords(&rep.f[i].mul_vec(bj))?;
            for r in 0..d {
                em.set(r, j, ce[r].clone());
                fm.set(r, j, cf[r].clone());
            }
        }
        e.push(em);
        f.push(fm);
    }
    let weights: Vec<Weight> = basis
        .iter()
        .map(|v| rep.weight_of(v).ok_or_else(|| Error::Invalid("basis vector is not homogeneous".into())))
        .collect::<Result<_>>()?;
    let hw = weights.iter().position(|w| *w == lambda);
    let labels = (1..=d).map(|k| format!("v{k}")).collect();
    let sub = Rep::from_ef(rep.rank, labels, weights, e, f, hw);
    Ok(Submodule { rep: sub, embedding: basis, highest_weight: lambda })
}

/// Q(t)-basis of the span of all `F`-words applied to `v`.
pub fn krylov_span(rep: &Rep, v: &[RatFunc]) -> Vec<Vector> {
    let mut echelon = Echelon::new();
    let mut out = vec![v.to_vec()];
    echelon.insert(v);
    let mut head = 0;
    while head < out.len() {
        let x = out[head].clone();
        head += 1;
        for f in &rep.f {
            let y = f.mul_vec(&x);
            if !is_zero_vec(&y) && echelon.insert(&y) {
                out.push(y);
            }
        }
    }
    out
}

/// Incremental row echelon form used for independence tests.
struct Echelon {
    rows: Vec<(usize, Vector)>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    fn reduce(&self, v: &[RatFunc]) -> Vector {
        let mut x = v.to_vec();
        for (p, r) in &self.rows {
            if !x[*p].is_zero() {
                let f = x[*p].clone();
                x = vec_sub(&x, &vec_scale(r, &f));
            }
        }
        x
    }

    /// Adds `v` if it is independent of the stored vectors.
    fn insert(&mut self, v: &[RatFunc]) -> bool {
        let x = self.reduce(v);
        let Some(p) = x.iter().position(|c| !c.is_zero()) else { return false };
        let inv = x[p].inv().expect("nonzero");
        let x = vec_scale(&x, &inv);
        for (_, r) in self.rows.iter_mut() {
            if !r[p].is_zero() {
                let f = r[p].clone();
                *r = vec_sub(r, &vec_scale(&x, &f));
            }
        }
        self.rows.push((p, x));
        true
    }
}

/// Module map `T: A -> B` with `T(from) = to`, where `from` generates `A`
/// under the `F_i`. The map is read off from matching `F`-words and then
/// checked against every generator.
pub fn intertwiner(a: &Rep, b: &Rep, from: &[RatFunc], to: &[RatFunc]) -> Result<Mat> {
    let mut echelon = Echelon::new();
    let mut src = vec![from.to_vec()];
    let mut dst = vec![to.to_vec()];
    echelon.insert(from);
    let mut words: Vec<(Vector, Vector)> = vec![(from.to_vec(), to.to_vec())];
    let mut head = 0;
    while head < words.len() {
        let (x, y) = words[head].clone();
        head += 1;
        for i in 0..a.rank {
            let fx = a.f[i].mul_vec(&x);
            let fy = b.f[i].mul_vec(&y);
            if !is_zero_vec(&fx) && echelon.insert(&fx) {
                src.push(fx.clone());
                dst.push(fy.clone());
                words.push((fx, fy));
            }
        }
    }
    if src.len() < a.dim() {
        return Err(Error::Invalid("source vector does not generate the module".into()));
    }
    let s = Mat::from_cols(&src, a.dim());
    let d = Mat::from_cols(&dst, b.dim());
    let t = d.mul(&s.inverse()?);
    for i in 1..=a.rank {
        for g in [Gen::E(i), Gen::F(i), Gen::K(i)] {
            if t.mul(a.action(g)) != b.action(g).mul(&t) {
                return Err(Error::Invalid(format!("map does not commute with {g}")));
            }
        }
    }
    Ok(t)
}

/// Orthogonal splitting of a module and of a lattice along a submodule.
#[derive(Clone, Debug)]
pub struct OrthogonalSplit {
    pub w: Vec<Vector>,
    pub w_perp: Vec<Vector>,
    pub restricted_det_w: RatFunc,
    pub restricted_det_perp: RatFunc,
    pub lattice_w: Lattice,
    pub lattice_perp: Lattice,
    /// Every lattice vector projects into the lattice along `W (+) W^perp`.
    pub projections_in_lattice: bool,
    /// `L = (L cap W) (+) (L cap W^perp)`.
    pub recombines: bool,
}

impl OrthogonalSplit {
    pub fn passed(&self) -> bool {
        !self.restricted_det_w.is_zero()
            && (self.w_perp.is_empty() || !self.restricted_det_perp.is_zero())
            && self.projections_in_lattice
            && self.recombines
    }
}

/// Computes `W^perp`, checks the form is nondegenerate on `W` and `W^perp`,
/// and splits the lattice by projecting its basis onto both summands.
pub fn orthogonal_decompose(rep: &Rep, form: &Form, w: &[Vector], lattice: &Lattice) -> Result<OrthogonalSplit> {
    let d = rep.dim();
    let gw = form.restricted_gram(w);
    let restricted_det_w = gw.det();
    if restricted_det_w.is_zero() {
        return Err(Error::DegenerateRestriction("W".into()));
    }
    let rows: Vec<Vector> = w.iter().map(|x| form.gram.mul_vec(x)).collect();
    let w_perp = if rows.is_empty() { Lattice::standard(d).basis } else { Mat::from_rows(rows).nullspace() };
    let restricted_det_perp = if w_perp.is_empty() { RatFunc::one() } else { form.restricted_gram(&w_perp).det() };
    if restricted_det_perp.is_zero() {
        return Err(Error::DegenerateRestriction("W^perp".into()));
    }
    // projection onto W along W^perp: P x = W (W^T G W)^-1 W^T G x
    let gw_inv = gw.inverse()?;
    let wm = Mat::from_cols(w, d);
    let proj = wm.mul(&gw_inv).mul(&wm.transpose()).mul(&form.gram);
    let mut pw = Vec::new();
    let mut pp = Vec::new();
    for b in &lattice.basis {
        let x = proj.mul_vec(b);
        pp.push(vec_sub(b, &x));
        pw.push(x);
    }
    let projections_in_lattice = lattice.contains_all(&pw) && lattice.contains_all(&pp);
    let lattice_w = Lattice::from_generators(d, &pw);
    let lattice_perp = Lattice::from_generators(d, &pp);
    let mut both = lattice_w.basis.clone();
    both.extend(lattice_perp.basis.iter().cloned());
    let sum = Lattice { dim: d, basis: both };
    let recombines = lattice_w.rank() + lattice_perp.rank() == d && sum.same_as(lattice);
    Ok(OrthogonalSplit {
        w: w.to_vec(),
        w_perp,
        restricted_det_w,
        restricted_det_perp,
        lattice_w,
        lattice_perp,
        projections_in_lattice,
        recombines,
    })
}
