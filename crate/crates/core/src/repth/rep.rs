use crate::cartan::{cartan_matrix, CartanData, Weight};
use crate::error::{Error, Result};
use crate::linalg::{Mat, Vector};
use crate::ratfield::{q_binomial, q_factorial, q_int, RatFunc};

/// Finite-dimensional weight module over U_t(sl_{n+1}), given by action
/// matrices in a basis of weight vectors.
///
/// Generator matrices are stored 0-based: `e[i - 1]` is the matrix of `E_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rep {
    pub rank: usize,
    pub labels: Vec<String>,
    pub weights: Vec<Weight>,
    pub e: Vec<Mat>,
    pub f: Vec<Mat>,
    pub k: Vec<Mat>,
    pub kinv: Vec<Mat>,
    /// Basis index of a designated highest-weight vector, if any.
    pub hw: Option<usize>,
}

/// Generator of U_t used in words and action lookups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    E(usize),
    F(usize),
    K(usize),
    Kinv(usize),
}

impl std::fmt::Display for Gen {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Gen::E(i) => write!(f, "E{i}"),
            Gen::F(i) => write!(f, "F{i}"),
            Gen::K(i) => write!(f, "K{i}"),
            Gen::Kinv(i) => write!(f, "K{i}^-1"),
        }
    }
}

impl Rep {
    /// Assemble a module from weights and `E`/`F` matrices; the `K_i` are
    /// determined by the weights.
    pub fn from_ef(
        rank: usize,
        labels: Vec<String>,
        weights: Vec<Weight>,
        e: Vec<Mat>,
        f: Vec<Mat>,
        hw: Option<usize>,
    ) -> Rep {
        let (k, kinv) = k_matrices(rank, &weights);
        Rep { rank, labels, weights, e, f, k, kinv, hw }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn cartan(&self) -> CartanData {
        cartan_matrix(self.rank)
    }

    pub fn action(&self, g: Gen) -> &Mat {
        match g {
            Gen::E(i) => &self.e[i - 1],
            Gen::F(i) => &self.f[i - 1],
            Gen::K(i) => &self.k[i - 1],
            Gen::Kinv(i) => &self.kinv[i - 1],
        }
    }

    /// Matrix of a word `g_1 g_2 ... g_r` (the rightmost letter acts first).
    pub fn word_matrix(&self, word: &[Gen]) -> Mat {
        word.iter().fold(Mat::identity(self.dim()), |acc, &g| acc.mul(self.action(g)))
    }

    /// Divided power `F_i^(k) = F_i^k / [k]!`.
    pub fn f_divided(&self, i: usize, k: u32) -> Mat {
        divided(&self.f[i - 1], k)
    }

    pub fn e_divided(&self, i: usize, k: u32) -> Mat {
        divided(&self.e[i - 1], k)
    }

    /// Diagonal operator `K^mu` acting by `t^{(mu, wt v)}`.
    pub fn k_weight(&self, mu: &Weight) -> Mat {
        let c = self.cartan();
        let d: Vec<RatFunc> = self
            .weights
            .iter()
            .map(|w| RatFunc::t_pow(c.pairing_int(mu, w).expect("integral exponent")))
            .collect();
        Mat::diagonal(&d)
    }

    /// Diagonal operator `K^{2 rho}` acting by `t^{(wt v, 2 rho)}`.
    pub fn k_two_rho(&self) -> Mat {
        let d: Vec<RatFunc> = self.weights.iter().map(|w| RatFunc::t_pow(two_rho_pairing(w))).collect();
        Mat::diagonal(&d)
    }

    /// Basis indices of a given weight.
    pub fn weight_space(&self, mu: &Weight) -> Vec<usize> {
        (0..self.dim()).filter(|&a| &self.weights[a] == mu).collect()
    }

    /// Weight of a vector that is known to be homogeneous.
    pub fn weight_of(&self, v: &[RatFunc]) -> Option<Weight> {
        let mut found: Option<&Weight> = None;
        for (a, x) in v.iter().enumerate() {
            if !x.is_zero() {
                match found {
                    None => found = Some(&self.weights[a]),
                    Some(w) if w == &self.weights[a] => {}
                    Some(_) => return None,
                }
            }
        }
        found.cloned()
    }

    pub fn apply(&self, g: Gen, v: &[RatFunc]) -> Vector {
        self.action(g).mul_vec(v)
    }

    /// Basis vector `b_a` as a coordinate vector.
    pub fn basis_vector(&self, a: usize) -> Vector {
        let mut v = vec![RatFunc::zero(); self.dim()];
        v[a] = RatFunc::one();
        v
    }

    /// Replace a matrix entry, for fault injection in tests.
    pub fn with_entry(&self, g: Gen, row: usize, col: usize, value: RatFunc) -> Rep {
        let mut r = self.clone();
        let m = match g {
            Gen::E(i) => &mut r.e[i - 1],
            Gen::F(i) => &mut r.f[i - 1],
            Gen::K(i) => &mut r.k[i - 1],
            Gen::Kinv(i) => &mut r.kinv[i - 1],
        };
        m.set(row, col, value);
        r
    }
}

/// `(mu, 2 rho)`: for type A, `sum_i mu_i * i * (n + 1 - i)`, always an integer.
pub fn two_rho_pairing(mu: &Weight) -> i64 {
    let n = mu.rank() as i64;
    mu.coords.iter().enumerate().map(|(i, &c)| c * (i as i64 + 1) * (n - i as i64)).sum()
}

/// `(mu, rho)` for `mu` in the root lattice.
pub fn rho_pairing(mu: &Weight) -> Result<i64> {
    let twice = two_rho_pairing(mu);
    if twice % 2 != 0 {
        return Err(Error::Invalid(format!("(mu, rho) is not an integer for mu = {mu}")));
    }
    Ok(twice / 2)
}

fn divided(m: &Mat, k: u32) -> Mat {
    let mut p = Mat::identity(m.rows());
    for _ in 0..k {
        p = p.mul(m);
    }
    p.scale(&q_factorial(k).inv().expect("nonzero factorial"))
}

fn k_matrices(rank: usize, weights: &[Weight]) -> (Vec<Mat>, Vec<Mat>) {
    let mut k = Vec::with_capacity(rank);
    let mut kinv = Vec::with_capacity(rank);
    for i in 1..=rank {
        let d: Vec<RatFunc> = weights.iter().map(|w| RatFunc::t_pow(w.at(i))).collect();
        let di: Vec<RatFunc> = weights.iter().map(|w| RatFunc::t_pow(-w.at(i))).collect();
        k.push(Mat::diagonal(&d));
        kinv.push(Mat::diagonal(&di));
    }
    (k, kinv)
}

/// The vector representation on `e_1, ..., e_{n+1}`: `E_i e_{i+1} = e_i`,
/// `F_i e_i = e_{i+1}`.
pub fn fundamental_rep(n: usize) -> Rep {
    assert!(n >= 1, "rank must be positive");
    let c = cartan_matrix(n);
    let d = n + 1;
    let mut weights = vec![Weight::fundamental(n, 1)];
    for j in 1..d {
        let next = &weights[j - 1] - &c.alpha(j);
        weights.push(next);
    }
    let mut e = Vec::new();
    let mut f = Vec::new();
    for i in 1..=n {
        let mut ei = Mat::zeros(d, d);
        let mut fi = Mat::zeros(d, d);
        ei.set(i - 1, i, RatFunc::one());
        fi.set(i, i - 1, RatFunc::one());
        e.push(ei);
        f.push(fi);
    }
    let labels = (1..=d).map(|j| format!("e{j}")).collect();
    Rep::from_ef(n, labels, weights, e, f, Some(0))
}

/// The irreducible U_t(sl_2)-module of highest weight `m` in the
/// divided-power basis `v_k = F^(k) v`, `k = 0..m`.
pub fn sl2_irrep(m: usize) -> Rep {
    let d = m + 1;
    let mut e = Mat::zeros(d, d);
    let mut f = Mat::zeros(d, d);
    for k in 0..d {
        if k + 1 < d {
            f.set(k + 1, k, q_int(k as i64 + 1));
        }
        if k > 0 {
            e.set(k - 1, k, q_int(m as i64 - k as i64 + 1));
        }
    }
    let weights = (0..d).map(|k| Weight::new(vec![m as i64 - 2 * k as i64])).collect();
    let labels = (0..d).map(|k| format!("v{k}")).collect();
    Rep::from_ef(1, labels, weights, vec![e], vec![f], Some(0))
}

/// Tensor product through `E -> E (x) K^-1 + 1 (x) E`, `F -> F (x) 1 + K (x) F`,
/// `K -> K (x) K`; the basis is ordered lexicographically by factor indices.
pub fn tensor_rep(a: &Rep, b: &Rep) -> Rep {
    assert_eq!(a.rank, b.rank, "tensor factors must have equal rank");
    let ia = Mat::identity(a.dim());
    let ib = Mat::identity(b.dim());
    let mut e = Vec::new();
    let mut f = Vec::new();
    for i in 0..a.rank {
        e.push(a.e[i].kron(&b.kinv[i]).add(&ia.kron(&b.e[i])));
        f.push(a.f[i].kron(&ib).add(&a.k[i].kron(&b.f[i])));
    }
    let mut labels = Vec::new();
    let mut weights = Vec::new();
    for x in 0..a.dim() {
        for y in 0..b.dim() {
            labels.push(format!("{}⊗{}", a.labels[x], b.labels[y]));
            weights.push(&a.weights[x] + &b.weights[y]);
        }
    }
    let hw = match (a.hw, b.hw) {
        (Some(x), Some(y)) => Some(x * b.dim() + y),
        _ => None,
    };
    Rep::from_ef(a.rank, labels, weights, e, f, hw)
}

/// `V(w_1)^{(x) m}`.
pub fn tensor_power(n: usize, m: usize) -> Rep {
    assert!(m >= 1, "tensor power must be positive");
    let v = fundamental_rep(n);
    (1..m).fold(v.clone(), |acc, _| tensor_rep(&acc, &v))
}

/// Outcome of the defining-relation check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub checked: usize,
    /// First failing relation: its name and the generators involved.
    pub failure: Option<String>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Check every defining relation of U_t(sl_{n+1}) as an exact matrix
/// identity: K-invertibility and commutation, the K-conjugation scaling of E
/// and F, the E-F commutator and both quantum Serre relations.
pub fn verify_uq_relations(rep: &Rep) -> RelationReport {
    let n = rep.rank;
    let c = rep.cartan();
    let dim = rep.dim();
    let id = Mat::identity(dim);
    let zero = Mat::zeros(dim, dim);
    let mut checked = 0;
    macro_rules! relation {
        ($name:expr, $lhs:expr, $rhs:expr) => {{
            checked += 1;
            if let Some((r, col)) = $lhs.first_difference(&$rhs) {
                let failure = Some(format!("{} fails at entry ({r},{col})", $name));
                return RelationReport { checked, failure };
            }
        }};
    }
    let denom = RatFunc::t().sub_ref(&RatFunc::t_pow(-1)).inv().expect("t - 1/t is nonzero");
    for i in 1..=n {
        let (k, ki) = (&rep.k[i - 1], &rep.kinv[i - 1]);
        relation!(format!("K-invertibility K{i} K{i}^-1 = 1"), k.mul(ki), id);
        relation!(format!("K-invertibility K{i}^-1 K{i} = 1"), ki.mul(k), id);
        for j in 1..=n {
            let kj = &rep.k[j - 1];
            relation!(format!("K-commutation K{i} K{j}"), k.mul(kj), kj.mul(k));
            let a = c.a(i, j);
            relation!(
                format!("K-E conjugation K{i} E{j} K{i}^-1 = t^{a} E{j}"),
                k.mul(&rep.e[j - 1]).mul(ki),
                rep.e[j - 1].scale(&RatFunc::t_pow(a))
            );
            relation!(
                format!("K-F conjugation K{i} F{j} K{i}^-1 = t^{} F{j}", -a),
                k.mul(&rep.f[j - 1]).mul(ki),
                rep.f[j - 1].scale(&RatFunc::t_pow(-a))
            );
            let comm = rep.e[i - 1].mul(&rep.f[j - 1]).sub(&rep.f[j - 1].mul(&rep.e[i - 1]));
            let rhs = if i == j { k.sub(ki).scale(&denom) } else { zero.clone() };
            relation!(format!("E-F commutator [E{i}, F{j}]"), comm, rhs);
            if i != j {
                let order = (1 - a) as usize;
                for (name, x, y) in [("E", &rep.e[i - 1], &rep.e[j - 1]), ("F", &rep.f[i - 1], &rep.f[j - 1])] {
                    let mut total = zero.clone();
                    for s in 0..=order {
                        let mut term = Mat::identity(dim);
                        for _ in 0..order - s {
                            term = term.mul(x);
                        }
                        term = term.mul(y);
                        for _ in 0..s {
                            term = term.mul(x);
                        }
                        let coeff = q_binomial(order as i64, s as i64);
                        let coeff = if s % 2 == 1 { coeff.neg_ref() } else { coeff };
                        total = total.add(&term.scale(&coeff));
                    }
                    relation!(format!("quantum Serre relation ({name}{i}, {name}{j})"), total, zero);
                }
            }
        }
    }
    RelationReport { checked, failure: None }
}
