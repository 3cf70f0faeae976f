use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::ratfield::{Coeff, Rat, RatFunc};

/// A product of generators `u_{ij}`, stored as 1-based `(i, j)` pairs.
/// Inside an [`Elem`] it is always sorted in row-major order.
pub type QMonomial = Vec<(u8, u8)>;

/// Finite linear combination of normal-ordered monomials.
#[derive(Clone, PartialEq, Debug)]
pub struct Elem<C: Coeff> {
    terms: BTreeMap<QMonomial, C>,
}

/// Element of O_t(SL(n+1)) over Q(t).
pub type FnAlgElem = Elem<RatFunc>;

impl<C: Coeff> Default for Elem<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> Elem<C> {
    pub fn zero() -> Self {
        Elem { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::scalar(C::one())
    }

    pub fn scalar(c: C) -> Self {
        Self::term(Vec::new(), c)
    }

    /// `c * m`; the caller guarantees `m` is normal-ordered.
    pub fn term(m: QMonomial, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Elem { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&QMonomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[(u8, u8)]) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// Largest monomial length.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: QMonomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Elem<C>, c: &C) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x.mul(c));
        }
    }

    pub fn add(&self, other: &Elem<C>) -> Elem<C> {
        let mut out = self.clone();
        out.add_scaled(other, &C::one());
        out
    }

    pub fn sub(&self, other: &Elem<C>) -> Elem<C> {
        let mut out = self.clone();
        out.add_scaled(other, &C::one().neg());
        out
    }

    pub fn scale(&self, c: &C) -> Elem<C> {
        let mut out = Elem::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn neg(&self) -> Elem<C> {
        self.scale(&C::one().neg())
    }

    /// Apply `f` to every coefficient, dropping zeros.
    pub fn try_map<D: Coeff>(&self, mut f: impl FnMut(&C) -> Result<D>) -> Result<Elem<D>> {
        let mut out = Elem::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Ok(out)
    }
}

impl FnAlgElem {
    /// Smallest valuation at `t = 0` among the coefficients.
    pub fn min_valuation(&self) -> Option<i64> {
        self.terms.values().filter_map(|c| c.valuation().finite()).min()
    }

    /// Every coefficient lies in A0.
    pub fn is_in_a0(&self) -> bool {
        self.terms.values().all(RatFunc::is_in_a0)
    }

    /// Coefficient-wise substitution `t -> q`.
    pub fn specialize(&self, q: &Rat) -> Result<Elem<Rat>> {
        self.try_map(|c| c.eval_at(q))
    }

    /// Coefficient-wise substitution `t -> q`, refusing non-Laurent coefficients.
    pub fn specialize_laurent(&self, q: &Rat) -> Result<Elem<Rat>> {
        self.try_map(|c| {
            if c.is_laurent() {
                c.eval_at(q)
            } else {
                Err(Error::PoleAt(format!("coefficient {c} is not a Laurent polynomial")))
            }
        })
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for Elem<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let s = c.to_string();
            let (neg, body) = match s.strip_prefix('-') {
                Some(rest) if !rest.contains(' ') => (true, rest.to_string()),
                _ => (false, s),
            };
            let body = if body.contains(' ') { format!("({body})") } else { body };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mon = m.iter().map(|(i, j)| format!("u{i}{j}")).collect::<Vec<_>>().join("*");
            match (body.as_str(), mon.is_empty()) {
                (_, true) => write!(f, "{body}")?,
                ("1", false) => write!(f, "{mon}")?,
                _ => write!(f, "{body}*{mon}")?,
            }
        }
        Ok(())
    }
}

/// All permutations of `0..k` with their inversion counts.
pub fn permutations(k: usize) -> Vec<(Vec<usize>, i64)> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, i64)>) {
        let k = used.len();
        if prefix.len() == k {
            let mut inv = 0;
            for a in 0..k {
                for b in a + 1..k {
                    if prefix[a] > prefix[b] {
                        inv += 1;
                    }
                }
            }
            out.push((prefix.clone(), inv));
            return;
        }
        for x in 0..k {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                go(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// The quantum matrix algebra on `u_{ij}`, `1 <= i, j <= n + 1`, or its
/// quotient by `D = 1` (the coordinate algebra of SL(n+1)).
///
/// Products are reduced to row-major normal order by the rules, for `i < k`
/// and `j < l`,
///
/// ```text
/// u_ij u_il = t u_il u_ij        u_ij u_kj = t u_kj u_ij
/// u_il u_kj = u_kj u_il          u_ij u_kl = u_kl u_ij + (t - t^-1) u_il u_kj
/// ```
///
/// In the quotient, a normal monomial containing every diagonal generator
/// is rewritten with `M' D = M'`, where `M'` drops one copy of each diagonal
/// generator. All other monomials of `M' D` have strictly larger off-diagonal
/// weight `sum (i - j)^2` or lower degree, so the reduction terminates.
///
/// Results are memoized per instance; the cache makes the type `!Sync`, so
/// each thread should own its algebra.
pub struct Algebra<C: Coeff = RatFunc> {
    n: usize,
    t: C,
    t_inv: C,
    t_diff: C,
    sl: bool,
    insert_memo: RefCell<HashMap<(QMonomial, (u8, u8)), Elem<C>>>,
    det_memo: RefCell<HashMap<QMonomial, Elem<C>>>,
    star_memo: RefCell<HashMap<(u8, u8), Elem<C>>>,
}

impl Algebra<RatFunc> {
    /// O_t(SL(n+1)) over Q(t).
    pub fn new(n: usize) -> Self {
        Self::with_parameter(n, RatFunc::t(), true).expect("t is invertible")
    }

    /// The quantum matrix algebra O_t(M_{n+1}) over Q(t), without `D = 1`.
    pub fn matrix(n: usize) -> Self {
        Self::with_parameter(n, RatFunc::t(), false).expect("t is invertible")
    }
}

impl Algebra<Rat> {
    /// O_q(SL(n+1)) over Q at a rational `q`.
    pub fn at(n: usize, q: Rat) -> Result<Self> {
        Self::with_parameter(n, q, true)
    }
}

impl<C: Coeff> Algebra<C> {
    /// The algebra with deformation parameter `t`; `sl` imposes `D = 1`.
    pub fn with_parameter(n: usize, t: C, sl: bool) -> Result<Self> {
        if n == 0 || n > 8 {
            return Err(Error::Invalid(format!("rank {n} out of range")));
        }
        let t_inv = t.inv().ok_or(Error::DivisionByZero)?;
        let t_diff = t.sub(&t_inv);
        Ok(Algebra {
            n,
            t,
            t_inv,
            t_diff,
            sl,
            insert_memo: RefCell::new(HashMap::new()),
            det_memo: RefCell::new(HashMap::new()),
            star_memo: RefCell::new(HashMap::new()),
        })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// Matrix size `n + 1`.
    pub fn size(&self) -> usize {
        self.n + 1
    }

    pub fn is_sl(&self) -> bool {
        self.sl
    }

    pub fn parameter(&self) -> &C {
        &self.t
    }

    /// `(-t)^k`.
    pub fn minus_t_pow(&self, k: i64) -> C {
        let base = if k >= 0 { &self.t } else { &self.t_inv };
        let mut acc = C::one();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(base);
        }
        if k % 2 != 0 {
            acc.neg()
        } else {
            acc
        }
    }

    /// `t^k`.
    pub fn t_pow(&self, k: i64) -> C {
        let c = self.minus_t_pow(k);
        if k % 2 != 0 {
            c.neg()
        } else {
            c
        }
    }

    fn check_index(&self, i: usize, j: usize) -> Result<()> {
        let d = self.size();
        if i == 0 || j == 0 || i > d || j > d {
            return Err(Error::IndexOutOfRange(format!("u{i}{j} with n = {}", self.n)));
        }
        Ok(())
    }

    /// The generator `u_{ij}`.
    pub fn gen(&self, i: usize, j: usize) -> Result<Elem<C>> {
        self.check_index(i, j)?;
        Ok(Elem::term(vec![(i as u8, j as u8)], C::one()))
    }

    /// Normal form of the product `u_{i1 j1} u_{i2 j2} ...`.
    pub fn normal_form(&self, word: &[(usize, usize)]) -> Result<Elem<C>> {
        for &(i, j) in word {
            self.check_index(i, j)?;
        }
        let mut x = Elem::one();
        for &(i, j) in word {
            x = self.times_gen(&x, (i as u8, j as u8));
        }
        Ok(self.reduce_det(&x))
    }

    /// Normal form computed by rewriting one adjacent out-of-order pair at a
    /// time, without memoization. `choose(k)` picks an index in `0..k`; it
    /// selects both the word to rewrite and the position inside it, so a
    /// seeded random chooser explores arbitrary reduction orders. The
    /// determinant rule is applied once every word is ordered.
    pub fn normal_form_by_choice(
        &self,
        word: &[(usize, usize)],
        choose: &mut dyn FnMut(usize) -> usize,
    ) -> Result<Elem<C>> {
        for &(i, j) in word {
            self.check_index(i, j)?;
        }
        let start: QMonomial = word.iter().map(|&(i, j)| (i as u8, j as u8)).collect();
        let mut pending: BTreeMap<QMonomial, C> = BTreeMap::new();
        pending.insert(start, C::one());
        let mut done = Elem::zero();
        while !pending.is_empty() {
            let keys: Vec<QMonomial> = pending.keys().cloned().collect();
            let w = keys[choose(keys.len()) % keys.len()].clone();
            let c = pending.remove(&w).expect("key present");
            if c.is_zero() {
                continue;
            }
            let descents: Vec<usize> = (0..w.len().saturating_sub(1)).filter(|&p| w[p] > w[p + 1]).collect();
            if descents.is_empty() {
                done.add_term(w, c);
                continue;
            }
            let p = descents[choose(descents.len()) % descents.len()];
            let ((a, b), (cc, d)) = (w[p], w[p + 1]);
            let mut push = |x: QMonomial, y: C| {
                let e = pending.entry(x).or_insert_with(C::zero);
                *e = e.add(&y);
            };
            let mut swapped = w.clone();
            swapped.swap(p, p + 1);
            let factor = if a == cc || b == d { self.t_inv.clone() } else { C::one() };
            push(swapped, c.mul(&factor));
            if a > cc && b > d {
                let mut corr = w.clone();
                corr[p] = (cc, b);
                corr[p + 1] = (a, d);
                push(corr, c.mul(&self.t_diff).neg());
            }
        }
        Ok(self.reduce_det(&done))
    }

    /// Normal form without the determinant rule.
    pub(crate) fn times_gen(&self, x: &Elem<C>, g: (u8, u8)) -> Elem<C> {
        let mut out = Elem::zero();
        for (m, c) in &x.terms {
            out.add_scaled(&self.insert(m, g), c);
        }
        out
    }

    /// `m * g` in normal order (no determinant rule), for sorted `m`.
    fn insert(&self, m: &[(u8, u8)], g: (u8, u8)) -> Elem<C> {
        match m.last() {
            None => return Elem::term(vec![g], C::one()),
            Some(&h) if h <= g => {
                let mut v = m.to_vec();
                v.push(g);
                return Elem::term(v, C::one());
            }
            _ => {}
        }
        let key = (m.to_vec(), g);
        if let Some(hit) = self.insert_memo.borrow().get(&key) {
            return hit.clone();
        }
        let h = *m.last().unwrap();
        let p = &m[..m.len() - 1];
        let ((a, b), (c, d)) = (h, g);
        let factor = if a == c || b == d { self.t_inv.clone() } else { C::one() };
        let mut out = self.times_gen(&self.insert(p, g), h).scale(&factor);
        if a > c && b > d {
            let corr = self.times_gen(&self.insert(p, (c, b)), (a, d));
            out.add_scaled(&corr, &self.t_diff.neg());
        }
        self.insert_memo.borrow_mut().insert(key, out.clone());
        out
    }

    /// Product of normal-form elements.
    pub fn mul(&self, x: &Elem<C>, y: &Elem<C>) -> Elem<C> {
        let mut out = Elem::zero();
        for (m, c) in &y.terms {
            let mut z = x.clone();
            for &g in m {
                z = self.times_gen(&z, g);
            }
            out.add_scaled(&z, c);
        }
        self.reduce_det(&out)
    }

    pub fn pow(&self, x: &Elem<C>, k: u32) -> Elem<C> {
        (0..k).fold(Elem::one(), |acc, _| self.mul(&acc, x))
    }

    fn diagonal(&self) -> Vec<(u8, u8)> {
        (1..=self.size() as u8).map(|i| (i, i)).collect()
    }

    /// Drop one copy of each diagonal generator, if all are present.
    fn strip_diagonal(&self, m: &[(u8, u8)]) -> Option<QMonomial> {
        let mut rest = m.to_vec();
        for g in self.diagonal() {
            let pos = rest.iter().position(|&x| x == g)?;
            rest.remove(pos);
        }
        Some(rest)
    }

    /// Apply `D = 1` until no monomial contains the full diagonal.
    pub fn reduce_det(&self, x: &Elem<C>) -> Elem<C> {
        if !self.sl {
            return x.clone();
        }
        let mut out = Elem::zero();
        for (m, c) in &x.terms {
            out.add_scaled(&self.reduce_monomial(m), c);
        }
        out
    }

    fn reduce_monomial(&self, m: &[(u8, u8)]) -> Elem<C> {
        let Some(stripped) = self.strip_diagonal(m) else {
            return Elem::term(m.to_vec(), C::one());
        };
        if let Some(hit) = self.det_memo.borrow().get(m) {
            return hit.clone();
        }
        let base = Elem::term(stripped, C::one());
        let mut rest = base.clone();
        let mut lead = C::zero();
        for (sigma, len) in permutations(self.size()) {
            let mut z = base.clone();
            for (k, &s) in sigma.iter().enumerate() {
                z = self.times_gen(&z, (k as u8 + 1, s as u8 + 1));
            }
            if len == 0 {
                lead = z.coeff(m);
                z.terms.remove(m);
            }
            rest.add_scaled(&z, &self.minus_t_pow(len).neg());
        }
        let inv = lead.inv().expect("diagonal monomial has a unit coefficient");
        let out = self.reduce_det(&rest).scale(&inv);
        self.det_memo.borrow_mut().insert(m.to_vec(), out.clone());
        out
    }

    /// Quantum minor on the given rows and columns (both increasing):
    /// `sum_sigma (-t)^{l(sigma)} u_{r_1 c_sigma(1)} ... u_{r_k c_sigma(k)}`.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<Elem<C>> {
        if rows.len() != cols.len() {
            return Err(Error::Dimension(format!("{} rows, {} columns", rows.len(), cols.len())));
        }
        let mut out = Elem::zero();
        for (sigma, len) in permutations(rows.len()) {
            let word: Vec<(usize, usize)> = rows.iter().zip(&sigma).map(|(&r, &s)| (r, cols[s])).collect();
            out.add_scaled(&self.normal_form(&word)?, &self.minus_t_pow(len));
        }
        Ok(out)
    }

    /// The quantum determinant, reduced (so equal to 1 when `D = 1` is imposed).
    pub fn qdet(&self) -> Elem<C> {
        let all: Vec<usize> = (1..=self.size()).collect();
        self.minor(&all, &all).expect("square minor")
    }

    /// `D^{r,s}`: the quantum minor on rows `!= r` and columns `!= s`.
    pub fn cofactor(&self, r: usize, s: usize) -> Result<Elem<C>> {
        self.check_index(r, s)?;
        let rows: Vec<usize> = (1..=self.size()).filter(|&x| x != r).collect();
        let cols: Vec<usize> = (1..=self.size()).filter(|&x| x != s).collect();
        self.minor(&rows, &cols)
    }

    fn apply_anti<F>(&self, x: &Elem<C>, on_gen: F) -> Elem<C>
    where
        F: Fn((u8, u8)) -> Elem<C>,
    {
        let mut out = Elem::zero();
        for (m, c) in &x.terms {
            let mut z = Elem::one();
            for &g in m.iter().rev() {
                z = self.mul(&z, &on_gen(g));
            }
            out.add_scaled(&z, c);
        }
        out
    }

    /// `(u_rs)^* = (-t)^{s-r} D^{r,s}`, extended anti-multiplicatively with
    /// coefficients fixed.
    pub fn star_gen(&self, r: usize, s: usize) -> Result<Elem<C>> {
        self.check_index(r, s)?;
        let key = (r as u8, s as u8);
        if let Some(hit) = self.star_memo.borrow().get(&key) {
            return Ok(hit.clone());
        }
        let out = self.cofactor(r, s)?.scale(&self.minus_t_pow(s as i64 - r as i64));
        self.star_memo.borrow_mut().insert(key, out.clone());
        Ok(out)
    }

    pub fn star(&self, x: &Elem<C>) -> Elem<C> {
        self.apply_anti(x, |(r, s)| self.star_gen(r as usize, s as usize).expect("valid generator"))
    }

    /// Antipode, `S(u_ij) = (-t)^{i-j} D^{j,i}`.
    pub fn antipode_gen(&self, i: usize, j: usize) -> Result<Elem<C>> {
        Ok(self.cofactor(j, i)?.scale(&self.minus_t_pow(i as i64 - j as i64)))
    }

    pub fn antipode(&self, x: &Elem<C>) -> Elem<C> {
        self.apply_anti(x, |(i, j)| self.antipode_gen(i as usize, j as usize).expect("valid generator"))
    }

    /// Image under the block inclusion map onto the contiguous index range
    /// `first..=last`, landing in `target` (rank `last - first`): `u_ab` goes
    /// to the shifted generator when both indices are in range and to
    /// `delta_ab` otherwise.
    pub fn project(&self, x: &Elem<C>, first: usize, last: usize, target: &Algebra<C>) -> Result<Elem<C>> {
        if first == 0 || last > self.size() || first >= last || target.size() != last - first + 1 {
            return Err(Error::Invalid(format!("bad block {first}..={last}")));
        }
        let inside = |a: u8| (first..=last).contains(&(a as usize));
        let mut out = Elem::zero();
        for (m, c) in &x.terms {
            let mut z = Elem::one();
            for &(a, b) in m {
                if inside(a) && inside(b) {
                    let g = target.gen(a as usize - first + 1, b as usize - first + 1)?;
                    z = target.mul(&z, &g);
                } else if a != b {
                    z = Elem::zero();
                    break;
                }
            }
            out.add_scaled(&z, c);
        }
        Ok(out)
    }
}
