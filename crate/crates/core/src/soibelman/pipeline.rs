use std::cell::{Cell, OnceCell};
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_integer::Integer;
use num_traits::Zero;

use crate::cartan::{cartan_matrix, longest_word, WeylWord};
use crate::error::{Error, Result};
use crate::fnalg::{Algebra, FnAlgElem};
use crate::ratfield::{rat_to_string, Rat, RatFunc};

use super::entry::{recognize_rational, Entry, Field, FloatAt, Leading, LeadingOrder};
use super::ops::{Deviation, InteriorBlock, LegOp, TruncOp, TruncSpace};

/// Upper bound on the dimension of the full tensor product space.
pub const MAX_DIMENSION: usize = 1 << 21;

/// Sample points used when leading terms cancel.
pub const FALLBACK_QS: [f64; 2] = [1e-3, 1e-4];

/// Default sequence for numeric limits.
pub const DEFAULT_QS: [f64; 3] = [1e-2, 1e-3, 1e-4];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cutoffs {
    /// Basis size `N` of each half-line leg.
    pub cutoff: usize,
    /// Half-width `M` of each window leg.
    pub window: usize,
}

impl Default for Cutoffs {
    fn default() -> Self {
        Cutoffs { cutoff: 16, window: 8 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LegKind {
    /// `pi_q` on a half-line.
    Disc,
    /// `chi_q` on a window.
    Torus,
}

/// Legs of the Soibelman representation: one disc leg per letter of a
/// reduced word of `w_0`, then torus legs `1..=n`.
#[derive(Clone, Debug)]
pub struct Layout {
    pub n: usize,
    pub word: WeylWord,
    pub spaces: Vec<TruncSpace>,
    /// Index `i` of the projection `phi_i` used on each leg.
    pub blocks: Vec<usize>,
    pub kinds: Vec<LegKind>,
}

impl Layout {
    pub fn new(n: usize, cutoffs: Cutoffs) -> Result<Self> {
        Layout::with_word(longest_word(n), cutoffs)
    }

    pub fn with_word(word: WeylWord, cutoffs: Cutoffs) -> Result<Self> {
        let n = word.rank;
        if n == 0 {
            return Err(Error::Invalid("rank must be positive".into()));
        }
        if word.len() != n * (n + 1) / 2 || !word.sends_positive_to_negative(&cartan_matrix(n)) {
            return Err(Error::Invalid(format!("{:?} is not a reduced word of w0", word.letters)));
        }
        let disc = TruncSpace::half_line(cutoffs.cutoff)?;
        let torus = TruncSpace::window(cutoffs.window)?;
        let mut spaces = vec![disc; word.len()];
        spaces.extend(std::iter::repeat_n(torus, n));
        let mut blocks = word.letters.clone();
        blocks.extend(1..=n);
        let mut kinds = vec![LegKind::Disc; word.len()];
        kinds.extend(std::iter::repeat_n(LegKind::Torus, n));
        let dim = spaces.iter().try_fold(1usize, |acc, s| acc.checked_mul(s.dim()));
        if dim.is_none_or(|d| d > MAX_DIMENSION) {
            return Err(Error::Invalid(format!(
                "tensor dimension {} exceeds {MAX_DIMENSION}; lower the cutoffs",
                dim.map_or("overflow".into(), |d| d.to_string())
            )));
        }
        Ok(Layout { n, word, spaces, blocks, kinds })
    }

    pub fn legs(&self) -> usize {
        self.spaces.len()
    }

    pub fn dimension(&self) -> usize {
        self.spaces.iter().map(TruncSpace::dim).product()
    }
}

/// `pi_q(u_ij)` on a half-line: `u11 = S sqrt(1 - q^{2N})`,
/// `u22 = sqrt(1 - q^{2N}) S^*`, `u12 = -q^{N+1}`, `u21 = q^N`, with `S` the
/// left shift.
pub fn pi_q<F: Field>(field: &F, i: usize, j: usize, space: TruncSpace) -> Result<LegOp<F::E>> {
    let TruncSpace::HalfLine(dim) = space else {
        return Err(Error::Invalid("pi_q acts on a half-line".into()));
    };
    let ks = 0..dim as i64;
    Ok(match (i, j) {
        (1, 1) => LegOp::new(-1, ks.map(|k| field.sqrt_one_minus_q2(k)).collect()),
        (2, 2) => LegOp::new(1, ks.map(|k| field.sqrt_one_minus_q2(k + 1)).collect()),
        (1, 2) => LegOp::new(0, ks.map(|k| field.q_pow(k + 1).neg()).collect()),
        (2, 1) => LegOp::new(0, ks.map(|k| field.q_pow(k)).collect()),
        _ => return Err(Error::IndexOutOfRange(format!("u{i}{j} in rank 1"))),
    })
}

/// `chi_q(u_ij)` on a window: `u11 = S^*`, `u22 = S`, off-diagonal zero.
pub fn chi_q<E: Entry>(i: usize, j: usize, space: TruncSpace) -> Result<LegOp<E>> {
    let TruncSpace::Window(_) = space else {
        return Err(Error::Invalid("chi_q acts on a window".into()));
    };
    let d = space.dim();
    Ok(match (i, j) {
        (1, 1) => LegOp::new(1, vec![E::one(); d]),
        (2, 2) => LegOp::new(-1, vec![E::one(); d]),
        (1, 2) | (2, 1) => LegOp::zero(d),
        _ => return Err(Error::IndexOutOfRange(format!("u{i}{j} in rank 1"))),
    })
}

/// Terms of the iterated coproduct of `u_ij` into `legs` factors, one index
/// path `i = k_0, k_1, ..., k_legs = j` each, listed as the generators
/// `u_{k_0 k_1}, ..., u_{k_{legs-1} k_legs}`.
pub fn iterated_coproduct(n: usize, i: usize, j: usize, legs: usize) -> Result<Vec<Vec<(usize, usize)>>> {
    let size = n + 1;
    if i == 0 || j == 0 || i > size || j > size {
        return Err(Error::IndexOutOfRange(format!("u{i}{j} with n = {n}")));
    }
    if legs == 0 {
        return Err(Error::Invalid("at least one leg".into()));
    }
    let mut out = Vec::new();
    let mut path = vec![i];
    fn walk(size: usize, j: usize, legs: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<(usize, usize)>>) {
        if path.len() == legs {
            let mut term: Vec<(usize, usize)> = path.windows(2).map(|w| (w[0], w[1])).collect();
            term.push((path[legs - 1], j));
            out.push(term);
            return;
        }
        for k in 1..=size {
            path.push(k);
            walk(size, j, legs, path, out);
            path.pop();
        }
    }
    walk(size, j, legs, &mut path, &mut out);
    Ok(out)
}

/// Image of a generator under the projection onto the `i, i+1` block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Projected {
    /// Generator of the rank-one algebra.
    Gen(usize, usize),
    One,
    Zero,
}

pub fn project_leg(block: usize, (a, b): (usize, usize)) -> Projected {
    let inside = |x: usize| x == block || x == block + 1;
    if inside(a) && inside(b) {
        Projected::Gen(a - block + 1, b - block + 1)
    } else if a == b {
        Projected::One
    } else {
        Projected::Zero
    }
}

fn rank_one_image<F: Field>(field: &F, layout: &Layout, leg: usize, r: usize, s: usize) -> Result<LegOp<F::E>> {
    match layout.kinds[leg] {
        LegKind::Disc => pi_q(field, r, s, layout.spaces[leg]),
        LegKind::Torus => chi_q(r, s, layout.spaces[leg]),
    }
}

fn generator_image<F: Field>(field: &F, layout: &Layout, a: usize, b: usize) -> Result<TruncOp<F::E>> {
    let mut op = TruncOp::zero(&layout.spaces);
    'paths: for path in iterated_coproduct(layout.n, a, b, layout.legs())? {
        let mut legs = Vec::with_capacity(path.len());
        for (leg, &g) in path.iter().enumerate() {
            let dim = layout.spaces[leg].dim();
            legs.push(match project_leg(layout.blocks[leg], g) {
                Projected::Zero => continue 'paths,
                Projected::One => LegOp::identity(dim),
                Projected::Gen(r, s) => rank_one_image(field, layout, leg, r, s)?,
            });
        }
        op = op.add(&TruncOp::from_legs(&layout.spaces, legs)?);
    }
    Ok(op)
}

fn laurent_coefficient(c: &RatFunc) -> Result<()> {
    if c.is_laurent() {
        Ok(())
    } else {
        Err(Error::PoleAt(format!("coefficient {c} is not a Laurent polynomial")))
    }
}

/// Global specialization first: `psi^{(q)}(theta_q(x))`. The coefficients of
/// `x` are evaluated at `q`, and each generator goes to the sum over
/// coproduct paths of tensor products of `pi_q o phi_{i_a}` and
/// `chi_q o phi_b`.
pub fn psi_q<F: Field>(field: &F, layout: &Layout, x: &FnAlgElem) -> Result<TruncOp<F::E>> {
    let mut images: HashMap<(u8, u8), TruncOp<F::E>> = HashMap::new();
    let mut out = TruncOp::zero(&layout.spaces);
    for (m, c) in x.terms() {
        laurent_coefficient(c)?;
        let coeff = field.specialize(c)?;
        let mut op = TruncOp::identity(&layout.spaces);
        for &(a, b) in m {
            if let std::collections::hash_map::Entry::Vacant(e) = images.entry((a, b)) {
                e.insert(generator_image(field, layout, a as usize, b as usize)?);
            }
            op = op.mul(&images[&(a, b)]);
        }
        out = out.add(&op.scale(&coeff));
    }
    Ok(out)
}

/// Per-leg specialization: the coproduct is expanded over Q(t), each leg is
/// projected to the rank-one algebra and put in normal form there, and only
/// then are the coefficients evaluated and `pi_q` / `chi_q` applied.
pub fn my_q<F: Field>(field: &F, layout: &Layout, x: &FnAlgElem) -> Result<TruncOp<F::E>> {
    let rank_one = Algebra::new(1);
    let legs = layout.legs();
    let mut paths: HashMap<(u8, u8), Vec<Vec<Projected>>> = HashMap::new();
    let mut memo: HashMap<(usize, Vec<(usize, usize)>), Rc<Vec<LegOp<F::E>>>> = HashMap::new();
    let mut out = TruncOp::zero(&layout.spaces);
    for (m, c) in x.terms() {
        let coeff = field.specialize(c)?;
        for &(a, b) in m {
            if let std::collections::hash_map::Entry::Vacant(e) = paths.entry((a, b)) {
                let ps = iterated_coproduct(layout.n, a as usize, b as usize, legs)?
                    .into_iter()
                    .map(|p| p.iter().enumerate().map(|(leg, &g)| project_leg(layout.blocks[leg], g)).collect::<Vec<_>>())
                    .filter(|p| !p.contains(&Projected::Zero))
                    .collect();
                e.insert(ps);
            }
        }
        let choices: Vec<&Vec<Vec<Projected>>> = m.iter().map(|g| &paths[g]).collect();
        let mut words: Vec<Vec<(usize, usize)>> = vec![Vec::new(); legs];
        let mut leaf = |words: &Vec<Vec<(usize, usize)>>| -> Result<()> {
            let mut factors = Vec::with_capacity(legs);
            for (leg, w) in words.iter().enumerate() {
                let key = (leg, w.clone());
                if !memo.contains_key(&key) {
                    let v = leg_sum(field, layout, &rank_one, leg, w)?;
                    memo.insert(key.clone(), Rc::new(v));
                }
                let f = memo[&key].clone();
                if f.is_empty() {
                    return Ok(());
                }
                factors.push(f);
            }
            let mut idx = vec![0usize; legs];
            loop {
                let mut term: Vec<LegOp<F::E>> = (0..legs).map(|a| factors[a][idx[a]].clone()).collect();
                term[0] = term[0].scale(&coeff);
                out = out.add(&TruncOp::from_legs(&layout.spaces, term)?);
                let mut a = legs;
                loop {
                    if a == 0 {
                        return Ok(());
                    }
                    a -= 1;
                    idx[a] += 1;
                    if idx[a] < factors[a].len() {
                        break;
                    }
                    idx[a] = 0;
                }
            }
        };
        expand(&choices, 0, &mut words, &mut leaf)?;
    }
    Ok(out)
}

fn expand(
    choices: &[&Vec<Vec<Projected>>],
    g: usize,
    words: &mut Vec<Vec<(usize, usize)>>,
    leaf: &mut dyn FnMut(&Vec<Vec<(usize, usize)>>) -> Result<()>,
) -> Result<()> {
    if g == choices.len() {
        return leaf(words);
    }
    for path in choices[g] {
        for (leg, p) in path.iter().enumerate() {
            if let Projected::Gen(r, s) = *p {
                words[leg].push((r, s));
            }
        }
        expand(choices, g + 1, words, leaf)?;
        for (leg, p) in path.iter().enumerate() {
            if let Projected::Gen(..) = p {
                words[leg].pop();
            }
        }
    }
    Ok(())
}

/// Normal form of a rank-one word, specialized and represented on one leg,
/// as a list of weighted shifts.
fn leg_sum<F: Field>(
    field: &F,
    layout: &Layout,
    rank_one: &Algebra,
    leg: usize,
    word: &[(usize, usize)],
) -> Result<Vec<LegOp<F::E>>> {
    let dim = layout.spaces[leg].dim();
    let nf = rank_one.normal_form(word)?;
    let mut out = Vec::new();
    for (m, c) in nf.terms() {
        let mut op = LegOp::identity(dim);
        for &(r, s) in m {
            op = op.compose(&rank_one_image(field, layout, leg, r as usize, s as usize)?);
        }
        let op = op.scale(&field.specialize(c)?);
        if !op.is_zero() {
            out.push(op);
        }
    }
    Ok(out)
}

type FloatBuilder = Box<dyn Fn(f64) -> Result<TruncOp<f64>>>;

struct Sample {
    op: TruncOp<f64>,
    groups: BTreeMap<Vec<i64>, Vec<usize>>,
}

/// Leading-order value with a machine-size coefficient `num/den`; `num == 0`
/// is an exact zero. Used to evaluate limits without big-integer
/// allocation; any overflow falls back to [`LeadingOrder`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Compact {
    num: i128,
    den: i128,
    exp: i64,
}

impl Compact {
    const ZERO: Compact = Compact { num: 0, den: 1, exp: 0 };
    const ONE: Compact = Compact { num: 1, den: 1, exp: 0 };

    fn from_lead(l: &LeadingOrder) -> Option<Self> {
        if l.exact_zero {
            return Some(Compact::ZERO);
        }
        let num = i64::try_from(l.coefficient.numer()).ok()? as i128;
        let den = i64::try_from(l.coefficient.denom()).ok()? as i128;
        Some(Compact { num, den, exp: l.exponent })
    }

    fn reduced(num: i128, den: i128, exp: i64) -> Self {
        let g = num.gcd(&den);
        Compact { num: num / g, den: den / g, exp }
    }

    fn mul(self, o: Compact) -> Option<Compact> {
        if self.num == 0 || o.num == 0 {
            return Some(Compact::ZERO);
        }
        Some(Compact::reduced(self.num.checked_mul(o.num)?, self.den.checked_mul(o.den)?, self.exp + o.exp))
    }

    /// Outer `None` on overflow, inner `None` on cancellation.
    fn add(self, o: Compact) -> Option<Option<Compact>> {
        if self.num == 0 {
            return Some(Some(o));
        }
        if o.num == 0 {
            return Some(Some(self));
        }
        if self.exp != o.exp {
            return Some(Some(if self.exp < o.exp { self } else { o }));
        }
        let num = self.num.checked_mul(o.den)?.checked_add(o.num.checked_mul(self.den)?)?;
        let den = self.den.checked_mul(o.den)?;
        Some((num != 0).then(|| Compact::reduced(num, den, self.exp)))
    }

    fn limit(self) -> Result<LimitValue> {
        if self.num == 0 || self.exp > 0 {
            Ok(LimitValue::Small(0, 1))
        } else if self.exp == 0 {
            Ok(LimitValue::Small(self.num, self.den))
        } else {
            Err(Error::NegativeExponent(self.exp))
        }
    }
}

/// Exact limit value of one entry.
#[derive(Clone, Debug)]
enum LimitValue {
    Small(i128, i128),
    Big(Rat),
}

impl LimitValue {
    fn to_rat(&self) -> Rat {
        match self {
            LimitValue::Small(n, d) => Rat::new((*n).into(), (*d).into()),
            LimitValue::Big(r) => r.clone(),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            LimitValue::Small(n, _) => *n == 0,
            LimitValue::Big(r) => r.is_zero(),
        }
    }

    fn same(&self, other: &LimitValue) -> bool {
        match (self, other) {
            (LimitValue::Small(a, b), LimitValue::Small(c, d)) => (a, b) == (c, d),
            _ => self.to_rat() == other.to_rat(),
        }
    }
}

/// `q -> 0` limit of an operator, computed from its leading-order form.
/// Entries whose leading terms cancel are recomputed numerically at
/// [`FALLBACK_QS`] and extrapolated linearly to zero.
pub struct LimitOp {
    pub lead: TruncOp<LeadingOrder>,
    groups: BTreeMap<Vec<i64>, Vec<usize>>,
    /// Weights of `lead` as [`Compact`] values, when all of them fit.
    compact: Option<Vec<Vec<Vec<Compact>>>>,
    fallback: FloatBuilder,
    samples: OnceCell<Vec<Sample>>,
    fallbacks: Cell<usize>,
}

impl LimitOp {
    fn new(lead: TruncOp<LeadingOrder>, fallback: FloatBuilder) -> Self {
        let groups = lead.groups();
        let compact = lead
            .terms
            .iter()
            .map(|t| t.iter().map(|leg| leg.weights.iter().map(Compact::from_lead).collect::<Option<Vec<_>>>()).collect())
            .collect();
        LimitOp { lead, groups, compact, fallback, samples: OnceCell::new(), fallbacks: Cell::new(0) }
    }

    pub fn spaces(&self) -> &[TruncSpace] {
        &self.lead.spaces
    }

    /// Shift vectors carrying at least one term.
    pub fn shifts(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.groups.keys()
    }

    /// Number of entries that needed the numeric fallback so far.
    pub fn fallback_count(&self) -> usize {
        self.fallbacks.get()
    }

    /// Limit of the entry in column `input` shifted by `shift`.
    pub fn limit_entry(&self, shift: &[i64], input: &[usize]) -> Result<Rat> {
        Ok(self.group_limit(shift, self.groups.get(shift), input)?.to_rat())
    }

    fn compact_sum(&self, group: &[usize], input: &[usize]) -> Option<Option<Compact>> {
        let weights = self.compact.as_ref()?;
        let mut acc = Compact::ZERO;
        for &k in group {
            let mut w = Compact::ONE;
            for (leg, &p) in weights[k].iter().zip(input) {
                w = w.mul(leg[p])?;
                if w.num == 0 {
                    break;
                }
            }
            match acc.add(w)? {
                Some(x) => acc = x,
                None => return Some(None),
            }
        }
        Some(Some(acc))
    }

    fn group_limit(&self, shift: &[i64], group: Option<&Vec<usize>>, input: &[usize]) -> Result<LimitValue> {
        let Some(group) = group else {
            return Ok(LimitValue::Small(0, 1));
        };
        match self.compact_sum(group, input) {
            Some(Some(v)) => return v.limit(),
            Some(None) => {}
            None => {
                if let Some(v) = self.lead.group_entry(group, input) {
                    return Ok(LimitValue::Big(v.limit()?));
                }
            }
        }
        self.fallbacks.set(self.fallbacks.get() + 1);
        if self.samples.get().is_none() {
            let mut s = Vec::new();
            for q in FALLBACK_QS {
                let op = (self.fallback)(q)?;
                let groups = op.groups();
                s.push(Sample { op, groups });
            }
            let _ = self.samples.set(s);
        }
        let samples = self.samples.get().expect("initialized above");
        let values: Vec<f64> = samples
            .iter()
            .map(|s| s.groups.get(shift).map_or(0.0, |g| s.op.group_entry(g, input).unwrap_or(f64::NAN)))
            .collect();
        let limit = richardson(&FALLBACK_QS, &values)?;
        recognize_rational(limit, 64, 1e-6)
            .map(LimitValue::Big)
            .ok_or_else(|| Error::NonConvergent(format!("limit {limit} at shift {shift:?} is not a small rational")))
    }

    /// Whether some interior entry has a nonzero limit.
    pub fn is_nonzero_on(&self, block: &InteriorBlock) -> Result<bool> {
        for (shift, group) in &self.groups {
            let mut found = false;
            block.for_each(|input| {
                if !found && !self.group_limit(shift, Some(group), input)?.is_zero() {
                    found = true;
                }
                Ok(())
            })?;
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Nonzero limits in column `input`, keyed by output position.
    pub fn column(&self, input: &[usize]) -> Result<BTreeMap<Vec<usize>, Rat>> {
        let mut out = BTreeMap::new();
        for shift in self.groups.keys() {
            let target: Option<Vec<usize>> = input
                .iter()
                .zip(shift)
                .zip(self.spaces())
                .map(|((&p, &s), sp)| {
                    let t = p as i64 + s;
                    (0..sp.dim() as i64).contains(&t).then_some(t as usize)
                })
                .collect();
            if let Some(target) = target {
                let v = self.limit_entry(shift, input)?;
                if !v.is_zero() {
                    out.insert(target, v);
                }
            }
        }
        Ok(out)
    }
}

/// Linear extrapolation to `q = 0` from the last two samples, after checking
/// that successive differences do not grow.
pub fn richardson(qs: &[f64], values: &[f64]) -> Result<f64> {
    if qs.len() != values.len() || qs.len() < 2 {
        return Err(Error::Invalid("need at least two samples".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonConvergent(format!("non-finite samples {values:?}")));
    }
    let diffs: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    if diffs.windows(2).any(|d| d[1] > d[0] + 1e-15) {
        return Err(Error::NonConvergent(format!("differences grow: {diffs:?}")));
    }
    let k = qs.len();
    let (q1, q2) = (qs[k - 2], qs[k - 1]);
    let (v1, v2) = (values[k - 2], values[k - 1]);
    let limit = v2 + (v2 - v1) * q2 / (q1 - q2);
    if (limit - v2).abs() > 1e-2 * (1.0 + v2.abs()) {
        return Err(Error::NonConvergent(format!("samples {values:?} far from their extrapolation {limit}")));
    }
    Ok(limit)
}

/// Per-leg pipeline in the limit: `pi0(x)`. Requires `x` to lie in the
/// A0-form, which shows up as no entry having a negative leading exponent.
pub fn pi0_my(layout: &Layout, x: &FnAlgElem) -> Result<LimitOp> {
    let lead = my_q(&Leading, layout, x)?;
    let (l, y) = (layout.clone(), x.clone());
    Ok(LimitOp::new(lead, Box::new(move |q| my_q(&FloatAt(q), &l, &y))))
}

/// Global-specialization pipeline in the limit: `lim psi^{(q)} theta_q (x)`.
pub fn pi0_gp(layout: &Layout, x: &FnAlgElem) -> Result<LimitOp> {
    let lead = psi_q(&Leading, layout, x)?;
    let (l, y) = (layout.clone(), x.clone());
    Ok(LimitOp::new(lead, Box::new(move |q| psi_q(&FloatAt(q), &l, &y))))
}

/// `psi^{(q)} theta_q (x)` evaluated along a sequence of `q` values.
pub struct NumericLimit {
    pub qs: Vec<f64>,
    ops: Vec<(TruncOp<f64>, BTreeMap<Vec<i64>, Vec<usize>>)>,
}

impl NumericLimit {
    pub fn new(layout: &Layout, x: &FnAlgElem, qs: &[f64]) -> Result<Self> {
        let ops = qs
            .iter()
            .map(|&q| {
                let op = psi_q(&FloatAt(q), layout, x)?;
                let g = op.groups();
                Ok((op, g))
            })
            .collect::<Result<_>>()?;
        Ok(NumericLimit { qs: qs.to_vec(), ops })
    }

    pub fn limit_entry(&self, shift: &[i64], input: &[usize]) -> Result<f64> {
        let values: Vec<f64> =
            self.ops.iter().map(|(op, g)| g.get(shift).map_or(0.0, |g| op.group_entry(g, input).unwrap_or(0.0))).collect();
        richardson(&self.qs, &values)
    }

    fn shifts(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.ops.iter().flat_map(|(_, g)| g.keys())
    }
}

fn position_labels(spaces: &[TruncSpace], pos: &[usize]) -> Vec<i64> {
    spaces.iter().zip(pos).map(|(s, &p)| s.label(p)).collect()
}

/// Exact comparison of two limits on the interior block.
pub fn compare_limits(a: &LimitOp, b: &LimitOp, margin: usize) -> Result<Deviation> {
    let block = InteriorBlock::new(a.spaces(), margin);
    let mut shifts: Vec<Vec<i64>> = a.shifts().chain(b.shifts()).cloned().collect();
    shifts.sort();
    shifts.dedup();
    let mut dev = Deviation { columns: block.len(), ..Default::default() };
    for shift in &shifts {
        let (ga, gb) = (a.groups.get(shift), b.groups.get(shift));
        block.for_each(|input| {
            let x = a.group_limit(shift, ga, input)?;
            let y = b.group_limit(shift, gb, input)?;
            if !x.same(&y) {
                let (x, y) = (x.to_rat(), y.to_rat());
                dev.mismatches += 1;
                dev.max_error = dev.max_error.max((crate::ratfield::rat_to_f64(&(&x - &y))).abs());
                if dev.first_mismatch.is_none() {
                    dev.first_mismatch = Some(format!(
                        "column {:?}, shift {shift:?}: {} vs {}",
                        position_labels(a.spaces(), input),
                        rat_to_string(&x),
                        rat_to_string(&y)
                    ));
                }
            }
            Ok(())
        })?;
    }
    Ok(dev)
}

/// Largest deviation between an exact limit and a numeric extrapolation.
pub fn compare_numeric_limit(exact: &LimitOp, numeric: &NumericLimit, margin: usize) -> Result<f64> {
    let block = InteriorBlock::new(exact.spaces(), margin);
    let mut shifts: Vec<Vec<i64>> = exact.shifts().chain(numeric.shifts()).cloned().collect();
    shifts.sort();
    shifts.dedup();
    let mut worst = 0.0f64;
    for shift in &shifts {
        let g = exact.groups.get(shift);
        block.for_each(|input| {
            let x = crate::ratfield::rat_to_f64(&exact.group_limit(shift, g, input)?.to_rat());
            let y = numeric.limit_entry(shift, input)?;
            worst = worst.max((x - y).abs());
            Ok(())
        })?;
    }
    Ok(worst)
}
