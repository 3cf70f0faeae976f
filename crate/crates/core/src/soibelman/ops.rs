use std::collections::BTreeMap;
use std::ops::Range;

use crate::error::{Error, Result};

use super::entry::Entry;

/// One tensor leg: a truncation of l^2(N) or of l^2(Z).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TruncSpace {
    /// Basis `e_0, ..., e_{N-1}`.
    HalfLine(usize),
    /// Basis `e_{-M}, ..., e_M`.
    Window(usize),
}

impl TruncSpace {
    pub fn half_line(cutoff: usize) -> Result<Self> {
        if cutoff < 4 {
            return Err(Error::Invalid(format!("half-line cutoff {cutoff} below 4")));
        }
        Ok(TruncSpace::HalfLine(cutoff))
    }

    pub fn window(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Invalid(format!("window {m} below 2")));
        }
        Ok(TruncSpace::Window(m))
    }

    pub fn dim(&self) -> usize {
        match *self {
            TruncSpace::HalfLine(n) => n,
            TruncSpace::Window(m) => 2 * m + 1,
        }
    }

    /// Index of the basis vector at storage position `p`.
    pub fn label(&self, p: usize) -> i64 {
        match *self {
            TruncSpace::HalfLine(_) => p as i64,
            TruncSpace::Window(m) => p as i64 - m as i64,
        }
    }

    /// Storage position of basis index `k`.
    pub fn position(&self, k: i64) -> Option<usize> {
        let p = match *self {
            TruncSpace::HalfLine(_) => k,
            TruncSpace::Window(m) => k + m as i64,
        };
        (0..self.dim() as i64).contains(&p).then_some(p as usize)
    }

    /// Columns unaffected by truncation for words of at most `margin`
    /// shifts. The lower end of the half-line is a genuine boundary
    /// (`S e_0 = 0` holds in l^2(N) as well), so only the cutoff end is
    /// trimmed there; the window is trimmed at both ends.
    pub fn interior(&self, margin: usize) -> Range<usize> {
        let d = self.dim();
        let end = d.saturating_sub(margin);
        match self {
            TruncSpace::HalfLine(_) => 0..end,
            TruncSpace::Window(_) => margin.min(end)..end,
        }
    }
}

/// Weighted shift `e_p -> weights[p] e_{p + shift}` (storage positions).
#[derive(Clone, Debug, PartialEq)]
pub struct LegOp<E> {
    pub shift: i64,
    pub weights: Vec<E>,
}

impl<E: Entry> LegOp<E> {
    /// Zeroes weights whose target leaves the space.
    pub fn new(shift: i64, mut weights: Vec<E>) -> Self {
        let d = weights.len() as i64;
        for (p, w) in weights.iter_mut().enumerate() {
            if !(0..d).contains(&(p as i64 + shift)) {
                *w = E::zero();
            }
        }
        LegOp { shift, weights }
    }

    pub fn identity(dim: usize) -> Self {
        LegOp { shift: 0, weights: vec![E::one(); dim] }
    }

    pub fn zero(dim: usize) -> Self {
        LegOp { shift: 0, weights: vec![E::zero(); dim] }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.iter().all(E::is_zero)
    }

    /// `self * rhs`, i.e. `rhs` applied first.
    pub fn compose(&self, rhs: &LegOp<E>) -> LegOp<E> {
        let d = self.dim() as i64;
        let weights = (0..rhs.dim())
            .map(|p| {
                let mid = p as i64 + rhs.shift;
                if rhs.weights[p].is_zero() || !(0..d).contains(&mid) {
                    E::zero()
                } else {
                    rhs.weights[p].mul(&self.weights[mid as usize])
                }
            })
            .collect();
        LegOp::new(self.shift + rhs.shift, weights)
    }

    /// Transpose; entries are real, so this is the adjoint.
    pub fn adjoint(&self) -> LegOp<E> {
        let mut weights = vec![E::zero(); self.dim()];
        for (p, w) in self.weights.iter().enumerate() {
            if !w.is_zero() {
                weights[(p as i64 + self.shift) as usize] = w.clone();
            }
        }
        LegOp::new(-self.shift, weights)
    }

    pub fn scale(&self, c: &E) -> LegOp<E> {
        LegOp { shift: self.shift, weights: self.weights.iter().map(|w| w.mul(c)).collect() }
    }

    /// Matrix entry `<e_out, A e_in>`.
    pub fn entry(&self, out: usize, input: usize) -> E {
        if input as i64 + self.shift == out as i64 {
            self.weights[input].clone()
        } else {
            E::zero()
        }
    }
}

/// Operator on a tensor product of truncated spaces, stored as a sum of
/// tensor products of weighted shifts.
#[derive(Clone, Debug)]
pub struct TruncOp<E> {
    pub spaces: Vec<TruncSpace>,
    pub terms: Vec<Vec<LegOp<E>>>,
}

impl<E: Entry> TruncOp<E> {
    pub fn zero(spaces: &[TruncSpace]) -> Self {
        TruncOp { spaces: spaces.to_vec(), terms: Vec::new() }
    }

    pub fn identity(spaces: &[TruncSpace]) -> Self {
        let term = spaces.iter().map(|s| LegOp::identity(s.dim())).collect();
        TruncOp { spaces: spaces.to_vec(), terms: vec![term] }
    }

    /// Single tensor product; dropped if a leg vanishes.
    pub fn from_legs(spaces: &[TruncSpace], legs: Vec<LegOp<E>>) -> Result<Self> {
        if legs.len() != spaces.len() || legs.iter().zip(spaces).any(|(l, s)| l.dim() != s.dim()) {
            return Err(Error::Dimension("legs do not match the spaces".into()));
        }
        let mut op = TruncOp::zero(spaces);
        op.push(legs);
        Ok(op)
    }

    fn push(&mut self, legs: Vec<LegOp<E>>) {
        if !legs.iter().any(LegOp::is_zero) {
            self.terms.push(legs);
        }
    }

    pub fn dimension(&self) -> usize {
        self.spaces.iter().map(TruncSpace::dim).product()
    }

    pub fn add(&self, other: &TruncOp<E>) -> TruncOp<E> {
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        out
    }

    pub fn neg(&self) -> TruncOp<E> {
        self.scale(&E::one().neg())
    }

    pub fn scale(&self, c: &E) -> TruncOp<E> {
        let mut out = TruncOp::zero(&self.spaces);
        if c.is_zero() {
            return out;
        }
        for t in &self.terms {
            let mut legs = t.clone();
            legs[0] = legs[0].scale(c);
            out.push(legs);
        }
        out
    }

    pub fn mul(&self, other: &TruncOp<E>) -> TruncOp<E> {
        let mut out = TruncOp::zero(&self.spaces);
        for a in &self.terms {
            for b in &other.terms {
                out.push(a.iter().zip(b).map(|(x, y)| x.compose(y)).collect());
            }
        }
        out
    }

    pub fn adjoint(&self) -> TruncOp<E> {
        let mut out = TruncOp::zero(&self.spaces);
        for t in &self.terms {
            out.push(t.iter().map(LegOp::adjoint).collect());
        }
        out
    }

    /// Term indices grouped by their shift vector.
    pub fn groups(&self) -> BTreeMap<Vec<i64>, Vec<usize>> {
        let mut g: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
        for (k, t) in self.terms.iter().enumerate() {
            g.entry(t.iter().map(|l| l.shift).collect()).or_default().push(k);
        }
        g
    }

    /// `sum_{t in group} prod_a w_{t,a}[input_a]`; `None` on cancellation.
    pub fn group_entry(&self, group: &[usize], input: &[usize]) -> Option<E> {
        let mut acc = E::zero();
        for &k in group {
            let mut w = E::one();
            for (leg, &p) in self.terms[k].iter().zip(input) {
                let x = &leg.weights[p];
                if x.is_zero() {
                    w = E::zero();
                    break;
                }
                w = w.mul(x);
            }
            if !w.is_zero() {
                acc = acc.add(&w)?;
            }
        }
        Some(acc)
    }

    /// Matrix entry `<e_out, A e_in>` (storage positions); `None` on cancellation.
    pub fn entry(&self, out: &[usize], input: &[usize]) -> Option<E> {
        let shift: Vec<i64> = out.iter().zip(input).map(|(&o, &i)| o as i64 - i as i64).collect();
        let group: Vec<usize> = (0..self.terms.len())
            .filter(|&k| self.terms[k].iter().zip(&shift).all(|(l, &s)| l.shift == s))
            .collect();
        self.group_entry(&group, input)
    }

    /// Nonzero entries of column `input`, keyed by output position.
    pub fn column(&self, input: &[usize]) -> Option<BTreeMap<Vec<usize>, E>> {
        let mut out = BTreeMap::new();
        for (shift, group) in self.groups() {
            let target: Vec<usize> = input.iter().zip(&shift).map(|(&p, &s)| (p as i64 + s) as usize).collect();
            if input.iter().zip(&shift).zip(&self.spaces).any(|((&p, &s), sp)| {
                let t = p as i64 + s;
                t < 0 || t >= sp.dim() as i64
            }) {
                continue;
            }
            let v = self.group_entry(&group, input)?;
            if !v.is_zero() {
                out.insert(target, v);
            }
        }
        Some(out)
    }
}

/// The box of interior positions, one range per leg.
#[derive(Clone, Debug)]
pub struct InteriorBlock {
    pub ranges: Vec<Range<usize>>,
}

impl InteriorBlock {
    pub fn new(spaces: &[TruncSpace], margin: usize) -> Self {
        InteriorBlock { ranges: spaces.iter().map(|s| s.interior(margin)).collect() }
    }

    pub fn len(&self) -> usize {
        self.ranges.iter().map(ExactSizeIterator::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Visits every position vector of the box in lexicographic order.
    pub fn for_each(&self, mut f: impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
        if self.is_empty() {
            return Ok(());
        }
        let mut cur: Vec<usize> = self.ranges.iter().map(|r| r.start).collect();
        loop {
            f(&cur)?;
            let mut a = cur.len();
            loop {
                if a == 0 {
                    return Ok(());
                }
                a -= 1;
                cur[a] += 1;
                if cur[a] < self.ranges[a].end {
                    break;
                }
                cur[a] = self.ranges[a].start;
            }
        }
    }
}

/// Result of comparing two operators entrywise on an interior block.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Deviation {
    /// Largest absolute difference of numeric values.
    pub max_error: f64,
    /// Number of entries that differ exactly.
    pub mismatches: usize,
    /// Number of interior columns compared.
    pub columns: usize,
    pub first_mismatch: Option<String>,
}

impl Deviation {
    pub fn exact(&self) -> bool {
        self.mismatches == 0
    }

    pub fn merge(&mut self, other: &Deviation) {
        self.max_error = self.max_error.max(other.max_error);
        self.mismatches += other.mismatches;
        self.columns = self.columns.max(other.columns);
        if self.first_mismatch.is_none() {
            self.first_mismatch.clone_from(&other.first_mismatch);
        }
    }
}

fn labels(spaces: &[TruncSpace], pos: &[usize]) -> Vec<i64> {
    spaces.iter().zip(pos).map(|(s, &p)| s.label(p)).collect()
}

/// Compares every entry of two operators whose column lies in the interior
/// block, group by group. Entries are compared exactly and numerically.
/// Cancelling leading-order sums are reported as errors; use
/// [`super::LimitOp`] for limits.
pub fn compare_on_interior<E: Entry>(a: &TruncOp<E>, b: &TruncOp<E>, margin: usize) -> Result<Deviation> {
    if a.spaces != b.spaces {
        return Err(Error::Dimension("operators live on different spaces".into()));
    }
    let block = InteriorBlock::new(&a.spaces, margin);
    let ga = a.groups();
    let gb = b.groups();
    let mut shifts: Vec<&Vec<i64>> = ga.keys().chain(gb.keys()).collect();
    shifts.sort();
    shifts.dedup();
    let empty = Vec::new();
    let mut dev = Deviation { columns: block.len(), ..Default::default() };
    for shift in shifts {
        let ta = ga.get(shift).unwrap_or(&empty);
        let tb = gb.get(shift).unwrap_or(&empty);
        block.for_each(|input| {
            let cancel = || Error::NonConvergent(format!("leading terms cancel at {:?}", labels(&a.spaces, input)));
            let x = a.group_entry(ta, input).ok_or_else(cancel)?;
            let y = b.group_entry(tb, input).ok_or_else(cancel)?;
            if x != y {
                let err = (x.to_f64() - y.to_f64()).abs();
                dev.max_error = dev.max_error.max(err);
                dev.mismatches += 1;
                if dev.first_mismatch.is_none() {
                    dev.first_mismatch =
                        Some(format!("column {:?}, shift {shift:?}: {x:?} vs {y:?}", labels(&a.spaces, input)));
                }
            }
            Ok(())
        })?;
    }
    Ok(dev)
}
