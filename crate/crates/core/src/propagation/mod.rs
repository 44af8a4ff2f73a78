//! Log-weights on a union-closed system, level sets, the factors-of-binary-
//! products iteration and the propagation value `V_E(z)`.
//!
//! Weights are exact rationals. Internally every weight is rescaled by the
//! common denominator so the hot loops compare integers only.

mod constant;

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::bits::{self, MemberSet};
use crate::error::{Error, Result};
use crate::setsystem::{self, SetSystem, Subfamily};

pub use constant::{propagation_constant, PropagationLimits, PropagationReport};

pub type Rational = Ratio<i64>;

/// A total map from the members of a system to nonnegative rationals.
///
/// Subadditivity is not assumed; [`check_log_weight`] verifies it.
#[derive(Clone)]
pub struct LogWeight {
    system: Arc<SetSystem>,
    values: Vec<Rational>,
    scaled: Vec<i128>,
    denom: i128,
    // member indices sorted by (weight, index): every level set is a prefix
    by_weight: Vec<usize>,
}

impl LogWeight {
    pub fn new(system: Arc<SetSystem>, values: Vec<Rational>) -> Result<Self> {
        if values.len() != system.len() {
            let missing = values.len().min(system.len().saturating_sub(1));
            return Err(Error::WeightNotTotal(system.format_member(missing)));
        }
        for (i, v) in values.iter().enumerate() {
            if *v < Rational::zero() {
                return Err(Error::NegativeWeight {
                    member: system.format_member(i),
                    value: v.to_string(),
                });
            }
        }
        let denom = values
            .iter()
            .fold(1i128, |acc, v| acc.lcm(&i128::from(*v.denom())));
        let scaled: Vec<i128> = values
            .iter()
            .map(|v| i128::from(*v.numer()) * (denom / i128::from(*v.denom())))
            .collect();
        let mut by_weight: Vec<usize> = (0..values.len()).collect();
        by_weight.sort_by_key(|&i| (scaled[i], i));
        Ok(LogWeight {
            system,
            values,
            scaled,
            denom,
            by_weight,
        })
    }

    pub fn from_fn<F>(system: Arc<SetSystem>, f: F) -> Result<Self>
    where
        F: Fn(&MemberSet) -> Rational,
    {
        let values = system.members().map(|m| f(&m)).collect();
        LogWeight::new(system, values)
    }

    pub fn zero(system: Arc<SetSystem>) -> Self {
        let values = vec![Rational::zero(); system.len()];
        LogWeight::new(system, values).expect("zero weight is valid")
    }

    pub fn system(&self) -> &SetSystem {
        &self.system
    }

    pub fn system_arc(&self) -> Arc<SetSystem> {
        Arc::clone(&self.system)
    }

    pub fn value(&self, member: usize) -> Rational {
        self.values[member]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value_of(&self, set: &MemberSet) -> Option<Rational> {
        self.system.index_of(set).map(|i| self.values[i])
    }

    pub fn max_value(&self) -> Rational {
        self.values.iter().copied().max().unwrap_or_else(Rational::zero)
    }

    /// Largest scaled weight that still satisfies `λ ≤ c`.
    fn threshold(&self, c: Rational) -> i128 {
        if c < Rational::zero() {
            return -1;
        }
        let num = i128::from(*c.numer()) * self.denom;
        num.div_euclid(i128::from(*c.denom()))
    }

    fn unscale(&self, v: i128) -> Rational {
        let g = v.gcd(&self.denom);
        let num = (v / g).to_i64().expect("weight numerator fits in i64");
        let den = (self.denom / g).to_i64().expect("weight denominator fits in i64");
        Rational::new(num, den)
    }

    /// Candidate levels `{0} ∪ λ(S)`, ascending and scaled.
    fn grid(&self) -> Vec<i128> {
        let mut grid: Vec<i128> = std::iter::once(0).chain(self.scaled.iter().copied()).collect();
        grid.sort_unstable();
        grid.dedup();
        grid
    }

    fn check_indices(&self, family: &[usize]) -> Result<()> {
        match family.iter().find(|&&i| i >= self.system.len()) {
            Some(&i) => Err(Error::NotAMember(format!("#{i}"))),
            None => Ok(()),
        }
    }
}

impl fmt::Debug for LogWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<(String, String)> = (0..self.values.len())
            .map(|i| (self.system.format_member(i), self.values[i].to_string()))
            .collect();
        f.debug_map().entries(entries).finish()
    }
}

/// Outcome of [`check_log_weight`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightCheck {
    Ok,
    /// `λ(x ∪ y) > λ(x) + λ(y)` for the member indices `x < y`.
    Violation { x: usize, y: usize },
}

impl WeightCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, WeightCheck::Ok)
    }
}

/// Verifies `λ(x ∪ y) ≤ λ(x) + λ(y)` over every pair of members whose union
/// is a member, returning the first violation in member order.
pub fn check_log_weight(weight: &LogWeight) -> WeightCheck {
    let s = &*weight.system;
    let n = s.len();
    let lam = &weight.scaled;
    if s.word_width() == 1 {
        let raw = s.raw();
        for i in 0..n {
            let xi = raw[i];
            let li = lam[i];
            for j in i + 1..n {
                if let Some(k) = s.index_of_words(&[xi | raw[j]]) {
                    if lam[k] > li + lam[j] {
                        return WeightCheck::Violation { x: i, y: j };
                    }
                }
            }
        }
    } else {
        let mut buf = vec![0u64; s.word_width()];
        for i in 0..n {
            for j in i + 1..n {
                buf.copy_from_slice(s.words_of(i));
                bits::union_into(&mut buf, s.words_of(j));
                if let Some(k) = s.index_of_words(&buf) {
                    if lam[k] > lam[i] + lam[j] {
                        return WeightCheck::Violation { x: i, y: j };
                    }
                }
            }
        }
    }
    WeightCheck::Ok
}

/// `W_L = { x : λ(x) ≤ L }`.
pub fn level_set(weight: &LogWeight, level: Rational) -> Subfamily {
    let thr = weight.threshold(level);
    Subfamily::new(weight.by_weight.iter().copied().take_while(|&i| weight.scaled[i] <= thr).collect())
}

/// `V_E(z)`: finite value or `+∞` outside the generated filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VValue {
    Finite(Rational),
    Infinite,
}

impl VValue {
    pub fn is_finite(&self) -> bool {
        matches!(self, VValue::Finite(_))
    }

    pub fn value(&self) -> Option<Rational> {
        match self {
            VValue::Finite(v) => Some(*v),
            VValue::Infinite => None,
        }
    }
}

impl fmt::Display for VValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VValue::Finite(v) => write!(f, "{v}"),
            VValue::Infinite => f.write_str("infinite"),
        }
    }
}

impl PartialOrd for VValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VValue {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match (self, other) {
            (VValue::Infinite, VValue::Infinite) => Equal,
            (VValue::Infinite, _) => Greater,
            (_, VValue::Infinite) => Less,
            (VValue::Finite(a), VValue::Finite(b)) => a.cmp(b),
        }
    }
}

/// Fixpoint of the FBP iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FbpClosure {
    pub members: Subfamily,
    /// Least `k` with `FBP^k = FBP^{k+1}`.
    pub steps: usize,
}

/// One application of `FBP_C`.
pub fn fbp_step(family: &Subfamily, c: Rational, weight: &LogWeight) -> Result<Subfamily> {
    weight.check_indices(family.indices())?;
    let engine = Engine::new(weight);
    let thr = weight.threshold(c);
    let current = engine.within(family.indices(), thr);
    if current.is_empty() {
        return Ok(Subfamily::default());
    }
    let bound = setsystem::join_indices(&weight.system, &current);
    let candidates = engine.candidates(bound.words(), thr);
    Ok(Subfamily::from_sorted(engine.step(&current, &candidates)))
}

/// Least fixpoint of `FBP_C` above `E ∩ W_C`.
pub fn fbp_closure(family: &Subfamily, c: Rational, weight: &LogWeight) -> Result<FbpClosure> {
    weight.check_indices(family.indices())?;
    let engine = Engine::new(weight);
    let (members, steps) = engine.closure(family.indices(), weight.threshold(c));
    Ok(FbpClosure {
        members: Subfamily::from_sorted(members),
        steps,
    })
}

/// `V_E(z)`, minimised over the finite grid `{0} ∪ λ(S)`.
///
/// Membership of `z` in the closure changes with `C` only where `C` crosses
/// an attained weight, so the minimum over the grid is the infimum.
pub fn v_value(family: &Subfamily, target: usize, weight: &LogWeight) -> Result<VValue> {
    weight.check_indices(family.indices())?;
    weight.check_indices(&[target])?;
    let s = &*weight.system;
    let bound = setsystem::join_indices(s, family.indices());
    if family.is_empty() || !bits::is_subset(s.words_of(target), bound.words()) {
        return Ok(VValue::Infinite);
    }
    let engine = Engine::new(weight);
    let values = engine.v_values(family.indices(), &[target], &weight.grid(), None);
    match values[0] {
        Some(v) => Ok(VValue::Finite(weight.unscale(v))),
        None => Err(Error::InvalidArgument(format!(
            "{} is below the join but unreachable; the system is not union-closed",
            s.format_member(target)
        ))),
    }
}

/// Inner loops shared by the FBP operations.
pub(crate) struct Engine<'a> {
    weight: &'a LogWeight,
    system: &'a SetSystem,
    width: usize,
}

impl<'a> Engine<'a> {
    pub(crate) fn new(weight: &'a LogWeight) -> Self {
        Engine {
            weight,
            system: &weight.system,
            width: weight.system.word_width(),
        }
    }

    fn within(&self, family: &[usize], thr: i128) -> Vec<usize> {
        let mut out: Vec<usize> = family
            .iter()
            .copied()
            .filter(|&i| self.weight.scaled[i] <= thr)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Members of `W_thr` below `bound`, sorted by index.
    fn candidates(&self, bound: &[u64], thr: i128) -> Vec<usize> {
        let w = self.weight;
        let mut out = Vec::new();
        if self.width == 1 {
            let mask = !bound[0];
            let raw = self.system.raw();
            for &i in &w.by_weight {
                if w.scaled[i] > thr {
                    break;
                }
                if raw[i] & mask == 0 {
                    out.push(i);
                }
            }
        } else {
            for &i in &w.by_weight {
                if w.scaled[i] > thr {
                    break;
                }
                if bits::is_subset(self.system.words_of(i), bound) {
                    out.push(i);
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn gather(&self, members: &[usize]) -> Vec<u64> {
        let mut flat = Vec::with_capacity(members.len() * self.width);
        for &i in members {
            flat.extend_from_slice(self.system.words_of(i));
        }
        flat
    }

    /// One FBP step: `candidates` lying below the union of some pair from
    /// `current`. Only maximal elements matter on both sides of that test.
    fn step(&self, current: &[usize], candidates: &[usize]) -> Vec<usize> {
        let w = self.width;
        let tops = maxima(&self.gather(current), w);
        let k = tops.len() / w;
        let mut unions = Vec::with_capacity(k * (k + 1) / 2 * w);
        for i in 0..k {
            for j in i..k {
                for t in 0..w {
                    unions.push(tops[i * w + t] | tops[j * w + t]);
                }
            }
        }
        let unions = maxima(&unions, w);
        let mut out = Vec::with_capacity(candidates.len());
        if w == 1 {
            let raw = self.system.raw();
            for &z in candidates {
                let zw = raw[z];
                if unions.iter().any(|&u| zw & !u == 0) {
                    out.push(z);
                }
            }
        } else {
            for &z in candidates {
                let zw = self.system.words_of(z);
                if unions.chunks_exact(w).any(|u| bits::is_subset(zw, u)) {
                    out.push(z);
                }
            }
        }
        out
    }

    /// Iterates from `start` (sorted, inside `candidates`) to the fixpoint.
    fn iterate(&self, mut current: Vec<usize>, candidates: &[usize]) -> (Vec<usize>, usize) {
        let mut steps = 0;
        loop {
            let next = self.step(&current, candidates);
            // FBP is inflationary on subsets of W_C, so equal sizes mean equal sets
            if next.len() == current.len() {
                return (current, steps);
            }
            current = next;
            steps += 1;
        }
    }

    pub(crate) fn closure(&self, family: &[usize], thr: i128) -> (Vec<usize>, usize) {
        let start = self.within(family, thr);
        if start.is_empty() {
            return (start, 0);
        }
        let bound = setsystem::join_indices(self.system, &start);
        let candidates = self.candidates(bound.words(), thr);
        self.iterate(start, &candidates)
    }

    /// Members of `pool` in `W_thr` below `bound`, sorted by index.
    fn candidates_from(&self, pool: &[usize], bound: &[u64], thr: i128) -> Vec<usize> {
        let scaled = &self.weight.scaled;
        pool.iter()
            .copied()
            .filter(|&i| scaled[i] <= thr && bits::is_subset(self.system.words_of(i), bound))
            .collect()
    }

    /// Scaled `V` of each target (all assumed below the join of `seeds`),
    /// walking the grid upwards and warm-starting each level from the
    /// previous fixpoint. `None` marks a target never reached.
    ///
    /// `below` may supply the sorted list of all members of `W_level` under
    /// the join of `seeds`; levels up to `level` then draw their candidates
    /// from it instead of scanning the system.
    pub(crate) fn v_values(
        &self,
        seeds: &[usize],
        targets: &[usize],
        grid: &[i128],
        below: Option<(&[usize], i128)>,
    ) -> Vec<Option<i128>> {
        let scaled = &self.weight.scaled;
        let mut result = vec![None; targets.len()];
        let Some(lowest) = targets.iter().map(|&t| scaled[t]).min() else {
            return result;
        };
        let mut remaining = targets.len();
        let mut current: Vec<usize> = Vec::new();
        for &thr in grid.iter().filter(|&&g| g >= lowest) {
            let start_seeds = self.within(seeds, thr);
            if start_seeds.is_empty() {
                continue;
            }
            let mut start = current;
            start.extend_from_slice(&start_seeds);
            start.sort_unstable();
            start.dedup();
            let bound = setsystem::join_indices(self.system, &start_seeds);
            let candidates = match below {
                Some((pool, level)) if thr <= level => self.candidates_from(pool, bound.words(), thr),
                _ => self.candidates(bound.words(), thr),
            };
            let (fixpoint, _) = self.iterate(start, &candidates);
            for (slot, &t) in result.iter_mut().zip(targets) {
                if slot.is_none() && fixpoint.binary_search(&t).is_ok() {
                    *slot = Some(thr);
                    remaining -= 1;
                }
            }
            current = fixpoint;
            if remaining == 0 {
                break;
            }
        }
        result
    }
}

/// Maximal elements (under inclusion) of a flat list of bitsets.
fn maxima(flat: &[u64], w: usize) -> Vec<u64> {
    let n = flat.len() / w;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(bits::count(&flat[i * w..(i + 1) * w])));
    let mut kept: Vec<u64> = Vec::new();
    for i in order {
        let x = &flat[i * w..(i + 1) * w];
        if !kept.chunks_exact(w).any(|k| bits::is_subset(x, k)) {
            kept.extend_from_slice(x);
        }
    }
    kept
}
