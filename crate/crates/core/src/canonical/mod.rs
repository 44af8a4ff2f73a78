//! Spreads, the three canonical systems built from them, trace restriction
//! and the containment search.

mod transfer;
mod weights;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::bits::{MemberSet, Words};
use crate::error::{Error, Result};
use crate::setsystem::{Budget, GroundSet, SetSystem};

pub use transfer::{transfer_tmax, Transfer};
pub use weights::{
    tmax_weight_value, tmin_weight_value, verify_level_one_failure, weight_tmax, weight_tmin,
    LevelOneRow, Side,
};

/// Disjoint non-empty blocks `E_1, ..., E_N` of a ground set.
#[derive(Clone, PartialEq, Eq)]
pub struct Spread {
    ground: Arc<GroundSet>,
    blocks: Vec<MemberSet>,
    nondecreasing: bool,
}

impl Spread {
    /// Builds a spread whose block sizes must not decrease.
    pub fn new(ground: Arc<GroundSet>, blocks: Vec<MemberSet>) -> Result<Self> {
        let spread = Spread::with_any_sizes(ground, blocks)?;
        if !spread.nondecreasing {
            return Err(Error::InvalidSpread(format!(
                "block sizes {:?} decrease",
                spread.sizes()
            )));
        }
        Ok(spread)
    }

    /// Builds a spread without the growth requirement; whether the sizes
    /// happen to be non-decreasing is still recorded.
    pub fn with_any_sizes(ground: Arc<GroundSet>, blocks: Vec<MemberSet>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidSpread("no blocks".into()));
        }
        let mut seen = ground.empty_set();
        for (i, b) in blocks.iter().enumerate() {
            ground.check(b)?;
            if b.is_empty() {
                return Err(Error::InvalidSpread(format!("block {} is empty", i + 1)));
            }
            if !seen.is_disjoint(b) {
                return Err(Error::InvalidSpread(format!(
                    "block {} overlaps an earlier block",
                    i + 1
                )));
            }
            seen.union_with(b);
        }
        let nondecreasing = blocks.windows(2).all(|w| w[0].len() <= w[1].len());
        Ok(Spread {
            ground,
            blocks,
            nondecreasing,
        })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn ground_arc(&self) -> Arc<GroundSet> {
        Arc::clone(&self.ground)
    }

    pub fn blocks(&self) -> &[MemberSet] {
        &self.blocks
    }

    /// Block `E_level`, counting levels from 1.
    pub fn block(&self, level: usize) -> &MemberSet {
        &self.blocks[level - 1]
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(MemberSet::len).collect()
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.nondecreasing
    }

    pub fn join(&self) -> MemberSet {
        let mut acc = self.ground.empty_set();
        for b in &self.blocks {
            acc.union_with(b);
        }
        acc
    }

    /// `E_{<level}`.
    pub fn below(&self, level: usize) -> MemberSet {
        let mut acc = self.ground.empty_set();
        for b in &self.blocks[..level - 1] {
            acc.union_with(b);
        }
        acc
    }

    /// `E_{>level}` within the truncation.
    pub fn above(&self, level: usize) -> MemberSet {
        let mut acc = self.ground.empty_set();
        for b in &self.blocks[level..] {
            acc.union_with(b);
        }
        acc
    }

    /// Level of the block containing `point`, if any.
    pub fn level_of(&self, point: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(point)).map(|i| i + 1)
    }

    /// The same spread over a ground made of the join's points only, in
    /// their original order.
    pub fn compact(&self) -> Spread {
        let join = self.join();
        let points = join.indices();
        let labels: Vec<String> = points.iter().map(|&p| self.ground.label(p).to_string()).collect();
        let ground = Arc::new(GroundSet::new(labels).expect("labels of a valid ground"));
        let position: HashMap<usize, usize> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let blocks = self
            .blocks
            .iter()
            .map(|b| MemberSet::from_indices(points.len(), b.iter().map(|p| position[&p])))
            .collect();
        Spread {
            ground,
            blocks,
            nondecreasing: self.nondecreasing,
        }
    }
}

impl fmt::Debug for Spread {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self.blocks.iter().map(|b| self.ground.format_set(b)).collect();
        f.debug_list().entries(blocks).finish()
    }
}

/// Consecutive blocks of the given sizes, taken from the start of the ground.
pub fn make_spread(sizes: &[usize], ground: Arc<GroundSet>) -> Result<Spread> {
    let total: usize = sizes.iter().sum();
    if total > ground.len() {
        return Err(Error::InvalidSpread(format!(
            "blocks need {total} points but the ground has {}",
            ground.len()
        )));
    }
    let mut start = 0;
    let mut blocks = Vec::with_capacity(sizes.len());
    for &size in sizes {
        blocks.push(MemberSet::from_indices(ground.len(), start..start + size));
        start += size;
    }
    Spread::new(ground, blocks)
}

/// Sizes `2, 3, ..., levels + 1`.
pub fn default_sizes(levels: usize) -> Vec<usize> {
    (2..levels + 2).collect()
}

/// Ground labelled `e<level>_<j>` holding exactly the blocks of the given
/// sizes, together with the spread.
pub fn labelled_spread(sizes: &[usize]) -> Result<Spread> {
    let labels: Vec<String> = sizes
        .iter()
        .enumerate()
        .flat_map(|(n, &size)| (1..=size).map(move |j| format!("e{}_{j}", n + 1)))
        .collect();
    let ground = Arc::new(GroundSet::new(labels)?);
    make_spread(sizes, ground)
}

/// Keeps the chosen subset of each selected block; `selection` holds
/// `(level, subset)` pairs with distinct levels.
pub fn refine(spread: &Spread, selection: &[(usize, MemberSet)]) -> Result<Spread> {
    let mut used = vec![false; spread.len()];
    let mut blocks = Vec::with_capacity(selection.len());
    for (level, subset) in selection {
        if *level == 0 || *level > spread.len() {
            return Err(Error::InvalidSpread(format!("no block at level {level}")));
        }
        if std::mem::replace(&mut used[level - 1], true) {
            return Err(Error::InvalidSpread(format!("level {level} selected twice")));
        }
        spread.ground.check(subset)?;
        if subset.is_empty() {
            return Err(Error::InvalidSpread(format!("empty subset of level {level}")));
        }
        if !subset.is_subset(spread.block(*level)) {
            return Err(Error::InvalidSpread(format!(
                "{} is not inside block {level}",
                spread.ground.format_set(subset)
            )));
        }
        blocks.push(subset.clone());
    }
    Spread::with_any_sizes(spread.ground_arc(), blocks)
}

/// Which of the three canonical systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Max,
    Min,
    Ort,
}

impl Kind {
    pub fn name(&self) -> &'static str {
        match self {
            Kind::Max => "tmax",
            Kind::Min => "tmin",
            Kind::Ort => "tort",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The canonical member at `level` with partial block `a`.
pub fn canonical_member(spread: &Spread, kind: Kind, level: usize, a: &MemberSet) -> MemberSet {
    let mut x = a.clone();
    if matches!(kind, Kind::Max | Kind::Ort) {
        x.union_with(&spread.below(level));
    }
    if matches!(kind, Kind::Min | Kind::Ort) {
        x.union_with(&spread.above(level));
    }
    x
}

/// Non-empty subsets of `block`, in lexicographic order.
pub fn nonempty_subsets(block: &MemberSet, points: usize) -> Vec<MemberSet> {
    let elems = block.indices();
    let mut out: Vec<MemberSet> = (1u64..(1 << elems.len()))
        .map(|mask| {
            MemberSet::from_indices(
                points,
                elems.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &p)| p),
            )
        })
        .collect();
    out.sort_by(|a, b| a.lex_cmp(b));
    out
}

fn required_members(spread: &Spread, budget: &Budget) -> Result<usize> {
    let mut total: usize = 0;
    for b in &spread.blocks {
        if b.len() >= 40 {
            return Err(Error::Budget(format!("block of {} points", b.len())));
        }
        total = total.saturating_add((1usize << b.len()) - 1);
    }
    if total > budget.max_members {
        return Err(Error::Budget(format!(
            "canonical system needs {total} members, cap is {}",
            budget.max_members
        )));
    }
    Ok(total)
}

/// Finite truncation of a canonical system over the spread's ground.
pub fn canonical_system(spread: &Spread, kind: Kind, budget: &Budget) -> Result<SetSystem> {
    required_members(spread, budget)?;
    let points = spread.ground.len();
    let mut members = Vec::new();
    for level in 1..=spread.len() {
        for a in nonempty_subsets(spread.block(level), points) {
            members.push(canonical_member(spread, kind, level, &a));
        }
    }
    // in T_ort every full block gives the same member, join(spread)
    let mut system = SetSystem::from_members_dedup(spread.ground_arc(), members)?;
    system.mark_closed();
    Ok(system)
}

pub fn tmax(spread: &Spread, budget: &Budget) -> Result<SetSystem> {
    canonical_system(spread, Kind::Max, budget)
}

pub fn tmin(spread: &Spread, budget: &Budget) -> Result<SetSystem> {
    canonical_system(spread, Kind::Min, budget)
}

pub fn tort(spread: &Spread, budget: &Budget) -> Result<SetSystem> {
    canonical_system(spread, Kind::Ort, budget)
}

/// Trace system `{ x ∩ J : x ∈ S }` over the same ground.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Restriction {
    pub system: SetSystem,
    /// For each trace, the smallest member of `S` mapping onto it.
    pub preimage: Vec<usize>,
}

pub fn restrict(system: &SetSystem, on: &MemberSet) -> Result<Restriction> {
    system.ground().check(on)?;
    let mut first: HashMap<Words, usize> = HashMap::new();
    for i in 0..system.len() {
        let t = system.member(i).intersection(on);
        first.entry(Words::from_slice(t.words())).or_insert(i);
    }
    let traces: Vec<MemberSet> = first.keys().map(|w| MemberSet::from_words(w)).collect();
    let mut trace_system = SetSystem::new(system.ground_arc(), traces)?;
    if system.is_closed_flag() {
        // (x ∪ y) ∩ J = (x ∩ J) ∪ (y ∩ J)
        trace_system.mark_closed();
    }
    let preimage = trace_system
        .members()
        .map(|t| first[t.words()])
        .collect();
    Ok(Restriction {
        system: trace_system,
        preimage,
    })
}

/// One canonical trace and the member of `S` realising it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessEntry {
    pub level: usize,
    /// The partial block `a ⊆ E_level`.
    pub subset: MemberSet,
    /// Index in `S` of the smallest member whose trace is the canonical one.
    pub member: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalWitness {
    pub kind: Kind,
    pub entries: Vec<WitnessEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Containment {
    Contained(CanonicalWitness),
    /// First canonical trace (by level, then subset order) with no preimage.
    Missing {
        level: usize,
        subset: MemberSet,
        trace: MemberSet,
    },
}

impl Containment {
    pub fn is_contained(&self) -> bool {
        matches!(self, Containment::Contained(_))
    }

    pub fn witness(&self) -> Option<&CanonicalWitness> {
        match self {
            Containment::Contained(w) => Some(w),
            Containment::Missing { .. } => None,
        }
    }
}

/// Searches `S` for a member with each required canonical trace on
/// `join(spread)`, matching traces exactly.
pub fn contains_canonical(
    system: &SetSystem,
    spread: &Spread,
    kind: Kind,
    budget: &Budget,
) -> Result<Containment> {
    if system.ground() != spread.ground() {
        return Err(Error::GroundMismatch);
    }
    required_members(spread, budget)?;
    let restriction = restrict(system, &spread.join())?;
    let points = spread.ground.len();
    let mut entries = Vec::new();
    for level in 1..=spread.len() {
        for subset in nonempty_subsets(spread.block(level), points) {
            let trace = canonical_member(spread, kind, level, &subset);
            match restriction.system.index_of(&trace) {
                Some(t) => entries.push(WitnessEntry {
                    level,
                    subset,
                    member: restriction.preimage[t],
                }),
                None => return Ok(Containment::Missing { level, subset, trace }),
            }
        }
    }
    Ok(Containment::Contained(CanonicalWitness { kind, entries }))
}
