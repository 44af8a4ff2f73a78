//! Colourings, shattering and the halving search, with finite windows of
//! blocks standing in for "eventually" statements about a spread.

mod refined;
mod search;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::bits::MemberSet;
use crate::canonical::Spread;
use crate::error::{Error, Result};
use crate::setsystem::{GroundSet, SetSystem};

pub use refined::{refined_structure, square_schedule, RefinedStructure, TransversalWitness};
pub use search::{dichotomy_search, find_halver, DichotomyParams, DichotomyRun, HalverWitness, Outcome};

/// Longest sequence `shatters` and `gamma_atoms` accept.
pub const MAX_DEPTH: usize = 24;

/// A partition of the ground set into non-empty classes.
#[derive(Clone, PartialEq, Eq)]
pub struct Colouring {
    ground: Arc<GroundSet>,
    classes: Vec<MemberSet>,
}

impl Colouring {
    pub fn new(ground: Arc<GroundSet>, classes: Vec<MemberSet>) -> Result<Self> {
        let mut seen = ground.empty_set();
        for (i, c) in classes.iter().enumerate() {
            ground.check(c)?;
            if c.is_empty() {
                return Err(Error::InvalidColouring(format!("class {i} is empty")));
            }
            if !seen.is_disjoint(c) {
                return Err(Error::InvalidColouring(format!(
                    "class {i} overlaps an earlier class"
                )));
            }
            seen.union_with(c);
        }
        if seen.len() != ground.len() {
            let missing = ground.full_set().difference(&seen);
            return Err(Error::InvalidColouring(format!(
                "points {} have no class",
                ground.format_labels(&missing)
            )));
        }
        Ok(Colouring { ground, classes })
    }

    /// The one-class colouring `{Ω}`.
    pub fn trivial(ground: Arc<GroundSet>) -> Self {
        let all = ground.full_set();
        Colouring {
            ground,
            classes: vec![all],
        }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn ground_arc(&self) -> Arc<GroundSet> {
        Arc::clone(&self.ground)
    }

    pub fn classes(&self) -> &[MemberSet] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &MemberSet {
        &self.classes[i]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, point: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(point))
    }
}

impl fmt::Debug for Colouring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let classes: Vec<String> = self.classes.iter().map(|c| self.ground.format_set(c)).collect();
        f.debug_list().entries(classes).finish()
    }
}

/// Blocks `first..=last` of a spread (1-based) with a size threshold `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub first: usize,
    pub last: usize,
    pub t: usize,
}

impl Window {
    pub fn new(first: usize, last: usize, t: usize) -> Result<Self> {
        if first == 0 || first > last {
            return Err(Error::InvalidWindow(format!("blocks {first}..{last}")));
        }
        if t == 0 {
            return Err(Error::InvalidWindow("threshold must be positive".into()));
        }
        Ok(Window { first, last, t })
    }

    /// Every block of the spread.
    pub fn full(spread: &Spread, t: usize) -> Result<Self> {
        Window::new(1, spread.len(), t)
    }

    pub fn check(&self, spread: &Spread) -> Result<()> {
        if self.last > spread.len() {
            return Err(Error::InvalidWindow(format!(
                "block {} beyond the {} blocks of the spread",
                self.last,
                spread.len()
            )));
        }
        Ok(())
    }

    pub fn levels(&self) -> Vec<usize> {
        (self.first..=self.last).collect()
    }

    pub fn len(&self) -> usize {
        self.last + 1 - self.first
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.first, self.last, self.t)
    }
}

impl FromStr for Window {
    type Err = Error;

    /// Parses `first:last:t`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::InvalidWindow(format!("expected first:last:t, got {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let nums: Vec<usize> = parts
            .iter()
            .map(|p| p.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        Window::new(nums[0], nums[1], nums[2])
    }
}

fn same_ground(a: &GroundSet, b: &GroundSet) -> Result<()> {
    if a != b {
        return Err(Error::GroundMismatch);
    }
    Ok(())
}

/// Cell mask of `point`: bit `m - 1 - j` is set when the point lies outside
/// `sets[j]`, so `a_1` is the most significant bit.
fn cell_mask(sets: &[MemberSet], point: usize) -> usize {
    sets.iter()
        .fold(0, |mask, a| (mask << 1) | usize::from(!a.contains(point)))
}

fn check_depth(m: usize) -> Result<()> {
    if m == 0 || m > MAX_DEPTH {
        return Err(Error::InvalidArgument(format!(
            "sequence length {m} outside 1..={MAX_DEPTH}"
        )));
    }
    Ok(())
}

/// The non-empty cells `y_1 ∩ ... ∩ y_m` with `y_j ∈ {a_j, a_jᶜ}`, ordered
/// by mask with `a_1` as the most significant bit and a set bit meaning the
/// complement.
pub fn gamma_atoms(sets: &[MemberSet], ground: Arc<GroundSet>) -> Result<Colouring> {
    check_depth(sets.len())?;
    for a in sets {
        ground.check(a)?;
    }
    let mut cells: Vec<(usize, MemberSet)> = Vec::new();
    for p in 0..ground.len() {
        let mask = cell_mask(sets, p);
        match cells.binary_search_by_key(&mask, |(m, _)| *m) {
            Ok(i) => cells[i].1.insert(p),
            Err(i) => cells.insert(i, (mask, MemberSet::from_indices(ground.len(), [p]))),
        }
    }
    Ok(Colouring {
        ground,
        classes: cells.into_iter().map(|(_, c)| c).collect(),
    })
}

/// Outcome of [`colours_spread`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColourCheck {
    Colours,
    /// First class (by index) and level where `|C ∩ E_n| < t`.
    Fails { class: usize, level: usize },
}

impl ColourCheck {
    pub fn holds(&self) -> bool {
        matches!(self, ColourCheck::Colours)
    }
}

pub(crate) fn colours_blocks(colouring: &Colouring, spread: &Spread, levels: &[usize], t: usize) -> ColourCheck {
    for &n in levels {
        for (class, c) in colouring.classes.iter().enumerate() {
            if c.intersection_len(spread.block(n)) < t {
                return ColourCheck::Fails { class, level: n };
            }
        }
    }
    ColourCheck::Colours
}

/// Whether every class meets every block of the window in at least `t` points.
pub fn colours_spread(colouring: &Colouring, spread: &Spread, window: &Window) -> Result<ColourCheck> {
    window.check(spread)?;
    same_ground(colouring.ground(), spread.ground())?;
    Ok(colours_blocks(colouring, spread, &window.levels(), window.t))
}

/// Outcome of [`shatters`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShatterCheck {
    pub holds: bool,
    /// For each cell mask, the smallest `|E_n ∩ cell|` over the window.
    pub cell_minima: Vec<usize>,
    /// Mask, level and size of the smallest cell trace, first by level then
    /// mask on ties.
    pub worst: (usize, usize, usize),
}

pub(crate) fn shatter_blocks(sets: &[MemberSet], spread: &Spread, levels: &[usize], t: usize) -> ShatterCheck {
    let cells = 1usize << sets.len();
    let mut minima = vec![usize::MAX; cells];
    let mut worst = (0, levels[0], usize::MAX);
    for &n in levels {
        let mut counts = vec![0usize; cells];
        for p in spread.block(n).iter() {
            counts[cell_mask(sets, p)] += 1;
        }
        for (mask, &c) in counts.iter().enumerate() {
            minima[mask] = minima[mask].min(c);
            if c < worst.2 {
                worst = (mask, n, c);
            }
        }
    }
    ShatterCheck {
        holds: worst.2 >= t,
        cell_minima: minima,
        worst,
    }
}

/// Whether the first `m` sets cut every block of the window into `2^m`
/// cells of at least `t` points each.
pub fn shatters(sets: &[MemberSet], spread: &Spread, m: usize, window: &Window) -> Result<ShatterCheck> {
    check_depth(m)?;
    if sets.len() < m {
        return Err(Error::InvalidArgument(format!(
            "sequence of length {} shorter than depth {m}",
            sets.len()
        )));
    }
    window.check(spread)?;
    for a in &sets[..m] {
        spread.ground().check(a)?;
    }
    Ok(shatter_blocks(&sets[..m], spread, &window.levels(), window.t))
}

/// Whether `F` splits `D` inside every block of the window, with at least
/// `t` points of `D` on each side.
pub fn halves(f: &MemberSet, d: &MemberSet, spread: &Spread, window: &Window) -> Result<bool> {
    window.check(spread)?;
    Ok(window.levels().into_iter().all(|n| halves_block(f, d, spread.block(n), window.t)))
}

fn halves_block(f: &MemberSet, d: &MemberSet, block: &MemberSet, t: usize) -> bool {
    let inside = d.intersection(block);
    let met = inside.intersection_len(f);
    met >= t && inside.len() - met >= t
}

/// The per-member statistic `max_n min(|x ∩ C₀ ∩ E_n|, |xᶜ ∩ C ∩ E_n| over C)`
/// for one colour class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisiveReport {
    pub colouring: Colouring,
    pub class: usize,
    /// Levels the maximum runs over.
    pub levels: Vec<usize>,
    /// One entry per member of `S`, in member order.
    pub table: Vec<usize>,
    pub max: usize,
}

impl DecisiveReport {
    pub fn is_decisive(&self, bound: u64) -> bool {
        self.max as u64 <= bound
    }
}

pub(crate) fn statistic_on(
    system: &SetSystem,
    spread: &Spread,
    colouring: &Colouring,
    class: usize,
    levels: &[usize],
) -> DecisiveReport {
    // C ∩ E_n for every level and class
    let pieces: Vec<Vec<MemberSet>> = levels
        .iter()
        .map(|&n| colouring.classes.iter().map(|c| c.intersection(spread.block(n))).collect())
        .collect();
    let table: Vec<usize> = system
        .members()
        .map(|x| {
            pieces
                .iter()
                .map(|row| {
                    let inside = x.intersection_len(&row[class]);
                    let outside = row
                        .iter()
                        .map(|piece| piece.len() - x.intersection_len(piece))
                        .min()
                        .unwrap_or(0);
                    inside.min(outside)
                })
                .max()
                .unwrap_or(0)
        })
        .collect();
    let max = table.iter().copied().max().unwrap_or(0);
    DecisiveReport {
        colouring: colouring.clone(),
        class,
        levels: levels.to_vec(),
        table,
        max,
    }
}

pub fn decisive_statistic(
    system: &SetSystem,
    spread: &Spread,
    colouring: &Colouring,
    class: usize,
    window: &Window,
) -> Result<DecisiveReport> {
    window.check(spread)?;
    same_ground(system.ground(), spread.ground())?;
    same_ground(colouring.ground(), spread.ground())?;
    if class >= colouring.len() {
        return Err(Error::InvalidArgument(format!(
            "class {class} out of {} classes",
            colouring.len()
        )));
    }
    Ok(statistic_on(system, spread, colouring, class, &window.levels()))
}
