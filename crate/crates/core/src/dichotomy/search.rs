use super::{
    colours_blocks, gamma_atoms, halves_block, same_ground, shatter_blocks, statistic_on, ColourCheck,
    Colouring, DecisiveReport, Window,
};
use crate::bits::MemberSet;
use crate::canonical::Spread;
use crate::error::{Error, Result};
use crate::setsystem::SetSystem;

/// A member halving every colour class on the surviving levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalverWitness {
    /// Index of `y` in `S`.
    pub member: usize,
    pub set: MemberSet,
    pub levels: Vec<usize>,
}

/// Scans `S` in member order for the first `y` halving every class on a
/// strict majority of `levels`; the witness keeps every level where it does.
pub(crate) fn halver_on(
    system: &SetSystem,
    colouring: &Colouring,
    spread: &Spread,
    levels: &[usize],
    t: usize,
) -> Option<HalverWitness> {
    let needed = levels.len() / 2 + 1;
    for (i, y) in system.members().enumerate() {
        let kept: Vec<usize> = levels
            .iter()
            .copied()
            .filter(|&n| {
                colouring
                    .classes()
                    .iter()
                    .all(|c| halves_block(&y, c, spread.block(n), t))
            })
            .collect();
        if kept.len() >= needed {
            return Some(HalverWitness {
                member: i,
                set: y,
                levels: kept,
            });
        }
    }
    None
}

/// Exhaustive search for a member halving every class of `colouring` over
/// more than half of the window's blocks.
pub fn find_halver(
    system: &SetSystem,
    colouring: &Colouring,
    spread: &Spread,
    window: &Window,
) -> Result<Option<HalverWitness>> {
    window.check(spread)?;
    same_ground(system.ground(), spread.ground())?;
    same_ground(colouring.ground(), spread.ground())?;
    Ok(halver_on(system, colouring, spread, &window.levels(), window.t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DichotomyParams {
    pub window: Window,
    /// Number of halvers wanted before checking for shattering.
    pub depth: usize,
    /// Bound on the decisive statistic; `None` disables the decisive check.
    pub bound: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShatterWitness {
    pub sequence: Vec<MemberSet>,
    /// Indices of the sequence in `S`.
    pub members: Vec<usize>,
    pub levels: Vec<usize>,
    pub t: usize,
    /// Smallest cell trace over `levels`, one entry per cell mask.
    pub cell_minima: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Shatter(ShatterWitness),
    Decisive(DecisiveReport),
    Inconclusive {
        reason: String,
        depth: usize,
        levels: Vec<usize>,
        /// Class with the smallest statistic under the last colouring.
        best: Option<DecisiveReport>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DichotomyRun {
    pub params: DichotomyParams,
    /// Halvers in the order found, each with the levels it kept.
    pub rounds: Vec<HalverWitness>,
    pub outcome: Outcome,
}

/// Starts from the trivial colouring and keeps adding halvers: each round
/// refines the colouring to the cells of all halvers so far and narrows the
/// levels to those the new halver splits. Stops with a shattering sequence
/// at the requested depth, a decisive class when no halver exists and the
/// bound holds, or an inconclusive record naming what failed.
pub fn dichotomy_search(system: &SetSystem, spread: &Spread, params: DichotomyParams) -> Result<DichotomyRun> {
    let window = params.window;
    window.check(spread)?;
    same_ground(system.ground(), spread.ground())?;
    if params.depth == 0 || params.depth > super::MAX_DEPTH {
        return Err(Error::InvalidArgument(format!(
            "depth {} outside 1..={}",
            params.depth,
            super::MAX_DEPTH
        )));
    }
    let t = window.t;
    let mut levels = window.levels();
    let mut colouring = Colouring::trivial(system.ground_arc());
    let mut rounds: Vec<HalverWitness> = Vec::new();
    let finish = |rounds, outcome| Ok(DichotomyRun { params, rounds, outcome });

    if let ColourCheck::Fails { level, .. } = colours_blocks(&colouring, spread, &levels, t) {
        let reason = format!("block {level} has fewer than {t} points");
        return finish(rounds, inconclusive(reason, 0, levels, None));
    }

    let reason = loop {
        if rounds.len() == params.depth {
            let sequence: Vec<MemberSet> = rounds.iter().map(|r| r.set.clone()).collect();
            let check = shatter_blocks(&sequence, spread, &levels, t);
            if check.holds {
                let members = rounds.iter().map(|r| r.member).collect();
                let witness = ShatterWitness {
                    sequence,
                    members,
                    levels,
                    t,
                    cell_minima: check.cell_minima,
                };
                return finish(rounds, Outcome::Shatter(witness));
            }
            let (mask, level, size) = check.worst;
            break format!("cell {mask} has {size} points in block {level}, below {t}");
        }
        match halver_on(system, &colouring, spread, &levels, t) {
            Some(h) => {
                levels = h.levels.clone();
                rounds.push(h);
                let sequence: Vec<MemberSet> = rounds.iter().map(|r| r.set.clone()).collect();
                colouring = gamma_atoms(&sequence, system.ground_arc())?;
            }
            None => break format!("no halver at depth {}", rounds.len()),
        }
    };

    let reports: Vec<DecisiveReport> = (0..colouring.len())
        .map(|c| statistic_on(system, spread, &colouring, c, &levels))
        .collect();
    let depth = rounds.len();
    let best = reports.iter().min_by_key(|r| r.max).cloned();
    match params.bound {
        Some(b) => match reports.into_iter().find(|r| r.is_decisive(b)) {
            Some(r) => finish(rounds, Outcome::Decisive(r)),
            None => {
                let reason = format!("{reason}; no class has statistic at most {b}");
                finish(rounds, inconclusive(reason, depth, levels, best))
            }
        },
        None => finish(rounds, inconclusive(reason, depth, levels, best)),
    }
}

fn inconclusive(reason: String, depth: usize, levels: Vec<usize>, best: Option<DecisiveReport>) -> Outcome {
    Outcome::Inconclusive {
        reason,
        depth,
        levels,
        best,
    }
}
