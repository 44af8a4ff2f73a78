use std::sync::Arc;

use num_traits::Zero;

use super::{canonical_member, canonical_system, Kind, Spread};
use crate::bits::MemberSet;
use crate::error::{Error, Result};
use crate::propagation::{v_value, LogWeight, Rational, VValue};
use crate::setsystem::{Budget, GroundSet, SetSystem, Subfamily};

/// Which end of the spread the weight looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Max,
    Min,
}

impl Side {
    pub fn kind(&self) -> Kind {
        match self {
            Side::Max => Kind::Max,
            Side::Min => Kind::Min,
        }
    }
}

fn partial_count(block: &MemberSet, x: &MemberSet) -> Rational {
    let met = x.intersection_len(block);
    if met == block.len() {
        Rational::zero()
    } else {
        Rational::from_integer(met as i64)
    }
}

/// Weight of `x` read off the highest block it meets: zero if it meets none
/// or covers that block, the size of the partial trace otherwise.
pub fn tmax_weight_value(spread: &Spread, x: &MemberSet) -> Rational {
    match spread.blocks().iter().rev().find(|b| !b.is_disjoint(x)) {
        None => Rational::zero(),
        Some(block) => partial_count(block, x),
    }
}

/// Mirror image of [`tmax_weight_value`], reading the lowest block met.
pub fn tmin_weight_value(spread: &Spread, x: &MemberSet) -> Rational {
    match spread.blocks().iter().find(|b| !b.is_disjoint(x)) {
        None => Rational::zero(),
        Some(block) => partial_count(block, x),
    }
}

fn side_value(side: Side, spread: &Spread, x: &MemberSet) -> Rational {
    match side {
        Side::Max => tmax_weight_value(spread, x),
        Side::Min => tmin_weight_value(spread, x),
    }
}

fn power_set_weight(side: Side, spread: &Spread, budget: &Budget) -> Result<LogWeight> {
    let compact = spread.compact();
    let system = Arc::new(SetSystem::power_set(compact.ground_arc(), true, budget)?);
    LogWeight::from_fn(system, |x| side_value(side, &compact, x))
}

/// The highest-block weight on the power set of `join(spread)`; the ground
/// of the returned system holds the join's points only.
pub fn weight_tmax(spread: &Spread, budget: &Budget) -> Result<LogWeight> {
    power_set_weight(Side::Max, spread, budget)
}

/// The lowest-block weight on the power set of `join(spread)`.
pub fn weight_tmin(spread: &Spread, budget: &Budget) -> Result<LogWeight> {
    power_set_weight(Side::Min, spread, budget)
}

/// One level of the first-level failure check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelOneRow {
    pub n: usize,
    pub block_size: usize,
    /// Whether every member of `F_n` has weight 1.
    pub lambda_a_one: bool,
    pub lambda_b: Rational,
    /// `V_{F_n}(b_n)` inside the canonical system.
    pub v_exact: VValue,
    /// The same value inside the power set of `b_n`, when small enough.
    pub v_power_set: Option<VValue>,
    pub bound: Rational,
    pub pass: bool,
}

/// Largest `b_n` (in points) for which the power-set value is computed.
pub const POWER_SET_POINTS: usize = 14;

/// Builds the spread with `|E_n| = n + 1` for `n ≤ levels`, the canonical
/// system of the given side with its weight, and for each `n ≥ 2` the
/// family `F_n` of singleton-trace members at level `n` and `b_n = join(F_n)`.
/// Checks `λ = 1` on `F_n`, `λ(b_n) = 0` and `V_{F_n}(b_n) ≥ |E_n| / 2`.
pub fn verify_level_one_failure(side: Side, levels: usize, budget: &Budget) -> Result<Vec<LevelOneRow>> {
    if levels < 2 {
        return Err(Error::InvalidArgument("at least two levels are needed".into()));
    }
    let spread = super::labelled_spread(&super::default_sizes(levels))?;
    let system = Arc::new(canonical_system(&spread, side.kind(), budget)?);
    let weight = LogWeight::from_fn(Arc::clone(&system), |x| side_value(side, &spread, x))?;
    let points = spread.ground().len();

    let mut rows = Vec::new();
    for n in 2..=levels {
        let block = spread.block(n);
        let singles: Vec<MemberSet> = block
            .iter()
            .map(|p| canonical_member(&spread, side.kind(), n, &MemberSet::from_indices(points, [p])))
            .collect();
        let family = Subfamily::new(system.indices_of(&singles)?);
        let b = canonical_member(&spread, side.kind(), n, block);
        let b_index = system.index_of(&b).expect("b_n is a canonical member");
        let lambda_a_one = family.iter().all(|i| weight.value(i) == Rational::from_integer(1));
        let lambda_b = weight.value(b_index);
        let v_exact = v_value(&family, b_index, &weight)?;
        let v_power_set = if b.len() <= POWER_SET_POINTS {
            Some(power_set_value(side, &spread, &singles, &b, budget)?)
        } else {
            None
        };
        let bound = Rational::new(block.len() as i64, 2);
        let meets = |v: &VValue| *v >= VValue::Finite(bound);
        let pass = lambda_a_one
            && lambda_b.is_zero()
            && meets(&v_exact)
            && v_power_set.as_ref().is_none_or(meets);
        rows.push(LevelOneRow {
            n,
            block_size: block.len(),
            lambda_a_one,
            lambda_b,
            v_exact,
            v_power_set,
            bound,
            pass,
        });
    }
    Ok(rows)
}

/// `V_{F}(b)` with the weight hosted on every subset of `b`.
///
/// Only subsets of `b` lie in the filter of `F`, so the power set of `b`
/// carries the whole computation.
fn power_set_value(
    side: Side,
    spread: &Spread,
    family: &[MemberSet],
    b: &MemberSet,
    budget: &Budget,
) -> Result<VValue> {
    let points = b.indices();
    let labels: Vec<String> = points.iter().map(|&p| spread.ground().label(p).to_string()).collect();
    let ground = Arc::new(GroundSet::new(labels)?);
    let local = |x: &MemberSet| {
        MemberSet::from_indices(
            points.len(),
            points.iter().enumerate().filter(|(_, &p)| x.contains(p)).map(|(i, _)| i),
        )
    };
    let blocks: Vec<MemberSet> = spread
        .blocks()
        .iter()
        .map(local)
        .filter(|blk| !blk.is_empty())
        .collect();
    let sub_spread = Spread::with_any_sizes(Arc::clone(&ground), blocks)?;
    let system = Arc::new(SetSystem::power_set(ground, true, budget)?);
    let weight = LogWeight::from_fn(Arc::clone(&system), |x| side_value(side, &sub_spread, x))?;
    let seeds: Vec<MemberSet> = family.iter().map(local).collect();
    let family = Subfamily::new(system.indices_of(&seeds)?);
    let target = system.index_of(&local(b)).expect("power set holds every subset");
    v_value(&family, target, &weight)
}
