use crate::bits::MemberSet;
use crate::canonical::{contains_canonical, Containment, Kind, Spread};
use crate::error::{Error, Result};
use crate::setsystem::{is_incompressible, Budget, Incompressibility, SetSystem};

/// The member certifying one point of the transversal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransversalWitness {
    pub level: usize,
    pub point: usize,
    /// Position (0-based) in the chain of the `a_j` the point came from.
    pub chain_index: usize,
    /// `a_j ∪ d_{k-1}`, whose trace on the spread is `E_{<k} ∪ {point}`.
    pub member: MemberSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinedStructure {
    pub schedule: Vec<usize>,
    pub spread: Spread,
    pub witnesses: Vec<TransversalWitness>,
    /// `n_{k+1} - n_k` for each level but the last, for comparison with the
    /// built sizes `n_k - n_{k-1}`.
    pub shifted_sizes: Vec<usize>,
    pub containment: Containment,
}

/// `n_k = k²` for every `k` with `k² ≤ len`.
pub fn square_schedule(len: usize) -> Vec<usize> {
    (1..).map(|k| k * k).take_while(|&n| n <= len).collect()
}

/// Builds a spread from an incompressible chain by taking transversals.
///
/// With `d_k = a_1 ∪ ... ∪ a_{n_k}`, level `k` collects for each
/// `n_{k-1} < j ≤ n_k` the lowest point of `a_j ∖ d_{k-1}` that lies in no
/// other `a_i ∖ d_{k-1}` of the same stretch. Every witness member must be
/// in `S`, and the result is re-checked with `contains_canonical`.
pub fn refined_structure(
    system: &SetSystem,
    chain: &[MemberSet],
    schedule: Option<&[usize]>,
    budget: &Budget,
) -> Result<RefinedStructure> {
    if chain.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let ground = system.ground();
    for a in chain {
        ground.check(a)?;
        if !system.contains(a) {
            return Err(Error::NotAMember(ground.format_set(a)));
        }
    }
    for k in 1..=chain.len() {
        if let Incompressibility::Compressible { dropped } = is_incompressible(&chain[..k])? {
            return Err(Error::Compressible(format!(
                "{} within the first {k} chain members",
                ground.format_set(&chain[dropped])
            )));
        }
    }
    let schedule = match schedule {
        Some(s) => s.to_vec(),
        None => square_schedule(chain.len()),
    };
    if schedule.is_empty() || schedule[0] == 0 || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(format!(
            "schedule {schedule:?} must be positive and strictly increasing"
        )));
    }
    if *schedule.last().unwrap() > chain.len() {
        return Err(Error::InvalidArgument(format!(
            "schedule reaches {} but the chain has {} members",
            schedule.last().unwrap(),
            chain.len()
        )));
    }

    let mut d = ground.empty_set();
    let mut start = 0;
    let mut blocks = Vec::with_capacity(schedule.len());
    let mut witnesses = Vec::new();
    for (k, &end) in schedule.iter().enumerate() {
        let fresh: Vec<MemberSet> = chain[start..end].iter().map(|a| a.difference(&d)).collect();
        let mut block = ground.empty_set();
        for (offset, f) in fresh.iter().enumerate() {
            let mut others = ground.empty_set();
            for (o, g) in fresh.iter().enumerate() {
                if o != offset {
                    others.union_with(g);
                }
            }
            let j = start + offset;
            let point = f.difference(&others).first().ok_or_else(|| {
                Error::NoEligiblePoint(format!("chain member {} at level {}", j + 1, k + 1))
            })?;
            block.insert(point);
            let member = chain[j].union(&d);
            if !system.contains(&member) {
                return Err(Error::NotAMember(ground.format_set(&member)));
            }
            witnesses.push(TransversalWitness {
                level: k + 1,
                point,
                chain_index: j,
                member,
            });
        }
        blocks.push(block);
        for a in &chain[start..end] {
            d.union_with(a);
        }
        start = end;
    }

    let spread = Spread::with_any_sizes(system.ground_arc(), blocks)?;
    let join = spread.join();
    for w in &witnesses {
        let mut expected = spread.below(w.level);
        expected.insert(w.point);
        if w.member.intersection(&join) != expected {
            return Err(Error::NoEligiblePoint(format!(
                "witness for {} has the wrong trace",
                ground.label(w.point)
            )));
        }
    }
    let shifted_sizes = schedule.windows(2).map(|w| w[1] - w[0]).collect();
    let containment = contains_canonical(system, &spread, Kind::Max, budget)?;
    Ok(RefinedStructure {
        schedule,
        spread,
        witnesses,
        shifted_sizes,
        containment,
    })
}
