use super::{contains_canonical, CanonicalWitness, Containment, Kind, Spread};
use crate::bits::MemberSet;
use crate::error::{Error, Result};
use crate::setsystem::{Budget, SetSystem};

/// Spread carried over to a second representation, with its re-verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transfer {
    pub spread: Spread,
    pub containment: Containment,
}

/// Moves a `T_max` containment from `first` to `second`.
///
/// `element_map[i]` is the index in `second` of the image of member `i` of
/// `first`. For every level `n` and singleton trace `{γ_nj}` the witness gives
/// a member `a_nj`; its image `a'_nj` must own a point outside every `a'_ml`
/// with `m < n` and every `a'_nk` with `k ≠ j`. The lowest such point becomes
/// `γ'_nj`, and the blocks `E'_n = {γ'_nj}` form the new spread.
pub fn transfer_tmax(
    first: &SetSystem,
    second: &SetSystem,
    element_map: &[usize],
    witness: &CanonicalWitness,
    budget: &Budget,
) -> Result<Transfer> {
    if witness.kind != Kind::Max {
        return Err(Error::InvalidArgument("the witness must certify T_max".into()));
    }
    if element_map.len() != first.len() {
        return Err(Error::InvalidArgument(format!(
            "element map has {} entries for {} members",
            element_map.len(),
            first.len()
        )));
    }
    if let Some(&bad) = element_map.iter().find(|&&j| j >= second.len()) {
        return Err(Error::NotAMember(format!("#{bad}")));
    }
    let levels = witness.entries.iter().map(|e| e.level).max().unwrap_or(0);
    if levels == 0 {
        return Err(Error::InvalidArgument("empty witness".into()));
    }
    // images a'_nj of the singleton-trace members, per level
    let mut images: Vec<Vec<(MemberSet, MemberSet)>> = vec![Vec::new(); levels];
    for e in witness.entries.iter().filter(|e| e.subset.len() == 1) {
        if e.member >= first.len() {
            return Err(Error::NotAMember(format!("#{}", e.member)));
        }
        let image = second.member(element_map[e.member]);
        images[e.level - 1].push((e.subset.clone(), image));
    }

    let ground = second.ground();
    let mut earlier = ground.empty_set();
    let mut blocks = Vec::with_capacity(levels);
    for (n, level) in images.iter().enumerate() {
        if level.is_empty() {
            return Err(Error::InvalidArgument(format!("witness has no level {}", n + 1)));
        }
        let mut block = ground.empty_set();
        for (j, (subset, image)) in level.iter().enumerate() {
            let mut others = earlier.clone();
            for (k, (_, other)) in level.iter().enumerate() {
                if k != j {
                    others.union_with(other);
                }
            }
            let point = image.difference(&others).first().ok_or_else(|| {
                Error::NoEligiblePoint(format!(
                    "level {}, trace {}",
                    n + 1,
                    first.ground().format_set(subset)
                ))
            })?;
            block.insert(point);
        }
        for (_, image) in level {
            earlier.union_with(image);
        }
        blocks.push(block);
    }
    let spread = Spread::with_any_sizes(second.ground_arc(), blocks)?;
    let containment = contains_canonical(second, &spread, Kind::Max, budget)?;
    Ok(Transfer { spread, containment })
}
