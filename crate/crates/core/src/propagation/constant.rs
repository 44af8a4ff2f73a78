use super::{Engine, LogWeight, Rational};
use crate::bits;
use crate::error::{Error, Result};
use crate::setsystem::Subfamily;

/// Enumeration limits for [`propagation_constant`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropagationLimits {
    pub max_subset_size: usize,
    pub max_subsets: u64,
}

impl Default for PropagationLimits {
    fn default() -> Self {
        PropagationLimits {
            max_subset_size: 4,
            max_subsets: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropagationReport {
    pub level: Rational,
    /// Size of `W_L`.
    pub level_set_size: usize,
    pub subsets_examined: u64,
    /// Number of `(E, z)` pairs evaluated.
    pub pairs_examined: u64,
    pub max_v: Option<Rational>,
    /// First `(E, z)` in enumeration order attaining `max_v`.
    pub witness: Option<(Subfamily, usize)>,
    pub exhaustive: bool,
}

/// Largest `V_E(z)` over non-empty `E ⊆ W_L` and `z` in the generated filter
/// of `E` intersected with `W_L`.
///
/// Subsets of `W_L` are enumerated by size and then lexicographically in
/// member order. The report is exhaustive only when every subset was seen.
pub fn propagation_constant(
    weight: &LogWeight,
    level: Rational,
    limits: &PropagationLimits,
) -> Result<PropagationReport> {
    let thr = weight.threshold(level);
    let wl: Vec<usize> = {
        let mut v: Vec<usize> = weight
            .by_weight
            .iter()
            .copied()
            .take_while(|&i| weight.scaled[i] <= thr)
            .collect();
        v.sort_unstable();
        v
    };
    let system = weight.system();
    let width = system.word_width();
    let flat: Vec<u64> = wl.iter().flat_map(|&i| system.words_of(i).iter().copied()).collect();
    let grid = weight.grid();
    let engine = Engine::new(weight);

    let mut report = PropagationReport {
        level,
        level_set_size: wl.len(),
        subsets_examined: 0,
        pairs_examined: 0,
        max_v: None,
        witness: None,
        exhaustive: true,
    };
    let mut best: Option<i128> = None;
    let mut join = vec![0u64; width];
    let mut targets: Vec<usize> = Vec::new();
    let mut seeds: Vec<usize> = Vec::new();
    let top = limits.max_subset_size.min(wl.len());
    if limits.max_subset_size < wl.len() {
        report.exhaustive = false;
    }

    'sizes: for k in 1..=top {
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            if report.subsets_examined >= limits.max_subsets {
                report.exhaustive = false;
                break 'sizes;
            }
            report.subsets_examined += 1;

            join.iter_mut().for_each(|w| *w = 0);
            seeds.clear();
            for &c in &combo {
                seeds.push(wl[c]);
                bits::union_into(&mut join, &flat[c * width..(c + 1) * width]);
            }
            targets.clear();
            if width == 1 {
                let mask = !join[0];
                targets.extend(
                    flat.iter()
                        .enumerate()
                        .filter(|(_, &z)| z & mask == 0)
                        .map(|(pos, _)| wl[pos]),
                );
            } else {
                targets.extend(
                    flat.chunks_exact(width)
                        .enumerate()
                        .filter(|(_, z)| bits::is_subset(z, &join))
                        .map(|(pos, _)| wl[pos]),
                );
            }
            report.pairs_examined += targets.len() as u64;
            let values = engine.v_values(&seeds, &targets, &grid, Some((&targets, thr)));
            for (&z, v) in targets.iter().zip(values) {
                let Some(v) = v else {
                    return Err(Error::InvalidArgument(format!(
                        "{} lies in the filter but is unreachable; the system is not union-closed",
                        system.format_member(z)
                    )));
                };
                if best.is_none_or(|b| v > b) {
                    best = Some(v);
                    report.witness = Some((Subfamily::new(seeds.clone()), z));
                }
            }

            if !next_combination(&mut combo, wl.len()) {
                break;
            }
        }
    }
    report.max_v = best.map(|b| weight.unscale(b));
    Ok(report)
}

/// Advances `combo` to the next k-subset of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
