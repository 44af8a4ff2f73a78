use super::{Budget, SetSystem};

/// Result of the breadth search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Breadth {
    /// Size of the largest incompressible subfamily found.
    pub value: usize,
    /// False when the node budget ran out; `value` is then a lower bound.
    pub exact: bool,
    /// Member indices of an incompressible subfamily of size `value`.
    pub witness: Vec<usize>,
    pub nodes: u64,
}

struct Search<'a> {
    system: &'a SetSystem,
    words: usize,
    // suffix_union[i] = union of members i.. (candidate points still reachable)
    suffix_union: Vec<Vec<u64>>,
    chosen: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
    max_nodes: u64,
    exhausted: bool,
}

/// Largest incompressible subfamily, by depth-first branch and bound over
/// members in sorted order.
///
/// A family is incompressible iff every member owns a private point, and the
/// property is inherited by subfamilies, so partial families that already
/// break it are never extended. The private points of members added later
/// lie outside the current join, which gives the bound used for pruning.
pub fn breadth(system: &SetSystem, budget: &Budget) -> Breadth {
    let words = system.word_width();
    let n = system.len();
    let mut suffix_union = vec![vec![0u64; words]; n + 1];
    for i in (0..n).rev() {
        let mut acc = suffix_union[i + 1].clone();
        for (a, b) in acc.iter_mut().zip(system.words_of(i)) {
            *a |= b;
        }
        suffix_union[i] = acc;
    }
    let mut search = Search {
        system,
        words,
        suffix_union,
        chosen: Vec::new(),
        best: Vec::new(),
        nodes: 0,
        max_nodes: budget.max_nodes,
        exhausted: false,
    };
    let once = vec![0u64; words];
    let twice = vec![0u64; words];
    search.extend(0, &once, &twice);
    Breadth {
        value: search.best.len(),
        exact: !search.exhausted,
        witness: search.best,
        nodes: search.nodes,
    }
}

impl Search<'_> {
    fn extend(&mut self, from: usize, once: &[u64], twice: &[u64]) {
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        for idx in from..self.system.len() {
            if self.exhausted {
                return;
            }
            let fresh: usize = self.suffix_union[idx]
                .iter()
                .zip(once)
                .map(|(u, o)| (u & !o).count_ones() as usize)
                .sum();
            let bound = self.chosen.len() + fresh.min(self.system.len() - idx);
            if bound <= self.best.len() {
                return;
            }
            let y = self.system.words_of(idx);
            // y needs a point outside the current join
            if !y.iter().zip(once).any(|(a, o)| a & !o != 0) {
                continue;
            }
            // every chosen member keeps a private point not covered by y
            let keeps = self.chosen.iter().all(|&x| {
                self.system
                    .words_of(x)
                    .iter()
                    .enumerate()
                    .any(|(k, &w)| w & once[k] & !twice[k] & !y[k] != 0)
            });
            if !keeps {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                self.exhausted = true;
                return;
            }
            let mut next_once = vec![0u64; self.words];
            let mut next_twice = vec![0u64; self.words];
            for k in 0..self.words {
                next_twice[k] = twice[k] | (once[k] & y[k]);
                next_once[k] = once[k] | y[k];
            }
            self.chosen.push(idx);
            self.extend(idx + 1, &next_once, &next_twice);
            self.chosen.pop();
        }
    }
}
