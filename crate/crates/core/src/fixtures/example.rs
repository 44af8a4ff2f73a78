use std::sync::Arc;

use crate::bits::MemberSet;
use crate::canonical::{canonical_member, nonempty_subsets, restrict, tmin, Kind, Spread};
use crate::error::{Error, Result};
use crate::setsystem::{is_union_closed, Budget, GroundSet, SetSystem};

/// Truncations of the two representations of the `T_min` semilattice with
/// counters attached.
#[derive(Debug, Clone)]
pub struct Example213 {
    pub levels: usize,
    pub limit: usize,
    /// `E_n = {(n,k) : k ≤ n}` for `n = 1..=levels`, on the ground of `s`.
    pub spread: Spread,
    /// The same blocks from level 2 on; the members of `s` only ever carry
    /// these traces.
    pub upper: Spread,
    /// Members `a ⊔ {1..m}` over `Ω₀ ⊔ {1..M}`.
    pub s: SetSystem,
    /// Members `(a × {1..M+1}) ∪ (Ω₀ × {1..m})` over `Ω₀ × {1..M+1}`.
    pub s_prime: SetSystem,
    /// `(a, level(a), m)` per member of `s`, with `a` on the ground of `s`.
    pub params: Vec<(MemberSet, usize, usize)>,
    /// Index in `s_prime` of the image of each member of `s`.
    pub bijection: Vec<usize>,
}

fn point_label(n: usize, k: usize) -> String {
    format!("({n},{k})")
}

/// Builds both systems for `levels` blocks and counters up to `limit`.
///
/// The second representation uses `M + 1` copies of `Ω₀`: with only `M`
/// copies every member with `m = M` would be the whole ground, whatever its
/// `a`.
pub fn example_2_13(levels: usize, limit: usize, budget: &Budget) -> Result<Example213> {
    if levels < 2 {
        return Err(Error::InvalidArgument("at least two levels are needed".into()));
    }
    if limit < levels {
        return Err(Error::InvalidArgument(format!(
            "counter limit {limit} is below the top level {levels}"
        )));
    }
    let base: Vec<(usize, usize)> = (1..=levels).flat_map(|n| (1..=n).map(move |k| (n, k))).collect();
    let omega0 = base.len();
    let total = omega0 + limit;
    let required: usize = (2..=levels).map(|n| ((1usize << n) - 1) * (limit + 1 - n)).sum();
    if required > budget.max_members {
        return Err(Error::Budget(format!(
            "{required} members exceed the cap {}",
            budget.max_members
        )));
    }

    let labels = base
        .iter()
        .map(|&(n, k)| point_label(n, k))
        .chain((1..=limit).map(|m| m.to_string()));
    let ground = Arc::new(GroundSet::new(labels)?);
    let block = |n: usize| {
        let start = n * (n - 1) / 2;
        MemberSet::from_indices(total, start..start + n)
    };
    let spread = Spread::new(Arc::clone(&ground), (1..=levels).map(block).collect())?;
    let upper = Spread::new(Arc::clone(&ground), (2..=levels).map(block).collect())?;

    let copies = limit + 1;
    let prime_labels = base
        .iter()
        .flat_map(|&(n, k)| (1..=copies).map(move |m| format!("{}/{m}", point_label(n, k))));
    let prime_ground = Arc::new(GroundSet::new(prime_labels)?);
    let prime_points = omega0 * copies;

    let mut params = Vec::with_capacity(required);
    let mut s_members = Vec::with_capacity(required);
    let mut p_members = Vec::with_capacity(required);
    for n in 2..=levels {
        for sub in nonempty_subsets(spread.block(n), total) {
            let a = canonical_member(&spread, Kind::Min, n, &sub);
            for m in n..=limit {
                let mut x = a.clone();
                for c in 0..m {
                    x.insert(omega0 + c);
                }
                let y = MemberSet::from_indices(
                    prime_points,
                    (0..omega0).flat_map(|p| {
                        let reach = if a.contains(p) { copies } else { m };
                        (0..reach).map(move |c| p * copies + c)
                    }),
                );
                s_members.push(x);
                p_members.push(y);
                params.push((a.clone(), n, m));
            }
        }
    }
    let s = SetSystem::new(Arc::clone(&ground), s_members.clone())?.verify_closed()?;
    let s_prime = SetSystem::new(prime_ground, p_members.clone())?.verify_closed()?;

    // reorder the parameters to member order of s
    let mut order: Vec<usize> = (0..s_members.len()).collect();
    order.sort_by_key(|&i| s.index_of(&s_members[i]).expect("member of s"));
    let params: Vec<_> = order.iter().map(|&i| params[i].clone()).collect();
    let bijection = order
        .iter()
        .map(|&i| s_prime.index_of(&p_members[i]).expect("member of s'"))
        .collect();
    Ok(Example213 {
        levels,
        limit,
        spread,
        upper,
        s,
        s_prime,
        params,
        bijection,
    })
}

/// Checks on an [`Example213`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example213Report {
    pub members: usize,
    pub s_closed: bool,
    pub s_prime_closed: bool,
    /// Traces of `s` on the upper blocks are exactly `T_min` of those blocks.
    pub tmin_traces: bool,
    /// The bijection carries unions to unions.
    pub isomorphic: bool,
    /// Union of two members has `min` level and `max` counter.
    pub union_rule: bool,
}

impl Example213Report {
    pub fn pass(&self) -> bool {
        self.s_closed && self.s_prime_closed && self.tmin_traces && self.isomorphic && self.union_rule
    }
}

pub fn verify_example_2_13(ex: &Example213, budget: &Budget) -> Result<Example213Report> {
    let s_closed = is_union_closed(&ex.s).is_closed();
    let s_prime_closed = is_union_closed(&ex.s_prime).is_closed();
    let traces = restrict(&ex.s, &ex.upper.join())?.system;
    let expected = tmin(&ex.upper, budget)?;
    let tmin_traces = traces.members().eq(expected.members());

    let n = ex.s.len();
    let mut isomorphic = true;
    let mut union_rule = true;
    for i in 0..n {
        let x = ex.s.member(i);
        let xp = ex.s_prime.member(ex.bijection[i]);
        for j in i..n {
            let u = ex.s.index_of(&x.union(&ex.s.member(j)));
            let up = ex.s_prime.index_of(&xp.union(&ex.s_prime.member(ex.bijection[j])));
            match (u, up) {
                (Some(u), Some(up)) => {
                    isomorphic &= ex.bijection[u] == up;
                    let (_, li, mi) = &ex.params[i];
                    let (_, lj, mj) = &ex.params[j];
                    let (_, lu, mu) = &ex.params[u];
                    union_rule &= *lu == (*li).min(*lj) && *mu == (*mi).max(*mj);
                }
                _ => isomorphic = false,
            }
        }
    }
    Ok(Example213Report {
        members: n,
        s_closed,
        s_prime_closed,
        tmin_traces,
        isomorphic,
        union_rule,
    })
}
