//! Finite union-closed set systems: ground sets, families of members and the
//! basic algebra on them (closure, divisibility, joins, filters,
//! incompressibility).

mod breadth;
mod cayley;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::bits::{self, words_for, MemberSet, Words};
use crate::error::{Error, Result};

pub use breadth::{breadth, Breadth};
pub use cayley::{cayley_embedding, CayleyImage, MultiplicationTable};

/// Resource caps for closures and searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_members: usize,
    pub max_nodes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_members: 1 << 20,
            max_nodes: 10_000_000,
        }
    }
}

/// Ordered universe of labelled points.
#[derive(Clone, PartialEq, Eq)]
pub struct GroundSet {
    labels: Vec<String>,
    lookup: HashMap<String, usize>,
}

impl GroundSet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyGround);
        }
        let mut lookup = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty()
                || label == "="
                || label.contains('#')
                || label.chars().any(char::is_whitespace)
            {
                return Err(Error::InvalidLabel(label.clone()));
            }
            if lookup.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(GroundSet { labels, lookup })
    }

    /// Ground set labelled `0`, `1`, ..., `n-1`.
    pub fn numbered(n: usize) -> Result<Self> {
        GroundSet::new((0..n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.lookup.get(label).copied()
    }

    pub fn empty_set(&self) -> MemberSet {
        MemberSet::empty(self.len())
    }

    pub fn full_set(&self) -> MemberSet {
        MemberSet::full(self.len())
    }

    pub fn set_from_indices<I: IntoIterator<Item = usize>>(&self, indices: I) -> Result<MemberSet> {
        let mut set = self.empty_set();
        for i in indices {
            if i >= self.len() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    size: self.len(),
                });
            }
            set.insert(i);
        }
        Ok(set)
    }

    pub fn set_from_labels<I, S>(&self, labels: I) -> Result<MemberSet>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = self.empty_set();
        for label in labels {
            let label = label.as_ref();
            let i = self
                .index_of(label)
                .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
            set.insert(i);
        }
        Ok(set)
    }

    /// Checks that `set` was built for this ground.
    pub fn check(&self, set: &MemberSet) -> Result<()> {
        if set.words().len() != words_for(self.len()) {
            return Err(Error::GroundMismatch);
        }
        if let Some(i) = set.iter().find(|&i| i >= self.len()) {
            return Err(Error::IndexOutOfRange {
                index: i,
                size: self.len(),
            });
        }
        Ok(())
    }

    /// `{a,b,c}` rendering used in reports and error messages.
    pub fn format_set(&self, set: &MemberSet) -> String {
        let inner: Vec<&str> = set.iter().map(|i| self.label(i)).collect();
        format!("{{{}}}", inner.join(","))
    }

    /// Space separated labels, as written in the text formats.
    pub fn format_labels(&self, set: &MemberSet) -> String {
        let inner: Vec<&str> = set.iter().map(|i| self.label(i)).collect();
        inner.join(" ")
    }
}

impl fmt::Debug for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.labels.iter()).finish()
    }
}

#[derive(Clone)]
enum MemberIndex {
    // Bitmask value -> member index, for grounds of at most DENSE_POINTS points.
    Dense(Vec<u32>),
    Hashed(HashMap<Words, u32>),
}

const DENSE_POINTS: usize = 16;
const ABSENT: u32 = u32::MAX;

/// A finite family of distinct members over one ground set, kept in
/// lexicographic order of their index lists.
#[derive(Clone)]
pub struct SetSystem {
    ground: Arc<GroundSet>,
    words: usize,
    data: Vec<u64>,
    len: usize,
    index: MemberIndex,
    closed: bool,
}

impl SetSystem {
    /// Builds a system from distinct members; duplicates are an error.
    pub fn new(ground: Arc<GroundSet>, members: Vec<MemberSet>) -> Result<Self> {
        SetSystem::build(ground, members, false)
    }

    /// Builds a system, silently merging duplicate members.
    pub fn from_members_dedup(ground: Arc<GroundSet>, members: Vec<MemberSet>) -> Result<Self> {
        SetSystem::build(ground, members, true)
    }

    fn build(ground: Arc<GroundSet>, mut members: Vec<MemberSet>, dedup: bool) -> Result<Self> {
        for m in &members {
            ground.check(m)?;
        }
        members.sort_by(|a, b| a.lex_cmp(b));
        if dedup {
            members.dedup();
        } else if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateMember(ground.format_set(&w[0])));
        }
        Ok(SetSystem::from_sorted(ground, &members))
    }

    pub(crate) fn from_sorted(ground: Arc<GroundSet>, members: &[MemberSet]) -> Self {
        let words = words_for(ground.len());
        let mut data = Vec::with_capacity(members.len() * words);
        for m in members {
            data.extend_from_slice(m.words());
        }
        let index = if ground.len() <= DENSE_POINTS {
            let mut table = vec![ABSENT; 1 << ground.len()];
            for (i, m) in members.iter().enumerate() {
                table[m.words()[0] as usize] = i as u32;
            }
            MemberIndex::Dense(table)
        } else {
            MemberIndex::Hashed(
                members
                    .iter()
                    .enumerate()
                    .map(|(i, m)| (Words::from_slice(m.words()), i as u32))
                    .collect(),
            )
        };
        SetSystem {
            ground,
            words,
            data,
            len: members.len(),
            index,
            closed: false,
        }
    }

    /// The full power set of the ground (optionally without the empty set).
    pub fn power_set(ground: Arc<GroundSet>, include_empty: bool, budget: &Budget) -> Result<Self> {
        let n = ground.len();
        if n >= 40 || (1usize << n) > budget.max_members {
            return Err(Error::Budget(format!(
                "power set of {n} points exceeds the member cap {}",
                budget.max_members
            )));
        }
        let start = if include_empty { 0u64 } else { 1 };
        let mut members: Vec<MemberSet> = (start..(1u64 << n))
            .map(|mask| MemberSet::from_indices(n, (0..n).filter(|i| mask & (1 << i) != 0)))
            .collect();
        members.sort_by(|a, b| a.lex_cmp(b));
        let mut system = SetSystem::from_sorted(ground, &members);
        system.closed = true;
        Ok(system)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn ground_arc(&self) -> Arc<GroundSet> {
        Arc::clone(&self.ground)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Word width of every member bitset.
    pub fn word_width(&self) -> usize {
        self.words
    }

    #[inline]
    pub(crate) fn words_of(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    pub(crate) fn raw(&self) -> &[u64] {
        &self.data
    }

    pub fn member(&self, i: usize) -> MemberSet {
        MemberSet::from_words(self.words_of(i))
    }

    pub fn members(&self) -> impl Iterator<Item = MemberSet> + '_ {
        (0..self.len).map(move |i| self.member(i))
    }

    pub fn index_of(&self, set: &MemberSet) -> Option<usize> {
        if set.words().len() != self.words {
            return None;
        }
        self.index_of_words(set.words())
    }

    #[inline]
    pub(crate) fn index_of_words(&self, words: &[u64]) -> Option<usize> {
        match &self.index {
            MemberIndex::Dense(table) => {
                let slot = words[0];
                if slot >= table.len() as u64 {
                    return None;
                }
                match table[slot as usize] {
                    ABSENT => None,
                    i => Some(i as usize),
                }
            }
            MemberIndex::Hashed(map) => map.get(words).map(|&i| i as usize),
        }
    }

    pub fn contains(&self, set: &MemberSet) -> bool {
        self.index_of(set).is_some()
    }

    /// Looks up every set, failing on the first one that is not a member.
    pub fn indices_of(&self, sets: &[MemberSet]) -> Result<Vec<usize>> {
        sets.iter()
            .map(|s| {
                self.ground.check(s)?;
                self.index_of(s)
                    .ok_or_else(|| Error::NotAMember(self.ground.format_set(s)))
            })
            .collect()
    }

    /// Whether the family is known to be union-closed.
    pub fn is_closed_flag(&self) -> bool {
        self.closed
    }

    /// Runs the pairwise check and records the result in the cached flag.
    pub fn verify_closed(mut self) -> Result<Self> {
        if let UnionCheck::Violation(a, b) = is_union_closed(&self) {
            return Err(Error::NotUnionClosed(
                self.format_member(a),
                self.format_member(b),
            ));
        }
        self.closed = true;
        Ok(self)
    }

    pub(crate) fn mark_closed(&mut self) {
        self.closed = true;
    }

    pub fn format_member(&self, i: usize) -> String {
        self.ground.format_set(&self.member(i))
    }

    /// Join of all members, or the empty set for an empty family.
    pub fn join_all(&self) -> MemberSet {
        let mut acc = self.ground.empty_set();
        for i in 0..self.len {
            acc.union_with(&self.member(i));
        }
        acc
    }

    /// Materialises a subfamily as a system of its own over the same ground.
    pub fn subsystem(&self, family: &Subfamily) -> SetSystem {
        let members: Vec<MemberSet> = family.iter().map(|i| self.member(i)).collect();
        SetSystem::from_sorted(self.ground_arc(), &members)
    }
}

impl PartialEq for SetSystem {
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground && self.data == other.data
    }
}

impl Eq for SetSystem {}

impl fmt::Debug for SetSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let members: Vec<String> = (0..self.len).map(|i| self.format_member(i)).collect();
        f.debug_struct("SetSystem")
            .field("ground", &self.ground)
            .field("members", &members)
            .field("closed", &self.closed)
            .finish()
    }
}

/// A subfamily of a system, as sorted member indices.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct Subfamily {
    indices: Vec<usize>,
}

impl Subfamily {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Subfamily { indices }
    }

    pub(crate) fn from_sorted(indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        Subfamily { indices }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn is_subset(&self, other: &Subfamily) -> bool {
        self.iter().all(|i| other.contains(i))
    }
}

impl FromIterator<usize> for Subfamily {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        Subfamily::new(iter.into_iter().collect())
    }
}

/// Smallest union-closed family containing the generators.
///
/// Every member of the closure is a union of generators, so a breadth-first
/// sweep that only ever extends members by single generators reaches all of
/// them in `|closure| * |generators|` unions.
pub fn union_closure(
    generators: &[MemberSet],
    ground: Arc<GroundSet>,
    budget: &Budget,
) -> Result<SetSystem> {
    if generators.is_empty() {
        return Err(Error::EmptyFamily);
    }
    for g in generators {
        ground.check(g)?;
    }
    let mut gens: Vec<MemberSet> = generators.to_vec();
    gens.sort_by(|a, b| a.lex_cmp(b));
    gens.dedup();

    let mut seen: std::collections::HashSet<Words> = std::collections::HashSet::new();
    let mut members: Vec<MemberSet> = Vec::new();
    for g in &gens {
        if seen.insert(Words::from_slice(g.words())) {
            members.push(g.clone());
        }
    }
    let mut cursor = 0;
    while cursor < members.len() {
        let current = members[cursor].clone();
        cursor += 1;
        for g in &gens {
            let u = current.union(g);
            if seen.contains(u.words()) {
                continue;
            }
            if members.len() >= budget.max_members {
                return Err(Error::Budget(format!(
                    "union closure exceeds the member cap {}",
                    budget.max_members
                )));
            }
            seen.insert(Words::from_slice(u.words()));
            members.push(u);
        }
    }
    members.sort_by(|a, b| a.lex_cmp(b));
    let mut system = SetSystem::from_sorted(ground, &members);
    system.closed = true;
    Ok(system)
}

/// Outcome of [`is_union_closed`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnionCheck {
    Closed,
    /// Member indices of a pair whose union is missing.
    Violation(usize, usize),
}

impl UnionCheck {
    pub fn is_closed(&self) -> bool {
        matches!(self, UnionCheck::Closed)
    }
}

/// Pairwise union check; the first violating pair in member order is
/// reported. A cached closed flag short-circuits the check.
pub fn is_union_closed(system: &SetSystem) -> UnionCheck {
    if system.closed {
        return UnionCheck::Closed;
    }
    let mut buf = vec![0u64; system.words];
    for i in 0..system.len {
        for j in i + 1..system.len {
            buf.copy_from_slice(system.words_of(i));
            bits::union_into(&mut buf, system.words_of(j));
            if system.index_of_words(&buf).is_none() {
                return UnionCheck::Violation(i, j);
            }
        }
    }
    UnionCheck::Closed
}

/// `a | b` in the semilattice sense: `a ∪ b = b`.
pub fn divides(a: &MemberSet, b: &MemberSet) -> Result<bool> {
    if a.words().len() != b.words().len() {
        return Err(Error::GroundMismatch);
    }
    Ok(a.is_subset(b))
}

/// Union of a non-empty list of sets.
pub fn join(family: &[MemberSet]) -> Result<MemberSet> {
    let (first, rest) = family.split_first().ok_or(Error::EmptyFamily)?;
    let mut acc = first.clone();
    for set in rest {
        if set.words().len() != acc.words().len() {
            return Err(Error::GroundMismatch);
        }
        acc.union_with(set);
    }
    Ok(acc)
}

pub(crate) fn join_indices(system: &SetSystem, family: &[usize]) -> MemberSet {
    let mut acc = system.ground.empty_set();
    for &i in family {
        acc.union_with(&system.member(i));
    }
    acc
}

/// Members of `system` contained in `bound`, in member order.
pub(crate) fn members_below(system: &SetSystem, bound: &MemberSet) -> Vec<usize> {
    let b = bound.words();
    if system.words == 1 {
        let mask = !b[0];
        system
            .data
            .iter()
            .enumerate()
            .filter(|(_, &z)| z & mask == 0)
            .map(|(i, _)| i)
            .collect()
    } else {
        (0..system.len)
            .filter(|&i| bits::is_subset(system.words_of(i), b))
            .collect()
    }
}

/// The filter generated by `family` inside a union-closed system: every
/// member lying below the join of the family. Empty for an empty family.
pub fn filter_generated(family: &[MemberSet], system: &SetSystem) -> Result<Subfamily> {
    let indices = system.indices_of(family)?;
    Ok(filter_generated_by_indices(&indices, system))
}

pub(crate) fn filter_generated_by_indices(family: &[usize], system: &SetSystem) -> Subfamily {
    if family.is_empty() {
        return Subfamily::default();
    }
    let bound = join_indices(system, family);
    Subfamily::from_sorted(members_below(system, &bound))
}

/// Outcome of [`is_incompressible`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Incompressibility {
    Incompressible,
    /// Position (in the given list) of a member whose removal keeps the join.
    Compressible { dropped: usize },
}

impl Incompressibility {
    pub fn is_incompressible(&self) -> bool {
        matches!(self, Incompressibility::Incompressible)
    }
}

/// Single-drop incompressibility test: every member must own a point that
/// no other member of the family covers.
pub fn is_incompressible(family: &[MemberSet]) -> Result<Incompressibility> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let width = family[0].words().len();
    if family.iter().any(|s| s.words().len() != width) {
        return Err(Error::GroundMismatch);
    }
    for (i, a) in family.iter().enumerate() {
        if family[i + 1..].contains(a) {
            return Err(Error::DuplicateMember(format!("{a:?}")));
        }
    }
    // Points covered exactly once.
    let mut once = vec![0u64; width];
    let mut twice = vec![0u64; width];
    for set in family {
        for (k, &w) in set.words().iter().enumerate() {
            twice[k] |= once[k] & w;
            once[k] |= w;
        }
    }
    for (pos, set) in family.iter().enumerate() {
        let private = set
            .words()
            .iter()
            .enumerate()
            .any(|(k, &w)| w & once[k] & !twice[k] != 0);
        if !private {
            return Ok(Incompressibility::Compressible { dropped: pos });
        }
    }
    Ok(Incompressibility::Incompressible)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn m1() -> SetSystem {
        let ground = Arc::new(GroundSet::new(["α", "β", "γ"]).unwrap());
        let members = vec![
            ground.set_from_labels(["α"]).unwrap(),
            ground.set_from_labels(["β"]).unwrap(),
            ground.set_from_labels(["α", "β"]).unwrap(),
            ground.set_from_labels(["α", "β", "γ"]).unwrap(),
        ];
        SetSystem::new(ground, members).unwrap()
    }

    fn set(s: &SetSystem, labels: &[&str]) -> MemberSet {
        s.ground().set_from_labels(labels).unwrap()
    }

    #[test]
    fn ground_rejects_bad_labels() {
        assert_eq!(GroundSet::new(Vec::<String>::new()), Err(Error::EmptyGround));
        assert!(matches!(GroundSet::new(["a", "a"]), Err(Error::DuplicateLabel(_))));
        assert!(matches!(GroundSet::new(["a b"]), Err(Error::InvalidLabel(_))));
        assert!(matches!(GroundSet::new(["x#"]), Err(Error::InvalidLabel(_))));
    }

    #[test]
    fn members_are_sorted_and_distinct() {
        let s = m1();
        let listed: Vec<String> = (0..s.len()).map(|i| s.format_member(i)).collect();
        assert_eq!(listed, ["{α}", "{α,β}", "{α,β,γ}", "{β}"]);
        let g = s.ground_arc();
        let dup = vec![g.set_from_labels(["α"]).unwrap(), g.set_from_labels(["α"]).unwrap()];
        assert!(matches!(SetSystem::new(g, dup), Err(Error::DuplicateMember(_))));
    }

    #[test]
    fn closure_of_two_singletons() {
        let s = m1();
        let gens = [set(&s, &["α"]), set(&s, &["β"])];
        let c = union_closure(&gens, s.ground_arc(), &Budget::default()).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c.contains(&set(&s, &["α", "β"])));
        assert!(c.is_closed_flag());
    }

    #[test]
    fn closure_of_closed_system_is_identity() {
        let s = m1();
        let gens: Vec<MemberSet> = s.members().collect();
        let c = union_closure(&gens, s.ground_arc(), &Budget::default()).unwrap();
        assert_eq!(c, s);
    }

    #[test]
    fn closure_of_four_singletons_is_all_nonempty_subsets() {
        let g = Arc::new(GroundSet::numbered(4).unwrap());
        let gens: Vec<MemberSet> = (0..4).map(|i| g.set_from_indices([i]).unwrap()).collect();
        let c = union_closure(&gens, Arc::clone(&g), &Budget::default()).unwrap();
        // brute force: every non-empty mask is a union of its singletons
        let expected: Vec<MemberSet> = (1u32..16)
            .map(|m| g.set_from_indices((0..4).filter(|i| m & (1 << i) != 0)).unwrap())
            .collect();
        assert_eq!(c.len(), 15);
        for e in &expected {
            assert!(c.contains(e));
        }
    }

    #[test]
    fn closure_respects_member_cap() {
        let g = Arc::new(GroundSet::numbered(10).unwrap());
        let gens: Vec<MemberSet> = (0..10).map(|i| g.set_from_indices([i]).unwrap()).collect();
        let budget = Budget {
            max_members: 100,
            ..Budget::default()
        };
        assert!(matches!(union_closure(&gens, g, &budget), Err(Error::Budget(_))));
        assert_eq!(
            union_closure(&[], Arc::new(GroundSet::numbered(1).unwrap()), &Budget::default()),
            Err(Error::EmptyFamily)
        );
    }

    #[test]
    fn union_closed_check_and_witness() {
        let s = m1();
        assert!(is_union_closed(&s).is_closed());
        let g = s.ground_arc();
        let pair = SetSystem::new(
            Arc::clone(&g),
            vec![set(&s, &["α"]), set(&s, &["β"])],
        )
        .unwrap();
        match is_union_closed(&pair) {
            UnionCheck::Violation(a, b) => {
                assert_eq!(pair.format_member(a), "{α}");
                assert_eq!(pair.format_member(b), "{β}");
            }
            UnionCheck::Closed => panic!("pair is not closed"),
        }
        assert!(pair.verify_closed().is_err());
    }

    #[test]
    fn divides_is_inclusion() {
        let s = m1();
        assert!(divides(&set(&s, &["α"]), &set(&s, &["α", "β"])).unwrap());
        assert!(!divides(&set(&s, &["α", "β"]), &set(&s, &["α"])).unwrap());
        assert!(divides(&s.ground().empty_set(), &set(&s, &["γ"])).unwrap());
        assert_eq!(
            divides(&MemberSet::empty(3), &MemberSet::empty(100)),
            Err(Error::GroundMismatch)
        );
    }

    #[test]
    fn join_examples() {
        let s = m1();
        assert_eq!(join(&[set(&s, &["α"]), set(&s, &["β"])]).unwrap(), set(&s, &["α", "β"]));
        let top = set(&s, &["α", "β", "γ"]);
        assert_eq!(join(std::slice::from_ref(&top)).unwrap(), top);
        assert_eq!(join(&[]), Err(Error::EmptyFamily));
    }

    #[test]
    fn filter_examples() {
        let s = m1();
        let f = filter_generated(&[set(&s, &["α"]), set(&s, &["β"])], &s).unwrap();
        let got: Vec<String> = f.iter().map(|i| s.format_member(i)).collect();
        assert_eq!(got, ["{α}", "{α,β}", "{β}"]);
        let top = filter_generated(&[set(&s, &["α", "β", "γ"])], &s).unwrap();
        assert_eq!(top.len(), s.len());
        assert!(filter_generated(&[], &s).unwrap().is_empty());
        assert!(matches!(
            filter_generated(&[set(&s, &["γ"])], &s),
            Err(Error::NotAMember(_))
        ));
    }

    #[test]
    fn incompressibility_examples() {
        let s = m1();
        let a = set(&s, &["α"]);
        let b = set(&s, &["β"]);
        let top = set(&s, &["α", "β", "γ"]);
        assert!(is_incompressible(&[a.clone(), b.clone()]).unwrap().is_incompressible());
        assert_eq!(
            is_incompressible(&[a.clone(), b.clone(), top]).unwrap(),
            Incompressibility::Compressible { dropped: 0 }
        );
        assert!(matches!(
            is_incompressible(&[a.clone(), a]),
            Err(Error::DuplicateMember(_))
        ));
        assert_eq!(is_incompressible(&[]), Err(Error::EmptyFamily));
        // {∅} is compressible: the empty subfamily has the same join
        assert!(!is_incompressible(&[s.ground().empty_set()]).unwrap().is_incompressible());
        // distinct singletons
        let g = GroundSet::numbered(9).unwrap();
        let singles: Vec<MemberSet> = (0..9).map(|i| g.set_from_indices([i]).unwrap()).collect();
        assert!(is_incompressible(&singles).unwrap().is_incompressible());
    }
}
