use std::sync::Arc;

use num_traits::Zero;

use crate::bits::MemberSet;
use crate::canonical::restrict;
use crate::error::{Error, Result};
use crate::propagation::{
    fbp_closure, propagation_constant, v_value, LogWeight, PropagationLimits, PropagationReport, Rational,
    VValue,
};
use crate::setsystem::{union_closure, Budget, GroundSet, SetSystem, Subfamily};

/// Points `(r, c)` with rows `0, 1, 2` and columns `1..=J`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TileUniverse {
    pub columns: usize,
}

impl TileUniverse {
    pub fn new(columns: usize) -> Result<Self> {
        if columns < 3 {
            return Err(Error::InvalidArgument(format!("{columns} columns, need at least 3")));
        }
        Ok(TileUniverse { columns })
    }

    pub fn points(&self) -> usize {
        3 * self.columns
    }

    pub fn index(&self, row: usize, column: usize) -> usize {
        (column - 1) * 3 + row
    }

    pub fn ground(&self) -> GroundSet {
        let labels = (1..=self.columns).flat_map(|c| (0..3).map(move |r| format!("({r},{c})")));
        GroundSet::new(labels).expect("tile labels are valid")
    }

    pub fn set<I: IntoIterator<Item = (usize, usize)>>(&self, cells: I) -> MemberSet {
        MemberSet::from_indices(self.points(), cells.into_iter().map(|(r, c)| self.index(r, c)))
    }

    /// Rows 1 and 2.
    pub fn star(&self) -> MemberSet {
        self.set((1..=self.columns).flat_map(|c| [(1, c), (2, c)]))
    }

    /// Columns `n²..(n+1)²-1` of tile `n`.
    pub fn tile_columns(n: usize) -> std::ops::Range<usize> {
        n * n..(n + 1) * (n + 1)
    }

    /// Number of tiles lying entirely inside the columns.
    pub fn full_tiles(&self) -> usize {
        (1..).take_while(|&n| (n + 1) * (n + 1) - 1 <= self.columns).count()
    }
}

/// `λ*(z) = #{ j : (2, j) ∈ z }`.
pub fn lambda_star(universe: &TileUniverse, z: &MemberSet) -> usize {
    (1..=universe.columns).filter(|&j| z.contains(universe.index(2, j))).count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Section6Config {
    pub columns: usize,
    /// Columns whose `x_j` and `g_j` generate `R`.
    pub r_columns: usize,
}

impl Default for Section6Config {
    fn default() -> Self {
        Section6Config {
            columns: 15,
            r_columns: 12,
        }
    }
}

/// The tile systems with their weights.
#[derive(Debug, Clone)]
pub struct Section6Bundle {
    pub universe: TileUniverse,
    pub config: Section6Config,
    pub ground: Arc<GroundSet>,
    /// `x_j = {(1,j), (2,j)}` for `j = 1..=J`.
    pub x: Vec<MemberSet>,
    /// Full tiles `a_n = {(0,k), (1,k) : n² ≤ k < (n+1)²}`.
    pub a: Vec<MemberSet>,
    /// `b_n = q(a_n)`.
    pub b: Vec<MemberSet>,
    /// `g_j = {(1,j)}` for the columns of `R`.
    pub g: Vec<MemberSet>,
    pub s: Arc<SetSystem>,
    pub t: Arc<SetSystem>,
    pub r: Arc<SetSystem>,
    pub lambda: LogWeight,
    pub lambda_t: LogWeight,
    pub lambda_r: LogWeight,
    /// Index in `t` of `q(z)` for each member `z` of `s`.
    pub q: Vec<usize>,
}

fn weight_on(universe: &TileUniverse, system: &Arc<SetSystem>) -> Result<LogWeight> {
    LogWeight::from_fn(Arc::clone(system), |z| {
        Rational::from_integer(lambda_star(universe, z) as i64)
    })
}

/// Builds `S = ⟨A ∪ X⟩`, `T = q(S)` with `q(z) = z ∩ (rows 1, 2)` and
/// `R = ⟨X ∪ G⟩` on the first `r_columns` columns. Tiles reaching past the
/// last column are left out.
pub fn section6_build(config: Section6Config, budget: &Budget) -> Result<Section6Bundle> {
    let universe = TileUniverse::new(config.columns)?;
    if config.columns < 8 {
        return Err(Error::InvalidArgument(format!(
            "{} columns, need at least 8 for two tiles",
            config.columns
        )));
    }
    if config.r_columns == 0 || config.r_columns > config.columns {
        return Err(Error::InvalidArgument(format!(
            "R uses {} of {} columns",
            config.r_columns, config.columns
        )));
    }
    let ground = Arc::new(universe.ground());
    let x: Vec<MemberSet> = (1..=config.columns).map(|j| universe.set([(1, j), (2, j)])).collect();
    let a: Vec<MemberSet> = (1..=universe.full_tiles())
        .map(|n| universe.set(TileUniverse::tile_columns(n).flat_map(|k| [(0, k), (1, k)])))
        .collect();
    let star = universe.star();
    let b: Vec<MemberSet> = a.iter().map(|t| t.intersection(&star)).collect();
    let g: Vec<MemberSet> = (1..=config.r_columns).map(|j| universe.set([(1, j)])).collect();

    let generators: Vec<MemberSet> = a.iter().chain(&x).cloned().collect();
    let s = Arc::new(union_closure(&generators, Arc::clone(&ground), budget)?);
    let t = Arc::new(restrict(&s, &star)?.system);
    let r_generators: Vec<MemberSet> = x[..config.r_columns].iter().chain(&g).cloned().collect();
    let r = Arc::new(union_closure(&r_generators, Arc::clone(&ground), budget)?);
    let q = s
        .members()
        .map(|z| t.index_of(&z.intersection(&star)).expect("traces of s lie in t"))
        .collect();

    Ok(Section6Bundle {
        universe,
        config,
        ground,
        lambda: weight_on(&universe, &s)?,
        lambda_t: weight_on(&universe, &t)?,
        lambda_r: weight_on(&universe, &r)?,
        x,
        a,
        b,
        g,
        s,
        t,
        r,
        q,
    })
}

impl Section6Bundle {
    /// `ℰ_n = { x_k : n² ≤ k < (n+1)² }` as members of `T`.
    pub fn family(&self, n: usize) -> Result<Subfamily> {
        let cols = self.tile(n)?;
        let sets: Vec<MemberSet> = cols.map(|k| self.x[k - 1].clone()).collect();
        Ok(Subfamily::new(self.t.indices_of(&sets)?))
    }

    fn tile(&self, n: usize) -> Result<std::ops::Range<usize>> {
        if n == 0 || n > self.a.len() {
            return Err(Error::InvalidArgument(format!(
                "tile {n} does not fit in {} columns",
                self.universe.columns
            )));
        }
        Ok(TileUniverse::tile_columns(n))
    }

    /// Whether `z` is a union of members of `ℰ_n`.
    fn generated_by_family(&self, n: usize, z: &MemberSet) -> bool {
        let mut acc = self.ground.empty_set();
        for k in TileUniverse::tile_columns(n) {
            if self.x[k - 1].is_subset(z) {
                acc.union_with(&self.x[k - 1]);
            }
        }
        !z.is_empty() && acc == *z
    }
}

/// Outcome of [`verify_lemma_6_1`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma61Report {
    pub n: usize,
    pub c: usize,
    /// Whether `1 ≤ C ≤ n`; outside this range the check still runs.
    pub hypothesis: bool,
    pub contained: bool,
    /// First closure member (in member order) that is not a union of `ℰ_n`.
    pub offending: Option<MemberSet>,
    pub closure_size: usize,
    pub steps: usize,
}

/// Runs `FBP_C` from `ℰ_n` to its fixpoint in `(T, λ*)` and checks every
/// member is a union of members of `ℰ_n`.
pub fn verify_lemma_6_1(bundle: &Section6Bundle, n: usize, c: usize) -> Result<Lemma61Report> {
    if c == 0 {
        return Err(Error::InvalidArgument("C must be at least 1".into()));
    }
    let family = bundle.family(n)?;
    let closure = fbp_closure(&family, Rational::from_integer(c as i64), &bundle.lambda_t)?;
    let offending = closure
        .members
        .iter()
        .map(|i| bundle.t.member(i))
        .find(|z| !bundle.generated_by_family(n, z));
    Ok(Lemma61Report {
        n,
        c,
        hypothesis: c <= n,
        contained: offending.is_none(),
        offending,
        closure_size: closure.members.len(),
        steps: closure.steps,
    })
}

/// Exact `V_{ℰ_n}(b_n)` in `(T, λ*)` against the lower bound `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section6Row {
    pub n: usize,
    /// `ℰ_n ⊆ W_1(T)`.
    pub family_in_w1: bool,
    pub lambda_b: Rational,
    pub v_exact: VValue,
    pub bound: Rational,
    pub pass: bool,
}

pub fn verify_section6_bounds(bundle: &Section6Bundle, n: usize) -> Result<Section6Row> {
    let family = bundle.family(n)?;
    let one = Rational::from_integer(1);
    let family_in_w1 = family.iter().all(|i| bundle.lambda_t.value(i) <= one);
    let b = &bundle.b[n - 1];
    let target = bundle
        .t
        .index_of(b)
        .ok_or_else(|| Error::NotAMember(bundle.ground.format_set(b)))?;
    let lambda_b = bundle.lambda_t.value(target);
    let v_exact = v_value(&family, target, &bundle.lambda_t)?;
    let bound = Rational::from_integer(n as i64);
    let pass = family_in_w1 && lambda_b.is_zero() && v_exact >= VValue::Finite(bound);
    Ok(Section6Row {
        n,
        family_in_w1,
        lambda_b,
        v_exact,
        bound,
        pass,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    S,
    R,
}

/// `propagation_constant` on `(S, λ)` or `(R, λ*)`, with `pass` meaning the
/// largest value found is at most `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LPropagation {
    pub which: Which,
    pub report: PropagationReport,
    pub pass: bool,
}

pub fn verify_l_propagation(
    bundle: &Section6Bundle,
    which: Which,
    level: Rational,
    limits: &PropagationLimits,
) -> Result<LPropagation> {
    let weight = match which {
        Which::S => &bundle.lambda,
        Which::R => &bundle.lambda_r,
    };
    let report = propagation_constant(weight, level, limits)?;
    let pass = report.max_v.is_none_or(|v| v <= level);
    Ok(LPropagation { which, report, pass })
}

/// Unique factorization over a generator list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factorization {
    Unique,
    /// A member with two decompositions: the generators dividing it, with
    /// and without the redundant one.
    Ambiguous { member: usize, redundant: MemberSet },
    /// A member that is not a union of generators at all.
    NotGenerated { member: usize },
}

/// The decompositions of `z` are the sets of generators with union `z`. All
/// of them lie inside the set of generators dividing `z`, so there is only
/// one exactly when that set covers `z` and none of its elements is covered
/// by the others.
pub fn factorization(system: &SetSystem, generators: &[MemberSet]) -> Factorization {
    for (i, z) in system.members().enumerate() {
        let dividing: Vec<&MemberSet> = generators.iter().filter(|g| g.is_subset(&z)).collect();
        let mut cover = system.ground().empty_set();
        for g in &dividing {
            cover.union_with(g);
        }
        if cover != z {
            return Factorization::NotGenerated { member: i };
        }
        for (k, g) in dividing.iter().enumerate() {
            let mut others = system.ground().empty_set();
            for (l, h) in dividing.iter().enumerate() {
                if l != k {
                    others.union_with(h);
                }
            }
            if g.is_subset(&others) {
                return Factorization::Ambiguous {
                    member: i,
                    redundant: (*g).clone(),
                };
            }
        }
    }
    Factorization::Unique
}

/// Numbers of tiles `a_n` and columns `x_j` dividing member `i` of `S`.
pub fn factor_counts(bundle: &Section6Bundle, i: usize) -> (usize, usize) {
    let z = bundle.s.member(i);
    let tiles = bundle.a.iter().filter(|a| a.is_subset(&z)).count();
    let columns = bundle.x.iter().filter(|x| x.is_subset(&z)).count();
    (tiles, columns)
}
