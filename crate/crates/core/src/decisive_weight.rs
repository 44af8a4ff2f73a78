//! The log-weight read off a decisive colour class, and the failure of
//! first-level propagation it produces on `T_ort`.

use std::sync::Arc;

use num_traits::Zero;

use crate::bits::MemberSet;
use crate::canonical::{canonical_member, canonical_system, Kind, Spread};
use crate::dichotomy::{colours_spread, ColourCheck, Colouring, Window};
use crate::error::{Error, Result};
use crate::propagation::{v_value, LogWeight, Rational, VValue};
use crate::setsystem::{Budget, SetSystem, Subfamily};

/// The levels where `x` takes at most half of every colour class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TSet {
    pub member: MemberSet,
    pub levels: Vec<usize>,
}

/// `{ n : 2|x ∩ C ∩ E_n| ≤ |C ∩ E_n| for every class C }`. Points outside
/// the spread play no part.
pub fn t_set(x: &MemberSet, spread: &Spread, colouring: &Colouring) -> TSet {
    let levels = (1..=spread.len())
        .filter(|&n| {
            let e = spread.block(n);
            colouring.classes().iter().all(|c| {
                let piece = c.intersection(e);
                2 * x.intersection_len(&piece) <= piece.len()
            })
        })
        .collect();
    TSet {
        member: x.clone(),
        levels,
    }
}

/// `max_{n ∈ T(x)} |x ∩ C₀ ∩ E_n|`, or zero when `T(x)` is empty.
pub fn lambda(x: &MemberSet, spread: &Spread, colouring: &Colouring, class: usize) -> usize {
    let c0 = colouring.class(class);
    t_set(x, spread, colouring)
        .levels
        .into_iter()
        .map(|n| x.intersection(c0).intersection_len(spread.block(n)))
        .max()
        .unwrap_or(0)
}

fn check_inputs(system: &SetSystem, spread: &Spread, colouring: &Colouring, class: usize) -> Result<()> {
    if system.ground() != spread.ground() || colouring.ground() != spread.ground() {
        return Err(Error::GroundMismatch);
    }
    if class >= colouring.len() {
        return Err(Error::InvalidArgument(format!(
            "class {class} out of {} classes",
            colouring.len()
        )));
    }
    Ok(())
}

/// The weight `λ` on the members of `S` itself.
pub fn weight_from_colouring(
    system: Arc<SetSystem>,
    spread: &Spread,
    colouring: &Colouring,
    class: usize,
) -> Result<LogWeight> {
    check_inputs(&system, spread, colouring, class)?;
    LogWeight::from_fn(system, |x| {
        Rational::from_integer(lambda(x, spread, colouring, class) as i64)
    })
}

/// One level of the `T_ort` failure check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TortRow {
    pub n: usize,
    /// `|C₀ ∩ E_n|`
    pub class_size: usize,
    /// Whether `λ(x_i) = 1` for every member of `F_n`.
    pub lambda_x_one: bool,
    pub lambda_b: Rational,
    pub v_exact: VValue,
    pub bound: Rational,
    pub pass: bool,
}

/// Builds `T_ort` over the spread with the weight of class `class`, and for
/// each level from `start` on takes `F_n`, the members with trace
/// `E_{<n} ∪ {γ} ∪ E_{>n}` for `γ ∈ C₀ ∩ E_n`, and `b_n = join(F_n)`. Checks
/// `λ = 1` on `F_n`, `λ(b_n) = 0` and `V_{F_n}(b_n) ≥ |C₀ ∩ E_n| / 4`.
///
/// `start` defaults to the first level where `C₀` has two points.
pub fn verify_tort_failure(
    spread: &Spread,
    colouring: &Colouring,
    class: usize,
    start: Option<usize>,
    budget: &Budget,
) -> Result<Vec<TortRow>> {
    let system = Arc::new(canonical_system(spread, Kind::Ort, budget)?);
    check_inputs(&system, spread, colouring, class)?;
    let c0 = colouring.class(class);
    let start = match start {
        Some(s) => s,
        None => (1..=spread.len())
            .find(|&n| c0.intersection_len(spread.block(n)) >= 2)
            .ok_or_else(|| Error::InvalidArgument("the class never has two points in a block".into()))?,
    };
    let window = Window::new(start, spread.len(), 1)?;
    window.check(spread)?;
    if let ColourCheck::Fails { class, level } = colours_spread(colouring, spread, &window)? {
        return Err(Error::InvalidColouring(format!("class {class} misses block {level}")));
    }
    let weight = weight_from_colouring(Arc::clone(&system), spread, colouring, class)?;
    let points = spread.ground().len();

    let mut rows = Vec::new();
    for n in start..=spread.len() {
        let gammas = c0.intersection(spread.block(n));
        if gammas.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "class has {} point(s) in block {n}",
                gammas.len()
            )));
        }
        let singles: Vec<MemberSet> = gammas
            .iter()
            .map(|g| canonical_member(spread, Kind::Ort, n, &MemberSet::from_indices(points, [g])))
            .collect();
        let family = Subfamily::new(system.indices_of(&singles)?);
        let b = crate::setsystem::join(&singles)?;
        let b_index = system
            .index_of(&b)
            .ok_or_else(|| Error::NotAMember(system.ground().format_set(&b)))?;
        let lambda_x_one = family.iter().all(|i| weight.value(i) == Rational::from_integer(1));
        let lambda_b = weight.value(b_index);
        let v_exact = v_value(&family, b_index, &weight)?;
        let bound = Rational::new(gammas.len() as i64, 4);
        let pass = lambda_x_one && lambda_b.is_zero() && v_exact >= VValue::Finite(bound);
        rows.push(TortRow {
            n,
            class_size: gammas.len(),
            lambda_x_one,
            lambda_b,
            v_exact,
            bound,
            pass,
        });
    }
    Ok(rows)
}
