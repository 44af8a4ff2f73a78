//! The ten acceptance criteria, one pass/fail line each.

use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use num_traits::Zero;
use unionlab::canonical::{
    canonical_system, contains_canonical, default_sizes, labelled_spread, make_spread, restrict, tmax,
    tmax_weight_value, tmin_weight_value, tort, verify_level_one_failure, weight_tmax, weight_tmin, Kind, Side,
    Spread,
};
use unionlab::decisive_weight::{verify_tort_failure, weight_from_colouring};
use unionlab::dichotomy::{
    dichotomy_search, find_halver, refined_structure, shatters, Colouring, DichotomyParams, Outcome, Window,
};
use unionlab::fixtures::{
    lambda_star, section6_build, verify_l_propagation, verify_lemma_6_1, verify_section6_bounds, Section6Config,
    Which,
};
use unionlab::propagation::{
    check_log_weight, fbp_closure, v_value, LogWeight, PropagationLimits, Rational, VValue,
};
use unionlab::setsystem::{breadth, filter_generated, is_incompressible, is_union_closed, union_closure};
use unionlab::{Budget, GroundSet, MemberSet, SetSystem, Subfamily};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("{e:?}"))
}

fn numbered(n: usize) -> Arc<GroundSet> {
    Arc::new(GroundSet::numbered(n).unwrap())
}

fn power_set(n: usize) -> SetSystem {
    SetSystem::power_set(numbered(n), false, &Budget::default()).unwrap()
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn sp2() -> Spread {
    let ground = Arc::new(GroundSet::new(["a1", "a2", "b1", "b2", "b3"]).unwrap());
    make_spread(&[2, 3], ground).unwrap()
}

/// Every `k`-subset of `0..n`, in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn criterion_1() -> Check {
    let budget = Budget::default();
    let mut checked = 0;
    // exhaustive over the power set of the join while it has at most 14 points
    for levels in 1..=4 {
        let spread = labelled_spread(&default_sizes(levels)).unwrap();
        for weight in [ok(weight_tmax(&spread, &budget))?, ok(weight_tmin(&spread, &budget))?] {
            let check = check_log_weight(&weight);
            ensure(check.is_ok(), || format!("power-set weight, {levels} levels: {check:?}"))?;
            checked += 1;
        }
    }
    // up to 27 points the same formulas on the canonical systems
    for levels in 1..=6 {
        let spread = labelled_spread(&default_sizes(levels)).unwrap();
        for kind in [Kind::Max, Kind::Min, Kind::Ort] {
            let system = Arc::new(ok(canonical_system(&spread, kind, &budget))?);
            let weights = [
                ok(LogWeight::from_fn(Arc::clone(&system), |x| tmax_weight_value(&spread, x)))?,
                ok(LogWeight::from_fn(Arc::clone(&system), |x| tmin_weight_value(&spread, x)))?,
            ];
            for w in weights {
                let check = check_log_weight(&w);
                ensure(check.is_ok(), || format!("{kind:?} over {levels} levels: {check:?}"))?;
                checked += 1;
            }
        }
    }
    for sizes in [&[2, 3][..], &[2, 3, 4], &[2, 3, 4, 5], &[3, 3, 4, 4]] {
        let spread = labelled_spread(sizes).unwrap();
        let system = Arc::new(ok(tort(&spread, &budget))?);
        let points = spread.ground().len();
        let halves = [
            MemberSet::from_indices(points, (0..points).filter(|i| i % 2 == 0)),
            MemberSet::from_indices(points, (0..points).filter(|i| i % 2 == 1)),
        ];
        let colourings = [
            Colouring::trivial(spread.ground_arc()),
            ok(Colouring::new(spread.ground_arc(), halves.to_vec()))?,
        ];
        for colouring in &colourings {
            for class in 0..colouring.len() {
                let w = ok(weight_from_colouring(Arc::clone(&system), &spread, colouring, class))?;
                ensure(check_log_weight(&w).is_ok(), || format!("colouring weight on {sizes:?}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} weights subadditive, zero violations"))
}

/// Non-decreasing size vectors with entries in `1..=max` and up to `levels` entries.
fn size_vectors(levels: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<usize>> = (1..=max).map(|s| vec![s]).collect();
    for _ in 0..levels {
        out.extend(frontier.iter().cloned());
        frontier = frontier
            .iter()
            .flat_map(|v| (*v.last().unwrap()..=max).map(move |s| [v.clone(), vec![s]].concat()))
            .collect();
    }
    out
}

fn criterion_2() -> Check {
    let budget = Budget::default();
    let mut systems = 0;
    for sizes in size_vectors(5, 3) {
        let spread = labelled_spread(&sizes).unwrap();
        for kind in [Kind::Max, Kind::Min, Kind::Ort] {
            let s = ok(canonical_system(&spread, kind, &budget))?;
            ensure(is_union_closed(&s).is_closed(), || format!("{kind:?} over {sizes:?}"))?;
            let r = ok(restrict(&s, &spread.join()))?;
            ensure(r.system.members().eq(s.members()), || format!("restriction of {kind:?} over {sizes:?}"))?;
            ensure(r.preimage.iter().copied().eq(0..s.len()), || format!("preimage of {kind:?} over {sizes:?}"))?;
            systems += 1;
        }
    }
    Ok(format!("{systems} canonical systems closed, restriction is the identity"))
}

fn level_one(side: Side, levels: usize) -> Check {
    let rows = ok(verify_level_one_failure(side, levels, &Budget::default()))?;
    ensure(rows.len() == levels - 1, || format!("{} rows", rows.len()))?;
    let mut values = Vec::new();
    for (row, n) in rows.iter().zip(2..) {
        ensure(row.n == n && row.block_size == n + 1, || format!("{row:?}"))?;
        ensure(row.lambda_a_one && row.lambda_b.is_zero(), || format!("weights at n={n}: {row:?}"))?;
        ensure(row.bound == Rational::new(n as i64 + 1, 2), || format!("bound at n={n}"))?;
        ensure(row.v_exact >= VValue::Finite(row.bound) && row.pass, || format!("n={n}: {row:?}"))?;
        if let Some(v) = row.v_power_set {
            ensure(v >= VValue::Finite(row.bound), || format!("power set value at n={n}"))?;
        }
        values.push(format!("n={n} V={}", row.v_exact));
    }
    Ok(values.join(", "))
}

fn criterion_3() -> Check {
    let detail = level_one(Side::Max, 6)?;
    let rows = ok(verify_level_one_failure(Side::Max, 2, &Budget::default()))?;
    ensure(rows[0].v_exact == VValue::Finite(int(2)), || format!("V at n=2 is {}", rows[0].v_exact))?;
    Ok(detail)
}

fn criterion_4() -> Check {
    level_one(Side::Min, 5)
}

fn criterion_5() -> Check {
    let spread = labelled_spread(&default_sizes(5)).unwrap();
    let colouring = Colouring::trivial(spread.ground_arc());
    let rows = ok(verify_tort_failure(&spread, &colouring, 0, Some(2), &Budget::default()))?;
    ensure(rows.iter().map(|r| r.n).eq(2..=5), || format!("levels {:?}", rows.iter().map(|r| r.n).collect::<Vec<_>>()))?;
    let mut values = Vec::new();
    for row in &rows {
        ensure(row.class_size == row.n + 1, || format!("{row:?}"))?;
        ensure(row.bound == Rational::new(row.class_size as i64, 4), || format!("{row:?}"))?;
        ensure(row.lambda_x_one && row.lambda_b.is_zero(), || format!("{row:?}"))?;
        ensure(row.v_exact >= VValue::Finite(row.bound) && row.pass, || format!("{row:?}"))?;
        values.push(format!("n={} V={}", row.n, row.v_exact));
    }
    Ok(values.join(", "))
}

fn criterion_6() -> Check {
    let budget = Budget::default();
    let bundle = ok(section6_build(Section6Config::default(), &budget))?;
    ensure(bundle.universe.columns == 15, || "J".into())?;
    let u = &bundle.universe;
    ensure(bundle.x.iter().all(|x| lambda_star(u, x) == 1), || "λ*(x_j) = 1".into())?;
    ensure(bundle.b.iter().all(|b| lambda_star(u, b) == 0), || "λ*(b_n) = 0".into())?;
    for c in 1..=2 {
        let r = ok(verify_lemma_6_1(&bundle, 2, c))?;
        ensure(r.hypothesis && r.contained, || format!("Lemma at C={c}: {r:?}"))?;
    }
    let r = ok(verify_lemma_6_1(&bundle, 2, 3))?;
    let offending = r.offending.as_ref().map(|m| bundle.b[1].is_subset(m));
    ensure(!r.contained && offending == Some(true), || format!("Lemma at C=3: {r:?}"))?;
    let row = ok(verify_section6_bounds(&bundle, 2))?;
    ensure(row.v_exact == VValue::Finite(int(3)) && row.bound == int(2) && row.pass, || format!("{row:?}"))?;
    let limits = PropagationLimits {
        max_subset_size: 4,
        max_subsets: 100_000,
    };
    let mut props = Vec::new();
    for which in [Which::S, Which::R] {
        for level in [0, 1] {
            let res = ok(verify_l_propagation(&bundle, which, int(level), &limits))?;
            let rep = &res.report;
            ensure(res.pass, || format!("{which:?} at L={level}: {rep:?}"))?;
            props.push(format!(
                "{which:?} L={level} max V={} over {} subsets{}",
                rep.max_v.map_or("-".to_string(), |v| v.to_string()),
                rep.subsets_examined,
                if rep.exhaustive { "" } else { " (capped)" }
            ));
        }
    }
    Ok(format!("V(b_2)=3, Lemma (2,1) (2,2) hold, (2,3) broken; {}", props.join("; ")))
}

/// Closure of `E` under unions inside `S` and under taking members below.
fn filter_fixpoint(system: &SetSystem, family: &[usize]) -> Vec<usize> {
    let n = system.len();
    let mut inside = vec![false; n];
    for &i in family {
        inside[i] = true;
    }
    loop {
        let mut changed = false;
        for i in 0..n {
            if !inside[i] {
                continue;
            }
            let x = system.member(i);
            for j in 0..n {
                if inside[j] {
                    continue;
                }
                let y = system.member(j);
                let below = y.is_subset(&x);
                let joined = (0..n).any(|k| inside[k] && system.member(k).union(&x) == y);
                if below || joined {
                    inside[j] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            return (0..n).filter(|&i| inside[i]).collect();
        }
    }
}

fn small_systems() -> Vec<SetSystem> {
    let ground = numbered(4);
    let subsets: Vec<MemberSet> = (1u32..16)
        .map(|m| MemberSet::from_indices(4, (0..4).filter(|i| m >> i & 1 == 1)))
        .collect();
    let mut out: Vec<SetSystem> = Vec::new();
    for k in 1..=4 {
        for (idx, combo) in combinations(subsets.len(), k).into_iter().enumerate() {
            if k == 4 && idx % 5 != 0 {
                continue;
            }
            let gens: Vec<MemberSet> = combo.iter().map(|&i| subsets[i].clone()).collect();
            let s = union_closure(&gens, Arc::clone(&ground), &Budget::default()).unwrap();
            if s.len() <= 12 && !out.contains(&s) {
                out.push(s);
            }
        }
    }
    out
}

fn weighted_fixtures() -> Vec<LogWeight> {
    let budget = Budget::default();
    let mut out = Vec::new();
    for s in small_systems().into_iter().step_by(7) {
        let s = Arc::new(s);
        out.push(LogWeight::from_fn(Arc::clone(&s), |x| int(x.len() as i64)).unwrap());
        out.push(LogWeight::from_fn(Arc::clone(&s), |x| int(x.len().min(2) as i64)).unwrap());
    }
    let spread = sp2();
    let tmax_sys = Arc::new(canonical_system(&spread, Kind::Max, &budget).unwrap());
    out.push(LogWeight::from_fn(tmax_sys, |x| tmax_weight_value(&spread, x)).unwrap());
    let tmin_sys = Arc::new(canonical_system(&spread, Kind::Min, &budget).unwrap());
    out.push(LogWeight::from_fn(tmin_sys, |x| tmin_weight_value(&spread, x)).unwrap());
    let t = Arc::new(tort(&spread, &budget).unwrap());
    out.push(weight_from_colouring(t, &spread, &Colouring::trivial(spread.ground_arc()), 0).unwrap());
    assert!(out.iter().all(|w| w.system().len() <= 12));
    out
}

fn criterion_7() -> Check {
    let systems = small_systems();
    let mut families = 0u64;
    for s in &systems {
        for mask in 1u32..1 << s.len() {
            let family: Vec<usize> = (0..s.len()).filter(|i| mask >> i & 1 == 1).collect();
            let sets: Vec<MemberSet> = family.iter().map(|&i| s.member(i)).collect();
            let closed = ok(filter_generated(&sets, s))?;
            ensure(closed.indices() == filter_fixpoint(s, &family), || format!("filter of {family:?}"))?;
            families += 1;
        }
    }

    let fixtures = weighted_fixtures();
    let mut pairs = 0u64;
    for w in &fixtures {
        let s = w.system();
        let n = s.len();
        let top = w.max_value();
        let mut grid: Vec<Rational> = w.values().to_vec();
        grid.push(Rational::zero());
        grid.sort();
        grid.dedup();
        let mut table: Vec<Vec<VValue>> = vec![Vec::new(); 1 << n];
        for (mask, row) in table.iter_mut().enumerate().skip(1) {
            let family = Subfamily::new((0..n).filter(|i| mask >> i & 1 == 1).collect());
            let sets: Vec<MemberSet> = family.iter().map(|i| s.member(i)).collect();
            let filter = ok(filter_generated(&sets, s))?;
            for z in 0..n {
                let v = ok(v_value(&family, z, w))?;
                match v {
                    VValue::Finite(v) => {
                        ensure(filter.contains(z) && v <= top, || format!("ceiling: {family:?} {z}"))?
                    }
                    VValue::Infinite => ensure(!filter.contains(z), || format!("finite filter member {z}"))?,
                }
                row.push(v);
                pairs += 1;
            }
            let closures: Vec<Subfamily> = grid
                .iter()
                .map(|&c| fbp_closure(&family, c, w).map(|c| c.members))
                .collect::<Result<_, _>>()
                .map_err(|e| format!("{e}"))?;
            ensure(closures.windows(2).all(|p| p[0].is_subset(&p[1])), || format!("monotone in C: {family:?}"))?;
        }
        for mask in 1usize..1 << n {
            for extra in (0..n).filter(|i| mask >> i & 1 == 0) {
                let bigger = mask | 1 << extra;
                let grows = table[bigger].iter().zip(&table[mask]).all(|(b, a)| b <= a);
                ensure(grows, || format!("monotone in E: {mask:b} + {extra}"))?;
            }
        }
    }
    Ok(format!(
        "{} systems, {families} filters match the fixpoint; {} weighted fixtures, {pairs} (E, z) pairs",
        systems.len(),
        fixtures.len()
    ))
}

fn has_incompressible(system: &SetSystem, k: usize) -> bool {
    combinations(system.len(), k).into_iter().any(|c| {
        let sets: Vec<MemberSet> = c.iter().map(|&i| system.member(i)).collect();
        is_incompressible(&sets).unwrap().is_incompressible()
    })
}

fn criterion_8() -> Check {
    let budget = Budget::default();
    for len in 1..=6 {
        let chain: Vec<MemberSet> = (1..=len).map(|k| MemberSet::from_indices(len, 0..k)).collect();
        let s = ok(SetSystem::new(numbered(len), chain))?;
        let b = breadth(&s, &budget);
        ensure(b.value == 1 && b.exact, || format!("chain of length {len}: {b:?}"))?;
    }
    for n in 1..=5 {
        let p = power_set(n);
        let b = breadth(&p, &budget);
        ensure(b.value == n && b.exact, || format!("power set of {n}: {b:?}"))?;
        ensure(has_incompressible(&p, n) && !has_incompressible(&p, n + 1), || format!("brute force at {n}"))?;
    }
    let g = Arc::new(GroundSet::new(["α", "β", "γ"]).unwrap());
    let m1 = ok(SetSystem::new(
        Arc::clone(&g),
        vec![
            g.set_from_labels(["α"]).unwrap(),
            g.set_from_labels(["β"]).unwrap(),
            g.set_from_labels(["α", "β"]).unwrap(),
            g.set_from_labels(["α", "β", "γ"]).unwrap(),
        ],
    ))?;
    let b = breadth(&m1, &budget);
    let brute = (1..=m1.len()).rev().find(|&k| has_incompressible(&m1, k)).unwrap();
    ensure(b.value == 2 && brute == 2, || format!("S_M1: {b:?}, brute force {brute}"))?;

    // every shattering sequence over a small power set, and the search's witnesses
    let p = power_set(6);
    let spread = make_spread(&[3, 3], numbered(6)).unwrap();
    let window = Window::full(&spread, 1).unwrap();
    let mut sequences = 0;
    for k in 1..=3usize {
        let total = p.len().pow(k as u32);
        for code in 0..total {
            let seq: Vec<MemberSet> = (0..k).map(|j| p.member(code / p.len().pow(j as u32) % p.len())).collect();
            if !ok(shatters(&seq, &spread, k, &window))?.holds {
                continue;
            }
            sequences += 1;
            for m in 1..=k {
                ensure(is_incompressible(&seq[..m]).unwrap().is_incompressible(), || format!("{seq:?}"))?;
            }
        }
    }
    let p15 = power_set(15);
    let spread15 = make_spread(&[4, 5, 6], numbered(15)).unwrap();
    for t in 1..=2 {
        let params = DichotomyParams {
            window: Window::full(&spread15, t).unwrap(),
            depth: 1,
            bound: None,
        };
        if let Outcome::Shatter(w) = ok(dichotomy_search(&p15, &spread15, params))?.outcome {
            for m in 1..=w.sequence.len() {
                ensure(is_incompressible(&w.sequence[..m]).unwrap().is_incompressible(), || format!("{w:?}"))?;
            }
            sequences += 1;
        }
    }
    Ok(format!("chains 1, power sets n, S_M1 2; {sequences} shattering sequences incompressible"))
}

fn criterion_9() -> Check {
    let budget = Budget::default();
    let run_power = || {
        let p = power_set(15);
        let spread = make_spread(&[4, 5, 6], numbered(15)).unwrap();
        let params = DichotomyParams {
            window: Window::full(&spread, 2).unwrap(),
            depth: 1,
            bound: None,
        };
        dichotomy_search(&p, &spread, params).map(|r| format!("{r:?}"))
    };
    let first = ok(run_power())?;
    ensure(first == ok(run_power())?, || "power-set run differs between runs".into())?;
    ensure(first.contains("Shatter(ShatterWitness"), || first.clone())?;

    let spread = labelled_spread(&[2, 3, 4]).unwrap();
    let t = ok(tort(&spread, &budget))?;
    let params = DichotomyParams {
        window: Window::full(&spread, 1).unwrap(),
        depth: 1,
        bound: Some(2),
    };
    let run = ok(dichotomy_search(&t, &spread, params))?;
    match &run.outcome {
        Outcome::Decisive(d) => {
            ensure(d.colouring.len() == 1 && *d.colouring.class(d.class) == spread.ground().full_set(), || {
                format!("class {:?}", d.colouring.class(d.class))
            })?;
            ensure(d.is_decisive(2), || format!("max {}", d.max))?;
        }
        other => return Err(format!("expected a decisive class, got {other:?}")),
    }
    let again = ok(dichotomy_search(&t, &spread, params))?;
    ensure(format!("{run:?}") == format!("{again:?}"), || "T_ort run differs between runs".into())?;

    let sp = sp2();
    let t2 = ok(tort(&sp, &budget))?;
    let halver = ok(find_halver(&t2, &Colouring::trivial(sp.ground_arc()), &sp, &Window::full(&sp, 1).unwrap()))?;
    ensure(halver.is_none(), || format!("{halver:?}"))?;
    Ok("shatter at depth 1 with t=2, decisive class Ω with B=2, no halver on T_ort(SP2)".into())
}

fn criterion_10() -> Check {
    let p = power_set(4);
    let chain: Vec<MemberSet> = (0..4).map(|i| MemberSet::from_indices(4, [i])).collect();
    let r = ok(refined_structure(&p, &chain, None, &Budget::default()))?;
    ensure(r.schedule == [1, 4], || format!("{:?}", r.schedule))?;
    let expected = [MemberSet::from_indices(4, [0]), MemberSet::from_indices(4, [1, 2, 3])];
    ensure(r.spread.blocks() == expected, || format!("{:?}", r.spread.blocks()))?;
    ensure(r.containment.is_contained(), || format!("{:?}", r.containment))?;
    let direct = ok(contains_canonical(&p, &r.spread, Kind::Max, &Budget::default()))?;
    ensure(direct.is_contained(), || "direct T_max check".into())?;
    let t = ok(tmax(&r.spread, &Budget::default()))?;
    ensure(t.members().all(|m| p.contains(&m)), || "T_max inside the power set".into())?;
    Ok("blocks {γ1} and {γ2,γ3,γ4}, T_max re-verified".into())
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        ("weight legality", criterion_1),
        ("canonical constructors", criterion_2),
        ("T_max level-one bound", criterion_3),
        ("T_min level-one bound", criterion_4),
        ("T_ort colouring bound", criterion_5),
        ("tile fixture", criterion_6),
        ("oracle equivalences", criterion_7),
        ("breadth", criterion_8),
        ("dichotomy behaviour", criterion_9),
        ("refined structure", criterion_10),
    ];
    let mut failed = Vec::new();
    let mut out = std::io::stdout().lock();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        let line = match &result {
            Ok(detail) => format!("criterion {:>2} PASS {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => format!("criterion {:>2} FAIL {name} ({secs:.1}s): {why}", i + 1),
        };
        writeln!(out, "{line}").unwrap();
        if result.is_err() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
