//! Line-oriented text formats.
//!
//! Every format is a sequence of `key: value` lines; `#` starts a comment
//! and blank lines are ignored. Members and blocks are written as space
//! separated labels of the ground set.
//!
//! ```text
//! ground: α β γ
//! member: α
//! member: α β
//! ```
//!
//! Weights use `weight: <labels> = <rational>`, spreads `block: <labels>`,
//! colourings `class: <labels>` and multiplication tables `elements: n`
//! followed by `n` rows of `n` element numbers.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::bits::{MemberSet, Words};
use crate::canonical::Spread;
use crate::dichotomy::Colouring;
use crate::error::{Error, Result};
use crate::propagation::{LogWeight, Rational};
use crate::setsystem::{GroundSet, MultiplicationTable, SetSystem};

struct Line<'a> {
    number: usize,
    key: &'a str,
    value: &'a str,
}

fn lines(text: &str) -> Result<Vec<Line<'_>>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once(':')
            .ok_or_else(|| Error::parse(number, format!("expected `key: value`, got {content:?}")))?;
        out.push(Line {
            number,
            key: key.trim(),
            value: value.trim(),
        });
    }
    Ok(out)
}

fn labels_to_set(ground: &GroundSet, value: &str, line: usize) -> Result<MemberSet> {
    let mut set = ground.empty_set();
    for label in value.split_whitespace() {
        let i = ground
            .index_of(label)
            .ok_or_else(|| Error::parse(line, format!("unknown label {label:?}")))?;
        if set.contains(i) {
            return Err(Error::parse(line, format!("label {label:?} repeated")));
        }
        set.insert(i);
    }
    Ok(set)
}

fn unexpected(line: &Line<'_>, expected: &str) -> Error {
    Error::parse(line.number, format!("unexpected key {:?}, expected {expected}", line.key))
}

/// Lines `key: labels` in file order; a repeated set is an error.
fn parse_sets(text: &str, ground: &GroundSet, key: &str) -> Result<Vec<MemberSet>> {
    let mut seen: HashMap<Words, usize> = HashMap::new();
    let mut sets = Vec::new();
    for line in lines(text)? {
        if line.key != key {
            return Err(unexpected(&line, &format!("`{key}`")));
        }
        let set = labels_to_set(ground, line.value, line.number)?;
        if let Some(first) = seen.insert(Words::from_slice(set.words()), line.number) {
            return Err(Error::parse(
                line.number,
                format!("duplicate {key} {} (first on line {first})", ground.format_set(&set)),
            ));
        }
        sets.push(set);
    }
    Ok(sets)
}

pub fn parse_system(text: &str) -> Result<SetSystem> {
    let all = lines(text)?;
    let (head, rest) = all
        .split_first()
        .ok_or_else(|| Error::parse(1, "missing `ground:` line"))?;
    if head.key != "ground" {
        return Err(unexpected(head, "`ground`"));
    }
    let ground = Arc::new(
        GroundSet::new(head.value.split_whitespace()).map_err(|e| Error::parse(head.number, e.to_string()))?,
    );
    let mut seen: HashMap<Words, usize> = HashMap::new();
    let mut members = Vec::with_capacity(rest.len());
    for line in rest {
        if line.key != "member" {
            return Err(unexpected(line, "`member`"));
        }
        let set = labels_to_set(&ground, line.value, line.number)?;
        if let Some(first) = seen.insert(Words::from_slice(set.words()), line.number) {
            return Err(Error::parse(
                line.number,
                format!("duplicate member {} (first on line {first})", ground.format_set(&set)),
            ));
        }
        members.push(set);
    }
    if members.is_empty() {
        return Err(Error::EmptyFamily);
    }
    SetSystem::new(ground, members)
}

pub fn emit_system(system: &SetSystem) -> String {
    let ground = system.ground();
    let mut out = format!("ground: {}\n", ground.labels().join(" "));
    for m in system.members() {
        let labels = ground.format_labels(&m);
        if labels.is_empty() {
            out.push_str("member:\n");
        } else {
            let _ = writeln!(out, "member: {labels}");
        }
    }
    out
}

/// Members listed in file order, for chains.
pub fn parse_family(text: &str, ground: &GroundSet) -> Result<Vec<MemberSet>> {
    parse_sets(text, ground, "member")
}

pub fn emit_family(ground: &GroundSet, family: &[MemberSet]) -> String {
    emit_sets(ground, family, "member")
}

fn emit_sets(ground: &GroundSet, sets: &[MemberSet], key: &str) -> String {
    let mut out = String::new();
    for s in sets {
        let labels = ground.format_labels(s);
        if labels.is_empty() {
            let _ = writeln!(out, "{key}:");
        } else {
            let _ = writeln!(out, "{key}: {labels}");
        }
    }
    out
}

pub fn parse_spread(text: &str, ground: Arc<GroundSet>) -> Result<Spread> {
    let blocks = parse_sets(text, &ground, "block")?;
    Spread::with_any_sizes(ground, blocks)
}

pub fn emit_spread(spread: &Spread) -> String {
    emit_sets(spread.ground(), spread.blocks(), "block")
}

/// A spread file that starts with its own `ground:` line.
pub fn parse_grounded_spread(text: &str) -> Result<Spread> {
    let all = lines(text)?;
    let head = all.first().ok_or_else(|| Error::parse(1, "missing `ground:` line"))?;
    if head.key != "ground" {
        return Err(unexpected(head, "`ground`"));
    }
    let ground = Arc::new(
        GroundSet::new(head.value.split_whitespace()).map_err(|e| Error::parse(head.number, e.to_string()))?,
    );
    let body: String = text
        .lines()
        .enumerate()
        .map(|(i, l)| if i < head.number { "\n".to_string() } else { format!("{l}\n") })
        .collect();
    parse_spread(&body, ground)
}

pub fn emit_grounded_spread(spread: &Spread) -> String {
    format!("ground: {}\n{}", spread.ground().labels().join(" "), emit_spread(spread))
}

pub fn parse_colouring(text: &str, ground: Arc<GroundSet>) -> Result<Colouring> {
    let classes = parse_sets(text, &ground, "class")?;
    Colouring::new(ground, classes)
}

pub fn emit_colouring(colouring: &Colouring) -> String {
    emit_sets(colouring.ground(), colouring.classes(), "class")
}

/// Weight lines must name every member of `system` exactly once.
pub fn parse_weight(text: &str, system: Arc<SetSystem>) -> Result<LogWeight> {
    let ground = system.ground();
    let mut values: Vec<Option<Rational>> = vec![None; system.len()];
    for line in lines(text)? {
        if line.key != "weight" {
            return Err(unexpected(&line, "`weight`"));
        }
        let (labels, value) = line
            .value
            .rsplit_once('=')
            .ok_or_else(|| Error::parse(line.number, "expected `labels = value`"))?;
        let set = labels_to_set(ground, labels, line.number)?;
        let index = system.index_of(&set).ok_or_else(|| {
            Error::parse(line.number, format!("{} is not a member", ground.format_set(&set)))
        })?;
        let value: Rational = value
            .trim()
            .parse()
            .map_err(|_| Error::parse(line.number, format!("invalid rational {:?}", value.trim())))?;
        if value < Rational::from_integer(0) {
            return Err(Error::parse(line.number, format!("negative weight {value}")));
        }
        if values[index].replace(value).is_some() {
            return Err(Error::parse(
                line.number,
                format!("second weight for {}", ground.format_set(&set)),
            ));
        }
    }
    if let Some(missing) = values.iter().position(Option::is_none) {
        return Err(Error::WeightNotTotal(system.format_member(missing)));
    }
    LogWeight::new(system, values.into_iter().map(Option::unwrap).collect())
}

pub fn emit_weight(weight: &LogWeight) -> String {
    let system = weight.system();
    let mut out = String::new();
    for (i, m) in system.members().enumerate() {
        let labels = system.ground().format_labels(&m);
        let sep = if labels.is_empty() { "" } else { " " };
        let _ = writeln!(out, "weight: {labels}{sep}= {}", weight.value(i));
    }
    out
}

pub fn parse_table(text: &str) -> Result<MultiplicationTable> {
    let mut n: Option<usize> = None;
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        match n {
            None => {
                let count = content
                    .strip_prefix("elements:")
                    .and_then(|v| v.trim().parse::<usize>().ok())
                    .ok_or_else(|| Error::parse(number, "expected `elements: n`"))?;
                if count == 0 {
                    return Err(Error::parse(number, "a table needs at least one element"));
                }
                n = Some(count);
            }
            Some(count) => {
                let row: Vec<usize> = content
                    .split_whitespace()
                    .map(|t| t.parse::<usize>().map_err(|_| Error::parse(number, format!("invalid entry {t:?}"))))
                    .collect::<Result<_>>()?;
                if row.len() != count {
                    return Err(Error::parse(number, format!("row has {} entries, expected {count}", row.len())));
                }
                if rows.len() == count {
                    return Err(Error::parse(number, "more rows than elements"));
                }
                rows.push(row);
            }
        }
    }
    match n {
        None => Err(Error::parse(1, "missing `elements:` line")),
        Some(count) if rows.len() != count => Err(Error::parse(
            text.lines().count().max(1),
            format!("{} rows for {count} elements", rows.len()),
        )),
        Some(_) => MultiplicationTable::new(rows),
    }
}

pub fn emit_table(table: &MultiplicationTable) -> String {
    let mut out = format!("elements: {}\n", table.len());
    for row in table.rows() {
        let cells: Vec<String> = row.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::canonical::make_spread;
    use crate::setsystem::{union_closure, Budget};

    const M1: &str = "# three points\nground: α β γ\n\nmember: α\nmember: β  # second\nmember: α β\nmember: α β γ\n";

    #[test]
    fn system_round_trip() {
        let s = parse_system(M1).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(parse_system(&emit_system(&s)).unwrap(), s);
        assert!(emit_system(&s).starts_with("ground: α β γ\nmember: α\n"));
    }

    #[test]
    fn grounded_spread() {
        let text = "ground: a b c d\n# blocks\nblock: a\nblock: b c\n";
        let sp = parse_grounded_spread(text).unwrap();
        assert_eq!(sp.sizes(), vec![1, 2]);
        assert_eq!(parse_grounded_spread(&emit_grounded_spread(&sp)).unwrap(), sp);
        assert!(matches!(
            parse_grounded_spread("ground: a b\nblock: a\nblock: a\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn system_errors_carry_lines() {
        let dup = "ground: a b\nmember: a\n# c\nmember: a\n";
        assert!(matches!(parse_system(dup), Err(Error::Parse { line: 4, .. })));
        let unknown = "ground: a b\nmember: c\n";
        assert!(matches!(parse_system(unknown), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_system("member: a\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_system("ground: a a\nmember: a\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_system("ground: a\nmember a\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_system("ground: a\nmember: a a\n"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_system("ground: a\n").is_err());
    }

    #[test]
    fn empty_member_round_trip() {
        let s = parse_system("ground: a b\nmember:\nmember: a\n").unwrap();
        assert!(s.member(0).is_empty());
        assert_eq!(parse_system(&emit_system(&s)).unwrap(), s);
    }

    #[test]
    fn weights() {
        let s = Arc::new(parse_system(M1).unwrap());
        let text = "weight: α = 1\nweight: β = 1/2\nweight: α β = 3/2\nweight: α β γ = 0\n";
        let w = parse_weight(text, Arc::clone(&s)).unwrap();
        let ab = s.ground().set_from_labels(["α", "β"]).unwrap();
        assert_eq!(w.value_of(&ab), Some(Rational::new(3, 2)));
        let again = parse_weight(&emit_weight(&w), Arc::clone(&s)).unwrap();
        assert_eq!(again.values(), w.values());

        let missing = "weight: α = 1\nweight: β = 1\nweight: α β = 1\n";
        assert!(matches!(parse_weight(missing, Arc::clone(&s)), Err(Error::WeightNotTotal(_))));
        let twice = "weight: α = 1\nweight: α = 2\n";
        assert!(matches!(parse_weight(twice, Arc::clone(&s)), Err(Error::Parse { line: 2, .. })));
        let negative = "weight: α = -1\n";
        assert!(matches!(parse_weight(negative, Arc::clone(&s)), Err(Error::Parse { line: 1, .. })));
        let outside = "weight: γ = 1\n";
        assert!(matches!(parse_weight(outside, Arc::clone(&s)), Err(Error::Parse { line: 1, .. })));
        let garbage = "weight: α = x\n";
        assert!(matches!(parse_weight(garbage, s), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn spreads_and_colourings() {
        let ground = Arc::new(GroundSet::new(["a1", "a2", "b1", "b2", "b3"]).unwrap());
        let spread = make_spread(&[2, 3], Arc::clone(&ground)).unwrap();
        let text = emit_spread(&spread);
        assert_eq!(text, "block: a1 a2\nblock: b1 b2 b3\n");
        assert_eq!(parse_spread(&text, Arc::clone(&ground)).unwrap(), spread);
        assert!(parse_spread("block: a1\nblock: a1 b1\n", Arc::clone(&ground)).is_err());

        let c = parse_colouring("class: a1 b1\nclass: a2 b2 b3\n", Arc::clone(&ground)).unwrap();
        assert_eq!(parse_colouring(&emit_colouring(&c), Arc::clone(&ground)).unwrap(), c);
        assert!(parse_colouring("class: a1\n", ground).is_err());
    }

    #[test]
    fn tables() {
        let t = parse_table("elements: 3\n0 1 2\n1 1 2\n2 2 2\n").unwrap();
        assert_eq!(parse_table(&emit_table(&t)).unwrap(), t);
        assert!(matches!(parse_table("elements: 2\n0 1\n1\n"), Err(Error::Parse { line: 3, .. })));
        assert!(parse_table("elements: 2\n0 1\n").is_err());
        assert!(parse_table("0 1\n").is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn closures_round_trip(gens in prop::collection::vec(prop::collection::vec(any::<bool>(), 6), 1..5)) {
            let ground = Arc::new(GroundSet::numbered(6).unwrap());
            let sets: Vec<MemberSet> = gens
                .iter()
                .map(|bits| MemberSet::from_indices(6, (0..6).filter(|&i| bits[i])))
                .collect();
            let s = union_closure(&sets, ground, &Budget::default()).unwrap();
            let again = parse_system(&emit_system(&s)).unwrap();
            prop_assert_eq!(&again, &s);
            let w = LogWeight::from_fn(Arc::new(s), |m| Rational::new(m.len() as i64, 3)).unwrap();
            let back = parse_weight(&emit_weight(&w), Arc::new(again)).unwrap();
            prop_assert_eq!(back.values(), w.values());
        }
    }
}
