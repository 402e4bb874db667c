//! Inputs shared by the benchmarks in `benches/`.

use sofic_core::{Action, ActionSpec, GroupElement, Point, Word};

/// A coset instance `(label, spec, F, E)`.
pub type Instance = (&'static str, ActionSpec, Vec<GroupElement>, Vec<Point>);

fn words(rank: usize, items: &[&str]) -> Vec<Word> {
    items.iter().map(|s| Word::parse(s, rank).unwrap()).collect()
}

fn coset(label: &'static str, rank: usize, subgroup: &[&str], f: &[&str], e: &[&str]) -> Instance {
    let spec = ActionSpec::Coset { rank, subgroup: words(rank, subgroup) };
    let action = Action::new(&spec).unwrap();
    let e = e.iter().map(|s| action.parse_point(s).unwrap()).collect();
    let f = words(rank, f).into_iter().map(GroupElement::Single).collect();
    (label, spec, f, e)
}

pub fn coset_instances() -> Vec<Instance> {
    vec![
        coset("cyclic", 2, &["a"], &["a", "b"], &["1", "b"]),
        coset("regular_index3", 2, &[], &["a"], &["1", "a", "aa"]),
        coset("ab_ba", 2, &["ab", "ba"], &["a", "b", "ab"], &["1", "a", "b"]),
        coset("rank3", 3, &["abc"], &["a", "b", "c", "ab"], &["1", "a", "b"]),
    ]
}

/// Subgroup generators of growing total length for folding.
pub fn folding_inputs() -> Vec<(usize, Vec<Word>)> {
    (1..=4)
        .map(|k| {
            let gens: Vec<String> = ["abAB", "aabbb", "baBAb", "abbaBA"].iter().map(|w| w.repeat(k)).collect();
            let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
            (k, words(2, &refs))
        })
        .collect()
}
