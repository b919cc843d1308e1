//! The fixed corpus shipped with the crate: the posets, paths, terms, and
//! conversion-proof chains that the examples, the CLI data files, and the
//! acceptance suite all draw from. Keeping them in one place makes runs
//! deterministic.

use crate::lambda::{parse, ConversionProof, StepKind, Term};
use crate::order::{Cpo, Poset};

/// Flat c.p.o. `{bot, 0, .., k-1}`: the truncated N-plus with `k` numerals.
pub fn nplus(k: usize) -> Cpo {
    let mut labels = vec!["bot".to_owned()];
    let mut pairs = Vec::new();
    for i in 0..k {
        labels.push(i.to_string());
        pairs.push(("bot".to_owned(), i.to_string()));
    }
    let poset = Poset::certify(&labels, &pairs).unwrap();
    Cpo::certify(poset, "bot").unwrap()
}

/// The five-point lattice `L = {bot, 0, 1, 2, top}` with `0, 1, 2` pairwise
/// incomparable between `bot` and `top`.
pub fn lattice_l() -> Cpo {
    let labels = ["bot", "0", "1", "2", "top"];
    let mut pairs = vec![("bot", "top")];
    for a in ["0", "1", "2"] {
        pairs.push(("bot", a));
        pairs.push((a, "top"));
    }
    let poset = Poset::certify(&labels, &pairs).unwrap();
    Cpo::certify(poset, "bot").unwrap()
}

pub fn one_point() -> Cpo {
    let poset = Poset::certify(&["bot"], &[]).unwrap();
    Cpo::certify(poset, "bot").unwrap()
}

pub fn two_chain() -> Cpo {
    let poset = Poset::certify(&["bot", "top"], &[("bot", "top")]).unwrap();
    Cpo::certify(poset, "bot").unwrap()
}

/// The four-point pseudo-circle: minimal `a, b`, maximal `c, d`, each minimal
/// below both maximals. Weakly equivalent to the circle; the standard control
/// for a non-trivial fundamental group. Not a c.p.o. (no least element).
pub fn pseudo_circle() -> Poset {
    Poset::certify(
        &["a", "b", "c", "d"],
        &[("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")],
    )
    .unwrap()
}

/// Pseudo-circle with a bottom adjoined; a c.p.o., and the added cone point
/// kills the circle's fundamental group.
pub fn pseudo_circle_with_bottom() -> Cpo {
    let poset = Poset::certify(
        &["bot", "a", "b", "c", "d"],
        &[
            ("bot", "a"),
            ("bot", "b"),
            ("bot", "c"),
            ("bot", "d"),
            ("a", "c"),
            ("a", "d"),
            ("b", "c"),
            ("b", "d"),
        ],
    )
    .unwrap();
    Cpo::certify(poset, "bot").unwrap()
}

/// All corpus c.p.o.s, labelled for reports.
pub fn cpo_corpus() -> Vec<(&'static str, Cpo)> {
    vec![
        ("nplus2", nplus(2)),
        ("lattice_l", lattice_l()),
        ("two_chain", two_chain()),
        ("one_point", one_point()),
        ("pseudo_circle_bottom", pseudo_circle_with_bottom()),
    ]
}
