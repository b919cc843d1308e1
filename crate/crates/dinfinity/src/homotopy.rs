//! The independent homotopy oracle for finite spaces.
//!
//! A finite T0 space is weakly equivalent to the order complex of its
//! specialization order (McCord), so path components and the fundamental
//! group can be read off combinatorially: components from the comparability
//! graph, and pi_1 from a spanning-tree edge-path presentation with the
//! triangle relators, Tietze-simplified with a bounded move budget.
//!
//! This module is deliberately independent of the path machinery it is used
//! to check; it must stay honest on non-contractible spaces (the
//! pseudo-circle must come out with a free fundamental group, never
//! trivial).

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::order::{Poset, ScottSpace};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomotopyError {
    #[error("space is not path-connected; {unreached} of {total} elements unreachable from the base")]
    NotConnected { unreached: usize, total: usize },
    #[error("zigzags do not share endpoints")]
    EndpointMismatch,
    #[error("consecutive zigzag entries `{0}` and `{1}` are incomparable")]
    NotAZigzag(String, String),
}

/// A finite simplicial complex given by its facets (maximal simplices);
/// every face of a facet is implicitly present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    pub vertices: Vec<String>,
    pub facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    pub fn dimension(&self) -> usize {
        self.facets.iter().map(|f| f.len() - 1).max().unwrap_or(0)
    }

    /// Facets as label lists, for export.
    pub fn facet_labels(&self) -> Vec<Vec<String>> {
        self.facets
            .iter()
            .map(|f| f.iter().map(|&v| self.vertices[v].clone()).collect())
            .collect()
    }
}

/// The order complex: simplices are the non-empty chains, so the facets are
/// the maximal chains, i.e. the full-length paths of the covering relation.
pub fn order_complex(poset: &Poset) -> SimplicialComplex {
    let n = poset.len();
    let covers = poset.covers();
    let mut up_cover: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut has_lower = vec![false; n];
    for &(a, b) in &covers {
        up_cover[a].push(b);
        has_lower[b] = true;
    }
    let mut facets = Vec::new();
    let mut chain = Vec::new();
    fn extend(
        x: usize,
        up_cover: &[Vec<usize>],
        chain: &mut Vec<usize>,
        facets: &mut Vec<Vec<usize>>,
    ) {
        chain.push(x);
        if up_cover[x].is_empty() {
            facets.push(chain.clone());
        } else {
            for &y in &up_cover[x] {
                extend(y, up_cover, chain, facets);
            }
        }
        chain.pop();
    }
    for x in 0..n {
        if !has_lower[x] {
            extend(x, &up_cover, &mut chain, &mut facets);
        }
    }
    facets.sort();
    SimplicialComplex {
        vertices: poset.labels().to_vec(),
        facets,
    }
}

fn comparability_components(poset: &Poset) -> Vec<usize> {
    let n = poset.len();
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp[start] = next;
        while let Some(x) = stack.pop() {
            for y in 0..n {
                if comp[y] == usize::MAX && (poset.leq(x, y) || poset.leq(y, x)) {
                    comp[y] = next;
                    stack.push(y);
                }
            }
        }
        next += 1;
    }
    comp
}

/// Number of path components: connected components of the comparability
/// graph, which agrees with pi_0 of the finite space.
pub fn pi0(poset: &Poset) -> usize {
    comparability_components(poset)
        .into_iter()
        .max()
        .map_or(0, |m| m + 1)
}

pub fn same_component(poset: &Poset, a: usize, b: usize) -> bool {
    let comp = comparability_components(poset);
    comp[a] == comp[b]
}

/// An element comparable to every other makes the order complex a cone,
/// hence the space contractible. Returns the apex.
pub fn is_cone(poset: &Poset) -> Option<usize> {
    (0..poset.len()).find(|&apex| {
        (0..poset.len()).all(|x| poset.leq(apex, x) || poset.leq(x, apex))
    })
}

pub type Word = Vec<(usize, bool)>; // (generator, inverted)

fn invert(word: &[(usize, bool)]) -> Word {
    word.iter().rev().map(|&(g, inv)| (g, !inv)).collect()
}

fn free_reduce(word: &mut Word) {
    let mut out: Word = Vec::with_capacity(word.len());
    for &letter in word.iter() {
        if let Some(&last) = out.last() {
            if last.0 == letter.0 && last.1 != letter.1 {
                out.pop();
                continue;
            }
        }
        out.push(letter);
    }
    *word = out;
}

fn cyclic_reduce(word: &mut Word) {
    free_reduce(word);
    while word.len() >= 2 {
        let first = word[0];
        let last = *word.last().unwrap();
        if first.0 == last.0 && first.1 != last.1 {
            word.remove(0);
            word.pop();
            free_reduce(word);
        } else {
            break;
        }
    }
}

fn substitute(word: &Word, gen: usize, replacement: &Word) -> Word {
    let mut out = Vec::new();
    for &(g, inv) in word {
        if g == gen {
            if inv {
                out.extend(invert(replacement));
            } else {
                out.extend(replacement.iter().copied());
            }
        } else {
            out.push((g, inv));
        }
    }
    free_reduce(&mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Pi1Class {
    Trivial,
    FreeOfRank(usize),
    Unresolved,
}

/// Generators and relators over them; `generators` are display names.
#[derive(Clone, Debug, Serialize)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Vec<String>>,
}

impl GroupPresentation {
    pub fn render(&self) -> String {
        let gens = self.generators.join(", ");
        let rels = self
            .relators
            .iter()
            .map(|r| r.concat())
            .collect::<Vec<_>>()
            .join(", ");
        format!("\u{27e8}{gens} | {rels}\u{27e9}")
    }
}

/// The edge-path group of a poset's order complex, based at a vertex:
/// generators are the non-tree comparability edges, relators come from the
/// 3-chains. Keeps the rewriting of every original edge into the surviving
/// generators so arbitrary edge paths can be evaluated as group words.
#[derive(Debug)]
pub struct EdgePathGroup {
    labels: Vec<String>,
    base: usize,
    /// Surviving generator ids (indices into `gen_names`).
    survivors: Vec<usize>,
    gen_names: Vec<String>,
    relators: Vec<Word>,
    /// For a comparability edge (a, b) with a < b by element index, the word
    /// of the traversal a -> b in the surviving generators.
    edge_words: HashMap<(usize, usize), Word>,
    pub class: Pi1Class,
}

const TIETZE_BUDGET: usize = 10_000;

/// Spanning-tree edge-path presentation of pi_1, Tietze-simplified.
pub fn pi1(poset: &Poset, base: usize) -> Result<EdgePathGroup, HomotopyError> {
    let n = poset.len();
    let comp = comparability_components(poset);
    let unreached = comp.iter().filter(|&&c| c != comp[base]).count();
    if unreached > 0 {
        return Err(HomotopyError::NotConnected {
            unreached,
            total: n,
        });
    }

    // comparability edges, canonically oriented by element index
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            if poset.leq(a, b) || poset.leq(b, a) {
                edges.push((a, b));
            }
        }
    }

    // BFS spanning tree from the base, in index order
    let mut in_tree: Vec<(usize, usize)> = Vec::new();
    let mut seen = vec![false; n];
    seen[base] = true;
    let mut queue = std::collections::VecDeque::from([base]);
    while let Some(x) = queue.pop_front() {
        for &(a, b) in &edges {
            let other = if a == x {
                b
            } else if b == x {
                a
            } else {
                continue;
            };
            if !seen[other] {
                seen[other] = true;
                in_tree.push((a, b));
                queue.push_back(other);
            }
        }
    }

    let mut gen_names = Vec::new();
    let mut edge_words: HashMap<(usize, usize), Word> = HashMap::new();
    for &e in &edges {
        if in_tree.contains(&e) {
            edge_words.insert(e, Vec::new());
        } else {
            let id = gen_names.len();
            gen_names.push(format!("g{id}"));
            edge_words.insert(e, vec![(id, false)]);
        }
    }

    // relators from 3-chains: boundary word edge(i,j) edge(j,k) edge(i,k)^-1
    let oriented = |a: usize, b: usize, edge_words: &HashMap<(usize, usize), Word>| -> Word {
        if a < b {
            edge_words[&(a, b)].clone()
        } else {
            invert(&edge_words[&(b, a)])
        }
    };
    let mut relators: Vec<Word> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let chain = |a: usize, b: usize| poset.leq(a, b) || poset.leq(b, a);
                if chain(i, j) && chain(j, k) && chain(i, k) {
                    let mut w = oriented(i, j, &edge_words);
                    w.extend(oriented(j, k, &edge_words));
                    w.extend(invert(&oriented(i, k, &edge_words)));
                    cyclic_reduce(&mut w);
                    if !w.is_empty() {
                        relators.push(w);
                    }
                }
            }
        }
    }

    // Tietze simplification: repeatedly eliminate a generator that occurs
    // exactly once in some relator, substituting everywhere.
    let mut survivors: Vec<usize> = (0..gen_names.len()).collect();
    let mut budget = TIETZE_BUDGET;
    loop {
        relators.iter_mut().for_each(cyclic_reduce);
        relators.retain(|r| !r.is_empty());
        relators.sort();
        relators.dedup();
        if budget == 0 {
            break;
        }
        let mut eliminated = false;
        'search: for ri in 0..relators.len() {
            for &g in &survivors {
                let occurrences = relators[ri].iter().filter(|&&(h, _)| h == g).count();
                if occurrences != 1 {
                    continue;
                }
                // solve r = u g^e v = 1 for g
                let pos = relators[ri].iter().position(|&(h, _)| h == g).unwrap();
                let (u, rest) = relators[ri].split_at(pos);
                let inverted = rest[0].1;
                let v = &rest[1..];
                // g = (v u)^-1 when plain, g = v u when the occurrence is inverted
                let mut vu: Word = v.to_vec();
                vu.extend_from_slice(u);
                let replacement = if inverted { vu } else { invert(&vu) };
                let relator = relators.remove(ri);
                debug_assert!(!relator.is_empty());
                for r in relators.iter_mut() {
                    *r = substitute(r, g, &replacement);
                }
                for w in edge_words.values_mut() {
                    *w = substitute(w, g, &replacement);
                }
                survivors.retain(|&h| h != g);
                eliminated = true;
                budget -= 1;
                break 'search;
            }
        }
        if !eliminated {
            break;
        }
    }

    let class = if survivors.is_empty() {
        Pi1Class::Trivial
    } else if relators.is_empty() {
        Pi1Class::FreeOfRank(survivors.len())
    } else {
        Pi1Class::Unresolved
    };

    Ok(EdgePathGroup {
        labels: poset.labels().to_vec(),
        base,
        survivors,
        gen_names,
        relators,
        edge_words,
        class,
    })
}

impl EdgePathGroup {
    pub fn base(&self) -> usize {
        self.base
    }

    pub fn presentation(&self) -> GroupPresentation {
        let name = |&(g, inv): &(usize, bool)| {
            if inv {
                format!("{}^-1", self.gen_names[g])
            } else {
                self.gen_names[g].clone()
            }
        };
        GroupPresentation {
            generators: self
                .survivors
                .iter()
                .map(|&g| self.gen_names[g].clone())
                .collect(),
            relators: self
                .relators
                .iter()
                .map(|r| r.iter().map(name).collect())
                .collect(),
        }
    }

    /// The group word traced by a zigzag (a sequence of pairwise-comparable
    /// consecutive points), free-reduced over the surviving generators.
    pub fn zigzag_word(&self, zigzag: &[usize]) -> Result<Word, HomotopyError> {
        let mut word = Vec::new();
        for pair in zigzag.windows(2) {
            let (x, y) = (pair[0], pair[1]);
            if x == y {
                continue;
            }
            let key = (x.min(y), x.max(y));
            let w = self.edge_words.get(&key).ok_or_else(|| {
                HomotopyError::NotAZigzag(self.labels[x].clone(), self.labels[y].clone())
            })?;
            if x < y {
                word.extend(w.iter().copied());
            } else {
                word.extend(invert(w));
            }
        }
        free_reduce(&mut word);
        Ok(word)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Homotopic,
    NotHomotopic,
    Unresolved,
}

/// Decides homotopy rel endpoints between two zigzags sharing endpoints:
/// both map to edge-path words, and `w1 w2^-1` is tested for triviality.
/// Conclusive when the simplified presentation is trivial or free; honest
/// `Unresolved` otherwise.
pub fn zigzag_homotopic(
    group: &EdgePathGroup,
    z1: &[usize],
    z2: &[usize],
) -> Result<Verdict, HomotopyError> {
    if z1.first() != z2.first() || z1.last() != z2.last() {
        return Err(HomotopyError::EndpointMismatch);
    }
    let mut word = group.zigzag_word(z1)?;
    word.extend(invert(&group.zigzag_word(z2)?));
    free_reduce(&mut word);
    if word.is_empty() {
        return Ok(Verdict::Homotopic);
    }
    match group.class {
        Pi1Class::Trivial => Ok(Verdict::Homotopic),
        Pi1Class::FreeOfRank(_) => Ok(Verdict::NotHomotopic),
        Pi1Class::Unresolved => Ok(Verdict::Unresolved),
    }
}

/// Per-open record of the contraction-preimage computation for
/// `H(x, 0) = bot, H(x, t) = x (t > 0)`.
#[derive(Clone, Debug, Serialize)]
pub struct ContractionPreimageRow {
    pub open: Vec<String>,
    /// Lemma step: `bot` must lie outside every proper open.
    pub bottom_excluded: bool,
    /// The t = 0 slice of the preimage is empty, so the preimage collapses
    /// to `A x (0, 1]`.
    pub preimage_is_product: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractionPreimageReport {
    pub rows: Vec<ContractionPreimageRow>,
    pub ok: bool,
}

/// Re-derives the contraction's preimage identity on every proper open:
/// the slice `{x : H(x, 0) in A}` is computed literally and must be empty
/// (which is exactly the lemma that no proper open contains bottom), making
/// `H^{-1}(A) = A x (0, 1]`, a product of opens.
pub fn verify_contraction_preimage(space: &ScottSpace) -> ContractionPreimageReport {
    let poset = space.poset();
    let bot = space.cpo().bottom();
    let full = space.full_mask();
    let mut rows = Vec::new();
    for &open in space.opens() {
        if open == full {
            continue;
        }
        let bottom_excluded = open & (1 << bot) == 0;
        // {x : H(x,0) in A} = {x : bot in A} — all of D or empty
        let zero_slice_empty = open & (1 << bot) == 0;
        let labels = (0..poset.len())
            .filter(|&i| open & (1 << i) != 0)
            .map(|i| poset.label(i).to_owned())
            .collect();
        rows.push(ContractionPreimageRow {
            open: labels,
            bottom_excluded,
            preimage_is_product: zero_slice_empty,
        });
    }
    let ok = rows
        .iter()
        .all(|r| r.bottom_excluded && r.preimage_is_product);
    ContractionPreimageReport { rows, ok }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::order::{Poset, ScottSpace};

    #[test]
    fn order_complex_of_two_chain_is_a_segment() {
        let complex = order_complex(corpus::two_chain().poset());
        assert_eq!(complex.facets, vec![vec![0, 1]]);
        assert_eq!(complex.dimension(), 1);
    }

    #[test]
    fn order_complex_of_lattice_l_has_three_triangles() {
        let complex = order_complex(corpus::lattice_l().poset());
        assert_eq!(complex.facets.len(), 3);
        assert!(complex.facets.iter().all(|f| f.len() == 3));
    }

    #[test]
    fn order_complex_of_pseudo_circle_is_a_four_cycle() {
        let complex = order_complex(&corpus::pseudo_circle());
        assert_eq!(complex.facets.len(), 4);
        assert!(complex.facets.iter().all(|f| f.len() == 2));
    }

    #[test]
    fn pi0_counts_components() {
        assert_eq!(pi0(corpus::lattice_l().poset()), 1);
        assert_eq!(pi0(corpus::nplus(2).poset()), 1);
        let discrete = Poset::certify(&["a", "b"], &[]).unwrap();
        assert_eq!(pi0(&discrete), 2);
        assert_eq!(pi0(&corpus::pseudo_circle()), 1);
    }

    #[test]
    fn pi1_trivial_on_posets_with_least_element() {
        for (name, cpo) in corpus::cpo_corpus() {
            let group = pi1(cpo.poset(), cpo.bottom()).unwrap();
            assert_eq!(group.class, Pi1Class::Trivial, "pi1 of {name}");
        }
    }

    #[test]
    fn pi1_of_pseudo_circle_is_free_of_rank_one() {
        let pc = corpus::pseudo_circle();
        let group = pi1(&pc, 0).unwrap();
        assert_eq!(group.class, Pi1Class::FreeOfRank(1));
        assert_eq!(group.presentation().render(), "\u{27e8}g0 | \u{27e9}");
    }

    #[test]
    fn pi1_of_one_point_is_trivial() {
        let group = pi1(corpus::one_point().poset(), 0).unwrap();
        assert_eq!(group.class, Pi1Class::Trivial);
    }

    #[test]
    fn pi1_requires_connectivity() {
        let discrete = Poset::certify(&["a", "b"], &[]).unwrap();
        assert_eq!(
            pi1(&discrete, 0).unwrap_err(),
            HomotopyError::NotConnected {
                unreached: 1,
                total: 2
            }
        );
    }

    #[test]
    fn is_cone_examples() {
        for (_, cpo) in corpus::cpo_corpus() {
            assert_eq!(is_cone(cpo.poset()), Some(cpo.bottom()));
        }
        assert_eq!(is_cone(&corpus::pseudo_circle()), None);
        assert_eq!(is_cone(corpus::one_point().poset()), Some(0));
    }

    #[test]
    fn contraction_preimage_on_corpus() {
        let one = ScottSpace::new(corpus::one_point());
        let report = verify_contraction_preimage(&one);
        assert!(report.ok);
        assert_eq!(report.rows.len(), 1); // only the empty open is proper

        let n2 = ScottSpace::new(corpus::nplus(2));
        let report = verify_contraction_preimage(&n2);
        assert!(report.ok);
        assert_eq!(report.rows.len(), 4);

        let l = ScottSpace::new(corpus::lattice_l());
        let report = verify_contraction_preimage(&l);
        assert!(report.ok);
        assert_eq!(report.rows.len(), 9);
    }

    #[test]
    fn zigzag_homotopy_in_lattice_l() {
        let l = corpus::lattice_l();
        let p = l.poset();
        let group = pi1(p, l.bottom()).unwrap();
        let zero = p.index_of("0").unwrap();
        let one = p.index_of("1").unwrap();
        let top = p.index_of("top").unwrap();
        let bot = l.bottom();
        let via_top = [zero, top, one];
        let via_bot = [zero, bot, one];
        assert_eq!(
            zigzag_homotopic(&group, &via_top, &via_top).unwrap(),
            Verdict::Homotopic
        );
        assert_eq!(
            zigzag_homotopic(&group, &via_top, &via_bot).unwrap(),
            Verdict::Homotopic
        );
        assert_eq!(
            zigzag_homotopic(&group, &via_top, &[zero, top]).unwrap_err(),
            HomotopyError::EndpointMismatch
        );
    }

    #[test]
    fn zigzag_loop_around_pseudo_circle_is_not_null() {
        let pc = corpus::pseudo_circle();
        let (a, b, c, d) = (0, 1, 2, 3);
        let group = pi1(&pc, a).unwrap();
        let around = [a, c, b, d, a];
        let constant = [a];
        assert_eq!(
            zigzag_homotopic(&group, &around, &constant).unwrap(),
            Verdict::NotHomotopic
        );
        // going around one side and back is null
        let there_and_back = [a, c, b, c, a];
        assert_eq!(
            zigzag_homotopic(&group, &there_and_back, &constant).unwrap(),
            Verdict::Homotopic
        );
    }

    #[test]
    fn zigzag_word_rejects_incomparable_steps() {
        let pc = corpus::pseudo_circle();
        let group = pi1(&pc, 0).unwrap();
        // a and b are incomparable
        assert!(matches!(
            group.zigzag_word(&[0, 1]),
            Err(HomotopyError::NotAZigzag(_, _))
        ));
    }
}
