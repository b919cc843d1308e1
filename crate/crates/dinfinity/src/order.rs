//! Finite posets, c.p.o. certification, Scott topology enumeration, and
//! continuity checking. Everything downstream (towers, paths, groupoids)
//! builds on this layer.
//!
//! Carriers are finite and small; quantification over "all directed subsets"
//! is exhaustive over the powerset, which is exact and fast enough for the
//! desk-scale instances this crate targets.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrderError {
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("antisymmetry violation: `{0}` and `{1}` are distinct but related both ways")]
    AntisymmetryViolation(String, String),
    #[error("transitivity violation: `{0}` <= `{1}` and `{1}` <= `{2}` but not `{0}` <= `{2}`")]
    TransitivityViolation(String, String, String),
    #[error("`{bottom}` is not a least element: it is not below `{witness}`")]
    NotLeast { bottom: String, witness: String },
    #[error("enumeration exceeded the size limit ({0} elements so far)")]
    SizeLimitExceeded(usize),
}

/// A finite partial order over string-labelled elements.
///
/// The relation is stored as a packed bit matrix; construction via
/// [`Poset::certify`] applies the reflexive closure and rejects relations
/// that violate antisymmetry or transitivity.
#[derive(Clone, Debug)]
pub struct Poset {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.bits == other.bits
    }
}
impl Eq for Poset {}

impl Poset {
    /// Certifies `leq_pairs` (given by labels) as a partial order on `elements`.
    /// Reflexive pairs may be omitted; the reflexive closure is applied.
    pub fn certify<S: AsRef<str>>(
        elements: &[S],
        leq_pairs: &[(S, S)],
    ) -> Result<Poset, OrderError> {
        let labels: Vec<String> = elements.iter().map(|s| s.as_ref().to_owned()).collect();
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(OrderError::DuplicateLabel(l.clone()));
            }
        }
        let n = labels.len();
        let words_per_row = n.div_ceil(64).max(1);
        let mut bits = vec![0u64; n * words_per_row];
        let set = |bits: &mut Vec<u64>, a: usize, b: usize| {
            bits[a * words_per_row + b / 64] |= 1 << (b % 64);
        };
        for i in 0..n {
            set(&mut bits, i, i);
        }
        for (a, b) in leq_pairs {
            let ia = *index
                .get(a.as_ref())
                .ok_or_else(|| OrderError::UnknownElement(a.as_ref().to_owned()))?;
            let ib = *index
                .get(b.as_ref())
                .ok_or_else(|| OrderError::UnknownElement(b.as_ref().to_owned()))?;
            set(&mut bits, ia, ib);
        }
        let p = Poset {
            labels,
            index,
            words_per_row,
            bits,
        };
        p.check_partial_order()?;
        Ok(p)
    }

    /// Internal constructor for orders that are valid by construction
    /// (e.g. pointwise orders on monotone-map carriers). Debug builds
    /// re-certify small instances.
    pub(crate) fn from_leq_fn<F: Fn(usize, usize) -> bool>(
        labels: Vec<String>,
        leq: F,
    ) -> Poset {
        let n = labels.len();
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            index.insert(l.clone(), i);
        }
        let words_per_row = n.div_ceil(64).max(1);
        let mut bits = vec![0u64; n * words_per_row];
        for a in 0..n {
            for b in 0..n {
                if a == b || leq(a, b) {
                    bits[a * words_per_row + b / 64] |= 1 << (b % 64);
                }
            }
        }
        let p = Poset {
            labels,
            index,
            words_per_row,
            bits,
        };
        debug_assert!(p.len() > 64 || p.check_partial_order().is_ok());
        p
    }

    fn check_partial_order(&self) -> Result<(), OrderError> {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.leq(a, b) && self.leq(b, a) {
                    return Err(OrderError::AntisymmetryViolation(
                        self.labels[a].clone(),
                        self.labels[b].clone(),
                    ));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if !self.leq(a, b) || a == b {
                    continue;
                }
                for c in 0..n {
                    if self.leq(b, c) && !self.leq(a, c) {
                        return Err(OrderError::TransitivityViolation(
                            self.labels[a].clone(),
                            self.labels[b].clone(),
                            self.labels[c].clone(),
                        ));
                    }
                }
            }
        }
        Ok(())
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

    pub fn index_of(&self, label: &str) -> Result<usize, OrderError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| OrderError::UnknownElement(label.to_owned()))
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.words_per_row + b / 64] & (1 << (b % 64)) != 0
    }

    pub fn leq_pairs(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            for b in 0..self.len() {
                if a != b && self.leq(a, b) {
                    out.push((self.labels[a].clone(), self.labels[b].clone()));
                }
            }
        }
        out
    }

    /// Non-empty and every pair has an upper bound inside the subset.
    /// The empty set is not directed.
    pub fn is_directed(&self, subset: &[usize]) -> bool {
        if subset.is_empty() {
            return false;
        }
        subset.iter().all(|&a| {
            subset.iter().all(|&b| {
                subset
                    .iter()
                    .any(|&c| self.leq(a, c) && self.leq(b, c))
            })
        })
    }

    pub fn is_directed_labels<S: AsRef<str>>(&self, subset: &[S]) -> Result<bool, OrderError> {
        let idx = subset
            .iter()
            .map(|l| self.index_of(l.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.is_directed(&idx))
    }

    /// Least upper bound of `subset` if it exists. The lub of the empty set
    /// is the least element of the poset, when there is one.
    pub fn lub(&self, subset: &[usize]) -> Option<usize> {
        let uppers: Vec<usize> = (0..self.len())
            .filter(|&u| subset.iter().all(|&x| self.leq(x, u)))
            .collect();
        uppers
            .iter()
            .copied()
            .find(|&l| uppers.iter().all(|&u| self.leq(l, u)))
    }

    pub fn lub_labels<S: AsRef<str>>(&self, subset: &[S]) -> Result<Option<usize>, OrderError> {
        let idx = subset
            .iter()
            .map(|l| self.index_of(l.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.lub(&idx))
    }

    pub fn least(&self) -> Option<usize> {
        (0..self.len()).find(|&l| (0..self.len()).all(|x| self.leq(l, x)))
    }

    /// Covering relation (Hasse edges): a < b with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b || !self.leq(a, b) {
                    continue;
                }
                let between = (0..n)
                    .any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b));
                if !between {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// DOT digraph of the covering relation, edges pointing upward.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("digraph \"{name}\" {{\n  rankdir=BT;\n");
        for l in &self.labels {
            s.push_str(&format!("  \"{l}\";\n"));
        }
        for (a, b) in self.covers() {
            s.push_str(&format!(
                "  \"{}\" -> \"{}\";\n",
                self.labels[a], self.labels[b]
            ));
        }
        s.push_str("}\n");
        s
    }

    fn subset_from_mask(&self, mask: u64) -> Vec<usize> {
        (0..self.len()).filter(|&i| mask & (1 << i) != 0).collect()
    }
}

/// How a [`Cpo`]'s directed-lub obligation was discharged.
///
/// On a finite poset every directed subset contains its own maximum, which is
/// then the lub; for small carriers this is additionally verified by
/// exhaustion, and the exhaustive count is kept as the certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CpoCertificate {
    /// Every directed subset was enumerated; each contained its maximum.
    Exhaustive { directed_subsets: usize },
    /// Carrier too large to exhaust; finite-maximum argument recorded.
    FiniteMaximum,
}

const EXHAUSTIVE_CPO_LIMIT: usize = 16;

/// A finite complete partial order: a [`Poset`] with a certified least
/// element and (for small carriers) exhaustively certified directed lubs.
#[derive(Clone, Debug, PartialEq)]
pub struct Cpo {
    poset: Poset,
    bottom: usize,
    certificate: CpoCertificate,
}

impl Cpo {
    pub fn certify(poset: Poset, bottom_label: &str) -> Result<Cpo, OrderError> {
        let bottom = poset.index_of(bottom_label)?;
        for x in 0..poset.len() {
            if !poset.leq(bottom, x) {
                return Err(OrderError::NotLeast {
                    bottom: poset.label(bottom).to_owned(),
                    witness: poset.label(x).to_owned(),
                });
            }
        }
        let certificate = if poset.len() <= EXHAUSTIVE_CPO_LIMIT {
            let mut count = 0usize;
            for mask in 1u64..(1 << poset.len()) {
                let subset = poset.subset_from_mask(mask);
                if !poset.is_directed(&subset) {
                    continue;
                }
                count += 1;
                // The max element of the subset is the witness lub.
                let lub = poset.lub(&subset);
                let max_in = subset
                    .iter()
                    .copied()
                    .find(|&m| subset.iter().all(|&x| poset.leq(x, m)));
                match (lub, max_in) {
                    (Some(l), Some(m)) if l == m => {}
                    _ => unreachable!("finite directed subset without internal maximum"),
                }
            }
            CpoCertificate::Exhaustive {
                directed_subsets: count,
            }
        } else {
            CpoCertificate::FiniteMaximum
        };
        Ok(Cpo {
            poset,
            bottom,
            certificate,
        })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn certificate(&self) -> &CpoCertificate {
        &self.certificate
    }

    /// lub of the empty set is the least element.
    pub fn lub(&self, subset: &[usize]) -> Option<usize> {
        if subset.is_empty() {
            Some(self.bottom)
        } else {
            self.poset.lub(subset)
        }
    }
}

/// A c.p.o. together with its enumerated Scott opens.
///
/// Opens are stored as bit masks over the carrier, sorted by size then mask.
#[derive(Clone, Debug, PartialEq)]
pub struct ScottSpace {
    cpo: Cpo,
    opens: Vec<u64>,
}

impl ScottSpace {
    /// Enumerates the Scott opens of `cpo` as the up-closed subsets.
    ///
    /// On a finite poset every up-set is inaccessible by directedness (a
    /// directed subset contains its maximum), so this agrees with the
    /// two-condition definition; [`scott_opens_literal`] is the independent
    /// route the tests compare against.
    pub fn new(cpo: Cpo) -> ScottSpace {
        let n = cpo.poset().len();
        assert!(n <= 25, "exhaustive Scott-open enumeration needs <= 25 elements, got {n}");
        let mut opens: Vec<u64> = (0u64..(1 << n))
            .filter(|&mask| is_up_set(cpo.poset(), mask))
            .collect();
        opens.sort_by_key(|&m| (m.count_ones(), m));
        ScottSpace { cpo, opens }
    }

    pub fn cpo(&self) -> &Cpo {
        &self.cpo
    }

    pub fn poset(&self) -> &Poset {
        self.cpo.poset()
    }

    pub fn opens(&self) -> &[u64] {
        &self.opens
    }

    pub fn full_mask(&self) -> u64 {
        if self.poset().len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.poset().len()) - 1
        }
    }

    pub fn is_open(&self, mask: u64) -> bool {
        self.opens.binary_search_by_key(&(mask.count_ones(), mask), |&m| (m.count_ones(), m)).is_ok()
    }

    /// Opens as label sets, in the stored deterministic order.
    pub fn opens_labels(&self) -> Vec<Vec<String>> {
        self.opens
            .iter()
            .map(|&m| {
                self.poset()
                    .subset_from_mask(m)
                    .into_iter()
                    .map(|i| self.poset().label(i).to_owned())
                    .collect()
            })
            .collect()
    }
}

pub fn is_up_set(poset: &Poset, mask: u64) -> bool {
    for a in 0..poset.len() {
        if mask & (1 << a) == 0 {
            continue;
        }
        for b in 0..poset.len() {
            if poset.leq(a, b) && mask & (1 << b) == 0 {
                return false;
            }
        }
    }
    true
}

/// The literal two-condition enumeration of Scott opens: final sets that are
/// inaccessible by directedness, each condition checked against its
/// definition. Independent of [`ScottSpace::new`]; the two must agree on
/// every finite instance.
pub fn scott_opens_literal(cpo: &Cpo) -> Vec<u64> {
    let poset = cpo.poset();
    let n = poset.len();
    assert!(n <= 20, "literal Scott-open enumeration needs <= 20 elements, got {n}");
    // Pre-enumerate directed subsets with their lubs.
    let mut directed: Vec<(u64, usize)> = Vec::new();
    for mask in 1u64..(1 << n) {
        let subset = poset.subset_from_mask(mask);
        if poset.is_directed(&subset) {
            let lub = poset
                .lub(&subset)
                .expect("directed subset of a certified c.p.o. has a lub");
            directed.push((mask, lub));
        }
    }
    let final_check = |mask: u64| -> bool {
        for a in 0..n {
            if mask & (1 << a) == 0 {
                continue;
            }
            for b in 0..n {
                if poset.leq(a, b) && mask & (1 << b) == 0 {
                    return false;
                }
            }
        }
        true
    };
    let inaccessible = |mask: u64| -> bool {
        directed
            .iter()
            .all(|&(x, lub)| mask & (1 << lub) == 0 || x & mask != 0)
    };
    let mut opens: Vec<u64> = (0u64..(1 << n))
        .filter(|&m| final_check(m) && inaccessible(m))
        .collect();
    opens.sort_by_key(|&m| (m.count_ones(), m));
    opens
}

/// x <= y implies table(x) <= table(y), checked pairwise.
pub fn is_monotone(src: &Poset, dst: &Poset, table: &[usize]) -> bool {
    assert_eq!(table.len(), src.len());
    for a in 0..src.len() {
        for b in 0..src.len() {
            if src.leq(a, b) && !dst.leq(table[a], table[b]) {
                return false;
            }
        }
    }
    true
}

/// Literal Scott continuity: for every directed X, f(lub X) = lub f(X),
/// where the right-hand lub must exist. Equivalent to monotonicity on finite
/// posets; both predicates are computed independently so the equivalence can
/// be tested rather than assumed.
pub fn is_scott_continuous(src: &Cpo, dst: &Cpo, table: &[usize]) -> bool {
    let sp = src.poset();
    let dp = dst.poset();
    assert_eq!(table.len(), sp.len());
    let n = sp.len();
    assert!(n <= 20, "exhaustive continuity check needs <= 20 elements");
    for mask in 1u64..(1 << n) {
        let subset = sp.subset_from_mask(mask);
        if !sp.is_directed(&subset) {
            continue;
        }
        let lub_x = sp.lub(&subset).expect("directed subset has a lub in a c.p.o.");
        let mut image: Vec<usize> = subset.iter().map(|&x| table[x]).collect();
        image.sort_unstable();
        image.dedup();
        match dp.lub(&image) {
            Some(l) => {
                if table[lub_x] != l {
                    return false;
                }
            }
            None => return false,
        }
    }
    true
}

/// The c.p.o. of all monotone (= Scott-continuous) maps `src -> dst`,
/// ordered pointwise, together with the carrier tables in enumeration order.
///
/// Elements are labelled `f#0`, `f#1`, ... with the tables sorted
/// lexicographically, so labels are reproducible across runs.
#[derive(Clone, Debug)]
pub struct FunctionSpace {
    pub space: Cpo,
    pub tables: Vec<Vec<usize>>,
    table_index: HashMap<Vec<usize>, usize>,
}

impl FunctionSpace {
    pub fn index_of_table(&self, table: &[usize]) -> Option<usize> {
        self.table_index.get(table).copied()
    }

    pub fn table(&self, i: usize) -> &[usize] {
        &self.tables[i]
    }
}

/// Enumerates the continuous function space `[src -> dst]` as a c.p.o.
/// Enumeration is by backtracking with monotonicity pruning, which yields
/// the tables in lexicographic order directly.
pub fn function_space(src: &Cpo, dst: &Cpo, limit: usize) -> Result<FunctionSpace, OrderError> {
    let sp = src.poset();
    let dp = dst.poset();
    let n = sp.len();
    let mut tables: Vec<Vec<usize>> = Vec::new();
    let mut current = vec![0usize; n];
    fn rec(
        pos: usize,
        n: usize,
        sp: &Poset,
        dp: &Poset,
        current: &mut Vec<usize>,
        tables: &mut Vec<Vec<usize>>,
        limit: usize,
    ) -> Result<(), OrderError> {
        if pos == n {
            if tables.len() == limit {
                return Err(OrderError::SizeLimitExceeded(limit + 1));
            }
            tables.push(current.clone());
            return Ok(());
        }
        for v in 0..dp.len() {
            let ok = (0..pos).all(|j| {
                (!sp.leq(j, pos) || dp.leq(current[j], v))
                    && (!sp.leq(pos, j) || dp.leq(v, current[j]))
            });
            if ok {
                current[pos] = v;
                rec(pos + 1, n, sp, dp, current, tables, limit)?;
            }
        }
        Ok(())
    }
    rec(0, n, sp, dp, &mut current, &mut tables, limit)?;

    let labels: Vec<String> = (0..tables.len()).map(|i| format!("f#{i}")).collect();
    let tables_ref = tables.clone();
    let poset = Poset::from_leq_fn(labels, |a, b| {
        tables_ref[a]
            .iter()
            .zip(&tables_ref[b])
            .all(|(&x, &y)| dp.leq(x, y))
    });
    let bottom_table = vec![dst.bottom(); n];
    let bottom_idx = tables
        .iter()
        .position(|t| *t == bottom_table)
        .expect("constant-bottom map is monotone and must be enumerated");
    let cpo = Cpo::certify(poset, &format!("f#{bottom_idx}"))?;
    let table_index = tables
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i))
        .collect();
    Ok(FunctionSpace {
        space: cpo,
        tables,
        table_index,
    })
}

/// Poset JSON schema: `{"elements":[...], "leq":[["a","b"],...], "bottom":"a"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PosetFile {
    pub elements: Vec<String>,
    #[serde(default)]
    pub leq: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bottom: Option<String>,
}

impl PosetFile {
    pub fn to_poset(&self) -> Result<Poset, OrderError> {
        Poset::certify(&self.elements, &self.leq)
    }

    /// Requires a `bottom` field.
    pub fn to_cpo(&self) -> Result<Cpo, OrderError> {
        let poset = self.to_poset()?;
        let bottom = self
            .bottom
            .as_deref()
            .ok_or_else(|| OrderError::UnknownElement("<missing bottom>".into()))?;
        Cpo::certify(poset, bottom)
    }

    pub fn from_poset(poset: &Poset, bottom: Option<&str>) -> PosetFile {
        PosetFile {
            elements: poset.labels().to_vec(),
            leq: poset.leq_pairs(),
            bottom: bottom.map(|s| s.to_owned()),
        }
    }
}

/// Random poset with a bottom element: a random DAG on `n - 1` labelled
/// nodes under transitive closure, with `bot` adjoined below everything.
/// Deterministic for a given rng state.
pub fn random_cpo(rng: &mut impl rand::Rng, max_extra: usize) -> Cpo {
    let extra = rng.gen_range(1..=max_extra);
    let mut labels = vec!["bot".to_owned()];
    for i in 0..extra {
        labels.push(format!("e{i}"));
    }
    // edges only from lower to higher node index keeps the graph acyclic
    let mut adj = vec![vec![false; extra]; extra];
    for i in 0..extra {
        for j in (i + 1)..extra {
            if rng.gen_bool(0.4) {
                adj[i][j] = true;
            }
        }
    }
    // transitive closure
    for k in 0..extra {
        for i in 0..extra {
            for j in 0..extra {
                if adj[i][k] && adj[k][j] {
                    adj[i][j] = true;
                }
            }
        }
    }
    let mut pairs: Vec<(String, String)> = Vec::new();
    for i in 0..extra {
        pairs.push(("bot".to_owned(), format!("e{i}")));
        for j in 0..extra {
            if adj[i][j] {
                pairs.push((format!("e{i}"), format!("e{j}")));
            }
        }
    }
    let poset = Poset::certify(&labels, &pairs).expect("closure of a DAG is a partial order");
    Cpo::certify(poset, "bot").expect("bot is least by construction")
}
