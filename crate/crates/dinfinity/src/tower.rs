//! The truncated function-space tower: `D_0` is the flat c.p.o. with `k`
//! numerals, `D_{n+1} = [D_n -> D_n]`, glued by the projection pairs
//!
//! ```text
//! phi_0(d)    = constant-d          psi_0(g)     = g(bot_0)
//! phi_{n+1}(d) = phi_n . d . psi_n   psi_{n+1}(g) = psi_n . g . phi_n
//! ```
//!
//! A [`TowerElement`] is a compatible sequence `(d_0, ..., d_N)` with
//! `psi_n(d_{n+1}) = d_n`; the lower components are determined by the top
//! one, so elements are canonically represented by their top index.
//!
//! Application truncates the limit construction: `a . b` is computed from
//! the single top-level application `a_N(b_{N-1})`, projected downward and
//! re-embedded upward, which preserves the compatibility invariant by
//! construction.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::order::{function_space, Cpo, FunctionSpace, OrderError, ScottSpace};

pub const DEFAULT_SIZE_LIMIT: usize = 20_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TowerError {
    #[error("level {level} overflows the size limit: {source}")]
    SizeLimit {
        level: usize,
        source: OrderError,
    },
    #[error("tower parameters out of range: {0}")]
    BadParams(String),
    #[error("level {given} out of range (tower truncated at {depth})")]
    LevelOutOfRange { given: usize, depth: usize },
    #[error("semantic map is not realized by a monotone table at the top level")]
    NonMonotoneRealization,
    #[error("elements belong to different towers")]
    TowerMismatch,
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// The tower `D_0, ..., D_N` with projection pairs between adjacent levels.
#[derive(Debug)]
pub struct Tower {
    k: usize,
    depth: usize,
    levels: Vec<Cpo>,
    /// `spaces[m]` is the function space whose carrier is `D_{m+1}`.
    spaces: Vec<FunctionSpace>,
    /// `phi[n][d]`: index in `D_{n+1}` of the embedding of `d in D_n`.
    phi: Vec<Vec<usize>>,
    /// `psi[n][g]`: index in `D_n` of the projection of `g in D_{n+1}`.
    psi: Vec<Vec<usize>>,
}

impl Tower {
    /// Builds the tower with `k >= 1` numerals at level 0, truncated at
    /// `depth >= 1`, enumerating every level and computing the phi/psi
    /// tables by the defining recursion. The projection-pair laws are
    /// verified exhaustively before returning.
    pub fn build(k: usize, depth: usize, limit: usize) -> Result<Arc<Tower>, TowerError> {
        if k < 1 || depth < 1 {
            return Err(TowerError::BadParams(format!("k = {k}, N = {depth}")));
        }
        let mut levels = vec![crate::corpus::nplus(k)];
        let mut spaces = Vec::new();
        for level in 0..depth {
            let fs = function_space(&levels[level], &levels[level], limit)
                .map_err(|source| TowerError::SizeLimit {
                    level: level + 1,
                    source,
                })?;
            levels.push(fs.space.clone());
            spaces.push(fs);
        }

        let mut phi: Vec<Vec<usize>> = Vec::new();
        let mut psi: Vec<Vec<usize>> = Vec::new();
        // phi_0: d |-> constant-d table; psi_0: g |-> g(bot_0)
        let bot0 = levels[0].bottom();
        let phi0 = (0..levels[0].poset().len())
            .map(|d| {
                spaces[0]
                    .index_of_table(&vec![d; levels[0].poset().len()])
                    .expect("constant tables are monotone")
            })
            .collect();
        phi.push(phi0);
        psi.push(
            (0..levels[1].poset().len())
                .map(|g| spaces[0].table(g)[bot0])
                .collect(),
        );
        for n in 0..depth.saturating_sub(1) {
            // phi_{n+1}(d) = phi_n . d . psi_n, a table over D_{n+1}
            let size_n1 = levels[n + 1].poset().len();
            let mut phi_next = Vec::with_capacity(size_n1);
            for d in 0..size_n1 {
                let d_table = spaces[n].table(d);
                let result: Vec<usize> = (0..size_n1)
                    .map(|x| phi[n][d_table[psi[n][x]]])
                    .collect();
                phi_next.push(
                    spaces[n + 1]
                        .index_of_table(&result)
                        .expect("phi_n . d . psi_n is a composite of monotone maps"),
                );
            }
            phi.push(phi_next);
            // psi_{n+1}(g) = psi_n . g . phi_n, a table over D_n
            let size_n = levels[n].poset().len();
            let size_n2 = levels[n + 2].poset().len();
            let mut psi_next = Vec::with_capacity(size_n2);
            for g in 0..size_n2 {
                let g_table = spaces[n + 1].table(g);
                let result: Vec<usize> = (0..size_n)
                    .map(|x| psi[n][g_table[phi[n][x]]])
                    .collect();
                psi_next.push(
                    spaces[n]
                        .index_of_table(&result)
                        .expect("psi_n . g . phi_n is a composite of monotone maps"),
                );
            }
            psi.push(psi_next);
        }

        let tower = Tower {
            k,
            depth,
            levels,
            spaces,
            phi,
            psi,
        };
        let report = tower.verify_projection_pairs();
        assert!(
            report.iter().all(|r| r.retraction && r.deflation),
            "projection-pair law failed: {report:?}"
        );
        Ok(Arc::new(tower))
    }

    pub fn numerals(&self) -> usize {
        self.k
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn level(&self, n: usize) -> &Cpo {
        &self.levels[n]
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|c| c.poset().len()).collect()
    }

    /// Table of element `i` of `D_m` (`m >= 1`) as a map `D_{m-1} -> D_{m-1}`.
    pub fn table(&self, m: usize, i: usize) -> &[usize] {
        self.spaces[m - 1].table(i)
    }

    pub fn phi_map(&self, n: usize) -> &[usize] {
        &self.phi[n]
    }

    pub fn psi_map(&self, n: usize) -> &[usize] {
        &self.psi[n]
    }

    /// `phi_{n,m}`: the composite embedding `D_n -> D_m` (identity at n = m).
    pub fn embed(&self, n: usize, m: usize, d: usize) -> Result<usize, TowerError> {
        if n > m || m > self.depth {
            return Err(TowerError::LevelOutOfRange {
                given: m.max(n),
                depth: self.depth,
            });
        }
        Ok((n..m).fold(d, |acc, lv| self.phi[lv][acc]))
    }

    /// `psi_{m,n}`: the composite projection `D_m -> D_n` (identity at n = m).
    pub fn project(&self, m: usize, n: usize, d: usize) -> Result<usize, TowerError> {
        if n > m || m > self.depth {
            return Err(TowerError::LevelOutOfRange {
                given: m.max(n),
                depth: self.depth,
            });
        }
        Ok((n..m).rev().fold(d, |acc, lv| self.psi[lv][acc]))
    }

    /// Per-level check of `psi_n . phi_n = id` and `phi_n . psi_n <= id`.
    pub fn verify_projection_pairs(&self) -> Vec<ProjectionPairReport> {
        (0..self.depth)
            .map(|n| {
                let retraction = (0..self.levels[n].poset().len())
                    .all(|d| self.psi[n][self.phi[n][d]] == d);
                let upper = self.levels[n + 1].poset();
                let deflation = (0..upper.len())
                    .all(|g| upper.leq(self.phi[n][self.psi[n][g]], g));
                ProjectionPairReport {
                    level: n,
                    retraction,
                    deflation,
                }
            })
            .collect()
    }

    /// The element determined by a top-level point, with lower components
    /// derived by projection; the compatibility condition holds by
    /// construction.
    pub fn element_from_top(self: &Arc<Self>, top: usize) -> TowerElement {
        let components = (0..=self.depth)
            .map(|n| self.project(self.depth, n, top).expect("n <= depth"))
            .collect();
        TowerElement {
            tower: Arc::clone(self),
            components,
        }
    }

    pub fn bottom_element(self: &Arc<Self>) -> TowerElement {
        self.element_from_top(self.levels[self.depth].bottom())
    }

    /// All elements of the truncated limit, one per top-level point.
    pub fn elements(self: &Arc<Self>) -> Vec<TowerElement> {
        (0..self.levels[self.depth].poset().len())
            .map(|top| self.element_from_top(top))
            .collect()
    }

    /// The carrier of the truncated limit under its Scott topology: since
    /// elements are determined by their top component and the order is
    /// componentwise, this is the top level's space.
    pub fn scott_space(&self) -> ScottSpace {
        ScottSpace::new(self.levels[self.depth].clone())
    }

    pub fn top_label(&self, top: usize) -> &str {
        self.levels[self.depth].poset().label(top)
    }

    pub fn top_index_of(&self, label: &str) -> Result<usize, TowerError> {
        Ok(self.levels[self.depth].poset().index_of(label)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionPairReport {
    pub level: usize,
    /// `psi_n(phi_n(d)) = d` for every `d` in `D_n`.
    pub retraction: bool,
    /// `phi_n(psi_n(g)) <= g` for every `g` in `D_{n+1}`.
    pub deflation: bool,
}

/// A point of the truncated limit: the compatible sequence `(d_0, .., d_N)`.
#[derive(Clone)]
pub struct TowerElement {
    tower: Arc<Tower>,
    components: Vec<usize>,
}

impl std::fmt::Debug for TowerElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TowerElement({})", self.describe())
    }
}

impl PartialEq for TowerElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.tower, &other.tower) && self.components == other.components
    }
}
impl Eq for TowerElement {}

impl std::hash::Hash for TowerElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.components.hash(state);
    }
}

impl TowerElement {
    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn component(&self, n: usize) -> usize {
        self.components[n]
    }

    pub fn components(&self) -> &[usize] {
        &self.components
    }

    pub fn top(&self) -> usize {
        *self.components.last().unwrap()
    }

    pub fn is_bottom(&self) -> bool {
        self.top() == self.tower.levels[self.tower.depth].bottom()
    }

    /// `psi_n(d_{n+1}) = d_n` at every level.
    pub fn check_compatible(&self) -> bool {
        (0..self.tower.depth)
            .all(|n| self.tower.psi[n][self.components[n + 1]] == self.components[n])
    }

    /// Componentwise order; agrees with the top-level order because the
    /// projections are monotone.
    pub fn leq(&self, other: &TowerElement) -> bool {
        self.components
            .iter()
            .zip(&other.components)
            .enumerate()
            .all(|(n, (&a, &b))| self.tower.levels[n].poset().leq(a, b))
    }

    /// Labels of the components, top last.
    pub fn describe(&self) -> String {
        self.components
            .iter()
            .enumerate()
            .map(|(n, &i)| self.tower.levels[n].poset().label(i).to_owned())
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Truncated application: `a . b` from the top-level application
/// `a_N(b_{N-1})`, projected down and embedded up.
pub fn apply(a: &TowerElement, b: &TowerElement) -> Result<TowerElement, TowerError> {
    if !Arc::ptr_eq(&a.tower, &b.tower) {
        return Err(TowerError::TowerMismatch);
    }
    let tower = &a.tower;
    let depth = tower.depth;
    let c = tower.table(depth, a.top())[b.components[depth - 1]];
    let top = tower.phi[depth - 1][c];
    Ok(tower.element_from_top(top))
}

/// Truncated `F`: the map `b |-> a . b`.
pub fn elem_to_fun(a: &TowerElement) -> impl Fn(&TowerElement) -> Result<TowerElement, TowerError> + '_ {
    move |b| apply(a, b)
}

/// Truncated `F^{-1}`: realizes a semantic map as an element. The top
/// component is read off by probing the map on the embedded points of
/// `D_{N-1}`; the probe table must land in the enumerated carrier of `D_N`,
/// otherwise the map is not monotone and cannot be realized.
pub fn fun_to_elem<F>(tower: &Arc<Tower>, f: F) -> Result<TowerElement, TowerError>
where
    F: Fn(TowerElement) -> Result<TowerElement, TowerError>,
{
    let depth = tower.depth;
    let below = tower.levels[depth - 1].poset().len();
    let mut table = Vec::with_capacity(below);
    for x in 0..below {
        let probe = tower.element_from_top(tower.phi[depth - 1][x]);
        let image = f(probe)?;
        table.push(image.components[depth - 1]);
    }
    let top = tower.spaces[depth - 1]
        .index_of_table(&table)
        .ok_or(TowerError::NonMonotoneRealization)?;
    Ok(tower.element_from_top(top))
}

/// On-disk form of a tower: parameters plus the full level and table dump.
/// Loading rebuilds from the parameters and cross-checks the dump, so a
/// tampered file is rejected rather than trusted.
#[derive(Debug, Serialize, Deserialize)]
pub struct TowerFile {
    pub k: usize,
    pub n: usize,
    pub levels: Vec<TowerLevelDump>,
    pub phi: Vec<Vec<usize>>,
    pub psi: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TowerLevelDump {
    pub size: usize,
    pub elements: Vec<String>,
    /// Function tables into the previous level; empty at level 0.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tables: Vec<Vec<usize>>,
}

impl TowerFile {
    pub fn from_tower(tower: &Tower) -> TowerFile {
        let levels = (0..=tower.depth)
            .map(|m| TowerLevelDump {
                size: tower.levels[m].poset().len(),
                elements: tower.levels[m].poset().labels().to_vec(),
                tables: if m == 0 {
                    Vec::new()
                } else {
                    (0..tower.levels[m].poset().len())
                        .map(|i| tower.table(m, i).to_vec())
                        .collect()
                },
            })
            .collect();
        TowerFile {
            k: tower.k,
            n: tower.depth,
            levels,
            phi: tower.phi.clone(),
            psi: tower.psi.clone(),
        }
    }

    /// Rebuild the tower and verify the dump matches it.
    pub fn load(&self, limit: usize) -> Result<Arc<Tower>, TowerError> {
        let tower = Tower::build(self.k, self.n, limit)?;
        let fresh = TowerFile::from_tower(&tower);
        if fresh.levels != self.levels || fresh.phi != self.phi || fresh.psi != self.psi {
            return Err(TowerError::BadParams(
                "tower file does not match the canonical enumeration for its parameters".into(),
            ));
        }
        Ok(tower)
    }
}
