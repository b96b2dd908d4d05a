//! Labelled multigraphs (complete complexes) and their relation to a pot.
//!
//! Edges are directed from the vertex holding the unhatted end to the vertex
//! holding the hatted end. Connectivity ignores direction.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::feasibility::{self, ENUMERATION_BUDGET};
use crate::pot::{CohesiveEnd, Pot, SingleBondPot};
use crate::spectrum::TileDistribution;

/// Default half-edge limit for [`enumerate_realizations`].
pub const DEFAULT_MAX_HALF_EDGES: u64 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} uses tile t{tile}, which the pot does not have")]
    UnknownTile { vertex: usize, tile: usize },
    #[error("graph is not a realization of the pot: {0}")]
    InvalidRealization(String),
    #[error("distribution {dist} does not fit the pot: {reason}")]
    InvalidDistribution { dist: String, reason: String },
    #[error("enumeration needs {needed} units of work, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("malformed graph document: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub id: usize,
    pub tile: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: char,
}

/// A multigraph whose vertices carry 1-based tile indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LabeledMultigraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl LabeledMultigraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_parts(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Self {
        Self { vertices, edges }
    }

    /// Adds a vertex labelled with tile `t_tile` and returns its id.
    pub fn add_vertex(&mut self, tile: usize) -> usize {
        let id = self.vertices.iter().map(|v| v.id + 1).max().unwrap_or(0);
        self.vertices.push(Vertex { id, tile });
        id
    }

    pub fn add_edge(&mut self, from: usize, to: usize, label: char) {
        self.edges.push(Edge { from, to, label });
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn tile_of(&self, id: usize) -> Option<usize> {
        self.vertices.iter().find(|v| v.id == id).map(|v| v.tile)
    }

    pub fn has_loop(&self) -> bool {
        self.edges.iter().any(|e| e.from == e.to)
    }

    /// Disjoint union; `other`'s ids are shifted past this graph's largest id.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let offset = self.vertices.iter().map(|v| v.id + 1).max().unwrap_or(0);
        let mut out = self.clone();
        out.vertices.extend(other.vertices.iter().map(|v| Vertex {
            id: v.id + offset,
            tile: v.tile,
        }));
        out.edges.extend(other.edges.iter().map(|e| Edge {
            from: e.from + offset,
            to: e.to + offset,
            label: e.label,
        }));
        out
    }

    /// Graphviz rendering: vertices labelled `t<j>`, edges labelled by their letter.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph complex {\n");
        for v in &self.vertices {
            let _ = writeln!(out, "  {} [label=\"t{}\"];", v.id, v.tile);
        }
        for e in &self.edges {
            let _ = writeln!(out, "  {} -> {} [label=\"{}\"];", e.from, e.to, e.label);
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self, pot: &Pot) -> String {
        let doc = GraphDocument {
            pot: pot.to_string(),
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("graph documents always serialize")
    }
}

/// On-disk graph format: `{"pot": ..., "vertices": [...], "edges": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub pot: String,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

impl GraphDocument {
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))
    }

    pub fn graph(&self) -> LabeledMultigraph {
        LabeledMultigraph::from_parts(self.vertices.clone(), self.edges.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Loop {
        edge: usize,
        vertex: usize,
    },
    DuplicateVertex {
        id: usize,
    },
    UnknownEndpoint {
        edge: usize,
        vertex: usize,
    },
    EndMismatch {
        vertex: usize,
        tile: usize,
        expected: String,
        observed: String,
    },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Loop { edge, vertex } => write!(f, "edge {edge} is a loop at vertex {vertex}"),
            Violation::DuplicateVertex { id } => write!(f, "vertex id {id} appears more than once"),
            Violation::UnknownEndpoint { edge, vertex } => {
                write!(f, "edge {edge} refers to missing vertex {vertex}")
            }
            Violation::EndMismatch {
                vertex,
                tile,
                expected,
                observed,
            } => write!(
                f,
                "vertex {vertex} (t{tile}) expects ends {expected} but has {observed}"
            ),
        }
    }
}

/// Outcome of [`validate_realization`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RealizationCheck {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl RealizationCheck {
    fn from_violations(violations: Vec<Violation>) -> Self {
        Self {
            ok: violations.is_empty(),
            violations,
        }
    }

    fn summary(&self) -> String {
        self.violations
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("; ")
    }
}

fn render_ends(ends: &BTreeMap<CohesiveEnd, u32>) -> String {
    let parts: Vec<String> = ends
        .iter()
        .map(|(e, m)| if *m == 1 { e.to_string() } else { format!("{e}^{m}") })
        .collect();
    format!("{{{}}}", parts.join(","))
}

/// Checks that every vertex's incident half-edges are exactly its tile's ends.
pub fn validate_realization(
    graph: &LabeledMultigraph,
    pot: &Pot,
) -> Result<RealizationCheck, GraphError> {
    for v in &graph.vertices {
        if pot.tile(v.tile).is_none() {
            return Err(GraphError::UnknownTile {
                vertex: v.id,
                tile: v.tile,
            });
        }
    }
    let mut violations = Vec::new();
    let mut observed: BTreeMap<usize, BTreeMap<CohesiveEnd, u32>> = BTreeMap::new();
    let mut seen = BTreeSet::new();
    for v in &graph.vertices {
        if !seen.insert(v.id) {
            violations.push(Violation::DuplicateVertex { id: v.id });
        }
        observed.entry(v.id).or_default();
    }
    for (i, e) in graph.edges.iter().enumerate() {
        if e.from == e.to {
            violations.push(Violation::Loop {
                edge: i,
                vertex: e.from,
            });
        }
        for (vertex, hatted) in [(e.from, false), (e.to, true)] {
            match observed.get_mut(&vertex) {
                Some(ends) => match CohesiveEnd::new(e.label, hatted) {
                    Ok(end) => *ends.entry(end).or_insert(0) += 1,
                    Err(_) => violations.push(Violation::EndMismatch {
                        vertex,
                        tile: graph.tile_of(vertex).unwrap_or(0),
                        expected: "lowercase edge labels".into(),
                        observed: format!("label {:?}", e.label),
                    }),
                },
                None => violations.push(Violation::UnknownEndpoint { edge: i, vertex }),
            }
        }
    }
    for v in &graph.vertices {
        let tile = pot.tile(v.tile).expect("checked above");
        let expected: BTreeMap<CohesiveEnd, u32> = tile.ends().collect();
        let got = &observed[&v.id];
        if *got != expected && seen.contains(&v.id) {
            violations.push(Violation::EndMismatch {
                vertex: v.id,
                tile: v.tile,
                expected: render_ends(&expected),
                observed: render_ends(got),
            });
        }
    }
    Ok(RealizationCheck::from_violations(violations))
}

/// Connected components (direction ignored), each sorted, ordered by smallest id.
pub fn components(graph: &LabeledMultigraph) -> Vec<Vec<usize>> {
    let index: HashMap<usize, usize> = graph
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.id, i))
        .collect();
    let mut parent: Vec<usize> = (0..graph.vertices.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in &graph.edges {
        if let (Some(&a), Some(&b)) = (index.get(&e.from), index.get(&e.to)) {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
    }
    let mut groups: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (i, v) in graph.vertices.iter().enumerate() {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().insert(v.id);
    }
    let mut out: Vec<Vec<usize>> = groups
        .into_values()
        .map(|s| s.into_iter().collect())
        .collect();
    out.sort();
    out
}

/// Vertex count per tile, in pot order; the graph must be a valid realization.
pub fn tile_distribution_of(
    graph: &LabeledMultigraph,
    pot: &Pot,
) -> Result<TileDistribution, GraphError> {
    let check = validate_realization(graph, pot)?;
    if !check.ok {
        return Err(GraphError::InvalidRealization(check.summary()));
    }
    Ok(count_tiles(graph.vertices.iter(), pot.len()))
}

fn count_tiles<'a>(vertices: impl Iterator<Item = &'a Vertex>, tiles: usize) -> TileDistribution {
    let mut counts = vec![0u64; tiles];
    for v in vertices {
        counts[v.tile - 1] += 1;
    }
    TileDistribution::new(counts)
}

/// Tile distributions of each connected component, in component order.
pub fn component_distributions(
    graph: &LabeledMultigraph,
    pot: &Pot,
) -> Result<Vec<TileDistribution>, GraphError> {
    tile_distribution_of(graph, pot)?;
    Ok(components(graph)
        .iter()
        .map(|ids| {
            let ids: BTreeSet<usize> = ids.iter().copied().collect();
            count_tiles(graph.vertices.iter().filter(|v| ids.contains(&v.id)), pot.len())
        })
        .collect())
}

/// `1 + R2 (e2 - 1) < R1`: every realization of `dist` (role order) is disconnected.
pub fn forced_disconnected(dist: &TileDistribution, pot: &SingleBondPot) -> bool {
    1 + dist.count(1) * (pot.e2() as u64 - 1) < dist.count(0)
}

fn check_distribution(pot: &Pot, dist: &TileDistribution) -> Result<(), GraphError> {
    if dist.len() != pot.len() {
        return Err(GraphError::InvalidDistribution {
            dist: dist.to_string(),
            reason: format!("expected {} tile counts", pot.len()),
        });
    }
    if !dist.satisfies(pot) {
        return Err(GraphError::InvalidDistribution {
            dist: dist.to_string(),
            reason: "cohesive ends do not balance".into(),
        });
    }
    Ok(())
}

/// A way of splitting a distribution into smaller realizable distributions.
pub type Decomposition = Vec<TileDistribution>;

/// All multisets of at least two balanced, nonzero distributions summing to `dist`.
///
/// Parts within a decomposition are listed in lexicographically nonincreasing
/// order; decompositions are listed in the order the search finds them, which
/// is lexicographically decreasing in the part sequence.
pub fn decompose_distribution(
    pot: &Pot,
    dist: &TileDistribution,
) -> Result<Vec<Decomposition>, GraphError> {
    check_distribution(pot, dist)?;
    let candidates: u128 = dist
        .counts()
        .iter()
        .try_fold(1u128, |acc, &r| acc.checked_mul(r as u128 + 1))
        .unwrap_or(u128::MAX);
    if candidates > ENUMERATION_BUDGET as u128 {
        return Err(GraphError::BudgetExceeded {
            needed: candidates,
            budget: ENUMERATION_BUDGET,
        });
    }
    let mut atoms = Vec::new();
    let mut current = vec![0u64; dist.len()];
    sub_vectors(dist.counts(), 0, &mut current, &mut |v| {
        let part = TileDistribution::new(v.to_vec());
        if part.order() > 0 && part != *dist && part.satisfies(pot) {
            atoms.push(part);
        }
    });
    atoms.sort_by(|a, b| b.cmp(a));

    let mut out = Vec::new();
    let mut parts = Vec::new();
    let mut work = 0u64;
    split(&atoms, 0, dist.clone(), &mut parts, &mut out, &mut work)?;
    Ok(out)
}

fn sub_vectors(bound: &[u64], i: usize, current: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
    if i == bound.len() {
        f(current);
        return;
    }
    for c in 0..=bound[i] {
        current[i] = c;
        sub_vectors(bound, i + 1, current, f);
    }
}

fn split(
    atoms: &[TileDistribution],
    start: usize,
    remainder: TileDistribution,
    parts: &mut Vec<TileDistribution>,
    out: &mut Vec<Decomposition>,
    work: &mut u64,
) -> Result<(), GraphError> {
    if remainder.order() == 0 {
        out.push(parts.clone());
        return Ok(());
    }
    for (i, atom) in atoms.iter().enumerate().skip(start) {
        *work += 1;
        if *work > ENUMERATION_BUDGET {
            return Err(GraphError::BudgetExceeded {
                needed: *work as u128,
                budget: ENUMERATION_BUDGET,
            });
        }
        if let Some(rest) = remainder.checked_sub(atom) {
            parts.push(atom.clone());
            split(atoms, i, rest, parts, out, work)?;
            parts.pop();
        }
    }
    Ok(())
}

/// Whether the single-bond pot realizes a disconnected graph of order `n`,
/// decided by searching the order's distributions for a decomposition.
pub fn realizes_disconnected(pot: &SingleBondPot, n: u64) -> Result<bool, GraphError> {
    let full = pot.to_pot();
    for roles in feasibility::single_bond_distributions(pot, n) {
        let dist = pot.to_pot_order(&roles);
        if !decompose_distribution(&full, &dist)?.is_empty() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// When `d != 1`: a disconnected graph of order `n` exists iff `n` splits into
/// at least two realizable orders, i.e. `d | n` and `n >= 2 m_P`.
/// `None` when `d = 1`.
pub fn disconnected_by_gcd(pot: &SingleBondPot, n: u64) -> Option<bool> {
    let d = feasibility::gcd_classifier(pot);
    if d == 1 {
        return None;
    }
    Some(n.is_multiple_of(d) && n >= 2 * feasibility::min_order(pot))
}

/// When `d = 1`: `n >= 2 zeta` guarantees a disconnected graph of order `n`.
/// Only a sufficient condition; `None` when `d != 1`.
pub fn disconnected_by_zeta(pot: &SingleBondPot, n: u64) -> Option<bool> {
    feasibility::zeta(pot).map(|z| n >= 2 * z)
}

/// All realizations of `dist`, up to isomorphism, sorted by canonical signature.
///
/// Refuses when the distribution has more than `max_half_edges` half-edges in
/// total. A distribution whose ends do not balance has no realizations.
pub fn enumerate_realizations(
    pot: &Pot,
    dist: &TileDistribution,
    max_half_edges: u64,
) -> Result<Vec<LabeledMultigraph>, GraphError> {
    if dist.len() != pot.len() {
        return Err(GraphError::InvalidDistribution {
            dist: dist.to_string(),
            reason: format!("expected {} tile counts", pot.len()),
        });
    }
    let half_edges: u64 = pot
        .tiles()
        .iter()
        .zip(dist.counts())
        .map(|(t, &r)| t.arms() as u64 * r)
        .sum();
    if half_edges > max_half_edges {
        return Err(GraphError::BudgetExceeded {
            needed: half_edges as u128,
            budget: max_half_edges,
        });
    }
    if !dist.satisfies(pot) {
        return Ok(Vec::new());
    }

    let tiles: Vec<usize> = dist
        .counts()
        .iter()
        .enumerate()
        .flat_map(|(j, &r)| std::iter::repeat_n(j + 1, r as usize))
        .collect();
    let n = tiles.len();
    let labels = pot.bond_edge_types().to_vec();
    let degree = |v: usize, label: char, hatted: bool| {
        pot.tile(tiles[v])
            .map_or(0, |t| t.count(CohesiveEnd::new(label, hatted).expect("pot labels are valid")))
    };

    let per_label: Vec<Vec<Vec<Vec<u32>>>> = labels
        .iter()
        .map(|&l| {
            let out: Vec<u32> = (0..n).map(|v| degree(v, l, false)).collect();
            let inc: Vec<u32> = (0..n).map(|v| degree(v, l, true)).collect();
            transport_tables(&out, &inc)
        })
        .collect::<Result<_, _>>()?;

    let mut found: BTreeMap<Vec<u32>, LabeledMultigraph> = BTreeMap::new();
    let mut choice = vec![0usize; labels.len()];
    let mut produced = 0u64;
    loop {
        if per_label.iter().any(|t| t.is_empty()) {
            break;
        }
        produced += 1;
        if produced > ENUMERATION_BUDGET {
            return Err(GraphError::BudgetExceeded {
                needed: produced as u128,
                budget: ENUMERATION_BUDGET,
            });
        }
        let adj: Vec<&Vec<Vec<u32>>> = per_label
            .iter()
            .zip(&choice)
            .map(|(tables, &c)| &tables[c])
            .collect();
        let (key, order) = canonical_order(&tiles, &adj);
        found
            .entry(key)
            .or_insert_with(|| build_graph(&tiles, &adj, &labels, &order));

        // odometer over the per-label tables
        let mut i = 0;
        loop {
            if i == choice.len() {
                return Ok(found.into_values().collect());
            }
            choice[i] += 1;
            if choice[i] < per_label[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
    Ok(found.into_values().collect())
}

/// All loop-free edge-multiplicity matrices with the given out/in degrees.
fn transport_tables(out: &[u32], inc: &[u32]) -> Result<Vec<Vec<Vec<u32>>>, GraphError> {
    let n = out.len();
    if out.iter().sum::<u32>() != inc.iter().sum::<u32>() {
        return Ok(Vec::new());
    }
    let mut tables = Vec::new();
    let mut table = vec![vec![0u32; n]; n];
    let mut col_left = inc.to_vec();
    fill_row(out, 0, 0, out.first().copied().unwrap_or(0), &mut col_left, &mut table, &mut tables)?;
    Ok(tables)
}

fn fill_row(
    out: &[u32],
    row: usize,
    col: usize,
    row_left: u32,
    col_left: &mut Vec<u32>,
    table: &mut Vec<Vec<u32>>,
    tables: &mut Vec<Vec<Vec<u32>>>,
) -> Result<(), GraphError> {
    let n = out.len();
    if row == n {
        if col_left.iter().all(|&c| c == 0) {
            if tables.len() as u64 >= ENUMERATION_BUDGET {
                return Err(GraphError::BudgetExceeded {
                    needed: tables.len() as u128 + 1,
                    budget: ENUMERATION_BUDGET,
                });
            }
            tables.push(table.clone());
        }
        return Ok(());
    }
    if col == n {
        if row_left == 0 {
            let next = out.get(row + 1).copied().unwrap_or(0);
            fill_row(out, row + 1, 0, next, col_left, table, tables)?;
        }
        return Ok(());
    }
    // what the remaining columns of this row can still absorb
    let capacity: u32 = (col + 1..n).filter(|&c| c != row).map(|c| col_left[c]).sum();
    let max = if col == row { 0 } else { row_left.min(col_left[col]) };
    let min = row_left.saturating_sub(capacity);
    for value in min..=max {
        table[row][col] = value;
        col_left[col] -= value;
        fill_row(out, row, col + 1, row_left - value, col_left, table, tables)?;
        col_left[col] += value;
    }
    table[row][col] = 0;
    Ok(())
}

/// Lexicographically smallest adjacency encoding over all vertex orderings that
/// keep tile classes in place, and the ordering achieving it.
fn canonical_order(tiles: &[usize], adj: &[&Vec<Vec<u32>>]) -> (Vec<u32>, Vec<usize>) {
    let n = tiles.len();
    let twins: Vec<Vec<bool>> = (0..n)
        .map(|u| (0..n).map(|v| tiles[u] == tiles[v] && are_twins(adj, u, v)).collect())
        .collect();
    let mut search = CanonicalSearch {
        tiles,
        adj,
        twins,
        best: None,
        prefix: Vec::new(),
        order: Vec::new(),
        used: vec![false; n],
    };
    search.descend(false);
    let (key, order) = search.best.expect("at least one ordering exists");
    (key, order)
}

fn are_twins(adj: &[&Vec<Vec<u32>>], u: usize, v: usize) -> bool {
    if u == v {
        return true;
    }
    let n = adj.first().map_or(0, |a| a.len());
    adj.iter().all(|a| {
        a[u][v] == a[v][u]
            && (0..n)
                .filter(|&w| w != u && w != v)
                .all(|w| a[u][w] == a[v][w] && a[w][u] == a[w][v])
    })
}

struct CanonicalSearch<'a> {
    tiles: &'a [usize],
    adj: &'a [&'a Vec<Vec<u32>>],
    twins: Vec<Vec<bool>>,
    best: Option<(Vec<u32>, Vec<usize>)>,
    prefix: Vec<u32>,
    order: Vec<usize>,
    used: Vec<bool>,
}

impl CanonicalSearch<'_> {
    /// `below` is set once the current prefix is already smaller than the best.
    fn descend(&mut self, below: bool) {
        let pos = self.order.len();
        let n = self.tiles.len();
        if pos == n {
            if below || self.best.as_ref().is_none_or(|(b, _)| self.prefix < *b) {
                self.best = Some((self.prefix.clone(), self.order.clone()));
            }
            return;
        }
        // vertices are grouped by tile, so position `pos` takes the tile at index `pos`
        let class = self.tiles[pos];
        let mut tried: Vec<usize> = Vec::new();
        for v in 0..n {
            if self.used[v] || self.tiles[v] != class {
                continue;
            }
            if tried.iter().any(|&u| self.twins[u][v]) {
                continue;
            }
            tried.push(v);
            let mark = self.prefix.len();
            for &u in &self.order {
                for a in self.adj {
                    self.prefix.push(a[v][u]);
                    self.prefix.push(a[u][v]);
                }
            }
            let mut next_below = below;
            let mut prune = false;
            if !below {
                if let Some((best, _)) = &self.best {
                    match self.prefix[..].cmp(&best[..self.prefix.len()]) {
                        std::cmp::Ordering::Less => next_below = true,
                        std::cmp::Ordering::Greater => prune = true,
                        std::cmp::Ordering::Equal => {}
                    }
                }
            }
            if !prune {
                self.used[v] = true;
                self.order.push(v);
                self.descend(next_below);
                self.order.pop();
                self.used[v] = false;
            }
            self.prefix.truncate(mark);
        }
    }
}

fn build_graph(
    tiles: &[usize],
    adj: &[&Vec<Vec<u32>>],
    labels: &[char],
    order: &[usize],
) -> LabeledMultigraph {
    let mut g = LabeledMultigraph::new();
    for &v in order {
        g.vertices.push(Vertex {
            id: g.vertices.len(),
            tile: tiles[v],
        });
    }
    for (p, &u) in order.iter().enumerate() {
        for (q, &v) in order.iter().enumerate() {
            for (a, &label) in adj.iter().zip(labels) {
                for _ in 0..a[u][v] {
                    g.add_edge(p, q, label);
                }
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pot::parse_pot;

    fn pot(text: &str) -> Pot {
        parse_pot(text).unwrap()
    }

    fn dist(c: &[u64]) -> TileDistribution {
        TileDistribution::new(c.to_vec())
    }

    fn triple_edge() -> LabeledMultigraph {
        let mut g = LabeledMultigraph::new();
        let a = g.add_vertex(1);
        let b = g.add_vertex(2);
        for _ in 0..3 {
            g.add_edge(a, b, 'a');
        }
        g
    }

    fn star(leaves: usize) -> LabeledMultigraph {
        let mut g = LabeledMultigraph::new();
        let c = g.add_vertex(1);
        for _ in 0..leaves {
            let l = g.add_vertex(3);
            g.add_edge(c, l, 'a');
        }
        g
    }

    #[test]
    fn triple_edge_is_valid() {
        let check = validate_realization(&triple_edge(), &pot("{a^3};{a*^3};{a*}")).unwrap();
        assert!(check.ok, "{:?}", check.violations);
    }

    #[test]
    fn star_with_missing_leaf_is_flagged_at_center() {
        let p = pot("{a^3};{a*^3};{a*}");
        assert!(validate_realization(&star(3), &p).unwrap().ok);
        let check = validate_realization(&star(2), &p).unwrap();
        assert!(!check.ok);
        assert_eq!(
            check.violations,
            vec![Violation::EndMismatch {
                vertex: 0,
                tile: 1,
                expected: "{a^3}".into(),
                observed: "{a^2}".into()
            }]
        );
    }

    #[test]
    fn loops_are_violations() {
        let p = pot("{a,a*};{a};{a*}");
        let mut g = LabeledMultigraph::new();
        let v = g.add_vertex(1);
        g.add_edge(v, v, 'a');
        let check = validate_realization(&g, &p).unwrap();
        assert!(!check.ok);
        assert_eq!(check.violations, vec![Violation::Loop { edge: 0, vertex: 0 }]);
    }

    #[test]
    fn unknown_tiles_and_endpoints() {
        let p = pot("{a^3};{a*^3};{a*}");
        let mut g = LabeledMultigraph::new();
        g.add_vertex(4);
        assert_eq!(
            validate_realization(&g, &p),
            Err(GraphError::UnknownTile { vertex: 0, tile: 4 })
        );
        let mut g = triple_edge();
        g.add_edge(0, 9, 'a');
        let check = validate_realization(&g, &p).unwrap();
        assert!(check
            .violations
            .contains(&Violation::UnknownEndpoint { edge: 3, vertex: 9 }));
    }

    #[test]
    fn component_examples() {
        let mut path = LabeledMultigraph::new();
        for t in [2, 1, 2] {
            path.add_vertex(t);
        }
        path.add_edge(1, 0, 'a');
        path.add_edge(1, 2, 'a');
        assert_eq!(components(&path), vec![vec![0, 1, 2]]);

        let two = triple_edge().disjoint_union(&triple_edge());
        assert_eq!(components(&two), vec![vec![0, 1], vec![2, 3]]);
        assert!(components(&LabeledMultigraph::new()).is_empty());
    }

    #[test]
    fn tile_distribution_examples() {
        let p = pot("{a^3};{a*^3};{a*}");
        assert_eq!(tile_distribution_of(&triple_edge(), &p).unwrap(), dist(&[1, 1, 0]));
        assert_eq!(tile_distribution_of(&star(3), &p).unwrap(), dist(&[1, 0, 3]));
        assert_eq!(
            tile_distribution_of(&LabeledMultigraph::new(), &p).unwrap(),
            dist(&[0, 0, 0])
        );
        assert!(matches!(
            tile_distribution_of(&star(2), &p),
            Err(GraphError::InvalidRealization(_))
        ));
    }

    #[test]
    fn forced_disconnection_examples() {
        let six = SingleBondPot::new(6, 4).unwrap();
        assert!(forced_disconnected(&dist(&[5, 1, 26]), &six));
        let four = SingleBondPot::new(4, 3).unwrap();
        assert!(!forced_disconnected(&dist(&[7, 3, 19]), &four));
        for (e1, e2) in [(3, 3), (6, 4), (9, 2)] {
            let p = SingleBondPot::new(e1, e2).unwrap();
            assert!(!forced_disconnected(&dist(&[1, 0, e1 as u64]), &p));
        }
    }

    #[test]
    fn decomposition_examples() {
        let seven = pot("{a^7};{a*^4};{a*}");
        let d = decompose_distribution(&seven, &dist(&[3, 4, 5])).unwrap();
        assert!(d.contains(&vec![dist(&[2, 3, 2]), dist(&[1, 1, 3])]));

        let six = pot("{a^6};{a*^4};{a*}");
        let d = decompose_distribution(&six, &dist(&[2, 2, 4])).unwrap();
        assert_eq!(d, vec![vec![dist(&[1, 1, 2]), dist(&[1, 1, 2])]]);
        assert!(decompose_distribution(&six, &dist(&[1, 1, 2])).unwrap().is_empty());

        assert!(matches!(
            decompose_distribution(&six, &dist(&[1, 1, 1])),
            Err(GraphError::InvalidDistribution { .. })
        ));
    }

    #[test]
    fn decompositions_sum_and_are_sorted() {
        let three = pot("{a^3};{a*^3};{a*}");
        let target = dist(&[3, 2, 3]);
        let all = decompose_distribution(&three, &target).unwrap();
        assert!(!all.is_empty());
        for parts in &all {
            assert!(parts.len() >= 2);
            assert!(parts.windows(2).all(|w| w[0] >= w[1]));
            let sum = parts.iter().skip(1).fold(parts[0].clone(), |acc, p| acc.add(p));
            assert_eq!(sum, target);
            assert!(parts.iter().all(|p| p.satisfies(&three)));
        }
        let unique: BTreeSet<_> = all.iter().collect();
        assert_eq!(unique.len(), all.len());
    }

    #[test]
    fn enumeration_examples() {
        let three = pot("{a^3};{a*^3};{a*}");
        let g = enumerate_realizations(&three, &dist(&[1, 1, 0]), 12).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].edge_count(), 3);

        let g = enumerate_realizations(&three, &dist(&[1, 0, 3]), 12).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(components(&g[0]).len(), 1);

        let six = pot("{a^6};{a*^4};{a*}");
        let g = enumerate_realizations(&six, &dist(&[1, 1, 2]), 12).unwrap();
        assert!(g.iter().any(|g| g.order() == 4 && components(g).len() == 1));
    }

    #[test]
    fn enumeration_of_two_two_zero() {
        // {a^3},{a*^3} twice: either one double+single pair pattern (connected)
        // or two triple edges (disconnected)
        let three = pot("{a^3};{a*^3};{a*}");
        let g = enumerate_realizations(&three, &dist(&[2, 2, 0]), 12).unwrap();
        for graph in &g {
            assert!(validate_realization(graph, &three).unwrap().ok);
        }
        let disconnected = g.iter().filter(|g| components(g).len() > 1).count();
        assert_eq!(disconnected, 1);
        // bipartite multigraphs with row/col sums 3: [[3,0],[0,3]] and [[2,1],[1,2]]
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn enumeration_budget_and_unbalanced() {
        let three = pot("{a^3};{a*^3};{a*}");
        assert!(matches!(
            enumerate_realizations(&three, &dist(&[3, 3, 0]), 12),
            Err(GraphError::BudgetExceeded { .. })
        ));
        assert!(enumerate_realizations(&three, &dist(&[1, 0, 2]), 12)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn dot_and_json_formats() {
        let p = pot("{a^3};{a*^3};{a*}");
        let g = triple_edge();
        assert_eq!(
            g.to_dot(),
            "digraph complex {\n  0 [label=\"t1\"];\n  1 [label=\"t2\"];\n  0 -> 1 [label=\"a\"];\n  0 -> 1 [label=\"a\"];\n  0 -> 1 [label=\"a\"];\n}\n"
        );
        let json = g.to_json(&p);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["pot"], "{a^3};{a*^3};{a*}");
        assert_eq!(value["vertices"][1], serde_json::json!({"id": 1, "tile": 2}));
        assert_eq!(value["edges"][0], serde_json::json!({"from": 0, "to": 1, "label": "a"}));
        let doc = GraphDocument::parse(&json).unwrap();
        assert_eq!(doc.graph(), g);
        assert!(GraphDocument::parse("{\"pot\": 1}").is_err());
    }

    #[test]
    fn gcd_and_zeta_predicates() {
        let three = SingleBondPot::new(3, 3).unwrap();
        assert_eq!(disconnected_by_gcd(&three, 4), Some(true));
        assert_eq!(disconnected_by_gcd(&three, 2), Some(false));
        assert_eq!(disconnected_by_gcd(&three, 5), Some(false));
        assert_eq!(disconnected_by_zeta(&three, 40), None);

        let seven = SingleBondPot::new(7, 4).unwrap();
        assert_eq!(disconnected_by_gcd(&seven, 15), None);
        assert_eq!(disconnected_by_zeta(&seven, 15), Some(true));
        assert_eq!(disconnected_by_zeta(&seven, 13), Some(false));
        // order 12 is disconnected even though 12 < 2 zeta
        assert!(realizes_disconnected(&seven, 12).unwrap());
    }
}
