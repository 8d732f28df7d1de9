//! Ribbon graphs as signed rotation systems.
//!
//! Every edge end (half-edge) occupies an arc on the boundary of its vertex
//! disc, and each end has two corners, called sides `0` and `1` in rotation
//! order. A corner is a *flag* with id `4·edge + 2·end + side`. Three fixed-point
//! free involutions act on flags:
//!
//! * `τ_f` swaps the two corners of one end (the attachment arc),
//! * `τ_v` follows a long side of the edge ribbon to the other end, swapping
//!   sides for an untwisted edge and keeping them for a twisted one,
//! * `τ_e` follows the vertex boundary from side `1` of an end to side `0` of
//!   the next end in rotation order.
//!
//! Boundary components are the orbits of `⟨τ_e, τ_v⟩` and vertices are the
//! orbits of `⟨τ_e, τ_f⟩`. The partial dual exchanges `τ_f` and `τ_v` on the
//! flags of the chosen edges.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{self, Mask};
use crate::delta::{DeltaMatroid, SetSystem};

pub const MAX_EDGES: usize = 8;
pub const MAX_VERTICES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RibbonError {
    #[error("edge label `{0}` used twice")]
    DuplicateEdge(String),
    #[error("invalid edge label `{0}`")]
    InvalidLabel(String),
    #[error("half-edge `{0}` is not owned by any edge")]
    UnknownHalfEdge(String),
    #[error("half-edge `{0}` appears more than once")]
    RepeatedHalfEdge(String),
    #[error("half-edge `{0}` does not appear at any vertex")]
    MissingHalfEdge(String),
    #[error("{0} edges; at most {MAX_EDGES} are supported")]
    TooManyEdges(usize),
    #[error("{0} vertices; at most {MAX_VERTICES} are supported")]
    TooManyVertices(usize),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("vertex {0} does not exist")]
    UnknownVertex(usize),
}

/// One edge end: the edge index and which of its two ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfEdge {
    pub edge: usize,
    pub end: usize,
}

impl HalfEdge {
    fn flag(self, side: usize) -> usize {
        4 * self.edge + 2 * self.end + side
    }
}

/// JSON form of an edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub halves: [String; 2],
    pub twisted: bool,
}

/// JSON form of a ribbon graph; each vertex lists its half-edges in rotation order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RibbonDoc {
    pub vertices: Vec<Vec<String>>,
    pub edges: BTreeMap<String, EdgeDoc>,
}

/// A ribbon graph. Edges are kept sorted by label.
#[derive(Debug, Clone)]
pub struct RibbonGraph {
    labels: Vec<String>,
    twisted: Vec<bool>,
    rotation: Vec<Vec<HalfEdge>>,
}

impl PartialEq for RibbonGraph {
    /// Equality up to relabelling half-edges, reordering vertices, rotating
    /// cyclic orders and flipping vertex discs.
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.canonical_form() == other.canonical_form()
    }
}

impl Eq for RibbonGraph {}

impl fmt::Display for RibbonGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verts: Vec<String> = self
            .rotation
            .iter()
            .map(|v| {
                let names: Vec<String> = v.iter().map(|h| self.half_name(*h)).collect();
                format!("({})", names.join(" "))
            })
            .collect();
        let edges: Vec<String> = self
            .labels
            .iter()
            .zip(&self.twisted)
            .map(|(l, &t)| if t { format!("{l}~") } else { l.clone() })
            .collect();
        write!(f, "vertices {} edges {}", verts.join(" "), edges.join(" "))
    }
}

impl RibbonGraph {
    /// Builds from half-edge names; `edges[label].halves[k]` is end `k`.
    pub fn new(
        vertices: Vec<Vec<String>>,
        edges: BTreeMap<String, EdgeDoc>,
    ) -> Result<Self, RibbonError> {
        if edges.len() > MAX_EDGES {
            return Err(RibbonError::TooManyEdges(edges.len()));
        }
        if vertices.len() > MAX_VERTICES {
            return Err(RibbonError::TooManyVertices(vertices.len()));
        }
        let mut owner: HashMap<&str, HalfEdge> = HashMap::new();
        for (i, (label, e)) in edges.iter().enumerate() {
            if label.is_empty() {
                return Err(RibbonError::InvalidLabel(label.clone()));
            }
            for (end, h) in e.halves.iter().enumerate() {
                if owner.insert(h.as_str(), HalfEdge { edge: i, end }).is_some() {
                    return Err(RibbonError::RepeatedHalfEdge(h.clone()));
                }
            }
        }
        let mut placed = HashMap::new();
        let mut rotation = Vec::with_capacity(vertices.len());
        for v in &vertices {
            let mut seq = Vec::with_capacity(v.len());
            for h in v {
                let he = *owner
                    .get(h.as_str())
                    .ok_or_else(|| RibbonError::UnknownHalfEdge(h.clone()))?;
                if placed.insert(h.as_str(), ()).is_some() {
                    return Err(RibbonError::RepeatedHalfEdge(h.clone()));
                }
                seq.push(he);
            }
            rotation.push(seq);
        }
        if let Some(missing) = owner.keys().find(|h| !placed.contains_key(*h)) {
            return Err(RibbonError::MissingHalfEdge(missing.to_string()));
        }
        Ok(Self {
            labels: edges.keys().cloned().collect(),
            twisted: edges.values().map(|e| e.twisted).collect(),
            rotation,
        })
    }

    pub fn from_doc(doc: RibbonDoc) -> Result<Self, RibbonError> {
        Self::new(doc.vertices, doc.edges)
    }

    /// Builds from labels (sorted, distinct), twist signs, and rotations of
    /// half-edge ids `2·edge + end`.
    pub fn from_rotation(
        labels: Vec<String>,
        twisted: Vec<bool>,
        rotation: Vec<Vec<usize>>,
    ) -> Result<Self, RibbonError> {
        let mut edges = BTreeMap::new();
        for (l, &t) in labels.iter().zip(&twisted) {
            let doc = EdgeDoc {
                halves: [format!("{l}.0"), format!("{l}.1")],
                twisted: t,
            };
            if edges.insert(l.clone(), doc).is_some() {
                return Err(RibbonError::DuplicateEdge(l.clone()));
            }
        }
        let vertices = rotation
            .iter()
            .map(|v| {
                v.iter()
                    .map(|&h| {
                        let l = labels.get(h / 2).map_or("?", String::as_str);
                        format!("{l}.{}", h % 2)
                    })
                    .collect()
            })
            .collect();
        Self::new(vertices, edges)
    }

    pub fn to_doc(&self) -> RibbonDoc {
        RibbonDoc {
            vertices: self
                .rotation
                .iter()
                .map(|v| v.iter().map(|&h| self.half_name(h)).collect())
                .collect(),
            edges: self
                .labels
                .iter()
                .enumerate()
                .map(|(i, l)| {
                    (
                        l.clone(),
                        EdgeDoc {
                            halves: [format!("{l}.0"), format!("{l}.1")],
                            twisted: self.twisted[i],
                        },
                    )
                })
                .collect(),
        }
    }

    fn half_name(&self, h: HalfEdge) -> String {
        format!("{}.{}", self.labels[h.edge], h.end)
    }

    pub fn edge_labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_edges(&self) -> usize {
        self.labels.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.rotation.len()
    }

    pub fn rotation(&self) -> &[Vec<HalfEdge>] {
        &self.rotation
    }

    pub fn is_twisted(&self, e: usize) -> bool {
        self.twisted[e]
    }

    pub fn edge_index(&self, label: &str) -> Result<usize, RibbonError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| RibbonError::UnknownEdge(label.to_string()))
    }

    pub fn edge_mask<S: AsRef<str>>(&self, labels: &[S]) -> Result<Mask, RibbonError> {
        labels
            .iter()
            .try_fold(0, |m, l| Ok(m | bits::bit(self.edge_index(l.as_ref())?)))
    }

    /// The two vertices of edge `e` (equal for a loop).
    pub fn endpoints(&self, e: usize) -> [usize; 2] {
        let mut out = [usize::MAX; 2];
        for (v, seq) in self.rotation.iter().enumerate() {
            for h in seq {
                if h.edge == e {
                    out[h.end] = v;
                }
            }
        }
        out
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let [u, v] = self.endpoints(e);
        u == v
    }

    fn tau_e(&self) -> Vec<usize> {
        let mut t = vec![0; 4 * self.num_edges()];
        for seq in &self.rotation {
            let k = seq.len();
            for i in 0..k {
                let a = seq[i].flag(1);
                let b = seq[(i + 1) % k].flag(0);
                t[a] = b;
                t[b] = a;
            }
        }
        t
    }

    fn tau_v(&self, f: usize) -> usize {
        let (e, side) = (f / 4, f % 2);
        let end = (f / 2) % 2;
        let other_side = if self.twisted[e] { side } else { 1 - side };
        4 * e + 2 * (1 - end) + other_side
    }

    /// Number of components of the underlying graph of `(V, E')`.
    pub fn components_of(&self, keep: Mask) -> usize {
        let mut uf = UnionFind::new(self.num_vertices());
        for e in bits::ones(keep) {
            let [u, v] = self.endpoints(e);
            uf.union(u, v);
        }
        uf.count()
    }

    pub fn num_components(&self) -> usize {
        self.components_of(bits::full(self.num_edges()))
    }

    pub fn is_connected(&self) -> bool {
        self.num_components() <= 1
    }

    /// Boundary components of the spanning ribbon subgraph `(V, E')`.
    pub fn boundary_components(&self, keep: Mask) -> usize {
        let m = self.num_edges();
        let mut uf = UnionFind::new(4 * m);
        let mut bare = 0;
        for seq in &self.rotation {
            let ends: Vec<HalfEdge> = seq
                .iter()
                .copied()
                .filter(|h| bits::contains(keep, h.edge))
                .collect();
            if ends.is_empty() {
                bare += 1;
            }
            let k = ends.len();
            for i in 0..k {
                uf.union(ends[i].flag(1), ends[(i + 1) % k].flag(0));
            }
        }
        for e in bits::ones(keep) {
            for f in 4 * e..4 * e + 4 {
                uf.union(f, self.tau_v(f));
            }
        }
        let roots: std::collections::HashSet<usize> = bits::ones(keep)
            .flat_map(|e| 4 * e..4 * e + 4)
            .map(|f| uf.find(f))
            .collect();
        roots.len() + bare
    }

    pub fn boundary_components_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<usize, RibbonError> {
        Ok(self.boundary_components(self.edge_mask(labels)?))
    }

    pub fn subgraph(&self, keep: Mask) -> SpanningSubgraph<'_> {
        SpanningSubgraph {
            parent: self,
            edges: keep,
        }
    }

    /// `D(G)`: the spanning quasi-trees, as a delta-matroid on the edge labels.
    pub fn delta_matroid(&self) -> DeltaMatroid {
        let target = self.num_components();
        let feasible: Vec<Mask> = bits::submasks(bits::full(self.num_edges()))
            .filter(|&a| self.boundary_components(a) == target)
            .collect();
        SetSystem::new(self.labels.clone(), feasible)
            .and_then(SetSystem::into_delta_matroid)
            .expect("quasi-trees form a delta-matroid")
    }

    /// Two-colours the vertices so that exactly the twisted edges join
    /// different colours.
    pub fn is_orientable(&self) -> bool {
        let n = self.num_vertices();
        let mut colour: Vec<Option<bool>> = vec![None; n];
        let ends: Vec<[usize; 2]> = (0..self.num_edges()).map(|e| self.endpoints(e)).collect();
        for start in 0..n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                let cu = colour[u].unwrap();
                for (e, &[a, b]) in ends.iter().enumerate() {
                    let w = if a == u {
                        b
                    } else if b == u {
                        a
                    } else {
                        continue;
                    };
                    let want = cu ^ self.twisted[e];
                    match colour[w] {
                        None => {
                            colour[w] = Some(want);
                            stack.push(w);
                        }
                        Some(c) if c != want => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }

    /// Connected underlying graph and connected `D(G)`.
    pub fn is_2_connected(&self) -> bool {
        self.is_connected() && self.delta_matroid().is_connected()
    }

    fn with_edges(&self, keep: Mask) -> RibbonGraph {
        let index: Vec<Option<usize>> = {
            let mut next = 0;
            (0..self.num_edges())
                .map(|e| {
                    bits::contains(keep, e).then(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        };
        RibbonGraph {
            labels: bits::ones(keep).map(|e| self.labels[e].clone()).collect(),
            twisted: bits::ones(keep).map(|e| self.twisted[e]).collect(),
            rotation: self
                .rotation
                .iter()
                .map(|seq| {
                    seq.iter()
                        .filter_map(|h| {
                            index[h.edge].map(|edge| HalfEdge { edge, end: h.end })
                        })
                        .collect()
                })
                .collect(),
        }
    }

    /// `G \ e`; vertices are kept.
    pub fn delete_edge(&self, label: &str) -> Result<RibbonGraph, RibbonError> {
        let e = self.edge_index(label)?;
        Ok(self.with_edges(bits::full(self.num_edges()) & !bits::bit(e)))
    }

    /// Removes a vertex and every edge incident with it.
    pub fn delete_vertex(&self, v: usize) -> Result<RibbonGraph, RibbonError> {
        if v >= self.num_vertices() {
            return Err(RibbonError::UnknownVertex(v));
        }
        let incident = self.rotation[v].iter().fold(0, |m, h| m | bits::bit(h.edge));
        let mut g = self.with_edges(bits::full(self.num_edges()) & !incident);
        g.rotation.remove(v);
        Ok(g)
    }

    /// `G + A`: toggles the twist of every edge in `A`.
    pub fn half_twist(&self, a: Mask) -> RibbonGraph {
        let mut g = self.clone();
        for e in bits::ones(a) {
            g.twisted[e] = !g.twisted[e];
        }
        g
    }

    pub fn half_twist_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<RibbonGraph, RibbonError> {
        Ok(self.half_twist(self.edge_mask(labels)?))
    }

    /// `G * A`: exchanges `τ_f` and `τ_v` on the flags of `A` and reads the
    /// vertices back as orbits of `⟨τ_e, τ_f⟩`.
    pub fn partial_dual(&self, a: Mask) -> RibbonGraph {
        let m = self.num_edges();
        let nflags = 4 * m;
        let te = self.tau_e();
        let in_a = |f: usize| bits::contains(a, f / 4);
        let tf: Vec<usize> = (0..nflags)
            .map(|f| if in_a(f) { self.tau_v(f) } else { f ^ 1 })
            .collect();
        let tv: Vec<usize> = (0..nflags)
            .map(|f| if in_a(f) { f ^ 1 } else { self.tau_v(f) })
            .collect();

        // each vertex orbit alternates τ_f and τ_e; a τ_f step is one edge end
        let mut seen = vec![false; nflags];
        let mut cycles: Vec<Vec<(usize, usize)>> = Vec::new();
        for start in 0..nflags {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = start;
            loop {
                let p = tf[cur];
                seen[cur] = true;
                seen[p] = true;
                cycle.push((cur, p));
                cur = te[p];
                if cur == start {
                    break;
                }
            }
            cycles.push(cycle);
        }

        // end 0 of each edge is the corner pair holding its smallest flag
        let end_of = |pair: (usize, usize)| -> usize {
            let e = pair.0 / 4;
            let low = 4 * e;
            let first_pair_low = low == pair.0 || low == pair.1;
            if first_pair_low {
                0
            } else {
                1
            }
        };
        let mut corner: Vec<[[usize; 2]; 2]> = vec![[[0; 2]; 2]; m];
        let mut rotation: Vec<Vec<HalfEdge>> = cycles
            .iter()
            .map(|cycle| {
                cycle
                    .iter()
                    .map(|&pair| {
                        let end = end_of(pair);
                        corner[pair.0 / 4][end] = [pair.0, pair.1];
                        HalfEdge {
                            edge: pair.0 / 4,
                            end,
                        }
                    })
                    .collect()
            })
            .collect();
        let twisted = (0..m)
            .map(|e| {
                let [p, k] = corner[e];
                debug_assert!(tv[p[0]] == k[0] || tv[p[0]] == k[1]);
                tv[p[0]] != k[1]
            })
            .collect();
        rotation.extend(self.rotation.iter().filter(|s| s.is_empty()).cloned());
        RibbonGraph {
            labels: self.labels.clone(),
            twisted,
            rotation,
        }
    }

    pub fn partial_dual_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<RibbonGraph, RibbonError> {
        Ok(self.partial_dual(self.edge_mask(labels)?))
    }

    /// `G / e := (G * e) \ e`.
    pub fn contract_edge(&self, label: &str) -> Result<RibbonGraph, RibbonError> {
        let e = self.edge_index(label)?;
        self.partial_dual(bits::bit(e)).delete_edge(label)
    }

    /// `(G + e) / e`.
    pub fn twist_contract(&self, label: &str) -> Result<RibbonGraph, RibbonError> {
        let e = self.edge_index(label)?;
        self.half_twist(bits::bit(e)).contract_edge(label)
    }

    /// A labelled invariant form: for the best choice of vertex flips, the
    /// sorted list of minimal rotations of each vertex's edge-label sequence,
    /// with the resulting twist signs.
    pub fn canonical_form(&self) -> (Vec<Vec<usize>>, Vec<bool>) {
        let n = self.num_vertices();
        let ends: Vec<[usize; 2]> = (0..self.num_edges()).map(|e| self.endpoints(e)).collect();
        let mut best: Option<(Vec<Vec<usize>>, Vec<bool>)> = None;
        for flips in bits::submasks(bits::full(n)) {
            let mut verts: Vec<Vec<usize>> = self
                .rotation
                .iter()
                .enumerate()
                .map(|(v, seq)| {
                    let mut labels: Vec<usize> = seq.iter().map(|h| h.edge).collect();
                    if bits::contains(flips, v) {
                        labels.reverse();
                    }
                    min_rotation(&labels)
                })
                .collect();
            verts.sort();
            let twisted: Vec<bool> = (0..self.num_edges())
                .map(|e| {
                    let [u, v] = ends[e];
                    let toggled = u != v && (bits::contains(flips, u) != bits::contains(flips, v));
                    self.twisted[e] ^ toggled
                })
                .collect();
            let cand = (verts, twisted);
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
        best.expect("at least one flip choice")
    }

    /// Every ribbon graph with edges `a, b, …` (`m` of them) and exactly `v`
    /// vertices, none isolated unless `m = 0`: all arrangements of the `2m`
    /// half-edges into `v` cycles, times all twist signs.
    pub fn enumerate(m: usize, v: usize) -> Vec<RibbonGraph> {
        let labels: Vec<String> = (0..m).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        if m == 0 {
            return if v == 1 {
                vec![Self::from_rotation(labels, vec![], vec![vec![]]).expect("valid")]
            } else {
                vec![]
            };
        }
        let mut out = Vec::new();
        for cycles in cycle_arrangements(2 * m, v) {
            for signs in 0..(1u32 << m) {
                let twisted = (0..m).map(|e| bits::contains(signs, e)).collect();
                out.push(
                    Self::from_rotation(labels.clone(), twisted, cycles.clone()).expect("valid"),
                );
            }
        }
        out
    }
}

/// A spanning ribbon subgraph `(V, E')`.
#[derive(Debug, Clone, Copy)]
pub struct SpanningSubgraph<'a> {
    parent: &'a RibbonGraph,
    edges: Mask,
}

impl SpanningSubgraph<'_> {
    pub fn edges(&self) -> Mask {
        self.edges
    }

    pub fn boundary_components(&self) -> usize {
        self.parent.boundary_components(self.edges)
    }

    pub fn components(&self) -> usize {
        self.parent.components_of(self.edges)
    }

    /// One boundary component per component of the parent graph.
    pub fn is_quasi_tree(&self) -> bool {
        self.boundary_components() == self.parent.num_components()
    }
}

fn min_rotation(seq: &[usize]) -> Vec<usize> {
    (0..seq.len().max(1))
        .map(|i| {
            let mut r = seq.to_vec();
            r.rotate_left(i.min(seq.len()));
            r
        })
        .min()
        .unwrap_or_default()
}

/// All ways to arrange items `0..n` into exactly `k` cycles; each cycle starts
/// with its smallest item and cycles are ordered by that item.
fn cycle_arrangements(n: usize, k: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(i: usize, n: usize, k: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            if cur.len() == k {
                out.push(cur.clone());
            }
            return;
        }
        // the cycles still to be opened need items of their own
        if cur.len() + (n - i) < k {
            return;
        }
        if cur.len() < k {
            cur.push(vec![i]);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
        for c in 0..cur.len() {
            for pos in 1..=cur[c].len() {
                cur[c].insert(pos, i);
                go(i + 1, n, k, cur, out);
                cur[c].remove(pos);
            }
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn count(&mut self) -> usize {
        (0..self.parent.len()).filter(|&x| self.find(x) == x).count()
    }
}
