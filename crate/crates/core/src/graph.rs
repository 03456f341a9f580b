//! Metric-graph engine.
//!
//! A [`MetricGraph`] is a finite set of labeled vertices together with a
//! multiset of undirected, strictly positive-length edges; parallel edges and
//! self-loops are permitted. Queries:
//!
//! * [`MetricGraph::shortest_path`] — Dijkstra over the multigraph.
//! * [`MetricGraph::systole`] — length of the shortest embedded circle plus a
//!   witness, computed as the minimum over edges `e` of
//!   `len(e) + d_{G−e}(u, v)`; self-loops count as circles of their own
//!   length, and a pair of parallel edges forms a two-edge circle.
//! * [`MetricGraph::diameter`] — the exact diameter of the geometric
//!   realization, maximizing over edge-interior points as well as vertices.
//!   For each edge pair the distance is the minimum of the four
//!   endpoint-routed linear expressions (plus the direct route on a shared
//!   edge); the maximum of that concave piecewise-linear function is attained
//!   at a crossing point of the expressions or on the domain boundary, all of
//!   which are enumerated exactly. A sampling fallback at the requested
//!   resolution is folded in as extra candidates.
//! * [`MetricGraph::brute_force_systole`] — an independent oracle that
//!   enumerates every embedded circle explicitly (small graphs only).

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const LEN_EQ_TOL: f64 = 1e-12;

/// One undirected edge of a metric graph.
#[derive(Clone, Debug)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub len: f64,
    pub tag: Option<String>,
}

/// A labeled metric multigraph. Immutable once built; queries are read-only.
#[derive(Clone, Debug, Default)]
pub struct MetricGraph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

/// An embedded circle: `vertices[i]` joins `vertices[i+1 mod k]` by an edge of
/// `lengths[i]`. A self-loop witness has a single vertex and a single length.
#[derive(Clone, Debug, Serialize)]
pub struct CycleWitness {
    pub vertices: Vec<String>,
    pub lengths: Vec<f64>,
    pub tags: Vec<Option<String>>,
    pub total: f64,
}

/// A point of the geometric realization of a graph.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphPoint {
    Vertex { label: String },
    /// Interior point of the edge `u -- v`, `offset` away from `u`.
    Interior {
        u: String,
        v: String,
        offset: f64,
        tag: Option<String>,
    },
}

/// Diameter value together with a realizing pair of points.
#[derive(Clone, Debug, Serialize)]
pub struct DiameterResult {
    pub length: f64,
    pub p: GraphPoint,
    pub q: GraphPoint,
}

impl MetricGraph {
    pub fn new() -> MetricGraph {
        MetricGraph::default()
    }

    /// Declare a vertex; returns its index. Idempotent on the label.
    pub fn add_vertex(&mut self, label: &str) -> usize {
        if let Some(&i) = self.index.get(label) {
            return i;
        }
        let i = self.labels.len();
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), i);
        self.adj.push(Vec::new());
        i
    }

    /// Add an edge between two declared vertices. Parallel edges and
    /// self-loops are allowed; the length must be positive and finite.
    pub fn add_edge(&mut self, u: &str, v: &str, len: f64, tag: Option<&str>) -> Result<usize> {
        let ui = self.require(u)?;
        let vi = self.require(v)?;
        if !(len.is_finite() && len > 0.0) {
            return Err(Error::BadEdgeLength(len));
        }
        let ei = self.edges.len();
        self.edges.push(Edge {
            u: ui,
            v: vi,
            len,
            tag: tag.map(str::to_string),
        });
        self.adj[ui].push(ei);
        if vi != ui {
            self.adj[vi].push(ei);
        }
        Ok(ei)
    }

    /// Add an edge that represents a shared geometric arc: if an edge with the
    /// same endpoints and the same tag already exists it is not duplicated.
    /// Re-adding with a different length is an error.
    pub fn add_edge_deduped(
        &mut self,
        u: &str,
        v: &str,
        len: f64,
        tag: &str,
    ) -> Result<Option<usize>> {
        let ui = self.require(u)?;
        let vi = self.require(v)?;
        for e in &self.edges {
            let same_ends = (e.u == ui && e.v == vi) || (e.u == vi && e.v == ui);
            if same_ends && e.tag.as_deref() == Some(tag) {
                if (e.len - len).abs() > LEN_EQ_TOL {
                    return Err(Error::DedupLengthMismatch {
                        tag: tag.to_string(),
                        existing: e.len,
                        new: len,
                    });
                }
                return Ok(None);
            }
        }
        self.add_edge(u, v, len, Some(tag)).map(Some)
    }

    fn require(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Dijkstra from `src`, optionally treating one edge as removed.
    /// Returns distances and the predecessor edge of each settled vertex.
    fn dijkstra(&self, src: usize, skip_edge: Option<usize>) -> (Vec<f64>, Vec<Option<usize>>) {
        let n = self.labels.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut pred = vec![None; n];
        let mut heap = BinaryHeap::new();
        dist[src] = 0.0;
        heap.push(HeapItem { dist: 0.0, vertex: src });
        while let Some(HeapItem { dist: d, vertex: x }) = heap.pop() {
            if d > dist[x] {
                continue;
            }
            for &ei in &self.adj[x] {
                if Some(ei) == skip_edge {
                    continue;
                }
                let e = &self.edges[ei];
                let y = if e.u == x { e.v } else { e.u };
                let nd = d + e.len;
                if nd < dist[y] {
                    dist[y] = nd;
                    pred[y] = Some(ei);
                    heap.push(HeapItem { dist: nd, vertex: y });
                }
            }
        }
        (dist, pred)
    }

    /// Shortest-path length and one realizing vertex path, or `None` if `v`
    /// is unreachable from `u`.
    pub fn shortest_path(&self, u: &str, v: &str) -> Result<Option<(f64, Vec<String>)>> {
        let ui = self.require(u)?;
        let vi = self.require(v)?;
        let (dist, pred) = self.dijkstra(ui, None);
        if !dist[vi].is_finite() {
            return Ok(None);
        }
        let mut path = vec![vi];
        let mut cur = vi;
        while cur != ui {
            let ei = pred[cur].expect("settled vertex has a predecessor");
            let e = &self.edges[ei];
            cur = if e.u == cur { e.v } else { e.u };
            path.push(cur);
        }
        path.reverse();
        let labels = path.into_iter().map(|i| self.labels[i].clone()).collect();
        Ok(Some((dist[vi], labels)))
    }

    fn witness_from_edges(&self, start: usize, edge_ids: &[usize]) -> CycleWitness {
        let mut vertices = Vec::with_capacity(edge_ids.len());
        let mut lengths = Vec::with_capacity(edge_ids.len());
        let mut tags = Vec::with_capacity(edge_ids.len());
        let mut cur = start;
        for &ei in edge_ids {
            let e = &self.edges[ei];
            vertices.push(self.labels[cur].clone());
            lengths.push(e.len);
            tags.push(e.tag.clone());
            cur = if e.u == cur { e.v } else { e.u };
        }
        debug_assert_eq!(cur, start, "witness edges must close up");
        let total = lengths.iter().sum();
        CycleWitness { vertices, lengths, tags, total }
    }

    /// Shortest embedded circle, or `None` for a forest.
    pub fn systole(&self) -> Option<CycleWitness> {
        let mut best: Option<(f64, usize, Vec<usize>)> = None;
        for (ei, e) in self.edges.iter().enumerate() {
            if let Some((b, _, _)) = &best {
                if e.len >= *b {
                    continue;
                }
            }
            if e.u == e.v {
                best = Some((e.len, e.u, vec![ei]));
                continue;
            }
            let (dist, pred) = self.dijkstra(e.u, Some(ei));
            if !dist[e.v].is_finite() {
                continue;
            }
            let total = e.len + dist[e.v];
            if best.as_ref().is_none_or(|(b, _, _)| total < *b) {
                // path edges u -> v, then e closes v -> u
                let mut path_edges = Vec::new();
                let mut cur = e.v;
                while cur != e.u {
                    let pe = pred[cur].expect("settled vertex has a predecessor");
                    path_edges.push(pe);
                    let pe = &self.edges[pe];
                    cur = if pe.u == cur { pe.v } else { pe.u };
                }
                path_edges.reverse();
                path_edges.push(ei);
                best = Some((total, e.u, path_edges));
            }
        }
        best.map(|(_, start, edges)| self.witness_from_edges(start, &edges))
    }

    /// The link condition for a metric graph: every embedded circle has
    /// length at least `2π`. A circle of length exactly `2π` passes; an
    /// acyclic graph passes vacuously. On failure the violating circle is
    /// returned.
    pub fn is_cat1(&self, tol: f64) -> (bool, Option<CycleWitness>) {
        match self.systole() {
            None => (true, None),
            Some(w) if w.total >= 2.0 * std::f64::consts::PI - tol => (true, Some(w)),
            Some(w) => (false, Some(w)),
        }
    }

    /// Enumerate every embedded circle and return the shortest; testing
    /// oracle, limited to 12 vertices.
    pub fn brute_force_systole(&self) -> Result<Option<CycleWitness>> {
        const MAX: usize = 12;
        let n = self.labels.len();
        if n > MAX {
            return Err(Error::TooManyVertices { got: n, max: MAX });
        }
        let mut best: Option<(f64, usize, Vec<usize>)> = None;
        for (ei, e) in self.edges.iter().enumerate() {
            if e.u == e.v && best.as_ref().is_none_or(|(b, _, _)| e.len < *b) {
                best = Some((e.len, e.u, vec![ei]));
            }
        }
        let mut visited = vec![false; n];
        let mut path = Vec::new();
        for s in 0..n {
            visited[s] = true;
            self.cycle_dfs(s, s, 0.0, &mut visited, &mut path, &mut best);
            visited[s] = false;
        }
        Ok(best.map(|(_, start, edges)| self.witness_from_edges(start, &edges)))
    }

    fn cycle_dfs(
        &self,
        start: usize,
        cur: usize,
        acc: f64,
        visited: &mut Vec<bool>,
        path: &mut Vec<usize>,
        best: &mut Option<(f64, usize, Vec<usize>)>,
    ) {
        for &ei in &self.adj[cur] {
            let e = &self.edges[ei];
            if e.u == e.v || path.contains(&ei) {
                continue;
            }
            let next = if e.u == cur { e.v } else { e.u };
            let len = acc + e.len;
            if best.as_ref().is_some_and(|(b, _, _)| len >= *b) {
                continue;
            }
            if next == start {
                if !path.is_empty() {
                    let mut cycle = path.clone();
                    cycle.push(ei);
                    *best = Some((len, start, cycle));
                }
                continue;
            }
            // restricting to vertices above the start makes it the cycle minimum
            if next < start || visited[next] {
                continue;
            }
            visited[next] = true;
            path.push(ei);
            self.cycle_dfs(start, next, len, visited, path, best);
            path.pop();
            visited[next] = false;
        }
    }

    /// Subdivide one edge into two edges of the same total length, with a new
    /// vertex at the given fraction from the edge's `u` endpoint.
    pub fn subdivide_edge(&self, edge: usize, fraction: f64, new_label: &str) -> Result<MetricGraph> {
        if edge >= self.edges.len() {
            return Err(Error::BadInput(format!("no edge {edge}")));
        }
        if !(fraction > 0.0 && fraction < 1.0) {
            return Err(Error::BadInput(format!("fraction {fraction} not in (0, 1)")));
        }
        let mut g = MetricGraph::new();
        for l in &self.labels {
            g.add_vertex(l);
        }
        let w = new_label;
        if g.index.contains_key(w) {
            return Err(Error::BadInput(format!("label `{w}` already in use")));
        }
        g.add_vertex(w);
        for (ei, e) in self.edges.iter().enumerate() {
            let (u, v) = (self.labels[e.u].as_str(), self.labels[e.v].as_str());
            if ei == edge {
                g.add_edge(u, w, e.len * fraction, e.tag.as_deref())?;
                g.add_edge(w, v, e.len * (1.0 - fraction), e.tag.as_deref())?;
            } else {
                g.add_edge(u, v, e.len, e.tag.as_deref())?;
            }
        }
        Ok(g)
    }

    fn point(&self, edge: usize, offset: f64) -> GraphPoint {
        let e = &self.edges[edge];
        if offset <= LEN_EQ_TOL {
            return GraphPoint::Vertex { label: self.labels[e.u].clone() };
        }
        if offset >= e.len - LEN_EQ_TOL {
            return GraphPoint::Vertex { label: self.labels[e.v].clone() };
        }
        GraphPoint::Interior {
            u: self.labels[e.u].clone(),
            v: self.labels[e.v].clone(),
            offset,
            tag: e.tag.clone(),
        }
    }

    /// Exact diameter of the geometric realization (edge-interior points
    /// included). `resolution` sets the density of the sampling fallback; the
    /// crossing-point analysis makes the result exact independently of it.
    ///
    /// Errors on an empty or disconnected graph.
    pub fn diameter(&self, resolution: u32) -> Result<DiameterResult> {
        let n = self.labels.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let (reach, _) = self.dijkstra(0, None);
        if reach.iter().any(|d| !d.is_finite()) {
            return Err(Error::Disconnected);
        }
        if self.edges.is_empty() {
            let p = GraphPoint::Vertex { label: self.labels[0].clone() };
            return Ok(DiameterResult { length: 0.0, p: p.clone(), q: p });
        }
        let dist: Vec<Vec<f64>> = (0..n).map(|s| self.dijkstra(s, None).0).collect();
        let res = resolution.max(1);
        let mut length = f64::NEG_INFINITY;
        let mut at = (0usize, 0.0, 0usize, 0.0);
        for i in 0..self.edges.len() {
            for j in i..self.edges.len() {
                let (val, s, t) = self.maximize_edge_pair(i, j, &dist, res);
                if val > length {
                    length = val;
                    at = (i, s, j, t);
                }
            }
        }
        Ok(DiameterResult {
            length,
            p: self.point(at.0, at.1),
            q: self.point(at.2, at.3),
        })
    }

    /// Maximize min over the route expressions for points on edges `i`, `j`.
    /// Returns (value, offset on i, offset on j).
    fn maximize_edge_pair(
        &self,
        i: usize,
        j: usize,
        dist: &[Vec<f64>],
        resolution: u32,
    ) -> (f64, f64, f64) {
        let (a, b, el) = {
            let e = &self.edges[i];
            (e.u, e.v, e.len)
        };
        let (c, d, fl) = {
            let f = &self.edges[j];
            (f.u, f.v, f.len)
        };
        // route through a pair of endpoints: exit cost + graph distance + entry cost
        let mut exprs = vec![
            Lin { c0: dist[a][c], gs: 1.0, gt: 1.0 },
            Lin { c0: dist[a][d] + fl, gs: 1.0, gt: -1.0 },
            Lin { c0: dist[b][c] + el, gs: -1.0, gt: 1.0 },
            Lin { c0: dist[b][d] + el + fl, gs: -1.0, gt: -1.0 },
        ];
        let same = i == j;
        if same {
            // direct route inside the shared edge, on the half-domain t >= s
            exprs.push(Lin { c0: 0.0, gs: -1.0, gt: 1.0 });
        }
        // domain boundary lines (A s + B t = C) for the rectangle, or for the
        // triangle 0 <= s <= t <= L on a shared edge
        let bounds: Vec<(f64, f64, f64)> = if same {
            vec![(1.0, 0.0, 0.0), (0.0, 1.0, el), (1.0, -1.0, 0.0)]
        } else {
            vec![
                (1.0, 0.0, 0.0),
                (1.0, 0.0, el),
                (0.0, 1.0, 0.0),
                (0.0, 1.0, fl),
            ]
        };
        let inside = |s: f64, t: f64| -> Option<(f64, f64)> {
            const EPS: f64 = 1e-9;
            if s < -EPS || s > el + EPS || t < -EPS || t > fl + EPS {
                return None;
            }
            let (s, t) = (s.clamp(0.0, el), t.clamp(0.0, fl));
            if same {
                if t < s - EPS {
                    return None;
                }
                let t = t.max(s);
                return Some((s, t));
            }
            Some((s, t))
        };
        let eval = |s: f64, t: f64| -> f64 {
            exprs
                .iter()
                .map(|l| l.c0 + l.gs * s + l.gt * t)
                .fold(f64::INFINITY, f64::min)
        };

        let mut cands: Vec<(f64, f64)> = Vec::with_capacity(128);
        // corners
        if same {
            cands.extend([(0.0, 0.0), (0.0, el), (el, el)]);
        } else {
            cands.extend([(0.0, 0.0), (el, 0.0), (0.0, fl), (el, fl)]);
        }
        // crossing lines of expression pairs
        let mut lines: Vec<(f64, f64, f64)> = Vec::new();
        for p in 0..exprs.len() {
            for q in (p + 1)..exprs.len() {
                let al = exprs[p].gs - exprs[q].gs;
                let bl = exprs[p].gt - exprs[q].gt;
                let cl = exprs[q].c0 - exprs[p].c0;
                if al.abs() > 1e-12 || bl.abs() > 1e-12 {
                    lines.push((al, bl, cl));
                }
            }
        }
        // crossing-line intersections with each other and with the boundary
        for p in 0..lines.len() {
            for q in (p + 1)..lines.len() {
                if let Some(pt) = solve2(lines[p], lines[q]) {
                    cands.push(pt);
                }
            }
            for &bnd in &bounds {
                if let Some(pt) = solve2(lines[p], bnd) {
                    cands.push(pt);
                }
            }
        }
        // sampling fallback
        let r = resolution as f64;
        for ks in 0..=resolution {
            let s = el * ks as f64 / r;
            for kt in 0..=resolution {
                cands.push((s, fl * kt as f64 / r));
            }
        }

        let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
        for (s, t) in cands {
            if let Some((s, t)) = inside(s, t) {
                let v = eval(s, t);
                if v > best.0 {
                    best = (v, s, t);
                }
            }
        }
        best
    }

    /// Parse the graph JSON format:
    /// `{"vertices": [...], "edges": [{"u": .., "v": .., "len_deg": .., "tag": ..}, ...]}`
    /// with exactly one of `len_deg` / `len_rad` per edge.
    pub fn from_json(text: &str) -> Result<MetricGraph> {
        let doc: GraphDoc = serde_json::from_str(text)?;
        let mut g = MetricGraph::new();
        for v in &doc.vertices {
            if g.index.contains_key(v) {
                return Err(Error::BadInput(format!("duplicate vertex `{v}`")));
            }
            g.add_vertex(v);
        }
        for (k, e) in doc.edges.iter().enumerate() {
            let len = match (e.len_deg, e.len_rad) {
                (Some(d), None) => d.to_radians(),
                (None, Some(r)) => r,
                _ => {
                    return Err(Error::BadInput(format!(
                        "edge {k}: exactly one of len_deg / len_rad is required"
                    )))
                }
            };
            g.add_edge(&e.u, &e.v, len, e.tag.as_deref())?;
        }
        Ok(g)
    }

    /// Emit the graph JSON format with degree-valued lengths.
    pub fn to_json(&self) -> String {
        let doc = GraphDoc {
            vertices: self.labels.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    u: self.labels[e.u].clone(),
                    v: self.labels[e.v].clone(),
                    len_deg: Some(e.len.to_degrees()),
                    len_rad: None,
                    tag: e.tag.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("graph document serializes")
    }
}

#[derive(Clone, Copy)]
struct Lin {
    c0: f64,
    gs: f64,
    gt: f64,
}

/// Intersection of two lines `A s + B t = C`, or `None` if near-parallel.
fn solve2(l1: (f64, f64, f64), l2: (f64, f64, f64)) -> Option<(f64, f64)> {
    let det = l1.0 * l2.1 - l2.0 * l1.1;
    if det.abs() < 1e-12 {
        return None;
    }
    let s = (l1.2 * l2.1 - l2.2 * l1.1) / det;
    let t = (l1.0 * l2.2 - l2.0 * l1.2) / det;
    Some((s, t))
}

struct HeapItem {
    dist: f64,
    vertex: usize,
}

impl PartialEq for HeapItem {
    fn eq(&self, other: &Self) -> bool {
        self.dist == other.dist && self.vertex == other.vertex
    }
}
impl Eq for HeapItem {}
impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // reversed: BinaryHeap is a max-heap, we need the closest vertex first
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    vertices: Vec<String>,
    edges: Vec<EdgeDoc>,
}

#[derive(Serialize, Deserialize)]
struct EdgeDoc {
    u: String,
    v: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    len_deg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    len_rad: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tag: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn deg(d: f64) -> f64 {
        d.to_radians()
    }

    fn square() -> MetricGraph {
        let mut g = MetricGraph::new();
        for v in ["a", "b", "c", "d"] {
            g.add_vertex(v);
        }
        for (u, v) in [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")] {
            g.add_edge(u, v, deg(90.0), None).unwrap();
        }
        g
    }

    #[test]
    fn shortest_path_square_diagonal() {
        let g = square();
        let (len, path) = g.shortest_path("a", "c").unwrap().unwrap();
        assert_abs_diff_eq!(len, PI, epsilon = 1e-12);
        assert_eq!(path.len(), 3);
    }

    #[test]
    fn shortest_path_prefers_short_parallel() {
        let mut g = MetricGraph::new();
        g.add_vertex("u");
        g.add_vertex("v");
        g.add_edge("u", "v", 3.0, None).unwrap();
        g.add_edge("u", "v", 1.0, None).unwrap();
        let (len, _) = g.shortest_path("u", "v").unwrap().unwrap();
        assert_eq!(len, 1.0);
    }

    #[test]
    fn shortest_path_unreachable_and_unknown() {
        let mut g = MetricGraph::new();
        g.add_vertex("u");
        g.add_vertex("v");
        assert!(g.shortest_path("u", "v").unwrap().is_none());
        assert!(matches!(
            g.shortest_path("u", "w"),
            Err(Error::UnknownVertex(_))
        ));
        assert!(matches!(
            g.add_edge("u", "w", 1.0, None),
            Err(Error::UnknownVertex(_))
        ));
    }

    #[test]
    fn rejects_bad_lengths() {
        let mut g = MetricGraph::new();
        g.add_vertex("u");
        g.add_vertex("v");
        for bad in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(g.add_edge("u", "v", bad, None).is_err());
        }
    }

    #[test]
    fn dedup_skips_same_arc() {
        let mut g = MetricGraph::new();
        g.add_vertex("u");
        g.add_vertex("v");
        assert!(g.add_edge_deduped("u", "v", PI, "chord:u").unwrap().is_some());
        assert!(g.add_edge_deduped("v", "u", PI, "chord:u").unwrap().is_none());
        assert_eq!(g.edge_count(), 1);
        assert!(g.add_edge_deduped("u", "v", 1.0, "chord:u").is_err());
        // distinct tags stay parallel
        assert!(g.add_edge_deduped("u", "v", PI, "other").unwrap().is_some());
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn systole_triangle() {
        let mut g = MetricGraph::new();
        for v in ["a", "b", "c"] {
            g.add_vertex(v);
        }
        g.add_edge("a", "b", deg(90.0), None).unwrap();
        g.add_edge("b", "c", deg(90.0), None).unwrap();
        g.add_edge("c", "a", deg(90.0), None).unwrap();
        let w = g.systole().unwrap();
        assert_abs_diff_eq!(w.total, deg(270.0), epsilon = 1e-12);
        assert_eq!(w.vertices.len(), 3);
        let (ok, witness) = g.is_cat1(1e-9);
        assert!(!ok);
        assert!(witness.is_some());
    }

    #[test]
    fn systole_self_loop_and_parallels() {
        let mut g = MetricGraph::new();
        g.add_vertex("x");
        g.add_vertex("y");
        g.add_edge("x", "x", 5.0, None).unwrap();
        g.add_edge("x", "y", 2.0, None).unwrap();
        g.add_edge("x", "y", 2.5, None).unwrap();
        let w = g.systole().unwrap();
        assert_abs_diff_eq!(w.total, 4.5, epsilon = 1e-12);
        assert_eq!(w.vertices.len(), 2);

        let bf = g.brute_force_systole().unwrap().unwrap();
        assert_abs_diff_eq!(bf.total, 4.5, epsilon = 1e-12);
    }

    #[test]
    fn systole_none_for_forest() {
        let mut g = MetricGraph::new();
        for v in ["a", "b", "c"] {
            g.add_vertex(v);
        }
        g.add_edge("a", "b", 1.0, None).unwrap();
        g.add_edge("b", "c", 1.0, None).unwrap();
        assert!(g.systole().is_none());
        assert!(g.brute_force_systole().unwrap().is_none());
        assert!(g.is_cat1(0.0).0);
    }

    #[test]
    fn brute_force_k4_unit() {
        let mut g = MetricGraph::new();
        for v in ["a", "b", "c", "d"] {
            g.add_vertex(v);
        }
        for (u, v) in [("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")] {
            g.add_edge(u, v, 1.0, None).unwrap();
        }
        assert_abs_diff_eq!(g.brute_force_systole().unwrap().unwrap().total, 3.0);
        assert_abs_diff_eq!(g.systole().unwrap().total, 3.0);
    }

    #[test]
    fn brute_force_self_loop() {
        let mut g = MetricGraph::new();
        g.add_vertex("x");
        g.add_edge("x", "x", 5.0, None).unwrap();
        assert_abs_diff_eq!(g.brute_force_systole().unwrap().unwrap().total, 5.0);
        assert_abs_diff_eq!(g.systole().unwrap().total, 5.0);
    }

    #[test]
    fn brute_force_vertex_cap() {
        let mut g = MetricGraph::new();
        for i in 0..13 {
            g.add_vertex(&format!("v{i}"));
        }
        assert!(matches!(
            g.brute_force_systole(),
            Err(Error::TooManyVertices { .. })
        ));
    }

    fn two_arc_circle() -> MetricGraph {
        let mut g = MetricGraph::new();
        g.add_vertex("p");
        g.add_vertex("q");
        g.add_edge("p", "q", PI, Some("east")).unwrap();
        g.add_edge("p", "q", PI, Some("west")).unwrap();
        g
    }

    #[test]
    fn circle_of_two_pi_is_cat1_boundary() {
        let g = two_arc_circle();
        let w = g.systole().unwrap();
        assert_abs_diff_eq!(w.total, 2.0 * PI, epsilon = 1e-15);
        assert!(g.is_cat1(1e-9).0);
    }

    #[test]
    fn diameter_circle_is_antipodal() {
        let g = two_arc_circle();
        let d = g.diameter(8).unwrap();
        assert_abs_diff_eq!(d.length, PI, epsilon = 1e-9);

        // unequal arcs: the vertices are only π/2 apart, so the realizing
        // antipodal pair must involve edge-interior points
        let mut g = MetricGraph::new();
        g.add_vertex("p");
        g.add_vertex("q");
        g.add_edge("p", "q", PI / 2.0, Some("short")).unwrap();
        g.add_edge("p", "q", 1.5 * PI, Some("long")).unwrap();
        let d = g.diameter(8).unwrap();
        assert_abs_diff_eq!(d.length, PI, epsilon = 1e-9);
        assert!(
            matches!(d.p, GraphPoint::Interior { .. })
                || matches!(d.q, GraphPoint::Interior { .. })
        );
    }

    #[test]
    fn diameter_single_edge_and_loop() {
        let mut g = MetricGraph::new();
        g.add_vertex("u");
        g.add_vertex("v");
        g.add_edge("u", "v", 10.0, None).unwrap();
        assert_abs_diff_eq!(g.diameter(4).unwrap().length, 10.0, epsilon = 1e-12);

        let mut g = MetricGraph::new();
        g.add_vertex("u");
        g.add_edge("u", "u", 6.0, None).unwrap();
        assert_abs_diff_eq!(g.diameter(4).unwrap().length, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn diameter_errors() {
        let g = MetricGraph::new();
        assert!(matches!(g.diameter(4), Err(Error::EmptyGraph)));
        let mut g = MetricGraph::new();
        g.add_vertex("u");
        g.add_vertex("v");
        assert!(matches!(g.diameter(4), Err(Error::Disconnected)));
    }

    #[test]
    fn diameter_interior_beats_vertices() {
        // star with a chord: the farthest pair involves the chord midpoint
        let mut g = MetricGraph::new();
        for v in ["c", "x", "y", "w"] {
            g.add_vertex(v);
        }
        g.add_edge("c", "x", 1.0, None).unwrap();
        g.add_edge("c", "y", 1.0, None).unwrap();
        g.add_edge("c", "w", 1.0, None).unwrap();
        g.add_edge("x", "y", 2.0, Some("chord")).unwrap();
        // chord midpoint is 1 + 2 = 3 away from w through either chord end
        let d = g.diameter(4).unwrap();
        assert_abs_diff_eq!(d.length, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn subdivision_preserves_systole() {
        let mut g = MetricGraph::new();
        for v in ["a", "b", "c"] {
            g.add_vertex(v);
        }
        g.add_edge("a", "b", 1.0, None).unwrap();
        g.add_edge("b", "c", 2.0, None).unwrap();
        g.add_edge("c", "a", 1.5, None).unwrap();
        g.add_edge("a", "a", 9.0, None).unwrap();
        let before = g.systole().unwrap().total;
        for e in 0..g.edge_count() {
            let sub = g.subdivide_edge(e, 0.3, "w").unwrap();
            assert_abs_diff_eq!(sub.systole().unwrap().total, before, epsilon = 1e-12);
        }
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{
            "vertices": ["a+", "a-", "b+"],
            "edges": [
                {"u": "a+", "v": "b+", "len_deg": 98.213, "tag": "alpha"},
                {"u": "a+", "v": "a-", "len_rad": 3.141592653589793}
            ]
        }"#;
        let g = MetricGraph::from_json(text).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_abs_diff_eq!(g.edges()[0].len, deg(98.213), epsilon = 1e-15);
        assert_abs_diff_eq!(g.edges()[1].len, PI, epsilon = 1e-15);

        let back = MetricGraph::from_json(&g.to_json()).unwrap();
        for (e1, e2) in g.edges().iter().zip(back.edges()) {
            assert_abs_diff_eq!(e1.len, e2.len, epsilon = 1e-12);
        }
    }

    #[test]
    fn json_rejects_ambiguous_lengths() {
        let both = r#"{"vertices":["a","b"],"edges":[{"u":"a","v":"b","len_deg":1.0,"len_rad":1.0}]}"#;
        assert!(MetricGraph::from_json(both).is_err());
        let neither = r#"{"vertices":["a","b"],"edges":[{"u":"a","v":"b"}]}"#;
        assert!(MetricGraph::from_json(neither).is_err());
        let unknown = r#"{"vertices":["a"],"edges":[{"u":"a","v":"b","len_deg":1.0}]}"#;
        assert!(MetricGraph::from_json(unknown).is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_graph() -> impl Strategy<Value = MetricGraph> {
            (2usize..7, proptest::collection::vec((0usize..6, 0usize..6, 0.1f64..4.0), 1..12))
                .prop_map(|(n, raw)| {
                    let mut g = MetricGraph::new();
                    for i in 0..n {
                        g.add_vertex(&format!("v{i}"));
                    }
                    for (u, v, len) in raw {
                        let (u, v) = (u % n, v % n);
                        g.add_edge(&format!("v{u}"), &format!("v{v}"), len, None).unwrap();
                    }
                    g
                })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn systole_matches_oracle(g in arb_graph()) {
                let fast = g.systole().map(|w| w.total);
                let slow = g.brute_force_systole().unwrap().map(|w| w.total);
                match (fast, slow) {
                    (None, None) => {}
                    (Some(a), Some(b)) => prop_assert!((a - b).abs() < 1e-9),
                    other => prop_assert!(false, "disagree: {other:?}"),
                }
            }

            #[test]
            fn subdivision_keeps_systole(g in arb_graph(), e in 0usize..12, frac in 0.05f64..0.95) {
                if g.edge_count() == 0 { return Ok(()); }
                let e = e % g.edge_count();
                let before = g.systole().map(|w| w.total);
                let after = g.subdivide_edge(e, frac, "sub").unwrap().systole().map(|w| w.total);
                match (before, after) {
                    (None, None) => {}
                    (Some(a), Some(b)) => prop_assert!((a - b).abs() < 1e-9),
                    other => prop_assert!(false, "disagree: {other:?}"),
                }
            }
        }
    }
}
