//! Constructors for the metric graphs of interest.
//!
//! * [`block_link`] — the schematic link of a single building block: the
//!   complete graph on `{x+, x-, y+, y-}` with same-sign edges of length α,
//!   mixed-sign edges of length β, and the two antipodal chords of length π.
//!   For `m = 2` (the torus block) α = β = π/2, so the four short edges form
//!   the four-arc circle `x+ – y+ – x- – y-`.
//! * [`combined_link`] — the union of block links over all finite relation
//!   pairs of a defining graph, identifying same-label vertices; each
//!   generator's π chord is shared between its blocks and emitted once.
//! * [`l_graph`] — the two-circle family: circles of circumference 2π sharing
//!   an arc of length π, marked points `r±`, `s±`, and up to two π-arcs per
//!   antipodal pair.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Deserialize;

use crate::dihedral::{symmetric_delta, DihedralBlock};
use crate::graph::MetricGraph;
use crate::{Angle, Error, Result};

/// Relator index of a generator pair: finite `m ≥ 2`, or no relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelatorIndex {
    Finite(u32),
    Infinite,
}

fn validate_label(label: &str) -> Result<()> {
    if label.is_empty() || label.contains([',', '+', '-']) {
        return Err(Error::BadGeneratorLabel(label.to_string()));
    }
    Ok(())
}

fn pair_key(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// Generators and relator indices of an Artin defining graph. Pairs without
/// an entry have no relation between them.
#[derive(Clone, Debug, Default)]
pub struct ArtinDefiningGraph {
    generators: Vec<String>,
    relations: BTreeMap<(String, String), u32>,
}

impl ArtinDefiningGraph {
    pub fn new<S: AsRef<str>>(generators: &[S]) -> Result<ArtinDefiningGraph> {
        let mut g = ArtinDefiningGraph::default();
        for s in generators {
            let s = s.as_ref();
            validate_label(s)?;
            if g.generators.iter().any(|x| x == s) {
                return Err(Error::DuplicateGenerator(s.to_string()));
            }
            g.generators.push(s.to_string());
        }
        Ok(g)
    }

    pub fn set_relation(&mut self, a: &str, b: &str, m: u32) -> Result<()> {
        if m < 2 {
            return Err(Error::RelatorIndexTooSmall { got: m, min: 2 });
        }
        for x in [a, b] {
            if !self.generators.iter().any(|g| g == x) {
                return Err(Error::UnknownGenerator(x.to_string()));
            }
        }
        if a == b {
            return Err(Error::SelfRelation(a.to_string()));
        }
        self.relations.insert(pair_key(a, b), m);
        Ok(())
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relator_index(&self, a: &str, b: &str) -> RelatorIndex {
        match self.relations.get(&pair_key(a, b)) {
            Some(&m) => RelatorIndex::Finite(m),
            None => RelatorIndex::Infinite,
        }
    }

    /// Finite relation pairs in deterministic (sorted) order.
    pub fn finite_pairs(&self) -> impl Iterator<Item = (&str, &str, u32)> {
        self.relations
            .iter()
            .map(|((a, b), &m)| (a.as_str(), b.as_str(), m))
    }

    /// The three-generator graph `a, b, c` with indices `m = m_ab`,
    /// `n = m_bc` and `p = m_ac`.
    pub fn triangle(m: u32, n: u32, p: u32) -> Result<ArtinDefiningGraph> {
        let mut g = ArtinDefiningGraph::new(&["a", "b", "c"])?;
        g.set_relation("a", "b", m)?;
        g.set_relation("b", "c", n)?;
        g.set_relation("a", "c", p)?;
        Ok(g)
    }

    /// Parse the defining-graph JSON format:
    /// `{"generators": [...], "relations": [{"pair": ["a","b"], "m": 5}, ...]}`.
    pub fn from_json(text: &str) -> Result<ArtinDefiningGraph> {
        #[derive(Deserialize)]
        struct Doc {
            generators: Vec<String>,
            #[serde(default)]
            relations: Vec<Rel>,
        }
        #[derive(Deserialize)]
        struct Rel {
            pair: [String; 2],
            m: u32,
        }
        let doc: Doc = serde_json::from_str(text)?;
        let mut g = ArtinDefiningGraph::new(&doc.generators)?;
        for r in &doc.relations {
            if g.relations.contains_key(&pair_key(&r.pair[0], &r.pair[1])) {
                return Err(Error::BadInput(format!(
                    "duplicate relation for pair {{{}, {}}}",
                    r.pair[0], r.pair[1]
                )));
            }
            g.set_relation(&r.pair[0], &r.pair[1], r.m)?;
        }
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        let relations: Vec<serde_json::Value> = self
            .relations
            .iter()
            .map(|((a, b), m)| serde_json::json!({"pair": [a, b], "m": m}))
            .collect();
        serde_json::to_string_pretty(&serde_json::json!({
            "generators": self.generators,
            "relations": relations,
        }))
        .expect("defining graph serializes")
    }
}

/// Per-relation choice of the block parameter δ. Pairs of index `m ≥ 3` carry
/// an explicit δ; pairs of index 2 always use the fixed right-angle block
/// (δ = π/4), and explicit entries for them are rejected.
#[derive(Clone, Debug, Default)]
pub struct DeltaAssignment {
    deltas: BTreeMap<(String, String), Angle>,
}

impl DeltaAssignment {
    pub fn new() -> DeltaAssignment {
        DeltaAssignment::default()
    }

    pub fn set(&mut self, a: &str, b: &str, delta: Angle) -> &mut Self {
        self.deltas.insert(pair_key(a, b), delta);
        self
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, Angle)> {
        self.deltas.iter().map(|((a, b), &d)| (a.as_str(), b.as_str(), d))
    }

    /// The symmetric model: δ with α = β for every `m ≥ 3` pair.
    pub fn symmetric(g: &ArtinDefiningGraph) -> Result<DeltaAssignment> {
        let mut d = DeltaAssignment::new();
        for (a, b, m) in g.finite_pairs() {
            if m >= 3 {
                d.set(a, b, symmetric_delta(m)?);
            }
        }
        Ok(d)
    }

    /// The wide-α model: α = 163° for index 4, α = 179° for indices ≥ 5
    /// (both chosen so that β stays comfortably above a right angle), and the
    /// symmetric solution for index 3.
    pub fn wide(g: &ArtinDefiningGraph) -> Result<DeltaAssignment> {
        let mut d = DeltaAssignment::new();
        for (a, b, m) in g.finite_pairs() {
            match m {
                2 => {}
                3 => {
                    d.set(a, b, symmetric_delta(3)?);
                }
                4 => {
                    d.set(a, b, Angle::from_degrees(81.5));
                }
                _ => {
                    d.set(a, b, Angle::from_degrees(89.5));
                }
            }
        }
        Ok(d)
    }

    /// δ for one pair of known index. Index-2 pairs get the fixed π/4.
    pub fn delta_for(&self, a: &str, b: &str, m: u32) -> Result<Angle> {
        if m == 2 {
            return Ok(Angle::QUARTER_PI);
        }
        self.deltas
            .get(&pair_key(a, b))
            .copied()
            .ok_or_else(|| Error::MissingDelta(a.to_string(), b.to_string()))
    }

    /// Check that the assignment covers exactly the `m ≥ 3` finite pairs of
    /// the graph, with every δ in the open interval `(0, π/2)`.
    pub fn validate_against(&self, g: &ArtinDefiningGraph) -> Result<()> {
        for (a, b, m) in g.finite_pairs() {
            match (m, self.deltas.get(&pair_key(a, b))) {
                (2, Some(_)) => {
                    return Err(Error::UnexpectedDelta(
                        a.to_string(),
                        b.to_string(),
                        "index-2 pairs use the fixed right-angle block".into(),
                    ))
                }
                (2, None) => {}
                (_, Some(&d)) => {
                    let r = d.rad();
                    if !(r > 0.0 && r < std::f64::consts::FRAC_PI_2) {
                        return Err(Error::DeltaOutOfRange { got: r });
                    }
                }
                (_, None) => {
                    return Err(Error::MissingDelta(a.to_string(), b.to_string()))
                }
            }
        }
        for (a, b) in self.deltas.keys() {
            match g.relator_index(a, b) {
                RelatorIndex::Finite(m) if m >= 3 => {}
                _ => {
                    return Err(Error::UnexpectedDelta(
                        a.clone(),
                        b.clone(),
                        "pair has no finite relation of index >= 3".into(),
                    ))
                }
            }
        }
        Ok(())
    }

    /// Blocks per finite pair, in deterministic order.
    pub fn blocks(&self, g: &ArtinDefiningGraph) -> Result<Vec<(String, String, DihedralBlock)>> {
        self.validate_against(g)?;
        g.finite_pairs()
            .map(|(a, b, m)| {
                let block = DihedralBlock::new(m, self.delta_for(a, b, m)?)?;
                Ok((a.to_string(), b.to_string(), block))
            })
            .collect()
    }

    /// True when every block has both α and β at least π/2, the hypothesis
    /// of the triples reduction.
    pub fn is_triples_eligible(&self, g: &ArtinDefiningGraph) -> Result<bool> {
        let half = std::f64::consts::FRAC_PI_2 - 1e-12;
        Ok(self
            .blocks(g)?
            .iter()
            .all(|(_, _, b)| b.alpha().rad() >= half && b.beta().rad() >= half))
    }

    /// Parse the δ JSON format: either `{"auto": "symmetric"}` (or `"wide"`)
    /// or `{"deltas_deg": {"a,b": 59.55, ...}}`, resolved against a graph.
    pub fn from_json(text: &str, g: &ArtinDefiningGraph) -> Result<DeltaAssignment> {
        #[derive(Deserialize)]
        struct Doc {
            #[serde(default)]
            auto: Option<String>,
            #[serde(default)]
            deltas_deg: Option<BTreeMap<String, f64>>,
        }
        let doc: Doc = serde_json::from_str(text)?;
        let d = match (doc.auto, doc.deltas_deg) {
            (Some(mode), None) => match mode.as_str() {
                "symmetric" => DeltaAssignment::symmetric(g)?,
                "wide" => DeltaAssignment::wide(g)?,
                other => {
                    return Err(Error::BadInput(format!(
                        "unknown auto delta mode `{other}` (expected `symmetric` or `wide`)"
                    )))
                }
            },
            (None, Some(map)) => {
                let mut d = DeltaAssignment::new();
                for (key, deg) in map {
                    let mut parts = key.splitn(2, ',');
                    let (a, b) = match (parts.next(), parts.next()) {
                        (Some(a), Some(b)) => (a.trim().to_string(), b.trim().to_string()),
                        _ => {
                            return Err(Error::BadInput(format!(
                                "delta key `{key}` is not of the form `a,b`"
                            )))
                        }
                    };
                    d.set(&a, &b, Angle::from_degrees(deg));
                }
                d
            }
            _ => {
                return Err(Error::BadInput(
                    "delta document needs exactly one of `auto` / `deltas_deg`".into(),
                ))
            }
        };
        d.validate_against(g)?;
        Ok(d)
    }

    pub fn to_json(&self) -> String {
        let map: BTreeMap<String, f64> = self
            .deltas
            .iter()
            .map(|((a, b), d)| (format!("{a},{b}"), d.deg()))
            .collect();
        serde_json::to_string_pretty(&serde_json::json!({ "deltas_deg": map }))
            .expect("delta assignment serializes")
    }
}

fn vertex_labels(x: &str) -> (String, String) {
    (format!("{x}+"), format!("{x}-"))
}

fn add_block_edges(g: &mut MetricGraph, block: &DihedralBlock, x: &str, y: &str) -> Result<()> {
    let (xp, xm) = vertex_labels(x);
    let (yp, ym) = vertex_labels(y);
    let (a, b) = (block.alpha().rad(), block.beta().rad());
    let (ka, kb) = if x <= y {
        (format!("alpha:{x},{y}"), format!("beta:{x},{y}"))
    } else {
        (format!("alpha:{y},{x}"), format!("beta:{y},{x}"))
    };
    g.add_edge(&xp, &yp, a, Some(&ka))?;
    g.add_edge(&xm, &ym, a, Some(&ka))?;
    g.add_edge(&xp, &ym, b, Some(&kb))?;
    g.add_edge(&xm, &yp, b, Some(&kb))?;
    g.add_edge_deduped(&xp, &xm, PI, &format!("chord:{x}"))?;
    g.add_edge_deduped(&yp, &ym, PI, &format!("chord:{y}"))?;
    Ok(())
}

/// The schematic link of one building block on generators `x`, `y`.
///
/// `m ≥ 3` takes any δ in `(0, π/2)`; `m = 2` admits only the fixed δ = π/4,
/// which makes the generator angle a right angle.
pub fn block_link(m: u32, delta: Angle, x: &str, y: &str) -> Result<MetricGraph> {
    validate_label(x)?;
    validate_label(y)?;
    if x == y {
        return Err(Error::SelfRelation(x.to_string()));
    }
    if m == 2 && (delta.rad() - std::f64::consts::FRAC_PI_4).abs() > 1e-12 {
        return Err(Error::AngleOutOfRange(format!(
            "index-2 block has the fixed delta = 45°, got {}°",
            delta.deg()
        )));
    }
    let block = DihedralBlock::new(m, delta)?;
    let mut g = MetricGraph::new();
    for lab in [x, y] {
        let (p, mnus) = vertex_labels(lab);
        g.add_vertex(&p);
        g.add_vertex(&mnus);
    }
    add_block_edges(&mut g, &block, x, y)?;
    Ok(g)
}

/// The combined vertex link of a defining graph under a δ-assignment: the
/// union of block links over all finite pairs, with shared antipodal chords
/// emitted once. Generators without a finite relation contribute bare `x±`
/// vertices.
pub fn combined_link(g: &ArtinDefiningGraph, d: &DeltaAssignment) -> Result<MetricGraph> {
    let blocks = d.blocks(g)?;
    let mut mg = MetricGraph::new();
    for x in g.generators() {
        let (p, m) = vertex_labels(x);
        mg.add_vertex(&p);
        mg.add_vertex(&m);
    }
    for (x, y, block) in &blocks {
        add_block_edges(&mut mg, block, x, y)?;
    }
    Ok(mg)
}

/// Parameters of the two-circle family: marked-point offsets ρ, σ and the
/// number of π-arcs on each antipodal pair.
#[derive(Clone, Copy, Debug)]
pub struct LGraphParams {
    pub rho: Angle,
    pub sigma: Angle,
    pub n_r: u8,
    pub n_s: u8,
}

impl LGraphParams {
    pub fn new(rho: Angle, sigma: Angle, n_r: u8, n_s: u8) -> Result<LGraphParams> {
        let (r, s) = (rho.rad(), sigma.rad());
        if !(r > 0.0 && s > 0.0 && r + s < PI) {
            return Err(Error::BadLGraphParams(format!(
                "need rho > 0, sigma > 0 and rho + sigma < 180°, got rho = {}°, sigma = {}°",
                rho.deg(),
                sigma.deg()
            )));
        }
        if n_r > 2 || n_s > 2 {
            return Err(Error::BadLGraphParams(format!(
                "arc counts must be 0, 1 or 2, got n_r = {n_r}, n_s = {n_s}"
            )));
        }
        Ok(LGraphParams { rho, sigma, n_r, n_s })
    }
}

/// Build the two-circle graph.
///
/// Circles `C_r` and `C_s`, each of circumference 2π, share an arc of length
/// π with endpoints `z+`, `z-`. The shared arc carries `r+` at distance ρ
/// from `z+` and `s-` at distance σ from `z-`; the free arc of `C_r` carries
/// `r-` at distance ρ from `z-`; the free arc of `C_s` carries `s+` at
/// distance σ from `z+`. `n_r` π-arcs join `r+` to `r-` and `n_s` join `s+`
/// to `s-`. The four cross distances then form the matrix
/// `(ρ+σ, π−(ρ+σ); π−|ρ−σ|, ρ+σ)`.
pub fn l_graph(p: &LGraphParams) -> Result<MetricGraph> {
    LGraphParams::new(p.rho, p.sigma, p.n_r, p.n_s)?;
    let (rho, sigma) = (p.rho.rad(), p.sigma.rad());
    let mut g = MetricGraph::new();
    for v in ["z+", "z-", "r+", "r-", "s+", "s-"] {
        g.add_vertex(v);
    }
    g.add_edge("z+", "r+", rho, Some("shared_arc"))?;
    g.add_edge("r+", "s-", PI - rho - sigma, Some("shared_arc"))?;
    g.add_edge("s-", "z-", sigma, Some("shared_arc"))?;
    g.add_edge("z+", "r-", PI - rho, Some("free_arc_r"))?;
    g.add_edge("r-", "z-", rho, Some("free_arc_r"))?;
    g.add_edge("z+", "s+", sigma, Some("free_arc_s"))?;
    g.add_edge("s+", "z-", PI - sigma, Some("free_arc_s"))?;
    for k in 0..p.n_r {
        g.add_edge("r+", "r-", PI, Some(&format!("pi_arc_r{k}")))?;
    }
    for k in 0..p.n_s {
        g.add_edge("s+", "s-", PI, Some(&format!("pi_arc_s{k}")))?;
    }
    Ok(g)
}

/// Closed form for the diameter of the two-circle graph with one π-arc on
/// each side: `π + min{ρ + σ, π − ρ, π − σ}`.
pub fn l_graph_diameter_formula(rho: Angle, sigma: Angle) -> Result<f64> {
    LGraphParams::new(rho, sigma, 1, 1)?;
    let (r, s) = (rho.rad(), sigma.rad());
    Ok(PI + (r + s).min(PI - r).min(PI - s))
}
