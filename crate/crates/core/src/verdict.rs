//! Top-level decision procedures.
//!
//! * [`check`] — build the combined link and test its systole against 2π.
//! * [`triples_check`] — the reduction valid when every block angle is at
//!   least π/2: only triangles spanning three mutually related generators can
//!   be short, so it suffices to bound the realizable sign patterns (all-α,
//!   and α on one block with β on the other two).
//! * [`enumerate_amn2`] — least index `m` making the triangle group with
//!   indices `(m, n, 2)` pass, per `n`, under the symmetric model.
//! * [`excluded_triples`] — all finite index triples up to a bound whose
//!   three-block combined link fails under the symmetric model.
//! * [`solve_deltas`] — grid search plus local refinement over δ-assignments
//!   maximizing the systole slack, with an envelope scan as infeasibility
//!   evidence for all-equal triples.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::dihedral::{beta_of, symmetric_alpha};
use crate::graph::CycleWitness;
use crate::link::{combined_link, ArtinDefiningGraph, DeltaAssignment, RelatorIndex};
use crate::{Angle, Error, Result, DEFAULT_TOL};

const TWO_PI: f64 = 2.0 * PI;

/// Outcome of a link-condition check.
#[derive(Clone, Debug)]
pub struct CurvatureVerdict {
    pub pass: bool,
    /// Shortest cycle length found; `None` when the link is acyclic.
    pub systole: Option<f64>,
    /// The shortest cycle; the violating circle whenever `pass` is false.
    pub witness: Option<CycleWitness>,
    pub deltas_used: DeltaAssignment,
}

/// Decide the link condition for the combined link of `g` under `d`.
pub fn check(g: &ArtinDefiningGraph, d: &DeltaAssignment, tol: f64) -> Result<CurvatureVerdict> {
    let link = combined_link(g, d)?;
    let witness = link.systole();
    let systole = witness.as_ref().map(|w| w.total);
    let pass = systole.is_none_or(|s| s >= TWO_PI - tol);
    Ok(CurvatureVerdict {
        pass,
        systole,
        witness,
        deltas_used: d.clone(),
    })
}

/// The triples reduction. Errors unless every block has α, β ≥ π/2; under
/// that hypothesis the verdict agrees with [`check`].
pub fn triples_check(
    g: &ArtinDefiningGraph,
    d: &DeltaAssignment,
    tol: f64,
) -> Result<CurvatureVerdict> {
    if !d.is_triples_eligible(g)? {
        return Err(Error::ReductionInapplicable(
            "some block has alpha or beta below a right angle".into(),
        ));
    }
    let mut angles: BTreeMap<(String, String), (f64, f64)> = BTreeMap::new();
    for (a, b, block) in d.blocks(g)? {
        angles.insert((a, b), (block.alpha().rad(), block.beta().rad()));
    }
    let key = |a: &str, b: &str| {
        if a <= b {
            (a.to_string(), b.to_string())
        } else {
            (b.to_string(), a.to_string())
        }
    };

    let gens = g.generators();
    let mut worst: Option<(f64, CycleWitness)> = None;
    for i in 0..gens.len() {
        for j in (i + 1)..gens.len() {
            for k in (j + 1)..gens.len() {
                let (x, y, z) = (&gens[i], &gens[j], &gens[k]);
                let (Some(&xy), Some(&yz), Some(&xz)) = (
                    angles.get(&key(x, y)),
                    angles.get(&key(y, z)),
                    angles.get(&key(x, z)),
                ) else {
                    continue;
                };
                // realizable sign patterns: an even number of β edges per
                // triangle, so all-α or exactly one α
                let patterns: [(f64, [&str; 3], [&str; 3]); 4] = [
                    (xy.0 + yz.0 + xz.0, ["+", "+", "+"], ["alpha", "alpha", "alpha"]),
                    (xy.0 + yz.1 + xz.1, ["+", "+", "-"], ["alpha", "beta", "beta"]),
                    (xy.1 + yz.0 + xz.1, ["-", "+", "+"], ["beta", "alpha", "beta"]),
                    (xy.1 + yz.1 + xz.0, ["+", "-", "+"], ["beta", "beta", "alpha"]),
                ];
                for (total, signs, kinds) in patterns {
                    if worst.as_ref().is_none_or(|(w, _)| total < *w) {
                        let vertices = vec![
                            format!("{x}{}", signs[0]),
                            format!("{y}{}", signs[1]),
                            format!("{z}{}", signs[2]),
                        ];
                        let lengths = vec![
                            match kinds[0] { "alpha" => xy.0, _ => xy.1 },
                            match kinds[1] { "alpha" => yz.0, _ => yz.1 },
                            match kinds[2] { "alpha" => xz.0, _ => xz.1 },
                        ];
                        let tags = vec![
                            Some(format!("{}:{},{}", kinds[0], x.min(y), x.max(y))),
                            Some(format!("{}:{},{}", kinds[1], y.min(z), y.max(z))),
                            Some(format!("{}:{},{}", kinds[2], x.min(z), x.max(z))),
                        ];
                        worst = Some((
                            total,
                            CycleWitness { vertices, lengths, tags, total },
                        ));
                    }
                }
            }
        }
    }

    let systole = worst.as_ref().map(|(t, _)| *t);
    let pass = systole.is_none_or(|s| s >= TWO_PI - tol);
    Ok(CurvatureVerdict {
        pass,
        systole,
        witness: worst.map(|(_, w)| w),
        deltas_used: d.clone(),
    })
}

/// One row of the threshold table for triangle graphs with third index 2.
#[derive(Clone, Debug, Serialize)]
pub struct ThresholdRow {
    pub n: u32,
    /// Least `m ≥ 2` passing, or `None` if nothing up to `m_max` passes.
    pub minimal_m: Option<u32>,
    /// The α the large block must reach: `2π − π/2 − α_n`.
    pub required_alpha_deg: f64,
    /// Whether `1/m + 1/n + 1/2 > 1` at the minimal m.
    pub finite_type: bool,
}

fn symmetric_pass(m: u32, n: u32, p: u32) -> Result<bool> {
    let g = ArtinDefiningGraph::triangle(m, n, p)?;
    let d = DeltaAssignment::symmetric(&g)?;
    Ok(check(&g, &d, DEFAULT_TOL)?.pass)
}

/// For each `n`, scan `m` upward and report the least index whose triangle
/// graph `(m, n, 2)` passes under the symmetric model.
pub fn enumerate_amn2(m_max: u32, n_values: &[u32]) -> Result<Vec<ThresholdRow>> {
    let mut rows = Vec::with_capacity(n_values.len());
    for &n in n_values {
        if n < 2 {
            return Err(Error::RelatorIndexTooSmall { got: n, min: 2 });
        }
        let alpha_n = if n == 2 {
            FRAC_PI_2
        } else {
            symmetric_alpha(n)?.rad()
        };
        let required_alpha_deg = (1.5 * PI - alpha_n).to_degrees();
        let mut minimal_m = None;
        for m in 2..=m_max {
            if symmetric_pass(m, n, 2)? {
                minimal_m = Some(m);
                break;
            }
        }
        let finite_type = minimal_m.is_some_and(|m| {
            1.0 / m as f64 + 1.0 / n as f64 + 0.5 > 1.0
        });
        rows.push(ThresholdRow {
            n,
            minimal_m,
            required_alpha_deg,
            finite_type,
        });
    }
    Ok(rows)
}

/// A failing triple of finite indices, listed descending, with the length of
/// the shortest cycle of its combined link.
#[derive(Clone, Debug, Serialize)]
pub struct ExcludedTriple {
    pub indices: [u32; 3],
    pub shortest_cycle_deg: f64,
}

/// All triples of finite indices `≤ max_index` whose three-block combined
/// link fails under the symmetric model.
pub fn excluded_triples(max_index: u32) -> Result<Vec<ExcludedTriple>> {
    if max_index < 2 {
        return Err(Error::RelatorIndexTooSmall { got: max_index, min: 2 });
    }
    let mut out = Vec::new();
    for m1 in 2..=max_index {
        for m2 in 2..=m1 {
            for m3 in 2..=m2 {
                let g = ArtinDefiningGraph::triangle(m1, m2, m3)?;
                let d = DeltaAssignment::symmetric(&g)?;
                let v = check(&g, &d, DEFAULT_TOL)?;
                if !v.pass {
                    out.push(ExcludedTriple {
                        indices: [m1, m2, m3],
                        shortest_cycle_deg: v.systole.expect("failing link has a cycle").to_degrees(),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// 1-D scan of `α ↦ α + 2·β_m(α)` over `α ∈ (π/2, π)`.
///
/// For a triple with all three indices equal to `m`, the sum of the three
/// one-α patterns equals `Σαᵢ + 2Σβᵢ`, so if this envelope stays below 2π no
/// δ choice (symmetric or not) can make all patterns reach 2π.
#[derive(Clone, Debug, Serialize)]
pub struct EnvelopeScan {
    pub m: u32,
    pub step_deg: f64,
    pub max_sum_deg: f64,
    pub at_alpha_deg: f64,
    /// `360° − max_sum_deg`; positive means the scan is infeasibility evidence.
    pub margin_deg: f64,
}

pub fn alpha_plus_two_beta_envelope(m: u32, step: Angle) -> Result<EnvelopeScan> {
    let h = step.rad();
    if !(h > 0.0 && h < FRAC_PI_2) {
        return Err(Error::AngleOutOfRange(format!(
            "envelope step must lie in (0°, 90°), got {}°",
            step.deg()
        )));
    }
    let mut best = f64::NEG_INFINITY;
    let mut best_alpha = 0.0;
    let mut k = 1u64;
    loop {
        let alpha = FRAC_PI_2 + k as f64 * h;
        if alpha >= PI - 1e-12 {
            break;
        }
        let beta = beta_of(m, Angle::from_radians(alpha / 2.0))?.rad();
        let sum = alpha + 2.0 * beta;
        if sum > best {
            best = sum;
            best_alpha = alpha;
        }
        k += 1;
    }
    Ok(EnvelopeScan {
        m,
        step_deg: step.deg(),
        max_sum_deg: best.to_degrees(),
        at_alpha_deg: best_alpha.to_degrees(),
        margin_deg: 360.0 - best.to_degrees(),
    })
}

/// Search mode for [`solve_deltas`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaMode {
    /// Evaluate the symmetric model only.
    Symmetric,
    /// Grid search plus local refinement over all δ coordinates.
    Free,
}

/// Result of the δ-feasibility search.
#[derive(Clone, Debug)]
pub struct SolveReport {
    /// Slack ≥ −tolerance. Boundary cycles of exactly 2π give slack 0.
    pub feasible: bool,
    pub assignment: DeltaAssignment,
    /// `systole − 2π`; `None` when the combined link is acyclic.
    pub slack: Option<f64>,
    pub systole: Option<f64>,
    /// Envelope scans for all-equal triples present in the graph; emitted
    /// when the search ends infeasible, as evidence rather than proof.
    pub envelopes: Vec<EnvelopeScan>,
}

/// Maximize the systole slack over δ-assignments.
///
/// The free search runs coordinate-wise grid ascent from both the symmetric
/// and wide starting assignments, keeps the better outcome, then refines with
/// a shrinking-step pattern search; it therefore never reports less slack
/// than those named assignments achieve. Grid exhaustion with negative slack
/// is evidence of infeasibility, not proof.
pub fn solve_deltas(
    g: &ArtinDefiningGraph,
    mode: DeltaMode,
    grid_step: Angle,
) -> Result<SolveReport> {
    let step = grid_step.rad();
    if !(step > 0.0 && step < FRAC_PI_2) {
        return Err(Error::AngleOutOfRange(format!(
            "grid step must lie in (0°, 90°), got {}°",
            grid_step.deg()
        )));
    }
    // free coordinates: finite pairs of index >= 3, deterministic order
    let pairs: Vec<(String, String, u32)> = g
        .finite_pairs()
        .filter(|&(_, _, m)| m >= 3)
        .map(|(a, b, m)| (a.to_string(), b.to_string(), m))
        .collect();

    let assignment_of = |coords: &[f64]| -> DeltaAssignment {
        let mut d = DeltaAssignment::new();
        for ((a, b, _), &delta) in pairs.iter().zip(coords) {
            d.set(a, b, Angle::from_radians(delta));
        }
        d
    };
    let slack_of = |coords: &[f64]| -> Result<Option<f64>> {
        let d = assignment_of(coords);
        let link = combined_link(g, &d)?;
        Ok(link.systole().map(|w| w.total - TWO_PI))
    };
    // treat an acyclic link as unbounded slack for comparison purposes
    let as_score = |s: Option<f64>| s.unwrap_or(f64::INFINITY);

    let start_symmetric: Vec<f64> = {
        let d = DeltaAssignment::symmetric(g)?;
        pairs
            .iter()
            .map(|(a, b, m)| d.delta_for(a, b, *m).map(|x| x.rad()))
            .collect::<Result<_>>()?
    };

    let best_coords = match mode {
        DeltaMode::Symmetric => start_symmetric,
        DeltaMode::Free => {
            let start_wide: Vec<f64> = {
                let d = DeltaAssignment::wide(g)?;
                pairs
                    .iter()
                    .map(|(a, b, m)| d.delta_for(a, b, *m).map(|x| x.rad()))
                    .collect::<Result<_>>()?
            };
            let grid: Vec<f64> = {
                let mut v = Vec::new();
                let mut k = 1u64;
                loop {
                    let x = k as f64 * step;
                    if x >= FRAC_PI_2 - 1e-12 {
                        break;
                    }
                    v.push(x);
                    k += 1;
                }
                v
            };
            // all-equal assignments catch the diagonal ridge of symmetric
            // instances, where single-coordinate moves stall
            let start_uniform: Option<Vec<f64>> = {
                let mut best: Option<(f64, f64)> = None;
                for &x in &grid {
                    let v = as_score(slack_of(&vec![x; pairs.len()])?);
                    if best.is_none_or(|(b, _)| v > b) {
                        best = Some((v, x));
                    }
                }
                best.map(|(_, x)| vec![x; pairs.len()])
            };
            let mut best: Option<(f64, Vec<f64>)> = None;
            for start in [Some(start_symmetric), Some(start_wide), start_uniform]
                .into_iter()
                .flatten()
            {
                if start.is_empty() {
                    best = Some((as_score(slack_of(&[])?), start));
                    break;
                }
                let mut cur = start;
                let mut cur_val = as_score(slack_of(&cur)?);
                for _pass in 0..32 {
                    let mut improved = false;
                    for i in 0..cur.len() {
                        let mut local_best = (cur_val, cur[i]);
                        for &x in &grid {
                            let mut probe = cur.clone();
                            probe[i] = x;
                            let v = as_score(slack_of(&probe)?);
                            if v > local_best.0 + 1e-15 {
                                local_best = (v, x);
                            }
                        }
                        if local_best.1 != cur[i] {
                            cur[i] = local_best.1;
                            cur_val = local_best.0;
                            improved = true;
                        }
                    }
                    if !improved {
                        break;
                    }
                }
                if best.as_ref().is_none_or(|(b, _)| cur_val > *b) {
                    best = Some((cur_val, cur));
                }
            }
            let (mut cur_val, mut cur) = {
                let (v, c) = best.expect("at least one start");
                (v, c)
            };
            // shrinking-step pattern refinement; besides per-coordinate moves
            // it shifts all coordinates together, following diagonal ridges
            let mut h = step / 2.0;
            while h > step / 64.0 && !cur.is_empty() {
                let mut improved = false;
                let mut moves: Vec<Vec<f64>> = Vec::new();
                for i in 0..cur.len() {
                    for dir in [-1.0, 1.0] {
                        let mut probe = cur.clone();
                        probe[i] += dir * h;
                        moves.push(probe);
                    }
                }
                for dir in [-1.0, 1.0] {
                    moves.push(cur.iter().map(|x| x + dir * h).collect());
                }
                for probe in moves {
                    if probe
                        .iter()
                        .any(|&x| x <= 0.0 || x >= FRAC_PI_2 - 1e-12)
                    {
                        continue;
                    }
                    let v = as_score(slack_of(&probe)?);
                    if v > cur_val + 1e-15 {
                        cur = probe;
                        cur_val = v;
                        improved = true;
                    }
                }
                if !improved {
                    h /= 2.0;
                }
            }
            cur
        }
    };

    let assignment = assignment_of(&best_coords);
    let link = combined_link(g, &assignment)?;
    let systole = link.systole().map(|w| w.total);
    let slack = systole.map(|s| s - TWO_PI);
    let feasible = slack.is_none_or(|s| s >= -DEFAULT_TOL);

    let mut envelopes = Vec::new();
    if !feasible {
        // evidence scans for all-equal triples present in the graph
        let gens = g.generators();
        let mut seen = std::collections::BTreeSet::new();
        for i in 0..gens.len() {
            for j in (i + 1)..gens.len() {
                for k in (j + 1)..gens.len() {
                    let (ij, jk, ik) = (
                        g.relator_index(&gens[i], &gens[j]),
                        g.relator_index(&gens[j], &gens[k]),
                        g.relator_index(&gens[i], &gens[k]),
                    );
                    if let (
                        RelatorIndex::Finite(a),
                        RelatorIndex::Finite(b),
                        RelatorIndex::Finite(c),
                    ) = (ij, jk, ik)
                    {
                        if a == b && b == c && a >= 3 && seen.insert(a) {
                            envelopes.push(alpha_plus_two_beta_envelope(
                                a,
                                Angle::from_radians(step.min(0.01f64.to_radians())),
                            )?);
                        }
                    }
                }
            }
        }
    }

    Ok(SolveReport {
        feasible,
        assignment,
        slack,
        systole,
        envelopes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn symmetric_verdict(m: u32, n: u32, p: u32) -> CurvatureVerdict {
        let g = ArtinDefiningGraph::triangle(m, n, p).unwrap();
        let d = DeltaAssignment::symmetric(&g).unwrap();
        check(&g, &d, DEFAULT_TOL).unwrap()
    }

    #[test]
    fn check_a882_passes_and_a772_fails() {
        let v = symmetric_verdict(8, 8, 2);
        assert!(v.pass);
        // the torus block's own circle is the systole, exactly 2π
        assert_abs_diff_eq!(v.systole.unwrap(), TWO_PI, epsilon = 1e-12);

        let v = symmetric_verdict(7, 7, 2);
        assert!(!v.pass);
        assert_abs_diff_eq!(v.systole.unwrap().to_degrees(), 356.18, epsilon = 0.01);
        let w = v.witness.unwrap();
        assert_eq!(w.vertices.len(), 3);
    }

    #[test]
    fn check_sparse_graph_passes_for_any_delta() {
        // all pairs unrelated except one
        let mut g = ArtinDefiningGraph::new(&["a", "b", "c"]).unwrap();
        g.set_relation("a", "b", 9).unwrap();
        for deg in [10.0, 45.0, 80.0] {
            let mut d = DeltaAssignment::new();
            d.set("a", "b", Angle::from_degrees(deg));
            assert!(check(&g, &d, DEFAULT_TOL).unwrap().pass);
        }
    }

    #[test]
    fn triples_examples_with_wide_deltas() {
        let g = ArtinDefiningGraph::triangle(4, 4, 4).unwrap();
        let d = DeltaAssignment::wide(&g).unwrap();
        let v = triples_check(&g, &d, DEFAULT_TOL).unwrap();
        assert!(!v.pass);
        assert_abs_diff_eq!(v.systole.unwrap().to_degrees(), 345.5, epsilon = 0.01);

        let g = ArtinDefiningGraph::triangle(4, 4, 5).unwrap();
        let d = DeltaAssignment::wide(&g).unwrap();
        let v = triples_check(&g, &d, DEFAULT_TOL).unwrap();
        assert!(v.pass);
        assert_abs_diff_eq!(v.systole.unwrap().to_degrees(), 361.5, epsilon = 0.01);
    }

    #[test]
    fn triples_reduction_rejects_small_angles() {
        let g = ArtinDefiningGraph::triangle(5, 5, 5).unwrap();
        let mut d = DeltaAssignment::new();
        for (a, b) in [("a", "b"), ("b", "c"), ("a", "c")] {
            d.set(a, b, Angle::from_degrees(30.0));
        }
        assert!(matches!(
            triples_check(&g, &d, DEFAULT_TOL),
            Err(Error::ReductionInapplicable(_))
        ));
        // check still works and fails on the short 3α triangle
        assert!(!check(&g, &d, DEFAULT_TOL).unwrap().pass);
    }

    #[test]
    fn triples_agree_with_check_on_seeded_instances() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let names = ["a", "b", "c", "d", "e", "f"];
        for _ in 0..60 {
            let n = rng.gen_range(3..=6);
            let mut g = ArtinDefiningGraph::new(&names[..n]).unwrap();
            let mut d = DeltaAssignment::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    match rng.gen_range(0..3) {
                        0 => {} // no relation
                        1 => g.set_relation(names[i], names[j], 2).unwrap(),
                        _ => {
                            let m = rng.gen_range(3..=50);
                            g.set_relation(names[i], names[j], m).unwrap();
                            // eligible range: alpha >= 90° and beta >= 90°
                            let hi = if m == 3 { 54.7 } else { 89.9 };
                            let delta = rng.gen_range(45.0..hi);
                            d.set(names[i], names[j], Angle::from_degrees(delta));
                        }
                    }
                }
            }
            let full = check(&g, &d, DEFAULT_TOL).unwrap();
            let fast = triples_check(&g, &d, DEFAULT_TOL).unwrap();
            assert_eq!(full.pass, fast.pass, "graph {}", g.to_json());
        }
    }

    #[test]
    fn passing_verdicts_reproduce() {
        for (m, n, p) in [(8, 8, 2), (44, 3, 2), (10, 6, 2), (9, 9, 9)] {
            let g = ArtinDefiningGraph::triangle(m, n, p).unwrap();
            let d = DeltaAssignment::symmetric(&g).unwrap();
            let v = check(&g, &d, DEFAULT_TOL).unwrap();
            assert!(v.pass);
            let link = combined_link(&g, &v.deltas_used).unwrap();
            assert!(link.is_cat1(DEFAULT_TOL).0);
        }
    }

    #[test]
    fn enumerate_smoke() {
        let rows = enumerate_amn2(20, &[7]).unwrap();
        assert_eq!(rows[0].minimal_m, Some(8));
        assert!(!rows[0].finite_type);
        assert_abs_diff_eq!(rows[0].required_alpha_deg, 136.91, epsilon = 0.01);

        // nothing ≤ 10 passes for n = 3
        let rows = enumerate_amn2(10, &[3]).unwrap();
        assert_eq!(rows[0].minimal_m, None);
    }

    #[test]
    fn excluded_triples_small_bound() {
        let got = excluded_triples(5).unwrap();
        let got_set: Vec<[u32; 3]> = got.iter().map(|t| t.indices).collect();
        let want: Vec<[u32; 3]> = vec![
            [2, 2, 2],
            [3, 2, 2],
            [3, 3, 2],
            [3, 3, 3],
            [4, 2, 2],
            [4, 3, 2],
            [4, 3, 3],
            [4, 4, 2],
            [4, 4, 3],
            [4, 4, 4],
            [5, 2, 2],
            [5, 3, 2],
            [5, 3, 3],
            [5, 4, 2],
            [5, 4, 3],
            [5, 4, 4],
            [5, 5, 2],
            [5, 5, 3],
            [5, 5, 4],
            [5, 5, 5],
        ];
        assert_eq!(got_set, want);
        // {5,5,5} shortest cycle is the 3α triangle
        let t555 = got.iter().find(|t| t.indices == [5, 5, 5]).unwrap();
        assert_abs_diff_eq!(t555.shortest_cycle_deg, 357.32, epsilon = 0.01);
    }

    #[test]
    fn envelope_stays_below_full_turn() {
        let scan = alpha_plus_two_beta_envelope(4, Angle::from_degrees(0.05)).unwrap();
        assert!(scan.max_sum_deg < 360.0, "max {}", scan.max_sum_deg);
        assert!(scan.margin_deg > 0.0);
        assert_abs_diff_eq!(scan.max_sum_deg, 360.0, epsilon = 0.2);
        assert!(scan.at_alpha_deg > 179.0);
    }

    #[test]
    fn solve_single_relation_is_feasible() {
        let mut g = ArtinDefiningGraph::new(&["a", "b"]).unwrap();
        g.set_relation("a", "b", 6).unwrap();
        let r = solve_deltas(&g, DeltaMode::Free, Angle::from_degrees(2.0)).unwrap();
        assert!(r.feasible);
        assert!(r.slack.unwrap() >= 0.0);
    }

    #[test]
    fn solve_444_is_infeasible_with_envelope() {
        let g = ArtinDefiningGraph::triangle(4, 4, 4).unwrap();
        let r = solve_deltas(&g, DeltaMode::Free, Angle::from_degrees(1.0)).unwrap();
        assert!(!r.feasible);
        assert!(r.slack.unwrap() < 0.0);
        assert_eq!(r.envelopes.len(), 1);
        assert!(r.envelopes[0].max_sum_deg < 360.0);
    }

    #[test]
    fn solve_445_beats_wide_recipe() {
        let g = ArtinDefiningGraph::triangle(4, 4, 5).unwrap();
        let wide = DeltaAssignment::wide(&g).unwrap();
        let wide_slack = check(&g, &wide, DEFAULT_TOL).unwrap().systole.unwrap() - TWO_PI;
        let r = solve_deltas(&g, DeltaMode::Free, Angle::from_degrees(1.0)).unwrap();
        assert!(r.feasible);
        assert!(r.slack.unwrap() >= wide_slack - 1e-12);
    }

    #[test]
    fn solve_slack_non_decreasing_under_grid_refinement() {
        let mut g = ArtinDefiningGraph::new(&["a", "b"]).unwrap();
        g.set_relation("a", "b", 3).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for step in [4.0, 2.0, 1.0, 0.5] {
            let r = solve_deltas(&g, DeltaMode::Free, Angle::from_degrees(step)).unwrap();
            let slack = r.slack.unwrap();
            assert!(
                slack + 1e-12 >= prev,
                "step {step}: slack {slack} regressed from {prev}"
            );
            prev = slack;
        }
    }

    #[test]
    fn solve_symmetric_mode_reports_symmetric_slack() {
        let g = ArtinDefiningGraph::triangle(44, 3, 2).unwrap();
        let r = solve_deltas(&g, DeltaMode::Symmetric, Angle::from_degrees(1.0)).unwrap();
        assert!(r.feasible);
        // the torus circle pins the systole to exactly 2π
        assert_abs_diff_eq!(r.slack.unwrap(), 0.0, epsilon = 1e-12);
    }
}
