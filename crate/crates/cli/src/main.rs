//! `curvlink` — CAT(1) link verification for glued dihedral building blocks.
//!
//! Exit codes: 0 = pass/success, 1 = fail/infeasible/undetermined,
//! 2 = usage or input error. The environment variable `CURVLINK_TOL`
//! overrides the default verdict tolerance; an explicit `--tol` wins.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use curvlink_core::coxeter::{
    coxeter_abc_infinite, element_order, parse_word, spectral_radius, CoxeterMatrix,
    ElementOrder, ReflectionRep,
};
use curvlink_core::dihedral::symmetric_angle_table;
use curvlink_core::graph::CycleWitness;
use curvlink_core::link::{
    block_link, l_graph, l_graph_diameter_formula, ArtinDefiningGraph, DeltaAssignment,
    LGraphParams,
};
use curvlink_core::verdict::{
    check, enumerate_amn2, excluded_triples, solve_deltas, triples_check, CurvatureVerdict,
    DeltaMode,
};
use curvlink_core::{Angle, Error, DEFAULT_TOL};

#[derive(Parser)]
#[command(
    name = "curvlink",
    version,
    about = "Systoles, diameters and CAT(1) verdicts for links of glued dihedral blocks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the symmetric α = β solution per relator index
    Table1 {
        /// Indices, e.g. `3..13,18,19,21,22,43,44` (ranges are inclusive)
        #[arg(long, value_name = "LIST")]
        m: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
        /// Decimal places in CSV output
        #[arg(long, default_value_t = 3)]
        precision: usize,
    },
    /// Emit the link graph of one building block as graph JSON
    BlockLink {
        #[arg(long)]
        m: u32,
        /// Metric parameter δ in degrees (required for m ≥ 3 unless --symmetric)
        #[arg(long)]
        delta_deg: Option<f64>,
        /// Use the symmetric α = β solution
        #[arg(long)]
        symmetric: bool,
        /// Generator labels, e.g. `a,b`
        #[arg(long, default_value = "a,b")]
        labels: String,
    },
    /// Decide the link condition for a defining graph (exit 0 pass, 1 fail)
    Check(CheckArgs),
    /// Same verdict via the triples reduction (requires all α, β ≥ 90°)
    TriplesCheck(CheckArgs),
    /// Thresholds: least m making the (m, n, 2) triangle graph pass
    Enumerate {
        #[arg(long, default_value = "amn2")]
        family: String,
        #[arg(long, default_value_t = 60)]
        m_max: u32,
        /// n values, e.g. `3..8`
        #[arg(long, value_name = "LIST")]
        n: String,
        #[arg(long)]
        csv: bool,
        #[arg(long, default_value_t = 3)]
        precision: usize,
    },
    /// All failing triples of finite indices up to a bound
    ExcludedTriples {
        #[arg(long, default_value_t = 60)]
        max: u32,
        #[arg(long)]
        csv: bool,
        #[arg(long, default_value_t = 3)]
        precision: usize,
    },
    /// Diameter of the two-circle graph, measured and closed-form
    DiamL {
        #[arg(long)]
        rho_deg: f64,
        #[arg(long)]
        sigma_deg: f64,
        #[arg(long, default_value_t = 1)]
        nr: u8,
        #[arg(long, default_value_t = 1)]
        ns: u8,
        /// Sampling fallback density (the crossing analysis is exact regardless)
        #[arg(long, default_value_t = 32)]
        resolution: u32,
        #[arg(long)]
        json: bool,
    },
    /// Search δ-assignments maximizing the systole slack
    SolveDeltas {
        #[arg(long)]
        input: PathBuf,
        /// `free` or `symmetric`
        #[arg(long, default_value = "free")]
        mode: String,
        #[arg(long, default_value_t = 0.5)]
        grid_deg: f64,
        #[arg(long)]
        json: bool,
    },
    /// Order of a word in the reflection representation of a rank-3 Coxeter group
    CoxeterOrder {
        /// Bond indices `m,n,p` for the pairs (a,b), (b,c), (a,c)
        #[arg(long)]
        indices: String,
        #[arg(long, default_value = "abc")]
        word: String,
        #[arg(long, default_value_t = 10_000)]
        cap: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct CheckArgs {
    /// Defining-graph JSON file
    #[arg(long)]
    input: PathBuf,
    /// `auto` (symmetric model), `wide`, or a δ JSON file
    #[arg(long, default_value = "auto")]
    deltas: String,
    /// Verdict tolerance in radians (default 1e-9, or CURVLINK_TOL)
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn tolerance(flag: Option<f64>) -> anyhow::Result<f64> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var("CURVLINK_TOL") {
        Ok(s) => s
            .trim()
            .parse::<f64>()
            .map_err(|_| anyhow!("CURVLINK_TOL is not a number: `{s}`")),
        Err(_) => Ok(DEFAULT_TOL),
    }
}

/// Parse `3..13,18,19` (inclusive ranges) into a list.
fn parse_index_list(text: &str) -> anyhow::Result<Vec<u32>> {
    let mut out = Vec::new();
    for token in text.split(',') {
        let token = token.trim();
        if token.is_empty() {
            bail!("empty entry in index list `{text}`");
        }
        if let Some((lo, hi)) = token.split_once("..") {
            let lo: u32 = lo.trim().parse().context("range start")?;
            let hi: u32 = hi.trim().parse().context("range end")?;
            if hi < lo {
                bail!("descending range `{token}`");
            }
            out.extend(lo..=hi);
        } else {
            out.push(token.parse().context("index")?);
        }
    }
    Ok(out)
}

fn load_graph(path: &PathBuf) -> anyhow::Result<ArtinDefiningGraph> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    Ok(ArtinDefiningGraph::from_json(&text)?)
}

fn load_deltas(source: &str, g: &ArtinDefiningGraph) -> anyhow::Result<DeltaAssignment> {
    match source {
        "auto" | "symmetric" => Ok(DeltaAssignment::symmetric(g)?),
        "wide" => Ok(DeltaAssignment::wide(g)?),
        path => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading deltas file {path}"))?;
            Ok(DeltaAssignment::from_json(&text, g)?)
        }
    }
}

fn witness_json(w: &CycleWitness) -> serde_json::Value {
    serde_json::json!({
        "vertices": w.vertices,
        "lengths_deg": w.lengths.iter().map(|l| l.to_degrees()).collect::<Vec<_>>(),
        "tags": w.tags,
        "total_deg": w.total.to_degrees(),
    })
}

fn witness_text(w: &CycleWitness) -> String {
    let mut s = String::new();
    for (i, v) in w.vertices.iter().enumerate() {
        s.push_str(v);
        s.push_str(&format!(" -({:.3}°)- ", w.lengths[i].to_degrees()));
    }
    s.push_str(&w.vertices[0]);
    s
}

fn deltas_json(d: &DeltaAssignment) -> serde_json::Value {
    let map: serde_json::Map<String, serde_json::Value> = d
        .entries()
        .map(|(a, b, delta)| (format!("{a},{b}"), serde_json::json!(delta.deg())))
        .collect();
    serde_json::Value::Object(map)
}

fn report_verdict(
    command: &str,
    args: &CheckArgs,
    tol: f64,
    v: &CurvatureVerdict,
) -> anyhow::Result<()> {
    if args.json {
        let doc = serde_json::json!({
            "command": command,
            "version": env!("CARGO_PKG_VERSION"),
            "params": {
                "input": args.input.display().to_string(),
                "deltas": args.deltas,
                "tol": tol,
            },
            "pass": v.pass,
            "systole_deg": v.systole.map(f64::to_degrees),
            "systole_rad": v.systole,
            "witness": v.witness.as_ref().map(witness_json),
            "deltas_deg": deltas_json(&v.deltas_used),
        });
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        match (v.pass, &v.systole) {
            (true, None) => println!("PASS: link is acyclic"),
            (true, Some(s)) => println!(
                "PASS: systole {:.3}° >= 360° (tol {tol:e})",
                s.to_degrees()
            ),
            (false, Some(s)) => {
                println!("FAIL: systole {:.3}° < 360°", s.to_degrees());
                if let Some(w) = &v.witness {
                    println!("  shortest cycle: {}", witness_text(w));
                }
            }
            (false, None) => unreachable!("failing verdict carries a systole"),
        }
    }
    Ok(())
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Table1 { m, format, precision } => {
            let ms = parse_index_list(&m)?;
            let rows = symmetric_angle_table(&ms)?;
            match format {
                TableFormat::Csv => {
                    println!("m,theta_deg,cos_theta,cos_alpha,alpha_deg");
                    for r in &rows {
                        println!(
                            "{},{:.p$},{:.p$},{:.p$},{:.p$}",
                            r.m,
                            r.theta_deg,
                            r.cos_theta,
                            r.cos_alpha,
                            r.alpha_deg,
                            p = precision
                        );
                    }
                }
                TableFormat::Json => {
                    let doc = serde_json::json!({
                        "command": "table1",
                        "version": env!("CARGO_PKG_VERSION"),
                        "params": { "m": ms },
                        "rows": rows,
                    });
                    println!("{}", serde_json::to_string_pretty(&doc)?);
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::BlockLink { m, delta_deg, symmetric, labels } => {
            let (x, y) = labels
                .split_once(',')
                .ok_or_else(|| anyhow!("--labels must be of the form `a,b`"))?;
            let delta = match (m, delta_deg, symmetric) {
                (2, None, _) => Angle::QUARTER_PI,
                (2, Some(_), _) => bail!("the m = 2 block has a fixed geometry; omit --delta-deg"),
                (_, Some(d), false) => Angle::from_degrees(d),
                (_, None, true) => curvlink_core::dihedral::symmetric_delta(m)?,
                (_, Some(_), true) => bail!("--delta-deg conflicts with --symmetric"),
                (_, None, false) => bail!("m >= 3 needs --delta-deg or --symmetric"),
            };
            let g = block_link(m, delta, x.trim(), y.trim())?;
            println!("{}", g.to_json());
            Ok(ExitCode::SUCCESS)
        }

        Command::Check(args) => {
            let tol = tolerance(args.tol)?;
            let g = load_graph(&args.input)?;
            let d = load_deltas(&args.deltas, &g)?;
            let v = check(&g, &d, tol)?;
            report_verdict("check", &args, tol, &v)?;
            Ok(if v.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }

        Command::TriplesCheck(args) => {
            let tol = tolerance(args.tol)?;
            let g = load_graph(&args.input)?;
            let d = load_deltas(&args.deltas, &g)?;
            let v = triples_check(&g, &d, tol)?;
            report_verdict("triples-check", &args, tol, &v)?;
            Ok(if v.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }

        Command::Enumerate { family, m_max, n, csv, precision } => {
            if family != "amn2" {
                bail!("unknown family `{family}` (supported: amn2)");
            }
            let ns = parse_index_list(&n)?;
            let rows = enumerate_amn2(m_max, &ns)?;
            if csv {
                println!("n,minimal_m,required_alpha_deg,finite_type");
                for r in &rows {
                    println!(
                        "{},{},{:.p$},{}",
                        r.n,
                        r.minimal_m.map_or("none".into(), |m| m.to_string()),
                        r.required_alpha_deg,
                        r.finite_type,
                        p = precision
                    );
                }
            } else {
                for r in &rows {
                    match r.minimal_m {
                        Some(m) => println!(
                            "n = {:>2}: minimal m = {:>2}  (needs alpha >= {:.3}°)",
                            r.n, m, r.required_alpha_deg
                        ),
                        None => println!(
                            "n = {:>2}: no m <= {m_max} passes (needs alpha >= {:.3}°)",
                            r.n, r.required_alpha_deg
                        ),
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::ExcludedTriples { max, csv, precision } => {
            let triples = excluded_triples(max)?;
            if csv {
                println!("m1,m2,m3,shortest_cycle_deg");
                for t in &triples {
                    println!(
                        "{},{},{},{:.p$}",
                        t.indices[0],
                        t.indices[1],
                        t.indices[2],
                        t.shortest_cycle_deg,
                        p = precision
                    );
                }
            } else {
                println!("{} excluded triples up to index {max}:", triples.len());
                for t in &triples {
                    println!(
                        "  {{{}, {}, {}}}  shortest cycle {:.3}°",
                        t.indices[0], t.indices[1], t.indices[2], t.shortest_cycle_deg
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::DiamL { rho_deg, sigma_deg, nr, ns, resolution, json } => {
            let rho = Angle::from_degrees(rho_deg);
            let sigma = Angle::from_degrees(sigma_deg);
            let params = LGraphParams::new(rho, sigma, nr, ns)?;
            let g = l_graph(&params)?;
            let measured = g.diameter(resolution)?;
            let formula = if nr == 1 && ns == 1 {
                Some(l_graph_diameter_formula(rho, sigma)?)
            } else {
                None
            };
            if json {
                let doc = serde_json::json!({
                    "command": "diam-l",
                    "version": env!("CARGO_PKG_VERSION"),
                    "params": {
                        "rho_deg": rho_deg, "sigma_deg": sigma_deg,
                        "nr": nr, "ns": ns, "resolution": resolution,
                    },
                    "diameter_deg": measured.length.to_degrees(),
                    "diameter_rad": measured.length,
                    "formula_deg": formula.map(f64::to_degrees),
                    "witness": { "p": measured.p, "q": measured.q },
                });
                println!("{}", serde_json::to_string_pretty(&doc)?);
            } else {
                match formula {
                    Some(f) => println!(
                        "diameter {:.6}° (closed form {:.6}°)",
                        measured.length.to_degrees(),
                        f.to_degrees()
                    ),
                    None => println!("diameter {:.6}°", measured.length.to_degrees()),
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::SolveDeltas { input, mode, grid_deg, json } => {
            let g = load_graph(&input)?;
            let mode = match mode.as_str() {
                "free" => DeltaMode::Free,
                "symmetric" => DeltaMode::Symmetric,
                other => bail!("unknown mode `{other}` (free or symmetric)"),
            };
            let r = solve_deltas(&g, mode, Angle::from_degrees(grid_deg))?;
            if json {
                let doc = serde_json::json!({
                    "command": "solve-deltas",
                    "version": env!("CARGO_PKG_VERSION"),
                    "params": {
                        "input": input.display().to_string(),
                        "mode": if mode == DeltaMode::Free { "free" } else { "symmetric" },
                        "grid_deg": grid_deg,
                    },
                    "feasible": r.feasible,
                    "slack_deg": r.slack.map(f64::to_degrees),
                    "slack_rad": r.slack,
                    "systole_deg": r.systole.map(f64::to_degrees),
                    "systole_rad": r.systole,
                    "deltas_deg": deltas_json(&r.assignment),
                    "envelopes": r.envelopes,
                });
                println!("{}", serde_json::to_string_pretty(&doc)?);
            } else {
                match (r.feasible, r.slack) {
                    (true, None) => println!("feasible: combined link is acyclic"),
                    (true, Some(s)) => {
                        println!("feasible: slack {:.4}°", s.to_degrees());
                        for (a, b, d) in r.assignment.entries() {
                            println!("  delta({a},{b}) = {:.4}°", d.deg());
                        }
                    }
                    (false, Some(s)) => {
                        println!("infeasible: best slack {:.4}°", s.to_degrees());
                        for e in &r.envelopes {
                            println!(
                                "  envelope m = {}: max(alpha + 2 beta) = {:.4}° at alpha = {:.2}° (margin {:.4}°)",
                                e.m, e.max_sum_deg, e.at_alpha_deg, e.margin_deg
                            );
                        }
                    }
                    (false, None) => unreachable!("infeasible result carries slack"),
                }
            }
            Ok(if r.feasible { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }

        Command::CoxeterOrder { indices, word, cap, json } => {
            let parts = parse_index_list(&indices)?;
            let [m, n, p]: [u32; 3] = parts
                .try_into()
                .map_err(|_| anyhow!("--indices needs exactly three values m,n,p"))?;
            let predicate = 1.0 / m as f64 + 1.0 / n as f64 + 1.0 / p as f64 <= 1.0 + 1e-12;
            let cox = CoxeterMatrix::triangle(m, n, p)?;
            let rep = ReflectionRep::new(&cox);
            let w = parse_word(&word, rep.rank())?;
            let radius = spectral_radius(&rep.word_matrix(&w)?);

            // the abc word carries the flat/hyperbolic cross-check
            let outcome = if word == "abc" {
                match coxeter_abc_infinite(m, n, p, cap) {
                    Ok(r) if r.infinite => Ok(ElementOrder::Infinite {
                        certificate: r.certificate.expect("infinite result has certificate"),
                    }),
                    Ok(r) => Ok(ElementOrder::Finite { order: r.order.expect("finite order") }),
                    Err(e) => Err(e),
                }
            } else {
                element_order(&rep, &w, cap)
            };

            let (result, order, certificate, undetermined_reason) = match &outcome {
                Ok(ElementOrder::Finite { order }) => ("finite", Some(*order), None, None),
                Ok(ElementOrder::Infinite { certificate }) => {
                    ("infinite", None, Some(*certificate), None)
                }
                Err(Error::UndeterminedOrder { reason, .. }) => {
                    ("undetermined", None, None, Some(reason.clone()))
                }
                Err(e) => bail!("{e}"),
            };
            if json {
                let doc = serde_json::json!({
                    "command": "coxeter-order",
                    "version": env!("CARGO_PKG_VERSION"),
                    "params": { "indices": [m, n, p], "word": word, "cap": cap },
                    "result": result,
                    "order": order,
                    "certificate": certificate,
                    "spectral_radius": radius,
                    "abc_predicate_infinite": predicate,
                    "reason": undetermined_reason,
                });
                println!("{}", serde_json::to_string_pretty(&doc)?);
            } else {
                match result {
                    "finite" => println!("finite: order {}", order.unwrap()),
                    "infinite" => println!(
                        "infinite: certificate {:?} (spectral radius {radius:.9})",
                        certificate.unwrap()
                    ),
                    _ => println!(
                        "undetermined at cap {cap}: {}",
                        undetermined_reason.unwrap_or_default()
                    ),
                }
            }
            Ok(if result == "undetermined" {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
    }
}
