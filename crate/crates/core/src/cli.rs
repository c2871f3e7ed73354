//! Command-line interface. [`run`] returns the rendered output instead of
//! printing it, so every subcommand can be exercised from tests.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use crate::catalog::{catalog, catalog_get, export_corpus, parse_edge_list, CATALOG_SIZE};
use crate::classify::{
    build_report, render_report_csv, render_report_text, render_rp_csv, render_rp_text, RpTable,
    DEFAULT_GROUP_TOLERANCE,
};
use crate::graph::{
    are_lc_equivalent, is_isomorphic, lc_orbit, lc_partition, Graph, GraphError, LcOrbit, DEFAULT_ORBIT_BUDGET,
};
use crate::measures::{gcm, gem, GemConfig, MeasureKind, MeasureResult, DEFAULT_SEED};
use crate::state::StateVector;

#[derive(Debug, Parser)]
#[command(name = "graphent", version, about = "Graph states, LC orbits and multipartite entanglement measures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[value(alias = "text")]
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    Gcm,
    Gem,
}

impl From<MeasureArg> for MeasureKind {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::Gcm => MeasureKind::Gcm,
            MeasureArg::Gem => MeasureKind::Gem,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the amplitudes of a graph state.
    State(InputArgs),
    /// Generalized concurrence of a graph state.
    Gcm(InputArgs),
    /// Geometric measure of entanglement of a graph state.
    Gem {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        gem: GemArgs,
    },
    /// Local complementation at one vertex.
    Lc {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        vertex: usize,
    },
    /// Enumerate the LC orbit modulo isomorphism.
    Orbit {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = DEFAULT_ORBIT_BUDGET)]
        budget: usize,
    },
    /// Decide LC equivalence of two graphs.
    Equiv {
        #[command(flatten)]
        first: InputArgs,
        #[command(flatten)]
        second: SecondInputArgs,
        #[arg(long, default_value_t = DEFAULT_ORBIT_BUDGET)]
        budget: usize,
    },
    /// Classify all catalog graphs by one measure.
    Classify {
        #[arg(long, value_enum)]
        measure: MeasureArg,
        #[command(flatten)]
        gem: GemArgs,
        /// Grouping tolerance.
        #[arg(long, default_value_t = DEFAULT_GROUP_TOLERANCE)]
        tol: f64,
    },
    /// Resolution-power table for both measures.
    RpTable {
        #[command(flatten)]
        gem: GemArgs,
        #[arg(long, default_value_t = DEFAULT_GROUP_TOLERANCE)]
        tol: f64,
    },
    /// Consistency checks over the built-in catalog.
    VerifyCatalog {
        #[arg(long, default_value_t = DEFAULT_ORBIT_BUDGET)]
        budget: usize,
        /// Check that all 990 catalog pairs have disjoint LC orbits.
        #[arg(long)]
        lc_pairwise: bool,
        /// Partition every labelled connected graph on 2..=7 vertices into
        /// LC classes and check the catalog hits each class exactly once.
        #[arg(long)]
        full_partition: bool,
    },
    /// Write the catalog as `gNN.edges` files plus `index.json` into a directory.
    ExportCatalog {
        #[arg(long)]
        dir: PathBuf,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// Catalog graph id (1..=45).
    #[arg(long)]
    pub graph: Option<usize>,
    /// Inline edge list, e.g. "1 2,1 3,2 3".
    #[arg(long)]
    pub edges: Option<String>,
    /// Edge-list file.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct SecondInputArgs {
    #[arg(long)]
    pub graph2: Option<usize>,
    #[arg(long)]
    pub edges2: Option<String>,
    #[arg(long)]
    pub file2: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GemArgs {
    #[arg(long, default_value_t = 64)]
    pub restarts: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 500)]
    pub max_iterations: usize,
    /// Per-sweep fidelity gain below which a restart stops.
    #[arg(long, default_value_t = 1e-12)]
    pub tolerance: f64,
}

impl GemArgs {
    fn config(&self) -> GemConfig {
        GemConfig {
            restarts: self.restarts,
            max_iterations: self.max_iterations,
            tolerance: self.tolerance,
            seed: self.seed,
        }
    }
}

/// Rendered output plus whether the command succeeded.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub text: String,
    pub ok: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, ok: true }
    }
}

fn load_graph(graph: Option<usize>, edges: Option<&str>, file: Option<&PathBuf>) -> Result<Graph> {
    match (graph, edges, file) {
        (Some(id), None, None) => Ok(catalog_get(id)?.graph),
        (None, Some(inline), None) => {
            let text = inline.replace([',', ';'], "\n");
            Ok(parse_edge_list(&text).context("parsing --edges")?)
        }
        (None, None, Some(path)) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Ok(parse_edge_list(&text).with_context(|| format!("parsing {}", path.display()))?)
        }
        _ => bail!("give exactly one of --graph, --edges, --file"),
    }
}

impl InputArgs {
    fn load(&self) -> Result<Graph> {
        load_graph(self.graph, self.edges.as_deref(), self.file.as_ref())
    }
}

impl SecondInputArgs {
    fn load(&self) -> Result<Graph> {
        load_graph(self.graph2, self.edges2.as_deref(), self.file2.as_ref())
    }
}

fn inline_edges(g: &Graph) -> String {
    g.edges()
        .iter()
        .map(|(i, j)| format!("{i} {j}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn graph_json(g: &Graph) -> serde_json::Value {
    json!({ "n": g.n(), "edges": g.edges() })
}

fn to_json(v: &impl serde::Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let fmt = cli.format;
    match &cli.command {
        Command::State(input) => cmd_state(&input.load()?, fmt),
        Command::Gcm(input) => {
            let g = input.load()?;
            let r = gcm(&StateVector::graph_state(&g)?)?;
            measure_output(&g, &r, fmt)
        }
        Command::Gem { input, gem: args } => {
            let g = input.load()?;
            let r = gem(&StateVector::graph_state(&g)?, &args.config())?;
            measure_output(&g, &r, fmt)
        }
        Command::Lc { input, vertex } => {
            let h = input.load()?.local_complement(*vertex)?;
            Ok(Outcome::ok(match fmt {
                Format::Json => to_json(&graph_json(&h))?,
                _ => inline_edges(&h) + "\n",
            }))
        }
        Command::Orbit { input, budget } => cmd_orbit(&input.load()?, *budget, fmt),
        Command::Equiv { first, second, budget } => {
            let (a, b) = (first.load()?, second.load()?);
            let equivalent = are_lc_equivalent(&a, &b, *budget)?;
            let isomorphic = is_isomorphic(&a, &b).is_some();
            Ok(Outcome::ok(match fmt {
                Format::Json => to_json(&json!({ "equivalent": equivalent, "isomorphic": isomorphic }))?,
                _ => format!("{}\n", if equivalent { "equivalent" } else { "inequivalent" }),
            }))
        }
        Command::Classify { measure, gem: args, tol } => {
            let r = build_report((*measure).into(), &args.config(), *tol)?;
            Ok(Outcome::ok(match fmt {
                Format::Json => to_json(&r)?,
                Format::Csv => render_report_csv(&r)?,
                Format::Table => render_report_text(&r),
            }))
        }
        Command::RpTable { gem: args, tol } => {
            let cfg = args.config();
            let a = build_report(MeasureKind::Gcm, &cfg, *tol)?;
            let b = build_report(MeasureKind::Gem, &cfg, *tol)?;
            let t = RpTable::from_reports(&a, &b);
            Ok(Outcome::ok(match fmt {
                Format::Json => to_json(&t)?,
                Format::Csv => render_rp_csv(&t)?,
                Format::Table => render_rp_text(&t),
            }))
        }
        Command::VerifyCatalog {
            budget,
            lc_pairwise,
            full_partition,
        } => cmd_verify(*budget, *lc_pairwise, *full_partition, fmt),
        Command::ExportCatalog { dir } => {
            export_corpus(dir)?;
            Ok(Outcome::ok(format!("wrote {CATALOG_SIZE} graphs to {}\n", dir.display())))
        }
    }
}

fn cmd_state(g: &Graph, fmt: Format) -> Result<Outcome> {
    let s = StateVector::graph_state(g)?;
    let n = s.n();
    let text = match fmt {
        Format::Json => to_json(&s.to_json())?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["index", "basis", "re", "im"])?;
            for (i, a) in s.amplitudes().iter().enumerate() {
                w.write_record([i.to_string(), format!("{i:0n$b}"), a.re.to_string(), a.im.to_string()])?;
            }
            String::from_utf8(w.into_inner()?)?
        }
        Format::Table => {
            let mut out = format!("# {n} qubits; qubit 1 is the most significant bit\n");
            for (i, a) in s.amplitudes().iter().enumerate() {
                out += &format!("{i:>4}  |{i:0n$b}>  {:>9.5}  {:>9.5}\n", a.re, a.im);
            }
            out
        }
    };
    Ok(Outcome::ok(text))
}

fn measure_output(g: &Graph, r: &MeasureResult, fmt: Format) -> Result<Outcome> {
    let label = r.kind.label();
    let text = match fmt {
        Format::Json => to_json(&json!({ "graph": graph_json(g), "result": r }))?,
        Format::Csv => format!("measure,value\n{},{}\n", label.to_lowercase(), r.value),
        Format::Table => {
            let mut out = format!("{label} {:.5}\n", r.value);
            if let Some(d) = &r.diagnostics {
                out += &format!(
                    "best fidelity {:.10}  restarts {}  best restart {}  sweeps {}  converged {}  restarts at best {}\n",
                    d.best_fidelity, d.restarts_used, d.best_restart_index, d.iterations, d.converged, d.restarts_at_best
                );
            }
            out
        }
    };
    Ok(Outcome::ok(text))
}

fn cmd_orbit(g: &Graph, budget: usize, fmt: Format) -> Result<Outcome> {
    let orbit = match lc_orbit(g, budget) {
        Ok(o) => o,
        Err(GraphError::BudgetExceeded { budget }) => {
            return Ok(Outcome {
                text: format!("budget exceeded: orbit has more than {budget} members\n"),
                ok: false,
            })
        }
        Err(e) => return Err(e.into()),
    };
    let text = match fmt {
        Format::Json => to_json(&json!({
            "size": orbit.size(),
            "representatives": orbit.representatives.iter().map(graph_json).collect::<Vec<_>>(),
        }))?,
        _ => {
            let mut out = format!("orbit size {}\n", orbit.size());
            for r in &orbit.representatives {
                out += &format!("{}\n", inline_edges(r));
            }
            out
        }
    };
    Ok(Outcome::ok(text))
}

struct Check {
    name: String,
    pass: bool,
    detail: String,
}

fn check(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        pass,
        detail: detail.into(),
    }
}

fn cmd_verify(budget: usize, lc_pairwise: bool, full_partition: bool, fmt: Format) -> Result<Outcome> {
    let entries = catalog();
    let mut checks = Vec::new();

    let disconnected: Vec<usize> = entries.iter().filter(|e| !e.graph.is_connected()).map(|e| e.id).collect();
    checks.push(check("connected", disconnected.is_empty(), format!("{} of 45 connected", 45 - disconnected.len())));

    let mut counts = [0usize; 8];
    entries.iter().for_each(|e| counts[e.n()] += 1);
    checks.push(check(
        "n-buckets",
        counts[2..] == [1, 1, 2, 4, 11, 26],
        format!("{:?} for n = 2..7", &counts[2..]),
    ));

    let iso_pairs: Vec<(usize, usize)> = entries
        .par_iter()
        .flat_map_iter(|a| {
            entries
                .iter()
                .filter(move |b| b.id > a.id && is_isomorphic(&a.graph, &b.graph).is_some())
                .map(move |b| (a.id, b.id))
        })
        .collect();
    checks.push(check(
        "pairwise non-isomorphic",
        iso_pairs.is_empty(),
        format!("{} isomorphic pairs among 990", iso_pairs.len()),
    ));

    let mut stabilizer_worst = 0.0f64;
    let mut lc_worst = 0.0f64;
    for e in entries {
        let s = StateVector::graph_state(&e.graph)?;
        for a in 1..=e.n() {
            let k = s.stabilizer_expectation(&e.graph, a)?;
            stabilizer_worst = stabilizer_worst.max((k - 1.0).norm());
            let built = StateVector::graph_state(&e.graph.local_complement(a)?)?;
            let rotated = s.apply_lc_unitary(&e.graph, a)?;
            lc_worst = lc_worst.max((built.inner_product(&rotated)?.norm() - 1.0).abs());
        }
    }
    checks.push(check(
        "stabilizers",
        stabilizer_worst < 1e-12,
        format!("max |<G|K_a|G> - 1| = {stabilizer_worst:.2e}"),
    ));
    checks.push(check(
        "LC unitary",
        lc_worst < 1e-10,
        format!("max ||<LC(G)|U|G>| - 1| = {lc_worst:.2e}"),
    ));

    if lc_pairwise {
        let orbits: Vec<(usize, Result<LcOrbit, GraphError>)> =
            entries.par_iter().map(|e| (e.id, lc_orbit(&e.graph, budget))).collect();
        let mut complete = Vec::new();
        for (id, o) in &orbits {
            match o {
                Ok(o) => complete.push((*id, o)),
                Err(e) => checks.push(check(format!("orbit {id}"), false, e.to_string())),
            }
        }
        if complete.len() == entries.len() {
            let mut overlapping = Vec::new();
            let mut pairs = 0;
            for (i, (a, oa)) in complete.iter().enumerate() {
                for (b, ob) in &complete[i + 1..] {
                    pairs += 1;
                    let same_n = oa.representatives[0].n() == ob.representatives[0].n();
                    if same_n && !oa.is_disjoint(ob) {
                        overlapping.push(format!("{a}~{b}"));
                    }
                }
            }
            checks.push(check(
                "LC-pairwise",
                overlapping.is_empty(),
                if overlapping.is_empty() {
                    format!("{pairs} pairs with disjoint orbits")
                } else {
                    format!("equivalent pairs: {}", overlapping.join(" "))
                },
            ));
        }
    }

    if full_partition {
        for n in 2..=7 {
            let p = lc_partition(n)?;
            let mut hits = vec![Vec::new(); p.class_count()];
            for e in entries.iter().filter(|e| e.n() == n) {
                if let Some(c) = p.class_of(&e.graph) {
                    hits[c].push(e.id);
                }
            }
            let exact = hits.iter().all(|h| h.len() == 1);
            let missed = hits.iter().filter(|h| h.is_empty()).count();
            let doubled: Vec<String> = hits
                .iter()
                .filter(|h| h.len() > 1)
                .map(|h| h.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("~"))
                .collect();
            checks.push(check(
                format!("partition n={n}"),
                exact,
                format!(
                    "{} connected LC classes; {} without catalog entry; shared: [{}]",
                    p.class_count(),
                    missed,
                    doubled.join(" ")
                ),
            ));
        }
    }

    let ok = checks.iter().all(|c| c.pass);
    let text = match fmt {
        Format::Json => to_json(&json!({
            "ok": ok,
            "checks": checks.iter().map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail})).collect::<Vec<_>>(),
        }))?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["check", "status", "detail"])?;
            for c in &checks {
                w.write_record([c.name.as_str(), if c.pass { "PASS" } else { "FAIL" }, c.detail.as_str()])?;
            }
            String::from_utf8(w.into_inner()?)?
        }
        Format::Table => {
            let mut out = String::new();
            for c in &checks {
                out += &format!("{:<4}  {:<24} {}\n", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            out
        }
    };
    Ok(Outcome { text, ok })
}
