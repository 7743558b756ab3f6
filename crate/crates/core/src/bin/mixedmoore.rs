use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mixed_moore::bounds::{moore_bound, moore_bound_terms, order_11k, spectral_infeasibility_defect1};
use mixed_moore::canon::{are_isomorphic, canonize};
use mixed_moore::certify::{
    check_graph, matrix_identity_defect, matrix_identity_excess, moore_tree, tree_to_dot, CertifyError, Mode,
};
use mixed_moore::constructions::{almost_moore_10, dihedral_cayley, excess_one_12, kautz_collapse};
use mixed_moore::dot::to_dot;
use mixed_moore::format::{parse_graph, to_text};
use mixed_moore::graph::MixedGraph;
use mixed_moore::search::{search_extremal, SearchError, SearchSpec, DEFAULT_NODE_BUDGET};

/// Stdout writes that end the process quietly when the reader goes away.
fn emit(args: std::fmt::Arguments, newline: bool) {
    let mut out = std::io::stdout().lock();
    let res = out.write_fmt(args).and_then(|()| if newline { out.write_all(b"\n") } else { Ok(()) });
    if let Err(e) = res {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("writing to stdout: {e}");
    }
}

macro_rules! out {
    ($($t:tt)*) => { emit(format_args!($($t)*), false) };
}

macro_rules! outln {
    ($($t:tt)*) => { emit(format_args!($($t)*), true) };
}

const BUDGET_ENV: &str = "MIXEDMOORE_NODE_BUDGET";

#[derive(Parser)]
#[command(name = "mixedmoore", version, about = "Mixed graphs near the mixed Moore bound")]
struct Cli {
    /// Structured JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Defect,
    Excess,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Defect => Mode::Defect,
            ModeArg::Excess => Mode::Excess,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeFormat {
    Text,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Dot,
    V1,
}

#[derive(Clone, Copy, ValueEnum)]
enum Named {
    Fig1,
    Fig6,
    Dihedral,
    Kautz,
}

#[derive(Subcommand)]
enum Command {
    /// Mixed Moore bound M(r, z, k).
    Bound {
        #[arg(long)]
        r: u64,
        #[arg(long)]
        z: u64,
        #[arg(long)]
        k: u64,
        /// Per-level counts of the Moore tree.
        #[arg(long)]
        levels: bool,
    },
    /// Order and parity test for (1,1,k;-1)-graphs.
    #[command(name = "feasible-11k")]
    Feasible11k {
        #[arg(long)]
        k: u64,
    },
    /// Trace test for non-totally-regular (2,z,2;-1)-graphs.
    Spectral {
        #[arg(long)]
        z: u64,
        /// Test every value from z up to this one.
        #[arg(long)]
        max: Option<u64>,
    },
    /// Certify a graph file.
    Check {
        file: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        z: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Also print the structure audit and, at k = 2, the matrix identity.
        #[arg(long)]
        audit: bool,
    },
    /// Moore tree of depth k at a root.
    Tree {
        file: PathBuf,
        #[arg(long)]
        root: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: TreeFormat,
    },
    /// Exhaustive search for graphs of order M - slack (defect) or M + slack (excess).
    Search {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        z: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        slack: usize,
        #[arg(long)]
        assume_total_regular: bool,
        /// Find every isomorphism class instead of stopping at the first.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        jobs: Option<usize>,
        /// Node budget (default 10^9, or the MIXEDMOORE_NODE_BUDGET variable).
        #[arg(long)]
        budget: Option<u64>,
        /// Directory for graph files and summary.json.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exit with status 1 when nothing is found.
        #[arg(long)]
        expect_some: bool,
        /// (2,1,2) excess 1 only: arcs must join vertices at undirected distance >= 4.
        #[arg(long)]
        arc_distance_prune: bool,
        /// Admit every undirected cycle length the slack can absorb.
        #[arg(long)]
        unpruned_phase1: bool,
        /// Admit opposite arc pairs.
        #[arg(long)]
        allow_digons: bool,
    },
    /// Print a named or generated graph in v1 format.
    Construct {
        #[arg(value_enum)]
        name: Named,
        #[arg(long)]
        m: Option<usize>,
        /// Comma-separated words, e.g. "x^2".
        #[arg(long, value_delimiter = ',')]
        arc_gens: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        edge_gens: Vec<String>,
        #[arg(long)]
        z: Option<usize>,
    },
    /// Canonical form and canonically labeled graph.
    Canon { file: PathBuf },
    /// Isomorphism test; exit status 1 when not isomorphic.
    Iso { first: PathBuf, second: PathBuf },
    /// Convert a graph file.
    Export {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: ExportFormat,
    },
}

enum Failure {
    Check(String),
    Usage(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Budget(_) => 3,
        }
    }
}

type Outcome = Result<(), Failure>;

fn read_graph(path: &Path) -> Result<MixedGraph, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_graph(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn graph_json(g: &MixedGraph) -> Value {
    json!({ "n": g.order(), "edges": g.edges(), "arcs": g.arcs() })
}

fn print_json(v: &Value) {
    outln!("{}", serde_json::to_string_pretty(v).expect("json value serializes"));
}

fn big(x: &num_bigint::BigUint) -> Value {
    use num_traits::ToPrimitive;
    x.to_u64().map_or_else(|| Value::String(x.to_string()), Value::from)
}

fn cmd_bound(json: bool, r: u64, z: u64, k: u64, levels: bool) -> Outcome {
    let mb = moore_bound(r, z, k);
    let terms = moore_bound_terms(r, z, k);
    let agrees = terms.agrees();
    if json {
        let lv: Vec<Value> = (0..=mb.levels.depth())
            .map(|i| json!({ "level": i, "edge_ended": big(&mb.levels.edge_ended[i]), "arc_ended": big(&mb.levels.arc_ended[i]) }))
            .collect();
        let mut v = json!({ "r": r, "z": z, "k": k, "bound": big(&mb.bound), "closed_form_agrees": agrees });
        if levels {
            v["levels"] = Value::Array(lv);
        }
        print_json(&v);
    } else {
        outln!("{}", mb.bound);
        if levels {
            for i in 0..=mb.levels.depth() {
                outln!(
                    "level {i}: {} (edge-ended {}, arc-ended {})",
                    mb.levels.level(i),
                    mb.levels.edge_ended[i],
                    mb.levels.arc_ended[i]
                );
            }
            match agrees {
                Some(true) => outln!("closed form: agrees"),
                Some(false) => outln!("closed form: DISAGREES"),
                None => outln!("closed form: skipped (a root equals 1)"),
            }
        }
    }
    match agrees {
        Some(false) => Err(Failure::Check("closed form disagrees with the recurrence".into())),
        _ => Ok(()),
    }
}

fn cmd_feasible(json: bool, k: u64) -> Outcome {
    let v = order_11k(k);
    if json {
        print_json(&json!({ "k": k, "order": big(&v.order), "feasible": v.parity_feasible }));
    } else {
        outln!("k={} order={} {}", k, v.order, if v.parity_feasible { "feasible" } else { "infeasible (odd order)" });
    }
    Ok(())
}

fn cmd_spectral(json: bool, z: u64, max: Option<u64>) -> Outcome {
    let hi = max.unwrap_or(z);
    if hi < z {
        return Err(Failure::Usage(format!("--max {hi} is below --z {z}")));
    }
    let mut rows = Vec::new();
    for z in z..=hi {
        let v = spectral_infeasibility_defect1(z);
        if json {
            rows.push(json!({
                "z": z,
                "order": big(&v.order),
                "square_identity_holds": v.square_identity_holds,
                "sums": v.sums.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                "infeasible": v.infeasible,
            }));
        } else {
            let sums: Vec<String> = v.sums.iter().map(|s| s.to_string()).collect();
            outln!(
                "z={} n={} sums=[{}] {}",
                z,
                v.order,
                sums.join(", "),
                if v.infeasible { "infeasible" } else { "not excluded" }
            );
        }
    }
    if json {
        print_json(&Value::Array(rows));
    }
    Ok(())
}

fn cmd_check(json: bool, file: &Path, r: usize, z: usize, k: usize, mode: Mode, audit: bool) -> Outcome {
    let g = read_graph(file)?;
    let report = match check_graph(&g, r, z, k, mode) {
        Ok(rep) => rep,
        Err(CertifyError::DegreeBound(v)) => {
            if json {
                print_json(&json!({ "error": "degree bounds violated", "violations": v }));
            } else {
                for d in &v {
                    outln!("degree violation: vertex {} has d={} d+={}", d.vertex, d.undirected, d.out);
                }
            }
            return Err(Failure::Check(format!("degree bounds violated at {} vertices", v.len())));
        }
        Err(e) => return Err(Failure::Check(e.to_string())),
    };
    let identity = if audit && k == 2 {
        match (mode, report.delta, report.epsilon) {
            (Mode::Defect, Some(1), _) if r == 2 => matrix_identity_defect(&g).ok(),
            (Mode::Excess, _, Some(1)) => matrix_identity_excess(&g, r).ok(),
            _ => None,
        }
    } else {
        None
    };
    if json {
        let mut v = serde_json::to_value(&report).expect("report serializes");
        if !audit {
            v.as_object_mut().expect("object").remove("audits");
        }
        if let Some(id) = &identity {
            v["matrix_identity"] = json!({ "holds": id.holds, "mismatches": id.mismatches.len() });
        }
        print_json(&v);
    } else {
        let text = report.to_key_value();
        for line in text.lines() {
            if audit || !line.starts_with("audits[") {
                outln!("{line}");
            }
        }
        if let Some(id) = &identity {
            outln!("matrix_identity: {}", if id.holds { "holds" } else { "fails" });
        }
    }
    if !report.in_family() {
        return Err(Failure::Check(format!("classification: {}", report.classification)));
    }
    if identity.is_some_and(|id| !id.holds) {
        return Err(Failure::Check("matrix identity fails".into()));
    }
    Ok(())
}

fn cmd_tree(json: bool, file: &Path, root: usize, k: usize, format: TreeFormat) -> Outcome {
    let g = read_graph(file)?;
    let tree = moore_tree(&g, root, k).map_err(|e| Failure::Usage(e.to_string()))?;
    if json {
        print_json(&serde_json::to_value(&tree).expect("tree serializes"));
        return Ok(());
    }
    match format {
        TreeFormat::Dot => out!("{}", tree_to_dot(&tree)),
        TreeFormat::Text => {
            for (i, e) in tree.entries.iter().enumerate() {
                let parent = e.parent.map_or("-".to_string(), |p| format!("u{p}"));
                let step = match e.step {
                    Some(mixed_moore::certify::StepKind::Edge) => "edge",
                    Some(mixed_moore::certify::StepKind::Arc) => "arc",
                    None => "root",
                };
                outln!("u{i} v{} level {} parent {parent} {step}", e.vertex, e.level);
            }
            outln!("level sizes: {:?}", tree.level_sizes());
            outln!("duplicates: {:?}", tree.duplicates);
            outln!("missing: {:?}", tree.missing);
        }
    }
    Ok(())
}

fn cmd_search(json: bool, spec: SearchSpec, out: Option<&Path>, expect_some: bool) -> Outcome {
    let result = match search_extremal(&spec) {
        Ok(res) => res,
        Err(e @ SearchError::BudgetExceeded { .. }) => return Err(Failure::Budget(e.to_string())),
        Err(e @ SearchError::Verification(_)) => return Err(Failure::Check(e.to_string())),
        Err(e) => return Err(Failure::Usage(e.to_string())),
    };
    let summary = json!({
        "spec": spec,
        "classes": result.graphs.len(),
        "forms": result.forms.iter().map(|f| f.to_hex()).collect::<Vec<_>>(),
        "stats": result.stats,
    });
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
        for (i, g) in result.graphs.iter().enumerate() {
            let path = dir.join(format!("graph_{i:03}.mg"));
            std::fs::write(&path, to_text(g)).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        }
        let path = dir.join("summary.json");
        std::fs::write(&path, serde_json::to_string_pretty(&summary).expect("summary serializes"))
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    if json {
        let mut v = summary.clone();
        v["graphs"] = Value::Array(result.graphs.iter().map(graph_json).collect());
        print_json(&v);
    } else {
        let s = &result.stats;
        outln!("target order: {}", s.target_order);
        outln!("classes found: {}", result.graphs.len());
        outln!("undirected parts: {} (girth >= {})", s.undirected_parts, s.girth_floor);
        outln!("nodes: {}", s.nodes);
        outln!(
            "prunes: geodecity {} surplus {} in-degree {} coverage {} digon {} symmetry {}",
            s.prunes.geodecity, s.prunes.surplus, s.prunes.in_degree, s.prunes.coverage, s.prunes.digon, s.prunes.symmetry
        );
        outln!("wall time: {:.3}s", s.wall_time.as_secs_f64());
        match out {
            Some(dir) => outln!("wrote {} graph file(s) and summary.json to {}", result.graphs.len(), dir.display()),
            None => {
                for g in &result.graphs {
                    out!("\n{}", to_text(g));
                }
            }
        }
    }
    if expect_some && result.graphs.is_empty() {
        return Err(Failure::Check("no graph found".into()));
    }
    Ok(())
}

fn cmd_construct(
    json: bool,
    name: Named,
    m: Option<usize>,
    arc_gens: &[String],
    edge_gens: &[String],
    z: Option<usize>,
) -> Outcome {
    let g = match name {
        Named::Fig1 => almost_moore_10(),
        Named::Fig6 => excess_one_12(),
        Named::Kautz => kautz_collapse(z.ok_or_else(|| Failure::Usage("kautz needs --z".into()))?),
        Named::Dihedral => {
            let m = m.ok_or_else(|| Failure::Usage("dihedral needs --m".into()))?;
            dihedral_cayley(m, arc_gens, edge_gens).map_err(|e| Failure::Usage(e.to_string()))?
        }
    };
    if json {
        print_json(&graph_json(&g));
    } else {
        out!("{}", to_text(&g));
    }
    Ok(())
}

fn cmd_canon(json: bool, file: &Path) -> Outcome {
    let g = read_graph(file)?;
    let c = canonize(&g, None);
    let h = c.canonical_graph(&g);
    if json {
        print_json(&json!({ "form": c.form.to_hex(), "labeling": c.labeling, "graph": graph_json(&h) }));
    } else {
        outln!("form: {}", c.form.to_hex());
        out!("{}", to_text(&h));
    }
    Ok(())
}

fn cmd_iso(json: bool, a: &Path, b: &Path) -> Outcome {
    let (g, h) = (read_graph(a)?, read_graph(b)?);
    let iso = are_isomorphic(&g, &h);
    if json {
        print_json(&json!({ "isomorphic": iso }));
    } else {
        outln!("{}", if iso { "isomorphic" } else { "not isomorphic" });
    }
    if iso {
        Ok(())
    } else {
        Err(Failure::Check("graphs are not isomorphic".into()))
    }
}

fn cmd_export(json: bool, file: &Path, format: ExportFormat) -> Outcome {
    let g = read_graph(file)?;
    let text = match format {
        ExportFormat::Dot => to_dot(&g),
        ExportFormat::V1 => to_text(&g),
    };
    if json {
        print_json(&json!({ "format": match format { ExportFormat::Dot => "dot", ExportFormat::V1 => "v1" }, "text": text }));
    } else {
        out!("{text}");
    }
    Ok(())
}

fn default_budget() -> Result<u64, Failure> {
    match std::env::var(BUDGET_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| Failure::Usage(format!("{BUDGET_ENV}={s:?} is not an integer"))),
        Err(_) => Ok(DEFAULT_NODE_BUDGET),
    }
}

fn run(cli: Cli) -> Outcome {
    let json = cli.json;
    match cli.command {
        Command::Bound { r, z, k, levels } => cmd_bound(json, r, z, k, levels),
        Command::Feasible11k { k } => cmd_feasible(json, k),
        Command::Spectral { z, max } => cmd_spectral(json, z, max),
        Command::Check { file, r, z, k, mode, audit } => {
            if k == 0 {
                return Err(Failure::Usage("--k must be at least 1".into()));
            }
            cmd_check(json, &file, r, z, k, mode.into(), audit)
        }
        Command::Tree { file, root, k, format } => cmd_tree(json, &file, root, k, format),
        Command::Search {
            r,
            z,
            k,
            mode,
            slack,
            assume_total_regular,
            all,
            jobs,
            budget,
            out,
            expect_some,
            arc_distance_prune,
            unpruned_phase1,
            allow_digons,
        } => {
            let mut spec = SearchSpec::new(r, z, k, mode.into(), slack);
            spec.assume_total_regular = assume_total_regular;
            spec.enumerate_all = all;
            spec.workers = jobs;
            spec.node_budget = match budget {
                Some(b) => b,
                None => default_budget()?,
            };
            spec.arc_distance_prune = arc_distance_prune;
            spec.unpruned_phase1 = unpruned_phase1;
            spec.allow_digons = allow_digons;
            cmd_search(json, spec, out.as_deref(), expect_some)
        }
        Command::Construct { name, m, arc_gens, edge_gens, z } => cmd_construct(json, name, m, &arc_gens, &edge_gens, z),
        Command::Canon { file } => cmd_canon(json, &file),
        Command::Iso { first, second } => cmd_iso(json, &first, &second),
        Command::Export { file, format } => cmd_export(json, &file, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let msg = match &f {
                Failure::Check(m) | Failure::Usage(m) | Failure::Budget(m) => m,
            };
            eprintln!("mixedmoore: {msg}");
            ExitCode::from(f.code())
        }
    }
}
