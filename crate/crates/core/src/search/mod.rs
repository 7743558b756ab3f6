//! Exhaustive, isomorphism-reduced search for graphs of a given order
//! below or above the Moore bound.
//!
//! Phase 1 enumerates the undirected part up to isomorphism. Phase 2 adds
//! arcs vertex by vertex, keeping walk-count rows for every root and pruning
//! as soon as a row breaks the mode's constraint. Phase 3 keeps one graph
//! per canonical form and re-certifies it.

mod factors;
pub mod incremental;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::moore_bound;
use crate::canon::{canonize, CanonicalForm};
use crate::certify::{check_graph, Classification, Mode};
use crate::graph::MixedGraph;
use crate::walks::undirected_distances_from;

pub use factors::{enumerate_2factors, undirected_parts, DegreeRule};
use incremental::IncrementalWalks;

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub r: usize,
    pub z: usize,
    pub k: usize,
    pub mode: Mode,
    /// δ in defect mode, ε in excess mode.
    pub slack: usize,
    /// Require `d(u) = r` and `d⁺(u) = d⁻(u) = z` everywhere.
    pub assume_total_regular: bool,
    /// Find every class instead of stopping at the first graph.
    pub enumerate_all: bool,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    pub node_budget: u64,
    /// For `(2,1,2)` excess 1: only allow arcs whose ends are at undirected
    /// distance at least 4.
    pub arc_distance_prune: bool,
    /// Admit every undirected cycle whose length the slack can absorb,
    /// instead of the tighter floor known for defect 1 at `k = 2`.
    pub unpruned_phase1: bool,
    /// Admit opposite arc pairs `u → v`, `v → u`. Off by default: such a
    /// pair plays the role of an edge and is not counted as one.
    pub allow_digons: bool,
}

impl SearchSpec {
    pub fn new(r: usize, z: usize, k: usize, mode: Mode, slack: usize) -> Self {
        SearchSpec {
            r,
            z,
            k,
            mode,
            slack,
            assume_total_regular: false,
            enumerate_all: true,
            workers: None,
            node_budget: DEFAULT_NODE_BUDGET,
            arc_distance_prune: false,
            unpruned_phase1: false,
            allow_digons: false,
        }
    }

    pub fn target_order(&self) -> Result<usize, SearchError> {
        let bound = moore_bound(self.r as u64, self.z as u64, self.k as u64)
            .as_u64()
            .ok_or_else(|| SearchError::Infeasible("Moore bound exceeds 64 bits".into()))?;
        let n = match self.mode {
            Mode::Defect => bound.checked_sub(self.slack as u64).filter(|&n| n >= 1),
            Mode::Excess => bound.checked_add(self.slack as u64),
        };
        n.and_then(|n| usize::try_from(n).ok())
            .ok_or_else(|| SearchError::Infeasible(format!("no positive target order for M = {bound}")))
    }

    /// Shortest admissible undirected cycle. A cycle of length `L ≤ 2k+1`
    /// through a root carries `2k` cycle walks onto `L` vertices, so the
    /// root's Moore tree has at least `2k + 1 − L` surplus entries.
    pub fn girth_floor(&self) -> usize {
        let k = self.k;
        match self.mode {
            Mode::Excess => 2 * k + 1,
            Mode::Defect if self.slack == 1 && k == 2 && !self.unpruned_phase1 => 5,
            Mode::Defect => (3..=2 * k + 1).find(|&l| 2 * k + 1 - l <= self.slack).unwrap_or(3),
        }
    }

    /// Degree rules for the undirected part and the out-degree.
    pub fn degree_rules(&self) -> (DegreeRule, DegreeRule) {
        if self.slack <= 1 || self.assume_total_regular {
            return (DegreeRule::Exact(self.r), DegreeRule::Exact(self.z));
        }
        match self.mode {
            Mode::Defect => (DegreeRule::AtMost(self.r), DegreeRule::AtMost(self.z)),
            Mode::Excess => (DegreeRule::AtLeast(self.r), DegreeRule::AtLeast(self.z)),
        }
    }

    fn expected_classification(&self) -> Classification {
        match (self.mode, self.slack as u64) {
            (_, 0) => Classification::Moore,
            (Mode::Defect, delta) => Classification::Defect { delta },
            (Mode::Excess, epsilon) => Classification::Excess { epsilon },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("infeasible search: {0}")]
    Infeasible(String),
    #[error("node budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("invalid search options: {0}")]
    Options(String),
    #[error("search produced a graph that fails certification: {0}")]
    Verification(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneCounts {
    /// A root gained a second walk to some vertex (excess mode).
    pub geodecity: u64,
    /// A root's Moore tree exceeded the slack (defect mode).
    pub surplus: u64,
    /// In-degree cap under total regularity.
    pub in_degree: u64,
    /// Complete assignments missing some vertex within distance `k`.
    pub coverage: u64,
    /// Arc opposite to an existing arc.
    pub digon: u64,
    /// First-vertex choices dropped as equivalent under automorphisms.
    pub symmetry: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub target_order: usize,
    pub girth_floor: usize,
    pub undirected_parts: usize,
    pub tasks: usize,
    pub nodes: u64,
    pub raw_solutions: u64,
    pub prunes: PruneCounts,
    pub wall_time: Duration,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    /// One canonically labeled graph per class, sorted by canonical form.
    pub graphs: Vec<MixedGraph>,
    pub forms: Vec<CanonicalForm>,
    pub stats: SearchStats,
}

struct Shared {
    budget: u64,
    nodes: AtomicU64,
    stop: AtomicBool,
    over_budget: AtomicBool,
}

struct Context<'a> {
    spec: &'a SearchSpec,
    n: usize,
    out_rule: DegreeRule,
    shared: &'a Shared,
}

struct Worker<'a> {
    ctx: &'a Context<'a>,
    targets: &'a [Vec<usize>],
    walks: IncrementalWalks,
    local_nodes: u64,
    prunes: PruneCounts,
    found: Vec<MixedGraph>,
}

const FLUSH: u64 = 1024;

impl Worker<'_> {
    fn tick(&mut self) -> bool {
        self.local_nodes += 1;
        if self.local_nodes.is_multiple_of(FLUSH) {
            let total = self.ctx.shared.nodes.fetch_add(FLUSH, Ordering::Relaxed) + FLUSH;
            if total > self.ctx.shared.budget {
                self.ctx.shared.over_budget.store(true, Ordering::Relaxed);
                self.ctx.shared.stop.store(true, Ordering::Relaxed);
            }
        }
        !self.ctx.shared.stop.load(Ordering::Relaxed)
    }

    fn finish(&mut self) {
        let rest = self.local_nodes % FLUSH;
        let total = self.ctx.shared.nodes.fetch_add(rest, Ordering::Relaxed) + rest;
        if total > self.ctx.shared.budget {
            self.ctx.shared.over_budget.store(true, Ordering::Relaxed);
        }
    }

    /// Pushes `a → b`; returns false (with the arc popped) on a violation.
    fn try_arc(&mut self, a: usize, b: usize) -> bool {
        let spec = self.ctx.spec;
        if !spec.allow_digons && self.walks.out(b).contains(&a) {
            self.prunes.digon += 1;
            return false;
        }
        if spec.assume_total_regular && self.walks.in_degree(b) >= spec.z {
            self.prunes.in_degree += 1;
            return false;
        }
        let touched = self.walks.push_arc(a, b).to_vec();
        let ok = match spec.mode {
            Mode::Excess => {
                let ok = touched.iter().all(|&u| self.walks.row_geodetic(u));
                if !ok {
                    self.prunes.geodecity += 1;
                }
                ok
            }
            Mode::Defect => {
                let ok = touched.iter().all(|&u| self.walks.row_surplus(u) <= spec.slack as u128);
                if !ok {
                    self.prunes.surplus += 1;
                }
                ok
            }
        };
        if !ok {
            self.walks.pop_arc();
        }
        ok
    }

    fn leaf(&mut self) {
        let spec = self.ctx.spec;
        let n = self.ctx.n;
        if spec.mode == Mode::Defect && !(0..n).all(|u| self.walks.row_covers(u)) {
            self.prunes.coverage += 1;
            return;
        }
        if spec.assume_total_regular && !(0..n).all(|v| self.walks.in_degree(v) == spec.z) {
            self.prunes.in_degree += 1;
            return;
        }
        self.found.push(self.walks.to_graph());
        if !spec.enumerate_all {
            self.ctx.shared.stop.store(true, Ordering::Relaxed);
        }
    }

    /// Assigns out-neighbourhoods to vertices `v..n`.
    fn assign(&mut self, v: usize) {
        if v == self.ctx.n {
            self.leaf();
            return;
        }
        self.choose(v, 0, 0);
    }

    fn choose(&mut self, v: usize, from: usize, count: usize) {
        let rule = self.ctx.out_rule;
        let available = self.targets[v].len();
        if rule.admits(count) {
            self.assign(v + 1);
        }
        let ceiling = rule.ceiling(available);
        let floor = match rule {
            DegreeRule::Exact(x) | DegreeRule::AtLeast(x) => x,
            DegreeRule::AtMost(_) => 0,
        };
        if count >= ceiling {
            return;
        }
        for i in from..available {
            if count + (available - i) < floor {
                break;
            }
            if !self.tick() {
                return;
            }
            let t = self.targets[v][i];
            if self.try_arc(v, t) {
                self.choose(v, i + 1, count + 1);
                self.walks.pop_arc();
            }
        }
    }
}

/// Subsets of `items` with sizes admitted by `rule`, in lexicographic order.
fn subsets(items: &[usize], rule: DegreeRule) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let ceiling = rule.ceiling(items.len());
    fn rec(items: &[usize], from: usize, cur: &mut Vec<usize>, ceiling: usize, rule: DegreeRule, out: &mut Vec<Vec<usize>>) {
        if rule.admits(cur.len()) {
            out.push(cur.clone());
        }
        if cur.len() == ceiling {
            return;
        }
        for i in from..items.len() {
            cur.push(items[i]);
            rec(items, i + 1, cur, ceiling, rule, out);
            cur.pop();
        }
    }
    rec(items, 0, &mut Vec::new(), ceiling, rule, &mut out);
    out
}

/// Smallest image of the sorted set `s` under the group generated by `gens`.
fn orbit_min(s: &[usize], gens: &[Vec<usize>]) -> Vec<usize> {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut queue = vec![s.to_vec()];
    seen.insert(s.to_vec());
    while let Some(cur) = queue.pop() {
        for g in gens {
            let mut img: Vec<usize> = cur.iter().map(|&v| g[v]).collect();
            img.sort_unstable();
            if seen.insert(img.clone()) {
                queue.push(img);
            }
        }
    }
    seen.into_iter().min().expect("orbit contains s")
}

struct Task {
    part: usize,
    arcs: Vec<(usize, usize)>,
}

/// Runs the three phases. Every returned graph has the target order and
/// passes [`check_graph`] with the spec's parameters.
pub fn search_extremal(spec: &SearchSpec) -> Result<SearchResult, SearchError> {
    let start = Instant::now();
    if spec.k == 0 {
        return Err(SearchError::Infeasible("k must be at least 1".into()));
    }
    if spec.arc_distance_prune && (spec.r, spec.z, spec.k, spec.mode, spec.slack) != (2, 1, 2, Mode::Excess, 1) {
        return Err(SearchError::Options("the arc distance prune applies to (2,1,2) excess 1 only".into()));
    }
    let n = spec.target_order()?;
    let girth_floor = spec.girth_floor();
    let (undirected_rule, out_rule) = spec.degree_rules();
    let parts = undirected_parts(n, undirected_rule, girth_floor);

    let shared = Shared {
        budget: spec.node_budget,
        nodes: AtomicU64::new(0),
        stop: AtomicBool::new(false),
        over_budget: AtomicBool::new(false),
    };
    let ctx = Context { spec, n, out_rule, shared: &shared };
    let mut prunes = PruneCounts::default();

    let targets: Vec<Vec<Vec<usize>>> = parts
        .iter()
        .map(|h| {
            (0..n)
                .map(|v| {
                    let dist = undirected_distances_from(h, v);
                    (0..n)
                        .filter(|&w| w != v && !h.has_edge(v, w))
                        .filter(|&w| !spec.arc_distance_prune || dist[w].is_none_or(|d| d >= 4))
                        .collect()
                })
                .collect()
        })
        .collect();

    // Tasks: first-vertex choices up to the stabilizer of vertex 0, then
    // every second-vertex choice.
    let mut tasks = Vec::new();
    for (p, h) in parts.iter().enumerate() {
        if n == 0 {
            continue;
        }
        let mut colors = vec![1; n];
        colors[0] = 0;
        let gens = canonize(h, Some(&colors)).generators;
        let firsts = subsets(&targets[p][0], out_rule);
        let total_firsts = firsts.len();
        let firsts: Vec<_> = firsts.into_iter().filter(|s| orbit_min(s, &gens) == *s).collect();
        prunes.symmetry += (total_firsts - firsts.len()) as u64;
        let seconds = if n > 1 { subsets(&targets[p][1], out_rule) } else { vec![Vec::new()] };
        for a in &firsts {
            for b in &seconds {
                let arcs = a.iter().map(|&w| (0, w)).chain(b.iter().map(|&w| (1, w))).collect();
                tasks.push(Task { part: p, arcs });
            }
        }
    }

    let collected: Mutex<(Vec<MixedGraph>, PruneCounts)> = Mutex::new((Vec::new(), PruneCounts::default()));
    let run_task = |task: &Task| {
        if shared.stop.load(Ordering::Relaxed) {
            return;
        }
        let h = &parts[task.part];
        let mut worker = Worker {
            ctx: &ctx,
            targets: &targets[task.part],
            walks: IncrementalWalks::new(h, spec.k),
            local_nodes: 0,
            prunes: PruneCounts::default(),
            found: Vec::new(),
        };
        let mut ok = true;
        for &(a, b) in &task.arcs {
            worker.tick();
            if !worker.try_arc(a, b) {
                ok = false;
                break;
            }
        }
        if ok {
            worker.assign(n.min(2));
        }
        worker.finish();
        let mut guard = collected.lock().expect("collector lock");
        guard.0.append(&mut worker.found);
        let p = &mut guard.1;
        p.geodecity += worker.prunes.geodecity;
        p.surplus += worker.prunes.surplus;
        p.in_degree += worker.prunes.in_degree;
        p.digon += worker.prunes.digon;
        p.coverage += worker.prunes.coverage;
    };
    match spec.workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| SearchError::Options(e.to_string()))?;
            pool.install(|| tasks.par_iter().for_each(run_task));
        }
        None => tasks.par_iter().for_each(run_task),
    }
    if shared.over_budget.load(Ordering::Relaxed) {
        return Err(SearchError::BudgetExceeded { budget: spec.node_budget });
    }

    let (raw, worker_prunes) = collected.into_inner().expect("collector lock");
    prunes.geodecity += worker_prunes.geodecity;
    prunes.surplus += worker_prunes.surplus;
    prunes.in_degree += worker_prunes.in_degree;
    prunes.digon += worker_prunes.digon;
    prunes.coverage += worker_prunes.coverage;
    let raw_solutions = raw.len() as u64;

    let mut classes: BTreeMap<CanonicalForm, MixedGraph> = BTreeMap::new();
    for g in raw {
        let c = canonize(&g, None);
        classes.entry(c.form.clone()).or_insert_with(|| c.canonical_graph(&g));
    }
    let expected = spec.expected_classification();
    for g in classes.values() {
        let report = check_graph(g, spec.r, spec.z, spec.k, spec.mode)
            .map_err(|e| SearchError::Verification(e.to_string()))?;
        if report.classification != expected {
            return Err(SearchError::Verification(format!(
                "expected {expected}, certified {}",
                report.classification
            )));
        }
    }
    let (forms, graphs): (Vec<_>, Vec<_>) = classes.into_iter().unzip();
    let stats = SearchStats {
        target_order: n,
        girth_floor,
        undirected_parts: parts.len(),
        tasks: tasks.len(),
        nodes: shared.nodes.load(Ordering::Relaxed),
        raw_solutions,
        prunes,
        wall_time: start.elapsed(),
    };
    Ok(SearchResult { graphs, forms, stats })
}

/// Distinct canonical forms of `graphs`.
pub fn distinct_forms<'a>(graphs: impl IntoIterator<Item = &'a MixedGraph>) -> BTreeSet<CanonicalForm> {
    graphs.into_iter().map(crate::canon::canonical_form).collect()
}
