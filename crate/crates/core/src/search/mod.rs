//! Exact `ex(n, C4)` for small `n` by canonical augmentation.
//!
//! Graphs grow one vertex at a time. A child `C = P + v` is accepted only if
//! `v` has minimum degree in `C` and deleting `v` is isomorphic to deleting
//! the canonical deletion vertex (the minimum-degree vertex earliest in the
//! canonical order), so every isomorphism class is generated from exactly one
//! parent class. Orders `1..n` are solved in turn; the exact values for
//! smaller orders bound every partial graph.
//!
//! Two admissible prunings use those values:
//! * backward: a target of `T` edges at order `n` needs at least
//!   `r(m-1) = r(m) - floor(2 r(m) / m)` edges at order `m - 1`, because the
//!   deleted vertex has minimum degree;
//! * forward: from `e` edges at order `k`, order `j` has at most
//!   `min(ub(j), e + floor(2 ub(j) / j))` edges.

mod oracle;

use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::bounds::{e0, reiman_bound};
use crate::canon::canonical_form;
use crate::graph::Graph;
use crate::graph6;

pub use oracle::{brute_force_classes, brute_force_oracle, ORACLE_MAX_N};

/// Largest order the search handles (one machine word per adjacency row).
pub const MAX_SEARCH_N: usize = 64;

/// Budget used when none is configured.
pub const DEFAULT_BUDGET: Duration = Duration::from_secs(600);

/// Partial graphs are handed to workers at this order.
const SPLIT_ORDER: usize = 8;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("order {n} exceeds the limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid seed witness: {0}")]
    InvalidSeed(String),
    #[error("budget exhausted; best so far has {} edges", .0.ex)]
    BudgetExhausted(Box<SearchResult>),
    #[error(
        "claimed extremal value {claimed} is too low: a C4-free graph with {found} edges exists"
    )]
    ExValueTooLow { claimed: u64, found: u64 },
    #[error("no C4-free graph on {n} vertices has {claimed} edges")]
    ExValueUnattained { n: usize, claimed: u64 },
}

/// A lower bound handed to the search.
#[derive(Debug, Clone)]
pub enum LowerSeed {
    /// A known C4-free graph on `n` vertices.
    Witness(Graph),
    /// A claimed value of `ex(n, C4)` or less; the search looks for graphs
    /// with at least this many edges first.
    Edges(u64),
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub n: usize,
    pub seed: Option<LowerSeed>,
    /// Upper bound at order `n`; `None` means [`default_ceiling`].
    pub ceiling: Option<u64>,
    pub budget: Duration,
    pub workers: usize,
    pub all_extremal: bool,
}

impl SearchConfig {
    pub fn new(n: usize) -> Self {
        SearchConfig {
            n,
            seed: None,
            ceiling: None,
            budget: DEFAULT_BUDGET,
            workers: 1,
            all_extremal: false,
        }
    }
}

/// The Reiman bound, tightened to `E0(q)` when `n = q^2 + q` with `q` even.
pub fn default_ceiling(n: usize) -> u64 {
    let reiman = reiman_bound(n as u64);
    let q = ((n as f64).sqrt() as u64).saturating_sub(1);
    (q..q + 3)
        .find(|&q| q >= 2 && q * q + q == n as u64 && q % 2 == 0)
        .map_or(reiman, |q| reiman.min(e0(q)))
}

/// What proves the reported value optimal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertifiedBy {
    /// The search finished without finding a better graph.
    Exhaustion,
    /// The witness meets the configured ceiling.
    Ceiling,
}

fn ser_graph<S: Serializer>(g: &Graph, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&graph6::encode(g))
}

fn ser_graphs<S: Serializer>(gs: &Option<Vec<Graph>>, s: S) -> Result<S::Ok, S::Error> {
    match gs {
        None => s.serialize_none(),
        Some(gs) => s.collect_seq(gs.iter().map(graph6::encode)),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    pub n: usize,
    pub ex: u64,
    #[serde(serialize_with = "ser_graph")]
    pub witness: Graph,
    #[serde(serialize_with = "ser_graphs")]
    pub extremal: Option<Vec<Graph>>,
    pub nodes: u64,
    pub wall_ms: u64,
    pub optimal: bool,
    pub certified_by: Option<CertifiedBy>,
    pub ceiling: u64,
    /// `ex(k, C4)` for `k = 1..n`, established on the way.
    pub smaller_orders: Vec<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Maximize,
    Enumerate(u64),
}

struct Node {
    rows: Vec<u64>,
    deg: Vec<u32>,
    edges: u64,
    form: Vec<u64>,
}

impl Node {
    fn root() -> Self {
        Node {
            rows: vec![0],
            deg: vec![0],
            edges: 0,
            form: vec![0],
        }
    }
}

fn bits(mut w: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (w != 0).then(|| {
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            b
        })
    })
}

fn delete_row(rows: &[u64], w: usize) -> Vec<u64> {
    let low = (1u64 << w) - 1;
    rows.iter()
        .enumerate()
        .filter(|&(i, _)| i != w)
        .map(|(_, &r)| (r & low) | ((r >> (w + 1)) << w))
        .collect()
}

/// Adds a vertex joined to vertex 0; this never creates a 4-cycle.
fn with_pendant(rows: &[u64]) -> Vec<u64> {
    let k = rows.len();
    let mut out = rows.to_vec();
    if k == 0 {
        out.push(0);
    } else {
        out[0] |= 1 << k;
        out.push(1);
    }
    out
}

fn edge_count(rows: &[u64]) -> u64 {
    rows.iter().map(|r| r.count_ones() as u64).sum::<u64>() / 2
}

/// Visits subsets of `cands` of size `need` whose members pairwise share no
/// neighbour (and share none with `cov`). Stops when `f` returns false.
fn compatible_subsets(
    rows: &[u64],
    cands: u64,
    cov: u64,
    chosen: u64,
    need: u32,
    f: &mut dyn FnMut(u64) -> bool,
) -> bool {
    if need == 0 {
        return f(chosen);
    }
    let ok = bits(cands)
        .filter(|&u| rows[u] & cov == 0)
        .fold(0u64, |m, u| m | 1 << u);
    if ok.count_ones() < need {
        return true;
    }
    let mut rest = ok;
    while rest.count_ones() >= need {
        let u = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if !compatible_subsets(rows, rest, cov | rows[u], chosen | 1 << u, need - 1, f) {
            return false;
        }
    }
    true
}

struct Engine {
    n: usize,
    upper: Vec<u64>,
    mode: Mode,
    best: AtomicU64,
    witness: Mutex<Option<Vec<u64>>>,
    sink: Mutex<Vec<Vec<u64>>>,
    exceeded: AtomicU64,
    nodes: AtomicU64,
    deadline: Instant,
    expired: AtomicBool,
}

impl Engine {
    fn target(&self) -> u64 {
        match self.mode {
            Mode::Maximize => self.best.load(Ordering::Relaxed) + 1,
            Mode::Enumerate(t) => t,
        }
    }

    fn requirements(&self, t: u64) -> Vec<u64> {
        let mut req = vec![0; self.n + 1];
        req[self.n] = t;
        for m in (2..=self.n).rev() {
            req[m - 1] = req[m].saturating_sub(2 * req[m] / m as u64);
        }
        req
    }

    fn completion(&self, mut e: u64, k: usize) -> u64 {
        for j in k + 1..=self.n {
            let step = (2 * self.upper[j] / j as u64).min(j as u64 - 1);
            e = self.upper[j].min(e + step);
        }
        e
    }

    fn infeasible(&self, t: u64) -> bool {
        let req = self.requirements(t);
        (1..=self.n).any(|j| req[j] > self.upper[j])
    }

    fn tick(&self) -> bool {
        let count = self.nodes.fetch_add(1, Ordering::Relaxed);
        if count.is_multiple_of(256) && Instant::now() > self.deadline {
            self.expired.store(true, Ordering::Relaxed);
        }
        !self.expired.load(Ordering::Relaxed)
    }

    fn record(&self, rows: Vec<u64>, edges: u64) {
        match self.mode {
            Mode::Maximize => {
                if self.best.fetch_max(edges, Ordering::Relaxed) < edges {
                    let mut w = self.witness.lock().unwrap();
                    if w.as_ref().is_none_or(|r| edge_count(r) < edges) {
                        *w = Some(rows);
                    }
                }
            }
            Mode::Enumerate(t) => {
                if edges > t {
                    self.exceeded.fetch_max(edges, Ordering::Relaxed);
                } else {
                    self.sink.lock().unwrap().push(rows);
                }
            }
        }
    }

    /// Expands `node`; nodes reaching `split` are pushed to `tasks` instead.
    fn expand(&self, node: &Node, split: usize, tasks: &mut Option<&mut Vec<Node>>) {
        if !self.tick() {
            return;
        }
        let k = node.rows.len();
        if k == self.n {
            self.record(node.rows.clone(), node.edges);
            return;
        }
        let t = self.target();
        if self.infeasible(t) {
            return;
        }
        let req = self.requirements(t);
        let mut smin = req[k + 1].saturating_sub(node.edges);
        while self.completion(node.edges + smin, k + 1) < t {
            smin += 1;
            if smin > k as u64 {
                return;
            }
        }
        let smin = smin as u32;
        let all = (1u64 << k) - 1;

        if k + 1 == self.n && self.mode == Mode::Maximize {
            // any neighbourhood will do at the last step: take the largest
            for s in (smin..=k as u32).rev() {
                let mut hit = None;
                compatible_subsets(&node.rows, all, 0, 0, s, &mut |set| {
                    hit = Some(set);
                    false
                });
                if let Some(set) = hit {
                    let mut rows = node.rows.clone();
                    for x in bits(set) {
                        rows[x] |= 1 << k;
                    }
                    rows.push(set);
                    self.record(rows, node.edges + s as u64);
                    return;
                }
            }
            return;
        }

        let delta = *node.deg.iter().min().expect("nonempty");
        let smax = (k as u32).min(delta + 1);
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        for s in (smin..=smax).rev() {
            let forced = if s == 0 {
                0
            } else {
                (0..k)
                    .filter(|&x| node.deg[x] == s - 1)
                    .fold(0u64, |m, x| m | 1 << x)
            };
            let mut cov = 0u64;
            let mut clash = false;
            for x in bits(forced) {
                clash |= node.rows[x] & cov != 0;
                cov |= node.rows[x];
            }
            let f = forced.count_ones();
            if clash || f > s {
                continue;
            }
            let mut children = Vec::new();
            compatible_subsets(&node.rows, all & !forced, cov, forced, s - f, &mut |set| {
                if let Some(child) = self.child(node, set, &mut seen) {
                    children.push(child);
                }
                !self.expired.load(Ordering::Relaxed)
            });
            for child in children {
                if k + 1 == split && child.rows.len() < self.n {
                    if let Some(tasks) = tasks.as_deref_mut() {
                        tasks.push(child);
                        continue;
                    }
                }
                self.expand(&child, split, tasks);
            }
        }
    }

    /// The augmentation `node + v` with `N(v) = set`, if it is canonical and
    /// new among its siblings.
    fn child(&self, node: &Node, set: u64, seen: &mut HashSet<Vec<u64>>) -> Option<Node> {
        let k = node.rows.len();
        let s = set.count_ones();
        let mut rows = node.rows.clone();
        let mut deg = node.deg.clone();
        for x in bits(set) {
            rows[x] |= 1 << k;
            deg[x] += 1;
        }
        rows.push(set);
        deg.push(s);
        let canon = canonical_form(&rows);
        if seen.contains(&canon.form) {
            return None;
        }
        let w = *canon
            .order
            .iter()
            .find(|&&x| deg[x] == s)
            .expect("v has minimum degree");
        if w != k && canonical_form(&delete_row(&rows, w)).form != node.form {
            return None;
        }
        seen.insert(canon.form.clone());
        Some(Node {
            rows,
            deg,
            edges: node.edges + s as u64,
            form: canon.form,
        })
    }

    fn run(&self, workers: usize) {
        let root = Node::root();
        if self.n <= SPLIT_ORDER || workers <= 1 {
            self.expand(&root, 0, &mut None);
            return;
        }
        let mut tasks = Vec::new();
        self.expand(&root, SPLIT_ORDER, &mut Some(&mut tasks));
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool");
        pool.install(|| {
            tasks.par_iter().for_each(|t| self.expand(t, 0, &mut None));
        });
    }
}

struct OrderOutcome {
    best: Option<Vec<u64>>,
    found: Vec<Vec<u64>>,
    exceeded: u64,
    nodes: u64,
    complete: bool,
}

fn solve_order(
    n: usize,
    upper: &[u64],
    mode: Mode,
    floor: u64,
    seed: Option<Vec<u64>>,
    deadline: Instant,
    workers: usize,
) -> OrderOutcome {
    let engine = Engine {
        n,
        upper: upper[..=n].to_vec(),
        mode,
        best: AtomicU64::new(floor),
        witness: Mutex::new(seed),
        sink: Mutex::new(Vec::new()),
        exceeded: AtomicU64::new(0),
        nodes: AtomicU64::new(0),
        deadline,
        expired: AtomicBool::new(false),
    };
    engine.run(workers);
    OrderOutcome {
        best: engine.witness.into_inner().unwrap(),
        found: engine.sink.into_inner().unwrap(),
        exceeded: engine.exceeded.into_inner(),
        nodes: engine.nodes.into_inner(),
        complete: !engine.expired.into_inner(),
    }
}

fn validate(cfg: &SearchConfig) -> Result<(), SearchError> {
    if cfg.n == 0 {
        return Err(SearchError::InvalidConfig("n must be at least 1".into()));
    }
    if cfg.n > MAX_SEARCH_N {
        return Err(SearchError::TooLarge {
            n: cfg.n,
            limit: MAX_SEARCH_N,
        });
    }
    if cfg.workers == 0 {
        return Err(SearchError::InvalidConfig(
            "at least one worker is required".into(),
        ));
    }
    let ceiling = cfg.ceiling.unwrap_or_else(|| default_ceiling(cfg.n));
    let seed_edges = match &cfg.seed {
        None => 0,
        Some(LowerSeed::Edges(e)) => *e,
        Some(LowerSeed::Witness(g)) => {
            if g.n() != cfg.n {
                return Err(SearchError::InvalidSeed(format!(
                    "witness has {} vertices, expected {}",
                    g.n(),
                    cfg.n
                )));
            }
            if !g.is_c4_free() {
                return Err(SearchError::InvalidSeed(
                    "witness contains a 4-cycle".into(),
                ));
            }
            g.edge_count() as u64
        }
    };
    if seed_edges > ceiling {
        return Err(SearchError::InvalidConfig(format!(
            "seed of {seed_edges} edges exceeds the ceiling {ceiling}"
        )));
    }
    Ok(())
}

/// Exact values for orders `1..n` by repeated search, each order seeded with
/// the previous witness plus a pendant vertex.
struct Chain {
    upper: Vec<u64>,
    witness: Vec<u64>,
    nodes: u64,
}

fn solve_chain(n: usize, deadline: Instant, workers: usize) -> Result<Chain, (Chain, usize)> {
    let mut upper: Vec<u64> = (0..=n).map(|j| reiman_bound(j as u64)).collect();
    let mut witness: Vec<u64> = Vec::new();
    let mut nodes = 0;
    for k in 1..n {
        let seed = with_pendant(&witness);
        let floor = edge_count(&seed);
        let out = solve_order(
            k,
            &upper,
            Mode::Maximize,
            floor,
            Some(seed),
            deadline,
            workers,
        );
        nodes += out.nodes;
        witness = out.best.expect("seeded");
        if !out.complete {
            return Err((
                Chain {
                    upper,
                    witness,
                    nodes,
                },
                k,
            ));
        }
        upper[k] = edge_count(&witness);
    }
    Ok(Chain {
        upper,
        witness,
        nodes,
    })
}

fn pad(rows: &[u64], n: usize) -> Vec<u64> {
    let mut rows = rows.to_vec();
    while rows.len() < n {
        rows = with_pendant(&rows);
    }
    rows
}

/// `ex(n, C4)` with a witness and, when requested, every extremal graph.
pub fn max_edges_c4free(cfg: &SearchConfig) -> Result<SearchResult, SearchError> {
    validate(cfg)?;
    let start = Instant::now();
    let deadline = start + cfg.budget;
    let n = cfg.n;
    let ceiling = cfg.ceiling.unwrap_or_else(|| default_ceiling(n));
    let finish =
        |rows: Vec<u64>, nodes: u64, optimal: bool, upper: &[u64], extremal: Option<Vec<Graph>>| {
            let witness = Graph::from_small_rows(&rows);
            let ex = witness.edge_count() as u64;
            let certified_by = optimal.then(|| {
                if ex == ceiling && ceiling < reiman_bound(n as u64) {
                    CertifiedBy::Ceiling
                } else {
                    CertifiedBy::Exhaustion
                }
            });
            SearchResult {
                n,
                ex,
                witness,
                extremal,
                nodes,
                wall_ms: start.elapsed().as_millis() as u64,
                optimal,
                certified_by,
                ceiling,
                smaller_orders: upper[1..n].to_vec(),
            }
        };

    let mut chain = match solve_chain(n, deadline, cfg.workers) {
        Ok(chain) => chain,
        Err((chain, k)) => {
            let rows = pad(&chain.witness, n);
            let mut partial = finish(rows, chain.nodes, false, &chain.upper, None);
            partial.smaller_orders = chain.upper[1..k].to_vec();
            return Err(SearchError::BudgetExhausted(Box::new(partial)));
        }
    };
    chain.upper[n] = chain.upper[n].min(ceiling);

    let mut seed = with_pendant(&chain.witness);
    let mut floor = edge_count(&seed);
    let mut claimed = None;
    match &cfg.seed {
        Some(LowerSeed::Witness(g)) if g.edge_count() as u64 > floor => {
            seed = g.small_rows().expect("n <= 64");
            floor = g.edge_count() as u64;
        }
        Some(LowerSeed::Edges(e)) if *e > floor + 1 => claimed = Some(*e),
        _ => {}
    }

    let mut nodes = chain.nodes;
    let mut out = solve_order(
        n,
        &chain.upper,
        Mode::Maximize,
        claimed.map_or(floor, |e| e - 1),
        Some(seed.clone()),
        deadline,
        cfg.workers,
    );
    nodes += out.nodes;
    if claimed.is_some()
        && out.complete
        && edge_count(out.best.as_ref().unwrap()) < claimed.unwrap()
    {
        // the claimed value was too high; search again from the real floor
        out = solve_order(
            n,
            &chain.upper,
            Mode::Maximize,
            floor,
            Some(seed),
            deadline,
            cfg.workers,
        );
        nodes += out.nodes;
    }
    let best = out.best.expect("seeded");
    if !out.complete {
        let partial = finish(best, nodes, false, &chain.upper, None);
        return Err(SearchError::BudgetExhausted(Box::new(partial)));
    }
    let ex = edge_count(&best);

    let extremal = if cfg.all_extremal {
        let mut upper = chain.upper.clone();
        upper[n] = ex;
        let en = solve_order(
            n,
            &upper,
            Mode::Enumerate(ex),
            0,
            None,
            deadline,
            cfg.workers,
        );
        nodes += en.nodes;
        let graphs = sorted_graphs(en.found);
        if !en.complete {
            let partial = finish(best, nodes, false, &chain.upper, Some(graphs));
            return Err(SearchError::BudgetExhausted(Box::new(partial)));
        }
        Some(graphs)
    } else {
        None
    };
    Ok(finish(best, nodes, true, &chain.upper, extremal))
}

fn sorted_graphs(forms: Vec<Vec<u64>>) -> Vec<Graph> {
    let mut graphs: Vec<(String, Graph)> = forms
        .into_iter()
        .map(|rows| {
            let g = Graph::from_small_rows(&canonical_form(&rows).form);
            (graph6::encode(&g), g)
        })
        .collect();
    graphs.sort_by(|a, b| a.0.cmp(&b.0));
    graphs.dedup_by(|a, b| a.0 == b.0);
    graphs.into_iter().map(|(_, g)| g).collect()
}

/// Every C4-free graph on `n` vertices with `ex_value` edges, one per
/// isomorphism class, in canonical labelling and sorted by graph6 string.
/// Fails if some C4-free graph has more edges or none has exactly
/// `ex_value`.
pub fn enumerate_extremal(
    n: usize,
    ex_value: u64,
    budget: Duration,
    workers: usize,
) -> Result<Vec<Graph>, SearchError> {
    let mut cfg = SearchConfig::new(n);
    cfg.budget = budget;
    cfg.workers = workers;
    cfg.ceiling = Some(u64::MAX);
    validate(&cfg)?;
    let start = Instant::now();
    let deadline = start + budget;
    let exhausted = |rows: &[u64], nodes: u64, upper: &[u64], graphs: Option<Vec<Graph>>| {
        let witness = Graph::from_small_rows(&pad(rows, n));
        SearchError::BudgetExhausted(Box::new(SearchResult {
            n,
            ex: witness.edge_count() as u64,
            witness,
            extremal: graphs,
            nodes,
            wall_ms: start.elapsed().as_millis() as u64,
            optimal: false,
            certified_by: None,
            ceiling: upper[n],
            smaller_orders: upper[1..n].to_vec(),
        }))
    };
    let chain = match solve_chain(n, deadline, workers) {
        Ok(chain) => chain,
        Err((chain, _)) => return Err(exhausted(&chain.witness, chain.nodes, &chain.upper, None)),
    };
    let out = solve_order(
        n,
        &chain.upper,
        Mode::Enumerate(ex_value),
        0,
        None,
        deadline,
        workers,
    );
    if out.exceeded > ex_value {
        return Err(SearchError::ExValueTooLow {
            claimed: ex_value,
            found: out.exceeded,
        });
    }
    let graphs = sorted_graphs(out.found);
    if !out.complete {
        let rows = graphs
            .first()
            .map_or(chain.witness.clone(), |g| g.small_rows().unwrap());
        return Err(exhausted(
            &rows,
            chain.nodes + out.nodes,
            &chain.upper,
            Some(graphs),
        ));
    }
    if graphs.is_empty() {
        return Err(SearchError::ExValueUnattained {
            n,
            claimed: ex_value,
        });
    }
    Ok(graphs)
}
