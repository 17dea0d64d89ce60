//! Deciding and constructing k-star decompositions of concrete graphs.
//!
//! A k-star decomposition is a partition of the edge set into stars of k
//! edges sharing a center. Assigning every edge to its star's center
//! orients the graph so that k divides every in-degree, and conversely any
//! such orientation groups into stars; the solver therefore searches over
//! per-vertex in-degree targets in {0, k, 2k, ...}, certifies a target
//! vector by max-flow, and reads the decomposition off the flow. Fast
//! complete paths cover k = 1, k = 2, and the Eulerian case k | deg(v)/2.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::pairing::Multigraph;
use crate::{domain_err, mix_seed, Error, Result};

/// Default vertex cap for the exact independence-number search.
pub const DEFAULT_INDEPENDENCE_CAP: usize = 60;

/// An orientation of a multigraph: one head (in-endpoint) per edge.
/// A loop's head is its unique endpoint and adds 1 to its in-degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    /// heads[e] = the endpoint edge e points to.
    pub heads: Vec<usize>,
    /// In-degree per vertex under those heads.
    pub indegrees: Vec<usize>,
}

impl Orientation {
    /// Validates that every head is an endpoint of its edge.
    pub fn new(g: &Multigraph, heads: Vec<usize>) -> Result<Self> {
        if heads.len() != g.m() {
            return domain_err(format!(
                "expected {} heads, got {}",
                g.m(),
                heads.len()
            ));
        }
        let mut indegrees = vec![0usize; g.n()];
        for (e, (&h, &(u, v))) in heads.iter().zip(g.edges()).enumerate() {
            if h != u && h != v {
                return domain_err(format!("head {h} is not an endpoint of edge {e}"));
            }
            indegrees[h] += 1;
        }
        Ok(Orientation { heads, indegrees })
    }
}

/// A k-star decomposition: (center, k edge ids) per star.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarDecomposition {
    pub stars: Vec<(usize, Vec<usize>)>,
}

impl StarDecomposition {
    /// Renders one star per line as `center: e_1 e_2 ... e_k`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (center, edges) in &self.stars {
            let ids: Vec<String> = edges.iter().map(|e| e.to_string()).collect();
            let _ = writeln!(out, "{center}: {}", ids.join(" "));
        }
        out
    }

    /// Parses the format written by [`StarDecomposition::to_text`].
    pub fn from_text(text: &str) -> Result<Self> {
        let mut stars = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() {
                continue;
            }
            let Some((head, tail)) = trimmed.split_once(':') else {
                return Err(Error::GraphParse {
                    line,
                    msg: format!("expected `center: edge ids`, got {raw:?}"),
                });
            };
            let center = head.trim().parse().map_err(|_| Error::GraphParse {
                line,
                msg: format!("bad center {head:?}"),
            })?;
            let mut edges = Vec::new();
            for tok in tail.split_whitespace() {
                edges.push(tok.parse().map_err(|_| Error::GraphParse {
                    line,
                    msg: format!("bad edge id {tok:?}"),
                })?);
            }
            stars.push((center, edges));
        }
        Ok(StarDecomposition { stars })
    }
}

/// How [`solve`] searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMode {
    /// Complete branch-and-bound; answers found or proven-none unless a cap
    /// is hit.
    Exact,
    /// Greedy leaf-set construction with swap local search; answers found
    /// or unknown.
    Heuristic,
    /// Heuristic first, falling back to exact.
    Auto,
}

/// Options for [`solve`].
#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub mode: SolveMode,
    pub time_limit: Option<Duration>,
    pub seed: u64,
    pub node_cap: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            mode: SolveMode::Auto,
            time_limit: None,
            seed: 0,
            node_cap: 5_000_000,
        }
    }
}

/// Outcome of [`solve`].
#[derive(Clone, Debug)]
pub enum SolveOutcome {
    Found(StarDecomposition),
    ProvenNone,
    /// The search gave up without deciding; `nodes` counts explored search
    /// states (or heuristic restarts).
    Unknown { nodes: u64, reason: String },
}

impl SolveOutcome {
    pub fn decomposition(&self) -> Option<&StarDecomposition> {
        match self {
            SolveOutcome::Found(s) => Some(s),
            _ => None,
        }
    }
}

/// True iff s partitions all edges of g into k-stars: every star has
/// exactly k distinct edges incident to its center, and every edge appears
/// in exactly one star.
pub fn verify(g: &Multigraph, s: &StarDecomposition, k: usize) -> bool {
    if k == 0 {
        return false;
    }
    let mut seen = vec![false; g.m()];
    let mut covered = 0usize;
    for (center, edges) in &s.stars {
        if *center >= g.n() || edges.len() != k {
            return false;
        }
        for &e in edges {
            if e >= g.m() || seen[e] {
                return false;
            }
            let (u, v) = g.edges()[e];
            if u != *center && v != *center {
                return false;
            }
            seen[e] = true;
            covered += 1;
        }
    }
    covered == g.m()
}

/// Groups the in-edges of each vertex into stars of k. Errors when k does
/// not divide every in-degree.
pub fn orientation_to_stars(
    g: &Multigraph,
    k: usize,
    orientation: &Orientation,
) -> Result<StarDecomposition> {
    if k == 0 {
        return domain_err("k must be positive");
    }
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (e, &h) in orientation.heads.iter().enumerate() {
        buckets[h].push(e);
    }
    let mut stars = Vec::new();
    for (v, bucket) in buckets.into_iter().enumerate() {
        if bucket.len() % k != 0 {
            return domain_err(format!(
                "in-degree {} at vertex {v} is not a multiple of k = {k}",
                bucket.len()
            ));
        }
        for chunk in bucket.chunks(k) {
            stars.push((v, chunk.to_vec()));
        }
    }
    Ok(StarDecomposition { stars })
}

// ---------------------------------------------------------------------------
// Max-flow
// ---------------------------------------------------------------------------

#[derive(Clone)]
struct Arc {
    to: usize,
    rev: usize,
    cap: i64,
}

/// Dinic max-flow; integral, exact, and deterministic for a fixed arc
/// insertion order.
struct Dinic {
    graph: Vec<Vec<Arc>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic {
            graph: vec![Vec::new(); n],
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    /// Adds a forward arc with capacity `cap` and its residual; returns the
    /// (from, index) handle of the forward arc.
    fn add_edge(&mut self, from: usize, to: usize, cap: i64) -> (usize, usize) {
        let fwd = self.graph[from].len();
        let rev = self.graph[to].len();
        self.graph[from].push(Arc { to, rev, cap });
        self.graph[to].push(Arc {
            to: from,
            rev: fwd,
            cap: 0,
        });
        (from, fwd)
    }

    fn flow_on(&self, handle: (usize, usize), original_cap: i64) -> i64 {
        original_cap - self.graph[handle.0][handle.1].cap
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.fill(-1);
        let mut queue = VecDeque::new();
        self.level[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for arc in &self.graph[u] {
                if arc.cap > 0 && self.level[arc.to] < 0 {
                    self.level[arc.to] = self.level[u] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, limit: i64) -> i64 {
        if u == t {
            return limit;
        }
        while self.iter[u] < self.graph[u].len() {
            let Arc { to, rev, cap } = self.graph[u][self.iter[u]];
            if cap > 0 && self.level[u] < self.level[to] {
                let pushed = self.dfs(to, t, limit.min(cap));
                if pushed > 0 {
                    self.graph[u][self.iter[u]].cap -= pushed;
                    self.graph[to][rev].cap += pushed;
                    return pushed;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        while self.bfs(s, t) {
            self.iter.fill(0);
            loop {
                let pushed = self.dfs(s, t, i64::MAX);
                if pushed == 0 {
                    break;
                }
                flow += pushed;
            }
        }
        flow
    }
}

/// Finds an orientation whose in-degree vector equals `targets`, if one
/// exists: each edge supplies one unit to one of its endpoints and vertex v
/// sinks exactly targets[v] units.
pub fn orientation_feasible(g: &Multigraph, targets: &[usize]) -> Result<Option<Orientation>> {
    if targets.len() != g.n() {
        return domain_err(format!(
            "expected {} targets, got {}",
            g.n(),
            targets.len()
        ));
    }
    let total: usize = targets.iter().sum();
    if total != g.m() {
        return domain_err(format!(
            "target sum {total} does not match edge count {}",
            g.m()
        ));
    }
    let m = g.m();
    let n = g.n();
    // Nodes: 0 source, 1 sink, 2..2+m edge nodes, 2+m..2+m+n vertex nodes.
    let mut net = Dinic::new(2 + m + n);
    let enode = |e: usize| 2 + e;
    let vnode = |v: usize| 2 + m + v;
    let mut endpoint_arcs = Vec::with_capacity(m);
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        net.add_edge(0, enode(e), 1);
        let a = net.add_edge(enode(e), vnode(u), 1);
        let b = if v != u {
            Some(net.add_edge(enode(e), vnode(v), 1))
        } else {
            None
        };
        endpoint_arcs.push((a, b));
    }
    for v in 0..n {
        net.add_edge(vnode(v), 1, targets[v] as i64);
    }
    if net.max_flow(0, 1) != m as i64 {
        return Ok(None);
    }
    let mut heads = Vec::with_capacity(m);
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let (a, b) = endpoint_arcs[e];
        if net.flow_on(a, 1) == 1 {
            heads.push(u);
        } else {
            debug_assert_eq!(b.map(|h| net.flow_on(h, 1)), Some(1));
            heads.push(v);
        }
    }
    Ok(Some(Orientation::new(g, heads)?))
}

/// Feasibility of the in-degree interval relaxation: every edge routes one
/// unit to an endpoint and vertex v receives between lo[v] and hi[v].
/// Lower bounds are handled by the usual excess transformation.
fn flow_interval_feasible(g: &Multigraph, lo: &[usize], hi: &[usize]) -> bool {
    let m = g.m();
    let n = g.n();
    // Nodes: 0 source, 1 sink, 2 super-source, 3 super-sink, then edge and
    // vertex nodes.
    let mut net = Dinic::new(4 + m + n);
    let enode = |e: usize| 4 + e;
    let vnode = |v: usize| 4 + m + v;
    let mut excess = vec![0i64; 4 + m + n];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        // Source to edge node with bounds [1, 1].
        excess[enode(e)] += 1;
        excess[0] -= 1;
        net.add_edge(enode(e), vnode(u), 1);
        if v != u {
            net.add_edge(enode(e), vnode(v), 1);
        }
    }
    for v in 0..n {
        // Vertex to sink with bounds [lo, hi].
        net.add_edge(vnode(v), 1, (hi[v] - lo[v]) as i64);
        excess[1] += lo[v] as i64;
        excess[vnode(v)] -= lo[v] as i64;
    }
    net.add_edge(1, 0, i64::MAX / 2);
    let mut need = 0;
    for (x, &ex) in excess.iter().enumerate() {
        if ex > 0 {
            net.add_edge(2, x, ex);
            need += ex;
        } else if ex < 0 {
            net.add_edge(x, 3, -ex);
        }
    }
    net.max_flow(2, 3) == need
}

// ---------------------------------------------------------------------------
// Connectivity helpers
// ---------------------------------------------------------------------------

/// Incidence lists: for each vertex, (neighbor, edge id) per incident edge;
/// loops appear once.
fn incidence(g: &Multigraph) -> Vec<Vec<(usize, usize)>> {
    let mut inc = vec![Vec::new(); g.n()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        inc[u].push((v, e));
        if v != u {
            inc[v].push((u, e));
        }
    }
    inc
}

/// Component id per vertex.
fn components(g: &Multigraph) -> Vec<usize> {
    let inc = incidence(g);
    let mut comp = vec![usize::MAX; g.n()];
    let mut next = 0;
    for start in 0..g.n() {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = next;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &inc[u] {
                if comp[v] == usize::MAX {
                    comp[v] = next;
                    queue.push_back(v);
                }
            }
        }
        next += 1;
    }
    comp
}

/// True iff every edge lies in one component; isolated vertices are
/// ignored, and an edgeless graph counts as connected.
fn edges_connected(g: &Multigraph) -> bool {
    let comp = components(g);
    let mut hit = None;
    for &(u, _) in g.edges() {
        match hit {
            None => hit = Some(comp[u]),
            Some(c) if comp[u] != c => return false,
            _ => {}
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Constructive fast paths
// ---------------------------------------------------------------------------

/// Orients one component's edges along an Eulerian circuit from `start`,
/// writing heads for every edge it uses.
fn eulerian_orient_component(
    inc: &[Vec<(usize, usize)>],
    start: usize,
    used: &mut [bool],
    cursor: &mut [usize],
    heads: &mut [usize],
) {
    // Hierholzer with an explicit stack; each edge's head is the vertex it
    // is traversed into.
    let mut stack = vec![start];
    while let Some(&u) = stack.last() {
        let mut advanced = false;
        while cursor[u] < inc[u].len() {
            let (v, e) = inc[u][cursor[u]];
            cursor[u] += 1;
            if !used[e] {
                used[e] = true;
                heads[e] = v;
                stack.push(v);
                advanced = true;
                break;
            }
        }
        if !advanced {
            stack.pop();
        }
    }
}

/// Decomposes a connected graph with all degrees even and k | deg(v)/2 by
/// orienting an Eulerian circuit (in-degree deg(v)/2 everywhere) and
/// grouping each vertex's in-edges into stars of k.
pub fn eulerian_stars(g: &Multigraph, k: usize) -> Result<StarDecomposition> {
    if k == 0 {
        return domain_err("k must be positive");
    }
    if !edges_connected(g) {
        return domain_err("eulerian decomposition needs a connected graph");
    }
    for (v, deg) in g.degrees().iter().enumerate() {
        if deg % 2 != 0 {
            return domain_err(format!("degree {deg} at vertex {v} is odd"));
        }
        if (deg / 2) % k != 0 {
            return domain_err(format!(
                "k = {k} does not divide half the degree {deg} at vertex {v}"
            ));
        }
    }
    let inc = incidence(g);
    let mut used = vec![false; g.m()];
    let mut cursor = vec![0usize; g.n()];
    let mut heads = vec![0usize; g.m()];
    if let Some(&(start, _)) = g.edges().first() {
        eulerian_orient_component(&inc, start, &mut used, &mut cursor, &mut heads);
    }
    debug_assert!(used.iter().all(|&u| u));
    let orientation = Orientation::new(g, heads)?;
    orientation_to_stars(g, k, &orientation)
}

/// Pairs the edges of one component into 2-stars by processing a rooted
/// spanning tree bottom-up; `parent_edge[v]` is v's tree edge id. Returns
/// the leftover unpaired count parity guard for the caller.
fn two_star_component(
    g: &Multigraph,
    inc: &[Vec<(usize, usize)>],
    root: usize,
    stars: &mut Vec<(usize, Vec<usize>)>,
) -> Result<()> {
    // Build the rooted spanning tree and a post-order.
    let mut parent_edge = vec![usize::MAX; g.n()];
    let mut seen = vec![false; g.n()];
    let mut order = Vec::new();
    let mut stack = vec![root];
    seen[root] = true;
    while let Some(u) = stack.pop() {
        order.push(u);
        for &(v, e) in &inc[u] {
            if !seen[v] {
                seen[v] = true;
                parent_edge[v] = e;
                stack.push(v);
            }
        }
    }
    let mut paired = vec![false; g.m()];
    for &v in order.iter().rev() {
        let mut free: Vec<usize> = Vec::new();
        for &(_, e) in &inc[v] {
            if !paired[e] && e != parent_edge[v] && !free.contains(&e) {
                free.push(e);
            }
        }
        let mut it = free.chunks_exact(2);
        for pair in &mut it {
            paired[pair[0]] = true;
            paired[pair[1]] = true;
            let mut star = vec![pair[0], pair[1]];
            star.sort_unstable();
            stars.push((v, star));
        }
        if let &[leftover] = it.remainder() {
            if parent_edge[v] == usize::MAX {
                return domain_err("component has an odd number of edges");
            }
            paired[leftover] = true;
            paired[parent_edge[v]] = true;
            let mut star = vec![leftover, parent_edge[v]];
            star.sort_unstable();
            stars.push((v, star));
        }
    }
    Ok(())
}

/// Decomposes a connected graph with an even number of edges into 2-stars
/// by bottom-up pairing along a rooted spanning tree.
pub fn two_star_decompose(g: &Multigraph) -> Result<StarDecomposition> {
    if !edges_connected(g) {
        return domain_err("2-star decomposition needs a connected graph");
    }
    if g.m() % 2 != 0 {
        return domain_err(format!("need an even number of edges, got {}", g.m()));
    }
    let inc = incidence(g);
    let mut stars = Vec::new();
    if let Some(&(root, _)) = g.edges().first() {
        two_star_component(g, &inc, root, &mut stars)?;
    }
    let decomposition = StarDecomposition { stars };
    debug_assert!(verify(g, &decomposition, 2));
    Ok(decomposition)
}

// ---------------------------------------------------------------------------
// Exact search
// ---------------------------------------------------------------------------

struct Search<'a> {
    g: &'a Multigraph,
    adj: Vec<Vec<usize>>,
    domains: Vec<Vec<usize>>,
    decided: Vec<Option<usize>>,
    sum: usize,
    max_rest: usize,
    nodes: u64,
    node_cap: u64,
    deadline: Option<Instant>,
    hit_cap: bool,
    found: Option<Vec<usize>>,
}

impl Search<'_> {
    fn capped(&mut self) -> bool {
        if self.hit_cap {
            return true;
        }
        if self.nodes >= self.node_cap {
            self.hit_cap = true;
            return true;
        }
        if self.nodes % 1024 == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    self.hit_cap = true;
                    return true;
                }
            }
        }
        false
    }

    /// Undecided vertex with the most leaf-decided neighbors; ties broken
    /// by larger degree, then smaller id.
    fn pick_vertex(&self) -> Option<usize> {
        let mut best: Option<(usize, usize, usize)> = None;
        for v in 0..self.g.n() {
            if self.decided[v].is_some() {
                continue;
            }
            let leaf_neighbors = self.adj[v]
                .iter()
                .filter(|&&u| self.decided[u] == Some(0))
                .count();
            let degree = self.adj[v].len();
            let better = match best {
                None => true,
                Some((bl, bd, bv)) => {
                    (leaf_neighbors, degree, std::cmp::Reverse(v))
                        > (bl, bd, std::cmp::Reverse(bv))
                }
            };
            if better {
                best = Some((leaf_neighbors, degree, v));
            }
        }
        best.map(|(_, _, v)| v)
    }

    fn dfs(&mut self) {
        self.nodes += 1;
        if self.capped() || self.found.is_some() {
            return;
        }
        let Some(v) = self.pick_vertex() else {
            if self.sum == self.g.m() {
                let targets: Vec<usize> =
                    self.decided.iter().map(|t| t.expect("all decided")).collect();
                self.found = Some(targets);
            }
            return;
        };
        let vmax = *self.domains[v].first().expect("nonempty domain");
        for idx in 0..self.domains[v].len() {
            let t = self.domains[v][idx];
            // Two adjacent leaves would strand the edge between them.
            if t == 0 && self.adj[v].iter().any(|&u| self.decided[u] == Some(0)) {
                continue;
            }
            let new_sum = self.sum + t;
            let new_max_rest = self.max_rest - vmax;
            if new_sum > self.g.m() || new_sum + new_max_rest < self.g.m() {
                continue;
            }
            self.decided[v] = Some(t);
            self.sum = new_sum;
            self.max_rest = new_max_rest;
            if self.interval_feasible() {
                self.dfs();
            }
            self.decided[v] = None;
            self.sum -= t;
            self.max_rest += vmax;
            if self.found.is_some() || self.hit_cap {
                return;
            }
        }
    }

    fn interval_feasible(&self) -> bool {
        let n = self.g.n();
        let mut lo = vec![0usize; n];
        let mut hi = vec![0usize; n];
        for v in 0..n {
            match self.decided[v] {
                Some(t) => {
                    lo[v] = t;
                    hi[v] = t;
                }
                None => {
                    hi[v] = *self.domains[v].first().expect("nonempty domain");
                }
            }
        }
        flow_interval_feasible(self.g, &lo, &hi)
    }
}

fn solve_exact(g: &Multigraph, k: usize, opts: &SolveOptions) -> Result<SolveOutcome> {
    let inc = incidence(g);
    let adj: Vec<Vec<usize>> = inc
        .iter()
        .map(|row| row.iter().map(|&(v, _)| v).collect())
        .collect();
    let degrees = g.degrees();
    let domains: Vec<Vec<usize>> = (0..g.n())
        .map(|v| {
            // Descending targets 0, k, ..., floor(deg/k) k; larger first.
            (0..=degrees[v] / k).rev().map(|r| r * k).collect()
        })
        .collect();
    let max_rest: usize = domains.iter().map(|dom| dom[0]).sum();
    if max_rest < g.m() {
        return Ok(SolveOutcome::ProvenNone);
    }
    let mut search = Search {
        g,
        adj,
        domains,
        decided: vec![None; g.n()],
        sum: 0,
        max_rest,
        nodes: 0,
        node_cap: opts.node_cap,
        deadline: opts.time_limit.map(|limit| Instant::now() + limit),
        hit_cap: false,
        found: None,
    };
    if search.interval_feasible() {
        search.dfs();
    }
    if let Some(targets) = search.found {
        let orientation = orientation_feasible(g, &targets)?
            .expect("interval-feasible exact targets must orient");
        let decomposition = orientation_to_stars(g, k, &orientation)?;
        debug_assert!(verify(g, &decomposition, k));
        return Ok(SolveOutcome::Found(decomposition));
    }
    if search.hit_cap {
        return Ok(SolveOutcome::Unknown {
            nodes: search.nodes,
            reason: "node or time cap exceeded".into(),
        });
    }
    Ok(SolveOutcome::ProvenNone)
}

// ---------------------------------------------------------------------------
// Heuristic search
// ---------------------------------------------------------------------------

/// Greedy leaf-set heuristic: look for an independent set of exactly
/// n - m/k leaves, give everyone else target k, and certify by flow. Swap
/// moves grow the set when greedy stalls.
fn solve_heuristic(g: &Multigraph, k: usize, opts: &SolveOptions) -> Result<SolveOutcome> {
    let n = g.n();
    let centers = g.m() / k;
    if centers > n {
        return Ok(SolveOutcome::Unknown {
            nodes: 0,
            reason: "needs more centers than vertices with single-star targets".into(),
        });
    }
    let want_leaves = n - centers;
    let inc = incidence(g);
    let adj: Vec<Vec<usize>> = inc
        .iter()
        .map(|row| row.iter().map(|&(v, _)| v).collect())
        .collect();
    let trials = 64u64;
    for trial in 0..trials {
        let mut rng = ChaCha12Rng::seed_from_u64(mix_seed(opts.seed, trial));
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let mut leaf = vec![false; n];
        let mut count = 0usize;
        for &v in &order {
            if count == want_leaves {
                break;
            }
            if !adj[v].iter().any(|&u| leaf[u]) {
                leaf[v] = true;
                count += 1;
            }
        }
        // (1, 2) swaps: remove one leaf whose removal frees two additions.
        let mut budget = 200;
        'grow: while count < want_leaves && budget > 0 {
            budget -= 1;
            for &x in &order {
                if !leaf[x] {
                    continue;
                }
                let candidates: Vec<usize> = (0..n)
                    .filter(|&v| {
                        !leaf[v] && adj[v].iter().filter(|&&u| leaf[u]).all(|&u| u == x)
                    })
                    .filter(|&v| v != x)
                    .collect();
                for (i, &a) in candidates.iter().enumerate() {
                    for &b in &candidates[i + 1..] {
                        if !adj[a].contains(&b) {
                            leaf[x] = false;
                            leaf[a] = true;
                            leaf[b] = true;
                            count += 1;
                            continue 'grow;
                        }
                    }
                }
            }
            break;
        }
        if count != want_leaves {
            continue;
        }
        let targets: Vec<usize> = (0..n).map(|v| if leaf[v] { 0 } else { k }).collect();
        if targets.iter().sum::<usize>() != g.m() {
            continue;
        }
        if let Some(orientation) = orientation_feasible(g, &targets)? {
            let decomposition = orientation_to_stars(g, k, &orientation)?;
            debug_assert!(verify(g, &decomposition, k));
            return Ok(SolveOutcome::Found(decomposition));
        }
    }
    Ok(SolveOutcome::Unknown {
        nodes: trials,
        reason: "heuristic restarts exhausted".into(),
    })
}

// ---------------------------------------------------------------------------
// Solve front end
// ---------------------------------------------------------------------------

/// Decides or constructs a k-star decomposition of a simple graph.
///
/// Divisibility k | m is necessary and failing it is an immediate
/// proven-none. k = 1 and k = 2 are decided completely (k = 2 reduces to
/// every component having an even edge count), as is the Eulerian case
/// where all degrees are even and k divides deg(v)/2 everywhere. Otherwise
/// the configured search runs: exact branch-and-bound over per-vertex
/// in-degree targets in {0, k, 2k, ...} with flow-relaxation pruning, a
/// leaf-set heuristic, or both.
pub fn solve(g: &Multigraph, k: usize, opts: &SolveOptions) -> Result<SolveOutcome> {
    if k == 0 {
        return domain_err("k must be positive");
    }
    if opts.node_cap == 0 {
        return domain_err("node cap must be positive");
    }
    if let Some(limit) = opts.time_limit {
        if limit.is_zero() {
            return domain_err("time limit must be positive");
        }
    }
    if !g.is_simple() {
        return domain_err(
            "solve needs a simple graph: remove loops and parallel edges first",
        );
    }
    if g.m() % k != 0 {
        return Ok(SolveOutcome::ProvenNone);
    }
    if g.m() == 0 {
        return Ok(SolveOutcome::Found(StarDecomposition { stars: Vec::new() }));
    }
    if k == 1 {
        // Every edge is its own star at either endpoint.
        let stars = g
            .edges()
            .iter()
            .enumerate()
            .map(|(e, &(u, _))| (u, vec![e]))
            .collect();
        return Ok(SolveOutcome::Found(StarDecomposition { stars }));
    }
    if k == 2 {
        // Complete decider: a component decomposes iff its edge count is
        // even, by the spanning-tree pairing.
        let comp = components(g);
        let comp_count = comp.iter().copied().max().map_or(0, |c| c + 1);
        let mut edge_count = vec![0usize; comp_count];
        let mut root = vec![usize::MAX; comp_count];
        for &(u, v) in g.edges() {
            edge_count[comp[u]] += 1;
            if root[comp[u]] == usize::MAX {
                root[comp[u]] = u.min(v);
            }
        }
        if edge_count.iter().any(|&c| c % 2 != 0) {
            return Ok(SolveOutcome::ProvenNone);
        }
        let inc = incidence(g);
        let mut stars = Vec::new();
        for c in 0..comp_count {
            if edge_count[c] > 0 {
                two_star_component(g, &inc, root[c], &mut stars)?;
            }
        }
        let decomposition = StarDecomposition { stars };
        debug_assert!(verify(g, &decomposition, 2));
        return Ok(SolveOutcome::Found(decomposition));
    }
    // Eulerian fast path, componentwise.
    let degrees = g.degrees();
    if degrees
        .iter()
        .all(|&deg| deg % 2 == 0 && (deg / 2) % k == 0)
    {
        let inc = incidence(g);
        let comp = components(g);
        let comp_count = comp.iter().copied().max().map_or(0, |c| c + 1);
        let mut used = vec![false; g.m()];
        let mut cursor = vec![0usize; g.n()];
        let mut heads = vec![0usize; g.m()];
        let mut done = vec![false; comp_count];
        for &(u, _) in g.edges() {
            if !done[comp[u]] {
                done[comp[u]] = true;
                eulerian_orient_component(&inc, u, &mut used, &mut cursor, &mut heads);
            }
        }
        debug_assert!(used.iter().all(|&x| x));
        let orientation = Orientation::new(g, heads)?;
        let decomposition = orientation_to_stars(g, k, &orientation)?;
        debug_assert!(verify(g, &decomposition, k));
        return Ok(SolveOutcome::Found(decomposition));
    }
    match opts.mode {
        SolveMode::Exact => solve_exact(g, k, opts),
        SolveMode::Heuristic => solve_heuristic(g, k, opts),
        SolveMode::Auto => match solve_heuristic(g, k, opts)? {
            SolveOutcome::Found(s) => Ok(SolveOutcome::Found(s)),
            _ => solve_exact(g, k, opts),
        },
    }
}

// ---------------------------------------------------------------------------
// Independence number
// ---------------------------------------------------------------------------

/// Exact maximum independent set size by branch-and-bound over vertex
/// bitmasks, with the default vertex cap.
pub fn independence_number(g: &Multigraph) -> Result<usize> {
    independence_number_with_cap(g, DEFAULT_INDEPENDENCE_CAP)
}

/// Exact maximum independent set size; errors beyond `cap` vertices.
/// Vertices carrying loops are self-adjacent and never enter the set.
pub fn independence_number_with_cap(g: &Multigraph, cap: usize) -> Result<usize> {
    let n = g.n();
    if n > cap || n > 64 {
        return Err(Error::CapExceeded(format!(
            "independence number limited to {} vertices, got {n}",
            cap.min(64)
        )));
    }
    let mut nb = vec![0u64; n];
    let mut cands: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    for &(u, v) in g.edges() {
        if u == v {
            cands &= !(1 << u);
        } else {
            nb[u] |= 1 << v;
            nb[v] |= 1 << u;
        }
    }

    fn bnb(mut cands: u64, mut size: usize, best: &mut usize, nb: &[u64]) {
        // Forced moves: a candidate with at most one candidate neighbor is
        // always safe to take.
        loop {
            let mut forced = None;
            let mut scan = cands;
            while scan != 0 {
                let v = scan.trailing_zeros() as usize;
                scan &= scan - 1;
                if (nb[v] & cands).count_ones() <= 1 {
                    forced = Some(v);
                    break;
                }
            }
            match forced {
                Some(v) => {
                    cands &= !(nb[v] | (1 << v));
                    size += 1;
                }
                None => break,
            }
        }
        if size + cands.count_ones() as usize <= *best {
            return;
        }
        if cands == 0 {
            *best = (*best).max(size);
            return;
        }
        // Branch on the candidate of maximum candidate-degree.
        let mut pick = 0;
        let mut pick_deg = 0;
        let mut scan = cands;
        while scan != 0 {
            let v = scan.trailing_zeros() as usize;
            scan &= scan - 1;
            let deg = (nb[v] & cands).count_ones();
            if deg >= pick_deg {
                pick_deg = deg;
                pick = v;
            }
        }
        bnb(cands & !(nb[pick] | (1 << pick)), size + 1, best, nb);
        bnb(cands & !(1 << pick), size, best, nb);
    }

    let mut best = 0;
    bnb(cands, 0, &mut best, &nb);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairing::sample_simple_graph;
    use rand::Rng;

    fn complete_graph(n: usize) -> Multigraph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                edges.push((u, v));
            }
        }
        Multigraph::new(n, edges).unwrap()
    }

    fn cycle_graph(n: usize) -> Multigraph {
        let edges = (0..n).map(|u| (u, (u + 1) % n)).collect();
        Multigraph::new(n, edges).unwrap()
    }

    fn k33() -> Multigraph {
        let mut edges = Vec::new();
        for u in 0..3 {
            for v in 3..6 {
                edges.push((u, v));
            }
        }
        Multigraph::new(6, edges).unwrap()
    }

    fn petersen() -> Multigraph {
        let mut edges = Vec::new();
        for u in 0..5 {
            edges.push((u, (u + 1) % 5));
            edges.push((u, u + 5));
            edges.push((u + 5, (u + 2) % 5 + 5));
        }
        Multigraph::new(10, edges).unwrap()
    }

    /// Brute-force oracle: does any of the 2^m orientations have every
    /// in-degree divisible by k?
    fn oracle_decomposable(g: &Multigraph, k: usize) -> bool {
        if g.m() % k != 0 {
            return false;
        }
        let m = g.m();
        assert!(m <= 20, "oracle limited to small graphs");
        for mask in 0u32..(1u32 << m) {
            let mut indeg = vec![0usize; g.n()];
            for (e, &(u, v)) in g.edges().iter().enumerate() {
                let head = if mask >> e & 1 == 1 { u } else { v };
                indeg[head] += 1;
            }
            if indeg.iter().all(|&x| x % k == 0) {
                return true;
            }
        }
        false
    }

    #[test]
    fn verify_k33_stars() {
        let g = k33();
        // Stars centered on the left side.
        let stars = (0..3)
            .map(|u| (u, vec![3 * u, 3 * u + 1, 3 * u + 2]))
            .collect();
        let s = StarDecomposition { stars };
        assert!(verify(&g, &s, 3));
        // Dropping an edge breaks coverage.
        let mut missing = s.clone();
        missing.stars[0].1.pop();
        assert!(!verify(&g, &missing, 3));
        // An edge not incident to its center fails.
        let mut bad = s.clone();
        bad.stars[0] = (0, vec![0, 1, 8]);
        assert!(!verify(&g, &bad, 3));
        // Duplicated edges fail.
        let mut dup = s.clone();
        dup.stars[0] = (0, vec![0, 1, 1]);
        assert!(!verify(&g, &dup, 3));
        assert!(!verify(&g, &s, 2));
    }

    #[test]
    fn solve_k33() {
        let outcome = solve(&k33(), 3, &SolveOptions::default()).unwrap();
        let s = outcome.decomposition().expect("decomposable");
        assert!(verify(&k33(), s, 3));
    }

    #[test]
    fn solve_refutes_k4_and_petersen() {
        let opts = SolveOptions {
            mode: SolveMode::Exact,
            ..SolveOptions::default()
        };
        assert!(matches!(
            solve(&complete_graph(4), 3, &opts).unwrap(),
            SolveOutcome::ProvenNone
        ));
        assert!(matches!(
            solve(&petersen(), 3, &opts).unwrap(),
            SolveOutcome::ProvenNone
        ));
    }

    #[test]
    fn solve_divisibility_shortcut() {
        // 4 does not divide the 6 edges of K_4.
        assert!(matches!(
            solve(&complete_graph(4), 4, &SolveOptions::default()).unwrap(),
            SolveOutcome::ProvenNone
        ));
    }

    #[test]
    fn solve_rejects_multigraphs() {
        let g = Multigraph::new(2, vec![(0, 0), (0, 1), (1, 1)]).unwrap();
        let err = solve(&g, 1, &SolveOptions::default()).unwrap_err();
        assert!(err.to_string().contains("simple"));
    }

    #[test]
    fn solve_hits_node_cap() {
        let opts = SolveOptions {
            mode: SolveMode::Exact,
            node_cap: 1,
            ..SolveOptions::default()
        };
        match solve(&petersen(), 3, &opts).unwrap() {
            SolveOutcome::Unknown { nodes, .. } => assert!(nodes >= 1),
            other => panic!("expected unknown, got {other:?}"),
        }
    }

    #[test]
    fn orientation_feasibility_examples() {
        let c4 = cycle_graph(4);
        let o = orientation_feasible(&c4, &[1, 1, 1, 1]).unwrap().unwrap();
        assert_eq!(o.indegrees, vec![1, 1, 1, 1]);

        let star = Multigraph::new(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap();
        let o = orientation_feasible(&star, &[3, 0, 0, 0]).unwrap().unwrap();
        assert_eq!(o.heads, vec![0, 0, 0]);

        assert!(orientation_feasible(&complete_graph(4), &[3, 3, 0, 0])
            .unwrap()
            .is_none());
        assert!(orientation_feasible(&c4, &[2, 2, 2, 2]).is_err());
    }

    #[test]
    fn eulerian_stars_examples() {
        let c6 = cycle_graph(6);
        let s = eulerian_stars(&c6, 1).unwrap();
        assert_eq!(s.stars.len(), 6);
        assert!(verify(&c6, &s, 1));
        // Degree/2 = 1 is not divisible by 2.
        assert!(eulerian_stars(&c6, 2).is_err());
        // Odd degrees are rejected.
        assert!(eulerian_stars(&k33(), 3).is_err());

        for seed in 0..5 {
            let g = sample_simple_graph(20, 4, seed, 200_000).unwrap();
            if !edges_connected(&g) {
                continue;
            }
            let s = eulerian_stars(&g, 2).unwrap();
            assert!(verify(&g, &s, 2), "4-regular seed {seed}");
        }
        for seed in 0..5 {
            let g = sample_simple_graph(15, 6, seed, 200_000).unwrap();
            if !edges_connected(&g) {
                continue;
            }
            let s = eulerian_stars(&g, 3).unwrap();
            assert!(verify(&g, &s, 3), "6-regular seed {seed}");
        }
    }

    #[test]
    fn two_star_examples() {
        let path = Multigraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let s = two_star_decompose(&path).unwrap();
        assert_eq!(s.stars, vec![(1, vec![0, 1])]);

        let c6 = cycle_graph(6);
        let s = two_star_decompose(&c6).unwrap();
        assert_eq!(s.stars.len(), 3);
        assert!(verify(&c6, &s, 2));

        // Odd edge count and disconnected inputs are rejected.
        assert!(two_star_decompose(&Multigraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap()).is_err());
        let split = Multigraph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert!(two_star_decompose(&split).is_err());
    }

    #[test]
    fn two_star_random_connected_graphs() {
        for seed in 0..50u64 {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let n = 2 + (seed as usize % 9);
            // Random spanning tree plus random extras.
            let mut edges: Vec<(usize, usize)> = (1..n)
                .map(|v| {
                    let u = (rng.random::<u64>() as usize) % v;
                    (u, v)
                })
                .collect();
            let extras = (rng.random::<u64>() as usize) % (2 * n);
            for _ in 0..extras {
                let u = (rng.random::<u64>() as usize) % n;
                let v = (rng.random::<u64>() as usize) % n;
                if u != v {
                    edges.push((u, v));
                }
            }
            if edges.len() % 2 != 0 {
                edges.push((0, n - 1));
            }
            let g = Multigraph::new(n, edges).unwrap();
            let s = two_star_decompose(&g).unwrap();
            assert!(verify(&g, &s, 2), "seed {seed}");
        }
    }

    #[test]
    fn independence_numbers() {
        assert_eq!(independence_number(&complete_graph(4)).unwrap(), 1);
        assert_eq!(independence_number(&cycle_graph(6)).unwrap(), 3);
        assert_eq!(independence_number(&petersen()).unwrap(), 4);
        let big = Multigraph::new(61, vec![]).unwrap();
        assert!(matches!(
            independence_number(&big),
            Err(Error::CapExceeded(_))
        ));
        // A loop keeps its vertex out of every independent set.
        let loopy = Multigraph::new(2, vec![(0, 0)]).unwrap();
        assert_eq!(independence_number(&loopy).unwrap(), 1);
    }

    #[test]
    fn exact_agrees_with_orientation_oracle() {
        let opts = SolveOptions {
            mode: SolveMode::Exact,
            ..SolveOptions::default()
        };
        let mut checked = 0;
        for seed in 0..60u64 {
            let mut rng = ChaCha12Rng::seed_from_u64(1000 + seed);
            let n = 4 + (seed as usize % 5);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random::<f64>() < 0.45 {
                        edges.push((u, v));
                    }
                }
            }
            let g = Multigraph::new(n, edges).unwrap();
            if g.m() == 0 || g.m() > 14 || g.degrees().iter().any(|&deg| deg > 4) {
                continue;
            }
            for k in 2..=4usize {
                let expected = oracle_decomposable(&g, k);
                match solve(&g, k, &opts).unwrap() {
                    SolveOutcome::Found(s) => {
                        assert!(expected, "false positive seed {seed} k {k}");
                        assert!(verify(&g, &s, k));
                    }
                    SolveOutcome::ProvenNone => {
                        assert!(!expected, "false negative seed {seed} k {k}")
                    }
                    SolveOutcome::Unknown { .. } => panic!("unexpected cap"),
                }
                checked += 1;
            }
        }
        assert!(checked >= 60, "only {checked} oracle comparisons ran");
    }

    #[test]
    fn soundness_on_regular_samples() {
        // n chosen so that k divides dn/2 and, when 2k > d, the forced leaf
        // count (2k - d) n / 2k is integral.
        for (d, k, n) in [
            (3usize, 2usize, 12usize),
            (4, 2, 9),
            (4, 3, 9),
            (6, 3, 12),
            (6, 4, 12),
        ] {
            for trial in 0..4u64 {
                let g = sample_simple_graph(n, d, mix_seed(77, trial), 2_000_000).unwrap();
                let outcome = solve(&g, k, &SolveOptions::default()).unwrap();
                if let SolveOutcome::Found(s) = outcome {
                    assert!(verify(&g, &s, k), "({d},{k}) trial {trial}");
                    // Center in-degrees are multiples of k by construction;
                    // with 2k > d the leaves form an independent set of the
                    // forced size.
                    if 2 * k > d {
                        let mut is_center = vec![false; g.n()];
                        for (c, _) in &s.stars {
                            is_center[*c] = true;
                        }
                        let leaves: Vec<usize> =
                            (0..g.n()).filter(|&v| !is_center[v]).collect();
                        assert_eq!(leaves.len(), (2 * k - d) * n / (2 * k));
                        for &(u, v) in g.edges() {
                            assert!(
                                is_center[u] || is_center[v],
                                "adjacent leaves in ({d},{k})"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn heuristic_finds_k33() {
        let opts = SolveOptions {
            mode: SolveMode::Heuristic,
            ..SolveOptions::default()
        };
        let outcome = solve(&k33(), 3, &opts).unwrap();
        let s = outcome.decomposition().expect("heuristic should find K33");
        assert!(verify(&k33(), s, 3));
    }

    #[test]
    fn decomposition_text_round_trip() {
        let s = StarDecomposition {
            stars: vec![(0, vec![0, 1, 2]), (4, vec![3, 5, 6])],
        };
        let text = s.to_text();
        assert_eq!(text, "0: 0 1 2\n4: 3 5 6\n");
        assert_eq!(StarDecomposition::from_text(&text).unwrap(), s);
        assert!(StarDecomposition::from_text("nope").is_err());
    }
}
