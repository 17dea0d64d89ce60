//! Configuration-model sampling: uniform pairings of dn points, projection
//! to d-regular multigraphs, simplicity testing, short-cycle counts, and
//! rejection sampling of uniform simple d-regular graphs.
//!
//! Points are labelled cell-major: point p belongs to cell p / d. A pairing
//! is stored as the involution partner[p]; projecting it yields one edge per
//! pair, in ascending order of the smaller point, so pairings serialize
//! stably.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::combin::double_factorial_odd;
use crate::{domain_err, mix_seed, Error, Result};

/// A perfect matching of the dn configuration-model points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    n: usize,
    d: usize,
    partner: Vec<usize>,
}

impl Pairing {
    /// Wraps a partner table after checking that it is a fixed-point-free
    /// involution on exactly n*d points.
    pub fn new(n: usize, d: usize, partner: Vec<usize>) -> Result<Self> {
        let points = n * d;
        if points % 2 != 0 {
            return domain_err(format!("dn must be even, got n={n}, d={d}"));
        }
        if partner.len() != points {
            return domain_err(format!(
                "partner table has {} entries, expected {points}",
                partner.len()
            ));
        }
        for p in 0..points {
            let q = partner[p];
            if q >= points || q == p || partner[q] != p {
                return domain_err(format!("partner table is not an involution at point {p}"));
            }
        }
        Ok(Pairing { n, d, partner })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn points(&self) -> usize {
        self.n * self.d
    }

    /// The mate of point p.
    pub fn partner(&self, p: usize) -> usize {
        self.partner[p]
    }

    /// The cell containing point p.
    pub fn cell_of(&self, p: usize) -> usize {
        p / self.d
    }

    /// All pairs (p, q) with p < q, ascending in p.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.partner
            .iter()
            .enumerate()
            .filter(|&(p, &q)| p < q)
            .map(|(p, &q)| (p, q))
    }

    /// Projects the pairing to its d-regular multigraph: one edge per pair,
    /// joining the cells of the two points.
    pub fn multigraph(&self) -> Multigraph {
        let edges: Vec<(usize, usize)> = self
            .pairs()
            .map(|(p, q)| (self.cell_of(p), self.cell_of(q)))
            .collect();
        Multigraph::new(self.n, edges).expect("projection stays in range")
    }
}

/// A multigraph on n vertices: an ordered edge list that may contain loops
/// (u, u) and repeated entries for parallel edges. The position of an edge
/// in the list is its stable edge id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Multigraph {
    /// Builds a multigraph, normalizing every edge so u <= v while keeping
    /// the input order (edge ids are list positions).
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut normalized = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u >= n || v >= n {
                return domain_err(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                ));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        Ok(Multigraph {
            n,
            edges: normalized,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges, loops and parallels included.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Degree of every vertex; a loop contributes 2 to its endpoint.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| usize::from(a == v) + usize::from(b == v))
            .sum()
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.degrees().iter().all(|&deg| deg == d)
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|&&(u, v)| u == v).count()
    }

    /// Multiplicity of every distinct endpoint pair, loops included under
    /// the key (u, u).
    pub fn multiplicities(&self) -> HashMap<(usize, usize), usize> {
        let mut mult = HashMap::new();
        for &e in &self.edges {
            *mult.entry(e).or_insert(0) += 1;
        }
        mult
    }

    /// True iff there are no loops and no parallel edges.
    pub fn is_simple(&self) -> bool {
        self.loop_count() == 0 && self.multiplicities().values().all(|&c| c <= 1)
    }

    /// Collapsed adjacency without loops: for each vertex, the distinct
    /// neighbors with their edge multiplicities, ascending by neighbor.
    pub fn adjacency(&self) -> Vec<Vec<(usize, u64)>> {
        let mut maps: Vec<HashMap<usize, u64>> = vec![HashMap::new(); self.n];
        for &(u, v) in &self.edges {
            if u != v {
                *maps[u].entry(v).or_insert(0) += 1;
                *maps[v].entry(u).or_insert(0) += 1;
            }
        }
        maps.into_iter()
            .map(|map| {
                let mut row: Vec<(usize, u64)> = map.into_iter().collect();
                row.sort_unstable();
                row
            })
            .collect()
    }

    /// Parses the text graph format: line 1 holds `n m`, followed by m
    /// lines `u v` with 0-based vertex ids; loops appear as `u u` and
    /// parallel edges as repeated lines.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::GraphParse {
                line: 1,
                msg: "empty input".into(),
            })?;
        let parse_usize = |tok: &str, line: usize| -> Result<usize> {
            tok.parse().map_err(|_| Error::GraphParse {
                line,
                msg: format!("expected a nonnegative integer, got {tok:?}"),
            })
        };
        let head: Vec<&str> = header.split_whitespace().collect();
        if head.len() != 2 {
            return Err(Error::GraphParse {
                line: 1,
                msg: format!("expected `n m`, got {header:?}"),
            });
        }
        let n = parse_usize(head[0], 1)?;
        let m = parse_usize(head[1], 1)?;
        let mut edges = Vec::with_capacity(m);
        for (idx, raw) in lines {
            let line_no = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() {
                continue;
            }
            if edges.len() == m {
                return Err(Error::GraphParse {
                    line: line_no,
                    msg: format!("expected {m} edges, found extra content"),
                });
            }
            let toks: Vec<&str> = trimmed.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(Error::GraphParse {
                    line: line_no,
                    msg: format!("expected `u v`, got {raw:?}"),
                });
            }
            let u = parse_usize(toks[0], line_no)?;
            let v = parse_usize(toks[1], line_no)?;
            if u >= n || v >= n {
                return Err(Error::GraphParse {
                    line: line_no,
                    msg: format!("vertex id out of range: {u} {v} with n = {n}"),
                });
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::GraphParse {
                line: text.lines().count(),
                msg: format!("expected {m} edges, found {}", edges.len()),
            });
        }
        Multigraph::new(n, edges)
    }

    /// Renders the text graph format read by [`Multigraph::from_text`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        Multigraph::from_text(&std::fs::read_to_string(path)?)
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        Ok(std::fs::write(path, self.to_text())?)
    }
}

/// Number of perfect matchings of 2a points: (2a)!/(a! 2^a) = (2a-1)!!.
pub fn m_pairings(a: u64) -> BigInt {
    double_factorial_odd(a as i64)
}

/// Samples a uniform pairing of the n*d points: shuffle all points, then
/// pair consecutive entries. Deterministic for a fixed seed.
pub fn sample_pairing(n: usize, d: usize, seed: u64) -> Result<Pairing> {
    if n == 0 || d == 0 {
        return domain_err("need n >= 1 and d >= 1");
    }
    let points = n * d;
    if points % 2 != 0 {
        return domain_err(format!("dn must be even, got n={n}, d={d}"));
    }
    let mut order: Vec<usize> = (0..points).collect();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let mut partner = vec![0usize; points];
    for pair in order.chunks_exact(2) {
        partner[pair[0]] = pair[1];
        partner[pair[1]] = pair[0];
    }
    Pairing::new(n, d, partner)
}

/// Counts X_1..X_m in the multigraph: X_1 is the number of loops, X_2 the
/// number of unordered pairs of parallel edges, and X_j for j >= 3 the
/// number of j-vertex cycles counted once per distinct edge subset, so
/// parallel edges multiply counts.
pub fn count_cycles(g: &Multigraph, m: usize) -> Vec<u64> {
    let mut x = vec![0u64; m];
    if m == 0 {
        return x;
    }
    x[0] = g.loop_count() as u64;
    if m == 1 {
        return x;
    }
    for (&(u, v), &mult) in &g.multiplicities() {
        if u != v {
            let mult = mult as u64;
            x[1] += mult * (mult - 1) / 2;
        }
    }
    if m == 2 {
        return x;
    }

    // Cycles on j >= 3 distinct vertices: enumerate paths from each start s
    // through vertices greater than s, close back to s, and keep one of the
    // two traversal directions by requiring path[1] < path.last().
    let adj = g.adjacency();
    struct Dfs<'a> {
        adj: &'a [Vec<(usize, u64)>],
        m: usize,
        start: usize,
        visited: Vec<bool>,
        path: Vec<usize>,
        counts: Vec<u64>,
    }
    impl Dfs<'_> {
        fn explore(&mut self, at: usize, weight: u64) {
            for &(next, mult) in &self.adj[at] {
                if next == self.start && self.path.len() >= 3 && self.path[1] < at {
                    self.counts[self.path.len() - 1] += weight * mult;
                }
                if next > self.start && !self.visited[next] && self.path.len() < self.m {
                    self.visited[next] = true;
                    self.path.push(next);
                    self.explore(next, weight * mult);
                    self.path.pop();
                    self.visited[next] = false;
                }
            }
        }
    }
    let mut dfs = Dfs {
        adj: &adj,
        m,
        start: 0,
        visited: vec![false; g.n()],
        path: Vec::with_capacity(m),
        counts: vec![0u64; m],
    };
    for s in 0..g.n() {
        dfs.start = s;
        dfs.visited[s] = true;
        dfs.path.push(s);
        dfs.explore(s, 1);
        dfs.path.pop();
        dfs.visited[s] = false;
    }
    for j in 2..m {
        x[j] = dfs.counts[j];
    }
    x
}

/// Samples a uniform simple d-regular graph by rejection: draw pairings
/// from trial-derived seeds until the projection is simple.
pub fn sample_simple_graph(n: usize, d: usize, seed: u64, max_tries: u64) -> Result<Multigraph> {
    for trial in 0..max_tries {
        let pairing = sample_pairing(n, d, mix_seed(seed, trial))?;
        let graph = pairing.multigraph();
        if graph.is_simple() {
            return Ok(graph);
        }
    }
    Err(Error::TriesExhausted { tries: max_tries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn pairing_counts() {
        assert_eq!(m_pairings(0), BigInt::from(1));
        assert_eq!(m_pairings(2), BigInt::from(3));
        assert_eq!(m_pairings(6), BigInt::from(10395));
    }

    #[test]
    fn unique_pairing_of_two_points() {
        let p = sample_pairing(2, 1, 99).unwrap();
        assert_eq!(p.partner(0), 1);
        assert_eq!(p.partner(1), 0);
        let g = p.multigraph();
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn pairing_validation() {
        assert!(sample_pairing(3, 1, 0).is_err());
        assert!(Pairing::new(2, 1, vec![0, 1]).is_err());
        assert!(Pairing::new(2, 1, vec![1, 0]).is_ok());
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_pairing(20, 3, 42).unwrap();
        let b = sample_pairing(20, 3, 42).unwrap();
        let c = sample_pairing(20, 3, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn sampling_is_uniform_chi_squared() {
        // The 3 pairings of 4 points are identified by the mate of point 0.
        let trials = 30_000usize;
        let mut counts = [0u64; 3];
        for t in 0..trials {
            let p = sample_pairing(1, 4, t as u64).unwrap();
            counts[p.partner(0) - 1] += 1;
        }
        let expected = trials as f64 / 3.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // 0.001 critical value of chi-squared with 2 degrees of freedom.
        assert!(chi2 < 13.8155, "chi2 = {chi2}, counts = {counts:?}");
    }

    #[test]
    fn projection_is_regular() {
        let mut rng_seed = 0u64;
        for (n, d) in (1..=10).flat_map(|n| (1..=10).map(move |d| (n, d))) {
            if (n * d) % 2 != 0 {
                continue;
            }
            rng_seed += 1;
            let g = sample_pairing(n, d, rng_seed).unwrap().multigraph();
            assert!(g.is_regular(d), "not {d}-regular for n={n}");
            // Degree decomposes into multiplicities plus twice the loops.
            for v in 0..n {
                let loops = g
                    .multiplicities()
                    .get(&(v, v))
                    .copied()
                    .unwrap_or(0);
                let plain: usize = g
                    .multiplicities()
                    .iter()
                    .filter(|(&(a, b), _)| a != b && (a == v || b == v))
                    .map(|(_, &c)| c)
                    .sum();
                assert_eq!(plain + 2 * loops, d);
            }
        }
    }

    #[test]
    fn cycle_counts_on_known_graphs() {
        // One loop plus a disjoint edge.
        let g = Multigraph::new(3, vec![(0, 0), (1, 2)]).unwrap();
        assert_eq!(count_cycles(&g, 3), vec![1, 0, 0]);

        // Triangle.
        let g = Multigraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(count_cycles(&g, 4), vec![0, 0, 1, 0]);

        // Triple edge: binom(3, 2) parallel pairs.
        let g = Multigraph::new(2, vec![(0, 1), (0, 1), (0, 1)]).unwrap();
        assert_eq!(count_cycles(&g, 3), vec![0, 3, 0]);

        // Complete graph on four vertices: four triangles, three squares.
        let g = Multigraph::new(
            4,
            vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        )
        .unwrap();
        assert_eq!(count_cycles(&g, 4), vec![0, 0, 4, 3]);

        // Five-cycle.
        let g = Multigraph::new(5, vec![(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        assert_eq!(count_cycles(&g, 5), vec![0, 0, 0, 0, 1]);

        // Doubling one triangle edge doubles the triangle count and adds a
        // parallel pair.
        let g = Multigraph::new(3, vec![(0, 1), (0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(count_cycles(&g, 3), vec![0, 1, 2]);
    }

    #[test]
    fn simplicity_detection() {
        let loopy = Multigraph::new(2, vec![(0, 0), (1, 1)]).unwrap();
        assert!(!loopy.is_simple());
        let doubled = Multigraph::new(2, vec![(0, 1), (1, 0)]).unwrap();
        assert!(!doubled.is_simple());
        let k4 = Multigraph::new(
            4,
            vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        )
        .unwrap();
        assert!(k4.is_simple());
    }

    #[test]
    fn cycle_means_match_poisson_limits() {
        // Cubic pairing model: X_1, X_2, X_3 have means 1, 1, 4/3.
        let samples = 10_000usize;
        let (n, d) = (200usize, 3usize);
        let mut sums = [0f64; 3];
        for i in 0..samples {
            let g = sample_pairing(n, d, mix_seed(11, i as u64)).unwrap().multigraph();
            let x = count_cycles(&g, 3);
            for j in 0..3 {
                sums[j] += x[j] as f64;
            }
        }
        let lambdas = [1.0, 1.0, 4.0 / 3.0];
        for j in 0..3 {
            let mean = sums[j] / samples as f64;
            let se = (lambdas[j] / samples as f64).sqrt();
            assert!(
                (mean - lambdas[j]).abs() < 3.0 * se,
                "X_{} mean {mean} vs {} (3se = {})",
                j + 1,
                lambdas[j],
                3.0 * se
            );
        }
    }

    #[test]
    fn simplicity_probability_matches_limit() {
        // Pr(simple) tends to exp(-(d^2-1)/4) = exp(-2) for d = 3.
        let samples = 10_000usize;
        let (n, d) = (500usize, 3usize);
        let mut simple = 0usize;
        for i in 0..samples {
            let g = sample_pairing(n, d, mix_seed(13, i as u64)).unwrap().multigraph();
            if g.is_simple() {
                simple += 1;
            }
        }
        let p = simple as f64 / samples as f64;
        let target = (-2.0f64).exp();
        let se = (target * (1.0 - target) / samples as f64).sqrt();
        assert!(
            (p - target).abs() < 3.0 * se,
            "Pr(simple) = {p} vs {target} (3se = {})",
            3.0 * se
        );
    }

    #[test]
    fn rejection_sampler_yields_simple_regular_graphs() {
        let g = sample_simple_graph(100, 3, 0, 200).unwrap();
        assert!(g.is_simple());
        assert!(g.is_regular(3));
        let again = sample_simple_graph(100, 3, 0, 200).unwrap();
        assert_eq!(g, again);
        assert!(matches!(
            sample_simple_graph(100, 3, 0, 0),
            Err(Error::TriesExhausted { tries: 0 })
        ));
    }

    #[test]
    fn graph_text_round_trip() {
        let g = Multigraph::new(4, vec![(0, 1), (1, 1), (2, 3), (2, 3), (3, 0)]).unwrap();
        let text = g.to_text();
        // (3, 0) normalized to (0, 3) at construction; ids keep positions.
        assert_eq!(text, "4 5\n0 1\n1 1\n2 3\n2 3\n0 3\n");
        let back = Multigraph::from_text(&text).unwrap();
        assert_eq!(back.edges(), g.edges());
        assert_eq!(back.edges()[4], (0, 3));
    }

    #[test]
    fn graph_parse_errors_carry_line_numbers() {
        let cases = [
            ("", 1),
            ("2\n", 1),
            ("2 1\n0 zero\n", 2),
            ("2 1\n0 1 2\n", 2),
            ("2 1\n0 5\n", 2),
            ("2 2\n0 1\n", 2),
            ("2 1\n0 1\n1 0\n", 3),
        ];
        for (text, want_line) in cases {
            match Multigraph::from_text(text) {
                Err(Error::GraphParse { line, .. }) => {
                    assert_eq!(line, want_line, "input {text:?}")
                }
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn canonical_enumeration_matches_pairing_count() {
        // Smallest-point-first recursion hits every pairing exactly once.
        fn enumerate(points: usize) -> Vec<Vec<usize>> {
            let mut all = Vec::new();
            let mut partner = vec![usize::MAX; points];
            fn rec(partner: &mut Vec<usize>, all: &mut Vec<Vec<usize>>) {
                let Some(p) = partner.iter().position(|&x| x == usize::MAX) else {
                    all.push(partner.clone());
                    return;
                };
                for q in (p + 1)..partner.len() {
                    if partner[q] == usize::MAX {
                        partner[p] = q;
                        partner[q] = p;
                        rec(partner, all);
                        partner[p] = usize::MAX;
                        partner[q] = usize::MAX;
                    }
                }
            }
            rec(&mut partner, &mut all);
            all
        }
        for (n, d) in [(2usize, 3usize), (3, 4), (6, 2)] {
            let all = enumerate(n * d);
            let distinct: HashSet<Vec<usize>> = all.iter().cloned().collect();
            assert_eq!(BigInt::from(all.len()), m_pairings((n * d / 2) as u64));
            assert_eq!(distinct.len(), all.len());
            for table in all.iter().take(50) {
                assert!(Pairing::new(n, d, table.clone()).is_ok());
            }
        }
    }
}
