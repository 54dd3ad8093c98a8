//! 2-distance colorings: a proper coloring of the square graph.
//!
//! The exact solver is a branch-and-bound feasibility search on the
//! square graph with saturation-degree branching, a greedily grown
//! clique as lower bound and first-fit greedy as upper bound. All
//! choices are deterministic: identical inputs yield identical
//! witnesses.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("color {color} of vertex {v} outside [1, {ell}]")]
    ColorOutOfRange { v: u32, color: u32, ell: usize },
    #[error("assignment covers {got} vertices, graph has {want}")]
    SizeMismatch { got: usize, want: usize },
    #[error("order is not a permutation of the vertex set")]
    BadOrder,
    #[error("malformed witness: {0}")]
    BadWitness(String),
}

/// A coloring of a subset of vertices with colors in 1..=ell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialColoring {
    ell: usize,
    colors: Vec<Option<u32>>,
}

impl PartialColoring {
    pub fn new(n: usize, ell: usize) -> Self {
        PartialColoring {
            ell,
            colors: vec![None; n],
        }
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn vertex_count(&self) -> usize {
        self.colors.len()
    }

    pub fn get(&self, v: u32) -> Option<u32> {
        self.colors[v as usize]
    }

    pub fn set(&mut self, v: u32, color: u32) -> Result<(), ColoringError> {
        if color == 0 || color as usize > self.ell {
            return Err(ColoringError::ColorOutOfRange {
                v,
                color,
                ell: self.ell,
            });
        }
        self.colors[v as usize] = Some(color);
        Ok(())
    }

    pub fn clear(&mut self, v: u32) -> Option<u32> {
        self.colors[v as usize].take()
    }

    pub fn colored_count(&self) -> usize {
        self.colors.iter().filter(|c| c.is_some()).count()
    }

    pub fn is_total(&self) -> bool {
        self.colors.iter().all(|c| c.is_some())
    }

    pub fn colors_used(&self) -> usize {
        let mut used: Vec<u32> = self.colors.iter().flatten().copied().collect();
        used.sort_unstable();
        used.dedup();
        used.len()
    }

    /// Witness file: header `coloring <n> <ell>`, then one `vertex
    /// color` line per colored vertex.
    pub fn to_witness_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "coloring {} {}", self.colors.len(), self.ell);
        for (v, c) in self.colors.iter().enumerate() {
            if let Some(c) = c {
                let _ = writeln!(out, "{v} {c}");
            }
        }
        out
    }

    pub fn from_witness_text(text: &str) -> Result<Self, ColoringError> {
        let bad = |m: &str| ColoringError::BadWitness(m.to_string());
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let head = lines.next().ok_or_else(|| bad("empty witness"))?;
        let parts: Vec<&str> = head.split_whitespace().collect();
        if parts.len() != 3 || parts[0] != "coloring" {
            return Err(bad("expected header 'coloring <n> <ell>'"));
        }
        let n: usize = parts[1].parse().map_err(|_| bad("bad vertex count"))?;
        let ell: usize = parts[2].parse().map_err(|_| bad("bad color budget"))?;
        let mut pc = PartialColoring::new(n, ell);
        for l in lines {
            let mut it = l.split_whitespace();
            let v: usize = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad("bad vertex id"))?;
            let c: u32 = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad("bad color"))?;
            if v >= n {
                return Err(bad("vertex id out of range"));
            }
            pc.set(v as u32, c)?;
        }
        Ok(pc)
    }
}

/// Vertices at distance 1 or 2 from v, sorted, excluding v.
pub fn n2(g: &Graph, v: u32) -> Vec<u32> {
    g.ball2(v)
}

/// The square graph: edge uv present iff 1 <= d_G(u,v) <= 2. The result
/// carries no embedding.
pub fn square_graph(g: &Graph) -> Graph {
    let mut edges = vec![];
    for v in 0..g.vertex_count() as u32 {
        for u in g.ball2(v) {
            if v < u {
                edges.push((v, u));
            }
        }
    }
    Graph::from_edges(g.vertex_count(), &edges).expect("square of a simple graph is simple")
}

fn square_adjacency(g: &Graph) -> Vec<Vec<u32>> {
    (0..g.vertex_count() as u32).map(|v| g.ball2(v)).collect()
}

/// Check a partial coloring; returns the conflicting pairs (u, v) with
/// u < v, d(u,v) <= 2 and equal colors.
pub fn validate_partial(
    g: &Graph,
    pc: &PartialColoring,
) -> Result<Vec<(u32, u32)>, ColoringError> {
    if pc.vertex_count() != g.vertex_count() {
        return Err(ColoringError::SizeMismatch {
            got: pc.vertex_count(),
            want: g.vertex_count(),
        });
    }
    for v in 0..g.vertex_count() as u32 {
        if let Some(c) = pc.get(v) {
            if c == 0 || c as usize > pc.ell() {
                return Err(ColoringError::ColorOutOfRange {
                    v,
                    color: c,
                    ell: pc.ell(),
                });
            }
        }
    }
    let mut violations = vec![];
    for v in 0..g.vertex_count() as u32 {
        if let Some(c) = pc.get(v) {
            for u in g.ball2(v) {
                if u > v && pc.get(u) == Some(c) {
                    violations.push((v, u));
                }
            }
        }
    }
    Ok(violations)
}

/// Outcome of a coloring attempt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Found,
    Infeasible,
    BudgetExhausted,
}

#[derive(Debug, Clone)]
pub struct ColoringResult {
    pub outcome: Outcome,
    pub coloring: Option<PartialColoring>,
    pub colors_used: usize,
}

/// Decision-node budget for the exact searches.
#[derive(Debug, Clone)]
pub struct Budget {
    remaining: u64,
}

pub const DEFAULT_BUDGET: u64 = 10_000_000;

impl Budget {
    pub fn new(nodes: u64) -> Self {
        Budget { remaining: nodes }
    }

    fn tick(&mut self) -> Result<(), Exhausted> {
        if self.remaining == 0 {
            return Err(Exhausted);
        }
        self.remaining -= 1;
        Ok(())
    }
}

struct Exhausted;

struct Searcher<'a> {
    adj: &'a [Vec<u32>],
    ell: usize,
    colors: Vec<u32>, // 0 = uncolored
    cnt: Vec<Vec<u32>>,
    sat: Vec<u32>,
    uncolored: usize,
}

impl<'a> Searcher<'a> {
    fn new(adj: &'a [Vec<u32>], ell: usize) -> Self {
        let n = adj.len();
        Searcher {
            adj,
            ell,
            colors: vec![0; n],
            cnt: vec![vec![0; ell]; n],
            sat: vec![0; n],
            uncolored: n,
        }
    }

    fn assign(&mut self, v: u32, c: u32) {
        self.colors[v as usize] = c;
        self.uncolored -= 1;
        for &u in &self.adj[v as usize] {
            let slot = &mut self.cnt[u as usize][c as usize - 1];
            if *slot == 0 {
                self.sat[u as usize] += 1;
            }
            *slot += 1;
        }
    }

    fn unassign(&mut self, v: u32, c: u32) {
        self.colors[v as usize] = 0;
        self.uncolored += 1;
        for &u in &self.adj[v as usize] {
            let slot = &mut self.cnt[u as usize][c as usize - 1];
            *slot -= 1;
            if *slot == 0 {
                self.sat[u as usize] -= 1;
            }
        }
    }

    /// Max saturation, ties by higher square-degree, then lower id.
    fn select(&self) -> u32 {
        let mut best: Option<u32> = None;
        for v in 0..self.adj.len() as u32 {
            if self.colors[v as usize] != 0 {
                continue;
            }
            match best {
                None => best = Some(v),
                Some(b) => {
                    let key = (self.sat[v as usize], self.adj[v as usize].len());
                    let bkey = (self.sat[b as usize], self.adj[b as usize].len());
                    if key > bkey {
                        best = Some(v);
                    }
                }
            }
        }
        best.expect("called with uncolored vertices")
    }

    fn search(&mut self, max_used: u32, budget: &mut Budget) -> Result<bool, Exhausted> {
        if self.uncolored == 0 {
            return Ok(true);
        }
        let v = self.select();
        // never open more than one fresh color: symmetric to any other
        let limit = (max_used + 1).min(self.ell as u32);
        for c in 1..=limit {
            if self.cnt[v as usize][c as usize - 1] != 0 {
                continue;
            }
            budget.tick()?;
            self.assign(v, c);
            if self.search(max_used.max(c), budget)? {
                return Ok(true);
            }
            self.unassign(v, c);
        }
        Ok(false)
    }
}

/// First-fit greedy in saturation order; never fails, uses at most
/// 1 + max square-degree colors.
fn dsatur_greedy(adj: &[Vec<u32>]) -> (Vec<u32>, usize) {
    let n = adj.len();
    let mut colors = vec![0u32; n];
    let mut sat_sets: Vec<Vec<u32>> = vec![vec![]; n];
    for _ in 0..n {
        let mut best: Option<u32> = None;
        for v in 0..n as u32 {
            if colors[v as usize] != 0 {
                continue;
            }
            match best {
                None => best = Some(v),
                Some(b) => {
                    let key = (sat_sets[v as usize].len(), adj[v as usize].len());
                    let bkey = (sat_sets[b as usize].len(), adj[b as usize].len());
                    if key > bkey {
                        best = Some(v);
                    }
                }
            }
        }
        let v = best.unwrap();
        let mut c = 1u32;
        while sat_sets[v as usize].contains(&c) {
            c += 1;
        }
        colors[v as usize] = c;
        for &u in &adj[v as usize] {
            if !sat_sets[u as usize].contains(&c) {
                sat_sets[u as usize].push(c);
            }
        }
    }
    let used = colors.iter().copied().max().unwrap_or(0) as usize;
    (colors, used)
}

/// Greedy clique seeded at the maximum-degree vertex of the square
/// graph; each step adds the candidate with most candidate-neighbours.
fn greedy_clique(adj: &[Vec<u32>]) -> Vec<u32> {
    let n = adj.len();
    if n == 0 {
        return vec![];
    }
    let mut seed = 0u32;
    for v in 1..n as u32 {
        if adj[v as usize].len() > adj[seed as usize].len() {
            seed = v;
        }
    }
    let mut clique = vec![seed];
    let mut cand: Vec<u32> = adj[seed as usize].clone();
    while !cand.is_empty() {
        let mut best = cand[0];
        let restricted = |u: u32| {
            adj[u as usize]
                .iter()
                .filter(|w| cand.binary_search(w).is_ok())
                .count()
        };
        let mut best_deg = restricted(best);
        for &u in &cand[1..] {
            let d = restricted(u);
            if d > best_deg {
                best = u;
                best_deg = d;
            }
        }
        clique.push(best);
        cand.retain(|&w| w != best && adj[best as usize].binary_search(&w).is_ok());
    }
    clique.sort_unstable();
    clique
}

fn coloring_from(colors: &[u32], ell: usize) -> PartialColoring {
    let mut pc = PartialColoring::new(colors.len(), ell);
    for (v, &c) in colors.iter().enumerate() {
        if c != 0 {
            pc.set(v as u32, c).expect("solver colors within budget");
        }
    }
    pc
}

/// Color an arbitrary (sorted) adjacency structure with at most `ell`
/// colors: greedy first, exact search within the budget otherwise.
pub(crate) fn color_adjacency(adj: &[Vec<u32>], ell: usize, budget: u64) -> ColoringResult {
    let (greedy, used) = dsatur_greedy(adj);
    if used <= ell {
        return ColoringResult {
            outcome: Outcome::Found,
            coloring: Some(coloring_from(&greedy, ell)),
            colors_used: used,
        };
    }
    if greedy_clique(adj).len() > ell {
        return ColoringResult {
            outcome: Outcome::Infeasible,
            coloring: None,
            colors_used: 0,
        };
    }
    let mut searcher = Searcher::new(adj, ell);
    let mut b = Budget::new(budget);
    match searcher.search(0, &mut b) {
        Ok(true) => {
            let used = searcher.colors.iter().copied().max().unwrap_or(0) as usize;
            ColoringResult {
                outcome: Outcome::Found,
                coloring: Some(coloring_from(&searcher.colors, ell)),
                colors_used: used,
            }
        }
        Ok(false) => ColoringResult {
            outcome: Outcome::Infeasible,
            coloring: None,
            colors_used: 0,
        },
        Err(Exhausted) => ColoringResult {
            outcome: Outcome::BudgetExhausted,
            coloring: None,
            colors_used: 0,
        },
    }
}

/// Search for any total 2-distance coloring with at most `ell` colors.
pub fn feasible_coloring(g: &Graph, ell: usize, budget: u64) -> ColoringResult {
    color_adjacency(&square_adjacency(g), ell, budget)
}

/// Result of the exact chromatic computation on the square graph.
#[derive(Debug, Clone)]
pub struct Chi2Result {
    pub lower: usize,
    pub upper: usize,
    /// True when lower == upper was certified within the budget.
    pub exact: bool,
    /// A valid coloring with `upper` colors.
    pub witness: PartialColoring,
    /// Clique in the square graph; a size-`upper` clique makes the
    /// bound tight by itself.
    pub clique: Vec<u32>,
}

impl Chi2Result {
    pub fn chi2(&self) -> Option<usize> {
        self.exact.then_some(self.upper)
    }

    pub fn clique_tight(&self) -> bool {
        self.clique.len() == self.upper
    }
}

/// Exact 2-distance chromatic number by iterated feasibility search,
/// or a certified interval if the node budget runs out.
pub fn chi2_exact(g: &Graph, budget: u64) -> Chi2Result {
    let adj = square_adjacency(g);
    let n = adj.len();
    if n == 0 {
        return Chi2Result {
            lower: 0,
            upper: 0,
            exact: true,
            witness: PartialColoring::new(0, 0),
            clique: vec![],
        };
    }
    let clique = greedy_clique(&adj);
    let (greedy, used) = dsatur_greedy(&adj);
    let mut lower = clique.len();
    let mut upper = used;
    let mut witness = coloring_from(&greedy, used);
    let mut b = Budget::new(budget);
    let mut exact = lower >= upper;
    while lower < upper {
        let mut searcher = Searcher::new(&adj, upper - 1);
        match searcher.search(0, &mut b) {
            Ok(true) => {
                let used = searcher.colors.iter().copied().max().unwrap_or(0) as usize;
                upper = used;
                witness = coloring_from(&searcher.colors, used);
            }
            Ok(false) => {
                lower = upper;
                exact = true;
            }
            Err(Exhausted) => break,
        }
    }
    if lower == upper {
        exact = true;
    }
    Chi2Result {
        lower,
        upper,
        exact,
        witness,
        clique,
    }
}

/// First-fit along the supplied vertex order.
pub fn greedy_2distance(g: &Graph, order: &[u32]) -> Result<ColoringResult, ColoringError> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(ColoringError::BadOrder);
    }
    for &v in order {
        if v as usize >= n || seen[v as usize] {
            return Err(ColoringError::BadOrder);
        }
        seen[v as usize] = true;
    }
    let mut colors = vec![0u32; n];
    for &v in order {
        let mut forbidden: Vec<u32> = g
            .ball2(v)
            .iter()
            .map(|&u| colors[u as usize])
            .filter(|&c| c != 0)
            .collect();
        forbidden.sort_unstable();
        forbidden.dedup();
        let mut c = 1u32;
        for f in forbidden {
            if f == c {
                c += 1;
            } else if f > c {
                break;
            }
        }
        colors[v as usize] = c;
    }
    let used = colors.iter().copied().max().unwrap_or(0) as usize;
    Ok(ColoringResult {
        outcome: Outcome::Found,
        coloring: Some(coloring_from(&colors, used.max(1))),
        colors_used: used,
    })
}

/// The two bounds this toolkit certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    /// girth >= 5: chi2 <= Delta + 7
    Main,
    /// girth >= 5 and Delta >= 10: chi2 <= Delta + 6
    Main2,
}

impl Theorem {
    pub fn name(self) -> &'static str {
        match self {
            Theorem::Main => "main",
            Theorem::Main2 => "main2",
        }
    }

    /// Slack over the maximum degree; also the classification parameter k.
    pub fn k(self) -> usize {
        match self {
            Theorem::Main => 7,
            Theorem::Main2 => 6,
        }
    }

    pub fn bound(self, delta: usize) -> usize {
        delta + self.k()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundVerdict {
    /// Hypotheses hold and a coloring within the bound was exhibited.
    Holds { colors_used: usize },
    /// One or more hypotheses fail; the bound is not asserted.
    HypothesisFailure(Vec<String>),
    /// Hypotheses hold but no coloring within the bound exists.
    Counterexample { serialized: String },
    /// Search budget exhausted, or bound exceeded without planarity
    /// evidence.
    Inconclusive(String),
}

#[derive(Debug, Clone)]
pub struct BoundReport {
    pub theorem: Theorem,
    pub delta: usize,
    pub bound: usize,
    /// True when the input carries no accepted embedding; such inputs
    /// can never be flagged as counterexamples.
    pub planarity_unverified: bool,
    pub verdict: BoundVerdict,
    pub witness: Option<PartialColoring>,
}

/// Check a graph against one of the two bounds: verify the hypotheses,
/// then certify the bound by exhibiting a coloring at `Delta + k`.
pub fn verify_bound(g: &Graph, theorem: Theorem, budget: u64) -> BoundReport {
    let delta = g.max_degree();
    let bound = theorem.bound(delta);
    let planarity_ok = g.is_embedded() && g.vertex_count() > 0 && g.trace_faces().is_ok();
    let mut failures = vec![];
    if let Some(girth) = g.girth() {
        if girth < 5 {
            failures.push(format!("girth < 5 (girth = {girth})"));
        }
    }
    if theorem == Theorem::Main2 && delta < 10 {
        failures.push(format!("maximum degree < 10 (Delta = {delta})"));
    }
    if !failures.is_empty() {
        return BoundReport {
            theorem,
            delta,
            bound,
            planarity_unverified: !planarity_ok,
            verdict: BoundVerdict::HypothesisFailure(failures),
            witness: None,
        };
    }
    let r = feasible_coloring(g, bound, budget);
    let verdict = match r.outcome {
        Outcome::Found => BoundVerdict::Holds {
            colors_used: r.colors_used,
        },
        Outcome::Infeasible => {
            if planarity_ok {
                BoundVerdict::Counterexample {
                    serialized: g.serialize(),
                }
            } else {
                BoundVerdict::Inconclusive(
                    "bound exceeded but planarity unverified (no accepted embedding)".into(),
                )
            }
        }
        Outcome::BudgetExhausted => {
            BoundVerdict::Inconclusive("search budget exhausted".into())
        }
    };
    BoundReport {
        theorem,
        delta,
        bound,
        planarity_unverified: !planarity_ok,
        verdict,
        witness: r.coloring,
    }
}
