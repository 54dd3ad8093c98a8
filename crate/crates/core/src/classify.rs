//! Vertex classification by neighbour degree sums, and detectors for
//! configurations that cannot occur in a minimal counterexample to
//! either bound.
//!
//! For a parameter pair (k, Delta):
//!
//! - `D(v)` is the sum of the degrees of v's neighbours;
//! - v is *expendable* when `D(v) < Delta + k + sum_{i=3}^{k-1} n2[i](v)`,
//!   where `n2[i](v)` counts 2-neighbours of v whose other neighbour
//!   has degree exactly i;
//! - `e(v)` counts expendable vertices at distance 1 or 2 from v;
//! - v is *light* when `D(v) < Delta + k + e(v)`, otherwise *heavy*.
//!
//! Every expendable vertex is light, and every 2-vertex with a
//! neighbour of degree at most k-1 is expendable.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::coloring::Theorem;
use crate::graph::Graph;

/// Classification parameters: the color slack k and the degree
/// parameter Delta (defaults to the graph's maximum degree).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassParams {
    pub k: usize,
    pub delta: usize,
}

impl ClassParams {
    pub fn new(k: usize, delta: usize) -> Self {
        assert!(k >= 2, "k must be at least 2");
        assert!(delta >= 1, "Delta must be at least 1");
        ClassParams { k, delta }
    }

    /// Default Delta = Delta(G) (at least 1 for edgeless graphs).
    pub fn for_graph(g: &Graph, k: usize) -> Self {
        ClassParams::new(k, g.max_degree().max(1))
    }

    pub fn for_section(g: &Graph, section: Section) -> Self {
        ClassParams::for_graph(g, section.k())
    }

    pub fn ell(&self) -> usize {
        self.delta + self.k
    }
}

/// Per-vertex classification record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexClass {
    pub degree: usize,
    /// D(v), the neighbour degree sum.
    pub degree_sum: usize,
    /// n_i(v): neighbours of degree i.
    pub neighbor_degree_counts: BTreeMap<usize, usize>,
    /// n2[j](v): 2-neighbours whose other neighbour has degree j.
    pub two_neighbor_other_degree: BTreeMap<usize, usize>,
    pub expendable: bool,
    /// e(v): expendable vertices at distance 1 or 2.
    pub expendable_near: usize,
    pub light: bool,
}

impl VertexClass {
    pub fn n_i(&self, i: usize) -> usize {
        self.neighbor_degree_counts.get(&i).copied().unwrap_or(0)
    }

    /// Number of 2-neighbours.
    pub fn n2(&self) -> usize {
        self.n_i(2)
    }

    /// sum over 3 <= i <= k-1 of n2[i](v).
    pub fn expendable_bucket_sum(&self, k: usize) -> usize {
        self.two_neighbor_other_degree
            .iter()
            .filter(|&(&i, _)| (3..k).contains(&i))
            .map(|(_, &c)| c)
            .sum()
    }
}

#[derive(Debug, Clone)]
pub struct ClassificationTable {
    pub params: ClassParams,
    pub rows: Vec<VertexClass>,
    weak: Vec<Vec<u32>>,
}

impl ClassificationTable {
    pub fn light(&self, v: u32) -> bool {
        self.rows[v as usize].light
    }

    pub fn heavy(&self, v: u32) -> bool {
        !self.rows[v as usize].light
    }

    pub fn expendable(&self, v: u32) -> bool {
        self.rows[v as usize].expendable
    }

    pub fn degree(&self, v: u32) -> usize {
        self.rows[v as usize].degree
    }

    /// Exact k(d)-vertex test: degree k with exactly d 2-neighbours.
    pub fn is_kd(&self, v: u32, k: usize, d: usize) -> bool {
        let row = &self.rows[v as usize];
        row.degree == k && row.n2() == d
    }

    pub fn weak_neighbours(&self, v: u32) -> &[u32] {
        &self.weak[v as usize]
    }

    pub fn weak_adjacent(&self, u: u32, v: u32) -> bool {
        self.weak[u as usize].binary_search(&v).is_ok()
    }

    /// One line per vertex: `v d D n2 e_k status expendable`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (v, row) in self.rows.iter().enumerate() {
            let _ = writeln!(
                out,
                "{v} {} {} {} {} {} {}",
                row.degree,
                row.degree_sum,
                row.n2(),
                row.expendable_near,
                if row.light { "light" } else { "heavy" },
                row.expendable
            );
        }
        out
    }
}

/// Endpoints w != v of paths v - m - w through a middle vertex of
/// degree 2, sorted.
pub fn weak_neighbours(g: &Graph, v: u32) -> Vec<u32> {
    let mut out = vec![];
    for &m in g.neighbors(v) {
        if g.degree(m) == 2 {
            for &w in g.neighbors(m) {
                if w != v {
                    out.push(w);
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Compute the full classification table for (k, Delta).
pub fn classify(g: &Graph, params: ClassParams) -> ClassificationTable {
    let n = g.vertex_count();
    let deg: Vec<usize> = (0..n as u32).map(|v| g.degree(v)).collect();
    let mut rows: Vec<VertexClass> = (0..n as u32)
        .map(|v| {
            let mut degree_sum = 0;
            let mut neighbor_degree_counts = BTreeMap::new();
            let mut two_neighbor_other_degree = BTreeMap::new();
            for &u in g.neighbors(v) {
                degree_sum += deg[u as usize];
                *neighbor_degree_counts.entry(deg[u as usize]).or_insert(0) += 1;
                if deg[u as usize] == 2 {
                    let other = g
                        .neighbors(u)
                        .iter()
                        .copied()
                        .find(|&w| w != v)
                        .expect("2-vertex has a second neighbour");
                    *two_neighbor_other_degree
                        .entry(deg[other as usize])
                        .or_insert(0) += 1;
                }
            }
            VertexClass {
                degree: deg[v as usize],
                degree_sum,
                neighbor_degree_counts,
                two_neighbor_other_degree,
                expendable: false,
                expendable_near: 0,
                light: false,
            }
        })
        .collect();
    for row in rows.iter_mut() {
        row.expendable =
            row.degree_sum < params.delta + params.k + row.expendable_bucket_sum(params.k);
    }
    let near: Vec<usize> = (0..n as u32)
        .map(|v| {
            g.ball2(v)
                .iter()
                .filter(|&&u| rows[u as usize].expendable)
                .count()
        })
        .collect();
    for (row, e) in rows.iter_mut().zip(near) {
        row.expendable_near = e;
        row.light = row.degree_sum < params.delta + params.k + e;
    }
    let weak = (0..n as u32).map(|v| weak_neighbours(g, v)).collect();
    ClassificationTable { params, rows, weak }
}

/// Which structural battery to run: A pairs with the Delta+7 bound
/// (k = 7), B with the Delta+6 bound (k = 6).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Section {
    A,
    B,
}

impl Section {
    pub fn k(self) -> usize {
        match self {
            Section::A => 7,
            Section::B => 6,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Section::A => "A",
            Section::B => "B",
        }
    }

    pub fn for_theorem(t: Theorem) -> Self {
        match t {
            Theorem::Main => Section::A,
            Theorem::Main2 => Section::B,
        }
    }

    fn corollary_prefix(self) -> &'static str {
        match self {
            Section::A => "Cor3.1",
            Section::B => "Cor4.1",
        }
    }

    fn heavy_prefix(self) -> &'static str {
        match self {
            Section::A => "Cor3.2",
            Section::B => "Cor4.2",
        }
    }

    fn prop_prefix(self) -> &'static str {
        match self {
            Section::A => "Prop3.3",
            Section::B => "Prop4.3",
        }
    }
}

/// One occurrence of a configuration forbidden in a minimal
/// counterexample, with the vertices realizing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub rule_id: String,
    pub witness: Vec<u32>,
    pub section: Section,
    pub pattern: String,
}

impl Finding {
    pub fn render(&self) -> String {
        let w: Vec<String> = self.witness.iter().map(|v| v.to_string()).collect();
        format!("{}: ({}) {}", self.rule_id, w.join(","), self.pattern)
    }
}

/// Scan for every implemented forbidden configuration. An empty result
/// means none of the implemented patterns occur; it does not certify
/// criticality.
pub fn detect_configurations(g: &Graph, section: Section) -> Vec<Finding> {
    detect_configurations_with(g, section, ClassParams::for_section(g, section))
}

pub fn detect_configurations_with(
    g: &Graph,
    section: Section,
    params: ClassParams,
) -> Vec<Finding> {
    let table = classify(g, params);
    let k = params.k;
    let n = g.vertex_count() as u32;
    let mut out: Vec<Finding> = vec![];
    let mut push = |rule: String, witness: Vec<u32>, pattern: String| {
        out.push(Finding {
            rule_id: rule,
            witness,
            section,
            pattern,
        });
    };
    let deg = |v: u32| table.degree(v);
    let two_neighbors = |v: u32| -> Vec<u32> {
        g.neighbors(v)
            .iter()
            .copied()
            .filter(|&u| deg(u) == 2)
            .collect()
    };
    let cor = section.corollary_prefix();

    // (a) adjacent 2-vertices
    for (u, v) in g.edges() {
        if deg(u) == 2 && deg(v) == 2 {
            push(
                format!("{cor}(a)"),
                vec![u, v],
                "adjacent 2-vertices".into(),
            );
        }
    }
    // (b) a 2-vertex with a (k-1)--neighbour is forced light, so all of
    // its neighbours would have to be heavy
    for v in 0..n {
        if deg(v) != 2 {
            continue;
        }
        if !g.neighbors(v).iter().any(|&a| deg(a) < k) {
            continue;
        }
        for &u in g.neighbors(v) {
            if table.light(u) {
                push(
                    format!("{cor}(b)"),
                    vec![v, u],
                    format!(
                        "2-vertex with a {}-- neighbour (forced light) has a light neighbour",
                        k - 1
                    ),
                );
            }
        }
    }
    // (c) a 3-vertex with a 2-neighbour must have (k-1)+ other neighbours
    for v in 0..n {
        if deg(v) != 3 {
            continue;
        }
        let twos = two_neighbors(v);
        let Some(&x) = twos.first() else { continue };
        for &w in g.neighbors(v) {
            if w != x && deg(w) <= k - 2 {
                push(
                    format!("{cor}(c)"),
                    vec![v, x, w],
                    format!("3-vertex with 2-neighbour has a non-{}+ neighbour", k - 1),
                );
            }
        }
    }
    // (d) a 4-vertex with three 2-neighbours
    for v in 0..n {
        if deg(v) == 4 {
            let twos = two_neighbors(v);
            if twos.len() >= 3 {
                let mut w = vec![v];
                w.extend(twos);
                push(
                    format!("{cor}(d)"),
                    w,
                    "4-vertex with three 2-neighbours".into(),
                );
            }
        }
    }
    // (e) a 5-vertex with four 2-neighbours
    for v in 0..n {
        if deg(v) == 5 {
            let twos = two_neighbors(v);
            if twos.len() >= 4 {
                let mut w = vec![v];
                w.extend(twos);
                push(
                    format!("{cor}(e)"),
                    w,
                    "5-vertex with four 2-neighbours".into(),
                );
            }
        }
    }
    // (f) a vertex with a light neighbour needs D(v) >= Delta + k + 1
    for v in 0..n {
        if table.rows[v as usize].degree_sum > params.delta + k {
            continue;
        }
        if let Some(&u) = g.neighbors(v).iter().find(|&&u| table.light(u)) {
            push(
                format!("{cor}(f)"),
                vec![v, u],
                format!("light neighbour but D(v) <= Delta+{k}"),
            );
        }
    }
    // heavy corollary: (a) k-- vertex with a 2-neighbour must be heavy;
    // (b) (k-1)-vertex with a 3(1)-neighbour must be heavy
    let hp = section.heavy_prefix();
    for v in 0..n {
        if deg(v) <= k && table.light(v) {
            if let Some(&x) = two_neighbors(v).first() {
                push(
                    format!("{hp}(a)"),
                    vec![v, x],
                    format!("light {}-- vertex with a 2-neighbour", k),
                );
            }
        }
        if deg(v) == k - 1 && table.light(v) {
            if let Some(&u) = g
                .neighbors(v)
                .iter()
                .find(|&&u| table.is_kd(u, 3, 1))
            {
                push(
                    format!("{hp}(b)"),
                    vec![v, u],
                    format!("light {}-vertex with a 3(1)-neighbour", k - 1),
                );
            }
        }
    }
    // propositions: small vertices with 2-neighbours adjacent to other
    // small vertices with 2-neighbours
    let pp = section.prop_prefix();
    // shared pattern: v exactly-matching k(d), w a small neighbour with
    // enough 2-neighbours outside v's own
    let prop = |vdeg: usize,
                    vtwos: usize,
                    wmax: usize,
                    wtwos_needed: usize,
                    rule: String,
                    pattern: String,
                    out: &mut Vec<Finding>| {
        for v in 0..n {
            let row = &table.rows[v as usize];
            if row.degree != vdeg || row.n2() != vtwos {
                continue;
            }
            let xs = two_neighbors(v);
            for &w in g.neighbors(v) {
                if xs.contains(&w) || deg(w) > wmax {
                    continue;
                }
                let zs: Vec<u32> = two_neighbors(w)
                    .into_iter()
                    .filter(|z| !xs.contains(z))
                    .collect();
                if zs.len() >= wtwos_needed {
                    let mut witness = vec![v, w];
                    witness.extend(zs.into_iter().take(wtwos_needed));
                    out.push(Finding {
                        rule_id: rule.clone(),
                        witness,
                        section,
                        pattern: pattern.clone(),
                    });
                }
            }
        }
    };
    match section {
        Section::A => {
            prop(3, 1, 6, 1, format!("{pp}(a)"),
                "3(1)-vertex adjacent to a 6-- vertex having a 2-neighbour".into(), &mut out);
            prop(4, 2, 5, 1, format!("{pp}(b)"),
                "4(2)-vertex adjacent to a 5-- vertex having a 2-neighbour".into(), &mut out);
            prop(5, 3, 4, 1, format!("{pp}(c)"),
                "5(3)-vertex adjacent to a 4-- vertex having a 2-neighbour".into(), &mut out);
        }
        Section::B => {
            prop(3, 1, 5, 1, format!("{pp}(a)"),
                "3(1)-vertex adjacent to a 5-- vertex having a 2-neighbour".into(), &mut out);
            prop(4, 2, 5, 2, format!("{pp}(b)"),
                "4(2)-vertex adjacent to a 5-- vertex having two 2-neighbours".into(), &mut out);
            prop(4, 2, 4, 1, format!("{pp}(b)"),
                "4(2)-vertex adjacent to a 4-- vertex having a 2-neighbour".into(), &mut out);
        }
    }
    // adjacent light vertices
    for (u, v) in g.edges() {
        if table.light(u) && table.light(v) {
            out.push(Finding {
                rule_id: "Lem2.3".into(),
                witness: vec![u, v],
                section,
                pattern: "adjacent light vertices".into(),
            });
        }
    }
    // degree-sum slack against light non-expendable neighbours
    for v in 0..n {
        let s: Vec<u32> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| table.light(u) && !table.expendable(u))
            .collect();
        if !s.is_empty() {
            let row = &table.rows[v as usize];
            if row.degree_sum < params.delta + k + row.expendable_near + s.len() {
                let mut witness = vec![v];
                let mut s = s;
                s.sort_unstable();
                witness.extend(s);
                out.push(Finding {
                    rule_id: "Lem2.5".into(),
                    witness,
                    section,
                    pattern: "D(v) below Delta+k+e(v)+|light non-expendable neighbours|".into(),
                });
            }
        }
    }
    out.sort_by(|a, b| a.rule_id.cmp(&b.rule_id).then(a.witness.cmp(&b.witness)));
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScreenVerdict {
    /// The graph exhibits at least one disqualifying property.
    CannotBeCounterexample(Vec<String>),
    /// None of the implemented checks fired; inconclusive.
    Passed,
}

/// Screen a graph against the necessary conditions of a minimal
/// counterexample to the given bound.
pub fn min_counterexample_screen(g: &Graph, theorem: Theorem) -> ScreenVerdict {
    let mut reasons = vec![];
    if !g.is_connected() {
        reasons.push("disconnected".to_string());
    }
    let profile = g.degree_profile();
    if profile.min < 2 {
        reasons.push(format!("minimum degree < 2 (delta = {})", profile.min));
    }
    match theorem {
        Theorem::Main => {
            if !(7..=8).contains(&profile.max) {
                reasons.push(format!(
                    "maximum degree outside {{7,8}} (Delta = {}; other Delta are covered by earlier bounds)",
                    profile.max
                ));
            }
        }
        Theorem::Main2 => {
            if profile.max < 10 {
                reasons.push(format!(
                    "maximum degree < 10 fails the hypothesis (Delta = {})",
                    profile.max
                ));
            }
        }
    }
    if let Some(girth) = g.girth() {
        if girth < 5 {
            reasons.push(format!("girth < 5 fails the hypothesis (girth = {girth})"));
        }
    }
    if g.vertex_count() > 0 {
        let section = Section::for_theorem(theorem);
        for f in detect_configurations(g, section) {
            reasons.push(format!("configuration {}", f.render()));
        }
    }
    if reasons.is_empty() {
        ScreenVerdict::Passed
    } else {
        ScreenVerdict::CannotBeCounterexample(reasons)
    }
}
