#![allow(dead_code)] // each test binary uses a subset of these oracles

//! Independent oracles for the acceptance suite. Everything here
//! recomputes results from scratch, without going through the library
//! code paths it checks.

use std::collections::BTreeMap;

use dist2_core::classify::{Finding, Section};
use dist2_core::discharge::{Charge, ChargeState, Entity, RuleSetId, Transfer};
use dist2_core::graph::{Face, Graph};

/// Pairwise distances by BFS from every vertex; usize::MAX when
/// unreachable.
pub fn distances(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut out = vec![vec![usize::MAX; n]; n];
    for s in 0..n {
        let d = &mut out[s];
        d[s] = 0;
        let mut queue = std::collections::VecDeque::from([s as u32]);
        while let Some(v) = queue.pop_front() {
            for &u in g.neighbors(v) {
                if d[u as usize] == usize::MAX {
                    d[u as usize] = d[v as usize] + 1;
                    queue.push_back(u);
                }
            }
        }
    }
    out
}

/// Naive chromatic number of the distance-2 conflict graph: build the
/// adjacency from pairwise distances, then backtrack over k = 1, 2, ...
/// with vertices in id order.
pub fn oracle_chi2(g: &Graph) -> usize {
    let n = g.vertex_count();
    if n == 0 {
        return 0;
    }
    let dist = distances(g);
    let conflict: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            (0..n)
                .filter(|&u| u != v && dist[v][u] <= 2)
                .collect()
        })
        .collect();

    fn backtrack(conflict: &[Vec<usize>], colors: &mut [usize], v: usize, k: usize) -> bool {
        if v == conflict.len() {
            return true;
        }
        for c in 1..=k {
            if conflict[v].iter().all(|&u| colors[u] != c) {
                colors[v] = c;
                if backtrack(conflict, colors, v + 1, k) {
                    return true;
                }
                colors[v] = 0;
            }
        }
        false
    }

    for k in 1..=n {
        let mut colors = vec![0; n];
        if backtrack(&conflict, &mut colors, 0, k) {
            return k;
        }
    }
    unreachable!("n colors always suffice")
}

/// Exhaustive shortest-cycle search: extend simple paths from every
/// start vertex and close them back. Only for small graphs.
pub fn oracle_girth(g: &Graph) -> Option<usize> {
    let n = g.vertex_count();
    let mut best = usize::MAX;

    fn extend(
        g: &Graph,
        start: u32,
        v: u32,
        visited: &mut Vec<bool>,
        len: usize,
        best: &mut usize,
    ) {
        for &u in g.neighbors(v) {
            if u == start && len >= 3 {
                *best = (*best).min(len);
            } else if !visited[u as usize] && u > start {
                // only cycles whose minimum vertex is `start`
                visited[u as usize] = true;
                extend(g, start, u, visited, len + 1, best);
                visited[u as usize] = false;
            }
        }
    }

    for start in 0..n as u32 {
        let mut visited = vec![false; n];
        visited[start as usize] = true;
        extend(g, start, start, &mut visited, 1, &mut best);
    }
    (best != usize::MAX).then_some(best)
}

/// Independent face trace using the mirror convention (leave along the
/// neighbour *before* the arriving one). Returns the sorted multiset of
/// face lengths, which is invariant under reflection.
pub fn oracle_face_lengths(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let pos = |v: u32, u: u32| -> usize {
        g.neighbors(v).iter().position(|&x| x == u).unwrap()
    };
    let mut offset = vec![0usize; n + 1];
    for v in 0..n {
        offset[v + 1] = offset[v] + g.degree(v as u32);
    }
    let mut visited = vec![false; offset[n]];
    let mut lengths = vec![];
    for v in 0..n as u32 {
        for slot in 0..g.degree(v) {
            if visited[offset[v as usize] + slot] {
                continue;
            }
            let (mut a, mut sa) = (v, slot);
            let mut len = 0;
            loop {
                visited[offset[a as usize] + sa] = true;
                let b = g.neighbors(a)[sa];
                len += 1;
                let d = g.degree(b);
                let next = (pos(b, a) + d - 1) % d;
                a = b;
                sa = next;
                if (a, sa) == (v, slot) {
                    break;
                }
            }
            lengths.push(len);
        }
    }
    lengths.sort_unstable();
    lengths
}

/// From-scratch light/expendable classification used to re-verify
/// detector witnesses: D, buckets, e and light recomputed from the
/// distance matrix.
pub struct OracleClass {
    pub degree_sum: Vec<usize>,
    pub expendable: Vec<bool>,
    pub light: Vec<bool>,
}

pub fn oracle_classify(g: &Graph, k: usize, delta: usize) -> OracleClass {
    let n = g.vertex_count();
    let dist = distances(g);
    let deg: Vec<usize> = (0..n as u32).map(|v| g.degree(v)).collect();
    let degree_sum: Vec<usize> = (0..n as u32)
        .map(|v| g.neighbors(v).iter().map(|&u| deg[u as usize]).sum())
        .collect();
    let mut bucket_sum = vec![0usize; n];
    for v in 0..n as u32 {
        for &u in g.neighbors(v) {
            if deg[u as usize] == 2 {
                let other = g.neighbors(u).iter().copied().find(|&w| w != v).unwrap();
                let d = deg[other as usize];
                if (3..k).contains(&d) {
                    bucket_sum[v as usize] += 1;
                }
            }
        }
    }
    let expendable: Vec<bool> = (0..n)
        .map(|v| degree_sum[v] < delta + k + bucket_sum[v])
        .collect();
    let light: Vec<bool> = (0..n)
        .map(|v| {
            let e = (0..n)
                .filter(|&u| u != v && dist[v][u] <= 2 && expendable[u])
                .count();
            degree_sum[v] < delta + k + e
        })
        .collect();
    OracleClass {
        degree_sum,
        expendable,
        light,
    }
}

/// Re-verify one finding against its pattern with independent
/// recomputation. Returns false when the witness does not realize the
/// claimed configuration.
pub fn oracle_check_finding(g: &Graph, f: &Finding) -> bool {
    let k = f.section.k();
    let delta = g.max_degree().max(1);
    let cls = oracle_classify(g, k, delta);
    let deg = |v: u32| g.degree(v);
    let adj = |u: u32, v: u32| g.has_edge(u, v);
    let w = &f.witness;
    let letter = f
        .rule_id
        .split(['(', ')'])
        .nth(1)
        .unwrap_or("")
        .to_string();
    let base = f.rule_id.split('(').next().unwrap_or("");
    let n2_of = |v: u32| -> Vec<u32> {
        g.neighbors(v)
            .iter()
            .copied()
            .filter(|&u| deg(u) == 2)
            .collect()
    };
    match (base, letter.as_str()) {
        ("Cor3.1", "a") | ("Cor4.1", "a") => {
            deg(w[0]) == 2 && deg(w[1]) == 2 && adj(w[0], w[1])
        }
        ("Cor3.1", "b") | ("Cor4.1", "b") => {
            deg(w[0]) == 2
                && g.neighbors(w[0]).iter().any(|&a| deg(a) < k)
                && adj(w[0], w[1])
                && cls.light[w[1] as usize]
        }
        ("Cor3.1", "c") | ("Cor4.1", "c") => {
            deg(w[0]) == 3 && deg(w[1]) == 2 && adj(w[0], w[1]) && adj(w[0], w[2])
                && w[1] != w[2]
                && deg(w[2]) <= k - 2
        }
        ("Cor3.1", "d") | ("Cor4.1", "d") => {
            deg(w[0]) == 4
                && w[1..].len() >= 3
                && w[1..].iter().all(|&x| deg(x) == 2 && adj(w[0], x))
        }
        ("Cor3.1", "e") | ("Cor4.1", "e") => {
            deg(w[0]) == 5
                && w[1..].len() >= 4
                && w[1..].iter().all(|&x| deg(x) == 2 && adj(w[0], x))
        }
        ("Cor3.1", "f") | ("Cor4.1", "f") => {
            adj(w[0], w[1])
                && cls.light[w[1] as usize]
                && cls.degree_sum[w[0] as usize] < delta + k + 1
        }
        ("Cor3.2", "a") | ("Cor4.2", "a") => {
            deg(w[0]) <= k
                && cls.light[w[0] as usize]
                && deg(w[1]) == 2
                && adj(w[0], w[1])
        }
        ("Cor3.2", "b") | ("Cor4.2", "b") => {
            deg(w[0]) == k - 1
                && cls.light[w[0] as usize]
                && adj(w[0], w[1])
                && deg(w[1]) == 3
                && n2_of(w[1]).len() == 1
        }
        ("Prop3.3", letter) => {
            let (vdeg, vtwos, wmax) = match letter {
                "a" => (3, 1, 6),
                "b" => (4, 2, 5),
                "c" => (5, 3, 4),
                _ => return false,
            };
            check_prop(g, w, vdeg, vtwos, wmax, 1)
        }
        ("Prop4.3", letter) => match letter {
            "a" => check_prop(g, w, 3, 1, 5, 1),
            "b" => check_prop(g, w, 4, 2, 5, 2) || check_prop(g, w, 4, 2, 4, 1),
            _ => false,
        },
        ("Lem2.3", _) => {
            adj(w[0], w[1]) && cls.light[w[0] as usize] && cls.light[w[1] as usize]
        }
        ("Lem2.5", _) => {
            let v = w[0];
            let s = &w[1..];
            let dist = distances(g);
            let e = (0..g.vertex_count())
                .filter(|&u| u != v as usize && dist[v as usize][u] <= 2 && cls.expendable[u])
                .count();
            s.iter().all(|&u| {
                adj(v, u) && cls.light[u as usize] && !cls.expendable[u as usize]
            }) && cls.degree_sum[v as usize] < delta + k + e + s.len()
        }
        _ => false,
    }
}

fn check_prop(g: &Graph, w: &[u32], vdeg: usize, vtwos: usize, wmax: usize, need: usize) -> bool {
    if w.len() < 2 + need {
        return false;
    }
    let (v, mid) = (w[0], w[1]);
    let zs = &w[2..2 + need];
    let xs: Vec<u32> = g
        .neighbors(v)
        .iter()
        .copied()
        .filter(|&u| g.degree(u) == 2)
        .collect();
    g.degree(v) == vdeg
        && xs.len() == vtwos
        && g.has_edge(v, mid)
        && !xs.contains(&mid)
        && g.degree(mid) <= wmax
        && zs.iter().all(|&z| {
            g.degree(z) == 2 && g.has_edge(mid, z) && !xs.contains(&z)
        })
        && zs.windows(2).all(|p| p[0] != p[1])
}

/// Small edge-list builder for constructed detector instances.
pub struct GB {
    n: u32,
    edges: Vec<(u32, u32)>,
}

impl GB {
    pub fn new() -> Self {
        GB { n: 0, edges: vec![] }
    }

    pub fn vertex(&mut self) -> u32 {
        self.n += 1;
        self.n - 1
    }

    pub fn edge(&mut self, u: u32, v: u32) {
        self.edges.push((u, v));
    }

    /// Attach `count` fresh leaves to v.
    pub fn leaves(&mut self, v: u32, count: usize) {
        for _ in 0..count {
            let l = self.vertex();
            self.edge(v, l);
        }
    }

    /// Attach a pendant path v - a - b; returns a, the new 2-vertex.
    pub fn pendant_two(&mut self, v: u32) -> u32 {
        let a = self.vertex();
        let b = self.vertex();
        self.edge(v, a);
        self.edge(a, b);
        a
    }

    pub fn build(self) -> Graph {
        Graph::from_edges(self.n as usize, &self.edges).expect("constructed instance is simple")
    }

    /// Build with sorted-adjacency rotations; valid as an embedding for
    /// forests.
    #[allow(dead_code)]
    pub fn build_embedded(self) -> Graph {
        let mut rot = vec![Vec::new(); self.n as usize];
        for &(u, v) in &self.edges {
            rot[u as usize].push(v);
            rot[v as usize].push(u);
        }
        for r in &mut rot {
            r.sort_unstable();
        }
        Graph::from_rotations(rot).expect("constructed instance is simple")
    }
}

/// Count findings with the given rule id.
pub fn count_rule(findings: &[Finding], rule_id: &str) -> usize {
    findings.iter().filter(|f| f.rule_id == rule_id).count()
}

/// Convenience: run the detectors and index counts by rule id.
pub fn finding_histogram(findings: &[Finding]) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for f in findings {
        *out.entry(f.rule_id.clone()).or_insert(0) += 1;
    }
    out
}

#[allow(dead_code)]
pub fn section_name(s: Section) -> &'static str {
    s.name()
}

/// Re-evaluate every ledger entry's guard and amount against the frozen
/// input structure, independently of the engine. Face-rule entries are
/// checked as a group per face: equal shares over the poor occurrences
/// that sum to the face's phase-1 charge.
pub fn oracle_check_ledger(
    g: &Graph,
    faces: &[Face],
    id: RuleSetId,
    ledger: &[Transfer],
    initial: &ChargeState,
) -> Result<(), String> {
    let k = id.k();
    let delta = g.max_degree().max(1);
    let cls = oracle_classify(g, k, delta);
    let q = Charge::new;
    let deg = |v: u32| g.degree(v);
    let adj = |u: u32, v: u32| g.has_edge(u, v);
    let n2s = |v: u32| g.neighbors(v).iter().filter(|&&u| deg(u) == 2).count();
    let n3s = |v: u32| g.neighbors(v).iter().filter(|&&u| deg(u) == 3).count();
    let kd = |v: u32, kk: usize, dd: usize| deg(v) == kk && n2s(v) == dd;
    let light = |v: u32| cls.light[v as usize];
    let is_64 = |v: u32| kd(v, 6, 4);
    let has_light3 = |v: u32| g.neighbors(v).iter().any(|&u| deg(u) == 3 && light(u));
    let has_heavy3 = |v: u32| g.neighbors(v).iter().any(|&u| deg(u) == 3 && !light(u));
    let face_has_edge_to = |fi: u32, from: u32, pred: &dyn Fn(u32) -> bool| {
        g.neighbors(from)
            .iter()
            .any(|&u| pred(u) && faces[fi as usize].incidences(from, u) > 0)
    };
    let fail = |t: &Transfer, why: &str| Err(format!("{}: {}", t.render(), why));

    let face_rule = match id {
        RuleSetId::A => "R9",
        RuleSetId::B => "R13",
    };
    let mut face_payout: BTreeMap<u32, Vec<&Transfer>> = BTreeMap::new();
    let mut face_receipts: BTreeMap<u32, Charge> = BTreeMap::new();

    for t in ledger {
        if t.rule == face_rule {
            match (t.from, t.to) {
                (Entity::Face(f), Entity::Vertex(_)) => {
                    face_payout.entry(f).or_default().push(t);
                    continue;
                }
                _ => return fail(t, "face rule must pay a vertex from a face"),
            }
        }
        let (from, vertex_to) = match (t.from, t.to) {
            (Entity::Vertex(a), Entity::Vertex(b)) => (a, Some(b)),
            (Entity::Vertex(a), Entity::Face(f)) => {
                *face_receipts.entry(f).or_insert_with(|| Charge::new(0, 1)) += t.amount;
                (a, None)
            }
            _ => return fail(t, "phase-1 source must be a vertex"),
        };
        let ok = match (id, t.rule.as_str(), vertex_to) {
            (_, "R1", Some(to)) => deg(to) == 2 && adj(from, to) && t.amount == q(1, 1),
            (RuleSetId::A, "R2", Some(to)) => {
                kd(to, 3, 1) && adj(from, to) && deg(from) >= 6 && t.amount == q(3, 4)
            }
            (RuleSetId::A, "R3", Some(to)) => {
                kd(to, 3, 0) && light(to) && adj(from, to) && t.amount == q(1, 6)
            }
            (RuleSetId::A, "R4(a)", Some(to)) => {
                kd(to, 3, 0) && !light(to) && has_light3(to) && adj(from, to)
                    && deg(from) >= 5
                    && t.amount == q(1, 3)
            }
            (RuleSetId::A, "R4(b)", Some(to)) => {
                kd(to, 3, 0) && !light(to) && has_heavy3(to) && adj(from, to)
                    && deg(from) >= 4
                    && t.amount == q(1, 4)
            }
            (RuleSetId::A, "R4(c)", Some(to)) => {
                kd(to, 3, 0) && !light(to) && n3s(to) == 0 && adj(from, to)
                    && t.amount == q(1, 6)
            }
            (RuleSetId::A, "R5(a)", Some(to)) => {
                kd(to, 4, 1) && n3s(to) == 1 && adj(from, to)
                    && ((deg(from) == 5 && t.amount == q(1, 12))
                        || (deg(from) >= 6 && t.amount == q(1, 6)))
            }
            (RuleSetId::A, "R5(b)", Some(to)) => {
                kd(to, 4, 1) && n3s(to) == 2 && adj(from, to) && deg(from) >= 7
                    && t.amount == q(1, 3)
            }
            (RuleSetId::A, "R5(c)", Some(to)) => {
                kd(to, 4, 2) && adj(from, to) && deg(from) >= 5 && t.amount == q(1, 2)
            }
            (RuleSetId::A, "R6", Some(to)) => {
                kd(to, 5, 3) && adj(from, to)
                    && ((deg(from) >= 7 && t.amount == q(1, 2))
                        || ((deg(from) == 6 || kd(from, 5, 0)) && t.amount == q(1, 4)))
            }
            (RuleSetId::A, "R7", Some(to)) => {
                is_64(to) && adj(from, to) && deg(from) >= 7 && t.amount == q(1, 6)
            }
            (RuleSetId::A, "R8", None) => {
                let Entity::Face(f) = t.to else { return fail(t, "R8 targets a face") };
                deg(from) >= 6
                    && !is_64(from)
                    && t.amount == q(1, 8)
                    && face_has_edge_to(f, from, &|u| deg(u) >= 6 && !is_64(u))
            }
            (RuleSetId::B, "R2", Some(to)) => {
                kd(to, 3, 1) && adj(from, to)
                    && t.amount
                        == match deg(from) {
                            5 => q(1, 2),
                            6 => q(2, 3),
                            7 | 8 => q(3, 4),
                            9 => q(5, 6),
                            _ => return fail(t, "B-R2 giver degree"),
                        }
            }
            (RuleSetId::B, "R3", Some(to)) => {
                kd(to, 3, 0) && light(to) && adj(from, to) && deg(from) <= 9
                    && t.amount == q(1, 6)
            }
            (RuleSetId::B, "R4(a)", Some(to)) => {
                kd(to, 3, 0) && !light(to) && has_light3(to) && adj(from, to)
                    && t.amount
                        == match deg(from) {
                            5 => q(1, 6),
                            6..=8 => q(1, 3),
                            9 => q(1, 2),
                            _ => return fail(t, "B-R4(a) giver degree"),
                        }
            }
            (RuleSetId::B, "R4(b)", Some(to)) => {
                kd(to, 3, 0) && !light(to) && !has_light3(to) && adj(from, to)
                    && t.amount
                        == match deg(from) {
                            5 => q(1, 6),
                            6 => q(1, 4),
                            7 => q(1, 3),
                            8 | 9 => q(1, 2),
                            _ => return fail(t, "B-R4(b) giver degree"),
                        }
            }
            (RuleSetId::B, "R5(a)", Some(to)) => {
                kd(to, 4, 1) && n3s(to) == 1 && adj(from, to)
                    && t.amount
                        == match deg(from) {
                            6 => q(1, 12),
                            7 | 8 => q(1, 6),
                            _ => return fail(t, "B-R5(a) giver degree"),
                        }
            }
            (RuleSetId::B, "R5(b)", Some(to)) => {
                kd(to, 4, 2) && adj(from, to) && (5..=8).contains(&deg(from))
                    && t.amount == q(1, 2)
            }
            (RuleSetId::B, "R6", Some(to)) => {
                kd(to, 5, 3) && adj(from, to) && (7..=8).contains(&deg(from))
                    && t.amount == q(1, 2)
            }
            (RuleSetId::B, "R7", Some(to)) => {
                deg(from) == 9 && adj(from, to) && (4..=6).contains(&deg(to))
                    && t.amount == q(1, 2)
            }
            (RuleSetId::B, "R8", Some(to)) => {
                deg(from) >= 10 && adj(from, to) && (3..=8).contains(&deg(to))
                    && t.amount == q(1, 1)
            }
            (RuleSetId::B, "R9", None) => {
                let Entity::Face(f) = t.to else { return fail(t, "B-R9 targets a face") };
                deg(from) == 7
                    && g.neighbors(from).iter().filter(|&&u| deg(u) >= 7).count() >= 2
                    && t.amount == q(1, 8)
                    && face_has_edge_to(f, from, &|u| deg(u) >= 7)
            }
            (RuleSetId::B, "R10", None) => {
                let Entity::Face(f) = t.to else { return fail(t, "B-R10 targets a face") };
                deg(from) == 8
                    && t.amount == q(1, 8)
                    && face_has_edge_to(f, from, &|u| deg(u) == 8)
            }
            (RuleSetId::B, "R11", None) => {
                let Entity::Face(f) = t.to else { return fail(t, "B-R11 targets a face") };
                deg(from) == 9
                    && t.amount == q(1, 4)
                    && face_has_edge_to(f, from, &|u| deg(u) >= 7)
            }
            (RuleSetId::B, "R12", None) => {
                let Entity::Face(f) = t.to else { return fail(t, "B-R12 targets a face") };
                deg(from) >= 10
                    && t.amount == q(1, 2)
                    && face_has_edge_to(f, from, &|u| deg(u) >= 9)
            }
            _ => return fail(t, "unknown rule or target kind"),
        };
        if !ok {
            return fail(t, "guard or amount re-evaluation failed");
        }
    }

    // face-rule groups: equal shares over the poor occurrences, summing
    // to the face's positive phase-1 charge
    let window = match id {
        RuleSetId::A => (7usize, 8usize),
        RuleSetId::B => (6, 9),
    };
    for (fi, group) in face_payout {
        let face = &faces[fi as usize];
        let len = face.walk.len();
        let mut centers = vec![];
        for i in 0..len {
            let (x, y) = face.walk[i];
            let z = face.walk[(i + 1) % len].1;
            if (window.0..=window.1).contains(&deg(y)) && deg(x) == 2 && deg(z) == 2 {
                centers.push(y);
            }
        }
        centers.sort_unstable();
        let mut targets: Vec<u32> = group
            .iter()
            .map(|t| match t.to {
                Entity::Vertex(v) => v,
                Entity::Face(_) => unreachable!("checked above"),
            })
            .collect();
        targets.sort_unstable();
        if targets != centers {
            return Err(format!(
                "face {fi}: payout targets {targets:?} differ from poor centers {centers:?}"
            ));
        }
        let share = group[0].amount;
        if !group.iter().all(|t| t.amount == share) {
            return Err(format!("face {fi}: unequal shares"));
        }
        let phase1 = initial.face[fi as usize]
            + face_receipts.get(&fi).copied().unwrap_or_else(|| Charge::new(0, 1));
        if share * Charge::new(group.len() as i64, 1) != phase1 {
            return Err(format!(
                "face {fi}: shares do not sum to the phase-1 charge"
            ));
        }
        if phase1 <= Charge::new(0, 1) {
            return Err(format!("face {fi}: paid out a non-positive charge"));
        }
    }
    Ok(())
}
