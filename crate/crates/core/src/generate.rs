//! Graph generators and the pinned test corpus.
//!
//! Every generator is deterministic given its parameters (random trees
//! take an explicit seed), so a corpus entry can be regenerated
//! bit-exactly from its provenance string.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Error)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("cannot parse generator spec '{0}'")]
    BadSpec(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A generator specification. `to_string` gives the provenance form
/// accepted back by `parse`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Kind {
    Cycle(usize),
    Path(usize),
    Star(usize),
    /// Uniform random attachment tree on `n` vertices.
    Tree { n: usize, seed: u64 },
    Wheel(usize),
    Dodecahedron,
    K4,
    K23,
    /// Replace every edge of the base graph by a path with `t` internal
    /// vertices.
    Subdivide { base: Box<Kind>, t: usize },
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Kind::Cycle(n) => write!(f, "cycle({n})"),
            Kind::Path(n) => write!(f, "path({n})"),
            Kind::Star(n) => write!(f, "star({n})"),
            Kind::Tree { n, seed } => write!(f, "tree({n},{seed})"),
            Kind::Wheel(n) => write!(f, "wheel({n})"),
            Kind::Dodecahedron => write!(f, "dodecahedron"),
            Kind::K4 => write!(f, "k4"),
            Kind::K23 => write!(f, "k23"),
            Kind::Subdivide { base, t } => write!(f, "subdivide({base},{t})"),
        }
    }
}

impl Kind {
    /// Parse a spec such as `cycle(5)`, `tree(9,42)` or
    /// `subdivide(wheel(10),2)`.
    pub fn parse(spec: &str) -> Result<Kind, GenError> {
        let s = spec.trim();
        let bad = || GenError::BadSpec(spec.to_string());
        match s {
            "dodecahedron" => return Ok(Kind::Dodecahedron),
            "k4" => return Ok(Kind::K4),
            "k23" => return Ok(Kind::K23),
            _ => {}
        }
        let open = s.find('(').ok_or_else(bad)?;
        if !s.ends_with(')') {
            return Err(bad());
        }
        let name = &s[..open];
        let args = &s[open + 1..s.len() - 1];
        let parse_n = |a: &str| a.trim().parse::<usize>().map_err(|_| bad());
        match name {
            "cycle" => Ok(Kind::Cycle(parse_n(args)?)),
            "path" => Ok(Kind::Path(parse_n(args)?)),
            "star" => Ok(Kind::Star(parse_n(args)?)),
            "wheel" => Ok(Kind::Wheel(parse_n(args)?)),
            "tree" => {
                let (a, b) = args.split_once(',').ok_or_else(bad)?;
                Ok(Kind::Tree {
                    n: parse_n(a)?,
                    seed: b.trim().parse().map_err(|_| bad())?,
                })
            }
            "subdivide" => {
                // split at the last comma so the base spec may nest
                let comma = args.rfind(',').ok_or_else(bad)?;
                let base = Kind::parse(&args[..comma])?;
                let t = parse_n(&args[comma + 1..])?;
                Ok(Kind::Subdivide {
                    base: Box::new(base),
                    t,
                })
            }
            _ => Err(bad()),
        }
    }

    pub fn generate(&self) -> Result<Graph, GenError> {
        match self {
            Kind::Cycle(n) => cycle(*n),
            Kind::Path(n) => path(*n),
            Kind::Star(n) => star(*n),
            Kind::Tree { n, seed } => random_tree(*n, *seed),
            Kind::Wheel(n) => wheel(*n),
            Kind::Dodecahedron => dodecahedron(),
            Kind::K4 => k4(),
            Kind::K23 => k23(),
            Kind::Subdivide { base, t } => {
                let g = base.generate()?;
                Ok(subdivide(&g, *t)?)
            }
        }
    }
}

pub fn cycle(n: usize) -> Result<Graph, GenError> {
    if n < 3 {
        return Err(GenError::InvalidParams(format!("cycle needs n >= 3, got {n}")));
    }
    let rot = (0..n)
        .map(|i| vec![((i + n - 1) % n) as u32, ((i + 1) % n) as u32])
        .collect();
    Ok(Graph::from_rotations(rot)?)
}

pub fn path(n: usize) -> Result<Graph, GenError> {
    if n == 0 {
        return Err(GenError::InvalidParams("path needs n >= 1".into()));
    }
    let edges: Vec<(u32, u32)> = (1..n).map(|i| (i as u32 - 1, i as u32)).collect();
    tree_from_edges(n, &edges)
}

pub fn star(n: usize) -> Result<Graph, GenError> {
    let edges: Vec<(u32, u32)> = (1..=n).map(|i| (0, i as u32)).collect();
    tree_from_edges(n + 1, &edges)
}

/// Random attachment tree: vertex i joins a uniformly chosen earlier
/// vertex. Deterministic for a fixed seed.
pub fn random_tree(n: usize, seed: u64) -> Result<Graph, GenError> {
    if n == 0 {
        return Err(GenError::InvalidParams("tree needs n >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = vec![];
    for i in 1..n {
        let p = rng.gen_range(0..i);
        edges.push((p as u32, i as u32));
    }
    tree_from_edges(n, &edges)
}

fn tree_from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Graph, GenError> {
    // trees are planar with any rotation; use sorted adjacency
    let mut rot = vec![Vec::new(); n];
    for &(u, v) in edges {
        rot[u as usize].push(v);
        rot[v as usize].push(u);
    }
    for r in &mut rot {
        r.sort_unstable();
    }
    Ok(Graph::from_rotations(rot)?)
}

/// Wheel with hub 0 and an n-cycle rim 1..=n.
pub fn wheel(n: usize) -> Result<Graph, GenError> {
    if n < 3 {
        return Err(GenError::InvalidParams(format!("wheel needs n >= 3, got {n}")));
    }
    let rim = |i: usize| (1 + (i % n)) as u32;
    let mut faces: Vec<Vec<u32>> = (0..n).map(|i| vec![0, rim(i), rim(i + 1)]).collect();
    faces.push((0..n).map(rim).collect());
    from_faces(n + 1, &faces)
}

/// The dodecahedral graph with its pentagonal face structure: outer
/// ring 0..9, inner ring 10..19 joined by spokes i -- 10+i and chords
/// 10+i -- 10+((i+2) mod 10).
pub fn dodecahedron() -> Result<Graph, GenError> {
    let u = |i: usize| (i % 10) as u32;
    let v = |i: usize| (10 + i % 10) as u32;
    let mut faces: Vec<Vec<u32>> = (0..10)
        .map(|i| vec![u(i), u(i + 1), u(i + 2), v(i + 2), v(i)])
        .collect();
    faces.push(vec![v(0), v(2), v(4), v(6), v(8)]);
    faces.push(vec![v(1), v(3), v(5), v(7), v(9)]);
    from_faces(20, &faces)
}

pub fn k4() -> Result<Graph, GenError> {
    from_faces(4, &[vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 1], vec![1, 3, 2]])
}

/// K_{2,3} with parts {0, 1} and {2, 3, 4}.
pub fn k23() -> Result<Graph, GenError> {
    from_faces(
        5,
        &[vec![0, 2, 1, 3], vec![0, 3, 1, 4], vec![0, 4, 1, 2]],
    )
}

/// Replace every edge by a path with `t` internal vertices. Original
/// vertices keep their ids and rotation order; girth is multiplied by
/// t + 1.
pub fn subdivide(g: &Graph, t: usize) -> Result<Graph, GenError> {
    if t == 0 {
        return Ok(g.clone());
    }
    let n = g.vertex_count();
    let edges = g.edges();
    let mut rot: Vec<Vec<u32>> = (0..n)
        .map(|v| g.neighbors(v as u32).to_vec())
        .collect();
    let mut next_id = n as u32;
    for &(u, v) in &edges {
        // chain u - c_0 - c_1 - ... - c_{t-1} - v
        let chain: Vec<u32> = (0..t).map(|j| next_id + j as u32).collect();
        next_id += t as u32;
        for (j, &c) in chain.iter().enumerate() {
            let prev = if j == 0 { u } else { chain[j - 1] };
            let next = if j == t - 1 { v } else { chain[j + 1] };
            rot.push(vec![prev, next]);
            debug_assert_eq!(c as usize, rot.len() - 1);
        }
        let slot_u = rot[u as usize].iter().position(|&x| x == v).unwrap();
        rot[u as usize][slot_u] = chain[0];
        let slot_v = rot[v as usize].iter().position(|&x| x == u).unwrap();
        rot[v as usize][slot_v] = chain[t - 1];
    }
    let g2 = Graph::from_rotations(rot)?;
    if g.is_embedded() {
        Ok(g2)
    } else {
        // rebuild without an embedding claim
        Ok(Graph::from_edges(g2.vertex_count(), &g2.edges())?)
    }
}

/// Build a rotation system from an (unoriented) face list of a sphere
/// embedding. Faces are oriented consistently by propagation across
/// shared edges, then the rotation at each vertex is read off from the
/// directed-edge successors.
pub fn from_faces(n: usize, faces: &[Vec<u32>]) -> Result<Graph, GenError> {
    let bad = |msg: &str| GenError::InvalidParams(format!("face list: {msg}"));
    // each undirected edge must be used exactly twice across all faces
    let mut uses: std::collections::BTreeMap<(u32, u32), Vec<(usize, bool)>> = Default::default();
    for (fi, face) in faces.iter().enumerate() {
        if face.len() < 2 {
            return Err(bad("face shorter than 2"));
        }
        for i in 0..face.len() {
            let a = face[i];
            let b = face[(i + 1) % face.len()];
            if a == b || a as usize >= n || b as usize >= n {
                return Err(bad("bad edge in face walk"));
            }
            let key = (a.min(b), a.max(b));
            uses.entry(key).or_default().push((fi, a < b));
        }
    }
    for (e, v) in &uses {
        if v.len() != 2 {
            return Err(bad(&format!("edge {e:?} used {} times, expected 2", v.len())));
        }
    }
    // orient faces: shared edges must be traversed in opposite directions
    let mut flip: Vec<Option<bool>> = vec![None; faces.len()];
    for start in 0..faces.len() {
        if flip[start].is_some() {
            continue;
        }
        flip[start] = Some(false);
        let mut stack = vec![start];
        while let Some(f) = stack.pop() {
            let ff = flip[f].unwrap();
            for occ in uses.values().filter(|occ| occ.iter().any(|&(fi, _)| fi == f)) {
                let (f1, d1) = occ[0];
                let (f2, d2) = occ[1];
                if f1 == f2 {
                    // same face on both sides; the two traversals must
                    // already run in opposite directions
                    if f1 == f && d1 == d2 {
                        return Err(bad("edge traversed twice in the same direction"));
                    }
                    continue;
                }
                let (other, d_self, d_other) = if f1 == f { (f2, d1, d2) } else { (f1, d2, d1) };
                // the two sides must traverse the edge in opposite
                // effective directions: d_other ^ flip[other] = !(d_self ^ ff)
                let needed = d_other ^ !(d_self ^ ff);
                match flip[other] {
                    None => {
                        flip[other] = Some(needed);
                        stack.push(other);
                    }
                    Some(existing) => {
                        if existing != needed {
                            return Err(bad("face list is not consistently orientable"));
                        }
                    }
                }
            }
        }
    }
    // successor map: directed edge (a -> b) followed by (b -> c) in a face
    let mut succ: Vec<std::collections::BTreeMap<u32, u32>> = vec![Default::default(); n];
    for (fi, face) in faces.iter().enumerate() {
        let mut walk: Vec<u32> = face.clone();
        if flip[fi].unwrap() {
            walk.reverse();
        }
        let m = walk.len();
        for i in 0..m {
            let a = walk[i];
            let b = walk[(i + 1) % m];
            let c = walk[(i + 2) % m];
            if succ[b as usize].insert(a, c).is_some() {
                return Err(bad("directed edge appears twice after orientation"));
            }
        }
    }
    // read rotations: at v, the neighbour after a is succ[v][a]
    let mut rot = vec![Vec::new(); n];
    for v in 0..n {
        if succ[v].is_empty() {
            continue;
        }
        let start = *succ[v].keys().next().unwrap();
        let mut order = vec![start];
        let mut cur = start;
        loop {
            let next = *succ[v]
                .get(&cur)
                .ok_or_else(|| bad("vertex link is not a single cycle"))?;
            if next == start {
                break;
            }
            order.push(next);
            cur = next;
            if order.len() > succ[v].len() {
                return Err(bad("vertex link is not a single cycle"));
            }
        }
        if order.len() != succ[v].len() {
            return Err(bad("vertex link is not a single cycle"));
        }
        rot[v] = order;
    }
    Ok(Graph::from_rotations(rot)?)
}

/// One graph of the pinned corpus, with its provenance.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub kind: Kind,
    pub graph: Graph,
}

/// The default corpus: cycles 5..=12, paths 2..=12, stars 3..=10,
/// twenty seeded random trees on at most 12 vertices, the dodecahedron
/// and double subdivisions of K4, K_{2,3} and wheels 5..=10. Entries
/// are sorted by name.
pub fn pinned_corpus() -> Vec<CorpusEntry> {
    let mut kinds: Vec<(String, Kind)> = vec![];
    for n in 5..=12 {
        kinds.push((format!("cycle-{n:02}"), Kind::Cycle(n)));
    }
    for n in 2..=12 {
        kinds.push((format!("path-{n:02}"), Kind::Path(n)));
    }
    for n in 3..=10 {
        kinds.push((format!("star-{n:02}"), Kind::Star(n)));
    }
    for i in 0..20u64 {
        let n = 5 + (i as usize % 8);
        let seed = 101 + i;
        kinds.push((format!("tree-{n:02}-s{seed}"), Kind::Tree { n, seed }));
    }
    kinds.push(("dodecahedron".into(), Kind::Dodecahedron));
    kinds.push((
        "sub2-k4".into(),
        Kind::Subdivide {
            base: Box::new(Kind::K4),
            t: 2,
        },
    ));
    kinds.push((
        "sub2-k23".into(),
        Kind::Subdivide {
            base: Box::new(Kind::K23),
            t: 2,
        },
    ));
    for n in 5..=10 {
        kinds.push((
            format!("sub2-wheel-{n:02}"),
            Kind::Subdivide {
                base: Box::new(Kind::Wheel(n)),
                t: 2,
            },
        ));
    }
    let mut entries: Vec<CorpusEntry> = kinds
        .into_iter()
        .map(|(name, kind)| CorpusEntry {
            graph: kind.generate().expect("pinned corpus generates"),
            name,
            kind,
        })
        .collect();
    entries.sort_by(|a, b| a.name.cmp(&b.name));
    entries
}
