//! Exact-rational discharging on embedded graphs.
//!
//! Initial charges are mu(v) = 3d(v)/2 - 5 per vertex and
//! mu(f) = len(f) - 5 per face; for a connected sphere embedding the
//! total is exactly -10 and every transfer preserves it.
//!
//! Two rule sets are provided. Set A pairs with the Delta+7 bound
//! (classification k = 7, poor window 7..=8, rules R1-R9); set B pairs
//! with the Delta+6 bound (k = 6, window 6..=9, rules R1-R13). Rules
//! run in two phases: all vertex-to-vertex and vertex-to-face rules
//! fire simultaneously against the frozen input structure, then each
//! face with positive charge splits it equally over the poor-path
//! occurrences on its boundary, keeping the charge if it has none.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;
use thiserror::Error;

use crate::classify::{classify, ClassParams, ClassificationTable};
use crate::graph::{Face, Graph, GraphError};

pub type Charge = Rational64;

fn q(n: i64, d: i64) -> Charge {
    Rational64::new(n, d)
}

pub fn fmt_charge(c: Charge) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

#[derive(Debug, Error)]
pub enum DischargeError {
    #[error("charge state is not initial")]
    NotInitial,
    #[error("classification uses k = {got}, rule set needs k = {want}")]
    WrongClassification { got: usize, want: usize },
    #[error("charge audit failed: total {0}, expected -10")]
    AuditFailed(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Entity {
    Vertex(u32),
    Face(u32),
}

impl fmt::Display for Entity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entity::Vertex(v) => write!(f, "v{v}"),
            Entity::Face(x) => write!(f, "f{x}"),
        }
    }
}

/// One ledger entry: `rule source target amount pattern`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transfer {
    pub rule: String,
    pub from: Entity,
    pub to: Entity,
    pub amount: Charge,
    pub pattern: String,
}

impl Transfer {
    pub fn render(&self) -> String {
        format!(
            "{} {} {} {} {}",
            self.rule,
            self.from,
            self.to,
            fmt_charge(self.amount),
            self.pattern
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Initial,
    AfterVertexRules,
    Final,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChargeState {
    pub vertex: Vec<Charge>,
    pub face: Vec<Charge>,
    pub phase: Phase,
}

impl ChargeState {
    pub fn total(&self) -> Charge {
        self.vertex.iter().sum::<Charge>() + self.face.iter().sum::<Charge>()
    }

    fn apply(&mut self, t: &Transfer) {
        match t.from {
            Entity::Vertex(v) => self.vertex[v as usize] -= t.amount,
            Entity::Face(f) => self.face[f as usize] -= t.amount,
        }
        match t.to {
            Entity::Vertex(v) => self.vertex[v as usize] += t.amount,
            Entity::Face(f) => self.face[f as usize] += t.amount,
        }
    }
}

/// mu(v) = 3d(v)/2 - 5 and mu(f) = len(f) - 5, with the -10 audit.
pub fn initial_charges(g: &Graph, faces: &[Face]) -> Result<ChargeState, DischargeError> {
    let vertex: Vec<Charge> = (0..g.vertex_count() as u32)
        .map(|v| q(3 * g.degree(v) as i64 - 10, 2))
        .collect();
    let face: Vec<Charge> = faces.iter().map(|f| q(f.len() as i64 - 5, 1)).collect();
    let state = ChargeState {
        vertex,
        face,
        phase: Phase::Initial,
    };
    if state.total() != q(-10, 1) {
        return Err(DischargeError::AuditFailed(fmt_charge(state.total())));
    }
    Ok(state)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleSetId {
    A,
    B,
}

impl RuleSetId {
    pub fn name(self) -> &'static str {
        match self {
            RuleSetId::A => "A",
            RuleSetId::B => "B",
        }
    }

    pub fn k(self) -> usize {
        match self {
            RuleSetId::A => 7,
            RuleSetId::B => 6,
        }
    }
}

/// A rule set: its poor-path window, its final face rule, and the
/// guarded vertex rules fired in phase 1.
pub struct RuleSet {
    pub id: RuleSetId,
    pub poor_window: (usize, usize),
    pub face_rule_id: &'static str,
    rules: Vec<VertexRule>,
}

struct VertexRule {
    id: &'static str,
    gen: fn(&Ctx) -> Vec<Transfer>,
}

struct Ctx<'a> {
    g: &'a Graph,
    table: &'a ClassificationTable,
    /// face ids containing each undirected edge, one entry per
    /// boundary-walk traversal (a bridge lists the same face twice)
    edge_faces: &'a BTreeMap<(u32, u32), Vec<u32>>,
}

impl<'a> Ctx<'a> {
    fn n(&self) -> u32 {
        self.g.vertex_count() as u32
    }

    fn deg(&self, v: u32) -> usize {
        self.g.degree(v)
    }

    fn n2(&self, v: u32) -> usize {
        self.table.rows[v as usize].n2()
    }

    fn n3(&self, v: u32) -> usize {
        self.table.rows[v as usize].n_i(3)
    }

    fn light(&self, v: u32) -> bool {
        self.table.light(v)
    }

    fn is_64(&self, v: u32) -> bool {
        self.table.is_kd(v, 6, 4)
    }

    fn give(
        &self,
        out: &mut Vec<Transfer>,
        rule: &str,
        from: u32,
        to: u32,
        amount: Charge,
        pattern: &str,
    ) {
        out.push(Transfer {
            rule: rule.to_string(),
            from: Entity::Vertex(from),
            to: Entity::Vertex(to),
            amount,
            pattern: pattern.to_string(),
        });
    }

    fn give_faces(
        &self,
        out: &mut Vec<Transfer>,
        rule: &str,
        from: u32,
        edge: (u32, u32),
        amount: Charge,
        pattern: &str,
    ) {
        let (u, v) = edge;
        let key = (u.min(v), u.max(v));
        for &f in self.edge_faces.get(&key).into_iter().flatten() {
            out.push(Transfer {
                rule: rule.to_string(),
                from: Entity::Vertex(from),
                to: Entity::Face(f),
                amount,
                pattern: pattern.to_string(),
            });
        }
    }
}

// ---- rule set A ----

fn a_r1(c: &Ctx) -> Vec<Transfer> {
    let mut out = vec![];
    for v in 0..c.n() {
        if c.deg(v) == 2 {
            for &u in c.g.neighbors(v) {
                c.give(&mut out, "R1", u, v, q(1, 1), "2-vertex receives 1 from each neighbour");
            }
        }
    }
    out
}

fn a_r2(c: &Ctx) -> Vec<Transfer> {
    let mut out = vec![];
    for v in 0..c.n() {
        if c.deg(v) == 3 && c.n2(v) == 1 {
            for &u in c.g.neighbors(v) {
                if c.deg(u) >= 6 {
                    c.give(&mut out, "R2", u, v, q(3, 4), "3(1)-vertex receives from 6+ neighbour");
                }
            }
        }
    }
    out
}

fn a_r3(c: &Ctx) -> Vec<Transfer> {
    let mut out = vec![];
    for v in 0..c.n() {
        if c.deg(v) == 3 && c.n2(v) == 0 && c.light(v) {
            for &u in c.g.neighbors(v) {
                c.give(&mut out, "R3", u, v, q(1, 6), "light 3(0)-vertex receives from each neighbour");
            }
        }
    }
    out
}

fn a_r4(c: &Ctx) -> Vec<Transfer> {
    let mut out = vec![];
    for v in 0..c.n() {
        if !(c.deg(v) == 3 && c.n2(v) == 0 && !c.light(v)) {
            continue;
        }
        let has_light3 = c.g.neighbors(v).iter().any(|&u| c.deg(u) == 3 && c.light(u));
        let has_heavy3 = c.g.neighbors(v).iter().any(|&u| c.deg(u) == 3 && !c.light(u));
        if has_light3 {
            for &u in c.g.neighbors(v) {
                if c.deg(u) >= 5 {
                    c.give(&mut out, "R4(a)", u, v, q(1, 3), "heavy 3(0) with light 3-neighbour");
                }
            }
        }
        if has_heavy3 {
            for &u in c.g.neighbors(v) {
                if c.deg(u) >= 4 {
                    c.give(&mut out, "R4(b)", u, v, q(1, 4), "heavy 3(0) with heavy 3-neighbour");
                }
            }
        }
        if c.n3(v) == 0 {
            for &u in c.g.neighbors(v) {
                c.give(&mut out, "R4(c)", u, v, q(1, 6), "heavy 3(0) with no 3-neighbour");
            }
        }
    }
    out
}

fn a_r5(c: &Ctx) -> Vec<Transfer> {
    let mut out = vec![];
    for v in 0..c.n() {
        if c.deg(v) != 4 {
            continue;
        }
        if c.n2(v) == 1 && c.n3(v) == 1 {
            for &u in c.g.neighbors(v) {
                if c.deg(u) >= 6 {
                    c.give(&mut out, "R5(a)", u, v, q(1, 6), "4(1) with one 3-neighbour, 6+ giver");
                } else if c.deg(u) == 5 {
                    c.give(&mut out, "R5(a)", u, v, q(1, 12), "4(1) with one 3-neighbour, 5-giver");
                }
            }
        }
        if c.n2(v) == 1 && c.n3(v) == 2 {
            for &u in c.g.neighbors(v) {
                if c.deg(u) >= 7 {
                    c.give(&mut out, "R5(b)", u, v, q(1, 3), "4(1) with two 3-neighbours");
                }
            }
        }
        if c.n2(v) == 2 {
            for &u in c.g.neighbors(v) {
                if c.deg(u) >= 5 {
                    c.give(&mut out, "R5(c)", u, v, q(1, 2), "4(2)-vertex receives from 5+ neighbour");
                }
            }
        }
    }
    out
}

fn a_r6(c: &Ctx) -> Vec<Transfer> {
    let mut out = vec![];
    for v in 0..c.n() {
        if !(c.deg(v) == 5 && c.n2(v) == 3) {
            continue;
        }
        for &u in c.g.neighbors(v) {
            if c.deg(u) >= 7 {
                c.give(&mut out, "R6", u, v, q(1, 2), "5(3)-vertex receives from 7+ neighbour");
            } else if c.deg(u) == 6 || (c.deg(u) == 5 && c.n2(u) == 0) {
                c.give(&mut out, "R6", u, v, q(1, 4), "5(3)-vertex receives from 5(0)/6 neighbour");
            }
        }
    }
    out
}

fn a_r7(c: &Ctx) -> Vec<Transfer> {
    let mut out = vec![];
    for v in 0..c.n() {
        if c.is_64(v) {
            for &u in c.g.neighbors(v) {
                if c.deg(u) >= 7 {
                    c.give(&mut out, "R7", u, v, q(1, 6), "6(4)-vertex receives from 7+ neighbour");
                }
            }
        }
    }
    out
}

fn a_r8(c: &Ctx) -> Vec<Transfer> {
    let mut out = vec![];
    for (u, v) in c.g.edges() {
        if c.deg(u) >= 6 && c.deg(v) >= 6 && !c.is_64(u) && !c.is_64(v) {
            c.give_faces(&mut out, "R8", u, (u, v), q(1, 8), "adjacent 6+ vertices (not 6(4)) pay faces");
            c.give_faces(&mut out, "R8", v, (u, v), q(1, 8), "adjacent 6+ vertices (not 6(4)) pay faces");
        }
    }
    out
}

// ---- rule set B ----

fn b_r1(c: &Ctx) -> Vec<Transfer> {
    a_r1(c)
}

fn b_r2(c: &Ctx) -> Vec<Transfer> {
    let mut out = vec![];
    for v in 0..c.n() {
        if c.deg(v) == 3 && c.n2(v) == 1 {
            for &u in c.g.neighbors(v) {
                let amount = match c.deg(u) {
                    5 => q(1, 2),
                    6 => q(2, 3),
                    7 | 8 => q(3, 4),
                    9 => q(5, 6),
                    _ => continue,
                };
                c.give(&mut out, "R2", u, v, amount, "3(1)-vertex receives by giver degree");
            }
        }
    }
    out
}

fn b_r3(c: &Ctx) -> Vec<Transfer> {
    let mut out = vec![];
    for v in 0..c.n() {
        if c.deg(v) == 3 && c.n2(v) == 0 && c.light(v) {
            for &u in c.g.neighbors(v) {
                if c.deg(u) <= 9 {
                    c.give(&mut out, "R3", u, v, q(1, 6), "light 3(0)-vertex receives from 9- neighbour");
                }
            }
        }
    }
    out
}

fn b_r4(c: &Ctx) -> Vec<Transfer> {
    let mut out = vec![];
    for v in 0..c.n() {
        if !(c.deg(v) == 3 && c.n2(v) == 0 && !c.light(v)) {
            continue;
        }
        let has_light3 = c.g.neighbors(v).iter().any(|&u| c.deg(u) == 3 && c.light(u));
        if has_light3 {
            for &u in c.g.neighbors(v) {
                let amount = match c.deg(u) {
                    5 => q(1, 6),
                    6..=8 => q(1, 3),
                    9 => q(1, 2),
                    _ => continue,
                };
                c.give(&mut out, "R4(a)", u, v, amount, "heavy 3(0) with a light 3-neighbour");
            }
        } else {
            for &u in c.g.neighbors(v) {
                let amount = match c.deg(u) {
                    5 => q(1, 6),
                    6 => q(1, 4),
                    7 => q(1, 3),
                    8 | 9 => q(1, 2),
                    _ => continue,
                };
                c.give(&mut out, "R4(b)", u, v, amount, "heavy 3(0) without light 3-neighbour");
            }
        }
    }
    out
}

fn b_r5(c: &Ctx) -> Vec<Transfer> {
    let mut out = vec![];
    for v in 0..c.n() {
        if c.deg(v) != 4 {
            continue;
        }
        if c.n2(v) == 1 && c.n3(v) == 1 {
            for &u in c.g.neighbors(v) {
                let amount = match c.deg(u) {
                    6 => q(1, 12),
                    7 | 8 => q(1, 6),
                    _ => continue,
                };
                c.give(&mut out, "R5(a)", u, v, amount, "4(1) with one 3-neighbour");
            }
        }
        if c.n2(v) == 2 {
            for &u in c.g.neighbors(v) {
                if (5..=8).contains(&c.deg(u)) {
                    c.give(&mut out, "R5(b)", u, v, q(1, 2), "4(2)-vertex receives from (5-8)-neighbour");
                }
            }
        }
    }
    out
}

fn b_r6(c: &Ctx) -> Vec<Transfer> {
    let mut out = vec![];
    for v in 0..c.n() {
        if c.deg(v) == 5 && c.n2(v) == 3 {
            for &u in c.g.neighbors(v) {
                if (7..=8).contains(&c.deg(u)) {
                    c.give(&mut out, "R6", u, v, q(1, 2), "5(3)-vertex receives from (7-8)-neighbour");
                }
            }
        }
    }
    out
}

fn b_r7(c: &Ctx) -> Vec<Transfer> {
    let mut out = vec![];
    for v in 0..c.n() {
        if c.deg(v) == 9 {
            for &u in c.g.neighbors(v) {
                if (4..=6).contains(&c.deg(u)) {
                    c.give(&mut out, "R7", v, u, q(1, 2), "9-vertex gives to (4-6)-neighbour");
                }
            }
        }
    }
    out
}

fn b_r8(c: &Ctx) -> Vec<Transfer> {
    // degree-2 targets already collect 1 by R1 from every neighbour;
    // paying them again would double-charge the giver
    let mut out = vec![];
    for v in 0..c.n() {
        if c.deg(v) >= 10 {
            for &u in c.g.neighbors(v) {
                if (3..=8).contains(&c.deg(u)) {
                    c.give(&mut out, "R8", v, u, q(1, 1), "10+ vertex gives to 8- neighbour");
                }
            }
        }
    }
    out
}

fn b_r9(c: &Ctx) -> Vec<Transfer> {
    let mut out = vec![];
    for v in 0..c.n() {
        if c.deg(v) != 7 {
            continue;
        }
        let strong: Vec<u32> = c
            .g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| c.deg(u) >= 7)
            .collect();
        if strong.len() >= 2 {
            for &u in &strong {
                c.give_faces(&mut out, "R9", v, (v, u), q(1, 8), "7-vertex with two 7+ neighbours pays faces");
            }
        }
    }
    out
}

fn b_r10(c: &Ctx) -> Vec<Transfer> {
    let mut out = vec![];
    for v in 0..c.n() {
        if c.deg(v) == 8 {
            for &u in c.g.neighbors(v) {
                if c.deg(u) == 8 {
                    c.give_faces(&mut out, "R10", v, (v, u), q(1, 8), "8-vertex adjacent to 8-vertex pays faces");
                }
            }
        }
    }
    out
}

fn b_r11(c: &Ctx) -> Vec<Transfer> {
    let mut out = vec![];
    for v in 0..c.n() {
        if c.deg(v) == 9 {
            for &u in c.g.neighbors(v) {
                if c.deg(u) >= 7 {
                    c.give_faces(&mut out, "R11", v, (v, u), q(1, 4), "9-vertex adjacent to 7+ vertex pays faces");
                }
            }
        }
    }
    out
}

fn b_r12(c: &Ctx) -> Vec<Transfer> {
    let mut out = vec![];
    for v in 0..c.n() {
        if c.deg(v) >= 10 {
            for &u in c.g.neighbors(v) {
                if c.deg(u) >= 9 {
                    c.give_faces(&mut out, "R12", v, (v, u), q(1, 2), "10+ vertex adjacent to 9+ vertex pays faces");
                }
            }
        }
    }
    out
}

impl RuleSet {
    pub fn a() -> Self {
        RuleSet {
            id: RuleSetId::A,
            poor_window: (7, 8),
            face_rule_id: "R9",
            rules: vec![
                VertexRule { id: "R1", gen: a_r1 },
                VertexRule { id: "R2", gen: a_r2 },
                VertexRule { id: "R3", gen: a_r3 },
                VertexRule { id: "R4", gen: a_r4 },
                VertexRule { id: "R5", gen: a_r5 },
                VertexRule { id: "R6", gen: a_r6 },
                VertexRule { id: "R7", gen: a_r7 },
                VertexRule { id: "R8", gen: a_r8 },
            ],
        }
    }

    pub fn b() -> Self {
        RuleSet {
            id: RuleSetId::B,
            poor_window: (6, 9),
            face_rule_id: "R13",
            rules: vec![
                VertexRule { id: "R1", gen: b_r1 },
                VertexRule { id: "R2", gen: b_r2 },
                VertexRule { id: "R3", gen: b_r3 },
                VertexRule { id: "R4", gen: b_r4 },
                VertexRule { id: "R5", gen: b_r5 },
                VertexRule { id: "R6", gen: b_r6 },
                VertexRule { id: "R7", gen: b_r7 },
                VertexRule { id: "R8", gen: b_r8 },
                VertexRule { id: "R9", gen: b_r9 },
                VertexRule { id: "R10", gen: b_r10 },
                VertexRule { id: "R11", gen: b_r11 },
                VertexRule { id: "R12", gen: b_r12 },
            ],
        }
    }

    pub fn for_id(id: RuleSetId) -> Self {
        match id {
            RuleSetId::A => RuleSet::a(),
            RuleSetId::B => RuleSet::b(),
        }
    }
}

/// Poor-path occurrences on the boundary walk of a face: positions
/// whose visited vertex y has degree inside the window while both walk
/// neighbours are 2-vertices. Returns (walk position, center vertex).
pub fn poor_occurrences(
    g: &Graph,
    face: &Face,
    window: (usize, usize),
) -> Vec<(usize, u32)> {
    let len = face.walk.len();
    let mut out = vec![];
    for i in 0..len {
        let (x, y) = face.walk[i];
        let z = face.walk[(i + 1) % len].1;
        if (window.0..=window.1).contains(&g.degree(y))
            && g.degree(x) == 2
            && g.degree(z) == 2
        {
            out.push((i, y));
        }
    }
    out
}

#[derive(Debug)]
pub struct DischargeOutcome {
    pub state: ChargeState,
    pub ledger: Vec<Transfer>,
    pub warnings: Vec<String>,
}

fn entity_key(e: Entity) -> (u8, u32) {
    match e {
        Entity::Vertex(v) => (0, v),
        Entity::Face(f) => (1, f),
    }
}

/// Run both phases of a rule set against an initial charge state.
///
/// Guards are evaluated against the frozen input classification; no
/// cascading. The ledger lists phase-1 transfers in rule order, sorted
/// by (source, target) within each rule, then the face-rule transfers.
pub fn apply_rules(
    g: &Graph,
    faces: &[Face],
    initial: &ChargeState,
    ruleset: &RuleSet,
    table: &ClassificationTable,
) -> Result<DischargeOutcome, DischargeError> {
    if initial.phase != Phase::Initial {
        return Err(DischargeError::NotInitial);
    }
    if table.params.k != ruleset.id.k() {
        return Err(DischargeError::WrongClassification {
            got: table.params.k,
            want: ruleset.id.k(),
        });
    }
    let mut warnings = vec![];
    let delta = table.params.delta;
    match ruleset.id {
        RuleSetId::A => {
            if !(7..=8).contains(&delta) {
                warnings.push(format!(
                    "ruleset A outside the theorem's Delta regime (Delta = {delta}, regime 7..8); executing anyway"
                ));
            }
        }
        RuleSetId::B => {
            if delta < 10 {
                warnings.push(format!(
                    "ruleset B outside the theorem's Delta regime (Delta = {delta}, regime >= 10); executing anyway"
                ));
            }
        }
    }
    let mut edge_faces: BTreeMap<(u32, u32), Vec<u32>> = BTreeMap::new();
    for (fi, face) in faces.iter().enumerate() {
        for &(a, b) in &face.walk {
            edge_faces
                .entry((a.min(b), a.max(b)))
                .or_default()
                .push(fi as u32);
        }
    }
    for v in edge_faces.values_mut() {
        v.sort_unstable();
    }
    let ctx = Ctx {
        g,
        table,
        edge_faces: &edge_faces,
    };
    let mut state = initial.clone();
    let mut ledger = vec![];
    for rule in &ruleset.rules {
        let mut transfers = (rule.gen)(&ctx);
        transfers.sort_by_key(|t| (entity_key(t.from), entity_key(t.to)));
        for t in &transfers {
            state.apply(t);
        }
        let _ = rule.id;
        ledger.extend(transfers);
    }
    state.phase = Phase::AfterVertexRules;
    debug_assert_eq!(state.total(), q(-10, 1));
    // phase 2: faces with positive charge split it over their poor
    // occurrences; faces without occurrences keep their charge
    for (fi, face) in faces.iter().enumerate() {
        let charge = state.face[fi];
        if charge <= Charge::zero() {
            continue;
        }
        let occs = poor_occurrences(g, face, ruleset.poor_window);
        if occs.is_empty() {
            continue;
        }
        let share = charge / q(occs.len() as i64, 1);
        for (pos, y) in occs {
            let t = Transfer {
                rule: ruleset.face_rule_id.to_string(),
                from: Entity::Face(fi as u32),
                to: Entity::Vertex(y),
                amount: share,
                pattern: format!("poor-path occurrence at walk position {pos}"),
            };
            state.apply(&t);
            ledger.push(t);
        }
    }
    state.phase = Phase::Final;
    if state.total() != q(-10, 1) {
        return Err(DischargeError::AuditFailed(fmt_charge(state.total())));
    }
    Ok(DischargeOutcome {
        state,
        ledger,
        warnings,
    })
}

/// Re-apply a ledger to an initial state; must reproduce the final
/// state exactly.
pub fn replay(initial: &ChargeState, ledger: &[Transfer]) -> ChargeState {
    let mut state = initial.clone();
    for t in ledger {
        state.apply(t);
    }
    state.phase = Phase::Final;
    state
}

/// Final-charge report: every entity with its initial and final charge,
/// the negative ones with their ledger lines, and the exact total.
#[derive(Debug)]
pub struct ChargeReport {
    pub ruleset: RuleSetId,
    pub delta: usize,
    pub initial: ChargeState,
    pub final_state: ChargeState,
    pub negatives: Vec<Entity>,
    pub total: Charge,
    pub warnings: Vec<String>,
    /// Rule-set B only: (4-6)-vertices that received from the same
    /// 9-vertex under both R7 and one of R2-R6 (stacked receipts).
    pub r7_stacking: Option<Vec<(u32, u32)>>,
}

pub fn final_report(
    outcome: &DischargeOutcome,
    initial: &ChargeState,
    ruleset: &RuleSet,
    table: &ClassificationTable,
) -> ChargeReport {
    let state = &outcome.state;
    let mut negatives = vec![];
    for (v, &c) in state.vertex.iter().enumerate() {
        if c < Charge::zero() {
            negatives.push(Entity::Vertex(v as u32));
        }
    }
    for (f, &c) in state.face.iter().enumerate() {
        if c < Charge::zero() {
            negatives.push(Entity::Face(f as u32));
        }
    }
    let r7_stacking = match ruleset.id {
        RuleSetId::A => None,
        RuleSetId::B => {
            let mut pairs = vec![];
            let mut by_pair: BTreeMap<(Entity, Entity), Vec<&str>> = BTreeMap::new();
            for t in &outcome.ledger {
                by_pair.entry((t.from, t.to)).or_default().push(&t.rule);
            }
            for ((from, to), rules) in by_pair {
                if let (Entity::Vertex(s), Entity::Vertex(t)) = (from, to) {
                    let has_r7 = rules.contains(&"R7");
                    let has_recv = rules
                        .iter()
                        .any(|r| matches!(*r, "R2" | "R3" | "R4(a)" | "R4(b)" | "R5(a)" | "R5(b)" | "R6"));
                    if has_r7 && has_recv {
                        pairs.push((s, t));
                    }
                }
            }
            Some(pairs)
        }
    };
    ChargeReport {
        ruleset: ruleset.id,
        delta: table.params.delta,
        initial: initial.clone(),
        final_state: state.clone(),
        negatives,
        total: state.total(),
        warnings: outcome.warnings.clone(),
        r7_stacking,
    }
}

impl ChargeReport {
    pub fn all_nonnegative(&self) -> bool {
        self.negatives.is_empty()
    }

    pub fn render_text(&self, ledger: &[Transfer]) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "discharge report (ruleset {}, Delta = {})",
            self.ruleset.name(),
            self.delta
        );
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        for (v, (&i, &f)) in self
            .initial
            .vertex
            .iter()
            .zip(self.final_state.vertex.iter())
            .enumerate()
        {
            let _ = writeln!(out, "vertex {v}: init {} final {}", fmt_charge(i), fmt_charge(f));
        }
        for (x, (&i, &f)) in self
            .initial
            .face
            .iter()
            .zip(self.final_state.face.iter())
            .enumerate()
        {
            let _ = writeln!(out, "face {x}: init {} final {}", fmt_charge(i), fmt_charge(f));
        }
        let _ = writeln!(out, "TOTAL {}", fmt_charge(self.total));
        if self.all_nonnegative() {
            let _ = writeln!(
                out,
                "verdict: all nonnegative (a critical graph with these charges cannot exist)"
            );
        } else {
            let _ = writeln!(out, "verdict: negative charges present ({})", self.negatives.len());
            for &e in &self.negatives {
                let (i, f) = match e {
                    Entity::Vertex(v) => (
                        self.initial.vertex[v as usize],
                        self.final_state.vertex[v as usize],
                    ),
                    Entity::Face(x) => (
                        self.initial.face[x as usize],
                        self.final_state.face[x as usize],
                    ),
                };
                let _ = writeln!(out, "negative {e}: init {} final {}", fmt_charge(i), fmt_charge(f));
                for t in ledger.iter().filter(|t| t.from == e || t.to == e) {
                    let _ = writeln!(out, "  {}", t.render());
                }
            }
        }
        if let Some(pairs) = &self.r7_stacking {
            if pairs.is_empty() {
                let _ = writeln!(out, "note: no target received from the same 9-vertex under both R7 and R2-R6");
            } else {
                for (s, t) in pairs {
                    let _ = writeln!(out, "note: vertex {t} stacked R7 and R2-R6 receipts from 9-vertex {s}");
                }
            }
        }
        out
    }
}

/// Ledger file: one rendered transfer per line.
pub fn render_ledger(ledger: &[Transfer]) -> String {
    let mut out = String::new();
    for t in ledger {
        out.push_str(&t.render());
        out.push('\n');
    }
    out
}

/// Full pipeline on one graph: trace faces, classify with k matching
/// the rule set (Delta override optional), run both phases.
pub fn run_discharge(
    g: &Graph,
    id: RuleSetId,
    delta_override: Option<usize>,
) -> Result<(DischargeOutcome, ChargeState, ChargeReport), DischargeError> {
    let faces = g.trace_faces()?;
    let params = match delta_override {
        Some(d) => ClassParams::new(id.k(), d),
        None => ClassParams::for_graph(g, id.k()),
    };
    let table = classify(g, params);
    let ruleset = RuleSet::for_id(id);
    let initial = initial_charges(g, &faces)?;
    let outcome = apply_rules(g, &faces, &initial, &ruleset, &table)?;
    let report = final_report(&outcome, &initial, &ruleset, &table);
    Ok((outcome, initial, report))
}
