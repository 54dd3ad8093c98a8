//! Constructive extension of partial 2-distance colorings.
//!
//! `extend_one` colors one uncolored light vertex v at budget
//! Delta + k: it decolors the light vertices near v together with the
//! flexible 2-vertices in the affected horizon, colors v, then recolors
//! the decolored vertices in three passes (light non-expendable,
//! expendable, flexible 2-vertices), smallest available color first.
//! When v is light the target step always succeeds; a blocked pass is
//! surfaced as an error and leaves the input untouched.
//!
//! `extend_all_light` completes a coloring whose uncolored vertices are
//! all light by running `extend_one` over three groups in order: plain
//! light vertices, then the remaining expendable vertices, then the
//! 2-vertices with a (k-1)-- neighbour.

use std::fmt;

use thiserror::Error;

use crate::classify::{classify, ClassParams, ClassificationTable};
use crate::coloring::{self, ColoringResult, Outcome, PartialColoring};
use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RecolorError {
    #[error("target vertex {0} is already colored")]
    TargetColored(u32),
    #[error("vertex {0} does not satisfy D(v) < Delta + k + e(v)")]
    NotLight(u32),
    #[error("uncolored heavy vertex {0}; extension requires all uncolored vertices light")]
    HeavyUncolored(u32),
    #[error("coloring budget {got} does not match Delta + k = {expected}")]
    BudgetMismatch { expected: usize, got: usize },
    #[error("input coloring is not a valid partial 2-distance coloring: {0}")]
    InvalidInput(String),
    #[error("no available color for vertex {vertex} in stage {stage}")]
    Blocked { stage: Stage, vertex: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Decolor,
    Target,
    /// Light, non-expendable vertices near the target.
    LightRecolor,
    /// Expendable vertices near the target.
    ExpendableRecolor,
    /// 2-vertices with a (k-1)-- neighbour; these always have a spare
    /// color.
    FlexibleRecolor,
    /// Initial coloring of heavy vertices by the driver.
    Heavy,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Decolor => "decolor",
            Stage::Target => "target",
            Stage::LightRecolor => "light",
            Stage::ExpendableRecolor => "expendable",
            Stage::FlexibleRecolor => "flexible2",
            Stage::Heavy => "heavy",
        };
        f.write_str(s)
    }
}

/// One audit record: `(stage, vertex, old_color|none, new_color|none)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageRecord {
    pub stage: Stage,
    pub vertex: u32,
    pub old: Option<u32>,
    pub new: Option<u32>,
}

impl fmt::Display for StageRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_c = |c: Option<u32>| c.map_or("none".to_string(), |x| x.to_string());
        write!(
            f,
            "({}, {}, {}, {})",
            self.stage,
            self.vertex,
            fmt_c(self.old),
            fmt_c(self.new)
        )
    }
}

/// Apply a stage log to a coloring; used to audit and replay runs.
pub fn replay_log(pc: &PartialColoring, log: &[StageRecord]) -> PartialColoring {
    let mut out = pc.clone();
    for r in log {
        match r.new {
            Some(c) => {
                out.set(r.vertex, c).expect("log colors within budget");
            }
            None => {
                out.clear(r.vertex);
            }
        }
    }
    out
}

/// The vertex sets driving one extension step.
#[derive(Debug, Clone)]
pub struct ExtensionPlan {
    pub target: u32,
    /// Expendable vertices at distance <= 2 from the target; its length
    /// equals e(target).
    pub expendable_near: Vec<u32>,
    /// Light vertices at distance <= 2 from the target.
    pub light_near: Vec<u32>,
    /// Flexible 2-vertices (degree 2 with a (k-1)-- neighbour) in the
    /// horizon reached by the recoloring.
    pub flexible_two: Vec<u32>,
}

fn is_flexible_two(g: &Graph, k: usize, v: u32) -> bool {
    g.degree(v) == 2 && g.neighbors(v).iter().any(|&u| g.degree(u) < k)
}

impl ExtensionPlan {
    /// The ordered recoloring passes: light non-expendable vertices,
    /// then the expendable ones, then the flexible 2-vertices not
    /// already covered. Members are sorted by vertex id.
    pub fn stages(&self) -> [(Stage, Vec<u32>); 3] {
        let light_only: Vec<u32> = self
            .light_near
            .iter()
            .copied()
            .filter(|u| !self.expendable_near.contains(u))
            .collect();
        let flexible_only: Vec<u32> = self
            .flexible_two
            .iter()
            .copied()
            .filter(|u| {
                !self.expendable_near.contains(u) && !self.light_near.contains(u)
            })
            .collect();
        [
            (Stage::LightRecolor, light_only),
            (Stage::ExpendableRecolor, self.expendable_near.clone()),
            (Stage::FlexibleRecolor, flexible_only),
        ]
    }
}

/// Compute the decolor/recolor sets for extending at `v`.
pub fn plan_extension(g: &Graph, table: &ClassificationTable, v: u32) -> ExtensionPlan {
    let k = table.params.k;
    let ball = g.ball2(v);
    let light_near: Vec<u32> = ball.iter().copied().filter(|&u| table.light(u)).collect();
    let expendable_near: Vec<u32> = ball
        .iter()
        .copied()
        .filter(|&u| table.expendable(u))
        .collect();
    // horizon: the target's 2-ball plus the 2-balls of everything that
    // will be recolored
    let mut horizon = ball.clone();
    for &s in &light_near {
        horizon.extend(g.ball2(s));
        horizon.push(s);
    }
    horizon.push(v);
    horizon.sort_unstable();
    horizon.dedup();
    let flexible_two: Vec<u32> = horizon
        .into_iter()
        .filter(|&u| u != v && is_flexible_two(g, k, u))
        .collect();
    debug_assert_eq!(
        expendable_near.len(),
        table.rows[v as usize].expendable_near
    );
    debug_assert!(flexible_two
        .iter()
        .filter(|u| ball.binary_search(u).is_ok())
        .all(|u| expendable_near.contains(u)));
    ExtensionPlan {
        target: v,
        expendable_near,
        light_near,
        flexible_two,
    }
}

/// Smallest color in 1..=ell not used by any colored vertex within
/// distance 2 of `v`.
fn smallest_available(g: &Graph, pc: &PartialColoring, v: u32) -> Option<u32> {
    let mut used: Vec<u32> = g
        .ball2(v)
        .iter()
        .filter_map(|&u| pc.get(u))
        .collect();
    used.sort_unstable();
    used.dedup();
    let mut c = 1u32;
    for f in used {
        if f == c {
            c += 1;
        } else if f > c {
            break;
        }
    }
    (c as usize <= pc.ell()).then_some(c)
}

#[derive(Debug, Clone)]
pub struct ExtensionOutcome {
    pub coloring: PartialColoring,
    pub log: Vec<StageRecord>,
}

fn check_input(
    g: &Graph,
    table: &ClassificationTable,
    pc: &PartialColoring,
) -> Result<(), RecolorError> {
    let expected = table.params.ell();
    if pc.ell() != expected {
        return Err(RecolorError::BudgetMismatch {
            expected,
            got: pc.ell(),
        });
    }
    match coloring::validate_partial(g, pc) {
        Ok(v) if v.is_empty() => Ok(()),
        Ok(v) => Err(RecolorError::InvalidInput(format!(
            "conflicting pairs {v:?}"
        ))),
        Err(e) => Err(RecolorError::InvalidInput(e.to_string())),
    }
}

/// Extend a valid partial coloring by the light vertex `v`, keeping the
/// colored set otherwise unchanged. Transactional: on failure the
/// caller's coloring is untouched.
pub fn extend_one(
    g: &Graph,
    table: &ClassificationTable,
    pc: &PartialColoring,
    v: u32,
) -> Result<ExtensionOutcome, RecolorError> {
    check_input(g, table, pc)?;
    if pc.get(v).is_some() {
        return Err(RecolorError::TargetColored(v));
    }
    if !table.light(v) {
        return Err(RecolorError::NotLight(v));
    }
    let plan = plan_extension(g, table, v);
    let mut work = pc.clone();
    let mut log = vec![];

    let mut decolored: Vec<u32> = plan
        .light_near
        .iter()
        .chain(plan.flexible_two.iter())
        .copied()
        .filter(|&u| pc.get(u).is_some())
        .collect();
    decolored.sort_unstable();
    decolored.dedup();
    for &u in &decolored {
        let old = work.clear(u);
        log.push(StageRecord {
            stage: Stage::Decolor,
            vertex: u,
            old,
            new: None,
        });
    }

    let color_at = |work: &mut PartialColoring,
                        log: &mut Vec<StageRecord>,
                        stage: Stage,
                        u: u32|
     -> Result<(), RecolorError> {
        let c = smallest_available(g, work, u)
            .ok_or(RecolorError::Blocked { stage, vertex: u })?;
        work.set(u, c).expect("available color is in range");
        log.push(StageRecord {
            stage,
            vertex: u,
            old: None,
            new: Some(c),
        });
        Ok(())
    };

    color_at(&mut work, &mut log, Stage::Target, v)?;
    for (stage, members) in plan.stages() {
        for &u in &decolored {
            if members.contains(&u) {
                color_at(&mut work, &mut log, stage, u)?;
            }
        }
    }
    debug_assert!(coloring::validate_partial(g, &work)
        .map(|v| v.is_empty())
        .unwrap_or(false));
    Ok(ExtensionOutcome {
        coloring: work,
        log,
    })
}

/// Group labels for the completion driver; processed in declaration
/// order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Group {
    /// Light but not expendable.
    PlainLight,
    /// Expendable but not a flexible 2-vertex.
    Expendable,
    /// 2-vertex with a (k-1)-- neighbour.
    FlexibleTwo,
}

#[derive(Debug, Clone)]
pub struct DriverOutcome {
    pub coloring: PartialColoring,
    pub log: Vec<StageRecord>,
    /// Target vertices in coloring order with their group.
    pub targets: Vec<(Group, u32)>,
}

/// Complete a partial coloring all of whose uncolored vertices are
/// light. Rejected before any mutation if an uncolored vertex is heavy.
pub fn extend_all_light(
    g: &Graph,
    table: &ClassificationTable,
    pc: &PartialColoring,
) -> Result<DriverOutcome, RecolorError> {
    check_input(g, table, pc)?;
    let k = table.params.k;
    let uncolored: Vec<u32> = (0..g.vertex_count() as u32)
        .filter(|&v| pc.get(v).is_none())
        .collect();
    if let Some(&h) = uncolored.iter().find(|&&v| !table.light(v)) {
        return Err(RecolorError::HeavyUncolored(h));
    }
    let group_of = |v: u32| {
        if is_flexible_two(g, k, v) {
            Group::FlexibleTwo
        } else if table.expendable(v) {
            Group::Expendable
        } else {
            Group::PlainLight
        }
    };
    let mut work = pc.clone();
    let mut log = vec![];
    let mut targets = vec![];
    for group in [Group::PlainLight, Group::Expendable, Group::FlexibleTwo] {
        for &v in uncolored.iter().filter(|&&v| group_of(v) == group) {
            if work.get(v).is_some() {
                // extensions never color other uncolored vertices
                continue;
            }
            let out = extend_one(g, table, &work, v)?;
            work = out.coloring;
            log.extend(out.log);
            targets.push((group, v));
        }
    }
    Ok(DriverOutcome {
        coloring: work,
        log,
        targets,
    })
}

/// Color the heavy vertices first (greedy, falling back to exact search
/// within the node budget), then complete the light remainder.
///
/// An infeasible heavy subproblem is a genuine obstruction: the heavy
/// vertices alone need more than Delta + k colors.
pub fn heavy_first_driver(
    g: &Graph,
    params: ClassParams,
    budget: u64,
) -> Result<(ColoringResult, DriverOutcome), RecolorError> {
    let table = classify(g, params);
    let ell = params.ell();
    let heavy: Vec<u32> = (0..g.vertex_count() as u32)
        .filter(|&v| table.heavy(v))
        .collect();
    let index: std::collections::BTreeMap<u32, u32> = heavy
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i as u32))
        .collect();
    let adj: Vec<Vec<u32>> = heavy
        .iter()
        .map(|&v| {
            g.ball2(v)
                .iter()
                .filter_map(|u| index.get(u).copied())
                .collect()
        })
        .collect();
    let sub = coloring::color_adjacency(&adj, ell, budget);
    let heavy_colors = match sub.outcome {
        Outcome::Found => sub.coloring.expect("found coloring present"),
        _ => {
            return Ok((
                ColoringResult {
                    outcome: sub.outcome,
                    coloring: None,
                    colors_used: 0,
                },
                DriverOutcome {
                    coloring: PartialColoring::new(g.vertex_count(), ell),
                    log: vec![],
                    targets: vec![],
                },
            ))
        }
    };
    let mut pc = PartialColoring::new(g.vertex_count(), ell);
    let mut log = vec![];
    for (i, &v) in heavy.iter().enumerate() {
        let c = heavy_colors.get(i as u32).expect("total on subproblem");
        pc.set(v, c).expect("subproblem colors within budget");
        log.push(StageRecord {
            stage: Stage::Heavy,
            vertex: v,
            old: None,
            new: Some(c),
        });
    }
    let mut out = extend_all_light(g, &table, &pc)?;
    log.extend(std::mem::take(&mut out.log));
    out.log = log;
    let colors_used = out.coloring.colors_used();
    Ok((
        ColoringResult {
            outcome: Outcome::Found,
            coloring: Some(out.coloring.clone()),
            colors_used,
        },
        out,
    ))
}
