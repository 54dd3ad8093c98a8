//! 2-distance coloring toolkit for embedded planar graphs.
//!
//! - [`graph`]: rotation-system graphs, faces, girth, text formats
//! - [`coloring`]: square graphs, exact and greedy 2-distance coloring,
//!   bound verification
//! - [`classify`]: degree-sum classification (light/heavy/expendable)
//!   and forbidden-configuration detectors
//! - [`recolor`]: constructive extension of partial colorings
//! - [`discharge`]: exact-rational charge redistribution under two rule
//!   sets
//! - [`generate`]: graph generators and the pinned corpus
//! - [`harness`]: batch runs and report rendering

pub mod classify;
pub mod coloring;
pub mod discharge;
pub mod generate;
pub mod graph;
pub mod harness;
pub mod recolor;
