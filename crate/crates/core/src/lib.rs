//! Decide whether a connected graph has a spanning subgraph in a strongly
//! λ-extendible property with at least `λm + (1-λ)/2·(n-1) + k` edges.
//!
//! The pipeline reduces the instance with four reduction rules until it
//! either answers YES outright or finds a small vertex set `S` whose removal
//! leaves a forest of cliques, then runs an exact dynamic program over that
//! structure. Brute-force oracles in [`oracle`] cross-check every stage.

pub mod error;
pub mod graph;
pub mod oracle;
pub mod pipeline;
pub mod property;
pub mod rational;
pub mod reduction;
pub mod structured;

pub use error::{Error, Result};
pub use graph::{Digraph, Graph, GraphBuilder, GraphKind};
pub use pipeline::{apt_decide, mas_above_half, Answer, Decision, Diagnostics};
pub use property::{pt_bound, Certificate, PropertySpec, PropertyVariant, Witness};
pub use rational::Rational;
pub use reduction::{reduce, ReductionOutcome, RuleApplication};
