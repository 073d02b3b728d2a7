//! Aggregating value-based argumentation frameworks.
//!
//! Agents share a set of arguments, an attack relation and a labelling of
//! arguments by values. Each agent ranks the values (an *audience*), which
//! blocks every attack on an argument whose value the agent prefers to the
//! attacker's; what remains is that agent's defeat graph. This crate
//! aggregates such views in three ways:
//!
//! - [`prefagg`]: combine the audiences and induce one collective defeat graph;
//! - [`graphagg`]: combine the defeat graphs directly;
//! - [`combined`]: recover one justifying audience per submitted graph, then
//!   aggregate those.
//!
//! [`justification`] solves the inverse problem (which audiences produce an
//! observed graph), [`axioms`] checks social-choice axioms exhaustively on
//! small domains, and [`doc`] / [`cli`] provide the JSON and DOT front end.

pub mod axioms;
pub mod cli;
pub mod combined;
pub mod doc;
pub mod error;
pub mod graphagg;
pub mod justification;
pub mod prefagg;
pub mod vaf;

pub use error::{Error, Result};
pub use vaf::{
    defeats, induce_defeat_graph, rank, ArgumentId, AttackGraph, Audience, Edge, SymbolTable, Vaf,
    ValueId,
};
