//! Graph inference from effective-resistance queries.
//!
//! A hidden [`graph::WeightedGraph`] is only visible to algorithms through an
//! [`oracle::ErOracle`], which answers resistance (and optionally shortest-path
//! or sorted-ball) queries and keeps a ledger of what was asked.

pub mod graph;
pub mod oracle;
pub mod property;
pub mod reconstruct;
pub mod separation;
pub mod verify;
