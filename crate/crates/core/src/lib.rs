//! Plane-geometry prover: a deductive rule database combined with algebraic
//! reasoning over exact linear tables, with traceable proofs.

pub mod model;
pub mod data;
pub mod parse;
pub mod sketch;
pub mod symbols;
pub mod ar;
pub mod depgraph;
pub mod matcher;
pub mod kernel;
pub mod agents;
pub mod ggb;
pub mod output;
