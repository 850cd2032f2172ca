//! Hidden-variable simulation of qudit magic-state computation.

pub mod cli;
pub mod exact_arith;
pub mod hvm;
pub mod pauli;
pub mod polytope;
pub mod stabilizer;
