//! Exact solvers and experiments for pursuit games on finite graphs.

pub mod graph;
pub mod pursuit;
pub mod framework;
pub mod distribution;
pub mod gambler;
pub mod random_killer;
pub mod experiments;
