pub mod bounds;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod graph;
pub mod linsys;
pub mod min_graph;
pub mod rational;
pub mod sim;
pub mod solvers;
pub mod tiered;
