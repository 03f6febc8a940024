//! File formats, shipped fixtures, the scenario harness and the command-line
//! front end for the `jpavnf-core` solvers.

pub mod bench;
pub mod cli;
pub mod fixtures;
pub mod io;
