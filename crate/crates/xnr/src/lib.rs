//! File formats and the command-line front end for `xnr-core`.

pub mod cli;
pub mod dimacs;
pub mod model_io;
