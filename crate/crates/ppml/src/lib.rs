//! IO companion to `ppml-core`: JSON file formats for structures, data
//! models, unravellings and strategies, Graphviz export, and the `ppml`
//! command line.

pub mod cli;
pub mod dot;
pub mod io;

pub use ppml_core;
