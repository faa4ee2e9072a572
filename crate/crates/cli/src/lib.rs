//! Command-line front end: argument parsing, JSON verdicts, seeded suites and
//! corpus generation.

pub mod app;
pub mod commands;
pub mod gen;
pub mod verdict;
pub mod suites;
pub mod corpus;
