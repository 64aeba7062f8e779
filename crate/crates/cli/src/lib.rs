//! Command-line front end: expression language, JSON reports and the
//! verification suite.

pub mod commands;
pub mod dsl;
pub mod report;
pub mod suite;
