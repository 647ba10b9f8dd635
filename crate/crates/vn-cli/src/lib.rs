//! Scenario runner for the vertex nomination laboratory.

pub mod acceptance;
pub mod report;
pub mod scenario;
