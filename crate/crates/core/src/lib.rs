pub mod formats;
pub mod graph;
pub mod levels;
pub mod mwis;
pub mod oracle;
pub mod rational;
pub mod report;
pub mod verify;
pub mod weighting;
pub mod wellgraph;
