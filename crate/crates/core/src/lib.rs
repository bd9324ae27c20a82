pub mod cli;
pub mod diagramlimits;
pub mod exactlin;
pub mod functorcalc;
pub mod pointedsets;
pub mod polyfunctors;
