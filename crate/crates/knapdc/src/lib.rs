//! File formats, Monte Carlo campaigns, table generation and the command
//! line front end for `knapdc-core`.

pub mod io;
pub mod simulator;
pub mod tables;
