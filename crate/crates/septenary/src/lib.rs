//! Simulation driver, file formats and verification suites built on
//! [`septenary_core`].

#![forbid(unsafe_code)]
#![warn(missing_docs)]

pub mod checks;
pub mod cli;
pub mod io;
pub mod parallel;
