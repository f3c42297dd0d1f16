//! Numerical laboratory for Patterson–Sullivan, Bowen–Margulis–Sullivan and
//! Burger–Roblin measures of Schottky subgroups of PSL₂(ℂ).

pub mod error;
pub mod hyperbolic;
pub mod schottky;
pub mod parallel;
pub mod patterson;
pub mod measures;
pub mod dynamics;
pub mod analysis;
pub mod io;
pub mod config;
pub mod experiments;
pub mod cli;
