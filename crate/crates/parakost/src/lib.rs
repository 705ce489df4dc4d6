#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod feff;
pub mod gla;
pub mod kostant;
pub mod penrose;
pub mod ratlin;
pub mod report;
pub mod sample;
pub mod suite;
