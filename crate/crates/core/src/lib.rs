pub mod config;
pub mod dynamics;
pub mod error;
pub mod harness;
pub mod initial;
pub mod output;
pub mod parallel;
pub mod profiles;
pub mod spectral;
pub mod symbols;
pub mod verify;
