//! Verification engine for quantum differential calculi on finite groups,
//! their cyclic geometry, and the Dunkl operators and forms built from them.

pub mod calculus;
pub mod cli;
pub mod config;
pub mod corpus;
pub mod cyclic_geom;
pub mod dunkl;
pub mod error;
pub mod exact_poly;
pub mod forms_numeric;
pub mod group_core;
pub mod report;

pub use error::{Error, Result};
