//! Finite quantum graphs, quantum Cayley graphs on duals of finite groups,
//! Frucht-type combination constructions and rigidity checks.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod corresp;
pub mod error;
pub mod fingroup;
pub mod frucht;
pub mod io;
pub mod linalg;
pub mod qgroup;
pub mod qspace;
pub mod rigidity;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
