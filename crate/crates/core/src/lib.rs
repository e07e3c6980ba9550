//! Exact truncated I-functions of partial flag bundles and their abelian
//! quotients, with GKM localization and cone-membership checks.

pub mod algebra;
pub mod error;
pub mod ifunctions;
pub mod io;
pub mod operators;
pub mod oracles;
pub mod report;
pub mod rings;
pub mod series;

pub use error::{FmError, Result};
