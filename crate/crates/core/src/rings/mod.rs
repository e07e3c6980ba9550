//! Cohomology rings: presentations, builders and fixed-point data.

pub mod builders;
pub mod chern;
pub mod gkm;
pub mod presentation;
pub mod spec;

pub use builders::BaseDesc;
pub use gkm::{GkmGraph, GkmVariant};
pub use presentation::Presentation;
pub use spec::{CohClass, Ring, RingSpec};
