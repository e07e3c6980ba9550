//! Novikov-graded series: closed-form term lists, λ-families, and their
//! materialization into ring coordinates or fixed-point values.

pub mod coeff;
pub mod family;
pub mod multideg;
pub mod terms;

pub use coeff::{
    combine, compare_series, divisor_op_apply, fixed_point_restrict_series, materialize_table, ClassValues,
    CoeffSeries, Truncation,
};
pub use family::LambdaFamily;
pub use multideg::MultiDeg;
pub use terms::{AbTerm, SeriesKind, TConvention, TermSeries};
