//! Quantum Riemann–Roch operators and the A-operator identity.

pub mod a_identity;
pub mod invseries;
pub mod qrr;

pub use a_identity::{a_operator_identity, IdentityCheck};
pub use invseries::InvSeries;
pub use qrr::{
    a_expand, bernoulli, qrr_apply, qrr_delta_exponent, s_constant, Bindings, OperatorExpansion, OperatorKind,
};
