//! Independent reference computations and structural checks.

pub mod checks;
pub mod cone;
pub mod pieri;
pub mod toric;

pub use checks::{
    check_divisor_equation, check_pole_locations, check_recursion, check_weyl_invariance, compare_tables,
    extract_recursion_table, RecursionTable,
};
pub use cone::check_cone_point;
pub use pieri::{qde_small_j, quantum_pieri_sigma1, QuantumPieri};
pub use toric::toric_i_hirzebruch;
