//! Finite-scale oracles over small residue rings.

pub mod kstab;
pub mod normal;
pub mod stable;
pub mod table;

pub use kstab::{
    count_unitary, count_unitary_full_space, elementary_generators, elementary_unitary_generators, gl_order_formula,
    general_linear_generators, k1_stabilization_check, ku1_stabilization_probe,
};
pub use normal::{relative_elementary, verify_normal_generation};
pub use stable::{check_lambda_sr, check_sr, is_unimodular, lambda_matrices, LambdaSrOutcome, SrOutcome, UnimodularVector};
pub use table::{derived_subgroup, normal_closure, verify_perfect, FiniteGroupTable, DEFAULT_CAP};
