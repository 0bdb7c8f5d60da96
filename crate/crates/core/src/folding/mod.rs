//! Reflection maps from Yang-Baxter maps by folding `Y = phi_a(X)`,
//! `b = sigma(a)`.

pub mod derive;
pub mod discover;
pub mod solution;
pub mod tables;

pub use discover::{discover, Discovery, Rejected};
pub use derive::{derive_h, fold_g, mobius_from_coefficients, mobius_normal_form, reduce_mobius, Phi};
pub use solution::{check_constraints, check_constraints_with, FoldingSolution, MobiusAnsatz, SingularValue};
pub use tables::{
    load_rows_from_dir, regression_table2, regression_table3, regression_table3_numeric, table1_specs, table2_rows,
    table3_rows, verify_solution,
};
