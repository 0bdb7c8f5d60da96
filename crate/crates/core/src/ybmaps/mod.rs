//! Parametric Yang-Baxter maps, reflection maps and their checkers.

pub mod checks;
pub mod engine;
pub mod family;
pub mod reflection;

pub use checks::{
    check_chain_identity, check_involutive_reflection, check_pi_symmetry, check_reflection,
    check_reflection_minus, check_reversibility, check_rf_identity, check_yang_baxter,
    reflection_identity, site_symbols, symmetry_conjugate, ChainIdentity, CheckOptions,
    CheckReport, Method, Status, Witness,
};
pub use engine::{apply_chain, apply_yb, Boundary, Factor, NumericDomain, Site, SymbolicDomain};
pub use family::{builtin_family, family_kernel, FamilyId, YangBaxterMap};
pub use reflection::{ReflectionMap, Sigma, SymmetryMap};
