//! Shared inputs for the benchmarks.

use reflectomap::algebra::{RatFn, Symbol};
use reflectomap::folding::table2_rows;
use reflectomap::ybmaps::{FamilyId, ReflectionMap};

/// The first stored non-degenerate row of `family` with `mu` fixed.
pub fn table2_map(family: FamilyId, mu: i64) -> ReflectionMap {
    table2_rows(family)[0]
        .reflection_map()
        .and_then(|r| r.specialize(&[(Symbol::MU, RatFn::from_i64(mu))]))
        .expect("stored rows are valid")
}
