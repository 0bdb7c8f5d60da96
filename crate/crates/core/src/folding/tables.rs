//! The shipped classification corpus.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{RatFn, Symbol};
use crate::error::{Error, Result};
use crate::expr::{load_map_spec, parse_map_spec, MapSpec, SpecKind};
use crate::ybmaps::{
    builtin_family, check_involutive_reflection, check_reflection, CheckOptions, CheckReport,
    FamilyId, ReflectionMap, Sigma,
};

use super::solution::{check_constraints, FoldingSolution};

macro_rules! table {
    ($($file:literal),* $(,)?) => {
        &[$(($file, include_str!(concat!("../../../../tables/", $file)))),*]
    };
}

pub const TABLE1_FILES: &[(&str, &str)] = table![
    "table1_f1.map",
    "table1_f2.map",
    "table1_f3.map",
    "table1_f4.map",
    "table1_f5.map",
];

pub const TABLE2_FILES: &[(&str, &str)] = table![
    "table2_f1_1.map",
    "table2_f1_2.map",
    "table2_f1_3.map",
    "table2_f2_1.map",
    "table2_f2_2.map",
    "table2_f3.map",
    "table2_f4.map",
];

pub const TABLE3_FILES: &[(&str, &str)] = table![
    "table3_f1_inf.map",
    "table3_f1_0.map",
    "table3_f1_1.map",
    "table3_f1_sigma.map",
    "table3_f2_inf.map",
    "table3_f2_0.map",
    "table3_f2_1.map",
    "table3_f3_inf.map",
    "table3_f3_0.map",
    "table3_f4_inf.map",
    "table3_f4_0.map",
    "table3_f5_inf.map",
];

fn parse_rows(files: &[(&str, &str)]) -> Vec<FoldingSolution> {
    files
        .iter()
        .map(|(name, text)| {
            let spec = parse_map_spec(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            FoldingSolution::from_spec(&spec).unwrap_or_else(|e| panic!("{name}: {e}"))
        })
        .collect()
}

/// Non-degenerate reflection maps of the given family, with `mu` symbolic.
pub fn table2_rows(family: FamilyId) -> Vec<FoldingSolution> {
    parse_rows(TABLE2_FILES)
        .into_iter()
        .filter(|s| s.family == family)
        .collect()
}

/// Degenerate rows of the given family; `sigma` is free.
pub fn table3_rows(family: FamilyId) -> Vec<FoldingSolution> {
    parse_rows(TABLE3_FILES)
        .into_iter()
        .filter(|s| s.family == family)
        .collect()
}

/// The five built-in Yang-Baxter maps as written in the shipped files.
pub fn table1_specs() -> Vec<MapSpec> {
    TABLE1_FILES
        .iter()
        .map(|(name, text)| parse_map_spec(text).unwrap_or_else(|e| panic!("{name}: {e}")))
        .collect()
}

/// Loads every `*.map` reflection file with a `phi` field from a directory,
/// sorted by file name.
pub fn load_rows_from_dir(dir: impl AsRef<Path>) -> Result<Vec<FoldingSolution>> {
    let dir = dir.as_ref();
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "map"))
        .collect();
    paths.sort();
    let mut out = Vec::new();
    for p in paths {
        let spec = load_map_spec(&p)?;
        if spec.kind == SpecKind::Reflection && spec.phi().is_some() {
            out.push(FoldingSolution::from_spec(&spec)?);
        }
    }
    Ok(out)
}

fn labelled(r: CheckReport, label: &str) -> CheckReport {
    let name = format!("{label}: {}", r.check_name);
    r.renamed(name)
}

/// Constraints, involutivity and the reflection equation for one solution.
pub fn verify_solution(sol: &FoldingSolution, opts: &CheckOptions) -> Vec<CheckReport> {
    let map = match builtin_family(sol.family) {
        Ok(m) => m,
        Err(e) => {
            return vec![CheckReport::new(&sol.label, crate::ybmaps::Status::Fail, opts.method)
                .with_note(e.to_string())]
        }
    };
    let mut out = vec![check_constraints(&map, sol)];
    match sol.reflection_map() {
        Ok(refl) => {
            out.push(labelled(check_involutive_reflection(&refl, opts), &sol.label));
            out.push(labelled(check_reflection(&map, &refl, opts), &sol.label));
        }
        Err(e) => out.push(
            CheckReport::new(format!("{}: reflection", sol.label), crate::ybmaps::Status::Fail, opts.method)
                .with_note(e.to_string()),
        ),
    }
    out
}

/// Every stored row of the family and its swapped variant, checked exactly.
/// Empty for F_V.
pub fn regression_table2(family: FamilyId) -> Vec<CheckReport> {
    let opts = CheckOptions::exact();
    let mut out = Vec::new();
    for row in table2_rows(family) {
        out.extend(verify_solution(&row, &opts));
        match row.swapped() {
            Ok(sw) => out.extend(verify_solution(&sw, &opts)),
            Err(e) => out.push(
                CheckReport::new(format!("{} (swapped)", row.label), crate::ybmaps::Status::Fail, opts.method)
                    .with_note(e.to_string()),
            ),
        }
    }
    out
}

/// The reflection equation for each degenerate row, exactly, with free `sigma`.
pub fn regression_table3(family: FamilyId) -> Vec<CheckReport> {
    let opts = CheckOptions::exact();
    let Ok(map) = builtin_family(family) else {
        return Vec::new();
    };
    table3_rows(family)
        .iter()
        .map(|row| match row.reflection_map() {
            Ok(refl) => labelled(check_reflection(&map, &refl, &opts), &row.label),
            Err(e) => CheckReport::new(&row.label, crate::ybmaps::Status::Fail, opts.method)
                .with_note(e.to_string()),
        })
        .collect()
}

/// A random involution `(c1 a + c2)/(c3 a - c1)` with small integer
/// coefficients and nonzero determinant.
pub fn random_involution(rng: &mut impl Rng) -> RatFn {
    loop {
        let c: [i64; 3] = [rng.gen_range(-9..=9), rng.gen_range(-9..=9), rng.gen_range(-9..=9)];
        if -c[0] * c[0] - c[1] * c[2] == 0 {
            continue;
        }
        let a = RatFn::var(Symbol::A);
        let num = RatFn::from_i64(c[0]).mul(&a).add(&RatFn::from_i64(c[1]));
        let den = RatFn::from_i64(c[2]).mul(&a).sub(&RatFn::from_i64(c[0]));
        if let Ok(s) = num.div(&den) {
            return s;
        }
    }
}

/// Substitutes a concrete involution for the free `sigma` of a degenerate row.
pub fn instantiate_sigma(row: &FoldingSolution, sigma: &RatFn) -> Result<ReflectionMap> {
    let h = row.h.substitute(&[(Symbol::SIGMA_A, sigma.clone())])?;
    Ok(ReflectionMap::new(h, Sigma::Mobius(sigma.clone()))?.named(format!("{} [sigma = {sigma}]", row.label)))
}

/// The reflection equation for each degenerate row under `count` random
/// concrete involutions, by the randomized method.
pub fn regression_table3_numeric(
    family: FamilyId,
    count: usize,
    trials: usize,
    seed: u64,
) -> Vec<CheckReport> {
    let Ok(map) = builtin_family(family) else {
        return Vec::new();
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for row in table3_rows(family) {
        for _ in 0..count {
            let sigma = random_involution(&mut rng);
            let opts = CheckOptions::randomized(trials, rng.gen());
            out.push(match instantiate_sigma(&row, &sigma) {
                Ok(refl) => labelled(check_reflection(&map, &refl, &opts), &refl.name),
                Err(e) => CheckReport::new(&row.label, crate::ybmaps::Status::Fail, opts.method)
                    .with_note(e.to_string()),
            });
        }
    }
    out
}
