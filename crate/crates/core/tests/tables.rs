//! The shipped table files against the built-in objects.

use reflectomap::algebra::{RatFn, Symbol};
use reflectomap::expr::load_map_spec;
use reflectomap::folding::{derive_h, load_rows_from_dir, table1_specs, table2_rows, table3_rows, Phi};
use reflectomap::ybmaps::{builtin_family, FamilyId, Sigma};

const DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../tables");

#[test]
fn table1_files_reproduce_builtin_maps() {
    let specs = table1_specs();
    assert_eq!(specs.len(), 5);
    for spec in specs {
        let family = spec.family.expect("table 1 files name their family");
        let m = spec.to_yang_baxter().unwrap();
        let b = builtin_family(family).unwrap();
        assert!(m.f.equals(&b.f), "{family} f");
        assert!(m.g.equals(&b.g), "{family} g");
    }
}

#[test]
fn table2_f3_file_fields() {
    let spec = load_map_spec(format!("{DIR}/table2_f3.map")).unwrap();
    assert_eq!(spec.field("h").unwrap().text(), "-a*X/mu");
    assert_eq!(spec.field("sigma").unwrap().text(), "mu^2/a");
    let (a, x, mu) = (RatFn::var(Symbol::A), RatFn::var(Symbol::X), RatFn::var(Symbol::MU));
    let r = spec.to_reflection().unwrap();
    assert!(r.h.equals(&a.mul(&x).div(&mu).unwrap().neg()));
    assert!(matches!(r.sigma, Sigma::Mobius(ref s) if s.equals(&mu.mul(&mu).div(&a).unwrap())));
}

#[test]
fn stored_h_is_the_folded_phi() {
    for f in FamilyId::BUILTIN {
        let map = builtin_family(f).unwrap();
        for row in table2_rows(f) {
            let h = derive_h(&map, &row.sigma, &row.phi).unwrap();
            assert!(h.equals(&row.h), "{}: derived {h}, stored {}", row.label, row.h);
        }
    }
}

#[test]
fn degenerate_rows_have_free_sigma() {
    let rows: Vec<_> = FamilyId::BUILTIN.iter().flat_map(|&f| table3_rows(f)).collect();
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|r| r.sigma.is_free()));
    assert_eq!(rows.iter().filter(|r| matches!(r.phi, Phi::Infinity)).count(), 5);
}

#[test]
fn directory_matches_embedded_rows() {
    let from_dir = load_rows_from_dir(DIR).unwrap();
    let embedded: Vec<_> = FamilyId::BUILTIN
        .iter()
        .flat_map(|&f| table2_rows(f).into_iter().chain(table3_rows(f)))
        .collect();
    assert_eq!(from_dir.len(), embedded.len());
    for row in &embedded {
        assert!(
            from_dir.iter().any(|d| d.label == row.label && d.h.equals(&row.h)),
            "{} missing from directory",
            row.label
        );
    }
}
