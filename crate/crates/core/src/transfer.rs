//! Transfer maps on an `N`-site lattice and their commutativity.
//!
//! `T_j` is written
//! `R_{j+1 j}..R_{N j} K_j^- R_{j N}..R_{j j+1} R_{j j-1}..R_{j 1} K_j^+ R_{1 j}..R_{j-1 j}`
//! and applied right to left. Parameters are attached to sites: an `R_kl`
//! factor reads `(a_k, a_l)` and leaves them in place, a `K_j` factor
//! replaces `a_j` by `sigma(a_j)`.

use rayon::prelude::*;

use crate::algebra::{Field, ProjPoint};
use crate::error::{Error, Result};
use crate::ybmaps::engine::{apply_chain, chain_to_string};
use crate::ybmaps::{
    check_chain_identity, check_reflection, check_reflection_minus, check_reversibility,
    Boundary, ChainIdentity, CheckOptions, CheckReport, Factor, Method, NumericDomain, ReflectionMap,
    Sigma, Site, Status, YangBaxterMap,
};

/// Attached to every transfer report.
pub const THREADING_NOTE: &str =
    "parameters are site-attached; K_j maps (X_j, a_j) to (h_{a_j}(X_j), sigma(a_j))";

/// `N >= 2` sites, each a projective point with its parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeState<F: Field> {
    pub sites: Vec<Site<ProjPoint<F>, F>>,
}

impl<F: Field> LatticeState<F> {
    pub fn new(sites: Vec<(ProjPoint<F>, F)>) -> Result<Self> {
        if sites.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "a lattice needs at least 2 sites, got {}",
                sites.len()
            )));
        }
        Ok(LatticeState {
            sites: sites.into_iter().map(|(x, param)| Site { x, param }).collect(),
        })
    }

    pub fn finite(sites: Vec<(F, F)>) -> Result<Self> {
        Self::new(sites.into_iter().map(|(x, p)| (ProjPoint::finite(x), p)).collect())
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }
}

/// The factor sequence of `T_j` (one-based `j`) in application order.
pub fn transfer_chain(j: usize, n: usize) -> Result<Vec<Factor>> {
    if n < 2 || j == 0 || j > n {
        return Err(Error::InvalidArgument(format!(
            "transfer map T_{j} needs 1 <= j <= N and N >= 2 (N = {n})"
        )));
    }
    let j = j - 1;
    let mut chain = Vec::with_capacity(2 * n);
    chain.extend((0..j).rev().map(|k| Factor::R(k, j)));
    chain.push(Factor::K(j, Boundary::Plus));
    chain.extend((0..j).map(|k| Factor::R(j, k)));
    chain.extend((j + 1..n).map(|k| Factor::R(j, k)));
    chain.push(Factor::K(j, Boundary::Minus));
    chain.extend((j + 1..n).rev().map(|k| Factor::R(k, j)));
    Ok(chain)
}

#[derive(Clone, Debug)]
pub struct TransferMap {
    /// One-based.
    pub j: usize,
    pub sites: usize,
    pub map: YangBaxterMap,
    pub k_plus: ReflectionMap,
    pub k_minus: ReflectionMap,
    chain: Vec<Factor>,
}

impl TransferMap {
    /// Factors in application order.
    pub fn factors(&self) -> &[Factor] {
        &self.chain
    }

    /// Factors in written order, e.g. `R21 K1- R12 K1+`.
    pub fn written(&self) -> String {
        let mut c = self.chain.clone();
        c.reverse();
        chain_to_string(&c)
    }
}

/// Builds `T_j`, validating every input exactly.
pub fn build_transfer(
    j: usize,
    n: usize,
    map: &YangBaxterMap,
    k_plus: &ReflectionMap,
    k_minus: &ReflectionMap,
) -> Result<TransferMap> {
    build_transfer_with(j, n, map, k_plus, k_minus, &CheckOptions::exact())
}

/// As [`build_transfer`], with the validation method chosen by `opts`.
pub fn build_transfer_with(
    j: usize,
    n: usize,
    map: &YangBaxterMap,
    k_plus: &ReflectionMap,
    k_minus: &ReflectionMap,
    opts: &CheckOptions,
) -> Result<TransferMap> {
    let chain = transfer_chain(j, n)?;
    if !check_reversibility(map, opts).passed() {
        return Err(Error::NotReversible);
    }
    for (k, side) in [(k_plus, "K+"), (k_minus, "K-")] {
        if matches!(k.sigma, Sigma::Free) {
            return Err(Error::InvalidBoundaryMap(format!("{side}: sigma must be concrete")));
        }
    }
    let plus = check_reflection(map, k_plus, opts);
    if !plus.passed() {
        return Err(Error::InvalidBoundaryMap(format!("K+ fails the left boundary equation: {plus}")));
    }
    let minus = check_reflection_minus(map, k_minus, opts);
    if !minus.passed() {
        return Err(Error::InvalidBoundaryMap(format!("K- fails the right boundary equation: {minus}")));
    }
    Ok(TransferMap {
        j,
        sites: n,
        map: map.clone(),
        k_plus: k_plus.clone(),
        k_minus: k_minus.clone(),
        chain,
    })
}

/// Evaluates `T_j` at a numeric state. Every symbol other than the slot
/// symbols must already be specialized in the maps.
pub fn apply_transfer<F: Field>(t: &TransferMap, state: &LatticeState<F>) -> Result<LatticeState<F>> {
    if state.len() != t.sites {
        return Err(Error::InvalidArgument(format!(
            "state has {} sites, transfer map expects {}",
            state.len(),
            t.sites
        )));
    }
    let d = NumericDomain::<F>::new(&t.map, Some(&t.k_plus), Some(&t.k_minus))?;
    match apply_chain(&d, &state.sites, &t.chain) {
        Ok(sites) => Ok(LatticeState { sites }),
        Err(e) => match e.error {
            Error::IndeterminatePoint(reason) => Err(Error::TransferSingular {
                factor: e.factor,
                reason: format!("{} ({reason})", t.chain[e.factor]),
            }),
            other => Err(other),
        },
    }
}

/// `T_j T_l = T_l T_j` for all `j < l`, on `trials` random prime-field
/// states per pair; for `N = 2` also as an exact identity.
pub fn check_commutativity(
    map: &YangBaxterMap,
    k_plus: &ReflectionMap,
    k_minus: &ReflectionMap,
    n: usize,
    trials: usize,
    seed: u64,
) -> CheckReport {
    let name = format!("transfer_commutativity N={n}");
    let chains: Result<Vec<Vec<Factor>>> = (1..=n).map(|j| transfer_chain(j, n)).collect();
    let chains = match chains {
        Ok(c) => c,
        Err(e) => {
            return CheckReport::new(name, Status::Fail, Method::Randomized).with_note(e.to_string())
        }
    };
    let mut ids = Vec::new();
    for j in 0..n {
        for l in j + 1..n {
            ids.push(ChainIdentity {
                name: format!("T{}T{} = T{}T{}", j + 1, l + 1, l + 1, j + 1),
                sites: n,
                lhs: [chains[l].as_slice(), &chains[j]].concat(),
                rhs: [chains[j].as_slice(), &chains[l]].concat(),
            });
        }
    }
    let mut jobs: Vec<(ChainIdentity, CheckOptions)> = ids
        .iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), CheckOptions::randomized(trials, seed.wrapping_add(i as u64))))
        .collect();
    if n == 2 {
        let mut exact = ids[0].clone();
        exact.name = format!("{} (exact)", exact.name);
        jobs.push((exact, CheckOptions::exact()));
    }
    let parts: Vec<CheckReport> = jobs
        .par_iter()
        .map(|(id, opts)| check_chain_identity(map, Some(k_plus), Some(k_minus), id, opts))
        .collect();
    let method = if n == 2 { Method::Exact } else { Method::Randomized };
    CheckReport::combine(name, method, parts).with_note(THREADING_NOTE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rational, Fp, RatFn, Rational, Symbol};
    use crate::folding::table2_rows;
    use crate::ybmaps::{builtin_family, FamilyId};

    fn table2_map(f: FamilyId, mu: i64) -> ReflectionMap {
        let row = &table2_rows(f)[0];
        row.reflection_map()
            .unwrap()
            .specialize(&[(Symbol::MU, RatFn::from_i64(mu))])
            .unwrap()
    }

    fn written(j: usize, n: usize) -> String {
        let mut c = transfer_chain(j, n).unwrap();
        c.reverse();
        chain_to_string(&c)
    }

    #[test]
    fn factor_sequences() {
        assert_eq!(written(1, 2), "R21 K1- R12 K1+");
        assert_eq!(written(2, 2), "K2- R21 K2+ R12");
        assert_eq!(written(2, 3), "R32 K2- R23 R21 K2+ R12");
        assert_eq!(written(1, 3), "R21 R31 K1- R13 R12 K1+");
        assert_eq!(written(3, 3), "K3- R32 R31 K3+ R13 R23");
        assert!(transfer_chain(0, 3).is_err());
        assert!(transfer_chain(4, 3).is_err());
        assert!(transfer_chain(1, 1).is_err());
    }

    #[test]
    fn identity_maps_leave_state_unchanged() {
        let id = YangBaxterMap::identity();
        let k = ReflectionMap::identity();
        let t = build_transfer(2, 3, &id, &k, &k).unwrap();
        let s = LatticeState::finite(vec![
            (rational(2, 1), rational(1, 1)),
            (rational(-3, 5), rational(7, 1)),
            (rational(4, 1), rational(1, 2)),
        ])
        .unwrap();
        assert_eq!(apply_transfer(&t, &s).unwrap(), s);
    }

    // f = (Y/a)(aX - bY)/(X - Y), g = (X/b)(aX - bY)/(X - Y),
    // h_a(X) = -aX/mu, sigma(a) = mu^2/a.
    fn f3(x: &Rational, y: &Rational, a: &Rational, b: &Rational) -> (Rational, Rational) {
        let p = (a * x - b * y) / (x - y);
        (y / a * &p, x / b * &p)
    }

    #[test]
    fn fiii_two_sites_by_hand() {
        let mu = rational(2, 1);
        let k = |x: &Rational, a: &Rational| (-(a * x) / &mu, &mu * &mu / a);
        let (mut x1, mut a1) = (rational(2, 1), rational(1, 1));
        let (mut x2, a2) = (rational(3, 1), rational(3, 1));
        (x1, a1) = k(&x1, &a1);
        (x1, x2) = f3(&x1, &x2, &a1, &a2);
        (x1, a1) = k(&x1, &a1);
        let (u, v) = f3(&x2, &x1, &a2, &a1);
        (x2, x1) = (u, v);
        assert_eq!((x1.clone(), x2.clone()), (rational(-13, 28), rational(-39, 56)));

        let m = builtin_family(FamilyId::F3).unwrap();
        let r = table2_map(FamilyId::F3, 2);
        let t = build_transfer(1, 2, &m, &r, &r).unwrap();
        assert_eq!(t.written(), "R21 K1- R12 K1+");
        let s = LatticeState::finite(vec![
            (rational(2, 1), rational(1, 1)),
            (rational(3, 1), rational(3, 1)),
        ])
        .unwrap();
        let out = apply_transfer(&t, &s).unwrap();
        let want = LatticeState::finite(vec![(x1, a1), (x2, a2)]).unwrap();
        assert_eq!(out, want);
    }

    #[test]
    fn parameters_return_after_two_applications() {
        let m = builtin_family(FamilyId::F4).unwrap();
        let r = table2_map(FamilyId::F4, 3);
        let s = LatticeState::finite(vec![
            (Fp::new(11), Fp::new(5)),
            (Fp::new(29), Fp::new(17)),
            (Fp::new(41), Fp::new(23)),
        ])
        .unwrap();
        for j in 1..=3 {
            let t = build_transfer(j, 3, &m, &r, &r).unwrap();
            let once = apply_transfer(&t, &s).unwrap();
            let twice = apply_transfer(&t, &once).unwrap();
            for (a, b) in twice.sites.iter().zip(&s.sites) {
                assert_eq!(a.param, b.param);
            }
        }
    }

    #[test]
    fn singular_factor_is_reported() {
        let m = builtin_family(FamilyId::F4).unwrap();
        let k = ReflectionMap::identity();
        let t = build_transfer(1, 2, &m, &k, &k).unwrap();
        let s = LatticeState::finite(vec![(Fp::new(5), Fp::new(1)), (Fp::new(5), Fp::new(2))]).unwrap();
        assert!(matches!(apply_transfer(&t, &s), Err(Error::TransferSingular { factor: 1, .. })));
        let short = LatticeState::finite(vec![(Fp::new(5), Fp::new(1)), (Fp::new(6), Fp::new(2))]).unwrap();
        let t3 = build_transfer(1, 3, &m, &k, &k).unwrap();
        assert!(apply_transfer(&t3, &short).is_err());
    }

    #[test]
    fn rejects_invalid_inputs() {
        let m = builtin_family(FamilyId::F3).unwrap();
        let bad = ReflectionMap::new(
            RatFn::from_i64(2).mul(&RatFn::var(Symbol::A)).mul(&RatFn::var(Symbol::X)),
            Sigma::Mobius(RatFn::from_i64(4).div(&RatFn::var(Symbol::A)).unwrap()),
        )
        .unwrap();
        let good = table2_map(FamilyId::F3, 2);
        assert!(matches!(build_transfer(1, 2, &m, &bad, &good), Err(Error::InvalidBoundaryMap(_))));
        assert!(matches!(build_transfer(1, 2, &m, &good, &bad), Err(Error::InvalidBoundaryMap(_))));
        let fold = YangBaxterMap::custom(RatFn::var(Symbol::X), RatFn::var(Symbol::X));
        let k = ReflectionMap::identity();
        assert!(matches!(build_transfer(1, 2, &fold, &k, &k), Err(Error::NotReversible)));
        assert!(LatticeState::<Fp>::finite(vec![(Fp::new(1), Fp::new(1))]).is_err());
    }

    #[test]
    fn commutativity_with_identity_boundaries() {
        let k = ReflectionMap::identity();
        for f in [FamilyId::F3, FamilyId::F4] {
            let m = builtin_family(f).unwrap();
            for n in 2..=3 {
                let r = check_commutativity(&m, &k, &k, n, 20, 3);
                assert!(r.passed(), "{f} N={n}: {r} {:?}", r.notes);
            }
        }
    }

    #[test]
    fn commutativity_with_table_maps() {
        let m = builtin_family(FamilyId::F3).unwrap();
        let r = table2_map(FamilyId::F3, 3);
        let rep = check_commutativity(&m, &r, &r, 3, 20, 5);
        assert!(rep.passed(), "{rep} {:?}", rep.notes);
        let sym = table2_rows(FamilyId::F3)[0].reflection_map().unwrap();
        let rep = check_commutativity(&m, &sym, &sym, 2, 20, 5);
        assert!(rep.passed(), "{rep} {:?}", rep.notes);
        assert_eq!(rep.method, Method::Exact);
    }

    #[test]
    fn non_solution_breaks_commutativity() {
        let m = builtin_family(FamilyId::F3).unwrap();
        let good = table2_map(FamilyId::F3, 2);
        let bad = ReflectionMap::new(
            RatFn::from_i64(2).mul(&RatFn::var(Symbol::A)).mul(&RatFn::var(Symbol::X)),
            good.sigma.clone(),
        )
        .unwrap();
        let rep = check_commutativity(&m, &bad, &good, 3, 100, 1);
        assert!(!rep.passed());
        assert!(rep.witness.is_some());
    }
}
