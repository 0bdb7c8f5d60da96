//! Numeric search for Möbius folding data on a `mu` slice.
//!
//! Floating point only proposes candidates. Every returned solution is
//! rebuilt with exact rational coefficients and re-verified exactly.

use levenberg_marquardt::{LeastSquaresProblem, LevenbergMarquardt};
use nalgebra::{DMatrix, DVector, Dyn, Owned};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::field::rational_to_f64;
use crate::algebra::{rational, Polynomial, Rational, Symbol};
use crate::error::{Error, Result};
use crate::ybmaps::{builtin_family, check_reflection, CheckOptions, CheckReport, FamilyId, YangBaxterMap};

use super::solution::{check_constraints, FoldingSolution, MobiusAnsatz};

/// Residual sample points per constraint.
pub const GRID_POINTS: usize = 8;
/// Coefficients of `phi` (8), `h` (8) and `sigma` (3). Each Möbius
/// coefficient `alpha` is stored as `alpha_0 + alpha_1 a`.
const PARAMS: usize = 19;
const C2: usize = 17;
const RESIDUALS: usize = GRID_POINTS * 8;
/// Evaluation budget per fit, in units of `(free parameters + 1)`.
const PATIENCE: usize = 20;
/// Objective below which a fit counts as converged.
const CONVERGED: f64 = 1e-20;
/// Probability that a coefficient may be nonzero in a random start.
const SUPPORT_DENSITY: f64 = 0.7;
/// Randomized reflection trials run before the exact check.
const SCREEN_TRIALS: usize = 20;

/// A polynomial in `(X, Y, a, b)` evaluated with every argument given
/// homogeneously.
#[derive(Clone, Debug)]
struct HomPoly {
    terms: Vec<(f64, [u16; 4])>,
}

type Pt = (f64, f64);

impl HomPoly {
    fn new(p: &Polynomial<Rational>) -> Self {
        let syms = [Symbol::X, Symbol::Y, Symbol::A, Symbol::B];
        HomPoly {
            terms: p
                .terms()
                .iter()
                .map(|(m, c)| (rational_to_f64(c), syms.map(|s| m.exponent(s))))
                .collect(),
        }
    }

    fn eval(&self, args: [Pt; 4], deg: [u16; 4]) -> f64 {
        self.terms
            .iter()
            .map(|(c, e)| {
                let mut v = *c;
                for k in 0..4 {
                    v *= args[k].0.powi(e[k] as i32) * args[k].1.powi((deg[k] - e[k]) as i32);
                }
                v
            })
            .sum()
    }
}

#[derive(Clone, Debug)]
struct Model {
    num: HomPoly,
    den: HomPoly,
    deg: [u16; 4],
    grid: Vec<(f64, f64)>,
    /// Per grid point, constant weights for the folding residuals and the
    /// involution residuals that roughly equalize their magnitudes.
    weights: Vec<[f64; 2]>,
    mu: f64,
}

impl Model {
    fn new(map: &YangBaxterMap, grid: Vec<(f64, f64)>, mu: f64) -> Self {
        let (n, d) = (map.g.num(), map.g.den());
        let deg = [Symbol::X, Symbol::Y, Symbol::A, Symbol::B].map(|s| n.degree_in(s).max(d.degree_in(s)) as u16);
        let weights = grid
            .iter()
            .map(|&(x, a)| {
                let (x, a) = (1.0 + x.abs(), 1.0 + a.abs());
                let fold = x.powi((deg[0] + deg[1] + 1) as i32) * a.powi((deg[1] + deg[2] + deg[3] + 1) as i32);
                [1.0 / fold, 1.0 / (a * a * a)]
            })
            .collect();
        Model {
            num: HomPoly::new(n),
            den: HomPoly::new(d),
            deg,
            grid,
            weights,
            mu,
        }
    }

    /// Fills in `c2` from the slice condition.
    fn complete(&self, mut t: [f64; PARAMS]) -> [f64; PARAMS] {
        t[C2] = t[18] * self.mu * self.mu - 2.0 * t[16] * self.mu;
        t
    }

    /// `g_{ab}(x, y)` as a projective point.
    fn g(&self, x: Pt, y: Pt, a: Pt, b: Pt) -> Pt {
        let args = [x, y, a, b];
        (self.num.eval(args, self.deg), self.den.eval(args, self.deg))
    }

    fn residuals(&self, t: &[f64; PARAMS], out: &mut [f64]) {
        let (c1, c3) = (t[16], t[18]);
        // sigma(mu) = mu, solved for c2
        let c2 = c3 * self.mu * self.mu - 2.0 * c1 * self.mu;
        let mut k = 0;
        let mut push = |v: f64| {
            out[k] = v;
            k += 1;
        };
        for (&(x, a), &w) in self.grid.iter().zip(&self.weights) {
            let at = |base: usize| -> [f64; 4] { std::array::from_fn(|j| t[base + 2 * j] + t[base + 2 * j + 1] * a) };
            let (xp, ap) = ((x, 1.0), (a, 1.0));
            let s = (c1 * a + c2, c3 * a - c1);
            let (p, q) = (at(0), at(8));
            let phi = (p[0] * x + p[1], p[2] * x + p[3]);
            let h = (q[0] * x + q[1], q[2] * x + q[3]);

            // h_a(x) = g_{a sigma(a)}(x, phi_a(x)) and its dual
            let (gn, gd) = self.g(xp, phi, ap, s);
            push(w[0] * (h.0 * gd - h.1 * gn));
            let (gn, gd) = self.g(xp, h, ap, s);
            push(w[0] * (phi.0 * gd - phi.1 * gn));

            // M_{sigma(a)} M_a is scalar; M_{sigma(a)} is scaled by the
            // denominator of sigma(a)
            for (base, m) in [(0, p), (8, q)] {
                let ms: [f64; 4] = std::array::from_fn(|j| t[base + 2 * j] * s.1 + t[base + 2 * j + 1] * s.0);
                let n11 = ms[0] * m[0] + ms[1] * m[2];
                let n12 = ms[0] * m[1] + ms[1] * m[3];
                let n21 = ms[2] * m[0] + ms[3] * m[2];
                let n22 = ms[2] * m[1] + ms[3] * m[3];
                push(w[1] * n12);
                push(w[1] * n21);
                push(w[1] * (n11 - n22));
            }
        }
    }
}

/// A random start: the coefficients allowed to be nonzero, the pinned
/// coefficient of each map, and initial values.
#[derive(Clone, Debug)]
struct Start {
    free: Vec<usize>,
    full: [f64; PARAMS],
}

impl Start {
    /// Each coefficient is active with probability [`SUPPORT_DENSITY`]; one
    /// active coefficient per map is pinned to 1. `c2` always follows from
    /// the slice.
    fn sample(rng: &mut ChaCha8Rng) -> Self {
        let mut full = [0.0; PARAMS];
        let mut free = Vec::new();
        for block in [&[0, 1, 2, 3, 4, 5, 6, 7][..], &[8, 9, 10, 11, 12, 13, 14, 15], &[16, 18]] {
            let mut active: Vec<usize> = block.iter().copied().filter(|_| rng.gen_bool(SUPPORT_DENSITY)).collect();
            if active.is_empty() {
                active.push(block[rng.gen_range(0..block.len())]);
            }
            let pin = active[rng.gen_range(0..active.len())];
            for i in active {
                if i == pin {
                    full[i] = 1.0;
                } else {
                    full[i] = rng.gen_range(-3.0..3.0);
                    free.push(i);
                }
            }
        }
        Start { free, full }
    }
}

struct Fit<'a> {
    model: &'a Model,
    free: Vec<usize>,
    full: [f64; PARAMS],
}

impl Fit<'_> {
    fn eval(&self, full: &[f64; PARAMS]) -> DVector<f64> {
        let mut r = DVector::zeros(RESIDUALS);
        self.model.residuals(full, r.as_mut_slice());
        r
    }
}

impl LeastSquaresProblem<f64, Dyn, Dyn> for Fit<'_> {
    type ResidualStorage = Owned<f64, Dyn>;
    type JacobianStorage = Owned<f64, Dyn, Dyn>;
    type ParameterStorage = Owned<f64, Dyn>;

    fn set_params(&mut self, x: &DVector<f64>) {
        for (k, &i) in self.free.iter().enumerate() {
            self.full[i] = x[k];
        }
    }

    fn params(&self) -> DVector<f64> {
        DVector::from_iterator(self.free.len(), self.free.iter().map(|&i| self.full[i]))
    }

    fn residuals(&self) -> Option<DVector<f64>> {
        let r = self.eval(&self.full);
        r.iter().all(|v| v.is_finite()).then_some(r)
    }

    fn jacobian(&self) -> Option<DMatrix<f64>> {
        let base = self.eval(&self.full);
        let mut jac = DMatrix::zeros(RESIDUALS, self.free.len());
        let mut moved = self.full;
        let mut col = DVector::zeros(RESIDUALS);
        for (k, &i) in self.free.iter().enumerate() {
            let step = 1e-7 * self.full[i].abs().max(1.0);
            moved[i] += step;
            self.model.residuals(&moved, col.as_mut_slice());
            moved[i] = self.full[i];
            for r in 0..RESIDUALS {
                jac[(r, k)] = (col[r] - base[r]) / step;
            }
        }
        jac.iter().all(|v| v.is_finite()).then_some(jac)
    }
}

/// Simplest fraction within `tol` of `x` by continued-fraction convergents.
pub fn rational_approximation(x: f64, tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let ai = a as i128;
        (h0, h1) = (h1, ai * h1 + h0);
        (k0, k1) = (k1, ai * k1 + k0);
        if k1.abs() > 1 << 40 {
            return None;
        }
        if (x - h1 as f64 / k1 as f64).abs() <= tol {
            return Some(rational(h1 as i64, k1 as i64));
        }
        let frac = r - a;
        if frac == 0.0 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}

/// Rescales each map so its largest coefficient is 1.
fn normalize(t: &mut [f64; PARAMS]) {
    for range in [0..8, 8..16, 16..PARAMS] {
        let big = t[range.clone()]
            .iter()
            .copied()
            .fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
        if big != 0.0 {
            for v in &mut t[range] {
                *v /= big;
            }
        }
    }
}

fn reconstruct(t: &[f64; PARAMS], tol: f64) -> Option<MobiusAnsatz> {
    let q: Vec<Rational> = t
        .iter()
        .map(|&v| rational_approximation(v, tol))
        .collect::<Option<_>>()?;
    let pair = |i: usize| (q[i].clone(), q[i + 1].clone());
    Some(MobiusAnsatz {
        p: [pair(0), pair(2), pair(4), pair(6)],
        q: [pair(8), pair(10), pair(12), pair(14)],
        c: Some([q[16].clone(), q[17].clone(), q[18].clone()]),
    })
}

/// Exact verdict on a reconstructed candidate.
enum Verdict {
    Solution(FoldingSolution),
    Rejected(FoldingSolution, Vec<CheckReport>),
    Invalid,
}

fn canonical(family: FamilyId, ans: &MobiusAnsatz, label: &str) -> Option<FoldingSolution> {
    if !ans.is_nondegenerate() {
        return None;
    }
    ans.to_solution(family, label).ok()
}

/// Constraints exactly, then the reflection equation. A failed randomized
/// trial already certifies that the reflection identity does not hold, so
/// only candidates that survive it pay for the exact check.
fn verify(map: &YangBaxterMap, sol: FoldingSolution, seed: u64) -> Verdict {
    let cons = check_constraints(map, &sol);
    if !cons.passed() {
        return Verdict::Invalid;
    }
    let Ok(refl) = sol.reflection_map() else {
        return Verdict::Invalid;
    };
    let screen = check_reflection(map, &refl, &CheckOptions::randomized(SCREEN_TRIALS, seed));
    if !screen.passed() {
        return Verdict::Rejected(sol, vec![cons, screen]);
    }
    let re = check_reflection(map, &refl, &CheckOptions::exact());
    if re.passed() {
        Verdict::Solution(sol)
    } else {
        Verdict::Rejected(sol, vec![cons, re])
    }
}

/// A candidate whose constraints hold exactly but which is not a
/// reflection map.
#[derive(Clone, Debug)]
pub struct Rejected {
    pub solution: FoldingSolution,
    pub reports: Vec<CheckReport>,
}

#[derive(Clone, Debug)]
pub struct Discovery {
    pub family: FamilyId,
    pub mu: Rational,
    pub seed: u64,
    pub restarts: usize,
    /// Restarts whose fit converged to a small residual.
    pub converged: usize,
    pub solutions: Vec<FoldingSolution>,
    pub rejected: Vec<Rejected>,
}

impl Discovery {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "family": self.family,
            "mu": crate::algebra::field::rational_to_string(&self.mu),
            "restarts": self.restarts,
            "converged": self.converged,
            "solutions": self.solutions.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
            "rejected": self.rejected.iter().map(|r| r.solution.to_json()).collect::<Vec<_>>(),
        })
    }
}

fn same(a: &FoldingSolution, b: &FoldingSolution) -> bool {
    use super::derive::Phi;
    let sig = match (&a.sigma, &b.sigma) {
        (crate::ybmaps::Sigma::Mobius(x), crate::ybmaps::Sigma::Mobius(y)) => x.equals(y),
        _ => false,
    };
    let phi = match (&a.phi, &b.phi) {
        (Phi::Map(x), Phi::Map(y)) => x.equals(y),
        _ => false,
    };
    sig && phi && a.h.equals(&b.h)
}

fn sample_grid(rng: &mut ChaCha8Rng, mu: f64) -> Vec<(f64, f64)> {
    let small = |rng: &mut ChaCha8Rng| loop {
        let v = rng.gen_range(-40i32..=40) as f64 / rng.gen_range(1i32..=4) as f64;
        if v != 0.0 && v != 1.0 && v != mu && v.abs() <= 10.0 {
            return v;
        }
    };
    (0..GRID_POINTS).map(|_| (small(rng), small(rng))).collect()
}

/// One damped least-squares fit from a random sparse start.
fn fit(model: &Model, rng: &mut ChaCha8Rng) -> Option<[f64; PARAMS]> {
    let Start { free, full } = Start::sample(rng);
    if free.is_empty() {
        return None;
    }
    let (done, report) = LevenbergMarquardt::new()
        .with_patience(PATIENCE)
        .minimize(Fit { model, free, full });
    (report.objective_function < CONVERGED).then(|| model.complete(done.full))
}

/// Runs `budget` restarts of the numeric search on the slice
/// `sigma(mu) = mu` and returns the exactly verified solutions,
/// deduplicated.
pub fn discover(family: FamilyId, mu: &Rational, seed: u64, budget: usize) -> Result<Discovery> {
    let map = builtin_family(family)?;
    if *mu == rational(0, 1) {
        return Err(Error::InvalidArgument("mu must be nonzero".into()));
    }
    let mu_f = rational_to_f64(mu);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let model = Model::new(&map, sample_grid(&mut rng, mu_f), mu_f);

    let fits: Vec<Option<[f64; PARAMS]>> = (0..budget)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64 + 1);
            fit(&model, &mut rng)
        })
        .collect();

    let mut out = Discovery {
        family,
        mu: mu.clone(),
        seed,
        restarts: budget,
        converged: 0,
        solutions: Vec::new(),
        rejected: Vec::new(),
    };
    let mut tried: Vec<Vec<Rational>> = Vec::new();
    for (r, t) in fits.into_iter().enumerate() {
        let Some(mut t) = t else { continue };
        out.converged += 1;
        normalize(&mut t);
        for tol in [1e-6, 1e-10] {
            let Some(ans) = reconstruct(&t, tol) else { continue };
            let key = ans.key();
            if tried.contains(&key) {
                break;
            }
            tried.push(key);
            let Some(sol) = canonical(family, &ans, &format!("{family} restart {r}")) else { continue };
            if out.solutions.iter().any(|o| same(o, &sol))
                || out.rejected.iter().any(|o| same(&o.solution, &sol))
            {
                break;
            }
            match verify(&map, sol, seed ^ r as u64) {
                Verdict::Solution(s) => {
                    out.solutions.push(s);
                    break;
                }
                Verdict::Rejected(s, reports) => {
                    out.rejected.push(Rejected { solution: s, reports });
                    break;
                }
                Verdict::Invalid => {}
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn continued_fractions() {
        assert_eq!(rational_approximation(0.75, 1e-6), Some(rational(3, 4)));
        assert_eq!(rational_approximation(-2.0, 1e-6), Some(rational(-2, 1)));
        assert_eq!(rational_approximation(1.0 / 3.0 + 1e-9, 1e-6), Some(rational(1, 3)));
        assert_eq!(rational_approximation(f64::NAN, 1e-6), None);
        let pi = rational_approximation(std::f64::consts::PI, 1e-6).unwrap();
        assert_eq!(pi, rational(355, 113));
    }

    #[test]
    fn table_point_has_zero_residual() {
        // phi = a X / 2, h = -a X / 2, sigma = 4 / a
        let map = builtin_family(FamilyId::F3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let model = Model::new(&map, sample_grid(&mut rng, 2.0), 2.0);
        let mut t = [0.0; PARAMS];
        t[1] = 1.0;
        t[6] = 2.0;
        t[9] = -1.0;
        t[14] = 2.0;
        t[18] = 1.0;
        let t = model.complete(t);
        assert_eq!(t[C2], 4.0);
        let mut r = [0.0; RESIDUALS];
        model.residuals(&t, &mut r);
        assert!(r.iter().all(|r| r.abs() < 1e-9));
        let mut t = t;
        t[9] = 1.0;
        model.residuals(&t, &mut r);
        assert!(r.iter().any(|r| r.abs() > 1e-3));
    }

    #[test]
    fn starts_pin_one_coefficient_per_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let st = Start::sample(&mut rng);
            assert!(!st.free.contains(&C2));
            for block in [0..8, 8..16] {
                assert_eq!(block.filter(|&i| st.full[i] == 1.0 && !st.free.contains(&i)).count(), 1);
            }
            assert!([16, 18].iter().any(|&i| st.full[i] == 1.0 && !st.free.contains(&i)));
        }
    }

    #[test]
    fn recovers_fiii_rows() {
        let d = discover(FamilyId::F3, &rational(3, 1), 0, 2000).unwrap();
        let found: Vec<String> = d.solutions.iter().map(|s| format!("{} | {} | {}", s.sigma, s.phi, s.h)).collect();
        assert!(found.contains(&"9/a | (1/3)*X*a | -(1/3)*X*a".to_string()), "{found:?}");
        assert!(found.contains(&"9/a | -(1/3)*X*a | (1/3)*X*a".to_string()), "{found:?}");
        assert!(d.converged > 0 && d.restarts == 2000);
    }

    #[test]
    fn fv_has_no_solution() {
        let d = discover(FamilyId::F5, &rational(2, 1), 1, 500).unwrap();
        assert!(d.solutions.is_empty());
    }

    #[test]
    fn zero_mu_rejected() {
        assert!(discover(FamilyId::F3, &rational(0, 1), 0, 1).is_err());
    }
}
