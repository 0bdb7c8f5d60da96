//! Deciding identities between rational functions: exact expansion and a
//! Schwartz-Zippel screen over the prime field.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use num_traits::Zero;

use super::field::{Field, Fp, Rational, MODULUS};
use super::ratfunc::RationalFunction;
use super::symbol::Symbol;
use crate::error::{Error, Result};

/// True iff `num_l * den_r - num_r * den_l` expands to zero.
pub fn rf_equal_exact(lhs: &RationalFunction<Rational>, rhs: &RationalFunction<Rational>) -> bool {
    lhs.equals(rhs)
}

/// Outcome of a randomized identity test.
#[derive(Debug, Clone)]
pub struct RandomizedVerdict {
    pub equal: bool,
    /// A sample point at which the two sides differ.
    pub witness: Option<Vec<(Symbol, Fp)>>,
    /// Number of agreeing samples accumulated.
    pub samples: usize,
    /// Degree bound used for the one-sided error estimate.
    pub degree_bound: u32,
}

impl RandomizedVerdict {
    /// Upper bound on the probability that `equal` is a false positive.
    pub fn error_bound(&self) -> f64 {
        (self.degree_bound as f64 / MODULUS as f64).powi(self.samples as i32)
    }
}

/// Uniform element of the prime field.
pub fn random_fp<R: Rng>(rng: &mut R) -> Fp {
    Fp::new(rng.gen_range(0..MODULUS))
}

/// Randomized identity test: evaluates both sides at `trials` random points
/// of the prime field. Samples where a denominator vanishes are redrawn.
pub fn rf_equal_randomized(
    lhs: &RationalFunction<Rational>,
    rhs: &RationalFunction<Rational>,
    trials: usize,
    seed: u64,
) -> Result<RandomizedVerdict> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let l = lhs.to_field::<Fp>()?;
    let r = rhs.to_field::<Fp>()?;
    let degree_bound = lhs.num().total_degree()
        + rhs.den().total_degree()
        + rhs.num().total_degree()
        + lhs.den().total_degree();
    let mut syms = lhs.symbols();
    syms.extend(rhs.symbols());
    syms.sort();
    syms.dedup();
    let width = syms.iter().map(|s| s.index() + 1).max().unwrap_or(0);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = vec![Fp::zero(); width];
    let mut samples = 0;
    let mut misses = 0;
    while samples < trials {
        for s in &syms {
            values[s.index()] = random_fp(&mut rng);
        }
        let (ln, ld) = (l.num().eval(&values), l.den().eval(&values));
        let (rn, rd) = (r.num().eval(&values), r.den().eval(&values));
        if ld.is_zero() || rd.is_zero() {
            misses += 1;
            if misses >= 100 * trials {
                return Err(Error::SampleExhaustion(misses));
            }
            continue;
        }
        misses = 0;
        if ln.mul(&rd) != rn.mul(&ld) {
            let witness = syms.iter().map(|s| (*s, values[s.index()])).collect();
            return Ok(RandomizedVerdict {
                equal: false,
                witness: Some(witness),
                samples,
                degree_bound,
            });
        }
        samples += 1;
    }
    Ok(RandomizedVerdict {
        equal: true,
        witness: None,
        samples,
        degree_bound,
    })
}

/// Looks for a small rational point where `lhs` and `rhs` differ and both
/// denominators are nonzero. Used to attach witnesses to exact failures.
pub fn rational_witness(
    lhs: &RationalFunction<Rational>,
    rhs: &RationalFunction<Rational>,
    seed: u64,
) -> Option<Vec<(Symbol, Rational)>> {
    let diff = lhs.cross_difference(rhs);
    if diff.is_zero() {
        return None;
    }
    let mut syms = lhs.symbols();
    syms.extend(rhs.symbols());
    syms.sort();
    syms.dedup();
    let width = syms.iter().map(|s| s.index() + 1).max().unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = vec![<Rational as Zero>::zero(); width];
    for attempt in 0..10_000u32 {
        let range = 3 + (attempt / 50) as i64;
        for s in &syms {
            values[s.index()] = <Rational as Field>::from_i64(rng.gen_range(-range..=range));
        }
        if Zero::is_zero(&lhs.den().eval(&values)) || Zero::is_zero(&rhs.den().eval(&values)) {
            continue;
        }
        if !Zero::is_zero(&diff.eval(&values)) {
            return Some(syms.iter().map(|s| (*s, values[s.index()].clone())).collect());
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratfunc::RatFn;

    #[test]
    fn identical_expressions_agree() {
        let p = RatFn::var(Symbol::X).add(&RatFn::var(Symbol::A));
        for seed in 0..5 {
            let v = rf_equal_randomized(&p, &p.clone(), 20, seed).unwrap();
            assert!(v.equal);
            assert!(v.error_bound() < 1e-300);
        }
    }

    #[test]
    fn distinct_expressions_give_witness() {
        let x = RatFn::var(Symbol::X);
        let x1 = x.add(&RatFn::one());
        let v = rf_equal_randomized(&x, &x1, 1, 7).unwrap();
        assert!(!v.equal);
        let w = v.witness.unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].0, Symbol::X);
        assert!(rational_witness(&x, &x1, 0).is_some());
    }

    #[test]
    fn zero_trials_rejected() {
        let x = RatFn::var(Symbol::X);
        assert!(rf_equal_randomized(&x, &x, 0, 0).is_err());
    }
}
