//! Test oracles: seeded random invertible maps, seeded perturbations and
//! exhaustive enumeration of balanced configurations over a small exact grid.

use std::f64::consts::TAU;

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::balance::{is_balanced, is_uniform, Tol};
use crate::canonical::LinearMap2;
use crate::geom::{Configuration, GeomError, PlaneVector};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SearchError {
    #[error("enumeration needs {needed} candidates, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("search needs m >= 1 and a nonempty coordinate set")]
    EmptySpec,
}

/// Entries uniform in `[-1, 1]`, redrawn until the condition number is at most
/// `cond_max` and `|det| >= 1 / cond_max`. Deterministic in `seed`.
pub fn random_invertible(seed: u64, cond_max: f64) -> LinearMap2<f64> {
    assert!(cond_max > 1.0, "cond_max must exceed 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut draw = || rng.random_range(-1.0..=1.0);
        let g = LinearMap2::new(draw(), draw(), draw(), draw());
        if g.condition_number() <= cond_max && g.det().abs() >= 1.0 / cond_max {
            return g;
        }
    }
}

/// Adds to each vector an offset of length in `[eps/2, eps]` in a seeded random direction.
pub fn perturb(
    c: &Configuration<f64>,
    eps: f64,
    seed: u64,
) -> Result<Configuration<f64>, GeomError> {
    if eps <= 0.0 {
        return Ok(c.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vectors = c
        .vectors()
        .iter()
        .map(|v| {
            let theta = rng.random_range(0.0..TAU);
            let r = rng.random_range(eps / 2.0..=eps);
            PlaneVector::new(v.x + r * theta.cos(), v.y + r * theta.sin())
        })
        .collect();
    Configuration::new(vectors)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchSpec {
    pub m: usize,
    pub coordinates: Vec<BigRational>,
    pub require_uniform: bool,
    /// Enumerate sets only (increasing index tuples) instead of every ordering.
    pub dedupe: bool,
    pub budget: u64,
}

impl SearchSpec {
    pub fn new(m: usize, coordinates: Vec<BigRational>) -> Self {
        Self {
            m,
            coordinates,
            require_uniform: false,
            dedupe: false,
            budget: DEFAULT_BUDGET,
        }
    }

    /// `|coordinates|^(2m)`, saturating.
    pub fn candidate_bound(&self) -> u128 {
        let base = self.coordinates.len() as u128;
        (0..2 * self.m).fold(1u128, |acc, _| acc.saturating_mul(base))
    }

    /// Nonzero grid vectors in lexicographic order of `(x, y)`.
    pub fn grid_vectors(&self) -> Vec<PlaneVector<BigRational>> {
        let mut coords = self.coordinates.clone();
        coords.sort();
        coords.dedup();
        let mut out = Vec::new();
        for x in &coords {
            for y in &coords {
                if !(x.is_zero() && y.is_zero()) {
                    out.push(PlaneVector::new(x.clone(), y.clone()));
                }
            }
        }
        out
    }
}

/// Advances `idx` to the next tuple in lexicographic order; false when exhausted.
/// With `nondecreasing`, only tuples with `idx[0] <= idx[1] <= …` are visited.
fn next_tuple(idx: &mut [usize], base: usize, nondecreasing: bool) -> bool {
    for pos in (0..idx.len()).rev() {
        if idx[pos] + 1 < base {
            idx[pos] += 1;
            let fill = if nondecreasing { idx[pos] } else { 0 };
            for later in &mut idx[pos + 1..] {
                *later = fill;
            }
            return true;
        }
    }
    false
}

fn has_repeat(first: usize, rest: &[usize]) -> bool {
    rest.iter()
        .enumerate()
        .any(|(p, &i)| i == first || rest[..p].contains(&i))
}

/// Every balanced configuration of pairwise distinct grid vectors, in
/// lexicographic order of index tuples.
pub fn enumerate_balanced(
    spec: &SearchSpec,
) -> Result<Vec<Configuration<BigRational>>, SearchError> {
    if spec.m == 0 || spec.coordinates.is_empty() {
        return Err(SearchError::EmptySpec);
    }
    let needed = spec.candidate_bound();
    if needed > spec.budget as u128 {
        return Err(SearchError::BudgetExceeded {
            needed,
            budget: spec.budget,
        });
    }
    let grid = spec.grid_vectors();
    let base = grid.len();
    if base == 0 {
        return Ok(Vec::new());
    }
    let m = spec.m;

    let per_first: Vec<Vec<Configuration<BigRational>>> = (0..base)
        .into_par_iter()
        .map(|first| {
            let mut hits = Vec::new();
            let mut rest = vec![if spec.dedupe { first } else { 0 }; m - 1];
            loop {
                if has_repeat(first, &rest) {
                    if rest.is_empty() || !next_tuple(&mut rest, base, spec.dedupe) {
                        break;
                    }
                    continue;
                }
                let vectors: Vec<_> = std::iter::once(first)
                    .chain(rest.iter().copied())
                    .map(|i| grid[i].clone())
                    .collect();
                let c = Configuration::new(vectors).expect("grid vectors are nonzero");
                if is_balanced(&c, Tol::Abs(0.0)).balanced
                    && (!spec.require_uniform || is_uniform(&c, Tol::Abs(0.0)).uniform)
                {
                    hits.push(c);
                }
                if rest.is_empty() || !next_tuple(&mut rest, base, spec.dedupe) {
                    break;
                }
            }
            hits
        })
        .collect();
    Ok(per_first.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balance::even_m_witness;
    use crate::geom::{parse_rational, roots_of_unity};

    fn coords(s: &[&str]) -> Vec<BigRational> {
        s.iter().map(|c| parse_rational(c).unwrap()).collect()
    }

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn random_invertible_is_deterministic() {
        let a = random_invertible(1, 100.0);
        assert_eq!(a, random_invertible(1, 100.0));
        assert_ne!(a, random_invertible(2, 100.0));
        for seed in 0..200 {
            let g = random_invertible(seed, 100.0);
            assert!(g.det() != 0.0);
            assert!(g.condition_number() <= 100.0);
            assert!(g.det().abs() >= 0.01);
        }
    }

    #[test]
    fn perturb_examples() {
        let u5 = roots_of_unity(5).unwrap().config().clone();
        assert_eq!(perturb(&u5, 0.0, 3).unwrap(), u5);
        let tiny = perturb(&u5, 1e-15, 3).unwrap();
        assert!(is_balanced(&tiny, Tol::Abs(1e-9)).balanced);
        for seed in 0..100 {
            let p = perturb(&u5, 0.05, seed).unwrap();
            assert!(!is_balanced(&p, Tol::Abs(1e-9)).balanced, "seed {seed}");
            for (a, b) in p.vectors().iter().zip(u5.vectors()) {
                assert!(a.distance(b) <= 0.05 + 1e-15);
            }
        }
        assert_eq!(
            perturb(&u5, 0.05, 7).unwrap(),
            perturb(&u5, 0.05, 7).unwrap()
        );
    }

    #[test]
    fn next_tuple_orders() {
        let mut idx = vec![0, 0];
        let mut seen = vec![idx.clone()];
        while next_tuple(&mut idx, 3, true) {
            seen.push(idx.clone());
        }
        assert_eq!(
            seen,
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![0, 2],
                vec![1, 1],
                vec![1, 2],
                vec![2, 2]
            ]
        );
        let mut idx = vec![0, 0];
        let mut count = 1;
        while next_tuple(&mut idx, 3, false) {
            count += 1;
        }
        assert_eq!(count, 9);
    }

    #[test]
    fn square_found_and_nothing_uniform() {
        let spec = SearchSpec::new(4, coords(&["-1", "0", "1"]));
        let hits = enumerate_balanced(&spec).unwrap();
        let square = [("1", "0"), ("0", "1"), ("-1", "0"), ("0", "-1")]
            .map(|(x, y)| PlaneVector::new(q(x), q(y)));
        assert!(hits.iter().any(|c| c.vectors() == square));
        for c in &hits {
            assert!(!is_uniform(c, Tol::Abs(0.0)).uniform);
            assert!(even_m_witness(c, Tol::Abs(0.0)).is_ok());
        }
    }

    #[test]
    fn uniform_triangles() {
        let mut spec = SearchSpec::new(3, coords(&["-1", "0", "1"]));
        spec.require_uniform = true;
        let hits = enumerate_balanced(&spec).unwrap();
        let tri = [("1", "0"), ("0", "1"), ("-1", "-1")].map(|(x, y)| PlaneVector::new(q(x), q(y)));
        assert!(hits.iter().any(|c| c.vectors() == tri));
        assert!(hits.iter().all(|c| is_uniform(c, Tol::Abs(0.0)).uniform));

        spec.dedupe = true;
        let deduped = enumerate_balanced(&spec).unwrap();
        assert_eq!(deduped.len() * 6, hits.len());
    }

    #[test]
    fn repeats_detected() {
        assert!(has_repeat(1, &[0, 1]));
        assert!(has_repeat(0, &[2, 2]));
        assert!(!has_repeat(0, &[1, 2]));
        assert!(!has_repeat(0, &[]));
    }

    #[test]
    fn constant_grid_is_empty() {
        let spec = SearchSpec::new(3, coords(&["1"]));
        assert!(enumerate_balanced(&spec).unwrap().is_empty());
    }

    #[test]
    fn budget_enforced() {
        let mut spec = SearchSpec::new(6, coords(&["-2", "-1", "0", "1", "2"]));
        spec.budget = 1000;
        assert!(matches!(
            enumerate_balanced(&spec),
            Err(SearchError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn deterministic_order() {
        let spec = SearchSpec::new(4, coords(&["-1", "0", "1"]));
        assert_eq!(
            enumerate_balanced(&spec).unwrap(),
            enumerate_balanced(&spec).unwrap()
        );
    }
}
