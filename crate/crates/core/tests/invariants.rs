use std::f64::consts::TAU;

use balconf::balance::even_m_witness;
use balconf::canonical::slot_exponent;
use balconf::recurrence::grid_value;
use balconf::search::SearchSpec;
use balconf::{
    build_pairing, canonicalize, det2, enumerate_balanced, is_balanced, is_uniform,
    label_by_increasing_arguments, model_configuration, numeric_sequences, random_invertible,
    reconstruct_from_triple, roots_of_unity, step_constants, t_grid, verify_antisymmetry,
    CanonOptions, Configuration, LinearMap2, PlaneVector, Tol,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn omega(e: i64, m: usize) -> PlaneVector<f64> {
    let a = TAU * e as f64 / m as f64;
    PlaneVector::new(a.cos(), a.sin())
}

fn u(m: usize) -> Configuration<f64> {
    Configuration::new((0..m as i64).map(|e| omega(e, m)).collect()).unwrap()
}

fn image(g: &LinearMap2<f64>, c: &Configuration<f64>) -> Configuration<f64> {
    g.apply_all(c).unwrap()
}

fn shuffled(c: &Configuration<f64>, seed: u64) -> (Configuration<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..c.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    (c.reordered(&order), order)
}

/// Inverse of the matrix with columns `p`, `q`, written out by hand.
fn frame(p: &PlaneVector<f64>, q: &PlaneVector<f64>) -> [[f64; 2]; 2] {
    let d = p.x * q.y - q.x * p.y;
    [[q.y / d, -q.x / d], [-p.y / d, p.x / d]]
}

fn apply(g: &[[f64; 2]; 2], v: &PlaneVector<f64>) -> PlaneVector<f64> {
    PlaneVector::new(g[0][0] * v.x + g[0][1] * v.y, g[1][0] * v.x + g[1][1] * v.y)
}

const ODD_SMALL: [usize; 7] = [3, 5, 7, 9, 11, 13, 21];

#[test]
fn det_scales_by_map_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for seed in 0..200 {
        let g = random_invertible(seed, 100.0);
        let a = PlaneVector::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
        let b = PlaneVector::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
        let lhs = det2(&g.apply(&a), &g.apply(&b));
        let rhs = g.det() * det2(&a, &b);
        assert!(
            (lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()),
            "seed {seed}"
        );
    }
}

#[test]
fn labeling_is_idempotent_and_order_free() {
    for &m in &ODD_SMALL {
        let c = image(&random_invertible(m as u64, 100.0), &u(m));
        let once = label_by_increasing_arguments(&c).unwrap();
        let twice = label_by_increasing_arguments(once.config()).unwrap();
        assert_eq!(twice.vectors(), once.vectors());
        assert_eq!(twice.permutation(), (0..m).collect::<Vec<_>>());
        for seed in 0..5 {
            let (s, order) = shuffled(&c, seed);
            let relabeled = label_by_increasing_arguments(&s).unwrap();
            assert_eq!(relabeled.vectors(), once.vectors());
            for (slot, &input) in relabeled.permutation().iter().enumerate() {
                assert_eq!(c.vectors()[order[input]], once.vectors()[slot]);
            }
        }
    }
}

#[test]
fn cyclic_identities_hold_for_all_roots_of_unity() {
    for m in (3..=101).step_by(2) {
        let labeled = roots_of_unity(m as i64).unwrap();
        assert!(
            verify_antisymmetry(&labeled, Tol::Abs(1e-12)).is_ok(),
            "m = {m}"
        );
        let sc = step_constants(&labeled, Tol::Abs(1e-12)).unwrap();
        let n = (m - 1) / 2;
        assert!((sc.a1 - (TAU / m as f64).sin()).abs() < 1e-12);
        assert!((sc.an - (TAU * n as f64 / m as f64).sin()).abs() < 1e-12);
    }
}

#[test]
fn balance_survives_maps_and_permutations() {
    for &m in &[3usize, 5, 7, 9] {
        for seed in 0..100 {
            let g = random_invertible(seed, 100.0);
            let c = image(&g, &u(m));
            assert!(
                is_balanced(&c, Tol::default()).balanced,
                "m {m} seed {seed}"
            );
            assert!(is_uniform(&c, Tol::default()).uniform);
            let (s, _) = shuffled(&c, seed);
            assert!(is_balanced(&s, Tol::default()).balanced);
        }
    }
}

#[test]
fn pairing_matches_antisymmetry() {
    for m in (3..=31).step_by(2) {
        let n = (m - 1) / 2;
        let labeled = roots_of_unity(m as i64).unwrap();
        let map = build_pairing(&labeled, Tol::Abs(1e-12)).unwrap();
        assert!(map.verify().is_ok());
        assert_eq!(map.phi(0, 1), Some(n + 1), "m = {m}");
        for k in 0..m as i64 {
            for a in 1..=n as i64 {
                let lo = (k - a).rem_euclid(m as i64) as usize;
                let hi = (k + a).rem_euclid(m as i64) as usize;
                assert_eq!(map.phi(lo, hi), Some(k as usize), "m {m} k {k} a {a}");
            }
        }
    }
}

#[test]
fn canonical_form_round_trip() {
    let opts = CanonOptions::default();
    for &m in &ODD_SMALL {
        for seed in 0..20 {
            let c = image(&random_invertible(seed, 100.0), &u(m));
            let (c, _) = shuffled(&c, seed);
            let form = canonicalize(&c, &opts).unwrap();
            assert!(form.residual <= 1e-8);
            for (i, v) in c.vectors().iter().enumerate() {
                let target = omega(form.exponent_of_input(i) as i64, m);
                assert!(form.g.apply(v).distance(&target) <= 1e-8);
            }
            let mut seen = form.exponents.clone();
            seen.sort();
            assert_eq!(seen, (0..m).collect::<Vec<_>>());
        }
    }
}

#[test]
fn canonical_parameter_ignores_the_frame() {
    let opts = CanonOptions::default();
    for &m in &ODD_SMALL {
        let base = image(&random_invertible(1000 + m as u64, 100.0), &u(m));
        let reference = canonicalize(&base, &opts).unwrap();
        for seed in 0..10 {
            let moved = image(&random_invertible(seed, 100.0), &base);
            let form = canonicalize(&moved, &opts).unwrap();
            assert!((form.t - reference.t).abs() <= 1e-9);
            assert_eq!(form.k, reference.k);
        }
    }
}

#[test]
fn reconstruction_reproduces_labeled_images() {
    for m in (3..=21).step_by(2) {
        let n = (m - 1) / 2;
        for seed in 0..10 {
            let c = image(&random_invertible(seed, 100.0), &u(m));
            let labeled = label_by_increasing_arguments(&c).unwrap();
            let v = labeled.vectors();
            let rebuilt = reconstruct_from_triple(&v[0], &v[n], &v[n + 1], m, 1e-12).unwrap();
            for (a, b) in rebuilt.vectors().iter().zip(v) {
                assert!(a.distance(b) <= 1e-9, "m {m} seed {seed}");
            }
        }
    }
}

#[test]
fn model_sequences_follow_the_root_diagram() {
    for m in (3..=21).step_by(2) {
        let n = (m - 1) / 2;
        for k in 1..=n {
            let gk = frame(&omega(0, m), &omega(k as i64, m));
            let seq = numeric_sequences(&grid_value(m, k), n);
            for i in 0..n {
                let expect = apply(&gk, &omega(-(k as i64) * (1 + 2 * i as i64), m));
                assert!(seq.ws[i].distance(&expect) <= 1e-9, "m {m} k {k} i {i}");
                let expect_u = apply(&gk, &omega(-2 * (k * i) as i64, m));
                assert!(seq.us[i].distance(&expect_u) <= 1e-9);
            }
            let model = model_configuration(m, k).unwrap();
            for (slot, v) in model.vectors().iter().enumerate() {
                let expect = apply(&gk, &omega(slot_exponent(slot, m, k) as i64, m));
                assert!(v.distance(&expect) <= 1e-9);
            }
        }
    }
}

#[test]
fn closure_grid_is_separated() {
    for m in (3..=101).step_by(2) {
        let grid = t_grid(m).unwrap();
        assert_eq!(grid.values.len(), (m - 1) / 2);
        assert!(grid.values.iter().all(|t| t.abs() < 2.0));
        assert!(grid.values.windows(2).all(|w| w[1] - w[0] > 1e-6));
    }
}

#[test]
fn even_sizes_always_contain_a_zero() {
    let coords = ["-1", "0", "1"]
        .map(|s| balconf::geom::parse_rational(s).unwrap())
        .to_vec();
    for m in [2usize, 4, 6] {
        let mut spec = SearchSpec::new(m, coords.clone());
        spec.dedupe = true;
        let hits = enumerate_balanced(&spec).unwrap();
        assert!(!hits.is_empty(), "m = {m}");
        for c in &hits {
            assert!(even_m_witness(c, Tol::Abs(0.0)).is_ok());
            assert!(!is_uniform(c, Tol::Abs(0.0)).uniform);
        }
    }
}

#[test]
fn uniform_grid_hits_canonicalize() {
    let coords = ["-1", "0", "1"]
        .map(|s| balconf::geom::parse_rational(s).unwrap())
        .to_vec();
    let mut spec = SearchSpec::new(3, coords);
    spec.require_uniform = true;
    spec.dedupe = true;
    let hits = enumerate_balanced(&spec).unwrap();
    assert!(!hits.is_empty());
    for c in &hits {
        let form = canonicalize(c, &CanonOptions::default()).unwrap();
        assert!(form.residual <= 1e-8);
        assert_eq!(form.k, 1);
    }
}
