//! Balanced and uniform verdicts, the pairing map φ and the cyclic
//! determinant identities satisfied by uniform balanced configurations.
//!
//! In float mode two determinants are "equal" when they differ by at most
//! the resolved tolerance. Multiset symmetry is decided by sorted matching:
//! the positive values of a row and the negated negative values are sorted
//! and compared position by position; zeros match themselves.

use thiserror::Error;

use crate::geom::{cyclic_index, det2, Configuration, LabeledConfiguration, Scalar};

/// Tolerance for float-mode comparisons. Ignored in exact mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Tol {
    /// Absolute threshold.
    Abs(f64),
    /// Multiple of the largest `|det(v_i, v_j)|` in the configuration.
    Rel(f64),
}

impl Default for Tol {
    fn default() -> Self {
        Tol::Rel(1e-9)
    }
}

impl Tol {
    pub fn resolve<T: Scalar>(&self, c: &Configuration<T>) -> f64 {
        match *self {
            Tol::Abs(t) => t,
            Tol::Rel(r) => r * c.max_abs_det(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum BalanceError {
    #[error("operation needs an odd size m = 2n + 1 >= 3, got {m}")]
    NeedsOddSize { m: usize },
    #[error("operation needs an even size, got {m}")]
    OddM { m: usize },
    #[error("not balanced: row {index} has unmatched determinant {value}")]
    NotBalanced { index: usize, value: f64 },
    #[error("not uniform: vectors {first} and {second} are linearly dependent")]
    NotUniform { first: usize, second: usize },
    #[error("ambiguous pairing at row {index}: {detail}")]
    AmbiguousPairing { index: usize, detail: String },
    #[error("det(v_k, v_(k+a)) != -det(v_k, v_(k-a)) at k={k}, a={a}")]
    Antisymmetry { k: usize, a: usize },
    #[error("step constants differ at k={k}")]
    InconsistentConstants { k: usize },
    #[error("balanced even configuration without a zero determinant in row 0")]
    MissingZero,
}

/// Where multiset symmetry first fails: row `index` has `value` without a `-value` partner.
#[derive(Clone, Debug, PartialEq)]
pub struct BalanceWitness<T> {
    pub index: usize,
    pub value: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BalanceReport<T> {
    pub balanced: bool,
    pub witness: Option<BalanceWitness<T>>,
    /// `rows[i]` lists `det(v_i, v_j)` for `j != i` in increasing `j`.
    pub rows: Vec<Vec<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniformReport {
    pub uniform: bool,
    pub witness: Option<(usize, usize)>,
}

fn row<T: Scalar>(vectors: &[crate::geom::PlaneVector<T>], i: usize) -> Vec<(usize, T)> {
    vectors
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(j, v)| (j, det2(&vectors[i], v)))
        .collect()
}

struct RowMatch {
    pairs: Vec<(usize, usize)>,
    zeros: Vec<usize>,
}

/// Matches each positive value with a negative one of equal magnitude.
/// On failure returns the first value left without a partner.
fn match_row<T: Scalar>(entries: &[(usize, T)], tol: f64) -> Result<RowMatch, T> {
    let mut zeros = Vec::new();
    let mut pos: Vec<(T, usize)> = Vec::new();
    let mut neg: Vec<(T, usize)> = Vec::new();
    for (j, d) in entries {
        if d.near_zero(tol) {
            zeros.push(*j);
        } else if d.is_positive() {
            pos.push((d.clone(), *j));
        } else {
            neg.push((-d.clone(), *j));
        }
    }
    let by_value = |a: &(T, usize), b: &(T, usize)| {
        a.0.partial_cmp(&b.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.1.cmp(&b.1))
    };
    pos.sort_by(by_value);
    neg.sort_by(by_value);

    let mut pairs = Vec::with_capacity(pos.len());
    for k in 0..pos.len().max(neg.len()) {
        match (pos.get(k), neg.get(k)) {
            (Some(p), Some(q)) if p.0.near(&q.0, tol) => pairs.push((p.1.min(q.1), p.1.max(q.1))),
            (Some(p), Some(q)) => {
                return Err(if p.0 < q.0 { p.0.clone() } else { -q.0.clone() });
            }
            (Some(p), None) => return Err(p.0.clone()),
            (None, Some(q)) => return Err(-q.0.clone()),
            (None, None) => unreachable!(),
        }
    }
    Ok(RowMatch { pairs, zeros })
}

/// Decides whether every row multiset `{det(v_i, v_j) : j != i}` is symmetric about 0.
pub fn is_balanced<T: Scalar>(c: &Configuration<T>, tol: Tol) -> BalanceReport<T> {
    let tol = tol.resolve(c);
    let vectors = c.vectors();
    let mut witness = None;
    let mut rows = Vec::with_capacity(vectors.len());
    for i in 0..vectors.len() {
        let entries = row(vectors, i);
        if witness.is_none() {
            if let Err(value) = match_row(&entries, tol) {
                witness = Some(BalanceWitness { index: i, value });
            }
        }
        rows.push(entries.into_iter().map(|(_, d)| d).collect());
    }
    BalanceReport {
        balanced: witness.is_none(),
        witness,
        rows,
    }
}

/// True when no two members are linearly dependent; the witness is the first dependent pair.
pub fn is_uniform<T: Scalar>(c: &Configuration<T>, tol: Tol) -> UniformReport {
    let tol = tol.resolve(c);
    let vectors = c.vectors();
    for i in 0..vectors.len() {
        for j in i + 1..vectors.len() {
            if det2(&vectors[i], &vectors[j]).near_zero(tol) {
                return UniformReport {
                    uniform: false,
                    witness: Some((i, j)),
                };
            }
        }
    }
    UniformReport {
        uniform: true,
        witness: None,
    }
}

/// For a balanced configuration of even size, returns `j >= 1` with `det(v_0, v_j) = 0`.
///
/// Row 0 has an odd number of entries and is symmetric, so it must contain 0.
pub fn even_m_witness<T: Scalar>(c: &Configuration<T>, tol: Tol) -> Result<usize, BalanceError> {
    let m = c.len();
    if m % 2 == 1 {
        return Err(BalanceError::OddM { m });
    }
    let report = is_balanced(c, tol);
    if let Some(w) = report.witness {
        return Err(BalanceError::NotBalanced {
            index: w.index,
            value: w.value.to_f64(),
        });
    }
    let tol = tol.resolve(c);
    let v0 = &c.vectors()[0];
    c.vectors()
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, v)| det2(v0, v).near_zero(tol))
        .map(|(j, _)| j)
        .ok_or(BalanceError::MissingZero)
}

fn require_odd(m: usize) -> Result<usize, BalanceError> {
    if m < 3 || m.is_multiple_of(2) {
        Err(BalanceError::NeedsOddSize { m })
    } else {
        Ok((m - 1) / 2)
    }
}

/// The pairing structure of a uniform balanced configuration of size `m = 2n + 1`.
///
/// Row `i` partitions the other indices into `n` pairs `{k, l}` with
/// `det(v_i, v_k) = -det(v_i, v_l)`; `phi({k, l})` is the unique row holding the pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingMap {
    m: usize,
    per_index: Vec<Vec<(usize, usize)>>,
    phi: Vec<Option<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PairingViolation {
    #[error("row {0} is not a partition of the remaining indices")]
    NotPartition(usize),
    #[error("pair ({0}, {1}) appears in more than one row")]
    Overlap(usize, usize),
    #[error("pair ({0}, {1}) is not covered")]
    Uncovered(usize, usize),
}

impl PairingMap {
    pub fn size(&self) -> usize {
        self.m
    }

    /// Pairs of row `i`, each stored as `(min, max)`, sorted.
    pub fn pairs_of(&self, i: usize) -> &[(usize, usize)] {
        &self.per_index[i]
    }

    /// `φ({k, l})`; `None` when `k == l` or out of range. Indices are not reduced mod m.
    pub fn phi(&self, k: usize, l: usize) -> Option<usize> {
        if k == l || k >= self.m || l >= self.m {
            return None;
        }
        self.phi[k * self.m + l]
    }

    /// Re-checks partition, cross-row disjointness and totality from scratch.
    pub fn verify(&self) -> Result<(), PairingViolation> {
        let m = self.m;
        let mut seen = vec![0usize; m * m];
        for (i, pairs) in self.per_index.iter().enumerate() {
            let mut covered = vec![false; m];
            covered[i] = true;
            for &(k, l) in pairs {
                if k == l || k >= m || l >= m || covered[k] || covered[l] {
                    return Err(PairingViolation::NotPartition(i));
                }
                covered[k] = true;
                covered[l] = true;
                seen[k * m + l] += 1;
            }
            if covered.iter().any(|c| !c) {
                return Err(PairingViolation::NotPartition(i));
            }
        }
        for k in 0..m {
            for l in k + 1..m {
                match seen[k * m + l] {
                    0 => return Err(PairingViolation::Uncovered(k, l)),
                    1 => {}
                    _ => return Err(PairingViolation::Overlap(k, l)),
                }
                let holder = self.phi(k, l).ok_or(PairingViolation::Uncovered(k, l))?;
                if !self.per_index[holder].contains(&(k, l)) {
                    return Err(PairingViolation::Uncovered(k, l));
                }
            }
        }
        Ok(())
    }
}

/// Builds the pairing map, checking rather than assuming that rows are disjoint.
pub fn build_pairing<T: Scalar>(
    c: &LabeledConfiguration<T>,
    tol: Tol,
) -> Result<PairingMap, BalanceError> {
    let m = c.len();
    require_odd(m)?;
    if let Some((first, second)) = is_uniform(c.config(), tol).witness {
        return Err(BalanceError::NotUniform { first, second });
    }
    let tol = tol.resolve(c.config());
    let vectors = c.vectors();
    let mut per_index = Vec::with_capacity(m);
    let mut phi = vec![None; m * m];
    for i in 0..m {
        let entries = row(vectors, i);
        let matched = match_row(&entries, tol).map_err(|value| BalanceError::NotBalanced {
            index: i,
            value: value.to_f64(),
        })?;
        let mut positives: Vec<&T> = entries
            .iter()
            .map(|(_, d)| d)
            .filter(|d| d.is_positive())
            .collect();
        positives.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        if positives.windows(2).any(|w| w[0].near(w[1], tol)) {
            return Err(BalanceError::AmbiguousPairing {
                index: i,
                detail: "two determinants in the row coincide".into(),
            });
        }
        debug_assert!(matched.zeros.is_empty());
        let mut pairs = matched.pairs;
        pairs.sort_unstable();
        for &(k, l) in &pairs {
            for slot in [k * m + l, l * m + k] {
                if let Some(prev) = phi[slot] {
                    return Err(BalanceError::AmbiguousPairing {
                        index: i,
                        detail: format!("pair ({k}, {l}) already assigned to row {prev}"),
                    });
                }
                phi[slot] = Some(i);
            }
        }
        per_index.push(pairs);
    }
    let map = PairingMap { m, per_index, phi };
    map.verify().map_err(|v| BalanceError::AmbiguousPairing {
        index: 0,
        detail: v.to_string(),
    })?;
    Ok(map)
}

/// Checks `det(v_k, v_{k+a}) = -det(v_k, v_{k-a})` for all `k` and `a = 1..=n`, indices mod m.
pub fn verify_antisymmetry<T: Scalar>(
    c: &LabeledConfiguration<T>,
    tol: Tol,
) -> Result<(), BalanceError> {
    let m = c.len();
    if m.is_multiple_of(2) {
        return Err(BalanceError::NeedsOddSize { m });
    }
    let n = (m - 1) / 2;
    let tol = tol.resolve(c.config());
    for k in 0..m as i64 {
        let vk = c.cyclic(k);
        for a in 1..=n as i64 {
            let fwd = det2(vk, c.cyclic(k + a));
            let back = det2(vk, c.cyclic(k - a));
            if !(fwd + back).near_zero(tol) {
                return Err(BalanceError::Antisymmetry {
                    k: k as usize,
                    a: a as usize,
                });
            }
        }
    }
    Ok(())
}

/// `A1 = det(v_0, v_1)` and `An = det(v_0, v_n)`, shared by every cyclic shift.
#[derive(Clone, Debug, PartialEq)]
pub struct StepConstants<T> {
    pub a1: T,
    pub an: T,
}

pub fn step_constants<T: Scalar>(
    c: &LabeledConfiguration<T>,
    tol: Tol,
) -> Result<StepConstants<T>, BalanceError> {
    let m = c.len();
    let n = require_odd(m)? as i64;
    if let Some((first, second)) = is_uniform(c.config(), tol).witness {
        return Err(BalanceError::NotUniform { first, second });
    }
    let tol = tol.resolve(c.config());
    let a1 = det2(c.cyclic(0), c.cyclic(1));
    let an = det2(c.cyclic(0), c.cyclic(n));
    for k in 0..m as i64 {
        let step = det2(c.cyclic(k), c.cyclic(k + 1));
        let far = det2(c.cyclic(k), c.cyclic(k + n));
        if !step.near(&a1, tol) || !far.near(&an, tol) {
            return Err(BalanceError::InconsistentConstants {
                k: cyclic_index(k, m),
            });
        }
    }
    Ok(StepConstants { a1, an })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{label_by_increasing_arguments, parse_rational, roots_of_unity, PlaneVector};
    use num_rational::BigRational;

    fn fcfg(pts: &[(f64, f64)]) -> Configuration<f64> {
        Configuration::new(pts.iter().map(|&(x, y)| PlaneVector::new(x, y)).collect()).unwrap()
    }

    fn qcfg(pts: &[(&str, &str)]) -> Configuration<BigRational> {
        Configuration::new(
            pts.iter()
                .map(|(x, y)| {
                    PlaneVector::new(parse_rational(x).unwrap(), parse_rational(y).unwrap())
                })
                .collect(),
        )
        .unwrap()
    }

    fn square() -> Configuration<BigRational> {
        qcfg(&[("1", "0"), ("0", "1"), ("-1", "0"), ("0", "-1")])
    }

    /// Straight from the definition: for every x in a row, #x == #(-x).
    fn balanced_by_counting(c: &Configuration<BigRational>) -> bool {
        let v = c.vectors();
        (0..v.len()).all(|i| {
            let vals: Vec<BigRational> = (0..v.len())
                .filter(|&j| j != i)
                .map(|j| det2(&v[i], &v[j]))
                .collect();
            vals.iter().all(|x| {
                vals.iter().filter(|y| *y == x).count()
                    == vals.iter().filter(|y| **y == -x.clone()).count()
            })
        })
    }

    #[test]
    fn balanced_examples() {
        let u5 = roots_of_unity(5).unwrap();
        assert!(is_balanced(u5.config(), Tol::default()).balanced);

        let tri = qcfg(&[("1", "0"), ("0", "1"), ("1", "1")]);
        let report = is_balanced(&tri, Tol::default());
        assert!(!report.balanced);
        let w = report.witness.unwrap();
        assert_eq!(w.index, 0);
        assert_eq!(w.value, parse_rational("1").unwrap());
        assert!(!balanced_by_counting(&tri));

        let sq = square();
        let report = is_balanced(&sq, Tol::default());
        assert!(report.balanced);
        assert!(report.witness.is_none());
        let mut row0 = report.rows[0].clone();
        row0.sort();
        let expect: Vec<BigRational> = [-1, 0, 1].map(BigRational::from_i64).to_vec();
        assert_eq!(row0, expect);
        assert!(balanced_by_counting(&sq));
    }

    #[test]
    fn float_clustering_tolerates_noise() {
        let u7 = roots_of_unity(7).unwrap();
        let noisy: Vec<(f64, f64)> = u7
            .vectors()
            .iter()
            .enumerate()
            .map(|(i, v)| (v.x + 1e-13 * i as f64, v.y))
            .collect();
        let c = fcfg(&noisy);
        assert!(is_balanced(&c, Tol::default()).balanced);
        assert!(!is_balanced(&c, Tol::Abs(1e-16)).balanced);
    }

    #[test]
    fn uniform_examples() {
        let u5 = roots_of_unity(5).unwrap();
        assert_eq!(
            is_uniform(u5.config(), Tol::default()),
            UniformReport {
                uniform: true,
                witness: None
            }
        );
        assert_eq!(is_uniform(&square(), Tol::default()).witness, Some((0, 2)));
        let par = fcfg(&[(1.0, 0.0), (2.0, 0.0)]);
        assert_eq!(is_uniform(&par, Tol::default()).witness, Some((0, 1)));
    }

    #[test]
    fn even_witness_examples() {
        assert_eq!(even_m_witness(&square(), Tol::default()), Ok(2));
        let pair = fcfg(&[(0.3, 0.7), (-0.3, -0.7)]);
        assert_eq!(even_m_witness(&pair, Tol::default()), Ok(1));
        let u5 = roots_of_unity(5).unwrap();
        assert_eq!(
            even_m_witness(u5.config(), Tol::default()),
            Err(BalanceError::OddM { m: 5 })
        );
        let skew = qcfg(&[("1", "0"), ("0", "1"), ("1", "1"), ("2", "3")]);
        assert!(matches!(
            even_m_witness(&skew, Tol::default()),
            Err(BalanceError::NotBalanced { .. })
        ));
    }

    #[test]
    fn pairing_examples() {
        let u5 = roots_of_unity(5).unwrap();
        let map = build_pairing(&u5, Tol::default()).unwrap();
        assert_eq!(map.phi(0, 1), Some(3));
        map.verify().unwrap();

        let u3 = roots_of_unity(3).unwrap();
        let map = build_pairing(&u3, Tol::default()).unwrap();
        assert_eq!(map.phi(0, 1), Some(2));
        assert_eq!(map.phi(1, 2), Some(0));
        assert_eq!(map.phi(0, 2), Some(1));
        assert_eq!(map.phi(2, 0), Some(1));
        assert_eq!(map.phi(1, 1), None);

        let tri =
            label_by_increasing_arguments(&qcfg(&[("1", "0"), ("0", "1"), ("1", "1")])).unwrap();
        assert!(matches!(
            build_pairing(&tri, Tol::default()),
            Err(BalanceError::NotBalanced { .. })
        ));
    }

    #[test]
    fn pairing_rejects_even_and_non_uniform() {
        let sq = label_by_increasing_arguments(&square()).unwrap();
        assert_eq!(
            build_pairing(&sq, Tol::default()),
            Err(BalanceError::NeedsOddSize { m: 4 })
        );
        let c =
            label_by_increasing_arguments(&qcfg(&[("1", "0"), ("-1", "0"), ("0", "1")])).unwrap();
        assert!(matches!(
            build_pairing(&c, Tol::default()),
            Err(BalanceError::NotUniform { .. })
        ));
        assert!(matches!(
            step_constants(&c, Tol::default()),
            Err(BalanceError::NotUniform { .. })
        ));
    }

    #[test]
    fn tampered_pairing_fails_verify() {
        let u5 = roots_of_unity(5).unwrap();
        let mut map = build_pairing(&u5, Tol::default()).unwrap();
        map.per_index[0][0] = map.per_index[1][0];
        assert!(map.verify().is_err());
    }

    #[test]
    fn antisymmetry_examples() {
        for m in [3, 7] {
            let u = roots_of_unity(m).unwrap();
            assert_eq!(verify_antisymmetry(&u, Tol::Abs(1e-12)), Ok(()));
        }
        let u7 = roots_of_unity(7).unwrap();
        let mut pts: Vec<(f64, f64)> = u7.vectors().iter().map(|v| (v.x, v.y)).collect();
        pts[3].0 += 0.05;
        let bent = label_by_increasing_arguments(&fcfg(&pts)).unwrap();
        match verify_antisymmetry(&bent, Tol::Abs(1e-12)) {
            Err(BalanceError::Antisymmetry { k, a }) => {
                let touched = [k as i64, k as i64 + a as i64, k as i64 - a as i64]
                    .map(|x| cyclic_index(x, 7));
                assert!(touched.contains(&3), "k={k} a={a}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn step_constant_examples() {
        let u5 = roots_of_unity(5).unwrap();
        let sc = step_constants(&u5, Tol::Abs(1e-12)).unwrap();
        assert!((sc.a1 - 0.951_056_516_3).abs() < 1e-9);
        assert!((sc.an - 0.587_785_252_3).abs() < 1e-9);

        let u3 = roots_of_unity(3).unwrap();
        let sc = step_constants(&u3, Tol::Abs(1e-12)).unwrap();
        assert!((sc.a1 - 0.866_025_403_8).abs() < 1e-9);
        assert!((sc.an - sc.a1).abs() < 1e-15);

        let mut pts: Vec<(f64, f64)> = u5.vectors().iter().map(|v| (v.x, v.y)).collect();
        pts[2].1 += 0.05;
        let bent = label_by_increasing_arguments(&fcfg(&pts)).unwrap();
        assert!(matches!(
            step_constants(&bent, Tol::Abs(1e-12)),
            Err(BalanceError::InconsistentConstants { .. })
        ));
    }

    #[test]
    fn exact_model_triangle() {
        // {(1,0), (0,1), (-1,-1)}: every determinant is ±1
        let c =
            label_by_increasing_arguments(&qcfg(&[("1", "0"), ("0", "1"), ("-1", "-1")])).unwrap();
        assert!(is_balanced(c.config(), Tol::default()).balanced);
        assert_eq!(verify_antisymmetry(&c, Tol::default()), Ok(()));
        let sc = step_constants(&c, Tol::default()).unwrap();
        assert_eq!(sc.a1, BigRational::from_i64(1));
        assert_eq!(sc.an, BigRational::from_i64(1));
    }
}
