//! Constructive GL(2) equivalence of uniform balanced configurations with
//! the roots of unity.
//!
//! For a labeled configuration `v_0, …, v_{2n}`, the frame map `g_C` sends
//! `v_0 ↦ (1, 0)` and `v_n ↦ (0, 1)`; it then sends `v_{n+1}` to `(t_C, -1)`.
//! `t_C` must be one of the closure parameters `2cos(2kπ/m)`, and composing
//! `g_C` with the inverse of the analogous frame on `(1, ω^k)` lands every
//! vector on a root of unity:
//!
//! ```text
//! v_i       ↦ ω^{-2k·i}        (i = 0..=n)
//! v_{n+1+i} ↦ ω^{-k(1+2i)}     (i = 0..n)
//! ```

use thiserror::Error;

use crate::balance::{is_balanced, is_uniform, Tol};
use crate::geom::{
    cyclic_index, det2, label_by_increasing_arguments, unit_root, Configuration, GeomError,
    PlaneVector, Scalar,
};
use crate::recurrence::grid_value;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum CanonError {
    #[error("canonical form needs an odd size m = 2n + 1 >= 3, got {m}")]
    NeedsOddSize { m: usize },
    #[error("not balanced: row {index} has unmatched determinant {value}")]
    NotBalanced { index: usize, value: f64 },
    #[error("not uniform: vectors {first} and {second} are linearly dependent")]
    NotUniform { first: usize, second: usize },
    #[error("frame vectors are linearly dependent")]
    SingularFrame,
    #[error("frame image of v_(n+1) has y = {y}, expected -1")]
    NotNormalized { y: f64 },
    #[error("t = {t} matches no closure parameter for m = {m}")]
    NoGridMatch { t: f64, m: usize },
    #[error("reconstruction produced a zero vector at slot {index}")]
    DegenerateStep { index: usize },
    #[error("residual {residual:e} exceeds tolerance {tol:e}")]
    ResidualTooLarge { residual: f64, tol: f64 },
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// A 2×2 matrix `[[a, b], [c, d]]` acting on column vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Scalar> LinearMap2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn det(&self) -> T {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn apply(&self, v: &PlaneVector<T>) -> PlaneVector<T> {
        PlaneVector::new(
            self.a.clone() * v.x.clone() + self.b.clone() * v.y.clone(),
            self.c.clone() * v.x.clone() + self.d.clone() * v.y.clone(),
        )
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let (e, f, g, h) = (&other.a, &other.b, &other.c, &other.d);
        Self::new(
            a.clone() * e.clone() + b.clone() * g.clone(),
            a.clone() * f.clone() + b.clone() * h.clone(),
            c.clone() * e.clone() + d.clone() * g.clone(),
            c.clone() * f.clone() + d.clone() * h.clone(),
        )
    }

    pub fn inverse(&self, tol: f64) -> Result<Self, CanonError> {
        let det = self.det();
        if det.near_zero(tol) {
            return Err(CanonError::SingularFrame);
        }
        Ok(Self::new(
            self.d.clone() / det.clone(),
            -self.b.clone() / det.clone(),
            -self.c.clone() / det.clone(),
            self.a.clone() / det,
        ))
    }

    pub fn apply_all(&self, c: &Configuration<T>) -> Result<Configuration<T>, GeomError> {
        Configuration::new(c.vectors().iter().map(|v| self.apply(v)).collect())
    }

    pub fn to_f64(&self) -> LinearMap2<f64> {
        LinearMap2::new(
            self.a.to_f64(),
            self.b.to_f64(),
            self.c.to_f64(),
            self.d.to_f64(),
        )
    }
}

impl LinearMap2<f64> {
    pub fn scaling(s: f64) -> Self {
        Self::new(s, 0.0, 0.0, s)
    }

    /// Ratio of singular values in the spectral norm.
    pub fn condition_number(&self) -> f64 {
        let fro2 = self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d;
        let det = self.det().abs();
        if det == 0.0 {
            return f64::INFINITY;
        }
        // σ1² + σ2² = fro², σ1·σ2 = |det|
        let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0).sqrt();
        let s1 = ((fro2 + disc) / 2.0).sqrt();
        let s2 = det / s1;
        s1 / s2
    }
}

/// The unique map with `v0 ↦ (1, 0)` and `vn ↦ (0, 1)`.
pub fn frame_map<T: Scalar>(
    v0: &PlaneVector<T>,
    vn: &PlaneVector<T>,
    tol: f64,
) -> Result<LinearMap2<T>, CanonError> {
    LinearMap2::new(v0.x.clone(), vn.x.clone(), v0.y.clone(), vn.y.clone()).inverse(tol)
}

/// `x` of `g·v_next`, which must have the form `(t, -1)`.
pub fn extract_t<T: Scalar>(
    g: &LinearMap2<T>,
    v_next: &PlaneVector<T>,
    tol: f64,
) -> Result<T, CanonError> {
    let p = g.apply(v_next);
    if !p.y.near(&-T::one(), tol) {
        return Err(CanonError::NotNormalized { y: p.y.to_f64() });
    }
    Ok(p.x)
}

/// The `k` in `1..=n` whose closure parameter `2cos(2kπ/m)` lies within `tol` of `t`.
pub fn match_k(t: f64, m: usize, tol: f64) -> Result<usize, CanonError> {
    if m < 3 || m.is_multiple_of(2) {
        return Err(CanonError::NeedsOddSize { m });
    }
    (1..=(m - 1) / 2)
        .map(|k| (k, (t - grid_value(m, k)).abs()))
        .filter(|&(_, d)| d <= tol)
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(k, _)| k)
        .ok_or(CanonError::NoGridMatch { t, m })
}

/// Rebuilds all `m` vectors, in label order, from `v_0`, `v_n` and `v_{n+1}`.
///
/// With `A1 = det(v_n, v_{n+1})`, `An = det(v_0, v_n)` and `r = A1 / An`:
/// `v_i = -v_{i-1} - r·v_{n+i}` and `v_{n+i+1} = -r·v_i - v_{n+i}` for `i = 1..n`.
pub fn reconstruct_from_triple<T: Scalar>(
    v0: &PlaneVector<T>,
    vn: &PlaneVector<T>,
    vn1: &PlaneVector<T>,
    m: usize,
    tol: f64,
) -> Result<Configuration<T>, CanonError> {
    if m < 3 || m.is_multiple_of(2) {
        return Err(CanonError::NeedsOddSize { m });
    }
    let n = (m - 1) / 2;
    let an = det2(v0, vn);
    if an.near_zero(tol) {
        return Err(CanonError::SingularFrame);
    }
    let ratio = det2(vn, vn1) / an;
    let mut slots: Vec<Option<PlaneVector<T>>> = vec![None; m];
    slots[0] = Some(v0.clone());
    slots[n] = Some(vn.clone());
    slots[n + 1] = Some(vn1.clone());
    let get = |slots: &[Option<PlaneVector<T>>], i: usize| slots[i].clone().expect("filled slot");
    let degenerate = |v: &PlaneVector<T>| v.x.near_zero(tol) && v.y.near_zero(tol);
    for i in 1..n {
        let vi = -get(&slots, i - 1) - get(&slots, n + i).scale(&ratio);
        if degenerate(&vi) {
            return Err(CanonError::DegenerateStep { index: i });
        }
        let next = -vi.scale(&ratio) - get(&slots, n + i);
        if degenerate(&next) {
            return Err(CanonError::DegenerateStep { index: n + i + 1 });
        }
        slots[i] = Some(vi);
        slots[n + i + 1] = Some(next);
    }
    let vectors = slots
        .into_iter()
        .map(|v| v.expect("all slots filled"))
        .collect();
    Ok(Configuration::new(vectors)?)
}

/// Exponent of `ω` assigned to label slot `slot` when `t_C = 2cos(2kπ/m)`.
pub fn slot_exponent(slot: usize, m: usize, k: usize) -> usize {
    let n = (m - 1) / 2;
    let k = k as i64;
    if slot <= n {
        cyclic_index(-2 * k * slot as i64, m)
    } else {
        let i = (slot - n - 1) as i64;
        cyclic_index(-k * (1 + 2 * i), m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonOptions {
    /// Tolerance for the balance and uniformity checks.
    pub balance_tol: Tol,
    /// Absolute determinant tolerance after scaling to `max |v_i| = 1`.
    pub det_tol: f64,
    /// Allowed deviation of `y(g_C·v_{n+1})` from `-1`.
    pub normalization_tol: f64,
    pub grid_tol: f64,
    pub residual_tol: f64,
}

impl Default for CanonOptions {
    fn default() -> Self {
        Self {
            balance_tol: Tol::default(),
            det_tol: 1e-12,
            normalization_tol: 1e-8,
            grid_tol: 1e-6,
            residual_tol: 1e-8,
        }
    }
}

/// A certificate that a configuration is a linear image of the `m`-th roots of unity.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalForm {
    pub m: usize,
    /// Maps each input vector onto its root of unity.
    pub g: LinearMap2<f64>,
    pub t: f64,
    pub k: usize,
    /// `permutation[slot]` is the input index at label slot `slot`.
    pub permutation: Vec<usize>,
    /// `exponents[slot]`: `g·v_slot ≈ ω^{exponents[slot]}`.
    pub exponents: Vec<usize>,
    pub residual: f64,
}

impl CanonicalForm {
    /// Exponent assigned to the input vector with index `input`.
    pub fn exponent_of_input(&self, input: usize) -> usize {
        let slot = self
            .permutation
            .iter()
            .position(|&i| i == input)
            .expect("input index in range");
        self.exponents[slot]
    }

    /// Exponents indexed by input position.
    pub fn input_exponents(&self) -> Vec<usize> {
        (0..self.m).map(|i| self.exponent_of_input(i)).collect()
    }
}

/// Maps a uniform balanced configuration of odd size onto the roots of unity.
pub fn canonicalize<T: Scalar>(
    c: &Configuration<T>,
    opts: &CanonOptions,
) -> Result<CanonicalForm, CanonError> {
    let m = c.len();
    let Some(n) = c.half().filter(|&n| n >= 1) else {
        return Err(CanonError::NeedsOddSize { m });
    };
    if let Some(w) = is_balanced(c, opts.balance_tol).witness {
        return Err(CanonError::NotBalanced {
            index: w.index,
            value: w.value.to_f64(),
        });
    }
    if let Some((first, second)) = is_uniform(c, opts.balance_tol).witness {
        return Err(CanonError::NotUniform { first, second });
    }

    let original = c.to_f64();
    let (unit, scale) = original.normalized();
    let labeled = label_by_increasing_arguments(&unit)?;
    let g_c = frame_map(labeled.cyclic(0), labeled.cyclic(n as i64), opts.det_tol)?;
    let t = extract_t(&g_c, labeled.cyclic(n as i64 + 1), opts.normalization_tol)?;
    let k = match_k(t, m, opts.grid_tol)?;
    let g_k = frame_map(&unit_root(0, m), &unit_root(k as i64, m), opts.det_tol)?;
    let g = g_k
        .inverse(opts.det_tol)?
        .compose(&g_c)
        .compose(&LinearMap2::scaling(scale));

    let permutation = labeled.permutation().to_vec();
    let exponents: Vec<usize> = (0..m).map(|slot| slot_exponent(slot, m, k)).collect();
    let residual = permutation
        .iter()
        .zip(&exponents)
        .map(|(&input, &e)| {
            g.apply(&original.vectors()[input])
                .distance(&unit_root(e as i64, m))
        })
        .fold(0.0, f64::max);
    if residual.is_nan() || residual > opts.residual_tol {
        return Err(CanonError::ResidualTooLarge {
            residual,
            tol: opts.residual_tol,
        });
    }
    Ok(CanonicalForm {
        m,
        g,
        t,
        k,
        permutation,
        exponents,
        residual,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Inequivalence {
    SizeMismatch { left: usize, right: usize },
    Left(CanonError),
    Right(CanonError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Equivalence {
    pub equivalent: bool,
    /// When equivalent: a map sending the vectors of `a` onto those of `b` as sets.
    pub map: Option<LinearMap2<f64>>,
    pub reason: Option<Inequivalence>,
}

/// Two uniform balanced configurations of the same odd size are always equivalent;
/// anything that fails to canonicalize is reported with the reason.
pub fn gl2_equivalent<A: Scalar, B: Scalar>(
    a: &Configuration<A>,
    b: &Configuration<B>,
    opts: &CanonOptions,
) -> Equivalence {
    let refuse = |reason| Equivalence {
        equivalent: false,
        map: None,
        reason: Some(reason),
    };
    if a.len() != b.len() {
        return refuse(Inequivalence::SizeMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let ca = match canonicalize(a, opts) {
        Ok(f) => f,
        Err(e) => return refuse(Inequivalence::Left(e)),
    };
    let cb = match canonicalize(b, opts) {
        Ok(f) => f,
        Err(e) => return refuse(Inequivalence::Right(e)),
    };
    match cb.g.inverse(0.0) {
        Ok(inv) => Equivalence {
            equivalent: true,
            map: Some(inv.compose(&ca.g)),
            reason: None,
        },
        Err(e) => refuse(Inequivalence::Right(e)),
    }
}
