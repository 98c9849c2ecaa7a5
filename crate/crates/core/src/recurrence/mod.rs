//! The model sequences `u_i(t)`, `w_i(t)` and the parameters at which they close.
//!
//! Starting from `u_0 = (1, 0)` and `w_0 = (t, -1)`:
//!
//! ```text
//! u_{i+1} = t·w_i - u_i
//! w_{i+1} = t·u_{i+1} - w_i
//! ```
//!
//! Each step is the linear solve that recovers the next vector of a uniform
//! balanced configuration from its two predecessors in the frame where
//! `v_0 = (1, 0)` and `v_n = (0, 1)`. The sequence closes (`w_n = (1, 0)`,
//! `u_n = (0, 1)`) exactly at `t = 2cos(2kπ/m)`, `k = 1..=n`.

pub mod isolate;
pub mod poly;

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use thiserror::Error;

use crate::geom::{Configuration, GeomError, PlaneVector, Scalar};

pub use isolate::{isolate_real_roots, real_roots, RealRoot};
pub use poly::{IntPoly, PolyPair};

/// Tolerance on `|x(w_n)(t) - 1|` when filtering roots of `y(w_n)`.
pub const X_FILTER_TOL: f64 = 1e-9;

/// Tolerance for the closure `w_n(t_k) = U`, `u_n(t_k) = V`.
pub const CLOSURE_TOL: f64 = 1e-10;

/// Certified roots are bracketed to at most `2^-50` (well under `1e-12`).
const ROOT_WIDTH_LOG2: usize = 50;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum RecurrenceError {
    #[error("expected {expected} roots of w_n(t) = U, found {found}")]
    RootCountMismatch { expected: usize, found: usize },
    #[error("root structure violated: {0}")]
    RootStructure(String),
    #[error("m must be odd and at least 3, got {0}")]
    BadSize(usize),
    #[error("n must be at least 1")]
    ZeroN,
    #[error("k must lie in 1..={n}, got {k}")]
    BadIndex { k: usize, n: usize },
    #[error("sequence does not close at t = {t}: deviation {deviation:e}")]
    ClosureViolation { t: f64, deviation: f64 },
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Vectors `u_0..=u_n` and `w_0..=w_n` at one parameter value.
#[derive(Clone, Debug, PartialEq)]
pub struct Sequences<T> {
    pub us: Vec<PlaneVector<T>>,
    pub ws: Vec<PlaneVector<T>>,
}

pub fn numeric_sequences<T: Scalar>(t: &T, n: usize) -> Sequences<T> {
    let mut us = vec![PlaneVector::new(T::one(), T::zero())];
    let mut ws = vec![PlaneVector::new(t.clone(), -T::one())];
    for i in 0..n {
        let u = ws[i].scale(t) - us[i].clone();
        let w = u.scale(t) - ws[i].clone();
        us.push(u);
        ws.push(w);
    }
    Sequences { us, ws }
}

/// The same sequences with integer polynomial coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicSequences {
    pub us: Vec<PolyPair>,
    pub ws: Vec<PolyPair>,
}

impl SymbolicSequences {
    pub fn eval<T: Scalar>(&self, t: &T) -> Sequences<T> {
        Sequences {
            us: self.us.iter().map(|p| p.eval(t)).collect(),
            ws: self.ws.iter().map(|p| p.eval(t)).collect(),
        }
    }
}

pub fn symbolic_sequences(n: usize) -> SymbolicSequences {
    let mut us = vec![PolyPair::constant(1, 0)];
    let mut ws = vec![PolyPair::new(IntPoly::var(), IntPoly::from_i64s(&[-1]))];
    for i in 0..n {
        let u = &ws[i].shift_up() - &us[i];
        let w = &u.shift_up() - &ws[i];
        us.push(u);
        ws.push(w);
    }
    SymbolicSequences { us, ws }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    UX,
    UY,
    WX,
    WY,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Defect {
    Parity,
    Degree {
        expected: usize,
        found: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("index {index}, component {component:?}: {defect:?}")]
pub struct ParityFailure {
    pub index: usize,
    pub component: Component,
    pub defect: Defect,
}

/// For every `i >= 1`: `x(u_i)` even of degree `2i`, `y(u_i)` odd of degree `2i - 1`,
/// `x(w_i)` odd of degree `2i + 1`, `y(w_i)` even of degree `2i`.
pub fn check_parity_degrees(us: &[PolyPair], ws: &[PolyPair]) -> Result<(), ParityFailure> {
    let expectations = |i: usize| {
        [
            (Component::UX, &us[i].x, true, 2 * i),
            (Component::UY, &us[i].y, false, 2 * i - 1),
            (Component::WX, &ws[i].x, false, 2 * i + 1),
            (Component::WY, &ws[i].y, true, 2 * i),
        ]
    };
    for i in 1..us.len().min(ws.len()) {
        for (component, poly, even, degree) in expectations(i) {
            let parity_ok = if even { poly.is_even() } else { poly.is_odd() };
            if !parity_ok {
                return Err(ParityFailure {
                    index: i,
                    component,
                    defect: Defect::Parity,
                });
            }
            if poly.degree() != Some(degree) {
                return Err(ParityFailure {
                    index: i,
                    component,
                    defect: Defect::Degree {
                        expected: degree,
                        found: poly.degree(),
                    },
                });
            }
        }
    }
    Ok(())
}

/// The `n` parameter values for `m = 2n + 1`, sorted ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct RootGrid {
    pub m: usize,
    pub values: Vec<f64>,
}

impl RootGrid {
    pub fn n(&self) -> usize {
        (self.m - 1) / 2
    }

    pub fn max_deviation(&self, other: &RootGrid) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Solution of `w_n(t) = U` with the intermediate certificates.
#[derive(Clone, Debug)]
pub struct WnSolution {
    pub grid: RootGrid,
    /// All real roots of `y(w_n)`, bracketed.
    pub y_roots: Vec<RealRoot>,
    /// The subset of `y_roots` where `x(w_n) = 1`.
    pub kept: Vec<RealRoot>,
    pub w_n: PolyPair,
}

pub fn solve_wn_equation(n: usize) -> Result<WnSolution, RecurrenceError> {
    if n == 0 {
        return Err(RecurrenceError::ZeroN);
    }
    let seq = symbolic_sequences(n);
    let w_n = seq.ws[n].clone();
    let width = BigRational::new(1.into(), BigInt::from(1) << ROOT_WIDTH_LOG2);
    let y_roots = real_roots(&w_n.y, &width);

    // y(w_n) is even: roots come in ± pairs and never include 0.
    if y_roots.len() > 2 * n || y_roots.len() % 2 == 1 {
        return Err(RecurrenceError::RootStructure(format!(
            "y(w_n) has {} real roots",
            y_roots.len()
        )));
    }
    let len = y_roots.len();
    for (i, r) in y_roots.iter().enumerate().take(len / 2) {
        let mirror = &y_roots[len - 1 - i];
        let gap = (r.midpoint() + mirror.midpoint()).abs();
        if gap > r.width() + mirror.width() {
            return Err(RecurrenceError::RootStructure(format!(
                "root {i} has no mirror image"
            )));
        }
    }

    let one = BigRational::from_integer(1.into());
    let kept: Vec<RealRoot> = y_roots
        .iter()
        .filter(|r| {
            let dev = w_n.x.eval_rational(&r.midpoint()) - &one;
            dev.abs().to_f64() <= X_FILTER_TOL
        })
        .cloned()
        .collect();
    for (i, r) in y_roots.iter().enumerate().take(len / 2) {
        let mirror = &y_roots[len - 1 - i];
        if kept.contains(r) && kept.contains(mirror) {
            return Err(RecurrenceError::RootStructure(format!(
                "both members of pair {i} satisfy x(w_n) = 1"
            )));
        }
    }
    if kept.len() != n {
        return Err(RecurrenceError::RootCountMismatch {
            expected: n,
            found: kept.len(),
        });
    }
    let values = kept.iter().map(|r| r.midpoint().to_f64()).collect();
    Ok(WnSolution {
        grid: RootGrid {
            m: 2 * n + 1,
            values,
        },
        y_roots,
        kept,
        w_n,
    })
}

/// Real `t` with `w_n(t) = (1, 0)`, found from the integer polynomials alone.
pub fn wn_equation_roots(n: usize) -> Result<RootGrid, RecurrenceError> {
    solve_wn_equation(n).map(|s| s.grid)
}

/// `t_k = 2cos(2kπ/m)`.
pub fn grid_value(m: usize, k: usize) -> f64 {
    2.0 * (TAU * k as f64 / m as f64).cos()
}

/// Closed-form closure parameters `{2cos(2kπ/m) : k = 1..=n}`, sorted.
pub fn t_grid(m: usize) -> Result<RootGrid, RecurrenceError> {
    if m < 3 || m.is_multiple_of(2) {
        return Err(RecurrenceError::BadSize(m));
    }
    let n = (m - 1) / 2;
    let mut values: Vec<f64> = (1..=n).map(|k| grid_value(m, k)).collect();
    values.sort_by(f64::total_cmp);
    Ok(RootGrid { m, values })
}

/// The configuration `[u_0, …, u_{n-1}, V, w_0, …, w_{n-1}]` at `t = t_k`.
///
/// Slot `i` holds `u_i`, slot `n` holds `V = u_n`, slot `n + 1 + i` holds `w_i`.
pub fn model_configuration(m: usize, k: usize) -> Result<Configuration<f64>, RecurrenceError> {
    if m < 3 || m.is_multiple_of(2) {
        return Err(RecurrenceError::BadSize(m));
    }
    let n = (m - 1) / 2;
    if k == 0 || k > n {
        return Err(RecurrenceError::BadIndex { k, n });
    }
    let t = grid_value(m, k);
    let seq = numeric_sequences(&t, n);
    let deviation = seq.ws[n]
        .distance(&PlaneVector::new(1.0, 0.0))
        .max(seq.us[n].distance(&PlaneVector::new(0.0, 1.0)));
    if deviation.is_nan() || deviation > CLOSURE_TOL {
        return Err(RecurrenceError::ClosureViolation { t, deviation });
    }
    let mut vectors = seq.us[..n].to_vec();
    vectors.push(PlaneVector::new(0.0, 1.0));
    vectors.extend(seq.ws[..n].iter().cloned());
    Ok(Configuration::new(vectors)?)
}
