//! Planar primitives: scalars in exact or float mode, vectors, determinants,
//! polar arguments, cyclic indexing and the roots of unity.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Ties between polar arguments closer than this (radians) are rejected.
pub const ARGUMENT_TIE_TOL: f64 = 1e-12;

/// Arithmetic mode of a scalar or configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float => f.write_str("float"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum GeomError {
    #[error("operands mix exact and float modes")]
    MixedMode,
    #[error("zero vector at index {index}")]
    ZeroVector { index: usize },
    #[error("the zero vector has no argument")]
    ZeroArgument,
    #[error("vectors {first} and {second} share the same argument")]
    DuplicateArgument { first: usize, second: usize },
    #[error("configuration must contain at least one vector")]
    Empty,
    #[error("size must be positive, got {0}")]
    NonPositiveSize(i64),
}

/// A real number in one of the two supported arithmetic modes.
///
/// Exact mode is `BigRational` (always in lowest terms), float mode is `f64`.
/// Tolerances are absolute and ignored in exact mode.
pub trait Scalar:
    Clone + fmt::Debug + fmt::Display + PartialOrd + Num + Signed + Send + Sync + 'static
{
    const MODE: Mode;

    fn from_i64(v: i64) -> Self;

    fn from_bigint(v: &BigInt) -> Self;

    fn to_f64(&self) -> f64;

    /// `|self| <= tol` in float mode, `self == 0` in exact mode.
    fn near_zero(&self, tol: f64) -> bool;

    fn near(&self, other: &Self, tol: f64) -> bool {
        (self.clone() - other.clone()).near_zero(tol)
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_bigint(v: &BigInt) -> Self {
        ToPrimitive::to_f64(v).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn near_zero(&self, tol: f64) -> bool {
        self.abs() <= tol
    }
}

impl Scalar for BigRational {
    const MODE: Mode = Mode::Exact;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn near_zero(&self, _tol: f64) -> bool {
        self.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlaneVector<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> PlaneVector<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.x.clone() * s.clone(), self.y.clone() * s.clone())
    }

    pub fn to_f64(&self) -> PlaneVector<f64> {
        PlaneVector::new(self.x.to_f64(), self.y.to_f64())
    }

    pub fn norm(&self) -> f64 {
        self.x.to_f64().hypot(self.y.to_f64())
    }
}

impl PlaneVector<f64> {
    pub fn distance(&self, other: &Self) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl<T: Scalar> Add for PlaneVector<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<T: Scalar> Sub for PlaneVector<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<T: Scalar> Neg for PlaneVector<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// `a.x * b.y - a.y * b.x`.
pub fn det2<T: Scalar>(a: &PlaneVector<T>, b: &PlaneVector<T>) -> T {
    a.x.clone() * b.y.clone() - a.y.clone() * b.x.clone()
}

/// Polar argument in `[0, 2π)`, with 0 on the positive x-axis.
///
/// Exact vectors are converted to float first.
pub fn argument<T: Scalar>(v: &PlaneVector<T>) -> Result<f64, GeomError> {
    if v.is_zero() {
        return Err(GeomError::ZeroArgument);
    }
    let mut theta = v.y.to_f64().atan2(v.x.to_f64());
    if theta < 0.0 {
        theta += TAU;
    }
    if theta >= TAU {
        theta = 0.0;
    }
    // normalizes -0.0
    Ok(theta + 0.0)
}

/// Nonnegative representative of `k mod m`.
pub fn cyclic_index(k: i64, m: usize) -> usize {
    assert!(m >= 1, "cyclic_index needs m >= 1");
    k.rem_euclid(m as i64) as usize
}

/// `ω^exponent` for `ω = e^{2πi/m}` as a plane vector.
pub fn unit_root(exponent: i64, m: usize) -> PlaneVector<f64> {
    let e = cyclic_index(exponent, m) as f64;
    let theta = TAU * e / m as f64;
    PlaneVector::new(theta.cos(), theta.sin())
}

/// An ordered list of nonzero plane vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration<T> {
    vectors: Vec<PlaneVector<T>>,
}

impl<T: Scalar> Configuration<T> {
    pub fn new(vectors: Vec<PlaneVector<T>>) -> Result<Self, GeomError> {
        if vectors.is_empty() {
            return Err(GeomError::Empty);
        }
        if let Some(index) = vectors.iter().position(PlaneVector::is_zero) {
            return Err(GeomError::ZeroVector { index });
        }
        Ok(Self { vectors })
    }

    pub fn mode(&self) -> Mode {
        T::MODE
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// `n` with `m = 2n + 1`, or `None` for even sizes.
    pub fn half(&self) -> Option<usize> {
        (self.len() % 2 == 1).then(|| (self.len() - 1) / 2)
    }

    pub fn vectors(&self) -> &[PlaneVector<T>] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<PlaneVector<T>> {
        self.vectors
    }

    /// Index read modulo `m`.
    pub fn cyclic(&self, k: i64) -> &PlaneVector<T> {
        &self.vectors[cyclic_index(k, self.len())]
    }

    pub fn to_f64(&self) -> Configuration<f64> {
        Configuration {
            vectors: self.vectors.iter().map(PlaneVector::to_f64).collect(),
        }
    }

    pub fn max_norm(&self) -> f64 {
        self.vectors
            .iter()
            .map(PlaneVector::norm)
            .fold(0.0, f64::max)
    }

    pub fn max_abs_det(&self) -> f64 {
        let mut best = 0.0f64;
        for (i, a) in self.vectors.iter().enumerate() {
            for b in &self.vectors[i + 1..] {
                best = best.max(det2(a, b).to_f64().abs());
            }
        }
        best
    }

    /// Same vectors, reordered so that slot `s` holds `self[order[s]]`.
    pub fn reordered(&self, order: &[usize]) -> Self {
        Self {
            vectors: order.iter().map(|&i| self.vectors[i].clone()).collect(),
        }
    }
}

impl Configuration<f64> {
    /// Rescales so that the longest vector has unit length; returns the factor applied.
    pub fn normalized(&self) -> (Self, f64) {
        let s = 1.0 / self.max_norm();
        (
            Self {
                vectors: self.vectors.iter().map(|v| v.scale(&s)).collect(),
            },
            s,
        )
    }
}

/// A configuration sorted by strictly increasing polar argument.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledConfiguration<T> {
    config: Configuration<T>,
    permutation: Vec<usize>,
}

impl<T: Scalar> LabeledConfiguration<T> {
    pub fn config(&self) -> &Configuration<T> {
        &self.config
    }

    pub fn vectors(&self) -> &[PlaneVector<T>] {
        self.config.vectors()
    }

    pub fn len(&self) -> usize {
        self.config.len()
    }

    pub fn is_empty(&self) -> bool {
        self.config.is_empty()
    }

    pub fn half(&self) -> Option<usize> {
        self.config.half()
    }

    pub fn cyclic(&self, k: i64) -> &PlaneVector<T> {
        self.config.cyclic(k)
    }

    /// `permutation()[slot]` is the input index now sitting at `slot`.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn to_f64(&self) -> LabeledConfiguration<f64> {
        LabeledConfiguration {
            config: self.config.to_f64(),
            permutation: self.permutation.clone(),
        }
    }

    /// Applies a vector map slot by slot, keeping the permutation.
    ///
    /// The caller is responsible for the map preserving argument order.
    pub fn map_unchecked<F>(&self, f: F) -> Result<Self, GeomError>
    where
        F: Fn(&PlaneVector<T>) -> PlaneVector<T>,
    {
        Ok(Self {
            config: Configuration::new(self.config.vectors.iter().map(f).collect())?,
            permutation: self.permutation.clone(),
        })
    }
}

/// Sorts by argument; the permutation maps label slots to input indices.
pub fn label_by_increasing_arguments<T: Scalar>(
    c: &Configuration<T>,
) -> Result<LabeledConfiguration<T>, GeomError> {
    let mut keyed = c
        .vectors()
        .iter()
        .enumerate()
        .map(|(i, v)| argument(v).map(|a| (a, i)))
        .collect::<Result<Vec<_>, _>>()?;
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    for pair in keyed.windows(2) {
        if pair[1].0 - pair[0].0 < ARGUMENT_TIE_TOL {
            let (first, second) = (pair[0].1.min(pair[1].1), pair[0].1.max(pair[1].1));
            return Err(GeomError::DuplicateArgument { first, second });
        }
    }
    let permutation: Vec<usize> = keyed.into_iter().map(|(_, i)| i).collect();
    Ok(LabeledConfiguration {
        config: c.reordered(&permutation),
        permutation,
    })
}

/// The `m`-th roots of unity `ω^0, …, ω^{m-1}`, already labeled.
pub fn roots_of_unity(m: i64) -> Result<LabeledConfiguration<f64>, GeomError> {
    if m <= 0 {
        return Err(GeomError::NonPositiveSize(m));
    }
    let size = m as usize;
    let vectors = (0..m).map(|k| unit_root(k, size)).collect();
    Ok(LabeledConfiguration {
        config: Configuration::new(vectors)?,
        permutation: (0..size).collect(),
    })
}

/// Scalar whose mode is only known at run time.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyScalar {
    Exact(BigRational),
    Float(f64),
}

impl AnyScalar {
    pub fn mode(&self) -> Mode {
        match self {
            AnyScalar::Exact(_) => Mode::Exact,
            AnyScalar::Float(_) => Mode::Float,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            AnyScalar::Exact(q) => Scalar::to_f64(q),
            AnyScalar::Float(x) => *x,
        }
    }
}

/// Plane vector whose mode is only known at run time.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyVector {
    Exact(PlaneVector<BigRational>),
    Float(PlaneVector<f64>),
}

impl AnyVector {
    pub fn mode(&self) -> Mode {
        match self {
            AnyVector::Exact(_) => Mode::Exact,
            AnyVector::Float(_) => Mode::Float,
        }
    }

    /// Determinant of two run-time vectors; mixed modes are rejected.
    pub fn det2(&self, other: &AnyVector) -> Result<AnyScalar, GeomError> {
        match (self, other) {
            (AnyVector::Exact(a), AnyVector::Exact(b)) => Ok(AnyScalar::Exact(det2(a, b))),
            (AnyVector::Float(a), AnyVector::Float(b)) => Ok(AnyScalar::Float(det2(a, b))),
            _ => Err(GeomError::MixedMode),
        }
    }
}

/// Configuration whose mode is only known at run time.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyConfiguration {
    Exact(Configuration<BigRational>),
    Float(Configuration<f64>),
}

impl AnyConfiguration {
    /// Builds a configuration from run-time vectors that must all share one mode.
    pub fn from_vectors(vectors: Vec<AnyVector>) -> Result<Self, GeomError> {
        let Some(first) = vectors.first() else {
            return Err(GeomError::Empty);
        };
        match first.mode() {
            Mode::Exact => {
                let vs = vectors
                    .into_iter()
                    .map(|v| match v {
                        AnyVector::Exact(v) => Ok(v),
                        AnyVector::Float(_) => Err(GeomError::MixedMode),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Configuration::new(vs).map(AnyConfiguration::Exact)
            }
            Mode::Float => {
                let vs = vectors
                    .into_iter()
                    .map(|v| match v {
                        AnyVector::Float(v) => Ok(v),
                        AnyVector::Exact(_) => Err(GeomError::MixedMode),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Configuration::new(vs).map(AnyConfiguration::Float)
            }
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            AnyConfiguration::Exact(_) => Mode::Exact,
            AnyConfiguration::Float(_) => Mode::Float,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AnyConfiguration::Exact(c) => c.len(),
            AnyConfiguration::Float(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_f64(&self) -> Configuration<f64> {
        match self {
            AnyConfiguration::Exact(c) => c.to_f64(),
            AnyConfiguration::Float(c) => c.clone(),
        }
    }
}

/// Parses `"p/q"` or `"p"` into a reduced rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str_radix(num, 10).ok()?;
    let den = BigInt::from_str_radix(den, 10).ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}
