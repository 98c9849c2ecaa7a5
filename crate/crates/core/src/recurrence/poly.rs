use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::geom::{PlaneVector, Scalar};

/// Univariate polynomial in `t` with arbitrary-precision integer coefficients.
///
/// Coefficients are stored in ascending degree with trailing zeros trimmed,
/// so the zero polynomial has an empty coefficient list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_coeffs(vec![c.into()])
    }

    /// `t`.
    pub fn var() -> Self {
        Self::from_coeffs(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `t^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Only even powers of `t` occur (the zero polynomial is even).
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(Zero::is_zero)
    }

    /// Only odd powers of `t` occur (the zero polynomial is odd).
    pub fn is_odd(&self) -> bool {
        self.coeffs.iter().step_by(2).all(Zero::is_zero)
    }

    /// `t · self`.
    pub fn shift_up(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(BigInt::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * BigInt::from(i))
                .collect(),
        )
    }

    /// Horner evaluation in either scalar mode.
    pub fn eval<T: Scalar>(&self, t: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * t.clone() + T::from_bigint(c))
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.eval(&t)
    }

    /// `b^d · p(a / b)` where `d` is the degree, in integer arithmetic.
    pub fn homogeneous_eval(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut b_pow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * a + c * &b_pow;
            b_pow *= b;
        }
        acc
    }

    pub fn eval_rational(&self, t: &BigRational) -> BigRational {
        let Some(d) = self.degree() else {
            return BigRational::zero();
        };
        let den = t.denom();
        BigRational::new(self.homogeneous_eval(t.numer(), den), den.pow(d as u32))
    }

    /// Sign of the value at `t`, computed exactly.
    pub fn sign_at(&self, t: &BigRational) -> i8 {
        // reduced rationals have positive denominators
        let v = self.homogeneous_eval(t.numer(), t.denom());
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    /// gcd of the coefficients (nonnegative).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            g = -g;
        }
        Self::from_coeffs(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Pseudo-remainder of `self` by `divisor`: `lc(divisor)^k · self mod divisor`.
    fn pseudo_rem(&self, divisor: &Self) -> Self {
        let d = divisor.degree().expect("pseudo_rem by zero polynomial");
        let lc = divisor.leading().unwrap().clone();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < d {
                break;
            }
            let top = r.leading().unwrap().clone();
            let mut coeffs: Vec<BigInt> = r.coeffs.iter().map(|c| c * &lc).collect();
            for (i, c) in divisor.coeffs.iter().enumerate() {
                coeffs[i + dr - d] -= &top * c;
            }
            r = Self::from_coeffs(coeffs);
        }
        r
    }

    /// Exact division; panics in debug builds if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Self {
        let d = divisor.degree().expect("division by zero polynomial");
        let lc = divisor.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let Some(n) = self.degree() else {
            return Self::zero();
        };
        if n < d {
            debug_assert!(self.is_zero());
            return Self::zero();
        }
        let mut quot = vec![BigInt::zero(); n - d + 1];
        for k in (0..=n - d).rev() {
            let (q, r) = rem[k + d].div_rem(lc);
            debug_assert!(r.is_zero(), "inexact polynomial division");
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &q * c;
            }
            quot[k] = q;
        }
        debug_assert!(rem.iter().all(Zero::is_zero));
        Self::from_coeffs(quot)
    }

    /// Primitive gcd via primitive pseudo-remainder sequences.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a
    }

    /// Product of the distinct irreducible factors, up to content.
    pub fn square_free_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.primitive_part();
        }
        let g = self.gcd(&self.derivative());
        self.primitive_part().div_exact(&g).primitive_part()
    }

    /// `self(t + shift)`.
    pub fn taylor_shift(&self, shift: &BigInt) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let add = &c[j + 1] * shift;
                c[j] += add;
            }
        }
        Self::from_coeffs(c)
    }

    /// `self(s · t)`.
    pub fn scale_var(&self, s: &BigInt) -> Self {
        let mut pow = BigInt::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c * &pow);
            pow *= s;
        }
        Self::from_coeffs(out)
    }

    /// `t^deg · self(1/t)` with `deg` the degree of `self`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::from_coeffs(c)
    }

    /// Sign changes in the coefficient sequence, zeros skipped.
    pub fn sign_variations(&self) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for c in &self.coeffs {
            let s = if c.is_positive() {
                1
            } else if c.is_negative() {
                -1
            } else {
                continue;
            };
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    f.write_str("t")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(out)
    }
}

/// A vector-valued polynomial `t ↦ (x(t), y(t))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyPair {
    pub x: IntPoly,
    pub y: IntPoly,
}

impl PolyPair {
    pub fn new(x: IntPoly, y: IntPoly) -> Self {
        Self { x, y }
    }

    pub fn constant(x: i64, y: i64) -> Self {
        Self::new(IntPoly::from_i64s(&[x]), IntPoly::from_i64s(&[y]))
    }

    pub fn eval<T: Scalar>(&self, t: &T) -> PlaneVector<T> {
        PlaneVector::new(self.x.eval(t), self.y.eval(t))
    }

    /// `t · self`.
    pub fn shift_up(&self) -> Self {
        Self::new(self.x.shift_up(), self.y.shift_up())
    }
}

impl Sub for &PolyPair {
    type Output = PolyPair;
    fn sub(self, rhs: &PolyPair) -> PolyPair {
        PolyPair::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn trims_and_degree() {
        assert_eq!(p(&[1, 2, 0, 0]).coeffs().len(), 2);
        assert_eq!(p(&[0, 0]).degree(), None);
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[3]).degree(), Some(0));
    }

    #[test]
    fn parity() {
        assert!(p(&[-1, 0, 1]).is_even());
        assert!(!p(&[-1, 0, 1]).is_odd());
        assert!(p(&[0, -2, 0, 1]).is_odd());
        assert!(!p(&[0, 1, 1]).is_even());
        assert!(IntPoly::zero().is_even() && IntPoly::zero().is_odd());
    }

    #[test]
    fn display() {
        assert_eq!(p(&[3, 0, -4, 0, 0, 1]).to_string(), "t^5 - 4*t^2 + 3");
        assert_eq!(p(&[0, -1]).to_string(), "-t");
        assert_eq!(IntPoly::zero().to_string(), "0");
    }

    #[test]
    fn gcd_and_square_free() {
        // (t - 1)^2 (t + 2)
        let f = &(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[2, 1]);
        assert_eq!(f.square_free_part(), p(&[-2, 1, 1]));
        assert_eq!(f.gcd(&f.derivative()), p(&[-1, 1]));
        let g = p(&[-1, 0, 1]);
        assert_eq!(g.square_free_part(), g);
    }

    #[test]
    fn shifts() {
        let f = p(&[1, 2, 3]);
        // f(t + 1) = 3t^2 + 8t + 6
        assert_eq!(f.taylor_shift(&BigInt::from(1)), p(&[6, 8, 3]));
        assert_eq!(f.scale_var(&BigInt::from(2)), p(&[1, 4, 12]));
        assert_eq!(f.reversed(), p(&[3, 2, 1]));
        assert_eq!(p(&[1, -1, 0, 1, 1]).sign_variations(), 2);
    }

    proptest! {
        #[test]
        fn taylor_shift_matches_evaluation(
            c in prop::collection::vec(-50i64..50, 1..8),
            s in -5i64..5,
            t in -20i64..20,
        ) {
            let f = p(&c);
            let shifted = f.taylor_shift(&BigInt::from(s));
            let at = |q: &IntPoly, x: i64| q.eval_rational(&BigRational::from_integer(x.into()));
            prop_assert_eq!(at(&shifted, t), at(&f, t + s));
        }

        #[test]
        fn division_inverts_product(
            a in prop::collection::vec(-20i64..20, 1..6),
            b in prop::collection::vec(-20i64..20, 1..6),
        ) {
            let (a, b) = (p(&a), p(&b));
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).div_exact(&b), a);
        }
    }
}
