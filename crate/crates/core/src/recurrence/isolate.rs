//! Real root isolation for integer polynomials.
//!
//! The square-free part is mapped onto `[0, 1]` and split into dyadic
//! subintervals until Descartes' rule of signs reports zero or one root in
//! each. Isolated roots are then refined by exact sign bisection.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::IntPoly;

/// A real root, either hit exactly at a dyadic point or bracketed by an open interval.
#[derive(Clone, Debug, PartialEq)]
pub enum RealRoot {
    Exact(BigRational),
    Interval { lo: BigRational, hi: BigRational },
}

impl RealRoot {
    pub fn midpoint(&self) -> BigRational {
        match self {
            RealRoot::Exact(q) => q.clone(),
            RealRoot::Interval { lo, hi } => (lo + hi) / BigRational::from_integer(2.into()),
        }
    }

    pub fn width(&self) -> BigRational {
        match self {
            RealRoot::Exact(_) => BigRational::zero(),
            RealRoot::Interval { lo, hi } => hi - lo,
        }
    }

    pub fn lo(&self) -> &BigRational {
        match self {
            RealRoot::Exact(q) => q,
            RealRoot::Interval { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> &BigRational {
        match self {
            RealRoot::Exact(q) => q,
            RealRoot::Interval { hi, .. } => hi,
        }
    }
}

/// An isolating interval together with the polynomial in local coordinates.
struct Bracket {
    /// `local(x)` vanishes exactly where the input vanishes at `lo + (hi - lo) x`.
    local: IntPoly,
    lo: BigRational,
    hi: BigRational,
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

/// A power of two strictly above every root's absolute value.
///
/// Every root satisfies `|t| <= 2 max_i |c_{d-i} / c_d|^{1/i}`; with
/// `|c_{d-i}| < 2^{bits(c_{d-i})}` and `|c_d| >= 2^{bits(c_d) - 1}` the maximum is at
/// most `2^e` once `e·i >= bits(c_{d-i}) - bits(c_d) + 1` for all `i`.
fn root_bound(p: &IntPoly) -> BigInt {
    let d = p.degree().expect("nonzero polynomial");
    let lc_bits = p.leading().expect("nonzero polynomial").bits() as i64;
    let e = (1..=d)
        .filter(|&i| !p.coeff(d - i).is_zero())
        .map(|i| {
            let excess = p.coeff(d - i).bits() as i64 - lc_bits + 1;
            (excess.max(0) as u64).div_ceil(i as u64)
        })
        .max()
        .unwrap_or(0);
    pow2(e + 2)
}

/// Roots of `(x + 1)^d · p(1 / (x + 1))` count the roots of `p` in `(0, 1)` up to an even number.
fn descartes_count(p: &IntPoly) -> usize {
    p.reversed().taylor_shift(&BigInt::one()).sign_variations()
}

/// `2^d · p(x / 2)`, which covers the left half of `[0, 1]`.
fn left_half(p: &IntPoly) -> IntPoly {
    let d = p.degree().unwrap_or(0);
    IntPoly::from_coeffs(
        p.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c * pow2((d - i) as u64))
            .collect(),
    )
}

fn isolate(p: &IntPoly) -> (Vec<BigRational>, Vec<Bracket>) {
    let q = p.square_free_part();
    let mut exact = Vec::new();
    let mut brackets = Vec::new();
    if q.degree().unwrap_or(0) == 0 {
        return (exact, brackets);
    }
    let b = root_bound(&q);
    let span = BigRational::from_integer(&b * 2);
    let origin = BigRational::from_integer(-b.clone());
    // r(x) = q(2B x - B) on [0, 1]
    let r = q.taylor_shift(&-b.clone()).scale_var(&(&b * 2));

    // (poly, c, k): local interval [c / 2^k, (c + 1) / 2^k]
    let mut stack = vec![(r, BigInt::zero(), 0u64)];
    let to_t =
        |c: &BigInt, k: u64| origin.clone() + span.clone() * BigRational::new(c.clone(), pow2(k));
    while let Some((mut poly, c, k)) = stack.pop() {
        if poly.coeff(0).is_zero() {
            exact.push(to_t(&c, k));
            poly = IntPoly::from_coeffs(poly.coeffs()[1..].to_vec());
        }
        match descartes_count(&poly) {
            0 => {}
            1 => brackets.push(Bracket {
                lo: to_t(&c, k),
                hi: to_t(&(&c + 1), k),
                local: poly,
            }),
            _ => {
                let left = left_half(&poly);
                let right = left.taylor_shift(&BigInt::one());
                stack.push((right, &c * 2 + 1, k + 1));
                stack.push((left, &c * 2, k + 1));
            }
        }
    }
    (exact, brackets)
}

/// Isolating intervals (or exact dyadic roots) for every distinct real root, sorted.
pub fn isolate_real_roots(p: &IntPoly) -> Vec<RealRoot> {
    let (exact, brackets) = isolate(p);
    let mut roots: Vec<RealRoot> = exact
        .into_iter()
        .map(RealRoot::Exact)
        .chain(
            brackets
                .into_iter()
                .map(|b| RealRoot::Interval { lo: b.lo, hi: b.hi }),
        )
        .collect();
    roots.sort_by(|a, b| a.lo().cmp(b.lo()));
    roots
}

/// Every distinct real root, bracketed to width at most `max_width`.
pub fn real_roots(p: &IntPoly, max_width: &BigRational) -> Vec<RealRoot> {
    let (exact, brackets) = isolate(p);
    let mut roots: Vec<RealRoot> = exact.into_iter().map(RealRoot::Exact).collect();
    for b in brackets {
        roots.push(refine(b, max_width));
    }
    roots.sort_by(|a, b| a.lo().cmp(b.lo()));
    roots
}

fn refine(b: Bracket, max_width: &BigRational) -> RealRoot {
    let half = BigRational::new(1.into(), 2.into());
    let scale = &b.hi - &b.lo;
    let (mut lo, mut hi) = (BigRational::zero(), BigRational::one());
    let sign_lo = b.local.sign_at(&lo);
    debug_assert_ne!(sign_lo, 0);
    while (&hi - &lo) * &scale > *max_width {
        let mid = (&lo + &hi) * &half;
        match b.local.sign_at(&mid) {
            0 => return RealRoot::Exact(&b.lo + mid * &scale),
            s if s == sign_lo => lo = mid,
            _ => hi = mid,
        }
    }
    RealRoot::Interval {
        lo: &b.lo + lo * &scale,
        hi: &b.lo + hi * &scale,
    }
}
