//! Exact truncated Laurent-series arithmetic in one formal variable `q`.
//!
//! Every value the engine computes is a [`LaurentSeries`]: a finite map from
//! integer exponents to nonzero rational coefficients, together with a
//! truncation order `N` meaning "every coefficient at exponent <= N is
//! exact".  Operations propagate the tightest order they can certify, so an
//! identity check never silently compares coefficients that were lost to
//! truncation.
//!
//! Key items:
//! - [`LaurentSeries`]: the universal value, immutable after construction
//! - [`Monomial`]: `c * q^e` with `c` a nonzero rational
//! - [`SignedPower`]: a base substitution `q -> s*q^t` with `s = +-1`, `t >= 1`
//! - [`signed_range_sum`]: finite sums under the convention
//!   `sum_{r=a}^{b} = -sum_{r=b+1}^{a-1}` when `b < a`
//!
//! Finite objects (constants, monomials, polynomial products, doubly finite
//! sums) carry the sentinel order [`EXACT_ORDER`] and never lose precision;
//! genuinely infinite expansions are truncated at a caller-chosen order.

use std::collections::BTreeMap;
use std::fmt;

use num::traits::{One, Signed, Zero};

/// Exact rational coefficient: arbitrary-precision, always reduced,
/// denominator positive.
pub type Rational = num::BigRational;
pub use num::BigInt;

/// Order sentinel for series known exactly at every exponent (polynomials,
/// monomials, finite sums).  Large enough that saturating order arithmetic
/// never confuses an exact series with a truncated one.
pub const EXACT_ORDER: i64 = i64::MAX / 4;

const EXACT_THRESHOLD: i64 = i64::MAX / 8;

/// Orders above the exactness threshold are canonicalized to the sentinel,
/// so exactness survives order arithmetic and equality stays structural.
fn clamp_order(order: i64) -> i64 {
    if order >= EXACT_THRESHOLD {
        EXACT_ORDER
    } else {
        order
    }
}

/// `n*(n-1)/2`, the quadratic exponent building block used everywhere.
pub fn binom2(n: i64) -> i64 {
    // one of n, n-1 is even, so this is exact for all integers
    if n % 2 == 0 {
        (n / 2) * (n - 1)
    } else {
        n * ((n - 1) / 2)
    }
}

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `c^k` for any integer `k` (negative powers invert; `c` must be nonzero
/// when `k < 0`).
pub fn rat_pow(c: &Rational, k: i64) -> Rational {
    // fast paths for the ubiquitous +-1 coefficients
    if c.is_one() {
        return Rational::one();
    }
    if *c == -Rational::one() {
        return if k % 2 == 0 { Rational::one() } else { -Rational::one() };
    }
    let base = if k < 0 { c.recip() } else { c.clone() };
    let mut e = k.unsigned_abs();
    let mut acc = Rational::one();
    let mut p = base;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &p;
        }
        e >>= 1;
        if e > 0 {
            p = &p * &p;
        }
    }
    acc
}

fn sign_pow(sign: i8, e: i64) -> i8 {
    if sign >= 0 || e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Errors from series-core operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    /// Inverting the zero series.
    #[error("not invertible")]
    NotInvertible,
    /// Inverting an exact non-monomial: the inverse is an infinite series,
    /// so the input must be truncated first.
    #[error("not invertible without truncation: inverse of an exact series is infinite")]
    UntruncatedInverse,
    /// Asking for a coefficient beyond the certified truncation order.
    #[error("coefficient at q^{exponent} is beyond truncation order {order}")]
    BeyondTruncation { exponent: i64, order: i64 },
}

/// A truncated Laurent series: exact rational coefficients for every
/// exponent up to and including `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    order: i64,
    coeffs: BTreeMap<i64, Rational>,
}

impl LaurentSeries {
    /// The zero series, certified through `order`.
    pub fn zero(order: i64) -> Self {
        LaurentSeries { order, coeffs: BTreeMap::new() }
    }

    /// The exactly-zero series.
    pub fn exact_zero() -> Self {
        Self::zero(EXACT_ORDER)
    }

    /// The exact constant `1`.
    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// An exact constant.
    pub fn constant(c: Rational) -> Self {
        Self::term(c, 0)
    }

    /// The exact single term `c * q^e` (zero `c` gives the exact zero series).
    pub fn term(c: Rational, e: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(e, c);
        }
        LaurentSeries { order: EXACT_ORDER, coeffs }
    }

    /// The exact monomial `q^e`.
    pub fn q_power(e: i64) -> Self {
        Self::term(Rational::one(), e)
    }

    /// Build a series from `(exponent, coefficient)` terms; repeated
    /// exponents accumulate, zeros and exponents beyond `order` are dropped.
    pub fn from_terms<I>(order: i64, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        let mut coeffs: BTreeMap<i64, Rational> = BTreeMap::new();
        for (e, c) in terms {
            if e > order || c.is_zero() {
                continue;
            }
            let entry = coeffs.entry(e).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                coeffs.remove(&e);
            }
        }
        LaurentSeries { order, coeffs }
    }

    /// Truncation order: every coefficient at exponent <= order is exact.
    pub fn order(&self) -> i64 {
        self.order
    }

    /// Whether this series is known exactly at every exponent.
    pub fn is_exact(&self) -> bool {
        self.order >= EXACT_THRESHOLD
    }

    /// Minimal exponent with nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// True when no coefficient up to the truncation order is nonzero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Effective valuation for order propagation: for a zero series the
    /// first possibly-nonzero exponent is `order + 1`.
    fn eff_valuation(&self) -> i64 {
        self.valuation().unwrap_or_else(|| self.order.saturating_add(1))
    }

    /// Stored coefficient at `e`, or zero; `e` must be within the certified
    /// range.
    pub fn coefficient(&self, e: i64) -> Result<Rational, SeriesError> {
        if e > self.order {
            return Err(SeriesError::BeyondTruncation { exponent: e, order: self.order });
        }
        Ok(self.coeffs.get(&e).cloned().unwrap_or_else(Rational::zero))
    }

    /// Iterate nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    /// Number of nonzero terms.
    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    /// Sum; the result order is the smaller of the two orders.
    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut coeffs: BTreeMap<i64, Rational> = BTreeMap::new();
        for (&e, c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            if e > order {
                continue;
            }
            let entry = coeffs.entry(e).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                coeffs.remove(&e);
            }
        }
        LaurentSeries { order, coeffs }
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        LaurentSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }

    /// Difference.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Cauchy product.  The result order is
    /// `min(a.order + v(b), b.order + v(a))` with `v` the valuation: the
    /// tightest order certifiable from truncated inputs.
    pub fn mul(&self, other: &Self) -> Self {
        let order = clamp_order(
            self.order
                .saturating_add(other.eff_valuation())
                .min(other.order.saturating_add(self.eff_valuation())),
        );
        let mut coeffs: BTreeMap<i64, Rational> = BTreeMap::new();
        for (&ea, ca) in &self.coeffs {
            // ascending maps: once past the order bound, later terms only grow
            let vb = match other.valuation() {
                Some(v) => v,
                None => break,
            };
            if ea.saturating_add(vb) > order {
                break;
            }
            for (&eb, cb) in &other.coeffs {
                let e = ea + eb;
                if e > order {
                    break;
                }
                let entry = coeffs.entry(e).or_insert_with(Rational::zero);
                *entry += ca * cb;
                if entry.is_zero() {
                    coeffs.remove(&e);
                }
            }
        }
        LaurentSeries { order, coeffs }
    }

    /// Multiply by `c * q^e` (preserves exactness).
    pub fn mul_term(&self, c: &Rational, e: i64) -> Self {
        if c.is_zero() {
            return Self::exact_zero();
        }
        LaurentSeries {
            order: clamp_order(self.order.saturating_add(e)),
            coeffs: self.coeffs.iter().map(|(&k, v)| (k + e, c * v)).collect(),
        }
    }

    /// Multiply by a scalar.
    pub fn scaled(&self, c: &Rational) -> Self {
        self.mul_term(c, 0)
    }

    /// Multiplicative inverse.  Requires a nonzero series; for a truncated
    /// input with valuation `v` the inverse is certified to `order - 2v`.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        let v = self.valuation().ok_or(SeriesError::NotInvertible)?;
        let cv = self.coeffs[&v].clone();
        if self.coeffs.len() == 1 {
            let order = if self.is_exact() { EXACT_ORDER } else { self.order - 2 * v };
            let mut coeffs = BTreeMap::new();
            coeffs.insert(-v, cv.recip());
            return Ok(LaurentSeries { order, coeffs });
        }
        if self.is_exact() {
            return Err(SeriesError::UntruncatedInverse);
        }
        // self = cv * q^v * (1 + t) with t of valuation >= 1 known to k = order - v;
        // invert the unit part by the standard recurrence.
        let k = self.order - v;
        debug_assert!(k >= 0);
        let mut unit: Vec<Rational> = vec![Rational::zero(); (k + 1) as usize];
        for (&e, c) in &self.coeffs {
            let i = e - v;
            if i <= k {
                unit[i as usize] = c / &cv;
            }
        }
        let mut inv: Vec<Rational> = vec![Rational::zero(); (k + 1) as usize];
        inv[0] = Rational::one();
        for n in 1..=(k as usize) {
            let mut s = Rational::zero();
            for i in 1..=n {
                if !unit[i].is_zero() && !inv[n - i].is_zero() {
                    s += &unit[i] * &inv[n - i];
                }
            }
            inv[n] = -s;
        }
        let cv_inv = cv.recip();
        Ok(LaurentSeries::from_terms(
            self.order - 2 * v,
            inv.into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i as i64 - v, c * &cv_inv)),
        ))
    }

    /// Integer power; negative exponents go through [`Self::invert`].
    pub fn pow(&self, k: i64) -> Result<Self, SeriesError> {
        if k == 0 {
            return Ok(Self::one());
        }
        let base = if k < 0 { self.invert()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc: Option<LaurentSeries> = None;
        let mut p = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => p.clone(),
                    Some(a) => a.mul(&p),
                });
            }
            e >>= 1;
            if e > 0 {
                p = p.mul(&p);
            }
        }
        Ok(acc.unwrap())
    }

    /// Base substitution `q -> s * q^t`: the coefficient of `q^e` moves to
    /// `q^{t e}` and picks up `s^e`.  The reported order is `t * order`.
    pub fn substitute(&self, base: SignedPower) -> Self {
        let t = base.power();
        let s = base.sign();
        let order = if self.is_exact() { EXACT_ORDER } else { t.saturating_mul(self.order) };
        LaurentSeries {
            order,
            coeffs: self
                .coeffs
                .iter()
                .map(|(&e, c)| (e * t, if sign_pow(s, e) < 0 { -c.clone() } else { c.clone() }))
                .collect(),
        }
    }

    /// Re-truncate to order `n` (never raises the certified order).
    pub fn truncated(&self, n: i64) -> Self {
        if n >= self.order {
            return self.clone();
        }
        LaurentSeries {
            order: n,
            coeffs: self.coeffs.range(..=n).map(|(&e, c)| (e, c.clone())).collect(),
        }
    }

    /// First exponent in `[lo, hi]` where the two series differ, or `None`
    /// when they agree on the whole window.  Both series must certify `hi`.
    pub fn first_mismatch(&self, other: &Self, lo: i64, hi: i64) -> Option<i64> {
        assert!(
            self.order >= hi && other.order >= hi,
            "first_mismatch window exceeds certified order"
        );
        let mut keys: Vec<i64> = self
            .coeffs
            .range(lo..=hi)
            .map(|(&e, _)| e)
            .chain(other.coeffs.range(lo..=hi).map(|(&e, _)| e))
            .collect();
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter()
            .find(|&e| self.coeffs.get(&e) != other.coeffs.get(&e))
    }

    /// Coefficients as `(exponent, "numerator/denominator")` pairs, the
    /// canonical serialization used by the CLI and FFI.
    pub fn coefficient_strings(&self) -> Vec<(i64, String)> {
        self.coeffs
            .iter()
            .map(|(&e, c)| (e, format!("{}/{}", c.numer(), c.denom())))
            .collect()
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn write_term(f: &mut fmt::Formatter<'_>, c: &Rational, e: i64) -> fmt::Result {
            let abs = c.abs();
            if e == 0 {
                write!(f, "{}", abs)
            } else {
                if !abs.is_one() {
                    write!(f, "{}*", abs)?;
                }
                if e == 1 {
                    write!(f, "q")
                } else {
                    write!(f, "q^{}", e)
                }
            }
        }
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        } else {
            for (i, (&e, c)) in self.coeffs.iter().enumerate() {
                if i == 0 {
                    if c.is_negative() {
                        write!(f, "-")?;
                    }
                } else if c.is_negative() {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
                write_term(f, c, e)?;
            }
        }
        if !self.is_exact() {
            write!(f, " + O(q^{})", self.order.saturating_add(1))?;
        }
        Ok(())
    }
}

impl std::ops::Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        LaurentSeries::add(self, rhs)
    }
}

impl std::ops::Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        LaurentSeries::sub(self, rhs)
    }
}

impl std::ops::Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        LaurentSeries::mul(self, rhs)
    }
}

impl std::ops::Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        LaurentSeries::neg(self)
    }
}

/// A nonzero rational multiple of a power of `q`: the only permitted
/// specialization of the variables `x`, `y`, `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    coeff: Rational,
    exp: i64,
}

impl Monomial {
    /// `c * q^e`; `c` must be nonzero.
    pub fn new(coeff: Rational, exp: i64) -> Self {
        assert!(!coeff.is_zero(), "Monomial coefficient must be nonzero");
        Monomial { coeff, exp }
    }

    /// `+-q^e` from an integer sign.
    pub fn unit(sign: i8, exp: i64) -> Self {
        Monomial::new(if sign < 0 { -Rational::one() } else { Rational::one() }, exp)
    }

    /// The monomial `q`.
    pub fn q() -> Self {
        Monomial::unit(1, 1)
    }

    /// The monomial `1`.
    pub fn one() -> Self {
        Monomial::unit(1, 0)
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    /// Whether the coefficient is `+1` or `-1`.
    pub fn is_unit_coeff(&self) -> bool {
        self.coeff.is_one() || self.coeff == -Rational::one()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::new(&self.coeff * &other.coeff, self.exp + other.exp)
    }

    pub fn neg(&self) -> Monomial {
        Monomial::new(-self.coeff.clone(), self.exp)
    }

    pub fn inverse(&self) -> Monomial {
        Monomial::new(self.coeff.recip(), -self.exp)
    }

    /// `(c q^e)^k` for any integer `k`.
    pub fn powi(&self, k: i64) -> Monomial {
        Monomial::new(rat_pow(&self.coeff, k), self.exp * k)
    }

    /// As an exact one-term series.
    pub fn to_series(&self) -> LaurentSeries {
        LaurentSeries::term(self.coeff.clone(), self.exp)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_series())
    }
}

/// A base substitution `q -> s * q^t` with `s` in `{+1, -1}` and `t >= 1`,
/// covering evaluations at `-q`, `q^2`, `-q^3`, ...
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedPower {
    sign: i8,
    power: i64,
}

impl SignedPower {
    pub fn new(sign: i8, power: i64) -> Self {
        assert!(sign == 1 || sign == -1, "SignedPower sign must be +-1");
        assert!(power >= 1, "SignedPower exponent must be >= 1");
        SignedPower { sign, power }
    }

    /// The identity substitution `q -> q`.
    pub fn q() -> Self {
        SignedPower { sign: 1, power: 1 }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn power(&self) -> i64 {
        self.power
    }

    /// The base as a monomial `s * q^t`.
    pub fn monomial(&self) -> Monomial {
        Monomial::unit(self.sign, self.power)
    }

    /// `(s q^t)^k` as a monomial, for any integer `k`.
    pub fn monomial_pow(&self, k: i64) -> Monomial {
        Monomial::unit(sign_pow(self.sign, k), self.power * k)
    }

    /// Sign picked up by `base^e`.
    pub fn sign_of_pow(&self, e: i64) -> i8 {
        sign_pow(self.sign, e)
    }
}

impl fmt::Display for SignedPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign < 0 { "-" } else { "" };
        if self.power == 1 {
            write!(f, "{}q", s)
        } else {
            write!(f, "{}q^{}", s, self.power)
        }
    }
}

/// Finite sum `sum_{r=lo}^{hi} term(r)` under the signed-range convention:
/// for `hi < lo` it equals `-sum_{r=hi+1}^{lo-1} term(r)`, so in particular
/// `sum_{r=0}^{-1} = 0` and ranges concatenate like integrals.
pub fn signed_range_sum<F>(lo: i64, hi: i64, mut term: F) -> LaurentSeries
where
    F: FnMut(i64) -> LaurentSeries,
{
    let (a, b, negate) = if lo <= hi { (lo, hi, false) } else { (hi + 1, lo - 1, true) };
    let mut acc = LaurentSeries::exact_zero();
    for r in a..=b {
        acc = acc.add(&term(r));
    }
    if negate {
        acc.neg()
    } else {
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(order: i64, terms: &[(i64, i64)]) -> LaurentSeries {
        LaurentSeries::from_terms(order, terms.iter().map(|&(e, c)| (e, rat(c))))
    }

    #[test]
    fn add_cancellation() {
        let a = s(10, &[(0, 1), (1, 1)]);
        let b = s(10, &[(0, -1), (2, 1)]);
        assert_eq!(a.add(&b), s(10, &[(1, 1), (2, 1)]));
    }

    #[test]
    fn add_identity() {
        let a = s(7, &[(0, 3), (2, -5)]);
        assert_eq!(a.add(&LaurentSeries::exact_zero()), a);
    }

    #[test]
    fn geometric_minus_one() {
        // 1/(1-q) to order 3, minus 1
        let geom = s(3, &[(0, 1)]).sub(&LaurentSeries::q_power(1)).invert().unwrap();
        let shifted = geom.add(&LaurentSeries::constant(rat(-1)));
        assert_eq!(shifted, s(3, &[(1, 1), (2, 1), (3, 1)]));
    }

    #[test]
    fn mul_telescopes() {
        let a = LaurentSeries::one().sub(&LaurentSeries::q_power(1)).truncated(3);
        let b = s(3, &[(0, 1), (1, 1), (2, 1), (3, 1)]);
        let p = a.mul(&b);
        assert_eq!(p.coefficient(0), Ok(rat(1)));
        for e in 1..=p.order() {
            assert_eq!(p.coefficient(e), Ok(rat(0)), "unexpected term at {}", e);
        }
    }

    #[test]
    fn mul_exponent_addition() {
        let p = LaurentSeries::q_power(-1).mul(&LaurentSeries::q_power(1));
        assert_eq!(p, LaurentSeries::one());
    }

    #[test]
    fn mul_identity() {
        let a = s(20, &[(-2, 3), (0, 1), (5, -7)]);
        assert_eq!(a.mul(&LaurentSeries::one()), a);
    }

    #[test]
    fn mul_order_respects_valuation() {
        // q^{-1} * (series to order 10): only certified to order 9
        let a = s(10, &[(0, 1), (1, 1)]);
        let p = LaurentSeries::q_power(-1).mul(&a);
        assert_eq!(p.order(), 9);
    }

    #[test]
    fn invert_geometric() {
        let inv = LaurentSeries::one()
            .sub(&LaurentSeries::q_power(1))
            .truncated(6)
            .invert()
            .unwrap();
        assert_eq!(inv, s(6, &[(0, 1), (1, 1), (2, 1), (3, 1), (4, 1), (5, 1), (6, 1)]));
    }

    #[test]
    fn invert_monomial_and_constant() {
        assert_eq!(LaurentSeries::q_power(1).invert().unwrap(), LaurentSeries::q_power(-1));
        assert_eq!(
            LaurentSeries::constant(rat(2)).invert().unwrap(),
            LaurentSeries::constant(ratio(1, 2))
        );
    }

    #[test]
    fn invert_zero_fails() {
        assert_eq!(LaurentSeries::exact_zero().invert(), Err(SeriesError::NotInvertible));
    }

    #[test]
    fn invert_exact_polynomial_requires_truncation() {
        let p = LaurentSeries::one().sub(&LaurentSeries::q_power(1));
        assert_eq!(p.invert(), Err(SeriesError::UntruncatedInverse));
    }

    #[test]
    fn substitute_scales_exponents() {
        let a = s(2, &[(0, 1), (1, 1), (2, 1)]);
        let cubed = a.substitute(SignedPower::new(1, 3));
        assert_eq!(cubed, s(6, &[(0, 1), (3, 1), (6, 1)]));
    }

    #[test]
    fn substitute_sign_by_parity() {
        let a = s(2, &[(0, 1), (1, 1), (2, 1)]);
        let m = a.substitute(SignedPower::new(-1, 1));
        assert_eq!(m, s(2, &[(0, 1), (1, -1), (2, 1)]));
    }

    #[test]
    fn substitute_negation_is_involutive() {
        let a = s(9, &[(-3, 2), (0, 5), (4, -1), (7, 3)]);
        let twice = a.substitute(SignedPower::new(-1, 1)).substitute(SignedPower::new(-1, 1));
        assert_eq!(twice, a);
    }

    #[test]
    fn signed_range_empty() {
        let z = signed_range_sum(0, -1, |_| LaurentSeries::one());
        assert!(z.is_zero() && z.is_exact());
    }

    #[test]
    fn signed_range_reversed() {
        // sum_{r=3}^{1} q^r = -q^2
        let v = signed_range_sum(3, 1, LaurentSeries::q_power);
        assert_eq!(v, LaurentSeries::term(rat(-1), 2));
    }

    #[test]
    fn signed_range_ordinary() {
        let v = signed_range_sum(0, 2, LaurentSeries::q_power);
        assert_eq!(v, s(EXACT_ORDER, &[(0, 1), (1, 1), (2, 1)]));
    }

    #[test]
    fn signed_range_additivity() {
        // sum_{a}^{b} + sum_{b+1}^{c} = sum_{a}^{c} for all a, b, c;
        // complementary ranges cancel exactly.
        let f = |r: i64| LaurentSeries::term(rat(r * r + 1), r);
        for a in -5..=5 {
            for b in -5..=5 {
                for c in -5..=5 {
                    let lhs = signed_range_sum(a, b, f).add(&signed_range_sum(b + 1, c, f));
                    assert_eq!(lhs, signed_range_sum(a, c, f), "a={} b={} c={}", a, b, c);
                }
                let cancel = signed_range_sum(a, b, f).add(&signed_range_sum(b + 1, a - 1, f));
                assert!(cancel.is_zero(), "a={} b={}", a, b);
            }
        }
    }

    #[test]
    fn coefficient_bounds() {
        let a = s(10, &[(0, 1), (1, -2)]);
        assert_eq!(a.coefficient(1), Ok(rat(-2)));
        assert_eq!(a.coefficient(5), Ok(rat(0)));
        assert_eq!(
            a.coefficient(11),
            Err(SeriesError::BeyondTruncation { exponent: 11, order: 10 })
        );
        assert_eq!(LaurentSeries::q_power(-1).coefficient(-1), Ok(rat(1)));
    }

    #[test]
    fn display_forms() {
        let a = s(12, &[(0, 1), (1, -1), (2, -1), (5, 1)]);
        assert_eq!(a.to_string(), "1 - q - q^2 + q^5 + O(q^13)");
        assert_eq!(LaurentSeries::term(ratio(3, 2), -1).to_string(), "3/2*q^-1");
        assert_eq!(LaurentSeries::exact_zero().to_string(), "0");
    }

    fn arb_series() -> impl Strategy<Value = LaurentSeries> {
        (
            5i64..40,
            proptest::collection::vec(((-8i64..30), (-9i64..=9)), 0..10),
        )
            .prop_map(|(order, terms)| {
                LaurentSeries::from_terms(order, terms.into_iter().map(|(e, c)| (e, rat(c))))
            })
    }

    fn arb_unit_series() -> impl Strategy<Value = LaurentSeries> {
        (
            5i64..40,
            proptest::collection::vec(((1i64..30), (-9i64..=9)), 0..10),
        )
            .prop_map(|(order, terms)| {
                let mut s = LaurentSeries::from_terms(order, terms.into_iter().map(|(e, c)| (e, rat(c))));
                s = s.add(&LaurentSeries::one());
                s.truncated(order)
            })
    }

    fn assert_agree(a: &LaurentSeries, b: &LaurentSeries) {
        let hi = a.order().min(b.order());
        let lo = a
            .valuation()
            .unwrap_or(0)
            .min(b.valuation().unwrap_or(0))
            .min(0);
        assert_eq!(a.first_mismatch(b, lo, hi), None, "{} vs {}", a, b);
    }

    proptest! {
        #[test]
        fn ring_add_commutes(a in arb_series(), b in arb_series()) {
            assert_agree(&a.add(&b), &b.add(&a));
        }

        #[test]
        fn ring_mul_commutes(a in arb_series(), b in arb_series()) {
            assert_agree(&a.mul(&b), &b.mul(&a));
        }

        #[test]
        fn ring_add_assoc(a in arb_series(), b in arb_series(), c in arb_series()) {
            assert_agree(&a.add(&b).add(&c), &a.add(&b.add(&c)));
        }

        #[test]
        fn ring_mul_assoc(a in arb_series(), b in arb_series(), c in arb_series()) {
            assert_agree(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c)));
        }

        #[test]
        fn ring_distributes(a in arb_series(), b in arb_series(), c in arb_series()) {
            assert_agree(&a.mul(&b.add(&c)), &a.mul(&b).add(&a.mul(&c)));
        }

        #[test]
        fn inverse_multiplies_to_one(a in arb_unit_series()) {
            let inv = a.invert().unwrap();
            let p = a.mul(&inv);
            assert_agree(&p, &LaurentSeries::one().truncated(p.order()));
        }

        #[test]
        fn substitute_is_ring_hom(a in arb_series(), b in arb_series(), t in 1i64..4, s in prop::bool::ANY) {
            let base = SignedPower::new(if s { -1 } else { 1 }, t);
            assert_agree(&a.add(&b).substitute(base), &a.substitute(base).add(&b.substitute(base)));
            assert_agree(&a.mul(&b).substitute(base), &a.substitute(base).mul(&b.substitute(base)));
        }
    }
}
