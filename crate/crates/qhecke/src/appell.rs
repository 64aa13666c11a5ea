//! The Appell-Lerch sum `m(x, q, z)`.
//!
//! `m(x, q, z) = (1/j(z;q)) sum_r (-1)^r q^{r(r-1)/2} z^r / (1 - q^{r-1} x z)`
//! for monomial `x` and `z` over a base `q^p`, with neither `z` nor `xz` an
//! integral power of the base.  Each denominator `1 - d_r` is expanded
//! geometrically according to the sign of the exponent of
//! `d_r = q^{p(r-1)} x z`; a term whose `d_r` is exactly `1` is a pole, and
//! poles are only flagged lazily for the `r` that actually contribute below
//! the truncation order.

use crate::series::{binom2, rat_pow, LaurentSeries, Monomial, Rational, SignedPower};
use crate::support::{convex_window, quadratic_vertex_hint};
use crate::theta::theta_product_base;
use num::traits::{One, Zero};

/// Errors evaluating an Appell-Lerch sum.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AppellError {
    #[error("Appell-Lerch base power must be >= 1, got {0}")]
    InvalidBase(i64),
    #[error("z = q^{exp} is an integral power of the base q^{base}, so j(z; q^{base}) vanishes")]
    ZIntegralPower { exp: i64, base: i64 },
    #[error("pole in Appell-Lerch term at r = {r}")]
    TermPole { r: i64 },
}

/// The data of `m(x, q^p, z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppellSpec {
    x: Monomial,
    base_power: i64,
    z: Monomial,
}

impl AppellSpec {
    pub fn new(x: Monomial, base_power: i64, z: Monomial) -> Result<Self, AppellError> {
        if base_power < 1 {
            return Err(AppellError::InvalidBase(base_power));
        }
        Ok(AppellSpec { x, base_power, z })
    }

    pub fn x(&self) -> &Monomial {
        &self.x
    }

    pub fn base_power(&self) -> i64 {
        self.base_power
    }

    pub fn z(&self) -> &Monomial {
        &self.z
    }
}

/// `m(x, q^p, z)` truncated at `order`.
pub fn appell_m(spec: &AppellSpec, order: i64) -> Result<LaurentSeries, AppellError> {
    let p = spec.base_power;
    if spec.z.coeff().is_one() && spec.z.exp().rem_euclid(p) == 0 {
        return Err(AppellError::ZIntegralPower { exp: spec.z.exp(), base: p });
    }
    // j(z; q^p) can have nonzero valuation; retry with a larger margin in
    // the rare case the certified order of the product falls short.
    let mut margin = 4;
    loop {
        let result = appell_at(spec, order, margin)?;
        if result.order() >= order {
            return Ok(result.truncated(order));
        }
        margin *= 4;
        assert!(margin <= 1 << 20, "appell_m failed to reach requested order");
    }
}

fn appell_at(spec: &AppellSpec, order: i64, margin: i64) -> Result<LaurentSeries, AppellError> {
    let p = spec.base_power;
    let ze = spec.z.exp();
    let zc = spec.z.coeff();
    let exponent = |k: i64| p * binom2(k) + ze * k;
    let hint = quadratic_vertex_hint(p, ze);
    let v_jz = exponent(hint).min(exponent(hint - 1)).min(exponent(hint + 1));

    let inner_order = order + v_jz.abs() + margin;
    let theta_order = order + 2 * v_jz.abs() + margin;

    let jz = theta_product_base(&spec.z, SignedPower::new(1, p), theta_order);
    let jz_inv = jz.invert().expect("j(z; q^p) is nonzero for admissible z");

    let window = convex_window(exponent, hint, inner_order);
    let mut sum = LaurentSeries::zero(inner_order);
    if let Some((lo, hi)) = window {
        for r in lo..=hi {
            let base_exp = exponent(r);
            let d_exp = p * (r - 1) + spec.x.exp() + ze;
            let d_coeff = spec.x.coeff() * zc;
            // true valuation of the term; d_exp < 0 shifts it up by |d_exp|
            if base_exp + (-d_exp).max(0) > inner_order {
                continue;
            }
            if d_exp == 0 && d_coeff.is_one() {
                return Err(AppellError::TermPole { r });
            }
            let geom = expand_geometric(&d_coeff, d_exp, inner_order - base_exp);
            let mut pref = rat_pow(zc, r);
            if r.rem_euclid(2) == 1 {
                pref = -pref;
            }
            sum = sum.add(&geom.mul_term(&pref, base_exp));
        }
    }
    Ok(jz_inv.mul(&sum))
}

/// `1/(1 - c q^k)` to the given order: geometric for `k > 0`, the exact
/// scalar `1/(1-c)` for `k = 0`, and `-sum_{i>=1} c^{-i} q^{-i k}` for
/// `k < 0`.
fn expand_geometric(c: &Rational, k: i64, order: i64) -> LaurentSeries {
    if k == 0 {
        let denom = Rational::one() - c;
        assert!(!denom.is_zero(), "pole must be caught before expansion");
        return LaurentSeries::constant(denom.recip()).truncated(order);
    }
    if k > 0 {
        let mut terms = Vec::new();
        let mut i = 0;
        while i * k <= order {
            terms.push((i * k, rat_pow(c, i)));
            i += 1;
        }
        LaurentSeries::from_terms(order, terms)
    } else {
        let c_inv = c.recip();
        let mut terms = Vec::new();
        let mut i = 1;
        while i * (-k) <= order {
            terms.push((i * (-k), -rat_pow(&c_inv, i)));
            i += 1;
        }
        LaurentSeries::from_terms(order, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{rat, ratio};

    fn spec(x: Monomial, p: i64, z: Monomial) -> AppellSpec {
        AppellSpec::new(x, p, z).unwrap()
    }

    #[test]
    fn m_q_q2_minus_one_is_one_half() {
        let m = appell_m(&spec(Monomial::q(), 2, Monomial::unit(-1, 0)), 80).unwrap();
        assert_eq!(m, LaurentSeries::constant(ratio(1, 2)).truncated(80));
    }

    #[test]
    fn m_q_q3_minus_one_leading_terms() {
        let m = appell_m(&spec(Monomial::q(), 3, Monomial::unit(-1, 0)), 8).unwrap();
        let expected: Vec<(i64, Rational)> = [
            (0, ratio(1, 2)),
            (1, ratio(-1, 2)),
            (2, rat(1)),
            (3, ratio(-1, 2)),
            (4, ratio(1, 2)),
            (5, ratio(-3, 2)),
            (6, ratio(3, 2)),
            (7, ratio(-3, 2)),
            (8, rat(2)),
        ]
        .into_iter()
        .collect();
        assert_eq!(m, LaurentSeries::from_terms(8, expected));
    }

    #[test]
    fn integral_power_z_rejected() {
        let err = appell_m(&spec(Monomial::unit(-1, 3), 1, Monomial::q()), 20).unwrap_err();
        assert_eq!(err, AppellError::ZIntegralPower { exp: 1, base: 1 });
        let err = appell_m(&spec(Monomial::q(), 2, Monomial::unit(1, 4)), 20).unwrap_err();
        assert_eq!(err, AppellError::ZIntegralPower { exp: 4, base: 2 });
    }

    #[test]
    fn pole_in_term_identified() {
        // x z = q^2 over base q^2: d_0 = q^{-2} x z = 1 exactly
        let err = appell_m(&spec(Monomial::unit(-1, 1), 2, Monomial::unit(-1, 1)), 20).unwrap_err();
        assert_eq!(err, AppellError::TermPole { r: 0 });
    }

    #[test]
    fn generic_z_window_stability() {
        // doubling the truncation (hence every enumeration window) must not
        // change any coefficient at or below the original order
        for (x, p, z) in [
            (Monomial::one(), 8, Monomial::q()),
            (Monomial::one(), 8, Monomial::unit(1, 3)),
            (Monomial::q(), 3, Monomial::unit(-1, 0)),
            (Monomial::unit(-1, 2), 6, Monomial::unit(-1, 0)),
        ] {
            let s = spec(x, p, z);
            let once = appell_m(&s, 40).unwrap();
            let twice = appell_m(&s, 80).unwrap().truncated(40);
            assert_eq!(once, twice);
        }
    }

    #[test]
    fn negative_exponent_denominators() {
        // m(q^{-3}, q, -1) forces d_r with negative exponents at small r
        let m = appell_m(&spec(Monomial::unit(1, -3), 1, Monomial::unit(-1, 0)), 30).unwrap();
        let again = appell_m(&spec(Monomial::unit(1, -3), 1, Monomial::unit(-1, 0)), 60).unwrap();
        assert_eq!(m, again.truncated(30));
    }
}
