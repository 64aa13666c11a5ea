//! Jacobi triple-product theta functions and the `J` shorthands.
//!
//! `j(x; q) = (x)_inf (q/x)_inf (q)_inf = sum_n (-1)^n q^{n(n-1)/2} x^n`,
//! constructible both ways so the triple product identity is a standing
//! regression check rather than an assumption:
//!
//! - [`theta_sum`] / [`theta_product`]: the two constructions of `j(x; q^m)`
//! - [`theta_sum_base`] / [`theta_product_base`]: same over a signed base
//!   `+-q^t` (needed by shift-law corrections when the base carries a sign)
//! - [`j_power`] (`J_{a,m}`), [`j_power_bar`] (`Jbar_{a,m}`), [`euler`]
//!   (`J_m`, the Euler product over `q^m`)
//!
//! Arguments are restricted to `+-q^e`: every theta in scope has that form,
//! and a factor `1 - c q^k` with `k < 0` is rewritten exactly as
//! `-c q^k (1 - c^{-1} q^{-k})` so the product form stays unit-leading.

use crate::series::{binom2, rat, LaurentSeries, Monomial, Rational, SignedPower};
use crate::support::{convex_window, quadratic_vertex_hint};
use num::traits::One;

/// Errors constructing a theta specification.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ThetaError {
    #[error("theta modulus must be >= 1, got {0}")]
    InvalidModulus(i64),
    #[error("theta argument coefficient must be +1 or -1")]
    NonUnitArgument,
}

/// The data of `j(x; q^m)`: argument `x = +-q^e` and modulus `m >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaSpec {
    arg: Monomial,
    modulus: i64,
}

impl ThetaSpec {
    pub fn new(arg: Monomial, modulus: i64) -> Result<Self, ThetaError> {
        if modulus < 1 {
            return Err(ThetaError::InvalidModulus(modulus));
        }
        if !arg.is_unit_coeff() {
            return Err(ThetaError::NonUnitArgument);
        }
        Ok(ThetaSpec { arg, modulus })
    }

    pub fn arg(&self) -> &Monomial {
        &self.arg
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }
}

/// `j(x; q^m)` as the truncated bilateral sum
/// `sum_n (-1)^n q^{m n(n-1)/2} x^n`, including every `n` whose term
/// exponent is at most `n`.
pub fn theta_sum(spec: &ThetaSpec, order: i64) -> LaurentSeries {
    theta_sum_base(&spec.arg, SignedPower::new(1, spec.modulus), order)
}

/// `j(x; q^m)` as the truncated triple product.
pub fn theta_product(spec: &ThetaSpec, order: i64) -> LaurentSeries {
    theta_product_base(&spec.arg, SignedPower::new(1, spec.modulus), order)
}

/// Bilateral sum form of `j(x; u)` over a signed base `u = +-q^t`.
pub fn theta_sum_base(arg: &Monomial, base: SignedPower, order: i64) -> LaurentSeries {
    let t = base.power();
    let xe = arg.exp();
    let exponent = |n: i64| t * binom2(n) + xe * n;
    let window = convex_window(exponent, quadratic_vertex_hint(t, xe), order);
    let (lo, hi) = match window {
        Some(w) => w,
        None => return LaurentSeries::zero(order),
    };
    LaurentSeries::from_terms(
        order,
        (lo..=hi).map(|n| {
            let mut c = crate::series::rat_pow(arg.coeff(), n);
            if n.rem_euclid(2) == 1 {
                c = -c;
            }
            if base.sign_of_pow(binom2(n)) < 0 {
                c = -c;
            }
            (exponent(n), c)
        }),
    )
}

/// Triple product form of `j(x; u)` over a signed base `u = +-q^t`:
/// `(x; u)_inf (u/x; u)_inf (u; u)_inf`, each factor truncated at the first
/// index contributing only beyond `order`.
pub fn theta_product_base(arg: &Monomial, base: SignedPower, order: i64) -> LaurentSeries {
    assert!(arg.is_unit_coeff(), "theta argument coefficient must be +-1");
    let t = base.power();
    let s = base.sign();
    let c = if arg.coeff().is_one() { 1i8 } else { -1i8 };
    let e = arg.exp();

    // factor streams (gamma, k) for 1 - gamma q^k, gamma = +-1
    // (x; u)_i:    gamma = s^i c,      k = t i + e,        i >= 0
    // (u/x; u)_i:  gamma = s^{i+1} c,  k = t (i+1) - e,    i >= 0
    // (u; u)_i:    gamma = s^i,        k = t i,            i >= 1
    let mut pref_coeff = Rational::one();
    let mut pref_exp = 0i64;
    let mut unit_exps: Vec<(i8, i64)> = Vec::new();

    let push = |gamma: i8, k: i64,
                    pref_coeff: &mut Rational,
                    pref_exp: &mut i64,
                    unit_exps: &mut Vec<(i8, i64)>|
     -> bool {
        if k > 0 {
            unit_exps.push((gamma, k));
            return true;
        }
        if k == 0 {
            if gamma > 0 {
                return false; // factor 1 - 1 = 0: the whole product vanishes
            }
            *pref_coeff *= rat(2);
            return true;
        }
        // 1 - gamma q^k = (-gamma q^k)(1 - gamma q^{-k}) for k < 0
        *pref_coeff *= rat(-i64::from(gamma));
        *pref_exp += k;
        unit_exps.push((gamma, -k));
        true
    };

    // finitely many non-positive-exponent factors, handled exactly first
    let mut i = 0;
    while t * i + e <= 0 {
        let gamma = if sign_mul(pow_sign(s, i), c) { 1 } else { -1 };
        if !push(gamma, t * i + e, &mut pref_coeff, &mut pref_exp, &mut unit_exps) {
            return LaurentSeries::zero(order);
        }
        i += 1;
    }
    let first_pos_x = i;
    let mut i = 0;
    while t * (i + 1) - e <= 0 {
        let gamma = if sign_mul(pow_sign(s, i + 1), c) { 1 } else { -1 };
        if !push(gamma, t * (i + 1) - e, &mut pref_coeff, &mut pref_exp, &mut unit_exps) {
            return LaurentSeries::zero(order);
        }
        i += 1;
    }
    let first_pos_qx = i;

    // everything beyond exponent cap contributes 1 modulo q^{cap+1}
    let cap = order - pref_exp;
    let mut i = first_pos_x;
    while t * i + e <= cap {
        unit_exps.push((if sign_mul(pow_sign(s, i), c) { 1 } else { -1 }, t * i + e));
        i += 1;
    }
    let mut i = first_pos_qx;
    while t * (i + 1) - e <= cap {
        unit_exps.push((if sign_mul(pow_sign(s, i + 1), c) { 1 } else { -1 }, t * (i + 1) - e));
        i += 1;
    }
    let mut i = 1;
    while t * i <= cap {
        unit_exps.push((pow_sign(s, i), t * i));
        i += 1;
    }

    let mut acc = LaurentSeries::one().truncated(cap);
    for (gamma, k) in unit_exps {
        let factor = LaurentSeries::one().sub(&LaurentSeries::term(rat(i64::from(gamma)), k));
        acc = acc.mul(&factor);
    }
    acc.mul_term(&pref_coeff, pref_exp).truncated(order)
}

fn pow_sign(s: i8, e: i64) -> i8 {
    if s >= 0 || e % 2 == 0 {
        1
    } else {
        -1
    }
}

fn sign_mul(a: i8, c: i8) -> bool {
    a * c > 0
}

/// `J_{a,m} = j(q^a; q^m)`.
pub fn j_power(a: i64, m: i64, order: i64) -> LaurentSeries {
    theta_product_base(&Monomial::unit(1, a), SignedPower::new(1, m), order)
}

/// `Jbar_{a,m} = j(-q^a; q^m)`.
pub fn j_power_bar(a: i64, m: i64, order: i64) -> LaurentSeries {
    theta_product_base(&Monomial::unit(-1, a), SignedPower::new(1, m), order)
}

/// `J_m = J_{m,3m} = prod_{i>=1} (1 - q^{m i})`, the Euler product.
pub fn euler(m: i64, order: i64) -> LaurentSeries {
    j_power(m, 3 * m, order)
}
