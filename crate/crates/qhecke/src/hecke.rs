//! Hecke-Rogers double sums and false theta building blocks.
//!
//! The double sums
//!
//! ```text
//! f_{a,b,c}(x,y,q) = (sum_{r,s>=0} - sum_{r,s<0}) (-1)^{r+s} x^r y^s q^{a C(r,2) + b r s + c C(s,2)}
//! g_{a,b,c}(x,y,q) = (sum_{r,s>=0} + sum_{r,s<0}) (-1)^{r+s} x^r y^s q^{a C(r,2) + b r s + c C(s,2)}
//! ```
//!
//! with `a, c > 0` and `b > -sqrt(ac)`, plus:
//!
//! - [`enumerate_support`]: exactly the lattice points contributing at or
//!   below a truncation order, found per quadrant by exact integer interval
//!   arithmetic (no floating-point root finding)
//! - [`f_flip_rhs`] / [`g_flip_rhs`]: right-hand sides of the flip laws
//!   `f = -(q^{a+b+c}/xy) f(q^{2a+b}/x, q^{2c+b}/y, q)` (minus for f, plus
//!   for g)
//! - [`f_shift_rhs`] / [`g_shift_rhs`]: right-hand sides of the index-shift
//!   laws for any integers `l, k`, with correction sums interpreted through
//!   the signed-range convention
//! - [`sg_theta`]: bilateral sums `sum_n sg(n) w^n u^{quad C(n,2) + lin n}`
//! - [`false_theta`]: one-sided or sg-weighted theta-like sums, optionally
//!   twisted by a residue character
//!
//! Forms with `b >= sqrt(ac)` (e.g. `(1,3,1)`) are accepted: on each
//! same-sign quadrant the cross term is nonnegative, so supports stay
//! finite.  Bilateral sums are always computed bilaterally, never by a
//! "double the one-sided sum" shortcut.

use crate::series::{
    binom2, rat, rat_pow, signed_range_sum, LaurentSeries, Monomial, Rational, SignedPower,
};
use crate::support::{convex_window, quadratic_vertex_hint};
use crate::theta::theta_product_base;

/// `sg(r)`: `1` for `r >= 0`, `-1` for `r < 0`.
pub fn sg(r: i64) -> i8 {
    if r >= 0 {
        1
    } else {
        -1
    }
}

/// Errors constructing Hecke-Rogers specifications.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HeckeError {
    #[error("indefinite beyond convergence condition: need a, c > 0 and b > -sqrt(ac), got ({a}, {b}, {c})")]
    IndefiniteForm { a: i64, b: i64, c: i64 },
    #[error("false theta quadratic coefficient must be positive")]
    NonPositiveQuadratic,
    #[error("false theta exponent (A n^2 + B n)/2 must be integral: A and B must have equal parity")]
    FractionalExponent,
    #[error("residue filter must list one sign per residue class")]
    BadResidueFilter,
}

/// The exponent form `a C(r,2) + b r s + c C(s,2)` with `a, c > 0` and
/// `b > -sqrt(ac)` (for integers: `b >= 0` or `b^2 < ac`).
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    a: i64,
    b: i64,
    c: i64,
}

impl QuadraticForm {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self, HeckeError> {
        if a > 0 && c > 0 && (b >= 0 || b * b < a * c) {
            Ok(QuadraticForm { a, b, c })
        } else {
            Err(HeckeError::IndefiniteForm { a, b, c })
        }
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    /// `a C(r,2) + b r s + c C(s,2)`.
    pub fn exponent(&self, r: i64, s: i64) -> i64 {
        self.a * binom2(r) + self.b * r * s + self.c * binom2(s)
    }
}

/// Arguments of `f_{a,b,c}(x, y, base)` / `g_{a,b,c}(x, y, base)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeSpec {
    form: QuadraticForm,
    x: Monomial,
    y: Monomial,
    base: SignedPower,
}

impl HeckeSpec {
    pub fn new(form: QuadraticForm, x: Monomial, y: Monomial, base: SignedPower) -> Self {
        HeckeSpec { form, x, y, base }
    }

    pub fn form(&self) -> QuadraticForm {
        self.form
    }

    pub fn x(&self) -> &Monomial {
        &self.x
    }

    pub fn y(&self) -> &Monomial {
        &self.y
    }

    pub fn base(&self) -> SignedPower {
        self.base
    }

    /// Exponent of `q` in the `(r, s)` summand.
    pub fn term_exponent(&self, r: i64, s: i64) -> i64 {
        self.base.power() * self.form.exponent(r, s) + self.x.exp() * r + self.y.exp() * s
    }

    /// Rational coefficient of the `(r, s)` summand (quadrant sign excluded).
    fn term_coeff(&self, r: i64, s: i64) -> Rational {
        let mut coef = rat_pow(self.x.coeff(), r) * rat_pow(self.y.coeff(), s);
        if (r + s).rem_euclid(2) == 1 {
            coef = -coef;
        }
        if self.base.sign_of_pow(self.form.exponent(r, s)) < 0 {
            coef = -coef;
        }
        coef
    }
}

/// Smallest value of the convex `t*C(v,2) + l*v` over `v >= lo`.
fn clamped_quadratic_min(t: i64, l: i64, lo: i64) -> i64 {
    debug_assert!(t > 0);
    let f = |v: i64| t * binom2(v) + l * v;
    let mut m = quadratic_vertex_hint(t, l);
    while f(m - 1) < f(m) {
        m -= 1;
    }
    while f(m + 1) < f(m) {
        m += 1;
    }
    f(m.max(lo))
}

/// All `(u, v)` with `u, v >= 0` and
/// `ta*u*(u-1) + 2*tb*u*v + tc*v*(v-1) + 2*lu*u + 2*lv*v <= bound2`.
///
/// Rows are finished exactly: for fixed `u` the admissible `v` form an
/// interval of an upward parabola.  The `u` loop stops once a convex lower
/// bound for the row minimum exceeds `bound2` and has started increasing;
/// for `b >= 0` the bound drops the nonnegative cross term, for `b < 0`
/// (positive definite) it is the real vertex bound scaled by `4*tc`.
fn quadrant_points(
    ta: i64,
    tb: i64,
    tc: i64,
    lu: i64,
    lv: i64,
    bound2: i64,
    out: &mut Vec<(i64, i64)>,
) {
    let e2 = |u: i64, v: i64| -> i64 {
        ta * u * (u - 1) + 2 * tb * u * v + tc * v * (v - 1) + 2 * lu * u + 2 * lv * v
    };
    // constant part of the separable bound (only used when tb >= 0)
    let g0 = 2 * clamped_quadratic_min(tc, lv, 0);

    let mut prev_rho: Option<i128> = None;
    let mut u: i64 = 0;
    loop {
        // exact admissible interval of v >= 0 in row u
        let row = |v: i64| e2(u, v);
        let hint = quadratic_vertex_hint(tc, tb * u + lv);
        if let Some((vlo, vhi)) = convex_window(row, hint, bound2) {
            let vlo = vlo.max(0);
            if vlo <= vhi {
                // the window is an interval of the full parabola; clamping at
                // zero keeps exactly the quadrant part
                for v in vlo..=vhi {
                    out.push((u, v));
                }
            }
        }

        // termination bound for the remaining rows
        let (rho, threshold): (i128, i128) = if tb >= 0 {
            (
                (ta * u * (u - 1) + 2 * lu * u + g0) as i128,
                bound2 as i128,
            )
        } else {
            let row_const = (ta * u * (u - 1) + 2 * lu * u) as i128;
            let bv = (2 * tb * u - tc + 2 * lv) as i128;
            (
                4 * (tc as i128) * row_const - bv * bv,
                4 * (tc as i128) * (bound2 as i128),
            )
        };
        if rho > threshold && prev_rho.is_some_and(|p| rho >= p) {
            break;
        }
        prev_rho = Some(rho);
        u += 1;
    }
}

/// Exactly the lattice points with `sg(r) = sg(s)` whose term exponent is
/// at most `order`: the `(r, s >= 0)` quadrant followed by `(r, s < 0)`.
pub fn enumerate_support(spec: &HeckeSpec, order: i64) -> Vec<(i64, i64)> {
    let t = spec.base.power();
    let (a, b, c) = (spec.form.a, spec.form.b, spec.form.c);
    let (xe, ye) = (spec.x.exp(), spec.y.exp());
    let mut pts = Vec::new();

    // (+,+) quadrant in place
    quadrant_points(t * a, t * b, t * c, xe, ye, 2 * order, &mut pts);

    // (-,-) quadrant via (r, s) = (-1-u, -1-v), which keeps the quadratic
    // part and sends the linear part to (t(2a+b) - xe, t(2c+b) - ye) plus a
    // constant t(a+b+c) - xe - ye
    let shift = t * (a + b + c) - xe - ye;
    let start = pts.len();
    quadrant_points(
        t * a,
        t * b,
        t * c,
        t * (2 * a + b) - xe,
        t * (2 * c + b) - ye,
        2 * (order - shift),
        &mut pts,
    );
    for p in &mut pts[start..] {
        *p = (-1 - p.0, -1 - p.1);
    }
    pts
}

fn double_sum(spec: &HeckeSpec, order: i64, negative_quadrant_sign: i8) -> LaurentSeries {
    LaurentSeries::from_terms(
        order,
        enumerate_support(spec, order).into_iter().map(|(r, s)| {
            let mut c = spec.term_coeff(r, s);
            if r < 0 && negative_quadrant_sign < 0 {
                c = -c;
            }
            (spec.term_exponent(r, s), c)
        }),
    )
}

/// `f_{a,b,c}(x, y, base)` truncated at `order`.
pub fn hecke_f(spec: &HeckeSpec, order: i64) -> LaurentSeries {
    double_sum(spec, order, -1)
}

/// `g_{a,b,c}(x, y, base)` truncated at `order`.
pub fn hecke_g(spec: &HeckeSpec, order: i64) -> LaurentSeries {
    double_sum(spec, order, 1)
}

/// The flip image of a spec: prefactor `base^{a+b+c}/(xy)` (sign handled by
/// the caller) and the spec with `(x, y) -> (base^{2a+b}/x, base^{2c+b}/y)`.
pub fn flipped_spec(spec: &HeckeSpec) -> (Monomial, HeckeSpec) {
    let (a, b, c) = (spec.form.a, spec.form.b, spec.form.c);
    let u = spec.base;
    let pref = u
        .monomial_pow(a + b + c)
        .mul(&spec.x.powi(-1))
        .mul(&spec.y.powi(-1));
    let fx = u.monomial_pow(2 * a + b).mul(&spec.x.powi(-1));
    let fy = u.monomial_pow(2 * c + b).mul(&spec.y.powi(-1));
    (pref, HeckeSpec::new(spec.form, fx, fy, u))
}

/// Right-hand side of the f-flip law:
/// `-(base^{a+b+c}/xy) f_{a,b,c}(base^{2a+b}/x, base^{2c+b}/y, base)`.
pub fn f_flip_rhs(spec: &HeckeSpec, order: i64) -> LaurentSeries {
    let (pref, flipped) = flipped_spec(spec);
    let inner = hecke_f(&flipped, order - pref.exp());
    inner
        .mul_term(&-pref.coeff().clone(), pref.exp())
        .truncated(order)
}

/// Right-hand side of the g-flip law (plus sign).
pub fn g_flip_rhs(spec: &HeckeSpec, order: i64) -> LaurentSeries {
    let (pref, flipped) = flipped_spec(spec);
    let inner = hecke_g(&flipped, order - pref.exp());
    inner.mul_term(pref.coeff(), pref.exp()).truncated(order)
}

/// Shift prefactor `(-x)^l (-y)^k base^{a C(l,2) + b l k + c C(k,2)}` and
/// the shifted spec `(base^{al+bk} x, base^{bl+ck} y)`.
fn shifted_spec(spec: &HeckeSpec, l: i64, k: i64) -> (Monomial, HeckeSpec) {
    let (a, b, c) = (spec.form.a, spec.form.b, spec.form.c);
    let u = spec.base;
    let pref = spec
        .x
        .neg()
        .powi(l)
        .mul(&spec.y.neg().powi(k))
        .mul(&u.monomial_pow(spec.form.exponent(l, k)));
    let sx = u.monomial_pow(a * l + b * k).mul(&spec.x);
    let sy = u.monomial_pow(b * l + c * k).mul(&spec.y);
    (pref, HeckeSpec::new(spec.form, sx, sy, u))
}

/// `base^k` as a signed base (requires `k >= 1`).
fn base_pow(u: SignedPower, k: i64) -> SignedPower {
    SignedPower::new(u.sign_of_pow(k), u.power() * k)
}

/// Right-hand side of the f-shift law for any integers `l, k`:
/// the shifted double sum plus theta corrections
/// `sum_{m=0}^{l-1} (-x)^m base^{a C(m,2)} j(base^{mb} y; base^c)` (and the
/// symmetric sum), with the finite ranges read through the signed-range
/// convention.
pub fn f_shift_rhs(spec: &HeckeSpec, l: i64, k: i64, order: i64) -> LaurentSeries {
    let (a, b, c) = (spec.form.a, spec.form.b, spec.form.c);
    let u = spec.base;
    let (pref, shifted) = shifted_spec(spec, l, k);
    let main = hecke_f(&shifted, order - pref.exp()).mul_term(pref.coeff(), pref.exp());

    let corr_x = signed_range_sum(0, l - 1, |m| {
        let pm = spec.x.neg().powi(m).mul(&u.monomial_pow(a * binom2(m)));
        let arg = u.monomial_pow(m * b).mul(&spec.y);
        theta_product_base(&arg, base_pow(u, c), order - pm.exp()).mul_term(pm.coeff(), pm.exp())
    });
    let corr_y = signed_range_sum(0, k - 1, |m| {
        let pm = spec.y.neg().powi(m).mul(&u.monomial_pow(c * binom2(m)));
        let arg = u.monomial_pow(m * b).mul(&spec.x);
        theta_product_base(&arg, base_pow(u, a), order - pm.exp()).mul_term(pm.coeff(), pm.exp())
    });
    main.add(&corr_x).add(&corr_y).truncated(order)
}

/// Right-hand side of the g-shift law for any integers `l, k`: the shifted
/// double sum, sg-weighted bilateral corrections, and the doubly finite
/// `-2 sum sum` term, all finite ranges read through the signed-range
/// convention.
pub fn g_shift_rhs(spec: &HeckeSpec, l: i64, k: i64, order: i64) -> LaurentSeries {
    let (a, b, c) = (spec.form.a, spec.form.b, spec.form.c);
    let u = spec.base;
    let (pref, shifted) = shifted_spec(spec, l, k);
    let main = hecke_g(&shifted, order - pref.exp()).mul_term(pref.coeff(), pref.exp());

    let corr_x = signed_range_sum(0, l - 1, |r| {
        let pm = spec.x.neg().powi(r).mul(&u.monomial_pow(a * binom2(r)));
        sg_theta(c, b * r, &spec.y.neg(), u, order - pm.exp()).mul_term(pm.coeff(), pm.exp())
    });
    let corr_y = signed_range_sum(0, k - 1, |s| {
        let pm = spec.y.neg().powi(s).mul(&u.monomial_pow(c * binom2(s)));
        sg_theta(a, b * s, &spec.x.neg(), u, order - pm.exp()).mul_term(pm.coeff(), pm.exp())
    });
    let corr_d = signed_range_sum(0, l - 1, |r| {
        signed_range_sum(0, k - 1, |s| {
            spec.x
                .neg()
                .powi(r)
                .mul(&spec.y.neg().powi(s))
                .mul(&u.monomial_pow(spec.form.exponent(r, s)))
                .to_series()
        })
    });
    main.add(&corr_x)
        .add(&corr_y)
        .sub(&corr_d.scaled(&rat(2)))
        .truncated(order)
}

/// Bilateral sg-weighted theta slice
/// `sum_{n in Z} sg(n) w^n base^{quad C(n,2) + lin n}`, truncated at `order`.
/// Requires `quad > 0`.
pub fn sg_theta(quad: i64, lin: i64, weight: &Monomial, base: SignedPower, order: i64) -> LaurentSeries {
    assert!(quad > 0, "sg_theta quadratic coefficient must be positive");
    let t = base.power();
    let exponent = |n: i64| t * (quad * binom2(n) + lin * n) + weight.exp() * n;
    let hint = quadratic_vertex_hint(t * quad, t * lin + weight.exp());
    let window = convex_window(exponent, hint, order);
    let (lo, hi) = match window {
        Some(w) => w,
        None => return LaurentSeries::zero(order),
    };
    LaurentSeries::from_terms(
        order,
        (lo..=hi).map(|n| {
            let mut coef = rat_pow(weight.coeff(), n);
            if sg(n) < 0 {
                coef = -coef;
            }
            if base.sign_of_pow(quad * binom2(n) + lin * n) < 0 {
                coef = -coef;
            }
            (exponent(n), coef)
        }),
    )
}

/// Sign mode of a false theta sum.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum FalseThetaSign {
    Plus,
    Alternating,
}

/// Support of a false theta sum.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum FalseThetaSupport {
    NonNegative,
    SgBilateral,
}

/// Character twist: one sign (or 0 to omit the class) per residue mod the
/// modulus, e.g. `[0, 1, -1]` for the quadratic character mod 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueFilter {
    pub modulus: i64,
    pub signs: Vec<i8>,
}

/// `sum_n sign(n) q^{(A n^2 + B n)/2 + C}` over the chosen support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FalseThetaSpec {
    quad2: i64,
    lin2: i64,
    offset: i64,
    sign: FalseThetaSign,
    support: FalseThetaSupport,
    filter: Option<ResidueFilter>,
}

impl FalseThetaSpec {
    pub fn new(
        quad2: i64,
        lin2: i64,
        offset: i64,
        sign: FalseThetaSign,
        support: FalseThetaSupport,
        filter: Option<ResidueFilter>,
    ) -> Result<Self, HeckeError> {
        if quad2 <= 0 {
            return Err(HeckeError::NonPositiveQuadratic);
        }
        if (quad2 + lin2).rem_euclid(2) != 0 {
            return Err(HeckeError::FractionalExponent);
        }
        if let Some(f) = &filter {
            if f.modulus < 1 || f.signs.len() != f.modulus as usize {
                return Err(HeckeError::BadResidueFilter);
            }
        }
        Ok(FalseThetaSpec { quad2, lin2, offset, sign, support, filter })
    }

    /// `sum_{n>=1} (n/3) q^{n^2}`, the quadratic-character sum mod 3.
    pub fn legendre3() -> Self {
        FalseThetaSpec::new(
            2,
            0,
            0,
            FalseThetaSign::Plus,
            FalseThetaSupport::NonNegative,
            Some(ResidueFilter { modulus: 3, signs: vec![0, 1, -1] }),
        )
        .expect("legendre3 spec is valid")
    }

    /// Term exponent at index `n`.
    pub fn exponent(&self, n: i64) -> i64 {
        self.quad2 * binom2(n) + ((self.quad2 + self.lin2) / 2) * n + self.offset
    }
}

/// Evaluate a false theta sum truncated at `order`.
pub fn false_theta(spec: &FalseThetaSpec, order: i64) -> LaurentSeries {
    let exponent = |n: i64| spec.exponent(n);
    let hint = quadratic_vertex_hint(spec.quad2, (spec.quad2 + spec.lin2) / 2);
    let (lo, hi) = match convex_window(exponent, hint, order) {
        Some(w) => w,
        None => return LaurentSeries::zero(order),
    };
    LaurentSeries::from_terms(
        order,
        (lo..=hi).filter_map(|n| {
            let mut sign: i64 = match spec.support {
                FalseThetaSupport::NonNegative => {
                    if n < 0 {
                        return None;
                    }
                    1
                }
                FalseThetaSupport::SgBilateral => i64::from(sg(n)),
            };
            if spec.sign == FalseThetaSign::Alternating && n.rem_euclid(2) == 1 {
                sign = -sign;
            }
            if let Some(f) = &spec.filter {
                sign *= i64::from(f.signs[n.rem_euclid(f.modulus) as usize]);
                if sign == 0 {
                    return None;
                }
            }
            Some((exponent(n), rat(sign)))
        }),
    )
}
