//! Integer windows of convex quadratic exponent functions.
//!
//! Bilateral theta-like sums have term exponents that are convex quadratics
//! in the summation index, so the indices contributing at or below a
//! truncation bound form a (possibly empty) integer interval.  Everything
//! here is exact integer arithmetic; no floating-point root finding.

/// All integers `n` with `f(n) <= bound`, as an inclusive interval, for a
/// convex `f` that grows without bound in both directions.  `hint` should be
/// near the minimizer (any value works; a good hint makes the descent O(1)).
pub(crate) fn convex_window<F>(f: F, hint: i64, bound: i64) -> Option<(i64, i64)>
where
    F: Fn(i64) -> i64,
{
    // walk downhill to an integer minimizer
    let mut m = hint;
    while f(m - 1) < f(m) {
        m -= 1;
    }
    while f(m + 1) < f(m) {
        m += 1;
    }
    if f(m) > bound {
        return None;
    }
    let mut lo = m;
    while f(lo - 1) <= bound {
        lo -= 1;
    }
    let mut hi = m;
    while f(hi + 1) <= bound {
        hi += 1;
    }
    Some((lo, hi))
}

/// Minimizer hint for `t*n*(n-1)/2 + e*n`: the real vertex is
/// `(t - 2e) / (2t)`.
pub(crate) fn quadratic_vertex_hint(t: i64, e: i64) -> i64 {
    debug_assert!(t > 0);
    (t - 2 * e).div_euclid(2 * t)
}
