//! Evaluator: delegates every call to the series builders.

use super::lexer::Span;
use super::parser::{BinOp, Expr, ExprKind};
use crate::appell::{appell_m, AppellError, AppellSpec};
use crate::eulerian::{
    aw_lhs, delta_gen, phi6, sigma_double, sigma_eulerian, v0, AwSeries, DeltaForm,
    SigmaDoubleSign,
};
use crate::hecke::{
    false_theta, hecke_f, hecke_g, sg_theta, FalseThetaSign, FalseThetaSpec, FalseThetaSupport,
    HeckeSpec, QuadraticForm,
};
use crate::series::{rat, LaurentSeries, Monomial, SignedPower};
use crate::theta::{euler, j_power, j_power_bar, theta_product, ThetaSpec};
use num::traits::{One, ToPrimitive};

/// What went wrong while evaluating.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalErrorKind {
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("`{name}` expects {expected}")]
    Arity { name: String, expected: String },
    #[error("{0}")]
    BadArgument(String),
    #[error("division by a series that is zero to its truncation order")]
    NotInvertible,
    #[error("{0}")]
    AppellPole(String),
    #[error("bare identifier `{0}` is only meaningful as a call argument")]
    BareTag(String),
    #[error("could not certify the requested truncation order")]
    OrderNotCertified,
}

/// Positioned evaluation error.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("evaluation error at {}..{}: {kind}", span.start, span.end)]
pub struct EvalError {
    pub span: Span,
    pub kind: EvalErrorKind,
}

fn err<T>(span: Span, kind: EvalErrorKind) -> Result<T, EvalError> {
    Err(EvalError { span, kind })
}

/// Evaluate an expression to a series certified through `order`.
///
/// Internally evaluates at a modest margin above the requested order
/// (division and negative powers of `q` shave a few certified exponents off)
/// and retries with a larger margin in the rare case that is not enough.
pub fn eval(expr: &Expr, order: i64) -> Result<LaurentSeries, EvalError> {
    let mut margin = 16i64;
    while margin <= 1 << 16 {
        let value = eval_at(expr, order.saturating_add(margin))?;
        if value.order() >= order {
            return Ok(value.truncated(order));
        }
        margin *= 8;
    }
    err(expr.span, EvalErrorKind::OrderNotCertified)
}

fn eval_at(expr: &Expr, w: i64) -> Result<LaurentSeries, EvalError> {
    match &expr.kind {
        ExprKind::Int(v) => Ok(LaurentSeries::constant(rat(*v))),
        ExprKind::Q => Ok(LaurentSeries::q_power(1)),
        ExprKind::Tag(name) => err(expr.span, EvalErrorKind::BareTag(name.clone())),
        ExprKind::Neg(inner) => Ok(eval_at(inner, w)?.neg()),
        ExprKind::Binary(op, lhs, rhs) => {
            let a = eval_at(lhs, w)?;
            let b = eval_at(rhs, w)?;
            Ok(match op {
                BinOp::Add => a.add(&b),
                BinOp::Sub => a.sub(&b),
                BinOp::Mul => a.mul(&b),
                BinOp::Div => a.mul(&invert_capped(b, w, rhs.span)?),
            })
        }
        ExprKind::Pow(base, exponent) => {
            let mut b = eval_at(base, w)?;
            if *exponent < 0 {
                b = invert_capped(b, w, base.span)?;
            }
            b.pow(exponent.abs())
                .map_err(|_| EvalError { span: base.span, kind: EvalErrorKind::NotInvertible })
        }
        ExprKind::Subst(inner, base_expr) => {
            let base = eval_base(base_expr, w)?;
            let t = base.power();
            let inner_order = (w + t - 1).div_euclid(t).max(0);
            Ok(eval_at(inner, inner_order)?.substitute(base))
        }
        ExprKind::Call(name, groups) => call_builder(name, groups, w, expr.span),
    }
}

/// Inversion for the evaluator: an exact polynomial has an infinite inverse,
/// so cap it at the working order first (exact monomials invert exactly).
fn invert_capped(series: LaurentSeries, w: i64, span: Span) -> Result<LaurentSeries, EvalError> {
    let capped = if series.is_exact() && series.term_count() > 1 {
        series.truncated(w)
    } else {
        series
    };
    capped
        .invert()
        .map_err(|_| EvalError { span, kind: EvalErrorKind::NotInvertible })
}

fn arity<T>(span: Span, name: &str, expected: &str) -> Result<T, EvalError> {
    err(span, EvalErrorKind::Arity { name: name.to_string(), expected: expected.to_string() })
}

fn bad<T>(span: Span, message: impl Into<String>) -> Result<T, EvalError> {
    err(span, EvalErrorKind::BadArgument(message.into()))
}

fn eval_int(expr: &Expr, w: i64) -> Result<i64, EvalError> {
    let s = eval_at(expr, w)?;
    if !s.is_exact() || s.term_count() > 1 {
        return bad(expr.span, "expected an integer");
    }
    let first = s.terms().next().map(|(e, c)| (e, c.clone()));
    match first {
        None => Ok(0),
        Some((0, c)) if c.is_integer() => c
            .numer()
            .to_i64()
            .map_or_else(|| bad(expr.span, "integer argument out of range"), Ok),
        _ => bad(expr.span, "expected an integer"),
    }
}

fn eval_monomial(expr: &Expr, w: i64) -> Result<Monomial, EvalError> {
    let s = eval_at(expr, w)?;
    if !s.is_exact() || s.term_count() != 1 {
        return bad(expr.span, "expected a monomial c*q^e");
    }
    let (e, c) = s.terms().next().map(|(e, c)| (e, c.clone())).unwrap();
    Ok(Monomial::new(c, e))
}

fn eval_base(expr: &Expr, w: i64) -> Result<SignedPower, EvalError> {
    let m = eval_monomial(expr, w)?;
    if !m.is_unit_coeff() || m.exp() < 1 {
        return bad(expr.span, "expected a base of the form q^t or -q^t with t >= 1");
    }
    Ok(SignedPower::new(if m.coeff().is_one() { 1 } else { -1 }, m.exp()))
}

fn tag_of<'e>(expr: &'e Expr, what: &str) -> Result<&'e str, EvalError> {
    match &expr.kind {
        ExprKind::Tag(name) => Ok(name.as_str()),
        _ => bad(expr.span, format!("expected {}", what)),
    }
}

fn group_shape(groups: &[Vec<Expr>], shape: &[usize]) -> bool {
    groups.len() == shape.len() && groups.iter().zip(shape).all(|(g, &n)| g.len() == n)
}

fn call_builder(
    name: &str,
    groups: &[Vec<Expr>],
    w: i64,
    span: Span,
) -> Result<LaurentSeries, EvalError> {
    match name {
        "j" => {
            if !group_shape(groups, &[1, 1]) {
                return arity(span, "j", "(x; m)");
            }
            let x = eval_monomial(&groups[0][0], w)?;
            let m = eval_int(&groups[1][0], w)?;
            let spec =
                ThetaSpec::new(x, m).map_err(|e| EvalError { span, kind: EvalErrorKind::BadArgument(e.to_string()) })?;
            Ok(theta_product(&spec, w))
        }
        "J" => match groups {
            [g] if g.len() == 1 => {
                let m = positive_int(&g[0], w, "J")?;
                Ok(euler(m, w))
            }
            [g] if g.len() == 2 => {
                let a = eval_int(&g[0], w)?;
                let m = positive_int(&g[1], w, "J")?;
                Ok(j_power(a, m, w))
            }
            _ => arity(span, "J", "(m) or (a,m)"),
        },
        "JB" => {
            if !group_shape(groups, &[2]) {
                return arity(span, "JB", "(a,m)");
            }
            let a = eval_int(&groups[0][0], w)?;
            let m = positive_int(&groups[0][1], w, "JB")?;
            Ok(j_power_bar(a, m, w))
        }
        "Jm" => {
            if !group_shape(groups, &[1]) {
                return arity(span, "Jm", "(m)");
            }
            let m = positive_int(&groups[0][0], w, "Jm")?;
            Ok(euler(m, w))
        }
        "m" => {
            if !group_shape(groups, &[1, 1, 1]) {
                return arity(span, "m", "(x; p; z)");
            }
            let x = eval_monomial(&groups[0][0], w)?;
            let p = eval_int(&groups[1][0], w)?;
            let z = eval_monomial(&groups[2][0], w)?;
            let spec = AppellSpec::new(x, p, z)
                .map_err(|e| EvalError { span, kind: EvalErrorKind::BadArgument(e.to_string()) })?;
            appell_m(&spec, w).map_err(|e| match e {
                AppellError::InvalidBase(_) => {
                    EvalError { span, kind: EvalErrorKind::BadArgument(e.to_string()) }
                }
                _ => EvalError { span, kind: EvalErrorKind::AppellPole(e.to_string()) },
            })
        }
        "f" | "g" => {
            if !group_shape(groups, &[3, 2, 1]) {
                return arity(span, name, "(a,b,c; x,y; base)");
            }
            let a = eval_int(&groups[0][0], w)?;
            let b = eval_int(&groups[0][1], w)?;
            let c = eval_int(&groups[0][2], w)?;
            let form = QuadraticForm::new(a, b, c)
                .map_err(|e| EvalError { span, kind: EvalErrorKind::BadArgument(e.to_string()) })?;
            let x = eval_monomial(&groups[1][0], w)?;
            let y = eval_monomial(&groups[1][1], w)?;
            let base = eval_base(&groups[2][0], w)?;
            let spec = HeckeSpec::new(form, x, y, base);
            Ok(if name == "f" { hecke_f(&spec, w) } else { hecke_g(&spec, w) })
        }
        "ft" => {
            if !group_shape(groups, &[3, 1, 1]) {
                return arity(span, "ft", "(A,B,C; sign; support)");
            }
            let a = eval_int(&groups[0][0], w)?;
            let b = eval_int(&groups[0][1], w)?;
            let c = eval_int(&groups[0][2], w)?;
            let sign = match tag_of(&groups[1][0], "a sign tag `plus` or `alt`")? {
                "plus" => FalseThetaSign::Plus,
                "alt" => FalseThetaSign::Alternating,
                other => return bad(groups[1][0].span, format!("unknown sign tag `{}`", other)),
            };
            let support = match tag_of(&groups[2][0], "a support tag `nonneg` or `bilateral`")? {
                "nonneg" => FalseThetaSupport::NonNegative,
                "bilateral" => FalseThetaSupport::SgBilateral,
                other => return bad(groups[2][0].span, format!("unknown support tag `{}`", other)),
            };
            let spec = FalseThetaSpec::new(a, b, c, sign, support, None)
                .map_err(|e| EvalError { span, kind: EvalErrorKind::BadArgument(e.to_string()) })?;
            Ok(false_theta(&spec, w))
        }
        "ftchar3" => {
            if !groups.is_empty() {
                return arity(span, "ftchar3", "()");
            }
            Ok(false_theta(&FalseThetaSpec::legendre3(), w))
        }
        "sgt" => {
            if !group_shape(groups, &[2, 1, 1]) {
                return arity(span, "sgt", "(quad,lin; weight; base)");
            }
            let quad = eval_int(&groups[0][0], w)?;
            let lin = eval_int(&groups[0][1], w)?;
            if quad < 1 {
                return bad(groups[0][0].span, "sgt quadratic coefficient must be >= 1");
            }
            let weight = eval_monomial(&groups[1][0], w)?;
            let base = eval_base(&groups[2][0], w)?;
            Ok(sg_theta(quad, lin, &weight, base, w))
        }
        "phi" => nullary(groups, span, "phi", || phi6(w)),
        "sigma" => nullary(groups, span, "sigma", || sigma_eulerian(w)),
        "sigmad" => nullary(groups, span, "sigmad", || {
            sigma_double(SigmaDoubleSign::InnerAlternating, w)
        }),
        "V0" => nullary(groups, span, "V0", || v0(w)),
        "delta" => {
            if groups.is_empty() {
                return Ok(delta_gen(DeltaForm::DoubleSum, w));
            }
            if !group_shape(groups, &[1]) {
                return arity(span, "delta", "() or (ds | g | em)");
            }
            let variant = match tag_of(&groups[0][0], "a variant tag `ds`, `g`, or `em`")? {
                "ds" => DeltaForm::DoubleSum,
                "g" => DeltaForm::GForm,
                "em" => DeltaForm::EulerianAtMinusQ,
                other => return bad(groups[0][0].span, format!("unknown delta variant `{}`", other)),
            };
            Ok(delta_gen(variant, w))
        }
        "aw" => {
            if !group_shape(groups, &[1]) {
                return arity(span, "aw", "(tag)");
            }
            let which = match tag_of(&groups[0][0], "an identity tag such as `e1.1a`")? {
                "e1.1a" => AwSeries::E11a,
                "e1.1c" => AwSeries::E11c,
                "e1.1d" => AwSeries::E11d,
                "e1.5" => AwSeries::E15,
                "thm13" => AwSeries::Thm13,
                "e1.7" => AwSeries::E17,
                other => return bad(groups[0][0].span, format!("unknown series tag `{}`", other)),
            };
            Ok(aw_lhs(which, w))
        }
        _ => err(span, EvalErrorKind::UnknownFunction(name.to_string())),
    }
}

fn positive_int(expr: &Expr, w: i64, name: &str) -> Result<i64, EvalError> {
    let v = eval_int(expr, w)?;
    if v < 1 {
        return bad(expr.span, format!("`{}` modulus must be >= 1", name));
    }
    Ok(v)
}

fn nullary(
    groups: &[Vec<Expr>],
    span: Span,
    name: &str,
    build: impl FnOnce() -> LaurentSeries,
) -> Result<LaurentSeries, EvalError> {
    if !groups.is_empty() {
        return arity(span, name, "()");
    }
    Ok(build())
}
