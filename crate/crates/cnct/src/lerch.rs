//! Lerch's transcendent Phi(z, s, v) = sum_{n>=0} z^n/(n+v)^s and its special
//! cases (Riemann zeta, Hurwitz zeta, Jonquiere's function).
//!
//! Evaluation routes by argument: z = 0 is closed-form; tiny positive z is
//! summed directly; positive z goes through condensation + delta acceleration;
//! negative z feeds the alternating fast path. Negative non-integer v is first
//! normalized to v > 0 through the functional relation, so the accelerated
//! series always has positive decreasing terms.

use crate::driver::{accelerate, accelerate_alternating, Termination};
use crate::error::{Error, Result};
use crate::numerics::PrecisionContext;
use crate::real::Real;
use crate::series::catalog_lerch;

/// Validated argument triple of the transcendent.
#[derive(Clone, Debug)]
pub struct LerchParams<R: Real> {
    pub z: R,
    pub s: R,
    pub v: R,
}

/// True when x holds an integer value small enough to be exact in f64.
fn is_small_integer<R: Real>(x: &R) -> bool {
    let f = x.to_f64();
    f.is_finite() && f.fract() == 0.0 && f.abs() < 9.0e15
}

/// x^s allowing negative x only for integer s (real-valued branch).
fn pow_signed<R: Real>(x: &R, s: &R) -> Result<R> {
    if x.is_zero() {
        return Err(Error::Domain("0 raised to a real power in a pole position".into()));
    }
    if !x.is_negative() {
        return Ok(x.pow(s));
    }
    if !is_small_integer(s) {
        return Err(Error::Domain(format!(
            "negative base {x} requires an integer exponent, got {s}"
        )));
    }
    Ok(x.powi(s.to_f64() as i64))
}

impl<R: Real> LerchParams<R> {
    pub fn new(z: R, s: R, v: R) -> Result<Self> {
        let one = z.of(1);
        if z.abs() > one {
            return Err(Error::Domain(format!("|z| <= 1 required, got z = {z}")));
        }
        if z == one && s <= s.of(1) {
            return Err(Error::Domain(format!(
                "z = 1 requires s > 1 for convergence, got s = {s}"
            )));
        }
        if z == -one.clone() && (s.is_zero() || s.is_negative()) {
            return Err(Error::Domain(format!(
                "z = -1 requires s > 0 for convergence, got s = {s}"
            )));
        }
        if (v.is_zero() || v.is_negative()) && is_small_integer(&v) {
            return Err(Error::Domain(format!(
                "v must not be zero or a negative integer, got v = {v}"
            )));
        }
        if v.is_negative() && !is_small_integer(&s) {
            return Err(Error::Domain(format!(
                "negative non-integer v = {v} requires integer s, got s = {s}"
            )));
        }
        Ok(LerchParams { z, s, v })
    }
}

/// Evaluation record: the value plus the cost and confidence of obtaining it.
#[derive(Clone, Debug)]
pub struct LerchOutcome<R: Real> {
    pub value: R,
    pub terms_evaluated: u64,
    pub order_used: Option<usize>,
    pub error_estimate: Option<R>,
    pub terminated: Option<Termination>,
}

impl<R: Real> LerchOutcome<R> {
    fn closed_form(value: R, terms: u64) -> Self {
        LerchOutcome {
            value,
            terms_evaluated: terms,
            order_used: None,
            error_estimate: None,
            terminated: None,
        }
    }
}

/// Functional relation: Phi(z,s,v) = z^m Phi(z,s,m+v) + sum_{n<m} z^n/(n+v)^s.
/// Returns the shifted parameters and the finite correction sum.
pub fn lerch_shift<R: Real>(p: &LerchParams<R>, m: u32) -> Result<(LerchParams<R>, R)> {
    if m == 0 {
        return Err(Error::Domain("lerch_shift requires m >= 1".into()));
    }
    let mut correction = p.z.of(0);
    let mut zp = p.z.of(1);
    for n in 0..m {
        let base = p.v.clone() + p.v.of(n as i64);
        if base.is_zero() {
            return Err(Error::Domain(format!(
                "pole in functional-relation correction: n + v = 0 at n = {n}"
            )));
        }
        correction = correction + zp.clone() / pow_signed(&base, &p.s)?;
        zp = zp * p.z.clone();
    }
    let shifted = LerchParams {
        z: p.z.clone(),
        s: p.s.clone(),
        v: p.v.clone() + p.v.of(m as i64),
    };
    Ok((shifted, correction))
}

/// Direct summation with the geometric tail bound
/// z^N / ((N+v)^s (1-z)) < 10^(-acc-2); requires 0 < z < 1 and v > 0.
pub fn direct_sum<R: Real>(p: &LerchParams<R>, ctx: &PrecisionContext) -> Result<LerchOutcome<R>> {
    let one = p.z.of(1);
    if p.z.is_zero() || p.z.is_negative() || p.z >= one {
        return Err(Error::Domain("direct_sum requires 0 < z < 1".into()));
    }
    let tol: R = ctx.inner_tol();
    let geom = one.clone() / (one.clone() - p.z.clone());
    let mut sum = p.z.of(0);
    let mut zp = p.z.of(1);
    const CAP: u64 = 5_000_000;
    for n in 0..CAP {
        let base = p.v.clone() + p.v.of(n as i64);
        sum = sum + zp.clone() / base.pow(&p.s);
        zp = zp.clone() * p.z.clone();
        let next_base = p.v.clone() + p.v.of(n as i64 + 1);
        let bound = zp.clone() * geom.clone() / next_base.pow(&p.s);
        let scale = if sum.abs() > one { sum.abs() } else { one.clone() };
        if bound.abs() < tol.clone() * scale {
            return Ok(LerchOutcome::closed_form(sum, n + 1));
        }
    }
    Err(Error::ResourceLimit(format!(
        "direct summation did not meet the tail bound within {CAP} terms"
    )))
}

/// Evaluate Phi(z, s, v) with full routing and cost accounting.
pub fn lerch_phi_report<R: Real>(
    p: &LerchParams<R>,
    ctx: &PrecisionContext,
) -> Result<LerchOutcome<R>> {
    // Normalize negative (non-integer) v to v' in (1, 2] first.
    if p.v.is_negative() {
        let m = (-p.v.to_f64()).ceil() as u32 + 1;
        let (shifted, correction) = lerch_shift(p, m)?;
        let mut inner = lerch_phi_report(&shifted, ctx)?;
        let zm = p.z.powi(m as i64);
        inner.value = zm * inner.value + correction;
        inner.terms_evaluated += m as u64;
        return Ok(inner);
    }
    if p.z.is_zero() {
        let value = p.v.of(1) / p.v.pow(&p.s);
        return Ok(LerchOutcome::closed_form(value, 1));
    }
    if p.z.is_negative() {
        let src = catalog_lerch(p.z.clone(), p.s.clone(), p.v.clone())?;
        let res = accelerate_alternating(&src, ctx)?;
        return Ok(LerchOutcome {
            value: res.value,
            terms_evaluated: res.terms_evaluated,
            order_used: Some(res.order_used),
            error_estimate: res.error_estimate,
            terminated: Some(res.terminated),
        });
    }
    if p.z.to_f64() <= ctx.z_small && p.z < p.z.of(1) {
        return direct_sum(p, ctx);
    }
    let src = catalog_lerch(p.z.clone(), p.s.clone(), p.v.clone())?;
    let res = accelerate(&src, ctx)?;
    Ok(LerchOutcome {
        value: res.value,
        terms_evaluated: res.terms_evaluated,
        order_used: Some(res.order_used),
        error_estimate: res.error_estimate,
        terminated: Some(res.terminated),
    })
}

/// Evaluate Phi(z, s, v); parameters are validated by [`LerchParams::new`].
pub fn lerch_phi<R: Real>(p: &LerchParams<R>, ctx: &PrecisionContext) -> Result<R> {
    Ok(lerch_phi_report(p, ctx)?.value)
}

/// Riemann zeta function, s > 1: zeta(s) = Phi(1, s, 1).
pub fn riemann_zeta<R: Real>(s: R, ctx: &PrecisionContext) -> Result<R> {
    let one = s.of(1);
    let p = LerchParams::new(one.clone(), s, one)?;
    lerch_phi(&p, ctx)
}

/// Hurwitz (generalized) zeta, s > 1: zeta(s, v) = Phi(1, s, v).
pub fn hurwitz_zeta<R: Real>(s: R, v: R, ctx: &PrecisionContext) -> Result<R> {
    let one = s.of(1);
    if s <= one {
        return Err(Error::Domain(format!("hurwitz_zeta requires s > 1, got {s}")));
    }
    let p = LerchParams::new(one, s, v)?;
    lerch_phi(&p, ctx)
}

/// Jonquiere's function (polylogarithm), |z| < 1: Li_s(z) = z * Phi(z, s, 1).
pub fn jonquiere<R: Real>(z: R, s: R, ctx: &PrecisionContext) -> Result<R> {
    if z.abs() >= z.of(1) {
        return Err(Error::Domain(format!("jonquiere requires |z| < 1, got {z}")));
    }
    let one = z.of(1);
    let p = LerchParams::new(z.clone(), s, one)?;
    Ok(z * lerch_phi(&p, ctx)?)
}
