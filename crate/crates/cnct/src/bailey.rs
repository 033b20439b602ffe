//! High-precision verification of the digamma-series identity
//!
//!   sum_{k>=0} (psi(k+2)/(k+1))^2 = 17/4 zeta(4) - 4 gamma zeta(3) + gamma^2 zeta(2)
//!
//! with the left side summed by condensation + delta acceleration and every
//! zeta value on the right side computed by this library's own accelerator
//! (self-hosting except for the stored Euler-Mascheroni constant). Includes
//! the cost estimator showing why naive summation is hopeless: d digits of
//! accuracy need on the order of 10^(d + ...) raw terms.

use std::time::Instant;

use crate::driver::{accelerate, Termination};
use crate::error::{Error, Result};
use crate::lerch::riemann_zeta;
use crate::numerics::{euler_gamma, PrecisionContext};
use crate::real::{BigReal, Real};
use crate::series::catalog_bailey;

/// Hard cap on the verification depth; beyond this the run time grows past
/// desk scale (hours).
pub const DIGITS_CAP: u32 = 250;

/// Closed form of the identity's right side:
/// 17/4 zeta(4) - 4 gamma zeta(3) + gamma^2 zeta(2).
pub fn bailey_rhs<R: Real>(ctx: &PrecisionContext) -> Result<R> {
    let gamma: R = euler_gamma(ctx)?;
    let z2 = riemann_zeta(ctx.real_of::<R>(2), ctx)?;
    let z3 = riemann_zeta(ctx.real_of::<R>(3), ctx)?;
    let z4 = riemann_zeta(ctx.real_of::<R>(4), ctx)?;
    let quarter17 = gamma.of(17) / gamma.of(4);
    Ok(quarter17 * z4 - gamma.of(4) * gamma.clone() * z3 + gamma.clone() * gamma * z2)
}

/// Closed form of the cross-term sum sum_k psi(k+2)/(k+1)^2 = 2 zeta(3) - gamma zeta(2).
pub fn bailey_cross_rhs<R: Real>(ctx: &PrecisionContext) -> Result<R> {
    let gamma: R = euler_gamma(ctx)?;
    let z2 = riemann_zeta(ctx.real_of::<R>(2), ctx)?;
    let z3 = riemann_zeta(ctx.real_of::<R>(3), ctx)?;
    Ok(gamma.of(2) * z3 - gamma * z2)
}

/// Outcome of a verification run.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub digits_requested: u32,
    pub lhs: BigReal,
    pub rhs: BigReal,
    /// Length of the common leading significant-digit string of lhs and rhs.
    pub matching_digits: usize,
    pub order_used: usize,
    pub terms_evaluated: u64,
    /// Average decimal digits gained per transformation order over the final
    /// 20 orders of the run.
    pub digits_per_order: f64,
    pub elapsed_seconds: f64,
    pub terminated: Termination,
    /// Per-order accuracy trail: (order, attained decimal digits), from the
    /// driver's self-estimates.
    pub digit_history: Vec<(usize, f64)>,
}

impl VerificationReport {
    /// Average digits-per-order slope over an order window [from, to].
    pub fn rate_over(&self, from: usize, to: usize) -> Option<f64> {
        rate_between(&self.digit_history, from, to)
    }

    pub fn render_text(&self) -> String {
        let sig = self.digits_requested as usize + 2;
        format!(
            "identity check at {} digits\n  lhs  = {}\n  rhs  = {}\n  matching digits   : {}\n  transform order   : {}\n  terms evaluated   : {}\n  digits per order  : {:.3}\n  elapsed           : {:.2} s\n  terminated        : {:?}",
            self.digits_requested,
            self.lhs.to_decimal(sig),
            self.rhs.to_decimal(sig),
            self.matching_digits,
            self.order_used,
            self.terms_evaluated,
            self.digits_per_order,
            self.elapsed_seconds,
            self.terminated,
        )
    }
}

/// Digits-per-order slope of an accuracy trail between the last history
/// points at or before `from` and `to`.
fn rate_between(history: &[(usize, f64)], from: usize, to: usize) -> Option<f64> {
    let pick = |o: usize| {
        history
            .iter()
            .filter(|(ord, _)| *ord <= o)
            .map(|(ord, d)| (*ord, *d))
            .next_back()
    };
    // Estimates only exist from order 2 on; clamp the window start to the
    // first recorded point.
    let (o1, d1) = pick(from).or_else(|| history.first().copied())?;
    let (o2, d2) = pick(to)?;
    if o2 == o1 {
        return None;
    }
    Some((d2 - d1) / (o2 - o1) as f64)
}

/// Count the common leading significant decimal digits of two numbers.
pub fn matching_digits<R: Real>(a: &R, b: &R, sig: usize) -> usize {
    let (sa, da, ea) = a.decimal_parts(sig);
    let (sb, db, eb) = b.decimal_parts(sig);
    if sa != sb || ea != eb {
        return 0;
    }
    da.bytes()
        .zip(db.bytes())
        .take_while(|(x, y)| x == y)
        .count()
}

/// Run the verification at the requested depth in arbitrary precision.
pub fn verify(digits: u32) -> Result<VerificationReport> {
    if digits == 0 {
        return Err(Error::Domain("verification depth must be at least 1 digit".into()));
    }
    if digits > DIGITS_CAP {
        return Err(Error::ResourceLimit(format!(
            "verification depth {digits} exceeds the cap of {DIGITS_CAP} digits"
        )));
    }
    let working = digits + 10;
    let imax = (3 * digits).max(100);
    let ctx = PrecisionContext::with_options(digits, working, imax, 1.0, 0)?;
    let start = Instant::now();
    let src = catalog_bailey::<BigReal>(&ctx)?;
    let res = accelerate(&src, &ctx)?;
    let rhs: BigReal = bailey_rhs(&ctx)?;
    let elapsed = start.elapsed().as_secs_f64();

    let digit_history: Vec<(usize, f64)> = res
        .trace
        .iter()
        .filter_map(|row| {
            let est = row.error_estimate.as_ref()?.to_f64();
            if est > 0.0 && est.is_finite() {
                Some((row.order, -est.log10()))
            } else {
                None
            }
        })
        .collect();
    let digits_per_order = rate_between(
        &digit_history,
        res.order_used.saturating_sub(20),
        res.order_used,
    )
    .unwrap_or(f64::NAN);
    let matching = matching_digits(&res.value, &rhs, digits as usize + 5);
    Ok(VerificationReport {
        digits_requested: digits,
        lhs: res.value,
        rhs,
        matching_digits: matching,
        order_used: res.order_used,
        terms_evaluated: res.terms_evaluated,
        digits_per_order,
        elapsed_seconds: elapsed,
        terminated: res.terminated,
        digit_history,
    })
}

/// Order-of-magnitude cost of naive summation: solves the remainder bound
/// (ln^2 N + ln N + 1)/N = 10^(-digits) for N by bisection on t = ln N and
/// returns log10(N).
pub fn naive_term_count(digits: u32) -> f64 {
    let target = digits as f64 * std::f64::consts::LN_10;
    // g(t) = t - ln(t^2 + t + 1) is increasing for t >= 3; find g(t) = target.
    let g = |t: f64| t - (t * t + t + 1.0).ln();
    let (mut lo, mut hi) = (3.0f64, 10.0f64);
    while g(hi) < target {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi) / std::f64::consts::LN_10
}
