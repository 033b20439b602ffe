//! Acceleration drivers: feed a sequence of partial sums (condensed for
//! nonalternating input, raw for alternating input) and remainder estimates
//! into the delta transformation, watching the ratio-based termination
//! criterion until the requested accuracy is reached or the order cap hits.

use crate::condensation::{condensed, condensed_odd_shortcut};
use crate::error::{Error, Result};
use crate::levin::TransformTable;
use crate::numerics::PrecisionContext;
use crate::real::Real;
use crate::series::{SignProfile, TermSource};

/// Why the driver stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// The convergence criterion was satisfied.
    Converged,
    /// Two successive transforms agreed exactly, or the remainder estimate
    /// vanished; the value is exact to working precision.
    ZeroDifference,
    /// The order cap was reached without meeting the criterion.
    OrderCap,
}

/// One row of the acceleration trace.
#[derive(Clone, Debug)]
pub struct TraceRow<R: Real> {
    pub order: usize,
    pub value: R,
    /// Ratio of successive transform differences; None for the first two orders.
    pub ratio: Option<R>,
    /// Self-estimated relative error; None until two differences exist.
    pub error_estimate: Option<R>,
}

/// Outcome of an acceleration run.
#[derive(Clone, Debug)]
pub struct AccelerationResult<R: Real> {
    pub value: R,
    pub order_used: usize,
    pub error_estimate: Option<R>,
    pub terminated: Termination,
    /// Number of raw-term evaluations charged to the underlying source.
    pub terms_evaluated: u64,
    pub trace: Vec<TraceRow<R>>,
}

impl<R: Real> AccelerationResult<R> {
    /// Render the trace as `order value ratio error_estimate` lines.
    pub fn trace_lines(&self) -> Vec<String> {
        self.trace
            .iter()
            .map(|row| {
                let fmt = |x: &Option<R>| match x {
                    Some(v) => v.to_decimal(6),
                    None => "-".to_string(),
                };
                format!(
                    "{:4} {} {} {}",
                    row.order,
                    row.value.to_decimal(row.value.digits() as usize),
                    fmt(&row.ratio),
                    fmt(&row.error_estimate)
                )
            })
            .collect()
    }
}

/// Convergence test on three successive transforms.
///
/// With eps_i = |T_i - T_{i-1}|, the run has converged when eps_i = 0, or when
/// eps is decreasing and the extrapolated remainder
/// 2 eps_{i-1}^2 / ((eps_{i-1} - eps_i) |T_i|) drops below 10^-acc.
/// Returns (converged, ratio eps_i/eps_{i-1}, relative error estimate).
pub fn termination_check<R: Real>(
    t_prev2: &R,
    t_prev1: &R,
    t_curr: &R,
    acc: u32,
) -> (bool, Option<R>, Option<R>) {
    let eps_prev = (t_prev1.clone() - t_prev2.clone()).abs();
    let eps_curr = (t_curr.clone() - t_prev1.clone()).abs();
    if eps_curr.is_zero() {
        return (true, Some(eps_curr.clone()), Some(eps_curr));
    }
    if eps_prev.is_zero() || t_curr.is_zero() {
        return (false, None, None);
    }
    let ratio = eps_curr.clone() / eps_prev.clone();
    if ratio >= ratio.of(1) {
        return (false, Some(ratio), None);
    }
    let est = (ratio.of(2) * eps_prev.clone() * eps_prev.clone()
        / ((eps_prev - eps_curr) * t_curr.clone().abs()))
    .abs();
    let target = est.of(10).pow(&est.of(-(acc as i64)));
    (est < target, Some(ratio), Some(est))
}

/// Internal loop: push successive (s_i, omega_i) pairs produced by `next`
/// into the delta table until termination or the order cap.
fn drive<R: Real>(
    ctx: &PrecisionContext,
    mut next: impl FnMut(usize) -> Result<(R, R)>,
) -> Result<(R, usize, Option<R>, Termination, Vec<TraceRow<R>>)> {
    let mut table = TransformTable::new(ctx.real_from_f64::<R>(ctx.beta), ctx.n0 as usize);
    let mut trace: Vec<TraceRow<R>> = Vec::new();
    let mut values: Vec<R> = Vec::new();
    for i in 0..=ctx.imax as usize {
        let (s_i, omega_i) = next(i)?;
        let t = match table.push(s_i, omega_i) {
            Ok(t) => t,
            // A vanishing remainder estimate means the tail is exactly zero
            // at this order; the previous transform already carries the sum.
            Err(Error::RemainderEstimate { .. }) if !values.is_empty() => {
                let v = values.last().unwrap().clone();
                return Ok((v, i - 1, None, Termination::ZeroDifference, trace));
            }
            Err(e) => return Err(e),
        };
        values.push(t.clone());
        let (converged, ratio, est) = if values.len() >= 3 {
            let m = values.len();
            termination_check(&values[m - 3], &values[m - 2], &values[m - 1], ctx.acc)
        } else {
            (false, None, None)
        };
        trace.push(TraceRow {
            order: i,
            value: t.clone(),
            ratio,
            error_estimate: est.clone(),
        });
        if converged {
            let kind = if est.as_ref().map(|e| e.is_zero()).unwrap_or(false) {
                Termination::ZeroDifference
            } else {
                Termination::Converged
            };
            return Ok((t, i, est, kind, trace));
        }
    }
    let value = values
        .last()
        .cloned()
        .ok_or_else(|| Error::Domain("order cap of zero leaves no transform".into()))?;
    let est = trace.last().and_then(|r| r.error_estimate.clone());
    Ok((value, ctx.imax as usize, est, Termination::OrderCap, trace))
}

/// Accelerate a nonalternating series by condensation followed by the delta
/// transformation applied to the condensed partial sums.
pub fn accelerate<R: Real>(
    src: &TermSource<R>,
    ctx: &PrecisionContext,
) -> Result<AccelerationResult<R>> {
    if src.sign_profile() != SignProfile::NonAlternating {
        return Err(Error::Domain(
            "accelerate expects a nonalternating source; use accelerate_alternating".into(),
        ));
    }
    let before = src.evaluations();
    // Condensed values A_j, cached so the odd-index shortcut can reuse them.
    let mut a_vals: Vec<R> = Vec::new();
    let ensure_a = |j: usize, a_vals: &mut Vec<R>| -> Result<()> {
        while a_vals.len() <= j {
            let jj = a_vals.len();
            let a = if jj % 2 == 1 {
                let half = (jj - 1) / 2;
                condensed_odd_shortcut(&a_vals[half], &src.term_at(half as u64))
            } else {
                condensed(src, jj as u64, ctx)?.value
            };
            a_vals.push(a);
        }
        Ok(())
    };
    let mut partial = ctx.real_from_f64::<R>(0.0);
    let run = drive(ctx, |i| {
        // Partial sum S_i of the alternating condensed series, with remainder
        // estimate omega_i = (-1)^{i+1} A_{i+1} (the next condensed term).
        ensure_a(i + 1, &mut a_vals)?;
        let a_i = a_vals[i].clone();
        partial = partial.clone() + if i % 2 == 0 { a_i } else { -a_i };
        let a_next = a_vals[i + 1].clone();
        let omega = if (i + 1) % 2 == 0 { a_next } else { -a_next };
        Ok((partial.clone(), omega))
    })?;
    let (value, order_used, error_estimate, terminated, trace) = run;
    Ok(AccelerationResult {
        value,
        order_used,
        error_estimate,
        terminated,
        terms_evaluated: src.evaluations() - before,
        trace,
    })
}

/// Accelerate an alternating series by applying the delta transformation
/// directly to its partial sums, with omega_n equal to the next raw term.
pub fn accelerate_alternating<R: Real>(
    src: &TermSource<R>,
    ctx: &PrecisionContext,
) -> Result<AccelerationResult<R>> {
    if src.sign_profile() != SignProfile::Alternating {
        return Err(Error::Domain(
            "accelerate_alternating expects an alternating source".into(),
        ));
    }
    let before = src.evaluations();
    let mut partial = ctx.real_from_f64::<R>(0.0);
    let run = drive(ctx, |i| {
        let term = src.term_at(i as u64);
        partial = partial.clone() + term;
        let omega = src.term_at(i as u64 + 1);
        Ok((partial.clone(), omega))
    })?;
    let (value, order_used, error_estimate, terminated, trace) = run;
    Ok(AccelerationResult {
        value,
        order_used,
        error_estimate,
        terminated,
        terms_evaluated: src.evaluations() - before,
        trace,
    })
}
