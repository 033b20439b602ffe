//! Precision management, Bernoulli numbers, the digamma function, and the
//! embedded Euler-Mascheroni constant.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::real::Real;

/// Verified digits of the Euler-Mascheroni constant (1110 decimals stored,
/// 1100 usable).
const GAMMA_DIGITS: &str = include_str!("euler_gamma_1100.txt");
const GAMMA_STORED: u32 = 1100;

/// Hard cap on the number of Bernoulli pairs computed by [`bernoulli_numbers`].
pub const BERNOULLI_CAP: u32 = 200;

/// Settings shared by every evaluation: requested accuracy, working
/// precision, and the transformation defaults.
#[derive(Clone, Debug)]
pub struct PrecisionContext {
    /// Requested relative accuracy in decimal digits.
    pub acc: u32,
    /// Decimal digits carried by the arithmetic (>= acc + 10).
    pub working_digits: u32,
    /// Maximum transformation order.
    pub imax: u32,
    /// Shift parameter of the Levin-type transformation.
    pub beta: f64,
    /// Initial element of the transform (also the head-skip count).
    pub n0: u32,
    /// Hard cap on inner terms of one condensed series.
    pub inner_cap: u32,
    /// Argument above which digamma switches to the asymptotic series.
    pub digamma_switch: u32,
    /// Below this z, the Lerch series is summed directly instead of accelerated.
    pub z_small: f64,
}

impl PrecisionContext {
    /// Context with the reference defaults: imax=100, beta=1, n0=0.
    pub fn new(acc: u32) -> Result<Self> {
        Self::with_options(acc, acc + 10, 100, 1.0, 0)
    }

    pub fn with_options(acc: u32, working_digits: u32, imax: u32, beta: f64, n0: u32) -> Result<Self> {
        if acc < 1 {
            return Err(Error::Domain("acc must be >= 1".into()));
        }
        if imax < 2 {
            return Err(Error::Domain("imax must be >= 2".into()));
        }
        if !(beta > 0.0) {
            return Err(Error::Domain("beta must be > 0".into()));
        }
        if working_digits < acc + 10 {
            return Err(Error::Domain(format!(
                "working_digits {working_digits} must be >= acc + 10 = {}",
                acc + 10
            )));
        }
        Ok(PrecisionContext {
            acc,
            working_digits,
            imax,
            beta,
            n0,
            inner_cap: 512,
            digamma_switch: 500,
            z_small: 0.05,
        })
    }

    /// Inner tolerance of the condensation loop: 10^-(acc+2).
    pub fn inner_tol<R: Real>(&self) -> R {
        R::from_i64(10, self.working_digits).powi(-(self.acc as i64) - 2)
    }

    /// Outer termination target: 10^-acc.
    pub fn target<R: Real>(&self) -> R {
        R::from_i64(10, self.working_digits).powi(-(self.acc as i64))
    }

    pub fn real_of<R: Real>(&self, v: i64) -> R {
        R::from_i64(v, self.working_digits)
    }

    pub fn real_from_f64<R: Real>(&self, v: f64) -> R {
        R::from_f64(v, self.working_digits)
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext::new(14).expect("default context")
    }
}

/// Euler-Mascheroni constant rounded to the context's working precision,
/// read from the embedded verified table.
pub fn euler_gamma<R: Real>(ctx: &PrecisionContext) -> Result<R> {
    if ctx.working_digits > GAMMA_STORED {
        return Err(Error::ResourceLimit(format!(
            "gamma requested at {} digits; {} stored",
            ctx.working_digits, GAMMA_STORED
        )));
    }
    R::from_decimal(GAMMA_DIGITS.trim(), ctx.working_digits)
}

static BERNOULLI_CACHE: Lazy<Mutex<Vec<BigRational>>> = Lazy::new(|| Mutex::new(Vec::new()));

fn binomial(n: u64, k: u64) -> BigInt {
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i);
        r = r.div_floor(&BigInt::from(i + 1));
    }
    r
}

/// Exact Bernoulli numbers B_0 ... B_{2*m_max} by the generating-function
/// recurrence sum_{j=0}^{m} C(m+1,j) B_j = 0.
pub fn bernoulli_numbers(m_max: u32) -> Result<Vec<BigRational>> {
    if m_max < 1 {
        return Err(Error::Domain("m_max must be >= 1".into()));
    }
    if m_max > BERNOULLI_CAP {
        return Err(Error::ResourceLimit(format!(
            "m_max {m_max} exceeds Bernoulli cap {BERNOULLI_CAP}"
        )));
    }
    let want = (2 * m_max + 1) as usize;
    let mut cache = BERNOULLI_CACHE.lock().expect("bernoulli cache");
    if cache.is_empty() {
        cache.push(BigRational::one()); // B_0
    }
    while cache.len() < want {
        let m = cache.len() as u64;
        if m % 2 == 1 && m > 1 {
            cache.push(BigRational::zero());
            continue;
        }
        // B_m = -1/(m+1) * sum_{j<m} C(m+1,j) B_j
        let mut acc = BigRational::zero();
        for (j, b) in cache.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            acc += BigRational::from(binomial(m + 1, j as u64)) * b;
        }
        cache.push(-acc / BigRational::from(BigInt::from(m + 1)));
    }
    Ok(cache[..want].to_vec())
}

/// Digamma by upward recursion below the switch threshold and by the
/// Bernoulli asymptotic series above it.
///
/// psi(x) = ln x - 1/(2x) - sum_s B_{2s}/(2s x^{2s}) for large x;
/// psi(x) = psi(x+m) - sum_{i=0}^{m-1} 1/(x+i) shifts small arguments up.
pub fn digamma<R: Real>(x: &R, ctx: &PrecisionContext) -> Result<R> {
    if x.is_zero() || x.is_negative() {
        return Err(Error::Domain("digamma requires x > 0".into()));
    }
    let switch = R::from_i64(ctx.digamma_switch as i64, ctx.working_digits);
    if *x >= switch {
        return digamma_asymptotic(x, ctx);
    }
    let xf = x.to_f64();
    // integer fast path: psi(n) = -gamma + H_{n-1}
    if xf <= ctx.digamma_switch as f64 && xf.fract() == 0.0 {
        let n = xf as i64;
        let mut r = -euler_gamma::<R>(ctx)?;
        for k in 1..n {
            r = r + x.of(1) / x.of(k);
        }
        return Ok(r);
    }
    // shift x past the threshold, evaluate asymptotically, subtract the chain
    let m = (ctx.digamma_switch as f64 - xf).ceil() as i64 + 1;
    let shifted = x.clone() + x.of(m);
    let mut r = digamma_asymptotic(&shifted, ctx)?;
    for i in 0..m {
        r = r - x.of(1) / (x.clone() + x.of(i));
    }
    Ok(r)
}

/// Truncated asymptotic series at large x. The last retained term must fall
/// below 10^-(acc+2) relative; otherwise the argument is shifted higher by
/// recursion and re-expanded.
pub(crate) fn digamma_asymptotic<R: Real>(x: &R, ctx: &PrecisionContext) -> Result<R> {
    let tol: R = ctx.inner_tol();
    let bern = bernoulli_numbers(bernoulli_stock(ctx))?;
    let mut arg = x.clone();
    let mut shift_terms: Vec<R> = Vec::new();
    loop {
        if let Some(v) = try_asymptotic(&arg, &bern, &tol, ctx) {
            let mut r = v;
            for t in &shift_terms {
                r = r - t.clone();
            }
            return Ok(r);
        }
        // not enough Bernoulli stock at this argument: move further out
        for i in 0..64 {
            shift_terms.push(x.of(1) / (arg.clone() + arg.of(i)));
        }
        let step = arg.of(64);
        arg = arg + step;
    }
}

fn bernoulli_stock(ctx: &PrecisionContext) -> u32 {
    // ~30 pairs cover double precision at x >= 500; grow with accuracy
    (30 + ctx.working_digits / 2).min(BERNOULLI_CAP)
}

fn try_asymptotic<R: Real>(x: &R, bern: &[BigRational], tol: &R, ctx: &PrecisionContext) -> Option<R> {
    let half = R::from_decimal("0.5", ctx.working_digits).expect("0.5");
    let mut sum = x.ln() - half / x.clone();
    let x2 = x.clone() * x.clone();
    let mut xpow = x2.clone(); // x^{2s}
    let scale = sum.abs();
    for s in 1.. {
        let idx = 2 * s as usize;
        if idx >= bern.len() {
            return None;
        }
        let b2s = R::from_rational(&bern[idx], ctx.working_digits);
        let term = b2s / (x.of(2 * s) * xpow.clone());
        sum = sum - term.clone();
        if term.abs() < tol.clone() * scale.clone() {
            return Some(sum);
        }
        xpow = xpow * x2.clone();
    }
    unreachable!()
}
