//! The Lerch family of discrete distributions: Zipf, Zipf-Mandelbrot, Good,
//! and the general Lerch distribution, with pmf, cdf, survival, hazard, pgf,
//! truncation, and low-order moments.
//!
//! All four families share one numerical kernel: a distribution is stored in
//! the 0-based form p(n) = c z^n/(n+v)^s over n in [lo, hi], and every
//! cumulative quantity reduces to the tail function
//! T(sigma, n0) = z^n0 Phi(z, sigma, v + n0).

use crate::error::{Error, Result};
use crate::lerch::{lerch_phi, LerchParams};
use crate::numerics::PrecisionContext;
use crate::real::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Zipf,
    ZipfMandelbrot,
    Good,
    Lerch,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Zipf => "zipf",
            Family::ZipfMandelbrot => "zipf-mandelbrot",
            Family::Good => "good",
            Family::Lerch => "lerch",
        }
    }
}

/// A (possibly truncated) member of the Lerch family. Immutable once built:
/// the normalization and cdf head are computed at construction.
#[derive(Clone, Debug)]
pub struct LerchDistribution<R: Real> {
    family: Family,
    z: R,
    s: R,
    v: R,
    support_start: u64,
    truncation: Option<(u64, Option<u64>)>,
    /// c^{-1}: the tail-function bracket the pmf is divided by.
    norm_c_inv: R,
    /// T(s, lo): cached head of the cdf numerator.
    head: R,
    ctx: PrecisionContext,
}

impl<R: Real> LerchDistribution<R> {
    /// Zipf(s): p(n) = n^{-s}/zeta(s), support {1, 2, ...}; requires s > 1.
    pub fn zipf(s: R, ctx: &PrecisionContext) -> Result<Self> {
        let zero = s.of(0);
        let one = s.of(1);
        Self::build(Family::Zipf, one, s, zero, 1, None, ctx)
    }

    /// Zipf-Mandelbrot(s, v): p(n) = (n+v)^{-s}/Phi(1,s,v), support {0, 1, ...};
    /// requires s > 1, v > 0.
    pub fn zipf_mandelbrot(s: R, v: R, ctx: &PrecisionContext) -> Result<Self> {
        let one = s.of(1);
        Self::build(Family::ZipfMandelbrot, one, s, v, 0, None, ctx)
    }

    /// Good(z, s): p(n) = z^n/(n^s F(z,s)), support {1, 2, ...}; requires
    /// 0 < z <= 1 (z = 1 needs s > 1 and reduces to Zipf).
    pub fn good(z: R, s: R, ctx: &PrecisionContext) -> Result<Self> {
        let zero = s.of(0);
        Self::build(Family::Good, z, s, zero, 1, None, ctx)
    }

    /// Lerch(z, s, v): p(n) = c z^n/(n+v)^s, support {0, 1, ...}; requires
    /// 0 < z <= 1, v > 0.
    pub fn lerch(z: R, s: R, v: R, ctx: &PrecisionContext) -> Result<Self> {
        Self::build(Family::Lerch, z, s, v, 0, None, ctx)
    }

    /// Restrict the support to [a, b] (b = None means unbounded above) and
    /// renormalize.
    pub fn truncated(&self, a: u64, b: Option<u64>) -> Result<Self> {
        if let Some(b) = b {
            if a > b {
                return Err(Error::Domain(format!(
                    "truncation requires a <= b, got [{a}, {b}]"
                )));
            }
        }
        Self::build(
            self.family,
            self.z.clone(),
            self.s.clone(),
            self.v.clone(),
            self.support_start,
            Some((a, b)),
            &self.ctx,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        family: Family,
        z: R,
        s: R,
        v: R,
        support_start: u64,
        truncation: Option<(u64, Option<u64>)>,
        ctx: &PrecisionContext,
    ) -> Result<Self> {
        if z.is_zero() || z.is_negative() || z > z.of(1) {
            return Err(Error::Domain(format!(
                "{} requires 0 < z <= 1, got z = {z}",
                family.name()
            )));
        }
        if v.is_negative() {
            return Err(Error::Domain(format!(
                "{} requires v >= 0, got v = {v}",
                family.name()
            )));
        }
        if v.is_zero() && support_start == 0 {
            return Err(Error::Domain(
                "support containing 0 requires v > 0 (pole at n = 0)".into(),
            ));
        }
        let mut d = LerchDistribution {
            family,
            z,
            s,
            v,
            support_start,
            truncation,
            norm_c_inv: ctx.real_of(1),
            head: ctx.real_of(1),
            ctx: ctx.clone(),
        };
        d.head = d.tail_at(&d.s.clone(), &d.z.clone(), d.lo())?;
        d.norm_c_inv = match d.hi() {
            None => d.head.clone(),
            Some(b) => d.head.clone() - d.tail_at(&d.s.clone(), &d.z.clone(), b + 1)?,
        };
        if d.norm_c_inv.is_zero() || d.norm_c_inv.is_negative() {
            return Err(Error::Domain(
                "degenerate parameters: normalization constant is not positive".into(),
            ));
        }
        Ok(d)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// First support point (after truncation).
    pub fn lo(&self) -> u64 {
        let a = self.truncation.map(|(a, _)| a).unwrap_or(0);
        a.max(self.support_start)
    }

    /// Last support point, if the distribution is bounded above.
    pub fn hi(&self) -> Option<u64> {
        self.truncation.and_then(|(_, b)| b)
    }

    /// c^{-1}, the normalization bracket.
    pub fn norm_c_inv(&self) -> &R {
        &self.norm_c_inv
    }

    fn check_support(&self, n: u64) -> Result<()> {
        if n < self.lo() || self.hi().map(|b| n > b).unwrap_or(false) {
            return Err(Error::Domain(format!(
                "n = {n} outside the support [{}, {}]",
                self.lo(),
                self.hi().map(|b| b.to_string()).unwrap_or_else(|| "inf".into())
            )));
        }
        Ok(())
    }

    /// T(sigma, n0) = w^n0 Phi(w, sigma, v + n0) for base w (w = z except in
    /// the pgf, where w = y z).
    fn tail_at(&self, sigma: &R, w: &R, n0: u64) -> Result<R> {
        if w.is_zero() {
            // Only the n0 = 0 term survives, and only if 0 is in range.
            return Ok(if n0 == 0 {
                w.of(1) / self.v.pow(sigma)
            } else {
                w.of(0)
            });
        }
        let shifted_v = self.v.clone() + self.v.of(n0 as i64);
        let p = LerchParams::new(w.clone(), sigma.clone(), shifted_v)?;
        let phi = lerch_phi(&p, &self.ctx)?;
        Ok(w.powi(n0 as i64) * phi)
    }

    pub fn pmf(&self, n: u64) -> Result<R> {
        self.check_support(n)?;
        let base = self.v.clone() + self.v.of(n as i64);
        Ok(self.z.powi(n as i64) / (base.pow(&self.s) * self.norm_c_inv.clone()))
    }

    pub fn cdf(&self, n: u64) -> Result<R> {
        self.check_support(n)?;
        if let Some(b) = self.hi() {
            if n >= b {
                return Ok(self.z.of(1));
            }
        }
        let upper = self.tail_at(&self.s.clone(), &self.z.clone(), n + 1)?;
        Ok((self.head.clone() - upper) / self.norm_c_inv.clone())
    }

    pub fn survival(&self, n: u64) -> Result<R> {
        Ok(self.z.of(1) - self.cdf(n)?)
    }

    /// Hazard rate p(n)/(1 - F(n)). Undefined where F(n) = 1 (the paper's
    /// convention divides by the survival at n itself, not n - 1).
    pub fn hazard(&self, n: u64) -> Result<R> {
        let s = self.survival(n)?;
        if s.is_zero() {
            return Err(Error::Domain(format!(
                "hazard undefined at n = {n}: survival is zero"
            )));
        }
        Ok(self.pmf(n)? / s)
    }

    /// Probability generating function E[y^X] for |y| <= 1.
    pub fn pgf(&self, y: &R) -> Result<R> {
        if y.abs() > y.of(1) {
            return Err(Error::Domain(format!("pgf requires |y| <= 1, got {y}")));
        }
        let w = y.clone() * self.z.clone();
        let mut num = self.tail_at(&self.s.clone(), &w, self.lo())?;
        if let Some(b) = self.hi() {
            num = num - self.tail_at(&self.s.clone(), &w, b + 1)?;
        }
        Ok(num / self.norm_c_inv.clone())
    }

    /// E[X] via the tail-ratio identity E[X] = c T(s-1, lo) - v (minus the
    /// truncation bracket when bounded). Finite bounded supports fall back to
    /// the exact finite sum.
    pub fn mean(&self) -> Result<R> {
        if let Some(b) = self.hi() {
            if b - self.lo() <= 2_000_000 {
                let mut m = self.z.of(0);
                for n in self.lo()..=b {
                    m = m + self.z.of(n as i64) * self.pmf(n)?;
                }
                return Ok(m);
            }
        }
        let s1 = self.s.clone() - self.s.of(1);
        let mut t = self.tail_at(&s1, &self.z.clone(), self.lo()).map_err(|e| {
            moment_error("mean", &e)
        })?;
        if let Some(b) = self.hi() {
            t = t - self.tail_at(&s1, &self.z.clone(), b + 1).map_err(|e| moment_error("mean", &e))?;
        }
        Ok(t / self.norm_c_inv.clone() - self.v.clone())
    }

    /// Var[X] via E[X^2] = c T(s-2, lo) - 2 v E[X] - v^2.
    pub fn variance(&self) -> Result<R> {
        let mean = self.mean()?;
        if let Some(b) = self.hi() {
            if b - self.lo() <= 2_000_000 {
                let mut m2 = self.z.of(0);
                for n in self.lo()..=b {
                    let nn = self.z.of(n as i64);
                    m2 = m2 + nn.clone() * nn * self.pmf(n)?;
                }
                return Ok(m2 - mean.clone() * mean);
            }
        }
        let s2 = self.s.clone() - self.s.of(2);
        let mut t = self
            .tail_at(&s2, &self.z.clone(), self.lo())
            .map_err(|e| moment_error("variance", &e))?;
        if let Some(b) = self.hi() {
            t = t - self
                .tail_at(&s2, &self.z.clone(), b + 1)
                .map_err(|e| moment_error("variance", &e))?;
        }
        let ex2 = t / self.norm_c_inv.clone()
            - self.v.of(2) * self.v.clone() * mean.clone()
            - self.v.clone() * self.v.clone();
        Ok(ex2 - mean.clone() * mean)
    }

    /// Smallest support point n with 1 - F(n) < eps, found by doubling then
    /// bisection; useful for choosing table extents.
    pub fn quantile_tail(&self, eps: &R) -> Result<u64> {
        if let Some(b) = self.hi() {
            return Ok(b);
        }
        let lo0 = self.lo();
        let mut n = lo0 + 1;
        let limit = 1u64 << 40;
        while self.survival(n)? >= *eps {
            n = n.saturating_mul(2);
            if n > limit {
                return Err(Error::ResourceLimit(
                    "tail quantile beyond 2^40; distribution too heavy-tailed".into(),
                ));
            }
        }
        let (mut a, mut b) = (lo0, n);
        while a + 1 < b {
            let mid = a + (b - a) / 2;
            if self.survival(mid)? < *eps {
                b = mid;
            } else {
                a = mid;
            }
        }
        Ok(b)
    }
}

fn moment_error(which: &str, cause: &Error) -> Error {
    Error::Domain(format!("{which} does not exist for these parameters: {cause}"))
}
