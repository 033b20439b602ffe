//! Term sources: the universal input of acceleration. A source is a
//! deterministic random-access map k -> a(k); condensation asks for terms at
//! indices 2^k(j+1)-1, which overflow any machine word, so indices are
//! arbitrary-precision integers throughout.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numerics::{digamma_asymptotic, euler_gamma, PrecisionContext};
use crate::real::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignProfile {
    NonAlternating,
    Alternating,
}

/// Which of the three plate-contact series to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlateKind {
    R,
    T,
    U,
}

pub struct TermSource<R: Real> {
    name: String,
    f: Arc<dyn Fn(&BigUint) -> R + Send + Sync>,
    sign: SignProfile,
    exact_sum: Option<R>,
    evals: AtomicU64,
}

impl<R: Real> fmt::Debug for TermSource<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TermSource")
            .field("name", &self.name)
            .field("sign", &self.sign)
            .field("evals", &self.evals.load(Ordering::Relaxed))
            .finish()
    }
}

impl<R: Real> TermSource<R> {
    pub fn new(
        name: impl Into<String>,
        sign: SignProfile,
        f: impl Fn(&BigUint) -> R + Send + Sync + 'static,
    ) -> Self {
        TermSource {
            name: name.into(),
            f: Arc::new(f),
            sign,
            exact_sum: None,
            evals: AtomicU64::new(0),
        }
    }

    /// Attach a known exact sum (enables diagnostics and test oracles).
    pub fn with_exact_sum(mut self, s: R) -> Self {
        self.exact_sum = Some(s);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn sign_profile(&self) -> SignProfile {
        self.sign
    }

    pub fn exact_sum(&self) -> Option<&R> {
        self.exact_sum.as_ref()
    }

    /// Number of term evaluations since construction.
    pub fn evaluations(&self) -> u64 {
        self.evals.load(Ordering::Relaxed)
    }

    pub fn term(&self, k: &BigUint) -> R {
        self.evals.fetch_add(1, Ordering::Relaxed);
        (self.f)(k)
    }

    pub fn term_at(&self, k: u64) -> R {
        self.term(&BigUint::from(k))
    }

    /// Raw partial sums s_0 ... s_{n}.
    pub fn partial_sums(&self, n: usize) -> Vec<R> {
        let mut out = Vec::with_capacity(n + 1);
        let mut acc: Option<R> = None;
        for k in 0..=n as u64 {
            let t = self.term_at(k);
            acc = Some(match acc {
                None => t,
                Some(a) => a + t,
            });
            out.push(acc.clone().expect("partial"));
        }
        out
    }
}

/// z^m for a nonnegative big integer exponent. Exact small cases are kept on
/// the integer power path; huge exponents go through exp(m ln z).
fn pow_biguint<R: Real>(z: &R, m: &BigUint) -> R {
    if m.is_zero() {
        return z.of(1);
    }
    if z.is_zero() {
        return z.of(0);
    }
    if let Some(e) = m.to_i64() {
        if e <= 1 << 20 {
            return z.powi(e);
        }
    }
    let digits = z.digits();
    if z.is_negative() {
        let mag = (R::from_biguint(m, digits) * z.abs().ln()).exp();
        return if m.bit(0) { -mag } else { mag };
    }
    (R::from_biguint(m, digits) * z.ln()).exp()
}

/// (k+v)^s with big-integer k.
fn shifted_pow<R: Real>(k: &BigUint, v: &R, s: &R) -> R {
    let base = R::from_biguint(k, v.digits()) + v.clone();
    base.pow(s)
}

/// Terms of Lerch's transcendent: k -> z^k / (k+v)^s.
pub fn catalog_lerch<R: Real>(z: R, s: R, v: R) -> Result<TermSource<R>> {
    if z.abs() > z.of(1) {
        return Err(Error::Domain("catalog_lerch requires |z| <= 1".into()));
    }
    if v.is_zero() || v.is_negative() {
        return Err(Error::Domain(
            "catalog_lerch requires v > 0 (shift v first via the lerch module)".into(),
        ));
    }
    let sign = if z.is_negative() {
        SignProfile::Alternating
    } else {
        SignProfile::NonAlternating
    };
    let name = format!("lerch(z={z}, s={s}, v={v})");
    Ok(TermSource::new(name, sign, move |k: &BigUint| {
        pow_biguint(&z, k) / shifted_pow(k, &v, &s)
    }))
}

/// psi(m) for m = 1 ... switch+1 by the recursion psi(m+1) = psi(m) + 1/m.
fn psi_table<R: Real>(ctx: &PrecisionContext) -> Result<Vec<R>> {
    let gamma: R = euler_gamma(ctx)?;
    let switch = ctx.digamma_switch as u64;
    let one: R = ctx.real_of(1);
    let mut table: Vec<R> = Vec::with_capacity(switch as usize + 2);
    table.push(-gamma); // psi(1)
    for m in 1..=switch {
        let prev = table.last().expect("table nonempty").clone();
        table.push(prev + one.clone() / ctx.real_of(m as i64));
    }
    Ok(table)
}

fn psi_at<R: Real>(arg: &BigUint, table: &[R], ctx: &PrecisionContext) -> R {
    match arg.to_u64() {
        Some(m) if (m as usize) <= table.len() => table[(m - 1) as usize].clone(),
        _ => {
            let x = R::from_biguint(arg, ctx.working_digits);
            digamma_asymptotic(&x, ctx).expect("asymptotic digamma")
        }
    }
}

/// Terms of the Au-Yeung/Bailey sum: k -> (psi(k+2)/(k+1))^2.
///
/// psi values below the switch come from a harmonic table built once per
/// source; above it the Bernoulli asymptotic series is used.
pub fn catalog_bailey<R: Real>(ctx: &PrecisionContext) -> Result<TermSource<R>> {
    let table = psi_table::<R>(ctx)?;
    let ctx = ctx.clone();
    Ok(TermSource::new(
        "bailey",
        SignProfile::NonAlternating,
        move |k: &BigUint| {
            let psi = psi_at(&(k + 2u32), &table, &ctx);
            let kp1 = R::from_biguint(&(k + 1u32), ctx.working_digits);
            let q = psi / kp1;
            q.clone() * q
        },
    ))
}

/// Companion source for the cross-term identity: k -> psi(k+2)/(k+1)^2.
pub fn catalog_bailey_cross<R: Real>(ctx: &PrecisionContext) -> Result<TermSource<R>> {
    let table = psi_table::<R>(ctx)?;
    let ctx = ctx.clone();
    Ok(TermSource::new(
        "bailey-cross",
        SignProfile::NonAlternating,
        move |k: &BigUint| {
            let psi = psi_at(&(k + 2u32), &table, &ctx);
            let kp1 = R::from_biguint(&(k + 1u32), ctx.working_digits);
            psi / (kp1.clone() * kp1)
        },
    ))
}

/// Plate-contact series terms. T and U use the overflow-safe exponential
/// form; the naive cosh/sinh forms exist only inside test oracles.
pub fn catalog_plate<R: Real>(kind: PlateKind, p: R, x: R, b: R) -> Result<TermSource<R>> {
    if p.is_zero() || p.is_negative() {
        return Err(Error::Domain("plate series require p > 0".into()));
    }
    match kind {
        PlateKind::R => {
            let one = x.of(1);
            if x.abs() > one {
                return Err(Error::Domain("plate-R requires |x| <= 1".into()));
            }
            if x.abs() == one && p <= one {
                return Err(Error::Domain("plate-R at |x|=1 requires p > 1".into()));
            }
            let sign = if x.is_negative() {
                SignProfile::Alternating
            } else {
                SignProfile::NonAlternating
            };
            Ok(TermSource::new("plate-R", sign, move |k: &BigUint| {
                let m = k * 2u32 + 1u32;
                pow_biguint(&x, &m) / shifted_pow(&m, &x.of(0), &p)
            }))
        }
        PlateKind::T | PlateKind::U => {
            if b.is_zero() || b.is_negative() {
                return Err(Error::Domain("plate-T/U require b > 0".into()));
            }
            if x.is_negative() || x > b {
                return Err(Error::Domain("plate-T/U require 0 <= x <= b".into()));
            }
            let name = if kind == PlateKind::T { "plate-T" } else { "plate-U" };
            let minus = kind == PlateKind::U;
            Ok(TermSource::new(name, SignProfile::NonAlternating, move |k: &BigUint| {
                let m = R::from_biguint(&(k * 2u32 + 1u32), x.digits());
                let head = (m.clone() * (x.clone() - b.clone())).exp();
                let num = m.of(1) + (-(m.clone() * x.of(2) * x.clone())).exp();
                let den_e = (-(m.clone() * x.of(2) * b.clone())).exp();
                let den = if minus { m.of(1) - den_e } else { m.of(1) + den_e };
                head * num / (den * m.pow(&p))
            }))
        }
    }
}

/// Convergence classification of the raw series and acceleration ratios of a
/// transformed sequence, with respect to the known exact sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Divergent,
    Linear,
    Logarithmic,
}

#[derive(Clone, Debug)]
pub struct ConvergenceDiagnostics<R: Real> {
    /// (s_{n+1} - s)/(s_n - s) for the raw partial sums.
    pub rho_estimates: Vec<R>,
    /// chi_n = (s'_n - s)/(s_n - s) for the transformed sequence.
    pub chi_estimates: Vec<R>,
    pub classification: Classification,
}

impl<R: Real> ConvergenceDiagnostics<R> {
    /// Acceleration in the ratio sense: the tail of chi_n decreases
    /// monotonically toward zero.
    pub fn accelerated(&self) -> bool {
        let tail: Vec<_> = self
            .chi_estimates
            .iter()
            .rev()
            .take(5)
            .map(|c| c.abs())
            .collect();
        tail.windows(2).all(|w| w[0] <= w[1]) && !tail.is_empty()
    }
}

const CLASSIFY_DELTA: f64 = 0.05;

/// Diagnostics for a source with a known exact sum; `transformed` is any
/// accelerated sequence (e.g. the per-order transform trace).
pub fn diagnostics<R: Real>(src: &TermSource<R>, transformed: &[R]) -> Result<ConvergenceDiagnostics<R>> {
    let exact = src.exact_sum().ok_or(Error::UnsupportedDiagnostics)?.clone();
    let n = transformed.len().max(24);
    let sums = src.partial_sums(n);
    let errs: Vec<R> = sums.iter().map(|s| s.clone() - exact.clone()).collect();
    let mut rho = Vec::new();
    for w in errs.windows(2) {
        if w[0].is_zero() {
            break;
        }
        rho.push(w[1].clone() / w[0].clone());
    }
    let mut chi = Vec::new();
    for (i, t) in transformed.iter().enumerate() {
        if errs[i].is_zero() {
            break;
        }
        chi.push((t.clone() - exact.clone()) / errs[i].clone());
    }
    let classification = match rho.last() {
        Some(r) if r.abs().to_f64() > 1.0 + CLASSIFY_DELTA => Classification::Divergent,
        Some(r) if r.abs().to_f64() < 1.0 - CLASSIFY_DELTA => Classification::Linear,
        _ => Classification::Logarithmic,
    };
    Ok(ConvergenceDiagnostics {
        rho_estimates: rho,
        chi_estimates: chi,
        classification,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lerch_src(z: f64, s: f64, v: f64) -> TermSource<f64> {
        catalog_lerch(z, s, v).unwrap()
    }

    #[test]
    fn lerch_terms_direct_substitution() {
        let src = lerch_src(1.0, 2.0, 1.0);
        assert_eq!(src.term_at(0), 1.0);
        let src = lerch_src(0.5, 2.0, 1.0);
        assert!((src.term_at(2) - 0.25 / 9.0).abs() < 1e-16);
    }

    #[test]
    fn lerch_rejects_bad_v() {
        assert!(catalog_lerch(0.5f64, 2.0, 0.0).is_err());
        assert!(catalog_lerch(0.5f64, 2.0, -1.5).is_err());
        assert!(catalog_lerch(1.5f64, 2.0, 1.0).is_err());
    }

    #[test]
    fn evaluation_counter_tracks_calls() {
        let src = lerch_src(0.5, 2.0, 1.0);
        assert_eq!(src.evaluations(), 0);
        src.partial_sums(9);
        assert_eq!(src.evaluations(), 10);
    }

    #[test]
    fn terms_are_deterministic() {
        let src = lerch_src(0.7, 1.5, 2.25);
        let k = BigUint::from(12345u64);
        assert_eq!(src.term(&k).to_bits(), src.term(&k).to_bits());
    }

    #[test]
    fn bailey_first_terms() {
        let ctx = PrecisionContext::new(14).unwrap();
        let src: TermSource<f64> = catalog_bailey(&ctx).unwrap();
        let g: f64 = euler_gamma(&ctx).unwrap();
        let a0 = src.term_at(0);
        assert!((a0 - (1.0 - g) * (1.0 - g)).abs() < 1e-15, "a0={a0}");
        // psi(3) = 3/2 - gamma, two recursion steps from psi(1)
        let a1 = src.term_at(1);
        let exp = ((1.5 - g) / 2.0) * ((1.5 - g) / 2.0);
        assert!((a1 - exp).abs() < 1e-15, "a1={a1}");
        assert!((a1 - 0.2128827).abs() < 1e-6);
    }

    #[test]
    fn bailey_switches_to_asymptotic_smoothly() {
        let ctx = PrecisionContext::new(14).unwrap();
        let src: TermSource<f64> = catalog_bailey(&ctx).unwrap();
        // indices straddling the switch at k = 500
        let below = src.term_at(499);
        let above = src.term_at(500);
        assert!(below > above && above > 0.0);
        let ratio = above / below;
        assert!((ratio - 1.0).abs() < 0.01, "discontinuity at switch: {ratio}");
    }

    #[test]
    fn plate_r_terms_and_domain() {
        let src: TermSource<f64> = catalog_plate(PlateKind::R, 1.0, 0.5, 0.0).unwrap();
        assert!((src.term_at(0) - 0.5).abs() < 1e-16);
        assert!((src.term_at(1) - 0.125 / 3.0).abs() < 1e-16);
        assert!(catalog_plate(PlateKind::R, 1.0f64, 1.0, 0.0).is_err());
        assert!(catalog_plate(PlateKind::R, 2.0f64, 1.0, 0.0).is_ok());
    }

    #[test]
    fn plate_t_term_at_x_equals_b() {
        let src: TermSource<f64> = catalog_plate(PlateKind::T, 1.0, 1.0, 1.0).unwrap();
        assert!((src.term_at(0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn plate_u_matches_hyperbolic_oracle() {
        let src: TermSource<f64> = catalog_plate(PlateKind::U, 2.0, 0.5, 1.0).unwrap();
        let k0 = src.term_at(0);
        let oracle = 0.5f64.cosh() / 1.0f64.sinh();
        assert!((k0 - oracle).abs() < 1e-15, "{k0} vs {oracle}");
        for k in [1u64, 2, 5, 17] {
            let m = (2 * k + 1) as f64;
            let oracle = (m * 0.5).cosh() / m.sinh() / (m * m);
            assert!(((src.term_at(k) - oracle) / oracle).abs() < 1e-13, "k={k}");
        }
    }

    #[test]
    fn plate_tu_domain_checks() {
        assert!(catalog_plate(PlateKind::T, 1.0f64, 2.0, 1.0).is_err()); // x > b
        assert!(catalog_plate(PlateKind::U, 1.0f64, 0.0, 0.0).is_err()); // b = 0
    }

    #[test]
    fn plate_safe_form_huge_index() {
        // indices up to 2^40 in the exponent arguments must not overflow
        let src: TermSource<f64> = catalog_plate(PlateKind::T, 1.0, 0.95, 1.0).unwrap();
        let huge = BigUint::from(1u64) << 40;
        let t = src.term(&huge);
        assert!(t.is_finite());
        assert!(t >= 0.0);
    }

    #[test]
    fn diagnostics_geometric_is_linear() {
        let src = TermSource::new("geom", SignProfile::NonAlternating, |k: &BigUint| {
            0.5f64.powi(k.to_i64().unwrap() as i32)
        })
        .with_exact_sum(2.0);
        let d = diagnostics(&src, &[]).unwrap();
        assert_eq!(d.classification, Classification::Linear);
        let tail = d.rho_estimates.last().unwrap();
        assert!((tail - 0.5).abs() < 1e-6);
    }

    #[test]
    fn diagnostics_zeta2_is_logarithmic() {
        let exact = std::f64::consts::PI * std::f64::consts::PI / 6.0;
        let src = lerch_src(1.0, 2.0, 1.0).with_exact_sum(exact);
        let d = diagnostics(&src, &[]).unwrap();
        assert_eq!(d.classification, Classification::Logarithmic);
    }

    #[test]
    fn diagnostics_need_exact_sum() {
        let src = lerch_src(0.5, 2.0, 1.0);
        assert!(matches!(diagnostics(&src, &[]), Err(Error::UnsupportedDiagnostics)));
    }
}
