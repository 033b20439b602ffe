//! Van Wijngaarden condensation: reorders a nonalternating series into an
//! alternating one. The condensed series A_j sums b_k = 2^k a(2^k(j+1)-1);
//! odd-index condensed series come from the identity A_{i+1} = (A_{i/2} - a(i/2))/2.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::numerics::PrecisionContext;
use crate::real::Real;
use crate::series::{SignProfile, TermSource};

#[derive(Clone, Debug)]
pub struct CondensedTail<R: Real> {
    pub j: u64,
    pub value: R,
    pub inner_terms_used: u32,
    pub converged: bool,
}

/// Partial sums S_n = sum_{j<=n} (-1)^j A_j of the transformed alternating
/// series, with the A_j cached for the odd-index shortcut.
#[derive(Clone, Debug)]
pub struct AlternatingPartialSums<R: Real> {
    pub values: Vec<R>,
    pub a_cache: Vec<R>,
}

/// Direct inner summation of the condensed series A_j.
///
/// Terms are added until b / (current partial) < 10^-(acc+2); an exactly zero
/// term ends the tail (terms decrease in magnitude by precondition), and a
/// zero partial sum skips the ratio test for that step.
pub fn condensed<R: Real>(src: &TermSource<R>, j: u64, ctx: &PrecisionContext) -> Result<CondensedTail<R>> {
    debug_assert_eq!(src.sign_profile(), SignProfile::NonAlternating);
    let tol: R = ctx.inner_tol();
    let jp1 = BigUint::from(j + 1);
    let two = ctx.real_of::<R>(2);
    let mut weight = ctx.real_of::<R>(1); // 2^k
    let mut index = &jp1 - 1u32; // 2^k (j+1) - 1
    let mut partial: R = ctx.real_of(0);
    for k in 0..ctx.inner_cap {
        let b = weight.clone() * src.term(&index);
        partial = partial + b.clone();
        if b.is_zero() {
            return Ok(CondensedTail {
                j,
                value: partial,
                inner_terms_used: k + 1,
                converged: true,
            });
        }
        if !partial.is_zero() && b.abs() / partial.abs() < tol {
            return Ok(CondensedTail {
                j,
                value: partial,
                inner_terms_used: k + 1,
                converged: true,
            });
        }
        weight = weight * two.clone();
        index = (&index << 1) + 1u32; // 2^{k+1}(j+1) - 1
    }
    Err(Error::InnerNoConvergence {
        j,
        cap: ctx.inner_cap,
    })
}

/// A_{i+1} = (A_{i/2} - a(i/2)) / 2 for even i; inputs are A_{i/2} and a(i/2).
pub fn condensed_odd_shortcut<R: Real>(a_half: &R, term_half: &R) -> R {
    let half = (a_half.clone() - term_half.clone()) / a_half.of(2);
    half
}

/// S_0 ... S_{n_max}: even-index A_j condensed directly, odd-index via the
/// shortcut (which needs only previously cached values).
pub fn vw_partial_sums<R: Real>(
    src: &TermSource<R>,
    n_max: usize,
    ctx: &PrecisionContext,
) -> Result<AlternatingPartialSums<R>> {
    let mut a_cache: Vec<R> = Vec::with_capacity(n_max + 1);
    let mut values: Vec<R> = Vec::with_capacity(n_max + 1);
    let mut acc: R = ctx.real_of(0);
    for j in 0..=n_max as u64 {
        let a_j = if j % 2 == 0 {
            condensed(src, j, ctx)?.value
        } else {
            // j = i+1 with even i = j-1; uses A_{(j-1)/2} and a((j-1)/2)
            let half = ((j - 1) / 2) as usize;
            condensed_odd_shortcut(&a_cache[half], &src.term_at(half as u64))
        };
        acc = if j % 2 == 0 {
            acc + a_j.clone()
        } else {
            acc - a_j.clone()
        };
        a_cache.push(a_j);
        values.push(acc.clone());
    }
    Ok(AlternatingPartialSums { values, a_cache })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::catalog_lerch;
    use num_bigint::BigUint;
    use num_traits::{ToPrimitive, Zero};

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(14).unwrap()
    }

    fn one_term_source() -> TermSource<f64> {
        TermSource::new("one-term", SignProfile::NonAlternating, |k: &BigUint| {
            if k.is_zero() {
                1.0
            } else {
                0.0
            }
        })
    }

    #[test]
    fn condensed_one_term_source() {
        let c = condensed(&one_term_source(), 0, &ctx()).unwrap();
        assert_eq!(c.value, 1.0);
        assert!(c.converged);
    }

    #[test]
    fn condensed_geometric_halves() {
        // a(k) = 2^-(k+1): A_0 = sum_k 2^k 2^-2^k; 30-term brute force oracle
        let src = TermSource::new("halves", SignProfile::NonAlternating, |k: &BigUint| {
            let k = k.to_i64().unwrap();
            0.5f64.powi(k as i32 + 1)
        });
        let mut oracle = 0.0f64;
        for k in 0..30 {
            oracle += 2.0f64.powi(k) * 0.5f64.powi((1i64 << k).min(1 << 20) as i32);
        }
        let c = condensed(&src, 0, &ctx()).unwrap();
        assert!((c.value - oracle).abs() < 1e-15, "{} vs {}", c.value, oracle);
        assert!((c.value - 1.2814941480755806).abs() < 1e-12);
    }

    #[test]
    fn condensed_zeta2_matches_brute_force() {
        let src = catalog_lerch(1.0f64, 2.0, 1.0).unwrap();
        // 60-term direct oracle of sum_k 2^k / (2^k(j+1))^2 at j=0
        let mut oracle = 0.0f64;
        for k in 0..60u32 {
            let idx = 2f64.powi(k as i32); // 2^k*(0+1)-1 + 1 = 2^k
            oracle += 2f64.powi(k as i32) / (idx * idx);
        }
        let c = condensed(&src, 0, &ctx()).unwrap();
        assert!((c.value - oracle).abs() < 1e-14);
    }

    #[test]
    fn odd_shortcut_identities() {
        assert_eq!(condensed_odd_shortcut(&1.0, &1.0), 0.0);
        assert_eq!(condensed_odd_shortcut(&3.5, &3.5), 0.0);
        // for a(k) = (k+1)^-2 the shortcut agrees with direct condensation
        let src = catalog_lerch(1.0f64, 2.0, 1.0).unwrap();
        let c = ctx();
        let a0 = condensed(&src, 0, &c).unwrap().value;
        let direct_a1 = condensed(&src, 1, &c).unwrap().value;
        let shortcut = condensed_odd_shortcut(&a0, &src.term_at(0));
        assert!((direct_a1 - shortcut).abs() < 1e-13);
    }

    #[test]
    fn odd_index_identity_first_eight() {
        // A_{2j-1} = (A_{j-1} - a(j-1))/2 for j = 1..8 on three catalog sources
        let c = ctx();
        let sources: Vec<TermSource<f64>> = vec![
            catalog_lerch(1.0, 2.0, 1.0).unwrap(),
            catalog_lerch(0.5, 1.0, 1.0).unwrap(),
            catalog_lerch(1.0, 1.5, 2.0).unwrap(),
        ];
        for src in &sources {
            for j in 1..=8u64 {
                let direct = condensed(src, 2 * j - 1, &c).unwrap().value;
                let a_prev = condensed(src, j - 1, &c).unwrap().value;
                let short = condensed_odd_shortcut(&a_prev, &src.term_at(j - 1));
                assert!(
                    ((direct - short) / direct).abs() < 1e-13,
                    "{} j={j}: {direct} vs {short}",
                    src.name()
                );
            }
        }
    }

    #[test]
    fn vw_sums_one_term_source() {
        let aps = vw_partial_sums(&one_term_source(), 10, &ctx()).unwrap();
        for s in &aps.values {
            assert_eq!(*s, 1.0);
        }
    }

    #[test]
    fn vw_sums_approach_zeta2() {
        let exact = std::f64::consts::PI * std::f64::consts::PI / 6.0;
        let src = catalog_lerch(1.0f64, 2.0, 1.0).unwrap();
        let aps = vw_partial_sums(&src, 20, &ctx()).unwrap();
        let e5 = (aps.values[5] - exact).abs();
        let e20 = (aps.values[20] - exact).abs();
        assert!(e20 < e5, "S_20 err {e20} !< S_5 err {e5}");
    }

    #[test]
    fn vw_sums_geometric_limit() {
        // a(k) = 0.5^k sums to 2; S_25 within 1e-7
        let src = catalog_lerch(0.5f64, 0.0, 1.0).unwrap();
        let aps = vw_partial_sums(&src, 25, &ctx()).unwrap();
        assert!((aps.values[25] - 2.0).abs() < 1e-7);
    }

    #[test]
    fn alternation_of_signed_terms() {
        let src = catalog_lerch(1.0f64, 2.0, 1.0).unwrap();
        let aps = vw_partial_sums(&src, 12, &ctx()).unwrap();
        for (j, a) in aps.a_cache.iter().enumerate() {
            assert!(*a > 0.0, "A_{j} not positive");
        }
        // successive differences alternate: S_{n+1} - S_n = (-1)^{n+1} A_{n+1}
        for n in 0..12 {
            let d = aps.values[n + 1] - aps.values[n];
            assert_eq!(d.is_sign_negative(), n % 2 == 0);
        }
    }

    #[test]
    fn inner_ratio_law_for_power_tails() {
        // empirical inner error ratio -> 1/(2^eps (j+1)^{1+eps}) within 5%;
        // checked at j=0 (for j>=1 the measured ratio is 2^-eps, the
        // (j+1)-dependence sits in the tail magnitude, not the ratio)
        let c = ctx();
        for (eps, s) in [(0.5f64, 1.5f64), (1.0, 2.0)] {
            let src = catalog_lerch(1.0f64, s, 1.0).unwrap();
            for j in [0u64] {
                let a_j = condensed(&src, j, &c).unwrap().value;
                // partial sums of the inner series
                let mut partial = 0.0f64;
                let mut prev_err = None;
                let mut ratio = 0.0;
                for k in 0..26u32 {
                    let idx = 2f64.powi(k as i32) * (j as f64 + 1.0);
                    partial += 2f64.powi(k as i32) / idx.powf(s);
                    let err = (partial - a_j).abs();
                    if k >= 20 {
                        if let Some(p) = prev_err {
                            ratio = err / p;
                        }
                    }
                    prev_err = Some(err);
                }
                let law = 1.0 / (2f64.powf(eps) * (j as f64 + 1.0).powf(1.0 + eps));
                assert!(
                    (ratio - law).abs() / law < 0.05,
                    "eps={eps} j={j}: ratio {ratio} vs law {law}"
                );
            }
        }
    }

    #[test]
    fn inner_converges_fast_for_geometric_terms() {
        // a(k) = (k+1) 0.9^k: inner error ratio of A_0 tends to 0
        let src = TermSource::new("poly-geom", SignProfile::NonAlternating, |k: &BigUint| {
            let k = k.to_f64().unwrap();
            (k + 1.0) * 0.9f64.powf(k)
        });
        let c = ctx();
        let a0 = condensed(&src, 0, &c).unwrap().value;
        let mut partial = 0.0f64;
        let mut errs = Vec::new();
        for k in 0..10u32 {
            let idx = 2f64.powi(k as i32) - 1.0;
            partial += 2f64.powi(k as i32) * (idx + 1.0) * 0.9f64.powf(idx);
            errs.push((partial - a0).abs());
        }
        // by k = 8 the inner terms (~2^{2k} 0.9^{2^k}) collapse super-fast;
        // past that the error sits on the f64 roundoff floor
        let ratio = errs[8] / errs[7];
        assert!(ratio < 0.01, "inner ratio at k=8: {ratio}");
    }
}
