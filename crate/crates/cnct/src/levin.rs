//! Levin-type sequence transformations with explicit remainder estimates,
//! and the delta transformation (omega_n = s_{n+1} - s_n) used by the CNC
//! driver. Two evaluation routes: the literal double sum, and the in-place
//! numerator/denominator recursion of the reference implementation; their
//! agreement is the defining correctness oracle for the recursion factors.

use crate::error::{Error, Result};
use crate::real::Real;

/// Rising factorial (x)_m = x(x+1)...(x+m-1), (x)_0 = 1, as a running product.
fn pochhammer<R: Real>(x: &R, m: usize) -> R {
    let mut r = x.of(1);
    for i in 0..m {
        r = r * (x.clone() + x.of(i as i64));
    }
    r
}

/// Literal evaluation of the Levin-type transform S_k^(n):
/// numerator sum_j (-1)^j C(k,j) [(b+n+j)_{k-1}/(b+n+k)_{k-1}] s_{n+j}/w_{n+j},
/// denominator the same with 1 in place of s.
pub fn levin_direct<R: Real>(beta: &R, s: &[R], omega: &[R], k: usize, n: usize) -> Result<R> {
    if s.len() < n + k + 1 || omega.len() < n + k + 1 {
        return Err(Error::Domain(format!(
            "levin_direct needs indices n..n+k = {n}..{}",
            n + k
        )));
    }
    for (i, w) in omega.iter().enumerate().take(n + k + 1).skip(n) {
        if w.is_zero() {
            return Err(Error::RemainderEstimate { index: i });
        }
    }
    if k == 0 {
        return Ok(s[n].clone());
    }
    let bnk = beta.clone() + beta.of(n as i64 + k as i64);
    let scale = pochhammer(&bnk, k - 1);
    let mut num = beta.of(0);
    let mut den = beta.of(0);
    let mut binom = beta.of(1); // C(k, j), sign-folded below
    for j in 0..=k {
        let bnj = beta.clone() + beta.of(n as i64 + j as i64);
        let factor = binom.clone() * pochhammer(&bnj, k - 1) / scale.clone();
        let signed = if j % 2 == 0 { factor } else { -factor };
        num = num + signed.clone() * s[n + j].clone() / omega[n + j].clone();
        den = den + signed / omega[n + j].clone();
        // C(k, j+1) = C(k, j) (k - j)/(j + 1)
        binom = binom * beta.of((k - j) as i64) / beta.of(j as i64 + 1);
    }
    if den.is_zero() {
        return Err(Error::DegenerateTransform { order: k });
    }
    Ok(num / den)
}

/// Delta transformation: the Levin-type transform with omega_j = s_{j+1} - s_j.
/// `s` must supply one extra element beyond n+k.
pub fn delta<R: Real>(beta: &R, s: &[R], k: usize, n: usize) -> Result<R> {
    if s.len() < n + k + 2 {
        return Err(Error::Domain(format!(
            "delta needs sequence elements n..n+k+1 = {n}..{}",
            n + k + 1
        )));
    }
    let omega: Vec<R> = s.windows(2).map(|w| w[1].clone() - w[0].clone()).collect();
    levin_direct(beta, s, &omega, k, n)
}

/// Running numerator/denominator state of the delta transformation.
///
/// Each push appends s/omega and 1/omega and re-runs the in-place recursion
/// from the tail toward the head; afterwards num[0]/den[0] is the order-i
/// transform with initial element n0.
#[derive(Clone, Debug)]
pub struct TransformTable<R: Real> {
    beta: R,
    n0: usize,
    num: Vec<R>,
    den: Vec<R>,
}

impl<R: Real> TransformTable<R> {
    pub fn new(beta: R, n0: usize) -> Self {
        TransformTable {
            beta,
            n0,
            num: Vec::new(),
            den: Vec::new(),
        }
    }

    /// Current order (number of pushes minus one); None before the first push.
    pub fn order(&self) -> Option<usize> {
        self.num.len().checked_sub(1)
    }

    /// Push the next sequence element and remainder estimate; returns the
    /// transform value at the new order.
    pub fn push(&mut self, s_new: R, omega_new: R) -> Result<R> {
        if omega_new.is_zero() {
            return Err(Error::RemainderEstimate {
                index: self.num.len(),
            });
        }
        self.num.push(s_new / omega_new.clone());
        self.den.push(self.beta.of(1) / omega_new);
        let i = self.num.len() - 1; // current order
        let factors = self.factors(i);
        for q in (0..i).rev() {
            self.num[q] = self.num[q + 1].clone() - self.num[q].clone() * factors[q].clone();
            self.den[q] = self.den[q + 1].clone() - self.den[q].clone() * factors[q].clone();
        }
        if self.den[0].is_zero() {
            return Err(Error::DegenerateTransform { order: i });
        }
        Ok(self.num[0].clone() / self.den[0].clone())
    }

    /// Value at the current order without pushing.
    pub fn value(&self) -> Result<R> {
        match (self.num.first(), self.den.first()) {
            (Some(n), Some(d)) if !d.is_zero() => Ok(n.clone() / d.clone()),
            (Some(_), Some(_)) => Err(Error::DegenerateTransform {
                order: self.num.len() - 1,
            }),
            _ => Err(Error::Domain("empty transform table".into())),
        }
    }

    /// Recursion prefactors for order i, arranged as in the reference code:
    /// boundary factors 0 (and 0,1 at i=1), inner entries
    /// (b+n+i-1)(b+n+i-2) / ((b+n+i+o-2)(b+n+i+o-3)) for o = 1..i, reversed.
    fn factors(&self, i: usize) -> Vec<R> {
        let b = &self.beta;
        let n = self.n0 as i64;
        let i_ = i as i64;
        let mut f: Vec<R> = match i {
            0 => vec![b.of(0)],
            1 => vec![b.of(0), b.of(1)],
            _ => {
                let top = (b.clone() + b.of(n + i_ - 1)) * (b.clone() + b.of(n + i_ - 2));
                let mut v = vec![b.of(0)];
                for o in 1..=i_ {
                    let bot =
                        (b.clone() + b.of(n + i_ + o - 2)) * (b.clone() + b.of(n + i_ + o - 3));
                    v.push(top.clone() / bot);
                }
                v
            }
        };
        f.reverse();
        f
    }
}
