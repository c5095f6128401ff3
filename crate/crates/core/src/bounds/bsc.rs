//! Closed-form near-lossless bounds over `BSC(delta)^n` with a uniform
//! source on `M` messages, written in terms of the Hamming weight of the
//! channel noise.

use crate::bounds::instance::SchemeDescriptor;
use crate::error::{invalid, Result};
use crate::scalar::{KahanSum, Real};

fn check_delta<T: Real>(delta: T) -> Result<()> {
    if !(delta >= T::zero() && delta <= T::one()) {
        return Err(invalid("delta", format!("{delta} not in [0, 1]")));
    }
    Ok(())
}

/// `ln C(n, t)`; exact integer arithmetic while the coefficient fits in a
/// `u64` mantissa-safe range, log-factorial sums beyond.
fn ln_choose<T: Real>(n: u32, t: u32) -> T {
    let t = t.min(n - t);
    if n <= 50 {
        let mut c: u64 = 1;
        for i in 0..t as u64 {
            c = c * (n as u64 - i) / (i + 1);
        }
        return T::from_u64_lossy(c).ln();
    }
    let mut acc = KahanSum::new();
    for i in 0..t {
        acc.add(T::from_u64_lossy((n - i) as u64).ln() - T::from_u64_lossy((i + 1) as u64).ln());
    }
    acc.value()
}

/// `t * ln(p)` with `0 * ln(0) = 0`.
#[inline]
fn mul_ln<T: Real>(t: u32, p: T) -> T {
    if t == 0 {
        T::zero()
    } else {
        T::from_u64_lossy(t as u64) * p.ln()
    }
}

/// `Bin(n, delta)` pmf over `t = 0..=n`, evaluated in log domain.
pub fn binomial_pmf<T: Real>(n: u32, delta: T) -> Result<Vec<T>> {
    check_delta(delta)?;
    let dbar = T::one() - delta;
    Ok((0..=n)
        .map(|t| (ln_choose::<T>(n, t) + mul_ln(t, delta) + mul_ln(n - t, dbar)).exp())
        .collect())
}

/// Pmf of the minimum of `count` iid `Bin(n, delta)` variables:
/// `psi(t) = P[Bin >= t]^count - P[Bin >= t+1]^count`.
pub fn psi_pmf<T: Real>(count: u64, n: u32, delta: T) -> Result<Vec<T>> {
    if count == 0 {
        return Err(invalid("N", "must be at least 1"));
    }
    let pmf = binomial_pmf(n, delta)?;
    let len = pmf.len();
    // lower[t] = P[Bin < t], upper[t] = P[Bin >= t]
    let mut lower = vec![T::zero(); len + 1];
    let mut acc = KahanSum::new();
    for t in 0..len {
        lower[t] = acc.value();
        acc.add(pmf[t]);
    }
    lower[len] = T::one();
    let mut upper = vec![T::zero(); len + 1];
    let mut acc = KahanSum::new();
    for t in (0..len).rev() {
        acc.add(pmf[t]);
        upper[t] = acc.value();
    }
    let half = T::lit(0.5);
    let ln_surv = |t: usize| -> T {
        if t >= len {
            T::neg_infinity()
        } else if t == 0 {
            T::zero()
        } else if upper[t] <= half {
            upper[t].ln()
        } else {
            (-lower[t]).ln_1p()
        }
    };
    let nn = T::from_u64_lossy(count);
    Ok((0..len)
        .map(|t| {
            let a = nn * ln_surv(t);
            let b = nn * ln_surv(t + 1);
            if a == T::neg_infinity() {
                T::zero()
            } else if b == T::neg_infinity() {
                a.exp()
            } else {
                -a.exp() * (b - a).exp_m1()
            }
        })
        .collect())
}

/// `(1 + e^s)^-1` without overflow.
#[inline]
fn logistic_neg<T: Real>(s: T) -> T {
    if s > T::zero() {
        let e = (-s).exp();
        e / (T::one() + e)
    } else {
        T::one() / (T::one() + s.exp())
    }
}

/// Near-lossless BSC bound for the scheme `(J, L)`:
/// `sum_t psi_L(t) (1 + J M^-1 (delta/dbar)^t (2 dbar)^n)^-1`.
///
/// Disjoint (`L = 1`, `psi_1` is the binomial pmf), baseline (`J = 1`) and
/// hybrid share this single evaluator. `M` may be any real `>= 1`. The
/// factor `(delta/dbar)^t (2 dbar)^n` is evaluated as
/// `2^n delta^t dbar^(n-t)` in log domain so `delta = 1` needs no special
/// case.
pub fn bsc_bound<T: Real>(scheme: &SchemeDescriptor, n: u32, delta: T, m: T) -> Result<T> {
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    if !(m >= T::one()) || !m.is_finite() {
        return Err(invalid("M", format!("{m} must be a finite real >= 1")));
    }
    let weights = psi_pmf(scheme.group_size(), n, delta)?;
    let dbar = T::one() - delta;
    let base = T::from_u64_lossy(scheme.groups()).ln() - m.ln()
        + T::from_u64_lossy(n as u64) * T::lit(std::f64::consts::LN_2);
    let mut acc = KahanSum::new();
    for (t, &w) in weights.iter().enumerate() {
        if w == T::zero() {
            continue;
        }
        let t = t as u32;
        let s = base + mul_ln(t, delta) + mul_ln(n - t, dbar);
        acc.add(w * logistic_neg(s));
    }
    Ok(acc.value().min(T::one()))
}

/// Large-`K` limit of the baseline bound: `(1 + M^-1 (2 dbar)^n)^-1`.
pub fn baseline_limit<T: Real>(n: u32, delta: T, m: T) -> Result<T> {
    check_delta(delta)?;
    let s = T::from_u64_lossy(n as u64) * (T::lit(2.0) * (T::one() - delta)).ln() - m.ln();
    Ok(logistic_neg(s))
}
