//! Achievable rates over `BSC(delta)^n` from the one-shot bounds.
//!
//! The bound is strictly increasing in the number of messages `M`, so the
//! largest admissible `M` is found by bisection on `log2 M`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{bsc_bound, SchemeDescriptor, SchemeKind};
use crate::error::{invalid, Error, Result};

/// Bisection stops once the bracket on `log2 M` is this narrow.
pub const LOG2_M_TOL: f64 = 1e-9;
const MAX_ITER: usize = 80;
/// Largest `log2 M` searched; beyond it `M` leaves the f64 range.
const LOG2_M_CAP: f64 = 1000.0;

/// One achievable-rate point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub scheme: SchemeKind,
    pub n: u32,
    pub delta: f64,
    pub eps: f64,
    pub k: u64,
    /// Number of disjoint sub-codebooks of the scheme used.
    pub j_opt: u64,
    /// `log2(M) / n` in bits per channel use; 0 when infeasible.
    pub rate: f64,
    pub log2_m: f64,
    /// The bound evaluated at the located `M`.
    pub bound_at_rate: f64,
    /// False when even `M = 1` violates the target.
    pub feasible: bool,
}

fn check(n: u32, delta: f64, eps: f64) -> Result<()> {
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(invalid("delta", format!("{delta} must lie in [0, 1]")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid("eps", format!("{eps} must lie in (0, 1)")));
    }
    Ok(())
}

/// Largest real `M >= 1` whose bound does not exceed `eps`.
pub fn max_rate(scheme: &SchemeDescriptor, n: u32, delta: f64, eps: f64) -> Result<RatePoint> {
    check(n, delta, eps)?;
    let bound = |x: f64| bsc_bound(scheme, n, delta, x.exp2());
    let mut point = RatePoint {
        scheme: scheme.kind(),
        n,
        delta,
        eps,
        k: scheme.k(),
        j_opt: scheme.groups(),
        rate: 0.0,
        log2_m: 0.0,
        bound_at_rate: bound(0.0)?,
        feasible: false,
    };
    if point.bound_at_rate > eps {
        return Ok(point);
    }
    let mut lo = 0.0;
    let mut hi = n as f64;
    while bound(hi)? <= eps {
        lo = hi;
        hi *= 2.0;
        if hi > LOG2_M_CAP {
            return Err(Error::NonConvergence {
                iterations: 0,
                gap: hi,
            });
        }
    }
    let mut iterations = 0;
    while hi - lo > LOG2_M_TOL {
        iterations += 1;
        if iterations > MAX_ITER {
            return Err(Error::NonConvergence {
                iterations,
                gap: hi - lo,
            });
        }
        let mid = 0.5 * (lo + hi);
        if bound(mid)? <= eps {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    point.log2_m = lo;
    point.rate = lo / n as f64;
    point.bound_at_rate = bound(lo)?;
    point.feasible = true;
    Ok(point)
}

/// As [`max_rate`] but with `M` restricted to integers (the located real
/// `M` rounded down).
pub fn max_rate_integer(
    scheme: &SchemeDescriptor,
    n: u32,
    delta: f64,
    eps: f64,
) -> Result<RatePoint> {
    let mut p = max_rate(scheme, n, delta, eps)?;
    if p.feasible {
        let m = p.log2_m.exp2().floor().max(1.0);
        p.log2_m = m.log2();
        p.rate = p.log2_m / n as f64;
        p.bound_at_rate = bsc_bound(scheme, n, delta, m)?;
    }
    Ok(p)
}

fn divisors(k: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= k {
        if k.is_multiple_of(d) {
            small.push(d);
            if d * d != k {
                large.push(k / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Best hybrid split of `K` decoders into `J` groups, `J` a divisor of `K`.
/// Ties go to the smaller `J`.
pub fn max_rate_hybrid_opt(n: u32, delta: f64, eps: f64, k: u64) -> Result<RatePoint> {
    if k < 1 {
        return Err(invalid("K", "must be at least 1"));
    }
    let mut best: Option<RatePoint> = None;
    for j in divisors(k) {
        let p = max_rate(&SchemeDescriptor::hybrid_for(k, j)?, n, delta, eps)?;
        if best.is_none_or(|b| p.rate > b.rate) {
            best = Some(p);
        }
    }
    Ok(best.expect("K has at least one divisor"))
}

/// Rate of `kind` with `K` decoders; hybrid is optimized over `J`.
pub fn scheme_rate(kind: SchemeKind, n: u32, delta: f64, eps: f64, k: u64) -> Result<RatePoint> {
    match kind {
        SchemeKind::Disjoint => max_rate(&SchemeDescriptor::disjoint(k)?, n, delta, eps),
        SchemeKind::Baseline => max_rate(&SchemeDescriptor::baseline(k)?, n, delta, eps),
        SchemeKind::Hybrid => max_rate_hybrid_opt(n, delta, eps, k),
    }
}

/// Every scheme at every `(n, K)`, ordered scheme-major, then `n`, then `K`.
pub fn rate_curve(n_list: &[u32], delta: f64, eps: f64, k_list: &[u64]) -> Result<Vec<RatePoint>> {
    let schemes = [
        SchemeKind::Disjoint,
        SchemeKind::Baseline,
        SchemeKind::Hybrid,
    ];
    let grid: Vec<(SchemeKind, u32, u64)> = schemes
        .iter()
        .flat_map(|&s| {
            n_list
                .iter()
                .flat_map(move |&n| k_list.iter().map(move |&k| (s, n, k)))
        })
        .collect();
    grid.into_par_iter()
        .map(|(s, n, k)| scheme_rate(s, n, delta, eps, k))
        .collect()
}
