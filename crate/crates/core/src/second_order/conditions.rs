use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::prob::{channel_dispersion, mutual_information, DistortionMatrix, Kernel, Pmf};
use crate::second_order::gaussian_max::{gaussian_max_quantile, GaussianMaxSpec};
use crate::second_order::normal::q_inv;
use crate::second_order::rate_distortion::{d_tilted_information, rate_distortion};

/// First- and second-order characteristics of a source/channel pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecondOrderQuantities {
    /// Capacity-achieving `I(X; Y)` for the chosen input, bits.
    pub c: f64,
    pub v: f64,
    pub v_tilde: f64,
    pub r_d: f64,
    /// Variance of the tilted information.
    pub calv_d: f64,
    /// Tilted information per source symbol; empty when built from numbers.
    pub jmath: Vec<f64>,
}

impl SecondOrderQuantities {
    pub fn compute(
        p_x: &Pmf<f64>,
        channel: &Kernel<f64>,
        p_w: &Pmf<f64>,
        dmat: &DistortionMatrix<f64>,
        d: f64,
        tol: f64,
    ) -> Result<Self> {
        let c = mutual_information(p_x, channel)?;
        let disp = channel_dispersion(p_x, channel)?;
        let sol = rate_distortion(p_w, dmat, d, tol)?;
        let jmath = d_tilted_information(&sol, p_w, dmat, d);
        let mean = p_w.expect(|w| jmath[w]);
        let calv_d = p_w.expect(|w| (jmath[w] - mean).powi(2));
        Ok(Self {
            c,
            v: disp.v,
            v_tilde: disp.v_tilde.min(disp.v),
            r_d: sol.r_d,
            calv_d,
            jmath,
        })
    }

    pub fn from_parts(c: f64, v: f64, v_tilde: f64, r_d: f64, calv_d: f64) -> Result<Self> {
        if !(v >= 0.0 && v_tilde >= 0.0 && calv_d >= 0.0) {
            return Err(invalid("dispersion", "variances must be >= 0"));
        }
        if v_tilde > v {
            return Err(invalid("v_tilde", format!("{v_tilde} exceeds V = {v}")));
        }
        Ok(Self {
            c,
            v,
            v_tilde,
            r_d,
            calv_d,
            jmath: Vec::new(),
        })
    }
}

/// Unspecified constants of the conditions. The defaults (`alpha = beta =
/// eta = 0`, `c = 1/2`) give the plain normal approximation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConditionParams {
    pub alpha: f64,
    pub beta: f64,
    pub eta: f64,
    pub c: f64,
}

impl Default for ConditionParams {
    fn default() -> Self {
        Self {
            alpha: 0.0,
            beta: 0.0,
            eta: 0.0,
            c: 0.5,
        }
    }
}

/// `slack = (nC - mR(D)) - RHS`; the condition holds when `slack >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub slack: f64,
    pub satisfied: bool,
}

impl ConditionResult {
    fn new(slack: f64) -> Self {
        Self {
            slack,
            satisfied: slack >= 0.0,
        }
    }
}

fn adjusted_eps(eps: f64, eta: f64, n: u64, m: u64, power: f64) -> Result<f64> {
    let adj = if eta == 0.0 {
        eps
    } else {
        eps - eta / (n.min(m) as f64).powf(power)
    };
    if !(adj > 0.0 && adj < 1.0) {
        return Err(invalid(
            "eps",
            format!("adjusted error probability {adj} is outside (0, 1)"),
        ));
    }
    Ok(adj)
}

/// Terms shared by both conditions: `nC - mR`, and
/// `alpha log m + 1/2 log n + beta`.
fn common(q: &SecondOrderQuantities, n: u64, m: u64, p: &ConditionParams) -> Result<(f64, f64)> {
    if n < 1 {
        return Err(invalid("n", "blocklength must be at least 1"));
    }
    let lhs = n as f64 * q.c - m as f64 * q.r_d;
    let alpha_term = if p.alpha == 0.0 {
        0.0
    } else {
        p.alpha * (m as f64).log2()
    };
    Ok((lhs, alpha_term + 0.5 * (n as f64).log2() + p.beta))
}

/// Disjoint-codebook condition with `K` decoders:
/// `nC - mR >= alpha log m + 1/2 log n + beta - log K
///   + sqrt(nV + m calV) Q^-1(eps - eta / sqrt(min(n, m)))`.
pub fn disjoint_condition(
    q: &SecondOrderQuantities,
    n: u64,
    m: u64,
    k: u64,
    eps: f64,
    params: &ConditionParams,
) -> Result<ConditionResult> {
    if k < 1 {
        return Err(invalid("K", "must be at least 1"));
    }
    let (lhs, base) = common(q, n, m, params)?;
    let e = adjusted_eps(eps, params.eta, n, m, 0.5)?;
    let spread = (n as f64 * q.v + m as f64 * q.calv_d).sqrt();
    let rhs = base - (k as f64).log2() + spread * q_inv(e);
    Ok(ConditionResult::new(lhs - rhs))
}

/// The equicorrelated Gaussian of the hybrid condition:
/// `sigma1^2 = n V~ + m calV`, `sigma2^2 = n (V - V~)`, scale `n + m`.
pub fn hybrid_spec(q: &SecondOrderQuantities, n: u64, m: u64, l: u64) -> Result<GaussianMaxSpec> {
    GaussianMaxSpec::new(
        n as f64 * q.v_tilde + m as f64 * q.calv_d,
        (n as f64 * (q.v - q.v_tilde)).max(0.0),
        l,
        (n + m) as f64,
    )
}

/// Hybrid condition with `J` groups of `L` decoders:
/// `nC - mR >= alpha log m + 1/2 log n + beta - log J
///   - sqrt(n + m) F^-1(eps - eta / min(n, m)^min(c, 1/2))`.
#[allow(clippy::too_many_arguments)]
pub fn hybrid_condition(
    q: &SecondOrderQuantities,
    n: u64,
    m: u64,
    j: u64,
    l: u64,
    eps: f64,
    params: &ConditionParams,
) -> Result<ConditionResult> {
    if j < 1 {
        return Err(invalid("J", "must be at least 1"));
    }
    let (lhs, base) = common(q, n, m, params)?;
    let e = adjusted_eps(eps, params.eta, n, m, params.c.min(0.5))?;
    let spec = hybrid_spec(q, n, m, l)?;
    let (a, b) = spec.loadings();
    let quantile = if a == 0.0 && b == 0.0 {
        0.0
    } else {
        gaussian_max_quantile(&spec, e)?
    };
    let rhs = base - (j as f64).log2() - ((n + m) as f64).sqrt() * quantile;
    Ok(ConditionResult::new(lhs - rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> SecondOrderQuantities {
        SecondOrderQuantities::from_parts(0.7136, 0.857, 0.0, 0.5, 0.1).unwrap()
    }

    #[test]
    fn doubling_k_gains_one_bit() {
        let p = ConditionParams::default();
        let a = disjoint_condition(&q(), 100, 50, 4, 1e-2, &p).unwrap();
        let b = disjoint_condition(&q(), 100, 50, 8, 1e-2, &p).unwrap();
        assert!((b.slack - a.slack - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_gaussian() {
        let q = SecondOrderQuantities::from_parts(0.9, 0.0, 0.0, 0.4, 0.0).unwrap();
        let p = ConditionParams::default();
        let r = disjoint_condition(&q, 16, 10, 4, 0.1, &p).unwrap();
        assert!((r.slack - (16.0 * 0.9 - 4.0 - (2.0 - 2.0))).abs() < 1e-12);
        assert!(r.satisfied);
        let h = hybrid_condition(&q, 16, 10, 4, 1, 0.1, &p).unwrap();
        assert!((h.slack - r.slack).abs() < 1e-12);
    }

    #[test]
    fn hybrid_single_member_groups_match_disjoint() {
        let p = ConditionParams::default();
        for (n, m, k, eps) in [(100, 40, 8, 1e-2), (20, 200, 1, 0.1), (7, 3, 64, 0.3)] {
            let d = disjoint_condition(&q(), n, m, k, eps, &p).unwrap();
            let h = hybrid_condition(&q(), n, m, k, 1, eps, &p).unwrap();
            assert!((d.slack - h.slack).abs() < 1e-9);
        }
    }

    #[test]
    fn independent_branch_when_no_common_variance() {
        // symmetric channel (V~ = 0) and m = 0: sigma1 = 0
        let p = ConditionParams::default();
        let spec = hybrid_spec(&q(), 50, 0, 3).unwrap();
        assert_eq!(spec.sigma1_sq, 0.0);
        let one = hybrid_condition(&q(), 50, 0, 2, 1, 1e-2, &p).unwrap();
        let three = hybrid_condition(&q(), 50, 0, 2, 3, 1e-2, &p).unwrap();
        assert!(three.slack > one.slack);
    }

    #[test]
    fn eps_checks() {
        let p = ConditionParams {
            eta: 1.0,
            ..Default::default()
        };
        assert!(disjoint_condition(&q(), 4, 4, 1, 0.1, &p).is_err());
        assert!(disjoint_condition(&q(), 4, 4, 1, 1.5, &ConditionParams::default()).is_err());
        let p = ConditionParams {
            eta: 0.01,
            ..Default::default()
        };
        let a = disjoint_condition(&q(), 100, 100, 1, 0.1, &p).unwrap();
        let b = disjoint_condition(&q(), 100, 100, 1, 0.1, &ConditionParams::default()).unwrap();
        assert!(a.slack < b.slack);
    }

    #[test]
    fn computed_quantities_bsc_uniform_source() {
        let px = Pmf::uniform(2).unwrap();
        let ch = Kernel::bsc(0.05).unwrap();
        let pw = Pmf::uniform(2).unwrap();
        let dm = DistortionMatrix::hamming(2).unwrap();
        let q = SecondOrderQuantities::compute(&px, &ch, &pw, &dm, 0.11, 1e-9).unwrap();
        assert!((q.c - 0.7136).abs() < 1e-4);
        assert!(q.calv_d.abs() < 1e-15);
        assert!((q.r_d - 0.50006).abs() < 1e-3);
        assert_eq!(q.jmath.len(), 2);
        let q0 = SecondOrderQuantities::compute(&px, &ch, &pw, &dm, 0.0, 1e-9).unwrap();
        assert_eq!(q0.r_d, 1.0);
        assert_eq!(q0.calv_d, 0.0);
    }
}
