use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::second_order::normal::{normal_cdf, normal_pdf, normal_quantile};
use crate::second_order::quadrature::integrate;

/// Maximum coordinate of an `L`-dimensional centred Gaussian with
/// covariance `(sigma1_sq * 1 1^T + sigma2_sq * I) / scale`.
///
/// Such a vector is `a U + b (Z_1, ..., Z_L)` with `U, Z_i` iid standard
/// normals, `a = sqrt(sigma1_sq / scale)` and `b = sqrt(sigma2_sq / scale)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianMaxSpec {
    pub sigma1_sq: f64,
    pub sigma2_sq: f64,
    pub l: u64,
    pub scale: f64,
}

impl GaussianMaxSpec {
    pub fn new(sigma1_sq: f64, sigma2_sq: f64, l: u64, scale: f64) -> Result<Self> {
        if !(sigma1_sq >= 0.0 && sigma2_sq >= 0.0) {
            return Err(invalid("sigma_sq", "variances must be >= 0"));
        }
        if l < 1 {
            return Err(invalid("L", "must be at least 1"));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(invalid("scale", format!("{scale} must be positive")));
        }
        Ok(Self {
            sigma1_sq,
            sigma2_sq,
            l,
            scale,
        })
    }

    /// `(a, b)`, the common and independent standard deviations.
    pub fn loadings(&self) -> (f64, f64) {
        (
            (self.sigma1_sq / self.scale).sqrt(),
            (self.sigma2_sq / self.scale).sqrt(),
        )
    }

    fn check(&self) -> Result<(f64, f64)> {
        let (a, b) = self.loadings();
        if a == 0.0 && b == 0.0 {
            return Err(invalid("sigma_sq", "both variances are zero"));
        }
        Ok((a, b))
    }
}

const QUAD_TOL: f64 = 1e-13;
const QUAD_PIECES: usize = 8;

/// `P(max_i X_i <= t)`.
pub fn gaussian_max_cdf(spec: &GaussianMaxSpec, t: f64) -> Result<f64> {
    let (a, b) = spec.check()?;
    let l = spec.l as f64;
    if b == 0.0 {
        return Ok(normal_cdf(t / a));
    }
    if a == 0.0 {
        return Ok(normal_cdf(t / b).powf(l));
    }
    if spec.l == 1 {
        return Ok(normal_cdf(t / a.hypot(b)));
    }
    let v = integrate(
        |u| normal_pdf(u) * normal_cdf((t - a * u) / b).powf(l),
        -10.0,
        10.0,
        QUAD_PIECES,
        QUAD_TOL,
    );
    Ok(v.clamp(0.0, 1.0))
}

/// Inverse of [`gaussian_max_cdf`]; closed forms where the covariance
/// degenerates, otherwise bisection to `1e-10` in `t`.
pub fn gaussian_max_quantile(spec: &GaussianMaxSpec, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid("p", format!("{p} must lie in (0, 1)")));
    }
    let (a, b) = spec.check()?;
    if b == 0.0 {
        return Ok(a * normal_quantile(p));
    }
    if a == 0.0 {
        return Ok(b * normal_quantile(p.powf(1.0 / spec.l as f64)));
    }
    if spec.l == 1 {
        return Ok(a.hypot(b) * normal_quantile(p));
    }
    let s = a.hypot(b);
    let (mut lo, mut hi) = (-s, s);
    while gaussian_max_cdf(spec, lo)? > p {
        lo -= 2.0 * (hi - lo);
    }
    while gaussian_max_cdf(spec, hi)? < p {
        hi += 2.0 * (hi - lo);
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if gaussian_max_cdf(spec, mid)? < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
