//! Rate-distortion function of a discrete source and its tilted
//! information, via Blahut-Arimoto with a search over the multiplier.

use crate::error::{invalid, Error, Result};
use crate::prob::{DistortionMatrix, Kernel, Pmf};

/// Optimal test channel and multiplier for `R(D)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateDistortionSolution {
    /// `R(D)` in bits.
    pub r_d: f64,
    pub p_z_given_w: Kernel<f64>,
    pub p_z: Pmf<f64>,
    /// `-R'(D)` in bits per unit distortion; `+inf` on the lossless path.
    pub lambda: f64,
    /// `E[d(W, Z)]` under the returned test channel.
    pub distortion: f64,
    pub converged: bool,
    /// Certified gap between the reported rate and the optimum.
    pub gap: f64,
}

pub const DEFAULT_TOL: f64 = 1e-9;
const MAX_ITER: usize = 10_000;

/// One Blahut-Arimoto fixed point at multiplier `lambda`.
struct Tilt {
    q: Vec<f64>,
    /// `log2 sum_z q(z) 2^{-lambda d(w,z)}` per source symbol.
    log_z: Vec<f64>,
    distortion: f64,
    /// `log2 max_z c(z)`, the Blahut certificate (>= 0, zero at optimum).
    gap: f64,
    converged: bool,
}

fn log2_partition(q: &[f64], dmat: &DistortionMatrix<f64>, lambda: f64, w: usize) -> f64 {
    let d_min = (0..q.len())
        .filter(|&z| q[z] > 0.0)
        .map(|z| dmat.d(w, z))
        .fold(f64::INFINITY, f64::min);
    let s: f64 = (0..q.len())
        .filter(|&z| q[z] > 0.0)
        .map(|z| q[z] * (-lambda * (dmat.d(w, z) - d_min)).exp2())
        .sum();
    -lambda * d_min + s.log2()
}

fn blahut_arimoto(
    p_w: &Pmf<f64>,
    dmat: &DistortionMatrix<f64>,
    lambda: f64,
    q0: &[f64],
    tol: f64,
) -> Tilt {
    let nz = q0.len();
    let support = p_w.support();
    let mut q = q0.to_vec();
    let mut iter = 0;
    loop {
        let log_z: Vec<f64> = (0..p_w.len())
            .map(|w| log2_partition(&q, dmat, lambda, w))
            .collect();
        // c(z) = sum_w p(w) 2^{-lambda d(w,z)} / Z(w); q <- q c
        let c: Vec<f64> = (0..nz)
            .map(|z| {
                support
                    .iter()
                    .map(|&w| p_w.p(w) * (-lambda * dmat.d(w, z) - log_z[w]).exp2())
                    .sum()
            })
            .collect();
        let gap = c.iter().copied().fold(0.0, f64::max).log2().max(0.0);
        iter += 1;
        if gap <= tol || iter >= MAX_ITER {
            let distortion = support
                .iter()
                .map(|&w| {
                    p_w.p(w)
                        * (0..nz)
                            .filter(|&z| q[z] > 0.0)
                            .map(|z| {
                                q[z] * (-lambda * dmat.d(w, z) - log_z[w]).exp2() * dmat.d(w, z)
                            })
                            .sum::<f64>()
                })
                .sum();
            return Tilt {
                q,
                log_z,
                distortion,
                gap,
                converged: gap <= tol,
            };
        }
        for z in 0..nz {
            q[z] *= c[z];
        }
        let s: f64 = q.iter().sum();
        q.iter_mut().for_each(|v| *v /= s);
    }
}

fn normalized(mut v: Vec<f64>) -> Vec<f64> {
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}

/// `R(D) = min I(W; Z)` over test channels with `E[d(W, Z)] <= D`.
///
/// Hamming distortion with `D = 0` returns `H(W)` directly. Above
/// `min_z E[d(W, z)]` the rate is zero.
pub fn rate_distortion(
    p_w: &Pmf<f64>,
    dmat: &DistortionMatrix<f64>,
    d: f64,
    tol: f64,
) -> Result<RateDistortionSolution> {
    if dmat.n_sources() != p_w.len() {
        return Err(Error::DimensionMismatch {
            what: "P_W vs distortion rows",
            expected: dmat.n_sources(),
            got: p_w.len(),
        });
    }
    if !(d >= 0.0) {
        return Err(invalid("D", format!("{d} must be >= 0")));
    }
    if !(tol > 0.0) {
        return Err(invalid("tol", "must be positive"));
    }
    let nz = dmat.n_reconstructions();
    if d == 0.0 && dmat.is_hamming() {
        return Ok(RateDistortionSolution {
            r_d: p_w.entropy(),
            p_z_given_w: Kernel::identity(nz)?,
            p_z: p_w.clone(),
            lambda: f64::INFINITY,
            distortion: 0.0,
            converged: true,
            gap: 0.0,
        });
    }
    let expected_d: Vec<f64> = (0..nz).map(|z| p_w.expect(|w| dmat.d(w, z))).collect();
    let (z_best, d_max) =
        expected_d
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |b, (z, v)| if v < b.1 { (z, v) } else { b },
            );
    if d >= d_max {
        let p_z = Pmf::point_mass(nz, z_best)?;
        return Ok(RateDistortionSolution {
            r_d: 0.0,
            p_z_given_w: Kernel::constant(p_w.len(), &p_z)?,
            p_z,
            lambda: 0.0,
            distortion: d_max,
            converged: true,
            gap: 0.0,
        });
    }
    let d_min = p_w.expect(|w| (0..nz).map(|z| dmat.d(w, z)).fold(f64::INFINITY, f64::min));
    if d <= d_min {
        return Err(invalid(
            "D",
            format!("{d} is at or below the minimum achievable distortion {d_min}"),
        ));
    }

    // D(lambda) decreases from d_max to d_min; bracket then bisect.
    let uniform = vec![1.0 / nz as f64; nz];
    let inner_tol = tol * 1e-3;
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut tilt = blahut_arimoto(p_w, dmat, hi, &uniform, inner_tol);
    while tilt.distortion > d {
        lo = hi;
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::NonConvergence {
                iterations: 0,
                gap: tilt.distortion - d,
            });
        }
        tilt = blahut_arimoto(p_w, dmat, hi, &tilt.q, inner_tol);
    }
    let mut q_warm = tilt.q.clone();
    let mut best = (hi, tilt);
    for _ in 0..200 {
        if hi - lo <= 1e-13 * hi.max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let t = blahut_arimoto(p_w, dmat, mid, &q_warm, inner_tol);
        q_warm.clone_from(&t.q);
        if t.distortion > d {
            lo = mid;
        } else {
            hi = mid;
            best = (mid, t);
        }
    }
    let (lambda, tilt) = best;
    // one more polish at the final multiplier from the warm start
    let tilt = if tilt.converged {
        tilt
    } else {
        blahut_arimoto(p_w, dmat, lambda, &tilt.q, inner_tol)
    };
    if !tilt.converged {
        return Err(Error::NonConvergence {
            iterations: MAX_ITER,
            gap: tilt.gap,
        });
    }
    // tangent-line value at the target D, minus the certificate: a lower
    // bound on R(D) that is tight at the fixed point
    let dual = -lambda * d - p_w.expect(|w| tilt.log_z[w]);
    let rows: Vec<Vec<f64>> = (0..p_w.len())
        .map(|w| {
            normalized(
                (0..nz)
                    .map(|z| {
                        if tilt.q[z] > 0.0 {
                            tilt.q[z] * (-lambda * dmat.d(w, z) - tilt.log_z[w]).exp2()
                        } else {
                            0.0
                        }
                    })
                    .collect(),
            )
        })
        .collect();
    Ok(RateDistortionSolution {
        r_d: (dual - tilt.gap).max(0.0),
        p_z_given_w: Kernel::new(rows)?,
        p_z: Pmf::new(normalized(tilt.q))?,
        lambda,
        distortion: tilt.distortion,
        converged: true,
        gap: tilt.gap,
    })
}

/// `j(w) = -log2 E[2^{lambda (D - d(w, Z))}]` with `Z ~ P_Z*`; on the
/// lossless path `-log2 P_Z*(d(w, Z) <= D)`.
pub fn d_tilted_information(
    sol: &RateDistortionSolution,
    p_w: &Pmf<f64>,
    dmat: &DistortionMatrix<f64>,
    d: f64,
) -> Vec<f64> {
    let q = sol.p_z.probs();
    (0..p_w.len())
        .map(|w| {
            if sol.lambda.is_infinite() {
                -dmat.ball_mass(&sol.p_z, d, w).log2()
            } else {
                -(sol.lambda * d + log2_partition(q, dmat, sol.lambda, w))
            }
        })
        .collect()
}
