//! Exact evaluation of the achievability bounds for arbitrary finite
//! instances, by enumeration.

use crate::bounds::instance::{JsccInstance, SchemeDescriptor, WzInstance};
use crate::error::{invalid, Error, Result};
use crate::prob::{information_density, Kernel, Pmf};
use crate::scalar::{KahanSum, Real};

/// `(1 + a)^-1`, with `a = +inf` mapping to zero.
#[inline]
pub(crate) fn inv1p<T: Real>(a: T) -> T {
    if a.is_infinite() {
        T::zero()
    } else {
        T::one() / (T::one() + a)
    }
}

/// Cells `(P_X(x) P(y|x), 2^iota(x,y))` carrying positive joint mass.
fn channel_cells<T: Real>(px: &Pmf<T>, ch: &Kernel<T>) -> Result<Vec<(T, T)>> {
    let table = information_density(px, ch)?;
    let mut cells = Vec::new();
    for x in px.support() {
        for y in 0..ch.n_outputs() {
            let m = px.p(x) * ch.p(x, y);
            if m > T::zero() {
                cells.push((m, table.ratio(x, y)));
            }
        }
    }
    Ok(cells)
}

/// `sum_outer a * E[(1 + factor * g * 2^iota)^-1]` over the channel cells.
fn weighted_channel_average<T: Real>(
    outer: impl IntoIterator<Item = (T, T)>,
    factor: T,
    cells: &[(T, T)],
) -> T {
    let mut acc = KahanSum::new();
    for (a, g) in outer {
        if a == T::zero() {
            continue;
        }
        let mut inner = KahanSum::new();
        for &(m, r) in cells {
            // g = 0 with r finite gives weight 1; r = 0 (iota = -inf) also.
            let arg = if g == T::zero() || r == T::zero() {
                T::zero()
            } else {
                factor * g * r
            };
            inner.add(m * inv1p(arg));
        }
        acc.add(a * inner.value());
    }
    // Rounding in the input pmfs can push an all-ones average past 1.
    acc.value().min(T::one())
}

/// `E[(1 + K rho(W) 2^iota(X;Y))^-1]` with `W` independent of `(X, Y)`.
pub fn theorem1_bound<T: Real>(inst: &JsccInstance<T>) -> Result<T> {
    let cells = channel_cells(&inst.p_x, &inst.channel)?;
    let rho = inst.ball_masses();
    let outer = (0..inst.p_w.len()).map(|w| (inst.p_w.p(w), rho[w]));
    Ok(weighted_channel_average(
        outer,
        T::from_u64_lossy(inst.k),
        &cells,
    ))
}

/// Near-lossless form with `P_Z = P_W`: `E[(1 + K P_W(W) 2^iota)^-1]`.
pub fn corollary1_lossless_bound<T: Real>(
    p_w: &Pmf<T>,
    p_x: &Pmf<T>,
    channel: &Kernel<T>,
    k: u64,
) -> Result<T> {
    if k == 0 {
        return Err(invalid("K", "must be at least 1"));
    }
    let cells = channel_cells(p_x, channel)?;
    let outer = (0..p_w.len()).map(|w| (p_w.p(w), p_w.p(w)));
    Ok(weighted_channel_average(
        outer,
        T::from_u64_lossy(k),
        &cells,
    ))
}

/// Slepian-Wolf form: `E[(1 + K P(W|T) 2^iota)^-1]` with
/// `(W, T) ~ P_W P_{T|W}`.
pub fn corollary1_slepian_wolf_bound<T: Real>(
    p_w: &Pmf<T>,
    t_given_w: &Kernel<T>,
    p_x: &Pmf<T>,
    channel: &Kernel<T>,
    k: u64,
) -> Result<T> {
    if k == 0 {
        return Err(invalid("K", "must be at least 1"));
    }
    let p_t = t_given_w.output_marginal(p_w)?;
    let cells = channel_cells(p_x, channel)?;
    let mut outer = Vec::new();
    for w in p_w.support() {
        for t in 0..t_given_w.n_outputs() {
            let a = p_w.p(w) * t_given_w.p(w, t);
            if a > T::zero() && p_t.p(t) > T::zero() {
                outer.push((a, a / p_t.p(t)));
            }
        }
    }
    Ok(weighted_channel_average(
        outer,
        T::from_u64_lossy(k),
        &cells,
    ))
}

/// Side-information bound:
/// `E[(1 + K 1{d(W, phi(U,T)) <= D} 2^S)^-1]` with
/// `S = iota(X;Y) + iota(U;T) - iota(U;W)`.
///
/// `2^(iota(U;T) - iota(U;W))` is evaluated as `P(u|t) / P(u|w)`.
pub fn theorem2_wz_bound<T: Real>(inst: &WzInstance<T>) -> Result<T> {
    let cells = channel_cells(&inst.p_x, &inst.channel)?;
    let u_given_t = inst.u_given_t();
    let nu = inst.u_given_w.n_outputs();
    let mut outer = Vec::new();
    for w in inst.p_w.support() {
        for u in 0..nu {
            let puw = inst.u_given_w.p(w, u);
            if puw == T::zero() {
                continue;
            }
            for (t, post) in u_given_t.iter().enumerate() {
                let a = inst.p_w.p(w) * puw * inst.t_given_w.p(w, t);
                if a == T::zero() {
                    continue;
                }
                let z = inst.phi[u][t];
                let g = if inst.distortion.in_ball(w, z, inst.threshold) {
                    let put = post.as_ref().expect("P_T(t) > 0 on support")[u];
                    put / puw
                } else {
                    T::zero()
                };
                outer.push((a, g));
            }
        }
    }
    Ok(weighted_channel_average(
        outer,
        T::from_u64_lossy(inst.k),
        &cells,
    ))
}

/// Input probability with its `(value, probability)` atoms.
type MaxLaw<T> = (T, Vec<(T, T)>);

/// Distribution of `max_{1..L} 2^iota(x, Y_k)` for each input `x` in the
/// support of `P_X`: sorted distinct values with their probabilities.
///
/// `P(max <= v_i) = (1 - S_i)^L` where `S_i` is the tail mass above `v_i`;
/// differences are taken in log space so that `L` up to `2^30` and beyond
/// stays exact to rounding.
fn max_ratio_laws<T: Real>(px: &Pmf<T>, ch: &Kernel<T>, group_size: u64) -> Result<Vec<MaxLaw<T>>> {
    let table = information_density(px, ch)?;
    let l = T::from_u64_lossy(group_size);
    let mut laws = Vec::new();
    for x in px.support() {
        let mut vals: Vec<(T, T)> = (0..ch.n_outputs())
            .filter(|&y| ch.p(x, y) > T::zero())
            .map(|y| (table.ratio(x, y), ch.p(x, y)))
            .collect();
        vals.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite ratios"));
        let mut distinct: Vec<(T, T)> = Vec::with_capacity(vals.len());
        for (v, q) in vals {
            match distinct.last_mut() {
                Some(last) if last.0 == v => last.1 = last.1 + q,
                _ => distinct.push((v, q)),
            }
        }
        // log P(max <= v_i) for every i, via the tail sums.
        let m = distinct.len();
        let mut log_cdf = vec![T::zero(); m];
        let mut tail = KahanSum::<T>::new();
        for i in (0..m).rev() {
            let s = tail.value().min(T::one());
            log_cdf[i] = if i + 1 == m {
                T::zero()
            } else {
                l * (-s).ln_1p()
            };
            tail.add(distinct[i].1);
        }
        let law = (0..m)
            .map(|i| {
                let g = log_cdf[i].exp();
                let pmax = if i == 0 {
                    g
                } else {
                    -g * (log_cdf[i - 1] - log_cdf[i]).exp_m1()
                };
                (distinct[i].0, pmax)
            })
            .collect();
        laws.push((px.p(x), law));
    }
    Ok(laws)
}

/// `E[(1 + J rho(W) max_{1..L} 2^iota(X;Y_k))^-1]` for the hybrid scheme
/// described by `scheme`; `J = K` gives [`theorem1_bound`], `J = 1` gives
/// [`baseline_bound`].
pub fn hybrid_bound<T: Real>(inst: &JsccInstance<T>, scheme: &SchemeDescriptor) -> Result<T> {
    if scheme.k() != inst.k {
        return Err(Error::InvalidParameter {
            name: "J",
            reason: format!(
                "J * L = {} * {} does not equal K = {}",
                scheme.groups(),
                scheme.group_size(),
                inst.k
            ),
        });
    }
    let laws = max_ratio_laws(&inst.p_x, &inst.channel, scheme.group_size())?;
    let cells: Vec<(T, T)> = laws
        .into_iter()
        .flat_map(|(px, law)| law.into_iter().map(move |(v, q)| (px * q, v)))
        .collect();
    let rho = inst.ball_masses();
    let outer = (0..inst.p_w.len()).map(|w| (inst.p_w.p(w), rho[w]));
    Ok(weighted_channel_average(
        outer,
        T::from_u64_lossy(scheme.groups()),
        &cells,
    ))
}

/// `E[(1 + rho(W) max_{1..K} 2^iota(X;Y_k))^-1]`.
pub fn baseline_bound<T: Real>(inst: &JsccInstance<T>) -> Result<T> {
    hybrid_bound(inst, &SchemeDescriptor::baseline(inst.k)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::DistortionMatrix;

    fn uni(n: usize) -> Pmf<f64> {
        Pmf::uniform(n).unwrap()
    }

    #[test]
    fn theorem1_collapses_for_useless_channel_and_full_ball() {
        for k in [1u64, 3, 8] {
            let inst = JsccInstance::new(
                Pmf::new(vec![0.3, 0.7]).unwrap(),
                uni(2),
                uni(3),
                Kernel::bsc(0.5).unwrap(),
                DistortionMatrix::new(vec![vec![0.0, 1.0, 2.0], vec![2.0, 1.0, 0.0]]).unwrap(),
                2.0,
                k,
            )
            .unwrap();
            let b = theorem1_bound(&inst).unwrap();
            assert!((b - 1.0 / (1.0 + k as f64)).abs() < 1e-15);
        }
    }

    #[test]
    fn theorem1_noiseless_binary_k1() {
        let inst =
            JsccInstance::near_lossless(uni(2), uni(2), Kernel::bsc(0.0).unwrap(), 1).unwrap();
        assert!((theorem1_bound(&inst).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn theorem1_monotone_in_k() {
        let inst = JsccInstance::near_lossless(
            Pmf::new(vec![0.2, 0.5, 0.3]).unwrap(),
            Pmf::new(vec![0.6, 0.4]).unwrap(),
            Kernel::new(vec![vec![0.7, 0.2, 0.1], vec![0.1, 0.3, 0.6]]).unwrap(),
            1,
        )
        .unwrap();
        let vals: Vec<f64> = [1, 2, 4]
            .iter()
            .map(|&k| theorem1_bound(&inst.with_k(k).unwrap()).unwrap())
            .collect();
        assert!(vals[0] >= vals[1] && vals[1] >= vals[2]);
    }

    #[test]
    fn lossless_useless_channel() {
        let pw = Pmf::new(vec![0.2, 0.5, 0.3]).unwrap();
        let b = corollary1_lossless_bound(&pw, &uni(2), &Kernel::bsc(0.5).unwrap(), 3).unwrap();
        let expect: f64 = pw.probs().iter().map(|p| p / (1.0 + 3.0 * p)).sum();
        assert!((b - expect).abs() < 1e-15);
    }

    #[test]
    fn lossless_uniform_source() {
        let m = 4usize;
        let ch = Kernel::new(vec![vec![0.9, 0.1], vec![0.25, 0.75]]).unwrap();
        let px = Pmf::new(vec![0.4, 0.6]).unwrap();
        let k = 3u64;
        let b = corollary1_lossless_bound(&uni(m), &px, &ch, k).unwrap();
        let table = information_density(&px, &ch).unwrap();
        let mut expect = 0.0;
        for x in 0..2 {
            for y in 0..2 {
                expect +=
                    px.p(x) * ch.p(x, y) / (1.0 + k as f64 / m as f64 * table.iota(x, y).exp2());
            }
        }
        assert!((b - expect).abs() < 1e-14);
    }

    #[test]
    fn slepian_wolf_identity_side_info() {
        let pw = Pmf::new(vec![0.2, 0.5, 0.3]).unwrap();
        let ch = Kernel::bsc(0.2).unwrap();
        let b = corollary1_slepian_wolf_bound(&pw, &Kernel::identity(3).unwrap(), &uni(2), &ch, 2)
            .unwrap();
        let pw1 = Pmf::new(vec![1.0]).unwrap();
        let expect = corollary1_lossless_bound(&pw1, &uni(2), &ch, 2).unwrap();
        assert!((b - expect).abs() < 1e-15);
    }

    #[test]
    fn baseline_k1_equals_theorem1() {
        let inst =
            JsccInstance::near_lossless(uni(3), uni(2), Kernel::bsc(0.1).unwrap(), 1).unwrap();
        let a = theorem1_bound(&inst).unwrap();
        let b = baseline_bound(&inst).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn baseline_useless_channel_independent_of_k() {
        let pw = Pmf::new(vec![0.25, 0.75]).unwrap();
        let expect: f64 = pw.probs().iter().map(|p| p / (1.0 + p)).sum();
        for k in [1u64, 5, 1 << 20] {
            let inst =
                JsccInstance::near_lossless(pw.clone(), uni(2), Kernel::bsc(0.5).unwrap(), k)
                    .unwrap();
            assert!((baseline_bound(&inst).unwrap() - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn hybrid_rejects_mismatched_k() {
        let inst =
            JsccInstance::near_lossless(uni(2), uni(2), Kernel::bsc(0.1).unwrap(), 4).unwrap();
        assert!(hybrid_bound(&inst, &SchemeDescriptor::hybrid(3, 1).unwrap()).is_err());
    }

    #[test]
    fn bounds_in_unit_interval_f32() {
        let inst = JsccInstance::<f32>::near_lossless(
            Pmf::uniform(3).unwrap(),
            Pmf::uniform(2).unwrap(),
            Kernel::bsc(0.1).unwrap(),
            4,
        )
        .unwrap();
        for b in [
            theorem1_bound(&inst).unwrap(),
            baseline_bound(&inst).unwrap(),
            hybrid_bound(&inst, &SchemeDescriptor::hybrid(2, 2).unwrap()).unwrap(),
        ] {
            assert!((0.0..=1.0).contains(&b));
        }
    }
}
