//! End-to-end simulation of the broadcast coding schemes.

use std::ops::Range;

use rand::distr::{weighted::WeightedIndex, Distribution};
use rand::{Rng, SeedableRng};

use crate::bounds::{JsccInstance, SchemeDescriptor, WzInstance};
use crate::error::{invalid, Error, Result};
use crate::prob::{Kernel, Pmf};
use crate::sim::codebook::{ArrivalTable, Backend, Codebook, StreamCodebook};
use crate::sim::result::TrialBatchResult;
use crate::sim::rng::TrialRng;
use crate::sim::runner::{run_trials, RunConfig};

fn inv_or_inf(p: f64) -> f64 {
    if p > 0.0 {
        1.0 / p
    } else {
        f64::INFINITY
    }
}

fn sampler(probs: &[f64], what: &'static str) -> Result<WeightedIndex<f64>> {
    WeightedIndex::new(probs).map_err(|e| invalid(what, e.to_string()))
}

fn row_samplers(k: &Kernel<f64>, what: &'static str) -> Result<Vec<WeightedIndex<f64>>> {
    (0..k.n_inputs()).map(|r| sampler(k.row(r), what)).collect()
}

/// The stream backend bounds its search with the smallest decoder weight,
/// which needs every reachable transition to have positive probability.
fn stream_guard(px: &Pmf<f64>, ch: &Kernel<f64>) -> Result<()> {
    let py = ch.output_marginal(px)?;
    for x in px.support() {
        for y in py.support() {
            if ch.p(x, y) == 0.0 {
                return Err(Error::Unsupported(format!(
                    "stream backend needs P(y|x) > 0 on reachable pairs; P({y}|{x}) = 0"
                )));
            }
        }
    }
    Ok(())
}

/// Runs `body` against a freshly drawn codebook of the requested backend.
fn with_codebook<R>(
    backend: Backend,
    rng: &mut TrialRng,
    intensities: &[f64],
    labels: u64,
    body: impl FnOnce(&mut dyn Codebook, &mut TrialRng) -> Result<R>,
) -> Result<R> {
    match backend {
        Backend::CellTable => {
            let mut table = ArrivalTable::generate(rng, intensities, labels);
            body(&mut table, rng)
        }
        Backend::Stream => {
            let cb_rng = TrialRng::seed_from_u64(rng.random());
            let mut stream = StreamCodebook::new(cb_rng, intensities, labels)?;
            body(&mut stream, rng)
        }
    }
}

/// Precomputed tables for the ball-constrained encoder and the
/// likelihood-scoring decoders.
pub struct JsccSimulator<'a> {
    inst: &'a JsccInstance<f64>,
    scheme: SchemeDescriptor,
    /// `(x, z)` pairs with positive intensity.
    cells: Vec<(usize, usize)>,
    intensities: Vec<f64>,
    rho: Vec<f64>,
    w_dist: WeightedIndex<f64>,
    y_dist: Vec<WeightedIndex<f64>>,
}

impl<'a> JsccSimulator<'a> {
    pub fn new(inst: &'a JsccInstance<f64>, scheme: SchemeDescriptor) -> Result<Self> {
        if scheme.k() != inst.k {
            return Err(invalid(
                "scheme",
                format!(
                    "scheme has {} decoders, instance has {}",
                    scheme.k(),
                    inst.k
                ),
            ));
        }
        let mut cells = Vec::new();
        let mut intensities = Vec::new();
        for x in inst.p_x.support() {
            for z in inst.p_z.support() {
                cells.push((x, z));
                intensities.push(inst.p_x.p(x) * inst.p_z.p(z));
            }
        }
        Ok(Self {
            inst,
            scheme,
            cells,
            intensities,
            rho: inst.ball_masses(),
            w_dist: sampler(inst.p_w.probs(), "p_w")?,
            y_dist: row_samplers(&inst.channel, "channel")?,
        })
    }

    pub fn cells(&self) -> &[(usize, usize)] {
        &self.cells
    }

    pub fn intensities(&self) -> &[f64] {
        &self.intensities
    }

    fn in_ball(&self, w: usize, z: usize) -> bool {
        self.inst.distortion.in_ball(w, z, self.inst.threshold)
    }

    /// Earliest arrival inside the distortion ball of `w`, returned as its
    /// `(x, z)` cell. `None` when the ball has no mass.
    pub fn encode(&self, cb: &mut dyn Codebook, w: usize) -> Result<Option<(usize, usize)>> {
        let rho = self.rho[w];
        if rho == 0.0 {
            return Ok(None);
        }
        let sel = cb.select(
            &|c| {
                if self.in_ball(w, self.cells[c].1) {
                    rho
                } else {
                    f64::INFINITY
                }
            },
            None,
        )?;
        Ok(sel.map(|s| self.cells[s.cell]))
    }

    /// Reconstruction of a decoder that observed `y` and searches `labels`.
    fn decode(&self, cb: &mut dyn Codebook, y: usize, labels: Range<u64>) -> Result<Option<usize>> {
        let ch = &self.inst.channel;
        let sel = cb.select(&|c| inv_or_inf(ch.p(self.cells[c].0, y)), Some(labels))?;
        Ok(sel.map(|s| self.cells[s.cell].1))
    }

    fn trial(
        &self,
        backend: Backend,
        rng: &mut TrialRng,
        acc: &mut TrialBatchResult,
    ) -> Result<()> {
        acc.trials += 1;
        let w = self.w_dist.sample(rng);
        if self.rho[w] == 0.0 {
            acc.errors += 1;
            acc.per_decoder_errors.iter_mut().for_each(|e| *e += 1);
            return Ok(());
        }
        let ties = with_codebook(
            backend,
            rng,
            &self.intensities,
            self.scheme.groups(),
            |cb, rng| {
                let (x, _) = self
                    .encode(cb, w)?
                    .ok_or_else(|| invalid("p_z", "encoder found no admissible cell"))?;
                let mut any_ok = false;
                for k in 0..self.scheme.k() {
                    let y = self.y_dist[x].sample(rng);
                    let label = self.scheme.label_of(k);
                    let ok = self
                        .decode(cb, y, label..label + 1)?
                        .is_some_and(|z| self.in_ball(w, z));
                    if !ok {
                        acc.per_decoder_errors[k as usize] += 1;
                    }
                    any_ok |= ok;
                }
                if !any_ok {
                    acc.errors += 1;
                }
                Ok(cb.ties())
            },
        )?;
        acc.ties += ties;
        Ok(())
    }
}

/// Monte-Carlo error probability of a disjoint, baseline or hybrid scheme.
pub fn simulate_scheme(
    inst: &JsccInstance<f64>,
    scheme: &SchemeDescriptor,
    backend: Backend,
    cfg: &RunConfig,
) -> Result<TrialBatchResult> {
    let sim = JsccSimulator::new(inst, *scheme)?;
    if backend == Backend::Stream {
        stream_guard(&inst.p_x, &inst.channel)?;
    }
    let k = scheme.k() as usize;
    run_trials(
        cfg,
        || TrialBatchResult::new(k),
        |rng, acc| sim.trial(backend, rng, acc),
    )
}

/// Disjoint schemes for several `K` on common random numbers.
///
/// One table with `K_max` labels is drawn per trial; the scheme with `K`
/// decoders merges consecutive blocks of `K_max / K` labels (a union of
/// independent labels is again a label of the coarser split), and decoder
/// `k` reuses the `k`-th channel output. Every `K` must divide `K_max`.
pub fn simulate_disjoint_nested(
    inst: &JsccInstance<f64>,
    ks: &[u64],
    cfg: &RunConfig,
) -> Result<Vec<TrialBatchResult>> {
    let k_max = ks
        .iter()
        .copied()
        .max()
        .ok_or_else(|| invalid("ks", "empty"))?;
    if let Some(&bad) = ks.iter().find(|&&k| k == 0 || k_max % k != 0) {
        return Err(invalid("ks", format!("{bad} does not divide {k_max}")));
    }
    let top = inst.with_k(k_max)?;
    let sim = JsccSimulator::new(&top, SchemeDescriptor::disjoint(k_max)?)?;
    run_trials(
        cfg,
        || {
            ks.iter()
                .map(|&k| TrialBatchResult::new(k as usize))
                .collect::<Vec<_>>()
        },
        |rng, acc| {
            let w = sim.w_dist.sample(rng);
            for r in acc.iter_mut() {
                r.trials += 1;
            }
            if sim.rho[w] == 0.0 {
                for r in acc.iter_mut() {
                    r.errors += 1;
                    r.per_decoder_errors.iter_mut().for_each(|e| *e += 1);
                }
                return Ok(());
            }
            let mut table = ArrivalTable::generate(rng, &sim.intensities, k_max);
            let (x, _) = sim
                .encode(&mut table, w)?
                .ok_or_else(|| invalid("p_z", "encoder found no admissible cell"))?;
            let ys: Vec<usize> = (0..k_max).map(|_| sim.y_dist[x].sample(rng)).collect();
            for (r, &k) in acc.iter_mut().zip(ks) {
                let f = k_max / k;
                let mut any_ok = false;
                for d in 0..k {
                    let ok = sim
                        .decode(&mut table, ys[d as usize], d * f..(d + 1) * f)?
                        .is_some_and(|z| sim.in_ball(w, z));
                    if !ok {
                        r.per_decoder_errors[d as usize] += 1;
                    }
                    any_ok |= ok;
                }
                if !any_ok {
                    r.errors += 1;
                }
            }
            let ties = table.ties();
            acc[0].ties += ties;
            Ok(())
        },
    )
}

/// Precomputed tables for the side-information scheme.
struct WzSimulator<'a> {
    inst: &'a WzInstance<f64>,
    cells: Vec<(usize, usize)>,
    intensities: Vec<f64>,
    p_u: Pmf<f64>,
    u_given_t: Vec<Option<Vec<f64>>>,
    w_dist: WeightedIndex<f64>,
    y_dist: Vec<WeightedIndex<f64>>,
    t_dist: Vec<WeightedIndex<f64>>,
}

impl<'a> WzSimulator<'a> {
    fn new(inst: &'a WzInstance<f64>) -> Result<Self> {
        let p_u = inst.p_u();
        let mut cells = Vec::new();
        let mut intensities = Vec::new();
        for x in inst.p_x.support() {
            for u in p_u.support() {
                cells.push((x, u));
                intensities.push(inst.p_x.p(x) * p_u.p(u));
            }
        }
        Ok(Self {
            inst,
            cells,
            intensities,
            u_given_t: inst.u_given_t(),
            p_u,
            w_dist: sampler(inst.p_w.probs(), "p_w")?,
            y_dist: row_samplers(&inst.channel, "channel")?,
            t_dist: row_samplers(&inst.t_given_w, "t_given_w")?,
        })
    }

    fn trial(
        &self,
        backend: Backend,
        rng: &mut TrialRng,
        acc: &mut TrialBatchResult,
    ) -> Result<()> {
        let inst = self.inst;
        acc.trials += 1;
        let w = self.w_dist.sample(rng);
        let ties = with_codebook(backend, rng, &self.intensities, inst.k, |cb, rng| {
            let enc = cb
                .select(
                    &|c| {
                        let u = self.cells[c].1;
                        self.p_u.p(u) * inv_or_inf(inst.u_given_w.p(w, u))
                    },
                    None,
                )?
                .ok_or_else(|| invalid("u_given_w", "encoder found no admissible cell"))?;
            let x = self.cells[enc.cell].0;
            let mut any_ok = false;
            for k in 0..inst.k {
                let y = self.y_dist[x].sample(rng);
                let t = self.t_dist[w].sample(rng);
                let post = self.u_given_t[t].as_deref();
                let dec = cb.select(
                    &|c| {
                        let (xc, u) = self.cells[c];
                        let q = post.map_or(0.0, |row| row[u]);
                        self.p_u.p(u) * inv_or_inf(inst.channel.p(xc, y) * q)
                    },
                    Some(k..k + 1),
                )?;
                let ok = dec.is_some_and(|s| {
                    let z = inst.phi[self.cells[s.cell].1][t];
                    inst.distortion.in_ball(w, z, inst.threshold)
                });
                if !ok {
                    acc.per_decoder_errors[k as usize] += 1;
                }
                any_ok |= ok;
            }
            if !any_ok {
                acc.errors += 1;
            }
            Ok(cb.ties())
        })?;
        acc.ties += ties;
        Ok(())
    }
}

/// Monte-Carlo error probability of the side-information scheme with `K`
/// disjoint sub-codebooks.
pub fn simulate_wz_scheme(
    inst: &WzInstance<f64>,
    backend: Backend,
    cfg: &RunConfig,
) -> Result<TrialBatchResult> {
    let sim = WzSimulator::new(inst)?;
    if backend == Backend::Stream {
        stream_guard(&inst.p_x, &inst.channel)?;
    }
    run_trials(
        cfg,
        || TrialBatchResult::new(inst.k as usize),
        |rng, acc| sim.trial(backend, rng, acc),
    )
}
