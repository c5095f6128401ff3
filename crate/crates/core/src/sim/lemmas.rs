//! Empirical checks of the list Poisson matching lemmas.

use rand::distr::{weighted::WeightedIndex, Distribution};

use crate::error::{invalid, Error, Result};
use crate::prob::{Kernel, Pmf};
use crate::sim::codebook::{ArrivalTable, Codebook};
use crate::sim::result::{MismatchCell, MismatchReport};
use crate::sim::runner::{run_trials, RunConfig, Tally};

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

/// Per-cell counters keyed by `x * n_u + u`.
struct CellTally {
    count: Vec<u64>,
    mismatches: Vec<u64>,
    rhs: Vec<f64>,
    ties: u64,
}

impl CellTally {
    fn new(n: usize) -> Self {
        Self {
            count: vec![0; n],
            mismatches: vec![0; n],
            rhs: vec![0.0; n],
            ties: 0,
        }
    }

    fn record(&mut self, key: usize, mismatch: bool, rhs: f64) {
        self.count[key] += 1;
        self.mismatches[key] += mismatch as u64;
        self.rhs[key] += rhs;
    }

    fn report(self, n_u: usize, conditional: bool) -> MismatchReport {
        let trials = self.count.iter().sum();
        let mismatches = self.mismatches.iter().sum();
        let rhs_total: f64 = self.rhs.iter().sum();
        let cells = (0..self.count.len())
            .filter(|&i| self.count[i] > 0)
            .map(|i| MismatchCell {
                x: conditional.then_some(i / n_u),
                u: i % n_u,
                count: self.count[i],
                mismatches: self.mismatches[i],
                rhs: self.rhs[i] / self.count[i] as f64,
            })
            .collect();
        MismatchReport {
            trials,
            mismatches,
            rhs: rhs_total / trials.max(1) as f64,
            ties: self.ties,
            cells,
        }
    }
}

impl Tally for CellTally {
    fn merge(&mut self, o: Self) {
        for i in 0..self.count.len() {
            self.count[i] += o.count[i];
            self.mismatches[i] += o.mismatches[i];
            self.rhs[i] += o.rhs[i];
        }
        self.ties += o.ties;
    }
}

/// One encoder scoring with `p` over the whole process, `k` decoders each
/// scoring with `q` over their own label. Reports, per selected symbol, the
/// frequency with which no decoder recovers it next to the bound
/// `1 - (1 + p(u) / (k q(u)))^-1`.
pub fn simulate_list_pml(
    p: &Pmf<f64>,
    q: &Pmf<f64>,
    k: u64,
    cfg: &RunConfig,
) -> Result<MismatchReport> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            what: "q",
            expected: p.len(),
            got: q.len(),
        });
    }
    if k < 1 {
        return Err(invalid("k", "need at least one decoder"));
    }
    let n_u = p.len();
    let unit = vec![1.0; n_u];
    let rhs: Vec<f64> = (0..n_u)
        .map(|u| {
            if q.p(u) == 0.0 {
                1.0
            } else {
                1.0 - 1.0 / (1.0 + p.p(u) / (k as f64 * q.p(u)))
            }
        })
        .collect();
    let tally = run_trials(
        cfg,
        || CellTally::new(n_u),
        |rng, acc| {
            let mut table = ArrivalTable::generate(rng, &unit, k);
            let enc = table
                .select(&|u| inv_or_inf(p.p(u)), None)?
                .expect("p has positive mass somewhere");
            let mut matched = false;
            for label in 0..k {
                let dec = table.select(&|u| inv_or_inf(q.p(u)), Some(label..label + 1))?;
                matched |= dec.is_some_and(|d| d.cell == enc.cell);
            }
            acc.ties += table.ties();
            acc.record(enc.cell, !matched, rhs[enc.cell]);
            Ok(())
        },
    )?;
    Ok(tally.report(n_u, false))
}

/// Joint law for the conditional lemma: `X ~ p_x`, the encoder scores with
/// `P(u|x)`, each decoder observes `Y ~ P(.|x, u)` and scores with `Q(u|y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalPmlInstance {
    pub p_x: Pmf<f64>,
    pub u_given_x: Kernel<f64>,
    /// Rows indexed by `x * |U| + u`.
    pub y_given_xu: Kernel<f64>,
    pub q_u_given_y: Kernel<f64>,
}

impl ConditionalPmlInstance {
    pub fn new(
        p_x: Pmf<f64>,
        u_given_x: Kernel<f64>,
        y_given_xu: Kernel<f64>,
        q_u_given_y: Kernel<f64>,
    ) -> Result<Self> {
        u_given_x.check_input(&p_x, "u_given_x")?;
        let n_u = u_given_x.n_outputs();
        let dims = [
            ("y_given_xu", p_x.len() * n_u, y_given_xu.n_inputs()),
            (
                "q_u_given_y",
                y_given_xu.n_outputs(),
                q_u_given_y.n_inputs(),
            ),
            ("q_u_given_y", n_u, q_u_given_y.n_outputs()),
        ];
        for (what, expected, got) in dims {
            if expected != got {
                return Err(Error::DimensionMismatch {
                    what,
                    expected,
                    got,
                });
            }
        }
        Ok(Self {
            p_x,
            u_given_x,
            y_given_xu,
            q_u_given_y,
        })
    }

    pub fn n_u(&self) -> usize {
        self.u_given_x.n_outputs()
    }
}

/// `J` disjoint sub-codebooks, each shared by `L` decoders. Per
/// `(x, u_p)` cell, reports the frequency with which no decoder recovers the
/// encoder's symbol and the mean over the same trials of
/// `1 - sum_j (J + min_{k in group j} P(u_p|x) / Q(u_p|y_k))^-1`.
pub fn simulate_conditional_list_pml(
    inst: &ConditionalPmlInstance,
    groups: u64,
    group_size: u64,
    cfg: &RunConfig,
) -> Result<MismatchReport> {
    if groups < 1 || group_size < 1 {
        return Err(invalid("groups", "J and L must be at least 1"));
    }
    let n_u = inst.n_u();
    let n_x = inst.p_x.len();
    let unit = vec![1.0; n_u];
    let x_dist = sampler(inst.p_x.probs(), "p_x")?;
    let y_dist = (0..n_x * n_u)
        .map(|r| sampler(inst.y_given_xu.row(r), "y_given_xu"))
        .collect::<Result<Vec<_>>>()?;
    let tally = run_trials(
        cfg,
        || CellTally::new(n_x * n_u),
        |rng, acc| {
            let x = x_dist.sample(rng);
            let mut table = ArrivalTable::generate(rng, &unit, groups);
            let enc = table
                .select(&|u| inv_or_inf(inst.u_given_x.p(x, u)), None)?
                .expect("P(.|x) has positive mass somewhere");
            let u_p = enc.cell;
            let p_up = inst.u_given_x.p(x, u_p);
            let mut matched = false;
            let mut rhs = 1.0;
            for j in 0..groups {
                let mut min_ratio = f64::INFINITY;
                for _ in 0..group_size {
                    let yk = y_dist[x * n_u + u_p].sample(rng);
                    let q_up = inst.q_u_given_y.p(yk, u_p);
                    min_ratio = min_ratio.min(p_up * inv_or_inf(q_up));
                    let dec =
                        table.select(&|u| inv_or_inf(inst.q_u_given_y.p(yk, u)), Some(j..j + 1))?;
                    matched |= dec.is_some_and(|d| d.cell == u_p);
                }
                rhs -= 1.0 / (groups as f64 + min_ratio);
            }
            acc.ties += table.ties();
            acc.record(x * n_u + u_p, !matched, rhs);
            Ok(())
        },
    )?;
    Ok(tally.report(n_u, true))
}
