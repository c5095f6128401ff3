//! Realizations of the labelled Poisson codebook.
//!
//! Every selection rule used by the coding schemes scores a point as
//! `tau * weight(cell)`. For a fixed cell and label the smallest score is
//! always the earliest arrival, so the per-(cell, label) first-arrival
//! times are a sufficient statistic of the whole process
//! ([`ArrivalTable`]). [`StreamCodebook`] instead generates the process
//! point by point in time order and stops once no later point can win; the
//! two backends are independent constructions of the same selections.

use std::ops::Range;

use rand::distr::{weighted::WeightedIndex, Distribution};
use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::rng::TrialRng;

/// Which codebook realization a simulator uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    CellTable,
    Stream,
}

impl Backend {
    pub fn as_str(self) -> &'static str {
        match self {
            Backend::CellTable => "cell_table",
            Backend::Stream => "stream",
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cell_table" | "table" => Ok(Self::CellTable),
            "stream" => Ok(Self::Stream),
            other => Err(crate::error::invalid(
                "backend",
                format!("unknown backend `{other}`"),
            )),
        }
    }
}

/// The point chosen by a selection rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Selection {
    pub cell: usize,
    pub label: u64,
    pub tau: f64,
    pub score: f64,
}

impl Selection {
    /// Strict order used for argmin: score, then arrival time, then cell.
    fn beats(&self, other: &Selection) -> bool {
        (self.score, self.tau, self.cell) < (other.score, other.tau, other.cell)
    }
}

/// A realization of the labelled process that can answer argmin queries.
///
/// `weight(cell)` multiplies the arrival time; `f64::INFINITY` marks a cell
/// as inadmissible. `labels` restricts the query to a sub-codebook range,
/// `None` searches all labels.
pub trait Codebook {
    fn select(
        &mut self,
        weight: &dyn Fn(usize) -> f64,
        labels: Option<Range<u64>>,
    ) -> Result<Option<Selection>>;

    /// Exact score ties observed so far (a measure-zero event).
    fn ties(&self) -> u64;
}

/// First arrival time of every `(cell, label)` pair. Cell `c` with
/// intensity `lambda_c` has, per label, an `Exp(lambda_c / labels)` first
/// arrival.
#[derive(Debug, Clone)]
pub struct ArrivalTable {
    labels: u64,
    t_first: Vec<f64>,
    ties: u64,
}

impl ArrivalTable {
    /// Draws a fresh table. All intensities must be strictly positive.
    pub fn generate(rng: &mut TrialRng, intensities: &[f64], labels: u64) -> Self {
        let nl = labels as usize;
        let mut t_first = Vec::with_capacity(intensities.len() * nl);
        for &lambda in intensities {
            debug_assert!(lambda > 0.0);
            let rate = lambda / labels as f64;
            for _ in 0..nl {
                let e: f64 = rng.sample(Exp1);
                t_first.push(e / rate);
            }
        }
        Self {
            labels,
            t_first,
            ties: 0,
        }
    }

    pub fn n_cells(&self) -> usize {
        self.t_first.len() / self.labels as usize
    }

    pub fn labels(&self) -> u64 {
        self.labels
    }

    #[inline]
    pub fn t_first(&self, cell: usize, label: u64) -> f64 {
        self.t_first[cell * self.labels as usize + label as usize]
    }
}

impl Codebook for ArrivalTable {
    fn select(
        &mut self,
        weight: &dyn Fn(usize) -> f64,
        labels: Option<Range<u64>>,
    ) -> Result<Option<Selection>> {
        let labels = labels.unwrap_or(0..self.labels);
        let mut best: Option<Selection> = None;
        for cell in 0..self.n_cells() {
            let r = weight(cell);
            if !r.is_finite() {
                continue;
            }
            for label in labels.clone() {
                let tau = self.t_first(cell, label);
                let cand = Selection {
                    cell,
                    label,
                    tau,
                    score: tau * r,
                };
                match &best {
                    Some(b) if !cand.beats(b) => {
                        if cand.score == b.score {
                            self.ties += 1;
                        }
                    }
                    Some(b) => {
                        if cand.score == b.score {
                            self.ties += 1;
                        }
                        best = Some(cand);
                    }
                    None => best = Some(cand),
                }
            }
        }
        Ok(best)
    }

    fn ties(&self) -> u64 {
        self.ties
    }
}

/// Lazily generated points `(tau_i, cell_i, label_i)` in increasing time.
///
/// Gaps are `Exp(total intensity)`, cells are drawn proportionally to
/// their intensity and labels uniformly. Generated points are kept so that
/// every selection in a trial sees the same process.
pub struct StreamCodebook<'a> {
    rng: TrialRng,
    intensities: &'a [f64],
    cell_dist: WeightedIndex<f64>,
    total: f64,
    labels: u64,
    clock: f64,
    points: Vec<(f64, usize, u64)>,
    ties: u64,
}

impl<'a> StreamCodebook<'a> {
    pub fn new(rng: TrialRng, intensities: &'a [f64], labels: u64) -> Result<Self> {
        let cell_dist = WeightedIndex::new(intensities)
            .map_err(|e| crate::error::invalid("intensities", e.to_string()))?;
        let total = intensities.iter().sum();
        Ok(Self {
            rng,
            intensities,
            cell_dist,
            total,
            labels,
            clock: 0.0,
            points: Vec::new(),
            ties: 0,
        })
    }

    fn point(&mut self, i: usize) -> (f64, usize, u64) {
        while self.points.len() <= i {
            let gap: f64 = self.rng.sample(Exp1);
            self.clock += gap / self.total;
            let cell = self.cell_dist.sample(&mut self.rng);
            let label = self.rng.random_range(0..self.labels);
            self.points.push((self.clock, cell, label));
        }
        self.points[i]
    }

    pub fn generated(&self) -> usize {
        self.points.len()
    }
}

impl Codebook for StreamCodebook<'_> {
    fn select(
        &mut self,
        weight: &dyn Fn(usize) -> f64,
        labels: Option<Range<u64>>,
    ) -> Result<Option<Selection>> {
        stream_select(self, weight, labels)
    }

    fn ties(&self) -> u64 {
        self.ties
    }
}

/// Exact argmin of `tau * weight(cell)` over the infinite process.
///
/// Points are visited in time order; with `r_min` the smallest admissible
/// weight, once `tau_i >= s* / r_min` no later point can score below the
/// current best `s*`.
pub fn stream_select(
    codebook: &mut StreamCodebook<'_>,
    weight: &dyn Fn(usize) -> f64,
    labels: Option<Range<u64>>,
) -> Result<Option<Selection>> {
    let labels = labels.unwrap_or(0..codebook.labels);
    if labels.is_empty() {
        return Ok(None);
    }
    let mut r_min = f64::INFINITY;
    for cell in 0..codebook.intensities.len() {
        let r = weight(cell);
        if r.is_finite() {
            r_min = r_min.min(r);
        }
    }
    if r_min.is_infinite() {
        return Ok(None);
    }
    if r_min <= 0.0 {
        return Err(Error::Unsupported(
            "stopping rule needs a strictly positive minimum weight".into(),
        ));
    }
    let mut best: Option<Selection> = None;
    let mut i = 0;
    loop {
        let (tau, cell, label) = codebook.point(i);
        i += 1;
        if let Some(b) = &best {
            if tau >= b.score / r_min {
                return Ok(best);
            }
        }
        if !labels.contains(&label) {
            continue;
        }
        let r = weight(cell);
        if !r.is_finite() {
            continue;
        }
        let cand = Selection {
            cell,
            label,
            tau,
            score: tau * r,
        };
        match &best {
            Some(b) if cand.score == b.score => {
                codebook.ties += 1;
                if cand.beats(b) {
                    best = Some(cand);
                }
            }
            Some(b) if !cand.beats(b) => {}
            _ => best = Some(cand),
        }
    }
}
