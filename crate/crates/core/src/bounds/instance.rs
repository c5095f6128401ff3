use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::prob::{DistortionMatrix, Kernel, Pmf};
use crate::scalar::Real;

/// Source, channel and codebook distributions of the broadcast problem
/// without side information.
#[derive(Debug, Clone, PartialEq)]
pub struct JsccInstance<T> {
    pub p_w: Pmf<T>,
    pub p_x: Pmf<T>,
    pub p_z: Pmf<T>,
    pub channel: Kernel<T>,
    pub distortion: DistortionMatrix<T>,
    pub threshold: T,
    pub k: u64,
}

impl<T: Real> JsccInstance<T> {
    pub fn new(
        p_w: Pmf<T>,
        p_x: Pmf<T>,
        p_z: Pmf<T>,
        channel: Kernel<T>,
        distortion: DistortionMatrix<T>,
        threshold: T,
        k: u64,
    ) -> Result<Self> {
        channel.check_input(&p_x, "P_X vs channel inputs")?;
        if distortion.n_sources() != p_w.len() {
            return Err(Error::DimensionMismatch {
                what: "P_W vs distortion rows",
                expected: distortion.n_sources(),
                got: p_w.len(),
            });
        }
        if distortion.n_reconstructions() != p_z.len() {
            return Err(Error::DimensionMismatch {
                what: "P_Z vs distortion columns",
                expected: distortion.n_reconstructions(),
                got: p_z.len(),
            });
        }
        if !(threshold >= T::zero()) {
            return Err(invalid("D", format!("{threshold} must be >= 0")));
        }
        if k == 0 {
            return Err(invalid("K", "must be at least 1"));
        }
        Ok(Self {
            p_w,
            p_x,
            p_z,
            channel,
            distortion,
            threshold,
            k,
        })
    }

    /// Hamming distortion, `D = 0` and `P_Z = P_W`.
    pub fn near_lossless(p_w: Pmf<T>, p_x: Pmf<T>, channel: Kernel<T>, k: u64) -> Result<Self> {
        let n = p_w.len();
        Self::new(
            p_w.clone(),
            p_x,
            p_w,
            channel,
            DistortionMatrix::hamming(n)?,
            T::zero(),
            k,
        )
    }

    pub fn with_k(&self, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(invalid("K", "must be at least 1"));
        }
        Ok(Self { k, ..self.clone() })
    }

    /// `rho(w)` for every source symbol.
    pub fn ball_masses(&self) -> Vec<T> {
        (0..self.p_w.len())
            .map(|w| self.distortion.ball_mass(&self.p_z, self.threshold, w))
            .collect()
    }
}

/// Instance of the side-information (Wyner-Ziv) problem. `phi[u][t]` is
/// the reconstruction symbol produced from auxiliary `u` and side
/// information `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct WzInstance<T> {
    pub p_w: Pmf<T>,
    pub u_given_w: Kernel<T>,
    pub t_given_w: Kernel<T>,
    pub phi: Vec<Vec<usize>>,
    pub p_x: Pmf<T>,
    pub channel: Kernel<T>,
    pub distortion: DistortionMatrix<T>,
    pub threshold: T,
    pub k: u64,
}

impl<T: Real> WzInstance<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        p_w: Pmf<T>,
        u_given_w: Kernel<T>,
        t_given_w: Kernel<T>,
        phi: Vec<Vec<usize>>,
        p_x: Pmf<T>,
        channel: Kernel<T>,
        distortion: DistortionMatrix<T>,
        threshold: T,
        k: u64,
    ) -> Result<Self> {
        u_given_w.check_input(&p_w, "P_W vs P_U|W inputs")?;
        t_given_w.check_input(&p_w, "P_W vs P_T|W inputs")?;
        channel.check_input(&p_x, "P_X vs channel inputs")?;
        if distortion.n_sources() != p_w.len() {
            return Err(Error::DimensionMismatch {
                what: "P_W vs distortion rows",
                expected: distortion.n_sources(),
                got: p_w.len(),
            });
        }
        if phi.len() != u_given_w.n_outputs() {
            return Err(Error::DimensionMismatch {
                what: "phi rows vs |U|",
                expected: u_given_w.n_outputs(),
                got: phi.len(),
            });
        }
        for row in &phi {
            if row.len() != t_given_w.n_outputs() {
                return Err(Error::DimensionMismatch {
                    what: "phi columns vs |T|",
                    expected: t_given_w.n_outputs(),
                    got: row.len(),
                });
            }
            if let Some(z) = row.iter().find(|&&z| z >= distortion.n_reconstructions()) {
                return Err(invalid("phi", format!("reconstruction {z} out of range")));
            }
        }
        if !(threshold >= T::zero()) {
            return Err(invalid("D", format!("{threshold} must be >= 0")));
        }
        if k == 0 {
            return Err(invalid("K", "must be at least 1"));
        }
        Ok(Self {
            p_w,
            u_given_w,
            t_given_w,
            phi,
            p_x,
            channel,
            distortion,
            threshold,
            k,
        })
    }

    pub fn p_u(&self) -> Pmf<T> {
        self.u_given_w
            .output_marginal(&self.p_w)
            .expect("validated dimensions")
    }

    pub fn p_t(&self) -> Pmf<T> {
        self.t_given_w
            .output_marginal(&self.p_w)
            .expect("validated dimensions")
    }

    /// `P(u | t)` under the Markov chain `U - W - T`; `None` where
    /// `P_T(t) = 0`.
    pub fn u_given_t(&self) -> Vec<Option<Vec<T>>> {
        let p_t = self.p_t();
        let (nu, nt) = (self.u_given_w.n_outputs(), self.t_given_w.n_outputs());
        (0..nt)
            .map(|t| {
                (p_t.p(t) > T::zero()).then(|| {
                    (0..nu)
                        .map(|u| {
                            crate::scalar::ksum((0..self.p_w.len()).map(|w| {
                                self.p_w.p(w) * self.u_given_w.p(w, u) * self.t_given_w.p(w, t)
                            })) / p_t.p(t)
                        })
                        .collect()
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    Disjoint,
    Baseline,
    Hybrid,
}

impl SchemeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SchemeKind::Disjoint => "disjoint",
            SchemeKind::Baseline => "baseline",
            SchemeKind::Hybrid => "hybrid",
        }
    }
}

impl std::fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "disjoint" | "dj" => Ok(Self::Disjoint),
            "baseline" | "bl" => Ok(Self::Baseline),
            "hybrid" | "hy" => Ok(Self::Hybrid),
            other => Err(invalid("scheme", format!("unknown scheme `{other}`"))),
        }
    }
}

/// How the `K = J * L` decoders share the codebook: `J` groups with
/// disjoint sub-codebooks, `L` decoders sharing each one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SchemeDescriptor {
    kind: SchemeKind,
    groups: u64,
    group_size: u64,
}

impl SchemeDescriptor {
    pub fn disjoint(k: u64) -> Result<Self> {
        Self::new(SchemeKind::Disjoint, k, 1)
    }

    pub fn baseline(k: u64) -> Result<Self> {
        Self::new(SchemeKind::Baseline, 1, k)
    }

    pub fn hybrid(groups: u64, group_size: u64) -> Result<Self> {
        Self::new(SchemeKind::Hybrid, groups, group_size)
    }

    /// Hybrid descriptor with `groups` groups for `k` decoders.
    pub fn hybrid_for(k: u64, groups: u64) -> Result<Self> {
        if groups == 0 || !k.is_multiple_of(groups) {
            return Err(invalid("J", format!("{groups} does not divide K = {k}")));
        }
        Self::hybrid(groups, k / groups)
    }

    pub fn new(kind: SchemeKind, groups: u64, group_size: u64) -> Result<Self> {
        if groups == 0 {
            return Err(invalid("J", "must be at least 1"));
        }
        if group_size == 0 {
            return Err(invalid("L", "must be at least 1"));
        }
        groups
            .checked_mul(group_size)
            .ok_or_else(|| invalid("K", "J * L overflows"))?;
        match kind {
            SchemeKind::Disjoint if group_size != 1 => {
                return Err(invalid("L", "disjoint scheme requires L = 1 (J = K)"))
            }
            SchemeKind::Baseline if groups != 1 => {
                return Err(invalid("J", "baseline scheme requires J = 1"))
            }
            _ => {}
        }
        Ok(Self {
            kind,
            groups,
            group_size,
        })
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    /// `J`.
    pub fn groups(&self) -> u64 {
        self.groups
    }

    /// `L`.
    pub fn group_size(&self) -> u64 {
        self.group_size
    }

    /// `K = J * L`.
    pub fn k(&self) -> u64 {
        self.groups * self.group_size
    }

    /// Sub-codebook label (0-based) used by decoder `k` (0-based).
    #[inline]
    pub fn label_of(&self, decoder: u64) -> u64 {
        decoder / self.group_size
    }
}
