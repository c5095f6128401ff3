use crate::error::{Error, Result};
use crate::prob::pmf::Pmf;
use crate::scalar::{ksum, Real};

/// Distortion measure `d(w, z)` on a finite source and reconstruction
/// alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct DistortionMatrix<T> {
    n_src: usize,
    n_rec: usize,
    data: Vec<T>,
}

impl<T: Real> DistortionMatrix<T> {
    pub fn new(rows: Vec<Vec<T>>) -> Result<Self> {
        let n_src = rows.len();
        if n_src == 0 {
            return Err(crate::error::invalid("distortion", "no rows"));
        }
        let n_rec = rows[0].len();
        let mut data = Vec::with_capacity(n_src * n_rec);
        for row in rows {
            if row.len() != n_rec {
                return Err(Error::DimensionMismatch {
                    what: "distortion row length",
                    expected: n_rec,
                    got: row.len(),
                });
            }
            if let Some(v) = row.iter().find(|v| !v.is_finite() || **v < T::zero()) {
                return Err(crate::error::invalid(
                    "distortion",
                    format!("entry {v} is not a non-negative real"),
                ));
            }
            data.extend(row);
        }
        Ok(Self { n_src, n_rec, data })
    }

    /// `d(w, z) = 1{w != z}` on a square alphabet.
    pub fn hamming(size: usize) -> Result<Self> {
        Self::new(
            (0..size)
                .map(|w| {
                    (0..size)
                        .map(|z| if w == z { T::zero() } else { T::one() })
                        .collect()
                })
                .collect(),
        )
    }

    #[inline]
    pub fn n_sources(&self) -> usize {
        self.n_src
    }

    #[inline]
    pub fn n_reconstructions(&self) -> usize {
        self.n_rec
    }

    #[inline]
    pub fn d(&self, w: usize, z: usize) -> T {
        self.data[w * self.n_rec + z]
    }

    pub fn max_entry(&self) -> T {
        self.data.iter().copied().fold(T::zero(), T::max)
    }

    pub fn is_hamming(&self) -> bool {
        self.n_src == self.n_rec
            && (0..self.n_src).all(|w| {
                (0..self.n_rec).all(|z| self.d(w, z) == if w == z { T::zero() } else { T::one() })
            })
    }

    #[inline]
    pub fn in_ball(&self, w: usize, z: usize, threshold: T) -> bool {
        self.d(w, z) <= threshold
    }

    /// `rho(w) = P_Z({z : d(w, z) <= threshold})`.
    pub fn ball_mass(&self, pz: &Pmf<T>, threshold: T, w: usize) -> T {
        ksum(
            (0..self.n_rec)
                .filter(|&z| self.in_ball(w, z, threshold))
                .map(|z| pz.p(z)),
        )
    }
}

/// Probability mass of the distortion ball around source symbol `w`.
pub fn distortion_ball_mass<T: Real>(
    pz: &Pmf<T>,
    dmat: &DistortionMatrix<T>,
    threshold: T,
    w: usize,
) -> Result<T> {
    if w >= dmat.n_sources() {
        return Err(crate::error::invalid("w", format!("{w} out of range")));
    }
    if pz.len() != dmat.n_reconstructions() {
        return Err(Error::DimensionMismatch {
            what: "P_Z vs distortion columns",
            expected: dmat.n_reconstructions(),
            got: pz.len(),
        });
    }
    Ok(dmat.ball_mass(pz, threshold, w))
}
