use crate::error::{Error, Result};
use crate::scalar::{ksum, Real};

/// Probability mass function over the alphabet `{0, .., len-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf<T> {
    probs: Vec<T>,
    labels: Option<Vec<String>>,
}

impl<T: Real> Pmf<T> {
    /// Validates and wraps a probability vector. The vector is never
    /// renormalized: a sum outside `1 ± pmf_tolerance` is an error.
    pub fn new(probs: Vec<T>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidPmf("empty alphabet".into()));
        }
        if let Some((i, p)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !p.is_finite() || **p < T::zero())
        {
            return Err(Error::InvalidPmf(format!("entry {i} is {p}")));
        }
        let total = ksum(probs.iter().copied());
        if (total - T::one()).abs() > T::pmf_tolerance() {
            return Err(Error::InvalidPmf(format!("entries sum to {total}")));
        }
        Ok(Self {
            probs,
            labels: None,
        })
    }

    pub fn uniform(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidPmf("empty alphabet".into()));
        }
        let p = T::one() / T::from_usize(size).unwrap();
        Ok(Self {
            probs: vec![p; size],
            labels: None,
        })
    }

    /// Uniform over `support`, zero elsewhere in an alphabet of `size`.
    pub fn uniform_on(size: usize, support: &[usize]) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidPmf("empty support".into()));
        }
        let mut probs = vec![T::zero(); size];
        let p = T::one() / T::from_usize(support.len()).unwrap();
        for &i in support {
            if i >= size {
                return Err(Error::InvalidPmf(format!("support index {i} >= {size}")));
            }
            probs[i] = p;
        }
        Self::new(probs)
    }

    pub fn point_mass(size: usize, at: usize) -> Result<Self> {
        Self::uniform_on(size, &[at])
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.probs.len() {
            return Err(Error::DimensionMismatch {
                what: "pmf labels",
                expected: self.probs.len(),
                got: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    #[inline]
    pub fn p(&self, i: usize) -> T {
        self.probs[i]
    }

    #[inline]
    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Indices with strictly positive probability.
    pub fn support(&self) -> Vec<usize> {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > T::zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// Shannon entropy in bits.
    pub fn entropy(&self) -> T {
        -ksum(
            self.probs
                .iter()
                .filter(|p| **p > T::zero())
                .map(|&p| p * p.log2()),
        )
    }

    /// Expectation of `f(i)` under this pmf, skipping zero-mass symbols.
    pub fn expect(&self, mut f: impl FnMut(usize) -> T) -> T {
        ksum(
            self.probs
                .iter()
                .enumerate()
                .filter(|(_, p)| **p > T::zero())
                .map(|(i, &p)| p * f(i)),
        )
    }

    /// Memoryless product pmf on `len^n` symbols, first coordinate most
    /// significant.
    pub fn power(&self, n: u32) -> Result<Self> {
        let size = checked_pow(self.len(), n, usize::MAX)?;
        let mut probs = vec![T::one(); size];
        for (idx, p) in probs.iter_mut().enumerate() {
            let mut rest = idx;
            for _ in 0..n {
                *p = *p * self.probs[rest % self.len()];
                rest /= self.len();
            }
        }
        Self::new(probs)
    }

    pub fn cast<U: Real>(&self) -> Pmf<U> {
        Pmf {
            probs: self
                .probs
                .iter()
                .map(|p| U::lit(p.to_f64_lossy()))
                .collect(),
            labels: self.labels.clone(),
        }
    }
}

pub(crate) fn checked_pow(base: usize, n: u32, budget: usize) -> Result<usize> {
    let needed = (base as u128).checked_pow(n).unwrap_or(u128::MAX);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(needed as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sums_without_renormalizing() {
        assert!(Pmf::new(vec![0.5f64, 0.4]).is_err());
        assert!(Pmf::new(vec![0.5f64, 0.5 + 1e-11]).is_err());
        assert!(Pmf::new(vec![0.5f64, 0.5 + 1e-13]).is_ok());
        assert!(Pmf::new(vec![1.2f64, -0.2]).is_err());
        assert!(Pmf::<f64>::new(vec![]).is_err());
    }

    #[test]
    fn support_is_positive_entries() {
        let p = Pmf::new(vec![0.0f64, 0.25, 0.0, 0.75]).unwrap();
        assert_eq!(p.support(), vec![1, 3]);
    }

    #[test]
    fn entropy_of_uniform() {
        let p = Pmf::<f64>::uniform(8).unwrap();
        assert!((p.entropy() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn power_matches_products() {
        let p = Pmf::new(vec![0.8f64, 0.2]).unwrap();
        let p2 = p.power(2).unwrap();
        assert_eq!(p2.len(), 4);
        assert!((p2.p(0b01) - 0.16).abs() < 1e-15);
        assert!((p2.p(0b11) - 0.04).abs() < 1e-15);
    }
}
