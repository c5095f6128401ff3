//! Information density of an input distribution through a channel, and the
//! moments derived from it.

use crate::error::{Error, Result};
use crate::prob::kernel::Kernel;
use crate::prob::pmf::Pmf;
use crate::scalar::{ksum, Real};

/// `iota(x, y) = log2(P(y|x) / P_Y(y))` for every input/output pair.
///
/// Cells with `P(y|x) = 0` hold `-inf`. A cell with `P(y|x) > 0` but
/// `P_Y(y) = 0` can only occur for inputs outside the support of `P_X`; it
/// holds `+inf` and carries zero joint mass.
#[derive(Debug, Clone, PartialEq)]
pub struct InfoDensityTable<T> {
    n_in: usize,
    n_out: usize,
    iota: Vec<T>,
    ratio: Vec<T>,
    marginal_y: Pmf<T>,
}

impl<T: Real> InfoDensityTable<T> {
    #[inline]
    pub fn iota(&self, x: usize, y: usize) -> T {
        self.iota[x * self.n_out + y]
    }

    /// `2^iota(x, y)`, computed directly as the likelihood ratio.
    #[inline]
    pub fn ratio(&self, x: usize, y: usize) -> T {
        self.ratio[x * self.n_out + y]
    }

    pub fn marginal_y(&self) -> &Pmf<T> {
        &self.marginal_y
    }

    pub fn n_inputs(&self) -> usize {
        self.n_in
    }

    pub fn n_outputs(&self) -> usize {
        self.n_out
    }
}

pub fn information_density<T: Real>(px: &Pmf<T>, ch: &Kernel<T>) -> Result<InfoDensityTable<T>> {
    let py = ch.output_marginal(px)?;
    let (n_in, n_out) = (ch.n_inputs(), ch.n_outputs());
    let mut iota = Vec::with_capacity(n_in * n_out);
    let mut ratio = Vec::with_capacity(n_in * n_out);
    for x in 0..n_in {
        for y in 0..n_out {
            let pyx = ch.p(x, y);
            let (i, r) = if pyx == T::zero() {
                (T::neg_infinity(), T::zero())
            } else if py.p(y) == T::zero() {
                (T::infinity(), T::infinity())
            } else {
                let r = pyx / py.p(y);
                (r.log2(), r)
            };
            iota.push(i);
            ratio.push(r);
        }
    }
    Ok(InfoDensityTable {
        n_in,
        n_out,
        iota,
        ratio,
        marginal_y: py,
    })
}

/// Expectation of `f(x, y)` under `P_X x P_{Y|X}`, skipping zero-mass cells.
fn joint_expect<T: Real>(px: &Pmf<T>, ch: &Kernel<T>, mut f: impl FnMut(usize, usize) -> T) -> T {
    let mut terms = Vec::new();
    for x in 0..ch.n_inputs() {
        if px.p(x) == T::zero() {
            continue;
        }
        for y in 0..ch.n_outputs() {
            let m = px.p(x) * ch.p(x, y);
            if m > T::zero() {
                terms.push(m * f(x, y));
            }
        }
    }
    ksum(terms)
}

/// `I(X; Y)` in bits.
pub fn mutual_information<T: Real>(px: &Pmf<T>, ch: &Kernel<T>) -> Result<T> {
    let table = information_density(px, ch)?;
    Ok(joint_expect(px, ch, |x, y| table.iota(x, y)).max(T::zero()))
}

/// `V = Var(iota(X;Y))` and `V~ = Var(D(P_{Y|X}(.|X) || P_Y))`, both bits^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dispersion<T> {
    pub v: T,
    pub v_tilde: T,
}

pub fn channel_dispersion<T: Real>(px: &Pmf<T>, ch: &Kernel<T>) -> Result<Dispersion<T>> {
    let table = information_density(px, ch)?;
    let c = joint_expect(px, ch, |x, y| table.iota(x, y));
    let v = joint_expect(px, ch, |x, y| (table.iota(x, y) - c).powi(2));
    let v_tilde = px.expect(|x| {
        let kl = ksum(
            (0..ch.n_outputs())
                .filter(|&y| ch.p(x, y) > T::zero())
                .map(|y| ch.p(x, y) * table.iota(x, y)),
        );
        (kl - c).powi(2)
    });
    Ok(Dispersion { v, v_tilde })
}

/// Bayes reverse channel `P(x | y)`, defined only on outputs with positive
/// marginal.
#[derive(Debug, Clone, PartialEq)]
pub struct Posterior<T> {
    n_x: usize,
    rows: Vec<Option<Vec<T>>>,
}

impl<T: Real> Posterior<T> {
    pub fn row(&self, y: usize) -> Result<&[T]> {
        self.rows
            .get(y)
            .and_then(|r| r.as_deref())
            .ok_or(Error::ZeroMarginal(y))
    }

    /// `P(X = x | Y = y)`.
    pub fn p(&self, x: usize, y: usize) -> Result<T> {
        Ok(self.row(y)?[x])
    }

    pub fn n_inputs(&self) -> usize {
        self.n_x
    }

    pub fn n_outputs(&self) -> usize {
        self.rows.len()
    }

    /// The reverse channel as a [`Kernel`] from outputs to inputs; fails if
    /// any output has zero marginal.
    pub fn to_kernel(&self) -> Result<Kernel<T>> {
        let rows = (0..self.rows.len())
            .map(|y| self.row(y).map(<[T]>::to_vec))
            .collect::<Result<Vec<_>>>()?;
        Kernel::new(rows)
    }
}

pub fn posterior<T: Real>(px: &Pmf<T>, ch: &Kernel<T>) -> Result<Posterior<T>> {
    let py = ch.output_marginal(px)?;
    let rows = (0..ch.n_outputs())
        .map(|y| {
            (py.p(y) > T::zero()).then(|| {
                (0..ch.n_inputs())
                    .map(|x| px.p(x) * ch.p(x, y) / py.p(y))
                    .collect()
            })
        })
        .collect();
    Ok(Posterior {
        n_x: ch.n_inputs(),
        rows,
    })
}
