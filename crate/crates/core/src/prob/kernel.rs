use crate::error::{Error, Result};
use crate::prob::pmf::{checked_pow, Pmf};
use crate::scalar::{ksum, Real};

/// Default cell budget (`rows * cols`) for [`Kernel::power`].
pub const DEFAULT_CELL_BUDGET: usize = 1 << 20;

/// Row-stochastic conditional pmf: `rows[x][y] = P(y | x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel<T> {
    n_in: usize,
    n_out: usize,
    data: Vec<T>,
}

impl<T: Real> Kernel<T> {
    pub fn new(rows: Vec<Vec<T>>) -> Result<Self> {
        let n_in = rows.len();
        if n_in == 0 {
            return Err(Error::InvalidPmf("kernel has no rows".into()));
        }
        let n_out = rows[0].len();
        let mut data = Vec::with_capacity(n_in * n_out);
        for (x, row) in rows.into_iter().enumerate() {
            if row.len() != n_out {
                return Err(Error::DimensionMismatch {
                    what: "kernel row length",
                    expected: n_out,
                    got: row.len(),
                });
            }
            Pmf::new(row.clone()).map_err(|e| Error::InvalidPmf(format!("row {x}: {e}")))?;
            data.extend(row);
        }
        Ok(Self { n_in, n_out, data })
    }

    pub fn identity(size: usize) -> Result<Self> {
        Self::from_fn(size, size, |x, y| if x == y { T::one() } else { T::zero() })
    }

    /// Every row equal to `p`: output independent of input.
    pub fn constant(n_in: usize, p: &Pmf<T>) -> Result<Self> {
        Self::from_fn(n_in, p.len(), |_, y| p.p(y))
    }

    pub fn from_fn(n_in: usize, n_out: usize, f: impl Fn(usize, usize) -> T) -> Result<Self> {
        let rows = (0..n_in)
            .map(|x| (0..n_out).map(|y| f(x, y)).collect())
            .collect();
        Self::new(rows)
    }

    /// Binary symmetric channel with crossover `delta`.
    pub fn bsc(delta: T) -> Result<Self> {
        if !(delta >= T::zero() && delta <= T::one()) {
            return Err(crate::error::invalid(
                "delta",
                format!("{delta} not in [0,1]"),
            ));
        }
        Self::new(vec![
            vec![T::one() - delta, delta],
            vec![delta, T::one() - delta],
        ])
    }

    #[inline]
    pub fn n_inputs(&self) -> usize {
        self.n_in
    }

    #[inline]
    pub fn n_outputs(&self) -> usize {
        self.n_out
    }

    #[inline]
    pub fn p(&self, x: usize, y: usize) -> T {
        self.data[x * self.n_out + y]
    }

    #[inline]
    pub fn row(&self, x: usize) -> &[T] {
        &self.data[x * self.n_out..(x + 1) * self.n_out]
    }

    /// Checks that `input` matches the kernel's input alphabet.
    pub fn check_input(&self, input: &Pmf<T>, what: &'static str) -> Result<()> {
        if input.len() != self.n_in {
            return Err(Error::DimensionMismatch {
                what,
                expected: self.n_in,
                got: input.len(),
            });
        }
        Ok(())
    }

    /// Output marginal `P_Y(y) = sum_x P_X(x) P(y|x)`.
    pub fn output_marginal(&self, input: &Pmf<T>) -> Result<Pmf<T>> {
        self.check_input(input, "kernel input pmf")?;
        let probs = (0..self.n_out)
            .map(|y| ksum((0..self.n_in).map(|x| input.p(x) * self.p(x, y))))
            .collect();
        Pmf::new(probs)
    }

    /// Memoryless `n`-fold product kernel; sequences are indexed in mixed
    /// radix with the first letter most significant.
    pub fn power(&self, n: u32, cell_budget: usize) -> Result<Self> {
        if n == 0 {
            return Err(crate::error::invalid("n", "must be positive"));
        }
        let rows = checked_pow(self.n_in, n, usize::MAX)?;
        let cols = checked_pow(self.n_out, n, usize::MAX)?;
        let needed = rows as u128 * cols as u128;
        if needed > cell_budget as u128 {
            return Err(Error::BudgetExceeded {
                needed,
                budget: cell_budget,
            });
        }
        let mut data = vec![T::one(); rows * cols];
        for x in 0..rows {
            for y in 0..cols {
                let (mut xr, mut yr) = (x, y);
                let mut p = T::one();
                for _ in 0..n {
                    p = p * self.p(xr % self.n_in, yr % self.n_out);
                    xr /= self.n_in;
                    yr /= self.n_out;
                }
                data[x * cols + y] = p;
            }
        }
        Ok(Self {
            n_in: rows,
            n_out: cols,
            data,
        })
    }

    pub fn cast<U: Real>(&self) -> Kernel<U> {
        Kernel {
            n_in: self.n_in,
            n_out: self.n_out,
            data: self.data.iter().map(|p| U::lit(p.to_f64_lossy())).collect(),
        }
    }
}

/// `n`-fold memoryless product of `ch` with the default cell budget.
pub fn product_channel<T: Real>(ch: &Kernel<T>, n: u32) -> Result<Kernel<T>> {
    ch.power(n, DEFAULT_CELL_BUDGET)
}
