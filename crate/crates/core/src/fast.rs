//! The fast cyclic convolution engine.
//!
//! With the seed vector `s = (-n+1, 1, ..., 1)` and the cyclic shift `D`, the
//! kernel is folded into host values `v_i = b^T D^i s / n`, which reduce to
//! `v_i = (sum b)/n - b_i`. An execution then computes, for `y` the reversed
//! input,
//!
//! ```text
//! g_{i,j} = v_{(i+j) mod n} (y_j - y_i)          0 <= i < j <= n-1
//! h_i     = sum_{j>i} g_{i,j} - sum_{j<i} g_{j,i}  0 <= i <= n-2
//! h_{n-1} = -(h_0 + ... + h_{n-2})
//! q       = (sum b / n) (sum y)
//! c_i     = q - h_i
//! ```
//!
//! Because `g_{j,i} = -g_{i,j}`, only the strict upper triangle is
//! multiplied, which gives `n(n-1)/2 + 1` multiplications per execution.
//! Nothing in the construction needs `n` to be prime; prime lengths are where
//! it beats the alternatives, since composite lengths admit CRT nesting.
//!
//! # Addition count
//!
//! The schedule above performs `n(n-1)/2` input differences, `n-2`
//! additions per `h_i` (`n-1` of them), `n-2` for the closing sum,
//! `n-1` for `sum y`, and `n` final subtractions: `3n(n-1)/2 + n - 1`
//! additions in total. [`predicted_counts`] returns the published closed form
//! `3n(n-1)/2 + 1`, which matches only at `n = 2`; [`schedule_counts`]
//! returns what an instrumented run actually performs.

use crate::arith::{Arithmetic, OpTally, Plain, Scalar};
use crate::error::{Error, Result};
use crate::parallel;
use crate::signal::{ensure_same_len, Length, Signal};

/// Immutable precomputation for a fixed kernel `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct FastPlan<F> {
    length: Length,
    host: Vec<F>,
    q_coeff: F,
}

/// Strict upper triangle of the antisymmetric `g` table, packed row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GTable<F> {
    n: usize,
    data: Vec<F>,
}

impl<F: Scalar> GTable<F> {
    fn new(n: usize) -> Self {
        Self {
            n,
            data: Vec::with_capacity(n * (n - 1) / 2),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.n);
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    /// Stored entries in row-major order of the upper triangle.
    pub fn stored(&self) -> &[F] {
        &self.data
    }

    /// `g_{i,j}` for any pair; the lower triangle is `-g_{j,i}` and the
    /// diagonal is zero.
    pub fn get(&self, i: usize, j: usize) -> F {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.data[self.offset(i, j)],
            Greater => -self.data[self.offset(j, i)],
            Equal => F::zero(),
        }
    }
}

/// Every intermediate of one execution, for inspection and testing.
#[derive(Debug, Clone, PartialEq)]
pub struct FastTrace<F> {
    pub y: Vec<F>,
    pub g: GTable<F>,
    pub h: Vec<F>,
    pub q: F,
    pub c: Signal<F>,
}

/// Builds a plan from the kernel. No operations are tallied.
pub fn plan_create<F: Scalar>(b: &Signal<F>) -> Result<FastPlan<F>> {
    FastPlan::new(b)
}

/// Runs the fast engine with counting.
pub fn fast_cyclic_convolution<F: Scalar>(
    plan: &FastPlan<F>,
    z: &Signal<F>,
    tally: &mut OpTally,
) -> Result<Signal<F>> {
    plan.execute(z, tally)
}

fn check_length(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::TooShort { n, min: 2 });
    }
    Ok(())
}

/// Published closed form: `(n(n-1)/2 + 1, 3n(n-1)/2 + 1)`.
pub fn predicted_counts(n: usize) -> Result<(u64, u64)> {
    check_length(n)?;
    let pairs = (n * (n - 1) / 2) as u64;
    Ok((pairs + 1, 3 * pairs + 1))
}

/// Operations an instrumented execution performs:
/// `(n(n-1)/2 + 1, 3n(n-1)/2 + n - 1)`.
pub fn schedule_counts(n: usize) -> Result<OpTally> {
    check_length(n)?;
    let pairs = (n * (n - 1) / 2) as u64;
    Ok(OpTally::new(pairs + 1, 3 * pairs + n as u64 - 1))
}

impl<F: Scalar> FastPlan<F> {
    pub fn new(b: &Signal<F>) -> Result<Self> {
        let n = b.len();
        check_length(n)?;
        let q_coeff = b.sum().scale(1.0 / n as f64);
        let host = b.iter().map(|&bi| q_coeff - bi).collect();
        Ok(Self {
            length: Length::new(n),
            host,
            q_coeff,
        })
    }

    pub fn n(&self) -> usize {
        self.length.get()
    }

    pub fn length(&self) -> Length {
        self.length
    }

    /// Host values `v_i = b^T D^i s / n`.
    pub fn host(&self) -> &[F] {
        &self.host
    }

    /// `sum(b) / n`; the execution multiplies it by `sum(y)`.
    pub fn q_coeff(&self) -> F {
        self.q_coeff
    }

    /// A note for composite lengths, where CRT nesting of coprime factors can
    /// use fewer multiplications. The result is correct either way.
    pub fn advisory(&self) -> Option<String> {
        (!self.length.is_prime()).then(|| {
            format!(
                "length {} is composite: the fast engine is exact here, but its multiplication count is only optimal for prime lengths",
                self.n()
            )
        })
    }

    /// Adds `delta` to one host value. Used to check that verification
    /// detects a corrupted plan.
    #[doc(hidden)]
    pub fn perturb_host(&mut self, index: usize, delta: f64) {
        self.host[index] = self.host[index] + F::from_f64(delta);
    }

    /// Uncounted execution.
    pub fn convolve(&self, z: &Signal<F>) -> Result<Signal<F>> {
        self.execute(z, &mut Plain)
    }

    pub fn execute<A: Arithmetic>(&self, z: &Signal<F>, ops: &mut A) -> Result<Signal<F>> {
        self.check_input(z)?;
        let (c, _, _) = self.run(z.as_slice(), ops, |_, _, _| {});
        Ok(Signal::from_vec_unchecked(c))
    }

    /// Uncounted execution that keeps every intermediate.
    pub fn trace(&self, z: &Signal<F>) -> Result<FastTrace<F>> {
        self.check_input(z)?;
        let n = self.n();
        let mut g = GTable::new(n);
        let (c, h, q) = self.run(z.as_slice(), &mut Plain, |_, _, x| g.data.push(x));
        let y = crate::signal::reverse_permute(z).into_vec();
        Ok(FastTrace {
            y,
            g,
            h,
            q,
            c: Signal::from_vec_unchecked(c),
        })
    }

    /// Convolves every input with this kernel, on the rayon pool when the
    /// `parallel` feature is enabled.
    pub fn convolve_batch(&self, inputs: &[Signal<F>]) -> Result<Vec<Signal<F>>> {
        parallel::map_indexed(inputs, |_, z| self.convolve(z))
            .into_iter()
            .collect()
    }

    pub fn convolve_batch_seq(&self, inputs: &[Signal<F>]) -> Result<Vec<Signal<F>>> {
        parallel::map_indexed_seq(inputs, |_, z| self.convolve(z))
            .into_iter()
            .collect()
    }

    fn check_input(&self, z: &Signal<F>) -> Result<()> {
        let n = self.n();
        if z.len() != n {
            return Err(Error::LengthMismatch {
                left: n,
                right: z.len(),
            });
        }
        Ok(())
    }

    /// Returns `(c, h, q)`. `record` sees each `g_{i,j}`, `i < j`, in
    /// row-major order.
    fn run<A, R>(&self, z: &[F], ops: &mut A, mut record: R) -> (Vec<F>, Vec<F>, F)
    where
        A: Arithmetic,
        R: FnMut(usize, usize, F),
    {
        let n = self.n();
        let v = &self.host;
        let y: Vec<F> = (0..n).map(|k| z[(n - k) % n]).collect();

        // h_i accumulates its terms in ascending j. Row 0 seeds every
        // h_j (j >= 1) with -g_{0,j}; negation is not an addition.
        let mut h = vec![F::zero(); n];
        for i in 0..n - 1 {
            for j in i + 1..n {
                let k = if i + j >= n { i + j - n } else { i + j };
                let l = ops.sub(y[j], y[i]);
                let g = ops.mul(v[k], l);
                record(i, j, g);
                h[i] = if i == 0 && j == 1 {
                    g
                } else {
                    ops.add(h[i], g)
                };
                if j < n - 1 {
                    h[j] = if i == 0 { -g } else { ops.sub(h[j], g) };
                }
            }
        }

        // sum(h) = 0 closes the last entry.
        let mut partial = h[0];
        for &hi in &h[1..n - 1] {
            partial = ops.add(partial, hi);
        }
        h[n - 1] = -partial;

        let mut sum_y = y[0];
        for &yj in &y[1..] {
            sum_y = ops.add(sum_y, yj);
        }
        let q = ops.mul(self.q_coeff, sum_y);

        let c = h.iter().map(|&hi| ops.sub(q, hi)).collect();
        (c, h, q)
    }
}

/// Convenience: plan and execute in one call, uncounted.
pub fn fast_convolve<F: Scalar>(b: &Signal<F>, z: &Signal<F>) -> Result<Signal<F>> {
    ensure_same_len(b, z)?;
    FastPlan::new(b)?.convolve(z)
}
