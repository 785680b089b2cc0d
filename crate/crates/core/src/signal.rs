//! Signals, index permutations, and the direct-evaluation oracle.

use std::ops::Index;

use crate::arith::{Arithmetic, OpTally, Scalar};
use crate::error::{Error, Result};
use crate::primes::is_prime;

/// A finite, non-empty sequence of finite field scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal<F> {
    samples: Vec<F>,
}

impl<F: Scalar> Signal<F> {
    pub fn new(samples: Vec<F>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(i) = samples.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { samples })
    }

    pub fn from_slice(samples: &[F]) -> Result<Self> {
        Self::new(samples.to_vec())
    }

    /// All-ones vector of length `n`.
    pub fn ones(n: usize) -> Result<Self> {
        Self::new(vec![F::one(); n])
    }

    /// Unit impulse of length `n`.
    pub fn delta(n: usize) -> Result<Self> {
        let mut v = vec![F::zero(); n];
        if let Some(first) = v.first_mut() {
            *first = F::one();
        }
        Self::new(v)
    }

    // Engines build outputs from finite inputs; skip the validation pass.
    pub(crate) fn from_vec_unchecked(samples: Vec<F>) -> Self {
        debug_assert!(!samples.is_empty());
        Self { samples }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[F] {
        &self.samples
    }

    pub fn into_vec(self) -> Vec<F> {
        self.samples
    }

    pub fn iter(&self) -> std::slice::Iter<'_, F> {
        self.samples.iter()
    }

    pub fn sum(&self) -> F {
        self.samples.iter().fold(F::zero(), |acc, &x| acc + x)
    }

    pub fn max_norm(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, x| m.max(x.norm()))
    }
}

impl<F> Index<usize> for Signal<F> {
    type Output = F;

    fn index(&self, i: usize) -> &F {
        &self.samples[i]
    }
}

impl<'a, F> IntoIterator for &'a Signal<F> {
    type Item = &'a F;
    type IntoIter = std::slice::Iter<'a, F>;

    fn into_iter(self) -> Self::IntoIter {
        self.samples.iter()
    }
}

/// A transform length together with its primality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Length {
    n: usize,
    is_prime: bool,
}

impl Length {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            is_prime: is_prime(n as u64),
        }
    }

    pub fn get(self) -> usize {
        self.n
    }

    pub fn is_prime(self) -> bool {
        self.is_prime
    }
}

/// `y_0 = z_0`, `y_k = z_{n-k}`: the reordering that turns the sum form of a
/// cyclic convolution into a product with the cyclic matrix of `b`.
pub fn reverse_permute<F: Scalar>(z: &Signal<F>) -> Signal<F> {
    let n = z.len();
    let s = z.as_slice();
    Signal::from_vec_unchecked((0..n).map(|k| s[(n - k) % n]).collect())
}

/// Applies the cyclic shift matrix `i` times: `out_k = x_{(k - i) mod n}`.
pub fn rotate<F: Scalar>(x: &Signal<F>, i: i64) -> Signal<F> {
    let n = x.len();
    let shift = i.rem_euclid(n as i64) as usize;
    let s = x.as_slice();
    Signal::from_vec_unchecked((0..n).map(|k| s[(k + n - shift) % n]).collect())
}

pub(crate) fn ensure_same_len<F, G>(a: &Signal<F>, b: &Signal<G>) -> Result<usize> {
    if a.samples.len() != b.samples.len() {
        return Err(Error::LengthMismatch {
            left: a.samples.len(),
            right: b.samples.len(),
        });
    }
    Ok(a.samples.len())
}

/// `c_p = sum_l b_l z_{(p-l) mod n}`, evaluated term by term.
///
/// Costs exactly `n^2` multiplications and `n(n-1)` additions.
pub fn direct_cyclic_convolution<F: Scalar>(
    b: &Signal<F>,
    z: &Signal<F>,
    tally: &mut OpTally,
) -> Result<Signal<F>> {
    direct_with(b, z, tally)
}

pub(crate) fn direct_with<F: Scalar, A: Arithmetic>(
    b: &Signal<F>,
    z: &Signal<F>,
    ops: &mut A,
) -> Result<Signal<F>> {
    let n = ensure_same_len(b, z)?;
    let (b, z) = (b.as_slice(), z.as_slice());
    let out = (0..n)
        .map(|p| {
            let mut acc = ops.mul(b[0], z[p]);
            for l in 1..n {
                let term = ops.mul(b[l], z[(p + n - l) % n]);
                acc = ops.add(acc, term);
            }
            acc
        })
        .collect();
    Ok(Signal::from_vec_unchecked(out))
}

/// `max_k |a_k - b_k| / max(1, max_k |b_k|)`; `b` is the reference.
///
/// Returns infinity when the lengths differ.
pub fn rel_error<F: Scalar>(a: &Signal<F>, b: &Signal<F>) -> f64 {
    rel_error_slices(a.as_slice(), b.as_slice())
}

pub fn rel_error_slices<F: Scalar>(a: &[F], b: &[F]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let diff = a
        .iter()
        .zip(b)
        .fold(0.0f64, |m, (&x, &y)| m.max((x - y).norm()));
    let scale = b.iter().fold(1.0f64, |m, y| m.max(y.norm()));
    diff / scale
}

/// Relative error bounds used when comparing engines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub real: f64,
    pub complex: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            real: 1e-10,
            complex: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn uniform(tol: f64) -> Self {
        Self {
            real: tol,
            complex: tol,
        }
    }
}
