//! Engine dispatch, prime-length DFT by Rader reindexing, and linear
//! convolution by zero padding.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::arith::{Arithmetic, Plain, Scalar};
use crate::crt::TwoFactorPlan;
use crate::error::{Error, Result};
use crate::fast::FastPlan;
use crate::primes::{self, next_prime, pow_mod};
use crate::signal::{direct_with, ensure_same_len, Signal};

pub use crate::primes::find_primitive_root;

/// A cyclic convolution strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Engine {
    Direct,
    #[default]
    FastPrime,
    /// Two-factor CRT path. Through this dispatch it accepts every length
    /// `n >= 2`; see [`crate::winograd_two_factor_convolution`] for the
    /// prime-only entry point.
    WinogradTwoFactor,
}

impl Engine {
    pub const ALL: [Engine; 3] = [Engine::Direct, Engine::FastPrime, Engine::WinogradTwoFactor];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Direct => "direct",
            Engine::FastPrime => "fast-prime",
            Engine::WinogradTwoFactor => "winograd-two-factor",
        }
    }

    /// Precomputes everything that depends on the kernel alone.
    pub fn prepare<F: Scalar>(self, b: &Signal<F>) -> Result<PreparedKernel<F>> {
        Ok(match self {
            Engine::Direct => PreparedKernel::Direct(b.clone()),
            Engine::FastPrime => PreparedKernel::Fast(FastPlan::new(b)?),
            Engine::WinogradTwoFactor => PreparedKernel::TwoFactor(TwoFactorPlan::new(b)?),
        })
    }

    pub fn convolve<F: Scalar>(self, b: &Signal<F>, z: &Signal<F>) -> Result<Signal<F>> {
        ensure_same_len(b, z)?;
        self.prepare(b)?.execute(z, &mut Plain)
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownEngine(pub String);

impl fmt::Display for UnknownEngine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown engine '{}' (expected direct, fast-prime or winograd-two-factor)",
            self.0
        )
    }
}

impl std::error::Error for UnknownEngine {}

impl FromStr for Engine {
    type Err = UnknownEngine;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "direct" => Ok(Engine::Direct),
            "fast-prime" | "fast" => Ok(Engine::FastPrime),
            "winograd-two-factor" | "winograd" | "two-factor" => Ok(Engine::WinogradTwoFactor),
            other => Err(UnknownEngine(other.to_string())),
        }
    }
}

/// A kernel prepared for one engine.
#[derive(Debug, Clone, PartialEq)]
pub enum PreparedKernel<F> {
    Direct(Signal<F>),
    Fast(FastPlan<F>),
    TwoFactor(TwoFactorPlan<F>),
}

impl<F: Scalar> PreparedKernel<F> {
    pub fn engine(&self) -> Engine {
        match self {
            PreparedKernel::Direct(_) => Engine::Direct,
            PreparedKernel::Fast(_) => Engine::FastPrime,
            PreparedKernel::TwoFactor(_) => Engine::WinogradTwoFactor,
        }
    }

    pub fn execute<A: Arithmetic>(&self, z: &Signal<F>, ops: &mut A) -> Result<Signal<F>> {
        match self {
            PreparedKernel::Direct(b) => direct_with(b, z, ops),
            PreparedKernel::Fast(plan) => plan.execute(z, ops),
            PreparedKernel::TwoFactor(plan) => plan.execute(z, ops),
        }
    }
}

fn twiddle(num: u64, p: u64) -> Complex64 {
    let angle = -2.0 * PI * (num % p) as f64 / p as f64;
    Complex64::new(angle.cos(), angle.sin())
}

/// `X_k = sum_j x_j e^{-2 pi i jk/n}` by the defining double loop.
pub fn naive_dft(x: &Signal<Complex64>) -> Signal<Complex64> {
    let n = x.len() as u64;
    let out = (0..n)
        .map(|k| {
            x.iter()
                .enumerate()
                .fold(Complex64::zero(), |acc, (j, &xj)| {
                    acc + xj * twiddle(j as u64 * k % n, n)
                })
        })
        .collect();
    Signal::from_vec_unchecked(out)
}

/// Precomputation for a prime-length DFT.
///
/// With `g` a primitive root, `X_{g^m} - x_0` is entry `m` of the
/// `(p-1)`-point cyclic convolution of the kernel `w_k = e^{-2 pi i g^k / p}`
/// with `u_q = x_{g^{-q}}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DftPlan {
    p: usize,
    generator: u64,
    // gather[q] = g^{-q} mod p: input index feeding u_q
    gather: Vec<usize>,
    // scatter[m] = g^m mod p: output index receiving c_m
    scatter: Vec<usize>,
    kernel: Signal<Complex64>,
}

impl DftPlan {
    pub fn new(p: usize) -> Result<Self> {
        let pp = p as u64;
        let generator = primes::find_primitive_root(pp)?;
        let ginv = pow_mod(generator, pp - 2, pp);
        let gather = (0..pp - 1).map(|q| pow_mod(ginv, q, pp) as usize).collect();
        let scatter: Vec<usize> = (0..pp - 1)
            .map(|m| pow_mod(generator, m, pp) as usize)
            .collect();
        let kernel =
            Signal::from_vec_unchecked(scatter.iter().map(|&e| twiddle(e as u64, pp)).collect());
        Ok(Self {
            p,
            generator,
            gather,
            scatter,
            kernel,
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// Twiddles `e^{-2 pi i g^k / p}`, `k = 0..p-2`.
    pub fn kernel(&self) -> &Signal<Complex64> {
        &self.kernel
    }

    /// Prepares the kernel for `engine`, then runs [`DftPlan::execute`].
    pub fn prepare(&self, engine: Engine) -> Result<PreparedKernel<Complex64>> {
        engine.prepare(&self.kernel)
    }

    /// Runs the transform with a prepared kernel. The `p - 1` output
    /// corrections and the `p - 1` additions of `X_0` go through `ops`.
    pub fn execute<A: Arithmetic>(
        &self,
        x: &Signal<Complex64>,
        kernel: &PreparedKernel<Complex64>,
        ops: &mut A,
    ) -> Result<Signal<Complex64>> {
        if x.len() != self.p {
            return Err(Error::LengthMismatch {
                left: self.p,
                right: x.len(),
            });
        }
        let xs = x.as_slice();
        let u = Signal::from_vec_unchecked(self.gather.iter().map(|&i| xs[i]).collect());
        let c = kernel.execute(&u, ops)?;

        let mut out = vec![Complex64::zero(); self.p];
        let mut x0 = xs[0];
        for &xj in &xs[1..] {
            x0 = ops.add(x0, xj);
        }
        out[0] = x0;
        for (&k, &cm) in self.scatter.iter().zip(c.iter()) {
            out[k] = ops.add(xs[0], cm);
        }
        Ok(Signal::from_vec_unchecked(out))
    }
}

/// Prime-length DFT through one `(p-1)`-point cyclic convolution.
pub fn rader_dft(
    plan: &DftPlan,
    x: &Signal<Complex64>,
    engine: Engine,
) -> Result<Signal<Complex64>> {
    plan.execute(x, &plan.prepare(engine)?, &mut Plain)
}

/// Zero-padding policy for linear convolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Padding {
    /// Smallest prime `m >= 2n - 1`, so the fast engine runs at a prime length.
    #[default]
    SmallestPrime,
    /// `m = 2n`.
    Double,
}

impl Padding {
    pub fn padded_length(self, n: usize) -> usize {
        match self {
            Padding::SmallestPrime => next_prime((2 * n).saturating_sub(1) as u64) as usize,
            Padding::Double => 2 * n,
        }
    }
}

/// The full `2n - 1` samples of the linear convolution of two length-`n`
/// sequences, via one padded cyclic convolution.
pub fn full_linear_convolution<F: Scalar>(
    b: &Signal<F>,
    z: &Signal<F>,
    engine: Engine,
    padding: Padding,
) -> Result<Signal<F>> {
    let n = ensure_same_len(b, z)?;
    let m = padding.padded_length(n);
    let pad = |s: &Signal<F>| {
        let mut v = s.as_slice().to_vec();
        v.resize(m, F::zero());
        Signal::from_vec_unchecked(v)
    };
    let mut c = engine.convolve(&pad(b), &pad(z))?.into_vec();
    c.truncate(2 * n - 1);
    Ok(Signal::from_vec_unchecked(c))
}

/// The first `n` samples of the linear convolution.
pub fn linear_convolution<F: Scalar>(
    b: &Signal<F>,
    z: &Signal<F>,
    engine: Engine,
    padding: Padding,
) -> Result<Signal<F>> {
    let n = ensure_same_len(b, z)?;
    let mut c = full_linear_convolution(b, z, engine, padding)?.into_vec();
    c.truncate(n);
    Ok(Signal::from_vec_unchecked(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::OpTally;
    use crate::oracle;
    use crate::sample;
    use crate::signal::rel_error;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn engine_names_round_trip() {
        for e in Engine::ALL {
            assert_eq!(e.name().parse::<Engine>(), Ok(e));
        }
        assert!("fft".parse::<Engine>().is_err());
    }

    #[test]
    fn naive_dft_delta_and_constant() {
        let n = 7;
        let d = naive_dft(&Signal::delta(n).unwrap());
        assert!(d.iter().all(|x| (x - c(1.0)).norm() < 1e-15));

        let k = Complex64::new(0.5, -2.0);
        let x = Signal::new(vec![k; n]).unwrap();
        let d = naive_dft(&x);
        assert!((d[0] - k * n as f64).norm() < 1e-13);
        assert!(d.iter().skip(1).all(|x| x.norm() < 1e-13));
    }

    #[test]
    fn naive_dft_parseval() {
        let mut rng = sample::stream_rng(37, 0);
        for n in [1, 2, 5, 16, 31] {
            let x = sample::complex_signal(&mut rng, n);
            let time: f64 = x.iter().map(|v| v.norm_sqr()).sum();
            let freq: f64 = naive_dft(&x).iter().map(|v| v.norm_sqr()).sum();
            assert!((time - freq / n as f64).abs() < 1e-12 * time.max(1.0));
        }
    }

    #[test]
    fn rader_delta() {
        let plan = DftPlan::new(3).unwrap();
        let out = rader_dft(&plan, &Signal::delta(3).unwrap(), Engine::Direct).unwrap();
        assert!(out.iter().all(|x| (x - c(1.0)).norm() < 1e-15));
    }

    #[test]
    fn rader_matches_naive_for_every_engine() {
        let mut rng = sample::stream_rng(41, 0);
        for p in [3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            let plan = DftPlan::new(p).unwrap();
            let x = sample::complex_signal(&mut rng, p);
            let reference = naive_dft(&x);
            for e in Engine::ALL {
                let out = rader_dft(&plan, &x, e).unwrap();
                assert!(rel_error(&out, &reference) <= 1e-9, "p={p} engine={e}");
            }
        }
    }

    #[test]
    fn rader_plan_invariants() {
        let plan = DftPlan::new(13).unwrap();
        assert_eq!(plan.generator(), 2);
        let mut seen = plan.scatter.clone();
        seen.sort_unstable();
        assert_eq!(seen, (1..13).collect::<Vec<_>>());
        assert_eq!(plan.kernel().len(), 12);
        assert!(DftPlan::new(9).is_err());
        assert!(DftPlan::new(2).is_err());
        assert!(rader_dft(&plan, &Signal::delta(11).unwrap(), Engine::Direct).is_err());
    }

    #[test]
    fn rader_counts_flow_through_engine() {
        let plan = DftPlan::new(13).unwrap();
        let kernel = plan.prepare(Engine::FastPrime).unwrap();
        let mut t = OpTally::default();
        plan.execute(&Signal::delta(13).unwrap(), &kernel, &mut t)
            .unwrap();
        let conv = crate::fast::schedule_counts(12).unwrap();
        assert_eq!(t, OpTally::new(conv.mults, conv.adds + 2 * 12));
    }

    #[test]
    fn linear_small_examples() {
        let b = Signal::new(vec![1.0, 1.0]).unwrap();
        let out = linear_convolution(&b, &b, Engine::FastPrime, Padding::SmallestPrime).unwrap();
        assert!(rel_error(&out, &Signal::new(vec![1.0, 2.0]).unwrap()) < 1e-14);

        let b = Signal::new(vec![1.0, 2.0, 3.0]).unwrap();
        let z = Signal::new(vec![4.0, 5.0, 6.0]).unwrap();
        for e in Engine::ALL {
            let out = linear_convolution(&b, &z, e, Padding::SmallestPrime).unwrap();
            assert!(rel_error(&out, &Signal::new(vec![4.0, 13.0, 28.0]).unwrap()) < 1e-12);
            let full = full_linear_convolution(&b, &z, e, Padding::Double).unwrap();
            let expected = oracle::schoolbook_linear_convolution(b.as_slice(), z.as_slice());
            assert!(rel_error(&full, &Signal::new(expected).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn padded_lengths() {
        assert_eq!(Padding::SmallestPrime.padded_length(3), 5);
        assert_eq!(Padding::SmallestPrime.padded_length(1), 2);
        assert_eq!(Padding::SmallestPrime.padded_length(4), 7);
        assert_eq!(Padding::SmallestPrime.padded_length(64), 127);
        assert_eq!(Padding::Double.padded_length(3), 6);
    }

    #[test]
    fn linear_length_one() {
        let b = Signal::new(vec![3.0]).unwrap();
        let z = Signal::new(vec![-2.0]).unwrap();
        for padding in [Padding::SmallestPrime, Padding::Double] {
            let out = linear_convolution(&b, &z, Engine::FastPrime, padding).unwrap();
            assert!((out[0] + 6.0).abs() < 1e-14);
            assert_eq!(out.len(), 1);
        }
    }
}
