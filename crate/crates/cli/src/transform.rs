//! `convolve` and `dft` on user-supplied samples.

use anyhow::bail;
use primeconv::primes::is_prime;
use primeconv::{
    full_linear_convolution, linear_convolution, rader_dft, DftPlan, Engine, Padding, Scalar,
    Signal,
};

use crate::io::Samples;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConvolveOptions {
    pub engine: Engine,
    pub linear: bool,
    /// With `linear`, return all `2n - 1` samples instead of the first `n`.
    pub full: bool,
    pub padding: Padding,
    pub require_prime: bool,
}

fn run<F: Scalar>(
    b: &Signal<F>,
    z: &Signal<F>,
    opts: &ConvolveOptions,
) -> primeconv::Result<Signal<F>> {
    match (opts.linear, opts.full) {
        (false, _) => opts.engine.convolve(b, z),
        (true, false) => linear_convolution(b, z, opts.engine, opts.padding),
        (true, true) => full_linear_convolution(b, z, opts.engine, opts.padding),
    }
}

/// Convolves `input` with `kernel`. A complex operand promotes the other.
pub fn cmd_convolve(
    input: &Samples,
    kernel: &Samples,
    opts: &ConvolveOptions,
) -> anyhow::Result<Samples> {
    let (n, k) = (input.len(), kernel.len());
    if n != k {
        bail!("length mismatch: input has {n} samples, kernel has {k}");
    }
    if opts.require_prime && !is_prime(n as u64) {
        bail!("length {n} is not prime and --require-prime is set");
    }
    if !opts.linear && n < 2 {
        bail!("cyclic convolution needs at least 2 samples, got {n}");
    }
    Ok(match (kernel, input) {
        (Samples::Real(b), Samples::Real(z)) => Samples::Real(run(b, z, opts)?),
        _ => Samples::Complex(run(&kernel.to_complex(), &input.to_complex(), opts)?),
    })
}

/// Prime-length DFT; real input is promoted to complex.
pub fn cmd_dft(input: &Samples, engine: Engine) -> anyhow::Result<Samples> {
    let p = input.len();
    if p < 3 || !is_prime(p as u64) {
        bail!("dft length must be a prime >= 3, got {p}");
    }
    let plan = DftPlan::new(p)?;
    Ok(Samples::Complex(rader_dft(
        &plan,
        &input.to_complex(),
        engine,
    )?))
}
