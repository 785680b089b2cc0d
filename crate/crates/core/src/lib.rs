//! Fast cyclic convolution for arbitrary lengths `n >= 2`, with the
//! multiplication count reduced to `n(n-1)/2 + 1`.
//!
//! The crate provides:
//!
//! - [`signal`]: the [`Signal`] type, the input reversal and rotation
//!   permutations, and the direct-evaluation oracle.
//! - [`fast`]: the fast engine built around a precomputed [`FastPlan`].
//! - [`poly`] and [`crt`]: polynomial residue arithmetic and the two-factor
//!   Chinese-remainder reference convolution.
//! - [`transforms`]: engine dispatch, Rader prime-length DFT and linear
//!   convolution by zero padding.
//! - [`arith`]: plain and operation-counting scalar arithmetic. Every engine
//!   is generic over [`Arithmetic`], so tallies are measured rather than
//!   estimated.
//!
//! Batch entry points run on rayon when the `parallel` feature is enabled
//! (the default) and fall back to a sequential loop otherwise.
//!
//! ```
//! use primeconv::{direct_cyclic_convolution, plan_create, OpTally, Signal};
//!
//! let b = Signal::new(vec![1.0, 2.0, 3.0]).unwrap();
//! let z = Signal::new(vec![4.0, 5.0, 6.0]).unwrap();
//! let plan = plan_create(&b).unwrap();
//!
//! let mut tally = OpTally::default();
//! let c = primeconv::fast_cyclic_convolution(&plan, &z, &mut tally).unwrap();
//! assert_eq!(tally.mults, 4);
//!
//! let oracle = direct_cyclic_convolution(&b, &z, &mut OpTally::default()).unwrap();
//! assert!(primeconv::rel_error(&c, &oracle) < 1e-12);
//! ```

pub mod arith;
pub mod crt;
mod error;
pub mod fast;
pub mod oracle;
pub mod parallel;
pub mod poly;
pub mod primes;
pub mod sample;
pub mod signal;
pub mod transforms;

pub use arith::{counted_add, counted_mul, counted_sub, Arithmetic, OpTally, Plain, Scalar};
pub use crt::{
    crt_reconstruct, extended_euclid_inverse, winograd_two_factor_convolution, ResidueSystem,
    TwoFactorPlan,
};
pub use error::{Error, Result};
pub use fast::{
    fast_cyclic_convolution, plan_create, predicted_counts, schedule_counts, FastPlan, FastTrace,
    GTable,
};
pub use poly::{poly_mul_mod, Polynomial};
pub use signal::{
    direct_cyclic_convolution, rel_error, reverse_permute, rotate, Length, Signal, Tolerance,
};
pub use transforms::{
    find_primitive_root, full_linear_convolution, linear_convolution, naive_dft, rader_dft,
    DftPlan, Engine, Padding, PreparedKernel,
};

pub use num_complex::Complex64;
