//! Scalar arithmetic in two interchangeable modes.
//!
//! [`Plain`] performs the operations directly. [`OpTally`] performs the same
//! operations in the same order and increments a counter for each one, so
//! both modes return bit-identical results.
//!
//! Counting model: one multiplication or one addition of field elements
//! counts as one operation, whatever the scalar type. A complex product is a
//! single multiplication. Subtraction counts as an addition. Negation is a
//! sign flip and is not counted. Multiplications by constants that depend on
//! the kernel alone (the `1/n` scaling in plan construction, CRT
//! recombination coefficients, DFT twiddles) happen at plan time and never
//! reach an [`Arithmetic`] implementation.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// A field element: `f64` or [`Complex64`].
pub trait Scalar:
    Copy
    + Debug
    + Default
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    /// Embeds a real number.
    fn from_f64(x: f64) -> Self;
    /// Multiplies by a real constant.
    fn scale(self, k: f64) -> Self;
    fn recip(self) -> Self;
    /// Absolute value (modulus for complex numbers).
    fn norm(self) -> f64;
    fn is_finite(self) -> bool;
}

impl Scalar for f64 {
    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn one() -> Self {
        1.0
    }
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn scale(self, k: f64) -> Self {
        self * k
    }
    #[inline]
    fn recip(self) -> Self {
        1.0 / self
    }
    #[inline]
    fn norm(self) -> f64 {
        self.abs()
    }
    #[inline]
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl Scalar for Complex64 {
    #[inline]
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    #[inline]
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    #[inline]
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    #[inline]
    fn scale(self, k: f64) -> Self {
        self * k
    }
    #[inline]
    fn recip(self) -> Self {
        self.inv()
    }
    #[inline]
    fn norm(self) -> f64 {
        self.norm()
    }
    #[inline]
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// The arithmetic every engine runs its data-dependent work through.
pub trait Arithmetic {
    fn mul<F: Scalar>(&mut self, a: F, b: F) -> F;
    fn add<F: Scalar>(&mut self, a: F, b: F) -> F;
    fn sub<F: Scalar>(&mut self, a: F, b: F) -> F;
}

/// Uncounted arithmetic.
#[derive(Debug, Default, Clone, Copy)]
pub struct Plain;

impl Arithmetic for Plain {
    #[inline(always)]
    fn mul<F: Scalar>(&mut self, a: F, b: F) -> F {
        a * b
    }
    #[inline(always)]
    fn add<F: Scalar>(&mut self, a: F, b: F) -> F {
        a + b
    }
    #[inline(always)]
    fn sub<F: Scalar>(&mut self, a: F, b: F) -> F {
        a - b
    }
}

/// Exact counts of scalar multiplications and additions.
///
/// A tally belongs to one execution at a time; it is threaded explicitly
/// through the engines so concurrent executions never share a counter.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OpTally {
    pub mults: u64,
    pub adds: u64,
}

impl OpTally {
    pub const fn new(mults: u64, adds: u64) -> Self {
        Self { mults, adds }
    }

    pub fn reset(&mut self) {
        *self = Self::default();
    }
}

impl Add for OpTally {
    type Output = OpTally;

    fn add(self, rhs: OpTally) -> OpTally {
        OpTally::new(self.mults + rhs.mults, self.adds + rhs.adds)
    }
}

impl Arithmetic for OpTally {
    #[inline]
    fn mul<F: Scalar>(&mut self, a: F, b: F) -> F {
        self.mults += 1;
        a * b
    }
    #[inline]
    fn add<F: Scalar>(&mut self, a: F, b: F) -> F {
        self.adds += 1;
        a + b
    }
    #[inline]
    fn sub<F: Scalar>(&mut self, a: F, b: F) -> F {
        self.adds += 1;
        a - b
    }
}

pub fn counted_mul<F: Scalar>(a: F, b: F, tally: &mut OpTally) -> F {
    tally.mul(a, b)
}

pub fn counted_add<F: Scalar>(a: F, b: F, tally: &mut OpTally) -> F {
    tally.add(a, b)
}

/// Subtraction, tallied as an addition.
pub fn counted_sub<F: Scalar>(a: F, b: F, tally: &mut OpTally) -> F {
    tally.sub(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mul_counts_one() {
        let mut t = OpTally::default();
        assert_eq!(counted_mul(2.0, 3.0, &mut t), 6.0);
        assert_eq!(t, OpTally::new(1, 0));
    }

    #[test]
    fn mul_by_one_and_zero_still_count() {
        let mut t = OpTally::new(4, 7);
        assert_eq!(counted_mul(1.25, 1.0, &mut t), 1.25);
        assert_eq!(t, OpTally::new(5, 7));

        let mut t = OpTally::default();
        assert_eq!(counted_mul(0.0, 5.0, &mut t), 0.0);
        assert_eq!(t, OpTally::new(1, 0));
    }

    #[test]
    fn add_and_sub_count_as_additions() {
        let mut t = OpTally::default();
        assert_eq!(counted_add(2.0, 3.0, &mut t), 5.0);
        assert_eq!(t, OpTally::new(0, 1));

        let mut t = OpTally::new(2, 2);
        assert_eq!(counted_add(-0.5, 0.0, &mut t), -0.5);
        assert_eq!(t, OpTally::new(2, 3));

        let mut t = OpTally::default();
        assert_eq!(counted_sub(5.0, 2.0, &mut t), 3.0);
        assert_eq!(t, OpTally::new(0, 1));
    }

    #[test]
    fn complex_product_is_one_multiplication() {
        let mut t = OpTally::default();
        let p = counted_mul(Complex64::new(1.0, 2.0), Complex64::new(3.0, -1.0), &mut t);
        assert_eq!(p, Complex64::new(5.0, 5.0));
        assert_eq!(t.mults, 1);
    }

    #[test]
    fn reset_clears() {
        let mut t = OpTally::new(3, 9);
        t.reset();
        assert_eq!(t, OpTally::default());
    }

    #[derive(Debug, Clone, Copy)]
    enum Op {
        Mul,
        Add,
        Sub,
    }

    fn run<A: Arithmetic>(ops: &mut A, seq: &[(Op, f64)], start: f64) -> f64 {
        seq.iter().fold(start, |acc, &(op, x)| match op {
            Op::Mul => ops.mul(acc, x),
            Op::Add => ops.add(acc, x),
            Op::Sub => ops.sub(acc, x),
        })
    }

    proptest! {
        #[test]
        fn counted_and_plain_are_bit_identical(
            start in -1e3f64..1e3,
            seq in prop::collection::vec(
                (prop_oneof![Just(Op::Mul), Just(Op::Add), Just(Op::Sub)], -2.0f64..2.0),
                0..64,
            ),
        ) {
            let plain = run(&mut Plain, &seq, start);
            let mut tally = OpTally::default();
            let counted = run(&mut tally, &seq, start);
            prop_assert_eq!(plain.to_bits(), counted.to_bits());

            let mults = seq.iter().filter(|(op, _)| matches!(op, Op::Mul)).count() as u64;
            prop_assert_eq!(tally, OpTally::new(mults, seq.len() as u64 - mults));
        }
    }
}
