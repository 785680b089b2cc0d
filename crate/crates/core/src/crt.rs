//! Chinese-remainder machinery for polynomials and the two-factor reference
//! convolution.
//!
//! For any `n >= 2`, `x^n - 1 = (x - 1)(1 + x + ... + x^(n-1))` with coprime
//! factors, since the second factor evaluates to `n` at `x = 1`. The product
//! `b(x) z(x) mod (x^n - 1)` is then recovered from one scalar product (the
//! residue mod `x - 1`) and one `(n-1) x (n-1)` schoolbook product reduced
//! mod the second factor. For prime `n` the second factor is irreducible over
//! the rationals, and this is the classic two-factor construction.

use crate::arith::{Arithmetic, OpTally, Plain, Scalar};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::primes::is_prime;
use crate::signal::{ensure_same_len, Signal};

/// A remainder smaller than this fraction of the operands' scale ends the
/// Euclidean recursion.
const GCD_EPS: f64 = 1e-9;

/// Returns `(g, s)` with `s a == g (mod b)` and `g` a gcd of `a` and `b`.
fn ext_gcd<F: Scalar>(
    a: &Polynomial<F>,
    b: &Polynomial<F>,
) -> Result<(Polynomial<F>, Polynomial<F>)> {
    let scale = a.max_norm().max(b.max_norm());
    let negligible = |p: &Polynomial<F>| p.max_norm() <= GCD_EPS * scale;

    let (mut r0, mut r1) = (a.clone().trimmed(), b.clone().trimmed());
    let (mut s0, mut s1) = (Polynomial::constant(F::one()), Polynomial::zero());
    while !negligible(&r1) {
        let (q, r) = r0.div_rem(&r1)?;
        let s2 = s0.sub(&q.mul(&s1));
        r0 = std::mem::replace(&mut r1, r.trimmed());
        s0 = std::mem::replace(&mut s1, s2);
    }
    Ok((r0, s0))
}

/// The inverse of `big_m` modulo `m`, of degree below `deg(m)`.
///
/// Fails with [`Error::NotCoprime`] when the gcd has positive degree.
pub fn extended_euclid_inverse<F: Scalar>(
    big_m: &Polynomial<F>,
    m: &Polynomial<F>,
) -> Result<Polynomial<F>> {
    let dm = m.degree().ok_or(Error::ZeroModulus)?;
    let reduced = big_m.rem(m)?;
    let (g, s) = ext_gcd(&reduced, m)?;
    match g.degree() {
        Some(0) => {}
        Some(d) => return Err(Error::NotCoprime(d)),
        None => return Err(Error::NotCoprime(dm)),
    }
    let inv = s.scale(g.coeff(0).recip()).rem(m)?;
    Ok(inv.resized(dm))
}

/// Pairwise coprime moduli with precomputed recombination polynomials
/// `e_k = M_k (M_k^{-1} mod m_k) mod m`, where `M_k = m / m_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueSystem<F> {
    moduli: Vec<Polynomial<F>>,
    product: Polynomial<F>,
    idempotents: Vec<Polynomial<F>>,
}

impl<F: Scalar> ResidueSystem<F> {
    pub fn new(moduli: Vec<Polynomial<F>>) -> Result<Self> {
        let moduli: Vec<_> = moduli.into_iter().map(Polynomial::trimmed).collect();
        if moduli.iter().any(Polynomial::is_zero) {
            return Err(Error::ZeroModulus);
        }
        for (i, a) in moduli.iter().enumerate() {
            for b in &moduli[i + 1..] {
                let (g, _) = ext_gcd(a, b)?;
                if let Some(d) = g.degree().filter(|&d| d > 0) {
                    return Err(Error::NotCoprime(d));
                }
            }
        }
        let product = moduli
            .iter()
            .fold(Polynomial::constant(F::one()), |acc, m| acc.mul(m));
        let dm = product.degree().ok_or(Error::ZeroModulus)?;
        let idempotents = moduli
            .iter()
            .map(|mk| {
                let (cofactor, _) = product.div_rem(mk)?;
                let inv = extended_euclid_inverse(&cofactor, mk)?;
                Ok(cofactor.mul(&inv).rem(&product)?.resized(dm))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            moduli,
            product,
            idempotents,
        })
    }

    /// `{x - 1, 1 + x + ... + x^(n-1)}` for `x^n - 1`.
    pub fn two_factor(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooShort { n, min: 2 });
        }
        Self::new(vec![Polynomial::x_minus_one(), Polynomial::all_ones(n)])
    }

    pub fn moduli(&self) -> &[Polynomial<F>] {
        &self.moduli
    }

    pub fn product(&self) -> &Polynomial<F> {
        &self.product
    }

    pub fn idempotents(&self) -> &[Polynomial<F>] {
        &self.idempotents
    }

    /// `c mod m_k` for every modulus, uncounted.
    pub fn reduce(&self, c: &Polynomial<F>) -> Result<Vec<Polynomial<F>>> {
        self.moduli.iter().map(|m| c.rem(m)).collect()
    }
}

/// The unique `c` with `deg c < deg m` and `c == c_k (mod m_k)` for all `k`,
/// as `sum_k c_k e_k mod m`. The recombination polynomials are fixed by the
/// moduli, so this step is not tallied.
pub fn crt_reconstruct<F: Scalar>(
    residues: &[Polynomial<F>],
    system: &ResidueSystem<F>,
) -> Result<Polynomial<F>> {
    if residues.len() != system.moduli.len() {
        return Err(Error::ResidueCount {
            expected: system.moduli.len(),
            actual: residues.len(),
        });
    }
    let dm = system.product.degree().ok_or(Error::ZeroModulus)?;
    let mut acc = Polynomial::zero();
    for ((ck, mk), ek) in residues.iter().zip(&system.moduli).zip(&system.idempotents) {
        let dk = mk.degree().unwrap_or(0);
        if let Some(d) = ck.degree().filter(|&d| d >= dk) {
            return Err(Error::DegreeTooLarge {
                degree: d,
                modulus: dk,
            });
        }
        acc = acc.add(&ck.mul(ek));
    }
    Ok(acc.rem(&system.product)?.resized(dm))
}

/// Kernel precomputation for the two-factor convolution at any `n >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoFactorPlan<F> {
    n: usize,
    b_at_one: F,
    b_reduced: Polynomial<F>,
    system: ResidueSystem<F>,
}

impl<F: Scalar> TwoFactorPlan<F> {
    pub fn new(b: &Signal<F>) -> Result<Self> {
        let n = b.len();
        let system = ResidueSystem::two_factor(n)?;
        let s = b.as_slice();
        let b_reduced = Polynomial::new((0..n - 1).map(|k| s[k] - s[n - 1]).collect());
        Ok(Self {
            n,
            b_at_one: b.sum(),
            b_reduced,
            system,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn system(&self) -> &ResidueSystem<F> {
        &self.system
    }

    pub fn convolve(&self, z: &Signal<F>) -> Result<Signal<F>> {
        self.execute(z, &mut Plain)
    }

    pub fn execute<A: Arithmetic>(&self, z: &Signal<F>, ops: &mut A) -> Result<Signal<F>> {
        let n = self.n;
        if z.len() != n {
            return Err(Error::LengthMismatch {
                left: n,
                right: z.len(),
            });
        }
        let z = z.as_slice();

        // Residue mod (x - 1): b(1) z(1).
        let mut z_at_one = z[0];
        for &x in &z[1..] {
            z_at_one = ops.add(z_at_one, x);
        }
        let c0 = ops.mul(self.b_at_one, z_at_one);

        // Residue mod 1 + x + ... + x^(n-1): x^(n-1) == -(1 + ... + x^(n-2)).
        let z_reduced = Polynomial::new((0..n - 1).map(|k| ops.sub(z[k], z[n - 1])).collect());
        let mut r = self.b_reduced.mul_with(&z_reduced, ops).into_coeffs();
        // Fold with x^n == 1, then eliminate x^(n-1); additions only.
        for k in n..r.len() {
            r[k - n] = ops.add(r[k - n], r[k]);
        }
        r.truncate(n);
        if r.len() == n {
            let top = r[n - 1];
            for rk in &mut r[..n - 1] {
                *rk = ops.sub(*rk, top);
            }
        }
        r.resize(n - 1, F::zero());

        let c = crt_reconstruct(
            &[Polynomial::constant(c0), Polynomial::new(r)],
            &self.system,
        )?;
        Ok(Signal::from_vec_unchecked(c.into_coeffs()))
    }
}

/// Two-factor CRT convolution for prime `p`: `1 + (p-1)^2` multiplications.
pub fn winograd_two_factor_convolution<F: Scalar>(
    b: &Signal<F>,
    z: &Signal<F>,
    tally: &mut OpTally,
) -> Result<Signal<F>> {
    let p = ensure_same_len(b, z)?;
    if p < 2 {
        return Err(Error::TooShort { n: p, min: 2 });
    }
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p));
    }
    TwoFactorPlan::new(b)?.execute(z, tally)
}

/// Operations performed by [`TwoFactorPlan::execute`] at length `n`.
pub fn two_factor_schedule(n: usize) -> Result<OpTally> {
    if n < 2 {
        return Err(Error::TooShort { n, min: 2 });
    }
    let m = (n - 1) as u64;
    let fold = n.saturating_sub(3) as u64;
    let eliminate = if n >= 3 { m } else { 0 };
    Ok(OpTally::new(
        1 + m * m,
        2 * m + (m - 1) * (m - 1) + fold + eliminate,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use crate::signal::{direct_cyclic_convolution, rel_error};
    use num_complex::Complex64;

    fn p(c: &[f64]) -> Polynomial<f64> {
        Polynomial::new(c.to_vec())
    }

    fn max_diff(a: &Polynomial<f64>, b: &Polynomial<f64>) -> f64 {
        let len = a.coeffs().len().max(b.coeffs().len());
        (0..len).fold(0.0, |m, k| m.max((a.coeff(k) - b.coeff(k)).abs()))
    }

    #[test]
    fn inverse_mod_x_minus_one_is_reciprocal_length() {
        for n in [2usize, 3, 5, 7, 13] {
            let inv: Polynomial<f64> =
                extended_euclid_inverse(&Polynomial::all_ones(n), &Polynomial::x_minus_one())
                    .unwrap();
            assert_eq!(inv.coeffs().len(), 1);
            assert!((inv.coeff(0) - 1.0 / n as f64).abs() < 1e-15);
            // Substitution x = 1.
            assert!((Polynomial::<f64>::all_ones(n).eval(1.0) * inv.coeff(0) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn inverse_of_x_minus_one_mod_cyclotomic_three() {
        // Oracle: (x - 1)(r0 + r1 x) mod (x^2 + x + 1)
        //   = (r0 - 2 r1) x + (-r0 - r1); set equal to 1 and solve.
        let (a, b, e) = ([1.0, -2.0], [-1.0, -1.0], [0.0, 1.0]);
        let det = a[0] * b[1] - a[1] * b[0];
        let r0 = (e[0] * b[1] - a[1] * e[1]) / det;
        let r1 = (a[0] * e[1] - e[0] * b[0]) / det;

        let m1 = Polynomial::<f64>::all_ones(3);
        let inv = extended_euclid_inverse(&Polynomial::x_minus_one(), &m1).unwrap();
        assert!((inv.coeff(0) - r0).abs() < 1e-12);
        assert!((inv.coeff(1) - r1).abs() < 1e-12);
        let check = Polynomial::x_minus_one().mul(&inv).rem(&m1).unwrap();
        assert!(max_diff(&check, &p(&[1.0])) < 1e-8);
    }

    #[test]
    fn inverse_residuals_are_small() {
        for n in 2..=31 {
            let m1 = Polynomial::<f64>::all_ones(n);
            let inv = extended_euclid_inverse(&Polynomial::x_minus_one(), &m1).unwrap();
            let check = Polynomial::x_minus_one().mul(&inv).rem(&m1).unwrap();
            assert!(max_diff(&check, &p(&[1.0])) < 1e-8, "n = {n}");
        }
    }

    #[test]
    fn inverse_rejects_common_factor() {
        let m = Polynomial::<f64>::all_ones(5);
        assert!(matches!(
            extended_euclid_inverse(&m, &m),
            Err(Error::NotCoprime(_))
        ));
        // (x - 1)(x + 2) and (x - 1)(x - 3) share x - 1.
        let a = p(&[-2.0, 1.0, 1.0]);
        let b = p(&[3.0, -4.0, 1.0]);
        assert_eq!(extended_euclid_inverse(&a, &b), Err(Error::NotCoprime(1)));
        assert!(ResidueSystem::new(vec![a, b]).is_err());
    }

    #[test]
    fn two_factor_system_multiplies_back() {
        for n in 2..=13 {
            let sys = ResidueSystem::<f64>::two_factor(n).unwrap();
            assert!(max_diff(sys.product(), &Polynomial::cyclic_modulus(n)) <= 1e-9);
        }
    }

    #[test]
    fn reconstruct_zero_residues() {
        let sys = ResidueSystem::<f64>::two_factor(5).unwrap();
        let c = crt_reconstruct(&[Polynomial::zero(), Polynomial::zero()], &sys).unwrap();
        assert!(c.is_zero());
        assert_eq!(c.coeffs().len(), 5);
    }

    #[test]
    fn reconstruct_round_trip() {
        let mut rng = sample::stream_rng(23, 0);
        for n in [2usize, 3, 5, 7, 11, 13] {
            let sys = ResidueSystem::two_factor(n).unwrap();
            for _ in 0..20 {
                let c = Polynomial::from_signal(&sample::real_signal(&mut rng, n));
                let back = crt_reconstruct(&sys.reduce(&c).unwrap(), &sys).unwrap();
                assert!(max_diff(&back, &c) <= 1e-9, "n = {n}");
            }
        }
    }

    #[test]
    fn reconstruct_three_moduli() {
        // x^3 - x = x (x - 1)(x + 1)
        let sys =
            ResidueSystem::new(vec![p(&[0.0, 1.0]), p(&[-1.0, 1.0]), p(&[1.0, 1.0])]).unwrap();
        let c = p(&[0.5, -2.0, 3.0]);
        let back = crt_reconstruct(&sys.reduce(&c).unwrap(), &sys).unwrap();
        assert!(max_diff(&back, &c) < 1e-12);
    }

    #[test]
    fn reconstruct_checks_arity_and_degree() {
        let sys = ResidueSystem::<f64>::two_factor(3).unwrap();
        assert_eq!(
            crt_reconstruct(&[Polynomial::zero()], &sys),
            Err(Error::ResidueCount {
                expected: 2,
                actual: 1
            })
        );
        assert!(matches!(
            crt_reconstruct(&[p(&[0.0, 1.0]), Polynomial::zero()], &sys),
            Err(Error::DegreeTooLarge { .. })
        ));
    }

    #[test]
    fn reconstruct_product_residues() {
        let sys = ResidueSystem::two_factor(3).unwrap();
        let b = p(&[1.0, 2.0, 3.0]);
        let z = p(&[4.0, 5.0, 6.0]);
        let residues: Vec<_> = sys
            .moduli()
            .iter()
            .map(|m| b.mul(&z).rem(m).unwrap())
            .collect();
        let c = crt_reconstruct(&residues, &sys).unwrap();
        assert!(max_diff(&c, &p(&[31.0, 31.0, 28.0])) < 1e-12);
    }

    #[test]
    fn two_factor_small_example_and_delta() {
        let b = Signal::new(vec![1.0, 2.0, 3.0]).unwrap();
        let z = Signal::new(vec![4.0, 5.0, 6.0]).unwrap();
        let c = winograd_two_factor_convolution(&b, &z, &mut OpTally::default()).unwrap();
        assert!(rel_error(&c, &Signal::new(vec![31.0, 31.0, 28.0]).unwrap()) < 1e-12);

        let z = Signal::new(vec![0.5, -1.0, 2.0, 0.0, 3.5]).unwrap();
        let c = winograd_two_factor_convolution(
            &Signal::delta(5).unwrap(),
            &z,
            &mut OpTally::default(),
        )
        .unwrap();
        assert!(rel_error(&c, &z) < 1e-12);
    }

    #[test]
    fn two_factor_counts() {
        let mut t = OpTally::default();
        let x = Signal::<f64>::ones(3).unwrap();
        winograd_two_factor_convolution(&x, &x, &mut t).unwrap();
        assert_eq!(t.mults, 5);
        let mut rng = sample::stream_rng(29, 0);
        for n in 2..=40 {
            let b = sample::real_signal(&mut rng, n);
            let z = sample::real_signal(&mut rng, n);
            let mut t = OpTally::default();
            TwoFactorPlan::new(&b).unwrap().execute(&z, &mut t).unwrap();
            assert_eq!(t, two_factor_schedule(n).unwrap(), "n = {n}");
            assert_eq!(t.mults, 1 + ((n - 1) * (n - 1)) as u64);
        }
    }

    #[test]
    fn two_factor_rejects_composite_and_short() {
        let x = Signal::<f64>::ones(4).unwrap();
        assert_eq!(
            winograd_two_factor_convolution(&x, &x, &mut OpTally::default()),
            Err(Error::NotPrime(4))
        );
        let x = Signal::<f64>::ones(1).unwrap();
        assert!(winograd_two_factor_convolution(&x, &x, &mut OpTally::default()).is_err());
    }

    #[test]
    fn two_factor_matches_direct_any_length() {
        let mut rng = sample::stream_rng(31, 0);
        for n in 2..=64 {
            let b = sample::complex_signal(&mut rng, n);
            let z = sample::complex_signal(&mut rng, n);
            let c = TwoFactorPlan::<Complex64>::new(&b)
                .unwrap()
                .convolve(&z)
                .unwrap();
            let d = direct_cyclic_convolution(&b, &z, &mut OpTally::default()).unwrap();
            assert!(rel_error(&c, &d) <= 1e-9, "n = {n}");
        }
    }
}
