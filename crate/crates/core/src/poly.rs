//! Dense polynomials over a scalar field.

use crate::arith::{Arithmetic, OpTally, Plain, Scalar};
use crate::error::{Error, Result};
use crate::signal::Signal;

/// Relative magnitude below which a leading coefficient is ignored when
/// computing the degree.
pub const DEGREE_EPS: f64 = 1e-12;

/// Coefficient `k` multiplies `x^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<F> {
    coeffs: Vec<F>,
}

impl<F: Scalar> Polynomial<F> {
    pub fn new(coeffs: Vec<F>) -> Self {
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Self { coeffs: vec![c] }
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![F::zero(); k + 1];
        coeffs[k] = F::one();
        Self { coeffs }
    }

    /// `x^n - 1`.
    pub fn cyclic_modulus(n: usize) -> Self {
        let mut coeffs = vec![F::zero(); n + 1];
        coeffs[0] = -F::one();
        coeffs[n] = F::one();
        Self { coeffs }
    }

    /// `x - 1`.
    pub fn x_minus_one() -> Self {
        Self::new(vec![-F::one(), F::one()])
    }

    /// `1 + x + ... + x^(n-1)`.
    pub fn all_ones(n: usize) -> Self {
        Self::new(vec![F::one(); n])
    }

    pub fn from_signal(s: &Signal<F>) -> Self {
        Self::new(s.as_slice().to_vec())
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the stored length.
    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).copied().unwrap_or_else(F::zero)
    }

    pub fn max_norm(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Highest index whose coefficient exceeds `DEGREE_EPS` times the largest
    /// coefficient magnitude; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let max = self.max_norm();
        if max == 0.0 {
            return None;
        }
        self.coeffs
            .iter()
            .rposition(|c| c.norm() > DEGREE_EPS * max)
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// Drops coefficients above the numerical degree.
    pub fn trimmed(mut self) -> Self {
        let len = self.degree().map_or(0, |d| d + 1);
        self.coeffs.truncate(len);
        self
    }

    /// Pads with zeros (or truncates) to exactly `len` coefficients.
    pub fn resized(mut self, len: usize) -> Self {
        self.coeffs.resize(len, F::zero());
        self
    }

    pub fn eval(&self, x: F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, &c| acc * x + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn scale(&self, k: F) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * k).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_with(other, &mut Plain)
    }

    /// Schoolbook product. Each output coefficient starts from its first
    /// term, so `la * lb` multiplications and `la * lb - (la + lb - 1)`
    /// additions are performed.
    pub fn mul_with<A: Arithmetic>(&self, other: &Self, ops: &mut A) -> Self {
        let (a, b) = (&self.coeffs, &other.coeffs);
        if a.is_empty() || b.is_empty() {
            return Self::zero();
        }
        let out = (0..a.len() + b.len() - 1)
            .map(|k| {
                let lo = k.saturating_sub(b.len() - 1);
                let hi = k.min(a.len() - 1);
                let mut acc = ops.mul(a[lo], b[k - lo]);
                for i in lo + 1..=hi {
                    let t = ops.mul(a[i], b[k - i]);
                    acc = ops.add(acc, t);
                }
                acc
            })
            .collect();
        Self::new(out)
    }

    pub fn div_rem(&self, m: &Self) -> Result<(Self, Self)> {
        self.div_rem_with(m, &mut Plain)
    }

    /// Long division by `m`. The leading coefficient of `m` is inverted once;
    /// when it is exactly one, no normalizing multiplications occur.
    pub fn div_rem_with<A: Arithmetic>(&self, m: &Self, ops: &mut A) -> Result<(Self, Self)> {
        let dm = m.degree().ok_or(Error::ZeroModulus)?;
        let lead = m.coeffs[dm];
        let monic = lead == F::one();
        let inv_lead = lead.recip();

        let mut r = self.coeffs.clone();
        if r.len() <= dm {
            r.resize(dm, F::zero());
            return Ok((Self::zero(), Self::new(r)));
        }
        let mut q = vec![F::zero(); r.len() - dm];
        for k in (dm..r.len()).rev() {
            let coef = if monic { r[k] } else { ops.mul(r[k], inv_lead) };
            q[k - dm] = coef;
            r[k] = F::zero();
            for t in 0..dm {
                let p = ops.mul(coef, m.coeffs[t]);
                r[k - dm + t] = ops.sub(r[k - dm + t], p);
            }
        }
        r.truncate(dm);
        Ok((Self::new(q), Self::new(r)))
    }

    pub fn rem(&self, m: &Self) -> Result<Self> {
        Ok(self.div_rem(m)?.1)
    }
}

/// `a(x) b(x) mod m(x)` by schoolbook product then long division, with every
/// scalar operation tallied.
pub fn poly_mul_mod<F: Scalar>(
    a: &Polynomial<F>,
    b: &Polynomial<F>,
    m: &Polynomial<F>,
    tally: &mut OpTally,
) -> Result<Polynomial<F>> {
    let dm = m.degree().ok_or(Error::ZeroModulus)?;
    for p in [a, b] {
        if let Some(d) = p.degree() {
            if d >= dm {
                return Err(Error::DegreeTooLarge {
                    degree: d,
                    modulus: dm,
                });
            }
        }
    }
    let a = a.clone().trimmed();
    let b = b.clone().trimmed();
    let product = a.mul_with(&b, tally);
    Ok(product.div_rem_with(m, tally)?.1)
}
