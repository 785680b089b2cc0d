//! Materialized-matrix reference computations.
//!
//! Nothing here is used by the engines. These routines build the shift
//! matrix, the seed vector, the singular matrix `F = (s, Ds, ..., D^{n-1}s)`
//! and the cyclic matrix explicitly, so tests and the `verify` command can
//! check the engines against an independent route.

use crate::arith::Scalar;

pub type Matrix<F> = Vec<Vec<F>>;

pub fn identity(n: usize) -> Matrix<f64> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

/// The cyclic shift `D = (e_2, ..., e_n, e_1)`: ones on the subdiagonal and
/// in the top-right corner.
pub fn shift_matrix(n: usize) -> Matrix<f64> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == (j + 1) % n { 1.0 } else { 0.0 })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &Matrix<f64>, b: &Matrix<f64>) -> Matrix<f64> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_pow(a: &Matrix<f64>, k: usize) -> Matrix<f64> {
    (0..k).fold(identity(a.len()), |acc, _| mat_mul(&acc, a))
}

pub fn mat_vec<F: Scalar>(m: &[Vec<F>], x: &[F]) -> Vec<F> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(F::zero(), |acc, (&a, &b)| acc + a * b)
        })
        .collect()
}

fn lift<F: Scalar>(m: &Matrix<f64>) -> Matrix<F> {
    m.iter()
        .map(|row| row.iter().map(|&x| F::from_f64(x)).collect())
        .collect()
}

/// `s = (-n+1, 1, ..., 1)`, orthogonal to the all-ones vector.
pub fn seed_vector(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| if i == 0 { 1.0 - n as f64 } else { 1.0 })
        .collect()
}

/// `F = (D^0 s, D^1 s, ..., D^{n-1} s)`, built column by column with
/// explicit matrix powers.
pub fn f_matrix(n: usize) -> Matrix<f64> {
    let d = shift_matrix(n);
    let s = seed_vector(n);
    let columns: Vec<Vec<f64>> = (0..n).map(|j| mat_vec(&mat_pow(&d, j), &s)).collect();
    (0..n)
        .map(|i| (0..n).map(|j| columns[j][i]).collect())
        .collect()
}

/// Row `i` is `b` rotated left by `i`: `B[i][j] = b_{(i+j) mod n}`.
pub fn cyclic_matrix<F: Scalar>(b: &[F]) -> Matrix<F> {
    let n = b.len();
    (0..n)
        .map(|i| (0..n).map(|j| b[(i + j) % n]).collect())
        .collect()
}

/// Rank by Gaussian elimination with partial pivoting; pivots with magnitude
/// at or below `threshold` are treated as zero.
pub fn rank(m: &Matrix<f64>, threshold: f64) -> usize {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let pivot = (r..rows)
            .max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
            .unwrap();
        if a[pivot][c].abs() <= threshold {
            continue;
        }
        a.swap(r, pivot);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest {
            let f = row[c] / pivot_row[c];
            for (x, &p) in row[c..cols].iter_mut().zip(&pivot_row[c..cols]) {
                *x -= f * p;
            }
        }
        r += 1;
    }
    r
}

/// `v_i = b^T D^i s / n` with every power of `D` materialized.
pub fn explicit_host_values<F: Scalar>(b: &[F]) -> Vec<F> {
    let n = b.len();
    let d = shift_matrix(n);
    let s = seed_vector(n);
    (0..n)
        .map(|i| {
            let col = mat_vec(&mat_pow(&d, i), &s);
            b.iter()
                .zip(&col)
                .fold(F::zero(), |acc, (&x, &w)| acc + x.scale(w))
                .scale(1.0 / n as f64)
        })
        .collect()
}

/// `h_i = b^T D^i F y / n` for every `i`, from materialized matrices.
pub fn explicit_h<F: Scalar>(b: &[F], y: &[F]) -> Vec<F> {
    let n = b.len();
    let d = shift_matrix(n);
    let f = f_matrix(n);
    let fy = mat_vec(&lift::<F>(&f), y);
    (0..n)
        .map(|i| {
            let dfy = mat_vec(&lift::<F>(&mat_pow(&d, i)), &fy);
            b.iter()
                .zip(&dfy)
                .fold(F::zero(), |acc, (&x, &w)| acc + x * w)
                .scale(1.0 / n as f64)
        })
        .collect()
}

/// `g_{i,j} = v_{(i+j) mod n} (y_j - y_i)` for any ordered pair.
pub fn g_entry<F: Scalar>(v: &[F], y: &[F], i: usize, j: usize) -> F {
    let n = v.len();
    v[(i + j) % n] * (y[j] - y[i])
}

/// Full linear convolution of length `len(b) + len(z) - 1`.
pub fn schoolbook_linear_convolution<F: Scalar>(b: &[F], z: &[F]) -> Vec<F> {
    if b.is_empty() || z.is_empty() {
        return Vec::new();
    }
    let mut out = vec![F::zero(); b.len() + z.len() - 1];
    for (i, &x) in b.iter().enumerate() {
        for (j, &y) in z.iter().enumerate() {
            out[i + j] = out[i + j] + x * y;
        }
    }
    out
}
