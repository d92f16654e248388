//! Floating-point kernels used by the character computations.

use crate::scalar::{to_f64, Scalar};
use nalgebra::{DMatrix, DVector, Schur, SVD};
use num_complex::Complex;

pub(crate) type C64 = Complex<f64>;

pub(crate) fn to_complex_matrix(m: &[Vec<Scalar>]) -> DMatrix<C64> {
    let n = m.len();
    DMatrix::from_fn(n, n, |i, j| C64::new(to_f64(&m[i][j]), 0.0))
}

/// Eigenvalues through a complex Schur decomposition; `None` when the
/// iteration does not converge.
pub(crate) fn eigenvalues(m: &DMatrix<C64>) -> Option<Vec<C64>> {
    let schur = Schur::try_new(m.clone(), f64::EPSILON, 10_000)?;
    Some(schur.eigenvalues()?.iter().copied().collect())
}

/// Right singular vectors of `m` whose singular values are the `count`
/// smallest, as columns.
pub(crate) fn smallest_right_singular(m: &DMatrix<C64>, count: usize) -> Option<(DMatrix<C64>, Vec<f64>)> {
    let n = m.ncols();
    // Pad to a square matrix so that v_t has a full set of rows.
    let square = if m.nrows() < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = SVD::try_new(square, false, true, f64::EPSILON, 10_000)?;
    let v_t = svd.v_t?;
    let k = svd.singular_values.len();
    let mut idx: Vec<usize> = (0..k).collect();
    idx.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let chosen = &idx[..count.min(k)];
    let cols = DMatrix::from_fn(n, chosen.len(), |i, j| v_t[(chosen[j], i)].conj());
    let values = idx.iter().map(|&i| svd.singular_values[i]).collect();
    Some((cols, values))
}

/// `v^H A v / v^H v`.
pub(crate) fn rayleigh(a: &DMatrix<C64>, v: &DVector<C64>) -> C64 {
    let av = a * v;
    v.dotc(&av) / v.dotc(v)
}

/// Orthonormal basis of the column span of `m` (assumed full rank).
pub(crate) fn orthonormalize(m: DMatrix<C64>) -> DMatrix<C64> {
    let k = m.ncols();
    let qr = m.qr();
    let q = qr.q();
    q.columns(0, k).into_owned()
}

/// Groups values whose distance to a cluster's first member is below
/// `threshold`; returns the first member and multiplicity of each cluster.
pub(crate) fn cluster(values: &[C64], threshold: f64) -> Vec<(C64, usize)> {
    let mut out: Vec<(C64, usize)> = Vec::new();
    for &v in values {
        match out.iter_mut().find(|(c, _)| (*c - v).norm() < threshold) {
            Some(entry) => entry.1 += 1,
            None => out.push((v, 1)),
        }
    }
    out
}

pub(crate) fn min_separation(values: &[C64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            best = best.min((values[i] - values[j]).norm());
        }
    }
    best
}

/// Solves `a x = b`; `None` when `a` is singular.
pub(crate) fn solve(a: &DMatrix<C64>, b: &DVector<C64>) -> Option<DVector<C64>> {
    a.clone().lu().solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues_of_a_rotation() {
        let m = DMatrix::from_row_slice(2, 2, &[C64::new(0.0, 0.0), C64::new(-1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let mut ev = eigenvalues(&m).unwrap();
        ev.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((ev[0] - C64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((ev[1] - C64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn kernel_vector_of_singular_matrix() {
        let m = DMatrix::from_row_slice(2, 2, &[C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0)]);
        let (v, s) = smallest_right_singular(&m, 1).unwrap();
        assert!(s[0] < 1e-12);
        let r = &m * v.column(0);
        assert!(r.norm() < 1e-12);
    }

    #[test]
    fn clustering() {
        let v = [C64::new(1.0, 0.0), C64::new(1.0 + 1e-12, 0.0), C64::new(2.0, 0.0)];
        assert_eq!(cluster(&v, 1e-8).len(), 2);
        assert!(min_separation(&v) < 1e-11);
    }
}
