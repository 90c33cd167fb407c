//! Dense complex linear algebra with an explicit tolerance discipline.
//!
//! Matrices here are tiny (at most a few hundred rows), so everything is dense
//! and rank decisions are made by thresholding singular values or eigenvalues
//! relative to the largest one.

use alloc::vec::Vec;

use nalgebra::{Complex, ComplexField, DMatrix, DVector};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const DEFAULT_EPS: f64 = 1e-9;

/// Absolute tolerance used by every approximate comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    eps: f64,
}

impl Tolerance {
    pub fn new(eps: f64) -> Result<Self> {
        if eps.is_finite() && eps > 0.0 {
            Ok(Self { eps })
        } else {
            Err(Error::InvalidInput(alloc::format!(
                "tolerance must be positive and finite, got {eps}"
            )))
        }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { eps: DEFAULT_EPS }
    }
}

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Builds a matrix from row slices. Panics on ragged input; meant for literals.
pub fn from_rows(rows: &[&[C64]]) -> CMatrix {
    let r = rows.len();
    let cols = rows.first().map_or(0, |row| row.len());
    CMatrix::from_fn(r, cols, |i, j| rows[i][j])
}

/// Rejects NaN and infinite entries.
pub fn check_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidInput("matrix has non-finite entries".into()))
    }
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::dimension(
            alloc::format!("{:?}", a.shape()),
            alloc::format!("{:?}", b.shape()),
        ));
    }
    Ok(a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).modulus())
        .fold(0.0, f64::max))
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.modulus()).fold(0.0, f64::max)
}

pub fn vec_max_abs(v: &CVector) -> f64 {
    v.iter().map(|z| z.modulus()).fold(0.0, f64::max)
}

pub fn approx_equal(a: &CMatrix, b: &CMatrix, tol: Tolerance) -> Result<bool> {
    Ok(max_abs_diff(a, b)? <= tol.eps())
}

/// `max |U*U - I|`, or infinity for non-square input.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let n = u.nrows();
    max_abs(&(u.adjoint() * u - identity(n)))
}

pub fn is_unitary(u: &CMatrix, tol: Tolerance) -> bool {
    unitarity_residual(u) <= tol.eps()
}

/// Kronecker product with the first factor as the slow index.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Entrywise complex conjugate.
pub fn conj(a: &CMatrix) -> CMatrix {
    a.map(|z| z.conj())
}

fn columns_matrix(n: usize, vectors: &[CVector]) -> CMatrix {
    let mut m = CMatrix::zeros(n, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        m.set_column(j, v);
    }
    m
}

/// Eigen-decomposition of a Hermitian matrix, eigenpairs sorted by
/// descending eigenvalue.
pub fn hermitian_eigen(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = h.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    // Symmetrize so round-off does not leak into the solver.
    let sym = (h + h.adjoint()).map(|z| z * 0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, k| eig.eigenvectors[(r, order[k])]);
    (values, vectors)
}

/// Singular values (descending) and the matching left singular vectors of
/// `m`, by one-sided Jacobi rotations on the columns.
///
/// nalgebra's complex SVD loses accuracy on rank-deficient input, and the
/// rank decisions downstream need small singular values resolved to near
/// machine precision relative to the largest one.
pub fn left_svd(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let (rows, cols) = m.shape();
    if cols > rows {
        // m* = QR gives m = R* Q* with orthonormal rows in Q*, so m and the
        // square R* share singular values and left singular vectors.
        let r = m.adjoint().qr().r();
        return left_svd(&r.adjoint());
    }
    let mut a = m.clone();
    // Column-major storage: column j is data[j * rows..(j + 1) * rows].
    let data = a.as_mut_slice();
    let norm2 = |v: &[Complex<f64>]| v.iter().map(|z| z.norm_sqr()).sum::<f64>();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let (head, tail) = data.split_at_mut(q * rows);
                let cp = &mut head[p * rows..(p + 1) * rows];
                let cq = &mut tail[..rows];
                let alpha = norm2(cp);
                let beta = norm2(cq);
                let gamma: Complex<f64> = cp.iter().zip(cq.iter()).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.modulus();
                if g == 0.0 || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let (x0, y0) = (*x, *y * phase.conj());
                    *x = x0 * cs - y0 * sn;
                    *y = (x0 * sn + y0 * cs) * phase;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<(f64, usize)> = (0..cols).map(|j| (a.column(j).norm(), j)).collect();
    order.sort_by(|x, y| y.0.total_cmp(&x.0));
    let k = order.len().min(rows);
    let values: Vec<f64> = order[..k].iter().map(|o| o.0).collect();
    let mut u = CMatrix::zeros(rows, k);
    for (c_out, &(sigma, j)) in order[..k].iter().enumerate() {
        if sigma > 0.0 {
            u.set_column(c_out, &(a.column(j) / c(sigma, 0.0)));
        }
    }
    (values, u)
}

/// Orthonormal basis (as matrix columns) of the column span of `m`, with rank
/// decided by `sigma > eps * scale`. `scale` defaults to the largest singular
/// value of `m` when `None`.
pub fn range_basis(m: &CMatrix, tol: Tolerance, scale: Option<f64>) -> CMatrix {
    let n = m.nrows();
    if m.ncols() == 0 || n == 0 {
        return CMatrix::zeros(n, 0);
    }
    let (values, u) = left_svd(m);
    let top = values.first().copied().unwrap_or(0.0);
    let scale = scale.unwrap_or(top);
    if scale <= 0.0 {
        return CMatrix::zeros(n, 0);
    }
    let cutoff = tol.eps() * scale;
    let rank = values.iter().take_while(|&&s| s > cutoff).count();
    u.columns(0, rank).into_owned()
}

/// Orthonormal basis of `span(vectors) / span(null_relations)`, realized as
/// the orthogonal complement of the relations inside the span of the vectors.
pub fn orthonormal_quotient(
    vectors: &[CVector],
    null_relations: &[CVector],
    tol: Tolerance,
) -> Result<Vec<CVector>> {
    let Some(n) = vectors.first().or(null_relations.first()).map(|v| v.len()) else {
        return Ok(Vec::new());
    };
    if let Some(bad) = vectors.iter().chain(null_relations).find(|v| v.len() != n) {
        return Err(Error::dimension(n, bad.len()));
    }
    let vm = columns_matrix(n, vectors);
    let nm = columns_matrix(n, null_relations);
    let null_svd = left_svd(&nm);
    let top = |values: &[f64]| values.first().copied().unwrap_or(0.0);
    let scale = spectral_norm(&vm).max(top(&null_svd.0));
    if scale == 0.0 {
        return Ok(Vec::new());
    }
    let null_rank = null_svd
        .0
        .iter()
        .take_while(|&&s| s > tol.eps() * scale)
        .count();
    let null_basis = null_svd.1.columns(0, null_rank).into_owned();
    let projected = &vm - &null_basis * (null_basis.adjoint() * &vm);
    let basis = range_basis(&projected, tol, Some(scale));
    Ok(basis.column_iter().map(|c| c.into_owned()).collect())
}

pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.ncols() == 0 || m.nrows() == 0 {
        return 0.0;
    }
    left_svd(m).0.first().copied().unwrap_or(0.0)
}

/// Factors a positive semidefinite Gram matrix `G ≈ Q* Q` with `Q` of full
/// row rank. Returns `(Q, Q⁺)` where `Q⁺ Q` is the orthogonal projector onto
/// the range of `G`.
pub fn psd_factor(gram: &CMatrix, tol: Tolerance) -> (CMatrix, CMatrix) {
    let n = gram.nrows();
    let (values, vectors) = hermitian_eigen(gram);
    let top = values.first().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return (CMatrix::zeros(0, n), CMatrix::zeros(n, 0));
    }
    let rank = values.iter().take_while(|&&l| l > tol.eps() * top).count();
    let mut q = CMatrix::zeros(rank, n);
    let mut lift = CMatrix::zeros(n, rank);
    for k in 0..rank {
        let s = values[k].sqrt();
        for r in 0..n {
            let v = vectors[(r, k)];
            q[(k, r)] = v.conj() * s;
            lift[(r, k)] = v / s;
        }
    }
    (q, lift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn sigma_x() -> CMatrix {
        from_rows(&[&[c(0., 0.), c(1., 0.)], &[c(1., 0.), c(0., 0.)]])
    }

    fn e(n: usize, i: usize) -> CVector {
        let mut v = CVector::zeros(n);
        v[i] = c(1.0, 0.0);
        v
    }

    #[test]
    fn approx_equal_examples() {
        let tol = Tolerance::default();
        let i2 = identity(2);
        assert!(approx_equal(&i2, &i2, tol).unwrap());
        let mut bumped = i2.clone();
        bumped[(0, 0)] += c(1e-6, 0.0);
        assert!(!approx_equal(&i2, &bumped, tol).unwrap());
        assert!(approx_equal(&sigma_x(), &sigma_x().adjoint(), tol).unwrap());
    }

    #[test]
    fn approx_equal_rejects_shape_mismatch() {
        let err = approx_equal(&identity(2), &identity(3), Tolerance::default());
        assert!(matches!(err, Err(Error::Dimension { .. })));
    }

    #[test]
    fn tolerance_must_be_positive() {
        assert!(Tolerance::new(0.0).is_err());
        assert!(Tolerance::new(f64::NAN).is_err());
        assert_eq!(Tolerance::default().eps(), 1e-9);
    }

    #[test]
    fn quotient_by_difference_keeps_sum() {
        let tol = Tolerance::default();
        let basis = orthonormal_quotient(&[e(2, 0), e(2, 1)], &[e(2, 0) - e(2, 1)], tol).unwrap();
        assert_eq!(basis.len(), 1);
        let v = &basis[0];
        // proportional to e1 + e2
        assert!((v[0] - v[1]).modulus() < 1e-12);
        assert!((v.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quotient_edge_cases() {
        let tol = Tolerance::default();
        let kept = orthonormal_quotient(&[e(3, 0)], &[], tol).unwrap();
        assert_eq!(kept.len(), 1);
        assert!((kept[0][0].modulus() - 1.0).abs() < 1e-12);
        let none = orthonormal_quotient(&[e(2, 0), e(2, 1)], &[e(2, 0), e(2, 1)], tol).unwrap();
        assert!(none.is_empty());
        assert!(orthonormal_quotient(&[], &[], tol).unwrap().is_empty());
        assert!(orthonormal_quotient(&[e(2, 0)], &[e(3, 0)], tol).is_err());
    }

    #[test]
    fn psd_factor_reproduces_gram() {
        let a = from_rows(&[
            &[c(1., 0.), c(0., 1.), c(2., 0.)],
            &[c(0., 0.), c(1., 0.), c(1., -1.)],
        ]);
        let gram = a.adjoint() * &a;
        let (q, lift) = psd_factor(&gram, Tolerance::default());
        assert_eq!(q.nrows(), 2);
        assert!(max_abs_diff(&(q.adjoint() * &q), &gram).unwrap() < 1e-10);
        assert!(max_abs_diff(&(&q * &lift), &identity(2)).unwrap() < 1e-10);
    }

    #[test]
    fn kron_matches_definition() {
        let k = kron(&sigma_x(), &identity(2));
        assert_eq!(k.shape(), (4, 4));
        assert_eq!(k[(0, 2)], c(1.0, 0.0));
        assert_eq!(k[(0, 1)], c(0.0, 0.0));
        let _ = vec![0u8];
    }
}
