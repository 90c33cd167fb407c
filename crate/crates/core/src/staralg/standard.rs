use alloc::format;
use alloc::vec::Vec;

use super::algebra::{AlgebraElement, Automorphism, StarAlgebra};
use crate::numerics::{
    c, conj, hermitian_eigen, max_abs, range_basis, vec_max_abs, CMatrix, CVector, Tolerance,
};
use crate::report::Report;

/// `L²(A)`: the algebra with inner product `⟨a, b⟩ = τ(a* b)`, in orthonormal
/// coordinates `sqrt(w_k) · a_ij`.
///
/// Left and right multiplications are block diagonal, so their matrices are
/// the same in flat and in orthonormal coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardBimodule {
    alg: StarAlgebra,
    sqrt_w: Vec<f64>,
    j_perm: CMatrix,
}

impl StandardBimodule {
    pub fn new(alg: &StarAlgebra) -> Self {
        let d = alg.dim();
        let sqrt_w = (0..d).map(|p| libm::sqrt(alg.weight_of(p))).collect();
        let mut j_perm = CMatrix::zeros(d, d);
        for p in 0..d {
            let (k, i, j) = alg.locate(p);
            let n = alg.blocks()[k];
            j_perm[(alg.offset(k) + j * n + i, p)] = c(1.0, 0.0);
        }
        Self {
            alg: alg.clone(),
            sqrt_w,
            j_perm,
        }
    }

    pub fn algebra(&self) -> &StarAlgebra {
        &self.alg
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn vector(&self, a: &AlgebraElement) -> CVector {
        let mut v = self.alg.to_flat(a);
        for (z, &s) in v.iter_mut().zip(&self.sqrt_w) {
            *z *= s;
        }
        v
    }

    pub fn element(&self, xi: &CVector) -> AlgebraElement {
        let v = CVector::from_fn(xi.len(), |p, _| xi[p] / self.sqrt_w[p]);
        self.alg.from_flat(&v)
    }

    /// The cyclic vector `1̂`.
    pub fn unit_vector(&self) -> CVector {
        self.vector(&self.alg.unit())
    }

    /// `L_a ξ = a ξ`.
    pub fn left(&self, a: &AlgebraElement) -> CMatrix {
        self.block_diag(|k, n| a.blocks[k].kronecker(&CMatrix::identity(n, n)))
    }

    /// `R_b ξ = ξ b`.
    pub fn right(&self, b: &AlgebraElement) -> CMatrix {
        self.block_diag(|k, n| CMatrix::identity(n, n).kronecker(&b.blocks[k].transpose()))
    }

    fn block_diag(&self, f: impl Fn(usize, usize) -> CMatrix) -> CMatrix {
        let d = self.dim();
        let mut m = CMatrix::zeros(d, d);
        for (k, &n) in self.alg.blocks().iter().enumerate() {
            let o = self.alg.offset(k);
            m.view_mut((o, o), (n * n, n * n)).copy_from(&f(k, n));
        }
        m
    }

    /// The permutation `K` with `J = K ∘ conj`.
    pub fn j_permutation(&self) -> &CMatrix {
        &self.j_perm
    }

    /// `Jξ = ξ*`.
    pub fn apply_j(&self, xi: &CVector) -> CVector {
        &self.j_perm * xi.map(|z| z.conj())
    }

    /// `J U J` as a linear operator.
    pub fn conjugate_by_j(&self, u: &CMatrix) -> CMatrix {
        &self.j_perm * conj(u) * &self.j_perm
    }

    /// `L²(θ) = D Θ D⁻¹`; unitary exactly when `θ` preserves the trace.
    pub fn implement(&self, theta: &Automorphism) -> CMatrix {
        let m = theta.matrix();
        CMatrix::from_fn(m.nrows(), m.ncols(), |p, q| {
            m[(p, q)] * (self.sqrt_w[p] / self.sqrt_w[q])
        })
    }

    pub fn left_basis(&self) -> Vec<CMatrix> {
        (0..self.dim())
            .map(|p| self.left(&self.alg.basis(p)))
            .collect()
    }

    pub fn right_basis(&self) -> Vec<CMatrix> {
        (0..self.dim())
            .map(|p| self.right(&self.alg.basis(p)))
            .collect()
    }
}

/// Every failure of the standard-form identities on bases: `J² = 1`,
/// antiunitarity of `J`, `ξ ⊳ a = J(a* ⊲ Jξ)`, commuting actions, and the
/// commutant property in both directions.
pub fn check_standard_identities(l2: &StandardBimodule, tol: Tolerance) -> Report {
    let mut report = Report::new();
    let alg = l2.algebra();
    let d = l2.dim();
    let basis: Vec<CVector> = (0..d)
        .map(|p| CVector::from_fn(d, |q, _| c((p == q) as u8 as f64, 0.0)))
        .collect();
    // A non-real test vector exercises the antilinearity.
    let probe = CVector::from_fn(d, |q, _| c(1.0 + q as f64, 0.5 - q as f64));
    let mut vectors = basis.clone();
    vectors.push(probe);
    for (x, xi) in vectors.iter().enumerate() {
        let r = vec_max_abs(&(l2.apply_j(&l2.apply_j(xi)) - xi));
        if r > tol.eps() {
            report.push(format!("xi={x}"), "J^2 = 1", r);
        }
        for (y, eta) in vectors.iter().enumerate() {
            let lhs = l2.apply_j(xi).dotc(&l2.apply_j(eta));
            let r = libm::sqrt((lhs - xi.dotc(eta).conj()).norm_sqr());
            if r > tol.eps() {
                report.push(
                    format!("xi={x}, eta={y}"),
                    "<J xi, J eta> = conj <xi, eta>",
                    r,
                );
            }
        }
        for p in 0..d {
            let a = alg.basis(p);
            let lhs = l2.right(&a) * xi;
            let rhs = l2.apply_j(&(l2.left(&a.adjoint()) * l2.apply_j(xi)));
            let r = vec_max_abs(&(lhs - rhs));
            if r > tol.eps() {
                report.push(format!("xi={x}, a=E{p}"), "xi |> a = J(a* <| J xi)", r);
            }
        }
    }
    let lefts = l2.left_basis();
    let rights = l2.right_basis();
    for (p, l) in lefts.iter().enumerate() {
        for (q, r) in rights.iter().enumerate() {
            let res = max_abs(&(l * r - r * l));
            if res > tol.eps() {
                report.push(format!("E{p}, E{q}"), "L_a R_b = R_b L_a", res);
            }
        }
    }
    for (side, ops, others) in [("left", &lefts, &rights), ("right", &rights, &lefts)] {
        let comm = commutant(ops, d, tol);
        let span = span_of(others, tol);
        // the commutant must be exactly the span of the other side's operators
        let joint = range_basis(&hstack(&comm, &span), tol, None);
        if comm.ncols() != span.ncols() || joint.ncols() != span.ncols() {
            report.push(
                side,
                format!("commutant of {side} action = opposite action"),
                (comm.ncols() as f64 - span.ncols() as f64).abs().max(1.0),
            );
        }
    }
    report
}

fn vec_op(m: &CMatrix) -> CVector {
    CVector::from_iterator(m.len(), m.iter().copied())
}

fn span_of(ops: &[CMatrix], tol: Tolerance) -> CMatrix {
    let n = ops.first().map_or(0, |m| m.len());
    let mut stacked = CMatrix::zeros(n, ops.len());
    for (j, m) in ops.iter().enumerate() {
        stacked.set_column(j, &vec_op(m));
    }
    range_basis(&stacked, tol, None)
}

fn hstack(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut m = CMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    m.view_mut((0, 0), a.shape()).copy_from(a);
    m.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    m
}

/// Basis (vectorized, as columns) of `{X : X M = M X for all M in ops}`.
fn commutant(ops: &[CMatrix], d: usize, tol: Tolerance) -> CMatrix {
    // vec(XM − MX) = (Mᵀ ⊗ I − I ⊗ M) vec(X) in column-major vec; the
    // commutant is the kernel of the summed normal equations. The spectrum
    // of that sum has a wide gap above zero, so an eigenvalue cutoff is safe.
    let id = CMatrix::identity(d, d);
    let mut normal = CMatrix::zeros(d * d, d * d);
    for m in ops {
        let block = m.transpose().kronecker(&id) - id.kronecker(m);
        normal += block.adjoint() * block;
    }
    let (values, vectors) = hermitian_eigen(&normal);
    let top = values.first().copied().unwrap_or(0.0).max(1.0);
    let keep: Vec<usize> = (0..values.len())
        .filter(|&k| values[k] <= tol.eps() * top)
        .collect();
    CMatrix::from_fn(d * d, keep.len(), |r, k| vectors[(r, keep[k])])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_hold_on_shipped_algebras() {
        for alg in [
            StarAlgebra::matrix(2),
            StarAlgebra::matrix(3),
            StarAlgebra::new(alloc::vec![2, 1], None).unwrap(),
            StarAlgebra::new(alloc::vec![2, 1], Some(alloc::vec![0.5, 3.0])).unwrap(),
        ] {
            let l2 = StandardBimodule::new(&alg);
            let report = check_standard_identities(&l2, Tolerance::default());
            assert!(report.is_ok(), "{report:?}");
        }
    }

    #[test]
    fn inner_product_is_the_trace_form() {
        let alg = StarAlgebra::new(alloc::vec![1, 1], Some(alloc::vec![2.0, 5.0])).unwrap();
        let l2 = StandardBimodule::new(&alg);
        let a = alg.from_flat(&CVector::from_vec(alloc::vec![c(1.0, 1.0), c(2.0, 0.0)]));
        let b = alg.from_flat(&CVector::from_vec(alloc::vec![c(0.0, 1.0), c(-1.0, 0.0)]));
        let tau = alg.trace(&a.adjoint().mul(&b));
        let ip = l2.vector(&a).dotc(&l2.vector(&b));
        assert!((tau - ip).norm_sqr() < 1e-24);
        // hand value: 2·(1−i)(i) + 5·2·(−1) = 2(i + 1) − 10
        assert!((tau - c(-8.0, 2.0)).norm_sqr() < 1e-24);
    }

    #[test]
    fn weights_enter_the_unit_vector() {
        let alg = StarAlgebra::new(alloc::vec![1, 1], Some(alloc::vec![4.0, 9.0])).unwrap();
        let l2 = StandardBimodule::new(&alg);
        let one = l2.unit_vector();
        assert!((one[0] - c(2.0, 0.0)).norm_sqr() < 1e-24);
        assert!((one[1] - c(3.0, 0.0)).norm_sqr() < 1e-24);
    }
}
