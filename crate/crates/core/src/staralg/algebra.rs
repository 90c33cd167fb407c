use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numerics::{
    c, check_finite, is_unitary, left_svd, max_abs_diff, CMatrix, CVector, Tolerance, C64,
};
use crate::report::Report;

/// `A = ⊕_k M_{n_k}` with trace `τ(a) = Σ_k w_k tr(a_k)`.
///
/// Elements are also handled as flat coordinate vectors in the matrix-unit
/// basis: block `k` first, then entries `(i, j)` row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct StarAlgebra {
    blocks: Vec<usize>,
    weights: Vec<f64>,
    offsets: Vec<usize>,
    dim: usize,
}

impl StarAlgebra {
    pub fn new(blocks: Vec<usize>, weights: Option<Vec<f64>>) -> Result<Self> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(Error::InvalidInput(
                "block sizes must be positive and non-empty".into(),
            ));
        }
        let weights = weights.unwrap_or_else(|| alloc::vec![1.0; blocks.len()]);
        if weights.len() != blocks.len() {
            return Err(Error::dimension(
                format!("{} trace weights", blocks.len()),
                weights.len(),
            ));
        }
        if weights.iter().any(|&w| !(w.is_finite() && w > 0.0)) {
            return Err(Error::InvalidInput("trace weights must be positive".into()));
        }
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut dim = 0;
        for &n in &blocks {
            offsets.push(dim);
            dim += n * n;
        }
        Ok(Self {
            blocks,
            weights,
            offsets,
            dim,
        })
    }

    /// A single full matrix block `M_n` with the standard trace.
    pub fn matrix(n: usize) -> Self {
        Self::new(alloc::vec![n], None).expect("n > 0")
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `dim A = Σ n_k²`, also the dimension of `L²(A)`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn offset(&self, k: usize) -> usize {
        self.offsets[k]
    }

    /// Block, row and column of a flat coordinate.
    pub fn locate(&self, p: usize) -> (usize, usize, usize) {
        let k = self.offsets.iter().rposition(|&o| o <= p).expect("p < dim");
        let n = self.blocks[k];
        let r = p - self.offsets[k];
        (k, r / n, r % n)
    }

    /// Weight `w_k` of the block containing coordinate `p`.
    pub fn weight_of(&self, p: usize) -> f64 {
        self.weights[self.locate(p).0]
    }

    pub fn unit(&self) -> AlgebraElement {
        AlgebraElement {
            blocks: self
                .blocks
                .iter()
                .map(|&n| CMatrix::identity(n, n))
                .collect(),
        }
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement {
            blocks: self.blocks.iter().map(|&n| CMatrix::zeros(n, n)).collect(),
        }
    }

    /// The matrix unit with flat index `p`.
    pub fn basis(&self, p: usize) -> AlgebraElement {
        let mut v = CVector::zeros(self.dim);
        v[p] = c(1.0, 0.0);
        self.from_flat(&v)
    }

    pub fn element(&self, blocks: Vec<CMatrix>) -> Result<AlgebraElement> {
        if blocks.len() != self.blocks.len() {
            return Err(Error::dimension(
                format!("{} blocks", self.blocks.len()),
                blocks.len(),
            ));
        }
        for (b, &n) in blocks.iter().zip(&self.blocks) {
            if b.shape() != (n, n) {
                return Err(Error::dimension(
                    format!("{n}x{n} block"),
                    format!("{}x{}", b.nrows(), b.ncols()),
                ));
            }
            check_finite(b)?;
        }
        Ok(AlgebraElement { blocks })
    }

    pub fn from_flat(&self, v: &CVector) -> AlgebraElement {
        assert_eq!(v.len(), self.dim, "flat vector length");
        let blocks = self
            .blocks
            .iter()
            .zip(&self.offsets)
            .map(|(&n, &o)| CMatrix::from_fn(n, n, |i, j| v[o + i * n + j]))
            .collect();
        AlgebraElement { blocks }
    }

    pub fn to_flat(&self, a: &AlgebraElement) -> CVector {
        let mut v = CVector::zeros(self.dim);
        for ((b, &n), &o) in a.blocks.iter().zip(&self.blocks).zip(&self.offsets) {
            for i in 0..n {
                for j in 0..n {
                    v[o + i * n + j] = b[(i, j)];
                }
            }
        }
        v
    }

    pub fn trace(&self, a: &AlgebraElement) -> C64 {
        a.blocks
            .iter()
            .zip(&self.weights)
            .map(|(b, &w)| b.trace() * w)
            .sum()
    }

    /// Every unitary with all blocks unitary.
    pub fn is_unitary(&self, u: &AlgebraElement, tol: Tolerance) -> bool {
        u.blocks.iter().all(|b| is_unitary(b, tol))
    }
}

/// An element of `⊕_k M_{n_k}`, stored block by block.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    pub blocks: Vec<CMatrix>,
}

impl AlgebraElement {
    pub fn mul(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }

    pub fn adjoint(&self) -> AlgebraElement {
        AlgebraElement {
            blocks: self.blocks.iter().map(|a| a.adjoint()).collect(),
        }
    }

    pub fn scale(&self, z: C64) -> AlgebraElement {
        AlgebraElement {
            blocks: self.blocks.iter().map(|a| a * z).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &AlgebraElement) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| max_abs_diff(a, b).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }
}

/// A *-automorphism, stored as its matrix on flat matrix-unit coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Automorphism {
    matrix: CMatrix,
}

impl Automorphism {
    /// Validates multiplicativity, *-preservation and bijectivity on matrix
    /// units.
    pub fn new(alg: &StarAlgebra, matrix: CMatrix, tol: Tolerance) -> Result<Self> {
        if matrix.shape() != (alg.dim(), alg.dim()) {
            return Err(Error::dimension(
                format!("{0}x{0} automorphism matrix", alg.dim()),
                format!("{}x{}", matrix.nrows(), matrix.ncols()),
            ));
        }
        check_finite(&matrix)?;
        let theta = Self { matrix };
        let report = theta.check(alg, tol);
        if report.is_ok() {
            Ok(theta)
        } else {
            Err(Error::invalid("automorphism", report))
        }
    }

    /// No validation; [`Automorphism::check`] reports on it.
    pub fn unchecked(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    pub fn identity(alg: &StarAlgebra) -> Self {
        Self {
            matrix: CMatrix::identity(alg.dim(), alg.dim()),
        }
    }

    /// `Ad_u(a) = u a u*` for a unitary `u`.
    pub fn inner(alg: &StarAlgebra, u: &AlgebraElement, tol: Tolerance) -> Result<Self> {
        if u.blocks.len() != alg.blocks().len() {
            return Err(Error::dimension(alg.blocks().len(), u.blocks.len()));
        }
        if !alg.is_unitary(u, tol) {
            return Err(Error::InvalidInput("Ad_u needs a unitary u".into()));
        }
        let d = alg.dim();
        let mut matrix = CMatrix::zeros(d, d);
        for p in 0..d {
            let img = u.mul(&alg.basis(p)).mul(&u.adjoint());
            matrix.set_column(p, &alg.to_flat(&img));
        }
        Ok(Self { matrix })
    }

    /// Sends block `k` identically onto block `perm[k]`; blocks must have
    /// matching sizes.
    pub fn block_permutation(alg: &StarAlgebra, perm: &[usize]) -> Result<Self> {
        let m = alg.blocks().len();
        let mut seen = alloc::vec![false; m];
        if perm.len() != m {
            return Err(Error::dimension(m, perm.len()));
        }
        for (k, &j) in perm.iter().enumerate() {
            if j >= m || seen[j] || alg.blocks()[j] != alg.blocks()[k] {
                return Err(Error::InvalidInput(format!(
                    "block permutation invalid at {k} -> {j}"
                )));
            }
            seen[j] = true;
        }
        let d = alg.dim();
        let mut matrix = CMatrix::zeros(d, d);
        for (k, &j) in perm.iter().enumerate() {
            let n = alg.blocks()[k];
            for r in 0..n * n {
                matrix[(alg.offset(j) + r, alg.offset(k) + r)] = c(1.0, 0.0);
            }
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn apply(&self, alg: &StarAlgebra, a: &AlgebraElement) -> AlgebraElement {
        alg.from_flat(&(&self.matrix * alg.to_flat(a)))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            matrix: &self.matrix * &other.matrix,
        }
    }

    pub fn inverse(&self) -> Automorphism {
        Automorphism {
            matrix: self
                .matrix
                .clone()
                .try_inverse()
                .expect("validated automorphisms are invertible"),
        }
    }

    pub fn distance(&self, other: &Automorphism) -> f64 {
        max_abs_diff(&self.matrix, &other.matrix).unwrap_or(f64::INFINITY)
    }

    pub fn approx_eq(&self, other: &Automorphism, tol: Tolerance) -> bool {
        self.distance(other) <= tol.eps()
    }

    pub fn is_identity(&self, tol: Tolerance) -> bool {
        let n = self.matrix.nrows();
        max_abs_diff(&self.matrix, &CMatrix::identity(n, n)).unwrap_or(f64::INFINITY) <= tol.eps()
    }

    /// Lists failures of `θ(E_p E_q) = θ(E_p) θ(E_q)`, `θ(E_p*) = θ(E_p)*`,
    /// and invertibility.
    pub fn check(&self, alg: &StarAlgebra, tol: Tolerance) -> Report {
        let mut report = Report::new();
        let d = alg.dim();
        let images: Vec<AlgebraElement> = (0..d).map(|p| self.apply(alg, &alg.basis(p))).collect();
        for p in 0..d {
            let ep = alg.basis(p);
            for q in 0..d {
                let lhs = self.apply(alg, &ep.mul(&alg.basis(q)));
                let r = lhs.max_abs_diff(&images[p].mul(&images[q]));
                if r > tol.eps() {
                    report.push(format!("E{p}, E{q}"), "theta(ab) = theta(a) theta(b)", r);
                }
            }
            let r = self
                .apply(alg, &ep.adjoint())
                .max_abs_diff(&images[p].adjoint());
            if r > tol.eps() {
                report.push(format!("E{p}"), "theta(a*) = theta(a)*", r);
            }
        }
        let smallest = left_svd(&self.matrix)
            .0
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if smallest <= tol.eps() {
            report.push("matrix", "theta is bijective", smallest);
        }
        report
    }

    /// Largest `|τ(θ(E_p)) − τ(E_p)|` over matrix units.
    pub fn trace_defect(&self, alg: &StarAlgebra) -> f64 {
        (0..alg.dim())
            .map(|p| {
                let e = alg.basis(p);
                libm::sqrt((alg.trace(&self.apply(alg, &e)) - alg.trace(&e)).norm_sqr())
            })
            .fold(0.0, f64::max)
    }

    pub fn is_trace_preserving(&self, alg: &StarAlgebra, tol: Tolerance) -> bool {
        self.trace_defect(alg) <= tol.eps()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::from_rows;

    pub(crate) fn sx() -> CMatrix {
        from_rows(&[&[c(0., 0.), c(1., 0.)], &[c(1., 0.), c(0., 0.)]])
    }

    #[test]
    fn flat_round_trip_and_trace() {
        let a = StarAlgebra::new(alloc::vec![2, 1], Some(alloc::vec![1.0, 3.0])).unwrap();
        assert_eq!(a.dim(), 5);
        assert_eq!(a.locate(4), (1, 0, 0));
        assert_eq!(a.locate(2), (0, 1, 0));
        let x = a.from_flat(&CVector::from_fn(5, |i, _| c(i as f64, 1.0)));
        assert_eq!(a.from_flat(&a.to_flat(&x)), x);
        // τ(1) = 2·1 + 1·3
        assert_eq!(a.trace(&a.unit()), c(5.0, 0.0));
    }

    #[test]
    fn inner_automorphism_is_valid() {
        let a = StarAlgebra::matrix(2);
        let u = a.element(alloc::vec![sx()]).unwrap();
        let theta = Automorphism::inner(&a, &u, Tolerance::default()).unwrap();
        assert!(theta.check(&a, Tolerance::default()).is_ok());
        assert!(theta.is_trace_preserving(&a, Tolerance::default()));
        // Ad_σx swaps the diagonal matrix units
        assert_eq!(theta.apply(&a, &a.basis(0)), a.basis(3));
        assert!(theta.compose(&theta).is_identity(Tolerance::default()));
    }

    #[test]
    fn non_multiplicative_map_is_rejected() {
        let a = StarAlgebra::matrix(2);
        let mut m = CMatrix::identity(4, 4);
        m[(0, 0)] = c(2.0, 0.0);
        assert!(Automorphism::new(&a, m, Tolerance::default()).is_err());
        // transpose is an anti-automorphism
        let mut t = CMatrix::zeros(4, 4);
        for (p, q) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
            t[(p, q)] = c(1.0, 0.0);
        }
        assert!(Automorphism::new(&a, t, Tolerance::default()).is_err());
    }

    #[test]
    fn block_swap_respects_weights_only_when_equal() {
        let equal = StarAlgebra::new(alloc::vec![1, 1], None).unwrap();
        let swap = Automorphism::block_permutation(&equal, &[1, 0]).unwrap();
        assert!(swap.check(&equal, Tolerance::default()).is_ok());
        assert!(swap.is_trace_preserving(&equal, Tolerance::default()));
        let skewed = StarAlgebra::new(alloc::vec![1, 1], Some(alloc::vec![1.0, 2.0])).unwrap();
        let swap = Automorphism::block_permutation(&skewed, &[1, 0]).unwrap();
        assert!(!swap.is_trace_preserving(&skewed, Tolerance::default()));
        let mixed = StarAlgebra::new(alloc::vec![2, 1], None).unwrap();
        assert!(Automorphism::block_permutation(&mixed, &[1, 0]).is_err());
    }
}
