use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numerics::{
    c, check_finite, conj, max_abs, psd_factor, unitarity_residual, CMatrix, CVector, Tolerance,
};
use crate::report::Report;
use crate::staralg::{Automorphism, StandardBimodule, StarAlgebra};

/// A finite-dimensional `A`-`B`-bimodule in orthonormal coordinates.
///
/// Actions are stored on matrix units: `left_ops[p]` is `E_p ⊲ −` for the
/// `p`-th matrix unit of `A`, and `right_ops[q]` is `− ⊳ E_q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bimodule {
    left_alg: StarAlgebra,
    right_alg: StarAlgebra,
    dim: usize,
    left_ops: Vec<CMatrix>,
    right_ops: Vec<CMatrix>,
}

impl Bimodule {
    /// Operators in orthonormal coordinates; validated.
    pub fn new(
        left_alg: StarAlgebra,
        right_alg: StarAlgebra,
        left_ops: Vec<CMatrix>,
        right_ops: Vec<CMatrix>,
        tol: Tolerance,
    ) -> Result<Self> {
        let h = Self::from_parts(left_alg, right_alg, left_ops, right_ops)?;
        let report = check_bimodule(&h, tol);
        if report.is_ok() {
            Ok(h)
        } else {
            Err(Error::invalid("bimodule", report))
        }
    }

    /// Shape and finiteness checks only; see [`check_bimodule`].
    pub fn from_parts(
        left_alg: StarAlgebra,
        right_alg: StarAlgebra,
        left_ops: Vec<CMatrix>,
        right_ops: Vec<CMatrix>,
    ) -> Result<Self> {
        let dim = left_ops
            .first()
            .or(right_ops.first())
            .map_or(0, |m| m.nrows());
        if left_ops.len() != left_alg.dim() {
            return Err(Error::dimension(
                format!("{} left generators", left_alg.dim()),
                left_ops.len(),
            ));
        }
        if right_ops.len() != right_alg.dim() {
            return Err(Error::dimension(
                format!("{} right generators", right_alg.dim()),
                right_ops.len(),
            ));
        }
        for m in left_ops.iter().chain(&right_ops) {
            if m.shape() != (dim, dim) {
                return Err(Error::dimension(
                    format!("{dim}x{dim} action"),
                    format!("{}x{}", m.nrows(), m.ncols()),
                ));
            }
            check_finite(m)?;
        }
        Ok(Self {
            left_alg,
            right_alg,
            dim,
            left_ops,
            right_ops,
        })
    }

    /// Operators given with respect to a basis whose inner products are
    /// `gram` (positive definite); they are transported to an orthonormal
    /// basis first.
    pub fn from_gram(
        left_alg: StarAlgebra,
        right_alg: StarAlgebra,
        gram: &CMatrix,
        left_ops: Vec<CMatrix>,
        right_ops: Vec<CMatrix>,
        tol: Tolerance,
    ) -> Result<Self> {
        let n = gram.nrows();
        check_finite(gram)?;
        if gram.shape() != (n, n) || max_abs(&(gram - gram.adjoint())) > tol.eps() {
            return Err(Error::InvalidInput(
                "gram matrix must be square and Hermitian".into(),
            ));
        }
        let (q, lift) = psd_factor(gram, tol);
        if q.nrows() != n {
            return Err(Error::InvalidInput(
                "gram matrix is not positive definite".into(),
            ));
        }
        let whiten = |m: &CMatrix| {
            if m.shape() == (n, n) {
                Ok(&q * m * &lift)
            } else {
                Err(Error::dimension(
                    format!("{n}x{n} action"),
                    format!("{}x{}", m.nrows(), m.ncols()),
                ))
            }
        };
        let left_ops = left_ops.iter().map(whiten).collect::<Result<_>>()?;
        let right_ops = right_ops.iter().map(whiten).collect::<Result<_>>()?;
        Self::new(left_alg, right_alg, left_ops, right_ops, tol)
    }

    pub(crate) fn from_parts_unchecked(
        left_alg: StarAlgebra,
        right_alg: StarAlgebra,
        left_ops: Vec<CMatrix>,
        right_ops: Vec<CMatrix>,
    ) -> Self {
        let dim = left_ops
            .first()
            .or(right_ops.first())
            .map_or(0, |m| m.nrows());
        Self {
            left_alg,
            right_alg,
            dim,
            left_ops,
            right_ops,
        }
    }

    /// `L²(A)` as an `A`-`A`-bimodule.
    pub fn standard(alg: &StarAlgebra) -> Self {
        let l2 = StandardBimodule::new(alg);
        Self::from_parts_unchecked(alg.clone(), alg.clone(), l2.left_basis(), l2.right_basis())
    }

    /// `L²(A)_θ`: right action `ξ ⊳_θ b = ξ θ(b)`.
    pub fn twisted(alg: &StarAlgebra, theta: &Automorphism) -> Self {
        let l2 = StandardBimodule::new(alg);
        let right = (0..alg.dim())
            .map(|q| l2.right(&theta.apply(alg, &alg.basis(q))))
            .collect();
        Self::from_parts_unchecked(alg.clone(), alg.clone(), l2.left_basis(), right)
    }

    /// `L²(A)` with the left action precomposed with `θ`.
    pub fn left_twisted(alg: &StarAlgebra, theta: &Automorphism) -> Self {
        let l2 = StandardBimodule::new(alg);
        let left = (0..alg.dim())
            .map(|p| l2.left(&theta.apply(alg, &alg.basis(p))))
            .collect();
        Self::from_parts_unchecked(alg.clone(), alg.clone(), left, l2.right_basis())
    }

    /// A plain Hilbert space `ℂⁿ` as a `ℂ`-`ℂ`-bimodule.
    pub fn scalar(n: usize) -> Self {
        let one = StarAlgebra::matrix(1);
        let id = CMatrix::identity(n, n);
        Self::from_parts_unchecked(one.clone(), one, alloc::vec![id.clone()], alloc::vec![id])
    }

    pub fn left_alg(&self) -> &StarAlgebra {
        &self.left_alg
    }

    pub fn right_alg(&self) -> &StarAlgebra {
        &self.right_alg
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left_ops(&self) -> &[CMatrix] {
        &self.left_ops
    }

    pub fn right_ops(&self) -> &[CMatrix] {
        &self.right_ops
    }

    /// `a ⊲ −` for `a` in flat matrix-unit coordinates.
    pub fn left(&self, a: &CVector) -> CMatrix {
        combine(&self.left_ops, a, self.dim)
    }

    /// `− ⊳ b` for `b` in flat matrix-unit coordinates.
    pub fn right(&self, b: &CVector) -> CMatrix {
        combine(&self.right_ops, b, self.dim)
    }
}

fn combine(ops: &[CMatrix], coeffs: &CVector, dim: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    for (op, &z) in ops.iter().zip(coeffs.iter()) {
        if z != c(0.0, 0.0) {
            m += op * z;
        }
    }
    m
}

/// Index of the matrix unit `E_p*`.
fn adjoint_index(alg: &StarAlgebra, p: usize) -> usize {
    let (k, i, j) = alg.locate(p);
    alg.offset(k) + j * alg.blocks()[k] + i
}

/// Products of matrix units: `E_p E_q` is either zero or another unit.
fn unit_product(alg: &StarAlgebra, p: usize, q: usize) -> Option<usize> {
    let (k1, i, j) = alg.locate(p);
    let (k2, j2, l) = alg.locate(q);
    (k1 == k2 && j == j2).then(|| alg.offset(k1) + i * alg.blocks()[k1] + l)
}

/// Every failure of: left action a unital *-representation, right action a
/// unital *-anti-representation, and the two actions commuting.
pub fn check_bimodule(h: &Bimodule, tol: Tolerance) -> Report {
    let mut report = Report::new();
    let n = h.dim;
    let zero = CMatrix::zeros(n, n);
    for (side, alg, ops) in [
        ("left", &h.left_alg, &h.left_ops),
        ("right", &h.right_alg, &h.right_ops),
    ] {
        let d = alg.dim();
        let unit: CMatrix = combine(ops, &alg.to_flat(&alg.unit()), n);
        let r = max_abs(&(unit - CMatrix::identity(n, n)));
        if r > tol.eps() {
            report.push(side, format!("{side} action is unital"), r);
        }
        for p in 0..d {
            let r = max_abs(&(&ops[adjoint_index(alg, p)] - ops[p].adjoint()));
            if r > tol.eps() {
                report.push(
                    format!("{side} E{p}"),
                    format!("{side} action preserves *"),
                    r,
                );
            }
            for q in 0..d {
                let expected = unit_product(alg, p, q).map_or(&zero, |pq| &ops[pq]);
                let prod = if side == "left" {
                    &ops[p] * &ops[q]
                } else {
                    &ops[q] * &ops[p]
                };
                let r = max_abs(&(prod - expected));
                if r > tol.eps() {
                    let eq = if side == "left" {
                        "(ab) <| xi = a <| (b <| xi)"
                    } else {
                        "xi |> (ab) = (xi |> a) |> b"
                    };
                    report.push(format!("E{p}, E{q}"), eq, r);
                }
            }
        }
    }
    for (p, l) in h.left_ops.iter().enumerate() {
        for (q, r) in h.right_ops.iter().enumerate() {
            let res = max_abs(&(l * r - r * l));
            if res > tol.eps() {
                report.push(
                    format!("a=E{p}, b=E{q}"),
                    "(a <| xi) |> b = a <| (xi |> b)",
                    res,
                );
            }
        }
    }
    report
}

/// The conjugate `B`-`A`-bimodule `H̄`: `b ⊲ ξ̄ ⊳ a = conj(a* ⊲ ξ ⊳ b*)`, in
/// the coordinates `conj(ξ)`.
pub fn conjugate(h: &Bimodule) -> Bimodule {
    let left = (0..h.right_alg.dim())
        .map(|q| conj(&h.right_ops[adjoint_index(&h.right_alg, q)]))
        .collect();
    let right = (0..h.left_alg.dim())
        .map(|p| conj(&h.left_ops[adjoint_index(&h.left_alg, p)]))
        .collect();
    Bimodule::from_parts_unchecked(h.right_alg.clone(), h.left_alg.clone(), left, right)
}

/// A linear map `H → H'` of `A`-`B`-bimodules intertwining along
/// `(left_twist, right_twist)`: `U(a ⊲ ξ ⊳ b) = θ_L(a) ⊲ Uξ ⊳ θ_R(b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Intertwiner {
    source: Bimodule,
    target: Bimodule,
    map: CMatrix,
    left_twist: Automorphism,
    right_twist: Automorphism,
}

impl Intertwiner {
    pub fn new(
        source: Bimodule,
        target: Bimodule,
        map: CMatrix,
        left_twist: Automorphism,
        right_twist: Automorphism,
        tol: Tolerance,
    ) -> Result<Self> {
        let u = Self::unchecked(source, target, map, left_twist, right_twist)?;
        let report = u.check(tol);
        if report.is_ok() {
            Ok(u)
        } else {
            Err(Error::invalid("intertwiner", report))
        }
    }

    /// Shape checks only.
    pub fn unchecked(
        source: Bimodule,
        target: Bimodule,
        map: CMatrix,
        left_twist: Automorphism,
        right_twist: Automorphism,
    ) -> Result<Self> {
        if map.shape() != (target.dim(), source.dim()) {
            return Err(Error::dimension(
                format!("{}x{} map", target.dim(), source.dim()),
                format!("{}x{}", map.nrows(), map.ncols()),
            ));
        }
        if source.left_alg != target.left_alg || source.right_alg != target.right_alg {
            return Err(Error::InvalidInput(
                "intertwiner between bimodules over different algebras".into(),
            ));
        }
        Ok(Self {
            source,
            target,
            map,
            left_twist,
            right_twist,
        })
    }

    /// Untwisted.
    pub fn honest(source: Bimodule, target: Bimodule, map: CMatrix) -> Result<Self> {
        let l = Automorphism::identity(&source.left_alg);
        let r = Automorphism::identity(&source.right_alg);
        Self::unchecked(source, target, map, l, r)
    }

    pub fn identity(h: &Bimodule) -> Self {
        Self::honest(h.clone(), h.clone(), CMatrix::identity(h.dim, h.dim)).expect("square")
    }

    pub fn source(&self) -> &Bimodule {
        &self.source
    }

    pub fn target(&self) -> &Bimodule {
        &self.target
    }

    pub fn map(&self) -> &CMatrix {
        &self.map
    }

    pub fn left_twist(&self) -> &Automorphism {
        &self.left_twist
    }

    pub fn right_twist(&self) -> &Automorphism {
        &self.right_twist
    }

    pub fn unitarity_residual(&self) -> f64 {
        if self.map.nrows() != self.map.ncols() {
            return f64::INFINITY;
        }
        unitarity_residual(&self.map)
    }

    pub fn is_unitary(&self, tol: Tolerance) -> bool {
        self.unitarity_residual() <= tol.eps()
    }

    /// `self ∘ other`; twists compose.
    pub fn after(&self, other: &Intertwiner) -> Result<Intertwiner> {
        if self.source.dim != other.target.dim {
            return Err(Error::dimension(self.source.dim, other.target.dim));
        }
        Ok(Intertwiner {
            source: other.source.clone(),
            target: self.target.clone(),
            map: &self.map * &other.map,
            left_twist: self.left_twist.compose(&other.left_twist),
            right_twist: self.right_twist.compose(&other.right_twist),
        })
    }

    pub fn adjoint(&self) -> Intertwiner {
        Intertwiner {
            source: self.target.clone(),
            target: self.source.clone(),
            map: self.map.adjoint(),
            left_twist: self.left_twist.inverse(),
            right_twist: self.right_twist.inverse(),
        }
    }

    /// Both twisted intertwining relations on matrix units.
    pub fn check(&self, tol: Tolerance) -> Report {
        let mut report = Report::new();
        let la = &self.source.left_alg;
        for p in 0..la.dim() {
            let img = self.left_twist.matrix().column(p).into_owned();
            let r = max_abs(
                &(&self.map * &self.source.left_ops[p] - self.target.left(&img) * &self.map),
            );
            if r > tol.eps() {
                report.push(format!("a=E{p}"), "U(a <| xi) = theta_L(a) <| U xi", r);
            }
        }
        let rb = &self.source.right_alg;
        for q in 0..rb.dim() {
            let img = self.right_twist.matrix().column(q).into_owned();
            let r = max_abs(
                &(&self.map * &self.source.right_ops[q] - self.target.right(&img) * &self.map),
            );
            if r > tol.eps() {
                report.push(format!("b=E{q}"), "U(xi |> b) = U xi |> theta_R(b)", r);
            }
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::staralg::carriers::sigma_x;

    #[test]
    fn standard_and_twisted_are_bimodules() {
        let tol = Tolerance::default();
        let alg = StarAlgebra::new(alloc::vec![2, 1], Some(alloc::vec![1.0, 2.0])).unwrap();
        assert!(check_bimodule(&Bimodule::standard(&alg), tol).is_ok());
        let m2 = StarAlgebra::matrix(2);
        let theta =
            Automorphism::inner(&m2, &m2.element(alloc::vec![sigma_x()]).unwrap(), tol).unwrap();
        assert!(check_bimodule(&Bimodule::twisted(&m2, &theta), tol).is_ok());
        assert!(check_bimodule(&Bimodule::left_twisted(&m2, &theta), tol).is_ok());
    }

    #[test]
    fn broken_actions_are_reported() {
        let tol = Tolerance::default();
        let alg = StarAlgebra::matrix(2);
        let std = Bimodule::standard(&alg);
        let mut left = std.left_ops().to_vec();
        left[1] = left[1].transpose();
        let err = Bimodule::new(alg.clone(), alg, left, std.right_ops().to_vec(), tol).unwrap_err();
        assert!(matches!(err, Error::Invalid { .. }));
    }

    #[test]
    fn gram_whitening_matches_orthonormal_model() {
        // ℂ² with inner product diag(1, 4) and the trivial actions of ℂ.
        let tol = Tolerance::default();
        let one = StarAlgebra::matrix(1);
        let gram =
            CMatrix::from_diagonal(&CVector::from_vec(alloc::vec![c(1.0, 0.0), c(4.0, 0.0)]));
        let id = CMatrix::identity(2, 2);
        let h = Bimodule::from_gram(
            one.clone(),
            one,
            &gram,
            alloc::vec![id.clone()],
            alloc::vec![id],
            tol,
        )
        .unwrap();
        assert_eq!(h.dim(), 2);
        assert!(Bimodule::from_gram(
            StarAlgebra::matrix(1),
            StarAlgebra::matrix(1),
            &CMatrix::zeros(2, 2),
            alloc::vec![CMatrix::identity(2, 2)],
            alloc::vec![CMatrix::identity(2, 2)],
            tol
        )
        .is_err());
    }

    #[test]
    fn conjugate_of_standard_is_standard_via_j() {
        let tol = Tolerance::default();
        for alg in [
            StarAlgebra::matrix(2),
            StarAlgebra::new(alloc::vec![2, 1], Some(alloc::vec![3.0, 1.0])).unwrap(),
        ] {
            let std = Bimodule::standard(&alg);
            let bar = conjugate(&std);
            assert!(check_bimodule(&bar, tol).is_ok());
            // ξ̄ ↦ Jξ = K conj(ξ) is the linear map K in conjugate coordinates.
            let k = StandardBimodule::new(&alg).j_permutation().clone();
            let j = Intertwiner::honest(bar.clone(), std.clone(), k).unwrap();
            assert!(j.check(tol).is_ok() && j.is_unitary(tol));
            // double conjugate is the original, with the identity witness
            assert_eq!(conjugate(&bar), std);
        }
    }

    #[test]
    fn conjugate_of_twisted_is_left_twisted() {
        // conj(L²(A)_θ) ≅ L²(A) with left action twisted by θ, again via J.
        let tol = Tolerance::default();
        let alg = StarAlgebra::matrix(2);
        let theta =
            Automorphism::inner(&alg, &alg.element(alloc::vec![sigma_x()]).unwrap(), tol).unwrap();
        let bar = conjugate(&Bimodule::twisted(&alg, &theta));
        let k = StandardBimodule::new(&alg).j_permutation().clone();
        let j = Intertwiner::honest(bar, Bimodule::left_twisted(&alg, &theta), k).unwrap();
        assert!(j.check(tol).is_ok());
    }
}
