use alloc::format;

use super::algebra::{AlgebraElement, Automorphism};
use super::standard::StandardBimodule;
use crate::error::{Error, Result};
use crate::numerics::{max_abs, max_abs_diff, unitarity_residual, CMatrix, Tolerance};
use crate::report::Report;

/// `(θ₁, U, θ₂)` with `U(a ⊲ ξ ⊳ b) = θ₁(a) ⊲ Uξ ⊳ θ₂(b)`. In the 2-group
/// `𝒰(A)`, `t(U) = θ₁` and `s(U) = θ₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct NElement {
    theta1: Automorphism,
    u: CMatrix,
    theta2: Automorphism,
}

impl NElement {
    pub fn new(
        l2: &StandardBimodule,
        theta1: Automorphism,
        u: CMatrix,
        theta2: Automorphism,
        tol: Tolerance,
    ) -> Result<Self> {
        let d = l2.dim();
        if u.shape() != (d, d) {
            return Err(Error::dimension(
                format!("{d}x{d} unitary"),
                format!("{}x{}", u.nrows(), u.ncols()),
            ));
        }
        let n = Self { theta1, u, theta2 };
        let report = n.check(l2, tol);
        if report.is_ok() {
            Ok(n)
        } else {
            Err(Error::invalid("N(A) element", report))
        }
    }

    /// Recovers both automorphisms from `U` alone.
    pub fn from_unitary(l2: &StandardBimodule, u: CMatrix, tol: Tolerance) -> Result<Self> {
        let (theta1, theta2) = source_target(l2, &u, tol)?;
        Ok(Self { theta1, u, theta2 })
    }

    pub fn identity(l2: &StandardBimodule) -> Self {
        let id = Automorphism::identity(l2.algebra());
        Self {
            theta1: id.clone(),
            u: CMatrix::identity(l2.dim(), l2.dim()),
            theta2: id,
        }
    }

    /// `ξ ↦ u ξ` for a unitary `u`: intertwines along `(Ad_u, id)`.
    pub fn left_unitary(l2: &StandardBimodule, u: &AlgebraElement, tol: Tolerance) -> Result<Self> {
        let alg = l2.algebra();
        Ok(Self {
            theta1: Automorphism::inner(alg, u, tol)?,
            u: l2.left(u),
            theta2: Automorphism::identity(alg),
        })
    }

    /// `ξ ↦ ξ v*` for a unitary `v`: intertwines along `(id, Ad_v)`.
    pub fn right_unitary(
        l2: &StandardBimodule,
        v: &AlgebraElement,
        tol: Tolerance,
    ) -> Result<Self> {
        let alg = l2.algebra();
        Ok(Self {
            theta1: Automorphism::identity(alg),
            u: l2.right(&v.adjoint()),
            theta2: Automorphism::inner(alg, v, tol)?,
        })
    }

    /// A scalar phase `z·1`, `|z| = 1`.
    pub fn phase(l2: &StandardBimodule, z: crate::numerics::C64) -> Self {
        let mut n = Self::identity(l2);
        n.u *= z;
        n
    }

    pub fn theta1(&self) -> &Automorphism {
        &self.theta1
    }

    pub fn theta2(&self) -> &Automorphism {
        &self.theta2
    }

    /// `t(U) = θ₁`.
    pub fn target(&self) -> &Automorphism {
        &self.theta1
    }

    /// `s(U) = θ₂`.
    pub fn source(&self) -> &Automorphism {
        &self.theta2
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.u
    }

    /// The group product in `N(A)`.
    pub fn product(&self, other: &NElement) -> NElement {
        NElement {
            theta1: self.theta1.compose(&other.theta1),
            u: &self.u * &other.u,
            theta2: self.theta2.compose(&other.theta2),
        }
    }

    pub fn inverse(&self) -> NElement {
        NElement {
            theta1: self.theta1.inverse(),
            u: self.u.adjoint(),
            theta2: self.theta2.inverse(),
        }
    }

    /// `J U J`, which intertwines along `(θ₂, θ₁)`.
    pub fn conjugate_by_j(&self, l2: &StandardBimodule) -> NElement {
        NElement {
            theta1: self.theta2.clone(),
            u: l2.conjugate_by_j(&self.u),
            theta2: self.theta1.clone(),
        }
    }

    /// Largest entrywise deviation over `θ₁`, `U` and `θ₂`.
    pub fn distance(&self, other: &NElement) -> f64 {
        let du = max_abs_diff(&self.u, &other.u).unwrap_or(f64::INFINITY);
        du.max(self.theta1.distance(&other.theta1))
            .max(self.theta2.distance(&other.theta2))
    }

    pub fn approx_eq(&self, other: &NElement, tol: Tolerance) -> bool {
        self.distance(other) <= tol.eps()
    }

    /// Unitarity of `U` and both intertwining relations on matrix units.
    pub fn check(&self, l2: &StandardBimodule, tol: Tolerance) -> Report {
        let mut report = Report::new();
        let alg = l2.algebra();
        let r = unitarity_residual(&self.u);
        if r > tol.eps() {
            report.push("U", "U* U = 1", r);
        }
        for p in 0..alg.dim() {
            let e = alg.basis(p);
            let lhs = &self.u * l2.left(&e);
            let rhs = l2.left(&self.theta1.apply(alg, &e)) * &self.u;
            let r = max_abs(&(lhs - rhs));
            if r > tol.eps() {
                report.push(format!("a=E{p}"), "U(a <| xi) = theta1(a) <| U xi", r);
            }
            let lhs = &self.u * l2.right(&e);
            let rhs = l2.right(&self.theta2.apply(alg, &e)) * &self.u;
            let r = max_abs(&(lhs - rhs));
            if r > tol.eps() {
                report.push(format!("b=E{p}"), "U(xi |> b) = U xi |> theta2(b)", r);
            }
        }
        report
    }
}

/// `(θ, L²(θ), θ)`; only defined for trace-preserving `θ`.
pub fn canonical_implementation(
    l2: &StandardBimodule,
    theta: &Automorphism,
    tol: Tolerance,
) -> Result<NElement> {
    let alg = l2.algebra();
    let defect = theta.trace_defect(alg);
    if defect > tol.eps() {
        return Err(Error::UnsupportedAutomorphism(format!(
            "theta changes the trace by up to {defect:.3e}"
        )));
    }
    Ok(NElement {
        theta1: theta.clone(),
        u: l2.implement(theta),
        theta2: theta.clone(),
    })
}

/// Solves for `(t(U), s(U)) = (θ₁, θ₂)` from `U` alone, using
/// `U L_a U* = L_{θ₁(a)}` and `U R_b U* = R_{θ₂(b)}` applied to `1̂`.
pub fn source_target(
    l2: &StandardBimodule,
    u: &CMatrix,
    tol: Tolerance,
) -> Result<(Automorphism, Automorphism)> {
    let alg = l2.algebra();
    let d = alg.dim();
    if u.shape() != (d, d) {
        return Err(Error::dimension(
            format!("{d}x{d} unitary"),
            format!("{}x{}", u.nrows(), u.ncols()),
        ));
    }
    let mut residual = unitarity_residual(u);
    let one = l2.unit_vector();
    let ustar = u.adjoint();
    let mut m1 = CMatrix::zeros(d, d);
    let mut m2 = CMatrix::zeros(d, d);
    for p in 0..d {
        let e = alg.basis(p);
        let cl = u * l2.left(&e) * &ustar;
        let a = l2.element(&(&cl * &one));
        residual = residual.max(max_abs(&(&cl - l2.left(&a))));
        m1.set_column(p, &alg.to_flat(&a));
        let cr = u * l2.right(&e) * &ustar;
        let b = l2.element(&(&cr * &one));
        residual = residual.max(max_abs(&(&cr - l2.right(&b))));
        m2.set_column(p, &alg.to_flat(&b));
    }
    if residual > tol.eps() {
        return Err(Error::NotImplementing { residual });
    }
    let recover = |m: CMatrix| {
        Automorphism::new(alg, m, tol).map_err(|e| match e {
            Error::Invalid { report, .. } => Error::NotImplementing {
                residual: report.max_residual(),
            },
            other => other,
        })
    };
    Ok((recover(m1)?, recover(m2)?))
}

/// `U ∘ V = U L²(θ)* V` with `θ = s(U) = t(V)`.
pub fn compose_in_ua(
    l2: &StandardBimodule,
    u: &NElement,
    v: &NElement,
    tol: Tolerance,
) -> Result<NElement> {
    let gap = u.theta2.distance(&v.theta1);
    if gap > tol.eps() {
        return Err(Error::Composition(format!(
            "s(U) and t(V) differ by {gap:.3e}"
        )));
    }
    let middle = canonical_implementation(l2, &u.theta2, tol)?;
    Ok(NElement {
        theta1: u.theta1.clone(),
        u: &u.u * middle.u.adjoint() * &v.u,
        theta2: v.theta2.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{c, from_rows};
    use crate::staralg::StarAlgebra;

    fn sx() -> CMatrix {
        from_rows(&[&[c(0., 0.), c(1., 0.)], &[c(1., 0.), c(0., 0.)]])
    }

    fn sz() -> CMatrix {
        from_rows(&[&[c(1., 0.), c(0., 0.)], &[c(0., 0.), c(-1., 0.)]])
    }

    fn m2() -> (StarAlgebra, StandardBimodule) {
        let a = StarAlgebra::matrix(2);
        let l2 = StandardBimodule::new(&a);
        (a, l2)
    }

    #[test]
    fn canonical_implementation_of_ad_sigma_x() {
        let (a, l2) = m2();
        let tol = Tolerance::default();
        let u = a.element(alloc::vec![sx()]).unwrap();
        let theta = Automorphism::inner(&a, &u, tol).unwrap();
        let n = canonical_implementation(&l2, &theta, tol).unwrap();
        assert!(n.check(&l2, tol).is_ok());
        // L²(θ)ξ = σx ξ σx, computed directly on every basis vector
        for p in 0..4 {
            let xi = a.basis(p);
            let expected = l2.vector(&u.mul(&xi).mul(&u));
            let got = n.unitary() * l2.vector(&xi);
            assert!(crate::numerics::vec_max_abs(&(got - expected)) < 1e-12);
        }
        // commutes with J
        assert!(max_abs(&(l2.conjugate_by_j(n.unitary()) - n.unitary())) < 1e-12);
    }

    #[test]
    fn canonical_implementation_is_functorial() {
        let (a, l2) = m2();
        let tol = Tolerance::default();
        let tx = Automorphism::inner(&a, &a.element(alloc::vec![sx()]).unwrap(), tol).unwrap();
        let tz = Automorphism::inner(&a, &a.element(alloc::vec![sz()]).unwrap(), tol).unwrap();
        let lhs = canonical_implementation(&l2, &tx.compose(&tz), tol).unwrap();
        let rhs = canonical_implementation(&l2, &tx, tol)
            .unwrap()
            .product(&canonical_implementation(&l2, &tz, tol).unwrap());
        assert!(lhs.approx_eq(&rhs, tol));
    }

    #[test]
    fn identity_is_implemented_by_identity() {
        let (a, l2) = m2();
        let n = canonical_implementation(&l2, &Automorphism::identity(&a), Tolerance::default())
            .unwrap();
        assert!(n.approx_eq(&NElement::identity(&l2), Tolerance::default()));
    }

    #[test]
    fn non_trace_preserving_is_unsupported() {
        let a = StarAlgebra::new(alloc::vec![1, 1], Some(alloc::vec![1.0, 2.0])).unwrap();
        let l2 = StandardBimodule::new(&a);
        let swap = Automorphism::block_permutation(&a, &[1, 0]).unwrap();
        assert!(matches!(
            canonical_implementation(&l2, &swap, Tolerance::default()),
            Err(Error::UnsupportedAutomorphism(_))
        ));
    }

    #[test]
    fn source_target_of_left_multiplication() {
        let (a, l2) = m2();
        let tol = Tolerance::default();
        let u = a.element(alloc::vec![sx()]).unwrap();
        let (t, s) = source_target(&l2, &l2.left(&u), tol).unwrap();
        assert!(t.approx_eq(&Automorphism::inner(&a, &u, tol).unwrap(), tol));
        assert!(s.is_identity(tol));
        // J L J = right multiplication by σx, with the automorphisms swapped
        let (t2, s2) = source_target(&l2, &l2.conjugate_by_j(&l2.left(&u)), tol).unwrap();
        assert!(t2.is_identity(tol));
        assert!(s2.approx_eq(&t, tol));
    }

    #[test]
    fn source_target_rejects_non_implementing_unitaries() {
        let (_, l2) = m2();
        // swapping two basis vectors of L²(M₂) is unitary but not in N(A)
        let mut p = CMatrix::identity(4, 4);
        p.swap_columns(0, 1);
        assert!(matches!(
            source_target(&l2, &p, Tolerance::default()),
            Err(Error::NotImplementing { .. })
        ));
    }

    #[test]
    fn composition_of_two_sided_unitaries() {
        // U: ξ ↦ u ξ v*, V: ξ ↦ v ξ w*; U ∘ V = ξ ↦ u ξ w*
        let (a, l2) = m2();
        let tol = Tolerance::default();
        let s = 0.5f64.sqrt();
        let u = a.element(alloc::vec![sx()]).unwrap();
        let v = a
            .element(alloc::vec![from_rows(&[
                &[c(s, 0.), c(s, 0.)],
                &[c(-s, 0.), c(s, 0.)]
            ])])
            .unwrap();
        let w = a
            .element(alloc::vec![from_rows(&[
                &[c(0., 1.), c(0., 0.)],
                &[c(0., 0.), c(1., 0.)]
            ])])
            .unwrap();
        let two_sided = |x: &AlgebraElement, y: &AlgebraElement| {
            NElement::left_unitary(&l2, x, tol)
                .unwrap()
                .product(&NElement::right_unitary(&l2, y, tol).unwrap())
        };
        let big_u = two_sided(&u, &v);
        let big_v = two_sided(&v, &w);
        let composite = compose_in_ua(&l2, &big_u, &big_v, tol).unwrap();
        assert!(composite.approx_eq(&two_sided(&u, &w), tol));
        let unit = canonical_implementation(&l2, big_u.source(), tol).unwrap();
        assert!(compose_in_ua(&l2, &big_u, &unit, tol)
            .unwrap()
            .approx_eq(&big_u, tol));
        assert!(matches!(
            compose_in_ua(&l2, &big_v, &big_v, tol),
            Err(Error::Composition(_))
        ));
    }
}
