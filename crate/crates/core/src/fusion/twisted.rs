use alloc::format;

use super::bimodule::{conjugate, Bimodule, Intertwiner};
use super::fuse::{associator_between, fuse, fuse_intertwiners_between, Fused};
use crate::error::{Error, Result};
use crate::numerics::{c, max_abs, CMatrix, Tolerance};
use crate::staralg::{Automorphism, NElement, StandardBimodule, StarAlgebra};

fn require_trace_preserving(alg: &StarAlgebra, theta: &Automorphism, tol: Tolerance) -> Result<()> {
    if theta.is_trace_preserving(alg, tol) {
        Ok(())
    } else {
        Err(Error::UnsupportedAutomorphism(format!(
            "trace defect {:.3e}",
            theta.trace_defect(alg)
        )))
    }
}

/// `L²(A)_θ₁ ⊠ L²(A)_θ₂` together with `χ` out of it.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedFusion {
    pub theta1: Automorphism,
    pub theta2: Automorphism,
    pub fused: Fused,
    pub chi: Intertwiner,
}

/// Fuses two twisted standard bimodules and builds
/// `χ: L²(A)_θ₁ ⊠ L²(A)_θ₂ → L²(A)_{θ₁θ₂}`, `a ⊗ b ↦ a θ₁(b)`.
///
/// The result is checked: `χ` must be a unitary, untwisted intertwiner.
pub fn twisted_fusion(
    alg: &StarAlgebra,
    theta1: &Automorphism,
    theta2: &Automorphism,
    tol: Tolerance,
) -> Result<TwistedFusion> {
    require_trace_preserving(alg, theta1, tol)?;
    require_trace_preserving(alg, theta2, tol)?;
    let fused = fuse(
        &Bimodule::twisted(alg, theta1),
        &Bimodule::twisted(alg, theta2),
        tol,
    )?;
    let map = fused.descend(&chi_raw(alg, theta1), "chi", tol)?;
    let target = Bimodule::twisted(alg, &theta1.compose(theta2));
    let chi = Intertwiner::honest(fused.bimodule().clone(), target, map)?;
    let report = chi.check(tol);
    if !report.is_ok() {
        return Err(Error::invalid("chi", report));
    }
    if !chi.is_unitary(tol) {
        return Err(Error::NotImplementing {
            residual: chi.unitarity_residual(),
        });
    }
    Ok(TwistedFusion {
        theta1: theta1.clone(),
        theta2: theta2.clone(),
        fused,
        chi,
    })
}

/// `a ⊗ b ↦ a θ(b)` on elementary tensors of orthonormal basis vectors
/// (index `p * dim A + q`). For `θ = id` this is the raw multiplication map.
pub fn chi_raw(alg: &StarAlgebra, theta: &Automorphism) -> CMatrix {
    let l2 = StandardBimodule::new(alg);
    let d = alg.dim();
    let elems: alloc::vec::Vec<_> = (0..d)
        .map(|p| {
            alg.basis(p)
                .scale(c(1.0 / libm::sqrt(alg.weight_of(p)), 0.0))
        })
        .collect();
    let twisted: alloc::vec::Vec<_> = elems.iter().map(|b| theta.apply(alg, b)).collect();
    let mut raw = CMatrix::zeros(d, d * d);
    for p in 0..d {
        for q in 0..d {
            raw.set_column(p * d + q, &l2.vector(&elems[p].mul(&twisted[q])));
        }
    }
    raw
}

pub fn chi(
    alg: &StarAlgebra,
    theta1: &Automorphism,
    theta2: &Automorphism,
    tol: Tolerance,
) -> Result<Intertwiner> {
    Ok(twisted_fusion(alg, theta1, theta2, tol)?.chi)
}

/// `𝒯(U) = L²(θ₁) U*`, an honest unitary intertwiner
/// `L²(A)_θ₂ → L²(A)_θ₁` for `U` implementing `(θ₁, θ₂)`.
pub fn functor_t(l2: &StandardBimodule, n: &NElement, tol: Tolerance) -> Result<Intertwiner> {
    let alg = l2.algebra();
    require_trace_preserving(alg, n.theta1(), tol)?;
    let map = l2.implement(n.theta1()) * n.unitary().adjoint();
    Intertwiner::honest(
        Bimodule::twisted(alg, n.theta2()),
        Bimodule::twisted(alg, n.theta1()),
        map,
    )
}

/// The vertical map `U₁ L²(θ₁) L²(φ)* U₂ L²(θ₁)*` of the naturality square.
pub fn naturality_vertical(
    l2: &StandardBimodule,
    theta1: &Automorphism,
    phi: &Automorphism,
    u1: &CMatrix,
    u2: &CMatrix,
) -> CMatrix {
    let l2t = l2.implement(theta1);
    u1 * &l2t * l2.implement(phi).adjoint() * u2 * l2t.adjoint()
}

/// Residual of `χ' ∘ (U₁ ⊠ U₂) = V ∘ χ` where `U₁: L²(A)_θ₁ → L²(A)_θ₁'` is
/// right intertwining along `φ` and `U₂: L²(A)_θ₂ → L²(A)_θ₂'` is left
/// intertwining along `φ`.
pub fn naturality_residual(
    src: &TwistedFusion,
    dst: &TwistedFusion,
    phi: &Automorphism,
    u1: &CMatrix,
    u2: &CMatrix,
    tol: Tolerance,
) -> Result<f64> {
    let alg = src.chi.target().left_alg().clone();
    let l2 = StandardBimodule::new(&alg);
    let id = Automorphism::identity(&alg);
    let i1 = Intertwiner::new(
        Bimodule::twisted(&alg, &src.theta1),
        Bimodule::twisted(&alg, &dst.theta1),
        u1.clone(),
        id.clone(),
        phi.clone(),
        tol,
    )?;
    let i2 = Intertwiner::new(
        Bimodule::twisted(&alg, &src.theta2),
        Bimodule::twisted(&alg, &dst.theta2),
        u2.clone(),
        phi.clone(),
        id,
        tol,
    )?;
    let top = fuse_intertwiners_between(&src.fused, &dst.fused, &i1, &i2, tol)?;
    let lhs = dst.chi.map() * top.map();
    let rhs = naturality_vertical(&l2, &src.theta1, phi, u1, u2) * src.chi.map();
    Ok(max_abs(&(lhs - rhs)))
}

/// Residual of `χ_{θ₁θ₂,θ₃} ∘ (χ_{θ₁,θ₂} ⊠ id) = χ_{θ₁,θ₂θ₃} ∘ (id ⊠ χ_{θ₂,θ₃}) ∘ α`.
pub fn chi_associativity_residual(
    alg: &StarAlgebra,
    theta1: &Automorphism,
    theta2: &Automorphism,
    theta3: &Automorphism,
    tol: Tolerance,
) -> Result<f64> {
    let t12 = theta1.compose(theta2);
    let t23 = theta2.compose(theta3);
    let l = |t: &Automorphism| Bimodule::twisted(alg, t);
    let f12 = twisted_fusion(alg, theta1, theta2, tol)?;
    let f23 = twisted_fusion(alg, theta2, theta3, tol)?;
    let f12_3 = twisted_fusion(alg, &t12, theta3, tol)?;
    let f1_23 = twisted_fusion(alg, theta1, &t23, tol)?;
    let f12x3 = fuse(f12.fused.bimodule(), &l(theta3), tol)?;
    let f1x23 = fuse(&l(theta1), f23.fused.bimodule(), tol)?;
    let id1 = Intertwiner::identity(&l(theta1));
    let id3 = Intertwiner::identity(&l(theta3));
    let lhs = f12_3.chi.after(&fuse_intertwiners_between(
        &f12x3,
        &f12_3.fused,
        &f12.chi,
        &id3,
        tol,
    )?)?;
    let alpha = associator_between(&f12.fused, &f12x3, &f23.fused, &f1x23, tol)?;
    let rhs = f1_23.chi.after(
        &fuse_intertwiners_between(&f1x23, &f1_23.fused, &id1, &f23.chi, tol)?.after(&alpha)?,
    )?;
    Ok(max_abs(&(lhs.map() - rhs.map())))
}

/// Checks a proposed unitary `H ⊠ H̄ → L²(A)`, given on elementary tensors
/// `e_i ⊗ ē_j` (index `i * dim H + j`). Returns the largest of the
/// intertwining and unitarity residuals.
pub fn invertibility_residual(h: &Bimodule, raw_witness: &CMatrix, tol: Tolerance) -> Result<f64> {
    let fused = fuse(h, &conjugate(h), tol)?;
    let map = fused.descend(raw_witness, "invertibility witness", tol)?;
    let w = Intertwiner::honest(
        fused.bimodule().clone(),
        Bimodule::standard(h.left_alg()),
        map,
    )?;
    Ok(w.check(tol).max_residual().max(w.unitarity_residual()))
}

/// `ξ ⊗ η̄ ↦ ξ η*` for `H = L²(A)_θ`.
pub fn standard_invertibility_witness(alg: &StarAlgebra) -> CMatrix {
    let l2 = StandardBimodule::new(alg);
    let d = alg.dim();
    let elems: alloc::vec::Vec<_> = (0..d)
        .map(|p| {
            alg.basis(p)
                .scale(c(1.0 / libm::sqrt(alg.weight_of(p)), 0.0))
        })
        .collect();
    let mut raw = CMatrix::zeros(d, d * d);
    for p in 0..d {
        for q in 0..d {
            raw.set_column(p * d + q, &l2.vector(&elems[p].mul(&elems[q].adjoint())));
        }
    }
    raw
}
