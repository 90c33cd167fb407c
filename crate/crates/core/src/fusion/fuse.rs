use alloc::format;
use alloc::vec::Vec;

use super::bimodule::{Bimodule, Intertwiner};
use crate::error::{Error, Result};
use crate::numerics::{
    c, kron, max_abs, orthonormal_quotient, psd_factor, CMatrix, CVector, Tolerance,
};
use crate::staralg::StarAlgebra;

/// `H ⊠ K` together with the maps relating it to the algebraic tensor
/// product `H ⊗ K` (index `i * dim K + a`).
///
/// `class` sends a tensor to its class in orthonormal coordinates of the
/// fusion; `lift` is a right inverse of `class`.
#[derive(Debug, Clone, PartialEq)]
pub struct Fused {
    bimodule: Bimodule,
    class: CMatrix,
    lift: CMatrix,
}

impl Fused {
    pub fn bimodule(&self) -> &Bimodule {
        &self.bimodule
    }

    pub fn dim(&self) -> usize {
        self.bimodule.dim()
    }

    pub fn class(&self) -> &CMatrix {
        &self.class
    }

    pub fn lift(&self) -> &CMatrix {
        &self.lift
    }

    /// Class of an elementary tensor `ξ ⊗ η`.
    pub fn tensor(&self, xi: &CVector, eta: &CVector) -> CVector {
        &self.class * xi.kronecker(eta)
    }

    /// Pushes a map defined on `H ⊗ K` down to `H ⊠ K`, failing if it is not
    /// constant on classes.
    pub fn descend(&self, raw: &CMatrix, what: &str, tol: Tolerance) -> Result<CMatrix> {
        if raw.ncols() != self.class.ncols() {
            return Err(Error::dimension(self.class.ncols(), raw.ncols()));
        }
        let down = raw * &self.lift;
        let residual = max_abs(&(raw - &down * &self.class));
        let scale = max_abs(raw).max(1.0);
        if residual > tol.eps() * scale {
            return Err(Error::IllDefined {
                what: what.into(),
                residual,
            });
        }
        Ok(down)
    }
}

/// Generators of `B` as an algebra: `E_0i`, `E_i0` in each block, and the
/// unit of every 1×1 block.
fn algebra_generators(alg: &StarAlgebra) -> Vec<usize> {
    let mut gens = Vec::new();
    for (k, &n) in alg.blocks().iter().enumerate() {
        let o = alg.offset(k);
        if n == 1 {
            gens.push(o);
        }
        for i in 1..n {
            gens.push(o + i);
            gens.push(o + i * n);
        }
    }
    gens
}

/// Index of `E_p*` in flat coordinates.
fn adjoint_unit(alg: &StarAlgebra, p: usize) -> usize {
    let (k, i, j) = alg.locate(p);
    alg.offset(k) + j * alg.blocks()[k] + i
}

/// Gram matrix of `⟨ξ₁⊗η₁, ξ₂⊗η₂⟩ = ⟨η₁, ⟨ξ₁,ξ₂⟩_B ⊲ η₂⟩` on the product basis.
///
/// With `τ(x E_rs) = w x_sr`, the `B`-valued inner product of basis vectors
/// is `Σ_q ⟨e_i, e_j ⊳ E_q⟩ E_q* / w_q`.
pub fn tensor_gram(h: &Bimodule, k: &Bimodule) -> CMatrix {
    let b = h.right_alg();
    let n = h.dim() * k.dim();
    let mut g = CMatrix::zeros(n, n);
    for q in 0..b.dim() {
        let w = b.weight_of(q);
        g += kron(&h.right_ops()[q], &k.left_ops()[adjoint_unit(b, q)]) * c(1.0 / w, 0.0);
    }
    g
}

/// `⟨ξ₁, ξ₂⟩_B` in flat coordinates of `B`.
pub fn b_inner(h: &Bimodule, xi1: &CVector, xi2: &CVector) -> CVector {
    let b = h.right_alg();
    CVector::from_fn(b.dim(), |p, _| {
        let q = adjoint_unit(b, p);
        xi1.dotc(&(&h.right_ops()[q] * xi2)) / c(b.weight_of(q), 0.0)
    })
}

/// The relative tensor product `H ⊗_B K`.
pub fn fuse(h: &Bimodule, k: &Bimodule, tol: Tolerance) -> Result<Fused> {
    let b = h.right_alg();
    if b != k.left_alg() {
        return Err(Error::Fusion(format!(
            "middle algebras differ: blocks {:?} vs {:?}",
            b.blocks(),
            k.left_alg().blocks()
        )));
    }
    let (n, m) = (h.dim(), k.dim());
    let idn = CMatrix::identity(n, n);
    let idm = CMatrix::identity(m, m);
    let mut relations = Vec::new();
    for q in algebra_generators(b) {
        let rel = kron(&h.right_ops()[q], &idm) - kron(&idn, &k.left_ops()[q]);
        relations.extend(rel.column_iter().map(|c| c.into_owned()));
    }
    let vectors: Vec<CVector> = (0..n * m)
        .map(|i| CVector::from_fn(n * m, |r, _| c((r == i) as u8 as f64, 0.0)))
        .collect();
    let quotient = orthonormal_quotient(&vectors, &relations, tol)?;
    let w = CMatrix::from_columns(&quotient);
    let w = if quotient.is_empty() {
        CMatrix::zeros(n * m, 0)
    } else {
        w
    };
    let g = tensor_gram(h, k);
    let (qf, qlift) = psd_factor(&(w.adjoint() * &g * &w), tol);
    let class = qf * w.adjoint();
    let lift = &w * qlift;
    let act = |op: CMatrix| &class * op * &lift;
    let left = h.left_ops().iter().map(|a| act(kron(a, &idm))).collect();
    let right = k.right_ops().iter().map(|b| act(kron(&idn, b))).collect();
    let bimodule =
        Bimodule::from_parts_unchecked(h.left_alg().clone(), k.right_alg().clone(), left, right);
    Ok(Fused {
        bimodule,
        class,
        lift,
    })
}

/// `U ⊠ V`, computing both fusions.
pub fn fuse_intertwiners(u: &Intertwiner, v: &Intertwiner, tol: Tolerance) -> Result<Intertwiner> {
    let src = fuse(u.source(), v.source(), tol)?;
    let dst = fuse(u.target(), v.target(), tol)?;
    fuse_intertwiners_between(&src, &dst, u, v, tol)
}

/// `U ⊠ V` between fusions computed beforehand. `U` must be right
/// intertwining along the same automorphism that `V` is left intertwining
/// along.
pub fn fuse_intertwiners_between(
    src: &Fused,
    dst: &Fused,
    u: &Intertwiner,
    v: &Intertwiner,
    tol: Tolerance,
) -> Result<Intertwiner> {
    if !u.right_twist().approx_eq(v.left_twist(), tol) {
        return Err(Error::Fusion(format!(
            "right twist of U and left twist of V differ by {:.3e}",
            u.right_twist().distance(v.left_twist())
        )));
    }
    let raw = dst.class() * kron(u.map(), v.map());
    let map = src.descend(&raw, "U ⊠ V", tol)?;
    Intertwiner::unchecked(
        src.bimodule().clone(),
        dst.bimodule().clone(),
        map,
        u.left_twist().clone(),
        v.right_twist().clone(),
    )
}

/// `L²(A) ⊠ H → H`, `a ⊗ ξ ↦ a ⊲ ξ`.
pub fn left_unitor(h: &Bimodule, tol: Tolerance) -> Result<Intertwiner> {
    let alg = h.left_alg();
    let std = Bimodule::standard(alg);
    let fused = fuse(&std, h, tol)?;
    let n = h.dim();
    let mut raw = CMatrix::zeros(n, alg.dim() * n);
    for p in 0..alg.dim() {
        let s = c(1.0 / libm::sqrt(alg.weight_of(p)), 0.0);
        raw.columns_mut(p * n, n).copy_from(&(&h.left_ops()[p] * s));
    }
    let map = fused.descend(&raw, "left unitor", tol)?;
    Intertwiner::honest(fused.bimodule, h.clone(), map)
}

/// `H ⊠ L²(B) → H`, `ξ ⊗ b ↦ ξ ⊳ b`.
pub fn right_unitor(h: &Bimodule, tol: Tolerance) -> Result<Intertwiner> {
    let alg = h.right_alg();
    let std = Bimodule::standard(alg);
    let fused = fuse(h, &std, tol)?;
    let (n, d) = (h.dim(), alg.dim());
    let mut raw = CMatrix::zeros(n, n * d);
    for i in 0..n {
        for q in 0..d {
            let s = c(1.0 / libm::sqrt(alg.weight_of(q)), 0.0);
            raw.set_column(i * d + q, &(h.right_ops()[q].column(i) * s));
        }
    }
    let map = fused.descend(&raw, "right unitor", tol)?;
    Intertwiner::honest(fused.bimodule, h.clone(), map)
}

/// The associator `(H ⊠ K) ⊠ L → H ⊠ (K ⊠ L)`, induced by the identity on
/// `H ⊗ K ⊗ L`.
pub fn associator(h: &Bimodule, k: &Bimodule, l: &Bimodule, tol: Tolerance) -> Result<Intertwiner> {
    let hk = fuse(h, k, tol)?;
    let hk_l = fuse(hk.bimodule(), l, tol)?;
    let kl = fuse(k, l, tol)?;
    let h_kl = fuse(h, kl.bimodule(), tol)?;
    associator_between(&hk, &hk_l, &kl, &h_kl, tol)
}

/// The associator from fusions computed beforehand: `hk_l` must fuse
/// `hk` with `L` and `h_kl` must fuse `H` with `kl`.
pub fn associator_between(
    hk: &Fused,
    hk_l: &Fused,
    kl: &Fused,
    h_kl: &Fused,
    tol: Tolerance,
) -> Result<Intertwiner> {
    let dh = h_kl.class().ncols() / kl.bimodule().dim().max(1);
    let dl = hk_l.class().ncols() / hk.bimodule().dim().max(1);
    let src_class = hk_l.class() * kron(hk.class(), &CMatrix::identity(dl, dl));
    let src_lift = kron(hk.lift(), &CMatrix::identity(dl, dl)) * hk_l.lift();
    let dst_class = h_kl.class() * kron(&CMatrix::identity(dh, dh), kl.class());
    if src_class.ncols() != dst_class.ncols() {
        return Err(Error::dimension(src_class.ncols(), dst_class.ncols()));
    }
    let map = &dst_class * &src_lift;
    let residual = max_abs(&(&dst_class - &map * &src_class));
    if residual > tol.eps() * max_abs(&dst_class).max(1.0) {
        return Err(Error::IllDefined {
            what: "associator".into(),
            residual,
        });
    }
    Intertwiner::honest(hk_l.bimodule.clone(), h_kl.bimodule.clone(), map)
}

/// Residual of the triangle identity
/// `(ρ_H ⊠ id_K) = (id_H ⊠ λ_K) ∘ α_{H,L²(B),K}`.
pub fn triangle_residual(h: &Bimodule, k: &Bimodule, tol: Tolerance) -> Result<f64> {
    let std = Bimodule::standard(h.right_alg());
    let rho = right_unitor(h, tol)?;
    let lambda = left_unitor(k, tol)?;
    let lhs = fuse_intertwiners(&rho, &Intertwiner::identity(k), tol)?;
    let rhs = fuse_intertwiners(&Intertwiner::identity(h), &lambda, tol)?
        .after(&associator(h, &std, k, tol)?)?;
    Ok(max_abs(&(lhs.map() - rhs.map())))
}

/// Residual of the pentagon identity for `((H ⊠ K) ⊠ L) ⊠ M`.
pub fn pentagon_residual(
    h: &Bimodule,
    k: &Bimodule,
    l: &Bimodule,
    m: &Bimodule,
    tol: Tolerance,
) -> Result<f64> {
    let hk = fuse(h, k, tol)?.bimodule;
    let kl = fuse(k, l, tol)?.bimodule;
    let lm = fuse(l, m, tol)?.bimodule;
    let top = associator(h, k, &lm, tol)?.after(&associator(&hk, l, m, tol)?)?;
    let a_hkl = fuse_intertwiners(&associator(h, k, l, tol)?, &Intertwiner::identity(m), tol)?;
    let a_klm = fuse_intertwiners(&Intertwiner::identity(h), &associator(k, l, m, tol)?, tol)?;
    let bottom = a_klm.after(&associator(h, &kl, m, tol)?.after(&a_hkl)?)?;
    Ok(max_abs(&(top.map() - bottom.map())))
}
