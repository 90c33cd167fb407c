use alloc::format;
use alloc::vec::Vec;

use super::modfunctor::mod_of_bundle;
use super::two_vector::TwoVectorBundle;
use crate::error::{Error, Result};
use crate::fusion::Intertwiner;
use crate::gerbe::{fmt_point, BundleGerbe, PulledBackGerbe};
use crate::numerics::{kron, max_abs, CMatrix, Tolerance};
use crate::report::Report;
use crate::staralg::{Automorphism, Representation};

/// A refinement `𝒱 → 𝒱'`: `ρ: Y → Y'` over `X`, `φ_y: 𝒜_y → 𝒜'_{ρ(y)}`,
/// and `u_w: ℳ_w → ℳ'_{ρ(w)}` for each `w ∈ Y^[2]`, intertwining along
/// `(φ_{y₂}, φ_{y₁})`.
#[derive(Debug, Clone, PartialEq)]
pub struct Refinement {
    pub rho: Vec<usize>,
    pub phi: Vec<Automorphism>,
    pub u: Vec<CMatrix>,
}

impl Refinement {
    pub fn identity(v: &TwoVectorBundle) -> Self {
        let n = v.cover().total().len;
        Self {
            rho: (0..n).collect(),
            phi: (0..n)
                .map(|y| Automorphism::identity(v.algebra(y)))
                .collect(),
            u: v.bimodules()
                .fibres()
                .iter()
                .map(|h| CMatrix::identity(h.dim(), h.dim()))
                .collect(),
        }
    }
}

/// Every failure of `π' ∘ ρ = π`, of `φ` being fibrewise
/// *-isomorphisms, of `u` being fibrewise unitary twisted intertwiners, and
/// of `μ' ∘ (u₂₃ ⊠ u₁₂) = u₁₃ ∘ μ` over each point of `Y^[3]`.
pub fn check_refinement(
    r: &Refinement,
    v: &TwoVectorBundle,
    v2: &TwoVectorBundle,
    tol: Tolerance,
) -> Report {
    let mut report = Report::new();
    let (cover, cover2) = (v.cover(), v2.cover());
    let n = cover.total().len;
    if r.rho.len() != n || r.phi.len() != n || r.u.len() != v.y2().len() {
        report.push("refinement", "rho, phi on Y and u on Y^[2]", 1.0);
        return report;
    }
    if cover.base() != cover2.base() {
        report.push("refinement", "V and V' live over the same base", 1.0);
        return report;
    }
    for (y, &ry) in r.rho.iter().enumerate() {
        if ry >= cover2.total().len || cover2.proj(ry) != cover.proj(y) {
            report.push(format!("y={y}"), "pi'(rho(y)) = pi(y)", 1.0);
        }
    }
    if !report.is_ok() {
        return report;
    }
    for (y, phi) in r.phi.iter().enumerate() {
        let (a, a2) = (v.algebra(y), v2.algebra(r.rho[y]));
        if a != a2 {
            report.push(format!("y={y}"), "phi_y maps A_y onto A'_rho(y)", 1.0);
            continue;
        }
        if phi.matrix().shape() != (a.dim(), a.dim()) {
            report.push(format!("y={y}"), "phi_y maps A_y onto A'_rho(y)", 1.0);
            continue;
        }
        report.extend_prefixed(&format!("phi at y={y}"), phi.check(a, tol));
    }
    if !report.is_ok() {
        return report;
    }
    let (y2, y3) = (v.y2(), v.y3());
    let rho_of = |pt: &[usize]| -> Vec<usize> { pt.iter().map(|&y| r.rho[y]).collect() };
    let rho2: Vec<usize> = (0..y2.len())
        .map(|w| {
            v2.y2()
                .index(&rho_of(y2.point(w)))
                .expect("rho preserves fibres")
        })
        .collect();
    for w in 0..y2.len() {
        let pt = y2.point(w);
        let loc = format!("Y^[2] point {}", fmt_point(pt));
        let u = Intertwiner::unchecked(
            v.bimodules().fibre(w).clone(),
            v2.bimodules().fibre(rho2[w]).clone(),
            r.u[w].clone(),
            r.phi[pt[1]].clone(),
            r.phi[pt[0]].clone(),
        );
        match u {
            Ok(u) => {
                report.extend_prefixed(&loc, u.check(tol));
                let res = u.unitarity_residual();
                if res > tol.eps() {
                    report.push(loc, "u is unitary", res);
                }
            }
            Err(e) => report.push(loc, format!("u has the right shape ({e})"), f64::INFINITY),
        }
    }
    if !report.is_ok() {
        return report;
    }
    for z in 0..y3.len() {
        let z2 = v2
            .y3()
            .index(&rho_of(y3.point(z)))
            .expect("rho preserves fibres");
        let (w23, w12, w13) = (
            y3.pr(z, &[2, 3], y2),
            y3.pr(z, &[1, 2], y2),
            y3.pr(z, &[1, 3], y2),
        );
        let lhs = v2.mu(z2) * kron(&r.u[w23], &r.u[w12]);
        let rhs = &r.u[w13] * v.mu(z);
        let res = max_abs(&(lhs - rhs));
        if res > tol.eps() {
            report.push(
                format!("Y^[3] point {}", fmt_point(y3.point(z))),
                "mu' (u23 ⊠ u12) = u13 mu",
                res,
            );
        }
    }
    report
}

/// The refinement `associate(ρ*𝒬) → associate(𝒬)` induced by a map of
/// covers: `φ = id` and `u = Mod` of the canonical map `ρ*P → P`.
pub fn pullback_refinement(
    q: &BundleGerbe,
    pulled: &PulledBackGerbe,
    rho: &[usize],
    rep: &Representation,
    tol: Tolerance,
) -> Result<Refinement> {
    if pulled.rho2.len() != pulled.gerbe.space().y2.len() {
        return Err(Error::InvalidInput(
            "pulled-back gerbe does not match its cover".into(),
        ));
    }
    let modp = mod_of_bundle(q.bundle(), rep, tol)?;
    let modp2 = mod_of_bundle(&pulled.pullback.bundle, rep, tol)?;
    let u = (0..pulled.rho2.len())
        .map(|w| modp.coordinates(pulled.pullback.points.original(modp2.base_point(w))))
        .collect();
    let alg = rep.l2().algebra();
    Ok(Refinement {
        rho: rho.to_vec(),
        phi: alloc::vec![Automorphism::identity(alg); rho.len()],
        u,
    })
}
