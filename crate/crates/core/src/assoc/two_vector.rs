use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::modfunctor::{
    mod_of_bundle, mod_of_morphism, monoidality_map, BimoduleBundle, ChiCache,
};
use crate::bundle::{Cover, FibreProduct};
use crate::error::{Error, Result};
use crate::fusion::{
    check_bimodule, chi_raw, fuse, fuse_intertwiners_between, Bimodule, Fused, Intertwiner,
};
use crate::gerbe::{fmt_point, BundleGerbe};
use crate::numerics::{kron, max_abs, CMatrix, Tolerance};
use crate::report::Report;
use crate::staralg::{check_representation, Automorphism, Representation, StarAlgebra};

/// A 2-Hilbert bundle `(Y, π, 𝒜, ℳ, μ)` over a finite cover.
///
/// `ℳ` at `(y₁, y₂)` is an `𝒜_{y₂}`-`𝒜_{y₁}`-bimodule. `μ` at `z ∈ Y^[3]`
/// is stored on the algebraic tensor product `ℳ₂₃ ⊗ ℳ₁₂` (index
/// `i * dim ℳ₁₂ + j`), so it does not depend on how the fusion is
/// coordinatized.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoVectorBundle {
    cover: Cover,
    algebras: Vec<StarAlgebra>,
    m: BimoduleBundle,
    mu: Vec<CMatrix>,
    y2: FibreProduct,
    y3: FibreProduct,
    y4: FibreProduct,
}

impl TwoVectorBundle {
    /// Shape checks only; see [`check_two_vector_bundle`].
    pub fn new(
        cover: Cover,
        algebras: Vec<StarAlgebra>,
        m: BimoduleBundle,
        mu: Vec<CMatrix>,
    ) -> Result<Self> {
        let (y2, y3, y4) = (
            cover.fibre_product(2),
            cover.fibre_product(3),
            cover.fibre_product(4),
        );
        if algebras.len() != cover.total().len {
            return Err(Error::dimension(
                format!("{} algebras", cover.total().len),
                algebras.len(),
            ));
        }
        if m.len() != y2.len() {
            return Err(Error::dimension(
                format!("{} bimodules over Y^[2]", y2.len()),
                m.len(),
            ));
        }
        for w in 0..y2.len() {
            let pt = y2.point(w);
            let h = m.fibre(w);
            if h.left_alg() != &algebras[pt[1]] || h.right_alg() != &algebras[pt[0]] {
                return Err(Error::InvalidInput(format!(
                    "M at {} is not an A_y2-A_y1 bimodule",
                    fmt_point(pt)
                )));
            }
        }
        if mu.len() != y3.len() {
            return Err(Error::dimension(
                format!("{} maps over Y^[3]", y3.len()),
                mu.len(),
            ));
        }
        for z in 0..y3.len() {
            let (d13, d23, d12) = (
                m.fibre(y3.pr(z, &[1, 3], &y2)).dim(),
                m.fibre(y3.pr(z, &[2, 3], &y2)).dim(),
                m.fibre(y3.pr(z, &[1, 2], &y2)).dim(),
            );
            if mu[z].shape() != (d13, d23 * d12) {
                return Err(Error::dimension(
                    format!("{}x{} mu at {}", d13, d23 * d12, fmt_point(y3.point(z))),
                    format!("{}x{}", mu[z].nrows(), mu[z].ncols()),
                ));
            }
        }
        Ok(Self {
            cover,
            algebras,
            m,
            mu,
            y2,
            y3,
            y4,
        })
    }

    /// `ℳ` constant `L²(A)` with `μ` the multiplication `a ⊗ b ↦ ab`.
    pub fn trivial(cover: Cover, alg: &StarAlgebra) -> Self {
        let y2 = cover.fibre_product(2);
        let y3 = cover.fibre_product(3);
        let algebras = alloc::vec![alg.clone(); cover.total().len];
        let m = BimoduleBundle::constant(y2.len(), &Bimodule::standard(alg));
        let mu = alloc::vec![chi_raw(alg, &Automorphism::identity(alg)); y3.len()];
        Self::new(cover, algebras, m, mu).expect("consistent shapes")
    }

    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn algebra(&self, y: usize) -> &StarAlgebra {
        &self.algebras[y]
    }

    pub fn algebras(&self) -> &[StarAlgebra] {
        &self.algebras
    }

    pub fn bimodules(&self) -> &BimoduleBundle {
        &self.m
    }

    pub fn mu(&self, z: usize) -> &CMatrix {
        &self.mu[z]
    }

    pub fn mu_table(&self) -> &[CMatrix] {
        &self.mu
    }

    pub fn y2(&self) -> &FibreProduct {
        &self.y2
    }

    pub fn y3(&self) -> &FibreProduct {
        &self.y3
    }

    pub fn y4(&self) -> &FibreProduct {
        &self.y4
    }

    /// A copy with `μ` replaced at one point.
    pub fn with_mu(&self, z: usize, mu: CMatrix) -> Result<Self> {
        let mut all = self.mu.clone();
        if z >= all.len() {
            return Err(Error::InvalidInput(format!("no point {z} in Y^[3]")));
        }
        all[z] = mu;
        Self::new(
            self.cover.clone(),
            self.algebras.clone(),
            self.m.clone(),
            all,
        )
    }

    /// `μ(z)` as a map out of the fusion `ℳ₂₃ ⊠ ℳ₁₂`.
    pub fn mu_fused(&self, z: usize, tol: Tolerance) -> Result<Intertwiner> {
        let mut cache = FusionCache::new();
        let f = self.fused(z, &mut cache, tol)?;
        self.descend_mu(z, f, tol)
    }

    fn fused<'a>(&self, z: usize, cache: &'a mut FusionCache, tol: Tolerance) -> Result<&'a Fused> {
        let key = (
            self.y3.pr(z, &[2, 3], &self.y2),
            self.y3.pr(z, &[1, 2], &self.y2),
        );
        fused_pair(&self.m, key, cache, tol)
    }

    fn descend_mu(&self, z: usize, f: &Fused, tol: Tolerance) -> Result<Intertwiner> {
        let map = f.descend(&self.mu[z], "mu", tol)?;
        Intertwiner::honest(
            f.bimodule().clone(),
            self.m.fibre(self.y3.pr(z, &[1, 3], &self.y2)).clone(),
            map,
        )
    }
}

type FusionCache = BTreeMap<(usize, usize), Fused>;

fn fused_pair<'a>(
    m: &BimoduleBundle,
    key: (usize, usize),
    cache: &'a mut FusionCache,
    tol: Tolerance,
) -> Result<&'a Fused> {
    if let Entry::Vacant(slot) = cache.entry(key) {
        slot.insert(fuse(m.fibre(key.0), m.fibre(key.1), tol)?);
    }
    Ok(&cache[&key])
}

/// Every bimodule fibre, every `μ` (well defined on the fusion, an
/// intertwiner, unitary) and the square over each point of `Y^[4]`.
pub fn check_two_vector_bundle(v: &TwoVectorBundle, tol: Tolerance) -> Report {
    let mut report = Report::new();
    let (y2, y3, y4) = (&v.y2, &v.y3, &v.y4);
    for w in 0..y2.len() {
        report.extend_prefixed(
            &format!("M at {}", fmt_point(y2.point(w))),
            check_bimodule(v.m.fibre(w), tol),
        );
    }
    if !report.is_ok() {
        return report;
    }
    let mut cache = FusionCache::new();
    let mut fused_mu = Vec::with_capacity(y3.len());
    for z in 0..y3.len() {
        let loc = format!("Y^[3] point {}", fmt_point(y3.point(z)));
        let f = match v.fused(z, &mut cache, tol) {
            Ok(f) => f,
            Err(e) => {
                report.push(loc, format!("M23 and M12 fuse ({e})"), f64::INFINITY);
                fused_mu.push(None);
                continue;
            }
        };
        match v.descend_mu(z, f, tol) {
            Ok(u) => {
                report.extend_prefixed(&loc, u.check(tol));
                let r = u.unitarity_residual();
                if r > tol.eps() {
                    report.push(loc, "mu is unitary", r);
                }
                fused_mu.push(Some(u.map().clone()));
            }
            Err(Error::IllDefined { residual, .. }) => {
                report.push(loc, "mu is well defined on M23 ⊠ M12", residual);
                fused_mu.push(None);
            }
            Err(e) => {
                report.push(loc, format!("mu has the right shape ({e})"), f64::INFINITY);
                fused_mu.push(None);
            }
        }
    }
    if !report.is_ok() {
        return report;
    }
    for w in 0..y4.len() {
        let z123 = y4.pr(w, &[1, 2, 3], y3);
        let z134 = y4.pr(w, &[1, 3, 4], y3);
        let z124 = y4.pr(w, &[1, 2, 4], y3);
        let z234 = y4.pr(w, &[2, 3, 4], y3);
        let d34 = v.m.fibre(y4.pr(w, &[3, 4], y2)).dim();
        let d12 = v.m.fibre(y4.pr(w, &[1, 2], y2)).dim();
        // both sides as maps out of M34 ⊗ M23 ⊗ M12
        let via_124 = {
            let f = v.fused(z124, &mut cache, tol).expect("fused above");
            fused_mu[z124].as_ref().expect("checked")
                * f.class()
                * kron(&v.mu[z234], &CMatrix::identity(d12, d12))
        };
        let via_134 = {
            let f = v.fused(z134, &mut cache, tol).expect("fused above");
            fused_mu[z134].as_ref().expect("checked")
                * f.class()
                * kron(&CMatrix::identity(d34, d34), &v.mu[z123])
        };
        let r = max_abs(&(via_124 - via_134));
        if r > tol.eps() {
            report.push(
                format!("Y^[4] point {}", fmt_point(y4.point(w))),
                "mu_134 (id ⊠ mu_123) = mu_124 (mu_234 ⊠ id)",
                r,
            );
        }
    }
    report
}

/// `𝒬 ×_𝒢 A`: the cover of `𝒬`, the constant algebra `A`, `ℳ = Mod_R(P)`
/// and `μ = Mod(μ_𝒬) ∘ (monoidality) ∘ (pullback identifications)`.
///
/// The representation is checked; the gerbe is not, so that a defect of
/// `μ_𝒬` shows up in [`check_two_vector_bundle`] of the result.
pub fn associate(q: &BundleGerbe, rep: &Representation, tol: Tolerance) -> Result<TwoVectorBundle> {
    let tg = q.twogroup();
    let report = check_representation(tg, rep, tol);
    if !report.is_ok() {
        return Err(Error::invalid("representation", report));
    }
    let alg = rep.l2().algebra().clone();
    let s = q.space();
    let (y2, y3) = (&s.y2, &s.y3);
    let modp = mod_of_bundle(q.bundle(), rep, tol)?;
    let mod23 = mod_of_bundle(&s.pb23.bundle, rep, tol)?;
    let mod12 = mod_of_bundle(&s.pb12.bundle, rep, tol)?;
    let mod13 = mod_of_bundle(&s.pb13.bundle, rep, tol)?;
    let modt = mod_of_bundle(&s.domain.bundle, rep, tol)?;

    // μ_𝒬 as a bundle map from the domain to pr₁₃*P
    let lift = q.mu_lift();
    let dom = &s.domain.bundle;
    let mu_map: Vec<usize> = (0..dom.len())
        .map(|cl| {
            let z = dom.proj(cl);
            let (b, c) = s.rep(cl);
            s.pb13.points.index(z, q.mu(&lift, z, b, c))
        })
        .collect();
    let mod_mu = mod_of_morphism(&modt, &mod13, &mu_map, tol)?;

    // pr*Mod(P) → Mod(pr*P) is [p, ξ] ↦ [(z, p), ξ]; in coordinates this is
    // the inverse of the map sending [(z, p₀'), ξ] to Mod(P) coordinates
    let identify = |pulled: &super::ModBundle,
                    points: &crate::bundle::Pullback,
                    z: usize|
     -> CMatrix { modp.coordinates(points.original(pulled.base_point(z))) };

    let id = Automorphism::identity(&alg);
    let mut chis = ChiCache::new();
    let mut fusions = FusionCache::new();
    let mut mu = Vec::with_capacity(y3.len());
    for z in 0..y3.len() {
        let (w23, w12, w13) = (
            y3.pr(z, &[2, 3], y2),
            y3.pr(z, &[1, 2], y2),
            y3.pr(z, &[1, 3], y2),
        );
        let into23 = Intertwiner::honest(
            modp.fibre(w23).clone(),
            mod23.fibre(z).clone(),
            identify(&mod23, &s.pb23.points, z).adjoint(),
        )?;
        let into12 = Intertwiner::honest(
            modp.fibre(w12).clone(),
            mod12.fibre(z).clone(),
            identify(&mod12, &s.pb12.points, z).adjoint(),
        )?;
        let out13 = identify(&mod13, &s.pb13.points, z);
        let pulled = fuse(mod23.fibre(z), mod12.fibre(z), tol)?;
        let outer = fused_pair(modp.bimodules(), (w23, w12), &mut fusions, tol)?;
        let pull = fuse_intertwiners_between(outer, &pulled, &into23, &into12, tol)?;
        let b = mod23.base_point(z);
        let c = mod12.base_point(z);
        let mono = monoidality_map(
            &mod23, &mod12, &s.domain, &modt, &pulled, b, c, &mut chis, tol,
        )?;
        let fused_map = out13 * mod_mu[z].map() * mono * pull.map();
        let u = Intertwiner::new(
            outer.bimodule().clone(),
            modp.fibre(w13).clone(),
            fused_map,
            id.clone(),
            id.clone(),
            tol,
        )?;
        mu.push(u.map() * outer.class());
    }
    let algebras = alloc::vec![alg; q.cover().total().len];
    TwoVectorBundle::new(q.cover().clone(), algebras, modp.bimodules().clone(), mu)
}
