//! Nonabelian bundle gerbes over finite covers.
//!
//! The product `μ: pr₂₃*P ⊗ pr₁₂*P → pr₁₃*P` is stored as one point of `P`
//! per point `z` of `Y^[3]`: the image of the reference class `b₀ ⊗ c₀`,
//! where `b₀` and `c₀` are the lowest-index points of `P` over `pr₂₃(z)` and
//! `pr₁₂(z)`. Equivariance determines the rest.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::bundle::{
    check_principal_two_bundle, extend_two_group, tensor, Cover, FibreProduct, PrincipalTwoBundle,
    Tensor, TwoExtension, TwoPullback,
};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::twogroup::{TwoGroup, TwoGroupHom};

/// `Y^[2]`, `Y^[3]`, `Y^[4]`, the pullbacks of `P` to `Y^[3]`, and the
/// domain `pr₂₃*P ⊗ pr₁₂*P` of the product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSpace {
    pub y2: FibreProduct,
    pub y3: FibreProduct,
    pub y4: FibreProduct,
    pub pb23: TwoPullback,
    pub pb12: TwoPullback,
    pub pb13: TwoPullback,
    pub domain: Tensor,
    /// Reference class `b₀ ⊗ c₀` over each point of `Y^[3]`.
    pub reference: Vec<usize>,
    /// Points of `P` over each point of `Y^[2]`, ascending.
    pub fibres: Vec<Vec<usize>>,
}

impl ProductSpace {
    pub fn new(cover: &Cover, p: &PrincipalTwoBundle) -> Result<Self> {
        let y2 = cover.fibre_product(2);
        let y3 = cover.fibre_product(3);
        let y4 = cover.fibre_product(4);
        if p.base() != y2.len() {
            return Err(Error::dimension(
                format!("bundle over {} points of Y^[2]", y2.len()),
                p.base(),
            ));
        }
        let pb23 = p.pullback(&y3.pr_table(&[2, 3], &y2));
        let pb12 = p.pullback(&y3.pr_table(&[1, 2], &y2));
        let pb13 = p.pullback(&y3.pr_table(&[1, 3], &y2));
        let domain = tensor(&pb23.bundle, &pb12.bundle)?;
        let mut fibres = vec![Vec::new(); y2.len()];
        for q in 0..p.len() {
            fibres[p.proj(q)].push(q);
        }
        if let Some(empty) = fibres.iter().position(|f| f.is_empty()) {
            return Err(Error::InvalidInput(format!(
                "P has an empty fibre over Y^[2] point {empty}"
            )));
        }
        let reference = (0..y3.len())
            .map(|z| {
                let b = fibres[y3.pr(z, &[2, 3], &y2)][0];
                let c = fibres[y3.pr(z, &[1, 2], &y2)][0];
                domain
                    .class(pb23.points.index(z, b), pb12.points.index(z, c))
                    .expect("same fibre")
            })
            .collect();
        Ok(Self {
            y2,
            y3,
            y4,
            pb23,
            pb12,
            pb13,
            domain,
            reference,
            fibres,
        })
    }

    /// The class `b ⊗ c` over `z`, for points `b`, `c` of `P`.
    pub fn class(&self, z: usize, b: usize, c: usize) -> usize {
        self.domain
            .class(self.pb23.points.index(z, b), self.pb12.points.index(z, c))
            .expect("same fibre")
    }

    /// A representative `(b, c)` in `P` of a class of the domain.
    pub fn rep(&self, class: usize) -> (usize, usize) {
        let (q1, q2) = self.domain.rep(class);
        (self.pb23.points.original(q1), self.pb12.points.original(q2))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleGerbe {
    cover: Cover,
    p: PrincipalTwoBundle,
    mu: Vec<usize>,
    space: ProductSpace,
}

impl BundleGerbe {
    /// Shape checks only; see [`check_gerbe`].
    pub fn from_parts(cover: Cover, p: PrincipalTwoBundle, mu: Vec<usize>) -> Result<Self> {
        let space = ProductSpace::new(&cover, &p)?;
        if mu.len() != space.y3.len() {
            return Err(Error::dimension(
                format!("mu with {} entries", space.y3.len()),
                mu.len(),
            ));
        }
        if mu.iter().any(|&q| q >= p.len()) {
            return Err(Error::InvalidInput("mu value out of range".into()));
        }
        Ok(Self {
            cover,
            p,
            mu,
            space,
        })
    }

    /// Gerbe with `P` trivial over `Y^[2]` with anchor `g` at the unit
    /// section and product `(z₂₃, e) ⊗ (z₁₂, e) ↦ (z₁₃, c(z))`. Needs
    /// `t(c) = g₁₃ (g₂₃ g₁₂)⁻¹`; the cocycle condition is what
    /// [`check_gerbe`] verifies.
    pub fn from_cocycle(
        cover: Cover,
        twogroup: &TwoGroup,
        g: &[usize],
        c: &[usize],
    ) -> Result<Self> {
        let p = PrincipalTwoBundle::trivial_with_anchor(twogroup, g)?;
        let space = ProductSpace::new(&cover, &p)?;
        if c.len() != space.y3.len() {
            return Err(Error::dimension(
                format!("c with {} entries", space.y3.len()),
                c.len(),
            ));
        }
        let h = twogroup.crossed().h();
        if c.iter().any(|&x| x >= h.order()) {
            return Err(Error::InvalidInput("cocycle value out of range".into()));
        }
        let n = h.order();
        let e = h.id();
        let (y2, y3) = (&space.y2, &space.y3);
        let mut mu = Vec::with_capacity(y3.len());
        for z in 0..y3.len() {
            let b = y3.pr(z, &[2, 3], y2) * n + e;
            let cc = y3.pr(z, &[1, 2], y2) * n + e;
            let unit_class = space.class(z, b, cc);
            let shift = space
                .domain
                .bundle
                .underlying()
                .difference(unit_class, space.reference[z])
                .expect("same fibre");
            let value = y3.pr(z, &[1, 3], y2) * n + c[z];
            mu.push(p.act(value, shift));
        }
        Ok(Self {
            cover,
            p,
            mu,
            space,
        })
    }

    pub fn trivial(cover: Cover, twogroup: &TwoGroup) -> Self {
        let y2 = cover.fibre_product(2).len();
        let y3 = cover.fibre_product(3).len();
        let h = twogroup.crossed().h().id();
        Self::from_cocycle(cover, twogroup, &vec![twogroup.g0().id(); y2], &vec![h; y3])
            .expect("trivial data")
    }

    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn bundle(&self) -> &PrincipalTwoBundle {
        &self.p
    }

    pub fn mu_table(&self) -> &[usize] {
        &self.mu
    }

    pub fn space(&self) -> &ProductSpace {
        &self.space
    }

    pub fn twogroup(&self) -> &TwoGroup {
        self.p.twogroup()
    }

    /// Copy with `μ` changed at one point of `Y^[3]`.
    pub fn with_mu(&self, z: usize, value: usize) -> Result<Self> {
        let mut mu = self.mu.clone();
        *mu.get_mut(z)
            .ok_or_else(|| Error::InvalidInput(format!("no point {z} in Y^[3]")))? = value;
        if value >= self.p.len() {
            return Err(Error::InvalidInput("mu value out of range".into()));
        }
        Ok(Self {
            cover: self.cover.clone(),
            p: self.p.clone(),
            mu,
            space: self.space.clone(),
        })
    }

    /// `μ` on every class of its domain, by equivariance from the table.
    pub fn mu_lift(&self) -> Vec<usize> {
        let dom = &self.space.domain.bundle;
        let mut full = vec![usize::MAX; dom.len()];
        for (z, &r) in self.space.reference.iter().enumerate() {
            for h in self.p.crossed().h().elements() {
                full[dom.act(r, h)] = self.p.act(self.mu[z], h);
            }
        }
        full
    }

    /// `μ(b ⊗ c)` over `z` for points of `P`.
    pub fn mu(&self, lift: &[usize], z: usize, b: usize, c: usize) -> usize {
        lift[self.space.class(z, b, c)]
    }
}

/// Every failure of: `P` a principal 2-bundle, `μ` an anchored bundle
/// morphism over `Y^[3]`, and associativity at each point of `Y^[4]`.
pub fn check_gerbe(q: &BundleGerbe) -> Report {
    let mut report = Report::new();
    report.extend_prefixed("P", check_principal_two_bundle(&q.p));
    let s = &q.space;
    let dom = &s.domain.bundle;
    let lift = q.mu_lift();
    if let Some(c) = lift.iter().position(|&v| v == usize::MAX) {
        report.push(
            format!("Y^[3] point {}", fmt_point(s.y3.point(dom.proj(c)))),
            "mu is defined on every class",
            1.0,
        );
        return report;
    }
    for z in 0..s.y3.len() {
        let target = s.y3.pr(z, &[1, 3], &s.y2);
        if q.p.proj(q.mu[z]) != target {
            report.push(
                format!("Y^[3] point {}", fmt_point(s.y3.point(z))),
                "mu(z) lies over pr13(z)",
                1.0,
            );
            continue;
        }
        for class in (0..dom.len()).filter(|&c| dom.proj(c) == z) {
            if q.p.anchor(lift[class]) != dom.anchor(class) {
                report.push(
                    format!("Y^[3] point {}", fmt_point(s.y3.point(z))),
                    "phi(mu(b ⊗ c)) = phi(b) phi(c)",
                    1.0,
                );
                break;
            }
        }
    }
    if !report.is_ok() {
        // associativity needs a well-formed product
        let misplaced = (0..s.y3.len()).any(|z| q.p.proj(q.mu[z]) != s.y3.pr(z, &[1, 3], &s.y2));
        if misplaced {
            return report;
        }
    }
    for w in 0..s.y4.len() {
        let z123 = s.y4.pr(w, &[1, 2, 3], &s.y3);
        let z134 = s.y4.pr(w, &[1, 3, 4], &s.y3);
        let z124 = s.y4.pr(w, &[1, 2, 4], &s.y3);
        let z234 = s.y4.pr(w, &[2, 3, 4], &s.y3);
        let f34 = &s.fibres[s.y4.pr(w, &[3, 4], &s.y2)];
        let f23 = &s.fibres[s.y4.pr(w, &[2, 3], &s.y2)];
        let f12 = &s.fibres[s.y4.pr(w, &[1, 2], &s.y2)];
        let fails = f34.iter().any(|&a| {
            f23.iter().any(|&b| {
                f12.iter().any(|&c| {
                    q.mu(&lift, z134, a, q.mu(&lift, z123, b, c))
                        != q.mu(&lift, z124, q.mu(&lift, z234, a, b), c)
                })
            })
        });
        if fails {
            report.push(
                format!("Y^[4] point {}", fmt_point(s.y4.point(w))),
                "mu(a ⊗ mu(b ⊗ c)) = mu(mu(a ⊗ b) ⊗ c)",
                1.0,
            );
        }
    }
    report
}

pub(crate) fn fmt_point(p: &[usize]) -> alloc::string::String {
    let inner: Vec<alloc::string::String> = p.iter().map(|y| format!("{y}")).collect();
    format!("({})", inner.join(","))
}

/// The nonabelian Čech conditions for `(g, c)`: `t(c) = g₁₃(g₂₃g₁₂)⁻¹` on
/// `Y^[3]` and `c₁₃₄ α(g₃₄, c₁₂₃) = c₁₂₄ c₂₃₄` on `Y^[4]`.
pub fn check_cocycle(cover: &Cover, twogroup: &TwoGroup, g: &[usize], c: &[usize]) -> Report {
    let mut report = Report::new();
    let (y2, y3, y4) = (
        cover.fibre_product(2),
        cover.fibre_product(3),
        cover.fibre_product(4),
    );
    let cm = twogroup.crossed();
    let (g0, h) = (cm.g(), cm.h());
    if g.len() != y2.len() || c.len() != y3.len() {
        report.push("cocycle", "g on Y^[2] and c on Y^[3]", 1.0);
        return report;
    }
    for z in 0..y3.len() {
        let gi = |ij: &[usize]| g[y3.pr(z, ij, &y2)];
        let expected = g0.mul(gi(&[1, 3]), g0.inv(g0.mul(gi(&[2, 3]), gi(&[1, 2]))));
        if cm.t(c[z]) != expected {
            report.push(
                format!("Y^[3] point {}", fmt_point(y3.point(z))),
                "t(c) = g13 (g23 g12)^-1",
                1.0,
            );
        }
    }
    for w in 0..y4.len() {
        let ci = |ijk: &[usize]| c[y4.pr(w, ijk, &y3)];
        let g34 = g[y4.pr(w, &[3, 4], &y2)];
        let lhs = h.mul(ci(&[1, 3, 4]), cm.alpha(g34, ci(&[1, 2, 3])));
        let rhs = h.mul(ci(&[1, 2, 4]), ci(&[2, 3, 4]));
        if lhs != rhs {
            report.push(
                format!("Y^[4] point {}", fmt_point(y4.point(w))),
                "c134 alpha(g34, c123) = c124 c234",
                1.0,
            );
        }
    }
    report
}

/// `F_*(𝒬)`: `P` extended along `F`, and `μ` transported through
/// `ψ: F_*(P₂₃) ⊗ F_*(P₁₂) → F_*(P₂₃ ⊗ P₁₂)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedGerbe {
    pub gerbe: BundleGerbe,
    pub extension: TwoExtension,
}

pub fn extend_gerbe(q: &BundleGerbe, f: &TwoGroupHom) -> Result<ExtendedGerbe> {
    let extension = extend_two_group(&q.p, f)?;
    let space = ProductSpace::new(&q.cover, &extension.bundle)?;
    let lift = q.mu_lift();
    if lift.contains(&usize::MAX) {
        return Err(Error::InvalidInput(
            "mu is not defined on every class".into(),
        ));
    }
    let cm = f.target().crossed();
    let h = cm.h();
    let mut mu = Vec::with_capacity(space.y3.len());
    for z in 0..space.y3.len() {
        let (u, v) = space.rep(space.reference[z]);
        let (b, h1) = extension.extension.rep(u);
        let (c, h2) = extension.extension.rep(v);
        let hh = h.mul(cm.alpha(f.f0(q.p.anchor(b)), h2), h1);
        mu.push(extension.extension.class(q.mu(&lift, z, b, c), hh));
    }
    let gerbe = BundleGerbe {
        cover: q.cover.clone(),
        p: extension.bundle.clone(),
        mu,
        space,
    };
    Ok(ExtendedGerbe { gerbe, extension })
}

/// `ρ*𝒬` along a map of covers `ρ: Y' → Y` over `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PulledBackGerbe {
    pub gerbe: BundleGerbe,
    pub pullback: TwoPullback,
    /// `ρ^[2]: Y'^[2] → Y^[2]`.
    pub rho2: Vec<usize>,
    /// `ρ^[3]: Y'^[3] → Y^[3]`.
    pub rho3: Vec<usize>,
}

pub fn pullback_gerbe(q: &BundleGerbe, cover: Cover, rho: &[usize]) -> Result<PulledBackGerbe> {
    check_cover_map(&cover, &q.cover, rho)?;
    let (y2, y3) = (&q.space.y2, &q.space.y3);
    let (z2, z3) = (cover.fibre_product(2), cover.fibre_product(3));
    let map = |zp: &FibreProduct, zz: &FibreProduct, i: usize| {
        let image: Vec<usize> = zp.point(i).iter().map(|&y| rho[y]).collect();
        zz.index(&image).expect("rho preserves fibres")
    };
    let rho2: Vec<usize> = (0..z2.len()).map(|i| map(&z2, y2, i)).collect();
    let rho3: Vec<usize> = (0..z3.len()).map(|i| map(&z3, y3, i)).collect();
    let pullback = q.p.pullback(&rho2);
    let space = ProductSpace::new(&cover, &pullback.bundle)?;
    let lift = q.mu_lift();
    let mut mu = Vec::with_capacity(z3.len());
    for z in 0..z3.len() {
        let (u, v) = space.rep(space.reference[z]);
        let (b, c) = (pullback.points.original(u), pullback.points.original(v));
        let value = q.mu(&lift, rho3[z], b, c);
        mu.push(pullback.points.index(z3.pr(z, &[1, 3], &z2), value));
    }
    let gerbe = BundleGerbe {
        cover,
        p: pullback.bundle.clone(),
        mu,
        space,
    };
    Ok(PulledBackGerbe {
        gerbe,
        pullback,
        rho2,
        rho3,
    })
}

/// `ρ: Y' → Y` must satisfy `π ∘ ρ = π'`.
pub fn check_cover_map(source: &Cover, target: &Cover, rho: &[usize]) -> Result<()> {
    if rho.len() != source.total().len {
        return Err(Error::dimension(source.total().len, rho.len()));
    }
    if source.base() != target.base() {
        return Err(Error::InvalidInput("covers of different bases".into()));
    }
    for (y, &r) in rho.iter().enumerate() {
        if r >= target.total().len || target.proj(r) != source.proj(y) {
            return Err(Error::InvalidInput(format!(
                "rho({y}) is not over pi'({y})"
            )));
        }
    }
    Ok(())
}

/// The three-sheeted cover of a two-point base with the `ℤ/4 → ℤ/2`
/// gerbe from `ĝ(y, y') = y·y' + 2y + 3y' mod 4`: `g = ĝ mod 2` and
/// `c = ĝ₁₃ − ĝ₂₃ − ĝ₁₂`.
pub fn central_extension_gerbe(twogroup: &TwoGroup) -> Result<BundleGerbe> {
    let cover = Cover::new(2, vec![0, 0, 0, 1, 1, 1])?;
    let (y2, y3) = (cover.fibre_product(2), cover.fibre_product(3));
    let hat = |a: usize, b: usize| (a * b + 2 * a + 3 * b) % 4;
    let g: Vec<usize> = (0..y2.len())
        .map(|z| {
            let p = y2.point(z);
            hat(p[0], p[1]) % 2
        })
        .collect();
    let c: Vec<usize> = (0..y3.len())
        .map(|z| {
            let p = y3.point(z);
            (hat(p[0], p[2]) + 8 - hat(p[1], p[2]) - hat(p[0], p[1])) % 4
        })
        .collect();
    let report = check_cocycle(&cover, twogroup, &g, &c);
    if !report.is_ok() {
        return Err(Error::invalid("cocycle", report));
    }
    BundleGerbe::from_cocycle(cover, twogroup, &g, &c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::staralg::carriers::central_extension_two_group;
    use crate::twogroup::{two_group_from_crossed_module, CrossedModule, FiniteGroup};

    #[test]
    fn trivial_gerbe_passes() {
        let g = central_extension_two_group();
        let q = BundleGerbe::trivial(Cover::new(2, vec![0, 0, 1]).unwrap(), &g);
        assert!(check_gerbe(&q).is_ok());
        let s3 = two_group_from_crossed_module(&CrossedModule::inner(FiniteGroup::symmetric(3)))
            .unwrap();
        let q = BundleGerbe::trivial(Cover::new(1, vec![0, 0]).unwrap(), &s3);
        assert!(check_gerbe(&q).is_ok());
    }

    #[test]
    fn central_extension_gerbe_passes_and_detects_corruption() {
        let g = central_extension_two_group();
        let q = central_extension_gerbe(&g).unwrap();
        assert_eq!(q.space().y3.len(), 54);
        let report = check_gerbe(&q);
        assert!(report.is_ok(), "{report:?}");
        let z = 5;
        let bad = q.with_mu(z, q.bundle().act(q.mu_table()[z], 2)).unwrap();
        let report = check_gerbe(&bad);
        assert!(report
            .violations
            .iter()
            .any(|v| v.location.starts_with("Y^[4]")));
    }

    #[test]
    fn cocycle_conditions_are_checked() {
        let g = central_extension_two_group();
        let cover = Cover::new(1, vec![0, 0]).unwrap();
        // g ≡ 0 forces t(c) = 0; c = 1 somewhere breaks it
        let mut c = vec![0; 8];
        c[3] = 1;
        assert!(check_cocycle(&cover, &g, &[0; 4], &c).mentions("t(c)"));
    }

    #[test]
    fn extension_along_identity_and_reduction_stays_a_gerbe() {
        let g = central_extension_two_group();
        let q = central_extension_gerbe(&g).unwrap();
        let id = extend_gerbe(&q, &TwoGroupHom::identity(&g)).unwrap();
        assert!(check_gerbe(&id.gerbe).is_ok());
        let z2 =
            two_group_from_crossed_module(&CrossedModule::inner(FiniteGroup::cyclic(2))).unwrap();
        let f = TwoGroupHom::from_crossed(&g, &z2, &[0, 1], &[0, 1, 0, 1]).unwrap();
        let e = extend_gerbe(&q, &f).unwrap();
        assert!(check_gerbe(&e.gerbe).is_ok());
        let t = extend_gerbe(&BundleGerbe::trivial(q.cover().clone(), &g), &f).unwrap();
        assert!(check_gerbe(&t.gerbe).is_ok());
    }

    #[test]
    fn pullback_along_refinement_stays_a_gerbe() {
        let g = central_extension_two_group();
        let q = central_extension_gerbe(&g).unwrap();
        let finer = Cover::new(2, vec![0, 0, 1, 1, 0]).unwrap();
        let p = pullback_gerbe(&q, finer, &[0, 2, 3, 5, 1]).unwrap();
        assert!(check_gerbe(&p.gerbe).is_ok());
        assert!(pullback_gerbe(&q, Cover::new(2, vec![0, 1]).unwrap(), &[3, 0]).is_err());
    }
}
