use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::bundle::{check_bundle_map, tensor, FiniteSpace, PrincipalTwoBundle, Tensor};
use crate::error::{Error, Result};
use crate::fusion::{
    check_bimodule, fuse, fuse_intertwiners_between, twisted_fusion, Bimodule, Fused, Intertwiner,
    TwistedFusion,
};
use crate::numerics::{max_abs, CMatrix, Tolerance};
use crate::report::Report;
use crate::staralg::{AlgebraElement, Automorphism, Representation, StandardBimodule};

/// A bimodule per point of a finite space.
#[derive(Debug, Clone, PartialEq)]
pub struct BimoduleBundle {
    base: FiniteSpace,
    fibres: Vec<Bimodule>,
}

impl BimoduleBundle {
    pub fn new(fibres: Vec<Bimodule>) -> Self {
        Self {
            base: FiniteSpace::new(fibres.len()),
            fibres,
        }
    }

    pub fn constant(n: usize, h: &Bimodule) -> Self {
        Self::new(alloc::vec![h.clone(); n])
    }

    pub fn base(&self) -> FiniteSpace {
        self.base
    }

    pub fn len(&self) -> usize {
        self.fibres.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fibres.is_empty()
    }

    pub fn fibre(&self, x: usize) -> &Bimodule {
        &self.fibres[x]
    }

    pub fn fibres(&self) -> &[Bimodule] {
        &self.fibres
    }
}

pub fn check_bimodule_bundle(b: &BimoduleBundle, tol: Tolerance) -> Report {
    let mut report = Report::new();
    for (x, h) in b.fibres.iter().enumerate() {
        report.extend_prefixed(&format!("x={x}"), check_bimodule(h, tol));
    }
    report
}

/// `Mod_R(P) = (P × L²(A))/𝒢_s`, with `(p, ξ) ~ (p·h, ξ u_h)` where
/// `R1(h) = L_{u_h}`.
///
/// Each fibre is stored in coordinates relative to its lowest-index point
/// `p₀`: the class `[p₀, ξ]` has coordinate `ξ`, so the fibre is
/// `L²(A)` with right action twisted by `R0(φ(p₀))`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModBundle {
    bundle: PrincipalTwoBundle,
    l2: StandardBimodule,
    objects: Vec<Automorphism>,
    units: Vec<AlgebraElement>,
    base_points: Vec<usize>,
    offsets: Vec<usize>,
    fibres: BimoduleBundle,
}

impl ModBundle {
    pub fn bundle(&self) -> &PrincipalTwoBundle {
        &self.bundle
    }

    pub fn l2(&self) -> &StandardBimodule {
        &self.l2
    }

    pub fn bimodules(&self) -> &BimoduleBundle {
        &self.fibres
    }

    pub fn fibre(&self, x: usize) -> &Bimodule {
        self.fibres.fibre(x)
    }

    /// The point `p₀` the coordinates over `x` are taken relative to.
    pub fn base_point(&self, x: usize) -> usize {
        self.base_points[x]
    }

    /// Points of `P` over `x`.
    pub fn points_over(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.bundle.len()).filter(move |&p| self.bundle.proj(p) == x)
    }

    /// `R0(φ(p))`.
    pub fn twist(&self, p: usize) -> &Automorphism {
        &self.objects[self.bundle.anchor(p)]
    }

    /// `u_h` with `R1(h) = L_{u_h}`, for `h` a crossed-module index.
    pub fn unit(&self, h: usize) -> &AlgebraElement {
        &self.units[h]
    }

    /// Maps a representative `ξ` at `p` to the coordinate of `[p, ξ]`:
    /// right multiplication by `u_h*` where `p = p₀·h`.
    pub fn coordinates(&self, p: usize) -> CMatrix {
        self.l2.right(&self.units[self.offsets[p]].adjoint())
    }

    /// `τ_p: [p, ξ] ↦ ξ`, a unitary intertwiner onto `L²(A)_{R0(φ(p))}`.
    pub fn trivialization(&self, p: usize) -> Intertwiner {
        let x = self.bundle.proj(p);
        let alg = self.l2.algebra();
        Intertwiner::honest(
            self.fibre(x).clone(),
            Bimodule::twisted(alg, self.twist(p)),
            self.l2.right(&self.units[self.offsets[p]]),
        )
        .expect("same algebras and dimension")
    }

    /// `‖τ_{p'} τ_p* − R_u‖` for `p' = p·h`, `u = u_h`.
    pub fn transition_residual(&self, p: usize, h: usize) -> f64 {
        let q = self.bundle.act(p, h);
        let lhs = self.trivialization(q).map() * self.trivialization(p).map().adjoint();
        max_abs(&(lhs - self.l2.right(&self.units[h])))
    }
}

/// Builds `Mod_R(P)` and checks, for every point `p`, that the actions
/// computed through the representative `p` agree with those through `p₀`.
pub fn mod_of_bundle(
    p: &PrincipalTwoBundle,
    rep: &Representation,
    tol: Tolerance,
) -> Result<ModBundle> {
    let tg = p.twogroup();
    if rep.orders() != (tg.g0().order(), tg.g1().order()) {
        return Err(Error::dimension(
            format!(
                "representation of a 2-group of order ({}, {})",
                tg.g0().order(),
                tg.g1().order()
            ),
            format!("{:?}", rep.orders()),
        ));
    }
    let l2 = rep.l2().clone();
    let alg = l2.algebra().clone();
    let objects: Vec<Automorphism> = tg.g0().elements().map(|g| rep.r0(g).clone()).collect();
    let cm = p.crossed();
    let h = cm.h();
    let units: Vec<AlgebraElement> = h.elements().map(|k| rep.kernel_unitary(tg, k)).collect();

    let mut report = Report::new();
    for (k, u) in units.iter().enumerate() {
        if !alg.is_unitary(u, tol) {
            report.push(format!("h={k}"), "u_h is unitary", 1.0);
            continue;
        }
        let ad = Automorphism::inner(&alg, u, tol)?;
        let r = ad.distance(&objects[cm.t(k)]);
        if r > tol.eps() {
            report.push(format!("h={k}"), "Ad(u_h) = R0(t(h))", r);
        }
        for (k2, u2) in units.iter().enumerate() {
            let r = units[h.mul(k, k2)].max_abs_diff(&u.mul(u2));
            if r > tol.eps() {
                report.push(format!("h={k}, h'={k2}"), "u_{hh'} = u_h u_h'", r);
            }
        }
    }
    if !report.is_ok() {
        return Err(Error::invalid("Mod action data", report));
    }

    let base = p.base();
    let under = p.underlying();
    let base_points = (0..base)
        .map(|x| {
            under
                .first_over(x)
                .ok_or_else(|| Error::InvalidInput(format!("empty fibre over {x}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let offsets = (0..p.len())
        .map(|q| {
            under.difference(base_points[p.proj(q)], q).ok_or_else(|| {
                Error::InvalidInput(format!("point {q} is not in the orbit of its base point"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let fibres = BimoduleBundle::new(
        base_points
            .iter()
            .map(|&q| Bimodule::twisted(&alg, &objects[p.anchor(q)]))
            .collect(),
    );
    let m = ModBundle {
        bundle: p.clone(),
        l2,
        objects,
        units,
        base_points,
        offsets,
        fibres,
    };
    let mut worst = 0.0f64;
    for q in 0..p.len() {
        worst = worst.max(m.trivialization(q).check(tol).max_residual());
    }
    if worst > 0.0 {
        return Err(Error::IllDefined {
            what: "Mod bimodule actions".into(),
            residual: worst,
        });
    }
    Ok(m)
}

/// `Mod(f): [p, ξ] ↦ [f(p), ξ]`, one unitary intertwiner per base point.
pub fn mod_of_morphism(
    src: &ModBundle,
    dst: &ModBundle,
    f: &[usize],
    tol: Tolerance,
) -> Result<Vec<Intertwiner>> {
    if src.bundle.base() != dst.bundle.base() {
        return Err(Error::dimension(src.bundle.base(), dst.bundle.base()));
    }
    if f.len() != src.bundle.len() || f.iter().any(|&q| q >= dst.bundle.len()) {
        return Err(Error::InvalidInput(
            "bundle map table has the wrong shape".into(),
        ));
    }
    for (p, &q) in f.iter().enumerate() {
        if src.bundle.anchor(p) != dst.bundle.anchor(q) {
            return Err(Error::AnchorMismatch(format!(
                "phi({p}) = {} but phi(f({p})) = {}",
                src.bundle.anchor(p),
                dst.bundle.anchor(q)
            )));
        }
    }
    let report = check_bundle_map(&src.bundle, &dst.bundle, f, false);
    if !report.is_ok() {
        return Err(Error::invalid("bundle map", report));
    }
    (0..src.bundle.base())
        .map(|x| {
            let id = Automorphism::identity(src.l2.algebra());
            Intertwiner::new(
                src.fibre(x).clone(),
                dst.fibre(x).clone(),
                dst.coordinates(f[src.base_point(x)]),
                id.clone(),
                id,
                tol,
            )
        })
        .collect()
}

/// Largest `‖τ_{f(p)} ∘ Mod(f) − τ_p‖` over all points.
pub fn morphism_square_residual(
    src: &ModBundle,
    dst: &ModBundle,
    f: &[usize],
    maps: &[Intertwiner],
) -> f64 {
    (0..src.bundle.len())
        .map(|p| {
            let x = src.bundle.proj(p);
            let lhs = dst.trivialization(f[p]).map() * maps[x].map();
            max_abs(&(lhs - src.trivialization(p).map()))
        })
        .fold(0.0, f64::max)
}

/// Caches `χ` by pairs of anchors.
pub(crate) type ChiCache = BTreeMap<(usize, usize), TwistedFusion>;

/// `τ_{b⊗c}* ∘ χ_{φ(b),φ(c)} ∘ (τ_b ⊠ τ_c)` over the base point of `b` and `c`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn monoidality_map(
    left: &ModBundle,
    right: &ModBundle,
    t: &Tensor,
    product: &ModBundle,
    fused: &Fused,
    b: usize,
    c: usize,
    cache: &mut ChiCache,
    tol: Tolerance,
) -> Result<CMatrix> {
    let key = (left.bundle.anchor(b), right.bundle.anchor(c));
    if let Entry::Vacant(slot) = cache.entry(key) {
        slot.insert(twisted_fusion(
            left.l2.algebra(),
            left.twist(b),
            right.twist(c),
            tol,
        )?);
    }
    let tf = &cache[&key];
    let top = fuse_intertwiners_between(
        fused,
        &tf.fused,
        &left.trivialization(b),
        &right.trivialization(c),
        tol,
    )?;
    let bc = t.class(b, c).ok_or_else(|| {
        Error::InvalidInput(format!("points {b} and {c} lie over different base points"))
    })?;
    Ok(product.trivialization(bc).map().adjoint() * tf.chi.map() * top.map())
}

/// `Mod(P) ⊠ Mod(Q) ≅ Mod(P ⊗ Q)`, with every section pair tried.
#[derive(Debug, Clone)]
pub struct Monoidality {
    pub tensor: Tensor,
    pub left: ModBundle,
    pub right: ModBundle,
    pub product: ModBundle,
    /// `Mod(P)_x ⊠ Mod(Q)_x` per base point.
    pub fused: Vec<Fused>,
    pub maps: Vec<Intertwiner>,
    /// Largest deviation between maps induced by different section choices.
    pub section_spread: f64,
}

pub fn mod_monoidality(
    p: &PrincipalTwoBundle,
    q: &PrincipalTwoBundle,
    rep: &Representation,
    tol: Tolerance,
) -> Result<Monoidality> {
    let t = tensor(p, q)?;
    let left = mod_of_bundle(p, rep, tol)?;
    let right = mod_of_bundle(q, rep, tol)?;
    let product = mod_of_bundle(&t.bundle, rep, tol)?;
    let mut cache = ChiCache::new();
    let mut fused = Vec::with_capacity(p.base());
    let mut maps = Vec::with_capacity(p.base());
    let mut spread = 0.0f64;
    for x in 0..p.base() {
        let f = fuse(left.fibre(x), right.fibre(x), tol)?;
        let mut first: Option<CMatrix> = None;
        for b in left.points_over(x) {
            for c in right.points_over(x) {
                let m = monoidality_map(&left, &right, &t, &product, &f, b, c, &mut cache, tol)?;
                match &first {
                    None => first = Some(m),
                    Some(m0) => spread = spread.max(max_abs(&(m - m0))),
                }
            }
        }
        let map = first.expect("nonempty fibres");
        let id = Automorphism::identity(left.l2.algebra());
        let u = Intertwiner::new(
            f.bimodule().clone(),
            product.fibre(x).clone(),
            map,
            id.clone(),
            id,
            tol,
        )?;
        if !u.is_unitary(tol) {
            return Err(Error::NotImplementing {
                residual: u.unitarity_residual(),
            });
        }
        fused.push(f);
        maps.push(u);
    }
    Ok(Monoidality {
        tensor: t,
        left,
        right,
        product,
        fused,
        maps,
        section_spread: spread,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::left_unitor;
    use crate::staralg::carriers::{central_extension_representation, central_extension_two_group};
    use crate::staralg::StarAlgebra;

    fn setup() -> (crate::twogroup::TwoGroup, Representation) {
        let g = central_extension_two_group();
        let rep = central_extension_representation(&g, Tolerance::default()).unwrap();
        (g, rep)
    }

    #[test]
    fn trivial_bundle_gives_constant_standard_bimodule() {
        let tol = Tolerance::default();
        let (g, rep) = setup();
        let m = mod_of_bundle(&PrincipalTwoBundle::trivial(&g, 3), &rep, tol).unwrap();
        let l2 = Bimodule::standard(&StarAlgebra::matrix(2));
        for x in 0..3 {
            assert_eq!(m.fibre(x), &l2);
        }
        assert!(check_bimodule_bundle(m.bimodules(), tol).is_ok());
    }

    #[test]
    fn fibres_have_dimension_four_and_transitions_are_right_multiplications() {
        let tol = Tolerance::default();
        let (g, rep) = setup();
        let p = PrincipalTwoBundle::trivial_with_anchor(&g, &[1, 0]).unwrap();
        let m = mod_of_bundle(&p, &rep, tol).unwrap();
        assert_eq!(m.points_over(0).count(), 4);
        for x in 0..2 {
            assert_eq!(m.fibre(x).dim(), 4);
            assert!(check_bimodule(m.fibre(x), tol).is_ok());
        }
        for q in 0..p.len() {
            assert!(m.trivialization(q).is_unitary(tol));
            for h in 0..4 {
                assert!(m.transition_residual(q, h) < 1e-12);
            }
        }
    }

    #[test]
    fn identity_morphism_is_identity() {
        let tol = Tolerance::default();
        let (g, rep) = setup();
        let p = PrincipalTwoBundle::trivial_with_anchor(&g, &[1, 1]).unwrap();
        let m = mod_of_bundle(&p, &rep, tol).unwrap();
        let id: Vec<usize> = (0..p.len()).collect();
        let maps = mod_of_morphism(&m, &m, &id, tol).unwrap();
        for u in &maps {
            assert!(max_abs(&(u.map() - CMatrix::identity(4, 4))) < 1e-14);
        }
    }

    #[test]
    fn deck_transformation_is_a_nontrivial_unitary_and_functorial() {
        let tol = Tolerance::default();
        let (g, rep) = setup();
        let p = PrincipalTwoBundle::trivial_with_anchor(&g, &[1, 0]).unwrap();
        let m = mod_of_bundle(&p, &rep, tol).unwrap();
        // left multiplication by the central element 2 on each fibre: an
        // automorphism of P that preserves anchors since t(2) = e
        let h = p.crossed().h();
        let shift = |k: usize| -> Vec<usize> {
            (0..p.len())
                .map(|q| (q / 4) * 4 + h.mul(k, q % 4))
                .collect()
        };
        let f = shift(2);
        let maps = mod_of_morphism(&m, &m, &f, tol).unwrap();
        for u in &maps {
            assert!(u.is_unitary(tol));
            assert!(
                max_abs(&(u.map() + CMatrix::identity(4, 4))) < 1e-12,
                "u_2 = -1"
            );
        }
        assert!(morphism_square_residual(&m, &m, &f, &maps) < 1e-12);
        // Mod(f∘f) = Mod(f)∘Mod(f)
        let ff: Vec<usize> = f.iter().map(|&q| f[q]).collect();
        let composite = mod_of_morphism(&m, &m, &ff, tol).unwrap();
        for x in 0..2 {
            let r = max_abs(&(composite[x].map() - maps[x].map() * maps[x].map()));
            assert!(r < 1e-12);
        }
        // a shift by 1 changes anchors and is refused
        assert!(matches!(
            mod_of_morphism(&m, &m, &shift(1), tol),
            Err(Error::AnchorMismatch(_))
        ));
    }

    #[test]
    fn monoidality_of_trivial_bundles_is_the_unitor() {
        let tol = Tolerance::default();
        let (g, rep) = setup();
        let p = PrincipalTwoBundle::trivial(&g, 2);
        let mono = mod_monoidality(&p, &p, &rep, tol).unwrap();
        let unitor = left_unitor(&Bimodule::standard(rep.l2().algebra()), tol).unwrap();
        for u in &mono.maps {
            assert!(max_abs(&(u.map() - unitor.map())) < 1e-12);
        }
    }

    #[test]
    fn monoidality_is_section_independent_and_multiplies_anchors() {
        let tol = Tolerance::default();
        let (g, rep) = setup();
        let p = PrincipalTwoBundle::trivial_with_anchor(&g, &[1, 0, 1]).unwrap();
        let q = PrincipalTwoBundle::trivial_with_anchor(&g, &[1, 1, 0]).unwrap();
        let mono = mod_monoidality(&p, &q, &rep, tol).unwrap();
        assert!(mono.section_spread < 1e-9, "{}", mono.section_spread);
        for x in 0..3 {
            let b = mono.left.base_point(x);
            let c = mono.right.base_point(x);
            let bc = mono.tensor.class(b, c).unwrap();
            let g0 = g.g0();
            assert_eq!(
                mono.product.bundle().anchor(bc),
                g0.mul(p.anchor(b), q.anchor(c))
            );
            assert!(mono.maps[x].is_unitary(tol));
        }
    }
}
