use alloc::vec::Vec;

use super::*;
use crate::bundle::Cover;
use crate::gerbe::{
    central_extension_gerbe, check_gerbe, extend_gerbe, pullback_gerbe, BundleGerbe,
};
use crate::numerics::{c, max_abs, Tolerance};
use crate::staralg::carriers::{
    central_extension_representation, central_extension_two_group, sigma_z,
};
use crate::staralg::{
    generate_ua, Automorphism, NElement, Representation, StandardBimodule, StarAlgebra,
};
use crate::twogroup::{TwoGroup, TwoGroupHom};

fn central() -> (TwoGroup, Representation, BundleGerbe) {
    let g = central_extension_two_group();
    let rep = central_extension_representation(&g, Tolerance::default()).unwrap();
    let q = central_extension_gerbe(&g).unwrap();
    (g, rep, q)
}

#[test]
fn trivial_gerbe_gives_trivial_two_vector_bundle() {
    let tol = Tolerance::default();
    let g = central_extension_two_group();
    let l2 = StandardBimodule::new(&StarAlgebra::matrix(2));
    let cover = Cover::new(2, alloc::vec![0, 0, 1]).unwrap();
    let q = BundleGerbe::trivial(cover.clone(), &g);
    let v = associate(&q, &Representation::trivial(&g, &l2), tol).unwrap();
    let trivial = TwoVectorBundle::trivial(cover, l2.algebra());
    assert!(check_two_vector_bundle(&trivial, tol).is_ok());
    assert!(check_two_vector_bundle(&v, tol).is_ok());
    assert_eq!(v.bimodules(), trivial.bimodules());
    for z in 0..v.y3().len() {
        assert!(max_abs(&(v.mu(z) - trivial.mu(z))) < 1e-12);
    }
}

#[test]
fn central_extension_associates_to_a_coherent_bundle() {
    let tol = Tolerance::default();
    let (_, rep, q) = central();
    let v = associate(&q, &rep, tol).unwrap();
    assert!(v.bimodules().fibres().iter().all(|h| h.dim() == 4));
    let report = check_two_vector_bundle(&v, tol);
    assert!(report.is_ok(), "{report:?}");
}

#[test]
fn corrupted_gerbe_product_breaks_coherence() {
    let tol = Tolerance::default();
    let (_, rep, q) = central();
    let z = 7;
    let bad = q.with_mu(z, q.bundle().act(q.mu_table()[z], 2)).unwrap();
    assert!(!check_gerbe(&bad).is_ok());
    let v = associate(&bad, &rep, tol).unwrap();
    let report = check_two_vector_bundle(&v, tol);
    assert!(!report.is_ok());
    assert!(report
        .violations
        .iter()
        .all(|v| v.location.starts_with("Y^[4] point")));
}

#[test]
fn negated_mu_is_reported_at_y4() {
    let tol = Tolerance::default();
    let cover = Cover::new(1, alloc::vec![0, 0]).unwrap();
    let v = TwoVectorBundle::trivial(cover, &StarAlgebra::matrix(2));
    let bad = v.with_mu(3, -v.mu(3)).unwrap();
    let report = check_two_vector_bundle(&bad, tol);
    assert!(!report.is_ok());
    assert!(report.violations[0].location.starts_with("Y^[4] point ("));
    // a non-unitary μ is caught before the square
    let bad = v.with_mu(3, v.mu(3) * c(2.0, 0.0)).unwrap();
    assert!(check_two_vector_bundle(&bad, tol).mentions("mu is unitary"));
}

#[test]
fn identity_and_pullback_refinements_pass() {
    let tol = Tolerance::default();
    let (_, rep, q) = central();
    let v = associate(&q, &rep, tol).unwrap();
    assert!(check_refinement(&Refinement::identity(&v), &v, &v, tol).is_ok());

    let cover = Cover::new(2, alloc::vec![0, 1, 0, 1, 0]).unwrap();
    let rho = [2, 5, 0, 3, 2];
    let pulled = pullback_gerbe(&q, cover, &rho).unwrap();
    let v2 = associate(&pulled.gerbe, &rep, tol).unwrap();
    let r = pullback_refinement(&q, &pulled, &rho, &rep, tol).unwrap();
    let report = check_refinement(&r, &v2, &v, tol);
    assert!(report.is_ok(), "{report:?}");

    // negate u at one point
    let mut bad = r.clone();
    bad.u[4] = -bad.u[4].clone();
    let report = check_refinement(&bad, &v2, &v, tol);
    assert!(report
        .violations
        .iter()
        .any(|v| v.location.starts_with("Y^[3] point")));

    // φ that is not intertwined by u
    let mut bad = r.clone();
    let alg = rep.l2().algebra();
    bad.phi[1] =
        Automorphism::inner(alg, &alg.element(alloc::vec![sigma_z()]).unwrap(), tol).unwrap();
    assert!(!check_refinement(&bad, &v2, &v, tol).is_ok());

    // ρ leaving its fibre
    let mut bad = r;
    bad.rho[0] = 3;
    assert!(check_refinement(&bad, &v2, &v, tol).mentions("pi'(rho(y)) = pi(y)"));
}

/// Extending along `R` to the carrier it lands in and then taking `Mod`
/// for the tautological representation agrees with the single quotient.
#[test]
fn single_quotient_matches_double_quotient() {
    let tol = Tolerance::default();
    let (g, rep, q) = central();
    let l2 = rep.l2().clone();
    let alg = l2.algebra().clone();
    let gens: Vec<NElement> = g.g1().elements().map(|x| rep.r1(x).clone()).collect();
    let carrier = generate_ua(&alg, &[], &gens, tol).unwrap();
    let f0: Vec<usize> = g
        .g0()
        .elements()
        .map(|a| {
            carrier
                .objects()
                .iter()
                .position(|o| o.approx_eq(rep.r0(a), tol))
                .unwrap()
        })
        .collect();
    let f1: Vec<usize> = gens
        .iter()
        .map(|n| carrier.find_morphism(n, tol).unwrap())
        .collect();
    let f = TwoGroupHom::new(g.clone(), carrier.two_group().clone(), f0, f1).unwrap();
    let ext = extend_gerbe(&q, &f).unwrap();
    let taut = Representation::tautological(&carrier);
    let single = associate(&q, &rep, tol).unwrap();
    let double = associate(&ext.gerbe, &taut, tol).unwrap();
    assert!(check_two_vector_bundle(&double, tol).is_ok());

    let m_single = mod_of_bundle(q.bundle(), &rep, tol).unwrap();
    let m_double = mod_of_bundle(ext.gerbe.bundle(), &taut, tol).unwrap();
    let e = carrier.two_group().crossed().h().id();
    let u = (0..single.y2().len())
        .map(|w| m_double.coordinates(ext.extension.extension.class(m_single.base_point(w), e)))
        .collect();
    let n = single.cover().total().len;
    let r = Refinement {
        rho: (0..n).collect(),
        phi: alloc::vec![Automorphism::identity(&alg); n],
        u,
    };
    let report = check_refinement(&r, &single, &double, tol);
    assert!(report.is_ok(), "{report:?}");
}
