//! The acceptance suite: eight criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the summary is always printed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use gerbel_core::assoc::{
    associate, check_refinement, check_two_vector_bundle, mod_monoidality, mod_of_bundle,
    pullback_refinement, Refinement, TwoVectorBundle,
};
use gerbel_core::bundle::{
    associator, check_bundle_map, check_principal_two_bundle, left_unitor, psi, right_unitor,
    tensor, Cover, PrincipalBundle, PrincipalTwoBundle,
};
use gerbel_core::fusion::{
    chi, chi_associativity_residual, functor_t, fuse, left_unitor as fusion_left_unitor,
    naturality_residual, right_unitor as fusion_right_unitor, twisted_fusion, Bimodule,
    TwistedFusion,
};
use gerbel_core::gerbe::{
    central_extension_gerbe, check_gerbe, extend_gerbe, pullback_gerbe, BundleGerbe,
};
use gerbel_core::numerics::{c, max_abs, unitarity_residual};
use gerbel_core::staralg::carriers::{
    central_extension_representation, central_extension_two_group, shipped_carriers, sigma_x,
    sigma_z,
};
use gerbel_core::staralg::{
    canonical_implementation, check_standard_identities, compose_in_ua, generate_ua, source_target,
    Automorphism, NElement, Representation, StarAlgebra, UnitaryTwoGroup,
};
use gerbel_core::twogroup::{
    check_crossed_module, check_round_trip, two_group_from_crossed_module, verify_calculus,
    CrossedModule, FiniteGroup, TwoGroup, TwoGroupHom,
};
use gerbel_core::{CMatrix, Report, Tolerance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ensure_ok(report: &Report, what: &str) -> Result<(), String> {
    match report.violations.first() {
        None => Ok(()),
        Some(v) => Err(format!(
            "{what}: {} violation(s), first {} at {} ({:.3e})",
            report.violations.len(),
            v.equation,
            v.location,
            v.residual
        )),
    }
}

fn tol() -> Tolerance {
    Tolerance::new(1e-9).unwrap()
}

fn s3_inner() -> TwoGroup {
    two_group_from_crossed_module(&CrossedModule::inner(FiniteGroup::symmetric(3))).unwrap()
}

fn z2_inner() -> TwoGroup {
    two_group_from_crossed_module(&CrossedModule::inner(FiniteGroup::cyclic(2))).unwrap()
}

fn carriers() -> Vec<(&'static str, UnitaryTwoGroup)> {
    shipped_carriers(tol()).unwrap()
}

// ---------------------------------------------------------------------------
// 1. 2-group calculus

fn shipped_two_groups() -> Vec<(String, TwoGroup)> {
    let mut out: Vec<(String, TwoGroup)> = vec![
        ("Z/4 -> Z/2".into(), central_extension_two_group()),
        ("S3 inner".into(), s3_inner()),
        (
            "S3 discrete".into(),
            two_group_from_crossed_module(&CrossedModule::discrete(FiniteGroup::symmetric(3)))
                .unwrap(),
        ),
        ("Z/2 inner".into(), z2_inner()),
        (
            "Z/8 -> Z/4".into(),
            two_group_from_crossed_module(&CrossedModule::cyclic_reduction(8, 4).unwrap()).unwrap(),
        ),
        (
            "Z/64 -> Z/4".into(),
            two_group_from_crossed_module(&CrossedModule::cyclic_reduction(64, 4).unwrap())
                .unwrap(),
        ),
        (
            "Z/16 inner".into(),
            two_group_from_crossed_module(&CrossedModule::inner(FiniteGroup::cyclic(16))).unwrap(),
        ),
    ];
    for (name, carrier) in carriers() {
        out.push((format!("U({name})"), carrier.two_group().clone()));
    }
    out
}

fn criterion_1() -> Outcome {
    let groups = shipped_two_groups();
    let mut largest = 0;
    for (name, g) in &groups {
        let n1 = g.g1().order();
        if n1 > 256 {
            continue;
        }
        largest = largest.max(n1);
        ensure_ok(&check_crossed_module(g.crossed()), name)?;
        ensure_ok(&verify_calculus(g), name)?;
        ensure_ok(&check_round_trip(g), name)?;
        let g1 = g.g1();
        let e = g.g0().id();
        for x in g1.elements().filter(|&x| g.s(x) == e) {
            for y in g1.elements().filter(|&y| g.t(y) == e) {
                ensure(g1.commute(x, y), || {
                    format!("{name}: ker s and ker t commute at ({x}, {y})")
                })?;
            }
        }
    }
    Ok(format!(
        "{} 2-groups, largest |G1| = {largest}",
        groups.len()
    ))
}

// ---------------------------------------------------------------------------
// 2. Standard bimodule identities

fn criterion_2() -> Outcome {
    let tol = tol();
    let mut elements = 0;
    for (name, carrier) in carriers() {
        let l2 = carrier.l2();
        ensure_ok(&check_standard_identities(l2, tol), name)?;
        for n in carrier.morphisms() {
            let (t, s) = source_target(l2, n.unitary(), tol).map_err(|e| format!("{name}: {e}"))?;
            ensure(
                t.approx_eq(n.target(), tol) && s.approx_eq(n.source(), tol),
                || format!("{name}: source/target recovered from U"),
            )?;
            let (tj, sj) = source_target(l2, &l2.conjugate_by_j(n.unitary()), tol)
                .map_err(|e| format!("{name}: {e}"))?;
            ensure(sj.approx_eq(&t, tol) && tj.approx_eq(&s, tol), || {
                format!("{name}: t(U) = s(JUJ)")
            })?;
            elements += 1;
        }
        let objects = carrier.objects();
        for a in objects {
            let la = canonical_implementation(l2, a, tol).map_err(|e| format!("{name}: {e}"))?;
            ensure(
                la.target().approx_eq(a, tol) && la.source().approx_eq(a, tol),
                || format!("{name}: s(L2(theta)) = t(L2(theta)) = theta"),
            )?;
            for b in objects {
                let lb = canonical_implementation(l2, b, tol).unwrap();
                let lab = canonical_implementation(l2, &a.compose(b), tol).unwrap();
                let res = max_abs(&(lab.unitary() - la.unitary() * lb.unitary()));
                ensure(res <= tol.eps(), || {
                    format!("{name}: L2(ab) = L2(a) L2(b), residual {res:.3e}")
                })?;
            }
        }
    }
    Ok(format!("{elements} carrier elements on M2, M3, M2+M1"))
}

// ---------------------------------------------------------------------------
// 3. Fusion engine

fn object_index(carrier: &UnitaryTwoGroup, theta: &Automorphism) -> usize {
    carrier
        .objects()
        .iter()
        .position(|o| o.approx_eq(theta, tol()))
        .expect("carrier objects are closed under composition")
}

fn criterion_3() -> Outcome {
    let tol = tol();
    let mut squares = 0;
    let mut worst = 0.0f64;
    for (name, carrier) in carriers() {
        let alg = carrier.algebra();
        let std = Bimodule::standard(alg);
        let d = fuse(&std, &std, tol)
            .map_err(|e| format!("{name}: {e}"))?
            .dim();
        ensure(d == alg.dim(), || {
            format!("{name}: dim L2 ⊠ L2 = {d}, expected {}", alg.dim())
        })?;

        let objects = carrier.objects();
        let n = objects.len();
        let id = Automorphism::identity(alg);
        let mut fusions: Vec<Option<TwistedFusion>> = (0..n * n).map(|_| None).collect();
        for i in 0..n {
            for j in 0..n {
                let tf = twisted_fusion(alg, &objects[i], &objects[j], tol)
                    .map_err(|e| format!("{name}: {e}"))?;
                let u = unitarity_residual(tf.chi.map());
                worst = worst.max(u);
                ensure(u <= tol.eps(), || {
                    format!("{name}: chi unitary at ({i}, {j}), residual {u:.3e}")
                })?;
                ensure_ok(&tf.chi.check(tol), name)?;
                fusions[i * n + j] = Some(tf);
            }
            let theta = &objects[i];
            let lam = fusion_left_unitor(&Bimodule::twisted(alg, theta), tol).unwrap();
            let res = max_abs(&(chi(alg, &id, theta, tol).unwrap().map() - lam.map()));
            ensure(res <= tol.eps(), || {
                format!("{name}: chi(id, theta) is the left unitor, {res:.3e}")
            })?;
            let rho = fusion_right_unitor(&Bimodule::twisted(alg, theta), tol).unwrap();
            let res = max_abs(&(chi(alg, theta, &id, tol).unwrap().map() - rho.map()));
            ensure(res <= tol.eps(), || {
                format!("{name}: chi(theta, id) is the right unitor, {res:.3e}")
            })?;
        }
        for a in objects {
            for b in objects {
                for c3 in objects {
                    let r = chi_associativity_residual(alg, a, b, c3, tol)
                        .map_err(|e| format!("{name}: {e}"))?;
                    worst = worst.max(r);
                    ensure(r <= tol.eps(), || {
                        format!("{name}: chi associativity residual {r:.3e}")
                    })?;
                }
            }
        }
        // U₁ implements (id, β) and U₂ implements (φ, γ); the square then
        // runs from (θ₁, θ₂) to (βθ₁φ⁻¹, γθ₂).
        let left_trivial: Vec<&NElement> = carrier
            .morphisms()
            .iter()
            .filter(|u| u.target().approx_eq(&id, tol))
            .collect();
        for u2 in carrier.morphisms() {
            let phi = u2.target();
            let phi_inv = phi.inverse();
            for u1 in &left_trivial {
                for i in 0..n {
                    let theta1b = u1.source().compose(&objects[i]).compose(&phi_inv);
                    let i2 = object_index(&carrier, &theta1b);
                    for j in 0..n {
                        let j2 = object_index(&carrier, &u2.source().compose(&objects[j]));
                        let src = fusions[i * n + j].as_ref().unwrap();
                        let dst = fusions[i2 * n + j2].as_ref().unwrap();
                        let r = naturality_residual(src, dst, phi, u1.unitary(), u2.unitary(), tol)
                            .map_err(|e| format!("{name}: naturality setup: {e}"))?;
                        worst = worst.max(r);
                        ensure(r <= tol.eps(), || {
                            format!("{name}: naturality residual {r:.3e}")
                        })?;
                        squares += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{squares} naturality squares, worst residual {worst:.1e}"
    ))
}

// ---------------------------------------------------------------------------
// 4. The functor T

fn criterion_4() -> Outcome {
    let tol = tol();
    let mut pairs = 0;
    let mut worst = 0.0f64;
    for (name, carrier) in carriers() {
        let l2 = carrier.l2();
        for theta in carrier.objects() {
            let canon = canonical_implementation(l2, theta, tol).unwrap();
            let t = functor_t(l2, &canon, tol).map_err(|e| format!("{name}: {e}"))?;
            let res = max_abs(&(t.map() - CMatrix::identity(l2.dim(), l2.dim())));
            ensure(res <= tol.eps(), || {
                format!("{name}: T(id) = id, residual {res:.3e}")
            })?;
        }
        let ts: Vec<_> = carrier
            .morphisms()
            .iter()
            .map(|u| functor_t(l2, u, tol))
            .collect::<Result<_, _>>()
            .map_err(|e| format!("{name}: {e}"))?;
        for t in &ts {
            ensure_ok(&t.check(tol), name)?;
        }
        let ms = carrier.morphisms();
        for (a, u) in ms.iter().enumerate() {
            for (b, v) in ms.iter().enumerate() {
                if !u.source().approx_eq(v.target(), tol) {
                    continue;
                }
                let uv = compose_in_ua(l2, u, v, tol).map_err(|e| format!("{name}: {e}"))?;
                let lhs = functor_t(l2, &uv, tol).unwrap();
                let rhs = ts[a].after(&ts[b]).map_err(|e| format!("{name}: {e}"))?;
                let res = max_abs(&(lhs.map() - rhs.map()));
                worst = worst.max(res);
                ensure(res <= tol.eps(), || {
                    format!("{name}: T(U∘V) = T(U)T(V), residual {res:.3e}")
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!(
        "{pairs} composable pairs, worst residual {worst:.1e}"
    ))
}

// ---------------------------------------------------------------------------
// 5. Principal 2-bundles

/// Trivial bundle over two points with the given anchors at the unit
/// section, and the fibre over point 1 relabelled through `h ↦ h·k`.
fn relabelled(g: &TwoGroup, anchors: &[usize], k: usize) -> PrincipalTwoBundle {
    let base = PrincipalTwoBundle::trivial_with_anchor(g, anchors).unwrap();
    let h = g.crossed().h();
    let n = h.order();
    let relabel: Vec<usize> = (0..base.len())
        .map(|p| if p / n == 1 { n + h.mul(p % n, k) } else { p })
        .collect();
    let mut inv = vec![0; relabel.len()];
    for (p, &q) in relabel.iter().enumerate() {
        inv[q] = p;
    }
    let action = (0..base.len() * n)
        .map(|j| relabel[base.act(inv[j / n], j % n)])
        .collect();
    let under = PrincipalBundle::new(
        h.clone(),
        2,
        base.underlying().proj_table().to_vec(),
        action,
    )
    .unwrap();
    let anchor = (0..base.len()).map(|q| base.anchor(inv[q])).collect();
    PrincipalTwoBundle::new(g.clone(), under, anchor).unwrap()
}

fn sign_of_s3() -> Vec<usize> {
    FiniteGroup::symmetric_elements(3)
        .iter()
        .map(|perm| {
            let inversions = (0..3)
                .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
                .filter(|&(i, j)| perm[i] > perm[j])
                .count();
            inversions % 2
        })
        .collect()
}

fn criterion_5() -> Outcome {
    let central = central_extension_two_group();
    let s3 = s3_inner();
    let z2 = z2_inner();
    let sign = sign_of_s3();
    let cases: Vec<(TwoGroup, Vec<PrincipalTwoBundle>, Vec<TwoGroupHom>)> = vec![
        (
            central.clone(),
            [[0, 0], [1, 0], [0, 1], [1, 1]]
                .iter()
                .flat_map(|a| (0..4).map(|k| relabelled(&central, a, k)))
                .collect(),
            vec![
                TwoGroupHom::identity(&central),
                TwoGroupHom::from_crossed(&central, &z2, &[0, 1], &[0, 1, 0, 1]).unwrap(),
            ],
        ),
        (
            s3.clone(),
            [[0, 0], [1, 3], [4, 2], [5, 5]]
                .iter()
                .flat_map(|a| [0, 2, 5].into_iter().map(|k| relabelled(&s3, a, k)))
                .collect(),
            vec![
                TwoGroupHom::identity(&s3),
                TwoGroupHom::from_crossed(&s3, &z2, &sign, &sign).unwrap(),
            ],
        ),
    ];
    let mut instances = 0;
    for (g, bundles, homs) in &cases {
        let cm = g.crossed();
        let (g0, h) = (cm.g(), cm.h());
        for p in bundles {
            ensure(p.len() <= 64, || "instance too large".into())?;
            ensure_ok(&check_principal_two_bundle(p), "bundle")?;
            let (t, map) = left_unitor(p).map_err(|e| e.to_string())?;
            ensure_ok(&check_bundle_map(&t.bundle, p, &map, true), "left unitor")?;
            let (t, map) = right_unitor(p).map_err(|e| e.to_string())?;
            ensure_ok(&check_bundle_map(&t.bundle, p, &map, true), "right unitor")?;
        }
        for p1 in bundles {
            for p2 in bundles {
                let t = tensor(p1, p2).map_err(|e| e.to_string())?;
                ensure_ok(&check_principal_two_bundle(&t.bundle), "tensor product")?;
                for a in 0..p1.len() {
                    for b in 0..p2.len() {
                        let Some(cl) = t.class(a, b) else { continue };
                        ensure(
                            t.bundle.anchor(cl) == g0.mul(p1.anchor(a), p2.anchor(b)),
                            || format!("anchor of [{a}, {b}] is the product of anchors"),
                        )?;
                        for x in h.elements() {
                            let moved = t.class(
                                p1.act(a, h.inv(x)),
                                p2.act(b, cm.alpha(g0.inv(p1.anchor(a)), x)),
                            );
                            ensure(moved == Some(cl), || {
                                format!("[p1 h^-1, p2 α(φ(p1)^-1, h)] = [p1, p2] at h={x}")
                            })?;
                        }
                    }
                }
                for f in homs {
                    let m = psi(p1, p2, f).map_err(|e| e.to_string())?;
                    ensure_ok(
                        &check_bundle_map(&m.source.bundle, &m.target.bundle, &m.map, true),
                        "psi",
                    )?;
                }
                instances += 1;
            }
        }
        for p1 in bundles.iter().step_by(2) {
            for p2 in bundles.iter().step_by(3) {
                for p3 in bundles.iter().step_by(2) {
                    let a = associator(p1, p2, p3).map_err(|e| e.to_string())?;
                    ensure_ok(
                        &check_bundle_map(&a.source.bundle, &a.target.bundle, &a.map, true),
                        "associator",
                    )?;
                    instances += 1;
                }
            }
        }
    }
    Ok(format!("{instances} tensor/associator instances"))
}

// ---------------------------------------------------------------------------
// 6. Gerbes

fn criterion_6() -> Outcome {
    let g = central_extension_two_group();
    let cover = Cover::new(2, vec![0, 0, 0, 1, 1, 1]).unwrap();
    let trivial = BundleGerbe::trivial(cover.clone(), &g);
    ensure_ok(&check_gerbe(&trivial), "trivial gerbe")?;
    ensure_ok(
        &check_gerbe(&BundleGerbe::trivial(cover, &s3_inner())),
        "trivial S3 gerbe",
    )?;
    let q = central_extension_gerbe(&g).map_err(|e| e.to_string())?;
    ensure_ok(&check_gerbe(&q), "central extension gerbe")?;
    let mut corruptions = 0;
    for gerbe in [&trivial, &q] {
        let n = gerbe.twogroup().crossed().h().order();
        for z in 0..gerbe.space().y3.len() {
            for x in 1..n {
                let bad = gerbe
                    .with_mu(z, gerbe.bundle().act(gerbe.mu_table()[z], x))
                    .unwrap();
                let report = check_gerbe(&bad);
                ensure(
                    report
                        .violations
                        .iter()
                        .any(|v| v.location.starts_with("Y^[4] point")),
                    || format!("corruption of mu at Y^[3] index {z} by h={x} not seen over Y^[4]"),
                )?;
                corruptions += 1;
            }
        }
    }
    Ok(format!(
        "{corruptions} single-point corruptions all detected over Y^[4]"
    ))
}

// ---------------------------------------------------------------------------
// 7. Associated construction

fn criterion_7() -> Outcome {
    let tol = tol();
    let g = central_extension_two_group();
    let rep = central_extension_representation(&g, tol).unwrap();
    let q = central_extension_gerbe(&g).unwrap();

    let mut spread = 0.0f64;
    let s = q.space();
    let mut pairs = vec![(s.pb23.bundle.clone(), s.pb12.bundle.clone())];
    for (a, k) in [([1, 0], 1), ([0, 1], 3), ([1, 1], 2)] {
        pairs.push((relabelled(&g, &a, k), relabelled(&g, &[1, 1], 1)));
    }
    for (p, pq) in &pairs {
        let m = mod_monoidality(p, pq, &rep, tol).map_err(|e| e.to_string())?;
        spread = spread.max(m.section_spread);
    }
    ensure(spread <= tol.eps(), || {
        format!("section spread {spread:.3e}")
    })?;

    let v = associate(&q, &rep, tol).map_err(|e| e.to_string())?;
    ensure_ok(&check_two_vector_bundle(&v, tol), "associate")?;
    let d = rep.l2().dim();
    ensure(v.bimodules().fibres().iter().all(|h| h.dim() == d), || {
        "fibre dimension".into()
    })?;

    let double = double_quotient(&g, &rep, &q)?;
    Ok(format!(
        "section spread {spread:.1e} over {} bundle pairs, fibre dim {d}, {}",
        pairs.len(),
        double
    ))
}

/// Extends along `R` into the carrier it generates and compares
/// `Mod` for the tautological representation with the single quotient.
fn double_quotient(g: &TwoGroup, rep: &Representation, q: &BundleGerbe) -> Outcome {
    let tol = tol();
    let alg = rep.l2().algebra().clone();
    let gens: Vec<NElement> = g.g1().elements().map(|x| rep.r1(x).clone()).collect();
    let carrier = generate_ua(&alg, &[], &gens, tol).map_err(|e| e.to_string())?;
    let f0: Vec<usize> = g
        .g0()
        .elements()
        .map(|a| object_index(&carrier, rep.r0(a)))
        .collect();
    let f1: Vec<usize> = gens
        .iter()
        .map(|n| carrier.find_morphism(n, tol).unwrap())
        .collect();
    let f = TwoGroupHom::new(g.clone(), carrier.two_group().clone(), f0, f1)
        .map_err(|e| e.to_string())?;
    let ext = extend_gerbe(q, &f).map_err(|e| e.to_string())?;
    let taut = Representation::tautological(&carrier);
    let single = associate(q, rep, tol).map_err(|e| e.to_string())?;
    let double = associate(&ext.gerbe, &taut, tol).map_err(|e| e.to_string())?;
    ensure_ok(&check_two_vector_bundle(&double, tol), "double quotient")?;
    let m_single = mod_of_bundle(q.bundle(), rep, tol).map_err(|e| e.to_string())?;
    let m_double = mod_of_bundle(ext.gerbe.bundle(), &taut, tol).map_err(|e| e.to_string())?;
    let e = carrier.two_group().crossed().h().id();
    let u = (0..single.y2().len())
        .map(|w| m_double.coordinates(ext.extension.extension.class(m_single.base_point(w), e)))
        .collect();
    let n = single.cover().total().len;
    let r = Refinement {
        rho: (0..n).collect(),
        phi: vec![Automorphism::identity(&alg); n],
        u,
    };
    ensure_ok(
        &check_refinement(&r, &single, &double, tol),
        "double ≅ single",
    )?;
    Ok(format!(
        "double ≅ single quotient through a |G1| = {} carrier",
        carrier.two_group().g1().order()
    ))
}

// ---------------------------------------------------------------------------
// 8. Refinements

fn random_unitary(rng: &mut ChaCha8Rng) -> CMatrix {
    let (a, b, cc): (f64, f64, f64) = (
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    );
    let norm = (a * a + b * b + cc * cc).sqrt().max(1e-3);
    let angle: f64 = rng.gen_range(0.3..2.8);
    let sy = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
    let axis =
        (sigma_x() * c(a / norm, 0.0)) + (sy * c(b / norm, 0.0)) + (sigma_z() * c(cc / norm, 0.0));
    CMatrix::identity(2, 2) * c(angle.cos(), 0.0) + axis * c(0.0, angle.sin())
}

fn is_located(report: &Report) -> bool {
    !report.is_ok()
        && report
            .violations
            .iter()
            .all(|v| v.location.contains("point (") || v.location.starts_with("y="))
}

fn criterion_8() -> Outcome {
    let tol = tol();
    let g = central_extension_two_group();
    let rep = central_extension_representation(&g, tol).unwrap();
    let q = central_extension_gerbe(&g).unwrap();
    let v = associate(&q, &rep, tol).map_err(|e| e.to_string())?;

    let fine = Cover::new(2, vec![0, 1, 0, 1, 0]).unwrap();
    let rho = [2, 5, 0, 3, 2];
    let pulled = pullback_gerbe(&q, fine, &rho).map_err(|e| e.to_string())?;
    let v_fine = associate(&pulled.gerbe, &rep, tol).map_err(|e| e.to_string())?;

    let m2 = StarAlgebra::matrix(2);
    let shipped: Vec<(&str, TwoVectorBundle)> = vec![
        ("associate(Q, R)", v.clone()),
        ("associate(rho*Q, R)", v_fine.clone()),
        (
            "trivial M2",
            TwoVectorBundle::trivial(q.cover().clone(), &m2),
        ),
        (
            "trivial M3",
            TwoVectorBundle::trivial(q.cover().clone(), &StarAlgebra::matrix(3)),
        ),
        (
            "trivial M2+M1",
            TwoVectorBundle::trivial(
                q.cover().clone(),
                &StarAlgebra::new(vec![2, 1], None).unwrap(),
            ),
        ),
    ];
    for (name, w) in &shipped {
        ensure_ok(&check_two_vector_bundle(w, tol), name)?;
        ensure_ok(&check_refinement(&Refinement::identity(w), w, w, tol), name)?;
    }

    let r = pullback_refinement(&q, &pulled, &rho, &rep, tol).map_err(|e| e.to_string())?;
    ensure_ok(&check_refinement(&r, &v_fine, &v, tol), "cover refinement")?;

    let mut rng = ChaCha8Rng::seed_from_u64(0x6765_7262);
    let mut kinds = [0usize; 3];
    for trial in 0..20 {
        let kind = rng.gen_range(0..3);
        kinds[kind] += 1;
        let (mut bad, mut source) = (r.clone(), v_fine.clone());
        let what = match kind {
            0 => {
                let w = rng.gen_range(0..bad.u.len());
                let angle: f64 = rng.gen_range(0.3..6.0);
                bad.u[w] *= c(angle.cos(), angle.sin());
                format!("u at Y^[2] index {w}")
            }
            1 => {
                let y = rng.gen_range(0..bad.phi.len());
                let unitary = m2.element(vec![random_unitary(&mut rng)]).unwrap();
                bad.phi[y] = Automorphism::inner(&m2, &unitary, tol).unwrap();
                format!("phi at y={y}")
            }
            _ => {
                let z = rng.gen_range(0..source.y3().len());
                let angle: f64 = rng.gen_range(0.3..6.0);
                source = source
                    .with_mu(z, source.mu(z) * c(angle.cos(), angle.sin()))
                    .unwrap();
                format!("mu at Y^[3] index {z}")
            }
        };
        let report = check_refinement(&bad, &source, &v, tol);
        ensure(is_located(&report), || {
            format!("trial {trial}: corruption of {what} not rejected with a location")
        })?;
    }
    Ok(format!(
        "{} shipped bundles, cover refinement, 20 corruptions (u: {}, phi: {}, mu: {}) rejected",
        shipped.len(),
        kinds[0],
        kinds[1],
        kinds[2]
    ))
}

// ---------------------------------------------------------------------------

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);
    let criteria: [Criterion; 8] = [
        (
            "2-group calculus",
            criterion_1,
            Some(Duration::from_secs(5)),
        ),
        (
            "standard bimodule identities",
            criterion_2,
            Some(Duration::from_secs(5)),
        ),
        ("fusion engine", criterion_3, Some(Duration::from_secs(10))),
        ("functor T", criterion_4, None),
        (
            "principal 2-bundles",
            criterion_5,
            Some(Duration::from_secs(10)),
        ),
        ("gerbes", criterion_6, None),
        ("associated construction", criterion_7, None),
        ("refinement verifier", criterion_8, None),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let start = Instant::now();
    let mut failures = 0;
    for (k, (name, run, limit)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = t0.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(limit)) if elapsed > *limit => {
                Err(format!("took {elapsed:.2?}, limit {limit:?}"))
            }
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("criterion {} PASS [{elapsed:.2?}] {name}: {detail}", k + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {} FAIL [{elapsed:.2?}] {name}: {why}", k + 1);
            }
        }
    }
    let total = start.elapsed();
    if total > Duration::from_secs(60) {
        failures += 1;
        println!("suite FAIL: took {total:.2?}, limit 60s");
    } else {
        println!("suite finished in {total:.2?}");
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
