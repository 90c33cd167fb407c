//! Curated finite sub-2-groups of `𝒰(A)` and the central-extension
//! representation used throughout the tests and demos.

use alloc::vec;
use alloc::vec::Vec;

use super::algebra::{AlgebraElement, Automorphism, StarAlgebra};
use super::nelement::NElement;
use super::representation::Representation;
use super::standard::StandardBimodule;
use super::ua::{generate_ua, UnitaryTwoGroup};
use crate::error::Result;
use crate::numerics::{c, from_rows, CMatrix, Tolerance};
use crate::twogroup::{two_group_from_crossed_module, CrossedModule, TwoGroup};

pub fn sigma_x() -> CMatrix {
    from_rows(&[&[c(0., 0.), c(1., 0.)], &[c(1., 0.), c(0., 0.)]])
}

pub fn sigma_z() -> CMatrix {
    from_rows(&[&[c(1., 0.), c(0., 0.)], &[c(0., 0.), c(-1., 0.)]])
}

/// Cyclic shift `e_j ↦ e_{j+1}` on `ℂ³`.
pub fn shift3() -> CMatrix {
    CMatrix::from_fn(3, 3, |i, j| c(((i + 2) % 3 == j) as u8 as f64, 0.0))
}

fn omega() -> crate::C64 {
    let a = 2.0 * core::f64::consts::PI / 3.0;
    c(libm::cos(a), libm::sin(a))
}

fn two_sided(l2: &StandardBimodule, u: &AlgebraElement, tol: Tolerance) -> Result<Vec<NElement>> {
    Ok(vec![
        NElement::left_unitary(l2, u, tol)?,
        NElement::right_unitary(l2, u, tol)?,
    ])
}

/// `A = M₂`, objects `{id, Ad σx}`, morphisms generated by `ξ ↦ σx ξ`,
/// `ξ ↦ ξ σx` and `−1`. Eight morphisms.
pub fn m2_sigma_x(tol: Tolerance) -> Result<UnitaryTwoGroup> {
    let alg = StarAlgebra::matrix(2);
    let l2 = StandardBimodule::new(&alg);
    let x = alg.element(vec![sigma_x()])?;
    let mut gens = two_sided(&l2, &x, tol)?;
    gens.push(NElement::phase(&l2, c(-1.0, 0.0)));
    generate_ua(&alg, &[], &gens, tol)
}

/// `A = M₂`, objects the Klein group `{Ad 1, Ad σx, Ad σz, Ad σxσz}`,
/// morphisms generated by left and right multiplication by `σx`, `σz`.
/// Thirty-two morphisms.
pub fn m2_pauli(tol: Tolerance) -> Result<UnitaryTwoGroup> {
    let alg = StarAlgebra::matrix(2);
    let l2 = StandardBimodule::new(&alg);
    let mut gens = two_sided(&l2, &alg.element(vec![sigma_x()])?, tol)?;
    gens.extend(two_sided(&l2, &alg.element(vec![sigma_z()])?, tol)?);
    generate_ua(&alg, &[], &gens, tol)
}

/// `A = M₃`, objects `{Ad Xᵏ}` for the cyclic shift `X`, morphisms generated
/// by left and right multiplication by `X` and the phase `ω = e^{2πi/3}`.
/// Twenty-seven morphisms.
pub fn m3_shift(tol: Tolerance) -> Result<UnitaryTwoGroup> {
    let alg = StarAlgebra::matrix(3);
    let l2 = StandardBimodule::new(&alg);
    let mut gens = two_sided(&l2, &alg.element(vec![shift3()])?, tol)?;
    gens.push(NElement::phase(&l2, omega()));
    generate_ua(&alg, &[], &gens, tol)
}

/// `A = M₂ ⊕ M₁`, objects `{id, Ad(σx ⊕ 1)}`, morphisms generated by left and
/// right multiplication by `σx ⊕ 1` and by the central unitary `1 ⊕ −1`.
/// Eight morphisms.
pub fn m2_plus_m1(tol: Tolerance) -> Result<UnitaryTwoGroup> {
    let alg = StarAlgebra::new(vec![2, 1], None)?;
    let l2 = StandardBimodule::new(&alg);
    let one = CMatrix::identity(1, 1);
    let flip = alg.element(vec![sigma_x(), one.clone()])?;
    let central = alg.element(vec![CMatrix::identity(2, 2), -one])?;
    let mut gens = two_sided(&l2, &flip, tol)?;
    gens.push(NElement::left_unitary(&l2, &central, tol)?);
    generate_ua(&alg, &[], &gens, tol)
}

/// Every curated carrier, labelled.
pub fn shipped_carriers(tol: Tolerance) -> Result<Vec<(&'static str, UnitaryTwoGroup)>> {
    Ok(vec![
        ("M2 sigma_x", m2_sigma_x(tol)?),
        ("M2 Pauli", m2_pauli(tol)?),
        ("M3 shift", m3_shift(tol)?),
        ("M2+M1", m2_plus_m1(tol)?),
    ])
}

/// The 2-group of the central extension `t: ℤ/4 → ℤ/2` (reduction, trivial
/// action).
pub fn central_extension_two_group() -> TwoGroup {
    two_group_from_crossed_module(&CrossedModule::cyclic_reduction(4, 2).expect("2 divides 4"))
        .expect("central extensions are crossed modules")
}

/// Its representation on `M₂`: `R0(1) = Ad σx`, and the generator of `ℤ/4`
/// acts by `ξ ↦ iσx ξ`. Since `(iσx)² = −1`, the kernel `ℤ/2 ⊂ ℤ/4` of `t`
/// acts by the scalar `−1`.
pub fn central_extension_representation(g: &TwoGroup, tol: Tolerance) -> Result<Representation> {
    let alg = StarAlgebra::matrix(2);
    let l2 = StandardBimodule::new(&alg);
    let x = alg.element(vec![sigma_x()])?;
    let r0 = vec![
        Automorphism::identity(&alg),
        Automorphism::inner(&alg, &x, tol)?,
    ];
    let gen = x.scale(c(0.0, 1.0));
    let mut u = vec![alg.unit()];
    for k in 1..g.kernel().len() {
        u.push(u[k - 1].mul(&gen));
    }
    // Kernel indices follow ℤ/4 addition, so the k-th power is u_k.
    Representation::from_crossed_data(g, &l2, r0, &u, tol)
}
