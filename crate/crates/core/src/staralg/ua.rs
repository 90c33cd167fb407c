use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::algebra::{Automorphism, StarAlgebra};
use super::nelement::{canonical_implementation, NElement};
use super::standard::StandardBimodule;
use crate::error::{Error, Result};
use crate::numerics::{CMatrix, Tolerance};
use crate::twogroup::{FiniteGroup, TwoGroup};

/// Largest carrier the closure helper will enumerate before giving up.
pub const MAX_CARRIER: usize = 256;

/// Approximate lookup of matrices: a hash on rounded entries with a linear
/// fallback for values that land on a rounding boundary.
#[derive(Debug, Clone, Default)]
struct MatrixIndex {
    keys: BTreeMap<Vec<i64>, usize>,
    items: Vec<CMatrix>,
}

impl MatrixIndex {
    fn key(m: &CMatrix) -> Vec<i64> {
        m.iter()
            .flat_map(|z| {
                [
                    libm::round(z.re * 1e6) as i64,
                    libm::round(z.im * 1e6) as i64,
                ]
            })
            .collect()
    }

    fn find(&self, m: &CMatrix, tol: Tolerance) -> Option<usize> {
        if let Some(&i) = self.keys.get(&Self::key(m)) {
            if crate::numerics::max_abs_diff(&self.items[i], m).is_ok_and(|r| r <= tol.eps()) {
                return Some(i);
            }
        }
        self.items
            .iter()
            .position(|x| crate::numerics::max_abs_diff(x, m).is_ok_and(|r| r <= tol.eps()))
    }

    fn insert(&mut self, m: CMatrix) -> usize {
        let i = self.items.len();
        self.keys.insert(Self::key(&m), i);
        self.items.push(m);
        i
    }
}

/// A finite sub-2-group of `𝒰(A)`: objects are automorphisms, morphisms are
/// elements of `N(A)`, `s`/`t` read off the implemented automorphisms and `i`
/// is the canonical implementation.
#[derive(Debug, Clone)]
pub struct UnitaryTwoGroup {
    l2: StandardBimodule,
    objects: Vec<Automorphism>,
    morphisms: Vec<NElement>,
    two_group: TwoGroup,
}

impl UnitaryTwoGroup {
    pub fn l2(&self) -> &StandardBimodule {
        &self.l2
    }

    pub fn algebra(&self) -> &StarAlgebra {
        self.l2.algebra()
    }

    pub fn objects(&self) -> &[Automorphism] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[NElement] {
        &self.morphisms
    }

    pub fn two_group(&self) -> &TwoGroup {
        &self.two_group
    }

    pub fn object(&self, g: usize) -> &Automorphism {
        &self.objects[g]
    }

    pub fn morphism(&self, x: usize) -> &NElement {
        &self.morphisms[x]
    }

    pub fn find_morphism(&self, n: &NElement, tol: Tolerance) -> Option<usize> {
        self.morphisms.iter().position(|m| m.approx_eq(n, tol))
    }
}

/// Assembles the finite 2-group on the given carriers, failing with a closure
/// error that names the first product, source, target or unit that leaves
/// them.
pub fn build_ua(
    alg: &StarAlgebra,
    objects: Vec<Automorphism>,
    morphisms: Vec<NElement>,
    tol: Tolerance,
) -> Result<UnitaryTwoGroup> {
    let l2 = StandardBimodule::new(alg);
    if objects.is_empty() || morphisms.is_empty() {
        return Err(Error::InvalidInput("carriers must be non-empty".into()));
    }
    for (g, theta) in objects.iter().enumerate() {
        let report = theta.check(alg, tol);
        if !report.is_ok() {
            return Err(Error::invalid(
                "carrier automorphism",
                prefixed(format!("object {g}"), report),
            ));
        }
    }
    for (x, n) in morphisms.iter().enumerate() {
        let report = n.check(&l2, tol);
        if !report.is_ok() {
            return Err(Error::invalid(
                "carrier N(A) element",
                prefixed(format!("morphism {x}"), report),
            ));
        }
    }
    let mut obj_index = MatrixIndex::default();
    for theta in &objects {
        obj_index.insert(theta.matrix().clone());
    }
    let mut mor_index = MatrixIndex::default();
    for n in &morphisms {
        mor_index.insert(n.unitary().clone());
    }
    let n0 = objects.len();
    let mut mul0 = alloc::vec![0; n0 * n0];
    for a in 0..n0 {
        for b in 0..n0 {
            mul0[a * n0 + b] = obj_index
                .find(objects[a].compose(&objects[b]).matrix(), tol)
                .ok_or_else(|| {
                    Error::Closure(format!("object product {a}·{b} is not in the carrier"))
                })?;
        }
    }
    let n1 = morphisms.len();
    let mut mul1 = alloc::vec![0; n1 * n1];
    for x in 0..n1 {
        for y in 0..n1 {
            let prod = morphisms[x].unitary() * morphisms[y].unitary();
            mul1[x * n1 + y] = mor_index.find(&prod, tol).ok_or_else(|| {
                Error::Closure(format!("morphism product {x}·{y} is not in the carrier"))
            })?;
        }
    }
    let mut s = Vec::with_capacity(n1);
    let mut t = Vec::with_capacity(n1);
    for (x, n) in morphisms.iter().enumerate() {
        s.push(
            obj_index
                .find(n.source().matrix(), tol)
                .ok_or_else(|| Error::Closure(format!("s(morphism {x}) is not in the carrier")))?,
        );
        t.push(
            obj_index
                .find(n.target().matrix(), tol)
                .ok_or_else(|| Error::Closure(format!("t(morphism {x}) is not in the carrier")))?,
        );
    }
    let mut i = Vec::with_capacity(n0);
    for (g, theta) in objects.iter().enumerate() {
        let unit = canonical_implementation(&l2, theta, tol)?;
        i.push(
            mor_index
                .find(unit.unitary(), tol)
                .ok_or_else(|| Error::Closure(format!("carrier is missing i(object {g})")))?,
        );
    }
    let g0 = FiniteGroup::from_table(n0, mul0)?;
    let g1 = FiniteGroup::from_table(n1, mul1)?;
    let two_group = TwoGroup::new(g0, g1, s, t, i)?;
    Ok(UnitaryTwoGroup {
        l2,
        objects,
        morphisms,
        two_group,
    })
}

fn prefixed(prefix: alloc::string::String, report: crate::Report) -> crate::Report {
    let mut out = crate::Report::new();
    out.extend_prefixed(&prefix, report);
    out
}

/// Closes the generators under products (adding `i` of every object
/// generator) and builds the resulting sub-2-group. The identities come
/// first in both carriers.
pub fn generate_ua(
    alg: &StarAlgebra,
    object_gens: &[Automorphism],
    morphism_gens: &[NElement],
    tol: Tolerance,
) -> Result<UnitaryTwoGroup> {
    let l2 = StandardBimodule::new(alg);
    let mut gens: Vec<NElement> = morphism_gens.to_vec();
    for theta in object_gens {
        gens.push(canonical_implementation(&l2, theta, tol)?);
    }
    let mut obj_gens: Vec<Automorphism> = object_gens.to_vec();
    for n in morphism_gens {
        obj_gens.push(n.source().clone());
        obj_gens.push(n.target().clone());
    }
    let objects = close(
        Automorphism::identity(alg),
        &obj_gens,
        |a, b| a.compose(b),
        |a| a.matrix().clone(),
        tol,
    )?;
    let morphisms = close(
        NElement::identity(&l2),
        &gens,
        |a, b| a.product(b),
        |a| a.unitary().clone(),
        tol,
    )?;
    build_ua(alg, objects, morphisms, tol)
}

fn close<T: Clone>(
    id: T,
    gens: &[T],
    mul: impl Fn(&T, &T) -> T,
    key: impl Fn(&T) -> CMatrix,
    tol: Tolerance,
) -> Result<Vec<T>> {
    let mut index = MatrixIndex::default();
    index.insert(key(&id));
    let mut items = alloc::vec![id];
    let mut frontier = 0;
    while frontier < items.len() {
        let x = items[frontier].clone();
        frontier += 1;
        for g in gens {
            let y = mul(&x, g);
            if index.find(&key(&y), tol).is_none() {
                if items.len() == MAX_CARRIER {
                    return Err(Error::Closure(format!(
                        "generated carrier exceeds {MAX_CARRIER} elements"
                    )));
                }
                index.insert(key(&y));
                items.push(y);
            }
        }
    }
    Ok(items)
}
