use alloc::format;
use alloc::vec::Vec;

use super::algebra::{AlgebraElement, Automorphism};
use super::nelement::{canonical_implementation, compose_in_ua, NElement};
use super::standard::StandardBimodule;
use super::ua::UnitaryTwoGroup;
use crate::error::{Error, Result};
use crate::numerics::Tolerance;
use crate::report::Report;
use crate::twogroup::TwoGroup;

/// A unitary representation `(R0, R1)` of a finite 2-group on `A`: `R0` on
/// objects into `Aut(A)`, `R1` on morphisms into `N(A)`.
#[derive(Debug, Clone)]
pub struct Representation {
    l2: StandardBimodule,
    r0: Vec<Automorphism>,
    r1: Vec<NElement>,
}

impl Representation {
    /// Shape check only; see [`check_representation`].
    pub fn new(
        g: &TwoGroup,
        l2: &StandardBimodule,
        r0: Vec<Automorphism>,
        r1: Vec<NElement>,
    ) -> Result<Self> {
        if r0.len() != g.g0().order() {
            return Err(Error::dimension(g.g0().order(), r0.len()));
        }
        if r1.len() != g.g1().order() {
            return Err(Error::dimension(g.g1().order(), r1.len()));
        }
        Ok(Self {
            l2: l2.clone(),
            r0,
            r1,
        })
    }

    pub fn trivial(g: &TwoGroup, l2: &StandardBimodule) -> Self {
        Self {
            l2: l2.clone(),
            r0: alloc::vec![Automorphism::identity(l2.algebra()); g.g0().order()],
            r1: alloc::vec![NElement::identity(l2); g.g1().order()],
        }
    }

    /// From crossed-module data: `R0` on objects and a unitary `u_h` for each
    /// `h ∈ ker(s)` (crossed-module index), with
    /// `R1(h · i(g)) = L_{u_h} · L²(R0(g))`.
    pub fn from_crossed_data(
        g: &TwoGroup,
        l2: &StandardBimodule,
        r0: Vec<Automorphism>,
        u: &[AlgebraElement],
        tol: Tolerance,
    ) -> Result<Self> {
        if u.len() != g.kernel().len() {
            return Err(Error::dimension(g.kernel().len(), u.len()));
        }
        if r0.len() != g.g0().order() {
            return Err(Error::dimension(g.g0().order(), r0.len()));
        }
        let implemented: Vec<NElement> = r0
            .iter()
            .map(|theta| canonical_implementation(l2, theta, tol))
            .collect::<Result<_>>()?;
        let lefts: Vec<NElement> = u
            .iter()
            .map(|x| NElement::left_unitary(l2, x, tol))
            .collect::<Result<_>>()?;
        let r1 = g
            .g1()
            .elements()
            .map(|x| {
                let (h, a) = g.split(x);
                lefts[h].product(&implemented[a])
            })
            .collect();
        Self::new(g, l2, r0, r1)
    }

    /// The inclusion of a carrier sub-2-group.
    pub fn tautological(carrier: &UnitaryTwoGroup) -> Self {
        Self {
            l2: carrier.l2().clone(),
            r0: carrier.objects().to_vec(),
            r1: carrier.morphisms().to_vec(),
        }
    }

    pub fn l2(&self) -> &StandardBimodule {
        &self.l2
    }

    /// Number of objects and morphisms the representation is defined on.
    pub fn orders(&self) -> (usize, usize) {
        (self.r0.len(), self.r1.len())
    }

    pub fn r0(&self, g: usize) -> &Automorphism {
        &self.r0[g]
    }

    pub fn r1(&self, x: usize) -> &NElement {
        &self.r1[x]
    }

    pub fn set_r1(&mut self, x: usize, n: NElement) {
        self.r1[x] = n;
    }

    /// `u = R1(h)·1̂` for `h ∈ ker(s)` (crossed-module index), so that
    /// `R1(h) = L_u`.
    pub fn kernel_unitary(&self, g: &TwoGroup, h: usize) -> AlgebraElement {
        let n = &self.r1[g.embed_kernel(h)];
        self.l2.element(&(n.unitary() * self.l2.unit_vector()))
    }
}

/// Checks `R0`, `R1` are homomorphisms into valid automorphisms and `N(A)`
/// elements, and the three compatibilities `R0∘s = s∘R1`, `R0∘t = t∘R1`,
/// `R1∘i = L²∘R0`. When those hold, preservation of `∘` is spot-checked on
/// every composable pair.
pub fn check_representation(g: &TwoGroup, rep: &Representation, tol: Tolerance) -> Report {
    let mut report = Report::new();
    let l2 = &rep.l2;
    let alg = l2.algebra();
    if rep.r0.len() != g.g0().order() || rep.r1.len() != g.g1().order() {
        report.push("R", "R0, R1 defined on all of G0, G1", 1.0);
        return report;
    }
    for (a, theta) in rep.r0.iter().enumerate() {
        report.extend_prefixed(&format!("R0({a})"), theta.check(alg, tol));
        let defect = theta.trace_defect(alg);
        if defect > tol.eps() {
            report.push(format!("R0({a})"), "R0(g) preserves the trace", defect);
        }
    }
    for (x, n) in rep.r1.iter().enumerate() {
        report.extend_prefixed(&format!("R1({x})"), n.check(l2, tol));
    }
    if !report.is_ok() {
        return report;
    }
    for a in g.g0().elements() {
        for b in g.g0().elements() {
            let r = rep.r0[g.g0().mul(a, b)].distance(&rep.r0[a].compose(&rep.r0[b]));
            if r > tol.eps() {
                report.push(format!("({a}, {b})"), "R0(ab) = R0(a) R0(b)", r);
            }
        }
    }
    for x in g.g1().elements() {
        for y in g.g1().elements() {
            let r = rep.r1[g.g1().mul(x, y)].distance(&rep.r1[x].product(&rep.r1[y]));
            if r > tol.eps() {
                report.push(format!("({x}, {y})"), "R1(XY) = R1(X) R1(Y)", r);
            }
        }
    }
    for x in g.g1().elements() {
        let r = rep.r0[g.s(x)].distance(rep.r1[x].source());
        if r > tol.eps() {
            report.push(format!("X={x}"), "R0(s(X)) = s(R1(X))", r);
        }
        let r = rep.r0[g.t(x)].distance(rep.r1[x].target());
        if r > tol.eps() {
            report.push(format!("X={x}"), "R0(t(X)) = t(R1(X))", r);
        }
    }
    for a in g.g0().elements() {
        match canonical_implementation(l2, &rep.r0[a], tol) {
            Ok(unit) => {
                let r = rep.r1[g.i(a)].distance(&unit);
                if r > tol.eps() {
                    report.push(format!("g={a}"), "R1(i(g)) = L2(R0(g))", r);
                }
            }
            Err(_) => report.push(format!("g={a}"), "R1(i(g)) = L2(R0(g))", f64::INFINITY),
        }
    }
    if !report.is_ok() {
        return report;
    }
    for x in g.g1().elements() {
        for y in g.g1().elements().filter(|&y| g.t(y) == g.s(x)) {
            let xy = g.compose(x, y).expect("composable");
            match compose_in_ua(l2, &rep.r1[x], &rep.r1[y], tol) {
                Ok(c) => {
                    let r = rep.r1[xy].distance(&c);
                    if r > tol.eps() {
                        report.push(format!("X={x}, Y={y}"), "R1(X∘Y) = R1(X)∘R1(Y)", r);
                    }
                }
                Err(_) => report.push(
                    format!("X={x}, Y={y}"),
                    "R1(X∘Y) = R1(X)∘R1(Y)",
                    f64::INFINITY,
                ),
            }
        }
    }
    report
}
