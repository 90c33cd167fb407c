use alloc::format;
use alloc::vec::Vec;

use super::crossed::{check_crossed_module, CrossedModule};
use super::group::{check_homomorphism, FiniteGroup};
use crate::error::{Error, Result};
use crate::report::Report;

/// A finite strict 2-group: object group `G0`, morphism group `G1`, and
/// homomorphisms `s, t: G1 → G0`, `i: G0 → G1`. Composition and inversion of
/// morphisms are derived from `s`, `t`, `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoGroup {
    g0: FiniteGroup,
    g1: FiniteGroup,
    s: Vec<usize>,
    t: Vec<usize>,
    i: Vec<usize>,
    /// ker(s) in ascending order of `G1` index.
    kernel: Vec<usize>,
    kernel_pos: Vec<Option<usize>>,
    crossed: CrossedModule,
}

/// Every failure of the strict 2-group axioms for raw `(G0, G1, s, t, i)`.
pub fn check_two_group_parts(
    g0: &FiniteGroup,
    g1: &FiniteGroup,
    s: &[usize],
    t: &[usize],
    i: &[usize],
) -> Report {
    let mut report = check_homomorphism(g1, g0, s, "s");
    report.extend(check_homomorphism(g1, g0, t, "t"));
    report.extend(check_homomorphism(g0, g1, i, "i"));
    if !report.is_ok() {
        return report;
    }
    for g in g0.elements() {
        if s[i[g]] != g {
            report.push(format!("g={g}"), "s(i(g)) = g", 1.0);
        }
        if t[i[g]] != g {
            report.push(format!("g={g}"), "t(i(g)) = g", 1.0);
        }
    }
    let ker_s: Vec<usize> = g1.elements().filter(|&x| s[x] == g0.id()).collect();
    let ker_t: Vec<usize> = g1.elements().filter(|&x| t[x] == g0.id()).collect();
    for &a in &ker_s {
        for &b in &ker_t {
            if !g1.commute(a, b) {
                report.push(
                    format!("ker(s)∋{a}, ker(t)∋{b}"),
                    "ker(s) and ker(t) commute",
                    1.0,
                );
            }
        }
    }
    report
}

impl TwoGroup {
    pub fn new(
        g0: FiniteGroup,
        g1: FiniteGroup,
        s: Vec<usize>,
        t: Vec<usize>,
        i: Vec<usize>,
    ) -> Result<Self> {
        let report = check_two_group_parts(&g0, &g1, &s, &t, &i);
        if !report.is_ok() {
            return Err(Error::invalid("2-group", report));
        }
        let kernel: Vec<usize> = g1.elements().filter(|&x| s[x] == g0.id()).collect();
        let mut kernel_pos = alloc::vec![None; g1.order()];
        for (k, &x) in kernel.iter().enumerate() {
            kernel_pos[x] = Some(k);
        }
        let h = g1.subgroup(&kernel)?;
        let n0 = g0.order();
        let nh = kernel.len();
        let t_h = kernel.iter().map(|&x| t[x]).collect();
        let mut alpha = alloc::vec![0; n0 * nh];
        for g in 0..n0 {
            for (k, &x) in kernel.iter().enumerate() {
                let y = g1.conj(i[g], x);
                alpha[g * nh + k] = kernel_pos[y].expect("ker(s) is normal");
            }
        }
        let crossed = CrossedModule::from_parts(g0.clone(), h, t_h, alpha)?;
        Ok(Self {
            g0,
            g1,
            s,
            t,
            i,
            kernel,
            kernel_pos,
            crossed,
        })
    }

    pub fn g0(&self) -> &FiniteGroup {
        &self.g0
    }

    pub fn g1(&self) -> &FiniteGroup {
        &self.g1
    }

    pub fn s(&self, x: usize) -> usize {
        self.s[x]
    }

    pub fn t(&self, x: usize) -> usize {
        self.t[x]
    }

    pub fn i(&self, g: usize) -> usize {
        self.i[g]
    }

    pub fn s_table(&self) -> &[usize] {
        &self.s
    }

    pub fn t_table(&self) -> &[usize] {
        &self.t
    }

    pub fn i_table(&self) -> &[usize] {
        &self.i
    }

    /// The crossed module `t: ker(s) → G0` with `α(g, h) = i(g) h i(g)⁻¹`.
    /// Index `k` of its `H` is the `k`-th element of [`kernel`](Self::kernel).
    pub fn crossed(&self) -> &CrossedModule {
        &self.crossed
    }

    /// `ker(s) ⊂ G1`, ascending.
    pub fn kernel(&self) -> &[usize] {
        &self.kernel
    }

    /// Embeds an element of `ker(s)` (crossed-module index) into `G1`.
    pub fn embed_kernel(&self, h: usize) -> usize {
        self.kernel[h]
    }

    pub fn kernel_index(&self, x: usize) -> Option<usize> {
        self.kernel_pos[x]
    }

    /// `X ∘ Y = X · i(s(X))⁻¹ · Y` for composable `s(X) = t(Y)`.
    pub fn compose(&self, x: usize, y: usize) -> Result<usize> {
        if self.s(x) != self.t(y) {
            return Err(Error::Composition(format!(
                "s(X) = {} but t(Y) = {}",
                self.s(x),
                self.t(y)
            )));
        }
        let g1 = &self.g1;
        Ok(g1.mul(g1.mul(x, g1.inv(self.i(self.s(x)))), y))
    }

    /// `inv(X) = i(s(X)) · X⁻¹ · i(t(X))`.
    pub fn invert2(&self, x: usize) -> usize {
        let g1 = &self.g1;
        g1.mul(g1.mul(self.i(self.s(x)), g1.inv(x)), self.i(self.t(x)))
    }

    /// Splits `X = h · i(s(X))` with `h ∈ ker(s)`, returning the crossed-module
    /// pair `(h, s(X))`.
    pub fn split(&self, x: usize) -> (usize, usize) {
        let g = self.s(x);
        let h = self.g1.mul(x, self.g1.inv(self.i(g)));
        (self.kernel_pos[h].expect("X i(s X)^-1 lies in ker(s)"), g)
    }

    /// `h · i(g)` for a crossed-module pair.
    pub fn join(&self, h: usize, g: usize) -> usize {
        self.g1.mul(self.kernel[h], self.i(g))
    }
}

/// `G1 = H ⋊ G` with `(h,g)(h',g') = (h α(g,h'), g g')`, `s(h,g) = g`,
/// `t(h,g) = t(h) g`, `i(g) = (e,g)`. The pair `(h, g)` has index
/// `h * |G| + g`.
pub fn two_group_from_crossed_module(cm: &CrossedModule) -> Result<TwoGroup> {
    let report = check_crossed_module(cm);
    if !report.is_ok() {
        return Err(Error::invalid("crossed module", report));
    }
    let (g, h) = (cm.g(), cm.h());
    let (ng, nh) = (g.order(), h.order());
    let n = ng * nh;
    let mut mul = alloc::vec![0; n * n];
    for x in 0..n {
        let (h1, g1) = (x / ng, x % ng);
        for y in 0..n {
            let (h2, g2) = (y / ng, y % ng);
            let hh = h.mul(h1, cm.alpha(g1, h2));
            mul[x * n + y] = hh * ng + g.mul(g1, g2);
        }
    }
    let g1 = FiniteGroup::from_table(n, mul)?;
    let s = (0..n).map(|x| x % ng).collect();
    let t = (0..n).map(|x| g.mul(cm.t(x / ng), x % ng)).collect();
    let i = (0..ng).map(|a| h.id() * ng + a).collect();
    TwoGroup::new(g.clone(), g1, s, t, i)
}

/// The crossed module `t: ker(s) → G0` of a 2-group.
pub fn crossed_module_from_two_group(g: &TwoGroup) -> CrossedModule {
    g.crossed().clone()
}

/// Exhaustive check of the derived calculus: associativity and unit laws of
/// `∘`, two-sided inverses from [`TwoGroup::invert2`], and the interchange law
/// `(X·X')∘(Y·Y') = (X∘Y)·(X'∘Y')`.
pub fn verify_calculus(g: &TwoGroup) -> Report {
    let mut report = Report::new();
    let g1 = g.g1();
    let composable: Vec<(usize, usize)> = g1
        .elements()
        .flat_map(|x| g1.elements().map(move |y| (x, y)))
        .filter(|&(x, y)| g.s(x) == g.t(y))
        .collect();
    let n = g1.order();
    let mut table = alloc::vec![usize::MAX; n * n];
    for &(x, y) in &composable {
        table[x * n + y] = g.compose(x, y).expect("composable");
    }
    // usize::MAX marks a non-composable pair, which only a broken 2-group produces here.
    let comp = |x: usize, y: usize| {
        if x < n && y < n {
            table[x * n + y]
        } else {
            usize::MAX
        }
    };
    for x in g1.elements() {
        if comp(x, g.i(g.s(x))) != x || comp(g.i(g.t(x)), x) != x {
            report.push(format!("X={x}"), "i is a two-sided unit for ∘", 1.0);
        }
        let inv = g.invert2(x);
        if g.s(inv) != g.t(x) || g.t(inv) != g.s(x) {
            report.push(format!("X={x}"), "inv swaps source and target", 1.0);
            continue;
        }
        if comp(x, inv) != g.i(g.t(x)) || comp(inv, x) != g.i(g.s(x)) {
            report.push(
                format!("X={x}"),
                "X ∘ inv(X) = i(t(X)), inv(X) ∘ X = i(s(X))",
                1.0,
            );
        }
    }
    for &(x, y) in &composable {
        let xy = comp(x, y);
        if g.s(xy) != g.s(y) || g.t(xy) != g.t(x) {
            report.push(format!("X={x}, Y={y}"), "s(X∘Y) = s(Y), t(X∘Y) = t(X)", 1.0);
            continue;
        }
        for z in g1.elements().filter(|&z| g.t(z) == g.s(y)) {
            if comp(xy, z) != comp(x, comp(y, z)) {
                report.push(format!("X={x}, Y={y}, Z={z}"), "(X∘Y)∘Z = X∘(Y∘Z)", 1.0);
            }
        }
    }
    for &(x, y) in &composable {
        for &(x2, y2) in &composable {
            let lhs = comp(g1.mul(x, x2), g1.mul(y, y2));
            let rhs = g1.mul(comp(x, y), comp(x2, y2));
            if lhs != rhs {
                report.push(
                    format!("X={x}, X'={x2}, Y={y}, Y'={y2}"),
                    "interchange",
                    1.0,
                );
            }
        }
    }
    report
}

/// Checks that `(h, g) ↦ h · i(g)` is an isomorphism from the 2-group rebuilt
/// from `g`'s crossed module back onto `g`.
pub fn check_round_trip(g: &TwoGroup) -> Report {
    let mut report = Report::new();
    let rebuilt = match two_group_from_crossed_module(g.crossed()) {
        Ok(r) => r,
        Err(e) => {
            report.push("crossed module of G", format!("rebuild failed: {e}"), 1.0);
            return report;
        }
    };
    let ng = g.g0().order();
    let witness: Vec<usize> = rebuilt
        .g1()
        .elements()
        .map(|x| g.join(x / ng, x % ng))
        .collect();
    let mut seen = alloc::vec![false; g.g1().order()];
    for &w in &witness {
        seen[w] = true;
    }
    if witness.len() != g.g1().order() || seen.iter().any(|s| !s) {
        report.push("witness", "(h,g) ↦ h·i(g) is a bijection", 1.0);
    }
    report.extend(check_homomorphism(rebuilt.g1(), g.g1(), &witness, "w"));
    for x in rebuilt.g1().elements() {
        if g.s(witness[x]) != rebuilt.s(x) {
            report.push(format!("(h,g)={x}"), "s(w(X)) = s(X)", 1.0);
        }
        if g.t(witness[x]) != rebuilt.t(x) {
            report.push(format!("(h,g)={x}"), "t(w(X)) = t(X)", 1.0);
        }
    }
    for a in g.g0().elements() {
        if witness[rebuilt.i(a)] != g.i(a) {
            report.push(format!("g={a}"), "w(i(g)) = i(g)", 1.0);
        }
    }
    report
}
