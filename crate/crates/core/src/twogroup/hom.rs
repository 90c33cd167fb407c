use alloc::format;
use alloc::vec::Vec;

use super::group::check_homomorphism;
use super::two_group::TwoGroup;
use crate::error::{Error, Result};
use crate::report::Report;

/// A strict 2-group homomorphism given by lookup tables on objects and
/// morphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoGroupHom {
    source: TwoGroup,
    target: TwoGroup,
    f0: Vec<usize>,
    f1: Vec<usize>,
}

impl TwoGroupHom {
    /// Shape-checks the tables; use [`check_two_group_hom`] or
    /// [`new`](Self::new) for the axioms.
    pub fn from_parts(
        source: TwoGroup,
        target: TwoGroup,
        f0: Vec<usize>,
        f1: Vec<usize>,
    ) -> Result<Self> {
        if f0.len() != source.g0().order() {
            return Err(Error::dimension(source.g0().order(), f0.len()));
        }
        if f1.len() != source.g1().order() {
            return Err(Error::dimension(source.g1().order(), f1.len()));
        }
        if f0.iter().any(|&x| x >= target.g0().order())
            || f1.iter().any(|&x| x >= target.g1().order())
        {
            return Err(Error::InvalidInput(
                "2-group hom table entry out of range".into(),
            ));
        }
        Ok(Self {
            source,
            target,
            f0,
            f1,
        })
    }

    pub fn new(source: TwoGroup, target: TwoGroup, f0: Vec<usize>, f1: Vec<usize>) -> Result<Self> {
        let hom = Self::from_parts(source, target, f0, f1)?;
        let report = check_two_group_hom(&hom);
        if report.is_ok() {
            Ok(hom)
        } else {
            Err(Error::invalid("2-group homomorphism", report))
        }
    }

    pub fn identity(g: &TwoGroup) -> Self {
        Self {
            source: g.clone(),
            target: g.clone(),
            f0: g.g0().elements().collect(),
            f1: g.g1().elements().collect(),
        }
    }

    /// Builds `F` from a crossed-module morphism `(f_g: G → G', f_h: H → H')`
    /// via `F1(h · i(g)) = f_h(h) · i(f_g(g))`. Indices of `H` are those of
    /// [`TwoGroup::crossed`].
    pub fn from_crossed(
        source: &TwoGroup,
        target: &TwoGroup,
        f_g: &[usize],
        f_h: &[usize],
    ) -> Result<Self> {
        if f_h.len() != source.kernel().len() {
            return Err(Error::dimension(source.kernel().len(), f_h.len()));
        }
        if f_h.iter().any(|&h| h >= target.kernel().len())
            || f_g.iter().any(|&g| g >= target.g0().order())
        {
            return Err(Error::InvalidInput(
                "crossed morphism table entry out of range".into(),
            ));
        }
        let f1 = source
            .g1()
            .elements()
            .map(|x| {
                let (h, g) = source.split(x);
                target.join(f_h[h], f_g[g])
            })
            .collect();
        Self::new(source.clone(), target.clone(), f_g.to_vec(), f1)
    }

    pub fn source(&self) -> &TwoGroup {
        &self.source
    }

    pub fn target(&self) -> &TwoGroup {
        &self.target
    }

    pub fn f0(&self, g: usize) -> usize {
        self.f0[g]
    }

    pub fn f1(&self, x: usize) -> usize {
        self.f1[x]
    }

    pub fn f0_table(&self) -> &[usize] {
        &self.f0
    }

    pub fn f1_table(&self) -> &[usize] {
        &self.f1
    }

    /// `F1` restricted to `ker(s) → ker(s')`, in crossed-module indices.
    pub fn kernel_map(&self) -> Result<Vec<usize>> {
        self.source
            .kernel()
            .iter()
            .map(|&x| {
                self.target
                    .kernel_index(self.f1[x])
                    .ok_or_else(|| Error::InvalidInput(format!("F1({x}) leaves ker(s)")))
            })
            .collect()
    }
}

/// Checks that `F0`, `F1` are homomorphisms commuting with `s`, `t`, `i`, and
/// additionally that `F1` preserves `∘` and `inv` on every instance.
pub fn check_two_group_hom(f: &TwoGroupHom) -> Report {
    let (src, dst) = (&f.source, &f.target);
    let mut report = check_homomorphism(src.g0(), dst.g0(), &f.f0, "F0");
    report.extend(check_homomorphism(src.g1(), dst.g1(), &f.f1, "F1"));
    for x in src.g1().elements() {
        if f.f0[src.s(x)] != dst.s(f.f1[x]) {
            report.push(format!("X={x}"), "F0(s(X)) = s(F1(X))", 1.0);
        }
        if f.f0[src.t(x)] != dst.t(f.f1[x]) {
            report.push(format!("X={x}"), "F0(t(X)) = t(F1(X))", 1.0);
        }
    }
    for g in src.g0().elements() {
        if f.f1[src.i(g)] != dst.i(f.f0[g]) {
            report.push(format!("g={g}"), "F1(i(g)) = i(F0(g))", 1.0);
        }
    }
    if !report.is_ok() {
        return report;
    }
    for x in src.g1().elements() {
        if f.f1[src.invert2(x)] != dst.invert2(f.f1[x]) {
            report.push(format!("X={x}"), "F1(inv(X)) = inv(F1(X))", 1.0);
        }
        for y in src.g1().elements().filter(|&y| src.t(y) == src.s(x)) {
            let lhs = f.f1[src.compose(x, y).expect("composable")];
            let rhs = dst.compose(f.f1[x], f.f1[y]).expect("F preserves s and t");
            if lhs != rhs {
                report.push(format!("X={x}, Y={y}"), "F1(X∘Y) = F1(X)∘F1(Y)", 1.0);
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twogroup::{two_group_from_crossed_module, CrossedModule, FiniteGroup};

    fn central() -> TwoGroup {
        two_group_from_crossed_module(&CrossedModule::cyclic_reduction(4, 2).unwrap()).unwrap()
    }

    #[test]
    fn identity_is_a_hom() {
        let g = central();
        assert!(check_two_group_hom(&TwoGroupHom::identity(&g)).is_ok());
    }

    #[test]
    fn mod_two_reduction_is_a_hom() {
        let src = central();
        let dst =
            two_group_from_crossed_module(&CrossedModule::inner(FiniteGroup::cyclic(2))).unwrap();
        let f = TwoGroupHom::from_crossed(&src, &dst, &[0, 1], &[0, 1, 0, 1]).unwrap();
        assert_eq!(f.kernel_map().unwrap(), alloc::vec![0, 1, 0, 1]);
    }

    #[test]
    fn s_projection_to_discrete_is_not_a_hom() {
        // F0 ∘ t must be trivial on ker(s) for a map into a discrete 2-group,
        // which the reduction ℤ/4 → ℤ/2 is not.
        let src = central();
        let dst = two_group_from_crossed_module(&CrossedModule::discrete(FiniteGroup::cyclic(2)))
            .unwrap();
        let f1: Vec<usize> = src.g1().elements().map(|x| src.s(x)).collect();
        let f = TwoGroupHom::from_parts(src, dst, alloc::vec![0, 1], f1).unwrap();
        let report = check_two_group_hom(&f);
        assert!(report.mentions("F0(t(X)) = t(F1(X))"));
    }

    #[test]
    fn corrupted_f1_is_reported() {
        let g = central();
        let mut f1: Vec<usize> = g.g1().elements().collect();
        f1.swap(1, 3);
        let f = TwoGroupHom::from_parts(g.clone(), g, (0..2).collect(), f1).unwrap();
        let report = check_two_group_hom(&f);
        assert!(!report.is_ok());
        assert!(report.mentions("F1"));
    }
}
