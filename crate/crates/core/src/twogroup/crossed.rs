use alloc::format;
use alloc::vec::Vec;

use super::group::{check_homomorphism, FiniteGroup};
use crate::error::{Error, Result};
use crate::report::Report;

/// A homomorphism `t: H → G` with a left action `alpha` of `G` on `H`.
///
/// `alpha` is stored row-major: `alpha[g * |H| + h] = α(g, h)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossedModule {
    g: FiniteGroup,
    h: FiniteGroup,
    t: Vec<usize>,
    alpha: Vec<usize>,
}

impl CrossedModule {
    /// Checks table shapes and ranges only; the axioms are left to
    /// [`check_crossed_module`] so that invalid data can still be reported on.
    pub fn from_parts(
        g: FiniteGroup,
        h: FiniteGroup,
        t: Vec<usize>,
        alpha: Vec<usize>,
    ) -> Result<Self> {
        if t.len() != h.order() {
            return Err(Error::dimension(
                format!("t with {} entries", h.order()),
                t.len(),
            ));
        }
        if alpha.len() != g.order() * h.order() {
            return Err(Error::dimension(
                format!("alpha with {} entries", g.order() * h.order()),
                alpha.len(),
            ));
        }
        if t.iter().any(|&x| x >= g.order()) || alpha.iter().any(|&x| x >= h.order()) {
            return Err(Error::InvalidInput(
                "crossed module table entry out of range".into(),
            ));
        }
        Ok(Self { g, h, t, alpha })
    }

    /// Like [`from_parts`](Self::from_parts) but also requires every axiom.
    pub fn new(g: FiniteGroup, h: FiniteGroup, t: Vec<usize>, alpha: Vec<usize>) -> Result<Self> {
        let cm = Self::from_parts(g, h, t, alpha)?;
        let report = check_crossed_module(&cm);
        if report.is_ok() {
            Ok(cm)
        } else {
            Err(Error::invalid("crossed module", report))
        }
    }

    /// `G = H`, `t = id`, `α` = conjugation.
    pub fn inner(g: FiniteGroup) -> Self {
        let n = g.order();
        let alpha = (0..n * n).map(|k| g.conj(k / n, k % n)).collect();
        Self {
            t: (0..n).collect(),
            h: g.clone(),
            g,
            alpha,
        }
    }

    /// Trivial `H`: the crossed module of the discrete 2-group on `G`.
    pub fn discrete(g: FiniteGroup) -> Self {
        let n = g.order();
        let id = g.id();
        Self {
            g,
            h: FiniteGroup::trivial(),
            t: alloc::vec![id],
            alpha: alloc::vec![0; n],
        }
    }

    /// `t: ℤ/(nm) → ℤ/m` by reduction, trivial action. Central, so always a
    /// crossed module.
    pub fn cyclic_reduction(nm: usize, m: usize) -> Result<Self> {
        if m == 0 || !nm.is_multiple_of(m) {
            return Err(Error::InvalidInput(format!("{m} does not divide {nm}")));
        }
        let g = FiniteGroup::cyclic(m);
        let h = FiniteGroup::cyclic(nm);
        let t = (0..nm).map(|k| k % m).collect();
        let alpha = (0..m * nm).map(|k| k % nm).collect();
        Self::new(g, h, t, alpha)
    }

    pub fn g(&self) -> &FiniteGroup {
        &self.g
    }

    pub fn h(&self) -> &FiniteGroup {
        &self.h
    }

    pub fn t(&self, h: usize) -> usize {
        self.t[h]
    }

    pub fn alpha(&self, g: usize, h: usize) -> usize {
        self.alpha[g * self.h.order() + h]
    }

    pub fn t_table(&self) -> &[usize] {
        &self.t
    }

    pub fn alpha_table(&self) -> &[usize] {
        &self.alpha
    }
}

/// Lists every failure of: `t` a homomorphism, `α` an action by
/// automorphisms, equivariance `t(α(g,h)) = g t(h) g⁻¹`, and the Peiffer
/// identity `α(t(h), x) = h x h⁻¹`.
pub fn check_crossed_module(cm: &CrossedModule) -> Report {
    let (g, h) = (&cm.g, &cm.h);
    let mut report = check_homomorphism(h, g, &cm.t, "t");
    for a in g.elements() {
        let row: Vec<usize> = h.elements().map(|x| cm.alpha(a, x)).collect();
        let mut sub = check_homomorphism(h, h, &row, "alpha(g,-)");
        for v in &mut sub.violations {
            v.location = format!("g={a}, {}", v.location);
        }
        report.extend(sub);
    }
    for x in h.elements() {
        if cm.alpha(g.id(), x) != x {
            report.push(format!("h={x}"), "alpha(e,h) = h", 1.0);
        }
        for a in g.elements() {
            for b in g.elements() {
                if cm.alpha(g.mul(a, b), x) != cm.alpha(a, cm.alpha(b, x)) {
                    report.push(
                        format!("g={a}, g'={b}, h={x}"),
                        "alpha(gg',h) = alpha(g,alpha(g',h))",
                        1.0,
                    );
                }
            }
        }
    }
    for a in g.elements() {
        for x in h.elements() {
            if cm.t(cm.alpha(a, x)) != g.conj(a, cm.t(x)) {
                report.push(format!("g={a}, h={x}"), "t(alpha(g,h)) = g t(h) g^-1", 1.0);
            }
        }
    }
    for x in h.elements() {
        for y in h.elements() {
            if cm.alpha(cm.t(x), y) != h.conj(x, y) {
                report.push(
                    format!("h={x}, x={y}"),
                    "Peiffer: alpha(t(h),x) = h x h^-1",
                    1.0,
                );
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_s3_is_a_crossed_module() {
        let cm = CrossedModule::inner(FiniteGroup::symmetric(3));
        assert!(check_crossed_module(&cm).is_ok());
    }

    #[test]
    fn trivial_action_on_s3_breaks_peiffer() {
        let g = FiniteGroup::cyclic(2);
        let h = FiniteGroup::symmetric(3);
        let cm = CrossedModule::from_parts(
            g,
            h.clone(),
            alloc::vec![0; 6],
            (0..12).map(|k| k % 6).collect(),
        )
        .unwrap();
        let report = check_crossed_module(&cm);
        assert!(report.mentions("Peiffer"));
        // every non-commuting pair is listed
        let noncommuting = h
            .elements()
            .flat_map(|x| h.elements().map(move |y| (x, y)))
            .filter(|&(x, y)| !h.commute(x, y))
            .count();
        let peiffer = report
            .violations
            .iter()
            .filter(|v| v.equation.contains("Peiffer"))
            .count();
        assert_eq!(peiffer, noncommuting);
        assert!(CrossedModule::new(
            FiniteGroup::cyclic(2),
            h,
            alloc::vec![0; 6],
            (0..12).map(|k| k % 6).collect()
        )
        .is_err());
    }

    #[test]
    fn trivial_h_is_vacuous() {
        let cm = CrossedModule::discrete(FiniteGroup::symmetric(3));
        assert!(check_crossed_module(&cm).is_ok());
    }

    #[test]
    fn cyclic_reduction_shapes() {
        let cm = CrossedModule::cyclic_reduction(4, 2).unwrap();
        assert_eq!(cm.t(3), 1);
        assert_eq!(cm.alpha(1, 3), 3);
        assert!(CrossedModule::cyclic_reduction(4, 3).is_err());
    }

    #[test]
    fn shape_errors() {
        let g = FiniteGroup::cyclic(2);
        assert!(
            CrossedModule::from_parts(g.clone(), g.clone(), alloc::vec![0], alloc::vec![0; 4])
                .is_err()
        );
        assert!(
            CrossedModule::from_parts(g.clone(), g, alloc::vec![0, 5], alloc::vec![0; 4]).is_err()
        );
    }
}
