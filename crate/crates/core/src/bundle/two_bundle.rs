use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::principal::{
    check_principal_bundle, extend_group, Extension, Orbits, PrincipalBundle, Pullback,
};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::twogroup::{CrossedModule, TwoGroup, TwoGroupHom};

/// A principal `𝒢`-bundle: a principal bundle for `𝒢_s = ker(s)` with an
/// anchor `φ` into `𝒢₀` satisfying `φ(p·h) = t(h)⁻¹ φ(p)`.
///
/// Elements of `𝒢_s` are crossed-module indices (see [`TwoGroup::crossed`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrincipalTwoBundle {
    twogroup: TwoGroup,
    underlying: PrincipalBundle,
    anchor: Vec<usize>,
}

impl PrincipalTwoBundle {
    pub fn from_parts(
        twogroup: TwoGroup,
        underlying: PrincipalBundle,
        anchor: Vec<usize>,
    ) -> Result<Self> {
        if underlying.group() != twogroup.crossed().h() {
            return Err(Error::InvalidInput(
                "underlying bundle is not for ker(s)".into(),
            ));
        }
        if anchor.len() != underlying.len() {
            return Err(Error::dimension(underlying.len(), anchor.len()));
        }
        if anchor.iter().any(|&g| g >= twogroup.g0().order()) {
            return Err(Error::InvalidInput("anchor value out of range".into()));
        }
        Ok(Self {
            twogroup,
            underlying,
            anchor,
        })
    }

    pub fn new(
        twogroup: TwoGroup,
        underlying: PrincipalBundle,
        anchor: Vec<usize>,
    ) -> Result<Self> {
        let b = Self::from_parts(twogroup, underlying, anchor)?;
        let report = check_principal_two_bundle(&b);
        if report.is_ok() {
            Ok(b)
        } else {
            Err(Error::invalid("principal 2-bundle", report))
        }
    }

    /// `X × 𝒢_s` with anchor `φ(x, h) = t(h)⁻¹ g_x`; `g_x = e` gives the
    /// trivial bundle.
    pub fn trivial_with_anchor(twogroup: &TwoGroup, anchor_at_unit: &[usize]) -> Result<Self> {
        let cm = twogroup.crossed();
        let (h, g) = (cm.h(), cm.g());
        let underlying = PrincipalBundle::trivial(h.clone(), anchor_at_unit.len());
        let n = h.order();
        let anchor = (0..underlying.len())
            .map(|p| {
                let x = anchor_at_unit.get(p / n).copied().unwrap_or(usize::MAX);
                if x >= g.order() {
                    usize::MAX
                } else {
                    g.mul(g.inv(cm.t(p % n)), x)
                }
            })
            .collect();
        Self::from_parts(twogroup.clone(), underlying, anchor)
    }

    pub fn trivial(twogroup: &TwoGroup, base: usize) -> Self {
        let e = twogroup.g0().id();
        Self::trivial_with_anchor(twogroup, &vec![e; base]).expect("anchor e is in range")
    }

    pub fn twogroup(&self) -> &TwoGroup {
        &self.twogroup
    }

    pub fn crossed(&self) -> &CrossedModule {
        self.twogroup.crossed()
    }

    pub fn underlying(&self) -> &PrincipalBundle {
        &self.underlying
    }

    pub fn anchor(&self, p: usize) -> usize {
        self.anchor[p]
    }

    pub fn anchor_table(&self) -> &[usize] {
        &self.anchor
    }

    pub fn len(&self) -> usize {
        self.underlying.len()
    }

    pub fn is_empty(&self) -> bool {
        self.underlying.is_empty()
    }

    pub fn base(&self) -> usize {
        self.underlying.base()
    }

    pub fn proj(&self, p: usize) -> usize {
        self.underlying.proj(p)
    }

    pub fn act(&self, p: usize, h: usize) -> usize {
        self.underlying.act(p, h)
    }

    /// `f*P`, with the anchor pulled back.
    pub fn pullback(&self, f: &[usize]) -> TwoPullback {
        let pb = self.underlying.pullback(f);
        let anchor = (0..pb.bundle.len())
            .map(|q| self.anchor[pb.original(q)])
            .collect();
        let bundle = PrincipalTwoBundle {
            twogroup: self.twogroup.clone(),
            underlying: pb.bundle.clone(),
            anchor,
        };
        TwoPullback { bundle, points: pb }
    }
}

/// Structural checks of the underlying bundle plus anti-equivariance of the
/// anchor.
pub fn check_principal_two_bundle(b: &PrincipalTwoBundle) -> Report {
    let mut report = check_principal_bundle(&b.underlying);
    let cm = b.crossed();
    let g = cm.g();
    for p in 0..b.len() {
        for h in cm.h().elements() {
            let expected = g.mul(g.inv(cm.t(h)), b.anchor[p]);
            if b.anchor[b.act(p, h)] != expected {
                report.push(format!("p={p}, h={h}"), "phi(p·h) = t(h)^-1 phi(p)", 1.0);
            }
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoPullback {
    pub bundle: PrincipalTwoBundle,
    pub points: Pullback,
}

/// Every failure of `f: P → Q` being a bundle morphism: projection,
/// equivariance, anchors, and (when asked) bijectivity.
pub fn check_bundle_map(
    src: &PrincipalTwoBundle,
    dst: &PrincipalTwoBundle,
    map: &[usize],
    bijective: bool,
) -> Report {
    let mut report = Report::new();
    if map.len() != src.len() || map.iter().any(|&q| q >= dst.len()) {
        report.push("map", "map has one in-range entry per source point", 1.0);
        return report;
    }
    for p in 0..src.len() {
        if dst.proj(map[p]) != src.proj(p) {
            report.push(format!("p={p}"), "pi'(f(p)) = pi(p)", 1.0);
        }
        if dst.anchor(map[p]) != src.anchor(p) {
            report.push(format!("p={p}"), "phi'(f(p)) = phi(p)", 1.0);
        }
        for h in src.crossed().h().elements() {
            if map[src.act(p, h)] != dst.act(map[p], h) {
                report.push(format!("p={p}, h={h}"), "f(p·h) = f(p)·h", 1.0);
            }
        }
    }
    if bijective {
        let mut hit = vec![false; dst.len()];
        for &q in map {
            hit[q] = true;
        }
        if map.len() != dst.len() || hit.iter().any(|&b| !b) {
            report.push("map", "f is a bijection", 1.0);
        }
    }
    report
}

/// `P₁ ⊗ P₂ = (P₁ ×_X P₂)/𝒢_s` under `h·(p₁,p₂) = (p₁h⁻¹, p₂·α(φ₁(p₁)⁻¹, h))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor {
    pub bundle: PrincipalTwoBundle,
    pairs: Vec<(usize, usize)>,
    pair_index: Vec<Option<usize>>,
    width: usize,
    pub orbits: Orbits,
}

impl Tensor {
    /// The class `p₁ ⊗ p₂`; `None` off the fibre product.
    pub fn class(&self, p1: usize, p2: usize) -> Option<usize> {
        self.pair_index[p1 * self.width + p2].map(|k| self.orbits.class[k])
    }

    /// Canonical representative pair of a class.
    pub fn rep(&self, c: usize) -> (usize, usize) {
        self.pairs[self.orbits.reps[c]]
    }

    /// All representative pairs of a class.
    pub fn members(&self, c: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.orbits.members(c).map(|k| self.pairs[k])
    }
}

pub fn tensor(p1: &PrincipalTwoBundle, p2: &PrincipalTwoBundle) -> Result<Tensor> {
    if p1.twogroup != p2.twogroup {
        return Err(Error::Tensor("bundles for different 2-groups".into()));
    }
    if p1.base() != p2.base() {
        return Err(Error::Tensor(format!(
            "bases of size {} and {}",
            p1.base(),
            p2.base()
        )));
    }
    let cm = p1.crossed();
    let (g, h) = (cm.g(), cm.h());
    let width = p2.len();
    let mut pairs = Vec::new();
    let mut pair_index = vec![None; p1.len() * width];
    for a in 0..p1.len() {
        for b in 0..width {
            if p1.proj(a) == p2.proj(b) {
                pair_index[a * width + b] = Some(pairs.len());
                pairs.push((a, b));
            }
        }
    }
    let idx = |a: usize, b: usize| pair_index[a * width + b].expect("same fibre");
    let orbits = Orbits::new(pairs.len(), h.order(), |k, x| {
        let (a, b) = pairs[k];
        idx(
            p1.act(a, h.inv(x)),
            p2.act(b, cm.alpha(g.inv(p1.anchor(a)), x)),
        )
    });
    let nh = h.order();
    let mut proj = Vec::with_capacity(orbits.len());
    let mut anchor = Vec::with_capacity(orbits.len());
    let mut action = vec![0; orbits.len() * nh];
    for (c, &r) in orbits.reps.iter().enumerate() {
        let (a, b) = pairs[r];
        proj.push(p1.proj(a));
        anchor.push(g.mul(p1.anchor(a), p2.anchor(b)));
        for x in 0..nh {
            action[c * nh + x] = orbits.class[idx(p1.act(a, x), b)];
        }
    }
    // anchor and action are computed on representatives; both must be
    // constant on classes
    for (k, &(a, b)) in pairs.iter().enumerate() {
        let c = orbits.class[k];
        if anchor[c] != g.mul(p1.anchor(a), p2.anchor(b)) {
            return Err(Error::IllDefined {
                what: "tensor anchor".into(),
                residual: 1.0,
            });
        }
        for x in 0..nh {
            if action[c * nh + x] != orbits.class[idx(p1.act(a, x), b)] {
                return Err(Error::IllDefined {
                    what: "tensor action".into(),
                    residual: 1.0,
                });
            }
        }
    }
    let underlying = PrincipalBundle::from_parts(h.clone(), p1.base(), proj, action)?;
    let bundle = PrincipalTwoBundle::from_parts(p1.twogroup.clone(), underlying, anchor)?;
    Ok(Tensor {
        bundle,
        pairs,
        pair_index,
        width,
        orbits,
    })
}

/// Pushes a map given on representative pairs down to classes, failing if
/// two representatives disagree.
fn descend_pairs(t: &Tensor, what: &str, f: impl Fn(usize, usize) -> usize) -> Result<Vec<usize>> {
    let mut out = vec![usize::MAX; t.orbits.len()];
    for (k, &(a, b)) in t.pairs.iter().enumerate() {
        let c = t.orbits.class[k];
        let v = f(a, b);
        if out[c] == usize::MAX {
            out[c] = v;
        } else if out[c] != v {
            return Err(Error::IllDefined {
                what: what.into(),
                residual: 1.0,
            });
        }
    }
    Ok(out)
}

/// `T ⊗ P → P`, `[(x,h), p] ↦ p·h`, where `T` is the trivial bundle.
pub fn left_unitor(p: &PrincipalTwoBundle) -> Result<(Tensor, Vec<usize>)> {
    let triv = PrincipalTwoBundle::trivial(&p.twogroup, p.base());
    let t = tensor(&triv, p)?;
    let nh = p.crossed().h().order();
    let map = descend_pairs(&t, "left unitor", |a, b| p.act(b, a % nh))?;
    Ok((t, map))
}

/// `P ⊗ T → P`, `[p, (x,h)] ↦ p·α(φ(p), h)`.
pub fn right_unitor(p: &PrincipalTwoBundle) -> Result<(Tensor, Vec<usize>)> {
    let triv = PrincipalTwoBundle::trivial(&p.twogroup, p.base());
    let t = tensor(p, &triv)?;
    let cm = p.crossed();
    let nh = cm.h().order();
    let map = descend_pairs(&t, "right unitor", |a, b| {
        p.act(a, cm.alpha(p.anchor(a), b % nh))
    })?;
    Ok((t, map))
}

/// `(P₁ ⊗ P₂) ⊗ P₃ → P₁ ⊗ (P₂ ⊗ P₃)`, `[[p₁,p₂],p₃] ↦ [p₁,[p₂,p₃]]`,
/// checked on every representative triple.
pub struct Associator {
    pub source: Tensor,
    pub target: Tensor,
    pub map: Vec<usize>,
}

pub fn associator(
    p1: &PrincipalTwoBundle,
    p2: &PrincipalTwoBundle,
    p3: &PrincipalTwoBundle,
) -> Result<Associator> {
    let t12 = tensor(p1, p2)?;
    let t23 = tensor(p2, p3)?;
    let source = tensor(&t12.bundle, p3)?;
    let target = tensor(p1, &t23.bundle)?;
    let mut map = vec![usize::MAX; source.orbits.len()];
    for (a, b) in t12.pairs.iter().copied() {
        let c12 = t12.class(a, b).expect("pair");
        for c in 0..p3.len() {
            let (Some(src), Some(c23)) = (source.class(c12, c), t23.class(b, c)) else {
                continue;
            };
            let dst = target.class(a, c23).expect("same fibre");
            if map[src] == usize::MAX {
                map[src] = dst;
            } else if map[src] != dst {
                return Err(Error::IllDefined {
                    what: "associator".into(),
                    residual: 1.0,
                });
            }
        }
    }
    Ok(Associator {
        source,
        target,
        map,
    })
}

/// `F_*(P)` for a 2-group homomorphism: the underlying bundle extended
/// along `F₁: 𝒢_s → ℋ_s`, with anchor `[p, h] ↦ t(h)⁻¹ F₀(φ(p))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoExtension {
    pub bundle: PrincipalTwoBundle,
    pub extension: Extension,
}

pub fn extend_two_group(p: &PrincipalTwoBundle, f: &TwoGroupHom) -> Result<TwoExtension> {
    if f.source() != &p.twogroup {
        return Err(Error::InvalidInput(
            "homomorphism does not start at the bundle's 2-group".into(),
        ));
    }
    let kernel = f.kernel_map()?;
    let target = f.target().crossed();
    let (g, h) = (target.g(), target.h());
    let extension = extend_group(&p.underlying, h, &kernel)?;
    let nh = h.order();
    let mut anchor = vec![usize::MAX; extension.bundle.len()];
    for k in 0..p.len() * nh {
        let (q, x) = (k / nh, k % nh);
        let value = g.mul(g.inv(target.t(x)), f.f0(p.anchor(q)));
        let c = extension.orbits.class[k];
        if anchor[c] == usize::MAX {
            anchor[c] = value;
        } else if anchor[c] != value {
            return Err(Error::IllDefined {
                what: "extended anchor".into(),
                residual: 1.0,
            });
        }
    }
    let bundle =
        PrincipalTwoBundle::from_parts(f.target().clone(), extension.bundle.clone(), anchor)?;
    Ok(TwoExtension { bundle, extension })
}

/// `ψ: F_*(P₁) ⊗ F_*(P₂) → F_*(P₁ ⊗ P₂)`,
/// `[[p₁,h₁],[p₂,h₂]] ↦ [[p₁,p₂], α(F₀(φ₁(p₁)), h₂)·h₁]`, checked on every
/// representative.
pub struct Psi {
    pub source: Tensor,
    pub target: TwoExtension,
    pub map: Vec<usize>,
}

pub fn psi(p1: &PrincipalTwoBundle, p2: &PrincipalTwoBundle, f: &TwoGroupHom) -> Result<Psi> {
    let e1 = extend_two_group(p1, f)?;
    let e2 = extend_two_group(p2, f)?;
    let t = tensor(p1, p2)?;
    let target = extend_two_group(&t.bundle, f)?;
    let source = tensor(&e1.bundle, &e2.bundle)?;
    let cm = f.target().crossed();
    let h = cm.h();
    let nh = h.order();
    let mut map = vec![usize::MAX; source.orbits.len()];
    for k1 in 0..p1.len() * nh {
        let (a, h1) = (k1 / nh, k1 % nh);
        let c1 = e1.extension.orbits.class[k1];
        for k2 in 0..p2.len() * nh {
            let (b, h2) = (k2 / nh, k2 % nh);
            let Some(pair) = t.class(a, b) else { continue };
            let c2 = e2.extension.orbits.class[k2];
            let src = source.class(c1, c2).expect("same fibre");
            let hh = h.mul(cm.alpha(f.f0(p1.anchor(a)), h2), h1);
            let dst = target.extension.class(pair, hh);
            if map[src] == usize::MAX {
                map[src] = dst;
            } else if map[src] != dst {
                return Err(Error::IllDefined {
                    what: "psi".into(),
                    residual: 1.0,
                });
            }
        }
    }
    Ok(Psi {
        source,
        target,
        map,
    })
}
