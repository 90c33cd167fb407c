use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::report::Report;
use crate::twogroup::{check_homomorphism, FiniteGroup};

/// Orbits of a group action on `0..n`, numbered in order of their lowest
/// member, which is the canonical representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbits {
    pub class: Vec<usize>,
    pub reps: Vec<usize>,
}

impl Orbits {
    pub fn new(n: usize, order: usize, act: impl Fn(usize, usize) -> usize) -> Self {
        let mut class = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for p in 0..n {
            if class[p] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(p);
            for g in 0..order {
                class[act(p, g)] = c;
            }
        }
        Self { class, reps }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Every element of class `c`.
    pub fn members(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        self.class
            .iter()
            .enumerate()
            .filter(move |&(_, &k)| k == c)
            .map(|(p, _)| p)
    }
}

/// A principal `G`-bundle over a finite discrete base: total space `0..n`
/// with projection and a right action table `action[p * |G| + g] = p·g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrincipalBundle {
    group: FiniteGroup,
    base: usize,
    proj: Vec<usize>,
    action: Vec<usize>,
}

impl PrincipalBundle {
    /// Shape checks only; see [`check_principal_bundle`].
    pub fn from_parts(
        group: FiniteGroup,
        base: usize,
        proj: Vec<usize>,
        action: Vec<usize>,
    ) -> Result<Self> {
        let n = proj.len();
        if action.len() != n * group.order() {
            return Err(Error::dimension(
                format!("action with {} entries", n * group.order()),
                action.len(),
            ));
        }
        if proj.iter().any(|&x| x >= base) || action.iter().any(|&p| p >= n) {
            return Err(Error::InvalidInput(
                "bundle table entry out of range".into(),
            ));
        }
        Ok(Self {
            group,
            base,
            proj,
            action,
        })
    }

    pub fn new(
        group: FiniteGroup,
        base: usize,
        proj: Vec<usize>,
        action: Vec<usize>,
    ) -> Result<Self> {
        let b = Self::from_parts(group, base, proj, action)?;
        let report = check_principal_bundle(&b);
        if report.is_ok() {
            Ok(b)
        } else {
            Err(Error::invalid("principal bundle", report))
        }
    }

    /// `X × G` with `(x, g)` at index `x * |G| + g`.
    pub fn trivial(group: FiniteGroup, base: usize) -> Self {
        let n = group.order();
        let proj = (0..base * n).map(|p| p / n).collect();
        let action = (0..base * n * n)
            .map(|k| {
                let (p, g) = (k / n, k % n);
                (p / n) * n + group.mul(p % n, g)
            })
            .collect();
        Self {
            group,
            base,
            proj,
            action,
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn len(&self) -> usize {
        self.proj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.proj.is_empty()
    }

    pub fn proj(&self, p: usize) -> usize {
        self.proj[p]
    }

    pub fn proj_table(&self) -> &[usize] {
        &self.proj
    }

    pub fn action_table(&self) -> &[usize] {
        &self.action
    }

    pub fn act(&self, p: usize, g: usize) -> usize {
        self.action[p * self.group.order() + g]
    }

    /// Lowest-index point over `x`.
    pub fn first_over(&self, x: usize) -> Option<usize> {
        self.proj.iter().position(|&y| y == x)
    }

    /// The unique `g` with `p·g = q`, for `p`, `q` in one fibre.
    pub fn difference(&self, p: usize, q: usize) -> Option<usize> {
        self.group.elements().find(|&g| self.act(p, g) == q)
    }

    /// `f*P` along `f: Z → X`: points `(z, p)` with `π(p) = f(z)`, ordered by
    /// `z` then `p`.
    pub fn pullback(&self, f: &[usize]) -> Pullback {
        let mut points = Vec::new();
        let mut first = Vec::with_capacity(f.len());
        for (z, &x) in f.iter().enumerate() {
            first.push(points.len());
            points.extend(
                self.proj
                    .iter()
                    .enumerate()
                    .filter(|&(_, &y)| y == x)
                    .map(|(p, _)| (z, p)),
            );
        }
        let index = |z: usize, p: usize| {
            let start = first[z];
            start
                + points[start..]
                    .iter()
                    .position(|&(zz, pp)| zz == z && pp == p)
                    .expect("point in fibre")
        };
        let order = self.group.order();
        let mut action = vec![0; points.len() * order];
        for (q, &(z, p)) in points.iter().enumerate() {
            for g in 0..order {
                action[q * order + g] = index(z, self.act(p, g));
            }
        }
        let proj = points.iter().map(|&(z, _)| z).collect();
        let bundle = PrincipalBundle {
            group: self.group.clone(),
            base: f.len(),
            proj,
            action,
        };
        Pullback {
            bundle,
            points,
            first,
        }
    }
}

/// Every failure of: right action, fibre preservation, freeness, and
/// transitivity on each (nonempty) fibre.
pub fn check_principal_bundle(b: &PrincipalBundle) -> Report {
    let mut report = Report::new();
    let g = &b.group;
    for p in 0..b.len() {
        if b.act(p, g.id()) != p {
            report.push(format!("p={p}"), "p·e = p", 1.0);
        }
        for a in g.elements() {
            if b.proj[b.act(p, a)] != b.proj[p] {
                report.push(format!("p={p}, g={a}"), "pi(p·g) = pi(p)", 1.0);
            }
            if a != g.id() && b.act(p, a) == p {
                report.push(format!("p={p}, g={a}"), "action is free", 1.0);
            }
            for c in g.elements() {
                if b.act(b.act(p, a), c) != b.act(p, g.mul(a, c)) {
                    report.push(format!("p={p}, g={a}, g'={c}"), "(p·g)·g' = p·(gg')", 1.0);
                }
            }
        }
    }
    for x in 0..b.base {
        let fibre = b.proj.iter().filter(|&&y| y == x).count();
        if fibre != g.order() {
            report.push(
                format!("x={x}"),
                format!(
                    "fibre is one free orbit (size {fibre}, |G| = {})",
                    g.order()
                ),
                1.0,
            );
        }
    }
    report
}

/// `f*P` together with the identification of its points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pullback {
    pub bundle: PrincipalBundle,
    points: Vec<(usize, usize)>,
    first: Vec<usize>,
}

impl Pullback {
    /// The point `(z, p)`.
    pub fn index(&self, z: usize, p: usize) -> usize {
        let start = self.first[z];
        start
            + self.points[start..]
                .iter()
                .position(|&(zz, pp)| zz == z && pp == p)
                .expect("point in fibre")
    }

    /// The original point under `(z, p)`.
    pub fn original(&self, q: usize) -> usize {
        self.points[q].1
    }
}

/// `f_*(P) = (P × H)/G` with `(p, h)·g = (pg, f(g)⁻¹h)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub bundle: PrincipalBundle,
    /// Class of `(p, h)`, indexed `p * |H| + h`.
    pub orbits: Orbits,
}

impl Extension {
    pub fn class(&self, p: usize, h: usize) -> usize {
        self.orbits.class[p * self.bundle.group.order() + h]
    }

    /// Canonical representative `(p, h)` of a class.
    pub fn rep(&self, c: usize) -> (usize, usize) {
        let n = self.bundle.group.order();
        let r = self.orbits.reps[c];
        (r / n, r % n)
    }
}

pub fn extend_group(p: &PrincipalBundle, target: &FiniteGroup, f: &[usize]) -> Result<Extension> {
    let report = check_homomorphism(&p.group, target, f, "f");
    if !report.is_ok() {
        return Err(Error::invalid("group homomorphism", report));
    }
    let nh = target.order();
    let orbits = Orbits::new(p.len() * nh, p.group.order(), |k, g| {
        let (q, h) = (k / nh, k % nh);
        p.act(q, g) * nh + target.mul(target.inv(f[g]), h)
    });
    let proj = orbits.reps.iter().map(|&r| p.proj[r / nh]).collect();
    let mut action = vec![0; orbits.len() * nh];
    for (c, &r) in orbits.reps.iter().enumerate() {
        let (q, h) = (r / nh, r % nh);
        for h2 in 0..nh {
            action[c * nh + h2] = orbits.class[q * nh + target.mul(h, h2)];
        }
    }
    let bundle = PrincipalBundle::from_parts(target.clone(), p.base, proj, action)?;
    // the right action must not depend on the representative
    for k in 0..p.len() * nh {
        let (q, h) = (k / nh, k % nh);
        for h2 in 0..nh {
            if orbits.class[q * nh + target.mul(h, h2)] != bundle.act(orbits.class[k], h2) {
                return Err(Error::IllDefined {
                    what: "right action on (P × H)/G".into(),
                    residual: 1.0,
                });
            }
        }
    }
    Ok(Extension { bundle, orbits })
}
