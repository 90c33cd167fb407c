//! Turns declarations into core objects.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

use gerbel_core::assoc::{
    associate, pullback_refinement, BimoduleBundle, Refinement, TwoVectorBundle,
};
use gerbel_core::bundle::{Cover, PrincipalBundle, PrincipalTwoBundle};
use gerbel_core::fusion::Bimodule;
use gerbel_core::gerbe::{extend_gerbe, pullback_gerbe, BundleGerbe, PulledBackGerbe};
use gerbel_core::numerics::c;
use gerbel_core::staralg::{
    AlgebraElement, Automorphism, NElement, Representation, StandardBimodule, StarAlgebra,
};
use gerbel_core::twogroup::{
    two_group_from_crossed_module, CrossedModule, FiniteGroup, TwoGroup, TwoGroupHom,
};
use gerbel_core::{CMatrix, Error, Report, Tolerance};

use crate::schema::*;

/// Why a command could not produce a verdict, or produced a negative one
/// during construction.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Unreadable or inconsistent input; exit code 2.
    Input(String),
    /// A construction step failed verification; exit code 1.
    Verification { what: String, report: Report },
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "{msg}"),
            CliError::Verification { what, report } => {
                write!(f, "{what}: {} violation(s)", report.violations.len())
            }
        }
    }
}

impl std::error::Error for CliError {}

pub type CliResult<T> = Result<T, CliError>;

/// Classifies a core error raised while building `what`.
pub fn classify(what: &str, e: Error) -> CliError {
    match e {
        Error::Dimension { .. } | Error::InvalidInput(_) => CliError::Input(format!("{what}: {e}")),
        Error::Invalid { report, .. } => CliError::Verification {
            what: what.to_string(),
            report,
        },
        other => {
            let residual = match &other {
                Error::IllDefined { residual, .. } => *residual,
                Error::NotImplementing { residual } => *residual,
                _ => f64::INFINITY,
            };
            let mut report = Report::new();
            report.push(what, other.to_string(), residual);
            CliError::Verification {
                what: what.to_string(),
                report,
            }
        }
    }
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

pub fn to_matrix(m: &Matrix, what: &str) -> CliResult<CMatrix> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    if m.iter().any(|r| r.len() != cols) {
        return Err(input(format!("{what}: ragged matrix")));
    }
    if m.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(input(format!("{what}: non-finite entry")));
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| {
        c(m[i][j][0], m[i][j][1])
    }))
}

pub fn from_matrix(m: &CMatrix) -> Matrix {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

pub struct Resolver<'a> {
    decl: &'a Declarations,
    tol: Tolerance,
    visiting: RefCell<Vec<String>>,
    gerbes: RefCell<BTreeMap<String, Rc<BundleGerbe>>>,
    bundles: RefCell<BTreeMap<String, Rc<TwoVectorBundle>>>,
}

impl<'a> Resolver<'a> {
    pub fn new(decl: &'a Declarations, tol: Tolerance) -> Self {
        Self {
            decl,
            tol,
            visiting: RefCell::new(Vec::new()),
            gerbes: RefCell::new(BTreeMap::new()),
            bundles: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    pub fn declarations(&self) -> &Declarations {
        self.decl
    }

    /// Unknown names are reported against the declaration that used them.
    fn lookup<'m, T>(
        &self,
        map: &'m BTreeMap<String, T>,
        kind: &str,
        name: &str,
    ) -> CliResult<&'m T> {
        map.get(name)
            .ok_or_else(|| match self.visiting.borrow().last() {
                Some(from) => input(format!("declarations.{from}: unknown {kind} '{name}'")),
                None => input(format!("unknown {kind} '{name}'")),
            })
    }

    fn guard<T>(&self, key: String, f: impl FnOnce() -> CliResult<T>) -> CliResult<T> {
        if self.visiting.borrow().contains(&key) {
            return Err(input(format!("cyclic reference through {key}")));
        }
        self.visiting.borrow_mut().push(key);
        let out = f();
        self.visiting.borrow_mut().pop();
        out
    }

    pub fn group(&self, g: &GroupRef, what: &str) -> CliResult<FiniteGroup> {
        match g {
            GroupRef::Name(name) => {
                let spec = self.lookup(&self.decl.groups, "group", name)?;
                self.guard(format!("groups.{name}"), || {
                    self.group_spec(spec, &format!("groups.{name}"))
                })
            }
            GroupRef::Inline(spec) => self.group_spec(spec, what),
        }
    }

    fn group_spec(&self, spec: &GroupSpec, what: &str) -> CliResult<FiniteGroup> {
        match spec {
            GroupSpec::Trivial => Ok(FiniteGroup::trivial()),
            GroupSpec::Cyclic(n) if *n > 0 => Ok(FiniteGroup::cyclic(*n)),
            GroupSpec::Symmetric(k) if (1..=5).contains(k) => Ok(FiniteGroup::symmetric(*k)),
            GroupSpec::Cyclic(_) | GroupSpec::Symmetric(_) => {
                Err(input(format!("{what}: unsupported group size")))
            }
            GroupSpec::Table(rows) => {
                let n = rows.len();
                if rows.iter().any(|r| r.len() != n) {
                    return Err(input(format!(
                        "{what}: multiplication table must be square"
                    )));
                }
                FiniteGroup::from_table(n, rows.concat()).map_err(|e| classify(what, e))
            }
        }
    }

    /// Shape-checked only, so that the axioms can be reported on.
    pub fn crossed_module(&self, name: &str) -> CliResult<CrossedModule> {
        let spec = self.lookup(&self.decl.crossed_modules, "crossed module", name)?;
        let what = format!("crossed_modules.{name}");
        self.guard(what.clone(), || match spec {
            CrossedModuleSpec::Inner(g) => Ok(CrossedModule::inner(self.group(g, &what)?)),
            CrossedModuleSpec::Discrete(g) => Ok(CrossedModule::discrete(self.group(g, &what)?)),
            CrossedModuleSpec::CyclicReduction { n, m } => {
                CrossedModule::cyclic_reduction(*n, *m).map_err(|e| classify(&what, e))
            }
            CrossedModuleSpec::Explicit { g, h, t, alpha } => {
                let (g, h) = (self.group(g, &what)?, self.group(h, &what)?);
                if alpha.len() != g.order() || alpha.iter().any(|r| r.len() != h.order()) {
                    return Err(input(format!("{what}: alpha must be a |G| x |H| table")));
                }
                CrossedModule::from_parts(g, h, t.clone(), alpha.concat())
                    .map_err(|e| classify(&what, e))
            }
        })
    }

    pub fn two_group(&self, name: &str) -> CliResult<TwoGroup> {
        let spec = self.lookup(&self.decl.two_groups, "2-group", name)?;
        let what = format!("two_groups.{name}");
        self.guard(what.clone(), || match spec {
            TwoGroupSpec::FromCrossed(cm) => {
                two_group_from_crossed_module(&self.crossed_module(cm)?)
                    .map_err(|e| classify(&what, e))
            }
            TwoGroupSpec::Explicit { g0, g1, s, t, i } => TwoGroup::new(
                self.group(g0, &what)?,
                self.group(g1, &what)?,
                s.clone(),
                t.clone(),
                i.clone(),
            )
            .map_err(|e| classify(&what, e)),
        })
    }

    pub fn hom(&self, name: &str) -> CliResult<TwoGroupHom> {
        let spec = self.lookup(&self.decl.homs, "2-group homomorphism", name)?;
        let what = format!("homs.{name}");
        self.guard(what.clone(), || match spec {
            HomSpec::Tables {
                source,
                target,
                f0,
                f1,
            } => TwoGroupHom::new(
                self.two_group(source)?,
                self.two_group(target)?,
                f0.clone(),
                f1.clone(),
            )
            .map_err(|e| classify(&what, e)),
            HomSpec::Crossed {
                source,
                target,
                f_g,
                f_h,
            } => TwoGroupHom::from_crossed(
                &self.two_group(source)?,
                &self.two_group(target)?,
                f_g,
                f_h,
            )
            .map_err(|e| classify(&what, e)),
        })
    }

    pub fn algebra(&self, name: &str) -> CliResult<StarAlgebra> {
        let spec = self.lookup(&self.decl.algebras, "algebra", name)?;
        StarAlgebra::new(spec.blocks.clone(), spec.weights.clone())
            .map_err(|e| classify(&format!("algebras.{name}"), e))
    }

    pub fn element(&self, alg: &StarAlgebra, e: &Element, what: &str) -> CliResult<AlgebraElement> {
        let blocks = e
            .iter()
            .map(|m| to_matrix(m, what))
            .collect::<CliResult<Vec<_>>>()?;
        alg.element(blocks).map_err(|e| classify(what, e))
    }

    pub fn automorphism(
        &self,
        a: &AutomorphismRef,
        what: &str,
    ) -> CliResult<(StarAlgebra, Automorphism)> {
        match a {
            AutomorphismRef::Name(name) => {
                let spec = self.lookup(&self.decl.automorphisms, "automorphism", name)?;
                let what = format!("automorphisms.{name}");
                self.guard(what.clone(), || self.automorphism_spec(spec, &what))
            }
            AutomorphismRef::Inline(spec) => self.automorphism_spec(spec, what),
        }
    }

    fn automorphism_spec(
        &self,
        spec: &AutomorphismSpec,
        what: &str,
    ) -> CliResult<(StarAlgebra, Automorphism)> {
        let tol = self.tol;
        let wrap = |e| classify(what, e);
        match spec {
            AutomorphismSpec::Identity { algebra } => {
                let alg = self.algebra(algebra)?;
                let a = Automorphism::identity(&alg);
                Ok((alg, a))
            }
            AutomorphismSpec::Inner { algebra, unitary } => {
                let alg = self.algebra(algebra)?;
                let u = self.element(&alg, unitary, what)?;
                let a = Automorphism::inner(&alg, &u, tol).map_err(wrap)?;
                Ok((alg, a))
            }
            AutomorphismSpec::BlockPermutation { algebra, perm } => {
                let alg = self.algebra(algebra)?;
                let a = Automorphism::block_permutation(&alg, perm).map_err(wrap)?;
                Ok((alg, a))
            }
            AutomorphismSpec::Matrix { algebra, matrix } => {
                let alg = self.algebra(algebra)?;
                let a = Automorphism::new(&alg, to_matrix(matrix, what)?, tol).map_err(wrap)?;
                Ok((alg, a))
            }
        }
    }

    pub fn bimodule_data(&self, data: &BimoduleData, what: &str) -> CliResult<Bimodule> {
        let left = self.algebra(&data.left_algebra)?;
        let right = self.algebra(&data.right_algebra)?;
        let l = data
            .left_ops
            .iter()
            .map(|m| to_matrix(m, what))
            .collect::<CliResult<Vec<_>>>()?;
        let r = data
            .right_ops
            .iter()
            .map(|m| to_matrix(m, what))
            .collect::<CliResult<Vec<_>>>()?;
        Bimodule::from_parts(left, right, l, r).map_err(|e| classify(what, e))
    }

    pub fn bimodule(&self, name: &str) -> CliResult<Bimodule> {
        let spec = self.lookup(&self.decl.bimodules, "bimodule", name)?;
        let what = format!("bimodules.{name}");
        self.guard(what.clone(), || match spec {
            BimoduleSpec::Standard { algebra } => Ok(Bimodule::standard(&self.algebra(algebra)?)),
            BimoduleSpec::Twisted { algebra, twist } => {
                let alg = self.algebra(algebra)?;
                let (twist_alg, theta) = self.automorphism(twist, &what)?;
                if twist_alg != alg {
                    return Err(input(format!("{what}: twist lives on a different algebra")));
                }
                Ok(Bimodule::twisted(&alg, &theta))
            }
            BimoduleSpec::Explicit(data) => self.bimodule_data(data, &what),
        })
    }

    fn objects(
        &self,
        alg: &StarAlgebra,
        r0: &[AutomorphismRef],
        what: &str,
    ) -> CliResult<Vec<Automorphism>> {
        r0.iter()
            .map(|a| {
                let (a_alg, theta) = self.automorphism(a, what)?;
                if &a_alg != alg {
                    return Err(input(format!("{what}: R0 entry on a different algebra")));
                }
                Ok(theta)
            })
            .collect()
    }

    pub fn representation(&self, name: &str) -> CliResult<(TwoGroup, Representation)> {
        let spec = self.lookup(&self.decl.representations, "representation", name)?;
        let what = format!("representations.{name}");
        let tol = self.tol;
        self.guard(what.clone(), || match spec {
            RepresentationSpec::Trivial { two_group, algebra } => {
                let g = self.two_group(two_group)?;
                let l2 = StandardBimodule::new(&self.algebra(algebra)?);
                let rep = Representation::trivial(&g, &l2);
                Ok((g, rep))
            }
            RepresentationSpec::CrossedData {
                two_group,
                algebra,
                r0,
                u,
            } => {
                let g = self.two_group(two_group)?;
                let alg = self.algebra(algebra)?;
                let objects = self.objects(&alg, r0, &what)?;
                let u = u
                    .iter()
                    .map(|e| self.element(&alg, e, &what))
                    .collect::<CliResult<Vec<_>>>()?;
                let rep = Representation::from_crossed_data(
                    &g,
                    &StandardBimodule::new(&alg),
                    objects,
                    &u,
                    tol,
                )
                .map_err(|e| classify(&what, e))?;
                Ok((g, rep))
            }
            RepresentationSpec::Unitaries {
                two_group,
                algebra,
                r0,
                r1,
            } => {
                let g = self.two_group(two_group)?;
                let alg = self.algebra(algebra)?;
                let l2 = StandardBimodule::new(&alg);
                let objects = self.objects(&alg, r0, &what)?;
                let morphisms = r1
                    .iter()
                    .map(|m| {
                        NElement::from_unitary(&l2, to_matrix(m, &what)?, tol)
                            .map_err(|e| classify(&what, e))
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                let rep = Representation::new(&g, &l2, objects, morphisms)
                    .map_err(|e| classify(&what, e))?;
                Ok((g, rep))
            }
        })
    }

    pub fn cover(&self, name: &str) -> CliResult<Cover> {
        let spec = self.lookup(&self.decl.covers, "cover", name)?;
        Cover::new(spec.base, spec.proj.clone()).map_err(|e| classify(&format!("covers.{name}"), e))
    }

    /// Shape-checked only.
    pub fn bundle(&self, name: &str) -> CliResult<PrincipalTwoBundle> {
        let spec = self.lookup(&self.decl.bundles, "bundle", name)?;
        let what = format!("bundles.{name}");
        self.guard(what.clone(), || match spec {
            BundleSpec::Trivial {
                two_group,
                base,
                anchor,
            } => {
                let g = self.two_group(two_group)?;
                match anchor {
                    None => Ok(PrincipalTwoBundle::trivial(&g, *base)),
                    Some(a) if a.len() == *base => PrincipalTwoBundle::trivial_with_anchor(&g, a)
                        .map_err(|e| classify(&what, e)),
                    Some(_) => Err(input(format!(
                        "{what}: anchor needs one entry per base point"
                    ))),
                }
            }
            BundleSpec::Explicit {
                two_group,
                base,
                proj,
                action,
                anchor,
            } => {
                let g = self.two_group(two_group)?;
                let h = g.crossed().h().clone();
                if action.len() != proj.len() || action.iter().any(|r| r.len() != h.order()) {
                    return Err(input(format!(
                        "{what}: action must have one row of |H| entries per point"
                    )));
                }
                let under = PrincipalBundle::from_parts(h, *base, proj.clone(), action.concat())
                    .map_err(|e| classify(&what, e))?;
                PrincipalTwoBundle::from_parts(g, under, anchor.clone())
                    .map_err(|e| classify(&what, e))
            }
        })
    }

    pub fn gerbe(&self, name: &str) -> CliResult<Rc<BundleGerbe>> {
        if let Some(q) = self.gerbes.borrow().get(name) {
            return Ok(q.clone());
        }
        let spec = self.lookup(&self.decl.gerbes, "gerbe", name)?;
        let what = format!("gerbes.{name}");
        let q = self.guard(what.clone(), || match spec {
            GerbeSpec::Trivial { cover, two_group } => Ok(BundleGerbe::trivial(
                self.cover(cover)?,
                &self.two_group(two_group)?,
            )),
            GerbeSpec::Cocycle {
                cover,
                two_group,
                g,
                c,
            } => BundleGerbe::from_cocycle(self.cover(cover)?, &self.two_group(two_group)?, g, c)
                .map_err(|e| classify(&what, e)),
            GerbeSpec::Explicit { cover, bundle, mu } => {
                BundleGerbe::from_parts(self.cover(cover)?, self.bundle(bundle)?, mu.clone())
                    .map_err(|e| classify(&what, e))
            }
            GerbeSpec::Extension { gerbe, hom } => {
                let q = self.gerbe(gerbe)?;
                let f = self.hom(hom)?;
                Ok(extend_gerbe(&q, &f).map_err(|e| classify(&what, e))?.gerbe)
            }
            GerbeSpec::Pullback { gerbe, cover, rho } => {
                Ok(self.pull(&what, gerbe, cover, rho)?.1.gerbe)
            }
        })?;
        let q = Rc::new(q);
        self.gerbes.borrow_mut().insert(name.to_string(), q.clone());
        Ok(q)
    }

    /// A pullback declaration: the original gerbe, the pullback, and `ρ`.
    pub fn pulled(&self, name: &str) -> CliResult<(Rc<BundleGerbe>, PulledBackGerbe, Vec<usize>)> {
        let spec = self.lookup(&self.decl.gerbes, "gerbe", name)?;
        let what = format!("gerbes.{name}");
        match spec {
            GerbeSpec::Pullback { gerbe, cover, rho } => {
                self.guard(what.clone(), || self.pull(&what, gerbe, cover, rho))
            }
            _ => Err(input(format!("{what} is not a pullback"))),
        }
    }

    fn pull(
        &self,
        what: &str,
        gerbe: &str,
        cover: &str,
        rho: &[usize],
    ) -> CliResult<(Rc<BundleGerbe>, PulledBackGerbe, Vec<usize>)> {
        let q = self.gerbe(gerbe)?;
        let pulled = pullback_gerbe(&q, self.cover(cover)?, rho).map_err(|e| classify(what, e))?;
        Ok((q, pulled, rho.to_vec()))
    }

    pub fn two_vector_bundle(&self, name: &str) -> CliResult<Rc<TwoVectorBundle>> {
        if let Some(v) = self.bundles.borrow().get(name) {
            return Ok(v.clone());
        }
        let spec = self.lookup(&self.decl.two_vector_bundles, "2-vector bundle", name)?;
        let what = format!("two_vector_bundles.{name}");
        let v = self.guard(what.clone(), || match spec {
            TwoVectorBundleSpec::Trivial { cover, algebra } => Ok(TwoVectorBundle::trivial(
                self.cover(cover)?,
                &self.algebra(algebra)?,
            )),
            TwoVectorBundleSpec::Associate {
                gerbe,
                representation,
            } => {
                let q = self.gerbe(gerbe)?;
                let (_, rep) = self.representation(representation)?;
                associate(&q, &rep, self.tol).map_err(|e| classify(&what, e))
            }
            TwoVectorBundleSpec::Explicit {
                cover,
                algebras,
                bimodules,
                mu,
            } => {
                let cover = self.cover(cover)?;
                let algebras = algebras
                    .iter()
                    .map(|a| self.algebra(a))
                    .collect::<CliResult<Vec<_>>>()?;
                let fibres = bimodules
                    .iter()
                    .enumerate()
                    .map(|(w, d)| self.bimodule_data(d, &format!("{what}.bimodules[{w}]")))
                    .collect::<CliResult<Vec<_>>>()?;
                let mu = mu
                    .iter()
                    .enumerate()
                    .map(|(z, m)| to_matrix(m, &format!("{what}.mu[{z}]")))
                    .collect::<CliResult<Vec<_>>>()?;
                TwoVectorBundle::new(cover, algebras, BimoduleBundle::new(fibres), mu)
                    .map_err(|e| classify(&what, e))
            }
        })?;
        let v = Rc::new(v);
        self.bundles
            .borrow_mut()
            .insert(name.to_string(), v.clone());
        Ok(v)
    }

    /// The refinement data together with its source and target.
    pub fn refinement(
        &self,
        name: &str,
    ) -> CliResult<(Refinement, Rc<TwoVectorBundle>, Rc<TwoVectorBundle>)> {
        let spec = self.lookup(&self.decl.refinements, "refinement", name)?;
        let what = format!("refinements.{name}");
        self.guard(what.clone(), || match spec {
            RefinementSpec::Identity { bundle } => {
                let v = self.two_vector_bundle(bundle)?;
                Ok((Refinement::identity(&v), v.clone(), v))
            }
            RefinementSpec::Pullback {
                gerbe,
                representation,
            } => {
                let (q, pulled, rho) = self.pulled(gerbe)?;
                let (_, rep) = self.representation(representation)?;
                let tol = self.tol;
                let r = pullback_refinement(&q, &pulled, &rho, &rep, tol)
                    .map_err(|e| classify(&what, e))?;
                let source = associate(&pulled.gerbe, &rep, tol).map_err(|e| classify(&what, e))?;
                let target = associate(&q, &rep, tol).map_err(|e| classify(&what, e))?;
                Ok((r, Rc::new(source), Rc::new(target)))
            }
            RefinementSpec::Explicit {
                source,
                target,
                rho,
                phi,
                u,
            } => {
                let v = self.two_vector_bundle(source)?;
                let v2 = self.two_vector_bundle(target)?;
                let phi = phi
                    .iter()
                    .map(|m| Ok(Automorphism::unchecked(to_matrix(m, &what)?)))
                    .collect::<CliResult<Vec<_>>>()?;
                let u = u
                    .iter()
                    .map(|m| to_matrix(m, &what))
                    .collect::<CliResult<Vec<_>>>()?;
                Ok((
                    Refinement {
                        rho: rho.clone(),
                        phi,
                        u,
                    },
                    v,
                    v2,
                ))
            }
        })
    }
}

/// A self-contained document declaring `v` as `name`.
pub fn export_two_vector_bundle(v: &TwoVectorBundle, name: &str) -> Document {
    let mut decl = Declarations::default();
    let mut alg_names: Vec<(StarAlgebra, String)> = Vec::new();
    let mut name_of = |a: &StarAlgebra| -> String {
        if let Some((_, n)) = alg_names.iter().find(|(b, _)| b == a) {
            return n.clone();
        }
        let n = if alg_names.is_empty() {
            "A".to_string()
        } else {
            format!("A{}", alg_names.len())
        };
        alg_names.push((a.clone(), n.clone()));
        n
    };
    let algebras: Vec<String> = v.algebras().iter().map(&mut name_of).collect();
    let bimodules = v
        .bimodules()
        .fibres()
        .iter()
        .map(|h| BimoduleData {
            left_algebra: name_of(h.left_alg()),
            right_algebra: name_of(h.right_alg()),
            left_ops: h.left_ops().iter().map(from_matrix).collect(),
            right_ops: h.right_ops().iter().map(from_matrix).collect(),
        })
        .collect();
    for (a, n) in alg_names {
        let weights = a
            .weights()
            .iter()
            .any(|&w| w != 1.0)
            .then(|| a.weights().to_vec());
        decl.algebras.insert(
            n,
            AlgebraSpec {
                blocks: a.blocks().to_vec(),
                weights,
            },
        );
    }
    let cover = v.cover();
    decl.covers.insert(
        "Y".into(),
        CoverSpec {
            base: cover.base().len,
            proj: cover.proj_table().to_vec(),
        },
    );
    decl.two_vector_bundles.insert(
        name.to_string(),
        TwoVectorBundleSpec::Explicit {
            cover: "Y".into(),
            algebras,
            bimodules,
            mu: v.mu_table().iter().map(from_matrix).collect(),
        },
    );
    Document {
        version: crate::FORMAT_VERSION.into(),
        declarations: decl,
        tasks: Vec::new(),
    }
}
