//! The subcommands, run against a resolved document.

use std::collections::BTreeMap;

use gerbel_core::assoc::{check_refinement, check_two_vector_bundle, mod_monoidality};
use gerbel_core::fusion::{
    check_bimodule, chi, chi_associativity_residual, fuse, invertibility_residual,
    standard_invertibility_witness,
};
use gerbel_core::gerbe::{check_gerbe, extend_gerbe};
use gerbel_core::staralg::check_representation;
use gerbel_core::twogroup::{
    check_crossed_module, check_round_trip, check_two_group_parts, two_group_from_crossed_module,
    verify_calculus, TwoGroup,
};
use gerbel_core::Report;
use serde_json::{json, Map, Value};

use crate::report::TaskResult;
use crate::resolve::{classify, export_two_vector_bundle, CliError, CliResult, Resolver};
use crate::schema::{Declarations, Document, GroupRef, GroupSpec, TwoGroupSpec};

/// Every subcommand that runs against a document.
pub const COMMANDS: &[&str] = &[
    "check-crossed-module",
    "derive-2group",
    "check-2group",
    "check-representation",
    "fuse",
    "chi-table",
    "check-gerbe",
    "extend",
    "associate",
    "check-2vb",
    "check-refinement",
];

/// Fibres of `P` up to this size get the full section sweep by default.
const SWEEP_LIMIT: usize = 8;

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub exhaustive: bool,
}

/// A verdict, plus a document for commands that construct something.
pub struct Outcome {
    pub result: TaskResult,
    pub artifact: Option<Document>,
}

fn outcome(command: &str, name: &str, report: Report, info: Map<String, Value>) -> Outcome {
    Outcome {
        result: TaskResult::new(command, name, report, info),
        artifact: None,
    }
}

/// Turns a verification failure during construction into a failed result.
fn settle(command: &str, name: &str, r: CliResult<Outcome>) -> CliResult<Outcome> {
    match r {
        Err(CliError::Verification { what, report }) => {
            let mut prefixed = Report::new();
            prefixed.extend_prefixed(&what, report);
            Ok(outcome(command, name, prefixed, Map::new()))
        }
        other => other,
    }
}

type Names = fn(&Declarations) -> Vec<String>;

/// The input role naming the declaration each command is about, and the
/// table it lives in.
fn primary(command: &str) -> Option<(&'static str, Names)> {
    fn keys<T>(m: &BTreeMap<String, T>) -> Vec<String> {
        m.keys().cloned().collect()
    }
    Some(match command {
        "check-crossed-module" | "derive-2group" => ("name", |d| keys(&d.crossed_modules)),
        "check-2group" => ("name", |d| keys(&d.two_groups)),
        "check-representation" => ("name", |d| keys(&d.representations)),
        "chi-table" => ("representation", |d| keys(&d.representations)),
        "check-gerbe" => ("name", |d| keys(&d.gerbes)),
        "check-2vb" => ("name", |d| keys(&d.two_vector_bundles)),
        "check-refinement" => ("name", |d| keys(&d.refinements)),
        _ => return None,
    })
}

fn required<'i>(
    inputs: &'i BTreeMap<String, String>,
    command: &str,
    role: &str,
) -> CliResult<&'i str> {
    inputs
        .get(role)
        .map(String::as_str)
        .ok_or_else(|| CliError::Input(format!("{command} needs --{role}")))
}

/// Runs one command. Without a name, commands about a single declaration run
/// over every declaration of that kind, in name order.
pub fn run(
    r: &Resolver,
    opts: Options,
    command: &str,
    inputs: &BTreeMap<String, String>,
) -> CliResult<Vec<Outcome>> {
    if let Some((role, all)) = primary(command) {
        let names = match inputs.get(role).or_else(|| inputs.get("name")) {
            Some(n) => vec![n.clone()],
            None => all(r.declarations()),
        };
        if names.is_empty() {
            return Err(CliError::Input(format!(
                "{command}: nothing declared to run on"
            )));
        }
        return names
            .iter()
            .map(|n| settle(command, n, run_one(r, opts, command, n, inputs)))
            .collect();
    }
    let name = match command {
        "fuse" => format!(
            "{} * {}",
            required(inputs, command, "left")?,
            required(inputs, command, "right")?
        ),
        "extend" => format!(
            "{} along {}",
            required(inputs, command, "gerbe")?,
            required(inputs, command, "hom")?
        ),
        "associate" => format!(
            "{} with {}",
            required(inputs, command, "gerbe")?,
            required(inputs, command, "representation")?
        ),
        _ => return Err(CliError::Input(format!("unknown command '{command}'"))),
    };
    Ok(vec![settle(
        command,
        &name,
        run_one(r, opts, command, &name, inputs),
    )?])
}

fn run_one(
    r: &Resolver,
    opts: Options,
    command: &str,
    name: &str,
    inputs: &BTreeMap<String, String>,
) -> CliResult<Outcome> {
    let tol = r.tolerance();
    let mut info = Map::new();
    let report = match command {
        "check-crossed-module" => {
            let cm = r.crossed_module(name)?;
            info.insert("order_g".into(), cm.g().order().into());
            info.insert("order_h".into(), cm.h().order().into());
            check_crossed_module(&cm)
        }
        "derive-2group" => {
            let cm = r.crossed_module(name)?;
            let report = check_crossed_module(&cm);
            if !report.is_ok() {
                return Ok(outcome(command, name, report, info));
            }
            let g = two_group_from_crossed_module(&cm).map_err(|e| classify(name, e))?;
            let mut report = verify_calculus(&g);
            report.extend(check_round_trip(&g));
            let spec = explicit_two_group(&g);
            info.insert(
                "two_group".into(),
                serde_json::to_value(&spec).expect("serializable"),
            );
            let mut doc = Document {
                version: crate::FORMAT_VERSION.into(),
                declarations: Declarations::default(),
                tasks: Vec::new(),
            };
            doc.declarations.two_groups.insert(name.to_string(), spec);
            return Ok(Outcome {
                result: TaskResult::new(command, name, report, info),
                artifact: Some(doc),
            });
        }
        "check-2group" => {
            let spec = r
                .declarations()
                .two_groups
                .get(name)
                .ok_or_else(|| CliError::Input(format!("unknown 2-group '{name}'")))?;
            if let TwoGroupSpec::Explicit { g0, g1, s, t, i } = spec {
                let what = format!("two_groups.{name}");
                let (g0, g1) = (r.group(g0, &what)?, r.group(g1, &what)?);
                let report = check_two_group_parts(&g0, &g1, s, t, i);
                if !report.is_ok() {
                    return Ok(outcome(command, name, report, info));
                }
            }
            let g = r.two_group(name)?;
            info.insert("order_g0".into(), g.g0().order().into());
            info.insert("order_g1".into(), g.g1().order().into());
            let mut report = verify_calculus(&g);
            report.extend(check_round_trip(&g));
            report
        }
        "check-representation" => {
            let (g, rep) = r.representation(name)?;
            info.insert("dim_l2".into(), rep.l2().dim().into());
            check_representation(&g, &rep, tol)
        }
        "fuse" => {
            let (left, right) = (
                required(inputs, command, "left")?,
                required(inputs, command, "right")?,
            );
            let (h, k) = (r.bimodule(left)?, r.bimodule(right)?);
            let mut report = Report::new();
            report.extend_prefixed(left, check_bimodule(&h, tol));
            report.extend_prefixed(right, check_bimodule(&k, tol));
            if report.is_ok() {
                let f = fuse(&h, &k, tol).map_err(|e| classify(name, e))?;
                report.extend_prefixed("fusion", check_bimodule(f.bimodule(), tol));
                info.insert("dim_left".into(), h.dim().into());
                info.insert("dim_right".into(), k.dim().into());
                info.insert("dim_fused".into(), f.dim().into());
            }
            report
        }
        "chi-table" => {
            let (g, rep) = r.representation(name)?;
            chi_table(&g, &rep, tol, &mut info)?
        }
        "check-gerbe" => {
            let q = r.gerbe(name)?;
            let s = q.space();
            info.insert("points_y".into(), q.cover().total().len.into());
            info.insert("points_y3".into(), s.y3.len().into());
            info.insert("points_y4".into(), s.y4.len().into());
            check_gerbe(&q)
        }
        "extend" => {
            let q = r.gerbe(required(inputs, command, "gerbe")?)?;
            let f = r.hom(required(inputs, command, "hom")?)?;
            let ext = extend_gerbe(&q, &f).map_err(|e| classify(name, e))?;
            info.insert("points_p".into(), q.bundle().len().into());
            info.insert("points_extended".into(), ext.gerbe.bundle().len().into());
            check_gerbe(&ext.gerbe)
        }
        "associate" => {
            let gerbe = required(inputs, command, "gerbe")?;
            let q = r.gerbe(gerbe)?;
            let (_, rep) = r.representation(required(inputs, command, "representation")?)?;
            let v = gerbel_core::assoc::associate(&q, &rep, tol).map_err(|e| classify(name, e))?;
            let mut report = check_two_vector_bundle(&v, tol);
            let fibre = q.twogroup().crossed().h().order();
            if opts.exhaustive || fibre <= SWEEP_LIMIT {
                let s = q.space();
                let m = mod_monoidality(&s.pb23.bundle, &s.pb12.bundle, &rep, tol)
                    .map_err(|e| classify(name, e))?;
                info.insert("section_spread".into(), json!(m.section_spread));
                if m.section_spread > tol.eps() {
                    report.push(
                        "Y^[3]",
                        "monoidality map is independent of sections",
                        m.section_spread,
                    );
                }
            }
            info.insert("fibre_dim".into(), rep.l2().dim().into());
            return Ok(Outcome {
                result: TaskResult::new(command, name, report, info),
                artifact: Some(export_two_vector_bundle(&v, gerbe)),
            });
        }
        "check-2vb" => {
            let v = r.two_vector_bundle(name)?;
            let report = check_two_vector_bundle(&v, tol);
            let dims: Vec<usize> = v.bimodules().fibres().iter().map(|h| h.dim()).collect();
            info.insert("fibre_dims".into(), json!(dims));
            // Invertibility is only certified where the standard witness applies.
            let verified = report.is_ok()
                && v.bimodules().fibres().iter().all(|h| {
                    h.left_alg() == h.right_alg()
                        && h.dim() == h.left_alg().dim()
                        && invertibility_residual(
                            h,
                            &standard_invertibility_witness(h.left_alg()),
                            tol,
                        )
                        .is_ok_and(|res| res <= tol.eps())
                });
            info.insert(
                "invertibility".into(),
                (if verified { "verified" } else { "unverified" }).into(),
            );
            report
        }
        "check-refinement" => {
            let (refinement, v, v2) = r.refinement(name)?;
            check_refinement(&refinement, &v, &v2, tol)
        }
        _ => return Err(CliError::Input(format!("unknown command '{command}'"))),
    };
    Ok(outcome(command, name, report, info))
}

/// `χ` for every ordered pair of objects in the image of `R0`, and its
/// associativity on triples.
fn chi_table(
    g: &TwoGroup,
    rep: &gerbel_core::staralg::Representation,
    tol: gerbel_core::Tolerance,
    info: &mut Map<String, Value>,
) -> CliResult<Report> {
    let alg = rep.l2().algebra();
    let mut report = Report::new();
    let mut rows = Vec::new();
    let objects: Vec<usize> = g.g0().elements().collect();
    for &a in &objects {
        for &b in &objects {
            let loc = format!("(g1, g2) = ({a}, {b})");
            let x = chi(alg, rep.r0(a), rep.r0(b), tol).map_err(|e| classify(&loc, e))?;
            let unitarity = x.unitarity_residual();
            let intertwining = x.check(tol).max_residual();
            if unitarity > tol.eps() {
                report.push(loc.clone(), "chi is unitary", unitarity);
            }
            report.extend_prefixed(&loc, x.check(tol));
            rows.push(
                json!({"g1": a, "g2": b, "unitarity": unitarity, "intertwining": intertwining}),
            );
        }
    }
    let mut worst = 0.0f64;
    for &a in &objects {
        for &b in &objects {
            for &c in &objects {
                let res = chi_associativity_residual(alg, rep.r0(a), rep.r0(b), rep.r0(c), tol)
                    .map_err(|e| classify("chi associativity", e))?;
                worst = worst.max(res);
                if res > tol.eps() {
                    report.push(
                        format!("(g1, g2, g3) = ({a}, {b}, {c})"),
                        "chi is associative",
                        res,
                    );
                }
            }
        }
    }
    info.insert("pairs".into(), Value::Array(rows));
    info.insert("max_associativity_residual".into(), json!(worst));
    Ok(report)
}

fn explicit_two_group(g: &TwoGroup) -> TwoGroupSpec {
    let table = |grp: &gerbel_core::twogroup::FiniteGroup| {
        let n = grp.order();
        GroupRef::Inline(GroupSpec::Table(
            grp.table().chunks(n).map(<[usize]>::to_vec).collect(),
        ))
    };
    TwoGroupSpec::Explicit {
        g0: table(g.g0()),
        g1: table(g.g1()),
        s: g.s_table().to_vec(),
        t: g.t_table().to_vec(),
        i: g.i_table().to_vec(),
    }
}
