use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gerbel::{
    demos, parse_document, run_tasks, CliError, CliResult, Document, Options, Outcome, Resolver,
    RunReport,
};
use gerbel_core::Tolerance;

/// Verifies finite 2-groups, bundle gerbes and their associated 2-Hilbert
/// bundles described in JSON scenario documents.
///
/// Exit status: 0 when every check passes, 1 when a verification fails,
/// 2 on malformed input.
#[derive(Parser)]
#[command(name = "gerbel", version)]
struct Cli {
    /// Absolute tolerance for every numerical comparison.
    #[arg(long, global = true, env = "GERBEL_TOLERANCE", default_value_t = 1e-9)]
    tolerance: f64,
    /// Sweep every section choice in monoidality checks, however large.
    #[arg(long, global = true)]
    exhaustive: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the constructed document (derive-2group, associate) or the
    /// report (everything else) to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Target {
    /// Scenario document.
    file: PathBuf,
    /// Declaration to check; all of them when omitted.
    #[arg(long)]
    name: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Crossed-module axioms: equivariance and the Peiffer identity.
    CheckCrossedModule(Target),
    /// The 2-group of a crossed module, with its tables.
    #[command(name = "derive-2group")]
    Derive2Group(Target),
    /// 2-group axioms, composition calculus and the crossed-module round trip.
    #[command(name = "check-2group")]
    Check2Group(Target),
    /// Functoriality of a representation on an algebra.
    CheckRepresentation(Target),
    /// Fuses two bimodules over their middle algebra.
    Fuse {
        file: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// The fusion isomorphisms of twisted standard bimodules over the image
    /// of a representation.
    ChiTable {
        file: PathBuf,
        #[arg(long)]
        representation: Option<String>,
    },
    /// Bundle gerbe axioms: μ well defined and associative over Y^[4].
    CheckGerbe(Target),
    /// Extends a gerbe along a 2-group homomorphism and checks the result.
    Extend {
        file: PathBuf,
        #[arg(long)]
        gerbe: String,
        #[arg(long)]
        hom: String,
    },
    /// Builds the associated 2-Hilbert bundle and checks its coherence.
    Associate {
        file: PathBuf,
        #[arg(long)]
        gerbe: String,
        #[arg(long)]
        representation: String,
    },
    /// 2-Hilbert bundle coherence over Y^[4].
    #[command(name = "check-2vb")]
    Check2Vb(Target),
    /// Refinement conditions between two 2-Hilbert bundles.
    CheckRefinement(Target),
    /// Runs a shipped demo, or the tasks listed in a document.
    Demo {
        /// Demo name or path to a document with tasks.
        name: Option<String>,
        #[arg(long)]
        list: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(e @ CliError::Verification { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn load(path: &Path) -> CliResult<Document> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_document(&text, &path.display().to_string())
}

fn run(cli: &Cli) -> CliResult<bool> {
    let tol = Tolerance::new(cli.tolerance).map_err(|e| CliError::Input(e.to_string()))?;
    let opts = Options {
        exhaustive: cli.exhaustive,
    };
    let mut inputs = BTreeMap::new();
    let mut put = |role: &str, v: &Option<String>| {
        if let Some(v) = v {
            inputs.insert(role.to_string(), v.clone());
        }
    };
    let (command, file) = match &cli.command {
        Command::CheckCrossedModule(t) => ("check-crossed-module", t),
        Command::Derive2Group(t) => ("derive-2group", t),
        Command::Check2Group(t) => ("check-2group", t),
        Command::CheckRepresentation(t) => ("check-representation", t),
        Command::CheckGerbe(t) => ("check-gerbe", t),
        Command::Check2Vb(t) => ("check-2vb", t),
        Command::CheckRefinement(t) => ("check-refinement", t),
        Command::Fuse { file, left, right } => {
            put("left", &Some(left.clone()));
            put("right", &Some(right.clone()));
            return finish(cli, run_file(file, tol, opts, "fuse", inputs)?);
        }
        Command::ChiTable {
            file,
            representation,
        } => {
            put("representation", representation);
            return finish(cli, run_file(file, tol, opts, "chi-table", inputs)?);
        }
        Command::Extend { file, gerbe, hom } => {
            put("gerbe", &Some(gerbe.clone()));
            put("hom", &Some(hom.clone()));
            return finish(cli, run_file(file, tol, opts, "extend", inputs)?);
        }
        Command::Associate {
            file,
            gerbe,
            representation,
        } => {
            put("gerbe", &Some(gerbe.clone()));
            put("representation", &Some(representation.clone()));
            return finish(cli, run_file(file, tol, opts, "associate", inputs)?);
        }
        Command::Demo { name, list } => {
            if *list || name.is_none() {
                for (n, _) in demos::DEMOS {
                    println!("{n}");
                }
                return Ok(true);
            }
            let name = name.as_deref().unwrap_or_default();
            let doc = match demos::find(name) {
                Some(text) => parse_document(text, name)?,
                None => load(Path::new(name))?,
            };
            return finish(cli, run_tasks(&doc, tol, opts)?);
        }
    };
    put("name", &file.name);
    finish(cli, run_file(&file.file, tol, opts, command, inputs)?)
}

fn run_file(
    path: &Path,
    tol: Tolerance,
    opts: Options,
    command: &str,
    inputs: BTreeMap<String, String>,
) -> CliResult<Vec<Outcome>> {
    let doc = load(path)?;
    let resolver = Resolver::new(&doc.declarations, tol);
    gerbel::commands::run(&resolver, opts, command, &inputs)
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn finish(cli: &Cli, outcomes: Vec<Outcome>) -> CliResult<bool> {
    let mut artifacts = Vec::new();
    let results = outcomes
        .into_iter()
        .map(|o| {
            artifacts.extend(o.artifact);
            o.result
        })
        .collect();
    let report = RunReport::new(results);
    let text = match cli.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json() + "\n",
    };
    match (&cli.out, artifacts.as_slice()) {
        (Some(path), [doc]) => {
            write(
                path,
                &(serde_json::to_string_pretty(doc).expect("documents serialize") + "\n"),
            )?;
            print!("{text}");
        }
        (Some(_), [_, _, ..]) => {
            return Err(CliError::Input(
                "--out needs a single constructed document".into(),
            ));
        }
        (Some(path), []) => write(path, &text)?,
        (None, _) => print!("{text}"),
    }
    Ok(report.passed())
}
