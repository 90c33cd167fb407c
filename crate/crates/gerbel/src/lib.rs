//! JSON scenario documents, reports and the `gerbel` command line on top of
//! `gerbel-core`.

pub mod commands;
pub mod demos;
pub mod report;
pub mod resolve;
pub mod schema;

use gerbel_core::Tolerance;

pub use commands::{Options, Outcome, COMMANDS};
pub use report::{RunReport, Status, TaskResult, ViolationJson};
pub use resolve::{CliError, CliResult, Resolver};
pub use schema::Document;

pub const FORMAT_VERSION: &str = "1";

/// Parses a scenario document; errors carry line and column.
pub fn parse_document(text: &str, origin: &str) -> CliResult<Document> {
    let doc: Document =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("{origin}: {e}")))?;
    if doc.version != FORMAT_VERSION {
        return Err(CliError::Input(format!(
            "{origin}: unsupported format version '{}' (expected '{FORMAT_VERSION}')",
            doc.version
        )));
    }
    Ok(doc)
}

/// Runs every task of a document in order.
pub fn run_tasks(doc: &Document, tol: Tolerance, opts: Options) -> CliResult<Vec<Outcome>> {
    if doc.tasks.is_empty() {
        return Err(CliError::Input("document has no tasks".into()));
    }
    let resolver = Resolver::new(&doc.declarations, tol);
    let mut out = Vec::new();
    for task in &doc.tasks {
        out.extend(commands::run(&resolver, opts, &task.command, &task.inputs)?);
    }
    Ok(out)
}
