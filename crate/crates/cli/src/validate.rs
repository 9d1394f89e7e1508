use anyhow::{Context, Result};
use discodep::export::codec_for_path;
use discodep::validate_graph;

use crate::inputs::{discover, doc_id_of, read_bytes};
use crate::{Status, ValidateArgs};

/// Print every structural finding as `file: kind: message`.
pub fn validate(args: &ValidateArgs) -> Result<Status> {
    let files = discover(&args.input, &["conll", "csv", "json"])?;
    let mut problems = 0;
    for path in &files {
        let codec = codec_for_path(path)
            .with_context(|| format!("{}: unrecognised format", path.display()))?;
        let graph = codec
            .read(&read_bytes(path)?, &doc_id_of(path))
            .with_context(|| format!("reading {}", path.display()))?;
        for finding in validate_graph(&graph) {
            println!("{}: {:?}: {}", path.display(), finding.kind, finding.message);
            problems += 1;
        }
    }
    if problems == 0 {
        println!("ok: {} files", files.len());
        Ok(Status::Success)
    } else {
        Ok(Status::Diagnostics)
    }
}
