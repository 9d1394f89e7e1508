use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{Context, Result};
use discodep::align::OverlapAligner;
use discodep::pdtb2dep::{head_rules, OverrideRule, PdtbConverter};
use discodep::{
    dep_codecs, parse_dis, parse_relations, parse_segmentation, rst_converters, validate_graph,
    ColumnMap, DepCodec, Diagnostic, DiagnosticKind, LabelMap,
};
use rayon::prelude::*;

use crate::inputs::{
    diagnostics_report, discover, doc_id_of, log_findings, read_text, write_file,
};
use crate::{ConvertPdtbArgs, ConvertRstArgs, Status};

pub const DIAGNOSTICS_FILE: &str = "diagnostics.txt";

struct DocOutcome {
    doc_id: String,
    /// Encoded graph; `None` when the document was skipped.
    output: Option<Vec<u8>>,
    diagnostics: Vec<Diagnostic>,
}

/// Write outputs and the diagnostics report, in doc_id order.
fn finish(
    out_dir: &Path,
    codec: &dyn DepCodec,
    mut outcomes: Vec<DocOutcome>,
    strict: bool,
) -> Result<Status> {
    outcomes.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))?;

    let mut written = 0;
    for outcome in &outcomes {
        if let Some(bytes) = &outcome.output {
            let path = out_dir.join(format!("{}.{}", outcome.doc_id, codec.extension()));
            write_file(&path, bytes)?;
            written += 1;
        }
    }

    let findings: Vec<(String, Vec<Diagnostic>)> = outcomes
        .into_iter()
        .map(|o| (o.doc_id, o.diagnostics))
        .collect();
    log_findings(&findings);
    write_file(
        &out_dir.join(DIAGNOSTICS_FILE),
        diagnostics_report(&findings).as_bytes(),
    )?;

    let total: usize = findings.iter().map(|(_, d)| d.len()).sum();
    let errors = findings
        .iter()
        .flat_map(|(_, d)| d)
        .filter(|d| d.kind.is_error())
        .count();
    eprintln!(
        "converted {} of {} documents; {} diagnostics ({} errors)",
        written,
        findings.len(),
        total,
        errors
    );

    Ok(if strict && errors > 0 {
        Status::Diagnostics
    } else {
        Status::Success
    })
}

pub fn convert_pdtb(args: &ConvertPdtbArgs) -> Result<Status> {
    let codec = dep_codecs().get(&args.format)?;
    let map = match &args.columns {
        Some(positions) => positions.parse::<ColumnMap>()?,
        None => ColumnMap::default(),
    };
    let aligner = OverlapAligner::new(args.theta)?;
    let mut rule = head_rules().get(&args.head_rule)?;
    if let Some(path) = &args.head_overrides {
        let overrides = OverrideRule::parse_overrides(&read_text(path)?)
            .with_context(|| format!("reading {}", path.display()))?;
        rule = Arc::new(OverrideRule::new("overrides", rule, overrides));
    }
    let converter = PdtbConverter::new(Box::new(aligner), rule);

    let inventories = parse_segmentation(&read_text(&args.edus)?)
        .with_context(|| format!("reading {}", args.edus.display()))?;
    let files = discover(&args.input, &["pdtb"])?;

    let outcomes = files
        .par_iter()
        .map(|path| -> Result<DocOutcome> {
            let doc_id = doc_id_of(path);
            let text = read_text(path)?;
            let (relations, mut diagnostics) = parse_relations(&text, &map, false)
                .with_context(|| format!("parsing {}", path.display()))?;
            let Some(doc) = inventories.get(&doc_id) else {
                diagnostics.push(Diagnostic::new(
                    DiagnosticKind::MissingSegmentation,
                    format!("no segmentation for '{}'; document skipped", doc_id),
                ));
                return Ok(DocOutcome {
                    doc_id,
                    output: None,
                    diagnostics,
                });
            };
            let (graph, conversion) = converter
                .convert(doc, &relations)
                .with_context(|| format!("converting {}", path.display()))?;
            diagnostics.extend(conversion);
            diagnostics.extend(validate_graph(&graph));
            Ok(DocOutcome {
                doc_id,
                output: Some(codec.write(&graph)),
                diagnostics,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    finish(&args.out, codec.as_ref(), outcomes, args.strict)
}

pub fn convert_rst(args: &ConvertRstArgs) -> Result<Status> {
    let codec = dep_codecs().get(&args.format)?;
    let converter = rst_converters().get(&args.algo)?;
    let labels = args
        .label_map
        .as_ref()
        .map(|path: &PathBuf| {
            LabelMap::parse(&read_text(path)?).with_context(|| format!("reading {}", path.display()))
        })
        .transpose()?;
    let files = discover(&args.input, &["dis"])?;

    let outcomes = files
        .par_iter()
        .map(|path| -> Result<DocOutcome> {
            let doc_id = doc_id_of(path);
            let tree = parse_dis(&read_text(path)?)
                .with_context(|| format!("parsing {}", path.display()))?;
            let graph = converter.convert(&tree, &doc_id, labels.as_ref());
            Ok(DocOutcome {
                doc_id,
                diagnostics: validate_graph(&graph),
                output: Some(codec.write(&graph)),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    finish(&args.out, codec.as_ref(), outcomes, args.strict)
}
