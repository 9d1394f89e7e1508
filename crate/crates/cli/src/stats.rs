use std::collections::{BTreeMap, BTreeSet};

use anyhow::{bail, Context, Result};
use discodep::export::codec_for_path;
use discodep::{mdd_modes, pearson, read_metrics, write_correlation, write_metrics, MetricField, MetricsRecord};
use rayon::prelude::*;

use crate::inputs::{discover, doc_id_of, emit, read_bytes};
use crate::{CorrelateArgs, MetricsArgs, Status};

const DEP_EXTENSIONS: [&str; 3] = ["conll", "csv", "json"];

pub fn metrics(args: &MetricsArgs) -> Result<Status> {
    let mode = mdd_modes().get(&args.mode)?;
    let files = discover(&args.input, &DEP_EXTENSIONS)?;

    let records = files
        .par_iter()
        .map(|path| -> Result<MetricsRecord> {
            let codec = codec_for_path(path)
                .with_context(|| format!("{}: unrecognised format", path.display()))?;
            let graph = codec
                .read(&read_bytes(path)?, &doc_id_of(path))
                .with_context(|| format!("reading {}", path.display()))?;
            Ok(mode.record(&graph))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut seen = BTreeSet::new();
    for record in &records {
        if !seen.insert(record.doc_id.as_str()) {
            bail!("document '{}' appears more than once", record.doc_id);
        }
    }
    emit(args.out.as_deref(), &write_metrics(&records))?;
    Ok(Status::Success)
}

fn load(path: &std::path::Path, field: MetricField) -> Result<BTreeMap<String, Option<f64>>> {
    let records = read_metrics(&read_bytes(path)?)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut values = BTreeMap::new();
    for record in records {
        let value = field.get(&record);
        if values.insert(record.doc_id.clone(), value).is_some() {
            bail!("{}: document '{}' appears more than once", path.display(), record.doc_id);
        }
    }
    Ok(values)
}

pub fn correlate(args: &CorrelateArgs) -> Result<Status> {
    if args.key != "doc_id" {
        bail!("unsupported join key '{}'; only doc_id is available", args.key);
    }
    let field: MetricField = args.field.parse().map_err(anyhow::Error::msg)?;
    let left = load(&args.left, field)?;
    let right = load(&args.right, field)?;

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (id, x) in &left {
        match (x, right.get(id)) {
            (Some(x), Some(Some(y))) => {
                xs.push(*x);
                ys.push(*y);
            }
            (_, None) => log::info!("{}: only in {}", id, args.left.display()),
            _ => log::info!("{}: {} undefined, pair skipped", id, args.field),
        }
    }
    for id in right.keys().filter(|id| !left.contains_key(*id)) {
        log::info!("{}: only in {}", id, args.right.display());
    }
    if xs.is_empty() {
        bail!("no paired documents");
    }

    let result = pearson(&xs, &ys)?;
    emit(args.out.as_deref(), &write_correlation(&result))?;
    Ok(Status::Success)
}
