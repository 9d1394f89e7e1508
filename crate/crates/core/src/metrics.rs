//! Dependency-distance statistics and correlation.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::DependencyGraph;
use crate::registry::{Named, Registry};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("{0}")]
    Undefined(String),

    #[error("{which} series is constant; correlation undefined")]
    ConstantSeries { which: &'static str },

    #[error("series lengths differ ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("need at least 3 pairs, got {0}")]
    TooFewPairs(usize),
}

/// Mean distance over all non-ROOT arcs, normalised by `n - 1` units.
pub fn mdd_rooted(graph: &DependencyGraph) -> Result<f64, MetricsError> {
    let n = graph.unit_count();
    if n < 2 {
        return Err(MetricsError::Undefined(format!(
            "rooted MDD needs at least 2 units, document has {}",
            n
        )));
    }
    let total: usize = graph.distances().iter().sum();
    Ok(total as f64 / (n - 1) as f64)
}

/// Mean distance over the arcs present.
pub fn mdd_local(graph: &DependencyGraph) -> Result<f64, MetricsError> {
    let distances = graph.distances();
    if distances.is_empty() {
        return Err(MetricsError::Undefined(
            "local MDD needs at least 1 arc".to_owned(),
        ));
    }
    let total: usize = distances.iter().sum();
    Ok(total as f64 / distances.len() as f64)
}

/// Sample standard deviation (k - 1 denominator) of a list of values.
pub fn sample_sd(values: &[f64]) -> Result<f64, MetricsError> {
    let k = values.len();
    if k < 2 {
        return Err(MetricsError::Undefined(format!(
            "standard deviation needs at least 2 values, got {}",
            k
        )));
    }
    let mean = values.iter().sum::<f64>() / k as f64;
    let squares: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    Ok((squares / (k - 1) as f64).sqrt())
}

/// Sample standard deviation of the graph's non-ROOT arc distances.
pub fn sd_distances(graph: &DependencyGraph) -> Result<f64, MetricsError> {
    let values: Vec<f64> = graph.distances().into_iter().map(|d| d as f64).collect();
    sample_sd(&values)
}

/// Per-document statistics. Undefined values are `None`, never zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub doc_id: String,
    pub unit_count: usize,
    /// All arcs, including a ROOT arc if present.
    pub arc_count: usize,
    pub mdd: Option<f64>,
    pub sd: Option<f64>,
}

/// How the MDD of a document is normalised.
pub trait MddMode: Named + Send + Sync {
    fn mdd(&self, graph: &DependencyGraph) -> Result<f64, MetricsError>;

    fn record(&self, graph: &DependencyGraph) -> MetricsRecord {
        MetricsRecord {
            doc_id: graph.doc_id().to_owned(),
            unit_count: graph.unit_count(),
            arc_count: graph.arcs().len(),
            mdd: self.mdd(graph).ok(),
            sd: sd_distances(graph).ok(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct LocalMdd;

impl Named for LocalMdd {
    fn name(&self) -> &'static str {
        "local"
    }
}

impl MddMode for LocalMdd {
    fn mdd(&self, graph: &DependencyGraph) -> Result<f64, MetricsError> {
        mdd_local(graph)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RootedMdd;

impl Named for RootedMdd {
    fn name(&self) -> &'static str {
        "rooted"
    }
}

impl MddMode for RootedMdd {
    fn mdd(&self, graph: &DependencyGraph) -> Result<f64, MetricsError> {
        mdd_rooted(graph)
    }
}

pub fn mdd_modes() -> Registry<dyn MddMode> {
    let mut registry: Registry<dyn MddMode> = Registry::new("MDD mode");
    registry.register(Arc::new(LocalMdd)).expect("unique name");
    registry.register(Arc::new(RootedMdd)).expect("unique name");
    registry
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricField {
    Mdd,
    Sd,
}

impl MetricField {
    pub fn get(&self, record: &MetricsRecord) -> Option<f64> {
        match self {
            MetricField::Mdd => record.mdd,
            MetricField::Sd => record.sd,
        }
    }
}

impl std::str::FromStr for MetricField {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mdd" => Ok(MetricField::Mdd),
            "sd" => Ok(MetricField::Sd),
            other => Err(format!("unknown metric field '{}' (expected mdd or sd)", other)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorpusMean {
    pub mean: f64,
    pub count: usize,
    pub skipped: usize,
}

/// Mean of `field` over the records where it is defined. Records are
/// summed in doc_id order so the result does not depend on input order.
pub fn corpus_mean(records: &[MetricsRecord], field: MetricField) -> Result<CorpusMean, MetricsError> {
    let mut sorted: Vec<&MetricsRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
    let defined: Vec<f64> = sorted.iter().filter_map(|r| field.get(r)).collect();
    if defined.is_empty() {
        return Err(MetricsError::Undefined(
            "no defined values to average".to_owned(),
        ));
    }
    Ok(CorpusMean {
        mean: defined.iter().sum::<f64>() / defined.len() as f64,
        count: defined.len(),
        skipped: records.len() - defined.len(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationResult {
    pub pairs: usize,
    pub r: f64,
    /// `r * sqrt(df / (1 - r^2))`; infinite when |r| = 1.
    pub t: f64,
    pub df: usize,
}

/// Pearson's r between paired series, with its t statistic.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<CorrelationResult, MetricsError> {
    if xs.len() != ys.len() {
        return Err(MetricsError::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    let n = xs.len();
    if n < 3 {
        return Err(MetricsError::TooFewPairs(n));
    }
    let mean_x = xs.iter().sum::<f64>() / n as f64;
    let mean_y = ys.iter().sum::<f64>() / n as f64;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 {
        return Err(MetricsError::ConstantSeries { which: "left" });
    }
    if syy == 0.0 {
        return Err(MetricsError::ConstantSeries { which: "right" });
    }
    let r = (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0);
    let df = n - 2;
    let residual = 1.0 - r * r;
    let t = if residual <= 0.0 {
        f64::INFINITY.copysign(r)
    } else {
        r * (df as f64 / residual).sqrt()
    };
    Ok(CorrelationResult { pairs: n, r, t, df })
}
