use crate::ObsError;
use model_builder::{Boundary, Couplings, LadderSpec, ModelKind};
use serde::{Deserialize, Serialize};
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

/// Model names as used on the command line and in stored records.
pub fn model_label(kind: ModelKind) -> &'static str {
    match kind {
        ModelKind::Full => "full",
        ModelKind::UnitaryGauge => "unitary",
        ModelKind::PureAxial => "pure_axial",
        ModelKind::PureDual => "pure_dual",
        ModelKind::ClockLimit => "clock",
    }
}

pub fn boundaries_label(spec: &LadderSpec) -> String {
    let side = |b: Boundary| match b {
        Boundary::Rough => "rough",
        Boundary::Smooth => "smooth",
    };
    format!("{}-{}", side(spec.boundary_left), side(spec.boundary_right))
}

/// Everything needed to reproduce the run a record came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub model: String,
    pub n: usize,
    pub l: usize,
    pub g: f64,
    pub lambda: f64,
    pub lambda_b: f64,
    pub g_b: Option<f64>,
    pub boundaries: String,
    /// Bond dimension, tensor-network runs only.
    pub m: Option<usize>,
    /// Largest discarded weight, tensor-network runs only.
    pub eps_trunc: Option<f64>,
    pub seed: u64,
}

impl RunMeta {
    pub fn new(kind: ModelKind, spec: &LadderSpec, couplings: &Couplings, seed: u64) -> RunMeta {
        RunMeta {
            model: model_label(kind).to_string(),
            n: spec.n,
            l: spec.l,
            g: couplings.g,
            lambda: couplings.lambda,
            lambda_b: couplings.lambda_b,
            g_b: couplings.g_b,
            boundaries: boundaries_label(spec),
            m: None,
            eps_trunc: None,
            seed,
        }
    }

    pub fn with_truncation(mut self, m: usize, eps_trunc: f64) -> RunMeta {
        self.m = Some(m);
        self.eps_trunc = Some(eps_trunc);
        self
    }
}

/// One measured expectation value. `args` carries the observable's indices
/// (rung positions, legs as 0/1, channel tags), `name` which observable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableRecord {
    pub schema: u32,
    pub name: String,
    pub args: Vec<i64>,
    pub re: f64,
    pub im: f64,
    pub meta: RunMeta,
}

impl ObservableRecord {
    pub fn new(name: &str, args: Vec<i64>, value: clock_algebra::C64, meta: RunMeta) -> Self {
        ObservableRecord {
            schema: SCHEMA_VERSION,
            name: name.to_string(),
            args,
            re: value.re,
            im: value.im,
            meta,
        }
    }
}

/// Append records to a JSON-lines file, creating it if needed.
pub fn append_records(path: &Path, records: &[ObservableRecord]) -> Result<(), ObsError> {
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    let mut w = BufWriter::new(file);
    for rec in records {
        serde_json::to_writer(&mut w, rec)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Read every record from a JSON-lines file, skipping blank lines.
pub fn read_records(path: &Path) -> Result<Vec<ObservableRecord>, ObsError> {
    let file = std::fs::File::open(path)?;
    let mut out = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line)?);
    }
    Ok(out)
}
