//! Serializable result documents and CSV tables.

use hyperarea_core::geometry::ViolationKind;
use hyperarea_core::kappa::ConvergenceRow;
use hyperarea_core::observables::{AreaResult, LoopTerm, WilsonResult};
use hyperarea_core::{Complex64, Crossing, Piercing, ValidationReport};
use serde::{Deserialize, Serialize};

use crate::manifest::RunManifest;

pub type Pair = [f64; 2];

fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationOut {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plane: Option<usize>,
    pub loops: [usize; 2],
    pub params: [f64; 2],
    pub witnesses: [[f64; 4]; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationOut {
    pub manifest: RunManifest,
    pub valid: bool,
    pub violations: Vec<ViolationOut>,
}

impl ValidationOut {
    pub fn new(manifest: RunManifest, r: &ValidationReport) -> Self {
        let violations = r
            .violations
            .iter()
            .map(|v| {
                let (kind, plane) = match v.kind {
                    ViolationKind::DegenerateSegment => ("degenerate-segment", None),
                    ViolationKind::SpatialCoincidence => ("spatial-coincidence", None),
                    ViolationKind::TimeCoincidence { plane } => ("time-coincidence", Some(plane.index())),
                };
                ViolationOut {
                    kind: kind.to_string(),
                    plane,
                    loops: [v.loops.0, v.loops.1],
                    params: [v.params.0, v.params.1],
                    witnesses: [v.witness.0.to_array(), v.witness.1.to_array()],
                }
            })
            .collect();
        Self {
            manifest,
            valid: r.valid(),
            violations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopTermOut {
    #[serde(rename = "loop")]
    pub loop_index: usize,
    pub plus: Pair,
    pub minus: Pair,
}

impl From<&LoopTerm> for LoopTermOut {
    fn from(t: &LoopTerm) -> Self {
        Self {
            loop_index: t.loop_index,
            plus: pair(t.plus),
            minus: pair(t.minus),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiercingOut {
    #[serde(rename = "loop")]
    pub loop_index: usize,
    pub s: f64,
    pub point: [f64; 2],
    pub orientation: i8,
    pub height: i8,
    pub epsilon: i32,
}

impl From<&Piercing> for PiercingOut {
    fn from(p: &Piercing) -> Self {
        Self {
            loop_index: p.loop_index,
            s: p.s,
            point: p.point,
            orientation: p.orientation,
            height: p.height,
            epsilon: p.epsilon(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WilsonOut {
    pub manifest: RunManifest,
    pub value: Pair,
    pub per_loop_terms: Vec<LoopTermOut>,
    pub sk: Vec<i32>,
}

impl WilsonOut {
    pub fn new(manifest: RunManifest, w: &WilsonResult) -> Self {
        Self {
            manifest,
            value: pair(w.value),
            per_loop_terms: w.per_loop_terms.iter().map(Into::into).collect(),
            sk: w.sk_values.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaOut {
    pub manifest: RunManifest,
    pub value: Pair,
    pub prefactor: f64,
    pub per_loop_terms: Vec<LoopTermOut>,
    pub piercing_sums: Pair,
    pub sk: Vec<i32>,
    pub piercing_counts: Vec<usize>,
    pub piercings: Vec<PiercingOut>,
}

impl AreaOut {
    pub fn new(manifest: RunManifest, a: &AreaResult) -> Self {
        Self {
            manifest,
            value: pair(a.value),
            prefactor: a.prefactor,
            per_loop_terms: a.per_loop_terms.iter().map(Into::into).collect(),
            piercing_sums: [a.piercing_sums.0, a.piercing_sums.1],
            sk: a.sk_values.clone(),
            piercing_counts: a.piercing_counts.clone(),
            piercings: a.piercings.iter().map(Into::into).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingRow {
    pub loop_a: usize,
    pub loop_b: usize,
    pub plane: usize,
    pub s: f64,
    pub t: f64,
    pub u: f64,
    pub v: f64,
    pub orientation: i8,
    pub height: i8,
    pub time_lag: i8,
    pub product: i32,
}

impl CrossingRow {
    pub fn new(loop_a: usize, loop_b: usize, c: &Crossing) -> Self {
        Self {
            loop_a,
            loop_b,
            plane: c.plane.index(),
            s: c.s,
            t: c.t,
            u: c.point[0],
            v: c.point[1],
            orientation: c.orientation,
            height: c.height,
            time_lag: c.time_lag,
            product: c.product(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiercingRow {
    #[serde(rename = "loop")]
    pub loop_index: usize,
    pub s: f64,
    pub x2: f64,
    pub x3: f64,
    pub orientation: i8,
    pub height: i8,
    pub epsilon: i32,
}

impl From<&Piercing> for PiercingRow {
    fn from(p: &Piercing) -> Self {
        Self {
            loop_index: p.loop_index,
            s: p.s,
            x2: p.point[0],
            x3: p.point[1],
            orientation: p.orientation,
            height: p.height,
            epsilon: p.epsilon(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceCsvRow {
    pub kappa: f64,
    pub estimate_re: f64,
    pub estimate_im: f64,
    pub reference_re: f64,
    pub reference_im: f64,
    pub abs_error: f64,
    pub rel_error: f64,
    pub warning: bool,
}

impl From<&ConvergenceRow> for ConvergenceCsvRow {
    fn from(r: &ConvergenceRow) -> Self {
        Self {
            kappa: r.kappa,
            estimate_re: r.estimate.re,
            estimate_im: r.estimate.im,
            reference_re: r.reference.re,
            reference_im: r.reference.im,
            abs_error: r.abs_error,
            rel_error: r.rel_error,
            warning: r.warning,
        }
    }
}

/// CSV text: manifest line, header, rows, then `# `-prefixed trailer lines.
pub fn csv_table<R: Serialize>(manifest: &RunManifest, rows: &[R], header: &[&str], trailer: &[String]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8");
    let mut out = manifest.csv_line();
    out.push_str(&body);
    for line in trailer {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out
}

/// Read rows back from `csv_table` output, skipping comment lines.
pub fn read_csv<R: for<'de> Deserialize<'de>>(text: &str) -> Result<Vec<R>, csv::Error> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes())
        .deserialize()
        .collect()
}
