//! JSON and CSV encodings.
//!
//! Matrices are row-major arrays of `[re, im]` pairs. Floats are written in
//! shortest round-trip form and parsed exactly, so a write/read cycle is the
//! identity.

use std::io::{Read, Write};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use charvar_core::census::{ComponentReport, RetractSummary, SampleRecord};
use charvar_core::kempfness::FlowTrace;
use charvar_core::presentation::{build_family, parse_presentation, FamilySpec, GroupPresentation};
use charvar_core::retract::HomotopyReport;
use charvar_core::{MatC, Rep, C64};
use serde::{Deserialize, Serialize};

use crate::family::{format_family, parse_family};

pub type Complex = [f64; 2];

fn cx(z: C64) -> Complex {
    [z.re, z.im]
}

pub fn matrix_to_json(m: &MatC) -> Vec<Vec<Complex>> {
    (0..m.dim()).map(|i| m.row(i).iter().map(|z| cx(*z)).collect()).collect()
}

pub fn matrix_from_json(rows: &[Vec<Complex>]) -> Result<MatC> {
    let rows: Vec<Vec<C64>> = rows.iter().map(|r| r.iter().map(|[re, im]| C64::new(*re, *im)).collect()).collect();
    Ok(MatC::try_from_rows(&rows)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepFile {
    pub presentation: String,
    /// Family name (see [`crate::family`]); restores the family tag that plain
    /// presentation text cannot carry.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    pub dim: usize,
    pub images: Vec<Vec<Vec<Complex>>>,
}

impl RepFile {
    pub fn from_rep(rep: &Rep, family: Option<&FamilySpec>) -> Self {
        RepFile {
            presentation: rep.presentation().to_string(),
            family: family.map(format_family),
            dim: rep.dim(),
            images: rep.images().iter().map(matrix_to_json).collect(),
        }
    }

    pub fn presentation(&self) -> Result<GroupPresentation> {
        let parsed = parse_presentation(&self.presentation)?;
        let Some(name) = &self.family else { return Ok(parsed) };
        let built = build_family(&parse_family(name)?)?;
        if built.generator_names() != parsed.generator_names() || built.relators() != parsed.relators() {
            bail!("presentation text does not match family `{name}`");
        }
        Ok(built)
    }

    pub fn to_rep(&self) -> Result<Rep> {
        let images = self.images.iter().map(|m| matrix_from_json(m)).collect::<Result<Vec<_>>>()?;
        if images.iter().any(|m| m.dim() != self.dim) {
            bail!("image dimension does not match `dim` = {}", self.dim);
        }
        Ok(Rep::new(Arc::new(self.presentation()?), images)?)
    }
}

pub fn read_rep<R: Read>(r: R) -> Result<Rep> {
    let file: RepFile = serde_json::from_reader(r).context("malformed rep file")?;
    file.to_rep()
}

pub fn write_rep<W: Write>(w: W, rep: &Rep, family: Option<&FamilySpec>) -> Result<()> {
    write_json(w, &RepFile::from_rep(rep, family))
}

pub fn write_json<W: Write, T: Serialize>(mut w: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

/// `iter,norm_sq,kn_residual,step_size`, one row per trace entry.
pub fn write_trace_csv<W: Write>(w: W, trace: &FlowTrace) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["iter", "norm_sq", "kn_residual", "step_size"])?;
    for s in &trace.steps {
        out.serialize((s.iter, s.norm_sq, s.kn_residual, s.step_size))?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomotopyJson {
    pub t_grid: Vec<f64>,
    pub max_relation_residual: f64,
    pub endpoint_unitarity: f64,
    pub k_fixedness: f64,
    pub det_drift: f64,
}

impl From<&HomotopyReport> for HomotopyJson {
    fn from(r: &HomotopyReport) -> Self {
        HomotopyJson {
            t_grid: r.t_grid.clone(),
            max_relation_residual: r.max_relation_residual,
            endpoint_unitarity: r.endpoint_unitarity,
            k_fixedness: r.k_fixedness,
            det_drift: r.det_drift,
        }
    }
}

impl From<HomotopyJson> for HomotopyReport {
    fn from(r: HomotopyJson) -> Self {
        HomotopyReport {
            t_grid: r.t_grid,
            max_relation_residual: r.max_relation_residual,
            endpoint_unitarity: r.endpoint_unitarity,
            k_fixedness: r.k_fixedness,
            det_drift: r.det_drift,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignatureJson {
    pub central_characters: Vec<usize>,
    pub multiplicity_patterns: Vec<Vec<usize>>,
    pub trivial_commutator_trace_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRowJson {
    pub case: String,
    pub sample_count: usize,
    pub excluded_count: usize,
    pub polystable_fraction: f64,
    pub signature: SignatureJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleJson {
    pub id: usize,
    pub case: String,
    pub label: Option<String>,
    pub verdict: String,
    pub b_eigenvalues: Vec<Complex>,
    pub commutator_trace: Complex,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_coordinates: Option<[Complex; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_character: Option<[Complex; 2]>,
}

impl SampleJson {
    fn new(id: usize, s: &SampleRecord) -> Self {
        SampleJson {
            id,
            case: s.case.label().into(),
            label: s.label.map(|l| l.label().into()),
            verdict: s.verdict.label().into(),
            b_eigenvalues: s.b_eigenvalues.iter().map(|z| cx(*z)).collect(),
            commutator_trace: cx(s.commutator_trace),
            trace_coordinates: s.trace_coordinates.map(|(x, y, z)| [cx(x), cx(y), cx(z)]),
            block_character: s.block_character.map(|(t, d)| [cx(t), cx(d)]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentReportJson {
    pub group: String,
    pub samples_per_case: usize,
    pub seed: u64,
    pub component_estimate: usize,
    pub case_rows: Vec<CaseRowJson>,
    pub notes: Vec<String>,
    pub samples: Vec<SampleJson>,
}

impl From<&ComponentReport> for ComponentReportJson {
    fn from(r: &ComponentReport) -> Self {
        ComponentReportJson {
            group: r.group.label().into(),
            samples_per_case: r.samples_per_case,
            seed: r.seed,
            component_estimate: r.component_estimate,
            case_rows: r
                .case_rows
                .iter()
                .map(|row| CaseRowJson {
                    case: row.case.label().into(),
                    sample_count: row.sample_count,
                    excluded_count: row.excluded_count,
                    polystable_fraction: row.polystable_fraction,
                    signature: SignatureJson {
                        central_characters: row.signature.central_characters.clone(),
                        multiplicity_patterns: row.signature.multiplicity_patterns.clone(),
                        trivial_commutator_trace_fraction: row.signature.trivial_commutator_trace_fraction,
                    },
                })
                .collect(),
            notes: r.notes.clone(),
            samples: r.samples.iter().enumerate().map(|(i, s)| SampleJson::new(i, s)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetractRowJson {
    pub case: String,
    pub sample_count: usize,
    pub pass_count: usize,
    pub pass_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceBallJson {
    pub sample_count: usize,
    pub inside_count: usize,
    pub max_imag: f64,
    pub max_kappa: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetractSummaryJson {
    pub group: String,
    pub samples_per_case: usize,
    pub seed: u64,
    pub rows: Vec<RetractRowJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_ball: Option<TraceBallJson>,
}

impl From<&RetractSummary> for RetractSummaryJson {
    fn from(s: &RetractSummary) -> Self {
        RetractSummaryJson {
            group: s.group.label().into(),
            samples_per_case: s.samples_per_case,
            seed: s.seed,
            rows: s
                .rows
                .iter()
                .map(|r| RetractRowJson {
                    case: r.case.label().into(),
                    sample_count: r.sample_count,
                    pass_count: r.pass_count,
                    pass_fraction: r.pass_fraction,
                })
                .collect(),
            trace_ball: s.trace_ball.as_ref().map(|b| TraceBallJson {
                sample_count: b.sample_count,
                inside_count: b.inside_count,
                max_imag: b.max_imag,
                max_kappa: b.max_kappa,
            }),
        }
    }
}

/// Per-sample invariant table for a census: id, case, label, verdict, then
/// the real and imaginary parts of the invariants (blank when absent).
pub fn write_census_csv<W: Write>(w: W, report: &ComponentReport) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let n = report.group.dim();
    let mut header: Vec<String> = ["id", "case", "label", "verdict"].map(String::from).to_vec();
    for i in 0..n {
        header.push(format!("b_eig{i}_re"));
        header.push(format!("b_eig{i}_im"));
    }
    for name in ["comm_trace", "tr_a", "tr_c", "tr_ac", "block_tr", "block_det"] {
        header.push(format!("{name}_re"));
        header.push(format!("{name}_im"));
    }
    out.write_record(&header)?;
    let num = |z: C64| [z.re.to_string(), z.im.to_string()];
    for (id, s) in report.samples.iter().enumerate() {
        let mut row = vec![
            id.to_string(),
            s.case.label().to_string(),
            s.label.map_or("ambiguous", |l| l.label()).to_string(),
            s.verdict.label().to_string(),
        ];
        for z in &s.b_eigenvalues {
            row.extend(num(*z));
        }
        row.extend(num(s.commutator_trace));
        match s.trace_coordinates {
            Some((x, y, z)) => [x, y, z].into_iter().for_each(|v| row.extend(num(v))),
            None => row.extend(std::iter::repeat_n(String::new(), 6)),
        }
        match s.block_character {
            Some((t, d)) => [t, d].into_iter().for_each(|v| row.extend(num(v))),
            None => row.extend(std::iter::repeat_n(String::new(), 4)),
        }
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}
