use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use charvar::family::{default_style, parse_family, parse_style};
use charvar::format::{
    read_rep, write_census_csv, write_json, write_rep, write_trace_csv, ComponentReportJson, HomotopyJson,
    RetractSummaryJson,
};
use charvar_core::census::{retract_census, run_census, CensusGroup};
use charvar_core::kempfness::{kn_flow, FlowOptions};
use charvar_core::presentation::{build_family, parse_presentation, FamilySpec, FiniteGroup};
use charvar_core::repvar::{sample_hom, FiberCase, SamplerParams, SamplerStyle};
use charvar_core::retract::{move_to_hom0, verify_sdr, SdrFamily, SDR_THRESHOLDS};
use charvar_core::seeded_rng;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "charvar", version, about = "Kempf-Ness flows, Cartan retractions and component census for SL(n, C) representation varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Group {
    Sl2,
    Sl3,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Star,
    FiniteByFree,
}

#[derive(Subcommand)]
enum Command {
    /// Classify sampled fibers of the angle RAAG and estimate components.
    Census {
        #[arg(long, value_enum)]
        group: Group,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSON report (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-sample invariant table.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also run the per-case retractions and write their summary here.
        #[arg(long)]
        retract_out: Option<PathBuf>,
    },
    /// Run the Kempf-Ness flow on a rep file and export its trace.
    Flow {
        #[arg(long)]
        rep: PathBuf,
        /// Trace CSV (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the final rep here.
        #[arg(long)]
        rep_out: Option<PathBuf>,
        #[arg(long)]
        max_iters: Option<usize>,
        #[arg(long)]
        residual_tol: Option<f64>,
    },
    /// Sample reps, move them into the compact locus and verify the retraction.
    VerifySdr {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Finite factor for `finite-by-free`: z4, q8 or bd12.
        #[arg(long, default_value = "z4")]
        finite: String,
        #[arg(long, default_value_t = 11)]
        grid: usize,
    },
    /// Parse a `.gp` presentation and print it in normal form.
    Parse { file: PathBuf },
    /// Draw one rep from a family and write it as JSON.
    Sample {
        /// e.g. `star:2`, `free:2`, `finite-by-free:2:z4`.
        #[arg(long)]
        family: String,
        /// e.g. `angle-fiber:regular`; defaults to one that fits the family.
        #[arg(long)]
        style: Option<String>,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Unit-modulus spectrum for distinguished elements.
        #[arg(long)]
        elliptic: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn census(group: Group, samples: usize, seed: u64, out: Option<&Path>, csv: Option<&Path>, retract_out: Option<&Path>) -> Result<()> {
    let group = match group {
        Group::Sl2 => CensusGroup::SL2,
        Group::Sl3 => CensusGroup::SL3,
    };
    let report = run_census(group, samples, seed)?;
    write_json(output(out)?, &ComponentReportJson::from(&report))?;
    if let Some(p) = csv {
        write_census_csv(output(Some(p))?, &report)?;
    }
    if let Some(p) = retract_out {
        let summary = retract_census(group, samples, seed)?;
        write_json(output(Some(p))?, &RetractSummaryJson::from(&summary))?;
    }
    if out.is_some() {
        for row in &report.case_rows {
            eprintln!("{:>14}: {} samples, polystable fraction {:.4}", row.case.label(), row.sample_count, row.polystable_fraction);
        }
        eprintln!("component estimate: {}", report.component_estimate);
    }
    Ok(())
}

fn flow(rep: &Path, out: Option<&Path>, rep_out: Option<&Path>, max_iters: Option<usize>, residual_tol: Option<f64>) -> Result<()> {
    let input = read_rep(File::open(rep).with_context(|| format!("cannot open {}", rep.display()))?)?;
    let mut opts = FlowOptions::default();
    opts.max_iters = max_iters.unwrap_or(opts.max_iters);
    opts.residual_tol = residual_tol.unwrap_or(opts.residual_tol);
    let result = kn_flow(&input, &opts)?;
    write_trace_csv(output(out)?, &result.trace)?;
    if let Some(p) = rep_out {
        write_rep(output(Some(p))?, &result.rep, None)?;
    }
    let last = result.trace.last();
    eprintln!("{} after {} iterations: norm_sq {:e}, kn_residual {:e}", result.trace.status.label(), last.iter, last.norm_sq, last.kn_residual);
    Ok(())
}

#[derive(Serialize)]
struct SdrLine {
    sample: usize,
    passed: bool,
    report: HomotopyJson,
}

fn verify(family: Family, n: usize, samples: usize, seed: u64, finite: &str, grid: usize) -> Result<()> {
    if !(n == 2 || n == 3) {
        bail!("--n must be 2 or 3");
    }
    let (spec, sdr) = match family {
        Family::Star => (FamilySpec::StarRaag { leaves: 2 }, SdrFamily::Star),
        Family::FiniteByFree => {
            let finite = FiniteGroup::from_name(finite).with_context(|| format!("unknown finite group `{finite}`"))?;
            (FamilySpec::DirectWithFinite { free_rank: 2, finite }, SdrFamily::FiniteByFree)
        }
    };
    let pres = Arc::new(build_family(&spec)?);
    let mut rng = seeded_rng(seed);
    let cases: Vec<FiberCase> =
        [FiberCase::Central, FiberCase::Regular, FiberCase::RepeatedDiag].into_iter().filter(|c| c.supported(n)).collect();
    let params = SamplerParams { elliptic: true, ..SamplerParams::with_dim(n) };
    let mut out = BufWriter::new(io::stdout().lock());
    let mut passed = 0;
    for i in 0..samples {
        let style = match sdr {
            SdrFamily::Star => SamplerStyle::AngleFiber(cases[i % cases.len()]),
            SdrFamily::FiniteByFree => SamplerStyle::FiniteByFree,
        };
        let rep = sample_hom(&pres, style, &mut rng, &params)?;
        let (rep, _) = move_to_hom0(&rep, sdr)?;
        let report = verify_sdr(&rep, sdr, grid)?;
        let ok = report.passes(&SDR_THRESHOLDS);
        passed += ok as usize;
        serde_json::to_writer(&mut out, &SdrLine { sample: i, passed: ok, report: HomotopyJson::from(&report) })?;
        writeln!(out)?;
    }
    writeln!(out, "summary: {passed}/{samples} passed")?;
    out.flush()?;
    Ok(())
}

fn parse(file: &Path) -> Result<()> {
    let text = std::fs::read_to_string(file).with_context(|| format!("cannot read {}", file.display()))?;
    let p = parse_presentation(&text)?;
    println!("{p}");
    println!("generators: {}, relators: {}", p.generator_count(), p.relators().len());
    Ok(())
}

fn sample(family: &str, style: Option<&str>, n: usize, seed: u64, elliptic: bool, out: Option<&Path>) -> Result<()> {
    let spec = parse_family(family)?;
    let style = match style {
        Some(s) => parse_style(s)?,
        None => default_style(&spec),
    };
    let pres = Arc::new(build_family(&spec)?);
    let params = SamplerParams { elliptic, ..SamplerParams::with_dim(n) };
    let rep = sample_hom(&pres, style, &mut seeded_rng(seed), &params)?;
    write_rep(output(out)?, &rep, Some(&spec))
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Census { group, samples, seed, out, csv, retract_out } => {
            census(group, samples, seed, out.as_deref(), csv.as_deref(), retract_out.as_deref())
        }
        Command::Flow { rep, out, rep_out, max_iters, residual_tol } => {
            flow(&rep, out.as_deref(), rep_out.as_deref(), max_iters, residual_tol)
        }
        Command::VerifySdr { family, n, samples, seed, finite, grid } => verify(family, n, samples, seed, &finite, grid),
        Command::Parse { file } => parse(&file),
        Command::Sample { family, style, n, seed, elliptic, out } => sample(&family, style.as_deref(), n, seed, elliptic, out.as_deref()),
    }
}
