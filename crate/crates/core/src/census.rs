//! Component census of the angle RAAG `Γ_∠ = ⟨A, B, C | [A,B], [B,C]⟩`
//! (the star RAAG with two leaves; `B` is generator 0).
//!
//! Fibers over `B` are classified by its conjugacy type. Components are then
//! counted from discrete invariants (the central character of `B` and the
//! polystable / non-polystable dichotomy), not by clustering.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::SeedableRng;

use crate::kempfness::{polystable_probe, FlowError, FlowOptions, PolystabilityVerdict};
use crate::matgroup::{eig_decompose, kak_interpolate, spectral_scale, MatC, MatError, C64, DEFAULT_TOL};
use crate::presentation::{build_family, FamilySpec, GroupPresentation};
use crate::repvar::{conjugate, pair_trace_coordinates, relation_residual, sample_hom, Rep, RepError, SamplerParams, SamplerStyle};
use crate::retract::{normalizing_conjugator, uniform_grid, verify_sdr, RetractError, SdrFamily, SDR_THRESHOLDS};
use crate::SeededRng;

pub use crate::repvar::FiberCase;

/// Minimum `samples_per_case` accepted by the drivers.
pub const MIN_SAMPLES: usize = 100;
/// Eigenvalues closer than this (relative) are one repeated eigenvalue...
const REPEATED_GAP: f64 = 1e-4;
/// ...and distinct ones closer than this make the sample ambiguous.
const AMBIGUOUS_GAP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CensusGroup {
    SL2,
    SL3,
}

impl CensusGroup {
    pub fn dim(self) -> usize {
        match self {
            CensusGroup::SL2 => 2,
            CensusGroup::SL3 => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CensusGroup::SL2 => "sl2",
            CensusGroup::SL3 => "sl3",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sl2" => Some(CensusGroup::SL2),
            "sl3" => Some(CensusGroup::SL3),
            _ => None,
        }
    }

    /// Cases that occur in this group, in report order.
    pub fn cases(self) -> Vec<FiberCase> {
        FiberCase::ALL.into_iter().filter(|c| c.supported(self.dim())).collect()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CensusError {
    #[error("B lies within the ambiguity band of a case boundary ({0})")]
    Ambiguous(&'static str),
    #[error("presentation is not the angle RAAG")]
    NotAngleRaag,
    #[error("at least {MIN_SAMPLES} samples per case are required, got {0}")]
    TooFewSamples(usize),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Retract(#[from] RetractError),
    #[error(transparent)]
    Matrix(#[from] MatError),
}

/// `⟨a₀, a₁, a₂ | [a₀,a₁], [a₀,a₂]⟩`.
pub fn angle_presentation() -> Arc<GroupPresentation> {
    Arc::new(build_family(&FamilySpec::StarRaag { leaves: 2 }).expect("star RAAG with two leaves"))
}

fn check_angle(rep: &Rep) -> Result<(), CensusError> {
    let p = rep.presentation();
    if p.generator_count() != 3 || SdrFamily::of(p) != Some(SdrFamily::Star) {
        return Err(CensusError::NotAngleRaag);
    }
    Ok(())
}

/// Case of `B` using the default tolerance.
pub fn classify_fiber(rep: &Rep) -> Result<FiberCase, CensusError> {
    classify_fiber_with(rep, DEFAULT_TOL)
}

/// Central if `‖B − (tr B/n)·I‖_F < tol`; otherwise by the eigenvalue pattern
/// and the conditioning of the eigenvector matrix. Samples in the bands
/// `[tol, 10·tol]` (scalar distance) or `[0.1/tol, 1/tol]` (eigenvector
/// condition) are reported ambiguous.
pub fn classify_fiber_with(rep: &Rep, tol: f64) -> Result<FiberCase, CensusError> {
    check_angle(rep)?;
    let b = rep.image(0);
    let n = b.dim();
    let mean = b.trace() / n as f64;
    let off_scalar = (*b - MatC::scalar(n, mean)).frobenius_norm();
    if off_scalar < tol {
        return Ok(FiberCase::Central);
    }
    if off_scalar < 10.0 * tol {
        return Err(CensusError::Ambiguous("central"));
    }
    let e = eig_decompose(b)?;
    let scale = b.frobenius_norm().max(1.0);
    let mut repeated = false;
    for i in 0..n {
        for j in i + 1..n {
            let gap = (e.values[i] - e.values[j]).norm();
            if gap < REPEATED_GAP * scale {
                repeated = true;
            } else if gap < AMBIGUOUS_GAP * scale {
                return Err(CensusError::Ambiguous("regular"));
            }
        }
    }
    if !repeated {
        return Ok(FiberCase::Regular);
    }
    if e.vector_condition >= 1.0 / tol {
        return Ok(FiberCase::Jordan);
    }
    if e.vector_condition >= 0.1 / tol || n != 3 {
        return Err(CensusError::Ambiguous("jordan"));
    }
    Ok(FiberCase::RepeatedDiag)
}

/// Index `k` with `tr B ≈ n·e^{2πik/n}`, for central `B`.
pub fn central_character(b: &MatC) -> usize {
    let n = b.dim();
    let z = b.trace() / n as f64;
    let k = (z.arg() / core::f64::consts::TAU * n as f64).round() as i64;
    k.rem_euclid(n as i64) as usize
}

/// Per-sample record of a census run.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    /// Sampler case.
    pub case: FiberCase,
    /// Classifier output; `None` if ambiguous.
    pub label: Option<FiberCase>,
    pub verdict: PolystabilityVerdict,
    /// Eigenvalues of `B` (clustered, sorted).
    pub b_eigenvalues: Vec<C64>,
    /// `tr(A·C·A⁻¹·C⁻¹)`.
    pub commutator_trace: C64,
    /// `(tr A, tr C, tr AC)`, for `SL(2)` central fibers.
    pub trace_coordinates: Option<(C64, C64, C64)>,
    /// `(tr X, det X)` of the `GL(2)`-block of `A`, for repeated-diag fibers.
    pub block_character: Option<(C64, C64)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct InvariantSummary {
    /// Central characters `k` (with `B = e^{2πik/n}·I`) that occurred.
    pub central_characters: Vec<usize>,
    /// Eigenvalue multiplicity patterns of `B` that occurred, e.g. `[2, 1]`.
    pub multiplicity_patterns: Vec<Vec<usize>>,
    /// Fraction of samples with `tr[A, C] = n` (to `1e-6`).
    pub trivial_commutator_trace_fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseRow {
    pub case: FiberCase,
    pub sample_count: usize,
    /// Samples the classifier flagged ambiguous or put in another case;
    /// excluded from the fraction.
    pub excluded_count: usize,
    pub polystable_fraction: f64,
    pub signature: InvariantSummary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentReport {
    pub group: CensusGroup,
    pub samples_per_case: usize,
    pub seed: u64,
    pub case_rows: Vec<CaseRow>,
    pub component_estimate: usize,
    pub notes: Vec<String>,
    pub samples: Vec<SampleRecord>,
}

impl ComponentReport {
    pub fn row(&self, case: FiberCase) -> Option<&CaseRow> {
        self.case_rows.iter().find(|r| r.case == case)
    }
}

/// One generator per case, independent of the order the cases are visited in.
fn case_rng(seed: u64, case: FiberCase) -> SeededRng {
    let mut rng = SeededRng::seed_from_u64(seed);
    rng.set_stream(case as u64 + 1);
    rng
}

fn multiplicities(values: &[C64]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    let mut i = 0;
    while i < values.len() {
        let mut j = i + 1;
        while j < values.len() && values[j] == values[i] {
            j += 1;
        }
        out.push(j - i);
        i = j;
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

fn commutator_trace(a: &MatC, c: &MatC) -> Result<C64, MatError> {
    Ok((*a * *c * a.inverse()? * c.inverse()?).trace())
}

/// `(tr X, det X)` for `A = X ⊕ x` in the eigenbasis of `B = diag(λ, λ, μ)`.
fn block_character(b: &MatC, a: &MatC) -> Result<(C64, C64), MatError> {
    let e = eig_decompose(b)?;
    // the simple eigenvalue is the odd one out after clustering
    let simple = (0..3).find(|&i| (0..3).all(|j| j == i || e.values[j] != e.values[i])).ok_or(MatError::NumericalFailure)?;
    let v = e.vectors;
    let a_frame = v.inverse()? * *a * v;
    let x = a_frame[(simple, simple)];
    if x.norm() == 0.0 {
        return Err(MatError::ZeroEigenvalue);
    }
    Ok((a.trace() - x, x.inv()))
}

fn record(rep: &Rep, case: FiberCase, opts: &FlowOptions) -> Result<SampleRecord, CensusError> {
    let label = match classify_fiber(rep) {
        Ok(l) => Some(l),
        Err(CensusError::Ambiguous(_)) => None,
        Err(e) => return Err(e),
    };
    let verdict = polystable_probe(rep, opts)?;
    let (b, a, c) = (rep.image(0), rep.image(1), rep.image(2));
    let b_eigenvalues = eig_decompose(b)?.values;
    let trace_coordinates = (case == FiberCase::Central && rep.dim() == 2).then(|| pair_trace_coordinates(a, c));
    let block = if label == Some(FiberCase::RepeatedDiag) { Some(block_character(b, a)?) } else { None };
    Ok(SampleRecord {
        case,
        label,
        verdict,
        b_eigenvalues,
        commutator_trace: commutator_trace(a, c)?,
        trace_coordinates,
        block_character: block,
    })
}

fn summarize(group: CensusGroup, case: FiberCase, records: &[SampleRecord]) -> CaseRow {
    let n = group.dim() as f64;
    let kept: Vec<&SampleRecord> = records.iter().filter(|r| r.label == Some(case)).collect();
    let poly = kept.iter().filter(|r| r.verdict == PolystabilityVerdict::LikelyPolystable).count();
    let mut sig = InvariantSummary::default();
    for r in &kept {
        if case == FiberCase::Central {
            let k = central_character(&MatC::from_diag(&r.b_eigenvalues));
            if !sig.central_characters.contains(&k) {
                sig.central_characters.push(k);
            }
        }
        let m = multiplicities(&r.b_eigenvalues);
        if !sig.multiplicity_patterns.contains(&m) {
            sig.multiplicity_patterns.push(m);
        }
    }
    sig.central_characters.sort_unstable();
    sig.multiplicity_patterns.sort();
    let trivial = kept.iter().filter(|r| (r.commutator_trace - n).norm() < 1e-6).count();
    let denom = kept.len().max(1) as f64;
    sig.trivial_commutator_trace_fraction = trivial as f64 / denom;
    CaseRow {
        case,
        sample_count: records.len(),
        excluded_count: records.len() - kept.len(),
        polystable_fraction: poly as f64 / denom,
        signature: sig,
    }
}

/// Samples every case of `group`, probes polystability and estimates the
/// number of components of the character variety.
///
/// Each central character of `B` is a component on its own (the trace of `B`
/// is locally constant), the closure of the regular locus is one more, and in
/// `SL(3)` the `diag(λ, λ, λ⁻²)` family adds another. Non-polystable fibers
/// contribute nothing.
pub fn run_census(group: CensusGroup, samples_per_case: usize, seed: u64) -> Result<ComponentReport, CensusError> {
    run_census_with(group, samples_per_case, seed, &FlowOptions::default())
}

pub fn run_census_with(
    group: CensusGroup,
    samples_per_case: usize,
    seed: u64,
    opts: &FlowOptions,
) -> Result<ComponentReport, CensusError> {
    if samples_per_case < MIN_SAMPLES {
        return Err(CensusError::TooFewSamples(samples_per_case));
    }
    let pres = angle_presentation();
    let params = SamplerParams::with_dim(group.dim());
    let mut samples = Vec::new();
    let mut case_rows = Vec::new();
    let mut notes = Vec::new();
    for case in group.cases() {
        let mut rng = case_rng(seed, case);
        let mut records = Vec::with_capacity(samples_per_case);
        for _ in 0..samples_per_case {
            let rep = sample_hom(&pres, SamplerStyle::AngleFiber(case), &mut rng, &params)?;
            records.push(record(&rep, case, opts)?);
        }
        let row = summarize(group, case, &records);
        if row.excluded_count > 0 {
            notes.push(format!(
                "{}: {} samples near a case boundary excluded",
                case.label(),
                row.excluded_count
            ));
        }
        let verdicts = |v| records.iter().filter(|r| r.label == Some(case) && r.verdict == v).count();
        let inconclusive = verdicts(PolystabilityVerdict::Inconclusive);
        if inconclusive > 0 {
            notes.push(format!("{}: {} flow runs inconclusive", case.label(), inconclusive));
        }
        if case == FiberCase::Jordan && verdicts(PolystabilityVerdict::LikelyPolystable) > 0 {
            notes.push(String::from("jordan: some samples looked polystable; the case is not counted"));
        }
        case_rows.push(row);
        samples.extend(records);
    }

    let mut component_estimate = 0;
    for row in &case_rows {
        if row.polystable_fraction == 0.0 {
            continue;
        }
        component_estimate += match row.case {
            FiberCase::Central => row.signature.central_characters.len(),
            FiberCase::Regular | FiberCase::RepeatedDiag => 1,
            FiberCase::Jordan => 0,
        };
    }
    notes.push(String::from(
        "central fibers meet the closure of the regular locus (commuting pairs over a central B); recorded, not analysed",
    ));
    Ok(ComponentReport { group, samples_per_case, seed, case_rows, component_estimate: component_estimate.max(1), notes, samples })
}

/// `x² + y² + z² − xyz` for trace coordinates.
pub fn fricke_kappa(x: C64, y: C64, z: C64) -> C64 {
    x * x + y * y + z * z - x * y * z
}

#[derive(Debug, Clone, PartialEq)]
pub struct RetractRow {
    pub case: FiberCase,
    pub sample_count: usize,
    pub pass_count: usize,
    pub pass_fraction: f64,
}

/// Endpoint statistics for `SL(2)` central fibers.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceBallCheck {
    pub sample_count: usize,
    /// Largest imaginary part among endpoint trace coordinates.
    pub max_imag: f64,
    /// Largest `x² + y² + z² − xyz` (real part).
    pub max_kappa: f64,
    /// Samples with coordinates real within `1e-8` and `κ ≤ 4 + 1e-6`.
    pub inside_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RetractSummary {
    pub group: CensusGroup,
    pub samples_per_case: usize,
    pub seed: u64,
    pub rows: Vec<RetractRow>,
    pub trace_ball: Option<TraceBallCheck>,
}

impl RetractSummary {
    pub fn row(&self, case: FiberCase) -> Option<&RetractRow> {
        self.rows.iter().find(|r| r.case == case)
    }
}

/// Retraction for a fiber over semisimple non-central `B`: conjugate `B` to
/// a normal matrix, then scale its spectrum to the unit circle while the
/// leaves run along their polar paths. Both moves stay in the commutant of
/// the current `B`. Parameter `s = 0` is the (conjugated) input, `s = 1`
/// lies in `Hom(Γ_∠, SU(n))`.
pub fn semisimple_fiber_path(rep: &Rep, s: f64) -> Result<Rep, CensusError> {
    let b = rep.image(0);
    let g = normalizing_conjugator(b)?;
    fiber_path_in_frame(&conjugate(rep, &g)?, s)
}

fn fiber_path_in_frame(rep: &Rep, s: f64) -> Result<Rep, CensusError> {
    let mut images = Vec::with_capacity(3);
    images.push(spectral_scale(rep.image(0), s)?);
    for a in &rep.images()[1..] {
        images.push(kak_interpolate(a, 1.0 - s)?);
    }
    Ok(rep.with_images_unchecked(images))
}

fn semisimple_passes(rep: &Rep, grid: &[f64]) -> Result<bool, CensusError> {
    let g = normalizing_conjugator(rep.image(0))?;
    let framed = conjugate(rep, &g)?;
    let one = C64::new(1.0, 0.0);
    let th = SDR_THRESHOLDS;
    let mut ok = true;
    let mut end = None;
    for &s in grid {
        let r = fiber_path_in_frame(&framed, s)?;
        ok &= relation_residual(&r)? < th.max_relation_residual;
        ok &= r.images().iter().all(|a| (a.det() - one).norm() < th.det_drift);
        if s == 1.0 {
            end = Some(r);
        }
    }
    let end = end.expect("grid ends at 1");
    ok &= end.images().iter().all(|a| a.unitarity_defect() < th.endpoint_unitarity);
    ok &= end.image(1).commutator(end.image(0)).frobenius_norm() < th.max_relation_residual;
    Ok(ok)
}

/// Applies the case's retraction to fresh samples and reports pass fractions.
///
/// Central fibers use the star homotopy (with `B` central it is independent
/// polar interpolation of `A` and `C`); semisimple non-central fibers use
/// [`semisimple_fiber_path`]. Jordan fibers have no compact counterpart and
/// are skipped.
pub fn retract_census(group: CensusGroup, samples_per_case: usize, seed: u64) -> Result<RetractSummary, CensusError> {
    if samples_per_case < MIN_SAMPLES {
        return Err(CensusError::TooFewSamples(samples_per_case));
    }
    let pres = angle_presentation();
    let params = SamplerParams::with_dim(group.dim());
    let grid = uniform_grid(11);
    let mut rows = Vec::new();
    let mut trace_ball = None;
    for case in group.cases() {
        if case == FiberCase::Jordan {
            continue;
        }
        let mut rng = case_rng(seed, case);
        let mut pass_count = 0;
        let mut ball = TraceBallCheck { sample_count: 0, max_imag: 0.0, max_kappa: f64::NEG_INFINITY, inside_count: 0 };
        for _ in 0..samples_per_case {
            let rep = sample_hom(&pres, SamplerStyle::AngleFiber(case), &mut rng, &params)?;
            let passed = if case == FiberCase::Central {
                let passed = verify_sdr(&rep, SdrFamily::Star, grid.len())?.passes(&SDR_THRESHOLDS);
                if group == CensusGroup::SL2 {
                    let end = crate::retract::star_homotopy(&rep, SdrFamily::Star, 0.0)?;
                    let (x, y, z) = pair_trace_coordinates(end.image(1), end.image(2));
                    let imag = x.im.abs().max(y.im.abs()).max(z.im.abs());
                    let kappa = fricke_kappa(x, y, z).re;
                    ball.sample_count += 1;
                    ball.max_imag = ball.max_imag.max(imag);
                    ball.max_kappa = ball.max_kappa.max(kappa);
                    if imag < 1e-8 && kappa <= 4.0 + 1e-6 {
                        ball.inside_count += 1;
                    }
                }
                passed
            } else {
                semisimple_passes(&rep, &grid)?
            };
            pass_count += passed as usize;
        }
        if case == FiberCase::Central && group == CensusGroup::SL2 {
            trace_ball = Some(ball);
        }
        rows.push(RetractRow {
            case,
            sample_count: samples_per_case,
            pass_count,
            pass_fraction: pass_count as f64 / samples_per_case as f64,
        });
    }
    Ok(RetractSummary { group, samples_per_case, seed, rows, trace_ball })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::{sample_sl, sample_su};
    use crate::seeded_rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn angle(b: MatC, a: MatC, cc: MatC) -> Rep {
        Rep::new(angle_presentation(), alloc::vec![b, a, cc]).unwrap()
    }

    #[test]
    fn classify_examples() {
        let w = C64::from_polar(1.0, core::f64::consts::TAU / 3.0);
        let i3 = MatC::identity(3);
        let mut rng = seeded_rng(1);
        let (a, cc) = (sample_sl(3, &mut rng, 1.0), sample_sl(3, &mut rng, 1.0));
        assert_eq!(classify_fiber(&angle(MatC::scalar(3, w), a, cc)).unwrap(), FiberCase::Central);
        assert_eq!(central_character(&MatC::scalar(3, w)), 1);
        assert_eq!(central_character(&MatC::scalar(3, w * w)), 2);
        assert_eq!(central_character(&MatC::scalar(2, c(-1.0, 0.0))), 1);

        let j = MatC::from_rows(&[&[c(1.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0), c(1.0, 0.0)]]);
        let i2 = MatC::identity(2);
        assert_eq!(classify_fiber(&angle(j, i2, i2)).unwrap(), FiberCase::Jordan);

        let l = c(1.3, 0.2);
        let bl = MatC::from_diag(&[l, l, (l * l).inv()]);
        assert_eq!(classify_fiber(&angle(bl, i3, i3)).unwrap(), FiberCase::RepeatedDiag);

        let d = MatC::from_diag(&[c(2.0, 0.0), c(0.5, 0.0)]);
        assert_eq!(classify_fiber(&angle(d, i2, i2)).unwrap(), FiberCase::Regular);

        let near = MatC::from_diag(&[c(1.0 + 3e-8, 0.0), c(1.0 / (1.0 + 3e-8), 0.0)]);
        assert!(matches!(classify_fiber(&angle(near, i2, i2)), Err(CensusError::Ambiguous(_))));

        let free = Rep::new(Arc::new(build_family(&FamilySpec::Free { rank: 3 }).unwrap()), alloc::vec![i2; 3]).unwrap();
        assert_eq!(classify_fiber(&free), Err(CensusError::NotAngleRaag));
    }

    #[test]
    fn classification_is_conjugation_invariant() {
        let pres = angle_presentation();
        let mut rng = seeded_rng(2);
        for n in [2, 3] {
            for case in FiberCase::ALL.into_iter().filter(|c| c.supported(n)) {
                for _ in 0..25 {
                    let rep = sample_hom(&pres, SamplerStyle::AngleFiber(case), &mut rng, &SamplerParams::with_dim(n)).unwrap();
                    let g = loop {
                        let g = sample_sl(n, &mut rng, 0.7);
                        if crate::matgroup::condition_number(&g).unwrap() < 1e3 {
                            break g;
                        }
                    };
                    assert_eq!(classify_fiber(&rep).unwrap(), case);
                    assert_eq!(classify_fiber(&conjugate(&rep, &g).unwrap()).unwrap(), case);
                }
            }
        }
    }

    #[test]
    fn trivial_subsample_signature() {
        let rep = angle(MatC::identity(2), MatC::identity(2), MatC::identity(2));
        let r = record(&rep, FiberCase::Central, &FlowOptions::default()).unwrap();
        assert_eq!(r.label, Some(FiberCase::Central));
        assert_eq!(r.verdict, PolystabilityVerdict::LikelyPolystable);
        let (x, y, z) = r.trace_coordinates.unwrap();
        assert_eq!((x, y, z), (c(2.0, 0.0), c(2.0, 0.0), c(2.0, 0.0)));
        assert_eq!(fricke_kappa(x, y, z), c(4.0, 0.0));
        assert_eq!(r.commutator_trace, c(2.0, 0.0));
    }

    #[test]
    fn block_character_of_block_diagonal() {
        let l = c(0.8, 0.5);
        let b = MatC::from_diag(&[l, (l * l).inv(), l]);
        let mut a = MatC::identity(3);
        a[(0, 0)] = c(2.0, 0.0);
        a[(0, 2)] = c(1.0, 1.0);
        a[(2, 2)] = c(1.5, 0.0);
        a[(1, 1)] = c(1.0 / 3.0, 0.0);
        let (tr, det) = block_character(&b, &a).unwrap();
        assert!((tr - c(3.5, 0.0)).norm() < 1e-10 && (det - c(3.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn rejects_small_runs() {
        assert_eq!(run_census(CensusGroup::SL2, 10, 0).unwrap_err(), CensusError::TooFewSamples(10));
        assert!(retract_census(CensusGroup::SL3, 99, 0).is_err());
    }

    #[test]
    fn sl2_census_small() {
        let r = run_census(CensusGroup::SL2, MIN_SAMPLES, 7).unwrap();
        assert_eq!(r.case_rows.len(), 3);
        assert_eq!(r.component_estimate, 3);
        assert_eq!(r.row(FiberCase::Jordan).unwrap().polystable_fraction, 0.0);
        assert_eq!(r.row(FiberCase::Central).unwrap().signature.central_characters, alloc::vec![0, 1]);
        assert_eq!(r.samples.len(), 3 * MIN_SAMPLES);
        assert_eq!(r, run_census(CensusGroup::SL2, MIN_SAMPLES, 7).unwrap());
    }

    #[test]
    fn semisimple_fiber_paths() {
        let pres = angle_presentation();
        let mut rng = seeded_rng(3);
        for (n, case) in [(2, FiberCase::Regular), (3, FiberCase::Regular), (3, FiberCase::RepeatedDiag)] {
            for _ in 0..20 {
                let rep = sample_hom(&pres, SamplerStyle::AngleFiber(case), &mut rng, &SamplerParams::with_dim(n)).unwrap();
                assert!(semisimple_passes(&rep, &uniform_grid(11)).unwrap());
                let end = semisimple_fiber_path(&rep, 1.0).unwrap();
                assert_eq!(classify_fiber(&end).unwrap(), case);
            }
        }
        let u = sample_su(2, &mut rng);
        let d = MatC::from_diag(&[c(0.0, 1.0), c(0.0, -1.0)]);
        let rep = angle(u * d * u.adjoint(), MatC::identity(2), u * d * u.adjoint());
        assert!(semisimple_fiber_path(&rep, 0.5).unwrap().max_dist(&rep) < 1e-10);
    }

    #[test]
    fn su2_pairs_lie_in_trace_ball() {
        let mut rng = seeded_rng(4);
        for _ in 0..1000 {
            let (a, b) = (sample_su(2, &mut rng), sample_su(2, &mut rng));
            let (x, y, z) = pair_trace_coordinates(&a, &b);
            assert!(x.im.abs() < 1e-12 && y.im.abs() < 1e-12 && z.im.abs() < 1e-12);
            assert!(fricke_kappa(x, y, z).re <= 4.0 + 1e-9);
        }
    }
}
