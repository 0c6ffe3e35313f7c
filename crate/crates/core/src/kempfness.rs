//! Kempf–Ness gradient flow on a conjugation orbit, a heuristic polystability
//! probe built on it, and the eigenvalue-scaling retraction of normal tuples.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::matgroup::{condition_number, hermitian_eigen, spectral_scale, MatC, MatError};
use crate::repvar::{moment_map_of, relation_residual, Rep, RepError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowOptions {
    pub max_iters: usize,
    /// Line-search start, reset at every iteration.
    pub step_init: f64,
    /// `Converged` once the moment-map residual drops below this.
    pub residual_tol: f64,
    /// Window (in iterations) over which the stall signals are measured.
    pub stall_window: usize,
    /// Largest relative drop of `norm_sq` over one window that still counts
    /// as stalled.
    pub stall_decrease_tol: f64,
    /// Residual counts as stalled if over the second half of the run it kept
    /// at least this fraction of its size (window maxima are compared):
    /// algebraic decay, not the geometric decay of a converging flow.
    pub stall_residual_ratio: f64,
    /// Minimal growth of `ln cond(P)` over the second half of the run, for
    /// the accumulated conjugator `P`.
    pub cond_growth_tol: f64,
    /// Relation residual above which the input is rejected.
    pub max_relation_residual: f64,
    /// Cap on `ε·‖M‖₂` for a single step, so that one conjugation never
    /// distorts the tuple by more than a factor `e^{2·radius}`.
    pub trust_radius: f64,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions {
            max_iters: 5000,
            step_init: 0.1,
            residual_tol: 1e-8,
            stall_window: 50,
            stall_decrease_tol: 1e-4,
            stall_residual_ratio: 0.25,
            cond_growth_tol: 0.1,
            max_relation_residual: 1e-6,
            trust_radius: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowStep {
    pub iter: usize,
    pub norm_sq: f64,
    pub kn_residual: f64,
    /// Accepted `ε` (0 for the initial record).
    pub step_size: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FlowStatus {
    Converged,
    NonClosedOrbitSuspected,
    MaxIters,
}

impl FlowStatus {
    pub fn label(self) -> &'static str {
        match self {
            FlowStatus::Converged => "converged",
            FlowStatus::NonClosedOrbitSuspected => "non-closed-orbit-suspected",
            FlowStatus::MaxIters => "max-iters",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowTrace {
    /// The initial state followed by every accepted step.
    pub steps: Vec<FlowStep>,
    pub status: FlowStatus,
}

impl FlowTrace {
    pub fn last(&self) -> &FlowStep {
        self.steps.last().expect("trace always holds the initial state")
    }

    /// Iterations actually taken.
    pub fn iterations(&self) -> usize {
        self.last().iter
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowResult {
    pub rep: Rep,
    pub trace: FlowTrace,
    /// `P` with `rep = P·input·P⁻¹`.
    pub conjugator: MatC,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FlowError {
    #[error("input is not on the representation variety (relation residual {0:e})")]
    BadInput(f64),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Matrix(#[from] MatError),
}

/// Descends `Σ‖Aᵢ‖²` over the orbit by `ρ ← e^{εM}·ρ·e^{−εM}`, where
/// `M = Σ(Aᵢ*Aᵢ − AᵢAᵢ*)` is the moment map: the derivative of the functional
/// along `e^{sX}` is `−2⟨X, M⟩`, so `+M` is the steepest-descent direction.
///
/// The step is found by halving from `step_init` (capped by the trust radius)
/// until `norm_sq` decreases by at least half of its first-order prediction.
/// The change in `norm_sq` is evaluated in the eigenbasis of `M` (with
/// `expm1`), so decreases far below the rounding level of `norm_sq` itself are
/// still resolved; the recorded `norm_sq` is accumulated from these
/// increments. The run ends on convergence, after `max_iters`, or when no
/// decreasing step exists at rounding level. A run that did not converge is
/// reported as `NonClosedOrbitSuspected` only if, at the end, the residual has
/// stalled, `norm_sq` is creeping down by a vanishing relative amount, and the
/// accumulated conjugator is still degenerating (its condition number keeps
/// growing) — otherwise `MaxIters`.
pub fn kn_flow(rep: &Rep, opts: &FlowOptions) -> Result<FlowResult, FlowError> {
    let rr = relation_residual(rep)?;
    if !(rr < opts.max_relation_residual) {
        return Err(FlowError::BadInput(rr));
    }
    let (images, trace, conjugator) = flow_images(rep.images(), opts)?;
    Ok(FlowResult { rep: rep.with_images_unchecked(images), trace, conjugator })
}

fn norm_sq_of(images: &[MatC]) -> f64 {
    images.iter().map(MatC::frobenius_norm_sq).sum()
}

const ARMIJO: f64 = 0.5;

/// The flow on a bare tuple (no relators are consulted).
pub(crate) fn flow_images(start: &[MatC], opts: &FlowOptions) -> Result<(Vec<MatC>, FlowTrace, MatC), FlowError> {
    let n = start.first().map_or(2, MatC::dim);
    let mut images: Vec<MatC> = start.to_vec();
    let mut p = MatC::identity(n);
    let mut m = moment_map_of(&images);
    let mut f = norm_sq_of(&images);
    let mut steps = alloc::vec![FlowStep { iter: 0, norm_sq: f, kn_residual: m.frobenius_norm(), step_size: 0.0 }];
    // conjugator snapshots at window boundaries, for the degeneration signal
    let mut snapshots: Vec<(usize, MatC)> = alloc::vec![(0, p)];
    let window = opts.stall_window.max(1);

    let mut iter = 0;
    while iter < opts.max_iters && steps[steps.len() - 1].kn_residual >= opts.residual_tol {
        let eig = hermitian_eigen(&m);
        let lam = eig.values;
        let v = eig.vectors;
        // |entries|² of the images in the eigenbasis of M, where conjugation
        // by e^{εM} scales entry (i, j) by e^{ε(λᵢ − λⱼ)}
        let vd = v.adjoint();
        let weights: Vec<MatC> = images.iter().map(|a| vd * *a * v).collect();
        let change = |eps: f64| -> f64 {
            let mut d = 0.0;
            for w in &weights {
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            d += (2.0 * eps * (lam[i] - lam[j])).exp_m1() * w[(i, j)].norm_sqr();
                        }
                    }
                }
            }
            d
        };
        let spectral_radius = lam[0].abs().max(lam[n - 1].abs());
        let mut eps = opts.step_init.min(opts.trust_radius / spectral_radius);
        // directional derivative of norm_sq at ε = 0 (equals −2‖M‖²)
        let mut slope = 0.0;
        for w in &weights {
            for i in 0..n {
                for j in 0..n {
                    slope += 2.0 * (lam[i] - lam[j]) * w[(i, j)].norm_sqr();
                }
            }
        }
        let mut accepted = None;
        for _ in 0..64 {
            let d = change(eps);
            // Armijo: at least half the first-order decrease, which keeps the
            // step short of the minimizer along the line (no zig-zag)
            if d < 0.0 && d <= ARMIJO * eps * slope {
                accepted = Some(d);
                break;
            }
            eps *= 0.5;
        }
        let Some(d) = accepted else {
            break;
        };
        let e = eig.apply(|l| (eps * l).exp());
        let ei = eig.apply(|l| (-eps * l).exp());
        let cand: Vec<MatC> = images.iter().map(|a| e * *a * ei).collect();
        let fc = f + d;
        iter += 1;
        images = cand;
        f = fc;
        p = e * p;
        m = moment_map_of(&images);
        steps.push(FlowStep { iter, norm_sq: f, kn_residual: m.frobenius_norm(), step_size: eps });
        if iter % window == 0 {
            snapshots.push((iter, p));
        }
    }

    let status = if steps[steps.len() - 1].kn_residual < opts.residual_tol {
        FlowStatus::Converged
    } else if stalled_and_degenerating(&steps, &snapshots, p, opts)? {
        FlowStatus::NonClosedOrbitSuspected
    } else {
        FlowStatus::MaxIters
    };
    Ok((images, FlowTrace { steps, status }, p))
}

fn stalled_and_degenerating(
    steps: &[FlowStep],
    snapshots: &[(usize, MatC)],
    p_end: MatC,
    opts: &FlowOptions,
) -> Result<bool, MatError> {
    let w = opts.stall_window.max(1);
    let end = steps[steps.len() - 1];
    // steps[i].iter == i, since every recorded step is an accepted iteration
    if end.iter < 2 * w {
        return Ok(false);
    }
    let half = end.iter / 2;
    // the residual need not decrease monotonically, so compare window maxima
    let window_max = |hi: usize| steps[hi.saturating_sub(w)..=hi].iter().map(|s| s.kn_residual).fold(0.0, f64::max);
    let residual_stalled = window_max(end.iter) >= opts.stall_residual_ratio * window_max(half);
    let before = steps[end.iter - w];
    let drop = before.norm_sq - end.norm_sq;
    let creeping = drop >= 0.0 && drop <= opts.stall_decrease_tol * end.norm_sq;
    if !(residual_stalled && creeping) {
        return Ok(false);
    }
    let (_, p_half) = snapshots.iter().rev().find(|(i, _)| *i <= half).copied().unwrap_or(snapshots[0]);
    let growth = condition_number(&p_end)?.ln() - condition_number(&p_half)?.ln();
    Ok(growth >= opts.cond_growth_tol)
}

/// Heuristic reading of a flow run; never a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolystabilityVerdict {
    LikelyPolystable,
    LikelyNotPolystable,
    Inconclusive,
}

impl PolystabilityVerdict {
    pub fn label(self) -> &'static str {
        match self {
            PolystabilityVerdict::LikelyPolystable => "likely-polystable",
            PolystabilityVerdict::LikelyNotPolystable => "likely-not-polystable",
            PolystabilityVerdict::Inconclusive => "inconclusive",
        }
    }
}

impl From<FlowStatus> for PolystabilityVerdict {
    fn from(s: FlowStatus) -> Self {
        match s {
            FlowStatus::Converged => PolystabilityVerdict::LikelyPolystable,
            FlowStatus::NonClosedOrbitSuspected => PolystabilityVerdict::LikelyNotPolystable,
            FlowStatus::MaxIters => PolystabilityVerdict::Inconclusive,
        }
    }
}

/// Closed orbit ⇔ the norm attains its infimum on it; probed by running the flow.
pub fn polystable_probe(rep: &Rep, opts: &FlowOptions) -> Result<PolystabilityVerdict, FlowError> {
    Ok(kn_flow(rep, opts)?.trace.status.into())
}

/// Applies [`spectral_scale`] to every image: `t = 0` is the identity, `t = 1`
/// lands on unitary images.
pub fn normal_retract(rep: &Rep, t: f64) -> Result<Rep, MatError> {
    if t == 0.0 {
        return Ok(rep.clone());
    }
    let images = rep.images().iter().map(|a| spectral_scale(a, t)).collect::<Result<Vec<_>, _>>()?;
    Ok(rep.with_images_unchecked(images))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::{sample_su, C64};
    use crate::presentation::{build_family, FamilySpec, GroupPresentation};
    use crate::repvar::{conjugate, kn_residual, norm_sq, sample_hom, FiberCase, SamplerParams, SamplerStyle};
    use crate::seeded_rng;
    use alloc::sync::Arc;

    fn pres(spec: FamilySpec) -> Arc<GroupPresentation> {
        Arc::new(build_family(&spec).unwrap())
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn assert_monotone(t: &FlowTrace) {
        for w in t.steps.windows(2) {
            assert!(w[1].norm_sq <= w[0].norm_sq);
        }
    }

    #[test]
    fn unitary_tuple_is_fixed() {
        let mut rng = seeded_rng(1);
        let p = pres(FamilySpec::Free { rank: 3 });
        let rep = Rep::new(p, (0..3).map(|_| sample_su(3, &mut rng)).collect()).unwrap();
        let out = kn_flow(&rep, &FlowOptions::default()).unwrap();
        assert_eq!(out.trace.status, FlowStatus::Converged);
        assert_eq!(out.trace.iterations(), 0);
        assert!(out.trace.last().kn_residual < 1e-12);
        assert_eq!(polystable_probe(&rep, &FlowOptions::default()).unwrap(), PolystabilityVerdict::LikelyPolystable);
    }

    #[test]
    fn unipotent_orbit_is_not_closed() {
        let p = pres(FamilySpec::Free { rank: 1 });
        let j = MatC::from_rows(&[&[c(1.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0), c(1.0, 0.0)]]);
        let rep = Rep::new(p, alloc::vec![j]).unwrap();
        let out = kn_flow(&rep, &FlowOptions::default()).unwrap();
        assert_monotone(&out.trace);
        assert_eq!(out.trace.status, FlowStatus::NonClosedOrbitSuspected);
        let last = out.trace.last().norm_sq;
        assert!(last > 2.0 && last - 2.0 < 1e-3, "norm² = {last}");
    }

    #[test]
    fn generic_pairs_converge() {
        let mut rng = seeded_rng(2);
        let p = pres(FamilySpec::Free { rank: 2 });
        let opts = FlowOptions::default();
        let mut converged = 0;
        for _ in 0..50 {
            let rep = sample_hom(&p, SamplerStyle::Free, &mut rng, &SamplerParams::default()).unwrap();
            let out = kn_flow(&rep, &opts).unwrap();
            assert_monotone(&out.trace);
            assert_ne!(out.trace.status, FlowStatus::NonClosedOrbitSuspected);
            if out.trace.status == FlowStatus::Converged {
                converged += 1;
                assert!(kn_residual(&out.rep) < 1e-8);
                assert!(norm_sq(&out.rep) <= norm_sq(&rep));
            }
            assert!(relation_residual(&out.rep).unwrap() < 1e-6);
            // the reported conjugator reproduces the output
            let again = conjugate(&rep, &out.conjugator).unwrap();
            assert!(again.max_dist(&out.rep) < 1e-6 * norm_sq(&rep));
        }
        assert!(converged >= 48);
    }

    #[test]
    fn k_stationarity() {
        let mut rng = seeded_rng(3);
        let p = pres(FamilySpec::Free { rank: 2 });
        let opts = FlowOptions::default();
        for _ in 0..20 {
            let rep = sample_hom(&p, SamplerStyle::Free, &mut rng, &SamplerParams::with_dim(3)).unwrap();
            let u = sample_su(3, &mut rng);
            let a = kn_flow(&rep, &opts).unwrap();
            let b = kn_flow(&conjugate(&rep, &u).unwrap(), &opts).unwrap();
            if a.trace.status == FlowStatus::Converged && b.trace.status == FlowStatus::Converged {
                assert!((a.trace.last().norm_sq - b.trace.last().norm_sq).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn jordan_fibers_are_flagged() {
        let mut rng = seeded_rng(4);
        let star = pres(FamilySpec::StarRaag { leaves: 2 });
        let opts = FlowOptions::default();
        for n in [2, 3] {
            for _ in 0..10 {
                let rep =
                    sample_hom(&star, SamplerStyle::AngleFiber(FiberCase::Jordan), &mut rng, &SamplerParams::with_dim(n))
                        .unwrap();
                let v = polystable_probe(&rep, &opts).unwrap();
                assert_eq!(v, PolystabilityVerdict::LikelyNotPolystable, "n={n}");
            }
        }
    }

    #[test]
    fn regular_fibers_are_polystable() {
        let mut rng = seeded_rng(5);
        let star = pres(FamilySpec::StarRaag { leaves: 2 });
        for _ in 0..10 {
            let rep = sample_hom(&star, SamplerStyle::AngleFiber(FiberCase::Regular), &mut rng, &SamplerParams::default())
                .unwrap();
            assert_eq!(
                polystable_probe(&rep, &FlowOptions::default()).unwrap(),
                PolystabilityVerdict::LikelyPolystable
            );
        }
    }

    #[test]
    fn rejects_non_homomorphism() {
        let p = pres(FamilySpec::Abelian { rank: 2 });
        let a = MatC::from_diag(&[c(2.0, 0.0), c(0.5, 0.0)]);
        let b = MatC::from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(-1.0, 0.0), c(0.0, 0.0)]]);
        let rep = Rep::new(p, alloc::vec![a, b]).unwrap();
        assert!(matches!(kn_flow(&rep, &FlowOptions::default()), Err(FlowError::BadInput(_))));
    }

    #[test]
    fn normal_retract_examples() {
        let p = pres(FamilySpec::Abelian { rank: 2 });
        let a = MatC::from_diag(&[c(2.0, 0.0), c(0.5, 0.0)]);
        let b = MatC::from_diag(&[c(3.0, 0.0), c(1.0 / 3.0, 0.0)]);
        let rep = Rep::new(p.clone(), alloc::vec![a, b]).unwrap();
        assert_eq!(normal_retract(&rep, 0.0).unwrap(), rep);
        for i in 0..=10 {
            let t = i as f64 / 10.0;
            let r = normal_retract(&rep, t).unwrap();
            assert!(relation_residual(&r).unwrap() < 1e-10);
            for m in r.images() {
                assert!((m.det() - c(1.0, 0.0)).norm() < 1e-10);
            }
        }
        let end = normal_retract(&rep, 1.0).unwrap();
        assert!(end.image(0).dist(&MatC::identity(2)) < 1e-12);
        assert!(end.image(1).dist(&MatC::identity(2)) < 1e-12);

        let mut rng = seeded_rng(6);
        let us = Rep::new(p, alloc::vec![sample_su(2, &mut rng), sample_su(2, &mut rng)]).unwrap();
        assert!(normal_retract(&us, 0.4).unwrap().max_dist(&us) < 1e-10);

        let j = MatC::from_rows(&[&[c(1.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0), c(1.0, 0.0)]]);
        let q = pres(FamilySpec::Free { rank: 1 });
        let jr = Rep::new(q, alloc::vec![j]).unwrap();
        assert!(matches!(normal_retract(&jr, 0.5), Err(MatError::NotNormal(_))));
    }

    #[test]
    fn normal_tuples_are_fixed_points() {
        let mut rng = seeded_rng(7);
        let p = pres(FamilySpec::Abelian { rank: 3 });
        let params = SamplerParams { conj_spread: 0.0, ..SamplerParams::with_dim(3) };
        for _ in 0..50 {
            let rep = sample_hom(&p, SamplerStyle::AbelianDiagonal, &mut rng, &params).unwrap();
            let out = kn_flow(&rep, &FlowOptions::default()).unwrap();
            assert_eq!(out.trace.status, FlowStatus::Converged);
            assert_eq!(out.trace.iterations(), 0);
            let end = normal_retract(&rep, 1.0).unwrap();
            assert!(end.images().iter().all(|m| m.unitarity_defect() < 1e-10));
            assert!(kn_residual(&end) < 1e-10);
        }
    }
}
