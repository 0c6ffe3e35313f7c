//! End-to-end acceptance suite: one PASS/FAIL line per criterion, non-zero
//! exit status if any criterion fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use charvar_core::census::{fricke_kappa, retract_census, run_census, CensusGroup, FiberCase};
use charvar_core::kempfness::{kn_flow, normal_retract, polystable_probe, FlowOptions, FlowStatus, PolystabilityVerdict};
use charvar_core::matgroup::{kak_decompose, kak_interpolate, sample_sl, sample_su, MatC, C64};
use charvar_core::presentation::{build_family, FamilySpec, FiniteGroup, GroupPresentation};
use charvar_core::repvar::{kn_residual, relation_residual, sample_hom, trace_coordinates, Rep, SamplerParams, SamplerStyle};
use charvar_core::retract::{move_to_hom0, verify_sdr, SdrFamily, SDR_THRESHOLDS};
use charvar_core::seeded_rng;

const N: usize = 1000;

type Outcome = Result<String, String>;

fn pres(spec: FamilySpec) -> Arc<GroupPresentation> {
    Arc::new(build_family(&spec).unwrap())
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn kak_reconstruction() -> Outcome {
    let mut rng = seeded_rng(101);
    let (mut worst_rec, mut worst_path) = (0.0f64, 0.0f64);
    for n in [2, 3] {
        for _ in 0..N {
            let g = sample_sl(n, &mut rng, 1.0);
            let f = kak_decompose(&g).map_err(|e| e.to_string())?;
            worst_rec = worst_rec.max(f.path(1.0).dist(&g));
            for i in 0..=20 {
                let t = i as f64 / 20.0;
                let a = kak_interpolate(&g, t).map_err(|e| e.to_string())?;
                worst_path = worst_path.max(a.dist(&f.path(t)));
            }
        }
    }
    check(worst_rec < 1e-9 && worst_path < 1e-8, format!("reconstruction {worst_rec:.1e}, closed form vs factors {worst_path:.1e}"))
}

/// `g` unitary and `A` in its centralizer, built in a shared unitary frame.
fn commuting_pair(n: usize, rng: &mut charvar_core::SeededRng, i: usize) -> (MatC, MatC) {
    let u = sample_su(n, rng);
    let th = 0.3 + (i % 7) as f64 * 0.4;
    let (gd, a0) = if n == 2 {
        if i % 5 == 0 {
            (MatC::scalar(2, c(-1.0, 0.0)), sample_sl(2, rng, 1.0))
        } else {
            let z = sample_sl(2, rng, 1.0).det().sqrt() * c(1.5, 0.7);
            (MatC::from_diag(&[C64::from_polar(1.0, th), C64::from_polar(1.0, -th)]), MatC::from_diag(&[z, z.inv()]))
        }
    } else {
        let x = sample_sl(2, rng, 1.0);
        let mut a0 = MatC::identity(3);
        for r in 0..2 {
            for s in 0..2 {
                a0[(r, s)] = x[(r, s)];
            }
        }
        let e = C64::from_polar(1.0, th);
        (MatC::from_diag(&[e, e, (e * e).inv()]), a0)
    };
    (u * gd * u.adjoint(), u * a0 * u.adjoint())
}

fn commuting_deformation() -> Outcome {
    let mut rng = seeded_rng(102);
    let mut failures = 0;
    let mut worst = 0.0f64;
    for i in 0..N {
        let n = 2 + i % 2;
        let (g, a) = commuting_pair(n, &mut rng, i);
        for k in 0..=20 {
            let at = kak_interpolate(&a, k as f64 / 20.0).map_err(|e| e.to_string())?;
            let d = g.commutator(&at).frobenius_norm();
            worst = worst.max(d);
            failures += (d >= 1e-7) as usize;
        }
    }
    check(failures == 0, format!("{failures} grid failures, worst ‖[g, A(t)]‖ {worst:.1e}"))
}

fn star_raag_sdr() -> Outcome {
    let p = pres(FamilySpec::StarRaag { leaves: 2 });
    let mut rng = seeded_rng(103);
    let params = SamplerParams { elliptic: true, ..SamplerParams::with_dim(3) };
    let cases = [FiberCase::Central, FiberCase::Regular, FiberCase::RepeatedDiag];
    let mut passed = 0;
    for i in 0..N {
        let rep = sample_hom(&p, SamplerStyle::AngleFiber(cases[i % 3]), &mut rng, &params).map_err(|e| e.to_string())?;
        let (rep, _) = move_to_hom0(&rep, SdrFamily::Star).map_err(|e| e.to_string())?;
        passed += verify_sdr(&rep, SdrFamily::Star, 11).map_err(|e| e.to_string())?.passes(&SDR_THRESHOLDS) as usize;
    }
    check(passed == N, format!("{passed}/{N} pass"))
}

fn finite_by_free_sdr() -> Outcome {
    let p = pres(FamilySpec::DirectWithFinite { free_rank: 2, finite: FiniteGroup::Cyclic4 });
    let mut rng = seeded_rng(104);
    let mut passed = 0;
    for i in 0..N {
        let params = SamplerParams::with_dim(2 + i % 2);
        let rep = sample_hom(&p, SamplerStyle::FiniteByFree, &mut rng, &params).map_err(|e| e.to_string())?;
        let (rep, _) = move_to_hom0(&rep, SdrFamily::FiniteByFree).map_err(|e| e.to_string())?;
        passed += verify_sdr(&rep, SdrFamily::FiniteByFree, 11).map_err(|e| e.to_string())?.passes(&SDR_THRESHOLDS) as usize;
    }
    check(passed == N, format!("{passed}/{N} pass"))
}

fn normal_tuples_in_kn_set() -> Outcome {
    let p = pres(FamilySpec::Free { rank: 3 });
    let mut rng = seeded_rng(105);
    let (mut worst, mut bad) = (0.0f64, 0);
    for i in 0..N {
        let n = 2 + i % 2;
        let images = (0..3)
            .map(|_| {
                let u = sample_su(n, &mut rng);
                let d = sample_sl(n, &mut rng, 1.0).normalize_det().unwrap();
                // eigenvalues of a random SL(n) element, placed in a unitary frame
                let vals = charvar_core::matgroup::eig_decompose(&d).unwrap().values;
                u * MatC::from_diag(&vals) * u.adjoint()
            })
            .collect();
        let rep = Rep::new(p.clone(), images).map_err(|e| e.to_string())?;
        worst = worst.max(kn_residual(&rep));
        let out = kn_flow(&rep, &FlowOptions::default()).map_err(|e| e.to_string())?;
        bad += (kn_residual(&rep) >= 1e-10 || out.trace.status != FlowStatus::Converged || out.trace.iterations() != 0) as usize;
    }
    check(bad == 0, format!("worst residual {worst:.1e}, {bad} not converged at iteration 0"))
}

fn flow_monotone_and_convergent() -> Outcome {
    let p = pres(FamilySpec::Free { rank: 2 });
    let mut rng = seeded_rng(106);
    let total = 500;
    let (mut converged, mut violations, mut other) = (0, 0, 0);
    for _ in 0..total {
        let rep = sample_hom(&p, SamplerStyle::Free, &mut rng, &SamplerParams::with_dim(2)).map_err(|e| e.to_string())?;
        let out = kn_flow(&rep, &FlowOptions::default()).map_err(|e| e.to_string())?;
        violations += out.trace.steps.windows(2).filter(|w| w[1].norm_sq > w[0].norm_sq).count();
        match out.trace.status {
            FlowStatus::Converged if out.trace.last().kn_residual < 1e-8 => converged += 1,
            FlowStatus::MaxIters => {}
            _ => other += 1,
        }
    }
    check(
        violations == 0 && other == 0 && converged * 100 >= 95 * total,
        format!("{converged}/{total} converged, {violations} monotonicity violations, {other} other outcomes"),
    )
}

fn non_polystable_detection() -> Outcome {
    let opts = FlowOptions::default();
    let u = MatC::from_rows(&[&[c(1.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0), c(1.0, 0.0)]]);
    let rep = Rep::new(pres(FamilySpec::Free { rank: 1 }), vec![u]).map_err(|e| e.to_string())?;
    let out = kn_flow(&rep, &opts).map_err(|e| e.to_string())?;
    let unipotent_norm = out.trace.last().norm_sq;
    let unipotent_ok = out.trace.status == FlowStatus::NonClosedOrbitSuspected && (unipotent_norm - 2.0).abs() < 1e-3;

    let p = pres(FamilySpec::StarRaag { leaves: 2 });
    let mut rng = seeded_rng(107);
    let mut flagged = 0;
    for i in 0..200 {
        let rep = sample_hom(&p, SamplerStyle::AngleFiber(FiberCase::Jordan), &mut rng, &SamplerParams::with_dim(2 + i % 2))
            .map_err(|e| e.to_string())?;
        flagged += (polystable_probe(&rep, &opts).map_err(|e| e.to_string())? == PolystabilityVerdict::LikelyNotPolystable) as usize;
    }
    check(
        unipotent_ok && flagged == 200,
        format!("unipotent {} with norm² {unipotent_norm:.6}; jordan {flagged}/200 flagged", out.trace.status.label()),
    )
}

fn sl2_census() -> Outcome {
    let r = run_census(CensusGroup::SL2, N, 7).map_err(|e| e.to_string())?;
    let jordan = r.row(FiberCase::Jordan).map(|row| row.polystable_fraction);
    check(
        r.component_estimate == 3 && jordan == Some(0.0),
        format!("component estimate {}, jordan polystable fraction {:?}", r.component_estimate, jordan.unwrap_or(f64::NAN)),
    )
}

fn sl3_census() -> Outcome {
    let r = run_census(CensusGroup::SL3, N, 7).map_err(|e| e.to_string())?;
    let frac = |c| r.row(c).map(|row| row.polystable_fraction).unwrap_or(f64::NAN);
    let centrals = r.row(FiberCase::Central).map(|row| row.signature.central_characters.len()).unwrap_or(0);
    let (j, reg, rep) = (frac(FiberCase::Jordan), frac(FiberCase::Regular), frac(FiberCase::RepeatedDiag));
    check(
        r.case_rows.len() == 4 && j == 0.0 && centrals == 3 && reg >= 0.99 && rep >= 0.99,
        format!(
            "{} rows, jordan {j}, central fibers {centrals}, regular {reg:.3}, repeated-diag {rep:.3}, estimate {}",
            r.case_rows.len(),
            r.component_estimate
        ),
    )
}

fn scaling_retraction() -> Outcome {
    let p = pres(FamilySpec::Abelian { rank: 2 });
    let mut rng = seeded_rng(110);
    let (mut unit, mut resid, mut drift) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..N {
        let params = SamplerParams { conj_spread: 0.0, ..SamplerParams::with_dim(2 + i % 2) };
        let rep = sample_hom(&p, SamplerStyle::AbelianDiagonal, &mut rng, &params).map_err(|e| e.to_string())?;
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            let r = normal_retract(&rep, t).map_err(|e| e.to_string())?;
            resid = resid.max(relation_residual(&r).map_err(|e| e.to_string())?);
            for a in r.images() {
                drift = drift.max((a.det() - c(1.0, 0.0)).norm());
                if k == 10 {
                    unit = unit.max(a.unitarity_defect());
                }
            }
        }
    }
    check(
        unit < 1e-10 && resid < 1e-10 && drift < 1e-10,
        format!("endpoint unitarity {unit:.1e}, relation residual {resid:.1e}, det drift {drift:.1e}"),
    )
}

fn su2_trace_ball() -> Outcome {
    // oracle: genuine SU(2) pairs
    let p = pres(FamilySpec::Free { rank: 2 });
    let mut rng = seeded_rng(111);
    let mut oracle_max = f64::NEG_INFINITY;
    for _ in 0..N {
        let rep = Rep::new(p.clone(), vec![sample_su(2, &mut rng), sample_su(2, &mut rng)]).map_err(|e| e.to_string())?;
        let (x, y, z) = trace_coordinates(&rep).map_err(|e| e.to_string())?;
        oracle_max = oracle_max.max(fricke_kappa(x, y, z).re);
    }
    let s = retract_census(CensusGroup::SL2, N, 11).map_err(|e| e.to_string())?;
    let ball = s.trace_ball.as_ref().ok_or("no trace-ball statistics")?;
    let central = s.row(FiberCase::Central).map(|r| r.pass_count).unwrap_or(0);
    check(
        oracle_max <= 4.0 + 1e-9 && ball.sample_count == N && ball.inside_count == N && central == N,
        format!(
            "{}/{} endpoints inside (max imag {:.1e}, max κ {:.6}); oracle max κ {oracle_max:.6}; {central}/{N} retractions pass",
            ball.inside_count, ball.sample_count, ball.max_imag, ball.max_kappa
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("KAK reconstruction and closed-form interpolation", kak_reconstruction),
        ("commuting deformation stays in the centralizer", commuting_deformation),
        ("star RAAG retraction", star_raag_sdr),
        ("free-by-finite retraction", finite_by_free_sdr),
        ("normal tuples lie in the Kempf-Ness set", normal_tuples_in_kn_set),
        ("flow monotonicity and convergence", flow_monotone_and_convergent),
        ("non-polystable detection", non_polystable_detection),
        ("SL(2) census", sl2_census),
        ("SL(3) census", sl3_census),
        ("eigenvalue scaling retraction", scaling_retraction),
        ("SU(2) trace-ball endpoints", su2_trace_ball),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2}: PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
