//! Explicit deformation retractions of `Hom(Γ, G)` onto `Hom(Γ, K)` for star
//! RAAGs and for `F_r × F` with `F` finite, plus a verifier.
//!
//! Parameter convention: `t = 1` is the identity map and `t = 0` lands in
//! `Hom(Γ, K)`. (Much of the literature runs homotopies the other way.)

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::kempfness::{flow_images, FlowError, FlowOptions, FlowStatus};
use crate::matgroup::{
    classify_element, eig_decompose, hermitian_eigen, kak_interpolate, MatC, MatError, C64,
};
use crate::presentation::{FamilyTag, GroupPresentation};
use crate::repvar::{conjugate, relation_residual, Rep, RepError};

/// Distinguished images must be this close to unitary.
pub const HOM0_TOL: f64 = 1e-8;
/// Allowed distance of distinguished eigenvalue moduli from 1.
const ELLIPTIC_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SdrFamily {
    /// Star RAAG; the centre `a₀` is distinguished.
    Star,
    /// `F_r × F`; all `b`'s are distinguished.
    FiniteByFree,
}

impl SdrFamily {
    pub fn of(pres: &GroupPresentation) -> Option<Self> {
        match pres.family() {
            FamilyTag::StarRaag => Some(SdrFamily::Star),
            FamilyTag::DirectWithFinite { .. } => Some(SdrFamily::FiniteByFree),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SdrFamily::Star => "star",
            SdrFamily::FiniteByFree => "finite-by-free",
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RetractError {
    #[error("presentation is not of the {0} family")]
    WrongFamily(&'static str),
    #[error("distinguished image {index} is not unitary (defect {defect:e})")]
    NotInHom0 { index: usize, defect: f64 },
    #[error("distinguished image {index} is not elliptic")]
    NotElliptic { index: usize },
    #[error("could not conjugate the distinguished images into the compact form")]
    NoConvergence,
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Matrix(#[from] MatError),
}

/// Generator indices that the homotopy keeps fixed.
pub fn distinguished_indices(pres: &GroupPresentation, family: SdrFamily) -> Result<Vec<usize>, RetractError> {
    match (family, pres.family()) {
        (SdrFamily::Star, FamilyTag::StarRaag) => Ok(alloc::vec![0]),
        (SdrFamily::FiniteByFree, FamilyTag::DirectWithFinite { free_rank, finite }) => {
            Ok((*free_rank..free_rank + finite.generator_count()).collect())
        }
        _ => Err(RetractError::WrongFamily(family.label())),
    }
}

fn check_hom0(rep: &Rep, fixed: &[usize]) -> Result<(), RetractError> {
    for &index in fixed {
        let defect = rep.image(index).unitarity_defect();
        if !(defect < HOM0_TOL) {
            return Err(RetractError::NotInHom0 { index, defect });
        }
    }
    Ok(())
}

/// Keeps the distinguished images and moves every other image along
/// `kak_interpolate(·, t)`.
pub fn star_homotopy(rep: &Rep, family: SdrFamily, t: f64) -> Result<Rep, RetractError> {
    let fixed = distinguished_indices(rep.presentation(), family)?;
    check_hom0(rep, &fixed)?;
    homotopy_unchecked(rep, &fixed, t)
}

fn homotopy_unchecked(rep: &Rep, fixed: &[usize], t: f64) -> Result<Rep, RetractError> {
    let images = rep
        .images()
        .iter()
        .enumerate()
        .map(|(i, a)| if fixed.contains(&i) { Ok(*a) } else { kak_interpolate(a, t) })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(rep.with_images_unchecked(images))
}

/// Conjugates `rep` so its distinguished images become unitary; returns the
/// new rep and the conjugator `g` (with `new = g·rep·g⁻¹`).
pub fn move_to_hom0(rep: &Rep, family: SdrFamily) -> Result<(Rep, MatC), RetractError> {
    let fixed = distinguished_indices(rep.presentation(), family)?;
    let n = rep.dim();
    if check_hom0(rep, &fixed).is_ok() {
        return Ok((rep.clone(), MatC::identity(n)));
    }
    let g = match family {
        SdrFamily::Star => {
            let b = rep.image(fixed[0]);
            let class = classify_element(b, 1e-8)?;
            let elliptic = class.is_semisimple && class.eigenvalues.iter().all(|l| (l.norm() - 1.0).abs() < ELLIPTIC_TOL);
            if !elliptic {
                return Err(RetractError::NotElliptic { index: fixed[0] });
            }
            normalizing_conjugator(b)?
        }
        SdrFamily::FiniteByFree => {
            // a finite image has a closed orbit, so the flow on the b's reaches
            // the Kempf–Ness set, which for it consists of unitary tuples
            let bs: Vec<MatC> = fixed.iter().map(|&i| *rep.image(i)).collect();
            let opts = FlowOptions { residual_tol: 1e-12, max_iters: 20_000, ..FlowOptions::default() };
            let (_, trace, p) = flow_images(&bs, &opts)?;
            if trace.status != FlowStatus::Converged {
                return Err(RetractError::NoConvergence);
            }
            p
        }
    };
    let moved = conjugate(rep, &g)?;
    check_hom0(&moved, &fixed).map_err(|_| RetractError::NoConvergence)?;
    Ok((moved, g))
}

/// For diagonalizable `b`, a `g ∈ SL(n)` with `g·b·g⁻¹` normal.
pub(crate) fn normalizing_conjugator(b: &MatC) -> Result<MatC, RetractError> {
    let n = b.dim();
    // b = V·D·V⁻¹ with V = H·U (polar); (VV*)^{-1/2} = H⁻¹ maps b to U·D·U*
    let v = eig_decompose(b)?.vectors;
    let h = hermitian_eigen(&(v * v.adjoint()));
    if !(h.values[n - 1] > 0.0) {
        return Err(RetractError::NoConvergence);
    }
    let g = h.apply(|x| 1.0 / x.sqrt());
    Ok(g.scale(C64::new(g.det().norm().powf(-1.0 / n as f64), 0.0)))
}

/// Pass/fail thresholds of [`verify_sdr`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdrThresholds {
    pub max_relation_residual: f64,
    pub endpoint_unitarity: f64,
    pub k_fixedness: f64,
    pub det_drift: f64,
}

pub const SDR_THRESHOLDS: SdrThresholds =
    SdrThresholds { max_relation_residual: 1e-6, endpoint_unitarity: 1e-7, k_fixedness: 1e-9, det_drift: 1e-9 };

impl Default for SdrThresholds {
    fn default() -> Self {
        SDR_THRESHOLDS
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomotopyReport {
    pub t_grid: Vec<f64>,
    /// Worst relation residual along the path.
    pub max_relation_residual: f64,
    /// Worst `‖A*A − I‖_F` at `t = 0`.
    pub endpoint_unitarity: f64,
    /// Worst displacement of the (all-unitary) endpoint when it is itself
    /// pushed along the homotopy: the retraction must fix `Hom(Γ, K)`.
    pub k_fixedness: f64,
    /// Worst `|det − 1|` along the path.
    pub det_drift: f64,
}

impl HomotopyReport {
    pub fn passes(&self, th: &SdrThresholds) -> bool {
        self.max_relation_residual < th.max_relation_residual
            && self.endpoint_unitarity < th.endpoint_unitarity
            && self.k_fixedness < th.k_fixedness
            && self.det_drift < th.det_drift
    }
}

/// Uniform grid of `size ≥ 2` points from 0 to 1.
pub fn uniform_grid(size: usize) -> Vec<f64> {
    let m = size.max(2) - 1;
    (0..=m).map(|i| i as f64 / m as f64).collect()
}

/// Evaluates the homotopy on a grid and measures the retraction contract.
pub fn verify_sdr(rep: &Rep, family: SdrFamily, grid_size: usize) -> Result<HomotopyReport, RetractError> {
    let fixed = distinguished_indices(rep.presentation(), family)?;
    check_hom0(rep, &fixed)?;
    let t_grid = uniform_grid(grid_size);
    let one = C64::new(1.0, 0.0);
    let mut report = HomotopyReport {
        t_grid: t_grid.clone(),
        max_relation_residual: 0.0,
        endpoint_unitarity: 0.0,
        k_fixedness: 0.0,
        det_drift: 0.0,
    };
    let mut endpoint = None;
    for &t in &t_grid {
        let r = homotopy_unchecked(rep, &fixed, t)?;
        report.max_relation_residual = report.max_relation_residual.max(relation_residual(&r)?);
        for a in r.images() {
            report.det_drift = report.det_drift.max((a.det() - one).norm());
        }
        if t == 0.0 {
            endpoint = Some(r);
        }
    }
    let endpoint = endpoint.expect("grid starts at 0");
    report.endpoint_unitarity = endpoint.images().iter().map(MatC::unitarity_defect).fold(0.0, f64::max);
    for &t in &t_grid {
        let r = homotopy_unchecked(&endpoint, &fixed, t)?;
        report.k_fixedness = report.k_fixedness.max(r.max_dist(&endpoint));
    }
    Ok(report)
}
