//! Points of `Hom(Γ, SL(n, ℂ)) ⊂ SL(n, ℂ)^r`: representation tuples, their
//! residuals, the conjugation action and constructive samplers.

use alloc::sync::Arc;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;
use rand::Rng;

use crate::matgroup::{
    complex_normal, condition_number, expm_hermitian, hermitian_traceless, sample_sl, MatC, MatError, C64,
};
use crate::presentation::{evaluate_word, EvalError, FamilyTag, FiniteGroup, GroupPresentation};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RepError {
    #[error("expected {expected} images, got {got}")]
    WrongImageCount { expected: usize, got: usize },
    #[error("image {index} has dimension {got}, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, got: usize },
    #[error("image {index} is not special linear (|det - 1| = {defect:e})")]
    NotSpecialLinear { index: usize, defect: f64 },
    #[error("trace coordinates need exactly two generators in dimension 2")]
    WrongShape,
    #[error("sampler {style} does not support this presentation")]
    UnsupportedFamily { style: &'static str },
    #[error("centralizer construction failed: {0}")]
    CentralizerConstructionFailure(&'static str),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Matrix(#[from] MatError),
}

/// `|det − 1|` allowance for images, relative to the size of the matrix.
pub const SL_TOL: f64 = 1e-9;

/// A tuple of matrices, one per generator of a fixed presentation.
#[derive(Debug, Clone, PartialEq)]
pub struct Rep {
    presentation: Arc<GroupPresentation>,
    images: Vec<MatC>,
    dim: usize,
}

impl Rep {
    /// Checks image count, common dimension and `SL(n)` membership.
    /// Relators are *not* checked; see [`relation_residual`].
    pub fn new(presentation: impl Into<Arc<GroupPresentation>>, images: Vec<MatC>) -> Result<Self, RepError> {
        let presentation = presentation.into();
        let expected = presentation.generator_count();
        if images.len() != expected {
            return Err(RepError::WrongImageCount { expected, got: images.len() });
        }
        let dim = images.first().map_or(2, MatC::dim);
        for (index, m) in images.iter().enumerate() {
            if m.dim() != dim {
                return Err(RepError::DimensionMismatch { index, expected: dim, got: m.dim() });
            }
            let defect = (m.det() - C64::new(1.0, 0.0)).norm();
            let allowance = SL_TOL * m.frobenius_norm().max(1.0).powi(dim as i32);
            if !(defect <= allowance) {
                return Err(RepError::NotSpecialLinear { index, defect });
            }
        }
        Ok(Rep { presentation, images, dim })
    }

    /// Same presentation, new images (checked as in [`Rep::new`]).
    pub fn with_images(&self, images: Vec<MatC>) -> Result<Self, RepError> {
        Rep::new(self.presentation.clone(), images)
    }

    /// For images obtained from valid ones by conjugation or other
    /// determinant-preserving maps.
    pub(crate) fn with_images_unchecked(&self, images: Vec<MatC>) -> Self {
        Rep { presentation: self.presentation.clone(), dim: self.dim, images }
    }

    pub fn presentation(&self) -> &GroupPresentation {
        &self.presentation
    }

    pub fn shared_presentation(&self) -> Arc<GroupPresentation> {
        self.presentation.clone()
    }

    pub fn images(&self) -> &[MatC] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &MatC {
        &self.images[i]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Largest image-wise Frobenius distance to `other`.
    pub fn max_dist(&self, other: &Rep) -> f64 {
        self.images.iter().zip(&other.images).map(|(a, b)| a.dist(b)).fold(0.0, f64::max)
    }

    pub fn residuals(&self) -> Result<ResidualReport, RepError> {
        Ok(ResidualReport {
            relation_residual: relation_residual(self)?,
            kn_residual: kn_residual(self),
            norm_sq: norm_sq(self),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    /// `max_R ‖ρ(R) − I‖_F`.
    pub relation_residual: f64,
    /// `‖Σ [Aᵢ*, Aᵢ]‖_F`.
    pub kn_residual: f64,
    /// `Σ tr(Aᵢ*Aᵢ)`.
    pub norm_sq: f64,
}

/// `max_R ‖ρ(R) − I‖_F` over the relators (0 when there are none).
pub fn relation_residual(rep: &Rep) -> Result<f64, RepError> {
    let id = MatC::identity(rep.dim);
    let mut worst: f64 = 0.0;
    for r in rep.presentation.relators() {
        let m = evaluate_word(r, &rep.images)?;
        worst = worst.max(m.dist(&id));
    }
    Ok(worst)
}

/// The moment map `M(ρ) = Σ (Aᵢ*Aᵢ − AᵢAᵢ*)`, Hermitian and traceless.
pub fn moment_map(rep: &Rep) -> MatC {
    moment_map_of(&rep.images)
}

pub(crate) fn moment_map_of(images: &[MatC]) -> MatC {
    let n = images.first().map_or(2, MatC::dim);
    let mut m = MatC::zeros(n);
    for a in images {
        let ad = a.adjoint();
        m += ad * *a - *a * ad;
    }
    m.hermitian_part()
}

/// `‖Σ [Aᵢ*, Aᵢ]‖_F`; zero exactly on the Kempf–Ness set.
pub fn kn_residual(rep: &Rep) -> f64 {
    moment_map(rep).frobenius_norm()
}

/// The Kempf–Ness functional `Σ ‖Aᵢ‖_F²`.
pub fn norm_sq(rep: &Rep) -> f64 {
    rep.images.iter().map(MatC::frobenius_norm_sq).sum()
}

/// `Aᵢ ↦ g·Aᵢ·g⁻¹`.
pub fn conjugate(rep: &Rep, g: &MatC) -> Result<Rep, RepError> {
    if g.dim() != rep.dim {
        return Err(MatError::DimensionMismatch.into());
    }
    let gi = g.inverse()?;
    Ok(rep.with_images_unchecked(rep.images.iter().map(|a| *g * *a * gi).collect()))
}

/// `(tr A, tr B, tr AB)` for a pair in `SL(2, ℂ)`: coordinates on the
/// character variety of the free group of rank two.
pub fn trace_coordinates(rep: &Rep) -> Result<(C64, C64, C64), RepError> {
    if rep.images.len() != 2 || rep.dim != 2 {
        return Err(RepError::WrongShape);
    }
    Ok(pair_trace_coordinates(&rep.images[0], &rep.images[1]))
}

pub(crate) fn pair_trace_coordinates(a: &MatC, b: &MatC) -> (C64, C64, C64) {
    (a.trace(), b.trace(), (*a * *b).trace())
}

/// Which stratum of the centralizer picture `A, C ∈ Z(B)` to sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiberCase {
    /// `B` central: `ζ·I` with `ζⁿ = 1`.
    Central,
    /// `B` not diagonalizable.
    Jordan,
    /// `B` with pairwise distinct eigenvalues.
    Regular,
    /// `B = diag(λ, λ, λ⁻²)`, `λ³ ≠ 1` (`n = 3` only).
    RepeatedDiag,
}

impl FiberCase {
    pub const ALL: [FiberCase; 4] = [FiberCase::Central, FiberCase::Jordan, FiberCase::Regular, FiberCase::RepeatedDiag];

    pub fn label(self) -> &'static str {
        match self {
            FiberCase::Central => "central",
            FiberCase::Jordan => "jordan",
            FiberCase::Regular => "regular",
            FiberCase::RepeatedDiag => "repeated-diag",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        FiberCase::ALL.into_iter().find(|c| c.label() == s)
    }

    /// Whether the case exists in `SL(n)`.
    pub fn supported(self, n: usize) -> bool {
        match self {
            FiberCase::Central | FiberCase::Regular => (2..=4).contains(&n),
            FiberCase::Jordan => n == 2 || n == 3,
            FiberCase::RepeatedDiag => n == 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerStyle {
    /// Independent draws; needs a presentation without relators.
    Free,
    /// Commuting tuple `g·Dᵢ·g⁻¹` with diagonal `Dᵢ`; satisfies every RAAG.
    AbelianDiagonal,
    /// Star RAAG: `B` (generator 0) of the given kind, the leaves drawn from
    /// its centralizer.
    AngleFiber(FiberCase),
    /// `F_r × F`: the `b`'s from a fixed finite subgroup of `SU(2)`, the
    /// `a`'s from their centralizer.
    FiniteByFree,
}

impl SamplerStyle {
    fn name(self) -> &'static str {
        match self {
            SamplerStyle::Free => "free",
            SamplerStyle::AbelianDiagonal => "abelian-diagonal",
            SamplerStyle::AngleFiber(_) => "angle-fiber",
            SamplerStyle::FiniteByFree => "finite-by-free",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerParams {
    pub dim: usize,
    /// Scale of the non-unitary (Hermitian) directions of drawn elements.
    pub spread: f64,
    /// Spread of the final conjugator; `0` keeps the normal form unitary-conjugate.
    pub conj_spread: f64,
    /// Draw distinguished elements with unit-modulus spectrum.
    pub elliptic: bool,
}

impl Default for SamplerParams {
    fn default() -> Self {
        SamplerParams { dim: 2, spread: 1.0, conj_spread: 0.5, elliptic: false }
    }
}

impl SamplerParams {
    pub fn with_dim(dim: usize) -> Self {
        SamplerParams { dim, ..Self::default() }
    }
}

/// Conjugators worse than this make the normal form numerically meaningless.
const MAX_CONJUGATOR_COND: f64 = 1e6;
/// Minimal eigenvalue separation for regular draws.
const REGULAR_GAP: f64 = 0.25;
const ATTEMPTS: usize = 16;

/// Draws a point of `Hom(Γ, SL(n, ℂ))` by construction; output relation
/// residual is below `1e-8`.
pub fn sample_hom<R: Rng + ?Sized>(
    pres: &Arc<GroupPresentation>,
    style: SamplerStyle,
    rng: &mut R,
    params: &SamplerParams,
) -> Result<Rep, RepError> {
    let n = params.dim;
    let unsupported = Err(RepError::UnsupportedFamily { style: style.name() });
    if !(2..=4).contains(&n) {
        return unsupported;
    }
    let r = pres.generator_count();
    let images = match style {
        SamplerStyle::Free => {
            if !pres.relators().is_empty() {
                return unsupported;
            }
            (0..r).map(|_| sample_sl(n, rng, params.spread)).collect()
        }
        SamplerStyle::AbelianDiagonal => {
            if !matches!(pres.family(), FamilyTag::Free | FamilyTag::Abelian | FamilyTag::Raag(_) | FamilyTag::StarRaag) {
                return unsupported;
            }
            let ds: Vec<MatC> = (0..r).map(|_| random_torus(n, rng, params.spread, params.elliptic)).collect();
            return finish(pres, rng, params, ds);
        }
        SamplerStyle::AngleFiber(case) => {
            if *pres.family() != FamilyTag::StarRaag || !case.supported(n) {
                return unsupported;
            }
            if case == FiberCase::Central {
                // B = ζI is fixed by conjugation, so no frame change is needed
                let k = rng.random_range(0..n);
                let zeta = C64::from_polar(1.0, core::f64::consts::TAU * k as f64 / n as f64);
                let mut im = Vec::with_capacity(r);
                im.push(MatC::scalar(n, zeta));
                im.extend((1..r).map(|_| sample_sl(n, rng, params.spread)));
                im
            } else {
                let im = angle_fiber_normal_form(case, n, r, rng, params);
                return finish(pres, rng, params, im);
            }
        }
        SamplerStyle::FiniteByFree => {
            let FamilyTag::DirectWithFinite { free_rank, finite } = *pres.family() else {
                return unsupported;
            };
            let bs = finite_images(finite, n);
            let group = enumerate_group(&bs);
            let mut im: Vec<MatC> = (0..free_rank).map(|_| centralizer_element(&group, n, rng, params.spread)).collect();
            im.extend(bs);
            return finish(pres, rng, params, im);
        }
    };
    let rep = Rep::new(pres.clone(), images)?;
    check_residual(&rep)?;
    Ok(rep)
}

/// Conjugates a normal-form tuple by a random `g` and validates.
fn finish<R: Rng + ?Sized>(
    pres: &Arc<GroupPresentation>,
    rng: &mut R,
    params: &SamplerParams,
    normal_form: Vec<MatC>,
) -> Result<Rep, RepError> {
    let n = params.dim;
    for _ in 0..ATTEMPTS {
        let g = sample_sl(n, rng, params.conj_spread);
        if condition_number(&g)? > MAX_CONJUGATOR_COND {
            continue;
        }
        let gi = g.inverse()?;
        let rep = Rep::new(pres.clone(), normal_form.iter().map(|a| g * *a * gi).collect())?;
        if check_residual(&rep).is_ok() {
            return Ok(rep);
        }
    }
    Err(RepError::CentralizerConstructionFailure("conjugated tuple failed the relation check"))
}

fn check_residual(rep: &Rep) -> Result<(), RepError> {
    if relation_residual(rep)? < 1e-8 {
        Ok(())
    } else {
        Err(RepError::CentralizerConstructionFailure("relation residual above 1e-8"))
    }
}

/// Complex Gaussian scaled by `spread` (purely imaginary when `elliptic`).
fn log_entry<R: Rng + ?Sized>(rng: &mut R, spread: f64, elliptic: bool) -> C64 {
    let z = complex_normal(rng) * spread;
    if elliptic {
        C64::new(0.0, z.im * core::f64::consts::SQRT_2)
    } else {
        z
    }
}

/// `diag(e^{z₁}, …, e^{zₙ})` with `Σzᵢ = 0`.
fn random_torus<R: Rng + ?Sized>(n: usize, rng: &mut R, spread: f64, elliptic: bool) -> MatC {
    let mut z: Vec<C64> = (0..n).map(|_| log_entry(rng, spread, elliptic)).collect();
    let mean = z.iter().sum::<C64>() / n as f64;
    for v in z.iter_mut() {
        *v = (*v - mean).exp();
    }
    MatC::from_diag(&z)
}

fn nilpotent_shift(n: usize) -> MatC {
    let mut m = MatC::zeros(n);
    for i in 0..n - 1 {
        m[(i, i + 1)] = C64::new(1.0, 0.0);
    }
    m
}

fn random_sign<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    if rng.random_bool(0.5) {
        1.0
    } else {
        -1.0
    }
}

fn random_root_of_unity<R: Rng + ?Sized>(rng: &mut R, n: usize) -> C64 {
    C64::from_polar(1.0, core::f64::consts::TAU * rng.random_range(0..n) as f64 / n as f64)
}

/// `B` and the leaves in `B`'s eigenbasis (Jordan basis when defective).
fn angle_fiber_normal_form<R: Rng + ?Sized>(
    case: FiberCase,
    n: usize,
    r: usize,
    rng: &mut R,
    params: &SamplerParams,
) -> Vec<MatC> {
    let s = params.spread;
    let ell = params.elliptic;
    let id = MatC::identity(n);
    let nil = nilpotent_shift(n);
    let mut out = Vec::with_capacity(r);
    match case {
        FiberCase::Central => unreachable!("central fibers are built directly"),
        FiberCase::Jordan if n == 2 => {
            out.push((id + nil).scale(C64::new(random_sign(rng), 0.0)));
            for _ in 1..r {
                let c = complex_normal(rng) * s;
                out.push((id + nil.scale(c)).scale(C64::new(random_sign(rng), 0.0)));
            }
        }
        FiberCase::Jordan => {
            let nil2 = nil * nil;
            if rng.random_bool(0.5) {
                // single 3×3 block ζI + N; centralizer = polynomials in N
                let zeta = random_root_of_unity(rng, 3);
                out.push((id + nil.scale(zeta.conj())).scale(zeta));
                for _ in 1..r {
                    let (a, b) = (complex_normal(rng) * s, complex_normal(rng) * s);
                    let w = random_root_of_unity(rng, 3);
                    out.push((id + nil.scale(a) + nil2.scale(b)).scale(w));
                }
            } else {
                // J₂(λ) ⊕ λ⁻²; centralizer = μ(I + sN) ⊕ ν with μ²ν = 1
                let lam = generic_repeated_eigenvalue(rng, s, ell);
                let mut b = MatC::from_diag(&[lam, lam, lam.powi(-2)]);
                b[(0, 1)] = C64::new(1.0, 0.0);
                out.push(b);
                for _ in 1..r {
                    let mu = complex_normal(rng).scale(s).exp();
                    let mut a = MatC::from_diag(&[mu, mu, mu.powi(-2)]);
                    a[(0, 1)] = mu * complex_normal(rng) * s;
                    out.push(a);
                }
            }
        }
        FiberCase::Regular => {
            let b = loop {
                let d = random_torus(n, rng, s.max(0.3), ell);
                let ev = d.diag();
                let mut gap = f64::INFINITY;
                for i in 0..n {
                    for j in i + 1..n {
                        gap = gap.min((ev[i] - ev[j]).norm());
                    }
                }
                if gap > REGULAR_GAP {
                    break d;
                }
            };
            out.push(b);
            for _ in 1..r {
                out.push(random_torus(n, rng, s, false));
            }
        }
        FiberCase::RepeatedDiag => {
            let lam = generic_repeated_eigenvalue(rng, s, ell);
            out.push(MatC::from_diag(&[lam, lam, lam.powi(-2)]));
            for _ in 1..r {
                let c = complex_normal(rng).scale(s * 0.5).exp();
                let x = sample_sl(2, rng, s);
                let mut a = MatC::zeros(3);
                for i in 0..2 {
                    for j in 0..2 {
                        a[(i, j)] = x[(i, j)] * c;
                    }
                }
                a[(2, 2)] = c.powi(-2);
                out.push(a);
            }
        }
    }
    out
}

/// `λ` with `λ³` bounded away from 1, so `diag(λ, λ, λ⁻²)` is not central.
fn generic_repeated_eigenvalue<R: Rng + ?Sized>(rng: &mut R, spread: f64, elliptic: bool) -> C64 {
    loop {
        let lam = if elliptic {
            C64::from_polar(1.0, rng.random_range(0.0..core::f64::consts::TAU))
        } else {
            log_entry(rng, spread.max(0.3), false).exp()
        };
        let lam3 = lam * lam * lam;
        if (lam3 - C64::new(1.0, 0.0)).norm() > 0.1 && lam3.norm() > 0.05 && lam3.norm() < 20.0 {
            return lam;
        }
    }
}

/// Canonical images in `SU(2)` (embedded as `X ⊕ I` for `n > 2`).
pub fn finite_images(finite: FiniteGroup, n: usize) -> Vec<MatC> {
    let c = C64::new;
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let quarter = MatC::from_rows(&[&[z, one], &[-one, z]]);
    let gens2 = match finite {
        FiniteGroup::Cyclic4 => alloc::vec![MatC::from_diag(&[c(0.0, 1.0), c(0.0, -1.0)])],
        FiniteGroup::Quaternion8 => alloc::vec![MatC::from_diag(&[c(0.0, 1.0), c(0.0, -1.0)]), quarter],
        FiniteGroup::BinaryDihedral12 => {
            let w = C64::from_polar(1.0, core::f64::consts::FRAC_PI_3);
            alloc::vec![MatC::from_diag(&[w, w.conj()]), quarter]
        }
    };
    gens2.into_iter().map(|g| embed_block(&g, n)).collect()
}

fn embed_block(g: &MatC, n: usize) -> MatC {
    let mut m = MatC::identity(n);
    for i in 0..g.dim() {
        for j in 0..g.dim() {
            m[(i, j)] = g[(i, j)];
        }
    }
    m
}

/// All elements of the finite group generated by `gens` (closure under
/// multiplication, duplicates identified at `1e-9`).
pub fn enumerate_group(gens: &[MatC]) -> Vec<MatC> {
    let n = gens.first().map_or(2, MatC::dim);
    let mut elems = alloc::vec![MatC::identity(n)];
    let mut frontier = elems.clone();
    while !frontier.is_empty() && elems.len() < 1024 {
        let mut next = Vec::new();
        for x in &frontier {
            for g in gens {
                let y = *x * *g;
                if !elems.iter().any(|e| e.dist(&y) < 1e-9) {
                    elems.push(y);
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    elems
}

/// Average of `f·X·f⁻¹` over a finite unitary group: projection onto the commutant.
fn reynolds(group: &[MatC], x: &MatC) -> MatC {
    let mut acc = MatC::zeros(x.dim());
    for f in group {
        acc += *f * *x * f.adjoint();
    }
    acc.scale(C64::new(1.0 / group.len() as f64, 0.0))
}

/// Random element of the centralizer of a finite unitary group in `SL(n)`:
/// `ζ·exp(R(iH₁))·exp(R(H₂))` with `R` the group average.
fn centralizer_element<R: Rng + ?Sized>(group: &[MatC], n: usize, rng: &mut R, spread: f64) -> MatC {
    let h1 = reynolds(group, &hermitian_traceless(n, rng, spread)).hermitian_part();
    let h2 = reynolds(group, &hermitian_traceless(n, rng, spread)).hermitian_part();
    // exp(iH₁) through the Hermitian calculus: V·diag(e^{iλ})·V*
    let e = crate::matgroup::hermitian_eigen(&h1);
    let mut u = MatC::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut s = C64::zero();
            for k in 0..n {
                s += e.vectors[(i, k)] * e.vectors[(j, k)].conj() * C64::from_polar(1.0, e.values[k]);
            }
            u[(i, j)] = s;
        }
    }
    let zeta = random_root_of_unity(rng, n);
    (u * expm_hermitian(&h2)).scale(zeta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::{classify_element, sample_su, DEFAULT_TOL};
    use crate::presentation::{build_family, FamilySpec};
    use crate::seeded_rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn pres(spec: FamilySpec) -> Arc<GroupPresentation> {
        Arc::new(build_family(&spec).unwrap())
    }

    #[test]
    fn trivial_rep_residuals() {
        let p = pres(FamilySpec::StarRaag { leaves: 2 });
        let rep = Rep::new(p, alloc::vec![MatC::identity(2); 3]).unwrap();
        let r = rep.residuals().unwrap();
        assert_eq!(r.relation_residual, 0.0);
        assert_eq!(r.kn_residual, 0.0);
        assert_eq!(r.norm_sq, 6.0);
    }

    #[test]
    fn central_b_satisfies_angle_relations() {
        let mut rng = seeded_rng(1);
        let p = pres(FamilySpec::StarRaag { leaves: 2 });
        let rep = Rep::new(p, alloc::vec![MatC::identity(2), sample_sl(2, &mut rng, 1.0), sample_sl(2, &mut rng, 1.0)])
            .unwrap();
        assert!(relation_residual(&rep).unwrap() < 1e-12);
    }

    #[test]
    fn noncommuting_abelian_pair() {
        let p = pres(FamilySpec::Abelian { rank: 2 });
        let a = MatC::from_diag(&[c(2.0, 0.0), c(0.5, 0.0)]);
        let b = MatC::from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(-1.0, 0.0), c(0.0, 0.0)]]);
        let rep = Rep::new(p, alloc::vec![a, b]).unwrap();
        let direct = (a * b * a.inverse().unwrap() * b.inverse().unwrap()).dist(&MatC::identity(2));
        let r = relation_residual(&rep).unwrap();
        assert!(r > 0.5);
        assert!((r - direct).abs() < 1e-14);
    }

    #[test]
    fn kn_residual_examples() {
        let p1 = pres(FamilySpec::Free { rank: 1 });
        let j = MatC::from_rows(&[&[c(1.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0), c(1.0, 0.0)]]);
        let rep = Rep::new(p1, alloc::vec![j]).unwrap();
        assert!((kn_residual(&rep) - 2f64.sqrt()).abs() < 1e-15);

        let mut rng = seeded_rng(2);
        let p3 = pres(FamilySpec::Free { rank: 3 });
        let us: Vec<MatC> = (0..3).map(|_| sample_su(3, &mut rng)).collect();
        assert!(kn_residual(&Rep::new(p3.clone(), us.clone()).unwrap()) < 1e-12);
        // normal: unitary conjugates of diagonals
        let normals: Vec<MatC> = us.iter().map(|u| *u * random_torus(3, &mut rng, 1.0, false) * u.adjoint()).collect();
        assert!(kn_residual(&Rep::new(p3, normals).unwrap()) < 1e-12);
    }

    #[test]
    fn conjugation_invariants() {
        let mut rng = seeded_rng(3);
        let p = pres(FamilySpec::Free { rank: 2 });
        for _ in 0..1000 {
            let rep = sample_hom(&p, SamplerStyle::Free, &mut rng, &SamplerParams::default()).unwrap();
            assert_eq!(conjugate(&rep, &MatC::identity(2)).unwrap(), rep);
            let u = sample_su(2, &mut rng);
            let ru = conjugate(&rep, &u).unwrap();
            assert!((norm_sq(&ru) - norm_sq(&rep)).abs() < 1e-10 * norm_sq(&rep).max(1.0));
            assert!((kn_residual(&ru) - kn_residual(&rep)).abs() < 1e-10 * norm_sq(&rep).max(1.0));
            let g = sample_sl(2, &mut rng, 1.0);
            let t0 = trace_coordinates(&rep).unwrap();
            let t1 = trace_coordinates(&conjugate(&rep, &g).unwrap()).unwrap();
            let scale = norm_sq(&rep).max(1.0) * g.frobenius_norm_sq();
            assert!((t0.0 - t1.0).norm() + (t0.1 - t1.1).norm() + (t0.2 - t1.2).norm() < 1e-9 * scale);
        }
    }

    #[test]
    fn trace_coordinate_examples() {
        let p = pres(FamilySpec::Free { rank: 2 });
        let rep = Rep::new(p.clone(), alloc::vec![MatC::identity(2); 2]).unwrap();
        assert_eq!(trace_coordinates(&rep).unwrap(), (c(2.0, 0.0), c(2.0, 0.0), c(2.0, 0.0)));
        let lam = c(1.5, 0.5);
        let a = MatC::from_diag(&[lam, lam.inv()]);
        let b = MatC::from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(-1.0, 0.0), c(0.0, 0.0)]]);
        let (x, y, z) = trace_coordinates(&Rep::new(p, alloc::vec![a, b]).unwrap()).unwrap();
        assert!((x - (lam + lam.inv())).norm() < 1e-15 && y.norm() < 1e-15 && z.norm() < 1e-15);
        let q = pres(FamilySpec::Free { rank: 3 });
        let r3 = Rep::new(q, alloc::vec![MatC::identity(2); 3]).unwrap();
        assert_eq!(trace_coordinates(&r3), Err(RepError::WrongShape));
    }

    #[test]
    fn rejects_non_special_linear() {
        let p = pres(FamilySpec::Free { rank: 1 });
        let m = MatC::from_diag(&[c(2.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(Rep::new(p.clone(), alloc::vec![m]), Err(RepError::NotSpecialLinear { index: 0, .. })));
        assert!(matches!(Rep::new(p, alloc::vec![]), Err(RepError::WrongImageCount { expected: 1, got: 0 })));
    }

    #[test]
    fn samplers_satisfy_relations() {
        let mut rng = seeded_rng(4);
        let star = pres(FamilySpec::StarRaag { leaves: 2 });
        let z2 = pres(FamilySpec::Abelian { rank: 2 });
        for n in [2, 3] {
            let params = SamplerParams::with_dim(n);
            for case in FiberCase::ALL.into_iter().filter(|c| c.supported(n)) {
                for _ in 0..1000 {
                    let rep = sample_hom(&star, SamplerStyle::AngleFiber(case), &mut rng, &params).unwrap();
                    assert!(relation_residual(&rep).unwrap() < 1e-8);
                }
            }
            for _ in 0..1000 {
                let rep = sample_hom(&z2, SamplerStyle::AbelianDiagonal, &mut rng, &params).unwrap();
                assert!(relation_residual(&rep).unwrap() < 1e-8);
            }
            for finite in [FiniteGroup::Cyclic4, FiniteGroup::Quaternion8, FiniteGroup::BinaryDihedral12] {
                let p = pres(FamilySpec::DirectWithFinite { free_rank: 2, finite });
                for _ in 0..300 {
                    let rep = sample_hom(&p, SamplerStyle::FiniteByFree, &mut rng, &params).unwrap();
                    assert!(relation_residual(&rep).unwrap() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn finite_groups_have_expected_order() {
        for (f, n) in [(FiniteGroup::Cyclic4, 2), (FiniteGroup::Quaternion8, 3), (FiniteGroup::BinaryDihedral12, 2)] {
            let g = enumerate_group(&finite_images(f, n));
            assert_eq!(g.len(), f.order());
            assert!(g.iter().all(|x| x.unitarity_defect() < 1e-14));
        }
    }

    #[test]
    fn angle_fiber_structure() {
        let mut rng = seeded_rng(5);
        let star = pres(FamilySpec::StarRaag { leaves: 2 });
        let p2 = SamplerParams::with_dim(2);
        let rep = sample_hom(&star, SamplerStyle::AngleFiber(FiberCase::Central), &mut rng, &p2).unwrap();
        let b = rep.image(0);
        assert!(b.dist(&MatC::identity(2)) < 1e-15 || b.dist(&MatC::identity(2).scale(c(-1.0, 0.0))) < 1e-15);

        let rep = sample_hom(&star, SamplerStyle::AngleFiber(FiberCase::Regular), &mut rng, &p2).unwrap();
        assert!(rep.image(1).commutator(rep.image(2)).frobenius_norm() < 1e-8);

        let rep = sample_hom(&star, SamplerStyle::AngleFiber(FiberCase::Jordan), &mut rng, &p2).unwrap();
        assert!(!classify_element(rep.image(0), DEFAULT_TOL).unwrap().is_semisimple);

        // in B's eigenbasis the leaves are GL(2) ⊕ scalar
        let p3 = SamplerParams { conj_spread: 0.0, ..SamplerParams::with_dim(3) };
        let rep = sample_hom(&star, SamplerStyle::AngleFiber(FiberCase::RepeatedDiag), &mut rng, &p3).unwrap();
        let e = crate::matgroup::eig_decompose(rep.image(0)).unwrap();
        let v = e.vectors;
        let vi = v.inverse().unwrap();
        let single = (0..3).find(|&k| (0..3).filter(|&j| (e.values[j] - e.values[k]).norm() < 1e-8).count() == 1).unwrap();
        for a in &rep.images()[1..] {
            let a0 = vi * *a * v;
            for k in 0..3 {
                if k != single {
                    assert!(a0[(k, single)].norm() < 1e-8 && a0[(single, k)].norm() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn regular_fiber_is_normal_in_eigenbasis() {
        let mut rng = seeded_rng(6);
        let star = pres(FamilySpec::StarRaag { leaves: 2 });
        for _ in 0..1000 {
            let rep = sample_hom(&star, SamplerStyle::AngleFiber(FiberCase::Regular), &mut rng, &SamplerParams::with_dim(3))
                .unwrap();
            let v = crate::matgroup::eig_decompose(rep.image(0)).unwrap().vectors;
            let vi = v.normalize_det().unwrap().inverse().unwrap();
            let d = conjugate(&rep, &vi).unwrap();
            assert!(kn_residual(&d) < 1e-10 * norm_sq(&d).max(1.0));
        }
    }

    #[test]
    fn unsupported_styles() {
        let mut rng = seeded_rng(7);
        let z2 = pres(FamilySpec::Abelian { rank: 2 });
        let p = SamplerParams::default();
        assert!(matches!(sample_hom(&z2, SamplerStyle::Free, &mut rng, &p), Err(RepError::UnsupportedFamily { .. })));
        assert!(matches!(
            sample_hom(&z2, SamplerStyle::AngleFiber(FiberCase::Regular), &mut rng, &p),
            Err(RepError::UnsupportedFamily { .. })
        ));
        let star = pres(FamilySpec::StarRaag { leaves: 2 });
        assert!(matches!(
            sample_hom(&star, SamplerStyle::AngleFiber(FiberCase::RepeatedDiag), &mut rng, &p),
            Err(RepError::UnsupportedFamily { .. })
        ));
    }
}
