//! Leading-order entanglement generation by small Bogoliubov transformations.
//!
//! The initial two-mode states considered here are pure and uncorrelated, so
//! both symplectic eigenvalues of their partial transpose equal 1. A small
//! correction `sigma^c` splits this degenerate pair; the splitting follows from
//! projecting `i Omega sigma^c` onto the `+1` eigenspace of `i Omega sigma`,
//! using left and right eigenvectors because `i Omega sigma` is not normal.

use nalgebra::{Matrix2, SVD};

use crate::bogoliubov::{from_symplectic, BogoCoeffs, OrderTag};
use crate::error::{invalid, Error, Result};
use crate::gaussian::{symplectic_eigenvalues, GaussianState};
use crate::symplectic::{omega, project_symplectic, EXACT_TOL};
use crate::{CMatrix, Complex64, PhaseVector, RMatrix};

/// Allowed distance of the unperturbed symplectic eigenvalues from 1.
pub const DEGENERACY_TOL: f64 = 1e-6;

/// Pure, uncorrelated two-mode base state plus a small symmetric correction.
#[derive(Debug, Clone)]
pub struct PerturbedTwoModeState {
    base: GaussianState,
    correction: RMatrix,
}

impl PerturbedTwoModeState {
    pub fn new(base: GaussianState, correction: RMatrix) -> Result<Self> {
        if base.n_modes() != 2 {
            return Err(Error::NotTwoMode(base.n_modes()));
        }
        if correction.nrows() != 4 || correction.ncols() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: correction.nrows().max(correction.ncols()),
            });
        }
        let asym = (&correction - correction.transpose()).amax();
        if asym > 1e-12 * correction.amax().max(1.0) {
            return Err(Error::NotSymmetric(asym));
        }
        let nu = base.symplectic_eigenvalues()?;
        let dev = nu.iter().fold(0.0f64, |m, v| m.max((v - 1.0).abs()));
        if dev > 1e-9 {
            return Err(invalid(format!(
                "base state must be pure (symplectic eigenvalues 1), deviation {dev:.3e}"
            )));
        }
        Ok(Self { base, correction })
    }

    pub fn base(&self) -> &GaussianState {
        &self.base
    }

    pub fn correction(&self) -> &RMatrix {
        &self.correction
    }
}

/// First-order splitting of the degenerate pair of partial-transpose
/// symplectic eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuCorrection {
    /// Eigenvalues of the projected 2x2 matrix, ascending.
    pub roots: [f64; 2],
    /// The root of largest modulus.
    pub nu_correction: f64,
}

impl NuCorrection {
    /// `1 + min(roots)`: the perturbed smallest symplectic eigenvalue.
    pub fn nu_minus(&self) -> f64 {
        1.0 + self.roots[0]
    }

    /// `1 - |nu_correction|`, which equals [`Self::nu_minus`] when the
    /// projection is traceless.
    pub fn entangling_branch(&self) -> f64 {
        1.0 - self.nu_correction.abs()
    }
}

fn flip_momentum(m: &RMatrix, row: usize) -> RMatrix {
    let mut out = m.clone();
    for j in 0..out.ncols() {
        out[(row, j)] = -out[(row, j)];
    }
    for i in 0..out.nrows() {
        out[(i, row)] = -out[(i, row)];
    }
    out
}

fn i_omega(m: &RMatrix) -> CMatrix {
    (omega(m.nrows() / 2) * m).map(|x| Complex64::new(0.0, x))
}

/// Two orthonormal vectors spanning the (approximate) null space of `m`,
/// with the largest singular value among the two used.
fn null_pair(m: CMatrix) -> Result<([nalgebra::DVector<Complex64>; 2], f64)> {
    let svd = SVD::try_new(m, true, true, 1e-15, 10_000).ok_or(Error::EigenFailure)?;
    let v_t = svd.v_t.as_ref().ok_or(Error::EigenFailure)?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let worst = svd.singular_values[order[1]];
    let vec = |i: usize| v_t.row(i).adjoint();
    Ok(([vec(order[0]), vec(order[1])], worst))
}

/// Degenerate perturbation theory for the smallest partial-transpose
/// symplectic eigenvalue of `base + correction`.
pub fn degenerate_nu_correction(p: &PerturbedTwoModeState, transposed_mode: usize) -> Result<NuCorrection> {
    let row = 2 * p.base.position_of(transposed_mode)? + 1;
    let base_pt = flip_momentum(p.base.cov(), row);
    let corr_pt = flip_momentum(&p.correction, row);

    let nu = symplectic_eigenvalues(&base_pt)?;
    let dev = nu.iter().fold(0.0f64, |m, v| m.max((v - 1.0).abs()));
    if dev > DEGENERACY_TOL {
        return Err(Error::DegeneracyNotFound(dev));
    }

    let a = i_omega(&base_pt);
    let shifted = &a - CMatrix::identity(4, 4);
    let scale = a.iter().fold(1.0f64, |m, z| m.max(z.norm()));
    let (right, sr) = null_pair(shifted.clone())?;
    let (left, sl) = null_pair(shifted.adjoint())?;
    if sr.max(sl) > DEGENERACY_TOL * scale {
        return Err(Error::DegeneracyNotFound(sr.max(sl) / scale));
    }

    // rows: left eigenvectors l^dag; columns: right eigenvectors
    let l = CMatrix::from_rows(&[left[0].adjoint(), left[1].adjoint()]);
    let r = CMatrix::from_columns(&right);
    let w = &l * &r;
    let w2 = Matrix2::new(w[(0, 0)], w[(0, 1)], w[(1, 0)], w[(1, 1)]);
    if w2.determinant().norm() < 1e-10 {
        return Err(Error::NotBiorthogonal);
    }
    let w_inv = w2.try_inverse().ok_or(Error::NotBiorthogonal)?;
    let w_inv = CMatrix::from_fn(2, 2, |i, j| w_inv[(i, j)]);
    let gamma = w_inv * l * i_omega(&corr_pt) * r;

    let half_tr = (gamma[(0, 0)] + gamma[(1, 1)]) * 0.5;
    let det = gamma[(0, 0)] * gamma[(1, 1)] - gamma[(0, 1)] * gamma[(1, 0)];
    let disc = (half_tr * half_tr - det).sqrt();
    let (z1, z2) = (half_tr - disc, half_tr + disc);
    let size = z1.norm().max(z2.norm()).max(1e-300);
    for z in [z1, z2] {
        if z.im.abs() > 1e-6 * size {
            return Err(Error::ComplexEigenvalue { re: z.re, im: z.im });
        }
    }
    let mut roots = [z1.re, z2.re];
    roots.sort_by(f64::total_cmp);
    let nu_correction = if roots[0].abs() >= roots[1].abs() { roots[0] } else { roots[1] };
    Ok(NuCorrection { roots, nu_correction })
}

/// Inputs of the leading-order negativity for symmetric single-mode squeezing
/// `s` of modes `k`, `k'`. `alpha1`, `beta1` are the first-order terms
/// `alpha^(1)_{kk'}`, `beta^(1)_{kk'}` including their factor of `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearCoefficientData {
    pub g_k: Complex64,
    pub g_k2: Complex64,
    pub alpha1: Complex64,
    pub beta1: Complex64,
    pub s: f64,
}

impl LinearCoefficientData {
    pub fn new(g_k: Complex64, g_k2: Complex64, alpha1: Complex64, beta1: Complex64, s: f64) -> Result<Self> {
        crate::symplectic::check_unit(0, g_k)?;
        crate::symplectic::check_unit(1, g_k2)?;
        if !s.is_finite() {
            return Err(invalid("squeezing must be finite"));
        }
        Ok(Self {
            g_k,
            g_k2,
            alpha1,
            beta1,
            s,
        })
    }

    /// Picks the `(k, k')` entries of a first-order coefficient set (per unit
    /// `h`) and the zeroth-order phases.
    pub fn from_series(phases: &PhaseVector, linear: &BogoCoeffs, h: f64, k: usize, k2: usize, s: f64) -> Result<Self> {
        let (i, j) = (linear.position_of(k)?, linear.position_of(k2)?);
        let g = phases.phases();
        if g.len() != linear.len() {
            return Err(Error::DimensionMismatch {
                expected: linear.len(),
                found: g.len(),
            });
        }
        let (a, b) = linear.entry(k, k2)?;
        Self::new(g[i], g[j], a * h, b * h, s)
    }

    pub fn with_squeezing(self, s: f64) -> Self {
        Self { s, ..self }
    }
}

/// `sqrt(Re(G* b)^2 + (Im(G* b) cosh s - Im(G* a) sinh s)^2)`.
pub fn leading_negativity(d: &LinearCoefficientData) -> f64 {
    let gb = d.g_k.conj() * d.beta1;
    let ga = d.g_k.conj() * d.alpha1;
    let im = gb.im * d.s.cosh() - ga.im * d.s.sinh();
    gb.re.hypot(im)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnhancementReport {
    /// `Im(G* alpha1) Im(G* beta1) <= 0`, under which squeezing never reduces
    /// the leading-order negativity.
    pub sign_condition: bool,
    /// `N(s) >= N(0)` at every grid point.
    pub enhanced: bool,
    /// `N` is non-decreasing along the (ascending) grid.
    pub monotone: bool,
    pub values: Vec<f64>,
}

pub fn enhancement_monotonicity_check(d: &LinearCoefficientData, s_grid: &[f64]) -> EnhancementReport {
    let ga = (d.g_k.conj() * d.alpha1).im;
    let gb = (d.g_k.conj() * d.beta1).im;
    let n0 = leading_negativity(&d.with_squeezing(0.0));
    let values: Vec<f64> = s_grid.iter().map(|&s| leading_negativity(&d.with_squeezing(s))).collect();
    let slack = |x: f64| 1e-14 * x.abs().max(f64::MIN_POSITIVE);
    EnhancementReport {
        sign_condition: ga * gb <= 0.0,
        enhanced: values.iter().all(|&v| v >= n0 - slack(n0)),
        monotone: values.windows(2).all(|w| w[1] >= w[0] - slack(w[0])),
        values,
    }
}

/// Restricts exact coefficients to the pair `(k, k')` (opposite parity) and
/// projects the resulting 4x4 matrix onto the symplectic group.
pub fn two_mode_truncation(c: &BogoCoeffs, k: usize, k2: usize) -> Result<BogoCoeffs> {
    if (k + k2) % 2 == 0 {
        return Err(Error::EvenParity(k, k2));
    }
    let h = match c.order() {
        OrderTag::Exact { h } => h,
        OrderTag::Series(_) => return Err(invalid("two-mode truncation needs exact coefficients")),
    };
    let (i, j) = (c.position_of(k)?, c.position_of(k2)?);
    let idx = [i, j];
    let alpha = CMatrix::from_fn(2, 2, |a, b| c.alpha()[(idx[a], idx[b])]);
    let beta = CMatrix::from_fn(2, 2, |a, b| c.beta()[(idx[a], idx[b])]);
    let candidate = crate::bogoliubov::block_matrix(&alpha, &beta);
    let projected = project_symplectic(&candidate, EXACT_TOL, 50)?;
    from_symplectic(&projected, vec![k, k2], h)
}

/// `|r| = asinh(sqrt(-det C_{kk'})) / 2` for a symmetric pure two-mode state.
/// `asym_tol` bounds `|det C_kk - det C_k'k'|`.
pub fn squeezing_parameter(state: &GaussianState, asym_tol: f64) -> Result<f64> {
    if state.n_modes() != 2 {
        return Err(Error::NotTwoMode(state.n_modes()));
    }
    let (d1, d2) = (state.block(0, 0).determinant(), state.block(1, 1).determinant());
    if (d1 - d2).abs() > asym_tol {
        return Err(Error::AsymmetricState(d1, d2));
    }
    let x = -state.block(0, 1).determinant();
    if x < -1e-12 {
        return Err(invalid(format!(
            "det of the correlation block is positive ({:.3e}); not a two-mode squeezed form",
            -x
        )));
    }
    Ok(0.5 * x.max(0.0).sqrt().asinh())
}

/// A sum truncated at `n_max` with an estimate of the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedSum {
    pub value: f64,
    pub tail: f64,
}

/// Accumulates a mode sum whose terms decay like `n^-5`.
#[derive(Default)]
struct DecayingSum {
    total: f64,
    last: Option<(usize, f64)>,
}

impl DecayingSum {
    fn add(&mut self, n: usize, term: f64) {
        self.total += term;
        if term != 0.0 {
            self.last = Some((n, term));
        }
    }

    /// Integral bound `|t_N| N^5 / (4 n_max^4)` from the last nonzero term.
    fn tail(&self, n_max: usize) -> f64 {
        match self.last {
            Some((n, t)) => t.abs() * (n as f64).powi(5) / (4.0 * (n_max as f64).powi(4)),
            None => 0.0,
        }
    }
}

struct PairSums {
    f_alpha: DecayingSum,
    f_beta: DecayingSum,
    cross: DecayingSum,
}

/// `f^alpha_{k,not k'} + f^alpha_{k',not k}`, the analogous `f^beta` sum and
/// `sum_{n != k,k'} Re(alpha_nk conj(beta_nk) + alpha_nk' conj(beta_nk'))`,
/// all with the first-order terms scaled by `h`.
fn pair_sums(c: &BogoCoeffs, h: f64, k: usize, k2: usize, n_max: usize) -> Result<PairSums> {
    if !matches!(c.order(), OrderTag::Series(1)) {
        return Err(invalid("expected first-order series coefficients"));
    }
    if n_max < k.max(k2) + 1 {
        return Err(invalid(format!(
            "n_max = {n_max} must exceed the larger mode label {}",
            k.max(k2)
        )));
    }
    let (ik, ik2) = (c.position_of(k)?, c.position_of(k2)?);
    let mut sums = PairSums {
        f_alpha: DecayingSum::default(),
        f_beta: DecayingSum::default(),
        cross: DecayingSum::default(),
    };
    let h2 = h * h;
    let mut seen = 0;
    for (pos, &n) in c.modes().iter().enumerate() {
        if n > n_max {
            continue;
        }
        seen += 1;
        let (a_nk, b_nk) = (c.alpha()[(pos, ik)], c.beta()[(pos, ik)]);
        let (a_nk2, b_nk2) = (c.alpha()[(pos, ik2)], c.beta()[(pos, ik2)]);
        let mut fa = 0.0;
        let mut fb = 0.0;
        if n != k2 {
            fa += 0.5 * a_nk.norm_sqr();
            fb += 0.5 * b_nk.norm_sqr();
        }
        if n != k {
            fa += 0.5 * a_nk2.norm_sqr();
            fb += 0.5 * b_nk2.norm_sqr();
        }
        sums.f_alpha.add(n, fa * h2);
        sums.f_beta.add(n, fb * h2);
        if n != k && n != k2 {
            sums.cross.add(n, (a_nk * b_nk.conj() + a_nk2 * b_nk2.conj()).re * h2);
        }
    }
    if seen < n_max {
        return Err(invalid(format!(
            "coefficients cover {seen} modes up to n_max = {n_max}; all of 1..=n_max are required"
        )));
    }
    Ok(sums)
}

/// Determinant of the transformed two-mode state for symmetric initial
/// squeezing `s`, to second order in `h`.
pub fn mixedness_determinant(c: &BogoCoeffs, h: f64, k: usize, k2: usize, s: f64, n_max: usize) -> Result<TruncatedSum> {
    let sums = pair_sums(c, h, k, k2, n_max)?;
    let (wb, wa, wc) = (4.0 * (s.cosh() + 1.0), 4.0 * (s.cosh() - 1.0), -4.0 * s.sinh());
    Ok(TruncatedSum {
        value: 1.0 + wb * sums.f_beta.total + wa * sums.f_alpha.total + wc * sums.cross.total,
        tail: wb * sums.f_beta.tail(n_max) + wa * sums.f_alpha.tail(n_max) + wc.abs() * sums.cross.tail(n_max),
    })
}

/// `F_{k,k'} = f^alpha_{k,not k'} + f^alpha_{k',not k}`.
pub fn validity_f(c: &BogoCoeffs, h: f64, k: usize, k2: usize, n_max: usize) -> Result<TruncatedSum> {
    let sums = pair_sums(c, h, k, k2, n_max)?;
    Ok(TruncatedSum {
        value: sums.f_alpha.total,
        tail: sums.f_alpha.tail(n_max),
    })
}
