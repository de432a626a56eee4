//! Gaussian states in phase space: construction, symplectic evolution,
//! reduction, partial transposition and the negativity of two-mode states.

use nalgebra::{DMatrix, DVector, Schur};

use crate::error::{invalid, Error, Result};
use crate::symplectic::{omega, SymplecticMatrix};
use crate::{Complex64, RMatrix};

pub use crate::symplectic::local_rotation;

/// Relative symmetry tolerance for covariance matrices.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Lower bound on symplectic eigenvalues of a physical state is `1 - PHYSICAL_TOL`.
pub const PHYSICAL_TOL: f64 = 1e-9;
/// Threshold for discarding imaginary parts and matching `+/-` eigenvalue pairs.
pub const PAIRING_TOL: f64 = 1e-9;

/// Covariance matrix (vacuum = identity) and first moments over an ordered
/// list of mode labels. Mode at position `i` occupies rows `2i` (position
/// quadrature) and `2i + 1` (momentum quadrature).
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    modes: Vec<usize>,
    cov: RMatrix,
    first_moments: DVector<f64>,
}

impl GaussianState {
    /// Builds a state, checking labels, symmetry and physicality.
    pub fn new(modes: Vec<usize>, cov: RMatrix) -> Result<Self> {
        let state = Self::from_parts(modes, cov)?;
        let nu = symplectic_eigenvalues(&state.cov)?;
        if nu[0] < 1.0 - PHYSICAL_TOL {
            return Err(Error::Unphysical(nu[0]));
        }
        Ok(state)
    }

    /// Like [`GaussianState::new`] but skips the physicality check. Used for
    /// states produced by truncated transformations whose symplectic
    /// residual is only controlled to a declared order.
    pub fn from_parts(modes: Vec<usize>, cov: RMatrix) -> Result<Self> {
        check_labels(&modes)?;
        let dim = 2 * modes.len();
        if cov.nrows() != dim || cov.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: cov.nrows().max(cov.ncols()),
            });
        }
        check_symmetric(&cov)?;
        Ok(Self {
            modes,
            cov,
            first_moments: DVector::zeros(dim),
        })
    }

    pub fn with_first_moments(mut self, first_moments: DVector<f64>) -> Result<Self> {
        if first_moments.len() != self.cov.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.cov.nrows(),
                found: first_moments.len(),
            });
        }
        self.first_moments = first_moments;
        Ok(self)
    }

    pub fn modes(&self) -> &[usize] {
        &self.modes
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn cov(&self) -> &RMatrix {
        &self.cov
    }

    pub fn first_moments(&self) -> &DVector<f64> {
        &self.first_moments
    }

    pub fn det(&self) -> f64 {
        self.cov.determinant()
    }

    pub fn position_of(&self, label: usize) -> Result<usize> {
        self.modes
            .iter()
            .position(|&m| m == label)
            .ok_or(Error::UnknownMode(label))
    }

    /// The 2x2 block between the modes at positions `i` and `j`.
    pub fn block(&self, i: usize, j: usize) -> nalgebra::Matrix2<f64> {
        self.cov.fixed_view::<2, 2>(2 * i, 2 * j).into_owned()
    }

    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        symplectic_eigenvalues(&self.cov)
    }
}

fn check_labels(modes: &[usize]) -> Result<()> {
    if modes.is_empty() {
        return Err(invalid("a state needs at least one mode"));
    }
    for (i, &m) in modes.iter().enumerate() {
        if m == 0 {
            return Err(invalid("mode labels are positive integers"));
        }
        if modes[..i].contains(&m) {
            return Err(invalid(format!("duplicate mode label {m}")));
        }
    }
    Ok(())
}

fn check_symmetric(m: &RMatrix) -> Result<()> {
    let asym = (m - m.transpose()).amax();
    if asym > SYMMETRY_TOL * m.amax().max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }
    Ok(())
}

/// Vacuum on modes `1..=n_modes`.
pub fn vacuum_state(n_modes: usize) -> Result<GaussianState> {
    if n_modes == 0 {
        return Err(invalid("n_modes must be at least 1"));
    }
    GaussianState::from_parts((1..=n_modes).collect(), DMatrix::identity(2 * n_modes, 2 * n_modes))
}

/// Uncorrelated state with blocks `diag(e^{s_n}, e^{-s_n})` on modes `1..=N`.
pub fn single_mode_squeezed_state(squeezings: &[f64]) -> Result<GaussianState> {
    if squeezings.iter().any(|s| !s.is_finite()) {
        return Err(invalid("squeezing parameters must be finite"));
    }
    let n = squeezings.len();
    let mut cov = DMatrix::zeros(2 * n, 2 * n);
    for (i, s) in squeezings.iter().enumerate() {
        cov[(2 * i, 2 * i)] = s.exp();
        cov[(2 * i + 1, 2 * i + 1)] = (-s).exp();
    }
    GaussianState::from_parts((1..=n).collect(), cov)
}

/// Two-mode squeezed vacuum on modes `(1, 2)`:
/// `[[c 1, s Z], [s Z, c 1]]` with `c = cosh 2r`, `s = sinh 2r`, `Z = diag(1, -1)`.
pub fn two_mode_squeezed_state(r: f64) -> Result<GaussianState> {
    if !r.is_finite() {
        return Err(invalid("squeezing parameter must be finite"));
    }
    let (c, s) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    #[rustfmt::skip]
    let cov = DMatrix::from_row_slice(4, 4, &[
        c, 0.0, s, 0.0,
        0.0, c, 0.0, -s,
        s, 0.0, c, 0.0,
        0.0, -s, 0.0, c,
    ]);
    GaussianState::from_parts(vec![1, 2], cov)
}

/// `cov <- S cov S^T`, `d <- S d`.
pub fn apply_symplectic(s: &SymplecticMatrix, state: &GaussianState) -> Result<GaussianState> {
    let sm = s.matrix();
    if sm.nrows() != state.cov.nrows() {
        return Err(Error::DimensionMismatch {
            expected: state.cov.nrows(),
            found: sm.nrows(),
        });
    }
    let mut cov = sm * &state.cov * sm.transpose();
    // restore exact symmetry lost to rounding
    cov = (&cov + cov.transpose()) * 0.5;
    Ok(GaussianState {
        modes: state.modes.clone(),
        cov,
        first_moments: sm * &state.first_moments,
    })
}

/// Keeps the rows and columns of the listed modes, in the state's order.
pub fn partial_trace(state: &GaussianState, keep: &[usize]) -> Result<GaussianState> {
    if keep.is_empty() {
        return Err(invalid("keep-set must be nonempty"));
    }
    for &k in keep {
        state.position_of(k)?;
    }
    let kept: Vec<usize> = (0..state.n_modes())
        .filter(|&i| keep.contains(&state.modes[i]))
        .collect();
    let idx: Vec<usize> = kept.iter().flat_map(|&i| [2 * i, 2 * i + 1]).collect();
    let cov = state.cov.select_rows(&idx).select_columns(&idx);
    let first_moments = state.first_moments.select_rows(&idx);
    Ok(GaussianState {
        modes: kept.iter().map(|&i| state.modes[i]).collect(),
        cov,
        first_moments,
    })
}

/// `T cov T` for a two-mode state, where `T` flips the momentum quadrature of
/// `transposed_mode`.
pub fn partial_transpose(state: &GaussianState, transposed_mode: usize) -> Result<RMatrix> {
    if state.n_modes() != 2 {
        return Err(Error::NotTwoMode(state.n_modes()));
    }
    let row = 2 * state.position_of(transposed_mode)? + 1;
    let mut out = state.cov.clone();
    for j in 0..4 {
        out[(row, j)] = -out[(row, j)];
    }
    for i in 0..4 {
        out[(i, row)] = -out[(i, row)];
    }
    Ok(out)
}

/// Symplectic eigenvalues of a real symmetric `2N x 2N` matrix, ascending.
///
/// The eigenvalues of `i Omega m` are computed with a general complex Schur
/// decomposition; they must be real and come in `+/-` pairs.
pub fn symplectic_eigenvalues(m: &RMatrix) -> Result<Vec<f64>> {
    if m.nrows() != m.ncols() || m.nrows() % 2 != 0 || m.nrows() == 0 {
        return Err(invalid(format!(
            "expected a square matrix of positive even size, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    check_symmetric(m)?;
    let n = m.nrows() / 2;
    let a: DMatrix<Complex64> = (omega(n) * m).map(|x| Complex64::new(0.0, x));
    let eig = Schur::try_new(a, 1e-15 * m.amax().max(1.0), 10_000)
        .and_then(|schur| schur.eigenvalues())
        .ok_or(Error::EigenFailure)?;
    let mut real = Vec::with_capacity(2 * n);
    for z in eig.iter() {
        if z.im.abs() > PAIRING_TOL * z.re.abs().max(1.0) {
            return Err(Error::ComplexEigenvalue { re: z.re, im: z.im });
        }
        real.push(z.re);
    }
    real.sort_by(f64::total_cmp);
    let mut nu = Vec::with_capacity(n);
    for i in 0..n {
        let (lo, hi) = (real[i], real[2 * n - 1 - i]);
        let mismatch = (lo + hi).abs();
        if mismatch > PAIRING_TOL * hi.abs().max(1.0) {
            return Err(Error::Unpaired(mismatch));
        }
        nu.push(0.5 * (hi - lo));
    }
    nu.reverse();
    Ok(nu)
}

/// Entanglement figures of a two-mode Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementReport {
    /// Smallest symplectic eigenvalue of the partially transposed covariance matrix.
    pub nu_minus: f64,
    pub negativity: f64,
    pub log_negativity: f64,
    pub det_cov: f64,
}

impl EntanglementReport {
    pub fn from_nu_minus(nu_minus: f64, det_cov: f64) -> Self {
        Self {
            nu_minus,
            negativity: negativity_from_nu(nu_minus),
            log_negativity: if nu_minus >= 1.0 - SEPARABLE_TOL {
                0.0
            } else {
                -nu_minus.ln()
            },
            det_cov,
        }
    }
}

/// Eigenvalues this close below 1 count as separable.
pub const SEPARABLE_TOL: f64 = 1e-12;

/// `max{0, (1 - nu) / (2 nu)}`, zero whenever `nu >= 1 - SEPARABLE_TOL`.
pub fn negativity_from_nu(nu_minus: f64) -> f64 {
    if nu_minus >= 1.0 - SEPARABLE_TOL {
        return 0.0;
    }
    (1.0 - nu_minus) / (2.0 * nu_minus)
}

/// Negativity of a two-mode state, transposing the second listed mode.
pub fn negativity(state: &GaussianState) -> Result<EntanglementReport> {
    if state.n_modes() != 2 {
        return Err(Error::NotTwoMode(state.n_modes()));
    }
    let pt = partial_transpose(state, state.modes[1])?;
    let nu = symplectic_eigenvalues(&pt)?;
    Ok(EntanglementReport::from_nu_minus(nu[0], state.det()))
}
