//! Symplectic matrices on `N` bosonic modes and the exact generators used
//! throughout the crate.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::{Complex64, RMatrix};

/// Residual allowed for matrices built from exact generators.
pub const EXACT_TOL: f64 = 1e-12;

const PHASE_TOL: f64 = 1e-12;

/// The symplectic form on `n_modes` modes: `n_modes` copies of `[[0, 1], [-1, 0]]`.
pub fn omega(n_modes: usize) -> RMatrix {
    let mut om = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for i in 0..n_modes {
        om[(2 * i, 2 * i + 1)] = 1.0;
        om[(2 * i + 1, 2 * i)] = -1.0;
    }
    om
}

/// `max |S Omega S^T - Omega|` for a square matrix of even size.
pub fn symplectic_residual(mat: &RMatrix) -> f64 {
    let om = omega(mat.nrows() / 2);
    (mat * &om * mat.transpose() - om).amax()
}

/// A real `2N x 2N` matrix preserving the symplectic form within a declared
/// tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    mat: RMatrix,
    tol: f64,
}

impl SymplecticMatrix {
    /// Validates `S Omega S^T = Omega` to within `tol`.
    pub fn new(mat: RMatrix, tol: f64) -> Result<Self> {
        check_even_square(&mat)?;
        let residual = symplectic_residual(&mat);
        if !(residual <= tol) {
            return Err(Error::NotSymplectic { residual, tol });
        }
        Ok(Self { mat, tol })
    }

    /// Wraps a matrix whose symplectic residual is known to be of order `tol`
    /// (e.g. a truncated perturbative transformation) without checking it.
    pub fn with_declared_tolerance(mat: RMatrix, tol: f64) -> Result<Self> {
        check_even_square(&mat)?;
        Ok(Self { mat, tol })
    }

    pub fn identity(n_modes: usize) -> Self {
        Self {
            mat: DMatrix::identity(2 * n_modes, 2 * n_modes),
            tol: EXACT_TOL,
        }
    }

    /// Single-mode squeezers `diag(e^{-r_n}, e^{r_n})` on each mode.
    pub fn squeezer(params: &[f64]) -> Result<Self> {
        if params.is_empty() || params.iter().any(|r| !r.is_finite()) {
            return Err(crate::error::invalid("squeezing parameters must be finite and nonempty"));
        }
        let mut mat = DMatrix::zeros(2 * params.len(), 2 * params.len());
        for (i, r) in params.iter().enumerate() {
            mat[(2 * i, 2 * i)] = (-r).exp();
            mat[(2 * i + 1, 2 * i + 1)] = r.exp();
        }
        Ok(Self { mat, tol: EXACT_TOL })
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> RMatrix {
        self.mat
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn n_modes(&self) -> usize {
        self.mat.nrows() / 2
    }

    pub fn residual(&self) -> f64 {
        symplectic_residual(&self.mat)
    }

    /// The 2x2 block coupling output mode position `i` to input position `j`.
    pub fn block(&self, i: usize, j: usize) -> nalgebra::Matrix2<f64> {
        self.mat.fixed_view::<2, 2>(2 * i, 2 * j).into_owned()
    }
}

fn check_even_square(mat: &RMatrix) -> Result<()> {
    if mat.nrows() != mat.ncols() {
        return Err(Error::DimensionMismatch {
            expected: mat.nrows(),
            found: mat.ncols(),
        });
    }
    if mat.nrows() == 0 || mat.nrows() % 2 != 0 {
        return Err(crate::error::invalid(format!(
            "symplectic matrices need a positive even dimension, got {}",
            mat.nrows()
        )));
    }
    Ok(())
}

/// Block-diagonal rotation with blocks `[[Re G, Im G], [-Im G, Re G]]`.
pub fn local_rotation(phases: &[Complex64]) -> Result<SymplecticMatrix> {
    if phases.is_empty() {
        return Err(crate::error::invalid("at least one phase is required"));
    }
    let mut mat = DMatrix::zeros(2 * phases.len(), 2 * phases.len());
    for (i, g) in phases.iter().enumerate() {
        check_unit(i, *g)?;
        mat[(2 * i, 2 * i)] = g.re;
        mat[(2 * i, 2 * i + 1)] = g.im;
        mat[(2 * i + 1, 2 * i)] = -g.im;
        mat[(2 * i + 1, 2 * i + 1)] = g.re;
    }
    Ok(SymplecticMatrix { mat, tol: EXACT_TOL })
}

pub(crate) fn check_unit(index: usize, g: Complex64) -> Result<()> {
    let modulus = g.norm();
    if !((modulus - 1.0).abs() <= PHASE_TOL) {
        return Err(Error::NonUnitPhase { index, modulus });
    }
    Ok(())
}

/// `outer * inner`: apply `inner` first.
pub fn compose(outer: &SymplecticMatrix, inner: &SymplecticMatrix) -> Result<SymplecticMatrix> {
    if outer.mat.nrows() != inner.mat.nrows() {
        return Err(Error::DimensionMismatch {
            expected: outer.mat.nrows(),
            found: inner.mat.nrows(),
        });
    }
    Ok(SymplecticMatrix {
        mat: &outer.mat * &inner.mat,
        tol: outer.tol + inner.tol,
    })
}

/// `S^{-1} = Omega S^T Omega^T`, exact whenever `S Omega S^T = Omega`.
pub fn symplectic_inverse(s: &SymplecticMatrix) -> SymplecticMatrix {
    let om = omega(s.n_modes());
    SymplecticMatrix {
        mat: &om * s.mat.transpose() * om.transpose(),
        tol: s.tol,
    }
}

/// Iteratively corrects `mat` towards the symplectic group with the Newton
/// step `S <- (1 + E Omega / 2) S`, `E = S Omega S^T - Omega`, until the
/// residual drops below `target`.
pub fn project_symplectic(mat: &RMatrix, target: f64, max_iter: usize) -> Result<SymplecticMatrix> {
    check_even_square(mat)?;
    let om = omega(mat.nrows() / 2);
    let mut s = mat.clone();
    let mut residual = f64::INFINITY;
    for _ in 0..=max_iter {
        let e = &s * &om * s.transpose() - &om;
        residual = e.amax();
        if residual <= target {
            return Ok(SymplecticMatrix { mat: s, tol: target });
        }
        if !residual.is_finite() {
            break;
        }
        let step = (e * &om) * &s * 0.5;
        s += step;
    }
    Err(Error::ProjectionDiverged {
        iterations: max_iter,
        residual,
    })
}
