//! Bogoliubov coefficient matrices and their phase-space representation.
//!
//! With the convention `a~_m = sum_n (conj(alpha_mn) a_n - conj(beta_mn) a_n^dag)`
//! the transformation acts on quadratures through a symplectic matrix made of
//! 2x2 blocks
//!
//! ```text
//! M_mn = [[ Re(alpha - beta),  Im(alpha + beta)],
//!         [-Im(alpha - beta),  Re(alpha + beta)]]
//! ```
//!
//! and unitarity of the field transformation is equivalent to
//! `alpha alpha^dag - beta beta^dag = 1` together with `alpha beta^T`
//! being symmetric.

mod io;
mod series;

use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};
use crate::symplectic::{check_unit, SymplecticMatrix};
use crate::{CMatrix, Complex64, RMatrix};

pub use crate::symplectic::{compose, symplectic_inverse};
pub use io::{read_coeffs, write_coeffs, parse_coeffs, format_coeffs};
pub use series::{series_eval, SeriesTerm, DEFAULT_H_PROBE};

/// Identity residual declared by analytically exact providers.
pub const EXACT_RESIDUAL: f64 = 1e-10;

/// Whether a coefficient set is a full transformation or one term of its
/// Maclaurin series in `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrderTag {
    /// Complete transformation evaluated at `h`.
    Exact { h: f64 },
    /// Coefficient of `h^k` in the expansion (per unit `h^k`).
    Series(u32),
}

/// `alpha` and `beta` over an ordered list of mode labels.
#[derive(Debug, Clone, PartialEq)]
pub struct BogoCoeffs {
    modes: Vec<usize>,
    alpha: CMatrix,
    beta: CMatrix,
    order: OrderTag,
    residual_bound: f64,
}

impl BogoCoeffs {
    /// `residual_bound` is the identity residual the provider guarantees
    /// (`EXACT_RESIDUAL` for exact transformations, `C h^2` for truncated ones).
    pub fn new(
        modes: Vec<usize>,
        alpha: CMatrix,
        beta: CMatrix,
        order: OrderTag,
        residual_bound: f64,
    ) -> Result<Self> {
        let m = modes.len();
        if m == 0 {
            return Err(invalid("coefficients need at least one mode"));
        }
        for mat in [&alpha, &beta] {
            if mat.nrows() != mat.ncols() {
                return Err(invalid(format!(
                    "coefficient matrix must be square, got {}x{}",
                    mat.nrows(),
                    mat.ncols()
                )));
            }
            if mat.nrows() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: mat.nrows(),
                });
            }
        }
        if modes.iter().any(|&l| l == 0) {
            return Err(invalid("mode labels are positive integers"));
        }
        if !(residual_bound >= 0.0) {
            return Err(invalid("residual bound must be non-negative"));
        }
        Ok(Self {
            modes,
            alpha,
            beta,
            order,
            residual_bound,
        })
    }

    /// Identity transformation (`alpha = 1`, `beta = 0`) on `modes`.
    pub fn identity(modes: Vec<usize>) -> Result<Self> {
        let m = modes.len();
        Self::new(
            modes,
            DMatrix::identity(m, m),
            DMatrix::zeros(m, m),
            OrderTag::Exact { h: 0.0 },
            EXACT_RESIDUAL,
        )
    }

    pub fn modes(&self) -> &[usize] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn alpha(&self) -> &CMatrix {
        &self.alpha
    }

    pub fn beta(&self) -> &CMatrix {
        &self.beta
    }

    pub fn order(&self) -> OrderTag {
        self.order
    }

    pub fn residual_bound(&self) -> f64 {
        self.residual_bound
    }

    pub fn position_of(&self, label: usize) -> Result<usize> {
        self.modes
            .iter()
            .position(|&m| m == label)
            .ok_or(Error::UnknownMode(label))
    }

    /// `(alpha_{mn}, beta_{mn})` by mode label.
    pub fn entry(&self, m: usize, n: usize) -> Result<(Complex64, Complex64)> {
        let (i, j) = (self.position_of(m)?, self.position_of(n)?);
        Ok((self.alpha[(i, j)], self.beta[(i, j)]))
    }

    /// Restriction to the listed modes, keeping this set's order.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        for &k in keep {
            self.position_of(k)?;
        }
        let idx: Vec<usize> = (0..self.len()).filter(|&i| keep.contains(&self.modes[i])).collect();
        Self::new(
            idx.iter().map(|&i| self.modes[i]).collect(),
            self.alpha.select_rows(&idx).select_columns(&idx),
            self.beta.select_rows(&idx).select_columns(&idx),
            self.order,
            self.residual_bound,
        )
    }
}

/// Unit-modulus phase per mode.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector {
    phases: Vec<Complex64>,
}

impl PhaseVector {
    pub fn new(phases: Vec<Complex64>) -> Result<Self> {
        for (i, g) in phases.iter().enumerate() {
            check_unit(i, *g)?;
        }
        Ok(Self { phases })
    }

    /// `G_n = exp(i theta_n)`.
    pub fn from_angles(angles: impl IntoIterator<Item = f64>) -> Self {
        Self {
            phases: angles.into_iter().map(|t| Complex64::from_polar(1.0, t)).collect(),
        }
    }

    pub fn phases(&self) -> &[Complex64] {
        &self.phases
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }
}

/// Residuals of the two Bogoliubov identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport {
    /// `max |alpha alpha^dag - beta beta^dag - 1|`
    pub unitarity: f64,
    /// `max |alpha beta^T - (alpha beta^T)^T|`
    pub symmetry: f64,
    pub tol: f64,
    pub passed: bool,
}

pub fn verify_identities(c: &BogoCoeffs, tol: f64) -> IdentityReport {
    let m = c.len();
    let unit = &c.alpha * c.alpha.adjoint() - &c.beta * c.beta.adjoint() - CMatrix::identity(m, m);
    let ab = &c.alpha * c.beta.transpose();
    let sym = &ab - ab.transpose();
    let max_abs = |x: &CMatrix| x.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
    let (unitarity, symmetry) = (max_abs(&unit), max_abs(&sym));
    IdentityReport {
        unitarity,
        symmetry,
        tol,
        passed: unitarity <= tol && symmetry <= tol,
    }
}

/// Real-linear map from `(alpha, beta)` to the `2M x 2M` block matrix.
pub fn block_matrix(alpha: &CMatrix, beta: &CMatrix) -> RMatrix {
    let m = alpha.nrows();
    let mut s = DMatrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        for j in 0..m {
            let (a, b) = (alpha[(i, j)], beta[(i, j)]);
            s[(2 * i, 2 * j)] = (a - b).re;
            s[(2 * i, 2 * j + 1)] = (a + b).im;
            s[(2 * i + 1, 2 * j)] = -(a - b).im;
            s[(2 * i + 1, 2 * j + 1)] = (a + b).re;
        }
    }
    s
}

/// Inverse of [`block_matrix`]: recovers `(alpha, beta)` from any real
/// `2M x 2M` matrix.
pub fn split_block_matrix(s: &RMatrix) -> (CMatrix, CMatrix) {
    let m = s.nrows() / 2;
    let mut alpha = CMatrix::zeros(m, m);
    let mut beta = CMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let (p, q) = (s[(2 * i, 2 * j)], s[(2 * i, 2 * j + 1)]);
            let (r, t) = (s[(2 * i + 1, 2 * j)], s[(2 * i + 1, 2 * j + 1)]);
            alpha[(i, j)] = Complex64::new(0.5 * (p + t), 0.5 * (q - r));
            beta[(i, j)] = Complex64::new(0.5 * (t - p), 0.5 * (q + r));
        }
    }
    (alpha, beta)
}

/// Lifts coefficients to phase space. The symplectic tolerance is the
/// provider's declared identity residual (never below the exact class).
pub fn to_symplectic(c: &BogoCoeffs) -> SymplecticMatrix {
    let tol = if c.residual_bound <= EXACT_RESIDUAL {
        crate::symplectic::EXACT_TOL
    } else {
        2.0 * c.residual_bound
    };
    SymplecticMatrix::with_declared_tolerance(block_matrix(&c.alpha, &c.beta), tol)
        .expect("block matrix of a nonempty coefficient set is even and square")
}

/// Coefficients of a symplectic matrix over `modes`.
pub fn from_symplectic(s: &SymplecticMatrix, modes: Vec<usize>, h: f64) -> Result<BogoCoeffs> {
    let (alpha, beta) = split_block_matrix(s.matrix());
    let bound = if s.tolerance() <= crate::symplectic::EXACT_TOL {
        EXACT_RESIDUAL
    } else {
        s.tolerance()
    };
    BogoCoeffs::new(modes, alpha, beta, OrderTag::Exact { h }, bound)
}

/// Free evolution `alpha = diag(G)`, `beta = 0` on modes `1..=len`.
pub fn phase_transform(p: &PhaseVector) -> Result<BogoCoeffs> {
    let m = p.len();
    if m == 0 {
        return Err(invalid("phase vector is empty"));
    }
    let alpha = CMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&p.phases));
    BogoCoeffs::new(
        (1..=m).collect(),
        alpha,
        DMatrix::zeros(m, m),
        OrderTag::Exact { h: 0.0 },
        EXACT_RESIDUAL,
    )
}
