//! Pair creation of opposite-momentum modes `(k, -k)` of a charged scalar
//! field in a conformally flat universe whose conformal factor follows a
//! `tanh` profile, `C(eta) = 1 + eps (1 + tanh(rho eta))`.
//!
//! The in and out frequencies are `w_in = sqrt(k^2 + m^2)` and
//! `w_out = sqrt(k^2 + m^2 (1 + 2 eps))`. With `w_pm = (w_out +- w_in)/2`:
//!
//! ```text
//! |alpha|^2 = sinh^2(pi w_+/rho) / (sinh(pi w_in/rho) sinh(pi w_out/rho))
//! |beta|^2  = sinh^2(pi w_-/rho) / (sinh(pi w_in/rho) sinh(pi w_out/rho))
//! ```
//!
//! Only magnitudes are modelled. In the two-mode states below, label 1 stands
//! for `k` and label 2 for `-k`.

use crate::error::{invalid, Result};
use crate::gaussian::{two_mode_squeezed_state, EntanglementReport, GaussianState};
use crate::symplectic::{SymplecticMatrix, EXACT_TOL};
use crate::RMatrix;

/// Above this argument `ln sinh x` is evaluated as `x + ln(1 - e^{-2x}) - ln 2`.
const LOG_DOMAIN_THRESHOLD: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrwConfig {
    pub epsilon: f64,
    pub rho: f64,
    pub mass: f64,
    pub k: f64,
}

impl FrwConfig {
    /// Requires `epsilon >= 0`, `rho > 0`, `mass >= 0` and `k > 0`.
    pub fn new(epsilon: f64, rho: f64, mass: f64, k: f64) -> Result<Self> {
        let finite = [epsilon, rho, mass, k].iter().all(|x| x.is_finite());
        if !finite {
            return Err(invalid("expansion parameters must be finite"));
        }
        if epsilon < 0.0 {
            return Err(invalid(format!("epsilon must be non-negative, got {epsilon}")));
        }
        if rho <= 0.0 {
            return Err(invalid(format!("rho must be positive, got {rho}")));
        }
        if mass < 0.0 {
            return Err(invalid(format!("mass must be non-negative, got {mass}")));
        }
        if k <= 0.0 {
            return Err(invalid(format!("k must be positive, got {k}")));
        }
        Ok(Self { epsilon, rho, mass, k })
    }

    pub fn omega_in(&self) -> f64 {
        self.k.hypot(self.mass)
    }

    pub fn omega_out(&self) -> f64 {
        (self.k * self.k + self.mass * self.mass * (1.0 + 2.0 * self.epsilon)).sqrt()
    }
}

fn ln_sinh(x: f64) -> f64 {
    if x > LOG_DOMAIN_THRESHOLD {
        x + (-(-2.0 * x).exp()).ln_1p() - std::f64::consts::LN_2
    } else {
        x.sinh().ln()
    }
}

/// `(|alpha_k|^2, |beta_k|^2)`.
pub fn frw_coefficients(cfg: &FrwConfig) -> (f64, f64) {
    let (w_in, w_out) = (cfg.omega_in(), cfg.omega_out());
    let scale = std::f64::consts::PI / cfg.rho;
    let denom = ln_sinh(scale * w_in) + ln_sinh(scale * w_out);
    let plus = 0.5 * (w_out + w_in);
    // the difference is formed without cancellation
    let minus = 0.5 * cfg.mass * cfg.mass * 2.0 * cfg.epsilon / (w_out + w_in);
    let alpha2 = (2.0 * ln_sinh(scale * plus) - denom).exp();
    let beta2 = if minus == 0.0 {
        0.0
    } else {
        (2.0 * ln_sinh(scale * minus) - denom).exp()
    };
    (alpha2, beta2)
}

/// Two-mode squeezed state with `sinh^2 r = |beta_k|^2` on labels `(1, 2)`.
pub fn frw_pair_state(cfg: &FrwConfig) -> Result<GaussianState> {
    let (_, beta2) = frw_coefficients(cfg);
    two_mode_squeezed_state(beta2.sqrt().asinh())
}

/// The two-mode squeezer `[[c 1, s Z], [s Z, c 1]]` (`c = cosh r`,
/// `s = sinh r`, `Z = diag(1, -1)`) that takes the vacuum to the pair state.
pub fn frw_pair_symplectic(cfg: &FrwConfig) -> Result<SymplecticMatrix> {
    let r = frw_coefficients(cfg).1.sqrt().asinh();
    let (c, s) = (r.cosh(), r.sinh());
    #[rustfmt::skip]
    let mat = RMatrix::from_row_slice(4, 4, &[
        c, 0.0, s, 0.0,
        0.0, c, 0.0, -s,
        s, 0.0, c, 0.0,
        0.0, -s, 0.0, c,
    ]);
    SymplecticMatrix::new(mat, EXACT_TOL * c * c)
}

/// `nu_- = (|alpha| - |beta|)^2`, evaluated as `1/(|alpha| + |beta|)^2`.
pub fn frw_negativity(cfg: &FrwConfig) -> EntanglementReport {
    let (alpha2, beta2) = frw_coefficients(cfg);
    let nu = (alpha2.sqrt() + beta2.sqrt()).powi(-2);
    EntanglementReport::from_nu_minus(nu, 1.0)
}
