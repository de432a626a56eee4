use crate::error::{invalid, Error, Result};
use crate::{CMatrix, Complex64};

use super::{BogoCoeffs, OrderTag};

pub const DEFAULT_H_PROBE: f64 = 1e-3;

/// Maclaurin coefficient of `h^order` with its estimated truncation error
/// (max-norm over both matrices).
#[derive(Debug, Clone)]
pub struct SeriesTerm {
    pub order: u32,
    pub coeffs: BogoCoeffs,
    pub error: f64,
}

/// Estimates Maclaurin coefficients (orders 0, 1, 2) of an `h`-dependent
/// transformation.
///
/// Order 0 is the provider at `h = 0`. Orders 1 and 2 use central differences
/// at steps `h_probe`, `h_probe/2`, `h_probe/4`, combined by two levels of
/// Richardson extrapolation; the error estimate is the difference between the
/// last two extrapolants. A term whose estimate exceeds `1e-6` of the leading
/// scale (the larger of the term and the zeroth-order coefficients) is
/// rejected.
pub fn series_eval<F>(provider: F, orders: &[u32], h_probe: f64) -> Result<Vec<SeriesTerm>>
where
    F: Fn(f64) -> Result<BogoCoeffs>,
{
    if !(h_probe > 0.0 && h_probe.is_finite()) {
        return Err(invalid("h_probe must be positive"));
    }
    if let Some(o) = orders.iter().find(|&&o| o > 2) {
        return Err(invalid(format!("series order {o} is not supported (max 2)")));
    }
    let f0 = provider(0.0)?;
    let needs_steps = orders.iter().any(|&o| o > 0);
    let steps = [h_probe, h_probe / 2.0, h_probe / 4.0];
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    if needs_steps {
        for &h in &steps {
            let (p, m) = (provider(h)?, provider(-h)?);
            if p.modes() != f0.modes() || m.modes() != f0.modes() {
                return Err(invalid("provider changed its mode set across h"));
            }
            plus.push(p);
            minus.push(m);
        }
    }

    let scale0 = max_norm(f0.alpha()).max(max_norm(f0.beta()));
    let mut out = Vec::with_capacity(orders.len());
    for &order in orders {
        let term = match order {
            0 => SeriesTerm {
                order,
                coeffs: BogoCoeffs::new(
                    f0.modes().to_vec(),
                    f0.alpha().clone(),
                    f0.beta().clone(),
                    OrderTag::Series(0),
                    f0.residual_bound(),
                )?,
                error: 0.0,
            },
            _ => {
                let pick = |c: &BogoCoeffs, which: bool| if which { c.alpha().clone() } else { c.beta().clone() };
                let mut mats = Vec::with_capacity(2);
                let mut error = 0.0f64;
                for which in [true, false] {
                    let diffs: Vec<CMatrix> = (0..3)
                        .map(|i| {
                            let (p, m) = (pick(&plus[i], which), pick(&minus[i], which));
                            let h = steps[i];
                            if order == 1 {
                                (p - m) * re(0.5 / h)
                            } else {
                                (p + m - pick(&f0, which) * re(2.0)) * re(0.5 / (h * h))
                            }
                        })
                        .collect();
                    // error terms are even in h: h^2, h^4, ...
                    let r1 = (&diffs[1] * re(4.0) - &diffs[0]) * re(1.0 / 3.0);
                    let r2 = (&diffs[2] * re(4.0) - &diffs[1]) * re(1.0 / 3.0);
                    let best = (&r2 * re(16.0) - &r1) * re(1.0 / 15.0);
                    error = error.max(max_norm(&(&r2 - &r1)) / 15.0);
                    mats.push(best);
                }
                let beta = mats.pop().expect("two matrices");
                let alpha = mats.pop().expect("two matrices");
                let scale = max_norm(&alpha).max(max_norm(&beta)).max(scale0);
                if error > 1e-6 * scale {
                    return Err(Error::SeriesNotConverged { order, error, scale });
                }
                SeriesTerm {
                    order,
                    coeffs: BogoCoeffs::new(f0.modes().to_vec(), alpha, beta, OrderTag::Series(order), error)?,
                    error,
                }
            }
        };
        out.push(term);
    }
    Ok(out)
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn max_norm(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}
