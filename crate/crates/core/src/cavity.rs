//! Massless scalar field in a rigid Dirichlet cavity of width `delta` in 1+1
//! dimensions, moving along inertial and uniformly accelerated segments.
//!
//! `h` is the width times the proper acceleration at the cavity centre. During
//! acceleration the walls sit at the Rindler positions
//! `a = delta/h - delta/2`, `b = delta/h + delta/2`.
//!
//! Junction integrals are evaluated in the coordinate `xi = (x - a)/delta`
//! on `[0, 1]`, where they only depend on `h`. With `c = h/(1 - h/2)`,
//! `L = ln(1 + c)` and `y(xi) = ln(1 + c xi)/L`:
//!
//! ```text
//! I1 = int sin(m pi y) sin(n pi xi) n dxi
//! I2 = int sin(m pi y) sin(n pi xi) m / q(xi) dxi,   q = (L/h)(1 - h/2 + h xi)
//! alpha_mn = (I1 + I2)/sqrt(mn),  beta_mn = (I1 - I2)/sqrt(mn)
//! ```
//!
//! Rows of the junction coefficients are Rindler modes, columns Minkowski
//! modes.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;

use crate::bogoliubov::{block_matrix, split_block_matrix, to_symplectic, BogoCoeffs, OrderTag, PhaseVector};
use crate::error::{invalid, Error, Result};
use crate::gaussian::{negativity, EntanglementReport, GaussianState};
use crate::perturbation::{leading_negativity, mixedness_determinant, validity_f, LinearCoefficientData};
use crate::quadrature::integrate;
use crate::symplectic::{local_rotation, project_symplectic, symplectic_inverse, SymplecticMatrix, EXACT_TOL};
use crate::{CMatrix, Complex64, RMatrix};

/// Identity residual of the truncated junction per unit `h^2` and per unit
/// `M^2`, calibrated at `h = 1e-2`, `M = 30` with a safety factor.
pub const JUNCTION_RESIDUAL_C: f64 = 0.05;

/// Allowed change of the negativity when the cutoff is doubled.
pub const CUTOFF_SHIFT_TOL: f64 = 1e-10;

const PROJECTION_ITERATIONS: usize = 50;
const MAX_PANELS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityConfig {
    pub delta: f64,
    pub h: f64,
    pub cutoff: usize,
}

impl CavityConfig {
    /// Requires `delta > 0`, `0 < h < 2` and `cutoff >= 2`.
    pub fn new(delta: f64, h: f64, cutoff: usize) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(invalid(format!("cavity width must be positive, got {delta}")));
        }
        if !(h > 0.0 && h < 2.0) {
            return Err(invalid(format!("h must lie in (0, 2), got {h}")));
        }
        if cutoff < 2 {
            return Err(invalid(format!("cutoff must be at least 2, got {cutoff}")));
        }
        Ok(Self { delta, h, cutoff })
    }

    pub fn with_cutoff(self, cutoff: usize) -> Result<Self> {
        Self::new(self.delta, self.h, cutoff)
    }

    /// Wall positions `(a, b)` during acceleration.
    pub fn walls(&self) -> (f64, f64) {
        let centre = self.delta / self.h;
        (centre - 0.5 * self.delta, centre + 0.5 * self.delta)
    }

    fn check_inside(&self, x: f64) -> Result<(f64, f64)> {
        let (a, b) = self.walls();
        if !(x >= a && x <= b) {
            return Err(invalid(format!("x = {x} lies outside the walls [{a}, {b}]")));
        }
        Ok((a, b))
    }
}

/// A mode function on the `t = 0` slice and the factor its time derivative
/// carries there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeValue {
    pub value: f64,
    pub frequency: f64,
}

/// `(n pi)^{-1/2} sin(n pi (x - a)/delta)` with frequency `n pi/delta`.
pub fn minkowski_mode(n: usize, x: f64, cfg: &CavityConfig) -> Result<ModeValue> {
    check_mode(n)?;
    let (a, _) = cfg.check_inside(x)?;
    let k = n as f64 * PI;
    Ok(ModeValue {
        value: (k * (x - a) / cfg.delta).sin() / k.sqrt(),
        frequency: k / cfg.delta,
    })
}

/// `(m pi)^{-1/2} sin(m pi ln(x/a)/ln(b/a))`; the time derivative carries the
/// Rindler frequency `m pi/ln(b/a)` divided by `x`.
pub fn rindler_mode(m: usize, x: f64, cfg: &CavityConfig) -> Result<ModeValue> {
    check_mode(m)?;
    let (a, b) = cfg.check_inside(x)?;
    let k = m as f64 * PI;
    let l = (b / a).ln();
    Ok(ModeValue {
        value: (k * (x / a).ln() / l).sin() / k.sqrt(),
        frequency: k / l / x,
    })
}

fn check_mode(n: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid("mode numbers start at 1"));
    }
    Ok(())
}

/// Junction coefficients for the configured `h` and cutoff.
pub fn junction_coefficients(cfg: &CavityConfig) -> Result<BogoCoeffs> {
    junction_coefficients_at(cfg.h, cfg.cutoff)
}

/// Junction coefficients on modes `1..=cutoff` for any `-2 < h < 2`. Negative
/// `h` accelerates towards decreasing `x`; `h = 0` is the identity.
pub fn junction_coefficients_at(h: f64, cutoff: usize) -> Result<BogoCoeffs> {
    if !(h > -2.0 && h < 2.0) {
        return Err(invalid(format!("h must lie in (-2, 2), got {h}")));
    }
    if cutoff == 0 {
        return Err(invalid("cutoff must be positive"));
    }
    let modes: Vec<usize> = (1..=cutoff).collect();
    if h == 0.0 {
        return BogoCoeffs::identity(modes);
    }
    let c = h / (1.0 - 0.5 * h);
    let l = c.ln_1p();
    let l_over_h = l / h;

    let rows: Vec<Vec<(Complex64, Complex64)>> = (1..=cutoff)
        .into_par_iter()
        .map(|m| {
            (1..=cutoff)
                .map(|n| {
                    let (mf, nf) = (m as f64, n as f64);
                    let f = |xi: f64| {
                        let y = (c * xi).ln_1p() / l;
                        let q = l_over_h * (1.0 - 0.5 * h + h * xi);
                        let p = (mf * PI * y).sin() * (nf * PI * xi).sin();
                        [p * nf, p * mf / q]
                    };
                    let norm = (mf * nf).sqrt();
                    let panels = (m + n).div_ceil(2) + 2;
                    let r = integrate(f, 0.0, 1.0, panels, 1e-12 * norm, MAX_PANELS)?;
                    let [i1, i2] = r.value;
                    Ok((
                        Complex64::new((i1 + i2) / norm, 0.0),
                        Complex64::new((i1 - i2) / norm, 0.0),
                    ))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let alpha = CMatrix::from_fn(cutoff, cutoff, |i, j| rows[i][j].0);
    let beta = CMatrix::from_fn(cutoff, cutoff, |i, j| rows[i][j].1);
    let bound = JUNCTION_RESIDUAL_C * h * h * (cutoff * cutoff) as f64;
    BogoCoeffs::new(modes, alpha, beta, OrderTag::Exact { h }, bound)
}

/// First-order junction coefficients `(alpha^(1)_mn/h, beta^(1)_mn/h)`:
/// `-2 sqrt(mn)/(pi^2 (m-n)^3)` and `2 sqrt(mn)/(pi^2 (m+n)^3)` when `m + n`
/// is odd, zero otherwise.
pub fn linear_coefficients_closed_form(m: usize, n: usize) -> (f64, f64) {
    if (m + n) % 2 == 0 {
        return (0.0, 0.0);
    }
    let (mf, nf) = (m as f64, n as f64);
    let num = 2.0 * (mf * nf).sqrt() / (PI * PI);
    (-num / (mf - nf).powi(3), num / (mf + nf).powi(3))
}

/// Closed-form first-order coefficients on modes `1..=cutoff`, per unit `h`.
pub fn linear_junction(cutoff: usize) -> Result<BogoCoeffs> {
    let alpha = CMatrix::from_fn(cutoff, cutoff, |i, j| {
        Complex64::new(linear_coefficients_closed_form(i + 1, j + 1).0, 0.0)
    });
    let beta = CMatrix::from_fn(cutoff, cutoff, |i, j| {
        Complex64::new(linear_coefficients_closed_form(i + 1, j + 1).1, 0.0)
    });
    BogoCoeffs::new((1..=cutoff).collect(), alpha, beta, OrderTag::Series(1), 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    /// Free evolution for proper time `duration`.
    Inertial { duration: f64 },
    /// Uniform acceleration `h/delta` for the dimensionless duration
    /// `u = h tau / (4 delta atanh(h/2))`.
    Accelerated { h: f64, u: f64 },
}

impl Segment {
    fn validate(&self) -> Result<()> {
        match *self {
            Segment::Inertial { duration } if !(duration >= 0.0 && duration.is_finite()) => {
                Err(invalid(format!("inertial duration must be non-negative, got {duration}")))
            }
            Segment::Accelerated { h, .. } if !(h > -2.0 && h < 2.0) => {
                Err(invalid(format!("segment h must lie in (-2, 2), got {h}")))
            }
            Segment::Accelerated { u, .. } if !(u >= 0.0 && u.is_finite()) => {
                Err(invalid(format!("segment duration u must be non-negative, got {u}")))
            }
            _ => Ok(()),
        }
    }
}

/// Segments in the order the cavity traverses them.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TravelScenario {
    segments: Vec<Segment>,
}

impl TravelScenario {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        for s in &segments {
            s.validate()?;
        }
        Ok(Self { segments })
    }

    /// A single acceleration segment, evaluated right at its end.
    pub fn single_acceleration(h: f64, u: f64) -> Result<Self> {
        Self::new(vec![Segment::Accelerated { h, u }])
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// The scenario whose transformation inverts this one: segments in
    /// reverse order, each with its phase evolution run backwards by a whole
    /// period.
    pub fn time_reversed(&self, delta: f64) -> Self {
        let segments = self
            .segments
            .iter()
            .rev()
            .map(|s| match *s {
                Segment::Accelerated { h, u } => Segment::Accelerated {
                    h,
                    u: (1.0 - u.fract()).fract(),
                },
                Segment::Inertial { duration } => {
                    let period = 2.0 * delta;
                    Segment::Inertial {
                        duration: (period - duration.rem_euclid(period)).rem_euclid(period),
                    }
                }
            })
            .collect();
        Self { segments }
    }

    fn distinct_h(&self) -> Vec<f64> {
        let mut hs: Vec<f64> = Vec::new();
        for s in &self.segments {
            if let Segment::Accelerated { h, .. } = *s {
                if !hs.iter().any(|&x| x.to_bits() == h.to_bits()) {
                    hs.push(h);
                }
            }
        }
        hs
    }
}

/// Free-evolution phases over `modes` for one segment: `exp(-i n pi t/delta)`
/// inertially, `exp(-2 pi i m u)` while accelerating.
pub fn segment_phases(segment: &Segment, modes: &[usize], cfg: &CavityConfig) -> PhaseVector {
    let angle = |n: usize| match *segment {
        Segment::Inertial { duration } => -(n as f64) * PI * duration / cfg.delta,
        Segment::Accelerated { u, .. } => -2.0 * PI * n as f64 * u.fract(),
    };
    PhaseVector::from_angles(modes.iter().map(|&n| angle(n)))
}

/// The junction into an acceleration segment, projected onto the symplectic
/// group, together with its exact inverse.
#[derive(Debug, Clone)]
pub struct Junction {
    pub h: f64,
    pub forward: SymplecticMatrix,
    pub inverse: SymplecticMatrix,
}

impl Junction {
    pub fn new(h: f64, cutoff: usize) -> Result<Self> {
        let c = junction_coefficients_at(h, cutoff)?;
        let forward = project_symplectic(to_symplectic(&c).matrix(), EXACT_TOL, PROJECTION_ITERATIONS)?;
        let inverse = symplectic_inverse(&forward);
        Ok(Self { h, forward, inverse })
    }

    pub fn cutoff(&self) -> usize {
        self.forward.n_modes()
    }
}

/// Junctions for every acceleration value in a scenario, keyed by the bits of `h`.
#[derive(Debug, Clone, Default)]
pub struct JunctionSet {
    cutoff: usize,
    by_h: BTreeMap<u64, Junction>,
}

impl JunctionSet {
    pub fn for_scenario(scenario: &TravelScenario, cutoff: usize) -> Result<Self> {
        let mut by_h = BTreeMap::new();
        for h in scenario.distinct_h() {
            by_h.insert(h.to_bits(), Junction::new(h, cutoff)?);
        }
        Ok(Self { cutoff, by_h })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn get(&self, h: f64) -> Option<&Junction> {
        self.by_h.get(&h.to_bits())
    }
}

/// Phase-space transformation of a whole scenario on modes `1..=cfg.cutoff`.
pub fn scenario_symplectic(scenario: &TravelScenario, cfg: &CavityConfig) -> Result<SymplecticMatrix> {
    let junctions = JunctionSet::for_scenario(scenario, cfg.cutoff)?;
    scenario_symplectic_with(scenario, cfg, &junctions)
}

/// Like [`scenario_symplectic`] with precomputed junctions; the cutoff is the
/// junction set's.
pub fn scenario_symplectic_with(
    scenario: &TravelScenario,
    cfg: &CavityConfig,
    junctions: &JunctionSet,
) -> Result<SymplecticMatrix> {
    let modes: Vec<usize> = (1..=junctions.cutoff).collect();
    let dim = 2 * junctions.cutoff;
    let mut total = RMatrix::identity(dim, dim);
    let mut tol = EXACT_TOL;
    for seg in &scenario.segments {
        let rot = local_rotation(segment_phases(seg, &modes, cfg).phases())?;
        let step = match *seg {
            Segment::Inertial { .. } => rot.into_matrix(),
            Segment::Accelerated { h, .. } => {
                let j = junctions
                    .get(h)
                    .ok_or_else(|| invalid(format!("no junction prepared for h = {h}")))?;
                j.inverse.matrix() * rot.matrix() * j.forward.matrix()
            }
        };
        total = step * total;
        tol += 4.0 * EXACT_TOL;
    }
    SymplecticMatrix::new(total, tol.max(1e-10))
}

/// Zeroth- and first-order description of a scenario: accumulated phases and
/// the composed linear coefficients per unit `h_ref`.
#[derive(Debug, Clone)]
pub struct ScenarioSeries {
    pub phases: PhaseVector,
    pub linear: BogoCoeffs,
    pub h_ref: f64,
}

impl ScenarioSeries {
    pub fn pair_data(&self, k: usize, k2: usize, s: f64) -> Result<LinearCoefficientData> {
        LinearCoefficientData::from_series(&self.phases, &self.linear, self.h_ref, k, k2, s)
    }
}

/// Composes the closed-form junction expansion along a scenario. Each
/// acceleration segment contributes `(h_i/h_ref)(P K - K P)` at first order,
/// with `P` its phase rotation and `K` the linear junction.
pub fn scenario_series(scenario: &TravelScenario, cfg: &CavityConfig, h_ref: f64) -> Result<ScenarioSeries> {
    if !(h_ref != 0.0 && h_ref.is_finite()) {
        return Err(invalid("reference h must be finite and nonzero"));
    }
    let m = cfg.cutoff;
    let modes: Vec<usize> = (1..=m).collect();
    let lin = linear_junction(m)?;
    let k = block_matrix(lin.alpha(), lin.beta());
    let dim = 2 * m;
    let mut t0 = RMatrix::identity(dim, dim);
    let mut t1 = RMatrix::zeros(dim, dim);
    let mut g = vec![Complex64::new(1.0, 0.0); m];
    for seg in &scenario.segments {
        let phases = segment_phases(seg, &modes, cfg);
        let p = local_rotation(phases.phases())?.into_matrix();
        let s1 = match *seg {
            Segment::Accelerated { h, .. } => Some((&p * &k - &k * &p) * (h / h_ref)),
            Segment::Inertial { .. } => None,
        };
        t1 = &p * &t1;
        if let Some(s1) = s1 {
            t1 += s1 * &t0;
        }
        t0 = &p * &t0;
        for (acc, ph) in g.iter_mut().zip(phases.phases()) {
            *acc *= ph;
        }
    }
    let (alpha, beta) = split_block_matrix(&t1);
    Ok(ScenarioSeries {
        phases: PhaseVector::new(g)?,
        linear: BogoCoeffs::new(modes, alpha, beta, OrderTag::Series(1), 0.0)?,
        h_ref,
    })
}

/// Two-mode state of modes `(k, k')` after `s`, starting from symmetric
/// single-mode squeezing `diag(e^sq, e^-sq)` in both and vacuum elsewhere:
/// `C = R psi R^T` with `R` the rows of `s` belonging to the pair.
pub fn reduced_pair_state(s: &SymplecticMatrix, k: usize, k2: usize, squeezing: f64) -> Result<GaussianState> {
    let m = s.n_modes();
    for &label in &[k, k2] {
        if label == 0 || label > m {
            return Err(Error::UnknownMode(label));
        }
    }
    if k == k2 {
        return Err(invalid("the pair needs two distinct modes"));
    }
    let idx = [2 * (k - 1), 2 * (k - 1) + 1, 2 * (k2 - 1), 2 * (k2 - 1) + 1];
    let r = s.matrix().select_rows(&idx);
    let mut weighted = r.clone();
    for &label in &[k, k2] {
        let (x, p) = (2 * (label - 1), 2 * (label - 1) + 1);
        weighted.column_mut(x).scale_mut(squeezing.exp());
        weighted.column_mut(p).scale_mut((-squeezing).exp());
    }
    let c = &weighted * r.transpose();
    let c = (&c + c.transpose()) * 0.5;
    GaussianState::from_parts(vec![k, k2], c)
}

/// Negativity of the pair after the scenario, with the cutoff doubled as a
/// convergence check.
pub fn full_negativity(
    scenario: &TravelScenario,
    cfg: &CavityConfig,
    k: usize,
    k2: usize,
    s: f64,
) -> Result<EntanglementReport> {
    let small = JunctionSet::for_scenario(scenario, cfg.cutoff)?;
    let large = JunctionSet::for_scenario(scenario, 2 * cfg.cutoff)?;
    full_negativity_with(scenario, cfg, k, k2, s, &small, &large)
}

/// [`full_negativity`] with junctions prepared at the cutoff and at twice it.
pub fn full_negativity_with(
    scenario: &TravelScenario,
    cfg: &CavityConfig,
    k: usize,
    k2: usize,
    s: f64,
    junctions: &JunctionSet,
    doubled: &JunctionSet,
) -> Result<EntanglementReport> {
    if k > junctions.cutoff || k2 > junctions.cutoff {
        return Err(invalid(format!(
            "modes ({k}, {k2}) exceed the cutoff {}",
            junctions.cutoff
        )));
    }
    let report = |set: &JunctionSet| -> Result<EntanglementReport> {
        let sm = scenario_symplectic_with(scenario, cfg, set)?;
        negativity(&reduced_pair_state(&sm, k, k2, s)?)
    };
    let base = report(junctions)?;
    let check = report(doubled)?;
    let shift = (check.negativity - base.negativity).abs();
    if !(shift <= CUTOFF_SHIFT_TOL) {
        return Err(Error::CutoffNotConverged {
            cutoff: junctions.cutoff,
            shift,
        });
    }
    Ok(base)
}

/// One row of the single-segment sweep; negativities are divided by `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub u: f64,
    /// Leading-order negativity per squeezing value.
    pub n_over_h_leading: Vec<f64>,
    /// Non-perturbative negativity per squeezing value.
    pub n_over_h_full: Vec<f64>,
    pub f_over_h2: f64,
    /// Second-order determinant of the pair state per squeezing value.
    pub det: Vec<f64>,
}

/// Sweeps the single acceleration segment over `u_grid` for the pair
/// `(k, k')` and each squeezing in `squeezings`.
pub fn acceleration_sweep(
    cfg: &CavityConfig,
    k: usize,
    k2: usize,
    squeezings: &[f64],
    u_grid: &[f64],
) -> Result<Vec<SweepRow>> {
    if k == k2 || k == 0 || k2 == 0 || k.max(k2) >= cfg.cutoff {
        return Err(invalid(format!(
            "pair ({k}, {k2}) must be distinct modes below the cutoff {}",
            cfg.cutoff
        )));
    }
    let probe = TravelScenario::single_acceleration(cfg.h, 0.0)?;
    let junctions = JunctionSet::for_scenario(&probe, cfg.cutoff)?;
    let doubled = JunctionSet::for_scenario(&probe, 2 * cfg.cutoff)?;
    u_grid
        .par_iter()
        .map(|&u| {
            let scenario = TravelScenario::single_acceleration(cfg.h, u)?;
            let series = scenario_series(&scenario, cfg, cfg.h)?;
            let unit = &series.linear;
            let mut row = SweepRow {
                u,
                n_over_h_leading: Vec::with_capacity(squeezings.len()),
                n_over_h_full: Vec::with_capacity(squeezings.len()),
                f_over_h2: validity_f(unit, 1.0, k, k2, cfg.cutoff)?.value,
                det: Vec::with_capacity(squeezings.len()),
            };
            for &s in squeezings {
                let data = series.pair_data(k, k2, s)?;
                row.n_over_h_leading.push(leading_negativity(&data) / cfg.h);
                let full = full_negativity_with(&scenario, cfg, k, k2, s, &junctions, &doubled)?;
                row.n_over_h_full.push(full.negativity / cfg.h);
                row.det.push(mixedness_determinant(unit, cfg.h, k, k2, s, cfg.cutoff)?.value);
            }
            Ok(row)
        })
        .collect()
}
