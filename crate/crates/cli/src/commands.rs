use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use bogoent::bogoliubov::{read_coeffs, verify_identities, EXACT_RESIDUAL};
use bogoent::cavity::acceleration_sweep;
use bogoent::frw::{frw_coefficients, frw_negativity};
use bogoent::gaussian::{apply_symplectic, negativity, partial_trace, GaussianState};
use bogoent::symplectic::SymplecticMatrix;
use bogoent::{CavityConfig, FrwConfig, RMatrix};

use crate::config::{ApplyRun, CavityRun, FrwRun, Loaded};
use crate::CliError;

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn header(command: &str, config: &[u8]) -> String {
    let digest = Sha256::digest(config);
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    format!(
        "# bogoent {}\n# command {command}\n# config_sha256 {hex}\n",
        env!("CARGO_PKG_VERSION")
    )
}

pub fn cavity(cfg: &Loaded<CavityRun>, cutoff_override: Option<usize>) -> Result<String, CliError> {
    let run = &cfg.run;
    let cutoff = cutoff_override.unwrap_or(run.cutoff);
    let cavity = CavityConfig::new(run.delta, run.h, cutoff).map_err(CliError::from_core)?;
    let u_grid = run.u_grid.values("u_grid")?;
    if run.squeezings.is_empty() || run.squeezings.iter().any(|s| !s.is_finite()) {
        return Err(CliError::config("squeezings must be a nonempty list of finite numbers"));
    }
    let [k, k2] = run.pair;
    let rows = acceleration_sweep(&cavity, k, k2, &run.squeezings, &u_grid)?;

    let mut out = header("cavity", &cfg.bytes);
    let _ = writeln!(out, "# h {} cutoff {cutoff} pair {k} {k2}", num(run.h));
    let mut cols = vec!["u".to_string()];
    for prefix in ["N_over_h_leading", "N_over_h_full"] {
        cols.extend(run.squeezings.iter().map(|s| format!("{prefix}[s={s}]")));
    }
    cols.push("F_over_h2".into());
    cols.extend(run.squeezings.iter().map(|s| format!("det_sigma[s={s}]")));
    let _ = writeln!(out, "{}", cols.join(","));
    for row in rows {
        let mut fields = vec![num(row.u)];
        fields.extend(row.n_over_h_leading.iter().map(|&v| num(v)));
        fields.extend(row.n_over_h_full.iter().map(|&v| num(v)));
        fields.push(num(row.f_over_h2));
        fields.extend(row.det.iter().map(|&v| num(v)));
        let _ = writeln!(out, "{}", fields.join(","));
    }
    Ok(out)
}

pub fn frw(cfg: &Loaded<FrwRun>) -> Result<String, CliError> {
    let run = &cfg.run;
    let ks = run.k.values("k")?;
    let configs = ks
        .iter()
        .map(|&k| FrwConfig::new(run.epsilon, run.rho, run.mass, k))
        .collect::<bogoent::Result<Vec<_>>>()
        .map_err(CliError::from_core)?;
    let mut out = header("frw", &cfg.bytes);
    let _ = writeln!(out, "k,beta2,nu_minus,negativity");
    for c in configs {
        let (_, beta2) = frw_coefficients(&c);
        let report = frw_negativity(&c);
        let _ = writeln!(
            out,
            "{},{},{},{}",
            num(c.k),
            num(beta2),
            num(report.nu_minus),
            num(report.negativity)
        );
    }
    Ok(out)
}

pub fn apply(cfg: &Loaded<ApplyRun>) -> Result<String, CliError> {
    let run = &cfg.run;
    let path = cfg.dir.join(&run.coefficients);
    let coeffs = read_coeffs(&path).map_err(CliError::from_core)?;
    if run.squeezings.len() != coeffs.len() {
        return Err(CliError::config(format!(
            "{} squeezings given for {} modes",
            run.squeezings.len(),
            coeffs.len()
        )));
    }
    if run.squeezings.iter().any(|s| !s.is_finite()) {
        return Err(CliError::config("squeezings must be finite"));
    }
    let block = bogoent::bogoliubov::block_matrix(coeffs.alpha(), coeffs.beta());
    let tol = coeffs.residual_bound().max(EXACT_RESIDUAL);
    let s = SymplecticMatrix::new(block, 2.0 * tol).map_err(CliError::from_core)?;

    let n = coeffs.len();
    let mut cov = RMatrix::zeros(2 * n, 2 * n);
    for (i, sq) in run.squeezings.iter().enumerate() {
        cov[(2 * i, 2 * i)] = sq.exp();
        cov[(2 * i + 1, 2 * i + 1)] = (-sq).exp();
    }
    let initial = GaussianState::new(coeffs.modes().to_vec(), cov).map_err(CliError::from_core)?;
    let [k, k2] = run.pair;
    if k == k2 {
        return Err(CliError::config("pair needs two distinct modes"));
    }
    let evolved = apply_symplectic(&s, &initial)?;
    let pair = partial_trace(&evolved, &[k, k2]).map_err(CliError::from_core)?;
    // keep the requested order so the second listed mode is transposed
    let pair = if pair.modes()[0] == k {
        pair
    } else {
        let swap = [2, 3, 0, 1];
        let cov = pair.cov().select_rows(&swap).select_columns(&swap);
        GaussianState::from_parts(vec![k, k2], cov)?
    };
    let report = negativity(&pair)?;

    let mut out = header("apply", &cfg.bytes);
    let _ = writeln!(out, "k,k2,nu_minus,negativity,log_negativity,det_sigma");
    let _ = writeln!(
        out,
        "{k},{k2},{},{},{},{}",
        num(report.nu_minus),
        num(report.negativity),
        num(report.log_negativity),
        num(report.det_cov)
    );
    Ok(out)
}

/// Identity residuals of a coefficient file; fails if they exceed the file's
/// declared bound.
pub fn check(path: &std::path::Path) -> Result<String, CliError> {
    let coeffs = read_coeffs(path).map_err(CliError::from_core)?;
    let tol = coeffs.residual_bound().max(EXACT_RESIDUAL);
    let r = verify_identities(&coeffs, tol);
    let text = format!(
        "modes {}\nunitarity {}\nsymmetry {}\ntolerance {}\npassed {}\n",
        coeffs.len(),
        num(r.unitarity),
        num(r.symmetry),
        num(r.tol),
        r.passed
    );
    if r.passed {
        Ok(text)
    } else {
        Err(CliError::Numerical(format!(
            "{text}identity residuals exceed the declared bound"
        )))
    }
}
