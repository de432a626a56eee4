//! Globally adaptive Gauss–Kronrod (10/21-point) quadrature for smooth
//! vector-valued integrands on a finite interval.

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_015_646_248,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], ...
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Integral<const N: usize> {
    pub value: [f64; N],
    /// Sum over panels of the Kronrod–Gauss difference, per component.
    pub error: [f64; N],
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: [f64; N],
}

impl<const N: usize> Panel<N> {
    fn worst(&self) -> f64 {
        self.error.iter().fold(0.0, |m, e| m.max(*e))
    }
}

fn gk21<const N: usize, F>(f: &F, a: f64, b: f64) -> Panel<N>
where
    F: Fn(f64) -> [f64; N],
{
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kron = [0.0; N];
    let mut gauss = [0.0; N];
    for c in 0..N {
        kron[c] = WGK[10] * fc[c];
    }
    for (j, (&x, &wk)) in XGK[..10].iter().zip(&WGK[..10]).enumerate() {
        let dx = half * x;
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        for c in 0..N {
            let s = f1[c] + f2[c];
            kron[c] += wk * s;
            if j % 2 == 1 {
                gauss[c] += WG[j / 2] * s;
            }
        }
    }
    let mut value = [0.0; N];
    let mut error = [0.0; N];
    for c in 0..N {
        value[c] = kron[c] * half;
        error[c] = ((kron[c] - gauss[c]) * half).abs();
    }
    Panel { a, b, value, error }
}

/// Integrates `f` over `[a, b]`, starting from `initial_panels` equal panels
/// and bisecting the panel with the largest error until the summed error of
/// every component is below `abs_tol`.
pub fn integrate<const N: usize, F>(
    f: F,
    a: f64,
    b: f64,
    initial_panels: usize,
    abs_tol: f64,
    max_panels: usize,
) -> Result<Integral<N>>
where
    F: Fn(f64) -> [f64; N],
{
    let n0 = initial_panels.max(1);
    let width = (b - a) / n0 as f64;
    let mut panels: Vec<Panel<N>> = (0..n0)
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == n0 { b } else { a + width * (i + 1) as f64 };
            gk21(&f, lo, hi)
        })
        .collect();

    loop {
        let total = total_error(&panels);
        if total.iter().all(|e| *e <= abs_tol) {
            break;
        }
        if panels.len() >= max_panels {
            return Err(Error::Quadrature {
                error: total.iter().fold(0.0, |m, e| m.max(*e)),
            });
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.worst().total_cmp(&y.1.worst()))
            .expect("at least one panel");
        let p = panels.swap_remove(idx);
        let mid = 0.5 * (p.a + p.b);
        panels.push(gk21(&f, p.a, mid));
        panels.push(gk21(&f, mid, p.b));
    }

    // fixed summation order, independent of the refinement history
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut value = [0.0; N];
    for p in &panels {
        for c in 0..N {
            value[c] += p.value[c];
        }
    }
    Ok(Integral {
        value,
        error: total_error(&panels),
        evaluations: panels.len() * 21,
    })
}

fn total_error<const N: usize>(panels: &[Panel<N>]) -> [f64; N] {
    let mut err = [0.0; N];
    for p in panels {
        for c in 0..N {
            err[c] += p.error[c];
        }
    }
    err
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| [x.powi(7), 1.0], 0.0, 2.0, 1, 1e-14, 10).unwrap();
        assert_close!(r.value[0], 32.0, 1e-12);
        assert_close!(r.value[1], 2.0, 1e-15);
    }

    #[test]
    fn sine_orthogonality() {
        let delta = 1.7;
        let a = 0.4;
        for n in 1..=6 {
            for k in 1..=6 {
                let f = |x: f64| {
                    [(n as f64 * PI * (x - a) / delta).sin() * (k as f64 * PI * (x - a) / delta).sin()]
                };
                let r = integrate(f, a, a + delta, 4, 1e-13, 1000).unwrap();
                let expected = if n == k { delta / 2.0 } else { 0.0 };
                assert_close!(r.value[0], expected, 1e-13);
            }
        }
    }

    #[test]
    fn adapts_to_peaked_integrand() {
        let r = integrate(|x: f64| [1.0 / (1e-4 + x * x)], -1.0, 1.0, 1, 1e-10, 5000).unwrap();
        let exact = 2.0 * (1.0 / 1e-2) * (1.0f64 / 1e-2).atan();
        assert_close!(r.value[0], exact, 1e-8);
    }

    #[test]
    fn reports_non_convergence() {
        let err = integrate(|x: f64| [(1.0 / x.abs().max(1e-300)).sin()], -1.0, 1.0, 1, 1e-15, 8);
        assert!(matches!(err, Err(Error::Quadrature { .. })));
    }
}
