//! Gamma-family special functions and the two integrals behind the
//! stability constants: Haagerup's `F` and Ball's `Ψ`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::quad;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_431;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7, nine terms).
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_infinite() {
        return Err(Error::Domain { function: "log_gamma", arg: x });
    }
    Ok(ln_gamma_pos(x))
}

/// `ln Γ(x)` without the domain check; callers guarantee `x > 0`.
pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x) = Γ(x + 1) / x keeps the Lanczos sum in its accurate range
        return lanczos(x + 1.0) - x.ln();
    }
    lanczos(x)
}

fn lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// `Γ(x)` for `x > 0`.
pub fn gamma(x: f64) -> Result<f64> {
    log_gamma(x).map(f64::exp)
}

pub(crate) fn gamma_pos(x: f64) -> f64 {
    ln_gamma_pos(x).exp()
}

/// `Γ(a)/Γ(b)` for positive arguments.
pub(crate) fn gamma_ratio(a: f64, b: f64) -> f64 {
    (ln_gamma_pos(a) - ln_gamma_pos(b)).exp()
}

/// `ζ(k)` for integers `k >= 2`: a direct partial sum plus an
/// Euler–Maclaurin tail.
fn zeta_int(k: u32) -> f64 {
    const N: u32 = 1000;
    let kf = k as f64;
    let nf = N as f64;
    let mut s = 0.0;
    for n in (1..N).rev() {
        s += (n as f64).powf(-kf);
    }
    let tail = nf.powf(1.0 - kf) / (kf - 1.0) + 0.5 * nf.powf(-kf) + kf / 12.0 * nf.powf(-kf - 1.0)
        - kf * (kf + 1.0) * (kf + 2.0) / 720.0 * nf.powf(-kf - 3.0);
    s + tail
}

const TAYLOR_TERMS: usize = 40;

/// Taylor coefficients of `Γ(1 + z)` around `z = 0`, obtained by
/// exponentiating `ln Γ(1 + z) = -γz + Σ_{k≥2} (-1)^k ζ(k) z^k / k`.
fn gamma_1p_taylor() -> &'static [f64; TAYLOR_TERMS] {
    static COEF: OnceLock<[f64; TAYLOR_TERMS]> = OnceLock::new();
    COEF.get_or_init(|| {
        let mut log_coef = [0.0; TAYLOR_TERMS];
        log_coef[1] = -EULER_GAMMA;
        for (k, l) in log_coef.iter_mut().enumerate().skip(2) {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            *l = sign * zeta_int(k as u32) / k as f64;
        }
        let mut c = [0.0; TAYLOR_TERMS];
        c[0] = 1.0;
        for n in 1..TAYLOR_TERMS {
            let mut acc = 0.0;
            for k in 1..=n {
                acc += k as f64 * log_coef[k] * c[n - k];
            }
            c[n] = acc / n as f64;
        }
        c
    })
}

/// `Γ''(1) = γ² + π²/6`.
pub fn gamma_second_derivative_at_one() -> f64 {
    2.0 * gamma_1p_taylor()[2]
}

/// `h(x) = Γ(1+3x) - 2Γ(1+2x) + Γ(1+x)` on `[0, 1/3)`.
///
/// The three terms cancel to `O(x²)`, so small arguments go through the
/// Taylor series of `Γ(1+z)` instead of differencing.
pub fn gamma_second_difference(x: f64) -> Result<f64> {
    if !(0.0..1.0 / 3.0).contains(&x) {
        return Err(Error::Domain { function: "gamma_second_difference", arg: x });
    }
    if x < 0.02 {
        let c = gamma_1p_taylor();
        let mut sum = 0.0;
        for k in (2..TAYLOR_TERMS).rev() {
            let w = 3f64.powi(k as i32) - 2.0 * 2f64.powi(k as i32) + 1.0;
            sum += c[k] * w * x.powi(k as i32);
        }
        return Ok(sum);
    }
    Ok(gamma_pos(1.0 + 3.0 * x) - 2.0 * gamma_pos(1.0 + 2.0 * x) + gamma_pos(1.0 + x))
}

/// `Γ(1+x) + Γ(1-x) - 2` on `[0, 1)`, the numerator behind the coupling
/// bound for the projection factors.
pub fn gamma_symmetric_difference(x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain { function: "gamma_symmetric_difference", arg: x });
    }
    if x < 0.1 {
        let c = gamma_1p_taylor();
        let mut sum = 0.0;
        for k in (2..TAYLOR_TERMS).rev().filter(|k| k % 2 == 0) {
            sum += 2.0 * c[k] * x.powi(k as i32);
        }
        return Ok(sum);
    }
    Ok(gamma_pos(1.0 + x) + gamma_pos(1.0 - x) - 2.0)
}

/// Haagerup's `F(s) = 2/√(πs) · Γ((s+1)/2) / Γ(s/2)`, increasing on `(0, ∞)`
/// with `F(2) = 1/√2` and `F(∞) = 1`.
pub fn haagerup_f(s: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::Domain { function: "haagerup_f", arg: s });
    }
    if s.is_infinite() {
        return Ok(1.0);
    }
    Ok(2.0 / (PI * s).sqrt() * gamma_ratio(0.5 * (s + 1.0), 0.5 * s))
}

/// Accuracy settings for `Ψ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub max_periods: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { abs_tol: 1e-10, max_periods: 1_000_000 }
    }
}

/// Value of `Ψ(s)` together with a bound on its absolute error.
#[derive(Debug, Clone, Copy)]
pub struct PsiValue {
    pub value: f64,
    pub error_bound: f64,
    pub periods: usize,
}

/// Ball's integral `Ψ(s) = (2/π) √s ∫₀^∞ |sin t / t|^s dt` for `s >= 2`.
pub fn ball_psi(s: f64, spec: QuadratureSpec) -> Result<f64> {
    ball_psi_detailed(s, spec).map(|v| v.value)
}

/// `Ψ(s)` with its error budget.
///
/// The first `N` periods `[kπ, (k+1)π]` are integrated adaptively. Beyond
/// `Nπ` the integrand is `|sin t|^s · t^{-s}`; replacing `|sin t|^s` by its
/// period mean `m_s` gives the tail `m_s (Nπ)^{1-s}/(s-1)`, and because
/// `|sin t|^s - m_s` has zero mean and is symmetric on each period, the
/// replacement error is at most
/// `π³/24 · [s(s+1)(Nπ)^{-s-2} + s(Nπ)^{-s-1}/π]`.
/// `N` is the smallest count for which that bound meets half the tolerance.
pub fn ball_psi_detailed(s: f64, spec: QuadratureSpec) -> Result<PsiValue> {
    if !(s >= 2.0) || s.is_infinite() {
        return Err(Error::Domain { function: "ball_psi", arg: s });
    }
    if !(spec.abs_tol > 0.0) || spec.max_periods == 0 {
        return Err(Error::InvalidInput("quadrature spec needs abs_tol > 0 and max_periods > 0".into()));
    }
    let prefactor = 2.0 / PI * s.sqrt();
    let tail_budget = 0.5 * spec.abs_tol / prefactor;
    let remainder = |n: usize| {
        let x = n as f64 * PI;
        PI.powi(3) / 24.0 * (s * (s + 1.0) * x.powf(-s - 2.0) + s * x.powf(-s - 1.0) / PI)
    };

    let periods = smallest_periods(&remainder, tail_budget, spec.max_periods).ok_or_else(|| Error::Accuracy {
        tol: spec.abs_tol,
        reason: format!("tail of Psi({s}) needs more than {} periods", spec.max_periods),
    })?;

    let integrand = |t: f64| (t.sin() / t).abs().powf(s);
    let per_period_tol = tail_budget / periods as f64;
    let mut body = 0.0;
    let mut body_err = 0.0;
    for k in 0..periods {
        let a = k as f64 * PI;
        let q = quad::adaptive(&integrand, a, a + PI, per_period_tol, 30);
        if !q.converged {
            return Err(Error::Accuracy {
                tol: spec.abs_tol,
                reason: format!("period {k} of Psi({s}) did not converge"),
            });
        }
        body += q.value;
        body_err += q.error;
    }
    let mean_power = gamma_ratio(0.5 * (s + 1.0), 0.5 * s + 1.0) / PI.sqrt();
    let x = periods as f64 * PI;
    let tail = mean_power * x.powf(1.0 - s) / (s - 1.0);
    Ok(PsiValue { value: prefactor * (body + tail), error_bound: prefactor * (body_err + remainder(periods)), periods })
}

fn smallest_periods(bound: &impl Fn(usize) -> f64, target: f64, max: usize) -> Option<usize> {
    if bound(1) <= target {
        return Some(1);
    }
    let mut hi = 2usize;
    while bound(hi) > target {
        if hi >= max {
            return None;
        }
        hi = (hi * 2).min(max);
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if bound(mid) <= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    // reference values from a 30-digit evaluation
    const LGAMMA_REF: [(f64, f64); 8] = [
        (0.1, 2.252_712_651_734_205_902_006_2),
        (0.5, 0.572_364_942_924_700_087_071_71),
        (1.5, -0.120_782_237_635_245_222_345_52),
        (2.5, 0.284_682_870_472_919_159_632_49),
        (7.3, 7.147_892_523_022_248_692_1),
        (10.0, 12.801_827_480_081_469_611_207),
        (55.55, 166.521_896_227_530_728_953_5),
        (100.0, 359.134_205_369_575_398_776_04),
    ];

    #[test]
    fn log_gamma_matches_reference_values() {
        for (x, want) in LGAMMA_REF {
            let got = log_gamma(x).unwrap();
            // relative error of Γ is the absolute error of ln Γ
            assert!((got - want).abs() < 1e-13, "lgamma({x}) = {got}, want {want}");
        }
        assert!(log_gamma(1.0).unwrap().abs() < 1e-15);
        assert!((log_gamma(5.0).unwrap() - 24f64.ln()).abs() < 1e-14);
        assert!((log_gamma(0.5).unwrap() - PI.sqrt().ln()).abs() < 1e-15);
    }

    #[test]
    fn log_gamma_recurrence_on_grid() {
        let mut x = 0.5;
        while x < 100.0 {
            let lhs = log_gamma(x + 1.0).unwrap();
            let rhs = log_gamma(x).unwrap() + x.ln();
            assert!((lhs - rhs).abs() < 1e-13 * lhs.abs().max(1.0), "x = {x}");
            x += 0.37;
        }
    }

    #[test]
    fn log_gamma_domain() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn haagerup_f_values() {
        assert!((haagerup_f(2.0).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((haagerup_f(1.0).unwrap() - 2.0 / PI).abs() < 1e-15);
        // Γ(5/2) = 3√π/4, so F(4) = 3/4
        assert!((haagerup_f(4.0).unwrap() - 0.75).abs() < 1e-14);
        assert!(haagerup_f(0.0).is_err());
    }

    #[test]
    fn haagerup_f_increases_on_log_grid() {
        let grid: Vec<f64> = (0..=500).map(|i| 0.1 * 10f64.powf(5.0 * i as f64 / 500.0)).collect();
        for w in grid.windows(2) {
            assert!(haagerup_f(w[1]).unwrap() > haagerup_f(w[0]).unwrap(), "not increasing at {}", w[0]);
        }
    }

    #[test]
    fn second_derivative_at_one() {
        let want = EULER_GAMMA * EULER_GAMMA + PI * PI / 6.0;
        assert!((gamma_second_derivative_at_one() - want).abs() < 1e-14);
        assert!((want - 1.978_111_990_655_945_5).abs() < 1e-15);
    }

    #[test]
    fn second_difference_small_argument_limit() {
        assert_eq!(gamma_second_difference(0.0).unwrap(), 0.0);
        let ratio = gamma_second_difference(1e-6).unwrap() / 1e-12;
        assert!((ratio - gamma_second_derivative_at_one()).abs() < 1e-4);
        assert!(gamma_second_difference(0.1).unwrap() <= 0.02);
        assert!(gamma_second_difference(0.34).is_err());
    }

    #[test]
    fn series_and_direct_forms_agree_at_the_switch() {
        let x = 0.02;
        let direct = gamma_pos(1.0 + 3.0 * x) - 2.0 * gamma_pos(1.0 + 2.0 * x) + gamma_pos(1.0 + x);
        let series = gamma_second_difference(x - 1e-15).unwrap();
        assert!((direct - series).abs() < 1e-13, "{direct} vs {series}");
        let x = 0.1;
        let direct = gamma_pos(1.0 + x) + gamma_pos(1.0 - x) - 2.0;
        let series = gamma_symmetric_difference(x - 1e-15).unwrap();
        assert!((direct - series).abs() < 1e-13, "{direct} vs {series}");
    }

    #[test]
    fn second_difference_bound_holds_on_grid() {
        for i in 1..200 {
            let x = 0.2 * i as f64 / 200.0;
            let h = gamma_second_difference(x).unwrap();
            assert!(h >= 0.0 && h <= 2.0 * x * x, "x = {x}, h = {h}");
        }
    }

    #[test]
    fn psi_at_two_is_sqrt_two() {
        let v = ball_psi_detailed(2.0, QuadratureSpec::default()).unwrap();
        assert!((v.value - std::f64::consts::SQRT_2).abs() < 1e-9, "{}", v.value);
        assert!(v.error_bound < 1e-9);
    }

    #[test]
    fn psi_large_s_approaches_gaussian_limit() {
        let v = ball_psi(1e4, QuadratureSpec::default()).unwrap();
        assert!((v - (6.0 / PI).sqrt()).abs() < 1e-2);
        let v = ball_psi(2.25, QuadratureSpec::default()).unwrap();
        assert!(v <= (6.0 / PI).sqrt());
    }

    #[test]
    fn psi_domain_and_budget_errors() {
        assert!(ball_psi(1.5, QuadratureSpec::default()).is_err());
        let tight = QuadratureSpec { abs_tol: 1e-14, max_periods: 4 };
        assert!(matches!(ball_psi(2.0, tight), Err(Error::Accuracy { .. })));
    }

    #[test]
    fn psi_is_stable_under_tolerance_halving() {
        for s in [2.0, 2.5, 3.7, 10.0, 200.0] {
            let a = ball_psi_detailed(s, QuadratureSpec::default()).unwrap();
            let b = ball_psi(s, QuadratureSpec { abs_tol: 5e-11, ..Default::default() }).unwrap();
            assert!((a.value - b).abs() < 1e-10, "s = {s}");
        }
    }
}
