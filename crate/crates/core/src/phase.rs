//! Diagonal direction against `(e₁+e₂)/√2` as the exponent varies.
//!
//! For `a = (1,…,1)/√n` the sums behind both volume formulas are
//! asymptotically Gaussian, which gives closed-form `n → ∞` limits.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::domain::{Direction, Exponent};
use crate::error::{Error, Result};
use crate::projections::{estimate_projection_ratio, szarek_value, ProjectionQuery};
use crate::sections::{ball_direction_value, estimate_section_ratio, SectionQuery};
use crate::special::{gamma_pos, gamma_ratio};

/// `lim_n A_{n,p}(diag) = Γ(1+1/p) √(2/π) √(3Γ(1+1/p)/Γ(1+3/p))`.
pub fn diagonal_limit_section(p: Exponent) -> Result<f64> {
    if !(p.value() > 1.0) {
        return Err(Error::InvalidInput(format!("section exponent must exceed 1, got {p}")));
    }
    let x = p.recip();
    let g = gamma_pos(1.0 + x);
    Ok(g * (2.0 / PI).sqrt() * (3.0 / gamma_ratio(1.0 + 3.0 * x, 1.0 + x)).sqrt())
}

/// `lim_n E|Σ X_j/√n| = √(2Γ(2-1/q)/(πΓ(1/q)))`, the bare moment.
pub fn diagonal_limit_projection(q: Exponent) -> Result<f64> {
    let v = q.value();
    if !(v > 1.0 && v <= 2.0) {
        return Err(Error::InvalidInput(format!("projection exponent must lie in (1, 2], got {q}")));
    }
    Ok((2.0 * gamma_ratio(2.0 - 1.0 / v, 1.0 / v) / PI).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScanMode {
    Section,
    Projection,
}

/// Dimension behind a scan value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum NUsed {
    #[serde(serialize_with = "limit_token")]
    Limit,
    Finite(usize),
}

fn limit_token<S: serde::Serializer>(s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str("limit")
}

impl std::fmt::Display for NUsed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NUsed::Limit => f.write_str("limit"),
            NUsed::Finite(n) => write!(f, "{n}"),
        }
    }
}

/// One comparison; projection rows are at the bare-moment level, so the
/// ball value there is `c_q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub exponent: f64,
    pub diagonal_value: f64,
    pub ball_value: f64,
    pub difference: f64,
    pub n_used: NUsed,
    /// Standard error of `diagonal_value`; zero for limit rows.
    #[serde(skip)]
    pub std_error: f64,
}

impl ScanRow {
    fn new(exponent: f64, diagonal_value: f64, ball_value: f64, n_used: NUsed, std_error: f64) -> Self {
        ScanRow { exponent, diagonal_value, ball_value, difference: diagonal_value - ball_value, n_used, std_error }
    }
}

fn check_grid_point(mode: ScanMode, e: f64) -> Result<Exponent> {
    let ok = match mode {
        ScanMode::Section => e > 2.0,
        ScanMode::Projection => e > 1.0 && e < 2.0,
    };
    if !ok {
        let range = if mode == ScanMode::Section { "(2, inf]" } else { "(1, 2)" };
        return Err(Error::InvalidInput(format!("scan exponent {e} outside {range}")));
    }
    Exponent::new(e)
}

fn ball_value(mode: ScanMode, e: Exponent) -> Result<f64> {
    match mode {
        ScanMode::Section => Ok(ball_direction_value(e)),
        ScanMode::Projection => szarek_value(e),
    }
}

/// Limit row at one exponent.
pub fn limit_row(mode: ScanMode, exponent: f64) -> Result<ScanRow> {
    let e = check_grid_point(mode, exponent)?;
    let diag = match mode {
        ScanMode::Section => diagonal_limit_section(e)?,
        ScanMode::Projection => diagonal_limit_projection(e)?,
    };
    Ok(ScanRow::new(exponent, diag, ball_value(mode, e)?, NUsed::Limit, 0.0))
}

/// Finite-`n` Monte Carlo row for the diagonal of `ℝⁿ`.
pub fn finite_row(mode: ScanMode, exponent: f64, n: usize, samples: u64, seed: u64) -> Result<ScanRow> {
    let e = check_grid_point(mode, exponent)?;
    let a = Direction::diagonal(n);
    let (value, se) = match mode {
        ScanMode::Section => {
            let est = estimate_section_ratio(&SectionQuery::new(a, e, samples, seed))?;
            (est.mean, est.std_error)
        }
        ScanMode::Projection => {
            let est = estimate_projection_ratio(&ProjectionQuery::new(a, e, samples, seed))?;
            let g = gamma_pos(1.0 / exponent);
            (est.mean / g, est.std_error / g)
        }
    };
    Ok(ScanRow::new(exponent, value, ball_value(mode, e)?, NUsed::Finite(n), se))
}

/// Limit rows over `grid`, each followed by a finite-`n` row when `n` is
/// given. Grid points are processed in parallel and returned in order.
pub fn scan(mode: ScanMode, grid: &[f64], n: Option<usize>, samples: u64, seed: u64) -> Result<Vec<ScanRow>> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("empty scan grid".into()));
    }
    let rows: Vec<Result<Vec<ScanRow>>> = grid
        .par_iter()
        .enumerate()
        .map(|(i, &e)| {
            let mut out = vec![limit_row(mode, e)?];
            if let Some(n) = n {
                out.push(finite_row(mode, e, n, samples, seed.wrapping_add(i as u64))?);
            }
            Ok(out)
        })
        .collect();
    let mut flat = Vec::new();
    for r in rows {
        flat.extend(r?);
    }
    Ok(flat)
}

/// Root of the limit difference in `[lo, hi]` by bisection, or `None`
/// without a sign change.
pub fn limit_crossing(mode: ScanMode, lo: f64, hi: f64, tol: f64) -> Result<Option<f64>> {
    let f = |e: f64| limit_row(mode, e).map(|r| r.difference);
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (f(a)?, f(b)?);
    if fa == 0.0 {
        return Ok(Some(a));
    }
    if fb == 0.0 {
        return Ok(Some(b));
    }
    if fa.signum() == fb.signum() {
        return Ok(None);
    }
    let mut fa = fa;
    while b - a > tol * a.abs().max(1.0) {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(Some(m));
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(Some(0.5 * (a + b)))
}

/// Every bracketed crossing between consecutive grid points, refined by
/// bisection.
pub fn crossings(mode: ScanMode, grid: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for w in grid.windows(2) {
        if let Some(r) = limit_crossing(mode, w[0], w[1], 1e-12)? {
            if out.last().is_none_or(|&last: &f64| (r - last).abs() > 1e-9) {
                out.push(r);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn section_limit_endpoints() {
        assert!((diagonal_limit_section(Exponent::TWO).unwrap() - 1.0).abs() < 1e-14);
        let cube = diagonal_limit_section(Exponent::Infinite).unwrap();
        assert!((cube - (6.0 / PI).sqrt()).abs() < 1e-14);
        assert!(diagonal_limit_section(Exponent::ONE).is_err());
    }

    #[test]
    fn projection_limit_crosses_at_four_thirds() {
        let q = Exponent::Finite(4.0 / 3.0);
        let c = 2f64.powf(-0.25) / gamma_pos(0.75);
        assert!((diagonal_limit_projection(q).unwrap() - c).abs() < 1e-10);
        assert!((szarek_value(q).unwrap() - c).abs() < 1e-14);
        assert!(limit_row(ScanMode::Projection, 1.5).unwrap().difference < 0.0);
        assert!(
            (diagonal_limit_projection(Exponent::TWO).unwrap() - szarek_value(Exponent::TWO).unwrap()).abs() < 1e-14
        );
    }

    #[test]
    fn section_sign_change_in_bracket() {
        for p in [3.0, 10.0, 25.0] {
            assert!(limit_row(ScanMode::Section, p).unwrap().difference > 0.0);
        }
        assert!(limit_row(ScanMode::Section, 50.0).unwrap().difference < 0.0);
        let root = limit_crossing(ScanMode::Section, 24.0, 28.0, 1e-12).unwrap().unwrap();
        assert!(root > 26.0 && root < 26.5, "{root}");
        assert_eq!(crossings(ScanMode::Section, &[3.0, 10.0, 24.0, 28.0, 100.0]).unwrap().len(), 1);
    }

    #[test]
    fn scan_interleaves_and_rejects() {
        let rows = scan(ScanMode::Section, &[3.0, 50.0], Some(5), 2000, 1).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].n_used, NUsed::Limit);
        assert_eq!(rows[1].n_used, NUsed::Finite(5));
        for r in &rows {
            assert_eq!(r.difference, r.diagonal_value - r.ball_value);
        }
        assert!(scan(ScanMode::Section, &[], None, 1, 0).is_err());
        assert!(scan(ScanMode::Projection, &[2.5], None, 1, 0).is_err());
    }

    #[test]
    fn limit_matches_large_n_cube_sections() {
        let row = finite_row(ScanMode::Section, f64::INFINITY, 1000, 20_000, 3).unwrap();
        let lim = (6.0 / PI).sqrt();
        assert!((row.diagonal_value - lim).abs() < 4.0 * row.std_error + 2e-3, "{row:?}");
    }
}
