//! Designed parameter sweeps over every check in the crate, grouped into
//! the `oracles`, `stability` and `lemmas` suites.
//!
//! Random parameters come from the crate's own counter-based streams, so a
//! suite is a pure function of its [`SweepConfig`].

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::{RngStream, SampleRng};
use crate::domain::{canonicalize, params, Direction, Exponent, LemmaId, LemmaVerdict, Relation, VerdictStatus};
use crate::error::Result;
use crate::inequality_lab::{self as lab, CaseTwoConfig, GUARD};
use crate::projections::{estimate_projection_ratio, exact_projection_ratio_2d, ProjectionQuery};
use crate::sections::{
    ball_direction_value, cube_section_fourier, estimate_section_ratio, exact_section_ratio_2d, SectionQuery,
};
use crate::special::{ball_psi, haagerup_f, QuadratureSpec};
use crate::stability::{
    ball_case_constants, ball_constant_verdicts, haagerup_lower_bound, robust_ball_margin, robust_szarek_margin,
    szarek_case_constants, szarek_constant_verdicts, BALL_MC_GUARD, SZAREK_DELTA0, SZAREK_GAMMA0,
};

/// Sizes of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepConfig {
    pub seed: u64,
    /// Monte Carlo samples per sampled verdict.
    pub samples: u64,
    /// Random tuples per deterministic lemma.
    pub tuples: usize,
    /// Random directions per exponent in the sampled lemmas.
    pub directions: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { seed: 0, samples: 1_000_000, tuples: 10_000, directions: 20 }
    }
}

impl SweepConfig {
    /// Small sizes for smoke tests.
    pub fn quick() -> Self {
        SweepConfig { seed: 0, samples: 20_000, tuples: 500, directions: 3 }
    }
}

/// Verdict counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

impl SweepSummary {
    pub fn of(verdicts: &[LemmaVerdict]) -> Self {
        let mut s = SweepSummary { total: verdicts.len(), ..Default::default() };
        for v in verdicts {
            match v.status {
                VerdictStatus::Pass => s.pass += 1,
                VerdictStatus::Fail => s.fail += 1,
                VerdictStatus::Inconclusive => s.inconclusive += 1,
            }
        }
        s
    }

    pub fn inconclusive_rate(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.inconclusive as f64 / self.total as f64
        }
    }
}

/// Canonical directions with integer coordinates in `0..=max` and at most
/// `max_n` nonzero entries, one per ray.
pub fn rational_grid(max_n: usize, max: u32) -> Vec<Direction> {
    fn rec(v: &mut Vec<u32>, len: usize, hi: u32, acc: &mut Vec<Vec<u32>>) {
        if v.len() == len {
            acc.push(v.clone());
            return;
        }
        for x in 0..=hi {
            v.push(x);
            rec(v, len, x, acc);
            v.pop();
        }
    }
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let mut raw = Vec::new();
    rec(&mut Vec::new(), max_n, max, &mut raw);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for r in raw {
        let g = r.iter().copied().fold(0, gcd);
        if g == 0 {
            continue;
        }
        let key: Vec<u32> = r.iter().filter(|&&x| x > 0).map(|&x| x / g).collect();
        if seen.insert(key.clone()) {
            let f: Vec<f64> = key.iter().map(|&x| x as f64).collect();
            out.push(canonicalize(&f).expect("nonzero"));
        }
    }
    out
}

/// `(e₁+e₂)/√2` or one of its zero-padded copies.
pub fn is_extremizer(a: &Direction) -> bool {
    a.active().len() == 2 && a.a1() == a.a2()
}

/// Canonical direction with `min_n..=max_n` coordinates uniform on
/// `[0.01, 1.01)`; one in five has a tie at the top.
pub fn random_direction(rng: &mut SampleRng, min_n: usize, max_n: usize) -> Direction {
    let n = rng.random_range(min_n..=max_n);
    let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 0.01).collect();
    if n >= 2 && rng.random::<f64>() < 0.2 {
        v[1] = v[0];
    }
    canonicalize(&v).expect("positive coordinates")
}

/// Random admissible `(σ, r, b1, b2)` for [`lab::check_p_means_deficit`].
pub fn p_means_tuple(rng: &mut SampleRng) -> (f64, f64, f64, f64) {
    let sigma = 10f64.powf(rng.random_range(-3.0..1.0));
    let r = sigma.max(2.0) * 10f64.powf(rng.random_range(0.0..3.0));
    let b1 = rng.random_range(0.01..=1.0);
    let ratio = rng.random_range((1.0 - sigma / r).max(1e-3)..=1.0);
    (sigma, r, b1, b1 * ratio)
}

/// Random admissible `(c, p, a1, a2)` for [`lab::check_a1a2`], or `None`
/// when the fitted candidate leaves the box `|a_i - 1/√2| <= c/p`.
pub fn a1a2_tuple(rng: &mut SampleRng, p: f64) -> Option<(f64, f64, f64, f64)> {
    let cmax = (p / (4.0 * SQRT_2) * 0.999).min(1e3);
    let c = rng.random_range(1.0..=cmax.max(1.0));
    let w = c / p;
    let x = FRAC_1_SQRT_2 + rng.random_range(-w..=w);
    let y = FRAC_1_SQRT_2 + rng.random_range(-w..=w);
    let (a1, a2) = lab::fit_a1a2(p, x, y);
    let ok = (a1 - FRAC_1_SQRT_2).abs() <= w && (a2 - FRAC_1_SQRT_2).abs() <= w && a2 > 0.0;
    ok.then_some((c, p, a1, a2))
}

fn collect(items: Vec<Result<LemmaVerdict>>) -> Result<Vec<LemmaVerdict>> {
    items.into_iter().collect()
}

fn oracle_band(
    lemma: LemmaId,
    pars: std::collections::BTreeMap<String, f64>,
    mean: f64,
    se: f64,
    exact: f64,
) -> LemmaVerdict {
    let mut v = LemmaVerdict::within_tolerance(lemma, pars, mean, exact, (4.0 * se).max(1e-3));
    v.lhs_std_error = se;
    v
}

/// `n = 2` estimates against `1/‖a‖_p` (sections) or `‖a‖_{q/(q-1)}`
/// (projections) at 50 random parameter points.
pub fn plane_oracles(cfg: &SweepConfig, proj: bool) -> Result<Vec<LemmaVerdict>> {
    let stream = RngStream::new(cfg.seed).substream(1 + u64::from(proj));
    let one = |i: u64| -> Result<LemmaVerdict> {
        let mut r = stream.at(i);
        let a = canonicalize(&[r.random::<f64>() + 0.05, r.random::<f64>()])?;
        let seed = cfg.seed.wrapping_add(1000 + i);
        if proj {
            let q = Exponent::new(r.random_range(1.0..=2.0))?;
            let est = estimate_projection_ratio(&ProjectionQuery::new(a.clone(), q, cfg.samples, seed))?;
            let exact = exact_projection_ratio_2d(&a, q)?;
            let pars = params([("q", q.value()), ("a1", a.a1()), ("a2", a.a2())]);
            Ok(oracle_band(LemmaId::ProjectionOracle2d, pars, est.mean, est.std_error, exact))
        } else {
            let p = Exponent::new(r.random_range(1.0..30.0))?;
            let est = estimate_section_ratio(&SectionQuery::new(a.clone(), p, cfg.samples, seed))?;
            let exact = exact_section_ratio_2d(&a, p)?;
            let pars = params([("p", p.value()), ("a1", a.a1()), ("a2", a.a2())]);
            Ok(oracle_band(LemmaId::SectionOracle2d, pars, est.mean, est.std_error, exact))
        }
    };
    collect((0..50).map(one).collect())
}

/// `A_{n,p}((e₁+e₂)/√2) = 2^{1/2-1/p}` for `p ∈ {1, 2, 4, 10, ∞}`.
pub fn ball_direction_oracles(cfg: &SweepConfig) -> Result<Vec<LemmaVerdict>> {
    let mut out = Vec::new();
    for (i, p) in [1.0, 2.0, 4.0, 10.0, f64::INFINITY].into_iter().enumerate() {
        let p = Exponent::new(p)?;
        let q = SectionQuery::new(Direction::extremizer(2), p, cfg.samples, cfg.seed.wrapping_add(i as u64));
        let est = estimate_section_ratio(&q)?;
        out.push(LemmaVerdict::statistical(
            LemmaId::BallDirectionValue,
            params([("p", p.value())]),
            est.mean,
            // p = ∞ is exact up to rounding
            est.std_error.max(1e-12),
            ball_direction_value(p),
            Relation::Equal,
            4.0,
        ));
    }
    Ok(out)
}

/// Sampled cube sections against the Fourier oracle for 20 random
/// directions with `3..=6` coordinates, plus the regular hexagon.
pub fn cube_oracles(cfg: &SweepConfig) -> Result<Vec<LemmaVerdict>> {
    let stream = RngStream::new(cfg.seed).substream(3);
    let mut out = Vec::new();
    for i in 0..20 {
        let a = random_direction(&mut stream.at(i), 3, 6);
        let f = cube_section_fourier(&a)?;
        let q = SectionQuery::new(a.clone(), Exponent::Infinite, cfg.samples, cfg.seed.wrapping_add(2000 + i));
        let est = estimate_section_ratio(&q)?;
        let pars = params([("n", a.dim() as f64), ("a1", a.a1())]);
        out.push(LemmaVerdict::statistical(
            LemmaId::CubeFourierOracle,
            pars,
            est.mean,
            est.std_error,
            f,
            Relation::Equal,
            4.0,
        ));
    }
    let hex = cube_section_fourier(&Direction::diagonal(3))?;
    out.push(
        LemmaVerdict::within_tolerance(LemmaId::CubeFourierOracle, params([("n", 3.0)]), hex, 0.75 * 3f64.sqrt(), 1e-6)
            .labeled("hexagon"),
    );
    Ok(out)
}

/// Closed-form and quadrature oracles against the Monte Carlo estimators.
pub fn oracle_suite(cfg: &SweepConfig) -> Result<Vec<LemmaVerdict>> {
    let mut out = plane_oracles(cfg, false)?;
    out.extend(plane_oracles(cfg, true)?);
    out.extend(ball_direction_oracles(cfg)?);
    out.extend(cube_oracles(cfg)?);
    out.extend(special_function_verdicts()?);
    Ok(out)
}

/// `F(2) = 1/√2`, `Ψ(2) = √2`, and `Ψ <= √(6/π)` on `[9/4, 1000]`.
pub fn special_function_verdicts() -> Result<Vec<LemmaVerdict>> {
    let spec = QuadratureSpec::default();
    let mut out = vec![
        LemmaVerdict::within_tolerance(
            LemmaId::HaagerupBound,
            params([("s", 2.0)]),
            haagerup_f(2.0)?,
            FRAC_1_SQRT_2,
            1e-12,
        )
        .labeled("F(2)"),
        LemmaVerdict::within_tolerance(LemmaId::PsiBound, params([("s", 2.0)]), ball_psi(2.0, spec)?, SQRT_2, 1e-8)
            .labeled("Psi(2)"),
    ];
    let cap = (6.0 / PI).sqrt() + 1e-9;
    let grid: Vec<f64> = (0..=200).map(|i| 2.25 * (1000.0f64 / 2.25).powf(i as f64 / 200.0)).collect();
    let psi: Vec<Result<LemmaVerdict>> = grid
        .par_iter()
        .map(|&s| {
            Ok(LemmaVerdict::deterministic(
                LemmaId::PsiBound,
                params([("s", s)]),
                ball_psi(s, spec)?,
                cap,
                Relation::AtMost,
            ))
        })
        .collect();
    out.extend(collect(psi)?);
    Ok(out)
}

/// Robust inequalities on the exhaustive rational grid, the Haagerup
/// bound, and the recomputed constants.
pub fn stability_suite(cfg: &SweepConfig) -> Result<Vec<LemmaVerdict>> {
    let grid = rational_grid(6, 6);
    let mut out = Vec::new();
    for a in grid.iter().filter(|a| !is_extremizer(a)) {
        let r = robust_szarek_margin(a)?;
        let pars = params([("n", a.dim() as f64), ("delta", r.deficit)]);
        out.push(LemmaVerdict::deterministic(
            LemmaId::RobustSzarek,
            pars,
            r.functional_value,
            r.bound,
            Relation::AtLeast,
        ));
    }
    let ball: Vec<Result<LemmaVerdict>> = grid
        .par_iter()
        .enumerate()
        .map(|(i, a)| {
            let r = robust_ball_margin(a, cfg.samples, cfg.seed.wrapping_add(i as u64))?;
            let pars = params([("n", a.dim() as f64), ("delta", r.deficit)]);
            // quadrature tolerance of the Fourier oracle
            let bound = r.bound + 1e-8;
            Ok(if r.std_error > 0.0 {
                LemmaVerdict::statistical(
                    LemmaId::RobustBall,
                    pars,
                    r.functional_value,
                    r.std_error,
                    bound,
                    Relation::AtMost,
                    BALL_MC_GUARD,
                )
            } else {
                LemmaVerdict::deterministic(LemmaId::RobustBall, pars, r.functional_value, bound, Relation::AtMost)
            })
        })
        .collect();
    out.extend(collect(ball)?);

    let stream = RngStream::new(cfg.seed).substream(4);
    for i in 0..200 {
        let a = random_direction(&mut stream.at(i), 2, 10);
        let k = crate::projections::khinchin_exact(&a, crate::projections::MAX_ENUM_N)?;
        let pars = params([("n", a.dim() as f64)]);
        out.push(LemmaVerdict::deterministic(
            LemmaId::HaagerupBound,
            pars,
            k,
            haagerup_lower_bound(&a),
            Relation::AtLeast,
        ));
    }

    out.extend(szarek_constant_verdicts(&szarek_case_constants(SZAREK_DELTA0, SZAREK_GAMMA0)?));
    out.extend(ball_constant_verdicts(&ball_case_constants()));
    Ok(out)
}

/// Section- and projection-side near-extremizer settings of the goal sweeps:
/// `(exponent, c, L)`.
pub const SECTION_GOAL_SETTINGS: [(f64, f64, f64); 2] = [(1e4, 50.0, 100.0), (1e6, 1000.0, 100.0)];
pub const PROJECTION_GOAL_SETTINGS: [(f64, f64, f64); 2] =
    [(1.0 + 1e-5, 500.0, 100.0), (1.0 + 1e-7, (5.0 - SQRT_2) / 8.0 * 1e5, 100.0)];

/// Every auxiliary lemma over its designed sweep.
pub fn lemma_suite(cfg: &SweepConfig) -> Result<Vec<LemmaVerdict>> {
    let mut out = Vec::new();
    for p in [5.01, 10.0, 1e2, 1e3, 1e4, 1e6] {
        out.push(lab::check_R_L2(p)?);
    }
    for q in [1.0 + 1e-6, 1.001, 1.01, 1.1, 1.3, 1.5, 1.7, 1.9, 1.99] {
        out.push(lab::check_coupling(q)?);
    }
    let base = RngStream::new(cfg.seed);
    let pm = base.substream(10);
    for i in 0..cfg.tuples as u64 {
        let (s, r, b1, b2) = p_means_tuple(&mut pm.at(i));
        out.push(lab::check_p_means_deficit(s, r, b1, b2)?);
    }
    let spread = base.substream(11);
    let exps = [50.0, 1e3, 1e6];
    let (mut made, mut i) = (0usize, 0u64);
    while made < cfg.tuples && i < 20 * cfg.tuples as u64 + 20 {
        let p = exps[(i % 3) as usize];
        if let Some((c, p, a1, a2)) = a1a2_tuple(&mut spread.at(i), p) {
            out.push(lab::check_a1a2(c, p, a1, a2)?);
            made += 1;
        }
        i += 1;
    }

    for p in [6.0, 10.0, 100.0, 1e6] {
        out.push(lab::check_uniform_under_section(p, 200)?);
    }
    for q in [1.01, 1.1, 1.3, 1.49] {
        out.push(lab::check_uniform_under_projection(q, 200)?);
    }
    for p in [1e7, 1e9, f64::INFINITY] {
        out.push(lab::cp_bounds_check(Exponent::new(p)?)?);
    }
    for q in [1.0 + 1e-6, 1.0 + 1e-9] {
        out.push(lab::cq_bounds_check(q)?);
    }

    let dirs = base.substream(12);
    let mut jobs = Vec::new();
    for (k, p) in [10.0, 50.0, 100.0].into_iter().enumerate() {
        for j in 0..cfg.directions as u64 {
            jobs.push((false, p, random_direction(&mut dirs.at(k as u64 * 1000 + j), 3, 8), j));
        }
    }
    for (k, q) in [1.05, 1.2, 1.4].into_iter().enumerate() {
        for j in 0..cfg.directions as u64 {
            jobs.push((true, q, random_direction(&mut dirs.at(10_000 + k as u64 * 1000 + j), 3, 8), j));
        }
    }
    let equi: Vec<Result<LemmaVerdict>> = jobs
        .par_iter()
        .map(|(proj, e, a, j)| {
            let seed = cfg.seed.wrapping_add(5000 + j);
            if *proj {
                lab::check_equicontinuity_projections(a, *e, cfg.samples, seed)
            } else {
                lab::check_equicontinuity_sections(a, *e, cfg.samples, seed)
            }
        })
        .collect();
    out.extend(collect(equi)?);

    for p in [1e2, 1e4] {
        let alpha_max = 1.2 / 10.0;
        for alpha in [1e-5, 1e-4, 1e-3, 1e-2, alpha_max] {
            out.push(lab::check_radii_event(p, alpha, cfg.samples, cfg.seed + 7, GUARD)?);
        }
    }
    for alpha in [1e-5, 1e-3, 0.1] {
        out.push(lab::check_factor_event(1.0 + 1e-4, alpha, cfg.samples, cfg.seed + 8, GUARD)?);
    }
    for (a1, a2, alpha) in [(0.7, 0.69, 0.1), (0.72, 0.70, 0.2), (0.5, 0.4, 0.8)] {
        out.push(lab::check_two_atom_small_ball(a1, a2, alpha / 4.0, cfg.samples, cfg.seed + 9, GUARD)?);
    }

    out.extend(goal_sweep(cfg)?);
    Ok(out)
}

/// The two goal inequalities over near-extremizer directions `(a1, a2, t, t)`.
pub fn goal_sweep(cfg: &SweepConfig) -> Result<Vec<LemmaVerdict>> {
    let mut jobs = Vec::new();
    for (k, &(p, c, l)) in SECTION_GOAL_SETTINGS.iter().enumerate() {
        for a in lab::case_two_directions(p, c, cfg.directions, cfg.seed + k as u64) {
            jobs.push(CaseTwoConfig::section(p, c, l, a)?);
        }
    }
    for (k, &(q, c, l)) in PROJECTION_GOAL_SETTINGS.iter().enumerate() {
        let p = q / (q - 1.0);
        for a in lab::case_two_directions(p, c, cfg.directions, cfg.seed + 10 + k as u64) {
            jobs.push(CaseTwoConfig::projection(q, c, l, a)?);
        }
    }
    let res: Vec<Result<LemmaVerdict>> = jobs
        .par_iter()
        .enumerate()
        .map(|(i, job)| {
            let seed = cfg.seed.wrapping_add(9000 + i as u64);
            match job.side {
                lab::Side::Section => lab::check_prop_main_section(job, cfg.samples, seed, GUARD),
                lab::Side::Projection => lab::check_prop_main_projection(job, cfg.samples, seed, GUARD),
            }
        })
        .collect();
    collect(res)
}
