//! Numerical checks of the auxiliary inequalities behind the near-extremizer
//! case, as three-valued [`LemmaVerdict`]s.
//!
//! Deterministic claims are compared with a [`ROUNDING_TOL`] relative
//! allowance. Sampled claims carry a guard band of `guard` standard errors
//! and may come back inconclusive.

use std::f64::consts::FRAC_1_SQRT_2;

use rand::Rng;

use crate::distributions::{draw_sphere3, sign, ProjectionFactorLaw, RngStream, SectionRadiusLaw};
use crate::domain::{
    deficit, lp_norm, params, Direction, Exponent, LemmaId, LemmaVerdict, MCEstimate, Relation, ROUNDING_TOL,
};
use crate::error::{Error, Result};
use crate::mc::monte_carlo;
use crate::projections::szarek_value;
use crate::sections::exact_section_ratio_2d;
use crate::special::{gamma_pos, gamma_second_difference, gamma_symmetric_difference};

/// Default guard band, in standard errors, of sampled checks.
pub const GUARD: f64 = 4.0;

fn precondition(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(what()))
    }
}

/// Power mean `((b1^r + b2^r)/2)^{1/r}` for `0 < b2 <= b1`, without overflow.
fn power_mean(b1: f64, b2: f64, r: f64) -> f64 {
    b1 * ((1.0 + (b2 / b1).powf(r)) / 2.0).powf(1.0 / r)
}

/// Power-mean deficit: for `σ > 0`, `r >= max(σ, 2)`, `b1, b2 ∈ (0, 1]` and
/// `1 - σ/r <= b2/b1 <= 1`,
/// `M_r(b1, b2) >= (b1+b2)/2 + (r-1)(1-e^{-σ/2})/(4σ) |b1-b2|²`.
pub fn check_p_means_deficit(sigma: f64, r: f64, b1: f64, b2: f64) -> Result<LemmaVerdict> {
    precondition(sigma > 0.0 && sigma.is_finite(), || format!("sigma must be positive, got {sigma}"))?;
    precondition(r >= sigma.max(2.0) && r.is_finite(), || format!("need r >= max(sigma, 2), got r = {r}"))?;
    precondition(b1 > 0.0 && b1 <= 1.0 && b2 > 0.0 && b2 <= 1.0, || {
        format!("b1, b2 must lie in (0, 1], got {b1}, {b2}")
    })?;
    let ratio = b2 / b1;
    precondition(ratio <= 1.0 && ratio >= 1.0 - sigma / r, || {
        format!("need 1 - sigma/r <= b2/b1 <= 1, got b2/b1 = {ratio}")
    })?;
    let lhs = power_mean(b1, b2, r);
    let d = b1 - b2;
    let rhs = (b1 + b2) / 2.0 + (r - 1.0) * (-(-sigma / 2.0).exp_m1()) / (4.0 * sigma) * d * d;
    Ok(LemmaVerdict::deterministic(
        LemmaId::PMeansDeficit,
        params([("sigma", sigma), ("r", r), ("b1", b1), ("b2", b2)]),
        lhs,
        rhs,
        Relation::AtLeast,
    ))
}

/// Spread of the two leading coordinates: for `c >= 1`, `p > 4√2 c`,
/// `0 < a2 <= a1`, `‖(a1, a2)‖_p <= 2^{1/p-1/2}` and `|a_i - 1/√2| <= c/p`,
/// `|a1 - a2| <= 3.65 √(c/(p-2)) √(1 - a1² - a2²)`.
pub fn check_a1a2(c: f64, p: f64, a1: f64, a2: f64) -> Result<LemmaVerdict> {
    precondition(c >= 1.0, || format!("need c >= 1, got {c}"))?;
    precondition(p > 4.0 * std::f64::consts::SQRT_2 * c && p.is_finite(), || {
        format!("need p > 4 sqrt2 c, got p = {p}")
    })?;
    precondition(a2 > 0.0 && a2 <= a1, || format!("need 0 < a2 <= a1, got {a1}, {a2}"))?;
    let cap = (1.0 / p - 0.5).exp2();
    let norm = lp_norm(&[a1, a2], Exponent::Finite(p));
    precondition(norm <= cap * (1.0 + ROUNDING_TOL), || format!("||(a1, a2)||_p = {norm} exceeds {cap}"))?;
    let near = |a: f64| (a - FRAC_1_SQRT_2).abs() <= c / p;
    precondition(near(a1) && near(a2), || format!("a1, a2 must be within c/p of 1/sqrt2, got {a1}, {a2}"))?;
    let rest = (1.0 - a1 * a1 - a2 * a2).max(0.0);
    Ok(LemmaVerdict::deterministic(
        LemmaId::A1A2Spread,
        params([("c", c), ("p", p), ("a1", a1), ("a2", a2)]),
        a1 - a2,
        3.65 * (c / (p - 2.0)).sqrt() * rest.sqrt(),
        Relation::AtMost,
    ))
}

/// Scales `(a1, a2)` down onto the norm cap of [`check_a1a2`] when it lies
/// outside; sorts the pair.
pub fn fit_a1a2(p: f64, a1: f64, a2: f64) -> (f64, f64) {
    let (a1, a2) = if a1 >= a2 { (a1, a2) } else { (a2, a1) };
    let cap = (1.0 / p - 0.5).exp2();
    let norm = lp_norm(&[a1, a2], Exponent::Finite(p));
    if norm <= cap {
        (a1, a2)
    } else {
        let k = cap / norm * (1.0 - 1e-15);
        (a1 * k, a2 * k)
    }
}

/// `E|R-1|² <= 2p⁻²/Γ(1+1/p)` for the section radius law, `p > 5`.
/// `E|R-1|² = h(1/p)/Γ(1+1/p)` with `h(x) = Γ(1+3x) - 2Γ(1+2x) + Γ(1+x)`.
#[allow(non_snake_case)]
pub fn check_R_L2(p: f64) -> Result<LemmaVerdict> {
    precondition(p > 5.0 && p.is_finite(), || format!("need finite p > 5, got {p}"))?;
    let g = gamma_pos(1.0 + 1.0 / p);
    let lhs = gamma_second_difference(1.0 / p)? / g;
    Ok(LemmaVerdict::deterministic(LemmaId::RadiusL2, params([("p", p)]), lhs, 2.0 / (p * p * g), Relation::AtMost))
}

/// `E|X - sgn X|² <= 9(1-1/q)²` for the projection factor law, `1 < q < 2`.
/// The left side is `(Γ(2-1/q) - 2 + Γ(1/q)) / Γ(1/q)`.
pub fn check_coupling(q: f64) -> Result<LemmaVerdict> {
    precondition(q > 1.0 && q < 2.0, || format!("need 1 < q < 2, got {q}"))?;
    let x = 1.0 - 1.0 / q;
    let lhs = gamma_symmetric_difference(x)? / gamma_pos(1.0 - x);
    Ok(LemmaVerdict::deterministic(LemmaId::Coupling, params([("q", q)]), lhs, 9.0 * x * x, Relation::AtMost))
}

/// `|A_{n,p}(a) - A_{n,∞}(a)| <= 5/p` for `p > 5`. Two active coordinates are
/// exact; otherwise both sides share their draws of `ξ_j`, which keeps the
/// difference estimate tight.
pub fn check_equicontinuity_sections(a: &Direction, p: f64, samples: u64, seed: u64) -> Result<LemmaVerdict> {
    precondition(p > 5.0 && p.is_finite(), || format!("need finite p > 5, got {p}"))?;
    let e = Exponent::Finite(p);
    let pars = params([("p", p), ("n", a.dim() as f64)]);
    let active = a.active();
    if active.len() <= 2 {
        let two = Direction::new(&[a.a1(), a.a2().max(0.0)])?;
        let diff = if active.len() == 1 {
            0.0
        } else {
            exact_section_ratio_2d(&two, e)? - exact_section_ratio_2d(&two, Exponent::Infinite)?
        };
        return Ok(LemmaVerdict::deterministic(
            LemmaId::EquicontinuitySections,
            pars,
            diff.abs(),
            5.0 / p,
            Relation::AtMost,
        ));
    }
    if samples == 0 {
        return Err(Error::InvalidInput("sample count must be positive".into()));
    }
    let law = SectionRadiusLaw::new(e);
    let scale = gamma_pos(1.0 + 1.0 / p);
    let est = monte_carlo(samples, RngStream::new(seed), |rng| {
        let mut sp = [0.0; 3];
        let mut si = [0.0; 3];
        for &aj in active {
            let r = law.draw(rng);
            let xi = draw_sphere3(rng);
            for k in 0..3 {
                sp[k] += aj * r * xi[k];
                si[k] += aj * xi[k];
            }
        }
        scale / norm3(sp) - 1.0 / norm3(si)
    });
    Ok(LemmaVerdict::statistical(
        LemmaId::EquicontinuitySections,
        pars,
        est.mean.abs(),
        est.std_error,
        5.0 / p,
        Relation::AtMost,
        GUARD,
    ))
}

/// `|E|Σ a_j X_j| - E|Σ a_j ε_j|| <= 3(1-1/q)` for `1 < q < 2`, with
/// `ε_j = sgn X_j`. The paired difference `|Σ a_j X_j| - |Σ a_j ε_j|` is
/// sampled; it is the exact Rademacher mean used as a control variate.
/// A single coordinate gives `|1/Γ(1/q) - 1|` exactly.
pub fn check_equicontinuity_projections(a: &Direction, q: f64, samples: u64, seed: u64) -> Result<LemmaVerdict> {
    precondition(q > 1.0 && q < 2.0, || format!("need 1 < q < 2, got {q}"))?;
    if samples == 0 {
        return Err(Error::InvalidInput("sample count must be positive".into()));
    }
    let law = ProjectionFactorLaw::new(Exponent::Finite(q))?;
    let active = a.active();
    let pars = params([("q", q), ("n", a.dim() as f64)]);
    if active.len() == 1 {
        let diff = law.moment_abs(1.0)? - 1.0;
        return Ok(LemmaVerdict::deterministic(
            LemmaId::EquicontinuityProjections,
            pars,
            diff.abs(),
            3.0 * (1.0 - 1.0 / q),
            Relation::AtMost,
        ));
    }
    let est = monte_carlo(samples, RngStream::new(seed), |rng| {
        let (mut sx, mut se) = (0.0, 0.0);
        for &aj in active {
            let s = sign(rng);
            let x = law.draw_abs(rng);
            sx += aj * s * x;
            se += aj * s;
        }
        sx.abs() - se.abs()
    });
    Ok(LemmaVerdict::statistical(
        LemmaId::EquicontinuityProjections,
        pars,
        est.mean.abs(),
        est.std_error,
        3.0 * (1.0 - 1.0 / q),
        Relation::AtMost,
        GUARD,
    ))
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// `C_p = 2^{1/2-1/p} / Γ(1+1/p)`, the section constant of the extremizer.
pub fn cp_value(p: Exponent) -> f64 {
    (0.5 - p.recip()).exp2() / gamma_pos(1.0 + p.recip())
}

/// `1.41 < C_p < 1.42` once `1/p < 10⁻⁶`.
pub fn cp_bounds_check(p: Exponent) -> Result<LemmaVerdict> {
    precondition(p.recip() < 1e-6, || format!("need 1/p < 1e-6, got p = {p}"))?;
    Ok(LemmaVerdict::interval(LemmaId::SectionConstantBounds, params([("p", p.value())]), cp_value(p), 1.41, 1.42))
}

/// `0.7 < c_q < 0.71` once `1 - 1/q < 10⁻⁵`.
pub fn cq_bounds_check(q: f64) -> Result<LemmaVerdict> {
    precondition(q >= 1.0 && 1.0 - 1.0 / q < 1e-5, || format!("need 1 <= q and 1 - 1/q < 1e-5, got {q}"))?;
    let c = szarek_value(Exponent::Finite(q))?;
    Ok(LemmaVerdict::interval(LemmaId::ProjectionConstantBounds, params([("q", q)]), c, 0.7, 0.71))
}

/// Which body the near-extremizer setting lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Section,
    Projection,
}

/// Hypotheses of the near-extremizer case: a direction with
/// `√δ(a) < c/p`, `p > Lc + 2`, and `‖(a1, a2)‖_p <= 2^{1/p-1/2}`.
/// On the projection side `p = q/(q-1)`.
#[derive(Debug, Clone)]
pub struct CaseTwoConfig {
    pub side: Side,
    /// `p` for sections, `q` for projections.
    pub exponent: f64,
    pub c: f64,
    pub l: f64,
    pub a: Direction,
    /// The scale `α` of the goal inequality.
    pub alpha: f64,
}

impl CaseTwoConfig {
    /// Section side; additionally requires `L >= 100`.
    pub fn section(p: f64, c: f64, l: f64, a: Direction) -> Result<Self> {
        precondition(l >= 100.0, || format!("need L >= 100, got {l}"))?;
        Self::validate(p, c, l, &a)?;
        let alpha = a.tail_mass().sqrt() / cp_value(Exponent::Finite(p));
        Ok(CaseTwoConfig { side: Side::Section, exponent: p, c, l, a, alpha })
    }

    pub fn projection(q: f64, c: f64, l: f64, a: Direction) -> Result<Self> {
        precondition(q > 1.0 && q < 2.0, || format!("need 1 < q < 2, got {q}"))?;
        let p = q / (q - 1.0);
        Self::validate(p, c, l, &a)?;
        let alpha = szarek_value(Exponent::Finite(q))? * a.tail_mass().sqrt();
        Ok(CaseTwoConfig { side: Side::Projection, exponent: q, c, l, a, alpha })
    }

    fn validate(p: f64, c: f64, l: f64, a: &Direction) -> Result<()> {
        precondition(c >= 1.0 && l > 0.0, || format!("need c >= 1 and L > 0, got c = {c}, L = {l}"))?;
        precondition(p.is_finite() && p > l * c + 2.0, || format!("need p > Lc + 2, got p = {p}"))?;
        precondition(a.dim() >= 2, || "need at least two coordinates".into())?;
        let d = deficit(a);
        precondition(d.sqrt() < c / p, || format!("need sqrt(delta) < c/p, got delta = {d}"))?;
        let cap = (1.0 / p - 0.5).exp2();
        let norm = lp_norm(&[a.a1(), a.a2()], Exponent::Finite(p));
        precondition(norm <= cap * (1.0 + ROUNDING_TOL), || format!("||(a1, a2)||_p = {norm} exceeds {cap}"))
    }

    /// The `p` of the hypotheses on either side.
    pub fn p(&self) -> f64 {
        match self.side {
            Side::Section => self.exponent,
            Side::Projection => self.exponent / (self.exponent - 1.0),
        }
    }

    fn params(&self) -> std::collections::BTreeMap<String, f64> {
        let name = if self.side == Side::Section { "p" } else { "q" };
        params([
            (name, self.exponent),
            ("c", self.c),
            ("L", self.l),
            ("a1", self.a.a1()),
            ("a2", self.a.a2()),
            ("alpha", self.alpha),
            ("delta", deficit(&self.a)),
        ])
    }
}

/// `E(|X|⁻¹ - α⁻¹)₊ >= (3/2)α²` for `X = a1 R1 ξ1 + a2 R2 ξ2`.
///
/// Given the radii, `|X|²` is uniform between `(x-y)²` and `(x+y)²` with
/// `x = a1 R1`, `y = a2 R2`, so the inner expectation is integrated in
/// closed form and only the radii are sampled.
pub fn check_prop_main_section(cfg: &CaseTwoConfig, samples: u64, seed: u64, guard: f64) -> Result<LemmaVerdict> {
    precondition(cfg.side == Side::Section, || "configuration is for projections".into())?;
    let est = section_goal_lhs(cfg, samples, seed)?;
    Ok(LemmaVerdict::statistical(
        LemmaId::SectionGoal,
        cfg.params(),
        est.mean,
        est.std_error,
        1.5 * cfg.alpha * cfg.alpha,
        Relation::AtLeast,
        guard,
    ))
}

/// Sampled `E(|X|⁻¹ - α⁻¹)₊` of [`check_prop_main_section`].
pub fn section_goal_lhs(cfg: &CaseTwoConfig, samples: u64, seed: u64) -> Result<MCEstimate> {
    if samples == 0 {
        return Err(Error::InvalidInput("sample count must be positive".into()));
    }
    let law = SectionRadiusLaw::new(Exponent::Finite(cfg.exponent));
    let (a1, a2, alpha) = (cfg.a.a1(), cfg.a.a2(), cfg.alpha);
    if alpha <= 0.0 {
        return Ok(MCEstimate::exact(0.0, samples));
    }
    Ok(monte_carlo(samples, RngStream::new(seed), |rng| {
        let x = a1 * law.draw(rng);
        let y = a2 * law.draw(rng);
        conditional_inverse_excess(x, y, alpha)
    }))
}

/// `E(1/r - 1/α)₊` where `r² = x² + y² + 2xyU`, `U` uniform on `[-1, 1]`.
fn conditional_inverse_excess(x: f64, y: f64, alpha: f64) -> f64 {
    let d = (x - y).abs();
    if d >= alpha {
        return 0.0;
    }
    let m = (x + y).min(alpha);
    ((m - d) - (m * m - d * d) / (2.0 * alpha)) / (2.0 * x * y)
}

/// `E(α - |X|)₊ >= (3/4)α²` for `X = a1 X1 + a2 X2`. The two sign patterns
/// are averaged exactly.
pub fn check_prop_main_projection(cfg: &CaseTwoConfig, samples: u64, seed: u64, guard: f64) -> Result<LemmaVerdict> {
    precondition(cfg.side == Side::Projection, || "configuration is for sections".into())?;
    let est = projection_goal_lhs(cfg, samples, seed)?;
    Ok(LemmaVerdict::statistical(
        LemmaId::ProjectionGoal,
        cfg.params(),
        est.mean,
        est.std_error,
        0.75 * cfg.alpha * cfg.alpha,
        Relation::AtLeast,
        guard,
    ))
}

/// Sampled `E(α - |X|)₊` of [`check_prop_main_projection`].
pub fn projection_goal_lhs(cfg: &CaseTwoConfig, samples: u64, seed: u64) -> Result<MCEstimate> {
    if samples == 0 {
        return Err(Error::InvalidInput("sample count must be positive".into()));
    }
    let law = ProjectionFactorLaw::new(Exponent::Finite(cfg.exponent))?;
    let (a1, a2, alpha) = (cfg.a.a1(), cfg.a.a2(), cfg.alpha);
    Ok(monte_carlo(samples, RngStream::new(seed), |rng| {
        let x = a1 * law.draw_abs(rng);
        let y = a2 * law.draw_abs(rng);
        0.5 * ((alpha - (x + y)).max(0.0) + (alpha - (x - y).abs()).max(0.0))
    }))
}

/// `P{R1 <= 1, |R1 - R2| < α}` for two independent section radii.
pub fn radii_event_probability(p: f64, alpha: f64, samples: u64, seed: u64) -> Result<MCEstimate> {
    precondition(p > 1.0 && p.is_finite(), || format!("need finite p > 1, got {p}"))?;
    let law = SectionRadiusLaw::new(Exponent::Finite(p));
    Ok(monte_carlo(samples.max(1), RngStream::new(seed), |rng| {
        let r1 = law.draw(rng);
        let r2 = law.draw(rng);
        f64::from(u8::from(r1 <= 1.0 && (r1 - r2).abs() < alpha))
    }))
}

/// `P{R1 <= 1, |R1 - R2| < α} >= min(1/64, pα/32)`.
pub fn check_radii_event(p: f64, alpha: f64, samples: u64, seed: u64, guard: f64) -> Result<LemmaVerdict> {
    precondition(alpha > 0.0, || format!("need alpha > 0, got {alpha}"))?;
    let est = radii_event_probability(p, alpha, samples, seed)?;
    Ok(LemmaVerdict::statistical(
        LemmaId::RadiiEventProbability,
        params([("p", p), ("alpha", alpha)]),
        est.mean,
        est.std_error,
        (1.0 / 64.0f64).min(p * alpha / 32.0),
        Relation::AtLeast,
        guard,
    )
    .labeled("section"))
}

/// Projection analogue with `|X1|, |X2|` and `p = q/(q-1)`:
/// `P{|X1| <= 1, ||X1| - |X2|| < α} >= min(1/64, pα/32)`.
pub fn check_factor_event(q: f64, alpha: f64, samples: u64, seed: u64, guard: f64) -> Result<LemmaVerdict> {
    precondition(q > 1.0 && q < 2.0, || format!("need 1 < q < 2, got {q}"))?;
    precondition(alpha > 0.0, || format!("need alpha > 0, got {alpha}"))?;
    let law = ProjectionFactorLaw::new(Exponent::Finite(q))?;
    let est = monte_carlo(samples.max(1), RngStream::new(seed), |rng| {
        let x1 = law.draw_abs(rng);
        let x2 = law.draw_abs(rng);
        f64::from(u8::from(x1 <= 1.0 && (x1 - x2).abs() < alpha))
    });
    let p = q / (q - 1.0);
    Ok(LemmaVerdict::statistical(
        LemmaId::RadiiEventProbability,
        params([("q", q), ("alpha", alpha)]),
        est.mean,
        est.std_error,
        (1.0 / 64.0f64).min(p * alpha / 32.0),
        Relation::AtLeast,
        guard,
    )
    .labeled("projection"))
}

/// `P{|a1ξ1 + a2ξ2| < r}` in closed form; the uniform inner product makes
/// `|a1ξ1 + a2ξ2|²` uniform on `[(a1-a2)², (a1+a2)²]`.
pub fn two_atom_small_ball(a1: f64, a2: f64, r: f64) -> Result<f64> {
    precondition(a1 > 0.0 && a2 > 0.0 && r >= 0.0, || format!("need a1, a2 > 0 and r >= 0, got {a1}, {a2}, {r}"))?;
    let lo = (a1 - a2) * (a1 - a2);
    let hi = (a1 + a2) * (a1 + a2);
    Ok(((r * r).clamp(lo, hi) - lo) / (4.0 * a1 * a2))
}

/// Sampled small-ball probability against [`two_atom_small_ball`].
pub fn check_two_atom_small_ball(
    a1: f64,
    a2: f64,
    r: f64,
    samples: u64,
    seed: u64,
    guard: f64,
) -> Result<LemmaVerdict> {
    let exact = two_atom_small_ball(a1, a2, r)?;
    let est = monte_carlo(samples.max(1), RngStream::new(seed), |rng| {
        let u = draw_sphere3(rng);
        let v = draw_sphere3(rng);
        let s = [a1 * u[0] + a2 * v[0], a1 * u[1] + a2 * v[1], a1 * u[2] + a2 * v[2]];
        f64::from(u8::from(norm3(s) < r))
    });
    Ok(LemmaVerdict::statistical(
        LemmaId::TwoAtomSmallBall,
        params([("a1", a1), ("a2", a2), ("r", r)]),
        est.mean,
        // a degenerate indicator still gets one rounding unit of band
        est.std_error.max(ROUNDING_TOL),
        exact,
        Relation::Equal,
        guard,
    ))
}

/// `g_p >= p/4` on `[1 - 1/(2p), 1]`, checked on `points` grid nodes.
pub fn check_uniform_under_section(p: f64, points: usize) -> Result<LemmaVerdict> {
    precondition(p > 1.0 && p.is_finite(), || format!("need finite p > 1, got {p}"))?;
    let law = SectionRadiusLaw::new(Exponent::Finite(p));
    let lo = 1.0 - 0.5 / p;
    let min = grid_min(lo, 1.0, points, |x| law.density(x));
    Ok(LemmaVerdict::deterministic(LemmaId::UniformUnderSection, params([("p", p)]), min, p / 4.0, Relation::AtLeast))
}

/// `f_q >= 1/(4(q-1))` on `[1 - (q-1)/2, 1]`.
pub fn check_uniform_under_projection(q: f64, points: usize) -> Result<LemmaVerdict> {
    precondition(q > 1.0 && q < 2.0, || format!("need 1 < q < 2, got {q}"))?;
    let law = ProjectionFactorLaw::new(Exponent::Finite(q))?;
    let lo = 1.0 - (q - 1.0) / 2.0;
    let min = grid_min(lo, 1.0, points, |x| law.density_abs(x));
    Ok(LemmaVerdict::deterministic(
        LemmaId::UniformUnderProjection,
        params([("q", q)]),
        min,
        0.25 / (q - 1.0),
        Relation::AtLeast,
    ))
}

fn grid_min(lo: f64, hi: f64, points: usize, f: impl Fn(f64) -> f64) -> f64 {
    let k = points.max(2);
    (0..k).map(|i| f(lo + (hi - lo) * i as f64 / (k - 1) as f64)).fold(f64::INFINITY, f64::min)
}

/// Admissible near-extremizer directions `(a1, a2, t, t)` for the sweeps.
///
/// The tail mass `ε = 2t²` runs log-uniformly below the `√δ < c/p` cap and
/// the spread `a1 - a2` up to the largest value the spread lemma allows.
/// Candidates violating a hypothesis are skipped.
pub fn case_two_directions(p: f64, c: f64, count: usize, seed: u64) -> Vec<Direction> {
    let stream = RngStream::new(seed).substream(0x5eed);
    let cap = (c / p).powi(2);
    let mut out = Vec::with_capacity(count);
    let mut i = 0u64;
    while out.len() < count && i < 100 * count as u64 + 100 {
        let mut rng = stream.at(i);
        i += 1;
        let eps = cap * (1e-3f64).powf(rng.random::<f64>()) * 0.99;
        let spread = if i % 4 == 1 { 0.0 } else { rng.random::<f64>() * 3.65 * (c / (p - 2.0)).sqrt() * eps.sqrt() };
        let s2 = 1.0 - eps;
        // a1² + a2² = s2, a1 - a2 = spread
        let sum = (2.0 * s2 - spread * spread).sqrt();
        let (a1, a2) = ((sum + spread) / 2.0, (sum - spread) / 2.0);
        let t = (eps / 2.0).sqrt();
        let Ok(a) = Direction::new(&[a1, a2, t, t]) else { continue };
        let d = deficit(&a);
        let norm = lp_norm(&[a.a1(), a.a2()], Exponent::Finite(p));
        if d.sqrt() < c / p && norm <= (1.0 / p - 0.5).exp2() {
            out.push(a);
        }
    }
    out
}
