//! Value types shared by every module: exponents, canonical directions,
//! Monte Carlo estimates, stability reports and lemma verdicts.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// An exponent `p` (or `q`) in `[1, ∞]`. Infinity is its own variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub const ONE: Exponent = Exponent::Finite(1.0);
    pub const TWO: Exponent = Exponent::Finite(2.0);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value < 1.0 {
            return Err(Error::InvalidInput(format!("exponent must be >= 1, got {value}")));
        }
        if value.is_infinite() {
            Ok(Exponent::Infinite)
        } else {
            Ok(Exponent::Finite(value))
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    /// The exponent as a float, `f64::INFINITY` for the cube case.
    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(v) => v,
            Exponent::Infinite => f64::INFINITY,
        }
    }

    /// `1/p`, exactly zero for `p = ∞`.
    pub fn recip(self) -> f64 {
        match self {
            Exponent::Finite(v) => 1.0 / v,
            Exponent::Infinite => 0.0,
        }
    }

    /// Conjugate exponent `p/(p-1)`.
    pub fn dual(self) -> Exponent {
        match self {
            Exponent::Infinite => Exponent::ONE,
            Exponent::Finite(1.0) => Exponent::Infinite,
            Exponent::Finite(v) => Exponent::Finite(v / (v - 1.0)),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(v) => write!(f, "{v}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinite),
            other => {
                let v: f64 = other.parse().map_err(|_| Error::InvalidInput(format!("cannot parse exponent {s:?}")))?;
                Exponent::new(v)
            }
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(v) => serializer.serialize_f64(*v),
            Exponent::Infinite => serializer.serialize_str("inf"),
        }
    }
}

/// A unit vector in canonical form: nonnegative coordinates sorted in
/// descending order. Every functional in this crate is invariant under
/// coordinate permutations and sign changes, so nothing is lost.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Direction {
    coords: Vec<f64>,
}

impl Direction {
    /// Normalizes and canonicalizes an arbitrary nonzero vector.
    pub fn new(raw: &[f64]) -> Result<Self> {
        canonicalize(raw)
    }

    /// `(e_1 + e_2)/√2` padded with zeros to dimension `n >= 2`.
    pub fn extremizer(n: usize) -> Self {
        assert!(n >= 2, "extremizer needs n >= 2");
        let mut coords = vec![0.0; n];
        coords[0] = std::f64::consts::FRAC_1_SQRT_2;
        coords[1] = std::f64::consts::FRAC_1_SQRT_2;
        Direction { coords }
    }

    pub fn basis(n: usize) -> Self {
        assert!(n >= 1);
        let mut coords = vec![0.0; n];
        coords[0] = 1.0;
        Direction { coords }
    }

    /// `(1, …, 1)/√n`.
    pub fn diagonal(n: usize) -> Self {
        assert!(n >= 1);
        Direction { coords: vec![1.0 / (n as f64).sqrt(); n] }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Nonzero prefix of the coordinates.
    pub fn active(&self) -> &[f64] {
        let m = self.coords.iter().take_while(|&&x| x > 0.0).count();
        &self.coords[..m]
    }

    pub fn a1(&self) -> f64 {
        self.coords[0]
    }

    pub fn a2(&self) -> f64 {
        self.coords.get(1).copied().unwrap_or(0.0)
    }

    /// `1 - a_1² - a_2²`, the mass carried by the tail coordinates.
    pub fn tail_mass(&self) -> f64 {
        self.coords.iter().skip(2).map(|x| x * x).sum()
    }

    pub fn norm(&self, p: Exponent) -> f64 {
        lp_norm(&self.coords, p)
    }
}

/// `‖x‖_p` computed with scaling by the largest entry so that huge `p`
/// neither overflows nor underflows.
pub fn lp_norm(x: &[f64], p: Exponent) -> f64 {
    let max = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if max == 0.0 {
        return 0.0;
    }
    match p {
        Exponent::Infinite => max,
        Exponent::Finite(p) => {
            let s: f64 = x.iter().map(|v| (v.abs() / max).powf(p)).sum();
            max * s.powf(1.0 / p)
        }
    }
}

/// Normalizes `raw` to unit Euclidean length, takes absolute values and
/// sorts descending.
pub fn canonicalize(raw: &[f64]) -> Result<Direction> {
    if raw.is_empty() {
        return Err(Error::InvalidInput("direction must have at least one coordinate".into()));
    }
    if raw.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("direction coordinates must be finite".into()));
    }
    // sort before normalizing so permuted inputs give bit-identical output
    let mut coords: Vec<f64> = raw.iter().map(|x| x.abs()).collect();
    coords.sort_by(|a, b| b.total_cmp(a));
    let norm = lp_norm(&coords, Exponent::TWO);
    if norm == 0.0 {
        return Err(Error::InvalidInput("direction must be nonzero".into()));
    }
    coords.iter_mut().for_each(|x| *x /= norm);
    Ok(Direction { coords })
}

/// Squared distance from `a` to `(e_1 + e_2)/√2`, which equals
/// `2 - √2 (a_1 + a_2)` for canonical unit `a`. The sum-of-squares form is
/// used because it does not cancel near the extremizer.
pub fn deficit(a: &Direction) -> f64 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let d1 = a.a1() - h;
    let d2 = a.a2() - h;
    d1 * d1 + d2 * d2 + a.tail_mass()
}

/// A Monte Carlo result together with its sampling uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MCEstimate {
    pub mean: f64,
    /// Sample standard deviation divided by `√samples`.
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
    /// Set when a single sample dominates the empirical variance, which
    /// signals an infinite-variance integrand.
    pub heavy_tail: bool,
}

impl MCEstimate {
    /// A deterministic value dressed as an estimate with zero error.
    pub fn exact(value: f64, samples: u64) -> Self {
        MCEstimate { mean: value, std_error: 0.0, samples, seed: 0, heavy_tail: false }
    }

    /// `|mean - target| <= k * std_error`, plus rounding slack so that
    /// zero-variance estimates of exact values still match.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error + ROUNDING_TOL * target.abs().max(1.0)
    }

    pub fn scaled(self, factor: f64) -> Self {
        MCEstimate { mean: self.mean * factor, std_error: self.std_error * factor.abs(), ..self }
    }
}

/// Outcome of a deficit-strengthened inequality at one direction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub direction: Direction,
    pub deficit: f64,
    pub functional_value: f64,
    pub bound: f64,
    /// Guaranteed-side difference; nonnegative when the inequality holds.
    pub margin: f64,
    /// Zero when `functional_value` is exact.
    pub std_error: f64,
}

impl StabilityReport {
    /// Violation test: deterministic values get an absolute tolerance,
    /// sampled values a guard band of `guard` standard errors.
    pub fn violated(&self, abs_tol: f64, guard: f64) -> bool {
        self.margin < -(abs_tol + guard * self.std_error)
    }
}

/// Every claim this crate can check numerically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaId {
    PMeansDeficit,
    A1A2Spread,
    RadiusL2,
    Coupling,
    EquicontinuitySections,
    EquicontinuityProjections,
    SectionGoal,
    ProjectionGoal,
    SectionConstantBounds,
    ProjectionConstantBounds,
    RadiiEventProbability,
    TwoAtomSmallBall,
    UniformUnderSection,
    UniformUnderProjection,
    RobustSzarek,
    RobustBall,
    HaagerupBound,
    SzarekConstants,
    BallConstants,
    PsiBound,
    SectionOracle2d,
    ProjectionOracle2d,
    CubeFourierOracle,
    BallDirectionValue,
}

impl LemmaId {
    /// The inequality or identity being checked, in plain notation.
    pub fn claim(self) -> &'static str {
        use LemmaId::*;
        match self {
            PMeansDeficit => "M_r(b1,b2) >= (b1+b2)/2 + (r-1)(1-e^{-sigma/2})/(4 sigma) |b1-b2|^2",
            A1A2Spread => "|a1-a2| <= 3.65 sqrt(c/(p-2)) sqrt(1-a1^2-a2^2)",
            RadiusL2 => "E|R-1|^2 <= 2 p^-2 / Gamma(1+1/p)",
            Coupling => "E|X-sgn X|^2 <= 9 (1-1/q)^2",
            EquicontinuitySections => "|A_{n,p}(a) - A_{n,inf}(a)| <= 5/p",
            EquicontinuityProjections => "|E|sum a_j X_j| - E|sum a_j eps_j|| <= 3(1-1/q)",
            SectionGoal => "E(|X|^-1 - alpha^-1)_+ >= 3/2 alpha^2",
            ProjectionGoal => "E(alpha - |X|)_+ >= 3/4 alpha^2",
            SectionConstantBounds => "1.41 < C_p < 1.42",
            ProjectionConstantBounds => "0.7 < c_q < 0.71",
            RadiiEventProbability => "P{R1 <= 1, |R1-R2| < alpha} >= min(1/64, p alpha/32)",
            TwoAtomSmallBall => "P{|a1 xi1 + a2 xi2| < r} = (r^2 - (a1-a2)^2)/(4 a1 a2)",
            UniformUnderSection => "g_p(x) >= p/4 on [1-1/(2p), 1]",
            UniformUnderProjection => "f_q(x) >= 1/(4(q-1)) on [1-(q-1)/2, 1]",
            RobustSzarek => "E|sum a_j eps_j| >= 1/sqrt2 + kappa_1 sqrt(delta(a))",
            RobustBall => "E|sum a_j xi_j|^-1 <= sqrt2 - kappa_inf sqrt(delta(a))",
            HaagerupBound => "E|sum a_j eps_j| >= sum a_j^2 F(a_j^-2)",
            SzarekConstants => "recomputed Szarek-side stability candidate >= published value",
            BallConstants => "recomputed Ball-side stability candidate >= published value",
            PsiBound => "Psi(s) <= sqrt(6/pi) for s >= 9/4",
            SectionOracle2d => "MC section ratio = 1/||a||_p for n = 2",
            ProjectionOracle2d => "MC projection ratio = ||a||_{q/(q-1)} for n = 2",
            CubeFourierOracle => "MC cube section = Fourier quadrature",
            BallDirectionValue => "A_{n,p}((e1+e2)/sqrt2) = 2^{1/2-1/p}",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictStatus {
    Pass,
    Fail,
    /// Sampling noise too large to decide; only produced by MC checks.
    Inconclusive,
}

/// Direction of the checked inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `lhs >= rhs`
    AtLeast,
    /// `lhs <= rhs`
    AtMost,
    /// `lhs == rhs`
    Equal,
}

/// Relative rounding allowance for deterministic comparisons.
pub const ROUNDING_TOL: f64 = 1e-12;

/// The result of checking one inequality at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaVerdict {
    pub lemma: LemmaId,
    pub claim: &'static str,
    /// Which instance of the claim this is, when one lemma yields several.
    #[serde(skip_serializing_if = "String::is_empty")]
    pub label: String,
    pub params: BTreeMap<String, f64>,
    pub lhs: f64,
    pub rhs: f64,
    /// Standard error of `lhs`; zero for closed-form checks.
    pub lhs_std_error: f64,
    pub status: VerdictStatus,
    /// `|lhs - rhs|`.
    pub slack: f64,
}

impl LemmaVerdict {
    /// Closed-form comparison with a relative rounding tolerance.
    pub fn deterministic(
        lemma: LemmaId,
        params: BTreeMap<String, f64>,
        lhs: f64,
        rhs: f64,
        relation: Relation,
    ) -> Self {
        let tol = ROUNDING_TOL * lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
        let holds = match relation {
            Relation::AtLeast => lhs >= rhs - tol,
            Relation::AtMost => lhs <= rhs + tol,
            Relation::Equal => (lhs - rhs).abs() <= tol,
        };
        Self::build(lemma, params, lhs, rhs, 0.0, if holds { VerdictStatus::Pass } else { VerdictStatus::Fail })
    }

    /// Comparison with a tolerance band: pass when the relation holds within
    /// `abs_tol`, fail otherwise. For `Equal` relations between estimates.
    pub fn within_tolerance(lemma: LemmaId, params: BTreeMap<String, f64>, lhs: f64, rhs: f64, abs_tol: f64) -> Self {
        let status = if (lhs - rhs).abs() <= abs_tol { VerdictStatus::Pass } else { VerdictStatus::Fail };
        Self::build(lemma, params, lhs, rhs, 0.0, status)
    }

    /// Strict two-sided bound `lo < value < hi`; `rhs` is the nearer bound.
    pub fn interval(lemma: LemmaId, params: BTreeMap<String, f64>, value: f64, lo: f64, hi: f64) -> Self {
        let rhs = if value - lo <= hi - value { lo } else { hi };
        let status = if lo < value && value < hi { VerdictStatus::Pass } else { VerdictStatus::Fail };
        Self::build(lemma, params, value, rhs, 0.0, status)
    }

    /// Three-valued comparison of a sampled `lhs` against an exact `rhs`
    /// with a guard band of `guard` standard errors.
    pub fn statistical(
        lemma: LemmaId,
        params: BTreeMap<String, f64>,
        lhs: f64,
        lhs_std_error: f64,
        rhs: f64,
        relation: Relation,
        guard: f64,
    ) -> Self {
        let band = guard * lhs_std_error;
        let status = match relation {
            Relation::AtLeast if lhs - band >= rhs => VerdictStatus::Pass,
            Relation::AtLeast if lhs + band < rhs => VerdictStatus::Fail,
            Relation::AtMost if lhs + band <= rhs => VerdictStatus::Pass,
            Relation::AtMost if lhs - band > rhs => VerdictStatus::Fail,
            Relation::Equal if (lhs - rhs).abs() <= band => VerdictStatus::Pass,
            Relation::Equal => VerdictStatus::Fail,
            _ => VerdictStatus::Inconclusive,
        };
        Self::build(lemma, params, lhs, rhs, lhs_std_error, status)
    }

    fn build(
        lemma: LemmaId,
        params: BTreeMap<String, f64>,
        lhs: f64,
        rhs: f64,
        lhs_std_error: f64,
        status: VerdictStatus,
    ) -> Self {
        LemmaVerdict {
            lemma,
            claim: lemma.claim(),
            label: String::new(),
            params,
            lhs,
            rhs,
            lhs_std_error,
            status,
            slack: (lhs - rhs).abs(),
        }
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn pass(&self) -> bool {
        self.status == VerdictStatus::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == VerdictStatus::Fail
    }
}

/// Builds a parameter map from `(name, value)` pairs.
pub fn params<const N: usize>(pairs: [(&str, f64); N]) -> BTreeMap<String, f64> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn canonicalize_examples() {
        let a = canonicalize(&[0.0, -3.0, 4.0]).unwrap();
        assert_eq!(a.coords(), &[0.8, 0.6, 0.0]);
        let b = canonicalize(&[1.0, 1.0]).unwrap();
        assert!((b.a1() - H).abs() < 1e-15 && (b.a2() - H).abs() < 1e-15);
        let c = canonicalize(&[2.0, 0.0, 0.0]).unwrap();
        assert_eq!(c.coords(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn canonicalize_rejects_bad_input() {
        assert!(canonicalize(&[0.0, 0.0]).is_err());
        assert!(canonicalize(&[]).is_err());
        assert!(canonicalize(&[1.0, f64::NAN]).is_err());
    }

    #[test]
    fn deficit_examples() {
        assert!(deficit(&Direction::extremizer(2)) < 1e-30);
        let two_minus_sqrt2 = 2.0 - std::f64::consts::SQRT_2;
        assert!((deficit(&Direction::basis(2)) - two_minus_sqrt2).abs() < 1e-15);
        assert!((deficit(&canonicalize(&[1.0; 4]).unwrap()) - two_minus_sqrt2).abs() < 1e-15);
        // n = 1 treats a2 = 0
        assert!((deficit(&Direction::basis(1)) - two_minus_sqrt2).abs() < 1e-15);
    }

    #[test]
    fn deficit_vanishes_only_at_extremizer_on_grid() {
        for i in 0..=40 {
            for j in 0..=i {
                for k in 0..=j {
                    let raw = [i as f64, j as f64, k as f64];
                    if i == 0 {
                        continue;
                    }
                    let a = canonicalize(&raw).unwrap();
                    let d = deficit(&a);
                    assert!((0.0..=2.0).contains(&d));
                    let is_ext = i == j && k == 0;
                    assert_eq!(d < 1e-14, is_ext, "raw {raw:?}, deficit {d}");
                }
            }
        }
    }

    #[test]
    fn exponent_dual_and_parse() {
        assert_eq!(Exponent::ONE.dual(), Exponent::Infinite);
        assert_eq!(Exponent::Infinite.dual(), Exponent::ONE);
        assert_eq!(Exponent::TWO.dual(), Exponent::TWO);
        assert!((Exponent::Finite(4.0 / 3.0).dual().value() - 4.0).abs() < 1e-14);
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinite);
        assert_eq!("2.5".parse::<Exponent>().unwrap(), Exponent::Finite(2.5));
        assert!("0.5".parse::<Exponent>().is_err());
        assert!("abc".parse::<Exponent>().is_err());
    }

    #[test]
    fn statistical_verdicts_are_three_valued() {
        let p = params([("x", 1.0)]);
        let v = LemmaVerdict::statistical(LemmaId::SectionGoal, p.clone(), 1.0, 0.1, 0.5, Relation::AtLeast, 4.0);
        assert_eq!(v.status, VerdictStatus::Pass);
        let v = LemmaVerdict::statistical(LemmaId::SectionGoal, p.clone(), 1.0, 0.1, 1.2, Relation::AtLeast, 4.0);
        assert_eq!(v.status, VerdictStatus::Inconclusive);
        let v = LemmaVerdict::statistical(LemmaId::SectionGoal, p, 1.0, 0.1, 1.5, Relation::AtLeast, 4.0);
        assert_eq!(v.status, VerdictStatus::Fail);
        assert!((v.slack - 0.5).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn canonical_form_is_unit_sorted_nonnegative(raw in prop::collection::vec(-10.0f64..10.0, 1..12)) {
            prop_assume!(raw.iter().any(|x| x.abs() > 1e-6));
            let a = canonicalize(&raw).unwrap();
            let n2: f64 = a.coords().iter().map(|x| x * x).sum();
            prop_assert!((n2.sqrt() - 1.0).abs() < 1e-12);
            prop_assert!(a.coords().windows(2).all(|w| w[0] >= w[1]));
            prop_assert!(a.coords().iter().all(|&x| x >= 0.0));
            let two_form = 2.0 - std::f64::consts::SQRT_2 * (a.a1() + a.a2());
            prop_assert!((deficit(&a) - two_form).abs() < 1e-12);
        }

        #[test]
        fn canonical_form_ignores_signs_and_order(
            raw in prop::collection::vec(-10.0f64..10.0, 1..10),
            flips in prop::collection::vec(any::<bool>(), 10),
            rot in 0usize..10,
        ) {
            prop_assume!(raw.iter().any(|x| x.abs() > 1e-6));
            let mut other: Vec<f64> = raw.iter().zip(&flips).map(|(x, &f)| if f { -x } else { *x }).collect();
            let r = rot % other.len();
            other.rotate_left(r);
            prop_assert_eq!(canonicalize(&raw).unwrap(), canonicalize(&other).unwrap());
        }

        #[test]
        fn dual_is_an_involution(q in 1.0001f64..50.0) {
            let back = Exponent::Finite(q).dual().dual().value();
            prop_assert!((back - q).abs() < 1e-9 * q);
        }
    }
}
