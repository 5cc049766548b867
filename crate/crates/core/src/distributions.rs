//! Random ingredients of the probabilistic volume formulas: section radii
//! `R`, projection factors `X`, uniform points on `S²`, and a counter-based
//! random stream so that sample `i` is a pure function of `(seed, i)`.

use rand::{Rng, RngCore};
use rand_distr::{Distribution, Gamma};

use crate::domain::Exponent;
use crate::error::{Error, Result};
use crate::special::{gamma_pos, gamma_ratio, ln_gamma_pos};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of a family of independent per-index generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream { seed }
    }

    /// Generator for sample index `i`. Two calls with the same `i` replay the
    /// same numbers, whatever else has been drawn in between.
    pub fn at(&self, i: u64) -> SampleRng {
        SampleRng { key: mix64(self.seed ^ mix64(i.wrapping_add(GOLDEN))), counter: 0 }
    }

    /// An independent stream derived from this one, e.g. one per sweep case.
    pub fn substream(&self, tag: u64) -> RngStream {
        RngStream { seed: mix64(self.seed.wrapping_add(mix64(tag ^ 0xD1B5_4A32_D192_ED03))) }
    }
}

/// SplitMix64 sequence keyed by `(seed, index)`.
#[derive(Debug, Clone)]
pub struct SampleRng {
    key: u64,
    counter: u64,
}

impl RngCore for SampleRng {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let bytes = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }
}

/// Uniform on `(0, 1]`, safe to take logarithms of.
#[cfg(test)]
pub(crate) fn open01<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform on `[-1, 1)`.
pub(crate) fn symmetric_unit<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    2.0 * rng.random::<f64>() - 1.0
}

/// Rademacher sign.
pub(crate) fn sign<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    if rng.next_u64() >> 63 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Law of the radial factors in the negative-moment formula for sections:
/// density `α_p⁻¹ x^p e^{-x^p}` on `(0, ∞)` with `α_p = Γ(1+1/p)/p`.
/// For `p = ∞` the law is the point mass at 1.
#[derive(Debug, Clone)]
pub struct SectionRadiusLaw {
    p: Exponent,
    log_alpha: f64,
    gamma: Option<Gamma<f64>>,
}

impl SectionRadiusLaw {
    pub fn new(p: Exponent) -> Self {
        match p {
            Exponent::Infinite => SectionRadiusLaw { p, log_alpha: 0.0, gamma: None },
            Exponent::Finite(v) => SectionRadiusLaw {
                p,
                log_alpha: ln_gamma_pos(1.0 + 1.0 / v) - v.ln(),
                gamma: Some(Gamma::new((v + 1.0) / v, 1.0).expect("shape in [1, 2]")),
            },
        }
    }

    pub fn p(&self) -> Exponent {
        self.p
    }

    /// `α_p`; 0 for the degenerate `p = ∞` law.
    pub fn normalizer(&self) -> f64 {
        if self.p.is_infinite() {
            0.0
        } else {
            self.log_alpha.exp()
        }
    }

    /// `g_p(x)`; zero off `(0, ∞)`. The point mass at `p = ∞` has no density
    /// and returns 0 everywhere.
    pub fn density(&self, x: f64) -> f64 {
        let Exponent::Finite(p) = self.p else { return 0.0 };
        if !(x > 0.0) {
            return 0.0;
        }
        let lx = x.ln();
        (p * lx - (p * lx).exp() - self.log_alpha).exp()
    }

    /// `E R^s = Γ(1 + (s+1)/p) / Γ(1 + 1/p)` for `s > -p - 1`.
    pub fn moment(&self, s: f64) -> Result<f64> {
        let Exponent::Finite(p) = self.p else { return Ok(1.0) };
        if !(s > -p - 1.0) {
            return Err(Error::DivergentMoment { order: s, bound: -p - 1.0 });
        }
        Ok(gamma_ratio(1.0 + (s + 1.0) / p, 1.0 + 1.0 / p))
    }

    /// `R_i` of the stream. `R^p` is Gamma with shape `(p+1)/p`, and the root
    /// is taken in log space so that `p = 10⁶` loses nothing.
    pub fn sample(&self, stream: &RngStream, i: u64) -> f64 {
        self.draw(&mut stream.at(i))
    }

    pub fn draw<R: RngCore + ?Sized>(&self, rng: &mut R) -> f64 {
        match (&self.gamma, self.p) {
            (Some(g), Exponent::Finite(p)) => (g.sample(rng).ln() / p).exp(),
            _ => 1.0,
        }
    }
}

/// Law of the factors in the first-moment formula for projections of
/// `B_q^n`: density `γ_q⁻¹ |x|^{(2-q)/(q-1)} e^{-|x|^{q/(q-1)}}` on ℝ with
/// `γ_q = 2(q-1)Γ(1+1/q)`, for `q ∈ (1, 2]`. At `q = 1` it degenerates to a
/// Rademacher sign.
#[derive(Debug, Clone)]
pub struct ProjectionFactorLaw {
    q: f64,
    log_norm: f64,
    gamma: Option<Gamma<f64>>,
}

impl ProjectionFactorLaw {
    pub fn new(q: Exponent) -> Result<Self> {
        let v = q.value();
        if !(1.0..=2.0).contains(&v) {
            return Err(Error::InvalidInput(format!("projection exponent must lie in [1, 2], got {q}")));
        }
        if v == 1.0 {
            return Ok(ProjectionFactorLaw { q: v, log_norm: 0.0, gamma: None });
        }
        Ok(ProjectionFactorLaw {
            q: v,
            log_norm: (v - 1.0).ln() + ln_gamma_pos(1.0 + 1.0 / v),
            gamma: Some(Gamma::new(1.0 / v, 1.0).expect("shape in [1/2, 1)")),
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `γ_q`, the normalizer of the symmetric density.
    pub fn normalizer(&self) -> f64 {
        2.0 * (self.q - 1.0) * gamma_pos(1.0 + 1.0 / self.q)
    }

    /// Density `f_q` of `|X|`; zero for `x <= 0` and for the degenerate law.
    pub fn density_abs(&self, x: f64) -> f64 {
        if self.gamma.is_none() || !(x > 0.0) {
            return 0.0;
        }
        let q = self.q;
        let lx = x.ln();
        let power = (2.0 - q) / (q - 1.0) * lx;
        let decay = (q / (q - 1.0) * lx).exp();
        (power - decay - self.log_norm).exp()
    }

    /// `E|X|^s = Γ(1 + (s-1)(q-1)/q) / Γ(1/q)` for `s > -1/(q-1)`.
    pub fn moment_abs(&self, s: f64) -> Result<f64> {
        if self.gamma.is_none() {
            return Ok(1.0);
        }
        let q = self.q;
        let bound = -1.0 / (q - 1.0);
        if !(s > bound) {
            return Err(Error::DivergentMoment { order: s, bound });
        }
        Ok(gamma_ratio(1.0 + (s - 1.0) * (q - 1.0) / q, 1.0 / q))
    }

    /// `X_i` of the stream: `|X| = G^{(q-1)/q}` with `G ~ Gamma(1/q)` and an
    /// independent sign. rand_distr handles the shape below one by drawing
    /// with shape `1/q + 1` and multiplying by `U^q`.
    pub fn sample(&self, stream: &RngStream, i: u64) -> f64 {
        self.draw(&mut stream.at(i))
    }

    pub fn draw<R: RngCore + ?Sized>(&self, rng: &mut R) -> f64 {
        let s = sign(rng);
        s * self.draw_abs(rng)
    }

    pub fn draw_abs<R: RngCore + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.gamma {
            Some(g) => ((self.q - 1.0) / self.q * g.sample(rng).ln()).exp(),
            None => 1.0,
        }
    }
}

/// Uniform point on `S²` via Archimedes: the height is uniform on `[-1, 1]`.
pub fn sample_sphere3(stream: &RngStream, i: u64) -> [f64; 3] {
    draw_sphere3(&mut stream.at(i))
}

pub fn draw_sphere3<R: RngCore + ?Sized>(rng: &mut R) -> [f64; 3] {
    let z = symmetric_unit(rng);
    let phi = std::f64::consts::TAU * rng.random::<f64>();
    let r = (1.0 - z * z).max(0.0).sqrt();
    let (s, c) = phi.sin_cos();
    [r * c, r * s, z]
}

/// `|a₁ξ₁ + a₂ξ₂|²` written through the uniform `u = ⟨ξ₁, ξ₂⟩ ∈ [-1, 1]`.
pub fn two_atom_radius_squared(a1: f64, a2: f64, u: f64) -> f64 {
    (a1 * a1 + a2 * a2 + 2.0 * a1 * a2 * u).max(0.0)
}
