//! Central hyperplane sections of `B_p^n`.
//!
//! The normalized section function is
//! `A_{n,p}(a) = vol(B_p^n ∩ a^⊥) / vol(B_p^{n-1}) = Γ(1+1/p) E|Σ a_j R_j ξ_j|⁻¹`
//! with independent radii `R_j` and uniform points `ξ_j ∈ S²`.

use std::f64::consts::PI;

use crate::distributions::{draw_sphere3, symmetric_unit, RngStream, SectionRadiusLaw};
use crate::domain::{Direction, Exponent, MCEstimate};
use crate::error::{Error, Result};
use crate::mc::{monte_carlo, monte_carlo_vec};
use crate::quad;
use crate::special::{gamma_pos, ln_gamma_pos};

/// Direction, exponent and Monte Carlo budget of a section estimate.
#[derive(Debug, Clone)]
pub struct SectionQuery {
    pub a: Direction,
    pub p: Exponent,
    pub samples: u64,
    pub seed: u64,
}

impl SectionQuery {
    pub fn new(a: Direction, p: Exponent, samples: u64, seed: u64) -> Self {
        SectionQuery { a, p, samples, seed }
    }
}

fn check_samples(samples: u64) -> Result<()> {
    if samples == 0 {
        return Err(Error::InvalidInput("sample count must be positive".into()));
    }
    Ok(())
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// `Σ_j a_j R_j ξ_j` for one draw; zero coordinates are skipped.
pub(crate) fn section_sum<R: rand::RngCore>(coords: &[f64], law: &SectionRadiusLaw, rng: &mut R) -> [f64; 3] {
    let mut s = [0.0; 3];
    for &a in coords {
        let w = a * law.draw(rng);
        let xi = draw_sphere3(rng);
        for k in 0..3 {
            s[k] += w * xi[k];
        }
    }
    s
}

/// Monte Carlo estimate of `A_{n,p}(a)`. `p = ∞` runs the same estimator
/// with `R ≡ 1`.
pub fn estimate_section_ratio(query: &SectionQuery) -> Result<MCEstimate> {
    check_samples(query.samples)?;
    let law = SectionRadiusLaw::new(query.p);
    let scale = gamma_pos(1.0 + query.p.recip());
    let coords = query.a.active();
    Ok(monte_carlo(query.samples, RngStream::new(query.seed), |rng| scale / norm3(section_sum(coords, &law, rng))))
}

/// `A_{2,p}(a) = 1/‖a‖_p`.
pub fn exact_section_ratio_2d(a: &Direction, p: Exponent) -> Result<f64> {
    if a.dim() != 2 {
        return Err(Error::Dimension { expected: 2, got: a.dim() });
    }
    Ok(1.0 / a.norm(p))
}

/// `A_{n,p}((e₁+e₂)/√2) = 2^{1/2-1/p}`.
pub fn ball_direction_value(p: Exponent) -> f64 {
    (0.5 - p.recip()).exp2()
}

/// Default absolute tolerance of the Fourier cube-section oracle.
pub const FOURIER_TOL: f64 = 1e-10;

const MAX_PANELS: f64 = 4e6;

/// `vol(Q_n ∩ a^⊥)` for the unit-volume cube `Q_n = [-1/2, 1/2]^n`.
pub fn cube_section_fourier(a: &Direction) -> Result<f64> {
    cube_section_fourier_tol(a, FOURIER_TOL)
}

/// The section volume is the density of `Σ a_j U_j` at 0, i.e.
/// `(2/π) ∫₀^∞ Π_j sin(a_j u)/(a_j u) du`. The integral is split into
/// panels of length `π/a₁` and truncated where the bound
/// `∫_U^∞ Π_{j≤k} (a_j u)⁻¹ du` on the `k` largest factors meets half
/// the tolerance. One and two active coordinates have closed forms
/// (`1` and `1/a₁`); the two-factor integrand decays too slowly for the
/// quadrature.
pub fn cube_section_fourier_tol(a: &Direction, tol: f64) -> Result<f64> {
    let c = a.active();
    match c.len() {
        1 => return Ok(1.0),
        2 => return Ok(1.0 / c[0]),
        _ => {}
    }
    let half = 0.5 * tol * PI / 2.0;
    let mut cutoff = f64::INFINITY;
    let mut prod = 1.0;
    for (k, &x) in c.iter().enumerate() {
        prod /= x;
        let k = k + 1;
        if k >= 2 {
            let km1 = (k - 1) as f64;
            cutoff = cutoff.min((prod / (km1 * half)).powf(1.0 / km1));
        }
    }
    let width = PI / c[0];
    let panels = (cutoff / width).ceil().max(1.0);
    if panels > MAX_PANELS {
        return Err(Error::Accuracy { tol, reason: format!("Fourier tail needs {panels:.0} panels") });
    }
    let panels = panels as usize;
    let integrand = |u: f64| c.iter().map(|&x| (x * u).sin() / (x * u)).product::<f64>();
    let per_panel = half / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let lo = k as f64 * width;
        let q = quad::adaptive(&integrand, lo, lo + width, per_panel, 20);
        if !q.converged {
            return Err(Error::Accuracy { tol, reason: format!("panel {k} did not converge") });
        }
        total += q.value;
    }
    Ok(2.0 / PI * total)
}

/// Busemann's norm `N(x) = |x| / vol(Q_n ∩ x^⊥) = (E|Σ x_j ξ_j|⁻¹)⁻¹`,
/// from the Fourier oracle when it converges and Monte Carlo otherwise.
pub fn busemann_norm(x: &[f64]) -> Result<f64> {
    let len = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let a = Direction::new(x)?;
    let vol = match cube_section_fourier(&a) {
        Ok(v) => v,
        Err(Error::Accuracy { .. }) => {
            estimate_section_ratio(&SectionQuery::new(a, Exponent::Infinite, 1_000_000, 0))?.mean
        }
        Err(e) => return Err(e),
    };
    Ok(len / vol)
}

/// `E|x₁ξ₁ + x₂ξ₂|⁻¹ = 1/max(x₁, x₂)` for independent uniform `ξ_j ∈ S²`.
pub fn two_atom_inverse_moment(x1: f64, x2: f64) -> Result<f64> {
    if !(x1 > 0.0 && x2 > 0.0) {
        return Err(Error::InvalidInput("two_atom_inverse_moment needs positive weights".into()));
    }
    Ok(1.0 / x1.max(x2))
}

/// Both sides of `E|Σ x_j ξ_j|^s = (1+s) E|Σ x_j U_j|^s`, where `ξ_j` are
/// uniform on `S² ⊂ ℝ³` and `U_j` uniform on `[-1, 1]`.
pub fn konig_kwapien_check(x: &[f64], s: f64, samples: u64, seed: u64) -> Result<(MCEstimate, MCEstimate)> {
    if !(s > -1.0) || s == 0.0 || !s.is_finite() {
        return Err(Error::InvalidInput(format!("exponent must satisfy s > -1, s != 0, got {s}")));
    }
    if x.is_empty() || x.iter().all(|&v| v == 0.0) || x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("weights must be finite and not all zero".into()));
    }
    check_samples(samples)?;
    let stream = RngStream::new(seed);
    let lhs = monte_carlo(samples, stream.substream(0), |rng| {
        let mut v = [0.0; 3];
        for &w in x {
            let xi = draw_sphere3(rng);
            for k in 0..3 {
                v[k] += w * xi[k];
            }
        }
        norm3(v).powf(s)
    });
    let rhs = monte_carlo(samples, stream.substream(1), |rng| {
        let sum: f64 = x.iter().map(|&w| w * symmetric_unit(rng)).sum();
        (1.0 + s) * sum.abs().powf(s)
    });
    Ok((lhs, rhs))
}

/// Paired estimates of `E|X+Y|⁻¹` and `E min{|X|⁻¹, |Y|⁻¹}` where `X` and
/// `Y` are the block sums over coordinates `..split` and `split..`; the two
/// agree for independent rotation-invariant vectors in ℝ³.
pub fn min_representation_check(
    a: &Direction,
    split: usize,
    p: Exponent,
    samples: u64,
    seed: u64,
) -> Result<(MCEstimate, MCEstimate)> {
    if split == 0 || split >= a.dim() {
        return Err(Error::InvalidInput(format!("split must lie in 1..{}, got {split}", a.dim())));
    }
    check_samples(samples)?;
    let law = SectionRadiusLaw::new(p);
    let (head, tail) = a.coords().split_at(split);
    let [joint, min] = monte_carlo_vec(samples, RngStream::new(seed), |rng| {
        let x = section_sum(head, &law, rng);
        let y = section_sum(tail, &law, rng);
        let s = [x[0] + y[0], x[1] + y[1], x[2] + y[2]];
        [1.0 / norm3(s), (1.0 / norm3(x)).min(1.0 / norm3(y))]
    });
    Ok((joint, min))
}

/// `vol(B_p^n) = (2Γ(1+1/p))^n / Γ(1+n/p)`; `2^n` for the cube.
pub fn ball_volume(n: usize, p: Exponent) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    let r = p.recip();
    let nf = n as f64;
    Ok((nf * (2.0f64.ln() + ln_gamma_pos(1.0 + r)) - ln_gamma_pos(1.0 + nf * r)).exp())
}

/// `vol(B_p^n ∩ a^⊥)` with `n = a.dim() >= 2`.
pub fn section_volume_absolute(a: &Direction, p: Exponent, samples: u64, seed: u64) -> Result<MCEstimate> {
    if a.dim() < 2 {
        return Err(Error::Dimension { expected: 2, got: a.dim() });
    }
    let ratio = estimate_section_ratio(&SectionQuery::new(a.clone(), p, samples, seed))?;
    Ok(ratio.scaled(ball_volume(a.dim() - 1, p)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    /// Piecewise-polynomial density of `Σ a_j U_j` at 0, signed sum over
    /// the vertices of the cube.
    fn polya_oracle(a: &[f64]) -> f64 {
        let n = a.len();
        let fact: f64 = (1..n).map(|k| k as f64).product();
        let mut acc = 0.0;
        for mask in 0u32..(1 << n) {
            let mut sign = 1.0;
            let mut dot = 0.0;
            for (j, &x) in a.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    sign = -sign;
                    dot -= x;
                } else {
                    dot += x;
                }
            }
            acc += sign * (0.5 * dot).max(0.0).powi(n as i32 - 1);
        }
        acc / (fact * a.iter().product::<f64>())
    }

    fn dir(v: &[f64]) -> Direction {
        Direction::new(v).unwrap()
    }

    #[test]
    fn exact_2d_values() {
        assert_eq!(exact_section_ratio_2d(&dir(&[1.0, 0.0]), Exponent::Finite(7.0)).unwrap(), 1.0);
        let d = Direction::extremizer(2);
        assert!((exact_section_ratio_2d(&d, Exponent::Infinite).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!((exact_section_ratio_2d(&d, Exponent::TWO).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(exact_section_ratio_2d(&Direction::diagonal(3), Exponent::TWO), Err(Error::Dimension { .. })));
    }

    #[test]
    fn ball_direction_closed_form() {
        assert_eq!(ball_direction_value(Exponent::TWO), 1.0);
        assert!((ball_direction_value(Exponent::Infinite) - 2f64.sqrt()).abs() < 1e-15);
        assert!((ball_direction_value(Exponent::ONE) - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn estimator_examples() {
        for p in [Exponent::ONE, Exponent::Finite(3.0), Exponent::Infinite] {
            let e = estimate_section_ratio(&SectionQuery::new(Direction::basis(3), p, 200_000, 1)).unwrap();
            assert!(e.within(1.0, 4.0), "p = {p}: {e:?}");
        }
        let e = estimate_section_ratio(&SectionQuery::new(Direction::extremizer(2), Exponent::Finite(4.0), 400_000, 2))
            .unwrap();
        assert!(e.within(0.25f64.exp2(), 4.0), "{e:?}");
        let a = dir(&[0.8, 0.6]);
        let e = estimate_section_ratio(&SectionQuery::new(a.clone(), Exponent::Finite(3.0), 400_000, 3)).unwrap();
        assert!(e.within(1.0 / a.norm(Exponent::Finite(3.0)), 4.0));
    }

    #[test]
    fn fourier_matches_closed_forms() {
        assert_eq!(cube_section_fourier(&Direction::basis(4)).unwrap(), 1.0);
        assert!((cube_section_fourier(&Direction::extremizer(2)).unwrap() - 2f64.sqrt()).abs() < 1e-14);
        let hex = cube_section_fourier(&Direction::diagonal(3)).unwrap();
        assert!((hex - 0.75 * 3f64.sqrt()).abs() < 1e-9, "{hex}");
    }

    #[test]
    fn fourier_matches_polya_oracle() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(17);
        for _ in 0..20 {
            let n = rng.random_range(3..=6);
            let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();
            let a = dir(&raw);
            let want = polya_oracle(a.coords());
            let got = cube_section_fourier(&a).unwrap();
            assert!((got - want).abs() < 1e-8, "{:?}: {got} vs {want}", a.coords());
        }
    }

    #[test]
    fn busemann_examples() {
        assert!((busemann_norm(&[1.0, 0.0, 0.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((busemann_norm(&[1.0, 1.0]).unwrap() - 1.0).abs() < 1e-14);
        assert!((busemann_norm(&[3.0]).unwrap() - 3.0).abs() < 1e-14);
        assert!(busemann_norm(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn two_atom_closed_form_against_u_integral() {
        assert_eq!(two_atom_inverse_moment(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(two_atom_inverse_moment(2.0, 1.0).unwrap(), 0.5);
        // E (x² + y² + 2xyU)^{-1/2} with U uniform on [-1, 1]
        for (x, y) in [(1.0, 1.0), (2.0, 1.0), (0.3, 0.9)] {
            let f = |u: f64| 0.5 / (x * x + y * y + 2.0 * x * y * u).sqrt();
            let q = quad::adaptive(&f, -1.0, 1.0, 1e-12, 40);
            if x != y {
                assert!((q.value - 1.0 / f64::max(x, y)).abs() < 1e-10);
            }
        }
        let stream = RngStream::new(8);
        let e = monte_carlo(1_000_000, stream, |rng| {
            let u = draw_sphere3(rng);
            let v = draw_sphere3(rng);
            1.0 / norm3([2.0 * u[0] + v[0], 2.0 * u[1] + v[1], 2.0 * u[2] + v[2]])
        });
        assert!(e.within(0.5, 4.0), "{e:?}");
    }

    #[test]
    fn konig_kwapien_examples() {
        let (l, r) = konig_kwapien_check(&[0.3, -1.2, 0.5], 2.0, 200_000, 4).unwrap();
        let sq = 0.09 + 1.44 + 0.25;
        assert!(l.within(sq, 4.0) && r.within(sq, 4.0));
        let (l, r) = konig_kwapien_check(&[1.0, 1.0], -0.5, 400_000, 5).unwrap();
        let se = (l.std_error.powi(2) + r.std_error.powi(2)).sqrt();
        assert!((l.mean - r.mean).abs() < 4.0 * se);
        // |ξ₁| = 1 and 2E|U| = 1
        let (l, r) = konig_kwapien_check(&[1.0], 1.0, 200_000, 6).unwrap();
        assert!((l.mean - 1.0).abs() < 1e-12);
        assert!(r.within(1.0, 4.0));
        assert!(konig_kwapien_check(&[1.0], -1.0, 10, 0).is_err());
        assert!(konig_kwapien_check(&[1.0], 0.0, 10, 0).is_err());
    }

    #[test]
    fn min_representation_agrees() {
        let a = dir(&[0.9, 0.5, 0.4, 0.2]);
        let (joint, min) = min_representation_check(&a, 2, Exponent::Finite(3.0), 400_000, 12).unwrap();
        let se = (joint.std_error.powi(2) + min.std_error.powi(2)).sqrt();
        assert!((joint.mean - min.mean).abs() < 4.0 * se);
        assert!(min_representation_check(&a, 0, Exponent::TWO, 10, 0).is_err());
        assert!(min_representation_check(&a, 4, Exponent::TWO, 10, 0).is_err());
    }

    #[test]
    fn ball_volume_examples() {
        assert!((ball_volume(2, Exponent::TWO).unwrap() - PI).abs() < 1e-13);
        assert!((ball_volume(2, Exponent::ONE).unwrap() - 2.0).abs() < 1e-13);
        assert!((ball_volume(5, Exponent::Infinite).unwrap() - 32.0).abs() < 1e-12);
        assert!((ball_volume(3, Exponent::TWO).unwrap() - 4.0 / 3.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn ball_volume_matches_rejection_sampling() {
        let p = 2.5;
        let e = monte_carlo(1_000_000, RngStream::new(21), |rng| {
            let s: f64 = (0..3).map(|_| symmetric_unit(rng).abs().powf(p)).sum();
            if s <= 1.0 {
                8.0
            } else {
                0.0
            }
        });
        assert!(e.within(ball_volume(3, Exponent::Finite(p)).unwrap(), 4.0), "{e:?}");
    }

    #[test]
    fn absolute_section_volumes() {
        let v = section_volume_absolute(&dir(&[0.3, 0.7]), Exponent::TWO, 100_000, 1).unwrap();
        assert!(v.within(2.0, 4.0));
        let v = section_volume_absolute(&Direction::diagonal(3), Exponent::Infinite, 400_000, 2).unwrap();
        assert!(v.within(3.0 * 3f64.sqrt(), 4.0), "{v:?}");
    }

    #[test]
    fn cross_polytope_diagonal_section_matches_slab_volume() {
        // vol(B_1³ ∩ a^⊥) = lim vol{x ∈ B_1³ : |⟨x, a⟩| < h} / 2h
        let a = Direction::diagonal(3);
        let h = 0.01;
        let slab = monte_carlo(4_000_000, RngStream::new(31), |rng| {
            let x = [symmetric_unit(rng), symmetric_unit(rng), symmetric_unit(rng)];
            let inside = x.iter().map(|v| v.abs()).sum::<f64>() <= 1.0;
            let dot: f64 = x.iter().zip(a.coords()).map(|(u, v)| u * v).sum();
            if inside && dot.abs() < h {
                8.0 / (2.0 * h)
            } else {
                0.0
            }
        });
        let section = section_volume_absolute(&a, Exponent::ONE, 1_000_000, 32).unwrap();
        let se = (slab.std_error.powi(2) + section.std_error.powi(2)).sqrt();
        assert!((slab.mean - section.mean).abs() < 4.0 * se, "{slab:?} vs {section:?}");
    }
}
