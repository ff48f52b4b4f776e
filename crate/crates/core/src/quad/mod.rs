//! Numerical estimation of the inner trigonometric integral over the unit
//! cube and of the truncated special integral over coefficient-space shells,
//! with ratio-based decay diagnostics.
//!
//! Estimates are deterministic given `(seed, samples)`: sampling is split
//! into fixed-size batches with counter-derived sub-seeds and all
//! accumulation goes through fixed-shape pairwise sums, so the degree of
//! parallelism never changes a single output bit.

pub mod gauss;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;

use crate::criteria::{self, TheoremTag};
use crate::error::{Error, Result};
use crate::rng::{derive_stream, pairwise_sum, shard_rng};
use crate::shape::PolynomialShape;

/// One coefficient assignment, one entry per monomial of the shape.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientPoint {
    pub alpha: Vec<f64>,
}

impl From<Vec<f64>> for CoefficientPoint {
    fn from(alpha: Vec<f64>) -> Self {
        CoefficientPoint { alpha }
    }
}

/// Quadrature tuning knobs.
#[derive(Debug, Clone, Serialize)]
pub struct QuadConfig {
    /// Nodes per axis per unit of `1 + deg * max|alpha|`; the
    /// frequency-resolving rule.
    pub nodes_per_unit_frequency: f64,
    /// Hard cap on tensor-grid size; exceeding it is a reported error, never
    /// a silent accuracy downgrade.
    pub max_tensor_points: usize,
    /// Point budget for the low-discrepancy rule used when `r > 3`.
    pub qmc_points: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            nodes_per_unit_frequency: 8.0,
            max_tensor_points: 1 << 22,
            qmc_points: 1 << 16,
        }
    }
}

/// Estimate of the inner integral with a two-grid error estimate.
#[derive(Debug, Clone, Serialize)]
pub struct InnerEstimate {
    pub re: f64,
    pub im: f64,
    /// Difference against a coarser rule; the estimate's modulus can exceed
    /// one only within this margin.
    pub error_estimate: f64,
    pub points: usize,
}

impl InnerEstimate {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn magnitude(&self) -> f64 {
        self.value().norm()
    }
}

/// Monomial values and weights tabulated at fixed quadrature points, ready
/// for repeated evaluation at many coefficient points.
struct PreparedQuadrature {
    /// Row-major `points x n_monomials` table of monomial values.
    monomial_values: Vec<f64>,
    weights: Vec<f64>,
    n_monomials: usize,
}

impl PreparedQuadrature {
    fn tensor(p: &PolynomialShape, n_axis: usize) -> Self {
        let rule = gauss::gauss_legendre_unit(n_axis);
        let r = p.r();
        let n = p.n();
        let total = n_axis.pow(r as u32);
        let mut monomial_values = Vec::with_capacity(total * n);
        let mut weights = Vec::with_capacity(total);
        let mut idx = vec![0usize; r];
        loop {
            let mut w = 1.0;
            for &axis in idx.iter() {
                w *= rule[axis].1;
            }
            weights.push(w);
            for mono in p.monomials() {
                let mut v = 1.0;
                for (i, &e) in mono.exponents().iter().enumerate() {
                    if e > 0 {
                        v *= rule[idx[i]].0.powi(e as i32);
                    }
                }
                monomial_values.push(v);
            }
            let mut pos = 0;
            while pos < r && idx[pos] + 1 == n_axis {
                idx[pos] = 0;
                pos += 1;
            }
            if pos == r {
                break;
            }
            idx[pos] += 1;
        }
        PreparedQuadrature {
            monomial_values,
            weights,
            n_monomials: n,
        }
    }

    /// Additive low-discrepancy sequence from the generalized golden ratio:
    /// coordinate `i` steps by the `(i+1)`-th power of the inverse root of
    /// `x^(r+1) = x + 1`.
    fn low_discrepancy(p: &PolynomialShape, points: usize) -> Self {
        let r = p.r();
        let n = p.n();
        let phi = generalized_golden_ratio(r);
        let steps: Vec<f64> = (1..=r).map(|i| phi.powi(-(i as i32))).collect();
        let mut monomial_values = Vec::with_capacity(points * n);
        let weights = vec![1.0 / points as f64; points];
        let mut coords = vec![0.0f64; r];
        for s in 0..points {
            for (c, &g) in coords.iter_mut().zip(&steps) {
                *c = ((s + 1) as f64 * g + 0.5).fract();
            }
            for mono in p.monomials() {
                let mut v = 1.0;
                for (i, &e) in mono.exponents().iter().enumerate() {
                    if e > 0 {
                        v *= coords[i].powi(e as i32);
                    }
                }
                monomial_values.push(v);
            }
        }
        PreparedQuadrature {
            monomial_values,
            weights,
            n_monomials: n,
        }
    }

    /// `sum_s w_s exp(2 pi i <alpha, gamma(x_s)>)` over the first `limit`
    /// points, renormalizing the weights over that prefix.
    fn eval_prefix(&self, alpha: &[f64], limit: usize) -> Complex64 {
        let n = self.n_monomials;
        let mut re = 0.0f64;
        let mut im = 0.0f64;
        let mut wsum = 0.0f64;
        for (s, &w) in self.weights.iter().take(limit).enumerate() {
            let row = &self.monomial_values[s * n..(s + 1) * n];
            let mut phase = 0.0f64;
            for (a, g) in alpha.iter().zip(row) {
                phase += a * g;
            }
            let (sin, cos) = (TAU * phase).sin_cos();
            re += w * cos;
            im += w * sin;
            wsum += w;
        }
        Complex64::new(re / wsum, im / wsum)
    }

    fn eval(&self, alpha: &[f64]) -> Complex64 {
        let n = self.n_monomials;
        let mut re = 0.0f64;
        let mut im = 0.0f64;
        for (s, &w) in self.weights.iter().enumerate() {
            let row = &self.monomial_values[s * n..(s + 1) * n];
            let mut phase = 0.0f64;
            for (a, g) in alpha.iter().zip(row) {
                phase += a * g;
            }
            let (sin, cos) = (TAU * phase).sin_cos();
            re += w * cos;
            im += w * sin;
        }
        Complex64::new(re, im)
    }
}

/// Positive root of `x^(d+1) = x + 1`.
fn generalized_golden_ratio(d: usize) -> f64 {
    let mut x = 1.5f64;
    for _ in 0..64 {
        let f = x.powi(d as i32 + 1) - x - 1.0;
        let df = (d as f64 + 1.0) * x.powi(d as i32) - 1.0;
        let step = f / df;
        x -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    x
}

fn required_axis_nodes(cfg: &QuadConfig, degree: u64, max_abs: f64) -> usize {
    (cfg.nodes_per_unit_frequency * (1.0 + degree as f64 * max_abs)).ceil() as usize
}

fn prepare_for(p: &PolynomialShape, max_abs: f64, cfg: &QuadConfig) -> Result<PreparedQuadrature> {
    let degree = p.max_degree();
    if p.r() <= 3 {
        let n_axis = required_axis_nodes(cfg, degree, max_abs);
        let total = n_axis.pow(p.r() as u32);
        if total > cfg.max_tensor_points {
            return Err(Error::ResolutionInsufficient {
                required: total,
                allowed: cfg.max_tensor_points,
            });
        }
        Ok(PreparedQuadrature::tensor(p, n_axis))
    } else {
        // Heuristic point demand for the low-discrepancy rule; it errs on
        // the loud side rather than degrade silently.
        let required = 32 * required_axis_nodes(cfg, degree, max_abs);
        if cfg.qmc_points < required {
            return Err(Error::ResolutionInsufficient {
                required,
                allowed: cfg.qmc_points,
            });
        }
        Ok(PreparedQuadrature::low_discrepancy(p, cfg.qmc_points))
    }
}

/// Estimate of the inner oscillatory integral at one coefficient point.
///
/// A zero coefficient vector short-circuits to the exact value one. The
/// error estimate compares the full rule against a two-thirds-resolution
/// rule (tensor mode) or the first half of the sequence (QMC mode).
pub fn inner_integral(
    p: &PolynomialShape,
    alpha: &CoefficientPoint,
    cfg: &QuadConfig,
) -> Result<InnerEstimate> {
    if alpha.alpha.len() != p.n() {
        return Err(Error::BadPoints {
            expected: p.n(),
            found: alpha.alpha.len(),
        });
    }
    if alpha.alpha.iter().all(|&a| a == 0.0) {
        return Ok(InnerEstimate {
            re: 1.0,
            im: 0.0,
            error_estimate: 0.0,
            points: 0,
        });
    }
    let max_abs = alpha.alpha.iter().fold(0.0f64, |m, &a| m.max(a.abs()));
    let full = prepare_for(p, max_abs, cfg)?;
    if p.r() <= 3 {
        let n_axis = required_axis_nodes(cfg, p.max_degree(), max_abs);
        let coarse_axis = (n_axis * 2 / 3).max(8);
        let coarse = PreparedQuadrature::tensor(p, coarse_axis);
        let value = full.eval(&alpha.alpha);
        let check = coarse.eval(&alpha.alpha);
        Ok(InnerEstimate {
            re: value.re,
            im: value.im,
            error_estimate: (value - check).norm(),
            points: full.weights.len(),
        })
    } else {
        let value = full.eval(&alpha.alpha);
        let check = full.eval_prefix(&alpha.alpha, full.weights.len() / 2);
        Ok(InnerEstimate {
            re: value.re,
            im: value.im,
            error_estimate: (value - check).norm(),
            points: full.weights.len(),
        })
    }
}

/// Monte Carlo estimate of the integral of `|I(alpha)|^{2k}` over one
/// sup-norm shell in coefficient space.
#[derive(Debug, Clone, Serialize)]
pub struct ShellEstimate {
    pub a_lo: f64,
    pub a_hi: f64,
    pub two_k: u64,
    pub mass: f64,
    pub std_error: f64,
    pub samples: usize,
}

fn validate_two_k(two_k: u64) -> Result<u64> {
    if two_k == 0 || !two_k.is_multiple_of(2) {
        return Err(Error::OddMoment { two_k });
    }
    Ok(two_k / 2)
}

/// Draws one point uniformly from the shell `a_lo <= ||alpha||_inf < a_hi`:
/// a radius with density proportional to `t^(N-1)`, a uniformly chosen
/// signed face, and uniform coordinates on that face. With `a_lo = 0` this
/// is exactly uniform sampling of the box.
fn sample_shell_point<R: Rng>(rng: &mut R, n_dim: usize, a_lo: f64, a_hi: f64, out: &mut Vec<f64>) {
    let u: f64 = rng.gen();
    let n = n_dim as f64;
    let t = (a_lo.powf(n) + u * (a_hi.powf(n) - a_lo.powf(n))).powf(1.0 / n);
    let face = rng.gen_range(0..n_dim);
    let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
    out.clear();
    for i in 0..n_dim {
        if i == face {
            out.push(sign * t);
        } else {
            out.push(rng.gen_range(-t..t));
        }
    }
}

const BATCH: usize = 1024;

fn shell_mass_with(
    p: &PolynomialShape,
    two_k: u64,
    a_lo: f64,
    a_hi: f64,
    samples: usize,
    shell_seed: u64,
    cfg: &QuadConfig,
) -> Result<ShellEstimate> {
    let k = validate_two_k(two_k)? as i32;
    if !(a_lo.is_finite() && a_hi.is_finite()) || a_lo < 0.0 || a_hi < a_lo {
        return Err(Error::BadShell { a_lo, a_hi });
    }
    if a_lo == a_hi || samples == 0 {
        return Ok(ShellEstimate {
            a_lo,
            a_hi,
            two_k,
            mass: 0.0,
            std_error: 0.0,
            samples,
        });
    }
    let n_dim = p.n();
    let volume = (2.0 * a_hi).powi(n_dim as i32) - (2.0 * a_lo).powi(n_dim as i32);
    let prepared = prepare_for(p, a_hi, cfg)?;
    let n_batches = samples.div_ceil(BATCH);
    let stats: Vec<(f64, f64)> = (0..n_batches as u64)
        .into_par_iter()
        .map(|b| {
            let mut rng = shard_rng(shell_seed, b);
            let count = if b as usize == n_batches - 1 {
                samples - (n_batches - 1) * BATCH
            } else {
                BATCH
            };
            let mut vals = Vec::with_capacity(count);
            let mut point = Vec::with_capacity(n_dim);
            for _ in 0..count {
                sample_shell_point(&mut rng, n_dim, a_lo, a_hi, &mut point);
                let z = prepared.eval(&point);
                vals.push((z.re * z.re + z.im * z.im).powi(k));
            }
            let squares: Vec<f64> = vals.iter().map(|v| v * v).collect();
            (pairwise_sum(&vals), pairwise_sum(&squares))
        })
        .collect();
    let sums: Vec<f64> = stats.iter().map(|s| s.0).collect();
    let squares: Vec<f64> = stats.iter().map(|s| s.1).collect();
    let total = pairwise_sum(&sums);
    let total_sq = pairwise_sum(&squares);
    let nf = samples as f64;
    let mean = total / nf;
    let variance = if samples > 1 {
        ((total_sq - nf * mean * mean) / (nf - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(ShellEstimate {
        a_lo,
        a_hi,
        two_k,
        mass: volume * mean,
        std_error: volume * (variance / nf).sqrt(),
        samples,
    })
}

/// Shell mass with the seed used directly (single-shell entry point).
pub fn shell_mass(
    p: &PolynomialShape,
    two_k: u64,
    a_lo: f64,
    a_hi: f64,
    samples: usize,
    seed: u64,
    cfg: &QuadConfig,
) -> Result<ShellEstimate> {
    shell_mass_with(
        p,
        two_k,
        a_lo,
        a_hi,
        samples,
        derive_stream(seed, 0x5e11),
        cfg,
    )
}

/// Truncated estimate of the special integral: central box plus a doubling
/// shell schedule.
#[derive(Debug, Clone, Serialize)]
pub struct ThetaEstimate {
    pub two_k: u64,
    pub central: ShellEstimate,
    pub shells: Vec<ShellEstimate>,
    /// Cumulative sums: central box first, then after each shell.
    pub partial_sums: Vec<f64>,
    pub total: f64,
}

/// Estimates the truncated special integral up to sup-norm radius `a_max`
/// with the schedule `[0,1), [1,2), [2,4), ...`. Each shell derives its seed
/// from `(seed, shell index)`, so growing `a_max` extends the schedule
/// without changing earlier shells.
pub fn theta_truncated(
    p: &PolynomialShape,
    two_k: u64,
    a_max: f64,
    samples_per_shell: usize,
    seed: u64,
    cfg: &QuadConfig,
) -> Result<ThetaEstimate> {
    validate_two_k(two_k)?;
    if !a_max.is_finite() || a_max < 2.0 {
        return Err(Error::BadShell {
            a_lo: 1.0,
            a_hi: a_max,
        });
    }
    let central = shell_mass_with(
        p,
        two_k,
        0.0,
        1.0,
        samples_per_shell,
        derive_stream(seed, 0),
        cfg,
    )?;
    let mut shells = Vec::new();
    let mut partial_sums = vec![central.mass];
    let mut lo = 1.0f64;
    let mut index = 1u64;
    while lo < a_max {
        let hi = (lo * 2.0).min(a_max);
        let shell = shell_mass_with(
            p,
            two_k,
            lo,
            hi,
            samples_per_shell,
            derive_stream(seed, index),
            cfg,
        )?;
        partial_sums.push(partial_sums.last().unwrap() + shell.mass);
        shells.push(shell);
        lo = hi;
        index += 1;
    }
    let total = *partial_sums.last().unwrap();
    Ok(ThetaEstimate {
        two_k,
        central,
        shells,
        partial_sums,
        total,
    })
}

/// Verdict of the ratio fit over the trailing shells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Converging,
    Diverging,
    Inconclusive,
}

/// Geometric decay fit over the last shells of a doubling schedule.
#[derive(Debug, Clone, Serialize)]
pub struct DecayFit {
    /// Mean base-2 log of consecutive mass ratios over the trailing window;
    /// absent when a mass in the window vanishes.
    pub slope: Option<f64>,
    pub classification: Classification,
    pub shells_used: usize,
    pub epsilon: f64,
}

/// Number of trailing ratios the classification looks at.
pub const DECAY_WINDOW: usize = 3;

/// Classifies the trailing mass ratios: converging when every ratio is at
/// most `1 - epsilon`, diverging when every ratio is at least `1 - epsilon`
/// with non-vanishing mass, inconclusive otherwise (including zero masses).
pub fn decay_fit(shells: &[ShellEstimate], epsilon: f64) -> Result<DecayFit> {
    if shells.len() < DECAY_WINDOW + 1 {
        return Err(Error::TooFewShells {
            found: shells.len(),
            needed: DECAY_WINDOW + 1,
        });
    }
    let tail = &shells[shells.len() - (DECAY_WINDOW + 1)..];
    let masses: Vec<f64> = tail.iter().map(|s| s.mass).collect();
    if masses.iter().any(|&m| m <= 0.0 || !m.is_finite()) {
        return Ok(DecayFit {
            slope: None,
            classification: Classification::Inconclusive,
            shells_used: shells.len(),
            epsilon,
        });
    }
    let ratios: Vec<f64> = masses.windows(2).map(|w| w[1] / w[0]).collect();
    let logs: Vec<f64> = ratios.iter().map(|r| r.log2()).collect();
    let slope = logs.iter().sum::<f64>() / logs.len() as f64;
    let classification = if ratios.iter().all(|&r| r <= 1.0 - epsilon) {
        Classification::Converging
    } else if ratios.iter().all(|&r| r >= 1.0 - epsilon) {
        Classification::Diverging
    } else {
        Classification::Inconclusive
    };
    Ok(DecayFit {
        slope: Some(slope),
        classification,
        shells_used: shells.len(),
        epsilon,
    })
}

/// What the criteria module certifies for one moment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertifiedKind {
    Divergent,
    Convergent,
    Gap,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertifiedStatus {
    pub kind: CertifiedKind,
    pub theorems: Vec<TheoremTag>,
}

/// Agreement between the empirical classification and the certificates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Agreement {
    Agrees,
    Disagrees,
    Untested,
}

/// Estimation parameters for [`classify_empirical`].
#[derive(Debug, Clone, Serialize)]
pub struct EstimateConfig {
    pub a_max: f64,
    pub samples_per_shell: usize,
    pub seed: u64,
    /// Ratio tolerance of the decay classification.
    pub epsilon: f64,
    #[serde(skip)]
    pub quad: QuadConfig,
}

impl Default for EstimateConfig {
    fn default() -> Self {
        EstimateConfig {
            a_max: 64.0,
            samples_per_shell: 100_000,
            seed: 42,
            epsilon: 0.1,
            quad: QuadConfig::default(),
        }
    }
}

/// Shell schedule, decay fit, and cross-reference against the certificates.
#[derive(Debug, Clone, Serialize)]
pub struct EmpiricalReport {
    pub two_k: u64,
    pub central: ShellEstimate,
    pub shells: Vec<ShellEstimate>,
    pub fit: DecayFit,
    /// Truncated estimate, reported only when the tail is classified as
    /// converging; a divergent integral gets growth diagnostics, not a value.
    pub theta_estimate: Option<f64>,
    pub certified: CertifiedStatus,
    pub agreement: Agreement,
}

/// Runs the shell schedule for one even moment and marks agreement with the
/// criteria certificates: `agrees`/`disagrees` only when both sides commit,
/// `untested` when either the fit is inconclusive or the moment sits in the
/// certificate gap.
pub fn classify_empirical(
    p: &PolynomialShape,
    two_k: u64,
    config: &EstimateConfig,
) -> Result<EmpiricalReport> {
    let k = validate_two_k(two_k)?;
    let theta = theta_truncated(
        p,
        two_k,
        config.a_max,
        config.samples_per_shell,
        config.seed,
        &config.quad,
    )?;
    let fit = decay_fit(&theta.shells, config.epsilon)?;
    let report = criteria::convergence_report(p)?;
    let divergent_hit = report.divergent.iter().find(|c| c.k == k);
    let certified = if let Some(cert) = divergent_hit {
        CertifiedStatus {
            kind: CertifiedKind::Divergent,
            theorems: cert.theorems.clone(),
        }
    } else if let Some(conv) = &report.convergent {
        if k >= conv.k {
            CertifiedStatus {
                kind: CertifiedKind::Convergent,
                theorems: vec![conv.theorem],
            }
        } else {
            CertifiedStatus {
                kind: CertifiedKind::Gap,
                theorems: Vec::new(),
            }
        }
    } else {
        CertifiedStatus {
            kind: CertifiedKind::Gap,
            theorems: Vec::new(),
        }
    };
    let agreement = match (fit.classification, certified.kind) {
        (Classification::Inconclusive, _) => Agreement::Untested,
        (_, CertifiedKind::Gap) => Agreement::Untested,
        (Classification::Converging, CertifiedKind::Convergent) => Agreement::Agrees,
        (Classification::Diverging, CertifiedKind::Divergent) => Agreement::Agrees,
        _ => Agreement::Disagrees,
    };
    let theta_estimate = (fit.classification == Classification::Converging).then_some(theta.total);
    Ok(EmpiricalReport {
        two_k,
        central: theta.central,
        shells: theta.shells,
        fit,
        theta_estimate,
        certified,
        agreement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(r: usize, rows: &[&[u32]]) -> PolynomialShape {
        PolynomialShape::new(r, rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn estimate(shells: &[f64]) -> Vec<ShellEstimate> {
        shells
            .iter()
            .enumerate()
            .map(|(i, &mass)| ShellEstimate {
                a_lo: (1 << i) as f64,
                a_hi: (2 << i) as f64,
                two_k: 2,
                mass,
                std_error: 0.0,
                samples: 1,
            })
            .collect()
    }

    #[test]
    fn inner_integral_at_zero_is_one() {
        let p = shape(1, &[&[1]]);
        let est = inner_integral(&p, &vec![0.0].into(), &QuadConfig::default()).unwrap();
        assert_eq!((est.re, est.im), (1.0, 0.0));
        assert_eq!(est.error_estimate, 0.0);
    }

    #[test]
    fn inner_integral_full_period_vanishes() {
        let p = shape(1, &[&[1]]);
        let est = inner_integral(&p, &vec![1.0].into(), &QuadConfig::default()).unwrap();
        assert!(est.magnitude() < 1e-10, "got {}", est.magnitude());
    }

    #[test]
    fn inner_integral_half_period() {
        // |(e^{i pi} - 1) / (i pi)| = 2 / pi.
        let p = shape(1, &[&[1]]);
        let est = inner_integral(&p, &vec![0.5].into(), &QuadConfig::default()).unwrap();
        assert!((est.magnitude() - 2.0 / std::f64::consts::PI).abs() < 1e-10);
    }

    #[test]
    fn inner_integral_respects_point_cap() {
        let p = shape(2, &[&[1, 1]]);
        let cfg = QuadConfig {
            max_tensor_points: 100,
            ..QuadConfig::default()
        };
        let err = inner_integral(&p, &vec![50.0].into(), &cfg).unwrap_err();
        assert!(matches!(err, Error::ResolutionInsufficient { .. }));
    }

    #[test]
    fn inner_integral_qmc_mode_runs() {
        let p = shape(4, &[&[1, 1, 1, 1]]);
        let est = inner_integral(&p, &vec![0.25].into(), &QuadConfig::default()).unwrap();
        assert!(est.magnitude() <= 1.0 + est.error_estimate);
        assert!(est.points > 0);
    }

    #[test]
    fn degenerate_shell_has_zero_mass() {
        let p = shape(1, &[&[1]]);
        let s = shell_mass(&p, 4, 2.0, 2.0, 100, 1, &QuadConfig::default()).unwrap();
        assert_eq!(s.mass, 0.0);
        assert_eq!(s.std_error, 0.0);
    }

    #[test]
    fn odd_moments_rejected() {
        let p = shape(1, &[&[1]]);
        assert!(matches!(
            shell_mass(&p, 3, 1.0, 2.0, 10, 1, &QuadConfig::default()).unwrap_err(),
            Error::OddMoment { two_k: 3 }
        ));
        assert!(matches!(
            theta_truncated(&p, 0, 8.0, 10, 1, &QuadConfig::default()).unwrap_err(),
            Error::OddMoment { two_k: 0 }
        ));
    }

    #[test]
    fn decay_fit_trivial_sequences() {
        let fit = decay_fit(&estimate(&[1.0, 0.5, 0.25, 0.125]), 0.1).unwrap();
        assert_eq!(fit.classification, Classification::Converging);
        assert!((fit.slope.unwrap() + 1.0).abs() < 1e-12);

        let fit = decay_fit(&estimate(&[1.0, 1.0, 1.0, 1.0]), 0.1).unwrap();
        assert_eq!(fit.classification, Classification::Diverging);
        assert_eq!(fit.slope.unwrap(), 0.0);

        let fit = decay_fit(&estimate(&[1.0, 0.9, 1.1, 0.95]), 0.1).unwrap();
        assert_eq!(fit.classification, Classification::Inconclusive);

        let fit = decay_fit(&estimate(&[1.0, 0.0, 0.0, 0.0]), 0.1).unwrap();
        assert_eq!(fit.classification, Classification::Inconclusive);
        assert!(fit.slope.is_none());

        assert!(matches!(
            decay_fit(&estimate(&[1.0, 0.5]), 0.1).unwrap_err(),
            Error::TooFewShells { .. }
        ));
    }

    #[test]
    fn shell_sampler_stays_in_shell() {
        let mut rng = shard_rng(3, 0);
        let mut point = Vec::new();
        for _ in 0..500 {
            sample_shell_point(&mut rng, 3, 2.0, 4.0, &mut point);
            let norm = point.iter().fold(0.0f64, |m, &c| m.max(c.abs()));
            assert!((2.0..4.0).contains(&norm), "norm {norm}");
        }
        // a_lo = 0 samples the whole box.
        for _ in 0..100 {
            sample_shell_point(&mut rng, 2, 0.0, 1.0, &mut point);
            assert!(point.iter().all(|&c| c.abs() < 1.0));
        }
    }
}
