//! Rounded logistic regression, the comparison point for the lattice search.

use crate::data::Dataset;
use crate::error::Result;
use crate::rational::Rational;
use crate::scoring::lattice::CoefficientBounds;
use crate::scoring::loss::LossData;
use crate::scoring::system::ScoringSystem;

pub const GRADIENT_TOLERANCE: f64 = 1e-8;
pub const MAX_ITERATIONS: usize = 20_000;

/// Unpenalized logistic regression fitted by gradient descent.
#[derive(Clone, Debug, PartialEq)]
pub struct LogisticFit {
    /// Intercept first.
    pub coefficients: Vec<f64>,
    pub loss: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Gradient descent with Barzilai-Borwein trial steps and Armijo
/// backtracking, until the gradient norm drops below `tolerance`.
pub fn fit_logistic(data: &LossData, tolerance: f64, max_iterations: usize) -> LogisticFit {
    let d = data.p() + 1;
    let mut b = vec![0.0; d];
    let (mut loss, mut grad) = data.loss_and_gradient(&b);
    let mut step = 1.0;
    let mut iterations = 0;
    let norm = |g: &[f64]| g.iter().map(|x| x * x).sum::<f64>().sqrt();
    while norm(&grad) > tolerance && iterations < max_iterations {
        iterations += 1;
        let g2 = grad.iter().map(|x| x * x).sum::<f64>();
        let mut t = step;
        let (next, next_loss, next_grad) = loop {
            let cand: Vec<f64> = b.iter().zip(&grad).map(|(x, g)| x - t * g).collect();
            let (l, g) = data.loss_and_gradient(&cand);
            if l <= loss - 1e-4 * t * g2 || t < 1e-12 {
                break (cand, l, g);
            }
            t *= 0.5;
        };
        // Barzilai-Borwein guess for the next step
        let s: Vec<f64> = next.iter().zip(&b).map(|(a, c)| a - c).collect();
        let y: Vec<f64> = next_grad.iter().zip(&grad).map(|(a, c)| a - c).collect();
        let sy: f64 = s.iter().zip(&y).map(|(a, c)| a * c).sum();
        let ss: f64 = s.iter().map(|a| a * a).sum();
        step = if sy > 1e-300 { (ss / sy).clamp(1e-6, 1e6) } else { t * 2.0 };
        let stalled = next_loss >= loss && t < 1e-12;
        b = next;
        loss = next_loss;
        grad = next_grad;
        if stalled {
            break;
        }
    }
    let gradient_norm = norm(&grad);
    LogisticFit {
        coefficients: b,
        loss,
        gradient_norm,
        iterations,
        converged: gradient_norm <= tolerance,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Baseline {
    pub system: ScoringSystem,
    pub fit: LogisticFit,
    /// Factor applied to the fitted coefficients before rounding.
    pub scale: f64,
}

/// Fits logistic regression, scales it so the largest feature coefficient
/// has magnitude `min(|coef_min|, coef_max)`, then rounds to the nearest
/// integers and clamps to `bounds`.
pub fn round_logreg_baseline(ds: &Dataset, bounds: &CoefficientBounds, lambda: Rational) -> Result<Baseline> {
    bounds.validate()?;
    let data = LossData::new(ds);
    let fit = fit_logistic(&data, GRADIENT_TOLERANCE, MAX_ITERATIONS);
    if !fit.converged {
        log::warn!(
            "logistic regression stopped after {} iterations with gradient norm {:.3e}",
            fit.iterations,
            fit.gradient_norm
        );
    }
    let largest = fit.coefficients[1..].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let target = match bounds.coef_min.abs().min(bounds.coef_max.abs()) {
        0 => bounds.coef_min.abs().max(bounds.coef_max.abs()),
        t => t,
    } as f64;
    let scale = if largest > 1e-12 { target / largest } else { 1.0 };
    let round = |v: f64, lo: i64, hi: i64| ((v * scale).round() as i64).clamp(lo, hi);
    let intercept = round(fit.coefficients[0], bounds.intercept_min, bounds.intercept_max);
    let coefficients = fit.coefficients[1..]
        .iter()
        .map(|&c| round(c, bounds.coef_min, bounds.coef_max))
        .collect();
    let system = ScoringSystem::new(
        intercept,
        coefficients,
        ds.feature_names().iter().map(|s| s.to_string()).collect(),
        lambda,
    )?;
    Ok(Baseline { system, fit, scale })
}
