//! Excitation signals and ARX least-squares identification for the finger
//! bending dynamics.

use crate::error::{CoreError, Result};
use crate::lti::TransferFunction;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// A generated excitation sequence together with how it was made.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitationSignal {
    pub samples: Vec<f64>,
    pub levels: Vec<f64>,
    pub seed: u64,
}

/// Pseudo-random multi-level sequence: each sample is drawn uniformly from
/// `levels`. Deterministic for a given seed.
pub fn prbs(levels: &[f64], len: usize, seed: u64) -> Result<ExcitationSignal> {
    if levels.len() < 2 {
        return Err(CoreError::InvalidInput(
            "excitation needs at least two distinct levels".into(),
        ));
    }
    if len == 0 {
        return Err(CoreError::InvalidInput("empty excitation requested".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..len)
        .map(|_| levels[rng.gen_range(0..levels.len())])
        .collect();
    Ok(ExcitationSignal {
        samples,
        levels: levels.to_vec(),
        seed,
    })
}

/// Identified second-order ARX model
/// `y(k) = -a1 y(k-1) - a2 y(k-2) + b1 u(k-1) + b2 u(k-2) + e(k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArxEstimate {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
    /// Unbiased variance of the one-step-ahead residuals.
    pub residual_variance: f64,
    /// 100 * (1 - ||y - yhat|| / ||y - mean(y)||), one-step predictions.
    pub fit_percent: f64,
    /// 2-norm condition number of the regressor normal matrix.
    pub condition: f64,
}

impl ArxEstimate {
    /// The estimate as a transfer function at the given sample time.
    pub fn transfer_function(&self, dt: f64) -> Result<TransferFunction> {
        TransferFunction::new(vec![self.b1, self.b2], vec![1.0, self.a1, self.a2], dt)
    }

    /// True when the regressors were poorly conditioned and the coefficients
    /// should be treated with suspicion.
    pub fn ill_conditioned(&self) -> bool {
        self.condition > 1e8
    }
}

/// Fits the ARX(2, 2, 1) model by least squares on the normal equations,
/// solved with a fully pivoted factorization.
///
/// Returns `Unidentifiable` when the regressor matrix is effectively rank
/// deficient (for example from constant input), since no unique model
/// explains such data.
pub fn fit_arx(input: &[f64], output: &[f64]) -> Result<ArxEstimate> {
    if input.len() != output.len() {
        return Err(CoreError::InvalidInput(format!(
            "input/output length mismatch: {} vs {}",
            input.len(),
            output.len()
        )));
    }
    let n = input.len();
    if n < 12 {
        return Err(CoreError::InvalidInput(
            "need at least 12 samples to fit four coefficients".into(),
        ));
    }
    let rows = n - 2;
    let mut phi = DMatrix::<f64>::zeros(rows, 4);
    let mut yv = DVector::<f64>::zeros(rows);
    for k in 2..n {
        let r = k - 2;
        phi[(r, 0)] = -output[k - 1];
        phi[(r, 1)] = -output[k - 2];
        phi[(r, 2)] = input[k - 1];
        phi[(r, 3)] = input[k - 2];
        yv[r] = output[k];
    }
    let gram = phi.transpose() * &phi;
    let rhs = phi.transpose() * &yv;
    let svd = gram.clone().svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !condition.is_finite() || condition > 1e12 {
        return Err(CoreError::Unidentifiable(condition));
    }
    let theta = gram
        .full_piv_lu()
        .solve(&rhs)
        .ok_or(CoreError::Unidentifiable(condition))?;
    let (a1, a2, b1, b2) = (theta[0], theta[1], theta[2], theta[3]);

    let residuals = &yv - &phi * &theta;
    let dof = (rows as f64 - 4.0).max(1.0);
    let residual_variance = residuals.norm_squared() / dof;
    let mean = yv.mean();
    let spread = yv.iter().map(|v| (v - mean).powi(2)).sum::<f64>().sqrt();
    // Constant output carries no information to fit against; report 0 by
    // convention rather than dividing by zero.
    let fit_percent = if spread > 0.0 {
        100.0 * (1.0 - residuals.norm() / spread)
    } else {
        0.0
    };
    Ok(ArxEstimate {
        a1,
        a2,
        b1,
        b2,
        residual_variance,
        fit_percent,
        condition,
    })
}
