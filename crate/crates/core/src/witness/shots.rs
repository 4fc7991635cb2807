//! Finite-shot estimation of mean values by sampling projective
//! measurements with Born-rule probabilities.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{nonlinear_operators, WitnessSettings};
use crate::generators::subspace_projector;
use crate::qstate::{complexify, hermitian_deviation, hermitian_eigen, DensityMatrix};
use crate::{tolerance, CMatrix, Error, Result};

/// Eigenvalues closer than this are merged into one measurement outcome.
const DEGENERACY: f64 = 1e-9;
/// Outcome probabilities below this are rounding noise and set to zero.
const PROBABILITY_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShotEstimate {
    pub mean: f64,
    /// Sample standard deviation over `√shots`.
    pub stderr: f64,
    pub shots: usize,
}

/// Simulates `shots` measurements of `obs` on `rho`.
pub fn estimate_mean_shots(
    rho: &DensityMatrix,
    obs: &CMatrix,
    shots: usize,
    seed: u64,
) -> Result<ShotEstimate> {
    if shots == 0 {
        return Err(Error::NoShots);
    }
    let side = rho.dims().total();
    if obs.nrows() != side || obs.ncols() != side {
        return Err(Error::DimensionMismatch {
            expected: side,
            rows: obs.nrows(),
            cols: obs.ncols(),
        });
    }
    let deviation = hermitian_deviation(obs);
    if deviation > tolerance::HERMITIAN {
        return Err(Error::NotHermitian { deviation });
    }

    let (values, vectors) = hermitian_eigen(obs);
    let mut outcomes: Vec<f64> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    let mut group: Vec<f64> = Vec::new();
    let mut group_weight = 0.0;
    for (i, &lambda) in values.iter().enumerate() {
        if let Some(&first) = group.first() {
            if lambda - first > DEGENERACY {
                outcomes.push(group.iter().sum::<f64>() / group.len() as f64);
                weights.push(group_weight);
                group.clear();
                group_weight = 0.0;
            }
        }
        let e = vectors.column(i);
        group.push(lambda);
        group_weight += (e.adjoint() * rho.matrix() * e)[(0, 0)].re;
    }
    outcomes.push(group.iter().sum::<f64>() / group.len() as f64);
    weights.push(group_weight);
    for w in weights.iter_mut() {
        if *w < PROBABILITY_FLOOR {
            *w = 0.0;
        }
    }

    let dist = WeightedIndex::new(&weights)
        .map_err(|e| Error::Malformed(format!("outcome distribution: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..shots {
        let v = outcomes[dist.sample(&mut rng)];
        sum += v;
        sum_sq += v * v;
    }
    let n = shots as f64;
    let mean = sum / n;
    let var = if shots > 1 {
        ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(ShotEstimate {
        mean,
        stderr: (var / n).sqrt(),
        shots,
    })
}

/// Shot estimates of every mean value entering the normalized nonlinear
/// witness at fixed settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearShotEstimate {
    /// `⟨Π_α⊗Π_β⟩`, the weight `C_αβ`.
    pub weight: ShotEstimate,
    pub correlation: ShotEstimate,
    pub local: ShotEstimate,
    pub zz: ShotEstimate,
    /// Normalized witness value assembled from the estimates.
    pub value: f64,
}

/// Each operator is measured with its own `shots` budget; seeds are
/// `seed, seed + 1, ...` in the order weight, correlation, local, zz.
pub fn estimate_nonlinear_shots(
    rho: &DensityMatrix,
    s: &WitnessSettings,
    shots: usize,
    seed: u64,
) -> Result<NonlinearShotEstimate> {
    let [corr, local, zz] = nonlinear_operators(s)?;
    let weight_op =
        complexify(&subspace_projector(&s.alpha).kronecker(&subspace_projector(&s.beta)));
    let weight = estimate_mean_shots(rho, &weight_op, shots, seed)?;
    let correlation = estimate_mean_shots(rho, &corr, shots, seed.wrapping_add(1))?;
    let local = estimate_mean_shots(rho, &local, shots, seed.wrapping_add(2))?;
    let zz = estimate_mean_shots(rho, &zz, shots, seed.wrapping_add(3))?;
    if weight.mean <= tolerance::EMPTY_SUBSPACE {
        return Err(Error::EmptySubspace { c: weight.mean });
    }
    let value = (correlation.mean.hypot(local.mean) - zz.mean) / weight.mean;
    Ok(NonlinearShotEstimate {
        weight,
        correlation,
        local,
        zz,
        value,
    })
}
