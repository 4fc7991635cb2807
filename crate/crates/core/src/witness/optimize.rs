//! Numeric maximization of the witnesses over local settings. Used to
//! cross-check the closed-form maxima.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{project_state, TwoQubitCorrelations, WitnessSettings};
use crate::generators::{GeneratorPair, ObservableTriad};
use crate::qstate::DensityMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    Bell,
    Nonlinear,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    /// Independent random starts.
    pub restarts: usize,
    /// Evaluation budget per start.
    pub max_evals: usize,
    /// Stop once the simplex is smaller than this (radians).
    pub step_tol: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 32,
            max_evals: 2000,
            step_tol: 1e-7,
            seed: 0,
        }
    }
}

/// Minimizes `f` with Nelder-Mead from `x0`. Returns the best point and its
/// value.
pub fn nelder_mead<F>(
    f: F,
    x0: &[f64],
    initial_step: f64,
    max_evals: usize,
    step_tol: f64,
) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let mut evals = n + 1;

    let blend = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
    };

    while evals < max_evals {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let size = simplex[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&simplex[0])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if size < step_tol {
            break;
        }

        let mut centroid = vec![0.0; n];
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }

        let worst = simplex[n].clone();
        let reflected = blend(&centroid, &worst, -1.0);
        let fr = f(&reflected);
        evals += 1;
        if fr < values[0] {
            let expanded = blend(&centroid, &worst, -2.0);
            let fe = f(&expanded);
            evals += 1;
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
        } else {
            let (contracted, fc) = if fr < values[n] {
                let p = blend(&centroid, &worst, -0.5);
                let v = f(&p);
                (p, v)
            } else {
                let p = blend(&centroid, &worst, 0.5);
                let v = f(&p);
                (p, v)
            };
            evals += 1;
            if fc < values[n].min(fr) {
                simplex[n] = contracted;
                values[n] = fc;
            } else {
                let best = simplex[0].clone();
                for i in 1..=n {
                    simplex[i] = blend(&best, &simplex[i], 0.5);
                    values[i] = f(&simplex[i]);
                }
                evals += n;
            }
        }
    }

    let best = (0..=n)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .unwrap();
    (simplex[best].clone(), values[best])
}

fn settings_from_params(alpha: GeneratorPair, beta: GeneratorPair, x: &[f64]) -> WitnessSettings {
    let ta = ObservableTriad::from_angles([x[0], x[1], x[2]]);
    let tb = ObservableTriad::from_angles([x[3], x[4], x[5]]);
    let s = WitnessSettings::new(alpha, beta, ta, tb).expect("both triads are right-handed");
    match x.get(6) {
        Some(&phi) => s.with_bell_skew(phi),
        None => s,
    }
}

/// Maximizes the normalized witness of `kind` on subspace `(α, β)` over
/// right-handed triads (plus the Bell skew angle for the Bell witness).
/// Deterministic for a given `cfg.seed`.
pub fn optimize_settings(
    rho: &DensityMatrix,
    alpha: &GeneratorPair,
    beta: &GeneratorPair,
    kind: WitnessKind,
    cfg: &OptimizerConfig,
) -> Result<(WitnessSettings, f64)> {
    let proj = project_state(rho, alpha, beta)?;
    let rho_ab = proj.rho_ab.ok_or(Error::EmptySubspace { c: proj.c })?;
    let corr = TwoQubitCorrelations::from_matrix(rho_ab.matrix());
    let (alpha, beta) = (*alpha, *beta);

    let objective = |x: &[f64]| -> f64 {
        let s = settings_from_params(alpha, beta, x);
        -match kind {
            WitnessKind::Nonlinear => corr.nonlinear(s.triad_a(), s.triad_b()),
            WitnessKind::Bell => corr.bell(&s.bell_axes()),
        }
    };
    let dim = match kind {
        WitnessKind::Nonlinear => 6,
        WitnessKind::Bell => 7,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best: Option<(Vec<f64>, f64)> = None;
    for _ in 0..cfg.restarts.max(1) {
        let x0: Vec<f64> = (0..dim).map(|_| rng.random_range(-PI..PI)).collect();
        let (x, v) = nelder_mead(objective, &x0, 0.5, cfg.max_evals, cfg.step_tol);
        if best.as_ref().is_none_or(|(_, bv)| v < *bv) {
            best = Some((x, v));
        }
    }
    let (x, v) = best.expect("at least one restart");
    // Restart once from the winner with a fresh, smaller simplex.
    let (xp, vp) = nelder_mead(objective, &x, 0.05, cfg.max_evals, cfg.step_tol);
    let (x, v) = if vp < v { (xp, vp) } else { (x, v) };
    Ok((settings_from_params(alpha, beta, &x), -v))
}
