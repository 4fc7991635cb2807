//! Lower bound on the convex-roof extended negativity (CREN) from the
//! subspace witness violations.
//!
//! The CREN of a mixed state is the minimum, over ensemble decompositions
//! `ρ = Σ p_k |ψ_k⟩⟨ψ_k|`, of the average pure-state negativity. It is never
//! computed here; it is the quantity being bounded:
//!
//! ```text
//! N_m(ρ) ≥ 1/(M-1) Σ_αβ |C_αβ| (X_αβ/2 + 1) - (N-1)
//! ```
//!
//! with `M ≤ N` the party dimensions, `X_αβ = max(0, d_αβ)` and `d_αβ` the
//! maximal violation of the normalized nonlinear witness on subspace
//! `(α, β)`. For square systems the offset is the familiar `M - 1`.

use serde::Serialize;

use crate::generators::pairs;
use crate::qstate::{
    complexify, negativity, partial_transpose_matrix, pure_negativity, trace_norm, DensityMatrix,
    Dims, PureState,
};
use crate::witness::{subspace_reports, SubspaceReport};
use crate::{tolerance, Error, Result};

/// How the violation `d` is clipped before entering the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClipMode {
    /// `X = max(0, d)`: only violating subspaces add weight. Exact on
    /// Schmidt-form pure states.
    #[default]
    Max,
    /// `X = min(0, d)`, as the formula is literally printed. Never exceeds
    /// the trivial bound; kept for comparison.
    LiteralMin,
}

impl ClipMode {
    pub fn clip(self, d: f64) -> f64 {
        match self {
            ClipMode::Max => d.max(0.0),
            ClipMode::LiteralMin => d.min(0.0),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CrenBoundReport {
    pub bound: f64,
    /// Plain negativity of the state, for comparison.
    pub negativity: f64,
    /// `M = min(m, n)`.
    #[serde(rename = "m")]
    pub m_normalizer: usize,
    /// `Σ_αβ |C_αβ|` over non-empty subspaces.
    pub sum_c: f64,
    pub clip: ClipMode,
    #[serde(rename = "subspaces")]
    pub reports: Vec<SubspaceReport>,
}

/// The bound with the shipped `X = max(0, d)` convention.
pub fn cren_lower_bound(rho: &DensityMatrix) -> CrenBoundReport {
    cren_lower_bound_with(rho, ClipMode::Max)
}

pub fn cren_lower_bound_with(rho: &DensityMatrix, clip: ClipMode) -> CrenBoundReport {
    let dims = rho.dims();
    let reports = subspace_reports(rho);
    let sum_c = reports
        .iter()
        .filter(|r| !r.is_empty())
        .map(|r| r.c.abs())
        .sum();
    CrenBoundReport {
        bound: bound_from_reports(&reports, dims, clip),
        negativity: negativity(rho),
        m_normalizer: dims.min_party(),
        sum_c,
        clip,
        reports,
    }
}

/// Evaluates the bound from per-subspace data, summing in report order.
/// Only `c` and `d` are read; `x` is recomputed with `clip`.
pub fn bound_from_reports(reports: &[SubspaceReport], dims: Dims, clip: ClipMode) -> f64 {
    let m1 = (dims.min_party() - 1) as f64;
    let n1 = (dims.max_party() - 1) as f64;
    let total: f64 = reports
        .iter()
        .filter(|r| !r.is_empty())
        .map(|r| r.c.abs() * (clip.clip(r.d) / 2.0 + 1.0))
        .sum();
    total / m1 - n1
}

/// Both sides of the pure-state trace-norm identity for a state of the
/// form `Σ_i √μ_i |ii⟩` (phases allowed):
///
/// ```text
/// Σ_αβ ‖(L_α⊗L_β) (|ψ⟩⟨ψ|)^{T_A} (L_α⊗L_β)‖ = (M-1)(N-1) + 2 Σ_{i<j} √(μ_i μ_j)
/// ```
///
/// The left side is computed by full-space trace norms.
pub fn pure_sum_identity(psi: &PureState) -> Result<(f64, f64)> {
    let dims = psi.dims();
    let coeff = psi.coefficient_matrix();
    let mut offdiag = 0.0f64;
    for i in 0..dims.m() {
        for a in 0..dims.n() {
            if i != a {
                offdiag = offdiag.max(coeff[(i, a)].norm());
            }
        }
    }
    if offdiag > tolerance::NORM {
        return Err(Error::NotSchmidtForm { offdiag });
    }

    let pt = partial_transpose_matrix(&psi.projector(), dims);
    let mut lhs = 0.0;
    for alpha in pairs(dims.m())? {
        for beta in pairs(dims.n())? {
            let ll = complexify(&alpha.generator().kronecker(&beta.generator()));
            lhs += trace_norm(&(&ll * &pt * &ll))?;
        }
    }

    let mu: Vec<f64> = (0..dims.min_party())
        .map(|i| coeff[(i, i)].norm_sqr())
        .collect();
    let mut cross = 0.0;
    for i in 0..mu.len() {
        for j in i + 1..mu.len() {
            cross += (mu[i] * mu[j]).sqrt();
        }
    }
    let rhs = ((dims.m() - 1) * (dims.n() - 1)) as f64 + 2.0 * cross;
    Ok((lhs, rhs))
}

/// CREN of a pure state, which is its negativity.
pub fn cren_pure(psi: &PureState) -> f64 {
    pure_negativity(psi)
}

/// `bound - N(ψ)` for a pure state. Zero on canonical Schmidt-form states;
/// in other bases this measures how far the basis-fixed generators leave
/// the bound from the exact value.
pub fn pure_bound_gap(psi: &PureState) -> f64 {
    cren_lower_bound(&DensityMatrix::from_pure(psi)).bound - cren_pure(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states;

    #[test]
    fn max_entangled_qutrits_bound_is_one() {
        let rho = DensityMatrix::from_pure(&states::max_entangled(3).unwrap());
        let report = cren_lower_bound(&rho);
        assert!((report.bound - 1.0).abs() < 1e-12);
        assert!((report.sum_c - 4.0).abs() < 1e-12);
        assert_eq!(report.m_normalizer, 3);
        assert!((report.negativity - 1.0).abs() < 1e-12);

        // Hand count: three diagonal subspaces with C = 2/3, X = 2; six
        // off-diagonal ones with C = 1/3, X = 0.
        let diag: Vec<_> = report
            .reports
            .iter()
            .filter(|r| r.alpha == r.beta)
            .collect();
        assert_eq!(diag.len(), 3);
        for r in diag {
            assert!((r.c - 2.0 / 3.0).abs() < 1e-12 && (r.x - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn literal_min_collapses_to_zero_on_max_entangled() {
        let rho = DensityMatrix::from_pure(&states::max_entangled(3).unwrap());
        let report = cren_lower_bound_with(&rho, ClipMode::LiteralMin);
        assert!(report.bound.abs() < 1e-12);
    }

    #[test]
    fn product_state_bound_is_zero() {
        let psi = states::pure_from_schmidt(&[1.0], 3).unwrap();
        let (lhs, rhs) = pure_sum_identity(&psi).unwrap();
        assert!((lhs - 4.0).abs() < 1e-12 && (rhs - 4.0).abs() < 1e-12);
        assert!(
            cren_lower_bound(&DensityMatrix::from_pure(&psi))
                .bound
                .abs()
                < 1e-12
        );
    }

    #[test]
    fn sum_identity_for_uniform_spectrum() {
        let psi = states::max_entangled(3).unwrap();
        let (lhs, rhs) = pure_sum_identity(&psi).unwrap();
        assert!((lhs - 6.0).abs() < 1e-12 && (rhs - 6.0).abs() < 1e-12);
    }

    #[test]
    fn sum_identity_rejects_rotated_states() {
        let psi = states::random_pure(Dims::square(3).unwrap(), 4);
        assert!(matches!(
            pure_sum_identity(&psi),
            Err(Error::NotSchmidtForm { .. })
        ));
    }

    #[test]
    fn cren_pure_matches_negativity() {
        assert!(cren_pure(&states::pure_from_schmidt(&[1.0], 2).unwrap()).abs() < 1e-12);
        assert!((cren_pure(&states::max_entangled(2).unwrap()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn separable_rectangular_state_has_zero_bound() {
        let rho = states::random_separable(Dims::new(2, 4).unwrap(), 5, 1).unwrap();
        assert!(cren_lower_bound(&rho).bound.abs() < 1e-12);
    }
}
