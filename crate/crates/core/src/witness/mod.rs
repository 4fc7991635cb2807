//! Bell and nonlinear entanglement witnesses on two-qubit subspace
//! projections of a bipartite state.
//!
//! For a pair of generators `(L_α, L_β)` the state is compressed onto the
//! `2 x 2` product subspace they select,
//! `ρ_αβ = (L_α⊗L_β) ρ (L_α⊗L_β)† / C_αβ`, and the two-qubit witnesses are
//! evaluated there. Every quantity is available in two forms: on the full
//! state with the embedded "tilde" operators, and on the extracted 4x4 block.
//! The two agree exactly; the block form is what the sweeps use.

mod optimize;
mod report;
mod shots;

pub use optimize::{nelder_mead, optimize_settings, OptimizerConfig, WitnessKind};
pub use report::{format_sig, reports_from_csv, reports_to_csv, SUBSPACE_CSV_HEADER};
pub use shots::{
    estimate_mean_shots, estimate_nonlinear_shots, NonlinearShotEstimate, ShotEstimate,
};

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use crate::generators::{
    embed_observable, pairs, pauli, subspace_projector, tilde_operator, GeneratorPair,
    ObservableTriad,
};
use crate::qstate::{
    complexify, hermitian_eigenvalues, partial_transpose, partial_transpose_matrix, DensityMatrix,
    Dims,
};
use crate::{tolerance, CMatrix, Error, Result, C64};

/// Local settings for one subspace pair: a triad per party, plus the Bell
/// skew angle `φ` that tilts B's second Bell observable toward the first
/// (`B2 = cos φ b2 + sin φ b1`). With `φ = 0` the Bell operator uses the
/// triad rows directly; the nonlinear witness never uses `φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessSettings {
    pub alpha: GeneratorPair,
    pub beta: GeneratorPair,
    triad_a: ObservableTriad,
    triad_b: ObservableTriad,
    bell_skew: f64,
}

impl WitnessSettings {
    pub fn new(
        alpha: GeneratorPair,
        beta: GeneratorPair,
        triad_a: ObservableTriad,
        triad_b: ObservableTriad,
    ) -> Result<Self> {
        if triad_a.orientation() != triad_b.orientation() {
            return Err(Error::MixedOrientation);
        }
        Ok(WitnessSettings {
            alpha,
            beta,
            triad_a,
            triad_b,
            bell_skew: 0.0,
        })
    }

    pub fn with_bell_skew(mut self, phi: f64) -> Self {
        self.bell_skew = phi;
        self
    }

    pub fn triad_a(&self) -> &ObservableTriad {
        &self.triad_a
    }

    pub fn triad_b(&self) -> &ObservableTriad {
        &self.triad_b
    }

    pub fn bell_skew(&self) -> f64 {
        self.bell_skew
    }

    /// Bloch vectors of `(A1, A2, B1, B2)` entering the Bell operator.
    pub fn bell_axes(&self) -> [Vector3<f64>; 4] {
        let b1 = self.triad_b.axis(0);
        let b2 = self.triad_b.axis(1) * self.bell_skew.cos() + b1 * self.bell_skew.sin();
        [self.triad_a.axis(0), self.triad_a.axis(1), b1, b2]
    }
}

/// A state compressed onto one pair of local two-dimensional subspaces.
#[derive(Debug, Clone)]
pub struct ProjectedState {
    /// Weight `C_αβ = Tr((L_α⊗L_β) ρ (L_α⊗L_β)†)`.
    pub c: f64,
    /// Normalized two-qubit state, `None` when `c ≤ τ_c`. Qubit basis:
    /// `|0⟩ ↔ |j⟩`, `|1⟩ ↔ |k⟩` on each side.
    pub rho_ab: Option<DensityMatrix>,
}

fn check_pairs(rho: &DensityMatrix, alpha: &GeneratorPair, beta: &GeneratorPair) -> Result<()> {
    let dims = rho.dims();
    if alpha.dim() != dims.m() {
        return Err(Error::InvalidPair {
            j: alpha.j(),
            k: alpha.k(),
            dim: dims.m(),
        });
    }
    if beta.dim() != dims.n() {
        return Err(Error::InvalidPair {
            j: beta.j(),
            k: beta.k(),
            dim: dims.n(),
        });
    }
    Ok(())
}

/// The unnormalized 4x4 block of `(L_α⊗L_β) ρ (L_α⊗L_β)†` on
/// `{j,k}×{l,m}`.
fn compressed_block(rho: &DensityMatrix, alpha: &GeneratorPair, beta: &GeneratorPair) -> CMatrix {
    let dims = rho.dims();
    let idx = [
        dims.index(alpha.j(), beta.j()),
        dims.index(alpha.j(), beta.k()),
        dims.index(alpha.k(), beta.j()),
        dims.index(alpha.k(), beta.k()),
    ];
    let mat = rho.matrix();
    let block = CMatrix::from_fn(4, 4, |r, c| mat[(idx[r], idx[c])]);
    // Restricted to its subspace each generator is [[0, 1], [-1, 0]].
    let l = CMatrix::from_row_slice(
        2,
        2,
        &[
            C64::from(0.0),
            C64::from(1.0),
            C64::from(-1.0),
            C64::from(0.0),
        ],
    );
    let ll = l.kronecker(&l);
    &ll * block * ll.adjoint()
}

pub fn project_state(
    rho: &DensityMatrix,
    alpha: &GeneratorPair,
    beta: &GeneratorPair,
) -> Result<ProjectedState> {
    check_pairs(rho, alpha, beta)?;
    let block = compressed_block(rho, alpha, beta);
    let c = block.trace().re;
    let rho_ab = (c > tolerance::EMPTY_SUBSPACE)
        .then(|| DensityMatrix::new_unchecked(block * C64::from(1.0 / c), two_qubit_dims()));
    Ok(ProjectedState { c, rho_ab })
}

fn two_qubit_dims() -> Dims {
    Dims::square(2).expect("2x2 is valid")
}

/// `Tr(L_α⊗L_β ρ^{T_A} L_α⊗L_β)` evaluated on the full partially transposed
/// matrix. Equals the projection weight `C_αβ`.
pub fn c_coefficient(
    rho: &DensityMatrix,
    alpha: &GeneratorPair,
    beta: &GeneratorPair,
) -> Result<f64> {
    check_pairs(rho, alpha, beta)?;
    let ll = complexify(&alpha.generator().kronecker(&beta.generator()));
    let pt = partial_transpose(rho);
    Ok((&ll * pt * &ll).trace().re)
}

/// Bloch data of a two-qubit state: local vectors and correlation matrix
/// `T_ij = Tr(ρ σ_i⊗σ_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitCorrelations {
    pub local_a: Vector3<f64>,
    pub local_b: Vector3<f64>,
    pub t: Matrix3<f64>,
}

impl TwoQubitCorrelations {
    /// `rho` must be 4x4 in the `|00⟩, |01⟩, |10⟩, |11⟩` order.
    pub fn from_matrix(rho: &CMatrix) -> Self {
        let s = pauli();
        let id = nalgebra::Matrix2::<C64>::identity();
        let expect = |a: &nalgebra::Matrix2<C64>, b: &nalgebra::Matrix2<C64>| -> f64 {
            let op = a.kronecker(b);
            let mut acc = C64::from(0.0);
            for r in 0..4 {
                for c in 0..4 {
                    acc += rho[(r, c)] * op[(c, r)];
                }
            }
            acc.re
        };
        TwoQubitCorrelations {
            local_a: Vector3::from_fn(|i, _| expect(&s[i], &id)),
            local_b: Vector3::from_fn(|i, _| expect(&id, &s[i])),
            t: Matrix3::from_fn(|i, j| expect(&s[i], &s[j])),
        }
    }

    fn corr(&self, a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
        a.dot(&(self.t * b))
    }

    /// `√(⟨A1B1 + A2B2⟩² + ⟨A3 + B3⟩²) - ⟨A3B3⟩`.
    pub fn nonlinear(&self, triad_a: &ObservableTriad, triad_b: &ObservableTriad) -> f64 {
        let a: [Vector3<f64>; 3] = std::array::from_fn(|i| triad_a.axis(i));
        let b: [Vector3<f64>; 3] = std::array::from_fn(|i| triad_b.axis(i));
        let u = self.corr(&a[0], &b[0]) + self.corr(&a[1], &b[1]);
        let v = a[2].dot(&self.local_a) + b[2].dot(&self.local_b);
        u.hypot(v) - self.corr(&a[2], &b[2])
    }

    /// `⟨A1B1 + A1B2 + A2B1 - A2B2⟩` for Bloch axes `[a1, a2, b1, b2]`.
    pub fn bell(&self, axes: &[Vector3<f64>; 4]) -> f64 {
        let [a1, a2, b1, b2] = axes;
        self.corr(a1, b1) + self.corr(a1, b2) + self.corr(a2, b1) - self.corr(a2, b2)
    }

    /// Maximal CHSH value `2√(s1² + s2²)` over the two largest singular
    /// values of `T`.
    pub fn bell_max(&self) -> f64 {
        let mut s: Vec<f64> = self.t.singular_values().iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        2.0 * (s[0] * s[0] + s[1] * s[1]).sqrt()
    }
}

/// Smallest eigenvalue of the partial transpose of a 4x4 two-qubit matrix.
pub fn two_qubit_lambda_min(rho_ab: &CMatrix) -> f64 {
    hermitian_eigenvalues(&partial_transpose_matrix(rho_ab, two_qubit_dims()))[0]
}

/// The embedded operators `(Ã_1, Ã_2, Ã_3)` and `(B̃_1, B̃_2, B̃_3)`.
fn tilde_triads(s: &WitnessSettings) -> Result<([CMatrix; 3], [CMatrix; 3])> {
    let tilde = |pair: &GeneratorPair, axis: Vector3<f64>| -> Result<CMatrix> {
        tilde_operator(pair, &embed_observable(*pair, &axis)?)
    };
    let a = [
        tilde(&s.alpha, s.triad_a.axis(0))?,
        tilde(&s.alpha, s.triad_a.axis(1))?,
        tilde(&s.alpha, s.triad_a.axis(2))?,
    ];
    let b = [
        tilde(&s.beta, s.triad_b.axis(0))?,
        tilde(&s.beta, s.triad_b.axis(1))?,
        tilde(&s.beta, s.triad_b.axis(2))?,
    ];
    Ok((a, b))
}

/// The Bell operator `Ã1⊗B̃1 + Ã1⊗B̃2 + Ã2⊗B̃1 - Ã2⊗B̃2` on the full space.
pub fn bell_operator(s: &WitnessSettings) -> Result<CMatrix> {
    let [a1, a2, b1, b2] = s.bell_axes();
    let tilde = |pair: &GeneratorPair, axis: Vector3<f64>| -> Result<CMatrix> {
        tilde_operator(pair, &embed_observable(*pair, &axis)?)
    };
    let (ta1, ta2) = (tilde(&s.alpha, a1)?, tilde(&s.alpha, a2)?);
    let (tb1, tb2) = (tilde(&s.beta, b1)?, tilde(&s.beta, b2)?);
    Ok(ta1.kronecker(&tb1) + ta1.kronecker(&tb2) + ta2.kronecker(&tb1) - ta2.kronecker(&tb2))
}

/// The three Hermitian operators whose mean values make up the nonlinear
/// witness: `Ã1⊗B̃1 + Ã2⊗B̃2`, `Ã3⊗Π_β + Π_α⊗B̃3` and `Ã3⊗B̃3`.
///
/// The single-party term carries the partner's subspace projector so that
/// its mean, divided by `C_αβ`, is `⟨A3⊗I + I⊗B3⟩` on the projected state.
pub fn nonlinear_operators(s: &WitnessSettings) -> Result<[CMatrix; 3]> {
    let (a, b) = tilde_triads(s)?;
    let pa = complexify(&subspace_projector(&s.alpha));
    let pb = complexify(&subspace_projector(&s.beta));
    Ok([
        a[0].kronecker(&b[0]) + a[1].kronecker(&b[1]),
        a[2].kronecker(&pb) + pa.kronecker(&b[2]),
        a[2].kronecker(&b[2]),
    ])
}

/// `⟨B_αβ⟩_ρ` on the full state.
pub fn bell_value(rho: &DensityMatrix, s: &WitnessSettings) -> Result<f64> {
    check_pairs(rho, &s.alpha, &s.beta)?;
    Ok(rho.expectation(&bell_operator(s)?).re)
}

/// `⟨B_αβ⟩_ρ / C_αβ`, the CHSH value of the projected state.
pub fn bell_normalized(rho: &DensityMatrix, s: &WitnessSettings) -> Result<f64> {
    let c = nonempty_weight(rho, &s.alpha, &s.beta)?;
    Ok(bell_value(rho, s)? / c)
}

/// `⟨B'_αβ⟩` on the full state (not yet divided by `C_αβ`).
pub fn nonlinear_value(rho: &DensityMatrix, s: &WitnessSettings) -> Result<f64> {
    check_pairs(rho, &s.alpha, &s.beta)?;
    let [corr, local, zz] = nonlinear_operators(s)?;
    let u = rho.expectation(&corr).re;
    let v = rho.expectation(&local).re;
    let w = rho.expectation(&zz).re;
    Ok(u.hypot(v) - w)
}

/// `⟨B'_αβ⟩ / C_αβ`; violation of `≤ 1` certifies entanglement.
pub fn nonlinear_normalized(rho: &DensityMatrix, s: &WitnessSettings) -> Result<f64> {
    let c = nonempty_weight(rho, &s.alpha, &s.beta)?;
    Ok(nonlinear_value(rho, s)? / c)
}

fn nonempty_weight(
    rho: &DensityMatrix,
    alpha: &GeneratorPair,
    beta: &GeneratorPair,
) -> Result<f64> {
    let proj = project_state(rho, alpha, beta)?;
    if proj.rho_ab.is_none() {
        return Err(Error::EmptySubspace { c: proj.c });
    }
    Ok(proj.c)
}

/// Maximal normalized CHSH value over local settings; 0 for an empty subspace.
pub fn bell_max(rho: &DensityMatrix, alpha: &GeneratorPair, beta: &GeneratorPair) -> Result<f64> {
    let proj = project_state(rho, alpha, beta)?;
    Ok(match proj.rho_ab {
        Some(r) => TwoQubitCorrelations::from_matrix(r.matrix()).bell_max(),
        None => 0.0,
    })
}

/// Maximal normalized nonlinear witness value, `1 - 4 λ_min(ρ_αβ^{T_A})`;
/// 1 for an empty subspace.
pub fn nonlinear_max(
    rho: &DensityMatrix,
    alpha: &GeneratorPair,
    beta: &GeneratorPair,
) -> Result<f64> {
    let proj = project_state(rho, alpha, beta)?;
    Ok(match proj.rho_ab {
        Some(r) => 1.0 - 4.0 * two_qubit_lambda_min(r.matrix()),
        None => 1.0,
    })
}

/// Per-subspace summary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubspaceReport {
    pub alpha: GeneratorPair,
    pub beta: GeneratorPair,
    /// Projection weight `C_αβ`.
    pub c: f64,
    /// `λ_min(ρ_αβ^{T_A})`, 0 for an empty subspace.
    pub lambda_min: f64,
    /// Maximal normalized CHSH value.
    pub bell_max: f64,
    /// Maximal normalized nonlinear witness value.
    pub nonlinear_max: f64,
    /// `nonlinear_max - 1`.
    pub d: f64,
    /// `max(0, d)`.
    pub x: f64,
}

impl SubspaceReport {
    pub fn is_empty(&self) -> bool {
        self.c <= tolerance::EMPTY_SUBSPACE
    }

    pub fn nonlinear_violated(&self) -> bool {
        self.nonlinear_max > 1.0 + tolerance::DETECT
    }

    pub fn bell_violated(&self) -> bool {
        self.bell_max > 2.0 + tolerance::DETECT
    }
}

pub fn subspace_report(
    rho: &DensityMatrix,
    alpha: &GeneratorPair,
    beta: &GeneratorPair,
) -> Result<SubspaceReport> {
    let proj = project_state(rho, alpha, beta)?;
    let (lambda_min, bell_max) = match &proj.rho_ab {
        Some(r) => (
            two_qubit_lambda_min(r.matrix()),
            TwoQubitCorrelations::from_matrix(r.matrix()).bell_max(),
        ),
        None => (0.0, 0.0),
    };
    let nonlinear_max = 1.0 - 4.0 * lambda_min;
    let d = nonlinear_max - 1.0;
    Ok(SubspaceReport {
        alpha: *alpha,
        beta: *beta,
        c: proj.c,
        lambda_min,
        bell_max,
        nonlinear_max,
        d,
        x: d.max(0.0),
    })
}

/// Reports for every `(α, β)`, α-major lexicographic order.
pub fn subspace_reports(rho: &DensityMatrix) -> Vec<SubspaceReport> {
    let dims = rho.dims();
    let pa = pairs(dims.m()).expect("dims are validated");
    let pb = pairs(dims.n()).expect("dims are validated");
    let mut out = Vec::with_capacity(pa.len() * pb.len());
    for alpha in &pa {
        for beta in &pb {
            out.push(subspace_report(rho, alpha, beta).expect("pairs match dims"));
        }
    }
    out
}

/// Outcome of the full subspace sweep.
#[derive(Debug, Clone)]
pub struct Detection {
    /// Some subspace violates the nonlinear inequality.
    pub entangled: bool,
    pub reports: Vec<SubspaceReport>,
}

impl Detection {
    /// Subspace with the largest nonlinear witness value.
    pub fn strongest(&self) -> Option<&SubspaceReport> {
        self.reports
            .iter()
            .filter(|r| !r.is_empty())
            .max_by(|a, b| a.nonlinear_max.total_cmp(&b.nonlinear_max))
    }

    /// Subspace with the largest normalized CHSH value.
    pub fn strongest_bell(&self) -> Option<&SubspaceReport> {
        self.reports
            .iter()
            .filter(|r| !r.is_empty())
            .max_by(|a, b| a.bell_max.total_cmp(&b.bell_max))
    }

    /// `max nonlinear_max - 1`; positive means detected.
    pub fn nonlinear_margin(&self) -> f64 {
        self.strongest().map_or(0.0, |r| r.nonlinear_max - 1.0)
    }

    /// `max bell_max - 2`; positive means the Bell test fires.
    pub fn bell_margin(&self) -> f64 {
        self.strongest_bell().map_or(-2.0, |r| r.bell_max - 2.0)
    }

    pub fn bell_detects(&self) -> bool {
        self.reports.iter().any(SubspaceReport::bell_violated)
    }
}

pub fn detect_entanglement(rho: &DensityMatrix) -> Detection {
    let reports = subspace_reports(rho);
    let entangled = reports.iter().any(SubspaceReport::nonlinear_violated);
    Detection { entangled, reports }
}
