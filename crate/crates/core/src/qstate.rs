//! Bipartite states on `C^m ⊗ C^n` and the spectral primitives built on them.
//!
//! Basis convention: the product basis vector `|i⟩|a⟩` sits at flat index
//! `i * n + a` (row-major over the two parties), indices 0-based.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::{tolerance, CMatrix, CVector, Error, Result, C64};

/// Local dimensions of a bipartite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dims {
    m: usize,
    n: usize,
}

impl Dims {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m < 2 || n < 2 {
            return Err(Error::InvalidDims { m, n });
        }
        Ok(Dims { m, n })
    }

    pub fn square(d: usize) -> Result<Self> {
        Self::new(d, d)
    }

    /// Dimension of party A.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Dimension of party B.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Side length of matrices on the joint space.
    pub fn total(&self) -> usize {
        self.m * self.n
    }

    /// The smaller party dimension, the `M` of the negativity normalizer.
    pub fn min_party(&self) -> usize {
        self.m.min(self.n)
    }

    pub fn max_party(&self) -> usize {
        self.m.max(self.n)
    }

    pub fn index(&self, i: usize, a: usize) -> usize {
        i * self.n + a
    }
}

/// A validated mixed state: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Dims,
    mat: CMatrix,
}

/// Checks shape, Hermiticity, trace and positivity, in that order, and
/// returns the state with its matrix explicitly symmetrized.
pub fn validate_density(mat: CMatrix, dims: Dims) -> Result<DensityMatrix> {
    let side = dims.total();
    if mat.nrows() != side || mat.ncols() != side {
        return Err(Error::DimensionMismatch {
            expected: side,
            rows: mat.nrows(),
            cols: mat.ncols(),
        });
    }
    let deviation = hermitian_deviation(&mat);
    if deviation > tolerance::HERMITIAN {
        return Err(Error::NotHermitian { deviation });
    }
    let mat = symmetrize(&mat);
    let trace = mat.trace().re;
    if (trace - 1.0).abs() > tolerance::TRACE {
        return Err(Error::TraceDeviation { trace });
    }
    let min_eigenvalue = hermitian_eigenvalues(&mat)[0];
    if min_eigenvalue < -tolerance::PSD {
        return Err(Error::NegativeEigenvalue { min_eigenvalue });
    }
    Ok(DensityMatrix { dims, mat })
}

impl DensityMatrix {
    pub fn new(mat: CMatrix, dims: Dims) -> Result<Self> {
        validate_density(mat, dims)
    }

    /// Wraps a matrix known to be a state up to rounding, e.g. a normalized
    /// compression of a validated state.
    pub(crate) fn new_unchecked(mat: CMatrix, dims: Dims) -> Self {
        DensityMatrix {
            dims,
            mat: symmetrize(&mat),
        }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        DensityMatrix {
            dims: psi.dims,
            mat: psi.projector(),
        }
    }

    /// The maximally mixed state `I / (mn)`.
    pub fn maximally_mixed(dims: Dims) -> Self {
        let side = dims.total();
        DensityMatrix {
            dims,
            mat: CMatrix::identity(side, side) * C64::from(1.0 / side as f64),
        }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    /// `(1 - p) self + p other`.
    pub fn mix(&self, other: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter {
                name: "p",
                value: p,
                reason: "mixing weight must lie in [0, 1]",
            });
        }
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims.total(),
                rows: other.mat.nrows(),
                cols: other.mat.ncols(),
            });
        }
        let mat = &self.mat * C64::from(1.0 - p) + &other.mat * C64::from(p);
        Ok(DensityMatrix {
            dims: self.dims,
            mat,
        })
    }

    /// `Tr(ρ O)`.
    pub fn expectation(&self, obs: &CMatrix) -> C64 {
        trace_of_product(&self.mat, obs)
    }

    pub fn purity(&self) -> f64 {
        trace_of_product(&self.mat, &self.mat).re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.mat)
    }

    pub fn to_document(&self) -> StateDocument {
        let side = self.dims.total();
        let rows = |f: fn(&C64) -> f64| -> Vec<Vec<f64>> {
            (0..side)
                .map(|r| (0..side).map(|c| f(&self.mat[(r, c)])).collect())
                .collect()
        };
        StateDocument {
            dims: [self.dims.m, self.dims.n],
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }

    pub fn from_document(doc: &StateDocument) -> Result<Self> {
        let dims = Dims::new(doc.dims[0], doc.dims[1])?;
        let side = dims.total();
        let well_shaped =
            |rows: &Vec<Vec<f64>>| rows.len() == side && rows.iter().all(|r| r.len() == side);
        if !well_shaped(&doc.re) || !well_shaped(&doc.im) {
            return Err(Error::Malformed(format!(
                "re/im must both be {side}x{side} for dims {}x{}",
                dims.m, dims.n
            )));
        }
        let mat = CMatrix::from_fn(side, side, |r, c| C64::new(doc.re[r][c], doc.im[r][c]));
        validate_density(mat, dims)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("state document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: StateDocument =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::from_document(&doc)
    }
}

/// On-disk form of a density matrix: `{"dims":[m,n],"re":[[..]],"im":[[..]]}`,
/// rows in the flat product-basis order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDocument {
    pub dims: [usize; 2],
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

/// A normalized state vector on the joint space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Dims,
    vec: CVector,
}

impl PureState {
    pub fn new(vec: CVector, dims: Dims) -> Result<Self> {
        if vec.len() != dims.total() {
            return Err(Error::DimensionMismatch {
                expected: dims.total(),
                rows: vec.len(),
                cols: 1,
            });
        }
        let norm = vec.norm();
        if (norm - 1.0).abs() > tolerance::NORM {
            return Err(Error::NotNormalized { norm });
        }
        Ok(PureState { dims, vec })
    }

    /// Normalizes `vec` first; fails only on a zero vector or bad length.
    pub fn normalized(vec: CVector, dims: Dims) -> Result<Self> {
        let norm = vec.norm();
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm });
        }
        Self::new(vec.unscale(norm), dims)
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.vec
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> CMatrix {
        &self.vec * self.vec.adjoint()
    }

    /// The `m x n` matrix `C` with `ψ = Σ C[i,a] |i⟩|a⟩`.
    pub fn coefficient_matrix(&self) -> CMatrix {
        let (m, n) = (self.dims.m, self.dims.n);
        CMatrix::from_fn(m, n, |i, a| self.vec[i * n + a])
    }

    /// Applies `ua ⊗ ub` to the state.
    pub fn apply_local(&self, ua: &CMatrix, ub: &CMatrix) -> Result<PureState> {
        let u = ua.kronecker(ub);
        if u.nrows() != self.vec.len() || u.ncols() != self.vec.len() {
            return Err(Error::DimensionMismatch {
                expected: self.vec.len(),
                rows: u.nrows(),
                cols: u.ncols(),
            });
        }
        PureState::new(u * &self.vec, self.dims)
    }
}

/// Squared Schmidt coefficients with the local Schmidt vectors.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// `μ_i`, nonincreasing, summing to one; length `min(m, n)`.
    pub coefficients: Vec<f64>,
    /// `m x min(m,n)` isometry; column `i` is the A-side vector of term `i`.
    pub basis_a: CMatrix,
    /// `n x min(m,n)` isometry; column `i` is the B-side vector of term `i`.
    pub basis_b: CMatrix,
}

impl SchmidtDecomposition {
    /// `Σ √μ_i |a_i⟩|b_i⟩` as a flat vector.
    pub fn reconstruct(&self) -> CVector {
        let (m, n) = (self.basis_a.nrows(), self.basis_b.nrows());
        let mut out = CVector::zeros(m * n);
        for (t, mu) in self.coefficients.iter().enumerate() {
            let s = C64::from(mu.max(0.0).sqrt());
            for i in 0..m {
                for a in 0..n {
                    out[i * n + a] += s * self.basis_a[(i, t)] * self.basis_b[(a, t)];
                }
            }
        }
        out
    }

    /// The same spectrum placed on the canonical basis, `Σ √μ_i |ii⟩`.
    pub fn canonical_state(&self, dims: Dims) -> Result<PureState> {
        let mut v = CVector::zeros(dims.total());
        for (i, mu) in self.coefficients.iter().enumerate() {
            v[dims.index(i, i)] = C64::from(mu.max(0.0).sqrt());
        }
        PureState::normalized(v, dims)
    }
}

pub fn schmidt(psi: &PureState) -> SchmidtDecomposition {
    let coeff = psi.coefficient_matrix();
    let svd = coeff.clone().svd(true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));

    let (m, n) = (coeff.nrows(), coeff.ncols());
    let r = order.len();
    let mut basis_a = CMatrix::zeros(m, r);
    let mut basis_b = CMatrix::zeros(n, r);
    let mut coefficients = Vec::with_capacity(r);
    for (t, &src) in order.iter().enumerate() {
        let s = svd.singular_values[src];
        coefficients.push(s * s);
        basis_a.set_column(t, &u.column(src));
        // C = U S V†, so the B-side vector of term t is the t-th row of V†.
        basis_b.set_column(t, &v_t.row(src).transpose());
    }
    SchmidtDecomposition {
        coefficients,
        basis_a,
        basis_b,
    }
}

/// Negativity of a pure state from its Schmidt spectrum:
/// `2/(M-1) Σ_{i<j} √(μ_i μ_j)`.
pub fn pure_negativity(psi: &PureState) -> f64 {
    let mu = schmidt(psi).coefficients;
    let mut cross = 0.0;
    for i in 0..mu.len() {
        for j in i + 1..mu.len() {
            cross += (mu[i].max(0.0) * mu[j].max(0.0)).sqrt();
        }
    }
    2.0 * cross / (psi.dims.min_party() - 1) as f64
}

/// Partial transpose on party A of an arbitrary joint-space matrix.
pub fn partial_transpose_matrix(mat: &CMatrix, dims: Dims) -> CMatrix {
    let (m, n) = (dims.m, dims.n);
    let mut out = CMatrix::zeros(m * n, m * n);
    for i in 0..m {
        for j in 0..m {
            for a in 0..n {
                for b in 0..n {
                    out[(j * n + a, i * n + b)] = mat[(i * n + a, j * n + b)];
                }
            }
        }
    }
    out
}

pub fn partial_transpose(rho: &DensityMatrix) -> CMatrix {
    partial_transpose_matrix(&rho.mat, rho.dims)
}

/// Smallest eigenvalue of `ρ^{T_A}`.
pub fn min_pt_eigenvalue(rho: &DensityMatrix) -> f64 {
    hermitian_eigenvalues(&partial_transpose(rho))[0]
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(h: &CMatrix) -> Result<f64> {
    let deviation = hermitian_deviation(h);
    if deviation > tolerance::HERMITIAN {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(hermitian_eigenvalues(h).iter().map(|x| x.abs()).sum())
}

/// `(‖ρ^{T_A}‖ - 1) / (M - 1)` with `M = min(m, n)`.
pub fn negativity(rho: &DensityMatrix) -> f64 {
    let norm: f64 = hermitian_eigenvalues(&partial_transpose(rho))
        .iter()
        .map(|x| x.abs())
        .sum();
    ((norm - 1.0) / (rho.dims.min_party() - 1) as f64).max(0.0)
}

/// The realigned matrix `R[(i,j),(a,b)] = ρ[(i,a),(j,b)]`, of shape `m² x n²`.
pub fn realign(rho: &DensityMatrix) -> CMatrix {
    let (m, n) = (rho.dims.m, rho.dims.n);
    let mut r = CMatrix::zeros(m * m, n * n);
    for i in 0..m {
        for j in 0..m {
            for a in 0..n {
                for b in 0..n {
                    r[(i * m + j, a * n + b)] = rho.mat[(i * n + a, j * n + b)];
                }
            }
        }
    }
    r
}

/// Trace norm of the realigned matrix; values above one certify entanglement.
pub fn realignment_value(rho: &DensityMatrix) -> f64 {
    realign(rho).singular_values().iter().sum()
}

/// Largest entrywise `|H - H†|`.
pub fn hermitian_deviation(h: &CMatrix) -> f64 {
    if h.nrows() != h.ncols() {
        return f64::INFINITY;
    }
    let mut worst = 0.0f64;
    for r in 0..h.nrows() {
        for c in r..h.ncols() {
            worst = worst.max((h[(r, c)] - h[(c, r)].conj()).norm());
        }
    }
    worst
}

/// `(H + H†) / 2`.
pub fn symmetrize(h: &CMatrix) -> CMatrix {
    (h + h.adjoint()) * C64::from(0.5)
}

/// Eigenvalues of the symmetrized matrix, ascending.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(symmetrize(h))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigen-decomposition of the symmetrized matrix, eigenvalues ascending
/// with matching eigenvector columns.
pub fn hermitian_eigen(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(symmetrize(h));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(h.nrows(), order.len());
    for (t, &i) in order.iter().enumerate() {
        vectors.set_column(t, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// `Tr(A B)` without forming the product.
pub fn trace_of_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let mut acc = C64::from(0.0);
    for r in 0..a.nrows() {
        for c in 0..a.ncols() {
            acc += a[(r, c)] * b[(c, r)];
        }
    }
    acc
}

/// Lifts a real matrix to a complex one.
pub fn complexify(m: &DMatrix<f64>) -> CMatrix {
    m.map(C64::from)
}

/// `|v⟩` as a flat product-basis vector from local factors.
pub fn product_vector(a: &CVector, b: &CVector) -> CVector {
    let mut out = CVector::zeros(a.len() * b.len());
    for i in 0..a.len() {
        for j in 0..b.len() {
            out[i * b.len() + j] = a[i] * b[j];
        }
    }
    out
}

/// Canonical basis vector `|i⟩` of dimension `dim`.
pub fn basis_vector(dim: usize, i: usize) -> CVector {
    let mut v = DVector::zeros(dim);
    v[i] = C64::from(1.0);
    v
}
