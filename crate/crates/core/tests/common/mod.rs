//! Reference implementations used as test oracles. They deliberately avoid
//! the library's own numerics: products are formed with explicit loops,
//! eigenvalues come from the real symmetric embedding of a Hermitian matrix.
#![allow(dead_code)]

use entwit::generators::ObservableTriad;
use entwit::qstate::DensityMatrix;
use entwit::{CMatrix, C64};
use nalgebra::{DMatrix, Matrix3, Quaternion, UnitQuaternion, Vector3};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac, br, bc) = (a.nrows(), a.ncols(), b.nrows(), b.ncols());
    CMatrix::from_fn(ar * br, ac * bc, |r, col| {
        a[(r / br, col / bc)] * b[(r % br, col % bc)]
    })
}

pub fn matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(a.nrows(), b.ncols());
    for i in 0..a.nrows() {
        for j in 0..b.ncols() {
            let mut acc = c(0.0, 0.0);
            for k in 0..a.ncols() {
                acc += a[(i, k)] * b[(k, j)];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

pub fn dagger(a: &CMatrix) -> CMatrix {
    CMatrix::from_fn(a.ncols(), a.nrows(), |i, j| a[(j, i)].conj())
}

pub fn trace(a: &CMatrix) -> C64 {
    (0..a.nrows()).map(|i| a[(i, i)]).sum()
}

/// `Tr(ρ O)`, real part.
pub fn mean(rho: &CMatrix, op: &CMatrix) -> f64 {
    trace(&matmul(rho, op)).re
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Partial transpose on the first factor, element by element.
pub fn pt_naive(mat: &CMatrix, m: usize, n: usize) -> CMatrix {
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

/// Ascending eigenvalues of a Hermitian matrix via the real symmetric
/// embedding `[[Re, -Im], [Im, Re]]`, whose spectrum is that of `h` doubled.
pub fn eigvals(h: &CMatrix) -> Vec<f64> {
    let n = h.nrows();
    let big = DMatrix::<f64>::from_fn(2 * n, 2 * n, |r, col| {
        let z = h[(r % n, col % n)];
        match (r < n, col < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let mut ev: Vec<f64> = big.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev.into_iter().step_by(2).collect()
}

pub fn trace_norm(h: &CMatrix) -> f64 {
    eigvals(h).iter().map(|v| v.abs()).sum()
}

pub fn sigma() -> [CMatrix; 3] {
    let z = c(0.0, 0.0);
    [
        CMatrix::from_row_slice(2, 2, &[z, c(1.0, 0.0), c(1.0, 0.0), z]),
        CMatrix::from_row_slice(2, 2, &[z, c(0.0, -1.0), c(0.0, 1.0), z]),
        CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), z, z, c(-1.0, 0.0)]),
    ]
}

pub fn a_dot_sigma(a: &Vector3<f64>) -> CMatrix {
    let s = sigma();
    &s[0] * c(a[0], 0.0) + &s[1] * c(a[1], 0.0) + &s[2] * c(a[2], 0.0)
}

/// The real antisymmetric generator `|k⟩⟨j| - |j⟩⟨k|` on `C^dim`.
pub fn generator(j: usize, k: usize, dim: usize) -> CMatrix {
    let mut l = CMatrix::zeros(dim, dim);
    l[(k, j)] = c(1.0, 0.0);
    l[(j, k)] = c(-1.0, 0.0);
    l
}

/// `(L_α⊗L_β) ρ (L_α⊗L_β)†` computed on the full space, then the 4x4 block
/// on `{j,k}×{l,m}`. Returns the block and its trace.
pub fn project(
    rho: &CMatrix,
    m: usize,
    n: usize,
    alpha: (usize, usize),
    beta: (usize, usize),
) -> (CMatrix, f64) {
    let ll = kron(
        &generator(alpha.0, alpha.1, m),
        &generator(beta.0, beta.1, n),
    );
    let full = matmul(&matmul(&ll, rho), &dagger(&ll));
    let idx = [
        alpha.0 * n + beta.0,
        alpha.0 * n + beta.1,
        alpha.1 * n + beta.0,
        alpha.1 * n + beta.1,
    ];
    let block = CMatrix::from_fn(4, 4, |r, col| full[(idx[r], idx[col])]);
    let tr = trace(&block).re;
    (block, tr)
}

/// `√(⟨A1B1 + A2B2⟩² + ⟨A3⊗I + I⊗B3⟩²) - ⟨A3B3⟩` on a normalized
/// two-qubit state.
pub fn two_qubit_nonlinear(rho: &CMatrix, a: &[Vector3<f64>; 3], b: &[Vector3<f64>; 3]) -> f64 {
    let id = CMatrix::identity(2, 2);
    let op = |i: usize| a_dot_sigma(&a[i]);
    let opb = |i: usize| a_dot_sigma(&b[i]);
    let u = mean(rho, &(kron(&op(0), &opb(0)) + kron(&op(1), &opb(1))));
    let v = mean(rho, &(kron(&op(2), &id) + kron(&id, &opb(2))));
    let w = mean(rho, &kron(&op(2), &opb(2)));
    (u * u + v * v).sqrt() - w
}

/// CHSH value `⟨A1B1 + A1B2 + A2B1 - A2B2⟩`.
pub fn two_qubit_chsh(
    rho: &CMatrix,
    a1: &Vector3<f64>,
    a2: &Vector3<f64>,
    b1: &Vector3<f64>,
    b2: &Vector3<f64>,
) -> f64 {
    let e = |x: &Vector3<f64>, y: &Vector3<f64>| mean(rho, &kron(&a_dot_sigma(x), &a_dot_sigma(y)));
    e(a1, b1) + e(a1, b2) + e(a2, b1) - e(a2, b2)
}

/// Horodecki maximum from `T_ij = ⟨σ_i⊗σ_j⟩`.
pub fn horodecki(rho: &CMatrix) -> f64 {
    let s = sigma();
    let t = Matrix3::from_fn(|i, j| mean(rho, &kron(&s[i], &s[j])));
    let mut sv: Vec<f64> = t.singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    2.0 * (sv[0] * sv[0] + sv[1] * sv[1]).sqrt()
}

/// Nonlinear maximum `1 - 4 λ_min(ρ^{T_A})` of a normalized two-qubit state.
pub fn two_qubit_closed_form(rho: &CMatrix) -> f64 {
    1.0 - 4.0 * eigvals(&pt_naive(rho, 2, 2))[0]
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(rand_distr::StandardNormal)
}

/// Haar-random rotation from a normalized Gaussian quaternion.
pub fn random_rotation(rng: &mut ChaCha8Rng) -> Matrix3<f64> {
    let q = Quaternion::new(gaussian(rng), gaussian(rng), gaussian(rng), gaussian(rng));
    UnitQuaternion::from_quaternion(q)
        .to_rotation_matrix()
        .into_inner()
}

/// A random triad; left-handed when `flip` is set.
pub fn random_triad(rng: &mut ChaCha8Rng, flip: bool) -> ObservableTriad {
    let r = random_rotation(rng);
    ObservableTriad::new(if flip { -r } else { r }).expect("orthogonal")
}

pub fn axes(t: &ObservableTriad) -> [Vector3<f64>; 3] {
    std::array::from_fn(|i| t.axis(i))
}

pub fn is_ppt(rho: &DensityMatrix) -> bool {
    let d = rho.dims();
    eigvals(&pt_naive(rho.matrix(), d.m(), d.n()))[0] >= -1e-12
}

/// Block-diagonal unitary acting as a random 2x2 unitary on `{j,k}` and as
/// the identity elsewhere.
pub fn subspace_unitary(dim: usize, j: usize, k: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let (t, p1, p2, p3) = (
        rng.random_range(0.0..std::f64::consts::PI),
        rng.random_range(-3.0..3.0),
        rng.random_range(-3.0..3.0),
        rng.random_range(-3.0..3.0),
    );
    let e = |phi: f64| C64::from_polar(1.0, phi);
    let mut u = CMatrix::identity(dim, dim);
    u[(j, j)] = e(p1) * t.cos();
    u[(j, k)] = -e(p1 + p2) * t.sin() * e(-p3);
    u[(k, j)] = e(p3) * t.sin();
    u[(k, k)] = e(p2) * t.cos();
    u
}
