//! SO(d) generators `|j⟩⟨k| - |k⟩⟨j|` and the qubit observables embedded on
//! the two-dimensional subspace each generator selects.
//!
//! Pairs use 0-based indices `0 ≤ j < k < d` and are always enumerated in
//! lexicographic order, which fixes the order of every per-subspace report.

use nalgebra::{DMatrix, Matrix2, Matrix3, Rotation3, Vector3};
use serde::{Deserialize, Serialize};

use crate::{tolerance, CMatrix, Error, Result, C64};

/// Index pair `(j, k)` identifying one generator of SO(dim).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GeneratorPair {
    j: usize,
    k: usize,
    dim: usize,
}

impl GeneratorPair {
    pub fn new(j: usize, k: usize, dim: usize) -> Result<Self> {
        if j >= k || k >= dim {
            return Err(Error::InvalidPair { j, k, dim });
        }
        Ok(GeneratorPair { j, k, dim })
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `|j⟩⟨k| - |k⟩⟨j|`.
    pub fn generator(&self) -> DMatrix<f64> {
        let mut l = DMatrix::zeros(self.dim, self.dim);
        l[(self.j, self.k)] = 1.0;
        l[(self.k, self.j)] = -1.0;
        l
    }

    pub fn projector(&self) -> DMatrix<f64> {
        subspace_projector(self)
    }
}

/// All pairs of a party, lexicographic in `(j, k)`.
pub fn pairs(dim: usize) -> Result<Vec<GeneratorPair>> {
    if dim < 2 {
        return Err(Error::InvalidPair { j: 0, k: 1, dim });
    }
    let mut out = Vec::with_capacity(dim * (dim - 1) / 2);
    for j in 0..dim {
        for k in j + 1..dim {
            out.push(GeneratorPair { j, k, dim });
        }
    }
    Ok(out)
}

pub fn so_generators(dim: usize) -> Result<Vec<(GeneratorPair, DMatrix<f64>)>> {
    Ok(pairs(dim)?
        .into_iter()
        .map(|p| {
            let l = p.generator();
            (p, l)
        })
        .collect())
}

/// Diagonal projector onto `span{|j⟩, |k⟩}`; equals `L L†`.
pub fn subspace_projector(pair: &GeneratorPair) -> DMatrix<f64> {
    let mut p = DMatrix::zeros(pair.dim, pair.dim);
    p[(pair.j, pair.j)] = 1.0;
    p[(pair.k, pair.k)] = 1.0;
    p
}

/// Three complementary qubit observables `a_i · σ` from the rows of an
/// orthogonal matrix. The orientation is `det` of that matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableTriad {
    rot: Matrix3<f64>,
}

pub fn triad_from_rotation(rot: Matrix3<f64>) -> Result<ObservableTriad> {
    let deviation = (rot.transpose() * rot - Matrix3::identity()).abs().max();
    if deviation > tolerance::ORTHONORMAL {
        return Err(Error::NotOrthogonal { deviation });
    }
    Ok(ObservableTriad { rot })
}

impl ObservableTriad {
    pub fn new(rot: Matrix3<f64>) -> Result<Self> {
        triad_from_rotation(rot)
    }

    /// `(x̂, ŷ, ẑ)`.
    pub fn identity() -> Self {
        ObservableTriad {
            rot: Matrix3::identity(),
        }
    }

    /// Right-handed triad from three Euler angles (roll, pitch, yaw).
    pub fn from_angles(angles: [f64; 3]) -> Self {
        let r = Rotation3::from_euler_angles(angles[0], angles[1], angles[2]);
        ObservableTriad { rot: *r.matrix() }
    }

    pub fn rotation(&self) -> &Matrix3<f64> {
        &self.rot
    }

    /// Unit vector `a_{i+1}` (row `i`).
    pub fn axis(&self, i: usize) -> Vector3<f64> {
        self.rot.row(i).transpose()
    }

    /// `+1` for right-handed frames, `-1` for left-handed.
    pub fn orientation(&self) -> i32 {
        if self.rot.determinant() > 0.0 {
            1
        } else {
            -1
        }
    }
}

/// Pauli matrices `(σ_x, σ_y, σ_z)`.
pub fn pauli() -> [Matrix2<C64>; 3] {
    let (o, z, i) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 1.0));
    [
        Matrix2::new(z, o, o, z),
        Matrix2::new(z, -i, i, z),
        Matrix2::new(o, z, z, -o),
    ]
}

/// `a · σ = [[a3, a1 - i a2], [a1 + i a2, -a3]]`.
pub fn pauli_dot(a: &Vector3<f64>) -> Matrix2<C64> {
    Matrix2::new(
        C64::new(a[2], 0.0),
        C64::new(a[0], -a[1]),
        C64::new(a[0], a[1]),
        C64::new(-a[2], 0.0),
    )
}

/// A qubit observable placed on rows/columns `{j, k}` of a party, zero
/// elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedObservable {
    pair: GeneratorPair,
    mat: CMatrix,
}

impl EmbeddedObservable {
    pub fn pair(&self) -> GeneratorPair {
        self.pair
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// The 2x2 block on `{j, k}`.
    pub fn block(&self) -> Matrix2<C64> {
        let (j, k) = (self.pair.j, self.pair.k);
        Matrix2::new(
            self.mat[(j, j)],
            self.mat[(j, k)],
            self.mat[(k, j)],
            self.mat[(k, k)],
        )
    }
}

pub fn embed_observable(pair: GeneratorPair, a: &Vector3<f64>) -> Result<EmbeddedObservable> {
    let norm = a.norm();
    if (norm - 1.0).abs() > tolerance::ORTHONORMAL {
        return Err(Error::NotUnitVector { norm });
    }
    let block = pauli_dot(a);
    let mut mat = CMatrix::zeros(pair.dim, pair.dim);
    let idx = [pair.j, pair.k];
    for r in 0..2 {
        for c in 0..2 {
            mat[(idx[r], idx[c])] = block[(r, c)];
        }
    }
    Ok(EmbeddedObservable { pair, mat })
}

/// `L A L†` for the generator `L` of `pair`.
pub fn tilde_operator(pair: &GeneratorPair, obs: &EmbeddedObservable) -> Result<CMatrix> {
    if *pair != obs.pair {
        return Err(Error::PairMismatch);
    }
    let l = pair.generator().map(C64::from);
    Ok(&l * &obs.mat * l.adjoint())
}
