//! Constructors for the state families used in the worked examples, plus
//! seeded random states for property tests.

use std::path::PathBuf;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::qstate::{basis_vector, product_vector, DensityMatrix, Dims, PureState};
use crate::{tolerance, CMatrix, CVector, Error, Result, C64};

/// `Σ_i |ii⟩ / √d`.
pub fn max_entangled(d: usize) -> Result<PureState> {
    let dims = Dims::square(d)?;
    let mut v = CVector::zeros(d * d);
    for i in 0..d {
        v[dims.index(i, i)] = C64::from(1.0);
    }
    PureState::normalized(v, dims)
}

/// `(|01⟩ - |10⟩) / √2`.
pub fn singlet() -> PureState {
    let s = 1.0 / 2f64.sqrt();
    let v = CVector::from_vec(vec![
        C64::from(0.0),
        C64::from(s),
        C64::from(-s),
        C64::from(0.0),
    ]);
    PureState::new(v, Dims::square(2).expect("2x2")).expect("unit norm")
}

/// `(1 - x) I / d² + x |ψ+⟩⟨ψ+|`, valid for `x ∈ [-1/(d²-1), 1]`.
pub fn isotropic(d: usize, x: f64) -> Result<DensityMatrix> {
    let psi = max_entangled(d)?;
    let lo = -1.0 / ((d * d - 1) as f64);
    if !(lo..=1.0).contains(&x) {
        return Err(Error::InvalidParameter {
            name: "x",
            value: x,
            reason: "isotropic weight must lie in [-1/(d^2-1), 1]",
        });
    }
    let side = d * d;
    let mat = CMatrix::identity(side, side) * C64::from((1.0 - x) / side as f64)
        + psi.projector() * C64::from(x);
    DensityMatrix::new(mat, psi.dims())
}

/// The five orthonormal product vectors of the 3x3 "tiles" UPB.
pub fn upb_vectors() -> [CVector; 5] {
    let e = |i: usize| basis_vector(3, i);
    let h = C64::from(1.0 / 2f64.sqrt());
    let all = e(0) + e(1) + e(2);
    [
        product_vector(&e(0), &(e(0) - e(1))) * h,
        product_vector(&(e(0) - e(1)), &e(2)) * h,
        product_vector(&e(2), &(e(1) - e(2))) * h,
        product_vector(&(e(1) - e(2)), &e(0)) * h,
        product_vector(&all, &all) * C64::from(1.0 / 3.0),
    ]
}

/// `(I_9 - Σ_i |ξ_i⟩⟨ξ_i|) / 4`, the PPT entangled state complementary to
/// the UPB.
pub fn bennett_rho() -> DensityMatrix {
    let mut mat = CMatrix::identity(9, 9);
    for v in upb_vectors() {
        mat -= &v * v.adjoint();
    }
    DensityMatrix::new(mat * C64::from(0.25), Dims::square(3).expect("3x3"))
        .expect("UPB complement is a state")
}

fn max_entangled_rho(d: usize) -> Result<DensityMatrix> {
    Ok(DensityMatrix::from_pure(&max_entangled(d)?))
}

/// `(1 - p) ρ_UPB + p P+` on two qutrits.
pub fn bennett_mixture(p: f64) -> Result<DensityMatrix> {
    check_unit_interval("p", p)?;
    bennett_rho().mix(&max_entangled_rho(3)?, p)
}

/// The 3x3 one-parameter bound entangled family, `0 < a < 1`.
pub fn rho_a(a: f64) -> Result<DensityMatrix> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::InvalidParameter {
            name: "a",
            value: a,
            reason: "must lie in (0, 1)",
        });
    }
    let mut m = DMatrix::<f64>::zeros(9, 9);
    for i in 0..9 {
        m[(i, i)] = a;
    }
    for &i in &[0, 4, 8] {
        for &j in &[0, 4, 8] {
            m[(i, j)] = a;
        }
    }
    m[(6, 6)] = (1.0 + a) / 2.0;
    m[(8, 8)] = (1.0 + a) / 2.0;
    m[(6, 8)] = (1.0 - a * a).sqrt() / 2.0;
    m[(8, 6)] = m[(6, 8)];
    let mat = m.map(|v| C64::from(v / (8.0 * a + 1.0)));
    DensityMatrix::new(mat, Dims::square(3)?)
}

/// `(1 - p) ρ(a) + p P+`.
pub fn rho_a_mixture(a: f64, p: f64) -> Result<DensityMatrix> {
    check_unit_interval("p", p)?;
    rho_a(a)?.mix(&max_entangled_rho(3)?, p)
}

fn check_unit_interval(name: &'static str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::InvalidParameter {
            name,
            value: v,
            reason: "must lie in [0, 1]",
        });
    }
    Ok(())
}

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn random_vector(len: usize, rng: &mut ChaCha8Rng) -> CVector {
    let v = CVector::from_fn(len, |_, _| gaussian(rng));
    let n = v.norm();
    v.unscale(n)
}

/// Normalized vector of i.i.d. standard complex Gaussians.
pub fn random_pure(dims: Dims, seed: u64) -> PureState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PureState::new(random_vector(dims.total(), &mut rng), dims).expect("normalized")
}

/// Ginibre ensemble: `G G† / Tr(G G†)` with `G` of shape `mn x rank`.
pub fn random_density(dims: Dims, rank: usize, seed: u64) -> Result<DensityMatrix> {
    let side = dims.total();
    if rank == 0 || rank > side {
        return Err(Error::InvalidParameter {
            name: "rank",
            value: rank as f64,
            reason: "rank must lie in [1, m*n]",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = CMatrix::from_fn(side, rank, |_, _| gaussian(&mut rng));
    let w = &g * g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::new(w * C64::from(1.0 / tr), dims)
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
pub fn random_unitary(dim: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = CMatrix::from_fn(dim, dim, |_, _| gaussian(&mut rng));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::from(1.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Convex mixture of `terms` random pure product states with random weights.
pub fn random_separable(dims: Dims, terms: usize, seed: u64) -> Result<DensityMatrix> {
    if terms == 0 {
        return Err(Error::InvalidParameter {
            name: "terms",
            value: 0.0,
            reason: "need at least one product term",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (0..terms).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let side = dims.total();
    let mut mat = CMatrix::zeros(side, side);
    for w in weights {
        let a = random_vector(dims.m(), &mut rng);
        let b = random_vector(dims.n(), &mut rng);
        let v = product_vector(&a, &b);
        mat += (&v * v.adjoint()) * C64::from(w / total);
    }
    DensityMatrix::new(mat, dims)
}

/// `Σ_i √μ_i |ii⟩` on `C^d ⊗ C^d`.
pub fn pure_from_schmidt(mu: &[f64], d: usize) -> Result<PureState> {
    let dims = Dims::square(d)?;
    if mu.is_empty() || mu.len() > d {
        return Err(Error::InvalidSpectrum(format!(
            "need between 1 and {d} coefficients, got {}",
            mu.len()
        )));
    }
    if let Some(bad) = mu.iter().find(|&&m| m.is_nan() || m < 0.0) {
        return Err(Error::InvalidSpectrum(format!(
            "negative coefficient {bad}"
        )));
    }
    let sum: f64 = mu.iter().sum();
    if (sum - 1.0).abs() > tolerance::NORM {
        return Err(Error::InvalidSpectrum(format!("coefficients sum to {sum}")));
    }
    let mut v = CVector::zeros(d * d);
    for (i, m) in mu.iter().enumerate() {
        v[dims.index(i, i)] = C64::from(m.sqrt());
    }
    PureState::normalized(v, dims)
}

/// Random probability vector of length `d` (normalized squared Gaussians).
pub fn random_schmidt_spectrum(d: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..d).map(|_| gaussian(&mut rng).norm_sqr()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

/// Serializable description of a state, e.g.
/// `{"family":"isotropic","d":3,"x":0.3}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    Isotropic {
        d: usize,
        x: f64,
    },
    MaxEntangled {
        d: usize,
    },
    BennettMix {
        p: f64,
    },
    RhoAMix {
        a: f64,
        #[serde(default)]
        p: f64,
    },
    RandomPure {
        m: usize,
        n: usize,
        #[serde(default)]
        seed: u64,
    },
    RandomDensity {
        m: usize,
        n: usize,
        rank: usize,
        #[serde(default)]
        seed: u64,
    },
    SchmidtPure {
        d: usize,
        mu: Vec<f64>,
    },
    JsonFile {
        path: PathBuf,
    },
}

impl StateSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }

    pub fn family(&self) -> &'static str {
        match self {
            StateSpec::Isotropic { .. } => "isotropic",
            StateSpec::MaxEntangled { .. } => "max_entangled",
            StateSpec::BennettMix { .. } => "bennett_mix",
            StateSpec::RhoAMix { .. } => "rho_a_mix",
            StateSpec::RandomPure { .. } => "random_pure",
            StateSpec::RandomDensity { .. } => "random_density",
            StateSpec::SchmidtPure { .. } => "schmidt_pure",
            StateSpec::JsonFile { .. } => "json_file",
        }
    }

    pub fn build(&self) -> Result<DensityMatrix> {
        if let Some(psi) = self.pure() {
            return Ok(DensityMatrix::from_pure(&psi?));
        }
        match self {
            StateSpec::Isotropic { d, x } => isotropic(*d, *x),
            StateSpec::BennettMix { p } => bennett_mixture(*p),
            StateSpec::RhoAMix { a, p } => rho_a_mixture(*a, *p),
            StateSpec::RandomDensity { m, n, rank, seed } => {
                random_density(Dims::new(*m, *n)?, *rank, *seed)
            }
            StateSpec::JsonFile { path } => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
                DensityMatrix::from_json(&text)
            }
            _ => unreachable!("pure families handled above"),
        }
    }

    /// The state vector, for the pure families.
    pub fn pure(&self) -> Option<Result<PureState>> {
        match self {
            StateSpec::MaxEntangled { d } => Some(max_entangled(*d)),
            StateSpec::RandomPure { m, n, seed } => {
                Some(Dims::new(*m, *n).map(|dims| random_pure(dims, *seed)))
            }
            StateSpec::SchmidtPure { d, mu } => Some(pure_from_schmidt(mu, *d)),
            _ => None,
        }
    }

    /// Sets the continuous parameter `name` (`x`, `p` or `a`).
    pub fn set_param(&mut self, name: &str, value: f64) -> Result<()> {
        let slot = match (self, name) {
            (StateSpec::Isotropic { x, .. }, "x") => x,
            (StateSpec::BennettMix { p }, "p") => p,
            (StateSpec::RhoAMix { p, .. }, "p") => p,
            (StateSpec::RhoAMix { a, .. }, "a") => a,
            (spec, _) => {
                return Err(Error::Malformed(format!(
                    "family {} has no continuous parameter {name}",
                    spec.family()
                )))
            }
        };
        *slot = value;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{min_pt_eigenvalue, realignment_value, schmidt};

    #[test]
    fn isotropic_endpoints() {
        let mixed = isotropic(3, 0.0).unwrap();
        assert!((mixed.matrix() - CMatrix::identity(9, 9) * C64::from(1.0 / 9.0)).norm() < 1e-15);
        let pplus = isotropic(3, 1.0).unwrap();
        assert!((pplus.matrix() - max_entangled(3).unwrap().projector()).norm() < 1e-15);
        assert!(isotropic(3, 1.1).is_err());
        assert!(isotropic(3, -0.2).is_err());
        assert!(isotropic(3, -0.125).is_ok());
    }

    #[test]
    fn isotropic_ppt_boundary() {
        assert!(min_pt_eigenvalue(&isotropic(3, 0.25).unwrap()).abs() < 1e-10);
        assert!(min_pt_eigenvalue(&isotropic(4, 0.2).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn upb_is_orthonormal_and_complement_is_ppt() {
        let v = upb_vectors();
        for i in 0..5 {
            for j in 0..5 {
                let ip = v[i].dotc(&v[j]);
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (ip - C64::from(expected)).norm() < 1e-15,
                    "<{i}|{j}> = {ip}"
                );
            }
        }
        let rho = bennett_rho();
        assert!(min_pt_eigenvalue(&rho) > -1e-12);
        assert!(realignment_value(&rho) > 1.0);
    }

    #[test]
    fn mixtures_hit_their_endpoints() {
        assert_eq!(
            bennett_mixture(0.0).unwrap().matrix(),
            bennett_rho().matrix()
        );
        let p1 = bennett_mixture(1.0).unwrap();
        assert!((p1.matrix() - max_entangled(3).unwrap().projector()).norm() < 1e-15);
        assert_eq!(
            rho_a_mixture(0.3, 0.0).unwrap().matrix(),
            rho_a(0.3).unwrap().matrix()
        );
        assert!(bennett_mixture(1.5).is_err());
        assert!(rho_a(1.0).is_err());
        assert!(rho_a(0.0).is_err());
    }

    #[test]
    fn rho_a_entries() {
        let a = 0.236;
        let r = rho_a(a).unwrap();
        let n = 8.0 * a + 1.0;
        assert!((r.matrix()[(6, 6)].re - (1.0 + a) / 2.0 / n).abs() < 1e-15);
        assert!((r.matrix()[(6, 8)].re - (1.0 - a * a).sqrt() / 2.0 / n).abs() < 1e-15);
        assert!((r.matrix()[(0, 4)].re - a / n).abs() < 1e-15);
        for a in [0.01, 0.236, 0.5, 0.99] {
            assert!(rho_a(a).unwrap().eigenvalues()[0] > -tolerance::PSD);
        }
    }

    #[test]
    fn random_states_are_seed_deterministic() {
        let dims = Dims::new(2, 3).unwrap();
        assert_eq!(random_pure(dims, 5), random_pure(dims, 5));
        assert_ne!(random_pure(dims, 5), random_pure(dims, 6));
        let r1 = random_density(dims, 1, 2).unwrap();
        assert!((r1.purity() - 1.0).abs() < 1e-10);
        let full = random_density(dims, 6, 2).unwrap();
        assert!(full.eigenvalues()[0] > 0.0);
        assert!(random_density(dims, 7, 2).is_err());
        assert!(random_density(dims, 0, 2).is_err());
    }

    #[test]
    fn random_unitary_is_unitary() {
        let u = random_unitary(4, 11);
        assert!((&u * u.adjoint() - CMatrix::identity(4, 4)).norm() < 1e-12);
    }

    #[test]
    fn schmidt_constructor_round_trips() {
        let psi = pure_from_schmidt(&[1.0], 3).unwrap();
        assert_eq!(psi.amplitudes()[0], C64::from(1.0));
        let mu = [0.2, 0.5, 0.3];
        let s = schmidt(&pure_from_schmidt(&mu, 3).unwrap());
        for (a, b) in s.coefficients.iter().zip([0.5, 0.3, 0.2]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(pure_from_schmidt(&[0.5, 0.6], 2).is_err());
        assert!(pure_from_schmidt(&[1.5, -0.5], 2).is_err());
        assert!(pure_from_schmidt(&[0.25; 4], 3).is_err());
    }

    #[test]
    fn spec_parsing_and_params() {
        let mut spec = StateSpec::from_json(r#"{"family":"isotropic","d":3,"x":0.3}"#).unwrap();
        assert_eq!(spec, StateSpec::Isotropic { d: 3, x: 0.3 });
        spec.set_param("x", 0.5).unwrap();
        assert_eq!(spec, StateSpec::Isotropic { d: 3, x: 0.5 });
        assert!(spec.set_param("p", 0.5).is_err());
        assert!(StateSpec::from_json(r#"{"family":"werner","d":3}"#).is_err());
        let rho = StateSpec::from_json(r#"{"family":"rho_a_mix","a":0.236}"#).unwrap();
        assert_eq!(rho, StateSpec::RhoAMix { a: 0.236, p: 0.0 });
        assert!(StateSpec::MaxEntangled { d: 3 }.pure().is_some());
        assert!(StateSpec::Isotropic { d: 3, x: 2.0 }.build().is_err());
    }
}
