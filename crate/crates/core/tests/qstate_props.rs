mod common;

use common::{eigvals, max_abs_diff, pt_naive, trace};
use entwit::qstate::{
    negativity, partial_transpose, partial_transpose_matrix, product_vector, pure_negativity,
    realignment_value, schmidt, trace_norm, DensityMatrix, Dims, PureState,
};
use entwit::states;
use entwit::C64;
use proptest::prelude::*;

fn dims_strategy() -> impl Strategy<Value = Dims> {
    (2usize..=4, 2usize..=4).prop_map(|(m, n)| Dims::new(m, n).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_transpose_is_an_involution(dims in dims_strategy(), seed in any::<u64>(), rank in 1usize..=16) {
        let rho = states::random_density(dims, rank.min(dims.total()), seed).unwrap();
        let pt = partial_transpose(&rho);
        prop_assert!(max_abs_diff(&pt, &pt_naive(rho.matrix(), dims.m(), dims.n())) < 1e-15);
        let back = partial_transpose_matrix(&pt, dims);
        prop_assert!(max_abs_diff(&back, rho.matrix()) < 1e-15);
        prop_assert!((trace(&pt) - C64::from(1.0)).norm() < 1e-12);
        prop_assert!(max_abs_diff(&pt, &pt.adjoint()) < 1e-15);
    }

    #[test]
    fn partial_transpose_is_linear(dims in dims_strategy(), s1 in any::<u64>(), s2 in any::<u64>(), t in 0.0f64..1.0) {
        let a = states::random_density(dims, dims.total(), s1).unwrap();
        let b = states::random_density(dims, 1, s2).unwrap();
        let mix = a.mix(&b, t).unwrap();
        let lhs = partial_transpose(&mix);
        let rhs = partial_transpose(&a) * C64::from(1.0 - t) + partial_transpose(&b) * C64::from(t);
        prop_assert!(max_abs_diff(&lhs, &rhs) < 1e-14);
    }

    #[test]
    fn pt_trace_norm_at_least_one(dims in dims_strategy(), seed in any::<u64>(), rank in 1usize..=16) {
        let rho = states::random_density(dims, rank.min(dims.total()), seed).unwrap();
        let pt = partial_transpose(&rho);
        let tn = trace_norm(&pt).unwrap();
        let ev = eigvals(&pt);
        prop_assert!(tn >= 1.0 - 1e-10);
        prop_assert!((tn - ev.iter().map(|v| v.abs()).sum::<f64>()).abs() < 1e-10);
        // Equality exactly when the partial transpose is positive.
        prop_assert_eq!((tn - 1.0).abs() < 1e-9, ev[0] >= -1e-9);
    }

    #[test]
    fn schmidt_spectrum_is_local_unitary_invariant(dims in dims_strategy(), seed in any::<u64>()) {
        let psi = states::random_pure(dims, seed);
        let ua = states::random_unitary(dims.m(), seed ^ 0x55);
        let ub = states::random_unitary(dims.n(), seed ^ 0xaa);
        let rotated = psi.apply_local(&ua, &ub).unwrap();
        let mu = schmidt(&psi).coefficients;
        let nu = schmidt(&rotated).coefficients;
        for (x, y) in mu.iter().zip(&nu) {
            prop_assert!((x - y).abs() < 1e-10);
        }
        let rebuilt = schmidt(&rotated).reconstruct();
        prop_assert!((rebuilt - rotated.amplitudes()).norm() < 1e-10);
    }
}

#[test]
fn projector_negativity_matches_pure_formula() {
    let mut worst = 0.0f64;
    for seed in 0..200 {
        let dims = Dims::new(2 + (seed % 3) as usize, 2 + (seed / 3 % 3) as usize).unwrap();
        let psi = states::random_pure(dims, seed);
        let n = negativity(&DensityMatrix::from_pure(&psi));
        worst = worst.max((n - pure_negativity(&psi)).abs());
    }
    assert!(worst < 1e-9, "worst deviation {worst}");
}

#[test]
fn max_entangled_qutrits_have_pt_trace_norm_three() {
    let rho = DensityMatrix::from_pure(&states::max_entangled(3).unwrap());
    let tn: f64 = eigvals(&pt_naive(rho.matrix(), 3, 3))
        .iter()
        .map(|v| v.abs())
        .sum();
    assert!((tn - 3.0).abs() < 1e-12);
    assert!((trace_norm(&partial_transpose(&rho)).unwrap() - 3.0).abs() < 1e-12);
    assert!((negativity(&rho) - 1.0).abs() < 1e-12);
}

#[test]
fn product_pure_states_have_unit_realignment() {
    for seed in 0..20 {
        let m = 2 + (seed % 3) as usize;
        let n = 2 + (seed / 3 % 3) as usize;
        let va = states::random_unitary(m, seed).column(0).into_owned();
        let vb = states::random_unitary(n, seed + 100).column(0).into_owned();
        let psi = PureState::new(product_vector(&va, &vb), Dims::new(m, n).unwrap()).unwrap();
        let r = realignment_value(&DensityMatrix::from_pure(&psi));
        assert!((r - 1.0).abs() < 1e-10, "realignment {r}");
    }
}

#[test]
fn random_schmidt_reconstruction_residual() {
    for seed in 0..50 {
        let psi = states::random_pure(Dims::new(3, 4).unwrap(), seed);
        let res = (schmidt(&psi).reconstruct() - psi.amplitudes()).norm();
        assert!(res < 1e-10);
    }
}
