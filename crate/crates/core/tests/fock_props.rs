use std::f64::consts::TAU;

use num_complex::Complex64;
use proptest::prelude::*;
use sqr_core::fock::{
    annihilation, creation, displacement, photon_distribution, required_dim, squeeze, squeezed_coherent_state,
    variances, FockOperator, FockSpace, OscillatorFrame, SqueezeSpec, Truncation,
};

fn space(dim: usize) -> FockSpace {
    FockSpace::new(dim).unwrap()
}

fn leading_block_defect(op: &FockOperator, identity_minus: bool) -> f64 {
    let m = op.matrix();
    let n = m.rows() - 1;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let want = if identity_minus && i == j { 1.0 } else { 0.0 };
            worst = worst.max((m[(i, j)] - Complex64::new(want, 0.0)).norm());
        }
    }
    worst
}

fn state(alpha: Complex64, r: f64, phi: f64, dim: usize) -> sqr_core::fock::QuantumState {
    let spec = SqueezeSpec::new(alpha, r, phi).unwrap();
    squeezed_coherent_state(space(dim), &spec, Truncation::Enforce).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn commutator_is_identity_off_the_corner(dim in 2usize..160) {
        let s = space(dim);
        let c = annihilation(s).commutator(&creation(s)).unwrap();
        prop_assert!(leading_block_defect(&c, true) < 1e-12);
        let corner = c.matrix()[(dim - 1, dim - 1)];
        prop_assert!((corner.re + (dim as f64 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn displacement_is_unitary_and_invertible(re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let alpha = Complex64::new(re, im);
        let s = space(required_dim(alpha.norm(), 0.0));
        let d = displacement(s, alpha, Truncation::Enforce).unwrap();
        prop_assert!(d.unitarity_defect() < 1e-10);
        let back = displacement(s, -alpha, Truncation::Enforce).unwrap();
        let id = d.compose(&back).unwrap();
        prop_assert!(id.sub(&FockOperator::identity(s)).unwrap().matrix().norm_max() < 1e-10);
    }

    #[test]
    fn squeeze_is_unitary_and_invertible(r in 0.0f64..1.5, phi in 0.0f64..TAU) {
        let xi = Complex64::from_polar(r, phi);
        let s = space(required_dim(0.0, r).min(200));
        let op = squeeze(s, xi, Truncation::Force).unwrap();
        prop_assert!(op.unitarity_defect() < 1e-10);
        let id = op.compose(&squeeze(s, -xi, Truncation::Force).unwrap()).unwrap();
        prop_assert!(id.sub(&FockOperator::identity(s)).unwrap().matrix().norm_max() < 1e-10);
    }

    #[test]
    fn real_squeezing_is_minimum_uncertainty(a in -2.0f64..2.0, b in -2.0f64..2.0, r in 0.0f64..1.2) {
        let alpha = Complex64::new(a, b);
        let st = state(alpha, r, 0.0, required_dim(alpha.norm(), r));
        let v = variances(&st, &OscillatorFrame::default()).unwrap();
        prop_assert!((v.product - 0.5).abs() < 1e-6);
        prop_assert!((v.var_x / (0.5 * (-2.0 * r).exp()) - 1.0).abs() < 1e-6);
        prop_assert!((v.var_p / (0.5 * (2.0 * r).exp()) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn doubling_dim_leaves_variances(a in 0.0f64..2.0, r in 0.0f64..1.0) {
        let alpha = Complex64::new(a, 0.0);
        let dim = required_dim(a, r);
        let frame = OscillatorFrame::default();
        let v1 = variances(&state(alpha, r, 0.0, dim), &frame).unwrap();
        let v2 = variances(&state(alpha, r, 0.0, 2 * dim), &frame).unwrap();
        prop_assert!((v1.var_x - v2.var_x).abs() < 1e-8);
    }

    #[test]
    fn squeezed_vacuum_has_even_photons(r in 0.0f64..1.5, phi in 0.0f64..TAU) {
        let st = state(Complex64::new(0.0, 0.0), r, phi, required_dim(0.0, r));
        let p = photon_distribution(&st);
        for n in (1..p.len()).step_by(2) {
            prop_assert!(p[n] < 1e-12);
        }
    }
}
