//! Property tests for the dense linear algebra layer.

use num_complex::Complex64;
use pingpong_core::designs::haar_random_unitary;
use pingpong_core::linalg::{hermitian_eigenvalues, ComplexMatrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn hermitian2_strategy() -> impl Strategy<Value = ComplexMatrix> {
    (
        -2.0..2.0f64,
        -2.0..2.0f64,
        -2.0..2.0f64,
        -2.0..2.0f64,
    )
        .prop_map(|(a, d, br, bi)| {
            ComplexMatrix::from_rows2([
                [Complex64::new(a, 0.0), Complex64::new(br, bi)],
                [Complex64::new(br, -bi), Complex64::new(d, 0.0)],
            ])
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn trace_norm_is_symmetric_under_negation(m in hermitian2_strategy()) {
        let neg = m.scale(Complex64::new(-1.0, 0.0));
        prop_assert!((m.trace_norm().unwrap() - neg.trace_norm().unwrap()).abs() < 1e-10);
    }

    #[test]
    fn trace_norm_triangle_inequality(a in hermitian2_strategy(), b in hermitian2_strategy()) {
        let sum = a.add(&b).unwrap();
        let lhs = sum.trace_norm().unwrap();
        let rhs = a.trace_norm().unwrap() + b.trace_norm().unwrap();
        prop_assert!(lhs <= rhs + 1e-10, "{lhs} > {rhs}");
    }
}

#[test]
fn eigenvalues_recover_diagonal_under_random_conjugation() {
    // U diag(d) U^dag must return d for Haar-random U, max error 1e-9.
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..200 {
        let u = haar_random_unitary(&mut rng);
        let d0 = -1.5 + 3.0 * rand::Rng::gen::<f64>(&mut rng);
        let d1 = d0 + rand::Rng::gen::<f64>(&mut rng); // ensures order
        let diag = ComplexMatrix::from_rows2([
            [Complex64::new(d0, 0.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(d1, 0.0)],
        ]);
        let m = u.matmul(&diag).unwrap().matmul(&u.adjoint()).unwrap();
        let eigs = hermitian_eigenvalues(&m).unwrap();
        assert!((eigs[0] - d0).abs() < 1e-9 && (eigs[1] - d1).abs() < 1e-9);
    }
}

#[test]
fn dim4_eigenvalues_recover_random_spectra() {
    let mut rng = ChaCha8Rng::seed_from_u64(123);
    for _ in 0..50 {
        // Random 4x4 Hermitian built from a random Hermitian square.
        let mut g = ComplexMatrix::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                g.set(
                    i,
                    j,
                    Complex64::new(
                        rand::Rng::gen::<f64>(&mut rng) - 0.5,
                        rand::Rng::gen::<f64>(&mut rng) - 0.5,
                    ),
                );
            }
        }
        let h = g.add(&g.adjoint()).unwrap().scale(Complex64::new(0.5, 0.0));
        let eigs = hermitian_eigenvalues(&h).unwrap();
        let tr: f64 = (0..4).map(|i| h.get(i, i).re).sum();
        assert!((eigs.iter().sum::<f64>() - tr).abs() < 1e-10);
        // Sum of squares equals the squared Frobenius norm.
        let fro: f64 = h.entries().iter().map(|e| e.norm_sqr()).sum();
        let sq: f64 = eigs.iter().map(|e| e * e).sum();
        assert!((sq - fro).abs() < 1e-9);
        assert!(eigs.windows(2).all(|w| w[0] <= w[1]));
    }
}
