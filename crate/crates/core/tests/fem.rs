use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use subdiff_core::reference_oracle::ModalBasis;
use subdiff_core::spatial_fem::{
    assemble, assemble_full, lagrange_interpolate, spd_solve, Dimension, FemSpace, SparseSymOperator, TriMesh,
};

fn dimension(two: bool) -> Dimension {
    if two {
        Dimension::Two
    } else {
        Dimension::One
    }
}

fn vertex_values(mesh: &TriMesh, f: impl Fn([f64; 2]) -> f64) -> Vec<f64> {
    mesh.vertices.iter().map(|&p| f(p)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn operators_are_exactly_symmetric(m in 2usize..24, two in any::<bool>(), kappa in 0.01f64..10.0) {
        let mesh = TriMesh::new(dimension(two), m).unwrap();
        let (mass, stiffness) = assemble(&mesh, kappa).unwrap();
        prop_assert_eq!(mass.max_asymmetry(), 0.0);
        prop_assert_eq!(stiffness.max_asymmetry(), 0.0);
        prop_assert!(mass.diagonal().iter().chain(stiffness.diagonal().iter()).all(|&d| d > 0.0));
    }

    #[test]
    fn full_operators_integrate_linear_functions(m in 2usize..24, two in any::<bool>(), kappa in 0.01f64..10.0) {
        let mesh = TriMesh::new(dimension(two), m).unwrap();
        let (mass, stiffness) = assemble_full(&mesh, kappa).unwrap();
        let one = vec![1.0; mesh.vertices.len()];
        let x = vertex_values(&mesh, |p| p[0]);
        prop_assert!((mass.bilinear(&one, &one) - 1.0).abs() < 1e-12);
        prop_assert!((mass.bilinear(&x, &x) - 1.0 / 3.0).abs() < 1e-12);
        prop_assert!(stiffness.apply(&one).iter().all(|v| v.abs() < 1e-10 * kappa * (m * m) as f64));
        prop_assert!((stiffness.bilinear(&x, &x) - kappa).abs() < 1e-11 * kappa);
        if two {
            let y = vertex_values(&mesh, |p| p[1]);
            prop_assert!((mass.bilinear(&x, &y) - 0.25).abs() < 1e-12);
            prop_assert!(stiffness.bilinear(&x, &y).abs() < 1e-11 * kappa);
        }
    }

    #[test]
    fn cg_agrees_with_dense_cholesky(m in 2usize..12, two in any::<bool>(), seed in 0u64..1000) {
        let mesh = TriMesh::new(dimension(two), m).unwrap();
        let (mass, stiffness) = assemble(&mesh, 0.3).unwrap();
        let n = mass.n;
        let b: Vec<f64> = (0..n).map(|i| (((i as u64 + 1) * (seed + 7)) % 13) as f64 - 6.0).collect();
        let system = SparseSymOperator::linear_combination(5.0, &mass, 1.0, &stiffness).unwrap();
        let x = spd_solve(&system, &b).unwrap();
        let dense: DMatrix<f64> = system.to_dense();
        let exact = dense.cholesky().unwrap().solve(&DVector::from_vec(b.clone()));
        let err = x.iter().zip(exact.iter()).map(|(a, e)| (a - e).abs()).fold(0.0, f64::max);
        let scale = exact.amax().max(1e-300);
        prop_assert!(err <= 1e-9 * scale, "{err} vs {scale}");
    }
}

#[test]
fn modal_basis_is_mass_orthonormal_eigenbasis() {
    for (dim, m) in [(Dimension::One, 20), (Dimension::Two, 7)] {
        let space = FemSpace::new(TriMesh::new(dim, m).unwrap(), 0.1).unwrap();
        let basis = ModalBasis::new(&space).unwrap();
        let mass = space.mass.to_dense();
        let stiff = space.stiffness.to_dense();
        let v = &basis.vectors;
        let gram = v.transpose() * &mass * v;
        let identity = DMatrix::<f64>::identity(basis.len(), basis.len());
        assert!((gram - identity).amax() < 1e-10);
        let residual = &stiff * v - &mass * v * DMatrix::from_diagonal(&DVector::from_vec(basis.eigenvalues.clone()));
        assert!(residual.amax() < 1e-10 * basis.eigenvalues.last().unwrap());
        assert!(basis.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn interpolating_a_discrete_function_is_identity() {
    let mesh = TriMesh::new(Dimension::Two, 6).unwrap();
    let interior: Vec<f64> = (0..mesh.num_dofs()).map(|i| (i as f64 * 0.37).sin()).collect();
    let nodal = mesh.extend_by_zero(&interior);
    let again = lagrange_interpolate(&mesh, |p| mesh.evaluate_nodal(&nodal, p));
    for (a, b) in again.values.iter().zip(&interior) {
        assert!((a - b).abs() < 1e-14);
    }
}
