use covspin::classical_spin::{
    classical_sg_lab, classical_sg_rest, lab_sx_expectation, lab_sx_expectation_closed_form,
    planar_eigenstates, relativistic_spin_vector, theta_angle, transform_dipoles,
    transform_dipoles_by_tensor,
};
use covspin::dirac::{
    boost_spinor, covariant_expectation, dirac_residual, dirac_spin_vector,
    dirac_spin_vector_by_conjugation, rest_spin_operators, rest_spinor, spinor_boost, EnergySign,
    SpinProjection,
};
use covspin::experiment::{angular_gap, run_experiment, ExperimentConfig, SpinModel};
use covspin::fields::{
    boost_fields, field_invariants, field_tensor_from_eb, rest_frame_fields, rest_frame_tensor,
    FieldConfig,
};
use covspin::operators::{max_abs, re, spin_algebra_residual};
use covspin::tensor::{metric, minkowski_inner, pure_boost, FourVector};
use nalgebra::Vector3;
use proptest::prelude::*;

fn velocity() -> impl Strategy<Value = Vector3<f64>> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, 0.0..0.95f64).prop_map(|(x, y, z, s)| {
        let v = Vector3::new(x, y, z);
        let n = v.norm();
        if n < 1e-6 {
            Vector3::zeros()
        } else {
            v * (s / n)
        }
    })
}

fn vector(scale: f64) -> impl Strategy<Value = Vector3<f64>> {
    (-scale..scale, -scale..scale, -scale..scale).prop_map(|(x, y, z)| Vector3::new(x, y, z))
}

fn unit() -> impl Strategy<Value = Vector3<f64>> {
    vector(1.0).prop_filter("nonzero", |v| v.norm() > 1e-3)
}

proptest! {
    #[test]
    fn boost_preserves_metric(beta in velocity()) {
        let l = *pure_boost(beta).unwrap().matrix();
        let g = metric();
        prop_assert!((l.transpose() * g * l - g).amax() < 1e-10);
        prop_assert!((l.determinant() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn opposite_boost_is_inverse(beta in velocity()) {
        let l = pure_boost(beta).unwrap();
        let back = pure_boost(-beta).unwrap();
        prop_assert!((l.matrix() * back.matrix() - nalgebra::Matrix4::identity()).amax() < 1e-10);
        prop_assert!((l.inverse().matrix() - back.matrix()).amax() < 1e-15);
    }

    #[test]
    fn boosted_rest_momentum_on_shell(beta in velocity()) {
        let p = pure_boost(beta).unwrap().apply(&FourVector::at_rest(1.0));
        prop_assert!((minkowski_inner(&p, &p) - 1.0).abs() < 1e-10);
        prop_assert!((p.spatial() - beta * p.time()).amax() < 1e-12);
    }

    #[test]
    fn field_invariants_preserved(e in vector(3.0), b in vector(3.0), beta in velocity()) {
        let f = field_tensor_from_eb(&e, &b);
        let l = pure_boost(beta).unwrap();
        let (s0, p0) = field_invariants(&f);
        for inverse in [false, true] {
            let (s1, p1) = field_invariants(&boost_fields(&f, &l, inverse));
            prop_assert!((s0 - s1).abs() < 1e-9 * (1.0 + s0.abs()));
            prop_assert!((p0 - p1).abs() < 1e-9 * (1.0 + p0.abs()));
        }
    }

    #[test]
    fn rest_fields_closed_form_matches_tensor(
        b in 0.1..5.0f64, phi in -3.2..3.2f64, beta in 0.0..0.97f64
    ) {
        let cfg = FieldConfig::new(b, phi, beta).unwrap();
        let (e, m) = rest_frame_fields(&cfg);
        let t = rest_frame_tensor(&cfg);
        prop_assert!((t.electric() - e).amax() < 1e-10 * b.max(1.0) * cfg.gamma());
        prop_assert!((t.magnetic() - m).amax() < 1e-10 * b.max(1.0) * cfg.gamma());
    }

    #[test]
    fn dipole_routes_agree(d in vector(2.0), mu in vector(2.0), beta in velocity()) {
        let (d1, m1) = transform_dipoles(&d, &mu, &beta).unwrap();
        let (d2, m2) = transform_dipoles_by_tensor(&d, &mu, &beta).unwrap();
        prop_assert!((d1 - d2).amax() < 1e-10);
        prop_assert!((m1 - m2).amax() < 1e-10);
    }

    #[test]
    fn dirac_spin_closes_algebra(beta in velocity()) {
        prop_assert!(spin_algebra_residual(&dirac_spin_vector(&beta).unwrap()) < 1e-10);
    }

    #[test]
    fn relativistic_spin_breaks_algebra(dir in unit(), speed in 0.1..0.95f64) {
        let beta = dir.normalize() * speed;
        prop_assert!(spin_algebra_residual(&relativistic_spin_vector(&beta).unwrap()) > 1e-3);
    }

    #[test]
    fn conjugation_matches_closed_form(beta in velocity()) {
        let a = dirac_spin_vector(&beta).unwrap();
        let b = dirac_spin_vector_by_conjugation(&beta).unwrap();
        prop_assert!(a.max_diff(&b) < 1e-10);
    }

    #[test]
    fn spinor_boost_is_hermitian_and_invertible(beta in velocity()) {
        let d = spinor_boost(&beta).unwrap();
        prop_assert!(max_abs(&(d.matrix() - d.matrix().adjoint())) < 1e-12);
        let id = d.matrix() * d.inverse();
        prop_assert!(max_abs(&(id - covspin::operators::Mat4::identity())) < 1e-10);
    }

    #[test]
    fn boosted_spinors_solve_dirac_equation(
        dir in unit(), beta in velocity(), up in any::<bool>(), positive in any::<bool>()
    ) {
        let projection = if up { SpinProjection::Up } else { SpinProjection::Down };
        let sign = if positive { EnergySign::Positive } else { EnergySign::Negative };
        let rest = rest_spinor(&dir, projection, sign).unwrap();
        let psi = boost_spinor(&rest, &beta).unwrap();
        prop_assert!(dirac_residual(&psi) < 1e-10);
        prop_assert!((psi.covariant_norm() - rest.covariant_norm()).abs() < 1e-10);
        prop_assert!((rest.covariant_norm() - sign.value() * 2.0).abs() < 1e-12);
    }

    #[test]
    fn rest_spinor_points_along_direction(dir in unit(), up in any::<bool>()) {
        let projection = if up { SpinProjection::Up } else { SpinProjection::Down };
        let psi = rest_spinor(&dir, projection, EnergySign::Positive).unwrap();
        let n = dir.normalize();
        let s = rest_spin_operators();
        let got = Vector3::from_fn(|i, _| covariant_expectation(&s.ops[i], &psi).re());
        let sign = if up { 1.0 } else { -1.0 };
        prop_assert!((got - n * sign).amax() < 1e-12);
    }

    #[test]
    fn expectations_ignore_global_phase(
        dir in unit(), beta in velocity(), chi in -6.3..6.3f64
    ) {
        let psi = boost_spinor(
            &rest_spinor(&dir, SpinProjection::Up, EnergySign::Positive).unwrap(),
            &beta,
        )
        .unwrap();
        let phased = psi.with_phase(chi);
        let spin = dirac_spin_vector(&beta).unwrap();
        for op in &spin.ops {
            let a = covariant_expectation(op, &psi).value;
            let b = covariant_expectation(op, &phased).value;
            prop_assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn classical_hamiltonians_covariant(
        b in 0.1..3.0f64, phi in -3.2..3.2f64, beta in 0.0..0.95f64, alpha in 0.1..3.0f64
    ) {
        let cfg = FieldConfig::new(b, phi, beta).unwrap();
        let lab = classical_sg_lab(&cfg, alpha) * re(cfg.gamma());
        prop_assert!(max_abs(&(lab - classical_sg_rest(&cfg, alpha))) < 1e-10);
    }

    #[test]
    fn u_theta_is_rest_eigenstate(phi in -3.2..3.2f64, gamma in 1.0..10.0f64) {
        let cfg = FieldConfig::with_gamma(1.0, phi, gamma).unwrap();
        let (up, _) = planar_eigenstates(theta_angle(phi, gamma));
        let (_, resid) = up.eigen_residual(&classical_sg_rest(&cfg, 1.0));
        prop_assert!(resid < 1e-10);
    }

    #[test]
    fn lab_sx_routes_agree(phi in -3.2..3.2f64, gamma in 1.0..10.0f64) {
        let m = lab_sx_expectation(phi, gamma).unwrap();
        prop_assert!((m - lab_sx_expectation_closed_form(phi, gamma)).abs() < 1e-10 * gamma);
    }

    #[test]
    fn dirac_never_paradoxical(phi in 0.0..1.58f64, gamma in 1.0..6.0f64) {
        let r = run_experiment(&ExperimentConfig::with_gamma(SpinModel::Dirac, gamma, phi)).unwrap();
        prop_assert!(!r.paradox);
        prop_assert!(r.rest_eigen_residual < 1e-10);
    }

    #[test]
    fn relativistic_paradox_off_axis(phi in 0.05..1.52f64, gamma in 1.05..6.0f64) {
        let r = run_experiment(&ExperimentConfig::with_gamma(SpinModel::Relativistic, gamma, phi))
            .unwrap();
        prop_assert!(r.paradox);
    }

    #[test]
    fn angular_gap_bounds(a in -10.0..10.0f64, b in -10.0..10.0f64) {
        let g = angular_gap(a, b);
        prop_assert!((0.0..=std::f64::consts::FRAC_PI_2 + 1e-15).contains(&g));
        prop_assert!((g - angular_gap(b, a)).abs() < 1e-12);
    }
}
