// SPDX-License-Identifier: MIT OR Apache-2.0

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, TAU};

use num_complex::Complex64;
use proptest::prelude::*;

use rectpeg_core::audit::jacobian_error;
use rectpeg_core::curve::{preset, Curve};
use rectpeg_core::solver::{solve_all, SolverConfig};
use rectpeg_core::system::{
    canonical, rectangle_from_params, residual, sorted_vertices, verify_rectangle, AspectProfile,
    TorusPoint4,
};

const CORPUS: [&str; 5] = [
    "circle",
    "ellipse(2,1)",
    "rounded-rectangle",
    "perturbed-circle(1)",
    "perturbed-circle(2)",
];

fn torus() -> impl Strategy<Value = TorusPoint4> {
    proptest::array::uniform4(0.0..TAU).prop_map(TorusPoint4::from)
}

#[test]
fn jacobian_matches_finite_differences_on_corpus() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(50);
    let profiles = [
        AspectProfile::constant(FRAC_PI_3).unwrap(),
        AspectProfile::polynomial(vec![0.7, 0.2, -0.01]).unwrap(),
    ];
    for name in CORPUS {
        let c = preset(name).unwrap();
        for _ in 0..50 {
            let u = TorusPoint4::from(std::array::from_fn(|_| rng.gen_range(0.0..TAU)));
            for p in &profiles {
                let err = jacobian_error(&c, &u, p).unwrap();
                assert!(err < 1e-6, "{name}: {err}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn swap_preserves_the_zero_set_of_every_constant_angle(u in torus(), phi in 0.1..3.0f64) {
        let c = preset("bean").unwrap();
        let p = AspectProfile::constant(phi).unwrap();
        let a = residual(&c, &u, &p).unwrap();
        let b = residual(&c, &u.swap_pairs(), &p).unwrap();
        prop_assert!((a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
        prop_assert!((a[2] + b[2]).abs() < 1e-12 && (a[3] + b[3]).abs() < 1e-12);
    }

    #[test]
    fn circle_rectangles_are_roots_and_rectangles(alpha in 0.0..TAU, phi in 0.05..FRAC_PI_2) {
        // On the unit circle the rectangle with diagonals at angles α and
        // α − φ is (α, α+π, α−φ, α−φ+π).
        let u = TorusPoint4::new(alpha, alpha + std::f64::consts::PI, alpha - phi, alpha - phi + std::f64::consts::PI);
        let c = Curve::circle();
        let p = AspectProfile::constant(phi).unwrap();
        let r = residual(&c, &u, &p).unwrap();
        prop_assert!(r.iter().all(|x| x.abs() < 1e-12));
        let sol = rectangle_from_params(&c, &u, &p).unwrap();
        prop_assert!(verify_rectangle(&sol, 1e-8));
        let once = canonical(&sol);
        prop_assert_eq!(canonical(&once), once.clone());
        let swapped = rectangle_from_params(&c, &u.swap_pairs(), &p).unwrap();
        prop_assert_eq!(sorted_vertices(&canonical(&swapped), 1e-9), sorted_vertices(&once, 1e-9));
    }
}

fn vertex_sets_match(a: &[Complex64; 4], b: &[Complex64; 4], tol: f64) -> bool {
    a.iter().all(|p| b.iter().any(|q| (p - q).norm() < tol))
}

#[test]
fn solutions_rotate_with_the_curve() {
    let cfg = SolverConfig::default();
    let alpha = 0.7;
    let rot = Complex64::from_polar(1.0, alpha);
    for name in ["perturbed-circle(1)", "bean", "ellipse(2,1)"] {
        let c = preset(name).unwrap();
        let base = solve_all(&c, FRAC_PI_3, &cfg).unwrap();
        let turned = solve_all(&c.rotated(alpha), FRAC_PI_3, &cfg).unwrap();
        for s in &base {
            let expected = s.vertices.map(|v| v * rot);
            let hit = turned
                .iter()
                .find(|t| vertex_sets_match(&t.vertices, &expected, 1e-8));
            let t = hit.unwrap_or_else(|| panic!("{name}: rotated solution missing"));
            assert!((t.center - s.center * rot).norm() < 1e-8);
            let dtheta = (t.theta - s.theta - alpha).rem_euclid(std::f64::consts::PI);
            assert!(dtheta < 1e-8 || std::f64::consts::PI - dtheta < 1e-8);
        }
        assert_eq!(base.len(), turned.len(), "{name}");
    }
}

#[test]
fn translation_moves_the_center_only() {
    let p = AspectProfile::constant(FRAC_PI_2).unwrap();
    let u = TorusPoint4::new(
        0.0,
        std::f64::consts::PI,
        1.5 * std::f64::consts::PI,
        FRAC_PI_2,
    );
    let a = rectangle_from_params(&Curve::circle(), &u, &p).unwrap();
    let b = rectangle_from_params(
        &Curve::circle().translated(Complex64::new(5.0, 0.0)),
        &u,
        &p,
    )
    .unwrap();
    assert!((b.center - Complex64::new(5.0, 0.0)).norm() < 1e-12);
    assert!((a.half_diag - b.half_diag).abs() < 1e-12);
    assert_eq!(a.phi, b.phi);
}
