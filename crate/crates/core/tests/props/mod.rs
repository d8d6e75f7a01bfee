//! Randomized invariants shared by the `properties` and `acceptance` targets.

use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use robin_core::caps::Cap;
use robin_core::conformal::{disk_to_halfplane, halfplane_to_disk, mobius, reflect_unchecked};
use robin_core::domains::{area_comparison, make_domain, pullback_problem, scale_coeffs};
use robin_core::femrobin::{build_disk_mesh, Mesh};
use robin_core::{Complex64, DiskMode, WeightedRobinProblem};

pub type Property = (&'static str, fn() -> Result<(), String>);

pub const ALL: [Property; 9] = [
    ("moebius_inverse", moebius_inverse),
    ("reflection_involutions", reflection_involutions),
    ("conjugation_identities", conjugation_identities),
    ("fold_idempotent", fold_idempotent),
    ("mode_commutes_with_reflection", mode_commutes_with_reflection),
    ("profile_increasing", profile_increasing),
    ("eigenvalues_monotone_in_beta", eigenvalues_monotone_in_beta),
    ("scale_invariance", scale_invariance),
    ("area_comparison_strict", area_comparison_strict),
];

fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn disk_point(radius: f64) -> impl Strategy<Value = Complex64> {
    (0.0..1.0f64, 0.0..TAU).prop_map(move |(s, a)| Complex64::from_polar(radius * s.sqrt(), a))
}

/// `z + c₁z² + c₂z³` with `2|c₁| + 3|c₂| < 0.9`, so `Re f' > 0` and `f` is univalent.
fn univalent_coeffs() -> impl Strategy<Value = Vec<Complex64>> {
    (disk_point(0.25), disk_point(0.13)).prop_map(|(c1, c2)| vec![Complex64::new(1.0, 0.0), c1, c2])
}

fn small_mesh() -> Mesh {
    build_disk_mesh(5).unwrap()
}

pub fn moebius_inverse() -> Result<(), String> {
    run(2000, (disk_point(0.95), disk_point(1.0)), |(w, z)| {
        prop_assert!((mobius(-w, mobius(w, z)) - z).norm() < 1e-12);
        prop_assert!(mobius(w, z).norm() <= 1.0 + 1e-12);
        Ok(())
    })
}

pub fn reflection_involutions() -> Result<(), String> {
    run(2000, (0.0..TAU, -0.95..0.95f64, disk_point(1.0)), |(angle, t, z)| {
        let p = Complex64::from_polar(1.0, angle);
        prop_assert!((reflect_unchecked(p, reflect_unchecked(p, z)) - z).norm() < 1e-14);
        let cap = Cap::new(angle, t).unwrap();
        prop_assert!((cap.reflection(cap.reflection(z)) - z).norm() < 1e-9);
        Ok(())
    })
}

pub fn conjugation_identities() -> Result<(), String> {
    run(2000, (0.0..TAU, disk_point(0.95), disk_point(1.0), -3.0..3.0f64, 0.01..3.0f64), |(angle, w, z, x, y)| {
        // M_w ∘ R_p = R_p ∘ M_{R_p(w)}
        let p = Complex64::from_polar(1.0, angle);
        let lhs = mobius(w, reflect_unchecked(p, z));
        let rhs = reflect_unchecked(p, mobius(reflect_unchecked(p, w), z));
        prop_assert!((lhs - rhs).norm() < 1e-12);
        // W⁻¹ ∘ M_{1/3} ∘ W halves the halfplane
        let h = Complex64::new(x, y);
        let back = disk_to_halfplane(mobius(Complex64::new(1.0 / 3.0, 0.0), halfplane_to_disk(h).unwrap())).unwrap();
        prop_assert!((back - h / 2.0).norm() < 1e-12);
        Ok(())
    })
}

pub fn fold_idempotent() -> Result<(), String> {
    run(2000, (0.0..TAU, -0.95..0.95f64, disk_point(1.0)), |(angle, t, z)| {
        let cap = Cap::new(angle, t).unwrap();
        let f = cap.fold(z);
        prop_assert!(cap.side(f) >= -1e-12);
        prop_assert!((cap.fold(f) - f).norm() < 1e-12);
        prop_assert!(cap.fold_to_disk(z).norm() <= 1.0 + 1e-9);
        Ok(())
    })
}

pub fn mode_commutes_with_reflection() -> Result<(), String> {
    run(300, (-1.0..0.0f64, 0.0..TAU, disk_point(1.0)), |(a, angle, z)| {
        let mode = DiskMode::excited(a).unwrap();
        let q = Complex64::from_polar(1.0, angle);
        let lhs = mode.eval_complex(reflect_unchecked(q, z));
        let rhs = reflect_unchecked(q, mode.eval_complex(z));
        prop_assert!((lhs - rhs).norm() < 1e-13);
        Ok(())
    })
}

pub fn profile_increasing() -> Result<(), String> {
    run(100, -1.0..=0.0f64, |a| {
        let g = DiskMode::excited(a).unwrap().profile;
        let mut prev = g.value(0.0);
        prop_assert!(prev.abs() < 1e-15);
        for k in 1..=200 {
            let v = g.value(k as f64 / 200.0);
            prop_assert!(v > prev, "a = {a}, r = {}", k as f64 / 200.0);
            prev = v;
        }
        Ok(())
    })
}

pub fn eigenvalues_monotone_in_beta() -> Result<(), String> {
    let mesh = small_mesh();
    run(16, (-2.0..2.0f64, 0.0..1.5f64, 0.0..0.9f64), |(b, db, amp)| {
        let lo = WeightedRobinProblem::constant(b).solve(&mesh, 3).unwrap();
        // a nonconstant increase β + db·(1 + amp·sin 3θ)
        let hi = WeightedRobinProblem::new(
            std::sync::Arc::new(|_| 1.0),
            std::sync::Arc::new(|_| 1.0),
            std::sync::Arc::new(move |z: Complex64| b + db * (1.0 + amp * (3.0 * z.arg()).sin())),
            b.abs() + 2.0 * db + 2.0,
        )
        .unwrap()
        .solve(&mesh, 3)
        .unwrap();
        for k in 0..3 {
            prop_assert!(hi.eigenvalues[k] >= lo.eigenvalues[k] - 1e-10);
        }
        Ok(())
    })
}

pub fn scale_invariance() -> Result<(), String> {
    let mesh = small_mesh();
    run(12, (univalent_coeffs(), 0.3..4.0f64, -4.0 * PI..0.0f64), |(coeffs, c, alpha)| {
        let d = make_domain(&coeffs, "random").unwrap();
        let big = scale_coeffs(&d, c).unwrap();
        let l = pullback_problem(&d, alpha).unwrap().solve(&mesh, 3).unwrap().eigenvalues[2] * d.area();
        let lb = pullback_problem(&big, alpha).unwrap().solve(&mesh, 3).unwrap().eigenvalues[2] * big.area();
        prop_assert!((l - lb).abs() < 1e-9 * l.abs().max(1.0), "{l} vs {lb}");
        Ok(())
    })
}

pub fn area_comparison_strict() -> Result<(), String> {
    let nondisk = univalent_coeffs().prop_filter("non-disk", |c| c[1].norm() + c[2].norm() > 0.05);
    run(24, (nondisk, disk_point(0.5), -1.0..=0.0f64), |(coeffs, w, a)| {
        let d = make_domain(&coeffs, "random").unwrap();
        let profile = DiskMode::excited(a).unwrap().profile;
        let (lhs, rhs) = area_comparison(&d, &profile, w);
        prop_assert!(rhs > lhs * (1.0 + 1e-6), "{lhs} vs {rhs}");
        Ok(())
    })
}
