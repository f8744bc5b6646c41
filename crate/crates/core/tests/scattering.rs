//! Direct scattering against the box closed form, self-consistency
//! identities on smooth data, and zero counts.

use nnls_core::grid::UniformGrid;
use nnls_core::scattering::*;
use nnls_core::{Sigma, C64};
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn gaussian(amp: C64, sigma: Sigma) -> InitialProfile {
    let g = UniformGrid::symmetric(12.0, 2401).unwrap();
    InitialProfile::from_fn(g, sigma, |x| amp * (-x * x).exp()).unwrap()
}

#[test]
fn zero_profile_is_trivial() {
    let q0 = InitialProfile::zero(Sigma::Plus);
    let kg = UniformGrid::symmetric(5.0, 11).unwrap();
    let s = scatter(&q0, &kg).unwrap();
    assert!(s.a1.iter().chain(&s.a2).all(|&v| v == c(1.0, 0.0)));
    assert!(s.b.iter().all(|&v| v == c(0.0, 0.0)));
    let r = check_properties(&s).unwrap();
    assert_eq!(r.max_identity_violation(), 0.0);

    let g = UniformGrid::symmetric(10.0, 101).unwrap();
    let q0 = InitialProfile::from_fn(g, Sigma::Minus, |_| c(0.0, 0.0)).unwrap();
    let s = scatter(&q0, &kg).unwrap();
    assert!(s.b.iter().all(|&v| v == c(0.0, 0.0)));
}

#[test]
fn box_at_half_pi() {
    let q0 = InitialProfile::boxed(c(1.0, 0.0), 1.0, Sigma::Plus).unwrap();
    let (a1, a2, b) = scatter_point(&q0, PI / 2.0).unwrap();
    assert!((a1 - c(1.0 + 4.0 / (PI * PI), 0.0)).norm() < 1e-8);
    assert!((a2 - c(1.0, 0.0)).norm() < 1e-8);
    assert!((b - c(0.0, -2.0 / PI)).norm() < 1e-8);
    let (_, _, b_minus) = scatter_point(&q0, -PI / 2.0).unwrap();
    let det = a1 * a2 + b * b_minus.conj();
    assert!((det - 1.0).norm() < 1e-8);
}

#[test]
fn box_matches_closed_form() {
    let kg = UniformGrid::symmetric(10.0, 401).unwrap();
    for (sigma, h) in [(Sigma::Plus, c(1.0, 0.0)), (Sigma::Minus, c(0.4, -0.9))] {
        let q0 = InitialProfile::boxed(h, 1.0, sigma).unwrap();
        let s = scatter(&q0, &kg).unwrap();
        let exact = box_spectral_data(h, 1.0, sigma, &kg);
        for i in 0..kg.len() {
            let e = (s.a1[i] - exact.a1[i]).norm().max((s.a2[i] - exact.a2[i]).norm()).max((s.b[i] - exact.b[i]).norm());
            assert!(e < 1e-6, "k = {}: {e}", kg.node(i));
        }
        let r = check_properties(&exact).unwrap();
        assert!(r.max_identity_violation() < 1e-14);
    }
}

#[test]
fn gaussian_properties() {
    let q0 = gaussian(c(0.3, 0.0), Sigma::Plus);
    let kg = UniformGrid::symmetric(12.0, 241).unwrap();
    let s = scatter(&q0, &kg).unwrap();
    let r = check_properties(&s).unwrap();
    assert!(r.max_identity_violation() < 1e-7, "{r:?}");
    // a_j - 1 decays only like 1/k, b like the Fourier transform of q0
    assert!(r.tail_a < 1e-2 && r.tail_b < 1e-7, "{r:?}");
    // Fourier oracle at leading order: b(k) ≈ -σ ∫ conj q0(-x) e^{-2ikx} dx = -0.3 √π e^{-k²}
    for (i, k) in kg.nodes().into_iter().enumerate() {
        let born = -0.3 * PI.sqrt() * (-k * k).exp();
        assert!((s.b[i].re - born).abs() < 0.05 * 0.3 * PI.sqrt(), "k = {k}");
    }
}

#[test]
fn asymmetric_grid_is_rejected() {
    let s = box_spectral_data(c(1.0, 0.0), 1.0, Sigma::Plus, &UniformGrid::new(-1.0, 2.0, 11).unwrap());
    assert_eq!(check_properties(&s), Err(ScatterError::AsymmetricGrid));
}

#[test]
fn small_l1_norm_keeps_a1_in_right_half_plane() {
    for amp in [c(0.2, 0.35), c(-0.4, 0.1)] {
        let q0 = gaussian(amp, Sigma::Minus);
        assert!(q0.l1_norm() < 0.817);
        let kg = UniformGrid::symmetric(12.0, 121).unwrap();
        let s = scatter(&q0, &kg).unwrap();
        assert!(s.a1.iter().all(|a| a.re > 0.0));
    }
}

#[test]
fn box_zero_counts() {
    let rect = Rectangle::upper(12.0);
    let small = InitialProfile::boxed(c(0.5, 0.0), 1.0, Sigma::Plus).unwrap();
    assert_eq!(count_zeros_a1(&small, &rect).unwrap(), 0);
    let large = InitialProfile::boxed(c(0.0, 1.5), 1.0, Sigma::Plus).unwrap();
    assert!(count_zeros_a1(&large, &rect).unwrap() >= 1);
    // σ = -1 with |H|L slightly above π/2: the real zero at k = π/(2L) present
    // for |H|L = π/2 moves into C+, together with its mirror image -conj(k)
    let defocusing = InitialProfile::boxed(c(PI / 2.0 + 0.05, 0.0), 1.0, Sigma::Minus).unwrap();
    assert_eq!(count_zeros_a1(&defocusing, &rect).unwrap(), 2);
    assert_eq!(count_zeros_a2(&defocusing, &rect).unwrap(), 0);
    let below = InitialProfile::boxed(c(PI / 2.0 - 0.05, 0.0), 1.0, Sigma::Minus).unwrap();
    assert_eq!(count_zeros_a1(&below, &rect).unwrap(), 0);
}

#[test]
fn defocusing_box_zero_location() {
    // root of the closed form located independently at 25 digits
    let k = c(1.585166960399620, 0.022273970573285);
    let h = c(PI / 2.0 + 0.05, 0.0);
    let (a1, _, _) = box_spectral_complex(h, 1.0, Sigma::Minus, k);
    assert!(a1.norm() < 1e-13);
    let q0 = InitialProfile::boxed(h, 1.0, Sigma::Minus).unwrap();
    assert!(a1_at(&q0, k).unwrap().norm() < 1e-9);
    assert!(a1_at(&q0, k.conj() * -1.0).unwrap().norm() < 1e-9);
}

#[test]
fn sech_well_zero_counts() {
    // for even real data the system reduces to the focusing Zakharov–Shabat
    // problem, where A sech x carries floor(A + 1/2) bound states
    let g = UniformGrid::symmetric(32.0, 2049).unwrap();
    let rect = Rectangle::upper(4.0);
    for (amp, want) in [(0.4, 0), (1.2, 1), (2.0, 2)] {
        let q0 = InitialProfile::from_fn(g, Sigma::Plus, |x| c(amp / x.cosh(), 0.0)).unwrap();
        assert_eq!(count_zeros_a1(&q0, &rect).unwrap(), want, "A = {amp}");
        assert_eq!(count_zeros_a2(&q0, &rect).unwrap(), want, "A = {amp}");
    }
}
