//! Special functions against reference values (computed at 30 significant
//! digits and rounded), classical identities and an independent Stirling
//! oracle for Gamma.

use nnls_core::specfun::{bessel_i0, gamma, pcf_d, pcf_d_with_derivative, rgamma, SpecFunError};
use nnls_core::C64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

/// Stirling series with upward shift: Γ(z) = Γ(z + n) / (z (z+1) ... (z+n-1)).
fn gamma_stirling(z: C64) -> C64 {
    let n = 40;
    let mut w = z;
    let mut prod = c(1.0, 0.0);
    for _ in 0..n {
        prod *= w;
        w += 1.0;
    }
    let b = [1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0];
    let mut corr = c(0.0, 0.0);
    let mut wp = w;
    let w2 = w * w;
    for coef in b {
        corr += coef / wp;
        wp *= w2;
    }
    let ln = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + corr;
    ln.exp() / prod
}

#[test]
fn gamma_reference_values() {
    let cases = [
        (c(3.7, 2.1), c(-1.8598252959665196, 1.1623401526968618)),
        (c(-4.3, 0.6), c(-0.00052813676142125188, -0.025810126507404451)),
        (c(0.2, -9.5), c(1.7200185888002502e-7, 3.8504900686736327e-7)),
        (c(-9.7, -9.9), c(3.5993024461454777e-19, 7.5302636201050152e-18)),
        (c(9.9, 9.9), c(137.83068106537567, -3147.5094521402639)),
        (c(0.001, 0.001), c(499.42377338913425, -499.99901275699936)),
    ];
    for (z, want) in cases {
        let got = gamma(z).unwrap();
        assert!(rel(got, want) < 1e-12, "Γ({z}) = {got}, want {want}, rel {}", rel(got, want));
    }
}

#[test]
fn gamma_product_identities() {
    for a in [0.5, 1.0, 2.0, 3.7] {
        let p = gamma(c(0.5, -a / 2.0)).unwrap() * gamma(c(0.5, a / 2.0)).unwrap();
        let want = PI / (PI * a / 2.0).cosh();
        assert!((p - want).norm() / want < 1e-10, "a = {a}");
        let q = gamma(c(0.0, -a / 2.0)).unwrap() * gamma(c(0.0, a / 2.0)).unwrap();
        let want = 2.0 * PI / (a * (PI * a / 2.0).sinh());
        assert!((q - want).norm() / want < 1e-10, "a = {a}");
    }
    let p = gamma(c(0.5, -0.5)).unwrap() * gamma(c(0.5, 0.5)).unwrap();
    assert!((p.re - 1.2520403312521476).abs() < 1e-12);
    let q = gamma(c(0.0, -1.0)).unwrap() * gamma(c(0.0, 1.0)).unwrap();
    assert!((q.re - 0.27202905498213316).abs() < 1e-12);
}

#[test]
fn gamma_pole_error() {
    assert!(matches!(gamma(c(-5.0, 0.0)), Err(SpecFunError::Pole(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn gamma_recurrence(x in -10.0f64..10.0, y in -10.0f64..10.0) {
        let z = c(x, y);
        prop_assume!(z.norm() > 1e-3 && (z + 1.0).norm() > 1e-3);
        let lhs = gamma(z + 1.0).unwrap();
        let rhs = z * gamma(z).unwrap();
        prop_assert!(rel(lhs, rhs) < 1e-10);
    }

    #[test]
    fn gamma_matches_stirling_oracle(x in 0.5f64..10.0, y in -10.0f64..10.0) {
        let z = c(x, y);
        prop_assert!(rel(gamma(z).unwrap(), gamma_stirling(z)) < 1e-12);
    }

    #[test]
    fn gamma_reflection(x in -10.0f64..10.0, y in 0.05f64..10.0) {
        let z = c(x, y);
        let lhs = gamma(z).unwrap() * gamma(1.0 - z).unwrap();
        let s = (z * PI).sin();
        let rhs = PI / s;
        prop_assert!(rel(lhs, rhs) < 1e-11);
        prop_assert!(rel(rgamma(z), 1.0 / gamma(z).unwrap()) < 1e-12);
    }
}

#[test]
fn pcf_reference_values() {
    let i = C64::i();
    let cases = [
        (c(0.0, 0.0), c(1.0, 0.0), c(0.77880078307140487, 0.0)),
        (i, c(0.0, 0.0), c(1.4564202284159151, -0.62291138769410096)),
        (i, C64::from_polar(5.0, PI / 4.0), c(-0.024474746637604795, 0.46544241981951368)),
        (c(0.3, 1.2), c(2.0, 1.0), c(0.40092720257942653, 0.018826967233787365)),
        (c(-2.5, 0.7), c(7.0, -3.0), c(3.2977140741636892e-7, 1.1829525734097464e-7)),
        (c(4.0, -3.0), c(-6.0, 4.0), c(-22178.97055913971, -17980.696812983072)),
        (c(1.5, 2.0), c(12.0, 12.0), c(-9.9629849496304874, -10.440998659633629)),
        (c(-3.0, -1.0), c(0.0, -20.0), c(-1.0916579568189686e38, 6.998088292457716e38)),
        (c(0.5, 0.5), c(25.0, 3.0), c(-1.8421399850081094e-67, 5.9351711445932687e-67)),
        (c(2.0, 0.0), c(-5.0, -0.1), c(0.045462996936545164, -0.0096112289653261956)),
        (c(0.0, 0.4), c(-20.0, 0.5), c(-1.3610922831203068e41, -1.416884405917022e42)),
    ];
    for (a, z, want) in cases {
        let got = pcf_d(a, z).unwrap();
        assert!(rel(got, want) < 1e-10, "D_{a}({z}) = {got}, want {want}, rel {}", rel(got, want));
    }
}

#[test]
fn pcf_origin_value() {
    let a = C64::i();
    let want = c(2.0, 0.0).powc(a / 2.0) * PI.sqrt() / gamma((1.0 - a) / 2.0).unwrap();
    assert!(rel(pcf_d(a, c(0.0, 0.0)).unwrap(), want) < 1e-13);
}

#[test]
fn pcf_two_term_asymptotic() {
    let a = C64::i();
    let z = C64::from_polar(5.0, PI / 4.0);
    let lead = z.powc(a) * (-z * z / 4.0).exp();
    let approx = lead * (1.0 - a * (a - 1.0) / (2.0 * z * z));
    // the first omitted term is a(a-1)(a-2)(a-3)/(8 z^4), about 2e-3 at |z| = 5
    let omitted = (a * (a - 1.0) * (a - 2.0) * (a - 3.0) / (8.0 * z.powi(4))).norm();
    let got = pcf_d(a, z).unwrap();
    assert!(rel(got, approx) < 1.2 * omitted);
    assert!(rel(got, approx) > 0.5 * omitted);
    let z = C64::from_polar(25.0, PI / 4.0);
    let approx = z.powc(a) * (-z * z / 4.0).exp() * (1.0 - a * (a - 1.0) / (2.0 * z * z));
    assert!(rel(pcf_d(a, z).unwrap(), approx) < 1e-5);
}

#[test]
fn pcf_gaussian_on_disc() {
    for j in 0..200 {
        let z = C64::from_polar(5.0 * ((j % 17) as f64 + 0.5) / 17.0, 0.37 * j as f64);
        let got = pcf_d(c(0.0, 0.0), z).unwrap();
        assert!(rel(got, (-z * z / 4.0).exp()) < 1e-12, "z = {z}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn pcf_weber_equation(ar in -3.0f64..3.0, ai in -3.0f64..3.0, r in 0.2f64..20.0, th in -PI..PI) {
        let a = c(ar, ai);
        let z = C64::from_polar(r, th);
        // fourth-order central difference of the analytic first derivative
        let h = 1e-2 / (1.0 + r / 4.0);
        let f = |s: f64| pcf_d_with_derivative(a, z + s * h).unwrap().1;
        let d2 = (-f(2.0) + 8.0 * f(1.0) - 8.0 * f(-1.0) + f(-2.0)) / (12.0 * h);
        let y = pcf_d(a, z).unwrap();
        let rhs = (z * z / 4.0 - a - 0.5) * y;
        let scale = y.norm() * (1.0 + (z * z / 4.0 - a - 0.5).norm());
        prop_assert!((d2 - rhs).norm() <= 1e-6 * scale, "residual {}", (d2 - rhs).norm() / scale);
    }

    #[test]
    fn pcf_derivative_relations(ar in -2.5f64..2.5, ai in -2.5f64..2.5, r in 0.1f64..25.0, th in -PI..PI) {
        let a = c(ar, ai);
        let z = C64::from_polar(r, th);
        let (d, dd) = pcf_d_with_derivative(a, z).unwrap();
        let up = pcf_d(a + 1.0, z).unwrap();
        let down = pcf_d(a - 1.0, z).unwrap();
        let scale = dd.norm() + (z * d).norm() + up.norm();
        prop_assert!((dd - (z / 2.0 * d - up)).norm() <= 1e-9 * scale);
        let scale = dd.norm() + (z * d).norm() + (a * down).norm();
        prop_assert!((dd - (-z / 2.0 * d + a * down)).norm() <= 1e-9 * scale);
    }
}

#[test]
fn bessel_values() {
    assert_eq!(bessel_i0(0.0).unwrap(), 1.0);
    let cases = [(1.634, 1.7874893434792752), (2.0, 2.2795853023360673), (17.3, 3150766.5947674074), (50.0, 2.9325537838493363e20)];
    for (x, want) in cases {
        let got = bessel_i0(x).unwrap();
        assert!((got - want).abs() / want < 1e-12, "I0({x}) = {got}");
    }
    assert!(bessel_i0(1.634).unwrap() < 2.0);
    assert!(matches!(bessel_i0(-0.1), Err(SpecFunError::Domain(_))));
}
