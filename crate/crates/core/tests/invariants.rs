use lame_spectral::complex::{aberth_roots, sp_coefficients, ComplexCubic, PolynomialCoefficients};
use lame_spectral::cubic::linear_coefficient;
use lame_spectral::density::{limit_band, omega};
use lame_spectral::measures::{empirical, ks_distance};
use lame_spectral::specfun::agm_with_iterations;
use lame_spectral::tridiag::{sp_eval, symmetric_eigenvalues};
use lame_spectral::{build_tridiag, eigenvalues, make_cubic, Cubic, DensityModel, ExponentTriple};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

prop_compose! {
    fn real_cubic()(e3 in -5.0..0.0f64, g1 in 0.1..4.0f64, g2 in 0.1..4.0f64) -> Cubic {
        make_cubic(e3 + g1 + g2, e3 + g1, e3).unwrap()
    }
}

prop_compose! {
    fn exponents()(a1 in 0.05..3.0f64, a2 in 0.05..3.0f64, a3 in 0.05..3.0f64) -> ExponentTriple {
        ExponentTriple::new(a1, a2, a3).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvalues_lie_in_support(c in real_cubic(), a in exponents(), m in 1usize..40) {
        let spec = build_tridiag(&c, &linear_coefficient(&c, &a), m).unwrap();
        let t = eigenvalues(&spec).unwrap();
        prop_assert_eq!(t.len(), m + 1);
        let tol = 1e-12 * c.span();
        for x in &t {
            let s = x + c.shift();
            prop_assert!(s > c.e3() - tol && s < c.e1() + tol);
        }
        prop_assert!(t.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn determinant_vanishes_at_eigenvalues(c in real_cubic(), a in exponents(), m in 1usize..30) {
        let spec = build_tridiag(&c, &linear_coefficient(&c, &a), m).unwrap();
        let t = eigenvalues(&spec).unwrap();
        let (lo, hi) = (c.lower(), c.upper());
        let grid_max = (0..=200)
            .map(|k| sp_eval(&spec, m + 1, lo + (hi - lo) * k as f64 / 200.0).unwrap().abs())
            .fold(0.0, f64::max);
        for x in t {
            prop_assert!(sp_eval(&spec, m + 1, x).unwrap().abs() <= 1e-9 * grid_max);
        }
    }

    #[test]
    fn principal_minors_interlace(c in real_cubic(), a in exponents(), m in 2usize..25) {
        let spec = build_tridiag(&c, &linear_coefficient(&c, &a), m).unwrap();
        let off: Vec<f64> = spec.psi.iter().map(|p| p.sqrt()).collect();
        for i in 1..=m {
            let small = symmetric_eigenvalues(&spec.xi[..i], &off[..i - 1]);
            let big = symmetric_eigenvalues(&spec.xi[..i + 1], &off[..i]);
            let tol = 1e-12 * spec.gershgorin_radius();
            for k in 0..i {
                prop_assert!(big[k] <= small[k] + tol && small[k] <= big[k + 1] + tol);
            }
        }
    }

    #[test]
    fn limit_band_inside_support(c in real_cubic(), tau in 0.0..1.0f64) {
        let (lo, hi) = limit_band(tau, &c);
        let tol = 1e-12 * c.span();
        prop_assert!(lo >= c.lower() - tol && hi <= c.upper() + tol);
    }

    #[test]
    fn omega_bounded(x1 in 0.01..10.0f64, x2 in -10.0..-0.01f64, u in 0.0..1.0f64) {
        let x3 = x2 + u * (x1 - x2);
        let om = omega(x1, x2, x3).unwrap();
        prop_assert!((0.0..=1.0 + 1e-15).contains(&om));
    }

    #[test]
    fn ks_is_affine_invariant(c in real_cubic(), shift in -3.0..3.0f64, scale in 0.2..5.0f64) {
        let spec = build_tridiag(&c, &linear_coefficient(&c, &ExponentTriple::LAME), 12).unwrap();
        let t: Vec<f64> = eigenvalues(&spec).unwrap().iter().map(|x| x + c.shift()).collect();
        let d0 = ks_distance(&empirical(&t).unwrap(), &DensityModel::new(c)).unwrap();
        let map = |x: f64| scale * x + shift;
        let c2 = make_cubic(map(c.e1()), map(c.e2()), map(c.e3())).unwrap();
        let t2: Vec<f64> = t.iter().map(|&x| map(x)).collect();
        let d1 = ks_distance(&empirical(&t2).unwrap(), &DensityModel::new(c2)).unwrap();
        prop_assert!((d0 - d1).abs() < 1e-9);
    }

    #[test]
    fn recurrence_keeps_polynomial_monic(re in -2.0..2.0f64, im in 0.2..2.0f64, m in 1usize..80) {
        let cc = ComplexCubic::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(re, im),
        ).unwrap();
        let p = sp_coefficients(&cc, &ExponentTriple::LAME, m).unwrap();
        prop_assert_eq!(p.degree(), m + 1);
        prop_assert_eq!(*p.coeffs.last().unwrap(), Complex64::new(1.0, 0.0));
        prop_assert!(p.coeffs.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
    }
}

#[test]
fn agm_iteration_count_is_small() {
    let mut worst = 0;
    for i in 0..=24 {
        for j in 0..=24 {
            let a = 10f64.powf(-6.0 + 0.5 * i as f64);
            let b = 10f64.powf(-6.0 + 0.5 * j as f64);
            worst = worst.max(agm_with_iterations(a, b).unwrap().1);
        }
    }
    assert!(worst <= 8, "{worst} iterations");
}

#[test]
fn aberth_recovers_known_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let roots: Vec<Complex64> = (0..10)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let p = PolynomialCoefficients::from_roots(&roots);
        let found = aberth_roots(&p).unwrap();
        for r in &roots {
            let nearest = found
                .iter()
                .map(|z| (z - r).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(nearest <= 1e-8, "{r} missed by {nearest:.2e}");
        }
    }
}

#[test]
fn large_degree_spectrum_is_finite() {
    let c = make_cubic(1.0, 0.0, -1.0).unwrap();
    let spec = build_tridiag(&c, &linear_coefficient(&c, &ExponentTriple::LAME), 1000).unwrap();
    let t = eigenvalues(&spec).unwrap();
    assert_eq!(t.len(), 1001);
    assert!(t.iter().all(|x| x.abs() < 1.0));
}
