use lame_spectral_wasm::{build_comparison, family_points, scatter_points};
use num_complex::Complex64;

#[test]
fn histogram_matches_density_mass() {
    let c = build_comparison([2.0, 0.0, -1.0], [0.5, 0.5, 0.5], 300, 30, 300).unwrap();
    let width = (c.bin_edges()[30] - c.bin_edges()[0]) / 30.0;
    let mass: f64 = c.heights().iter().map(|h| h * width).sum();
    assert!((mass - 1.0).abs() < 1e-12);
    assert!(c.density().iter().all(|&r| r > 0.0));
    assert!(c.ks() < 0.02);
}

#[test]
fn families_cover_union() {
    for n in 1..6 {
        let p = family_points([1.0, 0.0, -1.0], n).unwrap();
        assert_eq!(p.len() / 2, 2 * n + 1);
        let t: Vec<f64> = p.chunks(2).map(|w| w[0]).collect();
        assert!(t.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn real_roots_through_complex_path() {
    let z = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(-1.0, 0.0),
    ];
    let out = scatter_points(z, 10).unwrap();
    let (points, thickness) = out.split_at(out.len() - 1);
    assert!(points.chunks(2).all(|p| p[1].abs() < 1e-8));
    assert!(thickness[0] < 1e-8);
}
