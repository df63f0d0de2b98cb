//! Browser bindings: root histogram against the limiting density, the
//! eight Lamé families, and complex root scatters.
//!
//! Build with `wasm-pack build crates/wasm --target web --out-dir www/pkg`.

use lame_spectral::complex::{scatter, ComplexCubic};
use lame_spectral::measures::{empirical, histogram, ks_distance};
use lame_spectral::{
    make_cubic, union_spectrum, van_vleck_roots, Cubic, DensityModel, ExponentTriple,
};
use num_complex::Complex64;
use wasm_bindgen::prelude::*;

fn cubic(e1: f64, e2: f64, e3: f64) -> Result<Cubic, String> {
    let mut r = [e1, e2, e3];
    r.sort_by(|a, b| b.total_cmp(a));
    make_cubic(r[0], r[1], r[2]).map_err(|e| e.to_string())
}

/// Roots, histogram and density curve for one degree.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Comparison {
    roots: Vec<f64>,
    bin_edges: Vec<f64>,
    heights: Vec<f64>,
    grid: Vec<f64>,
    density: Vec<f64>,
    ks: f64,
}

#[wasm_bindgen]
impl Comparison {
    #[wasm_bindgen(getter)]
    pub fn roots(&self) -> Vec<f64> {
        self.roots.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn bin_edges(&self) -> Vec<f64> {
        self.bin_edges.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn heights(&self) -> Vec<f64> {
        self.heights.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn grid(&self) -> Vec<f64> {
        self.grid.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn density(&self) -> Vec<f64> {
        self.density.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn ks(&self) -> f64 {
        self.ks
    }
}

pub fn build_comparison(
    roots: [f64; 3],
    alpha: [f64; 3],
    m: usize,
    bins: usize,
    grid: usize,
) -> Result<Comparison, String> {
    let c = cubic(roots[0], roots[1], roots[2])?;
    let a = ExponentTriple::new(alpha[0], alpha[1], alpha[2]).map_err(|e| e.to_string())?;
    let t = van_vleck_roots(&c, &a, m).map_err(|e| e.to_string())?;
    let em = empirical(&t).map_err(|e| e.to_string())?;
    let dm = DensityModel::new(c);
    let ks = ks_distance(&em, &dm).map_err(|e| e.to_string())?;
    let h = histogram(&em, bins, c.e3(), c.e1()).map_err(|e| e.to_string())?;
    let mut bin_edges: Vec<f64> = h.iter().map(|b| b.left).collect();
    bin_edges.push(c.e1());
    let grid = grid.max(2);
    let xs: Vec<f64> = (0..grid)
        .map(|k| c.e3() + c.span() * (k as f64 + 0.5) / grid as f64)
        .filter(|s| (s - c.e2()).abs() > 1e-9 * c.span())
        .collect();
    let density = xs
        .iter()
        .map(|&s| dm.density(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    Ok(Comparison {
        roots: t,
        heights: h.iter().map(|b| b.height).collect(),
        bin_edges,
        grid: xs,
        density,
        ks,
    })
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn compare(
    e1: f64,
    e2: f64,
    e3: f64,
    a1: f64,
    a2: f64,
    a3: f64,
    m: usize,
    bins: usize,
) -> Result<Comparison, JsError> {
    build_comparison([e1, e2, e3], [a1, a2, a3], m, bins, 400).map_err(|e| JsError::new(&e))
}

/// Union spectrum as `[t, family type, t, family type, ...]`, sorted by `t`.
pub fn family_points(roots: [f64; 3], n: usize) -> Result<Vec<f64>, String> {
    let c = cubic(roots[0], roots[1], roots[2])?;
    let mut pts: Vec<(f64, usize)> = union_spectrum(&c, n)
        .map_err(|e| e.to_string())?
        .iter()
        .flat_map(|f| f.roots_t.iter().map(move |&t| (t, f.kappa.lame_type())))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(pts.into_iter().flat_map(|(t, k)| [t, k as f64]).collect())
}

#[wasm_bindgen]
pub fn families(e1: f64, e2: f64, e3: f64, n: usize) -> Result<Vec<f64>, JsError> {
    family_points([e1, e2, e3], n).map_err(|e| JsError::new(&e))
}

/// Complex roots as `[re, im, re, im, ...]` followed by the thickness.
pub fn scatter_points(roots: [Complex64; 3], n: usize) -> Result<Vec<f64>, String> {
    let cc = ComplexCubic::new(roots[0], roots[1], roots[2]).map_err(|e| e.to_string())?;
    let sc = scatter(&cc, &ExponentTriple::LAME, n).map_err(|e| e.to_string())?;
    let mut out: Vec<f64> = sc.points.iter().flat_map(|z| [z.re, z.im]).collect();
    out.push(sc.thickness);
    Ok(out)
}

#[wasm_bindgen]
pub fn complex_roots(
    re1: f64,
    im1: f64,
    re2: f64,
    im2: f64,
    re3: f64,
    im3: f64,
    n: usize,
) -> Result<Vec<f64>, JsError> {
    let roots = [
        Complex64::new(re1, im1),
        Complex64::new(re2, im2),
        Complex64::new(re3, im3),
    ];
    scatter_points(roots, n).map_err(|e| JsError::new(&e))
}
