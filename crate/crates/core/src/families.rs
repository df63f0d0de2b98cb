//! The eight families of Lamé solutions `prod (z - e_i)^{k_i} S(z)` of
//!
//! ```text
//! S'' + 1/2 sum 1/(z - e_i) S' - (n(n+1) z + E) / (4 prod (z - e_i)) S = 0
//! ```
//!
//! Substituting the square-root prefactor leaves a generalized Lamé
//! equation for the polynomial part with exponents `1/2 + 2 k_i` and an
//! extra linear term `C(z) / prod (z - e_i)`, where
//! `C(z) = sum_{i<j} (2 k_i k_j + (k_i + k_j)/2) (z - e_l)` and `l` is the
//! remaining index. The Van Vleck roots of that equation, corrected by `C`,
//! give the energies `E`.

use crate::cubic::{effective_exponents, linear_coefficient, Cubic, ExponentTriple, FamilyKappa};
use crate::error::{Error, Result};
use crate::tridiag::{build_tridiag, eigenvalues, null_vector, SolutionVector, TridiagSpec};

/// Sign in `E = ENERGY_SIGN * n (n + 1) t`, fixed by the ODE residual check.
pub const ENERGY_SIGN: f64 = -1.0;

/// Residual ceiling for reconstructed solutions with `n <= 12`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

const SAMPLE_POINTS: usize = 20;

/// Degree of the polynomial part for elliptic degree `n` and family `k`.
pub fn family_degree(n: usize, k: &FamilyKappa) -> Result<usize> {
    let twice = n as i64 - k.half_count() as i64;
    if twice < 0 || twice % 2 != 0 {
        return Err(Error::InadmissibleParity {
            n,
            kappa_sum: k.sum(),
        });
    }
    Ok((twice / 2) as usize)
}

pub fn energy_from_t(n: usize, t: f64) -> f64 {
    ENERGY_SIGN * (n * (n + 1)) as f64 * t
}

/// The linear correction `C(z)` as `(slope, value at z = 0)`.
pub fn kappa_correction(c: &Cubic, k: &FamilyKappa) -> (f64, f64) {
    let kv = k.values();
    let e = c.roots();
    let mut slope = 0.0;
    let mut at_zero = 0.0;
    for (i, j, l) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        let weight = 2.0 * kv[i] * kv[j] + 0.5 * (kv[i] + kv[j]);
        slope += weight;
        at_zero -= weight * e[l];
    }
    (slope, at_zero)
}

/// Spectrum of one family at elliptic degree `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpectrum {
    pub n: usize,
    pub kappa: FamilyKappa,
    /// Degree of the polynomial part.
    pub m: usize,
    /// Van Vleck roots of the reduced equation (eigenvalues of the
    /// tridiagonal matrix, reporting frame). Empty when `m = 0`.
    pub reduced_roots: Vec<f64>,
    /// Roots `t = -E / (n (n + 1))` of the Lamé `V`, ascending. Empty for `n = 0`.
    pub roots_t: Vec<f64>,
    /// Energies aligned with `roots_t` (one entry even when `n = 0`).
    pub roots_e: Vec<f64>,
    tridiag: Option<TridiagSpec>,
}

impl FamilySpectrum {
    pub fn count(&self) -> usize {
        self.roots_e.len()
    }

    pub fn tridiag(&self) -> Option<&TridiagSpec> {
        self.tridiag.as_ref()
    }
}

pub fn family_spectrum(c: &Cubic, n: usize, k: &FamilyKappa) -> Result<FamilySpectrum> {
    let m = family_degree(n, k)?;
    let (_, c0) = kappa_correction(c, k);
    let (reduced_roots, roots_e, tridiag) = if m == 0 {
        // S = const forces V = -C
        (Vec::new(), vec![4.0 * c0], None)
    } else {
        let exps = effective_exponents(&ExponentTriple::LAME, k);
        let spec = build_tridiag(c, &linear_coefficient(c, &exps), m)?;
        let roots: Vec<f64> = eigenvalues(&spec)?
            .into_iter()
            .map(|t| t + c.shift())
            .collect();
        // V(z) = -theta (z - t) - C(z), so E = -4 V(0) = -4 (theta t - C(0))
        let energies = roots.iter().map(|t| -4.0 * (spec.theta * t - c0)).collect();
        (roots, energies, Some(spec))
    };
    let roots_t = if n == 0 {
        Vec::new()
    } else {
        roots_e
            .iter()
            .map(|e| e / (ENERGY_SIGN * (n * (n + 1)) as f64))
            .collect()
    };
    Ok(FamilySpectrum {
        n,
        kappa: *k,
        m,
        reduced_roots,
        roots_t,
        roots_e,
        tridiag,
    })
}

/// The admissible families for `n`'s parity; inadmissible ones are skipped.
pub fn union_spectrum(c: &Cubic, n: usize) -> Result<Vec<FamilySpectrum>> {
    FamilyKappa::for_parity(n)
        .iter()
        .filter(|k| family_degree(n, k).is_ok())
        .map(|k| family_spectrum(c, n, k))
        .collect()
}

/// All roots `t` of the full spectral polynomial, ascending.
pub fn union_roots(c: &Cubic, n: usize) -> Result<Vec<f64>> {
    let mut all: Vec<f64> = union_spectrum(c, n)?
        .into_iter()
        .flat_map(|f| f.roots_t)
        .collect();
    all.sort_by(f64::total_cmp);
    Ok(all)
}

/// Polynomial part of the solution attached to root `root_index`.
pub fn polynomial_part(
    fs: &FamilySpectrum,
    c: &Cubic,
    root_index: usize,
) -> Result<SolutionVector> {
    let max = fs.count().saturating_sub(1);
    if root_index > max {
        return Err(Error::IndexOutOfRange {
            index: root_index,
            max,
        });
    }
    match &fs.tridiag {
        None => Ok(SolutionVector { coeffs: vec![1.0] }),
        Some(spec) => null_vector(spec, fs.reduced_roots[root_index] - c.shift()),
    }
}

/// Reconstruct the Lamé solution for one root and return its largest
/// relative ODE residual over sample points.
pub fn verify_lame_residual(
    c: &Cubic,
    n: usize,
    k: &FamilyKappa,
    root_index: usize,
) -> Result<f64> {
    let fs = family_spectrum(c, n, k)?;
    let poly = polynomial_part(&fs, c, root_index)?;
    Ok(lame_residual(c, n, k, &poly, fs.roots_e[root_index]))
}

/// Relative residual of `prod (z - e_i)^{k_i} * poly(z - e2)` in the Lamé
/// operator with energy `energy`, maximized over sample points.
///
/// Every term is divided by the square-root prefactor, so the check runs
/// in real arithmetic on both sides of each root.
pub fn lame_residual(
    c: &Cubic,
    n: usize,
    k: &FamilyKappa,
    poly: &SolutionVector,
    energy: f64,
) -> f64 {
    let e = c.roots();
    let kv = k.values();
    let nn = (n * (n + 1)) as f64;
    sample_points(c)
        .into_iter()
        .map(|z| {
            let (p, d1, d2) = poly.eval_with_derivatives(z - c.shift());
            let inv: Vec<f64> = e.iter().map(|ei| 1.0 / (z - ei)).collect();
            let log_d: f64 = (0..3).map(|i| kv[i] * inv[i]).sum();
            let log_d2: f64 = (0..3).map(|i| -kv[i] * inv[i] * inv[i]).sum();
            let drift: f64 = 0.5 * inv.iter().sum::<f64>();
            let second = d2 + 2.0 * log_d * d1 + (log_d2 + log_d * log_d) * p;
            let first = drift * (d1 + log_d * p);
            let potential = -(nn * z + energy) / (4.0 * c.eval(z)) * p;
            let scale = second.abs() + first.abs() + potential.abs();
            let total = second + first + potential;
            if scale == 0.0 {
                0.0
            } else {
                (total / scale).abs()
            }
        })
        .fold(0.0, f64::max)
}

fn sample_points(c: &Cubic) -> Vec<f64> {
    let span = c.span();
    let step = 2.0 * span / SAMPLE_POINTS as f64;
    (0..SAMPLE_POINTS)
        .map(|k| {
            let mut z = c.e3() - 0.5 * span + (k as f64 + 0.5) * step;
            if c.roots().iter().any(|e| (z - e).abs() < 1e-3 * span) {
                z += 0.013 * span;
            }
            z
        })
        .collect()
}
