//! AGM-based complete elliptic integrals, `F(1/2, 1/2, 1; z)`, and
//! quadrature for integrands with inverse-square-root endpoint behaviour.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

const AGM_MAX_ITER: usize = 64;

/// Arithmetic-geometric mean of two positive numbers.
pub fn agm(a: f64, b: f64) -> Result<f64> {
    agm_with_iterations(a, b).map(|(m, _)| m)
}

/// AGM together with the number of iterations used.
pub fn agm_with_iterations(a: f64, b: f64) -> Result<(f64, usize)> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::NonPositiveInput(a, b));
    }
    let (mut a, mut b) = (a, b);
    for iter in 0..AGM_MAX_ITER {
        if (a - b).abs() <= 2.0 * f64::EPSILON * a.max(b) {
            return Ok((0.5 * (a + b), iter));
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    Ok((0.5 * (a + b), AGM_MAX_ITER))
}

/// Complete elliptic integral of the first kind with modulus `zeta`.
pub fn ellip_k(zeta: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&zeta) {
        return Err(Error::ModulusOutOfRange(zeta));
    }
    let comp = ((1.0 - zeta) * (1.0 + zeta)).sqrt();
    Ok(FRAC_PI_2 / agm(1.0, comp)?)
}

/// `K(i kappa)`, which is real: the complementary modulus is `sqrt(1 + kappa^2)`.
pub fn ellip_k_imag(kappa: f64) -> Result<f64> {
    if !(kappa >= 0.0) {
        return Err(Error::NegativeInput(kappa));
    }
    Ok(FRAC_PI_2 / agm(1.0, kappa.hypot(1.0))?)
}

/// `F(1/2, 1/2, 1; z) = 1 / agm(1, sqrt(1 - z))` for real `z < 1`.
pub fn f_half(z: f64) -> Result<f64> {
    if !(z < 1.0) {
        return Err(Error::ArgumentAtOrAboveOne(z));
    }
    Ok(1.0 / agm(1.0, (1.0 - z).sqrt())?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureMethod {
    TanhSinh,
    GaussChebyshev,
}

/// Quadrature settings.
///
/// For tanh-sinh `level` is the maximum refinement level (step `2^-level`);
/// for Gauss-Chebyshev it is the starting node count, doubled until two
/// successive estimates agree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub method: QuadratureMethod,
    pub level: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

pub const MAX_TANH_SINH_LEVEL: usize = 12;
const MIN_NODES: usize = 15;
const MAX_CHEBYSHEV_NODES: usize = 1 << 20;
// nodes beyond |t| = 6.1 sit closer than 1e-300 to the endpoint
const TANH_SINH_T_MAX: f64 = 6.1;

impl QuadratureSpec {
    pub fn tanh_sinh(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            method: QuadratureMethod::TanhSinh,
            level: MAX_TANH_SINH_LEVEL,
            abs_tol,
            rel_tol,
        }
    }

    pub fn gauss_chebyshev(nodes: usize, abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            method: QuadratureMethod::GaussChebyshev,
            level: nodes,
            abs_tol,
            rel_tol,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::BadQuadratureSpec(format!(
                "tolerances must be positive, got abs {} rel {}",
                self.abs_tol, self.rel_tol
            )));
        }
        match self.method {
            QuadratureMethod::TanhSinh if self.level == 0 || self.level > MAX_TANH_SINH_LEVEL => {
                Err(Error::BadQuadratureSpec(format!(
                    "tanh-sinh level must lie in 1..={MAX_TANH_SINH_LEVEL}, got {}",
                    self.level
                )))
            }
            QuadratureMethod::GaussChebyshev if self.level < MIN_NODES => {
                Err(Error::BadQuadratureSpec(format!(
                    "need at least {MIN_NODES} nodes, got {}",
                    self.level
                )))
            }
            _ => Ok(()),
        }
    }

    fn accepts(&self, estimate: f64, error: f64) -> bool {
        error <= self.abs_tol.max(self.rel_tol * estimate.abs())
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self::tanh_sinh(1e-15, 1e-13)
    }
}

/// Quadrature estimate with its error indicator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// `int_lo^hi f(x) dx` for `f` with at worst inverse-square-root endpoint
/// singularities.
pub fn quad_singular<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, q: &QuadratureSpec) -> Result<f64> {
    quad_singular_split(|x, _, _| f(x), lo, hi, q).map(|r| r.value)
}

/// Like [`quad_singular`], but the integrand also receives the exact
/// distances `x - lo` and `hi - x`, which avoids cancellation in factors
/// such as `(hi - x)^{-1/2}` next to the endpoints.
pub fn quad_singular_split<F: Fn(f64, f64, f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    q: &QuadratureSpec,
) -> Result<QuadResult> {
    q.validate()?;
    if lo == hi {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    if hi < lo {
        let flipped = |x: f64, a: f64, b: f64| f(x, b, a);
        let r = match q.method {
            QuadratureMethod::TanhSinh => tanh_sinh(&flipped, hi, lo, q),
            QuadratureMethod::GaussChebyshev => gauss_chebyshev(&flipped, hi, lo, q),
        }?;
        return Ok(QuadResult {
            value: -r.value,
            ..r
        });
    }
    match q.method {
        QuadratureMethod::TanhSinh => tanh_sinh(&f, lo, hi, q),
        QuadratureMethod::GaussChebyshev => gauss_chebyshev(&f, lo, hi, q),
    }
}

fn tanh_sinh<F: Fn(f64, f64, f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    q: &QuadratureSpec,
) -> Result<QuadResult> {
    let half = 0.5 * (hi - lo);
    let mut evaluations = 0;
    // contribution of the node at parameter t
    let node = |t: f64, evals: &mut usize| -> f64 {
        let u = FRAC_PI_2 * t.sinh();
        let e = (2.0 * u).exp();
        // 1 - tanh(u) and 1 + tanh(u) without cancellation
        let to_hi = half * 2.0 / (1.0 + e);
        let from_lo = half * 2.0 * e / (1.0 + e);
        if to_hi <= 0.0 || from_lo <= 0.0 || !e.is_finite() {
            return 0.0;
        }
        let x = if from_lo < to_hi {
            lo + from_lo
        } else {
            hi - to_hi
        };
        let ch = u.cosh();
        let weight = FRAC_PI_2 * t.cosh() / (ch * ch) * half;
        *evals += 1;
        let v = f(x, from_lo, to_hi);
        if v.is_finite() {
            v * weight
        } else {
            0.0
        }
    };

    let mut h = 1.0;
    let mut sum = node(0.0, &mut evaluations);
    let mut k = 1;
    while k as f64 * h <= TANH_SINH_T_MAX {
        let t = k as f64 * h;
        sum += node(t, &mut evaluations) + node(-t, &mut evaluations);
        k += 1;
    }
    let mut estimate = sum * h;
    let mut error = f64::INFINITY;
    for _level in 1..=q.level {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= TANH_SINH_T_MAX {
            let t = k as f64 * h;
            sum += node(t, &mut evaluations) + node(-t, &mut evaluations);
            k += 2;
        }
        let next = sum * h;
        error = (next - estimate).abs();
        estimate = next;
        if q.accepts(estimate, error) {
            return Ok(QuadResult {
                value: estimate,
                error,
                evaluations,
            });
        }
    }
    Err(Error::QuadratureNotConverged { estimate, error })
}

/// Gauss-Chebyshev of the first kind applied to `f(x) sqrt((x-lo)(hi-x))`.
fn gauss_chebyshev<F: Fn(f64, f64, f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    q: &QuadratureSpec,
) -> Result<QuadResult> {
    let half = 0.5 * (hi - lo);
    let mut evaluations = 0;
    let mut rule = |n: usize| -> f64 {
        let mut sum = 0.0;
        for k in 0..n {
            let theta = PI * (2 * k + 1) as f64 / (2 * n) as f64;
            // 1 + cos(theta) = 2 cos^2(theta/2), 1 - cos(theta) = 2 sin^2(theta/2)
            let from_lo = 2.0 * half * (0.5 * theta).cos().powi(2);
            let to_hi = 2.0 * half * (0.5 * theta).sin().powi(2);
            let x = if from_lo < to_hi {
                lo + from_lo
            } else {
                hi - to_hi
            };
            sum += f(x, from_lo, to_hi) * (from_lo * to_hi).sqrt();
            evaluations += 1;
        }
        sum * PI / n as f64
    };
    let mut n = q.level;
    let mut estimate = rule(n);
    loop {
        // tripling keeps the node sets nested
        n *= 3;
        let next = rule(n);
        let error = (next - estimate).abs();
        estimate = next;
        if q.accepts(estimate, error) {
            return Ok(QuadResult {
                value: estimate,
                error,
                evaluations,
            });
        }
        if n > MAX_CHEBYSHEV_NODES {
            return Err(Error::QuadratureNotConverged { estimate, error });
        }
    }
}

/// Euler integral for `F(1/2, 1/2, 1; z)`:
/// `(1/pi) int_0^1 t^{-1/2} (1-t)^{-1/2} (1 - t z)^{-1/2} dt`.
pub fn f_half_quadrature_oracle(z: f64, q: &QuadratureSpec) -> Result<f64> {
    if !(z < 1.0) {
        return Err(Error::ArgumentAtOrAboveOne(z));
    }
    let r = quad_singular_split(
        |t, from_lo, to_hi| {
            // 1 - t z written as (1 - z) + z (1 - t) when z > 0
            let lin = if z > 0.0 {
                (1.0 - z) + z * to_hi
            } else {
                1.0 - t * z
            };
            1.0 / (from_lo * to_hi * lin).sqrt()
        },
        0.0,
        1.0,
        q,
    )?;
    Ok(r.value / PI)
}

/// Direct quadrature of `int_0^1 dt / sqrt((1 - t^2)(1 - m t^2))` with
/// `m = zeta^2`, allowed to be negative for imaginary moduli.
pub fn ellip_k_quadrature_oracle(m: f64, q: &QuadratureSpec) -> Result<f64> {
    if !(m < 1.0) {
        return Err(Error::ModulusOutOfRange(m));
    }
    quad_singular_split(
        |t, _, to_hi| {
            let lin = if m > 0.0 {
                (1.0 - m) + m * to_hi * (1.0 + t)
            } else {
                1.0 - m * t * t
            };
            1.0 / (to_hi * (1.0 + t) * lin).sqrt()
        },
        0.0,
        1.0,
        q,
    )
    .map(|r| r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tight() -> QuadratureSpec {
        QuadratureSpec::tanh_sinh(1e-16, 1e-14)
    }

    #[test]
    fn agm_basics() {
        assert_eq!(agm(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(agm(2.0, 0.5).unwrap(), agm(0.5, 2.0).unwrap());
        assert!(matches!(agm(0.0, 1.0), Err(Error::NonPositiveInput(..))));
        assert!(agm(-1.0, 1.0).is_err());
    }

    #[test]
    fn agm_iterations_bounded() {
        for &a in &[1e-6, 1e-3, 1.0, 1e3, 1e6] {
            for &b in &[1e-6, 0.5, 1.0, 1e6] {
                let (_, iters) = agm_with_iterations(a, b).unwrap();
                assert!(iters <= 8, "agm({a}, {b}) took {iters}");
            }
        }
    }

    #[test]
    fn k_reference_values() {
        assert_eq!(ellip_k(0.0).unwrap(), FRAC_PI_2);
        let k = ellip_k(0.5f64.sqrt()).unwrap();
        assert_relative_eq!(k, 1.854_074_677_301_372, max_relative = 1e-15);
        let oracle = ellip_k_quadrature_oracle(0.5, &tight()).unwrap();
        assert_relative_eq!(k, oracle, max_relative = 1e-13);
        assert!(ellip_k(1.0 - 1e-12).unwrap() > 14.0);
        assert!(matches!(ellip_k(1.0), Err(Error::ModulusOutOfRange(_))));
        assert!(ellip_k(-0.1).is_err());
    }

    #[test]
    fn k_imaginary_modulus() {
        assert_eq!(ellip_k_imag(0.0).unwrap(), FRAC_PI_2);
        let k1 = ellip_k_imag(1.0).unwrap();
        let via_real = ellip_k(0.5f64.sqrt()).unwrap() / 2f64.sqrt();
        assert_relative_eq!(k1, via_real, max_relative = 1e-15);
        assert_relative_eq!(k1, 1.311_028_777_146_06, max_relative = 1e-13);
        let mut prev = f64::INFINITY;
        for kappa in [0.0, 1.0, 2.0] {
            let k = ellip_k_imag(kappa).unwrap();
            let oracle = ellip_k_quadrature_oracle(-kappa * kappa, &tight()).unwrap();
            assert_relative_eq!(k, oracle, max_relative = 1e-12);
            assert!(k < prev);
            prev = k;
        }
        assert!(matches!(ellip_k_imag(-1.0), Err(Error::NegativeInput(_))));
    }

    #[test]
    fn f_half_values() {
        assert_eq!(f_half(0.0).unwrap(), 1.0);
        let expected = 2.0 / PI * ellip_k(0.5f64.sqrt()).unwrap();
        assert_relative_eq!(f_half(0.5).unwrap(), expected, max_relative = 1e-15);
        assert_relative_eq!(f_half(0.5).unwrap(), 1.180_340_599, max_relative = 1e-9);
        let expected = 2.0 / PI * ellip_k(0.5f64.sqrt()).unwrap() / 2f64.sqrt();
        assert_relative_eq!(f_half(-1.0).unwrap(), expected, max_relative = 1e-15);
        assert!(matches!(f_half(1.0), Err(Error::ArgumentAtOrAboveOne(_))));
    }

    #[test]
    fn hypergeometric_oracle() {
        let q = tight();
        assert_relative_eq!(
            f_half_quadrature_oracle(0.0, &q).unwrap(),
            1.0,
            max_relative = 1e-14
        );
        for z in [0.5, -10.0, 0.99, -20.0] {
            let a = f_half(z).unwrap();
            let b = f_half_quadrature_oracle(z, &q).unwrap();
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }
        let gc = QuadratureSpec::gauss_chebyshev(15, 1e-15, 1e-13);
        assert_relative_eq!(
            f_half_quadrature_oracle(-10.0, &gc).unwrap(),
            f_half(-10.0).unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn singular_integrals() {
        let q = tight();
        let arcsine = quad_singular_split(|_, a, b| 1.0 / (a * b).sqrt(), 0.0, 1.0, &q).unwrap();
        assert_relative_eq!(arcsine.value, PI, max_relative = 1e-14);
        let one_sided = quad_singular_split(|_, a, _| 1.0 / a.sqrt(), -1.0, 0.0, &q).unwrap();
        assert_relative_eq!(one_sided.value, 2.0, max_relative = 1e-13);
        let endpoint = quad_singular_split(
            |x, from_lo, to_hi| 1.0 / ((1.0 - x) * (to_hi * from_lo).sqrt()),
            -1.0,
            0.0,
            &q,
        )
        .unwrap();
        assert_relative_eq!(endpoint.value, PI / 2f64.sqrt(), max_relative = 1e-14);
        let reversed = quad_singular_split(|_, a, b| 1.0 / (a * b).sqrt(), 1.0, 0.0, &q).unwrap();
        assert_relative_eq!(reversed.value, -PI, max_relative = 1e-14);
    }

    #[test]
    fn quadrature_spec_validation() {
        let q = QuadratureSpec {
            abs_tol: 0.0,
            ..Default::default()
        };
        assert!(q.validate().is_err());
        assert!(QuadratureSpec::gauss_chebyshev(8, 1e-10, 1e-10)
            .validate()
            .is_err());
        let q = QuadratureSpec {
            level: 13,
            ..Default::default()
        };
        assert!(q.validate().is_err());
    }

    #[test]
    fn unreachable_tolerance_reports_failure() {
        let mut q = QuadratureSpec::tanh_sinh(1e-300, 1e-300);
        q.level = 2;
        let r = quad_singular(|t| (t * 7.0).sin() / t.sqrt(), 0.0, 1.0, &q);
        assert!(matches!(r, Err(Error::QuadratureNotConverged { .. })));
    }
}
