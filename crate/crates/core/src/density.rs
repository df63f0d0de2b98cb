//! Limiting root density `rho_Q` of the Van Vleck spectra.
//!
//! Every closed form is evaluated with the shifted arguments
//! `(e1 - e2, e3 - e2, s - e2)`. Five routes are available and agree to
//! rounding away from `e2`, where the density has a logarithmic singularity.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::cubic::Cubic;
use crate::error::{Error, Result};
use crate::specfun::{ellip_k_imag, f_half, quad_singular_split, QuadratureSpec};

/// Distance from `e2`, relative to the span, below which `rho` refuses.
pub const LOG_SINGULARITY_GUARD: f64 = 1e-13;

/// Minimum distance from any root, relative to the span, for the Heun check.
pub const HEUN_MIN_DISTANCE: f64 = 0.02;

/// Base finite-difference step for the Heun check, relative to the span.
pub const HEUN_STEP: f64 = 1e-4;

/// `(|x1| + |x2|) |x3| / (|x1| |x2 - x3| + |x2| |x1 - x3|)`.
pub fn omega(x1: f64, x2: f64, x3: f64) -> Result<f64> {
    let den = x1.abs() * (x2 - x3).abs() + x2.abs() * (x1 - x3).abs();
    if den == 0.0 {
        return Err(Error::ZeroDenominator(x1, x2, x3));
    }
    Ok((x1.abs() + x2.abs()) * x3.abs() / den)
}

/// Which closed form or integral to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Formula {
    /// Elliptic integral at imaginary modulus.
    EllipticImag,
    /// `F(1/2,1/2,1; .)` at a negative argument.
    HyperNegative,
    /// `F(1/2,1/2,1; .)` after the quadratic transformation.
    HyperQuadratic,
    /// The quadratic-transformation form written out in the roots.
    ClosedRoots,
    /// Branch integrals between the roots, by quadrature.
    Integral,
}

impl Formula {
    pub const ALL: [Formula; 5] = [
        Formula::EllipticImag,
        Formula::HyperNegative,
        Formula::HyperQuadratic,
        Formula::ClosedRoots,
        Formula::Integral,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Formula::EllipticImag => "i",
            Formula::HyperNegative => "ii",
            Formula::HyperQuadratic => "iii",
            Formula::ClosedRoots => "iv-closed",
            Formula::Integral => "iv-integral",
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Formula {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Formula::ALL
            .into_iter()
            .find(|f| f.tag() == s)
            .ok_or_else(|| {
                format!("unknown formula '{s}', expected one of i, ii, iii, iv-closed, iv-integral")
            })
    }
}

/// A cubic together with the evaluation settings for its density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityModel {
    pub cubic: Cubic,
    pub formula: Formula,
    pub quadrature: QuadratureSpec,
}

impl DensityModel {
    pub fn new(cubic: Cubic) -> Self {
        Self {
            cubic,
            formula: Formula::HyperQuadratic,
            quadrature: QuadratureSpec::tanh_sinh(1e-15, 1e-13),
        }
    }

    pub fn with_formula(mut self, formula: Formula) -> Self {
        self.formula = formula;
        self
    }

    /// Density with the model's preferred formula.
    pub fn density(&self, s: f64) -> Result<f64> {
        rho(self, s, self.formula)
    }

    /// CDF of the limiting measure; clamps outside the support.
    pub fn cdf(&self, s: f64) -> Result<f64> {
        cdf(self, s)
    }

    /// Inverse CDF by bisection.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        let c = &self.cubic;
        if p <= 0.0 {
            return Ok(c.e3());
        }
        if p >= 1.0 {
            return Ok(c.e1());
        }
        let (mut lo, mut hi) = (c.e3(), c.e1());
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= 4.0 * f64::EPSILON * c.span() {
                break;
            }
            if self.cdf(mid)? < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

fn check_support(c: &Cubic, s: f64) -> Result<f64> {
    if !c.contains(s) {
        return Err(Error::OutOfSupport {
            s,
            lo: c.e3(),
            hi: c.e1(),
        });
    }
    let shifted = s - c.e2();
    if shifted.abs() < LOG_SINGULARITY_GUARD * c.span() {
        return Err(Error::AtLogSingularity(s));
    }
    Ok(shifted)
}

/// Density at `s` by the chosen route. The endpoints `e3`, `e1` are
/// accepted and give the one-sided limits.
pub fn rho(dm: &DensityModel, s: f64, formula: Formula) -> Result<f64> {
    let shifted = check_support(&dm.cubic, s)?;
    rho_shifted(&dm.cubic, shifted, formula, &dm.quadrature)
}

/// Density at shifted coordinate `s - e2`, no support checks.
pub(crate) fn rho_shifted(c: &Cubic, s: f64, formula: Formula, q: &QuadratureSpec) -> Result<f64> {
    let (x1, x2, span) = (c.upper(), c.lower(), c.span());
    let abs_s = s.abs();
    match formula {
        Formula::EllipticImag | Formula::HyperNegative => {
            let om = omega(x1, x2, s)?;
            let root = ((1.0 - om) * (1.0 + om)).sqrt();
            // 1 - sqrt(1 - om^2), free of cancellation
            let gap = om * om / (1.0 + root);
            let prefactor = ((1.0 + root) / (span * abs_s * om)).sqrt();
            if formula == Formula::EllipticImag {
                let kappa = (2.0 * root / gap).sqrt();
                Ok(prefactor * ellip_k_imag(kappa)? / PI)
            } else {
                Ok(0.5 * prefactor * f_half(-2.0 * root / gap)?)
            }
        }
        Formula::HyperQuadratic => {
            let om = omega(x1, x2, s)?;
            let prefactor = (om / (2.0 * span * abs_s * (1.0 + om))).sqrt();
            Ok(prefactor * f_half((1.0 - om) / (1.0 + om))?)
        }
        Formula::ClosedRoots => {
            let lin = (x1 + x2) * s - 2.0 * x1 * x2;
            let den = lin + span * abs_s;
            let num = lin - span * abs_s;
            Ok(f_half(num / den)? / (2.0 * den).sqrt())
        }
        Formula::Integral => {
            let r = if s < 0.0 {
                // e2 < x < e1: shifted 0 < x < x1
                quad_singular_split(
                    |_, from_lo, to_hi| {
                        1.0 / (to_hi * from_lo * (from_lo - x2) * (from_lo - s)).sqrt()
                    },
                    0.0,
                    x1,
                    q,
                )?
            } else {
                // e3 < x < e2: shifted x2 < x < 0
                quad_singular_split(
                    |_, from_lo, to_hi| 1.0 / ((x1 + to_hi) * to_hi * from_lo * (s + to_hi)).sqrt(),
                    x2,
                    0.0,
                    q,
                )?
            };
            Ok(r.value / (2.0 * PI))
        }
    }
}

/// Roots of `(4w - v^2) nu^2 - (4w + 2 v s) nu - s^2 = 0` in the shifted frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuBounds {
    pub nu_min: f64,
    pub nu_max: f64,
}

pub fn nu_bounds(c: &Cubic, s: f64) -> Result<NuBounds> {
    if !(s > c.e3() && s < c.e1()) {
        return Err(Error::OutOfSupport {
            s,
            lo: c.e3(),
            hi: c.e1(),
        });
    }
    let s = s - c.e2();
    let (v, w) = (c.v(), c.w());
    let disc = v * v - 4.0 * w;
    // w (w + v s + s^2) = -e3 e1 (s - e3)(e1 - s) in the shifted frame
    let radicand = -c.lower() * c.upper() * (s - c.lower()) * (c.upper() - s);
    let lead = -(2.0 * w + v * s);
    let nu_max = (lead + 2.0 * radicand.max(0.0).sqrt()) / disc;
    let nu_min = s * s / (disc * nu_max);
    Ok(NuBounds { nu_min, nu_max })
}

/// Density from the one-dimensional integral over `nu` between the bounds.
pub fn rho_nu_integral(c: &Cubic, s: f64, q: &QuadratureSpec) -> Result<f64> {
    let b = nu_bounds(c, s)?;
    // sqrt(v^2 - 4w) = e1 - e3
    let r = quad_singular_split(
        |nu, from_lo, to_hi| 1.0 / (nu * from_lo * to_hi).sqrt(),
        b.nu_min,
        b.nu_max,
        q,
    )?;
    Ok(r.value / (2.0 * PI * c.span()))
}

/// Pointwise limits `(xi(tau), psi(tau))` of the recurrence coefficients.
pub fn limit_coeffs(tau: f64, c: &Cubic) -> (f64, f64) {
    let r = (1.0 - tau) * (1.0 - tau);
    (-c.v() * r, (-c.w() * (1.0 - r) * r).max(0.0))
}

/// Interval `[xi - 2 sqrt(psi), xi + 2 sqrt(psi)]` in the shifted frame.
pub fn limit_band(tau: f64, c: &Cubic) -> (f64, f64) {
    let (xi, psi) = limit_coeffs(tau, c);
    let r = 2.0 * psi.sqrt();
    (xi - r, xi + r)
}

/// `int_{e3}^{s} rho`, split at `e2`.
pub fn cdf(dm: &DensityModel, s: f64) -> Result<f64> {
    let c = &dm.cubic;
    if s <= c.e3() {
        return Ok(0.0);
    }
    if s >= c.e1() {
        return Ok(left_mass(dm, 0.0)? + right_mass(dm, c.upper())?);
    }
    let shifted = s - c.e2();
    if shifted <= 0.0 {
        left_mass(dm, shifted)
    } else {
        Ok(left_mass(dm, 0.0)? + right_mass(dm, shifted)?)
    }
}

fn cdf_quadrature() -> QuadratureSpec {
    QuadratureSpec::tanh_sinh(1e-14, 1e-12)
}

fn closed_form(dm: &DensityModel) -> Formula {
    if dm.formula == Formula::Integral {
        Formula::HyperQuadratic
    } else {
        dm.formula
    }
}

/// Mass of `[e3, e2 + upto]` for `upto <= 0`.
fn left_mass(dm: &DensityModel, upto: f64) -> Result<f64> {
    let c = dm.cubic;
    let f = closed_form(dm);
    let q = dm.quadrature;
    let r = quad_singular_split(
        // shifted coordinate is upto - to_hi
        |_, _, to_hi| rho_shifted(&c, upto - to_hi, f, &q).unwrap_or(f64::NAN),
        c.lower(),
        upto,
        &cdf_quadrature(),
    )?;
    Ok(r.value)
}

/// Mass of `[e2, e2 + upto]` for `upto >= 0`.
fn right_mass(dm: &DensityModel, upto: f64) -> Result<f64> {
    let c = dm.cubic;
    let f = closed_form(dm);
    let q = dm.quadrature;
    let r = quad_singular_split(
        |_, from_lo, _| rho_shifted(&c, from_lo, f, &q).unwrap_or(f64::NAN),
        0.0,
        upto,
        &cdf_quadrature(),
    )?;
    Ok(r.value)
}

/// Residual of `8 Q rho'' + 8 Q' rho' + Q'' rho` and its natural scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeunCheck {
    pub residual: f64,
    /// `max(|rho|, |rho'|, |rho''|) * max(8|Q|, 8|Q'|, |Q''|)`
    pub scale: f64,
    pub rho: f64,
    pub d1: f64,
    pub d2: f64,
}

impl HeunCheck {
    pub fn relative(&self) -> f64 {
        self.residual / self.scale
    }
}

pub fn heun_residual(dm: &DensityModel, s: f64) -> Result<f64> {
    heun_check(dm, s).map(|h| h.residual)
}

/// Heun residual with derivatives from Richardson-extrapolated central
/// differences at steps `h`, `h/2`, `h/4`.
pub fn heun_check(dm: &DensityModel, s: f64) -> Result<HeunCheck> {
    let c = &dm.cubic;
    let span = c.span();
    let clearance = c
        .roots()
        .iter()
        .map(|e| (s - e).abs())
        .fold(f64::INFINITY, f64::min);
    if !(s > c.e3() && s < c.e1()) || clearance <= HEUN_MIN_DISTANCE * span {
        return Err(Error::TooCloseToSingularity(s));
    }
    let f = closed_form(dm);
    let eval = |x: f64| rho(dm, x, f);
    let r0 = eval(s)?;
    let h = HEUN_STEP * span;
    let mut first = [0.0; 3];
    let mut second = [0.0; 3];
    for (k, step) in [h, 0.5 * h, 0.25 * h].into_iter().enumerate() {
        let (plus, minus) = (eval(s + step)?, eval(s - step)?);
        first[k] = (plus - minus) / (2.0 * step);
        second[k] = (plus - 2.0 * r0 + minus) / (step * step);
    }
    let richardson = |d: [f64; 3]| {
        let a = (4.0 * d[1] - d[0]) / 3.0;
        let b = (4.0 * d[2] - d[1]) / 3.0;
        (16.0 * b - a) / 15.0
    };
    let (d1, d2) = (richardson(first), richardson(second));
    let (q0, q1, q2) = (c.eval(s), c.eval_d1(s), c.eval_d2(s));
    let residual = (8.0 * q0 * d2 + 8.0 * q1 * d1 + q2 * r0).abs();
    let scale =
        r0.abs().max(d1.abs()).max(d2.abs()) * (8.0 * q0.abs()).max(8.0 * q1.abs()).max(q2.abs());
    Ok(HeunCheck {
        residual,
        scale,
        rho: r0,
        d1,
        d2,
    })
}

/// A regular singular point of the density's ODE.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularPoint {
    E1,
    E2,
    E3,
    Infinity,
}

impl SingularPoint {
    pub const ALL: [SingularPoint; 4] = [
        SingularPoint::E1,
        SingularPoint::E2,
        SingularPoint::E3,
        SingularPoint::Infinity,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            SingularPoint::E1 => "e1",
            SingularPoint::E2 => "e2",
            SingularPoint::E3 => "e3",
            SingularPoint::Infinity => "infinity",
        }
    }
}

/// Polynomial with coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq)]
struct Poly(Vec<f64>);

impl Poly {
    fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    fn degree(&self) -> usize {
        self.0.iter().rposition(|c| *c != 0.0).unwrap_or(0)
    }

    fn leading(&self) -> f64 {
        self.0[self.degree()]
    }

    fn derivative(&self) -> Poly {
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| k as f64 * c)
                .collect(),
        )
    }

    fn from_roots(roots: &[f64]) -> Poly {
        let mut coeffs = vec![1.0];
        for &r in roots {
            let mut next = vec![0.0; coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= r * c;
            }
            coeffs = next;
        }
        Poly(coeffs)
    }

    /// Quotient of division by `(x - root)`, remainder dropped.
    fn deflate(&self, root: f64) -> Poly {
        let n = self.0.len();
        let mut q = vec![0.0; n - 1];
        let mut carry = 0.0;
        for k in (1..n).rev() {
            carry = self.0[k] + carry * root;
            q[k - 1] = carry;
        }
        Poly(q)
    }
}

/// Rational coefficient `num / den` of the normalized ODE.
struct Rational {
    num: Poly,
    den: Poly,
}

impl Rational {
    /// `lim (s - p)^k num/den` at a simple root `p` of `den`.
    fn limit_at_root(&self, p: f64, k: u32) -> f64 {
        let finite = self.num.eval(p) / self.den.deflate(p).eval(p);
        // the remaining (s - p)^{k-1} factor vanishes at p
        if k == 1 {
            finite
        } else {
            0.0
        }
    }

    /// `lim s^k num/den` as `s -> infinity`.
    fn limit_at_infinity(&self, k: usize) -> f64 {
        let (dn, dd) = (self.num.degree() + k, self.den.degree());
        if dn < dd {
            0.0
        } else if dn == dd {
            self.num.leading() / self.den.leading()
        } else {
            f64::INFINITY
        }
    }
}

/// Indicial exponents of `rho'' + a1 rho' + a2 rho = 0` with
/// `a1 = Q'/Q` and `a2 = (3s - e1 - e2 - e3) / (4Q)`.
pub fn indicial_exponents(c: &Cubic, point: SingularPoint) -> (f64, f64) {
    let q = Poly::from_roots(&c.roots());
    let a1 = Rational {
        num: q.derivative(),
        den: q.clone(),
    };
    let a2 = Rational {
        num: Poly(vec![-(c.e1() + c.e2() + c.e3()), 3.0]),
        den: Poly(q.0.iter().map(|x| 4.0 * x).collect()),
    };
    let (lin, constant) = match point {
        SingularPoint::Infinity => {
            // zeta (zeta + 1) - A1 zeta + A2 = 0
            let l1 = a1.limit_at_infinity(1);
            let l2 = a2.limit_at_infinity(2);
            (1.0 - l1, l2)
        }
        finite => {
            let p = match finite {
                SingularPoint::E1 => c.e1(),
                SingularPoint::E2 => c.e2(),
                _ => c.e3(),
            };
            // zeta (zeta - 1) + A1 zeta + A2 = 0
            let l1 = a1.limit_at_root(p, 1);
            let l2 = a2.limit_at_root(p, 2);
            (l1 - 1.0, l2)
        }
    };
    let disc = (lin * lin - 4.0 * constant).max(0.0).sqrt();
    let (r1, r2) = ((-lin - disc) / 2.0, (-lin + disc) / 2.0);
    (r1 + 0.0, r2 + 0.0)
}

/// Leading logarithmic behaviour of `rho` next to `e2`.
pub fn log_asymptote(c: &Cubic, s: f64) -> f64 {
    let (a, b) = (c.upper(), -c.lower());
    let arg = 16.0 * a * b / (c.span() * (s - c.e2()).abs());
    arg.ln() / (2.0 * PI * (a * b).sqrt())
}
