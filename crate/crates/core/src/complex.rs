//! Spectral polynomials for cubics with complex roots.
//!
//! The matrix entries are the same rational expressions in `v`, `w` as in
//! the real case, now complex. The determinant is expanded into monomial
//! coefficients by the three-term recurrence and its roots found by
//! Aberth-Ehrlich iteration, then polished against the recurrence itself.

use num_complex::Complex64;

use crate::cubic::ExponentTriple;
use crate::error::{Error, Result};

const RESCALE_EVERY: usize = 16;
const MAX_SWEEPS: usize = 500;
const POLISH_SWEEPS: usize = 60;
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

/// Monic cubic with three distinct complex roots; the second is moved to
/// the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexCubic {
    roots: [Complex64; 3],
}

impl ComplexCubic {
    pub fn new(z1: Complex64, z2: Complex64, z3: Complex64) -> Result<Self> {
        let roots = [z1, z2, z3];
        if roots.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonDistinctRoots("roots must be finite".into()));
        }
        let scale = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            if (roots[i] - roots[j]).norm() <= 1e-12 * scale {
                return Err(Error::NonDistinctRoots(format!(
                    "{} and {} coincide",
                    roots[i], roots[j]
                )));
            }
        }
        Ok(Self { roots })
    }

    pub fn from_real(e1: f64, e2: f64, e3: f64) -> Result<Self> {
        Self::new(e1.into(), e2.into(), e3.into())
    }

    pub fn roots(&self) -> [Complex64; 3] {
        self.roots
    }

    pub fn shift(&self) -> Complex64 {
        self.roots[1]
    }

    /// `(v, w)` with `Q(z + shift) = z^3 + v z^2 + w z`.
    pub fn vw(&self) -> (Complex64, Complex64) {
        let r1 = self.roots[0] - self.roots[1];
        let r3 = self.roots[2] - self.roots[1];
        (-(r1 + r3), r1 * r3)
    }

    fn linear_coefficient(&self, a: &ExponentTriple) -> (f64, Complex64, Complex64) {
        let r1 = self.roots[0] - self.roots[1];
        let r3 = self.roots[2] - self.roots[1];
        (
            a.sum(),
            -a.a1 * r3 - a.a2 * (r1 + r3) - a.a3 * r1,
            a.a2 * r1 * r3,
        )
    }
}

/// Diagonal and coupling products of the degree-`m` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexTridiag {
    pub xi: Vec<Complex64>,
    pub psi: Vec<Complex64>,
    pub shift: Complex64,
}

pub fn complex_tridiag(c: &ComplexCubic, a: &ExponentTriple, m: usize) -> Result<ComplexTridiag> {
    if m < 1 {
        return Err(Error::DegreeTooSmall(m));
    }
    let (v, w) = c.vw();
    let (alpha, beta, gamma) = c.linear_coefficient(a);
    let nf = m as f64;
    let theta = nf * (nf - 1.0 + alpha);
    let xi = (1..=m + 1)
        .map(|i| {
            let k = m as f64 - i as f64;
            -(v * (k * (k + 1.0)) + beta * (k + 1.0)) / theta
        })
        .collect();
    let psi = (2..=m + 1)
        .map(|i| {
            let k = m as f64 - i as f64;
            let off_a = (k * (k + 1.0) + alpha * (k + 1.0)) / theta - 1.0;
            let off_g = (w * ((k + 1.0) * (k + 2.0)) + gamma * (k + 2.0)) / theta;
            off_g * off_a
        })
        .collect();
    Ok(ComplexTridiag {
        xi,
        psi,
        shift: c.shift(),
    })
}

impl ComplexTridiag {
    pub fn degree(&self) -> usize {
        self.psi.len()
    }

    /// `(Sp, Sp', error bound)` at a point `t` of the reporting frame, all
    /// scaled by a common power of two.
    pub fn eval(&self, t: Complex64) -> (Complex64, Complex64, f64) {
        let x = t - self.shift;
        let zero = Complex64::new(0.0, 0.0);
        let (mut p0, mut p1) = (zero, Complex64::new(1.0, 0.0));
        let (mut d0, mut d1) = (zero, zero);
        let (mut b0, mut b1) = (0.0, 1.0);
        for j in 0..self.xi.len() {
            let u = x - self.xi[j];
            let coupling = if j >= 1 { self.psi[j - 1] } else { zero };
            let p2 = u * p1 - coupling * p0;
            let d2 = p1 + u * d1 - coupling * d0;
            let b2 = (x.norm() + self.xi[j].norm()) * b1 + coupling.norm() * b0;
            (p0, p1, d0, d1, b0, b1) = (p1, p2, d1, d2, b1, b2);
            if b1 > 1e150 {
                let s = 2f64.powi(-498);
                p0 *= s;
                p1 *= s;
                d0 *= s;
                d1 *= s;
                b0 *= s;
                b1 *= s;
            }
        }
        (p1, d1, b1)
    }
}

/// Monic polynomial in `t - shift`, coefficients in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialCoefficients {
    pub coeffs: Vec<Complex64>,
    pub shift: Complex64,
}

impl PolynomialCoefficients {
    pub fn from_monic(coeffs: Vec<Complex64>, shift: Complex64) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::DegreeTooSmall(coeffs.len().saturating_sub(1)));
        }
        if coeffs.last() != Some(&Complex64::new(1.0, 0.0)) {
            return Err(Error::NotMonic(coeffs.last().unwrap().to_string()));
        }
        Ok(Self { coeffs, shift })
    }

    /// Expand `prod (t - r)`.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &ck) in coeffs.iter().enumerate() {
                next[k + 1] += ck;
                next[k] -= r * ck;
            }
            coeffs = next;
        }
        Self {
            coeffs,
            shift: Complex64::new(0.0, 0.0),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `(p, p', sum |c_j| |x|^j)` at `t`.
    pub fn eval(&self, t: Complex64) -> (Complex64, Complex64, f64) {
        let x = t - self.shift;
        let ax = x.norm();
        let mut p = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for c in self.coeffs.iter().rev() {
            d = d * x + p;
            p = p * x + c;
            scale = scale * ax + c.norm();
        }
        (p, d, scale)
    }
}

/// Coefficients of the degree-`m + 1` determinant by the three-term
/// recurrence, rescaled every few steps.
pub fn sp_coefficients(
    c: &ComplexCubic,
    a: &ExponentTriple,
    m: usize,
) -> Result<PolynomialCoefficients> {
    let td = complex_tridiag(c, a, m)?;
    let zero = Complex64::new(0.0, 0.0);
    let mut prev: Vec<Complex64> = vec![];
    let mut cur = vec![Complex64::new(1.0, 0.0)];
    for j in 0..td.xi.len() {
        let mut next = vec![zero; cur.len() + 1];
        for (k, &ck) in cur.iter().enumerate() {
            next[k + 1] += ck;
            next[k] -= td.xi[j] * ck;
        }
        if j >= 1 {
            for (k, &pk) in prev.iter().enumerate() {
                next[k] -= td.psi[j - 1] * pk;
            }
        }
        prev = cur;
        cur = next;
        if (j + 1) % RESCALE_EVERY == 0 {
            let big = cur.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if !big.is_finite() {
                return Err(Error::Overflow);
            }
            let s = 2f64.powi(-(big.log2().floor() as i32));
            prev.iter_mut().chain(cur.iter_mut()).for_each(|z| *z *= s);
        }
    }
    let lead = *cur.last().unwrap();
    let coeffs: Vec<Complex64> = cur.iter().map(|z| z / lead).collect();
    if coeffs
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::Overflow);
    }
    let mut coeffs = coeffs;
    *coeffs.last_mut().unwrap() = Complex64::new(1.0, 0.0);
    Ok(PolynomialCoefficients {
        coeffs,
        shift: td.shift,
    })
}

/// Gauss-Seidel Aberth sweeps with a user-supplied `(p, p', bound)`.
fn aberth_sweeps<F>(z: &mut [Complex64], eval: F, max_sweeps: usize) -> bool
where
    F: Fn(Complex64) -> (Complex64, Complex64, f64),
{
    let n = z.len();
    let mut done = vec![false; n];
    for _ in 0..max_sweeps {
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, d, bound) = eval(z[i]);
            if p.norm() <= 4.0 * f64::EPSILON * bound {
                done[i] = true;
                continue;
            }
            let newton = p / d;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = newton / (Complex64::new(1.0, 0.0) - newton * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            z[i] -= step;
            if step.norm() <= 2.0 * f64::EPSILON * z[i].norm() {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            return true;
        }
    }
    false
}

/// All roots of a monic polynomial, reporting frame.
pub fn aberth_roots(p: &PolynomialCoefficients) -> Result<Vec<Complex64>> {
    let n = p.degree();
    if n < 1 {
        return Err(Error::DegreeTooSmall(n));
    }
    let center = -p.coeffs[n - 1] / n as f64;
    // radius from the coefficients of the polynomial recentred at `center`
    let radius = (0..n)
        .map(|k| p.coeffs[k].norm().powf(1.0 / (n - k) as f64))
        .fold(0.0, f64::max)
        .max(1e-3)
        * 1.0;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            p.shift + center + Complex64::from_polar(radius, angle)
        })
        .collect();
    aberth_sweeps(&mut z, |t| p.eval(t), MAX_SWEEPS);
    for &r in &z {
        let (val, _, bound) = p.eval(r);
        if !(val.norm() <= RESIDUAL_TOLERANCE * bound) {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
    }
    Ok(z)
}

/// Roots of the spectral polynomial with diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Scatter {
    pub points: Vec<Complex64>,
    /// Largest `|Sp| / sum |c_j| |t - shift|^j` over the points.
    pub max_residual: f64,
    pub min_separation: f64,
    /// Largest distance from a point to the segment joining its neighbors
    /// after sorting along the principal axis.
    pub thickness: f64,
}

pub fn scatter(c: &ComplexCubic, a: &ExponentTriple, m: usize) -> Result<Scatter> {
    let p = sp_coefficients(c, a, m)?;
    let mut points = aberth_roots(&p)?;
    let td = complex_tridiag(c, a, m)?;
    let before = points.clone();
    if !aberth_sweeps(&mut points, |t| td.eval(t), POLISH_SWEEPS)
        || points.iter().any(|z| z.re.is_nan())
    {
        points = before;
    }
    let max_residual = points
        .iter()
        .map(|&r| {
            let (val, _, bound) = p.eval(r);
            val.norm() / bound
        })
        .fold(0.0, f64::max);
    if max_residual > RESIDUAL_TOLERANCE {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }
    points.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    Ok(Scatter {
        min_separation: min_separation(&points),
        thickness: thickness(&points),
        points,
        max_residual,
    })
}

pub fn min_separation(points: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            best = best.min((points[i] - points[j]).norm());
        }
    }
    best
}

pub fn thickness(points: &[Complex64]) -> f64 {
    if points.len() < 3 {
        return 0.0;
    }
    let n = points.len() as f64;
    let mean: Complex64 = points.iter().sum::<Complex64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for z in points {
        let d = z - mean;
        sxx += d.re * d.re;
        sxy += d.re * d.im;
        syy += d.im * d.im;
    }
    let angle = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let axis = Complex64::from_polar(1.0, angle);
    let mut sorted = points.to_vec();
    sorted.sort_by(|x, y| {
        ((x - mean) * axis.conj())
            .re
            .total_cmp(&((y - mean) * axis.conj()).re)
    });
    sorted
        .windows(3)
        .map(|w| segment_distance(w[1], w[0], w[2]))
        .fold(0.0, f64::max)
}

fn segment_distance(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let s = (((z - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (z - (a + ab * s)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::make_cubic;
    use crate::tridiag::{build_tridiag, eigenvalues};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tilted_cubic() -> ComplexCubic {
        ComplexCubic::new(c(1.0, 0.0), c(0.0, 0.0), c(-0.5, 1.0)).unwrap()
    }

    #[test]
    fn rejects_coincident_roots() {
        assert!(ComplexCubic::new(c(1.0, 1.0), c(1.0, 1.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn degree_one_symmetric() {
        let cc = ComplexCubic::from_real(1.0, 0.0, -1.0).unwrap();
        let p = sp_coefficients(&cc, &ExponentTriple::LAME, 1).unwrap();
        assert_eq!(p.coeffs.len(), 3);
        assert!((p.coeffs[0] - c(-1.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!(p.coeffs[1].norm() < 1e-15);
        let mut r = aberth_roots(&p).unwrap();
        r.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((r[0] - c(-1.0 / 3f64.sqrt(), 0.0)).norm() < 1e-14);
        assert!((r[1] - c(1.0 / 3f64.sqrt(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn degree_one_matches_determinant() {
        let cc = tilted_cubic();
        let td = complex_tridiag(&cc, &ExponentTriple::LAME, 1).unwrap();
        let p = sp_coefficients(&cc, &ExponentTriple::LAME, 1).unwrap();
        assert!((p.coeffs[1] + td.xi[0] + td.xi[1]).norm() < 1e-14);
        assert!((p.coeffs[0] - (td.xi[0] * td.xi[1] - td.psi[0])).norm() < 1e-14);
    }

    #[test]
    fn expanded_cubic_roots() {
        let p = PolynomialCoefficients::from_roots(&[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        let mut r = aberth_roots(&p).unwrap();
        r.sort_by(|a, b| a.re.total_cmp(&b.re));
        for (k, z) in r.iter().enumerate() {
            assert!((z - c(k as f64 + 1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn tilted_cubic_scatter() {
        let s = scatter(&tilted_cubic(), &ExponentTriple::LAME, 50).unwrap();
        assert_eq!(s.points.len(), 51);
        assert!(s.max_residual <= RESIDUAL_TOLERANCE);
        assert!(s.thickness.is_finite());
        assert!(s.min_separation > 0.0);
    }

    #[test]
    fn real_cubic_agrees_with_eigensolver() {
        let cubic = make_cubic(1.0, 0.2, -0.7).unwrap();
        let cc = ComplexCubic::from_real(1.0, 0.2, -0.7).unwrap();
        let a = ExponentTriple::LAME;
        let lc = crate::cubic::linear_coefficient(&cubic, &a);
        for m in [10, 30] {
            let eig = eigenvalues(&build_tridiag(&cubic, &lc, m).unwrap()).unwrap();
            let s = scatter(&cc, &a, m).unwrap();
            for (z, e) in s.points.iter().zip(&eig) {
                assert!(z.im.abs() <= 1e-8);
                assert!(
                    (z.re - (e + cubic.shift())).abs() <= 1e-8,
                    "{} vs {}",
                    z.re,
                    e
                );
            }
        }
    }

    #[test]
    fn thickness_of_line_is_zero() {
        let pts: Vec<Complex64> = (0..10).map(|k| c(k as f64, 2.0 * k as f64)).collect();
        assert!(thickness(&pts) < 1e-12);
        let bent = vec![c(0.0, 0.0), c(1.0, 1.0), c(2.0, 0.0)];
        assert!((thickness(&bent) - 1.0).abs() < 1e-12);
    }
}
