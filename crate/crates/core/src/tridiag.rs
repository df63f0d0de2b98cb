//! The tridiagonal matrix whose characteristic polynomial is the Van Vleck
//! spectral polynomial, plus its eigenvalues and null vectors.
//!
//! For a polynomial solution `S(z) = a_0 z^m + ... + a_m` of
//! `Q S'' + P S' - theta (z - t) S = 0` the coefficients of `z^m, ..., z^0`
//! give a linear system `(t I - J) A = 0` where `J` has diagonal `xi`,
//! superdiagonal `-off_a` and subdiagonal `-off_g`. The Van Vleck roots
//! `t` are the eigenvalues of `J`.

use crate::cubic::{Cubic, LinearCoefficient};
use crate::error::{Error, Result};

/// Largest magnitude tolerated in recurrence iterates before rescaling.
const RESCALE_ABOVE: f64 = 1e150;
const RESCALE_LOG2: i32 = 498;

/// Entries of the degree-`m` matrix.
///
/// `xi` has `m + 1` entries; `off_a`, `off_g` and `psi` have `m`, with
/// `off_a[k]`, `off_g[k]` coupling rows `k` and `k + 1` (0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagSpec {
    pub degree: usize,
    pub theta: f64,
    pub xi: Vec<f64>,
    pub off_a: Vec<f64>,
    pub off_g: Vec<f64>,
    pub psi: Vec<f64>,
}

impl TridiagSpec {
    /// Assemble from raw entries; `psi` is recomputed as `off_a * off_g`.
    pub fn from_entries(
        theta: f64,
        xi: Vec<f64>,
        off_a: Vec<f64>,
        off_g: Vec<f64>,
    ) -> Result<Self> {
        if xi.is_empty() {
            return Err(Error::EmptyInput);
        }
        let m = xi.len() - 1;
        if off_a.len() != m || off_g.len() != m {
            return Err(Error::IndexOutOfRange {
                index: off_a.len().max(off_g.len()),
                max: m,
            });
        }
        let psi = off_a.iter().zip(&off_g).map(|(a, g)| a * g).collect();
        Ok(Self {
            degree: m,
            theta,
            xi,
            off_a,
            off_g,
            psi,
        })
    }

    pub fn size(&self) -> usize {
        self.xi.len()
    }

    /// Largest absolute row sum of `J`.
    pub fn gershgorin_radius(&self) -> f64 {
        (0..self.size())
            .map(|i| {
                let mut r = self.xi[i].abs();
                if i > 0 {
                    r += self.off_g[i - 1].abs();
                }
                if i < self.degree {
                    r += self.off_a[i].abs();
                }
                r
            })
            .fold(0.0, f64::max)
    }

    /// Off-diagonal of the symmetrized matrix, `sqrt(psi)`.
    fn symmetric_off_diagonal(&self) -> Result<Vec<f64>> {
        self.psi
            .iter()
            .enumerate()
            .map(|(index, &value)| {
                if value > 0.0 {
                    Ok(value.sqrt())
                } else {
                    Err(Error::NonPositivePsi { index, value })
                }
            })
            .collect()
    }

    /// Apply `t I - J` to a vector.
    pub fn apply_shifted(&self, t: f64, a: &[f64]) -> Vec<f64> {
        let n = self.size();
        (0..n)
            .map(|i| {
                let mut r = (t - self.xi[i]) * a[i];
                if i > 0 {
                    r += self.off_g[i - 1] * a[i - 1];
                }
                if i + 1 < n {
                    r += self.off_a[i] * a[i + 1];
                }
                r
            })
            .collect()
    }
}

/// Build the matrix for polynomial degree `m` from the shifted cubic and `P`.
pub fn build_tridiag(c: &Cubic, p: &LinearCoefficient, m: usize) -> Result<TridiagSpec> {
    if m < 1 {
        return Err(Error::DegreeTooSmall(m));
    }
    let (v, w) = (c.v(), c.w());
    let nf = m as f64;
    let theta = nf * (nf - 1.0 + p.alpha);
    // row i = 1..=m+1 in the usual 1-based numbering
    let xi = (1..=m + 1)
        .map(|i| {
            let k = m as f64 - i as f64;
            -(v * k * (k + 1.0) + p.beta * (k + 1.0)) / theta
        })
        .collect();
    let off_a = (2..=m + 1)
        .map(|i| {
            let k = m as f64 - i as f64;
            (k * (k + 1.0) + p.alpha * (k + 1.0)) / theta - 1.0
        })
        .collect();
    let off_g = (2..=m + 1)
        .map(|i| {
            let k = m as f64 - i as f64;
            (w * (k + 1.0) * (k + 2.0) + p.gamma * (k + 2.0)) / theta
        })
        .collect();
    TridiagSpec::from_entries(theta, xi, off_a, off_g)
}

pub fn check_psi_positivity(t: &TridiagSpec) -> bool {
    t.psi.iter().all(|&p| p > 0.0)
}

/// Number of eigenvalues of the symmetric tridiagonal `(diag, off)` below `x`.
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    for i in 0..diag.len() {
        if i > 0 {
            q = diag[i] - x - off[i - 1] * off[i - 1] / q;
        }
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Eigenvalues of the symmetrized matrix by Sturm bisection, ascending.
pub fn eigenvalues(t: &TridiagSpec) -> Result<Vec<f64>> {
    let off = t.symmetric_off_diagonal()?;
    Ok(symmetric_eigenvalues(&t.xi, &off))
}

/// All eigenvalues of a real symmetric tridiagonal matrix, ascending.
pub fn symmetric_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    if n == 1 {
        return vec![diag[0]];
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    let radius = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    let pivmin = f64::MIN_POSITIVE.max(f64::EPSILON * f64::EPSILON * radius * radius) * 1e3;
    lo -= 2.0 * f64::EPSILON * radius;
    hi += 2.0 * f64::EPSILON * radius;

    let mut out = Vec::with_capacity(n);
    // brackets narrowed from the previous eigenvalue's search
    let mut floor = lo;
    for k in 0..n {
        let (mut a, mut b) = (floor, hi);
        for _ in 0..256 {
            let mid = 0.5 * (a + b);
            if b - a <= 2.0 * f64::EPSILON * (a.abs().max(b.abs())) + pivmin || mid == a || mid == b
            {
                break;
            }
            if sturm_count(diag, off, mid, pivmin) > k {
                b = mid;
            } else {
                a = mid;
            }
        }
        let eig = 0.5 * (a + b);
        out.push(eig);
        floor = a;
    }
    out
}

/// `Sp_{m,i}(x)` as `(mantissa, log2 exponent)`.
pub fn sp_eval_scaled(t: &TridiagSpec, i: usize, x: f64) -> Result<(f64, i32)> {
    let max = t.size();
    if i > max {
        return Err(Error::IndexOutOfRange { index: i, max });
    }
    let (mut prev, mut cur) = (0.0, 1.0);
    let mut exponent = 0;
    for j in 1..=i {
        let coupling = if j >= 2 { t.psi[j - 2] } else { 0.0 };
        let next = (x - t.xi[j - 1]) * cur - coupling * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            let s = 2f64.powi(-RESCALE_LOG2);
            cur *= s;
            prev *= s;
            exponent += RESCALE_LOG2;
        }
    }
    Ok((cur, exponent))
}

/// Leading principal minor `Sp_{m,i}(x)` by the three-term recurrence.
pub fn sp_eval(t: &TridiagSpec, i: usize, x: f64) -> Result<f64> {
    let (mant, exp) = sp_eval_scaled(t, i, x)?;
    Ok(mant * 2f64.powi(exp))
}

/// Coefficients `a_0..a_m` of a polynomial solution, leading first.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionVector {
    pub coeffs: Vec<f64>,
}

impl SolutionVector {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Value and first two derivatives at `z` (shifted frame).
    pub fn eval_with_derivatives(&self, z: f64) -> (f64, f64, f64) {
        let (mut p, mut d1, mut d2) = (0.0, 0.0, 0.0);
        for &c in &self.coeffs {
            d2 = d2 * z + 2.0 * d1;
            d1 = d1 * z + p;
            p = p * z + c;
        }
        (p, d1, d2)
    }
}

/// Residual threshold for accepting a null vector, relative to `|t| + radius`.
pub const NULL_VECTOR_TOLERANCE: f64 = 1e-9;

/// Solve `(eig I - J) A = 0` by inverse iteration on the symmetrized matrix.
pub fn null_vector(t: &TridiagSpec, eig: f64) -> Result<SolutionVector> {
    let off = t.symmetric_off_diagonal()?;
    let n = t.size();
    let scale = t.gershgorin_radius().max(eig.abs()).max(f64::MIN_POSITIVE);

    let mut y = vec![1.0; n];
    if n > 1 {
        for _ in 0..3 {
            y = solve_shifted_symmetric(&t.xi, &off, eig, &y, scale);
            let norm = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if !(norm.is_finite() && norm > 0.0) {
                return Err(Error::NotAnEigenvalue {
                    eig,
                    residual: f64::INFINITY,
                });
            }
            y.iter_mut().for_each(|v| *v /= norm);
        }
    }

    // undo the diagonal similarity: x_i = y_i / d_i, with d tracked in logs
    let mut log_d = vec![0.0; n];
    for k in 0..t.degree {
        log_d[k + 1] = log_d[k] + 0.5 * (t.off_a[k] / t.off_g[k]).ln();
    }
    let logs: Vec<f64> = y
        .iter()
        .zip(&log_d)
        .map(|(v, ld)| {
            if *v == 0.0 {
                f64::NEG_INFINITY
            } else {
                v.abs().ln() - ld
            }
        })
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut coeffs: Vec<f64> = y
        .iter()
        .zip(&logs)
        .map(|(v, l)| v.signum() * (l - top).exp())
        .collect();
    let (imax, _) = coeffs
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |(bi, bv), (i, v)| {
            if v.abs() > bv {
                (i, v.abs())
            } else {
                (bi, bv)
            }
        });
    let pivot = coeffs[imax];
    coeffs.iter_mut().for_each(|v| *v /= pivot);

    let residual = t
        .apply_shifted(eig, &coeffs)
        .iter()
        .fold(0.0f64, |m, r| m.max(r.abs()))
        / scale;
    if !(residual <= NULL_VECTOR_TOLERANCE) {
        return Err(Error::NotAnEigenvalue { eig, residual });
    }
    Ok(SolutionVector { coeffs })
}

/// Solve `(T - shift I) x = rhs` for symmetric tridiagonal `T` using
/// Gaussian elimination with partial pivoting (LAPACK `gtsv` layout).
fn solve_shifted_symmetric(
    diag: &[f64],
    off: &[f64],
    shift: f64,
    rhs: &[f64],
    scale: f64,
) -> Vec<f64> {
    let n = diag.len();
    let tiny = f64::EPSILON * scale;
    let mut d: Vec<f64> = diag.iter().map(|x| x - shift).collect();
    let mut du: Vec<f64> = off.to_vec();
    let dl: Vec<f64> = off.to_vec();
    let mut du2 = vec![0.0; n];
    let mut b = rhs.to_vec();

    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                d[i] = tiny;
            }
            let fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            du[i] = temp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du2[i];
            }
            let tb = b[i];
            b[i] = b[i + 1];
            b[i + 1] = tb - fact * b[i + 1];
        }
    }
    if d[n - 1].abs() < tiny {
        d[n - 1] = if d[n - 1] < 0.0 { -tiny } else { tiny };
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        if i + 1 < n {
            s -= du[i] * x[i + 1];
        }
        if i + 2 < n {
            s -= du2[i] * x[i + 2];
        }
        x[i] = s / d[i];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::{linear_coefficient, make_cubic, ExponentTriple};
    use approx::assert_relative_eq;

    fn lame_spec(m: usize) -> TridiagSpec {
        let c = make_cubic(1.0, 0.0, -1.0).unwrap();
        build_tridiag(&c, &linear_coefficient(&c, &ExponentTriple::LAME), m).unwrap()
    }

    #[test]
    fn degree_one_entries() {
        let t = lame_spec(1);
        assert_eq!(t.theta, 1.5);
        assert_eq!(t.xi, vec![0.0, 0.0]);
        assert_eq!(t.off_a, vec![-1.0]);
        assert_relative_eq!(t.off_g[0], -1.0 / 3.0, epsilon = 1e-16);
        assert_relative_eq!(t.psi[0], 1.0 / 3.0, epsilon = 1e-16);
        assert!(check_psi_positivity(&t));
    }

    #[test]
    fn theta_formula() {
        assert_eq!(lame_spec(3).theta, 10.5);
        let c = make_cubic(1.0, 0.0, -1.0).unwrap();
        let p = linear_coefficient(&c, &ExponentTriple::LAME);
        assert_eq!(build_tridiag(&c, &p, 0), Err(Error::DegreeTooSmall(0)));
    }

    #[test]
    fn degree_one_eigenvalues() {
        let eig = eigenvalues(&lame_spec(1)).unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert_relative_eq!(eig[0], -r, epsilon = 1e-15);
        assert_relative_eq!(eig[1], r, epsilon = 1e-15);
    }

    #[test]
    fn hand_built_two_by_two() {
        // [[0, 1/2], [1/2, 1]] has eigenvalues (1 +- sqrt 2) / 2
        let t = TridiagSpec::from_entries(1.0, vec![0.0, 1.0], vec![-0.5], vec![-0.5]).unwrap();
        let eig = eigenvalues(&t).unwrap();
        assert_relative_eq!(eig[0], (1.0 - 2f64.sqrt()) / 2.0, epsilon = 1e-15);
        assert_relative_eq!(eig[1], (1.0 + 2f64.sqrt()) / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn negative_psi_rejected() {
        let t = TridiagSpec::from_entries(1.0, vec![0.0, 1.0], vec![1.0], vec![-1.0]).unwrap();
        assert!(!check_psi_positivity(&t));
        assert!(matches!(eigenvalues(&t), Err(Error::NonPositivePsi { .. })));
    }

    #[test]
    fn recurrence_basics() {
        let t = lame_spec(1);
        assert_eq!(sp_eval(&t, 0, 0.7).unwrap(), 1.0);
        assert_eq!(sp_eval(&t, 1, 0.7).unwrap(), 0.7 - t.xi[0]);
        let root = 1.0 / 3f64.sqrt();
        assert!(sp_eval(&t, 2, root).unwrap().abs() < 1e-15);
        assert!(matches!(
            sp_eval(&t, 3, 0.0),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn recurrence_survives_large_degree() {
        let t = lame_spec(800);
        let (mant, exp) = sp_eval_scaled(&t, 801, 3.0).unwrap();
        assert!(mant.is_finite() && mant != 0.0);
        assert!(exp >= 0);
    }

    #[test]
    fn degree_one_null_vector() {
        let t = lame_spec(1);
        let r = 1.0 / 3f64.sqrt();
        for eig in [r, -r] {
            let a = null_vector(&t, eig).unwrap();
            // the root of S is -t, so a1 / a0 = t
            assert_relative_eq!(a.coeffs[1] / a.coeffs[0], eig, epsilon = 1e-14);
        }
        assert!(matches!(
            null_vector(&t, r + 0.1),
            Err(Error::NotAnEigenvalue { .. })
        ));
    }

    #[test]
    fn null_vectors_for_moderate_degree() {
        let c = make_cubic(2.0, 0.3, -1.0).unwrap();
        let p = linear_coefficient(&c, &ExponentTriple::new(0.7, 1.2, 0.4).unwrap());
        let t = build_tridiag(&c, &p, 40).unwrap();
        for eig in eigenvalues(&t).unwrap() {
            null_vector(&t, eig).unwrap();
        }
    }

    #[test]
    fn eigenvalues_strictly_increase() {
        for m in [2, 7, 30, 120] {
            let eig = eigenvalues(&lame_spec(m)).unwrap();
            assert_eq!(eig.len(), m + 1);
            assert!(eig.windows(2).all(|w| w[0] < w[1]));
            assert!(eig.iter().all(|&e| e > -1.0 && e < 1.0));
        }
    }
}
