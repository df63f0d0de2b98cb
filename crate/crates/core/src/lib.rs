//! Van Vleck spectra of the generalized Lamé equation
//!
//! ```text
//! Q(z) S'' + P(z) S' - theta (z - t) S = 0,    P / Q = sum a_i / (z - e_i)
//! ```
//!
//! for a real cubic `Q` with roots `e1 > e2 > e3`, together with the
//! closed-form limiting density of the roots `t` as the degree grows.
//!
//! * [`tridiag`]: the tridiagonal eigenproblem producing the roots `t`.
//! * [`density`]: the limiting density, its CDF and the Heun equation it solves.
//! * [`families`]: the eight families of classical Lamé solutions.
//! * [`measures`]: empirical measures, KS distances, histograms.
//! * [`complex`]: spectral polynomials for complex cubics.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod complex;
pub mod cubic;
pub mod density;
pub mod error;
pub mod families;
pub mod measures;
pub mod specfun;
pub mod tridiag;

pub use cubic::{make_cubic, Cubic, ExponentTriple, FamilyKappa};
pub use density::{rho, DensityModel, Formula};
pub use error::{Error, Result};
pub use families::{family_spectrum, union_spectrum, FamilySpectrum};
pub use tridiag::{build_tridiag, eigenvalues, TridiagSpec};

/// Van Vleck roots `t` (reporting frame) for polynomial degree `m`.
pub fn van_vleck_roots(c: &Cubic, a: &ExponentTriple, m: usize) -> Result<Vec<f64>> {
    let spec = build_tridiag(c, &cubic::linear_coefficient(c, a), m)?;
    Ok(eigenvalues(&spec)?
        .into_iter()
        .map(|t| t + c.shift())
        .collect())
}
