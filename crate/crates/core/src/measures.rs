//! Root-counting measures: empirical CDFs, Kolmogorov-Smirnov distances
//! and histograms.

use crate::density::DensityModel;
use crate::error::{Error, Result};

/// Uniform probability measure on finitely many distinct atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure {
    atoms: Vec<f64>,
}

impl EmpiricalMeasure {
    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.atoms.len() as f64
    }

    /// Right-continuous empirical CDF.
    pub fn cdf(&self, x: f64) -> f64 {
        self.atoms.partition_point(|a| *a <= x) as f64 * self.weight()
    }
}

pub fn empirical(roots: &[f64]) -> Result<EmpiricalMeasure> {
    if roots.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut atoms = roots.to_vec();
    atoms.sort_by(f64::total_cmp);
    if let Some(w) = atoms.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateAtoms(w[0]));
    }
    Ok(EmpiricalMeasure { atoms })
}

/// `sup |F_n - F|` for a continuous `F`, attained next to an atom.
pub fn ks_distance(em: &EmpiricalMeasure, dm: &DensityModel) -> Result<f64> {
    let cdf = em
        .atoms
        .iter()
        .map(|&a| dm.cdf(a))
        .collect::<Result<Vec<_>>>()?;
    Ok(ks_against(&cdf))
}

/// KS distance given the continuous CDF evaluated at each sorted atom.
pub fn ks_against(cdf_at_atoms: &[f64]) -> f64 {
    let n = cdf_at_atoms.len() as f64;
    cdf_at_atoms
        .iter()
        .enumerate()
        .map(|(i, &f)| (f - i as f64 / n).max((i + 1) as f64 / n - f))
        .fold(0.0, f64::max)
}

/// Two-sample KS distance between empirical measures.
pub fn ks_two_sample(a: &EmpiricalMeasure, b: &EmpiricalMeasure) -> f64 {
    a.atoms
        .iter()
        .chain(&b.atoms)
        .map(|&x| (a.cdf(x) - b.cdf(x)).abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramBin {
    pub left: f64,
    pub right: f64,
    pub count: usize,
    /// `count / (n * width)`, comparable with a density.
    pub height: f64,
}

impl HistogramBin {
    pub fn center(&self) -> f64 {
        0.5 * (self.left + self.right)
    }
}

/// Equal-width bins over `[lo, hi]`; the last bin is closed on the right.
pub fn histogram(
    em: &EmpiricalMeasure,
    bins: usize,
    lo: f64,
    hi: f64,
) -> Result<Vec<HistogramBin>> {
    if bins < 1 || !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::BadRange { bins, lo, hi });
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &a in &em.atoms {
        if a < lo || a > hi {
            continue;
        }
        let k = (((a - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    let n = em.len() as f64;
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(k, count)| HistogramBin {
            left: lo + k as f64 * width,
            right: if k + 1 == bins {
                hi
            } else {
                lo + (k + 1) as f64 * width
            },
            count,
            height: count as f64 / (n * width),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::make_cubic;

    #[test]
    fn sorts_atoms() {
        let em = empirical(&[0.3, -0.1]).unwrap();
        assert_eq!(em.atoms(), &[-0.1, 0.3]);
        assert_eq!(em.weight(), 0.5);
        assert_eq!(em.cdf(-0.2), 0.0);
        assert_eq!(em.cdf(-0.1), 0.5);
        assert_eq!(em.cdf(1.0), 1.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(empirical(&[]), Err(Error::EmptyInput));
        assert_eq!(empirical(&[1.0, 0.5, 1.0]), Err(Error::DuplicateAtoms(1.0)));
    }

    #[test]
    fn single_median_atom() {
        let dm = DensityModel::new(make_cubic(1.0, 0.0, -1.0).unwrap());
        // the density refuses s = e2, but the CDF there is well defined
        let em = empirical(&[0.0]).unwrap();
        let d = ks_distance(&em, &dm).unwrap();
        assert!((d - 0.5).abs() < 1e-6);
    }

    #[test]
    fn histogram_normalization() {
        let em = empirical(&[0.1, 0.2]).unwrap();
        let h = histogram(&em, 1, 0.0, 0.5).unwrap();
        assert_eq!(h[0].count, 2);
        assert!((h[0].height - 2.0).abs() < 1e-15);

        let em = empirical(&[-0.9, -0.3, 0.0, 0.25, 0.7, 1.0]).unwrap();
        let h = histogram(&em, 7, -1.0, 1.0).unwrap();
        let total: f64 = h.iter().map(|b| b.height * (b.right - b.left)).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert_eq!(h.iter().map(|b| b.count).sum::<usize>(), 6);
    }

    #[test]
    fn histogram_range_errors() {
        let em = empirical(&[0.0]).unwrap();
        assert!(matches!(
            histogram(&em, 0, 0.0, 1.0),
            Err(Error::BadRange { .. })
        ));
        assert!(matches!(
            histogram(&em, 3, 1.0, 1.0),
            Err(Error::BadRange { .. })
        ));
    }

    #[test]
    fn two_sample_distance() {
        let a = empirical(&[0.0, 1.0]).unwrap();
        let b = empirical(&[0.5, 1.5]).unwrap();
        assert_eq!(ks_two_sample(&a, &b), 0.5);
        assert_eq!(ks_two_sample(&a, &a), 0.0);
    }
}
