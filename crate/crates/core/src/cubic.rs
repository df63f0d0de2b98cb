//! Real cubics with ordered roots, exponent triples and Lamé family labels.
//!
//! Everything downstream works in the shifted frame where the middle root
//! sits at the origin: `Q(z + e2) = z^3 + v z^2 + w z`.

use std::fmt;

use crate::error::{Error, Result};

/// Relative tolerance below which two roots count as equal.
pub const ROOT_TIE_TOLERANCE: f64 = 1e-14;

/// Monic real cubic `(z - e1)(z - e2)(z - e3)` with `e1 > e2 > e3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cubic {
    e1: f64,
    e2: f64,
    e3: f64,
}

impl Cubic {
    pub fn new(e1: f64, e2: f64, e3: f64) -> Result<Self> {
        make_cubic(e1, e2, e3)
    }

    /// Rebuild from the shifted coefficients `v`, `w` and the shift `e2`.
    pub fn from_shifted(v: f64, w: f64, shift: f64) -> Result<Self> {
        // z^2 + v z + w = (z - r1)(z - r3); w < 0 gives r1 > 0 > r3
        let disc = (v * v - 4.0 * w).sqrt();
        let (hi, lo) = if v <= 0.0 {
            let hi = (-v + disc) / 2.0;
            (hi, w / hi)
        } else {
            let lo = (-v - disc) / 2.0;
            (w / lo, lo)
        };
        make_cubic(hi + shift, shift, lo + shift)
    }

    pub fn e1(&self) -> f64 {
        self.e1
    }

    pub fn e2(&self) -> f64 {
        self.e2
    }

    pub fn e3(&self) -> f64 {
        self.e3
    }

    pub fn roots(&self) -> [f64; 3] {
        [self.e1, self.e2, self.e3]
    }

    /// The translation applied to move `e2` to the origin.
    pub fn shift(&self) -> f64 {
        self.e2
    }

    /// `e1 - e2`, strictly positive.
    pub fn upper(&self) -> f64 {
        self.e1 - self.e2
    }

    /// `e3 - e2`, strictly negative.
    pub fn lower(&self) -> f64 {
        self.e3 - self.e2
    }

    /// Length of the support `e1 - e3`.
    pub fn span(&self) -> f64 {
        self.e1 - self.e3
    }

    pub fn v(&self) -> f64 {
        -(self.upper() + self.lower())
    }

    pub fn w(&self) -> f64 {
        self.upper() * self.lower()
    }

    /// `Q(s) = (s - e1)(s - e2)(s - e3)` in the reporting frame.
    pub fn eval(&self, s: f64) -> f64 {
        (s - self.e1) * (s - self.e2) * (s - self.e3)
    }

    pub fn eval_d1(&self, s: f64) -> f64 {
        let (a, b, c) = (s - self.e1, s - self.e2, s - self.e3);
        a * b + a * c + b * c
    }

    pub fn eval_d2(&self, s: f64) -> f64 {
        2.0 * ((s - self.e1) + (s - self.e2) + (s - self.e3))
    }

    /// Whether `s` lies in the closed support `[e3, e1]`.
    pub fn contains(&self, s: f64) -> bool {
        s >= self.e3 && s <= self.e1
    }
}

impl fmt::Display for Cubic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(z-{})(z-{})(z-{})", self.e1, self.e2, self.e3)
    }
}

/// Validate and build a cubic from its roots in descending order.
pub fn make_cubic(e1: f64, e2: f64, e3: f64) -> Result<Cubic> {
    if !(e1.is_finite() && e2.is_finite() && e3.is_finite()) {
        return Err(Error::NonDistinctRoots(format!(
            "non-finite root in ({e1}, {e2}, {e3})"
        )));
    }
    let scale = e1.abs().max(e2.abs()).max(e3.abs()).max(f64::MIN_POSITIVE);
    let roots = [e1, e2, e3];
    for i in 0..3 {
        for j in (i + 1)..3 {
            if (roots[i] - roots[j]).abs() <= ROOT_TIE_TOLERANCE * scale {
                return Err(Error::NonDistinctRoots(format!(
                    "e{} = {} and e{} = {}",
                    i + 1,
                    roots[i],
                    j + 1,
                    roots[j]
                )));
            }
        }
    }
    if !(e1 > e2 && e2 > e3) {
        return Err(Error::UnorderedRoots(e1, e2, e3));
    }
    Ok(Cubic { e1, e2, e3 })
}

/// Residues `a1, a2, a3` of the first-order coefficient at `e1, e2, e3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentTriple {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl ExponentTriple {
    /// The classical Lamé exponents `(1/2, 1/2, 1/2)`.
    pub const LAME: ExponentTriple = ExponentTriple {
        a1: 0.5,
        a2: 0.5,
        a3: 0.5,
    };

    pub fn new(a1: f64, a2: f64, a3: f64) -> Result<Self> {
        for (index, value) in [a1, a2, a3].into_iter().enumerate() {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::NonPositiveExponent {
                    index: index + 1,
                    value,
                });
            }
        }
        Ok(Self { a1, a2, a3 })
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.a1, self.a2, self.a3]
    }

    pub fn sum(&self) -> f64 {
        self.a1 + self.a2 + self.a3
    }
}

impl Default for ExponentTriple {
    fn default() -> Self {
        Self::LAME
    }
}

/// Which roots carry a square-root factor in a Lamé solution
/// `prod (z - e_i)^{k_i} * S(z)`, each `k_i` being 0 or 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyKappa {
    halves: [bool; 3],
}

impl FamilyKappa {
    pub const fn from_halves(h1: bool, h2: bool, h3: bool) -> Self {
        Self {
            halves: [h1, h2, h3],
        }
    }

    pub fn new(k1: f64, k2: f64, k3: f64) -> Result<Self> {
        let half = |k: f64| {
            if k == 0.0 {
                Ok(false)
            } else if k == 0.5 {
                Ok(true)
            } else {
                Err(Error::BadKappa(k))
            }
        };
        Ok(Self {
            halves: [half(k1)?, half(k2)?, half(k3)?],
        })
    }

    /// All eight families, type 1 first.
    pub fn all() -> [FamilyKappa; 8] {
        let mut out = [Self::from_halves(false, false, false); 8];
        let mut idx = 0;
        for count in 0..=3 {
            for bits in 0u8..8 {
                if bits.count_ones() as usize == count {
                    out[idx] = Self::from_halves(bits & 1 != 0, bits & 2 != 0, bits & 4 != 0);
                    idx += 1;
                }
            }
        }
        out
    }

    /// The four families that exist for elliptic degree `n`.
    pub fn for_parity(n: usize) -> [FamilyKappa; 4] {
        let all = Self::all();
        let mut out = [all[0]; 4];
        let wanted = if n.is_multiple_of(2) { [0, 2] } else { [1, 3] };
        let mut idx = 0;
        for k in all {
            if wanted.contains(&k.half_count()) {
                out[idx] = k;
                idx += 1;
            }
        }
        out
    }

    pub fn values(&self) -> [f64; 3] {
        self.halves.map(|h| if h { 0.5 } else { 0.0 })
    }

    pub fn halves(&self) -> [bool; 3] {
        self.halves
    }

    pub fn half_count(&self) -> usize {
        self.halves.iter().filter(|h| **h).count()
    }

    pub fn sum(&self) -> f64 {
        0.5 * self.half_count() as f64
    }

    /// Classical type (species) 1-4: one plus the number of square roots.
    pub fn lame_type(&self) -> usize {
        self.half_count() + 1
    }
}

impl fmt::Display for FamilyKappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.halves.map(|h| if h { "1/2" } else { "0" });
        write!(f, "({},{},{})", s[0], s[1], s[2])
    }
}

/// `P(z) = alpha z^2 + beta z + gamma` in the shifted frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearCoefficient {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl LinearCoefficient {
    pub fn eval(&self, z: f64) -> f64 {
        (self.alpha * z + self.beta) * z + self.gamma
    }
}

/// Multiply `sum a_i / (z - e_i)` through by the shifted monic cubic.
pub fn linear_coefficient(c: &Cubic, a: &ExponentTriple) -> LinearCoefficient {
    let (r1, r3) = (c.upper(), c.lower());
    // shifted roots: r1, 0, r3
    LinearCoefficient {
        alpha: a.sum(),
        beta: -a.a1 * r3 - a.a2 * (r1 + r3) - a.a3 * r1,
        gamma: a.a2 * r1 * r3,
    }
}

/// Exponents seen by the polynomial part of a Lamé solution of family `k`.
pub fn effective_exponents(a: &ExponentTriple, k: &FamilyKappa) -> ExponentTriple {
    let [k1, k2, k3] = k.values();
    ExponentTriple {
        a1: a.a1 + 2.0 * k1,
        a2: a.a2 + 2.0 * k2,
        a3: a.a3 + 2.0 * k3,
    }
}
