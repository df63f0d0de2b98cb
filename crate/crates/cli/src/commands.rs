use std::fmt;
use std::io::Write;

use lame_spectral::complex::{scatter, ComplexCubic};
use lame_spectral::density::{heun_check, indicial_exponents, SingularPoint};
use lame_spectral::families::{family_spectrum, union_spectrum, verify_lame_residual};
use lame_spectral::measures::{empirical, histogram, ks_distance};
use lame_spectral::{
    make_cubic, rho, van_vleck_roots, Cubic, DensityModel, ExponentTriple, FamilyKappa, Formula,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{CompareArgs, ComplexArgs, DensityArgs, SpectrumArgs, VerifyArgs};
use crate::output::{fmt17, open_sink, write_csv};

#[derive(Debug)]
pub enum Failure {
    /// Bad input or an error from the library; exit code 2.
    Invalid(String),
    /// A verification check failed; exit code 1.
    Check(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 2,
            Failure::Check(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Invalid(m) | Failure::Check(m) => f.write_str(m),
        }
    }
}

impl From<lame_spectral::Error> for Failure {
    fn from(e: lame_spectral::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Invalid(format!("i/o error: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Invalid(format!("json error: {e}"))
    }
}

type Outcome = Result<(), Failure>;

fn triple<T: Copy>(values: &[T], what: &str) -> Result<[T; 3], Failure> {
    <[T; 3]>::try_from(values).map_err(|_| {
        Failure::Invalid(format!(
            "{what} needs exactly 3 values, got {}",
            values.len()
        ))
    })
}

fn parse_cubic(roots: &[f64]) -> Result<Cubic, Failure> {
    let mut r = triple(roots, "--roots")?;
    r.sort_by(|a, b| b.total_cmp(a));
    Ok(make_cubic(r[0], r[1], r[2])?)
}

fn parse_exponents(alpha: &[f64]) -> Result<ExponentTriple, Failure> {
    let [a1, a2, a3] = triple(alpha, "--alpha")?;
    Ok(ExponentTriple::new(a1, a2, a3)?)
}

pub fn spectrum(args: &SpectrumArgs) -> Outcome {
    let c = parse_cubic(&args.cubic.roots)?;
    let (header, rows): (String, Vec<Vec<String>>) = match (args.m, args.n) {
        (Some(m), _) => {
            let t = van_vleck_roots(&c, &parse_exponents(&args.alpha)?, m)?;
            let rows = t
                .iter()
                .enumerate()
                .map(|(i, x)| vec![i.to_string(), fmt17(*x)])
                .collect();
            ("index,t".to_string(), rows)
        }
        (None, Some(n)) => {
            let families = match &args.kappa {
                Some(k) => {
                    let [k1, k2, k3] = triple(k, "--kappa")?;
                    vec![family_spectrum(&c, n, &FamilyKappa::new(k1, k2, k3)?)?]
                }
                None => union_spectrum(&c, n)?,
            };
            let mut entries: Vec<(f64, f64, FamilyKappa)> = families
                .iter()
                .flat_map(|f| {
                    f.roots_t
                        .iter()
                        .zip(&f.roots_e)
                        .map(|(&t, &e)| (t, e, f.kappa))
                })
                .collect();
            entries.sort_by(|a, b| a.0.total_cmp(&b.0));
            let rows = entries
                .iter()
                .enumerate()
                .map(|(i, (t, e, k))| vec![i.to_string(), fmt17(*t), fmt17(*e), k.to_string()])
                .collect();
            (format!("index,t,energy,kappa; n={n}"), rows)
        }
        (None, None) => return Err(Failure::Invalid("spectrum needs --m or --n".into())),
    };
    let mut sink = open_sink(args.output.as_deref())?;
    write_csv(&mut sink, &header, &rows)?;
    Ok(())
}

/// `count` points over `[e3, e1]`; points near `e2` move to the edge of
/// the excluded neighborhood.
fn density_grid(c: &Cubic, count: usize, exclude: f64) -> Result<Vec<f64>, Failure> {
    if count < 2 {
        return Err(Failure::Invalid("--grid must be at least 2".into()));
    }
    if !(exclude > 0.0 && exclude < 0.5) {
        return Err(Failure::Invalid(format!(
            "--exclude must lie in (0, 0.5), got {exclude}"
        )));
    }
    let radius = exclude * c.span();
    Ok((0..count)
        .map(|k| {
            let s = c.e3() + c.span() * k as f64 / (count - 1) as f64;
            let d = s - c.e2();
            if d.abs() < radius {
                c.e2() + radius.copysign(d)
            } else {
                s
            }
        })
        .collect())
}

fn density_rows(c: &Cubic, grid: &[f64], formula: Formula) -> Result<Vec<Vec<String>>, Failure> {
    let dm = DensityModel::new(*c).with_formula(formula);
    let values = grid
        .par_iter()
        .map(|&s| rho(&dm, s, formula))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(grid
        .iter()
        .zip(values)
        .map(|(s, r)| vec![fmt17(*s), fmt17(r)])
        .collect())
}

pub fn density(args: &DensityArgs) -> Outcome {
    let c = parse_cubic(&args.cubic.roots)?;
    let grid = density_grid(&c, args.grid, args.exclude)?;
    let rows = density_rows(&c, &grid, args.formula)?;
    let mut sink = open_sink(args.output.as_deref())?;
    write_csv(
        &mut sink,
        &format!("s,rho; formula={}", args.formula),
        &rows,
    )?;
    Ok(())
}

#[derive(Serialize)]
struct CompareReport<'a> {
    config: &'a CompareArgs,
    m: usize,
    roots: usize,
    ks: f64,
    bins: usize,
    max_bin_error: f64,
    histogram_mass: f64,
}

pub fn compare(args: &CompareArgs) -> Outcome {
    let c = parse_cubic(&args.cubic.roots)?;
    let t = van_vleck_roots(&c, &parse_exponents(&args.alpha)?, args.m)?;
    let em = empirical(&t)?;
    let dm = DensityModel::new(c).with_formula(args.formula);
    let ks = ks_distance(&em, &dm)?;
    let bins = histogram(&em, args.bins, c.e3(), c.e1())?;
    let mut max_bin_error: f64 = 0.0;
    for b in &bins {
        let expected = (dm.cdf(b.right)? - dm.cdf(b.left)?) / (b.right - b.left);
        max_bin_error = max_bin_error.max((b.height - expected).abs());
    }
    let histogram_mass = bins.iter().map(|b| b.height * (b.right - b.left)).sum();

    if let Some(path) = &args.histogram {
        let rows: Vec<Vec<String>> = bins
            .iter()
            .map(|b| {
                vec![
                    fmt17(b.left),
                    fmt17(b.right),
                    b.count.to_string(),
                    fmt17(b.height),
                ]
            })
            .collect();
        write_csv(
            &mut open_sink(Some(path))?,
            "bin_left,bin_right,count,height",
            &rows,
        )?;
    }
    if let Some(path) = &args.density {
        let grid = density_grid(&c, args.grid, 1e-6)?;
        let rows = density_rows(&c, &grid, args.formula)?;
        write_csv(
            &mut open_sink(Some(path))?,
            &format!("s,rho; formula={}", args.formula),
            &rows,
        )?;
    }
    let report = CompareReport {
        config: args,
        m: args.m,
        roots: em.len(),
        ks,
        bins: bins.len(),
        max_bin_error,
        histogram_mass,
    };
    let mut sink = open_sink(args.report.as_deref())?;
    serde_json::to_writer_pretty(&mut sink, &report)?;
    writeln!(sink)?;
    sink.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct CheckResult {
    name: &'static str,
    value: f64,
    tolerance: f64,
    passed: bool,
}

impl CheckResult {
    fn new(name: &'static str, value: f64, tolerance: f64) -> Self {
        Self {
            name,
            value,
            tolerance,
            passed: value <= tolerance,
        }
    }
}

#[derive(Serialize)]
struct Indicial {
    e1: [f64; 2],
    e2: [f64; 2],
    e3: [f64; 2],
    infinity: [f64; 2],
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    config: &'a VerifyArgs,
    passed: bool,
    checks: Vec<CheckResult>,
    indicial: Indicial,
}

fn heun_sweep(dm: &DensityModel, points: usize, seed: u64) -> Result<f64, Failure> {
    let c = dm.cubic;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let margin = lame_spectral::density::HEUN_MIN_DISTANCE * c.span();
    let mut samples = Vec::with_capacity(points);
    while samples.len() < points {
        let s: f64 = rng.random_range(c.e3()..c.e1());
        if c.roots().iter().all(|e| (s - e).abs() > margin) {
            samples.push(s);
        }
    }
    let worst = samples
        .par_iter()
        .map(|&s| heun_check(dm, s).map(|h| h.relative()))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(worst)
}

fn equivalence_sweep(dm: &DensityModel, count: usize) -> Result<f64, Failure> {
    let c = dm.cubic;
    let span = c.span();
    let grid: Vec<f64> = (0..4 * count)
        .map(|k| c.e3() + span * (k as f64 + 0.5) / (4 * count) as f64)
        .filter(|s| c.roots().iter().all(|e| (s - e).abs() >= 0.01 * span))
        .step_by(4)
        .take(count)
        .collect();
    let worst = grid
        .par_iter()
        .map(|&s| {
            let vals = Formula::ALL
                .iter()
                .map(|&f| rho(dm, s, f))
                .collect::<Result<Vec<_>, _>>()?;
            let hi = vals.iter().cloned().fold(f64::MIN, f64::max);
            let lo = vals.iter().cloned().fold(f64::MAX, f64::min);
            Ok((hi - lo) / lo.abs())
        })
        .collect::<Result<Vec<f64>, lame_spectral::Error>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(worst)
}

fn lame_sweep(c: &Cubic, max_n: usize) -> Result<f64, Failure> {
    let mut jobs = Vec::new();
    for n in 0..=max_n {
        for fs in union_spectrum(c, n)? {
            for idx in 0..fs.count() {
                jobs.push((n, fs.kappa, idx));
            }
        }
    }
    let worst = jobs
        .par_iter()
        .map(|(n, k, idx)| verify_lame_residual(c, *n, k, *idx))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(worst)
}

pub fn verify(args: &VerifyArgs) -> Outcome {
    let c = parse_cubic(&args.cubic.roots)?;
    let dm = DensityModel::new(c);
    let pair = |p| {
        let (a, b) = indicial_exponents(&c, p);
        [a, b]
    };
    let indicial = Indicial {
        e1: pair(SingularPoint::E1),
        e2: pair(SingularPoint::E2),
        e3: pair(SingularPoint::E3),
        infinity: pair(SingularPoint::Infinity),
    };
    let indicial_dev = [indicial.e1, indicial.e2, indicial.e3]
        .iter()
        .flatten()
        .map(|x| x.abs())
        .chain([
            (indicial.infinity[0] - 0.5).abs(),
            (indicial.infinity[1] - 1.5).abs(),
        ])
        .fold(0.0, f64::max);

    let checks = vec![
        CheckResult::new(
            "heun_residual",
            heun_sweep(&dm, args.points, args.seed)?,
            args.heun_tol,
        ),
        CheckResult::new(
            "formula_equivalence",
            equivalence_sweep(&dm, args.grid)?,
            args.equivalence_tol,
        ),
        CheckResult::new(
            "normalization",
            (dm.cdf(c.e1())? - 1.0).abs(),
            args.normalization_tol,
        ),
        CheckResult::new("indicial_exponents", indicial_dev, args.indicial_tol),
        CheckResult::new(
            "lame_residuals",
            lame_sweep(&c, args.max_n)?,
            args.residual_tol,
        ),
    ];
    let passed = checks.iter().all(|ch| ch.passed);
    let failed: Vec<&str> = checks
        .iter()
        .filter(|ch| !ch.passed)
        .map(|ch| ch.name)
        .collect();
    let report = VerifyReport {
        config: args,
        passed,
        checks,
        indicial,
    };
    let mut sink = open_sink(args.report.as_deref())?;
    serde_json::to_writer_pretty(&mut sink, &report)?;
    writeln!(sink)?;
    sink.flush()?;
    if passed {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "failed checks: {}",
            failed.join(", ")
        )))
    }
}

fn parse_complex(s: &str) -> Result<Complex64, Failure> {
    s.parse::<Complex64>()
        .map_err(|_| Failure::Invalid(format!("cannot parse complex number '{s}', expected a+bi")))
}

pub fn complex(args: &ComplexArgs) -> Outcome {
    let roots = triple(
        &args.roots.iter().map(String::as_str).collect::<Vec<_>>(),
        "--roots",
    )?;
    let [z1, z2, z3] = [
        parse_complex(roots[0])?,
        parse_complex(roots[1])?,
        parse_complex(roots[2])?,
    ];
    let cc = ComplexCubic::new(z1, z2, z3)?;
    let sc = scatter(&cc, &parse_exponents(&args.alpha)?, args.n)?;
    let rows: Vec<Vec<String>> = sc
        .points
        .iter()
        .map(|z| vec![fmt17(z.re), fmt17(z.im)])
        .collect();
    let header = format!(
        "re,im; thickness={}, min_separation={}, max_residual={}",
        fmt17(sc.thickness),
        fmt17(sc.min_separation),
        fmt17(sc.max_residual)
    );
    let mut sink = open_sink(args.output.as_deref())?;
    write_csv(&mut sink, &header, &rows)?;
    Ok(())
}
