//! Executes the suites selected by a [`RunConfig`].
//!
//! Jobs run in parallel; entries are assembled in config order (suite, then
//! lattice, then trial), so reports do not depend on scheduling.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::config::{derived_seed, Mode, RunConfig, Suite};
use crate::error::{Error, Result};
use crate::figa::{figa_check, figa_rotated_check, figa_via_poisson, poisson_sum, rihaczek_sum, FigaReport};
use crate::frames::{
    canonical_dual, frame_operator, janssen_operator, mixed_frame_operator, operator_bounds, power_iteration_bounds,
    reconstruction_residual, standard_basis_probes, weak_duality_check, wexler_raz_identity_residual,
};
use crate::group::GroupParams;
use crate::lattice::Lattice;
use crate::norms::{
    amalgam_norm, amalgam_norm_stft, cg_bound_check, fourier_invariance_ratio, holder_check, main_bound_check,
    shift_invariance_ratio, InequalityReport, MixedNormSpec, NormContext, Partition, Weight,
};
use crate::report::{CheckEntry, Detail, FrameDetail, InequalityDetail, JanssenDetail, NormsDetail, RunReport};
use crate::sampled::{figa_truncated, rihaczek_truncated, ProductLattice, SampledSignal};
use crate::signal::{PhaseSpaceFunction, Signal};
use crate::tfrepr::stft;

/// Role offset of the random phase-space function of the Poisson suite.
const POISSON_ROLE: u64 = 8;

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub tolerance_scale: f64,
    /// Directory against which `file:` specs are resolved.
    pub base_dir: PathBuf,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { tolerance_scale: 1.0, base_dir: PathBuf::from(".") }
    }
}

/// Runs every selected suite. Errors inside a suite become failed entries;
/// only problems with the inputs themselves are returned as errors.
pub fn run(config: &RunConfig, opts: &RunOptions) -> Result<RunReport> {
    config.validate()?;
    if !(opts.tolerance_scale.is_finite() && opts.tolerance_scale > 0.0) {
        return Err(Error::Config(format!("tolerance scale must be positive, got {}", opts.tolerance_scale)));
    }
    let entries = match config.mode {
        Mode::Finite => run_finite(config, opts)?,
        Mode::Sampled => run_sampled(config, opts)?,
    };
    Ok(RunReport::new(config.clone(), opts.tolerance_scale, entries))
}

struct Job {
    suite: Suite,
    lattice: Option<usize>,
    trial: usize,
}

fn lattice_independent(s: Suite) -> bool {
    matches!(s, Suite::Norms | Suite::Holder | Suite::Cg | Suite::MainBound)
}

struct FiniteInputs<'a> {
    config: &'a RunConfig,
    p: GroupParams,
    signals: Vec<[Signal; 4]>,
    scale: f64,
}

fn run_finite(config: &RunConfig, opts: &RunOptions) -> Result<Vec<CheckEntry>> {
    let p = config.group.expect("validated");
    let specs = config.signals.resolved(config.mode);
    let signals = (0..config.trials)
        .map(|t| -> Result<[Signal; 4]> {
            let make = |k: usize| specs[k].finite(p, config.seed, k as u64, t as u64, &opts.base_dir);
            Ok([make(0)?, make(1)?, make(2)?, make(3)?])
        })
        .collect::<Result<Vec<_>>>()?;
    let inputs = FiniteInputs { config, p, signals, scale: opts.tolerance_scale };
    let mut jobs = Vec::new();
    for &suite in &config.suites {
        let lattices: Vec<Option<usize>> =
            if lattice_independent(suite) { vec![None] } else { (0..config.lattices.len()).map(Some).collect() };
        for lattice in lattices {
            for trial in 0..config.trials {
                jobs.push(Job { suite, lattice, trial });
            }
        }
    }
    let nested: Vec<Vec<CheckEntry>> = jobs.par_iter().map(|job| finite_job(&inputs, job)).collect();
    Ok(nested.into_iter().flatten().collect())
}

fn error_entry(suite: Suite, label: String, e: Error) -> CheckEntry {
    CheckEntry {
        suite: suite.name().into(),
        label,
        passed: false,
        metric: f64::NAN,
        tolerance: None,
        detail: Detail::Error { message: e.to_string() },
    }
}

fn residual_entry(suite: Suite, label: String, metric: f64, tol: f64, detail: Detail) -> CheckEntry {
    CheckEntry { suite: suite.name().into(), label, passed: metric <= tol, metric, tolerance: Some(tol), detail }
}

fn finite_job(inputs: &FiniteInputs, job: &Job) -> Vec<CheckEntry> {
    let cfg = inputs.config;
    let lattice = job.lattice.map(|i| &cfg.lattices[i]);
    let label = match lattice {
        Some(l) => format!("{} trial={}", l.literal(), job.trial),
        None => format!("trial={}", job.trial),
    };
    match finite_entries(inputs, job, lattice, &label) {
        Ok(v) => v,
        Err(e) => vec![error_entry(job.suite, label, e)],
    }
}

fn finite_entries(inputs: &FiniteInputs, job: &Job, lattice: Option<&Lattice>, label: &str) -> Result<Vec<CheckEntry>> {
    let cfg = inputs.config;
    let suite = job.suite;
    let [f1, f2, g1, g2] = &inputs.signals[job.trial];
    let tol = cfg.tolerance(suite, inputs.scale);
    let label = label.to_string();
    let need_lattice = || lattice.ok_or_else(|| Error::Config(format!("suite {suite} needs a lattice")));
    let figa_entry = |r: FigaReport, label: String| {
        let t = tol.expect("identity suites have tolerances");
        residual_entry(suite, label, r.rel_residual, t, Detail::Figa(r))
    };
    Ok(match suite {
        Suite::Figa => vec![figa_entry(figa_check(f1, f2, g1, g2, need_lattice()?)?, label)],
        Suite::Rotated => vec![figa_entry(figa_rotated_check(f1, f2, g1, g2, need_lattice()?)?, label)],
        Suite::Poisson => {
            let l = need_lattice()?;
            let seed = cfg.seed.ok_or_else(|| Error::Config("poisson needs a seed".into()))?;
            let big_f = PhaseSpaceFunction::random(inputs.p, derived_seed(seed, POISSON_ROLE, job.trial as u64));
            let direct = figa_check(f1, f2, g1, g2, l)?;
            let via = figa_via_poisson(f1, f2, g1, g2, l)?;
            let agreement = FigaReport::new(
                via.rhs,
                direct.rhs,
                via.rhs_terms,
                direct.rhs_terms,
                l.literal(),
                direct.covolume.clone(),
            );
            vec![
                figa_entry(poisson_sum(&big_f, l)?, format!("{label} random-F")),
                figa_entry(agreement, format!("{label} figa-rhs")),
            ]
        }
        Suite::Rihaczek => {
            let r = rihaczek_sum(f1, g1, need_lattice()?)?;
            let t = tol.expect("identity suites have tolerances");
            let scale = r.figa.lhs.norm().max(r.figa.rhs.norm()).max(crate::figa::REL_FLOOR);
            let metric = r.figa.rel_residual.max(r.route_residual / scale);
            vec![residual_entry(suite, label, metric, t, Detail::Rihaczek(r))]
        }
        Suite::Frames => {
            let l = need_lattice()?;
            let t = tol.expect("frames has a tolerance");
            let op = frame_operator(g1, l)?;
            let eig = operator_bounds(&op)?;
            let pow = power_iteration_bounds(&op, 100_000, 1e-14);
            let (recon, defect) = if eig.is_frame() {
                let gamma = canonical_dual(g1, l)?;
                (
                    Some(reconstruction_residual(g1, &gamma, l, f1)?),
                    Some(mixed_frame_operator(g1, &gamma, l)?.identity_defect()),
                )
            } else {
                (None, None)
            };
            let metric = match (recon, defect) {
                (Some(r), Some(d)) => r.max(d),
                _ => f64::INFINITY,
            };
            let detail = FrameDetail {
                lower: eig.lower,
                upper: eig.upper,
                power_lower: pow.lower,
                power_upper: pow.upper,
                is_frame: eig.is_frame(),
                reconstruction_residual: recon,
                dual_identity_defect: defect,
            };
            vec![residual_entry(suite, label, metric, t, Detail::Frame(detail))]
        }
        Suite::WexlerRaz => {
            let l = need_lattice()?;
            let t = tol.expect("wexler_raz has a tolerance");
            let gamma = canonical_dual(g1, l)?;
            let report = weak_duality_check(g1, &gamma, l, &standard_basis_probes(&inputs.p))?;
            let metric = report.max_residual().max(report.weak_duality_max_residual.unwrap_or(0.0));
            vec![residual_entry(suite, label, metric, t, Detail::Duality(report))]
        }
        Suite::Janssen => {
            let l = need_lattice()?;
            let t = tol.expect("janssen has a tolerance");
            let frobenius = janssen_operator(g1, g2, l)?.frobenius_distance(&mixed_frame_operator(g1, g2, l)?)?;
            let vector = wexler_raz_identity_residual(f1, g1, g2, l)?;
            let detail = JanssenDetail {
                frobenius,
                vector_identity_residual: vector,
                condition_a: crate::frames::condition_a(g1, g2, l)?,
            };
            vec![residual_entry(suite, label, frobenius.max(vector), t, Detail::Janssen(detail))]
        }
        Suite::Norms => vec![norms_entry(inputs, f1, g1, label)?],
        Suite::Holder | Suite::Cg | Suite::MainBound => vec![inequality_entry(inputs, suite, [f1, f2, g1, g2], label)?],
    })
}

fn norm_setup(inputs: &FiniteInputs) -> Result<(MixedNormSpec, NormContext)> {
    let n = &inputs.config.norms;
    let p = inputs.p;
    let spec = MixedNormSpec::new(n.p.0, n.q.0, Weight::polynomial(p, n.s)?)?;
    let mut ctx = NormContext::new(p, n.s)?;
    if let Some(step) = n.step {
        ctx = ctx.with_partition(Partition::new(p, step)?);
    }
    Ok((spec, ctx))
}

fn norms_entry(inputs: &FiniteInputs, f1: &Signal, g1: &Signal, label: String) -> Result<CheckEntry> {
    let t = inputs.config.tolerance(Suite::Norms, inputs.scale).expect("norms has a tolerance");
    let (spec, ctx) = norm_setup(inputs)?;
    let submult = ctx.v.submultiplicativity_constant()?;
    let moderate = spec.weight().moderateness_constant(&ctx.v)?;
    let shift = shift_invariance_ratio(f1, &spec, &ctx.v, &ctx.reference)?;
    let square = MixedNormSpec::new(spec.p(), spec.p(), spec.weight().clone())?;
    let fourier = fourier_invariance_ratio(f1, &square, &ctx.reference)?;
    let big_f = stft(f1, g1)?;
    let direct = amalgam_norm(&big_f, &spec, &ctx.partition)?;
    let via_stft = amalgam_norm_stft(&big_f, &spec, &ctx.partition)?;
    let route = (direct - via_stft).abs() / direct.max(via_stft).max(f64::MIN_POSITIVE);
    let metric = (shift - 1.0).max(fourier - 1.0).max(route).max(0.0);
    let detail = NormsDetail {
        submultiplicativity_constant: submult,
        moderateness_constant: moderate,
        shift_invariance_ratio: shift,
        fourier_invariance_ratio: fourier,
        amalgam_direct: direct,
        amalgam_stft: via_stft,
    };
    Ok(residual_entry(Suite::Norms, label, metric, t, Detail::Norms(detail)))
}

fn inequality_entry(inputs: &FiniteInputs, suite: Suite, sig: [&Signal; 4], label: String) -> Result<CheckEntry> {
    let [f1, f2, g1, g2] = sig;
    let (spec, ctx) = norm_setup(inputs)?;
    let report: InequalityReport = match suite {
        Suite::Holder => {
            let big_f = stft(f1, g1)?;
            let big_h = stft(f2, g2)?.conj();
            holder_check(&big_f, &big_h, &spec, &ctx.partition)?
        }
        Suite::Cg => cg_bound_check(f1, g1, &spec, &ctx)?,
        _ => main_bound_check(f1, f2, g1, g2, &spec, &ctx)?,
    };
    // Frozen empirical constants describe the seeded corpus, not arbitrary
    // inputs, so a bound is enforced only when the config supplies one.
    let (bound, source) = match inputs.config.tolerances.get(&suite) {
        Some(c) => (Some(c * inputs.scale), "config".to_string()),
        None => (None, "none".to_string()),
    };
    let passed = report.ratio.is_finite() && bound.is_none_or(|b| report.ratio <= b);
    Ok(CheckEntry {
        suite: suite.name().into(),
        label,
        passed,
        metric: report.ratio,
        tolerance: bound,
        detail: Detail::Inequality(InequalityDetail { report, constant_source: source }),
    })
}

fn run_sampled(config: &RunConfig, opts: &RunOptions) -> Result<Vec<CheckEntry>> {
    let grid = config.grid.expect("validated");
    let specs = config.signals.resolved(config.mode);
    let sig = specs
        .iter()
        .map(|s| s.sampled(grid.h, grid.half_width, &opts.base_dir))
        .collect::<Result<Vec<SampledSignal>>>()?;
    let mut jobs: Vec<(Suite, &ProductLattice)> = Vec::new();
    for &suite in &config.suites {
        for l in &config.product_lattices {
            jobs.push((suite, l));
        }
    }
    Ok(jobs
        .par_iter()
        .map(|&(suite, l)| {
            let tol = config.tolerance(suite, opts.tolerance_scale).expect("sampled suites have tolerances");
            let label = format!("{} h={} T={}", l.descriptor(), grid.h, grid.half_width);
            let result = match suite {
                Suite::Figa => figa_truncated(&sig[0], &sig[1], &sig[2], &sig[3], l, tol),
                _ => rihaczek_truncated(&sig[0], &sig[2], l, tol),
            };
            match result {
                Ok(r) => CheckEntry {
                    suite: suite.name().into(),
                    label,
                    passed: r.figa.rel_residual <= tol && !r.inconclusive,
                    metric: r.figa.rel_residual,
                    tolerance: Some(tol),
                    detail: Detail::Sampled(r),
                },
                Err(e) => error_entry(suite, label, e),
            }
        })
        .collect())
}

/// Directory of a config file, for resolving `file:` specs.
pub fn config_dir(path: &Path) -> PathBuf {
    path.parent().filter(|d| !d.as_os_str().is_empty()).map_or_else(|| PathBuf::from("."), Path::to_path_buf)
}
