//! Acceptance criteria, each evaluated at its stated tolerance. Every
//! criterion prints one `PASS`/`FAIL` line; the test fails if any does.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Stdio};
use std::time::Instant;

use tf_figa::figa::{figa_check, figa_via_poisson, poisson_sum};
use tf_figa::frames::{
    canonical_dual, frame_bounds, janssen_operator, mixed_frame_operator, reconstruction_residual, wexler_raz_check,
    wexler_raz_identity_residual,
};
use tf_figa::lattice::{adjoint_by_commutation, adjoint_lattice, all_subgroups, dual_lattice, rotate_j};
use tf_figa::norms::{
    empirical_constants, fourier_invariance_ratio, frozen_goldens, shift_invariance_ratio, MixedNormSpec, Weight,
    GOLDEN_CORPUS_SEED,
};
use tf_figa::sampled::{figa_truncated, ProductLattice, SampledSignal};
use tf_figa::tfrepr::{basic_identity_check, moyal_constant, moyal_inner, stft};
use tf_figa::transform::tf_shift;
use tf_figa::{GroupParams, Lattice, PhaseSpaceFunction, PhaseSpacePoint, Signal, C64};

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: String) -> Self {
        Self { passed, detail }
    }
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

fn p1(n: usize) -> GroupParams {
    GroupParams::new(n, 1).unwrap()
}

fn lattice(n: usize, gens: &[(usize, usize)]) -> Lattice {
    let p = p1(n);
    let pts: Vec<PhaseSpacePoint> = gens.iter().map(|&(x, w)| PhaseSpacePoint::new(&p, &[x], &[w]).unwrap()).collect();
    Lattice::from_generators(p, &pts).unwrap()
}

/// A subgroup of ℤ_N² is separable iff it is the product of its
/// intersections with the two axes.
fn is_separable(l: &Lattice) -> bool {
    let p = *l.params();
    let on_x = l.indices().iter().filter(|&&z| p.split(z).1 == 0).count();
    let on_w = l.indices().iter().filter(|&&z| p.split(z).0 == 0).count();
    on_x * on_w == l.cardinality()
}

fn quad(p: GroupParams, seed: u64) -> [Signal; 4] {
    [0, 1, 2, 3].map(|k| Signal::random(p, seed * 4 + k))
}

fn finite_figa() -> Outcome {
    let start = Instant::now();
    let mut lattices = Vec::new();
    for n in [4, 6, 8, 12, 16] {
        let h = n / 2;
        lattices.push(lattice(n, &[(2, 0), (0, h)]));
        lattices.push(lattice(n, &[(1, 1)]));
        lattices.push(lattice(n, &[(2, 1), (0, h)]));
        lattices.push(lattice(n, &[(1, 2 % n), (h, 0)]));
    }
    let non_separable = lattices.iter().filter(|l| !is_separable(l)).count();
    let per_lattice = 30;
    let mut worst = 0.0f64;
    let mut count = 0;
    for (i, l) in lattices.iter().enumerate() {
        for t in 0..per_lattice {
            let [f1, f2, g1, g2] = quad(*l.params(), (i * per_lattice + t) as u64);
            worst = worst.max(figa_check(&f1, &f2, &g1, &g2, l).unwrap().rel_residual);
            count += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(
        count >= 500 && lattices.len() >= 10 && non_separable >= 3 && worst <= 1e-10 && secs <= 60.0,
        format!(
            "{count} quadruples, {} lattices ({non_separable} non-separable), max rel {worst:.2e}, {secs:.1}s",
            lattices.len()
        ),
    )
}

fn poisson_all_subgroups() -> Outcome {
    let (mut worst_sum, mut worst_rhs, mut groups) = (0.0f64, 0.0f64, 0);
    for n in 2..=12 {
        for (i, l) in all_subgroups(p1(n)).unwrap().iter().enumerate() {
            let seed = (n * 1000 + i) as u64;
            let big_f = PhaseSpaceFunction::random(p1(n), seed);
            worst_sum = worst_sum.max(poisson_sum(&big_f, l).unwrap().rel_residual);
            let [f1, f2, g1, g2] = quad(p1(n), seed);
            let via = figa_via_poisson(&f1, &f2, &g1, &g2, l).unwrap();
            let direct = figa_check(&f1, &f2, &g1, &g2, l).unwrap();
            worst_rhs = worst_rhs.max(rel(via.rhs, direct.rhs));
            groups += 1;
        }
    }
    Outcome::new(
        worst_sum <= 1e-11 && worst_rhs <= 1e-11,
        format!("{groups} subgroups N<=12, max rel {worst_sum:.2e}, figa rhs agreement {worst_rhs:.2e}"),
    )
}

fn adjoint_characterizations() -> Outcome {
    let (mut groups, mut failures) = (0, 0);
    for n in 2..=8 {
        for l in all_subgroups(p1(n)).unwrap() {
            let by_char = adjoint_lattice(&l);
            let by_comm = adjoint_by_commutation(&l).unwrap();
            let by_dual = rotate_j(&dual_lattice(&l));
            let ok = by_char.indices() == by_comm.indices()
                && by_char.indices() == by_dual.indices()
                && l.cardinality() * by_char.cardinality() == n * n
                && adjoint_lattice(&by_char).indices() == l.indices();
            groups += 1;
            failures += usize::from(!ok);
        }
    }
    Outcome::new(failures == 0, format!("{groups} subgroups N<=8, {failures} mismatches"))
}

fn moyal_covariance_basic() -> Outcome {
    let shapes = [(2, 1), (3, 1), (4, 1), (5, 1), (6, 1), (8, 1), (12, 1), (3, 2), (4, 2)];
    let (mut moyal, mut constant, mut cov, mut basic) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (n, d) in shapes {
        let p = GroupParams::new(n, d).unwrap();
        let tw = |m: usize| C64::from_polar(1.0, -2.0 * PI * m as f64 / n as f64);
        for seed in 0..6u64 {
            let [f1, f2, g1, g2] = quad(p, 100 + seed);
            let (lhs, rhs) = moyal_inner(&f1, &g1, &f2, &g2).unwrap();
            moyal = moyal.max(rel(lhs, rhs));
            let v = stft(&f1, &g1).unwrap();
            let c = v.norm_sqr() / (f1.norm_sqr() * g1.norm_sqr());
            constant = constant.max((c - moyal_constant(&p)).abs() / p.size() as f64);
            basic = basic.max(basic_identity_check(&f1, &g1).unwrap() / (f1.norm() * g1.norm()));
            if seed < 2 {
                // V_g(π(y,η)f)(x,ω) = exp(-2πi (ω-η)·y / N) V_g f(x-y, ω-η)
                for z in 0..p.phase_size() {
                    let (y, e) = p.split(z);
                    let vs = stft(&tf_shift(&f1, &PhaseSpacePoint::from_flat(&p, z)).unwrap(), &g1).unwrap();
                    for u in 0..p.phase_size() {
                        let (x, w) = p.split(u);
                        let we = p.sub(w, e);
                        let expect = tw(p.dot(we, y)) * v.at_flat(p.join(p.sub(x, y), we));
                        cov = cov.max((vs.at_flat(u) - expect).norm() / (f1.norm() * g1.norm()));
                    }
                }
            }
        }
    }
    let worst = moyal.max(constant).max(cov).max(basic);
    Outcome::new(
        worst <= 1e-10,
        format!("moyal {moyal:.2e}, constant N^d {constant:.2e}, covariance {cov:.2e}, basic {basic:.2e}"),
    )
}

fn janssen_and_vector_identity() -> Outcome {
    let sizes = [4, 5, 6, 8, 9, 10, 12];
    let (mut frob, mut vector, mut cases) = (0.0f64, 0.0f64, 0);
    for i in 0..210u64 {
        let n = sizes[(i % sizes.len() as u64) as usize];
        let a = (i as usize * 7 + 1) % n;
        let b = (i as usize * 5 + 2) % n;
        let gens: Vec<(usize, usize)> = if i % 3 == 0 { vec![(a, b)] } else { vec![(a, b), (b % 3, n / 2)] };
        let l = lattice(n, &gens);
        let g = Signal::random(p1(n), 5000 + 3 * i);
        let gamma = Signal::random(p1(n), 5001 + 3 * i);
        let f = Signal::random(p1(n), 5002 + 3 * i);
        let direct = mixed_frame_operator(&g, &gamma, &l).unwrap();
        frob = frob.max(direct.frobenius_distance(&janssen_operator(&g, &gamma, &l).unwrap()).unwrap());
        vector = vector.max(wexler_raz_identity_residual(&f, &g, &gamma, &l).unwrap());
        cases += 1;
    }
    Outcome::new(
        cases >= 200 && frob <= 1e-9 && vector <= 1e-9,
        format!("{cases} cases N<=12, frobenius {frob:.2e}, vector identity {vector:.2e}"),
    )
}

fn duality() -> Outcome {
    let setups: Vec<(Lattice, Signal)> = vec![
        (Lattice::separable(p1(8), 2, 2).unwrap(), Signal::gaussian(p1(8))),
        (Lattice::separable(p1(12), 2, 3).unwrap(), Signal::gaussian(p1(12))),
        (Lattice::separable(p1(12), 3, 2).unwrap(), Signal::random(p1(12), 31)),
        (lattice(8, &[(1, 2), (0, 4)]), Signal::gaussian(p1(8))),
        (lattice(12, &[(1, 3), (0, 4)]), Signal::random(p1(12), 32)),
        (lattice(12, &[(2, 1), (0, 6)]), Signal::gaussian(p1(12))),
    ];
    let eps = 1e-3;
    let (mut wr, mut recon) = (0.0f64, 0.0f64);
    let (mut wr_pert, mut recon_pert) = (f64::INFINITY, f64::INFINITY);
    let mut frames = 0;
    for (i, (l, g)) in setups.iter().enumerate() {
        if !frame_bounds(g, l).unwrap().is_frame() {
            continue;
        }
        frames += 1;
        let p = *l.params();
        let f = Signal::random(p, 700 + i as u64);
        let dual = canonical_dual(g, l).unwrap();
        wr = wr.max(wexler_raz_check(g, &dual, l).unwrap().max_residual());
        recon = recon.max(reconstruction_residual(g, &dual, l, &f).unwrap());
        let h = Signal::random(p, 800 + i as u64);
        let step = eps * dual.norm() / h.norm();
        let perturbed = dual.zip_with(&h, |a, b| a + b * step).unwrap();
        wr_pert = wr_pert.min(wexler_raz_check(g, &perturbed, l).unwrap().max_residual());
        recon_pert = recon_pert.min(reconstruction_residual(g, &perturbed, l, &f).unwrap());
    }
    Outcome::new(
        frames == setups.len() && wr <= 1e-8 && recon <= 1e-8 && wr_pert > 1e-5 && recon_pert > 1e-5,
        format!(
            "{frames} frames, dual: WR {wr:.2e} recon {recon:.2e}; perturbed (eps=1e-3): WR >= {wr_pert:.2e} recon >= {recon_pert:.2e}"
        ),
    )
}

fn norm_goldens_and_invariance() -> Outcome {
    let frozen = frozen_goldens();
    let observed = empirical_constants(GOLDEN_CORPUS_SEED).unwrap();
    let mut drift = Vec::new();
    for g in &frozen {
        match observed.iter().find(|o| o.constant_name == g.constant_name) {
            Some(o) if g.admits(o.value, 1.05) => {}
            Some(o) => drift.push(format!("{}={:.4e} vs {:.4e}", g.constant_name, o.value, g.value)),
            None => drift.push(format!("{} missing", g.constant_name)),
        }
    }
    let (mut shift, mut fourier, mut cases) = (0.0f64, 0.0f64, 0);
    let exps = [1.0, 2.0, f64::INFINITY];
    for n in 2..=6 {
        let p = p1(n);
        let reference = Signal::gaussian(p);
        for s in [0.0, 1.0, 2.0] {
            let v = Weight::polynomial(p, s).unwrap();
            for (k, (&pe, &qe)) in exps.iter().flat_map(|a| exps.iter().map(move |b| (a, b))).enumerate() {
                let f = Signal::random(p, (n * 100 + k) as u64);
                let spec = MixedNormSpec::new(pe, qe, v.reciprocal()).unwrap();
                shift = shift.max(shift_invariance_ratio(&f, &spec, &v, &reference).unwrap());
                let square = MixedNormSpec::new(pe, pe, v.clone()).unwrap();
                fourier = fourier.max((fourier_invariance_ratio(&f, &square, &reference).unwrap() - 1.0).abs());
                cases += 1;
            }
        }
    }
    Outcome::new(
        drift.is_empty() && shift <= 1.0 + 1e-12 && fourier <= 1e-12,
        format!(
            "{} goldens within 1.05x{}; {cases} invariance cases N<=6: max shift ratio {shift:.6}, fourier |ratio-1| {fourier:.2e}",
            frozen.len(),
            if drift.is_empty() { String::new() } else { format!(" except [{}]", drift.join(", ")) }
        ),
    )
}

fn sampled_line() -> Outcome {
    let l = ProductLattice::new(1.0, 0.5, 6).unwrap();
    let mut residuals = Vec::new();
    let mut report = None;
    for h in [1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0] {
        let g = SampledSignal::gaussian(8.0, h).unwrap();
        let r = figa_truncated(&g, &g, &g, &g, &l, 1e-6).unwrap();
        residuals.push(r.figa.rel_residual);
        report = Some(r);
    }
    let r = report.unwrap();
    // Below this floor the residual is rounding noise and carries no order.
    let floor = 64.0 * f64::EPSILON;
    let monotone = residuals.windows(2).all(|w| w[1] <= w[0] || w[1] <= floor);
    // Off-grid lattice, where the discretization error is visible.
    let off = ProductLattice::new(0.7, 0.9, 6).unwrap();
    let off_res: Vec<f64> = [1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0]
        .iter()
        .map(|&h| {
            let g = SampledSignal::gaussian(8.0, h).unwrap();
            figa_truncated(&g, &g, &g, &g, &off, 1e-6).unwrap().figa.rel_residual
        })
        .collect();
    let off_strict = off_res.windows(2).all(|w| w[1] < w[0]);
    Outcome::new(
        r.figa.rel_residual <= 1e-6 && r.tail_bound <= 1e-9 && !r.inconclusive && monotone && off_strict,
        format!(
            "h=1/64 rel {:.2e}, tail {:.2e}; residuals over h=1/16,1/32,1/64: {:.2e} {:.2e} {:.2e} (floor {floor:.1e}); off-grid 0.7x0.9: {:.2e} {:.2e} {:.2e}",
            r.figa.rel_residual,
            r.tail_bound,
            residuals[0],
            residuals[1],
            residuals[2],
            off_res[0],
            off_res[1],
            off_res[2]
        ),
    )
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let configs = [
        r#"{"schema":1,"mode":"finite","group":{"n":12,"d":1},
 "lattices":["N=12;d=1;gens=(3,0),(0,4)","N=12;gens=(2,3)"],"seed":7,"trials":2,
 "suites":["figa","poisson","rihaczek","rotated","frames","wexler_raz","janssen","norms","holder","cg","main_bound"]}"#,
        r#"{"schema":1,"mode":"sampled","grid":{"h":0.03125,"T":8},
 "product_lattices":[{"alpha":1,"beta":0.5,"radius":6}],"suites":["figa","rihaczek"]}"#,
    ];
    let mut identical = 0;
    let mut runs = 0;
    for (i, body) in configs.iter().enumerate() {
        let cfg = dir.path().join(format!("c{i}.json"));
        std::fs::write(&cfg, body).unwrap();
        for format in ["json", "csv"] {
            let outputs: Vec<Vec<u8>> =
                (0..2).map(|k| run_cli(&cfg, format, &dir.path().join(format!("r{i}{k}")))).collect();
            runs += 1;
            identical += usize::from(!outputs[0].is_empty() && outputs[0] == outputs[1]);
        }
    }
    Outcome::new(identical == runs, format!("{identical}/{runs} config/format pairs byte-identical over two runs"))
}

fn run_cli(cfg: &Path, format: &str, report: &Path) -> Vec<u8> {
    let status = Command::new(env!("CARGO_BIN_EXE_tf-figa"))
        .args(["run", cfg.to_str().unwrap(), "--format", format, "--report", report.to_str().unwrap()])
        .stderr(Stdio::null())
        .status()
        .unwrap();
    if status.code() != Some(0) {
        return Vec::new();
    }
    std::fs::read(report).unwrap()
}

#[test]
fn acceptance_criteria() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("finite FIGA", finite_figa),
        ("Poisson summation over all subgroups", poisson_all_subgroups),
        ("adjoint lattice characterizations", adjoint_characterizations),
        ("Moyal, covariance, basic identity", moyal_covariance_basic),
        ("Janssen representation", janssen_and_vector_identity),
        ("Wexler-Raz and duality", duality),
        ("norm inequalities", norm_goldens_and_invariance),
        ("sampled-line FIGA", sampled_line),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = Vec::new();
    // Written past the harness capture so the lines show in plain `cargo test`.
    let mut out = std::io::stdout().lock();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        writeln!(out, "criterion {}: {tag} {name}: {}", i + 1, o.detail).unwrap();
        if !o.passed {
            failed.push(i + 1);
        }
    }
    out.flush().unwrap();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
