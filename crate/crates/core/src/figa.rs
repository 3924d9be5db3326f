//! Poisson summation over lattice/adjoint-lattice pairs and the fundamental
//! identity of Gabor analysis.
//!
//! Every check evaluates both sides through separate code paths and reports
//! them; nothing here asserts. Thresholds belong to callers.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::group::C64;
use crate::lattice::{adjoint_lattice, dual_lattice, rotate_j, Lattice};
use crate::signal::{PhaseSpaceFunction, Signal};
use crate::tfrepr::{rihaczek, rihaczek_constant, stft};
use crate::transform::{dft, symplectic_dft};

/// Floor in the relative-residual denominator.
pub const REL_FLOOR: f64 = 1e-300;

/// Both sides of a lattice-sum identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FigaReport {
    pub lhs: C64,
    pub rhs: C64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub lhs_terms: usize,
    pub rhs_terms: usize,
    pub lattice: String,
    /// Covolume used for the adjoint-side normalization, as `"p/q"` for
    /// finite lattices and a decimal for sampled product lattices.
    pub covolume: String,
}

impl FigaReport {
    pub fn new(lhs: C64, rhs: C64, lhs_terms: usize, rhs_terms: usize, lattice: String, covolume: String) -> Self {
        let abs_residual = (lhs - rhs).norm();
        let rel_residual = abs_residual / lhs.norm().max(rhs.norm()).max(REL_FLOOR);
        Self { lhs, rhs, abs_residual, rel_residual, lhs_terms, rhs_terms, lattice, covolume }
    }
}

pub fn format_ratio(r: &Ratio<u64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn scale_exact(sum: C64, r: &Ratio<u64>) -> C64 {
    sum * (*r.numer() as f64) / (*r.denom() as f64)
}

fn lattice_sum(values: &PhaseSpaceFunction, points: &[usize]) -> C64 {
    points.iter().fold(C64::new(0.0, 0.0), |acc, &z| acc + values.at_flat(z))
}

fn lattice_sum_product(a: &PhaseSpaceFunction, b: &PhaseSpaceFunction, points: &[usize]) -> C64 {
    points.iter().fold(C64::new(0.0, 0.0), |acc, &z| acc + a.at_flat(z) * b.at_flat(z).conj())
}

/// `Σ_{λ∈Λ} F(λ)` against `(|Λ|/N^d) Σ_{λ⁰∈Λ⁰} F̂ˢ(λ⁰)`.
pub fn poisson_sum(big_f: &PhaseSpaceFunction, lattice: &Lattice) -> Result<FigaReport> {
    big_f.params().check_same(lattice.params())?;
    let adjoint = adjoint_lattice(lattice);
    let lhs = lattice_sum(big_f, lattice.indices());
    let transformed = symplectic_dft(big_f);
    let rhs = scale_exact(lattice_sum(&transformed, adjoint.indices()), &lattice.inverse_covolume());
    Ok(FigaReport::new(
        lhs,
        rhs,
        lattice.cardinality(),
        adjoint.cardinality(),
        lattice.literal(),
        format_ratio(&lattice.covolume()),
    ))
}

/// `Σ_Λ V_{g1}f1 · conj(V_{g2}f2)` against
/// `(|Λ|/N^d) Σ_{Λ⁰} V_{g1}g2 · conj(V_{f1}f2)`, both evaluated directly.
pub fn figa_check(f1: &Signal, f2: &Signal, g1: &Signal, g2: &Signal, lattice: &Lattice) -> Result<FigaReport> {
    for s in [f2, g1, g2] {
        f1.params().check_same(s.params())?;
    }
    f1.params().check_same(lattice.params())?;
    let adjoint = adjoint_lattice(lattice);
    let lhs = lattice_sum_product(&stft(f1, g1)?, &stft(f2, g2)?, lattice.indices());
    let rhs_raw = lattice_sum_product(&stft(g2, g1)?, &stft(f2, f1)?, adjoint.indices());
    let rhs = scale_exact(rhs_raw, &lattice.inverse_covolume());
    Ok(FigaReport::new(
        lhs,
        rhs,
        lattice.cardinality(),
        adjoint.cardinality(),
        lattice.literal(),
        format_ratio(&lattice.covolume()),
    ))
}

/// Poisson summation applied to the FIGA integrand `V_{g1}f1 · conj(V_{g2}f2)`.
pub fn figa_via_poisson(f1: &Signal, f2: &Signal, g1: &Signal, g2: &Signal, lattice: &Lattice) -> Result<FigaReport> {
    let integrand = stft(f1, g1)?.product_conj(&stft(f2, g2)?)?;
    poisson_sum(&integrand, lattice)
}

/// Lattice sum of an STFT against the adjoint sum of its symplectic
/// transform, with the Rihaczek route reported alongside.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RihaczekSumReport {
    #[serde(flatten)]
    pub figa: FigaReport,
    /// `(|Λ|/N^d) κ_N Σ_{Λ⁰} R(f, g)`.
    pub rhs_rihaczek: C64,
    /// `|rhs - rhs_rihaczek|`.
    pub route_residual: f64,
}

pub fn rihaczek_sum(f: &Signal, g: &Signal, lattice: &Lattice) -> Result<RihaczekSumReport> {
    f.params().check_same(g.params())?;
    f.params().check_same(lattice.params())?;
    let p = *f.params();
    let adjoint = adjoint_lattice(lattice);
    let v = stft(f, g)?;
    let lhs = lattice_sum(&v, lattice.indices());
    let inv = lattice.inverse_covolume();
    let rhs = scale_exact(lattice_sum(&symplectic_dft(&v), adjoint.indices()), &inv);
    let r = rihaczek(f, g)?;
    let rhs_rihaczek = scale_exact(lattice_sum(&r, adjoint.indices()), &inv) * rihaczek_constant(&p);
    Ok(RihaczekSumReport {
        figa: FigaReport::new(
            lhs,
            rhs,
            lattice.cardinality(),
            adjoint.cardinality(),
            lattice.literal(),
            format_ratio(&lattice.covolume()),
        ),
        rhs_rihaczek,
        route_residual: (rhs - rhs_rihaczek).norm(),
    })
}

/// Fourier-rotated FIGA:
/// `Σ_{JΛ} V_{ĝ1}f̂1 · conj(V_{ĝ2}f̂2) = (|Λ|/N^d) Σ_{JΛ^⊥} V_{g1}g2 · conj(V_{f1}f2)`.
pub fn figa_rotated_check(f1: &Signal, f2: &Signal, g1: &Signal, g2: &Signal, lattice: &Lattice) -> Result<FigaReport> {
    for s in [f2, g1, g2] {
        f1.params().check_same(s.params())?;
    }
    f1.params().check_same(lattice.params())?;
    let rotated = rotate_j(lattice);
    let rotated_dual = rotate_j(&dual_lattice(lattice));
    let lhs = lattice_sum_product(&stft(&dft(f1), &dft(g1))?, &stft(&dft(f2), &dft(g2))?, rotated.indices());
    let rhs_raw = lattice_sum_product(&stft(g2, g1)?, &stft(f2, f1)?, rotated_dual.indices());
    let rhs = scale_exact(rhs_raw, &lattice.inverse_covolume());
    Ok(FigaReport::new(
        lhs,
        rhs,
        rotated.cardinality(),
        rotated_dual.cardinality(),
        lattice.literal(),
        format_ratio(&lattice.covolume()),
    ))
}
