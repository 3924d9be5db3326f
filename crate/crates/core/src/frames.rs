//! Gabor frame operators as dense matrices, frame bounds, canonical duals,
//! Janssen's representation, condition (A), Wexler-Raz biorthogonality and
//! weak duality.
//!
//! The Janssen coefficients follow the convention
//! `S_{g,γ,Λ} = (|Λ|/N^d) Σ_{λ⁰∈Λ⁰} ⟨g, π(λ⁰)γ⟩ π(λ⁰)`, which is the one that
//! reproduces the direct frame operator `f ↦ Σ_λ ⟨f, π(λ)γ⟩ π(λ)g`.
//!
//! Everything here is stated for finite groups only. Statements about
//! absolute convergence of the weak-duality series belong to the continuous
//! theory and are not claimed.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupParams, PhaseSpacePoint, Twiddles, C64};
use crate::lattice::{adjoint_lattice, Lattice};
use crate::signal::Signal;
use crate::tfrepr::stft;
use crate::transform::tf_shift_flat;

/// Lower frame bounds at or below this value are treated as "not a frame".
pub const FRAME_THRESHOLD: f64 = 1e-10;

/// Largest `N^d` for which operators are materialized as matrices.
pub const MAX_MATRIX_DIM: usize = 4096;

/// An explicit `N^d × N^d` frame-type operator.
#[derive(Clone, Debug)]
pub struct FrameOperator {
    pub params: GroupParams,
    pub lattice: Lattice,
    pub window: Signal,
    /// Analysis window when it differs from `window`.
    pub dual: Option<Signal>,
    pub matrix: DMatrix<C64>,
    /// Set when the operator is Hermitian by construction (`γ = g`).
    pub hermitian: bool,
}

impl FrameOperator {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, f: &Signal) -> Result<Signal> {
        self.params.check_same(f.params())?;
        let v = &self.matrix * DVector::from_column_slice(f.values());
        Signal::new(self.params, v.as_slice().to_vec())
    }

    /// Frobenius norm of `self - other`.
    pub fn frobenius_distance(&self, other: &FrameOperator) -> Result<f64> {
        self.params.check_same(&other.params)?;
        Ok((&self.matrix - &other.matrix).norm())
    }

    /// Frobenius distance to the identity.
    pub fn identity_defect(&self) -> f64 {
        (&self.matrix - DMatrix::<C64>::identity(self.dim(), self.dim())).norm()
    }

    /// `max |S - S^H|` entrywise.
    pub fn hermitian_defect(&self) -> f64 {
        let adj = self.matrix.adjoint();
        self.matrix.iter().zip(adj.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm of the commutator `[S, π(z)]`.
    pub fn commutator_norm(&self, z: &PhaseSpacePoint) -> Result<f64> {
        let pi = tf_shift_matrix(&self.params, z.flat(&self.params));
        Ok((&self.matrix * &pi - &pi * &self.matrix).norm())
    }

    /// Largest commutator norm over all lattice points.
    pub fn max_lattice_commutator(&self) -> f64 {
        self.lattice
            .indices()
            .iter()
            .map(|&z| {
                let pi = tf_shift_matrix(&self.params, z);
                (&self.matrix * &pi - &pi * &self.matrix).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Row-major dump `row,col,re,im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col,re,im\n");
        for r in 0..self.dim() {
            for c in 0..self.dim() {
                let v = self.matrix[(r, c)];
                out.push_str(&format!("{r},{c},{:e},{:e}\n", v.re, v.im));
            }
        }
        out
    }
}

/// Matrix of `π(x, ω)` for the flat phase-space index `z`:
/// entry `(t, t - x)` is `exp(2πi ω·t / N)`.
pub fn tf_shift_matrix(p: &GroupParams, z: usize) -> DMatrix<C64> {
    let (x, w) = p.split(z);
    let tw = Twiddles::new(p.n());
    let m = p.size();
    let mut out = DMatrix::<C64>::zeros(m, m);
    for t in 0..m {
        out[(t, p.sub(t, x))] = tw.pos(p.dot(w, t));
    }
    out
}

fn check_matrix_dim(p: &GroupParams) -> Result<()> {
    if p.size() > MAX_MATRIX_DIM {
        return Err(Error::InvalidParams(format!(
            "N^d = {} exceeds the dense-matrix limit {MAX_MATRIX_DIM}; use apply_mixed_frame_operator",
            p.size()
        )));
    }
    Ok(())
}

fn ratio_f64(r: &Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Sum of rank-one terms `π(λ)g (π(λ)γ)^H` over the lattice.
fn assemble(g: &Signal, gamma: &Signal, lattice: &Lattice) -> DMatrix<C64> {
    let p = *g.params();
    let tw = Twiddles::new(p.n());
    let m = p.size();
    let mut out = DMatrix::<C64>::zeros(m, m);
    for &z in lattice.indices() {
        let (x, w) = p.split(z);
        let a = tf_shift_flat(g, x, w, &tw);
        let b = tf_shift_flat(gamma, x, w, &tw);
        for c in 0..m {
            let bc = b.values()[c].conj();
            for r in 0..m {
                out[(r, c)] += a.values()[r] * bc;
            }
        }
    }
    out
}

/// `S_{g,Λ} f = Σ_{λ∈Λ} ⟨f, π(λ)g⟩ π(λ)g`.
pub fn frame_operator(g: &Signal, lattice: &Lattice) -> Result<FrameOperator> {
    g.params().check_same(lattice.params())?;
    check_matrix_dim(g.params())?;
    Ok(FrameOperator {
        params: *g.params(),
        lattice: lattice.clone(),
        window: g.clone(),
        dual: None,
        matrix: assemble(g, g, lattice),
        hermitian: true,
    })
}

/// `S_{g,γ,Λ} f = Σ_{λ∈Λ} ⟨f, π(λ)γ⟩ π(λ)g`.
pub fn mixed_frame_operator(g: &Signal, gamma: &Signal, lattice: &Lattice) -> Result<FrameOperator> {
    g.params().check_same(gamma.params())?;
    g.params().check_same(lattice.params())?;
    check_matrix_dim(g.params())?;
    Ok(FrameOperator {
        params: *g.params(),
        lattice: lattice.clone(),
        window: g.clone(),
        dual: Some(gamma.clone()),
        matrix: assemble(g, gamma, lattice),
        hermitian: false,
    })
}

/// Matrix-free `S_{g,γ,Λ} f`, usable beyond [`MAX_MATRIX_DIM`].
pub fn apply_mixed_frame_operator(g: &Signal, gamma: &Signal, lattice: &Lattice, f: &Signal) -> Result<Signal> {
    for s in [gamma, f] {
        g.params().check_same(s.params())?;
    }
    g.params().check_same(lattice.params())?;
    let p = *g.params();
    let tw = Twiddles::new(p.n());
    let mut out = vec![C64::new(0.0, 0.0); p.size()];
    for &z in lattice.indices() {
        let (x, w) = p.split(z);
        let coeff = f.inner(&tf_shift_flat(gamma, x, w, &tw))?;
        let atom = tf_shift_flat(g, x, w, &tw);
        for (o, a) in out.iter_mut().zip(atom.values()) {
            *o += coeff * a;
        }
    }
    Signal::new(p, out)
}

/// Janssen's representation
/// `(|Λ|/N^d) Σ_{λ⁰∈Λ⁰} ⟨g, π(λ⁰)γ⟩ π(λ⁰)` as a matrix.
pub fn janssen_operator(g: &Signal, gamma: &Signal, lattice: &Lattice) -> Result<FrameOperator> {
    g.params().check_same(gamma.params())?;
    g.params().check_same(lattice.params())?;
    check_matrix_dim(g.params())?;
    let p = *g.params();
    let adjoint = adjoint_lattice(lattice);
    let coeffs = stft(g, gamma)?;
    let scale = ratio_f64(&lattice.inverse_covolume());
    let tw = Twiddles::new(p.n());
    let m = p.size();
    let mut out = DMatrix::<C64>::zeros(m, m);
    for &z in adjoint.indices() {
        let c = coeffs.at_flat(z) * scale;
        let (x, w) = p.split(z);
        for t in 0..m {
            out[(t, p.sub(t, x))] += c * tw.pos(p.dot(w, t));
        }
    }
    Ok(FrameOperator {
        params: p,
        lattice: lattice.clone(),
        window: g.clone(),
        dual: Some(gamma.clone()),
        matrix: out,
        hermitian: false,
    })
}

/// Optimal frame bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

impl FrameBounds {
    pub fn is_frame(&self) -> bool {
        self.lower > FRAME_THRESHOLD
    }

    pub fn condition_number(&self) -> f64 {
        self.upper / self.lower
    }
}

fn hermitian_part(m: &DMatrix<C64>) -> DMatrix<C64> {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Extreme eigenvalues of a Hermitian operator.
pub fn operator_bounds(op: &FrameOperator) -> Result<FrameBounds> {
    let h = hermitian_part(&op.matrix);
    let eig = SymmetricEigen::try_new(h, 1e-15, 100_000)
        .ok_or_else(|| Error::EigenSolver("Hermitian eigen-decomposition did not converge".into()))?;
    let vals = eig.eigenvalues;
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::EigenSolver("non-finite eigenvalue".into()));
    }
    Ok(FrameBounds { lower: vals.min(), upper: vals.max() })
}

/// `(A, B)`: smallest and largest eigenvalue of `S_{g,Λ}`.
pub fn frame_bounds(g: &Signal, lattice: &Lattice) -> Result<FrameBounds> {
    operator_bounds(&frame_operator(g, lattice)?)
}

/// Extreme eigenvalues by power iteration on `S` and on `B·I - S`, with
/// Rayleigh-quotient estimates. Independent of the eigen-decomposition.
pub fn power_iteration_bounds(op: &FrameOperator, max_iter: usize, tol: f64) -> FrameBounds {
    let h = hermitian_part(&op.matrix);
    let upper = dominant_eigenvalue(&h, max_iter, tol, 1);
    let shifted = DMatrix::<C64>::identity(h.nrows(), h.ncols()) * C64::new(upper, 0.0) - &h;
    let gap = dominant_eigenvalue(&shifted, max_iter, tol, 2);
    FrameBounds { lower: upper - gap, upper }
}

fn dominant_eigenvalue(m: &DMatrix<C64>, max_iter: usize, tol: f64, seed: u64) -> f64 {
    let n = m.nrows();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut v =
        DVector::<C64>::from_fn(n, |_, _| C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)));
    v /= C64::new(v.norm(), 0.0);
    let mut lambda = 0.0;
    for _ in 0..max_iter {
        let w = m * &v;
        let next = v.dotc(&w).re;
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        v = w / C64::new(norm, 0.0);
        let done = (next - lambda).abs() <= tol * next.abs().max(1.0);
        lambda = next;
        if done {
            break;
        }
    }
    lambda
}

/// `γ₀ = S_{g,Λ}^{-1} g` through a Cholesky factorization.
pub fn canonical_dual(g: &Signal, lattice: &Lattice) -> Result<Signal> {
    let op = frame_operator(g, lattice)?;
    let bounds = operator_bounds(&op)?;
    if !bounds.is_frame() {
        return Err(Error::NotAFrame { lower: bounds.lower, threshold: FRAME_THRESHOLD });
    }
    let chol = Cholesky::new(hermitian_part(&op.matrix))
        .ok_or_else(|| Error::EigenSolver("Cholesky factorization failed".into()))?;
    let sol = chol.solve(&DVector::from_column_slice(g.values()));
    Signal::new(*g.params(), sol.as_slice().to_vec())
}

/// `‖Σ_λ ⟨f, π(λ)g⟩ π(λ)γ - f‖₂ / ‖f‖₂`.
pub fn reconstruction_residual(g: &Signal, gamma: &Signal, lattice: &Lattice, f: &Signal) -> Result<f64> {
    let rec = apply_mixed_frame_operator(gamma, g, lattice, f)?;
    Ok((&rec - f).norm() / f.norm().max(f64::MIN_POSITIVE))
}

/// `Σ_{λ⁰∈Λ⁰} |⟨g, π(λ⁰)γ⟩|`.
pub fn condition_a(g: &Signal, gamma: &Signal, lattice: &Lattice) -> Result<f64> {
    g.params().check_same(gamma.params())?;
    g.params().check_same(lattice.params())?;
    let coeffs = stft(g, gamma)?;
    Ok(adjoint_lattice(lattice).indices().iter().map(|&z| coeffs.at_flat(z).norm()).sum())
}

/// Residual of the biorthogonality relation at one adjoint-lattice point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WexlerRazEntry {
    pub point: PhaseSpacePoint,
    pub residual: C64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    /// `(|Λ|/N^d) ⟨γ, π(λ⁰)g⟩ - δ_{0,λ⁰}` for every `λ⁰ ∈ Λ⁰`.
    pub wexler_raz_residuals: Vec<WexlerRazEntry>,
    /// Largest residual magnitude away from the origin.
    pub max_offdiag: f64,
    /// Residual magnitude at the origin.
    pub at_zero_deviation: f64,
    /// Present when probes were supplied.
    pub weak_duality_max_residual: Option<f64>,
    pub condition_a_value: f64,
}

impl DualityReport {
    /// Largest Wexler-Raz residual magnitude.
    pub fn max_residual(&self) -> f64 {
        self.max_offdiag.max(self.at_zero_deviation)
    }
}

/// Wexler-Raz residuals `(|Λ|/N^d) ⟨γ, π(λ⁰)g⟩ - δ_{0,λ⁰}` over `Λ⁰`.
pub fn wexler_raz_check(g: &Signal, gamma: &Signal, lattice: &Lattice) -> Result<DualityReport> {
    g.params().check_same(gamma.params())?;
    g.params().check_same(lattice.params())?;
    let p = *g.params();
    let coeffs = stft(gamma, g)?;
    let scale = ratio_f64(&lattice.inverse_covolume());
    let mut entries = Vec::new();
    let (mut max_offdiag, mut at_zero) = (0.0f64, 0.0f64);
    for &z in adjoint_lattice(lattice).indices() {
        let delta = if z == 0 { 1.0 } else { 0.0 };
        let residual = coeffs.at_flat(z) * scale - delta;
        if z == 0 {
            at_zero = residual.norm();
        } else {
            max_offdiag = max_offdiag.max(residual.norm());
        }
        entries.push(WexlerRazEntry { point: PhaseSpacePoint::from_flat(&p, z), residual });
    }
    Ok(DualityReport {
        wexler_raz_residuals: entries,
        max_offdiag,
        at_zero_deviation: at_zero,
        weak_duality_max_residual: None,
        condition_a_value: condition_a(g, gamma, lattice)?,
    })
}

/// Wexler-Raz report plus `max |⟨f,h⟩ - Σ_λ ⟨f,π(λ)γ⟩⟨π(λ)g,h⟩|` over the
/// probe pairs.
pub fn weak_duality_check(
    g: &Signal,
    gamma: &Signal,
    lattice: &Lattice,
    probes: &[(Signal, Signal)],
) -> Result<DualityReport> {
    if probes.is_empty() {
        return Err(Error::EmptyProbes);
    }
    let mut report = wexler_raz_check(g, gamma, lattice)?;
    let mut worst = 0.0f64;
    for (f, h) in probes {
        // ⟨f, π(λ)γ⟩ = V_γ f(λ) and ⟨π(λ)g, h⟩ = conj(V_g h(λ)).
        let vf = stft(f, gamma)?;
        let vh = stft(h, g)?;
        let series =
            lattice.indices().iter().fold(C64::new(0.0, 0.0), |acc, &z| acc + vf.at_flat(z) * vh.at_flat(z).conj());
        worst = worst.max((f.inner(h)? - series).norm());
    }
    report.weak_duality_max_residual = Some(worst);
    Ok(report)
}

/// Standard-basis probe pairs `(δ_s, δ_t)` for all `s, t`.
pub fn standard_basis_probes(p: &GroupParams) -> Vec<(Signal, Signal)> {
    let basis: Vec<Signal> = (0..p.size())
        .map(|k| {
            let mut v = vec![C64::new(0.0, 0.0); p.size()];
            v[k] = C64::new(1.0, 0.0);
            Signal::new(*p, v).expect("length matches")
        })
        .collect();
    let mut out = Vec::with_capacity(basis.len() * basis.len());
    for f in &basis {
        for h in &basis {
            out.push((f.clone(), h.clone()));
        }
    }
    out
}

/// `‖S_{g,γ,Λ} f - (|Λ|/N^d) S_{f,γ,Λ⁰} g‖₂`.
pub fn wexler_raz_identity_residual(f: &Signal, g: &Signal, gamma: &Signal, lattice: &Lattice) -> Result<f64> {
    let lhs = apply_mixed_frame_operator(g, gamma, lattice, f)?;
    let adjoint = adjoint_lattice(lattice);
    let rhs =
        apply_mixed_frame_operator(f, gamma, &adjoint, g)?.scale(C64::new(ratio_f64(&lattice.inverse_covolume()), 0.0));
    Ok((&lhs - &rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1(n: usize) -> GroupParams {
        GroupParams::new(n, 1).unwrap()
    }

    fn unit_random(p: GroupParams, seed: u64) -> Signal {
        let s = Signal::random(p, seed);
        s.scale(C64::new(1.0 / s.norm(), 0.0))
    }

    fn identity(m: usize) -> DMatrix<C64> {
        DMatrix::identity(m, m)
    }

    #[test]
    fn full_lattice_is_tight() {
        let p = p1(6);
        let g = unit_random(p, 1);
        let s = frame_operator(&g, &Lattice::full(p)).unwrap();
        assert!((&s.matrix - identity(6) * C64::new(6.0, 0.0)).norm() < 1e-12);
        let b = frame_bounds(&g, &Lattice::full(p)).unwrap();
        assert!((b.lower - 6.0).abs() < 1e-11 && (b.upper - 6.0).abs() < 1e-11);
        let dual = canonical_dual(&g, &Lattice::full(p)).unwrap();
        assert!(dual.max_abs_diff(&g.scale(C64::new(1.0 / 6.0, 0.0))) < 1e-13);
    }

    #[test]
    fn delta_window_all_frequencies() {
        let p = p1(4);
        let d0 = Signal::delta(p, &[0]).unwrap();
        let s = frame_operator(&d0, &Lattice::separable(p, 1, 1).unwrap()).unwrap();
        assert!((&s.matrix - identity(4) * C64::new(4.0, 0.0)).norm() < 1e-13);
        // a = 2: diagonal N·Σ_k |g(t - 2k)|², i.e. 4 on even t and 0 on odd t.
        let s2 = frame_operator(&d0, &Lattice::separable(p, 2, 1).unwrap()).unwrap();
        for t in 0..4 {
            let expect = if t % 2 == 0 { 4.0 } else { 0.0 };
            assert!((s2.matrix[(t, t)] - C64::new(expect, 0.0)).norm() < 1e-13);
        }
        assert!(s2.matrix.iter().enumerate().all(|(k, v)| k % 5 == 0 || v.norm() < 1e-13));
    }

    #[test]
    fn trivial_lattice_rank_one() {
        let p = p1(5);
        let g = unit_random(p, 3);
        let s = frame_operator(&g, &Lattice::trivial(p)).unwrap();
        let col = DVector::from_column_slice(g.values());
        assert!((&s.matrix - &col * col.adjoint()).norm() < 1e-14);
        let b = frame_bounds(&g, &Lattice::trivial(p)).unwrap();
        assert!(b.lower.abs() < 1e-12 && (b.upper - 1.0).abs() < 1e-12);
        assert!(matches!(canonical_dual(&g, &Lattice::trivial(p)), Err(Error::NotAFrame { .. })));
    }

    #[test]
    fn gaussian_frame_and_dual() {
        let p = p1(8);
        let g = Signal::gaussian(p);
        let l = Lattice::separable(p, 2, 2).unwrap();
        let op = frame_operator(&g, &l).unwrap();
        let eig = operator_bounds(&op).unwrap();
        let pow = power_iteration_bounds(&op, 200_000, 1e-15);
        assert!(eig.lower > 0.1 && eig.is_frame());
        assert!((eig.lower - pow.lower).abs() < 1e-8, "{eig:?} {pow:?}");
        assert!((eig.upper - pow.upper).abs() < 1e-8, "{eig:?} {pow:?}");
        let gamma = canonical_dual(&g, &l).unwrap();
        for seed in 0..5 {
            let f = Signal::random(p, 100 + seed);
            assert!(reconstruction_residual(&g, &gamma, &l, &f).unwrap() <= 1e-8);
        }
        assert!(mixed_frame_operator(&g, &gamma, &l).unwrap().identity_defect() <= 1e-8);
        let wr = wexler_raz_check(&g, &gamma, &l).unwrap();
        assert!(wr.max_residual() <= 1e-8);
        let weak = weak_duality_check(&g, &gamma, &l, &standard_basis_probes(&p)).unwrap();
        assert!(weak.weak_duality_max_residual.unwrap() <= 1e-8);
    }

    #[test]
    fn janssen_matches_direct() {
        for (n, lits) in [
            (8, vec!["N=8;gens=(2,0),(0,2)", "N=8;gens=(1,2),(0,4)", "N=8;gens=(4,0),(0,1)"]),
            (12, vec!["N=12;gens=(3,0),(0,4)", "N=12;gens=(1,5),(0,6)", "N=12;gens=(2,1)"]),
        ] {
            let p = p1(n);
            for (k, lit) in lits.iter().enumerate() {
                let l: Lattice = lit.parse().unwrap();
                let g = Signal::random(p, 10 + k as u64);
                let gamma = Signal::random(p, 20 + k as u64);
                let j = janssen_operator(&g, &gamma, &l).unwrap();
                let s = mixed_frame_operator(&g, &gamma, &l).unwrap();
                assert!(j.frobenius_distance(&s).unwrap() <= 1e-9, "{lit}");
            }
        }
    }

    #[test]
    fn janssen_full_lattice_scalar() {
        let p = p1(6);
        let (g, gamma) = (Signal::random(p, 1), Signal::random(p, 2));
        let j = janssen_operator(&g, &gamma, &Lattice::full(p)).unwrap();
        let expect = identity(6) * (g.inner(&gamma).unwrap() * 6.0);
        assert!((&j.matrix - expect).norm() < 1e-12);
    }

    #[test]
    fn frame_operator_commutes_with_lattice() {
        let p = p1(12);
        let l: Lattice = "N=12;gens=(2,3)".parse().unwrap();
        let op = frame_operator(&Signal::random(p, 4), &l).unwrap();
        assert!(op.max_lattice_commutator() <= 1e-9);
        assert!(op.hermitian_defect() <= 1e-12);
        // A point outside Λ generally does not commute.
        let off = PhaseSpacePoint::new(&p, &[1], &[0]).unwrap();
        assert!(op.commutator_norm(&off).unwrap() > 1e-3);
    }

    #[test]
    fn condition_a_examples() {
        let p = p1(8);
        let d0 = Signal::delta(p, &[0]).unwrap();
        for (a, b) in [(2, 4), (4, 2), (1, 8), (8, 1), (2, 2)] {
            let l = Lattice::separable(p, a, b).unwrap();
            // Λ⁰ = (N/b)ℤ × (N/a)ℤ and ⟨δ₀, π(x, ω)δ₀⟩ = δ_{x,0}, so the count is a.
            assert_eq!(condition_a(&d0, &d0, &l).unwrap(), a as f64);
        }
        let (g, gamma) = (Signal::random(p, 1), Signal::random(p, 2));
        let full = Lattice::full(p);
        assert!((condition_a(&g, &gamma, &full).unwrap() - g.inner(&gamma).unwrap().norm()).abs() < 1e-13);
        let l = Lattice::separable(p, 2, 4).unwrap();
        let base = condition_a(&g, &gamma, &l).unwrap();
        let scaled = condition_a(&g, &gamma.scale(C64::new(0.0, -3.0)), &l).unwrap();
        assert!((scaled - 3.0 * base).abs() < 1e-12 * base.max(1.0));
    }

    #[test]
    fn wexler_raz_examples() {
        let p = p1(8);
        let d0 = Signal::delta(p, &[0]).unwrap();
        let full = wexler_raz_check(&d0, &d0, &Lattice::full(p)).unwrap();
        assert_eq!(full.at_zero_deviation, 7.0);
        let l = Lattice::separable(p, 2, 2).unwrap();
        let z = wexler_raz_check(&Signal::random(p, 1), &Signal::zeros(p), &l).unwrap();
        assert_eq!(z.at_zero_deviation, 1.0);
        assert_eq!(z.max_offdiag, 0.0);
        let probes: Vec<_> = (0..4).map(|k| (Signal::random(p, k), Signal::random(p, 10 + k))).collect();
        let weak = weak_duality_check(&Signal::random(p, 1), &Signal::zeros(p), &l, &probes).unwrap();
        let expect = probes.iter().map(|(f, h)| f.inner(h).unwrap().norm()).fold(0.0, f64::max);
        assert_eq!(weak.weak_duality_max_residual.unwrap(), expect);
        assert!(matches!(weak_duality_check(&d0, &d0, &l, &[]), Err(Error::EmptyProbes)));
    }

    #[test]
    fn tight_normalized_identity() {
        let p = p1(8);
        let g = unit_random(p, 5);
        let gamma = g.scale(C64::new(1.0 / 8.0, 0.0));
        let full = Lattice::full(p);
        assert!(mixed_frame_operator(&g, &gamma, &full).unwrap().identity_defect() < 1e-12);
        let weak = weak_duality_check(&g, &gamma, &full, &standard_basis_probes(&p)).unwrap();
        assert!(weak.weak_duality_max_residual.unwrap() <= 1e-10);
    }

    #[test]
    fn wexler_raz_vector_identity() {
        let p = p1(12);
        for lit in ["N=12;gens=(3,0),(0,4)", "N=12;gens=(2,3)", "N=12;gens=(1,1),(0,6)"] {
            let l: Lattice = lit.parse().unwrap();
            let [f, g, gamma] = [1, 2, 3].map(|s| Signal::random(p, s));
            assert!(wexler_raz_identity_residual(&f, &g, &gamma, &l).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn matrix_free_matches_matrix() {
        let p = p1(10);
        let l = Lattice::separable(p, 2, 5).unwrap();
        let [f, g, gamma] = [1, 2, 3].map(|s| Signal::random(p, s));
        let a = mixed_frame_operator(&g, &gamma, &l).unwrap().apply(&f).unwrap();
        let b = apply_mixed_frame_operator(&g, &gamma, &l, &f).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
        let mismatch = Signal::random(p1(5), 1);
        assert!(frame_operator(&mismatch, &l).is_err());
    }

    #[test]
    fn csv_dump_shape() {
        let p = p1(2);
        let op = frame_operator(&Signal::delta(p, &[0]).unwrap(), &Lattice::full(p)).unwrap();
        let csv = op.to_csv();
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.starts_with("row,col,re,im\n"));
    }
}
