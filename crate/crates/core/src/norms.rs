//! Weighted mixed norms on phase space, discrete modulation-space norms,
//! Wiener amalgam norms with local component FL¹, moderate weights, and the
//! inequality checks built from them.
//!
//! Weights are evaluated at symmetric representatives in `[-N/2, N/2)` so
//! that polynomial weights respect the geometry of the torus.
//!
//! The Hölder check uses the product form
//! `‖F·H‖_{W(FL¹,L¹)} ≤ C ‖F‖_{W(FL¹,L^{p,q}_m)} ‖H‖_{W(FL¹,L^{p',q'}_{1/m})}`
//! with two different functions, the form needed for products of STFTs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupParams, PhaseSpacePoint, Twiddles, C64};
use crate::signal::{PhaseSpaceFunction, Signal};
use crate::tfrepr::stft;
use crate::transform::{dft, dft_axes, tf_shift};

/// Largest phase-space size for the exhaustive pairwise weight certificates.
pub const MAX_CERTIFICATE_PHASE_SIZE: usize = 1 << 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightKind {
    Unit,
    /// `v_s(z) = (1 + |x|² + |ω|²)^(s/2)`.
    Polynomial {
        s: f64,
    },
    Custom,
}

/// Strictly positive function on phase space.
#[derive(Clone, Debug, PartialEq)]
pub struct Weight {
    params: GroupParams,
    values: Vec<f64>,
    kind: WeightKind,
}

impl Weight {
    pub fn unit(params: GroupParams) -> Self {
        Self { params, values: vec![1.0; params.phase_size()], kind: WeightKind::Unit }
    }

    pub fn polynomial(params: GroupParams, s: f64) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::InvalidParams(format!("weight exponent {s} is not finite")));
        }
        let d = params.d();
        let mut coords = vec![0; 2 * d];
        let values = (0..params.phase_size())
            .map(|z| {
                let (x, w) = params.split(z);
                params.unflatten_into(x, &mut coords[..d]);
                params.unflatten_into(w, &mut coords[d..]);
                let r2: f64 = coords
                    .iter()
                    .map(|&c| {
                        let v = params.symmetric(c) as f64;
                        v * v
                    })
                    .sum();
                (1.0 + r2).powf(s / 2.0)
            })
            .collect();
        Ok(Self { params, values, kind: WeightKind::Polynomial { s } })
    }

    pub fn custom(params: GroupParams, values: Vec<f64>) -> Result<Self> {
        if values.len() != params.phase_size() {
            return Err(Error::DimensionMismatch { expected: params.phase_size(), got: values.len() });
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidParams(format!("weight value {v} is not strictly positive")));
        }
        Ok(Self { params, values, kind: WeightKind::Custom })
    }

    pub fn params(&self) -> &GroupParams {
        &self.params
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn at_flat(&self, z: usize) -> f64 {
        self.values[z]
    }

    pub fn at(&self, z: &PhaseSpacePoint) -> f64 {
        self.values[z.flat(&self.params)]
    }

    /// `1/m`. For `v_s` this is `v_{-s}`.
    pub fn reciprocal(&self) -> Weight {
        let kind = match self.kind {
            WeightKind::Polynomial { s } => WeightKind::Polynomial { s: -s },
            ref k => k.clone(),
        };
        Weight { params: self.params, values: self.values.iter().map(|v| v.recip()).collect(), kind }
    }

    /// Smallest `C` with `v(z₁+z₂) ≤ C v(z₁) v(z₂)` for all pairs.
    pub fn submultiplicativity_constant(&self) -> Result<f64> {
        self.moderateness_constant(self)
    }

    /// Smallest `C` with `m(z₁+z₂) ≤ C m(z₁) v(z₂)` for all pairs, where
    /// `self` is `m`.
    pub fn moderateness_constant(&self, v: &Weight) -> Result<f64> {
        self.params.check_same(&v.params)?;
        let ps = self.params.phase_size();
        if ps > MAX_CERTIFICATE_PHASE_SIZE {
            return Err(Error::InvalidParams(format!(
                "phase-space size {ps} exceeds the certificate limit {MAX_CERTIFICATE_PHASE_SIZE}"
            )));
        }
        let p = self.params;
        let c = (0..ps)
            .into_par_iter()
            .map(|z1| {
                (0..ps)
                    .map(|z2| self.values[phase_add(&p, z1, z2)] / (self.values[z1] * v.values[z2]))
                    .fold(0.0, f64::max)
            })
            .collect::<Vec<_>>();
        Ok(c.into_iter().fold(0.0, f64::max))
    }
}

/// Sum of two flat phase-space indices.
pub fn phase_add(p: &GroupParams, a: usize, b: usize) -> usize {
    let (xa, wa) = p.split(a);
    let (xb, wb) = p.split(b);
    p.join(p.add(xa, xb), p.add(wa, wb))
}

fn check_exponent(e: f64) -> Result<()> {
    if e.is_nan() || e < 1.0 {
        return Err(Error::ExponentOutOfRange(e));
    }
    Ok(())
}

/// Hölder conjugate exponent.
pub fn conjugate_exponent(e: f64) -> f64 {
    if e == 1.0 {
        f64::INFINITY
    } else if e.is_infinite() {
        1.0
    } else {
        e / (e - 1.0)
    }
}

/// Exponents `p` (inner, over x) and `q` (outer, over ω) with a weight.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedNormSpec {
    p: f64,
    q: f64,
    weight: Weight,
}

impl MixedNormSpec {
    pub fn new(p: f64, q: f64, weight: Weight) -> Result<Self> {
        check_exponent(p)?;
        check_exponent(q)?;
        Ok(Self { p, q, weight })
    }

    /// `(1, 1, unit)`.
    pub fn l1(params: GroupParams) -> Self {
        Self { p: 1.0, q: 1.0, weight: Weight::unit(params) }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    /// `(p', q', 1/m)`.
    pub fn conjugate(&self) -> Self {
        Self { p: conjugate_exponent(self.p), q: conjugate_exponent(self.q), weight: self.weight.reciprocal() }
    }
}

/// `ℓ^e` norm of non-negative values; `∞` is the exact maximum.
fn lp(values: impl Iterator<Item = f64>, e: f64) -> f64 {
    if e.is_infinite() {
        values.fold(0.0, f64::max)
    } else if e == 1.0 {
        values.sum()
    } else if e == 2.0 {
        values.map(|v| v * v).sum::<f64>().sqrt()
    } else {
        values.map(|v| v.powf(e)).sum::<f64>().powf(e.recip())
    }
}

/// Mixed norm over an `nx × nw` array given as `value(x, ω)`.
fn mixed(nx: usize, nw: usize, p: f64, q: f64, value: impl Fn(usize, usize) -> f64) -> f64 {
    lp((0..nw).map(|w| lp((0..nx).map(|x| value(x, w)), p)), q)
}

/// `‖F‖_{ℓ^{p,q}_m} = ( Σ_ω ( Σ_x |F(x,ω) m(x,ω)|^p )^{q/p} )^{1/q}`.
pub fn mixed_norm(big_f: &PhaseSpaceFunction, spec: &MixedNormSpec) -> Result<f64> {
    let p = *big_f.params();
    p.check_same(spec.weight.params())?;
    let s = p.size();
    Ok(mixed(s, s, spec.p, spec.q, |x, w| {
        let z = p.join(x, w);
        big_f.at_flat(z).norm() * spec.weight.at_flat(z)
    }))
}

/// `‖f‖_{M^{p,q}_m} = ‖V_g f‖_{ℓ^{p,q}_m}`.
pub fn modulation_norm(f: &Signal, spec: &MixedNormSpec, window: &Signal) -> Result<f64> {
    if window.is_zero() {
        return Err(Error::ZeroWindow);
    }
    mixed_norm(&stft(f, window)?, spec)
}

/// Triangle partition of unity on phase space with step `r | N`:
/// `u(z) = Π_j max(0, 1 - |z_j|/r)` over all `2d` coordinates, so that
/// `Σ_{k ∈ (rℤ_N)^{2d}} u(z - k) = 1` up to rounding of the fractions `j/r`.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    params: GroupParams,
    step: usize,
    bump: Vec<f64>,
}

impl Partition {
    pub fn new(params: GroupParams, step: usize) -> Result<Self> {
        let n = params.n();
        if step == 0 || !n.is_multiple_of(step) {
            return Err(Error::StepDoesNotDivide { step, n });
        }
        if step > 1 && 2 * step > n {
            return Err(Error::InvalidParams(format!("partition step {step} must be 1 or at most N/2 = {}", n / 2)));
        }
        let d = params.d();
        let r = step as f64;
        let mut coords = vec![0; 2 * d];
        let bump = (0..params.phase_size())
            .map(|z| {
                let (x, w) = params.split(z);
                params.unflatten_into(x, &mut coords[..d]);
                params.unflatten_into(w, &mut coords[d..]);
                coords.iter().map(|&c| (1.0 - params.symmetric(c).unsigned_abs() as f64 / r).max(0.0)).product()
            })
            .collect();
        Ok(Self { params, step, bump })
    }

    /// Smallest divisor of `N` above 1 when it is at most `N/2`, else 1.
    pub fn default_for(params: GroupParams) -> Self {
        let n = params.n();
        let step = (2..=n / 2).find(|&r| n.is_multiple_of(r)).unwrap_or(1);
        Self::new(params, step).expect("step divides N")
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn bump(&self) -> &[f64] {
        &self.bump
    }

    fn coarse(&self) -> usize {
        self.params.n() / self.step
    }

    /// Fine flat index of the coarse grid point with coarse flat index `k`.
    fn coarse_point(&self, k: usize) -> usize {
        let p = &self.params;
        let m = self.coarse();
        let rank = 2 * p.d();
        let mut digits = vec![0; rank];
        let mut rest = k;
        for slot in digits.iter_mut().rev() {
            *slot = (rest % m) * self.step;
            rest /= m;
        }
        digits.iter().fold(0, |acc, &c| acc * p.n() + c)
    }

    /// Bump translated to the coarse point `k`, as a function of `z`.
    #[inline]
    fn translated(&self, k_fine: usize, z: usize) -> f64 {
        let p = &self.params;
        let (kx, kw) = p.split(k_fine);
        let (x, w) = p.split(z);
        self.bump[p.join(p.sub(x, kx), p.sub(w, kw))]
    }

    /// `max_z |Σ_k u(z - k) - 1|`.
    pub fn unity_defect(&self) -> f64 {
        let count = self.coarse().pow(2 * self.params.d() as u32);
        (0..self.params.phase_size())
            .map(|z| {
                let s: f64 = (0..count).map(|k| self.translated(self.coarse_point(k), z)).sum();
                (s - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Weighted mixed norm of per-position local norms over the coarse grid.
    fn global(&self, local: &[f64], spec: &MixedNormSpec) -> f64 {
        let m = self.coarse().pow(self.params.d() as u32);
        mixed(m, m, spec.p, spec.q, |x, w| {
            let k = x * m + w;
            local[k] * spec.weight.at_flat(self.coarse_point(k))
        })
    }
}

/// `‖h‖_{FL¹} = Σ_ξ |ĥ(ξ)|` with `ĥ(ξ) = N^(-2d) Σ_z h(z) exp(-2πi ξ·z / N)`.
pub fn fourier_l1(h: &PhaseSpaceFunction) -> f64 {
    let p = *h.params();
    let mut buf = h.values().to_vec();
    let tw = Twiddles::new(p.n());
    dft_axes(&mut buf, p.n(), 2 * p.d(), 0..2 * p.d(), false, &tw);
    buf.iter().map(|v| v.norm()).sum::<f64>() / p.phase_size() as f64
}

/// `‖F‖_{W(FL¹, ℓ^{p,q}_m)}`: FL¹ norms of the localized pieces `F · T_k u`,
/// combined by the weighted mixed norm over the coarse grid.
pub fn amalgam_norm(big_f: &PhaseSpaceFunction, spec: &MixedNormSpec, partition: &Partition) -> Result<f64> {
    let p = *big_f.params();
    p.check_same(&partition.params)?;
    p.check_same(spec.weight.params())?;
    let count = partition.coarse().pow(2 * p.d() as u32);
    let local: Vec<f64> = (0..count)
        .map(|k| {
            let kf = partition.coarse_point(k);
            let piece = PhaseSpaceFunction::from_fn(p, |z| big_f.at_flat(z) * partition.translated(kf, z));
            fourier_l1(&piece)
        })
        .collect();
    Ok(partition.global(&local, spec))
}

/// [`amalgam_norm`] evaluated through the STFT of `F` on phase space with
/// window `u`: local norm at `k` is `N^(-2d) Σ_ξ |V_u F(k, ξ)|`, each
/// coefficient a direct sum over `z`.
pub fn amalgam_norm_stft(big_f: &PhaseSpaceFunction, spec: &MixedNormSpec, partition: &Partition) -> Result<f64> {
    let p = *big_f.params();
    p.check_same(&partition.params)?;
    p.check_same(spec.weight.params())?;
    let ps = p.phase_size();
    let tw = Twiddles::new(p.n());
    let count = partition.coarse().pow(2 * p.d() as u32);
    let local: Vec<f64> = (0..count)
        .map(|k| {
            let kf = partition.coarse_point(k);
            let mass: f64 = (0..ps)
                .map(|xi| {
                    let (xi_x, xi_w) = p.split(xi);
                    (0..ps)
                        .fold(C64::new(0.0, 0.0), |acc, z| {
                            let u = partition.translated(kf, z);
                            if u == 0.0 {
                                return acc;
                            }
                            let (x, w) = p.split(z);
                            let phase = (p.dot(xi_x, x) + p.dot(xi_w, w)) % p.n();
                            acc + big_f.at_flat(z) * u * tw.neg(phase)
                        })
                        .norm()
                })
                .sum();
            mass / ps as f64
        })
        .collect();
    Ok(partition.global(&local, spec))
}

/// Both sides of an inequality `lhs ≤ C·rhs` and their ratio.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs`; 0 when both vanish, `∞` when only `rhs` does.
    #[serde(with = "crate::serde_ext")]
    pub ratio: f64,
}

impl InequalityReport {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        let ratio = if lhs == 0.0 {
            0.0
        } else if rhs == 0.0 {
            f64::INFINITY
        } else {
            lhs / rhs
        };
        Self { lhs, rhs, ratio }
    }
}

/// Reference window, partition of unity and submultiplicative weight shared
/// by the modulation and amalgam norm checks.
#[derive(Clone, Debug, PartialEq)]
pub struct NormContext {
    pub reference: Signal,
    pub partition: Partition,
    pub v: Weight,
}

impl NormContext {
    /// Periodized Gaussian reference, default partition, `v = v_s`.
    pub fn new(params: GroupParams, s: f64) -> Result<Self> {
        Ok(Self {
            reference: Signal::gaussian(params),
            partition: Partition::default_for(params),
            v: Weight::polynomial(params, s)?,
        })
    }

    pub fn with_partition(mut self, partition: Partition) -> Self {
        self.partition = partition;
        self
    }

    fn m1_v(&self) -> MixedNormSpec {
        MixedNormSpec { p: 1.0, q: 1.0, weight: self.v.clone() }
    }
}

/// `‖F·H‖_{W(FL¹,L¹)}` against `‖F‖_{W(FL¹,L^{p,q}_m)} ‖H‖_{W(FL¹,L^{p',q'}_{1/m})}`.
pub fn holder_check(
    big_f: &PhaseSpaceFunction,
    big_h: &PhaseSpaceFunction,
    spec: &MixedNormSpec,
    partition: &Partition,
) -> Result<InequalityReport> {
    let p = *big_f.params();
    let lhs = amalgam_norm(&big_f.product(big_h)?, &MixedNormSpec::l1(p), partition)?;
    let rhs = amalgam_norm(big_f, spec, partition)? * amalgam_norm(big_h, &spec.conjugate(), partition)?;
    Ok(InequalityReport::new(lhs, rhs))
}

/// `‖V_g f‖_{W(FL¹,L^{p,q}_m)}` against `‖f‖_{M^{p,q}_m} ‖g‖_{M¹_v}`.
pub fn cg_bound_check(f: &Signal, g: &Signal, spec: &MixedNormSpec, ctx: &NormContext) -> Result<InequalityReport> {
    if g.is_zero() {
        return Err(Error::ZeroWindow);
    }
    let lhs = amalgam_norm(&stft(f, g)?, spec, &ctx.partition)?;
    let rhs = modulation_norm(f, spec, &ctx.reference)? * modulation_norm(g, &ctx.m1_v(), &ctx.reference)?;
    Ok(InequalityReport::new(lhs, rhs))
}

/// `‖V_{g1}f1 · conj(V_{g2}f2)‖_{W(FL¹,L¹)}` against
/// `‖f1‖_{M^{p,q}_m} ‖f2‖_{M^{p',q'}_{1/m}} ‖g1‖_{M¹_v} ‖g2‖_{M¹_v}`.
pub fn main_bound_check(
    f1: &Signal,
    f2: &Signal,
    g1: &Signal,
    g2: &Signal,
    spec: &MixedNormSpec,
    ctx: &NormContext,
) -> Result<InequalityReport> {
    if g1.is_zero() || g2.is_zero() {
        return Err(Error::ZeroWindow);
    }
    let p = *f1.params();
    let product = stft(f1, g1)?.product_conj(&stft(f2, g2)?)?;
    let lhs = amalgam_norm(&product, &MixedNormSpec::l1(p), &ctx.partition)?;
    let reference = &ctx.reference;
    let m1 = ctx.m1_v();
    let rhs = modulation_norm(f1, spec, reference)?
        * modulation_norm(f2, &spec.conjugate(), reference)?
        * modulation_norm(g1, &m1, reference)?
        * modulation_norm(g2, &m1, reference)?;
    Ok(InequalityReport::new(lhs, rhs))
}

/// `max_z ‖π(z)f‖_{M^{p,q}_m} / (C v(z) ‖f‖_{M^{p,q}_m})` over all of phase
/// space, with `C` the moderateness constant of `m` with respect to `v`.
pub fn shift_invariance_ratio(f: &Signal, spec: &MixedNormSpec, v: &Weight, reference: &Signal) -> Result<f64> {
    let p = *f.params();
    let c = spec.weight.moderateness_constant(v)?;
    let base = modulation_norm(f, spec, reference)?;
    let mut worst = 0.0f64;
    for z in 0..p.phase_size() {
        let shifted = tf_shift(f, &PhaseSpacePoint::from_flat(&p, z))?;
        let r = InequalityReport::new(modulation_norm(&shifted, spec, reference)?, c * v.at_flat(z) * base);
        worst = worst.max(r.ratio);
    }
    Ok(worst)
}

/// `‖f̂‖_{M^{p,q}_m} / ‖f‖_{M^{p,q}_m}`.
pub fn fourier_invariance_ratio(f: &Signal, spec: &MixedNormSpec, reference: &Signal) -> Result<f64> {
    Ok(InequalityReport::new(modulation_norm(&dft(f), spec, reference)?, modulation_norm(f, spec, reference)?).ratio)
}

/// An empirical constant frozen from a seeded corpus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoldenConstant {
    pub constant_name: String,
    pub value: f64,
    pub corpus_seed: u64,
    pub corpus_size: usize,
}

impl GoldenConstant {
    /// Constants named `*_min_ratio` bound a ratio from below.
    pub fn is_lower_bound(&self) -> bool {
        self.constant_name.ends_with("_min_ratio")
    }

    /// Whether `observed` stays within `slack` (e.g. 1.05) of the frozen value.
    pub fn admits(&self, observed: f64, slack: f64) -> bool {
        if self.is_lower_bound() {
            observed >= self.value / slack
        } else {
            observed <= self.value * slack
        }
    }
}

pub fn load_goldens(json: &str) -> Result<Vec<GoldenConstant>> {
    serde_json::from_str(json).map_err(|e| Error::Config(format!("golden constants: {e}")))
}

/// Frozen constants shipped with the crate.
pub const GOLDENS_JSON: &str = include_str!("../goldens/norm_constants.json");

pub fn frozen_goldens() -> Vec<GoldenConstant> {
    load_goldens(GOLDENS_JSON).expect("shipped golden file parses")
}

/// Seed of the corpus the shipped constants were frozen from.
pub const GOLDEN_CORPUS_SEED: u64 = 1;

/// Modulus of the corpus group.
pub const CORPUS_N: usize = 8;
/// Corpus size per constant.
pub const CORPUS_SIZE: usize = 100;
/// Pairs in the Hölder corpus.
pub const HOLDER_CORPUS_SIZE: usize = 200;

/// Seed of the second window in the window-equivalence corpus.
pub const COMPARISON_WINDOW_SEED: u64 = 7;

fn item_seed(base: u64, item: usize, slot: u64) -> u64 {
    base.wrapping_mul(1_000_003).wrapping_add(item as u64 * 16 + slot)
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn min_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(f64::INFINITY, f64::min)
}

/// Recomputes every frozen constant on the corpus with the given seed.
///
/// Corpus: `N = 8`, `d = 1`, partition step 2, periodized Gaussian reference,
/// `v = v_1`.
/// Items are evaluated in parallel and reduced in index order.
pub fn empirical_constants(seed: u64) -> Result<Vec<GoldenConstant>> {
    let p = GroupParams::new(CORPUS_N, 1)?;
    let ctx = NormContext::new(p, 1.0)?;
    let exps = [1.0, 2.0, f64::INFINITY];
    let mut out = Vec::new();
    let mut push = |name: &str, value: f64, size: usize| {
        out.push(GoldenConstant { constant_name: name.to_string(), value, corpus_seed: seed, corpus_size: size })
    };

    let v1 = Weight::polynomial(p, 1.0)?;
    let holder: Vec<f64> = (0..HOLDER_CORPUS_SIZE)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let f = PhaseSpaceFunction::random(p, item_seed(seed, i, 0));
            let h = PhaseSpaceFunction::random(p, item_seed(seed, i, 1));
            let mut worst = 0.0f64;
            for &pe in &exps {
                for &qe in &exps {
                    let spec = MixedNormSpec::new(pe, qe, v1.clone())?;
                    worst = worst.max(holder_check(&f, &h, &spec, &ctx.partition)?.ratio);
                }
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    push("holder_max_ratio", max_of(holder), HOLDER_CORPUS_SIZE);

    let cg_spec = MixedNormSpec::new(2.0, 1.0, v1.clone())?;
    let cg: Vec<f64> = (0..CORPUS_SIZE)
        .into_par_iter()
        .map(|i| {
            let f = Signal::random(p, item_seed(seed, i, 2));
            let g = Signal::random(p, item_seed(seed, i, 3));
            cg_bound_check(&f, &g, &cg_spec, &ctx).map(|r| r.ratio)
        })
        .collect::<Result<_>>()?;
    push("cg_max_ratio", max_of(cg), CORPUS_SIZE);

    for s in [0u32, 1, 2] {
        let ctx_s = NormContext::new(p, s as f64)?;
        let spec = MixedNormSpec::new(1.0, 2.0, Weight::polynomial(p, s as f64)?)?;
        let ratios: Vec<f64> = (0..CORPUS_SIZE)
            .into_par_iter()
            .map(|i| {
                let [f1, f2, g1, g2] = [4, 5, 6, 7].map(|k| Signal::random(p, item_seed(seed, i, k)));
                main_bound_check(&f1, &f2, &g1, &g2, &spec, &ctx_s).map(|r| r.ratio)
            })
            .collect::<Result<_>>()?;
        push(&format!("main_bound_s{s}_max_ratio"), max_of(ratios), CORPUS_SIZE);
    }

    let l1 = MixedNormSpec::l1(p);
    let other_window = Signal::random(p, COMPARISON_WINDOW_SEED);
    let windows: Vec<f64> = (0..CORPUS_SIZE)
        .into_par_iter()
        .map(|i| {
            let f = Signal::random(p, item_seed(seed, i, 9));
            Ok(modulation_norm(&f, &l1, &ctx.reference)? / modulation_norm(&f, &l1, &other_window)?)
        })
        .collect::<Result<_>>()?;
    push("window_equivalence_max_ratio", max_of(windows.iter().copied()), CORPUS_SIZE);
    push("window_equivalence_min_ratio", min_of(windows), CORPUS_SIZE);

    let algebra: Vec<(f64, f64)> = (0..CORPUS_SIZE)
        .into_par_iter()
        .map(|i| -> Result<(f64, f64)> {
            let f = Signal::random(p, item_seed(seed, i, 10));
            let h = Signal::random(p, item_seed(seed, i, 11));
            let norm = |s: &Signal| modulation_norm(s, &l1, &ctx.reference);
            let denom = norm(&f)? * norm(&h)?;
            Ok((norm(&(&f * &h))? / denom, norm(&f.convolve(&h)?)? / denom))
        })
        .collect::<Result<_>>()?;
    push("banach_product_max_ratio", max_of(algebra.iter().map(|a| a.0)), CORPUS_SIZE);
    push("banach_convolution_max_ratio", max_of(algebra.iter().map(|a| a.1)), CORPUS_SIZE);

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1(n: usize) -> GroupParams {
        GroupParams::new(n, 1).unwrap()
    }

    #[test]
    fn mixed_norm_examples() {
        let p = p1(4);
        let delta = PhaseSpaceFunction::delta(p, &PhaseSpacePoint::origin(&p));
        for e in [1.0, 2.0, 3.5, f64::INFINITY] {
            for f in [1.0, 2.0, f64::INFINITY] {
                let spec = MixedNormSpec::new(e, f, Weight::unit(p)).unwrap();
                assert_eq!(mixed_norm(&delta, &spec).unwrap(), 1.0);
            }
        }
        let r = PhaseSpaceFunction::random(p, 3);
        let l2 = MixedNormSpec::new(2.0, 2.0, Weight::unit(p)).unwrap();
        assert!((mixed_norm(&r, &l2).unwrap() - r.norm_sqr().sqrt()).abs() < 1e-14);
        // Row x, column ω holds x + 4ω + 1; p = 1 sums over x, q = ∞ takes the largest ω.
        let hand = PhaseSpaceFunction::from_fn(p, |z| {
            let (x, w) = p.split(z);
            C64::new((x + 4 * w + 1) as f64, 0.0)
        });
        let spec = MixedNormSpec::new(1.0, f64::INFINITY, Weight::unit(p)).unwrap();
        // ω = 3: 13 + 14 + 15 + 16 = 58.
        assert_eq!(mixed_norm(&hand, &spec).unwrap(), 58.0);
        assert!(matches!(MixedNormSpec::new(0.5, 1.0, Weight::unit(p)), Err(Error::ExponentOutOfRange(_))));
    }

    #[test]
    fn modulation_norm_examples() {
        let p = p1(8);
        let g = Signal::gaussian(p);
        let f = Signal::random(p, 1);
        let l2 = MixedNormSpec::new(2.0, 2.0, Weight::unit(p)).unwrap();
        assert!((modulation_norm(&f, &l2, &g).unwrap() - 8f64.sqrt() * f.norm()).abs() < 1e-12);
        assert_eq!(modulation_norm(&Signal::zeros(p), &l2, &g).unwrap(), 0.0);
        assert!(matches!(modulation_norm(&f, &l2, &Signal::zeros(p)), Err(Error::ZeroWindow)));
    }

    #[test]
    fn weights() {
        let p = p1(8);
        let v = Weight::polynomial(p, 2.0).unwrap();
        let z = PhaseSpacePoint::from_signed(&p, &[-4], &[3]).unwrap();
        assert!((v.at(&z) - 26.0).abs() < 1e-12);
        // (1 + |a+b|²) ≤ 2 (1 + |a|²)(1 + |b|²); on ℤ₈² the worst pair is
        // a = b = (1, 0) with 5 / 4.
        let c = v.submultiplicativity_constant().unwrap();
        assert_eq!(c, 1.25);
        assert!(Weight::polynomial(p, 1.0).unwrap().submultiplicativity_constant().unwrap() <= 2f64.sqrt());
        assert_eq!(Weight::unit(p).submultiplicativity_constant().unwrap(), 1.0);
        let inv = v.reciprocal();
        assert_eq!(inv.kind(), &WeightKind::Polynomial { s: -2.0 });
        let cm = inv.moderateness_constant(&v).unwrap();
        assert!((1.0..=2.0).contains(&cm), "{cm}");
        assert!(Weight::custom(p, vec![0.0; 64]).is_err());
        assert!(Weight::custom(p, vec![1.0; 3]).is_err());
    }

    #[test]
    fn partition_is_exact() {
        for (n, r) in [(4, 2), (8, 2), (8, 4), (9, 3), (6, 1), (12, 3)] {
            let part = Partition::new(p1(n), r).unwrap();
            assert!(part.unity_defect() <= 4.0 * f64::EPSILON, "N={n} r={r}");
        }
        let p2 = GroupParams::new(4, 2).unwrap();
        assert!(Partition::new(p2, 2).unwrap().unity_defect() <= 4.0 * f64::EPSILON);
        assert!(matches!(Partition::new(p1(8), 3), Err(Error::StepDoesNotDivide { .. })));
        assert!(Partition::new(p1(8), 8).is_err());
        assert_eq!(Partition::default_for(p1(9)).step(), 3);
        assert_eq!(Partition::default_for(p1(7)).step(), 1);
    }

    #[test]
    fn amalgam_examples() {
        let p = p1(4);
        let part = Partition::new(p, 2).unwrap();
        let l1 = MixedNormSpec::l1(p);
        // A delta at a coarse grid point meets exactly one bump with value 1.
        let z = PhaseSpacePoint::new(&p, &[2], &[0]).unwrap();
        let delta = PhaseSpaceFunction::delta(p, &z);
        assert!((amalgam_norm(&delta, &l1, &part).unwrap() - 1.0).abs() < 1e-14);
        // Off the grid at (1,0) it meets two bumps with value 1/2 each.
        let off = PhaseSpaceFunction::delta(p, &PhaseSpacePoint::new(&p, &[1], &[0]).unwrap());
        assert!((amalgam_norm(&off, &l1, &part).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(amalgam_norm(&PhaseSpaceFunction::zeros(p), &l1, &part).unwrap(), 0.0);
        let one = PhaseSpaceFunction::from_fn(p, |_| C64::new(1.0, 0.0));
        // Each bump has FL¹ norm Σ|û| = u(0) = 1 since û ≥ 0; 4 bumps.
        assert!((amalgam_norm(&one, &l1, &part).unwrap() - 4.0).abs() < 1e-13);
    }

    #[test]
    fn amalgam_two_routes() {
        for (n, r, seed) in [(4, 2, 1), (6, 3, 2), (8, 2, 3), (8, 4, 4)] {
            let p = p1(n);
            let part = Partition::new(p, r).unwrap();
            let big_f = PhaseSpaceFunction::random(p, seed);
            for spec in [
                MixedNormSpec::l1(p),
                MixedNormSpec::new(2.0, f64::INFINITY, Weight::polynomial(p, 1.0).unwrap()).unwrap(),
            ] {
                let a = amalgam_norm(&big_f, &spec, &part).unwrap();
                let b = amalgam_norm_stft(&big_f, &spec, &part).unwrap();
                assert!((a - b).abs() <= 1e-9 * a, "N={n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn fl1_dominates_sup() {
        let p = p1(6);
        let h = PhaseSpaceFunction::random(p, 7);
        let sup = h.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(fourier_l1(&h) >= sup * (1.0 - 1e-12));
    }

    #[test]
    fn holder_examples() {
        let p = p1(4);
        let part = Partition::new(p, 2).unwrap();
        let spec = MixedNormSpec::new(2.0, 1.0, Weight::polynomial(p, 1.0).unwrap()).unwrap();
        let f = PhaseSpaceFunction::random(p, 1);
        let zero = holder_check(&f, &PhaseSpaceFunction::zeros(p), &spec, &part).unwrap();
        assert_eq!((zero.lhs, zero.ratio), (0.0, 0.0));
        let delta = PhaseSpaceFunction::delta(p, &PhaseSpacePoint::origin(&p));
        let unit = MixedNormSpec::l1(p);
        let r = holder_check(&delta, &delta, &unit, &part).unwrap();
        // lhs = 1 (delta at a grid point); rhs = 1 · (sup over bumps = 1).
        assert!((r.lhs - 1.0).abs() < 1e-14 && (r.rhs - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cg_and_main_bound_examples() {
        let p = p1(4);
        let ctx = NormContext::new(p, 0.0).unwrap();
        let unit = MixedNormSpec::l1(p);
        let d0 = Signal::delta(p, &[0]).unwrap();
        assert_eq!(cg_bound_check(&Signal::zeros(p), &d0, &unit, &ctx).unwrap().lhs, 0.0);
        let r = cg_bound_check(&d0, &d0, &unit, &ctx).unwrap();
        assert!(r.ratio.is_finite() && r.ratio > 0.0);
        let m = main_bound_check(&d0, &d0, &d0, &d0, &unit, &ctx).unwrap();
        assert!(m.ratio.is_finite() && m.ratio > 0.0);
        let z = main_bound_check(&Signal::zeros(p), &d0, &d0, &d0, &unit, &ctx).unwrap();
        assert_eq!(z.lhs, 0.0);
        assert!(matches!(main_bound_check(&d0, &d0, &Signal::zeros(p), &d0, &unit, &ctx), Err(Error::ZeroWindow)));
    }

    #[test]
    fn shift_and_fourier_invariance() {
        let p = p1(6);
        let v = Weight::polynomial(p, 1.0).unwrap();
        let spec = MixedNormSpec::new(1.0, 1.0, v.clone()).unwrap();
        let g = Signal::gaussian(p);
        let f = Signal::random(p, 4);
        assert!(shift_invariance_ratio(&f, &spec, &v, &g).unwrap() <= 1.0 + 1e-12);
        assert!((fourier_invariance_ratio(&f, &spec, &g).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn golden_semantics() {
        let hi = GoldenConstant { constant_name: "x_max_ratio".into(), value: 2.0, corpus_seed: 1, corpus_size: 1 };
        let lo = GoldenConstant { constant_name: "x_min_ratio".into(), ..hi.clone() };
        assert!(hi.admits(2.09, 1.05) && !hi.admits(2.2, 1.05));
        assert!(lo.admits(1.91, 1.05) && !lo.admits(1.8, 1.05));
        let json = serde_json::to_string(&vec![hi.clone()]).unwrap();
        assert_eq!(load_goldens(&json).unwrap(), vec![hi]);
    }
}
