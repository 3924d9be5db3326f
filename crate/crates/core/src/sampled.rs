//! Sampled-line mode on ℝ: truncated, finely sampled signals, product lattices
//! `αℤ × βℤ` with adjoint `β⁻¹ℤ × α⁻¹ℤ`, Riemann-sum STFTs and truncated
//! lattice-sum identities with quadrature and tail diagnostics.
//!
//! The covolume of `αℤ × βℤ` is `αβ`. Only function-class inputs are
//! supported; tempered distributions have no sampled counterpart here.

use std::f64::consts::PI;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::figa::FigaReport;
use crate::group::C64;

/// `|h(t)| ≤ amplitude · exp(-π rate t²)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianBound {
    pub amplitude: f64,
    pub rate: f64,
}

/// Decay information attached to a sampled signal.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Envelope {
    /// The signal is exactly `amplitude · exp(-π rate t²)`.
    Gaussian { amplitude: f64, rate: f64 },
    /// Bounds on `|f|` and `|f̂|` fitted from sampled maxima.
    Fitted { time: GaussianBound, freq: GaussianBound },
}

impl Envelope {
    fn time(&self) -> GaussianBound {
        match *self {
            Envelope::Gaussian { amplitude, rate } => GaussianBound { amplitude, rate },
            Envelope::Fitted { time, .. } => time,
        }
    }

    fn freq(&self) -> GaussianBound {
        match *self {
            // f̂(ξ) = A a^(-1/2) exp(-π ξ² / a).
            Envelope::Gaussian { amplitude, rate } => {
                GaussianBound { amplitude: amplitude / rate.sqrt(), rate: rate.recip() }
            }
            Envelope::Fitted { freq, .. } => freq,
        }
    }
}

/// `|F(x, ω)| ≤ c · exp(-π (p x² + q ω²))` on the time-frequency plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaneEnvelope {
    pub c: f64,
    pub p: f64,
    pub q: f64,
}

impl PlaneEnvelope {
    /// Envelope of a pointwise product.
    pub fn times(&self, other: &PlaneEnvelope) -> PlaneEnvelope {
        PlaneEnvelope { c: self.c * other.c, p: self.p + other.p, q: self.q + other.q }
    }

    fn decays(&self) -> bool {
        self.c.is_finite() && self.p > 0.0 && self.q > 0.0
    }
}

/// Samples on the symmetric grid `{-T, -T+h, ..., T}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSampled", into = "RawSampled")]
pub struct SampledSignal {
    h: f64,
    half_width: f64,
    samples: Vec<C64>,
    envelope: Option<Envelope>,
}

#[derive(Serialize, Deserialize)]
struct RawSampled {
    h: f64,
    #[serde(rename = "T")]
    half_width: f64,
    samples: Vec<C64>,
}

impl TryFrom<RawSampled> for SampledSignal {
    type Error = Error;
    fn try_from(r: RawSampled) -> Result<Self> {
        SampledSignal::new(r.h, r.half_width, r.samples)
    }
}

impl From<SampledSignal> for RawSampled {
    fn from(s: SampledSignal) -> Self {
        RawSampled { h: s.h, half_width: s.half_width, samples: s.samples }
    }
}

/// Number of steps `2T/h`, required to be an even integer.
fn grid_steps(h: f64, half_width: f64) -> Result<usize> {
    if !(h > 0.0 && h.is_finite() && half_width > 0.0 && half_width.is_finite()) {
        return Err(Error::InvalidGrid(format!("need h > 0 and T > 0, got h={h}, T={half_width}")));
    }
    let ratio = half_width / h;
    let k = ratio.round();
    if (ratio - k).abs() > 1e-9 * ratio.max(1.0) || k < 1.0 {
        return Err(Error::InvalidGrid(format!("T/h = {ratio} is not a positive integer")));
    }
    Ok(2 * k as usize)
}

impl SampledSignal {
    pub fn new(h: f64, half_width: f64, samples: Vec<C64>) -> Result<Self> {
        let steps = grid_steps(h, half_width)?;
        if samples.len() != steps + 1 {
            return Err(Error::DimensionMismatch { expected: steps + 1, got: samples.len() });
        }
        Ok(Self { h, half_width, samples, envelope: None })
    }

    pub fn from_fn(h: f64, half_width: f64, f: impl Fn(f64) -> C64) -> Result<Self> {
        let steps = grid_steps(h, half_width)?;
        let k = steps / 2;
        let samples = (0..=steps).map(|j| f((j as f64 - k as f64) * h)).collect();
        Self::new(h, half_width, samples)
    }

    /// `2^(1/4) exp(-π t²)`, unit L² norm on ℝ.
    pub fn gaussian(half_width: f64, h: f64) -> Result<Self> {
        Self::dilated_gaussian(half_width, h, 1.0)
    }

    /// `(2a)^(1/4) exp(-π a t²)`, unit L² norm on ℝ.
    pub fn dilated_gaussian(half_width: f64, h: f64, a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidParams(format!("Gaussian rate {a} must be positive")));
        }
        let amplitude = (2.0 * a).powf(0.25);
        let mut s = Self::from_fn(h, half_width, |t| C64::new(amplitude * (-PI * a * t * t).exp(), 0.0))?;
        s.envelope = Some(Envelope::Gaussian { amplitude, rate: a });
        Ok(s)
    }

    /// Smooth bump `exp(-1 / (1 - (t/r)²))` on `|t| < r`. Carries no
    /// envelope, so tail bounds for it go through the fitted path.
    pub fn bump(half_width: f64, h: f64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius <= half_width) {
            return Err(Error::InvalidParams(format!("bump radius {radius} must lie in (0, T]")));
        }
        Self::from_fn(h, half_width, |t| {
            let u = t / radius;
            C64::new(if u.abs() < 1.0 { (-1.0 / (1.0 - u * u)).exp() } else { 0.0 }, 0.0)
        })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    pub fn envelope(&self) -> Option<Envelope> {
        self.envelope
    }

    pub fn with_envelope(mut self, envelope: Envelope) -> Self {
        self.envelope = Some(envelope);
        self
    }

    fn steps(&self) -> usize {
        self.samples.len() - 1
    }

    /// Grid node `t_j = -T + j h`, computed from the centred index.
    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        (j as f64 - (self.steps() / 2) as f64) * self.h
    }

    /// Riemann-sum `∫ |f|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.h * self.samples.iter().map(|v| v.norm_sqr()).sum::<f64>()
    }

    /// Riemann-sum L² mass of `f` outside `[-T/2, T/2]`.
    pub fn tail_mass(&self) -> f64 {
        let cut = self.half_width / 2.0;
        let s: f64 =
            (0..self.samples.len()).filter(|&j| self.node(j).abs() > cut).map(|j| self.samples[j].norm_sqr()).sum();
        (self.h * s).sqrt()
    }

    /// Linear interpolation, zero outside `[-T, T]`.
    pub fn value_at(&self, s: f64) -> C64 {
        let idx = (s + self.half_width) / self.h;
        if idx.is_nan() || idx < 0.0 || idx > self.steps() as f64 {
            return C64::new(0.0, 0.0);
        }
        let i = idx.floor() as usize;
        if i >= self.steps() {
            return self.samples[self.steps()];
        }
        let fr = idx - i as f64;
        self.samples[i] * (1.0 - fr) + self.samples[i + 1] * fr
    }

    /// Riemann-sum Fourier transform `f̂(ξ) = ∫ f(t) exp(-2πi ξ t) dt`.
    pub fn fourier_at(&self, xi: f64) -> C64 {
        (0..self.samples.len()).fold(C64::new(0.0, 0.0), |acc, j| {
            let (s, c) = (-2.0 * PI * xi * self.node(j)).sin_cos();
            acc + self.samples[j] * C64::new(c, s)
        }) * self.h
    }

    /// Every other sample: the same interval at step `2h`.
    pub fn coarsened(&self) -> Result<SampledSignal> {
        let samples = self.samples.iter().step_by(2).copied().collect();
        let mut out = SampledSignal::new(2.0 * self.h, self.half_width, samples)?;
        out.envelope = self.envelope;
        Ok(out)
    }

    fn check_compatible(&self, other: &SampledSignal) -> Result<()> {
        if (self.h - other.h).abs() > 1e-12 * self.h
            || (self.half_width - other.half_width).abs() > 1e-12 * self.half_width
        {
            return Err(Error::InvalidGrid(format!(
                "grids differ: (h={}, T={}) vs (h={}, T={})",
                self.h, self.half_width, other.h, other.half_width
            )));
        }
        Ok(())
    }

    /// Envelope, fitting one from the samples when none is attached.
    pub fn envelope_or_fit(&self) -> Envelope {
        self.envelope.unwrap_or_else(|| self.fit_envelope())
    }

    /// Gaussian bounds on `|f|` and `|f̂|` from sampled maxima. A rate of 0
    /// means no decay could be certified.
    pub fn fit_envelope(&self) -> Envelope {
        let time: Vec<(f64, f64)> = (0..self.samples.len()).map(|j| (self.node(j), self.samples[j].norm())).collect();
        let band = (0.5 / self.h).min(16.0);
        let count = (band / 0.125) as i64;
        let freq: Vec<(f64, f64)> = (-count..=count)
            .map(|k| {
                let xi = k as f64 * 0.125;
                (xi, self.fourier_at(xi).norm())
            })
            .collect();
        Envelope::Fitted { time: fit_bound(&time), freq: fit_bound(&freq) }
    }
}

/// Largest rate `a` with `|v| ≤ A exp(-π a t²)` at every sample, `A = max |v|`.
fn fit_bound(points: &[(f64, f64)]) -> GaussianBound {
    let amplitude = points.iter().map(|p| p.1).fold(0.0, f64::max);
    if amplitude == 0.0 {
        return GaussianBound { amplitude: 0.0, rate: f64::INFINITY };
    }
    let rate = points
        .iter()
        .filter(|(t, v)| *t != 0.0 && *v > 0.0)
        .map(|(t, v)| -(v / amplitude).ln() / (PI * t * t))
        .fold(f64::INFINITY, f64::min);
    GaussianBound { amplitude, rate: rate.max(0.0) }
}

/// Envelope of `|V_g f|` from the envelopes of `f` and `g`.
///
/// Exact Gaussians `A e^{-πa t²}`, `B e^{-πb t²}` give
/// `AB (a+b)^(-1/2) exp(-π (ab x² + ω²)/(a+b))`. Otherwise the time bound
/// (decay in x) and the frequency bound (decay in ω) are combined through
/// their geometric mean.
pub fn stft_envelope(f: &Envelope, g: &Envelope) -> PlaneEnvelope {
    if let (Envelope::Gaussian { amplitude: a_amp, rate: a }, Envelope::Gaussian { amplitude: b_amp, rate: b }) = (f, g)
    {
        return PlaneEnvelope { c: a_amp * b_amp / (a + b).sqrt(), p: a * b / (a + b), q: 1.0 / (a + b) };
    }
    let bound = |u: GaussianBound, v: GaussianBound| -> (f64, f64) {
        if u.amplitude == 0.0 || v.amplitude == 0.0 {
            return (0.0, f64::INFINITY);
        }
        if u.rate <= 0.0 || v.rate <= 0.0 {
            return (f64::INFINITY, 0.0);
        }
        if u.rate.is_infinite() || v.rate.is_infinite() {
            return (0.0, f64::INFINITY);
        }
        let s = u.rate + v.rate;
        (u.amplitude * v.amplitude / s.sqrt(), u.rate * v.rate / s)
    };
    let (ct, rt) = bound(f.time(), g.time());
    let (cf, rf) = bound(f.freq(), g.freq());
    PlaneEnvelope { c: (ct * cf).sqrt(), p: rt / 2.0, q: rf / 2.0 }
}

/// `αℤ × βℤ` truncated to `max(|kα|, |lβ|) ≤ R`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductLattice {
    pub alpha: f64,
    pub beta: f64,
    pub radius: u32,
}

impl ProductLattice {
    pub fn new(alpha: f64, beta: f64, radius: u32) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite() && beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParams(format!("need α, β > 0, got α={alpha}, β={beta}")));
        }
        Ok(Self { alpha, beta, radius })
    }

    /// `β⁻¹ℤ × α⁻¹ℤ` with the same radius.
    pub fn adjoint(&self) -> ProductLattice {
        ProductLattice { alpha: self.beta.recip(), beta: self.alpha.recip(), radius: self.radius }
    }

    pub fn covolume(&self) -> f64 {
        self.alpha * self.beta
    }

    /// Largest `|k|` and `|l|` inside the radius.
    pub fn index_bounds(&self) -> (i64, i64) {
        let r = self.radius as f64;
        ((r / self.alpha + 1e-12).floor() as i64, (r / self.beta + 1e-12).floor() as i64)
    }

    /// Points `(kα, lβ)` inside the radius, `k` outer and `l` inner.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let (kmax, lmax) = self.index_bounds();
        let mut out = Vec::with_capacity(((2 * kmax + 1) * (2 * lmax + 1)) as usize);
        for k in -kmax..=kmax {
            for l in -lmax..=lmax {
                out.push((k as f64 * self.alpha, l as f64 * self.beta));
            }
        }
        out
    }

    pub fn descriptor(&self) -> String {
        format!("alpha={};beta={};R={}", self.alpha, self.beta, self.radius)
    }
}

/// Riemann-sum STFT value with a step-doubling error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadValue {
    pub value: C64,
    /// `|V_h - V_{2h}|`.
    pub error_estimate: f64,
    /// Set when `|x| > T`: the shifted window left the sampled interval.
    pub tail_warning: bool,
}

fn stft_sum(f: &SampledSignal, g: &SampledSignal, x: f64, omega: f64) -> C64 {
    (0..f.samples.len()).fold(C64::new(0.0, 0.0), |acc, j| {
        let t = f.node(j);
        let fj = f.samples[j];
        if fj.norm_sqr() == 0.0 {
            return acc;
        }
        let (s, c) = (-2.0 * PI * omega * t).sin_cos();
        acc + fj * g.value_at(t - x).conj() * C64::new(c, s)
    }) * f.h
}

/// `V_g f(x, ω) ≈ h Σ_j f(t_j) conj(g(t_j - x)) exp(-2πi ω t_j)`, with `g`
/// linearly interpolated at the shifted nodes.
pub fn stft_quad(f: &SampledSignal, g: &SampledSignal, x: f64, omega: f64) -> Result<QuadValue> {
    f.check_compatible(g)?;
    let value = stft_sum(f, g, x, omega);
    let coarse = stft_sum(&f.coarsened()?, &g.coarsened()?, x, omega);
    Ok(QuadValue { value, error_estimate: (value - coarse).norm(), tail_warning: x.abs() > f.half_width })
}

/// Bound on `Σ |F(λ)|` over the points of `αℤ × βℤ` outside radius `R` for
/// `|F| ≤ c exp(-π(p x² + q ω²))`. With `R = 0` the full envelope sum is
/// returned. Infinite when the envelope does not decay.
pub fn envelope_tail(env: &PlaneEnvelope, lattice: &ProductLattice) -> f64 {
    if env.c == 0.0 {
        return 0.0;
    }
    if !env.decays() {
        return f64::INFINITY;
    }
    let cx = PI * env.p * lattice.alpha * lattice.alpha;
    let cw = PI * env.q * lattice.beta * lattice.beta;
    let full_1d = |c: f64| 1.0 + (PI / c).sqrt();
    // Σ_{|k|>K} e^{-ck²} ≤ 2 e^{-c(K+1)²} / (1 - e^{-c(2K+3)}).
    let tail_1d = |c: f64, k: i64| {
        let k = k as f64;
        2.0 * (-c * (k + 1.0).powi(2)).exp() / (1.0 - (-c * (2.0 * k + 3.0)).exp())
    };
    let full = env.c * full_1d(cx) * full_1d(cw);
    if lattice.radius == 0 {
        return full;
    }
    let (kmax, lmax) = lattice.index_bounds();
    let union = env.c * (tail_1d(cx, kmax) * full_1d(cw) + full_1d(cx) * tail_1d(cw, lmax));
    union.min(full)
}

/// Omitted mass of `Σ_λ |V_g f(λ)|` beyond the truncation radius.
pub fn tail_estimate(f: &SampledSignal, g: &SampledSignal, lattice: &ProductLattice) -> f64 {
    envelope_tail(&stft_envelope(&f.envelope_or_fit(), &g.envelope_or_fit()), lattice)
}

/// Sampled lattice-sum identity with quadrature and truncation diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledFigaReport {
    #[serde(flatten)]
    pub figa: FigaReport,
    /// Bound on the mass omitted from both truncated sums, adjoint side
    /// already scaled by `1/(αβ)`.
    #[serde(with = "crate::serde_ext")]
    pub tail_bound: f64,
    /// `max(|lhs_h - lhs_2h|, |rhs_h - rhs_2h|)`.
    pub quadrature_estimate: f64,
    /// Set when the tail bound exceeds the tolerance, so a small residual
    /// would not certify the identity.
    pub inconclusive: bool,
    /// Set when some lattice point shifts the window beyond `[-T, T]`.
    pub tail_warning: bool,
}

struct Sides {
    lhs: C64,
    rhs: C64,
    warn: bool,
}

fn figa_sides(
    f1: &SampledSignal,
    f2: &SampledSignal,
    g1: &SampledSignal,
    g2: &SampledSignal,
    lattice: &ProductLattice,
) -> Sides {
    let adjoint = lattice.adjoint();
    let mut warn = false;
    let mut lhs = C64::new(0.0, 0.0);
    for (x, w) in lattice.points() {
        warn |= x.abs() > f1.half_width;
        lhs += stft_sum(f1, g1, x, w) * stft_sum(f2, g2, x, w).conj();
    }
    let mut rhs = C64::new(0.0, 0.0);
    for (x, w) in adjoint.points() {
        warn |= x.abs() > f1.half_width;
        rhs += stft_sum(g2, g1, x, w) * stft_sum(f2, f1, x, w).conj();
    }
    Sides { lhs, rhs: rhs / lattice.covolume(), warn }
}

/// Truncated FIGA:
/// `Σ_{λ∈Λ} V_{g1}f1(λ) conj(V_{g2}f2(λ))` against
/// `(αβ)⁻¹ Σ_{λ⁰∈Λ⁰} V_{g1}g2(λ⁰) conj(V_{f1}f2(λ⁰))`, both within radius `R`.
/// `tolerance` is relative; the report is inconclusive when the tail bound
/// exceeds `tolerance · max(|lhs|, |rhs|)`.
pub fn figa_truncated(
    f1: &SampledSignal,
    f2: &SampledSignal,
    g1: &SampledSignal,
    g2: &SampledSignal,
    lattice: &ProductLattice,
    tolerance: f64,
) -> Result<SampledFigaReport> {
    for s in [f2, g1, g2] {
        f1.check_compatible(s)?;
    }
    let fine = figa_sides(f1, f2, g1, g2, lattice);
    let coarse = figa_sides(&f1.coarsened()?, &f2.coarsened()?, &g1.coarsened()?, &g2.coarsened()?, lattice);
    let [e1, e2, h1, h2] = [f1, f2, g1, g2].map(|s| s.envelope_or_fit());
    let lhs_env = stft_envelope(&e1, &h1).times(&stft_envelope(&e2, &h2));
    let rhs_env = stft_envelope(&h2, &h1).times(&stft_envelope(&e2, &e1));
    let tail_bound =
        envelope_tail(&lhs_env, lattice) + envelope_tail(&rhs_env, &lattice.adjoint()) / lattice.covolume();
    Ok(finish(fine, coarse, lattice, tail_bound, tolerance))
}

fn finish(fine: Sides, coarse: Sides, lattice: &ProductLattice, tail_bound: f64, tolerance: f64) -> SampledFigaReport {
    let adjoint = lattice.adjoint();
    let figa = FigaReport::new(
        fine.lhs,
        fine.rhs,
        lattice.points().len(),
        adjoint.points().len(),
        lattice.descriptor(),
        format!("{}", lattice.covolume()),
    );
    let scale = fine.lhs.norm().max(fine.rhs.norm());
    SampledFigaReport {
        inconclusive: tail_bound.is_nan() || tail_bound > tolerance * scale,
        quadrature_estimate: (fine.lhs - coarse.lhs).norm().max((fine.rhs - coarse.rhs).norm()),
        tail_bound,
        tail_warning: fine.warn,
        figa,
    }
}

fn rihaczek_sides(f: &SampledSignal, g: &SampledSignal, lattice: &ProductLattice) -> Sides {
    let mut warn = false;
    let mut lhs = C64::new(0.0, 0.0);
    for (x, w) in lattice.points() {
        warn |= x.abs() > f.half_width;
        lhs += stft_sum(f, g, x, w);
    }
    let mut rhs = C64::new(0.0, 0.0);
    for (x, w) in lattice.adjoint().points() {
        warn |= x.abs() > f.half_width;
        let (s, c) = (-2.0 * PI * x * w).sin_cos();
        rhs += f.value_at(x) * g.fourier_at(w).conj() * C64::new(c, s);
    }
    Sides { lhs, rhs: rhs / lattice.covolume(), warn }
}

/// `Σ_{λ∈Λ} V_g f(λ)` against `(αβ)⁻¹ Σ_{λ⁰∈Λ⁰} R(f, g)(λ⁰)` with the
/// Rihaczek distribution `R(f, g)(x, ω) = f(x) conj(ĝ(ω)) exp(-2πi x ω)`.
pub fn rihaczek_truncated(
    f: &SampledSignal,
    g: &SampledSignal,
    lattice: &ProductLattice,
    tolerance: f64,
) -> Result<SampledFigaReport> {
    f.check_compatible(g)?;
    let fine = rihaczek_sides(f, g, lattice);
    let coarse = rihaczek_sides(&f.coarsened()?, &g.coarsened()?, lattice);
    let (ef, eg) = (f.envelope_or_fit(), g.envelope_or_fit());
    let (ft, gf) = (ef.time(), eg.freq());
    let rihaczek_env = PlaneEnvelope { c: ft.amplitude * gf.amplitude, p: ft.rate, q: gf.rate };
    let tail_bound = envelope_tail(&stft_envelope(&ef, &eg), lattice)
        + envelope_tail(&rihaczek_env, &lattice.adjoint()) / lattice.covolume();
    Ok(finish(fine, coarse, lattice, tail_bound, tolerance))
}

/// Distance of a rational phase to the nearest integer.
fn distance_to_integer(r: Ratio<i64>) -> Ratio<i64> {
    let frac = r - r.floor();
    let other = Ratio::from_integer(1) - frac;
    frac.min(other)
}

/// Commutation test of one candidate point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutationEntry {
    /// `(y, η)` as `"p/q"` strings.
    pub candidate: (String, String),
    /// Largest distance of `kα·η - lβ·y` to an integer over the sampled `λ`.
    pub residual: String,
    pub commutes: bool,
}

fn ratio_string(r: &Ratio<i64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// For each candidate `z = (y, η)`, the largest distance to an integer of
/// the commutation exponent `kα·η - lβ·y` over `λ = (kα, lβ)` with
/// `|k|, |l| ≤ reach`. All arithmetic is exact.
pub fn adjoint_commutation_check(
    alpha: Ratio<i64>,
    beta: Ratio<i64>,
    candidates: &[(Ratio<i64>, Ratio<i64>)],
    reach: i64,
) -> Vec<CommutationEntry> {
    candidates
        .iter()
        .map(|&(y, eta)| {
            let mut worst = Ratio::from_integer(0);
            for k in -reach..=reach {
                for l in -reach..=reach {
                    let phase = alpha * k * eta - beta * l * y;
                    worst = worst.max(distance_to_integer(phase));
                }
            }
            CommutationEntry {
                candidate: (ratio_string(&y), ratio_string(&eta)),
                residual: ratio_string(&worst),
                commutes: worst == Ratio::from_integer(0),
            }
        })
        .collect()
}

/// Candidates `(a·step, b·step)` with `|a·step|, |b·step| ≤ extent` that
/// commute with every sampled lattice point.
pub fn scan_adjoint(
    alpha: Ratio<i64>,
    beta: Ratio<i64>,
    step: Ratio<i64>,
    extent: i64,
) -> Vec<(Ratio<i64>, Ratio<i64>)> {
    let count = (Ratio::from_integer(extent) / step).floor().to_integer();
    let mut cands = Vec::new();
    for a in -count..=count {
        for b in -count..=count {
            cands.push((step * a, step * b));
        }
    }
    adjoint_commutation_check(alpha, beta, &cands, 2)
        .into_iter()
        .zip(cands)
        .filter(|(e, _)| e.commutes)
        .map(|(_, c)| c)
        .collect()
}
