//! Short-time Fourier transform, Rihaczek distribution and the classical
//! identities relating them.

use crate::error::Result;
use crate::group::{GroupParams, Twiddles, C64};
use crate::signal::{PhaseSpaceFunction, Signal};
use crate::transform::{dft, dft_axes, modulate};

/// An STFT together with the zero-window diagnostic.
#[derive(Clone, Debug, PartialEq)]
pub struct StftOutput {
    pub transform: PhaseSpaceFunction,
    /// Set when the window is identically zero; the transform is then zero.
    pub zero_window: bool,
}

/// `V_g f(x, ω) = Σ_t f[t] conj(g[t - x]) exp(-2πi ω·t / N) = ⟨f, π(x,ω) g⟩`.
pub fn stft(f: &Signal, g: &Signal) -> Result<PhaseSpaceFunction> {
    stft_diagnosed(f, g).map(|o| o.transform)
}

pub fn stft_diagnosed(f: &Signal, g: &Signal) -> Result<StftOutput> {
    f.params().check_same(g.params())?;
    let p = *f.params();
    let (n, d, s) = (p.n(), p.d(), p.size());
    let tw = Twiddles::new(n);
    let mut out = Vec::with_capacity(p.phase_size());
    let mut row = vec![C64::new(0.0, 0.0); s];
    for x in 0..s {
        for (t, slot) in row.iter_mut().enumerate() {
            *slot = f.values()[t] * g.values()[p.sub(t, x)].conj();
        }
        dft_axes(&mut row, n, d, 0..d, false, &tw);
        out.extend_from_slice(&row);
    }
    Ok(StftOutput { transform: PhaseSpaceFunction::new(p, out)?, zero_window: g.is_zero() })
}

/// STFT through the convolution form
/// `V_g f(x, ω) = exp(-2πi x·ω / N) (f ∗ M_ω g*)(x)`, `g*(t) = conj(g(-t))`.
pub fn stft_via_convolution(f: &Signal, g: &Signal) -> Result<PhaseSpaceFunction> {
    f.params().check_same(g.params())?;
    let p = *f.params();
    let tw = Twiddles::new(p.n());
    let g_star = g.involution();
    let mut out = PhaseSpaceFunction::zeros(p);
    for w in 0..p.size() {
        let kernel = modulate(&g_star, &p.unflatten(w))?;
        let conv = f.convolve(&kernel)?;
        for x in 0..p.size() {
            out.values_mut()[p.join(x, w)] = tw.neg(p.dot(x, w)) * conv.values()[x];
        }
    }
    Ok(out)
}

/// Largest deviation from `V_g f(x, ω) = exp(-2πi x·ω / N) V_ĝ f̂(ω, -x)`.
pub fn basic_identity_check(f: &Signal, g: &Signal) -> Result<f64> {
    let p = *f.params();
    let lhs = stft(f, g)?;
    let rhs = stft(&dft(f), &dft(g))?;
    let tw = Twiddles::new(p.n());
    let mut worst: f64 = 0.0;
    for x in 0..p.size() {
        for w in 0..p.size() {
            let other = tw.neg(p.dot(x, w)) * rhs.at_flat(p.join(w, p.neg(x)));
            worst = worst.max((lhs.at_flat(p.join(x, w)) - other).norm());
        }
    }
    Ok(worst)
}

/// Both sides of the finite Moyal formula
/// `⟨V_{g1} f1, V_{g2} f2⟩ = N^d ⟨f1, f2⟩ conj(⟨g1, g2⟩)`.
pub fn moyal_inner(f1: &Signal, g1: &Signal, f2: &Signal, g2: &Signal) -> Result<(C64, C64)> {
    let lhs = stft(f1, g1)?.inner(&stft(f2, g2)?)?;
    let c = moyal_constant(f1.params());
    let rhs = f1.inner(f2)? * g1.inner(g2)?.conj() * c;
    Ok((lhs, rhs))
}

/// The finite Moyal constant `N^d`.
pub fn moyal_constant(p: &GroupParams) -> f64 {
    p.size() as f64
}

/// The factor `N^(d/2)` in `symplectic_dft(V_g f) = N^(d/2) R(f, g)`.
pub fn rihaczek_constant(p: &GroupParams) -> f64 {
    (p.size() as f64).sqrt()
}

/// `R(f, g)(x, ω) = f(x) conj(ĝ(ω)) exp(-2πi x·ω / N)`.
pub fn rihaczek(f: &Signal, g: &Signal) -> Result<PhaseSpaceFunction> {
    f.params().check_same(g.params())?;
    let p = *f.params();
    let g_hat = dft(g);
    let tw = Twiddles::new(p.n());
    Ok(PhaseSpaceFunction::from_fn(p, |z| {
        let (x, w) = p.split(z);
        f.values()[x] * g_hat.values()[w].conj() * tw.neg(p.dot(x, w))
    }))
}
