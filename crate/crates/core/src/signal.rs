//! Signals on ℤ_N^d and functions on phase space.

use std::fmt::Write as _;
use std::ops::{Add, Mul, Sub};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupParams, PhaseSpacePoint, C64};

/// Complex amplitudes indexed by ℤ_N^d in row-major order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Signal {
    params: GroupParams,
    values: Vec<C64>,
}

impl Signal {
    pub fn new(params: GroupParams, values: Vec<C64>) -> Result<Self> {
        if values.len() != params.size() {
            return Err(Error::DimensionMismatch { expected: params.size(), got: values.len() });
        }
        Ok(Self { params, values })
    }

    pub fn from_fn(params: GroupParams, f: impl FnMut(usize) -> C64) -> Self {
        Self { params, values: (0..params.size()).map(f).collect() }
    }

    pub fn zeros(params: GroupParams) -> Self {
        Self::from_fn(params, |_| C64::new(0.0, 0.0))
    }

    pub fn constant(params: GroupParams, c: C64) -> Self {
        Self::from_fn(params, |_| c)
    }

    /// Unit impulse at the multi-index `at`.
    pub fn delta(params: GroupParams, at: &[usize]) -> Result<Self> {
        if at.len() != params.d() {
            return Err(Error::DimensionMismatch { expected: params.d(), got: at.len() });
        }
        let k = params.flatten(at);
        Ok(Self::from_fn(params, |t| C64::new(if t == k { 1.0 } else { 0.0 }, 0.0)))
    }

    /// Periodized Gaussian `Σ_k exp(-π |t + kN|² / N)`, normalized to unit
    /// ℓ² norm. It is a fixed point of the unitary DFT.
    pub fn gaussian(params: GroupParams) -> Self {
        let n = params.n() as f64;
        let ni = params.n() as i64;
        let wraps = 4;
        let one_dim: Vec<f64> = (0..ni)
            .map(|t| {
                (-wraps..=wraps)
                    .map(|k| {
                        let s = (t + k * ni) as f64;
                        (-std::f64::consts::PI * s * s / n).exp()
                    })
                    .sum()
            })
            .collect();
        let mut coords = vec![0; params.d()];
        let raw = Self::from_fn(params, |t| {
            params.unflatten_into(t, &mut coords);
            C64::new(coords.iter().map(|&c| one_dim[c]).product(), 0.0)
        });
        let norm = raw.norm();
        raw.scale(C64::new(1.0 / norm, 0.0))
    }

    /// Seeded signal with independent standard complex normal entries
    /// (real and imaginary parts each of variance 1/2), drawn in index order.
    pub fn random(params: GroupParams, seed: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_fn(params, |_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            C64::new(re * s, im * s)
        })
    }

    #[inline]
    pub fn params(&self) -> &GroupParams {
        &self.params
    }

    #[inline]
    pub fn values(&self) -> &[C64] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn at(&self, coords: &[usize]) -> C64 {
        self.values[self.params.flatten(coords)]
    }

    /// Σ|f|², accumulated sequentially in index order.
    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc + v.norm_sqr())
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == C64::new(0.0, 0.0))
    }

    /// `⟨self, other⟩ = Σ self[t] · conj(other[t])`.
    pub fn inner(&self, other: &Signal) -> Result<C64> {
        self.params.check_same(&other.params)?;
        Ok(self.values.iter().zip(&other.values).fold(C64::new(0.0, 0.0), |acc, (a, b)| acc + a * b.conj()))
    }

    pub fn scale(&self, c: C64) -> Signal {
        self.map(|v| v * c)
    }

    pub fn conj(&self) -> Signal {
        self.map(|v| v.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Signal {
        Signal { params: self.params, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_with(&self, other: &Signal, f: impl Fn(C64, C64) -> C64) -> Result<Signal> {
        self.params.check_same(&other.params)?;
        Ok(Signal {
            params: self.params,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    /// Parity `t ↦ f(-t)`.
    pub fn reversed(&self) -> Signal {
        Signal::from_fn(self.params, |t| self.values[self.params.neg(t)])
    }

    /// Involution `g*(t) = conj(g(-t))`.
    pub fn involution(&self) -> Signal {
        self.reversed().conj()
    }

    /// Cyclic convolution `(f ∗ h)(t) = Σ_s f(s) h(t - s)`.
    pub fn convolve(&self, other: &Signal) -> Result<Signal> {
        self.params.check_same(&other.params)?;
        let p = self.params;
        Ok(Signal::from_fn(p, |t| {
            (0..p.size()).fold(C64::new(0.0, 0.0), |acc, s| acc + self.values[s] * other.values[p.sub(t, s)])
        }))
    }

    pub fn max_abs_diff(&self, other: &Signal) -> f64 {
        max_abs_diff(&self.values, &other.values)
    }
}

impl Add for &Signal {
    type Output = Signal;
    fn add(self, rhs: &Signal) -> Signal {
        self.zip_with(rhs, |a, b| a + b).expect("params mismatch in signal addition")
    }
}

impl Sub for &Signal {
    type Output = Signal;
    fn sub(self, rhs: &Signal) -> Signal {
        self.zip_with(rhs, |a, b| a - b).expect("params mismatch in signal subtraction")
    }
}

impl Mul for &Signal {
    type Output = Signal;
    fn mul(self, rhs: &Signal) -> Signal {
        self.zip_with(rhs, |a, b| a * b).expect("params mismatch in signal product")
    }
}

/// Complex amplitudes on ℤ_N^d × ℤ_N^d, position block outer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpaceFunction {
    params: GroupParams,
    values: Vec<C64>,
}

impl PhaseSpaceFunction {
    pub fn new(params: GroupParams, values: Vec<C64>) -> Result<Self> {
        if values.len() != params.phase_size() {
            return Err(Error::DimensionMismatch { expected: params.phase_size(), got: values.len() });
        }
        Ok(Self { params, values })
    }

    pub fn from_fn(params: GroupParams, f: impl FnMut(usize) -> C64) -> Self {
        Self { params, values: (0..params.phase_size()).map(f).collect() }
    }

    pub fn zeros(params: GroupParams) -> Self {
        Self::from_fn(params, |_| C64::new(0.0, 0.0))
    }

    pub fn delta(params: GroupParams, at: &PhaseSpacePoint) -> Self {
        let k = at.flat(&params);
        Self::from_fn(params, |z| C64::new(if z == k { 1.0 } else { 0.0 }, 0.0))
    }

    pub fn random(params: GroupParams, seed: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_fn(params, |_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            C64::new(re * s, im * s)
        })
    }

    #[inline]
    pub fn params(&self) -> &GroupParams {
        &self.params
    }

    #[inline]
    pub fn values(&self) -> &[C64] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    /// Value at flat phase-space index `z`.
    #[inline]
    pub fn at_flat(&self, z: usize) -> C64 {
        self.values[z]
    }

    pub fn at(&self, z: &PhaseSpacePoint) -> C64 {
        self.values[z.flat(&self.params)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc + v.norm_sqr())
    }

    pub fn inner(&self, other: &PhaseSpaceFunction) -> Result<C64> {
        self.params.check_same(&other.params)?;
        Ok(self.values.iter().zip(&other.values).fold(C64::new(0.0, 0.0), |acc, (a, b)| acc + a * b.conj()))
    }

    pub fn conj(&self) -> PhaseSpaceFunction {
        PhaseSpaceFunction { params: self.params, values: self.values.iter().map(|v| v.conj()).collect() }
    }

    pub fn scale(&self, c: C64) -> PhaseSpaceFunction {
        PhaseSpaceFunction { params: self.params, values: self.values.iter().map(|v| v * c).collect() }
    }

    /// Pointwise product.
    pub fn product(&self, other: &PhaseSpaceFunction) -> Result<PhaseSpaceFunction> {
        self.params.check_same(&other.params)?;
        Ok(PhaseSpaceFunction {
            params: self.params,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        })
    }

    /// `self · conj(other)`, the integrand of the FIGA lattice sums.
    pub fn product_conj(&self, other: &PhaseSpaceFunction) -> Result<PhaseSpaceFunction> {
        self.params.check_same(&other.params)?;
        Ok(PhaseSpaceFunction {
            params: self.params,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).collect(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == C64::new(0.0, 0.0))
    }

    pub fn max_abs_diff(&self, other: &PhaseSpaceFunction) -> f64 {
        max_abs_diff(&self.values, &other.values)
    }

    /// CSV with header `x,omega,re,im`; multi-indices are written as
    /// space-separated components.
    pub fn to_csv(&self) -> String {
        let p = self.params;
        let mut out = String::from("x,omega,re,im\n");
        for (z, v) in self.values.iter().enumerate() {
            let (x, w) = p.split(z);
            let fmt = |i: usize| p.unflatten(i).iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
            let _ = writeln!(out, "{},{},{:e},{:e}", fmt(x), fmt(w), v.re, v.im);
        }
        out
    }
}

pub(crate) fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize) -> GroupParams {
        GroupParams::new(n, 1).unwrap()
    }

    #[test]
    fn length_is_checked() {
        assert!(Signal::new(p(4), vec![C64::new(0.0, 0.0); 3]).is_err());
        assert!(PhaseSpaceFunction::new(p(4), vec![C64::new(0.0, 0.0); 15]).is_err());
    }

    #[test]
    fn random_is_seeded() {
        let a = Signal::random(p(8), 3);
        assert_eq!(a, Signal::random(p(8), 3));
        assert_ne!(a, Signal::random(p(8), 4));
    }

    #[test]
    fn gaussian_is_unit_and_even() {
        let g = Signal::gaussian(p(12));
        assert!((g.norm() - 1.0).abs() < 1e-14);
        assert!(g.max_abs_diff(&g.reversed()) < 1e-15);
    }

    #[test]
    fn convolution_with_delta_is_identity() {
        let f = Signal::random(p(6), 1);
        let d = Signal::delta(p(6), &[0]).unwrap();
        assert!(f.convolve(&d).unwrap().max_abs_diff(&f) < 1e-15);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let f = PhaseSpaceFunction::zeros(p(2));
        let csv = f.to_csv();
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.starts_with("x,omega,re,im\n0,0,"));
    }
}
