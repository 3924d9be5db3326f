//! The finite group ℤ_N^d, its phase space ℤ_N^d × ℤ_N^d, and the index
//! arithmetic shared by every other module.
//!
//! Multi-indices are flattened row-major. Phase-space points are flattened
//! with the position block outer and the frequency block inner, so the flat
//! index of `(x, ω)` is `flat(x) * N^d + flat(ω)` and sorting by flat index is
//! the lexicographic order on `(x, ω)`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Largest phase space the dense reference paths accept.
pub const MAX_PHASE_SPACE: usize = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct GroupParams {
    n: usize,
    d: usize,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    n: usize,
    d: usize,
}

impl TryFrom<RawParams> for GroupParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        GroupParams::new(raw.n, raw.d)
    }
}

impl From<GroupParams> for RawParams {
    fn from(p: GroupParams) -> Self {
        RawParams { n: p.n, d: p.d }
    }
}

impl GroupParams {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!("modulus N={n} must be at least 2")));
        }
        if d == 0 {
            return Err(Error::InvalidParams("dimension d must be positive".into()));
        }
        let phase = d
            .checked_mul(2)
            .and_then(|e| u32::try_from(e).ok())
            .and_then(|e| n.checked_pow(e))
            .filter(|&s| s <= MAX_PHASE_SPACE);
        if phase.is_none() {
            return Err(Error::InvalidParams(format!("phase space N^(2d) for N={n}, d={d} exceeds {MAX_PHASE_SPACE}")));
        }
        Ok(Self { n, d })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d
    }

    /// N^d.
    #[inline]
    pub fn size(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    /// N^(2d).
    #[inline]
    pub fn phase_size(&self) -> usize {
        self.n.pow(2 * self.d as u32)
    }

    pub fn check_same(&self, other: &GroupParams) -> Result<()> {
        if self != other {
            return Err(Error::ParamsMismatch { left: self.to_string(), right: other.to_string() });
        }
        Ok(())
    }

    /// Row-major flat index of a multi-index of length `d`. Components are
    /// reduced mod N.
    pub fn flatten(&self, coords: &[usize]) -> usize {
        coords.iter().fold(0, |acc, &c| acc * self.n + c % self.n)
    }

    /// Inverse of [`GroupParams::flatten`] for a multi-index of length `k`.
    pub fn unflatten_into(&self, mut idx: usize, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            *slot = idx % self.n;
            idx /= self.n;
        }
    }

    pub fn unflatten(&self, idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.d];
        self.unflatten_into(idx, &mut out);
        out
    }

    /// Flat index of `a - b` for flat indices of ℤ_N^d.
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.combine(a, b, |x, y| x + self.n - y)
    }

    /// Flat index of `a + b` for flat indices of ℤ_N^d.
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.combine(a, b, |x, y| x + y)
    }

    /// Flat index of `-a`.
    pub fn neg(&self, a: usize) -> usize {
        self.combine(0, a, |x, y| x + self.n - y)
    }

    fn combine(&self, mut a: usize, mut b: usize, op: impl Fn(usize, usize) -> usize) -> usize {
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.d {
            let (ai, bi) = (a % self.n, b % self.n);
            out += (op(ai, bi) % self.n) * place;
            place *= self.n;
            a /= self.n;
            b /= self.n;
        }
        out
    }

    /// `a · b mod N` for flat indices of ℤ_N^d.
    pub fn dot(&self, mut a: usize, mut b: usize) -> usize {
        let mut acc = 0;
        for _ in 0..self.d {
            acc = (acc + (a % self.n) * (b % self.n)) % self.n;
            a /= self.n;
            b /= self.n;
        }
        acc
    }

    /// Splits a flat phase-space index into `(flat x, flat ω)`.
    #[inline]
    pub fn split(&self, z: usize) -> (usize, usize) {
        let s = self.size();
        (z / s, z % s)
    }

    #[inline]
    pub fn join(&self, x: usize, omega: usize) -> usize {
        x * self.size() + omega
    }

    /// Symmetric representative of a residue in `[-N/2, N/2)`.
    pub fn symmetric(&self, c: usize) -> i64 {
        let c = (c % self.n) as i64;
        let n = self.n as i64;
        if 2 * c >= n {
            c - n
        } else {
            c
        }
    }
}

impl fmt::Display for GroupParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={};d={}", self.n, self.d)
    }
}

/// A point `(x, ω)` of phase space with canonical residues in `0..N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PhaseSpacePoint {
    pub x: Vec<usize>,
    pub omega: Vec<usize>,
}

impl PhaseSpacePoint {
    pub fn new(params: &GroupParams, x: &[usize], omega: &[usize]) -> Result<Self> {
        for part in [x, omega] {
            if part.len() != params.d() {
                return Err(Error::DimensionMismatch { expected: params.d(), got: part.len() });
            }
        }
        let n = params.n();
        Ok(Self { x: x.iter().map(|c| c % n).collect(), omega: omega.iter().map(|c| c % n).collect() })
    }

    /// Builds a point from signed coordinates, reducing mod N.
    pub fn from_signed(params: &GroupParams, x: &[i64], omega: &[i64]) -> Result<Self> {
        let n = params.n() as i64;
        let red = |v: &[i64]| v.iter().map(|c| c.rem_euclid(n) as usize).collect::<Vec<_>>();
        Self::new(params, &red(x), &red(omega))
    }

    pub fn origin(params: &GroupParams) -> Self {
        Self { x: vec![0; params.d()], omega: vec![0; params.d()] }
    }

    pub fn from_flat(params: &GroupParams, z: usize) -> Self {
        let (x, w) = params.split(z);
        Self { x: params.unflatten(x), omega: params.unflatten(w) }
    }

    pub fn flat(&self, params: &GroupParams) -> usize {
        params.join(params.flatten(&self.x), params.flatten(&self.omega))
    }
}

impl fmt::Display for PhaseSpacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        if self.x.len() == 1 {
            write!(f, "({},{})", self.x[0], self.omega[0])
        } else {
            write!(f, "(({}),({}))", join(&self.x), join(&self.omega))
        }
    }
}

/// `exp(2πi m / N)`, exact at multiples of a quarter turn.
pub fn unit_root(m: usize, n: usize) -> C64 {
    let m = m % n;
    if (4 * m).is_multiple_of(n) {
        return match 4 * m / n {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
    }
    let (s, c) = (2.0 * PI * m as f64 / n as f64).sin_cos();
    C64::new(c, s)
}

/// Table of `exp(2πi m / N)` for `m` in `0..N`.
#[derive(Clone, Debug)]
pub struct Twiddles {
    n: usize,
    table: Vec<C64>,
}

impl Twiddles {
    pub fn new(n: usize) -> Self {
        Self { n, table: (0..n).map(|m| unit_root(m, n)).collect() }
    }

    /// `exp(2πi m / N)`.
    #[inline]
    pub fn pos(&self, m: usize) -> C64 {
        self.table[m % self.n]
    }

    /// `exp(-2πi m / N)`.
    #[inline]
    pub fn neg(&self, m: usize) -> C64 {
        self.table[(self.n - m % self.n) % self.n]
    }
}
