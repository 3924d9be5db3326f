//! Time-frequency shifts, the unitary DFT on ℤ_N^d and the symplectic DFT on
//! phase space.
//!
//! All sums are accumulated sequentially in index order so results are
//! reproducible bit for bit.

use crate::error::{Error, Result};
use crate::group::{GroupParams, PhaseSpacePoint, Twiddles, C64};
use crate::signal::{PhaseSpaceFunction, Signal};

/// `out[t] = f[t - x]`.
pub fn translate(f: &Signal, x: &[usize]) -> Result<Signal> {
    let p = *f.params();
    check_len(&p, x)?;
    let shift = p.flatten(x);
    Ok(Signal::from_fn(p, |t| f.values()[p.sub(t, shift)]))
}

/// `out[t] = exp(2πi ω·t / N) f[t]`.
pub fn modulate(f: &Signal, omega: &[usize]) -> Result<Signal> {
    let p = *f.params();
    check_len(&p, omega)?;
    let w = p.flatten(omega);
    let tw = Twiddles::new(p.n());
    Ok(Signal::from_fn(p, |t| tw.pos(p.dot(w, t)) * f.values()[t]))
}

/// `π(x, ω) f = M_ω T_x f`, i.e. `out[t] = exp(2πi ω·t / N) f[t - x]`.
pub fn tf_shift(f: &Signal, z: &PhaseSpacePoint) -> Result<Signal> {
    let p = *f.params();
    check_len(&p, &z.x)?;
    check_len(&p, &z.omega)?;
    Ok(tf_shift_flat(f, p.flatten(&z.x), p.flatten(&z.omega), &Twiddles::new(p.n())))
}

/// [`tf_shift`] on flat indices with a caller-provided twiddle table.
pub(crate) fn tf_shift_flat(f: &Signal, x: usize, omega: usize, tw: &Twiddles) -> Signal {
    let p = *f.params();
    Signal::from_fn(p, |t| tw.pos(p.dot(omega, t)) * f.values()[p.sub(t, x)])
}

/// Unitary DFT `f̂[j] = N^(-d/2) Σ_t f[t] exp(-2πi j·t / N)`.
pub fn dft(f: &Signal) -> Signal {
    transform_signal(f, false)
}

/// Inverse of [`dft`].
pub fn idft(f: &Signal) -> Signal {
    transform_signal(f, true)
}

fn transform_signal(f: &Signal, inverse: bool) -> Signal {
    let p = *f.params();
    let mut buf = f.values().to_vec();
    let tw = Twiddles::new(p.n());
    dft_axes(&mut buf, p.n(), p.d(), 0..p.d(), inverse, &tw);
    let scale = (p.size() as f64).sqrt().recip();
    buf.iter_mut().for_each(|v| *v *= scale);
    Signal::new(p, buf).expect("length preserved")
}

/// Symplectic DFT
/// `F̂ˢ(x, ω) = N^(-d) Σ_{(y,η)} exp(2πi (x·η - ω·y) / N) F(y, η)`.
///
/// The kernel is the conjugate of the commutation phase of
/// [`commutation_phase`]; with this orientation the transform of an STFT is a
/// pointwise multiple of the Rihaczek distribution. It is an involution and
/// an isometry.
pub fn symplectic_dft(big_f: &PhaseSpaceFunction) -> PhaseSpaceFunction {
    let p = *big_f.params();
    let (n, d, s) = (p.n(), p.d(), p.size());
    let tw = Twiddles::new(n);
    let mut buf = big_f.values().to_vec();
    // Σ_η F(y, η) e^{+2πi η·x/N} -> G(y, x)
    dft_axes(&mut buf, n, 2 * d, d..2 * d, true, &tw);
    // Σ_y G(y, x) e^{-2πi y·ω/N} -> H(ω, x)
    dft_axes(&mut buf, n, 2 * d, 0..d, false, &tw);
    let scale = (s as f64).recip();
    PhaseSpaceFunction::from_fn(p, |z| {
        let (x, w) = p.split(z);
        buf[p.join(w, x)] * scale
    })
}

/// Exponent `σ(z, z') = y·ω - x·η mod N` of the commutation relation
/// `π(z)π(z') = exp(2πi σ(z,z')/N) π(z')π(z)` for `z = (x,ω)`, `z' = (y,η)`.
pub fn commutation_phase(p: &GroupParams, z: usize, zp: usize) -> usize {
    let (x, w) = p.split(z);
    let (y, e) = p.split(zp);
    (p.dot(y, w) + p.n() - p.dot(x, e)) % p.n()
}

/// Unnormalized DFT along a contiguous range of axes of a tensor of shape
/// `[n; rank]` stored row-major. `inverse` selects the `+` sign in the
/// exponent.
pub(crate) fn dft_axes(
    buf: &mut [C64],
    n: usize,
    rank: usize,
    axes: std::ops::Range<usize>,
    inverse: bool,
    tw: &Twiddles,
) {
    let mut line = vec![C64::new(0.0, 0.0); n];
    let mut out = vec![C64::new(0.0, 0.0); n];
    for axis in axes {
        let stride = n.pow((rank - 1 - axis) as u32);
        let outer = n.pow(axis as u32);
        for o in 0..outer {
            for i in 0..stride {
                let base = o * n * stride + i;
                for (j, slot) in line.iter_mut().enumerate() {
                    *slot = buf[base + j * stride];
                }
                for (k, slot) in out.iter_mut().enumerate() {
                    *slot = line.iter().enumerate().fold(C64::new(0.0, 0.0), |acc, (j, v)| {
                        let w = if inverse { tw.pos(j * k) } else { tw.neg(j * k) };
                        acc + v * w
                    });
                }
                for (j, v) in out.iter().enumerate() {
                    buf[base + j * stride] = *v;
                }
            }
        }
    }
}

fn check_len(p: &GroupParams, v: &[usize]) -> Result<()> {
    if v.len() != p.d() {
        return Err(Error::DimensionMismatch { expected: p.d(), got: v.len() });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn p1(n: usize) -> GroupParams {
        GroupParams::new(n, 1).unwrap()
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    // Independent oracle: full d-dimensional double sum with angles computed
    // from floating-point products.
    fn naive_dft(f: &Signal) -> Signal {
        let p = *f.params();
        let n = p.n() as f64;
        Signal::from_fn(p, |j| {
            let cj = p.unflatten(j);
            let mut acc = c(0.0, 0.0);
            for t in 0..p.size() {
                let ct = p.unflatten(t);
                let dot: f64 = cj.iter().zip(&ct).map(|(a, b)| (*a * *b) as f64).sum();
                acc += f.values()[t] * C64::from_polar(1.0, -2.0 * PI * dot / n);
            }
            acc / (p.size() as f64).sqrt()
        })
    }

    fn naive_symplectic(big_f: &PhaseSpaceFunction) -> PhaseSpaceFunction {
        let p = *big_f.params();
        let n = p.n() as f64;
        PhaseSpaceFunction::from_fn(p, |z| {
            let pz = PhaseSpacePoint::from_flat(&p, z);
            let mut acc = c(0.0, 0.0);
            for zp in 0..p.phase_size() {
                let q = PhaseSpacePoint::from_flat(&p, zp);
                let xe: usize = pz.x.iter().zip(&q.omega).map(|(a, b)| a * b).sum();
                let wy: usize = pz.omega.iter().zip(&q.x).map(|(a, b)| a * b).sum();
                let ang = 2.0 * PI * (xe as f64 - wy as f64) / n;
                acc += big_f.values()[zp] * C64::from_polar(1.0, ang);
            }
            acc / p.size() as f64
        })
    }

    #[test]
    fn translate_delta() {
        let d0 = Signal::delta(p1(4), &[0]).unwrap();
        assert_eq!(translate(&d0, &[0]).unwrap(), d0);
        assert_eq!(translate(&d0, &[1]).unwrap(), Signal::delta(p1(4), &[1]).unwrap());
        assert!(matches!(translate(&d0, &[1, 1]), Err(Error::DimensionMismatch { expected: 1, got: 2 })));
    }

    #[test]
    fn translations_compose() {
        let f = Signal::random(p1(8), 11);
        for x in 0..8 {
            for y in 0..8 {
                let lhs = translate(&translate(&f, &[x]).unwrap(), &[y]).unwrap();
                let rhs = translate(&f, &[(x + y) % 8]).unwrap();
                assert_eq!(lhs, rhs);
                // direct index oracle
                for t in 0..8 {
                    assert_eq!(lhs.values()[t], f.values()[(t + 16 - x - y) % 8]);
                }
            }
        }
    }

    #[test]
    fn modulate_examples() {
        let f = Signal::random(p1(5), 2);
        assert_eq!(modulate(&f, &[0]).unwrap(), f);
        let one = Signal::constant(p1(4), c(1.0, 0.0));
        let m = modulate(&one, &[1]).unwrap();
        assert_eq!(m.values(), &[c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)]);
    }

    #[test]
    fn modulations_compose() {
        let f = Signal::random(p1(12), 5);
        for a in 0..12 {
            for b in 0..12 {
                let lhs = modulate(&modulate(&f, &[a]).unwrap(), &[b]).unwrap();
                let direct = Signal::from_fn(p1(12), |t| {
                    f.values()[t] * C64::from_polar(1.0, 2.0 * PI * ((a + b) * t) as f64 / 12.0)
                });
                assert!(lhs.max_abs_diff(&direct) < 1e-13);
                assert!(lhs.max_abs_diff(&modulate(&f, &[(a + b) % 12]).unwrap()) < 1e-13);
            }
        }
    }

    #[test]
    fn tf_shift_identity_and_isometry() {
        let p = p1(7);
        let f = Signal::random(p, 9);
        assert_eq!(tf_shift(&f, &PhaseSpacePoint::origin(&p)).unwrap(), f);
        let z = PhaseSpacePoint::new(&p, &[3], &[5]).unwrap();
        assert!((tf_shift(&f, &z).unwrap().norm() - f.norm()).abs() < 1e-13);
    }

    #[test]
    fn composition_law_elementwise() {
        let p = p1(8);
        let f = Signal::random(p, 21);
        let tw = Twiddles::new(8);
        for z in 0..p.phase_size() {
            for zp in 0..p.phase_size() {
                let (x, w) = p.split(z);
                let (y, e) = p.split(zp);
                let lhs = tf_shift_flat(&tf_shift_flat(&f, y, e, &tw), x, w, &tw);
                let phase = C64::from_polar(1.0, -2.0 * PI * (x * e) as f64 / 8.0);
                let rhs = tf_shift_flat(&f, (x + y) % 8, (w + e) % 8, &tw).scale(phase);
                assert!(lhs.max_abs_diff(&rhs) < 1e-12);
            }
        }
    }

    #[test]
    fn commutation_relation() {
        let p = p1(6);
        let f = Signal::random(p, 4);
        let tw = Twiddles::new(6);
        for z in 0..p.phase_size() {
            for zp in 0..p.phase_size() {
                let (x, w) = p.split(z);
                let (y, e) = p.split(zp);
                let lhs = tf_shift_flat(&tf_shift_flat(&f, y, e, &tw), x, w, &tw);
                let swapped = tf_shift_flat(&tf_shift_flat(&f, x, w, &tw), y, e, &tw);
                let ang = 2.0 * PI * ((y * w) as f64 - (x * e) as f64) / 6.0;
                assert!(lhs.max_abs_diff(&swapped.scale(C64::from_polar(1.0, ang))) < 1e-12);
                let via_sigma = tw.pos(commutation_phase(&p, z, zp));
                assert!((via_sigma - C64::from_polar(1.0, ang)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn dft_examples() {
        let d0 = Signal::delta(p1(4), &[0]).unwrap();
        assert!(dft(&d0).max_abs_diff(&Signal::constant(p1(4), c(0.5, 0.0))) < 1e-15);
        let f = Signal::random(p1(8), 3);
        assert!(dft(&dft(&f)).max_abs_diff(&f.reversed()) < 1e-13);
        assert!((dft(&f).norm() - f.norm()).abs() < 1e-13);
        assert!(idft(&dft(&f)).max_abs_diff(&f) < 1e-13);
    }

    #[test]
    fn dft_matches_naive_sum() {
        for (n, d) in [(8, 1), (5, 2), (6, 1)] {
            let p = GroupParams::new(n, d).unwrap();
            let f = Signal::random(p, 77);
            assert!(dft(&f).max_abs_diff(&naive_dft(&f)) < 1e-12);
        }
    }

    #[test]
    fn gaussian_is_dft_fixed() {
        for n in [4, 8, 13] {
            let g = Signal::gaussian(p1(n));
            assert!(dft(&g).max_abs_diff(&g) < 1e-12, "N={n}");
        }
        let g2 = Signal::gaussian(GroupParams::new(6, 2).unwrap());
        assert!(dft(&g2).max_abs_diff(&g2) < 1e-12);
    }

    #[test]
    fn symplectic_of_constant_is_scaled_delta() {
        let p = p1(4);
        let one = PhaseSpaceFunction::from_fn(p, |_| c(1.0, 0.0));
        let out = symplectic_dft(&one);
        let expect = PhaseSpaceFunction::delta(p, &PhaseSpacePoint::origin(&p)).scale(c(4.0, 0.0));
        assert!(out.max_abs_diff(&expect) < 1e-14);
        assert!(naive_symplectic(&one).max_abs_diff(&expect) < 1e-13);
    }

    #[test]
    fn symplectic_involution_and_parseval() {
        for (n, d) in [(6, 1), (3, 2), (8, 1)] {
            let p = GroupParams::new(n, d).unwrap();
            let big_f = PhaseSpaceFunction::random(p, 8);
            let once = symplectic_dft(&big_f);
            assert!(once.max_abs_diff(&naive_symplectic(&big_f)) < 1e-12);
            assert!(symplectic_dft(&once).max_abs_diff(&big_f) < 1e-12);
            assert!((once.norm_sqr() - big_f.norm_sqr()).abs() < 1e-10 * big_f.norm_sqr());
        }
    }
}
