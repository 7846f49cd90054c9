//! Per-trial channel draws and the capacity each scheme achieves on them.

use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::Scalar;

/// One draw of every fading coefficient plus the primary occupancy.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization<T> {
    pub h_sd: Complex<T>,
    pub h_se: Complex<T>,
    pub h_pd: Complex<T>,
    pub h_pe: Complex<T>,
    pub h_si: Vec<Complex<T>>,
    pub h_id: Vec<Complex<T>>,
    pub h_ie: Vec<Complex<T>>,
    pub h_pi: Vec<Complex<T>>,
    /// Primary transmitter active in this trial.
    pub alpha: bool,
}

/// `CN(0, var)`: real and imaginary parts each `N(0, var / 2)`.
fn complex_gaussian<T: Scalar, R: Rng + ?Sized>(rng: &mut R, var: T) -> Complex<T> {
    let scale = (var / T::c(2.0)).sqrt();
    let re = T::standard_normal(rng);
    let im = T::standard_normal(rng);
    Complex::new(re * scale, im * scale)
}

impl<T: Scalar> ChannelRealization<T> {
    pub fn zeroed(n_relays: usize) -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self {
            h_sd: z,
            h_se: z,
            h_pd: z,
            h_pe: z,
            h_si: vec![z; n_relays],
            h_id: vec![z; n_relays],
            h_ie: vec![z; n_relays],
            h_pi: vec![z; n_relays],
            alpha: false,
        }
    }

    /// Draws a realization with `alpha ~ Bernoulli(pi1)`.
    pub fn draw<R: Rng + ?Sized>(params: &SystemParams<T>, pi1: T, rng: &mut R) -> Self {
        let mut real = Self::zeroed(params.n_relays);
        real.alpha = T::standard_uniform(rng) < pi1;
        real.fill_gains(params, rng);
        real
    }

    /// Redraws every gain in place. Order: sd, se, pd, pe, then per relay
    /// si, id, ie, pi. `alpha` is left untouched.
    pub fn fill_gains<R: Rng + ?Sized>(&mut self, params: &SystemParams<T>, rng: &mut R) {
        let v = &params.variances;
        self.h_sd = complex_gaussian(rng, v.sd);
        self.h_se = complex_gaussian(rng, v.se);
        self.h_pd = complex_gaussian(rng, v.pd);
        self.h_pe = complex_gaussian(rng, v.pe);
        for i in 0..params.n_relays {
            self.h_si[i] = complex_gaussian(rng, v.si[i]);
            self.h_id[i] = complex_gaussian(rng, v.id[i]);
            self.h_ie[i] = complex_gaussian(rng, v.ie[i]);
            self.h_pi[i] = complex_gaussian(rng, v.pi[i]);
        }
    }

    /// Noise-plus-interference power at a receiver whose primary link is `h_p`.
    fn impairment(&self, h_p: Complex<T>, gamma_p: T) -> T {
        if self.alpha {
            gamma_p * h_p.norm_sqr() + T::one()
        } else {
            T::one()
        }
    }
}

fn full_rate<T: Scalar>(snr: T) -> T {
    snr.ln_1p() / T::LN_2()
}

fn half_rate<T: Scalar>(snr: T) -> T {
    full_rate(snr) / T::c(2.0)
}

/// Capacities `(c_sd, c_se)` of one-slot direct transmission.
pub fn cap_direct<T: Scalar>(real: &ChannelRealization<T>, params: &SystemParams<T>) -> (T, T) {
    let gs = params.gamma_s;
    let gp = params.gamma_p;
    (
        full_rate(gs * real.h_sd.norm_sqr() / real.impairment(real.h_pd, gp)),
        full_rate(gs * real.h_se.norm_sqr() / real.impairment(real.h_pe, gp)),
    )
}

/// Relays that decode the first-slot broadcast, as a bitmask over indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DecodingSet {
    pub bits: u32,
}

impl DecodingSet {
    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }
}

/// Relay `i` decodes iff `½ log2(1 + SINR_si) > R`.
pub fn decoding_set<T: Scalar>(
    real: &ChannelRealization<T>,
    params: &SystemParams<T>,
) -> DecodingSet {
    let mut bits = 0u32;
    for (i, (h_si, h_pi)) in real.h_si.iter().zip(&real.h_pi).enumerate() {
        let snr = params.gamma_s * h_si.norm_sqr() / real.impairment(*h_pi, params.gamma_p);
        if half_rate(snr) > params.rate {
            bits |= 1 << i;
        }
    }
    DecodingSet { bits }
}

/// Member of `dset` with the largest `|h_id|^2`, lowest index on ties.
pub fn best_relay<T: Scalar>(real: &ChannelRealization<T>, dset: DecodingSet) -> Option<usize> {
    let mut best: Option<(usize, T)> = None;
    for i in dset.iter() {
        let g = real.h_id[i].norm_sqr();
        if best.is_none_or(|(_, bg)| g > bg) {
            best = Some((i, g));
        }
    }
    best.map(|(i, _)| i)
}

/// Second-slot capacities `(c_bd, c_be)` when the best decoding relay
/// forwards alone.
pub fn srs_capacities<T: Scalar>(
    real: &ChannelRealization<T>,
    dset: DecodingSet,
    params: &SystemParams<T>,
) -> Result<(T, T)> {
    let b = best_relay(real, dset).ok_or(Error::EmptyDecodingSet("srs"))?;
    let gs = params.gamma_s;
    let gp = params.gamma_p;
    Ok((
        half_rate(gs * real.h_id[b].norm_sqr() / real.impairment(real.h_pd, gp)),
        half_rate(gs * real.h_ie[b].norm_sqr() / real.impairment(real.h_pe, gp)),
    ))
}

/// Beamforming weights over the decoding set that maximise the destination
/// SNR: `w = conj(H_d) / |H_d|`.
#[derive(Debug, Clone, PartialEq)]
pub struct MrsWeights<T> {
    /// Relay index of each weight.
    pub relays: Vec<usize>,
    pub w: Vec<Complex<T>>,
}

impl<T: Scalar> MrsWeights<T> {
    pub fn optimal(real: &ChannelRealization<T>, dset: DecodingSet) -> Result<Self> {
        if dset.is_empty() {
            return Err(Error::EmptyDecodingSet("mrs"));
        }
        let relays: Vec<usize> = dset.iter().collect();
        let norm = relays
            .iter()
            .map(|&i| real.h_id[i].norm_sqr())
            .sum::<T>()
            .sqrt();
        let w = relays.iter().map(|&i| real.h_id[i].conj() / norm).collect();
        Ok(Self { relays, w })
    }

    pub fn norm(&self) -> T {
        self.w.iter().map(|w| w.norm_sqr()).sum::<T>().sqrt()
    }

    /// `|w^T h|^2` for the per-relay channel vector `h`.
    pub fn gain(&self, h: &[Complex<T>]) -> T {
        let zero = Complex::new(T::zero(), T::zero());
        self.relays
            .iter()
            .zip(&self.w)
            .fold(zero, |acc, (&i, &w)| acc + w * h[i])
            .norm_sqr()
    }

    /// Destination SINR of these weights; total relay power is `gamma_s`.
    pub fn destination_sinr(&self, real: &ChannelRealization<T>, params: &SystemParams<T>) -> T {
        params.gamma_s * self.gain(&real.h_id) / real.impairment(real.h_pd, params.gamma_p)
    }
}

/// Second-slot capacities `(c_d, c_e)` when every decoding relay beamforms
/// with [`MrsWeights::optimal`].
pub fn mrs_capacities<T: Scalar>(
    real: &ChannelRealization<T>,
    dset: DecodingSet,
    params: &SystemParams<T>,
) -> Result<(T, T)> {
    if dset.is_empty() {
        return Err(Error::EmptyDecodingSet("mrs"));
    }
    let zero = Complex::new(T::zero(), T::zero());
    let mut hd2 = T::zero();
    let mut cross = zero;
    for i in dset.iter() {
        hd2 += real.h_id[i].norm_sqr();
        cross += real.h_id[i].conj() * real.h_ie[i];
    }
    let gs = params.gamma_s;
    let gp = params.gamma_p;
    Ok((
        half_rate(gs * hd2 / real.impairment(real.h_pd, gp)),
        half_rate(gs * (cross.norm_sqr() / hd2) / real.impairment(real.h_pe, gp)),
    ))
}

/// Unit vector `v` drawn uniformly from the complex sphere of the subspace
/// `{v : v^T h_id = 0}`, written into `out`.
pub fn an_direction<T: Scalar, R: Rng + ?Sized>(
    h_id: &[Complex<T>],
    rng: &mut R,
    out: &mut Vec<Complex<T>>,
) {
    let one = T::one();
    out.clear();
    out.extend(h_id.iter().map(|_| complex_gaussian(rng, one)));
    // v^T h = g^H v with g = conj(h); project v off g
    let g_norm2: T = h_id.iter().map(|h| h.norm_sqr()).sum();
    let proj = out
        .iter()
        .zip(h_id)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (v, h)| {
            acc + v * h
        });
    if g_norm2 > T::zero() {
        for (v, h) in out.iter_mut().zip(h_id) {
            *v -= h.conj() * (proj / g_norm2);
        }
    }
    let norm = out.iter().map(|v| v.norm_sqr()).sum::<T>().sqrt();
    for v in out.iter_mut() {
        *v /= norm;
    }
}

/// Capacities `(c_d, c_e)` of the artificial-noise baseline: the
/// transmitter sends at `gamma_s / 2` while all relays emit noise of total
/// power `gamma_s / 2` along the unit vector `v`.
pub fn an_capacities<T: Scalar>(
    real: &ChannelRealization<T>,
    v: &[Complex<T>],
    params: &SystemParams<T>,
) -> Result<(T, T)> {
    if params.n_relays < 2 {
        return Err(Error::TooFewRelays {
            scheme: "an",
            min: 2,
            got: params.n_relays,
        });
    }
    let half = params.gamma_s / T::c(2.0);
    let gp = params.gamma_p;
    let leak = v
        .iter()
        .zip(&real.h_ie)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (v, h)| {
            acc + v * h
        })
        .norm_sqr();
    Ok((
        full_rate(half * real.h_sd.norm_sqr() / real.impairment(real.h_pd, gp)),
        full_rate(half * real.h_se.norm_sqr() / (half * leak + real.impairment(real.h_pe, gp))),
    ))
}
