//! Monte Carlo estimation of outage and intercept probabilities.
//!
//! Every trial owns a ChaCha8 stream keyed by the seed and indexed by the
//! trial number, and the per-trial event counts are reduced as integers.
//! Results therefore depend only on `(schemes, params, trials, seed)`, not on
//! how trials are split across worker threads. Because the stream of trial
//! `t` does not depend on `gamma_s` either, sweeping `gamma_s` with a fixed
//! seed reuses the same fading draws at every point.

mod channel;

pub use channel::{
    an_capacities, an_direction, best_relay, cap_direct, decoding_set, mrs_capacities,
    srs_capacities, ChannelRealization, DecodingSet, MrsWeights,
};

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{validate, Scheme, SystemParams};
use crate::Scalar;

/// How the sensed-idle conditioning is realised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sampling {
    /// Draw occupancy from the posterior given a sensed-idle band.
    #[default]
    Posterior,
    /// Draw the true state and the sensing outcome, retrying until the band
    /// is sensed idle.
    Rejection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub trials: u64,
    pub seed: u64,
    /// Worker threads; 0 uses the rayon default.
    pub workers: usize,
    pub sampling: Sampling,
}

impl SimConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed,
            workers: 0,
            sampling: Sampling::Posterior,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimResult<T> {
    pub op_hat: T,
    pub ip_hat: T,
    pub op_se: T,
    pub ip_se: T,
    pub trials: u64,
    pub seed: u64,
}

impl<T: Scalar> SimResult<T> {
    fn from_counts(outages: u64, intercepts: u64, trials: u64, seed: u64) -> Self {
        let n = T::from_u64(trials).expect("trial count representable");
        let p = |k: u64| T::from_u64(k).expect("count representable") / n;
        let se = |p: T| (p * (T::one() - p) / n).sqrt();
        let (op, ip) = (p(outages), p(intercepts));
        Self {
            op_hat: op,
            ip_hat: ip,
            op_se: se(op),
            ip_se: se(ip),
            trials,
            seed,
        }
    }
}

const CHUNK: u64 = 4096;

/// Stream for trial `index`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Outage and intercept counts for one scheme.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Counts {
    outage: u64,
    intercept: u64,
}

struct Worker<'a, T> {
    params: &'a SystemParams<T>,
    schemes: &'a [Scheme],
    pi1: T,
    busy_prior: T,
    sampling: Sampling,
    real: ChannelRealization<T>,
    noise_dir: Vec<Complex<T>>,
}

impl<'a, T: Scalar> Worker<'a, T> {
    fn occupancy<R: Rng>(&self, rng: &mut R) -> bool {
        match self.sampling {
            Sampling::Posterior => T::standard_uniform(rng) < self.pi1,
            Sampling::Rejection => loop {
                let busy = T::standard_uniform(rng) < self.busy_prior;
                let u = T::standard_uniform(rng);
                let sensed_idle = if busy {
                    u >= self.params.pd
                } else {
                    u >= self.params.pf
                };
                if sensed_idle {
                    break busy;
                }
            },
        }
    }

    fn trial(&mut self, seed: u64, index: u64, counts: &mut [Counts]) -> Result<()> {
        let mut rng = trial_rng(seed, index);
        self.real.alpha = self.occupancy(&mut rng);
        self.real.fill_gains(self.params, &mut rng);
        let rate = self.params.rate;
        let dset = decoding_set(&self.real, self.params);
        for (scheme, c) in self.schemes.iter().zip(counts.iter_mut()) {
            let (cd, ce) = match scheme {
                Scheme::Direct => cap_direct(&self.real, self.params),
                Scheme::Srs | Scheme::Mrs if dset.is_empty() => (T::zero(), T::zero()),
                Scheme::Srs => srs_capacities(&self.real, dset, self.params)?,
                Scheme::Mrs => mrs_capacities(&self.real, dset, self.params)?,
                Scheme::An => {
                    an_direction(&self.real.h_id, &mut rng, &mut self.noise_dir);
                    an_capacities(&self.real, &self.noise_dir, self.params)?
                }
            };
            c.outage += u64::from(cd < rate);
            c.intercept += u64::from(ce > rate);
        }
        Ok(())
    }
}

fn check_scheme<T>(scheme: Scheme, params: &SystemParams<T>) -> Result<()> {
    let min = match scheme {
        Scheme::Direct => 0,
        Scheme::Srs | Scheme::Mrs => 1,
        Scheme::An => 2,
    };
    if params.n_relays < min {
        return Err(Error::TooFewRelays {
            scheme: scheme.name(),
            min,
            got: params.n_relays,
        });
    }
    Ok(())
}

/// Simulates several schemes on the same channel draws.
pub fn simulate_schemes<T: Scalar>(
    schemes: &[Scheme],
    params: &SystemParams<T>,
    cfg: &SimConfig,
) -> Result<Vec<SimResult<T>>> {
    validate(params)?;
    if cfg.trials == 0 {
        return Err(Error::InvalidParameter {
            field: "trials",
            value: 0.0,
            constraint: ">= 1",
        });
    }
    for &s in schemes {
        check_scheme(s, params)?;
    }
    let post = params.posterior()?;
    if params.gamma_s == T::zero() {
        return Ok(schemes
            .iter()
            .map(|_| SimResult::from_counts(cfg.trials, 0, cfg.trials, cfg.seed))
            .collect());
    }

    let run_chunk = |chunk: u64| -> Result<Vec<Counts>> {
        let mut worker = Worker {
            params,
            schemes,
            pi1: post.pi1,
            busy_prior: T::one() - params.p0,
            sampling: cfg.sampling,
            real: ChannelRealization::zeroed(params.n_relays),
            noise_dir: Vec::with_capacity(params.n_relays),
        };
        let mut counts = vec![Counts::default(); schemes.len()];
        let start = chunk * CHUNK;
        let end = (start + CHUNK).min(cfg.trials);
        for t in start..end {
            worker.trial(cfg.seed, t, &mut counts)?;
        }
        Ok(counts)
    };
    let merge = |mut a: Vec<Counts>, b: Vec<Counts>| {
        for (x, y) in a.iter_mut().zip(b) {
            x.outage += y.outage;
            x.intercept += y.intercept;
        }
        a
    };
    let chunks = cfg.trials.div_ceil(CHUNK);
    let empty = || vec![Counts::default(); schemes.len()];

    let totals = if cfg.workers == 1 {
        (0..chunks)
            .map(run_chunk)
            .try_fold(empty(), |a, b| b.map(|b| merge(a, b)))?
    } else {
        let reduce = || {
            (0..chunks)
                .into_par_iter()
                .map(run_chunk)
                .try_reduce(empty, |a, b| Ok(merge(a, b)))
        };
        if cfg.workers == 0 {
            reduce()?
        } else {
            rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.workers)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?
                .install(reduce)?
        }
    };
    Ok(totals
        .into_iter()
        .map(|c| SimResult::from_counts(c.outage, c.intercept, cfg.trials, cfg.seed))
        .collect())
}

/// Relative-frequency estimate of `(OP, IP)` for one scheme.
pub fn simulate<T: Scalar>(
    scheme: Scheme,
    params: &SystemParams<T>,
    trials: u64,
    seed: u64,
) -> Result<SimResult<T>> {
    let res = simulate_schemes(&[scheme], params, &SimConfig::new(trials, seed))?;
    Ok(res[0])
}
