//! System model: parameters, spectrum-sensing posterior and rate thresholds.
//!
//! All SNRs are linear ratios with the noise power normalised to one, so a
//! transmit SNR is simply the transmit power. dB values only appear at the
//! configuration boundary (see [`db_to_linear`]).

use crate::error::{Error, Result};
use crate::Scalar;

/// Largest relay count accepted. The closed forms enumerate all
/// `2^N - 1` non-empty decoding sets.
pub const MAX_RELAYS: usize = 20;

/// Transmission scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// Transmitter straight to destination.
    Direct,
    /// Single-relay selection: best decoding relay by `|h_id|^2`.
    Srs,
    /// Multi-relay selection: all decoding relays beamform.
    Mrs,
    /// Direct transmission with relays jamming in the null space of the
    /// relay -> destination channel.
    An,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Direct, Scheme::Srs, Scheme::Mrs, Scheme::An];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Direct => "direct",
            Scheme::Srs => "srs",
            Scheme::Mrs => "mrs",
            Scheme::An => "an",
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|sch| sch.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown scheme `{s}` (expected direct, srs, mrs or an)"
                ))
            })
    }
}

/// Mean channel power gains `E|h|^2` of every link.
///
/// `s` is the secondary transmitter, `d` the secondary destination, `e` the
/// eavesdropper, `p` the primary base station and `i` a relay.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkVariances<T> {
    pub sd: T,
    pub se: T,
    pub pd: T,
    pub pe: T,
    /// transmitter -> relay i
    pub si: Vec<T>,
    /// relay i -> destination
    pub id: Vec<T>,
    /// relay i -> eavesdropper
    pub ie: Vec<T>,
    /// primary -> relay i
    pub pi: Vec<T>,
}

impl<T: Scalar> LinkVariances<T> {
    /// Same variance on every relay link of a kind.
    #[allow(clippy::too_many_arguments)]
    pub fn homogeneous(
        n_relays: usize,
        sd: T,
        se: T,
        pd: T,
        pe: T,
        si: T,
        id: T,
        ie: T,
        pi: T,
    ) -> Self {
        Self {
            sd,
            se,
            pd,
            pe,
            si: vec![si; n_relays],
            id: vec![id; n_relays],
            ie: vec![ie; n_relays],
            pi: vec![pi; n_relays],
        }
    }

    /// Every `E|h_id|^2` equal (exact comparison).
    pub fn is_iid_relay_to_sd(&self) -> bool {
        self.id.windows(2).all(|w| w[0] == w[1])
    }

    pub fn cast<U: Scalar>(&self) -> LinkVariances<U> {
        let v = |x: T| U::c(x.to_f64().unwrap_or(f64::NAN));
        let vs = |xs: &[T]| xs.iter().map(|&x| v(x)).collect();
        LinkVariances {
            sd: v(self.sd),
            se: v(self.se),
            pd: v(self.pd),
            pe: v(self.pe),
            si: vs(&self.si),
            id: vs(&self.id),
            ie: vs(&self.ie),
            pi: vs(&self.pi),
        }
    }
}

/// Scalar model parameters plus per-link variances.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams<T> {
    /// Prior probability that the licensed band is idle.
    pub p0: T,
    /// Detection probability `P(sensed busy | busy)`.
    pub pd: T,
    /// False-alarm probability `P(sensed busy | idle)`.
    pub pf: T,
    /// Primary transmit SNR (linear).
    pub gamma_p: T,
    /// Secondary transmit SNR (linear).
    pub gamma_s: T,
    /// Target rate in bits/s/Hz.
    pub rate: T,
    pub n_relays: usize,
    pub variances: LinkVariances<T>,
}

impl<T: Scalar> SystemParams<T> {
    pub fn validate(&self) -> Result<()> {
        validate(self)
    }

    pub fn with_gamma_s(&self, gamma_s: T) -> Self {
        Self {
            gamma_s,
            ..self.clone()
        }
    }

    pub fn posterior(&self) -> Result<SensingPosterior<T>> {
        sensing_posterior(self.p0, self.pd, self.pf)
    }

    pub fn thresholds(&self) -> Result<Thresholds<T>> {
        thresholds(self.rate, self.gamma_s)
    }

    pub fn cast<U: Scalar>(&self) -> SystemParams<U> {
        let v = |x: T| U::c(x.to_f64().unwrap_or(f64::NAN));
        SystemParams {
            p0: v(self.p0),
            pd: v(self.pd),
            pf: v(self.pf),
            gamma_p: v(self.gamma_p),
            gamma_s: v(self.gamma_s),
            rate: v(self.rate),
            n_relays: self.n_relays,
            variances: self.variances.cast(),
        }
    }
}

fn f(x: impl Scalar) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn check_probability<T: Scalar>(field: &'static str, x: T) -> Result<()> {
    if x >= T::zero() && x <= T::one() {
        Ok(())
    } else {
        Err(Error::ProbabilityOutOfRange { field, value: f(x) })
    }
}

fn check_nonnegative<T: Scalar>(field: &'static str, x: T) -> Result<()> {
    if x >= T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            field,
            value: f(x),
            constraint: "finite and >= 0",
        })
    }
}

fn check_positive<T: Scalar>(field: &'static str, x: T) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            field,
            value: f(x),
            constraint: "finite and > 0",
        })
    }
}

/// Checks every parameter invariant, reporting the first offending field.
pub fn validate<T: Scalar>(params: &SystemParams<T>) -> Result<()> {
    check_probability("p0", params.p0)?;
    check_probability("pd", params.pd)?;
    check_probability("pf", params.pf)?;
    check_nonnegative("gamma_p", params.gamma_p)?;
    check_nonnegative("gamma_s", params.gamma_s)?;
    check_positive("rate", params.rate)?;
    if params.n_relays > MAX_RELAYS {
        return Err(Error::EnumerationGuard {
            what: "n_relays",
            size: params.n_relays,
            max: MAX_RELAYS,
        });
    }
    let v = &params.variances;
    check_positive("sigma2.sd", v.sd)?;
    check_positive("sigma2.se", v.se)?;
    check_positive("sigma2.pd", v.pd)?;
    check_positive("sigma2.pe", v.pe)?;
    for (field, xs) in [
        ("sigma2.si", &v.si),
        ("sigma2.id", &v.id),
        ("sigma2.ie", &v.ie),
        ("sigma2.pi", &v.pi),
    ] {
        if xs.len() != params.n_relays {
            return Err(Error::LengthMismatch {
                field,
                len: xs.len(),
                expected: params.n_relays,
            });
        }
        for &x in xs.iter() {
            check_positive(field, x)?;
        }
    }
    Ok(())
}

/// Posterior occupancy of the band given that sensing declared it idle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensingPosterior<T> {
    /// `P(idle | sensed idle)`
    pub pi0: T,
    /// `P(busy | sensed idle)`, always `1 - pi0`.
    pub pi1: T,
}

/// Bayes posterior of the band state given a sensed-idle decision.
///
/// A zero numerator with a positive denominator is a valid conditional and
/// yields `pi0 = 0`; only a zero denominator is an error.
pub fn sensing_posterior<T: Scalar>(p0: T, pd: T, pf: T) -> Result<SensingPosterior<T>> {
    check_probability("p0", p0)?;
    check_probability("pd", pd)?;
    check_probability("pf", pf)?;
    let one = T::one();
    let idle = p0 * (one - pf);
    let missed = (one - p0) * (one - pd);
    let denom = idle + missed;
    if denom <= T::zero() {
        return Err(Error::DegenerateSensing);
    }
    let pi0 = (idle / denom).min(one);
    Ok(SensingPosterior {
        pi0,
        pi1: one - pi0,
    })
}

/// SNR-normalised rate thresholds for one-slot and two-slot transmission.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds<T> {
    /// `(2^R - 1) / gamma_s`
    pub delta: T,
    /// `(2^{2R} - 1) / gamma_s`
    pub lambda: T,
}

pub fn thresholds<T: Scalar>(rate: T, gamma_s: T) -> Result<Thresholds<T>> {
    check_positive("rate", rate)?;
    check_nonnegative("gamma_s", gamma_s)?;
    if gamma_s == T::zero() {
        return Err(Error::ZeroTransmitSnr);
    }
    let ln2 = T::LN_2();
    Ok(Thresholds {
        delta: (rate * ln2).exp_m1() / gamma_s,
        lambda: (T::c(2.0) * rate * ln2).exp_m1() / gamma_s,
    })
}

pub fn db_to_linear<T: Scalar>(db: T) -> T {
    T::c(10.0).powf(db / T::c(10.0))
}

pub fn linear_to_db<T: Scalar>(x: T) -> T {
    T::c(10.0) * x.log10()
}
