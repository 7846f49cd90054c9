//! Closed-form outage and intercept probabilities, conditioned on the band
//! being sensed idle.
//!
//! Each scheme result is assembled from two branches: the band truly idle
//! (weight `pi0`, no primary interference) and the band truly busy after a
//! missed detection (weight `pi1`, every receiver also sees the primary
//! transmitter). Within a branch the relay schemes sum over all non-empty
//! decoding sets in binary-counter order.
//!
//! The selection formulas contain inclusion-exclusion sums whose terms are
//! of order one while the result may be tiny at high SNR. Those sums, and
//! the outer sums over decoding sets, are carried in double-word arithmetic
//! ([`Dd`]) and rounded once at the end.

use crate::error::{Error, Result};
use crate::model::{validate, Scheme, SystemParams};
use crate::special::{inc_gamma_reg, ln_exp_partial_sum, subset_sum_transform, Dd};
use crate::Scalar;

/// Per-branch values: `*_h0` given the band idle, `*_h1` given it busy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchTerms<T> {
    pub op_h0: T,
    pub op_h1: T,
    pub ip_h0: Option<T>,
    pub ip_h1: Option<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticResult<T> {
    pub op: T,
    /// Absent for MRS, whose intercept probability has no closed form.
    pub ip: Option<T>,
    pub terms: Option<BranchTerms<T>>,
}

fn clamp01<T: Scalar>(x: T) -> T {
    x.max(T::zero()).min(T::one())
}

/// `P(X < x)` for `X ~ Exp(mean)`.
pub fn exp_cdf<T: Scalar>(x: T, mean: T) -> T {
    -(-x / mean).exp_m1()
}

/// `P(X > x)` for `X ~ Exp(mean)`.
pub fn exp_survival<T: Scalar>(x: T, mean: T) -> T {
    (-x / mean).exp()
}

/// `P(X < x gamma_p Y + x)` for independent `X ~ Exp(mean)`,
/// `Y ~ Exp(mean_interf)`: `1 - mean / (mean_interf gamma_p x + mean) e^{-x/mean}`.
pub fn exp_affine_cdf<T: Scalar>(x: T, mean: T, mean_interf: T, gamma_p: T) -> T {
    -(-(x / mean) - (mean_interf * gamma_p * x / mean).ln_1p()).exp_m1()
}

/// Complement of [`exp_affine_cdf`].
pub fn exp_affine_survival<T: Scalar>(x: T, mean: T, mean_interf: T, gamma_p: T) -> T {
    (-(x / mean) - (mean_interf * gamma_p * x / mean).ln_1p()).exp()
}

/// `P(max_i X_i < lam)`, independent `X_i ~ Exp(means[i])`.
pub fn max_exp_cdf<T: Scalar>(lam: T, means: &[T]) -> T {
    means
        .iter()
        .map(|&s| exp_cdf(lam, s))
        .fold(T::one(), |a, b| a * b)
}

/// Inclusion-exclusion table for `P(max_{i in S} X_i < lam gamma_p Y + lam)`
/// over every subset `S` (indexed by bitmask) of the given relays:
/// `1 + sum_{nonempty S' in S} (-1)^{|S'|} e^{-A} / (1 + gamma_p sigma_pd A)`
/// with `A = sum_{i in S'} lam / means[i]`.
fn max_affine_table<T: Scalar>(lam: T, means: &[T], mean_interf: T, gamma_p: T) -> Vec<Dd<T>> {
    let n = means.len();
    let a: Vec<Dd<T>> = means.iter().map(|&s| Dd::new(lam).div_scalar(s)).collect();
    let c = Dd::from_prod(gamma_p, mean_interf);
    let size = 1usize << n;
    let mut sums = vec![Dd::zero(); size];
    let mut table = vec![Dd::zero(); size];
    table[0] = Dd::one();
    for mask in 1..size {
        let low = mask.trailing_zeros() as usize;
        let acc = sums[mask & (mask - 1)] + a[low];
        sums[mask] = acc;
        let term = (-acc).exp() / (Dd::one() + c * acc);
        table[mask] = if mask.count_ones() % 2 == 1 {
            -term
        } else {
            term
        };
    }
    subset_sum_transform(&mut table, n);
    table
}

/// `P(max_i X_i < lam gamma_p Y + lam)` with `X_i ~ Exp(means[i])`,
/// `Y ~ Exp(mean_interf)`, by inclusion-exclusion over subsets.
pub fn max_exp_affine_cdf<T: Scalar>(lam: T, means: &[T], mean_interf: T, gamma_p: T) -> T {
    let table = max_affine_table(lam, means, mean_interf, gamma_p);
    clamp01(table[table.len() - 1].value())
}

/// For relay `i`, `P(X_i > max_{j in C} X_j)` for every `C` not containing
/// `i` (and, by zero padding, every mask containing `i` as the same value
/// with `i` dropped). `X_j ~ Exp(means[j])`.
fn win_table<T: Scalar>(i: usize, means: &[T]) -> Vec<Dd<T>> {
    let n = means.len();
    let size = 1usize << n;
    let ratio: Vec<Dd<T>> = means
        .iter()
        .map(|&s| Dd::new(means[i]).div_scalar(s))
        .collect();
    let mut sums = vec![Dd::zero(); size];
    let mut table = vec![Dd::zero(); size];
    table[0] = Dd::one();
    let bit_i = 1usize << i;
    for mask in 1..size {
        if mask & bit_i != 0 {
            continue;
        }
        let low = mask.trailing_zeros() as usize;
        let acc = sums[mask & (mask - 1)] + ratio[low];
        sums[mask] = acc;
        let term = (Dd::one() + acc).recip();
        table[mask] = if mask.count_ones() % 2 == 1 {
            -term
        } else {
            term
        };
    }
    for bit in (0..n).filter(|&b| b != i) {
        let b = 1usize << bit;
        for mask in 0..size {
            if mask & b != 0 {
                let lower = table[mask ^ b];
                table[mask] += lower;
            }
        }
    }
    // masks containing i inherit the value of the mask without i
    for mask in 0..size {
        if mask & bit_i != 0 {
            table[mask] = table[mask ^ bit_i];
        }
    }
    table
}

/// Probability that relay `i` has the largest `|h_id|^2` in the set.
pub fn selection_probability<T: Scalar>(i: usize, means_id: &[T]) -> T {
    let table = win_table(i, means_id);
    clamp01(table[table.len() - 1].value())
}

/// `P(|h_be|^2 > lam gamma_p |h_pe|^2 + lam)` where `b` is the relay with
/// the largest `|h_id|^2`. With `gamma_p = 0` the interference term drops.
pub fn best_relay_exceed<T: Scalar>(
    lam: T,
    means_id: &[T],
    means_ie: &[T],
    mean_pe: T,
    gamma_p: T,
) -> T {
    let mut acc = Dd::zero();
    for (i, &s_ie) in means_ie.iter().enumerate() {
        let exceed = exp_affine_survival(lam, s_ie, mean_pe, gamma_p);
        acc += Dd::new(exceed) * Dd::new(selection_probability(i, means_id));
    }
    clamp01(acc.value())
}

/// `P(sum of k i.i.d. Exp(mean) < lam)`.
pub fn sum_exp_cdf<T: Scalar>(lam: T, k: usize, mean: T) -> T {
    inc_gamma_reg(lam / mean, k)
}

/// `P(X < gamma_p lam Y + lam)` for `X` a sum of `k` i.i.d. `Exp(mean)`
/// and `Y ~ Exp(mean_interf)`.
///
/// The second term `[1 - P(x1 + b, k)] e^{b} / (1 + mean / (mean_interf gamma_p lam))^k`
/// with `b = 1 / (mean_interf gamma_p)` is evaluated in the log domain; the
/// `e^{b}` factor cancels analytically against the `e^{-(x1 + b)}` inside
/// the upper incomplete gamma.
pub fn sum_exp_affine_cdf<T: Scalar>(lam: T, k: usize, mean: T, mean_interf: T, gamma_p: T) -> T {
    if k == 0 {
        return T::one();
    }
    let x1 = lam / mean;
    if gamma_p == T::zero() || lam == T::zero() {
        return inc_gamma_reg(x1, k);
    }
    if k == 1 {
        return max_exp_affine_cdf(lam, &[mean], mean_interf, gamma_p);
    }
    let b = (mean_interf * gamma_p).recip();
    let x2 = x1 + b;
    let k_t = T::from_count(k);
    let ln_tail =
        -x1 + ln_exp_partial_sum(x2, k) - k_t * (mean / (mean_interf * gamma_p * lam)).ln_1p();
    clamp01(inc_gamma_reg(x1, k) + ln_tail.exp())
}

/// Limit at zero transmit power: certain outage, no interception.
fn zero_power<T: Scalar>(with_ip: bool) -> AnalyticResult<T> {
    let (one, zero) = (T::one(), T::zero());
    let ip = with_ip.then_some(zero);
    AnalyticResult {
        op: one,
        ip,
        terms: Some(BranchTerms {
            op_h0: one,
            op_h1: one,
            ip_h0: ip,
            ip_h1: ip,
        }),
    }
}

fn assemble<T: Scalar>(pi0: T, pi1: T, t: BranchTerms<T>) -> AnalyticResult<T> {
    let mix = |a: T, b: T| clamp01(pi0 * a + pi1 * b);
    AnalyticResult {
        op: mix(t.op_h0, t.op_h1),
        ip: t.ip_h0.zip(t.ip_h1).map(|(a, b)| mix(a, b)),
        terms: Some(t),
    }
}

/// Direct transmission.
pub fn direct<T: Scalar>(params: &SystemParams<T>) -> Result<AnalyticResult<T>> {
    validate(params)?;
    let post = params.posterior()?;
    if params.gamma_s == T::zero() {
        return Ok(zero_power(true));
    }
    let delta = params.thresholds()?.delta;
    let v = &params.variances;
    let gp = params.gamma_p;
    let terms = BranchTerms {
        op_h0: exp_cdf(delta, v.sd),
        op_h1: exp_affine_cdf(delta, v.sd, v.pd, gp),
        ip_h0: Some(exp_survival(delta, v.se)),
        ip_h1: Some(exp_affine_survival(delta, v.se, v.pe, gp)),
    };
    Ok(assemble(post.pi0, post.pi1, terms))
}

/// Per-relay probabilities of failing (`fail`) and succeeding (`ok`) to
/// decode in the first slot, for one branch.
struct Decoding<T> {
    fail: Vec<T>,
    ok: Vec<T>,
}

impl<T: Scalar> Decoding<T> {
    fn idle(lam: T, params: &SystemParams<T>) -> Self {
        let si = &params.variances.si;
        Self {
            fail: si.iter().map(|&s| exp_cdf(lam, s)).collect(),
            ok: si.iter().map(|&s| exp_survival(lam, s)).collect(),
        }
    }

    fn busy(lam: T, params: &SystemParams<T>) -> Self {
        let v = &params.variances;
        let gp = params.gamma_p;
        Self {
            fail: v
                .si
                .iter()
                .zip(&v.pi)
                .map(|(&s, &p)| exp_affine_cdf(lam, s, p, gp))
                .collect(),
            ok: v
                .si
                .iter()
                .zip(&v.pi)
                .map(|(&s, &p)| exp_affine_survival(lam, s, p, gp))
                .collect(),
        }
    }

    /// Probability that exactly the relays in `mask` decode.
    fn set_probability(&self, mask: usize) -> T {
        (0..self.ok.len()).fold(T::one(), |acc, i| {
            acc * if mask >> i & 1 == 1 {
                self.ok[i]
            } else {
                self.fail[i]
            }
        })
    }

    fn none(&self) -> T {
        self.set_probability(0)
    }

    /// `P(D = empty) + sum_D P(D) * f(D)` over non-empty `D` in
    /// binary-counter order.
    fn outage_sum(&self, f: impl Fn(usize) -> Dd<T>) -> T {
        let size = 1usize << self.ok.len();
        let mut acc = Dd::new(self.none());
        for mask in 1..size {
            acc += Dd::new(self.set_probability(mask)) * f(mask);
        }
        clamp01(acc.value())
    }

    /// `sum_D P(D) * g(D)` over non-empty `D`.
    fn intercept_sum(&self, g: &[Dd<T>]) -> T {
        let mut acc = Dd::zero();
        for (mask, &gv) in g.iter().enumerate().skip(1) {
            acc += Dd::new(self.set_probability(mask)) * gv;
        }
        clamp01(acc.value())
    }
}

fn require_relays<T>(params: &SystemParams<T>, scheme: &'static str, min: usize) -> Result<()> {
    if params.n_relays < min {
        return Err(Error::TooFewRelays {
            scheme,
            min,
            got: params.n_relays,
        });
    }
    Ok(())
}

fn masked<T: Copy>(xs: &[T], mask: usize) -> Vec<T> {
    xs.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &x)| x)
        .collect()
}

/// Single-relay selection.
pub fn srs<T: Scalar>(params: &SystemParams<T>) -> Result<AnalyticResult<T>> {
    validate(params)?;
    require_relays(params, "srs", 1)?;
    let post = params.posterior()?;
    if params.gamma_s == T::zero() {
        return Ok(zero_power(true));
    }
    let lam = params.thresholds()?.lambda;
    let v = &params.variances;
    let gp = params.gamma_p;
    let n = params.n_relays;
    let idle = Decoding::idle(lam, params);
    let busy = Decoding::busy(lam, params);

    let op_h0 = idle.outage_sum(|mask| Dd::new(max_exp_cdf(lam, &masked(&v.id, mask))));
    let affine = max_affine_table(lam, &v.id, v.pd, gp);
    let op_h1 = busy.outage_sum(|mask| affine[mask]);

    // per decoding set: sum_{i in D} P(relay i intercepted) P(i selected | D)
    let size = 1usize << n;
    let mut reach_h0 = vec![Dd::zero(); size];
    let mut reach_h1 = vec![Dd::zero(); size];
    for i in 0..n {
        let wins = win_table(i, &v.id);
        let e0 = Dd::new(exp_survival(lam, v.ie[i]));
        let e1 = Dd::new(exp_affine_survival(lam, v.ie[i], v.pe, gp));
        for mask in (1..size).filter(|m| m >> i & 1 == 1) {
            reach_h0[mask] += e0 * wins[mask];
            reach_h1[mask] += e1 * wins[mask];
        }
    }
    let terms = BranchTerms {
        op_h0,
        op_h1,
        ip_h0: Some(idle.intercept_sum(&reach_h0)),
        ip_h1: Some(busy.intercept_sum(&reach_h1)),
    };
    Ok(assemble(post.pi0, post.pi1, terms))
}

/// Multi-relay selection outage. Requires identically distributed
/// relay -> destination channels.
pub fn mrs<T: Scalar>(params: &SystemParams<T>) -> Result<AnalyticResult<T>> {
    validate(params)?;
    require_relays(params, "mrs", 1)?;
    if !params.variances.is_iid_relay_to_sd() {
        return Err(Error::NonIidRelayChannels);
    }
    let post = params.posterior()?;
    if params.gamma_s == T::zero() {
        return Ok(zero_power(false));
    }
    let lam = params.thresholds()?.lambda;
    let v = &params.variances;
    let gp = params.gamma_p;
    let n = params.n_relays;
    let sd = v.id[0];
    let idle = Decoding::idle(lam, params);
    let busy = Decoding::busy(lam, params);

    let by_size_h0: Vec<T> = (0..=n).map(|k| sum_exp_cdf(lam, k, sd)).collect();
    let by_size_h1: Vec<T> = (0..=n)
        .map(|k| sum_exp_affine_cdf(lam, k, sd, v.pd, gp))
        .collect();
    let count = |mask: usize| mask.count_ones() as usize;
    let terms = BranchTerms {
        op_h0: idle.outage_sum(|mask| Dd::new(by_size_h0[count(mask)])),
        op_h1: busy.outage_sum(|mask| Dd::new(by_size_h1[count(mask)])),
        ip_h0: None,
        ip_h1: None,
    };
    Ok(assemble(post.pi0, post.pi1, terms))
}

/// Closed form for `scheme`, or `None` for the artificial-noise baseline
/// which is simulation-only.
pub fn evaluate<T: Scalar>(
    scheme: Scheme,
    params: &SystemParams<T>,
) -> Result<Option<AnalyticResult<T>>> {
    match scheme {
        Scheme::Direct => direct(params).map(Some),
        Scheme::Srs => srs(params).map(Some),
        Scheme::Mrs => mrs(params).map(Some),
        Scheme::An => Ok(None),
    }
}

pub fn op_direct<T: Scalar>(params: &SystemParams<T>) -> Result<T> {
    Ok(direct(params)?.op)
}

pub fn ip_direct<T: Scalar>(params: &SystemParams<T>) -> Result<T> {
    Ok(direct(params)?.ip.expect("direct has a closed-form IP"))
}

pub fn op_srs<T: Scalar>(params: &SystemParams<T>) -> Result<T> {
    Ok(srs(params)?.op)
}

pub fn ip_srs<T: Scalar>(params: &SystemParams<T>) -> Result<T> {
    Ok(srs(params)?.ip.expect("srs has a closed-form IP"))
}

pub fn op_mrs<T: Scalar>(params: &SystemParams<T>) -> Result<T> {
    Ok(mrs(params)?.op)
}
