//! Adaptive Gauss-Kronrod quadrature and the integral-form oracles used to
//! check the closed-form probabilities.
//!
//! The oracles integrate the defining probability integrals directly and
//! never call the closed forms (or the incomplete gamma routine) they are
//! compared against.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 4000;

/// Integral estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Quad {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Quad {
        value: kron * h,
        error: ((kron - gauss) * h).abs(),
    }
}

/// Adaptive G7/K15 on `[a, b]`, bisecting the interval with the largest
/// error estimate until the summed estimate is below `abs_tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<Quad> {
    if a == b {
        return Ok(Quad {
            value: 0.0,
            error: 0.0,
        });
    }
    let mut parts: Vec<(f64, f64, Quad)> = vec![(a, b, gk15(&f, a, b))];
    loop {
        let (value, error) = parts
            .iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.2.value, e + p.2.error));
        if !(value.is_finite() && error.is_finite()) {
            return Err(Error::QuadratureNonConvergence {
                achieved: error,
                tolerance: abs_tol,
            });
        }
        // an error bound at the rounding level of the value cannot shrink
        if error <= abs_tol || error <= 50.0 * f64::EPSILON * value.abs() {
            return Ok(Quad { value, error });
        }
        if parts.len() >= MAX_INTERVALS {
            return Err(Error::QuadratureNonConvergence {
                achieved: error,
                tolerance: abs_tol,
            });
        }
        let worst = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2.error.total_cmp(&y.1 .2.error))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // interval no longer splittable in floating point
            return Err(Error::QuadratureNonConvergence {
                achieved: error,
                tolerance: abs_tol,
            });
        }
        parts.push((lo, mid, gk15(&f, lo, mid)));
        parts.push((mid, hi, gk15(&f, mid, hi)));
    }
}

const GRADED_PANELS: i32 = 48;

/// [`integrate`] over panels `[a, a + w 2^-48], ..., [a + w/2, b]` with
/// `w = b - a`, so that features much narrower than `w` next to `a` are
/// not stepped over by the first Kronrod pass.
pub fn integrate_graded<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<Quad> {
    let w = b - a;
    let tol = abs_tol / f64::from(GRADED_PANELS + 1);
    let mut lo = a;
    let mut total = Quad {
        value: 0.0,
        error: 0.0,
    };
    for j in (0..=GRADED_PANELS).rev() {
        let hi = if j == 0 { b } else { a + w * 2f64.powi(-j) };
        let q = integrate(&f, lo, hi, tol)?;
        total.value += q.value;
        total.error += q.error;
        lo = hi;
    }
    Ok(total)
}

/// Tolerance handed to the adaptive integrator by every oracle.
pub const ORACLE_TOL: f64 = 1e-13;

// e^{-40} ~ 4e-18: exponential tails beyond 40 means are below tolerance
const TAIL_MEANS: f64 = 40.0;

fn exp_pdf(y: f64, mean: f64) -> f64 {
    (-y / mean).exp() / mean
}

fn exp_cdf(x: f64, mean: f64) -> f64 {
    -(-x / mean).exp_m1()
}

/// `P(max_i X_i < lam)` for independent exponentials with means `sigmas`,
/// integrating the density of the maximum over `[0, lam]`.
pub fn oracle_max_exp_cdf(sigmas: &[f64], lam: f64) -> Result<f64> {
    if sigmas.is_empty() {
        return Ok(1.0);
    }
    let density = |x: f64| {
        (0..sigmas.len())
            .map(|i| {
                exp_pdf(x, sigmas[i])
                    * sigmas
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, &s)| exp_cdf(x, s))
                        .product::<f64>()
            })
            .sum::<f64>()
    };
    Ok(integrate_graded(density, 0.0, lam, ORACLE_TOL)?.value)
}

/// `P(max_i X_i < lam * gamma_p * Y + lam)` with `X_i ~ Exp(sigmas_id[i])`
/// and `Y ~ Exp(sigma_pd)`, by quadrature over `Y`.
pub fn oracle_max_exp_affine_cdf(
    sigmas_id: &[f64],
    sigma_pd: f64,
    gamma_p: f64,
    lam: f64,
) -> Result<f64> {
    let integrand = |y: f64| {
        let t = lam * gamma_p * y + lam;
        exp_pdf(y, sigma_pd) * sigmas_id.iter().map(|&s| exp_cdf(t, s)).product::<f64>()
    };
    Ok(integrate_graded(integrand, 0.0, TAIL_MEANS * sigma_pd, ORACLE_TOL)?.value)
}

fn erlang_pdf(x: f64, k: usize, mean: f64) -> f64 {
    let fact: f64 = (1..k).map(|j| j as f64).product();
    x.powi(k as i32 - 1) * (-x / mean).exp() / (fact * mean.powi(k as i32))
}

/// `P(X < gamma_p * lam * Y + lam)` where `X` is a sum of `k` i.i.d.
/// exponentials with mean `sigma_d` and `Y ~ Exp(sigma_pd)`.
///
/// Evaluates the split double integral with the Erlang density: the mass of
/// `X` below `lam`, plus for `X = x > lam` the probability that `Y`
/// exceeds `(x - lam) / (gamma_p lam)`, itself integrated numerically.
pub fn oracle_sum_exp_affine_cdf(
    k: usize,
    sigma_d: f64,
    sigma_pd: f64,
    gamma_p: f64,
    lam: f64,
) -> Result<f64> {
    assert!(k >= 1, "Erlang shape must be positive");
    let head = integrate_graded(|x| erlang_pdf(x, k, sigma_d), 0.0, lam, ORACLE_TOL)?.value;
    if gamma_p == 0.0 || lam == 0.0 {
        return Ok(head);
    }
    let upper = sigma_d * (k as f64 + TAIL_MEANS + 8.0 * (k as f64).sqrt());
    if upper <= lam {
        return Ok(head);
    }
    let failure = std::cell::Cell::new(None);
    let tail = integrate_graded(
        |x| {
            let y0 = (x - lam) / (gamma_p * lam);
            if y0 / sigma_pd > TAIL_MEANS {
                return 0.0;
            }
            let survival = integrate(
                |y| exp_pdf(y, sigma_pd),
                y0,
                y0 + TAIL_MEANS * sigma_pd,
                1e-3 * ORACLE_TOL,
            );
            match survival {
                Ok(q) => erlang_pdf(x, k, sigma_d) * q.value,
                Err(e) => {
                    failure.set(Some(e));
                    0.0
                }
            }
        },
        lam,
        upper,
        ORACLE_TOL,
    )?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(head + tail.value)
}

/// Probability that the relay picked by largest `|h_id|^2` among the given
/// relays has an eavesdropper link exceeding the threshold:
/// `sum_i P(X_ie > lam gamma_p Y + lam) * P(X_id > max_{j != i} X_jd)`
/// with `Y ~ Exp(sigma_pe)`. `gamma_p = 0` drops the interference term.
pub fn oracle_best_relay_exceed(
    sigmas_id: &[f64],
    sigmas_ie: &[f64],
    sigma_pe: f64,
    gamma_p: f64,
    lam: f64,
) -> Result<f64> {
    assert_eq!(sigmas_id.len(), sigmas_ie.len());
    let mut total = 0.0;
    for i in 0..sigmas_id.len() {
        let wins = integrate_graded(
            |y| {
                exp_pdf(y, sigmas_id[i])
                    * sigmas_id
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, &s)| exp_cdf(y, s))
                        .product::<f64>()
            },
            0.0,
            TAIL_MEANS * sigmas_id[i],
            ORACLE_TOL,
        )?
        .value;
        let exceeds = if gamma_p == 0.0 {
            (-lam / sigmas_ie[i]).exp()
        } else {
            integrate_graded(
                |y| exp_pdf(y, sigma_pe) * (-(lam * gamma_p * y + lam) / sigmas_ie[i]).exp(),
                0.0,
                TAIL_MEANS * sigma_pe,
                ORACLE_TOL,
            )?
            .value
        };
        total += exceeds * wins;
    }
    Ok(total)
}
