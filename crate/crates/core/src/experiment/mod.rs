//! Sweeps over the transmit SNR, pairing closed-form and simulated values
//! into IP-versus-OP curves, plus CSV output, configuration and the CLI.

pub mod cli;
pub mod config;
pub mod figures;
pub mod output;

use crate::analytic;
use crate::error::{Error, Result};
use crate::model::{db_to_linear, Scheme, SystemParams};
use crate::sim::{self, Sampling, SimConfig};

/// A sweep of one base configuration over a grid of transmit SNRs.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: SystemParams<f64>,
    /// Strictly increasing, in dB.
    pub gamma_s_db: Vec<f64>,
    pub schemes: Vec<Scheme>,
    pub trials: u64,
    pub seed: u64,
    pub emit_analytic: bool,
    pub emit_sim: bool,
    pub workers: usize,
    pub sampling: Sampling,
    /// Appended to the scheme name in output, e.g. `p0=0.2`.
    pub variant: Option<String>,
}

/// Inclusive grid `start, start + step, ..., <= stop`.
pub fn grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidSweep(format!(
            "step must be positive, got {step}"
        )));
    }
    if !(start.is_finite() && stop.is_finite() && start <= stop) {
        return Err(Error::InvalidSweep(format!(
            "need start <= stop, got {start} > {stop}"
        )));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    // rounding keeps decimal steps such as 0.1 printable as typed
    Ok((0..=n)
        .map(|k| ((start + k as f64 * step) * 1e9).round() / 1e9)
        .collect())
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        crate::model::validate(&self.base)?;
        if self.gamma_s_db.is_empty() {
            return Err(Error::InvalidSweep("empty gamma_s_db grid".into()));
        }
        if let Some(w) = self
            .gamma_s_db
            .windows(2)
            .find(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
        {
            return Err(Error::InvalidSweep(format!(
                "gamma_s_db must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        if self.schemes.is_empty() {
            return Err(Error::InvalidSweep("no schemes selected".into()));
        }
        if !(self.emit_analytic || self.emit_sim) {
            return Err(Error::InvalidSweep(
                "nothing to emit: enable analytic or sim".into(),
            ));
        }
        if self.emit_sim && self.trials == 0 {
            return Err(Error::InvalidSweep("sim output needs trials >= 1".into()));
        }
        Ok(())
    }

    pub fn label(&self, scheme: Scheme) -> String {
        match &self.variant {
            Some(v) => format!("{scheme}:{v}"),
            None => scheme.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CurvePoint {
    pub gamma_s_db: f64,
    pub op_analytic: Option<f64>,
    pub ip_analytic: Option<f64>,
    pub op_sim: Option<f64>,
    pub ip_sim: Option<f64>,
    pub op_se: Option<f64>,
    pub ip_se: Option<f64>,
}

/// IP-versus-OP trade-off curve of one scheme, ordered by `gamma_s_db`.
#[derive(Debug, Clone, PartialEq)]
pub struct SrtCurve {
    pub scheme: Scheme,
    pub label: String,
    pub points: Vec<CurvePoint>,
    /// Trials and seed behind the simulated columns, if any.
    pub sim: Option<(u64, u64)>,
}

/// A grid point that could not be evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct FailedPoint {
    pub label: String,
    pub gamma_s_db: f64,
    pub what: &'static str,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepOutput {
    pub curves: Vec<SrtCurve>,
    pub failures: Vec<FailedPoint>,
}

impl SweepOutput {
    pub fn curve(&self, label: &str) -> Option<&SrtCurve> {
        self.curves.iter().find(|c| c.label == label)
    }

    pub fn extend(&mut self, other: SweepOutput) {
        self.curves.extend(other.curves);
        self.failures.extend(other.failures);
    }
}

fn sim_precondition(scheme: Scheme, params: &SystemParams<f64>) -> Result<()> {
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

/// Evaluates every scheme at every grid point. Point-level failures are
/// recorded in the output instead of aborting the sweep.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepOutput> {
    spec.validate()?;
    let mut curves: Vec<SrtCurve> = spec
        .schemes
        .iter()
        .map(|&s| SrtCurve {
            scheme: s,
            label: spec.label(s),
            points: Vec::with_capacity(spec.gamma_s_db.len()),
            sim: spec.emit_sim.then_some((spec.trials, spec.seed)),
        })
        .collect();
    let mut failures = Vec::new();
    let cfg = SimConfig {
        trials: spec.trials,
        seed: spec.seed,
        workers: spec.workers,
        sampling: spec.sampling,
    };

    for &db in &spec.gamma_s_db {
        let params = spec.base.with_gamma_s(db_to_linear(db));
        let mut points: Vec<CurvePoint> = spec
            .schemes
            .iter()
            .map(|_| CurvePoint {
                gamma_s_db: db,
                ..CurvePoint::default()
            })
            .collect();
        let mut fail = |scheme: Scheme, what, e: Error| {
            failures.push(FailedPoint {
                label: spec.label(scheme),
                gamma_s_db: db,
                what,
                reason: e.to_string(),
            })
        };

        if spec.emit_analytic {
            for (pt, &scheme) in points.iter_mut().zip(&spec.schemes) {
                match analytic::evaluate(scheme, &params) {
                    Ok(Some(r)) => {
                        pt.op_analytic = Some(r.op);
                        pt.ip_analytic = r.ip;
                    }
                    Ok(None) => {}
                    Err(e) => fail(scheme, "analytic", e),
                }
            }
        }

        if spec.emit_sim {
            let mut runnable = Vec::new();
            for (k, &scheme) in spec.schemes.iter().enumerate() {
                match sim_precondition(scheme, &params) {
                    Ok(()) => runnable.push(k),
                    Err(e) => fail(scheme, "sim", e),
                }
            }
            let schemes: Vec<Scheme> = runnable.iter().map(|&k| spec.schemes[k]).collect();
            if !schemes.is_empty() {
                match sim::simulate_schemes(&schemes, &params, &cfg) {
                    Ok(results) => {
                        for (&k, r) in runnable.iter().zip(results) {
                            let pt = &mut points[k];
                            pt.op_sim = Some(r.op_hat);
                            pt.ip_sim = Some(r.ip_hat);
                            pt.op_se = Some(r.op_se);
                            pt.ip_se = Some(r.ip_se);
                        }
                    }
                    Err(e) => {
                        for &scheme in &schemes {
                            fail(scheme, "sim", e.clone());
                        }
                    }
                }
            }
        }

        for (curve, pt) in curves.iter_mut().zip(points) {
            curve.points.push(pt);
        }
    }
    Ok(SweepOutput { curves, failures })
}

/// Runs several sweeps and concatenates their curves in order.
pub fn run_sweeps(specs: &[SweepSpec]) -> Result<SweepOutput> {
    let mut out = SweepOutput::default();
    for spec in specs {
        out.extend(run_sweep(spec)?);
    }
    Ok(out)
}

/// Which columns of a curve form the `(OP, IP)` pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    Analytic,
    Simulated,
    /// Closed-form OP with simulated IP, for MRS.
    AnalyticOpSimulatedIp,
}

impl SrtCurve {
    /// `(gamma_s_db, op, ip)` for points where both values exist.
    pub fn pairs(&self, pairing: Pairing) -> Vec<(f64, f64, f64)> {
        self.points
            .iter()
            .filter_map(|p| {
                let (op, ip) = match pairing {
                    Pairing::Analytic => (p.op_analytic?, p.ip_analytic?),
                    Pairing::Simulated => (p.op_sim?, p.ip_sim?),
                    Pairing::AnalyticOpSimulatedIp => (p.op_analytic?, p.ip_sim?),
                };
                Some((p.gamma_s_db, op, ip))
            })
            .collect()
    }

    pub fn ip_at_op(&self, target_op: f64, pairing: Pairing) -> Result<f64> {
        ip_at_op(&self.pairs(pairing), target_op)
    }
}

/// Position of `target_op` on a curve whose OP is non-increasing along the
/// grid: segment index `i` and log-domain weight `t` in `[0, 1]` so that
/// `log op = (1 - t) log op[i] + t log op[i + 1]`.
pub fn locate_op(pairs: &[(f64, f64, f64)], target_op: f64) -> Result<(usize, f64)> {
    let (lo, hi) = pairs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.1), hi.max(p.1))
        });
    if pairs.is_empty() || !(target_op >= lo && target_op <= hi) || target_op <= 0.0 {
        return Err(Error::TargetOutOfRange {
            target: target_op,
            min: lo,
            max: hi,
        });
    }
    if let Some(w) = pairs.windows(2).find(|w| w[1].1 > w[0].1) {
        return Err(Error::NonMonotoneCurve {
            from_db: w[0].0,
            to_db: w[1].0,
        });
    }
    if let Some(i) = pairs.iter().position(|p| p.1 == target_op) {
        return Ok((i, 0.0));
    }
    let i = pairs
        .windows(2)
        .position(|w| w[0].1 > target_op && target_op > w[1].1)
        .expect("target strictly inside a monotone range");
    let (a, b) = (pairs[i].1.log10(), pairs[i + 1].1.log10());
    let t = if b.is_finite() {
        (a - target_op.log10()) / (a - b)
    } else {
        // next OP is exactly zero: fall back to linear weight
        (pairs[i].1 - target_op) / pairs[i].1
    };
    Ok((i, t))
}

/// IP at `target_op` by linear interpolation in log10(OP)-log10(IP).
pub fn ip_at_op(pairs: &[(f64, f64, f64)], target_op: f64) -> Result<f64> {
    let (i, t) = locate_op(pairs, target_op)?;
    if t == 0.0 {
        return Ok(pairs[i].2);
    }
    let (a, b) = (pairs[i].2, pairs[i + 1].2);
    if a > 0.0 && b > 0.0 {
        Ok(10f64.powf((1.0 - t) * a.log10() + t * b.log10()))
    } else {
        Ok((1.0 - t) * a + t * b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_inclusive() {
        assert_eq!(
            grid(0.0, 35.0, 5.0).unwrap(),
            vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0]
        );
        assert_eq!(grid(0.0, 0.3, 0.1).unwrap(), vec![0.0, 0.1, 0.2, 0.3]);
        assert_eq!(grid(2.0, 2.0, 1.0).unwrap(), vec![2.0]);
        assert!(grid(0.0, 1.0, 0.0).is_err());
        assert!(grid(3.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn interpolation_examples() {
        let two = [(0.0, 0.1, 0.01), (1.0, 0.01, 0.1)];
        let v = ip_at_op(&two, 10f64.powf(-1.5)).unwrap();
        assert!((v - 10f64.powf(-1.5)).abs() < 1e-15);
        assert!((ip_at_op(&two, 0.0316).unwrap() - 0.0316).abs() < 1e-4);
        assert_eq!(ip_at_op(&two, 0.1).unwrap(), 0.01);
        assert_eq!(ip_at_op(&two, 0.01).unwrap(), 0.1);
        assert!(matches!(
            ip_at_op(&two, 0.5),
            Err(Error::TargetOutOfRange { .. })
        ));
        assert!(matches!(
            ip_at_op(&two, 1e-3),
            Err(Error::TargetOutOfRange { .. })
        ));
        let bent = [(0.0, 0.1, 0.01), (1.0, 0.2, 0.05), (2.0, 0.01, 0.1)];
        assert_eq!(
            ip_at_op(&bent, 0.05),
            Err(Error::NonMonotoneCurve {
                from_db: 0.0,
                to_db: 1.0
            })
        );
    }

    #[test]
    fn interpolation_stays_between_neighbours() {
        let c = [
            (0.0, 0.5, 0.001),
            (5.0, 0.2, 0.01),
            (10.0, 0.03, 0.2),
            (15.0, 0.004, 0.4),
        ];
        for k in 1..100 {
            let target = 0.004 + (0.5 - 0.004) * k as f64 / 100.0;
            let (i, _) = locate_op(&c, target).unwrap();
            let v = ip_at_op(&c, target).unwrap();
            assert!(v >= c[i].2 && v <= c[i + 1].2, "{target}: {v}");
        }
    }

    fn fig3_spec() -> SweepSpec {
        let mut s = figures::figure("fig3").unwrap().remove(0);
        s.gamma_s_db = vec![0.0, 10.0, 20.0];
        s
    }

    #[test]
    fn analytic_only_direct_sweep() {
        let mut spec = fig3_spec();
        spec.schemes = vec![Scheme::Direct];
        spec.emit_sim = false;
        let out = run_sweep(&spec).unwrap();
        let c = &out.curves[0];
        assert_eq!(c.points.len(), 3);
        assert!(c.sim.is_none());
        for w in c.points.windows(2) {
            assert!(w[1].op_analytic < w[0].op_analytic);
            assert!(w[1].ip_analytic > w[0].ip_analytic);
            assert!(w[1].op_sim.is_none());
        }
    }

    #[test]
    fn failures_are_recorded_not_fatal() {
        let mut spec = fig3_spec();
        spec.base.variances.id[2] = 3.0;
        spec.base.n_relays = 6;
        spec.emit_sim = false;
        let out = run_sweep(&spec).unwrap();
        let mrs = out.curve("mrs").unwrap();
        assert!(mrs.points.iter().all(|p| p.op_analytic.is_none()));
        assert_eq!(out.failures.len(), 3);
        assert!(out
            .curve("srs")
            .unwrap()
            .points
            .iter()
            .all(|p| p.op_analytic.is_some()));

        let mut spec = fig3_spec();
        spec.base = figures::caption_params(1, 0.8, 0.99, 0.01);
        spec.trials = 1000;
        let out = run_sweep(&spec).unwrap();
        assert!(out
            .curve("an")
            .unwrap()
            .points
            .iter()
            .all(|p| p.op_sim.is_none()));
        assert!(out
            .curve("direct")
            .unwrap()
            .points
            .iter()
            .all(|p| p.op_sim.is_some()));
    }

    #[test]
    fn spec_validation() {
        let mut s = fig3_spec();
        s.gamma_s_db = vec![1.0, 1.0];
        assert!(s.validate().is_err());
        let mut s = fig3_spec();
        s.emit_analytic = false;
        s.emit_sim = false;
        assert!(s.validate().is_err());
        let mut s = fig3_spec();
        s.schemes.clear();
        assert!(s.validate().is_err());
    }
}
