//! Built-in sweeps with the published figure parameters.
//!
//! Shared by every figure: unit-mean transmitter, relay and destination
//! links, eavesdropper links of mean 0.1, primary interference links of mean
//! 0.2, `gamma_p = 10 dB` and `R = 1`.

use crate::error::{Error, Result};
use crate::model::{db_to_linear, LinkVariances, Scheme, SystemParams};
use crate::sim::Sampling;

use super::{grid, SweepSpec};

pub const NAMES: [&str; 4] = ["fig3", "fig4", "fig5", "fig6"];

pub const DEFAULT_TRIALS: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 20_160_901;

pub fn caption_params(n_relays: usize, p0: f64, pd: f64, pf: f64) -> SystemParams<f64> {
    SystemParams {
        p0,
        pd,
        pf,
        gamma_p: db_to_linear(10.0),
        gamma_s: 1.0,
        rate: 1.0,
        n_relays,
        variances: LinkVariances::homogeneous(n_relays, 1.0, 0.1, 0.2, 0.2, 1.0, 1.0, 0.1, 0.2),
    }
}

fn spec(
    base: SystemParams<f64>,
    stop_db: f64,
    schemes: &[Scheme],
    variant: Option<String>,
) -> SweepSpec {
    SweepSpec {
        base,
        gamma_s_db: grid(0.0, stop_db, 1.0).expect("static grid"),
        schemes: schemes.to_vec(),
        trials: DEFAULT_TRIALS,
        seed: DEFAULT_SEED,
        emit_analytic: true,
        emit_sim: true,
        workers: 0,
        sampling: Sampling::Posterior,
        variant,
    }
}

/// Sweeps reproducing one figure; multi-curve figures return one sweep per
/// parameter variant.
pub fn figure(name: &str) -> Result<Vec<SweepSpec>> {
    use Scheme::*;
    let specs = match name {
        "fig3" => vec![spec(
            caption_params(6, 0.8, 0.99, 0.01),
            35.0,
            &[Direct, Srs, Mrs, An],
            None,
        )],
        "fig4" => [0.2, 0.8]
            .iter()
            .map(|&p0| {
                spec(
                    caption_params(6, p0, 0.99, 0.01),
                    30.0,
                    &[Srs, Mrs],
                    Some(format!("p0={p0}")),
                )
            })
            .collect(),
        "fig5" => [(0.9, 0.1), (0.99, 0.01)]
            .iter()
            .map(|&(pd, pf)| {
                spec(
                    caption_params(6, 0.8, pd, pf),
                    30.0,
                    &[Srs, Mrs],
                    Some(format!("pd={pd},pf={pf}")),
                )
            })
            .collect(),
        "fig6" => [2, 4, 8]
            .iter()
            .map(|&n| {
                spec(
                    caption_params(n, 0.8, 0.99, 0.01),
                    30.0,
                    &[Direct, Srs, Mrs],
                    Some(format!("n={n}")),
                )
            })
            .collect(),
        other => {
            return Err(Error::Config(format!(
                "unknown figure `{other}` (expected one of {})",
                NAMES.join(", ")
            )))
        }
    };
    Ok(specs)
}
