//! TOML sweep configuration.
//!
//! ```toml
//! p0 = 0.8
//! pd = 0.99
//! pf = 0.01
//! gamma_p_db = 10
//! gamma_s_db = [0, 35, 1]      # start, stop, step; or a single value
//! rate = 1
//! n_relays = 6
//! trials = 1000000
//! seed = 1
//! schemes = ["direct", "srs", "mrs", "an"]
//! emit = ["analytic", "sim"]
//!
//! [sigma2]
//! sd = 1
//! se = 0.1
//! pd = 0.2
//! pe = 0.2
//! si = 1                       # broadcast to every relay, or a list
//! id = [1, 1, 1, 1, 1, 1]
//! ie = 0.1
//! pi = 0.2
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::{db_to_linear, LinkVariances, Scheme, SystemParams};
use crate::sim::Sampling;

use super::figures::{DEFAULT_SEED, DEFAULT_TRIALS};
use super::{grid, SweepSpec};

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum GridSpec {
    Point(f64),
    Triple([f64; 3]),
    Table { start: f64, stop: f64, step: f64 },
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum PerRelay {
    Broadcast(f64),
    List(Vec<f64>),
}

impl PerRelay {
    fn expand(&self, field: &'static str, n: usize) -> Result<Vec<f64>> {
        match self {
            PerRelay::Broadcast(x) => Ok(vec![*x; n]),
            PerRelay::List(xs) if xs.len() == n => Ok(xs.clone()),
            PerRelay::List(xs) => Err(Error::LengthMismatch {
                field,
                len: xs.len(),
                expected: n,
            }),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Sigma2 {
    sd: f64,
    se: f64,
    pd: f64,
    pe: f64,
    si: PerRelay,
    id: PerRelay,
    ie: PerRelay,
    pi: PerRelay,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    p0: f64,
    pd: f64,
    pf: f64,
    gamma_p_db: f64,
    gamma_s_db: GridSpec,
    rate: f64,
    n_relays: usize,
    sigma2: Sigma2,
    trials: Option<u64>,
    seed: Option<u64>,
    schemes: Option<Vec<String>>,
    emit: Option<Vec<String>>,
    sampling: Option<String>,
    workers: Option<usize>,
}

pub fn parse(text: &str) -> Result<SweepSpec> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let n = raw.n_relays;
    let s = &raw.sigma2;
    let base = SystemParams {
        p0: raw.p0,
        pd: raw.pd,
        pf: raw.pf,
        gamma_p: db_to_linear(raw.gamma_p_db),
        gamma_s: 1.0,
        rate: raw.rate,
        n_relays: n,
        variances: LinkVariances {
            sd: s.sd,
            se: s.se,
            pd: s.pd,
            pe: s.pe,
            si: s.si.expand("sigma2.si", n)?,
            id: s.id.expand("sigma2.id", n)?,
            ie: s.ie.expand("sigma2.ie", n)?,
            pi: s.pi.expand("sigma2.pi", n)?,
        },
    };
    let gamma_s_db = match raw.gamma_s_db {
        GridSpec::Point(x) => vec![x],
        GridSpec::Triple([start, stop, step]) | GridSpec::Table { start, stop, step } => {
            grid(start, stop, step)?
        }
    };
    let schemes = match &raw.schemes {
        Some(names) => names
            .iter()
            .map(|n| n.parse())
            .collect::<Result<Vec<Scheme>>>()?,
        None => Scheme::ALL.to_vec(),
    };
    let (mut emit_analytic, mut emit_sim) = (raw.emit.is_none(), raw.emit.is_none());
    for e in raw.emit.iter().flatten() {
        match e.as_str() {
            "analytic" => emit_analytic = true,
            "sim" => emit_sim = true,
            other => {
                return Err(Error::Config(format!(
                    "unknown emit flag `{other}` (expected analytic or sim)"
                )))
            }
        }
    }
    let sampling = match raw.sampling.as_deref() {
        None | Some("posterior") => Sampling::Posterior,
        Some("rejection") => Sampling::Rejection,
        Some(other) => {
            return Err(Error::Config(format!(
                "unknown sampling `{other}` (expected posterior or rejection)"
            )))
        }
    };
    let spec = SweepSpec {
        base,
        gamma_s_db,
        schemes,
        trials: raw.trials.unwrap_or(DEFAULT_TRIALS),
        seed: raw.seed.unwrap_or(DEFAULT_SEED),
        emit_analytic,
        emit_sim,
        workers: raw.workers.unwrap_or(0),
        sampling,
        variant: None,
    };
    spec.validate()?;
    Ok(spec)
}

pub fn load(path: &Path) -> Result<SweepSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    parse(&text)
}
