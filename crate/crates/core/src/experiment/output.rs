//! Flat CSV rows and the `.meta` sidecar.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::{SweepOutput, SweepSpec};

pub const HEADER: &str =
    "scheme,gamma_s_db,op_analytic,ip_analytic,op_sim,ip_sim,op_se,ip_se,trials,seed";

fn cell(x: Option<f64>) -> String {
    x.map(|v| format!("{v:e}")).unwrap_or_default()
}

pub fn write_csv<W: Write>(out: &SweepOutput, w: &mut W) -> io::Result<()> {
    writeln!(w, "{HEADER}")?;
    for c in &out.curves {
        let (trials, seed) = match c.sim {
            Some((t, s)) => (t.to_string(), s.to_string()),
            None => (String::new(), String::new()),
        };
        for p in &c.points {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{}",
                c.label,
                p.gamma_s_db,
                cell(p.op_analytic),
                cell(p.ip_analytic),
                cell(p.op_sim),
                cell(p.ip_sim),
                cell(p.op_se),
                cell(p.ip_se),
                trials,
                seed
            )?;
        }
    }
    Ok(())
}

pub fn csv_string(out: &SweepOutput) -> String {
    let mut buf = Vec::new();
    write_csv(out, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

/// SHA-256 over the debug rendering of the sweeps; stable for a fixed
/// build since it covers every field including exact float bits.
pub fn spec_hash(specs: &[SweepSpec]) -> String {
    let mut h = Sha256::new();
    for s in specs {
        h.update(format!("{s:?}\n").as_bytes());
    }
    hex::encode(h.finalize())
}

pub fn meta_string(specs: &[SweepSpec], out: &SweepOutput) -> String {
    let mut m = String::new();
    let _ = writeln!(m, "version={}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(m, "spec_sha256={}", spec_hash(specs));
    for s in specs {
        let _ = writeln!(
            m,
            "sampling={:?} trials={} seed={}",
            s.sampling, s.trials, s.seed
        );
    }
    let _ = writeln!(m, "an.power_split=equal: gamma_s/2 signal, gamma_s/2 noise");
    let _ = writeln!(m, "an.direction=uniform on the unit sphere of the null space of the relay->destination channel");
    let _ = writeln!(m, "an.slots=1 (direct-link rate threshold)");
    let _ = writeln!(
        m,
        "an.relays=all relays emit noise, no decoding requirement"
    );
    let _ = writeln!(
        m,
        "an.conditioning=relays transmit only when the band is sensed idle"
    );
    for f in &out.failures {
        let _ = writeln!(
            m,
            "failed {} gamma_s_db={} {}: {}",
            f.label, f.gamma_s_db, f.what, f.reason
        );
    }
    m
}

/// `path` with its extension replaced by `.meta`.
pub fn meta_path(path: &Path) -> PathBuf {
    path.with_extension("meta")
}

pub fn write_files(path: &Path, specs: &[SweepSpec], out: &SweepOutput) -> io::Result<()> {
    std::fs::write(path, csv_string(out))?;
    std::fs::write(meta_path(path), meta_string(specs, out))
}
