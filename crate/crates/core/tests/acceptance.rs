//! Acceptance criteria, one printed PASS/FAIL line each.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the report.
//! All criteria run inside a single test so the report prints in order and
//! the expensive figure run is shared between the criteria that need it.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use srt_core::analytic::{
    self, best_relay_exceed, exp_affine_cdf, exp_affine_survival, exp_cdf, exp_survival,
    max_exp_affine_cdf, max_exp_cdf, sum_exp_affine_cdf, sum_exp_cdf,
};
use srt_core::experiment::figures::{self, caption_params};
use srt_core::experiment::{locate_op, run_sweep, Pairing, SweepSpec};
use srt_core::model::db_to_linear;
use srt_core::sim::{mrs_capacities, ChannelRealization, DecodingSet, MrsWeights};
use srt_core::special::{
    oracle_best_relay_exceed, oracle_max_exp_affine_cdf, oracle_max_exp_cdf,
    oracle_sum_exp_affine_cdf,
};
use srt_core::{Scheme, SystemParams};

const ORACLE_ABS: f64 = 1e-8;
const REDUCTION_ABS: f64 = 1e-9;
const WEAK_PRIMARY: f64 = 1e-12;
const GATE_SE: f64 = 3.9;
const GAP_SE: f64 = 3.0;
const TRIALS: u64 = 1_000_000;
const SEED: u64 = figures::DEFAULT_SEED;

struct Report {
    lines: Vec<String>,
    failed: usize,
}

impl Report {
    fn record(&mut self, id: u32, name: &str, pass: bool, detail: String) {
        let line = format!(
            "criterion {id:>2} {} {name}: {detail}",
            if pass { "PASS" } else { "FAIL" }
        );
        println!("{line}");
        self.lines.push(line);
        self.failed += usize::from(!pass);
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

fn variances(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| log_uniform(rng, 0.05, 5.0)).collect()
}

/// Largest `|closed - oracle|` over 100 random parameter sets.
fn worst_gap(mut case: impl FnMut(&mut ChaCha8Rng) -> (f64, f64), seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..100)
        .map(|_| {
            let (a, b) = case(&mut rng);
            (a - b).abs()
        })
        .fold(0.0, f64::max)
}

fn criterion_1(r: &mut Report) {
    let start = Instant::now();
    let gaps = [
        (
            "max cdf",
            worst_gap(
                |rng| {
                    let n = rng.random_range(1..=6);
                    let s = variances(rng, n);
                    let lam = log_uniform(rng, 1e-3, 10.0);
                    (max_exp_cdf(lam, &s), oracle_max_exp_cdf(&s, lam).unwrap())
                },
                45,
            ),
        ),
        (
            "max affine cdf",
            worst_gap(
                |rng| {
                    let n = rng.random_range(1..=6);
                    let s = variances(rng, n);
                    let (lam, spd, gp) = (
                        log_uniform(rng, 1e-3, 10.0),
                        log_uniform(rng, 0.05, 5.0),
                        log_uniform(rng, 0.1, 1e3),
                    );
                    (
                        max_exp_affine_cdf(lam, &s, spd, gp),
                        oracle_max_exp_affine_cdf(&s, spd, gp, lam).unwrap(),
                    )
                },
                46,
            ),
        ),
        (
            "best-relay exceed",
            worst_gap(
                |rng| {
                    let n = rng.random_range(1..=6);
                    let (id, ie) = (variances(rng, n), variances(rng, n));
                    let (lam, spe) = (log_uniform(rng, 1e-3, 10.0), log_uniform(rng, 0.05, 5.0));
                    (
                        best_relay_exceed(lam, &id, &ie, spe, 0.0),
                        oracle_best_relay_exceed(&id, &ie, spe, 0.0, lam).unwrap(),
                    )
                },
                49,
            ),
        ),
        (
            "best-relay affine exceed",
            worst_gap(
                |rng| {
                    let n = rng.random_range(1..=6);
                    let (id, ie) = (variances(rng, n), variances(rng, n));
                    let (lam, spe, gp) = (
                        log_uniform(rng, 1e-3, 10.0),
                        log_uniform(rng, 0.05, 5.0),
                        log_uniform(rng, 0.1, 1e3),
                    );
                    (
                        best_relay_exceed(lam, &id, &ie, spe, gp),
                        oracle_best_relay_exceed(&id, &ie, spe, gp, lam).unwrap(),
                    )
                },
                50,
            ),
        ),
        (
            "sum cdf",
            worst_gap(
                |rng| {
                    let k = rng.random_range(1..=6);
                    let (lam, sd) = (log_uniform(rng, 1e-3, 10.0), log_uniform(rng, 0.05, 5.0));
                    (
                        sum_exp_cdf(lam, k, sd),
                        oracle_sum_exp_affine_cdf(k, sd, 1.0, 0.0, lam).unwrap(),
                    )
                },
                53,
            ),
        ),
        (
            "sum affine cdf",
            worst_gap(
                |rng| {
                    let k = rng.random_range(1..=6);
                    let (lam, sd, spd, gp) = (
                        log_uniform(rng, 1e-3, 10.0),
                        log_uniform(rng, 0.05, 5.0),
                        log_uniform(rng, 0.05, 5.0),
                        log_uniform(rng, 0.1, 1e3),
                    );
                    (
                        sum_exp_affine_cdf(lam, k, sd, spd, gp),
                        oracle_sum_exp_affine_cdf(k, sd, spd, gp, lam).unwrap(),
                    )
                },
                54,
            ),
        ),
    ];
    let secs = start.elapsed().as_secs_f64();
    let worst = gaps.iter().map(|g| g.1).fold(0.0, f64::max);
    let detail = gaps
        .iter()
        .map(|(n, g)| format!("{n} {g:.1e}"))
        .collect::<Vec<_>>()
        .join(", ");
    r.record(
        1,
        "closed forms vs quadrature oracles",
        worst <= ORACLE_ABS && secs <= 60.0,
        format!(
            "worst |diff| {worst:.1e} <= {ORACLE_ABS:e} over 6x100 sets in {secs:.1}s ({detail})"
        ),
    );
}

fn criterion_2(r: &mut Report) {
    let start = Instant::now();
    let mut spec = figures::figure("fig3").unwrap().remove(0);
    // the listed 5 dB grid has 8 points; midpoints bring it to 12
    spec.gamma_s_db = vec![
        0.0, 2.5, 5.0, 10.0, 12.5, 15.0, 20.0, 22.5, 25.0, 30.0, 32.5, 35.0,
    ];
    spec.schemes = vec![Scheme::Direct, Scheme::Srs, Scheme::Mrs];
    spec.trials = TRIALS;
    spec.seed = SEED;
    spec.workers = 1;
    let out = run_sweep(&spec).unwrap();
    let (lines, ok) = srt_core::experiment::cli::validation_report(&out);
    let failed: Vec<&String> = lines.iter().filter(|l| l.starts_with("FAIL")).collect();
    let worst_z = lines
        .iter()
        .filter_map(|l| l.rsplit("z=").next()?.parse::<f64>().ok())
        .fold(0.0, f64::max);
    let secs = start.elapsed().as_secs_f64();
    for l in &failed {
        println!("    {l}");
    }
    r.record(
        2,
        "closed forms vs simulation",
        ok && lines.len() == 12 * 5 && secs <= 600.0,
        format!(
            "{}/{} values within {GATE_SE} SE (worst z {worst_z:.2}), 12 points, {TRIALS} trials, 1 worker, {secs:.1}s",
            lines.len() - failed.len(),
            lines.len()
        ),
    );
}

fn criterion_3(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let gp = WEAK_PRIMARY;
    let mut worst = [0.0f64; 5];
    let mut singleton_exact = true;
    for _ in 0..100 {
        let n = rng.random_range(1..=6);
        let (id, ie) = (variances(&mut rng, n), variances(&mut rng, n));
        let (s, sp) = (
            log_uniform(&mut rng, 0.05, 5.0),
            log_uniform(&mut rng, 0.05, 5.0),
        );
        let lam = log_uniform(&mut rng, 1e-3, 10.0);
        let k = rng.random_range(1..=6);
        let gaps = [
            max_exp_affine_cdf(lam, &id, sp, gp) - max_exp_cdf(lam, &id),
            best_relay_exceed(lam, &id, &ie, sp, gp) - best_relay_exceed(lam, &id, &ie, sp, 0.0),
            sum_exp_affine_cdf(lam, k, s, sp, gp) - sum_exp_cdf(lam, k, s),
            exp_affine_cdf(lam, s, sp, gp) - exp_cdf(lam, s),
            exp_affine_survival(lam, s, sp, gp) - exp_survival(lam, s),
        ];
        for (w, g) in worst.iter_mut().zip(gaps) {
            *w = w.max(g.abs());
        }
        let gp_full = log_uniform(&mut rng, 0.1, 1e3);
        singleton_exact &= sum_exp_affine_cdf(lam, 1, s, sp, gp_full)
            == max_exp_affine_cdf(lam, &[s], sp, gp_full)
            && sum_exp_cdf(lam, 1, s) == max_exp_cdf(lam, &[s]);
    }
    let p = caption_params(1, 0.8, 0.99, 0.01).with_gamma_s(10.0);
    singleton_exact &= analytic::op_srs(&p).unwrap() == analytic::op_mrs(&p).unwrap();
    let w = worst.iter().copied().fold(0.0, f64::max);
    r.record(
        3,
        "weak-primary reductions and single-relay MRS",
        w <= REDUCTION_ABS && singleton_exact,
        format!("worst |diff| {w:.1e} <= {REDUCTION_ABS:e} at gamma_p={gp:e}; |D|=1 MRS == SRS exactly: {singleton_exact}"),
    );
}

fn criterion_4(r: &mut Report) {
    let mut violations = Vec::new();
    let mut curves = 0;
    for name in figures::NAMES {
        for mut spec in figures::figure(name).unwrap() {
            spec.emit_sim = false;
            let out = run_sweep(&spec).unwrap();
            assert!(out.failures.is_empty());
            for c in out.curves.iter().filter(|c| c.scheme != Scheme::An) {
                curves += 1;
                for w in c.points.windows(2) {
                    if w[1].op_analytic >= w[0].op_analytic {
                        violations.push(format!("{name} {} OP at {} dB", c.label, w[1].gamma_s_db));
                    }
                    if c.scheme != Scheme::Mrs && w[1].ip_analytic <= w[0].ip_analytic {
                        violations.push(format!("{name} {} IP at {} dB", c.label, w[1].gamma_s_db));
                    }
                }
            }
        }
    }
    r.record(
        4,
        "trade-off: OP strictly falls and IP strictly rises with gamma_s",
        violations.is_empty(),
        format!("{curves} analytic curves over fig3-fig6, violations: {violations:?}"),
    );
}

/// `(ip, se)` at `target` on pairs `(db, op, ip, ip_se)`, interpolated in
/// log-log; the SE is propagated assuming fully correlated endpoints.
fn interp(pts: &[(f64, f64, f64, f64)], target: f64) -> (f64, f64) {
    let pairs: Vec<(f64, f64, f64)> = pts.iter().map(|p| (p.0, p.1, p.2)).collect();
    let (i, t) = locate_op(&pairs, target).unwrap();
    if t == 0.0 {
        return (pts[i].2, pts[i].3);
    }
    let (a, b) = (pts[i], pts[i + 1]);
    let ip = 10f64.powf((1.0 - t) * a.2.log10() + t * b.2.log10());
    let rel = (1.0 - t) * a.3 / a.2 + t * b.3 / b.2;
    (ip, ip * rel)
}

fn run_cli(args: &[&str]) {
    let status = Command::new(env!("CARGO_BIN_EXE_srt"))
        .args(args)
        .status()
        .unwrap();
    assert!(status.success(), "srt {args:?} failed");
}

fn read_rows(path: &Path, label: &str) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect::<Vec<_>>())
        .filter(|f| f[0] == label)
        .collect()
}

fn col(row: &[String], k: usize) -> f64 {
    row[k].parse().unwrap()
}

fn criterion_5(r: &mut Report, fig3_csv: &Path) {
    // columns: 2 op_a, 3 ip_a, 4 op_sim, 5 ip_sim, 6 op_se, 7 ip_se
    let curve =
        |label: &str, op: usize, ip: usize, se: Option<usize>| -> Vec<(f64, f64, f64, f64)> {
            read_rows(fig3_csv, label)
                .iter()
                .map(|f| {
                    (
                        col(f, 1),
                        col(f, op),
                        col(f, ip),
                        se.map_or(0.0, |k| col(f, k)),
                    )
                })
                .collect()
        };
    let direct = curve("direct", 2, 3, None);
    let srs = curve("srs", 2, 3, None);
    let mrs = curve("mrs", 2, 5, Some(7));
    let an = curve("an", 4, 5, Some(7));
    let gap =
        |lo: (f64, f64), hi: (f64, f64)| (hi.0 - lo.0) / (lo.1.hypot(hi.1)).max(f64::MIN_POSITIVE);
    let mut ok = true;
    let mut detail = Vec::new();
    for target in [1e-1, 1e-2] {
        let (d, s, m) = (
            interp(&direct, target),
            interp(&srs, target),
            interp(&mrs, target),
        );
        let (g_ms, g_sd) = (gap(m, s), gap(s, d));
        ok &= g_ms > GAP_SE && g_sd > GAP_SE;
        detail.push(format!(
            "OP={target:e}: mrs {:.3e}±{:.1e} < srs {:.3e} < direct {:.3e}",
            m.0, m.1, s.0, d.0
        ));
        if target == 1e-1 {
            let a = interp(&an, target);
            let (g_sa, g_ad) = (gap(s, a), gap(a, d));
            ok &= g_sa > GAP_SE && g_ad > GAP_SE;
            detail.push(format!(
                "an {:.3e}±{:.1e} between (gaps {g_sa:.0} and {g_ad:.0} SE)",
                a.0, a.1
            ));
        }
    }
    r.record(
        5,
        "fig3 ordering mrs < srs < direct, srs < an < direct",
        ok,
        detail.join("; "),
    );
}

/// MRS IP at `target` OP: closed-form OP locates the bracketing grid points,
/// which are then simulated.
fn mrs_ip_at(base: &SystemParams, target: f64) -> (f64, f64) {
    let mut spec = SweepSpec {
        base: base.clone(),
        gamma_s_db: srt_core::experiment::grid(0.0, 30.0, 1.0).unwrap(),
        schemes: vec![Scheme::Mrs],
        trials: TRIALS,
        seed: SEED,
        emit_analytic: true,
        emit_sim: false,
        workers: 0,
        sampling: Default::default(),
        variant: None,
    };
    let c = run_sweep(&spec).unwrap().curves.remove(0);
    let pairs: Vec<(f64, f64, f64)> = c
        .points
        .iter()
        .map(|p| (p.gamma_s_db, p.op_analytic.unwrap(), 1.0))
        .collect();
    let (i, _) = locate_op(&pairs, target).unwrap();
    spec.gamma_s_db = vec![pairs[i].0, pairs[(i + 1).min(pairs.len() - 1)].0];
    spec.gamma_s_db.dedup();
    spec.emit_sim = true;
    let c = run_sweep(&spec).unwrap().curves.remove(0);
    let pts: Vec<_> = c
        .points
        .iter()
        .map(|p| {
            (
                p.gamma_s_db,
                p.op_analytic.unwrap(),
                p.ip_sim.unwrap(),
                p.ip_se.unwrap(),
            )
        })
        .collect();
    interp(&pts, target)
}

fn srs_ip_at(base: &SystemParams, target: f64) -> f64 {
    let spec = SweepSpec {
        base: base.clone(),
        gamma_s_db: srt_core::experiment::grid(0.0, 30.0, 1.0).unwrap(),
        schemes: vec![Scheme::Srs],
        trials: 1,
        seed: SEED,
        emit_analytic: true,
        emit_sim: false,
        workers: 0,
        sampling: Default::default(),
        variant: None,
    };
    run_sweep(&spec).unwrap().curves[0]
        .ip_at_op(target, Pairing::Analytic)
        .unwrap()
}

/// Whether the IP at OP = 1e-2 falls from `worse` to `better`.
fn improves(worse: &SystemParams, better: &SystemParams, detail: &mut Vec<String>) -> bool {
    let (sw, sb) = (srs_ip_at(worse, 1e-2), srs_ip_at(better, 1e-2));
    let (mw, mb) = (mrs_ip_at(worse, 1e-2), mrs_ip_at(better, 1e-2));
    let z = (mw.0 - mb.0) / mw.1.hypot(mb.1);
    detail.push(format!(
        "srs {sw:.3e} -> {sb:.3e}, mrs {:.3e} -> {:.3e} ({z:.0} SE)",
        mw.0, mb.0
    ));
    sb < sw && z > GAP_SE
}

fn criterion_6(r: &mut Report) {
    let mut d = Vec::new();
    let ok = improves(
        &caption_params(6, 0.2, 0.99, 0.01),
        &caption_params(6, 0.8, 0.99, 0.01),
        &mut d,
    );
    r.record(
        6,
        "fig4: P0 0.2 -> 0.8 lowers IP at OP=1e-2",
        ok,
        d.join("; "),
    );
}

fn criterion_7(r: &mut Report) {
    let mut d = Vec::new();
    let ok = improves(
        &caption_params(6, 0.8, 0.9, 0.1),
        &caption_params(6, 0.8, 0.99, 0.01),
        &mut d,
    );
    r.record(
        7,
        "fig5: sensing (0.9,0.1) -> (0.99,0.01) lowers IP at OP=1e-2",
        ok,
        d.join("; "),
    );
}

fn criterion_8(r: &mut Report) {
    let mut d = Vec::new();
    let ok = improves(
        &caption_params(2, 0.8, 0.99, 0.01),
        &caption_params(4, 0.8, 0.99, 0.01),
        &mut d,
    ) & improves(
        &caption_params(4, 0.8, 0.99, 0.01),
        &caption_params(8, 0.8, 0.99, 0.01),
        &mut d,
    );
    r.record(
        8,
        "fig6: N 2 -> 4 -> 8 lowers IP at OP=1e-2",
        ok,
        d.join("; "),
    );
}

fn criterion_9(r: &mut Report, dir: &Path) {
    let start = Instant::now();
    let path = |n: &str| dir.join(n).to_string_lossy().into_owned();
    let seed = SEED.to_string();
    run_cli(&[
        "figure",
        "--name",
        "fig3",
        "--out",
        &path("a.csv"),
        "--seed",
        &seed,
        "--workers",
        "1",
    ]);
    run_cli(&[
        "figure",
        "--name",
        "fig3",
        "--out",
        &path("b.csv"),
        "--seed",
        &seed,
        "--workers",
        "1",
    ]);
    run_cli(&[
        "figure",
        "--name",
        "fig3",
        "--out",
        &path("c.csv"),
        "--seed",
        &seed,
        "--workers",
        "8",
    ]);
    let read = |n: &str| std::fs::read(dir.join(n)).unwrap();
    let (a, b, c) = (read("a.csv"), read("b.csv"), read("c.csv"));
    let rows = a.iter().filter(|&&x| x == b'\n').count();
    r.record(
        9,
        "fig3 CSV byte-identical across runs and worker counts",
        a == b && a == c && rows == 1 + 4 * 36,
        format!(
            "repeat equal: {}, 1 vs 8 workers equal: {}, {rows} lines, {:.0}s",
            a == b,
            a == c,
            start.elapsed().as_secs_f64()
        ),
    );
}

fn criterion_10(r: &mut Report) {
    let p = caption_params(6, 0.8, 0.99, 0.01).with_gamma_s(db_to_linear(10.0));
    let post = p.posterior().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let all = DecodingSet { bits: 0b11_1111 };
    let mut beaten = 0;
    let mut worst_ratio = 0.0f64;
    let normal = |rng: &mut ChaCha8Rng| {
        let (a, b): (f64, f64) = (
            rng.sample(rand_distr::StandardNormal),
            rng.sample(rand_distr::StandardNormal),
        );
        Complex::new(a, b)
    };
    for _ in 0..1000 {
        let real = ChannelRealization::draw(&p, post.pi1, &mut rng);
        let w = MrsWeights::optimal(&real, all).unwrap();
        let best = w.destination_sinr(&real, &p);
        let via_capacity =
            (2f64.powf(2.0 * mrs_capacities(&real, all, &p).unwrap().0) - 1.0) / best;
        assert!((via_capacity - 1.0).abs() < 1e-9);
        for k in 0..100 {
            // half fully random directions, half small perturbations of w_opt
            let scale = if k % 2 == 0 { 1e3 } else { 0.05 };
            let mut alt = w.clone();
            for x in alt.w.iter_mut() {
                *x += normal(&mut rng) * scale;
            }
            let norm = alt.norm();
            alt.w.iter_mut().for_each(|x| *x /= norm);
            let ratio = alt.destination_sinr(&real, &p) / best;
            worst_ratio = worst_ratio.max(ratio);
            beaten += usize::from(ratio > 1.0 + 1e-12);
        }
    }
    r.record(
        10,
        "optimal beamforming weights",
        beaten == 0,
        format!("0 of 100000 random unit-norm weights beat w_opt: {} did; max SINR ratio {worst_ratio:.15}", beaten),
    );
}

#[test]
fn acceptance_criteria() {
    let dir = tempfile::tempdir().unwrap();
    let mut r = Report {
        lines: Vec::new(),
        failed: 0,
    };
    criterion_1(&mut r);
    criterion_2(&mut r);
    criterion_3(&mut r);
    criterion_4(&mut r);
    criterion_9(&mut r, dir.path());
    criterion_5(&mut r, &dir.path().join("a.csv"));
    criterion_6(&mut r);
    criterion_7(&mut r);
    criterion_8(&mut r);
    criterion_10(&mut r);
    println!(
        "{} of {} criteria passed",
        r.lines.len() - r.failed,
        r.lines.len()
    );
    assert_eq!(
        r.failed,
        0,
        "failed criteria:\n{}",
        r.lines
            .iter()
            .filter(|l| l.contains("FAIL"))
            .cloned()
            .collect::<Vec<_>>()
            .join("\n")
    );
}
