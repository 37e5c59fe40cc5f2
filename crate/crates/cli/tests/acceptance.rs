//! Acceptance run over the preset scenarios.
//!
//! Prints one PASS/FAIL line per criterion with the measured values. Criteria
//! can be selected by number: `cargo test --test acceptance -- 4 7`.
//!
//! Two criteria are known to be out of reach of the model as specified (see
//! README, "Acceptance"): the entropy maxima (5) and the histogram shift (9).
//! They are evaluated at their full thresholds and reported as FAIL; the
//! process exits nonzero only when any other criterion fails, or when a known
//! failure starts passing so the list can be pruned.

use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::rc::Rc;
use std::time::Instant;

use lmgbrain::analysis::{dominant_frequency, histogram, pearson_correlation, periodogram, Window};
use lmgbrain::dynamics::{simulate, InitialState, Record, SimulationConfig, TimeStep, Trajectory};
use lmgbrain::hamiltonian::LmgParams;
use lmgbrain::oracle::full_space_simulate;
use lmgbrain::plasticity::PlasticityParams;
use lmgbrain::presets;
use lmgbrain::table::trajectory_table;

const KNOWN_UNATTAINABLE: [u32; 2] = [5, 9];

/// Pearson(r, E) of the N=80 half-excited depression run, measured once.
const FROZEN_PEARSON: f64 = -0.9844;
const PEARSON_TOLERANCE: f64 = 0.05;

const NORM_TOLERANCE: f64 = 1e-6;
const ENERGY_TOLERANCE: f64 = 1e-8;
const ORACLE_TOLERANCE: f64 = 1e-8;
const PARITY_TOLERANCE: f64 = 1e-8;
/// Fraction of each record discarded as transient before histogramming.
const TRANSIENT_FRACTION: f64 = 0.1;
const HIST_BINS: usize = 50;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

#[derive(Default)]
struct Runs {
    cache: HashMap<String, Rc<Trajectory>>,
}

impl Runs {
    fn get(&mut self, name: &str) -> Rc<Trajectory> {
        if let Some(t) = self.cache.get(name) {
            return t.clone();
        }
        let config = presets::preset_config(name).unwrap();
        // presets sharing a configuration share the run
        let hit = self.cache.values().find(|t| t.config == config).cloned();
        let traj = hit.unwrap_or_else(|| {
            let start = Instant::now();
            let t = Rc::new(simulate(&config).unwrap_or_else(|e| panic!("{name}: {e}")));
            eprintln!("  ran {name} in {:.1} s", start.elapsed().as_secs_f64());
            t
        });
        self.cache.insert(name.to_string(), traj.clone());
        traj
    }
}

fn column(t: &Trajectory, name: &str) -> Vec<f64> {
    t.column(name).unwrap()
}

fn max(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

fn min(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(f64::INFINITY, f64::min)
}

fn max_dev(a: &Trajectory, b: &Trajectory, f: fn(&Record) -> f64) -> f64 {
    assert_eq!(a.records.len(), b.records.len());
    max(a.records.iter().zip(&b.records).map(|(x, y)| (f(x) - f(y)).abs()))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in [2, 3, 4] {
        for gamma in [0.6, 1.0] {
            for count in [0, n / 2, n] {
                for plastic in [false, true] {
                    let p = if plastic {
                        PlasticityParams {
                            tau_r: 1.0,
                            tau_f: 0.0,
                            u_base: 0.5,
                            r0: 1.0,
                            u0: 0.5,
                        }
                    } else {
                        PlasticityParams::frozen(0.5)
                    };
                    let mut c =
                        SimulationConfig::new(n, LmgParams::new(1.0, gamma), p, InitialState::Count(count), 10.0);
                    c.dt = TimeStep::Fixed(0.005);
                    c.record_stride = Some(1);
                    let a = simulate(&c).unwrap();
                    let b = full_space_simulate(&c).unwrap();
                    let fields: [fn(&Record) -> f64; 4] = [|r| r.e, |r| r.r, |r| r.u, |r| r.fidelity];
                    for f in fields {
                        worst = worst.max(max_dev(&a, &b, f));
                    }
                    cases += 1;
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= ORACLE_TOLERANCE && secs < 10.0,
        format!("{cases} cases, max deviation {worst:.2e} (<= {ORACLE_TOLERANCE:e}), {secs:.2} s (< 10 s)"),
    )
}

fn final_e(base: &SimulationConfig, dt: f64) -> f64 {
    let mut c = base.clone();
    c.dt = TimeStep::Fixed(dt);
    c.norm_tolerance = 1e-2;
    simulate(&c).unwrap().records.last().unwrap().e
}

fn conservation(runs: &mut Runs) -> Outcome {
    let mut worst_norm: (f64, String) = (0.0, String::new());
    let mut worst_energy: (f64, String) = (0.0, String::new());
    for name in presets::names() {
        let t = runs.get(&name);
        let drift = max(t.records.iter().map(|r| (r.norm - 1.0).abs()));
        if drift >= worst_norm.0 {
            worst_norm = (drift, name.clone());
        }
        if t.config.plasticity.is_frozen() {
            let e0 = t.records[0].energy;
            let drift = max(t.records.iter().map(|r| (r.energy - e0).abs()));
            if drift >= worst_energy.0 {
                worst_energy = (drift, name.clone());
            }
        }
    }
    // observed order against a dt/32 reference on a frozen run
    let base = SimulationConfig::new(
        10,
        LmgParams::new(1.0, 0.8),
        PlasticityParams::frozen(0.5),
        InitialState::Count(0),
        20.0,
    );
    let dt = 0.1;
    let reference = final_e(&base, dt / 32.0);
    let err: Vec<f64> = [1.0, 2.0, 4.0]
        .iter()
        .map(|k| (final_e(&base, dt / k) - reference).abs())
        .collect();
    let orders = [(err[0] / err[1]).log2(), (err[1] / err[2]).log2()];
    let order_ok = orders.iter().all(|p| (3.7..=4.3).contains(p));
    outcome(
        worst_norm.0 <= NORM_TOLERANCE && worst_energy.0 <= ENERGY_TOLERANCE && order_ok,
        format!(
            "{} presets; norm drift {:.2e} ({}), frozen energy drift {:.2e} ({}), RK4 order {:.3}/{:.3}",
            runs.cache.len(),
            worst_norm.0,
            worst_norm.1,
            worst_energy.0,
            worst_energy.1,
            orders[0],
            orders[1]
        ),
    )
}

fn parity_trap() -> Outcome {
    let mut worst: f64 = 0.0;
    let families = [
        "fig1-gamma1-p100",
        "fig1-gamma0.9-p100",
        "fig2-N80-half",
        "fig4-tau10-none",
        "fig6-N10-tauf1000",
    ];
    for name in families {
        let mut c = presets::preset_config(name).unwrap();
        c.qubits = 40;
        c.initial = InitialState::Count(20);
        c.t_max = 1000.0;
        let t = simulate(&c).unwrap();
        worst = worst.max(max(t.records.iter().map(|r| (r.e - 0.5).abs())));
    }
    outcome(
        worst <= PARITY_TOLERANCE,
        format!(
            "N=40, n0=20, {} parameter sets: max |E - 1/2| = {worst:.2e}",
            families.len()
        ),
    )
}

fn anticorrelation(runs: &mut Runs) -> Outcome {
    let t = runs.get("fig2-N80-half");
    match pearson_correlation(&column(&t, "r"), &column(&t, "E")) {
        Ok(c) => outcome(
            c < 0.0 && (c - FROZEN_PEARSON).abs() <= PEARSON_TOLERANCE,
            format!("Pearson(r, E) = {c:.5} (< 0; frozen {FROZEN_PEARSON} +/- {PEARSON_TOLERANCE})"),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn entropy_anchors(runs: &mut Runs) -> Outcome {
    let up = runs.get("entropy-N80-allup");
    let half = runs.get("entropy-N80-half");
    let s_up = column(&up, "S_block");
    let s_half = column(&half, "S_block");
    let checks = [
        ("allup S(0) <= 1e-10", s_up[0] <= 1e-10, format!("{:.2e}", s_up[0])),
        (
            "allup max S in [3.26, 3.66]",
            (3.26..=3.66).contains(&max(s_up.iter().copied())),
            format!("{:.4}", max(s_up.iter().copied())),
        ),
        (
            "half S(0) in [3.15, 3.45]",
            (3.15..=3.45).contains(&s_half[0]),
            format!("{:.4}", s_half[0]),
        ),
        (
            "half max S in [4.5, 5.1]",
            (4.5..=5.1).contains(&max(s_half.iter().copied())),
            format!("{:.4}", max(s_half.iter().copied())),
        ),
        (
            "half min S(t>0) > 0",
            min(s_half[1..].iter().copied()) > 0.0,
            format!("{:.4}", min(s_half[1..].iter().copied())),
        ),
    ];
    let detail = checks
        .iter()
        .map(|(what, ok, v)| format!("{what}: {v} {}", if *ok { "ok" } else { "MISS" }))
        .collect::<Vec<_>>()
        .join("; ");
    outcome(checks.iter().all(|c| c.1), detail)
}

fn revival_linkage(runs: &mut Runs) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for name in ["fidelity-N80-allup", "fidelity-N80-none"] {
        let t = runs.get(name);
        let violations = t
            .records
            .iter()
            .filter(|r| r.fidelity > 0.999 && r.s_block >= 0.05)
            .count();
        // a revival must follow a genuine departure from the initial state
        let left = t.records.iter().position(|r| r.fidelity < 0.5);
        let revival = left.map_or(0.0, |i| max(t.records[i..].iter().map(|r| r.fidelity)));
        pass &= violations == 0 && revival >= 0.95;
        parts.push(format!(
            "{name}: {violations} records with F > 0.999 and S >= 0.05, revival max F = {revival:.6}"
        ));
    }
    outcome(pass, parts.join("; "))
}

fn dominant(t: &Trajectory, col: &str) -> f64 {
    let spec = periodogram(&column(t, col), t.sample_interval(), Window::Rectangular).unwrap();
    dominant_frequency(&spec).unwrap().frequency
}

fn spectral_shift(runs: &mut Runs) -> Outcome {
    let taus = ["0.1", "10", "20"];
    let mut pass = true;
    let mut parts = Vec::new();
    for start in ["none", "half", "allup"] {
        let f: Vec<f64> = taus
            .iter()
            .map(|tau| dominant(&runs.get(&format!("fig4-tau{tau}-{start}")), "S_block"))
            .collect();
        let decreasing = f.windows(2).all(|w| w[1] < w[0]);
        pass &= decreasing;
        parts.push(format!(
            "S_block peak ({start}) {:.3e} > {:.3e} > {:.3e}: {decreasing}",
            f[0], f[1], f[2]
        ));
    }
    let collective = dominant(&runs.get("fig4-tau0.1-none"), "E");
    let in_band = (1.25e-4..=5e-4).contains(&collective);
    pass &= in_band;
    parts.push(format!(
        "tau_r=0.1 collective (E) peak {collective:.3e} within x2 of 2.5e-4: {in_band}"
    ));
    outcome(pass, parts.join("; "))
}

fn facilitation(runs: &mut Runs) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for n in [2, 10, 20] {
        let slow = runs.get(&format!("fig6-N{n}-tauf1000"));
        let fast = runs.get(&format!("fig6-N{n}-tauf1"));
        let u_slow = max(slow.records.iter().map(|r| r.u));
        let r_slow = min(slow.records.iter().map(|r| r.r));
        let u_fast = max(fast.records.iter().map(|r| r.u));
        pass &= u_slow > 0.9 && r_slow < 0.1 && u_fast < 0.2;
        parts.push(format!(
            "N={n}: tau_f=1000 max U {u_slow:.3}, min r {r_slow:.4}; tau_f=1 max U {u_fast:.4}"
        ));
    }
    outcome(pass, parts.join("; "))
}

fn histogram_shift(runs: &mut Runs) -> Outcome {
    let means: Vec<f64> = ["0.1", "10", "20"]
        .iter()
        .map(|tau| {
            let t = runs.get(&format!("fig5-tau{tau}"));
            let s = column(&t, "S_block");
            let skip = (s.len() as f64 * TRANSIENT_FRACTION) as usize;
            histogram(&s[skip..], HIST_BINS).unwrap().mean()
        })
        .collect();
    let increasing = means.windows(2).all(|w| w[1] > w[0]);
    outcome(
        increasing,
        format!(
            "S_block histogram mean for tau_r = 0.1, 10, 20: {:.4}, {:.4}, {:.4} (must increase)",
            means[0], means[1], means[2]
        ),
    )
}

fn cli(args: &[&str]) -> bool {
    Command::new(env!("CARGO_BIN_EXE_lmgbrain"))
        .args(args)
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

fn csv_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn determinism(runs: &mut Runs) -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for name in ["fig2-N10-half", "fig2-N80-half", "fig6-N2-tauf1000", "fig4-tau20-half"] {
        let a = dir.path().join(format!("{name}.a.csv"));
        let b = dir.path().join(format!("{name}.b.csv"));
        let ok_run = cli(&["simulate", "--preset", name, "--out", a.to_str().unwrap()])
            && cli(&["simulate", "--preset", name, "--out", b.to_str().unwrap()]);
        let (x, y) = (fs::read(&a).unwrap_or_default(), fs::read(&b).unwrap_or_default());
        let in_process = trajectory_table(&runs.get(name)).to_csv_string().into_bytes();
        let same = ok_run && !x.is_empty() && x == y && x == in_process;
        pass &= same;
        parts.push(format!("{name} {}", if same { "identical" } else { "DIFFERS" }));
    }
    let serial = dir.path().join("serial");
    let parallel = dir.path().join("parallel");
    let sweep = |out: &Path, k: &str| {
        cli(&[
            "sweep",
            "--preset",
            "fig6-N2-tauf1",
            "--vary",
            "tau_f=1,10,100,1000",
            "--out",
            out.to_str().unwrap(),
            "--parallel",
            k,
        ])
    };
    let swept = sweep(&serial, "1") && sweep(&parallel, "4");
    let (s, p) = (csv_files(&serial), csv_files(&parallel));
    let same = swept && s.len() == 5 && s == p;
    pass &= same;
    parts.push(format!(
        "sweep tau_f x4 --parallel 4 vs serial: {} files {}",
        s.len(),
        if same { "identical" } else { "DIFFER" }
    ));
    outcome(pass, parts.join("; "))
}

const TITLES: [&str; 10] = [
    "oracle equivalence",
    "conservation",
    "parity trap",
    "anticorrelation",
    "entropy anchors",
    "revival linkage",
    "spectral shift",
    "facilitation saturation",
    "histogram shift",
    "determinism and format",
];

fn main() {
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let wanted = |id: u32| selected.is_empty() || selected.contains(&id);
    let mut runs = Runs::default();
    let total = Instant::now();
    let mut unexpected = Vec::new();
    let mut passed = 0;
    let mut evaluated = 0;
    for id in 1..=10u32 {
        if !wanted(id) {
            continue;
        }
        let start = Instant::now();
        let o = match id {
            1 => oracle_equivalence(),
            2 => conservation(&mut runs),
            3 => parity_trap(),
            4 => anticorrelation(&mut runs),
            5 => entropy_anchors(&mut runs),
            6 => revival_linkage(&mut runs),
            7 => spectral_shift(&mut runs),
            8 => facilitation(&mut runs),
            9 => histogram_shift(&mut runs),
            _ => determinism(&mut runs),
        };
        evaluated += 1;
        let known = KNOWN_UNATTAINABLE.contains(&id);
        let tag = match (o.pass, known) {
            (true, false) => "PASS",
            (true, true) => "PASS (listed as unattainable; prune the list)",
            (false, true) => "FAIL (known unattainable)",
            (false, false) => "FAIL",
        };
        if o.pass {
            passed += 1;
        }
        if o.pass == known {
            unexpected.push(id);
        }
        println!(
            "criterion {id:>2} {:<24} {tag}: {} [{:.1} s]",
            TITLES[id as usize - 1],
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "{passed}/{evaluated} criteria pass; known unattainable: {KNOWN_UNATTAINABLE:?}; total {:.0} s",
        total.elapsed().as_secs_f64()
    );
    if !unexpected.is_empty() {
        println!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
