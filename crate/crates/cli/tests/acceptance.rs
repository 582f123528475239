//! Acceptance suite. Runs every criterion at its stated tolerance, prints one
//! PASS/FAIL line each and exits non-zero if any fails.
//!
//!     cargo test -p cordic-af-cli --test acceptance

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use serde::Deserialize;

use cordic_af::activation::{AfConfig, AfCore, AfKind, Tally};
use cordic_af::analysis::{monte_carlo, UniformSource};
use cordic_af::cordic::{coverage, float_replica, gain, make_schedule, Cordic, CordicMode, Drive, CR_RANGE, HR_RANGE};
use cordic_af::neuric::{cycles, layer_cycles, Neuric, NeuricConfig, Strategy};
use cordic_af::{Fx, FxFormat};

const ALL_AFS: [AfKind; 7] = [
    AfKind::Sigmoid,
    AfKind::Tanh,
    AfKind::ReLU,
    AfKind::Swish,
    AfKind::GeLU,
    AfKind::SeLU,
    AfKind::SoftMax,
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let took = start.elapsed();
    o.detail.push_str(&format!("; {:.2} s", took.as_secs_f64()));
    if let Some(limit) = limit {
        if took > limit {
            o.pass = false;
            o.detail.push_str(&format!(" (limit {} s)", limit.as_secs()));
        }
    }
    o
}

/// Mean relative error at FXP16 defaults, 1e5 samples on [-1, 1].
fn c1_mean_error() -> Outcome {
    let mut per = Vec::new();
    for kind in ALL_AFS {
        let cfg = AfConfig::new(kind, FxFormat::FXP16);
        let rep = monte_carlo(kind, &cfg, 100_000, -1.0, 1.0, 42).expect("monte carlo");
        per.push((kind, rep.rel_mean));
    }
    let get = |k: AfKind| per.iter().find(|(kind, _)| *kind == k).unwrap().1;
    let avg = per.iter().map(|(_, r)| r).sum::<f64>() / per.len() as f64;
    let (s, t) = (get(AfKind::Sigmoid), get(AfKind::Tanh));
    outcome(
        s <= 3.5 && t <= 3.5 && avg <= 3.5,
        format!("sigmoid {s:.4}%, tanh {t:.4}%, mean of 7 {avg:.4}% (limit 3.5%)"),
    )
}

/// Double-precision replica at 30 iterations against the math library.
fn c2_replica_vs_math() -> Outcome {
    let n = 30;
    let mut r = UniformSource::new(2);
    let mut worst = [0.0f64; 4];
    let lin = make_schedule(CordicMode::Linear, n);
    let circ = make_schedule(CordicMode::Circular, n);
    let hyp = make_schedule(CordicMode::Hyperbolic, n);
    let (kc, kh) = (1.0 / gain(CordicMode::Circular, &circ), 1.0 / gain(CordicMode::Hyperbolic, &hyp));
    let lin_reach = coverage(CordicMode::Linear, &lin);
    for _ in 0..10_000 {
        let z = r.uniform(-CR_RANGE, CR_RANGE);
        let (x, y, _) = float_replica((kc, 0.0, z), CordicMode::Circular, Drive::Rotation, &circ);
        worst[0] = worst[0].max((x - z.cos()).abs()).max((y - z.sin()).abs());

        let z = r.uniform(-HR_RANGE, HR_RANGE);
        let (x, y, _) = float_replica((kh, 0.0, z), CordicMode::Hyperbolic, Drive::Rotation, &hyp);
        worst[1] = worst[1].max((x - z.cosh()).abs()).max((y - z.sinh()).abs());

        let (a, z) = (r.uniform(-1.0, 1.0), r.uniform(-lin_reach, lin_reach));
        let (_, y, _) = float_replica((a, 0.0, z), CordicMode::Linear, Drive::Rotation, &lin);
        worst[2] = worst[2].max((y - a * z).abs());

        let a = r.uniform(0.5, 2.0);
        let b = a * r.uniform(-1.0, 1.0);
        let (_, _, q) = float_replica((a, b, 0.0), CordicMode::Linear, Drive::Vectoring, &lin);
        worst[3] = worst[3].max((q - b / a).abs());
    }
    let max = worst.iter().copied().fold(0.0, f64::max);
    outcome(
        max <= 1e-6,
        format!(
            "max |err| sin/cos {:.2e}, sinh/cosh {:.2e}, multiply {:.2e}, divide {:.2e} (limit 1e-6)",
            worst[0], worst[1], worst[2], worst[3]
        ),
    )
}

/// Worst result-lane deviation from the float replica, in `unit`s.
fn replica_gap(fmt: FxFormat, unit: f64, r: &mut UniformSource) -> (f64, String) {
    let n = 14;
    let mut overall = 0.0f64;
    let mut parts = Vec::new();
    for mode in [CordicMode::Linear, CordicMode::Circular, CordicMode::Hyperbolic] {
        for drive in [Drive::Rotation, Drive::Vectoring] {
            let engine = Cordic::new(mode, drive, n, fmt);
            let lim = 0.999 * engine.limit().min(4.0);
            let q = |v: f64| Fx::from_real(v, fmt);
            let mut worst = 0.0f64;
            for _ in 0..10_000 {
                let (x0, y0, z0) = match drive {
                    Drive::Rotation => (r.uniform(0.5, 1.0), r.uniform(-0.5, 0.5), r.uniform(-lim, lim)),
                    Drive::Vectoring => {
                        let x = r.uniform(0.5, 1.0);
                        (x, x * r.uniform(-lim, lim), r.uniform(-0.5, 0.5))
                    }
                };
                let (a, b, c) = (q(x0), q(y0), q(z0));
                let s = engine.run(a, b, c).expect("in range").state;
                let f = float_replica((a.to_real(), b.to_real(), c.to_real()), mode, drive, engine.schedule());
                let lanes = match drive {
                    Drive::Rotation => [(s.x, f.0), (s.y, f.1)],
                    Drive::Vectoring => [(s.x, f.0), (s.z, f.2)],
                };
                for (fx, fl) in lanes {
                    worst = worst.max((fx.to_real() - fl).abs() / unit);
                }
            }
            overall = overall.max(worst);
            parts.push(format!("{}{} {worst:.1}", &mode.to_string()[..1], &drive.to_string()[..1]));
        }
    }
    (overall, parts.join(" "))
}

/// FXP16 engine against the float replica, n + 2 internal LSB.
fn c3_fixed_vs_replica() -> Outcome {
    let n = 14.0;
    let mut r = UniformSource::new(3);
    let stated = FxFormat::FXP16.widened(2, 2);
    let (g1, d1) = replica_gap(stated, stated.lsb(), &mut r);
    let (g2, _) = replica_gap(FxFormat::FXP16.internal(), stated.lsb(), &mut r);
    outcome(
        g1 <= n + 2.0 && g2 <= n + 2.0,
        format!(
            "{stated} worst {g1:.1} LSB [{d1}]; {} worst {g2:.1} x 2^-14 (limit {})",
            FxFormat::FXP16.internal(),
            n + 2.0
        ),
    )
}

/// SoftMax sums and shift invariance over 1e3 random vectors.
fn c4_softmax() -> Outcome {
    let io = FxFormat::FXP16;
    let cfg = AfConfig::new(AfKind::SoftMax, io);
    let core = AfCore::new(&cfg).unwrap();
    let n = cfg.n_iters as f64;
    let mut r = UniformSource::new(4);
    let (mut worst_sum, mut worst_shift) = (0.0f64, 0i64);
    for _ in 0..1000 {
        let len = 2 + (r.next_u64() % 63) as usize;
        let xs: Vec<Fx> = (0..len).map(|_| Fx::from_real(r.uniform(-2.5, 2.5), io)).collect();
        let mut t = Tally::default();
        let ys = core.softmax(&xs, &mut t).unwrap();
        let sum: f64 = ys.iter().map(|y| y.to_real()).sum();
        worst_sum = worst_sum.max((sum - 1.0).abs() / io.lsb());

        let hi = xs.iter().map(|x| x.to_real()).fold(f64::MIN, f64::max);
        let lo = xs.iter().map(|x| x.to_real()).fold(f64::MAX, f64::min);
        let c = Fx::from_real(r.uniform((-5.5 - lo).max(-3.0), (5.5 - hi).min(3.0)), io);
        let shifted: Vec<Fx> = xs.iter().map(|&x| x.add_sat(c)).collect();
        let zs = core.softmax(&shifted, &mut t).unwrap();
        for (y, z) in ys.iter().zip(&zs) {
            worst_shift = worst_shift.max((y.raw() - z.raw()).abs());
        }
    }
    outcome(
        worst_sum <= n && worst_shift <= 2,
        format!("|sum - 1| worst {worst_sum} LSB (limit {n}), shift gap worst {worst_shift} LSB (limit 2)"),
    )
}

/// Linear-rotation MAC against exact `acc + w * x`, acc, x, w in [-1, 1].
fn c5_mac() -> Outcome {
    let mut r = UniformSource::new(5);
    let mut parts = Vec::new();
    let mut pass = true;
    for io in [FxFormat::FXP8, FxFormat::FXP16] {
        let pe = Neuric::new(&NeuricConfig::new(AfKind::ReLU, io)).unwrap();
        let mut worst = 0.0f64;
        let mut t = Tally::default();
        for _ in 0..100_000 {
            let q = |v: f64| Fx::from_real(v, io);
            let (acc, x, w) = (q(r.uniform(-1.0, 1.0)), q(r.uniform(-1.0, 1.0)), q(r.uniform(-1.0, 1.0)));
            let got = pe.mac(acc, x, w, &mut t);
            let exact = acc.to_real() + w.to_real() * x.to_real();
            worst = worst.max((got.to_real() - exact).abs() / io.lsb());
        }
        pass &= worst <= 2.0;
        parts.push(format!("{io} worst {worst:.3} LSB"));
    }
    outcome(pass, format!("{} (limit 2)", parts.join(", ")))
}

/// Monotonicity and symmetry grids at both precisions.
fn c6_grids() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for io in [FxFormat::FXP8, FxFormat::FXP16] {
        let max_norm = AfConfig::new(AfKind::Tanh, io).max_norm;
        let grid: Vec<Fx> = (0..4096)
            .map(|k| Fx::from_real(-max_norm + 2.0 * max_norm * k as f64 / 4095.0, io))
            .collect();
        let mut t = Tally::default();
        let mut mono = Vec::new();
        for kind in [AfKind::Sigmoid, AfKind::Tanh, AfKind::ReLU, AfKind::SeLU] {
            let core = AfCore::new(&AfConfig::new(kind, io)).unwrap();
            let ys: Vec<i64> = grid.iter().map(|&x| core.eval(kind, x, &mut t).raw()).collect();
            let drop = ys.windows(2).map(|w| w[0] - w[1]).max().unwrap().max(0);
            pass &= drop <= 1;
            mono.push(format!("{kind} {drop}"));
        }
        let one = Fx::one(io).raw();
        let tanh = AfCore::new(&AfConfig::new(AfKind::Tanh, io)).unwrap();
        let sig = AfCore::new(&AfConfig::new(AfKind::Sigmoid, io)).unwrap();
        let relu = AfCore::new(&AfConfig::new(AfKind::ReLU, io)).unwrap();
        let (mut st, mut ss, mut sr) = (0i64, 0i64, 0i64);
        for &x in grid.iter().filter(|x| x.raw() != Fx::min_value(io).raw()) {
            let nx = x.neg_sat();
            st = st.max((tanh.tanh(x, &mut t).raw() + tanh.tanh(nx, &mut t).raw()).abs());
            ss = ss.max((sig.sigmoid(x, &mut t).raw() + sig.sigmoid(nx, &mut t).raw() - one).abs());
            sr = sr.max((relu.relu(x, &mut t).raw() - relu.relu(nx, &mut t).raw() - x.raw()).abs());
        }
        pass &= st <= 2 && ss <= 2 && sr == 0;
        parts.push(format!(
            "{io}: max drop [{}] (limit 1), tanh sym {st}, sigmoid sym {ss} (limit 2), relu {sr} (limit 0)",
            mono.join(", ")
        ));
    }
    outcome(pass, parts.join("; "))
}

#[derive(Deserialize)]
struct Layer {
    weights: Vec<Vec<f64>>,
    bias: Vec<f64>,
}

#[derive(Deserialize)]
struct TestSet {
    x: Vec<Vec<f64>>,
    y: Vec<usize>,
}

#[derive(Deserialize)]
struct Mlp {
    hidden: Layer,
    output: Layer,
    test: TestSet,
}

fn argmax(v: &[f64]) -> usize {
    v.iter()
        .enumerate()
        .fold((0, f64::MIN), |best, (i, &x)| if x > best.1 { (i, x) } else { best })
        .0
}

fn float_layer(l: &Layer, x: &[f64]) -> Vec<f64> {
    l.weights
        .iter()
        .zip(&l.bias)
        .map(|(row, b)| b + row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>())
        .collect()
}

/// Spiral MLP on FXP16 NEURIC neurons against the double-precision model.
fn c7_qor() -> Outcome {
    let mlp: Mlp = serde_json::from_str(include_str!("data/spiral_mlp.json")).expect("mlp json");
    let io = FxFormat::FXP16;
    let hidden = Neuric::new(&NeuricConfig::new(AfKind::Tanh, io)).unwrap();
    let output = Neuric::new(&NeuricConfig::new(AfKind::SoftMax, io)).unwrap();
    let q = |v: &[f64]| -> Vec<Fx> { v.iter().map(|&x| Fx::from_real(x, io)).collect() };
    let (w1, b1) = (mlp.hidden.weights.iter().map(|r| q(r)).collect::<Vec<_>>(), q(&mlp.hidden.bias));
    let (w2, b2) = (mlp.output.weights.iter().map(|r| q(r)).collect::<Vec<_>>(), q(&mlp.output.bias));
    let (mut ok_float, mut ok_fx) = (0usize, 0usize);
    let mut t = Tally::default();
    for (x, &label) in mlp.test.x.iter().zip(&mlp.test.y) {
        let h: Vec<f64> = float_layer(&mlp.hidden, x).iter().map(|v| v.tanh()).collect();
        ok_float += usize::from(argmax(&float_layer(&mlp.output, &h)) == label);

        let h = hidden.layer(&q(x), &w1, &b1, &mut t).unwrap();
        let p = output.layer(&h, &w2, &b2, &mut t).unwrap();
        let p: Vec<f64> = p.iter().map(|v| v.to_real()).collect();
        ok_fx += usize::from(argmax(&p) == label);
    }
    let n = mlp.test.y.len() as f64;
    let (af, ax) = (ok_float as f64 / n, ok_fx as f64 / n);
    let ratio = ax / af;
    outcome(
        mlp.test.y.len() == 500 && ratio >= 0.985,
        format!(
            "float accuracy {af:.4}, FXP16 accuracy {ax:.4}, retained {:.2}% (limit 98.5%)",
            100.0 * ratio
        ),
    )
}

/// Cycle model against instrumented execution.
fn c8_cycles() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    let io = FxFormat::FXP16;
    let xs: Vec<Fx> = [0.9, -1.7, 2.2, 0.05, -0.4, 1.3, -2.9, 0.6].iter().map(|&v| Fx::from_real(v, io)).collect();
    let ws: Vec<Fx> = [0.4, 0.35, -0.6, 1.1, -0.2, 0.75, 0.1, -0.9].iter().map(|&v| Fx::from_real(v, io)).collect();
    for kind in ALL_AFS {
        for n in [7, 14] {
            for strategy in [Strategy::Iterative, Strategy::Pipelined] {
                let cfg = NeuricConfig::new(kind, io).with_iters(n).with_strategy(strategy);
                let pe = Neuric::new(&cfg).unwrap();
                for len in [1, 3, 8] {
                    let mut t = Tally::default();
                    pe.neuron(&xs[..len], &ws[..len], Fx::zero(io), &mut t).unwrap();
                    let m = cycles(&cfg, len);
                    let cyc_ok = strategy == Strategy::Pipelined || m.total == t.cycles;
                    if !cyc_ok || m.shift_add_ops != t.shift_add_ops {
                        failures.push(format!("{kind} n={n} {strategy} len={len}"));
                    }
                    checked += 1;
                }
                for width in [2, 5] {
                    let rows: Vec<Vec<Fx>> = (0..width).map(|k| ws[k..k + 3].to_vec()).collect();
                    let bias = vec![Fx::zero(io); width];
                    let mut t = Tally::default();
                    pe.layer(&xs[..3], &rows, &bias, &mut t).unwrap();
                    let m = layer_cycles(&cfg, 3, width);
                    let cyc_ok = strategy == Strategy::Pipelined || m.total == t.cycles;
                    if !cyc_ok || m.shift_add_ops != t.shift_add_ops {
                        failures.push(format!("{kind} n={n} {strategy} width={width}"));
                    }
                    checked += 1;
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{checked} configurations, mismatches: {}", if failures.is_empty() { "none".into() } else { failures.join(", ") }),
    )
}

/// Identical argv twice gives byte-identical stdout and files.
fn c9_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_cordic-af");
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance-determinism");
    std::fs::create_dir_all(&dir).unwrap();
    let batch = dir.join("batch.json");
    std::fs::write(
        &batch,
        r#"{"config":{"format":"fxp16","af":"softmax"},"inputs":[[0.5,-1.0,0.25],[1.5,0.0,-0.5]],"weights":[[0.2,0.4,-0.1],[-0.3,0.1,0.9]],"bias":[0.0,0.1]}"#,
    )
    .unwrap();
    let batch = batch.to_str().unwrap().to_owned();
    let commands: Vec<Vec<String>> = [
        vec!["eval", "--af", "gelu", "--x", "-2,-0.5,0,0.5,2"],
        vec!["eval", "--af", "softmax", "--x", "1,2,3", "--out-format", "csv"],
        vec!["sweep", "--af", "tanh", "--steps", "1024"],
        vec!["sweep", "--af", "selu", "--format", "fxp8", "--out-format", "json"],
        vec!["montecarlo", "--af", "swish", "--samples", "20000", "--seed", "7"],
        vec!["montecarlo", "--af", "softmax", "--samples", "20000", "--out-format", "csv"],
        vec!["cycles", "--af", "softmax", "--len", "4", "--width", "8", "--strategy", "pipelined"],
        vec!["golden", "--kind", "ops", "--format", "fxp8"],
        vec!["golden", "--kind", "trace", "--mode", "circular", "--z0", "0.7"],
        vec!["batch", "--in", &batch],
    ]
    .iter()
    .map(|v| v.iter().map(|s| s.to_string()).collect())
    .collect();
    let mut failures = Vec::new();
    for (k, argv) in commands.iter().enumerate() {
        let mut outs = Vec::new();
        for round in 0..2 {
            let file = dir.join(format!("out-{k}-{round}"));
            let mut with_file = argv.clone();
            with_file.extend(["--out".to_string(), file.to_str().unwrap().to_string()]);
            let a = Command::new(bin).args(argv).output().unwrap();
            let b = Command::new(bin).args(&with_file).output().unwrap();
            let written = std::fs::read(&file).unwrap_or_default();
            let ok = a.status.success() && b.status.success() && !a.stdout.is_empty();
            outs.push((ok, a.stdout, written));
        }
        let same = outs[0].1 == outs[1].1 && outs[0].2 == outs[1].2 && outs[0].1 == outs[0].2;
        if !(outs[0].0 && outs[1].0 && same) {
            failures.push(argv.join(" "));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} commands x 2 runs, stdout and --out files; differing: {}",
            commands.len(),
            if failures.is_empty() { "none".into() } else { failures.join(" | ") }
        ),
    )
}

fn main() {
    let criteria: [(&str, Option<u64>, fn() -> Outcome); 9] = [
        ("1 mean-error reproduction", Some(10), c1_mean_error),
        ("2 algorithmic-error isolation", Some(5), c2_replica_vs_math),
        ("3 fixed-point error bound", None, c3_fixed_vs_replica),
        ("4 softmax normalization and shift invariance", None, c4_softmax),
        ("5 MAC oracle equivalence", None, c5_mac),
        ("6 monotonicity and symmetry", None, c6_grids),
        ("7 QoR surrogate", Some(5), c7_qor),
        ("8 cycle-model validation", None, c8_cycles),
        ("9 CLI determinism", None, c9_determinism),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let o = timed(limit.map(Duration::from_secs), run);
        println!("criterion {name}: {} ({})", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
