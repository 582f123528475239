//! Command-line driver: argument parsing and command execution, kept apart
//! from `main` so tests can run commands in-process.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use cordic_af::activation::{AfConfig, AfCore, AfKind, Tally};
use cordic_af::analysis::{monte_carlo, sweep, ErrorReport, SweepRow, UniformSource};
use cordic_af::cordic::{default_iterations, Cordic, CordicMode, Drive, TraceRow};
use cordic_af::fixedpoint::{GoldenOp, GoldenRow};
use cordic_af::neuric::{layer_cycles, run_batch, BatchRequest, NeuricConfig, Strategy};
use cordic_af::{Error, Fx, FxFormat};

/// Version of every JSON document this tool writes.
pub const SCHEMA: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "cordic-af", version, about = "Bit-accurate CORDIC activation-function model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an activation at given inputs (SoftMax takes them as one vector).
    Eval(EvalArgs),
    /// Evenly spaced sweep against the double-precision reference.
    Sweep(SweepArgs),
    /// Monte Carlo error report over uniform inputs.
    #[command(name = "montecarlo")]
    MonteCarlo(MonteCarloArgs),
    /// Cycle and shift-add counts of a NEURIC neuron or layer.
    Cycles(CyclesArgs),
    /// Golden vectors: fixed-point primitive ops or a CORDIC trace.
    Golden(GoldenArgs),
    /// Run a NEURIC batch file.
    Batch(BatchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Activation function.
    #[arg(long, value_parser = parse_af)]
    pub af: AfKind,
    /// I/O format: fxp8, fxp16, fxp32 or qM.N.
    #[arg(long, default_value = "fxp16", value_parser = parse_format)]
    pub format: FxFormat,
    /// CORDIC iterations per pass (default: fraction bits + 2).
    #[arg(long)]
    pub iters: Option<usize>,
}

impl Common {
    fn config(&self) -> AfConfig {
        let cfg = AfConfig::new(self.af, self.format);
        match self.iters {
            Some(n) => cfg.with_iters(n),
            None => cfg,
        }
    }
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub out_format: Option<OutFormat>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub common: Common,
    /// Inputs, comma separated or repeated.
    #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Vec<String>,
    /// Read `--x` as raw integers of the I/O format.
    #[arg(long)]
    pub raw: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub lo: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub hi: f64,
    #[arg(long, default_value_t = 1024)]
    pub steps: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct MonteCarloArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub lo: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub hi: f64,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct CyclesArgs {
    #[command(flatten)]
    pub common: Common,
    /// Products per neuron.
    #[arg(long, default_value_t = 1)]
    pub len: usize,
    /// Neurons in the layer (the SoftMax vector length).
    #[arg(long, default_value_t = 1)]
    pub width: usize,
    #[arg(long, default_value = "iterative", value_parser = parse_strategy)]
    pub strategy: Strategy,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GoldenKind {
    Ops,
    Trace,
}

#[derive(Debug, Args)]
pub struct GoldenArgs {
    #[arg(long, value_enum, default_value = "ops")]
    pub kind: GoldenKind,
    #[arg(long, default_value = "fxp16", value_parser = parse_format)]
    pub format: FxFormat,
    /// Random operand pairs per op (ops).
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Trace mode: linear, circular or hyperbolic.
    #[arg(long, default_value = "hyperbolic", value_parser = parse_mode)]
    pub mode: CordicMode,
    /// Trace drive: rotation or vectoring.
    #[arg(long, default_value = "rotation", value_parser = parse_drive)]
    pub drive: Drive,
    /// Trace start vector; `x0` defaults to the inverse gain.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub y0: String,
    #[arg(long, default_value = "0.5", allow_hyphen_values = true)]
    pub z0: String,
    /// Read the start vector as raw integers of the engine format.
    #[arg(long)]
    pub raw: bool,
    #[arg(long)]
    pub iters: Option<usize>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    /// Batch request JSON.
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_af(s: &str) -> Result<AfKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_format(s: &str) -> Result<FxFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<CordicMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_drive(s: &str) -> Result<Drive, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Parse `argv` (program name first) and execute. Returns the exit status:
/// 0 success, 1 runtime error, 2 usage error.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(doc) => match emit(&cli.command, doc, stdout) {
            Ok(()) => 0,
            // Reader went away (`| head`); nothing left to report to.
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                1
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

/// A finished command: CSV text and a JSON document.
struct Doc {
    csv: String,
    json: Value,
    default: OutFormat,
}

fn execute(cmd: &Command) -> Result<Doc, Error> {
    match cmd {
        Command::Eval(a) => eval(a),
        Command::Sweep(a) => sweep_cmd(a),
        Command::MonteCarlo(a) => montecarlo(a),
        Command::Cycles(a) => cycles(a),
        Command::Golden(a) => golden(a),
        Command::Batch(a) => batch(a),
    }
}

fn emit(cmd: &Command, doc: Doc, stdout: &mut dyn Write) -> std::io::Result<()> {
    let (out, fmt) = match cmd {
        Command::Eval(a) => (&a.output.out, a.output.out_format),
        Command::Sweep(a) => (&a.output.out, a.output.out_format),
        Command::MonteCarlo(a) => (&a.output.out, a.output.out_format),
        Command::Cycles(a) => (&a.output.out, a.output.out_format),
        Command::Golden(a) => (&a.output.out, a.output.out_format),
        Command::Batch(a) => (&a.out, Some(OutFormat::Json)),
    };
    let text = match fmt.unwrap_or(doc.default) {
        OutFormat::Csv => doc.csv,
        OutFormat::Json => {
            let mut s = serde_json::to_string_pretty(&doc.json).map_err(std::io::Error::other)?;
            s.push('\n');
            s
        }
    };
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()),
    }
}

/// JSON object with the schema tag first.
fn versioned<T: Serialize>(body: &T) -> Result<Value, Error> {
    let mut doc = serde_json::Map::new();
    doc.insert("schema".into(), json!(SCHEMA));
    match serde_json::to_value(body)? {
        Value::Object(fields) => doc.extend(fields),
        other => {
            doc.insert("data".into(), other);
        }
    }
    Ok(Value::Object(doc))
}

fn parse_value(s: &str, raw: bool, fmt: FxFormat) -> Result<Fx, Error> {
    let bad = || Error::InvalidConfig(format!("cannot parse {s:?} as a {} value", if raw { "raw" } else { "real" }));
    if raw {
        Fx::from_raw(s.trim().parse().map_err(|_| bad())?, fmt)
    } else {
        let v: f64 = s.trim().parse().map_err(|_| bad())?;
        if !v.is_finite() {
            return Err(bad());
        }
        Ok(Fx::from_real(v, fmt))
    }
}

#[derive(Serialize)]
struct EvalPoint {
    x: f64,
    x_raw: i64,
    y: f64,
    y_raw: i64,
}

#[derive(Serialize)]
struct EvalDoc {
    af: AfKind,
    format: FxFormat,
    n_iters: usize,
    results: Vec<EvalPoint>,
    sat_events: u64,
}

fn eval(a: &EvalArgs) -> Result<Doc, Error> {
    let cfg = a.common.config();
    let core = AfCore::new(&cfg)?;
    let xs = a
        .x
        .iter()
        .map(|s| parse_value(s, a.raw, cfg.fmt))
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Tally::default();
    let ys = match cfg.kind {
        AfKind::SoftMax => core.softmax(&xs, &mut t)?,
        kind => xs.iter().map(|&x| core.eval(kind, x, &mut t)).collect(),
    };
    let results: Vec<EvalPoint> = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| EvalPoint {
            x: x.to_real(),
            x_raw: x.raw(),
            y: y.to_real(),
            y_raw: y.raw(),
        })
        .collect();
    let mut csv = String::from("x_real,x_raw,af,format,y_real,y_raw\n");
    for p in &results {
        csv.push_str(&format!("{},{},{},{},{},{}\n", p.x, p.x_raw, cfg.kind, cfg.fmt, p.y, p.y_raw));
    }
    let json = versioned(&EvalDoc {
        af: cfg.kind,
        format: cfg.fmt,
        n_iters: cfg.n_iters,
        results,
        sat_events: t.sat_events,
    })?;
    Ok(Doc { csv, json, default: OutFormat::Json })
}

#[derive(Serialize)]
struct SweepDoc<'a> {
    af: AfKind,
    format: FxFormat,
    n_iters: usize,
    rows: &'a [SweepRow],
}

fn sweep_cmd(a: &SweepArgs) -> Result<Doc, Error> {
    let cfg = a.common.config();
    let rows = sweep(cfg.kind, &cfg, a.lo, a.hi, a.steps)?;
    let mut csv = format!("{}\n", SweepRow::CSV_HEADER);
    for r in &rows {
        csv.push_str(&r.to_csv(cfg.kind, cfg.fmt));
        csv.push('\n');
    }
    let json = versioned(&SweepDoc {
        af: cfg.kind,
        format: cfg.fmt,
        n_iters: cfg.n_iters,
        rows: &rows,
    })?;
    Ok(Doc { csv, json, default: OutFormat::Csv })
}

fn montecarlo(a: &MonteCarloArgs) -> Result<Doc, Error> {
    let cfg = a.common.config();
    let report = monte_carlo(cfg.kind, &cfg, a.samples, a.lo, a.hi, a.seed)?;
    let csv = format!("{}\n{}\n", ErrorReport::CSV_HEADER, report.to_csv());
    Ok(Doc {
        csv,
        json: versioned(&report)?,
        default: OutFormat::Json,
    })
}

fn cycles(a: &CyclesArgs) -> Result<Doc, Error> {
    let mut cfg = NeuricConfig::new(a.common.af, a.common.format).with_strategy(a.strategy);
    if let Some(n) = a.common.iters {
        cfg = cfg.with_iters(n);
    }
    cfg.validate()?;
    if a.len == 0 || a.width == 0 {
        return Err(Error::Empty);
    }
    if a.common.af == AfKind::SoftMax && a.width > cfg.af.fifo_capacity {
        return Err(Error::Capacity {
            len: a.width,
            capacity: cfg.af.fifo_capacity,
        });
    }
    let r = layer_cycles(&cfg, a.len, a.width);
    let csv = format!(
        "af,format,n_iters,strategy,vector_len,width,mac_cycles,af_cycles,total,shift_add_ops,latency\n\
         {},{},{},{},{},{},{},{},{},{},{}\n",
        cfg.af.kind,
        cfg.fmt,
        cfg.n_iters,
        r.strategy,
        a.len,
        a.width,
        r.mac_cycles,
        r.af_cycles,
        r.total,
        r.shift_add_ops,
        r.latency
    );
    let json = versioned(&json!({
        "af": cfg.af.kind,
        "format": cfg.fmt,
        "n_iters": cfg.n_iters,
        "vector_len": a.len,
        "width": a.width,
        "strategy": r.strategy,
        "mac_cycles": r.mac_cycles,
        "af_cycles": r.af_cycles,
        "total": r.total,
        "shift_add_ops": r.shift_add_ops,
        "latency": r.latency,
    }))?;
    Ok(Doc { csv, json, default: OutFormat::Json })
}

fn golden(a: &GoldenArgs) -> Result<Doc, Error> {
    match a.kind {
        GoldenKind::Ops => golden_ops(a),
        GoldenKind::Trace => golden_trace(a),
    }
}

fn golden_ops(a: &GoldenArgs) -> Result<Doc, Error> {
    let fmt = a.format;
    let (lo, hi) = (fmt.min_raw(), fmt.max_raw());
    let mut src = UniformSource::new(a.seed);
    let span = (hi - lo + 1) as u64;
    let mut draw = || lo + (src.next_u64() % span) as i64;
    let mut pairs = vec![(0, 0), (hi, 1), (lo, -1), (hi, hi), (lo, lo), (3, 1), (-3, 1)];
    pairs.extend((0..a.samples).map(|_| (draw(), draw())));
    let mut rows = Vec::new();
    for &(x, y) in &pairs {
        for op in [GoldenOp::Add, GoldenOp::Sub, GoldenOp::Mul] {
            rows.push(GoldenRow::compute(op, fmt, x, y)?);
        }
        let shift = y.rem_euclid(i64::from(fmt.word_bits()));
        rows.push(GoldenRow::compute(GoldenOp::Shr, fmt, x, shift)?);
    }
    let mut csv = format!("{}\n", GoldenRow::HEADER);
    for r in &rows {
        csv.push_str(&r.to_csv());
        csv.push('\n');
    }
    let json = versioned(&json!({
        "kind": "ops",
        "format": fmt,
        "seed": a.seed,
        "rows": rows.iter().map(|r| json!({
            "op": r.op.name(),
            "format": r.format,
            "raw_in_a": r.a,
            "raw_in_b": r.b,
            "raw_out": r.out,
            "sat_flag": u8::from(r.saturated),
        })).collect::<Vec<_>>(),
    }))?;
    Ok(Doc { csv, json, default: OutFormat::Csv })
}

fn golden_trace(a: &GoldenArgs) -> Result<Doc, Error> {
    let fmt = a.format.internal();
    let n = a.iters.unwrap_or_else(|| default_iterations(a.format));
    if n == 0 || n as u32 >= fmt.word_bits() {
        return Err(Error::InvalidConfig(format!("iteration count {n} out of range")));
    }
    let engine = Cordic::new(a.mode, a.drive, n, fmt);
    let x0 = match &a.x0 {
        Some(s) => parse_value(s, a.raw, fmt)?,
        None => engine.inv_gain(),
    };
    let y0 = parse_value(&a.y0, a.raw, fmt)?;
    let z0 = parse_value(&a.z0, a.raw, fmt)?;
    let (run, rows) = engine.run_traced(x0, y0, z0)?;
    let mut csv = format!("{}\n", TraceRow::HEADER);
    for r in &rows {
        csv.push_str(&r.to_csv());
        csv.push('\n');
    }
    let json = versioned(&json!({
        "kind": "trace",
        "mode": a.mode,
        "drive": a.drive,
        "format": fmt,
        "n_iters": n,
        "start": [x0.raw(), y0.raw(), z0.raw()],
        "rows": rows.iter().map(|r| json!({
            "iter": r.iter, "d": r.d, "x_raw": r.x_raw, "y_raw": r.y_raw, "z_raw": r.z_raw,
        })).collect::<Vec<_>>(),
        "sat_events": run.sat_events,
    }))?;
    Ok(Doc { csv, json, default: OutFormat::Csv })
}

fn batch(a: &BatchArgs) -> Result<Doc, Error> {
    let text = fs::read_to_string(&a.input).map_err(|e| Error::InvalidConfig(format!("{}: {e}", a.input.display())))?;
    let req: BatchRequest = serde_json::from_str(&text)?;
    let resp = run_batch(&req)?;
    Ok(Doc {
        csv: String::new(),
        json: versioned(&resp)?,
        default: OutFormat::Json,
    })
}
