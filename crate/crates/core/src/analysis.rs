//! Double-precision reference, ME/MAE error metrics and the Monte Carlo
//! harness.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::Serialize;

use crate::activation::{AfConfig, AfCore, AfKind, Tally};
use crate::error::{Error, Result};
use crate::fixedpoint::{Fx, FxFormat};

/// Points whose reference magnitude is below this are left out of the
/// relative-error mean.
pub const REL_FLOOR: f64 = 10.0 * f64::EPSILON;

/// SoftMax Monte Carlo draws are grouped into vectors of this length.
pub const SOFTMAX_MC_WIDTH: usize = 8;

/// Samples evaluated per parallel work item.
const CHUNK: usize = 4096;

/// Closed-form value of an element-wise activation.
///
/// SoftMax of a lone element is 1.
pub fn oracle(kind: AfKind, x: f64, cfg: &AfConfig) -> f64 {
    match kind {
        AfKind::Sigmoid => 1.0 / (1.0 + (-x).exp()),
        AfKind::Tanh => x.tanh(),
        AfKind::ReLU => x.max(0.0),
        AfKind::Swish => x / (1.0 + (-x).exp()),
        AfKind::GeLU => 0.5 * x * (1.0 + (cfg.gelu_c0 * (x + cfg.gelu_c1 * x * x * x)).tanh()),
        AfKind::SeLU => {
            if x > 0.0 {
                cfg.selu_lambda * x
            } else {
                cfg.selu_lambda * cfg.selu_alpha * x.exp_m1()
            }
        }
        AfKind::SoftMax => 1.0,
    }
}

/// Reference over a vector: SoftMax as a whole, everything else element-wise.
pub fn oracle_vec(kind: AfKind, xs: &[f64], cfg: &AfConfig) -> Vec<f64> {
    if kind != AfKind::SoftMax {
        return xs.iter().map(|&x| oracle(kind, x, cfg)).collect();
    }
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = xs.iter().map(|&x| (x - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

/// Error statistics between reference (`actual`) and model (`predicted`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metrics {
    pub n: usize,
    /// Mean of `actual - predicted`.
    pub me: f64,
    /// Mean of `|actual - predicted|`.
    pub mae: f64,
    pub max_abs: f64,
    /// Mean of `|actual - predicted| / |actual|`, in percent.
    pub rel_mean: f64,
    /// Points that contributed to `rel_mean`.
    pub rel_count: usize,
}

pub fn error_metrics(actual: &[f64], predicted: &[f64]) -> Result<Metrics> {
    if actual.len() != predicted.len() {
        return Err(Error::LengthMismatch {
            expected: actual.len(),
            found: predicted.len(),
        });
    }
    if actual.is_empty() {
        return Err(Error::Empty);
    }
    let mut sum = 0.0;
    let mut sum_abs = 0.0;
    let mut max_abs: f64 = 0.0;
    let mut sum_rel = 0.0;
    let mut rel_count = 0;
    for (&a, &p) in actual.iter().zip(predicted) {
        let e = a - p;
        sum += e;
        sum_abs += e.abs();
        max_abs = max_abs.max(e.abs());
        if a.abs() >= REL_FLOOR {
            sum_rel += e.abs() / a.abs();
            rel_count += 1;
        }
    }
    let n = actual.len() as f64;
    Ok(Metrics {
        n: actual.len(),
        me: sum / n,
        mae: sum_abs / n,
        max_abs,
        rel_mean: if rel_count > 0 { 100.0 * sum_rel / rel_count as f64 } else { 0.0 },
        rel_count,
    })
}

/// Monte Carlo outcome for one activation/configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub af: AfKind,
    pub format: FxFormat,
    pub n_iters: usize,
    pub n: usize,
    pub seed: u64,
    pub lo: f64,
    pub hi: f64,
    pub me: f64,
    pub mae: f64,
    pub max_abs: f64,
    /// Mean relative error in percent.
    #[serde(rename = "rel_mean_pct")]
    pub rel_mean: f64,
}

impl ErrorReport {
    pub const CSV_HEADER: &'static str = "af,format,n_iters,n,seed,lo,hi,me,mae,max_abs,rel_mean_pct";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.af, self.format, self.n_iters, self.n, self.seed, self.lo, self.hi, self.me, self.mae,
            self.max_abs, self.rel_mean
        )
    }
}

/// Seeded xoshiro256++ (state expanded from the seed with SplitMix64) with a
/// fixed 53-bit mapping to uniform reals, so draws are reproducible across
/// platforms and library versions.
#[derive(Debug, Clone)]
pub struct UniformSource {
    rng: Xoshiro256PlusPlus,
}

impl UniformSource {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (-53f64).exp2()
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }
}

fn validate_domain(cfg: &AfConfig, n: usize, lo: f64, hi: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::Empty);
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidConfig(format!("sample interval [{lo}, {hi}] is empty")));
    }
    if lo < -cfg.max_norm || hi > cfg.max_norm {
        return Err(Error::InvalidConfig(format!(
            "sample interval [{lo}, {hi}] leaves [-{m}, {m}]",
            m = cfg.max_norm
        )));
    }
    Ok(())
}

/// Evaluate `n` uniform draws on `[lo, hi)` through the fixed-point core and
/// the reference. Inputs are quantized to the I/O format first and the
/// reference sees the quantized value. SoftMax consumes the draws in groups
/// of [`SOFTMAX_MC_WIDTH`].
///
/// Evaluation runs in parallel over fixed chunks; results are gathered in
/// sample order, so the report is bit-identical for a given seed regardless
/// of thread count.
pub fn monte_carlo(af: AfKind, cfg: &AfConfig, n: usize, lo: f64, hi: f64, seed: u64) -> Result<ErrorReport> {
    validate_domain(cfg, n, lo, hi)?;
    let core = AfCore::new(&cfg.clone().with_kind(af))?;
    let fmt = cfg.fmt;
    let mut source = UniformSource::new(seed);
    let inputs: Vec<Fx> = (0..n).map(|_| Fx::from_real(source.uniform(lo, hi), fmt)).collect();

    let group = if af == AfKind::SoftMax { SOFTMAX_MC_WIDTH } else { 1 };
    let chunk = CHUNK - CHUNK % group;
    let pairs: Vec<(f64, f64)> = inputs
        .par_chunks(chunk)
        .map(|block| -> Result<Vec<(f64, f64)>> {
            let mut tally = Tally::default();
            let mut out = Vec::with_capacity(block.len());
            for xs in block.chunks(group) {
                let reals: Vec<f64> = xs.iter().map(|x| x.to_real()).collect();
                let truth = oracle_vec(af, &reals, cfg);
                let pred = core.apply_kind(af, xs, &mut tally)?;
                out.extend(truth.into_iter().zip(pred.iter().map(|p| p.to_real())));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let (actual, predicted): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let m = error_metrics(&actual, &predicted)?;
    Ok(ErrorReport {
        af,
        format: fmt,
        n_iters: cfg.n_iters,
        n: m.n,
        seed,
        lo,
        hi,
        me: m.me,
        mae: m.mae,
        max_abs: m.max_abs,
        rel_mean: m.rel_mean,
    })
}

/// One point of an input sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub x: f64,
    pub y_fx: f64,
    pub y_oracle: f64,
    pub abs_err: f64,
    /// `NaN` where the reference is within [`REL_FLOOR`] of zero.
    pub rel_err: f64,
}

impl SweepRow {
    pub const CSV_HEADER: &'static str = "x_real,af,format,y_fx_real,y_oracle,abs_err,rel_err";

    pub fn to_csv(&self, af: AfKind, fmt: FxFormat) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.x, af, fmt, self.y_fx, self.y_oracle, self.abs_err, self.rel_err
        )
    }
}

/// Evaluate `steps` evenly spaced quantized inputs on `[lo, hi]`. SoftMax is
/// swept as the first output of the pair `[x, 0]`.
pub fn sweep(af: AfKind, cfg: &AfConfig, lo: f64, hi: f64, steps: usize) -> Result<Vec<SweepRow>> {
    if steps == 0 {
        return Err(Error::Empty);
    }
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::InvalidConfig(format!("sweep interval [{lo}, {hi}] is empty")));
    }
    let core = AfCore::new(&cfg.clone().with_kind(af))?;
    let mut tally = Tally::default();
    let denom = (steps.max(2) - 1) as f64;
    (0..steps)
        .map(|k| {
            let x = Fx::from_real(lo + (hi - lo) * k as f64 / denom, cfg.fmt);
            let (y_fx, y_oracle) = if af == AfKind::SoftMax {
                let pair = [x, Fx::zero(cfg.fmt)];
                let y = core.softmax(&pair, &mut tally)?[0].to_real();
                (y, oracle_vec(af, &[x.to_real(), 0.0], cfg)[0])
            } else {
                (core.eval(af, x, &mut tally).to_real(), oracle(af, x.to_real(), cfg))
            };
            let abs_err = (y_oracle - y_fx).abs();
            let rel_err = if y_oracle.abs() >= REL_FLOOR {
                abs_err / y_oracle.abs()
            } else {
                f64::NAN
            };
            Ok(SweepRow {
                x: x.to_real(),
                y_fx,
                y_oracle,
                abs_err,
                rel_err,
            })
        })
        .collect()
}
