//! The NEURIC processing element: a linear-rotation CORDIC MAC feeding the
//! activation core, with a cycle model for iterative and pipelined
//! execution.
//!
//! Dot products accumulate in a wide format with 6 extra integer bits and a
//! fraction as wide as an exact product of two I/O words (Q9.24 for FXP16).
//! The accumulator saturates into the I/O format once, just before the
//! activation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::activation::{cost, AfConfig, AfCore, AfKind, Tally};
use crate::cordic::{default_iterations, Cordic, CordicMode, Drive};
use crate::error::{Error, Result};
use crate::fixedpoint::{Fx, FxFormat};

/// Extra integer bits of the dot-product accumulator.
pub const ACC_INT_GUARD: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    #[default]
    Iterative,
    Pipelined,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Iterative => "iterative",
            Strategy::Pipelined => "pipelined",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "iterative" => Ok(Strategy::Iterative),
            "pipelined" => Ok(Strategy::Pipelined),
            _ => Err(Error::InvalidConfig(format!("unknown strategy {s:?}"))),
        }
    }
}

/// PE configuration. `n_iters` is the MAC pass length; the activation keeps
/// its own in `af`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NeuricConfigWire")]
pub struct NeuricConfig {
    #[serde(rename = "format")]
    pub fmt: FxFormat,
    pub af: AfConfig,
    pub strategy: Strategy,
    pub n_iters: usize,
}

/// `af` may be just a selector name, inheriting the PE format.
#[derive(Deserialize)]
#[serde(untagged)]
enum AfWire {
    Kind(AfKind),
    Full(AfConfig),
}

#[derive(Deserialize)]
struct NeuricConfigWire {
    format: FxFormat,
    af: AfWire,
    #[serde(default)]
    strategy: Strategy,
    n_iters: Option<usize>,
}

impl TryFrom<NeuricConfigWire> for NeuricConfig {
    type Error = Error;

    fn try_from(s: NeuricConfigWire) -> Result<Self> {
        let af = match s.af {
            AfWire::Kind(kind) => AfConfig::new(kind, s.format),
            AfWire::Full(cfg) => cfg,
        };
        let cfg = NeuricConfig {
            fmt: s.format,
            af,
            strategy: s.strategy,
            n_iters: s.n_iters.unwrap_or_else(|| default_iterations(s.format)),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl NeuricConfig {
    /// Iterative PE with default iteration counts.
    pub fn new(kind: AfKind, fmt: FxFormat) -> Self {
        Self {
            fmt,
            af: AfConfig::new(kind, fmt),
            strategy: Strategy::Iterative,
            n_iters: default_iterations(fmt),
        }
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    /// Sets the iteration count of both the MAC and the activation.
    pub fn with_iters(mut self, n_iters: usize) -> Self {
        self.n_iters = n_iters;
        self.af.n_iters = n_iters;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !matches!(self.fmt.word_bits(), 8 | 16) {
            return Err(Error::InvalidFormat(format!("NEURIC supports 8 or 16-bit words, got {}", self.fmt)));
        }
        if self.af.fmt != self.fmt {
            return Err(Error::InvalidConfig(format!(
                "activation format {} differs from PE format {}",
                self.af.fmt, self.fmt
            )));
        }
        if self.n_iters == 0 || self.n_iters as u32 >= self.accumulator_format().word_bits() {
            return Err(Error::InvalidConfig(format!("MAC n_iters {} out of range", self.n_iters)));
        }
        self.af.validate()
    }

    /// Format of the dot-product accumulator.
    pub fn accumulator_format(&self) -> FxFormat {
        self.fmt.widened(ACC_INT_GUARD, self.fmt.frac_bits())
    }
}

/// Modeled cost of one neuron (or one layer of `width` neurons).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CycleReport {
    pub strategy: Strategy,
    pub mac_cycles: u64,
    pub af_cycles: u64,
    /// Iterative: `mac + af`. Pipelined: cycles per result once the MAC and
    /// AF stages overlap across results, `max(mac, af)`.
    pub total: u64,
    pub shift_add_ops: u64,
    /// Cycles from first operand to result.
    pub latency: u64,
}

/// Cycle model for one neuron over `vector_len` products.
pub fn cycles(cfg: &NeuricConfig, vector_len: usize) -> CycleReport {
    layer_cycles(cfg, vector_len, 1)
}

/// Cycle model for `width` neurons sharing one PE, each over `vector_len`
/// products, followed by the activation (SoftMax across the layer).
///
/// Iterative: every MAC pass takes `n` cycles. Pipelined: an `n`-stage MAC
/// accepts one product per cycle after it fills.
pub fn layer_cycles(cfg: &NeuricConfig, vector_len: usize, width: usize) -> CycleReport {
    let n = cfg.n_iters as u64;
    let products = (vector_len * width) as u64;
    let af = cost(&cfg.af, cfg.af.kind, width);
    let shift_add_ops = products * 2 * n + af.shift_add_ops;
    match cfg.strategy {
        Strategy::Iterative => {
            let mac = products * n;
            CycleReport {
                strategy: cfg.strategy,
                mac_cycles: mac,
                af_cycles: af.cycles,
                total: mac + af.cycles,
                shift_add_ops,
                latency: mac + af.cycles,
            }
        }
        Strategy::Pipelined => {
            let mac = n + products.saturating_sub(1);
            CycleReport {
                strategy: cfg.strategy,
                mac_cycles: mac,
                af_cycles: af.cycles,
                total: mac.max(af.cycles),
                shift_add_ops,
                latency: mac + af.cycles,
            }
        }
    }
}

/// One processing element.
#[derive(Debug, Clone)]
pub struct Neuric {
    cfg: NeuricConfig,
    acc: FxFormat,
    lr: Cordic,
    af: AfCore,
}

impl Neuric {
    pub fn new(cfg: &NeuricConfig) -> Result<Self> {
        cfg.validate()?;
        let acc = cfg.accumulator_format();
        Ok(Self {
            cfg: cfg.clone(),
            acc,
            lr: Cordic::new(CordicMode::Linear, Drive::Rotation, cfg.n_iters, acc),
            af: AfCore::new(&cfg.af)?,
        })
    }

    pub fn config(&self) -> &NeuricConfig {
        &self.cfg
    }

    pub fn accumulator_format(&self) -> FxFormat {
        self.acc
    }

    pub fn af_core(&self) -> &AfCore {
        &self.af
    }

    /// `acc + w * x` on one LR pass. `x` and `w` use the I/O format; `acc`
    /// may use the I/O or the accumulator format and the result keeps it.
    ///
    /// The LR pass only absorbs `|z| <= 2`, so a larger angle operand is
    /// scaled down by `2^k` and the other operand up by the same factor (a
    /// barrel shift, no cycles). The leftover angle error is multiplied by
    /// `x0`, so a comparator routes whichever operand gives the smaller `x0`
    /// to the X lane. This also makes the MAC exactly commutative.
    pub fn mac(&self, acc: Fx, x: Fx, w: Fx, t: &mut Tally) -> Fx {
        let io = self.cfg.fmt;
        assert_eq!(x.format(), io, "MAC operand must use the PE format");
        assert_eq!(w.format(), io, "MAC weight must use the PE format");
        let (a, b) = (x.convert(self.acc), w.convert(self.acc));
        let (z, (x0, sat)) = self.route(a, b).min_by_key(|(_, (x0, _))| x0.abs_sat().raw()).expect("two routes");
        t.sat_events += u64::from(sat);
        let run = self.lr.run_unchecked(x0, acc.convert(self.acc), z);
        t.pass(&self.lr, &run);
        let (out, sat) = run.state.y.convert_flagged(acc.format());
        t.sat_events += u64::from(sat);
        out
    }

    /// Both operand assignments as `(z0, x0)` after prescaling.
    fn route(&self, a: Fx, b: Fx) -> impl Iterator<Item = (Fx, (Fx, bool))> + '_ {
        let limit = Fx::from_real(self.lr.limit(), self.acc);
        let (lo, hi) = if a.abs_sat() <= b.abs_sat() { (a, b) } else { (b, a) };
        [(hi, lo), (lo, hi)].into_iter().map(move |(z, other)| {
            let mut k = 0;
            while z.shr_round(k).abs_sat() > limit {
                k += 1;
            }
            (z.shr_round(k), other.shl_flagged(k))
        })
    }

    /// Dot product from `bias`, saturated into the I/O format.
    pub fn dot(&self, inputs: &[Fx], weights: &[Fx], bias: Fx, t: &mut Tally) -> Result<Fx> {
        if inputs.len() != weights.len() {
            return Err(Error::LengthMismatch {
                expected: inputs.len(),
                found: weights.len(),
            });
        }
        if inputs.is_empty() {
            return Err(Error::Empty);
        }
        let acc = inputs
            .iter()
            .zip(weights)
            .fold(bias.convert(self.acc), |acc, (&x, &w)| self.mac(acc, x, w, t));
        let (pre, sat) = acc.convert_flagged(self.cfg.fmt);
        t.sat_events += u64::from(sat);
        Ok(pre)
    }

    /// `af(bias + sum w_i x_i)`. SoftMax of a lone neuron is `1`.
    pub fn neuron(&self, inputs: &[Fx], weights: &[Fx], bias: Fx, t: &mut Tally) -> Result<Fx> {
        let pre = self.dot(inputs, weights, bias, t)?;
        Ok(self.af.apply(&[pre], t)?[0])
    }

    /// One output per row of `weights`; SoftMax normalizes across the layer.
    pub fn layer(&self, inputs: &[Fx], weights: &[Vec<Fx>], bias: &[Fx], t: &mut Tally) -> Result<Vec<Fx>> {
        if weights.len() != bias.len() {
            return Err(Error::LengthMismatch {
                expected: weights.len(),
                found: bias.len(),
            });
        }
        let pre = weights
            .iter()
            .zip(bias)
            .map(|(row, &b)| self.dot(inputs, row, b, t))
            .collect::<Result<Vec<_>>>()?;
        self.af.apply(&pre, t)
    }
}

/// Batch file: a layer applied to each input vector. Reals are quantized
/// into the PE format on entry.
#[derive(Debug, Clone, Deserialize)]
pub struct BatchRequest {
    pub config: NeuricConfig,
    pub inputs: Vec<Vec<f64>>,
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BatchResponse {
    pub outputs: Vec<Vec<f64>>,
    /// Model cost of one input vector through the layer.
    pub cycles: CycleReport,
    pub sat_events: u64,
}

pub fn run_batch(req: &BatchRequest) -> Result<BatchResponse> {
    let pe = Neuric::new(&req.config)?;
    let fmt = req.config.fmt;
    let q = |v: &[f64]| -> Result<Vec<Fx>> {
        v.iter()
            .map(|&x| {
                if x.is_finite() {
                    Ok(Fx::from_real(x, fmt))
                } else {
                    Err(Error::InvalidConfig(format!("non-finite value {x} in batch")))
                }
            })
            .collect()
    };
    let weights = req.weights.iter().map(|r| q(r)).collect::<Result<Vec<_>>>()?;
    let bias = q(&req.bias)?;
    let mut t = Tally::default();
    let mut outputs = Vec::with_capacity(req.inputs.len());
    for row in &req.inputs {
        let ys = pe.layer(&q(row)?, &weights, &bias, &mut t)?;
        outputs.push(ys.iter().map(|y| y.to_real()).collect());
    }
    let len = req.weights.first().map_or(0, Vec::len);
    Ok(BatchResponse {
        outputs,
        cycles: layer_cycles(&req.config, len.max(1), req.weights.len().max(1)),
        sat_events: t.sat_events,
    })
}
