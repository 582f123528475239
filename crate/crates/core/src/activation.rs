//! Runtime-selectable activation functions on the shared CORDIC datapath.
//!
//! Every function other than ReLU is a fixed sequence of hyperbolic-rotation
//! (HR) passes for sinh/cosh, linear-vectoring (LV) passes for division,
//! dedicated-multiplier slots and glue adders. [`AfCore`] holds the engines
//! and constant tables for one [`AfConfig`] and records what it executes in a
//! [`Tally`], so the cycle model can be checked against real execution.
//!
//! Datapath per function (`n` iterations per CORDIC pass):
//!
//! | function | HR | LV | multiplier slots | glue adds | overhead cycles |
//! |----------|----|----|------------------|-----------|-----------------|
//! | Tanh     | 1  | 1  | 0                | 2         | 0               |
//! | Sigmoid  | 1  | 1  | 0                | 3         | 0               |
//! | ReLU     | 0  | 0  | 0                | 0         | 1               |
//! | Swish    | 1  | 1  | 1                | 3         | 0               |
//! | GELU     | 1  | 1  | 4                | 4         | 0               |
//! | SELU     | 1  | 0  | K + 1            | 2         | 0               |
//! | SoftMax  | L  | L  | K' L             | 4 L       | 2 L + 1         |
//!
//! A pass or multiplier slot takes `n` cycles; glue adders take none. An HR
//! pass executes `3n` shift-add operations, an LV pass `2n`, a glue adder one.
//!
//! `K` is the number of squaring slots of the exponential unit,
//! `ceil(log2(max_norm))`, and `K'` the same for SoftMax's doubled argument
//! span.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cordic::{default_iterations, Cordic, CordicMode, CordicRun, Drive};
use crate::error::{Error, Result};
use crate::fixedpoint::{Fx, FxFormat, Sticky};

/// Default SoftMax FIFO depth.
pub const DEFAULT_FIFO_CAPACITY: usize = 64;
/// Default input normalization bound.
pub const DEFAULT_MAX_NORM: f64 = 5.5;
pub const SELU_LAMBDA: f64 = 1.050_700_987_355_480_5;
pub const SELU_ALPHA: f64 = 1.673_263_242_354_377_2;
/// `sqrt(2 / pi)`.
pub const GELU_C0: f64 = 0.797_884_560_802_865_4;
pub const GELU_C1: f64 = 0.044_715;

/// Largest angle handed to an HR pass after range reduction.
const HR_WORKING_RANGE: f64 = 1.0;

/// The `sel_af` selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AfKind {
    Sigmoid,
    Tanh,
    #[serde(rename = "relu")]
    ReLU,
    Swish,
    #[serde(rename = "gelu")]
    GeLU,
    #[serde(rename = "selu")]
    SeLU,
    #[serde(rename = "softmax")]
    SoftMax,
}

impl AfKind {
    pub const ALL: [AfKind; 7] = [
        AfKind::Sigmoid,
        AfKind::Tanh,
        AfKind::ReLU,
        AfKind::Swish,
        AfKind::GeLU,
        AfKind::SeLU,
        AfKind::SoftMax,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AfKind::Sigmoid => "sigmoid",
            AfKind::Tanh => "tanh",
            AfKind::ReLU => "relu",
            AfKind::Swish => "swish",
            AfKind::GeLU => "gelu",
            AfKind::SeLU => "selu",
            AfKind::SoftMax => "softmax",
        }
    }

    /// Encoded select value.
    pub fn sel_af(self) -> u8 {
        self as u8
    }

    pub fn from_sel_af(code: u8) -> Option<Self> {
        Self::ALL.get(code as usize).copied()
    }

    /// False only for SoftMax, which consumes a whole vector.
    pub fn is_elementwise(self) -> bool {
        self != AfKind::SoftMax
    }
}

impl fmt::Display for AfKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AfKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        AfKind::ALL
            .into_iter()
            .find(|k| k.name() == lower)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown activation function {s:?}")))
    }
}

/// Configuration of the activation core.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "AfConfigWire")]
pub struct AfConfig {
    pub kind: AfKind,
    #[serde(rename = "format")]
    pub fmt: FxFormat,
    pub n_iters: usize,
    pub max_norm: f64,
    pub selu_lambda: f64,
    pub selu_alpha: f64,
    pub gelu_c0: f64,
    pub gelu_c1: f64,
    pub fifo_capacity: usize,
}

/// Wire form of [`AfConfig`] where everything but kind and format may be
/// omitted.
#[derive(Deserialize)]
struct AfConfigWire {
    #[serde(alias = "af")]
    kind: AfKind,
    format: FxFormat,
    n_iters: Option<usize>,
    max_norm: Option<f64>,
    selu_lambda: Option<f64>,
    selu_alpha: Option<f64>,
    gelu_c0: Option<f64>,
    gelu_c1: Option<f64>,
    fifo_capacity: Option<usize>,
}

impl From<AfConfigWire> for AfConfig {
    fn from(s: AfConfigWire) -> Self {
        let base = AfConfig::new(s.kind, s.format);
        AfConfig {
            n_iters: s.n_iters.unwrap_or(base.n_iters),
            max_norm: s.max_norm.unwrap_or(base.max_norm),
            selu_lambda: s.selu_lambda.unwrap_or(base.selu_lambda),
            selu_alpha: s.selu_alpha.unwrap_or(base.selu_alpha),
            gelu_c0: s.gelu_c0.unwrap_or(base.gelu_c0),
            gelu_c1: s.gelu_c1.unwrap_or(base.gelu_c1),
            fifo_capacity: s.fifo_capacity.unwrap_or(base.fifo_capacity),
            ..base
        }
    }
}

impl AfConfig {
    /// Defaults: `n_iters = frac_bits + 2`, MaxNorm 5.5, standard SELU and
    /// GELU constants, 64-entry FIFO.
    pub fn new(kind: AfKind, fmt: FxFormat) -> Self {
        Self {
            kind,
            fmt,
            n_iters: default_iterations(fmt),
            max_norm: DEFAULT_MAX_NORM,
            selu_lambda: SELU_LAMBDA,
            selu_alpha: SELU_ALPHA,
            gelu_c0: GELU_C0,
            gelu_c1: GELU_C1,
            fifo_capacity: DEFAULT_FIFO_CAPACITY,
        }
    }

    pub fn with_iters(mut self, n_iters: usize) -> Self {
        self.n_iters = n_iters;
        self
    }

    pub fn with_kind(mut self, kind: AfKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.max_norm.is_finite() && self.max_norm > 0.0) {
            return Err(Error::InvalidConfig(format!("max_norm {} must be positive", self.max_norm)));
        }
        if self.n_iters == 0 {
            return Err(Error::InvalidConfig("n_iters must be at least 1".into()));
        }
        if self.n_iters as u32 >= self.fmt.internal().word_bits() {
            return Err(Error::InvalidConfig(format!(
                "n_iters {} exceeds the shifter width of {}",
                self.n_iters,
                self.fmt.internal()
            )));
        }
        if self.fifo_capacity == 0 || self.fifo_capacity > 1 << 16 {
            return Err(Error::InvalidConfig(format!(
                "fifo_capacity {} must lie in 1..=65536",
                self.fifo_capacity
            )));
        }
        let consts = [self.selu_lambda, self.selu_alpha, self.gelu_c0, self.gelu_c1];
        if consts.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidConfig("activation constants must be finite".into()));
        }
        Ok(())
    }

    /// Squaring slots of the exponential unit for arguments up to `span`.
    pub fn squaring_slots(&self, span: f64) -> u32 {
        (span / HR_WORKING_RANGE).log2().ceil().max(0.0) as u32
    }

    /// Squaring slots for `exp_fx`, SELU and friends: arguments in
    /// `[-max_norm, max_norm]`.
    pub fn exp_slots(&self) -> u32 {
        self.squaring_slots(self.max_norm)
    }

    /// Squaring slots for SoftMax, whose shifted arguments span
    /// `[-2 max_norm, 0]`.
    pub fn softmax_exp_slots(&self) -> u32 {
        self.squaring_slots(2.0 * self.max_norm)
    }
}

/// Instrumentation counters filled in while the datapath executes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub cycles: u64,
    pub shift_add_ops: u64,
    pub hr_passes: u64,
    pub lv_passes: u64,
    pub lr_passes: u64,
    pub mul_slots: u64,
    pub sat_events: u64,
}

impl Tally {
    pub fn merge(&mut self, other: &Tally) {
        self.cycles += other.cycles;
        self.shift_add_ops += other.shift_add_ops;
        self.hr_passes += other.hr_passes;
        self.lv_passes += other.lv_passes;
        self.lr_passes += other.lr_passes;
        self.mul_slots += other.mul_slots;
        self.sat_events += other.sat_events;
    }

    pub(crate) fn pass(&mut self, engine: &Cordic, run: &CordicRun) {
        self.cycles += run.cycles;
        self.shift_add_ops += run.shift_add_ops;
        self.sat_events += run.sat_events;
        match (engine.mode(), engine.drive()) {
            (CordicMode::Hyperbolic, _) => self.hr_passes += 1,
            (CordicMode::Linear, Drive::Vectoring) => self.lv_passes += 1,
            (CordicMode::Linear, Drive::Rotation) => self.lr_passes += 1,
            (CordicMode::Circular, _) => {}
        }
    }

    /// A multiplier slot occupies the datapath for one pass length.
    fn mul_slot(&mut self, n_iters: usize) {
        self.mul_slots += 1;
        self.cycles += n_iters as u64;
    }

    /// A combinational adder between passes: counted, no cycle.
    fn glue(&mut self) {
        self.shift_add_ops += 1;
    }

    fn overhead(&mut self, cycles: u64) {
        self.cycles += cycles;
    }

    fn sticky(&mut self, sticky: Sticky) {
        self.sat_events += sticky.events();
    }
}

/// Closed-form cost of one activation, from the datapath table.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Cost {
    pub cycles: u64,
    pub shift_add_ops: u64,
}

/// Cost of applying `kind` to `width` inputs (the SoftMax vector length, or
/// that many independent element-wise evaluations).
pub fn cost(cfg: &AfConfig, kind: AfKind, width: usize) -> Cost {
    let n = cfg.n_iters as u64;
    let w = width as u64;
    let (hr, lv, mul, glue, overhead) = match kind {
        AfKind::Tanh => (1, 1, 0, 2, 0),
        AfKind::Sigmoid => (1, 1, 0, 3, 0),
        AfKind::ReLU => (0, 0, 0, 0, 1),
        AfKind::Swish => (1, 1, 1, 3, 0),
        AfKind::GeLU => (1, 1, 4, 4, 0),
        AfKind::SeLU => (1, 0, u64::from(cfg.exp_slots()) + 1, 2, 0),
        AfKind::SoftMax => {
            let k = u64::from(cfg.softmax_exp_slots());
            return Cost {
                cycles: w * (2 + k) * n + 2 * w + 1,
                shift_add_ops: w * (5 * n + 4),
            };
        }
    };
    Cost {
        cycles: w * ((hr + lv + mul) * n + overhead),
        shift_add_ops: w * (3 * n * hr + 2 * n * lv + glue),
    }
}

/// Anchor for tanh range extension: rotating the vector `(1, tanh a) / K`
/// by `x - a` yields a vector whose `y / x` ratio is `tanh x`.
#[derive(Debug, Clone, Copy)]
struct Anchor {
    at: Fx,
    x0: Fx,
    y0: Fx,
}

/// The programmable activation core for one configuration.
#[derive(Debug, Clone)]
pub struct AfCore {
    cfg: AfConfig,
    io: FxFormat,
    work: FxFormat,
    acc: FxFormat,
    hr: Cordic,
    lv: Cordic,
    one: Fx,
    max_norm: Fx,
    anchor_step: f64,
    anchors: Vec<Anchor>,
    lv_half_step: f64,
    exp_slots: u32,
    softmax_slots: u32,
    selu_lambda: Fx,
    selu_lambda_alpha: Fx,
    gelu_c0: Fx,
    gelu_c2: Fx,
}

impl AfCore {
    pub fn new(cfg: &AfConfig) -> Result<Self> {
        cfg.validate()?;
        let io = cfg.fmt;
        let work = io.internal();
        let acc_int = (cfg.fifo_capacity as f64).log2().ceil() as u32 + 2;
        let acc = work.widened(acc_int.saturating_sub(work.int_bits()), 0);
        let hr = Cordic::new(CordicMode::Hyperbolic, Drive::Rotation, cfg.n_iters, work);
        let lv = Cordic::new(CordicMode::Linear, Drive::Vectoring, cfg.n_iters, work);
        let q = |v: f64| Fx::from_real(v, work);

        let max_norm = q(cfg.max_norm.min(work.max_real()));
        // Anchors j * step, |j| <= half, spaced so every |x| <= max_norm lies
        // within step / 2 <= HR_WORKING_RANGE of one.
        let half = ((cfg.max_norm / HR_WORKING_RANGE - 1.0) / 2.0).ceil().max(0.0) as i32;
        let anchor_step = 2.0 * cfg.max_norm / (2 * half + 1) as f64;
        let anchors = (-half..=half)
            .map(|j| {
                let at = q(j as f64 * anchor_step);
                let inv_gain = hr.inv_gain().to_real();
                Anchor {
                    at,
                    x0: hr.inv_gain(),
                    y0: q(inv_gain * at.to_real().tanh()),
                }
            })
            .collect();

        Ok(Self {
            cfg: cfg.clone(),
            io,
            work,
            acc,
            one: Fx::one(work),
            max_norm,
            anchor_step,
            anchors,
            lv_half_step: 0.5 * CordicMode::Linear.elementary_angle(lv.schedule().last_index()),
            exp_slots: cfg.exp_slots(),
            softmax_slots: cfg.softmax_exp_slots(),
            selu_lambda: q(cfg.selu_lambda),
            selu_lambda_alpha: q(cfg.selu_lambda * cfg.selu_alpha),
            gelu_c0: q(cfg.gelu_c0),
            gelu_c2: q(cfg.gelu_c0 * cfg.gelu_c1),
            hr,
            lv,
        })
    }

    pub fn config(&self) -> &AfConfig {
        &self.cfg
    }

    /// Format of the CORDIC lanes.
    pub fn working_format(&self) -> FxFormat {
        self.work
    }

    pub fn exp_slots(&self) -> u32 {
        self.exp_slots
    }

    pub fn softmax_exp_slots(&self) -> u32 {
        self.softmax_slots
    }

    fn widen(&self, x: Fx) -> Fx {
        assert_eq!(x.format(), self.io, "activation input must use the configured I/O format");
        x.convert(self.work)
    }

    fn clamp(&self, x: Fx) -> Fx {
        x.clamp_sym(self.max_norm)
    }

    fn narrow(&self, v: Fx, t: &mut Tally) -> Fx {
        let (out, sat) = v.convert_flagged(self.io);
        t.sat_events += u64::from(sat);
        out
    }

    fn mul(&self, a: Fx, b: Fx, t: &mut Tally) -> Fx {
        t.mul_slot(self.cfg.n_iters);
        let (v, sat) = a.mul_flagged(b);
        t.sat_events += u64::from(sat);
        v
    }

    fn add(&self, a: Fx, b: Fx, t: &mut Tally) -> Fx {
        t.glue();
        let (v, sat) = a.add_flagged(b);
        t.sat_events += u64::from(sat);
        v
    }

    fn sub(&self, a: Fx, b: Fx, t: &mut Tally) -> Fx {
        t.glue();
        let (v, sat) = a.sub_flagged(b);
        t.sat_events += u64::from(sat);
        v
    }

    /// `e^x` on the working format for `|x| <= 2^slots`: halve the argument
    /// into the HR range, take `cosh r + sinh r`, then square back up. All
    /// `slots` squaring stages occupy their slot; the ones not needed for
    /// this argument are bypassed.
    fn exp_work(&self, x: Fx, slots: u32, t: &mut Tally) -> Fx {
        let limit = Fx::from_real(HR_WORKING_RANGE, self.work);
        let mut k = 0;
        while k < slots && x.abs_sat() > limit.shl_sat(k) {
            k += 1;
        }
        let r = x.shr_round(k);
        let run = self.hr.run_unchecked(self.hr.inv_gain(), Fx::zero(self.work), r);
        t.pass(&self.hr, &run);
        let mut e = self.add(run.state.x, run.state.y, t);
        for stage in 0..slots {
            t.mul_slot(self.cfg.n_iters);
            if stage < k {
                let (sq, sat) = e.mul_flagged(e);
                t.sat_events += u64::from(sat);
                e = sq;
            }
        }
        e
    }

    /// `tanh x` on the working format for `|x| <= max_norm`.
    fn tanh_work(&self, x: Fx, t: &mut Tally) -> Fx {
        let j = (x.to_real() / self.anchor_step).round() as i64;
        let idx = (j + (self.anchors.len() / 2) as i64).clamp(0, self.anchors.len() as i64 - 1);
        let anchor = self.anchors[idx as usize];
        let z = self.sub(x, anchor.at, t);
        let hr = self.hr.run_unchecked(anchor.x0, anchor.y0, z);
        t.pass(&self.hr, &hr);
        self.divide(hr.state.x, hr.state.y, t)
    }

    /// `y / x` on the LV unit. Every LV quotient is an odd multiple of the
    /// last step `E`, which would put it on a rounding tie of the I/O grid;
    /// the remainder sign moves it by `E / 2` toward the true quotient.
    fn divide(&self, x: Fx, y: Fx, t: &mut Tally) -> Fx {
        let run = self.lv.run_unchecked(x, y, Fx::zero(self.work));
        t.pass(&self.lv, &run);
        let half = Fx::from_real(self.lv_half_step, self.work);
        if run.state.y.raw() >= 0 {
            self.add(run.state.z, half, t)
        } else {
            self.sub(run.state.z, half, t)
        }
    }

    fn sigmoid_work(&self, x: Fx, t: &mut Tally) -> Fx {
        let th = self.tanh_work(x.shr_round(1), t);
        self.add(self.one, th, t).shr_round(1)
    }

    /// `e^x`; fails beyond `±max_norm`.
    pub fn exp(&self, x: Fx, t: &mut Tally) -> Result<Fx> {
        if x.to_real().abs() > self.cfg.max_norm {
            return Err(Error::Range {
                what: "exp argument",
                value: x.to_real(),
                region: "MaxNorm",
                limit: self.cfg.max_norm,
            });
        }
        let e = self.exp_work(self.widen(x), self.exp_slots, t);
        Ok(self.narrow(e, t))
    }

    pub fn tanh(&self, x: Fx, t: &mut Tally) -> Fx {
        let v = self.tanh_work(self.clamp(self.widen(x)), t);
        self.narrow(v, t)
    }

    /// `(1 + tanh(x / 2)) / 2`.
    pub fn sigmoid(&self, x: Fx, t: &mut Tally) -> Fx {
        let v = self.sigmoid_work(self.clamp(self.widen(x)), t);
        self.narrow(v, t)
    }

    pub fn relu(&self, x: Fx, t: &mut Tally) -> Fx {
        t.overhead(1);
        relu(x)
    }

    /// `x * sigmoid(x)` with the product on the dedicated multiplier.
    pub fn swish(&self, x: Fx, t: &mut Tally) -> Fx {
        let xw = self.clamp(self.widen(x));
        let s = self.sigmoid_work(xw, t);
        let v = self.mul(xw, s, t);
        self.narrow(v, t)
    }

    /// `0.5 x (1 + tanh(c0 (x + c1 x^3)))`, inner polynomial in Horner form
    /// `x (c0 + c0 c1 x^2)`.
    pub fn gelu(&self, x: Fx, t: &mut Tally) -> Fx {
        let xw = self.clamp(self.widen(x));
        let sq = self.mul(xw, xw, t);
        let cubic = self.mul(self.gelu_c2, sq, t);
        let poly = self.add(self.gelu_c0, cubic, t);
        let u = self.clamp(self.mul(xw, poly, t));
        let th = self.tanh_work(u, t);
        let gate = self.add(self.one, th, t);
        let v = self.mul(xw, gate, t).shr_round(1);
        self.narrow(v, t)
    }

    /// `lambda x` for `x >= 0`, `lambda alpha (e^x - 1)` otherwise (the arms
    /// agree at zero). Both arms are evaluated; a mux feeds one to the shared
    /// multiplier.
    pub fn selu(&self, x: Fx, t: &mut Tally) -> Fx {
        let xw = self.clamp(self.widen(x));
        let neg = xw.min(Fx::zero(self.work));
        let e = self.exp_work(neg, self.exp_slots, t);
        let em1 = self.sub(e, self.one, t);
        let (coef, operand) = if xw.raw() >= 0 {
            (self.selu_lambda, xw)
        } else {
            (self.selu_lambda_alpha, em1)
        };
        let v = self.mul(coef, operand, t);
        self.narrow(v, t)
    }

    /// Two-pass SoftMax through the FIFO: find the maximum, stream
    /// `e^(x_i - max)` into the FIFO while accumulating the sum, then drain
    /// the FIFO dividing each entry by the sum on the LV unit.
    pub fn softmax(&self, xs: &[Fx], t: &mut Tally) -> Result<Vec<Fx>> {
        if xs.is_empty() {
            return Err(Error::Empty);
        }
        if xs.len() > self.cfg.fifo_capacity {
            return Err(Error::Capacity {
                len: xs.len(),
                capacity: self.cfg.fifo_capacity,
            });
        }
        let vals: Vec<Fx> = xs.iter().map(|&x| self.clamp(self.widen(x))).collect();
        // max scan: one comparator cycle per element
        t.overhead(vals.len() as u64);
        let max = vals.iter().copied().reduce(Fx::max).expect("non-empty");

        let mut fifo = std::collections::VecDeque::with_capacity(vals.len());
        let mut sum = Fx::zero(self.acc);
        let mut sticky = Sticky::new();
        for &v in &vals {
            let d = self.sub(v, max, t);
            let e = self.exp_work(d, self.softmax_slots, t);
            fifo.push_back(e);
            t.glue();
            sum = sticky.take(sum.add_flagged(e.convert(self.acc)));
        }
        t.sticky(sticky);

        // leading-one detect: bring the sum into [1, 2) for the divider
        t.overhead(1);
        let two = Fx::from_real(2.0, self.acc);
        let mut shift = 0;
        while sum.shr_round(shift) >= two {
            shift += 1;
        }
        let divisor = sum.shr_round(shift).convert(self.work);

        let mut out = Vec::with_capacity(vals.len());
        while let Some(e) = fifo.pop_front() {
            // FIFO read
            t.overhead(1);
            let q = self.divide(divisor, e.shr_round(shift), t);
            out.push(self.narrow(q, t));
        }
        Ok(out)
    }

    /// Dispatch on `cfg.kind`: element-wise, or whole-vector for SoftMax.
    pub fn apply(&self, xs: &[Fx], t: &mut Tally) -> Result<Vec<Fx>> {
        self.apply_kind(self.cfg.kind, xs, t)
    }

    /// Dispatch on an explicit selector, reusing this core's tables.
    pub fn apply_kind(&self, kind: AfKind, xs: &[Fx], t: &mut Tally) -> Result<Vec<Fx>> {
        if kind == AfKind::SoftMax {
            return self.softmax(xs, t);
        }
        Ok(xs.iter().map(|&x| self.eval(kind, x, t)).collect())
    }

    /// One element-wise evaluation. SoftMax of a single element is `1`.
    pub fn eval(&self, kind: AfKind, x: Fx, t: &mut Tally) -> Fx {
        match kind {
            AfKind::Sigmoid => self.sigmoid(x, t),
            AfKind::Tanh => self.tanh(x, t),
            AfKind::ReLU => self.relu(x, t),
            AfKind::Swish => self.swish(x, t),
            AfKind::GeLU => self.gelu(x, t),
            AfKind::SeLU => self.selu(x, t),
            AfKind::SoftMax => self.softmax(&[x], t).expect("single element fits the FIFO")[0],
        }
    }
}

fn core_for(cfg: &AfConfig) -> AfCore {
    AfCore::new(cfg).expect("invalid activation configuration")
}

/// `e^x` for `|x| <= max_norm`.
pub fn exp_fx(x: Fx, cfg: &AfConfig) -> Result<Fx> {
    AfCore::new(cfg)?.exp(x, &mut Tally::default())
}

pub fn sigmoid(x: Fx, cfg: &AfConfig) -> Fx {
    core_for(cfg).sigmoid(x, &mut Tally::default())
}

pub fn tanh_af(x: Fx, cfg: &AfConfig) -> Fx {
    core_for(cfg).tanh(x, &mut Tally::default())
}

/// `max(x, 0)`, bit-exact in any format.
pub fn relu(x: Fx) -> Fx {
    x.max(Fx::zero(x.format()))
}

pub fn swish(x: Fx, cfg: &AfConfig) -> Fx {
    core_for(cfg).swish(x, &mut Tally::default())
}

pub fn gelu(x: Fx, cfg: &AfConfig) -> Fx {
    core_for(cfg).gelu(x, &mut Tally::default())
}

pub fn selu(x: Fx, cfg: &AfConfig) -> Fx {
    core_for(cfg).selu(x, &mut Tally::default())
}

pub fn softmax(xs: &[Fx], cfg: &AfConfig) -> Result<Vec<Fx>> {
    AfCore::new(cfg)?.softmax(xs, &mut Tally::default())
}

pub fn apply(cfg: &AfConfig, xs: &[Fx]) -> Result<Vec<Fx>> {
    AfCore::new(cfg)?.apply(xs, &mut Tally::default())
}
