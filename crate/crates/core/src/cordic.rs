//! Unified CORDIC: the shift-and-add pseudo-rotation
//!
//! ```text
//! x' = x - m * d * (y >> i)
//! y' = y + d * (x >> i)
//! z' = z - d * e_i
//! ```
//!
//! in linear (m = 0), circular (m = 1) and hyperbolic (m = -1) coordinates,
//! driven either by the residual angle (rotation) or by the `y` lane
//! (vectoring). Outputs are not gain compensated; callers pre-scale `x0`
//! with [`Cordic::inv_gain`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixedpoint::{Fx, FxFormat, Sticky};

/// Hyperbolic-rotation convergence limit on the input angle.
pub const HR_RANGE: f64 = 1.1182;
/// Linear-vectoring convergence limit on `y0 / x0`.
pub const LV_RANGE: f64 = 1.0;
/// Linear-rotation convergence limit on the multiplier operand `z0`.
pub const LR_RANGE: f64 = 7.968;
/// Circular-rotation limit: the sum of `atan(2^-i)` over `i >= 0`.
pub const CR_RANGE: f64 = 1.743_286_620_472_34;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CordicMode {
    Linear,
    Circular,
    Hyperbolic,
}

impl CordicMode {
    pub const ALL: [CordicMode; 3] = [CordicMode::Linear, CordicMode::Circular, CordicMode::Hyperbolic];

    /// The coordinate selector `m` of the recurrence.
    pub fn m(self) -> i32 {
        match self {
            CordicMode::Linear => 0,
            CordicMode::Circular => 1,
            CordicMode::Hyperbolic => -1,
        }
    }

    pub fn from_m(m: i32) -> Option<Self> {
        match m {
            0 => Some(CordicMode::Linear),
            1 => Some(CordicMode::Circular),
            -1 => Some(CordicMode::Hyperbolic),
            _ => None,
        }
    }

    /// Exact micro-rotation angle `E_i` for shift index `i`.
    pub fn elementary_angle(self, i: u32) -> f64 {
        let t = (-(i as f64)).exp2();
        match self {
            CordicMode::Linear => t,
            CordicMode::Circular => t.atan(),
            CordicMode::Hyperbolic => t.atanh(),
        }
    }

    /// Lane updates per iteration. The linear `x` lane never changes.
    pub fn lanes(self) -> u64 {
        match self {
            CordicMode::Linear => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for CordicMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CordicMode::Linear => "linear",
            CordicMode::Circular => "circular",
            CordicMode::Hyperbolic => "hyperbolic",
        })
    }
}

impl FromStr for CordicMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linear" | "0" => Ok(CordicMode::Linear),
            "circular" | "1" => Ok(CordicMode::Circular),
            "hyperbolic" | "-1" => Ok(CordicMode::Hyperbolic),
            _ => Err(Error::InvalidConfig(format!("unknown CORDIC mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Drive {
    /// `d = sign(z)`, steering `z` to zero.
    Rotation,
    /// `d = -sign(y)`, steering `y` to zero.
    Vectoring,
}

impl Drive {
    /// Direction for the next micro-rotation. `sign(0)` is `+1`.
    pub fn direction(self, state: &CordicState) -> i32 {
        match self {
            Drive::Rotation => state.z.sign(),
            Drive::Vectoring => -state.y.sign(),
        }
    }
}

impl fmt::Display for Drive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Drive::Rotation => "rotation",
            Drive::Vectoring => "vectoring",
        })
    }
}

impl FromStr for Drive {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rotation" => Ok(Drive::Rotation),
            "vectoring" => Ok(Drive::Vectoring),
            _ => Err(Error::InvalidConfig(format!("unknown CORDIC drive {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CordicState {
    pub x: Fx,
    pub y: Fx,
    pub z: Fx,
}

impl CordicState {
    pub fn new(x: Fx, y: Fx, z: Fx) -> Self {
        assert!(
            x.format() == y.format() && y.format() == z.format(),
            "CORDIC lanes must share one format"
        );
        Self { x, y, z }
    }

    pub fn format(&self) -> FxFormat {
        self.x.format()
    }
}

/// Ordered shift indices, one per iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationSchedule {
    indices: Vec<u32>,
}

impl IterationSchedule {
    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Largest shift in the schedule.
    pub fn last_index(&self) -> u32 {
        self.indices.last().copied().unwrap_or(0)
    }
}

/// Build the index sequence for `n_iters` iterations.
///
/// Linear and circular run `0, 1, .., n-1`. Hyperbolic starts at 1 and runs
/// indices 4, 13, 40, .. (`k -> 3k + 1`) twice; every entry counts toward
/// `n_iters`.
pub fn make_schedule(mode: CordicMode, n_iters: usize) -> IterationSchedule {
    assert!(n_iters >= 1, "a CORDIC schedule needs at least one iteration");
    let indices = match mode {
        CordicMode::Linear | CordicMode::Circular => (0..n_iters as u32).collect(),
        CordicMode::Hyperbolic => {
            let mut indices = Vec::with_capacity(n_iters);
            let mut repeat = 4;
            let mut i = 1;
            while indices.len() < n_iters {
                indices.push(i);
                if i == repeat && indices.len() < n_iters {
                    indices.push(i);
                    repeat = 3 * repeat + 1;
                }
                i += 1;
            }
            indices
        }
    };
    IterationSchedule { indices }
}

/// Quantized `E_i` per schedule entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AngleTable {
    e: Vec<Fx>,
}

impl AngleTable {
    pub fn entries(&self) -> &[Fx] {
        &self.e
    }

    pub fn len(&self) -> usize {
        self.e.len()
    }

    pub fn is_empty(&self) -> bool {
        self.e.is_empty()
    }
}

pub fn angle_table(mode: CordicMode, schedule: &IterationSchedule, fmt: FxFormat) -> AngleTable {
    AngleTable {
        e: schedule
            .indices
            .iter()
            .map(|&i| Fx::from_real(mode.elementary_angle(i), fmt))
            .collect(),
    }
}

/// One pseudo-rotation. Returns the new state and whether any lane saturated.
pub fn step(s: CordicState, mode: CordicMode, d: i32, i: u32, e_i: Fx) -> (CordicState, bool) {
    assert!(d == 1 || d == -1, "direction must be +1 or -1, got {d}");
    let mut sticky = Sticky::new();
    let y_shift = s.y.shr_round(i);
    let x_shift = s.x.shr_round(i);
    // m * d folded into the add/sub choice
    let x = match mode.m() * d {
        0 => s.x,
        1 => sticky.take(s.x.sub_flagged(y_shift)),
        _ => sticky.take(s.x.add_flagged(y_shift)),
    };
    let y = if d > 0 {
        sticky.take(s.y.add_flagged(x_shift))
    } else {
        sticky.take(s.y.sub_flagged(x_shift))
    };
    let z = if d > 0 {
        sticky.take(s.z.sub_flagged(e_i))
    } else {
        sticky.take(s.z.add_flagged(e_i))
    };
    (CordicState { x, y, z }, sticky.saturated())
}

/// Product of the per-iteration stretch `sqrt(1 + m 2^-2i)`; exactly 1 for
/// linear mode.
pub fn gain(mode: CordicMode, schedule: &IterationSchedule) -> f64 {
    let m = mode.m() as f64;
    if m == 0.0 {
        return 1.0;
    }
    schedule
        .indices
        .iter()
        .map(|&i| (1.0 + m * (-2.0 * i as f64).exp2()).sqrt())
        .product()
}

/// Sum of the elementary angles a schedule can absorb.
pub fn coverage(mode: CordicMode, schedule: &IterationSchedule) -> f64 {
    schedule.indices.iter().map(|&i| mode.elementary_angle(i)).sum()
}

/// Published convergence limit on the driving quantity: `z` for rotation,
/// `y / x` for vectoring.
pub fn published_limit(mode: CordicMode, drive: Drive) -> f64 {
    match (mode, drive) {
        (CordicMode::Hyperbolic, Drive::Rotation) => HR_RANGE,
        (CordicMode::Hyperbolic, Drive::Vectoring) => HR_RANGE.tanh(),
        (CordicMode::Linear, Drive::Rotation) => LR_RANGE,
        (CordicMode::Linear, Drive::Vectoring) => LV_RANGE,
        (CordicMode::Circular, Drive::Rotation) => CR_RANGE,
        (CordicMode::Circular, Drive::Vectoring) => f64::INFINITY,
    }
}

/// True iff the driving quantity lies inside the published convergence range.
pub fn check_range(z_or_ratio: f64, mode: CordicMode, drive: Drive) -> bool {
    z_or_ratio.is_finite() && z_or_ratio.abs() <= published_limit(mode, drive)
}

/// Result of a full CORDIC pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CordicRun {
    pub state: CordicState,
    /// Lane updates that saturated.
    pub sat_events: u64,
    /// Micro-rotations executed, one cycle each.
    pub cycles: u64,
    /// Shift-and-add/sub lane updates executed.
    pub shift_add_ops: u64,
}

/// One row of a per-iteration trace, the state after the iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceRow {
    pub iter: usize,
    pub d: i32,
    pub x_raw: i64,
    pub y_raw: i64,
    pub z_raw: i64,
}

impl TraceRow {
    pub const HEADER: &'static str = "iter,d,x_raw,y_raw,z_raw";

    pub fn to_csv(&self) -> String {
        format!("{},{},{},{},{}", self.iter, self.d, self.x_raw, self.y_raw, self.z_raw)
    }
}

/// A configured engine: schedule, angle table and inverse gain for one
/// mode/drive/format. Immutable and shareable.
#[derive(Debug, Clone)]
pub struct Cordic {
    mode: CordicMode,
    drive: Drive,
    fmt: FxFormat,
    schedule: IterationSchedule,
    table: AngleTable,
    inv_gain: Fx,
    limit: f64,
}

impl Cordic {
    pub fn new(mode: CordicMode, drive: Drive, n_iters: usize, fmt: FxFormat) -> Self {
        let schedule = make_schedule(mode, n_iters);
        let table = angle_table(mode, &schedule, fmt);
        let inv_gain = Fx::from_real(1.0 / gain(mode, &schedule), fmt);
        // The last micro-rotation leaves at most one more E_i of slack.
        let last = mode.elementary_angle(schedule.last_index());
        let reach = coverage(mode, &schedule) + last;
        let limit = match (mode, drive) {
            (_, Drive::Rotation) | (CordicMode::Linear, Drive::Vectoring) => reach,
            (CordicMode::Hyperbolic, Drive::Vectoring) => reach.min(20.0).tanh(),
            (CordicMode::Circular, Drive::Vectoring) => f64::INFINITY,
        };
        let limit = limit.min(published_limit(mode, drive));
        Self { mode, drive, fmt, schedule, table, inv_gain, limit }
    }

    pub fn mode(&self) -> CordicMode {
        self.mode
    }

    pub fn drive(&self) -> Drive {
        self.drive
    }

    pub fn format(&self) -> FxFormat {
        self.fmt
    }

    pub fn schedule(&self) -> &IterationSchedule {
        &self.schedule
    }

    pub fn table(&self) -> &AngleTable {
        &self.table
    }

    pub fn iterations(&self) -> usize {
        self.schedule.len()
    }

    /// `1 / K` quantized to the engine format, for pre-scaling `x0`.
    pub fn inv_gain(&self) -> Fx {
        self.inv_gain
    }

    /// Effective limit on the driving quantity: the published range, further
    /// capped by what this schedule can actually absorb.
    pub fn limit(&self) -> f64 {
        self.limit
    }

    /// Shift-add lane updates in one full pass.
    pub fn ops_per_pass(&self) -> u64 {
        self.mode.lanes() * self.schedule.len() as u64
    }

    fn validate(&self, x0: Fx, y0: Fx, z0: Fx) -> Result<()> {
        for v in [x0, y0, z0] {
            if v.format() != self.fmt {
                return Err(Error::InvalidConfig(format!(
                    "CORDIC input format {} differs from engine format {}",
                    v.format(),
                    self.fmt
                )));
            }
        }
        match self.drive {
            Drive::Rotation => {
                let z = z0.to_real();
                if z.abs() > self.limit {
                    return Err(Error::Range {
                        what: "z0",
                        value: z,
                        region: region_name(self.mode, self.drive),
                        limit: self.limit,
                    });
                }
            }
            Drive::Vectoring => {
                if x0.raw() <= 0 {
                    return Err(Error::Range {
                        what: "x0 (vectoring requires x0 > 0)",
                        value: x0.to_real(),
                        region: region_name(self.mode, self.drive),
                        limit: self.limit,
                    });
                }
                let ratio = y0.to_real() / x0.to_real();
                if ratio.abs() > self.limit {
                    return Err(Error::Range {
                        what: "y0/x0",
                        value: ratio,
                        region: region_name(self.mode, self.drive),
                        limit: self.limit,
                    });
                }
            }
        }
        Ok(())
    }

    /// Run the full schedule after checking the convergence range.
    pub fn run(&self, x0: Fx, y0: Fx, z0: Fx) -> Result<CordicRun> {
        self.validate(x0, y0, z0)?;
        Ok(self.run_unchecked(x0, y0, z0))
    }

    /// Run the full schedule without a range check. Out-of-range inputs
    /// simply fail to converge.
    pub fn run_unchecked(&self, x0: Fx, y0: Fx, z0: Fx) -> CordicRun {
        self.iterate(CordicState::new(x0, y0, z0), |_| {})
    }

    /// Run and record the state after every iteration.
    pub fn run_traced(&self, x0: Fx, y0: Fx, z0: Fx) -> Result<(CordicRun, Vec<TraceRow>)> {
        self.validate(x0, y0, z0)?;
        let mut rows = Vec::with_capacity(self.schedule.len());
        let run = self.iterate(CordicState::new(x0, y0, z0), |row| rows.push(row));
        Ok((run, rows))
    }

    fn iterate(&self, mut state: CordicState, mut on_step: impl FnMut(TraceRow)) -> CordicRun {
        let mut sat_events = 0;
        let mut executed = 0;
        for (k, (&i, &e)) in self.schedule.indices.iter().zip(&self.table.e).enumerate() {
            let d = self.drive.direction(&state);
            let (next, sat) = step(state, self.mode, d, i, e);
            sat_events += u64::from(sat);
            executed += 1;
            state = next;
            on_step(TraceRow {
                iter: k,
                d,
                x_raw: state.x.raw(),
                y_raw: state.y.raw(),
                z_raw: state.z.raw(),
            });
        }
        CordicRun {
            state,
            sat_events,
            cycles: executed,
            shift_add_ops: executed * self.mode.lanes(),
        }
    }
}

fn region_name(mode: CordicMode, drive: Drive) -> &'static str {
    match (mode, drive) {
        (CordicMode::Linear, Drive::Rotation) => "LR",
        (CordicMode::Linear, Drive::Vectoring) => "LV",
        (CordicMode::Circular, Drive::Rotation) => "CR",
        (CordicMode::Circular, Drive::Vectoring) => "CV",
        (CordicMode::Hyperbolic, Drive::Rotation) => "HR",
        (CordicMode::Hyperbolic, Drive::Vectoring) => "HV",
    }
}

/// Default iteration count for an I/O format: two beyond its fraction bits.
pub fn default_iterations(io: FxFormat) -> usize {
    io.frac_bits() as usize + 2
}

/// Convenience wrapper: build an engine in the inputs' format and run it.
pub fn run(x0: Fx, y0: Fx, z0: Fx, mode: CordicMode, drive: Drive, n_iters: usize) -> Result<CordicRun> {
    Cordic::new(mode, drive, n_iters, x0.format()).run(x0, y0, z0)
}

/// The same recurrence in IEEE double arithmetic with exact angles.
///
/// Used as the reference when separating algorithmic error from fixed-point
/// rounding.
pub fn float_replica(
    (x0, y0, z0): (f64, f64, f64),
    mode: CordicMode,
    drive: Drive,
    schedule: &IterationSchedule,
) -> (f64, f64, f64) {
    let m = mode.m() as f64;
    let (mut x, mut y, mut z) = (x0, y0, z0);
    for &i in schedule.indices() {
        let d = match drive {
            Drive::Rotation => {
                if z >= 0.0 {
                    1.0
                } else {
                    -1.0
                }
            }
            Drive::Vectoring => {
                if y >= 0.0 {
                    -1.0
                } else {
                    1.0
                }
            }
        };
        let t = (-(i as f64)).exp2();
        let (nx, ny) = (x - m * d * y * t, y + d * x * t);
        z -= d * mode.elementary_angle(i);
        x = nx;
        y = ny;
    }
    (x, y, z)
}
