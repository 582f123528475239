//! Saturating two's-complement Q-format arithmetic.
//!
//! Values carry their format. Every operation saturates to the format range
//! instead of wrapping, and the `*_flagged` variants report whether the clamp
//! engaged. Right shifts round half away from zero; quantization from reals
//! rounds to nearest, ties to even.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Widest word the `i64` raw container supports with headroom for products.
const MAX_WORD_BITS: u32 = 62;

/// Signed fixed-point layout: `word_bits` total, `frac_bits` after the point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct FxFormat {
    word_bits: u32,
    frac_bits: u32,
}

impl FxFormat {
    /// 8-bit I/O default, Q2.5.
    pub const FXP8: FxFormat = FxFormat { word_bits: 8, frac_bits: 5 };
    /// 16-bit I/O default, Q3.12. Holds the full `[-5.5, 5.5]` input domain.
    pub const FXP16: FxFormat = FxFormat { word_bits: 16, frac_bits: 12 };
    /// 32-bit I/O default, Q3.28.
    pub const FXP32: FxFormat = FxFormat { word_bits: 32, frac_bits: 28 };

    /// Integer guard bits added for internal CORDIC state.
    pub const GUARD_INT_BITS: u32 = 2;
    /// Fraction guard bits added for internal CORDIC state.
    pub const GUARD_FRAC_BITS: u32 = 4;

    /// An I/O format. Word length must be 8, 16 or 32.
    pub fn new(word_bits: u32, frac_bits: u32) -> Result<Self, Error> {
        if !matches!(word_bits, 8 | 16 | 32) {
            return Err(Error::InvalidFormat(format!(
                "word length {word_bits} is not one of 8, 16, 32"
            )));
        }
        if frac_bits == 0 || frac_bits >= word_bits {
            return Err(Error::InvalidFormat(format!(
                "fraction bits {frac_bits} must lie in 1..{word_bits}"
            )));
        }
        Ok(Self { word_bits, frac_bits })
    }

    /// A format wider than this one by `int_guard` integer bits and
    /// `frac_guard` fraction bits. Not restricted to the I/O word lengths.
    pub const fn widened(self, int_guard: u32, frac_guard: u32) -> Self {
        let word_bits = self.word_bits + int_guard + frac_guard;
        assert!(word_bits <= MAX_WORD_BITS, "widened format exceeds 62 bits");
        Self {
            word_bits,
            frac_bits: self.frac_bits + frac_guard,
        }
    }

    /// The internal CORDIC state format for this I/O format.
    pub const fn internal(self) -> Self {
        self.widened(Self::GUARD_INT_BITS, Self::GUARD_FRAC_BITS)
    }

    pub fn word_bits(self) -> u32 {
        self.word_bits
    }

    pub fn frac_bits(self) -> u32 {
        self.frac_bits
    }

    /// Integer bits, excluding the sign bit.
    pub fn int_bits(self) -> u32 {
        self.word_bits - 1 - self.frac_bits
    }

    pub fn max_raw(self) -> i64 {
        (1i64 << (self.word_bits - 1)) - 1
    }

    pub fn min_raw(self) -> i64 {
        -(1i64 << (self.word_bits - 1))
    }

    /// Weight of one LSB, `2^-frac_bits`.
    pub fn lsb(self) -> f64 {
        (-(self.frac_bits as f64)).exp2()
    }

    pub fn max_real(self) -> f64 {
        self.max_raw() as f64 * self.lsb()
    }

    pub fn min_real(self) -> f64 {
        self.min_raw() as f64 * self.lsb()
    }

    /// Clamp a wide raw value into range, reporting whether it was clamped.
    pub fn saturate(self, raw: i128) -> (i64, bool) {
        if raw > self.max_raw() as i128 {
            (self.max_raw(), true)
        } else if raw < self.min_raw() as i128 {
            (self.min_raw(), true)
        } else {
            (raw as i64, false)
        }
    }

    /// Clamp a real value into the representable interval.
    pub fn clamp_real(self, x: f64) -> f64 {
        x.clamp(self.min_real(), self.max_real())
    }
}

impl fmt::Display for FxFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q{}.{}", self.int_bits(), self.frac_bits)
    }
}

impl FromStr for FxFormat {
    type Err = Error;

    /// Accepts `fxp8`, `fxp16`, `fxp32` or an explicit `Qm.n`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "fxp8" => return Ok(Self::FXP8),
            "fxp16" => return Ok(Self::FXP16),
            "fxp32" => return Ok(Self::FXP32),
            _ => {}
        }
        let bad = || Error::InvalidFormat(format!("cannot parse format {s:?}"));
        let body = lower.strip_prefix('q').ok_or_else(bad)?;
        let (int, frac) = body.split_once('.').ok_or_else(bad)?;
        let int: u32 = int.parse().map_err(|_| bad())?;
        let frac: u32 = frac.parse().map_err(|_| bad())?;
        let word = 1 + int + frac;
        if matches!(word, 8 | 16 | 32) {
            Self::new(word, frac)
        } else if word <= MAX_WORD_BITS && frac > 0 {
            // Widened internal formats round-trip through their names too.
            Ok(Self { word_bits: word, frac_bits: frac })
        } else {
            Err(bad())
        }
    }
}

impl TryFrom<String> for FxFormat {
    type Error = Error;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<FxFormat> for String {
    fn from(value: FxFormat) -> Self {
        value.to_string()
    }
}

/// Arithmetic right shift of a wide value by `shift` bits, rounding half away
/// from zero.
pub(crate) fn shift_right_round(value: i128, shift: u32) -> i128 {
    if shift == 0 {
        return value;
    }
    let half = 1i128 << (shift - 1);
    if value >= 0 {
        (value + half) >> shift
    } else {
        -((-value + half) >> shift)
    }
}

/// A fixed-point value. The raw integer always fits its format's word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fx {
    raw: i64,
    fmt: FxFormat,
}

impl Fx {
    pub fn zero(fmt: FxFormat) -> Self {
        Self { raw: 0, fmt }
    }

    /// `1.0`, saturated if the format has no integer bits.
    pub fn one(fmt: FxFormat) -> Self {
        Self::from_raw_sat(1i64 << fmt.frac_bits, fmt)
    }

    pub fn max_value(fmt: FxFormat) -> Self {
        Self { raw: fmt.max_raw(), fmt }
    }

    pub fn min_value(fmt: FxFormat) -> Self {
        Self { raw: fmt.min_raw(), fmt }
    }

    /// Wrap a raw integer, or fail if it does not fit the word.
    pub fn from_raw(raw: i64, fmt: FxFormat) -> Result<Self, Error> {
        match fmt.saturate(raw as i128) {
            (r, false) => Ok(Self { raw: r, fmt }),
            (_, true) => Err(Error::RawOutOfRange { raw, format: fmt }),
        }
    }

    /// Wrap a raw integer, saturating if it does not fit.
    pub fn from_raw_sat(raw: i64, fmt: FxFormat) -> Self {
        Self::from_raw_flagged(raw as i128, fmt).0
    }

    pub(crate) fn from_raw_flagged(raw: i128, fmt: FxFormat) -> (Self, bool) {
        let (raw, sat) = fmt.saturate(raw);
        (Self { raw, fmt }, sat)
    }

    /// Quantize a real, round to nearest even, saturating.
    pub fn from_real(x: f64, fmt: FxFormat) -> Self {
        Self::from_real_flagged(x, fmt).0
    }

    /// Quantize a real and report whether it saturated.
    ///
    /// Panics on NaN or infinite input.
    pub fn from_real_flagged(x: f64, fmt: FxFormat) -> (Self, bool) {
        assert!(x.is_finite(), "cannot quantize non-finite value {x}");
        let scaled = (x * (fmt.frac_bits as f64).exp2()).round_ties_even();
        if scaled > fmt.max_raw() as f64 {
            (Self::max_value(fmt), true)
        } else if scaled < fmt.min_raw() as f64 {
            (Self::min_value(fmt), true)
        } else {
            (Self { raw: scaled as i64, fmt }, false)
        }
    }

    pub fn raw(self) -> i64 {
        self.raw
    }

    pub fn format(self) -> FxFormat {
        self.fmt
    }

    /// Exact real value, `raw * 2^-frac_bits`.
    pub fn to_real(self) -> f64 {
        self.raw as f64 * self.fmt.lsb()
    }

    pub fn is_negative(self) -> bool {
        self.raw < 0
    }

    pub fn is_zero(self) -> bool {
        self.raw == 0
    }

    /// `+1` for non-negative values, `-1` otherwise (zero counts as positive).
    pub fn sign(self) -> i32 {
        if self.raw < 0 {
            -1
        } else {
            1
        }
    }

    fn check_same(self, other: Fx) {
        assert_eq!(
            self.fmt, other.fmt,
            "fixed-point operands have mismatched formats"
        );
    }

    pub fn add_flagged(self, rhs: Fx) -> (Fx, bool) {
        self.check_same(rhs);
        Self::from_raw_flagged(self.raw as i128 + rhs.raw as i128, self.fmt)
    }

    pub fn add_sat(self, rhs: Fx) -> Fx {
        self.add_flagged(rhs).0
    }

    pub fn sub_flagged(self, rhs: Fx) -> (Fx, bool) {
        self.check_same(rhs);
        Self::from_raw_flagged(self.raw as i128 - rhs.raw as i128, self.fmt)
    }

    pub fn sub_sat(self, rhs: Fx) -> Fx {
        self.sub_flagged(rhs).0
    }

    pub fn neg_flagged(self) -> (Fx, bool) {
        Self::from_raw_flagged(-(self.raw as i128), self.fmt)
    }

    pub fn neg_sat(self) -> Fx {
        self.neg_flagged().0
    }

    pub fn abs_sat(self) -> Fx {
        if self.raw < 0 {
            self.neg_sat()
        } else {
            self
        }
    }

    /// Arithmetic right shift with round-half-away-from-zero. Never saturates.
    pub fn shr_round(self, shift: u32) -> Fx {
        assert!(
            shift < self.fmt.word_bits,
            "shift {shift} exceeds word length {}",
            self.fmt.word_bits
        );
        Self {
            raw: shift_right_round(self.raw as i128, shift) as i64,
            fmt: self.fmt,
        }
    }

    /// Left shift, saturating.
    pub fn shl_flagged(self, shift: u32) -> (Fx, bool) {
        assert!(shift < self.fmt.word_bits);
        Self::from_raw_flagged((self.raw as i128) << shift, self.fmt)
    }

    pub fn shl_sat(self, shift: u32) -> Fx {
        self.shl_flagged(shift).0
    }

    /// Full-width product rescaled to the shared format, rounded half away
    /// from zero and saturated.
    pub fn mul_flagged(self, rhs: Fx) -> (Fx, bool) {
        self.check_same(rhs);
        let product = self.raw as i128 * rhs.raw as i128;
        Self::from_raw_flagged(shift_right_round(product, self.fmt.frac_bits), self.fmt)
    }

    pub fn mul(self, rhs: Fx) -> Fx {
        self.mul_flagged(rhs).0
    }

    /// Re-express in another format: exact when widening, rounded half away
    /// from zero when dropping fraction bits, saturated either way.
    pub fn convert_flagged(self, fmt: FxFormat) -> (Fx, bool) {
        let raw = self.raw as i128;
        let raw = match fmt.frac_bits.cmp(&self.fmt.frac_bits) {
            Ordering::Equal => raw,
            Ordering::Greater => raw << (fmt.frac_bits - self.fmt.frac_bits),
            Ordering::Less => shift_right_round(raw, self.fmt.frac_bits - fmt.frac_bits),
        };
        Self::from_raw_flagged(raw, fmt)
    }

    pub fn convert(self, fmt: FxFormat) -> Fx {
        self.convert_flagged(fmt).0
    }

    /// Larger of two same-format values.
    pub fn max(self, rhs: Fx) -> Fx {
        self.check_same(rhs);
        if rhs.raw > self.raw {
            rhs
        } else {
            self
        }
    }

    pub fn min(self, rhs: Fx) -> Fx {
        self.check_same(rhs);
        if rhs.raw < self.raw {
            rhs
        } else {
            self
        }
    }

    /// Clamp into `[-bound, bound]`, with `bound` a non-negative value of the
    /// same format.
    pub fn clamp_sym(self, bound: Fx) -> Fx {
        self.check_same(bound);
        Self {
            raw: self.raw.clamp(-bound.raw, bound.raw),
            fmt: self.fmt,
        }
    }
}

impl PartialOrd for Fx {
    /// Orders by exact real value, across formats.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let shift_a = other.fmt.frac_bits.saturating_sub(self.fmt.frac_bits);
        let shift_b = self.fmt.frac_bits.saturating_sub(other.fmt.frac_bits);
        let a = (self.raw as i128) << shift_a;
        let b = (other.raw as i128) << shift_b;
        Some(a.cmp(&b))
    }
}

impl fmt::Display for Fx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_real())
    }
}

/// Sticky saturation flag threaded through a datapath.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Sticky {
    events: u64,
}

impl Sticky {
    pub fn new() -> Self {
        Self::default()
    }

    /// Unwrap a flagged result, recording a saturation event if it clamped.
    pub fn take(&mut self, (value, saturated): (Fx, bool)) -> Fx {
        if saturated {
            self.events += 1;
        }
        value
    }

    pub fn saturated(&self) -> bool {
        self.events > 0
    }

    pub fn events(&self) -> u64 {
        self.events
    }

    pub fn merge(&mut self, other: Sticky) {
        self.events += other.events;
    }
}

/// Primitive operations covered by golden vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GoldenOp {
    Add,
    Sub,
    Mul,
    /// `b` is the shift amount.
    Shr,
}

impl GoldenOp {
    pub const ALL: [GoldenOp; 4] = [GoldenOp::Add, GoldenOp::Sub, GoldenOp::Mul, GoldenOp::Shr];

    pub fn name(self) -> &'static str {
        match self {
            GoldenOp::Add => "add",
            GoldenOp::Sub => "sub",
            GoldenOp::Mul => "mul",
            GoldenOp::Shr => "shr",
        }
    }

    /// Evaluate on raw operands, returning `(raw_out, saturated)`.
    pub fn eval(self, fmt: FxFormat, a: i64, b: i64) -> Result<(i64, bool), Error> {
        let x = Fx::from_raw(a, fmt)?;
        let (out, sat) = match self {
            GoldenOp::Add => x.add_flagged(Fx::from_raw(b, fmt)?),
            GoldenOp::Sub => x.sub_flagged(Fx::from_raw(b, fmt)?),
            GoldenOp::Mul => x.mul_flagged(Fx::from_raw(b, fmt)?),
            GoldenOp::Shr => {
                if b < 0 || b >= fmt.word_bits() as i64 {
                    return Err(Error::Golden(format!("shift amount {b} out of range")));
                }
                (x.shr_round(b as u32), false)
            }
        };
        Ok((out.raw(), sat))
    }
}

impl FromStr for GoldenOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GoldenOp::ALL
            .into_iter()
            .find(|op| op.name() == s)
            .ok_or_else(|| Error::Golden(format!("unknown op {s:?}")))
    }
}

/// One golden-vector record: `op,format,raw_in_a,raw_in_b,raw_out,sat_flag`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GoldenRow {
    pub op: GoldenOp,
    pub format: FxFormat,
    pub a: i64,
    pub b: i64,
    pub out: i64,
    pub saturated: bool,
}

impl GoldenRow {
    pub const HEADER: &'static str = "op,format,raw_in_a,raw_in_b,raw_out,sat_flag";

    /// Compute the expected output for the given inputs.
    pub fn compute(op: GoldenOp, format: FxFormat, a: i64, b: i64) -> Result<Self, Error> {
        let (out, saturated) = op.eval(format, a, b)?;
        Ok(Self { op, format, a, b, out, saturated })
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.op.name(),
            self.format,
            self.a,
            self.b,
            self.out,
            u8::from(self.saturated)
        )
    }

    pub fn parse_csv(line: &str) -> Result<Self, Error> {
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != 6 {
            return Err(Error::Golden(format!("expected 6 fields in {line:?}")));
        }
        let int = |s: &str| {
            s.parse::<i64>()
                .map_err(|_| Error::Golden(format!("bad integer {s:?}")))
        };
        let saturated = match fields[5] {
            "0" => false,
            "1" => true,
            other => return Err(Error::Golden(format!("bad sat_flag {other:?}"))),
        };
        Ok(Self {
            op: fields[0].parse()?,
            format: fields[1].parse()?,
            a: int(fields[2])?,
            b: int(fields[3])?,
            out: int(fields[4])?,
            saturated,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q1_14: FxFormat = FxFormat { word_bits: 16, frac_bits: 14 };
    const Q2_13: FxFormat = FxFormat { word_bits: 16, frac_bits: 13 };

    fn fx(x: f64, fmt: FxFormat) -> Fx {
        Fx::from_real(x, fmt)
    }

    #[test]
    fn format_validation() {
        assert!(FxFormat::new(16, 12).is_ok());
        assert!(FxFormat::new(12, 4).is_err());
        assert!(FxFormat::new(16, 0).is_err());
        assert!(FxFormat::new(16, 16).is_err());
        assert_eq!(FxFormat::FXP16.to_string(), "Q3.12");
        assert_eq!(FxFormat::FXP8.to_string(), "Q2.5");
        assert_eq!("q3.12".parse::<FxFormat>().unwrap(), FxFormat::FXP16);
        assert_eq!("fxp8".parse::<FxFormat>().unwrap(), FxFormat::FXP8);
        assert_eq!(FxFormat::FXP16.internal().to_string(), "Q5.16");
        assert!("q3".parse::<FxFormat>().is_err());
    }

    #[test]
    fn range_and_resolution() {
        let f = FxFormat::FXP16;
        assert_eq!(f.min_real(), -8.0);
        assert_eq!(f.max_real(), 32767.0 / 4096.0);
        assert_eq!(f.lsb(), 1.0 / 4096.0);
        assert!(f.max_real() > 5.5);
    }

    #[test]
    fn quantization_examples() {
        assert_eq!(fx(0.5, Q1_14).raw(), 8192);
        assert_eq!(fx(0.0, Q1_14).raw(), 0);
        assert_eq!(fx(0.0, FxFormat::FXP8).raw(), 0);
        let (v, sat) = Fx::from_real_flagged(100.0, Q1_14);
        assert_eq!(v.raw(), 32767);
        assert!(sat);
        let (v, sat) = Fx::from_real_flagged(-100.0, Q1_14);
        assert_eq!(v.raw(), -32768);
        assert!(sat);
        // ties go to even
        assert_eq!(fx(2.5 / 16384.0, Q1_14).raw(), 2);
        assert_eq!(fx(3.5 / 16384.0, Q1_14).raw(), 4);
        assert_eq!(fx(-2.5 / 16384.0, Q1_14).raw(), -2);
    }

    #[test]
    fn to_real_examples() {
        assert_eq!(Fx::from_raw(8192, Q1_14).unwrap().to_real(), 0.5);
        assert_eq!(Fx::from_raw(-16384, Q1_14).unwrap().to_real(), -1.0);
        assert_eq!(Fx::from_raw(1, Q1_14).unwrap().to_real(), (-14f64).exp2());
        assert!(Fx::from_raw(40000, Q1_14).is_err());
    }

    #[test]
    fn add_sub_examples() {
        assert_eq!(fx(0.25, Q1_14).add_sat(fx(0.25, Q1_14)).to_real(), 0.5);
        assert_eq!(fx(1.5, Q2_13).add_sat(fx(1.5, Q2_13)).to_real(), 3.0);
        let (s, sat) = fx(2.5, Q2_13).add_flagged(fx(2.5, Q2_13));
        assert!(sat);
        assert_eq!(s.raw(), 32767);
        assert!((s.to_real() - 3.99988).abs() < 1e-5);
        let (d, sat) = fx(-3.0, Q2_13).sub_flagged(fx(2.0, Q2_13));
        assert!(sat);
        assert_eq!(d.raw(), -32768);
    }

    #[test]
    #[should_panic(expected = "mismatched formats")]
    fn mismatched_formats_rejected() {
        let _ = fx(0.5, Q1_14).add_sat(fx(0.5, Q2_13));
    }

    #[test]
    fn shift_examples() {
        let f = Q1_14;
        assert_eq!(Fx::from_raw(8192, f).unwrap().shr_round(1).raw(), 4096);
        assert_eq!(Fx::from_raw(3, f).unwrap().shr_round(1).raw(), 2);
        assert_eq!(Fx::from_raw(-3, f).unwrap().shr_round(1).raw(), -2);
        assert_eq!(Fx::from_raw(-5, f).unwrap().shr_round(2).raw(), -1);
        assert_eq!(Fx::from_raw(-6, f).unwrap().shr_round(2).raw(), -2);
        assert_eq!(Fx::from_raw(1, f).unwrap().shr_round(1).raw(), 1);
        assert_eq!(Fx::from_raw(-1, f).unwrap().shr_round(1).raw(), -1);
        assert_eq!(Fx::from_raw(1, f).unwrap().shr_round(2).raw(), 0);
    }

    #[test]
    fn mul_examples() {
        assert_eq!(fx(0.5, Q1_14).mul(fx(0.5, Q1_14)).to_real(), 0.25);
        let one = Fx::one(Q2_13);
        for raw in [-32768, -12345, -1, 0, 1, 777, 32767] {
            let x = Fx::from_raw(raw, Q2_13).unwrap();
            assert_eq!(x.mul(one), x);
        }
        // rational oracle on raw integers: a*b / 2^14, nearest
        let a = fx(0.3, Q1_14);
        let b = fx(0.7, Q1_14);
        let exact = (a.raw() as f64 * b.raw() as f64) / 16384.0;
        assert!((a.mul(b).raw() as f64 - exact).abs() <= 0.5);
        assert!((a.mul(b).to_real() - 0.21).abs() <= Q1_14.lsb());
    }

    #[test]
    fn convert_rounds_and_saturates() {
        let wide = FxFormat::FXP16.internal();
        let v = Fx::from_raw(24, wide).unwrap(); // 1.5 LSB of Q3.12
        assert_eq!(v.convert(FxFormat::FXP16).raw(), 2);
        let big = Fx::from_real(20.0, wide);
        let (n, sat) = big.convert_flagged(FxFormat::FXP16);
        assert!(sat);
        assert_eq!(n, Fx::max_value(FxFormat::FXP16));
        let back = fx(1.25, FxFormat::FXP16).convert(wide);
        assert_eq!(back.to_real(), 1.25);
    }

    #[test]
    fn ordering_across_formats() {
        let a = fx(0.5, FxFormat::FXP16);
        let b = fx(0.5, FxFormat::FXP16.internal());
        assert_eq!(a.partial_cmp(&b), Some(Ordering::Equal));
        assert!(fx(0.25, FxFormat::FXP8) < a);
    }

    #[test]
    fn sticky_counts_events() {
        let mut sticky = Sticky::new();
        let m = Fx::max_value(FxFormat::FXP8);
        let _ = sticky.take(m.add_flagged(m));
        let _ = sticky.take(m.sub_flagged(m));
        assert!(sticky.saturated());
        assert_eq!(sticky.events(), 1);
    }

    #[test]
    fn golden_row_roundtrip() {
        let row = GoldenRow::compute(GoldenOp::Mul, FxFormat::FXP16, 4096, -8192).unwrap();
        assert_eq!(row.out, -8192);
        let line = row.to_csv();
        assert_eq!(line, "mul,Q3.12,4096,-8192,-8192,0");
        assert_eq!(GoldenRow::parse_csv(&line).unwrap(), row);
        assert!(GoldenRow::parse_csv("mul,Q3.12,1,2,3").is_err());
        assert!(GoldenOp::Shr.eval(FxFormat::FXP8, 1, 9).is_err());
    }
}
