//! Clock, prescaler and CTC timer arithmetic for the ATmega644p, plus a
//! payload-size → time/cycle predictor calibrated from on-device measurements.
//!
//! The compare value for a CTC interrupt is `OCR = ticks - 1`, where
//! `ticks = interval / (prescaler / f_clk)`: the counter starts at 0 and the
//! interrupt fires on the tick where TCNT equals OCR. The longhand form
//! `OCR0A = 0xFF - (0xFF - (P/Tp) + 1)` reduces to the same `P/Tp - 1` when
//! `P` is read as the target interval.
//!
//! The built-in calibration rows have a cycle column equal to the time column
//! times 20 (the clock in MHz). That only holds if "cycles" are kilocycles or
//! the time column is in microseconds, so [`UnitInterpretation`] lets callers
//! choose: `AsPrinted` returns the time column verbatim as milliseconds,
//! `Physical` reads it as microseconds.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_FREQUENCY_HZ: u64 = 20_000_000;
pub const ALLOWED_PRESCALERS: [u32; 4] = [8, 64, 256, 1024];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McuClockConfig {
    frequency_hz: u64,
    prescaler: u32,
}

impl Default for McuClockConfig {
    fn default() -> Self {
        Self {
            frequency_hz: DEFAULT_FREQUENCY_HZ,
            prescaler: 8,
        }
    }
}

impl McuClockConfig {
    pub fn new(frequency_hz: u64, prescaler: u32) -> Result<Self> {
        if frequency_hz == 0 {
            return Err(Error::ClockConfig("frequency must be positive".into()));
        }
        if !ALLOWED_PRESCALERS.contains(&prescaler) {
            return Err(Error::ClockConfig(format!(
                "prescaler {prescaler} not in {ALLOWED_PRESCALERS:?}"
            )));
        }
        Ok(Self {
            frequency_hz,
            prescaler,
        })
    }

    pub fn frequency_hz(&self) -> u64 {
        self.frequency_hz
    }

    pub fn prescaler(&self) -> u32 {
        self.prescaler
    }

    pub fn with_prescaler(self, prescaler: u32) -> Result<Self> {
        Self::new(self.frequency_hz, prescaler)
    }
}

/// Seconds per system clock.
pub fn clock_period(cfg: &McuClockConfig) -> f64 {
    1.0 / cfg.frequency_hz as f64
}

/// Seconds per timer tick after the prescaler.
pub fn prescaled_period(cfg: &McuClockConfig) -> f64 {
    prescaled_period_for(cfg.frequency_hz, cfg.prescaler)
}

/// Same as [`prescaled_period`] for an arbitrary divisor, including ones the
/// device does not offer.
pub fn prescaled_period_for(frequency_hz: u64, divisor: u32) -> f64 {
    divisor as f64 * (1.0 / frequency_hz as f64)
}

fn ticks_for(frequency_hz: u64, prescaler: u32, interval_s: f64) -> f64 {
    interval_s / prescaled_period_for(frequency_hz, prescaler)
}

fn feasible(ticks: f64) -> bool {
    let n = ticks.round();
    (1.0..=256.0).contains(&n)
}

/// Compare value that makes a CTC timer fire every `interval_s` seconds.
///
/// Intervals that are not a whole number of ticks round to the nearest tick.
pub fn ocr_for_interval(cfg: &McuClockConfig, interval_s: f64) -> Result<u8> {
    let ticks = ticks_for(cfg.frequency_hz, cfg.prescaler, interval_s);
    if !ticks.is_finite() || !feasible(ticks) {
        let current = (cfg.prescaler as f64).log2();
        let suggested = ALLOWED_PRESCALERS
            .iter()
            .copied()
            .filter(|&p| p != cfg.prescaler)
            .filter(|&p| {
                let t = ticks_for(cfg.frequency_hz, p, interval_s);
                t.is_finite() && feasible(t)
            })
            .min_by(|&a, &b| {
                let da = ((a as f64).log2() - current).abs();
                let db = ((b as f64).log2() - current).abs();
                da.total_cmp(&db)
            });
        return Err(Error::OcrOutOfRange {
            ticks,
            prescaler: cfg.prescaler,
            suggested,
        });
    }
    Ok((ticks.round() as u16 - 1) as u8)
}

/// An 8-bit Timer/Counter in Clear-Timer-on-Compare mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimerCtc {
    /// Compare interrupts per millisecond (P).
    pub interrupt_count_per_ms: u32,
    pub ocr: u8,
    pub tcnt: u8,
}

impl TimerCtc {
    pub fn for_interval(cfg: &McuClockConfig, interval_s: f64) -> Result<Self> {
        let ocr = ocr_for_interval(cfg, interval_s)?;
        let actual = (ocr as f64 + 1.0) * prescaled_period(cfg);
        Ok(Self {
            interrupt_count_per_ms: (1e-3 / actual).round() as u32,
            ocr,
            tcnt: 0,
        })
    }

    /// Advances one prescaled tick; returns true when the compare interrupt fires.
    pub fn tick(&mut self) -> bool {
        if self.tcnt == self.ocr {
            self.tcnt = 0;
            true
        } else {
            self.tcnt += 1;
            false
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Operation {
    Enc,
    Dec,
}

impl Operation {
    pub const BOTH: [Operation; 2] = [Operation::Enc, Operation::Dec];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Enc => "enc",
            Self::Dec => "dec",
        }
    }
}

impl std::fmt::Display for Operation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitInterpretation {
    #[default]
    AsPrinted,
    Physical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRow {
    pub size: usize,
    pub enc_ms: f64,
    pub enc_cycles: f64,
    pub dec_ms: f64,
    pub dec_cycles: f64,
}

impl CalibrationRow {
    fn get(&self, op: Operation) -> (f64, f64) {
        match op {
            Operation::Enc => (self.enc_ms, self.enc_cycles),
            Operation::Dec => (self.dec_ms, self.dec_cycles),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub time_ms: f64,
    pub cycles: f64,
}

/// AES-128-CBC on a 20 MHz ATmega644p: (size, enc ms, enc cycles, dec ms, dec cycles).
const ATMEGA644P_ROWS: [(usize, f64, f64, f64, f64); 6] = [
    (16, 449.0, 8_980.0, 456.0, 9_120.0),
    (32, 898.0, 17_960.0, 912.0, 18_240.0),
    (64, 1_796.0, 35_920.0, 1_825.0, 36_500.0),
    (128, 3_592.0, 71_840.0, 3_649.0, 72_980.0),
    (256, 7_184.0, 143_680.0, 7_297.0, 145_940.0),
    (512, 14_368.0, 287_360.0, 14_592.0, 291_840.0),
];

const CYCLE_RATIO_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationTable {
    rows: Vec<CalibrationRow>,
    frequency_hz: u64,
    units: UnitInterpretation,
}

impl Default for CalibrationTable {
    fn default() -> Self {
        Self::atmega644p()
    }
}

impl CalibrationTable {
    /// The six measured AES-128-CBC rows at 20 MHz.
    pub fn atmega644p() -> Self {
        let rows = ATMEGA644P_ROWS
            .iter()
            .map(
                |&(size, enc_ms, enc_cycles, dec_ms, dec_cycles)| CalibrationRow {
                    size,
                    enc_ms,
                    enc_cycles,
                    dec_ms,
                    dec_cycles,
                },
            )
            .collect();
        Self::new(rows, DEFAULT_FREQUENCY_HZ).expect("built-in table is consistent")
    }

    /// Validates ordering, positivity and `cycles = time * f_MHz` on every row.
    pub fn new(rows: Vec<CalibrationRow>, frequency_hz: u64) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Calibration("no rows".into()));
        }
        if frequency_hz == 0 {
            return Err(Error::Calibration("frequency must be positive".into()));
        }
        let mhz = frequency_hz as f64 / 1e6;
        for (i, row) in rows.iter().enumerate() {
            if row.size == 0 || row.size % 16 != 0 {
                return Err(Error::Calibration(format!(
                    "row {i}: size {} is not a positive multiple of 16",
                    row.size
                )));
            }
            if i > 0 && row.size <= rows[i - 1].size {
                return Err(Error::Calibration(format!(
                    "row {i}: sizes must be strictly increasing"
                )));
            }
            for op in Operation::BOTH {
                let (ms, cycles) = row.get(op);
                if !(ms > 0.0 && cycles > 0.0) {
                    return Err(Error::Calibration(format!(
                        "row {i}: {op} values must be positive"
                    )));
                }
                let expected = ms * mhz;
                if ((cycles - expected) / expected).abs() > CYCLE_RATIO_TOLERANCE {
                    return Err(Error::Calibration(format!(
                        "row {i}: {op} cycles {cycles} != time {ms} x {mhz} MHz"
                    )));
                }
            }
        }
        Ok(Self {
            rows,
            frequency_hz,
            units: UnitInterpretation::AsPrinted,
        })
    }

    pub fn with_units(mut self, units: UnitInterpretation) -> Self {
        self.units = units;
        self
    }

    pub fn units(&self) -> UnitInterpretation {
        self.units
    }

    pub fn rows(&self) -> &[CalibrationRow] {
        &self.rows
    }

    pub fn frequency_hz(&self) -> u64 {
        self.frequency_hz
    }

    fn time_in_units(&self, raw: f64) -> f64 {
        match self.units {
            UnitInterpretation::AsPrinted => raw,
            UnitInterpretation::Physical => raw / 1000.0,
        }
    }

    /// Table row verbatim when `size` is calibrated, otherwise the linear model.
    pub fn predict(&self, size: usize, op: Operation) -> Result<Prediction> {
        check_size(size)?;
        if let Some(row) = self.rows.iter().find(|r| r.size == size) {
            let (ms, cycles) = row.get(op);
            return Ok(Prediction {
                time_ms: self.time_in_units(ms),
                cycles,
            });
        }
        self.predict_linear(size, op)
    }

    /// Time proportional to size, anchored at the smallest calibrated row.
    pub fn predict_linear(&self, size: usize, op: Operation) -> Result<Prediction> {
        check_size(size)?;
        let anchor = &self.rows[0];
        let (ms, cycles) = anchor.get(op);
        let raw_ms = ms * size as f64 / anchor.size as f64;
        Ok(Prediction {
            time_ms: self.time_in_units(raw_ms),
            cycles: raw_ms * (cycles / ms),
        })
    }

    pub fn read_csv<R: Read>(reader: R, frequency_hz: u64) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != CSV_HEADER {
            return Err(Error::Calibration(format!(
                "expected header {}, got {}",
                CSV_HEADER.join(","),
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let rows = rdr
            .deserialize::<CalibrationRow>()
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(rows, frequency_hz)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(CSV_HEADER)?;
        for r in &self.rows {
            wtr.write_record([
                r.size.to_string(),
                crate::hexfmt::number(r.enc_ms),
                crate::hexfmt::number(r.enc_cycles),
                crate::hexfmt::number(r.dec_ms),
                crate::hexfmt::number(r.dec_cycles),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

const CSV_HEADER: [&str; 5] = ["size", "enc_ms", "enc_cycles", "dec_ms", "dec_cycles"];

fn check_size(size: usize) -> Result<()> {
    if size == 0 || !size.is_multiple_of(16) {
        return Err(Error::DataSize(size));
    }
    Ok(())
}
