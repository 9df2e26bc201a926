//! Host-side CBC timing next to the modeled MCU figures.
//!
//! Host wall-clock timings and modeled MCU figures are reported in separate
//! columns. The host is not an AVR and the two are never mixed.

use std::hint::black_box;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::aes::BLOCK_SIZE;
use crate::cbc::{CbcContext, Message, PaddingPolicy};
use crate::error::{Error, Result};
use crate::mcu::{CalibrationTable, Operation, UnitInterpretation};

pub const DEFAULT_SIZES: [usize; 6] = [16, 32, 64, 128, 256, 512];
pub const DEFAULT_KEY: &str = "000102030405060708090a0b0c0d0e0f";
pub const DEFAULT_IV: &str = "0f0e0d0c0b0a09080706050403020100";
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Minimum host time per cell when repetitions are chosen automatically.
pub const AUTO_CELL_BUDGET: Duration = Duration::from_millis(100);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub data_sizes: Vec<usize>,
    /// `None` picks a count that keeps every cell above [`AUTO_CELL_BUDGET`].
    pub repetitions: Option<usize>,
    pub key: String,
    pub iv: String,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            data_sizes: DEFAULT_SIZES.to_vec(),
            repetitions: None,
            key: DEFAULT_KEY.to_string(),
            iv: DEFAULT_IV.to_string(),
            seed: DEFAULT_SEED,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(bad) = self
            .data_sizes
            .iter()
            .find(|&&s| s == 0 || s % BLOCK_SIZE != 0)
        {
            return Err(Error::BenchConfig(format!(
                "size {bad} is not a positive multiple of 16"
            )));
        }
        if self.repetitions == Some(0) {
            return Err(Error::BenchConfig("repetitions must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchCell {
    pub size: usize,
    pub direction: Operation,
    /// Median host nanoseconds per message.
    pub host_ns: u64,
    pub block_ops: u64,
    pub model_ms: f64,
    pub model_cycles: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchMetadata {
    pub timestamp_unix_s: u64,
    pub data_sizes: Vec<usize>,
    pub repetitions: usize,
    pub key: String,
    pub iv: String,
    pub seed: u64,
    pub model_frequency_hz: u64,
    pub model_units: UnitInterpretation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub metadata: BenchMetadata,
    pub cells: Vec<BenchCell>,
}

impl BenchReport {
    pub fn cell(&self, size: usize, direction: Operation) -> Option<&BenchCell> {
        self.cells
            .iter()
            .find(|c| c.size == size && c.direction == direction)
    }
}

fn payload(rng: &mut ChaCha8Rng, size: usize) -> Vec<u8> {
    let mut buf = vec![0u8; size];
    rng.fill_bytes(&mut buf);
    buf
}

fn median(samples: &mut [u64]) -> u64 {
    samples.sort_unstable();
    let n = samples.len();
    if n % 2 == 1 {
        samples[n / 2]
    } else {
        (samples[n / 2 - 1] + samples[n / 2]) / 2
    }
}

fn auto_repetitions(ctx: &CbcContext, sizes: &[usize], seed: u64) -> Result<usize> {
    let Some(&smallest) = sizes.iter().min() else {
        return Ok(1);
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let msg = Message::new(payload(&mut rng, smallest));
    let probe = AUTO_CELL_BUDGET / 5;
    let start = Instant::now();
    let mut ops = 0u64;
    while start.elapsed() < probe {
        black_box(ctx.encrypt(black_box(&msg))?);
        ops += 1;
    }
    let per_op = start.elapsed().as_secs_f64() / ops as f64;
    Ok((AUTO_CELL_BUDGET.as_secs_f64() / per_op).ceil().max(1.0) as usize)
}

/// Runs CBC encrypt and decrypt over every configured size.
///
/// Every repetition draws a fresh seeded payload and checks that decryption
/// returns it; a mismatch aborts the run.
pub fn run_bench(cfg: &BenchConfig, table: &CalibrationTable) -> Result<BenchReport> {
    cfg.validate()?;
    let ctx = CbcContext::from_hex(&cfg.key, &cfg.iv)?;
    let reps = match cfg.repetitions {
        Some(n) => n,
        None => auto_repetitions(&ctx, &cfg.data_sizes, cfg.seed)?,
    };

    let mut cells = Vec::with_capacity(cfg.data_sizes.len() * 2);
    for &size in &cfg.data_sizes {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ size as u64);
        let mut enc_ns = Vec::with_capacity(reps);
        let mut dec_ns = Vec::with_capacity(reps);
        for repetition in 0..reps {
            let msg = Message::new(payload(&mut rng, size));

            let start = Instant::now();
            let ct = black_box(ctx.encrypt(black_box(&msg))?);
            enc_ns.push(start.elapsed().as_nanos() as u64);

            let start = Instant::now();
            let back = black_box(ctx.decrypt(black_box(&ct), PaddingPolicy::NoneRequired)?);
            dec_ns.push(start.elapsed().as_nanos() as u64);

            if back != msg {
                return Err(Error::RoundTrip { size, repetition });
            }
        }

        let block_ops = (size / BLOCK_SIZE) as u64 * reps as u64;
        for (direction, samples) in [(Operation::Enc, &mut enc_ns), (Operation::Dec, &mut dec_ns)] {
            let model = table.predict(size, direction)?;
            cells.push(BenchCell {
                size,
                direction,
                host_ns: median(samples),
                block_ops,
                model_ms: model.time_ms,
                model_cycles: model.cycles,
            });
        }
    }

    let timestamp_unix_s = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);

    Ok(BenchReport {
        metadata: BenchMetadata {
            timestamp_unix_s,
            data_sizes: cfg.data_sizes.clone(),
            repetitions: reps,
            key: cfg.key.clone(),
            iv: cfg.iv.clone(),
            seed: cfg.seed,
            model_frequency_hz: table.frequency_hz(),
            model_units: table.units(),
        },
        cells,
    })
}
