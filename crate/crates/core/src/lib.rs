//! AES/Rijndael with CBC, an ATmega644p timing model, a host benchmark
//! harness, and a hop-by-hop encrypted relay delay simulator.
//!
//! The cipher is a readable reference implementation for performance
//! modeling. It is **not** hardened against timing side channels.

pub mod aes;
pub mod bench;
pub mod cbc;
pub mod error;
pub mod hexfmt;
pub mod hopnet;
pub mod mcu;
pub mod report;

pub use aes::{
    decrypt_block, encrypt_block, expand_key, AesParams, AesState, Block, CipherKey, Direction,
    KeySchedule, KeyVariant, SBoxTables, BLOCK_SIZE,
};
pub use bench::{run_bench, BenchCell, BenchConfig, BenchReport};
pub use cbc::{cbc_decrypt, cbc_encrypt, CbcContext, Message, PaddingPolicy};
pub use error::{Error, Result};
pub use hopnet::{
    hop_delay, relay_message, sweep, total_delay, DelayParams, HopChain, Interpretation, Node,
    SimReport,
};
pub use mcu::{
    clock_period, ocr_for_interval, prescaled_period, CalibrationTable, McuClockConfig, Operation,
    Prediction, TimerCtc, UnitInterpretation,
};
pub use report::Format;
