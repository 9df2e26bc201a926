use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid key length {0} octets (valid lengths: 16, 24 or 32 octets)")]
    InvalidKeyLength(usize),

    #[error("key schedule holds {actual} round keys, expected {expected}")]
    ScheduleMismatch { expected: usize, actual: usize },

    #[error("invalid {what} length {len} octets (expected {expected})")]
    InvalidLength {
        what: &'static str,
        len: usize,
        expected: &'static str,
    },

    #[error("malformed PKCS#7 padding")]
    BadPadding,

    #[error("invalid hex in {what}: {source}")]
    Hex {
        what: &'static str,
        #[source]
        source: hex::FromHexError,
    },

    #[error("invalid clock configuration: {0}")]
    ClockConfig(String),

    #[error("interval needs {ticks} timer ticks, outside the 8-bit range 1..=256 at prescaler {prescaler}{}", suggest_text(*.suggested))]
    OcrOutOfRange {
        ticks: f64,
        prescaler: u32,
        suggested: Option<u32>,
    },

    #[error("calibration table: {0}")]
    Calibration(String),

    #[error("data size {0} is not a positive multiple of 16 octets")]
    DataSize(usize),

    #[error("invalid bench configuration: {0}")]
    BenchConfig(String),

    #[error("round-trip mismatch at size {size}, repetition {repetition}")]
    RoundTrip { size: usize, repetition: usize },

    #[error("topology error: {0}")]
    Topology(String),

    #[error("integrity error: delivered plaintext differs from the original after {hops} hops")]
    Integrity { hops: usize },

    #[error("invalid delay parameters: {0}")]
    DelayParams(String),

    #[error("hop count must be at least 1")]
    HopCount,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn suggest_text(suggested: Option<u32>) -> String {
    match suggested {
        Some(p) => format!("; nearest feasible prescaler is {p}"),
        None => "; no supported prescaler can represent it".to_string(),
    }
}
