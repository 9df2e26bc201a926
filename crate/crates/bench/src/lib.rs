//! Criterion benchmarks for the cipher, CBC layer, and relay simulator live under `benches/`.
