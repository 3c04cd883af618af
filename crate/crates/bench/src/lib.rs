//! Criterion benchmarks for `tqps-core`; see `benches/core.rs`.
