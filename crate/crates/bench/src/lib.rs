//! Criterion benchmarks for the bogoent pipeline; see `benches/`.
