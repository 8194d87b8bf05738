//! Benchmarks for the gkzcc pipeline; see `benches/`.
