//! Criterion benchmarks for centrefall live under `benches/`.
