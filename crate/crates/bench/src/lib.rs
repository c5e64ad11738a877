//! Criterion benchmarks for sphmc live under `benches/`.
