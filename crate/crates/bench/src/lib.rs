//! Criterion benchmarks for absorb-core live in `benches/`.
