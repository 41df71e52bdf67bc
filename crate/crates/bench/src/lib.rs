//! Criterion benchmarks for the deciders live in `benches/`.
