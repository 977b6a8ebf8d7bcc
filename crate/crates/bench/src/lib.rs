//! Criterion benchmarks for `warpcone-core`; see `benches/`.
